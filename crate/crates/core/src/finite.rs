//! Complete finite Schreier graphs (finite-index subgroups) stored as
//! permutations.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::oracle::{Oracle, SchreierOracle};
use crate::vertex::VertexId;
use crate::word::{Letter, Word};

/// A connected rooted graph in which every generator acts as a permutation of
/// the vertex set.
#[derive(Clone, Debug)]
pub struct FiniteSchreierGraph {
    root: u32,
    labels: Vec<VertexId>,
    fwd: Vec<Vec<u32>>,
    bwd: Vec<Vec<u32>>,
    index: HashMap<VertexId, u32>,
}

impl FiniteSchreierGraph {
    /// `perms[i][v]` is the endpoint of the `s_{i+1}` edge leaving `v`.
    /// Vertices are labelled `v0, v1, ...`.
    pub fn from_perms(perms: Vec<Vec<u32>>, root: u32) -> Result<Self> {
        let n = perms.first().map_or(0, |p| p.len());
        let labels = (0..n as u32).map(VertexId::Index).collect();
        Self::with_labels(labels, perms, root)
    }

    pub fn with_labels(labels: Vec<VertexId>, perms: Vec<Vec<u32>>, root: u32) -> Result<Self> {
        let n = labels.len();
        if perms.is_empty() {
            return Err(Error::Malformed("rank must be at least 1".into()));
        }
        if n == 0 || root as usize >= n {
            return Err(Error::Malformed("root outside the vertex set".into()));
        }
        let mut bwd = Vec::with_capacity(perms.len());
        for (i, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(Error::Malformed(format!(
                    "s{} has {} entries, expected {n}",
                    i + 1,
                    p.len()
                )));
            }
            let mut inv = vec![u32::MAX; n];
            for (v, &t) in p.iter().enumerate() {
                if t as usize >= n || inv[t as usize] != u32::MAX {
                    return Err(Error::Malformed(format!("s{} is not a bijection", i + 1)));
                }
                inv[t as usize] = v as u32;
            }
            bwd.push(inv);
        }
        let index: HashMap<VertexId, u32> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        if index.len() != n {
            return Err(Error::Malformed("duplicate vertex labels".into()));
        }
        let g = FiniteSchreierGraph {
            root,
            labels,
            fwd: perms,
            bwd,
            index,
        };
        if g.bfs_order(root).len() != n {
            return Err(Error::Malformed("graph is not connected".into()));
        }
        Ok(g)
    }

    /// The one-vertex graph with a loop for every generator (`K = F_r`).
    pub fn full(rank: usize) -> Self {
        Self::from_perms(vec![vec![0]; rank], 0).expect("valid")
    }

    pub fn rank(&self) -> usize {
        self.fwd.len()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root_index(&self) -> u32 {
        self.root
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn perm(&self, gen: usize) -> &[u32] {
        &self.fwd[gen]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<u32> {
        self.index.get(v).copied()
    }

    #[inline]
    pub fn step(&self, v: u32, l: Letter) -> u32 {
        if l.is_inverse() {
            self.bwd[l.gen()][v as usize]
        } else {
            self.fwd[l.gen()][v as usize]
        }
    }

    pub fn walk(&self, start: u32, w: &Word) -> u32 {
        w.letters().iter().fold(start, |v, &l| self.step(v, l))
    }

    /// Vertices in breadth-first order from `start`, letters tried in order.
    pub fn bfs_order(&self, start: u32) -> Vec<u32> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        seen[start as usize] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for l in Letter::all(self.rank()) {
                let t = self.step(v, l);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    queue.push_back(t);
                }
            }
        }
        order
    }

    /// Canonical code of the graph rooted at `start`: vertices renumbered in
    /// breadth-first order, then the forward permutations listed in that
    /// numbering. Equal codes ⟺ root-isomorphic.
    pub fn code_from(&self, start: u32) -> Vec<u32> {
        let order = self.bfs_order(start);
        let mut num = vec![0u32; self.len()];
        for (i, &v) in order.iter().enumerate() {
            num[v as usize] = i as u32;
        }
        let mut code = Vec::with_capacity(order.len() * self.rank() + 1);
        code.push(self.rank() as u32);
        for &v in &order {
            for g in 0..self.rank() {
                code.push(num[self.fwd[g][v as usize] as usize]);
            }
        }
        code
    }

    pub fn canonical_code(&self) -> Vec<u32> {
        self.code_from(self.root)
    }

    /// Parallel traversal from `a` in `self` and `b` in `other`. Succeeds iff
    /// the two rooted graphs are root-isomorphic; the isomorphism is unique.
    pub fn iso_from(&self, a: u32, other: &FiniteSchreierGraph, b: u32) -> bool {
        if self.len() != other.len() || self.rank() != other.rank() {
            return false;
        }
        let n = self.len();
        let mut map = vec![u32::MAX; n];
        let mut back = vec![u32::MAX; n];
        let mut queue = VecDeque::new();
        map[a as usize] = b;
        back[b as usize] = a;
        queue.push_back(a);
        while let Some(v) = queue.pop_front() {
            let w = map[v as usize];
            for g in 0..self.rank() {
                let (tv, tw) = (self.fwd[g][v as usize], other.fwd[g][w as usize]);
                match (map[tv as usize], back[tw as usize]) {
                    (u32::MAX, u32::MAX) => {
                        map[tv as usize] = tw;
                        back[tw as usize] = tv;
                        queue.push_back(tv);
                    }
                    (m, _) if m == tw => {}
                    _ => return false,
                }
                let (sv, sw) = (self.bwd[g][v as usize], other.bwd[g][w as usize]);
                match (map[sv as usize], back[sw as usize]) {
                    (u32::MAX, u32::MAX) => {
                        map[sv as usize] = sw;
                        back[sw as usize] = sv;
                        queue.push_back(sv);
                    }
                    (m, _) if m == sw => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// `|Aut|`: the number of vertices at which the rebased graph is
    /// root-isomorphic to the original. Equals `[N(K) : K]`.
    pub fn aut_count(&self) -> usize {
        (0..self.len() as u32)
            .filter(|&v| self.iso_from(self.root, self, v))
            .count()
    }

    /// True when the only automorphism is the identity, i.e. `N(K) = K`.
    pub fn is_asymmetric(&self) -> bool {
        (0..self.len() as u32).all(|v| v == self.root || !self.iso_from(self.root, self, v))
    }

    /// Same graph rooted at vertex index `v`.
    pub fn rebased(&self, v: u32) -> FiniteSchreierGraph {
        let mut g = self.clone();
        g.root = v;
        g
    }

    /// The graph of `g K g^-1`.
    pub fn conjugated(&self, g: &Word) -> FiniteSchreierGraph {
        self.rebased(self.walk(self.root, &g.inverse()))
    }

    /// Shortlex-minimal representative word of every vertex, indexed by vertex.
    pub fn shortlex_names(&self) -> Vec<Word> {
        let n = self.len();
        let mut names: Vec<Option<Word>> = vec![None; n];
        let mut queue = VecDeque::new();
        names[self.root as usize] = Some(Word::identity());
        queue.push_back(self.root);
        while let Some(v) = queue.pop_front() {
            let base = names[v as usize].clone().expect("visited");
            for l in Letter::all(self.rank()) {
                let t = self.step(v, l);
                if names[t as usize].is_none() {
                    let mut w = base.clone();
                    w.push(l);
                    names[t as usize] = Some(w);
                    queue.push_back(t);
                }
            }
        }
        names.into_iter().map(|w| w.expect("connected")).collect()
    }

    /// Relabels vertices by their shortlex-minimal coset representatives.
    pub fn with_shortlex_labels(&self) -> FiniteSchreierGraph {
        let labels = self
            .shortlex_names()
            .into_iter()
            .map(VertexId::Word)
            .collect();
        FiniteSchreierGraph::with_labels(labels, self.fwd.clone(), self.root).expect("same shape")
    }

    pub fn into_oracle(self) -> Oracle {
        Arc::new(self)
    }
}

impl SchreierOracle for FiniteSchreierGraph {
    fn rank(&self) -> usize {
        self.fwd.len()
    }

    fn root(&self) -> VertexId {
        self.labels[self.root as usize].clone()
    }

    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId {
        let i = self
            .index_of(v)
            .unwrap_or_else(|| panic!("{v} is not a vertex of this finite graph"));
        self.labels[self.step(i, l) as usize].clone()
    }
}

/// The two-vertex graph on `{A, B}`: `s1` swaps them, every other generator
/// fixes both. Rooted at `A`.
pub fn index_two(rank: usize) -> FiniteSchreierGraph {
    let mut perms = vec![vec![1, 0]];
    perms.extend((1..rank).map(|_| vec![0, 1]));
    FiniteSchreierGraph::with_labels(vec![VertexId::named("A"), VertexId::named("B")], perms, 0)
        .expect("valid")
}

/// `s1` acts as an `n`-cycle, the other generators trivially.
pub fn cyclic(rank: usize, n: u32) -> FiniteSchreierGraph {
    let mut perms = vec![(0..n).map(|v| (v + 1) % n).collect::<Vec<_>>()];
    perms.extend((1..rank).map(|_| (0..n).collect::<Vec<_>>()));
    FiniteSchreierGraph::from_perms(perms, 0).expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{contains, trace};

    #[test]
    fn index_two_traces() {
        let g = index_two(2).into_oracle();
        let s1: Word = "s1".parse().unwrap();
        assert_eq!(trace(g.as_ref(), &s1), VertexId::named("B"));
        assert_eq!(
            trace(g.as_ref(), &"s1s2s1".parse().unwrap()),
            VertexId::named("A")
        );
        assert!(!contains(g.as_ref(), &s1));
        assert!(contains(g.as_ref(), &"s1s1".parse().unwrap()));
    }

    #[test]
    fn aut_counts() {
        assert_eq!(index_two(2).aut_count(), 2);
        // Z/5 is a normal quotient: every rebasing is isomorphic.
        assert_eq!(cyclic(2, 5).aut_count(), 5);
        // s1 a 3-cycle, s2 fixing only vertex 0: loop labels break symmetry.
        let g = FiniteSchreierGraph::from_perms(vec![vec![1, 2, 0], vec![0, 2, 1]], 0).unwrap();
        assert_eq!(g.aut_count(), 1);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(FiniteSchreierGraph::from_perms(vec![vec![0, 0]], 0).is_err());
        assert!(FiniteSchreierGraph::from_perms(vec![vec![0, 1]], 0).is_err());
    }

    #[test]
    fn codes_match_traversal() {
        let g = FiniteSchreierGraph::from_perms(vec![vec![1, 2, 0, 4, 3], vec![3, 4, 2, 0, 1]], 0)
            .unwrap();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(g.code_from(a) == g.code_from(b), g.iso_from(a, &g, b));
            }
        }
    }

    #[test]
    fn shortlex_names_are_minimal() {
        let g = cyclic(2, 4);
        let names: Vec<String> = g.shortlex_names().iter().map(|w| w.to_string()).collect();
        assert_eq!(names, ["e", "s1", "s1s1", "s1^-1"]);
    }
}
