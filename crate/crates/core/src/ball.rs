//! Explicit finite views of rooted labelled graphs: radius-`R` balls, possibly
//! carrying undirected `*` edges.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::finite::FiniteSchreierGraph;
use crate::oracle::SchreierOracle;
use crate::vertex::VertexId;
use crate::word::Letter;

/// Default cap on the number of vertices a single exploration may visit.
pub const DEFAULT_BUDGET: usize = 1_000_000;

const NONE: u32 = u32::MAX;

/// The ball of radius `radius` around the root: every vertex within graph
/// distance `radius` and every edge between two such vertices.
///
/// Vertex 0 is the root. A vertex is flagged as boundary when it lies at
/// distance exactly `radius` and at least one of its edges leaves the ball.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallView {
    rank: usize,
    radius: usize,
    labels: Vec<VertexId>,
    dist: Vec<usize>,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
    star: Vec<u32>,
    boundary: Vec<bool>,
}

impl BallView {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn root(&self) -> &VertexId {
        &self.labels[0]
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &VertexId {
        &self.labels[v as usize]
    }

    pub fn distance(&self, v: u32) -> usize {
        self.dist[v as usize]
    }

    pub fn is_boundary(&self, v: u32) -> bool {
        self.boundary[v as usize]
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary.iter().any(|&b| b)
    }

    pub fn has_stars(&self) -> bool {
        self.star.iter().any(|&s| s != NONE)
    }

    /// Neighbour along `l` inside the ball.
    pub fn step(&self, v: u32, l: Letter) -> Option<u32> {
        let t = if l.is_inverse() {
            self.inn[v as usize][l.gen()]
        } else {
            self.out[v as usize][l.gen()]
        };
        (t != NONE).then_some(t)
    }

    pub fn star_of(&self, v: u32) -> Option<u32> {
        let t = self.star[v as usize];
        (t != NONE).then_some(t)
    }

    /// Directed labelled edges `(src, gen, dst)`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, usize, u32)> + '_ {
        self.out.iter().enumerate().flat_map(|(v, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &t)| t != NONE)
                .map(move |(g, &t)| (v as u32, g, t))
        })
    }

    /// Undirected `*` edges, each reported once with `a <= b`.
    pub fn stars(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.star
            .iter()
            .enumerate()
            .filter(|(v, &t)| t != NONE && *v as u32 <= t)
            .map(|(v, &t)| (v as u32, t))
    }

    pub fn index_of(&self, id: &VertexId) -> Option<u32> {
        self.labels.iter().position(|l| l == id).map(|i| i as u32)
    }

    /// Assembles a view from raw parts and puts it in canonical form: vertices
    /// renumbered breadth-first from `root`, distances recomputed, and boundary
    /// flags taken from `boundary`. Runs [`BallView::validate`].
    pub fn from_parts(
        rank: usize,
        radius: Option<usize>,
        labels: Vec<VertexId>,
        root: u32,
        edges: &[(u32, usize, u32)],
        stars: &[(u32, u32)],
        boundary: &[u32],
    ) -> Result<BallView> {
        let n = labels.len();
        let mut out = vec![vec![NONE; rank]; n];
        let mut inn = vec![vec![NONE; rank]; n];
        let mut star = vec![NONE; n];
        for &(a, g, b) in edges {
            if g >= rank {
                return Err(Error::Malformed(format!("label s{} exceeds rank", g + 1)));
            }
            if out[a as usize][g] != NONE {
                return Err(Error::Malformed(format!(
                    "two s{} edges leave {}",
                    g + 1,
                    labels[a as usize]
                )));
            }
            if inn[b as usize][g] != NONE {
                return Err(Error::Malformed(format!(
                    "two s{} edges enter {}",
                    g + 1,
                    labels[b as usize]
                )));
            }
            out[a as usize][g] = b;
            inn[b as usize][g] = a;
        }
        for &(a, b) in stars {
            if star[a as usize] != NONE || star[b as usize] != NONE || a == b {
                return Err(Error::Malformed(format!(
                    "vertex {} carries more than one * edge",
                    labels[if star[a as usize] != NONE { a } else { b } as usize]
                )));
            }
            star[a as usize] = b;
            star[b as usize] = a;
        }
        let mut flags = vec![false; n];
        for &b in boundary {
            flags[b as usize] = true;
        }
        let raw = BallView {
            rank,
            radius: 0,
            labels,
            dist: vec![0; n],
            out,
            inn,
            star,
            boundary: flags,
        };
        let mut view = raw.renumbered(root)?;
        view.radius = match radius {
            Some(r) => r,
            None => view.dist.iter().copied().max().unwrap_or(0),
        };
        view.validate()?;
        Ok(view)
    }

    /// Breadth-first renumbering from `root` (letters in order, then `*`).
    fn renumbered(&self, root: u32) -> Result<BallView> {
        let n = self.len();
        let mut num = vec![NONE; n];
        let mut order = Vec::with_capacity(n);
        let mut dist = vec![0usize; n];
        let mut queue = VecDeque::new();
        num[root as usize] = 0;
        order.push(root);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let nexts = Letter::all(self.rank)
                .filter_map(|l| self.step(v, l))
                .chain(self.star_of(v));
            for t in nexts {
                if num[t as usize] == NONE {
                    num[t as usize] = order.len() as u32;
                    dist[t as usize] = dist[v as usize] + 1;
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Malformed("graph is not connected".into()));
        }
        let map = |t: u32| if t == NONE { NONE } else { num[t as usize] };
        Ok(BallView {
            rank: self.rank,
            radius: self.radius,
            labels: order.iter().map(|&v| self.labels[v as usize].clone()).collect(),
            dist: order.iter().map(|&v| dist[v as usize]).collect(),
            out: order
                .iter()
                .map(|&v| self.out[v as usize].iter().map(|&t| map(t)).collect())
                .collect(),
            inn: order
                .iter()
                .map(|&v| self.inn[v as usize].iter().map(|&t| map(t)).collect())
                .collect(),
            star: order.iter().map(|&v| map(self.star[v as usize])).collect(),
            boundary: order.iter().map(|&v| self.boundary[v as usize]).collect(),
        })
    }

    /// The one-in/one-out check: every non-boundary vertex has exactly one
    /// outgoing and one incoming edge per generator; no vertex has more than
    /// one; `*` edges pair vertices symmetrically; every vertex lies within
    /// `radius` of the root and boundary vertices sit at distance `radius`.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        let mut in_count = vec![vec![0u32; self.rank]; n];
        for (v, row) in self.out.iter().enumerate() {
            for (g, &t) in row.iter().enumerate() {
                if t == NONE {
                    continue;
                }
                if t as usize >= n || self.inn[t as usize][g] != v as u32 {
                    return Err(Error::Malformed(format!(
                        "s{} edge out of {} has no matching in-edge",
                        g + 1,
                        self.labels[v]
                    )));
                }
                in_count[t as usize][g] += 1;
            }
        }
        for v in 0..n {
            if self.dist[v] > self.radius {
                return Err(Error::Malformed(format!(
                    "{} lies beyond radius {}",
                    self.labels[v], self.radius
                )));
            }
            if self.boundary[v] && self.dist[v] != self.radius {
                return Err(Error::Malformed(format!(
                    "boundary vertex {} is not at distance {}",
                    self.labels[v], self.radius
                )));
            }
            let s = self.star[v];
            if s != NONE && (s as usize >= n || self.star[s as usize] != v as u32) {
                return Err(Error::Malformed(format!(
                    "* edge at {} is not symmetric",
                    self.labels[v]
                )));
            }
            for g in 0..self.rank {
                let ins = in_count[v][g];
                let has_out = self.out[v][g] != NONE;
                if ins > 1 {
                    return Err(Error::Malformed(format!(
                        "{} has {ins} incoming s{} edges",
                        self.labels[v],
                        g + 1
                    )));
                }
                if !self.boundary[v] && (ins != 1 || !has_out) {
                    return Err(Error::Malformed(format!(
                        "interior vertex {} lacks an s{} edge",
                        self.labels[v],
                        g + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Canonical code: breadth-first numbering from the root, then for every
    /// vertex its neighbour numbers per letter and across `*`, and its boundary
    /// flag. Two views are root-isomorphic iff their codes agree.
    pub fn canonical_code(&self) -> Vec<u32> {
        let v = self.renumbered(0).expect("connected view");
        let mut code = Vec::with_capacity(2 + v.len() * (2 * v.rank + 2));
        code.push(v.rank as u32);
        code.push(v.radius as u32);
        for i in 0..v.len() {
            code.extend(v.out[i].iter().copied());
            code.extend(v.inn[i].iter().copied());
            code.push(v.star[i]);
            code.push(v.boundary[i] as u32);
        }
        code
    }

    /// True when the view is a whole finite Schreier graph.
    pub fn is_complete(&self) -> bool {
        !self.has_boundary() && !self.has_stars()
    }

    pub fn to_finite(&self) -> Result<FiniteSchreierGraph> {
        if !self.is_complete() {
            return Err(Error::Malformed(
                "view has boundary vertices or * edges; not a finite Schreier graph".into(),
            ));
        }
        let perms = (0..self.rank)
            .map(|g| self.out.iter().map(|row| row[g]).collect())
            .collect();
        FiniteSchreierGraph::with_labels(self.labels.clone(), perms, 0)
    }

    /// The whole finite graph as a view; the radius is the root's eccentricity.
    pub fn from_finite(g: &FiniteSchreierGraph) -> BallView {
        let n = g.len();
        let rank = g.rank();
        let out = (0..n as u32)
            .map(|v| (0..rank).map(|i| g.perm(i)[v as usize]).collect())
            .collect();
        let inn = (0..n as u32)
            .map(|v| (0..rank).map(|i| g.step(v, Letter::neg(i))).collect())
            .collect();
        let raw = BallView {
            rank,
            radius: 0,
            labels: g.labels().to_vec(),
            dist: vec![0; n],
            out,
            inn,
            star: vec![NONE; n],
            boundary: vec![false; n],
        };
        let mut view = raw.renumbered(g.root_index()).expect("connected");
        view.radius = view.dist.iter().copied().max().unwrap_or(0);
        view
    }

    /// Drops the `*` edges for which `keep` returns false.
    pub fn retain_stars(&mut self, mut keep: impl FnMut(&BallView, u32, u32) -> bool) {
        let pairs: Vec<(u32, u32)> = self.stars().collect();
        for (a, b) in pairs {
            if !keep(self, a, b) {
                self.star[a as usize] = NONE;
                self.star[b as usize] = NONE;
            }
        }
    }

    /// Raw edge surgery used by the percolation construction: exchanges the
    /// `s1` successors of `a` and `b`.
    pub(crate) fn swap_s1_targets(&mut self, a: u32, b: u32) {
        let (ta, tb) = (self.out[a as usize][0], self.out[b as usize][0]);
        self.out[a as usize][0] = tb;
        self.out[b as usize][0] = ta;
        self.inn[tb as usize][0] = a;
        self.inn[ta as usize][0] = b;
    }

    pub(crate) fn set_star(&mut self, a: u32, b: u32) {
        self.star[a as usize] = b;
        self.star[b as usize] = a;
    }

    pub(crate) fn clear_star(&mut self, a: u32) {
        let b = self.star[a as usize];
        self.star[a as usize] = NONE;
        if b != NONE {
            self.star[b as usize] = NONE;
        }
    }
}

/// Two views are root-isomorphic when a parallel traversal from both roots
/// matches every labelled edge, `*` edge and boundary flag.
pub fn root_isomorphic(a: &BallView, b: &BallView) -> bool {
    if a.rank != b.rank || a.radius != b.radius || a.len() != b.len() {
        return false;
    }
    let n = a.len();
    let mut map = vec![NONE; n];
    let mut back = vec![NONE; n];
    let mut queue = VecDeque::new();
    map[0] = 0;
    back[0] = 0;
    queue.push_back(0u32);
    while let Some(v) = queue.pop_front() {
        let w = map[v as usize];
        if a.boundary[v as usize] != b.boundary[w as usize] {
            return false;
        }
        let pairs = Letter::all(a.rank)
            .map(|l| (a.step(v, l), b.step(w, l)))
            .chain(std::iter::once((a.star_of(v), b.star_of(w))));
        for pair in pairs {
            match pair {
                (None, None) => {}
                (Some(tv), Some(tw)) => match (map[tv as usize], back[tw as usize]) {
                    (NONE, NONE) => {
                        map[tv as usize] = tw;
                        back[tw as usize] = tv;
                        queue.push_back(tv);
                    }
                    (m, _) if m == tw => {}
                    _ => return false,
                },
                _ => return false,
            }
        }
    }
    true
}

/// Breadth-first exploration of `o` to depth `radius`, checking the
/// permutation property at every explored vertex.
pub fn ball(o: &dyn SchreierOracle, radius: usize, budget: usize) -> Result<BallView> {
    let rank = o.rank();
    let root = o.root();
    let mut index: HashMap<VertexId, u32> = HashMap::new();
    let mut labels = vec![root.clone()];
    let mut dist = vec![0usize];
    index.insert(root, 0);
    // Neighbour tokens per vertex and letter, plus `*`.
    let mut nbrs: Vec<Vec<VertexId>> = Vec::new();
    let mut stars: Vec<Option<VertexId>> = Vec::new();
    let mut head = 0usize;
    while head < labels.len() {
        let v = labels[head].clone();
        let d = dist[head];
        let mut row = Vec::with_capacity(2 * rank);
        for l in Letter::all(rank) {
            let t = o.neighbor(&v, l);
            if o.neighbor(&t, l.inverse()) != v {
                return Err(Error::PermutationViolation {
                    vertex: v.to_string(),
                    letter: l.to_string(),
                });
            }
            if d < radius && !index.contains_key(&t) {
                if labels.len() >= budget {
                    return Err(Error::Budget { limit: budget });
                }
                index.insert(t.clone(), labels.len() as u32);
                labels.push(t.clone());
                dist.push(d + 1);
            }
            row.push(t);
        }
        let s = o.star(&v);
        if let Some(t) = &s {
            if o.star(t).as_ref() != Some(&v) {
                return Err(Error::PermutationViolation {
                    vertex: v.to_string(),
                    letter: "*".into(),
                });
            }
            if d < radius && !index.contains_key(t) {
                if labels.len() >= budget {
                    return Err(Error::Budget { limit: budget });
                }
                index.insert(t.clone(), labels.len() as u32);
                labels.push(t.clone());
                dist.push(d + 1);
            }
        }
        nbrs.push(row);
        stars.push(s);
        head += 1;
    }
    let n = labels.len();
    let mut out = vec![vec![NONE; rank]; n];
    let mut inn = vec![vec![NONE; rank]; n];
    let mut star = vec![NONE; n];
    let mut boundary = vec![false; n];
    for v in 0..n {
        let mut leaves = false;
        for (code, t) in nbrs[v].iter().enumerate() {
            let l = Letter::from_code(code);
            match index.get(t) {
                Some(&ti) => {
                    if l.is_inverse() {
                        inn[v][l.gen()] = ti;
                    } else {
                        out[v][l.gen()] = ti;
                    }
                }
                None => leaves = true,
            }
        }
        if let Some(t) = &stars[v] {
            match index.get(t) {
                Some(&ti) => star[v] = ti,
                None => leaves = true,
            }
        }
        boundary[v] = leaves;
    }
    Ok(BallView {
        rank,
        radius,
        labels,
        dist,
        out,
        inn,
        star,
        boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{cyclic, index_two};
    use crate::oracle::Cayley;

    #[test]
    fn cayley_ball_sizes() {
        let b = ball(&Cayley::new(2), 1, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.len(), 5);
        assert_eq!(b.edges().filter(|&(s, _, _)| s == 0).count(), 2);
        assert_eq!(
            Letter::all(2).filter(|&l| b.step(0, l).is_some()).count(),
            4
        );
        b.validate().unwrap();
        assert_eq!(ball(&Cayley::new(2), 3, DEFAULT_BUDGET).unwrap().len(), 53);
    }

    #[test]
    fn radius_zero_keeps_root_loops() {
        let b = ball(&index_two(2), 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.step(0, Letter::pos(1)), Some(0));
        assert!(b.is_boundary(0));
        let c = ball(&Cayley::new(2), 0, DEFAULT_BUDGET).unwrap();
        assert_eq!(c.edges().count(), 0);
    }

    #[test]
    fn finite_graph_saturates() {
        let b = ball(&index_two(2), 10, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.len(), 2);
        assert!(b.is_complete());
        assert_eq!(b.to_finite().unwrap().aut_count(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let err = ball(&Cayley::new(2), 6, 100).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn rebasings_of_a_transitive_graph_are_isomorphic() {
        let g = cyclic(2, 6);
        let a = ball(&g.rebased(0), 3, DEFAULT_BUDGET).unwrap();
        let b = ball(&g.rebased(4), 3, DEFAULT_BUDGET).unwrap();
        assert!(root_isomorphic(&a, &b));
        assert_eq!(a.canonical_code(), b.canonical_code());
        let c = ball(&Cayley::new(2), 2, DEFAULT_BUDGET).unwrap();
        let d = ball(&index_two(2), 2, DEFAULT_BUDGET).unwrap();
        assert!(!root_isomorphic(&c, &d));
    }

    #[test]
    fn detects_duplicate_edges() {
        let labels = vec![VertexId::Index(0), VertexId::Index(1)];
        let err = BallView::from_parts(1, None, labels, 0, &[(0, 0, 1), (0, 0, 0)], &[], &[]);
        assert!(err.is_err());
    }
}
