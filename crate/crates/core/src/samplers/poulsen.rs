//! Percolation with attached copies, followed by `s1` surgery along the
//! attachment edges.
//!
//! `Γ_0` is a sample from the base law. Every vertex of a copy that does not
//! already carry a `*` edge is retained independently with probability `p`;
//! each retained vertex `x` gets a fresh copy of the base law whose root is
//! joined to `x` by a `*` edge. The process repeats inside the new copies.
//! The emitted graph replaces, for every `*` edge `{v, w}`, the edges
//! `(v, v s1)` and `(w, w s1)` by `(v, w s1)` and `(w, v s1)`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::keyed::{subseed, vertex_seed, SeededKey};
use crate::oracle::{Oracle, SchreierOracle};
use crate::prob::Prob;
use crate::samplers::law::{Law, SubgroupLaw};
use crate::vertex::VertexId;
use crate::word::Letter;

/// The unsurgered graph `Γ`, with its `*` edges.
pub struct PoulsenGamma {
    base: Law,
    p: Prob,
    seed: u64,
    copies: Mutex<HashMap<Arc<[VertexId]>, Oracle>>,
}

impl PoulsenGamma {
    pub fn new(base: Law, p: Prob, seed: u64) -> Self {
        PoulsenGamma {
            base,
            p,
            seed,
            copies: Mutex::new(HashMap::new()),
        }
    }

    /// The copy reached through the attachment points `path`.
    fn copy(&self, path: &Arc<[VertexId]>) -> Oracle {
        if let Some(o) = self.copies.lock().expect("poisoned").get(path) {
            return o.clone();
        }
        let seed = match path.split_last() {
            None => subseed(self.seed, "level0", 0),
            Some((x, parent)) => {
                let at = VertexId::Copy {
                    path: parent.into(),
                    inner: Arc::new(x.clone()),
                };
                vertex_seed(self.seed, "attach", &at)
            }
        };
        let o = self.base.sample(seed);
        self.copies
            .lock()
            .expect("poisoned")
            .entry(path.clone())
            .or_insert(o)
            .clone()
    }

    fn split(v: &VertexId) -> (&Arc<[VertexId]>, &Arc<VertexId>) {
        match v {
            VertexId::Copy { path, inner } => (path, inner),
            other => panic!("{other} is not a vertex of the percolation graph"),
        }
    }

    pub fn is_percolated(&self, v: &VertexId) -> bool {
        let (path, inner) = Self::split(v);
        if !path.is_empty() && **inner == self.copy(path).root() {
            return false;
        }
        self.p
            .bernoulli(SeededKey::new(self.seed, "percolate", v).draw()[0])
    }

    /// Attachment level of a vertex (0 for `Γ_0`).
    pub fn level(v: &VertexId) -> usize {
        Self::split(v).0.len()
    }
}

impl SchreierOracle for PoulsenGamma {
    fn rank(&self) -> usize {
        self.base.rank()
    }

    fn root(&self) -> VertexId {
        let path: Arc<[VertexId]> = Arc::from(Vec::new());
        let inner = self.copy(&path).root();
        VertexId::Copy {
            path,
            inner: Arc::new(inner),
        }
    }

    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId {
        let (path, inner) = Self::split(v);
        VertexId::Copy {
            path: path.clone(),
            inner: Arc::new(self.copy(path).neighbor(inner, l)),
        }
    }

    fn star(&self, v: &VertexId) -> Option<VertexId> {
        let (path, inner) = Self::split(v);
        if let Some((x, parent)) = path.split_last() {
            if **inner == self.copy(path).root() {
                return Some(VertexId::Copy {
                    path: parent.into(),
                    inner: Arc::new(x.clone()),
                });
            }
        }
        if !self.is_percolated(v) {
            return None;
        }
        let child: Arc<[VertexId]> = path.iter().cloned().chain([(**inner).clone()]).collect();
        let root = self.copy(&child).root();
        Some(VertexId::Copy {
            path: child,
            inner: Arc::new(root),
        })
    }
}

/// The surgered graph `φ(Γ)`: a Schreier graph without `*` edges.
pub struct PoulsenOracle {
    gamma: PoulsenGamma,
}

impl PoulsenOracle {
    pub fn new(base: Law, p: Prob, seed: u64) -> Self {
        PoulsenOracle {
            gamma: PoulsenGamma::new(base, p, seed),
        }
    }

    pub fn gamma(&self) -> &PoulsenGamma {
        &self.gamma
    }
}

impl SchreierOracle for PoulsenOracle {
    fn rank(&self) -> usize {
        self.gamma.rank()
    }

    fn root(&self) -> VertexId {
        self.gamma.root()
    }

    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId {
        let g = &self.gamma;
        match (l.gen(), l.is_inverse()) {
            (0, false) => match g.star(v) {
                Some(w) => g.neighbor(&w, l),
                None => g.neighbor(v, l),
            },
            (0, true) => {
                let t = g.neighbor(v, l);
                g.star(&t).unwrap_or(t)
            }
            _ => g.neighbor(v, l),
        }
    }
}

/// Law of `φ(Γ)` over a base law.
pub struct PoulsenLaw {
    base: Law,
    p: Prob,
}

impl PoulsenLaw {
    pub fn new(base: Law, p: Prob) -> Self {
        PoulsenLaw { base, p }
    }
}

impl SubgroupLaw for PoulsenLaw {
    fn rank(&self) -> usize {
        self.base.rank()
    }

    fn sample(&self, seed: u64) -> Oracle {
        Arc::new(PoulsenOracle::new(
            self.base.clone(),
            self.p,
            subseed(seed, "poulsen", 0),
        ))
    }

    fn describe(&self) -> String {
        format!("poulsen(p={}):{}", self.p, self.base.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{ball, DEFAULT_BUDGET};
    use crate::oracle::{trace, Cayley};
    use crate::samplers::law::Dirac;
    use crate::word::Word;

    fn trivial() -> Law {
        Arc::new(Dirac::new(Cayley::oracle(2), "trivial"))
    }

    #[test]
    fn stars_are_symmetric_and_single() {
        let g = PoulsenGamma::new(trivial(), Prob::new(1, 2).unwrap(), 7);
        let b = ball(&g, 4, DEFAULT_BUDGET).unwrap();
        b.validate().unwrap();
        assert!(b.has_stars());
        for v in b.labels() {
            if let Some(w) = g.star(v) {
                assert_eq!(g.star(&w).as_ref(), Some(v));
                assert_ne!(PoulsenGamma::level(v), PoulsenGamma::level(&w));
            }
        }
    }

    #[test]
    fn surgered_balls_are_schreier() {
        for seed in 0..10 {
            let o = PoulsenOracle::new(trivial(), Prob::new(1, 3).unwrap(), seed);
            let b = ball(&o, 5, DEFAULT_BUDGET).unwrap();
            b.validate().unwrap();
            assert!(!b.has_stars());
        }
    }

    #[test]
    fn s1_crosses_at_a_star() {
        let o = PoulsenOracle::new(trivial(), Prob::new(1, 2).unwrap(), 3);
        let g = o.gamma();
        let root = g.root();
        let w = Word::from_letters([Letter::pos(0)]);
        let t = trace(&o, &w);
        match g.star(&root) {
            Some(partner) => assert_eq!(t, g.neighbor(&partner, Letter::pos(0))),
            None => assert_eq!(t, g.neighbor(&root, Letter::pos(0))),
        }
    }

    #[test]
    fn attachment_levels_grow_with_radius_only() {
        let o = PoulsenOracle::new(trivial(), Prob::new(1, 2).unwrap(), 11);
        for r in 0..4 {
            let b = ball(&o, r, DEFAULT_BUDGET).unwrap();
            assert!(b.labels().iter().all(|v| PoulsenGamma::level(v) <= r));
        }
    }
}
