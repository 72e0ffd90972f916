//! Lazy rooted Schreier graphs and the basic subgroup queries on them.

use std::sync::Arc;

use crate::vertex::VertexId;
use crate::word::{Letter, Word};

/// A deterministic rooted graph with one outgoing edge per letter at every
/// vertex. `neighbor(neighbor(v, l), l.inverse()) == v` must hold everywhere.
///
/// Graphs built by the percolation construction before surgery also carry
/// undirected `*` edges, exposed through [`SchreierOracle::star`]. Oracles are
/// logically immutable; `neighbor` is a pure function of its arguments.
///
/// `neighbor` may panic when handed a token that is not a vertex of this
/// graph.
pub trait SchreierOracle: Send + Sync {
    fn rank(&self) -> usize;
    fn root(&self) -> VertexId;
    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId;

    /// The other endpoint of the `*` edge at `v`, if any.
    fn star(&self, _v: &VertexId) -> Option<VertexId> {
        None
    }
}

pub type Oracle = Arc<dyn SchreierOracle>;

/// The Cayley graph of `F_r`, i.e. the Schreier graph of the trivial subgroup.
#[derive(Clone, Copy, Debug)]
pub struct Cayley {
    rank: usize,
}

impl Cayley {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1);
        Cayley { rank }
    }

    pub fn oracle(rank: usize) -> Oracle {
        Arc::new(Cayley::new(rank))
    }
}

impl SchreierOracle for Cayley {
    fn rank(&self) -> usize {
        self.rank
    }

    fn root(&self) -> VertexId {
        VertexId::Word(Word::identity())
    }

    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId {
        match v {
            VertexId::Word(w) => {
                let mut w = w.clone();
                w.push(l);
                VertexId::Word(w)
            }
            other => panic!("{other} is not a vertex of the Cayley graph"),
        }
    }
}

/// Same graph, different root.
pub struct Rebased {
    inner: Oracle,
    root: VertexId,
}

impl Rebased {
    pub fn new(inner: Oracle, root: VertexId) -> Self {
        Rebased { inner, root }
    }
}

impl SchreierOracle for Rebased {
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn root(&self) -> VertexId {
        self.root.clone()
    }

    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId {
        self.inner.neighbor(v, l)
    }

    fn star(&self, v: &VertexId) -> Option<VertexId> {
        self.inner.star(v)
    }
}

/// Follows `w` letter by letter from `start`. No reduction is applied, so
/// `walk` on an unreduced word and on its reduced form agree.
pub fn walk<'a, I>(o: &dyn SchreierOracle, start: &VertexId, letters: I) -> VertexId
where
    I: IntoIterator<Item = &'a Letter>,
{
    let mut v = start.clone();
    for &l in letters {
        v = o.neighbor(&v, l);
    }
    v
}

/// The vertex reached from the root along `w` (the coset `K w`).
pub fn trace(o: &dyn SchreierOracle, w: &Word) -> VertexId {
    walk(o, &o.root(), w.letters())
}

/// Membership `w ∈ K`: the walk along `w` returns to the root.
pub fn contains(o: &dyn SchreierOracle, w: &Word) -> bool {
    trace(o, w) == o.root()
}

/// The oracle of `g K g^-1`: same graph, root moved to `K g^-1`.
pub fn conjugate(o: &Oracle, g: &Word) -> Oracle {
    if g.is_empty() {
        return o.clone();
    }
    let root = trace(o.as_ref(), &g.inverse());
    Arc::new(Rebased::new(o.clone(), root))
}

/// Rebases `o` at an arbitrary vertex.
pub fn rebase(o: &Oracle, root: VertexId) -> Oracle {
    Arc::new(Rebased::new(o.clone(), root))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cayley_trace_is_the_word() {
        let o = Cayley::oracle(2);
        let w: Word = "s1s2".parse().unwrap();
        assert_eq!(trace(o.as_ref(), &w), VertexId::Word(w.clone()));
        assert!(contains(o.as_ref(), &Word::identity()));
        assert!(!contains(o.as_ref(), &w));
    }

    #[test]
    fn conjugate_by_identity_keeps_root() {
        let o = Cayley::oracle(2);
        let c = conjugate(&o, &Word::identity());
        assert_eq!(c.root(), o.root());
    }
}
