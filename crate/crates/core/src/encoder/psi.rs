//! The encoding of configurations as subgroups, and its inverse.
//!
//! The graph of `Ψ(x)` is the Cayley graph of `F_r` with every edge
//! `(g, g s1)` subdivided by a vertex `Y(g,0)`, from which an `s2`-cycle
//! `Y(g,0) → Y(g,1) → … → Y(g,x(g)-1) → Y(g,0)` hangs. The new vertices other
//! than `Y(g,0)` carry `s1` loops, and all of them carry `s_i` loops for
//! `i >= 3`.

use std::collections::{BTreeMap, HashSet};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::oracle::SchreierOracle;
use crate::vertex::VertexId;
use crate::word::{ball_words, Letter, Word};

use super::subshift::SubshiftPoint;

/// `s1 ↦ s1²`, `s_i ↦ s_i` for `i >= 2`.
pub fn phi(w: &Word) -> Word {
    let mut out = Word::identity();
    for &l in w.letters() {
        out.push(l);
        if l.gen() == 0 {
            out.push(l);
        }
    }
    out
}

/// Inverse of [`phi`] on its image `⟨s1², s2, …, s_r⟩`.
pub fn phi_inverse(w: &Word) -> Result<Word> {
    let mut out = Word::identity();
    let ls = w.letters();
    let mut i = 0;
    while i < ls.len() {
        let l = ls[i];
        if l.gen() != 0 {
            out.push(l);
            i += 1;
            continue;
        }
        let run = ls[i..].iter().take_while(|&&m| m == l).count();
        if run % 2 == 1 {
            return Err(Error::NotInImage(format!("{w} has an odd run of {l}")));
        }
        for _ in 0..run / 2 {
            out.push(l);
        }
        i += run;
    }
    Ok(out)
}

/// Lazy oracle for `Ψ(x)`, rooted at the Cayley vertex of the identity.
pub struct PsiOracle {
    x: SubshiftPoint,
}

impl PsiOracle {
    pub fn new(x: SubshiftPoint) -> Self {
        PsiOracle { x }
    }

    pub fn point(&self) -> &SubshiftPoint {
        &self.x
    }

    fn split(v: &VertexId) -> (&Word, Option<u32>) {
        match v {
            VertexId::Encoded { g, cycle } => (g, *cycle),
            other => panic!("{other} is not a vertex of an encoded graph"),
        }
    }
}

fn cayley(g: Word) -> VertexId {
    VertexId::Encoded { g, cycle: None }
}

fn cycle(g: Word, j: u32) -> VertexId {
    VertexId::Encoded { g, cycle: Some(j) }
}

impl SchreierOracle for PsiOracle {
    fn rank(&self) -> usize {
        self.x.rank()
    }

    fn root(&self) -> VertexId {
        cayley(Word::identity())
    }

    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId {
        let (g, j) = Self::split(v);
        match (j, l.gen(), l.is_inverse()) {
            (None, 0, false) => cycle(g.clone(), 0),
            (None, 0, true) => cycle(g.mul(&Word::letter(l)), 0),
            (None, _, _) => cayley(g.mul(&Word::letter(l))),
            (Some(0), 0, false) => cayley(g.mul(&Word::letter(l))),
            (Some(0), 0, true) => cayley(g.clone()),
            (Some(_), 0, _) => v.clone(),
            (Some(j), 1, inv) => {
                let len = self.x.value(g);
                let k = if inv { (j + len - 1) % len } else { (j + 1) % len };
                cycle(g.clone(), k)
            }
            (Some(_), _, _) => v.clone(),
        }
    }
}

/// Reads `x(g)` for `|g| <= radius - 2` off a graph in `Z`: the length of the
/// `s2`-cycle at the vertex subdividing `(g, g s1)`. `step` returns `None`
/// when a walk leaves the known part of the graph. Every vertex met must be
/// new: in an encoded graph the Cayley vertices, subdivision vertices and
/// cycle vertices are all distinct.
pub fn decode_with<V: Clone + Eq + Hash>(
    rank: usize,
    root: V,
    step: impl Fn(&V, Letter) -> Option<V>,
    radius: usize,
    max_cycle: u32,
) -> Result<BTreeMap<Word, u32>> {
    if radius < 2 {
        return Err(Error::Invalid("decoding needs radius at least 2".into()));
    }
    if rank < 2 {
        return Err(Error::NotInZ("rank below 2".into()));
    }
    let leaves = || Error::NotInZ("a walk leaves the explored ball".into());
    let s1 = Letter::pos(0);
    let s2 = Letter::pos(1);
    let mut out = BTreeMap::new();
    let mut seen: HashSet<V> = HashSet::new();
    let mut fresh = |v: &V, g: &Word| {
        if seen.insert(v.clone()) {
            Ok(())
        } else {
            Err(Error::NotInZ(format!("vertex reached twice while reading {g}")))
        }
    };
    for g in ball_words(rank, radius - 2) {
        let mut v = root.clone();
        for &l in phi(&g).letters() {
            v = step(&v, l).ok_or_else(leaves)?;
        }
        let y = step(&v, s1).ok_or_else(leaves)?;
        fresh(&v, &g)?;
        fresh(&y, &g)?;
        if y == v || step(&y, s1).ok_or_else(leaves)? == y {
            return Err(Error::NotInZ(format!("no subdivision vertex on the s1 edge at {g}")));
        }
        let mut len = 1u32;
        let mut c = step(&y, s2).ok_or_else(leaves)?;
        while c != y {
            let loops = std::iter::once(s1)
                .chain((2..rank).map(Letter::pos))
                .all(|l| step(&c, l).as_ref() == Some(&c));
            if !loops {
                return Err(Error::NotInZ(format!("malformed s2-cycle at {g}")));
            }
            fresh(&c, &g)?;
            len += 1;
            if len > max_cycle {
                return Err(Error::NotInZ(format!("s2-cycle at {g} exceeds {max_cycle}")));
            }
            c = step(&c, s2).ok_or_else(leaves)?;
        }
        if (2..rank).any(|i| step(&y, Letter::pos(i)).as_ref() != Some(&y)) {
            return Err(Error::NotInZ(format!("missing loops at the subdivision vertex of {g}")));
        }
        out.insert(g, len);
    }
    Ok(out)
}

pub const DEFAULT_MAX_CYCLE: u32 = 1 << 16;

pub fn decode(o: &dyn SchreierOracle, radius: usize) -> Result<BTreeMap<Word, u32>> {
    decode_with(
        o.rank(),
        o.root(),
        |v, l| Some(o.neighbor(v, l)),
        radius,
        DEFAULT_MAX_CYCLE,
    )
}

pub fn decode_view(view: &crate::ball::BallView, radius: usize) -> Result<BTreeMap<Word, u32>> {
    decode_with(view.rank(), 0u32, |&v, l| view.step(v, l), radius, DEFAULT_MAX_CYCLE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{ball, DEFAULT_BUDGET};
    use crate::dynamics::FiniteAction;
    use crate::encoder::subshift::Subshift;
    use crate::oracle::{contains, Cayley};
    use std::sync::Arc;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn constant(sym: u32, alphabet: u32) -> SubshiftPoint {
        let a = FiniteAction::trivial(2, 1);
        SubshiftPoint::new(Arc::new(Subshift::new(a, vec![sym], alphabet).unwrap()), 0).unwrap()
    }

    #[test]
    fn phi_round_trip() {
        assert_eq!(phi(&w("s1s2")), w("s1s1s2"));
        assert!(phi_inverse(&w("s1")).is_err());
        assert!(phi_inverse(&w("s1s1s2s1")).is_err());
        for g in ball_words(2, 4) {
            assert_eq!(phi_inverse(&phi(&g)).unwrap(), g);
        }
    }

    #[test]
    fn membership_examples() {
        let one = PsiOracle::new(constant(1, 1));
        assert!(contains(&one, &w("s1s2s1^-1")));
        assert!(!contains(&one, &w("s1s1")));
        let three = PsiOracle::new(constant(3, 3));
        assert!(contains(&three, &w("s1s2^3s1^-1")));
        assert!(!contains(&three, &w("s1s2s1^-1")));
    }

    #[test]
    fn balls_are_valid_and_grow() {
        let o = PsiOracle::new(constant(2, 2));
        let mut last = 0;
        for r in 0..6 {
            let b = ball(&o, r, DEFAULT_BUDGET).unwrap();
            b.validate().unwrap();
            assert!(b.len() > last);
            last = b.len();
        }
    }

    #[test]
    fn decode_constant_and_reject_cayley() {
        let o = PsiOracle::new(constant(1, 1));
        let d = decode(&o, 5).unwrap();
        assert_eq!(d.len(), crate::word::ball_size(2, 3));
        assert!(d.values().all(|&v| v == 1));
        assert!(matches!(decode(&Cayley::new(2), 4), Err(Error::NotInZ(_))));
        let idx2 = crate::finite::index_two(2);
        assert!(matches!(decode(&idx2, 4), Err(Error::NotInZ(_))));
        let view = ball(&o, 6, DEFAULT_BUDGET).unwrap();
        assert_eq!(decode_view(&view, 4).unwrap(), decode(&o, 4).unwrap());
    }
}
