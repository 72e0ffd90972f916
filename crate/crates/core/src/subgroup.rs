//! Subgroup-level queries on oracles: the local metric, cylinder
//! fingerprints and the finite-radius normalizer test.

use std::fmt;

use num_rational::Ratio;

use crate::ball::{ball, root_isomorphic};
use crate::error::Result;
use crate::oracle::{contains, SchreierOracle};
use crate::vertex::VertexId;
use crate::word::{Letter, Word};

/// Answer to a closed (co-semidecidable) property checked to a finite radius.
/// A positive answer is never claimed outright.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    No,
    UpToRadius(usize),
}

impl Verdict {
    pub fn is_no(self) -> bool {
        self == Verdict::No
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::No => f.write_str("no"),
            Verdict::UpToRadius(r) => write!(f, "consistent-up-to-radius {r}"),
        }
    }
}

/// Distance between two rooted graphs: `1/(n+1)` for the smallest `n` at
/// which the radius-`n` balls are not root-isomorphic, or `None` when they
/// agree through `max_radius` (distance `<= 1/(max_radius+2)`).
pub fn first_disagreement(
    a: &dyn SchreierOracle,
    b: &dyn SchreierOracle,
    max_radius: usize,
    budget: usize,
) -> Result<Option<usize>> {
    if a.rank() != b.rank() {
        return Ok(Some(0));
    }
    for n in 0..=max_radius {
        let (ba, bb) = (ball(a, n, budget)?, ball(b, n, budget)?);
        if !root_isomorphic(&ba, &bb) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// The metric value; zero when the graphs agree up to `max_radius`.
pub fn metric(
    a: &dyn SchreierOracle,
    b: &dyn SchreierOracle,
    max_radius: usize,
    budget: usize,
) -> Result<Ratio<u64>> {
    Ok(match first_disagreement(a, b, max_radius, budget)? {
        Some(n) => Ratio::new(1, n as u64 + 1),
        None => Ratio::from_integer(0),
    })
}

/// Every reduced word of length `<= radius` together with the vertex it
/// reaches, in depth-first order.
fn visit_ball_words(
    o: &dyn SchreierOracle,
    radius: usize,
    mut f: impl FnMut(&Word, &VertexId),
) {
    let rank = o.rank();
    let mut stack: Vec<(Word, VertexId)> = vec![(Word::identity(), o.root())];
    while let Some((w, v)) = stack.pop() {
        f(&w, &v);
        if w.len() == radius {
            continue;
        }
        let last = w.letters().last().copied();
        for l in Letter::all(rank) {
            if Some(l.inverse()) == last {
                continue;
            }
            let mut x = w.clone();
            x.push(l);
            stack.push((x, o.neighbor(&v, l)));
        }
    }
}

/// `K ∩ B(radius)` as a shortlex-sorted list. `o` lies in the cylinder
/// `C(F, radius)` exactly when this equals `F`.
pub fn cylinder_fingerprint(o: &dyn SchreierOracle, radius: usize) -> Vec<Word> {
    let root = o.root();
    let mut found = Vec::new();
    visit_ball_words(o, radius, |w, v| {
        if *v == root {
            found.push(w.clone());
        }
    });
    found.sort();
    found
}

/// Finite-radius test for `g ∈ N(K) \ K`: answers `No` if `g ∈ K` or some
/// `w ∈ K` with `|w| <= check_radius` has `g w g^-1 ∉ K`.
pub fn z_set_member(o: &dyn SchreierOracle, g: &Word, check_radius: usize) -> Verdict {
    if contains(o, g) {
        return Verdict::No;
    }
    for w in cylinder_fingerprint(o, check_radius) {
        if !contains(o, &w.conjugate_by(g)) {
            return Verdict::No;
        }
    }
    Verdict::UpToRadius(check_radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::DEFAULT_BUDGET;
    use crate::finite::{index_two, FiniteSchreierGraph};
    use crate::oracle::Cayley;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn metric_values() {
        let c = Cayley::new(2);
        assert_eq!(metric(&c, &c, 5, DEFAULT_BUDGET).unwrap(), Ratio::from_integer(0));
        // The index-2 graph has an s2 loop at the root; the Cayley graph has
        // none, so the radius-0 balls already differ.
        let i2 = index_two(2);
        assert_eq!(metric(&c, &i2, 5, DEFAULT_BUDGET).unwrap(), Ratio::new(1, 1));
        // Same radius-0 ball (no loops), different radius-1 ball.
        let rot = FiniteSchreierGraph::from_perms(vec![vec![1, 2, 0], vec![2, 0, 1]], 0).unwrap();
        assert_eq!(metric(&c, &rot, 5, DEFAULT_BUDGET).unwrap(), Ratio::new(1, 2));
    }

    #[test]
    fn fingerprints() {
        assert_eq!(cylinder_fingerprint(&Cayley::new(2), 2), vec![Word::identity()]);
        let fp: Vec<String> = cylinder_fingerprint(&index_two(2), 2)
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(
            fp,
            [
                "e", "s2", "s2^-1", "s1s1", "s1^-1s1^-1", "s2s2", "s2^-1s2^-1"
            ]
        );
    }

    #[test]
    fn normalizer_predicate() {
        let c = Cayley::new(2);
        assert_eq!(z_set_member(&c, &w("s1"), 4), Verdict::UpToRadius(4));
        let i2 = index_two(2);
        assert_eq!(z_set_member(&i2, &w("s1"), 4), Verdict::UpToRadius(4));
        assert_eq!(z_set_member(&i2, &w("s2"), 4), Verdict::No);
        // s2 fixes 0 only, so s1 does not normalize the stabilizer of 0.
        let g = FiniteSchreierGraph::from_perms(vec![vec![1, 2, 0], vec![0, 2, 1]], 0).unwrap();
        assert_eq!(z_set_member(&g, &w("s1"), 4), Verdict::No);
    }
}
