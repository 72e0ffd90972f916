//! Stabilizers, first-return maps and graphing costs for finite actions.

pub mod action;

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_rational::{BigRational, Ratio};

use crate::error::{Error, Result};
use crate::finite::FiniteSchreierGraph;
use crate::samplers::enumerate::GraphLaw;
use crate::vertex::VertexId;
use crate::word::{ball_words, Word};

pub use action::{emit_action, parse_action, FiniteAction};

/// A subset of the points `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: Vec<bool>,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        SubsetMask {
            bits: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        SubsetMask { bits: vec![true; n] }
    }

    /// Bit `i` of `mask` is point `i`.
    pub fn from_bits(mask: u64, n: usize) -> Result<Self> {
        if n < 64 && mask >> n != 0 {
            return Err(Error::Invalid(format!("mask {mask:#b} has points beyond {n}")));
        }
        Ok(SubsetMask {
            bits: (0..n).map(|i| i < 64 && mask >> i & 1 == 1).collect(),
        })
    }

    pub fn from_points(points: &[u32], n: usize) -> Result<Self> {
        let mut m = SubsetMask::empty(n);
        for &p in points {
            if p as usize >= n {
                return Err(Error::Invalid(format!("point {p} outside 0..{n}")));
            }
            m.bits[p as usize] = true;
        }
        Ok(m)
    }

    /// Accepts an integer bitmask (`13`, `0b1101`, `0xd`) or a point list in
    /// braces (`{0,2,3}`).
    pub fn parse(s: &str, n: usize) -> Result<Self> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let pts = inner
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<u32>().map_err(|_| Error::Invalid(format!("bad point {x:?}"))))
                .collect::<Result<Vec<_>>>()?;
            return Self::from_points(&pts, n);
        }
        let bad = || Error::Invalid(format!("bad subset mask {t:?}"));
        let v = if let Some(b) = t.strip_prefix("0b") {
            u64::from_str_radix(b, 2).map_err(|_| bad())?
        } else if let Some(h) = t.strip_prefix("0x") {
            u64::from_str_radix(h, 16).map_err(|_| bad())?
        } else {
            u64::from_str(t).map_err(|_| bad())?
        };
        Self::from_bits(v, n)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn contains(&self, x: u32) -> bool {
        self.bits.get(x as usize).copied().unwrap_or(false)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn points(&self) -> impl Iterator<Item = u32> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i as u32)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", pts.join(","))
    }
}

/// The orbit of `x` with an `s_i` edge `v → perm_i(v)`, rooted at `x`: the
/// Schreier graph of `Stab(x)`.
pub fn orbit_schreier(a: &FiniteAction, x: u32) -> Result<FiniteSchreierGraph> {
    a.check_point(x)?;
    let orbit = a.orbit(x);
    let mut local = vec![u32::MAX; a.len()];
    for (i, &p) in orbit.iter().enumerate() {
        local[p as usize] = i as u32;
    }
    let perms = (0..a.rank())
        .map(|g| orbit.iter().map(|&p| local[a.perm(g)[p as usize] as usize]).collect())
        .collect();
    let labels = orbit.iter().map(|&p| VertexId::Index(p)).collect();
    FiniteSchreierGraph::with_labels(labels, perms, 0)
}

pub fn stab_equal(a: &FiniteAction, x: u32, y: u32) -> Result<bool> {
    let (gx, gy) = (orbit_schreier(a, x)?, orbit_schreier(a, y)?);
    Ok(gx.iso_from(gx.root_index(), &gy, gy.root_index()))
}

/// True iff distinct points have distinct stabilizers.
pub fn is_totally_nonfree(a: &FiniteAction) -> Result<bool> {
    let mut seen = HashSet::new();
    for x in 0..a.len() as u32 {
        if !seen.insert(orbit_schreier(a, x)?.canonical_code()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `y ↦ f^n(y)` for the least `n >= 1` with `f^n(y) ∈ Y`.
pub fn first_return(f: &[u32], y: &SubsetMask) -> Result<BTreeMap<u32, u32>> {
    if y.len() != f.len() {
        return Err(Error::Invalid(format!(
            "subset has {} points, permutation {}",
            y.len(),
            f.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::Invalid("first return needs a nonempty subset".into()));
    }
    let mut out = BTreeMap::new();
    for p in y.points() {
        let mut x = f[p as usize];
        while !y.contains(x) {
            x = f[x as usize];
        }
        out.insert(p, x);
    }
    Ok(out)
}

/// `Σ |D_i| / n` under the uniform measure.
pub fn graphing_cost(a: &FiniteAction, domains: &[SubsetMask]) -> Result<Ratio<u64>> {
    if domains.len() > a.rank() {
        return Err(Error::Invalid(format!(
            "{} domains for {} generators",
            domains.len(),
            a.rank()
        )));
    }
    let mut sum = 0u64;
    for d in domains {
        if d.len() != a.len() {
            return Err(Error::Invalid("domain size does not match the action".into()));
        }
        sum += d.count() as u64;
    }
    Ok(Ratio::new(sum, a.len() as u64))
}

/// Uniform measure on points pushed through the stabilizer map. Fails if the
/// result is not exactly invariant under rebasing by every generator.
pub fn stab_pushforward_law(a: &FiniteAction) -> Result<GraphLaw> {
    let mut law = GraphLaw::new(a.rank());
    let unit = BigRational::new(1.into(), (a.len() as u64).into());
    for x in 0..a.len() as u32 {
        law.add(orbit_schreier(a, x)?, unit.clone());
    }
    if !law.is_invariant() {
        return Err(Error::NotInvariant(
            "stabilizer law moved under conjugation".into(),
        ));
    }
    Ok(law)
}

/// The shortlex-first nonidentity word of length `<= max_len` fixing some
/// point, with its fixed set. No claim of completeness beyond the search
/// bound.
pub fn find_fixing_word(a: &FiniteAction, max_len: usize) -> Option<(Word, SubsetMask)> {
    for w in ball_words(a.rank(), max_len).into_iter().skip(1) {
        let fixed: Vec<u32> = (0..a.len() as u32).filter(|&x| a.act(x, &w) == x).collect();
        if !fixed.is_empty() {
            let m = SubsetMask::from_points(&fixed, a.len()).expect("in range");
            return Some((w, m));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::index_two;
    use crate::oracle::contains;

    fn index2_action() -> FiniteAction {
        FiniteAction::new(vec![vec![1, 0], vec![0, 1]]).unwrap()
    }

    #[test]
    fn orbit_graph_of_index_two() {
        let g = orbit_schreier(&index2_action(), 0).unwrap();
        let h = index_two(2);
        assert!(g.iso_from(g.root_index(), &h, h.root_index()));
        assert!(stab_equal(&index2_action(), 0, 1).unwrap());
        assert!(!is_totally_nonfree(&index2_action()).unwrap());
    }

    #[test]
    fn trivial_action() {
        let a = FiniteAction::trivial(2, 3);
        let g = orbit_schreier(&a, 1).unwrap();
        assert_eq!(g.len(), 1);
        assert!(contains(&g, &"s1s2^-1".parse().unwrap()));
        assert!(!is_totally_nonfree(&a).unwrap());
        let law = stab_pushforward_law(&a).unwrap();
        assert_eq!(law.len(), 1);
    }

    #[test]
    fn separating_example() {
        // 0 fixed by s2 only, 1 by nothing, 2 by s1 only.
        let a = FiniteAction::new(vec![vec![1, 0, 2], vec![0, 2, 1]]).unwrap();
        assert!(!stab_equal(&a, 0, 1).unwrap());
        assert!(is_totally_nonfree(&a).unwrap());
    }

    #[test]
    fn five_cycle_first_return() {
        let f = [1, 2, 3, 4, 0];
        let y = SubsetMask::from_points(&[0, 2], 5).unwrap();
        let r = first_return(&f, &y).unwrap();
        assert_eq!(r[&0], 2);
        assert_eq!(r[&2], 0);
        let all = first_return(&f, &SubsetMask::full(5)).unwrap();
        assert!(all.iter().all(|(&k, &v)| f[k as usize] == v));
    }

    #[test]
    fn costs() {
        let a = FiniteAction::new(vec![vec![1, 2, 3, 0], vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(
            graphing_cost(&a, &[SubsetMask::full(4), SubsetMask::full(4)]).unwrap(),
            Ratio::from_integer(2)
        );
        let half = SubsetMask::parse("0b0011", 4).unwrap();
        assert_eq!(graphing_cost(&a, &[half]).unwrap(), Ratio::new(1, 2));
        // Spanning tree of the 4-cycle: three of the four s1 edges.
        let tree = SubsetMask::parse("{0,1,2}", 4).unwrap();
        assert_eq!(graphing_cost(&a, &[tree]).unwrap(), Ratio::new(3, 4));
    }

    #[test]
    fn mask_parsing() {
        assert_eq!(SubsetMask::parse("5", 3).unwrap().to_string(), "{0,2}");
        assert_eq!(SubsetMask::parse("0x3", 3).unwrap().to_string(), "{0,1}");
        assert!(SubsetMask::parse("8", 3).is_err());
        assert!(SubsetMask::parse("{3}", 3).is_err());
    }

    #[test]
    fn fixing_word() {
        let a = FiniteAction::new(vec![vec![1, 2, 0], vec![1, 2, 0]]).unwrap();
        let (w, fixed) = find_fixing_word(&a, 8).unwrap();
        assert_eq!(w.to_string(), "s1s2^-1");
        assert_eq!(fixed.count(), 3);
    }
}
