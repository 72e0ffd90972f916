//! Exact laws of the normalizer construction over finite bases, by full
//! enumeration of mark assignments and root slots.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finite::FiniteSchreierGraph;
use crate::measure::AtomicMeasure;
use crate::prob::{MarkLaw, Prob};
use crate::samplers::normalizer::{normalizer_finite, RootSlot};
use crate::word::{ball_words, Letter, Word};

/// Where the base graph is rooted before marks are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseRoot {
    /// The base's own root. Gives an invariant law when the base subgroup is
    /// normal.
    Fixed,
    /// A uniformly random vertex of the base.
    Uniform,
}

#[derive(Clone, Copy, Debug)]
pub struct Enumeration {
    pub p: Prob,
    pub slot: RootSlot,
    pub root: BaseRoot,
    /// Maximum number of (root, marks, slot) outcomes.
    pub budget: usize,
}

impl Enumeration {
    pub fn new(p: Prob) -> Self {
        Enumeration {
            p,
            slot: RootSlot::Uniform,
            root: BaseRoot::Fixed,
            budget: 10_000_000,
        }
    }
}

/// An exact law on finite rooted Schreier graphs, atoms keyed by canonical
/// code.
#[derive(Clone, Debug)]
pub struct GraphLaw {
    rank: usize,
    atoms: AtomicMeasure<Vec<u32>>,
    reps: BTreeMap<Vec<u32>, FiniteSchreierGraph>,
}

impl GraphLaw {
    pub fn new(rank: usize) -> Self {
        GraphLaw {
            rank,
            atoms: AtomicMeasure::new(),
            reps: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, g: FiniteSchreierGraph, mass: BigRational) {
        let code = g.canonical_code();
        self.atoms.add(code.clone(), mass);
        self.reps.entry(code).or_insert(g);
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn measure(&self) -> &AtomicMeasure<Vec<u32>> {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.atoms.total()
    }

    /// Atoms in code order.
    pub fn iter(&self) -> impl Iterator<Item = (&FiniteSchreierGraph, &BigRational)> {
        self.atoms.iter().map(|(c, m)| (&self.reps[c], m))
    }

    /// Image under `K ↦ gKg⁻¹`.
    pub fn conjugated(&self, g: &Word) -> GraphLaw {
        let mut out = GraphLaw::new(self.rank);
        for (graph, m) in self.iter() {
            out.add(graph.conjugated(g), m.clone());
        }
        out
    }

    /// Law of the radius-`radius` cylinder containing the subgroup.
    pub fn cylinder_law(&self, radius: usize) -> AtomicMeasure<Vec<Word>> {
        let words = ball_words(self.rank, radius);
        self.atoms
            .pushforward(|c| finite_fingerprint(&self.reps[c], &words))
    }

    /// `η(C) - η(g·C)` for every cylinder `C` of the given radius charged by
    /// either side and every generator letter `g`.
    pub fn cylinder_deviations(&self, radius: usize) -> Vec<(Vec<Word>, Letter, BigRational)> {
        let base = self.cylinder_law(radius);
        let mut rows = Vec::new();
        for l in Letter::all(self.rank) {
            let moved = self.conjugated(&Word::letter(l)).cylinder_law(radius);
            let mut keys: Vec<&Vec<Word>> = base.keys().chain(moved.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                rows.push((k.clone(), l, base.mass(k) - moved.mass(k)));
            }
        }
        rows
    }

    /// Exact conjugation invariance on whole classes: `g_*η = η` for every
    /// generator.
    pub fn is_invariant(&self) -> bool {
        Letter::all(self.rank)
            .filter(|l| !l.is_inverse())
            .all(|l| self.conjugated(&Word::letter(l)).atoms == self.atoms)
    }

    /// Mass carried by graphs with trivial automorphism group (self-normalizing
    /// subgroups).
    pub fn trivial_aut_mass(&self) -> BigRational {
        self.iter()
            .filter(|(g, _)| g.is_asymmetric())
            .map(|(_, m)| m.clone())
            .sum()
    }
}

/// Fingerprint of a finite graph over a precomputed word list.
pub fn finite_fingerprint(g: &FiniteSchreierGraph, words: &[Word]) -> Vec<Word> {
    let r = g.root_index();
    let mut f: Vec<Word> = words.iter().filter(|w| g.walk(r, w) == r).cloned().collect();
    f.sort();
    f
}

fn big(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow(x: &BigRational, k: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= x;
    }
    out
}

/// Iterates all assignments in `{0..=r}^n` in lexicographic order.
fn decode_marks(mut code: u64, base: u64, n: usize, out: &mut [u8]) {
    for slot in out.iter_mut().take(n) {
        *slot = (code % base) as u8;
        code /= base;
    }
}

fn outcomes(base: &FiniteSchreierGraph, roots: usize) -> Option<u64> {
    let r = base.rank() as u64 + 1;
    r.checked_pow(base.len() as u32)?.checked_mul(3 * roots as u64)
}

/// Exact law of the normalizer construction over `base`.
pub fn enumerate_normalizer_law(base: &FiniteSchreierGraph, opts: &Enumeration) -> Result<GraphLaw> {
    let n = base.len();
    let rank = base.rank();
    let roots: Vec<u32> = match opts.root {
        BaseRoot::Fixed => vec![base.root_index()],
        BaseRoot::Uniform => (0..n as u32).collect(),
    };
    let total = outcomes(base, roots.len()).filter(|&t| t <= opts.budget as u64);
    let total_marks = match total {
        Some(_) => (rank as u64 + 1).pow(n as u32),
        None => return Err(Error::Budget { limit: opts.budget }),
    };

    // Integer counts per (class, root marked, zero marks off the root).
    type Key = (Vec<u32>, bool, usize);
    let counts: HashMap<Key, (u64, FiniteSchreierGraph)> = (0..total_marks)
        .into_par_iter()
        .fold(HashMap::new, |mut acc: HashMap<Key, (u64, FiniteSchreierGraph)>, code| {
            let mut marks = vec![0u8; n];
            decode_marks(code, rank as u64 + 1, n, &mut marks);
            let zeros = marks.iter().filter(|&&m| m == 0).count();
            let (g, first) = normalizer_finite(base, &marks, 0).expect("valid construction");
            for &r in &roots {
                let marked = marks[r as usize] > 0;
                let z = zeros - usize::from(!marked);
                let slots: Vec<u8> = match (marked, opts.slot) {
                    (false, _) => vec![0],
                    (true, RootSlot::Uniform) => vec![0, 1, 2],
                    (true, RootSlot::Fixed(k)) => vec![k],
                };
                for s in slots {
                    let rooted = g.rebased(first[r as usize] + s as u32);
                    let e = acc
                        .entry((rooted.canonical_code(), marked, z))
                        .or_insert((0, rooted));
                    e.0 += 1;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, (c, g)) in b {
                a.entry(k).or_insert((0, g)).0 += c;
            }
            a
        });

    let law = MarkLaw::new(opts.p, rank);
    let p = opts.p.to_big();
    let q = law.q().to_big();
    let r = big(rank as u64);
    let one = BigRational::one();
    let slot_factor = match opts.slot {
        RootSlot::Uniform => one.clone() / big(3),
        RootSlot::Fixed(_) => one.clone(),
    };
    let root_factor = one.clone() / big(roots.len() as u64);
    let zero_mass = &one - &p;
    let marked_mass = &p / &r;

    let mut keys: Vec<&Key> = counts.keys().collect();
    keys.sort();
    let mut out = GraphLaw::new(rank);
    for key in keys {
        let (count, g) = &counts[key];
        let (_, marked, z) = key;
        let at_root = if *marked {
            &q / &r * &slot_factor
        } else {
            &one - &q
        };
        let w = at_root * pow(&zero_mass, *z) * pow(&marked_mass, n - 1 - z) * &root_factor;
        out.add(g.clone(), w * big(*count));
    }
    debug_assert_eq!(out.total(), one);
    Ok(out)
}

/// Mass of self-normalizing outcomes when the base is rooted uniformly. The
/// automorphism group does not depend on the root, so each mark assignment is
/// tested once and weighted by its total root probability.
pub fn self_normalizing_fraction(
    base: &FiniteSchreierGraph,
    p: Prob,
    budget: usize,
) -> Result<BigRational> {
    let n = base.len();
    let rank = base.rank();
    let total_marks = (rank as u64 + 1)
        .checked_pow(n as u32)
        .filter(|&t| t <= budget as u64)
        .ok_or(Error::Budget { limit: budget })?;
    // Asymmetric assignments, by number of zero marks.
    let by_zeros: Vec<u64> = (0..total_marks)
        .into_par_iter()
        .fold(
            || vec![0u64; n + 1],
            |mut acc, code| {
                let mut marks = vec![0u8; n];
                decode_marks(code, rank as u64 + 1, n, &mut marks);
                let (g, _) = normalizer_finite(base, &marks, 0).expect("valid construction");
                if g.is_asymmetric() {
                    acc[marks.iter().filter(|&&m| m == 0).count()] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let law = MarkLaw::new(p, rank);
    let (p, q) = (p.to_big(), law.q().to_big());
    let r = big(rank as u64);
    let one = BigRational::one();
    let (z0, m0) = (&one - &p, &p / &r);
    let mut sum = BigRational::zero();
    for (zeros, &count) in by_zeros.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let marked = n - zeros;
        let mut w = BigRational::zero();
        if zeros > 0 {
            w += big(zeros as u64) * (&one - &q) * pow(&z0, zeros - 1) * pow(&m0, marked);
        }
        if marked > 0 {
            w += big(marked as u64) * (&q / &r) * pow(&z0, zeros) * pow(&m0, marked - 1);
        }
        sum += w * big(count);
    }
    Ok(sum / big(n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{cyclic, index_two};

    fn half() -> Prob {
        Prob::new(1, 2).unwrap()
    }

    #[test]
    fn index_two_law_is_normalized_and_invariant() {
        let law = enumerate_normalizer_law(&index_two(2), &Enumeration::new(half())).unwrap();
        assert_eq!(law.total(), BigRational::one());
        assert!(law.is_invariant());
        assert!(law.cylinder_deviations(2).iter().all(|(_, _, d)| d.is_zero()));
    }

    #[test]
    fn fixed_slot_breaks_invariance() {
        let mut opts = Enumeration::new(half());
        opts.slot = RootSlot::Fixed(0);
        let law = enumerate_normalizer_law(&index_two(2), &opts).unwrap();
        assert!(!law.is_invariant());
        assert!(law.cylinder_deviations(2).iter().any(|(_, _, d)| !d.is_zero()));
    }

    #[test]
    fn uniform_root_over_non_normal_base() {
        let base = FiniteSchreierGraph::from_perms(vec![vec![1, 2, 0], vec![0, 2, 1]], 0).unwrap();
        let mut opts = Enumeration::new(Prob::new(1, 3).unwrap());
        opts.root = BaseRoot::Uniform;
        let law = enumerate_normalizer_law(&base, &opts).unwrap();
        assert_eq!(law.total(), BigRational::one());
        assert!(law.is_invariant());
        // The same base with a fixed root is not an invariant starting point.
        opts.root = BaseRoot::Fixed;
        assert!(!enumerate_normalizer_law(&base, &opts).unwrap().is_invariant());
    }

    #[test]
    fn direct_fraction_matches_class_law() {
        for base in [index_two(2), cyclic(2, 3), cyclic(2, 4)] {
            let mut opts = Enumeration::new(half());
            opts.root = BaseRoot::Uniform;
            let law = enumerate_normalizer_law(&base, &opts).unwrap();
            assert_eq!(
                law.trivial_aut_mass(),
                self_normalizing_fraction(&base, half(), 1 << 20).unwrap()
            );
        }
    }

    #[test]
    fn budget_is_enforced() {
        let opts = Enumeration {
            budget: 10,
            ..Enumeration::new(half())
        };
        assert!(enumerate_normalizer_law(&index_two(2), &opts)
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn one_vertex_base() {
        let law = enumerate_normalizer_law(&FiniteSchreierGraph::full(2), &Enumeration::new(half()))
            .unwrap();
        assert_eq!(law.total(), BigRational::one());
        // Unmarked root, or a triple under one of two marks: slots 0 and 2 are
        // exchanged by no automorphism, so the classes stay apart.
        assert!(law.len() >= 3);
    }
}
