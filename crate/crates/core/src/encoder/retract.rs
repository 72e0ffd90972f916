//! Membership in `Z = Ψ(X)`, the retraction `Υ: Y → Z` onto `Z` along the
//! translate set `L`, and the measure `λ` on `Y`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;

use crate::ball::ball;
use crate::error::{Error, Result};
use crate::measure::AtomicMeasure;
use crate::oracle::{conjugate, walk, Oracle, SchreierOracle};
use crate::subgroup::Verdict;
use crate::vertex::VertexId;
use crate::word::{ball_words, Letter, Word};

use super::psi::PsiOracle;
use super::subshift::{Subshift, SubshiftPoint};

/// The radius-`n` ball of `F_r` in shortlex order, `n` the alphabet size.
/// The identity comes first.
pub fn translate_set_l(rank: usize, alphabet: u32) -> Vec<Word> {
    ball_words(rank, alphabet as usize)
}

/// The configurations of a labelled action, with cached ball codes of their
/// encodings.
pub struct XSpace {
    shift: Arc<Subshift>,
    classes: Vec<u32>,
    reps: Vec<u32>,
    budget: usize,
    codes: Mutex<HashMap<usize, Arc<HashSet<Vec<u32>>>>>,
}

impl XSpace {
    pub fn new(shift: Arc<Subshift>, budget: usize) -> Self {
        let classes = shift.configuration_classes();
        let mut reps: Vec<u32> = Vec::new();
        let mut seen = BTreeSet::new();
        for (p, &c) in classes.iter().enumerate() {
            if seen.insert(c) {
                reps.push(p as u32);
            }
        }
        XSpace {
            shift,
            classes,
            reps,
            budget,
            codes: Mutex::new(HashMap::new()),
        }
    }

    pub fn subshift(&self) -> &Arc<Subshift> {
        &self.shift
    }

    pub fn rank(&self) -> usize {
        self.shift.rank()
    }

    pub fn point(&self, base: u32) -> SubshiftPoint {
        SubshiftPoint::new(self.shift.clone(), base).expect("point in range")
    }

    pub fn psi(&self, base: u32) -> Oracle {
        Arc::new(PsiOracle::new(self.point(base)))
    }

    /// Index of the configuration defined by point `p`.
    pub fn class_of(&self, p: u32) -> u32 {
        self.classes[p as usize]
    }

    /// One point per distinct configuration.
    pub fn representatives(&self) -> &[u32] {
        &self.reps
    }

    pub fn translates(&self) -> Vec<Word> {
        translate_set_l(self.rank(), self.shift.alphabet())
    }

    fn codes(&self, radius: usize) -> Result<Arc<HashSet<Vec<u32>>>> {
        if let Some(c) = self.codes.lock().expect("poisoned").get(&radius) {
            return Ok(c.clone());
        }
        let mut set = HashSet::new();
        for &b in &self.reps {
            set.insert(ball(self.psi(b).as_ref(), radius, self.budget)?.canonical_code());
        }
        let set = Arc::new(set);
        self.codes
            .lock()
            .expect("poisoned")
            .insert(radius, set.clone());
        Ok(set)
    }

    /// Whether the radius-`radius` ball of `o` is that of some `Ψ(x')`.
    /// `No` is definitive.
    pub fn in_z(&self, o: &dyn SchreierOracle, radius: usize) -> Result<Verdict> {
        if radius < 2 {
            return Err(Error::Invalid("membership in Z needs radius at least 2".into()));
        }
        if o.rank() != self.rank() {
            return Ok(Verdict::No);
        }
        let code = ball(o, radius, self.budget)?.canonical_code();
        Ok(if self.codes(radius)?.contains(&code) {
            Verdict::UpToRadius(radius)
        } else {
            Verdict::No
        })
    }

    /// `Υ(K) = f_i·K` for the first `f_i ∈ L` with `f_i·K ∈ Z`. The choice is
    /// confirmed at `radius + 2`; a translate that passes at `radius` but not
    /// beyond is reported as ambiguous.
    pub fn upsilon(&self, o: &Oracle, radius: usize) -> Result<(Word, Oracle)> {
        for f in self.translates() {
            let c = conjugate(o, &f);
            if self.in_z(c.as_ref(), radius)?.is_no() {
                continue;
            }
            if self.in_z(c.as_ref(), radius + 2)?.is_no() {
                return Err(Error::Ambiguous {
                    radius,
                    msg: format!("translate {f} passes at radius {radius} only"),
                });
            }
            return Ok((f, c));
        }
        Err(Error::NotInY)
    }

    /// Exact identity of the subgroup `Ψ(x_b)` re-rooted at vertex `v`.
    fn key(&self, b: u32, v: &VertexId) -> LambdaKey {
        match v {
            VertexId::Encoded { g, cycle } => LambdaKey {
                class: self.class_of(self.point(b).point_at(g)),
                cycle: *cycle,
            },
            other => panic!("{other} is not an encoded vertex"),
        }
    }

    /// `λ(E) = ∫ |Υ⁻¹(K) ∩ E| dΨ_*η(K)` for a finitely supported invariant
    /// `η` on the points of the action.
    pub fn lambda(&self, eta: &AtomicMeasure<u32>) -> Result<AtomicMeasure<LambdaKey>> {
        check_invariant(self.shift.action(), eta)?;
        let psi_eta = self.psi_pushforward(eta);
        let l = self.translates();
        let mut out = AtomicMeasure::new();
        for (k, mass) in psi_eta.iter() {
            let b = self.reps[k.class as usize];
            let psi = self.psi(b);
            let root = psi.root();
            let mut seen = BTreeSet::new();
            for f in &l {
                // f^-1·K is rooted at the end of the walk along f.
                let u = walk(psi.as_ref(), &root, f.letters());
                let ku = self.key(b, &u);
                if !seen.insert(ku) {
                    continue;
                }
                if self.retract_key(b, &u, &l) == *k {
                    out.add(ku, mass.clone());
                }
            }
        }
        Ok(out)
    }

    /// Key of `Υ` applied to `Ψ(x_b)` rooted at `u`.
    fn retract_key(&self, b: u32, u: &VertexId, l: &[Word]) -> LambdaKey {
        let psi = self.psi(b);
        for f in l {
            let w = walk(psi.as_ref(), u, f.inverse().letters());
            let k = self.key(b, &w);
            if k.cycle.is_none() {
                return k;
            }
        }
        unreachable!("every vertex lies within n of a Cayley vertex")
    }

    /// `Ψ_*η` with atoms keyed exactly.
    pub fn psi_pushforward(&self, eta: &AtomicMeasure<u32>) -> AtomicMeasure<LambdaKey> {
        eta.pushforward(|&p| LambdaKey {
            class: self.class_of(p),
            cycle: None,
        })
    }

    /// `λ(s·A) - λ(A)` over atoms `A` and generator letters `s`, where `s·A`
    /// is the conjugate `s A s^-1`. All zero iff `λ` is invariant on atoms.
    pub fn lambda_deviations(
        &self,
        lambda: &AtomicMeasure<LambdaKey>,
    ) -> Vec<(LambdaKey, Letter, BigRational)> {
        let mut rows = Vec::new();
        for (k, m) in lambda.iter() {
            let b = self.reps[k.class as usize];
            let v = VertexId::Encoded {
                g: Word::identity(),
                cycle: k.cycle,
            };
            let psi = self.psi(b);
            for l in Letter::all(self.rank()) {
                let moved = self.key(b, &psi.neighbor(&v, l.inverse()));
                rows.push((*k, l, lambda.mass(&moved) - m));
            }
        }
        rows
    }
}

/// Rejects `η` unless `η(α(s) p) = η(p)` for every point and generator.
pub fn check_invariant(a: &crate::dynamics::FiniteAction, eta: &AtomicMeasure<u32>) -> Result<()> {
    for (p, m) in eta.iter() {
        a.check_point(*p)?;
        for g in 0..a.rank() {
            if eta.mass(&a.perm(g)[*p as usize]) != *m {
                return Err(Error::NotInvariant(format!(
                    "mass at {p} differs from mass at its s{} image",
                    g + 1
                )));
            }
        }
    }
    Ok(())
}

/// An atom of `λ`: the configuration class of the Cayley vertex nearest the
/// root's subdivided edge, and the root's position on that cycle (`None` for
/// a Cayley root, i.e. an atom in `Z`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LambdaKey {
    pub class: u32,
    pub cycle: Option<u32>,
}

impl fmt::Display for LambdaKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cycle {
            None => write!(f, "Z[{}]", self.class),
            Some(j) => write!(f, "Y[{},{}]", self.class, j),
        }
    }
}

/// Uniform probability on the orbit of `x`.
pub fn uniform_on_orbit(a: &crate::dynamics::FiniteAction, x: u32) -> AtomicMeasure<u32> {
    let orbit = a.orbit(x);
    let m = BigRational::new(1.into(), (orbit.len() as u64).into());
    orbit.into_iter().map(|p| (p, m.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::DEFAULT_BUDGET;
    use crate::dynamics::FiniteAction;
    use crate::oracle::Cayley;
    use num_traits::{One, Zero};

    fn period_two() -> XSpace {
        let a = FiniteAction::new(vec![vec![1, 0], vec![1, 0]]).unwrap();
        XSpace::new(Arc::new(Subshift::new(a, vec![1, 2], 2).unwrap()), DEFAULT_BUDGET)
    }

    #[test]
    fn l_for_small_alphabets() {
        let l = translate_set_l(2, 1);
        let s: Vec<String> = l.iter().map(|w| w.to_string()).collect();
        assert_eq!(s, ["e", "s1", "s1^-1", "s2", "s2^-1"]);
        assert_eq!(translate_set_l(2, 2).len(), 17);
    }

    #[test]
    fn z_membership() {
        let x = period_two();
        let psi = x.psi(0);
        assert_eq!(x.in_z(psi.as_ref(), 4).unwrap(), Verdict::UpToRadius(4));
        let moved = conjugate(&psi, &"s1".parse().unwrap());
        assert!(x.in_z(moved.as_ref(), 4).unwrap().is_no());
        assert!(x.in_z(&Cayley::new(2), 2).unwrap().is_no());
    }

    #[test]
    fn upsilon_cases() {
        let x = period_two();
        let psi = x.psi(1);
        let (f, _) = x.upsilon(&psi, 4).unwrap();
        assert!(f.is_empty());
        let g: Word = "s1s2^-1".parse().unwrap();
        let moved = conjugate(&psi, &g.inverse());
        let (_, z) = x.upsilon(&moved, 4).unwrap();
        assert!(!x.in_z(z.as_ref(), 6).unwrap().is_no());
        assert!(matches!(x.upsilon(&Cayley::oracle(2), 4), Err(Error::NotInY)));
    }

    #[test]
    fn lambda_properties() {
        let x = period_two();
        let eta = uniform_on_orbit(x.subshift().action(), 0);
        let lambda = x.lambda(&eta).unwrap();
        let z = lambda.restrict(|k| k.cycle.is_none());
        assert_eq!(z, x.psi_pushforward(&eta));
        assert!(lambda.total() <= BigRational::from_integer(17.into()));
        assert!(x.lambda_deviations(&lambda).iter().all(|(_, _, d)| d.is_zero()));
        let mut bad = AtomicMeasure::new();
        bad.add(0u32, BigRational::one());
        assert!(matches!(x.lambda(&bad), Err(Error::NotInvariant(_))));
    }
}
