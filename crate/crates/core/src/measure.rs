use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// A finitely supported measure with exact rational masses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomicMeasure<K: Ord> {
    atoms: BTreeMap<K, BigRational>,
}

impl<K: Ord> Default for AtomicMeasure<K> {
    fn default() -> Self {
        AtomicMeasure {
            atoms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> AtomicMeasure<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn point(k: K) -> Self {
        let mut m = Self::new();
        m.add(k, BigRational::from_integer(1.into()));
        m
    }

    /// Adds mass to an atom; atoms whose mass becomes zero are dropped.
    pub fn add(&mut self, k: K, mass: BigRational) {
        if mass.is_zero() {
            return;
        }
        let e = self.atoms.entry(k.clone()).or_insert_with(BigRational::zero);
        *e += mass;
        if e.is_zero() {
            self.atoms.remove(&k);
        }
    }

    pub fn mass(&self, k: &K) -> BigRational {
        self.atoms.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.atoms.values().cloned().sum()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigRational)> {
        self.atoms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.atoms.keys()
    }

    /// Image measure under `f`.
    pub fn pushforward<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> AtomicMeasure<J> {
        let mut out = AtomicMeasure::new();
        for (k, m) in &self.atoms {
            out.add(f(k), m.clone());
        }
        out
    }

    /// Restriction to the atoms satisfying `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(&K) -> bool) -> AtomicMeasure<K> {
        AtomicMeasure {
            atoms: self
                .atoms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, m)| (k.clone(), m.clone()))
                .collect(),
        }
    }
}

impl<K: Ord + Clone> FromIterator<(K, BigRational)> for AtomicMeasure<K> {
    fn from_iter<I: IntoIterator<Item = (K, BigRational)>>(iter: I) -> Self {
        let mut m = AtomicMeasure::new();
        for (k, x) in iter {
            m.add(k, x);
        }
        m
    }
}

/// `(1/2) Σ |a(k) - b(k)|` over the union of supports.
pub fn tv_distance<K: Ord + Clone>(a: &AtomicMeasure<K>, b: &AtomicMeasure<K>) -> BigRational {
    let mut sum = BigRational::zero();
    for (k, m) in a.iter() {
        sum += (m - b.mass(k)).abs();
    }
    for (k, m) in b.iter() {
        if a.atoms.get(k).is_none() {
            sum += m.abs();
        }
    }
    sum / BigRational::from_integer(2.into())
}
