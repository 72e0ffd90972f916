//! The self-normalizing perturbation.
//!
//! Each coset `Kg` receives a mark `x(Kg) ∈ {0..r}` (law `u_q` at the root,
//! `u_p` elsewhere, independent). Unmarked cosets survive as single vertices;
//! a coset with mark `m > 0` is replaced by three vertices `(Kg,0)`,
//! `(Kg,1)`, `(Kg,2)`. For generator `s_i`, edges between cosets run from the
//! exit vertex (`Kg` or `(Kg,2)`) to the entry vertex (`Kgs_i` or
//! `(Kgs_i,0)`); inside a marked coset `s_m` goes `0 → 2` with a loop at 1,
//! and every other `s_i` goes `0 → 1 → 2`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Result;
use crate::finite::FiniteSchreierGraph;
use crate::keyed::{subseed, SeededKey};
use crate::oracle::{Oracle, SchreierOracle};
use crate::prob::{MarkLaw, Prob};
use crate::samplers::law::{Law, SubgroupLaw};
use crate::vertex::VertexId;
use crate::word::Letter;

/// Which of the three vertices of a marked root coset becomes the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootSlot {
    /// Uniform on `{0,1,2}`; the construction that yields an invariant law.
    Uniform,
    /// Always the given slot. Breaks invariance; used as a negative control.
    Fixed(u8),
}

/// Mark of the coset `key.vertex`.
pub fn mark(key: SeededKey<'_>, law: &MarkLaw, at_root: bool) -> u8 {
    law.sample(key.draw(), at_root)
}

/// Internal successor along `s_{gen+1}` inside a marked coset with mark `m`;
/// `None` means the edge leaves the coset from slot 2.
fn inner_forward(m: u8, gen: usize, slot: u8) -> Option<u8> {
    match (m as usize == gen + 1, slot) {
        (true, 0) => Some(2),
        (true, 1) => Some(1),
        (false, 0) => Some(1),
        (false, 1) => Some(2),
        (_, _) => None,
    }
}

/// Internal predecessor; `None` means the edge enters the coset at slot 0.
fn inner_backward(m: u8, gen: usize, slot: u8) -> Option<u8> {
    match (m as usize == gen + 1, slot) {
        (true, 2) => Some(0),
        (true, 1) => Some(1),
        (false, 2) => Some(1),
        (false, 1) => Some(0),
        (_, _) => None,
    }
}

#[derive(Clone, Debug)]
enum Marks {
    Keyed { law: MarkLaw, seed: u64 },
    Fixed(Arc<HashMap<VertexId, u8>>),
}

/// Lazy oracle for the perturbed graph over an arbitrary base oracle.
pub struct NormalizerOracle {
    base: Oracle,
    base_root: VertexId,
    marks: Marks,
    root: VertexId,
}

impl NormalizerOracle {
    pub fn new(base: Oracle, p: Prob, seed: u64, policy: RootSlot) -> Self {
        let law = MarkLaw::new(p, base.rank());
        let marks = Marks::Keyed { law, seed };
        Self::build(base, marks, |root| match policy {
            RootSlot::Uniform => SeededKey::new(seed, "root-slot", root).below(3) as u8,
            RootSlot::Fixed(k) => k,
        })
    }

    /// Marks given explicitly (cosets absent from `marks` get 0).
    pub fn with_marks(base: Oracle, marks: HashMap<VertexId, u8>, root_slot: u8) -> Self {
        Self::build(base, Marks::Fixed(Arc::new(marks)), |_| root_slot)
    }

    fn build(base: Oracle, marks: Marks, slot: impl FnOnce(&VertexId) -> u8) -> Self {
        let base_root = base.root();
        let mut o = NormalizerOracle {
            base,
            base_root: base_root.clone(),
            marks,
            root: VertexId::Index(0),
        };
        let slot = match o.mark_of(&base_root) {
            0 => None,
            _ => Some(slot(&base_root)),
        };
        o.root = VertexId::Marked {
            base: Arc::new(base_root),
            slot,
        };
        o
    }

    pub fn mark_of(&self, coset: &VertexId) -> u8 {
        match &self.marks {
            Marks::Keyed { law, seed } => mark(
                SeededKey::new(*seed, "mark", coset),
                law,
                *coset == self.base_root,
            ),
            Marks::Fixed(m) => m.get(coset).copied().unwrap_or(0),
        }
    }

    fn lift(&self, coset: VertexId, slot_if_marked: u8) -> VertexId {
        let slot = (self.mark_of(&coset) > 0).then_some(slot_if_marked);
        VertexId::Marked {
            base: Arc::new(coset),
            slot,
        }
    }
}

impl SchreierOracle for NormalizerOracle {
    fn rank(&self) -> usize {
        self.base.rank()
    }

    fn root(&self) -> VertexId {
        self.root.clone()
    }

    fn neighbor(&self, v: &VertexId, l: Letter) -> VertexId {
        let (coset, slot) = match v {
            VertexId::Marked { base, slot } => (base, *slot),
            other => panic!("{other} is not a vertex of the normalizer construction"),
        };
        if let Some(k) = slot {
            let m = self.mark_of(coset);
            let inner = if l.is_inverse() {
                inner_backward(m, l.gen(), k)
            } else {
                inner_forward(m, l.gen(), k)
            };
            if let Some(k2) = inner {
                return VertexId::Marked {
                    base: coset.clone(),
                    slot: Some(k2),
                };
            }
        }
        let next = self.base.neighbor(coset, l);
        // Forward edges enter at slot 0; backward edges arrive from slot 2.
        self.lift(next, if l.is_inverse() { 2 } else { 0 })
    }
}

/// The perturbed law over a base law.
pub struct NormalizerLaw {
    base: Law,
    p: Prob,
    policy: RootSlot,
}

impl NormalizerLaw {
    pub fn new(base: Law, p: Prob, policy: RootSlot) -> Self {
        NormalizerLaw { base, p, policy }
    }
}

impl SubgroupLaw for NormalizerLaw {
    fn rank(&self) -> usize {
        self.base.rank()
    }

    fn sample(&self, seed: u64) -> Oracle {
        let base = self.base.sample(subseed(seed, "normalizer-base", 0));
        Arc::new(NormalizerOracle::new(
            base,
            self.p,
            subseed(seed, "normalizer", 0),
            self.policy,
        ))
    }

    fn describe(&self) -> String {
        match self.policy {
            RootSlot::Uniform => format!("normalizer(p={}):{}", self.p, self.base.describe()),
            RootSlot::Fixed(k) => format!(
                "normalizer(p={},root-slot={k}):{}",
                self.p,
                self.base.describe()
            ),
        }
    }
}

/// Explicit construction over a finite base with given marks. Returns the
/// graph rooted at the base root (slot `root_slot` if the root is marked)
/// together with the index of each `(coset, slot)`: `first[v] + slot`.
pub fn normalizer_finite(
    base: &FiniteSchreierGraph,
    marks: &[u8],
    root_slot: u8,
) -> Result<(FiniteSchreierGraph, Vec<u32>)> {
    let n = base.len();
    let rank = base.rank();
    let mut first = Vec::with_capacity(n);
    let mut total = 0u32;
    for &m in marks {
        first.push(total);
        total += if m == 0 { 1 } else { 3 };
    }
    let entry = |c: u32| first[c as usize];
    let exit = |c: u32| first[c as usize] + if marks[c as usize] == 0 { 0 } else { 2 };
    let mut perms = vec![vec![0u32; total as usize]; rank];
    for (gen, perm) in perms.iter_mut().enumerate() {
        for c in 0..n as u32 {
            let m = marks[c as usize];
            let next = base.step(c, Letter::pos(gen));
            perm[exit(c) as usize] = entry(next);
            if m > 0 {
                for slot in 0..2u8 {
                    let to = inner_forward(m, gen, slot).expect("slots 0 and 1 stay inside");
                    perm[(first[c as usize] + slot as u32) as usize] = first[c as usize] + to as u32;
                }
            }
        }
    }
    let r = base.root_index();
    let root = first[r as usize] + if marks[r as usize] == 0 { 0 } else { root_slot as u32 };
    Ok((FiniteSchreierGraph::from_perms(perms, root)?, first))
}
