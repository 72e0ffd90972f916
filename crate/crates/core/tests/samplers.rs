use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schreier::finite::{cyclic, index_two, FiniteSchreierGraph};
use schreier::samplers::{
    enumerate_normalizer_law, self_normalizing_fraction, surgery, BaseRoot, Dirac, Enumeration,
    Law, NormalizerLaw, PoulsenGamma, PoulsenLaw, RootSlot, UniformRoot,
};
use schreier::stats::{invariance_report, law_tv};
use schreier::{ball, root_isomorphic, Cayley, Prob, DEFAULT_BUDGET};

fn p(a: u64, b: u64) -> Prob {
    Prob::new(a, b).unwrap()
}

fn trivial() -> Law {
    Arc::new(Dirac::new(Cayley::oracle(2), "trivial"))
}

/// A transitive action of F_2 on `n` points: s1 a random n-cycle, s2 a
/// random permutation.
fn random_transitive(n: u32, rng: &mut ChaCha8Rng) -> FiniteSchreierGraph {
    let mut order: Vec<u32> = (0..n).collect();
    order.shuffle(rng);
    let mut s1 = vec![0; n as usize];
    for i in 0..n as usize {
        s1[order[i] as usize] = order[(i + 1) % n as usize];
    }
    let mut s2: Vec<u32> = (0..n).collect();
    s2.shuffle(rng);
    FiniteSchreierGraph::from_perms(vec![s1, s2], 0).unwrap()
}

#[test]
fn samples_are_deterministic() {
    let laws: Vec<Law> = vec![
        Arc::new(NormalizerLaw::new(trivial(), p(1, 5), RootSlot::Uniform)),
        Arc::new(PoulsenLaw::new(trivial(), p(1, 5))),
        Arc::new(PoulsenLaw::new(Arc::new(UniformRoot::new(cyclic(2, 3), "c3")), p(1, 2))),
    ];
    for law in &laws {
        for seed in 0..20 {
            for r in 0..5 {
                let a = ball(law.sample(seed).as_ref(), r, DEFAULT_BUDGET).unwrap();
                let b = ball(law.sample(seed).as_ref(), r, DEFAULT_BUDGET).unwrap();
                assert!(root_isomorphic(&a, &b));
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn gamma_balls_carry_stars_and_surgery_removes_them() {
    let gamma = PoulsenGamma::new(trivial(), p(1, 2), 7);
    let view = ball(&gamma, 3, DEFAULT_BUDGET).unwrap();
    assert!(view.has_stars());
    view.validate().unwrap();
    if let Ok((after, pairs)) = surgery(&view) {
        assert!(!after.has_stars());
        assert!(!pairs.is_empty());
        after.validate().unwrap();
    }
}

#[test]
fn enumerated_laws_are_invariant_exactly() {
    let g3 = FiniteSchreierGraph::from_perms(vec![vec![1, 0, 2], vec![0, 2, 1]], 0).unwrap();
    for (base, root) in [
        (index_two(2), BaseRoot::Fixed),
        (cyclic(2, 3), BaseRoot::Fixed),
        (g3, BaseRoot::Uniform),
    ] {
        let mut opts = Enumeration::new(p(1, 3));
        opts.root = root;
        let law = enumerate_normalizer_law(&base, &opts).unwrap();
        assert_eq!(law.total(), BigRational::one());
        assert!(law.is_invariant());
        for r in 1..=2 {
            assert!(law.cylinder_deviations(r).iter().all(|(_, _, d)| d.is_zero()));
        }
    }
}

#[test]
fn tv_between_parameters_is_positive() {
    let a = enumerate_normalizer_law(&index_two(2), &Enumeration::new(p(1, 4))).unwrap();
    let b = enumerate_normalizer_law(&index_two(2), &Enumeration::new(p(1, 8))).unwrap();
    let d = law_tv(&a, &b);
    assert!(d > BigRational::zero() && d < BigRational::one());
    assert!(law_tv(&a, &a).is_zero());
}

#[test]
fn self_normalizing_mass_does_not_decrease_with_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut last = BigRational::zero();
    for n in 2..=12 {
        let base = random_transitive(n, &mut rng);
        let f = self_normalizing_fraction(&base, p(1, 2), 10_000_000).unwrap();
        assert!(f >= last, "index {n}: {f} < {last}");
        last = f;
    }
}

#[test]
fn normalizer_over_infinite_base_is_invariant_at_radius_two() {
    let law = NormalizerLaw::new(trivial(), p(1, 2), RootSlot::Uniform);
    let r = invariance_report(&law, 2, 20_000, 11, 0.01).unwrap();
    assert!(!r.rows.is_empty());
    assert!(r.max_z() <= 4.0, "max z {}", r.max_z());
}
