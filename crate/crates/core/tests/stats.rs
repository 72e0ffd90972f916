use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schreier::finite::index_two;
use schreier::measure::{tv_distance, AtomicMeasure};
use schreier::samplers::{
    enumerate_normalizer_law, Dirac, Enumeration, Law, NormalizerLaw, PoulsenLaw, RootSlot,
};
use schreier::stats::{
    all_zero, convergence_sweep, estimate_cylinder, exact_invariance_report, invariance_report,
    CylinderSpec,
};
use schreier::{Cayley, Prob};

fn p(a: u64, b: u64) -> Prob {
    Prob::new(a, b).unwrap()
}

fn trivial() -> Law {
    Arc::new(Dirac::new(Cayley::oracle(2), "trivial"))
}

#[test]
fn dirac_estimate_is_exact() {
    let r = estimate_cylinder(trivial().as_ref(), &CylinderSpec::trivial(2), 500, 0).unwrap();
    assert_eq!(r.hits, 500);
    assert_eq!(r.stderr(), 0.0);
}

#[test]
fn estimates_repeat_with_the_seed() {
    let law = NormalizerLaw::new(trivial(), p(1, 2), RootSlot::Uniform);
    let spec = CylinderSpec::trivial(1);
    let a = estimate_cylinder(&law, &spec, 3000, 9).unwrap();
    let b = estimate_cylinder(&law, &spec, 3000, 9).unwrap();
    assert_eq!(a, b);
    let c = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| estimate_cylinder(&law, &spec, 3000, 9).unwrap());
    assert_eq!(a, c);
}

#[test]
fn stderr_matches_bootstrap() {
    let law = NormalizerLaw::new(trivial(), p(1, 2), RootSlot::Uniform);
    let spec = CylinderSpec::trivial(1);
    let n = 10_000u64;
    let r = estimate_cylinder(&law, &spec, n, 5).unwrap();
    let hits = r.hits as usize;
    let sample: Vec<bool> = (0..n as usize).map(|i| i < hits).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let means: Vec<f64> = (0..400)
        .map(|_| {
            let k = (0..n).filter(|_| sample[rng.gen_range(0..n as usize)]).count();
            k as f64 / n as f64
        })
        .collect();
    let mean = means.iter().sum::<f64>() / means.len() as f64;
    let sd = (means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (means.len() - 1) as f64).sqrt();
    assert!(r.estimate_f64() > 0.05 && r.estimate_f64() < 0.95);
    assert!((sd - r.stderr()).abs() <= 0.1 * r.stderr(), "bootstrap {sd} vs {}", r.stderr());
}

#[test]
fn exact_deviations_vanish_iff_invariant() {
    let good = enumerate_normalizer_law(&index_two(2), &Enumeration::new(p(1, 2))).unwrap();
    assert!(all_zero(&exact_invariance_report(&good, 2)));
    assert!(good.is_invariant());
    let mut opts = Enumeration::new(p(1, 2));
    opts.slot = RootSlot::Fixed(0);
    let bad = enumerate_normalizer_law(&index_two(2), &opts).unwrap();
    assert!(!all_zero(&exact_invariance_report(&bad, 2)));
    assert!(!bad.is_invariant());
}

#[test]
fn negative_control_is_detected() {
    let law = NormalizerLaw::new(trivial(), p(1, 2), RootSlot::Fixed(0));
    let r = invariance_report(&law, 1, 5000, 1, 0.01).unwrap();
    assert!(r.max_z() > 6.0);
}

#[test]
fn tv_point_masses() {
    let a = AtomicMeasure::point(1u32);
    let b = AtomicMeasure::point(2u32);
    assert_eq!(tv_distance(&a, &a), num_rational::BigRational::from_integer(0.into()));
    assert_eq!(tv_distance(&a, &b), num_rational::BigRational::from_integer(1.into()));
}

#[test]
fn sweep_rows_descend_and_stay_within_bound() {
    let ps = [p(1, 100), p(1, 5), p(1, 20), p(1, 10)];
    let sweep = convergence_sweep(
        trivial().as_ref(),
        |q| Box::new(PoulsenLaw::new(Arc::new(NormalizerLaw::new(trivial(), p(1, 2), RootSlot::Uniform)), q)),
        &ps,
        &CylinderSpec::trivial(1),
        2000,
        1,
    )
    .unwrap();
    let order: Vec<String> = sweep.rows.iter().map(|r| r.p.to_string()).collect();
    assert_eq!(order, ["1/5", "1/10", "1/20", "1/100"]);
    assert!(sweep.base_exact && sweep.base_value == 1.0);
    let empty = convergence_sweep(trivial().as_ref(), |q| Box::new(PoulsenLaw::new(trivial(), q)), &[], &CylinderSpec::trivial(1), 10, 0).unwrap();
    assert!(empty.rows.is_empty());
}
