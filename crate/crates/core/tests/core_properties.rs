use std::sync::Arc;

use proptest::prelude::*;
use schreier::finite::{cyclic, index_two, FiniteSchreierGraph};
use schreier::oracle::{walk, Oracle};
use schreier::samplers::{NormalizerOracle, PoulsenLaw, RootSlot, SubgroupLaw, UniformRoot};
use schreier::subgroup::metric;
use schreier::{
    ball, conjugate, contains, root_isomorphic, sgr, trace, Cayley, Letter, Prob,
    Word, DEFAULT_BUDGET,
};

fn pool() -> Vec<Oracle> {
    let g3 = FiniteSchreierGraph::from_perms(vec![vec![1, 0, 2], vec![0, 2, 1]], 0).unwrap();
    let p = Prob::new(1, 3).unwrap();
    vec![
        Cayley::oracle(2),
        index_two(2).into_oracle(),
        cyclic(2, 5).into_oracle(),
        g3.clone().into_oracle(),
        Arc::new(NormalizerOracle::new(Cayley::oracle(2), p, 1, RootSlot::Uniform)),
        Arc::new(NormalizerOracle::new(g3.clone().into_oracle(), p, 2, RootSlot::Uniform)),
        PoulsenLaw::new(Arc::new(UniformRoot::new(g3, "g3")), p).sample(3),
    ]
}

fn letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..2usize, any::<bool>()), 0..max)
        .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    letters(max).prop_map(Word::from_letters)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduction_is_idempotent_and_inverse_cancels(raw in letters(16)) {
        let w = Word::from_letters(raw.clone());
        prop_assert_eq!(Word::from_letters(w.letters().iter().copied()), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inverse()));
    }

    #[test]
    fn trace_ignores_reduction(k in 0..7usize, raw in letters(14)) {
        let o = &pool()[k];
        let w = Word::from_letters(raw.clone());
        prop_assert_eq!(walk(o.as_ref(), &o.root(), raw.iter()), trace(o.as_ref(), &w));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn subgroup_axioms(k in 0..7usize, a in word(10), b in word(10)) {
        let o = &pool()[k];
        prop_assert!(contains(o.as_ref(), &Word::identity()));
        prop_assert_eq!(contains(o.as_ref(), &a), contains(o.as_ref(), &a.inverse()));
        if contains(o.as_ref(), &a) && contains(o.as_ref(), &b) {
            prop_assert!(contains(o.as_ref(), &a.mul(&b)));
        }
    }

    #[test]
    fn conjugation_equivariance(k in 0..7usize, g in word(6), w in word(10)) {
        let o = &pool()[k];
        let c = conjugate(o, &g);
        let back = g.inverse().mul(&w).mul(&g);
        prop_assert_eq!(contains(c.as_ref(), &w), contains(o.as_ref(), &back));
    }

    #[test]
    fn sgr_round_trip(k in 0..7usize, r in 0..4usize) {
        let b = ball(pool()[k].as_ref(), r, DEFAULT_BUDGET).unwrap();
        let text = sgr::emit(&b);
        let back = sgr::parse(&text).unwrap();
        prop_assert_eq!(sgr::emit(&back), text);
        prop_assert!(root_isomorphic(&b, &back));
    }
}

#[test]
fn metric_axioms() {
    let mut os = pool();
    let extra: Vec<Oracle> = os.iter().map(|o| conjugate(o, &"s2s1".parse().unwrap())).collect();
    os.extend(extra);
    let d = |a: &Oracle, b: &Oracle| metric(a.as_ref(), b.as_ref(), 5, DEFAULT_BUDGET).unwrap();
    for a in &os {
        assert_eq!(d(a, a), num_rational::Ratio::from_integer(0));
        for b in &os {
            let ab = d(a, b);
            assert_eq!(ab, d(b, a));
            for c in &os {
                assert!(d(a, c) <= ab.max(d(b, c)));
            }
        }
    }
}

#[test]
fn metric_of_index_two_against_tree() {
    // The s2 loop at the root already shows in the radius-0 ball.
    let m = metric(&Cayley::new(2), &index_two(2), 6, DEFAULT_BUDGET).unwrap();
    assert_eq!(m, num_rational::Ratio::from_integer(1));
    let c = cyclic(2, 5);
    let m = metric(&Cayley::new(2), &c, 6, DEFAULT_BUDGET).unwrap();
    assert_eq!(m, num_rational::Ratio::from_integer(1));
    // An s1-cycle of length 7 closes inside the radius-3 ball, one of length 9
    // does not.
    let m = metric(&cyclic(2, 7), &cyclic(2, 9), 6, DEFAULT_BUDGET).unwrap();
    assert_eq!(m, num_rational::Ratio::new(1, 4));
}

#[test]
fn aut_count_divides_size() {
    let mut graphs = vec![index_two(2), cyclic(2, 6), cyclic(3, 4)];
    graphs.push(FiniteSchreierGraph::from_perms(vec![vec![1, 2, 3, 0], vec![2, 3, 0, 1]], 0).unwrap());
    graphs.push(FiniteSchreierGraph::from_perms(vec![vec![1, 0, 2], vec![0, 2, 1]], 0).unwrap());
    for g in &graphs {
        assert_eq!(g.len() % g.aut_count(), 0);
    }
    assert_eq!(index_two(2).aut_count(), 2);
    assert_eq!(cyclic(2, 6).aut_count(), 6);
}

#[test]
fn root_isomorphism_is_an_equivalence() {
    let os = pool();
    let mut balls = Vec::new();
    for o in &os {
        for g in ["e", "s1", "s2^-1", "s1s2"] {
            balls.push(ball(conjugate(o, &g.parse().unwrap()).as_ref(), 3, DEFAULT_BUDGET).unwrap());
        }
    }
    for a in &balls {
        assert!(root_isomorphic(a, a));
        for b in &balls {
            assert_eq!(root_isomorphic(a, b), root_isomorphic(b, a));
            if root_isomorphic(a, b) {
                for c in &balls {
                    assert_eq!(root_isomorphic(b, c), root_isomorphic(a, c));
                }
            }
        }
    }
}

#[test]
fn cayley_ball_sizes() {
    // 1 + 2r((2r-1)^n - 1)/(2r-2) vertices in the radius-n ball of F_r.
    for (rank, n, size) in [(2, 1, 5), (2, 2, 17), (2, 3, 53), (3, 2, 37)] {
        let b = ball(&Cayley::new(rank), n, DEFAULT_BUDGET).unwrap();
        assert_eq!(b.len(), size);
        b.validate().unwrap();
    }
}
