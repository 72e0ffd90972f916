use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schreier::dynamics::{
    graphing_cost, is_totally_nonfree, orbit_schreier, stab_equal, FiniteAction, SubsetMask,
};
use schreier::{contains, Letter, Word};

fn random_action(rng: &mut ChaCha8Rng, n: u32, rank: usize) -> FiniteAction {
    let perms = (0..rank)
        .map(|_| {
            let mut v: Vec<u32> = (0..n).collect();
            v.shuffle(rng);
            v
        })
        .collect();
    FiniteAction::new(perms).unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize) -> Word {
    let len = rng.gen_range(0..12);
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen())))
}

#[test]
fn orbit_graph_membership_matches_fixing() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=7);
        let a = random_action(&mut rng, n, 2);
        let x = rng.gen_range(0..n);
        let g = orbit_schreier(&a, x).unwrap();
        let w = random_word(&mut rng, 2);
        // Direct composition, letter by letter.
        let mut y = x;
        for &l in w.letters() {
            let p = a.perm(l.gen());
            y = if l.is_inverse() {
                p.iter().position(|&z| z == y).unwrap() as u32
            } else {
                p[y as usize]
            };
        }
        assert_eq!(contains(&g, &w), y == x);
    }
}

#[test]
fn stabilizer_equality_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let a = random_action(&mut rng, n, 2);
        let eq: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| stab_equal(&a, x, y).unwrap()).collect())
            .collect();
        for x in 0..n as usize {
            assert!(eq[x][x]);
            for y in 0..n as usize {
                assert_eq!(eq[x][y], eq[y][x]);
                for z in 0..n as usize {
                    if eq[x][y] && eq[y][z] {
                        assert!(eq[x][z]);
                    }
                }
            }
        }
        let singletons = (0..n as usize).all(|x| (0..n as usize).all(|y| x == y || !eq[x][y]));
        assert_eq!(is_totally_nonfree(&a).unwrap(), singletons);
    }
}

#[test]
fn orbit_stabilizer_bookkeeping() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = 0;
    while seen < 100 {
        let n = rng.gen_range(1..=8);
        let a = random_action(&mut rng, n, 2);
        if !a.is_transitive() {
            continue;
        }
        seen += 1;
        let x = rng.gen_range(0..n);
        let aut = orbit_schreier(&a, x).unwrap().aut_count() as u32;
        let mut classes: Vec<u32> = Vec::new();
        for y in 0..n {
            if !classes.iter().any(|&c| stab_equal(&a, c, y).unwrap()) {
                classes.push(y);
            }
        }
        assert_eq!(aut * classes.len() as u32, n);
    }
}

#[test]
fn cost_of_a_spanning_graphing() {
    // s1 a 6-cycle: dropping one edge leaves a spanning tree of cost 5/6.
    let a = FiniteAction::new(vec![vec![1, 2, 3, 4, 5, 0], (0..6).collect()]).unwrap();
    let tree = SubsetMask::parse("0b011111", 6).unwrap();
    assert_eq!(graphing_cost(&a, &[tree]).unwrap(), num_rational::Ratio::new(5, 6));
    assert!(graphing_cost(&a, &vec![SubsetMask::full(6); 3]).is_err());
}
