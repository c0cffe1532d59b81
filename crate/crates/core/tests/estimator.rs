mod common;

use ceralign::estimator::{
    automorphism_count, intersection_aut_check, isolated_count, map_estimate, map_estimate_with, q_set_size,
};
use ceralign::model::{anonymize, hamming, intersection, rng_from_seed, sample_pair_with};
use ceralign::perm::lift;
use ceralign::rational::q;
use ceralign::{Error, Graph, Permutation, Q};
use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn likelihood(cand: &Graph, gb: &Graph, p: &[Q; 4]) -> Q {
    let mut l = Q::one();
    for (a, b) in cand.labels().iter().zip(gb.labels()) {
        l *= match (a, b) {
            (true, true) => &p[0],
            (true, false) => &p[1],
            (false, true) => &p[2],
            (false, false) => &p[3],
        };
    }
    l
}

#[test]
fn posterior_ranking_equals_hamming_ranking_at_n3() {
    let grid = [pv(4, 1, 1, 4, 10), pv(2, 1, 1, 6, 10), pv(5, 2, 1, 2, 10)];
    let mut rng = rng_from_seed(31);
    let perms = all_perms(3);
    for k in 0..300 {
        let p = &grid[k % grid.len()];
        let entries = p.exact_entries().unwrap();
        let pair = sample_pair_with(3, p, &mut rng).unwrap();
        let mut img = vec![0, 1, 2];
        img.shuffle(&mut rng);
        let planted = Permutation::from_images(img).unwrap();
        let gc = anonymize(&pair.ga, &planted).unwrap();
        let scored: Vec<(usize, Q)> = perms
            .iter()
            .map(|pi| {
                let cand = gc.compose(&lift(pi)).unwrap();
                (hamming(&cand, &pair.gb).unwrap(), likelihood(&cand, &pair.gb, entries))
            })
            .collect();
        for (da, la) in &scored {
            for (db, lb) in &scored {
                assert_eq!(da.cmp(db), lb.cmp(la), "instance {k}");
            }
        }
        let best = scored.iter().map(|s| &s.1).max().unwrap();
        let r = map_estimate(&gc, &pair.gb, Some(&planted)).unwrap();
        let cand = gc.compose(&lift(&r.best_perm)).unwrap();
        assert_eq!(&likelihood(&cand, &pair.gb, entries), best);
        assert_eq!(r.ties as usize, scored.iter().filter(|s| &s.1 == best).count());
    }
}

fn arb_instance(max_n: usize) -> impl Strategy<Value = (Graph, Graph, Permutation)> {
    (1..=max_n).prop_flat_map(|n| {
        let t = n * (n - 1) / 2;
        (
            prop::collection::vec(prop::bool::weighted(0.6), t),
            prop::collection::vec(0u8..10, t),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(a, flips, img)| {
                let b: Vec<bool> = a.iter().zip(&flips).map(|(x, f)| if *f == 0 { !x } else { *x }).collect();
                (
                    Graph::from_labels(n, a).unwrap(),
                    Graph::from_labels(n, b).unwrap(),
                    Permutation::from_images(img).unwrap(),
                )
            })
    })
}

proptest! {
    #![proptest_config(prop_config(96))]

    #[test]
    fn map_estimate_matches_brute_force((ga, gb, planted) in arb_instance(6)) {
        let gc = anonymize(&ga, &planted).unwrap();
        let n = ga.vertex_count();
        let perms = all_perms(n);
        let ham: Vec<usize> = perms.iter().map(|pi| hamming(&gc.compose(&lift_oracle(pi)).unwrap(), &gb).unwrap()).collect();
        let min = *ham.iter().min().unwrap();
        let r = map_estimate(&gc, &gb, Some(&planted)).unwrap();
        prop_assert_eq!(r.min_delta_hamming, min);
        prop_assert_eq!(r.ties as usize, ham.iter().filter(|&&h| h == min).count());
        let first = perms.iter().zip(&ham).filter(|(_, &h)| h == min).map(|(p, _)| p.images().to_vec()).min().unwrap();
        prop_assert_eq!(r.best_perm.images(), first.as_slice());

        let planted_ham = hamming(&ga, &gb).unwrap();
        let q_size = ham.iter().filter(|&&h| h <= planted_ham).count() as u64;
        let s = r.planted.unwrap();
        prop_assert_eq!(s.planted_delta_hamming, planted_ham);
        prop_assert_eq!(s.q_size, q_size);
        prop_assert_eq!(s.strict_success, q_size == 1);
        let eta = if planted_ham == min { q(1, q_size as i64) } else { Q::zero() };
        prop_assert_eq!(s.eta, eta);
        if s.strict_success {
            prop_assert_eq!(&r.best_perm, &planted);
        }
    }

    #[test]
    fn q_set_contains_intersection_automorphisms((ga, gb, _p) in arb_instance(6)) {
        let both = intersection(&ga, &gb).unwrap();
        prop_assert!(q_set_size(&ga, &gb).unwrap() >= automorphism_count(&both).unwrap());
        prop_assert!(intersection_aut_check(&ga, &gb).unwrap());
    }

    #[test]
    fn automorphism_count_matches_brute_force((ga, _gb, _p) in arb_instance(6)) {
        let want = all_perms(ga.vertex_count())
            .iter()
            .filter(|pi| ga.compose(&lift_oracle(pi)).unwrap() == ga)
            .count() as u64;
        prop_assert_eq!(automorphism_count(&ga).unwrap(), want);
    }

    #[test]
    fn parallel_scan_agrees_with_serial((ga, gb, planted) in arb_instance(7)) {
        let gc = anonymize(&ga, &planted).unwrap();
        let a = map_estimate_with(&gc, &gb, Some(&planted), 10, false).unwrap();
        let b = map_estimate_with(&gc, &gb, Some(&planted), 10, true).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn automorphisms_of_equal_graphs_have_zero_delta((ga, _gb, _p) in arb_instance(6)) {
        for pi in all_perms(ga.vertex_count()) {
            let tau = lift_oracle(&pi);
            if ga.compose(&tau).unwrap() == ga {
                prop_assert_eq!(delta_oracle(&tau, &ga, &ga), 0);
            }
        }
    }
}

#[test]
fn isolated_vertices_and_symmetric_graphs() {
    let g = Graph::from_edges(6, &[(0, 1), (1, 2)]).unwrap();
    assert_eq!(isolated_count(&g), 3);
    assert_eq!(automorphism_count(&g).unwrap(), 2 * 6);
    assert_eq!(automorphism_count(&Graph::complete(5)).unwrap(), 120);
    assert_eq!(automorphism_count(&Graph::empty(5)).unwrap(), 120);
}

#[test]
fn estimator_refuses_beyond_cap() {
    let g = Graph::empty(11);
    assert!(matches!(map_estimate(&g, &g, None), Err(Error::CapExceeded { .. })));
    assert!(matches!(automorphism_count(&g), Err(Error::CapExceeded { .. })));
    assert!(matches!(q_set_size(&g, &g), Err(Error::CapExceeded { .. })));
}

#[test]
fn mismatched_sizes_are_rejected() {
    assert!(map_estimate(&Graph::empty(3), &Graph::empty(4), None).is_err());
    let planted = Permutation::identity(4);
    assert!(map_estimate(&Graph::empty(3), &Graph::empty(3), Some(&planted)).is_err());
}
