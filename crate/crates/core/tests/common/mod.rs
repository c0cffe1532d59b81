#![allow(dead_code)]

use ceralign::model::pair_table;
use ceralign::rational::q;
use ceralign::{Graph, PVec, PairPermutation, Permutation, Q};
use num_traits::{One, Zero};

/// `[p11, p10, p01, p00]` from numerators over a common denominator.
pub fn pv(n11: i64, n10: i64, n01: i64, n00: i64, den: i64) -> PVec {
    PVec::exact(q(n11, den), q(n10, den), q(n01, den), q(n00, den)).unwrap()
}

/// Ten positively correlated exact distributions, dense to sparse, with and
/// without noise.
pub fn positive_grid() -> Vec<PVec> {
    vec![
        pv(1, 0, 0, 1, 2),
        pv(4, 1, 1, 4, 10),
        pv(3, 1, 1, 5, 10),
        pv(1, 1, 1, 7, 10),
        pv(2, 1, 2, 5, 10),
        pv(1, 0, 0, 9, 10),
        pv(5, 2, 2, 41, 50),
        pv(1, 1, 1, 97, 100),
        pv(6, 1, 3, 10, 20),
        pv(45, 2, 3, 50, 100),
    ]
}

/// `(ga, gb, probability)` for every labeling of the `C(n,2)` pairs.
pub fn all_outcomes(n: usize, p: &PVec) -> Vec<(Graph, Graph, Q)> {
    let [p11, p10, p01, p00] = p.exact_entries().unwrap().clone();
    let t = n * (n - 1) / 2;
    let total = 1usize << (2 * t);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut la = Vec::with_capacity(t);
        let mut lb = Vec::with_capacity(t);
        let mut prob = Q::one();
        for e in 0..t {
            let a = (code >> (2 * e)) & 1 == 1;
            let b = (code >> (2 * e + 1)) & 1 == 1;
            prob *= match (a, b) {
                (true, true) => &p11,
                (true, false) => &p10,
                (false, true) => &p01,
                (false, false) => &p00,
            };
            la.push(a);
            lb.push(b);
        }
        if prob.is_zero() {
            continue;
        }
        out.push((Graph::from_labels(n, la).unwrap(), Graph::from_labels(n, lb).unwrap(), prob));
    }
    out
}

/// Pair permutation computed straight from the vertex map.
pub fn lift_oracle(pi: &Permutation) -> PairPermutation {
    let n = pi.len();
    let table = pair_table(n);
    let images = table
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (pi.apply(i), pi.apply(j));
            let key = (a.min(b), a.max(b));
            table.iter().position(|&x| x == key).unwrap()
        })
        .collect();
    PairPermutation::from_images(n, images).unwrap()
}

/// `μ₁₁(ga, gb) − μ₁₁(ga∘τ, gb)` by direct label counting.
pub fn delta_oracle(tau: &PairPermutation, ga: &Graph, gb: &Graph) -> i64 {
    let la = ga.labels();
    let lb = gb.labels();
    let mut d = 0i64;
    for e in 0..la.len() {
        if la[e] && lb[e] {
            d += 1;
        }
        if la[tau.apply(e)] && lb[e] {
            d -= 1;
        }
    }
    d
}

/// Number of `(1,1)` labels on pairs that `tau` moves.
pub fn moved_overlap(tau: &PairPermutation, ga: &Graph, gb: &Graph) -> u32 {
    (0..ga.labels().len()).filter(|&e| tau.apply(e) != e && ga.has_pair(e) && gb.has_pair(e)).count() as u32
}

/// All permutations of `[n]` by Heap's algorithm (order irrelevant).
pub fn all_perms(n: usize) -> Vec<Permutation> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![Permutation::from_images(a.clone()).unwrap()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(Permutation::from_images(a.clone()).unwrap());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Integer partitions of `total` into parts `>= min_part`, parts non-increasing.
pub fn partitions(total: usize, min_part: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (min..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if total == 0 {
        return vec![vec![]];
    }
    rec(total, total, min_part.max(1), &mut Vec::new(), &mut out);
    out
}

/// A permutation of `[n]` whose cycles have the given lengths, laid out on
/// consecutive vertices.
pub fn perm_with_cycles(n: usize, parts: &[usize]) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    let mut start = 0;
    for &len in parts {
        for k in 0..len {
            images[start + k] = start + (k + 1) % len;
        }
        start += len;
    }
    Permutation::from_images(images).unwrap()
}

/// Overlap `|E(ga∘l(π)) ∩ E(gb)|`.
pub fn overlap(g: &Graph, pi: &Permutation, gb: &Graph) -> usize {
    let moved = g.compose(&lift_oracle(pi)).unwrap();
    moved.labels().iter().zip(gb.labels()).filter(|(a, b)| **a && **b).count()
}

/// Proptest settings for integration tests: regressions are stored next to
/// the test source.
pub fn prop_config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: Some(Box::new(proptest::test_runner::FileFailurePersistence::WithSource("regressions"))),
        ..Default::default()
    }
}
