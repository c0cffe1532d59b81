//! Permutations of `[n]`, their lifts to vertex pairs, and cycle censuses.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{pair_count, pair_index, pair_table};
use crate::rational::{binomial, q_from_biguint, qi, Q};

/// Default ceiling on `n` for exhaustive enumeration of `S_n` (10! ≈ 3.6M).
pub const DEFAULT_ENUM_CAP: usize = 10;

/// Hard ceiling regardless of configuration; `n!` must fit in a `u64`.
pub const MAX_ENUM_CAP: usize = 20;

/// A bijection on `[n]`, stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        if !is_bijection(&images) {
            return Err(Error::param(format!("{images:?} is not a permutation of [{}]", images.len())));
        }
        Ok(Permutation { images })
    }

    /// Transposition of `a` and `b` on `[n]`.
    pub fn swap(n: usize, a: usize, b: usize) -> Result<Self> {
        if a >= n || b >= n {
            return Err(Error::param(format!("swap({a},{b}) out of range for n = {n}")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::param("composing permutations of different sizes"));
        }
        Ok(Permutation { images: other.images.iter().map(|&i| self.images[i]).collect() })
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Number of non-fixed points (ñ).
    pub fn moved_points(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &v)| i != v).count()
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type(&self.images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::identity(0));
        }
        let images = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::param(format!("bad image '{t}' in permutation"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }
}

/// A bijection on the pair-index set `[C(n,2))` of an `n`-vertex graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairPermutation {
    n: usize,
    images: Vec<usize>,
}

impl PairPermutation {
    pub fn identity(n: usize) -> Self {
        PairPermutation { n, images: (0..pair_count(n)).collect() }
    }

    /// Wraps an arbitrary bijection on pair indices (not necessarily a lift).
    pub fn from_images(n: usize, images: Vec<usize>) -> Result<Self> {
        if images.len() != pair_count(n) {
            return Err(Error::param(format!(
                "pair permutation has {} images, expected C({n},2) = {}",
                images.len(),
                pair_count(n)
            )));
        }
        if !is_bijection(&images) {
            return Err(Error::param("pair permutation is not a bijection on pair indices"));
        }
        Ok(PairPermutation { n, images })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, e: usize) -> usize {
        self.images[e]
    }

    pub fn compose(&self, other: &PairPermutation) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::param("composing pair permutations of different sizes"));
        }
        Ok(PairPermutation { n: self.n, images: other.images.iter().map(|&e| self.images[e]).collect() })
    }

    pub fn cycle_type(&self) -> CycleType {
        cycle_type(&self.images)
    }
}

/// The lift `l(π)`: `{i,j} ↦ {π(i), π(j)}` on pair indices.
pub fn lift(pi: &Permutation) -> PairPermutation {
    let n = pi.len();
    let images = pair_table(n)
        .into_iter()
        .map(|(i, j)| pair_index(n, pi.apply(i), pi.apply(j)))
        .collect();
    PairPermutation { n, images }
}

/// Cycle-length census of a permutation: `t_ℓ` for every cycle length `ℓ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleType {
    counts: BTreeMap<usize, usize>,
}

impl CycleType {
    /// Builds a census from `(ℓ, t_ℓ)` pairs; zero counts are dropped.
    pub fn from_counts<I: IntoIterator<Item = (usize, usize)>>(counts: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (len, count) in counts {
            if len == 0 {
                return Err(Error::param("cycle length must be at least 1"));
            }
            if count > 0 {
                *map.entry(len).or_insert(0) += count;
            }
        }
        Ok(CycleType { counts: map })
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn count(&self, len: usize) -> usize {
        self.counts.get(&len).copied().unwrap_or(0)
    }

    /// `t₁`, the number of fixed points.
    pub fn t1(&self) -> usize {
        self.count(1)
    }

    /// `t̃ = Σ_{ℓ≥2} ℓ·t_ℓ`, the size of the nontrivial region.
    pub fn t_tilde(&self) -> usize {
        self.counts.iter().filter(|(&l, _)| l >= 2).map(|(&l, &c)| l * c).sum()
    }

    /// `Σ_ℓ ℓ·t_ℓ`.
    pub fn domain_size(&self) -> usize {
        self.counts.iter().map(|(&l, &c)| l * c).sum()
    }

    /// Census with the fixed points removed.
    pub fn nontrivial(&self) -> CycleType {
        CycleType { counts: self.counts.iter().filter(|(&l, _)| l >= 2).map(|(&l, &c)| (l, c)).collect() }
    }

    pub fn with_fixed_points(&self, t1: usize) -> CycleType {
        let mut counts = self.nontrivial().counts;
        if t1 > 0 {
            counts.insert(1, t1);
        }
        CycleType { counts }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(l, c)| format!("{l}^{c}")).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Cycle census of a bijection given by its image slice.
pub fn cycle_type(images: &[usize]) -> CycleType {
    let mut seen = vec![false; images.len()];
    let mut counts = BTreeMap::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = images[cur];
            len += 1;
        }
        *counts.entry(len).or_insert(0) += 1;
    }
    CycleType { counts }
}

fn is_bijection(images: &[usize]) -> bool {
    let mut seen = vec![false; images.len()];
    images.iter().all(|&v| v < images.len() && !std::mem::replace(&mut seen[v], true))
}

/// Derangement numbers `!k` via `!k = (k-1)(!(k-1) + !(k-2))`.
pub fn derangements(k: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::one(), BigUint::zero());
    if k == 0 {
        return prev;
    }
    for i in 2..=k {
        let next = BigUint::from(i - 1) * (&cur + &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `|S_{n,ñ}| = C(n,ñ)·!ñ`: permutations of `[n]` with exactly `n − ñ` fixed points.
pub fn count_support(n: usize, n_tilde: usize) -> Result<BigUint> {
    if n_tilde > n {
        return Err(Error::param(format!("n_tilde = {n_tilde} exceeds n = {n}")));
    }
    Ok(binomial(n as u64, n_tilde as u64) * derangements(n_tilde))
}

/// All of `S_n` in lexicographic order of image sequences, refusing `n > cap`.
pub fn enumerate_perms(n: usize) -> Result<LexPermutations> {
    enumerate_perms_with_cap(n, DEFAULT_ENUM_CAP)
}

pub fn enumerate_perms_with_cap(n: usize, cap: usize) -> Result<LexPermutations> {
    check_cap("permutation enumeration", n, cap)?;
    Ok(LexPermutations { next: Some((0..n).collect()) })
}

pub(crate) fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_ENUM_CAP);
    if n > cap {
        return Err(Error::CapExceeded { what, n, cap });
    }
    Ok(())
}

/// Iterator produced by [`enumerate_perms`].
#[derive(Debug, Clone)]
pub struct LexPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { images: current })
    }
}

fn next_lex(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Both sides of `Σ_ñ |S_{n,ñ}| z^ñ ≤ 1 + n²z²/(1 − nz)`, exactly.
pub fn perm_gf_check(n: usize, z: &Q) -> Result<(Q, Q)> {
    let nz = qi(n as i64) * z;
    if z < &qi(0) || nz >= qi(1) {
        return Err(Error::domain(format!("z = {z} must lie in [0, 1/{n})")));
    }
    let mut lhs = qi(0);
    let mut zpow = qi(1);
    for n_tilde in 0..=n {
        lhs += q_from_biguint(&count_support(n, n_tilde)?) * &zpow;
        zpow *= z;
    }
    let rhs = qi(1) + &nz * &nz / (qi(1) - &nz);
    Ok((lhs, rhs))
}

/// Fixed-point counts of `l(π)` against the counting bounds on `t₁` and `t̃`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T1Bounds {
    pub n: usize,
    pub n_tilde: usize,
    pub t: usize,
    pub t1: usize,
    pub t_tilde: usize,
    /// `C(n−ñ, 2)`
    pub lower: usize,
    /// `C(n−ñ, 2) + ñ/2`, exact rational
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub upper: Q,
    /// `ñ(n−2)/2`
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub t_tilde_lb: Q,
    /// `n·ñ`
    pub t_tilde_ub: usize,
    /// `t₁/t`, exact rational (1 when `t = 0`)
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub t1_ratio: Q,
    /// `(1−ν)² + ν²/(n−1)` with `ν = ñ/n` (1 when `n < 2`)
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub nu_bound: Q,
}

impl T1Bounds {
    pub fn holds(&self) -> bool {
        let t1 = qi(self.t1 as i64);
        let tt = qi(self.t_tilde as i64);
        self.lower <= self.t1
            && t1 <= self.upper
            && tt >= self.t_tilde_lb
            && self.t_tilde <= self.t_tilde_ub
            && self.t1_ratio <= self.nu_bound
    }
}

pub fn t1_bounds_check(pi: &Permutation) -> T1Bounds {
    let n = pi.len();
    let n_tilde = pi.moved_points();
    let census = lift(pi).cycle_type();
    let t = pair_count(n);
    let t1 = census.t1();
    let lower = pair_count(n - n_tilde);
    let (t1_ratio, nu_bound) = if n < 2 {
        (qi(1), qi(1))
    } else {
        let nu = Q::new((n_tilde as i64).into(), (n as i64).into());
        let one_minus = qi(1) - &nu;
        (
            Q::new((t1 as i64).into(), (t as i64).into()),
            &one_minus * &one_minus + &nu * &nu / qi(n as i64 - 1),
        )
    };
    T1Bounds {
        n,
        n_tilde,
        t,
        t1,
        t_tilde: t - t1,
        lower,
        upper: qi(lower as i64) + Q::new((n_tilde as i64).into(), 2.into()),
        t_tilde_lb: Q::new(((n_tilde * n.saturating_sub(2)) as i64).into(), 2.into()),
        t_tilde_ub: n * n_tilde,
        t1_ratio,
        nu_bound,
    }
}

/// Every nontrivial-region size `t̃` realized by some `π ∈ S_{n,ñ}`.
///
/// `t̃ = C(n,2) − C(n−ñ,2) − k` where `k` counts the 2-cycles of `π`; the
/// remaining `ñ − 2k` moved points must fill cycles of length at least 3.
pub fn admissible_t_tilde(n: usize, n_tilde: usize) -> Vec<usize> {
    if n_tilde > n || n_tilde == 1 {
        return Vec::new();
    }
    let base = pair_count(n) - pair_count(n - n_tilde);
    let mut out: Vec<usize> = (0..=n_tilde / 2)
        .filter(|&k| {
            let rest = n_tilde - 2 * k;
            rest == 0 || rest >= 3
        })
        .map(|k| base - k)
        .collect();
    out.sort_unstable();
    out
}
