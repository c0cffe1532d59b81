//! The cyclic-sequence families `a_ℓ, b_ℓ, c_ℓ, d_ℓ`, cycle products and the
//! joint law of `(M̃, δ)`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::bipoly::BiPoly;
use super::laurent::LaurentPoly;
use crate::error::{Error, Result};
use crate::model::PVec;
use crate::perm::{check_cap, CycleType};
use crate::rational::{binomial, q, q_from_biguint, Q};

/// Largest cycle length the `4^ℓ` enumeration oracles accept.
pub const ORACLE_CAP: usize = 10;

/// Numeric values for the formal weights `w_ab`, where `a` is the label in the
/// first graph and `b` the label in the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WMatrix {
    pub w00: Q,
    pub w01: Q,
    pub w10: Q,
    pub w11: Q,
}

impl WMatrix {
    pub fn new(w00: Q, w01: Q, w10: Q, w11: Q) -> Self {
        WMatrix { w00, w01, w10, w11 }
    }

    pub fn ones() -> Self {
        WMatrix::new(Q::one(), Q::one(), Q::one(), Q::one())
    }

    /// `w_ab = p_ab`.
    pub fn from_pvec(p: &PVec) -> Result<Self> {
        let [p11, p10, p01, p00] = p.require_exact("WMatrix::from_pvec")?.clone();
        Ok(WMatrix::new(p00, p01, p10, p11))
    }

    pub fn get(&self, a: usize, b: usize) -> &Q {
        match (a, b) {
            (0, 0) => &self.w00,
            (0, 1) => &self.w01,
            (1, 0) => &self.w10,
            _ => &self.w11,
        }
    }

    pub fn sum(&self) -> Q {
        &self.w00 + &self.w01 + &self.w10 + &self.w11
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &WMatrix) -> WMatrix {
        WMatrix::new(
            &self.w00 * &other.w00,
            &self.w01 * &other.w01,
            &self.w10 * &other.w10,
            &self.w11 * &other.w11,
        )
    }

    /// `self · otherᵀ`.
    pub fn times_transpose(&self, other: &WMatrix) -> WMatrix {
        let e = |a: usize, b: usize| self.get(a, 0) * other.get(b, 0) + self.get(a, 1) * other.get(b, 1);
        WMatrix::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    /// `w^μ = Π w_ab^{μ_ab}` with `μ` given as `[k00, k01, k10, k11]`.
    fn monomial(&self, k: [u32; 4]) -> Q {
        let ws = [&self.w00, &self.w01, &self.w10, &self.w11];
        ws.iter().zip(k).map(|(w, e)| num_traits::pow(Q::clone(w), e as usize)).product()
    }
}

/// Commutative rings with rational scalars that `d_ℓ` can be evaluated in.
pub trait GfRing: Clone {
    fn constant(c: Q) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
}

impl GfRing for Q {
    fn constant(c: Q) -> Self {
        c
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        self * c
    }
}

impl GfRing for LaurentPoly {
    fn constant(c: Q) -> Self {
        LaurentPoly::constant(c)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        LaurentPoly::scale(self, c)
    }
}

impl GfRing for BiPoly {
    fn constant(c: Q) -> Self {
        BiPoly::constant(c)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        BiPoly::scale(self, c)
    }
}

/// `d_ℓ(u, v) = 2 Σ_i C(ℓ, 2i) (u/2)^{ℓ−2i} ((u/2)² + v)^i` in any [`GfRing`].
///
/// `ℓ = 0` yields the constant 2.
pub fn d_ell_ring<R: GfRing>(ell: usize, u: &R, v: &R) -> R {
    let half = u.scale(&q(1, 2));
    let base = half.mul(&half).add(v);
    let mut half_pows = vec![R::constant(Q::one())];
    for k in 1..=ell {
        half_pows.push(half_pows[k - 1].mul(&half));
    }
    let mut acc = R::constant(Q::zero());
    let mut base_pow = R::constant(Q::one());
    for i in 0..=ell / 2 {
        if i > 0 {
            base_pow = base_pow.mul(&base);
        }
        let c = q_from_biguint(&binomial(ell as u64, 2 * i as u64));
        acc = acc.add(&half_pows[ell - 2 * i].mul(&base_pow).scale(&c));
    }
    acc.scale(&Q::from_integer(2.into()))
}

/// `d_ℓ(u, v)` with scalar `u` and `v` a Laurent polynomial in `z`.
pub fn d_ell(ell: usize, u: &Q, v: &LaurentPoly) -> LaurentPoly {
    d_ell_ring(ell, &LaurentPoly::constant(u.clone()), v)
}

/// Signature of a `d_ℓ` implementation, so identity checks can run against a
/// substitute.
pub type DFn<'a> = &'a dyn Fn(usize, &Q, &LaurentPoly) -> LaurentPoly;

fn uv(w: &WMatrix) -> (Q, LaurentPoly) {
    let a = &w.w00 * &w.w11;
    let b = &w.w01 * &w.w10;
    let v = LaurentPoly::from_terms([(1, a.clone()), (0, -a - &b), (-1, b)]);
    (w.sum(), v)
}

/// `a_ℓ(w, z)` through `d_ℓ(u, v)`.
pub fn a_ell_closed(ell: usize, w: &WMatrix) -> LaurentPoly {
    a_ell_closed_with(ell, w, &d_ell)
}

pub fn a_ell_closed_with(ell: usize, w: &WMatrix, d: DFn<'_>) -> LaurentPoly {
    let (u, v) = uv(w);
    d(ell, &u, &v)
}

/// `c_ℓ(x) = d_ℓ(x00 + x11, x01·x10 − x00·x11)`.
pub fn c_ell_closed(ell: usize, x: &WMatrix) -> Q {
    let v = &x.w01 * &x.w10 - &x.w00 * &x.w11;
    d_ell(ell, &(&x.w00 + &x.w11), &LaurentPoly::constant(v)).coeff(0)
}

fn check_oracle(ell: usize) -> Result<()> {
    if ell == 0 {
        return Err(Error::param("cycle length must be at least 1"));
    }
    check_cap("cycle length", ell, ORACLE_CAP)
}

fn rotate(g: u32, ell: usize) -> u32 {
    (g >> 1) | ((g & 1) << (ell - 1))
}

fn type_counts(g: u32, h: u32, ell: usize) -> [u32; 4] {
    let mask = (1u32 << ell) - 1;
    let k11 = (g & h).count_ones();
    let k10 = (g & !h & mask).count_ones();
    let k01 = (!g & h & mask).count_ones();
    [ell as u32 - k11 - k10 - k01, k01, k10, k11]
}

/// `a_ℓ(w, z)` by summing over all `4^ℓ` label pairs on one cycle.
pub fn a_ell_oracle(ell: usize, w: &WMatrix) -> Result<LaurentPoly> {
    check_oracle(ell)?;
    let mut groups: HashMap<([u32; 4], i64), u64> = HashMap::new();
    for g in 0..1u32 << ell {
        let gs = rotate(g, ell);
        for h in 0..1u32 << ell {
            let k = type_counts(g, h, ell);
            let delta = k[3] as i64 - (gs & h).count_ones() as i64;
            *groups.entry((k, delta)).or_insert(0) += 1;
        }
    }
    Ok(LaurentPoly::from_terms(groups.into_iter().map(|((k, d), c)| (d, w.monomial(k) * Q::from_integer(c.into())))))
}

/// `b_ℓ(x, y) = Σ_{g,h} x^{μ(g,h)} y^{μ(g∘σ,h)}` by enumeration.
pub fn b_ell_oracle(ell: usize, x: &WMatrix, y: &WMatrix) -> Result<Q> {
    check_oracle(ell)?;
    let mut groups: HashMap<([u32; 4], [u32; 4]), u64> = HashMap::new();
    for g in 0..1u32 << ell {
        let gs = rotate(g, ell);
        for h in 0..1u32 << ell {
            *groups.entry((type_counts(g, h, ell), type_counts(gs, h, ell))).or_insert(0) += 1;
        }
    }
    Ok(groups.into_iter().map(|((kx, ky), c)| x.monomial(kx) * y.monomial(ky) * Q::from_integer(c.into())).sum())
}

/// `c_ℓ(x) = Σ_f x^{μ(f, f∘σ)}` by enumeration.
pub fn c_ell_oracle(ell: usize, x: &WMatrix) -> Result<Q> {
    check_oracle(ell)?;
    let mut groups: HashMap<[u32; 4], u64> = HashMap::new();
    for f in 0..1u32 << ell {
        *groups.entry(type_counts(f, rotate(f, ell), ell)).or_insert(0) += 1;
    }
    Ok(groups.into_iter().map(|(k, c)| x.monomial(k) * Q::from_integer(c.into())).sum())
}

/// `d_ℓ(u, v)` as a sum over cyclic binary sequences with no two adjacent
/// ones, weighted `u^{#00} v^{#01}` by adjacent-position patterns.
pub fn d_ell_oracle(ell: usize, u: &Q, v: &Q) -> Result<Q> {
    check_oracle(ell)?;
    let mask = (1u32 << ell) - 1;
    let mut acc = Q::zero();
    for f in 0..1u32 << ell {
        let next = rotate(f, ell);
        if f & next != 0 {
            continue;
        }
        let k00 = (!f & !next & mask).count_ones() as usize;
        let k01 = (!f & next & mask).count_ones() as usize;
        acc += num_traits::pow(u.clone(), k00) * num_traits::pow(v.clone(), k01);
    }
    Ok(acc)
}

fn cycle_product(ct: &CycleType, w: &WMatrix, skip_fixed: bool) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for (&ell, &count) in ct.counts() {
        if skip_fixed && ell == 1 {
            continue;
        }
        acc = &acc * &a_ell_closed(ell, w).pow(count);
    }
    acc
}

/// `A = Π_ℓ a_ℓ^{t_ℓ}`.
#[allow(non_snake_case)]
pub fn big_A(ct: &CycleType, w: &WMatrix) -> LaurentPoly {
    cycle_product(ct, w, false)
}

/// `Ã = Π_{ℓ≥2} a_ℓ^{t_ℓ}`.
#[allow(non_snake_case)]
pub fn tilde_A(ct: &CycleType, w: &WMatrix) -> LaurentPoly {
    cycle_product(ct, w, true)
}

/// Exact joint law of `(M̃, δ)` for a lifted permutation with census `ct`:
/// the coefficient of `W^m z^d` is `P[M̃ = m, δ = d]`.
pub fn joint_pmf(ct: &CycleType, p: &PVec) -> Result<BiPoly> {
    let [p11, p10, p01, p00] = p.require_exact("joint_pmf")?;
    let u = BiPoly::constant(p00 + p01 + p10) + BiPoly::monomial(p11.clone(), 1, 0);
    let a = p00 * p11;
    let b = p01 * p10;
    let mut v = BiPoly::zero();
    v.add_term(1, 1, a.clone());
    v.add_term(1, 0, -a);
    v.add_term(0, -1, b.clone());
    v.add_term(0, 0, -b);
    let mut acc = BiPoly::one();
    for (&ell, &count) in ct.counts() {
        if ell >= 2 {
            acc = &acc * &d_ell_ring(ell, &u, &v).pow(count);
        }
    }
    Ok(acc)
}

/// Joint law of `(M, M̃, δ)`, keyed `(m, m̃, d)`.
pub type JointTotal = BTreeMap<(u32, u32, i64), Q>;

/// [`joint_pmf`] extended by the `Bin(t₁, p₁₁)` count of `(1,1)` labels on
/// the fixed pairs, so `M = M₁ + M̃`.
pub fn joint_with_total(ct: &CycleType, p: &PVec) -> Result<JointTotal> {
    let [p11, ..] = p.require_exact("joint_with_total")?;
    let fixed = LaurentPoly::from_terms([(0, Q::one() - p11), (1, p11.clone())]).pow(ct.t1());
    let joint = joint_pmf(ct, p)?;
    let mut out = JointTotal::new();
    for ((mt, d), c) in joint.terms() {
        for (m1, c1) in fixed.terms() {
            let key = (m1 as u32 + mt, mt, d);
            let slot = out.entry(key).or_insert_with(Q::zero);
            *slot += c * c1;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn sample_w() -> WMatrix {
        WMatrix::new(q(1, 2), q(1, 3), q(1, 5), q(1, 7))
    }

    fn a2_formula(w: &WMatrix) -> LaurentPoly {
        let s = w.sum();
        let a = &w.w00 * &w.w11 * qi(2);
        let b = &w.w01 * &w.w10 * qi(2);
        LaurentPoly::from_terms([(0, &s * &s - &a - &b), (1, a), (-1, b)])
    }

    #[test]
    fn single_cycle_examples() {
        let w = sample_w();
        assert_eq!(a_ell_oracle(1, &w).unwrap(), LaurentPoly::constant(w.sum()));
        let ones = LaurentPoly::from_terms([(-1, qi(2)), (0, qi(12)), (1, qi(2))]);
        assert_eq!(a_ell_oracle(2, &WMatrix::ones()).unwrap(), ones);
        assert_eq!(a_ell_closed(2, &WMatrix::ones()), ones);
        assert_eq!(a_ell_oracle(2, &w).unwrap(), a2_formula(&w));
        assert_eq!(a_ell_closed(1, &w), LaurentPoly::constant(w.sum()));
        assert_eq!(a_ell_closed(5, &w), a_ell_oracle(5, &w).unwrap());
        assert!(a_ell_oracle(11, &w).is_err());
        assert!(a_ell_oracle(0, &w).is_err());
    }

    #[test]
    fn b_and_c_examples() {
        let x = sample_w();
        let y = WMatrix::new(q(2, 3), q(1, 4), q(3, 2), qi(5));
        let b1 = &x.w00 * &y.w00 + &x.w01 * &y.w01 + &x.w10 * &y.w10 + &x.w11 * &y.w11;
        assert_eq!(b_ell_oracle(1, &x, &y).unwrap(), b1);
        assert_eq!(c_ell_oracle(2, &WMatrix::ones()).unwrap(), qi(4));
        assert_eq!(b_ell_oracle(2, &WMatrix::ones(), &WMatrix::ones()).unwrap(), qi(16));
        assert_eq!(b_ell_oracle(3, &x, &y).unwrap(), c_ell_oracle(3, &x.times_transpose(&y)).unwrap());
        assert_eq!(c_ell_closed(4, &x), c_ell_oracle(4, &x).unwrap());
        assert!(c_ell_oracle(11, &x).is_err());
    }

    #[test]
    fn d_examples() {
        let v = LaurentPoly::constant(qi(5));
        assert_eq!(d_ell(1, &qi(3), &v), LaurentPoly::constant(qi(3)));
        assert_eq!(d_ell(2, &qi(3), &v), LaurentPoly::constant(qi(19)));
        assert_eq!(d_ell(3, &qi(2), &LaurentPoly::one()), LaurentPoly::constant(qi(14)));
        for ell in 1..=8 {
            assert_eq!(d_ell_oracle(ell, &q(3, 2), &q(-2, 7)).unwrap(), d_ell_ring(ell, &q(3, 2), &q(-2, 7)));
        }
    }

    #[test]
    fn cycle_products() {
        let w = sample_w();
        let u = LaurentPoly::constant(w.sum());
        let id = CycleType::from_counts([(1, 6)]).unwrap();
        assert_eq!(big_A(&id, &w), u.pow(6));
        assert_eq!(tilde_A(&id, &w), LaurentPoly::one());
        let ct = CycleType::from_counts([(1, 3), (2, 1)]).unwrap();
        assert_eq!(big_A(&ct, &w), &u.pow(3) * &a_ell_closed(2, &w));
        let mixed = CycleType::from_counts([(1, 2), (2, 2), (3, 1)]).unwrap();
        assert_eq!(big_A(&mixed, &w), &u.pow(2) * &tilde_A(&mixed, &w));
    }

    #[test]
    fn joint_examples() {
        let p = PVec::exact(q(1, 2), qi(0), qi(0), q(1, 2)).unwrap();
        let id = CycleType::from_counts([(1, 4)]).unwrap();
        assert_eq!(joint_pmf(&id, &p).unwrap(), BiPoly::one());
        let two = CycleType::from_counts([(2, 1)]).unwrap();
        let j = joint_pmf(&two, &p).unwrap();
        assert_eq!(j.coeff(1, 1), q(1, 2));
        assert_eq!(j.coeff(2, 0), q(1, 4));
        assert_eq!(j.coeff(0, 0), q(1, 4));
        assert_eq!(j.total(), qi(1));

        let p = PVec::exact(q(1, 5), q(1, 10), q(1, 7), q(1, 1) - q(1, 5) - q(1, 10) - q(1, 7)).unwrap();
        let ct = CycleType::from_counts([(1, 1), (2, 1), (3, 1)]).unwrap();
        let j = joint_pmf(&ct, &p).unwrap();
        assert_eq!(j.total(), qi(1));
        let bin: Vec<Q> =
            LaurentPoly::from_terms([(0, q(4, 5)), (1, q(1, 5))]).pow(5).terms().map(|(_, c)| c.clone()).collect();
        assert_eq!(j.w_marginal(), bin);
        let total = joint_with_total(&ct, &p).unwrap();
        assert_eq!(total.values().sum::<Q>(), qi(1));
    }
}
