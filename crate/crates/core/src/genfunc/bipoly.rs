//! Polynomials in a marker `W` (nonnegative powers) and `z` (signed powers).
//!
//! Used to carry the joint law of `(M̃, δ)`: the coefficient of `W^m z^d` is
//! `P[M̃ = m, δ = d]`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::Zero;

use super::laurent::LaurentPoly;
use crate::rational::{qi, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    coeffs: BTreeMap<(u32, i64), Q>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::constant(qi(1))
    }

    pub fn constant(c: Q) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    /// `c·W^w·z^d`.
    pub fn monomial(c: Q, w: u32, d: i64) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(w, d, c);
        p
    }

    /// Lifts a polynomial in `z` alone.
    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let mut out = BiPoly::zero();
        for (e, c) in p.terms() {
            out.add_term(0, e, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, w: u32, d: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((w, d)).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(w, d));
        }
    }

    pub fn coeff(&self, w: u32, d: i64) -> Q {
        self.coeffs.get(&(w, d)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, i64), &Q)> {
        self.coeffs.iter().map(|(&k, c)| (k, c))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = BiPoly::zero();
        for (&(w, d), v) in &self.coeffs {
            out.add_term(w, d, v * c);
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = BiPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn total(&self) -> Q {
        self.coeffs.values().sum()
    }

    /// `[W^w]` as a polynomial in `z`.
    pub fn slice_w(&self, w: u32) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.range((w, i64::MIN)..=(w, i64::MAX)).map(|(&(_, d), c)| (d, c.clone())))
    }

    /// Marginal over `z`: entry `m` is `Σ_d [W^m z^d]`.
    pub fn w_marginal(&self) -> Vec<Q> {
        let max_w = self.coeffs.keys().map(|&(w, _)| w).max().unwrap_or(0) as usize;
        let mut out = vec![Q::zero(); max_w + 1];
        for (&(w, _), c) in &self.coeffs {
            out[w as usize] += c;
        }
        out
    }

    /// Marginal over `W` as a polynomial in `z`.
    pub fn z_marginal(&self) -> LaurentPoly {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(&(_, d), c)| (d, c.clone())))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(w, d), c) in &rhs.coeffs {
            out.add_term(w, d, c.clone());
        }
        out
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        &self + &rhs
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(wa, da), ca) in &self.coeffs {
            for (&(wb, db), cb) in &rhs.coeffs {
                out.add_term(wa + wb, da + db, ca * cb);
            }
        }
        out
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}
