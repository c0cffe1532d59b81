//! Sparse Laurent polynomials in one variable `z` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_fraction, parse_rational, pow_signed, qi, to_f64, Q};

/// `Σ_j c_j z^j` over signed exponents. Zero coefficients are never stored,
/// so structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(qi(1))
    }

    pub fn constant(c: Q) -> Self {
        LaurentPoly::monomial(c, 0)
    }

    /// The variable `z`.
    pub fn z() -> Self {
        LaurentPoly::monomial(qi(1), 1)
    }

    pub fn monomial(c: Q, exp: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(terms: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `[z^j]`.
    pub fn coeff(&self, exp: i64) -> Q {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Q) -> Self {
        LaurentPoly::from_terms(self.coeffs.iter().map(|(&e, v)| (e, v * c)))
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = LaurentPoly::one();
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

    /// Exact evaluation; `z = 0` is a domain error when negative exponents are present.
    pub fn eval(&self, z: &Q) -> Result<Q> {
        let mut acc = Q::zero();
        for (&e, c) in &self.coeffs {
            acc += c * pow_signed(z, e)?;
        }
        Ok(acc)
    }

    pub fn eval_f64(&self, z: f64) -> f64 {
        self.coeffs.iter().map(|(&e, c)| to_f64(c) * z.powi(e as i32)).sum()
    }

    /// Sum of all coefficients (evaluation at `z = 1`).
    pub fn total(&self) -> Q {
        self.coeffs.values().sum()
    }

    /// `Σ_{j ≤ threshold} [z^j]`.
    pub fn lower_tail(&self, threshold: i64) -> Q {
        self.coeffs.range(..=threshold).map(|(_, c)| c).sum()
    }

    pub fn has_negative_coeff(&self) -> bool {
        self.coeffs.values().any(|c| c.is_negative())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, c) in &rhs.coeffs {
            self.add_term(e, c.clone());
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &rhs.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl fmt::Display for LaurentPoly {
    /// Golden-file form: space-separated `exp:p/q` pairs, exponent ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|(e, c)| format!("{e}:{}", format_fraction(c))).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = LaurentPoly::zero();
        for tok in s.split_whitespace() {
            let (e, c) = tok
                .split_once(':')
                .ok_or_else(|| Error::param(format!("bad polynomial term '{tok}', expected exp:coeff")))?;
            let e: i64 = e.parse().map_err(|_| Error::param(format!("bad exponent in '{tok}'")))?;
            p.add_term(e, parse_rational(c)?);
        }
        Ok(p)
    }
}
