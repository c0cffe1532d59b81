//! Sampling PGFs and the Chernoff-style tail bound.

use num_traits::{One, Signed};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};
use crate::rational::{binomial, pow_signed, q_from_biguint, Q};

/// PGF of the number of marked items when drawing `a` of `n` items without
/// replacement, `b` of them marked.
pub fn hyp_pgf(a: usize, b: usize, n: usize) -> Result<LaurentPoly> {
    check_counts(a, b, n)?;
    let total = q_from_biguint(&binomial(n as u64, a as u64));
    let lo = (a + b).saturating_sub(n);
    let hi = a.min(b);
    Ok(LaurentPoly::from_terms((lo..=hi).map(|k| {
        let ways = binomial(b as u64, k as u64) * binomial((n - b) as u64, (a - k) as u64);
        (k as i64, q_from_biguint(&ways) / &total)
    })))
}

/// `(1 − b/n + (b/n)·z)^a`, the with-replacement counterpart of [`hyp_pgf`].
pub fn bin_pgf(a: usize, b: usize, n: usize) -> Result<LaurentPoly> {
    check_counts(a, b, n)?;
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let frac = Q::new((b as i64).into(), (n as i64).into());
    let step = LaurentPoly::from_terms([(0, Q::one() - &frac), (1, frac)]);
    Ok(step.pow(a))
}

fn check_counts(a: usize, b: usize, n: usize) -> Result<()> {
    if a > n || b > n {
        return Err(Error::param(format!("need a, b <= n, got a = {a}, b = {b}, n = {n}")));
    }
    Ok(())
}

/// `z₁^{−j}·g(z₁)`, an upper bound on `Σ_{i≤j} [zⁱ]g` for `g` with
/// nonnegative coefficients and `0 < z₁ ≤ 1`.
pub fn chernoff_tail(g: &LaurentPoly, j: i64, z1: &Q) -> Result<Q> {
    if g.has_negative_coeff() {
        return Err(Error::domain("chernoff_tail needs nonnegative coefficients"));
    }
    if !z1.is_positive() || *z1 > Q::one() {
        return Err(Error::domain(format!("z1 must lie in (0, 1], got {z1}")));
    }
    Ok(pow_signed(z1, -j)? * g.eval(z1)?)
}

/// `Σ_{i≤j} [zⁱ]g`.
pub fn exact_lower_tail(g: &LaurentPoly, j: i64) -> Q {
    g.lower_tail(j)
}
