//! The generating-function identity and inequality suite behind `verify-gf`.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genfunc::{
    a_ell_closed_with, a_ell_oracle, b_ell_oracle, bin_pgf, c_ell_oracle, d_ell, d_ell_oracle, hyp_pgf, DFn,
    LaurentPoly, WMatrix,
};
use crate::model::{rng_from_seed, ModelRng};
use crate::rational::{q, Q};

/// Largest cycle length the suite runs to.
pub const MAX_DEPTH: usize = 8;
const SAMPLES: usize = 20;
const SEED: u64 = 0x005e_ed6f;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult { name, cases: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GfReport {
    pub depth: usize,
    pub checks: Vec<CheckResult>,
}

impl GfReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for GfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "{status} {} ({} cases", c.name, c.cases)?;
            if !c.passed() {
                write!(f, ", {} failures", c.failures)?;
            }
            write!(f, ")")?;
            if let Some(first) = &c.first_failure {
                write!(f, ": {first}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Strictly positive rational weights with numerators and denominators in `1..=9`.
pub fn random_wmatrix(rng: &mut ModelRng) -> WMatrix {
    let mut e = || q(rng.gen_range(1..=9), rng.gen_range(1..=9));
    WMatrix::new(e(), e(), e(), e())
}

/// Runs the suite with the built-in `d_ℓ`.
pub fn verify_gf(depth: usize) -> Result<GfReport> {
    verify_gf_with(depth, SAMPLES, SEED, &d_ell)
}

/// Runs the suite for `ℓ ≤ depth` on `samples` random weight matrices, with
/// `d` standing in for `d_ℓ` wherever a closed form is used.
pub fn verify_gf_with(depth: usize, samples: usize, seed: u64, d: DFn<'_>) -> Result<GfReport> {
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::param(format!("depth must be in 1..={MAX_DEPTH}, got {depth}")));
    }
    let mut rng = rng_from_seed(seed);
    let pairs: Vec<(WMatrix, WMatrix)> = (0..samples).map(|_| (random_wmatrix(&mut rng), random_wmatrix(&mut rng))).collect();
    let signed: Vec<Q> = (0..samples).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=9))).collect();

    let mut a_eq = CheckResult::new("a_ell closed form = enumeration");
    let mut bc = CheckResult::new("b_ell(x,y) = c_ell(x y^T)");
    let mut cd = CheckResult::new("c_ell(x) = d_ell(x00+x11, x01 x10 - x00 x11)");
    let mut dd = CheckResult::new("d_ell = cyclic no-11 enumeration");
    let mut ab = CheckResult::new("a_ell(x.y, y01 y10/(y00 y11)) = b_ell(x,y)");
    let mut two = CheckResult::new("a_ell <= a_2^(ell/2)");
    let grid: Vec<Q> = [(1, 16), (1, 8), (1, 4), (1, 2), (1, 1), (2, 1), (4, 1)].iter().map(|&(a, b)| q(a, b)).collect();

    for ell in 1..=depth {
        for (i, (x, y)) in pairs.iter().enumerate() {
            let closed = a_ell_closed_with(ell, x, d);
            a_eq.record(closed == a_ell_oracle(ell, x)?, || format!("ell = {ell}, sample {i}"));

            let b = b_ell_oracle(ell, x, y)?;
            bc.record(b == c_ell_oracle(ell, &x.times_transpose(y))?, || format!("ell = {ell}, sample {i}"));

            let v = &x.w01 * &x.w10 - &x.w00 * &x.w11;
            let c_closed = d(ell, &(&x.w00 + &x.w11), &LaurentPoly::constant(v)).coeff(0);
            cd.record(c_closed == c_ell_oracle(ell, x)?, || format!("ell = {ell}, sample {i}"));

            let u = x.sum();
            let d_closed = d(ell, &u, &LaurentPoly::constant(signed[i].clone())).coeff(0);
            dd.record(d_closed == d_ell_oracle(ell, &u, &signed[i])?, || format!("ell = {ell}, sample {i}"));

            let z = &y.w01 * &y.w10 / (&y.w00 * &y.w11);
            let a_xy = a_ell_closed_with(ell, &x.hadamard(y), d).eval(&z)?;
            ab.record(a_xy == b, || format!("ell = {ell}, sample {i}"));

            if ell >= 2 {
                let a_poly = closed;
                let a2_poly = a_ell_closed_with(2, x, d);
                for z in &grid {
                    let a = a_poly.eval(z)?;
                    let a2 = a2_poly.eval(z)?;
                    let ok = a2 >= Q::from_integer(0.into())
                        && (a <= Q::from_integer(0.into()) || num_traits::pow(a.clone(), 2) <= num_traits::pow(a2, ell));
                    two.record(ok, || format!("ell = {ell}, sample {i}, z = {z}"));
                }
            }
        }
    }

    let mut hb = CheckResult::new("Hyp(a,b,n) <= Bin(a,b,n)");
    let hgrid: Vec<Q> =
        [(1, 8), (1, 4), (1, 2), (1, 1), (3, 2), (2, 1), (4, 1), (8, 1)].iter().map(|&(a, b)| q(a, b)).collect();
    for n in 0..=12 {
        for a in 0..=n {
            for b in 0..=n {
                let h = hyp_pgf(a, b, n)?;
                let bi = bin_pgf(a, b, n)?;
                for z in &hgrid {
                    hb.record(h.eval(z)? <= bi.eval(z)?, || format!("a = {a}, b = {b}, n = {n}, z = {z}"));
                }
            }
        }
    }

    Ok(GfReport { depth, checks: vec![a_eq, bc, cd, dd, ab, two, hb] })
}
