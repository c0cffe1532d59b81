//! Finite-n evaluators for the achievability bounds and a region classifier.
//!
//! Asymptotic hypotheses are turned into explicit inequalities: every `ω(1)`
//! becomes an additive `margin` (default 2) and every `O(f)` becomes
//! `constant · f` (default constant 1). These defaults are conventions, not
//! derived values. Logarithms are natural.

use std::collections::BTreeMap;
use std::f64::consts::E;

use serde::Serialize;
use statrs::distribution::{Binomial, DiscreteCDF};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::genfunc::WMatrix;
use crate::model::{pair_count, PVec};
use crate::perm::admissible_t_tilde;
use crate::rational::to_f64;

/// A bound value together with the inputs it was computed from.
///
/// `value` is capped at 1; `raw` keeps the uncapped number. `uninformative`
/// is set when the cap was hit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub value: f64,
    pub raw: f64,
    pub valid: bool,
    pub uninformative: bool,
    pub inputs: BTreeMap<String, f64>,
    pub extras: BTreeMap<String, f64>,
}

impl BoundReport {
    fn new(name: &str, raw: f64, valid: bool) -> Self {
        let raw = if raw.is_nan() { 1.0 } else { raw };
        BoundReport {
            name: name.to_string(),
            value: raw.min(1.0),
            raw,
            valid,
            uninformative: raw >= 1.0,
            inputs: BTreeMap::new(),
            extras: BTreeMap::new(),
        }
    }

    fn input(mut self, key: &str, v: f64) -> Self {
        if v.is_finite() {
            self.inputs.insert(key.to_string(), v);
        }
        self
    }

    fn extra(mut self, key: &str, v: f64) -> Self {
        if v.is_finite() {
            self.extras.insert(key.to_string(), v);
        }
        self
    }

    /// One-line JSON rendering.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report fields are plain numbers and strings")
    }
}

fn check_correlated(p: &[f64; 4]) -> Result<()> {
    let [p11, p10, p01, p00] = *p;
    if p01 * p10 < p11 * p00 {
        Ok(())
    } else {
        Err(Error::domain(format!("needs p01*p10 < p11*p00, got {} >= {}", p01 * p10, p11 * p00)))
    }
}

/// `(√(p₁₁p₀₀) − √(p₀₁p₁₀))²`.
fn corr_gap(p: &[f64; 4]) -> f64 {
    let [p11, p10, p01, p00] = *p;
    let d = (p11 * p00).sqrt() - (p01 * p10).sqrt();
    d * d
}

/// Result of [`opt_z_bound`]: the bound and the optimizing `z₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OptZ {
    pub bound: f64,
    pub z1: f64,
}

/// `((Σw)² − 2(√(w₀₀w₁₁) − √(w₀₁w₁₀))²)^{t̃/2}`, an upper bound on the mass
/// of `Ã(w, z)` at nonpositive powers of `z`.
pub fn opt_z_bound(w: &WMatrix, t_tilde: usize) -> Result<OptZ> {
    let [w00, w01, w10, w11] = [&w.w00, &w.w01, &w.w10, &w.w11].map(to_f64);
    if [w00, w01, w10, w11].iter().any(|&x| x < 0.0) {
        return Err(Error::domain("weights must be nonnegative"));
    }
    if &w.w01 * &w.w10 >= &w.w00 * &w.w11 {
        return Err(Error::domain("needs w01*w10 < w00*w11"));
    }
    let z1 = (w01 * w10 / (w00 * w11)).sqrt();
    let s = w00 + w01 + w10 + w11;
    let d = (w00 * w11).sqrt() - (w01 * w10).sqrt();
    let base = s * s - 2.0 * d * d;
    Ok(OptZ { bound: base.powf(t_tilde as f64 / 2.0), z1 })
}

/// `z₂ = exp(−½(n−2)(√(p₁₁p₀₀) − √(p₀₁p₁₀))²)`; `P[δ(τ) ≤ 0] ≤ z₂^ñ`.
pub fn dense_z2(n: usize, p: &PVec) -> Result<f64> {
    let pf = p.to_f64();
    check_correlated(&pf)?;
    let k = n.saturating_sub(2) as f64;
    Ok((-0.5 * k * corr_gap(&pf)).exp())
}

/// Evaluation of the dense achievability hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AchOne {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub correlated: bool,
}

/// `(√(p₁₁p₀₀) − √(p₀₁p₁₀))² ≥ (2 ln n + margin)/n` together with positive
/// correlation.
pub fn ach_one_check(n: usize, p: &PVec, margin: f64) -> AchOne {
    let pf = p.to_f64();
    let lhs = corr_gap(&pf);
    let rhs = (2.0 * (n as f64).ln() + margin) / n as f64;
    let correlated = check_correlated(&pf).is_ok();
    AchOne { holds: correlated && lhs >= rhs, lhs, rhs, correlated }
}

/// Bound on `P[δ(τ) ≤ 0 | M̃ = m̃]`:
/// `(m̃/(t̃p′₁₁w*))^m̃ · (α(p, w*)/(1 − p₁₁)²)^{t̃/2}` with
/// `w* = (m̃ ln n / t̃ + p₁₁)/p′₁₁` and `p′ = p/(1 − p₁₁)`.
///
/// When `w*·p₁₁p₀₀ < p₀₁p₁₀` the report is returned with `valid = false`.
pub fn sparse_bound(n: usize, p: &PVec, m_tilde: usize, t_tilde: usize, n_tilde: usize) -> BoundReport {
    let pf = p.to_f64();
    let [p11, p10, p01, p00] = pf;
    let tag = |r: BoundReport| {
        r.input("n", n as f64)
            .input("m_tilde", m_tilde as f64)
            .input("t_tilde", t_tilde as f64)
            .input("n_tilde", n_tilde as f64)
            .input("p11", p11)
            .input("p10", p10)
            .input("p01", p01)
            .input("p00", p00)
    };
    if t_tilde == 0 || p11 <= 0.0 || p11 >= 1.0 || m_tilde > t_tilde {
        return tag(BoundReport::new("sparse_bound", 1.0, false));
    }
    let q11 = p11 / (1.0 - p11);
    let tt = t_tilde as f64;
    let mt = m_tilde as f64;
    let w_star = (mt * (n as f64).ln() / tt + p11) / q11;
    let valid = w_star * p11 * p00 >= p01 * p10;
    let s = 1.0 - p11 + p11 * w_star;
    let d = (p00 * p11 * w_star).sqrt() - (p01 * p10).sqrt();
    let alpha = s * s - 2.0 * d * d;
    let first = if m_tilde == 0 { 0.0 } else { mt * (mt / (tt * q11 * w_star)).ln() };
    let second = tt / 2.0 * (alpha / ((1.0 - p11) * (1.0 - p11))).ln();
    let raw = (first + second).exp();
    tag(BoundReport::new("sparse_bound", if valid { raw } else { 1.0 }, valid))
        .extra("w_star", w_star)
        .extra("alpha", alpha)
        .extra("unchecked", raw)
}

fn hyp_pmf_f64(k: u64, draws: u64, marked: u64, total: u64) -> f64 {
    if k > draws || k > marked || draws - k > total - marked {
        return 0.0;
    }
    (ln_binomial(marked, k) + ln_binomial(total - marked, draws - k) - ln_binomial(total, draws)).exp()
}

/// `P[δ(τ) ≤ 0 | M = m] ≤ ε₁ + ε₂` for every permutation moving `ñ` vertices.
///
/// `ε₁` splits at `m̃* = e²·m·t̃/t` and sums the hypergeometric law of `M̃`
/// against [`sparse_bound`] (capped at 1 per term, and 1 wherever its validity
/// condition fails), maximized over the `t̃` values a permutation with `ñ`
/// moved points can have. `ε₂ = exp(−(e²+1)·m·ñ(n−2)/(n(n−1)))`.
pub fn m_ub(n: usize, m: usize, p: &PVec, n_tilde: usize) -> BoundReport {
    let tag = |r: BoundReport| r.input("n", n as f64).input("m", m as f64).input("n_tilde", n_tilde as f64);
    let t = pair_count(n);
    if n_tilde < 2 || n_tilde > n || m > t {
        return tag(BoundReport::new("m_ub", 1.0, false));
    }
    let e2 = E * E;
    let mut eps1: f64 = 0.0;
    let mut all_valid = true;
    let mut worst_t = 0;
    for t_tilde in admissible_t_tilde(n, n_tilde) {
        let m_star = e2 * m as f64 * t_tilde as f64 / t as f64;
        let top = (m_star.floor() as usize).min(m).min(t_tilde);
        let mut acc = 0.0;
        for mt in 0..=top {
            let w = hyp_pmf_f64(mt as u64, m as u64, t_tilde as u64, t as u64);
            if w == 0.0 {
                continue;
            }
            let r = sparse_bound(n, p, mt, t_tilde, n_tilde);
            all_valid &= r.valid;
            acc += w * r.value;
        }
        if acc > eps1 {
            eps1 = acc;
            worst_t = t_tilde;
        }
    }
    let nf = n as f64;
    let eps2 = (-(e2 + 1.0) * m as f64 * n_tilde as f64 * (nf - 2.0) / (nf * (nf - 1.0))).exp();
    let raw = eps1 + eps2;
    let mut r = tag(BoundReport::new("m_ub", raw, all_valid))
        .extra("eps1", eps1)
        .extra("eps2", eps2)
        .extra("t_tilde_worst", worst_t as f64);
    let z7 = r.value.powf(1.0 / n_tilde as f64);
    r = r.extra("z7_eff", z7);
    r
}

/// `3n²z²`, the union bound over all non-identity permutations when each one
/// moving `ñ` vertices fails with probability at most `z^ñ`.
pub fn union_compose(n: usize, z: f64) -> BoundReport {
    let nf = n as f64;
    BoundReport::new("union_compose", 3.0 * nf * nf * z * z, z >= 0.0).input("n", nf).input("z", z)
}

/// `z₉(1 + p₁₁(z₈ − 1))^t + P[M > (1+ε)·t·p₁₁]` with `M ~ Bin(t, p₁₁)`.
pub fn m_average(n: usize, p: &PVec, z8: f64, z9: f64, eps: f64) -> BoundReport {
    let p11 = p.p11();
    let tag = |r: BoundReport| {
        r.input("n", n as f64).input("p11", p11).input("z8", z8).input("z9", z9).input("eps", eps)
    };
    let valid = z8 > 0.0 && z8 <= 1.0 && z9 > 0.0 && eps > 0.0;
    if !valid {
        return tag(BoundReport::new("m_average", 1.0, false));
    }
    let t = pair_count(n) as u64;
    let main = z9 * (t as f64 * (1.0 + p11 * (z8 - 1.0)).ln()).exp();
    let cut = (1.0 + eps) * t as f64 * p11;
    let tail = match Binomial::new(p11, t) {
        Ok(b) if cut < t as f64 => b.sf(cut.floor() as u64),
        _ => 0.0,
    };
    tag(BoundReport::new("m_average", main + tail, true)).extra("main", main).extra("tail", tail)
}

/// Knobs that replace the asymptotic symbols in the regime conditions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct ClassifyConstants {
    /// Replaces each `ω(1)`.
    pub margin: f64,
    /// Replaces the constant inside each `O(·)`.
    pub constant: f64,
}

impl Default for ClassifyConstants {
    fn default() -> Self {
        ClassifyConstants { margin: 2.0, constant: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    /// No estimator succeeds with non-vanishing probability.
    Converse,
    /// Dense achievability via the correlation gap.
    AchievableDense,
    /// Sparse achievability at the sharp threshold.
    AchievableSparse,
    /// Correlated, but no hypothesis holds at these margins.
    Gap,
    /// Not positively correlated.
    Unclassified,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub region: Region,
    pub correlated: bool,
    /// Slack of each inequality; positive means satisfied.
    pub margins: BTreeMap<String, f64>,
}

impl RegionVerdict {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict fields are plain numbers and strings")
    }
}

/// Places `(n, p)` in a regime by evaluating each hypothesis at finite `n`.
pub fn classify(n: usize, p: &PVec, c: &ClassifyConstants) -> RegionVerdict {
    let pf = p.to_f64();
    let [p11, p10, p01, p00] = pf;
    let nf = n as f64;
    let ln = nf.ln();
    let ratio = p01 * p10 / (p11 * p00);
    let correlated = check_correlated(&pf).is_ok();
    let ach = ach_one_check(n, p, c.margin);

    let mut margins = BTreeMap::new();
    let mut put = |k: &str, v: f64| {
        if v.is_finite() {
            margins.insert(k.to_string(), v);
        }
    };
    let s_threshold = p11 - (ln + c.margin) / nf;
    let s_p11 = c.constant / ln - p11;
    let s_noise = c.constant / ln - (p01 + p10);
    let s_ratio = c.constant / ln.powi(3) - ratio;
    let s_conv = (ln - c.margin) / nf - p11;
    put("sparse_threshold", s_threshold);
    put("sparse_p11", s_p11);
    put("sparse_noise", s_noise);
    put("sparse_correlation", s_ratio);
    put("dense_gap", ach.lhs - ach.rhs);
    put("converse_threshold", s_conv);
    put("correlation", 1.0 - ratio);

    let region = if !correlated {
        Region::Unclassified
    } else if s_threshold >= 0.0 && s_p11 >= 0.0 && s_noise >= 0.0 && s_ratio >= 0.0 {
        Region::AchievableSparse
    } else if ach.holds {
        Region::AchievableDense
    } else if s_conv >= 0.0 {
        Region::Converse
    } else {
        Region::Gap
    };
    RegionVerdict { region, correlated, margins }
}
