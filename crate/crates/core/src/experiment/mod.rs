//! Monte Carlo trials, parameter sweeps and their flat-file outputs.
//!
//! A trial is reproducible from its seed alone: one ChaCha stream draws the
//! correlated pair and then the planted permutation. Sweeps hand trial `k` of
//! cell `c` the seed `master + c·trials + k` and gather results in cell/trial
//! order, so the CSV does not depend on the thread count.

mod plot;
mod verify;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{automorphism_count_with, map_estimate_with};
use crate::model::{anonymize, intersection, rng_from_seed, sample_pair_with, subsampling_to_pvec, PVec, SubsamplingParams};
use crate::perm::{check_cap, Permutation, DEFAULT_ENUM_CAP};
use crate::rational::Q;

pub use plot::{emit_plot, parse_sweep_csv, render_svg, PlotRow};
pub use verify::{random_wmatrix, verify_gf, verify_gf_with, CheckResult, GfReport};

/// Header of the sweep CSV.
pub const CSV_HEADER: [&str; 11] =
    ["n", "p11", "p10", "p01", "p00", "trials", "strict_rate", "mean_eta", "mean_q", "mean_aut", "seed"];

/// Everything recorded about one trial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult {
    pub cell: usize,
    pub seed: u64,
    pub strict_success: bool,
    pub q_size: u64,
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub eta: Q,
    /// `min δ` over non-identity permutations of `Ga` against `Gb`.
    pub min_rival_delta: Option<i64>,
    /// Edges of `Ga ∧ Gb`.
    pub m: usize,
    /// `|Aut(Ga ∧ Gb)|`.
    pub aut: u64,
    pub wall_ms: f64,
}

pub fn run_trial(n: usize, p: &PVec, seed: u64) -> Result<TrialResult> {
    run_trial_in_cell(n, p, seed, 0, DEFAULT_ENUM_CAP)
}

fn run_trial_in_cell(n: usize, p: &PVec, seed: u64, cell: usize, cap: usize) -> Result<TrialResult> {
    check_cap("trial", n, cap)?;
    let start = Instant::now();
    let mut rng = rng_from_seed(seed);
    let pair = sample_pair_with(n, p, &mut rng)?;
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(&mut rng);
    let pi = Permutation::from_images(images)?;
    let gc = anonymize(&pair.ga, &pi)?;
    let res = map_estimate_with(&gc, &pair.gb, Some(&pi), cap, false)?;
    let score = res.planted.expect("planted permutation was supplied");
    let both = intersection(&pair.ga, &pair.gb)?;
    let aut = automorphism_count_with(&both, cap)?;
    Ok(TrialResult {
        cell,
        seed,
        strict_success: score.strict_success,
        q_size: score.q_size,
        eta: score.eta,
        min_rival_delta: score.min_rival_delta,
        m: both.edge_count(),
        aut,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// One vertex count or several.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NSpec {
    One(usize),
    Many(Vec<usize>),
}

impl NSpec {
    pub fn values(&self) -> Vec<usize> {
        match self {
            NSpec::One(n) => vec![*n],
            NSpec::Many(v) => v.clone(),
        }
    }
}

/// The parameter grid of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridSpec {
    /// Explicit `[p11, p10, p01, p00]` rows.
    Explicit { p: Vec<[f64; 4]> },
    /// Cartesian product of subsampling parameters.
    Subsampling { r: Vec<f64>, sa: Vec<f64>, sb: Vec<f64> },
    /// `p11 = c·ln n / n` for each `c`, with fixed noise and `p00` the rest.
    Threshold {
        c: Vec<f64>,
        #[serde(default)]
        p10: f64,
        #[serde(default)]
        p01: f64,
    },
}

fn default_cap() -> usize {
    DEFAULT_ENUM_CAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub n: NSpec,
    pub trials: usize,
    pub grid: GridSpec,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Worker threads; `None` uses the global rayon pool.
    #[serde(default)]
    pub threads: Option<usize>,
    /// Enumeration cap on `n`.
    #[serde(default = "default_cap")]
    pub cap: usize,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        SweepConfig::from_json(&text)
    }

    /// The `(n, p)` cells in output order, validated.
    pub fn cells(&self) -> Result<Vec<(usize, PVec)>> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let mut out = Vec::new();
        for n in self.n.values() {
            if n == 0 {
                return Err(Error::Config("n must be at least 1".into()));
            }
            check_cap("sweep", n, self.cap).map_err(|e| Error::Config(e.to_string()))?;
            let named = |idx: usize, r: Result<PVec>| {
                r.map_err(|e| Error::Config(format!("grid cell {idx} (n = {n}) is invalid: {e}")))
            };
            match &self.grid {
                GridSpec::Explicit { p } => {
                    for row in p {
                        out.push((n, named(out.len(), PVec::float(row[0], row[1], row[2], row[3]))?));
                    }
                }
                GridSpec::Subsampling { r, sa, sb } => {
                    for &r in r {
                        for &sa in sa {
                            for &sb in sb {
                                out.push((n, named(out.len(), subsampling_to_pvec(&SubsamplingParams { r, sa, sb }))?));
                            }
                        }
                    }
                }
                GridSpec::Threshold { c, p10, p01 } => {
                    let nf = n as f64;
                    for &c in c {
                        let p11 = c * nf.ln() / nf;
                        out.push((n, named(out.len(), PVec::float(p11, *p10, *p01, 1.0 - p11 - p10 - p01))?));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Per-cell aggregate; the first eleven fields are the CSV columns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub n: usize,
    pub p: [f64; 4],
    pub trials: usize,
    pub strict_rate: f64,
    pub mean_eta: f64,
    pub mean_q: f64,
    pub mean_aut: f64,
    pub seed: u64,
    /// Mean of `1/|Q|`.
    pub mean_inv_q: f64,
    /// Standard error of `strict_rate`.
    pub se_strict: f64,
    /// Standard error of `mean_inv_q`.
    pub se_inv_q: f64,
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

fn summarize(n: usize, p: &PVec, seed: u64, trials: &[TrialResult]) -> CellSummary {
    let strict: Vec<f64> = trials.iter().map(|t| t.strict_success as u8 as f64).collect();
    let inv_q: Vec<f64> = trials.iter().map(|t| 1.0 / t.q_size as f64).collect();
    let k = trials.len() as f64;
    let (strict_rate, se_strict) = mean_and_se(&strict);
    let (mean_inv_q, se_inv_q) = mean_and_se(&inv_q);
    CellSummary {
        n,
        p: p.to_f64(),
        trials: trials.len(),
        strict_rate,
        mean_eta: trials.iter().map(|t| t.eta.to_f64().unwrap_or(0.0)).sum::<f64>() / k,
        mean_q: trials.iter().map(|t| t.q_size as f64).sum::<f64>() / k,
        mean_aut: trials.iter().map(|t| t.aut as f64).sum::<f64>() / k,
        seed,
        mean_inv_q,
        se_strict,
        se_inv_q,
    }
}

/// Result of [`run_sweep`]: per-cell summaries and every trial, in order.
#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub cells: Vec<CellSummary>,
    pub trials: Vec<TrialResult>,
}

impl SweepOutput {
    pub fn to_csv(&self) -> String {
        render_csv(&self.cells)
    }
}

/// Runs every trial of every cell. Nothing is written to disk.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let cells = cfg.cells()?;
    let jobs: Vec<(usize, usize, u64)> = (0..cells.len())
        .flat_map(|c| {
            (0..cfg.trials).map(move |k| {
                let idx = (c * cfg.trials + k) as u64;
                (c, k, cfg.seed.wrapping_add(idx))
            })
        })
        .collect();
    let work = || -> Result<Vec<TrialResult>> {
        jobs.par_iter()
            .map(|&(c, _, seed)| run_trial_in_cell(cells[c].0, &cells[c].1, seed, c, cfg.cap))
            .collect()
    };
    let trials = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("cannot build a pool of {t} threads: {e}")))?
            .install(work)?,
        None => work()?,
    };
    let summaries = cells
        .iter()
        .enumerate()
        .map(|(c, (n, p))| {
            let chunk = &trials[c * cfg.trials..(c + 1) * cfg.trials];
            summarize(*n, p, cfg.seed.wrapping_add((c * cfg.trials) as u64), chunk)
        })
        .collect();
    Ok(SweepOutput { cells: summaries, trials })
}

/// Runs the sweep and writes its CSV to `out`.
pub fn write_sweep(cfg: &SweepConfig, out: &Path) -> Result<SweepOutput> {
    let res = run_sweep(cfg)?;
    fs::write(out, res.to_csv()).map_err(|e| Error::io(out, e))?;
    Ok(res)
}

pub fn render_csv(cells: &[CellSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for c in cells {
        let row = [
            c.n.to_string(),
            c.p[0].to_string(),
            c.p[1].to_string(),
            c.p[2].to_string(),
            c.p[3].to_string(),
            c.trials.to_string(),
            c.strict_rate.to_string(),
            c.mean_eta.to_string(),
            c.mean_q.to_string(),
            c.mean_aut.to_string(),
            c.seed.to_string(),
        ];
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn threshold_cfg(trials: usize, threads: Option<usize>) -> SweepConfig {
        SweepConfig {
            n: NSpec::One(6),
            trials,
            grid: GridSpec::Threshold { c: vec![0.5, 2.0], p10: 0.0, p01: 0.0 },
            seed: 11,
            out: None,
            threads,
            cap: DEFAULT_ENUM_CAP,
        }
    }

    #[test]
    fn degenerate_trials() {
        let empty = run_trial(5, &PVec::float(0.0, 0.0, 0.0, 1.0).unwrap(), 3).unwrap();
        assert_eq!(empty.q_size, 120);
        assert!(!empty.strict_success);
        assert_eq!(empty.m, 0);
        let full = run_trial(5, &PVec::float(1.0, 0.0, 0.0, 0.0).unwrap(), 3).unwrap();
        assert_eq!(full.q_size, 120);
        assert_eq!(full.aut, 120);
        assert!(!full.strict_success);
    }

    #[test]
    fn sweep_is_deterministic_and_thread_independent() {
        let a = run_sweep(&threshold_cfg(6, Some(1))).unwrap().to_csv();
        let b = run_sweep(&threshold_cfg(6, Some(3))).unwrap().to_csv();
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 3);
        assert!(a.starts_with("n,p11,p10,p01,p00,trials,strict_rate,mean_eta,mean_q,mean_aut,seed\n"));
        let one = run_sweep(&threshold_cfg(1, None)).unwrap();
        assert_eq!(one.cells.len(), 2);
        assert_eq!(one.cells[1].seed, 12);
    }

    #[test]
    fn config_parsing_and_validation() {
        let cfg = SweepConfig::from_json(
            r#"{"n": [5, 6], "trials": 2, "seed": 4, "grid": {"kind": "explicit", "p": [[0.5, 0, 0, 0.5]]}}"#,
        )
        .unwrap();
        assert_eq!(cfg.cells().unwrap().len(), 2);
        assert!(SweepConfig::from_json(r#"{"n": 5, "trials": 2, "grid": {"kind": "nope"}}"#).is_err());
        let bad = SweepConfig::from_json(
            r#"{"n": 5, "trials": 2, "grid": {"kind": "explicit", "p": [[0.5, 0, 0, 0.5], [0.9, 0.9, 0, 0]]}}"#,
        )
        .unwrap();
        let msg = bad.cells().unwrap_err().to_string();
        assert!(msg.contains("grid cell 1"), "{msg}");
        let zero = SweepConfig::from_json(r#"{"n": 5, "trials": 0, "grid": {"kind": "threshold", "c": [1]}}"#).unwrap();
        assert!(matches!(zero.cells(), Err(Error::Config(_))));
        let sub = SweepConfig::from_json(
            r#"{"n": 5, "trials": 1, "grid": {"kind": "subsampling", "r": [0.5], "sa": [0.9, 1], "sb": [0.8]}}"#,
        )
        .unwrap();
        assert_eq!(sub.cells().unwrap().len(), 2);
    }
}
