use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use ceralign::bounds::{
    classify, dense_z2, m_average, m_ub, opt_z_bound, sparse_bound, union_compose, ClassifyConstants,
};
use ceralign::estimator::{automorphism_count_with, isolated_count, map_estimate_with};
use ceralign::experiment::{emit_plot, verify_gf, write_sweep, SweepConfig};
use ceralign::genfunc::WMatrix;
use ceralign::model::{anonymize, pair_count, rng_from_seed, sample_pair_with};
use ceralign::perm::{admissible_t_tilde, DEFAULT_ENUM_CAP};
use ceralign::{Error, Graph, PVec, Permutation};

#[derive(Parser)]
#[command(name = "ceralign", version, about = "Exact alignment of correlated Erdős–Rényi graph pairs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a correlated pair (and optionally its anonymized copy) as JSON.
    Gen {
        #[arg(long)]
        n: usize,
        /// Joint distribution "p11 p10 p01 p00".
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also draw a uniform permutation and print Gc.
        #[arg(long)]
        anonymize: bool,
    },
    /// MAP-align Gc against Gb; graphs are given inline ("n=..;edges=..") or as file paths.
    Align {
        gc: String,
        gb: String,
        /// Planted permutation for scoring, e.g. "2,0,1".
        #[arg(long)]
        planted: Option<String>,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
        /// Split the scan over worker threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Run a Monte Carlo sweep from a JSON config and write its CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Run the generating-function identity and inequality suite.
    VerifyGf {
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Evaluate the finite-n bounds; one JSON object per line.
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        /// Number of vertices moved by the permutation.
        #[arg(long, default_value_t = 2)]
        n_tilde: usize,
        /// Intersection edge count for m_ub (default: round(t·p11)).
        #[arg(long)]
        m: Option<usize>,
        /// Nontrivial (1,1) count for sparse_bound.
        #[arg(long, default_value_t = 0)]
        m_tilde: usize,
        /// Nontrivial region size (default: the smallest admissible for n_tilde).
        #[arg(long)]
        t_tilde: Option<usize>,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
    },
    /// Place (n, p) in a regime; prints JSON.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 2.0)]
        margin: f64,
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
    },
    /// Automorphism and isolated-vertex counts of a graph.
    Aut {
        graph: String,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
    },
    /// Render a sweep CSV as an SVG plot.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) | Error::Config(_) | Error::Parse { .. } | Error::CapExceeded { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::Domain(_) | Error::Io { .. } => Failure::Runtime(e.to_string()),
        }
    }
}

fn read_graph(arg: &str) -> Result<Graph, Failure> {
    let text = if arg.trim_start().starts_with("n=") {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read graph file {arg}: {e}")))?
    };
    Ok(text.parse()?)
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Gen { n, p, seed, anonymize: anon } => {
            let p: PVec = p.parse()?;
            let mut rng = rng_from_seed(seed);
            let pair = sample_pair_with(n, &p, &mut rng)?;
            let mut out = json!({ "n": n, "seed": seed, "ga": pair.ga, "gb": pair.gb });
            if anon {
                use rand::seq::SliceRandom;
                let mut images: Vec<usize> = (0..n).collect();
                images.shuffle(&mut rng);
                let pi = Permutation::from_images(images)?;
                out["gc"] = json!(anonymize(&pair.ga, &pi)?);
                out["pi"] = json!(pi.to_string());
            }
            println!("{out}");
        }
        Cmd::Align { gc, gb, planted, cap, parallel } => {
            let gc = read_graph(&gc)?;
            let gb = read_graph(&gb)?;
            let planted = planted.map(|s| s.parse::<Permutation>()).transpose()?;
            let r = map_estimate_with(&gc, &gb, planted.as_ref(), cap, parallel)?;
            println!("{}", r.to_json());
        }
        Cmd::Sweep { config, seed, out, threads, trials } => {
            let mut cfg = SweepConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.out = Some(o);
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            let path = cfg.out.clone().ok_or_else(|| Failure::Usage("no output path: set \"out\" or --out".into()))?;
            let res = write_sweep(&cfg, &path)?;
            eprintln!("wrote {} cells to {}", res.cells.len(), path.display());
        }
        Cmd::VerifyGf { depth } => {
            let report = verify_gf(depth)?;
            print!("{report}");
            if !report.passed() {
                return Err(Failure::Runtime("generating-function suite failed".into()));
            }
        }
        Cmd::Bounds { n, p, n_tilde, m, m_tilde, t_tilde, eps } => {
            let p: PVec = p.parse()?;
            let t_tilde = match t_tilde {
                Some(t) => t,
                None => admissible_t_tilde(n, n_tilde).into_iter().min().ok_or_else(|| {
                    Failure::Usage(format!("no permutation of {n} vertices moves exactly {n_tilde}"))
                })?,
            };
            let w = WMatrix::from_pvec(&p)?;
            let lines = [
                match opt_z_bound(&w, t_tilde) {
                    Ok(o) => json!({ "name": "opt_z_bound", "value": o.bound, "z1": o.z1, "t_tilde": t_tilde }),
                    Err(e) => json!({ "name": "opt_z_bound", "valid": false, "error": e.to_string() }),
                },
                match dense_z2(n, &p) {
                    Ok(z2) => json!({ "name": "dense_z2", "z2": z2, "value": z2.powi(n_tilde as i32), "n_tilde": n_tilde }),
                    Err(e) => json!({ "name": "dense_z2", "valid": false, "error": e.to_string() }),
                },
            ];
            for l in lines {
                println!("{l}");
            }
            println!("{}", sparse_bound(n, &p, m_tilde, t_tilde, n_tilde).to_json());
            let m = m.unwrap_or_else(|| (pair_count(n) as f64 * p.p11()).round() as usize);
            let mu = m_ub(n, m, &p, n_tilde);
            println!("{}", mu.to_json());
            let z7 = mu.extras.get("z7_eff").copied().unwrap_or(1.0);
            println!("{}", union_compose(n, z7).to_json());
            let nf = n as f64;
            println!("{}", m_average(n, &p, nf / (nf + 4.0), 3.0 * nf * nf * z7 * z7, eps).to_json());
        }
        Cmd::Classify { n, p, margin, constant } => {
            let p: PVec = p.parse()?;
            println!("{}", classify(n, &p, &ClassifyConstants { margin, constant }).to_json());
        }
        Cmd::Aut { graph, cap } => {
            let g = read_graph(&graph)?;
            let aut = automorphism_count_with(&g, cap)?;
            println!("{}", json!({ "n": g.vertex_count(), "aut": aut, "isolated": isolated_count(&g) }));
        }
        Cmd::Plot { csv, out } => emit_plot(&csv, &out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
