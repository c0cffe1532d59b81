use std::fs;

use ceralign::estimator::automorphism_count;
use ceralign::experiment::{
    emit_plot, parse_sweep_csv, render_svg, run_sweep, run_trial, write_sweep, SweepConfig, TrialResult, CSV_HEADER,
};
use ceralign::{Error, PVec};

fn cfg(json: &str) -> SweepConfig {
    SweepConfig::from_json(json).unwrap()
}

fn strip_time(t: &TrialResult) -> TrialResult {
    TrialResult { wall_ms: 0.0, ..t.clone() }
}

#[test]
fn single_trial_single_cell_gives_one_row() {
    let out = run_sweep(&cfg(r#"{"n": 5, "trials": 1, "grid": {"kind": "explicit", "p": [[0.3, 0.1, 0.1, 0.5]]}}"#)).unwrap();
    let csv = out.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], CSV_HEADER.join(","));
}

#[test]
fn sweep_csv_is_identical_across_runs_and_thread_counts() {
    let base = r#"{"n": [5, 6], "trials": 12, "seed": 99, "grid": {"kind": "threshold", "c": [0.5, 1, 2]}}"#;
    let mut a = cfg(base);
    a.threads = Some(1);
    let mut b = cfg(base);
    b.threads = Some(3);
    let first = run_sweep(&a).unwrap();
    assert_eq!(first.to_csv().as_bytes(), run_sweep(&a).unwrap().to_csv().as_bytes());
    let second = run_sweep(&b).unwrap();
    assert_eq!(first.to_csv().as_bytes(), second.to_csv().as_bytes());
    let strip = |v: &[TrialResult]| v.iter().map(strip_time).collect::<Vec<_>>();
    assert_eq!(strip(&first.trials), strip(&second.trials));
}

#[test]
fn trial_seeds_follow_master_plus_index() {
    let out = run_sweep(&cfg(r#"{"n": 5, "trials": 4, "seed": 10, "grid": {"kind": "explicit", "p": [[0.3, 0.1, 0.1, 0.5], [0.5, 0, 0, 0.5]]}}"#)).unwrap();
    let seeds: Vec<u64> = out.trials.iter().map(|t| t.seed).collect();
    assert_eq!(seeds, (10..18).collect::<Vec<_>>());
    assert_eq!(out.cells[1].seed, 14);
    let p = PVec::float(0.5, 0.0, 0.0, 0.5).unwrap();
    assert_eq!(strip_time(&out.trials[5]), TrialResult { cell: 1, ..strip_time(&run_trial(5, &p, 15).unwrap()) });
}

#[test]
fn per_trial_conservation() {
    let out = run_sweep(&cfg(r#"{"n": [4, 6], "trials": 40, "seed": 7, "grid": {"kind": "subsampling", "r": [0.4, 0.9], "sa": [0.6, 0.95], "sb": [0.8]}}"#)).unwrap();
    for t in &out.trials {
        assert!(t.q_size >= 1);
        assert!(t.q_size >= t.aut);
        if t.strict_success {
            assert_eq!(t.q_size, 1);
            assert_eq!(t.eta, ceralign::rational::qi(1));
        }
        assert!(t.eta == ceralign::rational::qi(0) || t.eta == ceralign::rational::q(1, t.q_size as i64));
    }
    for c in &out.cells {
        assert!(c.strict_rate <= c.mean_eta + 1e-12);
        assert!(c.mean_eta <= 1.0 + 1e-12);
        assert!(c.strict_rate <= c.mean_inv_q + 1e-12);
    }
}

#[test]
fn degenerate_cells_never_succeed() {
    let out = run_sweep(&cfg(r#"{"n": 5, "trials": 3, "grid": {"kind": "explicit", "p": [[0, 0, 0, 1], [1, 0, 0, 0]]}}"#)).unwrap();
    for t in &out.trials {
        assert_eq!(t.q_size, 120);
        assert!(!t.strict_success);
    }
}

#[test]
fn noiseless_success_iff_rigid() {
    let p = PVec::float(0.5, 0.0, 0.0, 0.5).unwrap();
    let mut rigid = 0;
    for seed in 0..40 {
        let t = run_trial(7, &p, seed).unwrap();
        let pair = ceralign::model::sample_pair(7, &p, seed).unwrap();
        let aut = automorphism_count(&pair.ga).unwrap();
        assert_eq!(t.aut, aut);
        assert_eq!(t.q_size, aut);
        assert_eq!(t.strict_success, aut == 1, "seed {seed}");
        rigid += (aut == 1) as usize;
    }
    assert!(rigid > 0 && rigid < 40);
}

#[test]
fn intersection_symmetry_grows_with_n_below_threshold() {
    let out = run_sweep(&cfg(r#"{"n": [6, 7, 8, 9], "trials": 150, "seed": 3, "grid": {"kind": "threshold", "c": [0.25]}}"#)).unwrap();
    let auts: Vec<f64> = out.cells.iter().map(|c| c.mean_aut).collect();
    let rises = auts.windows(2).filter(|w| w[1] > w[0]).count();
    assert!(rises >= 2 && auts[3] > auts[0], "mean_aut by n = {auts:?}");
}

#[test]
fn strict_rate_trends_upward_in_c_at_n9() {
    let mut c = cfg(r#"{"n": 9, "trials": 500, "seed": 20250917, "grid": {"kind": "threshold", "c": [0.25, 0.5, 1, 2, 3, 4]}}"#);
    c.threads = Some(1);
    let out = run_sweep(&c).unwrap();
    let rates: Vec<f64> = out.cells.iter().map(|c| c.strict_rate).collect();
    for w in out.cells.windows(2) {
        let sigma = (w[0].se_strict.powi(2) + w[1].se_strict.powi(2)).sqrt();
        assert!(w[1].strict_rate >= w[0].strict_rate - 3.0 * sigma, "strict_rate by c = {rates:?}");
    }
}

#[test]
fn config_errors_name_the_problem() {
    assert!(matches!(SweepConfig::from_json(r#"{"n": 5, "trials": 1, "grid": {"kind": "explicit", "p": []}, "bogus": 1}"#), Err(Error::Config(_))));
    let bad = cfg(r#"{"n": [9, 3], "trials": 1, "grid": {"kind": "threshold", "c": [3]}}"#);
    match bad.cells() {
        Err(Error::Config(msg)) => assert!(msg.contains("grid cell 1") && msg.contains("n = 3"), "{msg}"),
        other => panic!("expected config error, got {other:?}"),
    }
    let dir = tempfile::tempdir().unwrap();
    let ok = cfg(r#"{"n": 3, "trials": 1, "grid": {"kind": "explicit", "p": [[0.5, 0, 0, 0.5]]}}"#);
    assert!(matches!(write_sweep(&ok, &dir.path().join("missing").join("x.csv")), Err(Error::Io { .. })));
}

#[test]
fn plot_of_six_cell_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let svg = dir.path().join("s.svg");
    write_sweep(&cfg(r#"{"n": 5, "trials": 2, "grid": {"kind": "threshold", "c": [0.25, 0.5, 1, 1.5, 2, 3]}}"#), &csv).unwrap();
    emit_plot(&csv, &svg).unwrap();
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert_eq!(text.matches("<circle").count(), 6);
    assert_eq!(text.matches("<polyline").count(), 1);
    assert!(text.contains(r#"id="threshold""#));
    assert!(text.contains(r#"viewBox="0 0 800 600""#));
}

#[test]
fn plot_of_empty_sweep_has_axes_only() {
    let rows = parse_sweep_csv(&format!("{}\n", CSV_HEADER.join(","))).unwrap();
    assert!(rows.is_empty());
    let svg = render_svg(&rows);
    assert!(svg.contains(r#"id="axes""#) && svg.contains(r#"id="threshold""#));
    assert_eq!(svg.matches("<polyline").count(), 0);
}

#[test]
fn plot_rejects_bad_rows_with_line_number() {
    let text = format!("{}\n5,0.1,0,0,0.9,2,0.5,0.5,1,1,0\n5,zero,0,0,1,2,0,0,1,1,0\n", CSV_HEADER.join(","));
    match parse_sweep_csv(&text) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(matches!(parse_sweep_csv("a,b\n"), Err(Error::Parse { line: 1, .. })));
}
