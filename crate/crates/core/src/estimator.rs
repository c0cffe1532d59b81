//! Exhaustive MAP alignment, the Q-set and automorphism counts.
//!
//! All scans walk `S_n` depth-first, choosing `π(0), π(1), …` in increasing
//! order, so permutations are visited in lexicographic order. Counts are
//! `u64`: the enumeration cap keeps `n ≤ 20` and `20! < 2⁶⁴`.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Graph;
use crate::perm::{check_cap, Permutation, DEFAULT_ENUM_CAP};
use crate::rational::Q;

/// Outcome of [`map_estimate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlignmentResult {
    /// Lexicographically first minimizer of `Δ(gc ∘ l(π), gb)`.
    pub best_perm: Permutation,
    pub min_delta_hamming: usize,
    /// Number of minimizers.
    pub ties: u64,
    /// Present when a planted permutation was supplied for scoring.
    pub planted: Option<PlantedScore>,
}

/// Scores of an estimate against the planted permutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlantedScore {
    pub planted_delta_hamming: usize,
    /// `|Q|`: permutations at least as good as the planted one.
    pub q_size: u64,
    /// The planted permutation is the unique minimizer.
    pub strict_success: bool,
    /// `1/|Q|` when the planted permutation is a minimizer, else 0.
    #[serde(serialize_with = "crate::rational::serialize_fraction")]
    pub eta: Q,
    /// `min δ` over permutations other than the planted one; `None` for `n = 1`.
    pub min_rival_delta: Option<i64>,
}

impl AlignmentResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("alignment result serializes")
    }
}

/// Overlap histogram of a full scan: `hist[k]` permutations share exactly `k`
/// edges with the reference, and `best` is the first one reaching the maximum.
#[derive(Clone, Debug)]
struct Scan {
    hist: Vec<u64>,
    best: Vec<usize>,
    best_overlap: usize,
}

struct Ctx<'a> {
    n: usize,
    gb: &'a [u64],
    gc: &'a [u64],
}

fn dfs(ctx: &Ctx<'_>, k: usize, used: u64, img: &mut [usize], ov: usize, out: &mut Scan) {
    if k == ctx.n {
        out.hist[ov] += 1;
        if out.best.is_empty() || ov > out.best_overlap {
            out.best_overlap = ov;
            out.best.clear();
            out.best.extend_from_slice(img);
        }
        return;
    }
    let lower = ctx.gb[k] & ((1u64 << k) - 1);
    for v in 0..ctx.n {
        if used >> v & 1 == 1 {
            continue;
        }
        let row = ctx.gc[v];
        let mut gain = 0;
        let mut bits = lower;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            gain += (row >> img[i] & 1) as usize;
            bits &= bits - 1;
        }
        img[k] = v;
        dfs(ctx, k + 1, used | 1 << v, img, ov + gain, out);
    }
}

fn scan_branch(ctx: &Ctx<'_>, first: usize, hist_len: usize) -> Scan {
    let mut out = Scan { hist: vec![0; hist_len], best: Vec::new(), best_overlap: 0 };
    let mut img = vec![0; ctx.n];
    img[0] = first;
    dfs(ctx, 1, 1 << first, &mut img, 0, &mut out);
    out
}

fn merge(parts: Vec<Scan>, hist_len: usize) -> Scan {
    let mut hist = vec![0; hist_len];
    let mut best: Option<(usize, Vec<usize>)> = None;
    for part in parts {
        for (h, c) in hist.iter_mut().zip(&part.hist) {
            *h += c;
        }
        if best.as_ref().is_none_or(|(ov, _)| part.best_overlap > *ov) {
            best = Some((part.best_overlap, part.best));
        }
    }
    let (best_overlap, best) = best.expect("at least one branch");
    Scan { hist, best, best_overlap }
}

fn scan(gc: &Graph, gb: &Graph, cap: usize, parallel: bool) -> Result<Scan> {
    let n = gb.vertex_count();
    if gc.vertex_count() != n {
        return Err(Error::param(format!("graph sizes differ: {} vs {}", gc.vertex_count(), n)));
    }
    if n == 0 {
        return Err(Error::param("alignment needs n >= 1"));
    }
    check_cap("exhaustive alignment", n, cap)?;
    let (mb, mc) = (gb.adjacency_masks(), gc.adjacency_masks());
    let ctx = Ctx { n, gb: &mb, gc: &mc };
    let hist_len = gb.edge_count().min(gc.edge_count()) + 1;
    let parts: Vec<Scan> = if parallel {
        (0..n).into_par_iter().map(|v| scan_branch(&ctx, v, hist_len)).collect()
    } else {
        (0..n).map(|v| scan_branch(&ctx, v, hist_len)).collect()
    };
    Ok(merge(parts, hist_len))
}

/// Edges shared by `gc ∘ l(π)` and `gb`.
fn overlap(gc: &Graph, gb: &Graph, pi: &[usize]) -> usize {
    let n = gb.vertex_count();
    let mut ov = 0;
    for i in 0..n {
        for j in i + 1..n {
            if gb.has_edge(i, j) && gc.has_edge(pi[i], pi[j]) {
                ov += 1;
            }
        }
    }
    ov
}

/// MAP estimate `argmin_π Δ(gc ∘ l(π), gb)` by exhaustive search, optionally
/// scored against a planted permutation.
pub fn map_estimate(gc: &Graph, gb: &Graph, planted: Option<&Permutation>) -> Result<AlignmentResult> {
    map_estimate_with(gc, gb, planted, DEFAULT_ENUM_CAP, false)
}

/// [`map_estimate`] with an explicit cap and a choice of splitting the scan
/// across the rayon pool by `π(0)`. The result does not depend on the split.
pub fn map_estimate_with(
    gc: &Graph,
    gb: &Graph,
    planted: Option<&Permutation>,
    cap: usize,
    parallel: bool,
) -> Result<AlignmentResult> {
    let n = gb.vertex_count();
    if let Some(p) = planted {
        if p.len() != n {
            return Err(Error::param(format!("planted permutation has size {}, graphs have n = {n}", p.len())));
        }
    }
    let s = scan(gc, gb, cap, parallel)?;
    let base = gc.edge_count() + gb.edge_count();
    let ties = s.hist[s.best_overlap];
    let planted = planted.map(|p| {
        let ov = overlap(gc, gb, p.images());
        let q_size: u64 = s.hist[ov..].iter().sum();
        let is_min = ov == s.best_overlap;
        let rival = {
            let mut counts = s.hist.clone();
            counts[ov] -= 1;
            counts.iter().rposition(|&c| c > 0).map(|best| ov as i64 - best as i64)
        };
        PlantedScore {
            planted_delta_hamming: base - 2 * ov,
            q_size,
            strict_success: is_min && ties == 1,
            eta: if is_min { Q::new(1.into(), q_size.into()) } else { Q::zero() },
            min_rival_delta: rival,
        }
    });
    Ok(AlignmentResult {
        best_perm: Permutation::from_images(s.best).expect("scan yields a permutation"),
        min_delta_hamming: base - 2 * s.best_overlap,
        ties,
        planted,
    })
}

/// `|{π : δ(l(π); ga, gb) ≤ 0}|`; always at least 1.
pub fn q_set_size(ga: &Graph, gb: &Graph) -> Result<u64> {
    q_set_size_with(ga, gb, DEFAULT_ENUM_CAP)
}

pub fn q_set_size_with(ga: &Graph, gb: &Graph, cap: usize) -> Result<u64> {
    let s = scan(ga, gb, cap, false)?;
    let id: Vec<usize> = (0..gb.vertex_count()).collect();
    Ok(s.hist[overlap(ga, gb, &id)..].iter().sum())
}

/// Walks `Aut(g)` depth-first, pruning partial maps that break adjacency.
fn for_each_automorphism(g: &Graph, cap: usize, mut f: impl FnMut(&[usize])) -> Result<()> {
    let n = g.vertex_count();
    check_cap("automorphism enumeration", n, cap)?;
    let rows = g.adjacency_masks();
    let deg: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    let mut img = vec![0usize; n];

    fn rec(
        k: usize,
        n: usize,
        used: u64,
        rows: &[u64],
        deg: &[u32],
        img: &mut [usize],
        f: &mut dyn FnMut(&[usize]),
    ) {
        if k == n {
            f(img);
            return;
        }
        for v in 0..n {
            if used >> v & 1 == 1 || deg[v] != deg[k] {
                continue;
            }
            if img[..k].iter().enumerate().any(|(i, &m)| (rows[k] >> i & 1) != (rows[v] >> m & 1)) {
                continue;
            }
            img[k] = v;
            rec(k + 1, n, used | 1 << v, rows, deg, img, f);
        }
    }

    rec(0, n, 0, &rows, &deg, &mut img, &mut f);
    Ok(())
}

/// `|Aut(g)|`, the number of `π` with `g ∘ l(π) = g`.
pub fn automorphism_count(g: &Graph) -> Result<u64> {
    automorphism_count_with(g, DEFAULT_ENUM_CAP)
}

pub fn automorphism_count_with(g: &Graph, cap: usize) -> Result<u64> {
    let mut count = 0u64;
    for_each_automorphism(g, cap, |_| count += 1)?;
    Ok(count)
}

/// Checks that every automorphism of `ga ∧ gb` has `δ(l(π); ga, gb) ≤ 0`.
pub fn intersection_aut_check(ga: &Graph, gb: &Graph) -> Result<bool> {
    let both = crate::model::intersection(ga, gb)?;
    let id: Vec<usize> = (0..ga.vertex_count()).collect();
    let base = overlap(ga, gb, &id);
    let mut ok = true;
    for_each_automorphism(&both, DEFAULT_ENUM_CAP, |pi| ok &= overlap(ga, gb, pi) >= base)?;
    Ok(ok)
}

/// Number of degree-0 vertices.
pub fn isolated_count(g: &Graph) -> usize {
    (0..g.vertex_count()).filter(|&v| g.degree(v) == 0).count()
}
