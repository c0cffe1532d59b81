//! The correlated Erdős–Rényi model: joint edge distribution, graphs on `[n]`
//! as pair labelings, sampling, anonymization and the alignment statistics.
//!
//! Vertex pairs `{i,j}` with `i < j` are indexed lexicographically:
//! `i·n − i(i+1)/2 + (j − i − 1)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{lift, PairPermutation, Permutation};
use crate::rational::{format_rational, parse_rational, qi, to_f64, Q};

/// Seedable generator used for every random draw in the crate.
pub type ModelRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ModelRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of `{i, j}` in the canonical order; `i` and `j` may come in either order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i != j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// `(i, j)` for every pair index, in index order.
pub fn pair_table(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

const FLOAT_SUM_TOL: f64 = 1e-12;

/// Joint edge-label distribution `(p₁₁, p₁₀, p₀₁, p₀₀)`.
///
/// Exact mode keeps rationals and is required wherever an identity is checked;
/// float mode is for Monte Carlo and bound evaluation.
#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum PVec {
    Exact([Q; 4]),
    Float([f64; 4]),
}

impl PVec {
    /// Entries in `(p11, p10, p01, p00)` order; must sum to exactly 1.
    pub fn exact(p11: Q, p10: Q, p01: Q, p00: Q) -> Result<Self> {
        let entries = [p11, p10, p01, p00];
        if entries.iter().any(|p| p.is_negative() || p > &qi(1)) {
            return Err(Error::param(format!("PVec entries must lie in [0,1]: {}", fmt_entries(&entries))));
        }
        let sum: Q = entries.iter().sum();
        if sum != qi(1) {
            return Err(Error::param(format!("PVec entries sum to {sum}, not 1")));
        }
        Ok(PVec::Exact(entries))
    }

    /// Entries in `(p11, p10, p01, p00)` order; must sum to 1 within 1e-12.
    pub fn float(p11: f64, p10: f64, p01: f64, p00: f64) -> Result<Self> {
        let entries = [p11, p10, p01, p00];
        if entries.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::param(format!("PVec entries must lie in [0,1]: {entries:?}")));
        }
        let sum: f64 = entries.iter().sum();
        if (sum - 1.0).abs() > FLOAT_SUM_TOL {
            return Err(Error::param(format!("PVec entries sum to {sum}, not 1")));
        }
        Ok(PVec::Float(entries))
    }

    /// Noiseless family `(p11, 0, 0, 1 − p11)`.
    pub fn noiseless_float(p11: f64) -> Result<Self> {
        PVec::float(p11, 0.0, 0.0, 1.0 - p11)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, PVec::Exact(_))
    }

    /// `(p11, p10, p01, p00)` as doubles.
    pub fn to_f64(&self) -> [f64; 4] {
        match self {
            PVec::Exact(e) => [to_f64(&e[0]), to_f64(&e[1]), to_f64(&e[2]), to_f64(&e[3])],
            PVec::Float(f) => *f,
        }
    }

    pub fn exact_entries(&self) -> Option<&[Q; 4]> {
        match self {
            PVec::Exact(e) => Some(e),
            PVec::Float(_) => None,
        }
    }

    pub(crate) fn require_exact(&self, op: &str) -> Result<&[Q; 4]> {
        self.exact_entries()
            .ok_or_else(|| Error::param(format!("{op} requires an exact (rational) PVec")))
    }

    pub fn p11(&self) -> f64 {
        self.to_f64()[0]
    }
    pub fn p10(&self) -> f64 {
        self.to_f64()[1]
    }
    pub fn p01(&self) -> f64 {
        self.to_f64()[2]
    }
    pub fn p00(&self) -> f64 {
        self.to_f64()[3]
    }

    /// `p11·p00 > p01·p10`; exact comparison in exact mode.
    pub fn positively_correlated(&self) -> bool {
        match self {
            PVec::Exact(e) => &e[0] * &e[3] > &e[2] * &e[1],
            PVec::Float(f) => f[0] * f[3] > f[2] * f[1],
        }
    }
}

fn fmt_entries(e: &[Q; 4]) -> String {
    e.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for PVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PVec::Exact(e) => f.write_str(&fmt_entries(e)),
            PVec::Float(v) => write!(f, "{} {} {} {}", v[0], v[1], v[2], v[3]),
        }
    }
}

impl FromStr for PVec {
    type Err = Error;

    /// Four decimal (or `p/q`) strings separated by whitespace or commas,
    /// in `p11 p10 p01 p00` order. Parsed exactly; entries whose exact sum
    /// misses 1 only by rounding (as printed doubles do) give a float PVec.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        if parts.len() != 4 {
            return Err(Error::param(format!("PVec needs four entries, got '{s}'")));
        }
        let v = parts.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>()?;
        let [a, b, c, d]: [Q; 4] = v.try_into().expect("four entries");
        let sum = to_f64(&(&a + &b + &c + &d));
        match PVec::exact(a.clone(), b.clone(), c.clone(), d.clone()) {
            Err(_) if (sum - 1.0).abs() <= FLOAT_SUM_TOL => PVec::float(to_f64(&a), to_f64(&b), to_f64(&c), to_f64(&d)),
            r => r,
        }
    }
}

/// A graph on `[n]` as its edge-indicator labeling of the `C(n,2)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<bool>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: vec![false; pair_count(n)] }
    }

    pub fn complete(n: usize) -> Self {
        Graph { n, edges: vec![true; pair_count(n)] }
    }

    pub fn from_labels(n: usize, edges: Vec<bool>) -> Result<Self> {
        if edges.len() != pair_count(n) {
            return Err(Error::param(format!("expected {} pair labels for n = {n}, got {}", pair_count(n), edges.len())));
        }
        Ok(Graph { n, edges })
    }

    pub fn from_edges(n: usize, list: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(i, j) in list {
            if i == j || i >= n || j >= n {
                return Err(Error::param(format!("invalid edge {{{i},{j}}} for n = {n}")));
            }
            g.edges[pair_index(n, i, j)] = true;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[bool] {
        &self.edges
    }

    pub fn has_pair(&self, e: usize) -> bool {
        self.edges[e]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.edges[pair_index(self.n, i, j)]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&b| b).count()
    }

    pub fn degree(&self, v: usize) -> usize {
        (0..self.n).filter(|&u| self.has_edge(u, v)).count()
    }

    /// `g ∘ τ`: the labeling `e ↦ g(τ(e))`.
    pub fn compose(&self, tau: &PairPermutation) -> Result<Graph> {
        if tau.vertex_count() != self.n {
            return Err(Error::param(format!(
                "pair permutation on n = {} applied to a graph with n = {}",
                tau.vertex_count(),
                self.n
            )));
        }
        Ok(Graph { n: self.n, edges: tau.images().iter().map(|&e| self.edges[e]).collect() })
    }

    /// Adjacency rows as bitmasks (requires `n ≤ 64`).
    pub(crate) fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitmask adjacency supports n <= 64");
        let mut rows = vec![0u64; self.n];
        for (e, (i, j)) in pair_table(self.n).into_iter().enumerate() {
            if self.edges[e] {
                rows[i] |= 1 << j;
                rows[j] |= 1 << i;
            }
        }
        rows
    }

    fn check_same_n(&self, other: &Graph) -> Result<()> {
        if self.n != other.n {
            return Err(Error::param(format!("graph sizes differ: {} vs {}", self.n, other.n)));
        }
        Ok(())
    }
}

impl fmt::Display for Graph {
    /// `n=<n>;edges=<hex>`, pair-index order, bit k at bit (k mod 8) of byte k/8.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut bytes = vec![0u8; self.edges.len().div_ceil(8)];
        for (k, &b) in self.edges.iter().enumerate() {
            if b {
                bytes[k / 8] |= 1 << (k % 8);
            }
        }
        write!(f, "n={};edges=", self.n)?;
        for b in bytes {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::param(format!("bad graph '{}': {msg}", s.trim()));
        let (n_part, e_part) = s.trim().split_once(';').ok_or_else(|| bad("missing ';'"))?;
        let n: usize = n_part
            .trim()
            .strip_prefix("n=")
            .ok_or_else(|| bad("expected n=<n>"))?
            .parse()
            .map_err(|_| bad("n is not an integer"))?;
        let hex = e_part.trim().strip_prefix("edges=").ok_or_else(|| bad("expected edges=<hex>"))?;
        let t = pair_count(n);
        if hex.len() != 2 * t.div_ceil(8) {
            return Err(bad(&format!("expected {} hex digits", 2 * t.div_ceil(8))));
        }
        let mut edges = vec![false; t];
        for (byte_idx, chunk) in hex.as_bytes().chunks(2).enumerate() {
            let text = std::str::from_utf8(chunk).map_err(|_| bad("non-ascii"))?;
            let byte = u8::from_str_radix(text, 16).map_err(|_| bad("invalid hex digit"))?;
            for bit in 0..8 {
                let k = byte_idx * 8 + bit;
                let set = byte >> bit & 1 == 1;
                if k < t {
                    edges[k] = set;
                } else if set {
                    return Err(bad("padding bits must be zero"));
                }
            }
        }
        Ok(Graph { n, edges })
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Two graphs on the same vertex set `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelatedPair {
    pub ga: Graph,
    pub gb: Graph,
}

/// Draws `(Ga, Gb) ~ ER(n, p)`: every pair independently gets joint label
/// `(1,1)`, `(1,0)`, `(0,1)`, `(0,0)` with probabilities `p11, p10, p01, p00`.
pub fn sample_pair(n: usize, p: &PVec, seed: u64) -> Result<CorrelatedPair> {
    let mut rng = rng_from_seed(seed);
    sample_pair_with(n, p, &mut rng)
}

pub fn sample_pair_with<R: Rng + ?Sized>(n: usize, p: &PVec, rng: &mut R) -> Result<CorrelatedPair> {
    if n == 0 {
        return Err(Error::param("n must be at least 1"));
    }
    let [p11, p10, p01, _] = p.to_f64();
    let c11 = p11;
    let c10 = c11 + p10;
    let c01 = c10 + p01;
    let t = pair_count(n);
    let mut ga = Vec::with_capacity(t);
    let mut gb = Vec::with_capacity(t);
    for _ in 0..t {
        let u: f64 = rng.gen();
        let (a, b) = if u < c11 {
            (true, true)
        } else if u < c10 {
            (true, false)
        } else if u < c01 {
            (false, true)
        } else {
            (false, false)
        };
        ga.push(a);
        gb.push(b);
    }
    Ok(CorrelatedPair { ga: Graph { n, edges: ga }, gb: Graph { n, edges: gb } })
}

/// Relabels vertices by `π`: the output satisfies `out(l(π)(e)) = g(e)`.
pub fn anonymize(g: &Graph, pi: &Permutation) -> Result<Graph> {
    if pi.len() != g.n {
        return Err(Error::param(format!("permutation of size {} applied to graph with n = {}", pi.len(), g.n)));
    }
    let tau = lift(pi);
    let mut edges = vec![false; g.edges.len()];
    for (e, &label) in g.edges.iter().enumerate() {
        edges[tau.apply(e)] = label;
    }
    Ok(Graph { n: g.n, edges })
}

/// `Ga ∧ Gb`.
pub fn intersection(ga: &Graph, gb: &Graph) -> Result<Graph> {
    ga.check_same_n(gb)?;
    Ok(Graph { n: ga.n, edges: ga.edges.iter().zip(&gb.edges).map(|(&a, &b)| a && b).collect() })
}

/// Type matrix `μ(fa, fb)`: counts of pairs by joint label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TypeMatrix {
    pub k00: usize,
    pub k01: usize,
    pub k10: usize,
    pub k11: usize,
}

impl TypeMatrix {
    /// Hamming distance `Δ = k01 + k10`.
    pub fn hamming(&self) -> usize {
        self.k01 + self.k10
    }

    pub fn total(&self) -> usize {
        self.k00 + self.k01 + self.k10 + self.k11
    }

    pub fn as_array(&self) -> [[usize; 2]; 2] {
        [[self.k00, self.k01], [self.k10, self.k11]]
    }

    pub(crate) fn bump(&mut self, a: bool, b: bool) {
        match (a, b) {
            (false, false) => self.k00 += 1,
            (false, true) => self.k01 += 1,
            (true, false) => self.k10 += 1,
            (true, true) => self.k11 += 1,
        }
    }
}

pub fn type_matrix(fa: &Graph, fb: &Graph) -> Result<TypeMatrix> {
    fa.check_same_n(fb)?;
    let mut k = TypeMatrix::default();
    for (&a, &b) in fa.edges.iter().zip(&fb.edges) {
        k.bump(a, b);
    }
    Ok(k)
}

pub fn hamming(fa: &Graph, fb: &Graph) -> Result<usize> {
    Ok(type_matrix(fa, fb)?.hamming())
}

/// `δ(τ; ga, gb) = ½(Δ(ga∘τ, gb) − Δ(ga, gb))`.
pub fn delta_stat(tau: &PairPermutation, ga: &Graph, gb: &Graph) -> Result<i64> {
    ga.check_same_n(gb)?;
    let moved = ga.compose(tau)?;
    let diff = hamming(&moved, gb)? as i64 - hamming(ga, gb)? as i64;
    debug_assert!(diff % 2 == 0);
    Ok(diff / 2)
}

/// The same statistic through the type matrix: `μ(ga,gb)₁₁ − μ(ga∘τ,gb)₁₁`.
pub fn delta_stat_via_type(tau: &PairPermutation, ga: &Graph, gb: &Graph) -> Result<i64> {
    let before = type_matrix(ga, gb)?;
    let after = type_matrix(&ga.compose(tau)?, gb)?;
    Ok(before.k11 as i64 - after.k11 as i64)
}

/// `E[δ(τ)] = t̃(p00·p11 − p01·p10)`, exactly.
pub fn expected_delta(p: &PVec, t_tilde: usize) -> Result<Q> {
    let [p11, p10, p01, p00] = p.require_exact("expected_delta")?;
    Ok(qi(t_tilde as i64) * (p00 * p11 - p01 * p10))
}

/// Parameters of the subsampling model: parent graph density `r`, and the
/// retention probabilities `sa`, `sb` of the two observed subgraphs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsamplingParams {
    pub r: f64,
    pub sa: f64,
    pub sb: f64,
}

fn check_unit(name: &str, v: &Q) -> Result<()> {
    if v.is_negative() || v > &qi(1) {
        return Err(Error::param(format!("{name} = {v} outside [0,1]")));
    }
    Ok(())
}

/// Exact subsampling map `(r, sa, sb) ↦ (r·sa·sb, r·sa(1−sb), r(1−sa)sb, 1 − r(sa+sb−sa·sb))`.
pub fn subsampling_to_pvec_exact(r: &Q, sa: &Q, sb: &Q) -> Result<PVec> {
    for (name, v) in [("r", r), ("sa", sa), ("sb", sb)] {
        check_unit(name, v)?;
    }
    let one = qi(1);
    let p11 = r * sa * sb;
    let p10 = r * sa * (&one - sb);
    let p01 = r * (&one - sa) * sb;
    let p00 = &one - r * (sa + sb - sa * sb);
    for (name, v) in [("p11", &p11), ("p10", &p10), ("p01", &p01), ("p00", &p00)] {
        check_unit(name, v)?;
    }
    PVec::exact(p11, p10, p01, p00)
}

pub fn subsampling_to_pvec(s: &SubsamplingParams) -> Result<PVec> {
    for (name, v) in [("r", s.r), ("sa", s.sa), ("sb", s.sb)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::param(format!("{name} = {v} outside [0,1]")));
        }
    }
    PVec::float(
        s.r * s.sa * s.sb,
        s.r * s.sa * (1.0 - s.sb),
        s.r * (1.0 - s.sa) * s.sb,
        1.0 - s.r * (s.sa + s.sb - s.sa * s.sb),
    )
}

/// Parent density `r = p11 + p10 + p01 + p10·p01/p11`, exactly.
pub fn pvec_to_r(p: &PVec) -> Result<Q> {
    let [p11, p10, p01, _] = p.require_exact("pvec_to_r")?;
    if p11.is_zero() {
        return Err(Error::domain("pvec_to_r requires p11 > 0"));
    }
    Ok(p11 + p10 + p01 + p10 * p01 / p11)
}
