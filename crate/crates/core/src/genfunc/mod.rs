//! Exact generating functions for the alignment statistic.
//!
//! For a single `ℓ`-cycle `σ(i) = i + 1 mod ℓ` the family
//! `a_ℓ(w, z) = Σ_{g,h} z^{δ(σ;g,h)} w^{μ(g,h)}` has the closed form
//! `a_ℓ = d_ℓ(u, v)` with `u = Σw` and
//! `v = w₀₀w₁₁(z − 1) + w₀₁w₁₀(z⁻¹ − 1)`. Products over a cycle census give
//! the generating function of a lifted permutation, and substituting the edge
//! probabilities gives the exact joint law of `(M̃, δ)`.
//!
//! Every closed form has a brute-force enumeration oracle next to it.

mod bipoly;
mod cyclic;
mod laurent;
mod pgf;

pub use bipoly::BiPoly;
pub use cyclic::{
    a_ell_closed, a_ell_closed_with, a_ell_oracle, b_ell_oracle, big_A, c_ell_closed, c_ell_oracle, d_ell, d_ell_oracle,
    d_ell_ring, joint_pmf, joint_with_total, tilde_A, DFn, GfRing, JointTotal, WMatrix, ORACLE_CAP,
};
pub use laurent::LaurentPoly;
pub use pgf::{bin_pgf, chernoff_tail, exact_lower_tail, hyp_pgf};
