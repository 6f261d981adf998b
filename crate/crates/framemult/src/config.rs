//! Numeric tolerances and limits shared across the toolkit.

/// Tolerances used by verdicts, certificates, and the oracle layer.
///
/// Defaults target desk-scale problems (dimensions up to a few hundred) in
/// double precision. Every verdict in the crate records which tolerance it
/// was taken against rather than claiming exactness.
#[derive(Clone, Debug)]
pub struct Tolerances {
    /// Relative tolerance for linearity/adjoint/duality identities.
    pub tol_lin: f64,
    /// Target residual for certified inverses (`||M Minv - I||`).
    pub tol_inv: f64,
    /// Duality residual coefficient; the threshold is `tol_dual_coeff * sqrt(d)`.
    pub tol_dual_coeff: f64,
    /// Threshold on singular values for rank decisions (Riesz margins,
    /// invertibility of auxiliary operators).
    pub tol_rank: f64,
    /// Imaginary-part tolerance when scanning a symbol for a uniform sign.
    pub tol_sign: f64,
    /// Largest dimension the dense oracle will realize.
    pub oracle_dim_cap: usize,
    /// Power iteration: maximum iterations before reporting no convergence.
    pub power_max_iters: usize,
    /// Power iteration: relative residual target.
    pub power_tol: f64,
    /// Diagnostics: total growth across the sweep that flags divergence.
    pub growth_factor: f64,
    /// Diagnostics: consecutive strictly-increasing sweep points required.
    pub monotone_run: usize,
    /// Diagnostics: total growth below which a trace counts as bounded.
    pub bounded_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_lin: 1e-9,
            tol_inv: 1e-10,
            tol_dual_coeff: 1e-8,
            tol_rank: 1e-9,
            tol_sign: 1e-9,
            oracle_dim_cap: 512,
            power_max_iters: 5000,
            power_tol: 1e-10,
            growth_factor: 8.0,
            monotone_run: 3,
            bounded_factor: 2.0,
        }
    }
}

impl Tolerances {
    /// Duality residual threshold at dimension `d`.
    pub fn tol_dual(&self, dim: usize) -> f64 {
        self.tol_dual_coeff * (dim as f64).sqrt()
    }
}
