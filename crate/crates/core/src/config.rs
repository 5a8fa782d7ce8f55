//! Numerical tolerances and limits.

use std::sync::OnceLock;

/// Norm deviation allowed for a state labelled normalized.
pub const TOL_NORM: f64 = 1e-10;
/// Max-entry deviation for unitarity and Hermiticity checks.
pub const TOL_UNITARY: f64 = 1e-10;
/// Residual allowed outside the symmetric subspace or a photon-number sector.
pub const TOL_SYM: f64 = 1e-10;
/// Eigenvalues closer than this are merged into one measurement outcome.
pub const EIG_TOL: f64 = 1e-8;
/// Coherent-state mass allowed beyond the cutoff.
pub const TAIL_TOL: f64 = 1e-12;
/// Comparison tolerance for circuits built from exact gates.
pub const TOL_EXACT: f64 = 1e-9;
/// Comparison tolerance for circuits limited by Fock truncation.
pub const TOL_COHERENT: f64 = 1e-6;
/// Finite-difference step for sensitivity derivatives.
pub const FD_STEP: f64 = 1e-5;
/// Smallest derivative magnitude accepted at an operating point.
pub const DERIV_FLOOR: f64 = 1e-8;
/// Default number of points in a phase grid on [-pi, pi].
pub const DEFAULT_GRID: usize = 25;
/// Default cap on the number of amplitudes in a state.
pub const DEFAULT_MAX_DIM: usize = 1 << 24;
/// Largest operator materialised as a dense full-space matrix.
pub const MAX_DENSE_DIM: usize = 4096;
/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "INTERFEROQ_MAX_DIM";

/// All tolerances in one record, for callers that want to pass them around.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub norm: f64,
    pub unitary: f64,
    pub sym: f64,
    pub eig: f64,
    pub tail: f64,
    pub exact: f64,
    pub coherent: f64,
    pub fd_step: f64,
    pub deriv_floor: f64,
    pub max_dim: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: TOL_NORM,
            unitary: TOL_UNITARY,
            sym: TOL_SYM,
            eig: EIG_TOL,
            tail: TAIL_TOL,
            exact: TOL_EXACT,
            coherent: TOL_COHERENT,
            fd_step: FD_STEP,
            deriv_floor: DERIV_FLOOR,
            max_dim: max_dim(),
        }
    }
}

/// Dimension limit, read once from the environment.
pub fn max_dim() -> usize {
    static LIMIT: OnceLock<usize> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}

/// Uniform grid of `n` points on `[lo, hi]`, endpoints included.
pub fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// The default equivalence-check grid: [`DEFAULT_GRID`] points on [-pi, pi].
pub fn default_phi_grid() -> Vec<f64> {
    grid(-std::f64::consts::PI, std::f64::consts::PI, DEFAULT_GRID)
}
