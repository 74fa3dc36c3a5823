//! Default tolerances and budgets, collected in one place.

/// Relative residual accepted by the eigen solver.
pub const PERRON_TOL: f64 = 1e-12;

/// Iteration cap for the eigen solver.
pub const PERRON_MAX_ITER: usize = 100_000;

/// Relative sup-norm change per m-step accepted by the eigenfunction limit.
pub const H_TOL: f64 = 1e-12;

/// Cap on m-steps for the eigenfunction limit.
pub const H_MAX_STEPS: usize = 10_000;

/// Maximal deviation of a column sum from 1 for a potential to count as
/// normalised.
pub const NORMALIZED_TOL: f64 = 1e-9;

/// Spread of the residue-class limits above which the scaled sequence is
/// declared non-convergent.
pub const SPREAD_TOL: f64 = 1e-6;

/// Spread below which the residue-class limits are considered equal; values
/// between this and [`SPREAD_TOL`] are flagged indeterminate.
pub const SPREAD_INDETERMINATE: f64 = 1e-8;

/// Enumeration budget for the brute-force oracle (estimated word count).
pub const ORACLE_BUDGET: f64 = 1e7;

/// Tolerance bundle threaded through the solvers.
#[derive(Clone, Debug)]
pub struct Tolerances {
    /// Relative residual for eigen solves.
    pub perron_tol: f64,
    /// Iteration cap for eigen solves.
    pub perron_max_iter: usize,
    /// Relative sup-norm change per m-step for the eigenfunction limits.
    pub h_tol: f64,
    /// Cap on m-steps for the eigenfunction limits.
    pub h_max_steps: usize,
    /// Accepted deviation of column sums from 1.
    pub normalized_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            perron_tol: PERRON_TOL,
            perron_max_iter: PERRON_MAX_ITER,
            h_tol: H_TOL,
            h_max_steps: H_MAX_STEPS,
            normalized_tol: NORMALIZED_TOL,
        }
    }
}

impl Tolerances {
    /// Tight settings used by the golden-value tests.
    pub fn strict() -> Self {
        Tolerances {
            perron_tol: 1e-14,
            h_tol: 1e-14,
            ..Tolerances::default()
        }
    }
}
