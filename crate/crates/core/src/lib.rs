//! Thermodynamic formalism for one-sided subshifts of finite type with
//! locally constant potentials.
//!
//! The crate computes, for a finite 0/1 transition matrix and a potential
//! that depends on finitely many coordinates:
//!
//! * the Ruelle transfer operator as a finite nonnegative matrix, its
//!   dominant eigendata and the pressure ([`transfer`]);
//! * the equilibrium (Gibbs/Parry) measure with a cylinder evaluator
//!   ([`transfer::GibbsMeasure`]);
//! * the operator restricted to a proper sub-alphabet, the pressure of the
//!   survivor subsystem, its cyclic structure, the coupled eigenfunctions
//!   `h_0..h_{m-1}` and the Pianigiani–Yorke density ([`subsystem`]);
//! * the exact decay of survivor-set masses `mu(Delta_n)` and the
//!   per-residue-class limits of the scaled sequence, including the
//!   non-convergence that appears when the subsystem is periodic
//!   ([`asymptotics`]);
//! * naive brute-force reference routes used as ground truth in tests
//!   ([`oracle`]).
//!
//! All numeric kernels are generic over the floating-point type through
//! [`Scalar`]; the aliases at the crate root fix `f64`, which is what the
//! command-line front end and the test suites use.

pub mod asymptotics;
pub mod defaults;
pub mod error;
pub(crate) mod graph;
pub(crate) mod mat;
pub mod oracle;
pub mod presets;
pub mod scalar;
pub mod sft;
pub mod subsystem;
pub mod transfer;

pub use defaults::Tolerances;
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use sft::{BlockModel, CyclicDecomposition, SftModel, Word};

/// `f64` instantiations of the scalar-generic core types.
pub type Potential = transfer::CylindricalPotential<f64>;
pub type Transfer = transfer::TransferMatrix<f64>;
pub type Perron = transfer::PerronData<f64>;
pub type Measure = transfer::GibbsMeasure<f64>;
pub type Restricted = subsystem::RestrictedTransfer<f64>;
pub type Analysis = subsystem::SubsystemAnalysis<f64>;
pub type Report = asymptotics::AsymptoticsReport<f64>;
