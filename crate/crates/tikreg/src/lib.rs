//! Constrained nonlinear Tikhonov regularization at desk scale.
//!
//! The crate minimizes `J_eta(u) = 0.5 ||K(u) - g||_H^2 + (eta/2) ||u||_X^2`
//! over a box, selects the regularization parameter by four rules (a priori,
//! discrepancy, balancing, Hanke-Raus), and numerically probes the source
//! and nonlinearity conditions that drive the convergence-rate theory.
//! Three forward problems ship with it: a scalar quadratic operator with
//! closed forms for everything, and 1D potential/conductivity identification
//! with discrete-exact adjoints.
//!
//! Entry points:
//! * [`solver::minimize`] / [`solver::value_function_sweep`] - Tikhonov solves
//! * [`rules`] - parameter choice rules
//! * [`diagnostics`] - source-condition fits and condition-margin scans
//! * [`harness`] - calibrated noise, rate studies, config and reports
//!
//! The `examples/` directory has one runnable example per capability, and
//! the thin `tikreg` binary exposes the same drivers as subcommands.

pub mod constraint;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod pde1d;
pub mod problem;
pub mod problems;
pub mod rules;
pub mod solver;
pub mod space;

pub use constraint::{ConstraintSet, MultiplierSign};
pub use error::{Error, Result};
pub use problem::{BilinearRepresentable, ForwardProblem, StateEquation, TikhonovResult};
pub use space::InnerProduct;
