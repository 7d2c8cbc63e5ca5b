//! Concrete forward problems: the scalar quadratic operator and two 1D
//! elliptic parameter identifications (potential and conductivity).

mod conductivity;
mod potential;
mod scalar;

pub use conductivity::{Conductivity1D, DEFAULT_LOWER, DEFAULT_UPPER};
pub use potential::Potential1D;
pub use scalar::{
    scalar_exact_solution, scalar_source_representer, scalar_tikhonov_minimizer, ScalarQuadratic,
};

use crate::error::Result;
use crate::linalg::Dense;
use crate::problem::{BilinearRepresentable, ForwardProblem, StateEquation};
use crate::space::InnerProduct;

/// Sum type over the shipped problems, for drivers that pick one at runtime.
#[derive(Debug, Clone)]
pub enum Problem {
    Scalar(ScalarQuadratic),
    Potential(Potential1D),
    Conductivity(Conductivity1D),
}

impl Problem {
    pub fn name(&self) -> &'static str {
        match self {
            Problem::Scalar(_) => "scalar",
            Problem::Potential(_) => "potential",
            Problem::Conductivity(_) => "conductivity",
        }
    }

    pub fn as_bilinear(&self) -> Option<&dyn BilinearRepresentable> {
        match self {
            Problem::Scalar(p) => Some(p),
            Problem::Potential(p) => Some(p),
            Problem::Conductivity(_) => None,
        }
    }

    pub fn as_state_equation(&self) -> Option<&dyn StateEquation> {
        match self {
            Problem::Scalar(_) => None,
            Problem::Potential(p) => Some(p),
            Problem::Conductivity(p) => Some(p),
        }
    }
}

impl ForwardProblem for Problem {
    fn dim_param(&self) -> usize {
        match self {
            Problem::Scalar(p) => p.dim_param(),
            Problem::Potential(p) => p.dim_param(),
            Problem::Conductivity(p) => p.dim_param(),
        }
    }

    fn dim_data(&self) -> usize {
        match self {
            Problem::Scalar(p) => p.dim_data(),
            Problem::Potential(p) => p.dim_data(),
            Problem::Conductivity(p) => p.dim_data(),
        }
    }

    fn param_ip(&self) -> &InnerProduct {
        match self {
            Problem::Scalar(p) => p.param_ip(),
            Problem::Potential(p) => p.param_ip(),
            Problem::Conductivity(p) => p.param_ip(),
        }
    }

    fn data_ip(&self) -> &InnerProduct {
        match self {
            Problem::Scalar(p) => p.data_ip(),
            Problem::Potential(p) => p.data_ip(),
            Problem::Conductivity(p) => p.data_ip(),
        }
    }

    fn evaluate(&self, u: &[f64]) -> Result<Vec<f64>> {
        match self {
            Problem::Scalar(p) => p.evaluate(u),
            Problem::Potential(p) => p.evaluate(u),
            Problem::Conductivity(p) => p.evaluate(u),
        }
    }

    fn deriv_apply(&self, u: &[f64], du: &[f64]) -> Result<Vec<f64>> {
        match self {
            Problem::Scalar(p) => p.deriv_apply(u, du),
            Problem::Potential(p) => p.deriv_apply(u, du),
            Problem::Conductivity(p) => p.deriv_apply(u, du),
        }
    }

    fn adjoint_apply(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        match self {
            Problem::Scalar(p) => p.adjoint_apply(u, v),
            Problem::Potential(p) => p.adjoint_apply(u, v),
            Problem::Conductivity(p) => p.adjoint_apply(u, v),
        }
    }

    fn jacobian(&self, u: &[f64]) -> Result<Dense> {
        match self {
            Problem::Scalar(p) => p.jacobian(u),
            Problem::Potential(p) => p.jacobian(u),
            Problem::Conductivity(p) => p.jacobian(u),
        }
    }

    fn lipschitz_constant(&self) -> Option<f64> {
        match self {
            Problem::Scalar(p) => p.lipschitz_constant(),
            Problem::Potential(p) => p.lipschitz_constant(),
            Problem::Conductivity(p) => p.lipschitz_constant(),
        }
    }
}
