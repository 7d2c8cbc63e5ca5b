//! Identification of the potential in `(-y'' + u y) = f` on (0,1) with
//! homogeneous Dirichlet conditions and full-field observation `K(u) = y(u)`.
//!
//! The parameter derivative is local: `e_u(u, y) du = y .* du`, so this is
//! the minimal separable bilinear instance and the representer-free form of
//! the nonlinearity term applies verbatim with denominator `y(u_ref)`.
//! Both spaces carry the trapezoid L2 product.

use crate::constraint::ConstraintSet;
use crate::error::{Error, Result};
use crate::pde1d::{assemble_operator, solve_tridiagonal, Grid1D, OperatorKind};
use crate::problem::{BilinearRepresentable, ForwardProblem, StateEquation};
use crate::space::InnerProduct;

#[derive(Debug, Clone)]
pub struct Potential1D {
    grid: Grid1D,
    f: Vec<f64>,
    ip: InnerProduct,
    constraint: ConstraintSet,
}

impl Potential1D {
    pub fn new(grid: Grid1D, f: Vec<f64>) -> Result<Self> {
        let n = grid.n();
        if f.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: f.len() });
        }
        Ok(Self {
            grid,
            f,
            ip: InnerProduct::scaled_identity(n, grid.h()),
            constraint: ConstraintSet::new(vec![0.0; n], vec![f64::INFINITY; n])?,
        })
    }

    /// Default source `f = 2`, which gives the closed-form state `x (1 - x)`
    /// at `u = 0`.
    pub fn with_constant_source(grid: Grid1D) -> Result<Self> {
        let n = grid.n();
        Self::new(grid, vec![2.0; n])
    }

    pub fn grid(&self) -> &Grid1D {
        self.grid_ref()
    }

    fn grid_ref(&self) -> &Grid1D {
        &self.grid
    }

    /// The pointwise constraint `u >= 0`.
    pub fn constraint(&self) -> &ConstraintSet {
        &self.constraint
    }
}

impl ForwardProblem for Potential1D {
    fn dim_param(&self) -> usize {
        self.grid.n()
    }

    fn dim_data(&self) -> usize {
        self.grid.n()
    }

    fn param_ip(&self) -> &InnerProduct {
        &self.ip
    }

    fn data_ip(&self) -> &InnerProduct {
        &self.ip
    }

    fn evaluate(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.state(u)
    }

    fn deriv_apply(&self, u: &[f64], du: &[f64]) -> Result<Vec<f64>> {
        let a = assemble_operator(&self.grid, u, OperatorKind::Potential)?;
        let y = solve_tridiagonal(&a, &self.f)?;
        let rhs: Vec<f64> = du.iter().zip(&y).map(|(d, yi)| -d * yi).collect();
        solve_tridiagonal(&a, &rhs)
    }

    fn adjoint_apply(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let a = assemble_operator(&self.grid, u, OperatorKind::Potential)?;
        let y = solve_tridiagonal(&a, &self.f)?;
        let lambda = solve_tridiagonal(&a, &self.ip.apply(v))?;
        let dual: Vec<f64> = y.iter().zip(&lambda).map(|(yi, li)| -yi * li).collect();
        Ok(self.ip.solve(&dual))
    }
}

impl BilinearRepresentable for Potential1D {
    fn representation_factor(&self, u: &[f64], u_ref: &[f64]) -> Result<Vec<f64>> {
        let y = self.state(u)?;
        let y_ref = self.state(u_ref)?;
        y.iter()
            .zip(y_ref.iter().enumerate())
            .map(|(yi, (i, yr))| {
                if yr.abs() < 1e-300 {
                    Err(Error::VanishingDenominator { index: i })
                } else {
                    Ok((yi - yr) / yr)
                }
            })
            .collect()
    }
}

impl StateEquation for Potential1D {
    fn state(&self, u: &[f64]) -> Result<Vec<f64>> {
        let a = assemble_operator(&self.grid, u, OperatorKind::Potential)?;
        solve_tridiagonal(&a, &self.f)
    }

    fn e_u_transpose(&self, u: &[f64], rho: &[f64]) -> Result<Vec<f64>> {
        let y = self.state(u)?;
        Ok(y.iter().zip(rho).map(|(yi, ri)| yi * ri).collect())
    }

    fn state_ip(&self) -> &InnerProduct {
        &self.ip
    }
}
