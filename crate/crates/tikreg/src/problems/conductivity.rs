//! Identification of the conductivity in `-(u y')' = f` on (0,1) with
//! homogeneous Dirichlet conditions and full-field observation `K(u) = y(u)`.
//!
//! The data space carries the H1_0 seminorm (Dirichlet stiffness) and the
//! parameter space the full H1 product (trapezoid mass plus Neumann
//! stiffness, so constants are penalized only through the mass part). The
//! parameter derivative `e_u(u, y) du = -(du y')'` is nonlocal, so this
//! problem has no separable representer-free form; the state-space source
//! condition uses `e_u^T rho`, the discrete form of `y' rho'`.

use crate::constraint::ConstraintSet;
use crate::error::{Error, Result};
use crate::pde1d::{
    assemble_operator, conductivity_parameter_matrix, discrete_h1_norms, neumann_stiffness,
    solve_tridiagonal, Grid1D, OperatorKind,
};
use crate::problem::{ForwardProblem, StateEquation};
use crate::space::InnerProduct;

pub const DEFAULT_LOWER: f64 = 0.1;
pub const DEFAULT_UPPER: f64 = 10.0;

#[derive(Debug, Clone)]
pub struct Conductivity1D {
    grid: Grid1D,
    f: Vec<f64>,
    param_ip: InnerProduct,
    data_ip: InnerProduct,
    constraint: ConstraintSet,
}

impl Conductivity1D {
    pub fn new(grid: Grid1D, f: Vec<f64>, lower: f64, upper: f64) -> Result<Self> {
        let n = grid.n();
        if f.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: f.len() });
        }
        if !(lower > 0.0 && lower <= upper) {
            return Err(Error::InvalidParameter(format!(
                "conductivity box needs 0 < lower <= upper, got [{lower}, {upper}]"
            )));
        }
        let (stiff, mass) = discrete_h1_norms(&grid);
        let param_ip = InnerProduct::tridiagonal(mass.add(&neumann_stiffness(&grid)))?;
        let data_ip = InnerProduct::tridiagonal(stiff)?;
        Ok(Self {
            grid,
            f,
            param_ip,
            data_ip,
            constraint: ConstraintSet::uniform(n, lower, upper)?,
        })
    }

    pub fn with_constant_source(grid: Grid1D) -> Result<Self> {
        let n = grid.n();
        Self::new(grid, vec![2.0; n], DEFAULT_LOWER, DEFAULT_UPPER)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// The box `c0 <= u <= c1`.
    pub fn constraint(&self) -> &ConstraintSet {
        &self.constraint
    }
}

impl ForwardProblem for Conductivity1D {
    fn dim_param(&self) -> usize {
        self.grid.n()
    }

    fn dim_data(&self) -> usize {
        self.grid.n()
    }

    fn param_ip(&self) -> &InnerProduct {
        &self.param_ip
    }

    fn data_ip(&self) -> &InnerProduct {
        &self.data_ip
    }

    fn evaluate(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.state(u)
    }

    fn deriv_apply(&self, u: &[f64], du: &[f64]) -> Result<Vec<f64>> {
        let a = assemble_operator(&self.grid, u, OperatorKind::Conductivity)?;
        let y = solve_tridiagonal(&a, &self.f)?;
        let b = conductivity_parameter_matrix(&self.grid, &y);
        let rhs: Vec<f64> = b.matvec(du).into_iter().map(|v| -v).collect();
        solve_tridiagonal(&a, &rhs)
    }

    fn adjoint_apply(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        let a = assemble_operator(&self.grid, u, OperatorKind::Conductivity)?;
        let y = solve_tridiagonal(&a, &self.f)?;
        let b = conductivity_parameter_matrix(&self.grid, &y);
        let lambda = solve_tridiagonal(&a, &self.data_ip.apply(v))?;
        let dual: Vec<f64> = b.matvec_transpose(&lambda).into_iter().map(|v| -v).collect();
        Ok(self.param_ip.solve(&dual))
    }
}

impl StateEquation for Conductivity1D {
    fn state(&self, u: &[f64]) -> Result<Vec<f64>> {
        let a = assemble_operator(&self.grid, u, OperatorKind::Conductivity)?;
        solve_tridiagonal(&a, &self.f)
    }

    fn e_u_transpose(&self, u: &[f64], rho: &[f64]) -> Result<Vec<f64>> {
        let y = self.state(u)?;
        let b = conductivity_parameter_matrix(&self.grid, &y);
        Ok(b.matvec_transpose(rho))
    }

    fn state_ip(&self) -> &InnerProduct {
        &self.data_ip
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{adjoint_identity_gap, taylor_remainder_ratios};
    use rand::{Rng, SeedableRng};

    fn problem(n: usize) -> Conductivity1D {
        Conductivity1D::with_constant_source(Grid1D::new(n).unwrap()).unwrap()
    }

    #[test]
    fn unit_conductivity_gives_parabola_exactly() {
        let p = problem(99);
        let y = p.evaluate(&vec![1.0; 99]).unwrap();
        let exact = p.grid().sample(|x| x * (1.0 - x));
        for (a, b) in y.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn state_satisfies_equation_to_round_off() {
        let p = problem(49);
        let u = p.grid().sample(|x| 1.0 + x);
        let y = p.state(&u).unwrap();
        let a = assemble_operator(p.grid(), &u, OperatorKind::Conductivity).unwrap();
        let back = a.matvec(&y);
        for b in back {
            assert!((b - 2.0).abs() <= 1e-12 * 2.0 * (1.0 / p.grid().h()));
        }
    }

    #[test]
    fn adjoint_identity_holds_at_random_triples() {
        let p = problem(23);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let u: Vec<f64> = (0..23).map(|_| rng.random_range(0.3..3.0)).collect();
            let du: Vec<f64> = (0..23).map(|_| rng.random_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..23).map(|_| rng.random_range(-1.0..1.0)).collect();
            let gap = adjoint_identity_gap(&p, &u, &du, &v).unwrap();
            assert!(gap <= 1e-10, "gap {gap}");
        }
    }

    #[test]
    fn taylor_remainder_ratio_is_stable() {
        let p = problem(23);
        let u = p.grid().sample(|x| 1.2 + 0.5 * x);
        let du = p.grid().sample(|x| (4.0 * x).cos());
        let ts: Vec<f64> = (0..10).map(|k| 1e-1 / 2f64.powi(k)).collect();
        let ratios = taylor_remainder_ratios(&p, &u, &du, &ts).unwrap();
        for w in ratios.windows(2) {
            let rel = (w[1] / w[0] - 1.0).abs();
            assert!(rel < 0.5, "ratio drift {rel} in {ratios:?}");
        }
    }

    #[test]
    fn state_positive_on_random_feasible_coefficients() {
        let p = problem(31);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let u: Vec<f64> = (0..31).map(|_| rng.random_range(0.1..10.0)).collect();
            let y = p.state(&u).unwrap();
            assert!(y.iter().all(|&v| v > 0.0));
        }
    }

    #[test]
    fn fine_grid_reference_confirms_second_order_accuracy() {
        let reference = problem(1599);
        let uref = reference.grid().sample(|x| 1.0 + x);
        let yref = reference.state(&uref).unwrap();

        let coarse = problem(99);
        let u = coarse.grid().sample(|x| 1.0 + x);
        let y = coarse.state(&u).unwrap();
        let stride = 1600 / 100;
        let err = (0..99)
            .map(|i| (y[i] - yref[(i + 1) * stride - 1]).abs())
            .fold(0.0f64, f64::max);
        // O(h^2) at h = 1/100 with an O(1) constant
        assert!(err < 5e-4, "coarse vs fine error {err}");
    }
}
