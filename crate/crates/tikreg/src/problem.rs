//! The forward-problem contract and the Tikhonov functional.
//!
//! A [`ForwardProblem`] bundles the operator evaluation `K(u)`, the
//! derivative action `K'(u) du`, the adjoint action `K'(u)* v`, and the two
//! weighted inner-product spaces. The adjoint is the exact transpose of the
//! assembled discrete derivative with respect to the weighted products, so
//! the identity `<K'(u) du, v>_H = <du, K'(u)* v>_X` holds to round-off.

use serde::Serialize;

use crate::constraint::ConstraintSet;
use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::space::InnerProduct;

pub trait ForwardProblem {
    fn dim_param(&self) -> usize;
    fn dim_data(&self) -> usize;

    /// Inner product of the parameter space X.
    fn param_ip(&self) -> &InnerProduct;
    /// Inner product of the data space H.
    fn data_ip(&self) -> &InnerProduct;

    /// `K(u)`
    fn evaluate(&self, u: &[f64]) -> Result<Vec<f64>>;
    /// `K'(u) du`
    fn deriv_apply(&self, u: &[f64], du: &[f64]) -> Result<Vec<f64>>;
    /// `K'(u)* v` with respect to the weighted inner products.
    fn adjoint_apply(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>>;

    /// Dense Jacobian in plain coordinates, one derivative solve per column.
    fn jacobian(&self, u: &[f64]) -> Result<Dense> {
        let n = self.dim_param();
        let m = self.dim_data();
        let mut j = Dense::zeros(m, n);
        let mut e = vec![0.0; n];
        for col in 0..n {
            e[col] = 1.0;
            let ke = self.deriv_apply(u, &e)?;
            e[col] = 0.0;
            for row in 0..m {
                j.set(row, col, ke[row]);
            }
        }
        Ok(j)
    }

    /// Exact Lipschitz constant of `K'` when one is known in closed form.
    fn lipschitz_constant(&self) -> Option<f64> {
        None
    }
}

/// Problems whose nonlinearity term admits the representer-free form
/// `<w, E(u, u_ref)>_H = <u_ref - mu, q .* (u - u_ref)>_X` with a
/// componentwise factor `q` built from states alone.
pub trait BilinearRepresentable: ForwardProblem {
    /// The componentwise factor `q(u, u_ref)`.
    fn representation_factor(&self, u: &[f64], u_ref: &[f64]) -> Result<Vec<f64>>;
}

/// Parameter-identification problems `e(u, y) = A(u) y - f = 0` exposing the
/// pieces needed by the state-space source condition.
pub trait StateEquation: ForwardProblem {
    /// State solve `y(u)`.
    fn state(&self, u: &[f64]) -> Result<Vec<f64>>;
    /// `e_u(u, y(u))^T rho` in dual coordinates.
    fn e_u_transpose(&self, u: &[f64], rho: &[f64]) -> Result<Vec<f64>>;
    /// Inner product of the state space (used to regularize fits for rho).
    fn state_ip(&self) -> &InnerProduct;
}

/// Minimizer record for one Tikhonov solve.
#[derive(Debug, Clone, Serialize)]
pub struct TikhonovResult {
    pub u: Vec<f64>,
    pub eta: f64,
    /// `||K(u) - g||_H`
    pub residual_norm: f64,
    /// `0.5 ||u||_X^2`
    pub penalty: f64,
    /// `F(eta) = 0.5 residual^2 + eta * penalty`, stored as that exact
    /// expression of the other fields.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl TikhonovResult {
    pub fn new(
        u: Vec<f64>,
        eta: f64,
        residual_norm: f64,
        penalty: f64,
        iterations: usize,
        converged: bool,
    ) -> Self {
        let value = 0.5 * residual_norm * residual_norm + eta * penalty;
        Self { u, eta, residual_norm, penalty, value, iterations, converged }
    }
}

/// `J_eta(u) = 0.5 ||K(u) - g||_H^2 + (eta/2) ||u||_X^2` at a feasible point.
pub fn tikhonov_value<P: ForwardProblem + ?Sized>(
    p: &P,
    c: &ConstraintSet,
    eta: f64,
    g: &[f64],
    u: &[f64],
) -> Result<f64> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    c.require_feasible(u)?;
    let r = crate::linalg::sub(&p.evaluate(u)?, g);
    let res = p.data_ip().norm(&r);
    let pen = p.param_ip().norm(u);
    let value = 0.5 * res * res + 0.5 * eta * pen * pen;
    if !value.is_finite() {
        return Err(Error::NonFinite("tikhonov value".into()));
    }
    Ok(value)
}

/// Relative gap of the adjoint identity at one `(u, du, v)` triple.
pub fn adjoint_identity_gap<P: ForwardProblem + ?Sized>(
    p: &P,
    u: &[f64],
    du: &[f64],
    v: &[f64],
) -> Result<f64> {
    let lhs = p.data_ip().dot(&p.deriv_apply(u, du)?, v);
    let rhs = p.param_ip().dot(du, &p.adjoint_apply(u, v)?);
    let scale = lhs.abs().max(rhs.abs()).max(1e-30);
    Ok((lhs - rhs).abs() / scale)
}

/// Remainder ratios `||K(u + t du) - K(u) - t K'(u) du||_H / t^2` for a
/// sequence of step sizes. Bounded ratios certify first-order consistency
/// of the derivative.
pub fn taylor_remainder_ratios<P: ForwardProblem + ?Sized>(
    p: &P,
    u: &[f64],
    du: &[f64],
    ts: &[f64],
) -> Result<Vec<f64>> {
    let ku = p.evaluate(u)?;
    let kdu = p.deriv_apply(u, du)?;
    ts.iter()
        .map(|&t| {
            let ut = crate::linalg::axpy(u, t, du);
            let kt = p.evaluate(&ut)?;
            let rem: Vec<f64> = kt
                .iter()
                .zip(ku.iter().zip(&kdu))
                .map(|(a, (b, c))| a - b - t * c)
                .collect();
            Ok(p.data_ip().norm(&rem) / (t * t))
        })
        .collect()
}
