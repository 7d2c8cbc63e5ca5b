//! Scalar quadratic forward operator `K(u) = eps * u * (1 - u)`.
//!
//! Small `eps` makes the inversion sensitive to data perturbations, so the
//! operator mimics ill-posed behavior while every quantity of interest has
//! a closed form: the minimum-norm solution, the source representer, the
//! second-order error `E(u, v) = -eps (u - v)^2`, and the Tikhonov
//! minimizer (a root of a cubic).

use crate::constraint::ConstraintSet;
use crate::error::{Error, Result};
use crate::problem::{BilinearRepresentable, ForwardProblem};
use crate::space::InnerProduct;

#[derive(Debug, Clone)]
pub struct ScalarQuadratic {
    eps_scale: f64,
    ip: InnerProduct,
}

impl ScalarQuadratic {
    pub fn new(eps_scale: f64) -> Result<Self> {
        if eps_scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "eps_scale must be positive, got {eps_scale}"
            )));
        }
        Ok(Self { eps_scale, ip: InnerProduct::euclidean(1) })
    }

    pub fn eps_scale(&self) -> f64 {
        self.eps_scale
    }

    pub fn k(&self, u: f64) -> f64 {
        self.eps_scale * u * (1.0 - u)
    }

    pub fn k_prime(&self, u: f64) -> f64 {
        self.eps_scale * (1.0 - 2.0 * u)
    }
}

impl ForwardProblem for ScalarQuadratic {
    fn dim_param(&self) -> usize {
        1
    }

    fn dim_data(&self) -> usize {
        1
    }

    fn param_ip(&self) -> &InnerProduct {
        &self.ip
    }

    fn data_ip(&self) -> &InnerProduct {
        &self.ip
    }

    fn evaluate(&self, u: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.k(u[0])])
    }

    fn deriv_apply(&self, u: &[f64], du: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.k_prime(u[0]) * du[0]])
    }

    fn adjoint_apply(&self, u: &[f64], v: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.k_prime(u[0]) * v[0]])
    }

    fn lipschitz_constant(&self) -> Option<f64> {
        Some(2.0 * self.eps_scale)
    }
}

impl BilinearRepresentable for ScalarQuadratic {
    /// Factor from the chord of `K` at the reference point: with
    /// `m(u) = -(K(u) - K(u_ref))/(u - u_ref)` one has
    /// `q = (m(u) - m(u_ref))/m(u_ref) = -(u - u_ref)/(1 - 2 u_ref)`,
    /// which reproduces `<w, E>` exactly for any representer satisfying
    /// the source condition at `u_ref`.
    fn representation_factor(&self, u: &[f64], u_ref: &[f64]) -> Result<Vec<f64>> {
        let denom = 1.0 - 2.0 * u_ref[0];
        if denom.abs() < 1e-14 {
            return Err(Error::VanishingDenominator { index: 0 });
        }
        Ok(vec![-(u[0] - u_ref[0]) / denom])
    }
}

/// Minimum-norm exact solution `u = (1 - sqrt(1 - 4 g / eps)) / 2`.
pub fn scalar_exact_solution(eps_scale: f64, g_exact: f64) -> Result<f64> {
    if !(g_exact >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "exact data must be nonnegative, got {g_exact}"
        )));
    }
    let fold = eps_scale / 4.0;
    if g_exact >= fold {
        return Err(Error::NoRealSolution { g_exact, fold });
    }
    Ok(0.5 * (1.0 - (1.0 - 4.0 * g_exact / eps_scale).sqrt()))
}

/// Source representer `w = u / (eps (1 - 2u))` at the minimum-norm solution;
/// solves `K'(u) w = u` exactly in the unconstrained case.
pub fn scalar_source_representer(eps_scale: f64, g_exact: f64) -> Result<f64> {
    let u = scalar_exact_solution(eps_scale, g_exact)?;
    let kp = eps_scale * (1.0 - 2.0 * u);
    if kp.abs() < 1e-14 {
        return Err(Error::VanishingDerivative);
    }
    Ok(u / kp)
}

/// All real roots of `a3 x^3 + a2 x^2 + a1 x + a0 = 0` (a3 != 0), each
/// polished by a few Newton steps.
fn solve_cubic_real(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    debug_assert!(a3 != 0.0);
    let p = a2 / a3;
    let q = a1 / a3;
    let r = a0 / a3;
    // depressed cubic s^3 + big_a s + big_b via x = s - p/3
    let shift = p / 3.0;
    let big_a = q - p * p / 3.0;
    let big_b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;

    let disc = -4.0 * big_a * big_a * big_a - 27.0 * big_b * big_b;
    let mut roots = Vec::with_capacity(3);
    if disc > 0.0 {
        // three distinct real roots, trigonometric form (big_a < 0 here)
        let m = 2.0 * (-big_a / 3.0).sqrt();
        let arg = (3.0 * big_b / (big_a * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        for k in 0..3 {
            let s = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            roots.push(s - shift);
        }
    } else {
        // one real root (plus a possible double root when disc == 0)
        let half_b = big_b / 2.0;
        let inner = half_b * half_b + big_a * big_a * big_a / 27.0;
        let sq = inner.max(0.0).sqrt();
        let s = (-half_b + sq).cbrt() + (-half_b - sq).cbrt();
        roots.push(s - shift);
        if disc == 0.0 && big_a != 0.0 {
            roots.push(-s / 2.0 - shift);
        }
    }

    let f = |x: f64| ((a3 * x + a2) * x + a1) * x + a0;
    let fp = |x: f64| (3.0 * a3 * x + 2.0 * a2) * x + a1;
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let d = fp(*root);
            if d.abs() > 1e-300 {
                let step = f(*root) / d;
                if step.is_finite() {
                    *root -= step;
                }
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    roots
}

/// Global minimizer of `J_eta` over the box: the stationary cubic
/// `J_eta'(u) = 2 eps^2 u^3 - 3 eps^2 u^2 + (eps^2 + 2 eps g + eta) u - eps g`
/// is solved in closed form; candidates are its real roots inside the box
/// plus the finite box endpoints; ties break toward smaller `|u|`.
pub fn scalar_tikhonov_minimizer(
    eps_scale: f64,
    g: f64,
    eta: f64,
    c: &ConstraintSet,
) -> Result<f64> {
    if eta <= 0.0 {
        return Err(Error::InvalidParameter(format!("eta must be positive, got {eta}")));
    }
    if c.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: c.dim() });
    }
    let e2 = eps_scale * eps_scale;
    let roots = solve_cubic_real(
        2.0 * e2,
        -3.0 * e2,
        e2 + 2.0 * eps_scale * g + eta,
        -eps_scale * g,
    );
    let lo = c.lower()[0];
    let hi = c.upper()[0];
    let j = |u: f64| {
        let r = eps_scale * u * (1.0 - u) - g;
        0.5 * r * r + 0.5 * eta * u * u
    };
    let mut candidates: Vec<f64> = roots.into_iter().filter(|&u| u >= lo && u <= hi).collect();
    if lo.is_finite() {
        candidates.push(lo);
    }
    if hi.is_finite() {
        candidates.push(hi);
    }
    let mut best: Option<(f64, f64)> = None;
    for u in candidates {
        let ju = j(u);
        let better = match best {
            None => true,
            Some((bu, bj)) => {
                ju < bj - 1e-15 * (1.0 + bj.abs())
                    || ((ju - bj).abs() <= 1e-15 * (1.0 + bj.abs()) && u.abs() < bu.abs())
            }
        };
        if better {
            best = Some((u, ju));
        }
    }
    // the cubic always has a real root, so with an unbounded box the list is
    // nonempty; a bounded box contributes its endpoints
    Ok(best.expect("candidate list cannot be empty").0)
}
