//! Regularization-parameter choice rules on top of warm-started sweeps.
//!
//! * a priori: `eta = c_ap * delta`
//! * discrepancy: `||K(u_eta) - g|| = c_m * delta` by bisection in log eta
//! * balancing: grid argmin of `Phi(eta) = F(eta)^{1+gamma} / eta`, refined
//!   by the fixed point `eta <- residual^2 / (gamma ||u||_X^2)` of the
//!   balancing equation
//! * Hanke-Raus: grid argmin of `residual^2 / eta`

use serde::Serialize;

use crate::constraint::ConstraintSet;
use crate::error::{BracketSide, Error, Result};
use crate::problem::{ForwardProblem, TikhonovResult};
use crate::solver::{minimize, value_function_sweep, SolverOptions};

/// Geometric eta grid, `count >= 8` points from `eta_min` to `eta_max`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct EtaGrid {
    pub eta_min: f64,
    pub eta_max: f64,
    pub count: usize,
}

impl EtaGrid {
    pub fn new(eta_min: f64, eta_max: f64, count: usize) -> Result<Self> {
        if !(eta_min > 0.0 && eta_min < eta_max) {
            return Err(Error::InvalidParameter(format!(
                "eta grid needs 0 < eta_min < eta_max, got [{eta_min}, {eta_max}]"
            )));
        }
        if count < 8 {
            return Err(Error::InvalidParameter(format!(
                "eta grid needs at least 8 points, got {count}"
            )));
        }
        Ok(Self { eta_min, eta_max, count })
    }

    /// The interval ends default to `[1e-12, 1e2]` with 60 points; the upper
    /// end stands in for the undefined `||K||^2` of a nonlinear operator.
    pub fn default_interval() -> Self {
        Self { eta_min: 1e-12, eta_max: 1e2, count: 60 }
    }

    /// Descending geometric points.
    pub fn descending(&self) -> Vec<f64> {
        let ratio = (self.eta_min / self.eta_max).powf(1.0 / (self.count as f64 - 1.0));
        let mut etas: Vec<f64> = (0..self.count)
            .map(|i| self.eta_max * ratio.powi(i as i32))
            .collect();
        // pin the endpoints exactly
        etas[0] = self.eta_max;
        *etas.last_mut().unwrap() = self.eta_min;
        etas
    }

    pub fn clamp(&self, eta: f64) -> f64 {
        eta.max(self.eta_min).min(self.eta_max)
    }
}

/// Rule-specific diagnostics carried along with the chosen parameter.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum RuleDiagnostics {
    Discrepancy {
        c_m: f64,
        delta: f64,
        target: f64,
        bracket: (f64, f64),
        bisection_steps: usize,
        grid_etas: Vec<f64>,
        grid_residuals: Vec<f64>,
    },
    Balancing {
        gamma: f64,
        grid_etas: Vec<f64>,
        grid_phi: Vec<f64>,
        grid_argmin_eta: f64,
        refined: bool,
        fixed_point_iterations: usize,
        /// `|gamma eta ||u||^2 - residual^2| / residual^2` at the accepted eta
        balancing_mismatch: f64,
    },
    HankeRaus {
        grid_etas: Vec<f64>,
        grid_surrogates: Vec<f64>,
        excluded_zero_residual_etas: Vec<f64>,
    },
}

/// Selected parameter with the solve at `eta_star` and the realized
/// residual `delta_star = ||K(u) - g||_H`.
#[derive(Debug, Clone, Serialize)]
pub struct ChosenParameter {
    pub eta_star: f64,
    pub result: TikhonovResult,
    pub realized_residual: f64,
    pub diagnostics: RuleDiagnostics,
}

/// The a priori choice `eta = c_ap * delta`.
pub fn choose_a_priori(delta: f64, c_ap: f64) -> Result<f64> {
    if !(delta > 0.0) || !(c_ap > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "a priori rule needs positive delta and c_ap, got {delta}, {c_ap}"
        )));
    }
    Ok(c_ap * delta)
}

fn sweep_ok<P: ForwardProblem + ?Sized>(
    p: &P,
    c: &ConstraintSet,
    g: &[f64],
    etas: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<TikhonovResult>> {
    let u0 = c.project(&vec![0.0; p.dim_param()])?;
    let sweep = value_function_sweep(p, c, g, etas, &u0, opts)?;
    let ok: Vec<TikhonovResult> = sweep.into_iter().filter_map(|r| r.ok()).collect();
    if ok.is_empty() {
        return Err(Error::AllSolvesFailed);
    }
    Ok(ok)
}

/// Morozov's principle: bisection in log eta for
/// `||K(u_eta) - g|| = c_m * delta`, bracketed on a warm-started sweep.
pub fn choose_discrepancy<P: ForwardProblem + ?Sized>(
    p: &P,
    c: &ConstraintSet,
    g: &[f64],
    delta: f64,
    c_m: f64,
    grid: &EtaGrid,
    opts: &SolverOptions,
) -> Result<ChosenParameter> {
    if c_m < 1.0 {
        return Err(Error::InvalidParameter(format!("c_m must be >= 1, got {c_m}")));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let target = c_m * delta;
    let etas = grid.descending();
    let sweep = sweep_ok(p, c, g, &etas, opts)?;
    let grid_residuals: Vec<f64> = sweep.iter().map(|r| r.residual_norm).collect();

    // residual decreases with eta along the descending sweep; find the first
    // adjacent pair bracketing the target (largest-eta crossing)
    let res_max = sweep.first().unwrap().residual_norm;
    let res_min = sweep.last().unwrap().residual_norm;
    if res_max < target {
        return Err(Error::DiscrepancyBracket {
            side: BracketSide::ResidualBelowTargetAtEtaMax,
            res_min,
            res_max,
            target,
        });
    }
    let cross = sweep
        .windows(2)
        .position(|w| w[0].residual_norm >= target && w[1].residual_norm <= target);
    let Some(i) = cross else {
        return Err(Error::DiscrepancyBracket {
            side: BracketSide::ResidualAboveTargetAtEtaMin,
            res_min,
            res_max,
            target,
        });
    };

    let mut hi = sweep[i].clone(); // residual >= target
    let mut lo = sweep[i + 1].clone(); // residual <= target
    let bracket = (lo.eta, hi.eta);
    let mut best = if (hi.residual_norm - target).abs() < (lo.residual_norm - target).abs() {
        hi.clone()
    } else {
        lo.clone()
    };
    let mut steps = 0;
    while steps < 60 && hi.eta / lo.eta > 1.0 + 1e-3 {
        steps += 1;
        let mid = (lo.eta.ln() + hi.eta.ln()).mul_add(0.5, 0.0).exp();
        // warm start from the nearer bracket end
        let warm = if (mid.ln() - lo.eta.ln()).abs() < (mid.ln() - hi.eta.ln()).abs() {
            lo.u.clone()
        } else {
            hi.u.clone()
        };
        let res = minimize(p, c, mid, g, &warm, opts)?;
        if (res.residual_norm - target).abs() < (best.residual_norm - target).abs() {
            best = res.clone();
        }
        if res.residual_norm >= target {
            hi = res;
        } else {
            lo = res;
        }
    }

    let realized = best.residual_norm;
    Ok(ChosenParameter {
        eta_star: best.eta,
        realized_residual: realized,
        diagnostics: RuleDiagnostics::Discrepancy {
            c_m,
            delta,
            target,
            bracket,
            bisection_steps: steps,
            grid_etas: sweep.iter().map(|r| r.eta).collect(),
            grid_residuals,
        },
        result: best,
    })
}

fn phi(value: f64, eta: f64, gamma: f64) -> f64 {
    value.powf(1.0 + gamma) / eta
}

/// Balancing principle: grid argmin of `F(eta)^{1+gamma}/eta`, then a fixed
/// point refinement of `gamma eta ||u||^2 = residual^2`, accepted only when
/// it does not increase `Phi`.
pub fn choose_balancing<P: ForwardProblem + ?Sized>(
    p: &P,
    c: &ConstraintSet,
    g: &[f64],
    gamma: f64,
    grid: &EtaGrid,
    opts: &SolverOptions,
) -> Result<ChosenParameter> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    let etas = grid.descending();
    let sweep = sweep_ok(p, c, g, &etas, opts)?;
    let grid_phi: Vec<f64> = sweep.iter().map(|r| phi(r.value, r.eta, gamma)).collect();

    // argmin with ties toward smaller eta: scan ascending eta (reverse order)
    let mut best_idx = sweep.len() - 1;
    for i in (0..sweep.len()).rev() {
        if grid_phi[i] < grid_phi[best_idx] {
            best_idx = i;
        }
    }
    let grid_best = sweep[best_idx].clone();
    let grid_argmin_eta = grid_best.eta;

    // fixed-point refinement of the balancing relation
    let mut refined = grid_best.clone();
    let mut accepted_refinement = false;
    let mut fp_iters = 0;
    let mut current = grid_best.clone();
    for _ in 0..30 {
        let unorm2 = 2.0 * current.penalty;
        if unorm2 <= 0.0 {
            break; // fixed point undefined, keep the grid argmin
        }
        let next_eta = grid.clamp(current.residual_norm.powi(2) / (gamma * unorm2));
        fp_iters += 1;
        let rel_change = (next_eta - current.eta).abs() / current.eta;
        if rel_change <= 1e-3 {
            current = minimize(p, c, next_eta, g, &current.u, opts)?;
            break;
        }
        current = minimize(p, c, next_eta, g, &current.u, opts)?;
    }
    if fp_iters > 0 {
        let phi_ref = phi(current.value, current.eta, gamma);
        if phi_ref <= phi(grid_best.value, grid_best.eta, gamma) {
            refined = current;
            accepted_refinement = true;
        }
    }

    let unorm2 = 2.0 * refined.penalty;
    let res2 = refined.residual_norm.powi(2);
    let mismatch = if res2 > 0.0 {
        (gamma * refined.eta * unorm2 - res2).abs() / res2
    } else {
        f64::INFINITY
    };
    let realized = refined.residual_norm;
    Ok(ChosenParameter {
        eta_star: refined.eta,
        realized_residual: realized,
        diagnostics: RuleDiagnostics::Balancing {
            gamma,
            grid_etas: sweep.iter().map(|r| r.eta).collect(),
            grid_phi,
            grid_argmin_eta,
            refined: accepted_refinement,
            fixed_point_iterations: fp_iters,
            balancing_mismatch: mismatch,
        },
        result: refined,
    })
}

/// Hanke-Raus rule: grid argmin of `residual^2 / eta`; zero-residual entries
/// are excluded (the error surrogate degenerates there) and reported.
pub fn choose_hanke_raus<P: ForwardProblem + ?Sized>(
    p: &P,
    c: &ConstraintSet,
    g: &[f64],
    grid: &EtaGrid,
    opts: &SolverOptions,
) -> Result<ChosenParameter> {
    let etas = grid.descending();
    let sweep = sweep_ok(p, c, g, &etas, opts)?;
    let surrogate = |r: &TikhonovResult| r.residual_norm.powi(2) / r.eta;
    let excluded: Vec<f64> =
        sweep.iter().filter(|r| r.residual_norm == 0.0).map(|r| r.eta).collect();
    let usable: Vec<&TikhonovResult> =
        sweep.iter().filter(|r| r.residual_norm > 0.0).collect();
    if usable.is_empty() {
        return Err(Error::AllResidualsZero);
    }
    // ties toward smaller eta: scan ascending eta
    let mut best = usable[usable.len() - 1];
    for r in usable.iter().rev() {
        if surrogate(r) < surrogate(best) {
            best = r;
        }
    }
    Ok(ChosenParameter {
        eta_star: best.eta,
        realized_residual: best.residual_norm,
        diagnostics: RuleDiagnostics::HankeRaus {
            grid_etas: sweep.iter().map(|r| r.eta).collect(),
            grid_surrogates: sweep.iter().map(surrogate).collect(),
            excluded_zero_residual_etas: excluded,
        },
        result: best.clone(),
    })
}
