//! Componentwise box constraints: projection, feasibility, and the sign
//! pattern of admissible Lagrange multipliers.
//!
//! For a box, the variational inequality `<mu, v - u> >= 0` for all feasible
//! `v` pins the multiplier componentwise: `mu_i >= 0` where the lower bound
//! is active, `mu_i <= 0` where the upper bound is active, and `mu_i = 0` on
//! inactive components. The pairing here is the plain dot product, i.e.
//! multipliers are represented in dual coordinates.

use crate::error::{Error, Result};

/// Box constraints with `-inf`/`+inf` allowed as bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSet {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Per-component sign constraint for an admissible multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierSign {
    /// Inactive component: multiplier must vanish.
    Zero,
    /// Active lower bound: multiplier must be nonnegative.
    NonNegative,
    /// Active upper bound: multiplier must be nonpositive.
    NonPositive,
    /// Lower and upper bound coincide: multiplier unconstrained.
    Free,
}

impl ConstraintSet {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch { expected: lower.len(), got: upper.len() });
        }
        if let Some(i) = (0..lower.len()).find(|&i| !(lower[i] <= upper[i])) {
            return Err(Error::InvalidParameter(format!(
                "lower bound {} exceeds upper bound {} at component {i}",
                lower[i], upper[i]
            )));
        }
        Ok(Self { lower, upper })
    }

    /// Unconstrained set of dimension `n`.
    pub fn unbounded(n: usize) -> Self {
        Self { lower: vec![f64::NEG_INFINITY; n], upper: vec![f64::INFINITY; n] }
    }

    /// Same scalar bounds on every component.
    pub fn uniform(n: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; n], vec![upper; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Componentwise clamp into the box.
    pub fn project(&self, u: &[f64]) -> Result<Vec<f64>> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        Ok(u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&lo, &hi))| v.max(lo).min(hi))
            .collect())
    }

    pub fn is_feasible(&self, u: &[f64]) -> bool {
        u.len() == self.dim()
            && u.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&lo, &hi))| v >= lo && v <= hi)
    }

    pub fn require_feasible(&self, u: &[f64]) -> Result<()> {
        if self.is_feasible(u) {
            Ok(())
        } else {
            Err(Error::Infeasible(format!(
                "point leaves the box (dim {}, first violation at {:?})",
                self.dim(),
                u.iter()
                    .zip(self.lower.iter().zip(&self.upper))
                    .position(|(&v, (&lo, &hi))| v < lo || v > hi)
            )))
        }
    }

    /// Sign pattern of admissible multipliers at a feasible point. Active
    /// bounds are detected by exact equality: projected points sit exactly
    /// on the bound.
    pub fn multiplier_sign_pattern(&self, u: &[f64]) -> Result<Vec<MultiplierSign>> {
        self.require_feasible(u)?;
        Ok(u.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(&v, (&lo, &hi))| match (v == lo, v == hi) {
                (true, true) => MultiplierSign::Free,
                (true, false) => MultiplierSign::NonNegative,
                (false, true) => MultiplierSign::NonPositive,
                (false, false) => MultiplierSign::Zero,
            })
            .collect())
    }
}

/// Clamps a candidate multiplier onto a sign pattern componentwise.
pub fn clamp_to_pattern(candidate: &[f64], pattern: &[MultiplierSign]) -> Vec<f64> {
    candidate
        .iter()
        .zip(pattern)
        .map(|(&m, p)| match p {
            MultiplierSign::Zero => 0.0,
            MultiplierSign::NonNegative => m.max(0.0),
            MultiplierSign::NonPositive => m.min(0.0),
            MultiplierSign::Free => m,
        })
        .collect()
}

/// Checks a multiplier against a sign pattern.
pub fn satisfies_pattern(mu: &[f64], pattern: &[MultiplierSign]) -> bool {
    mu.iter().zip(pattern).all(|(&m, p)| match p {
        MultiplierSign::Zero => m == 0.0,
        MultiplierSign::NonNegative => m >= 0.0,
        MultiplierSign::NonPositive => m <= 0.0,
        MultiplierSign::Free => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn clamps_into_box() {
        let c = ConstraintSet::uniform(3, 0.0, 1.0).unwrap();
        assert_eq!(c.project(&[-0.5, 0.5, 2.0]).unwrap(), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn feasible_points_are_fixed() {
        let c = ConstraintSet::uniform(3, 0.0, 1.0).unwrap();
        let u = vec![0.0, 0.3, 1.0];
        assert_eq!(c.project(&u).unwrap(), u);
    }

    #[test]
    fn lower_bound_from_box_problem() {
        let c = ConstraintSet::new(vec![0.1], vec![10.0]).unwrap();
        assert_eq!(c.project(&[0.05]).unwrap(), vec![0.1]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let c = ConstraintSet::uniform(3, 0.0, 1.0).unwrap();
        assert!(c.project(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn interior_point_forces_zero_multiplier() {
        let c = ConstraintSet::uniform(4, 0.0, 1.0).unwrap();
        let p = c.multiplier_sign_pattern(&[0.2, 0.5, 0.7, 0.9]).unwrap();
        assert!(p.iter().all(|s| *s == MultiplierSign::Zero));
    }

    #[test]
    fn all_lower_active_allows_nonnegative() {
        let c = ConstraintSet::uniform(4, 0.25, 1.0).unwrap();
        let p = c.multiplier_sign_pattern(&[0.25; 4]).unwrap();
        assert!(p.iter().all(|s| *s == MultiplierSign::NonNegative));
    }

    #[test]
    fn infeasible_point_is_rejected() {
        let c = ConstraintSet::uniform(2, 0.0, 1.0).unwrap();
        assert!(c.multiplier_sign_pattern(&[-0.1, 0.5]).is_err());
    }

    #[test]
    fn pattern_multipliers_are_admissible_on_random_feasible_points() {
        // mixed active set; any mu obeying the pattern must satisfy
        // <mu, v - u> >= 0 over feasible v.
        let c = ConstraintSet::new(vec![0.0, 0.0, -1.0, 0.5], vec![1.0, 0.0, 2.0, 2.0]).unwrap();
        let u = vec![0.0, 0.0, 2.0, 1.2];
        let pattern = c.multiplier_sign_pattern(&u).unwrap();
        assert_eq!(
            pattern,
            vec![
                MultiplierSign::NonNegative,
                MultiplierSign::Free,
                MultiplierSign::NonPositive,
                MultiplierSign::Zero
            ]
        );
        let mu = clamp_to_pattern(&[0.7, -3.0, -0.4, 5.0], &pattern);
        assert!(satisfies_pattern(&mu, &pattern));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let v: Vec<f64> = c
                .lower()
                .iter()
                .zip(c.upper())
                .map(|(&lo, &hi)| {
                    let lo = lo.max(-10.0);
                    let hi = hi.min(10.0);
                    rng.random_range(lo..=hi)
                })
                .collect();
            let pairing: f64 = mu.iter().zip(v.iter().zip(&u)).map(|(m, (a, b))| m * (a - b)).sum();
            assert!(pairing >= -1e-12, "pairing {pairing} for v {v:?}");
        }
    }

    proptest! {
        #[test]
        fn projection_is_idempotent_and_nonexpansive(
            a in proptest::collection::vec(-10.0f64..10.0, 6),
            b in proptest::collection::vec(-10.0f64..10.0, 6),
        ) {
            let c = ConstraintSet::new(
                vec![-1.0, 0.0, f64::NEG_INFINITY, 2.0, -0.5, 0.0],
                vec![1.0, 0.0, 4.0, f64::INFINITY, 0.5, 10.0],
            ).unwrap();
            let pa = c.project(&a).unwrap();
            let pb = c.project(&b).unwrap();
            prop_assert_eq!(c.project(&pa).unwrap(), pa.clone());
            let d_orig = crate::linalg::norm2(&crate::linalg::sub(&a, &b));
            let d_proj = crate::linalg::norm2(&crate::linalg::sub(&pa, &pb));
            prop_assert!(d_proj <= d_orig + 1e-12);
        }
    }
}
