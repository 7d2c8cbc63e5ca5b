//! Weighted inner products on coefficient vectors.
//!
//! An [`InnerProduct`] holds a symmetric positive definite weight `W` and
//! evaluates `<a, b>_W = a^T W b`. Scaled identities cover the scalar and
//! L2 (trapezoid mass) cases; tridiagonal weights realize the discrete H1
//! and H1_0 forms of the PDE problems.

use crate::error::{Error, Result};
use crate::pde1d::{solve_tridiagonal, TridiagonalSystem};

#[derive(Debug, Clone)]
enum Weight {
    /// `W = s * I`
    Scaled { n: usize, s: f64 },
    Tridiagonal(TridiagonalSystem),
}

#[derive(Debug, Clone)]
pub struct InnerProduct {
    weight: Weight,
}

impl InnerProduct {
    /// Euclidean inner product on `n` components.
    pub fn euclidean(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    /// `W = s * I` with `s > 0`.
    pub fn scaled_identity(n: usize, s: f64) -> Self {
        assert!(s > 0.0, "weight scale must be positive");
        Self { weight: Weight::Scaled { n, s } }
    }

    /// Symmetric positive definite tridiagonal weight.
    pub fn tridiagonal(w: TridiagonalSystem) -> Result<Self> {
        if !w.symmetric {
            return Err(Error::InvalidParameter("weight must be symmetric".into()));
        }
        if !w.is_positive_definite() {
            return Err(Error::InvalidParameter("weight must be positive definite".into()));
        }
        Ok(Self { weight: Weight::Tridiagonal(w) })
    }

    pub fn dim(&self) -> usize {
        match &self.weight {
            Weight::Scaled { n, .. } => *n,
            Weight::Tridiagonal(w) => w.n(),
        }
    }

    /// `W a`
    pub fn apply(&self, a: &[f64]) -> Vec<f64> {
        match &self.weight {
            Weight::Scaled { s, .. } => a.iter().map(|x| s * x).collect(),
            Weight::Tridiagonal(w) => w.matvec(a),
        }
    }

    /// `W^{-1} b`
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        match &self.weight {
            Weight::Scaled { s, .. } => b.iter().map(|x| x / s).collect(),
            Weight::Tridiagonal(w) => {
                solve_tridiagonal(w, b).expect("SPD weight cannot have a zero pivot")
            }
        }
    }

    /// `<a, b>_W`
    pub fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        assert_eq!(a.len(), self.dim());
        assert_eq!(b.len(), self.dim());
        match &self.weight {
            Weight::Scaled { s, .. } => s * crate::linalg::dot(a, b),
            Weight::Tridiagonal(w) => crate::linalg::dot(a, &w.matvec(b)),
        }
    }

    /// `||a||_W`; tiny negative round-off under the square root is clamped.
    pub fn norm(&self, a: &[f64]) -> f64 {
        self.dot(a, a).max(0.0).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde1d::{discrete_h1_norms, Grid1D};
    use proptest::prelude::*;

    fn h1_product() -> InnerProduct {
        let grid = Grid1D::new(9).unwrap();
        let (stiff, mass) = discrete_h1_norms(&grid);
        InnerProduct::tridiagonal(stiff.add(&mass)).unwrap()
    }

    #[test]
    fn rejects_indefinite_weight() {
        let w = TridiagonalSystem::diagonal(vec![1.0, -1.0, 1.0]);
        assert!(InnerProduct::tridiagonal(w).is_err());
    }

    #[test]
    fn solve_inverts_apply() {
        let ip = h1_product();
        let a: Vec<f64> = (0..9).map(|i| (i as f64 * 0.7).sin()).collect();
        let b = ip.solve(&ip.apply(&a));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn symmetry_and_positivity(vals in proptest::collection::vec(-5.0f64..5.0, 18)) {
            let ip = h1_product();
            let (a, b) = vals.split_at(9);
            let d1 = ip.dot(a, b);
            let d2 = ip.dot(b, a);
            prop_assert!((d1 - d2).abs() <= 1e-12 * (d1.abs().max(1.0)));
            if a.iter().any(|&x| x != 0.0) {
                prop_assert!(ip.dot(a, a) > 0.0);
            }
        }
    }
}
