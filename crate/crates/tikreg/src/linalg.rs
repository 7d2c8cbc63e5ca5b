//! Small dense linear-algebra kernels.
//!
//! Everything here operates on flat row-major buffers. The problems in this
//! crate are desk scale (n up to a few hundred), so an unblocked Cholesky and
//! plain triple loops are all that is needed.

use crate::error::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    data: Vec<f64>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![0.0; self.cols];
        for i in 0..self.rows {
            let r = self.row(i);
            let xi = x[i];
            for (o, a) in out.iter_mut().zip(r) {
                *o += a * xi;
            }
        }
        out
    }
}

/// In-place lower Cholesky factorization of a symmetric positive definite
/// matrix. Only the lower triangle of the input is read.
pub fn cholesky_in_place(a: &mut Dense) -> Result<()> {
    let n = a.rows;
    assert_eq!(n, a.cols);
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            let l = a.get(j, k);
            d -= l * l;
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let d = d.sqrt();
        a.set(j, j, d);
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= a.get(i, k) * a.get(j, k);
            }
            a.set(i, j, s / d);
        }
    }
    Ok(())
}

/// Solves `L L^T x = b` given the Cholesky factor from [`cholesky_in_place`].
pub fn cholesky_solve(chol: &Dense, b: &[f64]) -> Vec<f64> {
    let n = chol.rows;
    assert_eq!(b.len(), n);
    let mut x = b.to_vec();
    for i in 0..n {
        let mut s = x[i];
        for k in 0..i {
            s -= chol.get(i, k) * x[k];
        }
        x[i] = s / chol.get(i, i);
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in (i + 1)..n {
            s -= chol.get(k, i) * x[k];
        }
        x[i] = s / chol.get(i, i);
    }
    x
}

/// One-shot SPD solve; consumes the matrix.
pub fn solve_spd(mut a: Dense, b: &[f64]) -> Result<Vec<f64>> {
    cholesky_in_place(&mut a)?;
    Ok(cholesky_solve(&a, b))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `a - b` componentwise.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + s * b` componentwise.
pub fn axpy(a: &[f64], s: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + s * y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_solves_spd_system() {
        // A = M^T M + I with a fixed M is SPD.
        let n = 6;
        let mut m = Dense::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, ((i * 7 + j * 3) % 11) as f64 / 11.0);
            }
        }
        let mut a = Dense::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut s = if i == j { 1.0 } else { 0.0 };
                for k in 0..n {
                    s += m.get(k, i) * m.get(k, j);
                }
                a.set(i, j, s);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64) - 2.5).collect();
        let b = a.matvec(&x_true);
        let x = solve_spd(a, &b).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-12, "{xi} vs {ti}");
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut a = Dense::zeros(2, 2);
        a.set(0, 0, 1.0);
        a.set(1, 1, -1.0);
        assert!(cholesky_in_place(&mut a).is_err());
    }
}
