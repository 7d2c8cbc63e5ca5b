//! Numerical kernels for 1D elliptic two-point boundary-value problems on
//! the unit interval: uniform grid, tridiagonal assembly and solution,
//! discrete H1 quadratic forms.
//!
//! State equations are collocated at the interior nodes of a uniform grid
//! with homogeneous Dirichlet conditions built into the stencils:
//!
//! * potential:     A(u) y = (-y'' + u y) = f, stencil (-1, 2, -1)/h^2 + diag(u)
//! * conductivity:  A(u) y = -(u y')' = f, flux form with midpoint
//!   coefficients u_{i±1/2} = (u_i + u_{i±1})/2

use crate::error::{Error, Result};
use crate::linalg::Dense;

/// Uniform grid with `n` interior nodes on (0, 1); spacing `h = 1/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    h: f64,
}

impl Grid1D {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 3 interior nodes, got {n}"
            )));
        }
        Ok(Self { n, h: 1.0 / (n as f64 + 1.0) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Interior node coordinates `x_i = i h`, `i = 1..=n`.
    pub fn nodes(&self) -> Vec<f64> {
        (1..=self.n).map(|i| i as f64 * self.h).collect()
    }

    /// Samples a function at the interior nodes.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes().into_iter().map(f).collect()
    }
}

/// Tridiagonal matrix stored by bands. `sub` and `sup` have length `n - 1`.
#[derive(Debug, Clone)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub symmetric: bool,
}

impl TridiagonalSystem {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Self {
        assert_eq!(sub.len() + 1, diag.len());
        assert_eq!(sup.len() + 1, diag.len());
        let symmetric = sub
            .iter()
            .zip(&sup)
            .all(|(a, b)| (a - b).abs() <= 1e-15 * (a.abs() + b.abs()).max(1.0));
        Self { sub, diag, sup, symmetric }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![0.0; n - 1], vec![1.0; n], vec![0.0; n - 1])
    }

    /// Diagonal matrix as a degenerate tridiagonal system.
    pub fn diagonal(diag: Vec<f64>) -> Self {
        let n = diag.len();
        Self::new(vec![0.0; n - 1], diag, vec![0.0; n - 1])
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.sub[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.sup[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    /// `A^T x`; for the stored band layout this just swaps sub and sup.
    pub fn matvec_transpose(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(x.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.sup[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.sub[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    /// Componentwise sum of two systems of the same size.
    pub fn add(&self, other: &TridiagonalSystem) -> TridiagonalSystem {
        assert_eq!(self.n(), other.n());
        TridiagonalSystem::new(
            self.sub.iter().zip(&other.sub).map(|(a, b)| a + b).collect(),
            self.diag.iter().zip(&other.diag).map(|(a, b)| a + b).collect(),
            self.sup.iter().zip(&other.sup).map(|(a, b)| a + b).collect(),
        )
    }

    /// LDL^T pivots of a symmetric tridiagonal matrix. All pivots positive
    /// iff the matrix is positive definite.
    pub fn ldl_pivots(&self) -> Vec<f64> {
        let n = self.n();
        let mut d = vec![0.0; n];
        d[0] = self.diag[0];
        for i in 1..n {
            let b = self.sub[i - 1];
            d[i] = if d[i - 1] != 0.0 {
                self.diag[i] - b * b / d[i - 1]
            } else {
                f64::NAN
            };
        }
        d
    }

    pub fn is_positive_definite(&self) -> bool {
        self.symmetric && self.ldl_pivots().iter().all(|&p| p > 0.0)
    }

    pub fn to_dense(&self) -> Dense {
        let n = self.n();
        let mut a = Dense::zeros(n, n);
        for i in 0..n {
            a.set(i, i, self.diag[i]);
            if i > 0 {
                a.set(i, i - 1, self.sub[i - 1]);
            }
            if i + 1 < n {
                a.set(i, i + 1, self.sup[i]);
            }
        }
        a
    }
}

/// Thomas elimination. Returns `x` with `sys * x = rhs`.
pub fn solve_tridiagonal(sys: &TridiagonalSystem, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = sys.n();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: rhs.len() });
    }
    let mut c = vec![0.0; n]; // modified superdiagonal
    let mut d = vec![0.0; n]; // modified rhs
    let mut piv = sys.diag[0];
    if piv == 0.0 || !piv.is_finite() {
        return Err(Error::ZeroPivot { row: 0 });
    }
    c[0] = if n > 1 { sys.sup[0] / piv } else { 0.0 };
    d[0] = rhs[0] / piv;
    for i in 1..n {
        piv = sys.diag[i] - sys.sub[i - 1] * c[i - 1];
        if piv == 0.0 || !piv.is_finite() {
            return Err(Error::ZeroPivot { row: i });
        }
        if i + 1 < n {
            c[i] = sys.sup[i] / piv;
        }
        d[i] = (rhs[i] - sys.sub[i - 1] * d[i - 1]) / piv;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Which elliptic operator to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `A(u) y = -y'' + u y`, requires `u >= 0`.
    Potential,
    /// `A(u) y = -(u y')'`, requires `u > 0`; midpoint coefficients are
    /// arithmetic means of the nodal values, with constant extension of `u`
    /// to the boundary nodes.
    Conductivity,
}

/// Assembles the discrete elliptic operator on the interior nodes.
pub fn assemble_operator(
    grid: &Grid1D,
    u: &[f64],
    kind: OperatorKind,
) -> Result<TridiagonalSystem> {
    let n = grid.n();
    if u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.len() });
    }
    let h2 = grid.h() * grid.h();
    match kind {
        OperatorKind::Potential => {
            if let Some(&bad) = u.iter().find(|&&v| v < 0.0) {
                return Err(Error::EllipticityViolated(format!(
                    "potential must be nonnegative, found {bad}"
                )));
            }
            let sub = vec![-1.0 / h2; n - 1];
            let sup = vec![-1.0 / h2; n - 1];
            let diag = u.iter().map(|&ui| 2.0 / h2 + ui).collect();
            Ok(TridiagonalSystem::new(sub, diag, sup))
        }
        OperatorKind::Conductivity => {
            if let Some(&bad) = u.iter().find(|&&v| v <= 0.0) {
                return Err(Error::EllipticityViolated(format!(
                    "conductivity must be positive, found {bad}"
                )));
            }
            // Midpoint coefficients; u extended by constants at the boundary,
            // so u_{1/2} = u_1 and u_{n+1/2} = u_n.
            let mid = |a: f64, b: f64| 0.5 * (a + b);
            let mut sub = vec![0.0; n - 1];
            let mut diag = vec![0.0; n];
            let mut sup = vec![0.0; n - 1];
            for i in 0..n {
                let left = if i == 0 { u[0] } else { mid(u[i - 1], u[i]) };
                let right = if i + 1 == n { u[n - 1] } else { mid(u[i], u[i + 1]) };
                diag[i] = (left + right) / h2;
                if i > 0 {
                    sub[i - 1] = -left / h2;
                }
                if i + 1 < n {
                    sup[i] = -right / h2;
                }
            }
            Ok(TridiagonalSystem::new(sub, diag, sup))
        }
    }
}

/// Matrix `B(y)` of the bilinear identity `A(u) y = B(y) u` for the
/// conductivity operator; `B(y) du` is the action of the parameter
/// derivative `e_u(u, y) du = -(du y')'` in discrete form.
pub fn conductivity_parameter_matrix(grid: &Grid1D, y: &[f64]) -> TridiagonalSystem {
    let n = grid.n();
    assert_eq!(y.len(), n);
    let h2 = grid.h() * grid.h();
    let mut sub = vec![0.0; n - 1];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n - 1];
    for i in 0..n {
        let y_i = y[i];
        let y_prev = if i == 0 { 0.0 } else { y[i - 1] };
        let y_next = if i + 1 == n { 0.0 } else { y[i + 1] };
        let dl = y_i - y_prev;
        let dr = y_i - y_next;
        if i == 0 {
            // boundary midpoint collapses onto u_1
            diag[i] = (dl + 0.5 * dr) / h2;
        } else if i + 1 == n {
            diag[i] = (0.5 * dl + dr) / h2;
        } else {
            diag[i] = 0.5 * (dl + dr) / h2;
        }
        if i > 0 {
            sub[i - 1] = 0.5 * dl / h2;
        }
        if i + 1 < n {
            sup[i] = 0.5 * dr / h2;
        }
    }
    TridiagonalSystem::new(sub, diag, sup)
}

/// Discrete H1 quadratic forms on the interior nodes: the Dirichlet
/// stiffness realizing the H1_0 seminorm (forward differences with zero
/// boundary values) and the trapezoid mass realizing the L2 norm.
pub fn discrete_h1_norms(grid: &Grid1D) -> (TridiagonalSystem, TridiagonalSystem) {
    let n = grid.n();
    let h = grid.h();
    let stiffness = TridiagonalSystem::new(
        vec![-1.0 / h; n - 1],
        vec![2.0 / h; n],
        vec![-1.0 / h; n - 1],
    );
    let mass = TridiagonalSystem::diagonal(vec![h; n]);
    (stiffness, mass)
}

/// Neumann-type stiffness for functions that do not vanish at the boundary:
/// only interior differences contribute, so constants are in the kernel.
pub fn neumann_stiffness(grid: &Grid1D) -> TridiagonalSystem {
    let n = grid.n();
    let h = grid.h();
    let mut diag = vec![2.0 / h; n];
    diag[0] = 1.0 / h;
    diag[n - 1] = 1.0 / h;
    TridiagonalSystem::new(vec![-1.0 / h; n - 1], diag, vec![-1.0 / h; n - 1])
}
