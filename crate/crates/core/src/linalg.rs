//! Dense symmetric matrices, a cyclic Jacobi eigensolver and PSD testing.
//!
//! Everything here works on small dense matrices (order up to a few hundred).
//! Symmetry is exact by construction: every write goes to both triangles.

use std::fmt;

use thiserror::Error;

/// Default absolute tolerance on eigenvalues for PSD decisions.
pub const DEFAULT_PSD_TOL: f64 = 1e-9;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Relative off-diagonal Frobenius norm at which the Jacobi iteration stops.
pub const JACOBI_REL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix order must be at least {min}, got {order}")]
    OrderTooSmall { order: usize, min: usize },
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
}

/// A real symmetric matrix stored densely in row-major order.
#[derive(Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.set(i, i, 1.0);
        }
        m
    }

    /// The all-ones matrix `J`.
    pub fn ones(order: usize) -> Self {
        Self {
            order,
            data: vec![1.0; order * order],
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Builds a matrix from the lower triangle of `f(i, j)` with `j <= i`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from row-major data, mirroring the lower triangle.
    ///
    /// The upper triangle of `rows` is ignored.
    pub fn from_lower_rows(rows: &[Vec<f64>]) -> Self {
        Self::from_fn(rows.len(), |i, j| rows[i][j])
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    /// Writes `value` at `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let n = self.order;
        self.data[i * n + j] = value;
        self.data[j * n + i] = value;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, delta: f64) {
        let v = self.get(i, j) + delta;
        self.set(i, j, v);
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `self * alpha + other * beta`.
    pub fn linear_combination(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self, LinalgError> {
        if other.order != self.order {
            return Err(LinalgError::DimensionMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        Ok(Self {
            order: self.order,
            data,
        })
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            order: self.order,
            data: self.data.iter().map(|v| v * alpha).collect(),
        }
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>, LinalgError> {
        self.check_dim(v.len())?;
        Ok((0..self.order)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn check_dim(&self, len: usize) -> Result<(), LinalgError> {
        if len != self.order {
            Err(LinalgError::DimensionMismatch {
                expected: self.order,
                found: len,
            })
        } else {
            Ok(())
        }
    }
}

impl fmt::Debug for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymmetricMatrix({})", self.order)?;
        for i in 0..self.order {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

impl EigenResult {
    pub fn min(&self) -> (f64, &[f64]) {
        (self.eigenvalues[0], &self.eigenvectors[0])
    }

    pub fn max(&self) -> (f64, &[f64]) {
        let k = self.eigenvalues.len() - 1;
        (self.eigenvalues[k], &self.eigenvectors[k])
    }
}

/// Full symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Iterates until the off-diagonal Frobenius norm drops below
/// `tol * ‖M‖_F`, or fails after [`MAX_SWEEPS`] sweeps.
pub fn eigen_all(m: &SymmetricMatrix, tol: f64) -> Result<EigenResult, LinalgError> {
    let n = m.order();
    if n == 0 {
        return Err(LinalgError::OrderTooSmall { order: 0, min: 1 });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(LinalgError::InvalidTolerance(tol));
    }

    let mut a = m.data.clone();
    // v is stored row-major; column k is the k-th eigenvector.
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let threshold = tol * m.frobenius_norm();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(LinalgError::NoConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let eigenvalues = order.iter().map(|&k| a[k * n + k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
        .collect();

    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        sweeps,
    })
}

/// Outcome of a PSD test. A failing test carries the eigenvector of the
/// smallest eigenvalue, which satisfies `wᵗMw < 0`.
#[derive(Debug, Clone)]
pub struct PsdVerdict {
    pub psd: bool,
    pub min_eigenvalue: f64,
    pub witness: Option<Vec<f64>>,
}

/// Decides `M ⪰ 0` up to `tol`: true iff the smallest eigenvalue is `>= -tol`.
pub fn is_psd(m: &SymmetricMatrix, tol: f64) -> Result<PsdVerdict, LinalgError> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(LinalgError::InvalidTolerance(tol));
    }
    let eig = eigen_all(m, JACOBI_REL_TOL)?;
    let (lambda, w) = eig.min();
    let psd = lambda >= -tol;
    Ok(PsdVerdict {
        psd,
        min_eigenvalue: lambda,
        witness: (!psd).then(|| w.to_vec()),
    })
}

/// `xᵗMx`, summed row by row in index order.
pub fn quadratic_form(m: &SymmetricMatrix, x: &[f64]) -> Result<f64, LinalgError> {
    m.check_dim(x.len())?;
    let mut total = 0.0;
    for (i, xi) in x.iter().enumerate() {
        let row: f64 = m.row(i).iter().zip(x).map(|(a, xj)| a * xj).sum();
        total += xi * row;
    }
    Ok(total)
}

/// `P M P` with `P = I − J/n`, the compression of `M` onto the hyperplane
/// orthogonal to the all-ones vector.
pub fn hyperplane_compression(m: &SymmetricMatrix) -> Result<SymmetricMatrix, LinalgError> {
    let n = m.order();
    if n < 2 {
        return Err(LinalgError::OrderTooSmall { order: n, min: 2 });
    }
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| m.row(i).iter().sum::<f64>() / nf).collect();
    let grand_mean = row_means.iter().sum::<f64>() / nf;
    // (PMP)_ij = M_ij − r_i − r_j + g, with r the row means and g the grand mean.
    Ok(SymmetricMatrix::from_fn(n, |i, j| {
        m.get(i, j) - row_means[i] - row_means[j] + grand_mean
    }))
}

/// Projects `x` onto the hyperplane `Σx = 0`.
pub fn project_to_hyperplane(x: &[f64]) -> Vec<f64> {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| v - mean).collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn normalized(x: &[f64]) -> Vec<f64> {
    let len = norm(x);
    if len == 0.0 {
        x.to_vec()
    } else {
        x.iter().map(|v| v / len).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn path3_adjacency() -> SymmetricMatrix {
        let mut m = SymmetricMatrix::zeros(3);
        m.set(0, 1, 1.0);
        m.set(1, 2, 1.0);
        m
    }

    #[test]
    fn identity_spectrum() {
        let eig = eigen_all(&SymmetricMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn ones_spectrum() {
        let eig = eigen_all(&SymmetricMatrix::ones(4), 1e-12).unwrap();
        for (got, want) in eig.eigenvalues.iter().zip([0.0, 0.0, 0.0, 4.0]) {
            assert!(close(*got, want, 1e-12), "{:?}", eig.eigenvalues);
        }
    }

    #[test]
    fn path3_spectrum() {
        // characteristic polynomial λ³ − 2λ
        let eig = eigen_all(&path3_adjacency(), 1e-12).unwrap();
        let s = 2f64.sqrt();
        for (got, want) in eig.eigenvalues.iter().zip([-s, 0.0, s]) {
            assert!(close(*got, want, 1e-12));
        }
    }

    #[test]
    fn empty_order_rejected() {
        assert!(matches!(
            eigen_all(&SymmetricMatrix::zeros(0), 1e-12),
            Err(LinalgError::OrderTooSmall { .. })
        ));
        assert!(matches!(
            eigen_all(&SymmetricMatrix::identity(2), 0.0),
            Err(LinalgError::InvalidTolerance(_))
        ));
    }

    #[test]
    fn psd_examples() {
        assert!(is_psd(&SymmetricMatrix::zeros(3), 1e-9).unwrap().psd);

        let v = is_psd(&SymmetricMatrix::from_diagonal(&[1.0, -1.0]), 1e-9).unwrap();
        assert!(!v.psd);
        let w = v.witness.unwrap();
        assert!(close(w[0], 0.0, 1e-15) && close(w[1].abs(), 1.0, 1e-15));

        // (1/2)J − adjacency(K_2) has eigenvalues 1 and 0
        let mut k2 = SymmetricMatrix::zeros(2);
        k2.set(0, 1, 1.0);
        let m = SymmetricMatrix::ones(2).linear_combination(0.5, &k2, -1.0).unwrap();
        let v = is_psd(&m, 1e-9).unwrap();
        assert!(v.psd);
        assert!(close(v.min_eigenvalue, 0.0, 1e-15));
    }

    #[test]
    fn quadratic_form_examples() {
        let mut k2 = SymmetricMatrix::zeros(2);
        k2.set(0, 1, 1.0);
        assert_eq!(quadratic_form(&k2, &[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(quadratic_form(&SymmetricMatrix::ones(3), &[1.0, 1.0, 1.0]).unwrap(), 9.0);

        // Laplacian of P_3
        let lap = SymmetricMatrix::from_lower_rows(&[
            vec![1.0],
            vec![-1.0, 2.0],
            vec![0.0, -1.0, 1.0],
        ]);
        assert_eq!(quadratic_form(&lap, &[1.0, 0.0, -1.0]).unwrap(), 2.0);

        assert!(matches!(
            quadratic_form(&lap, &[1.0]),
            Err(LinalgError::DimensionMismatch { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn compression_examples() {
        let c = hyperplane_compression(&SymmetricMatrix::ones(4)).unwrap();
        assert!(c.frobenius_norm() < 1e-15);

        // two disjoint edges: x = (1,1,−1,−1) gives 4 > 0 on the hyperplane
        let mut m = SymmetricMatrix::zeros(4);
        m.set(0, 1, 1.0);
        m.set(2, 3, 1.0);
        let c = hyperplane_compression(&m).unwrap();
        let x = [1.0, 1.0, -1.0, -1.0];
        assert_eq!(quadratic_form(&m, &x).unwrap(), 4.0);
        assert!(close(quadratic_form(&c, &x).unwrap(), 4.0, 1e-12));
        assert!(eigen_all(&c, 1e-12).unwrap().max().0 > 1.0);

        // K_2 is NSD on the hyperplane
        let mut k2 = SymmetricMatrix::zeros(2);
        k2.set(0, 1, 1.0);
        let c = hyperplane_compression(&k2).unwrap();
        assert!(eigen_all(&c, 1e-12).unwrap().max().0 <= 1e-12);
        assert!(close(quadratic_form(&k2, &[3.0, -3.0]).unwrap(), -18.0, 0.0));

        assert!(hyperplane_compression(&SymmetricMatrix::zeros(1)).is_err());
    }

    #[test]
    fn eigenpairs_satisfy_residual_bound() {
        let m = SymmetricMatrix::from_fn(6, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let eig = eigen_all(&m, 1e-12).unwrap();
        let scale = m.frobenius_norm();
        for (lambda, v) in eig.eigenvalues.iter().zip(&eig.eigenvectors) {
            let mv = m.mul_vec(v).unwrap();
            let r: f64 = mv.iter().zip(v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
            assert!(r <= 1e-10 * scale);
        }
        for (i, a) in eig.eigenvectors.iter().enumerate() {
            for (j, b) in eig.eigenvectors.iter().enumerate() {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!(close(dot, want, 1e-12));
            }
        }
    }
}
