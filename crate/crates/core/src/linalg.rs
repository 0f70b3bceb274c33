//! Small dense symmetric linear algebra: cyclic Jacobi eigenvalues and
//! Householder tangent frames.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Inputs whose asymmetry exceeds this are rejected.
pub const SYMMETRY_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;

fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Average `m` with its transpose.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi sweeps.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    let asym = max_asymmetry(m);
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let n = m.nrows();
    let mut a = symmetrize(m);
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Ok(vec![0.0; n]);
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    Ok(ev)
}

/// Largest eigenvalue of a symmetric matrix.
pub fn max_eigenvalue_symmetric(m: &DMatrix<f64>) -> Result<f64> {
    symmetric_eigenvalues(m).and_then(|ev| ev.last().copied().ok_or(Error::EmptySamples))
}

/// Orthonormal basis (as columns) of the orthogonal complement of a unit vector.
///
/// Built from the Householder reflection that maps `e_0` to `±normal`; its
/// remaining columns span the complement.
pub fn tangent_basis(normal: &[f64]) -> DMatrix<f64> {
    let d = normal.len();
    let sign = if normal[0] >= 0.0 { 1.0 } else { -1.0 };
    let mut v: Vec<f64> = normal.to_vec();
    v[0] += sign;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let mut basis = DMatrix::zeros(d, d - 1);
    for col in 1..d {
        for row in 0..d {
            let e = if row == col { 1.0 } else { 0.0 };
            basis[(row, col - 1)] = e - 2.0 * v[row] * v[col] / vv;
        }
    }
    basis
}

/// `B^T H B` for a symmetric `H` and a column basis `B`.
pub fn restrict(h: &DMatrix<f64>, basis: &DMatrix<f64>) -> DMatrix<f64> {
    symmetrize(&(basis.transpose() * h * basis))
}

/// Solve the square system `a x = b`; `None` when `a` is singular.
pub fn solve(a: &DMatrix<f64>, b: &[f64]) -> Option<Vec<f64>> {
    let rhs = nalgebra::DVector::from_column_slice(b);
    a.clone().lu().solve(&rhs).map(|x| x.iter().copied().collect())
}
