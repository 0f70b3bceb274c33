//! Central finite differences of defining functions.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::linalg;
use crate::point::{norm, RealPoint};

/// Relative step of the gradient stencil.
pub const GRAD_STEP: f64 = 1e-6;
/// Relative step of the Hessian stencil.
pub const HESS_STEP: f64 = 1e-4;
/// Gradients at or below this norm have no usable normal.
pub const MIN_GRADIENT: f64 = 1e-8;
/// `|rho(p)|` allowed for a point treated as a boundary point.
pub const BOUNDARY_TOL: f64 = 1e-6;

fn scale(p: &[f64]) -> f64 {
    norm(p).max(1.0)
}

fn eval(domain: &DomainSpec, x: &[f64]) -> Result<f64> {
    let v = domain.rho_at(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("rho = {v} in a stencil of `{}`", domain.name)))
    }
}

/// Central-difference gradient of `rho` at `p`.
pub fn gradient(domain: &DomainSpec, p: &RealPoint) -> Result<Vec<f64>> {
    domain.check_dim(p)?;
    gradient_at(domain, p.coords())
}

pub(crate) fn gradient_at(domain: &DomainSpec, p: &[f64]) -> Result<Vec<f64>> {
    let h = GRAD_STEP * scale(p);
    let mut x = p.to_vec();
    let mut g = vec![0.0; p.len()];
    for i in 0..p.len() {
        x[i] = p[i] + h;
        let fp = eval(domain, &x)?;
        x[i] = p[i] - h;
        let fm = eval(domain, &x)?;
        x[i] = p[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    Ok(g)
}

/// Unit outward normal (normalized gradient) and gradient norm.
pub(crate) fn unit_normal_at(domain: &DomainSpec, p: &[f64]) -> Result<(Vec<f64>, f64)> {
    let g = gradient_at(domain, p)?;
    let gn = norm(&g);
    if !(gn > MIN_GRADIENT) {
        return Err(Error::DegenerateGradient(gn));
    }
    Ok((g.iter().map(|x| x / gn).collect(), gn))
}

/// Raw (unnormalized) symmetrized Hessian of `rho` at `p`.
pub fn hessian(domain: &DomainSpec, p: &RealPoint) -> Result<DMatrix<f64>> {
    domain.check_dim(p)?;
    hessian_at(domain, p.coords())
}

pub(crate) fn hessian_at(domain: &DomainSpec, p: &[f64]) -> Result<DMatrix<f64>> {
    let d = p.len();
    let h = HESS_STEP * scale(p);
    let f0 = eval(domain, p)?;
    let mut x = p.to_vec();
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        x[i] = p[i] + h;
        let fp = eval(domain, &x)?;
        x[i] = p[i] - h;
        let fm = eval(domain, &x)?;
        x[i] = p[i];
        m[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
        for j in (i + 1)..d {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                x[i] = p[i] + si * h;
                x[j] = p[j] + sj * h;
                let v = eval(domain, &x);
                x[i] = p[i];
                x[j] = p[j];
                v
            };
            let v = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?)
                / (4.0 * h * h);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(linalg::symmetrize(&m))
}

/// Unit normal and curvature data of `rho` at a boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct HessianData {
    pub point: RealPoint,
    pub unit_gradient: Vec<f64>,
    pub gradient_norm: f64,
    /// Hessian of `rho / |grad rho(p)|`.
    #[serde(serialize_with = "serialize_matrix")]
    pub hessian: DMatrix<f64>,
}

impl HessianData {
    /// Hessian of `rho` itself.
    pub fn raw_hessian(&self) -> DMatrix<f64> {
        &self.hessian * self.gradient_norm
    }

    /// Normalized Hessian restricted to the real tangent space, in the
    /// Householder frame of [`linalg::tangent_basis`].
    pub fn tangential_hessian(&self) -> DMatrix<f64> {
        let basis = linalg::tangent_basis(&self.unit_gradient);
        linalg::restrict(&self.hessian, &basis)
    }

    /// Ascending eigenvalues of [`Self::tangential_hessian`].
    pub fn tangential_eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::symmetric_eigenvalues(&self.tangential_hessian())
    }
}

pub(crate) fn serialize_matrix<S: serde::Serializer>(m: &DMatrix<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        let row: Vec<f64> = (0..m.ncols()).map(|j| m[(i, j)]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Normalized Hessian data at a boundary point `p`.
pub fn hessian_at_boundary(domain: &DomainSpec, p: &RealPoint) -> Result<HessianData> {
    domain.check_dim(p)?;
    let r = domain.rho(p);
    if !(r.abs() < BOUNDARY_TOL) {
        return Err(Error::NotOnBoundary(r.abs()));
    }
    let (unit_gradient, gradient_norm) = unit_normal_at(domain, p.coords())?;
    let raw = hessian_at(domain, p.coords())?;
    Ok(HessianData { point: p.clone(), unit_gradient, gradient_norm, hessian: raw / gradient_norm })
}
