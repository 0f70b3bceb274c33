//! Concrete domains and the explicit maps attached to them.
//!
//! Every constructor returns an immutable [`DomainSpec`]. Domains can also be
//! addressed by string identifiers through [`DomainId`].

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::domain::{BoundingBox, DomainSpec, ExactModel, ExcludedSet};
use crate::error::{Error, Result};
use crate::point::RealPoint;
use crate::rng::SplitMix64;
use crate::squeeze;

fn abs2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// Unit ball of C^n scaled to `radius`.
pub fn ball_radius(n: usize, radius: f64) -> Result<DomainSpec> {
    if n == 0 || !(radius > 0.0) {
        return Err(Error::BadParams(format!("ball needs n >= 1 and radius > 0, got n = {n}, radius = {radius}")));
    }
    let r2 = radius * radius;
    let model = if radius == 1.0 { ExactModel::Ball } else { ExactModel::ScaledBall(radius) };
    Ok(DomainSpec::new(format!("ball:n={n}:r={radius}"), n, move |x| abs2(x) - r2, BoundingBox::cube(2 * n, radius))?
        .with_model(model))
}

pub fn ball(n: usize) -> Result<DomainSpec> {
    let mut d = ball_radius(n, 1.0)?;
    d.name = format!("ball:n={n}");
    Ok(d)
}

pub fn disc() -> DomainSpec {
    DomainSpec::new("disc", 1, |x| abs2(x) - 1.0, BoundingBox::cube(2, 1.0))
        .expect("static")
        .with_model(ExactModel::Disc)
}

/// `{0 < |z| < c}`; the origin is the excluded set.
pub fn scaled_punctured_disc(c: f64) -> Result<DomainSpec> {
    if !(c > 0.0) {
        return Err(Error::BadParams(format!("punctured disc radius must be positive, got {c}")));
    }
    let c2 = c * c;
    let model = if c == 1.0 { ExactModel::PuncturedDisc } else { ExactModel::ScaledPuncturedDisc(c) };
    let name = if c == 1.0 { "punctured-disc".to_string() } else { format!("punctured-disc:c={c}") };
    Ok(DomainSpec::new(name, 1, move |x| abs2(x) - c2, BoundingBox::cube(2, c))?
        .with_excluded(ExcludedSet {
            description: "origin".into(),
            distance: Arc::new(|x| abs2(x).sqrt()),
            representative: Some(Arc::new(|_| Some(RealPoint::origin(1)))),
        })
        .with_model(model))
}

pub fn punctured_disc() -> DomainSpec {
    scaled_punctured_disc(1.0).expect("static")
}

pub fn bidisc() -> DomainSpec {
    DomainSpec::new("bidisc", 2, |x| abs2(&x[..2]).max(abs2(&x[2..])) - 1.0, BoundingBox::cube(4, 1.0))
        .expect("static")
}

/// `sum x_i^2 / a_i^2 < 1` over the 2n real semiaxes `a`.
pub fn ellipsoid(semiaxes: &[f64]) -> Result<DomainSpec> {
    if semiaxes.is_empty() || !semiaxes.len().is_multiple_of(2) || semiaxes.iter().any(|a| !(*a > 0.0)) {
        return Err(Error::BadParams("ellipsoid needs an even number of positive semiaxes".into()));
    }
    let inv: Vec<f64> = semiaxes.iter().map(|a| 1.0 / (a * a)).collect();
    let bbox = BoundingBox::new(semiaxes.iter().map(|a| -a).collect(), semiaxes.to_vec())?;
    let name = format!(
        "ellipsoid:a={}",
        semiaxes.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
    );
    DomainSpec::new(name, semiaxes.len() / 2, move |x| x.iter().zip(&inv).map(|(v, w)| v * v * w).sum::<f64>() - 1.0, bbox)
}

/// Thullen domain `{|z1|^{2k} + |z2|^2 < 1}` with the defining function
/// `|z1|^2 / (1 - |z2|^2)^{1/k} - 1`.
pub fn thullen_domain(k: f64) -> Result<DomainSpec> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::OutOfRange(format!("Thullen exponent k must lie in (0, 1), got {k}")));
    }
    let inv_k = 1.0 / k;
    DomainSpec::new(
        format!("thullen:k={k}"),
        2,
        move |x| {
            let w = 1.0 - abs2(&x[2..]);
            if w <= 0.0 {
                1.0
            } else {
                abs2(&x[..2]) / w.powf(inv_k) - 1.0
            }
        },
        BoundingBox::cube(4, 1.0),
    )
}

/// Classical bounded symmetric domain underlying a Cartan-Hartogs domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseType {
    /// `r x s` matrices with `r <= s`.
    I { r: usize, s: usize },
    /// Symmetric `p x p` matrices.
    II { p: usize },
    /// Skew-symmetric `q x q` matrices, `q >= 2`.
    III { q: usize },
    /// The Lie ball of C^n.
    IV { n: usize },
}

impl BaseType {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            BaseType::I { r, s } => r >= 1 && r <= s,
            BaseType::II { p } => p >= 1,
            BaseType::III { q } => q >= 2,
            BaseType::IV { n } => n >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadParams(format!("invalid base domain {self:?}")))
        }
    }

    /// Complex dimension of the base domain.
    pub fn dim(&self) -> usize {
        match *self {
            BaseType::I { r, s } => r * s,
            BaseType::II { p } => p * (p + 1) / 2,
            BaseType::III { q } => q * (q - 1) / 2,
            BaseType::IV { n } => n,
        }
    }

    /// Matrix order used by the generic norm.
    fn order(&self) -> usize {
        match *self {
            BaseType::I { r, .. } => r,
            BaseType::II { p } => p,
            BaseType::III { q } => q,
            BaseType::IV { .. } => 1,
        }
    }

    /// Free entries `(row, col)` in row-major order.
    fn free_entries(&self) -> Vec<(usize, usize)> {
        match *self {
            BaseType::I { r, s } => (0..r).flat_map(|j| (0..s).map(move |k| (j, k))).collect(),
            BaseType::II { p } => (0..p).flat_map(|j| (j..p).map(move |k| (j, k))).collect(),
            BaseType::III { q } => (0..q).flat_map(|j| (j + 1..q).map(move |k| (j, k))).collect(),
            BaseType::IV { n } => (0..n).map(|k| (0, k)).collect(),
        }
    }

    /// Matrix `Z` from free complex coordinates. Off-diagonal entries of the
    /// symmetric and skew types are `zeta / sqrt 2`, and type IV uses
    /// `z = zeta / sqrt 2`, so that the coordinates are orthonormal for the
    /// trace form and `N(Z, Z) = 1 - |zeta|^2 + O(|zeta|^4)` for every type.
    pub fn matrix_from_coords(&self, zeta: &[Complex64]) -> Result<DMatrix<Complex64>> {
        if zeta.len() != self.dim() {
            return Err(Error::ShapeMismatch(format!("{self:?} has {} free coordinates, got {}", self.dim(), zeta.len())));
        }
        let (rows, cols) = match *self {
            BaseType::I { r, s } => (r, s),
            BaseType::II { p } => (p, p),
            BaseType::III { q } => (q, q),
            BaseType::IV { n } => (1, n),
        };
        let mut z = DMatrix::<Complex64>::zeros(rows, cols);
        for (&(j, k), &c) in self.free_entries().iter().zip(zeta) {
            match *self {
                BaseType::I { .. } => z[(j, k)] = c,
                BaseType::II { .. } if j == k => z[(j, k)] = c,
                BaseType::II { .. } => {
                    z[(j, k)] = c * FRAC_1_SQRT_2;
                    z[(k, j)] = c * FRAC_1_SQRT_2;
                }
                BaseType::III { .. } => {
                    z[(j, k)] = c * FRAC_1_SQRT_2;
                    z[(k, j)] = -c * FRAC_1_SQRT_2;
                }
                BaseType::IV { .. } => z[(j, k)] = c * FRAC_1_SQRT_2,
            }
        }
        Ok(z)
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BaseType::I { r, s } => write!(f, "I:{r},{s}"),
            BaseType::II { p } => write!(f, "II:{p}"),
            BaseType::III { q } => write!(f, "III:{q}"),
            BaseType::IV { n } => write!(f, "IV:{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CartanHartogsParams {
    pub base: BaseType,
    pub k: f64,
    /// Fiber dimension.
    pub m: usize,
}

impl CartanHartogsParams {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.k > 0.0 && self.k.is_finite()) || self.m == 0 {
            return Err(Error::BadParams(format!("Cartan-Hartogs needs k > 0 and m >= 1, got k = {}, m = {}", self.k, self.m)));
        }
        Ok(())
    }

    /// Complex dimension `dim(base) + m`.
    pub fn n(&self) -> usize {
        self.base.dim() + self.m
    }
}

const SYMMETRY_TOL: f64 = 1e-10;

/// Generic norm `N(Z, Z)` of the base domain.
///
/// Types I-III take the matrix `Z` (symmetric for II, skew for III) and
/// return `det(I - Z Z*)`; type IV takes a `1 x n` or `n x 1` matrix and
/// returns `1 + |Z Z^t|^2 - 2 Z Z*`.
pub fn generic_norm(base: BaseType, z: &DMatrix<Complex64>) -> Result<f64> {
    base.validate()?;
    let (rows, cols) = z.shape();
    let expected = match base {
        BaseType::I { r, s } => rows == r && cols == s,
        BaseType::II { p } => rows == p && cols == p,
        BaseType::III { q } => rows == q && cols == q,
        BaseType::IV { n } => (rows == 1 && cols == n) || (rows == n && cols == 1),
    };
    if !expected {
        return Err(Error::ShapeMismatch(format!("{rows}x{cols} matrix for base {base}")));
    }
    match base {
        BaseType::II { .. } => {
            let asym = (z - z.transpose()).iter().map(|c| c.norm()).fold(0.0, f64::max);
            if asym > SYMMETRY_TOL {
                return Err(Error::SymmetryViolation(format!("|Z - Z^t| = {asym:e}")));
            }
        }
        BaseType::III { .. } => {
            let asym = (z + z.transpose()).iter().map(|c| c.norm()).fold(0.0, f64::max);
            if asym > SYMMETRY_TOL {
                return Err(Error::SymmetryViolation(format!("|Z + Z^t| = {asym:e}")));
            }
        }
        _ => {}
    }
    Ok(match base {
        BaseType::IV { .. } => type_iv_norm(z.iter().copied()),
        _ => {
            let m = DMatrix::<Complex64>::identity(rows, rows) - z * z.adjoint();
            m.determinant().re
        }
    })
}

fn type_iv_norm(z: impl Iterator<Item = Complex64>) -> f64 {
    let mut q = Complex64::new(0.0, 0.0);
    let mut h = 0.0;
    for c in z {
        q += c * c;
        h += c.norm_sqr();
    }
    1.0 + q.norm_sqr() - 2.0 * h
}

/// Determinant of a Hermitian matrix via Cholesky; `None` unless it is
/// positive definite.
fn hermitian_cholesky_det(a: &DMatrix<Complex64>) -> Option<f64> {
    let n = a.nrows();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    let mut det = 1.0;
    for i in 0..n {
        let mut d = a[(i, i)].re;
        for k in 0..i {
            d -= l[(i, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let lii = d.sqrt();
        det *= d;
        l[(i, i)] = Complex64::new(lii, 0.0);
        for j in i + 1..n {
            let mut v = a[(j, i)];
            for k in 0..i {
                v -= l[(j, k)] * l[(i, k)].conj();
            }
            l[(j, i)] = v / lii;
        }
    }
    Some(det)
}

/// `N(Z, Z)` when `Z` lies in the base domain, `None` otherwise.
fn norm_inside(base: BaseType, zeta: &[Complex64]) -> Option<f64> {
    let z = base.matrix_from_coords(zeta).ok()?;
    match base {
        BaseType::IV { .. } => {
            let mut q = Complex64::new(0.0, 0.0);
            for c in z.iter() {
                q += c * c;
            }
            let n = type_iv_norm(z.iter().copied());
            (n > 0.0 && q.norm() < 1.0).then_some(n)
        }
        _ => {
            let r = base.order();
            let m = DMatrix::<Complex64>::identity(r, r) - &z * z.adjoint();
            let det = hermitian_cholesky_det(&m)?;
            (det > 0.0).then_some(det)
        }
    }
}

/// Cartan-Hartogs domain `{(Z, W) : |W|^2 < N(Z, Z)^k}` with defining
/// function `X = |W|^2 / N(Z, Z)^k - 1` over the base domain (and `1` off it).
///
/// Coordinates are the free entries of `Z` (see
/// [`BaseType::matrix_from_coords`]) followed by `W`.
pub fn cartan_hartogs_domain(params: CartanHartogsParams) -> Result<DomainSpec> {
    params.validate()?;
    let base = params.base;
    let nz = base.dim();
    let k = params.k;
    let n = params.n();
    let zbound = match base {
        BaseType::I { .. } => 1.0,
        _ => SQRT_2,
    };
    let mut lo = vec![-zbound; 2 * nz];
    lo.extend(vec![-1.0; 2 * params.m]);
    let hi: Vec<f64> = lo.iter().map(|v| -v).collect();
    let rho = move |x: &[f64]| -> f64 {
        let zeta: Vec<Complex64> = (0..nz).map(|j| Complex64::new(x[2 * j], x[2 * j + 1])).collect();
        match norm_inside(base, &zeta) {
            Some(nv) => abs2(&x[2 * nz..]) / nv.powf(k) - 1.0,
            None => 1.0,
        }
    };
    DomainSpec::new(
        format!("cartan-hartogs:{}:k={}:m={}", base, params.k, params.m),
        n,
        rho,
        BoundingBox::new(lo, hi)?,
    )
}

/// The point `(0, ..., 0, 1)`.
pub fn cartan_hartogs_pole(params: &CartanHartogsParams) -> RealPoint {
    let mut c = vec![0.0; 2 * params.n()];
    let last = c.len() - 2;
    c[last] = 1.0;
    RealPoint::from_vec_unchecked(c)
}

/// Squeezing constant of the base domain.
pub fn s_omega_constant(base: BaseType) -> Result<f64> {
    base.validate()?;
    Ok(match base {
        BaseType::I { r, .. } => 1.0 / (r as f64).sqrt(),
        BaseType::II { p } => 1.0 / (p as f64).sqrt(),
        BaseType::III { q } => 1.0 / ((q / 2) as f64).sqrt(),
        BaseType::IV { .. } => FRAC_1_SQRT_2,
    })
}

/// Limit of the squeezing function of the Cartan-Hartogs domain as `k -> 0`,
/// `(s_Omega^{-2} + 1)^{-1/2}`.
pub fn cartan_hartogs_k_limit(base: BaseType) -> Result<f64> {
    squeeze::product_lower_bound(&[s_omega_constant(base)?, 1.0])
}

/// `log^2 |z1|^2 + log^2 |z2|^2 - 1`, with the coordinate axes removed.
pub fn reinhardt_domain() -> DomainSpec {
    let h = 0.5f64.exp();
    DomainSpec::new(
        "reinhardt",
        2,
        |x| {
            let a = abs2(&x[..2]).ln();
            let b = abs2(&x[2..]).ln();
            a * a + b * b - 1.0
        },
        BoundingBox::cube(4, h),
    )
    .expect("static")
    .with_excluded(axes_excluded(|x| (x[2], x[3])))
}

fn axes_excluded(second: impl Fn(&[f64]) -> (f64, f64) + Send + Sync + 'static) -> ExcludedSet {
    ExcludedSet {
        description: "coordinate axes".into(),
        distance: Arc::new(move |x| {
            let (u, v) = second(x);
            abs2(&x[..2]).sqrt().min((u * u + v * v).sqrt())
        }),
        representative: None,
    }
}

/// `f_eps(z1) = eps (z1 + 1/z1 - 2)`.
pub fn shear(eps: f64, z1: Complex64) -> Complex64 {
    eps * (z1 + z1.inv() - 2.0)
}

/// Image of [`reinhardt_domain`] under `(z1, z2) -> (z1, z2 + f_eps(z1))`.
pub fn reinhardt_sheared(eps: f64) -> Result<DomainSpec> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::BadParams(format!("shear parameter must be positive, got {eps}")));
    }
    let h = 0.5f64.exp();
    let inner = move |x: &[f64]| -> (f64, f64) {
        let f = shear(eps, Complex64::new(x[0], x[1]));
        (x[2] - f.re, x[3] - f.im)
    };
    let margin = 6.0 * eps;
    let bbox = BoundingBox::new(vec![-h, -h, -h - margin, -h - margin], vec![h, h, h + margin, h + margin])?;
    Ok(DomainSpec::new(
        format!("reinhardt-sheared:eps={eps}"),
        2,
        move |x| {
            let r1 = abs2(&x[..2]);
            if r1 == 0.0 {
                return f64::INFINITY;
            }
            let (u, v) = inner(x);
            let a = r1.ln();
            let b = (u * u + v * v).ln();
            a * a + b * b - 1.0
        },
        bbox,
    )?
    .with_excluded(axes_excluded(inner)))
}

/// Result of [`reinhardt_support_scan`].
#[derive(Debug, Clone, Serialize)]
pub struct SupportScanReport {
    pub eps: f64,
    pub grid: usize,
    pub max: f64,
    pub argmax_r1: f64,
    pub argmax_theta1: f64,
    /// Grid points within `1e-12` of the maximum.
    pub argmax_count: usize,
    pub unique_argmax_at_origin: bool,
    /// Largest increase of `g` along a step in `r1`; positive values break
    /// the monotonicity in `r1`.
    pub max_r1_increase: f64,
    pub monotone_in_r1: bool,
    /// `g(0, theta)` and `g(1, theta)` at `theta = 0, pi/2, pi, 3pi/2`.
    pub edge_r1_zero: Vec<f64>,
    pub edge_r1_one: Vec<f64>,
    pub passed: bool,
}

/// `g(r1, theta1) = eps ((e^{r1/2} + e^{-r1/2}) cos(theta1) - 2) + e^{sqrt(1 - r1^2)/2}`.
pub fn support_function(eps: f64, r1: f64, theta1: f64) -> f64 {
    eps * (((0.5 * r1).exp() + (-0.5 * r1).exp()) * theta1.cos() - 2.0) + (0.5 * (1.0 - r1 * r1).max(0.0).sqrt()).exp()
}

/// Grid maximization of the support function over `[0, 1] x [0, 2 pi)`.
pub fn reinhardt_support_scan(eps: f64, grid: usize) -> Result<SupportScanReport> {
    if grid < 100 {
        return Err(Error::BadParams(format!("support scan grid must be at least 100 per axis, got {grid}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::BadParams(format!("shear parameter must be positive, got {eps}")));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let r_at = |i: usize| i as f64 / (grid - 1) as f64;
    let t_at = |j: usize| tau * j as f64 / grid as f64;
    let mut max = f64::NEG_INFINITY;
    let mut arg = (0, 0);
    let mut max_inc = f64::NEG_INFINITY;
    let mut values = vec![0.0; grid * grid];
    for j in 0..grid {
        let t = t_at(j);
        for i in 0..grid {
            let g = support_function(eps, r_at(i), t);
            values[j * grid + i] = g;
            if g > max {
                max = g;
                arg = (i, j);
            }
            if i > 0 {
                max_inc = max_inc.max(g - values[j * grid + i - 1]);
            }
        }
    }
    let argmax_count = values.iter().filter(|v| **v >= max - 1e-12).count();
    let unique_argmax_at_origin = arg == (0, 0) && argmax_count == 1;
    let monotone_in_r1 = max_inc <= 0.0;
    let quarter = [0.0, 0.25 * tau, 0.5 * tau, 0.75 * tau];
    let passed = (max - 0.5f64.exp()).abs() < 1e-6 && unique_argmax_at_origin && monotone_in_r1;
    Ok(SupportScanReport {
        eps,
        grid,
        max,
        argmax_r1: r_at(arg.0),
        argmax_theta1: t_at(arg.1),
        argmax_count,
        unique_argmax_at_origin,
        max_r1_increase: max_inc,
        monotone_in_r1,
        edge_r1_zero: quarter.iter().map(|&t| support_function(eps, 0.0, t)).collect(),
        edge_r1_one: quarter.iter().map(|&t| support_function(eps, 1.0, t)).collect(),
        passed,
    })
}

/// Hartogs triangle `{0 < |z2| < |z1| < 1}`.
pub fn hartogs_triangle() -> DomainSpec {
    DomainSpec::new(
        "hartogs-triangle",
        2,
        |x| {
            let a = abs2(&x[..2]).sqrt();
            let b = abs2(&x[2..]).sqrt();
            (b - a).max(a - 1.0)
        },
        BoundingBox::cube(4, 1.0),
    )
    .expect("static")
    .with_excluded(ExcludedSet {
        description: "z2 = 0".into(),
        distance: Arc::new(|x| abs2(&x[2..]).sqrt()),
        representative: Some(Arc::new(|rng: &mut SplitMix64| {
            let r = rng.next_f64().sqrt();
            let t = rng.uniform(0.0, 2.0 * std::f64::consts::PI);
            Some(RealPoint::from_vec_unchecked(vec![r * t.cos(), r * t.sin(), 0.0, 0.0]))
        })),
    })
}

fn in_triangle(z: &RealPoint) -> bool {
    let a = z.z(0).norm();
    let b = z.z(1).norm();
    z.n() == 2 && 0.0 < b && b < a && a < 1.0
}

/// `(z1, z2) -> (z1, z2 / z1)`, a biholomorphism onto the product of two
/// punctured discs.
pub fn triangle_to_product(z: &RealPoint) -> Result<RealPoint> {
    if !in_triangle(z) {
        return Err(Error::OutsideDomain);
    }
    let (z1, z2) = (z.z(0), z.z(1));
    RealPoint::from_complex(&[z1, z2 / z1])
}

/// Inverse of [`triangle_to_product`], `(w1, w2) -> (w1, w1 w2)`.
pub fn product_to_triangle(w: &RealPoint) -> Result<RealPoint> {
    let ok = w.n() == 2 && (0..2).all(|j| {
        let r = w.z(j).norm();
        r > 0.0 && r < 1.0
    });
    if !ok {
        return Err(Error::OutsideDomain);
    }
    let (w1, w2) = (w.z(0), w.z(1));
    RealPoint::from_complex(&[w1, w1 * w2])
}

/// Parsed catalog identifier.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainId {
    Ball { n: usize, radius: f64 },
    Disc,
    PuncturedDisc { c: f64 },
    Bidisc,
    Ellipsoid { semiaxes: Vec<f64> },
    Thullen { k: f64 },
    CartanHartogs(CartanHartogsParams),
    Reinhardt,
    ReinhardtSheared { eps: f64 },
    HartogsTriangle,
}

/// Default shear parameter.
pub const DEFAULT_SHEAR: f64 = 0.01;

/// One line of the catalog listing.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub pattern: &'static str,
    pub example: &'static str,
    pub description: &'static str,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    let e = |pattern, example, description| CatalogEntry { pattern, example, description };
    vec![
        e("ball[:n=N][:r=R]", "ball:n=2", "ball of radius R in C^N"),
        e("disc", "disc", "unit disc"),
        e("punctured-disc[:c=C]", "punctured-disc", "punctured disc 0 < |z| < C"),
        e("bidisc", "bidisc", "unit bidisc"),
        e("ellipsoid:a=A1,...,A2N", "ellipsoid:a=1,1.3,0.8,1.1", "real ellipsoid with the given semiaxes"),
        e("thullen:k=K", "thullen:k=0.5", "Thullen domain |z1|^(2K) + |z2|^2 < 1, 0 < K < 1"),
        e(
            "cartan-hartogs:TYPE:SIZE:k=K:m=M",
            "cartan-hartogs:I:1,2:k=0.5:m=1",
            "Cartan-Hartogs domain over I:r,s | II:p | III:q | IV:n",
        ),
        e("reinhardt", "reinhardt", "log^2|z1|^2 + log^2|z2|^2 < 1"),
        e("reinhardt-sheared[:eps=E]", "reinhardt-sheared:eps=0.01", "sheared image of the Reinhardt domain"),
        e("hartogs-triangle", "hartogs-triangle", "0 < |z2| < |z1| < 1"),
    ]
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::BadParams(format!("`{key}` expects a number, got `{v}`")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse::<usize>().map_err(|_| Error::BadParams(format!("`{key}` expects a positive integer, got `{v}`")))
}

/// `key=value` options after the head of an identifier.
fn options<'a>(parts: &[&'a str], allowed: &[&str]) -> Result<Vec<(&'a str, &'a str)>> {
    parts
        .iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::BadParams(format!("expected key=value, got `{p}`")))?;
            if !allowed.contains(&k) {
                return Err(Error::BadParams(format!("unknown option `{k}`; allowed: {}", allowed.join(", "))));
            }
            Ok((k, v))
        })
        .collect()
}

impl FromStr for DomainId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let head = parts[0];
        let rest = &parts[1..];
        let id = match head {
            "ball" => {
                let (mut n, mut radius) = (2, 1.0);
                for (k, v) in options(rest, &["n", "r"])? {
                    match k {
                        "n" => n = parse_usize(k, v)?,
                        _ => radius = parse_f64(k, v)?,
                    }
                }
                DomainId::Ball { n, radius }
            }
            "disc" if rest.is_empty() => DomainId::Disc,
            "bidisc" if rest.is_empty() => DomainId::Bidisc,
            "reinhardt" if rest.is_empty() => DomainId::Reinhardt,
            "hartogs-triangle" if rest.is_empty() => DomainId::HartogsTriangle,
            "punctured-disc" => {
                let mut c = 1.0;
                for (k, v) in options(rest, &["c"])? {
                    c = parse_f64(k, v)?;
                }
                DomainId::PuncturedDisc { c }
            }
            "ellipsoid" => {
                let opts = options(rest, &["a"])?;
                let (_, v) = opts.first().ok_or_else(|| Error::BadParams("ellipsoid needs a=A1,...".into()))?;
                let semiaxes = v.split(',').map(|x| parse_f64("a", x)).collect::<Result<_>>()?;
                DomainId::Ellipsoid { semiaxes }
            }
            "thullen" => {
                let opts = options(rest, &["k"])?;
                let (k, v) = opts.first().ok_or_else(|| Error::BadParams("thullen needs k=K".into()))?;
                DomainId::Thullen { k: parse_f64(k, v)? }
            }
            "reinhardt-sheared" => {
                let mut eps = DEFAULT_SHEAR;
                for (k, v) in options(rest, &["eps"])? {
                    eps = parse_f64(k, v)?;
                }
                DomainId::ReinhardtSheared { eps }
            }
            "cartan-hartogs" => {
                if rest.len() < 2 {
                    return Err(Error::BadParams("cartan-hartogs needs TYPE:SIZE, e.g. cartan-hartogs:I:1,2:k=0.5:m=1".into()));
                }
                let sizes: Vec<usize> = rest[1].split(',').map(|x| parse_usize("size", x)).collect::<Result<_>>()?;
                let base = match (rest[0], sizes.as_slice()) {
                    ("I", [r, s]) => BaseType::I { r: *r, s: *s },
                    ("II", [p]) => BaseType::II { p: *p },
                    ("III", [q]) => BaseType::III { q: *q },
                    ("IV", [n]) => BaseType::IV { n: *n },
                    _ => return Err(Error::BadParams(format!("bad base `{}:{}`; use I:r,s | II:p | III:q | IV:n", rest[0], rest[1]))),
                };
                let (mut k, mut m) = (0.5, 1);
                for (key, v) in options(&rest[2..], &["k", "m"])? {
                    match key {
                        "k" => k = parse_f64(key, v)?,
                        _ => m = parse_usize(key, v)?,
                    }
                }
                let p = CartanHartogsParams { base, k, m };
                p.validate()?;
                DomainId::CartanHartogs(p)
            }
            _ => return Err(Error::UnknownDomain(s.to_string())),
        };
        Ok(id)
    }
}

impl DomainId {
    pub fn build(&self) -> Result<DomainSpec> {
        match self {
            DomainId::Ball { n, radius } if *radius == 1.0 => ball(*n),
            DomainId::Ball { n, radius } => ball_radius(*n, *radius),
            DomainId::Disc => Ok(disc()),
            DomainId::PuncturedDisc { c } => scaled_punctured_disc(*c),
            DomainId::Bidisc => Ok(bidisc()),
            DomainId::Ellipsoid { semiaxes } => ellipsoid(semiaxes),
            DomainId::Thullen { k } => thullen_domain(*k),
            DomainId::CartanHartogs(p) => cartan_hartogs_domain(*p),
            DomainId::Reinhardt => Ok(reinhardt_domain()),
            DomainId::ReinhardtSheared { eps } => reinhardt_sheared(*eps),
            DomainId::HartogsTriangle => Ok(hartogs_triangle()),
        }
    }

    /// A smooth boundary point singled out for this domain.
    pub fn reference_point(&self) -> Option<RealPoint> {
        let h = 0.5f64.exp();
        let c = match self {
            DomainId::Ball { n, radius } => {
                let mut c = vec![0.0; 2 * n];
                c[0] = *radius;
                c
            }
            DomainId::Disc => vec![1.0, 0.0],
            DomainId::PuncturedDisc { c } => vec![*c, 0.0],
            DomainId::Bidisc | DomainId::Thullen { .. } => vec![1.0, 0.0, 0.0, 0.0],
            DomainId::Ellipsoid { semiaxes } => {
                let mut c = vec![0.0; semiaxes.len()];
                c[0] = semiaxes[0];
                c
            }
            DomainId::CartanHartogs(p) => return Some(cartan_hartogs_pole(p)),
            DomainId::Reinhardt | DomainId::ReinhardtSheared { .. } => vec![1.0, 0.0, h, 0.0],
            DomainId::HartogsTriangle => vec![1.0, 0.0, 0.5, 0.0],
        };
        Some(RealPoint::from_vec_unchecked(c))
    }
}

/// Parse and build a domain from its identifier.
pub fn parse_domain(id: &str) -> Result<DomainSpec> {
    id.parse::<DomainId>()?.build()
}
