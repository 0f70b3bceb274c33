//! Enclosing radius `e_D(p)`, ball pinching radius, and ring scans of the
//! pinching function around a boundary point.

use serde::{Serialize, Serializer};

use crate::diff::{self, BOUNDARY_TOL};
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::point::{distance, dot, norm, RealPoint};
use crate::sampling;

/// Radius of the smallest ball through `p` containing the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnclosingRadius {
    Finite(f64),
    Infinite,
}

impl EnclosingRadius {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn value(&self) -> f64 {
        match *self {
            Self::Finite(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for EnclosingRadius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            Self::Finite(v) => s.serialize_f64(v),
            Self::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Tuning of [`enclosing_radius_with`].
#[derive(Debug, Clone, Serialize)]
pub struct EnclosingOptions {
    /// Best samples used as starting points of the boundary ascent.
    pub refine_candidates: usize,
    /// Ascent iterations per candidate; 0 disables refinement.
    pub refine_iterations: usize,
    /// Include the near-`p` limit `1/lambda_min` of the containment ratio.
    pub local_limit: bool,
    /// Tangential curvatures at or below this leave no enclosing ball.
    pub curvature_floor: f64,
    /// Samples with `<p - z, nu>` at or below this reach past the tangent plane.
    pub tangency_tol: f64,
    /// Ratios above `ratio_cap * scale` are treated as unbounded.
    pub ratio_cap: f64,
}

impl Default for EnclosingOptions {
    fn default() -> Self {
        Self {
            refine_candidates: 8,
            refine_iterations: 50,
            local_limit: true,
            curvature_floor: 1e-7,
            tangency_tol: 1e-12,
            ratio_cap: 1e6,
        }
    }
}

/// `(|z - p|^2 / (2 d), d)` with `d = <p - z, nu>`.
fn containment_ratio(p: &[f64], nu: &[f64], z: &[f64]) -> (f64, f64) {
    let mut d = 0.0;
    let mut r2 = 0.0;
    for i in 0..p.len() {
        let v = z[i] - p[i];
        d -= v * nu[i];
        r2 += v * v;
    }
    (r2 / (2.0 * d), d)
}

fn ratio_gradient(p: &[f64], nu: &[f64], z: &[f64]) -> Vec<f64> {
    let (_, d) = containment_ratio(p, nu, z);
    let r2: f64 = z.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
    (0..p.len()).map(|i| (z[i] - p[i]) / d + r2 / (2.0 * d * d) * nu[i]).collect()
}

enum Ascent {
    Value(f64),
    Unbounded,
}

struct Frame<'a> {
    domain: &'a DomainSpec,
    p: &'a [f64],
    nu: &'a [f64],
    scale: f64,
    opts: &'a EnclosingOptions,
}

impl Frame<'_> {
    /// Classifies a boundary point: `Some(Unbounded)` if it certifies that no
    /// ball through `p` contains the domain, `Some(Value)` if its ratio is
    /// trustworthy, `None` if it is too close to the tangent plane near `p`
    /// for the boundary tolerance.
    fn judge(&self, q: &[f64]) -> Option<Ascent> {
        let (r, d) = containment_ratio(self.p, self.nu, q);
        let far = distance(q, self.p) > 1e-3 * self.scale;
        if far && (d <= self.opts.tangency_tol * self.scale || r > self.opts.ratio_cap * self.scale) {
            return Some(Ascent::Unbounded);
        }
        (d > 1e-5 * self.scale).then_some(Ascent::Value(r))
    }

    fn ascend(&self, start: &[f64]) -> Ascent {
        let (r0, _) = containment_ratio(self.p, self.nu, start);
        let mut best = r0;
        let g = ratio_gradient(self.p, self.nu, start);
        let gn = norm(&g);
        if !(gn > 0.0) {
            return Ascent::Value(best);
        }
        let dir: Vec<f64> = g.iter().map(|v| v / gn).collect();
        let Some(mut q) = sampling::project_to_boundary(self.domain, start, &dir, 2.0 * self.scale) else {
            return Ascent::Value(best);
        };
        let mut current = match self.judge(&q) {
            Some(Ascent::Unbounded) => return Ascent::Unbounded,
            Some(Ascent::Value(r)) => r,
            None => return Ascent::Value(best),
        };
        best = best.max(current);
        let mut step = 0.1 * self.scale;
        for _ in 0..self.opts.refine_iterations {
            let Ok((n_q, _)) = diff::unit_normal_at(self.domain, &q) else { break };
            let mut g = ratio_gradient(self.p, self.nu, &q);
            let gn_q = dot(&g, &n_q);
            for (gi, ni) in g.iter_mut().zip(&n_q) {
                *gi -= gn_q * ni;
            }
            let gt = norm(&g);
            if !(gt > 1e-14) {
                break;
            }
            let trial: Vec<f64> = q.iter().zip(&g).map(|(a, v)| a + step * v / gt).collect();
            let moved = sampling::project_to_boundary(self.domain, &trial, &n_q, 4.0 * step)
                .and_then(|q2| self.judge(&q2).map(|j| (q2, j)));
            match moved {
                Some((_, Ascent::Unbounded)) => return Ascent::Unbounded,
                Some((q2, Ascent::Value(r))) if r > current => {
                    q = q2;
                    current = r;
                    best = best.max(r);
                    step = (1.5 * step).min(self.scale);
                }
                _ => {
                    step *= 0.5;
                    if step < 1e-10 * self.scale {
                        break;
                    }
                }
            }
        }
        Ascent::Value(best)
    }
}

/// `e_D(p)` estimated as the supremum of `|z - p|^2 / (2 <p - z, nu>)` over
/// interior samples, boundary ascent from the best samples, and the near-`p`
/// limit `1 / lambda_min`.
///
/// The result is a lower bound on the true enclosing radius, up to the
/// boundary tolerance.
pub fn enclosing_radius(domain: &DomainSpec, p: &RealPoint, interior_samples: &[RealPoint]) -> Result<EnclosingRadius> {
    enclosing_radius_with(domain, p, interior_samples, &EnclosingOptions::default())
}

pub fn enclosing_radius_with(
    domain: &DomainSpec,
    p: &RealPoint,
    interior_samples: &[RealPoint],
    opts: &EnclosingOptions,
) -> Result<EnclosingRadius> {
    domain.check_dim(p)?;
    let (nu, _) = diff::unit_normal_at(domain, p.coords())?;
    let lambda_min = if opts.local_limit {
        let hd = diff::hessian_at_boundary(domain, p)?;
        Some(hd.tangential_eigenvalues()?[0])
    } else {
        None
    };
    enclosing_core(domain, p.coords(), &nu, lambda_min, interior_samples, opts, Strategy::default())
}

fn enclosing_core(
    domain: &DomainSpec,
    p: &[f64],
    nu: &[f64],
    lambda_min: Option<f64>,
    samples: &[RealPoint],
    opts: &EnclosingOptions,
    strategy: Strategy,
) -> Result<EnclosingRadius> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if let Some(lm) = lambda_min {
        if lm <= opts.curvature_floor {
            return Ok(EnclosingRadius::Infinite);
        }
    }
    let mut ratios = Vec::with_capacity(samples.len());
    let mut scale: f64 = 0.0;
    for (i, z) in samples.iter().enumerate() {
        if z.dim_real() != p.len() {
            return Err(Error::ShapeMismatch("interior sample dimension".into()));
        }
        let (r, d) = containment_ratio(p, nu, z.coords());
        if d <= opts.tangency_tol {
            return Ok(EnclosingRadius::Infinite);
        }
        scale = scale.max(distance(z.coords(), p));
        ratios.push((r, i));
    }
    let mut best = ratios.iter().map(|r| r.0).fold(0.0, f64::max);
    if let Some(lm) = lambda_min {
        best = best.max(1.0 / lm);
    }
    if opts.refine_iterations > 0 && opts.refine_candidates > 0 {
        ratios.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let starts: Vec<usize> = ratios.iter().take(opts.refine_candidates).map(|r| r.1).collect();
        let frame = Frame { domain, p, nu, scale, opts };
        let results = exec::map_slice(strategy, &starts, |&i| frame.ascend(samples[i].coords()));
        for res in results {
            match res {
                Ascent::Unbounded => return Ok(EnclosingRadius::Infinite),
                Ascent::Value(v) => best = best.max(v),
            }
        }
    }
    Ok(EnclosingRadius::Finite(best))
}

/// Ball pinching data at a boundary point.
#[derive(Debug, Clone, Serialize)]
pub struct PinchResult {
    pub point: RealPoint,
    pub enclosing_radius: EnclosingRadius,
    /// Largest tangential eigenvalue of the normalized Hessian.
    pub lambda: f64,
    /// Smallest tangential eigenvalue of the normalized Hessian.
    pub lambda_min: f64,
    /// `1 / lambda`, absent when `lambda` is not positive.
    pub inner_radius: Option<f64>,
    pub pinching: f64,
    pub gsc: bool,
    pub tangential_eigenvalues: Vec<f64>,
}

/// Curvatures at or below this give no inscribed tangent ball.
pub const FLAT_LAMBDA: f64 = 1e-12;

/// `B_D(p) = (1 / lambda) / e_D(p)`.
pub fn pinching_radius(domain: &DomainSpec, p: &RealPoint, interior_samples: &[RealPoint]) -> Result<PinchResult> {
    pinching_radius_with(domain, p, interior_samples, &EnclosingOptions::default(), Strategy::default())
}

pub fn pinching_radius_with(
    domain: &DomainSpec,
    p: &RealPoint,
    interior_samples: &[RealPoint],
    opts: &EnclosingOptions,
    strategy: Strategy,
) -> Result<PinchResult> {
    let hd = diff::hessian_at_boundary(domain, p)?;
    let eig = hd.tangential_eigenvalues()?;
    let lambda = *eig.last().expect("tangent space of a 2n >= 2 dimensional domain");
    let lambda_min = eig[0];
    let e = enclosing_core(
        domain,
        p.coords(),
        &hd.unit_gradient,
        opts.local_limit.then_some(lambda_min),
        interior_samples,
        opts,
        strategy,
    )?;
    let inner_radius = (lambda > FLAT_LAMBDA).then(|| 1.0 / lambda);
    let pinching = match (inner_radius, e) {
        (Some(ir), EnclosingRadius::Finite(ev)) => (ir / ev).clamp(0.0, 1.0),
        _ => 0.0,
    };
    Ok(PinchResult {
        point: p.clone(),
        enclosing_radius: e,
        lambda,
        lambda_min,
        inner_radius,
        pinching,
        gsc: pinching > 0.0,
        tangential_eigenvalues: eig,
    })
}

/// Best pinching over explicit biholomorphic images of a domain. Only a lower
/// bound on the intrinsic pinching radius.
#[derive(Debug, Clone, Serialize)]
pub struct IntrinsicLowerBound {
    pub value: f64,
    pub best_image: Option<String>,
    pub label: &'static str,
}

/// Each entry is an image domain, the image of the base point, and interior
/// samples of the image.
pub fn intrinsic_pinching_lower_bound(images: &[(&DomainSpec, RealPoint, Vec<RealPoint>)]) -> Result<IntrinsicLowerBound> {
    let mut value = 0.0;
    let mut best_image = None;
    for (d, p, samples) in images {
        let r = pinching_radius(d, p, samples)?;
        if r.pinching > value || best_image.is_none() {
            value = r.pinching.max(value);
            best_image = Some(d.name.clone());
        }
    }
    Ok(IntrinsicLowerBound { value, best_image, label: "lower bound" })
}

/// One radius of a [`semicontinuity_scan`].
#[derive(Debug, Clone, Serialize)]
pub struct RingResult {
    pub radius: f64,
    pub samples: usize,
    pub min_pinching: f64,
    pub max_pinching: f64,
    pub argmin: RealPoint,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemicontinuityReport {
    pub base: RealPoint,
    pub base_pinching: f64,
    pub tolerance: f64,
    pub rings: Vec<RingResult>,
    /// Minimum over the smallest ring.
    pub liminf_estimate: f64,
    pub passed: bool,
    pub all_rings_passed: bool,
}

/// Settings of [`semicontinuity_scan`].
#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub samples_per_ring: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub strategy: Strategy,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { samples_per_ring: 64, tolerance: 0.05, seed: 42, strategy: Strategy::default() }
    }
}

/// Minimum pinching over boundary points within each radius of `base`.
pub fn semicontinuity_scan(
    domain: &DomainSpec,
    base: &RealPoint,
    radii: &[f64],
    interior_samples: &[RealPoint],
    opts: &ScanOptions,
) -> Result<SemicontinuityReport> {
    if radii.is_empty() || radii.windows(2).any(|w| !(w[1] < w[0])) || !(radii[radii.len() - 1] > 0.0) {
        return Err(Error::BadParams("radii must be positive and strictly decreasing".into()));
    }
    if !(domain.rho(base).abs() < BOUNDARY_TOL) {
        return Err(Error::NotOnBoundary(domain.rho(base).abs()));
    }
    let eo = EnclosingOptions::default();
    let base_pinching = pinching_radius_with(domain, base, interior_samples, &eo, opts.strategy)?.pinching;
    if !(base_pinching > 0.0) {
        return Err(Error::NotGsc);
    }
    let mut rings = Vec::with_capacity(radii.len());
    for (k, &radius) in radii.iter().enumerate() {
        let seed = opts.seed.wrapping_add(k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let pts = sampling::sample_boundary_near(domain, base, radius, opts.samples_per_ring, seed)?;
        let vals = exec::map_slice(opts.strategy, &pts, |q| {
            pinching_radius_with(domain, q, interior_samples, &eo, Strategy::Sequential).map(|r| r.pinching)
        });
        let vals: Vec<f64> = vals.into_iter().collect::<Result<_>>()?;
        let mut imin = 0;
        for (i, v) in vals.iter().enumerate() {
            if *v < vals[imin] {
                imin = i;
            }
        }
        let min_pinching = vals[imin];
        rings.push(RingResult {
            radius,
            samples: vals.len(),
            min_pinching,
            max_pinching: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            argmin: pts[imin].clone(),
            passed: min_pinching >= base_pinching - opts.tolerance,
        });
    }
    let last = rings.last().expect("at least one radius");
    let liminf_estimate = last.min_pinching;
    let passed = last.passed;
    let all_rings_passed = rings.iter().all(|r| r.passed);
    Ok(SemicontinuityReport {
        base: base.clone(),
        base_pinching,
        tolerance: opts.tolerance,
        rings,
        liminf_estimate,
        passed,
        all_rings_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::BoundingBox;

    fn ellipsoid(a: &[f64]) -> DomainSpec {
        let inv: Vec<f64> = a.iter().map(|x| 1.0 / (x * x)).collect();
        let half = a.iter().copied().fold(0.0, f64::max);
        DomainSpec::new(
            "ellipsoid",
            a.len() / 2,
            move |x| x.iter().zip(&inv).map(|(v, w)| v * v * w).sum::<f64>() - 1.0,
            BoundingBox::cube(a.len(), half),
        )
        .unwrap()
    }

    fn vertex(a: &[f64]) -> RealPoint {
        let mut c = vec![0.0; a.len()];
        c[0] = a[0];
        RealPoint::new(c).unwrap()
    }

    /// Ball through the vertex `a_1 e_1` containing the ellipsoid has radius
    /// at least `max(a_1, a_max^2 / a_1)`, and the extreme curvature there is
    /// `a_1 / a_min^2`.
    fn ellipsoid_oracle(a: &[f64]) -> f64 {
        let rest = &a[1..];
        let amin = rest.iter().copied().fold(f64::INFINITY, f64::min);
        let amax = rest.iter().copied().fold(0.0, f64::max);
        amin * amin / (a[0] * a[0]).max(amax * amax)
    }

    #[test]
    fn ellipsoid_matches_oracle() {
        for a in [[1.0, 1.3, 0.8, 1.1], [1.5, 1.0, 0.8, 1.2], [1.0, 1.0, 1.0, 1.0]] {
            let d = ellipsoid(&a);
            let samples = sampling::sample_interior(&d, 4000, 3).unwrap();
            let r = pinching_radius(&d, &vertex(&a), &samples).unwrap();
            assert!((r.pinching - ellipsoid_oracle(&a)).abs() < 1e-3, "{a:?}: {} vs {}", r.pinching, ellipsoid_oracle(&a));
        }
    }

    #[test]
    fn refinement_reaches_antipode() {
        let a = [1.5, 1.0, 0.8, 1.2];
        let d = ellipsoid(&a);
        let samples = sampling::sample_interior(&d, 500, 9).unwrap();
        let opts = EnclosingOptions { local_limit: false, ..Default::default() };
        let raw = EnclosingOptions { refine_iterations: 0, ..opts.clone() };
        let e = enclosing_radius_with(&d, &vertex(&a), &samples, &opts).unwrap().value();
        let e_raw = enclosing_radius_with(&d, &vertex(&a), &samples, &raw).unwrap().value();
        assert!(e_raw < e && (e - 1.5).abs() < 1e-3, "{e_raw} {e}");
    }

    #[test]
    fn dented_domain_is_not_enclosed() {
        let d = DomainSpec::new(
            "dent",
            1,
            |x| x[0] * x[0] + x[1] * x[1] - 1.0 + 0.6 * (-((x[0] - 1.0).powi(2) + x[1] * x[1]) / 0.05).exp(),
            BoundingBox::cube(2, 1.0),
        )
        .unwrap();
        let samples = sampling::sample_interior(&d, 2000, 1).unwrap();
        let p = sampling::project_to_boundary(&d, &[0.0, 0.0], &[1.0, 0.0], 1.0).unwrap();
        let p = RealPoint::new(p).unwrap();
        let r = pinching_radius(&d, &p, &samples).unwrap();
        assert_eq!(r.enclosing_radius, EnclosingRadius::Infinite);
        assert_eq!(r.pinching, 0.0);
        assert!(!r.gsc);
    }

    #[test]
    fn errors() {
        let d = ellipsoid(&[1.0, 1.0]);
        let p = vertex(&[1.0, 1.0]);
        assert!(matches!(enclosing_radius(&d, &p, &[]), Err(Error::EmptySamples)));
        let samples = sampling::sample_interior(&d, 10, 1).unwrap();
        let opts = ScanOptions::default();
        assert!(semicontinuity_scan(&d, &p, &[0.1, 0.2], &samples, &opts).is_err());
    }
}
