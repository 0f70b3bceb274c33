//! Seeded interior and boundary sampling.

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::point::{distance, RealPoint};
use crate::rng::SplitMix64;

/// Bisection stops once the bracket is shorter than this.
pub const BISECTION_TOL: f64 = 1e-10;
/// Accepted boundary samples satisfy `|rho| <` this.
pub const BOUNDARY_SAMPLE_TOL: f64 = 1e-8;

const ANCHORS: usize = 64;
const ATTEMPTS_PER_SAMPLE: usize = 400;
const INTERIOR_ATTEMPTS_PER_SAMPLE: usize = 100_000;
const ANCHOR_SALT: u64 = 0xA5A5_0F0F_3C3C_9696;

#[inline]
fn inside(domain: &DomainSpec, x: &[f64]) -> bool {
    domain.rho_at(x) < 0.0
}

/// Bisect the segment `[a, b]` with `rho(a) < 0 <= rho(b)` down to
/// [`BISECTION_TOL`]; returns the midpoint of the final bracket.
pub fn bisect_segment(domain: &DomainSpec, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut lo = a.to_vec();
    let mut hi = b.to_vec();
    let mut mid = vec![0.0; a.len()];
    for _ in 0..200 {
        for i in 0..a.len() {
            mid[i] = 0.5 * (lo[i] + hi[i]);
        }
        if distance(&lo, &hi) < BISECTION_TOL {
            break;
        }
        if inside(domain, &mid) {
            lo.copy_from_slice(&mid);
        } else {
            hi.copy_from_slice(&mid);
        }
    }
    mid
}

/// Uniform interior samples in the bounding box (rejection sampling).
pub fn sample_interior(domain: &DomainSpec, count: usize, seed: u64) -> Result<Vec<RealPoint>> {
    sample_interior_with(domain, count, seed, Strategy::default())
}

pub fn sample_interior_with(
    domain: &DomainSpec,
    count: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<Vec<RealPoint>> {
    if count == 0 {
        return Err(Error::BadParams("sample count must be positive".into()));
    }
    let pts = exec::map_range(strategy, count, |k| {
        let mut rng = SplitMix64::stream(seed, k as u64);
        for _ in 0..INTERIOR_ATTEMPTS_PER_SAMPLE {
            let x = domain.bbox.sample(&mut rng);
            if domain.contains_coords(&x) {
                return Some(RealPoint::from_vec_unchecked(x));
            }
        }
        None
    });
    pts.into_iter()
        .map(|p| p.ok_or(Error::NoInteriorFound(INTERIOR_ATTEMPTS_PER_SAMPLE)))
        .collect()
}

/// Seeded boundary samples with `|rho| < 1e-8`.
///
/// Each sample shoots a random ray from an interior anchor to the bounding
/// box, brackets the sign change of `rho` and bisects it. Samples landing on
/// the excluded set are rejected.
pub fn sample_boundary(domain: &DomainSpec, count: usize, seed: u64) -> Result<Vec<RealPoint>> {
    sample_boundary_with(domain, count, seed, Strategy::default())
}

pub fn sample_boundary_with(
    domain: &DomainSpec,
    count: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<Vec<RealPoint>> {
    if count == 0 {
        return Err(Error::BadParams("sample count must be positive".into()));
    }
    let anchors = sample_interior_with(domain, ANCHORS, seed ^ ANCHOR_SALT, strategy)
        .map_err(|_| Error::NoBoundaryFound(ANCHORS * INTERIOR_ATTEMPTS_PER_SAMPLE))?;
    let d = domain.dim_real();
    let pts = exec::map_range(strategy, count, |k| {
        let mut rng = SplitMix64::stream(seed, k as u64);
        for _ in 0..ATTEMPTS_PER_SAMPLE {
            let a = anchors[rng.below(anchors.len())].coords();
            let dir = rng.unit_vector(d);
            let t = domain.bbox.exit_parameter(a, &dir);
            let b: Vec<f64> = a.iter().zip(&dir).map(|(x, v)| x + t * v).collect();
            if inside(domain, &b) {
                continue;
            }
            let q = bisect_segment(domain, a, &b);
            if accept_boundary(domain, &q) {
                return Some(RealPoint::from_vec_unchecked(q));
            }
        }
        None
    });
    pts.into_iter()
        .map(|p| p.ok_or(Error::NoBoundaryFound(ATTEMPTS_PER_SAMPLE)))
        .collect()
}

fn accept_boundary(domain: &DomainSpec, q: &[f64]) -> bool {
    let r = domain.rho_at(q);
    r.abs() < BOUNDARY_SAMPLE_TOL && !domain.is_excluded(q) && domain.bbox.contains(q)
}

/// Point where `y + s * direction` crosses the zero set of `rho`, searching
/// both signs of `s` up to `reach`. Returns `None` when no sign change is
/// bracketed.
pub fn project_to_boundary(domain: &DomainSpec, y: &[f64], direction: &[f64], reach: f64) -> Option<Vec<f64>> {
    let at = |s: f64| -> Vec<f64> { y.iter().zip(direction).map(|(a, d)| a + s * d).collect() };
    let y_in = inside(domain, y);
    let mut step = (reach * 1e-6).max(1e-9).min(reach);
    loop {
        // Moving "outward" (+direction) from an interior point, inward otherwise.
        for sign in [1.0, -1.0] {
            let s = if y_in { sign * step } else { -sign * step };
            let x = at(s);
            if inside(domain, &x) != y_in {
                let q = if y_in { bisect_segment(domain, y, &x) } else { bisect_segment(domain, &x, y) };
                return accept_boundary(domain, &q).then_some(q);
            }
        }
        if step >= reach {
            return None;
        }
        step = (2.0 * step).min(reach);
    }
}

/// Boundary samples within Euclidean distance `radius` of `base`.
///
/// Offsets are drawn uniformly in the ball of radius `radius` about `base` and
/// moved back to the boundary along the unit normal at `base`.
pub fn sample_boundary_near(
    domain: &DomainSpec,
    base: &RealPoint,
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<RealPoint>> {
    domain.check_dim(base)?;
    if !(radius > 0.0) || count == 0 {
        return Err(Error::BadParams("radius and count must be positive".into()));
    }
    let (normal, _) = crate::diff::unit_normal_at(domain, base.coords())?;
    let d = domain.dim_real();
    let pts = exec::map_range(Strategy::default(), count, |k| {
        let mut rng = SplitMix64::stream(seed, k as u64);
        for _ in 0..ATTEMPTS_PER_SAMPLE {
            let dir = rng.unit_vector(d);
            let rad = radius * rng.next_f64().powf(1.0 / d as f64);
            let y = base.offset(&dir, rad);
            if let Some(q) = project_to_boundary(domain, y.coords(), &normal, 4.0 * radius) {
                if distance(&q, base.coords()) <= radius {
                    return Some(RealPoint::from_vec_unchecked(q));
                }
            }
        }
        None
    });
    pts.into_iter()
        .map(|p| p.ok_or(Error::NoBoundaryFound(ATTEMPTS_PER_SAMPLE)))
        .collect()
}

/// Distance from an interior point to the nearest boundary sample.
///
/// An upper bound on the true boundary distance for any finite sample set.
pub fn interior_distance_to_boundary(domain: &DomainSpec, z: &RealPoint, samples: &[RealPoint]) -> Result<f64> {
    domain.check_dim(z)?;
    if !domain.contains(z) {
        return Err(Error::OutsideDomain);
    }
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    Ok(samples.iter().map(|q| q.distance(z)).fold(f64::INFINITY, f64::min))
}

/// Largest pairwise distance in a sample cloud (a lower bound on the diameter).
pub fn sample_diameter(samples: &[RealPoint], strategy: Strategy) -> f64 {
    exec::map_range(strategy, samples.len(), |i| {
        samples[i + 1..].iter().map(|q| q.distance(&samples[i])).fold(0.0, f64::max)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::BoundingBox;

    fn disc() -> DomainSpec {
        DomainSpec::new("disc", 1, |x| x[0] * x[0] + x[1] * x[1] - 1.0, BoundingBox::cube(2, 1.0)).unwrap()
    }

    #[test]
    fn disc_boundary_samples() {
        let pts = sample_boundary(&disc(), 500, 9).unwrap();
        for p in &pts {
            assert!((p.norm() - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn sampling_is_deterministic_across_strategies() {
        let a = sample_boundary_with(&disc(), 64, 5, Strategy::Sequential).unwrap();
        let b = sample_boundary_with(&disc(), 64, 5, Strategy::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disc_distances() {
        let d = disc();
        let pts = sample_boundary(&d, 10_000, 1).unwrap();
        let at = |x: f64| interior_distance_to_boundary(&d, &RealPoint::new(vec![x, 0.0]).unwrap(), &pts).unwrap();
        assert!((at(0.0) - 1.0).abs() < 1e-3);
        assert!((at(0.5) - 0.5).abs() < 1e-3);
        assert!(matches!(
            interior_distance_to_boundary(&d, &RealPoint::new(vec![2.0, 0.0]).unwrap(), &pts),
            Err(Error::OutsideDomain)
        ));
    }

    #[test]
    fn empty_domain_reports_failure() {
        let d = DomainSpec::new("empty", 1, |_| 1.0, BoundingBox::cube(2, 1.0)).unwrap();
        assert!(sample_boundary(&d, 3, 0).is_err());
    }

    #[test]
    fn near_samples_stay_close() {
        let d = disc();
        let base = RealPoint::new(vec![1.0, 0.0]).unwrap();
        let pts = sample_boundary_near(&d, &base, 0.1, 50, 3).unwrap();
        for p in &pts {
            assert!(p.distance(&base) <= 0.1);
            assert!((p.norm() - 1.0).abs() < 1e-7);
        }
    }
}
