//! Lower bounds and exact values of the squeezing function.

use serde::Serialize;

use crate::diff;
use crate::domain::{DomainSpec, ExactModel};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::pinching::{self, EnclosingRadius};
use crate::point::RealPoint;
use crate::sampling;
use crate::catalog;

/// Which argument produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Exact,
    DiamBound,
    BoundaryEstimate,
    ProductBound,
    EmbeddingWitness,
    LimitTheorem,
    Vacuous,
    Heuristic,
}

/// Interval `[lower, upper]` containing `s_D(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeBound {
    pub lower: f64,
    pub upper: f64,
    pub provenance: Provenance,
}

impl SqueezeBound {
    pub fn new(lower: f64, upper: f64, provenance: Provenance) -> Result<Self> {
        if !(0.0 <= lower && lower <= upper && upper <= 1.0) {
            return Err(Error::OutOfRange(format!("invalid squeezing interval [{lower}, {upper}]")));
        }
        Ok(Self { lower, upper, provenance })
    }

    pub fn exact(value: f64) -> Result<Self> {
        Self::new(value, value, Provenance::Exact)
    }

    /// `[lower, 1]`, with `lower` clamped into `[0, 1]`.
    pub fn lower_only(lower: f64, provenance: Provenance) -> Self {
        Self { lower: lower.clamp(0.0, 1.0), upper: 1.0, provenance }
    }

    pub fn vacuous() -> Self {
        Self::lower_only(0.0, Provenance::Vacuous)
    }
}

/// Squeezing function of a model domain in closed form.
pub fn exact_squeezing(model: ExactModel, z: &RealPoint) -> Result<SqueezeBound> {
    let r = z.norm();
    let planar = z.n() == 1;
    let value = match model {
        ExactModel::Ball if r < 1.0 => 1.0,
        ExactModel::ScaledBall(c) if r < c => 1.0,
        ExactModel::Disc if planar && r < 1.0 => 1.0,
        ExactModel::PuncturedDisc if planar && r > 0.0 && r < 1.0 => r,
        ExactModel::ScaledPuncturedDisc(c) if planar && r > 0.0 && r < c => r / c,
        _ => return Err(Error::OutsideDomain),
    };
    SqueezeBound::exact(value)
}

/// Evaluator using the exact value of a model domain.
pub fn exact_evaluator(domain: &DomainSpec, z: &RealPoint) -> Result<SqueezeBound> {
    let model = domain
        .model
        .ok_or_else(|| Error::BadParams(format!("`{}` has no closed-form squeezing function", domain.name)))?;
    exact_squeezing(model, z)
}

/// `s_D(z) >= delta(z) / diam(D)` from boundary samples. Distances to the
/// excluded set count toward `delta`.
pub fn diam_lower_bound(domain: &DomainSpec, z: &RealPoint, boundary_samples: &[RealPoint]) -> Result<SqueezeBound> {
    diam_lower_bound_with(domain, z, boundary_samples, Strategy::default())
}

pub fn diam_lower_bound_with(
    domain: &DomainSpec,
    z: &RealPoint,
    boundary_samples: &[RealPoint],
    strategy: Strategy,
) -> Result<SqueezeBound> {
    let delta = sampling::interior_distance_to_boundary(domain, z, boundary_samples)?
        .min(domain.excluded_distance(z.coords()));
    let diam = sampling::sample_diameter(boundary_samples, strategy);
    if !(diam > 0.0) {
        return Err(Error::BadParams("boundary samples are all coincident".into()));
    }
    Ok(SqueezeBound::lower_only(delta / diam, Provenance::DiamBound))
}

/// Squeezing lower bound on a product from lower bounds on its factors,
/// `(sum s_i^{-2})^{-1/2}`.
pub fn product_lower_bound(factors: &[f64]) -> Result<f64> {
    if factors.is_empty() {
        return Err(Error::OutOfRange("product bound needs at least one factor".into()));
    }
    if let Some(bad) = factors.iter().find(|s| !(**s > 0.0 && **s <= 1.0)) {
        return Err(Error::OutOfRange(format!("squeezing factor {bad} is not in (0, 1]")));
    }
    Ok(factors.iter().map(|s| 1.0 / (s * s)).sum::<f64>().powf(-0.5))
}

/// `sqrt(1 - (2 - t)(1 - rho) / (2 (1 - t)))` with `t = delta / e`.
///
/// Negative radicands give a [`Provenance::Vacuous`] bound of 0.
pub fn boundary_estimate(delta: f64, e: f64, rho: f64) -> Result<SqueezeBound> {
    if !(e > 0.0) || !(delta > 0.0) {
        return Err(Error::OutOfRange(format!("need delta > 0 and e > 0, got delta = {delta}, e = {e}")));
    }
    let t = delta / e;
    if !(t < 1.0) {
        return Err(Error::OutOfRange(format!("delta / e = {t} must be below 1")));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::OutOfRange(format!("pinching {rho} is not in (0, 1]")));
    }
    let rad = 1.0 - (2.0 - t) * (1.0 - rho) / (2.0 * (1.0 - t));
    if rad < 0.0 {
        return Ok(SqueezeBound::vacuous());
    }
    Ok(SqueezeBound::lower_only(rad.sqrt(), Provenance::BoundaryEstimate))
}

/// One depth of [`boundary_estimate_at_point`].
#[derive(Debug, Clone, Serialize)]
pub struct DepthBound {
    pub depth: f64,
    pub point: RealPoint,
    pub bound: SqueezeBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointEstimate {
    pub base: RealPoint,
    pub pinching: f64,
    pub enclosing_radius: f64,
    pub max_depth: f64,
    /// `sqrt(pinching)`, the limit of the bounds as the depth goes to 0.
    pub limit: f64,
    pub bounds: Vec<DepthBound>,
}

/// Fraction of `e_D(p)` used as the default certified depth.
pub const DEFAULT_DEPTH_FRACTION: f64 = 0.2;

/// Boundary estimate along the inward normal at `p`, using the pinching
/// radius and enclosing radius at `p`. Depths beyond `max_depth` (default
/// `0.2 e_D(p)`) or leaving the domain are reported as vacuous.
pub fn boundary_estimate_at_point(
    domain: &DomainSpec,
    p: &RealPoint,
    depths: &[f64],
    interior_samples: &[RealPoint],
    max_depth: Option<f64>,
) -> Result<PointEstimate> {
    let pr = pinching::pinching_radius(domain, p, interior_samples)?;
    let e = match pr.enclosing_radius {
        EnclosingRadius::Finite(e) if pr.pinching > 0.0 => e,
        _ => return Err(Error::NotGsc),
    };
    let max_depth = max_depth.unwrap_or(DEFAULT_DEPTH_FRACTION * e);
    let (nu, _) = diff::unit_normal_at(domain, p.coords())?;
    let bounds = depths
        .iter()
        .map(|&depth| {
            if !(depth > 0.0) {
                return Err(Error::OutOfRange(format!("depth {depth} must be positive")));
            }
            let point = p.offset(&nu, -depth);
            let bound = if depth > max_depth || depth >= e || !domain.contains(&point) {
                SqueezeBound::vacuous()
            } else {
                boundary_estimate(depth, e, pr.pinching)?
            };
            Ok(DepthBound { depth, point, bound })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PointEstimate {
        base: p.clone(),
        pinching: pr.pinching,
        enclosing_radius: e,
        max_depth,
        limit: pr.pinching.sqrt(),
        bounds,
    })
}

/// Callback giving squeezing values (or bounds) on members of a sequence.
pub type Evaluator<'a> = dyn Fn(&DomainSpec, &RealPoint) -> Result<SqueezeBound> + Sync + 'a;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SequenceKind {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceStep {
    pub index: usize,
    pub domain: String,
    pub value: SqueezeBound,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SequenceReport {
    pub kind: SequenceKind,
    pub point: RealPoint,
    pub limit_domain: String,
    pub limit_value: SqueezeBound,
    pub steps: Vec<SequenceStep>,
    /// Increasing: gaps never grow. Decreasing: the limit value dominates the
    /// upper limit of the sequence.
    pub assertion_holds: bool,
    /// What the sequence says about the limit domain.
    pub implied_bound: SqueezeBound,
    pub note: &'static str,
}

const SEQ_TOL: f64 = 1e-12;

fn evaluate_sequence(
    domains: &[DomainSpec],
    limit: &DomainSpec,
    z: &RealPoint,
    evaluator: &Evaluator<'_>,
) -> Result<(SqueezeBound, Vec<SequenceStep>)> {
    if domains.is_empty() {
        return Err(Error::BadParams("empty domain sequence".into()));
    }
    if !domains.iter().all(|d| d.contains(z)) || !limit.contains(z) {
        return Err(Error::OutsideDomain);
    }
    let limit_value = evaluator(limit, z)?;
    let values = exec::map_slice(Strategy::default(), domains, |d| evaluator(d, z));
    let steps = values
        .into_iter()
        .enumerate()
        .map(|(index, v)| {
            let value = v?;
            Ok(SequenceStep { index, domain: domains[index].name.clone(), value, gap: (value.lower - limit_value.lower).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((limit_value, steps))
}

/// Values along an increasing exhaustion of `limit`, which converge to the
/// squeezing function of the limit.
pub fn increasing_sequence_eval(
    domains: &[DomainSpec],
    limit: &DomainSpec,
    z: &RealPoint,
    evaluator: &Evaluator<'_>,
) -> Result<SequenceReport> {
    let first = domains.first().ok_or_else(|| Error::BadParams("empty domain sequence".into()))?;
    if !first.contains(z) {
        return Err(Error::OutsideDomain);
    }
    let (limit_value, steps) = evaluate_sequence(domains, limit, z, evaluator)?;
    let assertion_holds = steps.windows(2).all(|w| w[1].gap <= w[0].gap + SEQ_TOL);
    let last = steps.last().expect("nonempty").value;
    Ok(SequenceReport {
        kind: SequenceKind::Increasing,
        point: z.clone(),
        limit_domain: limit.name.clone(),
        limit_value,
        steps,
        assertion_holds,
        implied_bound: SqueezeBound::lower_only(last.lower, Provenance::LimitTheorem),
        note: "values of an increasing exhaustion converge to the value on the limit domain",
    })
}

/// Values along a decreasing sequence with intersection `limit`. Only
/// `s_limit(z) >= limsup s_k(z)` is asserted; equality can fail.
pub fn decreasing_sequence_eval(
    domains: &[DomainSpec],
    limit: &DomainSpec,
    z: &RealPoint,
    evaluator: &Evaluator<'_>,
) -> Result<SequenceReport> {
    let (limit_value, steps) = evaluate_sequence(domains, limit, z, evaluator)?;
    let tail = &steps[steps.len() / 2..];
    let limsup = tail.iter().map(|s| s.value.lower).fold(f64::NEG_INFINITY, f64::max);
    Ok(SequenceReport {
        kind: SequenceKind::Decreasing,
        point: z.clone(),
        limit_domain: limit.name.clone(),
        limit_value,
        assertion_holds: limit_value.upper >= limsup - SEQ_TOL,
        steps,
        implied_bound: SqueezeBound::lower_only(limsup, Provenance::LimitTheorem),
        note: "the limit value dominates the upper limit of the sequence; equality can fail \
               (thickened Hartogs triangles)",
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HartogsGapRow {
    pub j: usize,
    pub point: RealPoint,
    pub image: RealPoint,
    pub factors: [f64; 2],
    pub bound: SqueezeBound,
    pub exceeds_reference: bool,
}

/// Points `z^j` of the Hartogs triangle with `|z1| = (1 + 1/j) |z2|` and
/// `|z2| > a`. The squeezing function stays above `a / sqrt 2` there, while
/// on the thickenings by `{|z2| < eps}` it tends to 0 along the same points;
/// the latter is recorded, not computed.
#[derive(Debug, Clone, Serialize)]
pub struct HartogsGapReport {
    pub a: f64,
    /// `product_lower_bound(a, a) = a / sqrt 2`.
    pub reference_bound: f64,
    pub rows: Vec<HartogsGapRow>,
    pub thickened_limit: &'static str,
}

pub fn hartogs_gap_report(a: f64, js: &[usize]) -> Result<HartogsGapReport> {
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::OutOfRange(format!("a = {a} must lie in (0, 1/2)")));
    }
    let rows = js
        .iter()
        .map(|&j| {
            if j == 0 {
                return Err(Error::BadParams("j must be positive".into()));
            }
            let q = 1.0 + 1.0 / j as f64;
            let t = 0.5 * (a + 1.0 / q);
            let ang = 0.3 * j as f64;
            let point = RealPoint::new(vec![q * t * ang.cos(), q * t * ang.sin(), t, 0.0])?;
            let image = catalog::triangle_to_product(&point)?;
            let f1 = exact_squeezing(ExactModel::PuncturedDisc, &RealPoint::from_complex(&[image.z(0)])?)?.lower;
            let f2 = exact_squeezing(ExactModel::PuncturedDisc, &RealPoint::from_complex(&[image.z(1)])?)?.lower;
            let value = product_lower_bound(&[f1, f2])?;
            let bound = SqueezeBound::lower_only(value, Provenance::ProductBound);
            Ok(HartogsGapRow { j, point, image, factors: [f1, f2], bound, exceeds_reference: f1 > a && f2 > a })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HartogsGapReport {
        a,
        reference_bound: product_lower_bound(&[a, a])?,
        rows,
        thickened_limit: "s tends to 0 along z^j on every thickening, uniformly in eps",
    })
}
