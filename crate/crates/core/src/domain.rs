//! Bounded domains given by a defining function.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::point::{self, RealPoint};
use crate::rng::SplitMix64;

pub type RhoFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type DistanceFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type RepresentativeFn = Arc<dyn Fn(&mut SplitMix64) -> Option<RealPoint> + Send + Sync>;

/// Points closer than this to an excluded set count as excluded.
pub const EXCLUDED_TOL: f64 = 1e-12;

/// Axis-aligned box in R^{2n}.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::ShapeMismatch("bounding box corners differ in length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::BadParams("bounding box must have lo < hi".into()));
        }
        Ok(Self { lo, hi })
    }

    /// The cube `[-half, half]^dim`.
    pub fn cube(dim: usize, half: f64) -> Self {
        Self { lo: vec![-half; dim], hi: vec![half; dim] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lo.iter().zip(&self.hi)).all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    pub fn diameter(&self) -> f64 {
        point::distance(&self.lo, &self.hi)
    }

    pub fn sample(&self, rng: &mut SplitMix64) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(a, b)| rng.uniform(*a, *b)).collect()
    }

    /// Largest `t >= 0` with `x + t d` still in the box (x inside).
    pub fn exit_parameter(&self, x: &[f64], d: &[f64]) -> f64 {
        let mut t = f64::INFINITY;
        for i in 0..x.len() {
            if d[i] > 0.0 {
                t = t.min((self.hi[i] - x[i]) / d[i]);
            } else if d[i] < 0.0 {
                t = t.min((self.lo[i] - x[i]) / d[i]);
            }
        }
        t.max(0.0)
    }

    fn scaled_about_center(&self, factor: f64) -> Self {
        let (lo, hi) = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| {
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a) * factor;
                (c - h, c + h)
            })
            .unzip();
        Self { lo, hi }
    }
}

/// A removed analytic set such as the puncture of the punctured disc.
///
/// `distance` approximates the Euclidean distance to the set; `representative`
/// draws points of the set that lie in the closure of the domain (used when the
/// set has to be treated as part of the effective boundary).
#[derive(Clone)]
pub struct ExcludedSet {
    pub description: String,
    pub distance: DistanceFn,
    pub representative: Option<RepresentativeFn>,
}

impl ExcludedSet {
    pub fn contains(&self, x: &[f64]) -> bool {
        (self.distance)(x) < EXCLUDED_TOL
    }
}

/// Model domains whose squeezing function is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExactModel {
    /// Unit ball of C^n.
    Ball,
    /// Ball of C^n of the given radius.
    ScaledBall(f64),
    /// Unit disc.
    Disc,
    /// Unit punctured disc.
    PuncturedDisc,
    /// `{0 < |z| < c}`.
    ScaledPuncturedDisc(f64),
}

/// A bounded domain `{rho < 0} \ excluded` inside `bbox`.
#[derive(Clone)]
pub struct DomainSpec {
    pub name: String,
    pub n: usize,
    pub rho: RhoFn,
    pub bbox: BoundingBox,
    pub excluded: Option<ExcludedSet>,
    pub model: Option<ExactModel>,
}

impl fmt::Debug for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DomainSpec")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("bbox", &self.bbox)
            .field("excluded", &self.excluded.as_ref().map(|e| e.description.clone()))
            .field("model", &self.model)
            .finish()
    }
}

impl DomainSpec {
    pub fn new(
        name: impl Into<String>,
        n: usize,
        rho: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        bbox: BoundingBox,
    ) -> Result<Self> {
        if n == 0 || bbox.dim() != 2 * n {
            return Err(Error::ShapeMismatch(format!(
                "bounding box has dimension {} but the domain lives in C^{n}",
                bbox.dim()
            )));
        }
        Ok(Self { name: name.into(), n, rho: Arc::new(rho), bbox, excluded: None, model: None })
    }

    pub fn with_excluded(mut self, excluded: ExcludedSet) -> Self {
        self.excluded = Some(excluded);
        self
    }

    pub fn with_model(mut self, model: ExactModel) -> Self {
        self.model = Some(model);
        self
    }

    pub fn dim_real(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn rho_at(&self, x: &[f64]) -> f64 {
        (self.rho)(x)
    }

    pub fn rho(&self, p: &RealPoint) -> f64 {
        (self.rho)(p.coords())
    }

    pub fn is_excluded(&self, x: &[f64]) -> bool {
        self.excluded.as_ref().is_some_and(|e| e.contains(x))
    }

    pub fn excluded_distance(&self, x: &[f64]) -> f64 {
        self.excluded.as_ref().map_or(f64::INFINITY, |e| (e.distance)(x))
    }

    /// Membership in the open domain.
    pub fn contains_coords(&self, x: &[f64]) -> bool {
        let r = (self.rho)(x);
        r < 0.0 && self.bbox.contains(x) && !self.is_excluded(x)
    }

    pub fn contains(&self, p: &RealPoint) -> bool {
        p.dim_real() == self.dim_real() && self.contains_coords(p.coords())
    }

    pub(crate) fn check_dim(&self, p: &RealPoint) -> Result<()> {
        if p.dim_real() != self.dim_real() {
            return Err(Error::ShapeMismatch(format!(
                "point has {} real coordinates, domain `{}` needs {}",
                p.dim_real(),
                self.name,
                self.dim_real()
            )));
        }
        Ok(())
    }

    /// Same domain with `rho` multiplied by a positive constant.
    pub fn scaled_rho(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::OutOfRange(format!("rho scale factor {factor} must be positive")));
        }
        let rho = self.rho.clone();
        let mut out = self.clone();
        out.name = format!("{}*{factor}", self.name);
        out.rho = Arc::new(move |x| factor * rho(x));
        Ok(out)
    }

    /// Image of the domain under the rigid motion `x -> Q x + t` of R^{2n}.
    ///
    /// `Q` must be orthogonal. The bounding box becomes the box hull of the
    /// rotated box.
    pub fn rigid_image(&self, q: &DMatrix<f64>, t: &[f64]) -> Result<Self> {
        let d = self.dim_real();
        if q.nrows() != d || q.ncols() != d || t.len() != d {
            return Err(Error::ShapeMismatch("rigid motion does not match the domain".into()));
        }
        let qt = q.transpose();
        let center: Vec<f64> =
            self.bbox.lo.iter().zip(&self.bbox.hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let half: Vec<f64> =
            self.bbox.lo.iter().zip(&self.bbox.hi).map(|(a, b)| 0.5 * (b - a)).collect();
        let mut lo = vec![0.0; d];
        let mut hi = vec![0.0; d];
        for i in 0..d {
            let c: f64 = (0..d).map(|j| q[(i, j)] * center[j]).sum::<f64>() + t[i];
            let h: f64 = (0..d).map(|j| q[(i, j)].abs() * half[j]).sum();
            lo[i] = c - h;
            hi[i] = c + h;
        }
        let rho = self.rho.clone();
        let shift = t.to_vec();
        let qt_rho = qt.clone();
        let pull_back = move |x: &[f64]| -> Vec<f64> {
            (0..d).map(|i| (0..d).map(|j| qt_rho[(i, j)] * (x[j] - shift[j])).sum()).collect()
        };
        let pb = Arc::new(pull_back);
        let pb_rho = pb.clone();
        let mut out = self.clone();
        out.name = format!("{}@rigid", self.name);
        out.rho = Arc::new(move |x| rho(&pb_rho(x)));
        out.bbox = BoundingBox { lo, hi };
        if let Some(ex) = &self.excluded {
            let dist = ex.distance.clone();
            let pb_ex = pb.clone();
            let qm = q.clone();
            let tv = t.to_vec();
            let rep = ex.representative.clone().map(|r| {
                let f: RepresentativeFn = Arc::new(move |rng: &mut SplitMix64| {
                    r(rng).map(|p| {
                        let x = p.coords();
                        RealPoint::from_vec_unchecked(
                            (0..d).map(|i| (0..d).map(|j| qm[(i, j)] * x[j]).sum::<f64>() + tv[i]).collect(),
                        )
                    })
                });
                f
            });
            out.excluded = Some(ExcludedSet {
                description: ex.description.clone(),
                distance: Arc::new(move |x| dist(&pb_ex(x))),
                representative: rep,
            });
        }
        out.model = None;
        Ok(out)
    }

    /// Box enlarged by `factor` about its center (used to check that the
    /// bounding box really contains the domain).
    pub fn enlarged_bbox(&self, factor: f64) -> BoundingBox {
        self.bbox.scaled_about_center(factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc() -> DomainSpec {
        DomainSpec::new("disc", 1, |x| x[0] * x[0] + x[1] * x[1] - 1.0, BoundingBox::cube(2, 1.0))
            .unwrap()
    }

    #[test]
    fn membership() {
        let d = disc();
        assert!(d.contains(&RealPoint::new(vec![0.5, 0.0]).unwrap()));
        assert!(!d.contains(&RealPoint::new(vec![1.5, 0.0]).unwrap()));
        assert!(!d.contains(&RealPoint::new(vec![0.5, 0.0, 0.0, 0.0]).unwrap()));
    }

    #[test]
    fn bbox_dimension_checked() {
        assert!(DomainSpec::new("bad", 2, |_| -1.0, BoundingBox::cube(2, 1.0)).is_err());
    }

    #[test]
    fn rigid_image_moves_membership() {
        let d = disc();
        let q = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let img = d.rigid_image(&q, &[3.0, 0.0]).unwrap();
        assert!(img.contains(&RealPoint::new(vec![3.0, 0.9]).unwrap()));
        assert!(!img.contains(&RealPoint::new(vec![0.0, 0.0]).unwrap()));
        assert!((img.bbox.lo[0] - 2.0).abs() < 1e-12 && (img.bbox.hi[0] - 4.0).abs() < 1e-12);
    }
}
