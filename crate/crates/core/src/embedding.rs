//! Explicit embeddings `f: D -> B^n` with `f(p) = 0`, the squeezing ratio
//! they witness, and a numerical check of `B(0, r) ⊂ f(D)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::catalog;
use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::linalg;
use crate::point::{norm, RealPoint};
use crate::rng::SplitMix64;
use crate::squeeze::{Provenance, SqueezeBound};

pub type MapFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Tolerance on `|f(p)|`.
pub const BASEPOINT_TOL: f64 = 1e-10;
/// Newton residual accepted as a preimage.
pub const PREIMAGE_TOL: f64 = 1e-8;
/// Newton starts per target.
pub const NEWTON_STARTS: usize = 32;

const NEWTON_ITERATIONS: usize = 60;
const JACOBIAN_STEP: f64 = 1e-7;
const REPRESENTATIVE_DRAWS: usize = 256;
const MAX_TARGETS: usize = 2_000_000;

/// A holomorphic embedding, trusted to be injective on the domain.
#[derive(Clone)]
pub struct EmbeddingSpec {
    pub name: String,
    pub map: MapFn,
    /// The map extends continuously to the closure, excluded set included.
    pub boundary_extension: bool,
    pub domain: DomainSpec,
    pub basepoint: RealPoint,
}

impl fmt::Debug for EmbeddingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EmbeddingSpec")
            .field("name", &self.name)
            .field("boundary_extension", &self.boundary_extension)
            .field("domain", &self.domain.name)
            .field("basepoint", &self.basepoint)
            .finish()
    }
}

impl EmbeddingSpec {
    pub fn new(
        name: impl Into<String>,
        map: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        boundary_extension: bool,
        domain: DomainSpec,
        basepoint: RealPoint,
    ) -> Result<Self> {
        domain.check_dim(&basepoint)?;
        if !domain.contains(&basepoint) {
            return Err(Error::OutsideDomain);
        }
        let spec = Self { name: name.into(), map: Arc::new(map), boundary_extension, domain, basepoint };
        let img = spec.apply(spec.basepoint.coords());
        if img.len() != spec.domain.dim_real() {
            return Err(Error::ShapeMismatch("map changes the dimension".into()));
        }
        let r = norm(&img);
        if !(r < BASEPOINT_TOL) {
            return Err(Error::BasepointNotMappedToZero(r));
        }
        Ok(spec)
    }

    pub fn apply(&self, z: &[f64]) -> Vec<f64> {
        (self.map)(z)
    }
}

/// Result of [`witness_radius`].
#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub bound: SqueezeBound,
    /// Smallest `|f(q)|` over boundary samples.
    pub min_boundary_image: f64,
    /// Smallest `|f(q)|` over points of the excluded set.
    pub min_excluded_image: Option<f64>,
    pub argmin: Option<RealPoint>,
}

fn check_images(spec: &EmbeddingSpec, interior: &[RealPoint]) -> Result<Vec<Vec<f64>>> {
    let imgs = exec::map_slice(Strategy::default(), interior, |z| spec.apply(z.coords()));
    for v in &imgs {
        let r = norm(v);
        if !(r < 1.0) {
            return Err(Error::ImageEscapesBall(r));
        }
    }
    Ok(imgs)
}

/// Radius of a ball about 0 inside `f(D)`.
///
/// With a boundary extension this is the distance from 0 to the image of the
/// effective boundary (sampled boundary plus excluded set). Otherwise the
/// largest radius whose ball is covered by the sampled interior image is
/// returned, tagged [`Provenance::Heuristic`].
pub fn witness_radius(spec: &EmbeddingSpec, boundary_samples: &[RealPoint], interior_samples: &[RealPoint]) -> Result<WitnessReport> {
    let imgs = check_images(spec, interior_samples)?;
    if !spec.boundary_extension {
        let r = covering_radius(spec.domain.dim_real(), &imgs, 7);
        return Ok(WitnessReport {
            bound: SqueezeBound::lower_only(r, Provenance::Heuristic),
            min_boundary_image: f64::NAN,
            min_excluded_image: None,
            argmin: None,
        });
    }
    if boundary_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut best = f64::INFINITY;
    let mut argmin = None;
    for q in boundary_samples {
        let r = norm(&spec.apply(q.coords()));
        if r < best {
            best = r;
            argmin = Some(q.clone());
        }
    }
    let min_boundary_image = best;
    let mut min_excluded_image = None;
    if let Some(rep) = spec.domain.excluded.as_ref().and_then(|e| e.representative.clone()) {
        let mut rng = SplitMix64::new(0x005E_ED0F_E8C1);
        let mut m = f64::INFINITY;
        for _ in 0..REPRESENTATIVE_DRAWS {
            if let Some(q) = rep(&mut rng) {
                let r = norm(&spec.apply(q.coords()));
                if r.is_finite() && r < m {
                    m = r;
                    if r < best {
                        best = r;
                        argmin = Some(q);
                    }
                }
            }
        }
        min_excluded_image = m.is_finite().then_some(m);
    }
    Ok(WitnessReport {
        bound: SqueezeBound::lower_only(best.min(1.0), Provenance::EmbeddingWitness),
        min_boundary_image,
        min_excluded_image,
        argmin,
    })
}

/// Largest `r` on a 0.01 grid such that seeded test points of every ball
/// `B(0, r')`, `r' <= r`, lie within the typical sample spacing of the image
/// cloud.
fn covering_radius(dim: usize, imgs: &[Vec<f64>], seed: u64) -> f64 {
    if imgs.is_empty() {
        return 0.0;
    }
    let spacing = 2.0 * (1.0 / imgs.len() as f64).powf(1.0 / dim as f64);
    let mut rng = SplitMix64::new(seed);
    let probes: Vec<Vec<f64>> = (0..512)
        .map(|_| {
            let d = rng.unit_vector(dim);
            let t = rng.next_f64().powf(1.0 / dim as f64);
            d.into_iter().map(|x| x * t).collect()
        })
        .collect();
    let mut covered = 0.0;
    for step in 1..=100 {
        let r = step as f64 / 100.0;
        let ok = exec::map_slice(Strategy::default(), &probes, |u| {
            let y: Vec<f64> = u.iter().map(|v| v * r).collect();
            imgs.iter().any(|v| crate::point::distance(v, &y) <= spacing)
        });
        if !ok.into_iter().all(|b| b) {
            break;
        }
        covered = r;
    }
    covered
}

fn jacobian(spec: &EmbeddingSpec, z: &[f64]) -> Option<DMatrix<f64>> {
    let d = z.len();
    let h = JACOBIAN_STEP * norm(z).max(1.0);
    let mut x = z.to_vec();
    let mut j = DMatrix::zeros(d, d);
    for c in 0..d {
        x[c] = z[c] + h;
        let fp = spec.apply(&x);
        x[c] = z[c] - h;
        let fm = spec.apply(&x);
        x[c] = z[c];
        for r in 0..d {
            let v = (fp[r] - fm[r]) / (2.0 * h);
            if !v.is_finite() {
                return None;
            }
            j[(r, c)] = v;
        }
    }
    Some(j)
}

fn residual(spec: &EmbeddingSpec, z: &[f64], y: &[f64]) -> f64 {
    let f = spec.apply(z);
    let r: f64 = f.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

enum NewtonOutcome {
    Converged(Vec<f64>),
    Stalled,
}

/// Damped Newton on `f(z) = y` with backtracking on the residual.
fn newton(spec: &EmbeddingSpec, start: &[f64], y: &[f64]) -> NewtonOutcome {
    let mut z = start.to_vec();
    let mut res = residual(spec, &z, y);
    for _ in 0..NEWTON_ITERATIONS {
        if res < PREIMAGE_TOL {
            return NewtonOutcome::Converged(z);
        }
        let Some(j) = jacobian(spec, &z) else { break };
        let f = spec.apply(&z);
        let rhs: Vec<f64> = f.iter().zip(y).map(|(a, b)| b - a).collect();
        let Some(step) = linalg::solve(&j, &rhs) else { break };
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-6 {
            let trial: Vec<f64> = z.iter().zip(&step).map(|(a, s)| a + t * s).collect();
            let r = residual(spec, &trial, y);
            if r < res {
                z = trial;
                res = r;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            break;
        }
    }
    if res < PREIMAGE_TOL {
        NewtonOutcome::Converged(z)
    } else {
        NewtonOutcome::Stalled
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InclusionStatus {
    /// Every grid cell has a preimage away from the excluded set.
    Included,
    /// A target has no admissible preimage.
    Excluded,
    /// Preimage search stalled for some target and no exclusion was found.
    Heuristic,
}

#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub r: f64,
    pub grid: usize,
    pub targets: usize,
    pub included: bool,
    pub status: InclusionStatus,
    pub provenance: Provenance,
    pub counterexample: Option<RealPoint>,
    /// Why the counterexample failed.
    pub reason: Option<String>,
    pub stalled_targets: usize,
}

enum TargetOutcome {
    Covered,
    Hole(String),
    Stalled,
}

/// Grid check of `B(0, r) ⊂ f(D)`.
///
/// Each grid target `y` needs a Newton preimage `z` in the domain whose
/// distance to the excluded set exceeds the cell radius times `|Df(z)^{-1}|`,
/// so that the whole cell around `y` is accounted for. `grid` is the number
/// of points per real axis.
pub fn verify_inclusion(
    spec: &EmbeddingSpec,
    r: f64,
    grid: usize,
    interior_samples: &[RealPoint],
    seed: u64,
) -> Result<InclusionReport> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!("inclusion radius {r} is not in (0, 1)")));
    }
    if grid < 3 {
        return Err(Error::BadParams("inclusion grid needs at least 3 points per axis".into()));
    }
    if interior_samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let d = spec.domain.dim_real();
    let total = (grid as f64).powi(d as i32);
    if total > MAX_TARGETS as f64 {
        return Err(Error::BadParams(format!("{grid}^{d} grid targets exceed the limit of {MAX_TARGETS}")));
    }
    let imgs = check_images(spec, interior_samples)?;
    let h = 2.0 * r / (grid - 1) as f64;
    let cell_radius = 0.5 * h * (d as f64).sqrt();
    let mut targets = Vec::new();
    let mut idx = vec![0usize; d];
    'outer: loop {
        let y: Vec<f64> = idx.iter().map(|&i| -r + h * i as f64).collect();
        if norm(&y) <= r + 1e-12 {
            targets.push(y);
        }
        for i in idx.iter_mut() {
            *i += 1;
            if *i < grid {
                continue 'outer;
            }
            *i = 0;
        }
        break;
    }
    let pool: Vec<usize> = (0..interior_samples.len().min(256)).collect();
    let outcomes = exec::map_range(Strategy::default(), targets.len(), |t| {
        let y = &targets[t];
        let mut rng = SplitMix64::stream(seed, t as u64);
        let nearest = pool
            .iter()
            .copied()
            .min_by(|&a, &b| {
                crate::point::distance(&imgs[a], y).total_cmp(&crate::point::distance(&imgs[b], y)).then(a.cmp(&b))
            })
            .expect("nonempty pool");
        let mut starts = vec![interior_samples[nearest].coords().to_vec(), spec.basepoint.coords().to_vec()];
        while starts.len() < NEWTON_STARTS {
            starts.push(interior_samples[rng.below(interior_samples.len())].coords().to_vec());
        }
        let mut hole = None;
        let mut any_converged = false;
        for s in &starts {
            match newton(spec, s, y) {
                NewtonOutcome::Converged(z) => {
                    any_converged = true;
                    if !spec.domain.contains_coords(&z) {
                        hole.get_or_insert_with(|| "preimage lies outside the domain".to_string());
                        continue;
                    }
                    let Some(j) = jacobian(spec, &z) else { continue };
                    let smin = j.singular_values().iter().copied().fold(f64::INFINITY, f64::min);
                    let reach = if smin > 0.0 { cell_radius / smin } else { f64::INFINITY };
                    let ex = spec.domain.excluded_distance(&z);
                    if ex > reach {
                        return TargetOutcome::Covered;
                    }
                    hole = Some(format!("preimage is {ex:.3e} from the excluded set, cell needs {reach:.3e}"));
                }
                NewtonOutcome::Stalled => {}
            }
        }
        match hole {
            Some(why) if any_converged => TargetOutcome::Hole(why),
            _ => TargetOutcome::Stalled,
        }
    });
    let mut counterexample = None;
    let mut reason = None;
    let mut stalled = 0;
    for (t, o) in outcomes.iter().enumerate() {
        match o {
            TargetOutcome::Covered => {}
            TargetOutcome::Hole(why) => {
                if counterexample.is_none() {
                    counterexample = Some(RealPoint::from_vec_unchecked(targets[t].clone()));
                    reason = Some(why.clone());
                }
            }
            TargetOutcome::Stalled => stalled += 1,
        }
    }
    let status = if counterexample.is_some() {
        InclusionStatus::Excluded
    } else if stalled > 0 {
        InclusionStatus::Heuristic
    } else {
        InclusionStatus::Included
    };
    Ok(InclusionReport {
        r,
        grid,
        targets: targets.len(),
        included: status == InclusionStatus::Included,
        status,
        provenance: if status == InclusionStatus::Heuristic { Provenance::Heuristic } else { Provenance::EmbeddingWitness },
        counterexample,
        reason,
        stalled_targets: stalled,
    })
}

fn moebius(a: Complex64, w: Complex64) -> Complex64 {
    (w - a) / (Complex64::new(1.0, 0.0) - a.conj() * w)
}

/// Identity on the unit ball of C^n, based at the origin.
pub fn identity_embedding(n: usize) -> Result<EmbeddingSpec> {
    EmbeddingSpec::new(format!("identity:n={n}"), |z| z.to_vec(), true, catalog::ball(n)?, RealPoint::origin(n))
}

/// Disc automorphism moving `a` to 0, restricted to the punctured disc.
pub fn moebius_embedding(a: f64) -> Result<EmbeddingSpec> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::OutOfRange(format!("Möbius parameter {a} is not in (0, 1)")));
    }
    let ac = Complex64::new(a, 0.0);
    EmbeddingSpec::new(
        format!("moebius:a={a}"),
        move |z| {
            let v = moebius(ac, Complex64::new(z[0], z[1]));
            vec![v.re, v.im]
        },
        true,
        catalog::punctured_disc(),
        RealPoint::new(vec![a, 0.0])?,
    )
}

/// Bidisc mapped into the ball by `z -> z / sqrt 2`.
pub fn bidisc_scaled_embedding() -> Result<EmbeddingSpec> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    EmbeddingSpec::new("bidisc-scaled", move |z| z.iter().map(|v| v * s).collect(), true, catalog::bidisc(), RealPoint::origin(2))
}

/// Hartogs triangle to the ball through the product of punctured discs:
/// `z -> (m_{a1}(z1), m_{a2}(z2 / z1)) / sqrt 2`, based at the preimage of
/// `(a1, a2)`.
pub fn triangle_product_embedding(a1: f64, a2: f64) -> Result<EmbeddingSpec> {
    for a in [a1, a2] {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::OutOfRange(format!("parameter {a} is not in (0, 1)")));
        }
    }
    let base = catalog::product_to_triangle(&RealPoint::new(vec![a1, 0.0, a2, 0.0])?)?;
    let (c1, c2) = (Complex64::new(a1, 0.0), Complex64::new(a2, 0.0));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    EmbeddingSpec::new(
        format!("triangle-product-scaled:a={a1},{a2}"),
        move |z| {
            let z1 = Complex64::new(z[0], z[1]);
            let z2 = Complex64::new(z[2], z[3]);
            let u = moebius(c1, z1) * s;
            let v = moebius(c2, z2 / z1) * s;
            vec![u.re, u.im, v.re, v.im]
        },
        true,
        catalog::hartogs_triangle(),
        base,
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingEntry {
    pub pattern: &'static str,
    pub domain: &'static str,
    pub description: &'static str,
}

pub fn embedding_entries() -> Vec<EmbeddingEntry> {
    vec![
        EmbeddingEntry { pattern: "identity[:n=N]", domain: "ball:n=N", description: "identity map at the origin" },
        EmbeddingEntry { pattern: "moebius:a=A", domain: "punctured-disc", description: "(w - A)/(1 - A w) at w = A" },
        EmbeddingEntry { pattern: "bidisc-scaled", domain: "bidisc", description: "z / sqrt 2 at the origin" },
        EmbeddingEntry {
            pattern: "triangle-product-scaled[:a=A1,A2]",
            domain: "hartogs-triangle",
            description: "Möbius maps on the product of punctured discs, scaled by 1/sqrt 2",
        },
    ]
}

/// Embedding from its catalog identifier.
pub fn parse_embedding(id: &str) -> Result<EmbeddingSpec> {
    let parts: Vec<&str> = id.trim().split(':').collect();
    let opt = |key: &str| -> Result<Option<&str>> {
        let mut out = None;
        for p in &parts[1..] {
            match p.split_once('=') {
                Some((k, v)) if k == key => out = Some(v),
                _ => return Err(Error::BadParams(format!("unexpected option `{p}` in `{id}`"))),
            }
        }
        Ok(out)
    };
    let num = |v: &str| -> Result<f64> {
        v.parse::<f64>().map_err(|_| Error::BadParams(format!("`{v}` is not a number")))
    };
    match parts[0] {
        "identity" => {
            let n = match opt("n")? {
                Some(v) => v.parse::<usize>().map_err(|_| Error::BadParams(format!("`{v}` is not a dimension")))?,
                None => 2,
            };
            identity_embedding(n)
        }
        "moebius" => moebius_embedding(num(opt("a")?.ok_or_else(|| Error::BadParams("moebius needs a=A".into()))?)?),
        "bidisc-scaled" if parts.len() == 1 => bidisc_scaled_embedding(),
        "triangle-product-scaled" => {
            let (a1, a2) = match opt("a")? {
                None => (0.5, 0.5),
                Some(v) => match v.split_once(',') {
                    Some((x, y)) => (num(x)?, num(y)?),
                    None => (num(v)?, num(v)?),
                },
            };
            triangle_product_embedding(a1, a2)
        }
        _ => Err(Error::UnknownEmbedding(id.to_string())),
    }
}
