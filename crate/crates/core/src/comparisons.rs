//! Two-sided comparison constants between invariant metrics and volume
//! forms, given a lower bound `s` on the squeezing function.
//!
//! Everything here is arithmetic in `(s, n)`; no metric is computed.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Which pair of intrinsic quantities an [`Envelope`] compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    /// Carathéodory against Kobayashi metric.
    MetricCK,
    /// Bergman against Kobayashi metric.
    MetricKB,
    /// Kähler-Einstein against Kobayashi metric.
    MetricKKE,
    /// Any two of the four decreasing volume forms.
    VolumeAny,
    /// Bergman volume against Kobayashi volume.
    VolumeKB,
    /// Kähler-Einstein volume against Kobayashi volume.
    VolumeKKE,
    /// Built from user pinching functions.
    General,
}

impl Relation {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "CK" | "MetricCK" => Relation::MetricCK,
            "KB" | "MetricKB" => Relation::MetricKB,
            "KKE" | "MetricKKE" => Relation::MetricKKE,
            "VolumeAny" | "volume-any" => Relation::VolumeAny,
            "VolumeKB" | "volume-kb" => Relation::VolumeKB,
            "VolumeKKE" | "volume-kke" => Relation::VolumeKKE,
            _ => {
                return Err(Error::BadParams(format!(
                    "unknown relation `{s}`; use CK, KB, KKE, VolumeAny, VolumeKB or VolumeKKE"
                )))
            }
        })
    }
}

/// The four decreasing volume forms sharing the pinching function `r^{-2n}`.
pub const VOLUME_FORMS: [&str; 4] = [
    "Caratheodory volume",
    "Eisenman-Kobayashi volume",
    "volume of the Caratheodory metric",
    "volume of the Kobayashi metric",
];

/// `low * G <= F <= high * G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Envelope {
    pub low: f64,
    pub high: f64,
    pub relation: Relation,
    pub s: f64,
    pub n: usize,
    /// `low <= high`. Fails for the Kähler-Einstein constants in dimension 1
    /// once `s > 1/sqrt 2`.
    pub consistent: bool,
}

impl Envelope {
    fn new(low: f64, high: f64, relation: Relation, s: f64, n: usize) -> Self {
        Self { low, high, relation, s, n, consistent: low <= high }
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::OutOfRange(format!("squeezing value {s} is not in (0, 1]")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange("dimension must be at least 1".into()));
    }
    Ok(())
}

fn check_r(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!("radius {r} is not in (0, 1)")));
    }
    Ok(())
}

/// Pinching function `1/r` of the Carathéodory and Kobayashi metrics.
pub fn pinching_metric(r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(1.0 / r)
}

/// Pinching function `r^{-2n}` of the decreasing volume forms.
pub fn pinching_volume(r: f64, n: usize) -> Result<f64> {
    check_r(r)?;
    check_n(n)?;
    Ok(r.powi(-2 * n as i32))
}

pub fn envelope_caratheodory_kobayashi(s: f64) -> Result<Envelope> {
    check_s(s)?;
    Ok(Envelope::new(s, 1.0, Relation::MetricCK, s, 1))
}

/// Upper Bergman factor `2^{n+2} pi / s^{n+1}`.
fn bergman_high(s: f64, n: usize) -> f64 {
    2f64.powi(n as i32 + 2) * PI / s.powi(n as i32 + 1)
}

pub fn envelope_kobayashi_bergman(s: f64, n: usize) -> Result<Envelope> {
    check_s(s)?;
    check_n(n)?;
    Ok(Envelope::new(s, bergman_high(s, n), Relation::MetricKB, s, n))
}

pub fn envelope_kobayashi_ke(s: f64, n: usize) -> Result<Envelope> {
    check_s(s)?;
    check_n(n)?;
    let nf = n as f64;
    let low = (2.0 / nf).sqrt() * s;
    let high = (nf / (2.0 * s * s)).powf((nf - 1.0) / 2.0);
    Ok(Envelope::new(low, high, Relation::MetricKKE, s, n))
}

pub fn envelope_volume_pair(s: f64, n: usize, which: Relation) -> Result<Envelope> {
    check_s(s)?;
    check_n(n)?;
    let nf = n as f64;
    let s2n = s.powi(2 * n as i32);
    let (low, high) = match which {
        Relation::VolumeAny => (s2n, 1.0 / s2n),
        Relation::VolumeKB => (s2n, bergman_high(s, n).powi(2 * n as i32)),
        Relation::VolumeKKE => ((2.0 / nf).powi(n as i32) * s2n, (nf / (2.0 * s * s)).powf(nf * (nf - 1.0))),
        other => return Err(Error::BadParams(format!("{other:?} is not a volume relation"))),
    };
    Ok(Envelope::new(low, high, which, s, n))
}

/// Any relation by tag.
pub fn envelope(relation: Relation, s: f64, n: usize) -> Result<Envelope> {
    match relation {
        Relation::MetricCK => {
            check_n(n)?;
            envelope_caratheodory_kobayashi(s).map(|e| Envelope { n, ..e })
        }
        Relation::MetricKB => envelope_kobayashi_bergman(s, n),
        Relation::MetricKKE => envelope_kobayashi_ke(s, n),
        Relation::General => Err(Error::BadParams("general envelopes need pinching functions".into())),
        v => envelope_volume_pair(s, n, v),
    }
}

const DECREASING_GRID: usize = 64;

fn check_decreasing(p: &dyn Fn(f64) -> f64) -> Result<()> {
    let mut prev = f64::INFINITY;
    for i in 1..DECREASING_GRID {
        let r = i as f64 / DECREASING_GRID as f64;
        let v = p(r);
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::OutOfRange(format!("pinching function value {v} at r = {r} is not positive")));
        }
        if v > prev {
            return Err(Error::NotDecreasing(r));
        }
        prev = v;
    }
    Ok(())
}

/// `(1 / p_GF(s), p_FG(s))` for positive decreasing pinching functions.
pub fn envelope_general(p_fg: &dyn Fn(f64) -> f64, p_gf: &dyn Fn(f64) -> f64, s: f64) -> Result<Envelope> {
    check_r(s)?;
    check_decreasing(p_fg)?;
    check_decreasing(p_gf)?;
    Ok(Envelope::new(1.0 / p_gf(s), p_fg(s), Relation::General, s, 0))
}
