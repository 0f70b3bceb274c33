use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of C^n stored as 2n real coordinates `(x1, y1, ..., xn, yn)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RealPoint {
    coords: Vec<f64>,
}

impl RealPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::ShapeMismatch(format!(
                "expected an even, nonzero number of real coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(x) = coords.iter().find(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("coordinate {x}")));
        }
        Ok(Self { coords })
    }

    pub fn origin(n: usize) -> Self {
        Self { coords: vec![0.0; 2 * n] }
    }

    pub fn from_complex(z: &[Complex64]) -> Result<Self> {
        Self::new(z.iter().flat_map(|c| [c.re, c.im]).collect())
    }

    /// Unchecked constructor for coordinates produced by internal arithmetic.
    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.len().is_multiple_of(2));
        Self { coords }
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn dim_real(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn z(&self, j: usize) -> Complex64 {
        Complex64::new(self.coords[2 * j], self.coords[2 * j + 1])
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        (0..self.n()).map(|j| self.z(j)).collect()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }

    pub fn distance(&self, other: &RealPoint) -> f64 {
        distance(&self.coords, &other.coords)
    }

    /// `self + t * direction`.
    pub fn offset(&self, direction: &[f64], t: f64) -> RealPoint {
        RealPoint::from_vec_unchecked(
            self.coords.iter().zip(direction).map(|(x, d)| x + t * d).collect(),
        )
    }
}

impl TryFrom<Vec<f64>> for RealPoint {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        RealPoint::new(v)
    }
}

impl From<RealPoint> for Vec<f64> {
    fn from(p: RealPoint) -> Vec<f64> {
        p.coords
    }
}

impl AsRef<[f64]> for RealPoint {
    fn as_ref(&self) -> &[f64] {
        &self.coords
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(RealPoint::new(vec![1.0]).is_err());
        assert!(RealPoint::new(vec![]).is_err());
        assert!(RealPoint::new(vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn complex_layout() {
        let p = RealPoint::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(p.n(), 2);
        assert_eq!(p.z(1), Complex64::new(3.0, 4.0));
        let q = RealPoint::from_complex(&p.to_complex()).unwrap();
        assert_eq!(p, q);
    }
}
