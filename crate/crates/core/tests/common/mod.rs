#![allow(dead_code)]

use nalgebra::DMatrix;
use squeeze_core::{RealPoint, SplitMix64};

pub fn pt(c: &[f64]) -> RealPoint {
    RealPoint::new(c.to_vec()).unwrap()
}

/// Product of Givens rotations over every coordinate pair with random angles.
pub fn random_orthogonal(d: usize, rng: &mut SplitMix64) -> DMatrix<f64> {
    let mut q = DMatrix::<f64>::identity(d, d);
    for i in 0..d {
        for j in i + 1..d {
            let t = rng.uniform(0.0, std::f64::consts::TAU);
            let (s, c) = t.sin_cos();
            let mut g = DMatrix::<f64>::identity(d, d);
            g[(i, i)] = c;
            g[(j, j)] = c;
            g[(i, j)] = -s;
            g[(j, i)] = s;
            q = g * q;
        }
    }
    q
}

/// Uniform point of the open ball of radius `r` in R^d.
pub fn ball_point(d: usize, r: f64, rng: &mut SplitMix64) -> RealPoint {
    let dir = rng.unit_vector(d);
    let rad = r * rng.next_f64().powf(1.0 / d as f64);
    RealPoint::new(dir.iter().map(|v| v * rad).collect()).unwrap()
}
