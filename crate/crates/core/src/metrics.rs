//! Kobayashi distance on the unit ball and the boundary distance of the
//! tangent balls `Omega_rho`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::point::RealPoint;

/// Negative radicands above `-SQRT_CLAMP` are rounding noise and become 0.
pub const SQRT_CLAMP: f64 = 1e-14;

/// Poincaré distance from 0 to `x` in the unit disc, `log((1+x)/(1-x))`.
pub fn sigma(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("sigma needs 0 <= x < 1, got {x}")));
    }
    Ok((2.0 * x.atanh()).max(0.0))
}

/// Inverse of [`sigma`], `(e^y - 1)/(e^y + 1)`.
pub fn sigma_inverse(y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::OutOfRange(format!("sigma_inverse needs y >= 0, got {y}")));
    }
    Ok((0.5 * y).tanh())
}

/// Two points of the unit ball of C^n.
#[derive(Debug, Clone, PartialEq)]
pub struct BallPair {
    pub z: RealPoint,
    pub w: RealPoint,
}

impl BallPair {
    pub fn new(z: RealPoint, w: RealPoint) -> Result<Self> {
        if z.n() != w.n() {
            return Err(Error::ShapeMismatch("ball pair points differ in dimension".into()));
        }
        for p in [&z, &w] {
            if !(p.norm() < 1.0) {
                return Err(Error::OutOfRange(format!("point of norm {} is not in the unit ball", p.norm())));
            }
        }
        Ok(Self { z, w })
    }

    pub fn n(&self) -> usize {
        self.z.n()
    }
}

fn hermitian(z: &[f64], w: &[f64]) -> Complex64 {
    // sum z_k conj(w_k)
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..z.len() / 2 {
        let a = Complex64::new(z[2 * k], z[2 * k + 1]);
        let b = Complex64::new(w[2 * k], w[2 * k + 1]);
        acc += a * b.conj();
    }
    acc
}

/// Kobayashi distance of the unit ball, on raw coordinates already known to
/// lie inside the ball.
pub(crate) fn kobayashi_raw(z: &[f64], w: &[f64]) -> f64 {
    let zz: f64 = z.iter().map(|x| x * x).sum();
    let ww: f64 = w.iter().map(|x| x * x).sum();
    let a = (Complex64::new(1.0, 0.0) - hermitian(z, w).conj()).norm();
    // With d = w - z, Q = |d|^2 (1 - |z|^2) + |<d, z>|^2: a sum of
    // nonnegative terms, accurate for nearby pairs.
    let d: Vec<f64> = w.iter().zip(z).map(|(y, x)| y - x).collect();
    let dd: f64 = d.iter().map(|x| x * x).sum();
    let q = dd * (1.0 - zz) + hermitian(&d, z).norm_sqr();
    let s = q.sqrt();
    // (a - s)(a + s) = a^2 - Q = (1 - |z|^2)(1 - |w|^2), which avoids the
    // cancellation in a - s for distant pairs.
    let denom = (1.0 - zz) * (1.0 - ww);
    (2.0 * (a + s).ln() - denom.ln()).max(0.0)
}

/// Kobayashi distance `log((|1 - w.z̄| + √Q)/(|1 - w.z̄| - √Q))` with
/// `Q = |z - w|^2 + |z.w̄|^2 - |z|^2 |w|^2`.
pub fn kobayashi_distance_ball(pair: &BallPair) -> f64 {
    kobayashi_raw(pair.z.coords(), pair.w.coords())
}

/// Closed form is stated for `r > max(1/2, 1 - 2 rho)`.
pub fn in_closed_form_region(r: f64, rho: f64) -> bool {
    rho > 0.0 && rho < 1.0 && r < 1.0 && r > 0.5f64.max(1.0 - 2.0 * rho)
}

/// Whether the minimizer `x = 2 - 1/r` lies on `∂Omega_rho`, i.e.
/// `2 - 1/r >= 1 - 2 rho`. Inside the stated region this fails on the sliver
/// `max(1/2, 1 - 2 rho) < r < 1/(1 + 2 rho)`, where the closed form
/// underestimates the true distance.
pub fn interior_critical_point_feasible(r: f64, rho: f64) -> bool {
    2.0 - 1.0 / r >= 1.0 - 2.0 * rho
}

/// Kobayashi distance on B^n from `(r, 0, ..., 0)` to the sphere `∂Omega_rho`
/// of radius `rho` centered at `(1 - rho, 0, ..., 0)`.
pub fn geodesic_ball_boundary_distance(r: f64, rho: f64) -> Result<f64> {
    if !in_closed_form_region(r, rho) {
        return Err(Error::OutOfRange(format!(
            "closed form needs 0 < rho < 1 and max(1/2, 1 - 2 rho) < r < 1, got r = {r}, rho = {rho}"
        )));
    }
    let rad = 1.0 - (1.0 + r) * (1.0 - rho) / (2.0 * r);
    let s = if rad < 0.0 && rad > -SQRT_CLAMP { 0.0 } else { rad };
    if s < 0.0 {
        return Err(Error::OutOfRange(format!("negative radicand {rad} at r = {r}, rho = {rho}")));
    }
    sigma(s.sqrt())
}

/// Result of the brute-force minimization over `∂Omega_rho`.
#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub distance: f64,
    pub minimizer: RealPoint,
    pub evaluations: usize,
}

/// Point of `∂Omega_rho ⊂ C^n` with angles `(alpha, beta)` in `[0, π]^2`.
///
/// `z_1 = 1 - rho + rho cos(alpha) + i rho sin(alpha) cos(beta)` and the
/// remaining coordinates carry modulus `rho sin(alpha) sin(beta)`, spread
/// evenly over `n - 1` complex directions with alternating phase.
fn sphere_point(rho: f64, n: usize, alpha: f64, beta: f64, out: &mut [f64]) {
    let (sa, ca) = alpha.sin_cos();
    let (sb, cb) = beta.sin_cos();
    out[0] = 1.0 - rho + rho * ca;
    out[1] = rho * sa * cb;
    let tail = rho * sa * sb / ((n - 1) as f64).sqrt();
    for k in 1..n {
        if k % 2 == 1 {
            out[2 * k] = tail;
            out[2 * k + 1] = 0.0;
        } else {
            out[2 * k] = 0.0;
            out[2 * k + 1] = tail;
        }
    }
}

const ZOOM_LEVELS: usize = 3;

/// Grid minimization of `K((r,0,...,0), ·)` over `∂Omega_rho`.
///
/// Usable for every `0 <= r < 1`, including outside the closed-form region.
///
/// `grid` is the number of points per level, laid out as a square over the
/// angles `(alpha, beta)` of the sphere; two further zoom levels re-grid a
/// neighborhood of two cells around the best point. The pole `(1, 0, ..., 0)`,
/// which sits on `∂B^n`, is skipped.
pub fn numerical_boundary_distance_oracle(r: f64, rho: f64, n: usize, grid: usize) -> Result<OracleResult> {
    numerical_boundary_distance_oracle_with(r, rho, n, grid, Strategy::default())
}

pub fn numerical_boundary_distance_oracle_with(
    r: f64,
    rho: f64,
    n: usize,
    grid: usize,
    strategy: Strategy,
) -> Result<OracleResult> {
    if !(rho > 0.0 && rho < 1.0 && (0.0..1.0).contains(&r)) {
        return Err(Error::OutOfRange(format!("oracle needs 0 < rho < 1 and 0 <= r < 1, got r = {r}, rho = {rho}")));
    }
    if n < 2 {
        return Err(Error::OutOfRange("the geodesic-ball comparison needs n >= 2".into()));
    }
    if grid < 1000 {
        return Err(Error::OutOfRange(format!("grid {grid} is below the minimum of 1000")));
    }
    let side = (grid as f64).sqrt().floor() as usize;
    let center = {
        let mut c = vec![0.0; 2 * n];
        c[0] = r;
        c
    };
    let pi = std::f64::consts::PI;
    let (mut a_lo, mut a_hi, mut b_lo, mut b_hi) = (0.0, pi, 0.0, pi);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let mut evaluations = 0;
    for _ in 0..ZOOM_LEVELS {
        let da = (a_hi - a_lo) / (side - 1) as f64;
        let db = (b_hi - b_lo) / (side - 1) as f64;
        let rows = exec::map_range(strategy, side, |i| {
            let alpha = a_lo + da * i as f64;
            let mut z = vec![0.0; 2 * n];
            let mut row_best = (f64::INFINITY, alpha, 0.0);
            for j in 0..side {
                let beta = b_lo + db * j as f64;
                sphere_point(rho, n, alpha, beta, &mut z);
                let zz: f64 = z.iter().map(|x| x * x).sum();
                if zz >= 1.0 - 1e-15 {
                    continue;
                }
                let k = kobayashi_raw(&center, &z);
                if k < row_best.0 {
                    row_best = (k, alpha, beta);
                }
            }
            row_best
        });
        evaluations += side * side;
        for rb in rows {
            if rb.0 < best.0 {
                best = rb;
            }
        }
        a_lo = (best.1 - 2.0 * da).max(0.0);
        a_hi = (best.1 + 2.0 * da).min(pi);
        b_lo = (best.2 - 2.0 * db).max(0.0);
        b_hi = (best.2 + 2.0 * db).min(pi);
    }
    let mut z = vec![0.0; 2 * n];
    sphere_point(rho, n, best.1, best.2, &mut z);
    Ok(OracleResult { distance: best.0, minimizer: RealPoint::from_vec_unchecked(z), evaluations })
}
