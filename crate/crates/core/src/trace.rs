//! Tracing closed level curves `{φ = 0}` of real functions on ℂ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `φ(ζ)` and its gradient `φ_x + i φ_y`, or `None` where undefined.
pub type Level<'a> = dyn Fn(Complex64) -> Option<(f64, Complex64)> + Sync + 'a;

#[derive(Clone, Debug)]
pub struct TraceParams {
    pub step: f64,
    pub tol: f64,
    pub max_steps: usize,
}

/// Newton correction along the gradient.
pub fn correct(phi: &Level, mut z: Complex64, tol: f64) -> Option<Complex64> {
    for _ in 0..40 {
        let (v, g) = phi(z)?;
        if v.abs() <= tol {
            return Some(z);
        }
        let g2 = g.norm_sqr();
        if g2 == 0.0 {
            return None;
        }
        z -= g * (v / g2);
    }
    let (v, _) = phi(z)?;
    (v.abs() <= tol * 10.0).then_some(z)
}

/// Predictor–corrector continuation from a point near the curve until it
/// returns to the start. The step is halved when a correction fails or
/// turns too sharply. The returned polyline is closed: its last point is
/// within one step of the first.
pub fn trace_closed(phi: &Level, start: Complex64, params: &TraceParams) -> Result<Vec<Complex64>> {
    let z0 = correct(phi, start, params.tol).ok_or_else(|| Error::Numeric("no curve point near start".into()))?;
    let mut pts = vec![z0];
    let mut z = z0;
    let mut h = params.step;
    let mut travelled = 0.0;
    let tangent = |z: Complex64| -> Option<Complex64> {
        let (_, g) = phi(z)?;
        let n = g.norm();
        (n > 0.0).then(|| Complex64::i() * g / n)
    };
    let mut dir = tangent(z0).ok_or_else(|| Error::Numeric("singular start".into()))?;
    for _ in 0..params.max_steps {
        let mut accepted = None;
        while h >= params.step * 1e-4 {
            let pred = z + dir * h;
            if let Some(c) = correct(phi, pred, params.tol) {
                let d = c - z;
                let cos = (d.conj() * dir).re / d.norm().max(f64::MIN_POSITIVE);
                if d.norm() < 2.0 * h && cos > 0.9 {
                    accepted = Some(c);
                    break;
                }
            }
            h *= 0.5;
        }
        let c = accepted.ok_or_else(|| Error::Numeric("continuation stalled".into()))?;
        travelled += (c - z).norm();
        z = c;
        if let Some(t) = tangent(z) {
            // keep orientation
            dir = if (t.conj() * dir).re >= 0.0 { t } else { -t };
        }
        if travelled > 4.0 * params.step && (z - z0).norm() < 0.5 * params.step {
            return Ok(pts);
        }
        if travelled > 4.0 * params.step && (z - z0).norm() < h {
            pts.push(z);
            return Ok(pts);
        }
        pts.push(z);
        h = (h * 1.5).min(params.step);
    }
    Err(Error::Numeric("curve did not close".into()))
}

/// First zero of `φ` along the ray `center + r e^{iθ}`, `0 < r ≤ r_max`,
/// refined by bisection to machine precision.
pub fn ray_crossing(phi: &(dyn Fn(Complex64) -> f64 + Sync), center: Complex64, theta: f64, r_max: f64, marches: usize) -> Option<f64> {
    let e = Complex64::from_polar(1.0, theta);
    let f = |r: f64| phi(center + e * r);
    let f0 = f(0.0);
    let mut lo = 0.0;
    for k in 1..=marches {
        let r = r_max * k as f64 / marches as f64;
        let v = f(r);
        if v * f0 < 0.0 || v == 0.0 {
            let (mut a, mut b) = (lo, r);
            let fa = f(a);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = f(m);
                if fm * fa > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Some(0.5 * (a + b));
        }
        lo = r;
    }
    None
}

/// Closed curve as a polar graph `r(θ)` about `center` at `n` equally
/// spaced angles. Fails if some ray has no crossing.
pub fn polar_curve(
    phi: &(dyn Fn(Complex64) -> f64 + Sync),
    center: Complex64,
    n: usize,
    r_max: f64,
    marches: usize,
) -> Option<Vec<f64>> {
    (0..n).map(|k| ray_crossing(phi, center, 2.0 * PI * k as f64 / n as f64, r_max, marches)).collect()
}

/// Winding number of a closed polyline around `w`.
pub fn winding_number(curve: &[Complex64], w: Complex64) -> i64 {
    let mut total = 0.0;
    for k in 0..curve.len() {
        let a = curve[k] - w;
        let b = curve[(k + 1) % curve.len()] - w;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}

/// Least-squares circle through points: `(center, radius)`.
pub fn fit_circle(pts: &[Complex64]) -> Option<(Complex64, f64)> {
    use nalgebra::{DMatrix, DVector};
    if pts.len() < 3 {
        return None;
    }
    // shift for conditioning
    let mean: Complex64 = pts.iter().sum::<Complex64>() / pts.len() as f64;
    let a = DMatrix::from_fn(pts.len(), 3, |r, c| {
        let p = pts[r] - mean;
        match c {
            0 => p.re,
            1 => p.im,
            _ => 1.0,
        }
    });
    let b = DVector::from_fn(pts.len(), |r, _| -(pts[r] - mean).norm_sqr());
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    let c = Complex64::new(-sol[0] / 2.0, -sol[1] / 2.0);
    let r2 = c.norm_sqr() - sol[2];
    (r2 > 0.0).then(|| (c + mean, r2.sqrt()))
}

/// Even-odd point-in-polygon test.
pub fn inside_polygon(poly: &[Complex64], p: Complex64) -> bool {
    let mut inside = false;
    let n = poly.len();
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if p.re < x {
                inside = !inside;
            }
        }
    }
    inside
}
