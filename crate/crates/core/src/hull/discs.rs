//! Analytic discs attached to `Γ` cut out of translated Segre varieties
//! `S_ε = {ρ(z, w̄0) = ε}` through a dicritical origin.

use std::sync::Mutex;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::Hypersurface;
use crate::poly::{GaussianRational, NumPoly};
use crate::trace::{fit_circle, inside_polygon, ray_crossing, trace_closed, TraceParams};

#[derive(Clone, Debug, Serialize)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

/// A holomorphic disc in ℂ² sampled on its boundary and interior.
#[derive(Clone, Debug, Serialize)]
pub struct AnalyticDisc {
    pub label: String,
    /// `ε` or `δ`.
    pub param: f64,
    /// Index of the coordinate used as disc parameter, if any.
    pub chart: Option<usize>,
    #[serde(skip)]
    pub boundary_chart: Vec<Complex64>,
    #[serde(skip)]
    pub boundary: Vec<[Complex64; 2]>,
    #[serde(skip)]
    pub interior: Vec<[Complex64; 2]>,
    pub boundary_samples: usize,
    pub interior_samples: usize,
    pub boundary_residual: f64,
    pub interior_max_rho: f64,
    pub closed: bool,
    pub diameter: f64,
    pub max_abs: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub circle: Option<Circle>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_point: Option<[[f64; 2]; 2]>,
}

impl AnalyticDisc {
    /// `(re z1, im z1, re z2, im z2, tag)` rows.
    pub fn csv_rows(&self) -> Vec<String> {
        let row = |z: &[Complex64; 2], kind: &str| {
            format!("{},{},{},{},{}:{}", z[0].re, z[0].im, z[1].re, z[1].im, self.label, kind)
        };
        self.boundary.iter().map(|z| row(z, "boundary")).chain(self.interior.iter().map(|z| row(z, "interior"))).collect()
    }

    /// Largest distance between boundary samples (subsampled to 512 points).
    pub(crate) fn measure(boundary: &[[Complex64; 2]], interior: &[[Complex64; 2]]) -> (f64, f64) {
        let stride = (boundary.len() / 512).max(1);
        let sub: Vec<&[Complex64; 2]> = boundary.iter().step_by(stride).collect();
        let mut diameter = 0.0f64;
        for (k, a) in sub.iter().enumerate() {
            for b in &sub[k + 1..] {
                diameter = diameter.max(((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt());
            }
        }
        let max_abs = boundary
            .iter()
            .chain(interior)
            .map(|z| (z[0].norm_sqr() + z[1].norm_sqr()).sqrt())
            .fold(0.0, f64::max);
        (diameter, max_abs)
    }
}

#[derive(Clone, Debug)]
pub struct DiscParams {
    /// Coordinate solved from `ρ(z, w̄0) = ε`; the other one is the chart.
    pub solve_for: usize,
    /// Boundary residual tolerance, relative to the scale of `ρ`.
    pub tol_disc: f64,
    pub window: f64,
    pub interior_grid: usize,
}

impl Default for DiscParams {
    fn default() -> Self {
        DiscParams { solve_for: 0, tol_disc: 1e-8, window: 2.0, interior_grid: 15 }
    }
}

struct Slice {
    g: NumPoly,
    dg: [NumPoly; 2],
    rho: NumPoly,
    drho: [NumPoly; 2],
    eps: f64,
    s: usize,
}

impl Slice {
    fn lift(z: &[Complex64; 2]) -> [Complex64; 4] {
        [z[0], z[1], z[0].conj(), z[1].conj()]
    }

    fn point(&self, zeta: Complex64, solved: Complex64) -> [Complex64; 2] {
        let mut z = [zeta, zeta];
        z[self.s] = solved;
        z
    }

    /// Newton in the solved coordinate.
    fn solve(&self, zeta: Complex64, guess: Complex64) -> Option<[Complex64; 2]> {
        let mut z = self.point(zeta, guess);
        for _ in 0..50 {
            let r = self.g.eval(&z) - self.eps;
            if r.norm() <= 1e-15 * (1.0 + self.eps.abs()) {
                return Some(z);
            }
            let d = self.dg[self.s].eval(&z);
            if d.norm() == 0.0 {
                return None;
            }
            z[self.s] -= r / d;
        }
        let r = (self.g.eval(&z) - self.eps).norm();
        (r <= 1e-12 * (1.0 + self.eps.abs())).then_some(z)
    }

    fn rho(&self, z: &[Complex64; 2]) -> f64 {
        self.rho.eval(&Self::lift(z)).re
    }

    /// `φ_x + i φ_y` of `φ(ζ) = ρ(z(ζ))`.
    fn grad(&self, z: &[Complex64; 2]) -> Complex64 {
        let l = Self::lift(z);
        let f = 1 - self.s;
        let dz = -self.dg[f].eval(z) / self.dg[self.s].eval(z);
        let a = self.drho[self.s].eval(&l) * dz + self.drho[f].eval(&l);
        2.0 * a.conj()
    }
}

/// Discs bounded by the components of `S_ε ∩ Γ` around the minimal-norm
/// point of `S_ε`, one per `ε`, in the order given.
pub fn attached_disc_family(
    h: &Hypersurface,
    w0: &[GaussianRational; 2],
    eps: &[f64],
    params: &DiscParams,
) -> Result<Vec<AnalyticDisc>> {
    if h.dim() != 2 {
        return Err(Error::UnsupportedDimension(h.dim()));
    }
    let g = h.rho().freeze_conjugate(w0)?;
    let s = params.solve_for.min(1);
    let rho = h.rho().poly();
    let slice = |e: f64| Slice {
        g: NumPoly::from_poly(&g),
        dg: [NumPoly::from_poly(&g.diff(0)), NumPoly::from_poly(&g.diff(1))],
        rho: NumPoly::from_poly(rho),
        drho: [NumPoly::from_poly(&rho.diff(0)), NumPoly::from_poly(&rho.diff(1))],
        eps: e,
        s,
    };
    eps.par_iter().map(|&e| disc_for(&slice(e), h.scale(), params)).collect()
}

fn disc_for(sl: &Slice, scale: f64, params: &DiscParams) -> Result<AnalyticDisc> {
    let f = 1 - sl.s;
    // minimal-norm point of S_ε reached from the origin
    let mut z = [Complex64::new(0.0, 0.0); 2];
    for _ in 0..60 {
        let r = sl.g.eval(&z) - sl.eps;
        let d = [sl.dg[0].eval(&z), sl.dg[1].eval(&z)];
        let n2 = d[0].norm_sqr() + d[1].norm_sqr();
        if n2 == 0.0 {
            return Err(Error::Numeric("S_eps is singular at the seed".into()));
        }
        z[0] -= r * d[0].conj() / n2;
        z[1] -= r * d[1].conj() / n2;
        if r.norm() < 1e-15 {
            break;
        }
    }
    let seed = z[f];
    let last = Mutex::new(z[sl.s]);
    let value = |zeta: Complex64| -> Option<[Complex64; 2]> {
        let mut guard = last.lock().expect("unpoisoned");
        let p = sl.solve(zeta, *guard)?;
        *guard = p[sl.s];
        Some(p)
    };
    let scalar = |zeta: Complex64| value(zeta).map(|p| sl.rho(&p)).unwrap_or(f64::NAN);
    let hits: Vec<f64> = (0..8)
        .filter_map(|k| ray_crossing(&scalar, seed, k as f64 * std::f64::consts::PI / 4.0, params.window, 400))
        .collect();
    let r_hit = hits.iter().copied().fold(0.0, f64::max);
    let first = hits.first().copied().ok_or_else(|| Error::Numeric("no boundary crossing around the seed".into()))?;
    let level = |zeta: Complex64| value(zeta).map(|p| (sl.rho(&p), sl.grad(&p)));
    let tp = TraceParams { step: r_hit * 0.01, tol: 1e-14 * scale.max(1.0), max_steps: 200_000 };
    let chart = trace_closed(&level, seed + first, &tp)?;
    let boundary: Vec<[Complex64; 2]> = chart.iter().filter_map(|c| value(*c)).collect();
    let boundary_residual = boundary.iter().map(|p| sl.rho(p).abs()).fold(0.0, f64::max);
    if boundary_residual > params.tol_disc * scale {
        return Err(Error::Numeric(format!("boundary residual {boundary_residual:.3e}")));
    }
    // the closing edge is at most one and a half steps long
    let closed = (chart[0] - chart[chart.len() - 1]).norm() <= 1.5 * tp.step;
    let circle = fit_circle(&chart);
    let (lo, hi) = chart.iter().fold(
        (Complex64::new(f64::INFINITY, f64::INFINITY), Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), c| (Complex64::new(lo.re.min(c.re), lo.im.min(c.im)), Complex64::new(hi.re.max(c.re), hi.im.max(c.im))),
    );
    let m = params.interior_grid.max(3);
    let mut interior = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let c = Complex64::new(
                lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / m as f64,
                lo.im + (hi.im - lo.im) * (j as f64 + 0.5) / m as f64,
            );
            if inside_polygon(&chart, c) {
                if let Some(p) = sl.solve(c, z[sl.s]) {
                    interior.push(p);
                }
            }
        }
    }
    let interior_max_rho = interior.iter().map(|p| sl.rho(p).abs()).fold(0.0, f64::max);
    let center_point = circle.and_then(|(c, _)| sl.solve(c, z[sl.s])).map(|p| [[p[0].re, p[0].im], [p[1].re, p[1].im]]);
    let (diameter, max_abs) = AnalyticDisc::measure(&boundary, &interior);
    Ok(AnalyticDisc {
        label: format!("eps={}", sl.eps),
        param: sl.eps,
        chart: Some(f),
        boundary_samples: boundary.len(),
        interior_samples: interior.len(),
        boundary_chart: chart,
        boundary,
        interior,
        boundary_residual,
        interior_max_rho,
        closed,
        diameter,
        max_abs,
        circle: circle.map(|(c, r)| Circle { center: [c.re, c.im], radius: r }),
        center_point,
    })
}
