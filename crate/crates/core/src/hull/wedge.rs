//! Discs in the four wedges between two real hyperplanes, pushed to the
//! branched example by `u ↦ w = ((u1+u2)/2, (u1−u2)/2) ↦ (w1, w2²)`.
//!
//! In `u`-coordinates the hypersurface pulls back to `{Im u1 = 0} ∪ {Im u2 = 0}`.
//! The curve `u2 = −u1 + i c u1² − iδ` cut by the wedge `{Im u1 < 0, Im u2 < 0}`
//! is the lens `|x| < √(δ/c)`, `y₊(x) < y < 0` in the chart `u1 = x + iy`:
//! its upper arc lies on `Im u1 = 0` and its lower arc on `Im u2 = 0`.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::discs::AnalyticDisc;
use crate::poly::NumPoly;

#[derive(Clone, Debug)]
pub struct WedgeParams {
    pub c: f64,
    pub deltas: Vec<f64>,
    /// Real translations `a ∈ [-t, t]²` on a grid with this many nodes per side.
    pub translation_extent: f64,
    pub translation_nodes: usize,
    /// Samples per boundary arc.
    pub arc_samples: usize,
    pub interior_grid: usize,
}

impl Default for WedgeParams {
    fn default() -> Self {
        WedgeParams {
            c: 1.0,
            deltas: vec![0.01, 0.005],
            translation_extent: 0.3,
            translation_nodes: 31,
            arc_samples: 64,
            interior_grid: 8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeDisc {
    pub delta: f64,
    pub signs: [i8; 2],
    pub shift: [f64; 2],
    /// Fraction of lens samples inside `Ω = {y1 + y2 + y1² + y2² < 0}`.
    pub inside_omega: f64,
    pub disc: AnalyticDisc,
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeSummary {
    pub delta: f64,
    pub discs: usize,
    pub max_boundary_residual: f64,
    /// Of the untranslated discs.
    pub max_abs: f64,
    pub diameter: f64,
    /// Lens half-width `√(δ/c)` in the chart.
    pub half_width: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WedgeFamily {
    pub c: f64,
    pub summaries: Vec<WedgeSummary>,
    /// Untranslated discs, four wedges per `δ`.
    pub base: Vec<WedgeDisc>,
    #[serde(skip)]
    pub all: Vec<WedgeDisc>,
}

/// Lower arc `y₊(x)` of the lens.
fn lower(c: f64, delta: f64, x: f64) -> f64 {
    let disc = 1.0 - 4.0 * c * (delta - c * x * x);
    (-1.0 + disc.max(0.0).sqrt()) / (2.0 * c)
}

fn curve_u2(c: f64, delta: f64, u1: Complex64) -> Complex64 {
    -u1 + Complex64::i() * c * u1 * u1 - Complex64::i() * delta
}

/// `(u1, u2) ↦ (w1, w2²)`.
pub fn push_forward(u: [Complex64; 2]) -> [Complex64; 2] {
    let w1 = (u[0] + u[1]) / 2.0;
    let w2 = (u[0] - u[1]) / 2.0;
    [w1, w2 * w2]
}

/// Boundary and interior samples of a disc in ℂ².
pub type DiscSamples = (Vec<[Complex64; 2]>, Vec<[Complex64; 2]>);

/// One lens disc in the `(+,+)` wedge orientation, before signs and shifts:
/// boundary and interior points in `u`-coordinates.
pub fn lens(c: f64, delta: f64, arc: usize, grid: usize) -> Result<DiscSamples> {
    if !(c > 0.0 && c < 2.0) {
        return Err(Error::InvalidInput(format!("c = {c} is outside (0, 2)")));
    }
    if delta <= 0.0 || 4.0 * c * delta > 1.0 {
        return Err(Error::InvalidInput(format!("the curve misses the wedge for delta = {delta}")));
    }
    let half = (delta / c).sqrt();
    let pt = |x: f64, y: f64| {
        let u1 = Complex64::new(x, y);
        [u1, curve_u2(c, delta, u1)]
    };
    let arc = arc.max(2);
    let mut boundary = Vec::with_capacity(2 * arc);
    // upper arc left to right, lower arc right to left
    for k in 0..arc {
        let x = -half + 2.0 * half * k as f64 / arc as f64;
        boundary.push(pt(x, 0.0));
    }
    for k in 0..arc {
        let x = half - 2.0 * half * k as f64 / arc as f64;
        boundary.push(pt(x, lower(c, delta, x)));
    }
    let mut interior = Vec::new();
    for i in 0..grid {
        let x = -half + 2.0 * half * (i as f64 + 0.5) / grid as f64;
        let lo = lower(c, delta, x);
        for j in 0..grid {
            interior.push(pt(x, lo * (j as f64 + 0.5) / grid as f64));
        }
    }
    Ok((boundary, interior))
}

fn brunella_rho() -> NumPoly {
    let h = crate::fixtures::brunella();
    NumPoly::from_poly(h.rho().poly())
}

fn rho_at(rho: &NumPoly, z: &[Complex64; 2]) -> f64 {
    rho.eval(&[z[0], z[1], z[0].conj(), z[1].conj()]).re
}

fn build(
    rho: &NumPoly,
    delta: f64,
    signs: [i8; 2],
    shift: [f64; 2],
    lens: &(Vec<[Complex64; 2]>, Vec<[Complex64; 2]>),
) -> WedgeDisc {
    let map = |u: &[Complex64; 2]| {
        let v = [u[0] * signs[0] as f64 + shift[0], u[1] * signs[1] as f64 + shift[1]];
        push_forward(v)
    };
    let omega = |u: &[Complex64; 2]| {
        let (y1, y2) = (u[0].im, u[1].im);
        y1 + y2 + y1 * y1 + y2 * y2 < 0.0
    };
    let inside = lens.0.iter().chain(&lens.1).filter(|u| omega(u)).count();
    let boundary: Vec<[Complex64; 2]> = lens.0.iter().map(map).collect();
    let interior: Vec<[Complex64; 2]> = lens.1.iter().map(map).collect();
    let boundary_residual = boundary.iter().map(|z| rho_at(rho, z).abs()).fold(0.0, f64::max);
    let interior_max_rho = interior.iter().map(|z| rho_at(rho, z).abs()).fold(0.0, f64::max);
    let (diameter, max_abs) = AnalyticDisc::measure(&boundary, &interior);
    let disc = AnalyticDisc {
        label: format!("delta={delta},signs={}{},shift={},{}", signs[0], signs[1], shift[0], shift[1]),
        param: delta,
        chart: None,
        boundary_chart: lens.0.iter().map(|u| u[0]).collect(),
        boundary_samples: boundary.len(),
        interior_samples: interior.len(),
        boundary,
        interior,
        boundary_residual,
        interior_max_rho,
        closed: true,
        diameter,
        max_abs,
        circle: None,
        center_point: None,
    };
    WedgeDisc { delta, signs, shift, inside_omega: inside as f64 / (lens.0.len() + lens.1.len()) as f64, disc }
}

/// All wedge discs for the given `c` and `δ` values, in all four wedges and
/// over the grid of real translations. Ordered by `δ`, wedge, then shift.
pub fn wedge_disc_family(params: &WedgeParams) -> Result<WedgeFamily> {
    let rho = brunella_rho();
    let signs = [[1i8, 1i8], [1, -1], [-1, 1], [-1, -1]];
    let m = params.translation_nodes.max(1);
    let shifts: Vec<[f64; 2]> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| {
            let at = |k: usize| {
                if m == 1 {
                    0.0
                } else {
                    -params.translation_extent + 2.0 * params.translation_extent * k as f64 / (m - 1) as f64
                }
            };
            [at(i), at(j)]
        })
        .collect();
    let mut all = Vec::new();
    let mut base = Vec::new();
    let mut summaries = Vec::new();
    for &delta in &params.deltas {
        let l = lens(params.c, delta, params.arc_samples, params.interior_grid)?;
        let jobs: Vec<([i8; 2], [f64; 2])> =
            signs.iter().flat_map(|s| shifts.iter().map(move |a| (*s, *a))).collect();
        let discs: Vec<WedgeDisc> = jobs.par_iter().map(|(s, a)| build(&rho, delta, *s, *a, &l)).collect();
        let here: Vec<WedgeDisc> = signs.iter().map(|s| build(&rho, delta, *s, [0.0, 0.0], &l)).collect();
        summaries.push(WedgeSummary {
            delta,
            discs: discs.len(),
            max_boundary_residual: discs.iter().map(|d| d.disc.boundary_residual).fold(0.0, f64::max),
            max_abs: here.iter().map(|d| d.disc.max_abs).fold(0.0, f64::max),
            diameter: here.iter().map(|d| d.disc.diameter).fold(0.0, f64::max),
            half_width: (delta / params.c).sqrt(),
        });
        base.extend(here);
        all.extend(discs);
    }
    Ok(WedgeFamily { c: params.c, summaries, base, all })
}

#[derive(Clone, Debug)]
pub struct CoverageParams {
    pub ball: f64,
    pub real_nodes: usize,
    pub imag_nodes: usize,
    pub distance: f64,
}

impl Default for CoverageParams {
    fn default() -> Self {
        CoverageParams { ball: 0.05, real_nodes: 41, imag_nodes: 5, distance: 0.01 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Coverage {
    pub grid_points: usize,
    pub covered: usize,
    pub fraction: f64,
    pub real_slice_points: usize,
    pub real_slice_fraction: f64,
    /// Largest `|Im z1|`, `|Im z2|` over disc samples inside the ball.
    pub max_imag: [f64; 2],
}

/// Fraction of grid points of the ball `B(0, ball)` within `distance` of a
/// disc sample. The grid is `real_nodes²` over `(Re z1, Re z2)` times
/// `imag_nodes²` over `(Im z1, Im z2)`, all in `[-ball, ball]`.
pub fn coverage(family: &WedgeFamily, params: &CoverageParams) -> Coverage {
    let cell = params.distance;
    let key = |z: &[Complex64; 2]| -> [i64; 4] {
        [z[0].re, z[0].im, z[1].re, z[1].im].map(|v| (v / cell).floor() as i64)
    };
    let mut buckets: HashMap<[i64; 4], Vec<[Complex64; 2]>> = HashMap::new();
    let mut max_imag = [0.0f64; 2];
    let reach = params.ball + params.distance;
    for d in &family.all {
        for z in d.disc.boundary.iter().chain(&d.disc.interior) {
            let r = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
            if r > reach {
                continue;
            }
            if r <= params.ball {
                max_imag = [max_imag[0].max(z[0].im.abs()), max_imag[1].max(z[1].im.abs())];
            }
            buckets.entry(key(z)).or_default().push(*z);
        }
    }
    let axis = |n: usize| -> Vec<f64> {
        if n <= 1 {
            vec![0.0]
        } else {
            (0..n).map(|k| -params.ball + 2.0 * params.ball * k as f64 / (n - 1) as f64).collect()
        }
    };
    let re = axis(params.real_nodes);
    let im = axis(params.imag_nodes);
    let mut points = Vec::new();
    for &a in &re {
        for &b in &re {
            for &c in &im {
                for &d in &im {
                    if a * a + b * b + c * c + d * d <= params.ball * params.ball {
                        points.push([Complex64::new(a, c), Complex64::new(b, d)]);
                    }
                }
            }
        }
    }
    let near = |p: &[Complex64; 2]| -> bool {
        let k = key(p);
        for d0 in -1..=1 {
            for d1 in -1..=1 {
                for d2 in -1..=1 {
                    for d3 in -1..=1 {
                        let kk = [k[0] + d0, k[1] + d1, k[2] + d2, k[3] + d3];
                        if let Some(v) = buckets.get(&kk) {
                            if v.iter().any(|z| {
                                ((z[0] - p[0]).norm_sqr() + (z[1] - p[1]).norm_sqr()).sqrt() <= params.distance
                            }) {
                                return true;
                            }
                        }
                    }
                }
            }
        }
        false
    };
    let hits: Vec<bool> = points.par_iter().map(near).collect();
    let covered = hits.iter().filter(|h| **h).count();
    let real: Vec<usize> =
        (0..points.len()).filter(|&k| points[k][0].im == 0.0 && points[k][1].im == 0.0).collect();
    let real_covered = real.iter().filter(|&&k| hits[k]).count();
    Coverage {
        grid_points: points.len(),
        covered,
        fraction: covered as f64 / points.len().max(1) as f64,
        real_slice_points: real.len(),
        real_slice_fraction: real_covered as f64 / real.len().max(1) as f64,
        max_imag,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_boundary_lies_on_the_planes() {
        let (b, i) = lens(1.0, 0.01, 32, 6).unwrap();
        let half = b.len() / 2;
        assert!(b[..half].iter().all(|u| u[0].im == 0.0));
        assert!(b[half..].iter().all(|u| u[1].im.abs() < 1e-15));
        assert!(i.iter().all(|u| u[0].im < 0.0 && u[1].im < 0.0));
        assert!(lens(2.5, 0.01, 8, 2).is_err());
        assert!(lens(1.0, 0.3, 8, 2).is_err());
    }

    #[test]
    fn pushed_discs_lie_on_brunella() {
        let p = WedgeParams { translation_nodes: 3, ..Default::default() };
        let fam = wedge_disc_family(&p).unwrap();
        assert_eq!(fam.all.len(), 2 * 4 * 9);
        for s in &fam.summaries {
            assert!(s.max_boundary_residual < 1e-12, "{s:?}");
        }
        assert!(fam.summaries[1].diameter < fam.summaries[0].diameter);
        assert!(fam.base.iter().all(|d| d.disc.interior_max_rho > 1e-12));
        assert!(fam.base.iter().all(|d| d.inside_omega > 0.95));
    }
}
