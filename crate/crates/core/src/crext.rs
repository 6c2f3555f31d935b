//! Slices `γ(z) = {ζ : ρ(z, ζ) = 0}` of a hypersurface over base points
//! `z ∈ ℂⁿ⁻¹`, and contour integrals of boundary data over them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::{ser_points, Hypersurface};
use crate::poly::{NumPoly, NumRational, RationalFn, Slot};
use crate::trace::{polar_curve, winding_number};

#[derive(Clone, Debug)]
pub struct SliceParams {
    pub nodes: usize,
    /// Pole of the polar parametrization; default `0`.
    pub center: Complex64,
    pub r_max: f64,
    pub marches: usize,
    pub tol_curve: f64,
}

impl Default for SliceParams {
    fn default() -> Self {
        SliceParams { nodes: 256, center: Complex64::new(0.0, 0.0), r_max: 4.0, marches: 200, tol_curve: 1e-10 }
    }
}

/// A slice curve sampled at equally spaced polar angles.
#[derive(Clone, Debug, Serialize)]
pub struct SliceCurve {
    #[serde(serialize_with = "ser_points")]
    pub base: Vec<Complex64>,
    #[serde(skip)]
    pub samples: Vec<Complex64>,
    /// `dζ/dθ` at the samples.
    #[serde(skip)]
    pub tangents: Vec<Complex64>,
    pub nodes: usize,
    pub closed: bool,
    pub degenerate: bool,
    /// Largest gap between consecutive samples.
    pub spacing: f64,
    pub residual: f64,
}

struct SliceFn {
    rho: NumPoly,
    drho: NumPoly,
    base: Vec<Complex64>,
}

impl SliceFn {
    fn new(h: &Hypersurface, base: &[Complex64]) -> Result<Self> {
        let n = h.dim();
        if base.len() + 1 != n {
            return Err(Error::DimensionMismatch { expected: n - 1, found: base.len() });
        }
        Ok(SliceFn {
            rho: NumPoly::from_poly(h.rho().poly()),
            drho: NumPoly::from_poly(h.rho().diff(Slot::Z(n - 1)).poly()),
            base: base.to_vec(),
        })
    }

    fn lift(&self, zeta: Complex64) -> Vec<Complex64> {
        let z: Vec<Complex64> = self.base.iter().copied().chain([zeta]).collect();
        z.iter().copied().chain(z.iter().map(|c| c.conj())).collect()
    }

    fn value(&self, zeta: Complex64) -> f64 {
        self.rho.eval(&self.lift(zeta)).re
    }

    /// `φ_x + i φ_y`.
    fn grad(&self, zeta: Complex64) -> Complex64 {
        2.0 * self.drho.eval(&self.lift(zeta)).conj()
    }
}

/// Traces `γ(z)` as a polar graph about `params.center`. A slice with no
/// crossing whose defining function vanishes at the center is reported as
/// degenerate (a single point).
pub fn trace_slice(h: &Hypersurface, base: &[Complex64], params: &SliceParams) -> Result<SliceCurve> {
    let sf = SliceFn::new(h, base)?;
    let n = params.nodes.max(8);
    let c = params.center;
    let phi = |zeta: Complex64| sf.value(zeta);
    let Some(radii) = polar_curve(&phi, c, n, params.r_max, params.marches) else {
        if sf.value(c).abs() <= params.tol_curve * h.scale() {
            return Ok(SliceCurve {
                base: base.to_vec(),
                samples: vec![c],
                tangents: vec![Complex64::new(0.0, 0.0)],
                nodes: 1,
                closed: true,
                degenerate: true,
                spacing: 0.0,
                residual: sf.value(c).abs(),
            });
        }
        return Err(Error::Numeric(format!("slice over {base:?} has no closed polar curve in the window")));
    };
    let mut samples = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    for (k, r) in radii.iter().enumerate() {
        let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        let zeta = c + e * r;
        let g = sf.grad(zeta);
        let phi_r = (g * e.conj()).re;
        let phi_t = (g * (Complex64::i() * e * r).conj()).re;
        if phi_r == 0.0 {
            return Err(Error::Numeric("slice curve is not a polar graph".into()));
        }
        let dr = -phi_t / phi_r;
        samples.push(zeta);
        tangents.push(Complex64::new(dr, *r) * e);
    }
    let spacing = (0..n).map(|k| (samples[(k + 1) % n] - samples[k]).norm()).fold(0.0, f64::max);
    let residual = samples.iter().map(|z| sf.value(*z).abs()).fold(0.0, f64::max);
    Ok(SliceCurve { base: base.to_vec(), samples, tangents, nodes: n, closed: true, degenerate: false, spacing, residual })
}

/// Boundary data `f(z, z̄)` on the hypersurface.
pub struct BoundaryFn {
    f: NumRational,
    dim: usize,
}

impl BoundaryFn {
    pub fn new(f: &RationalFn) -> Self {
        BoundaryFn { f: f.numeric(), dim: f.dim() }
    }

    fn at(&self, base: &[Complex64], zeta: Complex64) -> Result<Complex64> {
        let z: Vec<Complex64> = base.iter().copied().chain([zeta]).collect();
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: z.len() });
        }
        self.f.eval(&z).ok_or_else(|| Error::Numeric(format!("boundary function has a pole at {z:?}")))
    }
}

fn quadrature(curve: &SliceCurve, g: impl Fn(Complex64) -> Result<Complex64>) -> Result<Complex64> {
    let mut s = Complex64::new(0.0, 0.0);
    for (z, t) in curve.samples.iter().zip(&curve.tangents) {
        s += g(*z)? * t;
    }
    Ok(s * (2.0 * PI / curve.nodes as f64))
}

/// `(1/2πi) ∫ f(z, ζ) dζ / (ζ − w)` by the trapezoid rule.
pub fn cauchy_transform(f: &BoundaryFn, curve: &SliceCurve, w: Complex64) -> Result<Complex64> {
    if !curve.closed || curve.degenerate {
        return Err(Error::InvalidInput("the slice curve is not a closed curve".into()));
    }
    if winding_number(&curve.samples, w) != 1 {
        return Err(Error::InvalidInput(format!("{w} is not inside the slice curve")));
    }
    let dist = curve.samples.iter().map(|z| (z - w).norm()).fold(f64::INFINITY, f64::min);
    if dist <= 2.0 * curve.spacing {
        return Err(Error::InvalidInput(format!("{w} is within two sample spacings of the curve")));
    }
    let s = quadrature(curve, |z| Ok(f.at(&curve.base, z)? / (z - w)))?;
    Ok(s / (2.0 * PI * Complex64::i()))
}

/// `μ_k = ∫ ζ^k f(z, ζ) dζ`, `k = 0..=k_max`. Zero on a degenerate slice.
pub fn moments(f: &BoundaryFn, curve: &SliceCurve, k_max: usize) -> Result<Vec<Complex64>> {
    if !curve.closed {
        return Err(Error::InvalidInput("the slice curve is open".into()));
    }
    if curve.degenerate {
        return Ok(vec![Complex64::new(0.0, 0.0); k_max + 1]);
    }
    (0..=k_max).map(|k| quadrature(curve, |z| Ok(z.powu(k as u32) * f.at(&curve.base, z)?))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    #[serde(serialize_with = "ser_points")]
    pub base: Vec<Complex64>,
    pub degenerate: bool,
    #[serde(serialize_with = "ser_points")]
    pub mu: Vec<Complex64>,
    pub max_abs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentTable {
    pub k_max: usize,
    pub rows: Vec<MomentRow>,
}

impl MomentTable {
    /// `re z, im z, k, re mu, im mu` rows (last base coordinate).
    pub fn csv_rows(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.rows {
            let z = r.base.last().copied().unwrap_or_default();
            for (k, m) in r.mu.iter().enumerate() {
                out.push(format!("{},{},{},{},{}", z.re, z.im, k, m.re, m.im));
            }
        }
        out
    }
}

/// Moments over every base point (in parallel, ordered as given).
pub fn moment_table(
    h: &Hypersurface,
    f: &BoundaryFn,
    bases: &[Vec<Complex64>],
    k_max: usize,
    params: &SliceParams,
) -> Result<MomentTable> {
    let rows: Result<Vec<MomentRow>> = bases
        .par_iter()
        .map(|b| {
            let curve = trace_slice(h, b, params)?;
            let mu = moments(f, &curve, k_max)?;
            let max_abs = mu.iter().map(|m| m.norm()).fold(0.0, f64::max);
            Ok(MomentRow { base: b.clone(), degenerate: curve.degenerate, mu, max_abs })
        })
        .collect();
    Ok(MomentTable { k_max, rows: rows? })
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Extendability {
    MomentsVanish,
    Obstructed {
        #[serde(serialize_with = "ser_points")]
        base: Vec<Complex64>,
        k: usize,
        value: [f64; 2],
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionValue {
    #[serde(serialize_with = "ser_points")]
    pub base: Vec<Complex64>,
    pub w: [f64; 2],
    pub value: [f64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendabilityReport {
    pub table: MomentTable,
    pub tol: f64,
    pub result: Extendability,
    pub extension: Vec<ExtensionValue>,
    /// The set of bases is taken to be a uniqueness set; this is not checked.
    pub assumes_uniqueness_set: bool,
}

/// Moment test over `bases`; when every moment is below `tol` the Cauchy
/// transform is evaluated on an `m × m` grid inside each slice, clipped to
/// half the distance from the pole to the curve.
pub fn extendability_report(
    h: &Hypersurface,
    f: &BoundaryFn,
    bases: &[Vec<Complex64>],
    k_max: usize,
    tol: f64,
    grid: usize,
    params: &SliceParams,
) -> Result<ExtendabilityReport> {
    let table = moment_table(h, f, bases, k_max, params)?;
    let mut result = Extendability::MomentsVanish;
    'outer: for r in &table.rows {
        for (k, m) in r.mu.iter().enumerate() {
            if m.norm() > tol {
                result = Extendability::Obstructed { base: r.base.clone(), k, value: [m.re, m.im] };
                break 'outer;
            }
        }
    }
    let mut extension = Vec::new();
    if matches!(result, Extendability::MomentsVanish) && grid > 0 {
        for b in bases {
            let curve = trace_slice(h, b, params)?;
            if curve.degenerate {
                continue;
            }
            let reach = curve.samples.iter().map(|z| (z - params.center).norm()).fold(f64::INFINITY, f64::min) * 0.5;
            for i in 0..grid {
                for j in 0..grid {
                    let t = |k: usize| if grid == 1 { 0.0 } else { -reach + 2.0 * reach * k as f64 / (grid - 1) as f64 };
                    let w = params.center + Complex64::new(t(i), t(j));
                    let v = cauchy_transform(f, &curve, w)?;
                    extension.push(ExtensionValue { base: b.clone(), w: [w.re, w.im], value: [v.re, v.im] });
                }
            }
        }
    }
    Ok(ExtendabilityReport { table, tol, result, extension, assumes_uniqueness_set: true })
}

/// Largest `|∂f/∂z̄|` over interior nodes of a square grid with values
/// `values[i][j] = f(z0 + i h + j h i)`. Fourth-order central differences
/// when the grid has at least 5 nodes per side, second-order otherwise.
pub fn holomorphy_check(values: &[Vec<Complex64>], h: f64) -> Result<f64> {
    let m = values.len();
    if m < 3 || values.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidInput("holomorphy check needs a square grid of at least 3 x 3".into()));
    }
    let wide = m >= 5;
    let lo = if wide { 2 } else { 1 };
    let mut best = 0.0f64;
    for i in lo..m - lo {
        for j in lo..m - lo {
            let (dx, dy) = if wide {
                (
                    (-values[i + 2][j] + 8.0 * values[i + 1][j] - 8.0 * values[i - 1][j] + values[i - 2][j]) / (12.0 * h),
                    (-values[i][j + 2] + 8.0 * values[i][j + 1] - 8.0 * values[i][j - 1] + values[i][j - 2]) / (12.0 * h),
                )
            } else {
                ((values[i + 1][j] - values[i - 1][j]) / (2.0 * h), (values[i][j + 1] - values[i][j - 1]) / (2.0 * h))
            };
            best = best.max(((dx + Complex64::i() * dy) / 2.0).norm());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parse::parse_function;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bf(text: &str) -> BoundaryFn {
        BoundaryFn::new(&parse_function(text, Some(2)).unwrap())
    }

    #[test]
    fn slices() {
        let cone = fixtures::cone();
        let s = trace_slice(&cone, &[c(1.0, 0.0)], &SliceParams::default()).unwrap();
        assert_eq!(s.nodes, 256);
        assert!(s.samples.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let sphere = fixtures::sphere();
        let s = trace_slice(&sphere, &[c(0.6, 0.0)], &SliceParams::default()).unwrap();
        assert!(s.samples.iter().all(|z| (z.norm() - 0.8).abs() < 1e-12));
        let s = trace_slice(&sphere, &[c(1.0, 0.0)], &SliceParams::default()).unwrap();
        assert!(s.degenerate);
        assert!(trace_slice(&sphere, &[c(2.0, 0.0)], &SliceParams::default()).is_err());
        assert!(moments(&bf("z2"), &s, 3).unwrap().iter().all(|m| m.norm() == 0.0));
    }

    #[test]
    fn cauchy_reproduces_holomorphic_data() {
        let cone = fixtures::cone();
        let s = trace_slice(&cone, &[c(1.0, 0.0)], &SliceParams::default()).unwrap();
        let w = c(0.5, 0.0);
        assert!((cauchy_transform(&bf("z2^2"), &s, w).unwrap() - 0.25).norm() < 1e-12);
        assert!((cauchy_transform(&bf("z1^3/z2 + z2^3/z1"), &s, w).unwrap() - 0.125).norm() < 1e-12);
        assert!((cauchy_transform(&bf("1"), &s, c(0.1, -0.3)).unwrap() - 1.0).norm() < 1e-12);
        assert!(cauchy_transform(&bf("1"), &s, c(1.5, 0.0)).is_err());
        assert!(cauchy_transform(&bf("1"), &s, c(0.999, 0.0)).is_err());
    }

    #[test]
    fn moment_oracle_and_rotation_invariance() {
        let cone = fixtures::cone();
        let f = bf("z1^3/z2 + z2^3/z1");
        for z in [c(1.0, 0.0), c(1.0, 0.1)] {
            let s = trace_slice(&cone, &[z], &SliceParams::default()).unwrap();
            let mu = moments(&f, &s, 5).unwrap();
            let expect = 2.0 * PI * Complex64::i() * z.powu(3);
            assert!((mu[0] - expect).norm() < 1e-8 * z.norm().powi(3));
            assert!(mu[1..].iter().all(|m| m.norm() < 1e-10));
            let mut r = s.clone();
            r.samples.rotate_left(37);
            r.tangents.rotate_left(37);
            let mu2 = moments(&f, &r, 5).unwrap();
            assert!(mu.iter().zip(&mu2).all(|(a, b)| (a - b).norm() < 1e-12));
        }
    }

    #[test]
    fn trapezoid_converges_geometrically() {
        let cone = fixtures::cone();
        let f = bf("1/(z2 - 6/5)");
        let errs: Vec<f64> = [16usize, 32, 64, 128]
            .iter()
            .map(|&n| {
                let s = trace_slice(&cone, &[c(1.0, 0.0)], &SliceParams { nodes: n, ..Default::default() }).unwrap();
                moments(&f, &s, 0).unwrap()[0].norm()
            })
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0] * 0.1 || w[1] < 1e-14), "{errs:?}");
    }

    #[test]
    fn reports() {
        let cone = fixtures::cone();
        let bases: Vec<Vec<Complex64>> = [c(0.5, 0.0), c(0.8, 0.0), c(1.0, 0.0), c(1.0, 0.1)].iter().map(|z| vec![*z]).collect();
        let r = extendability_report(&cone, &bf("z1^3/z2 + z2^3/z1"), &bases, 5, 1e-8, 3, &SliceParams::default()).unwrap();
        assert!(matches!(r.result, Extendability::Obstructed { k: 0, .. }));
        assert!(r.extension.is_empty());
        let r = extendability_report(&cone, &bf("z2^2"), &bases, 5, 1e-10, 5, &SliceParams::default()).unwrap();
        assert!(matches!(r.result, Extendability::MomentsVanish));
        assert_eq!(r.extension.len(), 4 * 25);
        for e in &r.extension {
            let w = c(e.w[0], e.w[1]);
            assert!((c(e.value[0], e.value[1]) - w * w).norm() < 1e-10);
        }
        let sphere = fixtures::sphere();
        let sb: Vec<Vec<Complex64>> = [c(0.2, 0.0), c(0.6, 0.1), c(1.0, 0.0)].iter().map(|z| vec![*z]).collect();
        let r = extendability_report(&sphere, &bf("z2"), &sb, 4, 1e-10, 3, &SliceParams::default()).unwrap();
        assert!(matches!(r.result, Extendability::MomentsVanish));
        assert!(r.table.rows[2].degenerate);
        assert!(r.extension.iter().all(|e| (e.value[0] - e.w[0]).abs() < 1e-10 && (e.value[1] - e.w[1]).abs() < 1e-10));
    }

    #[test]
    fn holomorphy() {
        let grid = |g: &dyn Fn(Complex64) -> Complex64, m: usize| -> Vec<Vec<Complex64>> {
            (0..m).map(|i| (0..m).map(|j| g(c(1.0 + 0.05 * i as f64, 0.05 * j as f64))).collect()).collect()
        };
        let cube = |z: Complex64| 2.0 * PI * Complex64::i() * z.powu(3);
        assert!(holomorphy_check(&grid(&cube, 9), 0.05).unwrap() < 1e-6);
        assert!((holomorphy_check(&grid(&|z| z.conj(), 9), 0.05).unwrap() - 1.0).abs() < 1e-12);
        assert!((holomorphy_check(&grid(&|z| z.conj(), 3), 0.05).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(holomorphy_check(&grid(&|_| c(2.0, 1.0), 4), 0.05).unwrap(), 0.0);
        assert!(holomorphy_check(&grid(&cube, 2), 0.05).is_err());
    }
}
