//! Real hypersurfaces `Γ = {ρ = 0}`, their complexification and Segre
//! varieties.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parse::parse_expression;
use crate::poly::{BiPoly, GaussianRational, Poly, Slot};
use crate::sampling::{norm, random_in_ball, task_rng, to_complex, to_real, RealPoly, Region};

/// `Γ = ρ⁻¹(0)` for a Hermitian polynomial `ρ`.
#[derive(Clone, Debug)]
pub struct Hypersurface {
    rho: BiPoly,
    real: RealPoly,
}

impl PartialEq for Hypersurface {
    fn eq(&self, other: &Self) -> bool {
        self.rho == other.rho
    }
}

impl Hypersurface {
    pub fn new(rho: BiPoly) -> Result<Self> {
        if rho.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !rho.is_hermitian() {
            return Err(Error::NotHermitian(rho.to_conj_string()));
        }
        let real = RealPoly::new(&rho);
        Ok(Hypersurface { rho, real })
    }

    /// Read a defining function. A global unimodular factor that keeps `ρ`
    /// from being Hermitian is removed; the returned log says so.
    pub fn parse(text: &str) -> Result<(Self, Vec<String>)> {
        let expr = parse_expression(text)?;
        let f = expr.to_rational(expr.dim())?;
        if !f.is_polynomial() {
            return Err(Error::InvalidInput("defining function must be a polynomial".into()));
        }
        let mut log = Vec::new();
        if expr.uses_real_coordinates() {
            log.push("converted x_k, y_k to z_k, ~z_k".to_string());
        }
        let rho = f.num;
        if rho.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (rho, repaired) = hermitian_repair(&rho)?;
        if let Some(mu) = repaired {
            log.push(format!("multiplied by {mu} to make the defining function real"));
        }
        Ok((Hypersurface::new(rho)?, log))
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    pub fn rho(&self) -> &BiPoly {
        &self.rho
    }

    pub fn real(&self) -> &RealPoly {
        &self.real
    }

    pub fn scale(&self) -> f64 {
        self.real.scale()
    }

    /// `ρ(z, w̄)`. The conjugate slots are reinterpreted as `w̄`; only the
    /// printed names change.
    pub fn complexify(&self) -> BiPoly {
        self.rho.clone()
    }

    /// `ρ_c(z, w̄)` with `w̄ := z̄` reproduces `ρ`.
    pub fn diagonal_identity_holds(&self) -> bool {
        let n = self.dim();
        let subs: Vec<(Slot, BiPoly)> = (0..n).map(|k| (Slot::Conj(k), BiPoly::slot(n, Slot::Conj(k)))).collect();
        self.complexify().substitute(&subs).map(|p| p == self.rho).unwrap_or(false)
    }

    /// Value of `ρ` at a point of ℂⁿ.
    pub fn value(&self, z: &[Complex64]) -> f64 {
        self.real.value_c(z)
    }

    pub fn segre(&self, w: &[GaussianRational]) -> Result<SegreVariety> {
        let poly = self.complexify().freeze_conjugate(w)?;
        Ok(SegreVariety {
            center: w.iter().map(GaussianRational::to_complex).collect(),
            degenerate: poly.is_zero(),
            numeric: false,
            text: poly.to_string_with(&crate::poly::z_names(self.dim())),
            exact: Some(poly),
            coefficients: Vec::new(),
        })
    }

    /// Segre variety at a floating center; degeneracy is decided with a
    /// relative tolerance of `1e-12` on the substituted coefficients.
    pub fn segre_numeric(&self, w: &[Complex64]) -> Result<SegreVariety> {
        let n = self.dim();
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: w.len() });
        }
        let mut acc: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (m, c) in self.rho.poly().terms() {
            let mut v = c.to_complex();
            for (wk, e) in w.iter().zip(&m.0[n..]) {
                v *= wk.conj().powu(*e);
            }
            *acc.entry(m.0[..n].to_vec()).or_default() += v;
        }
        let max = acc.values().map(|c| c.norm()).fold(0.0, f64::max);
        let coefficients: Vec<(Vec<u32>, Complex64)> = acc.into_iter().filter(|(_, c)| c.norm() > 0.0).collect();
        Ok(SegreVariety {
            center: w.to_vec(),
            degenerate: max < 1e-12 * self.scale(),
            numeric: true,
            exact: None,
            text: String::new(),
            coefficients,
        })
    }

    /// Numeric form of `z ∈ Q_w ⟺ w ∈ Q_z`: both values small or both large.
    pub fn segre_symmetry_check(&self, z: &[Complex64], w: &[Complex64], tol: f64) -> bool {
        let a = self.rho.eval(z, w).norm() < tol * self.scale();
        let b = self.rho.eval(w, z).norm() < tol * self.scale();
        a == b
    }

    /// Exact form: `ρ_c(w, z̄) = conj(ρ_c(z, w̄))`.
    pub fn segre_symmetry_exact(&self, z: &[GaussianRational], w: &[GaussianRational]) -> bool {
        self.rho.eval_exact(w, z) == self.rho.eval_exact(z, w).conj()
    }

    /// `ρ(z + p, z̄ + p̄)`, moving `p` to the origin.
    pub fn translated(&self, p: &[GaussianRational]) -> Result<Hypersurface> {
        let n = self.dim();
        if p.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: p.len() });
        }
        let mut subs = Vec::with_capacity(2 * n);
        for (k, c) in p.iter().enumerate() {
            subs.push((Slot::Z(k), &BiPoly::slot(n, Slot::Z(k)) + &BiPoly::constant(n, c.clone())));
            subs.push((Slot::Conj(k), &BiPoly::slot(n, Slot::Conj(k)) + &BiPoly::constant(n, c.conj())));
        }
        Hypersurface::new(self.rho.substitute(&subs)?)
    }

    /// `∂ρ/∂x_k` and `∂ρ/∂y_k` as Hermitian polynomials.
    pub fn real_partials(&self) -> Vec<BiPoly> {
        let i = GaussianRational::i();
        (0..self.dim())
            .flat_map(|k| {
                let dz = self.rho.diff(Slot::Z(k));
                let dzb = self.rho.diff(Slot::Conj(k));
                [&dz + &dzb, (&dz - &dzb).scale(&i)]
            })
            .collect()
    }

    /// Candidates for the singular locus: random starts in `region` refined
    /// by Levenberg–Marquardt on `{ρ = 0, ∇ρ = 0}`. Samples are then tested
    /// for regular points of `Γ` nearby; those without are flagged as stick.
    pub fn singular_locus(&self, region: &Region, params: &SingularParams) -> SingularLocusReport {
        let mut system = vec![self.rho.clone()];
        system.extend(self.real_partials());
        let eqs: Vec<RealPoly> = system.iter().map(RealPoly::new).collect();
        let scale = self.scale();
        let accept = |x: Vec<f64>| -> Option<Vec<f64>> {
            let r = self.real.value(&x).abs();
            let g = norm(&self.real.gradient(&x));
            (r < 1e-10 * scale && g < 1e-8 * scale && region.contains(&x)).then_some(x)
        };
        let raw: Vec<Option<Vec<f64>>> = (0..params.starts)
            .into_par_iter()
            .map(|k| {
                use rand::Rng;
                let mut rng = task_rng(params.seed, k as u64);
                let x0 = match region {
                    Region::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| rng.gen_range(*l..=*h)).collect(),
                    Region::Ball { center, radius } => random_in_ball(center, *radius, &mut rng),
                };
                levenberg_marquardt(&eqs, x0, 400).and_then(accept)
            })
            .collect();
        let mut points: Vec<Vec<f64>> = Vec::new();
        for x in raw.into_iter().flatten() {
            if points.iter().all(|p| norm(&p.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>()) > params.dedup) {
                points.push(x);
            }
        }
        let samples = points
            .into_par_iter()
            .enumerate()
            .map(|(k, x)| {
                let mut rng = task_rng(params.seed, (1 << 32) + k as u64);
                let stick = !self.real.changes_sign_near(&x, params.r_stick, params.stick_lines, &mut rng);
                SingularSample {
                    residual: self.real.value(&x).abs(),
                    gradient: norm(&self.real.gradient(&x)),
                    point: x,
                    stick,
                }
            })
            .collect();
        SingularLocusReport { system: system.iter().map(BiPoly::to_conj_string).collect(), samples }
    }

    /// Numeric regularity at `x`: nonzero gradient and a Newton projection
    /// from nearby tangent offsets that lands back on `Γ` with a second-order
    /// shift.
    pub fn is_regular_at(&self, x: &[f64]) -> bool {
        let g = self.real.gradient(x);
        let gn = norm(&g);
        if gn < 1e-8 * self.scale() {
            return false;
        }
        let mut rng = task_rng(0, 0);
        (0..4).all(|_| {
            let v = crate::sampling::random_unit(x.len(), &mut rng);
            let dot: f64 = v.iter().zip(&g).map(|(a, b)| a * b).sum();
            let t: Vec<f64> = v.iter().zip(&g).map(|(a, b)| a - dot * b / (gn * gn)).collect();
            let tn = norm(&t);
            if tn == 0.0 {
                return true;
            }
            let h = 1e-4;
            let y: Vec<f64> = x.iter().zip(&t).map(|(a, b)| a + h * b / tn).collect();
            match self.real.project(&y, 30, 1e-13) {
                Some(p) => norm(&p.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<_>>()) < 0.5 * h,
                None => false,
            }
        })
    }

    /// Classify `p ∈ Γ`. `levi_flat` comes from the flatness test and
    /// `web_degree` from the web (n = 2 only).
    pub fn classify_point(
        &self,
        p: &[GaussianRational],
        levi_flat: bool,
        web_degree: Option<usize>,
    ) -> Result<SingularityReport> {
        let z: Vec<Complex64> = p.iter().map(GaussianRational::to_complex).collect();
        let value = self.value(&z);
        if value.abs() > 1e-9 * self.scale() {
            return Err(Error::NotOnHypersurface(value.abs()));
        }
        let x = to_real(&z);
        let gradient = norm(&self.real.gradient(&x));
        let segre = self.segre(p)?;
        let classification = if !levi_flat {
            Classification::NotLeviFlat
        } else if self.is_regular_at(&x) {
            Classification::Regular
        } else if segre.degenerate {
            Classification::SegreDegenerate
        } else {
            Classification::Nondegenerate { d: web_degree }
        };
        Ok(SingularityReport { point: z, rho_value: value, gradient, classification, segre })
    }
}

/// Multiply by a unimodular constant when `ρ† = λ ρ` with `|λ| = 1`.
fn hermitian_repair(rho: &BiPoly) -> Result<(BiPoly, Option<GaussianRational>)> {
    if rho.is_hermitian() {
        return Ok((rho.clone(), None));
    }
    let t = rho.hermitian_transpose();
    let (m, c) = rho.poly().leading_term().expect("nonzero");
    let lambda = &t.poly().coeff(m) / c;
    let unimodular = lambda.norm_sqr() == GaussianRational::one().re;
    if lambda.is_zero() || !unimodular || t != rho.scale(&lambda) {
        return Err(Error::NotHermitian(rho.to_conj_string()));
    }
    // μ = λ μ̄ makes μρ Hermitian.
    let mu = if (&lambda + &GaussianRational::one()).is_zero() {
        GaussianRational::i()
    } else {
        &lambda + &GaussianRational::one()
    };
    let fixed = rho.scale(&mu);
    debug_assert!(fixed.is_hermitian());
    Ok((fixed, Some(mu)))
}

/// Damped Gauss-Newton on `eqs = 0` with a fading pull `√μ (x − x0)`
/// towards the start, so that the limit is close to the nearest solution
/// rather than wherever the residual decays fastest.
fn levenberg_marquardt(eqs: &[RealPoly], x0: Vec<f64>, iters: usize) -> Option<Vec<f64>> {
    let m = eqs.len();
    let dim = x0.len();
    let mut x = x0.clone();
    let residual = |x: &[f64], mu: f64| {
        DVector::from_iterator(
            m + dim,
            eqs.iter().map(|e| e.value(x)).chain(x.iter().zip(&x0).map(|(a, b)| mu.sqrt() * (a - b))),
        )
    };
    let mut lambda = 1e-3;
    let mut mu = 1e-2;
    for _ in 0..iters {
        mu *= 0.8;
        let f = residual(&x, mu);
        let mut j = DMatrix::<f64>::zeros(m + dim, dim);
        for (r, e) in eqs.iter().enumerate() {
            for (c, g) in e.gradient(&x).into_iter().enumerate() {
                j[(r, c)] = g;
            }
        }
        for c in 0..dim {
            j[(m + c, c)] = mu.sqrt();
        }
        let jt = j.transpose();
        let jtj = &jt * &j;
        let rhs = -(&jt * &f);
        if rhs.norm() < 1e-300 {
            break;
        }
        let mut improved = false;
        for _ in 0..20 {
            let a = &jtj + DMatrix::<f64>::identity(dim, dim) * lambda;
            let Some(step) = a.lu().solve(&rhs) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            if residual(&trial, mu).norm() < f.norm() {
                x = trial;
                lambda = (lambda * 0.3).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
        if !improved && mu < 1e-30 {
            break;
        }
    }
    Some(x)
}

/// `Q_w = {z : ρ(z, w̄) = 0}`.
#[derive(Clone, Debug, Serialize)]
pub struct SegreVariety {
    #[serde(serialize_with = "ser_points")]
    pub center: Vec<Complex64>,
    pub degenerate: bool,
    /// True when degeneracy was decided with a floating tolerance.
    pub numeric: bool,
    #[serde(skip)]
    pub exact: Option<Poly>,
    #[serde(rename = "poly")]
    pub text: String,
    #[serde(skip)]
    pub coefficients: Vec<(Vec<u32>, Complex64)>,
}

pub(crate) fn ser_points<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

#[derive(Clone, Debug)]
pub struct SingularParams {
    pub starts: usize,
    pub seed: u64,
    pub dedup: f64,
    pub r_stick: f64,
    pub stick_lines: usize,
}

impl Default for SingularParams {
    fn default() -> Self {
        SingularParams { starts: 200, seed: 0, dedup: 1e-4, r_stick: 0.05, stick_lines: 64 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularSample {
    /// `[x1, y1, ..., xn, yn]`.
    pub point: Vec<f64>,
    pub residual: f64,
    pub gradient: f64,
    pub stick: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularLocusReport {
    /// `ρ` followed by `∂ρ/∂x_k`, `∂ρ/∂y_k`.
    pub system: Vec<String>,
    pub samples: Vec<SingularSample>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Classification {
    NotLeviFlat,
    Regular,
    SegreDegenerate,
    Nondegenerate { d: Option<usize> },
}

impl Classification {
    /// Label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            Classification::NotLeviFlat => "not_levi_flat",
            Classification::Regular => "regular",
            Classification::SegreDegenerate => "segre_degenerate",
            Classification::Nondegenerate { d: Some(1) } => "nondegenerate_unbranched",
            Classification::Nondegenerate { d: Some(_) } => "nondegenerate_branched",
            Classification::Nondegenerate { d: None } => "nondegenerate",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    #[serde(serialize_with = "ser_points")]
    pub point: Vec<Complex64>,
    pub rho_value: f64,
    pub gradient: f64,
    pub classification: Classification,
    pub segre: SegreVariety,
}

/// Convenience for tests and examples: a point of ℂⁿ as floats.
pub fn complex_point(x: &[f64]) -> Vec<Complex64> {
    to_complex(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::GaussianRational as G;

    fn hs(text: &str) -> Hypersurface {
        Hypersurface::parse(text).unwrap().0
    }

    #[test]
    fn brunella_complexification_and_segre() {
        let b = hs("y2^2 - 4*(y1^2 + x2)*y1^2");
        let expect = crate::parse::parse_function(
            "-(z2 - ~w2)^2/4 - (z1 - ~w1)^4/4 + (z2 + ~w2)*(z1 - ~w1)^2/2",
            None,
        )
        .unwrap()
        .num;
        assert_eq!(b.complexify(), expect);
        let q0 = b.segre(&[G::zero(), G::zero()]).unwrap();
        assert!(!q0.degenerate);
        let target = crate::parse::parse_function("z2^2 + z1^4 - 2*z2*z1^2", None).unwrap();
        let (t, _) = target.holomorphic_parts().unwrap();
        assert!(q0.exact.unwrap().is_proportional_to(&t));
        assert!(b.diagonal_identity_holds());
    }

    #[test]
    fn cone_and_hyperplane_segre() {
        let cone = hs("z1*~z1 - z2*~z2");
        assert_eq!(cone.complexify().to_complexified_string(), "z1*~w1 - z2*~w2");
        assert!(cone.segre(&[G::zero(), G::zero()]).unwrap().degenerate);
        assert!(cone.segre_numeric(&[Complex64::new(0.0, 0.0); 2]).unwrap().degenerate);
        let h = hs("z2 + ~z2");
        let q = h.segre(&[G::zero(), G::i()]).unwrap();
        assert_eq!(q.text, "z2 - i");
    }

    #[test]
    fn symmetry() {
        let cone = hs("z1*~z1 - z2*~z2");
        let c = |a: f64, b: f64| vec![Complex64::new(a, 0.0), Complex64::new(b, 0.0)];
        assert!(cone.segre_symmetry_check(&c(1.0, 1.0), &c(2.0, 2.0), 1e-12));
        assert!(cone.segre_symmetry_check(&c(1.0, 0.0), &c(1.0, 2.0), 1e-12));
        let z = [G::from_parts((1, 2), (3, 1)), G::from_integer(-2)];
        let w = [G::i(), G::from_parts((5, 7), (-1, 3))];
        assert!(cone.segre_symmetry_exact(&z, &w));
    }

    #[test]
    fn hermitian_repair_and_rejection() {
        let (h, log) = Hypersurface::parse("z1 - ~z1").unwrap();
        assert!(h.rho().is_hermitian());
        assert_eq!(log.len(), 1);
        assert!(matches!(Hypersurface::parse("z1 + i*z2"), Err(Error::NotHermitian(_))));
        assert!(matches!(Hypersurface::parse("z1 - z1"), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn singular_locus_of_cone_and_hyperplane() {
        let cone = hs("z1*~z1 - z2*~z2");
        let params = SingularParams { starts: 40, ..Default::default() };
        let rep = cone.singular_locus(&Region::cube(2, 1.0), &params);
        assert_eq!(rep.samples.len(), 1);
        assert!(norm(&rep.samples[0].point) < 1e-6);
        let h = hs("z2 + ~z2");
        assert!(h.singular_locus(&Region::cube(2, 1.0), &params).samples.is_empty());
    }

    #[test]
    fn translation_moves_point_to_origin() {
        let s = hs("z1*~z1 + z2*~z2 - 1");
        let t = s.translated(&[G::one(), G::zero()]).unwrap();
        assert_eq!(t.rho().to_conj_string(), "z1*~z1 + z2*~z2 + z1 + ~z1");
    }
}
