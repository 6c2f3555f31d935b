//! Levi-flatness: exact Levi determinant for n = 2, sampled Levi form in
//! any dimension.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::Hypersurface;
use crate::poly::{BiPoly, NumPoly, Slot};
use crate::sampling::{sample_zero_set, to_complex, Region, SampleParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeviMethod {
    Symbolic,
    Numeric,
}

#[derive(Clone, Debug, Serialize)]
pub struct LeviCertificate {
    pub method: LeviMethod,
    pub verdict: bool,
    /// `q` with `Λ = q ρ` (symbolic path).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<String>,
    /// Largest `|eigenvalue| / |∂ρ|` of the Levi form over the samples.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_eig: Option<f64>,
    /// Range of `Λ` over the samples (n = 2, numeric path).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub levi_values: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub struct FlatnessParams {
    pub tol_flat: f64,
    pub samples: usize,
    pub min_samples: usize,
    pub region: Option<Region>,
    pub seed: u64,
}

impl Default for FlatnessParams {
    fn default() -> Self {
        FlatnessParams { tol_flat: 1e-8, samples: 200, min_samples: 20, region: None, seed: 0 }
    }
}

/// `Λ = ρ_{11̄} ρ_2 ρ_2̄ − ρ_{12̄} ρ_2 ρ_1̄ − ρ_{21̄} ρ_1 ρ_2̄ + ρ_{22̄} ρ_1 ρ_1̄`.
pub fn levi_determinant(h: &Hypersurface) -> Result<BiPoly> {
    if h.dim() != 2 {
        return Err(Error::UnsupportedDimension(h.dim()));
    }
    let r = h.rho();
    let d = |s: Slot| r.diff(s);
    let (r1, r2, r1b, r2b) = (d(Slot::Z(0)), d(Slot::Z(1)), d(Slot::Conj(0)), d(Slot::Conj(1)));
    let mixed = |j: usize, k: usize| r.diff(Slot::Z(j)).diff(Slot::Conj(k));
    let t1 = &(&mixed(0, 0) * &r2) * &r2b;
    let t2 = &(&mixed(0, 1) * &r2) * &r1b;
    let t3 = &(&mixed(1, 0) * &r1) * &r2b;
    let t4 = &(&mixed(1, 1) * &r1) * &r1b;
    Ok(&(&(&t1 - &t2) - &t3) + &t4)
}

/// Levi-flatness test. For n = 2 an exact division `Λ = q ρ` is tried
/// first; otherwise (or when the division leaves a remainder) the Levi form
/// is sampled on `Γ`.
pub fn is_levi_flat(h: &Hypersurface, params: &FlatnessParams) -> Result<LeviCertificate> {
    if h.dim() == 2 {
        let lambda = levi_determinant(h)?;
        if lambda.is_zero() {
            return Ok(symbolic("0".into()));
        }
        let (q, rem) = lambda.poly().div_rem(h.rho().poly())?;
        if rem.is_zero() {
            let q = BiPoly::new(2, q)?;
            return Ok(symbolic(q.to_conj_string()));
        }
    }
    numeric_levi(h, params)
}

fn symbolic(q: String) -> LeviCertificate {
    LeviCertificate {
        method: LeviMethod::Symbolic,
        verdict: true,
        quotient: Some(q),
        max_eig: None,
        levi_values: None,
        witness: None,
        samples: 0,
    }
}

/// Sampled Levi form: at each regular sample the complex Hessian is
/// restricted to `ker ∂ρ` (orthonormal basis) and its eigenvalues are
/// divided by `|∂ρ|`.
pub fn numeric_levi(h: &Hypersurface, params: &FlatnessParams) -> Result<LeviCertificate> {
    let n = h.dim();
    let region = params.region.clone().unwrap_or_else(|| Region::cube(n, 1.0));
    let sp = SampleParams { count: params.samples, seed: params.seed, ..Default::default() };
    let pts = sample_zero_set(h.real(), &region, &sp);
    if pts.len() < params.min_samples {
        return Err(Error::TooFewSamples { found: pts.len(), needed: params.min_samples });
    }
    let hess: Vec<Vec<NumPoly>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| NumPoly::from_poly(h.rho().diff(Slot::Z(j)).diff(Slot::Conj(k)).poly()))
                .collect()
        })
        .collect();
    let lambda = if n == 2 { Some(NumPoly::from_poly(levi_determinant(h)?.poly())) } else { None };
    let evals: Vec<(f64, Option<f64>)> = pts
        .par_iter()
        .map(|x| {
            let z = to_complex(x);
            let lift: Vec<Complex64> = z.iter().copied().chain(z.iter().map(|c| c.conj())).collect();
            let a = h.real().dz(&z);
            let an = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let hm = DMatrix::from_fn(n, n, |j, k| hess[j][k].eval(&lift));
            let b = kernel_basis(&a);
            let m = b.transpose() * hm * b.map(|c| c.conj());
            let eig = SymmetricEigen::new(m).eigenvalues.iter().map(|e| e.abs()).fold(0.0, f64::max);
            (eig / an, lambda.as_ref().map(|l| l.eval(&lift).re))
        })
        .collect();
    let (mut max_eig, mut arg) = (0.0f64, 0usize);
    for (k, (e, _)) in evals.iter().enumerate() {
        if *e > max_eig {
            max_eig = *e;
            arg = k;
        }
    }
    let levi_values = lambda.as_ref().map(|_| {
        let vs = evals.iter().filter_map(|(_, l)| *l);
        let lo = vs.clone().fold(f64::INFINITY, f64::min);
        let hi = vs.fold(f64::NEG_INFINITY, f64::max);
        [lo, hi]
    });
    Ok(LeviCertificate {
        method: LeviMethod::Numeric,
        verdict: max_eig < params.tol_flat,
        quotient: None,
        max_eig: Some(max_eig),
        levi_values,
        witness: Some(pts[arg].clone()),
        samples: pts.len(),
    })
}

/// Orthonormal basis (as columns) of `{v : Σ a_k v_k = 0}`.
fn kernel_basis(a: &[Complex64]) -> DMatrix<Complex64> {
    let n = a.len();
    let mut basis: Vec<Vec<Complex64>> = vec![a.iter().map(|c| c.conj()).collect()];
    let dot = |u: &[Complex64], v: &[Complex64]| -> Complex64 { u.iter().zip(v).map(|(x, y)| x * y.conj()).sum() };
    let normalize = |v: &mut Vec<Complex64>| {
        let r = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|c| *c /= r);
        r
    };
    normalize(&mut basis[0]);
    for e in 0..n {
        if basis.len() == n {
            break;
        }
        let mut v: Vec<Complex64> = (0..n).map(|k| Complex64::new((k == e) as u8 as f64, 0.0)).collect();
        for b in &basis {
            let c = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        if v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() > 1e-8 {
            normalize(&mut v);
            basis.push(v);
        }
    }
    DMatrix::from_fn(n, n - 1, |r, c| basis[c + 1][r])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hs(text: &str) -> Hypersurface {
        Hypersurface::parse(text).unwrap().0
    }

    #[test]
    fn levi_determinant_examples() {
        assert!(levi_determinant(&hs("z2 + ~z2")).unwrap().is_zero());
        let sphere = levi_determinant(&hs("z1*~z1 + z2*~z2 - 1")).unwrap();
        assert_eq!(sphere.to_conj_string(), "z1*~z1 + z2*~z2");
        let cone = hs("z1*~z1 - z2*~z2");
        let l = levi_determinant(&cone).unwrap();
        assert_eq!(l, cone.rho().scale(&-crate::poly::GaussianRational::one()));
    }

    #[test]
    fn verdicts() {
        let cone = is_levi_flat(&hs("z1*~z1 - z2*~z2"), &FlatnessParams::default()).unwrap();
        assert_eq!((cone.method, cone.verdict), (LeviMethod::Symbolic, true));
        assert_eq!(cone.quotient.as_deref(), Some("-1"));
        let b = is_levi_flat(&hs("y2^2 - 4*(y1^2 + x2)*y1^2"), &FlatnessParams::default()).unwrap();
        assert_eq!((b.method, b.verdict), (LeviMethod::Symbolic, true));
        let s = is_levi_flat(&hs("z1*~z1 + z2*~z2 - 1"), &FlatnessParams::default()).unwrap();
        assert_eq!((s.method, s.verdict), (LeviMethod::Numeric, false));
        assert!((s.max_eig.unwrap() - 1.0).abs() < 1e-10);
        let [lo, hi] = s.levi_values.unwrap();
        assert!((lo - 1.0).abs() < 1e-10 && (hi - 1.0).abs() < 1e-10);
    }

    #[test]
    fn numeric_path_in_three_variables() {
        let flat = hs("z1 + ~z1 + z2*~z3 + z3*~z2 - z2*~z2");
        // Not Levi-flat: restrict to ker ∂ρ and check a nonzero eigenvalue.
        let c = numeric_levi(&flat, &FlatnessParams::default()).unwrap();
        assert!(!c.verdict);
        let hyper = hs("dim 3\nz3 + ~z3");
        assert!(numeric_levi(&hyper, &FlatnessParams::default()).unwrap().verdict);
        let im = hs("(z1*z2*z3 - ~z1*~z2*~z3)*i");
        let c = numeric_levi(&im, &FlatnessParams::default()).unwrap();
        assert!(c.verdict, "{:?}", c.max_eig);
    }
}
