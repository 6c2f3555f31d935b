//! Holomorphic webs extending the Levi foliation near a Segre
//! nondegenerate point of a hypersurface in ℂ² (placed at the origin).
//!
//! For a direction `b` the Segre varieties of points `w` on a line through
//! the origin form the family `F(z, t) = ρ(z, w̄)` with `w̄ = b t`. Eliminating
//! the leaf label `t` between `F = 0` and `F_{z1} + p F_{z2} = 0` gives the
//! implicit equation `Φ(z, p) = 0` of the web.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::Hypersurface;
use crate::poly::{
    gcd, polynomial_roots, primitive_part, resultant, squarefree_and_content, GaussianRational, NumPoly, Poly,
    RationalFn, RemovedKind, RootCluster,
};
use crate::sampling::task_rng;

// Ring of the line family: z1, z2, t, p.
const T: usize = 2;
const P4: usize = 3;
// Ring of the web equation: z1, z2, p.
const P: usize = 2;

fn web_names() -> Vec<String> {
    vec!["z1".into(), "z2".into(), "p".into()]
}

fn family_names() -> Vec<String> {
    vec!["z1".into(), "z2".into(), "t".into(), "p".into()]
}

/// `F(z, t) = ρ(z, w̄)` restricted to `w̄ = (b1 t, b2 t)`.
#[derive(Clone, Debug)]
pub struct LineFamily {
    pub b: [GaussianRational; 2],
    /// Polynomial in the ring `(z1, z2, t, p)`; `p` does not occur.
    pub f: Poly,
}

impl LineFamily {
    pub fn deg_t(&self) -> u32 {
        self.f.degree_in(T)
    }

    pub fn text(&self) -> String {
        self.f.to_string_with(&family_names())
    }

    /// `F_{z1} + p F_{z2}`.
    pub fn slope_polynomial(&self) -> Poly {
        let p = Poly::var(4, P4);
        &self.f.diff(0) + &(&p * &self.f.diff(1))
    }

    /// Leaf labels `t` with `F(q, t) = 0`, with multiplicities.
    pub fn leaf_through_point(&self, q: &[Complex64]) -> Result<Vec<RootCluster>> {
        let x = [q[0], q[1], Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let coeffs: Vec<Complex64> = self.f.coeffs_in(T).iter().map(|c| c.eval(&x)).collect();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale <= 1e-14 * self.f.max_abs_coeff() {
            return Err(Error::InvalidInput("F(q, t) vanishes for every t".into()));
        }
        polynomial_roots(&coeffs, 1e-6).ok_or_else(|| Error::InvalidInput("F(q, t) vanishes for every t".into()))
    }

    /// Relative residual of `Φ(z, -F_{z1}/F_{z2})` at a point of a leaf.
    pub fn slope_residual(&self, web: &WebEquation, z: &[Complex64]) -> f64 {
        let x = [z[0], z[1], Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let a1 = self.f.diff(0).eval(&x);
        let a2 = self.f.diff(1).eval(&x);
        web.homogeneous_residual(z, a1, a2)
    }

    /// `-F0/F1` when `F = F0 + F1 t`.
    pub fn extract_first_integral(&self) -> Result<IntegralOutcome> {
        let k = self.deg_t();
        if k != 1 {
            return Ok(IntegralOutcome::Unavailable {
                reason: format!("deg_t F = {k} > 1; provide a candidate integral for verification"),
            });
        }
        let c = self.f.coeffs_in(T);
        if c[1].is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let to_bi = |p: &Poly| crate::poly::BiPoly::new(2, p.clone()).expect("four variables");
        let f = RationalFn::new(to_bi(&-&c[0]), to_bi(&c[1]))?;
        Ok(IntegralOutcome::Available { integral: f })
    }
}

#[derive(Clone, Debug)]
pub enum IntegralOutcome {
    Available { integral: RationalFn },
    Unavailable { reason: String },
}

fn check_origin(h: &Hypersurface) -> Result<()> {
    if h.dim() != 2 {
        return Err(Error::UnsupportedDimension(h.dim()));
    }
    let zero = [GaussianRational::zero(), GaussianRational::zero()];
    let v = h.rho().eval_exact(&zero, &zero);
    if !v.is_zero() {
        return Err(Error::NotOnHypersurface(v.to_complex().norm()));
    }
    if h.segre(&zero)?.degenerate {
        return Err(Error::SegreDegenerateOrigin);
    }
    Ok(())
}

/// The family for direction `b`. The line `{s b̄}` must meet `Q_0` only at
/// the origin.
pub fn build_line_family(h: &Hypersurface, b: [GaussianRational; 2]) -> Result<LineFamily> {
    check_origin(h)?;
    build_unchecked(h, b)
}

fn build_unchecked(h: &Hypersurface, b: [GaussianRational; 2]) -> Result<LineFamily> {
    let rho = h.complexify();
    // q(s) = ρ(s b̄, 0)
    let s = Poly::var(1, 0);
    let q = rho.poly().compose(&[
        s.scale(&b[0].conj()),
        s.scale(&b[1].conj()),
        Poly::zero(1),
        Poly::zero(1),
    ])?;
    if q.is_zero() {
        return Err(Error::NoAdmissibleDirection(format!("line ({}, {}) lies in Q_0", b[0].conj(), b[1].conj())));
    }
    let t = Poly::var(4, T);
    let f = rho.poly().compose(&[Poly::var(4, 0), Poly::var(4, 1), t.scale(&b[0]), t.scale(&b[1])])?;
    Ok(LineFamily { b, f })
}

/// Result for one direction.
#[derive(Clone, Debug, Serialize)]
pub struct DirectionOutcome {
    pub b: [String; 2],
    pub deg_t: Option<u32>,
    pub d: Option<usize>,
    pub phi: Option<String>,
    pub removed: Vec<String>,
    pub error: Option<String>,
    #[serde(skip)]
    pub poly: Option<Poly>,
}

/// `Φ(z, p) = Σ_{j ≤ d} Φ_j(z) p^j`.
#[derive(Clone, Debug, Serialize)]
pub struct WebEquation {
    #[serde(rename = "phi")]
    pub text: String,
    pub d: usize,
    pub coefficients: Vec<String>,
    /// Branch degree of every successful direction.
    pub degrees: Vec<usize>,
    pub degree_consistent: bool,
    pub log: Vec<String>,
    pub directions: Vec<DirectionOutcome>,
    #[serde(skip)]
    pub phi: Poly,
}

impl WebEquation {
    fn from_phi(phi: Poly, log: Vec<String>, directions: Vec<DirectionOutcome>) -> Self {
        let phi = primitive_part(&phi, P);
        let d = phi.degree_in(P) as usize;
        let degrees: Vec<usize> = directions.iter().filter_map(|o| o.d).collect();
        let names = web_names();
        WebEquation {
            text: phi.to_string_with(&names),
            d,
            coefficients: phi.coeffs_in(P).iter().map(|c| c.to_string_with(&names)).collect(),
            degree_consistent: degrees.iter().all(|&x| x == d),
            degrees,
            log,
            directions,
            phi,
        }
    }

    /// A web given directly by its equation in `(z1, z2, p)`.
    pub fn from_polynomial(phi: Poly) -> Result<Self> {
        if phi.nvars() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: phi.nvars() });
        }
        if phi.degree_in(P) == 0 {
            return Err(Error::DegenerateResultant);
        }
        Ok(Self::from_phi(phi, Vec::new(), Vec::new()))
    }

    pub fn coefficient_polys(&self) -> Vec<Poly> {
        self.phi.coeffs_in(P)
    }

    /// `|Σ Φ_j(z) (-a1)^j a2^{d-j}|`, relative to the sum of term moduli.
    /// Vanishes iff the direction `(a2, -a1)` is tangent to a web leaf.
    pub fn homogeneous_residual(&self, z: &[Complex64], a1: Complex64, a2: Complex64) -> f64 {
        let x = [z[0], z[1], Complex64::new(0.0, 0.0)];
        let (mut num, mut den) = (Complex64::new(0.0, 0.0), 0.0);
        for (j, c) in self.coefficient_polys().iter().enumerate() {
            let t = c.eval(&x) * (-a1).powu(j as u32) * a2.powu((self.d - j) as u32);
            num += t;
            den += t.norm();
        }
        if den == 0.0 {
            0.0
        } else {
            num.norm() / den
        }
    }

    /// Residual of the Levi-leaf tangent `(ρ_{z2}, -ρ_{z1})` at `z ∈ Γ*`.
    pub fn levi_leaf_residual(&self, h: &Hypersurface, z: &[Complex64]) -> f64 {
        let a = h.real().dz(z);
        self.homogeneous_residual(z, a[0], a[1])
    }

    /// Substitute `p = -h_{z1}/h_{z2}` and clear denominators. The integral
    /// is verified iff the resulting polynomial is zero.
    pub fn verify_first_integral(&self, h: &RationalFn) -> Result<FirstIntegralCheck> {
        let (n, dd) = h.holomorphic_parts()?;
        if h.dim() != 2 {
            return Err(Error::UnsupportedDimension(h.dim()));
        }
        let emb = |p: &Poly| p.remap(3, &[0, 1]);
        let (n, dd) = (emb(&n), emb(&dd));
        // h_{zk} = (N_k D - N D_k) / D²
        let a = &(&n.diff(0) * &dd) - &(&n * &dd.diff(0));
        let b = &(&n.diff(1) * &dd) - &(&n * &dd.diff(1));
        if a.is_zero() && b.is_zero() {
            return Err(Error::ConstantIntegral);
        }
        let minus_a = -&a;
        let mut residual = Poly::zero(3);
        for (j, c) in self.coefficient_polys().iter().enumerate() {
            let term = &(c * &minus_a.pow(j as u32)) * &b.pow((self.d - j) as u32);
            residual = &residual + &term;
        }
        let names = web_names();
        Ok(FirstIntegralCheck {
            holds: residual.is_zero(),
            residual_text: residual.to_string_with(&names),
            residual,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstIntegralCheck {
    pub holds: bool,
    #[serde(rename = "residual")]
    pub residual_text: String,
    #[serde(skip)]
    pub residual: Poly,
}

#[derive(Clone, Debug)]
pub struct WebParams {
    /// Admissible directions to collect.
    pub directions: usize,
    /// Candidates to examine before giving up.
    pub max_candidates: usize,
    pub seed: u64,
}

impl Default for WebParams {
    fn default() -> Self {
        WebParams { directions: 3, max_candidates: 24, seed: 0 }
    }
}

/// Candidate direction number `k`: small Gaussian integers, seeded.
pub fn direction(seed: u64, k: usize) -> [GaussianRational; 2] {
    let mut rng = task_rng(seed, 1 << 40 | k as u64);
    loop {
        let mut g = || GaussianRational::from_parts((rng.gen_range(-2..=2), 1), (rng.gen_range(-2..=2), 1));
        let b = [g(), g()];
        if !(b[0].is_zero() && b[1].is_zero()) {
            return b;
        }
    }
}

fn run_direction(h: &Hypersurface, b: [GaussianRational; 2]) -> DirectionOutcome {
    let mut out = DirectionOutcome {
        b: [b[0].to_string(), b[1].to_string()],
        deg_t: None,
        d: None,
        phi: None,
        removed: Vec::new(),
        error: None,
        poly: None,
    };
    let fam = match build_unchecked(h, b) {
        Ok(f) => f,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    out.deg_t = Some(fam.deg_t());
    let r = match resultant(&fam.f, &fam.slope_polynomial(), T) {
        Ok(r) => r,
        Err(e) => {
            out.error = Some(e.to_string());
            return out;
        }
    };
    // drop t from the ring: (z1, z2, t, p) -> (z1, z2, p)
    let r = r.remap(3, &[0, 1, 2, 2]);
    if r.is_zero() {
        out.error = Some(Error::DegenerateResultant.to_string());
        return out;
    }
    let (phi, removed) = squarefree_and_content(&r, P).expect("nonzero");
    let names = web_names();
    out.removed = removed
        .iter()
        .map(|f| {
            let kind = match f.kind {
                RemovedKind::Content => "content",
                RemovedKind::Repeated => "repeated",
            };
            format!("{kind}: {}", f.factor.to_string_with(&names))
        })
        .collect();
    if phi.degree_in(P) == 0 {
        out.error = Some(Error::DegenerateResultant.to_string());
        return out;
    }
    out.d = Some(phi.degree_in(P) as usize);
    out.phi = Some(phi.to_string_with(&names));
    out.poly = Some(phi);
    out
}

/// The web through the origin. Directions are tried in seeded order, in
/// parallel batches, until `params.directions` of them succeed. The web is
/// the common factor of the per-direction results when that still involves
/// `p`, otherwise the result of least degree.
pub fn compute_web(h: &Hypersurface, params: &WebParams) -> Result<WebEquation> {
    check_origin(h)?;
    let mut outcomes: Vec<DirectionOutcome> = Vec::new();
    let mut k = 0;
    let batch = params.directions.max(1);
    while outcomes.iter().filter(|o| o.poly.is_some()).count() < params.directions && k < params.max_candidates {
        let upto = (k + batch).min(params.max_candidates);
        let mut got: Vec<DirectionOutcome> =
            (k..upto).into_par_iter().map(|i| run_direction(h, direction(params.seed, i))).collect();
        outcomes.append(&mut got);
        k = upto;
    }
    let good: Vec<&Poly> = outcomes.iter().filter_map(|o| o.poly.as_ref()).collect();
    if good.is_empty() {
        if outcomes.iter().all(|o| o.deg_t.is_none()) {
            return Err(Error::NoAdmissibleDirection(format!("{} candidates tried", outcomes.len())));
        }
        return Err(Error::DegenerateResultant);
    }
    let mut log = Vec::new();
    let common = good.iter().skip(1).fold(good[0].clone(), |g, p| gcd(&g, p));
    let phi = if common.degree_in(P) >= 1 {
        if good.iter().any(|p| !p.is_proportional_to(&common)) {
            log.push("kept the factor common to all directions".to_string());
        }
        common
    } else {
        log.push("directions share no factor in p; kept the result of least degree".to_string());
        (*good
            .iter()
            .min_by_key(|p| (p.degree_in(P), p.coeff_size()))
            .expect("nonempty"))
        .clone()
    };
    Ok(WebEquation::from_phi(phi, log, outcomes))
}

/// Numeric polynomial `Φ(z, ·)` coefficients for repeated evaluation.
pub fn numeric_coefficients(web: &WebEquation) -> Vec<NumPoly> {
    web.coefficient_polys().iter().map(NumPoly::from_poly).collect()
}
