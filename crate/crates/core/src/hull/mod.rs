//! Hulls near singular points: escape paths, separation tests and
//! attached analytic discs.

pub mod discs;
pub mod planar;
pub mod separation;
pub mod wedge;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::{Classification, Hypersurface, SingularityReport};
use crate::poly::{GaussianRational, HolomorphicFn};

pub use discs::{attached_disc_family, AnalyticDisc, DiscParams};
pub use planar::{image_of_first_integral, EscapeCertificate, EscapeKind, EscapeOutcome, ImageParams, PlanarImage};
pub use separation::{
    find_separating_segre_point, leaf_separation_check, LeafSeparation, SegreSearchParams, SegreSeparation,
    SeparationParams,
};
pub use wedge::{coverage, wedge_disc_family, Coverage, CoverageParams, WedgeFamily, WedgeParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    LocallyPolynomiallyConvex,
    NotRationallyConvex,
    NoGeneralVerdictBranchedExample,
    NotLeviFlatNotConvex,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::LocallyPolynomiallyConvex => "locally_polynomially_convex",
            Verdict::NotRationallyConvex => "not_rationally_convex",
            Verdict::NoGeneralVerdictBranchedExample => "no_general_verdict_branched_example",
            Verdict::NotLeviFlatNotConvex => "not_levi_flat_not_convex",
        }
    }
}

pub fn verdict_for(c: &Classification) -> Verdict {
    match c {
        Classification::NotLeviFlat => Verdict::NotLeviFlatNotConvex,
        Classification::Regular | Classification::Nondegenerate { d: Some(1) } => Verdict::LocallyPolynomiallyConvex,
        Classification::SegreDegenerate => Verdict::NotRationallyConvex,
        Classification::Nondegenerate { .. } => Verdict::NoGeneralVerdictBranchedExample,
    }
}

/// Outcome of probing one point `q` off `Γ`.
#[derive(Clone, Debug, Serialize)]
pub struct EscapeProbe {
    #[serde(serialize_with = "crate::hypersurface::ser_points")]
    pub q: Vec<Complex64>,
    pub value: [f64; 2],
    pub outcome: EscapeOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<LeafSeparation>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Escape(EscapeProbe),
    SegrePoint(SegreSeparation),
    DiscFamily { w0: [String; 2], discs: Vec<AnalyticDisc> },
    WedgeDiscs(WedgeFamily),
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvexityVerdict {
    pub classification: Classification,
    pub verdict: Verdict,
    pub certificates: Vec<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Dispatch on the classification; certificates are attached as given.
pub fn convexity_verdict(report: &SingularityReport, certificates: Vec<Certificate>) -> ConvexityVerdict {
    let verdict = verdict_for(&report.classification);
    let note = match verdict {
        Verdict::LocallyPolynomiallyConvex if certificates.is_empty() => {
            Some("verdict from classification only, no escape certificates".into())
        }
        Verdict::NoGeneralVerdictBranchedExample if certificates.is_empty() => {
            Some("branched web: no general verdict and no certificate for this input".into())
        }
        Verdict::NotRationallyConvex => Some("attached discs through the point obstruct rational convexity".into()),
        _ => None,
    };
    ConvexityVerdict { classification: report.classification, verdict, certificates, note }
}

/// Escape certificate for `q`: a grid path from `f(q)` out of the window, or
/// a leaf separation check when `f(q)` lies on the masked image.
pub fn probe_escape(
    h: &Hypersurface,
    f: &HolomorphicFn,
    image: &PlanarImage,
    q: &[Complex64],
    sep: &SeparationParams,
) -> Result<EscapeProbe> {
    if h.value(q).abs() <= 1e-9 * h.scale() {
        return Err(Error::InvalidInput("q lies on the hypersurface".into()));
    }
    if f.den_abs(q) < 1e-12 {
        return Err(Error::InvalidInput("q is a pole of the first integral".into()));
    }
    let v = f.value(q) - image.offset;
    let value = [v.re, v.im];
    if !image.value_masked(v) {
        let outcome = image.escape(v)?;
        return Ok(EscapeProbe { q: q.to_vec(), value, outcome, separation: None });
    }
    let s = leaf_separation_check(h, f, q, sep)?;
    let outcome = if s.separated {
        EscapeOutcome::Certificate(EscapeCertificate {
            kind: EscapeKind::SeparatedLeaf,
            start: value,
            path: Vec::new(),
            clearance: 0.0,
            min_rho: Some(s.min_rho),
        })
    } else {
        EscapeOutcome::Undetermined { reason: "f(q) lies on the image and its fibre meets the hypersurface".into() }
    };
    Ok(EscapeProbe { q: q.to_vec(), value, outcome, separation: Some(s) })
}

/// Separating Segre point and the disc family through it.
pub fn segre_degenerate_certificates(
    h: &Hypersurface,
    search: &SegreSearchParams,
    eps: &[f64],
    discs: &DiscParams,
) -> Result<Vec<Certificate>> {
    let found = find_separating_segre_point(h, search)?;
    let w0: [GaussianRational; 2] = found.accepted.exact.clone();
    let family = attached_disc_family(h, &w0, eps, discs)?;
    Ok(vec![
        Certificate::DiscFamily { w0: found.accepted.w0.clone(), discs: family },
        Certificate::SegrePoint(found),
    ])
}
