//! Command runner behind the `leviflat` binary: job configuration, the
//! JSON report and CSV artifacts, and exit codes.

use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::crext::{self, BoundaryFn, SliceParams};
use crate::error::{Error, Result};
use crate::flatness::{is_levi_flat, FlatnessParams, LeviCertificate};
use crate::fixtures;
use crate::hull::{self, Certificate, DiscParams, EscapeOutcome, ImageParams, SegreSearchParams, SeparationParams};
use crate::hypersurface::{Classification, Hypersurface, SingularityReport};
use crate::parse::{parse_function, parse_point};
use crate::poly::{BiPoly, GaussianRational, HolomorphicFn, RationalFn, Slot};
use crate::sampling::{random_in_ball, task_rng, to_complex, to_real};
use crate::web::{compute_web, WebEquation, WebParams};

pub const SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NOT_FLAT: i32 = 3;
pub const EXIT_UNDETERMINED: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Clone, Debug)]
pub enum Command {
    Classify,
    Segre,
    Web,
    IntegralVerify {
        h: String,
    },
    Hull {
        h: Option<String>,
        q: Vec<String>,
        random: usize,
        eps: Vec<f64>,
    },
    Discs {
        w0: Option<String>,
        eps: Vec<f64>,
        brunella_wedge: bool,
        c: f64,
        delta: Vec<f64>,
    },
    Cr {
        function: String,
        bases: String,
        k: usize,
        nodes: usize,
        grid: usize,
        holomorphy: Option<usize>,
        spacing: f64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Segre => "segre",
            Command::Web => "web",
            Command::IntegralVerify { .. } => "integral-verify",
            Command::Hull { .. } => "hull",
            Command::Discs { .. } => "discs",
            Command::Cr { .. } => "cr",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Tolerances {
    pub flat: f64,
    pub sep: f64,
    pub disc: f64,
    pub moment: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { flat: 1e-8, sep: 1e-3, disc: 1e-8, moment: 1e-8 }
    }
}

impl Tolerances {
    /// Apply `name=value`.
    pub fn set(&mut self, setting: &str) -> Result<()> {
        let (name, value) =
            setting.split_once('=').ok_or_else(|| Error::InvalidInput(format!("expected name=value, got {setting}")))?;
        let v: f64 = value.trim().parse().map_err(|_| Error::InvalidInput(format!("bad tolerance value {value}")))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidInput(format!("tolerance {name} must be positive")));
        }
        match name.trim() {
            "flat" => self.flat = v,
            "sep" => self.sep = v,
            "disc" => self.disc = v,
            "moment" => self.moment = v,
            other => return Err(Error::InvalidInput(format!("unknown tolerance {other}"))),
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        json!({ "flat": self.flat, "sep": self.sep, "disc": self.disc, "moment": self.moment })
    }
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub input: Option<PathBuf>,
    pub command: Command,
    pub point: Option<String>,
    pub seed: u64,
    pub tol: Tolerances,
    pub radius: Option<f64>,
    pub grid: Option<f64>,
    pub window: Option<f64>,
    pub out_dir: Option<PathBuf>,
}

impl JobConfig {
    pub fn new(input: Option<PathBuf>, command: Command) -> Self {
        JobConfig {
            input,
            command,
            point: None,
            seed: 0,
            tol: Tolerances::default(),
            radius: None,
            grid: None,
            window: None,
            out_dir: None,
        }
    }
}

/// `--seed` wins over `LEVIFLAT_SEED`; the default is 0.
pub fn resolve_seed(flag: Option<u64>) -> std::result::Result<u64, String> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var("LEVIFLAT_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| format!("LEVIFLAT_SEED is not an integer: {v}")),
        Err(_) => Ok(0),
    }
}

/// Report, exit code and CSV artifacts `(file name, contents)`.
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
    pub artifacts: Vec<(String, String)>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::NotHermitian(_)
        | Error::ZeroPolynomial
        | Error::InvalidInput(_)
        | Error::DimensionMismatch { .. }
        | Error::NotOnHypersurface(_) => EXIT_PARSE,
        Error::NotLeviFlat => EXIT_NOT_FLAT,
        Error::BudgetExhausted(_) => EXIT_UNDETERMINED,
        _ => EXIT_NUMERIC,
    }
}

fn error_json(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("message".into(), json!(e.to_string()));
    if let Error::Parse(p) = e {
        m.insert("line".into(), json!(p.line));
        m.insert("column".into(), json!(p.column));
    }
    Value::Object(m)
}

struct Job<'a> {
    cfg: &'a JobConfig,
    out: Map<String, Value>,
    artifacts: Vec<(String, String)>,
    exit: i32,
}

/// Runs one command. Errors become an `"error"` field and an exit code.
pub fn run(cfg: &JobConfig) -> Outcome {
    let start = Instant::now();
    let mut job = Job { cfg, out: Map::new(), artifacts: Vec::new(), exit: EXIT_OK };
    job.out.insert("schema".into(), json!(SCHEMA));
    job.out.insert("command".into(), json!(cfg.command.name()));
    job.out.insert("seed".into(), json!(cfg.seed));
    job.out.insert("tolerances".into(), cfg.tol.to_json());
    if let Err(e) = job.dispatch() {
        job.exit = exit_code(&e);
        job.out.insert("error".into(), error_json(&e));
    }
    job.out.insert("timing".into(), json!({ "elapsed_ms": start.elapsed().as_secs_f64() * 1e3 }));
    Outcome { report: Value::Object(job.out), exit: job.exit, artifacts: job.artifacts }
}

/// The report without its timing field, for comparisons.
pub fn strip_timing(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.remove("timing");
    }
    v
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidInput(format!("not a number: {t}"))))
        .collect()
}

pub fn parse_floats(s: &str) -> std::result::Result<Vec<f64>, String> {
    parse_f64_list(s).map_err(|e| e.to_string())
}

fn translate_rational(f: &RationalFn, p: &[GaussianRational]) -> Result<RationalFn> {
    let n = f.dim();
    let subs: Vec<(Slot, BiPoly)> = p
        .iter()
        .enumerate()
        .flat_map(|(k, c)| {
            [
                (Slot::Z(k), &BiPoly::slot(n, Slot::Z(k)) + &BiPoly::constant(n, c.clone())),
                (Slot::Conj(k), &BiPoly::slot(n, Slot::Conj(k)) + &BiPoly::constant(n, c.conj())),
            ]
        })
        .collect();
    RationalFn::new(f.num.substitute(&subs)?, f.den.substitute(&subs)?)
}

fn levi_json(c: &LeviCertificate) -> Value {
    let mut v = json!({ "method": c.method, "verdict": c.verdict, "max_eig": c.max_eig });
    if let Some(q) = &c.quotient {
        v["quotient"] = json!(q);
    }
    v
}

impl Job<'_> {
    fn put(&mut self, key: &str, v: impl serde::Serialize) {
        self.out.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn hypersurface(&mut self) -> Result<Hypersurface> {
        let path = self.cfg.input.as_ref().ok_or_else(|| Error::InvalidInput("an input file is required".into()))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        self.put("input", json!({ "path": path.display().to_string() }));
        let (h, log) = Hypersurface::parse(&text)?;
        self.out.insert(
            "input".into(),
            json!({
                "path": path.display().to_string(),
                "dim": h.dim(),
                "rho": h.rho().to_conj_string(),
                "log": log,
            }),
        );
        Ok(h)
    }

    fn point(&self, n: usize) -> Result<Vec<GaussianRational>> {
        match &self.cfg.point {
            None => Ok(vec![GaussianRational::zero(); n]),
            Some(s) => {
                let p = parse_point(s)?;
                if p.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: p.len() });
                }
                Ok(p)
            }
        }
    }

    fn flatness(&mut self, h: &Hypersurface) -> Result<()> {
        let params = FlatnessParams { tol_flat: self.cfg.tol.flat, seed: self.cfg.seed, ..Default::default() };
        let c = is_levi_flat(h, &params)?;
        self.out.insert("levi_flat".into(), levi_json(&c));
        if !c.verdict {
            self.put("classification", "not_levi_flat");
            self.put("verdict", hull::Verdict::NotLeviFlatNotConvex.label());
            return Err(Error::NotLeviFlat);
        }
        Ok(())
    }

    fn web_at(&self, h: &Hypersurface, p: &[GaussianRational]) -> Result<WebEquation> {
        let t = h.translated(p)?;
        compute_web(&t, &WebParams { seed: self.cfg.seed, ..Default::default() })
    }

    /// Flatness, classification and (n = 2) web degree at the point.
    fn classify(&mut self, h: &Hypersurface, p: &[GaussianRational]) -> Result<(SingularityReport, Option<WebEquation>)> {
        self.flatness(h)?;
        let mut report = h.classify_point(p, true, None)?;
        let mut web = None;
        if matches!(report.classification, Classification::Nondegenerate { .. }) && h.dim() == 2 {
            let w = self.web_at(h, p)?;
            report.classification = Classification::Nondegenerate { d: Some(w.d) };
            web = Some(w);
        }
        self.put("classification", report.classification.label());
        if let Classification::Nondegenerate { d: Some(d) } = report.classification {
            self.put("d", d);
        }
        self.put("point", &report);
        self.put("verdict", hull::verdict_for(&report.classification).label());
        Ok((report, web))
    }

    fn dispatch(&mut self) -> Result<()> {
        match self.cfg.command.clone() {
            Command::Classify => {
                let h = self.hypersurface()?;
                let p = self.point(h.dim())?;
                let (_, web) = self.classify(&h, &p)?;
                if let Some(w) = web {
                    self.put("web", &w);
                }
                Ok(())
            }
            Command::Segre => {
                let h = self.hypersurface()?;
                let p = self.point(h.dim())?;
                let s = h.segre(&p)?;
                self.put("segre", &s);
                Ok(())
            }
            Command::Web => {
                let h = self.hypersurface()?;
                let p = self.point(h.dim())?;
                self.flatness(&h)?;
                let w = self.web_at(&h, &p)?;
                self.put("d", w.d);
                self.put("web", &w);
                Ok(())
            }
            Command::IntegralVerify { h: text } => {
                let h = self.hypersurface()?;
                let p = self.point(h.dim())?;
                self.flatness(&h)?;
                let f = parse_function(&text, Some(h.dim()))?;
                let w = self.web_at(&h, &p)?;
                let check = w.verify_first_integral(&translate_rational(&f, &p)?)?;
                self.put("d", w.d);
                self.put("phi", &w.text);
                self.put("integral", f.to_conj_string());
                self.put("check", &check);
                Ok(())
            }
            Command::Hull { h, q, random, eps } => self.hull(h, q, random, eps),
            Command::Discs { w0, eps, brunella_wedge, c, delta } => self.discs(w0, eps, brunella_wedge, c, delta),
            Command::Cr { function, bases, k, nodes, grid, holomorphy, spacing } => {
                self.cr(function, bases, k, nodes, grid, holomorphy, spacing)
            }
        }
    }

    fn hull(&mut self, integral: Option<String>, qs: Vec<String>, random: usize, eps: Vec<f64>) -> Result<()> {
        let h = self.hypersurface()?;
        let n = h.dim();
        let p = self.point(n)?;
        let pc: Vec<Complex64> = p.iter().map(|c| c.to_complex()).collect();
        let on = h.value(&pc).abs() <= 1e-9 * h.scale();
        let mut certificates = Vec::new();
        let mut report = None;
        if on {
            let (r, _) = self.classify(&h, &p)?;
            report = Some(r);
        } else {
            self.flatness(&h)?;
            self.put("classification", Value::Null);
            self.put("verdict", Value::Null);
            self.put("note", "the point is not on the hypersurface; escape probing only");
        }
        let class = report.as_ref().map(|r| r.classification);
        match class {
            Some(Classification::SegreDegenerate) => {
                if n != 2 {
                    return Err(Error::UnsupportedDimension(n));
                }
                let t = h.translated(&p)?;
                let search = SegreSearchParams {
                    radius: self.cfg.radius.unwrap_or(1.0),
                    r0: 0.1 * self.cfg.radius.unwrap_or(1.0),
                    tol_sep: self.cfg.tol.sep,
                    seed: self.cfg.seed,
                    ..Default::default()
                };
                let dp = DiscParams { tol_disc: self.cfg.tol.disc, ..Default::default() };
                certificates = hull::segre_degenerate_certificates(&t, &search, &eps, &dp)?;
                for c in &certificates {
                    if let Certificate::DiscFamily { discs, .. } = c {
                        let rows: Vec<String> = discs.iter().flat_map(|d| d.csv_rows()).collect();
                        self.csv("discs.csv", "re_z1,im_z1,re_z2,im_z2,tag", rows);
                    }
                }
            }
            Some(Classification::Nondegenerate { d: Some(d) }) if d >= 2 => {
                if fixtures::is_brunella(&h) && p.iter().all(|c| c.is_zero()) {
                    let fam = hull::wedge_disc_family(&hull::WedgeParams::default())?;
                    certificates.push(Certificate::WedgeDiscs(fam));
                }
            }
            Some(Classification::NotLeviFlat) => return Err(Error::NotLeviFlat),
            _ => {
                if let Some(text) = integral {
                    certificates = self.escape(&h, &p, &text, &qs, random)?;
                }
            }
        }
        let undetermined = certificates.iter().any(|c| {
            matches!(c, Certificate::Escape(e) if matches!(e.outcome, EscapeOutcome::Undetermined { .. }))
        });
        match report {
            Some(r) => {
                let v = hull::convexity_verdict(&r, certificates);
                self.put("verdict", v.verdict.label());
                self.put("certificates", &v.certificates);
                if let Some(n) = v.note {
                    self.put("note", n);
                }
            }
            None => self.put("certificates", &certificates),
        }
        if undetermined {
            self.exit = EXIT_UNDETERMINED;
        }
        Ok(())
    }

    fn escape(
        &mut self,
        h: &Hypersurface,
        p: &[GaussianRational],
        text: &str,
        qs: &[String],
        random: usize,
    ) -> Result<Vec<Certificate>> {
        let n = h.dim();
        let rf = parse_function(text, Some(n))?;
        if !rf.is_holomorphic() {
            return Err(Error::InvalidInput("the first integral must be holomorphic".into()));
        }
        let on = {
            let pc: Vec<Complex64> = p.iter().map(|c| c.to_complex()).collect();
            h.value(&pc).abs() <= 1e-9 * h.scale()
        };
        if on && n == 2 {
            let w = self.web_at(h, p)?;
            let check = w.verify_first_integral(&translate_rational(&rf, p)?)?;
            self.put("integral_check", &check);
            if !check.holds {
                return Err(Error::InvalidInput(format!("{text} is not a first integral of the web")));
            }
        }
        let t = h.translated(p)?;
        let f = HolomorphicFn::new(&translate_rational(&rf, p)?)?;
        let ip = ImageParams {
            radius: self.cfg.radius.unwrap_or(1.0),
            half_width: self.cfg.window,
            grid: self.cfg.grid,
            seed: self.cfg.seed,
            ..Default::default()
        };
        let image = hull::image_of_first_integral(&t, &f, &ip)?;
        self.put(
            "image",
            json!({
                "samples": image.samples.len(),
                "half_width": image.half_width,
                "grid": image.h,
                "r_mask": image.r_mask,
                "masked_cells": image.masked_count(),
                "offset": [image.offset.re, image.offset.im],
            }),
        );
        let sep = SeparationParams { tol_sep: self.cfg.tol.sep, radius: ip.radius, ..Default::default() };
        let shift: Vec<Complex64> = p.iter().map(|c| c.to_complex()).collect();
        let mut points: Vec<Vec<Complex64>> = Vec::new();
        for s in qs {
            let q: Vec<Complex64> = parse_point(s)?.iter().map(|c| c.to_complex()).collect();
            if q.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: q.len() });
            }
            points.push(q.iter().zip(&shift).map(|(a, b)| a - b).collect());
        }
        points.extend(random_probes(&t, &f, &image, random, self.cfg.seed));
        let mut out = Vec::new();
        let mut rows = Vec::new();
        for (k, q) in points.iter().enumerate() {
            let probe = hull::probe_escape(&t, &f, &image, q, &sep)?;
            let mut probe = probe;
            probe.q = q.iter().zip(&shift).map(|(a, b)| a + b).collect();
            if let EscapeOutcome::Certificate(c) = &probe.outcome {
                for cell in &c.path {
                    let z = image.center((cell[0], cell[1]));
                    rows.push(format!("{},{},path{k}", z.re, z.im));
                }
            }
            out.push(Certificate::Escape(probe));
        }
        let issued = out
            .iter()
            .filter(|c| matches!(c, Certificate::Escape(e) if e.outcome.is_certificate()))
            .count();
        self.put("escape_summary", json!({ "probes": out.len(), "certificates": issued }));
        let image_rows: Vec<String> = image.samples.iter().map(|v| format!("{},{},image", v.re, v.im)).collect();
        self.csv("image.csv", "re_f,im_f,tag", image_rows);
        self.csv("paths.csv", "re_f,im_f,tag", rows);
        Ok(out)
    }

    fn discs(&mut self, w0: Option<String>, eps: Vec<f64>, wedge: bool, c: f64, delta: Vec<f64>) -> Result<()> {
        if wedge {
            if self.cfg.input.is_some() {
                let h = self.hypersurface()?;
                if !fixtures::is_brunella(&h) {
                    return Err(Error::InvalidInput("wedge discs are built for the branched fixture only".into()));
                }
            }
            let fam = hull::wedge_disc_family(&hull::WedgeParams { c, deltas: delta, ..Default::default() })?;
            let cov = hull::coverage(&fam, &hull::CoverageParams::default());
            let rows: Vec<String> = fam.base.iter().flat_map(|d| d.disc.csv_rows()).collect();
            self.csv("wedge_discs.csv", "re_z1,im_z1,re_z2,im_z2,tag", rows);
            self.put("wedge", &fam);
            self.put("coverage", &cov);
            return Ok(());
        }
        let h = self.hypersurface()?;
        if h.dim() != 2 {
            return Err(Error::UnsupportedDimension(h.dim()));
        }
        self.flatness(&h)?;
        let p = self.point(2)?;
        let t = h.translated(&p)?;
        let w0 = match w0 {
            Some(s) => {
                let v = parse_point(&s)?;
                let [a, b]: [GaussianRational; 2] =
                    v.try_into().map_err(|v: Vec<_>| Error::DimensionMismatch { expected: 2, found: v.len() })?;
                let search = SegreSearchParams {
                    candidates: vec![[a.clone(), b.clone()]],
                    budget: 1,
                    tol_sep: self.cfg.tol.sep,
                    seed: self.cfg.seed,
                    ..Default::default()
                };
                let found = hull::find_separating_segre_point(&t, &search)?;
                self.put("segre_point", &found);
                [a, b]
            }
            None => {
                let search = SegreSearchParams { tol_sep: self.cfg.tol.sep, seed: self.cfg.seed, ..Default::default() };
                let found = hull::find_separating_segre_point(&t, &search)?;
                self.put("segre_point", &found);
                found.accepted.exact
            }
        };
        let discs = hull::attached_disc_family(&t, &w0, &eps, &DiscParams { tol_disc: self.cfg.tol.disc, ..Default::default() })?;
        let rows: Vec<String> = discs.iter().flat_map(|d| d.csv_rows()).collect();
        self.csv("discs.csv", "re_z1,im_z1,re_z2,im_z2,tag", rows);
        self.put("discs", &discs);
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn cr(
        &mut self,
        function: String,
        bases: String,
        k: usize,
        nodes: usize,
        grid: usize,
        holomorphy: Option<usize>,
        spacing: f64,
    ) -> Result<()> {
        let h = self.hypersurface()?;
        let n = h.dim();
        let f = BoundaryFn::new(&parse_function(&function, Some(n))?);
        let mut base_points: Vec<Vec<Complex64>> = Vec::new();
        for group in bases.split(';').filter(|g| !g.trim().is_empty()) {
            let v: Vec<Complex64> = parse_point(group)?.iter().map(|c| c.to_complex()).collect();
            if n == 2 {
                base_points.extend(v.into_iter().map(|z| vec![z]));
            } else if v.len() == n - 1 {
                base_points.push(v);
            } else {
                return Err(Error::DimensionMismatch { expected: n - 1, found: v.len() });
            }
        }
        if base_points.is_empty() {
            return Err(Error::InvalidInput("no base points".into()));
        }
        let sp = SliceParams { nodes, r_max: self.cfg.window.unwrap_or(4.0), ..Default::default() };
        let report = crext::extendability_report(&h, &f, &base_points, k, self.cfg.tol.moment, grid, &sp)?;
        self.csv("moments.csv", "re_z,im_z,k,re_mu,im_mu", report.table.csv_rows());
        let ext: Vec<String> = report
            .extension
            .iter()
            .map(|e| {
                let z = e.base.last().copied().unwrap_or_default();
                format!("{},{},{},{},{},{}", z.re, z.im, e.w[0], e.w[1], e.value[0], e.value[1])
            })
            .collect();
        self.csv("extension.csv", "re_z,im_z,re_w,im_w,re_f,im_f", ext);
        self.put("cr", &report);
        if let Some(m) = holomorphy {
            let z0 = base_points[0].clone();
            let last = z0.len() - 1;
            let mut values = Vec::with_capacity(m);
            for i in 0..m {
                let mut row = Vec::with_capacity(m);
                for j in 0..m {
                    let mut b = z0.clone();
                    let off = (m as f64 - 1.0) / 2.0;
                    b[last] += Complex64::new((i as f64 - off) * spacing, (j as f64 - off) * spacing);
                    let curve = crext::trace_slice(&h, &b, &sp)?;
                    row.push(crext::moments(&f, &curve, 0)?[0]);
                }
                values.push(row);
            }
            let dbar = crext::holomorphy_check(&values, spacing)?;
            self.put("holomorphy", json!({ "grid": m, "spacing": spacing, "max_dbar_mu0": dbar }));
        }
        Ok(())
    }

    fn csv(&mut self, name: &str, header: &str, rows: Vec<String>) {
        if self.cfg.out_dir.is_none() {
            return;
        }
        let mut s = String::with_capacity(rows.len() * 48);
        s.push_str(header);
        s.push('\n');
        for r in rows {
            s.push_str(&r);
            s.push('\n');
        }
        self.artifacts.push((name.to_string(), s));
    }
}

/// `count` seeded points of `B(0, 1/2)` off `Γ` whose values avoid the mask.
pub fn random_probes(h: &Hypersurface, f: &HolomorphicFn, image: &hull::PlanarImage, count: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let n = h.dim();
    let mut rng = task_rng(seed, 1 << 48);
    let mut out = Vec::with_capacity(count);
    let mut tries = 0;
    while out.len() < count && tries < 10_000 * count.max(1) {
        tries += 1;
        let x = random_in_ball(&vec![0.0; 2 * n], 0.5, &mut rng);
        let z = to_complex(&x);
        if h.value(&z).abs() <= 1e-6 * h.scale() || f.den_abs(&z) < 1e-9 {
            continue;
        }
        if image.value_masked(f.value(&z) - image.offset) {
            continue;
        }
        out.push(to_complex(&to_real(&z)));
    }
    out
}

/// Writes artifacts into the output directory.
pub fn write_artifacts(dir: &std::path::Path, artifacts: &[(String, String)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, body) in artifacts {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances() {
        let mut t = Tolerances::default();
        t.set("sep=1e-4").unwrap();
        assert_eq!(t.sep, 1e-4);
        assert!(t.set("sep=-1").is_err());
        assert!(t.set("nope=1").is_err());
        assert!(t.set("sep").is_err());
    }

    #[test]
    fn seed_resolution() {
        assert_eq!(resolve_seed(Some(7)).unwrap(), 7);
    }

    #[test]
    fn missing_input_is_an_input_error() {
        let o = run(&JobConfig::new(None, Command::Classify));
        assert_eq!(o.exit, EXIT_PARSE);
        assert!(o.report["error"]["message"].as_str().unwrap().contains("input"));
    }
}
