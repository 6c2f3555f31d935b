//! Two separation tests: fibres of a first integral that avoid `Γ`, and
//! Segre varieties `Q_{w0}` meeting `Γ` only at a dicritical origin.

use std::collections::VecDeque;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::Hypersurface;
use crate::poly::{GaussianRational, HolomorphicFn, NumPoly, Slot};
use crate::sampling::{sample_zero_set, task_rng, to_complex, to_real, Region, SampleParams};

#[derive(Clone, Debug)]
pub struct SeparationParams {
    /// Radius of the parameter disc around `q` in the free coordinate.
    pub patch_radius: f64,
    pub grid: usize,
    /// Ball that the traced patch is clipped to.
    pub radius: f64,
    pub tol_sep: f64,
}

impl Default for SeparationParams {
    fn default() -> Self {
        SeparationParams { patch_radius: 0.5, grid: 21, radius: 1.0, tol_sep: 1e-3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafSeparation {
    pub separated: bool,
    pub min_rho: f64,
    pub traced: usize,
    pub solved_for: usize,
}

/// Traces a patch of the component of `{f = f(q)}` through `q` and checks
/// that `|ρ|` stays above `tol_sep · scale` on it.
pub fn leaf_separation_check(
    h: &Hypersurface,
    f: &HolomorphicFn,
    q: &[Complex64],
    params: &SeparationParams,
) -> Result<LeafSeparation> {
    if h.dim() != 2 || f.dim() != 2 {
        return Err(Error::UnsupportedDimension(h.dim()));
    }
    let scale = h.scale();
    if h.value(q).abs() <= 1e-9 * scale {
        return Err(Error::InvalidInput("q lies on the hypersurface".into()));
    }
    let target = f.value(q);
    let g = f.gradient(q);
    let s = if g[0].norm() >= g[1].norm() { 0 } else { 1 };
    let free = 1 - s;
    if g[s].norm() < 1e-12 {
        return Err(Error::Numeric("the level set is singular at q".into()));
    }
    let m = params.grid.max(3);
    let step = 2.0 * params.patch_radius / (m - 1) as f64;
    let node = |i: usize, j: usize| {
        q[free] + Complex64::new(-params.patch_radius + i as f64 * step, -params.patch_radius + j as f64 * step)
    };
    let in_disc = |i: usize, j: usize| (node(i, j) - q[free]).norm() <= params.patch_radius + 1e-12;
    let newton = |mut z: [Complex64; 2]| -> Option<[Complex64; 2]> {
        for _ in 0..30 {
            let r = f.value(&z) - target;
            if r.norm() <= 1e-13 * (1.0 + target.norm()) {
                return Some(z);
            }
            let d = f.gradient(&z)[s];
            if d.norm() == 0.0 || !d.is_finite() {
                return None;
            }
            z[s] -= r / d;
        }
        None
    };
    let c = m / 2;
    let mut solved: Vec<Option<[Complex64; 2]>> = vec![None; m * m];
    solved[c * m + c] = Some([q[0], q[1]]);
    let mut queue = VecDeque::from([(c, c)]);
    while let Some((i, j)) = queue.pop_front() {
        let base = solved[i * m + j].expect("queued nodes are solved");
        for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
            let (ni, nj) = (i as i64 + di, j as i64 + dj);
            if ni < 0 || nj < 0 || ni >= m as i64 || nj >= m as i64 {
                continue;
            }
            let (ni, nj) = (ni as usize, nj as usize);
            if solved[ni * m + nj].is_some() || !in_disc(ni, nj) {
                continue;
            }
            let mut z = base;
            z[free] = node(ni, nj);
            if let Some(z) = newton(z) {
                // stay on the same branch: the solved coordinate moves continuously
                if (z[s] - base[s]).norm() < 10.0 * step * (1.0 + (g[free] / g[s]).norm()) {
                    solved[ni * m + nj] = Some(z);
                    queue.push_back((ni, nj));
                }
            }
        }
    }
    let total = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|&(i, j)| in_disc(i, j)).count();
    let pts: Vec<[Complex64; 2]> = solved.into_iter().flatten().collect();
    if 2 * pts.len() < total {
        return Err(Error::Numeric(format!("continuation reached {} of {} patch nodes", pts.len(), total)));
    }
    let inside: Vec<&[Complex64; 2]> =
        pts.iter().filter(|z| (z[0].norm_sqr() + z[1].norm_sqr()).sqrt() <= params.radius).collect();
    let min_rho = inside.iter().map(|z| h.value(&z[..]).abs()).fold(f64::INFINITY, f64::min);
    Ok(LeafSeparation { separated: min_rho > params.tol_sep * scale, min_rho, traced: pts.len(), solved_for: s })
}

#[derive(Clone, Debug)]
pub struct SegreSearchParams {
    pub radius: f64,
    /// Samples inside `B(r0)` are ignored.
    pub r0: f64,
    pub budget: usize,
    pub tol_sep: f64,
    pub samples: usize,
    pub seed: u64,
    /// Tried first, before random candidates.
    pub candidates: Vec<[GaussianRational; 2]>,
}

impl Default for SegreSearchParams {
    fn default() -> Self {
        SegreSearchParams {
            radius: 1.0,
            r0: 0.1,
            budget: 32,
            tol_sep: 1e-3,
            samples: 1500,
            seed: 0,
            candidates: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SegreCandidate {
    pub w0: [String; 2],
    #[serde(skip)]
    pub exact: [GaussianRational; 2],
    pub on_hypersurface: bool,
    /// `min |ρ(z, w̄0)|` over `Γ ∩ B̄(R) ∖ B(r0)`.
    pub min_value: f64,
    /// `min_value / max |ρ(z, w̄0)|` over the same samples.
    pub relative: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SegreSeparation {
    pub accepted: SegreCandidate,
    pub rejected: Vec<SegreCandidate>,
    pub samples: usize,
}

/// Evaluates one candidate against a fixed sample of `Γ ∩ B̄(R) ∖ B(r0)`.
pub fn evaluate_segre_candidate(
    h: &Hypersurface,
    w0: &[GaussianRational; 2],
    samples: &[Vec<f64>],
    params: &SegreSearchParams,
) -> SegreCandidate {
    let w: Vec<Complex64> = w0.iter().map(|c| c.to_complex()).collect();
    let label = [w0[0].to_string(), w0[1].to_string()];
    let on = h.value(&w).abs() <= 1e-9 * h.scale();
    if on || samples.is_empty() {
        return SegreCandidate {
            w0: label,
            exact: w0.clone(),
            on_hypersurface: on,
            min_value: 0.0,
            relative: 0.0,
            accepted: false,
        };
    }
    let rho = h.rho();
    let g = |z: &[Complex64]| rho.eval(z, &w);
    let dg: Vec<NumPoly> = (0..2).map(|k| NumPoly::from_poly(rho.diff(Slot::Z(k)).poly())).collect();
    let lift = |z: &[Complex64]| -> Vec<Complex64> { z.iter().copied().chain(w.iter().map(|c| c.conj())).collect() };
    let mut vals: Vec<(f64, usize)> = samples.iter().enumerate().map(|(k, x)| (g(&to_complex(x)).norm(), k)).collect();
    let max = vals.iter().map(|v| v.0).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut min = vals[0].0;
    let in_annulus = |x: &[f64]| {
        let r = x.iter().map(|a| a * a).sum::<f64>().sqrt();
        r >= params.r0 && r <= params.radius
    };
    for &(_, k) in vals.iter().take(8) {
        let mut x = samples[k].clone();
        for _ in 0..30 {
            let z = to_complex(&x);
            let v = g(&z);
            let l = lift(&z);
            let grad: Vec<Complex64> = dg.iter().map(|d| d.eval(&l)).collect();
            let n2: f64 = grad.iter().map(|c| c.norm_sqr()).sum();
            if n2 == 0.0 {
                break;
            }
            let z2: Vec<Complex64> = z.iter().zip(&grad).map(|(zi, gi)| zi - v * gi.conj() / n2).collect();
            match h.real().project(&to_real(&z2), 20, 1e-12) {
                Some(p) if in_annulus(&p) => x = p,
                _ => break,
            }
        }
        min = min.min(g(&to_complex(&x)).norm());
    }
    let relative = min / max;
    SegreCandidate {
        w0: label,
        exact: w0.clone(),
        on_hypersurface: false,
        min_value: min,
        relative,
        accepted: relative > params.tol_sep,
    }
}

/// Samples of `Γ ∩ B̄(R) ∖ B(r0)`.
pub fn annulus_samples(h: &Hypersurface, params: &SegreSearchParams) -> Vec<Vec<f64>> {
    let sp = SampleParams { count: params.samples, max_lines: params.samples * 20, seed: params.seed, ..Default::default() };
    sample_zero_set(h.real(), &Region::origin_ball(h.dim(), params.radius), &sp)
        .into_iter()
        .filter(|x| x.iter().map(|a| a * a).sum::<f64>().sqrt() >= params.r0)
        .collect()
}

/// Randomized search for `w0 ∉ Γ` whose Segre variety stays away from `Γ`
/// outside `B(r0)`. Requires a Segre degenerate origin, so `0 ∈ Q_{w0}`.
pub fn find_separating_segre_point(h: &Hypersurface, params: &SegreSearchParams) -> Result<SegreSeparation> {
    if h.dim() != 2 {
        return Err(Error::UnsupportedDimension(h.dim()));
    }
    let zero = [GaussianRational::zero(), GaussianRational::zero()];
    if !h.rho().eval_exact(&zero, &zero).is_zero() || !h.segre(&zero)?.degenerate {
        return Err(Error::InvalidInput("the origin is not a Segre degenerate point".into()));
    }
    let samples = annulus_samples(h, params);
    if samples.is_empty() {
        return Err(Error::TooFewSamples { found: 0, needed: 1 });
    }
    let mut rng = task_rng(params.seed, 1 << 44);
    let mut random = std::iter::from_fn(move || {
        let mut pick = || GaussianRational::from_parts((rng.gen_range(-2..=2), 1), (rng.gen_range(-2..=2), 1));
        Some([pick(), pick()])
    });
    let mut rejected = Vec::new();
    for k in 0..params.budget.max(params.candidates.len()) {
        let w0 = match params.candidates.get(k) {
            Some(w) => w.clone(),
            None => random.next().expect("infinite"),
        };
        if w0.iter().all(|c| c.is_zero()) {
            continue;
        }
        let c = evaluate_segre_candidate(h, &w0, &samples, params);
        if c.accepted {
            return Ok(SegreSeparation { accepted: c, rejected, samples: samples.len() });
        }
        rejected.push(c);
    }
    let best = rejected.iter().max_by(|a, b| a.relative.total_cmp(&b.relative));
    Err(Error::BudgetExhausted(match best {
        Some(b) => format!("best w0 = ({}, {}) with relative minimum {:.3e}", b.w0[0], b.w0[1], b.relative),
        None => "no candidate evaluated".into(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::parse::parse_function;

    fn gi(a: i64, b: i64) -> [GaussianRational; 2] {
        [GaussianRational::from_integer(a), GaussianRational::from_integer(b)]
    }

    #[test]
    fn separated_fibre() {
        let h = Hypersurface::parse("dim 2\nz1 + ~z1 - 1").unwrap().0;
        let f = HolomorphicFn::new(&parse_function("z1^2", Some(2)).unwrap()).unwrap();
        let q = [Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.0)];
        let r = leaf_separation_check(&h, &f, &q, &SeparationParams::default()).unwrap();
        assert!(r.separated && (r.min_rho - 2.0).abs() < 1e-9, "{r:?}");
        let q = [Complex64::new(0.2, 0.0), Complex64::new(0.0, 0.0)];
        // the fibre {z1 = 0.2 + ...} is a vertical line; z1 = 0.2 is off Γ
        assert!(leaf_separation_check(&h, &f, &q, &SeparationParams::default()).unwrap().separated);
    }

    #[test]
    fn fibre_meeting_the_hypersurface() {
        let h = fixtures::hyperplane();
        let f = HolomorphicFn::new(&parse_function("z1", Some(2)).unwrap()).unwrap();
        let q = [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)];
        let r = leaf_separation_check(&h, &f, &q, &SeparationParams::default()).unwrap();
        assert!(!r.separated && r.min_rho < 1e-12, "{r:?}");
        assert_eq!(r.solved_for, 0);
    }

    #[test]
    fn cone_candidates() {
        let h = fixtures::cone();
        let params = SegreSearchParams::default();
        let samples = annulus_samples(&h, &params);
        assert!(samples.len() > 500);
        let good = evaluate_segre_candidate(&h, &gi(1, 2), &samples, &params);
        assert!(good.accepted && good.min_value > 0.07, "{good:?}");
        let bad = evaluate_segre_candidate(&h, &gi(1, 1), &samples, &params);
        assert!(!bad.accepted && bad.relative < 1e-6, "{bad:?}");
        let on = evaluate_segre_candidate(&h, &gi(0, 0), &samples, &params);
        assert!(on.on_hypersurface && !on.accepted);
        let found = find_separating_segre_point(
            &h,
            &SegreSearchParams { candidates: vec![gi(1, 1), gi(1, 2)], ..Default::default() },
        )
        .unwrap();
        assert_eq!(found.accepted.w0, ["1".to_string(), "2".to_string()]);
        assert_eq!(found.rejected.len(), 1);
        assert!(find_separating_segre_point(&fixtures::hyperplane(), &params).is_err());
    }
}
