//! Floating evaluation of real-valued polynomials on ℝ^{2n} and random
//! sampling of their zero sets.
//!
//! A point of ℂⁿ is stored as `[x1, y1, x2, y2, ...]`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::poly::{BiPoly, NumPoly, Slot};

/// Deterministic generator for sub-task `task` of a run seeded by `seed`.
pub fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

pub fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

pub fn to_real(z: &[Complex64]) -> Vec<f64> {
    z.iter().flat_map(|c| [c.re, c.im]).collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// A Hermitian polynomial together with its holomorphic partials, ready for
/// fast real evaluation.
#[derive(Clone, Debug)]
pub struct RealPoly {
    n: usize,
    value: NumPoly,
    dz: Vec<NumPoly>,
    scale: f64,
}

impl RealPoly {
    pub fn new(p: &BiPoly) -> Self {
        let n = p.dim();
        RealPoly {
            n,
            value: NumPoly::from_poly(p.poly()),
            dz: (0..n).map(|k| NumPoly::from_poly(p.diff(Slot::Z(k)).poly())).collect(),
            scale: p.poly().max_abs_coeff().max(f64::MIN_POSITIVE),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Largest coefficient modulus; tolerances are relative to it.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn lift(z: &[Complex64]) -> Vec<Complex64> {
        z.iter().copied().chain(z.iter().map(|c| c.conj())).collect()
    }

    pub fn value_c(&self, z: &[Complex64]) -> f64 {
        self.value.eval(&Self::lift(z)).re
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.value_c(&to_complex(x))
    }

    /// `(∂ρ/∂z_k)_k`.
    pub fn dz(&self, z: &[Complex64]) -> Vec<Complex64> {
        let l = Self::lift(z);
        self.dz.iter().map(|d| d.eval(&l)).collect()
    }

    /// Real gradient: `∂x = 2 Re ρ_z`, `∂y = -2 Im ρ_z`.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.dz(&to_complex(x)).iter().flat_map(|d| [2.0 * d.re, -2.0 * d.im]).collect()
    }

    /// Newton projection onto the zero set along the gradient.
    pub fn project(&self, x: &[f64], steps: usize, tol: f64) -> Option<Vec<f64>> {
        let mut x = x.to_vec();
        for _ in 0..steps {
            let v = self.value(&x);
            if v.abs() < tol * self.scale {
                return Some(x);
            }
            let g = self.gradient(&x);
            let g2: f64 = g.iter().map(|a| a * a).sum();
            if g2 == 0.0 || !g2.is_finite() {
                return None;
            }
            for (xi, gi) in x.iter_mut().zip(&g) {
                *xi -= v * gi / g2;
            }
        }
        (self.value(&x).abs() < tol * self.scale).then_some(x)
    }

    /// Zeros of `ρ` on the segment `a + s d`, `s ∈ [0, 1]`, located by sign
    /// changes on `m` subintervals and bisection.
    pub fn segment_zeros(&self, a: &[f64], d: &[f64], m: usize) -> Vec<Vec<f64>> {
        let at = |s: f64| -> Vec<f64> { a.iter().zip(d).map(|(ai, di)| ai + s * di).collect() };
        let mut out = Vec::new();
        let mut s0 = 0.0;
        let mut v0 = self.value(&at(0.0));
        for k in 1..=m {
            let s1 = k as f64 / m as f64;
            let v1 = self.value(&at(s1));
            if v0 == 0.0 {
                out.push(at(s0));
            } else if v0 * v1 < 0.0 {
                let (mut lo, mut hi, mut vlo) = (s0, s1, v0);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    let vm = self.value(&at(mid));
                    if vm * vlo <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        vlo = vm;
                    }
                }
                out.push(at(0.5 * (lo + hi)));
            }
            s0 = s1;
            v0 = v1;
        }
        out
    }

    /// True iff `ρ` changes sign along some of `lines` random chords of the
    /// ball `B(center, r)`.
    pub fn changes_sign_near(&self, center: &[f64], r: f64, lines: usize, rng: &mut impl Rng) -> bool {
        (0..lines).any(|_| {
            let a = random_in_ball(center, r, rng);
            let d = random_unit(center.len(), rng);
            let (s_lo, s_hi) = chord(&a, &d, center, r);
            let start: Vec<f64> = a.iter().zip(&d).map(|(ai, di)| ai + s_lo * di).collect();
            let dir: Vec<f64> = d.iter().map(|di| di * (s_hi - s_lo)).collect();
            let at = |s: f64| -> Vec<f64> { start.iter().zip(&dir).map(|(p, q)| p + s * q).collect() };
            let v0 = self.value(&at(0.0));
            (1..=32).any(|k| self.value(&at(k as f64 / 32.0)) * v0 < 0.0)
        })
    }
}

pub fn random_unit(dim: usize, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = norm(&v);
        if r > 1e-3 && r <= 1.0 {
            return v.iter().map(|x| x / r).collect();
        }
    }
}

pub fn random_in_ball(center: &[f64], r: f64, rng: &mut impl Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..center.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if norm(&v) <= 1.0 {
            return center.iter().zip(&v).map(|(c, x)| c + r * x).collect();
        }
    }
}

/// Parameter range of the line `a + s d` (unit `d`) inside `B(center, r)`.
fn chord(a: &[f64], d: &[f64], center: &[f64], r: f64) -> (f64, f64) {
    let ac: Vec<f64> = a.iter().zip(center).map(|(x, c)| x - c).collect();
    let b: f64 = ac.iter().zip(d).map(|(x, y)| x * y).sum();
    let c: f64 = ac.iter().map(|x| x * x).sum::<f64>() - r * r;
    let disc = (b * b - c).max(0.0).sqrt();
    (-b - disc, -b + disc)
}

/// Region in which zero sets are sampled.
#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
}

impl Region {
    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        Region::Ball { center, radius }
    }

    pub fn origin_ball(n: usize, radius: f64) -> Self {
        Region::Ball { center: vec![0.0; 2 * n], radius }
    }

    pub fn cube(n: usize, half: f64) -> Self {
        Region::Box { lo: vec![-half; 2 * n], hi: vec![half; 2 * n] }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Region::Ball { center, radius } => {
                norm(&x.iter().zip(center).map(|(a, b)| a - b).collect::<Vec<_>>()) <= *radius
            }
            Region::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| l <= v && v <= h),
        }
    }

    fn random_point(&self, rng: &mut impl Rng) -> Vec<f64> {
        match self {
            Region::Ball { center, radius } => random_in_ball(center, *radius, rng),
            Region::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| rng.gen_range(*l..=*h)).collect(),
        }
    }

    /// Segment through a random point in a random direction, clipped to the
    /// region.
    fn random_chord(&self, rng: &mut impl Rng) -> (Vec<f64>, Vec<f64>) {
        let a = self.random_point(rng);
        let d = random_unit(a.len(), rng);
        let (s_lo, s_hi) = match self {
            Region::Ball { center, radius } => chord(&a, &d, center, *radius),
            Region::Box { lo, hi } => {
                let (mut s_lo, mut s_hi) = (f64::NEG_INFINITY, f64::INFINITY);
                for k in 0..a.len() {
                    if d[k].abs() < 1e-14 {
                        continue;
                    }
                    let t1 = (lo[k] - a[k]) / d[k];
                    let t2 = (hi[k] - a[k]) / d[k];
                    s_lo = s_lo.max(t1.min(t2));
                    s_hi = s_hi.min(t1.max(t2));
                }
                (s_lo, s_hi)
            }
        };
        let start: Vec<f64> = a.iter().zip(&d).map(|(x, y)| x + s_lo * y).collect();
        let dir: Vec<f64> = d.iter().map(|y| y * (s_hi - s_lo)).collect();
        (start, dir)
    }
}

/// Parameters for zero-set sampling.
#[derive(Clone, Debug)]
pub struct SampleParams {
    pub count: usize,
    pub max_lines: usize,
    pub subdivisions: usize,
    pub seed: u64,
    /// Minimum `|∇ρ| / scale` for a sample to count as regular.
    pub min_grad: f64,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams { count: 200, max_lines: 4000, subdivisions: 48, seed: 0, min_grad: 1e-6 }
    }
}

/// Up to `params.count` points of `{ρ = 0}` inside `region`, found by random
/// line shooting and refined by Newton projection. Lines are processed in
/// parallel batches; the output is deterministic for a fixed seed.
pub fn sample_zero_set(rho: &RealPoly, region: &Region, params: &SampleParams) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let batch = 64usize;
    let mut line = 0usize;
    while out.len() < params.count && line < params.max_lines {
        let upto = (line + batch).min(params.max_lines);
        let found: Vec<Vec<Vec<f64>>> = (line..upto)
            .into_par_iter()
            .map(|k| {
                let mut rng = task_rng(params.seed, k as u64);
                let (a, d) = region.random_chord(&mut rng);
                rho.segment_zeros(&a, &d, params.subdivisions)
                    .into_iter()
                    .filter_map(|p| rho.project(&p, 20, 1e-12))
                    .filter(|p| region.contains(p))
                    .filter(|p| norm(&rho.gradient(p)) > params.min_grad * rho.scale())
                    .collect()
            })
            .collect();
        for pts in found {
            for p in pts {
                if out.len() < params.count {
                    out.push(p);
                }
            }
        }
        line = upto;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_function;

    #[test]
    fn sphere_samples_lie_on_sphere() {
        let rho = parse_function("z1*~z1 + z2*~z2 - 1", None).unwrap().num;
        let rp = RealPoly::new(&rho);
        let params = SampleParams { count: 50, ..Default::default() };
        let pts = sample_zero_set(&rp, &Region::cube(2, 1.5), &params);
        assert_eq!(pts.len(), 50);
        for p in &pts {
            assert!((norm(p) - 1.0).abs() < 1e-10);
        }
        // same seed, same samples
        assert_eq!(pts, sample_zero_set(&rp, &Region::cube(2, 1.5), &params));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let rho = parse_function("y2^2 - 4*(y1^2 + x2)*y1^2", None).unwrap().num;
        let rp = RealPoly::new(&rho);
        let x = [0.3, -0.2, 0.1, 0.4];
        let g = rp.gradient(&x);
        for k in 0..4 {
            let mut a = x;
            let mut b = x;
            a[k] += 1e-6;
            b[k] -= 1e-6;
            let fd = (rp.value(&a) - rp.value(&b)) / 2e-6;
            assert!((fd - g[k]).abs() < 1e-7, "{k}: {fd} vs {}", g[k]);
        }
    }
}
