//! Images `f(Γ ∩ B̄)` of a first integral on a grid, and escape paths from
//! `f(q)` to the window boundary that avoid them.

use std::collections::{HashMap, VecDeque};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypersurface::Hypersurface;
use crate::poly::HolomorphicFn;
use crate::sampling::{sample_zero_set, to_complex, Region, SampleParams};

#[derive(Clone, Debug)]
pub struct ImageParams {
    pub samples: usize,
    pub radius: f64,
    /// Half side of the square window; default `2 max |f|`.
    pub half_width: Option<f64>,
    /// Cell size; default one hundredth of the window side.
    pub grid: Option<f64>,
    pub seed: u64,
}

impl Default for ImageParams {
    fn default() -> Self {
        ImageParams { samples: 6000, radius: 1.0, half_width: None, grid: None, seed: 0 }
    }
}

/// Masked grid over the square window `[-W, W]²` of the value plane.
#[derive(Clone, Debug)]
pub struct PlanarImage {
    pub half_width: f64,
    pub h: f64,
    pub r_mask: f64,
    pub cells: usize,
    /// `f(0)`, subtracted from every value.
    pub offset: Complex64,
    pub samples: Vec<Complex64>,
    mask: Vec<bool>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl PlanarImage {
    /// Mask the cells within `2h` of the given image points.
    pub fn from_samples(samples: Vec<Complex64>, half_width: f64, h: f64, offset: Complex64) -> Self {
        let cells = ((2.0 * half_width) / h).round().max(1.0) as usize;
        let h = 2.0 * half_width / cells as f64;
        let r_mask = 2.0 * h;
        let mut mask = vec![false; cells * cells];
        let reach = (r_mask / h).ceil() as i64 + 1;
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (k, s) in samples.iter().enumerate() {
            buckets.entry(bucket(*s, r_mask)).or_default().push(k);
            let ci = ((s.re + half_width) / h).floor() as i64;
            let cj = ((s.im + half_width) / h).floor() as i64;
            for i in ci - reach..=ci + reach {
                for j in cj - reach..=cj + reach {
                    if i < 0 || j < 0 || i >= cells as i64 || j >= cells as i64 {
                        continue;
                    }
                    let c = Complex64::new(-half_width + (i as f64 + 0.5) * h, -half_width + (j as f64 + 0.5) * h);
                    if (c - s).norm() < r_mask {
                        mask[i as usize * cells + j as usize] = true;
                    }
                }
            }
        }
        PlanarImage { half_width, h, r_mask, cells, offset, samples, mask, buckets }
    }

    pub fn center(&self, cell: (usize, usize)) -> Complex64 {
        Complex64::new(
            -self.half_width + (cell.0 as f64 + 0.5) * self.h,
            -self.half_width + (cell.1 as f64 + 0.5) * self.h,
        )
    }

    pub fn cell_of(&self, v: Complex64) -> Option<(usize, usize)> {
        if v.re.abs() >= self.half_width || v.im.abs() >= self.half_width {
            return None;
        }
        let i = ((v.re + self.half_width) / self.h).floor() as usize;
        let j = ((v.im + self.half_width) / self.h).floor() as usize;
        Some((i.min(self.cells - 1), j.min(self.cells - 1)))
    }

    pub fn is_masked(&self, cell: (usize, usize)) -> bool {
        self.mask[cell.0 * self.cells + cell.1]
    }

    /// True when `v` falls in a masked cell of the window.
    pub fn value_masked(&self, v: Complex64) -> bool {
        self.cell_of(v).is_some_and(|c| self.is_masked(c))
    }

    pub fn masked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    fn on_boundary(&self, c: (usize, usize)) -> bool {
        c.0 == 0 || c.1 == 0 || c.0 + 1 == self.cells || c.1 + 1 == self.cells
    }

    /// Distance from `v` to the nearest image sample, or a lower bound of
    /// `3 r_mask` when none is that close.
    pub fn distance_to_image(&self, v: Complex64) -> f64 {
        let (bi, bj) = bucket(v, self.r_mask);
        let mut best = 3.0 * self.r_mask;
        for i in bi - 3..=bi + 3 {
            for j in bj - 3..=bj + 3 {
                if let Some(ids) = self.buckets.get(&(i, j)) {
                    for &k in ids {
                        best = best.min((self.samples[k] - v).norm());
                    }
                }
            }
        }
        best
    }

    /// Breadth-first search over unmasked cells (8 neighbours) from the cell
    /// of `v` to the window boundary.
    pub fn escape(&self, v: Complex64) -> Result<EscapeOutcome> {
        let Some(start) = self.cell_of(v) else {
            return Ok(EscapeOutcome::Certificate(EscapeCertificate {
                kind: EscapeKind::OutsideWindow,
                start: [v.re, v.im],
                path: Vec::new(),
                clearance: self.distance_to_image(v),
                min_rho: None,
            }));
        };
        if self.is_masked(start) {
            return Err(Error::InvalidInput("f(q) lies in the masked image".into()));
        }
        let m = self.cells;
        let idx = |c: (usize, usize)| c.0 * m + c.1;
        let mut parent = vec![usize::MAX; m * m];
        parent[idx(start)] = idx(start);
        let mut queue = VecDeque::from([start]);
        let mut end = None;
        while let Some(c) = queue.pop_front() {
            if self.on_boundary(c) {
                end = Some(c);
                break;
            }
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (c.0 as i64 + di, c.1 as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= m as i64 || nj >= m as i64 {
                        continue;
                    }
                    let nc = (ni as usize, nj as usize);
                    if parent[idx(nc)] == usize::MAX && !self.is_masked(nc) {
                        parent[idx(nc)] = idx(c);
                        queue.push_back(nc);
                    }
                }
            }
        }
        let Some(end) = end else {
            // Masked cells adjacent to the reached region enclose f(q).
            let mut contour = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    if !self.is_masked((i, j)) {
                        continue;
                    }
                    let touches = (-1i64..=1).any(|di| {
                        (-1i64..=1).any(|dj| {
                            let (ni, nj) = (i as i64 + di, j as i64 + dj);
                            ni >= 0
                                && nj >= 0
                                && ni < m as i64
                                && nj < m as i64
                                && parent[ni as usize * m + nj as usize] != usize::MAX
                        })
                    });
                    if touches {
                        let c = self.center((i, j));
                        contour.push([c.re, c.im]);
                    }
                }
            }
            let reached = parent.iter().filter(|p| **p != usize::MAX).count();
            return Ok(EscapeOutcome::Blocked(Blocked { start: [v.re, v.im], reached_cells: reached, contour }));
        };
        let mut cells = vec![end];
        let mut cur = idx(end);
        while parent[cur] != cur {
            cur = parent[cur];
            cells.push((cur / m, cur % m));
        }
        cells.reverse();
        let clearance = cells.iter().map(|c| self.distance_to_image(self.center(*c))).fold(f64::INFINITY, f64::min);
        Ok(EscapeOutcome::Certificate(EscapeCertificate {
            kind: EscapeKind::GridPath,
            start: [v.re, v.im],
            path: cells.iter().map(|c| [c.0, c.1]).collect(),
            clearance,
            min_rho: None,
        }))
    }
}

fn bucket(v: Complex64, size: f64) -> (i64, i64) {
    ((v.re / size).floor() as i64, (v.im / size).floor() as i64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EscapeKind {
    GridPath,
    OutsideWindow,
    /// `f(q)` lies on the image but the fibre through `q` avoids `Γ`.
    SeparatedLeaf,
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeCertificate {
    pub kind: EscapeKind,
    pub start: [f64; 2],
    /// Grid cells `(i, j)` from the start cell to the window boundary.
    pub path: Vec<[usize; 2]>,
    pub clearance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_rho: Option<f64>,
}

impl EscapeCertificate {
    /// Check the certificate against the image alone: unmasked adjacent
    /// cells ending on the boundary, with clearance at least `r_mask / 2`.
    pub fn validate(&self, image: &PlanarImage) -> bool {
        match self.kind {
            EscapeKind::OutsideWindow => image.cell_of(Complex64::new(self.start[0], self.start[1])).is_none(),
            EscapeKind::SeparatedLeaf => true,
            EscapeKind::GridPath => {
                let Some(last) = self.path.last() else { return false };
                let cells: Vec<(usize, usize)> = self.path.iter().map(|c| (c[0], c[1])).collect();
                cells.iter().all(|c| !image.is_masked(*c))
                    && cells.windows(2).all(|w| {
                        let di = w[0].0.abs_diff(w[1].0);
                        let dj = w[0].1.abs_diff(w[1].1);
                        di <= 1 && dj <= 1 && (di, dj) != (0, 0)
                    })
                    && image.on_boundary((last[0], last[1]))
                    && self.clearance >= image.r_mask / 2.0
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Blocked {
    pub start: [f64; 2],
    pub reached_cells: usize,
    /// Centers of the masked cells bounding the reached region.
    pub contour: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum EscapeOutcome {
    Certificate(EscapeCertificate),
    Blocked(Blocked),
    Undetermined { reason: String },
}

impl EscapeOutcome {
    pub fn is_certificate(&self) -> bool {
        matches!(self, EscapeOutcome::Certificate(_))
    }
}

/// Sample `Γ ∩ B̄(R)` and push the samples through `f - f(0)`.
pub fn image_of_first_integral(h: &Hypersurface, f: &HolomorphicFn, params: &ImageParams) -> Result<PlanarImage> {
    let n = h.dim();
    if f.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: f.dim() });
    }
    let origin = vec![Complex64::new(0.0, 0.0); n];
    if f.den_abs(&origin) == 0.0 {
        return Err(Error::InvalidInput("first integral has a pole at the origin".into()));
    }
    let offset = f.value(&origin);
    let sp = SampleParams { count: params.samples, max_lines: params.samples * 20, seed: params.seed, ..Default::default() };
    let pts = sample_zero_set(h.real(), &Region::origin_ball(n, params.radius), &sp);
    if pts.is_empty() {
        return Err(Error::TooFewSamples { found: 0, needed: 1 });
    }
    let mut values = Vec::with_capacity(pts.len());
    for x in &pts {
        let z = to_complex(x);
        if f.den_abs(&z) < 1e-12 {
            return Err(Error::InvalidInput("first integral has poles on the sampled hypersurface".into()));
        }
        values.push(f.value(&z) - offset);
    }
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-12);
    let half_width = params.half_width.unwrap_or(2.0 * max);
    let grid = params.grid.unwrap_or(0.01 * 2.0 * half_width);
    Ok(PlanarImage::from_samples(values, half_width, grid, offset))
}
