//! Grid smoothing: finite-difference derivative rasters and
//! guided-point-constrained damped-Jacobi relaxation, with an optional
//! coarse-to-fine pyramid.

use crate::error::{Error, Result};
use crate::extend::EnvelopePolicy;
use crate::field::{GuidingSet, RealField};
use crate::graph::DomainGraph;
use crate::real_fit::{fit_real_gvf, ScaleDerivation};

/// Relaxation configuration. `passes` is the smoothness-order knob: each
/// pass runs up to `iterations` damped-Jacobi sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothConfig {
    pub passes: u32,
    pub iterations: u32,
    /// Step size; must lie in (0, 0.25], the stability bound for the
    /// 5-point Laplacian.
    pub lambda: f64,
    /// Early stop once the largest per-sweep update falls below this.
    pub tolerance: f64,
}

impl Default for SmoothConfig {
    fn default() -> Self {
        SmoothConfig { passes: 1, iterations: 100, lambda: 0.2, tolerance: 1e-8 }
    }
}

impl SmoothConfig {
    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 0.25) {
            return Err(Error::InvalidLambda { lambda: self.lambda });
        }
        Ok(())
    }
}

/// Per-cell partial derivatives of a grid field (value per cell width).
#[derive(Debug, Clone, PartialEq)]
pub struct GradientRaster {
    pub width: usize,
    pub height: usize,
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
}

/// What a relaxation run did: sweeps executed and the last max update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothReport {
    pub sweeps: u64,
    pub final_update: f64,
}

/// Sum over edges of the squared value difference.
pub fn dirichlet_energy(g: &DomainGraph, field: &RealField) -> f64 {
    g.edges().map(|(a, b)| (field.value(a) - field.value(b)).powi(2)).sum()
}

/// Central differences in the interior, one-sided first differences at
/// the boundary; a 1-cell axis gets a zero derivative.
pub fn partial_derivatives(g: &DomainGraph, field: &RealField) -> Result<GradientRaster> {
    let (width, height) = g.grid_dims().ok_or(Error::NotAGrid)?;
    if field.len() != g.vertex_count() {
        return Err(Error::FieldLengthMismatch { expected: g.vertex_count(), actual: field.len() });
    }
    let f = field.values();
    let at = |x: usize, y: usize| f[y * width + x];
    let mut dx = vec![0.0; f.len()];
    let mut dy = vec![0.0; f.len()];
    for y in 0..height {
        for x in 0..width {
            let i = y * width + x;
            if width >= 2 {
                dx[i] = if x == 0 {
                    at(1, y) - at(0, y)
                } else if x == width - 1 {
                    at(x, y) - at(x - 1, y)
                } else {
                    (at(x + 1, y) - at(x - 1, y)) / 2.0
                };
            }
            if height >= 2 {
                dy[i] = if y == 0 {
                    at(x, 1) - at(x, 0)
                } else if y == height - 1 {
                    at(x, y) - at(x, y - 1)
                } else {
                    (at(x, y + 1) - at(x, y - 1)) / 2.0
                };
            }
        }
    }
    Ok(GradientRaster { width, height, dx, dy })
}

/// Damped-Jacobi relaxation toward the discrete harmonic interpolant:
/// `F <- F + lambda * (sum of neighbors - degree * F)` on free cells,
/// guided cells pinned to their observed values. Each sweep reads only
/// the previous iterate.
pub fn smooth_constrained(
    g: &DomainGraph,
    field: &RealField,
    guiding: &GuidingSet<f64>,
    cfg: &SmoothConfig,
) -> Result<(RealField, SmoothReport)> {
    cfg.validate()?;
    g.grid_dims().ok_or(Error::NotAGrid)?;
    if field.len() != g.vertex_count() {
        return Err(Error::FieldLengthMismatch { expected: g.vertex_count(), actual: field.len() });
    }
    if guiding.max_vertex() >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: guiding.max_vertex(),
            vertex_count: g.vertex_count(),
        });
    }

    let n = g.vertex_count();
    let mut pinned = vec![false; n];
    for &(v, _) in guiding.entries() {
        pinned[v] = true;
    }

    let mut current = field.clone();
    current.snap_to(guiding);
    let mut next = current.clone();
    let mut report = SmoothReport { sweeps: 0, final_update: 0.0 };

    'outer: for _pass in 0..cfg.passes {
        for _ in 0..cfg.iterations {
            let mut max_update = 0.0f64;
            {
                let src = current.values();
                let dst = next.values_mut();
                for v in 0..n {
                    if pinned[v] {
                        dst[v] = src[v];
                        continue;
                    }
                    let neighbors = g.neighbors(v);
                    let sum: f64 = neighbors.iter().map(|&w| src[w]).sum();
                    let updated = src[v] + cfg.lambda * (sum - neighbors.len() as f64 * src[v]);
                    max_update = max_update.max((updated - src[v]).abs());
                    dst[v] = updated;
                }
            }
            std::mem::swap(&mut current, &mut next);
            report.sweeps += 1;
            report.final_update = max_update;
            if max_update < cfg.tolerance {
                break 'outer;
            }
        }
    }
    Ok((current, report))
}

/// Per-level sweep counts and the scale used by the coarsest fit.
#[derive(Debug, Clone, PartialEq)]
pub struct MultilevelReport {
    pub derivation: ScaleDerivation,
    /// Sweeps per level, coarsest first; the last entry is the finest grid.
    pub level_sweeps: Vec<u64>,
    pub final_update: f64,
}

impl MultilevelReport {
    pub fn total_sweeps(&self) -> u64 {
        self.level_sweeps.iter().sum()
    }

    pub fn finest_sweeps(&self) -> u64 {
        *self.level_sweeps.last().unwrap_or(&0)
    }
}

fn halve(extent: usize) -> usize {
    (extent + 1) / 2
}

/// Bilinear prolongation from the injection-coarsened grid: even fine
/// cells copy their coarse parent, odd cells average the straddling
/// parents (clamped at the border).
fn prolong(coarse: &RealField, cw: usize, ch: usize, fw: usize, fh: usize) -> RealField {
    let c = coarse.values();
    let cat = |x: usize, y: usize| c[y.min(ch - 1) * cw + x.min(cw - 1)];
    let mut fine = vec![0.0; fw * fh];
    for y in 0..fh {
        let (cy, ry) = (y / 2, y % 2);
        for x in 0..fw {
            let (cx, rx) = (x / 2, x % 2);
            fine[y * fw + x] = match (rx, ry) {
                (0, 0) => cat(cx, cy),
                (1, 0) => 0.5 * (cat(cx, cy) + cat(cx + 1, cy)),
                (0, 1) => 0.5 * (cat(cx, cy) + cat(cx, cy + 1)),
                _ => {
                    0.25 * (cat(cx, cy) + cat(cx + 1, cy) + cat(cx, cy + 1) + cat(cx + 1, cy + 1))
                }
            };
        }
    }
    RealField::new(fine)
}

/// Snap a fine guiding set onto a half-resolution grid (nearest coarse
/// cell). Colliding samples keep the first and warn.
fn coarsen_guiding(
    guiding: &GuidingSet<f64>,
    fw: usize,
    cw: usize,
    ch: usize,
) -> GuidingSet<f64> {
    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(guiding.len());
    let mut taken = std::collections::BTreeMap::new();
    for &(v, value) in guiding.entries() {
        let (x, y) = (v % fw, v / fw);
        let cx = ((x + 1) / 2).min(cw - 1);
        let cy = ((y + 1) / 2).min(ch - 1);
        let cv = cy * cw + cx;
        match taken.entry(cv) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(value);
                entries.push((cv, value));
            }
            std::collections::btree_map::Entry::Occupied(e) => {
                log::warn!(
                    "guiding samples collide on coarse cell {cv}; keeping {} and dropping {}",
                    e.get(),
                    value
                );
            }
        }
    }
    GuidingSet::new(entries, cw * ch).expect("coarsened guiding set stays valid")
}

/// Coarse-to-fine fit: extend and relax on the coarsest grid, then
/// prolong, re-snap the samples, and relax at each finer level. The
/// limit is the same constrained harmonic interpolant as a single-level
/// run; the pyramid only accelerates convergence.
pub fn multilevel_fit(
    g: &DomainGraph,
    guiding: &GuidingSet<f64>,
    levels: u32,
    cfg: &SmoothConfig,
    policy: EnvelopePolicy,
) -> Result<(RealField, MultilevelReport)> {
    if levels == 0 {
        return Err(Error::ZeroLevels);
    }
    cfg.validate()?;
    let (width, height) = g.grid_dims().ok_or(Error::NotAGrid)?;
    let required = 1usize << (levels - 1);
    if width < required || height < required {
        return Err(Error::TooManyLevels { levels, required, width, height });
    }

    // dims per level, finest first
    let mut dims = vec![(width, height)];
    for _ in 1..levels {
        let (w, h) = *dims.last().unwrap();
        dims.push((halve(w), halve(h)));
    }

    // guiding per level, finest first
    let mut guidings = vec![guiding.clone()];
    for level in 1..levels as usize {
        let (fw, _) = dims[level - 1];
        let (cw, ch) = dims[level];
        guidings.push(coarsen_guiding(guidings.last().unwrap(), fw, cw, ch));
    }

    let (cw, ch) = *dims.last().unwrap();
    let coarse_graph = DomainGraph::build_grid(cw, ch)?;
    let coarse_guiding = guidings.last().unwrap();
    let (coarse_init, derivation) = fit_real_gvf(&coarse_graph, coarse_guiding, policy)?;
    let (mut field, mut last) =
        smooth_constrained(&coarse_graph, &coarse_init, coarse_guiding, cfg)?;
    let mut level_sweeps = vec![last.sweeps];

    for level in (0..levels as usize - 1).rev() {
        let (fw, fh) = dims[level];
        let (pw, ph) = dims[level + 1];
        let fine_graph =
            if level == 0 { g.clone() } else { DomainGraph::build_grid(fw, fh)? };
        let init = prolong(&field, pw, ph, fw, fh);
        let (smoothed, report) = smooth_constrained(&fine_graph, &init, &guidings[level], cfg)?;
        field = smoothed;
        last = report;
        level_sweeps.push(report.sweeps);
    }

    Ok((field, MultilevelReport { derivation, level_sweeps, final_update: last.final_update }))
}
