//! End-to-end grid pipeline: sample ingestion, resolution determination,
//! fit + smooth composition, and raster writers.

use std::path::Path;

use crate::error::{Error, PipelineStep, Result};
use crate::extend::EnvelopePolicy;
use crate::field::{GuidingSet, RealField};
use crate::graph::DomainGraph;
use crate::pipeline::private_parse::parse_rows;
use crate::smoothing::{multilevel_fit, SmoothConfig};

/// An observation at a planar position (grid mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplePoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// An observation keyed by element id (mesh mode).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementSample {
    pub element: usize,
    pub value: f64,
}

/// Axis-aligned bounding box of the sampled region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl Bounds {
    pub fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Result<Self> {
        let ok = xmax > xmin && ymax > ymin;
        let finite =
            xmin.is_finite() && ymin.is_finite() && xmax.is_finite() && ymax.is_finite();
        if !ok || !finite {
            return Err(Error::InvalidBounds { xmin, ymin, xmax, ymax });
        }
        Ok(Bounds { xmin, ymin, xmax, ymax })
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.xmin && x <= self.xmax && y >= self.ymin && y <= self.ymax
    }
}

/// Grid resolution plus the region it covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    pub bounds: Bounds,
}

impl GridSpec {
    pub fn new(width: usize, height: usize, bounds: Bounds) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::ZeroGridDimension { width, height });
        }
        Ok(GridSpec { width, height, bounds })
    }

    /// Cell containing `(x, y)` (equivalently the nearest cell center),
    /// clamped to the grid.
    fn snap(&self, x: f64, y: f64) -> usize {
        let cw = (self.bounds.xmax - self.bounds.xmin) / self.width as f64;
        let ch = (self.bounds.ymax - self.bounds.ymin) / self.height as f64;
        let cx = (((x - self.bounds.xmin) / cw).floor() as isize)
            .clamp(0, self.width as isize - 1) as usize;
        let cy = (((y - self.bounds.ymin) / ch).floor() as isize)
            .clamp(0, self.height as isize - 1) as usize;
        cy * self.width + cx
    }
}

mod private_parse {
    use crate::error::{Error, Result};

    /// Splits CSV text into numeric-field rows. `#`-prefixed and blank
    /// lines are skipped; an optional header must match `expected_header`.
    pub(super) fn parse_rows(
        bytes: &[u8],
        expected_header: &[&str],
    ) -> Result<Vec<(usize, Vec<f64>)>> {
        let text = std::str::from_utf8(bytes).map_err(|_| Error::CsvParse {
            line: 0,
            field: 0,
            message: "input is not UTF-8".into(),
        })?;
        let mut rows = Vec::new();
        let mut saw_any = false;
        for (no, raw) in text.lines().enumerate() {
            let no = no + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, usize> = fields
                .iter()
                .enumerate()
                .map(|(i, f)| f.parse::<f64>().map_err(|_| i + 1))
                .collect();
            match parsed {
                Ok(values) => {
                    if values.len() != expected_header.len() {
                        return Err(Error::WrongArity {
                            line: no,
                            expected: expected_header.len(),
                            got: values.len(),
                        });
                    }
                    for (i, v) in values.iter().enumerate() {
                        if !v.is_finite() {
                            return Err(Error::CsvParse {
                                line: no,
                                field: i + 1,
                                message: format!("value `{}` is not finite", fields[i]),
                            });
                        }
                    }
                    saw_any = true;
                    rows.push((no, values));
                }
                Err(field) => {
                    let is_header = !saw_any
                        && rows.is_empty()
                        && fields.len() == expected_header.len()
                        && fields
                            .iter()
                            .zip(expected_header)
                            .all(|(f, h)| f.eq_ignore_ascii_case(h));
                    if !is_header {
                        return Err(Error::CsvParse {
                            line: no,
                            field,
                            message: format!("`{}` is not a number", fields[field - 1]),
                        });
                    }
                }
            }
        }
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(rows)
    }
}

/// Parses `x,y,value` rows (header optional, `#` comments skipped).
pub fn parse_samples_csv(bytes: &[u8]) -> Result<Vec<SamplePoint>> {
    let rows = parse_rows(bytes, &["x", "y", "value"])?;
    Ok(rows
        .into_iter()
        .map(|(_, v)| SamplePoint { x: v[0], y: v[1], value: v[2] })
        .collect())
}

/// Parses `id,value` rows (header optional, `#` comments skipped).
pub fn parse_element_samples_csv(bytes: &[u8]) -> Result<Vec<ElementSample>> {
    let rows = parse_rows(bytes, &["id", "value"])?;
    rows.into_iter()
        .map(|(line, v)| {
            let id = v[0];
            if id < 0.0 || id.fract() != 0.0 {
                return Err(Error::CsvParse {
                    line,
                    field: 1,
                    message: format!("`{id}` is not a non-negative integer id"),
                });
            }
            Ok(ElementSample { element: id as usize, value: v[1] })
        })
        .collect()
}

const AUTO_MIN_SIZE: usize = 8;
const AUTO_MAX_SIZE: usize = 512;

/// Bounding box of the samples; degenerate axes are padded by 0.5 on
/// each side so the box always has area.
pub fn sample_bounds(samples: &[SamplePoint]) -> Bounds {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for s in samples {
        xmin = xmin.min(s.x);
        xmax = xmax.max(s.x);
        ymin = ymin.min(s.y);
        ymax = ymax.max(s.y);
    }
    // pad degenerate axes so the box has area
    if xmax <= xmin {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if ymax <= ymin {
        ymin -= 0.5;
        ymax += 0.5;
    }
    Bounds { xmin, ymin, xmax, ymax }
}

/// Snap all samples onto `spec`. Samples landing on one cell merge when
/// their values are equal and conflict otherwise.
fn snap_samples(
    spec: &GridSpec,
    samples: &[SamplePoint],
) -> std::result::Result<GuidingSet<f64>, (f64, f64)> {
    let mut cells: std::collections::BTreeMap<usize, f64> = std::collections::BTreeMap::new();
    for s in samples {
        let v = spec.snap(s.x, s.y);
        match cells.entry(v) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(s.value);
            }
            std::collections::btree_map::Entry::Occupied(e) => {
                if *e.get() != s.value {
                    return Err((*e.get(), s.value));
                }
            }
        }
    }
    let width = spec.width;
    let height = spec.height;
    Ok(GuidingSet::new(cells, width * height).expect("snapped samples are nonempty and in range"))
}

/// Locates the samples in grid space. With a requested spec the samples
/// must fall inside its bounds and may not conflict; in auto mode the
/// smallest power-of-two square grid (8..=512) that separates all
/// distinct-valued samples is chosen.
pub fn determine_resolution(
    samples: &[SamplePoint],
    requested: Option<GridSpec>,
) -> Result<(GridSpec, GuidingSet<f64>)> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, s) in samples.iter().enumerate() {
        if !(s.x.is_finite() && s.y.is_finite() && s.value.is_finite()) {
            return Err(Error::CsvParse {
                line: index + 1,
                field: 0,
                message: "non-finite sample".into(),
            });
        }
    }

    if let Some(spec) = requested {
        for (index, s) in samples.iter().enumerate() {
            if !spec.bounds.contains(s.x, s.y) {
                return Err(Error::SampleOutsideBounds { index, x: s.x, y: s.y });
            }
        }
        let guiding = snap_samples(&spec, samples).map_err(|(a, b)| {
            Error::ResolutionCollision { width: spec.width, height: spec.height, a, b }
        })?;
        return Ok((spec, guiding));
    }

    let bounds = sample_bounds(samples);
    let mut size = AUTO_MIN_SIZE;
    loop {
        let spec = GridSpec::new(size, size, bounds)?;
        match snap_samples(&spec, samples) {
            Ok(guiding) => return Ok((spec, guiding)),
            Err((a, b)) => {
                if size >= AUTO_MAX_SIZE {
                    return Err(Error::ResolutionCollision {
                        width: size,
                        height: size,
                        a,
                        b,
                    });
                }
                size *= 2;
            }
        }
    }
}

/// One-line summary of what a pipeline run did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunReport {
    /// Level spacing of the derived scale.
    pub delta: f64,
    /// Number of levels in the derived scale.
    pub level_count: usize,
    pub inflation_steps: u32,
    /// Relaxation sweeps across all pyramid levels.
    pub sweeps: u64,
    /// Largest per-cell update in the final sweep.
    pub residual: f64,
}

impl RunReport {
    pub fn key_value_line(&self) -> String {
        format!(
            "delta={} levels={} inflation_steps={} sweeps={} residual={}",
            self.delta, self.level_count, self.inflation_steps, self.sweeps, self.residual
        )
    }
}

/// A completed grid reconstruction.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub spec: GridSpec,
    pub guiding: GuidingSet<f64>,
    pub field: RealField,
    pub report: RunReport,
}

/// Full composition: determine resolution, extend the samples to a
/// gradually varied field, and relax it (through `levels` pyramid
/// levels). Errors carry the failing step.
pub fn run_grid_pipeline(
    samples: &[SamplePoint],
    requested: Option<GridSpec>,
    cfg: &SmoothConfig,
    policy: EnvelopePolicy,
    levels: u32,
) -> Result<PipelineRun> {
    let (spec, guiding) = determine_resolution(samples, requested)
        .map_err(|e| e.at_step(PipelineStep::DetermineResolution))?;
    let graph = DomainGraph::build_grid(spec.width, spec.height)
        .map_err(|e| e.at_step(PipelineStep::DetermineResolution))?;
    let (field, ml) = multilevel_fit(&graph, &guiding, levels, cfg, policy).map_err(|e| {
        let step =
            if e.is_infeasible() { PipelineStep::Extend } else { PipelineStep::Smooth };
        e.at_step(step)
    })?;
    let report = RunReport {
        delta: ml.derivation.scale.delta(),
        level_count: ml.derivation.scale.count(),
        inflation_steps: ml.derivation.inflation_steps,
        sweeps: ml.total_sweeps(),
        residual: ml.final_update,
    };
    Ok(PipelineRun { spec, guiding, field, report })
}

/// Renders a grid field as an ASCII (P2) PGM image: values map through
/// `round(255 * (v - min) / (max - min))`, a constant field maps to 128.
pub fn pgm_string(g: &DomainGraph, field: &RealField) -> Result<String> {
    let (width, height) = g.grid_dims().ok_or(Error::NotAGrid)?;
    if field.len() != g.vertex_count() {
        return Err(Error::FieldLengthMismatch { expected: g.vertex_count(), actual: field.len() });
    }
    let values = field.values();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = format!("P2\n{width} {height}\n255\n");
    for y in 0..height {
        let mut row = String::new();
        for x in 0..width {
            let v = values[y * width + x];
            let px =
                if hi > lo { (255.0 * (v - lo) / (hi - lo)).round() as u32 } else { 128 };
            if x > 0 {
                row.push(' ');
            }
            row.push_str(&px.to_string());
        }
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}

pub fn write_pgm(g: &DomainGraph, field: &RealField, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, pgm_string(g, field)?)?;
    Ok(())
}

/// Renders a grid field as CSV, one row per line, full precision.
pub fn csv_raster_string(g: &DomainGraph, field: &RealField) -> Result<String> {
    let (width, height) = g.grid_dims().ok_or(Error::NotAGrid)?;
    if field.len() != g.vertex_count() {
        return Err(Error::FieldLengthMismatch { expected: g.vertex_count(), actual: field.len() });
    }
    let mut out = String::new();
    for y in 0..height {
        for x in 0..width {
            if x > 0 {
                out.push(',');
            }
            out.push_str(&field.value(y * width + x).to_string());
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_csv_raster(
    g: &DomainGraph,
    field: &RealField,
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, csv_raster_string(g, field)?)?;
    Ok(())
}
