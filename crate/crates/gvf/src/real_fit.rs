//! Real-valued fitting: derive a level scale from the samples' maximum
//! slope, quantize, extend, dequantize, and snap the samples back.

use crate::error::{Error, Result};
use crate::extend::{check_feasible, gvf_extend, EnvelopePolicy};
use crate::field::{GuidingSet, RealField};
use crate::graph::DomainGraph;
use crate::scale::LevelScale;

/// Retry bound for the feasibility-restoring delta inflation. Rounding
/// can only break the pairwise condition by float noise, so in practice
/// one step suffices; the bound exists to make nontermination impossible.
const MAX_INFLATION_STEPS: u32 = 64;

/// A level scale derived from real samples, together with how it was
/// obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleDerivation {
    pub scale: LevelScale,
    /// Largest `|f(x) - f(y)| / d(x, y)` over guiding pairs (0 when all
    /// observed values are equal).
    pub max_slope: f64,
    /// How many times delta was inflated by 1.25 to restore feasibility
    /// after quantization.
    pub inflation_steps: u32,
}

/// Nearest-level quantization of a real guiding set (ties toward the
/// lower index).
pub fn quantize_guiding(scale: &LevelScale, guiding: &GuidingSet<f64>) -> GuidingSet<usize> {
    guiding.map_values(|&x| scale.nearest_index(x))
}

/// Derives the level scale for `guiding`: delta starts at the maximum
/// pairwise slope (1.0 when all values are equal), the origin is the
/// minimum observation, and delta inflates geometrically until the
/// quantized samples satisfy the extension condition.
pub fn derive_scale(g: &DomainGraph, guiding: &GuidingSet<f64>) -> Result<ScaleDerivation> {
    guiding.ensure_finite()?;
    let entries = guiding.entries();
    if guiding.max_vertex() >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: guiding.max_vertex(),
            vertex_count: g.vertex_count(),
        });
    }

    let mut max_slope = 0.0f64;
    for (a, &(x, fx)) in entries.iter().enumerate() {
        if a + 1 == entries.len() {
            break;
        }
        let dist = g.multi_source_distances(&[x])?;
        for &(y, fy) in &entries[a + 1..] {
            let slope = (fx - fy).abs() / dist[y] as f64;
            max_slope = max_slope.max(slope);
        }
    }

    let lo = entries.iter().map(|&(_, x)| x).fold(f64::INFINITY, f64::min);
    let hi = entries.iter().map(|&(_, x)| x).fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;

    let mut delta = if max_slope > 0.0 { max_slope } else { 1.0 };
    let mut inflation_steps = 0u32;
    loop {
        let count = if range > 0.0 { (range / delta).ceil() as usize + 1 } else { 1 };
        let scale = LevelScale::new(lo, delta, count)?;
        let quantized = quantize_guiding(&scale, guiding);
        if check_feasible(g, &quantized)?.feasible {
            return Ok(ScaleDerivation { scale, max_slope, inflation_steps });
        }
        assert!(
            inflation_steps < MAX_INFLATION_STEPS,
            "delta inflation failed to restore feasibility for finite inputs"
        );
        delta *= 1.25;
        inflation_steps += 1;
    }
}

/// Fits a real field through `guiding`: quantize on the derived scale,
/// extend gradually, dequantize, then restore the observed values
/// exactly at the guided vertices.
pub fn fit_real_gvf(
    g: &DomainGraph,
    guiding: &GuidingSet<f64>,
    policy: EnvelopePolicy,
) -> Result<(RealField, ScaleDerivation)> {
    let derivation = derive_scale(g, guiding)?;
    let quantized = quantize_guiding(&derivation.scale, guiding);
    let levels = gvf_extend(g, &quantized, derivation.scale.count(), policy)?;
    let mut field = levels.to_real(&derivation.scale);
    field.snap_to(guiding);
    Ok((field, derivation))
}
