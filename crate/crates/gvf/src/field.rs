//! Guiding sets and per-vertex scalar fields.

use crate::error::{Error, Result};
use crate::scale::LevelScale;

/// The observed samples: a nonempty set of distinct vertices with values.
/// `T` is a 1-based level index (`usize`) or a real (`f64`).
#[derive(Debug, Clone, PartialEq)]
pub struct GuidingSet<T> {
    entries: Vec<(usize, T)>,
}

impl<T: Clone + PartialEq> GuidingSet<T> {
    /// Builds a guiding set, rejecting duplicate vertices outright.
    pub fn new(entries: impl IntoIterator<Item = (usize, T)>, vertex_count: usize) -> Result<Self> {
        Self::build(entries, vertex_count, false)
    }

    /// Builds a guiding set, merging duplicate entries whose values are equal
    /// and rejecting duplicates that conflict.
    pub fn merged(
        entries: impl IntoIterator<Item = (usize, T)>,
        vertex_count: usize,
    ) -> Result<Self> {
        Self::build(entries, vertex_count, true)
    }

    fn build(
        entries: impl IntoIterator<Item = (usize, T)>,
        vertex_count: usize,
        merge_equal: bool,
    ) -> Result<Self> {
        let mut sorted: Vec<(usize, T)> = entries.into_iter().collect();
        for &(v, _) in &sorted {
            if v >= vertex_count {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count });
            }
        }
        sorted.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(usize, T)> = Vec::with_capacity(sorted.len());
        for (v, value) in sorted {
            match out.last() {
                Some(&(prev, ref prev_value)) if prev == v => {
                    if !merge_equal {
                        return Err(Error::DuplicateGuidingVertex { vertex: v });
                    }
                    if *prev_value != value {
                        return Err(Error::ConflictingGuidingValue { vertex: v });
                    }
                }
                _ => out.push((v, value)),
            }
        }
        if out.is_empty() {
            return Err(Error::EmptyGuidingSet);
        }
        Ok(GuidingSet { entries: out })
    }

    /// Entries sorted by vertex id.
    pub fn entries(&self) -> &[(usize, T)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one entry
    }

    pub fn contains(&self, vertex: usize) -> bool {
        self.entries.binary_search_by_key(&vertex, |&(v, _)| v).is_ok()
    }

    pub fn value_of(&self, vertex: usize) -> Option<&T> {
        self.entries
            .binary_search_by_key(&vertex, |&(v, _)| v)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Largest vertex id referenced, for revalidation against a graph.
    pub fn max_vertex(&self) -> usize {
        self.entries.last().map(|&(v, _)| v).unwrap_or(0)
    }

    pub fn map_values<U: Clone + PartialEq>(&self, f: impl Fn(&T) -> U) -> GuidingSet<U> {
        GuidingSet { entries: self.entries.iter().map(|(v, t)| (*v, f(t))).collect() }
    }
}

impl GuidingSet<f64> {
    /// Rejects NaN and infinite observations.
    pub fn ensure_finite(&self) -> Result<()> {
        for &(v, x) in &self.entries {
            if !x.is_finite() {
                return Err(Error::NonFiniteValue { vertex: v });
            }
        }
        Ok(())
    }
}

/// A complete integer-mode field: one 1-based level index per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelField {
    indices: Vec<usize>,
    level_count: usize,
    scale: Option<LevelScale>,
}

impl LevelField {
    pub fn new(indices: Vec<usize>, level_count: usize) -> Result<Self> {
        for (v, &k) in indices.iter().enumerate() {
            if k < 1 || k > level_count {
                return Err(Error::LevelOutOfRange { vertex: v, index: k, count: level_count });
            }
        }
        Ok(LevelField { indices, level_count, scale: None })
    }

    pub fn with_scale(mut self, scale: LevelScale) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn index(&self, vertex: usize) -> usize {
        self.indices[vertex]
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn scale(&self) -> Option<&LevelScale> {
        self.scale.as_ref()
    }

    /// Dequantize: map each level index to its value on `scale`.
    pub fn to_real(&self, scale: &LevelScale) -> RealField {
        RealField::new(self.indices.iter().map(|&k| scale.value(k)).collect())
    }
}

/// A complete real-mode field: one `f64` per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    values: Vec<f64>,
}

impl RealField {
    pub fn new(values: Vec<f64>) -> Self {
        RealField { values }
    }

    pub fn constant(value: f64, len: usize) -> Self {
        RealField { values: vec![value; len] }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, vertex: usize) -> f64 {
        self.values[vertex]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Overwrite the guided vertices with their observed values.
    pub fn snap_to(&mut self, guiding: &GuidingSet<f64>) {
        for &(v, x) in guiding.entries() {
            self.values[v] = x;
        }
    }
}
