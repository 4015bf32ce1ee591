//! The four manifold fitting algorithms and discrete harmonic relaxation.
//!
//! Integer extension and real fitting each come in two flavors: on the
//! vertex graph (point space) and on the cell graph (face space, the
//! Voronoi-dual view). All four delegate to the core extension and
//! fitting routines; harmonic relaxation then smooths a real field with
//! the guiding elements held fixed.

use crate::error::{Error, Result};
use crate::extend::{gvf_extend, EnvelopePolicy};
use crate::field::{GuidingSet, RealField};
use crate::graph::DomainGraph;
use crate::mesh::TriMesh;
use crate::real_fit::{fit_real_gvf, ScaleDerivation};

/// Which mesh elements a field lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshSpace {
    Vertex,
    Cell,
}

impl std::fmt::Display for MeshSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeshSpace::Vertex => "vertex",
            MeshSpace::Cell => "cell",
        })
    }
}

/// A per-vertex or per-face assignment (level indices or reals).
#[derive(Debug, Clone, PartialEq)]
pub struct MeshField<T> {
    space: MeshSpace,
    values: Vec<T>,
}

impl<T> MeshField<T> {
    pub fn new(space: MeshSpace, values: Vec<T>) -> Self {
        MeshField { space, values }
    }

    pub fn space(&self) -> MeshSpace {
        self.space
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl TriMesh {
    /// The graph carrying fields of the given space.
    pub fn graph(&self, space: MeshSpace) -> &DomainGraph {
        match space {
            MeshSpace::Vertex => self.vertex_graph(),
            MeshSpace::Cell => self.cell_graph(),
        }
    }
}

/// Integer GVF extension on point space.
pub fn manifold_int_gvf(
    mesh: &TriMesh,
    guiding: &GuidingSet<usize>,
    level_count: usize,
    policy: EnvelopePolicy,
) -> Result<MeshField<usize>> {
    let field = gvf_extend(mesh.vertex_graph(), guiding, level_count, policy)?;
    Ok(MeshField::new(MeshSpace::Vertex, field.indices().to_vec()))
}

/// Real GVF fitting on point space. Never rejects for value magnitudes;
/// the derived scale absorbs them.
pub fn manifold_real_gvf(
    mesh: &TriMesh,
    guiding: &GuidingSet<f64>,
    policy: EnvelopePolicy,
) -> Result<(MeshField<f64>, ScaleDerivation)> {
    let (field, derivation) = fit_real_gvf(mesh.vertex_graph(), guiding, policy)?;
    Ok((MeshField::new(MeshSpace::Vertex, field.values().to_vec()), derivation))
}

/// Integer GVF extension on cell space (guiding keyed by face ids).
pub fn manifold_cell_int_gvf(
    mesh: &TriMesh,
    guiding: &GuidingSet<usize>,
    level_count: usize,
    policy: EnvelopePolicy,
) -> Result<MeshField<usize>> {
    let field = gvf_extend(mesh.cell_graph(), guiding, level_count, policy)?;
    Ok(MeshField::new(MeshSpace::Cell, field.indices().to_vec()))
}

/// Real GVF fitting on cell space.
pub fn manifold_cell_real_gvf(
    mesh: &TriMesh,
    guiding: &GuidingSet<f64>,
    policy: EnvelopePolicy,
) -> Result<(MeshField<f64>, ScaleDerivation)> {
    let (field, derivation) = fit_real_gvf(mesh.cell_graph(), guiding, policy)?;
    Ok((MeshField::new(MeshSpace::Cell, field.values().to_vec()), derivation))
}

/// Jacobi sweeps of the umbrella operator on any domain graph: each free
/// element becomes the mean of its neighbors, guided elements stay fixed.
/// Runs exactly `iterations` sweeps and returns the per-sweep maximum
/// update as a trace.
pub fn harmonic_relax(
    g: &DomainGraph,
    init: &RealField,
    guiding: &GuidingSet<f64>,
    iterations: u32,
) -> Result<(RealField, Vec<f64>)> {
    if init.len() != g.vertex_count() {
        return Err(Error::FieldLengthMismatch { expected: g.vertex_count(), actual: init.len() });
    }
    if guiding.max_vertex() >= g.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: guiding.max_vertex(),
            vertex_count: g.vertex_count(),
        });
    }
    guiding.ensure_finite()?;

    let n = g.vertex_count();
    let mut pinned = vec![false; n];
    for &(v, _) in guiding.entries() {
        pinned[v] = true;
    }

    let mut current = init.clone();
    current.snap_to(guiding);
    let mut next = current.clone();
    let mut trace = Vec::with_capacity(iterations as usize);
    for _ in 0..iterations {
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
                let mean = if neighbors.is_empty() {
                    src[v]
                } else {
                    neighbors.iter().map(|&w| src[w]).sum::<f64>() / neighbors.len() as f64
                };
                max_update = max_update.max((mean - src[v]).abs());
                dst[v] = mean;
            }
        }
        std::mem::swap(&mut current, &mut next);
        trace.push(max_update);
    }
    Ok((current, trace))
}

/// Harmonic fitting on a mesh, in the space of `init` (typically a real
/// GVF fit). Default iteration count in callers is 100.
pub fn harmonic_fit(
    mesh: &TriMesh,
    init: &MeshField<f64>,
    guiding: &GuidingSet<f64>,
    iterations: u32,
) -> Result<(MeshField<f64>, Vec<f64>)> {
    let g = mesh.graph(init.space());
    let (field, trace) =
        harmonic_relax(g, &RealField::new(init.values().to_vec()), guiding, iterations)?;
    Ok((MeshField::new(init.space(), field.values().to_vec()), trace))
}

/// Display value per triangle: the mean of its three vertex values.
pub fn face_display_values(mesh: &TriMesh, field: &MeshField<f64>) -> Result<Vec<f64>> {
    if field.space() != MeshSpace::Vertex {
        return Err(Error::SpaceMismatch { expected: MeshSpace::Vertex, actual: field.space() });
    }
    if field.len() != mesh.vertex_count() {
        return Err(Error::FieldLengthMismatch {
            expected: mesh.vertex_count(),
            actual: field.len(),
        });
    }
    let v = field.values();
    Ok(mesh.faces().iter().map(|f| (v[f[0]] + v[f[1]] + v[f[2]]) / 3.0).collect())
}
