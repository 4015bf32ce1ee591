//! Gradually varied function (GVF) extension and fitting.
//!
//! A function on a graph is *gradually varied* when adjacent vertices
//! carry equal or index-adjacent levels from a uniform chain — the
//! discrete analogue of a Lipschitz-1 function in level units. Given
//! sparse observations (guiding points), this crate decides whether a
//! gradually varied interpolant exists (it does iff every guiding pair
//! satisfies `d(x, y) >= |i - j|`), constructs one through lower/upper
//! envelopes, and builds real-valued fits by quantizing on a scale
//! derived from the samples' maximum slope.
//!
//! On top of the combinatorial core sit grid smoothing (constrained
//! damped-Jacobi relaxation with optional coarse-to-fine acceleration),
//! triangulated-manifold fitting in vertex and cell space, discrete
//! harmonic relaxation, and a file pipeline (CSV samples in, PGM/CSV
//! rasters and OFF/OBJ meshes out).

pub mod error;
pub mod extend;
pub mod field;
pub mod graph;
pub mod manifold;
pub mod mesh;
pub mod pipeline;
pub mod real_fit;
pub mod scale;
pub mod smoothing;

pub use error::{Error, PipelineStep, Result};
pub use extend::{
    check_feasible, enumerate_extensions, gvf_extend, EnvelopePolicy, FeasibilityReport,
    FeasibilityWitness,
};
pub use field::{GuidingSet, LevelField, RealField};
pub use graph::{gradual_variation_violation, is_gradually_varied, DomainGraph, GraphKind};
pub use manifold::{
    face_display_values, harmonic_fit, harmonic_relax, manifold_cell_int_gvf,
    manifold_cell_real_gvf, manifold_int_gvf, manifold_real_gvf, MeshField, MeshSpace,
};
pub use mesh::{load_obj, load_off, write_obj_gray, write_off, write_values_csv, TriMesh};
pub use pipeline::{
    determine_resolution, parse_element_samples_csv, parse_samples_csv, run_grid_pipeline,
    sample_bounds, write_csv_raster, write_pgm, Bounds, ElementSample, GridSpec, PipelineRun,
    RunReport, SamplePoint,
};
pub use real_fit::{derive_scale, fit_real_gvf, quantize_guiding, ScaleDerivation};
pub use scale::LevelScale;
pub use smoothing::{
    dirichlet_energy, multilevel_fit, partial_derivatives, smooth_constrained, GradientRaster,
    MultilevelReport, SmoothConfig, SmoothReport,
};
