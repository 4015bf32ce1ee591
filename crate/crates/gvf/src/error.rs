use crate::extend::FeasibilityWitness;
use crate::manifold::MeshSpace;

/// Pipeline stage names used for error provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PipelineStep {
    LoadSamples,
    DetermineResolution,
    Extend,
    Smooth,
}

impl std::fmt::Display for PipelineStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            PipelineStep::LoadSamples => "load-samples",
            PipelineStep::DetermineResolution => "determine-resolution",
            PipelineStep::Extend => "extend",
            PipelineStep::Smooth => "smooth",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("grid dimensions must be positive (got {width}x{height})")]
    ZeroGridDimension { width: usize, height: usize },
    #[error("domain graph is disconnected ({components} components)")]
    Disconnected { components: usize },
    #[error("edge ({a}, {b}) is out of range for {vertex_count} vertices")]
    EdgeOutOfRange { a: usize, b: usize, vertex_count: usize },
    #[error("self-loop on vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("source set is empty")]
    EmptySources,
    #[error("vertex {vertex} is out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("guiding set is empty")]
    EmptyGuidingSet,
    #[error("duplicate guiding entry for vertex {vertex}")]
    DuplicateGuidingVertex { vertex: usize },
    #[error("conflicting guiding values for vertex {vertex}")]
    ConflictingGuidingValue { vertex: usize },
    #[error("guiding value at vertex {vertex} is not finite")]
    NonFiniteValue { vertex: usize },
    #[error("level index {index} at vertex {vertex} is outside 1..={count}")]
    LevelOutOfRange { vertex: usize, index: usize, count: usize },
    #[error("level scale requires delta > 0 and count >= 1 (got delta={delta}, count={count})")]
    InvalidScale { delta: f64, count: usize },
    #[error("field has {actual} values but the domain has {expected} elements")]
    FieldLengthMismatch { expected: usize, actual: usize },

    #[error("no gradually varied extension exists: {witness}")]
    Infeasible { witness: FeasibilityWitness },
    #[error("enumeration instance too large: {labelings} labelings exceeds {limit}")]
    InstanceTooLarge { labelings: u128, limit: u128 },

    #[error("relaxation step must lie in (0, 0.25] (got {lambda})")]
    InvalidLambda { lambda: f64 },
    #[error("domain graph is not a grid")]
    NotAGrid,
    #[error("{levels} pyramid levels need grid dimensions >= {required} (got {width}x{height})")]
    TooManyLevels { levels: u32, required: usize, width: usize, height: usize },
    #[error("pyramid needs at least one level")]
    ZeroLevels,

    #[error("mesh parse error at line {line}: {message}")]
    MeshParse { line: usize, message: String },
    #[error("face {face} references vertex {vertex}, out of range for {vertex_count} vertices")]
    FaceVertexOutOfRange { face: usize, vertex: usize, vertex_count: usize },
    #[error("face {face} has repeated vertices")]
    DegenerateFace { face: usize },
    #[error("edge ({a}, {b}) is shared by {count} faces; at most 2 allowed")]
    NonManifoldEdge { a: usize, b: usize, count: usize },
    #[error("mesh vertex graph is disconnected ({components} components)")]
    DisconnectedVertexGraph { components: usize },
    #[error("mesh cell graph is disconnected ({components} components)")]
    DisconnectedCellGraph { components: usize },
    #[error("field is in {actual} space but {expected} space is required")]
    SpaceMismatch { expected: MeshSpace, actual: MeshSpace },

    #[error("csv parse error at line {line}, field {field}: {message}")]
    CsvParse { line: usize, field: usize, message: String },
    #[error("csv row at line {line} has {got} fields, expected {expected}")]
    WrongArity { line: usize, expected: usize, got: usize },
    #[error("no data rows in input")]
    EmptyInput,
    #[error("sample {index} at ({x}, {y}) lies outside the declared bounds")]
    SampleOutsideBounds { index: usize, x: f64, y: f64 },
    #[error("bounds must satisfy xmax > xmin and ymax > ymin (got [{xmin}, {xmax}] x [{ymin}, {ymax}])")]
    InvalidBounds { xmin: f64, ymin: f64, xmax: f64, ymax: f64 },
    #[error("samples with different values ({a} vs {b}) collide in one grid cell at resolution {width}x{height}")]
    ResolutionCollision { width: usize, height: usize, a: f64, b: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("pipeline step `{step}` failed: {source}")]
    Pipeline {
        step: PipelineStep,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_step(self, step: PipelineStep) -> Error {
        Error::Pipeline { step, source: Box::new(self) }
    }

    /// True when the root cause is a failed gradual-variation feasibility check.
    pub fn is_infeasible(&self) -> bool {
        match self {
            Error::Infeasible { .. } => true,
            Error::Pipeline { source, .. } => source.is_infeasible(),
            _ => false,
        }
    }

    /// The feasibility witness, if this error carries one.
    pub fn witness(&self) -> Option<&FeasibilityWitness> {
        match self {
            Error::Infeasible { witness } => Some(witness),
            Error::Pipeline { source, .. } => source.witness(),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
