//! Command-line surface over the `gvf` library: feasibility checks,
//! grid fitting, mesh fitting, and harmonic relaxation.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use gvf::{
    check_feasible, harmonic_fit, manifold_cell_int_gvf, manifold_cell_real_gvf,
    manifold_int_gvf, manifold_real_gvf, parse_element_samples_csv, parse_samples_csv,
    run_grid_pipeline, sample_bounds, write_csv_raster, write_off, write_pgm, write_values_csv,
    DomainGraph, ElementSample, EnvelopePolicy, Error, GridSpec, GuidingSet, MeshSpace,
    SmoothConfig, TriMesh,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "gvf",
    about = "Gradually varied function fitting on grids and triangulated meshes",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Lower,
    Mid,
    Upper,
}

impl From<PolicyArg> for EnvelopePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Lower => EnvelopePolicy::Lower,
            PolicyArg::Mid => EnvelopePolicy::Midpoint,
            PolicyArg::Upper => EnvelopePolicy::Upper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Vertex,
    Cell,
}

impl From<SpaceArg> for MeshSpace {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Vertex => MeshSpace::Vertex,
            SpaceArg::Cell => MeshSpace::Cell,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Int,
    Real,
}

#[derive(Args)]
struct DomainArgs {
    /// Grid width (with --height; mutually exclusive with --mesh)
    #[arg(long, requires = "height", conflicts_with = "mesh")]
    width: Option<usize>,
    /// Grid height
    #[arg(long, requires = "width", conflicts_with = "mesh")]
    height: Option<usize>,
    /// Mesh file (.off or .obj)
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Which mesh elements carry values
    #[arg(long, value_enum, default_value = "vertex")]
    space: SpaceArg,
}

#[derive(Subcommand)]
enum Command {
    /// Test whether an integer guiding set admits a gradually varied extension
    Check {
        #[command(flatten)]
        domain: DomainArgs,
        /// CSV of id,value rows (vertex or cell id, integer level)
        #[arg(long)]
        input: PathBuf,
    },
    /// Fit scattered x,y,value samples on a grid and smooth the result
    GridFit {
        /// CSV of x,y,value rows
        #[arg(long)]
        input: PathBuf,
        /// Grid width (with --height; or use --auto-res)
        #[arg(long, requires = "height", conflicts_with = "auto_res")]
        width: Option<usize>,
        /// Grid height
        #[arg(long, requires = "width", conflicts_with = "auto_res")]
        height: Option<usize>,
        /// Pick the smallest power-of-two grid separating the samples
        #[arg(long)]
        auto_res: bool,
        /// Which valid extension to start from
        #[arg(long, value_enum, default_value = "mid")]
        policy: PolicyArg,
        /// Relaxation sweeps per smoothing pass
        #[arg(long, default_value_t = 100)]
        smooth_iters: u32,
        /// Smoothing passes (0 skips smoothing)
        #[arg(long, default_value_t = 1)]
        order: u32,
        /// Relaxation step in (0, 0.25]
        #[arg(long, default_value_t = 0.2)]
        lambda: f64,
        /// Coarse-to-fine pyramid levels
        #[arg(long, default_value_t = 1)]
        levels: u32,
        /// Write the result as an ASCII PGM image
        #[arg(long)]
        out_pgm: Option<PathBuf>,
        /// Write the result as a full-precision CSV raster
        #[arg(long)]
        out_csv: Option<PathBuf>,
        /// Write the one-line run summary to this file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Fit id,value samples on mesh vertices or cells
    MeshFit {
        /// Mesh file (.off or .obj)
        #[arg(long)]
        mesh: PathBuf,
        /// CSV of id,value rows
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "vertex")]
        space: SpaceArg,
        /// int: values are level indices; real: values are arbitrary reals
        #[arg(long, value_enum, default_value = "real")]
        mode: ModeArg,
        /// Write the mesh back out as OFF
        #[arg(long)]
        out_off: Option<PathBuf>,
        /// Write the fitted per-element values as id,value CSV
        #[arg(long)]
        out_values: Option<PathBuf>,
    },
    /// Relax a real fit toward the discrete harmonic interpolant
    Harmonic {
        /// Mesh file (.off or .obj)
        #[arg(long)]
        mesh: PathBuf,
        /// CSV of id,value rows (held fixed during relaxation)
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "vertex")]
        space: SpaceArg,
        /// Jacobi sweeps
        #[arg(long, default_value_t = 100)]
        iters: u32,
        /// Write the relaxed per-element values as id,value CSV
        #[arg(long)]
        out_values: Option<PathBuf>,
        /// Write the per-sweep max-update trace, one row per sweep
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

fn load_mesh(path: &Path) -> Result<TriMesh, Error> {
    let bytes = std::fs::read(path)?;
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("off") => gvf::load_off(&bytes),
        Some("obj") => gvf::load_obj(&bytes),
        _ => Err(Error::MeshParse {
            line: 0,
            message: format!("cannot tell OFF from OBJ: unknown extension on {}", path.display()),
        }),
    }
}

fn level_guiding(samples: &[ElementSample], element_count: usize) -> Result<GuidingSet<usize>, Error> {
    let entries: Result<Vec<(usize, usize)>, Error> = samples
        .iter()
        .map(|s| {
            if s.value < 1.0 || s.value.fract() != 0.0 {
                return Err(Error::CsvParse {
                    line: 0,
                    field: 2,
                    message: format!("`{}` is not a level index (positive integer)", s.value),
                });
            }
            Ok((s.element, s.value as usize))
        })
        .collect();
    GuidingSet::merged(entries?, element_count)
}

fn real_guiding(samples: &[ElementSample], element_count: usize) -> Result<GuidingSet<f64>, Error> {
    GuidingSet::merged(samples.iter().map(|s| (s.element, s.value)), element_count)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Check { domain, input } => {
            let samples = parse_element_samples_csv(&std::fs::read(&input)?)?;
            let graph: DomainGraph;
            let graph_ref: &DomainGraph;
            let mesh_storage;
            match (&domain.mesh, domain.width, domain.height) {
                (Some(mesh_path), None, None) => {
                    mesh_storage = load_mesh(mesh_path)?;
                    graph_ref = mesh_storage.graph(domain.space.into());
                }
                (None, Some(w), Some(h)) => {
                    graph = DomainGraph::build_grid(w, h)?;
                    graph_ref = &graph;
                }
                _ => {
                    return Err(Error::MeshParse {
                        line: 0,
                        message: "check needs either --width/--height or --mesh".into(),
                    })
                }
            }
            let guiding = level_guiding(&samples, graph_ref.vertex_count())?;
            let report = check_feasible(graph_ref, &guiding)?;
            match report.witness {
                None => {
                    println!("feasible: {} guiding points admit a gradually varied extension", guiding.len());
                    Ok(())
                }
                Some(witness) => Err(Error::Infeasible { witness }),
            }
        }
        Command::GridFit {
            input,
            width,
            height,
            auto_res,
            policy,
            smooth_iters,
            order,
            lambda,
            levels,
            out_pgm,
            out_csv,
            report,
        } => {
            let samples = parse_samples_csv(&std::fs::read(&input)?)?;
            let requested = match (width, height, auto_res) {
                (Some(w), Some(h), false) => {
                    Some(GridSpec::new(w, h, sample_bounds(&samples))?)
                }
                (None, None, true) => None,
                _ => {
                    return Err(Error::CsvParse {
                        line: 0,
                        field: 0,
                        message: "grid-fit needs --width/--height or --auto-res".into(),
                    })
                }
            };
            let cfg = SmoothConfig {
                passes: order,
                iterations: smooth_iters,
                lambda,
                ..Default::default()
            };
            let run = run_grid_pipeline(&samples, requested, &cfg, policy.into(), levels)?;
            let graph = DomainGraph::build_grid(run.spec.width, run.spec.height)?;
            if let Some(path) = out_pgm {
                write_pgm(&graph, &run.field, path)?;
            }
            if let Some(path) = out_csv {
                write_csv_raster(&graph, &run.field, path)?;
            }
            let line = run.report.key_value_line();
            if let Some(path) = report {
                std::fs::write(path, format!("{line}\n"))?;
            }
            println!(
                "fit {}x{} grid from {} samples: {line}",
                run.spec.width,
                run.spec.height,
                samples.len()
            );
            Ok(())
        }
        Command::MeshFit { mesh, input, space, mode, out_off, out_values } => {
            let mesh = load_mesh(&mesh)?;
            let samples = parse_element_samples_csv(&std::fs::read(&input)?)?;
            let space: MeshSpace = space.into();
            let element_count = mesh.graph(space).vertex_count();
            let values: Vec<f64> = match mode {
                ModeArg::Int => {
                    let guiding = level_guiding(&samples, element_count)?;
                    let levels =
                        guiding.entries().iter().map(|&(_, k)| k).max().unwrap_or(1);
                    let field = match space {
                        MeshSpace::Vertex => {
                            manifold_int_gvf(&mesh, &guiding, levels, EnvelopePolicy::Midpoint)?
                        }
                        MeshSpace::Cell => manifold_cell_int_gvf(
                            &mesh,
                            &guiding,
                            levels,
                            EnvelopePolicy::Midpoint,
                        )?,
                    };
                    field.values().iter().map(|&k| k as f64).collect()
                }
                ModeArg::Real => {
                    let guiding = real_guiding(&samples, element_count)?;
                    let (field, _) = match space {
                        MeshSpace::Vertex => {
                            manifold_real_gvf(&mesh, &guiding, EnvelopePolicy::Midpoint)?
                        }
                        MeshSpace::Cell => {
                            manifold_cell_real_gvf(&mesh, &guiding, EnvelopePolicy::Midpoint)?
                        }
                    };
                    field.values().to_vec()
                }
            };
            if let Some(path) = out_off {
                write_off(&mesh, path)?;
            }
            if let Some(path) = out_values {
                write_values_csv(&values, path)?;
            }
            println!("fit {} {space} values from {} samples", values.len(), samples.len());
            Ok(())
        }
        Command::Harmonic { mesh, input, space, iters, out_values, trace } => {
            let mesh = load_mesh(&mesh)?;
            let samples = parse_element_samples_csv(&std::fs::read(&input)?)?;
            let space: MeshSpace = space.into();
            let element_count = mesh.graph(space).vertex_count();
            let guiding = real_guiding(&samples, element_count)?;
            // lower-envelope fit as the start point keeps every iterate
            // inside the observed value range
            let (init, _) = match space {
                MeshSpace::Vertex => manifold_real_gvf(&mesh, &guiding, EnvelopePolicy::Lower)?,
                MeshSpace::Cell => {
                    manifold_cell_real_gvf(&mesh, &guiding, EnvelopePolicy::Lower)?
                }
            };
            let (field, trace_values) = harmonic_fit(&mesh, &init, &guiding, iters)?;
            if let Some(path) = out_values {
                write_values_csv(field.values(), path)?;
            }
            if let Some(path) = trace {
                let mut text = String::new();
                for u in &trace_values {
                    text.push_str(&format!("{u}\n"));
                }
                std::fs::write(path, text)?;
            }
            println!(
                "relaxed {} {space} values for {} sweeps (final update {})",
                field.len(),
                trace_values.len(),
                trace_values.last().copied().unwrap_or(0.0)
            );
            Ok(())
        }
    }
}

/// Entry point shared by `main` and the integration tests. Exit codes:
/// 0 success, 2 input/usage error, 3 infeasible guiding set (the
/// violating pair is printed).
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.exit_code() == 0 { EXIT_OK } else { EXIT_INPUT_ERROR };
            let _ = err.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_infeasible() {
                EXIT_INFEASIBLE
            } else {
                EXIT_INPUT_ERROR
            }
        }
    }
}
