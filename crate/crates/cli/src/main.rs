use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use torusgraph::coherence::{
    classify, is_weighted_delaunay, local_delaunay_det_at, oracle_weighted_delaunay, EdgeClass,
    VertexWeights, FLAT_TOLERANCE,
};
use torusgraph::equilibrium::{equilibrium_residual, tutte_embed};
use torusgraph::io::{self, GraphDocument};
use torusgraph::reciprocal::{
    build_reciprocal, covariance, force_diagram_torus, is_reciprocal_on, normalize_stress,
    reciprocal_torus, ReciprocalPair,
};
use torusgraph::render::{render_svg, RenderOptions};
use torusgraph::{Dart, Mat2, Stress, TorusGraph};

#[derive(Parser)]
#[command(name = "torusgraph", version, about = "Geodesic graphs on flat tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a graph document.
    Validate(Input),
    /// Equilibrium (Tutte) embedding for a positive stress.
    Embed {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        stress: StressArg,
        /// Vertex (name or index) kept at its current position.
        #[arg(long, default_value = "0")]
        pin: String,
        #[command(flatten)]
        out: Output,
    },
    /// Covariance, normalization, canonical reciprocal torus and force torus.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        stress: StressArg,
        #[command(flatten)]
        out: Output,
    },
    /// Build the reciprocal dual and write it as a document.
    Reciprocal {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        stress: StressArg,
        /// Normalize the stress and move to the canonical reciprocal torus
        /// instead of requiring the current torus to be reciprocal.
        #[arg(long)]
        canonical: bool,
        /// Also write the (possibly transformed) primal document here.
        #[arg(long)]
        primal_output: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Lift a reciprocal pair to Delaunay weights.
    Weights {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        stress: StressArg,
        /// As for `reciprocal`.
        #[arg(long)]
        canonical: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Local weighted Delaunay test of every edge, with the document's
    /// weights (zero if absent).
    CheckDelaunay {
        #[command(flatten)]
        input: Input,
        /// Relative flatness threshold.
        #[arg(long, default_value_t = FLAT_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Brute-force weighted Delaunay graph of a sites file.
    Oracle {
        /// Sites file (`torus a b c d` then `site name x y weight`).
        sites: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Draw a graph as SVG.
    Render {
        #[command(flatten)]
        input: Input,
        /// Number of domain copies, e.g. `3x3`.
        #[arg(long, default_value = "1x1")]
        patch: String,
        /// Overlay the dual: reciprocal if a stress is available and
        /// reciprocal on this torus, face centroids otherwise.
        #[arg(long)]
        dual: bool,
        /// Draw power circles for positive weights.
        #[arg(long)]
        weights: bool,
        #[arg(long, default_value_t = 240.0)]
        scale: f64,
        #[command(flatten)]
        stress: OptionalStress,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Input {
    /// Graph document.
    file: PathBuf,
}

#[derive(Args)]
struct StressArg {
    /// `uniform:VALUE` or a file of `stress edge value` lines; defaults to
    /// the document's stress section.
    #[arg(long)]
    stress: Option<String>,
}

#[derive(Args)]
struct OptionalStress {
    /// As for `embed`; only used for the dual overlay.
    #[arg(long)]
    stress: Option<String>,
}

#[derive(Args)]
struct Output {
    /// Write here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

enum Failure {
    Domain(torusgraph::Error),
    Usage(String),
}

impl From<torusgraph::Error> for Failure {
    fn from(e: torusgraph::Error) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(input: &Input) -> CliResult<GraphDocument> {
    Ok(io::parse(&read(&input.file)?)?)
}

fn emit(out: &Output, text: &str) -> CliResult<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn resolve_stress(spec: Option<&str>, doc: &GraphDocument) -> CliResult<Stress> {
    let g = &doc.graph;
    match spec {
        Some(s) => {
            if let Some(v) = s.strip_prefix("uniform:") {
                let value: f64 = v
                    .parse()
                    .map_err(|_| Failure::Usage(format!("bad uniform stress `{v}`")))?;
                Ok(Stress::uniform(g.edge_count(), value))
            } else {
                Ok(io::parse_stress(&read(Path::new(s))?, g)?)
            }
        }
        None => doc.stress.clone().ok_or_else(|| {
            Failure::Usage("no --stress given and the document has no stress section".into())
        }),
    }
}

fn resolve_vertex(g: &TorusGraph, spec: &str) -> CliResult<usize> {
    if let Some(v) = g.vertex_index(spec) {
        return Ok(v);
    }
    match spec.parse::<usize>() {
        Ok(v) if v < g.vertex_count() => Ok(v),
        _ => Err(Failure::Usage(format!("unknown vertex `{spec}`"))),
    }
}

fn parse_patch(spec: &str) -> CliResult<usize> {
    let bad = || Failure::Usage(format!("--patch expects KxK, got `{spec}`"));
    let (a, b) = spec.split_once(['x', 'X']).ok_or_else(bad)?;
    let (a, b): (usize, usize) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
    if a != b || a == 0 {
        return Err(Failure::Usage(format!(
            "--patch must be square and nonempty, got `{spec}`"
        )));
    }
    Ok(a)
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn mat(m: Mat2) -> String {
    format!("{} {} {} {}", num(m.a), num(m.b), num(m.c), num(m.d))
}

/// Reciprocal pair on the graph's own torus, or on the canonical torus of
/// the normalized stress.
fn pair_for(doc: &GraphDocument, stress: &Stress, canonical: bool) -> CliResult<ReciprocalPair> {
    let g = &doc.graph;
    if canonical {
        let normalized = normalize_stress(g, stress)?;
        let shape = reciprocal_torus(&covariance(g, &normalized)?)?;
        Ok(build_reciprocal(g, &normalized, &shape)?)
    } else {
        Ok(build_reciprocal(g, stress, g.shape())?)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Validate(input) => {
            let doc = load(&input)?;
            let g = &doc.graph;
            let report = g.check_essential();
            let mut s = String::new();
            writeln!(s, "vertices {}", g.vertex_count()).unwrap();
            writeln!(s, "edges {}", g.edge_count()).unwrap();
            writeln!(s, "faces {}", g.face_count()).unwrap();
            writeln!(s, "essentially_simple {}", report.essentially_simple).unwrap();
            writeln!(
                s,
                "essentially_3_connected {}",
                report.essentially_3_connected
            )
            .unwrap();
            if report.window_limited {
                writeln!(
                    s,
                    "note homology entries exceed 1; 3-connectivity checked on a 3x3 window"
                )
                .unwrap();
            }
            if let Some(stress) = &doc.stress {
                let r = equilibrium_residual(g, stress)?;
                writeln!(
                    s,
                    "equilibrium {} {}",
                    r.is_equilibrium(),
                    num(r.max_residual)
                )
                .unwrap();
            }
            print!("{s}");
            Ok(())
        }
        Command::Embed {
            input,
            stress,
            pin,
            out,
        } => {
            let doc = load(&input)?;
            let stress = resolve_stress(stress.stress.as_deref(), &doc)?;
            let pinned = resolve_vertex(&doc.graph, &pin)?;
            let g = tutte_embed(&doc.graph, &stress, pinned)?;
            emit(
                &out,
                &io::serialize(&g, Some(&stress), doc.weights.as_ref()),
            )
        }
        Command::Analyze { input, stress, out } => {
            let doc = load(&input)?;
            let g = &doc.graph;
            let stress = resolve_stress(stress.stress.as_deref(), &doc)?;
            let a = covariance(g, &stress)?;
            let normalized = normalize_stress(g, &stress)?;
            let factor = normalized.get(0) / stress.get(0);
            let canonical = reciprocal_torus(&covariance(g, &normalized)?)?;
            let mut s = String::new();
            writeln!(s, "alpha {}", num(a.alpha)).unwrap();
            writeln!(s, "beta {}", num(a.beta)).unwrap();
            writeln!(s, "gamma {}", num(a.gamma)).unwrap();
            writeln!(s, "discriminant {}", num(a.discriminant)).unwrap();
            writeln!(s, "normalization {}", num(factor)).unwrap();
            writeln!(s, "reciprocal_torus {}", mat(canonical.matrix())).unwrap();
            writeln!(
                s,
                "reciprocal_here {}",
                is_reciprocal_on(g, &stress, g.shape())
            )
            .unwrap();
            match force_diagram_torus(g, &stress) {
                Ok(n) => writeln!(s, "force_torus {}", mat(n.matrix())).unwrap(),
                Err(e) => writeln!(s, "force_torus none ({e})").unwrap(),
            }
            emit(&out, &s)
        }
        Command::Reciprocal {
            input,
            stress,
            canonical,
            primal_output,
            out,
        } => {
            let doc = load(&input)?;
            let stress = resolve_stress(stress.stress.as_deref(), &doc)?;
            let pair = pair_for(&doc, &stress, canonical)?;
            if let Some(path) = primal_output {
                emit(
                    &Output { output: Some(path) },
                    &io::serialize(&pair.primal, Some(&pair.stress), None),
                )?;
            }
            let inverse = Stress::new(pair.stress.values().iter().map(|w| 1.0 / w).collect());
            emit(&out, &io::serialize(&pair.dual, Some(&inverse), None))
        }
        Command::Weights {
            input,
            stress,
            canonical,
            out,
        } => {
            let doc = load(&input)?;
            let stress = resolve_stress(stress.stress.as_deref(), &doc)?;
            let pair = pair_for(&doc, &stress, canonical)?;
            let weights = torusgraph::coherence::weights_from_reciprocal(&pair)?;
            emit(
                &out,
                &io::serialize(&pair.primal, Some(&pair.stress), Some(&weights)),
            )
        }
        Command::CheckDelaunay {
            input,
            tolerance,
            out,
        } => {
            let doc = load(&input)?;
            let g = &doc.graph;
            let weights = doc
                .weights
                .clone()
                .unwrap_or_else(|| VertexWeights::zeros(g.vertex_count()));
            let verdict = is_weighted_delaunay(g, &weights)?;
            let mut s = String::new();
            let mut ok = true;
            for e in 0..g.edge_count() {
                let (det, scale) = local_delaunay_det_at(g, &weights, Dart::reference(e))?;
                let class = if det.abs() <= tolerance * scale {
                    EdgeClass::Flat
                } else {
                    classify(det, 0.0)
                };
                ok &= class == EdgeClass::Delaunay;
                writeln!(s, "edge {} {} {:?}", g.edge_name(e), num(det), class).unwrap();
            }
            for d in &verdict.diagonals {
                ok &= d.class == EdgeClass::Flat;
                writeln!(
                    s,
                    "diagonal f{} {} {} {} {:?}",
                    d.face,
                    d.corners.0,
                    d.corners.1,
                    num(d.det),
                    d.class
                )
                .unwrap();
            }
            writeln!(s, "delaunay {ok}").unwrap();
            emit(&out, &s)
        }
        Command::Oracle { sites, out } => {
            let set = io::parse_sites(&read(&sites)?)?;
            let g = oracle_weighted_delaunay(&set)?;
            emit(&out, &io::serialize(&g, None, Some(&set.weights())))
        }
        Command::Render {
            input,
            patch,
            dual,
            weights,
            scale,
            stress,
            out,
        } => {
            let doc = load(&input)?;
            let g = &doc.graph;
            let k = parse_patch(&patch)?;
            if !(scale > 0.0 && scale.is_finite()) {
                return Err(Failure::Usage(format!(
                    "--scale must be positive, got {scale}"
                )));
            }
            let dual_graph = if dual {
                let reciprocal = match (stress.stress.as_deref(), &doc.stress) {
                    (None, None) => None,
                    (spec, _) => {
                        let s = resolve_stress(spec, &doc)?;
                        is_reciprocal_on(g, &s, g.shape())
                            .then(|| build_reciprocal(g, &s, g.shape()))
                            .transpose()?
                            .map(|p| p.dual)
                    }
                };
                match reciprocal {
                    Some(d) => Some(d),
                    None => Some(torusgraph::graph::dual(g)?.graph),
                }
            } else {
                None
            };
            let opts = RenderOptions {
                patch: k,
                scale,
                show_dual: dual,
                show_weights: weights,
            };
            emit(
                &out,
                &render_svg(g, dual_graph.as_ref(), doc.weights.as_ref(), &opts),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.kind());
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error[Usage]: {msg}");
            ExitCode::from(2)
        }
    }
}
