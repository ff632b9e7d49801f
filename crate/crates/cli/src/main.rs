mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crease_subdiv::analysis::{self, AnalysisError, LocalConfiguration, TrackedKind};
use crease_subdiv::io::{self, IoError};
use crease_subdiv::mesh::validate_manifold;
use crease_subdiv::tagging::{self, EdgeClass, VertexKind};
use crease_subdiv::{subdivide, RuleOptions, SchemeError, SchemeKind, SharpnessTags, TriMesh};

/// Feature-preserving triangle mesh subdivision.
#[derive(Debug, Parser)]
#[command(name = "crease-subdiv", version, about)]
struct Cli {
    /// Suppress progress messages on standard error.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Refine a mesh.
    Subdivide(SubdivideArgs),
    /// Check that a mesh is a consistently oriented 2-manifold.
    Validate(InputArgs),
    /// Print counts, valences and vertex, edge and face classes.
    Stats(InputArgs),
    /// Spectrum of the local subdivision matrix around a vertex.
    Analyze(AnalyzeArgs),
    /// Valence growth of vertices on tagged edges.
    TraceValence(TraceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Sqrt3,
    Loop,
    Hybrid,
}

impl From<SchemeArg> for SchemeKind {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Sqrt3 => SchemeKind::Sqrt3,
            SchemeArg::Loop => SchemeKind::Loop,
            SchemeArg::Hybrid => SchemeKind::Hybrid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "json-like")]
    Json,
}

#[derive(Debug, Args)]
struct RuleArgs {
    /// Treat the mesh boundary as an ordinary smooth border instead of a crease.
    #[arg(long)]
    no_boundary_crease: bool,
    /// Use the modified edge mask next to vertices of valence above six.
    #[arg(long)]
    modified_odd_mask: bool,
}

impl RuleArgs {
    fn options(&self) -> RuleOptions {
        RuleOptions {
            boundary_as_crease: !self.no_boundary_crease,
            modified_odd_mask: self.modified_odd_mask,
        }
    }
}

#[derive(Debug, Args)]
struct SubdivideArgs {
    #[arg(long)]
    input: PathBuf,
    /// Sharpness tags for the input mesh.
    #[arg(long)]
    tags: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "hybrid")]
    scheme: SchemeArg,
    #[arg(long, default_value_t = 1)]
    levels: usize,
    #[arg(long)]
    output: PathBuf,
    /// Write the refined tags here.
    #[arg(long)]
    emit_tags: Option<PathBuf>,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Debug, Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    tags: Option<PathBuf>,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[arg(long)]
    valence: usize,
    /// Steps combined into one matrix; defaults to 2 for sqrt3 and hybrid, 1 for loop.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    steps: Option<u8>,
    /// Control rings around the center.
    #[arg(long, default_value_t = 1)]
    rings: usize,
    /// Tag the spoke with this 0-based index as a crease (loop only); repeatable.
    #[arg(long = "crease")]
    creases: Vec<usize>,
    /// Sample the characteristic map with this many segments per face edge.
    #[arg(long, value_name = "R")]
    char_map: Option<usize>,
    /// Write the characteristic map's iso-lines here as `x y` points.
    #[arg(long, requires = "char_map")]
    char_map_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Exit with status 4 if an ordering condition or map check fails.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    tags: PathBuf,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Also list vertices without tagged edges.
    #[arg(long)]
    all: bool,
    /// Exit with status 4 if the growth law fails where it should hold.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    rules: RuleArgs,
}

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_CONDITION: u8 = 4;

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let code = if e.is_tag_mismatch() { EXIT_MISMATCH } else { EXIT_INPUT };
        Failure::new(code, e.to_string())
    }
}

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        let code = match e {
            SchemeError::TagMeshMismatch(_) => EXIT_MISMATCH,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        let code = match &e {
            AnalysisError::Scheme(SchemeError::TagMeshMismatch(_)) => EXIT_MISMATCH,
            AnalysisError::Scheme(_) => EXIT_INPUT,
            AnalysisError::InvalidValence(_)
            | AnalysisError::InvalidInput(_)
            | AnalysisError::InvalidResolution(_)
            | AnalysisError::UnsupportedConfiguration(_)
            | AnalysisError::ConfigurationTooSmall { .. }
            | AnalysisError::TooFewLevels(_) => EXIT_USAGE,
            _ => EXIT_CONDITION,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

fn run(args: impl IntoIterator<Item = OsString>) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    let log = Log { quiet: cli.quiet };
    let result = match &cli.command {
        Command::Subdivide(a) => cmd_subdivide(a, log),
        Command::Validate(a) => cmd_validate(a),
        Command::Stats(a) => cmd_stats(a),
        Command::Analyze(a) => cmd_analyze(a, log),
        Command::TraceValence(a) => cmd_trace(a, log),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Log {
    quiet: bool,
}

impl Log {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn load(input: &Path, tags: Option<&Path>) -> Result<(TriMesh, SharpnessTags), Failure> {
    let mesh = io::read_obj(input)?;
    let tags = match tags {
        Some(p) => io::read_tags(p, &mesh)?,
        None => SharpnessTags::new(),
    };
    Ok((mesh, tags))
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn cmd_subdivide(a: &SubdivideArgs, log: Log) -> Result<u8, Failure> {
    let (mesh, tags) = load(&a.input, a.tags.as_deref())?;
    let scheme = SchemeKind::from(a.scheme);
    log.info(format!(
        "level 0: {} vertices, {} faces, {} tagged edges, {} sharp faces",
        mesh.vertex_count(),
        mesh.face_count(),
        tags.sharp_edges.len(),
        tags.sharp_faces.len()
    ));
    let records = subdivide(mesh, tags, scheme, a.levels, a.rules.options())?;
    for r in &records[1..] {
        log.info(format!(
            "level {}: {} vertices, {} faces ({scheme})",
            r.level,
            r.mesh.vertex_count(),
            r.mesh.face_count()
        ));
    }
    let last = records.last().expect("level 0 is always present");
    write_output(&a.output, &io::format_obj(&last.mesh))?;
    if let Some(p) = &a.emit_tags {
        write_output(p, &io::format_tags(&last.tags))?;
    }
    Ok(0)
}

fn cmd_validate(a: &InputArgs) -> Result<u8, Failure> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", a.input.display())))?;
    let data = io::parse_obj(&text)?;
    let report = validate_manifold(data.positions.len(), &data.faces);
    println!("{}: {} vertices, {} faces", a.input.display(), data.positions.len(), data.faces.len());
    for w in &report.warnings {
        println!("warning: {w}");
    }
    for v in &report.violations {
        println!("violation: {v}");
    }
    if !report.is_valid() {
        println!("invalid: {} violation(s), indices are 0-based", report.violations.len());
        return Ok(EXIT_INPUT);
    }
    if let Some(t) = &a.tags {
        let mesh = data.into_mesh()?;
        let tags = io::read_tags(t, &mesh)?;
        println!(
            "tags: {} sharp edges, {} sharp faces",
            tags.sharp_edges.len(),
            tags.sharp_faces.len()
        );
    }
    println!("valid");
    Ok(0)
}

fn cmd_stats(a: &InputArgs) -> Result<u8, Failure> {
    let (mesh, tags) = load(&a.input, a.tags.as_deref())?;
    let opts = a.rules.options();
    println!("vertices: {}", mesh.vertex_count());
    println!("edges: {}", mesh.edge_count());
    println!("faces: {}", mesh.face_count());
    println!("euler characteristic: {}", mesh.euler_characteristic());
    println!("boundary edges: {}", mesh.boundary_edge_count());
    println!("closed: {}", mesh.is_closed());

    let mut valences: BTreeMap<usize, usize> = BTreeMap::new();
    let mut kinds: BTreeMap<&str, usize> = BTreeMap::new();
    for v in 0..mesh.vertex_count() {
        *valences.entry(mesh.valence(v)).or_default() += 1;
        let kind = match tagging::classify_vertex_with(&mesh, &tags, v, opts).kind {
            VertexKind::SmoothInterior => "smooth",
            VertexKind::Crease => "crease",
            VertexKind::Corner => "corner",
            VertexKind::Boundary => "boundary",
            VertexKind::Isolated => "isolated",
        };
        *kinds.entry(kind).or_default() += 1;
    }
    println!("valence histogram:");
    for (n, count) in &valences {
        println!("  {n}: {count}");
    }
    println!("vertex classes:");
    for (k, count) in &kinds {
        println!("  {k}: {count}");
    }

    let mut edges: BTreeMap<EdgeClass, usize> = BTreeMap::new();
    for e in mesh.edges() {
        let class = tagging::classify_edge(&mesh, &tags, *e).expect("edge of this mesh");
        *edges.entry(class).or_default() += 1;
    }
    println!("edge classes:");
    for (class, count) in &edges {
        let name = match class {
            EdgeClass::SmoothSmooth => "smooth",
            EdgeClass::SharpBetweenSmooth => "tagged between smooth faces",
            EdgeClass::MixedSmoothSharp => "smooth/sharp faces",
            EdgeClass::SharpSharp => "between sharp faces",
            EdgeClass::BoundaryEdge => "boundary",
        };
        println!("  {name}: {count}");
    }
    println!("face classes:");
    println!("  smooth: {}", mesh.face_count() - tags.sharp_faces.len());
    println!("  sharp: {}", tags.sharp_faces.len());
    Ok(0)
}

fn cmd_analyze(a: &AnalyzeArgs, log: Log) -> Result<u8, Failure> {
    let scheme = SchemeKind::from(a.scheme);
    let steps = a.steps.map(usize::from).unwrap_or(match scheme {
        SchemeKind::Loop => 1,
        _ => 2,
    });
    let mut config = LocalConfiguration::new(a.valence).with_rings(a.rings);
    config.options = a.rules.options();
    config.creases.extend(a.creases.iter().copied());
    log.info(format!(
        "building the {scheme} matrix for valence {} over {steps} step(s)",
        a.valence
    ));
    let matrix = analysis::local_matrix(scheme, &config, steps)?;
    let spectrum = analysis::spectrum(&matrix)?;
    let char_map = match a.char_map {
        Some(r) => {
            log.info(format!("sampling the characteristic map at resolution {r}"));
            Some(analysis::characteristic_map(scheme, a.valence, r)?)
        }
        None => None,
    };
    if let (Some(path), Some(sample)) = (&a.char_map_out, &char_map) {
        write_output(path, &sample.to_point_cloud())?;
    }
    let ctx = report::AnalyzeContext {
        scheme,
        valence: a.valence,
        steps,
        config: &config,
        spectrum: &spectrum,
        char_map: char_map.as_ref(),
    };
    let text = match a.format {
        Format::Text => report::analyze_text(&ctx)?,
        Format::Json => report::analyze_json(&ctx)?,
    };
    print!("{text}");

    let condition = match scheme {
        SchemeKind::Loop => &spectrum.tangent_plane_condition,
        SchemeKind::Sqrt3 | SchemeKind::Hybrid => &spectrum.sqrt3_condition,
    };
    let map_ok = char_map.as_ref().is_none_or(|s| s.regular && s.injective);
    let checked = config.creases.is_empty();
    if a.strict && checked && (!condition.passed || !map_ok) {
        return Ok(EXIT_CONDITION);
    }
    Ok(0)
}

fn cmd_trace(a: &TraceArgs, log: Log) -> Result<u8, Failure> {
    let (mesh, tags) = load(&a.input, Some(&a.tags))?;
    log.info(format!("tracing valences through {} hybrid level(s)", a.levels));
    let trace = analysis::valence_trace(&mesh, &tags, a.levels, a.rules.options())?;
    println!("# vertex kind sharp_edges birth valences residuals status");
    for t in &trace.vertices {
        if t.kind == TrackedKind::Untagged && !a.all {
            continue;
        }
        let kind = match t.kind {
            TrackedKind::Untagged => "untagged",
            TrackedKind::SharpEdgeVertex => "edge-vertex",
            TrackedKind::SharpEdgeMidpoint => "edge-midpoint",
        };
        let status = match (t.law_applies(), t.law_holds()) {
            (true, true) => "ok",
            (true, false) => "VIOLATION",
            (false, _) => "reported",
        };
        println!(
            "{} {kind} {} {} {} {} {status}",
            t.vertex + 1,
            t.sharp_edges,
            t.birth_level,
            join(&t.valences),
            join(&t.residuals),
        );
    }
    let violations = trace.violations().count();
    let applies = trace.vertices.iter().filter(|t| t.law_applies()).count();
    println!("# tracked {} vertices, law applies to {applies}, violations {violations}", trace.vertices.len());
    if a.strict && violations > 0 {
        return Ok(EXIT_CONDITION);
    }
    Ok(0)
}

fn join<T: ToString>(values: &[T]) -> String {
    values.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> u8 {
        run(std::iter::once("crease-subdiv").chain(args.iter().copied()).map(OsString::from))
    }

    #[test]
    fn usage_errors_exit_with_one() {
        assert_eq!(code(&[]), EXIT_USAGE);
        assert_eq!(code(&["frobnicate"]), EXIT_USAGE);
        assert_eq!(code(&["analyze", "--scheme", "cubic", "--valence", "5"]), EXIT_USAGE);
        assert_eq!(code(&["analyze", "--scheme", "loop", "--valence", "5", "--steps", "3"]), EXIT_USAGE);
        assert_eq!(code(&["analyze", "--scheme", "loop", "--valence", "2", "-q"]), EXIT_USAGE);
        assert_eq!(code(&["--help"]), 0);
        assert_eq!(code(&["--version"]), 0);
    }

    #[test]
    fn missing_input_is_an_input_failure() {
        assert_eq!(code(&["stats", "--input", "/nonexistent/mesh.obj"]), EXIT_INPUT);
    }

    #[test]
    fn strict_only_checks_uncreased_configurations() {
        assert_eq!(code(&["analyze", "--scheme", "loop", "--valence", "5", "--strict", "-q"]), 0);
        assert_eq!(
            code(&["analyze", "--scheme", "loop", "--valence", "6", "--crease", "0", "--crease", "3", "--strict", "-q"]),
            0
        );
    }
}
