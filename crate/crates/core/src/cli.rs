//! Command-line front end: `render`, `eval`, `bench` and `gen-synthetic`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::eval::{bench, evaluate};
use crate::model::{load_snapshot, write_snapshot, CoordKind, GridSnapshot, Profile, SyntheticParams};
use crate::pipeline::{prepare, Method};
use crate::render::{encode_vector, RenderConfig, VectorFormat};
use crate::{Error, Result};

/// Exit status for bad arguments or configuration.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for failures while loading, computing or writing.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Parser)]
#[command(name = "gridviz", version, about = "Render and evaluate power-grid bus voltage maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render one method to PNG, SVG, GeoJSON or a field dump.
    Render(RenderArgs),
    /// Write stats.json and violin.csv comparing methods with the data.
    Eval(EvalArgs),
    /// Time pre-processing and rendering, writing bench.json.
    Bench(BenchArgs),
    /// Write a synthetic feeder as buses.csv and edges.csv.
    GenSynthetic(GenArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Bus table with columns bus_id, lon, lat, voltage.
    #[arg(long)]
    buses: PathBuf,
    /// Edge table with columns from_bus, to_bus.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Read the coordinate columns as planar meters instead of degrees.
    #[arg(long)]
    meters: bool,
}

impl InputArgs {
    fn load(&self) -> Result<GridSnapshot> {
        let kind = if self.meters { CoordKind::Meters } else { CoordKind::LonLat };
        load_snapshot(&self.buses, self.edges.as_deref(), kind)
    }
}

/// Flags that override values from the config file.
#[derive(Debug, Args)]
struct ConfigArgs {
    /// TOML file with render settings.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    cell_size: Option<f64>,
    /// Spatial neighbors (default 100 for contour, 1 for netcontour).
    #[arg(long)]
    k: Option<usize>,
    /// Network neighbors for netcontour smoothing.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    sd_threshold: Option<f64>,
    /// Meters around lines where color is drawn; `inf` disables the mask.
    #[arg(long, allow_negative_numbers = true)]
    mask_radius: Option<f64>,
    /// Comma-separated hex edge lengths, coarse first.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    hex_edges: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    quad_base: Option<f64>,
    #[arg(long)]
    quad_levels: Option<u8>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    no_lines: bool,
    #[arg(long)]
    draw_buses: bool,
    #[arg(long)]
    no_scale_bar: bool,
}

impl ConfigArgs {
    fn resolve(&self, method: Option<Method>) -> Result<RenderConfig> {
        let mut c = match &self.config {
            Some(p) => RenderConfig::load(p)?,
            None => RenderConfig::default(),
        };
        if let Some(m) = method {
            c.method = m;
        }
        if let Some(v) = self.cell_size {
            c.cell_size = v;
        }
        if self.k.is_some() {
            c.k = self.k;
        }
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.sd_threshold {
            c.sd_threshold = v;
        }
        if let Some(v) = self.mask_radius {
            c.mask_radius = v;
        }
        if let Some(v) = &self.hex_edges {
            c.hex_edges = v.clone();
        }
        if let Some(v) = self.quad_base {
            c.quad_base = v;
        }
        if let Some(v) = self.quad_levels {
            c.quad_levels = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        c.draw_lines &= !self.no_lines;
        c.draw_buses |= self.draw_buses;
        c.scale_bar &= !self.no_scale_bar;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// contour, glyph, voronoi, hex, quad or netcontour.
    #[arg(long)]
    method: Option<String>,
    /// PNG output path.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    geojson: Option<PathBuf>,
    /// Binary field dump (`.csv` or `.txt` extension writes text).
    #[arg(long)]
    field: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Methods to evaluate, comma-separated, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    method: Vec<String>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long)]
    buses: Option<PathBuf>,
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    meters: bool,
    /// Benchmark a synthetic feeder of this many buses instead of files.
    #[arg(long, conflicts_with = "buses")]
    synthetic: Option<usize>,
    #[arg(long, default_value = "uniform")]
    profile: String,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, value_delimiter = ',', default_value = "all")]
    method: Vec<String>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value = "bench.json")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Number of buses.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// uniform or clustered.
    #[arg(long, default_value = "uniform")]
    profile: String,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    configure_threads();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("gridviz: {e}");
            match e {
                Error::Config(_) | Error::InvalidArgument(_) | Error::UnknownMethod(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

/// Caps the global thread pool at `GRIDVIZ_THREADS` when set and nonzero.
fn configure_threads() {
    let Ok(v) = std::env::var("GRIDVIZ_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(0) => {}
        Ok(n) => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Err(_) => log::warn!("ignoring GRIDVIZ_THREADS={v}"),
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Render(a) => cmd_render(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Bench(a) => cmd_bench(a),
        Command::GenSynthetic(a) => cmd_gen(a),
    }
}

fn parse_methods(tokens: &[String]) -> Result<Vec<Method>> {
    let mut out = Vec::new();
    for t in tokens {
        if t.eq_ignore_ascii_case("all") {
            out.extend(Method::ALL);
        } else {
            out.push(t.parse()?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Writes every `(path, bytes)` pair; nothing is written if any output
/// failed to encode, since encoding happens before this call.
fn write_all(outputs: Vec<(PathBuf, Vec<u8>)>) -> Result<()> {
    for (path, bytes) in outputs {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

fn cmd_render(a: RenderArgs) -> Result<()> {
    let method = a.method.as_deref().map(str::parse).transpose()?;
    let config = a.config.resolve(method)?;
    if a.out.is_none() && a.svg.is_none() && a.geojson.is_none() && a.field.is_none() {
        return Err(Error::invalid("nothing to write; pass --out, --svg, --geojson or --field"));
    }
    let snapshot = a.input.load()?;
    let prepared = prepare(&snapshot, &config)?;
    if (a.svg.is_some() || a.geojson.is_some()) && !prepared.has_vector_output() {
        return Err(Error::invalid(format!("{} has no vector geometry", config.method)));
    }
    let rendered = prepared.render(&snapshot.voltages())?;
    let map = config.colormap();
    let lines: Vec<_> = if config.draw_lines {
        snapshot.edges.iter().map(|&e| snapshot.segment(e)).collect()
    } else {
        Vec::new()
    };
    let mut outputs = Vec::new();
    if let Some(p) = a.out {
        outputs.push((p, rendered.image.encode_png()?));
    }
    for (path, format) in [(a.svg, VectorFormat::Svg), (a.geojson, VectorFormat::GeoJson)] {
        if let Some(p) = path {
            let text = encode_vector(&rendered.features, &lines, format, &map, snapshot.projection.as_ref())?;
            outputs.push((p, text.into_bytes()));
        }
    }
    if let Some(p) = a.field {
        let bytes = if is_text_path(&p) {
            rendered.field.encode_text().into_bytes()
        } else {
            rendered.field.encode_binary()
        };
        outputs.push((p, bytes));
    }
    write_all(outputs)
}

fn is_text_path(p: &Path) -> bool {
    matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "txt"))
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let methods = parse_methods(&a.method)?;
    let config = a.config.resolve(None)?;
    let snapshot = a.input.load()?;
    let report = evaluate(&snapshot, &config, &methods)?;
    let stats = report.stats_json()?;
    let violin = report.violin_csv();
    write_all(vec![
        (a.out_dir.join("stats.json"), stats.into_bytes()),
        (a.out_dir.join("violin.csv"), violin.into_bytes()),
    ])
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let methods = parse_methods(&a.method)?;
    let config = a.config.resolve(None)?;
    let snapshot = match (a.synthetic, &a.buses) {
        (Some(n), _) => SyntheticParams::new(n, config.seed, a.profile.parse::<Profile>()?).generate()?,
        (None, Some(buses)) => {
            let kind = if a.meters { CoordKind::Meters } else { CoordKind::LonLat };
            load_snapshot(buses, a.edges.as_deref(), kind)?
        }
        (None, None) => return Err(Error::invalid("pass --buses or --synthetic")),
    };
    let reports = methods
        .into_iter()
        .map(|m| bench(m, &snapshot, &config, a.repeats))
        .collect::<Result<Vec<_>>>()?;
    let json = serde_json::to_string_pretty(&reports).map_err(|e| Error::Encode(e.to_string()))?;
    write_all(vec![(a.out, json.into_bytes())])
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let profile: Profile = a.profile.parse()?;
    let snapshot = SyntheticParams::new(a.n, a.seed, profile).generate()?;
    write_snapshot(&snapshot, &a.out_dir)
}
