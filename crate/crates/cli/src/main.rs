//! `mixbiotic`: command-line front end for network generation, simulation,
//! parameter sweeps and dataset measurement.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or parse error,
//! 3 numeric or contract violation.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixbiotic_core::formats::{grid_csv, polar_csv, DenseTrace, LoadedTrace, SparseTrace};
use mixbiotic_core::ingest::{measure_events, Delimiter};
use mixbiotic_core::render::{
    normalize_radar, radar_csv, render_phase_svg, render_radar_svg, render_trajectory_svg, RadarInput,
};
use mixbiotic_core::rng::derive_seed;
use mixbiotic_core::{
    aggregate_graph, build_mesh, events_to_trace, graph_stats, parse_events, run_sim, run_sweep, series_measures,
    BaParams, FormatConfig, Graph, Incidence, MeasureSet, MeshSpec, NetworkSpec, SimConfig, SweepConfig, WsParams,
};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(
    name = "mixbiotic",
    version,
    about = "Communication-network simulation and mixbiotic society measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a network and write it as graph JSON.
    Gen(GenArgs),
    /// Graph statistics for a graph file, or dataset counts plus aggregate-graph statistics for an event file.
    Stats(StatsArgs),
    /// Simulate information spread on a network; writes the trace and its measures.
    Simulate(SimulateArgs),
    /// Sweep (g, d) over a mesh; writes the grid CSV and a phase diagram.
    Sweep(SweepArgs),
    /// Measures of an event file or a stored trace.
    Measure(MeasureArgs),
    /// Polar trajectory of a stored trace or an event file.
    Trajectory(TrajectoryArgs),
    /// Per-axis normalized radar comparison of measure files.
    Radar(RadarArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Model {
    Ws,
    Ba,
}

#[derive(Debug, Clone, Args)]
struct NetworkArgs {
    #[arg(long, value_enum, default_value = "ws")]
    model: Model,
    /// Vertex count.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// WS lattice degree (default 4) or BA edges per new vertex (default 2).
    #[arg(long)]
    k: Option<usize>,
    /// WS rewiring probability.
    #[arg(long, default_value_t = 0.7)]
    p: f64,
    /// BA initial complete-graph size.
    #[arg(long, default_value_t = 3)]
    na: usize,
}

impl NetworkArgs {
    fn spec(&self) -> NetworkSpec {
        match self.model {
            Model::Ws => NetworkSpec::Ws(WsParams {
                n: self.n,
                k: self.k.unwrap_or(4),
                p: self.p,
            }),
            Model::Ba => NetworkSpec::Ba(BaParams {
                n: self.n,
                n_a: self.na,
                k: self.k.unwrap_or(2),
            }),
        }
    }
}

#[derive(Debug, Clone, Args)]
struct RateArgs {
    /// Generation rate.
    #[arg(long, default_value_t = 0.4)]
    g: f64,
    /// Disappearance rate.
    #[arg(long, default_value_t = 0.3)]
    d: f64,
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    /// Information unit.
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long, default_value_t = 100)]
    tmax: usize,
    /// Initially informed vertices.
    #[arg(long, default_value_t = 10)]
    n0: usize,
}

#[derive(Debug, Clone, Args)]
struct EventFormatArgs {
    #[arg(long, value_enum, default_value = "auto")]
    delimiter: DelimiterArg,
    #[arg(long, default_value_t = 0)]
    time_col: usize,
    #[arg(long, default_value_t = 1)]
    src_col: usize,
    #[arg(long, default_value_t = 2)]
    dst_col: usize,
    /// Rows are directed messages (sender, receiver).
    #[arg(long)]
    directed: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DelimiterArg {
    Auto,
    Whitespace,
    Comma,
}

impl EventFormatArgs {
    fn config(&self) -> FormatConfig {
        FormatConfig {
            delimiter: match self.delimiter {
                DelimiterArg::Auto => Delimiter::Auto,
                DelimiterArg::Whitespace => Delimiter::Whitespace,
                DelimiterArg::Comma => Delimiter::Comma,
            },
            time_col: self.time_col,
            src_col: self.src_col,
            dst_col: self.dst_col,
            directed: self.directed,
            ..FormatConfig::default()
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TraceFormat {
    /// CSV with one column per vertex.
    Dense,
    /// JSON listing nonzero entries only.
    Sparse,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct StatsArgs {
    /// Graph JSON file.
    #[arg(long, group = "source")]
    graph: Option<PathBuf>,
    /// Event file.
    #[arg(long, group = "source")]
    events: Option<PathBuf>,
    #[command(flatten)]
    format: EventFormatArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Graph JSON file; otherwise a network is generated from the model flags and --seed.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    rates: RateArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Network seed; trial t simulates with derive_seed(seed, t).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials averaged into the reported measures; the trace is trial 0.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, value_enum, default_value = "dense")]
    format: TraceFormat,
    /// Trace output path; no trace is written if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Measure JSON path (stdout if omitted).
    #[arg(long)]
    measures: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    run: RunArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Base seed of every per-trial seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nihilism threshold on the normalized composites.
    #[arg(long, default_value_t = 0.05)]
    threshold: f64,
    /// `default` (11x11 lattice plus 19 near-diagonal points), `grid` (lattice with --step) or `file:<path>` (g,d rows).
    #[arg(long, default_value = "default")]
    mesh: String,
    /// Lattice spacing for `--mesh grid`.
    #[arg(long, default_value_t = 0.1)]
    step: f64,
    /// Reuse one network for every point and trial.
    #[arg(long)]
    fixed_network: bool,
    /// Grid CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Phase diagram SVG path.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Run metadata JSON path (defaults to the --out path with a .json extension).
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct MeasureArgs {
    #[arg(long, group = "source")]
    events: Option<PathBuf>,
    /// Dense CSV or sparse JSON trace.
    #[arg(long, group = "source")]
    trace: Option<PathBuf>,
    #[command(flatten)]
    format: EventFormatArgs,
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    /// Count only the receiving endpoint of each event.
    #[arg(long)]
    receiver_only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct TrajectoryArgs {
    #[arg(long, group = "source")]
    trace: Option<PathBuf>,
    #[arg(long, group = "source")]
    events: Option<PathBuf>,
    #[command(flatten)]
    format: EventFormatArgs,
    #[arg(long, default_value_t = 1.0)]
    u: f64,
    #[arg(long)]
    receiver_only: bool,
    /// Polar CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RadarArgs {
    /// Measure JSON files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Series labels, one per input (default: file stems).
    #[arg(long = "label")]
    labels: Vec<String>,
    /// Normalized CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
    fn contract(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<mixbiotic_core::Error> for Failure {
    fn from(e: mixbiotic_core::Error) -> Self {
        Self {
            code: if e.is_input_error() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("stdout: {e}"))),
    }
}

fn show_config(command: &str, config: serde_json::Value) {
    eprintln!("{command} config: {config}");
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    let text = read_text(path)?;
    Graph::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_events(
    path: &Path,
    fmt: &FormatConfig,
) -> Result<(mixbiotic_core::EventLog, mixbiotic_core::DatasetMeta), Failure> {
    let file = fs::File::open(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_events(BufReader::new(file), fmt).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn incidence(receiver_only: bool) -> Incidence {
    if receiver_only {
        Incidence::ReceiverOnly
    } else {
        Incidence::Both
    }
}

fn gen(a: GenArgs) -> Outcome {
    let spec = a.net.spec();
    show_config("gen", json!({ "network": spec, "seed": a.seed }));
    let graph = spec.generate(a.seed)?;
    write_text(a.out.as_deref(), &graph.to_json())
}

#[derive(serde::Serialize)]
struct EventStats {
    dataset: mixbiotic_core::DatasetMeta,
    graph: mixbiotic_core::GraphStats,
}

fn stats(a: StatsArgs) -> Outcome {
    if let Some(path) = &a.graph {
        show_config("stats", json!({ "graph": path }));
        let graph = load_graph(path)?;
        return write_text(a.out.as_deref(), &pretty(&graph_stats(&graph)));
    }
    let path = a.events.as_ref().expect("clap enforces one source");
    let fmt = a.format.config();
    show_config("stats", json!({ "events": path, "format": fmt }));
    let (log, meta) = load_events(path, &fmt)?;
    let graph = graph_stats(&aggregate_graph(&log));
    write_text(a.out.as_deref(), &pretty(&EventStats { dataset: meta, graph }))
}

fn simulate(a: SimulateArgs) -> Outcome {
    if a.trials == 0 {
        return Err(Failure::contract("--trials must be at least 1"));
    }
    let (graph, network) = match &a.graph {
        Some(path) => (load_graph(path)?, json!({ "graph": path })),
        None => {
            let spec = a.net.spec();
            (spec.generate(a.seed)?, json!(spec))
        }
    };
    let seeds: Vec<u64> = (0..a.trials as u64).map(|t| derive_seed(&[a.seed, t])).collect();
    let base = SimConfig {
        g: a.rates.g,
        d: a.rates.d,
        u: a.run.u,
        t_max: a.run.tmax,
        n_0: a.run.n0,
        seed: seeds[0],
    };
    show_config(
        "simulate",
        json!({ "network": network, "seed": a.seed, "sim": base, "trials": a.trials, "sim_seeds": seeds }),
    );
    if a.run.tmax == 0 {
        return Err(Failure::contract("--tmax must be positive to measure a trace"));
    }
    let mut sets = Vec::with_capacity(a.trials);
    for (t, &seed) in seeds.iter().enumerate() {
        let trace = run_sim(&SimConfig { seed, ..base }, &graph)?;
        sets.push(series_measures(trace.vectors(), graph.vertex_count(), base.u)?);
        if t == 0 {
            if let Some(out) = &a.out {
                let text = match a.format {
                    TraceFormat::Dense => DenseTrace::from_sim(&trace).to_csv(),
                    TraceFormat::Sparse => SparseTrace::from_sim(&trace, base.u).to_json(),
                };
                write_text(Some(out), &text)?;
            }
        }
    }
    let measures = MeasureSet::average(&sets).expect("at least one trial");
    write_text(a.measures.as_deref(), &pretty(&measures))
}

fn parse_mesh(arg: &str, step: f64) -> Result<MeshSpec, Failure> {
    match arg {
        "default" => Ok(MeshSpec::standard()),
        "grid" => Ok(MeshSpec::grid(step)),
        other => {
            let Some(path) = other.strip_prefix("file:") else {
                return Err(Failure {
                    code: 1,
                    message: format!("unknown mesh {other:?}; use default, grid or file:<path>"),
                });
            };
            let text = read_text(Path::new(path))?;
            let mut points = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = line
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|f| !f.is_empty())
                    .collect();
                let parsed = match fields.as_slice() {
                    [g, d] => g.parse::<f64>().ok().zip(d.parse::<f64>().ok()),
                    _ => None,
                };
                match parsed {
                    Some(p) => points.push(p),
                    // a header row is tolerated on the first line only
                    None if i == 0 => {}
                    None => return Err(Failure::input(format!("{path}:{}: expected `g,d`", i + 1))),
                }
            }
            Ok(MeshSpec::points(points))
        }
    }
}

fn sweep(a: SweepArgs) -> Outcome {
    let spec = parse_mesh(&a.mesh, a.step)?;
    let cfg = SweepConfig {
        network: a.net.spec(),
        trials: a.trials,
        u: a.run.u,
        t_max: a.run.tmax,
        n_0: a.run.n0,
        base_seed: a.seed,
        nihilism_threshold: a.threshold,
        fixed_network: a.fixed_network,
    };
    let mesh = build_mesh(&spec)?;
    let meta = json!({
        "config": cfg,
        "mesh": a.mesh,
        "grid_step": spec.grid_step,
        "points": mesh.len(),
        "seed_rule": "t = derive_seed([base_seed, key(g, d), trial]); network seed t (or derive_seed([base_seed]) with a fixed network); simulation seed mix64(t ^ 1)",
    });
    show_config("sweep", meta.clone());
    let grid = run_sweep(&cfg, &mesh, spec.grid_step)?;
    write_text(a.out.as_deref(), &grid_csv(&grid))?;
    if let Some(svg) = &a.svg {
        write_text(Some(svg), &render_phase_svg(&grid)?)?;
    }
    let meta_path = a
        .meta
        .clone()
        .or_else(|| a.out.as_ref().map(|o| o.with_extension("json")));
    if let Some(path) = meta_path {
        write_text(Some(&path), &pretty(&meta))?;
    }
    Ok(())
}

fn measure(a: MeasureArgs) -> Outcome {
    let measures = if let Some(path) = &a.trace {
        show_config("measure", json!({ "trace": path, "u": a.u }));
        let trace = LoadedTrace::parse(&read_text(path)?)?;
        trace.measures(a.u)?
    } else {
        let path = a.events.as_ref().expect("clap enforces one source");
        let fmt = a.format.config();
        let inc = incidence(a.receiver_only);
        show_config(
            "measure",
            json!({ "events": path, "format": fmt, "u": a.u, "incidence": inc }),
        );
        let (log, _) = load_events(path, &fmt)?;
        measure_events(&log, a.u, inc)?
    };
    write_text(a.out.as_deref(), &pretty(&measures))
}

fn trajectory_cmd(a: TrajectoryArgs) -> Outcome {
    let points = if let Some(path) = &a.trace {
        show_config("trajectory", json!({ "trace": path }));
        LoadedTrace::parse(&read_text(path)?)?.trajectory()
    } else {
        let path = a.events.as_ref().expect("clap enforces one source");
        let fmt = a.format.config();
        let inc = incidence(a.receiver_only);
        show_config(
            "trajectory",
            json!({ "events": path, "format": fmt, "u": a.u, "incidence": inc }),
        );
        let (log, _) = load_events(path, &fmt)?;
        LoadedTrace::Sparse(events_to_trace(&log, a.u, inc)).trajectory()
    };
    if points.is_empty() {
        return Err(Failure::input("trace has no snapshots"));
    }
    write_text(a.out.as_deref(), &polar_csv(&points))?;
    if let Some(svg) = &a.svg {
        write_text(Some(svg), &render_trajectory_svg(&points)?)?;
    }
    Ok(())
}

fn radar(a: RadarArgs) -> Outcome {
    if !a.labels.is_empty() && a.labels.len() != a.inputs.len() {
        return Err(Failure {
            code: 1,
            message: format!("{} labels for {} inputs", a.labels.len(), a.inputs.len()),
        });
    }
    show_config("radar", json!({ "inputs": a.inputs, "labels": a.labels }));
    let mut series = Vec::with_capacity(a.inputs.len());
    for (i, path) in a.inputs.iter().enumerate() {
        let text = read_text(path)?;
        let m: MeasureSet =
            serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let label = match a.labels.get(i) {
            Some(l) => l.clone(),
            None => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("input {i}")),
        };
        series.push(RadarInput::from_measures(label, &m));
    }
    if series
        .iter()
        .any(|s| s.values.iter().any(|v| !v.is_finite() || *v < 0.0))
    {
        return Err(Failure::contract("radar values must be finite and non-negative"));
    }
    let normalized = normalize_radar(&series);
    write_text(a.out.as_deref(), &radar_csv(&normalized))?;
    if let Some(svg) = &a.svg {
        write_text(Some(svg), &render_radar_svg(&normalized)?)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Stats(a) => stats(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Measure(a) => measure(a),
        Command::Trajectory(a) => trajectory_cmd(a),
        Command::Radar(a) => radar(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
