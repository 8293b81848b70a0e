//! `echotopo` command line: simulate, ingest, embed, persist, analyze, and
//! the chained `pipeline` and `sweep-noise` runs.
//!
//! Exit status is 0 on success, 2 when inputs or configuration fail
//! validation and 3 when a computation fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use echotopo::domain::{magnitude_channel, Reducer};
use echotopo::embedding::{delay_embed, pca_project, ChannelReducer, DelayConfig};
use echotopo::io::{
    diagram_svg, ingest_array, read_cloud_csv, read_diagram_csv, write_array, write_cloud_csv,
    write_diagram_csv,
};
use echotopo::pipeline::{
    echo_report, persist_cloud, run_noise_sweep, run_pipeline, AnalysisSection, EmbeddingSection,
    PersistenceSection, RunConfig, Source, ARTIFACTS,
};
use echotopo::rips::Metric;
use echotopo::sim::{add_awgn, PipeSimulation};
use echotopo::{Error, Result};

#[derive(Parser)]
#[command(
    name = "echotopo",
    version,
    about = "Topology of sonar echo collections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the pipe scene and write its signal array.
    Simulate(SimulateArgs),
    /// Read a signal array, print its shape, optionally convert it.
    Ingest(IngestArgs),
    /// Delay-embed a signal array into a point cloud.
    Embed(EmbedArgs),
    /// Rips persistence of a point cloud.
    Persist(PersistArgs),
    /// Detect prominent echos and check them against a diagram.
    Analyze(AnalyzeArgs),
    /// Run every stage and write the full artifact set.
    Pipeline(RunArgs),
    /// Rerun embedding and persistence over a list of noise levels.
    SweepNoise(RunArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ReducerArg {
    Identity,
    PerChannel,
    Max,
    L2,
}

impl From<ReducerArg> for ChannelReducer {
    fn from(r: ReducerArg) -> Self {
        match r {
            ReducerArg::Identity => ChannelReducer::Identity,
            ReducerArg::PerChannel => ChannelReducer::PerChannel,
            ReducerArg::Max => ChannelReducer::Max,
            ReducerArg::L2 => ChannelReducer::L2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Euclidean,
    PolylineGeodesic,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::PolylineGeodesic => Metric::PolylineGeodesic,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Output array; `.csv` writes CSV, anything else binary with a JSON sidecar.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 360)]
    look_angles: usize,
    /// Wavenumbers, one per range cell.
    #[arg(long, default_value_t = 100)]
    channels: usize,
    #[arg(long, default_value_t = 0.7)]
    peak_cross_section: f64,
    /// Per-component Gaussian noise level.
    #[arg(long, default_value_t = 0.0)]
    noise_sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct IngestArgs {
    input: PathBuf,
    /// Write the array again in the format implied by this path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbeddingArgs {
    /// Delay offsets in degrees.
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    reducer: Option<ReducerArg>,
    /// Half-open channel range kept before reduction, as `start,end`.
    #[arg(long, value_delimiter = ',', num_args = 2)]
    range_gate: Option<Vec<usize>>,
}

impl EmbeddingArgs {
    fn apply(&self, e: &mut EmbeddingSection) {
        if let Some(offsets) = &self.offsets {
            e.offsets_deg = offsets.clone();
        }
        if let Some(r) = self.reducer {
            e.reducer = r.into();
        }
        if let Some(gate) = &self.range_gate {
            e.range_gate = Some([gate[0], gate[1]]);
        }
    }
}

#[derive(Args)]
struct PersistenceArgs {
    #[arg(long, value_enum)]
    metric: Option<MetricArg>,
    #[arg(long)]
    max_dim: Option<usize>,
    /// Filtration cap; defaults to the cloud diameter.
    #[arg(long)]
    max_eps: Option<f64>,
}

impl PersistenceArgs {
    fn apply(&self, p: &mut PersistenceSection) {
        if let Some(m) = self.metric {
            p.metric = m.into();
        }
        if let Some(d) = self.max_dim {
            p.max_dim = d;
        }
        if self.max_eps.is_some() {
            p.max_eps = self.max_eps;
        }
    }
}

#[derive(Args)]
struct AnalysisArgs {
    /// Echo threshold as a fraction of the peak magnitude.
    #[arg(long)]
    threshold_fraction: Option<f64>,
    /// Relative slack allowed on the death-time bound.
    #[arg(long)]
    tolerance: Option<f64>,
}

impl AnalysisArgs {
    fn apply(&self, a: &mut AnalysisSection) {
        if let Some(f) = self.threshold_fraction {
            a.threshold_fraction = f;
        }
        if let Some(t) = self.tolerance {
            a.sampling_tolerance = t;
        }
    }
}

#[derive(Args)]
struct EmbedArgs {
    /// Signal array (`.csv`, or binary with a JSON sidecar).
    #[arg(long)]
    input: PathBuf,
    /// Embedded cloud CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also write the 3-component PCA projection here.
    #[arg(long)]
    pca: Option<PathBuf>,
    #[command(flatten)]
    embedding: EmbeddingArgs,
}

#[derive(Args)]
struct PersistArgs {
    /// Point cloud CSV as written by `embed`.
    #[arg(long)]
    cloud: PathBuf,
    /// Diagram CSV.
    #[arg(long)]
    out: PathBuf,
    /// Also draw the diagram here.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[command(flatten)]
    persistence: PersistenceArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Signal array the diagram was computed from.
    #[arg(long)]
    input: PathBuf,
    /// Diagram CSV as written by `persist`.
    #[arg(long)]
    diagram: PathBuf,
    /// Cap the diagram was computed with; defaults to its largest finite value.
    #[arg(long)]
    max_eps: Option<f64>,
    /// Report JSON; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration. Without it the pipe preset is used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Read the signal from this array instead of simulating.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Noise level for the main run.
    #[arg(long)]
    noise_sigma: Option<f64>,
    /// Noise levels for a sweep.
    #[arg(long, value_delimiter = ',')]
    sigmas: Option<Vec<f64>>,
    /// Print the effective configuration as TOML and exit.
    #[arg(long)]
    print_config: bool,
    #[command(flatten)]
    embedding: EmbeddingArgs,
    #[command(flatten)]
    persistence: PersistenceArgs,
    #[command(flatten)]
    analysis: AnalysisArgs,
}

impl RunArgs {
    fn config(&self) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::pipe_preset("out"),
        };
        if let Some(input) = &self.input {
            config.source = Source::Input {
                path: input.clone(),
            };
        }
        if let Some(out) = &self.out {
            config.output_dir = out.clone();
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(sigma) = self.noise_sigma {
            config.noise.sigma = sigma;
        }
        if let Some(sigmas) = &self.sigmas {
            config.noise.sweep = sigmas.clone();
        }
        self.embedding.apply(&mut config.embedding);
        self.persistence.apply(&mut config.persistence);
        self.analysis.apply(&mut config.analysis);
        Ok(config)
    }
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let sim = PipeSimulation {
        look_angles: args.look_angles,
        channels: args.channels,
        peak_cross_section: args.peak_cross_section,
        ..PipeSimulation::default()
    };
    sim.geometry()
        .map_err(|e| Error::Config(format!("simulate: {e}")))?;
    let clean = sim.collect().map_err(|e| e.in_stage("simulate"))?;
    let map = add_awgn(&clean, args.noise_sigma, args.seed).map_err(|e| e.in_stage("noise"))?;
    write_array(&map, &args.out, None)?;
    println!(
        "wrote {} ({} look angles x {} channels)",
        args.out.display(),
        map.domain().len(),
        map.channels()
    );
    Ok(())
}

fn ingest(args: &IngestArgs) -> Result<()> {
    let map = ingest_array(&args.input)?;
    let peak = magnitude_channel(&map, Reducer::L2)
        .samples()
        .iter()
        .map(|z| z.re)
        .fold(0.0, f64::max);
    println!("rows: {}", map.domain().len());
    println!("channels: {}", map.channels());
    println!("dtype: {}", if map.is_real() { "f32" } else { "c64" });
    println!("peak magnitude: {peak}");
    if let Some(out) = &args.out {
        write_array(&map, out, None)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn embed(args: &EmbedArgs) -> Result<()> {
    let mut section = EmbeddingSection::default();
    args.embedding.apply(&mut section);
    let invalid = |e: Error| Error::Config(format!("embedding: {e}"));
    let mut config = DelayConfig::new(section.offsets_deg, section.reducer).map_err(invalid)?;
    if let Some([start, end]) = section.range_gate {
        config = config.with_range_gate(start, end);
    }
    config.validate().map_err(invalid)?;
    let map = ingest_array(&args.input)?;
    config
        .check_grid(map.domain().len(), map.channels())
        .map_err(invalid)?;
    let cloud = delay_embed(&map, &config).map_err(|e| e.in_stage("embed"))?;
    write_cloud_csv(&cloud, &args.out)?;
    println!(
        "wrote {} ({} points in R^{})",
        args.out.display(),
        cloud.len(),
        cloud.ambient_dim()
    );
    if let Some(pca) = &args.pca {
        let projection =
            pca_project(&cloud, cloud.ambient_dim().min(3)).map_err(|e| e.in_stage("pca"))?;
        write_cloud_csv(&projection, pca)?;
        println!("wrote {}", pca.display());
    }
    Ok(())
}

fn persist(args: &PersistArgs) -> Result<()> {
    let mut section = PersistenceSection::default();
    args.persistence.apply(&mut section);
    if section.max_dim > 2 {
        return Err(Error::Config(format!(
            "max_dim must be 0, 1 or 2, got {}",
            section.max_dim
        )));
    }
    if let Some(eps) = section.max_eps.filter(|e| !(*e > 0.0 && e.is_finite())) {
        return Err(Error::Config(format!(
            "max_eps must be positive, got {eps}"
        )));
    }
    let cloud = read_cloud_csv(&args.cloud)?;
    let diagram = persist_cloud(&section, &cloud)?;
    write_diagram_csv(&diagram, &args.out)?;
    println!(
        "wrote {} ({} features)",
        args.out.display(),
        diagram.features().len()
    );
    if let Some(svg) = &args.svg {
        fs::write(svg, diagram_svg(&diagram)).map_err(|e| io_error(svg, e))?;
    }
    Ok(())
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let mut section = AnalysisSection::default();
    args.analysis.apply(&mut section);
    let map = ingest_array(&args.input)?;
    let mut diagram = read_diagram_csv(&args.diagram, args.max_eps.unwrap_or(f64::INFINITY))?;
    if args.max_eps.is_none() {
        let cap = diagram
            .features()
            .iter()
            .flat_map(|f| [f.birth, f.death])
            .filter(|x| x.is_finite())
            .fold(0.0, f64::max);
        diagram = read_diagram_csv(&args.diagram, cap)?;
    }
    let (_, report) = echo_report(&map, &diagram, &section)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match &args.out {
        Some(path) => fs::write(path, json).map_err(|e| io_error(path, e))?,
        None => print!("{json}"),
    }
    Ok(())
}

fn pipeline(args: &RunArgs) -> Result<()> {
    let config = args.config()?;
    if args.print_config {
        print!("{}", config.to_toml_string());
        return Ok(());
    }
    let result = run_pipeline(&config)?;
    let dir = config.output_dir.display();
    for name in ARTIFACTS.iter().chain(&["manifest.json"]) {
        println!("wrote {dir}/{name}");
    }
    for e in &result.report.echos {
        println!(
            "echo {:.1}..{:.1} deg  peak {:.1}  sigma {:.4}  death {}  bound {:.4}  {:?}",
            e.start_deg,
            e.end_deg,
            e.peak_deg,
            e.sigma,
            e.matched_death
                .map_or("-".to_string(), |d| format!("{d:.4}")),
            e.predicted_death_lb,
            e.verdict
        );
    }
    Ok(())
}

fn sweep_noise(args: &RunArgs) -> Result<()> {
    let config = args.config()?;
    if args.print_config {
        print!("{}", config.to_toml_string());
        return Ok(());
    }
    let rows = run_noise_sweep(&config)?;
    println!("sigma,top_death,top_persistence");
    for r in rows {
        println!("{},{},{}", r.sigma, r.top_death, r.top_persistence);
    }
    println!("wrote {}/noise_sweep.csv", config.output_dir.display());
    Ok(())
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Ingest(a) => ingest(a),
        Command::Embed(a) => embed(a),
        Command::Persist(a) => persist(a),
        Command::Analyze(a) => analyze(a),
        Command::Pipeline(a) => pipeline(a),
        Command::SweepNoise(a) => sweep_noise(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
