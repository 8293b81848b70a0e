//! End-to-end runs: source map, delay embedding, persistence, echo report,
//! and the artifact files that record them.
//!
//! A run is described by a TOML [`RunConfig`]:
//!
//! ```toml
//! output_dir = "out/pipe"
//! seed = 7
//!
//! [source]
//! kind = "pipe"          # or: kind = "input", path = "scan.bin"
//!
//! [embedding]
//! offsets_deg = [0, 4, 25]
//! reducer = "l2"         # identity | per_channel | max | l2
//!
//! [persistence]
//! metric = "euclidean"   # or "polyline-geodesic"
//! max_dim = 1
//! max_eps = 0.6          # omit for the cloud diameter
//!
//! [analysis]
//! threshold_fraction = 0.1
//! sampling_tolerance = 0.1
//!
//! [noise]
//! sigma = 0.0
//! sweep = [0.0, 0.002, 0.004, 0.006, 0.008, 0.01]
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{detect_prominent_echos, EchoReport, EchoSupport};
use crate::domain::{magnitude_channel, PointCloud, Reducer, SignalMap};
use crate::embedding::{delay_embed, pca_project, ChannelReducer, DelayConfig};
use crate::error::{Error, Result};
use crate::io::{
    diagram_svg, ingest_array, pca_svg, write_cloud_csv, write_csv_array, write_diagram_csv,
};
use crate::rips::{distance_matrix, rips_persistence, Metric, PersistenceDiagram};
use crate::sim::{add_awgn, PipeSimulation};

/// Where the signal map comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Pipe(PipeSimulation),
    Input { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingSection {
    pub offsets_deg: Vec<f64>,
    pub reducer: ChannelReducer,
    pub range_gate: Option<[usize; 2]>,
}

impl Default for EmbeddingSection {
    fn default() -> Self {
        Self {
            offsets_deg: vec![0.0, 4.0, 25.0],
            reducer: ChannelReducer::Identity,
            range_gate: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PersistenceSection {
    pub metric: Metric,
    pub max_dim: usize,
    /// Filtration cap; the cloud diameter when absent.
    pub max_eps: Option<f64>,
}

impl Default for PersistenceSection {
    fn default() -> Self {
        Self {
            metric: Metric::Euclidean,
            max_dim: 1,
            max_eps: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub threshold_fraction: f64,
    pub sampling_tolerance: f64,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            threshold_fraction: 0.1,
            sampling_tolerance: 0.1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSection {
    /// Per-component noise level applied to the main run.
    pub sigma: f64,
    /// Noise levels visited by a sweep.
    pub sweep: Vec<f64>,
}

/// Everything a pipeline run or noise sweep needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub source: Source,
    #[serde(default)]
    pub embedding: EmbeddingSection,
    #[serde(default)]
    pub persistence: PersistenceSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl RunConfig {
    /// The calibrated pipe preset: L2 delay embedding at offsets
    /// 0°, 4°, 25° and H1 persistence capped at 0.6.
    pub fn pipe_preset(output_dir: impl Into<PathBuf>) -> Self {
        Self {
            source: Source::Pipe(PipeSimulation::default()),
            embedding: EmbeddingSection {
                reducer: ChannelReducer::L2,
                ..EmbeddingSection::default()
            },
            persistence: PersistenceSection {
                max_eps: Some(0.6),
                ..PersistenceSection::default()
            },
            analysis: AnalysisSection::default(),
            noise: NoiseSection {
                sigma: 0.0,
                sweep: vec![0.0, 0.002, 0.004, 0.006, 0.008, 0.01],
            },
            seed: 7,
            output_dir: output_dir.into(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parse a config file. Relative input paths resolve against the
    /// file's directory.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml_str(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Source::Input { path: input } = &mut config.source {
            if input.is_relative() {
                *input = base.join(&*input);
            }
        }
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn delay_config(&self) -> Result<DelayConfig> {
        let mut config =
            DelayConfig::new(self.embedding.offsets_deg.clone(), self.embedding.reducer)?;
        if let Some([start, end]) = self.embedding.range_gate {
            config = config.with_range_gate(start, end);
        }
        Ok(config)
    }

    /// Check every parameter against the stage it feeds, without computing.
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::Config(msg));
        match &self.source {
            Source::Input { path } if !path.exists() => {
                return invalid(format!("input file {} does not exist", path.display()));
            }
            Source::Pipe(p) => {
                p.geometry()
                    .map_err(|e| Error::Config(format!("pipe source: {e}")))?;
                if !(p.peak_cross_section > 0.0) {
                    return invalid("pipe peak_cross_section must be positive".into());
                }
                self.check_grid(p.look_angles, p.channels)?;
            }
            _ => {}
        }
        self.delay_config()
            .and_then(|c| c.validate())
            .map_err(|e| Error::Config(format!("embedding: {e}")))?;
        let p = &self.persistence;
        if p.max_dim > 2 {
            return invalid(format!(
                "persistence.max_dim must be 0, 1 or 2, got {}",
                p.max_dim
            ));
        }
        if let Some(eps) = p.max_eps {
            if !(eps > 0.0 && eps.is_finite()) {
                return invalid(format!("persistence.max_eps must be positive, got {eps}"));
            }
        }
        let a = &self.analysis;
        if !(a.threshold_fraction > 0.0 && a.threshold_fraction < 1.0) {
            return invalid(format!(
                "analysis.threshold_fraction must lie in (0, 1), got {}",
                a.threshold_fraction
            ));
        }
        if !(a.sampling_tolerance >= 0.0 && a.sampling_tolerance < 1.0) {
            return invalid(format!(
                "analysis.sampling_tolerance must lie in [0, 1), got {}",
                a.sampling_tolerance
            ));
        }
        for &s in std::iter::once(&self.noise.sigma).chain(&self.noise.sweep) {
            if !(s >= 0.0 && s.is_finite()) {
                return invalid(format!("noise levels must be nonnegative, got {s}"));
            }
        }
        Ok(())
    }

    fn check_grid(&self, n_samples: usize, channels: usize) -> Result<()> {
        self.delay_config()
            .and_then(|c| c.check_grid(n_samples, channels))
            .map_err(|e| Error::Config(format!("embedding: {e}")))
    }

    /// Noise-free signal map from the configured source. Input files are
    /// checked against the embedding grid here, since their shape is only
    /// known once read.
    pub fn source_map(&self) -> Result<SignalMap> {
        match &self.source {
            Source::Pipe(p) => p.collect(),
            Source::Input { path } => {
                let map = ingest_array(path)?;
                let n = map.domain().len();
                self.check_grid(n, map.channels())?;
                Ok(map)
            }
        }
    }
}

/// Everything a run computes, before it is written out.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub map: SignalMap,
    pub cloud: PointCloud,
    pub projection: PointCloud,
    pub diagram: PersistenceDiagram,
    pub echos: Vec<EchoSupport>,
    pub report: EchoReport,
}

/// Embed, persist and analyze one (possibly noisy) map.
pub fn analyze_map(config: &RunConfig, map: SignalMap) -> Result<PipelineResult> {
    let cloud = delay_embed(&map, &config.delay_config()?).map_err(|e| e.in_stage("embed"))?;
    let projection =
        pca_project(&cloud, cloud.ambient_dim().min(3)).map_err(|e| e.in_stage("pca"))?;
    let diagram = persist_cloud(&config.persistence, &cloud)?;
    let (echos, report) = echo_report(&map, &diagram, &config.analysis)?;
    Ok(PipelineResult {
        map,
        cloud,
        projection,
        diagram,
        echos,
        report,
    })
}

/// Rips persistence of a cloud with the configured metric and cap. A
/// missing cap means the cloud diameter.
pub fn persist_cloud(p: &PersistenceSection, cloud: &PointCloud) -> Result<PersistenceDiagram> {
    let d = distance_matrix(cloud, p.metric).map_err(|e| e.in_stage("persist"))?;
    let max_eps = p.max_eps.unwrap_or_else(|| d.diameter());
    // a cloud of coincident points has zero diameter
    let max_eps = if max_eps > 0.0 {
        max_eps
    } else {
        f64::MIN_POSITIVE
    };
    rips_persistence(&d, p.max_dim, max_eps).map_err(|e| e.in_stage("persist"))
}

/// Detect prominent echos in `map` and check them against `diagram`. The
/// threshold is relative to the peak L2 magnitude.
pub fn echo_report(
    map: &SignalMap,
    diagram: &PersistenceDiagram,
    a: &AnalysisSection,
) -> Result<(Vec<EchoSupport>, EchoReport)> {
    let echos =
        detect_prominent_echos(map, a.threshold_fraction).map_err(|e| e.in_stage("analyze"))?;
    let peak = magnitude_channel(map, Reducer::L2)
        .samples()
        .iter()
        .map(|z| z.re)
        .fold(0.0, f64::max);
    let report = EchoReport::build(
        &echos,
        a.threshold_fraction * peak,
        a.threshold_fraction,
        diagram,
        1,
        a.sampling_tolerance,
    )
    .map_err(|e| e.in_stage("analyze"))?;
    Ok((echos, report))
}

/// Validate, then compute the main run without writing anything.
pub fn compute_pipeline(config: &RunConfig) -> Result<PipelineResult> {
    config.validate()?;
    let clean = source_map_tagged(config)?;
    let map = add_awgn(&clean, config.noise.sigma, config.seed).map_err(|e| e.in_stage("noise"))?;
    analyze_map(config, map)
}

fn source_map_tagged(config: &RunConfig) -> Result<SignalMap> {
    config.source_map().map_err(|e| e.in_stage("source"))
}

/// Files written by a run, relative to the output directory.
pub const ARTIFACTS: [&str; 7] = [
    "signal.csv",
    "cloud.csv",
    "cloud_pca.csv",
    "diagram.csv",
    "echo_report.json",
    "diagram.svg",
    "pca.svg",
];

/// Run the full pipeline and write its artifacts plus `manifest.json`.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineResult> {
    let result = compute_pipeline(config)?;
    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let write = |name: &str, text: String| {
        let path = out.join(name);
        fs::write(&path, text).map_err(|e| Error::io(path, e))
    };
    let magnitude = magnitude_channel(&result.map, Reducer::PerChannel);
    write_csv_array(&magnitude, &out.join("signal.csv")).map_err(|e| e.in_stage("write"))?;
    write_cloud_csv(&result.cloud, &out.join("cloud.csv")).map_err(|e| e.in_stage("write"))?;
    write_cloud_csv(&result.projection, &out.join("cloud_pca.csv"))
        .map_err(|e| e.in_stage("write"))?;
    write_diagram_csv(&result.diagram, &out.join("diagram.csv"))
        .map_err(|e| e.in_stage("write"))?;
    let report = serde_json::to_string_pretty(&result.report).expect("report serializes");
    write("echo_report.json", report + "\n")?;
    write("diagram.svg", diagram_svg(&result.diagram))?;
    write("pca.svg", pca_svg(&result.projection))?;
    write_manifest(config, out, &ARTIFACTS)?;
    Ok(result)
}

/// One noise level of a sweep: the most persistent loop's death and lifetime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sigma: f64,
    pub top_death: f64,
    pub top_persistence: f64,
}

/// Rerun embedding and persistence at every `noise.sweep` level. Every
/// level reuses the run seed, so the noise patterns differ only in scale.
pub fn compute_noise_sweep(config: &RunConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    if config.noise.sweep.is_empty() {
        return Err(Error::Config("noise.sweep lists no noise levels".into()));
    }
    let clean = source_map_tagged(config)?;
    let delay = config.delay_config()?;
    let mut rows = Vec::with_capacity(config.noise.sweep.len());
    for &sigma in &config.noise.sweep {
        let map = add_awgn(&clean, sigma, config.seed).map_err(|e| e.in_stage("noise"))?;
        let cloud = delay_embed(&map, &delay).map_err(|e| e.in_stage("embed"))?;
        let diagram = persist_cloud(&config.persistence, &cloud)?;
        let (top_death, top_persistence) = match diagram.top_k_features(1, 1).first() {
            Some(f) => (f.death, diagram.lifetime(f)),
            None => (f64::NAN, 0.0),
        };
        rows.push(SweepRow {
            sigma,
            top_death,
            top_persistence,
        });
    }
    Ok(rows)
}

/// Run the sweep and write `noise_sweep.csv` plus `manifest.json`.
pub fn run_noise_sweep(config: &RunConfig) -> Result<Vec<SweepRow>> {
    let rows = compute_noise_sweep(config)?;
    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let mut text = String::from("sigma,top_death,top_persistence\n");
    for r in &rows {
        text.push_str(&format!(
            "{},{},{}\n",
            r.sigma, r.top_death, r.top_persistence
        ));
    }
    let path = out.join("noise_sweep.csv");
    fs::write(&path, text).map_err(|e| Error::io(path, e))?;
    write_manifest(config, out, &["noise_sweep.csv"])?;
    Ok(rows)
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    config_sha256: String,
    seed: u64,
    timestamp_unix: u64,
    artifacts: Vec<(&'a str, String)>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn write_manifest(config: &RunConfig, out: &Path, artifacts: &[&str]) -> Result<()> {
    let mut hashes = Vec::new();
    for &name in artifacts {
        let path = out.join(name);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        hashes.push((name, sha256_hex(&bytes)));
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        config_sha256: sha256_hex(config.to_toml_string().as_bytes()),
        seed: config.seed,
        timestamp_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
        artifacts: hashes,
    };
    let path = out.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json + "\n").map_err(|e| Error::io(path, e))
}
