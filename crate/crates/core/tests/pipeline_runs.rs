mod common;

use std::fs;
use std::path::Path;

use echotopo::domain::{DomainDescriptor, SignalMap};
use echotopo::embedding::ChannelReducer;
use echotopo::io::{ingest_array, write_array};
use echotopo::pipeline::{
    compute_noise_sweep, run_noise_sweep, run_pipeline, RunConfig, Source, ARTIFACTS,
};
use echotopo::Error;
use num_complex::Complex64;

use common::{wedge_of_loops, Uniform};

fn input_config(input: &Path, out: &Path) -> RunConfig {
    let mut config = RunConfig::pipe_preset(out);
    config.source = Source::Input {
        path: input.to_path_buf(),
    };
    config.embedding.offsets_deg = vec![0.0];
    config.embedding.reducer = ChannelReducer::Identity;
    config.persistence.max_eps = Some(0.5);
    config.noise.sweep = vec![0.0, 0.01, 0.02];
    config
}

/// Two echo loops in R^4 written as a CSV array.
fn write_two_loops(dir: &Path) -> std::path::PathBuf {
    let (map, _) = wedge_of_loops(2, 360, 4, 11);
    let path = dir.join("loops.csv");
    write_array(&map, &path, None).unwrap();
    path
}

#[test]
fn reruns_write_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_two_loops(dir.path());
    let a = input_config(&input, &dir.path().join("a"));
    let b = input_config(&input, &dir.path().join("b"));
    let result = run_pipeline(&a).unwrap();
    run_pipeline(&b).unwrap();
    for name in ARTIFACTS {
        let x = fs::read(dir.path().join("a").join(name)).unwrap();
        let y = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(x, y, "{name} differs between runs");
    }
    assert!(dir.path().join("a/manifest.json").exists());
    assert_eq!(result.echos.len(), 2);
    assert_eq!(result.report.expected_betti, [1, 2, 0]);
    assert_eq!(result.diagram.betti_at(0.2), [1, 2, 0]);
}

#[test]
fn manifest_lists_artifact_hashes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_two_loops(dir.path());
    let config = input_config(&input, &dir.path().join("out"));
    run_pipeline(&config).unwrap();
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["seed"], 7);
    let artifacts = manifest["artifacts"].as_array().unwrap();
    assert_eq!(artifacts.len(), ARTIFACTS.len());
    for entry in artifacts {
        assert_eq!(entry[1].as_str().unwrap().len(), 64);
    }
}

#[test]
fn missing_input_fails_validation_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let config = input_config(&dir.path().join("absent.bin"), &out);
    let err = run_pipeline(&config).unwrap_err();
    assert!(matches!(err, Error::Config(_)), "{err}");
    assert_eq!(err.exit_code(), 2);
    assert!(!out.exists());
}

#[test]
fn input_grid_mismatch_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_two_loops(dir.path());
    let mut config = input_config(&input, &dir.path().join("out"));
    // 360 samples cannot represent a 0.5 degree lag
    config.embedding.offsets_deg = vec![0.0, 0.5];
    let err = run_pipeline(&config).unwrap_err();
    assert_eq!(err.exit_code(), 2, "{err}");
    assert!(err.to_string().starts_with("source:"), "{err}");
}

#[test]
fn sweep_writes_one_row_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_two_loops(dir.path());
    let config = input_config(&input, &dir.path().join("sweep"));
    let rows = run_noise_sweep(&config).unwrap();
    assert_eq!(rows.len(), 3);
    let text = fs::read_to_string(dir.path().join("sweep/noise_sweep.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sigma,top_death,top_persistence");
    assert_eq!(lines.len(), 4);
    assert!(rows.iter().all(|r| r.top_persistence > 0.0), "{rows:?}");
    assert_eq!(rows, compute_noise_sweep(&config).unwrap());
}

#[test]
fn empty_sweep_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_two_loops(dir.path());
    let mut config = input_config(&input, &dir.path().join("sweep"));
    config.noise.sweep.clear();
    assert_eq!(compute_noise_sweep(&config).unwrap_err().exit_code(), 2);
}

#[test]
fn config_file_resolves_relative_input() {
    let dir = tempfile::tempdir().unwrap();
    write_two_loops(dir.path());
    let path = dir.path().join("run.toml");
    fs::write(
        &path,
        "output_dir = \"out\"\n[source]\nkind = \"input\"\npath = \"loops.csv\"\n[embedding]\noffsets_deg = [0]\n",
    )
    .unwrap();
    let config = RunConfig::from_file(&path).unwrap();
    assert_eq!(
        config.source,
        Source::Input {
            path: dir.path().join("loops.csv")
        }
    );
    config.validate().unwrap();
}

#[test]
fn unknown_config_keys_are_rejected() {
    let text = "[source]\nkind = \"pipe\"\n[persistence]\nmax_epsilon = 0.3\n";
    assert!(matches!(
        RunConfig::from_toml_str(text),
        Err(Error::Config(_))
    ));
}

#[test]
fn complex_binary_and_csv_round_trip_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = Uniform::new(5);
    // values drawn as f32 so the binary payload represents them exactly
    let samples: Vec<Complex64> = (0..36 * 3)
        .map(|_| {
            Complex64::new(
                rng.next(-1.0, 1.0) as f32 as f64,
                rng.next(-1.0, 1.0) as f32 as f64,
            )
        })
        .collect();
    let map = SignalMap::new(DomainDescriptor::circle(36).unwrap(), 3, samples).unwrap();
    for name in ["m.bin", "m.csv"] {
        let path = dir.path().join(name);
        write_array(&map, &path, Some(0.01)).unwrap();
        let back = ingest_array(&path).unwrap();
        assert_eq!(back.channels(), 3);
        let same = back
            .samples()
            .iter()
            .zip(map.samples())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        assert!(same, "{name}");
    }
}

#[test]
fn shipped_pipe_config_matches_the_preset() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/pipe.toml");
    let config = RunConfig::from_file(&path).unwrap();
    assert_eq!(config, RunConfig::pipe_preset("out/pipe"));
}
