//! Result files: the long-format results CSV, a TOML metadata sidecar and
//! optional per-step JSONL traces.
//!
//! Every file is written to a temporary sibling and renamed into place, so a
//! failed write never leaves a partial file at the target path.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::experiment::{ExperimentConfig, RunTrace, StepSeries};
use crate::policy::PolicyKind;

pub const RESULTS_HEADER: [&str; 5] = [
    "policy",
    "step",
    "mean_qos_confidence",
    "mean_step_violation",
    "cum_violation_risk",
];

#[derive(Debug, thiserror::Error)]
pub enum OutputError {
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("write failed: {0}")]
    Write(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("toml error: {0}")]
    Toml(#[from] toml::ser::Error),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> OutputError + '_ {
    move |source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Results CSV rows, one per policy and step. Floats use Rust's shortest
/// round-trip formatting.
pub fn write_results_csv<W: Write>(writer: W, series: &[StepSeries]) -> Result<(), OutputError> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(RESULTS_HEADER)?;
    for s in series {
        for m in &s.steps {
            out.write_record([
                s.policy.name().to_string(),
                m.step.to_string(),
                m.mean_qos_confidence.to_string(),
                m.mean_step_violation.to_string(),
                m.cum_violation_risk.to_string(),
            ])?;
        }
    }
    out.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Serialize)]
struct TraceLine<'a> {
    run: usize,
    policy: PolicyKind,
    step: usize,
    chosen: usize,
    reward: u8,
    p_hat: &'a [f64],
    p_v: &'a [f64],
    p_u: &'a [f64],
    odds: &'a [f64],
}

/// One JSON object per step per run.
pub fn write_traces_jsonl<W: Write>(mut writer: W, traces: &[RunTrace]) -> Result<(), OutputError> {
    for trace in traces {
        for step in &trace.steps {
            let line = TraceLine {
                run: trace.run,
                policy: trace.policy,
                step: step.step,
                chosen: step.selection.chosen,
                reward: step.reward.as_u8(),
                p_hat: &step.selection.p_hat,
                p_v: &step.selection.p_v,
                p_u: &step.selection.p_u,
                odds: &step.selection.odds,
            };
            serde_json::to_writer(&mut writer, &line)?;
            writer.write_all(b"\n")?;
        }
    }
    writer.flush()?;
    Ok(())
}

/// Sidecar describing how a results file was produced.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub artifact: String,
    pub version: String,
    /// Equivalent command line; rerunning it reproduces the results file.
    pub command: String,
    pub results_file: String,
    pub results_rows: usize,
    pub traces_file: Option<String>,
    pub wall_clock_seconds: f64,
    pub config: MetadataConfig,
}

/// [`ExperimentConfig`] with the seed as a string, since TOML integers are signed.
#[derive(Debug, Clone, Serialize)]
pub struct MetadataConfig {
    pub n_arms: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub q: f64,
    pub horizon: usize,
    pub n_runs: usize,
    pub master_seed: String,
    pub policies: Vec<PolicyKind>,
    pub paired_streams: bool,
}

impl From<&ExperimentConfig> for MetadataConfig {
    fn from(c: &ExperimentConfig) -> Self {
        Self {
            n_arms: c.n_arms,
            p_min: c.p_min,
            p_max: c.p_max,
            q: c.q,
            horizon: c.horizon,
            n_runs: c.n_runs,
            master_seed: c.master_seed.to_string(),
            policies: c.policies.clone(),
            paired_streams: c.paired_streams,
        }
    }
}

/// The `run` flags equivalent to `config`.
pub fn command_line(config: &ExperimentConfig) -> String {
    let policy = match config.policies.as_slice() {
        [PolicyKind::Ts] => "ts",
        [PolicyKind::Qats] => "qats",
        _ => "both",
    };
    format!(
        "run --arms {} --p-min {} --p-max {} --q {} --horizon {} --runs {} --seed {} --policy {} --paired {}",
        config.n_arms,
        config.p_min,
        config.p_max,
        config.q,
        config.horizon,
        config.n_runs,
        config.master_seed,
        policy,
        if config.paired_streams { "on" } else { "off" },
    )
}

/// Sidecar path for a results file: `results.csv` -> `results.meta.toml`.
pub fn metadata_path(results: &Path) -> PathBuf {
    results.with_extension("meta.toml")
}

/// Write `path` via a temporary file in the same directory.
pub fn write_atomically<F>(path: &Path, fill: F) -> Result<(), OutputError>
where
    F: FnOnce(&mut BufWriter<&mut fs::File>) -> Result<(), OutputError>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(io_err(path))?;
    {
        let mut writer = BufWriter::new(tmp.as_file_mut());
        fill(&mut writer)?;
        writer.flush().map_err(io_err(path))?;
    }
    tmp.persist(path).map_err(|e| OutputError::Io {
        path: path.to_path_buf(),
        source: e.error,
    })?;
    Ok(())
}

/// Everything one `run` invocation produces.
#[derive(Debug, Clone)]
pub struct OutputBundle<'a> {
    pub config: &'a ExperimentConfig,
    pub series: &'a [StepSeries],
    pub traces: Option<&'a [RunTrace]>,
    pub wall_clock: Duration,
}

impl OutputBundle<'_> {
    pub fn results_rows(&self) -> usize {
        self.series.iter().map(|s| s.steps.len()).sum()
    }

    /// Write the results CSV to `results`, its sidecar next to it and, when
    /// both are given, traces to `traces_path`.
    pub fn write(&self, results: &Path, traces_path: Option<&Path>) -> Result<(), OutputError> {
        write_atomically(results, |w| write_results_csv(w, self.series))?;
        let traces_file = match (self.traces, traces_path) {
            (Some(traces), Some(path)) => {
                write_atomically(path, |w| write_traces_jsonl(w, traces))?;
                Some(path.display().to_string())
            }
            _ => None,
        };
        let meta = Metadata {
            artifact: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command_line(self.config),
            results_file: results.display().to_string(),
            results_rows: self.results_rows(),
            traces_file,
            wall_clock_seconds: self.wall_clock.as_secs_f64(),
            config: self.config.into(),
        };
        let text = toml::to_string(&meta)?;
        let meta_path = metadata_path(results);
        write_atomically(&meta_path, |w| {
            w.write_all(text.as_bytes()).map_err(io_err(&meta_path))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{run_experiment_with, RunOptions};

    fn tiny() -> ExperimentConfig {
        ExperimentConfig {
            horizon: 5,
            n_runs: 3,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let out = run_experiment_with(&tiny(), &RunOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &out.series).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "policy,step,mean_qos_confidence,mean_step_violation,cum_violation_risk"
        );
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 10);
        assert!(rows[0].starts_with("ts,1,"));
        assert!(rows[5].starts_with("qats,1,"));
    }

    #[test]
    fn csv_floats_round_trip() {
        let out = run_experiment_with(&tiny(), &RunOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &out.series).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let parsed: Vec<f64> = reader.records().map(|r| r.unwrap()[2].parse().unwrap()).collect();
        let original: Vec<f64> = out
            .series
            .iter()
            .flat_map(|s| s.steps.iter().map(|m| m.mean_qos_confidence))
            .collect();
        assert_eq!(parsed, original);
    }

    #[test]
    fn jsonl_has_one_line_per_step() {
        let out = run_experiment_with(
            &tiny(),
            &RunOptions {
                threads: 1,
                keep_traces: true,
            },
        )
        .unwrap();
        let mut buf = Vec::new();
        write_traces_jsonl(&mut buf, &out.traces).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2 * 3 * 5);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        for key in [
            "run", "policy", "step", "chosen", "reward", "p_hat", "p_v", "p_u", "odds",
        ] {
            assert!(first.get(key).is_some(), "missing {key}");
        }
        assert_eq!(first["policy"], "ts");
        assert_eq!(first["p_hat"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn command_line_mirrors_config() {
        let c = ExperimentConfig {
            policies: vec![PolicyKind::Qats],
            paired_streams: true,
            ..ExperimentConfig::default()
        };
        assert_eq!(
            command_line(&c),
            "run --arms 4 --p-min 0 --p-max 0.2 --q 0.1 --horizon 1000 --runs 350 --seed 42 --policy qats --paired on"
        );
    }

    #[test]
    fn bundle_writes_all_files() {
        let dir = tempfile::tempdir().unwrap();
        let config = ExperimentConfig {
            master_seed: u64::MAX,
            ..tiny()
        };
        let out = run_experiment_with(
            &config,
            &RunOptions {
                threads: 1,
                keep_traces: true,
            },
        )
        .unwrap();
        let results = dir.path().join("r.csv");
        let traces = dir.path().join("t.jsonl");
        OutputBundle {
            config: &config,
            series: &out.series,
            traces: Some(&out.traces),
            wall_clock: Duration::from_millis(12),
        }
        .write(&results, Some(&traces))
        .unwrap();
        assert!(results.exists() && traces.exists());
        let meta = fs::read_to_string(dir.path().join("r.meta.toml")).unwrap();
        let parsed: toml::Table = meta.parse().unwrap();
        assert_eq!(parsed["results_rows"].as_integer(), Some(10));
        assert_eq!(
            parsed["config"]["master_seed"].as_str(),
            Some("18446744073709551615")
        );
        assert!(parsed["command"]
            .as_str()
            .unwrap()
            .contains("--seed 18446744073709551615"));
    }

    #[test]
    fn unwritable_target_leaves_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let target = dir.path().join("missing").join("r.csv");
        let err = write_atomically(&target, |w| w.write_all(b"x").map_err(io_err(&target)));
        assert!(err.is_err());
        assert!(!target.exists());
    }
}
