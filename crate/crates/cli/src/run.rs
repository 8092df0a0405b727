//! The four commands.

use std::path::{Path, PathBuf};

use hyperwigner::dynamics::frame_normalization;
use hyperwigner::verify::{run_suite, Report, Suite};
use hyperwigner::{evaluate_field, trajectory, KernelOrder, PhaseSpaceField, QuadSpec};
use serde::Serialize;

use crate::config::{evolve_config, figure_config, grid_config, Command, Format};
use crate::output::{self, hyperwigner_version, ErrorEstimates};
use crate::{CliError, RunConfig};

/// Files written by a command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Grid(flags) => cmd_field(&grid_config(flags)?),
        Command::Figure { name, flags } => cmd_field(&figure_config(*name, flags)?),
        Command::Evolve(flags) => cmd_evolve(&evolve_config(flags)?),
        Command::Verify { suite, out, verbose } => cmd_verify(suite, out.as_deref(), *verbose),
    }
}

fn estimates(config: &RunConfig) -> ErrorEstimates {
    ErrorEstimates {
        pointwise_tol: config.tol,
        normalization: None,
        normalization_error: None,
    }
}

fn cmd_field(config: &RunConfig) -> Result<Outcome, CliError> {
    log::info!(
        "{} {} k = {} on {} points",
        config.command,
        config.state.name(),
        config.k.value(),
        config.grid.points()?.len()
    );
    let field = evaluate_field(config.k, config.s, &config.state, &config.grid, &config.quad())?;
    let meta = output::metadata(config, &field, estimates(config));
    let files = output::write_field(&config.out, config.format, config.plain, meta, &field)?;
    Ok(Outcome { files })
}

#[derive(Debug, Serialize)]
struct FrameEntry {
    index: usize,
    time: f64,
    file: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalization: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalization_error: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    drift: Option<f64>,
}

#[derive(Debug, Serialize)]
struct EvolveIndex<'a> {
    schema: &'static str,
    version: String,
    config: &'a RunConfig,
    frames: Vec<FrameEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_drift: Option<f64>,
}

fn frame_path(out: &Path, index: usize, format: Format) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "evolve".into());
    out.with_file_name(format!("{stem}_t{index:03}.{}", format.extension()))
}

fn index_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "evolve".into());
    out.with_file_name(format!("{stem}_index.json"))
}

fn cmd_evolve(config: &RunConfig) -> Result<Outcome, CliError> {
    let h = config.hamiltonian.as_ref().expect("evolve runs carry a Hamiltonian");
    let frames: Vec<PhaseSpaceField> = trajectory(
        config.k,
        config.s,
        &config.state,
        h,
        &config.times,
        &config.grid,
        &config.quad(),
    )?;
    // normalization is tracked for Wigner frames only
    let track = config.s == KernelOrder::WIGNER;
    let norm_spec = QuadSpec::disc();
    let mut files = Vec::new();
    let mut entries = Vec::new();
    let mut first = None;
    for (i, (field, &t)) in frames.iter().zip(&config.times).enumerate() {
        let norm = if track {
            Some(frame_normalization(config.k, &config.state, h, t, &norm_spec)?)
        } else {
            None
        };
        let first_norm = *first.get_or_insert(norm.map(|n| n.0));
        let drift = norm.zip(first_norm).map(|(n, n0)| (n.0 - n0).abs());
        let errors = ErrorEstimates {
            pointwise_tol: config.tol,
            normalization: norm.map(|n| n.0 - 1.0),
            normalization_error: norm.map(|n| n.1),
        };
        let path = frame_path(&config.out, i, config.format);
        let meta = output::metadata(config, field, errors);
        files.extend(output::write_field(&path, config.format, config.plain, meta, field)?);
        log::info!("frame {i} at t = {t} written to {}", path.display());
        entries.push(FrameEntry {
            index: i,
            time: t,
            file: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
            normalization: norm.map(|n| n.0),
            normalization_error: norm.map(|n| n.1),
            drift,
        });
    }
    let max_drift = entries.iter().filter_map(|e| e.drift).reduce(f64::max);
    let index = EvolveIndex {
        schema: "hyperwigner-evolve/1",
        version: hyperwigner_version(),
        config,
        frames: entries,
        max_drift,
    };
    let path = index_path(&config.out);
    output::write_json(&path, &index)?;
    files.push(path);
    Ok(Outcome { files })
}

#[derive(Debug, Serialize)]
struct VerifyReport<'a> {
    schema: &'static str,
    version: String,
    #[serde(flatten)]
    report: &'a Report,
}

fn cmd_verify(suite: &str, out: Option<&Path>, verbose: bool) -> Result<Outcome, CliError> {
    let suite: Suite = suite
        .parse()
        .map_err(|e: hyperwigner::Error| CliError::Usage(e.to_string()))?;
    let report = run_suite(suite);
    for c in &report.checks {
        if verbose || !c.pass {
            println!("criterion {:>2} {c}", c.criterion);
        }
    }
    let failed = report.failures().count();
    println!(
        "suite {}: {} of {} checks pass",
        suite.name(),
        report.checks.len() - failed,
        report.checks.len()
    );
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(format!("verify-{}.json", suite.name())));
    output::write_json(
        &path,
        &VerifyReport {
            schema: "hyperwigner-verify/1",
            version: hyperwigner_version(),
            report: &report,
        },
    )?;
    if report.pass {
        Ok(Outcome { files: vec![path] })
    } else {
        Err(CliError::Accuracy(format!(
            "{failed} check(s) failed; report written to {}",
            path.display()
        )))
    }
}
