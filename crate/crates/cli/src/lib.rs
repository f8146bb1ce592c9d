//! Experiment harness for `girthlab-core`: configuration, seeded commands,
//! atomic outputs, JSON reports and SVG plots.

pub mod cli;
pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod output;
pub mod svg;

use std::path::PathBuf;
use std::time::Instant;

use serde_json::{json, Value};

use crate::cli::{Cli, Command};
use crate::commands::Run;
use crate::config::Settings;
use crate::error::Result;
use crate::output::{provenance, Outputs};

/// Seed used when neither `--seed` nor the config supplies one.
pub const DEFAULT_SEED: u64 = 1;

/// Merges config file and flags. `out` is kept out of the settings so that
/// runs into different directories share a config hash.
pub fn settings_for(cli: &Cli) -> Result<(Settings, PathBuf)> {
    let mut s = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    cli.command.apply(&mut s);
    s.set("seed", cli.seed);
    let out = cli
        .out
        .clone()
        .or_else(|| s.raw("out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    s.remove("out");
    Ok((s, out))
}

/// Runs one command and writes `<command>.json` into the output directory.
/// Returns the full report.
pub fn execute(cli: &Cli) -> Result<Value> {
    let start = Instant::now();
    let (settings, out) = settings_for(cli)?;
    let seed = settings.or("seed", DEFAULT_SEED)?;
    let mut outputs = Outputs::new(out);
    let mut run = Run {
        settings: &settings,
        seed,
        outputs: &mut outputs,
    };
    let result = match &cli.command {
        Command::Girth(_) => commands::girth_cmd(&mut run),
        Command::Spectrum { .. } => commands::spectrum(&mut run),
        Command::ChebNorm { .. } => commands::cheb_norm(&mut run),
        Command::Localizer { .. } => commands::localizer(&mut run),
        Command::TreeSpectrum { .. } => commands::tree_spectrum(&mut run),
        Command::Construct(_) => commands::construct(&mut run),
        Command::Verify { .. } => commands::verify(&mut run),
        Command::Support { .. } => commands::support(&mut run),
        Command::Linf { .. } => commands::linf(&mut run),
        Command::Sweep { .. } => commands::sweep(&mut run),
        Command::Density { .. } => commands::density(&mut run),
        Command::Corpus { .. } => commands::corpus_cmd(&mut run),
    }?;
    let name = cli.command.name();
    let report = json!({
        "command": name,
        "result": result,
        "outputs": outputs.written(),
        "provenance": provenance(&settings, cli.command.is_randomized().then_some(seed), start.elapsed().as_secs_f64()),
    });
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    outputs.write(&format!("{name}.json"), text.as_bytes())?;
    Ok(report)
}
