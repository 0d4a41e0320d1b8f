use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use hardy_core::symbols::{sample_symbol, SamplingConfig, Symbol, SymbolSpec};
use hardy_lab::{defaults, output, registry, LabError};

#[derive(Parser)]
#[command(name = "hardy-lab", version, about = "Composition-operator experiments on H^2")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one experiment from a JSON or TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// List the registered experiments.
    List {
        #[arg(long)]
        json: bool,
    },
    /// Sample a boundary trace and write it as CSV (t, re, im, weight).
    Trace {
        /// Symbol spec as JSON, or a path to a JSON file.
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = defaults::TRACE_BASE_COUNT)]
        base_count: usize,
        #[arg(long, default_value_t = defaults::TRACE_REFINEMENT_DEPTH)]
        refinement_depth: u32,
        #[arg(long, default_value_t = defaults::TRACE_PER_OCTAVE)]
        per_octave: u32,
    },
}

fn list(json: bool) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(registry::REGISTRY)?);
        return Ok(());
    }
    let w = registry::REGISTRY.iter().map(|e| e.id.len() + e.params.len() + 2).max().unwrap_or(0);
    for e in registry::REGISTRY {
        let head = if e.params.is_empty() { e.id.to_string() } else { format!("{}({})", e.id, e.params) };
        println!("{head:<w$}  {}  [\"{}\"]", e.description, e.anchor);
    }
    Ok(())
}

fn trace(symbol: &str, out: &Path, cfg: SamplingConfig) -> anyhow::Result<()> {
    let text = if symbol.trim_start().starts_with('{') {
        symbol.to_string()
    } else {
        std::fs::read_to_string(symbol).with_context(|| format!("reading symbol spec {symbol}"))?
    };
    let spec: SymbolSpec = serde_json::from_str(&text).map_err(|e| LabError::Validation(format!("bad symbol spec: {e}")))?;
    let sym = Symbol::from_spec(&spec).map_err(LabError::from)?;
    let tr = sample_symbol(&sym, &cfg).map_err(LabError::from)?;
    output::write_trace(out, &tr)?;
    eprintln!("{}: {} nodes of {}", out.display(), tr.len(), spec.label());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = match hardy_lab::thread_cap() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("hardy-lab: {e}");
            return ExitCode::from(1);
        }
    };
    let result = hardy_lab::with_threads(threads, || -> anyhow::Result<u8> {
        match cli.cmd {
            Cmd::List { json } => list(json).map(|_| 0),
            Cmd::Trace { symbol, out, base_count, refinement_depth, per_octave } => {
                trace(&symbol, &out, SamplingConfig { base_count, refinement_depth, per_octave }).map(|_| 0)
            }
            Cmd::Run { config } => {
                let report = hardy_lab::run_config_file(&config)?;
                print!("{}", report.table());
                Ok(report.exit_code() as u8)
            }
        }
    });
    match result {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(e)) => {
            eprintln!("hardy-lab: {e:#}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("hardy-lab: {e}");
            ExitCode::from(1)
        }
    }
}
