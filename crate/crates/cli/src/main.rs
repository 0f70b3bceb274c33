#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cli;
mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::cli::Cli;
use crate::commands::Failure;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const MIN_SAMPLES: usize = 1_000;
const WARN_SAMPLES: usize = 10_000;

/// Splice `--config` contents into the argument list: the command comes
/// first, then the config flags, then the explicit flags (which win).
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path: Option<PathBuf> = None;
    let mut it = args.into_iter();
    let bin = it.next().unwrap_or_else(|| "squeeze-lab".into());
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = Some(it.next().ok_or("--config needs a path")?.into());
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else {
        let mut out = vec![bin];
        out.extend(rest);
        return Ok(out);
    };
    let (command, flags) = config::to_args(&config::load(&path)?)?;
    let mut out = vec![bin];
    let flags: Vec<OsString> = flags.into_iter().map(OsString::from).collect();
    match command {
        Some(c) => {
            out.extend(c.split_whitespace().map(OsString::from));
            out.extend(flags);
            out.extend(rest);
        }
        None => {
            let split = rest.iter().position(|a| a.to_string_lossy().starts_with('-')).unwrap_or(rest.len());
            out.extend(rest[..split].iter().cloned());
            out.extend(flags);
            out.extend(rest[split..].iter().cloned());
        }
    }
    Ok(out)
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("SQUEEZE_LAB_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("SQUEEZE_LAB_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn fail(message: &str, hint: &str, code: u8) -> ExitCode {
    eprintln!("error: {message}");
    eprintln!("hint: {hint}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = match expand_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => return fail(&e, "config files are TOML (or .json) tables of flag = value", EXIT_VALIDATION),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            if code != 0 {
                eprintln!("hint: run `squeeze-lab --help` for the commands and flags");
            }
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        return fail(&e, "unset it or give a thread count such as 4", EXIT_VALIDATION);
    }
    if cli.command.uses_samples() {
        if cli.samples < MIN_SAMPLES {
            return fail(
                &format!("--samples {} is below the minimum of {MIN_SAMPLES}", cli.samples),
                "use at least 1000 interior samples",
                EXIT_VALIDATION,
            );
        }
        if cli.samples < WARN_SAMPLES {
            eprintln!("warning: {} samples may underestimate the enclosing radius; 10000 or more is advised", cli.samples);
        }
    }
    let record = match commands::run(&cli) {
        Ok(r) => r,
        Err(Failure::Validation { message, hint }) => return fail(&message, &hint, EXIT_VALIDATION),
        Err(Failure::Numerical { message, hint }) => return fail(&message, &hint, EXIT_NUMERICAL),
    };
    let text = match record.render(cli.format) {
        Ok(t) => t,
        Err(e) => return fail(&e, "report this as a bug", EXIT_NUMERICAL),
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                return fail(&format!("cannot write {}: {e}", path.display()), "check the output directory", EXIT_VALIDATION);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
