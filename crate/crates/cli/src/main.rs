//! `qfluct`: scenario runner for the qfluct numerics library.
//!
//! Exit status:
//!
//! * 0: success.
//! * 1: a tolerance check failed (crosscheck, determinant sign, sweep case,
//!   `--expect` mismatch, spin residual).
//! * 2: the input could not be parsed or is out of range.
//! * 3: a physical validity constraint is violated (channel too sharp for
//!   the state, kernel wider than the grid allows, current without density).
//! * 4: reading the config or writing the report failed.

mod args;
mod commands;
mod config;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;

use args::{Cli, Command, RunSettings};
use output::{write_report, Report};

const EXIT_TOLERANCE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VALIDITY: u8 = 3;
const EXIT_IO: u8 = 4;

fn run_command(cli: &Cli) -> Result<Report> {
    let s = RunSettings::from_global(&cli.global);
    match &cli.command {
        Command::Catalog(a) => commands::catalog(a, &s),
        Command::Audit(a) => commands::audit(a, &s),
        Command::Detcheck(a) => commands::detcheck(a, &s),
        Command::Channel(a) => commands::channel(a, &s),
        Command::Classical(a) => commands::classical(a, &s),
        Command::Annex(a) => commands::annex(a, &s),
        Command::Spins(a) => commands::spins(a, &s),
        Command::Sweep(a) => commands::sweep(a, &s),
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    match &cli.global.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_report(report, cli.global.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_report(report, cli.global.format, &mut lock)?;
        }
    }
    Ok(())
}

fn exit_status(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<qfluct_core::Error>() {
        return if e.is_validity_violation() { EXIT_VALIDITY } else { EXIT_INPUT };
    }
    if err.downcast_ref::<io::Error>().is_some() || err.downcast_ref::<csv::Error>().is_some() {
        return EXIT_IO;
    }
    EXIT_INPUT
}

fn main() -> ExitCode {
    let raw = match config::expand(std::env::args_os().collect()) {
        Ok(raw) => raw,
        Err(e) => {
            eprintln!("qfluct: {e:#}");
            let code = if e.downcast_ref::<io::Error>().is_some() { EXIT_IO } else { EXIT_INPUT };
            return ExitCode::from(code);
        }
    };
    let cli = match Cli::try_parse_from(raw) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match run_command(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("qfluct: {e:#}");
            return ExitCode::from(exit_status(&e));
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("qfluct: {e:#}");
        return ExitCode::from(EXIT_IO);
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_TOLERANCE)
    }
}
