mod config;
mod output;
mod run;
#[cfg(test)]
mod schema;
mod verify;

use std::path::Path;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Caps, Cli, Experiment};
use output::{append_record, round_floats, write_json, write_metrics, write_rows, ResultRecord};
use run::{run, RunError};

const EXIT_OK: u8 = 0;
const EXIT_IO: u8 = 1;
const EXIT_VIOLATION: u8 = 2;
const EXIT_INVALID: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::from(EXIT_OK),
                _ => ExitCode::from(EXIT_INVALID),
            };
        }
    };
    ExitCode::from(execute(cli))
}

fn load_experiment(cli: &Cli) -> Result<Experiment, (u8, String)> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => Err((EXIT_INVALID, "give either --config or a subcommand, not both".into())),
        (None, None) => Err((EXIT_INVALID, "no experiment given; see --help".into())),
        (None, Some(e)) => Ok(e.clone()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| (EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| (EXIT_INVALID, format!("invalid config {}: {e}", path.display())))
        }
    }
}

fn execute(cli: Cli) -> u8 {
    let exp = match load_experiment(&cli) {
        Ok(e) => e,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return code;
        }
    };
    let caps = match Caps::from_env() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    if let Some(t) = cli.output.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return EXIT_INVALID;
        }
    }
    let mut outcome = match run(&exp, &caps) {
        Ok(o) => o,
        Err(RunError::Core(e)) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
        Err(RunError::Io(e)) => {
            eprintln!("error: {e}");
            return EXIT_IO;
        }
    };
    round_floats(&mut outcome.payload);
    if let Err(e) = write_outputs(&cli, &exp, &outcome) {
        eprintln!("error: {e}");
        return EXIT_IO;
    }
    for v in &outcome.violations {
        eprintln!("violation: {v}");
    }
    if !outcome.violations.is_empty() {
        EXIT_VIOLATION
    } else if outcome.all_failed {
        eprintln!("error: every requested field failed");
        EXIT_INVALID
    } else {
        EXIT_OK
    }
}

fn write_outputs(cli: &Cli, exp: &Experiment, outcome: &run::Outcome) -> std::io::Result<()> {
    let o = &cli.output;
    let config = serde_json::to_value(exp).map_err(std::io::Error::other)?;
    if let Some(path) = &o.save_config {
        write_json(path, &config)?;
    }
    match &o.out {
        Some(path) if is_csv(path) => match &outcome.rows {
            Some(rows) => write_rows(path, rows)?,
            None => write_rows(path, std::slice::from_ref(&outcome.payload))?,
        },
        Some(path) => write_json(path, &outcome.payload)?,
        None => println!("{}", serde_json::to_string_pretty(&outcome.payload).map_err(std::io::Error::other)?),
    }
    if let Some(path) = &o.csv {
        write_metrics(path, &outcome.metrics)?;
    }
    if !o.no_store {
        let record = ResultRecord::new(exp.hash(), exp.name(), config, outcome.payload.clone());
        append_record(&o.store, &record)?;
    }
    Ok(())
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}
