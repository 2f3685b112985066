mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::config::{Cli, Mode, RunConfig};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VERIFY: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let cfg = match RunConfig::from_command(cli.command) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let result = match cfg.subcommand {
        Mode::Sequence => commands::cmd_sequence(&cfg),
        Mode::Curve => commands::cmd_curve(&cfg),
        Mode::Thresholds => commands::cmd_thresholds(&cfg),
        Mode::Compile => commands::cmd_compile(&cfg),
        Mode::Expand => commands::cmd_expand(&cfg),
    };
    let output = match result {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
    };

    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &output.body).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(output.body.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: cannot write output: {msg}");
        return ExitCode::from(EXIT_IO);
    }

    if let Some(summary) = &output.summary {
        // Keep stdout clean when it carries the data.
        if cfg.out.is_some() {
            println!("{summary}");
        } else {
            eprintln!("{summary}");
        }
    }
    if output.verification_failed {
        return ExitCode::from(EXIT_VERIFY);
    }
    ExitCode::SUCCESS
}
