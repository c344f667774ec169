//! solvflow: solve, sweep and verify the soliton and flow equations of the
//! two-parameter solvable-group metrics on R^3.
//!
//! Usage:
//!   solvflow <translator|reaper|evolve|verify> --config <path>
//!            [--lambda1 F] [--lambda2 F] [--out DIR]
//!            [--format csv,json,svg] [--seed N] [--speed F]
//!
//! Exit codes: 0 success, 1 numerical failure (reported), 2 config error.

mod commands;
mod config;
mod output;

use config::Overrides;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CliError::Numerical(msg.into())
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

const USAGE: &str = "usage: solvflow <translator|reaper|evolve|verify> --config <path> \
[--lambda1 F] [--lambda2 F] [--out DIR] [--format csv,json,svg] [--seed N] [--speed F]";

fn parse_overrides(mut args: std::env::Args) -> Result<(String, Overrides), CliError> {
    let command = args.next().ok_or_else(|| CliError::config(USAGE.to_string()))?;
    let mut over = Overrides::default();
    while let Some(flag) = args.next() {
        let mut take = |what: &str| {
            args.next()
                .ok_or_else(|| CliError::config(format!("flag {what} needs a value")))
        };
        match flag.as_str() {
            "--config" => over.config = Some(take("--config")?),
            "--out" => over.out = Some(take("--out")?),
            "--lambda1" => {
                over.lambda1 = Some(parse_f64(&take("--lambda1")?, "--lambda1")?);
            }
            "--lambda2" => {
                over.lambda2 = Some(parse_f64(&take("--lambda2")?, "--lambda2")?);
            }
            "--speed" => {
                over.speed = Some(parse_f64(&take("--speed")?, "--speed")?);
            }
            "--seed" => {
                let v = take("--seed")?;
                over.seed = Some(
                    v.parse::<u64>()
                        .map_err(|_| CliError::config(format!("--seed is not a u64: `{v}`")))?,
                );
            }
            "--format" => {
                let v = take("--format")?;
                over.formats = Some(v.split(',').map(|s| s.trim().to_string()).collect());
            }
            other => return Err(CliError::config(format!("unknown flag `{other}`\n{USAGE}"))),
        }
    }
    Ok((command, over))
}

fn parse_f64(v: &str, what: &str) -> Result<f64, CliError> {
    v.parse::<f64>()
        .map_err(|_| CliError::config(format!("{what} is not a number: `{v}`")))
}

fn run() -> Result<i32, CliError> {
    let (command, over) = parse_overrides({
        let mut a = std::env::args();
        a.next(); // program name
        a
    })?;
    match command.as_str() {
        "translator" => {
            let cfg = config::load(&over, true)?;
            commands::cmd_translator(&cfg)
        }
        "reaper" => {
            let cfg = config::load(&over, true)?;
            commands::cmd_reaper(&cfg)
        }
        "evolve" => {
            let cfg = config::load(&over, true)?;
            commands::cmd_evolve(&cfg)
        }
        "verify" => {
            let cfg = config::load(&over, false)?;
            commands::cmd_verify(&cfg)
        }
        other => Err(CliError::config(format!("unknown command `{other}`\n{USAGE}"))),
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("solvflow: {}", e.message());
            std::process::exit(e.exit_code());
        }
    }
}
