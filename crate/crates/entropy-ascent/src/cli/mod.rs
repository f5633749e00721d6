//! Command-line front end: configuration ingestion, subcommand dispatch,
//! and deterministic file emission.
//!
//! Subcommands: `simulate`, `equilibrium`, `diagram`, `demon`, `criteria`,
//! `sweep`. All behavior flows from flags and config files (no environment
//! variables are read) and every emitted byte is a deterministic function
//! of `(config, seed)`.
//!
//! Exit-code contract: 0 on success, 2 on usage or configuration errors,
//! 3 on numerical aborts.

mod commands;
pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::fmt;

/// Errors surfaced to the binary, carrying the exit-code class.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config, out-of-domain inputs: exit 2.
    Usage(String),
    /// Numerical aborts (integration failure, concavity violation): exit 3.
    Numerical(String),
    /// Filesystem problems: exit 2 (a path named by the config).
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "numerical abort: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(err: crate::Error) -> Self {
        match err {
            crate::Error::IntegrationAbort { .. } => CliError::Numerical(err.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

/// Parsed `--flag value` pairs.
pub(crate) struct Flags {
    values: BTreeMap<String, String>,
}

impl Flags {
    fn parse(args: &[String], allowed: &[&str]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let name = arg
                .strip_prefix("--")
                .ok_or_else(|| CliError::Usage(format!("unexpected argument '{arg}'")))?;
            if !allowed.contains(&name) {
                return Err(CliError::Usage(format!(
                    "unknown flag --{name} (expected one of: {})",
                    allowed.iter().map(|a| format!("--{a}")).collect::<Vec<_>>().join(", ")
                )));
            }
            let value = it
                .next()
                .ok_or_else(|| CliError::Usage(format!("flag --{name} needs a value")))?;
            if values.insert(name.to_string(), value.clone()).is_some() {
                return Err(CliError::Usage(format!("flag --{name} given twice")));
            }
        }
        Ok(Self { values })
    }

    pub(crate) fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    pub(crate) fn require(&self, name: &str) -> Result<&str, CliError> {
        self.get(name).ok_or_else(|| CliError::Usage(format!("missing required flag --{name}")))
    }

    pub(crate) fn f64_opt(&self, name: &str) -> Result<Option<f64>, CliError> {
        self.get(name)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("--{name} expects a number, got '{v}'")))
            })
            .transpose()
    }

    pub(crate) fn usize_opt(&self, name: &str) -> Result<Option<usize>, CliError> {
        self.get(name)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("--{name} expects an integer, got '{v}'")))
            })
            .transpose()
    }

    pub(crate) fn u64_opt(&self, name: &str) -> Result<Option<u64>, CliError> {
        self.get(name)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| CliError::Usage(format!("--{name} expects an integer, got '{v}'")))
            })
            .transpose()
    }

    pub(crate) fn f64_list(&self, name: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(name)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim().parse::<f64>().map_err(|_| {
                            CliError::Usage(format!("--{name}: '{x}' is not a number"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub(crate) fn usize_list(&self, name: &str) -> Result<Option<Vec<usize>>, CliError> {
        self.get(name)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim().parse::<usize>().map_err(|_| {
                            CliError::Usage(format!("--{name}: '{x}' is not an index"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

const USAGE: &str = "usage: entropy-ascent <subcommand> [flags]

subcommands:
  simulate     --config PATH [--out BASE] [--t-end X] [--seed N]
  equilibrium  --levels E1,E2,... --energy E [--support I,J,...] [--out PATH]
  diagram      --levels E1,E2,... [--samples N] [--out PATH] [--svg PATH]
  demon        --levels E1,E2,... (--state P1,P2,... | --energy E --entropy S)
               [--samples N] [--out PATH]
  criteria     --candidate NAME [--q X] [--alpha X] [--levels ...]
               [--trials N] [--seed N] [--out PATH]
  sweep        --config PATH";

/// Dispatch a full argument vector (without the program name).
pub fn run(args: &[String]) -> Result<(), CliError> {
    let (command, rest) =
        args.split_first().ok_or_else(|| CliError::Usage(USAGE.to_string()))?;
    match command.as_str() {
        "simulate" => {
            let flags = Flags::parse(rest, &["config", "out", "t-end", "seed"])?;
            commands::simulate(&flags)
        }
        "equilibrium" => {
            let flags = Flags::parse(rest, &["levels", "energy", "support", "out", "seed"])?;
            commands::equilibrium(&flags)
        }
        "diagram" => {
            let flags = Flags::parse(rest, &["levels", "samples", "out", "svg", "seed"])?;
            commands::diagram(&flags)
        }
        "demon" => {
            let flags = Flags::parse(
                rest,
                &["levels", "state", "energy", "entropy", "samples", "out", "seed"],
            )?;
            commands::demon(&flags)
        }
        "criteria" => {
            let flags = Flags::parse(
                rest,
                &["candidate", "q", "alpha", "levels", "trials", "seed", "out"],
            )?;
            commands::criteria(&flags)
        }
        "sweep" => {
            let flags = Flags::parse(rest, &["config", "seed"])?;
            commands::sweep(&flags)
        }
        "--help" | "help" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(CliError::Usage(format!("unknown subcommand '{other}'\n\n{USAGE}"))),
    }
}
