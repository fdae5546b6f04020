//! CLI error classes and their exit codes.
//!
//! Every failure path prints a single machine-parsable line to stderr with a
//! stable `error: <class>:` prefix and exits nonzero:
//!
//! - `config` / `usage` / `io` -> exit 2 (bad invocation or unreadable input)
//! - `invariant` -> exit 3 (configuration or input violates a named chain
//!   invariant)
//! - `check` -> exit 1 (the measurement ran but failed its threshold)

use std::fmt;

use bitx_core::error::Error as CoreError;

#[derive(Debug)]
pub enum CliError {
    /// Configuration file problems, with a line number when one applies.
    Config {
        path: String,
        line: Option<usize>,
        msg: String,
    },
    /// Bad command-line arguments (unknown target, conflicting inputs...).
    Usage(String),
    /// A named chain invariant was violated.
    Invariant { name: String, msg: String },
    /// A measurement ran and failed its threshold.
    Check(String),
    /// Filesystem trouble reading inputs or writing outputs.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config { .. } | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Invariant { .. } => 3,
        }
    }

    /// Wrap a core error, promoting named invariants to the invariant class.
    pub fn from_core(err: CoreError) -> Self {
        match err {
            CoreError::Invariant { name, detail } => CliError::Invariant {
                name: name.to_string(),
                msg: detail,
            },
            other => CliError::Check(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config { path, line, msg } => match line {
                Some(n) => write!(f, "error: config: {path}:{n}: {msg}"),
                None => write!(f, "error: config: {path}: {msg}"),
            },
            CliError::Usage(msg) => write!(f, "error: usage: {msg}"),
            CliError::Invariant { name, msg } => write!(f, "error: invariant: {name}: {msg}"),
            CliError::Check(msg) => write!(f, "error: check: {msg}"),
            CliError::Io(msg) => write!(f, "error: io: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
