//! Spectrum CSV and run-manifest writers.
//!
//! The CSV format is pinned bit-exact (`freq_hz,power_dbm` header, six
//! fractional digits, `\n` endings) because downstream checks compare files
//! byte for byte. The manifest records everything needed to reproduce a run:
//! the fully resolved configuration (as flat config text usable directly as
//! a `--config` file), the input descriptor and the output paths. The
//! pipeline is deterministic, so a rerun from a manifest yields bit-identical
//! CSV output.

use std::io::Write;
use std::path::Path;

use bitx_core::chain::TransceiverConfig;
use bitx_core::instruments::Spectrum;
use serde::Serialize;

use crate::config::serialize_config;
use crate::error::CliError;

/// Write the spectrum as CSV: header plus one `freq_hz,power_dbm` row per
/// bin, both in decimal notation with six fractional digits.
pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<(), CliError> {
    let file = std::fs::File::create(path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut w = std::io::BufWriter::new(file);
    let io_err = |e: std::io::Error| CliError::Io(format!("writing {}: {e}", path.display()));
    w.write_all(b"freq_hz,power_dbm\n").map_err(io_err)?;
    for (k, p) in spectrum.power_dbm().iter().enumerate() {
        writeln!(w, "{:.6},{:.6}", spectrum.bin_freq_hz(k), p).map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

/// What fed the run.
#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputDescriptor {
    Tone { tone_hz: f64, duration_ms: f64 },
    File { path: String, samples: usize },
    Oscillator { name: String },
}

/// Reproducibility record accompanying every output file.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub timestamp_unix_s: u64,
    /// Fully resolved configuration in the flat `key = value` format; write
    /// it to a file and pass it back via `--config` to reproduce the run.
    pub config_text: String,
    pub input: InputDescriptor,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config: &TransceiverConfig,
        input: InputDescriptor,
        outputs: Vec<String>,
    ) -> Self {
        let timestamp_unix_s = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix_s,
            config_text: serialize_config(config),
            input,
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
        std::fs::write(path, json + "\n")
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
    }
}
