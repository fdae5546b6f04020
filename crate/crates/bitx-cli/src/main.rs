//! `bitx-sim`: command-line bench for the transceiver simulation.
//!
//! Subcommands mirror the bench workflow: `tx` transmits a test tone and
//! writes the RF spectrum, `rx` demodulates an RF input, `roundtrip` chains
//! both and checks the recovered audio, `measure` taps any block output or
//! oscillator, and `bands` looks up the ITU allocation of a frequency.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::CommonArgs;

#[derive(Parser)]
#[command(
    name = "bitx-sim",
    version,
    about = "Bidirectional SSB transceiver chain simulator with virtual instruments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transmit a test tone (or audio file) and write the RF spectrum
    Tx {
        #[command(flatten)]
        common: CommonArgs,
        /// Audio test-tone frequency in Hz
        #[arg(long, value_name = "HZ", default_value_t = 1000.0)]
        tone: f64,
        /// Audio samples file (one value per line, volts, at the configured rate)
        #[arg(long = "in", value_name = "PATH", conflicts_with = "tone")]
        input: Option<PathBuf>,
        /// Write the output spectrum CSV here
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Manifest path (default: <out>.manifest.json)
        #[arg(long, value_name = "PATH")]
        manifest: Option<PathBuf>,
    },
    /// Receive an RF tone (or samples file) and write the recovered audio spectrum
    Rx {
        #[command(flatten)]
        common: CommonArgs,
        /// RF test-tone frequency in Hz
        #[arg(long, value_name = "HZ")]
        tone: Option<f64>,
        /// RF samples file (one value per line, volts, at the configured rate)
        #[arg(long = "in", value_name = "PATH", conflicts_with = "tone")]
        input: Option<PathBuf>,
        /// Write the recovered audio spectrum CSV here
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Manifest path (default: <out>.manifest.json)
        #[arg(long, value_name = "PATH")]
        manifest: Option<PathBuf>,
    },
    /// Transmit then receive, checking recovered frequency and audio SNR
    Roundtrip {
        #[command(flatten)]
        common: CommonArgs,
        /// Audio test-tone frequency in Hz
        #[arg(long, value_name = "HZ", default_value_t = 1000.0)]
        tone: f64,
    },
    /// Write the spectrum observed at a chain tap point or oscillator
    Measure {
        #[command(flatten)]
        common: CommonArgs,
        /// Tap point: bfo, vfo, or a transmit stage name (e.g. ssb_filter)
        #[arg(long, value_name = "NAME")]
        target: String,
        /// Audio test tone driving the chain for stage taps, in Hz
        #[arg(long, value_name = "HZ", default_value_t = 1000.0)]
        tone: f64,
        /// Write the tap spectrum CSV here
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Manifest path (default: <out>.manifest.json)
        #[arg(long, value_name = "PATH")]
        manifest: Option<PathBuf>,
    },
    /// Look up the ITU band allocation of a frequency
    Bands {
        /// Frequency in Hz
        #[arg(value_name = "FREQ_HZ")]
        freq_hz: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Tx {
            common,
            tone,
            input,
            out,
            manifest,
        } => commands::cmd_tx(common, *tone, input, out, manifest),
        Command::Rx {
            common,
            tone,
            input,
            out,
            manifest,
        } => commands::cmd_rx(common, *tone, input, out, manifest),
        Command::Roundtrip { common, tone } => commands::cmd_roundtrip(common, *tone),
        Command::Measure {
            common,
            target,
            tone,
            out,
            manifest,
        } => commands::cmd_measure(common, target, *tone, out, manifest),
        Command::Bands { freq_hz } => commands::cmd_bands(*freq_hz),
    };
    if let Err(err) = result {
        eprintln!("{err}");
        std::process::exit(err.exit_code());
    }
}
