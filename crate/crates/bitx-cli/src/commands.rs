//! Command implementations: resolve the configuration, run the chain, write
//! plot-ready CSV plus a reproducibility manifest, and print a one-line
//! `key=value` summary for scripting.

use std::path::{Path, PathBuf};

use bitx_core::bands::classify_band;
use bitx_core::chain::{receive, transmit_taps, StageTaps, TransceiverConfig, TX_ORDER};
use bitx_core::instruments::{
    audio_snr_db, count_frequency, measure_spectrum, peak_power_dbm, suppression_db,
    transform_len_for, vpp, Spectrum,
};
use bitx_core::osc::{generate, OscillatorSpec};
use bitx_core::signal::{make_tone, Signal};
use bitx_core::stages::StageKind;

use crate::config::load_config;
use crate::error::CliError;
use crate::output::{write_spectrum_csv, InputDescriptor, RunManifest};

/// Environment variable naming the directory holding `default.cfg`.
pub const CONFIG_DIR_ENV: &str = "BITX_SIM_CONFIG_DIR";

/// Flags shared by every chain-running subcommand.
#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    /// Configuration file (default: $BITX_SIM_CONFIG_DIR/default.cfg,
    /// then ./default.cfg)
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Override the configured duration, in milliseconds
    #[arg(long, value_name = "N")]
    pub duration_ms: Option<f64>,

    /// Bypass the output band-pass filter
    #[arg(long)]
    pub no_bpf: bool,
}

impl CommonArgs {
    fn resolve(&self) -> Result<TransceiverConfig, CliError> {
        let path = match &self.config {
            Some(p) => p.clone(),
            None => match std::env::var_os(CONFIG_DIR_ENV) {
                Some(dir) => Path::new(&dir).join("default.cfg"),
                None => PathBuf::from("default.cfg"),
            },
        };
        let mut config = load_config(&path)?;
        if let Some(ms) = self.duration_ms {
            if !(ms.is_finite() && ms > 0.0) {
                return Err(CliError::Usage(format!(
                    "--duration-ms must be positive, got {ms}"
                )));
            }
            config.duration_s = ms / 1e3;
        }
        if self.no_bpf {
            config.bpf_enabled = false;
        }
        Ok(config)
    }
}

fn read_samples_file(path: &Path, sample_rate_hz: f64) -> Result<Signal, CliError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {label}: {e}")))?;
    let mut samples = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| CliError::Config {
            path: label.clone(),
            line: Some(idx + 1),
            msg: format!("not a sample value: `{line}`"),
        })?;
        samples.push(value);
    }
    Signal::new(samples, sample_rate_hz).map_err(CliError::from_core)
}

/// Audio source for tx/roundtrip: a synthesized tone or an imported file.
fn resolve_audio(
    config: &TransceiverConfig,
    tone_hz: f64,
    input: &Option<PathBuf>,
) -> Result<(Signal, InputDescriptor), CliError> {
    if let Some(path) = input {
        let signal = read_samples_file(path, config.sample_rate_hz)?;
        let descriptor = InputDescriptor::File {
            path: path.display().to_string(),
            samples: signal.len(),
        };
        return Ok((signal, descriptor));
    }
    if !(tone_hz.is_finite() && tone_hz > 0.0 && tone_hz < config.sample_rate_hz / 2.0) {
        return Err(CliError::Invariant {
            name: "audio_tone_in_band".to_string(),
            msg: format!(
                "tone {tone_hz} Hz cannot drive the chain (audio passband {:?} Hz)",
                config.audio_passband_hz()
            ),
        });
    }
    let signal = make_tone(
        tone_hz,
        1.0,
        config.duration_s,
        config.sample_rate_hz,
        0.0,
    )
    .map_err(CliError::from_core)?;
    let descriptor = InputDescriptor::Tone {
        tone_hz,
        duration_ms: config.duration_s * 1e3,
    };
    Ok((signal, descriptor))
}

fn analyze(signal: &Signal) -> Result<Spectrum, CliError> {
    measure_spectrum(signal, transform_len_for(signal.len())).map_err(CliError::from_core)
}

/// Write CSV plus manifest when an output path was requested. Every output
/// file gets a manifest; the default manifest path derives from the CSV
/// path.
fn write_outputs(
    command: &str,
    config: &TransceiverConfig,
    spectrum: &Spectrum,
    input: InputDescriptor,
    out: &Option<PathBuf>,
    manifest: &Option<PathBuf>,
) -> Result<(), CliError> {
    let Some(out_path) = out else {
        return Ok(());
    };
    write_spectrum_csv(out_path, spectrum)?;
    let manifest_path = manifest
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.manifest.json", out_path.display())));
    RunManifest::new(
        command,
        config,
        input,
        vec![out_path.display().to_string()],
    )
    .write(&manifest_path)
}

pub fn cmd_tx(
    common: &CommonArgs,
    tone_hz: f64,
    input: &Option<PathBuf>,
    out: &Option<PathBuf>,
    manifest: &Option<PathBuf>,
) -> Result<(), CliError> {
    let config = common.resolve()?;
    let (audio, descriptor) = resolve_audio(&config, tone_hz, input)?;
    let taps = transmit_taps(&config, &audio).map_err(CliError::from_core)?;
    let spectrum = analyze(taps.output())?;

    let working = config.working_frequency_hz().map_err(CliError::from_core)?;
    let (peak_hz, peak_dbm) = peak_power_dbm(&spectrum);
    let carrier_supp = suppression_db(&spectrum, peak_hz, working).unwrap_or(f64::NAN);
    let mirror = 2.0 * working - peak_hz;
    let mirror_supp = suppression_db(&spectrum, peak_hz, mirror).unwrap_or(f64::NAN);
    let (lo, hi) = config.audio_passband_hz();
    let in_band = if input.is_some() {
        // imported audio: judge by where the emission landed
        (peak_hz - working).abs() <= 3.4e3 + 2.0 * spectrum.resolution_hz()
    } else {
        tone_hz >= lo && tone_hz <= hi
    };

    write_outputs("tx", &config, &spectrum, descriptor, out, manifest)?;
    println!(
        "peak_hz={peak_hz:.6} peak_dbm={peak_dbm:.6} working_hz={working:.6} \
         carrier_suppression_db={carrier_supp:.6} \
         opposite_sideband_suppression_db={mirror_supp:.6} in_band={in_band}"
    );
    Ok(())
}

pub fn cmd_rx(
    common: &CommonArgs,
    tone_hz: Option<f64>,
    input: &Option<PathBuf>,
    out: &Option<PathBuf>,
    manifest: &Option<PathBuf>,
) -> Result<(), CliError> {
    let config = common.resolve()?;
    let (rf, descriptor) = match (input, tone_hz) {
        (Some(path), _) => {
            let signal = read_samples_file(path, config.sample_rate_hz)?;
            let descriptor = InputDescriptor::File {
                path: path.display().to_string(),
                samples: signal.len(),
            };
            (signal, descriptor)
        }
        (None, Some(freq)) => {
            let signal = make_tone(
                freq,
                0.01,
                config.duration_s,
                config.sample_rate_hz,
                0.0,
            )
            .map_err(CliError::from_core)?;
            let descriptor = InputDescriptor::Tone {
                tone_hz: freq,
                duration_ms: config.duration_s * 1e3,
            };
            (signal, descriptor)
        }
        (None, None) => {
            return Err(CliError::Usage(
                "rx needs an RF input: --tone HZ or --in PATH".to_string(),
            ))
        }
    };

    let audio = receive(&config, &rf).map_err(CliError::from_core)?;
    let spectrum = analyze(&audio)?;
    let (peak_hz, peak_dbm) = peak_power_dbm(&spectrum);

    let trim = audio.len() / 5;
    let interior = audio
        .segment(trim, audio.len() - 2 * trim)
        .unwrap_or_else(|_| audio.clone());
    let audio_freq = count_frequency(&interior).unwrap_or(f64::NAN);
    let (snr_db, _) = audio_snr_db(&interior, (100.0, 5e3)).map_err(CliError::from_core)?;
    let rms = audio.mean_square().sqrt();
    let rms_dbv = 20.0 * rms.max(1e-15).log10();

    write_outputs("rx", &config, &spectrum, descriptor, out, manifest)?;
    println!(
        "audio_peak_hz={peak_hz:.6} audio_peak_dbm={peak_dbm:.6} \
         audio_freq_hz={audio_freq:.6} snr_db={snr_db:.6} audio_rms_dbv={rms_dbv:.6}"
    );
    Ok(())
}

pub fn cmd_roundtrip(common: &CommonArgs, tone_hz: f64) -> Result<(), CliError> {
    let config = common.resolve()?;
    let (audio, _) = resolve_audio(&config, tone_hz, &None)?;
    let taps = transmit_taps(&config, &audio).map_err(CliError::from_core)?;
    let recovered = receive(&config, taps.output()).map_err(CliError::from_core)?;

    let trim = recovered.len() / 5;
    let interior = recovered
        .segment(trim, recovered.len() - 2 * trim)
        .map_err(CliError::from_core)?;
    let recovered_hz = count_frequency(&interior).unwrap_or(f64::NAN);
    let (snr_db, _) = audio_snr_db(&interior, (100.0, 5e3)).map_err(CliError::from_core)?;
    let delta_hz = recovered_hz - tone_hz;
    let tolerance_hz = 2.0 / config.duration_s;

    println!(
        "recovered_hz={recovered_hz:.6} delta_hz={delta_hz:.6} \
         tolerance_hz={tolerance_hz:.6} snr_db={snr_db:.6}"
    );
    if !(delta_hz.abs() <= tolerance_hz && snr_db >= 30.0) {
        return Err(CliError::Check(format!(
            "roundtrip failed: recovered_hz={recovered_hz:.3} delta_hz={delta_hz:.3} \
             (tolerance {tolerance_hz:.1} Hz), snr_db={snr_db:.1} (need >= 30)"
        )));
    }
    Ok(())
}

fn stage_by_label(label: &str) -> Option<StageKind> {
    TX_ORDER.iter().copied().find(|k| k.label() == label)
}

fn valid_measure_targets() -> String {
    let stages: Vec<&str> = TX_ORDER.iter().map(|k| k.label()).collect();
    format!("bfo, vfo, {}", stages.join(", "))
}

fn measure_oscillator(
    config: &TransceiverConfig,
    name: &str,
    spec: &OscillatorSpec,
    out: &Option<PathBuf>,
    manifest: &Option<PathBuf>,
) -> Result<(), CliError> {
    let signal = generate(spec, config.duration_s, config.sample_rate_hz)
        .map_err(CliError::from_core)?;
    let spectrum = analyze(&signal)?;
    let counter_hz = count_frequency(&signal).unwrap_or(f64::NAN);
    let vpp_v = vpp(&signal);
    let (peak_hz, peak_dbm) = peak_power_dbm(&spectrum);
    write_outputs(
        "measure",
        config,
        &spectrum,
        InputDescriptor::Oscillator {
            name: name.to_string(),
        },
        out,
        manifest,
    )?;
    println!(
        "target={name} counter_hz={counter_hz:.6} vpp_v={vpp_v:.6} \
         peak_hz={peak_hz:.6} peak_dbm={peak_dbm:.6}"
    );
    Ok(())
}

pub fn cmd_measure(
    common: &CommonArgs,
    target: &str,
    tone_hz: f64,
    out: &Option<PathBuf>,
    manifest: &Option<PathBuf>,
) -> Result<(), CliError> {
    let config = common.resolve()?;
    match target {
        "bfo" => measure_oscillator(&config, "bfo", &config.bfo, out, manifest),
        "vfo" => measure_oscillator(&config, "vfo", &config.vfo, out, manifest),
        label => {
            let Some(kind) = stage_by_label(label) else {
                return Err(CliError::Usage(format!(
                    "unknown target `{label}` (valid: {})",
                    valid_measure_targets()
                )));
            };
            let (audio, descriptor) = resolve_audio(&config, tone_hz, &None)?;
            let taps: StageTaps = transmit_taps(&config, &audio).map_err(CliError::from_core)?;
            let tap = taps
                .get(kind)
                .expect("every TX_ORDER kind has a tap");
            let spectrum = analyze(tap)?;
            let (peak_hz, peak_dbm) = peak_power_dbm(&spectrum);
            write_outputs("measure", &config, &spectrum, descriptor, out, manifest)?;
            println!(
                "target={label} peak_hz={peak_hz:.6} peak_dbm={peak_dbm:.6}"
            );
            Ok(())
        }
    }
}

pub fn cmd_bands(freq_hz: f64) -> Result<(), CliError> {
    let band = classify_band(freq_hz)
        .map_err(|e| CliError::Check(e.to_string()))?;
    println!(
        "freq_hz={freq_hz:.6} abbreviation={} name=\"{}\" range_low_hz={:.6} \
         range_high_hz={:.6} utilization=\"{}\"",
        band.abbreviation, band.band_name, band.range_low_hz, band.range_high_hz,
        band.utilization
    );
    Ok(())
}
