//! Flat text configuration: one `key = value` per line, `#` comments, every
//! key required. No silent defaults live in the parser; the shipped
//! `default.cfg` is the only place defaults exist.

use std::collections::BTreeMap;
use std::path::Path;

use bitx_core::chain::{Sideband, TransceiverConfig};
use bitx_core::filter::FilterSpec;
use bitx_core::osc::OscillatorSpec;

use crate::error::CliError;

/// Canonical key order; serialization writes exactly these, parsing demands
/// exactly these.
pub const CONFIG_KEYS: [&str; 29] = [
    "bfo_nominal_freq_hz",
    "bfo_offset_hz",
    "bfo_amplitude_vpp",
    "bfo_phase_rad",
    "bfo_drift_hz_per_s",
    "vfo_nominal_freq_hz",
    "vfo_offset_hz",
    "vfo_amplitude_vpp",
    "vfo_phase_rad",
    "vfo_drift_hz_per_s",
    "ssb_filter_center_hz",
    "ssb_filter_bandwidth_hz",
    "ssb_filter_transition_width_hz",
    "ssb_filter_stopband_atten_db",
    "bpf_center_hz",
    "bpf_bandwidth_hz",
    "bpf_transition_width_hz",
    "bpf_stopband_atten_db",
    "bpf_enabled",
    "mic_gain_db",
    "if1_gain_db",
    "if2_gain_db",
    "rf_gain_db",
    "driver_gain_db",
    "af_gain_db",
    "carrier_suppression_db",
    "sideband",
    "sample_rate_hz",
    "duration_s",
];

fn config_err(path: &str, line: Option<usize>, msg: impl Into<String>) -> CliError {
    CliError::Config {
        path: path.to_string(),
        line,
        msg: msg.into(),
    }
}

/// Parse configuration text. `path` only labels error messages.
pub fn parse_config(text: &str, path: &str) -> Result<TransceiverConfig, CliError> {
    let mut seen: BTreeMap<&str, (usize, String)> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| config_err(path, Some(line_no), "expected `key = value`"))?;
        let key = key.trim();
        let value = value.trim();
        let canonical = CONFIG_KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| config_err(path, Some(line_no), format!("unknown key `{key}`")))?;
        if let Some((first, _)) = seen.get(canonical) {
            return Err(config_err(
                path,
                Some(line_no),
                format!("duplicate key `{key}` (first set on line {first})"),
            ));
        }
        seen.insert(canonical, (line_no, value.to_string()));
    }

    let missing: Vec<&str> = CONFIG_KEYS
        .iter()
        .filter(|k| !seen.contains_key(**k))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(config_err(
            path,
            None,
            format!("missing keys: {}", missing.join(", ")),
        ));
    }

    let number = |key: &str| -> Result<f64, CliError> {
        let (line, value) = &seen[key];
        value.parse::<f64>().map_err(|_| {
            config_err(path, Some(*line), format!("`{key}` is not a number: `{value}`"))
        })
    };
    let flag = |key: &str| -> Result<bool, CliError> {
        let (line, value) = &seen[key];
        match value.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            other => Err(config_err(
                path,
                Some(*line),
                format!("`{key}` must be true or false, got `{other}`"),
            )),
        }
    };

    let (sideband_line, sideband_text) = &seen["sideband"];
    let sideband = Sideband::parse(sideband_text).ok_or_else(|| {
        config_err(
            path,
            Some(*sideband_line),
            format!("`sideband` must be lsb or usb, got `{sideband_text}`"),
        )
    })?;

    Ok(TransceiverConfig {
        bfo: OscillatorSpec {
            nominal_freq_hz: number("bfo_nominal_freq_hz")?,
            offset_hz: number("bfo_offset_hz")?,
            amplitude_vpp: number("bfo_amplitude_vpp")?,
            phase_rad: number("bfo_phase_rad")?,
            drift_hz_per_s: number("bfo_drift_hz_per_s")?,
        },
        vfo: OscillatorSpec {
            nominal_freq_hz: number("vfo_nominal_freq_hz")?,
            offset_hz: number("vfo_offset_hz")?,
            amplitude_vpp: number("vfo_amplitude_vpp")?,
            phase_rad: number("vfo_phase_rad")?,
            drift_hz_per_s: number("vfo_drift_hz_per_s")?,
        },
        ssb_filter: FilterSpec {
            center_hz: number("ssb_filter_center_hz")?,
            bandwidth_hz: number("ssb_filter_bandwidth_hz")?,
            transition_width_hz: number("ssb_filter_transition_width_hz")?,
            stopband_atten_db: number("ssb_filter_stopband_atten_db")?,
        },
        bpf: FilterSpec {
            center_hz: number("bpf_center_hz")?,
            bandwidth_hz: number("bpf_bandwidth_hz")?,
            transition_width_hz: number("bpf_transition_width_hz")?,
            stopband_atten_db: number("bpf_stopband_atten_db")?,
        },
        bpf_enabled: flag("bpf_enabled")?,
        mic_gain_db: number("mic_gain_db")?,
        if1_gain_db: number("if1_gain_db")?,
        if2_gain_db: number("if2_gain_db")?,
        rf_gain_db: number("rf_gain_db")?,
        driver_gain_db: number("driver_gain_db")?,
        af_gain_db: number("af_gain_db")?,
        carrier_suppression_db: number("carrier_suppression_db")?,
        sideband,
        sample_rate_hz: number("sample_rate_hz")?,
        duration_s: number("duration_s")?,
    })
}

/// Serialize in canonical order. Floats print in shortest round-trip form,
/// so parse -> serialize -> parse is the identity.
pub fn serialize_config(config: &TransceiverConfig) -> String {
    let mut out = String::new();
    let mut push = |key: &str, value: String| {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&value);
        out.push('\n');
    };
    push("bfo_nominal_freq_hz", config.bfo.nominal_freq_hz.to_string());
    push("bfo_offset_hz", config.bfo.offset_hz.to_string());
    push("bfo_amplitude_vpp", config.bfo.amplitude_vpp.to_string());
    push("bfo_phase_rad", config.bfo.phase_rad.to_string());
    push("bfo_drift_hz_per_s", config.bfo.drift_hz_per_s.to_string());
    push("vfo_nominal_freq_hz", config.vfo.nominal_freq_hz.to_string());
    push("vfo_offset_hz", config.vfo.offset_hz.to_string());
    push("vfo_amplitude_vpp", config.vfo.amplitude_vpp.to_string());
    push("vfo_phase_rad", config.vfo.phase_rad.to_string());
    push("vfo_drift_hz_per_s", config.vfo.drift_hz_per_s.to_string());
    push("ssb_filter_center_hz", config.ssb_filter.center_hz.to_string());
    push("ssb_filter_bandwidth_hz", config.ssb_filter.bandwidth_hz.to_string());
    push(
        "ssb_filter_transition_width_hz",
        config.ssb_filter.transition_width_hz.to_string(),
    );
    push(
        "ssb_filter_stopband_atten_db",
        config.ssb_filter.stopband_atten_db.to_string(),
    );
    push("bpf_center_hz", config.bpf.center_hz.to_string());
    push("bpf_bandwidth_hz", config.bpf.bandwidth_hz.to_string());
    push(
        "bpf_transition_width_hz",
        config.bpf.transition_width_hz.to_string(),
    );
    push(
        "bpf_stopband_atten_db",
        config.bpf.stopband_atten_db.to_string(),
    );
    push("bpf_enabled", config.bpf_enabled.to_string());
    push("mic_gain_db", config.mic_gain_db.to_string());
    push("if1_gain_db", config.if1_gain_db.to_string());
    push("if2_gain_db", config.if2_gain_db.to_string());
    push("rf_gain_db", config.rf_gain_db.to_string());
    push("driver_gain_db", config.driver_gain_db.to_string());
    push("af_gain_db", config.af_gain_db.to_string());
    push(
        "carrier_suppression_db",
        config.carrier_suppression_db.to_string(),
    );
    push("sideband", config.sideband.label().to_string());
    push("sample_rate_hz", config.sample_rate_hz.to_string());
    push("duration_s", config.duration_s.to_string());
    out
}

/// Load and parse a configuration file.
pub fn load_config(path: &Path) -> Result<TransceiverConfig, CliError> {
    let label = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(&label, None, format!("cannot read: {e}")))?;
    parse_config(&text, &label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_identity() {
        let config = TransceiverConfig::default();
        let text = serialize_config(&config);
        let back = parse_config(&text, "mem").unwrap();
        assert_eq!(back, config);
        // twice, in case formatting were lossy
        assert_eq!(serialize_config(&back), text);
    }

    #[test]
    fn roundtrip_keeps_infinity_and_usb() {
        let config = TransceiverConfig {
            carrier_suppression_db: f64::INFINITY,
            sideband: Sideband::Usb,
            ..TransceiverConfig::default()
        };
        let back = parse_config(&serialize_config(&config), "mem").unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "bfo_nominal_freq_hz = 10e6\nbogus line\n";
        match parse_config(text, "mem") {
            Err(CliError::Config { line: Some(2), .. }) => {}
            other => panic!("expected line-2 error, got {other:?}"),
        }

        let text = "bfo_nominal_freq_hz = 10e6\nbfo_nominal_freq_hz = 9e6\n";
        match parse_config(text, "mem") {
            Err(CliError::Config { line: Some(2), msg, .. }) => {
                assert!(msg.contains("duplicate"))
            }
            other => panic!("expected duplicate-key error, got {other:?}"),
        }

        let text = "no_such_key = 1\n";
        match parse_config(text, "mem") {
            Err(CliError::Config { line: Some(1), msg, .. }) => {
                assert!(msg.contains("unknown key"))
            }
            other => panic!("expected unknown-key error, got {other:?}"),
        }
    }

    #[test]
    fn missing_keys_are_listed() {
        match parse_config("bfo_nominal_freq_hz = 10e6\n", "mem") {
            Err(CliError::Config { line: None, msg, .. }) => {
                assert!(msg.contains("missing keys"));
                assert!(msg.contains("duration_s"));
            }
            other => panic!("expected missing-keys error, got {other:?}"),
        }
    }

    #[test]
    fn shipped_config_matches_builtin_defaults() {
        let text = include_str!("../default.cfg");
        let parsed = parse_config(text, "default.cfg").unwrap();
        assert_eq!(parsed, TransceiverConfig::default());
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let mut text = String::from("# shipped defaults\n\n");
        text.push_str(&serialize_config(&TransceiverConfig::default()));
        assert_eq!(
            parse_config(&text, "mem").unwrap(),
            TransceiverConfig::default()
        );
    }
}
