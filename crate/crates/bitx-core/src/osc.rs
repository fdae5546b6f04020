//! Oscillators and the frequency plan.
//!
//! Two sources drive the chain: a crystal BFO pullable a small amount around
//! its fundamental (a VXO), and a VFO that sets the working channel. The
//! working frequency is the difference of the two, and the VFO needed for a
//! target channel is the matching subtraction the other way around.

use crate::error::{Error, Result};
use crate::signal::{self, Signal};

/// Maximum VXO pull for a crystal BFO, in Hz.
pub const VXO_PULL_LIMIT_HZ: f64 = 1.5e3;

/// Oscillator description: nominal frequency, pull offset, output level,
/// starting phase and an optional linear drift.
///
/// Phase is an explicit field rather than hidden state so that every
/// generation call is reproducible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    /// Nominal (crystal or dial) frequency in Hz.
    pub nominal_freq_hz: f64,
    /// Pull away from nominal in Hz; negative pulls down.
    pub offset_hz: f64,
    /// Output level as peak-to-peak volts.
    pub amplitude_vpp: f64,
    /// Starting phase in radians.
    pub phase_rad: f64,
    /// Linear frequency drift in Hz per second (0 for a crystal source).
    pub drift_hz_per_s: f64,
}

impl OscillatorSpec {
    /// Fixed-amplitude oscillator at `nominal + offset` with zero phase and
    /// zero drift.
    pub fn new(nominal_freq_hz: f64, offset_hz: f64, amplitude_vpp: f64) -> Self {
        Self {
            nominal_freq_hz,
            offset_hz,
            amplitude_vpp,
            phase_rad: 0.0,
            drift_hz_per_s: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (value, what) in [
            (self.nominal_freq_hz, "nominal_freq_hz"),
            (self.offset_hz, "offset_hz"),
            (self.amplitude_vpp, "amplitude_vpp"),
            (self.phase_rad, "phase_rad"),
            (self.drift_hz_per_s, "drift_hz_per_s"),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidOscillatorSpec(format!(
                    "{what} must be finite"
                )));
            }
        }
        if self.amplitude_vpp < 0.0 {
            return Err(Error::InvalidOscillatorSpec(format!(
                "amplitude_vpp must be non-negative, got {}",
                self.amplitude_vpp
            )));
        }
        if self.nominal_freq_hz + self.offset_hz <= 0.0 {
            return Err(Error::InvalidOscillatorSpec(format!(
                "effective frequency must be positive, got {} Hz",
                self.nominal_freq_hz + self.offset_hz
            )));
        }
        Ok(())
    }
}

/// Effective oscillator frequency: `nominal + offset`.
pub fn effective_frequency(spec: &OscillatorSpec) -> f64 {
    spec.nominal_freq_hz + spec.offset_hz
}

/// Generate the oscillator waveform.
///
/// The instantaneous frequency is `nominal + offset + drift * t` and the
/// phase is its integral. With zero drift the output is bit-identical to
/// [`signal::make_tone`] at the same parameters.
pub fn generate(spec: &OscillatorSpec, duration_s: f64, sample_rate_hz: f64) -> Result<Signal> {
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(Error::NonPositiveDuration(duration_s));
    }
    let n = (duration_s * sample_rate_hz).round().max(1.0) as usize;
    generate_with_len(spec, n, sample_rate_hz)
}

/// [`generate`] with an explicit sample count, for building chain buffers
/// that must match an existing signal exactly.
pub(crate) fn generate_with_len(
    spec: &OscillatorSpec,
    n_samples: usize,
    sample_rate_hz: f64,
) -> Result<Signal> {
    spec.validate()?;
    let f0 = effective_frequency(spec);
    if spec.drift_hz_per_s == 0.0 {
        return signal::tone_with_len(
            f0,
            spec.amplitude_vpp,
            n_samples,
            sample_rate_hz,
            spec.phase_rad,
        );
    }
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::InvalidSampleRate(sample_rate_hz));
    }
    let duration = n_samples as f64 / sample_rate_hz;
    let f_end = f0 + spec.drift_hz_per_s * duration;
    let f_max = f0.max(f_end);
    if f_max >= sample_rate_hz / 2.0 {
        return Err(Error::Aliasing {
            freq_hz: f_max,
            nyquist_hz: sample_rate_hz / 2.0,
        });
    }
    if f0.min(f_end) <= 0.0 {
        return Err(Error::NonPositiveFrequency(f0.min(f_end)));
    }
    let amp = spec.amplitude_vpp / 2.0;
    let two_pi = 2.0 * std::f64::consts::PI;
    let samples = (0..n_samples)
        .map(|k| {
            let t = k as f64 / sample_rate_hz;
            // phase(t) = phase0 + 2*pi * (f0*t + drift*t^2/2)
            let ph = spec.phase_rad + two_pi * (f0 * t + 0.5 * spec.drift_hz_per_s * t * t);
            amp * ph.cos()
        })
        .collect();
    Signal::new(samples, sample_rate_hz)
}

/// VFO frequency needed to reach a working frequency with a given BFO:
/// `vfo = bfo - working`.
pub fn required_vfo(bfo_hz: f64, working_hz: f64) -> Result<f64> {
    if !(bfo_hz.is_finite() && working_hz.is_finite()) || working_hz <= 0.0 {
        return Err(Error::InfeasiblePlan(format!(
            "need finite bfo and positive working frequency, got bfo {bfo_hz} Hz, \
             working {working_hz} Hz"
        )));
    }
    let vfo = bfo_hz - working_hz;
    if vfo <= 0.0 {
        return Err(Error::InfeasiblePlan(format!(
            "bfo {bfo_hz} Hz does not exceed working frequency {working_hz} Hz"
        )));
    }
    Ok(vfo)
}

/// Working (on-air) frequency from the two oscillators: `bfo - vfo`.
pub fn working_frequency(bfo_hz: f64, vfo_hz: f64) -> Result<f64> {
    if !(bfo_hz.is_finite() && vfo_hz.is_finite()) || vfo_hz <= 0.0 {
        return Err(Error::InfeasiblePlan(format!(
            "need finite bfo and positive vfo, got bfo {bfo_hz} Hz, vfo {vfo_hz} Hz"
        )));
    }
    let working = bfo_hz - vfo_hz;
    if working <= 0.0 {
        return Err(Error::InfeasiblePlan(format!(
            "bfo {bfo_hz} Hz does not exceed vfo {vfo_hz} Hz"
        )));
    }
    Ok(working)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::make_tone;

    #[test]
    fn effective_frequency_endpoints() {
        assert_eq!(
            effective_frequency(&OscillatorSpec::new(10e6, -1.5e3, 1.0)),
            9_998_500.0
        );
        assert_eq!(
            effective_frequency(&OscillatorSpec::new(10e6, 1.5e3, 1.0)),
            10_001_500.0
        );
        assert_eq!(effective_frequency(&OscillatorSpec::new(7e6, 0.0, 1.0)), 7e6);
    }

    #[test]
    fn plan_arithmetic_matches_design() {
        assert_eq!(required_vfo(10e6, 7e6).unwrap(), 3e6);
        assert_eq!(required_vfo(10e6, 6.8e6).unwrap(), 3.2e6);
        assert_eq!(working_frequency(10e6, 3.2e6).unwrap(), 6.8e6);
        assert_eq!(working_frequency(10e6, 3e6).unwrap(), 7e6);
        assert_eq!(working_frequency(10e6, 3.19936e6).unwrap(), 6.80064e6);
    }

    #[test]
    fn plan_rejects_degenerate_cases() {
        assert!(required_vfo(7e6, 7e6).is_err());
        assert!(required_vfo(5e6, 7e6).is_err());
        assert!(working_frequency(3e6, 3e6).is_err());
        assert!(working_frequency(3e6, 0.0).is_err());
    }

    #[test]
    fn plan_roundtrip_is_exact() {
        for (bfo, working) in [(10e6, 7e6), (10e6, 6.8e6), (9.998_5e6, 6.799e6)] {
            let vfo = required_vfo(bfo, working).unwrap();
            assert_eq!(working_frequency(bfo, vfo).unwrap(), working);
        }
    }

    #[test]
    fn zero_drift_matches_make_tone_bit_for_bit() {
        let spec = OscillatorSpec {
            nominal_freq_hz: 10e6,
            offset_hz: 1.5e3,
            amplitude_vpp: 0.226,
            phase_rad: 0.4,
            drift_hz_per_s: 0.0,
        };
        let a = generate(&spec, 1e-4, 40e6).unwrap();
        let b = make_tone(10.0015e6, 0.226, 1e-4, 40e6, 0.4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generate_rejects_nyquist_violation() {
        let spec = OscillatorSpec::new(19e6, 0.0, 1.0);
        assert!(generate(&spec, 1e-4, 40e6).is_ok());
        let spec = OscillatorSpec::new(20e6, 0.0, 1.0);
        assert!(generate(&spec, 1e-4, 40e6).is_err());
        // drift carries the tone over Nyquist by the end of the buffer
        let spec = OscillatorSpec {
            nominal_freq_hz: 19.99e6,
            offset_hz: 0.0,
            amplitude_vpp: 1.0,
            phase_rad: 0.0,
            drift_hz_per_s: 1e9,
        };
        assert!(generate(&spec, 1e-3, 40e6).is_err());
    }

    #[test]
    fn spec_validation_rejects_nonsense() {
        assert!(OscillatorSpec::new(1e6, -2e6, 1.0).validate().is_err());
        assert!(OscillatorSpec::new(1e6, 0.0, -1.0).validate().is_err());
        assert!(OscillatorSpec::new(f64::NAN, 0.0, 1.0).validate().is_err());
    }
}
