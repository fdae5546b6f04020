//! Sampled waveforms and the primitive block operations.
//!
//! A [`Signal`] is a finite, uniformly sampled real-valued voltage waveform.
//! Batch buffers rather than streams: every measurement the simulator
//! reproduces is a steady-state reading, so each operation consumes whole
//! signals and returns new ones.

use crate::error::{Error, Result};

/// Uniformly sampled real-valued voltage waveform.
///
/// Invariants, enforced at construction: the sample rate is positive and
/// finite, there is at least one sample, and every sample is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
}

impl Signal {
    /// Build a signal from raw samples, validating all invariants.
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::InvalidSampleRate(sample_rate_hz));
        }
        if samples.is_empty() {
            return Err(Error::EmptySignal);
        }
        if let Some(idx) = samples.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFiniteSample(idx));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one sample by construction
    }

    /// Duration in seconds; `len / sample_rate` exactly.
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Nyquist frequency of this signal's sample grid.
    pub fn nyquist_hz(&self) -> f64 {
        self.sample_rate_hz / 2.0
    }

    /// Copy out a contiguous segment as a new signal.
    ///
    /// Useful for windowed measurements (e.g. counting frequency over the
    /// final 10 ms of a drifting tone, or skipping filter edge transients).
    pub fn segment(&self, start: usize, len: usize) -> Result<Signal> {
        if len == 0 || start + len > self.samples.len() {
            return Err(Error::LengthMismatch(start + len, self.samples.len()));
        }
        Signal::new(self.samples[start..start + len].to_vec(), self.sample_rate_hz)
    }

    /// Mean-square voltage of the waveform.
    pub fn mean_square(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum::<f64>() / self.samples.len() as f64
    }

    pub(crate) fn check_compatible(&self, other: &Signal) -> Result<()> {
        if self.sample_rate_hz != other.sample_rate_hz {
            return Err(Error::SampleRateMismatch(
                self.sample_rate_hz,
                other.sample_rate_hz,
            ));
        }
        if self.samples.len() != other.samples.len() {
            return Err(Error::LengthMismatch(
                self.samples.len(),
                other.samples.len(),
            ));
        }
        Ok(())
    }
}

/// Synthesize a cosine tone with a fixed sample count.
///
/// `samples[n] = (amplitude_vpp / 2) * cos(2*pi*freq*n/fs + phase)`.
/// Shared by [`make_tone`] and the oscillator generator so that both produce
/// bit-identical output for identical parameters.
pub(crate) fn tone_with_len(
    freq_hz: f64,
    amplitude_vpp: f64,
    n_samples: usize,
    sample_rate_hz: f64,
    phase_rad: f64,
) -> Result<Signal> {
    if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
        return Err(Error::InvalidSampleRate(sample_rate_hz));
    }
    if !freq_hz.is_finite() || freq_hz <= 0.0 {
        return Err(Error::NonPositiveFrequency(freq_hz));
    }
    if freq_hz >= sample_rate_hz / 2.0 {
        return Err(Error::Aliasing {
            freq_hz,
            nyquist_hz: sample_rate_hz / 2.0,
        });
    }
    if !(amplitude_vpp.is_finite() && amplitude_vpp >= 0.0) {
        return Err(Error::InvalidAmplitude(amplitude_vpp));
    }
    let amp = amplitude_vpp / 2.0;
    let w = 2.0 * std::f64::consts::PI * freq_hz / sample_rate_hz;
    let samples = (0..n_samples)
        .map(|n| amp * (w * n as f64 + phase_rad).cos())
        .collect();
    Signal::new(samples, sample_rate_hz)
}

/// Synthesize a pure cosine test tone.
///
/// The sample count is `round(duration_s * sample_rate_hz)`, at least one
/// sample. Frequencies at or above Nyquist are rejected.
pub fn make_tone(
    freq_hz: f64,
    amplitude_vpp: f64,
    duration_s: f64,
    sample_rate_hz: f64,
    phase_rad: f64,
) -> Result<Signal> {
    if !(duration_s.is_finite() && duration_s > 0.0) {
        return Err(Error::NonPositiveDuration(duration_s));
    }
    let n = (duration_s * sample_rate_hz).round().max(1.0) as usize;
    tone_with_len(freq_hz, amplitude_vpp, n, sample_rate_hz, phase_rad)
}

/// Elementwise product of two signals (the ideal mixer core).
///
/// For pure tones at `f1` and `f2` the output contains exactly two lines, at
/// `|f1 - f2|` and `f1 + f2`, each at half the product of the amplitudes.
pub fn multiply(a: &Signal, b: &Signal) -> Result<Signal> {
    a.check_compatible(b)?;
    let samples = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| x * y)
        .collect();
    Signal::new(samples, a.sample_rate_hz)
}

/// Elementwise sum of two signals.
pub fn add(a: &Signal, b: &Signal) -> Result<Signal> {
    a.check_compatible(b)?;
    let samples = a
        .samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| x + y)
        .collect();
    Signal::new(samples, a.sample_rate_hz)
}

/// Apply a gain in dB: every sample is multiplied by `10^(gain_db/20)`.
///
/// 0 dB is an exact identity (the scale factor is exactly 1.0).
pub fn scale_db(s: &Signal, gain_db: f64) -> Result<Signal> {
    if !gain_db.is_finite() {
        return Err(Error::NonFiniteGain(gain_db));
    }
    let factor = 10.0_f64.powf(gain_db / 20.0);
    let samples = s.samples.iter().map(|x| x * factor).collect();
    Signal::new(samples, s.sample_rate_hz)
}

/// Hard-knee clipper: samples within `±clip_level_v` pass unchanged, samples
/// beyond are limited to the rail.
///
/// Idempotent, and an overdriven tone comes out with odd harmonics.
pub fn soft_clip(s: &Signal, clip_level_v: f64) -> Result<Signal> {
    if !(clip_level_v.is_finite() && clip_level_v > 0.0) {
        return Err(Error::InvalidClipLevel(clip_level_v));
    }
    let samples = s
        .samples
        .iter()
        .map(|x| x.clamp(-clip_level_v, clip_level_v))
        .collect();
    Signal::new(samples, s.sample_rate_hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tone(freq: f64, vpp: f64, dur: f64, fs: f64) -> Signal {
        make_tone(freq, vpp, dur, fs, 0.0).unwrap()
    }

    #[test]
    fn tone_sample_count_and_vpp() {
        let s = tone(10e6, 0.226, 1e-5, 40e6);
        assert_eq!(s.len(), 400);
        let max = s.samples().iter().cloned().fold(f64::MIN, f64::max);
        let min = s.samples().iter().cloned().fold(f64::MAX, f64::min);
        assert_eq!(max - min, 0.226);
    }

    #[test]
    fn tone_zero_amplitude_is_all_zero() {
        let s = tone(1e6, 0.0, 1e-4, 40e6);
        assert!(s.samples().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn tone_duration_recoverable() {
        let s = tone(1e3, 1.0, 0.25, 8e3);
        assert_eq!(s.duration_s(), 0.25);
    }

    #[test]
    fn tone_rejects_nyquist_and_bad_duration() {
        assert!(matches!(
            make_tone(20e6, 1.0, 1e-3, 40e6, 0.0),
            Err(Error::Aliasing { .. })
        ));
        assert!(matches!(
            make_tone(25e6, 1.0, 1e-3, 40e6, 0.0),
            Err(Error::Aliasing { .. })
        ));
        assert!(matches!(
            make_tone(1e3, 1.0, 0.0, 40e6, 0.0),
            Err(Error::NonPositiveDuration(_))
        ));
        assert!(matches!(
            make_tone(0.0, 1.0, 1e-3, 40e6, 0.0),
            Err(Error::NonPositiveFrequency(_))
        ));
    }

    #[test]
    fn signal_invariants_enforced() {
        assert!(matches!(
            Signal::new(vec![], 1.0),
            Err(Error::EmptySignal)
        ));
        assert!(matches!(
            Signal::new(vec![1.0], 0.0),
            Err(Error::InvalidSampleRate(_))
        ));
        assert!(matches!(
            Signal::new(vec![1.0, f64::NAN], 1.0),
            Err(Error::NonFiniteSample(1))
        ));
    }

    #[test]
    fn multiply_identity_and_commutativity() {
        let a = tone(1e6, 1.0, 1e-4, 40e6);
        let ones = Signal::new(vec![1.0; a.len()], 40e6).unwrap();
        assert_eq!(multiply(&a, &ones).unwrap(), a);

        let b = tone(3e6, 0.7, 1e-4, 40e6);
        assert_eq!(multiply(&a, &b).unwrap(), multiply(&b, &a).unwrap());
    }

    #[test]
    fn multiply_rejects_mismatch() {
        let a = tone(1e6, 1.0, 1e-4, 40e6);
        let b = tone(1e6, 1.0, 1e-4, 20e6);
        assert!(matches!(
            multiply(&a, &b),
            Err(Error::SampleRateMismatch(..))
        ));
        let c = tone(1e6, 1.0, 2e-4, 40e6);
        assert!(matches!(multiply(&a, &c), Err(Error::LengthMismatch(..))));
    }

    #[test]
    fn add_identity_and_linearity() {
        let a = tone(1e6, 1.0, 1e-4, 40e6);
        let zeros = Signal::new(vec![0.0; a.len()], 40e6).unwrap();
        assert_eq!(add(&a, &zeros).unwrap(), a);

        let doubled = add(&a, &a).unwrap();
        let expected = tone(1e6, 2.0, 1e-4, 40e6);
        for (x, y) in doubled.samples().iter().zip(expected.samples()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn scale_db_zero_is_bit_identical() {
        let s = tone(1e6, 0.37, 1e-4, 40e6);
        assert_eq!(scale_db(&s, 0.0).unwrap(), s);
    }

    #[test]
    fn scale_db_twenty_is_times_ten() {
        let s = tone(1e6, 0.1, 1e-4, 40e6);
        let g = scale_db(&s, 20.0).unwrap();
        let max = g.samples().iter().cloned().fold(f64::MIN, f64::max);
        let min = g.samples().iter().cloned().fold(f64::MAX, f64::min);
        assert!((max - min - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scale_db_minus_six_halves() {
        let s = tone(1e6, 1.0, 1e-4, 40e6);
        let g = scale_db(&s, -6.0206).unwrap();
        for (x, y) in g.samples().iter().zip(s.samples()) {
            assert!((x - y * 0.5).abs() <= 1e-5 * y.abs().max(1e-3));
        }
    }

    #[test]
    fn scale_db_roundtrip() {
        let s = tone(1e6, 1.0, 1e-4, 40e6);
        let back = scale_db(&scale_db(&s, 13.7).unwrap(), -13.7).unwrap();
        for (x, y) in back.samples().iter().zip(s.samples()) {
            assert!((x - y).abs() <= 1e-9 * y.abs().max(1e-12));
        }
    }

    #[test]
    fn scale_db_rejects_non_finite() {
        let s = tone(1e6, 1.0, 1e-4, 40e6);
        assert!(matches!(
            scale_db(&s, f64::NAN),
            Err(Error::NonFiniteGain(_))
        ));
    }

    #[test]
    fn clip_below_threshold_unchanged() {
        let s = tone(1e6, 0.2, 1e-4, 40e6);
        assert_eq!(soft_clip(&s, 1.0).unwrap(), s);
    }

    #[test]
    fn clip_zeros_stay_zero() {
        let z = Signal::new(vec![0.0; 64], 1e3).unwrap();
        assert_eq!(soft_clip(&z, 1.0).unwrap(), z);
    }

    #[test]
    fn clip_is_idempotent_and_bounded() {
        let s = tone(1e6, 4.0, 1e-4, 40e6);
        let once = soft_clip(&s, 1.0).unwrap();
        let twice = soft_clip(&once, 1.0).unwrap();
        assert_eq!(once, twice);
        assert!(once.samples().iter().all(|x| x.abs() <= 1.0));
    }

    #[test]
    fn clip_rejects_non_positive_level() {
        let s = tone(1e6, 1.0, 1e-4, 40e6);
        assert!(matches!(
            soft_clip(&s, 0.0),
            Err(Error::InvalidClipLevel(_))
        ));
        assert!(matches!(
            soft_clip(&s, -2.0),
            Err(Error::InvalidClipLevel(_))
        ));
    }

    #[test]
    fn segment_extracts_interior() {
        let s = tone(1e3, 1.0, 1e-2, 1e6);
        let seg = s.segment(100, 500).unwrap();
        assert_eq!(seg.len(), 500);
        assert_eq!(seg.samples()[0], s.samples()[100]);
        assert!(s.segment(9_800, 500).is_err());
    }
}
