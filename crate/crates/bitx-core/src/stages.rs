//! The named chain blocks: mic pre-amp, balanced modulators, class-A
//! amplifier stages and the receive-side product detector.

use crate::error::{Error, Result};
use crate::filter::{bandpass, lowpass, FilterSpec};
use crate::signal::{add, multiply, scale_db, Signal};

/// Audio passband of the microphone pre-amplifier, in Hz.
pub const MIC_BAND_LOW_HZ: f64 = 300.0;
pub const MIC_BAND_HIGH_HZ: f64 = 3.4e3;
const MIC_TRANSITION_HZ: f64 = 200.0;
const MIC_STOP_DB: f64 = 60.0;

/// Product-detector audio low-pass cutoff, matching the mic band top edge.
pub const DETECTOR_CUTOFF_HZ: f64 = 3.4e3;
const DETECTOR_TRANSITION_HZ: f64 = 600.0;
/// The detector feeds the audio chain, which passes nothing RF: the
/// twice-IF mixing image has to go down far enough that zero-crossing
/// instruments see a clean waveform.
const DETECTOR_STOP_DB: f64 = 100.0;

/// Single-ended class-A stages run out of headroom on the cutoff side before
/// the saturation side; the lower rail sits at this fraction of the upper.
/// The resulting clipping asymmetry is what puts even-order harmonics in an
/// overdriven output.
pub const CLASS_A_CUTOFF_RATIO: f64 = 0.9;

/// Gain and supply rail of one amplifier stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierSpec {
    pub gain_db: f64,
    pub clip_level_v: f64,
}

impl AmplifierSpec {
    pub fn new(gain_db: f64, clip_level_v: f64) -> Self {
        Self {
            gain_db,
            clip_level_v,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.gain_db.is_finite() {
            return Err(Error::NonFiniteGain(self.gain_db));
        }
        if !(self.clip_level_v.is_finite() && self.clip_level_v > 0.0) {
            return Err(Error::InvalidClipLevel(self.clip_level_v));
        }
        Ok(())
    }
}

/// Which pipelines a block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    TxOnly,
    RxOnly,
    Bidirectional,
}

/// The named blocks of the chain.
///
/// `Detector` is the receive-direction role of the same physical balanced
/// modulator that modulates on transmit; it carries the SBM's instance in
/// the registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StageKind {
    MicAmp,
    Sbm,
    IfAmp2,
    SsbFilter,
    IfAmp1,
    Dbm,
    RfAmp,
    DriverAmp,
    Bpf,
    Detector,
    AfAmp,
}

impl StageKind {
    /// Pipeline membership per the block-diagram partition: mixers, filters
    /// and IF/RF amplifiers are shared; the mic and driver amplifiers exist
    /// only on transmit; the detector output path and audio amplifier only
    /// on receive.
    pub fn direction(&self) -> Direction {
        match self {
            StageKind::MicAmp | StageKind::DriverAmp => Direction::TxOnly,
            StageKind::Detector | StageKind::AfAmp => Direction::RxOnly,
            StageKind::Sbm
            | StageKind::IfAmp2
            | StageKind::SsbFilter
            | StageKind::IfAmp1
            | StageKind::Dbm
            | StageKind::RfAmp
            | StageKind::Bpf => Direction::Bidirectional,
        }
    }

    /// Stable lower-snake name, used by the CLI tap-point selector.
    pub fn label(&self) -> &'static str {
        match self {
            StageKind::MicAmp => "mic_amp",
            StageKind::Sbm => "sbm",
            StageKind::IfAmp2 => "if_amp_2",
            StageKind::SsbFilter => "ssb_filter",
            StageKind::IfAmp1 => "if_amp_1",
            StageKind::Dbm => "dbm",
            StageKind::RfAmp => "rf_amp",
            StageKind::DriverAmp => "driver_amp",
            StageKind::Bpf => "bpf",
            StageKind::Detector => "detector",
            StageKind::AfAmp => "af_amp",
        }
    }
}

/// Microphone pre-amplifier: band-limit the audio to the voice band
/// (300 Hz – 3.4 kHz), then apply the stage gain. Out-of-band tones come out
/// at least 40 dB down.
pub fn mic_preamp(audio: &Signal, gain_db: f64) -> Result<Signal> {
    if audio.sample_rate_hz() < 8e3 {
        return Err(Error::InvalidSampleRate(audio.sample_rate_hz()));
    }
    let spec = FilterSpec::new(
        (MIC_BAND_LOW_HZ + MIC_BAND_HIGH_HZ) / 2.0,
        MIC_BAND_HIGH_HZ - MIC_BAND_LOW_HZ,
        MIC_TRANSITION_HZ,
        MIC_STOP_DB,
    )?;
    scale_db(&bandpass(audio, &spec)?, gain_db)
}

/// Single balanced modulator: multiply the (peak-normalized) audio with the
/// BFO and add the residual carrier the balance trimpot leaves behind.
///
/// Audio hotter than the 1 V reference drive is normalized down to it, so
/// "carrier well below the sidebands" is a spectral ratio rather than a
/// hardware level: at reference drive the carrier line lands exactly
/// `carrier_suppression_db` below each sideband line. Audio below the
/// reference passes at its own level (the modulator has no AGC; boosting a
/// near-empty input would modulate noise at full scale). A suppression of
/// `f64::INFINITY` is the ideal balanced modulator and returns the bare
/// product, bit-identical to [`dbm_mix`].
pub fn sbm_modulate(
    audio: &Signal,
    bfo: &Signal,
    carrier_suppression_db: f64,
) -> Result<Signal> {
    audio.check_compatible(bfo)?;
    if carrier_suppression_db.is_nan() || carrier_suppression_db < 0.0 {
        return Err(Error::InvalidAmplitude(carrier_suppression_db));
    }

    let peak = audio
        .samples()
        .iter()
        .fold(0.0_f64, |m, &x| m.max(x.abs()));
    let normalized = if peak > 1.0 {
        let samples = audio.samples().iter().map(|x| x / peak).collect();
        Signal::new(samples, audio.sample_rate_hz())?
    } else {
        audio.clone()
    };

    let product = multiply(&normalized, bfo)?;

    // Sidebands of a full-scale tone sit at half the BFO amplitude, so the
    // residual needs another factor of two on top of the suppression.
    let residual_scale = 0.5 * 10.0_f64.powf(-carrier_suppression_db / 20.0);
    if residual_scale == 0.0 {
        return Ok(product);
    }
    let residual = Signal::new(
        bfo.samples().iter().map(|x| x * residual_scale).collect(),
        bfo.sample_rate_hz(),
    )?;
    add(&product, &residual)
}

/// Double balanced modulator: the ideal multiplier, with no carrier residue.
/// For tones the output holds lines at the difference and sum frequencies
/// only.
pub fn dbm_mix(if_sig: &Signal, vfo: &Signal) -> Result<Signal> {
    multiply(if_sig, vfo)
}

/// Class-A amplifier stage: gain, then hard saturation at the supply rails.
///
/// The stage is exactly linear below the rails. Saturation is asymmetric
/// (see [`CLASS_A_CUTOFF_RATIO`]): the waveform tops out at `+clip_level_v`
/// but cuts off at `-CLASS_A_CUTOFF_RATIO * clip_level_v`, so a heavily
/// overdriven stage produces even as well as odd harmonics.
pub fn class_a_amp(s: &Signal, spec: &AmplifierSpec) -> Result<Signal> {
    spec.validate()?;
    let scaled = scale_db(s, spec.gain_db)?;
    let hi = spec.clip_level_v;
    let lo = -CLASS_A_CUTOFF_RATIO * spec.clip_level_v;
    let samples = scaled.samples().iter().map(|x| x.clamp(lo, hi)).collect();
    Signal::new(samples, scaled.sample_rate_hz())
}

/// Product detector: multiply the IF signal with the BFO and keep the audio
/// band. An IF line offset from the BFO by `f` comes out as an audio tone at
/// `f`.
pub fn product_detect(if_sig: &Signal, bfo: &Signal) -> Result<Signal> {
    let mixed = multiply(if_sig, bfo)?;
    lowpass(
        &mixed,
        DETECTOR_CUTOFF_HZ,
        DETECTOR_TRANSITION_HZ,
        DETECTOR_STOP_DB,
    )
}
