//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by signal construction, stage operations, chain assembly
/// and the virtual instruments.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample rate must be positive and finite, got {0}")]
    InvalidSampleRate(f64),

    #[error("signal must contain at least one sample")]
    EmptySignal,

    #[error("non-finite sample at index {0}")]
    NonFiniteSample(usize),

    #[error("sample rates differ: {0} Hz vs {1} Hz")]
    SampleRateMismatch(f64, f64),

    #[error("signal lengths differ: {0} vs {1} samples")]
    LengthMismatch(usize, usize),

    #[error("frequency {freq_hz} Hz is at or above Nyquist ({nyquist_hz} Hz)")]
    Aliasing { freq_hz: f64, nyquist_hz: f64 },

    #[error("frequency must be positive, got {0} Hz")]
    NonPositiveFrequency(f64),

    #[error("duration must be positive, got {0} s")]
    NonPositiveDuration(f64),

    #[error("amplitude must be non-negative and finite, got {0} Vpp")]
    InvalidAmplitude(f64),

    #[error("gain must be finite, got {0} dB")]
    NonFiniteGain(f64),

    #[error("clip level must be positive, got {0} V")]
    InvalidClipLevel(f64),

    #[error("invalid filter spec: {0}")]
    InvalidFilterSpec(String),

    #[error("invalid oscillator spec: {0}")]
    InvalidOscillatorSpec(String),

    #[error("frequency plan infeasible: {0}")]
    InfeasiblePlan(String),

    #[error("transform length {requested} exceeds available samples ({available})")]
    TransformTooLong { requested: usize, available: usize },

    #[error("transform length {0} is not a power of two")]
    TransformNotPowerOfTwo(usize),

    #[error("too few zero crossings to measure frequency ({found} found, {needed} needed)")]
    TooFewCrossings { found: usize, needed: usize },

    #[error("frequency {freq_hz} Hz is outside the spectrum range (0..={max_hz} Hz)")]
    FrequencyOutOfRange { freq_hz: f64, max_hz: f64 },

    #[error("frequency {0} Hz is outside the band allocation table (3 kHz .. 300 GHz)")]
    OutsideBandTable(f64),

    /// A named transceiver-configuration invariant failed. The name is a
    /// stable machine-readable identifier; `detail` explains the violation.
    #[error("config invariant violated: {name}: {detail}")]
    Invariant {
        name: &'static str,
        detail: String,
    },
}

impl Error {
    /// Shorthand for a named configuration-invariant violation.
    pub(crate) fn invariant(name: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            name,
            detail: detail.into(),
        }
    }
}
