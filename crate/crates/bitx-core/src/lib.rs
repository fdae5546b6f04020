//! Discrete-time simulation of a bidirectional (Bitx-style) SSB transceiver
//! signal chain, together with the virtual test instruments used to measure
//! it.
//!
//! The crate is organized around the blocks of a single-conversion
//! superheterodyne exciter:
//!
//! - [`signal`]: sampled waveforms and the primitive operations (tone
//!   synthesis, mixing arithmetic, gain, clipping) every stage is built from.
//! - [`filter`]: frequency-domain band-pass / low-pass filtering with a
//!   raised-cosine transition band.
//! - [`osc`]: BFO / VFO generation and the frequency-plan arithmetic.
//! - [`stages`]: the named chain blocks (mic pre-amp, balanced modulators,
//!   class-A amplifiers, product detector).
//! - [`chain`]: the full transmit / receive pipelines plus the shared-block
//!   registry that encodes the bidirectional architecture.
//! - [`instruments`]: FFT spectrum analyzer with dBm readout, interpolated
//!   zero-crossing frequency counter, oscilloscope-style Vpp readout and
//!   suppression meters.
//! - [`bands`]: the ITU radio-band allocation table and classifier.
//!
//! Everything is a pure function over immutable values: identical inputs
//! produce bit-identical outputs, and no operation carries hidden state.

pub mod bands;
pub mod chain;
pub mod error;
pub mod filter;
pub mod instruments;
pub mod osc;
pub mod signal;
pub mod stages;

pub use bands::{classify_band, BandInfo};
pub use chain::{
    build_chain, harmonic_report, receive, transmit, transmit_taps, ChainRegistry, Sideband,
    StageTaps, TransceiverConfig,
};
pub use error::{Error, Result};
pub use filter::{bandpass, lowpass, FilterSpec};
pub use instruments::{
    count_frequency, measure_spectrum, peak_power_dbm, suppression_db, vpp, Spectrum,
};
pub use osc::{effective_frequency, generate, required_vfo, working_frequency, OscillatorSpec};
pub use signal::{add, make_tone, multiply, scale_db, soft_clip, Signal};
pub use stages::{
    class_a_amp, dbm_mix, mic_preamp, product_detect, sbm_modulate, AmplifierSpec, Direction,
    StageKind,
};
