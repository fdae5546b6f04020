//! Shared test oracles.
//!
//! Everything here evaluates the DFT directly (plain sums, no FFT library),
//! so spectral assertions stay independent of the implementation path they
//! check.
#![allow(dead_code)] // each test target uses its own subset

use bitx_core::signal::Signal;

/// Amplitude of the cosine component at `freq_hz` via direct DFT projection.
pub fn goertzel_amplitude(s: &Signal, freq_hz: f64) -> f64 {
    let w = 2.0 * std::f64::consts::PI * freq_hz / s.sample_rate_hz();
    let (mut re, mut im) = (0.0_f64, 0.0_f64);
    for (n, &x) in s.samples().iter().enumerate() {
        let ph = w * n as f64;
        re += x * ph.cos();
        im -= x * ph.sin();
    }
    2.0 * (re * re + im * im).sqrt() / s.len() as f64
}

/// DC (mean) level via the same direct route.
pub fn mean_level(s: &Signal) -> f64 {
    s.samples().iter().sum::<f64>() / s.len() as f64
}

/// Amplitude ratio in dB.
pub fn db(a: f64, b: f64) -> f64 {
    20.0 * (a / b).log10()
}

/// Tone power in dBm into 50 ohms for a cosine of the given amplitude.
pub fn amplitude_to_dbm(amp: f64) -> f64 {
    10.0 * ((amp * amp / 2.0) / 50.0 / 1e-3).log10()
}

/// Scan `±scan_bins` DFT bins around an expected line and return
/// `(peak_freq_hz, peak_amplitude)`; bin spacing is `fs / len`.
pub fn scan_peak(s: &Signal, expected_hz: f64, scan_bins: i64) -> (f64, f64) {
    let df = s.sample_rate_hz() / s.len() as f64;
    let center = (expected_hz / df).round() as i64;
    let mut best = (0.0, f64::MIN);
    for k in (center - scan_bins)..=(center + scan_bins) {
        if k <= 0 {
            continue;
        }
        let f = k as f64 * df;
        let a = goertzel_amplitude(s, f);
        if a > best.1 {
            best = (f, a);
        }
    }
    best
}

/// Tiny deterministic RNG (splitmix64) for seeded randomized cases.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next_f64() * (hi - lo + 1) as f64) as i64
    }
}
