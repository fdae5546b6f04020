//! Virtual measurement gear: FFT spectrum analyzer with dBm readout into
//! 50 ohms, interpolated zero-crossing frequency counter, oscilloscope-style
//! peak-to-peak voltage readout, and suppression meters.

use std::cell::RefCell;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// Reference impedance for all power readouts, in ohms.
pub const REFERENCE_OHMS: f64 = 50.0;

/// Display floor for per-bin power; keeps log plots finite.
pub const NOISE_FLOOR_DBM: f64 = -120.0;

/// One-sided power spectrum in dBm referenced to 50 ohms.
///
/// Bin powers use the coherent (amplitude) window correction, so a sine
/// centered on a bin reads its true power at that bin. The raw per-bin watts
/// are kept unclamped internally for power sums and SNR arithmetic; the dBm
/// view clamps at [`NOISE_FLOOR_DBM`].
#[derive(Debug, Clone)]
pub struct Spectrum {
    power_dbm: Vec<f64>,
    watts: Vec<f64>,
    resolution_hz: f64,
    window_name: &'static str,
    /// `(sum w)^2 / (N * sum w^2)`: converts the coherently normalized bin
    /// sum into true mean-square power (2/3 for a Hann window).
    power_correction: f64,
}

impl Spectrum {
    /// Per-bin power in dBm, clamped at the display floor.
    pub fn power_dbm(&self) -> &[f64] {
        &self.power_dbm
    }

    /// Bin spacing in Hz.
    pub fn resolution_hz(&self) -> f64 {
        self.resolution_hz
    }

    pub fn window_name(&self) -> &'static str {
        self.window_name
    }

    pub fn len(&self) -> usize {
        self.power_dbm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.power_dbm.is_empty()
    }

    /// Center frequency of bin `k`.
    pub fn bin_freq_hz(&self, k: usize) -> f64 {
        k as f64 * self.resolution_hz
    }

    /// Highest represented frequency (the Nyquist bin).
    pub fn max_freq_hz(&self) -> f64 {
        self.bin_freq_hz(self.power_dbm.len() - 1)
    }

    /// Index of the bin nearest to `freq_hz`.
    pub fn nearest_bin(&self, freq_hz: f64) -> Result<usize> {
        if !freq_hz.is_finite() || freq_hz < 0.0 || freq_hz > self.max_freq_hz() {
            return Err(Error::FrequencyOutOfRange {
                freq_hz,
                max_hz: self.max_freq_hz(),
            });
        }
        let k = (freq_hz / self.resolution_hz).round() as usize;
        Ok(k.min(self.power_dbm.len() - 1))
    }

    /// True total power with the documented window correction applied, so the
    /// spectrum satisfies Parseval against the time-domain mean square.
    pub fn total_power_watts(&self) -> f64 {
        self.watts.iter().sum::<f64>() * self.power_correction
    }

    /// Unclamped power of bin `k` in watts.
    pub fn bin_watts(&self, k: usize) -> f64 {
        self.watts[k]
    }

    /// Sum of unclamped bin watts over an inclusive bin range (not
    /// Parseval-corrected; use for ratios).
    pub fn band_watts(&self, lo_bin: usize, hi_bin: usize) -> f64 {
        let hi = hi_bin.min(self.watts.len() - 1);
        self.watts[lo_bin.min(hi)..=hi].iter().sum()
    }

    /// Maximum bin power in dBm over an inclusive bin range, with its bin.
    pub fn peak_in_bins(&self, lo_bin: usize, hi_bin: usize) -> (usize, f64) {
        let hi = hi_bin.min(self.power_dbm.len() - 1);
        let lo = lo_bin.min(hi);
        let mut best = (lo, self.power_dbm[lo]);
        for k in lo..=hi {
            if self.power_dbm[k] > best.1 {
                best = (k, self.power_dbm[k]);
            }
        }
        best
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Largest power of two not exceeding `n` (at least 2); the usual transform
/// length for analyzing a whole buffer.
pub fn transform_len_for(n: usize) -> usize {
    let mut p = 2;
    while p * 2 <= n {
        p *= 2;
    }
    p
}

/// Hann-windowed one-sided power spectrum of the first `transform_length`
/// samples.
///
/// `transform_length` must be a power of two no longer than the signal. The
/// coherent window correction makes a full-scale 0.6325 Vpp sine at a bin
/// center read 0 dBm at its bin.
pub fn measure_spectrum(s: &Signal, transform_length: usize) -> Result<Spectrum> {
    let n = transform_length;
    if n > s.len() {
        return Err(Error::TransformTooLong {
            requested: n,
            available: s.len(),
        });
    }
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::TransformNotPowerOfTwo(n));
    }

    let two_pi = 2.0 * std::f64::consts::PI;
    let mut window_sum = 0.0;
    let mut window_sq_sum = 0.0;
    let mut buf: Vec<Complex<f64>> = Vec::with_capacity(n);
    for (i, &x) in s.samples()[..n].iter().enumerate() {
        let w = 0.5 * (1.0 - (two_pi * i as f64 / n as f64).cos());
        window_sum += w;
        window_sq_sum += w * w;
        buf.push(Complex::new(x * w, 0.0));
    }

    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fft.process(&mut buf);

    let bins = n / 2 + 1;
    let mut watts = Vec::with_capacity(bins);
    let mut power_dbm = Vec::with_capacity(bins);
    for (k, v) in buf[..bins].iter().enumerate() {
        let amp = v.norm() / window_sum;
        // Interior bins carry a mirror image (factor 2 in amplitude) and the
        // sine-to-mean-square halving; DC and Nyquist carry neither.
        let mean_square = if k == 0 || k == n / 2 {
            amp * amp
        } else {
            2.0 * amp * amp
        };
        let p = mean_square / REFERENCE_OHMS;
        watts.push(p);
        power_dbm.push((10.0 * (p / 1e-3).log10()).max(NOISE_FLOOR_DBM));
    }

    Ok(Spectrum {
        power_dbm,
        watts,
        resolution_hz: s.sample_rate_hz() / n as f64,
        window_name: "hann",
        power_correction: window_sum * window_sum / (n as f64 * window_sq_sum),
    })
}

/// Frequency from linearly interpolated zero-crossing intervals.
///
/// Requires at least 8 zero crossings; a clean single tone of 10 ms or more
/// reads within 1 ppm.
pub fn count_frequency(s: &Signal) -> Result<f64> {
    let x = s.samples();
    let fs = s.sample_rate_hz();
    let mut total_crossings = 0usize;
    let mut first_rising: Option<f64> = None;
    let mut last_rising: Option<f64> = None;
    let mut rising_count = 0usize;

    for i in 0..x.len().saturating_sub(1) {
        let (a, b) = (x[i], x[i + 1]);
        let rising = a < 0.0 && b >= 0.0;
        let falling = a >= 0.0 && b < 0.0;
        if rising || falling {
            total_crossings += 1;
        }
        if rising {
            // a < 0 <= b, so the denominator is strictly negative.
            let frac = a / (a - b);
            let t = (i as f64 + frac) / fs;
            if first_rising.is_none() {
                first_rising = Some(t);
            }
            last_rising = Some(t);
            rising_count += 1;
        }
    }

    if total_crossings < 8 {
        return Err(Error::TooFewCrossings {
            found: total_crossings,
            needed: 8,
        });
    }
    let (t0, t1) = (first_rising.unwrap(), last_rising.unwrap());
    if rising_count < 2 || t1 <= t0 {
        return Err(Error::TooFewCrossings {
            found: rising_count,
            needed: 2,
        });
    }
    Ok((rising_count as f64 - 1.0) / (t1 - t0))
}

/// Oscilloscope peak-to-peak readout: max sample minus min sample.
pub fn vpp(s: &Signal) -> f64 {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in s.samples() {
        min = min.min(x);
        max = max.max(x);
    }
    max - min
}

/// Frequency and level of the strongest bin; ties break toward the lower
/// frequency.
pub fn peak_power_dbm(spec: &Spectrum) -> (f64, f64) {
    let mut best_k = 0;
    for (k, &p) in spec.power_dbm().iter().enumerate() {
        if p > spec.power_dbm()[best_k] {
            best_k = k;
        }
    }
    (spec.bin_freq_hz(best_k), spec.power_dbm()[best_k])
}

/// Level difference in dB: the bin nearest `ref_freq_hz` minus the strongest
/// bin within ±2 bins of `probe_freq_hz`.
pub fn suppression_db(spec: &Spectrum, ref_freq_hz: f64, probe_freq_hz: f64) -> Result<f64> {
    let ref_bin = spec.nearest_bin(ref_freq_hz)?;
    let probe_bin = spec.nearest_bin(probe_freq_hz)?;
    let lo = probe_bin.saturating_sub(2);
    let hi = probe_bin + 2;
    let (_, probe_max) = spec.peak_in_bins(lo, hi);
    Ok(spec.power_dbm()[ref_bin] - probe_max)
}

/// Tone-to-rest power ratio of a recovered audio signal, in dB.
///
/// The strongest line inside `band_hz` counts as signal (±3 bins around its
/// peak); everything else inside the band counts as noise. Capped at 150 dB
/// so a numerically silent band stays finite.
pub fn audio_snr_db(s: &Signal, band_hz: (f64, f64)) -> Result<(f64, f64)> {
    let spec = measure_spectrum(s, transform_len_for(s.len()))?;
    let lo_bin = spec.nearest_bin(band_hz.0.max(0.0).min(spec.max_freq_hz()))?;
    let hi_bin = spec.nearest_bin(band_hz.1.min(spec.max_freq_hz()))?;
    let (peak_bin, _) = spec.peak_in_bins(lo_bin, hi_bin);

    let mut signal_w = 0.0;
    let mut noise_w = 0.0;
    for k in lo_bin..=hi_bin {
        let d = k.abs_diff(peak_bin);
        if d <= 3 {
            signal_w += spec.bin_watts(k);
        } else if d > 5 {
            noise_w += spec.bin_watts(k);
        }
    }
    let snr = if noise_w > 0.0 {
        (10.0 * (signal_w / noise_w).log10()).min(150.0)
    } else {
        150.0
    };
    Ok((snr, spec.bin_freq_hz(peak_bin)))
}
