//! Oracle-backed checks of the signal primitives: every spectral claim is
//! verified against a direct DFT evaluation.

mod common;

use bitx_core::instruments::{measure_spectrum, transform_len_for};
use bitx_core::signal::{add, make_tone, multiply, soft_clip};
use common::{db, goertzel_amplitude, scan_peak};

#[test]
fn tone_peak_lands_at_requested_frequency() {
    // 1 kHz tone: the strongest DFT line in a ±50-bin scan sits at 1 kHz
    // and reads the synthesized amplitude.
    let s = make_tone(1e3, 1.0, 1e-2, 40e6, 0.0).unwrap();
    let (f, a) = scan_peak(&s, 1e3, 50);
    assert_eq!(f, 1e3);
    assert!((a - 0.5).abs() < 1e-6, "amplitude {a}");
}

#[test]
fn mixer_produces_sum_and_difference_lines() {
    let fs = 40e6;
    let dur = 40_000.0 / fs; // 1 kHz bin grid
    let a = make_tone(10e6, 1.0, dur, fs, 0.0).unwrap();
    let b = make_tone(3.2e6, 1.0, dur, fs, 0.0).unwrap();
    let y = multiply(&a, &b).unwrap();
    // product-to-sum: each line at half the product amplitude
    let lo = goertzel_amplitude(&y, 6.8e6);
    let hi = goertzel_amplitude(&y, 13.2e6);
    let expected = 0.5 * 0.5 * 0.5;
    assert!((lo - expected).abs() < 1e-9, "difference line {lo}");
    assert!((hi - expected).abs() < 1e-9, "sum line {hi}");
    // and nothing at the inputs themselves
    assert!(db(goertzel_amplitude(&y, 10e6), expected) < -100.0);
    assert!(db(goertzel_amplitude(&y, 3.2e6), expected) < -100.0);
}

#[test]
fn mixer_close_in_lines_match_oracle() {
    let fs = 40e6;
    let dur = 40_000.0 / fs;
    let a = make_tone(10e6, 0.8, dur, fs, 0.0).unwrap();
    let b = make_tone(1e3, 0.4, dur, fs, 0.0).unwrap();
    let y = multiply(&a, &b).unwrap();
    let expected = 0.4 * 0.2 * 0.5;
    // the two lines sit two bins apart at this grid, so scan one bin only
    for f in [9.999e6, 10.001e6] {
        let (peak_f, peak_a) = scan_peak(&y, f, 1);
        assert_eq!(peak_f, f);
        assert!(
            db(peak_a, expected).abs() < 0.01,
            "line at {f}: {peak_a} vs {expected}"
        );
    }
}

#[test]
fn add_superposes_two_lines() {
    let fs = 40e6;
    let dur = 40_000.0 / fs;
    let a = make_tone(1e6, 1.0, dur, fs, 0.0).unwrap();
    let b = make_tone(2e6, 0.25, dur, fs, 0.0).unwrap();
    let y = add(&a, &b).unwrap();
    assert!((goertzel_amplitude(&y, 1e6) - 0.5).abs() < 1e-9);
    assert!((goertzel_amplitude(&y, 2e6) - 0.125).abs() < 1e-9);
}

#[test]
fn overdriven_clip_spawns_third_harmonic() {
    let fs = 1e6;
    let dur = 100_000.0 / fs;
    let s = make_tone(10e3, 4.0, dur, fs, 0.0).unwrap();
    let clipped = soft_clip(&s, 1.0).unwrap();
    let fundamental = goertzel_amplitude(&clipped, 10e3);
    let third = goertzel_amplitude(&clipped, 30e3);
    // hard clipping at a quarter of the peak: strong odd harmonics
    assert!(
        db(third, fundamental) > -20.0,
        "third harmonic at {:.1} dBc",
        db(third, fundamental)
    );
    // symmetric clipping: no even harmonics
    let second = goertzel_amplitude(&clipped, 20e3);
    assert!(db(second, fundamental) < -100.0);
}

#[test]
fn output_stage_filter_selects_the_lower_sideband() {
    // Filter-method sideband selection at RF: a stage configured for the
    // lower sideband of a 6.8015 MHz carrier passes carrier − 1 kHz and
    // rejects carrier + 1 kHz.
    use bitx_core::filter::{bandpass, FilterSpec};
    let spec = FilterSpec::new(6.8e6, 3e3, 300.0, 60.0).unwrap();
    let fs = 40e6;
    let dur = 0.025;
    let lower = make_tone(6.8015e6 - 1e3, 1.0, dur, fs, 0.0).unwrap();
    let upper = make_tone(6.8015e6 + 1e3, 1.0, dur, fs, 0.0).unwrap();
    let both = add(&lower, &upper).unwrap();
    let out = bandpass(&both, &spec).unwrap();
    let passed = goertzel_amplitude(&out, 6.8005e6);
    let rejected = goertzel_amplitude(&out, 6.8025e6);
    assert!(db(passed, 0.5).abs() <= 1.0, "wanted sideband changed {:.2} dB", db(passed, 0.5));
    assert!(
        db(rejected, 0.5) <= -57.0,
        "unwanted sideband only {:.1} dB down",
        -db(rejected, 0.5)
    );
}

#[test]
fn two_tone_product_power_concentrates_in_two_lines() {
    // For bin-centered tone pairs, at least 99.9 % of mixer output power
    // lies within ±2 bins of the difference and sum lines.
    let fs = 1e6;
    let n = 8192usize;
    let df = fs / n as f64;
    let dur = n as f64 / fs;
    let mut rng = common::SplitMix64(0x5EED_0001);
    for _ in 0..20 {
        let k1 = rng.next_range(20, 1800);
        let k2 = rng.next_range(20, 1800);
        if (k1 - k2).abs() < 8 || k1 + k2 > (n as i64 / 2 - 20) {
            continue;
        }
        let a = make_tone(k1 as f64 * df, 1.4, dur, fs, 0.0).unwrap();
        let b = make_tone(k2 as f64 * df, 0.9, dur, fs, 0.0).unwrap();
        let y = multiply(&a, &b).unwrap();
        let spec = measure_spectrum(&y, transform_len_for(y.len())).unwrap();

        let diff_bin = spec.nearest_bin((k1 - k2).unsigned_abs() as f64 * df).unwrap();
        let sum_bin = spec.nearest_bin((k1 + k2) as f64 * df).unwrap();
        let in_lines = spec.band_watts(diff_bin.saturating_sub(2), diff_bin + 2)
            + spec.band_watts(sum_bin.saturating_sub(2), sum_bin + 2);
        let total = spec.band_watts(0, spec.len() - 1);
        assert!(
            in_lines / total >= 0.999,
            "k1={k1} k2={k2}: fraction {}",
            in_lines / total
        );
    }
}
