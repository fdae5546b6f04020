//! Bench-measurement reproduction for the oscillators: frequency-counter and
//! oscilloscope readings, and the drifting-VFO behavior.

mod common;

use bitx_core::instruments::{count_frequency, vpp};
use bitx_core::osc::{generate, OscillatorSpec};

#[test]
fn bfo_reads_ten_megahertz_and_226_mvpp() {
    let spec = OscillatorSpec::new(10e6, 0.0, 0.226);
    let s = generate(&spec, 0.01, 40e6).unwrap();
    let f = count_frequency(&s).unwrap();
    assert!((f - 10e6).abs() <= 10.0, "counter read {f}");
    assert_eq!(vpp(&s), 0.226);
}

#[test]
fn pulled_vfo_reads_319936_khz() {
    // crystal VFO pulled 640 Hz low
    let spec = OscillatorSpec::new(3.2e6, -640.0, 0.158);
    let s = generate(&spec, 0.02, 40e6).unwrap();
    let f = count_frequency(&s).unwrap();
    assert!((f - 3.19936e6).abs() <= 4.0, "counter read {f}");
    assert_eq!(vpp(&s), 0.158);
}

#[test]
fn counter_tracks_generator_within_one_ppm() {
    for freq in [1e3, 3.2e6, 6.8e6, 10e6] {
        let spec = OscillatorSpec::new(freq, 0.0, 1.0);
        let s = generate(&spec, 0.02, 40e6).unwrap();
        let f = count_frequency(&s).unwrap();
        assert!(
            (f - freq).abs() <= 1e-6 * freq,
            "{freq} Hz read as {f} Hz"
        );
    }
}

#[test]
fn drift_shifts_windowed_counter_readings() {
    // 100 Hz/s drift: window centers 90 ms apart read 9 Hz apart.
    let fs = 1e6;
    let spec = OscillatorSpec {
        nominal_freq_hz: 100e3,
        offset_hz: 0.0,
        amplitude_vpp: 1.0,
        phase_rad: 0.0,
        drift_hz_per_s: 100.0,
    };
    let s = generate(&spec, 0.1, fs).unwrap();
    let win = (0.01 * fs) as usize;
    let first = s.segment(0, win).unwrap();
    let last = s.segment(s.len() - win, win).unwrap();
    let f_first = count_frequency(&first).unwrap();
    let f_last = count_frequency(&last).unwrap();
    let delta = f_last - f_first;
    assert!((delta - 9.0).abs() <= 0.5, "windowed counter delta {delta}");
    assert!(f_last > f_first + 8.0);
}
