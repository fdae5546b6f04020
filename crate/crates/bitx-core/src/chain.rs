//! The transmit and receive pipelines, wired per the bidirectional block
//! diagram: mixers, filters and IF/RF amplifiers are single shared instances
//! serving both directions, while the mic amplifier and driver exist only on
//! transmit and the detector output path and audio amplifier only on receive.

use crate::error::{Error, Result};
use crate::filter::{bandpass, FilterSpec};
use crate::instruments::{measure_spectrum, transform_len_for, NOISE_FLOOR_DBM};
use crate::osc::{self, effective_frequency, working_frequency, OscillatorSpec, VXO_PULL_LIMIT_HZ};
use crate::signal::Signal;
use crate::stages::{
    class_a_amp, dbm_mix, mic_preamp, product_detect, sbm_modulate, AmplifierSpec, Direction,
    StageKind, MIC_BAND_HIGH_HZ, MIC_BAND_LOW_HZ,
};

/// Supply rail shared by every amplifier stage, volts.
pub const STAGE_CLIP_V: f64 = 6.0;

/// Which sideband the exciter transmits (and the receiver detects).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sideband {
    Lsb,
    Usb,
}

impl Sideband {
    pub fn label(&self) -> &'static str {
        match self {
            Sideband::Lsb => "lsb",
            Sideband::Usb => "usb",
        }
    }

    pub fn parse(s: &str) -> Option<Sideband> {
        match s {
            "lsb" => Some(Sideband::Lsb),
            "usb" => Some(Sideband::Usb),
            _ => None,
        }
    }
}

/// Full parameterization of the chain.
///
/// The sideband selection pulls the BFO crystal by the full VXO range on
/// top of the configured trim offset: +1.5 kHz for LSB (carrier parked at
/// the upper edge of the crystal filter, passing the lower sideband) and
/// -1.5 kHz for USB. With the difference mix `rf = if - vfo` there is no
/// spectral inversion, so the sideband passed at IF is the sideband on the
/// air. Note the receive-side convention in the literature pairs the pulls
/// the other way around; this simulator uses the transmit-side bookkeeping
/// for both directions so a round trip demodulates its own emission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransceiverConfig {
    pub bfo: OscillatorSpec,
    pub vfo: OscillatorSpec,
    pub ssb_filter: FilterSpec,
    pub bpf: FilterSpec,
    pub bpf_enabled: bool,
    pub mic_gain_db: f64,
    pub if1_gain_db: f64,
    pub if2_gain_db: f64,
    pub rf_gain_db: f64,
    pub driver_gain_db: f64,
    pub af_gain_db: f64,
    pub carrier_suppression_db: f64,
    pub sideband: Sideband,
    pub sample_rate_hz: f64,
    pub duration_s: f64,
}

impl Default for TransceiverConfig {
    /// The shipped budget: 10 MHz crystal BFO pulled +1.5 kHz, 3.2 MHz
    /// crystal VFO, oscillator levels as measured on the bench (226 and
    /// 158 mVpp), LSB, 40 MHz simulation rate. The driver gain absorbs the
    /// passive conversion and matching losses the ideal block model leaves
    /// out; its value is calibrated once against the measured output power
    /// and regression-tested.
    fn default() -> Self {
        Self {
            bfo: OscillatorSpec::new(10e6, 0.0, 0.226),
            vfo: OscillatorSpec::new(3.2e6, 0.0, 0.158),
            ssb_filter: FilterSpec {
                center_hz: 10e6,
                bandwidth_hz: 3e3,
                transition_width_hz: 300.0,
                stopband_atten_db: 60.0,
            },
            bpf: FilterSpec {
                center_hz: 6.8e6,
                bandwidth_hz: 200e3,
                transition_width_hz: 50e3,
                stopband_atten_db: 60.0,
            },
            bpf_enabled: true,
            mic_gain_db: 30.0,
            if1_gain_db: 15.0,
            if2_gain_db: 15.0,
            rf_gain_db: 10.0,
            driver_gain_db: -45.927,
            af_gain_db: 20.0,
            carrier_suppression_db: 40.0,
            sideband: Sideband::Lsb,
            sample_rate_hz: 40e6,
            duration_s: 0.025,
        }
    }
}

impl TransceiverConfig {
    /// The BFO spec actually used on the air: the configured trim plus the
    /// full VXO pull toward the filter edge selected by the sideband.
    pub fn tx_bfo(&self) -> OscillatorSpec {
        let pull = match self.sideband {
            Sideband::Lsb => VXO_PULL_LIMIT_HZ,
            Sideband::Usb => -VXO_PULL_LIMIT_HZ,
        };
        OscillatorSpec {
            offset_hz: self.bfo.offset_hz + pull,
            ..self.bfo
        }
    }

    /// Suppressed-carrier frequency of the emission:
    /// `effective BFO - effective VFO`.
    pub fn working_frequency_hz(&self) -> Result<f64> {
        working_frequency(
            effective_frequency(&self.tx_bfo()),
            effective_frequency(&self.vfo),
        )
    }

    /// Audio frequencies that survive both the mic band limit and the
    /// crystal filter: `(low, high)` in Hz, `low > high` when nothing passes.
    pub fn audio_passband_hz(&self) -> (f64, f64) {
        let bfo_eff = effective_frequency(&self.tx_bfo());
        // audio offset from the carrier that maps into the filter passband
        let o = match self.sideband {
            Sideband::Lsb => bfo_eff - self.ssb_filter.center_hz,
            Sideband::Usb => self.ssb_filter.center_hz - bfo_eff,
        };
        let lo = (o - self.ssb_filter.bandwidth_hz / 2.0).max(MIC_BAND_LOW_HZ);
        let hi = (o + self.ssb_filter.bandwidth_hz / 2.0).min(MIC_BAND_HIGH_HZ);
        (lo, hi)
    }

    /// Check every configuration invariant, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        self.bfo
            .validate()
            .map_err(|e| Error::invariant("bfo_spec_valid", e.to_string()))?;
        self.vfo
            .validate()
            .map_err(|e| Error::invariant("vfo_spec_valid", e.to_string()))?;
        if self.bfo.offset_hz.abs() > VXO_PULL_LIMIT_HZ {
            return Err(Error::invariant(
                "bfo_vxo_pull_within_limit",
                format!(
                    "BFO offset {} Hz exceeds the ±{} Hz crystal pull range",
                    self.bfo.offset_hz, VXO_PULL_LIMIT_HZ
                ),
            ));
        }
        self.ssb_filter
            .validate_for_rate(self.sample_rate_hz)
            .map_err(|e| Error::invariant("ssb_filter_spec_valid", e.to_string()))?;
        self.bpf
            .validate_for_rate(self.sample_rate_hz)
            .map_err(|e| Error::invariant("bpf_spec_valid", e.to_string()))?;
        if self.ssb_filter.center_hz != self.bfo.nominal_freq_hz {
            return Err(Error::invariant(
                "ssb_filter_center_equals_bfo_nominal",
                format!(
                    "crystal filter center {} Hz must equal the BFO crystal frequency {} Hz",
                    self.ssb_filter.center_hz, self.bfo.nominal_freq_hz
                ),
            ));
        }
        if self.ssb_filter.bandwidth_hz > 3e3 {
            return Err(Error::invariant(
                "ssb_filter_bandwidth_at_most_3khz",
                format!(
                    "SSB filter bandwidth {} Hz exceeds 3 kHz",
                    self.ssb_filter.bandwidth_hz
                ),
            ));
        }
        let working = self
            .working_frequency_hz()
            .map_err(|e| Error::invariant("frequency_plan_feasible", e.to_string()))?;
        if (self.bpf.center_hz - working).abs() > self.bpf.bandwidth_hz / 2.0 {
            return Err(Error::invariant(
                "bpf_centered_on_working_frequency",
                format!(
                    "BPF center {} Hz is more than half a bandwidth away from the \
                     working frequency {} Hz",
                    self.bpf.center_hz, working
                ),
            ));
        }
        for (gain, what) in [
            (self.mic_gain_db, "mic_gain_db"),
            (self.if1_gain_db, "if1_gain_db"),
            (self.if2_gain_db, "if2_gain_db"),
            (self.rf_gain_db, "rf_gain_db"),
            (self.driver_gain_db, "driver_gain_db"),
            (self.af_gain_db, "af_gain_db"),
        ] {
            if !gain.is_finite() {
                return Err(Error::invariant(
                    "stage_gains_finite",
                    format!("{what} must be finite, got {gain}"),
                ));
            }
        }
        // infinity is the ideal-modulator flag value, so only NaN and
        // negatives are rejected
        if self.carrier_suppression_db.is_nan() || self.carrier_suppression_db < 0.0 {
            return Err(Error::invariant(
                "carrier_suppression_non_negative",
                format!("got {} dB", self.carrier_suppression_db),
            ));
        }
        let min_rate = 4.0 * self.bfo.nominal_freq_hz.max(self.vfo.nominal_freq_hz);
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz >= min_rate) {
            return Err(Error::invariant(
                "sample_rate_at_least_4x_oscillators",
                format!(
                    "sample rate {} Hz is below 4x the fastest oscillator ({} Hz)",
                    self.sample_rate_hz, min_rate
                ),
            ));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(Error::invariant(
                "duration_positive",
                format!("got {} s", self.duration_s),
            ));
        }
        Ok(())
    }

    fn expected_len(&self) -> usize {
        (self.duration_s * self.sample_rate_hz).round().max(1.0) as usize
    }

    fn check_chain_input(&self, s: &Signal, enforce_duration: bool) -> Result<()> {
        if s.sample_rate_hz() != self.sample_rate_hz {
            return Err(Error::invariant(
                "input_rate_matches_config",
                format!(
                    "signal sampled at {} Hz, config expects {} Hz",
                    s.sample_rate_hz(),
                    self.sample_rate_hz
                ),
            ));
        }
        if enforce_duration && s.len().abs_diff(self.expected_len()) > 1 {
            return Err(Error::invariant(
                "audio_duration_matches_config",
                format!(
                    "signal holds {} samples, config duration implies {}",
                    s.len(),
                    self.expected_len()
                ),
            ));
        }
        Ok(())
    }

    fn amp(&self, gain_db: f64) -> AmplifierSpec {
        AmplifierSpec::new(gain_db, STAGE_CLIP_V)
    }
}

/// Opaque identity of one physical block instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId(u32);

impl std::fmt::Display for BlockId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "blk{:02}", self.0)
    }
}

/// Block instances and the two pipeline orders built over them.
///
/// Bidirectional kinds appear in both orders under the same instance id;
/// the detector slot in the receive order carries the SBM's instance, since
/// product detection is that same modulator running backwards.
#[derive(Debug, Clone)]
pub struct ChainRegistry {
    entries: Vec<(StageKind, BlockId)>,
    tx_order: Vec<(StageKind, BlockId)>,
    rx_order: Vec<(StageKind, BlockId)>,
}

/// Transmit pipeline order.
pub const TX_ORDER: [StageKind; 9] = [
    StageKind::MicAmp,
    StageKind::Sbm,
    StageKind::IfAmp2,
    StageKind::SsbFilter,
    StageKind::IfAmp1,
    StageKind::Dbm,
    StageKind::RfAmp,
    StageKind::DriverAmp,
    StageKind::Bpf,
];

/// Receive pipeline order.
pub const RX_ORDER: [StageKind; 8] = [
    StageKind::Bpf,
    StageKind::RfAmp,
    StageKind::Dbm,
    StageKind::IfAmp1,
    StageKind::SsbFilter,
    StageKind::IfAmp2,
    StageKind::Detector,
    StageKind::AfAmp,
];

impl ChainRegistry {
    fn new() -> Self {
        let all = [
            StageKind::MicAmp,
            StageKind::Sbm,
            StageKind::IfAmp2,
            StageKind::SsbFilter,
            StageKind::IfAmp1,
            StageKind::Dbm,
            StageKind::RfAmp,
            StageKind::DriverAmp,
            StageKind::Bpf,
            StageKind::Detector,
            StageKind::AfAmp,
        ];
        let mut entries: Vec<(StageKind, BlockId)> = Vec::with_capacity(all.len());
        let mut next = 0u32;
        for kind in all {
            let id = if kind == StageKind::Detector {
                // product detection is the SBM block running backwards
                entries
                    .iter()
                    .find(|(k, _)| *k == StageKind::Sbm)
                    .map(|(_, id)| *id)
                    .expect("SBM registered before detector")
            } else {
                let id = BlockId(next);
                next += 1;
                id
            };
            entries.push((kind, id));
        }

        let lookup = |kind: StageKind| {
            entries
                .iter()
                .find(|(k, _)| *k == kind)
                .map(|(_, id)| *id)
                .unwrap()
        };
        let tx_order = TX_ORDER.iter().map(|&k| (k, lookup(k))).collect();
        let rx_order = RX_ORDER.iter().map(|&k| (k, lookup(k))).collect();

        Self {
            entries,
            tx_order,
            rx_order,
        }
    }

    pub fn entries(&self) -> &[(StageKind, BlockId)] {
        &self.entries
    }

    pub fn tx_order(&self) -> &[(StageKind, BlockId)] {
        &self.tx_order
    }

    pub fn rx_order(&self) -> &[(StageKind, BlockId)] {
        &self.rx_order
    }

    pub fn id_of(&self, kind: StageKind) -> Option<BlockId> {
        self.entries
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(_, id)| *id)
    }

    /// Assert the block-sharing partition: shared kinds use one instance in
    /// both pipelines, and one-direction blocks never leak into the other
    /// pipeline.
    pub fn verify(&self) -> Result<()> {
        let tx_ids: Vec<BlockId> = self.tx_order.iter().map(|(_, id)| *id).collect();
        let rx_ids: Vec<BlockId> = self.rx_order.iter().map(|(_, id)| *id).collect();
        for &(kind, id) in &self.entries {
            match kind.direction() {
                Direction::Bidirectional => {
                    if !tx_ids.contains(&id) || !rx_ids.contains(&id) {
                        return Err(Error::invariant(
                            "bidirectional_block_shared",
                            format!("{} must appear in both pipelines", kind.label()),
                        ));
                    }
                }
                Direction::TxOnly => {
                    if rx_ids.contains(&id) {
                        return Err(Error::invariant(
                            "tx_block_absent_from_rx",
                            format!("{} leaked into the receive pipeline", kind.label()),
                        ));
                    }
                }
                Direction::RxOnly => {
                    // The detector is the SBM instance by design; its id is
                    // legitimately in the TX order as the SBM.
                    if kind != StageKind::Detector && tx_ids.contains(&id) {
                        return Err(Error::invariant(
                            "rx_block_absent_from_tx",
                            format!("{} leaked into the transmit pipeline", kind.label()),
                        ));
                    }
                }
            }
        }
        if self.tx_order.iter().any(|(k, _)| k.direction() == Direction::RxOnly)
            || self.rx_order.iter().any(|(k, _)| k.direction() == Direction::TxOnly)
        {
            return Err(Error::invariant(
                "pipeline_kinds_respect_direction",
                "a one-direction stage kind appeared in the opposite pipeline".to_string(),
            ));
        }
        if self.id_of(StageKind::Detector) != self.id_of(StageKind::Sbm) {
            return Err(Error::invariant(
                "detector_is_sbm_instance",
                "product detection must reuse the SBM block".to_string(),
            ));
        }
        Ok(())
    }
}

/// Validate the configuration and lay out the block registry.
pub fn build_chain(config: &TransceiverConfig) -> Result<ChainRegistry> {
    config.validate()?;
    let registry = ChainRegistry::new();
    registry.verify()?;
    Ok(registry)
}

/// Signal observed at the output of every transmit stage, in pipeline order.
#[derive(Debug, Clone)]
pub struct StageTaps {
    taps: Vec<(StageKind, Signal)>,
}

impl StageTaps {
    pub fn get(&self, kind: StageKind) -> Option<&Signal> {
        self.taps.iter().find(|(k, _)| *k == kind).map(|(_, s)| s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(StageKind, Signal)> {
        self.taps.iter()
    }

    /// The final chain output (the antenna port).
    pub fn output(&self) -> &Signal {
        &self.taps.last().expect("taps never empty").1
    }

    fn into_output(mut self) -> Signal {
        self.taps.pop().expect("taps never empty").1
    }
}

/// Run the transmit pipeline and keep the signal at every stage output.
pub fn transmit_taps(config: &TransceiverConfig, audio: &Signal) -> Result<StageTaps> {
    build_chain(config)?;
    config.check_chain_input(audio, true)?;

    let n = audio.len();
    let fs = config.sample_rate_hz;
    let bfo_sig = osc::generate_with_len(&config.tx_bfo(), n, fs)?;
    let vfo_sig = osc::generate_with_len(&config.vfo, n, fs)?;

    let mut taps = Vec::with_capacity(TX_ORDER.len());
    let mut s = mic_preamp(audio, config.mic_gain_db)?;
    taps.push((StageKind::MicAmp, s.clone()));

    s = sbm_modulate(&s, &bfo_sig, config.carrier_suppression_db)?;
    taps.push((StageKind::Sbm, s.clone()));

    s = class_a_amp(&s, &config.amp(config.if2_gain_db))?;
    taps.push((StageKind::IfAmp2, s.clone()));

    s = bandpass(&s, &config.ssb_filter)?;
    taps.push((StageKind::SsbFilter, s.clone()));

    s = class_a_amp(&s, &config.amp(config.if1_gain_db))?;
    taps.push((StageKind::IfAmp1, s.clone()));

    s = dbm_mix(&s, &vfo_sig)?;
    taps.push((StageKind::Dbm, s.clone()));

    s = class_a_amp(&s, &config.amp(config.rf_gain_db))?;
    taps.push((StageKind::RfAmp, s.clone()));

    s = class_a_amp(&s, &config.amp(config.driver_gain_db))?;
    taps.push((StageKind::DriverAmp, s.clone()));

    s = if config.bpf_enabled {
        bandpass(&s, &config.bpf)?
    } else {
        s
    };
    taps.push((StageKind::Bpf, s));

    Ok(StageTaps { taps })
}

/// Transmit: audio in, RF out.
///
/// For a single in-band audio tone the dominant line lands at
/// `working - f_audio` (LSB) or `working + f_audio` (USB), with the carrier
/// and opposite sideband suppressed per the configured SBM balance and
/// filter stopband. Out-of-band audio simply produces no dominant line; the
/// chain does not treat it as an error.
pub fn transmit(config: &TransceiverConfig, audio: &Signal) -> Result<Signal> {
    Ok(transmit_taps(config, audio)?.into_output())
}

/// Receive: RF in, audio out. The same shared blocks run in the opposite
/// order, with the SBM acting as product detector against the same BFO.
pub fn receive(config: &TransceiverConfig, rf: &Signal) -> Result<Signal> {
    build_chain(config)?;
    config.check_chain_input(rf, false)?;

    let n = rf.len();
    let fs = config.sample_rate_hz;
    let bfo_sig = osc::generate_with_len(&config.tx_bfo(), n, fs)?;
    let vfo_sig = osc::generate_with_len(&config.vfo, n, fs)?;

    let mut s = if config.bpf_enabled {
        bandpass(rf, &config.bpf)?
    } else {
        rf.clone()
    };
    s = class_a_amp(&s, &config.amp(config.rf_gain_db))?;
    s = dbm_mix(&s, &vfo_sig)?;
    s = class_a_amp(&s, &config.amp(config.if1_gain_db))?;
    s = bandpass(&s, &config.ssb_filter)?;
    s = class_a_amp(&s, &config.amp(config.if2_gain_db))?;
    s = product_detect(&s, &bfo_sig)?;
    class_a_amp(&s, &config.amp(config.af_gain_db))
}

/// Transmit and report the strongest line near each harmonic of the working
/// frequency, `n = 1..=4`, as `(n * working, power_dbm)`.
///
/// Each probe window spans the n-th harmonic image of the whole emission
/// band (`n * 3.4 kHz` plus a few bins on each side). Harmonic windows that
/// fall entirely above the spectrum range read as the display floor.
pub fn harmonic_report(
    config: &TransceiverConfig,
    audio: &Signal,
) -> Result<Vec<(f64, f64)>> {
    let tx = transmit(config, audio)?;
    let spectrum = measure_spectrum(&tx, transform_len_for(tx.len()))?;
    let working = config.working_frequency_hz()?;
    let mut report = Vec::with_capacity(4);
    for n in 1..=4u32 {
        let center = n as f64 * working;
        let half_width = n as f64 * MIC_BAND_HIGH_HZ + 5.0 * spectrum.resolution_hz();
        let lo = (center - half_width).max(0.0);
        let power = if lo > spectrum.max_freq_hz() {
            NOISE_FLOOR_DBM
        } else {
            let lo_bin = spectrum.nearest_bin(lo)?;
            let hi_bin = spectrum
                .nearest_bin((center + half_width).min(spectrum.max_freq_hz()))?;
            spectrum.peak_in_bins(lo_bin, hi_bin).1
        };
        report.push((center, power));
    }
    Ok(report)
}
