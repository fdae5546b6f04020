//! ITU radio-frequency band allocation table and classifier.
//!
//! Eight bands tile 3 kHz through 300 GHz. Printed tables overlap at the
//! decade boundaries ("3 – 30", "30 – 300"), so intervals here are half-open
//! `[low, high)`: each boundary belongs to the band that starts there.

use crate::error::{Error, Result};

/// One row of the band allocation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandInfo {
    /// Row number, 1 through 8.
    pub index: u8,
    /// Inclusive lower edge in Hz.
    pub range_low_hz: f64,
    /// Exclusive upper edge in Hz.
    pub range_high_hz: f64,
    pub band_name: &'static str,
    pub abbreviation: &'static str,
    pub utilization: &'static str,
}

/// The band allocation rows in ascending frequency order.
pub const BAND_TABLE: [BandInfo; 8] = [
    BandInfo {
        index: 1,
        range_low_hz: 3e3,
        range_high_hz: 30e3,
        band_name: "Very Low Frequency",
        abbreviation: "VLF",
        utilization: "Navigation, submarine communication",
    },
    BandInfo {
        index: 2,
        range_low_hz: 30e3,
        range_high_hz: 300e3,
        band_name: "Low Frequency",
        abbreviation: "LF",
        utilization: "Navigation, submarine communication",
    },
    BandInfo {
        index: 3,
        range_low_hz: 300e3,
        range_high_hz: 3e6,
        band_name: "Medium Frequency",
        abbreviation: "MF",
        utilization: "Maritime radio, direction radio, emergency frequency, \
                      commercial AM broadcast",
    },
    BandInfo {
        index: 4,
        range_low_hz: 3e6,
        range_high_hz: 30e6,
        band_name: "High Frequency",
        abbreviation: "HF",
        utilization: "Amateur radio, international broadcasts, long-distance ship \
                      and aircraft communications, telephone, telegram and facsimile",
    },
    BandInfo {
        index: 5,
        range_low_hz: 30e6,
        range_high_hz: 300e6,
        band_name: "Very High Frequency",
        abbreviation: "VHF",
        utilization: "TV broadcast, commercial FM broadcast, AM aircraft communication",
    },
    BandInfo {
        index: 6,
        range_low_hz: 300e6,
        range_high_hz: 3e9,
        band_name: "Ultra High Frequency",
        abbreviation: "UHF",
        utilization: "TV broadcasting, navigation, radar, microwave trajectory",
    },
    BandInfo {
        index: 7,
        range_low_hz: 3e9,
        range_high_hz: 30e9,
        band_name: "Super High Frequency",
        abbreviation: "SHF",
        utilization: "Satellite communications, radar, microwave trajectory",
    },
    BandInfo {
        index: 8,
        range_low_hz: 30e9,
        range_high_hz: 300e9,
        band_name: "Extremely High Frequency",
        abbreviation: "EHF",
        utilization: "Satellite radar, experiment and research",
    },
];

/// Classify a frequency into its allocation row.
///
/// Frequencies below 3 kHz or at/above 300 GHz are outside the table and
/// rejected.
pub fn classify_band(freq_hz: f64) -> Result<BandInfo> {
    if !freq_hz.is_finite() {
        return Err(Error::OutsideBandTable(freq_hz));
    }
    BAND_TABLE
        .iter()
        .find(|b| freq_hz >= b.range_low_hz && freq_hz < b.range_high_hz)
        .copied()
        .ok_or(Error::OutsideBandTable(freq_hz))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_megahertz_is_hf() {
        let b = classify_band(7e6).unwrap();
        assert_eq!(b.abbreviation, "HF");
        assert_eq!(b.index, 4);
        assert!(b.utilization.starts_with("Amateur radio"));
    }

    #[test]
    fn boundary_belongs_to_upper_band() {
        assert_eq!(classify_band(300e3).unwrap().abbreviation, "MF");
        assert_eq!(classify_band(30e3).unwrap().abbreviation, "LF");
        assert_eq!(classify_band(3e6).unwrap().abbreviation, "HF");
    }

    #[test]
    fn gigahertz_rows() {
        assert_eq!(classify_band(2.4e9).unwrap().abbreviation, "UHF");
        assert_eq!(classify_band(10e9).unwrap().abbreviation, "SHF");
        assert_eq!(classify_band(60e9).unwrap().abbreviation, "EHF");
    }

    #[test]
    fn out_of_table_rejected() {
        assert!(classify_band(1.0).is_err());
        assert!(classify_band(2.9e3).is_err());
        assert!(classify_band(300e9).is_err());
        assert!(classify_band(f64::NAN).is_err());
    }

    #[test]
    fn rows_tile_without_gaps() {
        assert_eq!(BAND_TABLE[0].range_low_hz, 3e3);
        assert_eq!(BAND_TABLE[7].range_high_hz, 300e9);
        for pair in BAND_TABLE.windows(2) {
            assert_eq!(pair[0].range_high_hz, pair[1].range_low_hz);
            assert_eq!(pair[0].index + 1, pair[1].index);
        }
    }
}
