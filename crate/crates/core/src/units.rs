//! Unit conversions shared by every module.
//!
//! All dB/linear conversions go through this module so that the power
//! bookkeeping stays consistent between the analytic models and the oracle.

use core::fmt;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Wavelength in metres for a carrier frequency in hertz.
pub fn wavelength(frequency_hz: f64) -> f64 {
    SPEED_OF_LIGHT / frequency_hz
}

/// Power ratio in dB to a linear ratio.
pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

/// Linear power ratio to dB. Zero maps to `-inf`.
pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * libm::log10(ratio)
}

/// Linear amplitude ratio to dB (20 log10).
pub fn amplitude_to_db(amplitude: f64) -> f64 {
    20.0 * libm::log10(amplitude)
}

pub fn dbm_to_milliwatts(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

pub fn milliwatts_to_dbm(mw: f64) -> f64 {
    linear_to_db(mw)
}

/// A real value that may legitimately be infinite.
///
/// Perfect nulls, LoS-only K-factors and z-tests with zero standard error
/// produce infinities that callers must handle explicitly, so they are kept
/// out of the `f64` domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    PosInfinity,
    NegInfinity,
}

impl Extended {
    /// Classifies an `f64`. NaN is not representable and maps to `None`.
    pub fn from_f64(value: f64) -> Option<Self> {
        if value.is_nan() {
            None
        } else if value == f64::INFINITY {
            Some(Extended::PosInfinity)
        } else if value == f64::NEG_INFINITY {
            Some(Extended::NegInfinity)
        } else {
            Some(Extended::Finite(value))
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Extended::Finite(v) => v,
            Extended::PosInfinity => f64::INFINITY,
            Extended::NegInfinity => f64::NEG_INFINITY,
        }
    }

    /// Power in dBm of a linear power in mW; zero power is the `-inf` sentinel.
    pub(crate) fn dbm_from_milliwatts(mw: f64) -> Self {
        if mw > 0.0 {
            Extended::Finite(milliwatts_to_dbm(mw))
        } else {
            Extended::NegInfinity
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => fmt::Display::fmt(v, f),
            Extended::PosInfinity => f.write_str("inf"),
            Extended::NegInfinity => f.write_str("-inf"),
        }
    }
}

/// Wraps a phase to `(-pi, pi]`.
pub fn wrap_phase(phase: f64) -> f64 {
    use core::f64::consts::{PI, TAU};
    let mut wrapped = phase % TAU;
    if wrapped < 0.0 {
        wrapped += TAU;
    }
    if wrapped > PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wavelength_at_28ghz() {
        assert!((wavelength(28e9) - 0.010_707).abs() < 1e-6);
    }

    #[test]
    fn extended_classification() {
        assert_eq!(Extended::from_f64(f64::NAN), None);
        assert_eq!(
            Extended::from_f64(f64::NEG_INFINITY),
            Some(Extended::NegInfinity)
        );
        assert_eq!(Extended::dbm_from_milliwatts(0.0), Extended::NegInfinity);
        assert_eq!(Extended::dbm_from_milliwatts(1.0), Extended::Finite(0.0));
        assert_eq!(Extended::NegInfinity.to_string(), "-inf");
    }

    proptest! {
        #[test]
        fn db_round_trip(db in -200.0f64..200.0) {
            let back = linear_to_db(db_to_linear(db));
            prop_assert!((back - db).abs() < 1e-9);
        }

        #[test]
        fn dbm_round_trip(mw in 1e-20f64..1e6) {
            let back = dbm_to_milliwatts(milliwatts_to_dbm(mw));
            prop_assert!((back - mw).abs() <= 1e-12 * mw);
        }

        #[test]
        fn wrapped_phase_is_congruent(phase in -1e5f64..1e5) {
            let w = wrap_phase(phase);
            prop_assert!(w > -core::f64::consts::PI - 1e-12 && w <= core::f64::consts::PI);
            let k = (phase - w) / core::f64::consts::TAU;
            prop_assert!((k - k.round()).abs() < 1e-9);
        }
    }
}
