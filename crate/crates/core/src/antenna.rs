//! Horn antenna radiation patterns.
//!
//! A pattern is stored as two boresight-normalised cuts (azimuth and
//! elevation, relative gain in dB) plus the boresight gain. The full pattern
//! is approximated as separable:
//!
//! `G(theta, phi) = G0 + g_az(phi) + g_el(theta - pi/2)` (all in dB)
//!
//! where `theta` is the polar angle from zenith (so `pi/2` is the horizon)
//! and `phi` the azimuth from boresight. Between samples the cuts are
//! interpolated linearly in dB. Pattern phase is taken as zero; ray phase is
//! carried entirely by path length.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::Ray;
use crate::units::db_to_linear;

/// Sample spacing used by the synthetic pattern constructor.
pub const SYNTHETIC_STEP_DEG: f64 = 0.1;

/// Side-lobe floor of the synthetic horn presets, dB.
pub const DEFAULT_FLOOR_DB: f64 = -40.0;

const NORMALISATION_TOL_DB: f64 = 1e-9;

/// One sampled pattern cut: angle (rad) to relative gain (dB).
#[derive(Debug, Clone, PartialEq)]
pub struct PatternCut {
    angles: Vec<f64>,
    gains_db: Vec<f64>,
}

impl PatternCut {
    /// Builds a cut from radian samples. Angles must be strictly increasing,
    /// gains must not exceed 0 dB and the cut must read 0 dB at boresight.
    pub fn new(angles: Vec<f64>, gains_db: Vec<f64>) -> Result<Self> {
        if angles.len() != gains_db.len() {
            return Err(Error::invalid("angle and gain sample counts differ"));
        }
        if angles.len() < 2 {
            return Err(Error::invalid("a pattern cut needs at least two samples"));
        }
        if angles.iter().chain(gains_db.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid("pattern samples must be finite"));
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("pattern angles must be strictly increasing"));
        }
        if gains_db.iter().any(|&g| g > NORMALISATION_TOL_DB) {
            return Err(Error::invalid("relative gains must not exceed 0 dB"));
        }
        let cut = PatternCut { angles, gains_db };
        match cut.relative_gain_db(0.0) {
            Ok(g) if g.abs() <= NORMALISATION_TOL_DB => Ok(cut),
            Ok(_) => Err(Error::invalid("pattern cut is not 0 dB at boresight")),
            Err(_) => Err(Error::invalid("pattern cut does not cover boresight")),
        }
    }

    /// Builds a cut from `(angle_deg, relative_gain_db)` rows.
    pub fn from_degrees(rows: &[(f64, f64)]) -> Result<Self> {
        let angles = rows.iter().map(|&(a, _)| a.to_radians()).collect();
        let gains = rows.iter().map(|&(_, g)| g).collect();
        Self::new(angles, gains)
    }

    /// Flat 0 dB cut over `[-pi, pi]`.
    pub fn flat() -> Self {
        PatternCut {
            angles: alloc::vec![-PI, 0.0, PI],
            gains_db: alloc::vec![0.0, 0.0, 0.0],
        }
    }

    pub fn support(&self) -> (f64, f64) {
        (self.angles[0], self.angles[self.angles.len() - 1])
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.angles
            .iter()
            .copied()
            .zip(self.gains_db.iter().copied())
    }

    /// Relative gain in dB, linearly interpolated. Never extrapolates.
    pub fn relative_gain_db(&self, angle: f64) -> Result<f64> {
        let (min, max) = self.support();
        if !(angle >= min && angle <= max) {
            return Err(Error::OutOfRange { angle, min, max });
        }
        let idx = self.angles.partition_point(|&a| a < angle);
        if self.angles[idx] == angle {
            return Ok(self.gains_db[idx]);
        }
        let (a0, a1) = (self.angles[idx - 1], self.angles[idx]);
        let (g0, g1) = (self.gains_db[idx - 1], self.gains_db[idx]);
        let t = (angle - a0) / (a1 - a0);
        Ok(g0 + t * (g1 - g0))
    }

    /// Width between the first -3 dB crossings either side of boresight.
    /// A side that never drops 3 dB contributes its full support.
    fn half_power_width(&self) -> f64 {
        let zero = self.angles.partition_point(|&a| a < 0.0);
        let crossing = |i: usize, j: usize| {
            let (a0, a1) = (self.angles[i], self.angles[j]);
            let (g0, g1) = (self.gains_db[i], self.gains_db[j]);
            a0 + (-3.0 - g0) / (g1 - g0) * (a1 - a0)
        };
        let mut right = self.support().1;
        for j in zero.max(1)..self.angles.len() {
            if self.gains_db[j] <= -3.0 && self.angles[j] > 0.0 {
                right = crossing(j - 1, j);
                break;
            }
        }
        let mut left = self.support().0;
        for i in (0..zero.min(self.angles.len() - 1)).rev() {
            if self.gains_db[i] <= -3.0 && self.angles[i] < 0.0 {
                left = crossing(i + 1, i);
                break;
            }
        }
        right - left
    }
}

/// A horn antenna pattern with separable azimuth and elevation cuts.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaPattern {
    boresight_gain_dbi: f64,
    azimuth: PatternCut,
    elevation: PatternCut,
    hpbw_az: f64,
    hpbw_el: f64,
}

impl AntennaPattern {
    /// Pattern from measured cuts; beamwidths are read off the -3 dB points.
    pub fn from_cuts(
        boresight_gain_dbi: f64,
        azimuth: PatternCut,
        elevation: PatternCut,
    ) -> Result<Self> {
        if !boresight_gain_dbi.is_finite() {
            return Err(Error::invalid("boresight gain must be finite"));
        }
        let hpbw_az = azimuth.half_power_width();
        let hpbw_el = elevation.half_power_width();
        Ok(AntennaPattern {
            boresight_gain_dbi,
            azimuth,
            elevation,
            hpbw_az,
            hpbw_el,
        })
    }

    /// 0 dBi everywhere.
    pub fn isotropic() -> Self {
        AntennaPattern::from_cuts(0.0, PatternCut::flat(), PatternCut::flat())
            .expect("flat cuts are valid")
    }

    /// 17 dBi horn, 26 deg azimuth and 24 deg elevation half-power beamwidth.
    pub fn horn_17dbi() -> Self {
        synthesize_gaussian_pattern(
            17.0,
            26f64.to_radians(),
            24f64.to_radians(),
            DEFAULT_FLOOR_DB,
        )
        .expect("preset parameters are valid")
    }

    /// 23 dBi horn, 11 deg azimuth and 9.6 deg elevation half-power beamwidth.
    pub fn horn_23dbi() -> Self {
        synthesize_gaussian_pattern(
            23.0,
            11f64.to_radians(),
            9.6f64.to_radians(),
            DEFAULT_FLOOR_DB,
        )
        .expect("preset parameters are valid")
    }

    pub fn boresight_gain_dbi(&self) -> f64 {
        self.boresight_gain_dbi
    }

    pub fn hpbw_az(&self) -> f64 {
        self.hpbw_az
    }

    pub fn hpbw_el(&self) -> f64 {
        self.hpbw_el
    }

    pub fn azimuth_cut(&self) -> &PatternCut {
        &self.azimuth
    }

    pub fn elevation_cut(&self) -> &PatternCut {
        &self.elevation
    }

    /// Gain in dBi towards polar angle `theta` and azimuth `phi`.
    pub fn gain_dbi(&self, theta: f64, phi: f64) -> Result<f64> {
        let az = self.azimuth.relative_gain_db(phi)?;
        let el = self.elevation.relative_gain_db(theta - FRAC_PI_2)?;
        Ok(self.boresight_gain_dbi + az + el)
    }

    /// Linear power gain towards `(theta, phi)`.
    pub fn gain(&self, theta: f64, phi: f64) -> Result<f64> {
        Ok(db_to_linear(self.gain_dbi(theta, phi)?))
    }
}

/// Gaussian-beam stand-in for a datasheet horn pattern.
///
/// Each cut follows `max(-3 (2x / hpbw)^2, floor)` dB, sampled every
/// [`SYNTHETIC_STEP_DEG`] over the full circle.
pub fn synthesize_gaussian_pattern(
    boresight_gain_dbi: f64,
    hpbw_az: f64,
    hpbw_el: f64,
    floor_db: f64,
) -> Result<AntennaPattern> {
    for hpbw in [hpbw_az, hpbw_el] {
        if !(hpbw > 0.0 && hpbw < PI) {
            return Err(Error::invalid("half-power beamwidth must lie in (0, pi)"));
        }
    }
    if !(floor_db < -3.0) {
        return Err(Error::invalid("side-lobe floor must be below -3 dB"));
    }
    if !boresight_gain_dbi.is_finite() {
        return Err(Error::invalid("boresight gain must be finite"));
    }
    Ok(AntennaPattern {
        boresight_gain_dbi,
        azimuth: gaussian_cut(hpbw_az, floor_db),
        elevation: gaussian_cut(hpbw_el, floor_db),
        hpbw_az,
        hpbw_el,
    })
}

/// Relative gain of the Gaussian beam law, before sampling.
pub fn gaussian_relative_gain_db(angle: f64, hpbw: f64, floor_db: f64) -> f64 {
    let u = 2.0 * angle / hpbw;
    let g = -3.0 * u * u;
    if g < floor_db {
        floor_db
    } else {
        g
    }
}

fn gaussian_cut(hpbw: f64, floor_db: f64) -> PatternCut {
    let half = libm::round(180.0 / SYNTHETIC_STEP_DEG) as i64;
    let angles: Vec<f64> = (-half..=half)
        .map(|i| match i {
            i if i == -half => -PI,
            i if i == half => PI,
            i => (i as f64 * SYNTHETIC_STEP_DEG).to_radians(),
        })
        .collect();
    let gains_db = angles
        .iter()
        .map(|&a| gaussian_relative_gain_db(a, hpbw, floor_db))
        .collect();
    PatternCut { angles, gains_db }
}

/// Amplitude gain `sqrt(G_T(dod) G_R(doa))` of a ray.
///
/// Co-polarised links only: with zero pattern phase the two-component gain
/// sum reduces to this product.
pub fn combined_amplitude_gain(tx: &AntennaPattern, rx: &AntennaPattern, ray: &Ray) -> Result<f64> {
    let g_t = tx.gain(ray.departure.theta, ray.departure.phi)?;
    let g_r = rx.gain(ray.arrival.theta, ray.arrival.phi)?;
    Ok(libm::sqrt(g_t * g_r))
}

/// Area of the half-power footprint at distance `d`: `d^2 * hpbw_el * hpbw_az`.
pub fn half_power_area(pattern: &AntennaPattern, d: f64) -> f64 {
    d * d * pattern.hpbw_el * pattern.hpbw_az
}
