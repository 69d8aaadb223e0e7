//! Received power from a handful of specular rays.
//!
//! Each ray contributes a narrowband field
//!
//! `a_i exp(j phi_i)`, with `a_i = lambda |Gamma_i| sqrt(G_T G_R) / (4 pi d_i)`
//! and `phi_i = -2 pi d_i / lambda (+ pi when Gamma_i < 0)`,
//!
//! relative to a unit transmit amplitude. Polarization dot products are
//! taken as 1 (co-polarised links), the transmit waveform is assumed slowly
//! varying over the ray delays, and the channel is deterministic at every
//! distance, so the time average reduces to the instantaneous value.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::antenna::{combined_amplitude_gain, AntennaPattern};
use crate::error::{Error, Result};
use crate::geometry::{self, trace_first_order, ImagePoint, Ray, Scenario};
use crate::reflection::fresnel_gamma;
use crate::units::{amplitude_to_db, dbm_to_milliwatts, linear_to_db, wrap_phase, Extended};

/// Coherent sums smaller than this fraction of the summed magnitudes are
/// reported as a perfect null. Wrapped phases carry ~1e-13 rad of rounding,
/// so nothing finer is meaningful.
pub const NULL_TOLERANCE: f64 = 1e-12;

/// Field and power carried by one ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RayContribution {
    pub ray: Ray,
    /// Product of the reflection coefficients along the ray; 1 for LoS.
    pub reflection_coefficient: f64,
    /// Field amplitude relative to a unit transmit amplitude (>= 0).
    pub amplitude: f64,
    /// Phase in `(-pi, pi]`, including a `pi` offset for negative coefficients.
    pub phase: f64,
    /// Power this ray alone would deliver.
    pub power_dbm: Extended,
}

impl RayContribution {
    fn new(
        ray: Ray,
        reflection_coefficient: f64,
        amplitude_gain: f64,
        wavelength: f64,
        tx_power_dbm: f64,
    ) -> Self {
        let amplitude = wavelength * libm::fabs(reflection_coefficient) * amplitude_gain
            / (4.0 * PI * ray.length);
        let sign_offset = if reflection_coefficient < 0.0 {
            PI
        } else {
            0.0
        };
        let phase = wrap_phase(-2.0 * PI * ray.length / wavelength + sign_offset);
        let power_dbm = power_from_amplitude(amplitude, tx_power_dbm);
        RayContribution {
            ray,
            reflection_coefficient,
            amplitude,
            phase,
            power_dbm,
        }
    }

    /// Builds a contribution from an already-evaluated complex field.
    pub fn from_field(
        ray: Ray,
        reflection_coefficient: f64,
        field: Complex64,
        tx_power_dbm: f64,
    ) -> Self {
        let amplitude = field.norm();
        RayContribution {
            ray,
            reflection_coefficient,
            amplitude,
            phase: field.arg(),
            power_dbm: power_from_amplitude(amplitude, tx_power_dbm),
        }
    }

    pub fn field(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }

    /// Propagation delay, seconds.
    pub fn delay(&self) -> f64 {
        self.ray.delay()
    }
}

fn power_from_amplitude(amplitude: f64, tx_power_dbm: f64) -> Extended {
    if amplitude > 0.0 {
        Extended::Finite(tx_power_dbm + amplitude_to_db(amplitude))
    } else {
        Extended::NegInfinity
    }
}

/// Line-of-sight contribution at link distance `d`.
pub fn los_contribution(
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    d: f64,
) -> Result<RayContribution> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::invalid("link distance must be positive and finite"));
    }
    scenario.validate()?;
    let ray = geometry::trace_image(scenario, ImagePoint::SOURCE, d);
    let gain = combined_amplitude_gain(tx, rx, &ray)?;
    Ok(RayContribution::new(
        ray,
        1.0,
        gain,
        scenario.wavelength(),
        scenario.tx_power_dbm,
    ))
}

/// Contribution of a single-bounce ray.
pub fn reflected_contribution(
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    ray: &Ray,
) -> Result<RayContribution> {
    let (surface, psi) = match (ray.surface(), ray.grazing_angle()) {
        (Some(s), Some(psi)) => (s, psi),
        _ => {
            return Err(Error::invalid(
                "reflected_contribution expects a single-bounce ray",
            ))
        }
    };
    let material = scenario.materials.require(surface)?;
    let gamma = fresnel_gamma(material, psi, scenario.polarization.field_polarization()?)?;
    let gain = combined_amplitude_gain(tx, rx, ray)?;
    Ok(RayContribution::new(
        ray.clone(),
        gamma,
        gain,
        scenario.wavelength(),
        scenario.tx_power_dbm,
    ))
}

/// LoS plus all single-bounce contributions at distance `d`.
pub fn first_order_contributions(
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    d: f64,
) -> Result<Vec<RayContribution>> {
    let rays = trace_first_order(scenario, d)?;
    let mut out = Vec::with_capacity(rays.len());
    let mut iter = rays.into_iter();
    let los = iter.next().expect("LoS ray is always traced");
    let gain = combined_amplitude_gain(tx, rx, &los)?;
    out.push(RayContribution::new(
        los,
        1.0,
        gain,
        scenario.wavelength(),
        scenario.tx_power_dbm,
    ));
    for ray in iter {
        out.push(reflected_contribution(scenario, tx, rx, &ray)?);
    }
    Ok(out)
}

fn non_empty(contributions: &[RayContribution]) -> Result<()> {
    if contributions.is_empty() {
        Err(Error::invalid("no ray contributions"))
    } else {
        Ok(())
    }
}

/// `P_T + 20 log10 |sum a_i exp(j phi_i)|`.
pub fn received_power_coherent(
    contributions: &[RayContribution],
    tx_power_dbm: f64,
) -> Result<Extended> {
    non_empty(contributions)?;
    let sum: Complex64 = contributions.iter().map(RayContribution::field).sum();
    let scale: f64 = contributions.iter().map(|c| c.amplitude).sum();
    let magnitude = sum.norm();
    if magnitude <= NULL_TOLERANCE * scale || magnitude == 0.0 {
        return Ok(Extended::NegInfinity);
    }
    Ok(Extended::Finite(tx_power_dbm + amplitude_to_db(magnitude)))
}

/// `P_T + 10 log10 sum a_i^2`: rays added in power, valid when resolvable.
pub fn received_power_noncoherent(
    contributions: &[RayContribution],
    tx_power_dbm: f64,
) -> Result<Extended> {
    non_empty(contributions)?;
    let total: f64 = contributions
        .iter()
        .map(|c| c.amplitude * c.amplitude)
        .sum();
    if total > 0.0 {
        Ok(Extended::Finite(tx_power_dbm + linear_to_db(total)))
    } else {
        Ok(Extended::NegInfinity)
    }
}

/// Single-ray (Friis) reference at distance `d`.
pub fn free_space_power(
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    d: f64,
) -> Result<Extended> {
    let los = los_contribution(scenario, tx, rx, d)?;
    Ok(los.power_dbm)
}

/// The terms of the two-ray expression, kept separate so the phase
/// difference can be varied independently of geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoRayTerms {
    pub wavelength: f64,
    pub los_length: f64,
    pub reflected_length: f64,
    pub los_gain: f64,
    pub reflected_gain: f64,
    pub gamma: f64,
}

impl TwoRayTerms {
    /// `2 pi (d_1 - d) / lambda`.
    pub fn phase_difference(&self) -> f64 {
        2.0 * PI * (self.reflected_length - self.los_length) / self.wavelength
    }

    /// `P_T (lambda/4pi)^2 |g_0/d_0 + Gamma g_1 exp(-j dw)/d_1|^2` in dBm.
    pub fn power_dbm(&self, tx_power_dbm: f64, phase_difference: f64) -> Extended {
        let los = Complex64::new(self.los_gain / self.los_length, 0.0);
        let reflected = Complex64::from_polar(
            self.gamma * self.reflected_gain / self.reflected_length,
            -phase_difference,
        );
        let magnitude = (los + reflected).norm() * self.wavelength / (4.0 * PI);
        power_from_amplitude(magnitude, tx_power_dbm)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoRayPower {
    pub power_dbm: Extended,
    pub phase_difference: f64,
    pub terms: TwoRayTerms,
    pub contributions: Vec<RayContribution>,
}

/// LoS plus ground reflection over open ground.
pub fn two_ray_power(
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    d: f64,
) -> Result<TwoRayPower> {
    if scenario.environment.is_corridor() {
        return Err(Error::invalid(
            "two-ray model applies to open areas; use the five-ray model",
        ));
    }
    let contributions = first_order_contributions(scenario, tx, rx, d)?;
    let power_dbm = received_power_coherent(&contributions, scenario.tx_power_dbm)?;
    let (los, ground) = (&contributions[0], &contributions[1]);
    let terms = TwoRayTerms {
        wavelength: scenario.wavelength(),
        los_length: los.ray.length,
        reflected_length: ground.ray.length,
        los_gain: combined_amplitude_gain(tx, rx, &los.ray)?,
        reflected_gain: combined_amplitude_gain(tx, rx, &ground.ray)?,
        gamma: ground.reflection_coefficient,
    };
    Ok(TwoRayPower {
        power_dbm,
        phase_difference: terms.phase_difference(),
        terms,
        contributions,
    })
}

/// Power of one ray on its own, evaluated term by term in dB:
/// `P_T + 20 log10(lambda / 4 pi d_i) + 20 log10 |Gamma| + G_T + G_R`.
pub fn individual_ray_power(
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    ray: &Ray,
) -> Result<Extended> {
    let gamma = match ray.order() {
        0 => 1.0,
        1 => {
            let surface = ray.surface().expect("single bounce");
            let material = scenario.materials.require(surface)?;
            fresnel_gamma(
                material,
                ray.grazing_angle().expect("single bounce"),
                scenario.polarization.field_polarization()?,
            )?
        }
        _ => {
            return Err(Error::invalid(
                "individual_ray_power expects a LoS or single-bounce ray",
            ))
        }
    };
    if gamma == 0.0 {
        return Ok(Extended::NegInfinity);
    }
    let g_t = tx.gain_dbi(ray.departure.theta, ray.departure.phi)?;
    let g_r = rx.gain_dbi(ray.arrival.theta, ray.arrival.phi)?;
    Ok(Extended::Finite(
        scenario.tx_power_dbm
            + amplitude_to_db(scenario.wavelength() / (4.0 * PI * ray.length))
            + amplitude_to_db(libm::fabs(gamma))
            + g_t
            + g_r,
    ))
}

/// Cross-polarization discrimination: the mean of the linear co/cross power
/// ratio over a common distance grid, in dB.
pub fn xpd_factor(copol_dbm: &[f64], crosspol_dbm: &[f64]) -> Result<f64> {
    if copol_dbm.len() != crosspol_dbm.len() {
        return Err(Error::invalid(
            "co- and cross-polar series differ in length",
        ));
    }
    if copol_dbm.is_empty() {
        return Err(Error::invalid("empty power series"));
    }
    if copol_dbm.iter().chain(crosspol_dbm).any(|p| !p.is_finite()) {
        return Err(Error::invalid("power series must be finite"));
    }
    let mean = copol_dbm
        .iter()
        .zip(crosspol_dbm)
        .map(|(co, cross)| dbm_to_milliwatts(co - cross))
        .sum::<f64>()
        / copol_dbm.len() as f64;
    Ok(linear_to_db(mean))
}

/// Rician K-factor: LoS power over the summed power of all other rays, dB.
pub fn k_factor(contributions: &[RayContribution]) -> Result<Extended> {
    let mut los = None;
    let mut diffuse = 0.0;
    for c in contributions {
        if c.ray.is_los() {
            if los.is_some() {
                return Err(Error::invalid("more than one LoS contribution"));
            }
            los = Some(c.amplitude * c.amplitude);
        } else {
            diffuse += c.amplitude * c.amplitude;
        }
    }
    let los = los.ok_or_else(|| Error::invalid("no LoS contribution"))?;
    Ok(if los == 0.0 {
        Extended::NegInfinity
    } else if diffuse == 0.0 {
        Extended::PosInfinity
    } else {
        Extended::Finite(linear_to_db(los / diffuse))
    })
}

/// Share of the total power carried by the `k` strongest rays.
pub fn dominant_power_fraction(powers: &[f64], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if powers.is_empty() {
        return Err(Error::invalid("no ray powers"));
    }
    if powers.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::invalid("ray powers must be finite and non-negative"));
    }
    let total: f64 = powers.iter().sum();
    if total == 0.0 {
        return Err(Error::invalid("all ray powers are zero"));
    }
    if powers.len() <= k {
        return Ok(1.0);
    }
    let mut sorted = powers.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    Ok(sorted[..k].iter().sum::<f64>() / total)
}

/// Received power versus distance for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerCurve {
    points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub distance: f64,
    pub contributions: Vec<RayContribution>,
    pub coherent_dbm: Extended,
    pub noncoherent_dbm: Extended,
    pub free_space_dbm: Extended,
}

impl PowerCurve {
    /// Assembles a curve; distances must be strictly increasing.
    pub fn new(points: Vec<CurvePoint>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1].distance > w[0].distance)) {
            return Err(Error::invalid(
                "curve distances must be strictly increasing",
            ));
        }
        Ok(PowerCurve { points })
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    pub fn distances(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.distance)
    }

    pub fn coherent(&self) -> impl Iterator<Item = Extended> + '_ {
        self.points.iter().map(|p| p.coherent_dbm)
    }

    /// `(distance, coherent dBm)` pairs with finite power, ready for fitting.
    pub fn finite_coherent(&self) -> (Vec<f64>, Vec<f64>) {
        self.points
            .iter()
            .filter_map(|p| p.coherent_dbm.finite().map(|v| (p.distance, v)))
            .unzip()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
