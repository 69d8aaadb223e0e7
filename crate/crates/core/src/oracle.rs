//! Brute-force image-method reference.
//!
//! Every transmitter image reachable with up to [`MAX_ORDER`] reflections is
//! enumerated, traced to the receiver and summed as a complex field with the
//! full product of per-bounce reflection coefficients. Nothing here reuses
//! the five-ray arithmetic, so it serves as an independent check of it.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::geometry::{trace_image, ImagePoint, Ray, Scenario, Surface};
use crate::reflection::fresnel_gamma;
use crate::units::{dbm_to_milliwatts, Extended};

pub const MAX_ORDER: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ImageSource {
    pub image: ImagePoint,
    pub position: [f64; 3],
    /// Surfaces in the order the wave meets them.
    pub surface_sequence: Vec<Surface>,
}

impl ImageSource {
    pub fn order(&self) -> usize {
        self.surface_sequence.len()
    }
}

/// All distinct images up to `max_order` reflections, ordered by reflection
/// count. Order 0 is the transmitter; the order-1 images follow the surface
/// order ground, ceiling, left wall, right wall.
pub fn enumerate_images(scenario: &Scenario, max_order: usize) -> Result<Vec<ImageSource>> {
    check_order(max_order)?;
    scenario.validate()?;
    let surfaces = scenario.environment.surfaces();

    let mut seen = BTreeSet::new();
    seen.insert(ImagePoint::SOURCE);
    // (image, last mirror applied)
    let mut frontier: Vec<(ImagePoint, Option<Surface>)> = alloc::vec![(ImagePoint::SOURCE, None)];
    let mut images = alloc::vec![ImagePoint::SOURCE];
    for _ in 0..max_order {
        let mut next = Vec::new();
        for &(image, last) in &frontier {
            for &surface in surfaces {
                if Some(surface) == last {
                    continue;
                }
                let child = image.mirrored(surface);
                if seen.insert(child) {
                    next.push((child, Some(surface)));
                    images.push(child);
                }
            }
        }
        frontier = next;
    }

    Ok(images
        .into_iter()
        .map(|image| {
            // The bounce sequence does not depend on the link distance.
            let ray = trace_image(scenario, image, 1.0);
            ImageSource {
                image,
                position: image.position(scenario),
                surface_sequence: ray.bounces.iter().map(|b| b.surface).collect(),
            }
        })
        .collect())
}

fn check_order(max_order: usize) -> Result<()> {
    if max_order > MAX_ORDER {
        return Err(Error::invalid(alloc::format!(
            "max_order must not exceed {MAX_ORDER}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRay {
    pub ray: Ray,
    /// Product of the per-bounce reflection coefficients.
    pub reflection_product: f64,
    /// Complex field relative to a unit transmit amplitude.
    pub field: Complex64,
    /// Power this ray alone would deliver, mW.
    pub power_mw: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub total_dbm: Extended,
    pub rays: Vec<OracleRay>,
    /// Rays discarded because they left the sampled pattern support.
    pub dropped: usize,
}

impl OracleResult {
    pub fn ray_powers_mw(&self) -> Vec<f64> {
        self.rays.iter().map(|r| r.power_mw).collect()
    }

    /// Share of the summed per-ray power carried by the `k` strongest rays.
    pub fn top_fraction(&self, k: usize) -> Result<f64> {
        crate::raypower::dominant_power_fraction(&self.ray_powers_mw(), k)
    }
}

/// Coherent received power from every image up to `max_order`.
pub fn oracle_power(
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    d: f64,
    max_order: usize,
) -> Result<OracleResult> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::invalid("link distance must be positive and finite"));
    }
    let images = enumerate_images(scenario, max_order)?;
    let pol = if images.len() > 1 {
        Some(scenario.polarization.field_polarization()?)
    } else {
        None
    };
    let lambda = scenario.wavelength();
    let tx_mw = dbm_to_milliwatts(scenario.tx_power_dbm);

    let mut rays = Vec::with_capacity(images.len());
    let mut dropped = 0;
    let mut total = Complex64::new(0.0, 0.0);
    for source in &images {
        let ray = trace_image(scenario, source.image, d);
        let mut product = 1.0;
        for bounce in &ray.bounces {
            let material = scenario.materials.require(bounce.surface)?;
            product *= fresnel_gamma(
                material,
                bounce.grazing_angle,
                pol.expect("reflected rays need a polarization"),
            )?;
        }
        let gains = tx
            .gain(ray.departure.theta, ray.departure.phi)
            .and_then(|gt| Ok(gt * rx.gain(ray.arrival.theta, ray.arrival.phi)?));
        let gain = match gains {
            Ok(g) => g,
            Err(Error::OutOfRange { .. }) => {
                dropped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let magnitude = lambda / (4.0 * PI * ray.length) * libm::sqrt(gain) * product;
        let field = Complex64::new(0.0, -2.0 * PI * ray.length / lambda).exp() * magnitude;
        total += field;
        rays.push(OracleRay {
            power_mw: tx_mw * field.norm_sqr(),
            ray,
            reflection_product: product,
            field,
        });
    }
    let total_mw = tx_mw * total.norm_sqr();
    Ok(OracleResult {
        total_dbm: Extended::dbm_from_milliwatts(total_mw),
        rays,
        dropped,
    })
}
