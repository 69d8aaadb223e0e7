//! Fresnel reflection off lossless dielectric surfaces.
//!
//! Angles here are **grazing** angles: measured from the surface plane, so
//! `psi -> 0` is skimming incidence and `psi = pi/2` is normal incidence.
//!
//! With `Y_v = sqrt(eps_r - cos^2 psi) / eps_r` and
//! `Y_h = sqrt(eps_r - cos^2 psi)`, the coefficient is
//! `(sin psi - Y) / (sin psi + Y)`. Note the vertical form divides by
//! `eps_r`, not by `sqrt(eps_r)`; the pseudo-Brewster angle of that form is
//! `asin(1 / sqrt(eps_r + 1))`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// A named dielectric with real relative permittivity.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Material {
    pub name: String,
    pub eps_r: f64,
}

impl Material {
    pub fn new(name: impl Into<String>, eps_r: f64) -> Result<Self> {
        if !(eps_r > 1.0) || !eps_r.is_finite() {
            return Err(Error::invalid(
                "relative permittivity must be finite and > 1",
            ));
        }
        Ok(Material {
            name: name.into(),
            eps_r,
        })
    }
}

/// Field orientation relative to the plane of incidence, as used by the
/// reflection formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldPolarization {
    Vertical,
    Horizontal,
}

/// Reflection coefficient at grazing angle `psi` (radians, `0 < psi <= pi/2`).
pub fn fresnel_gamma(material: &Material, psi: f64, pol: FieldPolarization) -> Result<f64> {
    if !(psi > 0.0 && psi <= FRAC_PI_2) {
        return Err(Error::invalid("grazing angle must lie in (0, pi/2]"));
    }
    let eps = material.eps_r;
    let sin_psi = libm::sin(psi);
    let cos_psi = libm::cos(psi);
    let root = libm::sqrt(eps - cos_psi * cos_psi);
    let y = match pol {
        FieldPolarization::Vertical => root / eps,
        FieldPolarization::Horizontal => root,
    };
    Ok((sin_psi - y) / (sin_psi + y))
}

/// Grazing angle at which the vertical coefficient vanishes.
pub fn pseudo_brewster_angle(material: &Material) -> f64 {
    libm::asin(1.0 / libm::sqrt(material.eps_r + 1.0))
}

/// Name-indexed material table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaterialDb {
    entries: BTreeMap<String, Material>,
}

impl MaterialDb {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Built-in 28 GHz permittivities for the surfaces of the reference
    /// corridor and car park.
    pub fn builtin() -> Self {
        let mut db = Self::empty();
        for (name, eps) in [
            ("concrete", 5.31),
            ("armstrong_ceiling", 3.0),
            ("drywall", 2.94),
        ] {
            db.entries.insert(
                name.to_string(),
                Material {
                    name: name.to_string(),
                    eps_r: eps,
                },
            );
        }
        db
    }

    pub fn insert(&mut self, material: Material) {
        self.entries.insert(material.name.clone(), material);
    }

    pub fn get(&self, name: &str) -> Result<&Material> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::config(alloc::format!("unknown material `{name}`")))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Material> {
        self.entries.values()
    }
}

/// Built-in material database.
pub fn material_db() -> MaterialDb {
    MaterialDb::builtin()
}
