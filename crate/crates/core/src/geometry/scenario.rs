use crate::error::{Error, Result};
use crate::reflection::{FieldPolarization, Material, MaterialDb};

use super::Surface;

/// Default spatial resolution of the channel sounder, metres.
pub const DEFAULT_RESOLUTION_M: f64 = 0.585;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Environment {
    /// Rectangular corridor, infinite along the link axis. Transmitter and
    /// receiver share the same lateral offset from the left wall.
    Corridor {
        width: f64,
        height: f64,
        wall_offset: f64,
    },
    /// Flat ground only.
    OpenArea,
}

impl Environment {
    pub fn surfaces(&self) -> &'static [Surface] {
        match self {
            Environment::Corridor { .. } => &Surface::ALL,
            Environment::OpenArea => &[Surface::Ground],
        }
    }

    pub fn is_corridor(&self) -> bool {
        matches!(self, Environment::Corridor { .. })
    }
}

/// Antenna orientation pair at the two ends of the link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LinkPolarization {
    VV,
    HH,
    VH,
}

impl LinkPolarization {
    /// Polarization fed to the reflection formula. The label applies to
    /// every surface. Cross-polarised links have no field-level model.
    pub fn field_polarization(self) -> Result<FieldPolarization> {
        match self {
            LinkPolarization::VV => Ok(FieldPolarization::Vertical),
            LinkPolarization::HH => Ok(FieldPolarization::Horizontal),
            LinkPolarization::VH => Err(Error::invalid(
                "VH links have no field-level model; compare VV/HH and VH measurements with xpd_factor",
            )),
        }
    }
}

/// Material assignment per surface.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurfaceMaterials {
    slots: [Option<Material>; 4],
}

impl SurfaceMaterials {
    pub fn set(&mut self, surface: Surface, material: Material) {
        self.slots[surface.index()] = Some(material);
    }

    pub fn with(mut self, surface: Surface, material: Material) -> Self {
        self.set(surface, material);
        self
    }

    pub fn get(&self, surface: Surface) -> Option<&Material> {
        self.slots[surface.index()].as_ref()
    }

    pub fn require(&self, surface: Surface) -> Result<&Material> {
        self.get(surface).ok_or_else(|| {
            Error::config(alloc::format!(
                "no material configured for {}",
                surface.name()
            ))
        })
    }
}

/// Everything that defines one run: geometry, terminals, materials, carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub frequency_hz: f64,
    pub environment: Environment,
    pub tx_height: f64,
    pub rx_height: f64,
    pub materials: SurfaceMaterials,
    pub tx_power_dbm: f64,
    pub polarization: LinkPolarization,
    /// Path-length difference below which two rays merge, metres.
    pub resolution_m: f64,
}

impl Scenario {
    /// The basement corridor: 2.48 m wide (antennas 1.24 m from either
    /// wall), 2.34 m high (1.44 m above ground, 0.9 m below the ceiling),
    /// concrete floor, Armstrong ceiling, drywall sides, 28 GHz, VV, 0 dBm.
    pub fn indoor_reference() -> Self {
        let db = MaterialDb::builtin();
        let get = |name: &str| db.get(name).expect("builtin material").clone();
        Scenario {
            frequency_hz: 28e9,
            environment: Environment::Corridor {
                width: 2.48,
                height: 2.34,
                wall_offset: 1.24,
            },
            tx_height: 1.44,
            rx_height: 1.44,
            materials: SurfaceMaterials::default()
                .with(Surface::Ground, get("concrete"))
                .with(Surface::Ceiling, get("armstrong_ceiling"))
                .with(Surface::LeftWall, get("drywall"))
                .with(Surface::RightWall, get("drywall")),
            tx_power_dbm: 0.0,
            polarization: LinkPolarization::VV,
            resolution_m: DEFAULT_RESOLUTION_M,
        }
    }

    /// The open car-park roof: 1.09 m antenna height over concrete.
    pub fn outdoor_reference() -> Self {
        let db = MaterialDb::builtin();
        Scenario {
            frequency_hz: 28e9,
            environment: Environment::OpenArea,
            tx_height: 1.09,
            rx_height: 1.09,
            materials: SurfaceMaterials::default().with(
                Surface::Ground,
                db.get("concrete").expect("builtin").clone(),
            ),
            tx_power_dbm: 0.0,
            polarization: LinkPolarization::VV,
            resolution_m: DEFAULT_RESOLUTION_M,
        }
    }

    pub fn wavelength(&self) -> f64 {
        crate::units::wavelength(self.frequency_hz)
    }

    /// Checks the geometric and material invariants.
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(alloc::format!(
                    "{what} must be positive and finite"
                )))
            }
        };
        positive(self.frequency_hz, "frequency")?;
        positive(self.tx_height, "tx_height")?;
        positive(self.rx_height, "rx_height")?;
        positive(self.resolution_m, "resolution")?;
        if !self.tx_power_dbm.is_finite() {
            return Err(Error::config("tx_power must be finite"));
        }
        if let Environment::Corridor {
            width,
            height,
            wall_offset,
        } = self.environment
        {
            positive(width, "corridor_width")?;
            positive(height, "corridor_height")?;
            positive(wall_offset, "tx_wall_offset")?;
            if self.tx_height >= height || self.rx_height >= height {
                return Err(Error::config("antenna heights must be below the ceiling"));
            }
            if wall_offset >= width {
                return Err(Error::config(
                    "wall offset must be smaller than the corridor width",
                ));
            }
        }
        for &surface in self.environment.surfaces() {
            self.materials.require(surface)?;
        }
        Ok(())
    }

    /// Lateral position of both terminals (`y`); zero in the open area.
    pub(crate) fn lateral_position(&self) -> f64 {
        match self.environment {
            Environment::Corridor { wall_offset, .. } => wall_offset,
            Environment::OpenArea => 0.0,
        }
    }

    /// Separation between a terminal and the other terminal's mirror image
    /// across `surface`, measured normal to the surface.
    pub fn mirror_separation(&self, surface: Surface) -> Result<f64> {
        match (self.environment, surface) {
            (_, Surface::Ground) => Ok(self.tx_height + self.rx_height),
            (Environment::Corridor { height, .. }, Surface::Ceiling) => {
                Ok((height - self.tx_height) + (height - self.rx_height))
            }
            (Environment::Corridor { wall_offset, .. }, Surface::LeftWall) => Ok(2.0 * wall_offset),
            (
                Environment::Corridor {
                    width, wall_offset, ..
                },
                Surface::RightWall,
            ) => Ok(2.0 * (width - wall_offset)),
            (Environment::OpenArea, s) => Err(Error::config(alloc::format!(
                "open area has no {}",
                s.name()
            ))),
        }
    }
}
