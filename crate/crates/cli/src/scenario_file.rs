//! JSON scenario files.
//!
//! ```json
//! {
//!   "frequency_hz": 28e9,
//!   "environment": { "kind": "corridor", "width_m": 2.48, "height_m": 2.34, "tx_wall_offset_m": 1.24 },
//!   "tx_height_m": 1.44,
//!   "rx_height_m": 1.44,
//!   "materials": { "ground": "concrete", "ceiling": "armstrong_ceiling",
//!                  "left_wall": "drywall", "right_wall": "drywall" },
//!   "extra_materials": [ { "name": "glass", "eps_r": 6.27 } ],
//!   "tx_power_dbm": 0.0,
//!   "polarization": "VV",
//!   "resolution_m": 0.585
//! }
//! ```
//!
//! `extra_materials`, `tx_power_dbm`, `polarization` and `resolution_m` are
//! optional.

use std::collections::BTreeMap;
use std::path::Path;

use corridor_rays_core::geometry::{LinkPolarization, SurfaceMaterials, DEFAULT_RESOLUTION_M};
use corridor_rays_core::{Environment, Material, MaterialDb, Scenario, Surface};
use serde::{Deserialize, Serialize};

use crate::error::{config_err, CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub frequency_hz: f64,
    pub environment: EnvironmentSpec,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
    /// Surface name to material name.
    pub materials: BTreeMap<Surface, String>,
    #[serde(default)]
    pub extra_materials: Vec<Material>,
    #[serde(default)]
    pub tx_power_dbm: f64,
    #[serde(default = "default_polarization")]
    pub polarization: LinkPolarization,
    #[serde(default = "default_resolution")]
    pub resolution_m: f64,
}

fn default_polarization() -> LinkPolarization {
    LinkPolarization::VV
}

fn default_resolution() -> f64 {
    DEFAULT_RESOLUTION_M
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    Corridor {
        width_m: f64,
        height_m: f64,
        tx_wall_offset_m: f64,
    },
    OpenArea,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Config(CliError::read(path, e)))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(CliError::read(path, e)))
    }

    /// Resolves material names against `db` (plus `extra_materials`) and
    /// validates the result.
    pub fn to_scenario(&self, db: &MaterialDb) -> CliResult<Scenario> {
        let mut db = db.clone();
        for m in &self.extra_materials {
            db.insert(Material::new(m.name.clone(), m.eps_r).map_err(config_err)?);
        }
        let environment = match self.environment {
            EnvironmentSpec::Corridor {
                width_m,
                height_m,
                tx_wall_offset_m,
            } => Environment::Corridor {
                width: width_m,
                height: height_m,
                wall_offset: tx_wall_offset_m,
            },
            EnvironmentSpec::OpenArea => Environment::OpenArea,
        };
        let mut materials = SurfaceMaterials::default();
        for (&surface, name) in &self.materials {
            if !environment.surfaces().contains(&surface) {
                return Err(CliError::config(format!(
                    "surface {} does not exist in this environment",
                    surface.name()
                )));
            }
            materials.set(surface, db.get(name).map_err(config_err)?.clone());
        }
        let scenario = Scenario {
            frequency_hz: self.frequency_hz,
            environment,
            tx_height: self.tx_height_m,
            rx_height: self.rx_height_m,
            materials,
            tx_power_dbm: self.tx_power_dbm,
            polarization: self.polarization,
            resolution_m: self.resolution_m,
        };
        scenario.validate().map_err(config_err)?;
        Ok(scenario)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INDOOR: &str = include_str!("../scenarios/indoor_ncsu.json");
    const OUTDOOR: &str = include_str!("../scenarios/outdoor_carpark.json");

    #[test]
    fn shipped_scenarios_match_references() {
        let db = MaterialDb::builtin();
        let indoor: ScenarioFile = serde_json::from_str(INDOOR).unwrap();
        assert_eq!(
            indoor.to_scenario(&db).unwrap(),
            Scenario::indoor_reference()
        );
        let outdoor: ScenarioFile = serde_json::from_str(OUTDOOR).unwrap();
        assert_eq!(
            outdoor.to_scenario(&db).unwrap(),
            Scenario::outdoor_reference()
        );
    }

    #[test]
    fn unknown_material_is_config_error() {
        let mut f: ScenarioFile = serde_json::from_str(INDOOR).unwrap();
        f.materials.insert(Surface::Ground, "marble".into());
        assert!(matches!(
            f.to_scenario(&MaterialDb::builtin()),
            Err(CliError::Config(_))
        ));
    }

    #[test]
    fn extra_materials_are_usable() {
        let mut f: ScenarioFile = serde_json::from_str(INDOOR).unwrap();
        f.extra_materials.push(Material {
            name: "glass".into(),
            eps_r: 6.27,
        });
        f.materials.insert(Surface::LeftWall, "glass".into());
        let s = f.to_scenario(&MaterialDb::builtin()).unwrap();
        assert_eq!(s.materials.get(Surface::LeftWall).unwrap().eps_r, 6.27);
    }

    #[test]
    fn walls_rejected_in_open_area() {
        let mut f: ScenarioFile = serde_json::from_str(OUTDOOR).unwrap();
        f.materials.insert(Surface::LeftWall, "drywall".into());
        assert!(f.to_scenario(&MaterialDb::builtin()).is_err());
    }
}
