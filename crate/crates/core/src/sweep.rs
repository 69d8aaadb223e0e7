//! Model selection and distance sweeps.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::antenna::AntennaPattern;
use crate::error::{Error, Result};
use crate::geometry::Scenario;
use crate::oracle::{self, oracle_power};
use crate::raypower::{
    first_order_contributions, los_contribution, received_power_coherent,
    received_power_noncoherent, CurvePoint, PowerCurve, RayContribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// LoS plus one reflection per corridor surface.
    FiveRay,
    /// LoS plus ground reflection; open areas only.
    TwoRay,
    FreeSpace,
    /// Image-method reference up to the given reflection order.
    Oracle(u8),
}

impl Model {
    /// Rejects model/scenario combinations that make no sense.
    pub fn check(self, scenario: &Scenario) -> Result<()> {
        match self {
            Model::TwoRay if scenario.environment.is_corridor() => Err(Error::config(
                "two_ray needs an open-area scenario; use five_ray for corridors",
            )),
            Model::FiveRay if !scenario.environment.is_corridor() => Err(Error::config(
                "five_ray needs a corridor scenario; use two_ray for open areas",
            )),
            Model::Oracle(k) if usize::from(k) > oracle::MAX_ORDER => Err(Error::config(
                alloc::format!("oracle order must not exceed {}", oracle::MAX_ORDER),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::FiveRay => f.write_str("five_ray"),
            Model::TwoRay => f.write_str("two_ray"),
            Model::FreeSpace => f.write_str("free_space"),
            Model::Oracle(k) => write!(f, "oracle:{k}"),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "five_ray" => Ok(Model::FiveRay),
            "two_ray" => Ok(Model::TwoRay),
            "free_space" => Ok(Model::FreeSpace),
            _ => {
                let order = s
                    .strip_prefix("oracle:")
                    .and_then(|k| k.parse::<u8>().ok())
                    .ok_or_else(|| {
                        Error::config(alloc::format!(
                            "unknown model `{s}` (expected five_ray, two_ray, free_space or oracle:K)"
                        ))
                    })?;
                if usize::from(order) > oracle::MAX_ORDER {
                    return Err(Error::config(alloc::format!(
                        "oracle order must not exceed {}",
                        oracle::MAX_ORDER
                    )));
                }
                Ok(Model::Oracle(order))
            }
        }
    }
}

/// `start, start + step, ...` up to and including `stop` (with a small
/// tolerance so that grids like 1.9..39.7 step 0.3 keep their endpoint).
/// Points are rounded to the nanometre to drop accumulated float noise.
pub fn distance_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start > 0.0 && start.is_finite() && stop.is_finite()) {
        return Err(Error::config(
            "grid start must be positive and the stop finite",
        ));
    }
    if !(stop > start) {
        return Err(Error::config("grid stop must exceed start"));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::config("grid step must be positive"));
    }
    let count = libm::floor((stop - start) / step + 1e-9) as usize + 1;
    Ok((0..count)
        .map(|i| libm::round((start + step * i as f64) * 1e9) / 1e9)
        .collect())
}

/// Evaluates one model at one distance.
pub fn evaluate_point(
    model: Model,
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    d: f64,
) -> Result<CurvePoint> {
    model.check(scenario)?;
    let p_t = scenario.tx_power_dbm;
    let los = los_contribution(scenario, tx, rx, d)?;
    let free_space_dbm = los.power_dbm;
    let (contributions, coherent_dbm) = match model {
        Model::FreeSpace => (alloc::vec![los], free_space_dbm),
        Model::FiveRay | Model::TwoRay => {
            let cs = first_order_contributions(scenario, tx, rx, d)?;
            let p = received_power_coherent(&cs, p_t)?;
            (cs, p)
        }
        Model::Oracle(k) => {
            let result = oracle_power(scenario, tx, rx, d, usize::from(k))?;
            let cs: Vec<RayContribution> = result
                .rays
                .into_iter()
                .map(|r| RayContribution::from_field(r.ray, r.reflection_product, r.field, p_t))
                .collect();
            (cs, result.total_dbm)
        }
    };
    let noncoherent_dbm = if contributions.is_empty() {
        crate::units::Extended::NegInfinity
    } else {
        received_power_noncoherent(&contributions, p_t)?
    };
    Ok(CurvePoint {
        distance: d,
        contributions,
        coherent_dbm,
        noncoherent_dbm,
        free_space_dbm,
    })
}

/// Evaluates a model over a grid, sequentially.
pub fn sweep(
    model: Model,
    scenario: &Scenario,
    tx: &AntennaPattern,
    rx: &AntennaPattern,
    distances: &[f64],
) -> Result<PowerCurve> {
    let points = distances
        .iter()
        .map(|&d| evaluate_point(model, scenario, tx, rx, d))
        .collect::<Result<Vec<_>>>()?;
    PowerCurve::new(points)
}

/// Stable identifier for a ray in tabular output, e.g. `los`, `ground`,
/// `ground+left_wall`.
pub fn ray_label(contribution: &RayContribution) -> String {
    if contribution.ray.is_los() {
        return String::from("los");
    }
    let mut label = String::new();
    for (i, b) in contribution.ray.bounces.iter().enumerate() {
        if i > 0 {
            label.push('+');
        }
        label.push_str(b.surface.name());
    }
    label
}
