//! Antenna pattern arguments given on the command line.
//!
//! * `horn17`, `horn23`, `isotropic`
//! * `gaussian:GAIN_DBI,HPBW_AZ_DEG,HPBW_EL_DEG[,FLOOR_DB]`
//! * `csv:GAIN_DBI,AZIMUTH.csv,ELEVATION.csv`, each file with an
//!   `angle_deg,gain_db` header and relative gains in dB.

use std::path::Path;

use corridor_rays_core::antenna::{synthesize_gaussian_pattern, PatternCut, DEFAULT_FLOOR_DB};
use corridor_rays_core::AntennaPattern;
use serde::Deserialize;

use crate::error::{config_err, CliError, CliResult};

pub fn parse_pattern(arg: &str) -> CliResult<AntennaPattern> {
    match arg {
        "horn17" => return Ok(AntennaPattern::horn_17dbi()),
        "horn23" => return Ok(AntennaPattern::horn_23dbi()),
        "isotropic" => return Ok(AntennaPattern::isotropic()),
        _ => {}
    }
    if let Some(rest) = arg.strip_prefix("gaussian:") {
        let values = rest
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::config(format!("pattern `{arg}`: {e}")))?;
        let (gain, az, el, floor) = match values[..] {
            [g, az, el] => (g, az, el, DEFAULT_FLOOR_DB),
            [g, az, el, floor] => (g, az, el, floor),
            _ => {
                return Err(CliError::config(format!(
                    "pattern `{arg}`: expected gaussian:GAIN,AZ_DEG,EL_DEG[,FLOOR_DB]"
                )))
            }
        };
        return synthesize_gaussian_pattern(gain, az.to_radians(), el.to_radians(), floor)
            .map_err(config_err);
    }
    if let Some(rest) = arg.strip_prefix("csv:") {
        let parts: Vec<&str> = rest.splitn(3, ',').collect();
        let [gain, az, el] = parts[..] else {
            return Err(CliError::config(format!(
                "pattern `{arg}`: expected csv:GAIN,AZIMUTH.csv,ELEVATION.csv"
            )));
        };
        let gain: f64 = gain
            .trim()
            .parse()
            .map_err(|e| CliError::config(format!("pattern `{arg}`: {e}")))?;
        let azimuth = read_cut(Path::new(az))?;
        let elevation = read_cut(Path::new(el))?;
        return AntennaPattern::from_cuts(gain, azimuth, elevation).map_err(config_err);
    }
    Err(CliError::config(format!(
        "unknown pattern `{arg}` (expected horn17, horn23, isotropic, gaussian:... or csv:...)"
    )))
}

#[derive(Deserialize)]
struct CutRow {
    angle_deg: f64,
    gain_db: f64,
}

/// Reads one `angle_deg,gain_db` pattern cut.
pub fn read_cut(path: &Path) -> CliResult<PatternCut> {
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| CliError::Config(CliError::read(path, e)))?;
    let mut rows = Vec::new();
    for (i, row) in reader.deserialize::<CutRow>().enumerate() {
        let row =
            row.map_err(|e| CliError::config(format!("{} line {}: {e}", path.display(), i + 2)))?;
        rows.push((row.angle_deg, row.gain_db));
    }
    PatternCut::from_degrees(&rows)
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))
}
