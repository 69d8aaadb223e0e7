//! CSV and JSON file formats.

use std::io::Write;
use std::path::Path;

use corridor_rays_core::raypower::PowerCurve;
use corridor_rays_core::stats::PathLossFit;
use corridor_rays_core::sweep::ray_label;
use corridor_rays_core::{Material, MaterialDb};

use crate::error::{CliError, CliResult};

/// Writes `bytes` to a temporary file next to `path`, then renames it into
/// place so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Reads a `name,eps_r` CSV into `db`, replacing same-named entries.
pub fn read_materials(path: &Path, db: &mut MaterialDb) -> CliResult<()> {
    #[derive(serde::Deserialize)]
    struct Row {
        name: String,
        eps_r: f64,
    }
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| CliError::Config(CliError::read(path, e)))?;
    for (i, row) in reader.deserialize::<Row>().enumerate() {
        let line = i + 2;
        let row =
            row.map_err(|e| CliError::config(format!("{} line {line}: {e}", path.display())))?;
        let m = Material::new(row.name, row.eps_r)
            .map_err(|e| CliError::config(format!("{} line {line}: {e}", path.display())))?;
        db.insert(m);
    }
    Ok(())
}

/// Distance/power pairs read from a measurement or sweep file.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub distances: Vec<f64>,
    pub powers_dbm: Vec<f64>,
    /// Rows whose power was `-inf` (perfect nulls), excluded from the series.
    pub skipped_nulls: usize,
}

/// Reads `distance_m,power_dbm` rows, or the `total` rows of a sweep file
/// (`distance_m`, `power_coherent_dbm`).
pub fn read_power_series(path: &Path) -> CliResult<PowerSeries> {
    let data = |line: usize, msg: &dyn std::fmt::Display| {
        CliError::data(format!("{} line {line}: {msg}", path.display()))
    };
    let mut reader =
        csv::Reader::from_path(path).map_err(|e| CliError::Data(CliError::read(path, e)))?;
    let headers = reader.headers().map_err(|e| data(1, &e))?.clone();
    let column = |name: &str| headers.iter().position(|h| h.trim() == name);
    let distance_col =
        column("distance_m").ok_or_else(|| data(1, &"missing `distance_m` column"))?;
    let ray_col = column("ray_id");
    let power_col = if ray_col.is_some() {
        column("power_coherent_dbm")
    } else {
        column("power_dbm")
    }
    .ok_or_else(|| data(1, &"missing `power_dbm` column"))?;

    let mut series = PowerSeries {
        distances: Vec::new(),
        powers_dbm: Vec::new(),
        skipped_nulls: 0,
    };
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| data(line, &e))?;
        if let Some(c) = ray_col {
            if record.get(c).map(str::trim) != Some("total") {
                continue;
            }
        }
        let field = |c: usize, what: &str| -> CliResult<f64> {
            let raw = record
                .get(c)
                .ok_or_else(|| data(line, &format!("missing {what}")))?
                .trim();
            raw.parse::<f64>()
                .map_err(|_| data(line, &format!("invalid {what} `{raw}`")))
        };
        let d = field(distance_col, "distance")?;
        let p = field(power_col, "power")?;
        if !(d > 0.0 && d.is_finite()) {
            return Err(data(line, &format!("distance must be positive, got {d}")));
        }
        if p == f64::NEG_INFINITY {
            series.skipped_nulls += 1;
            continue;
        }
        if !p.is_finite() {
            return Err(data(line, &format!("invalid power {p}")));
        }
        series.distances.push(d);
        series.powers_dbm.push(p);
    }
    Ok(series)
}

pub const SWEEP_HEADER: [&str; 17] = [
    "distance_m",
    "power_coherent_dbm",
    "power_noncoherent_dbm",
    "freespace_dbm",
    "ray_id",
    "ray_power_dbm",
    "ray_label",
    "order",
    "length_m",
    "delay_ns",
    "amplitude",
    "phase_rad",
    "reflection_coefficient",
    "dod_theta_deg",
    "dod_phi_deg",
    "doa_theta_deg",
    "doa_phi_deg",
];

/// Long-format sweep table: per distance one `total` row followed by one
/// row per ray. Floats use shortest round-trip formatting; nulls are `-inf`.
pub fn sweep_csv(curve: &PowerCurve) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(SWEEP_HEADER).map_err(err)?;
    for point in curve.points() {
        let common = [
            point.distance.to_string(),
            point.coherent_dbm.to_string(),
            point.noncoherent_dbm.to_string(),
            point.free_space_dbm.to_string(),
        ];
        let mut total: Vec<String> = common.to_vec();
        total.push("total".into());
        total.push(point.coherent_dbm.to_string());
        total.extend(std::iter::repeat_n(
            String::new(),
            SWEEP_HEADER.len() - total.len(),
        ));
        w.write_record(&total).map_err(err)?;
        for (id, c) in point.contributions.iter().enumerate() {
            let mut row: Vec<String> = common.to_vec();
            row.extend([
                id.to_string(),
                c.power_dbm.to_string(),
                ray_label(c),
                c.ray.order().to_string(),
                c.ray.length.to_string(),
                (c.delay() * 1e9).to_string(),
                c.amplitude.to_string(),
                c.phase.to_string(),
                c.reflection_coefficient.to_string(),
                c.ray.departure.theta.to_degrees().to_string(),
                c.ray.departure.phi.to_degrees().to_string(),
                c.ray.arrival.theta.to_degrees().to_string(),
                c.ray.arrival.phi.to_degrees().to_string(),
            ]);
            w.write_record(&row).map_err(err)?;
        }
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

pub fn fit_json(fit: &PathLossFit) -> String {
    serde_json::to_string_pretty(fit).expect("fit serializes") + "\n"
}

pub fn read_fit(path: &Path) -> CliResult<PathLossFit> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Data(CliError::read(path, e)))?;
    let fit: PathLossFit =
        serde_json::from_str(&text).map_err(|e| CliError::Data(CliError::read(path, e)))?;
    if !(fit.sigma >= 0.0 && fit.se_alpha >= 0.0 && fit.se_beta >= 0.0 && fit.n >= 3) {
        return Err(CliError::data(format!(
            "{}: sigma and standard errors must be non-negative and n >= 3",
            path.display()
        )));
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.txt");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn measurement_rows_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, "distance_m,power_dbm\n1,-60\n2,-inf\n3,-70\n").unwrap();
        let s = read_power_series(&path).unwrap();
        assert_eq!(s.distances, [1.0, 3.0]);
        assert_eq!(s.skipped_nulls, 1);

        std::fs::write(&path, "distance_m,power_dbm\n1,-60\n2,abc\n").unwrap();
        let e = read_power_series(&path).unwrap_err();
        assert!(matches!(e, CliError::Data(_)));
        assert!(e.to_string().contains("line 3"), "{e}");

        std::fs::write(&path, "distance_m,power_dbm\n0,-60\n").unwrap();
        assert!(read_power_series(&path)
            .unwrap_err()
            .to_string()
            .contains("line 2"));

        std::fs::write(&path, "d,p\n1,2\n").unwrap();
        assert!(read_power_series(&path).is_err());
    }

    #[test]
    fn materials_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mat.csv");
        std::fs::write(&path, "name,eps_r\nglass,6.27\nconcrete,5.5\n").unwrap();
        let mut db = MaterialDb::builtin();
        read_materials(&path, &mut db).unwrap();
        assert_eq!(db.get("glass").unwrap().eps_r, 6.27);
        assert_eq!(db.get("concrete").unwrap().eps_r, 5.5);
        std::fs::write(&path, "name,eps_r\nfoam,0.5\n").unwrap();
        let e = read_materials(&path, &mut db).unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }

    #[test]
    fn fit_json_round_trip() {
        let fit = PathLossFit {
            alpha: -1.26,
            beta: -42.64,
            sigma: 3.4,
            se_alpha: 0.1,
            se_beta: 1.2,
            n: 127,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fit.json");
        std::fs::write(&path, fit_json(&fit)).unwrap();
        assert_eq!(read_fit(&path).unwrap(), fit);
        std::fs::write(&path, r#"{"alpha": 1.0}"#).unwrap();
        assert!(matches!(read_fit(&path), Err(CliError::Data(_))));
    }
}
