//! Subcommand implementations. Each returns the text to print on stdout.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use corridor_rays_core::oracle::oracle_power;
use corridor_rays_core::raypower::{k_factor, xpd_factor, PowerCurve, RayContribution};
use corridor_rays_core::reflection::{fresnel_gamma, FieldPolarization};
use corridor_rays_core::stats::{ecdf, fit_alpha_beta, rejects_equality, z_test, Coefficient};
use corridor_rays_core::sweep::{distance_grid, evaluate_point};
use corridor_rays_core::{AntennaPattern, MaterialDb, Model, Scenario};
use rayon::prelude::*;

use crate::error::{config_err, data_err, CliError, CliResult};
use crate::formats::{
    fit_json, read_fit, read_materials, read_power_series, sweep_csv, write_atomic,
};
use crate::pattern_arg::parse_pattern;
use crate::scenario_file::ScenarioFile;

pub const THREADS_ENV: &str = "CORRIDOR_RAYS_THREADS";

/// Rayon pool sized by `CORRIDOR_RAYS_THREADS` when set.
pub fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
            CliError::config(format!(
                "{THREADS_ENV} must be a positive integer, got `{raw}`"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(CliError::config)
}

pub fn material_db(extra: Option<&Path>) -> CliResult<MaterialDb> {
    let mut db = MaterialDb::builtin();
    if let Some(path) = extra {
        read_materials(path, &mut db)?;
    }
    Ok(db)
}

pub struct Link {
    pub scenario: Scenario,
    pub tx: AntennaPattern,
    pub rx: AntennaPattern,
}

pub fn load_link(scenario: &Path, materials: Option<&Path>, tx: &str, rx: &str) -> CliResult<Link> {
    let db = material_db(materials)?;
    Ok(Link {
        scenario: ScenarioFile::load(scenario)?.to_scenario(&db)?,
        tx: parse_pattern(tx)?,
        rx: parse_pattern(rx)?,
    })
}

pub struct Grid {
    pub dmin: f64,
    pub dmax: f64,
    pub dstep: f64,
}

impl Grid {
    fn distances(&self) -> CliResult<Vec<f64>> {
        distance_grid(self.dmin, self.dmax, self.dstep).map_err(config_err)
    }
}

pub struct SimulateArgs {
    pub link: Link,
    pub model: String,
    pub grid: Grid,
    pub out: PathBuf,
    pub fit_out: Option<PathBuf>,
}

pub fn simulate(args: SimulateArgs) -> CliResult<String> {
    let Link { scenario, tx, rx } = args.link;
    let model: Model = args.model.parse().map_err(config_err)?;
    model.check(&scenario).map_err(config_err)?;
    let distances = args.grid.distances()?;
    let points = thread_pool()?.install(|| {
        distances
            .par_iter()
            .map(|&d| evaluate_point(model, &scenario, &tx, &rx, d))
            .collect::<Result<Vec<_>, _>>()
    });
    let curve = PowerCurve::new(points.map_err(config_err)?).map_err(config_err)?;
    write_atomic(&args.out, &sweep_csv(&curve)?)?;

    let (d, p) = curve.finite_coherent();
    let fit = fit_alpha_beta(&d, &p).map_err(data_err)?;
    let json = fit_json(&fit);
    if let Some(path) = &args.fit_out {
        write_atomic(path, json.as_bytes())?;
    }
    Ok(json)
}

pub fn fit(input: &Path, out: Option<&Path>) -> CliResult<String> {
    let series = read_power_series(input)?;
    let fit = fit_alpha_beta(&series.distances, &series.powers_dbm).map_err(data_err)?;
    let json = fit_json(&fit);
    if let Some(path) = out {
        write_atomic(path, json.as_bytes())?;
    }
    Ok(json)
}

pub fn ztest(a: &Path, b: &Path) -> CliResult<String> {
    let (fa, fb) = (read_fit(a)?, read_fit(b)?);
    let mut report = String::new();
    for (name, which) in [
        ("slope", Coefficient::Slope),
        ("intercept", Coefficient::Intercept),
    ] {
        let z = z_test(&fa, &fb, which);
        let decision = if rejects_equality(z) {
            "reject"
        } else {
            "keep"
        };
        writeln!(report, "{name}: z = {z}, {decision}").unwrap();
    }
    Ok(report)
}

pub struct VerifyArgs {
    pub link: Link,
    pub max_order: usize,
    pub grid: Grid,
    pub check_from: f64,
    pub top: usize,
    pub threshold: f64,
}

pub struct VerifyReport {
    pub text: String,
    pub pass: bool,
}

pub fn verify(args: VerifyArgs) -> CliResult<VerifyReport> {
    let Link { scenario, tx, rx } = args.link;
    let distances = args.grid.distances()?;
    let rows = thread_pool()?.install(|| {
        distances
            .par_iter()
            .map(|&d| -> CliResult<(f64, f64, f64, usize, usize)> {
                let result =
                    oracle_power(&scenario, &tx, &rx, d, args.max_order).map_err(config_err)?;
                let fraction = result.top_fraction(args.top).map_err(data_err)?;
                let contributions: Vec<RayContribution> = result
                    .rays
                    .iter()
                    .map(|r| {
                        RayContribution::from_field(
                            r.ray.clone(),
                            r.reflection_product,
                            r.field,
                            scenario.tx_power_dbm,
                        )
                    })
                    .collect();
                let k = k_factor(&contributions).map_err(data_err)?.to_f64();
                Ok((d, fraction, k, result.rays.len(), result.dropped))
            })
            .collect::<CliResult<Vec<_>>>()
    })?;

    let mut text = String::from("distance_m,top_fraction,k_factor_db,rays,dropped\n");
    let mut worst: Option<(f64, f64)> = None;
    for &(d, fraction, k, n, dropped) in &rows {
        writeln!(text, "{d},{fraction},{k},{n},{dropped}").unwrap();
        if d >= args.check_from && worst.is_none_or(|(_, f)| fraction < f) {
            worst = Some((d, fraction));
        }
    }
    let k_samples: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let cdf = ecdf(&k_samples).map_err(data_err)?;
    text.push_str("k_factor_db,cdf\n");
    for (v, p) in cdf.values().iter().zip(cdf.probabilities()) {
        writeln!(text, "{v},{p}").unwrap();
    }
    let pass = match worst {
        Some((d, f)) => {
            let verdict = if f >= args.threshold { "PASS" } else { "FAIL" };
            writeln!(
                text,
                "{verdict}: minimum top-{} fraction {f:.4} at {d} m (threshold {}, d >= {} m)",
                args.top, args.threshold, args.check_from
            )
            .unwrap();
            f >= args.threshold
        }
        None => {
            writeln!(
                text,
                "FAIL: no grid point at or beyond {} m",
                args.check_from
            )
            .unwrap();
            false
        }
    };
    Ok(VerifyReport { text, pass })
}

pub fn fresnel(material: &str, materials: Option<&Path>, step_deg: f64) -> CliResult<String> {
    let db = material_db(materials)?;
    let m = db.get(material).map_err(config_err)?;
    if !(step_deg > 0.0 && step_deg <= 90.0) {
        return Err(CliError::config("step must lie in (0, 90] degrees"));
    }
    let mut out = String::from("psi_deg,gamma_vertical,gamma_horizontal\n");
    let n = (90.0 / step_deg + 1e-9).floor() as usize;
    for i in 1..=n {
        let psi_deg = step_deg * i as f64;
        let psi = psi_deg.to_radians().min(std::f64::consts::FRAC_PI_2);
        let gv = fresnel_gamma(m, psi, FieldPolarization::Vertical).map_err(config_err)?;
        let gh = fresnel_gamma(m, psi, FieldPolarization::Horizontal).map_err(config_err)?;
        writeln!(out, "{psi_deg},{gv},{gh}").unwrap();
    }
    Ok(out)
}

pub fn xpd(copol: &Path, crosspol: &Path) -> CliResult<String> {
    let co = read_power_series(copol)?;
    let cross = read_power_series(crosspol)?;
    if co.distances != cross.distances {
        return Err(CliError::data(
            "co- and cross-polar files must share the same distances",
        ));
    }
    let x = xpd_factor(&co.powers_dbm, &cross.powers_dbm).map_err(data_err)?;
    Ok(format!("xpd_db = {x}\n"))
}
