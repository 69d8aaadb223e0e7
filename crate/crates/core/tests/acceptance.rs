//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use corridor_rays_core::antenna::AntennaPattern;
use corridor_rays_core::geometry::{trace_first_order, LinkPolarization, Scenario};
use corridor_rays_core::oracle::oracle_power;
use corridor_rays_core::raypower::{
    first_order_contributions, free_space_power, k_factor, received_power_coherent, two_ray_power,
};
use corridor_rays_core::reflection::{
    fresnel_gamma, material_db, pseudo_brewster_angle, FieldPolarization,
};
use corridor_rays_core::stats::{
    ecdf, fit_alpha_beta, rejects_equality, z_test, Coefficient, PathLossFit,
};
use corridor_rays_core::sweep::{distance_grid, sweep, Model};
use corridor_rays_core::Extended;
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn indoor_grid() -> Vec<f64> {
    distance_grid(1.9, 39.7, 0.3).unwrap()
}

fn outdoor_grid() -> Vec<f64> {
    distance_grid(4.6, 100.0, 5.0).unwrap()
}

fn fit_model(
    model: Model,
    scenario: &Scenario,
    pattern: &AntennaPattern,
    grid: &[f64],
) -> PathLossFit {
    let curve = sweep(model, scenario, pattern, pattern, grid).unwrap();
    let (d, p) = curve.finite_coherent();
    fit_alpha_beta(&d, &p).unwrap()
}

fn fresnel_suite() -> Outcome {
    let start = Instant::now();
    let db = material_db();
    let pols = [FieldPolarization::Vertical, FieldPolarization::Horizontal];
    let skim = 0.01f64.to_radians();
    let mut worst_skim: f64 = 0.0;
    let mut worst_root: f64 = 0.0;
    let mut max_mag: f64 = 0.0;
    for m in db.iter() {
        for pol in pols {
            worst_skim = worst_skim.max((fresnel_gamma(m, skim, pol).unwrap() + 1.0).abs());
        }
        // Bisection root of the vertical coefficient.
        let f = |psi: f64| fresnel_gamma(m, psi, FieldPolarization::Vertical).unwrap();
        let (mut lo, mut hi) = (1e-9, FRAC_PI_2);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        worst_root = worst_root.max((0.5 * (lo + hi) - pseudo_brewster_angle(m)).abs());
        for i in 1..=10_000 {
            let psi = FRAC_PI_2 * i as f64 / 10_000.0;
            for pol in pols {
                max_mag = max_mag.max(fresnel_gamma(m, psi, pol).unwrap().abs());
            }
        }
    }
    let concrete = pseudo_brewster_angle(db.get("concrete").unwrap()).to_degrees();
    let elapsed = start.elapsed();
    outcome(
        worst_skim < 1e-3
            && worst_root < 1e-9
            && max_mag <= 1.0
            && elapsed < Duration::from_secs(1),
        format!(
            "max|G+1| at 0.01 deg = {worst_skim:.2e}, Brewster root error = {worst_root:.1e} rad \
             (concrete {concrete:.3} deg), max|G| = {max_mag:.6}, {elapsed:.2?}"
        ),
    )
}

fn free_space_anchors() -> Outcome {
    let s = Scenario::indoor_reference();
    let iso = AntennaPattern::isotropic();
    let p = free_space_power(&s, &iso, &iso, 1.0).unwrap().to_f64();
    let exact = 20.0 * (s.wavelength() / (4.0 * std::f64::consts::PI)).log10();
    let fit = fit_model(Model::FreeSpace, &s, &iso, &indoor_grid());
    outcome(
        (p - exact).abs() < 1e-9 && (p + 61.41).abs() < 0.025 && (fit.alpha + 2.0).abs() < 1e-6,
        format!(
            "P(1 m) = {p:.4} dBm (reference -61.41), free-space slope = {:.9}",
            fit.alpha
        ),
    )
}

fn two_ray_asymptote() -> Outcome {
    let s = Scenario::outdoor_reference();
    let iso = AntennaPattern::isotropic();
    let h = s.tx_height;
    let far: Vec<f64> = (0..=200)
        .map(|i| h * 10f64.powf(4.0 + i as f64 / 200.0))
        .collect();
    let power = |d: f64| two_ray_power(&s, &iso, &iso, d).unwrap().power_dbm.to_f64();
    let y: Vec<f64> = far.iter().map(|&d| power(d)).collect();
    let slope = fit_alpha_beta(&far, &y).unwrap().alpha;

    let mut crossings = 0;
    let mut previous: Option<bool> = None;
    let mut d = 4.6;
    while d <= 100.0 {
        let above = power(d) > free_space_power(&s, &iso, &iso, d).unwrap().to_f64();
        if previous.is_some_and(|p| p != above) {
            crossings += 1;
        }
        previous = Some(above);
        d += 0.01;
    }
    outcome(
        (slope + 4.0).abs() < 0.05 && crossings >= 3,
        format!("far-field slope = {slope:.4}, free-space crossings over 4.6-100 m = {crossings}"),
    )
}

fn outdoor_slope() -> Outcome {
    let s = Scenario::outdoor_reference();
    let fit = fit_model(
        Model::TwoRay,
        &s,
        &AntennaPattern::horn_17dbi(),
        &outdoor_grid(),
    );
    outcome(
        (-2.2..=-1.85).contains(&fit.alpha),
        format!(
            "two-ray 17 dBi alpha = {:.4} (target [-2.2, -1.85])",
            fit.alpha
        ),
    )
}

fn corridor_ordering() -> Outcome {
    let s = Scenario::indoor_reference();
    let grid = indoor_grid();
    let a17 = fit_model(Model::FiveRay, &s, &AntennaPattern::horn_17dbi(), &grid);
    let a23 = fit_model(Model::FiveRay, &s, &AntennaPattern::horn_23dbi(), &grid);
    outcome(
        a17.alpha.abs() < a23.alpha.abs() && a23.alpha.abs() < 2.0,
        format!(
            "alpha 17 dBi = {:.4} (beta {:.2}, sigma {:.2}), alpha 23 dBi = {:.4} (beta {:.2}, sigma {:.2})",
            a17.alpha, a17.beta, a17.sigma, a23.alpha, a23.beta, a23.sigma
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let s = Scenario::indoor_reference();
    let mut worst: f64 = 0.0;
    let mut traces_equal = true;
    for pattern in [
        AntennaPattern::horn_17dbi(),
        AntennaPattern::horn_23dbi(),
        AntennaPattern::isotropic(),
    ] {
        for d in indoor_grid() {
            let five = first_order_contributions(&s, &pattern, &pattern, d).unwrap();
            let p5 = received_power_coherent(&five, s.tx_power_dbm)
                .unwrap()
                .to_f64();
            let oracle = oracle_power(&s, &pattern, &pattern, d, 1).unwrap();
            worst = worst.max((p5 - oracle.total_dbm.to_f64()).abs());
            let rays: Vec<_> = oracle.rays.into_iter().map(|r| r.ray).collect();
            traces_equal &= rays == trace_first_order(&s, d).unwrap();
        }
    }
    outcome(
        worst < 1e-9 && traces_equal,
        format!(
            "max |five-ray - oracle(1)| = {worst:.2e} dB, order-1 traces identical: {traces_equal}"
        ),
    )
}

fn five_ray_sufficiency() -> Outcome {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, pattern) in [
        ("17 dBi", AntennaPattern::horn_17dbi()),
        ("23 dBi", AntennaPattern::horn_23dbi()),
    ] {
        for pol in [LinkPolarization::VV, LinkPolarization::HH] {
            let mut s = Scenario::indoor_reference();
            s.polarization = pol;
            let mut min = f64::INFINITY;
            let mut at = 0.0;
            for d in indoor_grid().into_iter().filter(|d| *d >= 10.0) {
                let fraction = oracle_power(&s, &pattern, &pattern, d, 3)
                    .unwrap()
                    .top_fraction(5)
                    .unwrap();
                if fraction < min {
                    min = fraction;
                    at = d;
                }
            }
            pass &= min >= 0.90;
            parts.push(format!("{name} {pol:?} min {min:.3} at {at:.1} m"));
        }
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(30);
    outcome(
        pass,
        format!(
            "top-5 fraction, order 3, d >= 10 m: {}; {elapsed:.2?}",
            parts.join(", ")
        ),
    )
}

fn regression_suite() -> Outcome {
    let grid = indoor_grid();
    let y: Vec<f64> = grid.iter().map(|d| -61.41 - 20.0 * d.log10()).collect();
    let clean = fit_alpha_beta(&grid, &y).unwrap();
    let noiseless =
        (clean.alpha + 2.0).abs() < 1e-9 && (clean.beta + 61.41).abs() < 1e-9 && clean.sigma < 1e-9;

    let (alpha, beta, sigma) = (-1.26, -42.64, 3.4);
    let noise = Normal::new(0.0, sigma).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let (mut sa, mut sb, mut se_a, mut se_b) = (0.0, 0.0, 0.0, 0.0);
    let trials = 1000;
    for _ in 0..trials {
        let y: Vec<f64> = grid
            .iter()
            .map(|d| beta + 10.0 * alpha * d.log10() + noise.sample(&mut rng))
            .collect();
        let fit = fit_alpha_beta(&grid, &y).unwrap();
        sa += fit.alpha;
        sb += fit.beta;
        se_a += fit.se_alpha;
        se_b += fit.se_beta;
    }
    let t = trials as f64;
    let bias_a = (sa / t - alpha).abs() / (se_a / t);
    let bias_b = (sb / t - beta).abs() / (se_b / t);
    let unbiased = bias_a < 3.0 && bias_b < 3.0;

    let noisy: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(i, d)| -40.0 - 14.0 * d.log10() + 3.0 * (i as f64 * 2.3).sin())
        .collect();
    let base = fit_alpha_beta(&grid, &noisy).unwrap();
    let scaled: Vec<f64> = grid.iter().map(|d| d * 10.0).collect();
    let sc = fit_alpha_beta(&scaled, &noisy).unwrap();
    let shifted: Vec<f64> = noisy.iter().map(|p| p + 7.5).collect();
    let sh = fit_alpha_beta(&grid, &shifted).unwrap();
    let invariant = (sc.alpha - base.alpha).abs() < 1e-9
        && (sc.sigma - base.sigma).abs() < 1e-9
        && (sc.beta - (base.beta - 10.0 * base.alpha)).abs() < 1e-9
        && (sh.beta - base.beta - 7.5).abs() < 1e-9
        && (sh.alpha - base.alpha).abs() < 1e-9
        && (sh.sigma - base.sigma).abs() < 1e-9
        && (sh.se_alpha - base.se_alpha).abs() < 1e-9;

    outcome(
        noiseless && unbiased && invariant,
        format!(
            "noiseless {noiseless}, Monte Carlo bias alpha {bias_a:.2} SE / beta {bias_b:.2} SE, invariances {invariant}"
        ),
    )
}

fn z_suite() -> Outcome {
    let fit = |alpha: f64, beta: f64, sigma: f64, se_alpha: f64, se_beta: f64| PathLossFit {
        alpha,
        beta,
        sigma,
        se_alpha,
        se_beta,
        n: 127,
    };
    // Both standard errors scale as sigma / sqrt(Sxx); Sxx is solved from
    // the reference 17 dBi VV two-ray slope z of 6.07.
    let (a_meas, s_meas) = (-1.26, 3.4);
    let (a_two, s_two): (f64, f64) = (-2.07, 2.89);
    let sxx = (6.07 * (s_meas * s_meas + s_two * s_two).sqrt() / (a_meas - a_two)).powi(2);
    let meas = fit(a_meas, -42.64, s_meas, s_meas / sxx.sqrt(), 0.0);
    let two = fit(a_two, -37.32, s_two, s_two / sxx.sqrt(), 0.0);
    let z = z_test(&meas, &two, Coefficient::Slope).to_f64();
    let reproduced = (z - 6.07).abs() < 0.01 && rejects_equality(Extended::Finite(z));

    let antisymmetric = z_test(&two, &meas, Coefficient::Slope).to_f64() == -z;
    let zero = z_test(&meas, &meas, Coefficient::Slope) == Extended::Finite(0.0);
    let boundary = !rejects_equality(Extended::Finite(1.96))
        && !rejects_equality(Extended::Finite(-1.96))
        && rejects_equality(Extended::Finite(1.961))
        && rejects_equality(Extended::Finite(-1.961));
    outcome(
        reproduced && antisymmetric && zero && boundary,
        format!(
            "z(meas, two-ray) = {z:.4} with Sxx = {sxx:.1}, antisymmetry {antisymmetric}, zero {zero}, 1.96 boundary {boundary}"
        ),
    )
}

fn k_ordering() -> Outcome {
    let s = Scenario::indoor_reference();
    let samples = |pattern: &AntennaPattern| -> Vec<f64> {
        indoor_grid()
            .into_iter()
            .map(|d| {
                let cs = first_order_contributions(&s, pattern, pattern, d).unwrap();
                k_factor(&cs).unwrap().to_f64()
            })
            .collect()
    };
    let k17 = samples(&AntennaPattern::horn_17dbi());
    let k23 = samples(&AntennaPattern::horn_23dbi());
    let (e17, e23) = (ecdf(&k17).unwrap(), ecdf(&k23).unwrap());
    let mut pooled = k17.clone();
    pooled.extend(&k23);
    let pooled = ecdf(&pooled).unwrap();
    let mut dominates = true;
    let mut medians = (0.0, 0.0);
    for i in 1..=9 {
        let x = pooled.quantile(i as f64 / 10.0).unwrap();
        dominates &= e23.eval(x) <= e17.eval(x);
        if i == 5 {
            medians = (e17.quantile(0.5).unwrap(), e23.quantile(0.5).unwrap());
        }
    }
    outcome(
        dominates,
        format!("23 dBi K-factor CDF below 17 dBi at all deciles: {dominates}; medians {:.2} dB vs {:.2} dB", medians.0, medians.1),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [Criterion; 10] = [
        ("Fresnel limits, Brewster zero and bound", fresnel_suite),
        ("free-space anchors", free_space_anchors),
        ("two-ray asymptote and oscillation", two_ray_asymptote),
        ("outdoor two-ray slope", outdoor_slope),
        ("corridor slope ordering", corridor_ordering),
        ("oracle equivalence at order 1", oracle_equivalence),
        ("five-ray sufficiency", five_ray_sufficiency),
        ("regression suite", regression_suite),
        ("z-test", z_suite),
        ("K-factor ordering", k_ordering),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        if !result.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {}: {}",
            i + 1,
            if result.pass { "PASS" } else { "FAIL" },
            name,
            result.detail
        );
    }
    println!("total runtime {:.2?}, {failures} failing", start.elapsed());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
