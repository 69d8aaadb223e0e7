//! Alpha-beta path-loss regression, z-tests between fits, empirical CDFs.
//!
//! Fits are referenced to received power: `P_R(d) = beta + 10 alpha log10 d + X`
//! with `X ~ N(0, sigma^2)`. Slopes are therefore negative for decaying
//! power; the conventional path-loss exponent is `n = -alpha`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::units::Extended;

/// Two-sided 95% critical value of the standard normal distribution.
pub const Z_CRITICAL_95: f64 = 1.96;

/// Path loss in dB from transmit and received power in dBm.
pub fn path_loss_db(tx_power_dbm: f64, rx_power_dbm: f64) -> f64 {
    tx_power_dbm - rx_power_dbm
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathLossFit {
    pub alpha: f64,
    pub beta: f64,
    /// Residual standard deviation (n - 2 degrees of freedom), dB.
    pub sigma: f64,
    pub se_alpha: f64,
    pub se_beta: f64,
    pub n: usize,
}

impl PathLossFit {
    /// Model prediction at distance `d`.
    pub fn predict(&self, d: f64) -> f64 {
        self.beta + self.alpha * 10.0 * libm::log10(d)
    }

    /// Path-loss exponent `n = -alpha`.
    pub fn exponent(&self) -> f64 {
        -self.alpha
    }

    fn coefficient(&self, which: Coefficient) -> (f64, f64) {
        match which {
            Coefficient::Slope => (self.alpha, self.se_alpha),
            Coefficient::Intercept => (self.beta, self.se_beta),
        }
    }
}

/// Ordinary least squares of `powers_db` on `10 log10(distance)`.
pub fn fit_alpha_beta(distances: &[f64], powers_db: &[f64]) -> Result<PathLossFit> {
    if distances.len() != powers_db.len() {
        return Err(Error::invalid("distance and power series differ in length"));
    }
    let n = distances.len();
    if n < 3 {
        return Err(Error::invalid(
            "at least three samples are needed for a fit",
        ));
    }
    if distances.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(Error::invalid("distances must be positive and finite"));
    }
    if powers_db.iter().any(|p| !p.is_finite()) {
        return Err(Error::invalid("powers must be finite"));
    }
    let x: Vec<f64> = distances.iter().map(|d| 10.0 * libm::log10(*d)).collect();
    let nf = n as f64;
    let x_mean = x.iter().sum::<f64>() / nf;
    let y_mean = powers_db.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|xi| (xi - x_mean) * (xi - x_mean)).sum();
    if !(sxx > 0.0) {
        return Err(Error::invalid("all distances are equal"));
    }
    let sxy: f64 = x
        .iter()
        .zip(powers_db)
        .map(|(xi, yi)| (xi - x_mean) * (yi - y_mean))
        .sum();
    let alpha = sxy / sxx;
    let beta = y_mean - alpha * x_mean;
    let sse: f64 = x
        .iter()
        .zip(powers_db)
        .map(|(xi, yi)| {
            let r = yi - (beta + alpha * xi);
            r * r
        })
        .sum();
    let sigma = libm::sqrt(sse / (nf - 2.0));
    let se_alpha = sigma / libm::sqrt(sxx);
    let se_beta = sigma * libm::sqrt(1.0 / nf + x_mean * x_mean / sxx);
    Ok(PathLossFit {
        alpha,
        beta,
        sigma,
        se_alpha,
        se_beta,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    Slope,
    Intercept,
}

/// `z = (c_a - c_b) / sqrt(se_a^2 + se_b^2)` for the chosen coefficient.
pub fn z_test(a: &PathLossFit, b: &PathLossFit, which: Coefficient) -> Extended {
    let (ca, sa) = a.coefficient(which);
    let (cb, sb) = b.coefficient(which);
    let diff = ca - cb;
    let se = libm::sqrt(sa * sa + sb * sb);
    if se == 0.0 {
        return if diff == 0.0 {
            Extended::Finite(0.0)
        } else if diff > 0.0 {
            Extended::PosInfinity
        } else {
            Extended::NegInfinity
        };
    }
    Extended::Finite(diff / se)
}

/// True when `z` falls outside the 95% interval, i.e. the two fits differ.
pub fn rejects_equality(z: Extended) -> bool {
    match z {
        Extended::Finite(v) => libm::fabs(v) > Z_CRITICAL_95,
        _ => true,
    }
}

/// Step empirical CDF over distinct sample values.
#[derive(Debug, Clone, PartialEq)]
pub struct Ecdf {
    values: Vec<f64>,
    probabilities: Vec<f64>,
}

impl Ecdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("ECDF needs at least one sample"));
        }
        if samples.iter().any(|s| s.is_nan()) {
            return Err(Error::invalid("ECDF samples must not be NaN"));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let mut values = Vec::new();
        let mut probabilities = Vec::new();
        for (i, v) in sorted.iter().enumerate() {
            if i + 1 < n && sorted[i + 1] == *v {
                continue;
            }
            values.push(*v);
            probabilities.push(if i + 1 == n {
                1.0
            } else {
                (i + 1) as f64 / n as f64
            });
        }
        Ok(Ecdf {
            values,
            probabilities,
        })
    }

    /// Distinct sample values, ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `P(X <= values[i])`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `P(X <= x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.values.partition_point(|v| *v <= x);
        if idx == 0 {
            0.0
        } else {
            self.probabilities[idx - 1]
        }
    }

    /// Smallest sample value `v` with `P(X <= v) >= p`, for `p` in `(0, 1]`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid("quantile level must lie in (0, 1]"));
        }
        let idx = self.probabilities.partition_point(|q| *q < p);
        Ok(self.values[idx.min(self.values.len() - 1)])
    }
}

pub fn ecdf(samples: &[f64]) -> Result<Ecdf> {
    Ecdf::new(samples)
}
