//! Least-squares power-law fits on log-log data.

use log::warn;

use crate::error::{Error, Result};

/// Infidelities below this are numerical noise and are left out of fits.
pub const INFIDELITY_FLOOR: f64 = 1e-13;

/// `y = prefactor * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub std_error: f64,
    pub prefactor: f64,
    /// Number of rows that entered the fit.
    pub n_used: usize,
}

/// Fits `log y = log a + b log x` by ordinary least squares. The standard
/// error of `b` comes from the residual variance with `n - 2` degrees of
/// freedom.
pub fn fit_power_law(rows: &[(f64, f64)]) -> Result<PowerLawFit> {
    let mut pts = Vec::with_capacity(rows.len());
    for &(x, y) in rows {
        if y < INFIDELITY_FLOOR || x <= 0.0 {
            warn!("excluding row ({x}, {y:e}) from power-law fit: below the numerical floor");
            continue;
        }
        pts.push((x.ln(), y.ln()));
    }
    if pts.len() < 3 {
        return Err(Error::TooFewRows {
            needed: 3,
            have: pts.len(),
        });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Numerical("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let std_error = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(PowerLawFit {
        exponent: slope,
        std_error,
        prefactor: intercept.exp(),
        n_used: pts.len(),
    })
}
