//! The eight relative uncertainty components, their combination, and the
//! expanded-uncertainty fit over the calibration range.

use super::fit::{polyfit, polyval};
use crate::error::{Error, Result};

const SQRT_3: f64 = 1.732050807568877_f64;
const SQRT_6: f64 = 2.449489742783178_f64;

/// Setup quantities that feed the budget but are not part of the dataset.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BudgetInputs {
    /// Relative error of the force-generating machine.
    pub machine_error_rel: f64,
    /// Coverage factor the machine error is quoted with.
    pub k_machine: f64,
    /// Indicator resolution (V).
    pub resolution_v: f64,
    /// Temperature coefficient of the instrument (1/°C).
    pub k_temp: f64,
    /// Temperature interval over the calibration, including its measurement
    /// uncertainty (°C).
    pub delta_t_c: f64,
}

impl Default for BudgetInputs {
    fn default() -> Self {
        BudgetInputs {
            machine_error_rel: 5e-4,
            k_machine: 2.0,
            resolution_v: 1e-6,
            k_temp: 0.00027,
            delta_t_c: 2.0,
        }
    }
}

/// Per-level measured quantities entering the budget. Deflections follow
/// whatever convention the analysis runs in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelBudgetData {
    pub x1: f64,
    pub x3: f64,
    pub x5: f64,
    /// Mean of x1, x3, x5.
    pub x_bar_r: f64,
    /// Repeatability at this level (%).
    pub b_prime: f64,
    /// Reversibility at this level (%), the creep fallback.
    pub v: f64,
    /// Creep (%), when a creep test was run.
    pub creep: Option<f64>,
    /// Largest |f0| across the series (%).
    pub f0_max_abs: f64,
    /// |X̄_r − X_a|/|X̄_r| when an interpolation fit exists (case A).
    pub interpolation_dev: Option<f64>,
}

/// The eight relative components w1..w8 for one force level.
///
/// w5 falls back to the reversibility contribution divided by three when no
/// creep test is available.
pub fn uncertainty_components(data: &LevelBudgetData, inputs: &BudgetInputs) -> Result<[f64; 8]> {
    if inputs.k_machine <= 0.0 || inputs.k_machine.is_nan() {
        return Err(Error::Budget(format!(
            "k_machine must be > 0, got {}",
            inputs.k_machine
        )));
    }
    if data.x_bar_r == 0.0 {
        return Err(Error::Budget(
            "x_bar_r is zero; w2 and w4 are undefined".into(),
        ));
    }
    let w1 = (inputs.machine_error_rel / inputs.k_machine).abs();
    let spread = (data.x1 - data.x_bar_r).powi(2)
        + (data.x3 - data.x_bar_r).powi(2)
        + (data.x5 - data.x_bar_r).powi(2);
    let w2 = (spread / 6.0).sqrt() / data.x_bar_r.abs();
    let w3 = data.b_prime.abs() / (100.0 * SQRT_3);
    let w4 = inputs.resolution_v.abs() / (SQRT_6 * data.x_bar_r.abs());
    let w5 = match data.creep {
        Some(c) => c.abs() / (100.0 * SQRT_3),
        None => data.v.abs() / 100.0 / 3.0,
    };
    let w6 = data.f0_max_abs.abs() / 100.0;
    let w7 = (inputs.k_temp * inputs.delta_t_c / 2.0).abs() / SQRT_3;
    let w8 = data.interpolation_dev.map_or(0.0, f64::abs);
    Ok([w1, w2, w3, w4, w5, w6, w7, w8])
}

/// Root-sum-square combination of the eight components.
pub fn combine_wc(components: &[f64; 8]) -> f64 {
    components.iter().map(|w| w * w).sum::<f64>().sqrt()
}

/// Expanded uncertainty per level and its least-squares fit over force.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExpandedFit {
    /// Coverage factor.
    pub k: f64,
    /// U = k·w_c per level.
    pub u: Vec<f64>,
    /// Fit coefficients (low to high) after flooring, so the fitted curve
    /// is never below a measured U anywhere on the grid.
    pub coefficients: Vec<f64>,
}

/// U = k·w_c per level plus a polynomial U(F). The fit is shifted up by the
/// largest observed shortfall: quoting an uncertainty below a measured
/// value would be under-conservative.
pub fn expanded_uncertainty(
    forces: &[f64],
    wc: &[f64],
    k: f64,
    fit_degree: usize,
) -> Result<ExpandedFit> {
    if k <= 0.0 || k.is_nan() {
        return Err(Error::Budget(format!("coverage factor k must be > 0, got {k}")));
    }
    if forces.len() < 2 || forces.len() != wc.len() {
        return Err(Error::Fit(format!(
            "expanded-uncertainty fit needs >= 2 levels, got {} forces and {} wc values",
            forces.len(),
            wc.len()
        )));
    }
    if fit_degree > 2 {
        return Err(Error::Domain {
            field: "fit_degree",
            requirement: "0, 1, or 2",
            value: fit_degree as f64,
        });
    }
    let u: Vec<f64> = wc.iter().map(|w| k * w).collect();
    let mut coefficients = polyfit(forces, &u, fit_degree)?;
    let shortfall = forces
        .iter()
        .zip(&u)
        .map(|(&f, &ui)| ui - polyval(&coefficients, f))
        .fold(0.0_f64, f64::max);
    if shortfall > 0.0 {
        coefficients[0] += shortfall;
    }
    Ok(ExpandedFit {
        k,
        u,
        coefficients,
    })
}
