//! Error metrics, uncertainty budget, interpolation fit, and class
//! assignment for calibration datasets.
//!
//! Every metric is a relative quantity in percent. The deflection arguments
//! may be raw indications or zero-referenced deflections; the caller picks
//! the convention and must use it consistently.

mod classify;
mod fit;
mod report;
mod uncertainty;

pub use classify::{
    classify, ClassEvaluation, ClassThresholds, ClassificationCase, ClassificationResult,
    LevelCriteria, LevelVerdict, SensorClass, CLASS_TABLE,
};
pub use fit::{interpolation_fit, polyfit, polyval, sensitivity, InterpolationFit};
pub use report::{analyze, AnalysisOptions, AnalysisReport, LevelRecord, ZeroErrorRecord};
pub use uncertainty::{
    combine_wc, expanded_uncertainty, uncertainty_components, BudgetInputs, ExpandedFit,
    LevelBudgetData,
};

use crate::error::{Error, Result};

/// Relative zero error: drift of the null-force indication across a series,
/// as a percentage of the full-scale deflection X_N. The sign is preserved.
pub fn zero_error_f0(i0: f64, i_f: f64, x_n: f64) -> Result<f64> {
    if x_n == 0.0 {
        return Err(Error::DegenerateScale("X_N"));
    }
    Ok((i_f - i0) / x_n * 100.0)
}

/// Relative repeatability b': spread of the two unrotated series at one
/// force, normalized by their mean.
pub fn repeatability_b_prime(x1: f64, x2: f64) -> Result<f64> {
    let mean = (x1 + x2) / 2.0;
    if mean == 0.0 {
        return Err(Error::DegenerateScale("mean of X1 and X2"));
    }
    Ok((x2 - x1).abs() / mean * 100.0)
}

/// Relative reproducibility b: spread of the three rotated increasing series
/// at one force, normalized by their mean. Returns (b, X̄_r).
pub fn reproducibility_b(x1: f64, x3: f64, x5: f64) -> Result<(f64, f64)> {
    let mean = (x1 + x3 + x5) / 3.0;
    if mean == 0.0 {
        return Err(Error::DegenerateScale("mean of X1, X3, X5"));
    }
    let max = x1.max(x3).max(x5);
    let min = x1.min(x3).min(x5);
    Ok(((max - min).abs() / mean * 100.0, mean))
}

/// Relative reversibility v: hysteresis between the increasing and
/// decreasing legs, averaged over the two rotated mountings. Each leg pair
/// is normalized by its increasing-leg value.
pub fn reversibility_v(x3: f64, x4: f64, x5: f64, x6: f64) -> Result<f64> {
    if x3 == 0.0 {
        return Err(Error::DegenerateScale("X3"));
    }
    if x5 == 0.0 {
        return Err(Error::DegenerateScale("X5"));
    }
    Ok(((x4 - x3) / x3).abs() * 50.0 + ((x6 - x5) / x5).abs() * 50.0)
}

/// Relative creep c: indication drift between 30 s and 300 s after applying
/// or removing the maximum force, as a percentage of X_N.
pub fn creep_c(i30: f64, i300: f64, x_n: f64) -> Result<f64> {
    if x_n == 0.0 {
        return Err(Error::DegenerateScale("X_N"));
    }
    Ok(((i300 - i30) / x_n).abs() * 100.0)
}
