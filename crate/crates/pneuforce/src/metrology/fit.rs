//! Least-squares polynomial fitting via Householder QR, the interpolation
//! error f_c, and the sensitivity slope.

use crate::error::{Error, Result};

/// Evaluate a polynomial with coefficients ordered low to high.
pub fn polyval(coefficients: &[f64], x: f64) -> f64 {
    coefficients
        .iter()
        .rev()
        .fold(0.0, |acc, c| acc.mul_add(x, *c))
}

/// Ordinary least-squares polynomial fit with a free intercept. Solves the
/// Vandermonde system by Householder QR; coefficients are returned low to
/// high.
#[allow(clippy::needless_range_loop)]
pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<Vec<f64>> {
    if x.len() != y.len() {
        return Err(Error::Fit(format!(
            "{} abscissae but {} ordinates",
            x.len(),
            y.len()
        )));
    }
    let cols = degree + 1;
    if x.len() < cols {
        return Err(Error::Fit(format!(
            "degree {degree} needs at least {cols} points, got {}",
            x.len()
        )));
    }
    let rows = x.len();
    let mut a: Vec<Vec<f64>> = x
        .iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(cols);
            let mut power = 1.0;
            for _ in 0..cols {
                row.push(power);
                power *= xi;
            }
            row
        })
        .collect();
    let mut b = y.to_vec();

    // Householder QR, applying the reflections to b as we go.
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for j in 0..cols {
        let norm = (j..rows).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm <= 1e-13 * scale {
            return Err(Error::Fit(format!(
                "rank-deficient system (column {j} collapses); points may be degenerate"
            )));
        }
        let alpha = if a[j][j] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..rows).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let v_norm2: f64 = v.iter().map(|w| w * w).sum();
        if v_norm2 > 0.0 {
            for col in j..cols {
                let dot: f64 = (j..rows).map(|i| v[i - j] * a[i][col]).sum();
                let factor = 2.0 * dot / v_norm2;
                for i in j..rows {
                    a[i][col] -= factor * v[i - j];
                }
            }
            let dot: f64 = (j..rows).map(|i| v[i - j] * b[i]).sum();
            let factor = 2.0 * dot / v_norm2;
            for i in j..rows {
                b[i] -= factor * v[i - j];
            }
        }
        a[j][j] = alpha;
    }

    // Back-substitution on the triangular factor.
    let mut coeffs = vec![0.0; cols];
    for j in (0..cols).rev() {
        let mut acc = b[j];
        for k in j + 1..cols {
            acc -= a[j][k] * coeffs[k];
        }
        if a[j][j].abs() <= 1e-13 * scale {
            return Err(Error::Fit(format!("rank-deficient system (pivot {j})")));
        }
        coeffs[j] = acc / a[j][j];
    }
    Ok(coeffs)
}

/// Interpolation polynomial X_a = f(F) and the per-level relative
/// interpolation error.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct InterpolationFit {
    pub degree: usize,
    /// Coefficients low to high; the intercept is free, never forced
    /// through zero force.
    pub coefficients: Vec<f64>,
    /// Fitted deflection at each calibration force.
    pub fitted: Vec<f64>,
    /// f_c = (X̄_r − X_a)/X_a · 100 at each calibration force.
    pub f_c_percent: Vec<f64>,
}

/// Least-squares interpolation of the mean rotated deflections against the
/// calibration forces (degree 1, 2, or 3).
pub fn interpolation_fit(forces: &[f64], x_bar_r: &[f64], degree: usize) -> Result<InterpolationFit> {
    if !(1..=3).contains(&degree) {
        return Err(Error::Domain {
            field: "degree",
            requirement: "1, 2, or 3",
            value: degree as f64,
        });
    }
    if forces.len() <= degree {
        return Err(Error::Fit(format!(
            "degree {degree} interpolation needs more than {degree} points, got {}",
            forces.len()
        )));
    }
    let coefficients = polyfit(forces, x_bar_r, degree)?;
    let fitted: Vec<f64> = forces.iter().map(|&f| polyval(&coefficients, f)).collect();
    let mut f_c_percent = Vec::with_capacity(fitted.len());
    for (xr, xa) in x_bar_r.iter().zip(&fitted) {
        if *xa == 0.0 {
            return Err(Error::DegenerateScale("fitted deflection X_a"));
        }
        f_c_percent.push((xr - xa) / xa * 100.0);
    }
    Ok(InterpolationFit {
        degree,
        coefficients,
        fitted,
        f_c_percent,
    })
}

/// Least-squares slope of deflection against force (the secant for exactly
/// two points), in deflection units per force unit.
pub fn sensitivity(forces: &[f64], deflections: &[f64]) -> Result<f64> {
    if forces.len() < 2 {
        return Err(Error::Domain {
            field: "points",
            requirement: ">= 2",
            value: forces.len() as f64,
        });
    }
    Ok(polyfit(forces, deflections, 1)?[1])
}
