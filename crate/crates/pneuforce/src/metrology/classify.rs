//! Class assignment from the error metrics and the uncertainty budget. The
//! classified range is walked from the maximum calibration force downward
//! and must cover at least the upper half of the nominal range.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
pub enum SensorClass {
    Class0,
    Class05,
    Class1,
    Class2,
}

impl SensorClass {
    pub fn label(self) -> &'static str {
        match self {
            SensorClass::Class0 => "0",
            SensorClass::Class05 => "0.5",
            SensorClass::Class1 => "1",
            SensorClass::Class2 => "2",
        }
    }
}

/// Classification case: A uses the interpolation equation, B covers
/// specific forces only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ClassificationCase {
    A,
    B,
}

/// Per-class acceptance limits (percent).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ClassThresholds {
    pub class: SensorClass,
    pub b_max: f64,
    pub b_prime_max: f64,
    pub f0_max: f64,
    pub v_max: f64,
    /// Interpolation-error limit, case A only; mirrors the zero-error
    /// column.
    pub f_c_max: f64,
    /// Upper bound on the expanded calibration uncertainty, case A only.
    pub u_max_percent: f64,
}

pub const CLASS_TABLE: [ClassThresholds; 4] = [
    ClassThresholds {
        class: SensorClass::Class0,
        b_max: 0.05,
        b_prime_max: 0.03,
        f0_max: 0.025,
        v_max: 0.07,
        f_c_max: 0.025,
        u_max_percent: 0.06,
    },
    ClassThresholds {
        class: SensorClass::Class05,
        b_max: 0.1,
        b_prime_max: 0.05,
        f0_max: 0.05,
        v_max: 0.15,
        f_c_max: 0.05,
        u_max_percent: 0.12,
    },
    ClassThresholds {
        class: SensorClass::Class1,
        b_max: 0.2,
        b_prime_max: 0.1,
        f0_max: 0.1,
        v_max: 0.3,
        f_c_max: 0.1,
        u_max_percent: 0.24,
    },
    ClassThresholds {
        class: SensorClass::Class2,
        b_max: 0.4,
        b_prime_max: 0.2,
        f0_max: 0.2,
        v_max: 0.5,
        f_c_max: 0.2,
        u_max_percent: 0.45,
    },
];

/// The per-level quantities the classifier consumes.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LevelCriteria {
    pub force: f64,
    pub b: f64,
    pub b_prime: f64,
    pub v: f64,
    /// Interpolation error (%), required for case A.
    pub f_c: Option<f64>,
    /// Expanded uncertainty k·w_c in percent, required for case A.
    pub u_percent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LevelVerdict {
    pub force: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ClassEvaluation {
    pub class: SensorClass,
    pub f0_pass: bool,
    /// Contiguous passing range walked down from the maximum force.
    pub range: Option<(f64, f64)>,
    pub covers_half_range: bool,
    pub levels: Vec<LevelVerdict>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ClassificationResult {
    pub case: ClassificationCase,
    pub assigned_class: Option<SensorClass>,
    pub classified_range: Option<(f64, f64)>,
    pub nominal_max: f64,
    pub per_class: Vec<ClassEvaluation>,
}

/// Walk each class from best to worst over the levels, top force downward,
/// and assign the best class whose passing range covers the 50..100 % span
/// of the nominal range.
pub fn classify(
    levels: &[LevelCriteria],
    f0_max_abs: f64,
    case: ClassificationCase,
    nominal_max: f64,
) -> Result<ClassificationResult> {
    if levels.is_empty() {
        return Err(Error::Classification("empty report".into()));
    }
    if levels.windows(2).any(|w| w[1].force <= w[0].force) {
        return Err(Error::Classification(
            "levels must be strictly ascending in force".into(),
        ));
    }
    if nominal_max <= 0.0 || nominal_max.is_nan() {
        return Err(Error::Classification(format!(
            "nominal_max must be > 0, got {nominal_max}"
        )));
    }
    let top = levels.last().unwrap().force;
    let eps = 1e-9 * nominal_max;
    if top < nominal_max - eps {
        return Err(Error::Classification(format!(
            "levels reach {top} but the nominal range extends to {nominal_max}"
        )));
    }
    if case == ClassificationCase::A {
        for l in levels {
            if l.f_c.is_none() || l.u_percent.is_none() {
                return Err(Error::Classification(format!(
                    "case A needs f_c and expanded uncertainty at every level \
                     (missing at force {})",
                    l.force
                )));
            }
        }
    }

    let mut per_class = Vec::with_capacity(CLASS_TABLE.len());
    let mut assigned = None;
    let mut assigned_range = None;

    for thresholds in CLASS_TABLE {
        let f0_pass = f0_max_abs.abs() <= thresholds.f0_max;
        let verdicts: Vec<LevelVerdict> = levels
            .iter()
            .map(|l| level_verdict(l, &thresholds, case))
            .collect();

        // Contiguous passing suffix, walked from the maximum force down.
        let mut range = None;
        if f0_pass {
            let mut lowest_pass = None;
            for verdict in verdicts.iter().rev() {
                if verdict.pass {
                    lowest_pass = Some(verdict.force);
                } else {
                    break;
                }
            }
            if let Some(low) = lowest_pass {
                range = Some((low, top));
            }
        }
        let covers_half_range = match range {
            Some((low, high)) => low <= 0.5 * nominal_max + eps && high >= nominal_max - eps,
            None => false,
        };
        if assigned.is_none() && covers_half_range {
            assigned = Some(thresholds.class);
            assigned_range = range;
        }
        per_class.push(ClassEvaluation {
            class: thresholds.class,
            f0_pass,
            range,
            covers_half_range,
            levels: verdicts,
        });
    }

    Ok(ClassificationResult {
        case,
        assigned_class: assigned,
        classified_range: assigned_range,
        nominal_max,
        per_class,
    })
}

fn level_verdict(
    level: &LevelCriteria,
    thresholds: &ClassThresholds,
    case: ClassificationCase,
) -> LevelVerdict {
    let mut failures = Vec::new();
    if level.b > thresholds.b_max {
        failures.push(format!("b {} > {}", level.b, thresholds.b_max));
    }
    if level.b_prime > thresholds.b_prime_max {
        failures.push(format!("b' {} > {}", level.b_prime, thresholds.b_prime_max));
    }
    if level.v > thresholds.v_max {
        failures.push(format!("v {} > {}", level.v, thresholds.v_max));
    }
    if case == ClassificationCase::A {
        if let Some(f_c) = level.f_c {
            if f_c.abs() > thresholds.f_c_max {
                failures.push(format!("f_c {} > {}", f_c.abs(), thresholds.f_c_max));
            }
        }
        if let Some(u) = level.u_percent {
            if u > thresholds.u_max_percent {
                failures.push(format!(
                    "uncertainty {} > {}",
                    u, thresholds.u_max_percent
                ));
            }
        }
    }
    LevelVerdict {
        force: level.force,
        pass: failures.is_empty(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat_levels(b: f64, b_prime: f64, v: f64, n: usize, f_max: f64) -> Vec<LevelCriteria> {
        (1..=n)
            .map(|i| LevelCriteria {
                force: f_max * i as f64 / n as f64,
                b,
                b_prime,
                v,
                f_c: None,
                u_percent: None,
            })
            .collect()
    }

    #[test]
    fn perfect_instrument_is_class_0_over_full_range() {
        let levels = flat_levels(0.0, 0.0, 0.0, 8, 4.0);
        let result = classify(&levels, 0.0, ClassificationCase::B, 4.0).unwrap();
        assert_eq!(result.assigned_class, Some(SensorClass::Class0));
        assert_eq!(result.classified_range, Some((0.5, 4.0)));
    }

    #[test]
    fn mid_grade_errors_land_in_class_1() {
        let levels = flat_levels(0.15, 0.08, 0.25, 8, 4.0);
        let result = classify(&levels, 0.08, ClassificationCase::B, 4.0).unwrap();
        assert_eq!(result.assigned_class, Some(SensorClass::Class1));
        assert_eq!(result.classified_range, Some((0.5, 4.0)));
    }

    #[test]
    fn gross_errors_yield_no_class() {
        // Top-of-range reproducibility far beyond every class-2 limit.
        let mut levels = flat_levels(0.0, 0.0, 0.0, 8, 4.0);
        for l in levels.iter_mut().skip(4) {
            l.b = 5.0;
        }
        let result = classify(&levels, 0.0, ClassificationCase::B, 4.0).unwrap();
        assert_eq!(result.assigned_class, None);
        assert_eq!(result.classified_range, None);
    }

    #[test]
    fn zero_error_is_a_global_gate() {
        let levels = flat_levels(0.01, 0.01, 0.01, 8, 4.0);
        let result = classify(&levels, 0.3, ClassificationCase::B, 4.0).unwrap();
        assert_eq!(result.assigned_class, None);
        let result = classify(&levels, 0.15, ClassificationCase::B, 4.0).unwrap();
        assert_eq!(result.assigned_class, Some(SensorClass::Class2));
    }

    #[test]
    fn range_stops_at_first_failing_level_from_the_top() {
        let mut levels = flat_levels(0.01, 0.005, 0.02, 8, 4.0);
        // A failure at 1.5 kgf truncates the class-0 range to 2..4, which
        // still covers half the nominal range.
        levels[2].b = 3.0;
        let result = classify(&levels, 0.0, ClassificationCase::B, 4.0).unwrap();
        assert_eq!(result.assigned_class, Some(SensorClass::Class0));
        assert_eq!(result.classified_range, Some((2.0, 4.0)));
        // The same failure at 2.5 kgf pushes the range to 3..4: under half.
        let mut levels = flat_levels(0.01, 0.005, 0.02, 8, 4.0);
        levels[4].b = 3.0;
        let result = classify(&levels, 0.0, ClassificationCase::B, 4.0).unwrap();
        assert_eq!(result.assigned_class, None);
    }

    #[test]
    fn case_a_requires_fit_and_uncertainty() {
        let levels = flat_levels(0.0, 0.0, 0.0, 8, 4.0);
        assert!(classify(&levels, 0.0, ClassificationCase::A, 4.0).is_err());

        let levels: Vec<LevelCriteria> = levels
            .into_iter()
            .map(|mut l| {
                l.f_c = Some(0.01);
                l.u_percent = Some(0.05);
                l
            })
            .collect();
        let result = classify(&levels, 0.0, ClassificationCase::A, 4.0).unwrap();
        assert_eq!(result.assigned_class, Some(SensorClass::Class0));
        // Push the uncertainty past the class-0 band.
        let levels: Vec<LevelCriteria> = levels
            .into_iter()
            .map(|mut l| {
                l.u_percent = Some(0.10);
                l
            })
            .collect();
        let result = classify(&levels, 0.0, ClassificationCase::A, 4.0).unwrap();
        assert_eq!(result.assigned_class, Some(SensorClass::Class05));
    }

    #[test]
    fn empty_report_rejected() {
        assert!(classify(&[], 0.0, ClassificationCase::B, 4.0).is_err());
    }
}
