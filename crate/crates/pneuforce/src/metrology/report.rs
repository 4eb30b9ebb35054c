//! Full dataset analysis: error metrics per level, zero errors per series
//! pair, uncertainty budget, interpolation and expanded-uncertainty fits,
//! and class assignment, exportable as JSON and flat CSV.

use serde::Serialize;

use super::classify::{classify, ClassificationCase, ClassificationResult, LevelCriteria};
use super::fit::{interpolation_fit, sensitivity, InterpolationFit};
use super::uncertainty::{
    combine_wc, expanded_uncertainty, uncertainty_components, BudgetInputs, ExpandedFit,
    LevelBudgetData,
};
use super::{repeatability_b_prime, reproducibility_b, reversibility_v, zero_error_f0};
use crate::calibration::{deflections, CalibrationDataset, DeflectionMode, SeriesId};
use crate::error::{Error, Result};

/// Knobs of a dataset analysis run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalysisOptions {
    pub mode: DeflectionMode,
    pub case: ClassificationCase,
    /// Interpolation degree, case A only.
    pub fit_degree: usize,
    pub budget: BudgetInputs,
    /// Coverage factor for the expanded uncertainty.
    pub k_expanded: f64,
    /// Degree of the U(F) fit.
    pub u_fit_degree: usize,
    /// Nominal range maximum (kgf); defaults to the top calibration force.
    pub nominal_max_kgf: Option<f64>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            mode: DeflectionMode::ZeroReferenced,
            case: ClassificationCase::B,
            fit_degree: 1,
            budget: BudgetInputs::default(),
            k_expanded: 2.0,
            u_fit_degree: 1,
            nominal_max_kgf: None,
        }
    }
}

/// One force level of the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub force_kgf: f64,
    /// Mean rotated deflection (X1, X3, X5) in the active convention.
    pub x_bar_r: f64,
    /// X1 referenced to its own leading zero. Kept alongside x_bar_r
    /// because the two columns disagree on this layout and consumers must
    /// not mix them.
    pub x_first_zero_ref: f64,
    pub b: f64,
    pub b_prime: f64,
    pub v: f64,
    pub f_c: Option<f64>,
    pub w: [f64; 8],
    pub wc: f64,
    pub u_expanded: f64,
}

/// Zero error of one series or up/down pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroErrorRecord {
    pub series: String,
    pub f0_percent: f64,
    /// Full-scale normalizer used (always the increasing leg of the same
    /// mounting).
    pub x_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub mode: DeflectionMode,
    pub case: ClassificationCase,
    /// Setup quantities the budget was computed with.
    pub budget_inputs: BudgetInputs,
    /// Whether a creep test fed w5 (false: reversibility fallback).
    pub creep_available: bool,
    pub levels: Vec<LevelRecord>,
    pub zero_errors: Vec<ZeroErrorRecord>,
    pub f0_max_abs: f64,
    /// Least-squares slope of x_bar_r against force (V/kgf).
    pub sensitivity_v_per_kgf: f64,
    pub interpolation: Option<InterpolationFit>,
    pub expanded: ExpandedFit,
    pub classification: ClassificationResult,
    /// Convention choices and input dependencies a reader of the numbers
    /// must know about.
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Flat per-level table for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "force_kgf,x_bar_r,b,b_prime,v,f_c,w1,w2,w3,w4,w5,w6,w7,w8,wc,U\n",
        );
        for l in &self.levels {
            out.push_str(&format!("{},{},{},{},{}", l.force_kgf, l.x_bar_r, l.b, l.b_prime, l.v));
            match l.f_c {
                Some(fc) => out.push_str(&format!(",{fc}")),
                None => out.push(','),
            }
            for w in l.w {
                out.push_str(&format!(",{w}"));
            }
            out.push_str(&format!(",{},{}\n", l.wc, l.u_expanded));
        }
        out
    }

    /// Human-readable summary table.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "mode {:?}, case {:?}; sensitivity {:.6} V/kgf\n",
            self.mode, self.case, self.sensitivity_v_per_kgf
        ));
        out.push_str("force_kgf      b%        b'%        v%        wc\n");
        for l in &self.levels {
            out.push_str(&format!(
                "{:8.3} {:9.5} {:9.5} {:9.5} {:11.5e}\n",
                l.force_kgf, l.b, l.b_prime, l.v, l.wc
            ));
        }
        for z in &self.zero_errors {
            out.push_str(&format!("f0({}) = {:+.6} %\n", z.series, z.f0_percent));
        }
        match self.classification.assigned_class {
            Some(class) => out.push_str(&format!(
                "assigned class {} over {:?} kgf\n",
                class.label(),
                self.classification.classified_range.unwrap()
            )),
            None => out.push_str("assigned class: none\n"),
        }
        out
    }
}

fn require_zero_end(ds: &CalibrationDataset, id: SeriesId) -> Result<f64> {
    ds.series(id).zero_end.ok_or_else(|| {
        Error::Budget(format!(
            "missing final zero reading for series {}",
            id.label()
        ))
    })
}

fn require_zero_start(ds: &CalibrationDataset, id: SeriesId) -> Result<f64> {
    ds.series(id).zero_start.ok_or_else(|| {
        Error::Budget(format!(
            "missing leading zero reading for series {}",
            id.label()
        ))
    })
}

/// Run the full error/uncertainty/classification pipeline over a dataset.
#[allow(clippy::needless_range_loop)]
pub fn analyze(ds: &CalibrationDataset, opts: &AnalysisOptions) -> Result<AnalysisReport> {
    ds.validate()?;
    let defl = deflections(ds, opts.mode);
    let n = ds.force_levels.len();
    let top = n - 1;
    let forces = &ds.force_levels;

    // Full-scale normalizers, one per increasing series, in the active
    // convention.
    let x_n = |series: SeriesId| defl[series.index()][top];

    // Zero errors. The up/down pairs close in the decreasing leg; X_N is
    // always taken from the increasing leg of the same mounting.
    let mut zero_errors = Vec::with_capacity(4);
    for (label, start_of, end_of, x_n_of) in [
        ("X1", SeriesId::X1, SeriesId::X1, SeriesId::X1),
        ("X2", SeriesId::X2, SeriesId::X2, SeriesId::X2),
        ("X3-X4", SeriesId::X3, SeriesId::X4, SeriesId::X3),
        ("X5-X6", SeriesId::X5, SeriesId::X6, SeriesId::X5),
    ] {
        let i0 = require_zero_start(ds, start_of)?;
        let i_f = require_zero_end(ds, end_of)?;
        let x_n = x_n(x_n_of);
        zero_errors.push(ZeroErrorRecord {
            series: label.to_string(),
            f0_percent: zero_error_f0(i0, i_f, x_n)?,
            x_n,
        });
    }
    let f0_max_abs = zero_errors
        .iter()
        .map(|z| z.f0_percent.abs())
        .fold(0.0, f64::max);

    // Per-level error metrics.
    let mut x_bar_r = Vec::with_capacity(n);
    let mut b_list = Vec::with_capacity(n);
    let mut bp_list = Vec::with_capacity(n);
    let mut v_list = Vec::with_capacity(n);
    for i in 0..n {
        let (x1, x2) = (defl[0][i], defl[1][i]);
        let (x3, x4) = (defl[2][i], defl[3][i]);
        let (x5, x6) = (defl[4][i], defl[5][i]);
        let (b, mean) = reproducibility_b(x1, x3, x5)?;
        x_bar_r.push(mean);
        b_list.push(b);
        bp_list.push(repeatability_b_prime(x1, x2)?);
        v_list.push(reversibility_v(x3, x4, x5, x6)?);
    }

    let interpolation = match opts.case {
        ClassificationCase::A => Some(interpolation_fit(forces, &x_bar_r, opts.fit_degree)?),
        ClassificationCase::B => None,
    };

    // Budget per level.
    let mut w_rows = Vec::with_capacity(n);
    let mut wc_list = Vec::with_capacity(n);
    for i in 0..n {
        let data = LevelBudgetData {
            x1: defl[0][i],
            x3: defl[2][i],
            x5: defl[4][i],
            x_bar_r: x_bar_r[i],
            b_prime: bp_list[i],
            v: v_list[i],
            creep: None,
            f0_max_abs,
            interpolation_dev: interpolation
                .as_ref()
                .map(|fit| ((x_bar_r[i] - fit.fitted[i]) / x_bar_r[i]).abs()),
        };
        let w = uncertainty_components(&data, &opts.budget)?;
        wc_list.push(combine_wc(&w));
        w_rows.push(w);
    }
    let expanded = expanded_uncertainty(forces, &wc_list, opts.k_expanded, opts.u_fit_degree)?;

    let slope = sensitivity(forces, &x_bar_r)?;

    // Classification.
    let criteria: Vec<LevelCriteria> = (0..n)
        .map(|i| LevelCriteria {
            force: forces[i],
            b: b_list[i],
            b_prime: bp_list[i],
            v: v_list[i],
            f_c: interpolation.as_ref().map(|fit| fit.f_c_percent[i]),
            u_percent: match opts.case {
                ClassificationCase::A => Some(expanded.u[i] * 100.0),
                ClassificationCase::B => None,
            },
        })
        .collect();
    let nominal = opts.nominal_max_kgf.unwrap_or(forces[top]);
    let classification = classify(&criteria, f0_max_abs, opts.case, nominal)?;

    // X1 referenced to its own leading zero, for the convention note.
    let x1_zero = require_zero_start(ds, SeriesId::X1)?;
    let x_first_zero_ref: Vec<f64> = ds
        .series(SeriesId::X1)
        .readings
        .iter()
        .map(|r| r - x1_zero)
        .collect();

    let levels: Vec<LevelRecord> = (0..n)
        .map(|i| LevelRecord {
            force_kgf: forces[i],
            x_bar_r: x_bar_r[i],
            x_first_zero_ref: x_first_zero_ref[i],
            b: b_list[i],
            b_prime: bp_list[i],
            v: v_list[i],
            f_c: interpolation.as_ref().map(|fit| fit.f_c_percent[i]),
            w: w_rows[i],
            wc: wc_list[i],
            u_expanded: expanded.u[i],
        })
        .collect();

    let notes = build_notes(ds, opts, &levels, &zero_errors);

    Ok(AnalysisReport {
        mode: opts.mode,
        case: opts.case,
        budget_inputs: opts.budget,
        creep_available: false,
        levels,
        zero_errors,
        f0_max_abs,
        sensitivity_v_per_kgf: slope,
        interpolation,
        expanded,
        classification,
        notes,
    })
}

fn build_notes(
    ds: &CalibrationDataset,
    opts: &AnalysisOptions,
    levels: &[LevelRecord],
    zero_errors: &[ZeroErrorRecord],
) -> Vec<String> {
    let mut notes = Vec::new();

    notes.push(
        "x_bar_r is the mean of the X1/X3/X5 deflections in the active convention; \
         x_first_zero_ref is the X1 series referenced to its own leading zero. The two \
         columns differ whenever the series disagree, so downstream consumers must pick \
         one convention explicitly and not mix them."
            .to_string(),
    );

    // Alternate X_N convention for the inverted-mounting pair.
    if let (Some(z56), Some(start), Some(end)) = (
        zero_errors.iter().find(|z| z.series == "X5-X6"),
        ds.series(SeriesId::X5).zero_start,
        ds.series(SeriesId::X6).zero_end,
    ) {
        let defl = deflections(ds, opts.mode);
        let alt_x_n = defl[SeriesId::X6.index()][ds.force_levels.len() - 1];
        if alt_x_n != 0.0 {
            let alt = (end - start) / alt_x_n * 100.0;
            notes.push(format!(
                "f0(X5-X6) = {:+.6} % normalizes by the increasing-leg full scale \
                 X_N(X5) = {:.9}, the same convention as every other series pair; \
                 normalizing by the decreasing-leg full scale X_N(X6) = {:.9} would \
                 give {:+.6} %.",
                z56.f0_percent, z56.x_n, alt_x_n, alt
            ));
        }
    }

    notes.push(format!(
        "w_c depends on setup inputs that are not part of the dataset: machine error \
         {} (k = {}), indicator resolution {} V, temperature coefficient {} 1/degC over \
         a {} degC interval. Combined-uncertainty figures are only comparable between \
         analyses that share these inputs.",
        opts.budget.machine_error_rel,
        opts.budget.k_machine,
        opts.budget.resolution_v,
        opts.budget.k_temp,
        opts.budget.delta_t_c
    ));

    notes.push(
        "No creep measurement is present in the dataset, so w5 uses the reversibility \
         fallback v/300 at every level."
            .to_string(),
    );

    let worst_b = levels.iter().map(|l| l.b).fold(0.0, f64::max);
    notes.push(format!(
        "Class assignment walks the thresholds table strictly, from the maximum force \
         downward, with no allowances (worst b over the range: {worst_b:.4} %). \
         See classification.per_class for the level-by-level verdicts."
    ));

    notes
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const REFERENCE: &str = include_str!("../../data/reference_calibration.csv");

    fn reference_report(mode: DeflectionMode) -> AnalysisReport {
        let ds = crate::calibration::parse_dataset(REFERENCE).unwrap();
        let opts = AnalysisOptions {
            mode,
            ..AnalysisOptions::default()
        };
        analyze(&ds, &opts).unwrap()
    }

    #[test]
    fn raw_mode_reproduces_reference_error_table() {
        let report = reference_report(DeflectionMode::Raw);
        let expected: [(f64, f64, f64, f64); 8] = [
            (0.5, 1.254217006, 0.5998592, 0.75937412),
            (1.0, 1.274457942, 0.52785738, 0.50485301),
            (1.5, 0.865621763, 0.18398586, 0.40455653),
            (2.0, 0.827652304, 0.35743165, 0.48074891),
            (2.5, 5.310175552, 2.3729547, 11.3939),
            (3.0, 6.890475856, 7.84528856, 8.38960809),
            (3.5, 5.60897036, 0.63699079, 2.72819186),
            (4.0, 7.429278904, 4.4505662, 0.12452842),
        ];
        for (l, (force, b, bp, v)) in report.levels.iter().zip(expected) {
            assert_relative_eq!(l.force_kgf, force);
            assert!((l.b - b).abs() < 5e-4, "b({force}) = {}", l.b);
            assert!((l.b_prime - bp).abs() < 5e-4, "b'({force}) = {}", l.b_prime);
            assert!((l.v - v).abs() < 5e-4, "v({force}) = {}", l.v);
        }
        // The companion column matches the first series' zero-referenced
        // deflections.
        assert_relative_eq!(report.levels[7].x_first_zero_ref, 2.340932195, epsilon = 1e-8);
    }

    #[test]
    fn raw_mode_zero_errors_and_convention_note() {
        let report = reference_report(DeflectionMode::Raw);
        let f0: Vec<f64> = report.zero_errors.iter().map(|z| z.f0_percent).collect();
        assert!((f0[0].abs() - 0.240324).abs() < 5e-5);
        assert!((f0[1].abs() - 0.016158).abs() < 5e-5);
        assert!((f0[2].abs() - 0.428459).abs() < 5e-5);
        assert!((f0[3].abs() - 0.793500).abs() < 5e-5);
        let note = report
            .notes
            .iter()
            .find(|n| n.contains("X_N(X6)"))
            .expect("convention note present");
        assert!(note.contains("-0.794860"), "{note}");
    }

    #[test]
    fn reference_dataset_earns_no_class() {
        let report = reference_report(DeflectionMode::Raw);
        assert_eq!(report.classification.assigned_class, None);
    }

    #[test]
    fn case_a_adds_fit_and_w8() {
        let ds = crate::calibration::parse_dataset(REFERENCE).unwrap();
        let opts = AnalysisOptions {
            mode: DeflectionMode::Raw,
            case: ClassificationCase::A,
            ..AnalysisOptions::default()
        };
        let report = analyze(&ds, &opts).unwrap();
        assert!(report.interpolation.is_some());
        assert!(report.levels.iter().all(|l| l.f_c.is_some()));
        assert!(report.levels.iter().any(|l| l.w[7] > 0.0));
    }

    #[test]
    fn csv_export_has_one_row_per_level() {
        let report = reference_report(DeflectionMode::ZeroReferenced);
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 1 + report.levels.len());
        assert!(csv.starts_with("force_kgf,x_bar_r,b,b_prime,v,f_c,w1"));
    }
}
