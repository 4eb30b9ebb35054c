//! The eight-component uncertainty budget of the bundled dataset, level by
//! level, plus an expanded-uncertainty curve over the calibration range.
//!
//! ```bash
//! cargo run --example uncertainty_budget
//! ```

use pneuforce::calibration::{parse_dataset, DeflectionMode};
use pneuforce::metrology::{analyze, polyval, AnalysisOptions, BudgetInputs, ClassificationCase};

const DATASET: &str = include_str!("../data/reference_calibration.csv");

fn main() -> pneuforce::Result<()> {
    let dataset = parse_dataset(DATASET)?;
    let opts = AnalysisOptions {
        mode: DeflectionMode::Raw,
        // Case A adds the interpolation fit and its w8 component.
        case: ClassificationCase::A,
        fit_degree: 1,
        budget: BudgetInputs {
            machine_error_rel: 5e-4,
            k_machine: 2.0,
            resolution_v: 1e-6,
            k_temp: 0.00027,
            delta_t_c: 2.0,
        },
        ..AnalysisOptions::default()
    };
    let report = analyze(&dataset, &opts)?;

    println!("force  w1        w2        w3        w5        w6        w8        wc");
    for level in &report.levels {
        println!(
            "{:4}  {:.2e}  {:.2e}  {:.2e}  {:.2e}  {:.2e}  {:.2e}  {:.4e}",
            level.force_kgf,
            level.w[0],
            level.w[1],
            level.w[2],
            level.w[4],
            level.w[5],
            level.w[7],
            level.wc
        );
    }

    let expanded = &report.expanded;
    println!();
    println!(
        "expanded uncertainty (k = {}): fit coefficients {:?}",
        expanded.k, expanded.coefficients
    );
    for (force, u) in dataset.force_levels.iter().zip(&expanded.u) {
        println!(
            "  U({force} kgf) = {:.4e}, quoted curve {:.4e}",
            u,
            polyval(&expanded.coefficients, *force)
        );
    }
    Ok(())
}
