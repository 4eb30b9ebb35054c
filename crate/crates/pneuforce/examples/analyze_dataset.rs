//! Analyze the bundled bench-run dataset: error metrics per force level,
//! zero errors per series pair, and the class verdict.
//!
//! ```bash
//! cargo run --example analyze_dataset
//! ```

use pneuforce::calibration::{parse_dataset, DeflectionMode};
use pneuforce::metrology::{analyze, AnalysisOptions};

const DATASET: &str = include_str!("../data/reference_calibration.csv");

fn main() -> pneuforce::Result<()> {
    let dataset = parse_dataset(DATASET)?;

    // Raw-indication convention, specific-forces classification.
    let opts = AnalysisOptions {
        mode: DeflectionMode::Raw,
        ..AnalysisOptions::default()
    };
    let report = analyze(&dataset, &opts)?;

    print!("{}", report.summary());
    println!();
    println!("notes:");
    for note in &report.notes {
        println!("  - {note}");
    }

    std::fs::write("analysis_report.json", report.to_json())?;
    std::fs::write("analysis_report.csv", report.to_csv())?;
    println!();
    println!("full report written to analysis_report.json / .csv");
    Ok(())
}
