//! Synthesize a full six-series calibration dataset by driving the
//! simulator through the load schedule, with seeded reading noise, and
//! write it in the dataset CSV schema.
//!
//! ```bash
//! cargo run --release --example synthetic_calibration
//! ```

use pneuforce::calibration::{
    build_schedule, run_synthetic_calibration, serialize_dataset, SeriesId, SynthConfig,
};
use pneuforce::model::SensorModel;

fn main() -> pneuforce::Result<()> {
    let model = SensorModel::default();
    let schedule = build_schedule(4.0, 8)?;
    let cfg = SynthConfig {
        noise_sigma_v: 5e-4,
        seed: 17,
        ..SynthConfig::default()
    };

    let dataset = run_synthetic_calibration(&schedule, &model, &cfg)?;

    println!(
        "zero indication: {:.6} V",
        dataset.zero_indication.unwrap()
    );
    println!("force levels (kgf): {:?}", dataset.force_levels);
    for id in SeriesId::ALL {
        let series = dataset.series(id);
        println!(
            "{} ({}°, {:?}): first {:.6} V, last {:.6} V",
            id.label(),
            id.orientation_deg(),
            id.direction(),
            series.readings.first().unwrap(),
            series.readings.last().unwrap(),
        );
    }

    // Coulomb friction shows up as hysteresis between the legs.
    let up = &dataset.series(SeriesId::X3).readings;
    let down = &dataset.series(SeriesId::X4).readings;
    println!(
        "hysteresis at 2 kgf: {:.4} V (friction band is {:.4} V)",
        down[3] - up[3],
        2.0 * model.piston.f_coulomb / model.geom.area * model.transducer.sensitivity
    );

    let out = "synthetic_calibration.csv";
    std::fs::write(out, serialize_dataset(&dataset))?;
    println!("dataset written to {out}");
    Ok(())
}
