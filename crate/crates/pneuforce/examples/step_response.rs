//! Step-response simulation with the reference sensor parametrization:
//! apply 39.24 N at t = 1 s, integrate for 5 s, and report the settle
//! behavior and the sealed-gas conservation quality.
//!
//! ```bash
//! cargo run --release --example step_response
//! ```

use pneuforce::dynamics::{simulate, ForceProfile, SimulationConfig};
use pneuforce::model::SensorModel;

fn main() -> pneuforce::Result<()> {
    let model = SensorModel::default();
    let cfg = SimulationConfig {
        t_end: 5.0,
        decimation: 100,
        ..SimulationConfig::default()
    };
    let profile = ForceProfile::Step {
        force: 39.24,
        at: 1.0,
    };

    let trajectory = simulate(&profile, &model, &cfg)?;
    let last = trajectory.final_state().unwrap();

    println!("samples: {}", trajectory.samples.len());
    println!(
        "final state: x = {:.4} mm, v = {:.2e} m/s, p = {:.4} bar absolute",
        last.x * 1e3,
        last.v,
        last.p / 1e5
    );
    println!(
        "settle time: {:.3} s after the step",
        trajectory.settle_time(cfg.v_stick) - 1.0
    );
    println!(
        "p*V^gamma drift over the run: {:.3e} relative",
        trajectory.conservation_drift(&model.geom, &model.gas)
    );

    // The static balance band the sensor must end up in: the chamber carries
    // the external force, give or take the Coulomb friction.
    let center = model.gas.p_atm + 39.24 / model.geom.area;
    let half = model.piston.f_coulomb / model.geom.area;
    println!(
        "static band: {:.4} bar +- {:.4} bar -> final p is {}",
        center / 1e5,
        half / 1e5,
        if (last.p - center).abs() <= half + 1.0 {
            "inside"
        } else {
            "outside"
        }
    );

    let out = "step_response.csv";
    std::fs::write(out, trajectory.to_csv())?;
    println!("trajectory written to {out}");
    Ok(())
}
