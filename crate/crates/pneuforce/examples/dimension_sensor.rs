//! Sizing the piston: the force/pressure/diameter triangle.
//!
//! ```bash
//! cargo run --example dimension_sensor
//! ```

use pneuforce::dimensioning::{solve_diameter, solve_force, solve_pressure};

fn main() -> pneuforce::Result<()> {
    // Target: read 40 N at the transducer's 500 kPa differential full scale.
    let f_max = 40.0;
    let p_max = 5.0e5;
    let d = solve_diameter(f_max, p_max)?;
    println!(
        "piston diameter for {f_max} N at {p_max:.0} Pa: {:.3} mm",
        d * 1e3
    );

    // Rounding the bore to 10 mm costs a little range.
    let d_round = 10e-3;
    let f_round = solve_force(p_max, d_round)?;
    println!(
        "a {:.0} mm bore reaches {:.3} N at the same pressure",
        d_round * 1e3,
        f_round
    );

    // And the pressure the rounded bore needs for the full 40 N.
    let p_needed = solve_pressure(f_max, d_round)?;
    println!(
        "driving the {:.0} mm bore to {f_max} N needs {:.1} kPa",
        d_round * 1e3,
        p_needed / 1e3
    );
    Ok(())
}
