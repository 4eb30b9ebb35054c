//! Ideal-gas sanity checks for the sealed chamber: how far the pressure can
//! climb under full compression and how temperature moves the charge.
//!
//! ```bash
//! cargo run --example gas_laws
//! ```

use pneuforce::dimensioning::{amonton, boyle, charles};
use pneuforce::model::{chamber_volume, SensorGeometry};

fn main() -> pneuforce::Result<()> {
    let geom = SensorGeometry::prototype();
    let v_extended = chamber_volume(&geom, geom.stroke_max)?;
    let v_compressed = geom.v_dead;

    // Isothermal full-stroke compression from atmospheric charge.
    let p1 = 1.013e5;
    let p2 = boyle(p1, v_extended, v_compressed)?;
    println!(
        "full-stroke compression: {:.4} bar -> {:.4} bar ({:.1}x volume ratio)",
        p1 / 1e5,
        p2 / 1e5,
        v_extended / v_compressed
    );

    // A 20 K warm-up at constant volume raises the charge pressure.
    let p_charge = 2.37e5;
    let p_warm = amonton(p_charge, 293.15, 313.15)?;
    println!(
        "charge at {:.3} bar warms 20 K: {:.3} bar ({:+.2} %)",
        p_charge / 1e5,
        p_warm / 1e5,
        (p_warm / p_charge - 1.0) * 100.0
    );

    // The same warm-up at constant pressure would need this much volume.
    let v_warm = charles(v_extended, 293.15, 313.15)?;
    println!(
        "isobaric expansion of the extended chamber: {:.4} -> {:.4} mm^3",
        v_extended * 1e9,
        v_warm * 1e9
    );
    Ok(())
}
