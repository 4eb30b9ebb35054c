//! Closed-form design calculations: the force/pressure/diameter relation of
//! the piston face and the ideal-gas laws used for sizing sanity checks.
//!
//! Pressures here are gauge, matching the differential working range of the
//! pressure transducer.

use crate::error::{Error, Result};

fn require_positive(field: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            field,
            requirement: "> 0",
            value,
        })
    }
}

/// Piston diameter that produces `f_max` at gauge pressure `p_max_gauge`:
/// d = 2·sqrt(F/(π·P)).
pub fn solve_diameter(f_max: f64, p_max_gauge: f64) -> Result<f64> {
    require_positive("f_max", f_max)?;
    require_positive("p_max_gauge", p_max_gauge)?;
    Ok(2.0 * (f_max / (std::f64::consts::PI * p_max_gauge)).sqrt())
}

/// Face force at gauge pressure `p_gauge` on a piston of diameter `d`:
/// F = P·π·(d/2)².
pub fn solve_force(p_gauge: f64, d: f64) -> Result<f64> {
    require_positive("d", d)?;
    Ok(p_gauge * std::f64::consts::PI * (d / 2.0) * (d / 2.0))
}

/// Gauge pressure required for force `f` on a piston of diameter `d`.
pub fn solve_pressure(f: f64, d: f64) -> Result<f64> {
    require_positive("d", d)?;
    Ok(f / (std::f64::consts::PI * (d / 2.0) * (d / 2.0)))
}

/// Isothermal compression: p2 = p1·v1/v2.
pub fn boyle(p1: f64, v1: f64, v2: f64) -> Result<f64> {
    require_positive("p1", p1)?;
    require_positive("v1", v1)?;
    require_positive("v2", v2)?;
    Ok(p1 * v1 / v2)
}

/// Isobaric heating: v2 = v1·t2/t1.
pub fn charles(v1: f64, t1: f64, t2: f64) -> Result<f64> {
    require_positive("v1", v1)?;
    require_positive("t1", t1)?;
    require_positive("t2", t2)?;
    Ok(v1 * t2 / t1)
}

/// Isochoric heating: p2 = p1·t2/t1.
pub fn amonton(p1: f64, t1: f64, t2: f64) -> Result<f64> {
    require_positive("p1", p1)?;
    require_positive("t1", t1)?;
    require_positive("t2", t2)?;
    Ok(p1 * t2 / t1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn diameter_for_full_scale_force() {
        let d = solve_diameter(40.0, 5.0e5).unwrap();
        assert!((d - 10.09e-3).abs() < 0.005e-3, "d = {d}");
        // Inverse of the 10 mm sizing case.
        assert_relative_eq!(
            solve_diameter(39.269908169872416, 5.0e5).unwrap(),
            10.0e-3,
            max_relative = 1e-12
        );
        // d scales with sqrt(F).
        assert_relative_eq!(
            solve_diameter(4.0 * 40.0, 5.0e5).unwrap(),
            2.0 * solve_diameter(40.0, 5.0e5).unwrap(),
            max_relative = 1e-12
        );
        assert!(solve_diameter(-1.0, 5.0e5).is_err());
    }

    #[test]
    fn force_pressure_rearrangements() {
        assert!((solve_force(5.0e5, 10.09e-3).unwrap() - 40.0).abs() < 0.05);
        assert_eq!(solve_pressure(0.0, 0.010).unwrap(), 0.0);
        assert_relative_eq!(
            solve_pressure(39.269908169872416, 0.010).unwrap(),
            5.0e5,
            max_relative = 1e-12
        );
        assert!(solve_force(5.0e5, 0.0).is_err());
    }

    #[test]
    fn rearrangements_are_mutually_consistent() {
        let (f, d) = (27.3, 8.4e-3);
        let p = solve_pressure(f, d).unwrap();
        assert_relative_eq!(solve_force(p, d).unwrap(), f, max_relative = 1e-12);
        assert_relative_eq!(solve_diameter(f, p).unwrap(), d, max_relative = 1e-12);
    }

    #[test]
    fn gas_laws() {
        assert_relative_eq!(boyle(2e5, 1e-6, 5e-7).unwrap(), 4e5, max_relative = 1e-12);
        assert_relative_eq!(boyle(1.7e5, 1e-6, 1e-6).unwrap(), 1.7e5, max_relative = 1e-12);
        // Full-stroke compression of the default chamber into its dead volume.
        assert_relative_eq!(
            boyle(1.013e5, 3.518583772020568e-7, 3.769911184307751e-8).unwrap(),
            9.454666666666666e5,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            charles(1e-6, 293.15, 293.15).unwrap(),
            1e-6,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            amonton(1e5, 293.15, 586.30).unwrap(),
            2e5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            amonton(2.37e5, 293.15, 313.15).unwrap(),
            2.5316919665700154e5,
            max_relative = 1e-9
        );
        assert!(boyle(1e5, 1e-6, 0.0).is_err());
        assert!(charles(1e-6, 0.0, 300.0).is_err());
    }
}
