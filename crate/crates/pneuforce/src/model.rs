//! Physical types of the sealed-chamber sensor and the pure algebraic
//! conversions between pressure, force, chamber volume, and transducer
//! voltage.
//!
//! All quantities are SI (Pa, N, m, kg, s, K). Pressures handed to
//! [`pressure_to_force`] and [`transducer_voltage`] are gauge/differential
//! (chamber minus atmosphere); [`SensorState::p`] is absolute.

use crate::error::{Error, Result};

/// Conversion constant for forces expressed in kilogram-force at the I/O
/// boundary: 1 kgf = 9.80665 N exactly.
pub const STANDARD_GRAVITY: f64 = 9.80665;

/// Thermodynamic constants of the encapsulated air.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasProperties {
    /// Polytropic exponent: 1 for isothermal, 1.4 for adiabatic air.
    pub gamma: f64,
    /// Specific gas constant (J/(kg·K)).
    pub r_specific: f64,
    /// Reference temperature (K).
    pub t_ref: f64,
    /// Atmospheric pressure (Pa).
    pub p_atm: f64,
}

impl GasProperties {
    pub fn new(gamma: f64, r_specific: f64, t_ref: f64, p_atm: f64) -> Result<Self> {
        let gas = GasProperties {
            gamma,
            r_specific,
            t_ref,
            p_atm,
        };
        gas.validate()?;
        Ok(gas)
    }

    /// Dry air at ambient conditions.
    pub fn air() -> Self {
        GasProperties {
            gamma: 1.4,
            r_specific: 287.0,
            t_ref: 293.15,
            p_atm: 1.013e5,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.gamma < 1.0 {
            return Err(Error::Domain {
                field: "gamma",
                requirement: ">= 1",
                value: self.gamma,
            });
        }
        for (field, value) in [
            ("r_specific", self.r_specific),
            ("t_ref", self.t_ref),
            ("p_atm", self.p_atm),
        ] {
            if value <= 0.0 || value.is_nan() {
                return Err(Error::Domain {
                    field,
                    requirement: "> 0",
                    value,
                });
            }
        }
        Ok(())
    }
}

impl Default for GasProperties {
    fn default() -> Self {
        Self::air()
    }
}

/// Piston and chamber geometry. Construct through [`SensorGeometry::new`] so
/// the derived effective area and dead volume stay consistent with the bore
/// dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorGeometry {
    /// Piston diameter (m).
    pub d_piston: f64,
    /// Effective piston face area (m²), π·d²/4.
    pub area: f64,
    /// Maximum piston travel (m).
    pub stroke_max: f64,
    /// Dead-volume bore diameter (m).
    pub d_dead: f64,
    /// Dead-volume length (m).
    pub l_dead: f64,
    /// Dead volume (m³), the passage joining the chamber to the pressure
    /// transducer, never swept by the piston.
    pub v_dead: f64,
}

impl SensorGeometry {
    pub fn new(d_piston: f64, stroke_max: f64, d_dead: f64, l_dead: f64) -> Result<Self> {
        for (field, value) in [
            ("d_piston", d_piston),
            ("stroke_max", stroke_max),
            ("d_dead", d_dead),
            ("l_dead", l_dead),
        ] {
            if value <= 0.0 || value.is_nan() {
                return Err(Error::Domain {
                    field,
                    requirement: "> 0",
                    value,
                });
            }
        }
        Ok(SensorGeometry {
            d_piston,
            area: std::f64::consts::PI * d_piston * d_piston / 4.0,
            stroke_max,
            d_dead,
            l_dead,
            v_dead: std::f64::consts::PI * (d_dead / 2.0) * (d_dead / 2.0) * l_dead,
        })
    }

    /// 10 mm piston, 4 mm stroke, 4 mm x 3 mm dead-volume bore.
    pub fn prototype() -> Self {
        Self::new(10e-3, 4e-3, 4e-3, 3e-3).expect("prototype dimensions are valid")
    }
}

impl Default for SensorGeometry {
    fn default() -> Self {
        Self::prototype()
    }
}

/// Piston inertia, friction, and mounting parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PistonParams {
    /// Piston mass (kg).
    pub mass: f64,
    /// Viscous friction coefficient (N·s/m).
    pub f_viscous: f64,
    /// Coulomb friction magnitude (N).
    pub f_coulomb: f64,
    /// Inclination of the piston axis from horizontal (rad).
    pub alpha: f64,
    /// Gravitational acceleration (m/s²).
    pub g: f64,
}

impl PistonParams {
    pub fn new(mass: f64, f_viscous: f64, f_coulomb: f64, alpha: f64, g: f64) -> Result<Self> {
        let piston = PistonParams {
            mass,
            f_viscous,
            f_coulomb,
            alpha,
            g,
        };
        piston.validate()?;
        Ok(piston)
    }

    /// 8 g piston with the prototype friction constants.
    pub fn prototype() -> Self {
        PistonParams {
            mass: 8e-3,
            f_viscous: 190.0,
            f_coulomb: 10.0,
            alpha: 0.0,
            g: STANDARD_GRAVITY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mass <= 0.0 || self.mass.is_nan() {
            return Err(Error::Domain {
                field: "mass",
                requirement: "> 0",
                value: self.mass,
            });
        }
        if self.f_viscous < 0.0 {
            return Err(Error::Domain {
                field: "f_viscous",
                requirement: ">= 0",
                value: self.f_viscous,
            });
        }
        if self.f_coulomb < 0.0 {
            return Err(Error::Domain {
                field: "f_coulomb",
                requirement: ">= 0",
                value: self.f_coulomb,
            });
        }
        if !(-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2).contains(&self.alpha) {
            return Err(Error::OutOfRange {
                field: "alpha",
                value: self.alpha,
                min: -std::f64::consts::FRAC_PI_2,
                max: std::f64::consts::FRAC_PI_2,
            });
        }
        Ok(())
    }
}

impl Default for PistonParams {
    fn default() -> Self {
        Self::prototype()
    }
}

/// Instantaneous piston/chamber state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorState {
    /// Piston position / chamber length (m), clamped to [0, stroke_max].
    pub x: f64,
    /// Piston velocity (m/s).
    pub v: f64,
    /// Chamber absolute pressure (Pa).
    pub p: f64,
    /// Simulation time (s).
    pub t: f64,
}

/// Linear law of the differential pressure transducer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransducerParams {
    /// Zero-pressure output (V).
    pub v_offset: f64,
    /// Output slope (V/Pa).
    pub sensitivity: f64,
    /// Full-scale differential pressure (Pa).
    pub p_max: f64,
    /// Full-scale output (V).
    pub v_full_scale: f64,
}

impl TransducerParams {
    pub fn new(v_offset: f64, sensitivity: f64, p_max: f64, v_full_scale: f64) -> Result<Self> {
        let t = TransducerParams {
            v_offset,
            sensitivity,
            p_max,
            v_full_scale,
        };
        t.validate()?;
        Ok(t)
    }

    /// Build the law from its endpoints, deriving the slope.
    pub fn from_range(v_offset: f64, v_full_scale: f64, p_max: f64) -> Result<Self> {
        if p_max <= 0.0 || p_max.is_nan() {
            return Err(Error::Domain {
                field: "p_max",
                requirement: "> 0",
                value: p_max,
            });
        }
        Self::new(
            v_offset,
            (v_full_scale - v_offset) / p_max,
            p_max,
            v_full_scale,
        )
    }

    /// MPX5500D: 0.2 V at zero differential pressure, 4.7 V at 500 kPa
    /// (9.0 mV/kPa).
    pub fn mpx5500() -> Self {
        Self::from_range(0.2, 4.7, 5.0e5).expect("MPX5500 constants are valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.sensitivity <= 0.0 || self.sensitivity.is_nan() {
            return Err(Error::Domain {
                field: "sensitivity",
                requirement: "> 0",
                value: self.sensitivity,
            });
        }
        let residual = self.v_offset + self.sensitivity * self.p_max - self.v_full_scale;
        if residual.abs() > 1e-9 {
            return Err(Error::Domain {
                field: "v_full_scale",
                requirement: "consistent with v_offset + sensitivity * p_max (1e-9 V)",
                value: residual,
            });
        }
        Ok(())
    }
}

impl Default for TransducerParams {
    fn default() -> Self {
        Self::mpx5500()
    }
}

/// Complete sensor parametrization used by the simulator and the synthetic
/// calibration pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SensorModel {
    pub gas: GasProperties,
    pub geom: SensorGeometry,
    pub piston: PistonParams,
    pub transducer: TransducerParams,
}

/// Transducer output with its saturation flag. Overload tests legitimately
/// drive the sensor past full scale, so saturation is reported, not raised.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransducerReading {
    pub volts: f64,
    pub saturated: bool,
}

/// Chamber volume at piston position `x`: swept volume plus dead volume.
pub fn chamber_volume(geom: &SensorGeometry, x: f64) -> Result<f64> {
    if !(0.0..=geom.stroke_max).contains(&x) {
        return Err(Error::OutOfRange {
            field: "x",
            value: x,
            min: 0.0,
            max: geom.stroke_max,
        });
    }
    Ok(geom.area * x + geom.v_dead)
}

/// Force exerted on the piston face by a gauge pressure.
pub fn pressure_to_force(p_gauge: f64, geom: &SensorGeometry) -> f64 {
    p_gauge * geom.area
}

/// Transducer output for a differential pressure, clamped to the output
/// range with the saturation flag set outside [0, p_max].
pub fn transducer_voltage(p_diff: f64, t: &TransducerParams) -> TransducerReading {
    let raw = t.v_offset + t.sensitivity * p_diff;
    if raw < t.v_offset {
        TransducerReading {
            volts: t.v_offset,
            saturated: true,
        }
    } else if raw > t.v_full_scale {
        TransducerReading {
            volts: t.v_full_scale,
            saturated: true,
        }
    } else {
        TransducerReading {
            volts: raw,
            saturated: false,
        }
    }
}

/// Exact inverse of [`transducer_voltage`] on its linear range.
pub fn voltage_to_pressure(v: f64, t: &TransducerParams) -> Result<f64> {
    if v < t.v_offset || v > t.v_full_scale {
        return Err(Error::OutOfRange {
            field: "v",
            value: v,
            min: t.v_offset,
            max: t.v_full_scale,
        });
    }
    Ok((v - t.v_offset) / t.sensitivity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn geometry_derives_area_and_dead_volume() {
        let g = SensorGeometry::new(0.010, 0.004, 0.004, 0.003).unwrap();
        assert_relative_eq!(g.area, 7.853981633974483e-5, max_relative = 1e-12);
        assert_relative_eq!(g.v_dead, 3.769911184307751e-8, max_relative = 1e-12);
        // area * 4 / pi recovers d^2 to machine precision
        assert_relative_eq!(
            g.area * 4.0 / std::f64::consts::PI,
            0.010 * 0.010,
            max_relative = 1e-15
        );
    }

    #[test]
    fn geometry_rejects_non_positive_dimension() {
        let err = SensorGeometry::new(0.010, 0.004, 0.004, 0.0).unwrap_err();
        assert!(err.to_string().contains("l_dead"));
    }

    #[test]
    fn geometry_area_scales_with_diameter_squared() {
        let g10 = SensorGeometry::new(0.010, 0.004, 0.004, 0.003).unwrap();
        let g20 = SensorGeometry::new(0.020, 0.004, 0.004, 0.003).unwrap();
        assert_relative_eq!(g20.area, 4.0 * g10.area, max_relative = 1e-15);
    }

    #[test]
    fn chamber_volume_affine_in_position() {
        let g = SensorGeometry::prototype();
        assert_relative_eq!(
            chamber_volume(&g, 0.0).unwrap(),
            3.769911184307751e-8,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            chamber_volume(&g, 4e-3).unwrap(),
            3.518583772020568e-7,
            max_relative = 1e-12
        );
        assert!(chamber_volume(&g, 5e-3).is_err());
        assert!(chamber_volume(&g, -1e-6).is_err());
    }

    #[test]
    fn pressure_force_matches_sizing_cases() {
        let g10 = SensorGeometry::prototype();
        assert_relative_eq!(
            pressure_to_force(5.0e5, &g10),
            39.269908169872416,
            max_relative = 1e-12
        );
        assert_eq!(pressure_to_force(0.0, &g10), 0.0);

        let g1009 = SensorGeometry::new(10.09e-3, 4e-3, 4e-3, 3e-3).unwrap();
        assert!((pressure_to_force(5.0e5, &g1009) - 40.0).abs() < 0.05);
    }

    #[test]
    fn transducer_law_endpoints_and_midpoint() {
        let t = TransducerParams::mpx5500();
        assert_relative_eq!(transducer_voltage(0.0, &t).volts, 0.2, max_relative = 1e-12);
        assert_relative_eq!(
            transducer_voltage(5.0e5, &t).volts,
            4.7,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            transducer_voltage(2.5e5, &t).volts,
            2.45,
            max_relative = 1e-12
        );
        assert!(!transducer_voltage(2.5e5, &t).saturated);

        let over = transducer_voltage(6.0e5, &t);
        assert!(over.saturated);
        assert_eq!(over.volts, 4.7);
        let under = transducer_voltage(-1.0e4, &t);
        assert!(under.saturated);
        assert_eq!(under.volts, 0.2);
    }

    #[test]
    fn voltage_inversion_endpoints() {
        let t = TransducerParams::mpx5500();
        assert_relative_eq!(voltage_to_pressure(0.2, &t).unwrap(), 0.0, epsilon = 1e-9);
        assert_relative_eq!(
            voltage_to_pressure(4.7, &t).unwrap(),
            5.0e5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            voltage_to_pressure(2.45, &t).unwrap(),
            2.5e5,
            max_relative = 1e-12
        );
        assert!(voltage_to_pressure(0.1, &t).is_err());
        assert!(voltage_to_pressure(4.8, &t).is_err());
    }

    #[test]
    fn transducer_consistency_invariant_enforced() {
        assert!(TransducerParams::new(0.2, 9.0e-6, 5.0e5, 4.7).is_ok());
        assert!(TransducerParams::new(0.2, 9.0e-6, 5.0e5, 4.8).is_err());
    }
}
