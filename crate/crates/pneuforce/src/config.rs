//! Run configuration: built-in defaults, overridable from a `key = value`
//! file and again from command-line flags. Unknown keys are rejected, and
//! every value passes its owning type's validation before any computation
//! runs.

use std::path::Path;

use crate::calibration::{build_schedule, LoadSchedule, SynthConfig};
use crate::dynamics::SimulationConfig;
use crate::error::{Error, Result};
use crate::metrology::{AnalysisOptions, BudgetInputs, ClassificationCase};
use crate::model::{
    GasProperties, PistonParams, SensorGeometry, SensorModel, TransducerParams, STANDARD_GRAVITY,
};

/// Flat parameter set behind the CLI. Defaults reproduce the reference
/// parametrization of the prototype sensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    // Gas.
    pub gamma: f64,
    pub r_gas: f64,
    pub t0: f64,
    pub p_atm: f64,
    // Geometry.
    pub d_piston: f64,
    pub stroke_max: f64,
    pub d_dead: f64,
    pub l_dead: f64,
    // Piston.
    pub mass: f64,
    pub f_viscous: f64,
    pub f_coulomb: f64,
    pub alpha: f64,
    pub g: f64,
    // Transducer.
    pub v_offset: f64,
    pub v_full_scale: f64,
    pub p_max: f64,
    // Simulation.
    pub dt: f64,
    pub t_end: f64,
    pub qm: f64,
    pub v_stick: f64,
    pub p0: f64,
    pub x0: f64,
    pub input_filter_tau: f64,
    pub decimation: usize,
    // Schedule.
    pub f_max_kgf: f64,
    pub n_steps: usize,
    pub preloads: u32,
    pub hold_s: f64,
    pub gap_s: f64,
    // Synthesis.
    pub seed: u64,
    pub noise_sigma_v: f64,
    pub kgf_gravity: f64,
    pub settle_window_s: f64,
    pub settle_dp_max: f64,
    pub settle_timeout_s: f64,
    // Metrology.
    pub machine_error_rel: f64,
    pub k_machine: f64,
    pub resolution_v: f64,
    pub k_temp: f64,
    pub delta_t_c: f64,
    pub k_expanded: f64,
    pub fit_degree: usize,
    pub u_fit_degree: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            gamma: 1.4,
            r_gas: 287.0,
            t0: 293.15,
            p_atm: 1.013e5,
            d_piston: 10e-3,
            stroke_max: 4e-3,
            d_dead: 4e-3,
            l_dead: 3e-3,
            mass: 8e-3,
            f_viscous: 190.0,
            f_coulomb: 10.0,
            alpha: 0.0,
            g: STANDARD_GRAVITY,
            v_offset: 0.2,
            v_full_scale: 4.7,
            p_max: 5.0e5,
            dt: 1e-5,
            t_end: 5.0,
            qm: 0.0,
            v_stick: 1e-4,
            p0: 2.37e5,
            x0: 4e-3,
            input_filter_tau: 0.05,
            decimation: 1,
            f_max_kgf: 4.0,
            n_steps: 8,
            preloads: 3,
            hold_s: 60.0,
            gap_s: 180.0,
            seed: 0,
            noise_sigma_v: 0.0,
            kgf_gravity: STANDARD_GRAVITY,
            settle_window_s: 0.010,
            settle_dp_max: 1.0,
            settle_timeout_s: 60.0,
            machine_error_rel: 5e-4,
            k_machine: 2.0,
            resolution_v: 1e-6,
            k_temp: 0.00027,
            delta_t_c: 2.0,
            k_expanded: 2.0,
            fit_degree: 1,
            u_fit_degree: 1,
        }
    }
}

macro_rules! setters {
    ($self:ident, $key:ident, $value:ident; f64: [$($f:ident),* $(,)?]; usize: [$($u:ident),* $(,)?]; u32: [$($w:ident),* $(,)?]; u64: [$($q:ident),* $(,)?]) => {
        match $key {
            $(stringify!($f) => $self.$f = parse_num::<f64>($key, $value)?,)*
            $(stringify!($u) => $self.$u = parse_num::<usize>($key, $value)?,)*
            $(stringify!($w) => $self.$w = parse_num::<u32>($key, $value)?,)*
            $(stringify!($q) => $self.$q = parse_num::<u64>($key, $value)?,)*
            other => {
                return Err(Error::Config(format!("unknown key '{other}'")));
            }
        }
    };
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse::<T>()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for key '{key}'")))
}

impl Params {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        setters!(self, key, value;
            f64: [gamma, r_gas, t0, p_atm, d_piston, stroke_max, d_dead, l_dead,
                  mass, f_viscous, f_coulomb, alpha, g, v_offset, v_full_scale, p_max,
                  dt, t_end, qm, v_stick, p0, x0, input_filter_tau,
                  f_max_kgf, hold_s, gap_s, noise_sigma_v, kgf_gravity,
                  settle_window_s, settle_dp_max, settle_timeout_s,
                  machine_error_rel, k_machine, resolution_v, k_temp, delta_t_c,
                  k_expanded];
            usize: [decimation, n_steps, fit_degree, u_fit_degree];
            u32: [preloads];
            u64: [seed]);
        Ok(())
    }

    /// Parse a `key = value` config file: one pair per line, `#` comments,
    /// blank lines ignored.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected 'key = value'", idx + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Config(format!("line {}: {e}", idx + 1)))?;
        }
        Ok(())
    }

    /// Overrides in `key=value` form from the command line.
    pub fn apply_overrides(&mut self, pairs: &[String]) -> Result<()> {
        for pair in pairs {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got '{pair}'")))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn build_model(&self) -> Result<SensorModel> {
        Ok(SensorModel {
            gas: GasProperties::new(self.gamma, self.r_gas, self.t0, self.p_atm)?,
            geom: SensorGeometry::new(self.d_piston, self.stroke_max, self.d_dead, self.l_dead)?,
            piston: PistonParams::new(self.mass, self.f_viscous, self.f_coulomb, self.alpha, self.g)?,
            transducer: TransducerParams::from_range(self.v_offset, self.v_full_scale, self.p_max)?,
        })
    }

    pub fn simulation_config(&self) -> SimulationConfig {
        SimulationConfig {
            dt: self.dt,
            t_end: self.t_end,
            qm: self.qm,
            v_stick: self.v_stick,
            p0: self.p0,
            x0: self.x0,
            input_filter_tau: self.input_filter_tau,
            decimation: self.decimation,
        }
    }

    pub fn schedule(&self) -> Result<LoadSchedule> {
        let mut schedule = build_schedule(self.f_max_kgf, self.n_steps)?;
        schedule.preloads = self.preloads;
        schedule.hold = self.hold_s;
        schedule.gap = self.gap_s;
        Ok(schedule)
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig {
            dt: self.dt,
            v_stick: self.v_stick,
            qm: self.qm,
            p0: self.p0,
            x0: self.x0,
            settle_window: self.settle_window_s,
            settle_dp_max: self.settle_dp_max,
            settle_timeout: self.settle_timeout_s,
            noise_sigma_v: self.noise_sigma_v,
            seed: self.seed,
            kgf_gravity: self.kgf_gravity,
        }
    }

    pub fn analysis_options(
        &self,
        mode: crate::calibration::DeflectionMode,
        case: ClassificationCase,
    ) -> AnalysisOptions {
        AnalysisOptions {
            mode,
            case,
            fit_degree: self.fit_degree,
            budget: BudgetInputs {
                machine_error_rel: self.machine_error_rel,
                k_machine: self.k_machine,
                resolution_v: self.resolution_v,
                k_temp: self.k_temp,
                delta_t_c: self.delta_t_c,
            },
            k_expanded: self.k_expanded,
            u_fit_degree: self.u_fit_degree,
            nominal_max_kgf: None,
        }
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_a_valid_model() {
        let params = Params::default();
        let model = params.build_model().unwrap();
        assert_eq!(model.gas.gamma, 1.4);
        assert_eq!(model.geom.d_piston, 10e-3);
        params.schedule().unwrap();
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut params = Params::default();
        assert!(params.set("no_such_key", "1").is_err());
        assert!(params.apply_text("gamma = 1.0\nbogus = 2\n").is_err());
    }

    #[test]
    fn file_text_overrides_defaults() {
        let mut params = Params::default();
        params
            .apply_text("# comment\n\ngamma = 1.0\nf_coulomb = 0\nseed = 7\n")
            .unwrap();
        assert_eq!(params.gamma, 1.0);
        assert_eq!(params.f_coulomb, 0.0);
        assert_eq!(params.seed, 7);
    }

    #[test]
    fn invalid_values_surface_as_config_errors() {
        let mut params = Params::default();
        let err = params.apply_text("dt = fast\n").unwrap_err();
        assert!(err.to_string().contains("dt"), "{err}");
        params.apply_text("d_piston = -1\n").unwrap();
        assert!(params.build_model().is_err());
    }
}
