//! Continuous dynamics of the sealed sensor: pressure-rate and motion
//! equations, Karnopp stiction, hard stops, a fixed-step RK4 integrator, and
//! force-input profiles.
//!
//! Sign convention: positive external force compresses the chamber (drives
//! `x` toward 0); the gauge-pressure force pushes the piston out.

use crate::error::{Error, Result};
use crate::model::{
    transducer_voltage, GasProperties, PistonParams, SensorGeometry, SensorModel, SensorState,
};

/// Fixed-step integrator and initial-condition settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Integrator step (s).
    pub dt: f64,
    /// Simulated duration (s).
    pub t_end: f64,
    /// Chamber mass-flow rate (kg/s); 0 = sealed.
    pub qm: f64,
    /// Stiction velocity threshold (m/s).
    pub v_stick: f64,
    /// Initial absolute chamber pressure (Pa).
    pub p0: f64,
    /// Initial piston position (m).
    pub x0: f64,
    /// First-order input-smoothing time constant (s); 0 disables.
    pub input_filter_tau: f64,
    /// Record every n-th integrator step.
    pub decimation: usize,
}

impl SimulationConfig {
    pub fn validate(&self, geom: &SensorGeometry) -> Result<()> {
        if self.dt <= 0.0 || self.dt.is_nan() {
            return Err(Error::Domain {
                field: "dt",
                requirement: "> 0",
                value: self.dt,
            });
        }
        if self.t_end < self.dt {
            return Err(Error::Domain {
                field: "t_end",
                requirement: ">= dt",
                value: self.t_end,
            });
        }
        if self.v_stick <= 0.0 || self.v_stick.is_nan() {
            return Err(Error::Domain {
                field: "v_stick",
                requirement: "> 0",
                value: self.v_stick,
            });
        }
        if self.p0 <= 0.0 || self.p0.is_nan() {
            return Err(Error::Domain {
                field: "p0",
                requirement: "> 0",
                value: self.p0,
            });
        }
        if !(0.0..=geom.stroke_max).contains(&self.x0) {
            return Err(Error::OutOfRange {
                field: "x0",
                value: self.x0,
                min: 0.0,
                max: geom.stroke_max,
            });
        }
        if self.input_filter_tau < 0.0 {
            return Err(Error::Domain {
                field: "input_filter_tau",
                requirement: ">= 0",
                value: self.input_filter_tau,
            });
        }
        if self.decimation == 0 {
            return Err(Error::Domain {
                field: "decimation",
                requirement: ">= 1",
                value: 0.0,
            });
        }
        Ok(())
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            dt: 1e-5,
            t_end: 5.0,
            qm: 0.0,
            v_stick: 1e-4,
            p0: 2.37e5,
            x0: 4e-3,
            input_filter_tau: 0.05,
            decimation: 1,
        }
    }
}

/// External force as a function of time (N, s).
#[derive(Debug, Clone, PartialEq)]
pub enum ForceProfile {
    Constant {
        force: f64,
    },
    /// 0 before `at`, `force` from `at` on.
    Step {
        force: f64,
        at: f64,
    },
    /// Linear rise from 0 to `force` between `start` and `end`, held after.
    Ramp {
        force: f64,
        start: f64,
        end: f64,
    },
    /// `levels[i]` applies from `times[i]` on; 0 before `times[0]`.
    Staircase {
        levels: Vec<f64>,
        times: Vec<f64>,
    },
    /// Piecewise-linear interpolation of (t, force) samples; clamped at the
    /// ends.
    Table {
        samples: Vec<(f64, f64)>,
    },
}

impl ForceProfile {
    pub fn validate(&self) -> Result<()> {
        match self {
            ForceProfile::Constant { .. } | ForceProfile::Step { .. } => Ok(()),
            ForceProfile::Ramp { start, end, .. } => {
                if end <= start {
                    return Err(Error::Config(format!(
                        "ramp end ({end}) must be after start ({start})"
                    )));
                }
                Ok(())
            }
            ForceProfile::Staircase { levels, times } => {
                if levels.is_empty() || levels.len() != times.len() {
                    return Err(Error::Config(
                        "staircase needs equally many levels and times".into(),
                    ));
                }
                if levels.iter().any(|l| *l < 0.0) {
                    return Err(Error::Config("staircase levels must be >= 0".into()));
                }
                if times.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config(
                        "staircase times must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
            ForceProfile::Table { samples } => {
                if samples.len() < 2 {
                    return Err(Error::Config("table needs at least two samples".into()));
                }
                if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(Error::Config(
                        "table times must be strictly increasing".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ForceProfile::Constant { force } => *force,
            ForceProfile::Step { force, at } => {
                if t >= *at {
                    *force
                } else {
                    0.0
                }
            }
            ForceProfile::Ramp { force, start, end } => {
                if t <= *start {
                    0.0
                } else if t >= *end {
                    *force
                } else {
                    force * (t - start) / (end - start)
                }
            }
            ForceProfile::Staircase { levels, times } => {
                let mut current = 0.0;
                for (level, at) in levels.iter().zip(times) {
                    if t >= *at {
                        current = *level;
                    } else {
                        break;
                    }
                }
                current
            }
            ForceProfile::Table { samples } => {
                if t <= samples[0].0 {
                    return samples[0].1;
                }
                if t >= samples[samples.len() - 1].0 {
                    return samples[samples.len() - 1].1;
                }
                let idx = samples.partition_point(|(ts, _)| *ts <= t);
                let (t0, f0) = samples[idx - 1];
                let (t1, f1) = samples[idx];
                f0 + (f1 - f0) * (t - t0) / (t1 - t0)
            }
        }
    }
}

/// One recorded integrator sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub p: f64,
    /// Force entering the model (after the input filter).
    pub f_in: f64,
    /// Transducer output for the gauge pressure at this instant.
    pub v_out: f64,
}

/// Time series produced by [`simulate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    /// CSV export: header `t,x,v,p,F_in,V_out`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.samples.len() * 96 + 24);
        out.push_str("t,x,v,p,F_in,V_out\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                s.t, s.x, s.v, s.p, s.f_in, s.v_out
            ));
        }
        out
    }

    /// Maximum relative drift of the sealed-chamber first integral
    /// p·(A·x + V_di)^gamma over the recorded samples.
    pub fn conservation_drift(&self, geom: &SensorGeometry, gas: &GasProperties) -> f64 {
        let invariant =
            |s: &TrajectorySample| s.p * (geom.area * s.x + geom.v_dead).powf(gas.gamma);
        let first = match self.samples.first() {
            Some(s) => invariant(s),
            None => return 0.0,
        };
        self.samples
            .iter()
            .map(|s| (invariant(s) / first - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Time of the last sample with |v| >= v_stick; 0 if the piston never
    /// moved.
    pub fn settle_time(&self, v_stick: f64) -> f64 {
        self.samples
            .iter()
            .rev()
            .find(|s| s.v.abs() >= v_stick)
            .map_or(0.0, |s| s.t)
    }

    pub fn final_state(&self) -> Option<SensorState> {
        self.samples.last().map(|s| SensorState {
            x: s.x,
            v: s.v,
            p: s.p,
            t: s.t,
        })
    }
}

/// Time derivatives of the state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub dx: f64,
    pub dv: f64,
    pub dp: f64,
}

/// Chamber pressure rate: (R·T·γ·qm − γ·p·A·v) / (A·x + V_di). With qm = 0
/// this is the sealed-sensor law, whose first integral is p·V^γ.
pub fn pressure_rate(
    state: &SensorState,
    geom: &SensorGeometry,
    gas: &GasProperties,
    qm: f64,
) -> f64 {
    let volume = geom.area * state.x + geom.v_dead;
    (gas.r_specific * gas.t_ref * gas.gamma * qm - gas.gamma * state.p * geom.area * state.v)
        / volume
}

/// Coulomb + viscous friction with Karnopp stiction regularization.
///
/// Sliding (|v| >= v_stick): f_cf·sgn(v) + f_vf·v. Inside the stiction band
/// the friction cancels the net drive while |drive| <= f_cf, else saturates
/// at the breakaway value f_cf·sgn(drive).
pub fn friction_force(v: f64, net_drive: f64, params: &PistonParams, v_stick: f64) -> f64 {
    if v.abs() >= v_stick {
        params.f_coulomb * v.signum() + params.f_viscous * v
    } else if net_drive.abs() <= params.f_coulomb {
        net_drive
    } else {
        params.f_coulomb * net_drive.signum()
    }
}

/// Sum of all non-friction forces along +x: gauge-pressure force minus the
/// axial weight component minus the external (compressive) force.
fn net_drive(state: &SensorState, f_ext: f64, geom: &SensorGeometry, gas: &GasProperties, piston: &PistonParams) -> f64 {
    (state.p - gas.p_atm) * geom.area - piston.mass * piston.g * piston.alpha.sin() - f_ext
}

/// Full state derivative with stop projection: at a hard stop, motion
/// pushing into the stop is projected to zero and the pressure rate follows
/// the projected velocity.
pub fn state_derivative(
    state: &SensorState,
    f_ext: f64,
    geom: &SensorGeometry,
    gas: &GasProperties,
    piston: &PistonParams,
    v_stick: f64,
    qm: f64,
) -> Derivatives {
    let drive = net_drive(state, f_ext, geom, gas, piston);
    let friction = friction_force(state.v, drive, piston, v_stick);
    let mut dx = state.v;
    let mut dv = (drive - friction) / piston.mass;
    if state.x <= 0.0 {
        if dx < 0.0 {
            dx = 0.0;
        }
        if dv < 0.0 {
            dv = 0.0;
        }
    } else if state.x >= geom.stroke_max {
        if dx > 0.0 {
            dx = 0.0;
        }
        if dv > 0.0 {
            dv = 0.0;
        }
    }
    let projected = SensorState { v: dx, ..*state };
    Derivatives {
        dx,
        dv,
        dp: pressure_rate(&projected, geom, gas, qm),
    }
}

fn clamp_stops(state: &mut SensorState, geom: &SensorGeometry) {
    if state.x <= 0.0 {
        state.x = 0.0;
        if state.v < 0.0 {
            state.v = 0.0;
        }
    } else if state.x >= geom.stroke_max {
        state.x = geom.stroke_max;
        if state.v > 0.0 {
            state.v = 0.0;
        }
    }
}

fn stuck(state: &SensorState, f_ext: f64, geom: &SensorGeometry, gas: &GasProperties, piston: &PistonParams, v_stick: f64) -> bool {
    // The latch only exists for real Coulomb friction; a frictionless piston
    // integrates through equilibrium smoothly.
    piston.f_coulomb > 0.0
        && state.v.abs() < v_stick
        && net_drive(state, f_ext, geom, gas, piston).abs() <= piston.f_coulomb
}

/// Classical RK4 step under a constant external force, with stop clamping
/// and the stiction latch (velocity pinned to exactly zero inside the
/// Karnopp band).
#[allow(clippy::too_many_arguments)]
pub fn integrate_step(
    state: &SensorState,
    f_ext: f64,
    geom: &SensorGeometry,
    gas: &GasProperties,
    piston: &PistonParams,
    v_stick: f64,
    qm: f64,
    dt: f64,
) -> Result<SensorState> {
    if dt <= 0.0 || dt.is_nan() {
        return Err(Error::Domain {
            field: "dt",
            requirement: "> 0",
            value: dt,
        });
    }

    let mut next = if stuck(state, f_ext, geom, gas, piston, v_stick) {
        // Piston held by stiction: position frozen, pressure evolves only
        // through mass flow.
        let pinned = SensorState { v: 0.0, ..*state };
        let dp = pressure_rate(&pinned, geom, gas, qm);
        SensorState {
            x: state.x,
            v: 0.0,
            p: state.p + dp * dt,
            t: state.t + dt,
        }
    } else {
        let eval = |s: &SensorState| state_derivative(s, f_ext, geom, gas, piston, v_stick, qm);
        let k1 = eval(state);
        let k2 = eval(&offset(state, &k1, dt / 2.0));
        let k3 = eval(&offset(state, &k2, dt / 2.0));
        let k4 = eval(&offset(state, &k3, dt));
        let mut s = SensorState {
            x: state.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
            v: state.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
            p: state.p + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp),
            t: state.t + dt,
        };
        clamp_stops(&mut s, geom);
        if stuck(&s, f_ext, geom, gas, piston, v_stick) {
            s.v = 0.0;
        }
        s
    };
    clamp_stops(&mut next, geom);

    if !(next.x.is_finite() && next.v.is_finite() && next.p.is_finite()) {
        return Err(Error::NumericInstability {
            t: next.t,
            context: ": non-finite state; try a smaller dt".into(),
        });
    }
    Ok(next)
}

fn offset(state: &SensorState, d: &Derivatives, h: f64) -> SensorState {
    SensorState {
        x: state.x + h * d.dx,
        v: state.v + h * d.dv,
        p: state.p + h * d.dp,
        t: state.t + h,
    }
}

/// Integrate the sensor driven by a force profile. With a nonzero
/// `input_filter_tau` the raw profile passes through a first-order lag
/// before entering the model; the lag state is propagated exactly panel by
/// panel and sampled at the RK4 stage times.
pub fn simulate(
    profile: &ForceProfile,
    model: &SensorModel,
    cfg: &SimulationConfig,
) -> Result<Trajectory> {
    profile.validate()?;
    cfg.validate(&model.geom)?;
    let geom = &model.geom;
    let gas = &model.gas;
    let piston = &model.piston;

    let n_steps = (cfg.t_end / cfg.dt).round() as usize;
    let mut state = SensorState {
        x: cfg.x0,
        v: 0.0,
        p: cfg.p0,
        t: 0.0,
    };
    // The lag starts at the raw profile value so a constant input produces
    // no artificial transient.
    let mut f_filtered = profile.value(0.0);

    let mut samples = Vec::with_capacity(n_steps / cfg.decimation + 2);
    let record =
        |samples: &mut Vec<TrajectorySample>, s: &SensorState, f: f64, model: &SensorModel| {
            samples.push(TrajectorySample {
                t: s.t,
                x: s.x,
                v: s.v,
                p: s.p,
                f_in: f,
                v_out: transducer_voltage(s.p - model.gas.p_atm, &model.transducer).volts,
            });
        };
    record(&mut samples, &state, f_filtered, model);

    for i in 0..n_steps {
        let t = i as f64 * cfg.dt;
        let f_ext = if cfg.input_filter_tau > 0.0 {
            f_filtered
        } else {
            profile.value(t)
        };

        state = if stuck(&state, f_ext, geom, gas, piston, cfg.v_stick) {
            let pinned = SensorState { v: 0.0, ..state };
            let dp = pressure_rate(&pinned, geom, gas, cfg.qm);
            SensorState {
                x: state.x,
                v: 0.0,
                p: state.p + dp * cfg.dt,
                t: t + cfg.dt,
            }
        } else {
            rk4_with_filter(&state, f_filtered, profile, t, model, cfg)?
        };
        clamp_stops(&mut state, geom);

        if cfg.input_filter_tau > 0.0 {
            f_filtered = advance_filter(f_filtered, profile, t, cfg.dt, cfg.input_filter_tau);
        } else {
            f_filtered = profile.value(t + cfg.dt);
        }

        let f_now = if cfg.input_filter_tau > 0.0 {
            f_filtered
        } else {
            profile.value(state.t)
        };
        if stuck(&state, f_now, geom, gas, piston, cfg.v_stick) {
            state.v = 0.0;
        }

        if !(state.x.is_finite() && state.v.is_finite() && state.p.is_finite()) {
            return Err(Error::NumericInstability {
                t: state.t,
                context: ": non-finite state; try a smaller dt".into(),
            });
        }
        if (i + 1) % cfg.decimation == 0 {
            record(&mut samples, &state, f_now, model);
        }
    }

    Ok(Trajectory { samples })
}

/// One RK4 step of the mechanical state, with the input-lag state advanced
/// by its exact solution (see [`LagPanel`]).
fn rk4_with_filter(
    state: &SensorState,
    f_filtered: f64,
    profile: &ForceProfile,
    t: f64,
    model: &SensorModel,
    cfg: &SimulationConfig,
) -> Result<SensorState> {
    let geom = &model.geom;
    let gas = &model.gas;
    let piston = &model.piston;
    let dt = cfg.dt;
    let tau = cfg.input_filter_tau;

    let force_at = |theta: f64| {
        if tau > 0.0 {
            LagPanel::new(f_filtered, profile, t, dt, tau).at(theta)
        } else {
            profile.value(t + theta)
        }
    };
    let eval = |s: &SensorState, f: f64| state_derivative(s, f, geom, gas, piston, cfg.v_stick, cfg.qm);

    let f_start = force_at(0.0);
    let f_mid = force_at(dt / 2.0);
    let f_end = force_at(dt);
    let k1 = eval(state, f_start);
    let k2 = eval(&offset(state, &k1, dt / 2.0), f_mid);
    let k3 = eval(&offset(state, &k2, dt / 2.0), f_mid);
    let k4 = eval(&offset(state, &k3, dt), f_end);

    Ok(SensorState {
        x: state.x + dt / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx),
        v: state.v + dt / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv),
        p: state.p + dt / 6.0 * (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp),
        t: t + dt,
    })
}

/// Exact propagation of the first-order input lag across one integrator
/// panel. The raw profile is taken as linear over the panel (slope from the
/// panel's first half), which is exact for constant and ramp segments and
/// keeps a raw jump at a panel boundary from leaking into the panel before
/// it.
struct LagPanel {
    base: f64,
    slope: f64,
    f0: f64,
    tau: f64,
}

impl LagPanel {
    fn new(f0: f64, profile: &ForceProfile, t: f64, dt: f64, tau: f64) -> Self {
        let base = profile.value(t);
        let slope = (profile.value(t + dt / 2.0) - base) / (dt / 2.0);
        LagPanel {
            base,
            slope,
            f0,
            tau,
        }
    }

    fn at(&self, theta: f64) -> f64 {
        let target = self.base + self.slope * theta - self.slope * self.tau;
        target + (self.f0 - self.base + self.slope * self.tau) * (-theta / self.tau).exp()
    }
}

/// Advance the first-order input lag by one panel.
fn advance_filter(f: f64, profile: &ForceProfile, t: f64, dt: f64, tau: f64) -> f64 {
    LagPanel::new(f, profile, t, dt, tau).at(dt)
}

/// Integrate under a constant force until the piston sticks and the
/// pressure rate dies out: |v| < v_stick held for `v_window` seconds of
/// simulated time and |dp/dt| below `dp_max`. Returns the settled state.
pub fn settle(
    state: &SensorState,
    f_ext: f64,
    model: &SensorModel,
    cfg: &SimulationConfig,
    v_window: f64,
    dp_max: f64,
    timeout: f64,
) -> Result<SensorState> {
    let mut s = *state;
    let mut quiet = 0.0;
    let mut elapsed = 0.0;
    while elapsed < timeout {
        s = integrate_step(
            &s,
            f_ext,
            &model.geom,
            &model.gas,
            &model.piston,
            cfg.v_stick,
            cfg.qm,
            cfg.dt,
        )?;
        elapsed += cfg.dt;
        if s.v.abs() < cfg.v_stick {
            quiet += cfg.dt;
        } else {
            quiet = 0.0;
        }
        if quiet >= v_window {
            let dp = pressure_rate(&s, &model.geom, &model.gas, cfg.qm);
            if dp.abs() < dp_max {
                return Ok(s);
            }
        }
    }
    Err(Error::NumericInstability {
        t: s.t,
        context: format!(": no settle within {timeout} s under {f_ext} N"),
    })
}
