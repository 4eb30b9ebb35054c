//! Physical invariants of the simulator that go beyond single-step unit
//! checks: energy conservation of the frictionless isothermal oscillator,
//! monotone quasi-static compression, stiction consistency, and the
//! friction-band bound on synthetic hysteresis.

use pneuforce::calibration::{
    build_schedule, run_synthetic_calibration, SeriesId, SynthConfig,
};
use pneuforce::dynamics::{integrate_step, simulate, ForceProfile, SimulationConfig};
use pneuforce::model::{SensorModel, SensorState};

/// With no friction, an isothermal gas, and a constant force, the piston
/// oscillates without decay: total mechanical plus compression energy
/// drifts less than 0.1 % of the oscillation energy over 10 periods.
#[test]
fn frictionless_isothermal_oscillation_conserves_energy() {
    let mut model = SensorModel::default();
    model.gas.gamma = 1.0;
    model.piston.f_coulomb = 0.0;
    model.piston.f_viscous = 0.0;
    model.piston.alpha = 0.0;

    let f_ext = 10.0;
    let (x0, p0) = (2e-3, 2.4e5);
    // Isothermal potential: F*x + p_atm*A*x - C*ln(A*x + V_d), C = p0*V0.
    let area = model.geom.area;
    let v_dead = model.geom.v_dead;
    let c = p0 * (area * x0 + v_dead);
    let potential =
        |x: f64| f_ext * x + model.gas.p_atm * area * x - c * (area * x + v_dead).ln();
    let energy = |s: &SensorState| 0.5 * model.piston.mass * s.v * s.v + potential(s.x);

    // Angular frequency at the static balance point sets the period.
    let p_eq = model.gas.p_atm + f_ext / area;
    let v_eq = c / p_eq;
    let x_eq = (v_eq - v_dead) / area;
    let stiffness = area * area * p_eq / v_eq;
    let period = 2.0 * std::f64::consts::PI * (model.piston.mass / stiffness).sqrt();

    let cfg = SimulationConfig {
        dt: 1e-5,
        t_end: 10.0 * period,
        p0,
        x0,
        input_filter_tau: 0.0,
        ..SimulationConfig::default()
    };
    let traj = simulate(&ForceProfile::Constant { force: f_ext }, &model, &cfg).unwrap();

    let e0 = energy(&SensorState {
        x: x0,
        v: 0.0,
        p: p0,
        t: 0.0,
    });
    let scale = e0 - potential(x_eq);
    assert!(scale > 0.0, "oscillation energy scale must be positive");
    let max_drift = traj
        .samples
        .iter()
        .map(|s| {
            (energy(&SensorState {
                x: s.x,
                v: s.v,
                p: s.p,
                t: s.t,
            }) - e0)
                .abs()
        })
        .fold(0.0, f64::max);
    assert!(
        max_drift / scale < 1e-3,
        "energy drift {:.3e} of the oscillation energy {:.3e}",
        max_drift,
        scale
    );

    // No decay: the swing still reaches the far side in the last period.
    let late: Vec<_> = traj
        .samples
        .iter()
        .filter(|s| s.t > 9.0 * period)
        .collect();
    let late_peak = late.iter().map(|s| s.v.abs()).fold(0.0, f64::max);
    let early_peak = traj
        .samples
        .iter()
        .filter(|s| s.t < period)
        .map(|s| s.v.abs())
        .fold(0.0, f64::max);
    assert!(
        late_peak > 0.999 * early_peak,
        "oscillation decayed: early {early_peak}, late {late_peak}"
    );
}

/// Sealed-chamber conservation at the coarse end of the step range: below
/// 1e-6 relative drift per simulated second. At dt = 1e-4 the Coulomb
/// switching cannot be resolved (the friction law jumps 2*f_cf across the
/// stiction band and the discretization chatters), so the coarse step is
/// exercised on the smooth frictionless field and the full friction model
/// at the next halving.
#[test]
fn sealed_conservation_at_coarse_steps() {
    let profile = ForceProfile::Step {
        force: 39.24,
        at: 0.5,
    };
    let run = |f_coulomb: f64, dt: f64| {
        let mut model = SensorModel::default();
        model.piston.f_coulomb = f_coulomb;
        let cfg = SimulationConfig {
            dt,
            t_end: 2.0,
            decimation: 1,
            ..SimulationConfig::default()
        };
        let traj = simulate(&profile, &model, &cfg).unwrap();
        (traj.conservation_drift(&model.geom, &model.gas), cfg.t_end)
    };

    let (drift, t_end) = run(0.0, 1e-4);
    assert!(
        drift < 1e-6 * t_end,
        "frictionless drift {drift:.3e} over {t_end} s at dt = 1e-4"
    );
    let (drift, t_end) = run(10.0, 5e-5);
    assert!(
        drift < 1e-6 * t_end,
        "full-friction drift {drift:.3e} over {t_end} s at dt = 5e-5"
    );
}

/// Quasi-static monotone loading never lowers the chamber pressure.
#[test]
fn quasi_static_compression_is_monotone_in_pressure() {
    let model = SensorModel::default();
    let cfg = SimulationConfig {
        t_end: 4.0,
        decimation: 50,
        ..SimulationConfig::default()
    };
    let profile = ForceProfile::Ramp {
        force: 35.0,
        start: 0.5,
        end: 3.0,
    };
    let traj = simulate(&profile, &model, &cfg).unwrap();
    for pair in traj.samples.windows(2) {
        assert!(
            pair[1].p >= pair[0].p - 1e-9 * pair[0].p,
            "pressure decreased during monotone loading: {} -> {} at t = {}",
            pair[0].p,
            pair[1].p,
            pair[1].t
        );
    }
    // The ramp actually compressed the chamber.
    assert!(traj.final_state().unwrap().p > 4.0e5);
}

/// Inside the Karnopp band the next state has exactly zero velocity.
#[test]
fn stiction_band_pins_velocity_to_zero() {
    let model = SensorModel::default();
    let f_ext = 20.0;
    for residual in [-0.9, -0.4, 0.0, 0.3, 0.8] {
        for v_frac in [-0.9, -0.5, 0.1, 0.7] {
            let p = model.gas.p_atm + (f_ext + residual * model.piston.f_coulomb) / model.geom.area;
            let state = SensorState {
                x: 2e-3,
                v: v_frac * 1e-4,
                p,
                t: 0.0,
            };
            let next = integrate_step(
                &state,
                f_ext,
                &model.geom,
                &model.gas,
                &model.piston,
                1e-4,
                0.0,
                1e-5,
            )
            .unwrap();
            assert_eq!(
                next.v, 0.0,
                "residual {residual}, v_frac {v_frac}: velocity not pinned"
            );
        }
    }
}

/// With deterministic readings and a level mounting, Coulomb friction sets
/// the hysteresis: the up/down legs differ by at most the 2*f_cf/A pressure
/// band, and the unrotated legs agree exactly.
#[test]
fn synthetic_hysteresis_stays_inside_the_friction_band() {
    let model = SensorModel::default();
    let schedule = build_schedule(4.0, 8).unwrap();
    let cfg = SynthConfig {
        dt: 2e-5,
        ..SynthConfig::default()
    };
    let ds = run_synthetic_calibration(&schedule, &model, &cfg).unwrap();

    assert_eq!(
        ds.series(SeriesId::X1).readings,
        ds.series(SeriesId::X2).readings
    );
    // Zero drift vanishes: the hard stop plus the sealed gas law reset the
    // null reading exactly.
    for id in [SeriesId::X1, SeriesId::X2] {
        let s = ds.series(id);
        assert_eq!(s.zero_start, s.zero_end, "{:?}", id);
    }

    let band_volts =
        2.0 * model.piston.f_coulomb / model.geom.area * model.transducer.sensitivity;
    for (up, down) in ds
        .series(SeriesId::X3)
        .readings
        .iter()
        .zip(&ds.series(SeriesId::X4).readings)
    {
        let gap = down - up;
        assert!(gap >= -1e-12, "decreasing leg below increasing leg: {gap}");
        assert!(
            gap <= band_volts * (1.0 + 1e-9),
            "hysteresis {gap} V exceeds the friction band {band_volts} V"
        );
    }
}
