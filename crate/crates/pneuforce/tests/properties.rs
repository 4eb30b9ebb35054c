//! Property tests over the pure algebra: conversion round trips, the
//! force/pressure/diameter triangle, metric scale invariance, and budget
//! combination laws.

use proptest::prelude::*;

use pneuforce::dimensioning::{amonton, boyle, charles, solve_diameter, solve_force, solve_pressure};
use pneuforce::metrology::{
    combine_wc, repeatability_b_prime, reproducibility_b, reversibility_v, zero_error_f0,
};
use pneuforce::model::{
    chamber_volume, pressure_to_force, transducer_voltage, voltage_to_pressure, SensorGeometry,
    TransducerParams,
};

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #[test]
    fn transducer_round_trip(p in 0.0..5.0e5f64) {
        let t = TransducerParams::mpx5500();
        let reading = transducer_voltage(p, &t);
        prop_assert!(!reading.saturated);
        let back = voltage_to_pressure(reading.volts, &t).unwrap();
        prop_assert!((back - p).abs() <= 1e-9 * p.max(1.0));
    }

    #[test]
    fn pressure_force_is_linear(p in -5.0e5..5.0e5f64, a in 0.1..10.0f64) {
        let geom = SensorGeometry::prototype();
        prop_assert!(rel_close(
            pressure_to_force(a * p, &geom),
            a * pressure_to_force(p, &geom),
            1e-12
        ));
    }

    #[test]
    fn chamber_volume_is_affine_and_increasing(
        x1 in 0.0..4.0e-3f64,
        x2 in 0.0..4.0e-3f64,
    ) {
        let geom = SensorGeometry::prototype();
        let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
        let v_lo = chamber_volume(&geom, lo).unwrap();
        let v_hi = chamber_volume(&geom, hi).unwrap();
        prop_assert!(v_hi >= v_lo);
        // Affine: the increment is area * dx.
        prop_assert!(rel_close(v_hi - v_lo, geom.area * (hi - lo), 1e-9) || hi == lo);
    }

    #[test]
    fn geometry_area_recovers_diameter(d in 1e-4..0.1f64) {
        let geom = SensorGeometry::new(d, 4e-3, 4e-3, 3e-3).unwrap();
        prop_assert!(rel_close(geom.area * 4.0 / std::f64::consts::PI, d * d, 1e-14));
    }

    #[test]
    fn dimensioning_triangle_closes(f in 0.1..500.0f64, d in 1e-3..0.1f64) {
        let p = solve_pressure(f, d).unwrap();
        prop_assert!(rel_close(solve_force(p, d).unwrap(), f, 1e-12));
        prop_assert!(rel_close(solve_diameter(f, p).unwrap(), d, 1e-12));
    }

    #[test]
    fn gas_laws_are_homogeneous(
        p in 1e4..1e6f64,
        v in 1e-8..1e-5f64,
        t1 in 200.0..400.0f64,
        t2 in 200.0..400.0f64,
        lambda in 0.1..10.0f64,
    ) {
        prop_assert!(rel_close(
            boyle(lambda * p, v, 2.0 * v).unwrap(),
            lambda * boyle(p, v, 2.0 * v).unwrap(),
            1e-12
        ));
        prop_assert!(rel_close(
            charles(lambda * v, t1, t2).unwrap(),
            lambda * charles(v, t1, t2).unwrap(),
            1e-12
        ));
        prop_assert!(rel_close(
            amonton(lambda * p, t1, t2).unwrap(),
            lambda * amonton(p, t1, t2).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn metrics_are_scale_invariant(
        x1 in 0.5..5.0f64,
        x2 in 0.5..5.0f64,
        x3 in 0.5..5.0f64,
        x4 in 0.5..5.0f64,
        x5 in 0.5..5.0f64,
        x6 in 0.5..5.0f64,
        lambda in 1e-3..1e3f64,
    ) {
        let (b, _) = reproducibility_b(x1, x3, x5).unwrap();
        let (b_scaled, _) = reproducibility_b(lambda * x1, lambda * x3, lambda * x5).unwrap();
        prop_assert!(rel_close(b, b_scaled, 1e-9));

        prop_assert!(rel_close(
            repeatability_b_prime(x1, x2).unwrap(),
            repeatability_b_prime(lambda * x1, lambda * x2).unwrap(),
            1e-9
        ));
        prop_assert!(rel_close(
            reversibility_v(x3, x4, x5, x6).unwrap(),
            reversibility_v(lambda * x3, lambda * x4, lambda * x5, lambda * x6).unwrap(),
            1e-9
        ));
        prop_assert!(rel_close(
            zero_error_f0(x1, x2, x3).unwrap(),
            zero_error_f0(lambda * x1, lambda * x2, lambda * x3).unwrap(),
            1e-9
        ));
    }

    #[test]
    fn metric_symmetries(
        x1 in 0.5..5.0f64,
        x3 in 0.5..5.0f64,
        x5 in 0.5..5.0f64,
        x4 in 0.5..5.0f64,
        x6 in 0.5..5.0f64,
    ) {
        // b is permutation-invariant over the rotated series.
        let (b, _) = reproducibility_b(x1, x3, x5).unwrap();
        let (b_perm, _) = reproducibility_b(x5, x1, x3).unwrap();
        prop_assert!(rel_close(b, b_perm, 1e-12));
        // v is invariant to swapping the two mounting pairs.
        prop_assert!(rel_close(
            reversibility_v(x3, x4, x5, x6).unwrap(),
            reversibility_v(x5, x6, x3, x4).unwrap(),
            1e-12
        ));
        // b' is symmetric in its two series.
        prop_assert!(rel_close(
            repeatability_b_prime(x1, x3).unwrap(),
            repeatability_b_prime(x3, x1).unwrap(),
            1e-12
        ));
    }

    #[test]
    fn wc_combination_laws(w in proptest::array::uniform8(0.0..0.5f64)) {
        let wc = combine_wc(&w);
        let sum_sq: f64 = w.iter().map(|v| v * v).sum();
        prop_assert!((wc * wc - sum_sq).abs() <= 1e-12 * sum_sq.max(1e-300));
        let max = w.iter().cloned().fold(0.0f64, f64::max);
        prop_assert!(wc >= max);
        prop_assert!(wc <= max * 8f64.sqrt() + 1e-15);
    }
}
