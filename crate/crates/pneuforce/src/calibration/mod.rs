//! Calibration protocol machinery: load schedules, calibration datasets in
//! the six-series layout, deflection extraction, and dataset synthesis from
//! the simulator.
//!
//! Forces at this boundary are in kgf; conversion to newtons uses the
//! standard gravity constant.

mod io;
mod synth;

pub use io::{parse_dataset, serialize_dataset};
pub use synth::{run_synthetic_calibration, SynthConfig};

use crate::error::{Error, Result};

/// The six measurement series of a calibration run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum SeriesId {
    X1,
    X2,
    X3,
    X4,
    X5,
    X6,
}

impl SeriesId {
    pub const ALL: [SeriesId; 6] = [
        SeriesId::X1,
        SeriesId::X2,
        SeriesId::X3,
        SeriesId::X4,
        SeriesId::X5,
        SeriesId::X6,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SeriesId::X1 => "X1",
            SeriesId::X2 => "X2",
            SeriesId::X3 => "X3",
            SeriesId::X4 => "X4",
            SeriesId::X5 => "X5",
            SeriesId::X6 => "X6",
        }
    }

    pub fn orientation_deg(self) -> f64 {
        match self {
            SeriesId::X1 | SeriesId::X2 => 0.0,
            SeriesId::X3 | SeriesId::X4 => 360.0,
            SeriesId::X5 | SeriesId::X6 => 180.0,
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            SeriesId::X4 | SeriesId::X6 => Direction::Decreasing,
            _ => Direction::Increasing,
        }
    }

    pub fn index(self) -> usize {
        match self {
            SeriesId::X1 => 0,
            SeriesId::X2 => 1,
            SeriesId::X3 => 2,
            SeriesId::X4 => 3,
            SeriesId::X5 => 4,
            SeriesId::X6 => 5,
        }
    }

    /// CSV column header for this series.
    pub fn column(self) -> &'static str {
        match self {
            SeriesId::X1 => "X1_0",
            SeriesId::X2 => "X2_0",
            SeriesId::X3 => "X3_360",
            SeriesId::X4 => "X4_360",
            SeriesId::X5 => "X5_180",
            SeriesId::X6 => "X6_180",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Loading pattern of one mounting of the sensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunDirection {
    Increasing,
    IncreasingThenDecreasing,
}

/// One mounting of the sensor in the load bench.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanEntry {
    pub orientation_deg: f64,
    pub direction: RunDirection,
}

/// The calibration load schedule: uniform force steps, preload policy, and
/// the six-series mounting plan.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadSchedule {
    /// Full-scale calibration force (kgf).
    pub f_max: f64,
    /// Nonzero force levels (kgf), uniform and ascending.
    pub steps: Vec<f64>,
    /// Preload count before each mounting.
    pub preloads: u32,
    /// Preload hold time (s).
    pub hold: f64,
    /// Wait between loads (s).
    pub gap: f64,
    /// Mounting plan: two increasing runs at 0°, one up/down run at 360°,
    /// one up/down run at 180°.
    pub series_plan: Vec<PlanEntry>,
}

impl LoadSchedule {
    pub fn validate(&self) -> Result<()> {
        if self.steps.len() < 8 {
            return Err(Error::Schedule(format!(
                "at least 8 nonzero force levels are required, got {}",
                self.steps.len()
            )));
        }
        if self.steps[0] <= 0.0 {
            return Err(Error::Schedule("first force level must be > 0".into()));
        }
        if self.steps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Schedule(
                "force levels must be strictly increasing".into(),
            ));
        }
        let last = *self.steps.last().unwrap();
        if (last - self.f_max).abs() > 1e-9 * self.f_max.abs().max(1.0) {
            return Err(Error::Schedule(format!(
                "last level ({last}) must equal f_max ({})",
                self.f_max
            )));
        }
        let shape: Vec<(i64, RunDirection)> = self
            .series_plan
            .iter()
            .map(|e| (e.orientation_deg.round() as i64, e.direction))
            .collect();
        let expected = [
            (0, RunDirection::Increasing),
            (0, RunDirection::Increasing),
            (360, RunDirection::IncreasingThenDecreasing),
            (180, RunDirection::IncreasingThenDecreasing),
        ];
        if shape != expected {
            return Err(Error::Schedule(
                "series plan must be two increasing runs at 0°, one up/down run at 360°, \
                 and one up/down run at 180°"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Uniform schedule: `f_max/n_steps * (1..=n_steps)` kgf with the default
/// preload policy and the standard six-series plan.
pub fn build_schedule(f_max: f64, n_steps: usize) -> Result<LoadSchedule> {
    if f_max <= 0.0 || f_max.is_nan() {
        return Err(Error::Schedule(format!("f_max must be > 0, got {f_max}")));
    }
    if n_steps < 8 {
        return Err(Error::Schedule(format!(
            "at least 8 nonzero force levels are required, got {n_steps}"
        )));
    }
    let steps = (1..=n_steps)
        .map(|i| f_max * i as f64 / n_steps as f64)
        .collect();
    Ok(LoadSchedule {
        f_max,
        steps,
        preloads: 3,
        hold: 60.0,
        gap: 180.0,
        series_plan: vec![
            PlanEntry {
                orientation_deg: 0.0,
                direction: RunDirection::Increasing,
            },
            PlanEntry {
                orientation_deg: 0.0,
                direction: RunDirection::Increasing,
            },
            PlanEntry {
                orientation_deg: 360.0,
                direction: RunDirection::IncreasingThenDecreasing,
            },
            PlanEntry {
                orientation_deg: 180.0,
                direction: RunDirection::IncreasingThenDecreasing,
            },
        ],
    })
}

/// Readings of one series, aligned with the dataset's force levels.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesData {
    pub id: SeriesId,
    /// Indicator readings (V), one per nonzero force level, ascending order.
    pub readings: Vec<f64>,
    /// Zero-force reading taken before loading (increasing series only).
    pub zero_start: Option<f64>,
    /// Zero-force reading taken after unloading. For the decreasing series
    /// this is the reading that closes the up/down cycle.
    pub zero_end: Option<f64>,
}

/// A complete calibration dataset in the six-series layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationDataset {
    /// Indicator reading at null force before any loading (V).
    pub zero_indication: Option<f64>,
    pub temp_start_c: Option<f64>,
    pub temp_end_c: Option<f64>,
    /// Nonzero force levels (kgf), ascending.
    pub force_levels: Vec<f64>,
    /// Series in X1..X6 order.
    pub series: Vec<SeriesData>,
}

impl CalibrationDataset {
    pub fn series(&self, id: SeriesId) -> &SeriesData {
        &self.series[id.index()]
    }

    pub fn validate(&self) -> Result<()> {
        if self.force_levels.len() < 8 {
            return Err(Error::Schedule(format!(
                "dataset has {} force levels, at least 8 required",
                self.force_levels.len()
            )));
        }
        if self.force_levels[0] <= 0.0 {
            return Err(Error::Schedule("first force level must be > 0".into()));
        }
        if self.force_levels.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Schedule("non-monotonic force levels".into()));
        }
        if self.series.len() != 6 {
            return Err(Error::Schedule(format!(
                "expected 6 series, got {}",
                self.series.len()
            )));
        }
        for (slot, s) in SeriesId::ALL.iter().zip(&self.series) {
            if s.id != *slot {
                return Err(Error::Schedule(format!(
                    "series out of order: expected {}, found {}",
                    slot.label(),
                    s.id.label()
                )));
            }
            if s.readings.len() != self.force_levels.len() {
                return Err(Error::Schedule(format!(
                    "series {} has {} readings for {} force levels",
                    s.id.label(),
                    s.readings.len(),
                    self.force_levels.len()
                )));
            }
            match s.id.direction() {
                Direction::Increasing => {
                    if s.zero_start.is_none() {
                        return Err(Error::Schedule(format!(
                            "series {} is missing its leading zero reading",
                            s.id.label()
                        )));
                    }
                }
                Direction::Decreasing => {
                    if s.zero_end.is_none() {
                        return Err(Error::Schedule(format!(
                            "series {} is missing its closing zero reading",
                            s.id.label()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Deflection convention for downstream metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum DeflectionMode {
    /// Indicator readings used as-is.
    Raw,
    /// Readings referenced to the series' leading zero; the decreasing
    /// series use the leading zero of their increasing partner (the two legs
    /// are one mounting).
    ZeroReferenced,
}

/// Per-series deflection sequences (aligned with the dataset force levels)
/// under the chosen convention.
pub fn deflections(ds: &CalibrationDataset, mode: DeflectionMode) -> Vec<Vec<f64>> {
    SeriesId::ALL
        .iter()
        .map(|id| {
            let series = ds.series(*id);
            match mode {
                DeflectionMode::Raw => series.readings.clone(),
                DeflectionMode::ZeroReferenced => {
                    let zero = zero_reference(ds, *id);
                    series.readings.iter().map(|r| r - zero).collect()
                }
            }
        })
        .collect()
}

/// The leading zero against which a series' deflections are measured.
pub fn zero_reference(ds: &CalibrationDataset, id: SeriesId) -> f64 {
    let partner = match id {
        SeriesId::X4 => SeriesId::X3,
        SeriesId::X6 => SeriesId::X5,
        other => other,
    };
    ds.series(partner).zero_start.unwrap_or(0.0)
}
