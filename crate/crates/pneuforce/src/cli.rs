//! Command-line front end: `simulate`, `dimension`, `synth`, and `analyze`.
//!
//! Configuration precedence is built-in defaults, then `--config` file, then
//! flags. Outputs go only to paths given with `--out`; standard output
//! carries summaries. Exit codes: 0 success, 1 config/parse error, 2
//! numeric failure, 3 incomplete analysis.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::calibration::{parse_dataset, run_synthetic_calibration, serialize_dataset, DeflectionMode};
use crate::config::Params;
use crate::dimensioning;
use crate::dynamics::{simulate, ForceProfile};
use crate::error::{Error, Result};
use crate::metrology::{analyze, ClassificationCase};

#[derive(Parser, Debug)]
#[command(
    name = "pneuforce",
    about = "Sealed-chamber pneumatic force sensor: simulation, dimensioning, \
             synthetic calibration, and dataset analysis",
    version
)]
struct Cli {
    /// key = value configuration file applied over the built-in defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Individual key=value overrides, applied after the config file.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output file path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Suppress the summary on standard output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate the sensor driven by a force profile and export the
    /// trajectory CSV.
    Simulate(SimulateArgs),
    /// Solve the force/pressure/diameter relation from any two quantities.
    Dimension(DimensionArgs),
    /// Synthesize a calibration dataset by simulating the load schedule.
    Synth(SynthArgs),
    /// Compute the error report, uncertainty budget, and classification of
    /// a dataset CSV.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Force profile: constant:F | step:F@T | ramp:F@T0-T1 |
    /// staircase:L1,L2,..@T1,T2,.. | table:PATH (CSV rows `t,F`).
    #[arg(long, value_name = "SPEC")]
    force: String,

    /// Simulated duration (s).
    #[arg(long, value_name = "S", allow_negative_numbers = true)]
    t_end: Option<f64>,

    /// Integrator step (s).
    #[arg(long, value_name = "S", allow_negative_numbers = true)]
    dt: Option<f64>,

    /// Record every n-th step in the output.
    #[arg(long, value_name = "N")]
    decimation: Option<usize>,
}

#[derive(Args, Debug)]
struct DimensionArgs {
    /// Force (N).
    #[arg(long, allow_negative_numbers = true)]
    force: Option<f64>,
    /// Gauge pressure (Pa).
    #[arg(long, allow_negative_numbers = true)]
    pressure: Option<f64>,
    /// Piston diameter (m).
    #[arg(long, allow_negative_numbers = true)]
    diameter: Option<f64>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Noise seed (same seed, same bytes).
    #[arg(long)]
    seed: Option<u64>,
    /// Reading noise standard deviation (V).
    #[arg(long, value_name = "SIGMA", allow_negative_numbers = true)]
    noise: Option<f64>,
    /// Full-scale calibration force (kgf).
    #[arg(long, value_name = "KGF")]
    f_max: Option<f64>,
    /// Number of force levels.
    #[arg(long, value_name = "N")]
    steps: Option<usize>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Dataset CSV path.
    dataset: PathBuf,

    /// Deflection convention: raw | zero.
    #[arg(long, default_value = "zero")]
    mode: String,

    /// Classification case: A (interpolation) | B (specific forces).
    #[arg(long, default_value = "B")]
    case: String,

    /// Interpolation degree for case A.
    #[arg(long)]
    degree: Option<usize>,
}

/// Parse arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let mut params = Params::default();
    if let Some(path) = &cli.config {
        params.apply_file(path)?;
    }
    params.apply_overrides(&cli.set)?;

    match &cli.command {
        Command::Simulate(args) => cmd_simulate(cli, args, params),
        Command::Dimension(args) => cmd_dimension(cli, args),
        Command::Synth(args) => cmd_synth(cli, args, params),
        Command::Analyze(args) => cmd_analyze(cli, args, params),
    }
}

fn say(cli: &Cli, text: &str) {
    if !cli.quiet {
        println!("{text}");
    }
}

fn cmd_simulate(cli: &Cli, args: &SimulateArgs, mut params: Params) -> Result<()> {
    if let Some(t_end) = args.t_end {
        params.t_end = t_end;
    }
    if let Some(dt) = args.dt {
        params.dt = dt;
    }
    if let Some(decimation) = args.decimation {
        params.decimation = decimation;
    }
    let model = params.build_model()?;
    let cfg = params.simulation_config();
    let profile = parse_force_spec(&args.force)?;

    let trajectory = simulate(&profile, &model, &cfg)?;
    if let Some(out) = &cli.out {
        std::fs::write(out, trajectory.to_csv())?;
    }

    let last = trajectory.final_state().expect("trajectory is nonempty");
    let drift = trajectory.conservation_drift(&model.geom, &model.gas);
    say(
        cli,
        &format!(
            "final state: t = {:.6} s, x = {:.6e} m, v = {:.6e} m/s, p = {:.6e} Pa",
            last.t, last.x, last.v, last.p
        ),
    );
    say(
        cli,
        &format!(
            "sealed-gas invariant drift: {drift:.3e} relative; settle time: {:.4} s",
            trajectory.settle_time(cfg.v_stick)
        ),
    );
    if let Some(out) = &cli.out {
        say(
            cli,
            &format!("{} samples written to {}", trajectory.samples.len(), out.display()),
        );
    }
    Ok(())
}

fn cmd_dimension(cli: &Cli, args: &DimensionArgs) -> Result<()> {
    let known = [
        args.force.is_some(),
        args.pressure.is_some(),
        args.diameter.is_some(),
    ]
    .iter()
    .filter(|k| **k)
    .count();
    if known != 2 {
        return Err(Error::Config(
            "dimension needs exactly two of --force, --pressure, --diameter".into(),
        ));
    }
    let (force, pressure, diameter) = match (args.force, args.pressure, args.diameter) {
        (Some(f), Some(p), None) => (f, p, dimensioning::solve_diameter(f, p)?),
        (Some(f), None, Some(d)) => (f, dimensioning::solve_pressure(f, d)?, d),
        (None, Some(p), Some(d)) => (dimensioning::solve_force(p, d)?, p, d),
        _ => unreachable!("argument count checked above"),
    };
    match (args.force, args.pressure, args.diameter) {
        (Some(_), Some(_), None) => say(cli, &format!("diameter = {:.2} mm", diameter * 1e3)),
        (Some(_), None, Some(_)) => say(cli, &format!("pressure = {pressure:.4e} Pa")),
        _ => say(cli, &format!("force = {force:.2} N")),
    }
    say(
        cli,
        &format!(
            "F = P*pi*(d/2)^2 with F = {force:.4} N, P = {pressure:.6e} Pa, d = {:.4} mm",
            diameter * 1e3
        ),
    );
    Ok(())
}

fn cmd_synth(cli: &Cli, args: &SynthArgs, mut params: Params) -> Result<()> {
    if let Some(seed) = args.seed {
        params.seed = seed;
    }
    if let Some(noise) = args.noise {
        params.noise_sigma_v = noise;
    }
    if let Some(f_max) = args.f_max {
        params.f_max_kgf = f_max;
    }
    if let Some(steps) = args.steps {
        params.n_steps = steps;
    }
    let model = params.build_model()?;
    let schedule = params.schedule()?;
    let synth_cfg = params.synth_config();

    let dataset = run_synthetic_calibration(&schedule, &model, &synth_cfg)?;
    let text = serialize_dataset(&dataset);
    match &cli.out {
        Some(out) => {
            std::fs::write(out, &text)?;
            say(
                cli,
                &format!(
                    "dataset with {} levels x 6 series written to {}",
                    dataset.force_levels.len(),
                    out.display()
                ),
            );
        }
        None => {
            return Err(Error::Config("synth requires --out <dataset.csv>".into()));
        }
    }
    Ok(())
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs, mut params: Params) -> Result<()> {
    if let Some(degree) = args.degree {
        params.fit_degree = degree;
    }
    let mode = match args.mode.to_ascii_lowercase().as_str() {
        "raw" => DeflectionMode::Raw,
        "zero" | "zero_referenced" => DeflectionMode::ZeroReferenced,
        other => {
            return Err(Error::Config(format!(
                "unknown mode '{other}', expected raw or zero"
            )));
        }
    };
    let case = match args.case.to_ascii_uppercase().as_str() {
        "A" => ClassificationCase::A,
        "B" => ClassificationCase::B,
        other => {
            return Err(Error::Config(format!(
                "unknown case '{other}', expected A or B"
            )));
        }
    };

    let text = std::fs::read_to_string(&args.dataset)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", args.dataset.display())))?;
    let dataset = parse_dataset(&text)?;
    let opts = params.analysis_options(mode, case);
    let report = analyze(&dataset, &opts)?;

    if let Some(out) = &cli.out {
        std::fs::write(out, report.to_json())?;
        let csv_path = csv_sibling(out);
        std::fs::write(&csv_path, report.to_csv())?;
        say(
            cli,
            &format!(
                "report written to {} and {}",
                out.display(),
                csv_path.display()
            ),
        );
    }
    say(cli, &report.summary());
    Ok(())
}

fn csv_sibling(json_path: &Path) -> PathBuf {
    json_path.with_extension("csv")
}

/// Parse a `kind:params` force-profile specification.
pub fn parse_force_spec(spec: &str) -> Result<ForceProfile> {
    let bad = |msg: &str| Error::Config(format!("force spec '{spec}': {msg}"));
    let (kind, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let profile = match kind {
        "constant" => ForceProfile::Constant {
            force: rest.parse().map_err(|_| bad("constant:F needs a number"))?,
        },
        "step" => match rest.split_once('@') {
            Some((f, at)) => ForceProfile::Step {
                force: f.parse().map_err(|_| bad("step:F@T needs numeric F"))?,
                at: at.parse().map_err(|_| bad("step:F@T needs numeric T"))?,
            },
            None => ForceProfile::Step {
                force: rest.parse().map_err(|_| bad("step:F@T needs numeric F"))?,
                at: 0.0,
            },
        },
        "ramp" => {
            let (f, window) = rest.split_once('@').ok_or_else(|| bad("ramp:F@T0-T1"))?;
            let (t0, t1) = window.split_once('-').ok_or_else(|| bad("ramp:F@T0-T1"))?;
            ForceProfile::Ramp {
                force: f.parse().map_err(|_| bad("ramp:F@T0-T1 needs numeric F"))?,
                start: t0.parse().map_err(|_| bad("ramp start time"))?,
                end: t1.parse().map_err(|_| bad("ramp end time"))?,
            }
        }
        "staircase" => {
            let (levels, times) = rest
                .split_once('@')
                .ok_or_else(|| bad("staircase:L1,L2,..@T1,T2,.."))?;
            let levels = parse_list(levels).map_err(|_| bad("staircase levels"))?;
            let times = parse_list(times).map_err(|_| bad("staircase times"))?;
            ForceProfile::Staircase { levels, times }
        }
        "table" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| bad(&format!("cannot read table file: {e}")))?;
            let mut samples = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (t, f) = line
                    .split_once(',')
                    .ok_or_else(|| bad("table rows must be 't,F'"))?;
                match (t.trim().parse::<f64>(), f.trim().parse::<f64>()) {
                    (Ok(t), Ok(f)) => samples.push((t, f)),
                    _ if samples.is_empty() => continue, // header row
                    _ => return Err(bad("non-numeric table row")),
                }
            }
            ForceProfile::Table { samples }
        }
        other => {
            return Err(bad(&format!(
                "unknown kind '{other}', expected constant, step, ramp, staircase, or table"
            )));
        }
    };
    profile.validate()?;
    Ok(profile)
}

fn parse_list(text: &str) -> std::result::Result<Vec<f64>, std::num::ParseFloatError> {
    text.split(',').map(|v| v.trim().parse()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn force_specs_parse() {
        assert_eq!(
            parse_force_spec("constant:0").unwrap(),
            ForceProfile::Constant { force: 0.0 }
        );
        assert_eq!(
            parse_force_spec("step:39.24@1.0").unwrap(),
            ForceProfile::Step {
                force: 39.24,
                at: 1.0
            }
        );
        assert_eq!(
            parse_force_spec("ramp:10@1-2").unwrap(),
            ForceProfile::Ramp {
                force: 10.0,
                start: 1.0,
                end: 2.0
            }
        );
        assert_eq!(
            parse_force_spec("staircase:1,2@0.5,1.5").unwrap(),
            ForceProfile::Staircase {
                levels: vec![1.0, 2.0],
                times: vec![0.5, 1.5]
            }
        );
        assert!(parse_force_spec("wiggle:1").is_err());
        assert!(parse_force_spec("staircase:2,1@1,0.5").is_err());
    }
}
