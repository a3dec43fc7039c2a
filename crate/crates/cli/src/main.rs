use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use hermite_core::experiments::{decay_experiment, geometric_steps, verify, TestFunction};
use hermite_core::kernel::{asymptotic_constant, ErrorKernel, Mode};
use hermite_core::schemes::{coefficients_from_grid, grid_step, Approximant, SchemeKind, UniformSamples};

#[derive(Parser)]
#[command(name = "hermite", version, about = "Hermite-type spline approximation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct a signal from uniformly spaced samples (CSV columns t,f[,fprime]).
    Interpolate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        scheme: SchemeKind,
        /// Sampling step T; defaults to the smallest step the table supports.
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        output: PathBuf,
        /// Output points per sample interval.
        #[arg(long, default_value_t = 10)]
        oversampling: usize,
    },
    /// Tabulate E_min, E_res and E on [0, omega-max].
    Kernel {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long, default_value = "f")]
        mode: Mode,
        #[arg(long, default_value_t = 2.0 * PI)]
        omega_max: f64,
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// Asymptotic constant of a scheme, as JSON.
    Constants {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long, default_value = "f")]
        mode: Mode,
    },
    /// Error decay on a test function; JSON summary on stdout.
    Decay {
        #[arg(long)]
        scheme: SchemeKind,
        #[arg(long, default_value = "gaussian")]
        function: TestFunction,
        /// `first:count:geometric`, halving the step each time.
        #[arg(long, default_value = "0.2:5:geometric")]
        steps: String,
        #[arg(long, default_value = "f")]
        mode: Mode,
        /// Where to write the per-step errors.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run all audits; exit status 0 iff every audit passes.
    Verify,
}

#[derive(Debug, Deserialize)]
struct SampleRow {
    t: f64,
    f: f64,
    #[serde(default)]
    fprime: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ReconRow {
    t: f64,
    f: f64,
    fprime: f64,
}

#[derive(Debug, Serialize)]
struct KernelRow {
    omega: f64,
    #[serde(rename = "E_min")]
    e_min: f64,
    #[serde(rename = "E_res")]
    e_res: f64,
    #[serde(rename = "E")]
    e: f64,
}

#[derive(Debug, Serialize)]
struct ConstantsReport {
    scheme: &'static str,
    mode: Mode,
    #[serde(rename = "L")]
    order: u32,
    constant: f64,
    optimal_constant: f64,
    ratio_to_optimal: f64,
    reference: f64,
    rel_error: f64,
}

fn reference_constant(mode: Mode) -> f64 {
    match mode {
        Mode::Function => 1.0 / (72.0 * 70f64.sqrt()),
        Mode::Derivative => 1.0 / (12.0 * 210f64.sqrt()),
    }
}

fn read_samples(path: &Path) -> Result<UniformSamples> {
    let mut reader = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let rows: Vec<SampleRow> = reader.deserialize().collect::<Result<_, _>>().context("parsing sample rows")?;
    ensure!(rows.len() >= 2, "need at least two samples");
    let spacing = rows[1].t - rows[0].t;
    ensure!(spacing > 0.0, "sample times must increase");
    for (i, w) in rows.windows(2).enumerate() {
        ensure!(((w[1].t - w[0].t) / spacing - 1.0).abs() < 1e-6, "samples are not uniformly spaced (row {})", i + 2);
    }
    let derivatives = if rows.iter().all(|r| r.fprime.is_some()) {
        Some(rows.iter().map(|r| r.fprime.unwrap_or_default()).collect())
    } else {
        None
    };
    Ok(UniformSamples { origin: rows[0].t, spacing, values: rows.iter().map(|r| r.f).collect(), derivatives })
}

fn interpolate(input: &Path, kind: SchemeKind, step: Option<f64>, output: &Path, oversampling: usize) -> Result<()> {
    ensure!(oversampling >= 1, "oversampling must be at least 1");
    let grid = read_samples(input)?;
    let scheme = kind.spec();
    let step = step.unwrap_or_else(|| grid_step(&scheme, grid.spacing));
    let coefs = coefficients_from_grid(&scheme, step, &grid)?;
    let span = grid.interval();
    let a = Approximant::from_coefs(&scheme, step, coefs, span, grid.origin)?;
    let n = (grid.len() - 1) * oversampling;
    let mut writer = csv::Writer::from_path(output).with_context(|| format!("writing {}", output.display()))?;
    for i in 0..=n {
        let t = span.lo + span.len() * i as f64 / n as f64;
        writer.serialize(ReconRow { t, f: a.reconstruct(t), fprime: a.reconstruct_deriv(t) })?;
    }
    writer.flush()?;
    Ok(())
}

fn kernel(kind: SchemeKind, mode: Mode, omega_max: f64, points: usize, output: &Path) -> Result<()> {
    ensure!(omega_max > 0.0 && points >= 2, "need omega-max > 0 and at least 2 points");
    let k = ErrorKernel::new(&kind.spec(), mode);
    let mut writer = csv::Writer::from_path(output).with_context(|| format!("writing {}", output.display()))?;
    for i in 0..points {
        let omega = omega_max * i as f64 / (points - 1) as f64;
        let v = k.eval(omega)?;
        writer.serialize(KernelRow { omega, e_min: v.e_min, e_res: v.e_res, e: v.e })?;
    }
    writer.flush()?;
    Ok(())
}

fn constants(kind: SchemeKind, mode: Mode) -> Result<ConstantsReport> {
    let scheme = kind.spec();
    let order = mode.rate(scheme.order());
    let constant = asymptotic_constant(&ErrorKernel::new(&scheme, mode), order)?.constant;
    let optimal = asymptotic_constant(&ErrorKernel::dual(&scheme, mode), order)?.constant;
    let reference = reference_constant(mode);
    Ok(ConstantsReport {
        scheme: kind.name(),
        mode,
        order,
        constant,
        optimal_constant: optimal,
        ratio_to_optimal: constant / optimal,
        reference,
        rel_error: (constant / reference - 1.0).abs(),
    })
}

fn parse_steps(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [first, count, kind] = parts[..] else {
        bail!("steps must look like first:count:geometric, got '{spec}'");
    };
    ensure!(kind == "geometric", "only geometric step sequences are supported, got '{kind}'");
    let first: f64 = first.parse().with_context(|| format!("bad first step '{first}'"))?;
    let count: usize = count.parse().with_context(|| format!("bad step count '{count}'"))?;
    Ok(geometric_steps(first, count))
}

fn decay(kind: SchemeKind, f: TestFunction, steps: &str, mode: Mode, csv_path: Option<&Path>) -> Result<()> {
    let steps = parse_steps(steps)?;
    let report = decay_experiment(&kind.spec(), &f, &steps, mode)?;
    if let Some(path) = csv_path {
        let mut writer = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
        writer.write_record(["step", "error"])?;
        for (t, e) in report.steps.iter().zip(&report.errors) {
            writer.write_record([t.to_string(), e.to_string()])?;
        }
        writer.flush()?;
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn run_verify() -> bool {
    let checks = verify();
    let mut out = std::io::stdout().lock();
    for c in &checks {
        let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    checks.iter().all(|c| c.passed)
}

fn main() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Interpolate { input, scheme, step, output, oversampling } => {
            interpolate(&input, scheme, step, &output, oversampling)?
        }
        Command::Kernel { scheme, mode, omega_max, points, output } => {
            kernel(scheme, mode, omega_max, points, &output)?
        }
        Command::Constants { scheme, mode } => println!("{}", serde_json::to_string_pretty(&constants(scheme, mode)?)?),
        Command::Decay { scheme, function, steps, mode, csv } => decay(scheme, function, &steps, mode, csv.as_deref())?,
        Command::Verify => {
            if !run_verify() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
