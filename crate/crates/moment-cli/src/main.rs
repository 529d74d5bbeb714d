//! `moment` — replay the stationary-surface classification checks and run
//! the numerical verifications from the command line.
//!
//! Exit codes: 0 on success (all checks pass where applicable), 1 when a
//! verification fails, 2 on errors (bad input, i/o, singularities).

mod output;
mod surface_arg;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use moment_core::geomnum::{
    default_patch, discrete_variation_residual, energy, euler_curve_residual, first_variation,
    residual_grid, shoot_rotational, write_grid_csv, NumConfig, Patch, Perturbation, PolarCurve,
};
use moment_core::proofscript::{render_report, run_theorem, ReportFormat};

use output::write_atomically;

#[derive(Parser)]
#[command(
    name = "moment",
    about = "Exact replay and numerical verification for stationary surfaces of the weighted area energy",
    version,
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct CommonNumeric {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the primary output to this file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Tensor Gauss-Legendre order per axis.
    #[arg(long, default_value_t = 32)]
    quadrature_n: usize,
    /// Central-difference step in chart coordinates.
    #[arg(long, default_value_t = 1e-4)]
    fd_step: f64,
    /// Fixed step of the profile integrator.
    #[arg(long, default_value_t = 1e-4)]
    ode_step: f64,
    /// Seed for random perturbation fields.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl CommonNumeric {
    fn config(&self) -> NumConfig {
        NumConfig {
            fd_step: self.fd_step,
            quad_order: self.quadrature_n,
            ode_step: self.ode_step,
            ..NumConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Replay one theorem's checks against its expected-expression file.
    Verify {
        /// Theorem name: t1-nonzero, t1-zero, t22 or t3.
        #[arg(long)]
        theorem: String,
        /// Check-script file; defaults to the shipped script.
        #[arg(long)]
        expected: Option<PathBuf>,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate the stationarity residual on a parameter grid.
    Residual {
        /// Surface description, e.g. "sphere r=1 center=0,0,0".
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Grid nodes per axis.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Quadrature of |x|^alpha over the surface patch.
    Energy {
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Override the parameter rectangle: u0,u1,v0,v1.
        #[arg(long)]
        patch: Option<String>,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Central-difference first variation under a normal perturbation.
    Variation {
        #[arg(long)]
        surface: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Perturbation field: "constant" or "random".
        #[arg(long, default_value = "random")]
        perturbation: String,
        /// Displacement used by the central difference.
        #[arg(long, default_value_t = 1e-4)]
        eps: f64,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Integrate a stationary rotational profile from initial data.
    Shoot {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Initial data f0,z0,angle0.
        #[arg(long, allow_hyphen_values = true)]
        init: String,
        /// Arc length to integrate.
        #[arg(long, default_value_t = 3.0)]
        arclen: f64,
        #[command(flatten)]
        common: CommonNumeric,
    },
    /// Euler-Lagrange residual of a named planar polar curve.
    Euler {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        /// Curve name: line, circle, sec3 or hyperbola.
        #[arg(long)]
        curve: String,
        /// Sample count over the curve's domain.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Distance kept from the domain ends.
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        /// Also validate against the discrete first-variation oracle.
        #[arg(long)]
        validate: bool,
        #[command(flatten)]
        common: CommonNumeric,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode> {
    match command {
        Command::Verify {
            theorem,
            expected,
            report,
            format,
        } => cmd_verify(&theorem, expected.as_deref(), report.as_deref(), format),
        Command::Residual {
            surface,
            alpha,
            grid,
            common,
        } => cmd_residual(&surface, alpha, grid, &common),
        Command::Energy {
            surface,
            alpha,
            patch,
            common,
        } => cmd_energy(&surface, alpha, patch.as_deref(), &common),
        Command::Variation {
            surface,
            alpha,
            perturbation,
            eps,
            common,
        } => cmd_variation(&surface, alpha, &perturbation, eps, &common),
        Command::Shoot {
            alpha,
            init,
            arclen,
            common,
        } => cmd_shoot(alpha, &init, arclen, &common),
        Command::Euler {
            alpha,
            curve,
            samples,
            margin,
            validate,
            common,
        } => cmd_euler(alpha, &curve, samples, margin, validate, &common),
    }
}

fn cmd_verify(
    theorem: &str,
    expected: Option<&std::path::Path>,
    report: Option<&std::path::Path>,
    format: Format,
) -> Result<ExitCode> {
    let outcome = run_theorem(theorem, expected)?;
    let json = render_report(&outcome, ReportFormat::Json);
    if let Some(path) = report {
        write_atomically(path, json.as_bytes())?;
    }
    match format {
        Format::Json => println!("{json}"),
        _ => print!("{}", render_report(&outcome, ReportFormat::Text)),
    }
    let (_, failed, errored, skipped) = outcome.counts();
    if errored > 0 || skipped > 0 {
        return Ok(ExitCode::from(2));
    }
    if failed > 0 {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_residual(surface: &str, alpha: f64, grid: usize, common: &CommonNumeric) -> Result<ExitCode> {
    let spec = surface_arg::parse_surface(surface)?;
    let cfg = common.config();
    let patch = default_patch(&spec);
    let scan = residual_grid(&spec, alpha, grid, &patch, &cfg)?;
    if let Some(path) = &common.out {
        let mut bytes = Vec::new();
        write_grid_csv(&scan, &mut bytes)?;
        write_atomically(path, &bytes)?;
    }
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "command": "residual",
                "alpha": alpha,
                "grid": grid,
                "max_abs_residual": scan.max_abs_residual,
                "min_abs_residual": scan.min_abs_residual,
                "nodes": scan.rows.len(),
                "skipped": scan.skipped,
            })
        ),
        Format::Csv => {
            let mut bytes = Vec::new();
            write_grid_csv(&scan, &mut bytes)?;
            print!("{}", String::from_utf8_lossy(&bytes));
        }
        Format::Text => {
            println!(
                "max |residual| = {:.16e} over {} nodes ({} skipped at the origin)",
                scan.max_abs_residual,
                scan.rows.len(),
                scan.skipped
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_patch(text: &str) -> Result<Patch> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| anyhow!("{e}")))
        .collect::<Result<_>>()?;
    if parts.len() != 4 {
        bail!("patch wants four numbers u0,u1,v0,v1");
    }
    Ok(Patch {
        u0: parts[0],
        u1: parts[1],
        v0: parts[2],
        v1: parts[3],
    })
}

fn cmd_energy(
    surface: &str,
    alpha: f64,
    patch: Option<&str>,
    common: &CommonNumeric,
) -> Result<ExitCode> {
    let spec = surface_arg::parse_surface(surface)?;
    let cfg = common.config();
    let patch = match patch {
        Some(text) => parse_patch(text)?,
        None => default_patch(&spec),
    };
    let value = energy(&spec, alpha, &patch, cfg.quad_order, &cfg)?;
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({ "command": "energy", "alpha": alpha, "value": value })
        ),
        _ => println!("{value:.16e}"),
    }
    if let Some(path) = &common.out {
        write_atomically(path, format!("{value:.16e}\n").as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_variation(
    surface: &str,
    alpha: f64,
    perturbation: &str,
    eps: f64,
    common: &CommonNumeric,
) -> Result<ExitCode> {
    let spec = surface_arg::parse_surface(surface)?;
    let cfg = common.config();
    let patch = default_patch(&spec);
    let field = match perturbation {
        "constant" => Perturbation::constant(1.0),
        "random" => Perturbation::random_smooth(common.seed),
        other => bail!("unknown perturbation `{other}` (use constant or random)"),
    };
    let value = first_variation(&spec, alpha, &field, eps, &patch, cfg.quad_order, &cfg)?;
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "command": "variation",
                "alpha": alpha,
                "perturbation": perturbation,
                "seed": common.seed,
                "eps": eps,
                "value": value,
            })
        ),
        _ => println!("{value:.16e}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_shoot(alpha: f64, init: &str, arclen: f64, common: &CommonNumeric) -> Result<ExitCode> {
    let parts: Vec<f64> = init
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| anyhow!("{e}")))
        .collect::<Result<_>>()?;
    if parts.len() != 3 {
        bail!("init wants three numbers f0,z0,angle0");
    }
    let profile = shoot_rotational(alpha, (parts[0], parts[1], parts[2]), arclen, common.ode_step)
        .context("profile integration failed")?;
    if let Some(path) = &common.out {
        let mut bytes = Vec::new();
        profile.write_csv(&mut bytes)?;
        write_atomically(path, &bytes)?;
    }
    match common.format {
        Format::Json => {
            let last = profile.samples().last().unwrap();
            println!(
                "{}",
                serde_json::json!({
                    "command": "shoot",
                    "alpha": alpha,
                    "samples": profile.samples().len(),
                    "end": { "s": last.s, "f": last.f, "z": last.z, "theta": last.theta },
                    "unit_speed_defect": profile.unit_speed_defect(),
                })
            );
        }
        Format::Csv => {
            let mut bytes = Vec::new();
            profile.write_csv(&mut bytes)?;
            print!("{}", String::from_utf8_lossy(&bytes));
        }
        Format::Text => {
            let last = profile.samples().last().unwrap();
            println!(
                "integrated {} samples to s = {:.6}; end point (f, z) = ({:.9}, {:.9})",
                profile.samples().len(),
                last.s,
                last.f,
                last.z
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_euler(
    alpha: f64,
    curve_name: &str,
    samples: usize,
    margin: f64,
    validate: bool,
    common: &CommonNumeric,
) -> Result<ExitCode> {
    let curve = PolarCurve::named(curve_name)
        .ok_or_else(|| anyhow!("unknown curve `{curve_name}` (line, circle, sec3, hyperbola)"))?;
    let (t0, t1) = curve.theta_range;
    let (lo, hi) = (t0 + margin, t1 - margin);
    let mut rows = Vec::with_capacity(samples + 1);
    let mut max_abs = 0.0_f64;
    for i in 0..=samples {
        let theta = lo + (hi - lo) * i as f64 / samples as f64;
        let r = euler_curve_residual(alpha, &curve, theta)?;
        max_abs = max_abs.max(r.abs());
        rows.push((theta, r));
    }
    let oracle_max_dev = if validate {
        let devs = discrete_variation_residual(alpha, &curve, 200, margin);
        let mut max_dev = 0.0_f64;
        for (theta, oracle) in devs {
            let formula = euler_curve_residual(alpha, &curve, theta)?;
            max_dev = max_dev.max((formula - oracle).abs());
        }
        Some(max_dev)
    } else {
        None
    };
    if let Some(path) = &common.out {
        let mut text = String::from("theta,residual\n");
        for (theta, r) in &rows {
            text.push_str(&format!("{theta:.16e},{r:.16e}\n"));
        }
        write_atomically(path, text.as_bytes())?;
    }
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "command": "euler",
                "alpha": alpha,
                "curve": curve_name,
                "samples": rows.len(),
                "max_abs_residual": max_abs,
                "oracle_max_deviation": oracle_max_dev,
            })
        ),
        _ => {
            println!("max |residual| = {max_abs:.16e} over {} samples", rows.len());
            if let Some(dev) = oracle_max_dev {
                println!("max |formula - oracle| = {dev:.16e}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
