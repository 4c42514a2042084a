//! `oscalg` — verification suite for the planar oscillator's first-order
//! chiral modes, their soldering into second-order oscillators, and the
//! ladder-operator algebra realizations on a truncated two-mode Fock
//! space.
//!
//! Exit codes: 0 when every check passes, 1 when a residual crosses its
//! threshold (the failing relations are named on stderr), 2 on usage
//! errors. Reports are deterministic for a fixed configuration.

mod report;
mod sections;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

use oscalg_core::jsalg::SpectrumReport;
use oscalg_core::lagrangian::scalar::parse_rational;

use report::{render_text, CheckLine, ConfigEcho, Envelope, Tolerances};
use sections::{
    algebra_section, canonical_section, simulate_section, solder_section, spectrum_section,
    AlgebraSection, CanonicalSection, Ctx, SolderSection, SIMULATED_SYSTEMS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Arithmetic {
    /// IEEE doubles with tolerance thresholds.
    Float,
    /// Gaussian rationals with zero-tolerance identities
    /// (solder-check and full-report; needs a rational ω).
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    /// Human-readable summary.
    Text,
    /// The JSON report payload.
    Json,
    /// The trajectory CSV (simulate only).
    Csv,
}

#[derive(Parser)]
#[command(
    name = "oscalg",
    version,
    about = "Verify planar-oscillator chiral modes, soldering, and ladder-operator algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Oscillator frequency ω, as a float or a rational like `3/2`.
    #[arg(long, global = true, default_value = "1")]
    omega: String,

    /// Uniform per-mode Fock occupation cutoff.
    #[arg(long, global = true, default_value_t = 10)]
    cutoff: usize,

    /// Guarded residuals restrict to states whose occupations all sit at
    /// least this far below the cutoff.
    #[arg(long, global = true, default_value_t = 2)]
    guard: usize,

    /// Scalar arithmetic for the identities that support it.
    #[arg(long, global = true, value_enum, default_value_t = Arithmetic::Float)]
    arithmetic: Arithmetic,

    /// Directory for report files (default: $OSCALG_OUTPUT_DIR, else `.`).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// What to print on stdout.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Threshold for algebraic identity residuals.
    #[arg(long, global = true, default_value = "1e-12")]
    tol_algebra: f64,

    /// Threshold for conserved-quantity drifts.
    #[arg(long, global = true, default_value = "1e-10")]
    tol_conservation: f64,

    /// Threshold for decoupling cross terms and total-derivative variations.
    #[arg(long, global = true, default_value = "1e-14")]
    tol_cross_terms: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four ladder realizations, their Casimirs, and the
    /// pseudo-chiral mode layer.
    VerifyAlgebra,
    /// Fuse opposite first-order modes and verify the reduction, the
    /// gauge currents, and the rigid symmetries.
    SolderCheck,
    /// Integrate one mode and track its conserved quantities.
    Simulate {
        /// One of: chiral_plus, chiral_minus, pseudochiral_plus,
        /// pseudochiral_minus, bidimensional_direct.
        #[arg(long)]
        system: String,
        /// Number of periods T = 2π/ω to integrate.
        #[arg(long, default_value_t = 100)]
        periods: usize,
        /// Integration steps per period.
        #[arg(long, default_value_t = 32)]
        steps_per_period: usize,
        /// Comma-separated initial phase values (defaults to a fixed state).
        #[arg(long)]
        initial: Option<String>,
    },
    /// Tabulate guarded spectra of the direct and indirect Hamiltonians
    /// and certify the pseudo-chiral ladder.
    Spectrum,
    /// Run every verification and write one combined report.
    FullReport,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyAlgebra => "verify-algebra",
            Command::SolderCheck => "solder-check",
            Command::Simulate { .. } => "simulate",
            Command::Spectrum => "spectrum",
            Command::FullReport => "full-report",
        }
    }
}

#[derive(Debug, Serialize)]
struct SimSummary {
    system: String,
    charge: String,
    energy_max_drift: f64,
    charge_max_drift: f64,
    trajectory_file: String,
    report_file: String,
}

#[derive(Debug, Serialize)]
struct FullReport {
    algebra: AlgebraSection,
    solder: SolderSection,
    canonical_maps: CanonicalSection,
    spectrum: SpectrumReport,
    simulations: Vec<SimSummary>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let rational = parse_rational(&cli.omega);
    let omega = match &rational {
        Some(r) => r
            .to_f64()
            .ok_or_else(|| format!("ω `{}` is out of floating-point range", cli.omega))?,
        None => cli.omega.trim().parse::<f64>().map_err(|_| {
            format!(
                "cannot parse ω `{}` (use a float or a rational like 3/2)",
                cli.omega
            )
        })?,
    };
    if !omega.is_finite() || omega <= 0.0 {
        return Err(format!("ω must be positive and finite, got `{}`", cli.omega));
    }

    let exact = cli.arithmetic == Arithmetic::Exact;
    if exact && rational.is_none() {
        return Err(format!(
            "--arithmetic exact needs a rational ω (like 3/2), got `{}`",
            cli.omega
        ));
    }
    if exact && !matches!(cli.command, Command::SolderCheck | Command::FullReport) {
        return Err("--arithmetic exact applies to solder-check and full-report only".to_string());
    }
    if cli.format == OutputFormat::Csv && !matches!(cli.command, Command::Simulate { .. }) {
        return Err("--format csv applies to simulate only".to_string());
    }
    for (value, flag) in [
        (cli.tol_algebra, "--tol-algebra"),
        (cli.tol_conservation, "--tol-conservation"),
        (cli.tol_cross_terms, "--tol-cross-terms"),
    ] {
        if !value.is_finite() || value <= 0.0 {
            return Err(format!("{flag} must be positive and finite"));
        }
    }
    match cli.command {
        Command::VerifyAlgebra | Command::FullReport => {
            if cli.cutoff < 4 {
                return Err(format!("{} needs --cutoff ≥ 4", cli.command.name()));
            }
        }
        Command::Spectrum => {
            if cli.cutoff < 2 {
                return Err("spectrum needs --cutoff ≥ 2".to_string());
            }
        }
        _ => {}
    }
    if matches!(
        cli.command,
        Command::VerifyAlgebra | Command::Spectrum | Command::FullReport
    ) && cli.guard >= cli.cutoff
    {
        return Err(format!(
            "--guard must be smaller than --cutoff (got guard {} with cutoff {})",
            cli.guard, cli.cutoff
        ));
    }

    let tol = Tolerances {
        algebra: cli.tol_algebra,
        conservation: cli.tol_conservation,
        cross_terms: cli.tol_cross_terms,
    };
    let ctx = Ctx {
        omega,
        omega_rational: rational,
        cutoff: cli.cutoff,
        guard: cli.guard,
        exact,
        tol,
    };
    let config = ConfigEcho {
        command: cli.command.name().to_string(),
        omega: cli.omega.clone(),
        omega_float: omega,
        cutoff: cli.cutoff,
        guard: cli.guard,
        arithmetic: if exact { "exact" } else { "float" }.to_string(),
        tolerances: tol,
    };
    let outdir = cli
        .output
        .clone()
        .or_else(|| std::env::var_os("OSCALG_OUTPUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    match &cli.command {
        Command::VerifyAlgebra => {
            let section = algebra_section(&ctx)?;
            let envelope = Envelope::new(config, section.payload, section.checks);
            let path = write_file(&outdir, "algebra_report.json", &envelope.to_json())?;
            Ok(emit(cli.format, &envelope, &section.info, &[path]))
        }
        Command::SolderCheck => {
            let section = solder_section(&ctx)?;
            let envelope = Envelope::new(config, section.payload, section.checks);
            let path = write_file(&outdir, "solder_report.json", &envelope.to_json())?;
            Ok(emit(cli.format, &envelope, &section.info, &[path]))
        }
        Command::Spectrum => {
            let section = spectrum_section(&ctx)?;
            let envelope = Envelope::new(config, section.payload, section.checks);
            let path = write_file(&outdir, "spectrum_report.json", &envelope.to_json())?;
            Ok(emit(cli.format, &envelope, &section.info, &[path]))
        }
        Command::Simulate {
            system,
            periods,
            steps_per_period,
            initial,
        } => {
            let (section, csv) =
                simulate_section(&ctx, system, *periods, *steps_per_period, initial.as_deref())?;
            let csv_path = write_file(&outdir, &format!("trajectory_{system}.csv"), &csv)?;
            let envelope = Envelope::new(config, section.payload, section.checks);
            let json_path =
                write_file(&outdir, &format!("simulate_{system}.json"), &envelope.to_json())?;
            if cli.format == OutputFormat::Csv {
                print_stdout(&csv);
                return Ok(conclude(&envelope.checks));
            }
            Ok(emit(
                cli.format,
                &envelope,
                &section.info,
                &[csv_path, json_path],
            ))
        }
        Command::FullReport => {
            let algebra = algebra_section(&ctx)?;
            let solder = solder_section(&ctx)?;
            let canonical = canonical_section(&ctx)?;
            let spectrum = spectrum_section(&ctx)?;

            let mut checks = Vec::new();
            let mut info = Vec::new();
            let mut written = Vec::new();

            info.push("— ladder-operator algebras —".to_string());
            info.extend(algebra.info);
            checks.extend(algebra.checks);
            info.push("— soldering —".to_string());
            info.extend(solder.info);
            checks.extend(solder.checks);
            info.push("— canonical maps —".to_string());
            info.extend(canonical.info);
            checks.extend(canonical.checks);
            info.push("— spectra —".to_string());
            info.extend(spectrum.info);
            checks.extend(spectrum.checks);

            let mut simulations = Vec::new();
            for system in SIMULATED_SYSTEMS {
                let (sim, csv) = simulate_section(&ctx, system, 100, 32, None)?;
                written.push(write_file(
                    &outdir,
                    &format!("trajectory_{system}.csv"),
                    &csv,
                )?);
                let report_file = format!("simulate_{system}.json");
                let sim_checks = sim.checks;
                let sim_envelope = Envelope::new(config.clone(), sim.payload, sim_checks.clone());
                written.push(write_file(&outdir, &report_file, &sim_envelope.to_json())?);
                simulations.push(SimSummary {
                    system: system.to_string(),
                    charge: sim_envelope.report.charge.clone(),
                    energy_max_drift: sim_envelope.report.energy_max_drift,
                    charge_max_drift: sim_envelope.report.charge_max_drift,
                    trajectory_file: sim_envelope.report.trajectory_file.clone(),
                    report_file,
                });
                info.push(format!("— simulate {system} —"));
                info.extend(sim.info);
                checks.extend(sim_checks);
            }

            let payload = FullReport {
                algebra: algebra.payload,
                solder: solder.payload,
                canonical_maps: canonical.payload,
                spectrum: spectrum.payload,
                simulations,
            };
            let envelope = Envelope::new(config, payload, checks);
            written.insert(
                0,
                write_file(&outdir, "full_report.json", &envelope.to_json())?,
            );
            Ok(emit(cli.format, &envelope, &info, &written))
        }
    }
}

/// Write to stdout without panicking when the reader has gone away
/// (e.g. `oscalg … | head`); the exit code still reflects the checks.
fn print_stdout(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn write_file(outdir: &Path, name: &str, contents: &str) -> Result<String, String> {
    std::fs::create_dir_all(outdir).map_err(|e| {
        format!(
            "cannot create output directory {}: {e}",
            outdir.display()
        )
    })?;
    let path = outdir.join(name);
    std::fs::write(&path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    Ok(path.display().to_string())
}

fn emit<T: Serialize>(
    format: OutputFormat,
    envelope: &Envelope<T>,
    info: &[String],
    written: &[String],
) -> ExitCode {
    match format {
        OutputFormat::Text => {
            print_stdout(&render_text(&envelope.config, info, &envelope.checks, written))
        }
        OutputFormat::Json => print_stdout(&envelope.to_json()),
        OutputFormat::Csv => {}
    }
    conclude(&envelope.checks)
}

fn conclude(checks: &[CheckLine]) -> ExitCode {
    let failures: Vec<&CheckLine> = checks.iter().filter(|c| !c.pass).collect();
    if failures.is_empty() {
        return ExitCode::SUCCESS;
    }
    for failure in &failures {
        eprintln!(
            "FAIL {} — observed {}, requires {}",
            failure.name, failure.observed, failure.requirement
        );
    }
    ExitCode::from(1)
}
