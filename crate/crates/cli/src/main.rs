use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qentropy::ensembles::PureState;
use qentropy::systems::{alpha, beta, lattice_momentum_basis, LatticeFreeParticle};
use qentropy_cli::report::format_value;
use qentropy_cli::{parse_scenario, run_invariant_suite, run_perturbation, run_rabi, run_scenario, CliError, SuiteConfig};

/// Entropy-preserving quantum dynamics: scenario runs and invariant checks.
#[derive(Debug, Parser)]
#[command(name = "qentropy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the seeded invariant suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
        dims: Vec<usize>,
        /// Multiplies every residual tolerance.
        #[arg(long, default_value_t = 1.0)]
        tolerance_scale: f64,
        #[arg(long, hide = true)]
        corrupt_evolution: bool,
    },
    /// Evolve a scenario and write its time series as CSV.
    Evolve {
        scenario: PathBuf,
        /// CSV destination (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON summary destination.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Spin-½ Rabi sweep from α against the closed form.
    Rabi {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        delta: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        omega: f64,
        #[arg(long, default_value_t = 20.0)]
        t_max: f64,
        #[arg(long, default_value_t = 1000)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact vs first-order transition probabilities for a scenario.
    Perturb {
        scenario: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orthonormality and completeness residuals of the spin-½ and lattice bases.
    BasisCheck {
        #[arg(long, default_value_t = 8)]
        lattice_n: usize,
    },
}

fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_scenario(path: &Path) -> Result<qentropy_cli::ScenarioSpec, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify { seed, dims, tolerance_scale, corrupt_evolution } => {
            if dims.is_empty() || dims.contains(&0) {
                return Err(CliError::validation("--dims", "dimensions must be positive"));
            }
            let config = SuiteConfig { seed, dims, tolerance_scale, corrupt_evolution };
            let report = run_invariant_suite(&config)?;
            println!("{report}");
            if !report.passed() {
                return Err(CliError::Invariant("invariant suite reported failures".into()));
            }
        }
        Command::Evolve { scenario, out, summary } => {
            let spec = read_scenario(&scenario)?;
            let report = run_scenario(&spec)?;
            let mut w = sink(out.as_deref())?;
            report.write_csv(&mut w)?;
            w.flush()?;
            if let Some(path) = summary {
                let mut f = BufWriter::new(File::create(path)?);
                report.write_summary(&mut f)?;
                f.flush()?;
            }
            if !report.passed() {
                let names: Vec<String> = report.failures().iter().map(|c| c.name.clone()).collect();
                return Err(CliError::Invariant(names.join(", ")));
            }
        }
        Command::Rabi { delta, omega, t_max, points, out } => {
            let (table, deviation) = run_rabi(delta, omega, t_max, points)?;
            let meta = format!("command=rabi delta={delta:e} omega={omega:e} max_deviation={deviation:.3e}");
            let mut w = sink(out.as_deref())?;
            table.write_csv(&mut w, &meta)?;
            w.flush()?;
            if deviation > 1e-9 {
                return Err(CliError::Invariant(format!("Rabi deviation {deviation:.3e} exceeds 1e-9")));
            }
        }
        Command::Perturb { scenario, out } => {
            let spec = read_scenario(&scenario)?;
            let table = run_perturbation(&spec)?;
            let meta = format!("command=perturb system={} dim={}", spec.document.system.kind.as_str(), spec.dim());
            let mut w = sink(out.as_deref())?;
            table.write_csv(&mut w, &meta)?;
            w.flush()?;
        }
        Command::BasisCheck { lattice_n } => {
            let sys = LatticeFreeParticle::new(lattice_n, 1.0, 1.0)?;
            let spin: [PureState; 2] = [alpha(), beta()];
            let rows = [
                ("spin-half", qentropy::ensembles::basis_residuals(&spin)),
                ("lattice-momentum", lattice_momentum_basis(&sys).residuals()),
            ];
            let mut ok = true;
            println!("basis,dimension,orthonormality,completeness");
            for (name, r) in rows {
                let completeness = r.completeness.unwrap_or(f64::INFINITY);
                ok &= r.orthonormality <= 1e-12 && completeness <= 1e-12;
                let dim = if name == "spin-half" { 2 } else { lattice_n };
                println!("{name},{dim},{},{}", format_value(r.orthonormality), format_value(completeness));
            }
            if !ok {
                return Err(CliError::Invariant("basis residual above 1e-12".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
