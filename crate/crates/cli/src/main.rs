//! `avg`: averaged functions and limit-cycle counts for perturbed centers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use avgcycles::averaging::{integrand_formula, BellPolynomial};
use avgcycles::roots::kukles_bound;
use avgcycles::runner::{parse_system, run_pipeline, Mode, RunOptions};
use clap::{Parser, Subcommand};

const EXIT_PARSE: u8 = 2;
const EXIT_STAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "avg", version, about = "Higher-order averaging for perturbed planar centers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a system file.
    Run {
        file: PathBuf,
        /// Averaging order (overrides `[run] order`).
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<Mode>,
        /// Grid size of the numeric zero scan.
        #[arg(long)]
        grid: Option<usize>,
        /// Zero tolerance for scans and vanishing checks.
        #[arg(long)]
        tol: Option<f64>,
        /// Directory for report.txt, report.json and samples.csv.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of interior sample points written to samples.csv.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Print the integrand of y_k in terms of F_j, their r-derivatives and y_i.
    Formula {
        #[arg(long)]
        order: usize,
    },
    /// Print the partial Bell polynomial B_{L,M}.
    Bell {
        #[arg(long = "l")]
        l: u32,
        #[arg(long = "m")]
        m: u32,
    },
    /// Upper bound on limit cycles of Kukles-type perturbations.
    Bound {
        /// Degrees and order as `m,n1,n2,n3,k`.
        #[arg(long)]
        kukles: String,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, order, mode, grid, tol, out, samples } => {
            let overrides = RunOptions { order, mode, grid, tol, samples, z_max: None };
            run(&file, &overrides, out.as_deref())
        }
        Command::Formula { order } => {
            if order == 0 || order > 30 {
                eprintln!("error: order must be between 1 and 30");
                return ExitCode::from(EXIT_PARSE);
            }
            println!("{}", integrand_formula(order));
            ExitCode::SUCCESS
        }
        Command::Bell { l, m } => {
            if m == 0 || m > l || l > 30 {
                eprintln!("error: need 1 <= M <= L <= 30");
                return ExitCode::from(EXIT_PARSE);
            }
            println!("{}", BellPolynomial::new(l, m));
            ExitCode::SUCCESS
        }
        Command::Bound { kukles } => {
            let parts: Result<Vec<u32>, _> = kukles.split(',').map(|s| s.trim().parse::<u32>()).collect();
            let parts = match parts {
                Ok(p) if p.len() == 5 => p,
                _ => {
                    eprintln!("error: expected m,n1,n2,n3,k");
                    return ExitCode::from(EXIT_PARSE);
                }
            };
            match kukles_bound(parts[0], parts[1], parts[2], parts[3], parts[4]) {
                Ok(b) => {
                    println!("{b}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_STAGE)
                }
            }
        }
    }
}

fn run(file: &Path, overrides: &RunOptions, out: Option<&Path>) -> ExitCode {
    let src = match fs::read_to_string(file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let system = match parse_system(&src) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}:{e}", file.display());
            return ExitCode::from(EXIT_PARSE);
        }
    };
    let report = run_pipeline(&system, overrides);
    let text = report.to_string();
    print!("{text}");
    if let Some(dir) = out {
        let written = fs::create_dir_all(dir)
            .and_then(|_| fs::write(dir.join("report.txt"), &text))
            .and_then(|_| fs::write(dir.join("report.json"), report.to_json()))
            .and_then(|_| match report.samples_csv() {
                Some(csv) => fs::write(dir.join("samples.csv"), csv),
                None => Ok(()),
            });
        if let Err(e) = written {
            eprintln!("error: writing to {}: {e}", dir.display());
            return ExitCode::from(EXIT_STAGE);
        }
    }
    if let Some(f) = &report.failure {
        eprintln!("error: stage {} failed: {}", f.stage, f.message);
        return ExitCode::from(EXIT_STAGE);
    }
    ExitCode::SUCCESS
}
