use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pvoigt::csvio::{self, format_f64};
use pvoigt::kernel::objective_value;
use pvoigt::{
    faddeeva_approx, find_max_discrepancy, fit_expansion, kernel_profile, scan, w_reference,
    ComplexArgument, Component, Error, FitObjective, FitOptions, KernelExpansion,
    PseudoVoigtParams, QuadratureConfig, ScanGrid,
};

/// Rational pseudo-Voigt / complex error function approximation tools.
#[derive(Debug, Parser)]
#[command(name = "pvoigt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the approximation of w = K + iL at one point.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        y: f64,
        #[arg(long, default_value_t = 2.75)]
        gamma: f64,
        /// Also compute quadrature reference values and their differences.
        #[arg(long)]
        with_ref: bool,
    },
    /// Tabulate approximation, reference and absolute differences over an (x, y) grid.
    Scan {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        x_min: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        x_max: f64,
        /// Number of x points, endpoints included.
        #[arg(long, default_value_t = 1001)]
        steps: usize,
        /// Comma-separated, strictly increasing y values.
        #[arg(long = "y", value_delimiter = ',', default_value = "0,0.1,0.5,1")]
        y_values: Vec<f64>,
        #[arg(long, default_value_t = 2.75)]
        gamma: f64,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate the two-term kernel expansion and its error term.
    Kernel {
        #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
        t_min: f64,
        #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
        t_max: f64,
        /// Number of t points, endpoints included.
        #[arg(long, default_value_t = 100_001)]
        steps: usize,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit kernel expansion coefficients to e^(-t^2) on [0, t_max].
    Fit {
        #[arg(long, default_value_t = 2)]
        n_terms: usize,
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, value_enum, default_value_t = ObjectiveArg::L2)]
        objective: ObjectiveArg,
        /// Coefficient CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the largest absolute differences over x in [0, x_max] at fixed y.
    Maxerr {
        #[arg(long, default_value_t = 0.0)]
        y: f64,
        #[arg(long, default_value_t = 2.75)]
        gamma: f64,
        #[arg(long, default_value_t = 10.0)]
        x_max: f64,
        /// Coarse grid points before golden-section refinement.
        #[arg(long, default_value_t = 2001)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    L2,
    Linf,
}

impl From<ObjectiveArg> for FitObjective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::L2 => FitObjective::L2,
            ObjectiveArg::Linf => FitObjective::Linf,
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) => 3,
        Error::Io(_) | Error::Csv(_) | Error::Format(_) => 4,
        Error::Quadrature { .. } | Error::FitNonConvergence { .. } => 5,
    }
}

/// CSV goes to `out` (or stdout); the summary goes to stdout only when the CSV does not.
struct Output {
    csv: Box<dyn Write>,
    summary: Box<dyn Write>,
}

impl Output {
    fn open(out: Option<&PathBuf>) -> Result<Self, Error> {
        Ok(match out {
            Some(path) => Output {
                csv: Box::new(BufWriter::new(File::create(path)?)),
                summary: Box::new(io::stdout()),
            },
            None => Output {
                csv: Box::new(io::stdout().lock()),
                summary: Box::new(io::stderr()),
            },
        })
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Eval {
            x,
            y,
            gamma,
            with_ref,
        } => {
            let arg = ComplexArgument::new(x, y)?;
            let p = PseudoVoigtParams::new(gamma)?;
            let approx = faddeeva_approx(arg, p);
            // compute everything before printing anything
            let reference = if with_ref {
                Some(w_reference(arg, &QuadratureConfig::default())?)
            } else {
                None
            };
            let mut out = io::stdout().lock();
            writeln!(out, "k_approx = {}", format_f64(approx.re))?;
            writeln!(out, "l_approx = {}", format_f64(approx.im))?;
            if let Some(r) = reference {
                writeln!(out, "k_ref = {}", format_f64(r.re))?;
                writeln!(out, "l_ref = {}", format_f64(r.im))?;
                writeln!(out, "delta_re = {}", format_f64((r.re - approx.re).abs()))?;
                writeln!(out, "delta_im = {}", format_f64((r.im - approx.im).abs()))?;
            }
        }
        Command::Scan {
            x_min,
            x_max,
            steps,
            y_values,
            gamma,
            out,
        } => {
            let grid = ScanGrid::new(x_min, x_max, steps, y_values)?;
            let p = PseudoVoigtParams::new(gamma)?;
            let report = scan(&grid, p, &QuadratureConfig::default())?;
            let mut output = Output::open(out.as_ref())?;
            csvio::write_scan(&mut output.csv, &report.rows)?;
            output.csv.flush()?;
            let s = &mut output.summary;
            for (re, im) in report
                .per_y_max(Component::Re)
                .iter()
                .zip(report.per_y_max(Component::Im))
            {
                writeln!(
                    s,
                    "y = {}: max delta_re = {} at x = {}; max delta_im = {} at x = {}",
                    format_f64(re.y),
                    format_f64(re.value),
                    format_f64(re.x),
                    format_f64(im.value),
                    format_f64(im.x)
                )?;
            }
            for (name, m) in [("delta_re", report.max_re), ("delta_im", report.max_im)] {
                writeln!(
                    s,
                    "max {name} = {} at x = {}, y = {}",
                    format_f64(m.value),
                    format_f64(m.x),
                    format_f64(m.y)
                )?;
            }
        }
        Command::Kernel {
            t_min,
            t_max,
            steps,
            out,
        } => {
            let rows = kernel_profile(t_min, t_max, steps)?;
            let mut output = Output::open(out.as_ref())?;
            csvio::write_kernel(&mut output.csv, &rows)?;
            output.csv.flush()?;
            let worst = rows.iter().fold(rows[0], |m, r| {
                if r.epsilon.abs() > m.epsilon.abs() {
                    *r
                } else {
                    m
                }
            });
            writeln!(
                output.summary,
                "max |epsilon| = {} at t = {}",
                format_f64(worst.epsilon.abs()),
                format_f64(worst.t)
            )?;
        }
        Command::Fit {
            n_terms,
            t_max,
            objective,
            out,
        } => {
            let opts = FitOptions::new(t_max, objective.into());
            let fit = match fit_expansion(n_terms, &opts) {
                Ok(fit) => fit,
                Err(Error::FitNonConvergence {
                    best,
                    objective,
                    iterations,
                }) => {
                    let mut err = io::stderr();
                    writeln!(err, "best so far:")?;
                    print_terms(&mut err, &best)?;
                    return Err(Error::FitNonConvergence {
                        best,
                        objective,
                        iterations,
                    });
                }
                Err(e) => return Err(e),
            };
            let mut output = Output::open(out.as_ref())?;
            csvio::write_coefficients(&mut output.csv, &fit.expansion)?;
            output.csv.flush()?;
            let s = &mut output.summary;
            print_terms(s, &fit.expansion)?;
            let name = match objective {
                ObjectiveArg::L2 => "l2",
                ObjectiveArg::Linf => "linf",
            };
            writeln!(s, "objective {name} = {}", format_f64(fit.objective))?;
            if n_terms == 2 {
                let standard = objective_value(
                    &KernelExpansion::standard(),
                    opts.objective,
                    opts.t_max,
                    opts.grid_intervals,
                );
                writeln!(s, "standard coefficients {name} = {}", format_f64(standard))?;
                let verdict = if fit.objective <= standard {
                    "yes"
                } else {
                    "no"
                };
                writeln!(
                    s,
                    "fit at least as good as the standard coefficients: {verdict}"
                )?;
            }
        }
        Command::Maxerr {
            y,
            gamma,
            x_max,
            steps,
        } => {
            let p = PseudoVoigtParams::new(gamma)?;
            let cfg = QuadratureConfig::default();
            let re = find_max_discrepancy(p, &cfg, y, x_max, steps, Component::Re)?;
            let im = find_max_discrepancy(p, &cfg, y, x_max, steps, Component::Im)?;
            let mut out = io::stdout().lock();
            writeln!(out, "y = {}", format_f64(y))?;
            writeln!(
                out,
                "max delta_re = {} at x = {}",
                format_f64(re.value),
                format_f64(re.x)
            )?;
            writeln!(
                out,
                "max delta_im = {} at x = {}",
                format_f64(im.value),
                format_f64(im.x)
            )?;
        }
    }
    Ok(())
}

fn print_terms(w: &mut dyn Write, expansion: &KernelExpansion) -> io::Result<()> {
    for (n, t) in expansion.terms().iter().enumerate() {
        writeln!(
            w,
            "n = {n}: alpha = {}, beta = {}",
            format_f64(t.alpha),
            format_f64(t.beta)
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
