use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ncgeom::classical::DEFAULT_FD_STEP;
use ncgeom::suite::{self, SweepRow};
use ncgeom::{DerivativeMode, SuiteOptions, SuiteReport, Surface, ToleranceSpec};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

#[derive(Parser, Debug)]
#[command(
    name = "ncgeom",
    version,
    about = "Verify tangent-space geometry of the fuzzy sphere and noncommutative torus"
)]
struct Cli {
    /// Write the structured report to this path (`-` for standard output).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Absolute tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    atol: f64,
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    rtol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Sampling {
    /// Random trials per check.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fuzzy sphere in dimension N.
    Sphere {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Noncommutative torus at theta = pi k / N.
    Torus {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Classical embedded surface.
    Classical {
        #[arg(long, value_enum)]
        surface: SurfaceArg,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
        mode: ModeArg,
        /// Central-difference step for `--mode fd`.
        #[arg(long, default_value_t = DEFAULT_FD_STEP)]
        fd_step: f64,
    },
    /// Fuzzy sphere for N = 2..=max-dim, with the classical limit.
    Sweep {
        #[arg(long)]
        max_dim: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SurfaceArg {
    Sphere,
    CliffordTorus,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Analytic,
    Fd,
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

enum Failure {
    Usage(String),
    Io(anyhow::Error),
}

impl From<ncgeom::Error> for Failure {
    fn from(err: ncgeom::Error) -> Self {
        Failure::Usage(err.to_string())
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    if !(cli.atol >= 0.0 && cli.rtol >= 0.0) {
        return Err(Failure::Usage("--atol and --rtol must be nonnegative".into()));
    }
    let tol = ToleranceSpec::new(cli.atol, cli.rtol);
    let mut rows = None;
    let report = match cli.command {
        Command::Sphere { dim, sampling } => suite::sphere_suite(dim, &options(&sampling, tol))?,
        Command::Torus { dim, k, sampling } => suite::torus_suite(dim, k, &options(&sampling, tol))?,
        Command::Classical {
            surface,
            grid,
            mode,
            fd_step,
        } => {
            let surface = match surface {
                SurfaceArg::Sphere => Surface::Sphere,
                SurfaceArg::CliffordTorus => Surface::CliffordTorus,
            };
            let mode = match mode {
                ModeArg::Analytic => DerivativeMode::Analytic,
                ModeArg::Fd => DerivativeMode::FiniteDifference { step: fd_step },
            };
            suite::classical_suite(surface, grid, mode, tol)?
        }
        Command::Sweep { max_dim, trials, seed } => {
            let (report, table) = suite::sweep(max_dim, &SuiteOptions { trials, seed, tol })?;
            rows = Some(table);
            report
        }
    };

    let json_to_stdout = cli.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if !json_to_stdout {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        let written = write_text(&mut out, &report, rows.as_deref()).and_then(|_| out.flush());
        // A closed pipe (`ncgeom ... | head`) is not a failure of the checks.
        written
            .or_else(|e| {
                if e.kind() == io::ErrorKind::BrokenPipe {
                    Ok(())
                } else {
                    Err(e)
                }
            })
            .context("writing report")
            .map_err(Failure::Io)?;
    }
    if let Some(path) = &cli.json {
        let result = if json_to_stdout {
            write_json(io::stdout().lock(), &report)
        } else {
            File::create(path)
                .with_context(|| format!("creating {}", path.display()))
                .and_then(|f| write_json(BufWriter::new(f), &report))
        };
        result.map_err(Failure::Io)?;
    }
    Ok(report.all_pass())
}

fn options(s: &Sampling, tol: ToleranceSpec) -> SuiteOptions {
    SuiteOptions {
        trials: s.trials,
        seed: s.seed,
        tol,
    }
}

fn write_text(out: &mut impl Write, report: &SuiteReport, rows: Option<&[SweepRow]>) -> io::Result<()> {
    let geometry: Vec<String> = report
        .geometry
        .iter()
        .map(|(k, v)| match v {
            ncgeom::ParamValue::Int(i) => format!("{k}={i}"),
            ncgeom::ParamValue::Real(r) => format!("{k}={r}"),
            ncgeom::ParamValue::Text(t) => format!("{k}={t}"),
        })
        .collect();
    writeln!(out, "suite {} ({})", report.suite, geometry.join(", "))?;
    writeln!(out, "seed {}  version {}", report.seed, report.tool_version)?;
    if let Some(rows) = rows {
        writeln!(out)?;
        writeln!(
            out,
            "{:>4}  {:>12}  {:>20}  {:>12}  suite",
            "N", "hbar", "S(N)", "|S-2|"
        )?;
        for r in rows {
            let status = if r.suite_pass { "pass" } else { "FAIL" };
            writeln!(
                out,
                "{:>4}  {:>12.9}  {:>20.16}  {:>12.6e}  {status}",
                r.n, r.hbar, r.scalar, r.gap
            )?;
        }
        let mono = report.check("monotonic_increase").is_some_and(|c| c.pass);
        writeln!(out, "monotonic: {mono}")?;
    }
    writeln!(out)?;
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{status}  {:<width$}  residual {:>10.3e}  tol {:>10.3e}  [{}]",
            c.name, c.max_residual, c.tolerance, c.paper_anchor
        )?;
    }
    let passed = report.checks.iter().filter(|c| c.pass).count();
    writeln!(out)?;
    writeln!(out, "{passed}/{} checks passed", report.checks.len())
}

/// Pretty JSON with every float printed to 17 significant digits.
struct ExactFloats(PrettyFormatter<'static>);

impl Formatter for ExactFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

fn write_json(mut writer: impl Write, report: &SuiteReport) -> anyhow::Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut writer, ExactFloats(PrettyFormatter::new()));
    report.serialize(&mut ser).context("serializing report")?;
    writeln!(writer)?;
    writer.flush()?;
    Ok(())
}
