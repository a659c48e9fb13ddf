mod render;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use envelope::config::{self, Config, Method, PhiConfig};
use envelope::etsolver::{compact_identical, stationarize, EtSolution};
use envelope::reproduce::{reproduce, Table};
use envelope::Error;

use report::RunReport;

#[derive(Parser)]
#[command(name = "envelope", version, about = "Envelope-theory spectra of many-body systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Et,
    Iet,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Table1,
    Table2,
    Table3,
}

#[derive(clap::Args)]
struct Overrides {
    /// Replaces the config's `method` and drops its `state.phi`.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Explicit φ for the modified quantum number.
    #[arg(long)]
    phi: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the system described by a config file.
    Solve {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        output: Output,
        #[command(flatten)]
        overrides: Overrides,
        /// Use the compact equations (single set of identical particles).
        #[arg(long)]
        compact: bool,
        /// Report the solve time.
        #[arg(long)]
        timing: bool,
        /// Also report the binding energy in eV (atomic-unit input).
        #[arg(long)]
        ev: bool,
    },
    /// Recompute a benchmark table against the published values.
    Reproduce {
        #[arg(value_enum)]
        table: TableArg,
        #[arg(long, value_enum, default_value = "md")]
        output: Output,
    },
    /// Solve across values of numeric config leaves; CSV on stdout.
    Sweep {
        config: PathBuf,
        /// Dotted path, e.g. `pairs.0.1.amplitude` or `sets.1.kinetic.mass`.
        /// Repeat to move several leaves together.
        #[arg(long, required = true)]
        param: Vec<String>,
        /// Comma-separated values.
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        values: Option<String>,
        /// `start:stop:count`, endpoints included.
        #[arg(long)]
        range: Option<String>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check a config file and list every problem.
    Validate { config: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidSpec(_) | Error::OutOfRange { .. } | Error::QuantumMismatch { .. } => 2,
        Error::NoConvergence { .. } => 3,
        Error::IetUnsupported(_) => 4,
        _ => 1,
    }
}

fn report_error(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    if let Error::InvalidSpec(violations) = e {
        for v in violations {
            eprintln!("  {v}");
        }
    }
    ExitCode::from(exit_code(e))
}

fn load(path: &Path, overrides: &Overrides) -> Result<Config, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let mut cfg = config::parse(&text)?;
    if let Some(m) = overrides.method {
        cfg.method = match m {
            MethodArg::Et => Method::Et,
            MethodArg::Iet => Method::Iet,
        };
        cfg.state.phi = None;
    }
    if let Some(phi) = overrides.phi {
        cfg.state.phi = Some(PhiConfig::Value(phi));
    }
    Ok(cfg)
}

fn solve_config(cfg: &Config, compact: bool) -> Result<(config::Resolved, EtSolution), Error> {
    let r = cfg.resolve()?;
    let sol = if compact {
        compact_identical(&r.spec, &r.state)?
    } else {
        stationarize(&r.spec, &r.state, &r.solver)?
    };
    Ok((r, sol))
}

fn cmd_solve(path: &Path, output: Output, overrides: &Overrides, compact: bool, timing: bool, ev: bool) -> Result<String, Error> {
    let cfg = load(path, overrides)?;
    let start = Instant::now();
    let (resolved, sol) = solve_config(&cfg, compact)?;
    let elapsed = start.elapsed();
    let mut report = RunReport::new(resolved, sol, ev);
    if timing {
        report.timing_ms = Some(elapsed.as_secs_f64() * 1e3);
    }
    Ok(match output {
        Output::Json => serde_json::to_string_pretty(&report).expect("report is serializable") + "\n",
        Output::Csv => render::csv(&report),
        Output::Md => render::markdown(&report),
    })
}

fn parse_values(values: Option<&str>, range: Option<&str>) -> Result<Vec<f64>, Error> {
    let bad = |s: &str| Error::Config(format!("cannot read `{s}` as a number"));
    if let Some(v) = values {
        return v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().map_err(|_| bad(s)))
            .collect();
    }
    let Some(range) = range else {
        return Ok(Vec::new());
    };
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(Error::Config(format!("range `{range}` is not start:stop:count")));
    };
    let start: f64 = start.trim().parse().map_err(|_| bad(start))?;
    let stop: f64 = stop.trim().parse().map_err(|_| bad(stop))?;
    let count: usize = count.trim().parse().map_err(|_| bad(count))?;
    Ok(match count {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
    })
}

const SWEEP_HEADER: &str = "value,energy,bound,stationarity,gradient_norm,virial,iterations,error";

fn with_leaves(base: &Config, params: &[String], value: f64) -> Result<Config, Error> {
    params.iter().try_fold(base.clone(), |c, p| c.with_leaf(p, value))
}

fn sweep_row(base: &Config, params: &[String], value: f64) -> String {
    let outcome = with_leaves(base, params, value).and_then(|c| solve_config(&c, false));
    match outcome {
        Ok((_, s)) => format!(
            "{value},{:.12e},{:?},{:?},{:.3e},{:.3e},{},",
            s.energy, s.bound, s.stationarity, s.residuals.gradient_norm, s.residuals.virial, s.iterations
        ),
        Err(e) => format!("{value},,,,,,,\"{}\"", e.to_string().replace('"', "'")),
    }
}

fn cmd_sweep(path: &Path, params: &[String], values: Option<&str>, range: Option<&str>, overrides: &Overrides) -> Result<String, Error> {
    let cfg = load(path, overrides)?;
    with_leaves(&cfg, params, 1.0)?;
    let values = parse_values(values, range)?;
    let rows: Vec<String> = values.par_iter().map(|&v| sweep_row(&cfg, params, v)).collect();
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}

fn cmd_validate(path: &Path) -> Result<String, Error> {
    let cfg = load(path, &Overrides { method: None, phi: None })?;
    cfg.resolve()?;
    Ok(format!("{}: ok\n", path.display()))
}

fn cmd_reproduce(table: TableArg, output: Output) -> Result<(String, bool), Error> {
    let table = match table {
        TableArg::Table1 => Table::Table1,
        TableArg::Table2 => Table::Table2,
        TableArg::Table3 => Table::Table3,
    };
    let report = reproduce(table)?;
    let text = match output {
        Output::Json => serde_json::to_string_pretty(&report).expect("report is serializable") + "\n",
        Output::Csv => render::table_csv(&report),
        Output::Md => render::table_markdown(&report),
    };
    Ok((text, report.passed()))
}

fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve {
            config,
            output,
            overrides,
            compact,
            timing,
            ev,
        } => cmd_solve(config, *output, overrides, *compact, *timing, *ev).map(|t| (t, true)),
        Command::Reproduce { table, output } => cmd_reproduce(*table, *output),
        Command::Sweep {
            config,
            param,
            values,
            range,
            overrides,
        } => cmd_sweep(config, param, values.as_deref(), range.as_deref(), overrides).map(|t| (t, true)),
        Command::Validate { config } => cmd_validate(config).map(|t| (t, true)),
    };
    match result {
        Ok((text, ok)) => {
            emit(&text);
            if ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: some cells miss their tolerance");
                ExitCode::FAILURE
            }
        }
        Err(e) => report_error(&e),
    }
}
