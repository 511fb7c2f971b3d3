//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 bad configuration or a
//! computation that cannot proceed with it. Data goes to stdout (or
//! `--output`), diagnostics to stderr, one line each.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand as ClapSubcommand, ValueEnum};
use serde::Serialize;

use crate::continuation::{
    check_decay, check_lipschitz, default_sigma_grid, figure1_dataset, figure1_sigma_grid, CheckReport, CheckStatus,
};
use crate::determinants::BallProblem;
use crate::error::{domain, Result};
use crate::format::{
    branch_csv, branch_rows_json, report_csv, report_rows_json, spectrum_csv, spectrum_json, to_json,
};
use crate::roots::DEFAULT_Z_STEP;
use crate::special_fn::Z_MAX;
use crate::spectrum::{assemble_spectrum, DEFAULT_L_MAX};
use crate::verify::full_suite;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Subcommand {
    Dirichlet,
    Neumann,
    Branches,
    Verify,
    Figure1,
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub n: usize,
    pub sigma: f64,
    pub count: usize,
    pub lambda_max: f64,
    pub l_max: usize,
    pub z_step: f64,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            subcommand: Subcommand::Verify,
            n: 2,
            sigma: 0.0,
            count: 10,
            lambda_max: 500.0,
            l_max: DEFAULT_L_MAX,
            z_step: DEFAULT_Z_STEP,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return domain(format!("--dim must be >= 2, got {}", self.n));
        }
        if !(0.0..=1.0).contains(&self.sigma) {
            return domain(format!("--sigma must lie in [0, 1], got {}", self.sigma));
        }
        if self.count == 0 {
            return domain("--count must be >= 1");
        }
        if !(self.lambda_max > 0.0) || self.lambda_max.sqrt().sqrt() > Z_MAX {
            return domain(format!("--lambda-max must lie in (0, {}], got {}", Z_MAX.powi(4), self.lambda_max));
        }
        if !(self.z_step > 0.0) || !self.z_step.is_finite() || self.z_step > 1.0 {
            return domain(format!("--z-step must lie in (0, 1], got {}", self.z_step));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "ballplate", version, about = "Free and clamped plate eigenvalues on the unit ball")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Space dimension N.
    #[arg(long = "dim", default_value_t = 2)]
    n: usize,
    /// Write data here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct Window {
    #[arg(long, default_value_t = 500.0)]
    lambda_max: f64,
    #[arg(long, default_value_t = DEFAULT_L_MAX)]
    l_max: usize,
    #[arg(long, default_value_t = DEFAULT_Z_STEP)]
    z_step: f64,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    window: Window,
    #[arg(long, default_value_t = 10)]
    count: usize,
}

#[derive(Debug, Args)]
struct NeumannArgs {
    #[command(flatten)]
    spectrum: SpectrumArgs,
    /// Poisson ratio.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    sigma: f64,
}

#[derive(Debug, Args)]
struct WindowArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    window: Window,
}

#[derive(Debug, ClapSubcommand)]
enum Command {
    /// Ordered clamped-plate eigenvalues.
    Dirichlet(SpectrumArgs),
    /// Ordered free-plate eigenvalues, zero modes included.
    Neumann(NeumannArgs),
    /// Branches on the default sigma grid with decay and Lipschitz reports.
    Branches(WindowArgs),
    /// Identity and inequality suite; exits 1 on any failure.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Every branch entering (0.01..0.99) x (0, lambda_max).
    Figure1(WindowArgs),
}

/// Result of argument parsing.
pub enum ParseOutcome {
    Run(RunConfig),
    /// `--help` or `--version`: print and exit 0.
    Info(String),
    /// One-line diagnostic; exit 2.
    Invalid(String),
}

fn first_line(s: &str) -> String {
    s.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments").trim().to_string()
}

pub fn parse_args<I, T>(args: I) -> ParseOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ParseOutcome::Info(e.render().to_string()),
                _ => ParseOutcome::Invalid(first_line(&e.render().to_string())),
            };
        }
    };
    let mut cfg = RunConfig::default();
    let apply_common = |cfg: &mut RunConfig, c: Common| {
        cfg.n = c.n;
        cfg.output = c.output;
        cfg.format = c.format;
    };
    let apply_window = |cfg: &mut RunConfig, w: Window| {
        cfg.lambda_max = w.lambda_max;
        cfg.l_max = w.l_max;
        cfg.z_step = w.z_step;
    };
    match cli.command {
        Command::Dirichlet(a) => {
            cfg.subcommand = Subcommand::Dirichlet;
            apply_common(&mut cfg, a.common);
            apply_window(&mut cfg, a.window);
            cfg.count = a.count;
        }
        Command::Neumann(a) => {
            cfg.subcommand = Subcommand::Neumann;
            apply_common(&mut cfg, a.spectrum.common);
            apply_window(&mut cfg, a.spectrum.window);
            cfg.count = a.spectrum.count;
            cfg.sigma = a.sigma;
        }
        Command::Branches(a) => {
            cfg.subcommand = Subcommand::Branches;
            apply_common(&mut cfg, a.common);
            apply_window(&mut cfg, a.window);
        }
        Command::Verify { common } => {
            cfg.subcommand = Subcommand::Verify;
            apply_common(&mut cfg, common);
        }
        Command::Figure1(a) => {
            cfg.subcommand = Subcommand::Figure1;
            apply_common(&mut cfg, a.common);
            apply_window(&mut cfg, a.window);
        }
    }
    match cfg.validate() {
        Ok(()) => ParseOutcome::Run(cfg),
        Err(e) => ParseOutcome::Invalid(e.to_string()),
    }
}

/// Data produced by a run, written in one piece.
struct Produced {
    data: String,
    exit: i32,
}

#[derive(Serialize)]
struct BranchesJson<'a> {
    rows: Vec<crate::format::BranchRowJson>,
    reports: Vec<crate::format::ReportJson<'a>>,
}

fn produce(cfg: &RunConfig, diag: &mut dyn Write) -> Result<Produced> {
    let ok = |data| Produced { data, exit: EXIT_OK };
    match cfg.subcommand {
        Subcommand::Dirichlet | Subcommand::Neumann => {
            let problem = if cfg.subcommand == Subcommand::Dirichlet {
                BallProblem::dirichlet(cfg.n)?
            } else {
                BallProblem::neumann(cfg.n, cfg.sigma)?
            };
            let s = assemble_spectrum(&problem, cfg.lambda_max, cfg.l_max, cfg.count, cfg.z_step)?;
            if !s.complete {
                let _ = writeln!(
                    diag,
                    "warning: only {} of {} eigenvalues lie below --lambda-max {}",
                    s.total(),
                    cfg.count,
                    cfg.lambda_max
                );
            }
            if s.infinite_zero_eigenspace {
                let _ = writeln!(diag, "note: at sigma = 1 every harmonic function is a zero mode; only positive eigenvalues are listed");
            }
            Ok(ok(match cfg.format {
                OutputFormat::Csv => spectrum_csv(&s),
                OutputFormat::Json => spectrum_json(&s),
            }))
        }
        Subcommand::Branches => {
            let data = figure1_dataset(cfg.n, cfg.lambda_max, cfg.l_max, &default_sigma_grid(), cfg.z_step)?;
            let mut reports: Vec<CheckReport> = Vec::new();
            for b in &data.branches {
                let tag = format!("N={} l={} branch={}", b.n, b.l, b.branch_ordinal);
                reports.push(check_decay(&b.samples).report(format!("decay {tag}")));
                reports.push(check_lipschitz(cfg.n, &b.samples).report(format!("lipschitz {tag}")));
            }
            Ok(ok(match cfg.format {
                OutputFormat::Csv => {
                    let _ = diag.write_all(report_csv(&reports).as_bytes());
                    branch_csv(&data.rows)
                }
                OutputFormat::Json => to_json(&BranchesJson {
                    rows: branch_rows_json(&data.rows),
                    reports: report_rows_json(&reports),
                }),
            }))
        }
        Subcommand::Figure1 => {
            let data = figure1_dataset(cfg.n, cfg.lambda_max, cfg.l_max, &figure1_sigma_grid(), cfg.z_step)?;
            Ok(ok(match cfg.format {
                OutputFormat::Csv => branch_csv(&data.rows),
                OutputFormat::Json => to_json(&branch_rows_json(&data.rows)),
            }))
        }
        Subcommand::Verify => {
            let reports = full_suite(cfg.n)?;
            let passed = reports.iter().all(|r| r.status == CheckStatus::Pass);
            let data = match cfg.format {
                OutputFormat::Csv => report_csv(&reports),
                OutputFormat::Json => to_json(&report_rows_json(&reports)),
            };
            Ok(Produced { data, exit: if passed { EXIT_OK } else { EXIT_VERIFY_FAILED } })
        }
    }
}

/// Executes a validated config. Data goes to `--output` or `out`.
pub fn run(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> i32 {
    if let Err(e) = cfg.validate() {
        let _ = writeln!(diag, "error: {e}");
        return EXIT_BAD_CONFIG;
    }
    let produced = match produce(cfg, diag) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            return EXIT_BAD_CONFIG;
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, produced.data.as_bytes()),
        None => out.write_all(produced.data.as_bytes()).and_then(|_| out.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(diag, "error: cannot write output: {e}");
        return EXIT_BAD_CONFIG;
    }
    if produced.exit == EXIT_VERIFY_FAILED {
        let _ = writeln!(diag, "verification failed");
    }
    produced.exit
}

/// Parses `args` (including the program name) and runs.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(args) {
        ParseOutcome::Run(cfg) => run(&cfg, out, diag),
        ParseOutcome::Info(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        ParseOutcome::Invalid(msg) => {
            let _ = writeln!(diag, "{msg}");
            EXIT_BAD_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn invoke(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(std::iter::once("ballplate").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn defaults() {
        let ParseOutcome::Run(cfg) = parse_args(["ballplate", "neumann"]) else { panic!("parse failed") };
        assert_eq!(cfg.n, 2);
        assert_eq!((cfg.sigma, cfg.count, cfg.lambda_max, cfg.l_max, cfg.z_step), (0.0, 10, 500.0, 12, 1e-2));
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert!(cfg.output.is_none());
    }

    #[test]
    fn bad_configs_exit_two_with_one_line() {
        for args in [
            &["neumann", "--sigma", "1.5"][..],
            &["neumann", "--sigma", "-0.1"],
            &["dirichlet", "--dim", "1"],
            &["dirichlet", "--count", "0"],
            &["dirichlet", "--sigma", "0.5"],
            &["dirichlet", "--z-step", "0"],
            &["dirichlet", "--lambda-max", "1e9"],
            &["neumann", "--format", "xml"],
            &["bogus"],
            &[],
        ] {
            let (code, out, err) = invoke(args);
            assert_eq!(code, EXIT_BAD_CONFIG, "{args:?}");
            assert!(out.is_empty(), "{args:?}");
            assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        }
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = invoke(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("neumann"));
    }

    #[test]
    fn neumann_three_zero_rows() {
        let (code, out, err) = invoke(&["neumann", "--dim", "2", "--sigma", "0.5", "--count", "3"]);
        assert_eq!(code, EXIT_OK, "{err}");
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "N,kind,sigma,lambda,l,multiplicity,j_first,j_last");
        assert_eq!(lines[1], "2,neumann,5.0000000000000000e-1,0.0000000000000000e0,0,1,1,1");
        assert_eq!(lines[2], "2,neumann,5.0000000000000000e-1,0.0000000000000000e0,1,2,2,3");
        assert_eq!(lines.len(), 3);
    }

    #[test]
    fn dirichlet_json_single_entry() {
        let (code, out, _) = invoke(&["dirichlet", "--dim", "2", "--count", "1", "--format", "json"]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0]["l"], 0);
        assert_eq!(rows[0]["multiplicity"], 1);
        assert!((rows[0]["lambda"].as_f64().unwrap() - 104.36).abs() < 0.01);
    }

    #[test]
    fn incomplete_window_warns() {
        let (code, out, err) = invoke(&["dirichlet", "--count", "10"]);
        assert_eq!(code, EXIT_OK);
        assert!(err.starts_with("warning:"));
        assert_eq!(out.lines().count(), 3);
    }

    #[test]
    fn l_max_too_small_is_config_error() {
        let (code, out, err) =
            invoke(&["neumann", "--sigma", "0.9", "--l-max", "2", "--count", "12"]);
        assert_eq!(code, EXIT_BAD_CONFIG);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
    }

    #[test]
    fn output_file() {
        let dir = std::env::temp_dir().join(format!("ballplate-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("spec.csv");
        let p = path.to_str().unwrap();
        let (code, out, _) = invoke(&["dirichlet", "--count", "2", "--output", p]);
        assert_eq!(code, EXIT_OK);
        assert!(out.is_empty());
        let (_, direct, _) = invoke(&["dirichlet", "--count", "2"]);
        assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
