//! Command-line front end for the massjump entropy pipeline.
//!
//! Subcommands: `solve`, `entropy`, `sweep`, `verify`. Parameters resolve
//! with precedence flags > environment (`MASSJUMP_*`) > config file > defaults.
//! Exit codes: 0 ok, 1 usage, 2 domain error, 3 accuracy error,
//! 4 verification failure.

mod config;
mod sweep;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use massjump::bounds::format_float;
use massjump::scattering::{flux_residual, solve_amplitudes};
use massjump::{build_report, Error, MediumParams, QuadSpec, Regime, WindowSpec};

use config::{sweep_config, FileConfig};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Accuracy(String),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Accuracy(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Domain(m)
            | CliError::Accuracy(m)
            | CliError::Verification(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        fn leaf(e: &Error) -> u8 {
            match e {
                Error::Stage { source, .. } => leaf(source),
                Error::Accuracy { .. } | Error::Resolution(_) => 3,
                Error::InvalidParams(_) => 1,
                _ => 2,
            }
        }
        let msg = e.to_string();
        match leaf(&e) {
            1 => CliError::Usage(msg),
            3 => CliError::Accuracy(msg),
            _ => CliError::Domain(msg),
        }
    }
}

#[derive(Parser)]
#[command(name = "massjump", version, about = "Dirac mass-jump scattering and entropic uncertainty reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the matching problem and print the scattering amplitudes.
    Solve(ParamArgs),
    /// Compute the full entropy report for one parameter point.
    Entropy(EntropyArgs),
    /// Run a parameter sweep from a config file.
    Sweep(SweepArgs),
    /// Run the built-in invariant suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ParamArgs {
    /// Left-lead mass.
    #[arg(long = "m-l", env = "MASSJUMP_M_L")]
    m_l: Option<f64>,
    /// Right-lead mass.
    #[arg(long = "m-r", env = "MASSJUMP_M_R")]
    m_r: Option<f64>,
    /// Fermi velocity (default 1).
    #[arg(long = "v-f", env = "MASSJUMP_V_F")]
    v_f: Option<f64>,
    /// Point-interaction strength (default 0).
    #[arg(long, env = "MASSJUMP_A", allow_hyphen_values = true)]
    a: Option<f64>,
    /// Incident energy.
    #[arg(long, env = "MASSJUMP_ENERGY")]
    energy: Option<f64>,
    /// Config file supplying `fixed.*` and `quad.*` defaults.
    #[arg(long, env = "MASSJUMP_CONFIG")]
    config: Option<PathBuf>,
    /// Absolute quadrature tolerance.
    #[arg(long, env = "MASSJUMP_ABS_TOL")]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, env = "MASSJUMP_REL_TOL")]
    rel_tol: Option<f64>,
}

impl ParamArgs {
    /// Applies precedence: flags (and env via clap) > config file > defaults.
    fn resolve(&self) -> Result<(MediumParams, QuadSpec), CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Usage(format!("config file {}: {e}", path.display()))
                })?;
                FileConfig::parse(&text)?
            }
            None => FileConfig::default(),
        };
        let pick = |flag: Option<f64>, key: &str| -> Result<Option<f64>, CliError> {
            match flag {
                Some(v) => Ok(Some(v)),
                None => file.get_f64(key),
            }
        };
        let require = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Usage(format!("missing required parameter `{name}`")))
        };
        let m_l = require(pick(self.m_l, "fixed.m_l")?, "--m-l")?;
        let m_r = require(pick(self.m_r, "fixed.m_r")?, "--m-r")?;
        let v_f = pick(self.v_f, "fixed.v_F")?.unwrap_or(1.0);
        let a = pick(self.a, "fixed.a")?.unwrap_or(0.0);
        let energy = require(pick(self.energy, "fixed.E")?, "--energy")?;
        let params = MediumParams::new(m_l, m_r, v_f, a, energy)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let mut quad = QuadSpec::default();
        if let Some(t) = pick(self.abs_tol, "quad.abs_tol")? {
            quad.abs_tol = t;
        }
        if let Some(t) = pick(self.rel_tol, "quad.rel_tol")? {
            quad.rel_tol = t;
        }
        Ok((params, quad))
    }
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    params: ParamArgs,
    /// Comma-separated window sizes N (half-length N pi / k_l per side).
    #[arg(long, default_value = "4,8")]
    windows: String,
    /// Samples per period for the discrete-transform oracle.
    #[arg(long, default_value_t = 64)]
    samples_per_period: u32,
    /// Emit the report as JSON.
    #[arg(long, conflicts_with = "csv")]
    json: bool,
    /// Emit the report as CSV rows.
    #[arg(long)]
    csv: bool,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep config file.
    #[arg(long, env = "MASSJUMP_CONFIG")]
    config: PathBuf,
    /// Override the CSV output path from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker pool size (default: all cores).
    #[arg(long, env = "MASSJUMP_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run a single group (determinant, residual, parseval, gaussian,
    /// sandwich, sx_bound).
    #[arg(long)]
    group: Option<String>,
    /// Absolute quadrature tolerance (an absurd value forces accuracy failures).
    #[arg(long, env = "MASSJUMP_ABS_TOL")]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long, env = "MASSJUMP_REL_TOL")]
    rel_tol: Option<f64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Entropy(args) => cmd_entropy(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Verify(args) => cmd_verify(&args),
    }
}

fn cmd_solve(args: &ParamArgs) -> Result<(), CliError> {
    let (params, _) = args.resolve()?;
    let sol = solve_amplitudes(&params)?;
    println!(
        "params: m_l={} m_r={} v_F={} a={} E={}",
        params.m_l, params.m_r, params.v_f, params.a, params.energy
    );
    println!("regime: {:?}", sol.regime);
    if sol.regime == Regime::RightEvanescent {
        println!(
            "notice: energy below the right-lead gap; transmitted wave decays with rate {}",
            sol.k_r.im
        );
    }
    println!("r1: |r| = {}, arg = {}", sol.r1.norm(), sol.r1.arg());
    println!("t1: |t| = {}, arg = {}", sol.t1.norm(), sol.t1.arg());
    println!("k_l = {}", sol.k_l);
    println!("k_r = {} + {}i", sol.k_r.re, sol.k_r.im);
    println!("alpha_l = {}", sol.alpha_l);
    println!("alpha_r = {} + {}i", sol.alpha_r.re, sol.alpha_r.im);
    println!("matching residual = {:.3e}", sol.residual);
    println!("flux residual = {:.3e}", flux_residual(&sol));
    Ok(())
}

fn cmd_entropy(args: &EntropyArgs) -> Result<(), CliError> {
    let (params, quad) = args.params.resolve()?;
    let ns = config::parse_windows(&args.windows, "--windows")?;
    let windows: Result<Vec<WindowSpec>, _> = ns
        .iter()
        .map(|&n| WindowSpec::new(n, args.samples_per_period))
        .collect();
    let windows = windows.map_err(|e| CliError::Usage(e.to_string()))?;
    let report = build_report(&params, &windows, &quad)?;

    let text = if args.json {
        serde_json::to_string_pretty(&report)
            .map_err(|e| CliError::Accuracy(format!("json serialization: {e}")))?
            + "\n"
    } else if args.csv {
        let mut t = sweep::csv_header();
        for row in report.csv_rows() {
            t.push_str(&row.join(","));
            t.push_str(",ok\n");
        }
        t
    } else {
        let mut t = String::new();
        t.push_str(&format!(
            "params: m_l={} m_r={} v_F={} a={} E={}\n",
            params.m_l, params.m_r, params.v_f, params.a, params.energy
        ));
        t.push_str(&format!("S_x = {}\n", format_float(report.s_x)));
        t.push_str(&format!("paper_bound = {}\n", format_float(report.paper_bound)));
        t.push_str(&format!("bbm_constant = {}\n", format_float(report.bbm_constant)));
        for ((n, s_p), (_, sum)) in report.s_p_by_window.iter().zip(&report.sum_by_window) {
            t.push_str(&format!(
                "N={n}: S_p = {}, S_x + S_p = {}\n",
                format_float(*s_p),
                format_float(*sum)
            ));
        }
        t.push_str(&format!(
            "flags: positivity={} sx_bound={} sum_bound={:?} bbm={:?} flux_residual={:.3e}\n",
            report.flags.positivity_ok,
            report.flags.sx_bound_ok,
            report.flags.sum_bound_ok_per_window,
            report.flags.bbm_ok_per_window,
            report.flags.flux_residual
        ));
        t
    };
    emit(&text, args.out.as_deref())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::Usage(format!("config file {}: {e}", args.config.display())))?;
    let file = FileConfig::parse(&text)?;
    let mut cfg = sweep_config(&file)?;
    if let Some(out) = &args.out {
        cfg.csv_out = Some(out.clone());
    }
    if args.jobs.is_some() {
        cfg.jobs = args.jobs;
    }
    let outcome = sweep::run_sweep(&cfg)?;

    let csv = sweep::csv_header() + &sweep::csv_body(&outcome);
    match &cfg.csv_out {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| CliError::Usage(format!("output path {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    if let Some(path) = &cfg.json_out {
        fs::write(path, sweep::json_body(&outcome)?)
            .map_err(|e| CliError::Usage(format!("output path {}: {e}", path.display())))?;
    }
    println!("{}", sweep::summary(&outcome));
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let mut quad = QuadSpec::default();
    if let Some(t) = args.abs_tol {
        quad.abs_tol = t;
    }
    if let Some(t) = args.rel_tol {
        quad.rel_tol = t;
    }
    let groups: Vec<&str> = match &args.group {
        Some(g) => {
            let g = g.as_str();
            if !verify::GROUP_NAMES.contains(&g) {
                return Err(CliError::Usage(format!(
                    "unknown group `{g}`; available: {}",
                    verify::GROUP_NAMES.join(", ")
                )));
            }
            verify::GROUP_NAMES.iter().copied().filter(|&n| n == g).collect()
        }
        None => verify::GROUP_NAMES.to_vec(),
    };
    let mut all_ok = true;
    for name in groups {
        let result = verify::run_group(name, &quad);
        println!(
            "{}: {} — {}",
            result.name,
            if result.passed { "PASS" } else { "FAIL" },
            result.detail
        );
        all_ok &= result.passed;
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Verification("one or more verification groups failed".into()))
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("output path {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
