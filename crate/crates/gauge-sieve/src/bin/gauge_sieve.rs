//! Command-line front end: parses instance files, dispatches solvers and
//! oracles, and emits reproducible JSON reports.
//!
//! Exit codes: 0 solver success, 1 input error, 2 EMPTY, 3 budget
//! exhaustion, 4 a violated solver invariant or a failed --verify check.
//! Reports are byte-identical across runs with the same inputs and seed;
//! --timings deliberately breaks that by attaching wall-clock data.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_traits::One;

use gauge_sieve::cvp::{approx_cvp, exact_cvp};
use gauge_sieve::error::{Error, Result};
use gauge_sieve::gen::{generate, GenKind, GenOptions};
use gauge_sieve::geometry::{barycenter_approx, estimate_gamma};
use gauge_sieve::instance::{oracle_block, Instance, InstanceFile, OracleJson, SolveReport};
use gauge_sieve::ip::{approx_ip, approx_opt, blowup_membership, IpResult, IpStatus, OptResult, OptStatus};
use gauge_sieve::lattice::Subspace;
use gauge_sieve::oracle::{cvp_brute, ip_brute, ip_opt_brute, sap_brute, svp_brute};
use gauge_sieve::rational::{format_rat, rat_from_f64, rat_int, rat_to_f64, Rat};
use gauge_sieve::sampling::SampleMethod;
use gauge_sieve::sieve::{approx_sap, exact_sap};
use gauge_sieve::SolverConfig;

#[derive(Parser)]
#[command(
    name = "gauge-sieve",
    version,
    about = "Lattice solvers under polytope gauge semi-norms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closest lattice vector to the instance target.
    Cvp(SolveArgs),
    /// Shortest lattice vector outside the instance subspace.
    Sap(SolveArgs),
    /// Shortest nonzero lattice vector.
    Svp(SolveArgs),
    /// Lattice point in the body or its blowup, or EMPTY.
    IpFeasible(SolveArgs),
    /// Maximize the instance objective over lattice points in the body.
    IpOptimize(SolveArgs),
    /// Monte Carlo symmetry measure of the body about its interior point.
    Gamma(SolveArgs),
    /// Sample-average barycenter of the body.
    Barycenter(SolveArgs),
    /// Emit a generated instance file on standard output.
    Gen(GenArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cvp(_) => "cvp",
            Command::Sap(_) => "sap",
            Command::Svp(_) => "svp",
            Command::IpFeasible(_) => "ip-feasible",
            Command::IpOptimize(_) => "ip-optimize",
            Command::Gamma(_) => "gamma",
            Command::Barycenter(_) => "barycenter",
            Command::Gen(_) => "gen",
        }
    }
}

#[derive(Args, Debug, Clone)]
struct SolveArgs {
    /// Instance file path.
    #[arg(required_unless_present = "batch")]
    instance: Option<PathBuf>,
    /// Run every .json instance in this directory as a child process.
    #[arg(long, value_name = "DIR", conflicts_with = "instance")]
    batch: Option<PathBuf>,
    /// Approximation tolerance; overrides the instance parameters.
    #[arg(long)]
    eps: Option<f64>,
    /// Objective slack for ip-optimize; overrides the instance objective.
    #[arg(long)]
    delta: Option<f64>,
    /// RNG seed; overrides the instance parameters.
    #[arg(long)]
    seed: Option<u64>,
    /// Scale on the theoretical sieve budget.
    #[arg(long)]
    budget_multiplier: Option<f64>,
    /// Run CVP or SAP in exact mode with this ratio bound.
    #[arg(long)]
    exact_t: Option<f64>,
    /// Cross-check against the exact oracle when the dimension allows.
    #[arg(long)]
    verify: bool,
    /// Uniform sampling backend.
    #[arg(long, value_enum)]
    sampler: Option<SampleMethod>,
    /// Dimension cap for oracle enumeration.
    #[arg(long)]
    max_n_oracle: Option<usize>,
    /// Attach wall-clock timing to the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// One of: random-cvp, planted-ip, empty-ip.
    kind: String,
    /// Ambient dimension.
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Tolerance recorded in the instance parameters.
    #[arg(long)]
    eps: Option<f64>,
    /// Place the CVP target near a lattice point (enables exact mode).
    #[arg(long)]
    plant: bool,
    /// Attach a random integer objective with delta = 1/10.
    #[arg(long)]
    objective: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Input(_)
        | Error::Geometry(_)
        | Error::Dimension { .. }
        | Error::CapExceeded { .. }
        | Error::EnumerationTooLarge { .. } => 1,
        Error::BudgetExhausted(_) | Error::RejectionBudget { .. } | Error::IterationCap(_) => 3,
        Error::PairInvariant { .. } | Error::Internal(_) => 4,
    }
}

fn dispatch(cli: Cli) -> Result<u8> {
    let name = cli.command.name();
    match cli.command {
        Command::Gen(args) => run_gen(&args),
        Command::Cvp(args)
        | Command::Sap(args)
        | Command::Svp(args)
        | Command::IpFeasible(args)
        | Command::IpOptimize(args)
        | Command::Gamma(args)
        | Command::Barycenter(args) => {
            if args.batch.is_some() {
                run_batch(name, &args)
            } else {
                run_single(name, &args)
            }
        }
    }
}

fn run_gen(args: &GenArgs) -> Result<u8> {
    let kind: GenKind = args.kind.parse()?;
    let opts = GenOptions {
        eps: args.eps,
        plant: args.plant,
        objective: args.objective,
        ..GenOptions::default()
    };
    let instance = generate(kind, args.n, args.seed, &opts)?;
    print!("{}", instance.encode().to_json());
    Ok(0)
}

/// Defaults, then instance parameters, then flags, in increasing priority.
fn effective_config(inst: &Instance, args: &SolveArgs) -> SolverConfig {
    let mut cfg = SolverConfig::default();
    if let Some(s) = inst.params.seed {
        cfg.seed = s;
    }
    if let Some(b) = inst.params.budget_multiplier {
        cfg.budget_multiplier = b;
    }
    if let Some(g) = inst.params.gamma_override {
        cfg.gamma_override = Some(g);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(b) = args.budget_multiplier {
        cfg.budget_multiplier = b;
    }
    if let Some(s) = args.sampler {
        cfg.sampler = s;
    }
    if let Some(n) = args.max_n_oracle {
        cfg.oracle_cap = n;
    }
    cfg
}

fn effective_eps(inst: &Instance, args: &SolveArgs, default: f64) -> f64 {
    args.eps.or(inst.params.eps).unwrap_or(default)
}

fn effective_exact_t(inst: &Instance, args: &SolveArgs) -> Option<f64> {
    args.exact_t.or(inst.params.exact_t)
}

/// Multiplicative bound on solver/oracle excess: 1 in exact mode, 1 + eps
/// otherwise.
fn excess_bound(eps: f64, exact: bool) -> Result<Rat> {
    if exact {
        Ok(Rat::one())
    } else {
        Ok(Rat::one() + rat_from_f64(eps)?)
    }
}

fn run_single(kind: &str, args: &SolveArgs) -> Result<u8> {
    let path = args
        .instance
        .as_ref()
        .ok_or_else(|| Error::Input("an instance path is required".into()))?;
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let inst = InstanceFile::from_json(&text)?.decode()?;
    let cfg = effective_config(&inst, args);
    let started = Instant::now();
    let (mut report, mut code) = solve(kind, &inst, args, &cfg)?;
    if args.timings {
        report.timing_ms = Some(started.elapsed().as_millis() as u64);
    }
    if let Some(block) = &report.oracle {
        if !block.ok {
            code = 4;
        }
    }
    print!("{}", report.to_json());
    Ok(code)
}

fn solve(kind: &str, inst: &Instance, args: &SolveArgs, cfg: &SolverConfig) -> Result<(SolveReport, u8)> {
    let oracle_fits = inst.basis.dim() <= cfg.oracle_cap;
    let want_oracle = args.verify && oracle_fits;
    match kind {
        "cvp" => {
            let target = inst
                .target
                .as_ref()
                .ok_or_else(|| Error::Input("cvp needs a target in the instance".into()))?;
            // Distance is measured in the gauge of the body about its
            // stored interior point.
            let ball = inst.body.centered();
            let eps = effective_eps(inst, args, 0.25);
            let exact_t = effective_exact_t(inst, args);
            let result = match exact_t {
                Some(t) => exact_cvp(&ball, &inst.basis, target, t, cfg)?,
                None => approx_cvp(&ball, &inst.basis, target, eps, cfg)?,
            };
            let mut report = SolveReport::from_cvp(&result, cfg);
            if want_oracle {
                let brute = cvp_brute(&ball, &inst.basis, target, cfg.oracle_cap)?;
                let bound = excess_bound(result.eps_used, exact_t.is_some())?;
                report.oracle = Some(oracle_block(
                    &result.witness.distance,
                    &brute.value,
                    &bound,
                    "distance within the oracle window",
                ));
            }
            Ok((report, 0))
        }
        "sap" | "svp" => {
            let m = match kind {
                "svp" => Subspace::zero(inst.basis.dim())?,
                _ => inst
                    .subspace
                    .clone()
                    .ok_or_else(|| Error::Input("sap needs a subspace in the instance".into()))?,
            };
            let ball = inst.body.centered();
            let eps = effective_eps(inst, args, 0.5);
            let exact_t = effective_exact_t(inst, args);
            let result = match exact_t {
                Some(t) => exact_sap(&ball, &inst.basis, &m, t, cfg)?,
                None => approx_sap(&ball, &inst.basis, &m, eps, cfg)?,
            };
            let mut report = SolveReport::from_sap(kind, &result, cfg);
            if want_oracle {
                let brute = match kind {
                    "svp" => svp_brute(&ball, &inst.basis, cfg.oracle_cap)?,
                    _ => sap_brute(&ball, &inst.basis, &m, cfg.oracle_cap)?,
                };
                let bound = excess_bound(result.eps, exact_t.is_some())?;
                report.oracle = Some(oracle_block(
                    &result.witness.gauge,
                    &brute.value,
                    &bound,
                    "gauge within the oracle window",
                ));
            }
            Ok((report, 0))
        }
        "ip-feasible" => {
            let eps = effective_eps(inst, args, 0.5);
            let result = approx_ip(&inst.body, &inst.basis, eps, cfg)?;
            let mut report = SolveReport::from_ip(&result, eps, cfg);
            let code = match result.status {
                IpStatus::Empty => 2,
                _ => 0,
            };
            if want_oracle {
                report.oracle = Some(verify_ip(inst, &result, eps, cfg.oracle_cap)?);
            }
            Ok((report, code))
        }
        "ip-optimize" => {
            let (v, file_delta) = inst
                .objective
                .as_ref()
                .ok_or_else(|| Error::Input("ip-optimize needs an objective in the instance".into()))?;
            let eps = effective_eps(inst, args, 0.5);
            let delta = args.delta.unwrap_or_else(|| rat_to_f64(file_delta));
            let result = approx_opt(&inst.body, &inst.basis, v, eps, delta, cfg)?;
            let delta_rat = rat_from_f64(delta)?;
            let mut report = SolveReport::from_opt(&result, eps, &delta_rat, cfg);
            let code = match result.status {
                OptStatus::Solved => 0,
                OptStatus::Empty => 2,
            };
            if want_oracle {
                report.oracle = Some(verify_opt(inst, &result, eps, &delta_rat, cfg.oracle_cap)?);
            }
            Ok((report, code))
        }
        "gamma" => {
            let value = estimate_gamma(&inst.body.centered(), cfg.gamma_samples, cfg.seed)?;
            Ok((SolveReport::scalar("gamma", value, cfg.seed, cfg), 0))
        }
        "barycenter" => {
            let eps = effective_eps(inst, args, 1.0 / 3.0);
            let point = barycenter_approx(&inst.body, eps, cfg)?;
            let mut report = SolveReport::scalar("barycenter", 0.0, cfg.seed, cfg);
            report.value = None;
            report.witness = Some(point.iter().map(format_rat).collect());
            Ok((report, 0))
        }
        other => Err(Error::Input(format!("unknown subcommand {other:?}"))),
    }
}

/// FOUND answers must be lattice points inside the blowup; an EMPTY answer
/// is checked against brute-force feasibility of the body itself.
fn verify_ip(inst: &Instance, result: &IpResult, eps: f64, cap: usize) -> Result<OracleJson> {
    let brute = ip_brute(&inst.body, &inst.basis, cap)?;
    let feasible = if brute.is_some() { rat_int(1) } else { rat_int(0) };
    let eps_rat = rat_from_f64(eps)?;
    let (ok, checked) = match (&result.point, &brute) {
        (Some(point), _) => {
            let in_lattice = inst.basis.contains(point);
            let in_blowup = blowup_membership(&inst.body, &eps_rat, point)?;
            (
                in_lattice && in_blowup,
                "returned point is a lattice point inside the blowup".to_string(),
            )
        }
        (None, Some(sol)) => (
            false,
            format!(
                "EMPTY, but enumeration found the lattice point ({}) in the body",
                sol.point
                    .iter()
                    .map(format_rat)
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        ),
        (None, None) => (
            true,
            "EMPTY confirmed: the body holds no lattice point".to_string(),
        ),
    };
    Ok(OracleJson {
        value: format_rat(&feasible),
        value_f64: rat_to_f64(&feasible),
        ratio: None,
        ok,
        checked,
    })
}

/// Solved answers must be lattice points in the blowup with value within
/// delta of the exact optimum; EMPTY is checked like feasibility.
fn verify_opt(
    inst: &Instance,
    result: &OptResult,
    eps: f64,
    delta: &Rat,
    cap: usize,
) -> Result<OracleJson> {
    let (v, _) = inst.objective.as_ref().expect("objective checked by caller");
    let brute = ip_opt_brute(&inst.body, &inst.basis, v, cap)?;
    let eps_rat = rat_from_f64(eps)?;
    match (&result.point, &brute) {
        (Some(point), Some(sol)) => {
            let value = result.value.clone().expect("solved results carry a value");
            let in_lattice = inst.basis.contains(point);
            let in_blowup = blowup_membership(&inst.body, &eps_rat, point)?;
            let close = value >= &sol.value - delta;
            Ok(OracleJson {
                value: format_rat(&sol.value),
                value_f64: rat_to_f64(&sol.value),
                ratio: None,
                ok: in_lattice && in_blowup && close,
                checked: "lattice point in the blowup within delta of the exact optimum"
                    .to_string(),
            })
        }
        (Some(_), None) => Ok(OracleJson {
            value: "0".to_string(),
            value_f64: 0.0,
            ratio: None,
            ok: false,
            checked: "solver returned a point but the body holds no lattice point".to_string(),
        }),
        (None, Some(sol)) => Ok(OracleJson {
            value: format_rat(&sol.value),
            value_f64: rat_to_f64(&sol.value),
            ratio: None,
            ok: false,
            checked: "EMPTY, but enumeration found a lattice point in the body".to_string(),
        }),
        (None, None) => Ok(OracleJson {
            value: "0".to_string(),
            value_f64: 0.0,
            ratio: None,
            ok: true,
            checked: "EMPTY confirmed: the body holds no lattice point".to_string(),
        }),
    }
}

/// Runs every instance in the directory as a child process with a seed
/// derived from the master seed, then prints a summary table.
fn run_batch(kind: &str, args: &SolveArgs) -> Result<u8> {
    let dir = args.batch.as_ref().expect("batch checked by caller");
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Input(format!(
            "{} holds no .json instances",
            dir.display()
        )));
    }
    let master = args.seed.unwrap_or(0);
    let exe = std::env::current_exe()
        .map_err(|e| Error::Input(format!("cannot locate the solver binary: {e}")))?;

    let mut children = Vec::with_capacity(files.len());
    for (i, file) in files.iter().enumerate() {
        let mut cmd = std::process::Command::new(&exe);
        cmd.arg(kind)
            .arg(file)
            .arg("--seed")
            .arg(master.wrapping_add(i as u64).to_string())
            .stdout(std::process::Stdio::piped());
        forward_flags(&mut cmd, args);
        let child = cmd
            .spawn()
            .map_err(|e| Error::Input(format!("cannot spawn solver process: {e}")))?;
        children.push((file.clone(), child));
    }

    let mut worst = 0u8;
    println!("{:<40} {:>16} {:>6}  value", "instance", "status", "exit");
    for (file, child) in children {
        let out = child
            .wait_with_output()
            .map_err(|e| Error::Input(format!("solver process failed: {e}")))?;
        let code = out.status.code().unwrap_or(4) as u8;
        let (status, value) = match serde_json::from_slice::<SolveReport>(&out.stdout) {
            Ok(report) => (
                report.status,
                report
                    .value
                    .map(|v| v.to_string())
                    .or(report.value_exact)
                    .unwrap_or_default(),
            ),
            Err(_) => ("error".to_string(), String::new()),
        };
        let name = file
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| file.display().to_string());
        println!("{name:<40} {status:>16} {code:>6}  {value}");
        worst = match (worst, code) {
            (1, _) | (_, 1) => 1,
            (4, _) | (_, 4) => 4,
            (3, _) | (_, 3) => 3,
            (w, 2) => w,
            (w, c) => w.max(c),
        };
    }
    Ok(worst)
}

fn forward_flags(cmd: &mut std::process::Command, args: &SolveArgs) {
    if let Some(eps) = args.eps {
        cmd.arg("--eps").arg(eps.to_string());
    }
    if let Some(delta) = args.delta {
        cmd.arg("--delta").arg(delta.to_string());
    }
    if let Some(b) = args.budget_multiplier {
        cmd.arg("--budget-multiplier").arg(b.to_string());
    }
    if let Some(t) = args.exact_t {
        cmd.arg("--exact-t").arg(t.to_string());
    }
    if args.verify {
        cmd.arg("--verify");
    }
    if let Some(s) = args.sampler {
        let name = match s {
            SampleMethod::Rejection => "rejection",
            SampleMethod::HitAndRun => "hitandrun",
        };
        cmd.arg("--sampler").arg(name);
    }
    if let Some(n) = args.max_n_oracle {
        cmd.arg("--max-n-oracle").arg(n.to_string());
    }
    if args.timings {
        cmd.arg("--timings");
    }
}
