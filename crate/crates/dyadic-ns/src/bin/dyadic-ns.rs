//! Command-line front end: verification suites, a trajectory solver and a
//! norm calculator over the binary field/trajectory formats.
//!
//! Exit codes: 0 success / all assertions pass, 1 an assertion or the solver
//! failed, 2 usage or configuration error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use dyadic_ns::error::Error;
use dyadic_ns::harness::{init_thread_pool, run_all, run_suite, HarnessConfig, SuiteReport};
use dyadic_ns::io;
use dyadic_ns::norms;
use dyadic_ns::random::random_band_field;
use dyadic_ns::solver::{picard_solve, taylor_green};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "dyadic-ns",
    version,
    about = "Littlewood-Paley analysis, Besov norms and mild Navier-Stokes solutions on the torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite (or `all`; `list` prints the registry)
    Suite {
        name: String,
        #[command(flatten)]
        common: CommonArgs,
        /// write the report(s) to this path instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// run independent suites concurrently (only with `all`)
        #[arg(long)]
        concurrent: bool,
    },
    /// Solve the integral equation from seeded or Taylor-Green data and
    /// write the trajectory file
    Solve {
        #[arg(long, value_enum)]
        init: InitKind,
        /// spectral decay exponent of random data
        #[arg(long, default_value_t = 2.0)]
        gamma: f64,
        /// amplitude applied to the initial data
        #[arg(long, default_value_t = 0.05)]
        amp: f64,
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a norm of a stored field or trajectory, printing JSON
    Norm {
        #[arg(long, value_enum)]
        kind: NormKind,
        /// input field (DNSF) or trajectory (DNST) file
        #[arg(long = "in")]
        input: PathBuf,
        /// integrability exponent (lebesgue, besov, heatchar, cheminlerner, uloc)
        #[arg(long)]
        q: Option<f64>,
        /// regularity index (sobolev, besov, heatchar, cheminlerner)
        #[arg(long)]
        s: Option<f64>,
        /// time exponent (cheminlerner) or ball exponent (uloc)
        #[arg(long)]
        p: Option<f64>,
        /// weight exponent (weighted)
        #[arg(long)]
        mu: Option<f64>,
        /// ball radius (uloc)
        #[arg(long)]
        radius: Option<f64>,
        /// sup window for the heat characterization
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// geometric theta samples for the heat characterization
        #[arg(long, default_value_t = 64)]
        thetas: usize,
    },
    /// Dump the cutoff profile table as CSV (rho, phi, psi) for audit
    CutoffCsv {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
}

#[derive(Args)]
struct CommonArgs {
    /// config file with `key = value` lines; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long = "T")]
    horizon: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

impl CommonArgs {
    fn build(&self) -> Result<HarnessConfig, Error> {
        let mut cfg = HarnessConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(v) = self.dim {
            cfg.dim = v;
        }
        if let Some(v) = self.grid {
            cfg.grid = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.r {
            cfg.r = v;
        }
        if let Some(v) = self.sigma {
            cfg.sigma = v;
        }
        if let Some(v) = self.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        Ok(cfg)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitKind {
    TaylorGreen,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormKind {
    Lebesgue,
    Sobolev,
    Besov,
    Heatchar,
    Cheminlerner,
    Weighted,
    Uloc,
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::UnknownSuite(_)
                | Error::Config(_)
                | Error::InvalidParameter(_)
                | Error::InvalidGrid(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// JSON has no infinity literal; render unbounded exponents as "inf".
fn jnum(v: f64) -> serde_json::Value {
    if v.is_infinite() {
        serde_json::json!("inf")
    } else {
        serde_json::json!(v)
    }
}

fn emit(reports: &[SuiteReport], format: Format, out: Option<&PathBuf>) -> Result<(), Error> {
    let body = match format {
        Format::Json => {
            if reports.len() == 1 {
                reports[0].to_json()
            } else {
                serde_json::to_string_pretty(reports).expect("reports serialize")
            }
        }
        Format::Csv => reports.iter().map(|r| r.to_csv()).collect::<String>(),
    };
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => println!("{body}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Suite {
            name,
            common,
            out,
            format,
            concurrent,
        } => {
            if name == "list" {
                for n in dyadic_ns::harness::SUITE_NAMES {
                    println!("{n}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let cfg = common.build()?;
            let reports = if name == "all" {
                run_all(&cfg, concurrent)?
            } else {
                vec![run_suite(&name, &cfg)?]
            };
            emit(&reports, format, out.as_ref())?;
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                eprintln!("{}: {} ({:.2}s)", r.suite, status, r.wall_time_s);
            }
            if reports.iter().all(|r| r.passed()) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Solve {
            init,
            gamma,
            amp,
            common,
            out,
        } => {
            let cfg = common.build()?;
            let scfg = cfg.solver_config()?;
            let u0 = match init {
                InitKind::TaylorGreen => taylor_green(scfg.grid).scale(amp),
                InitKind::Random => {
                    random_band_field(cfg.seed, scfg.grid, cfg.dim, gamma, true).scale(amp)
                }
            };
            let (u, trace) = picard_solve(&u0, &scfg)?;
            io::save_series(&out, &u)?;
            println!(
                "{}",
                serde_json::json!({
                    "out": out.display().to_string(),
                    "iterations": trace.iterations,
                    "residual": trace.residual,
                    "increments": trace.increments,
                })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm {
            kind,
            input,
            q,
            s,
            p,
            mu,
            radius,
            delta,
            thetas,
        } => {
            let object = io::load_any(&input)?;
            let q_or = |d: f64| q.unwrap_or(d);
            let need = |v: Option<f64>, what: &str| {
                v.ok_or_else(|| Error::Config(format!("--{what} is required for this norm")))
            };
            let (name, params, value) = match (kind, object) {
                (NormKind::Lebesgue, io::StoredObject::Field(f)) => {
                    let q = q_or(2.0);
                    (
                        "lebesgue",
                        serde_json::json!({ "q": jnum(q) }),
                        norms::try_lebesgue_norm(&f, q)?,
                    )
                }
                (NormKind::Sobolev, io::StoredObject::Field(f)) => {
                    let s = need(s, "s")?;
                    (
                        "sobolev",
                        serde_json::json!({ "s": s }),
                        norms::sobolev_norm(&f, s),
                    )
                }
                (NormKind::Besov, io::StoredObject::Field(f)) => {
                    let s = need(s, "s")?;
                    let q = q_or(f64::INFINITY);
                    (
                        "besov",
                        serde_json::json!({ "s": s, "q": jnum(q) }),
                        norms::besov_norm(&f, s, q),
                    )
                }
                (NormKind::Heatchar, io::StoredObject::Field(f)) => {
                    let s = need(s, "s")?;
                    let q = q_or(f64::INFINITY);
                    (
                        "heatchar",
                        serde_json::json!({ "s": s, "q": jnum(q), "delta": delta, "thetas": thetas }),
                        norms::heat_char_norm(&f, s, q, delta, thetas)?,
                    )
                }
                (NormKind::Uloc, io::StoredObject::Field(f)) => {
                    let p = p.unwrap_or(2.0);
                    let radius = radius.unwrap_or(1.0);
                    (
                        "uloc",
                        serde_json::json!({ "p": p, "radius": radius }),
                        norms::uloc_norm(&f, p, radius),
                    )
                }
                (NormKind::Cheminlerner, io::StoredObject::Series(v)) => {
                    let s = need(s, "s")?;
                    let p = p.unwrap_or(f64::INFINITY);
                    let q = q_or(f64::INFINITY);
                    (
                        "cheminlerner",
                        serde_json::json!({ "p": jnum(p), "s": s, "q": jnum(q) }),
                        norms::chemin_lerner_norm(&v, p, s, q),
                    )
                }
                (NormKind::Weighted, io::StoredObject::Series(v)) => {
                    let mu = need(mu, "mu")?;
                    (
                        "weighted",
                        serde_json::json!({ "mu": mu }),
                        norms::weighted_sup_norm(&v, mu),
                    )
                }
                (_, io::StoredObject::Series(_)) => {
                    return Err(Error::Config(
                        "this norm kind expects a field file, got a trajectory".into(),
                    ));
                }
                (_, io::StoredObject::Field(_)) => {
                    return Err(Error::Config(
                        "this norm kind expects a trajectory file, got a field".into(),
                    ));
                }
            };
            println!(
                "{}",
                serde_json::json!({ "kind": name, "params": params, "value": value })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::CutoffCsv { out, samples } => {
            match out {
                Some(path) => {
                    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
                    dyadic_ns::cutoff::dump_csv(&mut file, samples)?;
                }
                None => {
                    let stdout = std::io::stdout();
                    dyadic_ns::cutoff::dump_csv(&mut stdout.lock(), samples)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
