use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use convex_approx_cli::body_json::load_body;
use convex_approx_cli::commands::{self, Settings};
use convex_approx_cli::experiments::{run_experiment, suites, ExperimentConfig};
use convex_approx_cli::report::{emit_report, Format};

/// Convex body approximation toolkit: ellipsoids, nets, polyhedral cone
/// gadgets, polynomial norms, SDP relaxations and soft approximations.
///
/// Bodies are JSON, given inline or as a file path, e.g. '{"zoo":"cube","d":3}'
/// or '{"type":"vrep","points":[[1,0],[0,1],[-1,-1]]}'.
#[derive(Parser, Debug)]
#[command(name = "convex-approx", version)]
struct Cli {
    /// Base seed; instance seeds are derived from (seed, instance index).
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Numerical tolerance for certificates and iterative solvers.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Feasibility tolerance for LP-based membership tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    feastol: f64,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format for `experiment run`.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    /// Suite parameter KEY=VALUE (repeatable); lists as 2..6 or 0.5,0.25.
    #[arg(long = "param", global = true, value_name = "KEY=VALUE", value_parser = parse_kv)]
    params: Vec<(String, String)>,
    /// Record zero runtimes so that identical configs give identical bytes.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_kv(s: &str) -> std::result::Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got \"{s}\""))?;
    if k.is_empty() {
        return Err("empty parameter name".into());
    }
    Ok((k.to_string(), v.to_string()))
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Inspect a body.
    Body {
        #[command(subcommand)]
        cmd: BodyCmd,
    },
    /// Build an approximation.
    Approx {
        #[command(subcommand)]
        cmd: ApproxCmd,
    },
    /// Certify X ⊂ B ⊂ αX about the common center.
    Certify {
        #[arg(long)]
        inner: String,
        #[arg(long)]
        outer: String,
        /// Sampled directions used when no exact certificate is available.
        #[arg(long, default_value_t = 512)]
        dirs: usize,
    },
    /// Experiment suites.
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
}

#[derive(Subcommand, Debug)]
enum BodyCmd {
    /// Print dimension, representation, symmetry and interior status.
    Describe {
        #[arg(long)]
        body: String,
    },
}

#[derive(Subcommand, Debug)]
enum ApproxCmd {
    /// Inscribed (John) or enclosing (Löwner) ellipsoid.
    Ellipsoid {
        #[arg(long)]
        body: String,
        #[arg(long)]
        loewner: bool,
    },
    /// Greedy ε-net of a symmetric body.
    Net {
        #[arg(long)]
        body: String,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 4000)]
        candidates: usize,
    },
    /// Polyhedral approximation of the Euclidean ball.
    Bn {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 6)]
        m: usize,
    },
    /// Tensor-lift polynomial norm of a symmetric polytope.
    Tensor {
        #[arg(long)]
        body: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        dirs: usize,
    },
    /// Power-sum norm for the cube.
    Power {
        #[arg(long, default_value_t = 4)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Moment norm of the exterior-angle measure on the polar vertices.
    Moment {
        #[arg(long)]
        body: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long, default_value_t = 2000)]
        dirs: usize,
    },
    /// Soft approximation of a functional on the cube.
    Soft {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Functional coefficients, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        ell: Vec<f64>,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 200)]
        mu: usize,
    },
    /// Sampled ratio of the PSD relaxation of CUT_n.
    Sdp {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ExperimentCmd {
    /// Run a suite and emit its report; exits with status 2 on failed rows.
    Run { name: String },
    /// List suites with their parameters and defaults.
    List,
}

fn write_out(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn run(cli: Cli) -> Result<ExitCode> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        bail!("--tol must lie in (0, 1), got {}", cli.tol);
    }
    if !(cli.feastol > 0.0 && cli.feastol < 1.0) {
        bail!("--feastol must lie in (0, 1), got {}", cli.feastol);
    }
    let s = Settings { seed: cli.seed, tol: cli.tol, feastol: cli.feastol };
    let uses_params = matches!(cli.cmd, Cmd::Experiment { cmd: ExperimentCmd::Run { .. } });
    if !uses_params && !cli.params.is_empty() {
        bail!("--param applies to `experiment run` only");
    }
    let doc = match cli.cmd {
        Cmd::Body { cmd: BodyCmd::Describe { body } } => commands::describe(&load_body(&body)?)?,
        Cmd::Approx { cmd } => match cmd {
            ApproxCmd::Ellipsoid { body, loewner } => commands::approx_ellipsoid(&load_body(&body)?, loewner, s)?,
            ApproxCmd::Net { body, eps, candidates } => commands::approx_net(&load_body(&body)?, eps, candidates, s)?,
            ApproxCmd::Bn { d, m } => commands::approx_bn(d, m)?,
            ApproxCmd::Tensor { body, k, dirs } => commands::approx_tensor(&load_body(&body)?, k, dirs, s)?,
            ApproxCmd::Power { d, k } => commands::approx_power(d, k)?,
            ApproxCmd::Moment { body, k, samples, dirs } => {
                commands::approx_moment(&load_body(&body)?, k, samples, dirs, s)?
            }
            ApproxCmd::Soft { d, k, ell, eps, mu } => {
                let ell = if ell.is_empty() { vec![eps / d as f64; d] } else { ell };
                commands::approx_soft(d, k, &ell, eps, mu, s)?
            }
            ApproxCmd::Sdp { n, samples } => commands::approx_sdp(n, samples, s)?,
        },
        Cmd::Certify { inner, outer, dirs } => commands::certify(&load_body(&inner)?, &load_body(&outer)?, dirs, s)?,
        Cmd::Experiment { cmd: ExperimentCmd::List } => {
            let mut text = String::new();
            for suite in suites() {
                let params: Vec<String> = suite.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                text += &format!("{:<16}{}\n{:<16}params: {}\n", suite.name, suite.summary, "", params.join(" "));
            }
            write_out(&cli.out, &text)?;
            return Ok(ExitCode::SUCCESS);
        }
        Cmd::Experiment { cmd: ExperimentCmd::Run { name } } => {
            let mut cfg = ExperimentConfig::new(&name);
            for (k, v) in cli.params {
                if cfg.params.insert(k.clone(), v).is_some() {
                    bail!("parameter `{k}` given twice");
                }
            }
            cfg.seed = cli.seed;
            cfg.tol = cli.tol;
            cfg.feastol = cli.feastol;
            cfg.timing = !cli.no_timing;
            cfg.output_path = cli.out.clone();
            let report = run_experiment(&cfg)?;
            write_out(&cfg.output_path, &emit_report(&report, cli.format)?)?;
            let failed: Vec<_> = report.failures().collect();
            if failed.is_empty() {
                return Ok(ExitCode::SUCCESS);
            }
            for r in &failed {
                eprintln!(
                    "FAILED {} [{}] {}: value {} vs bound {}",
                    r.experiment,
                    r.instance,
                    r.metric,
                    r.value,
                    r.bound.map_or("-".to_string(), |b| b.to_string())
                );
            }
            return Ok(ExitCode::from(2));
        }
    };
    write_out(&cli.out, &pretty(&doc)?)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
