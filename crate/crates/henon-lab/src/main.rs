//! Command-line front end: classification, scalar/system solves, scans,
//! threshold search, slope fits and the Pohozaev diagnostic. All summaries
//! are JSON on stdout with a provenance header; errors are structured JSON
//! on stderr. Set HSL_LOG for logging verbosity.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use henon_lab::asymptotics::{dominated_limit_check, fit_log_slope};
use henon_lab::error::HenonError;
use henon_lab::exponents::{
    classify_point, hyperbola_gap, theoretical_slopes, ProblemSpec, Side, ON_HYPERBOLA_TOL,
};
use henon_lab::grids::{load_function, save_function, DiskGrid, GridFunction, RadialGrid};
use henon_lab::scalar::{
    bump_upper_bound, find_alpha_star, minimize_disk, minimize_radial, scan_alpha, SolveOpts,
    DEFAULT_MULTISTART,
};
use henon_lab::system::{
    minimize_system_radial, pohozaev_residual, system_bump_upper, system_symmetry_certificate,
    SystemSpec,
};

#[derive(Parser)]
#[command(
    name = "henon-lab",
    version,
    about = "Ground states of Henon/Hardy weighted elliptic problems on the unit ball",
    after_help = "CSV columns: scan -> alpha,s_rad,s_full,ratio,iters_rad,iters_full; \
                  classify region -> p,q,gap,side. Env: HSL_LOG controls log verbosity."
)]
struct Cli {
    /// Worker threads for sweep commands (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, serde::Serialize)]
struct SolveFlags {
    /// Relative KKT residual target.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50_000)]
    max_iters: usize,
}

impl SolveFlags {
    fn opts(&self) -> SolveOpts {
        SolveOpts { tol: self.tol, max_iters: self.max_iters, seed: self.seed }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify an exponent tuple against the weighted critical hyperbola.
    Classify {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = ON_HYPERBOLA_TOL)]
        tol: f64,
        /// Also write a (p,q) region sweep CSV with the gap sign.
        #[arg(long)]
        region_csv: Option<PathBuf>,
    },
    /// Minimize the scalar quotient (radial, or full disk when N=2 and
    /// --grid-theta is given).
    SolveScalar {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Radial cell count.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Angular cell count; enables the full disk solve (N=2 only).
        #[arg(long)]
        grid_theta: Option<usize>,
        #[command(flatten)]
        solve: SolveFlags,
        /// Save the minimizer in the grid text format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimize the system quotient over radial functions and recover the
    /// second component.
    SolveSystem {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[command(flatten)]
        solve: SolveFlags,
        /// Prefix for saved components (<out>.u.grid, <out>.v.grid).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also run the bump-vs-radial symmetry certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Radial-vs-full level scan over alpha on the disk (N = 2).
    Scan {
        #[arg(long)]
        p: f64,
        /// start:step:stop or a comma-separated list.
        #[arg(long)]
        alphas: String,
        #[arg(long, default_value_t = 96)]
        grid: usize,
        #[arg(long, default_value_t = 96)]
        grid_theta: usize,
        #[command(flatten)]
        solve: SolveFlags,
        /// CSV output path (stdout JSON carries the summary either way).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest alpha at which the radial level exceeds the full level by
    /// the given relative margin (N = 2).
    AlphaStar {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        lo: f64,
        #[arg(long, default_value_t = 400.0)]
        hi: f64,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 96)]
        grid: usize,
        #[arg(long, default_value_t = 96)]
        grid_theta: usize,
        #[command(flatten)]
        solve: SolveFlags,
    },
    /// Fit log-log growth of the radial level and the bump upper bound in
    /// alpha, against the predicted exponents.
    Asymptotics {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        p: f64,
        /// Treat the tuple as a system (requires --q).
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 100.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 1000.0)]
        alpha_max: f64,
        #[arg(long, default_value_t = 6)]
        points: usize,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[command(flatten)]
        solve: SolveFlags,
        /// Comma-separated eps list for the dominated-limit check
        /// (system only).
        #[arg(long)]
        dominated_eps: Option<String>,
    },
    /// Pohozaev boundary identity residual for a system pair, solved fresh
    /// or loaded from files.
    Pohozaev {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        u: Option<PathBuf>,
        #[arg(long)]
        v: Option<PathBuf>,
        #[command(flatten)]
        solve: SolveFlags,
    },
}

fn error_code(e: &HenonError) -> &'static str {
    match e {
        HenonError::DimensionTooSmall { .. } => "dimension_too_small",
        HenonError::WeightOutOfRange { .. } => "weight_out_of_range",
        HenonError::WeightNotIntegrable { .. } => "weight_not_integrable",
        HenonError::GridTooCoarse { .. } => "grid_too_coarse",
        HenonError::ZeroDenominator => "zero_denominator",
        HenonError::SupercriticalExponent { .. } => "supercritical_exponent",
        HenonError::HypothesisViolation(_) => "hypothesis_violation",
        HenonError::NotBracketed { .. } => "not_bracketed",
        HenonError::NegativeLaplacianBeyondTol { .. } => "negative_laplacian",
        HenonError::NotASolution { .. } => "not_a_solution",
        HenonError::DegenerateExponent => "degenerate_exponent",
        HenonError::NonPositiveData { .. } => "non_positive_data",
        HenonError::InvalidSpec(_) => "invalid_spec",
        HenonError::Format(_) => "format",
        HenonError::Io(_) => "io",
    }
}

fn provenance(config: &Value) -> Value {
    let canon = serde_json::to_string(config).unwrap_or_default();
    let hash = hex(&Sha256::digest(canon.as_bytes()));
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "config_sha256": hash,
        "config": config,
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_alphas(s: &str) -> Result<Vec<f64>, HenonError> {
    let bad = |m: &str| HenonError::InvalidSpec(format!("bad alpha list '{s}': {m}"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:step:stop"));
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|t| t.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("non-numeric field"))?;
        let (start, step, stop) = (nums[0], nums[1], nums[2]);
        if !(step > 0.0) || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let mut out = Vec::new();
        let mut a = start;
        while a <= stop + 1e-9 * step {
            out.push(a);
            a += step;
        }
        Ok(out)
    } else {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad("non-numeric entry")))
            .collect()
    }
}

fn side_str(s: Side) -> &'static str {
    match s {
        Side::Below => "Below",
        Side::On => "On",
        Side::Above => "Above",
    }
}

fn run(cli: Cli) -> Result<Value, HenonError> {
    match cli.command {
        Command::Classify { n, p, q, alpha, beta, tol, region_csv } => {
            let spec = ProblemSpec::new(n, alpha, beta, p, q)?;
            let report = classify_point(&spec, tol);
            if let Some(path) = &region_csv {
                let mut csv = String::from("p,q,gap,side\n");
                let steps = 60;
                for i in 0..=steps {
                    for j in 0..=steps {
                        let pp = 1.05 + (8.0 - 1.05) * i as f64 / steps as f64;
                        let qq = 1.05 + (8.0 - 1.05) * j as f64 / steps as f64;
                        let s = ProblemSpec::new(n, alpha, beta, pp, qq)?;
                        let r = classify_point(&s, tol);
                        csv.push_str(&format!(
                            "{pp:.6},{qq:.6},{:.17e},{}\n",
                            r.gap,
                            side_str(r.side)
                        ));
                    }
                }
                std::fs::write(path, csv)?;
            }
            let config = json!({
                "command": "classify", "N": n, "p": p, "q": q,
                "alpha": alpha, "beta": beta, "tol": tol,
            });
            Ok(json!({
                "provenance": provenance(&config),
                "report": report,
            }))
        }
        Command::SolveScalar { n, p, alpha, grid, grid_theta, solve, out } => {
            let opts = solve.opts();
            let config = json!({
                "command": "solve-scalar", "N": n, "p": p, "alpha": alpha,
                "grid": grid, "grid_theta": grid_theta, "solve": solve,
            });
            if let Some(m_t) = grid_theta {
                if n != 2 {
                    return Err(HenonError::InvalidSpec(
                        "full (non-radial) solves need N = 2".into(),
                    ));
                }
                let dgrid = DiskGrid::new(grid, m_t)?;
                let gs = minimize_disk(p, alpha, &dgrid, &opts, &DEFAULT_MULTISTART)?;
                let variation = gs.minimizer.theta_variation();
                if let Some(path) = &out {
                    save_function(path, &GridFunction::Disk(gs.minimizer.clone()))?;
                }
                Ok(json!({
                    "provenance": provenance(&config),
                    "level": gs.level,
                    "iterations": gs.iterations,
                    "grad_norm": gs.grad_norm,
                    "converged": gs.converged,
                    "theta_variation": variation,
                }))
            } else {
                let gs = minimize_radial(n, p, alpha, grid, &opts)?;
                if let Some(path) = &out {
                    save_function(path, &GridFunction::Radial(gs.minimizer.clone()))?;
                }
                Ok(json!({
                    "provenance": provenance(&config),
                    "level": gs.level,
                    "iterations": gs.iterations,
                    "grad_norm": gs.grad_norm,
                    "converged": gs.converged,
                }))
            }
        }
        Command::SolveSystem { n, p, q, alpha, beta, grid, solve, out, certificate } => {
            let spec = SystemSpec::new(n, alpha, beta, p, q)?;
            let opts = solve.opts();
            let gs = minimize_system_radial(&spec, grid, &opts)?;
            if let Some(prefix) = &out {
                let base = prefix.to_string_lossy();
                save_function(
                    &PathBuf::from(format!("{base}.u.grid")),
                    &GridFunction::Radial(gs.u.clone()),
                )?;
                save_function(
                    &PathBuf::from(format!("{base}.v.grid")),
                    &GridFunction::Radial(gs.v.clone()),
                )?;
            }
            let cert = if certificate {
                Some(system_symmetry_certificate(&spec, grid, &opts)?)
            } else {
                None
            };
            let config = json!({
                "command": "solve-system", "N": n, "p": p, "q": q,
                "alpha": alpha, "beta": beta, "grid": grid, "solve": solve,
            });
            Ok(json!({
                "provenance": provenance(&config),
                "level": gs.level,
                "pohozaev_residual": gs.pohozaev_residual,
                "iterations": gs.iterations,
                "grad_norm": gs.grad_norm,
                "converged": gs.converged,
                "certificate": cert,
            }))
        }
        Command::Scan { p, alphas, grid, grid_theta, solve, out } => {
            let list = parse_alphas(&alphas)?;
            let opts = solve.opts();
            let result = scan_alpha(p, &list, grid, grid_theta, &opts)?;
            let config = json!({
                "command": "scan", "p": p, "alphas": alphas,
                "grid": grid, "grid_theta": grid_theta, "solve": solve,
            });
            if let Some(path) = &out {
                let mut csv =
                    String::from("alpha,s_rad,s_full,ratio,iters_rad,iters_full\n");
                for r in &result.rows {
                    csv.push_str(&format!(
                        "{:.17e},{:.17e},{:.17e},{:.17e},{},{}\n",
                        r.alpha, r.s_rad, r.s_full, r.ratio, r.iters_rad, r.iters_full
                    ));
                }
                std::fs::write(path, csv)?;
            }
            let max_ratio = result.rows.iter().map(|r| r.ratio).fold(0.0f64, f64::max);
            Ok(json!({
                "provenance": provenance(&config),
                "rows": result.rows,
                "max_ratio": max_ratio,
            }))
        }
        Command::AlphaStar { p, lo, hi, delta, grid, grid_theta, solve } => {
            let opts = solve.opts();
            let a = find_alpha_star(p, lo, hi, delta, grid, grid_theta, &opts)?;
            let config = json!({
                "command": "alpha-star", "p": p, "lo": lo, "hi": hi,
                "delta": delta, "grid": grid, "grid_theta": grid_theta, "solve": solve,
            });
            Ok(json!({
                "provenance": provenance(&config),
                "alpha_star": a,
            }))
        }
        Command::Asymptotics {
            n,
            p,
            q,
            beta,
            alpha_min,
            alpha_max,
            points,
            grid,
            solve,
            dominated_eps,
        } => {
            if points < 4 {
                return Err(HenonError::InvalidSpec("need at least 4 sweep points".into()));
            }
            let opts = solve.opts();
            let alphas: Vec<f64> = (0..points)
                .map(|k| {
                    alpha_min
                        * (alpha_max / alpha_min).powf(k as f64 / (points - 1) as f64)
                })
                .collect();
            let theory = theoretical_slopes(n, p, q.unwrap_or(1.0));
            let config = json!({
                "command": "asymptotics", "N": n, "p": p, "q": q, "beta": beta,
                "alpha_min": alpha_min, "alpha_max": alpha_max, "points": points,
                "grid": grid, "solve": solve, "dominated_eps": dominated_eps,
            });
            if let Some(q) = q {
                let mut rad = Vec::new();
                let mut bump = Vec::new();
                for &a in &alphas {
                    let spec = SystemSpec::new(n, a, beta, p, q)?;
                    rad.push(minimize_system_radial(&spec, grid, &opts)?.level);
                    bump.push(system_bump_upper(&spec)?);
                }
                let rad_fit = fit_log_slope(&alphas, &rad)?;
                let bump_fit = fit_log_slope(&alphas, &bump)?;
                let dominated = match &dominated_eps {
                    Some(list) => {
                        let eps = parse_alphas(list)?;
                        Some(dominated_limit_check(p, n, q, beta, &eps)?)
                    }
                    None => None,
                };
                Ok(json!({
                    "provenance": provenance(&config),
                    "alphas": alphas,
                    "radial_levels": rad,
                    "bump_uppers": bump,
                    "radial_fit": rad_fit,
                    "bump_fit": bump_fit,
                    "theory": theory,
                    "dominated": dominated,
                }))
            } else {
                let mut rad = Vec::new();
                let mut bump = Vec::new();
                for &a in &alphas {
                    rad.push(minimize_radial(n, p, a, grid, &opts)?.level);
                    if n == 2 {
                        bump.push(bump_upper_bound(a, p)?);
                    }
                }
                let rad_fit = fit_log_slope(&alphas, &rad)?;
                let bump_fit = if n == 2 {
                    Some(fit_log_slope(&alphas, &bump)?)
                } else {
                    None
                };
                Ok(json!({
                    "provenance": provenance(&config),
                    "alphas": alphas,
                    "radial_levels": rad,
                    "bump_uppers": if n == 2 { Some(&bump) } else { None },
                    "radial_fit": rad_fit,
                    "bump_fit": bump_fit,
                    "theory": theory,
                }))
            }
        }
        Command::Pohozaev { n, p, q, alpha, beta, grid, u, v, solve } => {
            let spec = SystemSpec::new(n, alpha, beta, p, q)?;
            let gap = hyperbola_gap(&spec.base);
            let branch = if gap.abs() <= 1e-9 {
                "critical"
            } else if gap > 0.0 {
                "subcritical"
            } else {
                "supercritical"
            };
            let config = json!({
                "command": "pohozaev", "N": n, "p": p, "q": q,
                "alpha": alpha, "beta": beta, "grid": grid, "solve": solve,
            });
            let (uf, vf) = match (&u, &v) {
                (Some(up), Some(vp)) => {
                    let load_radial = |path: &PathBuf| match load_function(path)? {
                        GridFunction::Radial(f) => Ok(f),
                        GridFunction::Disk(_) => Err(HenonError::Format(
                            "expected a radial grid file".into(),
                        )),
                    };
                    (load_radial(up)?, load_radial(vp)?)
                }
                (None, None) => {
                    let gs = minimize_system_radial(&spec, grid, &solve.opts())?;
                    (gs.u, gs.v)
                }
                _ => {
                    return Err(HenonError::InvalidSpec(
                        "--u and --v must be given together".into(),
                    ))
                }
            };
            let residual = pohozaev_residual(&uf, &vf, &spec)?;
            Ok(json!({
                "provenance": provenance(&config),
                "gap": gap,
                "branch": branch,
                "residual": residual,
                "grid_cells": uf.grid.m,
                "grid_dim": RadialGrid::new(n, uf.grid.m)?.n,
            }))
        }
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter("HSL_LOG")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match run(cli) {
        Ok(value) => {
            println!("{}", serde_json::to_string_pretty(&value).unwrap());
        }
        Err(e) => {
            let out = json!({ "error": error_code(&e), "message": e.to_string() });
            eprintln!("{out}");
            std::process::exit(1);
        }
    }
}
