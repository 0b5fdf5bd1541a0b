use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use ho::check::{self, CheckConfig};
use ho::heat::{self, HeatKernelEvaluator, SampledFunction};
use ho::innerprod::{Backend, QuadratureGrid};
use ho::io;
use ho::jacobi;
use ho::rootsys::{build_root_system, RootSystem, SystemName};
use ho::{Error, Result};

#[derive(Parser)]
#[command(
    name = "ho",
    about = "Heckman-Opdam polynomials on the fundamental alcove, the heat semigroup, and the Segal-Bargmann transform",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the orthogonal polynomial basis up to a norm shell.
    Basis {
        /// Root system label: A1, BC1, A2, B2, G2, BC2.
        #[arg(long)]
        system: String,
        /// Comma-separated multiplicities, one per length class (increasing
        /// root length).
        #[arg(long, allow_hyphen_values = true)]
        mult: String,
        /// Norm shell |lambda| <= max-shell.
        #[arg(long, default_value_t = 10.0)]
        max_shell: f64,
        /// Inner-product backend: exact, quadrature, or auto.
        #[arg(long, default_value = "auto")]
        backend: String,
        /// Quadrature resolution per dimension (top Richardson level).
        #[arg(long)]
        grid: Option<usize>,
        /// Output path for the basis JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate one basis polynomial at a point.
    EvalPoly {
        #[arg(long)]
        basis: PathBuf,
        /// Weight coordinates, e.g. "3" or "2,1".
        #[arg(long)]
        lambda: String,
        /// Real point "x0[,x1]".
        #[arg(long, conflicts_with = "z")]
        x: Option<String>,
        /// Complex point "re+imi[,re+imi]".
        #[arg(long)]
        z: Option<String>,
    },
    /// Evaluate the heat kernel with its truncation-tail estimate.
    HeatKernel {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        t: f64,
        /// First argument, real "x0[,x1]" or complex "re+imi[,re+imi]".
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Truncation tolerance for the reported guarantee.
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
    },
    /// Evolve sampled initial data under the heat semigroup.
    HeatSolve {
        #[arg(long)]
        basis: PathBuf,
        /// CSV of initial samples on the solver grid.
        #[arg(long)]
        init: PathBuf,
        /// Solver grid resolution per dimension.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        t: f64,
        /// Output CSV path; a JSON sidecar `<out>.meta.json` is written too.
        #[arg(long)]
        out: PathBuf,
    },
    /// Segal-Bargmann transform of sampled data at a complex point.
    Sb {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        init: PathBuf,
        /// Grid resolution the initial data lives on.
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Complex evaluation point "re+imi[,re+imi]".
        #[arg(long)]
        z: String,
    },
    /// Run the Segal-Bargmann unitarity and reproducing-kernel suites.
    SbCheck {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classical special-function oracles (debugging aids).
    Oracle {
        #[command(subcommand)]
        which: OracleCmd,
    },
    /// Run the full invariant suite and emit a pass/fail report.
    Check {
        #[arg(long, default_value = "A1")]
        system: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        mult: String,
        #[arg(long, default_value_t = 10.0)]
        max_shell: f64,
        #[arg(long, default_value = "auto")]
        backend: String,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Gegenbauer polynomial C_n^mu(u).
    Gegenbauer {
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: f64,
    },
    /// Chebyshev polynomial of the second kind U_n(u).
    ChebyshevU {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: f64,
    },
    /// Jacobi polynomial P_n^{(a,b)}(u).
    Jacobi {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        u: f64,
    },
    /// Heat kernel on a circle of the given circumference.
    CircleKernel {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        theta2: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        period: f64,
    },
    /// Wallis mass integral of (2 sin u)^m over [0, pi].
    Wallis {
        #[arg(long)]
        m: f64,
    },
}

fn parse_mults(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad multiplicity `{p}`")))
        })
        .collect()
}

fn parse_system(system: &str, mult: &str) -> Result<Arc<RootSystem>> {
    let name = SystemName::parse(system)?;
    build_root_system(name, &parse_mults(mult)?)
}

fn resolve_backend(rs: &RootSystem, backend: &str, grid: Option<usize>) -> Result<Backend> {
    let default_n = if rs.rank == 1 { 4096 } else { 1024 };
    let n = grid.unwrap_or(default_n);
    match backend {
        "auto" => {
            let even = rs
                .multiplicities()
                .iter()
                .all(|m| m.fract() == 0.0 && (*m as i64) % 2 == 0);
            Ok(if even {
                Backend::Exact
            } else {
                Backend::Quadrature { n }
            })
        }
        other => Backend::parse(other, n),
    }
}

fn parse_lambda(s: &str) -> Result<[i32; 2]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.is_empty() || parts.len() > 2 {
        return Err(Error::InvalidInput(format!("bad weight `{s}`")));
    }
    let mut out = [0i32; 2];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad coordinate `{p}`")))?;
    }
    Ok(out)
}

fn complex_json(v: Complex64) -> serde_json::Value {
    json!({ "re": v.re, "im": v.im })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Basis {
            system,
            mult,
            max_shell,
            backend,
            grid,
            out,
        } => {
            let rs = parse_system(&system, &mult)?;
            let backend = resolve_backend(&rs, &backend, grid)?;
            let basis = jacobi::build_basis(&rs, max_shell, backend)?;
            io::write_basis(&out, &basis)?;
            println!(
                "{}",
                io::to_json_string(&json!({
                    "system": io::system_to_json(&rs),
                    "entries": basis.len(),
                    "max_shell": max_shell,
                    "out": out.display().to_string(),
                }))?
            );
            Ok(0)
        }
        Cmd::EvalPoly { basis, lambda, x, z } => {
            let basis = io::read_basis(&basis)?;
            let coords = parse_lambda(&lambda)?;
            let entry = basis
                .find(coords)
                .ok_or_else(|| Error::InvalidInput(format!("weight {coords:?} not in the basis")))?;
            let zp = match (&x, &z) {
                (Some(x), _) => {
                    let p = io::parse_real_point(x)?;
                    [Complex64::new(p[0], 0.0), Complex64::new(p[1], 0.0)]
                }
                (None, Some(z)) => io::parse_complex_point(z)?,
                (None, None) => [Complex64::ZERO; 2],
            };
            println!(
                "{}",
                io::to_json_string(&json!({
                    "lambda": coords.to_vec(),
                    "p_value": complex_json(entry.poly.eval_complex(zp)),
                    "r_value": complex_json(entry.rpoly.eval_complex(zp)),
                    "theta": entry.theta,
                    "r_constant": entry.r,
                }))?
            );
            Ok(0)
        }
        Cmd::HeatKernel { basis, t, x, y, eps } => {
            let basis = Arc::new(io::read_basis(&basis)?);
            let ev = HeatKernelEvaluator::new(basis, eps)?;
            let zx = io::parse_complex_point(&x)?;
            let zy = io::parse_complex_point(&y)?;
            let kv = ev.kernel_eval(zx, zy, t)?;
            println!(
                "{}",
                io::to_json_string(&json!({
                    "t": t,
                    "value": complex_json(kv.value),
                    "tail_bound": kv.tail_bound,
                    "guaranteed": kv.guaranteed,
                    "t_min": ev.t_min,
                }))?
            );
            Ok(0)
        }
        Cmd::HeatSolve {
            basis,
            init,
            grid,
            t,
            out,
        } => {
            let basis = Arc::new(io::read_basis(&basis)?);
            let rs = basis.root_system().clone();
            let g = Arc::new(QuadratureGrid::new(rs.clone(), grid));
            let values = io::read_samples(&init, &g)?;
            let f = SampledFunction {
                grid: g.clone(),
                values,
            };
            let symmetry_defect = f.symmetry_defect();
            let (u, hat) = heat::heat_transform_sampled(&basis, &f, t)?;
            io::write_samples(&out, &g, &u.values)?;
            let ev = HeatKernelEvaluator::new(basis.clone(), 1e-8)?;
            let sidecar = json!({
                "t": t,
                "grid": grid,
                "tail_bound": if t > 0.0 { ev.tail_bound(t, 0.0, 0.0) } else { 0.0 },
                "parseval_residual": heat::parseval_residual(&basis, &f, &hat),
                "input_symmetry_defect": symmetry_defect,
            });
            let meta = out.with_extension("meta.json");
            io::write_json(&meta, &sidecar)?;
            println!("{}", io::to_json_string(&sidecar)?);
            Ok(0)
        }
        Cmd::Sb {
            basis,
            t,
            init,
            grid,
            z,
        } => {
            let basis = Arc::new(io::read_basis(&basis)?);
            let rs = basis.root_system().clone();
            let g = Arc::new(QuadratureGrid::new(rs.clone(), grid));
            let values = io::read_samples(&init, &g)?;
            let f = SampledFunction { grid: g, values };
            if t <= 0.0 {
                return Err(Error::NonPositiveTime(t));
            }
            let hat = heat::ho_transform_sampled(&basis, &f)?;
            let damped = heat::damp_spectrum(&basis, &hat, t);
            let hf = ho::bargmann::HolomorphicHeatFunction::from_spectrum(basis, t, damped);
            let zp = io::parse_complex_point(&z)?;
            println!(
                "{}",
                io::to_json_string(&json!({
                    "t": t,
                    "z": [complex_json(zp[0]), complex_json(zp[1])],
                    "value": complex_json(hf.eval(zp)),
                }))?
            );
            Ok(0)
        }
        Cmd::SbCheck { basis, t, out } => {
            let basis = Arc::new(io::read_basis(&basis)?);
            let results = check::run_sb_checks(&basis, t, 7)?;
            let report = check::report_to_json(&results);
            if let Some(path) = out {
                io::write_json(&path, &report)?;
            }
            println!("{}", io::to_json_string(&report)?);
            Ok(if check::all_pass(&results) { 0 } else { 3 })
        }
        Cmd::Oracle { which } => {
            let value = match which {
                OracleCmd::Gegenbauer { mu, n, u } => ho::oracle::gegenbauer_eval(mu, n, u)?,
                OracleCmd::ChebyshevU { n, u } => ho::oracle::chebyshev_u(n, u),
                OracleCmd::Jacobi { a, b, n, u } => ho::oracle::jacobi_eval(a, b, n, u),
                OracleCmd::CircleKernel {
                    theta,
                    theta2,
                    t,
                    period,
                } => ho::oracle::circle_heat_kernel(theta, theta2, t, period)?,
                OracleCmd::Wallis { m } => ho::oracle::wallis_mass(m)?,
            };
            println!("{}", io::to_json_string(&json!({ "value": value }))?);
            Ok(0)
        }
        Cmd::Check {
            system,
            mult,
            max_shell,
            backend,
            grid,
            eps,
            out,
        } => {
            let rs = parse_system(&system, &mult)?;
            let backend = resolve_backend(&rs, &backend, grid)?;
            let grid_n = if rs.rank == 1 { 512 } else { 64 };
            let mut cfg = CheckConfig::new(rs, max_shell, backend, grid_n);
            cfg.eps = eps;
            let results = check::run_checks(&cfg);
            let report = check::report_to_json(&results);
            if let Some(path) = out {
                io::write_json(&path, &report)?;
            }
            println!("{}", io::to_json_string(&report)?);
            Ok(if check::all_pass(&results) { 0 } else { 3 })
        }
    }
}

fn main() {
    if let Ok(v) = std::env::var("HO_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
