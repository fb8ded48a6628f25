//! `skewnum` command-line driver.
//!
//! Exit codes: 0 success / no violation, 1 failed verification,
//! 2 input error, 3 violation found, 4 numerical failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use skewnum_core::inequality::GapReport;
use skewnum_core::metric::{mu_p_inverse_moment, mu_p_total_mass, wyd_via_quadrature_detailed};
use skewnum_core::search::{grid, Field};
use skewnum_core::{
    embed_sa_as_ssa, p_sweep, partial_trace, reference, sa_gap, search_sa_violation, ssa_gap,
    wyd_entropy, Error, InstanceFile, QuadratureConfig, SearchConfig,
};

mod svg;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "skewnum",
    version,
    about = "Wigner-Yanase-Dyson entropy inequality checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the built-in two-qubit counterexample step by step.
    VerifyPaper {
        /// Absolute tolerance for non-exact checks.
        #[arg(long, default_value_t = reference::DEFAULT_TOL)]
        tol: f64,
        /// Evaluate through the general exponent path at this p.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Print S_p of the full state and of every single-factor marginal.
    Eval {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Subadditivity gap of a bipartite instance.
    CheckSa {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Strong subadditivity gap of a tripartite instance (bipartite files are embedded).
    CheckSsa {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Closed-form S_p against its λ-entropy integral representation.
    Quadrature {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        abs_tol: f64,
    },
    /// Nelder-Mead search for subadditivity violations.
    Search {
        /// Factor dimensions, e.g. 2,2.
        #[arg(long, default_value = "2,2")]
        dims: String,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        max_iters: usize,
        #[arg(long)]
        warm_start: Option<PathBuf>,
        /// Pin k2 = 0.
        #[arg(long)]
        k2_zero: bool,
        /// Search over complex Hermitian instances.
        #[arg(long)]
        complex: bool,
        /// Where to write the best instance.
        #[arg(long, default_value = "best-instance.json")]
        out: PathBuf,
    },
    /// Subadditivity gap over a grid of exponents.
    Sweep {
        #[arg(long)]
        instance: PathBuf,
        /// start:stop:step
        #[arg(long, default_value = "0.1:0.9:0.1")]
        grid: String,
        /// Also write the gaps as an SVG line plot.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoConvergence { .. }
            | Error::QuadratureNoConvergence { .. }
            | Error::NonRealTrace { .. } => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::VerifyPaper { tol, p } => verify_paper(tol, p),
        Command::Eval { instance, p } => eval(&instance, p),
        Command::CheckSa { instance, p, tol } => check_sa(&instance, p, tol),
        Command::CheckSsa { instance, p, tol } => check_ssa(&instance, p, tol),
        Command::Quadrature {
            instance,
            p,
            abs_tol,
        } => quadrature(&instance, p, abs_tol),
        Command::Search {
            dims,
            p,
            restarts,
            seed,
            max_iters,
            warm_start,
            k2_zero,
            complex,
            out,
        } => {
            let opts = SearchOpts {
                dims,
                p,
                restarts,
                seed,
                max_iters,
                warm_start,
                k2_zero,
                complex,
                out,
            };
            search(opts)
        }
        Command::Sweep {
            instance,
            grid,
            svg,
        } => sweep(&instance, &grid, svg.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn verify_paper(tol: f64, p: Option<f64>) -> CmdResult {
    if tol.is_nan() || tol < 0.0 {
        return Err(input_error("--tol must be non-negative"));
    }
    let start = Instant::now();
    let report = reference::verify(tol, p)?;
    let elapsed = start.elapsed();
    for c in &report.checks {
        println!(
            "[{}] {:<28} error {:.3e} (bound {:.1e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.error,
            c.bound
        );
    }
    println!("S(rho12, k12)            = {:.10}", report.s12);
    println!("S(rho1, k1) = S(rho2, k2) = {:.10}", report.s1);
    println!(
        "gap S1 + S2 - S12        = {:.10}  ({})",
        report.gap,
        if report.violated {
            "subadditivity violated"
        } else {
            "no violation"
        }
    );
    println!("elapsed {:.3} ms", elapsed.as_secs_f64() * 1e3);
    if report.passed() {
        println!("all {} checks passed", report.checks.len());
        Ok(0)
    } else {
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        println!("{} check(s) failed: {}", failed.len(), failed.join(", "));
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn load(path: &Path) -> Result<InstanceFile, Failure> {
    Ok(InstanceFile::read(path)?)
}

fn resolve_p(file: &InstanceFile, p: Option<f64>) -> Result<f64, Failure> {
    p.or(file.p)
        .ok_or_else(|| input_error("no exponent: pass --p or set \"p\" in the instance file"))
}

fn eval(path: &Path, p: Option<f64>) -> CmdResult {
    let file = load(path)?;
    let p = resolve_p(&file, p)?;
    let (rho, ks) = file.parts()?;
    let k_full = skewnum_core::local_sum(&ks, rho.dims())?;
    println!("dims {:?}, p = {p}", rho.dims());
    println!(
        "S_p(rho, k)        = {:.12}",
        wyd_entropy(rho.matrix(), k_full.matrix(), p)?
    );
    for (i, k) in ks.iter().enumerate() {
        let marginal = partial_trace(&rho, &[i])?;
        let s = wyd_entropy(marginal.matrix(), k, p)?;
        println!("S_p(rho{}, k{})      = {:.12}", i + 1, i + 1, s);
        print!("rho{} =\n{}", i + 1, marginal.matrix());
    }
    Ok(0)
}

fn print_report(title: &str, r: &GapReport) {
    println!("{title} at p = {}", r.p);
    for (name, v) in &r.terms {
        println!("  {name:<5} = {v:.12}");
    }
    println!("  gap   = {:.12}", r.gap);
    println!("  tol   = {:.3e}", r.tolerance);
    println!("  violated: {}", r.violated);
}

fn check_sa(path: &Path, p: Option<f64>, tol: Option<f64>) -> CmdResult {
    let file = load(path)?;
    let p = resolve_p(&file, p)?;
    let inst = file.to_bipartite(Some(p))?;
    let r = sa_gap(&inst, tol)?;
    print_report("subadditivity S1 + S2 - S12", &r);
    Ok(if r.violated { EXIT_VIOLATION } else { 0 })
}

fn check_ssa(path: &Path, p: Option<f64>, tol: Option<f64>) -> CmdResult {
    let file = load(path)?;
    let p = resolve_p(&file, p)?;
    let inst = match file.dims.len() {
        3 => file.to_tripartite(Some(p))?,
        2 => {
            println!("bipartite input: embedding with a one-dimensional middle factor");
            embed_sa_as_ssa(&file.to_bipartite(Some(p))?)
        }
        n => return Err(input_error(format!("expected 2 or 3 factors, found {n}"))),
    };
    let r = ssa_gap(&inst, tol)?;
    print_report("strong subadditivity S12 + S23 - S123 - S2", &r);
    Ok(if r.violated { EXIT_VIOLATION } else { 0 })
}

fn quadrature(path: &Path, p: Option<f64>, abs_tol: f64) -> CmdResult {
    let file = load(path)?;
    let p = resolve_p(&file, p)?;
    let (rho, ks) = file.parts()?;
    let k = skewnum_core::local_sum(&ks, rho.dims())?;
    let cfg = QuadratureConfig {
        abs_tol,
        ..Default::default()
    };
    let mass = mu_p_total_mass(p, &cfg)?;
    let moment = mu_p_inverse_moment(p, &cfg)?;
    println!("mu_p total mass        = {mass:.12}");
    println!("int lambda^-1 dmu_p    = {moment:.12} (finite)");
    let closed = wyd_entropy(rho.matrix(), k.matrix(), p)?;
    let quad = wyd_via_quadrature_detailed(rho.matrix(), k.matrix(), p, &cfg)?;
    println!("closed form S_p        = {closed:.12}");
    println!(
        "quadrature S_p         = {:.12}  (error estimate {:.2e}, {} panels)",
        quad.value, quad.error_estimate, quad.panels
    );
    let diff = quad.value - closed;
    println!("difference             = {diff:.3e}");
    if closed != 0.0 {
        println!("relative difference    = {:.3e}", (diff / closed).abs());
    }
    Ok(0)
}

struct SearchOpts {
    dims: String,
    p: f64,
    restarts: usize,
    seed: u64,
    max_iters: usize,
    warm_start: Option<PathBuf>,
    k2_zero: bool,
    complex: bool,
    out: PathBuf,
}

fn parse_dims(s: &str) -> Result<(usize, usize), Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(input_error(format!("--dims expects D1,D2, got {s:?}")));
    }
    let parse = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| input_error(format!("bad dimension {t:?}")))
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

fn threads_from_env() -> Result<usize, Failure> {
    match std::env::var("SKEWNUM_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| input_error(format!("SKEWNUM_THREADS must be an integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn search(o: SearchOpts) -> CmdResult {
    let mut cfg = SearchConfig::new(parse_dims(&o.dims)?, o.p, o.restarts, o.seed);
    cfg.max_iters = o.max_iters;
    cfg.k2_zero = o.k2_zero;
    cfg.field = if o.complex {
        Field::Complex
    } else {
        Field::Real
    };
    cfg.threads = threads_from_env()?;
    let warm = match &o.warm_start {
        Some(path) => Some(load(path)?.to_bipartite(Some(o.p))?),
        None => None,
    };
    let start = Instant::now();
    let outcome = search_sa_violation(&cfg, warm.as_ref())?;
    print_report("best subadditivity gap", &outcome.report);
    println!("origin: {:?}", outcome.origin);
    println!(
        "violating candidates: {} of {}",
        outcome.violations,
        outcome.candidate_gaps.len()
    );
    println!("elapsed {:.2} s", start.elapsed().as_secs_f64());
    InstanceFile::from_bipartite(&outcome.instance).write(&o.out)?;
    println!("best instance written to {}", o.out.display());
    Ok(if outcome.report.violated {
        EXIT_VIOLATION
    } else {
        0
    })
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| input_error(format!("bad grid value {t:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    match nums.as_slice() {
        [single] => Ok(vec![*single]),
        [start, stop, step] => Ok(grid(*start, *stop, *step)?),
        _ => Err(input_error(
            "--grid expects start:stop:step or a single value",
        )),
    }
}

fn sweep(path: &Path, grid_spec: &str, svg_path: Option<&Path>) -> CmdResult {
    let file = load(path)?;
    let grid = parse_grid(grid_spec)?;
    let p0 = file.p.unwrap_or(grid[0]);
    let inst = file.to_bipartite(Some(p0))?;
    let reports = p_sweep(&inst, &grid)?;
    let mut table = String::new();
    writeln!(table, "{:>8} {:>18} {:>9}", "p", "gap", "violated").unwrap();
    for r in &reports {
        writeln!(table, "{:>8.4} {:>18.10} {:>9}", r.p, r.gap, r.violated).unwrap();
    }
    print!("{table}");
    let all_negative = reports.iter().all(|r| r.gap < 0.0);
    println!(
        "numerical evidence only (not a proof): {} of {} exponents give a negative gap{}",
        reports.iter().filter(|r| r.gap < 0.0).count(),
        reports.len(),
        if all_negative { "" } else { " (not all)" }
    );
    if let Some(path) = svg_path {
        let points: Vec<(f64, f64)> = reports.iter().map(|r| (r.p, r.gap)).collect();
        std::fs::write(path, svg::line_plot(&points, "p", "subadditivity gap"))
            .map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        println!("plot written to {}", path.display());
    }
    Ok(0)
}
