//! `fspline`: build, evaluate, check, and plot self-affine rational splines.

mod curve;
mod error;
mod plot;
mod problem;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use fractal_spline::{
    alpha_cap, check_conditions, check_empirical, compute_K, compute_M,
    convergence_experiment, mirror_problem, solve_params, BaseKind, FractalSplineModel,
    Generator, InterpolationData, LambdaRange, ScalingVector, Side, SplineMode,
};

use error::{CliError, Result};
use problem::ProblemFile;

#[derive(Parser)]
#[command(
    name = "fspline",
    version,
    about = "Rational cubic splines with self-affine refinement: fit, evaluate, bound, constrain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the curve from a problem file and print a construction summary
    Fit {
        /// Problem file (JSON)
        problem: PathBuf,
    },
    /// Evaluate the curve to a curve file (CSV)
    Eval {
        /// Problem file (JSON)
        problem: PathBuf,
        /// Evaluate on a uniform grid with this many points
        #[arg(long)]
        grid: Option<usize>,
        /// Evaluate the exact orbit of this depth instead
        #[arg(long)]
        orbit: Option<u32>,
        /// Truncation tolerance for grid evaluation (default: data-scaled)
        #[arg(long)]
        tol: Option<f64>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the one-sided bound conditions and the empirical gap
    Check {
        /// Problem file (JSON) with a bound section and scalings
        problem: PathBuf,
        /// Orbit depth for the empirical gap
        #[arg(long, default_value_t = 6)]
        depth: u32,
    },
    /// Choose scalings and shape parameters that certify the bound
    Solve {
        /// Problem file (JSON) with a bound section
        problem: PathBuf,
        /// Fraction of the admissible scaling budget to spend, in [0, 1]
        #[arg(long, default_value_t = 1.0)]
        slack: f64,
        /// Write the solved problem file here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a mesh-refinement experiment against a built-in generator
    Converge {
        /// Generator name: linear, sin, or exp
        #[arg(long)]
        generator: String,
        /// Partition sizes, comma separated and increasing
        #[arg(long, value_delimiter = ',', default_value = "5,9,17,33")]
        sizes: Vec<usize>,
        /// Scaling fraction of each interval's width ratio, in [0, 1)
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        /// Domain as lo,hi (default: the generator's own)
        #[arg(long, value_delimiter = ',')]
        domain: Option<Vec<f64>>,
    },
    /// Render curve files to a deterministic SVG
    Plot {
        /// Curve files (CSV) in drawing order
        curves: Vec<PathBuf>,
        /// Problem file whose bound is overlaid dashed
        #[arg(long)]
        bound: Option<PathBuf>,
        /// Output SVG path
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Fit { problem } => cmd_fit(&problem),
        Command::Eval {
            problem,
            grid,
            orbit,
            tol,
            out,
        } => cmd_eval(&problem, grid, orbit, tol, out.as_deref()),
        Command::Check { problem, depth } => cmd_check(&problem, depth),
        Command::Solve {
            problem,
            slack,
            out,
        } => cmd_solve(&problem, slack, out.as_deref()),
        Command::Converge {
            generator,
            sizes,
            kappa,
            domain,
        } => cmd_converge(&generator, &sizes, kappa, domain),
        Command::Plot { curves, bound, out } => cmd_plot(&curves, bound.as_deref(), &out),
    }
}

/// Formats with fixed precision, then drops trailing zeros: 61 stays `61`,
/// 2/63 at six places becomes `0.031746`.
fn fmt_trim(v: f64, prec: usize) -> String {
    let s = format!("{v:.prec$}");
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".to_owned()
    } else {
        t.to_owned()
    }
}

fn fmt_vec(vals: &[f64], prec: usize) -> String {
    let items: Vec<String> = vals.iter().map(|v| fmt_trim(*v, prec)).collect();
    format!("({})", items.join(", "))
}

fn fmt_range(r: &LambdaRange) -> String {
    match r {
        LambdaRange::Empty => "empty".to_owned(),
        LambdaRange::Bounded { lo, hi } => {
            format!("[{}, {}]", fmt_trim(*lo, 4), fmt_trim(*hi, 4))
        }
        LambdaRange::Unbounded { lo } => format!("[{}, inf)", fmt_trim(*lo, 4)),
    }
}

fn note_estimated(estimated: bool) {
    if estimated {
        eprintln!("note: derivatives estimated from three-point means");
    }
}

fn cmd_fit(path: &Path) -> Result<()> {
    let file = ProblemFile::load(path)?;
    let (model, estimated) = file.build_model()?;
    note_estimated(estimated);
    let mesh = model.mesh();
    println!(
        "points: {} on [{}, {}]",
        model.data().len(),
        fmt_trim(mesh.first(), 6),
        fmt_trim(mesh.last(), 6)
    );
    println!("mode: {}", file.mode);
    println!("a = {}", fmt_vec(mesh.a(), 4));
    println!(
        "alpha = {}, sup = {}",
        fmt_vec(model.alpha().values(), 6),
        fmt_trim(model.alpha().sup_norm(), 6)
    );
    println!("shape r = {}", fmt_vec(model.params().r(), 4));
    println!("shape t = {}", fmt_vec(model.params().t(), 4));
    println!("value bound = {}", fmt_trim(model.value_bound(), 6));
    println!("default tol = {:.2e}", model.default_tol());
    Ok(())
}

fn cmd_eval(
    path: &Path,
    grid: Option<usize>,
    orbit: Option<u32>,
    tol: Option<f64>,
    out: Option<&Path>,
) -> Result<()> {
    let file = ProblemFile::load(path)?;
    let (model, estimated) = file.build_model()?;
    note_estimated(estimated);
    let points = match (grid, orbit) {
        (Some(n), None) => model.sample_uniform(n, tol.unwrap_or(model.default_tol()))?,
        (None, Some(d)) => {
            if tol.is_some() {
                return Err(CliError::Usage(
                    "--tol applies to --grid evaluation only".to_owned(),
                ));
            }
            model.eval_orbit(d)?
        }
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --grid or --orbit".to_owned(),
            ))
        }
    };
    match out {
        Some(p) => {
            curve::write(p, &points)?;
            eprintln!("wrote {} points to {}", points.len(), p.display());
        }
        None => print!("{}", curve::render(&points)),
    }
    Ok(())
}

fn cmd_check(path: &Path, depth: u32) -> Result<()> {
    let file = ProblemFile::load(path)?;
    let bound = file.require_bound()?;
    let (model, estimated) = file.build_model()?;
    note_estimated(estimated);
    // the model's data always carries derivatives, whatever the mode
    let data = model.data().clone();
    let alpha = model.alpha().clone();
    let params = model.params().clone();
    let (cdata, cbound) = match bound.side() {
        Side::Above => (data.clone(), bound.clone()),
        Side::Below => {
            println!("side: below (checked through reflection)");
            mirror_problem(&data, &bound)
        }
    };
    let m = compute_M(&cdata)?;
    let cap = alpha_cap(&cdata, &cbound)?;
    let k = compute_K(m, alpha.sup_norm())?;
    let cert = check_conditions(&cdata, &params, &alpha, &cbound, k)?;
    println!("M = {}", fmt_trim(m, 6));
    println!("alpha_cap = {}", fmt_trim(cap, 6));
    println!(
        "alpha_sup = {} (admissible: {}, within cap: {})",
        fmt_trim(cert.alpha_sup, 6),
        cert.scaling_admissible,
        cert.cap_satisfied
    );
    println!("K = {}", fmt_trim(k, 6));
    for i in 0..cert.left_end_residuals.len() {
        println!(
            "interval {i}: left residual = {}, right residual = {}, lambda range = {}",
            fmt_trim(cert.left_end_residuals[i], 4),
            fmt_trim(cert.right_end_residuals[i], 4),
            fmt_range(&cert.lambda_ranges[i])
        );
    }
    println!("feasible: {}", cert.feasible);
    let (min_gap, at) = check_empirical(&model, &bound, depth)?;
    println!(
        "empirical min gap = {} at x = {} (depth {depth})",
        fmt_trim(min_gap, 6),
        fmt_trim(at, 6)
    );
    Ok(())
}

fn cmd_solve(path: &Path, slack: f64, out: Option<&Path>) -> Result<()> {
    let file = ProblemFile::load(path)?;
    let bound = file.require_bound()?;
    let (raw, estimated) = file.data()?;
    note_estimated(estimated);
    // a null-scaling probe yields the effective data for either mode
    let mode = file.mode()?;
    let params0 = file.params()?;
    let probe = FractalSplineModel::build(
        &raw,
        &params0,
        &ScalingVector::zero(params0.len()),
        mode,
        BaseKind::Rational,
    )?;
    let data = probe.data().clone();
    let (alpha, params, cert) = solve_params(&data, &bound, slack)?;
    println!("M = {}", fmt_trim(cert.m, 6));
    println!("alpha_cap = {}", fmt_trim(cert.alpha_cap, 6));
    println!("alpha_sup = {}", fmt_trim(cert.alpha_sup, 6));
    println!("K = {}", fmt_trim(cert.k, 6));
    println!("alpha = {}", fmt_vec(alpha.values(), 6));
    println!("shape r = {}", fmt_vec(params.r(), 4));
    println!("shape t = {}", fmt_vec(params.t(), 4));
    println!("feasible: {}", cert.feasible);
    let model =
        FractalSplineModel::build(&data, &params, &alpha, SplineMode::Hermite, BaseKind::Rational)?;
    let (min_gap, at) = check_empirical(&model, &bound, 6)?;
    println!(
        "empirical min gap = {} at x = {} (depth 6)",
        fmt_trim(min_gap, 6),
        fmt_trim(at, 6)
    );
    if let Some(p) = out {
        let mut solved = file.clone();
        solved.alpha = Some(alpha.values().to_vec());
        solved.shape_r = Some(params.r().to_vec());
        solved.shape_t = Some(params.t().to_vec());
        if mode == SplineMode::Hermite && solved.derivatives.is_none() {
            solved.derivatives = data.derivatives.clone();
        }
        solved.save(p)?;
        eprintln!("wrote solved problem to {}", p.display());
    }
    Ok(())
}

fn cmd_converge(
    generator: &str,
    sizes: &[usize],
    kappa: f64,
    domain: Option<Vec<f64>>,
) -> Result<()> {
    let generator = Generator::from_name(generator)?;
    let domain = match domain {
        None => generator.default_domain(),
        Some(d) if d.len() == 2 => (d[0], d[1]),
        Some(d) => {
            return Err(CliError::Usage(format!(
                "--domain takes lo,hi, got {} numbers",
                d.len()
            )))
        }
    };
    let report = convergence_experiment(generator, domain, sizes, kappa)?;
    println!(
        "generator: {} on [{}, {}], kappa = {}",
        generator.name(),
        fmt_trim(domain.0, 6),
        fmt_trim(domain.1, 6),
        fmt_trim(kappa, 6)
    );
    println!("{:>6} {:>12} {:>14} {:>14}", "n", "h", "sup_error", "bound");
    for p in &report.points {
        println!(
            "{:>6} {:>12.6} {:>14.6e} {:>14.6e}",
            p.n, p.h, p.sup_error, p.bound
        );
    }
    match report.order {
        Some(o) => println!("order = {}", fmt_trim(o, 4)),
        None => println!("order = not estimated (errors at roundoff)"),
    }
    Ok(())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn cmd_plot(curves: &[PathBuf], bound: Option<&Path>, out: &Path) -> Result<()> {
    if curves.is_empty() {
        return Err(CliError::Usage("pass at least one curve file".to_owned()));
    }
    let mut series = Vec::new();
    for p in curves {
        let name = p
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| p.display().to_string());
        series.push(plot::Series {
            name: xml_escape(&name),
            points: curve::read(p)?,
            dashed: false,
        });
    }
    if let Some(bp) = bound {
        let file = ProblemFile::load(bp)?;
        let spec = file.require_bound()?;
        // the bound lives on the interpolated knots: all of them in hermite
        // mode, all but the trailing slope point in values-only mode
        let keep = match file.mode()? {
            SplineMode::Hermite => file.knots.len(),
            SplineMode::ValuesOnly => file.knots.len().saturating_sub(1),
        };
        let mesh = InterpolationData::new(
            file.knots[..keep].to_vec(),
            file.values[..keep].to_vec(),
        )
        .validate()?;
        let n = 512;
        let mut pts = Vec::with_capacity(n);
        for k in 0..n {
            let x = mesh.first() + mesh.span() * k as f64 / (n - 1) as f64;
            let x = x.min(mesh.last());
            pts.push((x, spec.eval(&mesh, x)?));
        }
        series.push(plot::Series {
            name: "bound".to_owned(),
            points: pts,
            dashed: true,
        });
    }
    std::fs::write(out, plot::render(&series))?;
    eprintln!("wrote {}", out.display());
    Ok(())
}
