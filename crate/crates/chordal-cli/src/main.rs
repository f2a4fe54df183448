//! `chordal` — certified chordal-metric robustness computations.
//!
//! All commands assemble their full report first and print it once at the
//! end, as human-readable text or as JSON with `--json`; error exits never
//! produce partial reports.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use chordal_core::robustness::{self, ExampleReport, Verdict};
use chordal_core::{io, CoprimePlant, Error, PolydiscGrid};

const EXIT_NOT_CERTIFIED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_COPRIMENESS: u8 = 3;
const EXIT_NOT_STABILIZED: u8 = 4;

/// How far `certify` and the example sweeps refine the grid before
/// accepting an inconclusive verdict.
const MAX_REFINEMENT: usize = 4;

#[derive(Parser)]
#[command(
    name = "chordal",
    version,
    about = "Certified chordal-metric distances and stabilization margins \
             for plants over the polydisc"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Radial step count of the certification grid.
    #[arg(long, global = true, default_value_t = 21)]
    grid_radial: usize,

    /// Angular step count of the certification grid.
    #[arg(long, global = true, default_value_t = 126)]
    grid_angular: usize,

    /// Emit the report as JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,

    /// Residual tolerance for admitting Bezout witnesses.
    #[arg(long, global = true, default_value_t = 1e-9)]
    bezout_tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Certified sup norm and l1 norm of a series file.
    Norm {
        /// Series file (JSON).
        file: PathBuf,
    },
    /// Certified chordal distance between two plants.
    Distance {
        /// First plant file (JSON).
        plant1: PathBuf,
        /// Second plant file (JSON).
        plant2: PathBuf,
    },
    /// Robustness margin of a stabilized plant/controller loop.
    Margin {
        /// Nominal plant file (JSON).
        plant: PathBuf,
        /// Controller series file (JSON).
        controller: PathBuf,
    },
    /// Certify that the controller stabilizes a perturbed plant because it
    /// lies within the nominal loop's margin. Refines the grid up to four
    /// times when the verdict is within the Lipschitz slack.
    Certify {
        /// Nominal plant file (JSON).
        nominal: PathBuf,
        /// Perturbed plant file (JSON).
        plant: PathBuf,
        /// Controller series file (JSON).
        controller: PathBuf,
    },
    /// Sweep the built-in two-variable example family over a shift range.
    Example {
        /// Range of shifts as start:stop:step, each inside (-1, 1).
        #[arg(long, default_value = "0:0.3:0.02")]
        range: String,
    },
    /// Sweep the built-in example family over explicit shifts.
    Sweep {
        /// Comma-separated shifts inside (-1, 1).
        #[arg(long, value_delimiter = ',', required = true)]
        alphas: Vec<f64>,
    },
    /// Randomized soundness check: certified verdicts must never
    /// contradict the direct stability test.
    TestTheorem {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e))
        }
    }
}

/// `CHORDAL_THREADS` caps the worker count; 0 or unset means automatic.
fn init_thread_pool() {
    if let Some(n) = std::env::var("CHORDAL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // Build errors only when a pool already exists, which keeps the
        // default pool; that is an acceptable fallback.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn error_exit_code(e: &Error) -> u8 {
    match e {
        Error::BezoutResidual { .. }
        | Error::CommonZero { .. }
        | Error::CoprimenessInconclusive { .. }
        | Error::CoprimenessViolation { .. }
        | Error::ZeroDenominator => EXIT_COPRIMENESS,
        Error::NominalNotStabilized { .. } => EXIT_NOT_STABILIZED,
        _ => EXIT_PARSE,
    }
}

fn run(cli: &Cli) -> chordal_core::Result<ExitCode> {
    match &cli.command {
        Command::Norm { file } => cmd_norm(cli, file),
        Command::Distance { plant1, plant2 } => cmd_distance(cli, plant1, plant2),
        Command::Margin { plant, controller } => cmd_margin(cli, plant, controller),
        Command::Certify { nominal, plant, controller } => {
            cmd_certify(cli, nominal, plant, controller)
        }
        Command::Example { range } => {
            let alphas = parse_range(range)?;
            cmd_family_sweep(cli, &alphas)
        }
        Command::Sweep { alphas } => {
            for &a in alphas {
                check_alpha(a)?;
            }
            cmd_family_sweep(cli, alphas)
        }
        Command::TestTheorem { trials, seed } => cmd_test_theorem(cli, *trials, *seed),
    }
}

/// The certification grid, sized to the dimension of the objects in play.
fn make_grid(cli: &Cli, nvars: usize) -> chordal_core::Result<PolydiscGrid> {
    PolydiscGrid::new(nvars, cli.grid_radial, cli.grid_angular)
}

/// Load a plant file and admit it against the coprimeness checks.
fn load_plant(cli: &Cli, path: &PathBuf, grid: &PolydiscGrid) -> chordal_core::Result<CoprimePlant> {
    let (num, den, witnesses) = io::load_plant_parts(path)?;
    CoprimePlant::with_tolerance(num, den, witnesses, grid, cli.bezout_tol)
}

fn emit<T: Serialize>(cli: &Cli, report: &T, human: String) {
    if cli.json {
        println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports contain only plain data")
        );
    } else {
        print!("{human}");
    }
}

#[derive(Serialize)]
struct GridInfo {
    radial: usize,
    angular: usize,
    covering_radius: f64,
}

impl GridInfo {
    fn of(grid: &PolydiscGrid) -> Self {
        let (radial, angular) = grid.steps().expect("CLI grids are always standard");
        GridInfo { radial, angular, covering_radius: grid.covering_radius() }
    }
}

#[derive(Serialize)]
struct NormReport {
    sup: chordal_core::CertifiedBound,
    l1: f64,
    nvars: usize,
    grid: GridInfo,
}

fn cmd_norm(cli: &Cli, file: &PathBuf) -> chordal_core::Result<ExitCode> {
    let f = io::load_series(file)?;
    let grid = make_grid(cli, f.nvars())?;
    let report = NormReport {
        sup: chordal_core::sup_norm_certified(&f, &grid)?,
        l1: f.l1_norm(),
        nvars: f.nvars(),
        grid: GridInfo::of(&grid),
    };
    let mut out = String::new();
    let _ = writeln!(out, "sup |f|   in {}", report.sup);
    let _ = writeln!(out, "l1 norm   {:.12}", report.l1);
    let _ = writeln!(
        out,
        "grid      {} radial x {} angular, covering radius {:.6}",
        report.grid.radial, report.grid.angular, report.grid.covering_radius
    );
    emit(cli, &report, out);
    Ok(ExitCode::SUCCESS)
}

fn cmd_distance(cli: &Cli, p1: &PathBuf, p2: &PathBuf) -> chordal_core::Result<ExitCode> {
    let (n1, d1, w1) = io::load_plant_parts(p1)?;
    let grid = make_grid(cli, n1.nvars())?;
    let plant1 = CoprimePlant::with_tolerance(n1, d1, w1, &grid, cli.bezout_tol)?;
    let (n2, d2, w2) = io::load_plant_parts(p2)?;
    if n2.nvars() != plant1.nvars() {
        return Err(Error::NvarsMismatch { left: plant1.nvars(), right: n2.nvars() });
    }
    let plant2 = CoprimePlant::with_tolerance(n2, d2, w2, &grid, cli.bezout_tol)?;
    let k = chordal_core::kappa(&plant1, &plant2, &grid)?;
    let mut out = String::new();
    let _ = writeln!(out, "kappa lower   {:.12}", k.lower);
    let _ = writeln!(out, "kappa upper   {:.12}", k.upper);
    let _ = writeln!(out, "slack         Lipschitz {:.6} x radius {:.6}", k.lipschitz, k.grid_delta);
    let _ = writeln!(out, "attained at   {}", k.argmax);
    emit(cli, &k, out);
    Ok(ExitCode::SUCCESS)
}

fn cmd_margin(
    cli: &Cli,
    plant: &PathBuf,
    controller: &PathBuf,
) -> chordal_core::Result<ExitCode> {
    let (num, den, witnesses) = io::load_plant_parts(plant)?;
    let grid = make_grid(cli, num.nvars())?;
    let p0 = CoprimePlant::with_tolerance(num, den, witnesses, &grid, cli.bezout_tol)?;
    let c = io::load_series(controller)?;
    let m = robustness::margin(&p0, &c, &grid)?;
    let mut out = String::new();
    let _ = writeln!(out, "controller sup k   in {}", m.k);
    let _ = writeln!(out, "closed loop  g     in {}", m.g);
    let _ = writeln!(out, "margin             {:.12}", m.margin);
    let _ = writeln!(out, "nominal loop       {}", m.stabilizes_nominal);
    let _ = writeln!(out, "covering radius    {:.6}", m.grid_delta);
    emit(cli, &m, out);
    Ok(ExitCode::SUCCESS)
}

fn cmd_certify(
    cli: &Cli,
    nominal: &PathBuf,
    plant: &PathBuf,
    controller: &PathBuf,
) -> chordal_core::Result<ExitCode> {
    let (num, den, witnesses) = io::load_plant_parts(nominal)?;
    let grid = make_grid(cli, num.nvars())?;
    let p0 = CoprimePlant::with_tolerance(num, den, witnesses, &grid, cli.bezout_tol)?;
    let p = load_plant(cli, plant, &grid)?;
    let c = io::load_series(controller)?;
    let cert = robustness::certify_with_refinement(&p, &p0, &c, &grid, MAX_REFINEMENT)?;
    let mut out = String::new();
    let _ = writeln!(out, "kappa              in [{:.12}, {:.12}]", cert.kappa.lower, cert.kappa.upper);
    let _ = writeln!(out, "margin             {:.12}", cert.margin.margin);
    let _ = writeln!(out, "verdict            {}", cert.verdict);
    let _ = writeln!(out, "grid refinement    x{}", cert.refinement);
    let _ = writeln!(out, "independent check  {}", cert.independent_check);
    emit(cli, &cert, out);
    Ok(match cert.verdict {
        Verdict::CertifiedStable => ExitCode::SUCCESS,
        Verdict::NotCertified => ExitCode::from(EXIT_NOT_CERTIFIED),
    })
}

fn check_alpha(alpha: f64) -> chordal_core::Result<()> {
    if alpha.is_finite() && alpha.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { alpha })
    }
}

fn parse_range(range: &str) -> chordal_core::Result<Vec<f64>> {
    let bad = |msg: &str| Error::Parse { path: format!("--range {range}"), message: msg.into() };
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(bad("expected start:stop:step"));
    };
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(&format!("{s:?}: {e}")));
    let (start, stop, step) = (parse(start)?, parse(stop)?, parse(step)?);
    if !(step.is_finite() && step != 0.0) {
        return Err(bad("step must be finite and nonzero"));
    }
    if (stop - start) * step < 0.0 {
        return Err(bad("step runs away from stop"));
    }
    let mut alphas = Vec::new();
    let slack = step.abs() * 1e-9;
    let mut k = 0u32;
    loop {
        let v = start + f64::from(k) * step;
        if (step > 0.0 && v > stop + slack) || (step < 0.0 && v < stop - slack) {
            break;
        }
        check_alpha(v)?;
        alphas.push(v);
        k += 1;
    }
    Ok(alphas)
}

fn format_family_table(report: &ExampleReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:>8}  {:>14}  {:>14}  {:>14}  {:>14}  {:>16}  {:>6}  {:>12}",
        "alpha", "kappa lower", "kappa upper", "2/sqrt(3)|a|", "margin", "verdict", "grid", "direct check"
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{:>8.4}  {:>14.9}  {:>14.9}  {:>14.9}  {:>14.9}  {:>16}  {:>6}  {:>12}",
            row.alpha,
            row.kappa_lower,
            row.kappa_upper,
            row.distance_bound,
            row.margin,
            row.verdict.to_string(),
            format!("x{}", row.refinement),
            row.independent_check.to_string(),
        );
    }
    let _ = writeln!(
        out,
        "closed-form guarantee: certified for |alpha| < {:.9} (= 1/(4 sqrt(3)))",
        report.guaranteed_threshold
    );
    let _ = writeln!(out, "base covering radius {:.6}", report.grid_delta);
    out
}

fn cmd_family_sweep(cli: &Cli, alphas: &[f64]) -> chordal_core::Result<ExitCode> {
    let grid = make_grid(cli, 2)?;
    let report = robustness::example_sweep(alphas, &grid, MAX_REFINEMENT)?;
    let human = format_family_table(&report);
    emit(cli, &report, human);
    Ok(ExitCode::SUCCESS)
}

fn cmd_test_theorem(cli: &Cli, trials: usize, seed: u64) -> chordal_core::Result<ExitCode> {
    let grid = make_grid(cli, 2)?;
    let r = robustness::empirical_soundness(trials, seed, &grid)?;
    let mut out = String::new();
    let _ = writeln!(out, "trials                    {}", r.trials);
    let _ = writeln!(out, "seed                      {}", r.seed);
    let _ = writeln!(out, "margin                    {:.12}", r.margin);
    let _ = writeln!(out, "certified & stable        {}", r.certified_stable);
    let _ = writeln!(out, "certified & NOT stable    {}   (soundness violations)", r.certified_not_stable);
    let _ = writeln!(out, "certified & undecided     {}", r.certified_undecided);
    let _ = writeln!(out, "uncertified & stable      {}", r.uncertified_stable);
    let _ = writeln!(out, "uncertified & unstable    {}", r.uncertified_not_stable);
    let _ = writeln!(out, "uncertified & undecided   {}", r.uncertified_undecided);
    let _ = writeln!(out, "construction failures     {}", r.construction_failures);
    let ok = r.certified_not_stable == 0;
    let _ = writeln!(out, "result                    {}", if ok { "sound" } else { "VIOLATED" });
    emit(cli, &r, out);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NOT_CERTIFIED) })
}
