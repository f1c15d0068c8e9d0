//! `hgs`: verification suites and experiments for sampling on the Heisenberg
//! group.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! usage or configuration error.

mod config;
mod report;

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use hgs_core::canonical::{canonical_field, CanonicalField};
use hgs_core::fieldcheck::{
    gabor_field_verdict_with, orthogonality_residual, theta_delta_report, ModulationSum,
};
use hgs_core::grids::lambda_grid;
use hgs_core::sampling::{
    interpolation_verdict, isometry_ratio, onb_gram_check, random_coefficients, reconstruct,
    relative_l2_error, sample_on_lattice, synthesize,
};
use hgs_core::sinc::{sinc_compare, strip_points, SincReport};
use hgs_core::testfield::smooth_test_fields;
use hgs_core::{FieldSample, LatticeBounds, QuasiLatticeSpec, SpectralSet};

use config::{CommonArgs, ConfigError, Defaults, Resolved};
use report::{Check, Report};

#[derive(Parser, Debug)]
#[command(
    name = "hgs",
    version,
    about = "Sampling and interpolation on the Heisenberg group"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify the canonical indicator field: Gabor field, orthogonality
    /// condition, Theta criterion, Gram matrix and density verdict.
    VerifyCanonical {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate the sinc-type kernel in closed form and by quadrature.
    Sinc {
        /// A point `x,y,z`; may be repeated.
        #[arg(long = "point", allow_hyphen_values = true)]
        points: Vec<String>,
        /// Add this many seeded random points from the strip |x| < 1.
        #[arg(long)]
        random: Option<usize>,
        /// CSV file with columns x,y,z.
        #[arg(long)]
        points_file: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sample a seeded function on the lattice and reconstruct it.
    Sample {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Density verdict for a spectral set and lattice spacings.
    Density {
        /// Spectral set `a,b[;a,b...]`.
        #[arg(allow_hyphen_values = true)]
        spectrum: String,
        alpha: f64,
        beta: f64,
        /// Print the verdict as JSON.
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Config(String),
    Checks,
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<hgs_core::Error> for Failure {
    fn from(e: hgs_core::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::VerifyCanonical { common } => verify_canonical(common.resolve(Defaults {
            bounds: LatticeBounds::new(3, 3, 3).expect("valid"),
            lambda_min: hgs_core::grids::DEFAULT_LAMBDA_MIN,
            tol: 1e-3,
            lambda_nodes: nodes_for,
        })?),
        Command::Sinc {
            points,
            random,
            points_file,
            common,
        } => {
            let cfg = common.resolve(Defaults {
                bounds: LatticeBounds::DEFAULT,
                lambda_min: 1e-12,
                tol: 1e-6,
                lambda_nodes: |_| 4096,
            })?;
            sinc(cfg, &points, random, points_file)
        }
        Command::Sample { common } => sample(common.resolve(Defaults {
            bounds: LatticeBounds::DEFAULT,
            lambda_min: hgs_core::grids::DEFAULT_LAMBDA_MIN,
            tol: 1e-2,
            lambda_nodes: nodes_for,
        })?),
        Command::Density {
            spectrum,
            alpha,
            beta,
            json,
        } => density(&spectrum, alpha, beta, json),
    }
}

/// Enough cells that `2m + 1` nodes fit in every unit of λ, so on-grid
/// `m`-sums do not alias.
fn nodes_for(bounds: LatticeBounds) -> usize {
    (4 * (bounds.m as usize + 1)).next_power_of_two().max(128)
}

fn init_threads(cfg: &Resolved) -> Result<(), Failure> {
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("cannot start {n} worker threads: {e}")))?;
    }
    Ok(())
}

fn canonical_sample(cfg: &Resolved, nodes: usize) -> Result<FieldSample, Failure> {
    let grid = lambda_grid(&cfg.spectrum, nodes, cfg.lambda_min)?;
    Ok(canonical_field(&grid)?)
}

fn verify_canonical(cfg: Resolved) -> Result<(), Failure> {
    init_threads(&cfg)?;
    let spec = cfg.spec();
    let e = canonical_sample(&cfg, cfg.lambda_nodes)?;
    let mut checks = Vec::new();

    let gabor = gabor_field_verdict_with(&e, spec, 1e-12)?;
    checks.push(
        Check::at_most("gabor field residual", gabor.worst_residual, gabor.tol).and(gabor.pass),
    );

    let g = CanonicalField::on(cfg.spectrum.clone());
    let tests = smooth_test_fields(&e, cfg.seed, 4);
    let mut orth: f64 = 0.0;
    for j in 0..16 {
        let lam = (j as f64 + FRAC_1_SQRT_2) / 16.0;
        for f in &tests {
            orth =
                orth.max(orthogonality_residual(&g, f, spec, lam, 8, ModulationSum::Exact)?.norm());
        }
    }
    checks.push(Check::at_most("orthogonality residual", orth, 1e-10));

    let theta = theta_delta_report(&g, spec, 32, 32, 4)?;
    checks.push(Check::at_most("theta_0 deviation", theta.dev_zero, 1e-10));
    checks.push(Check::at_most("theta_k deviation", theta.dev_off, 1e-10));

    let gram = onb_gram_check(&e, spec, cfg.bounds, cfg.tol)?;
    checks.push(Check::at_most(
        "gram deviation",
        gram.max_deviation,
        cfg.tol,
    ));

    let density = interpolation_verdict(&cfg.spectrum, spec);
    checks.push(Check::flag("interpolation verdict", density.interpolation));

    let report = Report::new("verify-canonical", &cfg, checks)
        .detail("lambda_nodes_used", e.grid().len())
        .detail("density", density)
        .detail("theta", theta)
        .detail("gram", gram);
    report.emit(&cfg)?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

#[derive(Deserialize)]
struct PointRecord {
    x: f64,
    y: f64,
    z: f64,
}

fn parse_point(text: &str) -> Result<(f64, f64, f64), Failure> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Config(format!("bad point `{text}`, expected x,y,z")))?;
    match v[..] {
        [x, y, z] => Ok((x, y, z)),
        _ => Err(Failure::Config(format!(
            "bad point `{text}`, expected x,y,z"
        ))),
    }
}

fn read_points(path: &PathBuf) -> Result<Vec<(f64, f64, f64)>, Failure> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Failure::Config(format!("cannot read points file {}: {e}", path.display())))?;
    reader
        .deserialize()
        .map(|r| {
            r.map(|p: PointRecord| (p.x, p.y, p.z))
                .map_err(|e| Failure::Config(format!("bad points file {}: {e}", path.display())))
        })
        .collect()
}

#[derive(Serialize)]
struct SincCsvRow {
    x: f64,
    y: f64,
    z: f64,
    printed_s0_re: f64,
    printed_s0_im: f64,
    printed_s1_re: f64,
    printed_s1_im: f64,
    corrected_s0_re: f64,
    corrected_s0_im: f64,
    corrected_s1_re: f64,
    corrected_s1_im: f64,
    quadrature_s0_re: f64,
    quadrature_s0_im: f64,
    quadrature_s1_re: f64,
    quadrature_s1_im: f64,
    quadrature_s_re: f64,
    quadrature_s_im: f64,
    dev_s0_printed: f64,
    dev_s0_corrected: f64,
    dev_s1_printed: f64,
    dev_s1_corrected: f64,
}

fn sinc_csv(report: &SincReport) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &report.rows {
        w.serialize(SincCsvRow {
            x: r.x,
            y: r.y,
            z: r.z,
            printed_s0_re: r.printed.s0.re,
            printed_s0_im: r.printed.s0.im,
            printed_s1_re: r.printed.s1.re,
            printed_s1_im: r.printed.s1.im,
            corrected_s0_re: r.corrected.s0.re,
            corrected_s0_im: r.corrected.s0.im,
            corrected_s1_re: r.corrected.s1.re,
            corrected_s1_im: r.corrected.s1.im,
            quadrature_s0_re: r.quadrature.s0.re,
            quadrature_s0_im: r.quadrature.s0.im,
            quadrature_s1_re: r.quadrature.s1.re,
            quadrature_s1_im: r.quadrature.s1.im,
            quadrature_s_re: r.quadrature.s.re,
            quadrature_s_im: r.quadrature.s.im,
            dev_s0_printed: r.dev_s0_printed,
            dev_s0_corrected: r.dev_s0_corrected,
            dev_s1_printed: r.dev_s1_printed,
            dev_s1_corrected: r.dev_s1_corrected,
        })
        .map_err(|e| Failure::Config(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Config(e.to_string()))
}

fn sinc(
    cfg: Resolved,
    points: &[String],
    random: Option<usize>,
    points_file: Option<PathBuf>,
) -> Result<(), Failure> {
    init_threads(&cfg)?;
    let mut pts: Vec<(f64, f64, f64)> = points
        .iter()
        .map(|p| parse_point(p))
        .collect::<Result<_, _>>()?;
    if let Some(path) = &points_file {
        pts.extend(read_points(path)?);
    }
    if let Some(n) = random {
        pts.extend(strip_points(n, cfg.seed));
    }
    if pts.is_empty() {
        return Err(Failure::Config(
            "no points: use --point, --random or --points-file".into(),
        ));
    }
    let field = canonical_sample(&cfg, cfg.lambda_nodes)?;
    let report = sinc_compare(&pts, &field);
    let csv = sinc_csv(&report)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &csv)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{}", String::from_utf8_lossy(&csv)),
    }
    let corrected = report.max_dev_s0_corrected.max(report.max_dev_s1_corrected);
    eprintln!(
        "{} points, {} lambda nodes: max relative deviation corrected {corrected:.3e}, printed S0 {:.3e}, printed S1 {:.3e} (eps {})",
        pts.len(),
        field.grid().len(),
        report.max_dev_s0_printed,
        report.max_dev_s1_printed,
        report.eps
    );
    Ok(())
}

#[derive(Serialize)]
struct SampleRow {
    bounds: LatticeBounds,
    lambda_nodes: usize,
    isometry_ratio: f64,
    reconstruction_error: f64,
    smooth_isometry_ratio: f64,
    smooth_reconstruction_error: f64,
}

/// Coefficients of the synthesized function live on this box.
const SYNTHESIS_BOUNDS: LatticeBounds = LatticeBounds { k: 2, l: 8, m: 4 };

/// Isometry ratio and relative reconstruction error for `f`.
fn round_trip(
    f: &FieldSample,
    e: &FieldSample,
    spec: QuasiLatticeSpec,
    bounds: LatticeBounds,
    c: f64,
) -> Result<(f64, f64), Failure> {
    let samples = sample_on_lattice(f, e, spec, bounds)?;
    let ratio = isometry_ratio(&samples, f.norm_sq())?;
    let rec = reconstruct(&samples, e, c)?;
    Ok((ratio, relative_l2_error(f, &rec)?))
}

fn sample_row(
    cfg: &Resolved,
    spec: QuasiLatticeSpec,
    bounds: LatticeBounds,
    nodes: usize,
) -> Result<SampleRow, Failure> {
    let e = canonical_sample(cfg, nodes)?;
    let c = interpolation_verdict(&cfg.spectrum, spec).c;
    let phi = synthesize(&random_coefficients(spec, SYNTHESIS_BOUNDS, cfg.seed), &e)?;
    let (isometry_ratio, reconstruction_error) = round_trip(&phi, &e, spec, bounds, c)?;
    let smooth = smooth_test_fields(&e, cfg.seed, 1).remove(0);
    let (smooth_isometry_ratio, smooth_reconstruction_error) =
        round_trip(&smooth, &e, spec, bounds, c)?;
    Ok(SampleRow {
        bounds,
        lambda_nodes: nodes,
        isometry_ratio,
        reconstruction_error,
        smooth_isometry_ratio,
        smooth_reconstruction_error,
    })
}

fn sample(cfg: Resolved) -> Result<(), Failure> {
    init_threads(&cfg)?;
    let spec = cfg.spec();
    let rows = vec![
        sample_row(&cfg, spec, cfg.bounds, cfg.lambda_nodes)?,
        sample_row(&cfg, spec, cfg.bounds.doubled(), 2 * cfg.lambda_nodes)?,
    ];
    let density = interpolation_verdict(&cfg.spectrum, spec);
    let checks = vec![
        Check::within("isometry ratio", rows[0].isometry_ratio, density.c, cfg.tol),
        Check::at_most("reconstruction error", rows[0].reconstruction_error, 5e-2),
        Check::flag("interpolation", density.interpolation),
    ];
    let report = Report::new("sample", &cfg, checks)
        .detail("synthesis_bounds", SYNTHESIS_BOUNDS)
        .detail("density", density)
        .detail("doubling", &rows);
    report.emit_with(&cfg, |out| {
        out.push(String::new());
        out.push(format!(
            "{:<12} {:>8} {:>14} {:>12} {:>14} {:>12}",
            "bounds", "nodes", "ratio", "error", "smooth ratio", "smooth error"
        ));
        for r in &rows {
            out.push(format!(
                "{:<12} {:>8} {:>14.10} {:>12.3e} {:>14.10} {:>12.3e}",
                format!("{},{},{}", r.bounds.k, r.bounds.l, r.bounds.m),
                r.lambda_nodes,
                r.isometry_ratio,
                r.reconstruction_error,
                r.smooth_isometry_ratio,
                r.smooth_reconstruction_error
            ));
        }
    })?;
    Ok(())
}

fn density(spectrum: &str, alpha: f64, beta: f64, json: bool) -> Result<(), Failure> {
    let set = SpectralSet::parse(spectrum)?;
    let spec = QuasiLatticeSpec::new(alpha, beta)?;
    let v = interpolation_verdict(&set, spec);
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&v).expect("verdict serializes")
        );
    } else {
        let rows = [
            ("mu(E)", v.mu_e.to_string()),
            ("1/(alpha beta)", v.target.to_string()),
            ("alpha beta <= 1", v.ab_leq_one.to_string()),
            ("E within window", v.e_in_window.to_string()),
            ("non-integer lattice", v.non_integer_lattice.to_string()),
            ("interpolation", v.interpolation.to_string()),
        ];
        for (k, val) in rows {
            println!("{k:<20} {val}");
        }
    }
    if v.interpolation {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
