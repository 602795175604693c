//! Command-line front end.
//!
//! Sweep commands print one CSV table to stdout followed by a single-line
//! JSON summary (tagged with `schema_version`), so output is both
//! grep-friendly and machine-readable. Exit codes: 0 success, 1 solver
//! error, 2 usage error.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::annulus;
use crate::halfline::{splitting_sweep, HalflineKind};
use crate::predictions::{predict, r_tilde, FormulaId};
use crate::shooting::oracle_sweep;
use crate::strip;
use crate::svg::{Plot, Series};
use crate::tridiag::richardson_eigenvalue;
use crate::types::{make_fiber_problem, CountResult, Geometry, ProblemVariant};
use crate::{Error, Result};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "band-counter",
    version,
    about = "Band functions of magnetic fiber operators on a strip and an annulus"
)]
struct Cli {
    /// Number of worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    /// Dirichlet at the lower endpoint, Neumann at the upper.
    Dn,
    /// Neumann at both endpoints.
    Nn,
}

impl From<VariantArg> for ProblemVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Dn => ProblemVariant::MixedDN,
            VariantArg::Nn => ProblemVariant::PureNN,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormulaArg {
    StripDn,
    StripNn,
    AnnulusDn,
    HalflineNeu,
    HalflineDir,
}

impl From<FormulaArg> for FormulaId {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::StripDn => FormulaId::StripDN,
            FormulaArg::StripNn => FormulaId::StripNN,
            FormulaArg::AnnulusDn => FormulaId::AnnulusDN,
            FormulaArg::HalflineNeu => FormulaId::HalflineNeuSplit,
            FormulaArg::HalflineDir => FormulaId::HalflineDirSplit,
        }
    }
}

#[derive(Args, Debug)]
struct PlotArg {
    /// Write an SVG plot of λ₀/h over the scanned momenta to this file.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count strip fibers with ground value below the Landau level h.
    StripCount {
        /// Strip height L.
        #[arg(long)]
        l: f64,
        /// Semiclassical parameter (Landau level).
        #[arg(long)]
        h: f64,
        #[arg(long, value_enum, default_value = "dn")]
        variant: VariantArg,
        /// Comparator tolerance band, relative to h.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        plot: PlotArg,
    },
    /// Count annulus fibers with ground value below the Landau level h.
    AnnulusCount {
        /// Inner radius R in (0, 1); outer radius is 1.
        #[arg(long)]
        r_inner: f64,
        #[arg(long)]
        h: f64,
        #[arg(long, value_enum, default_value = "dn")]
        variant: VariantArg,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        plot: PlotArg,
    },
    /// Print λ₀ and λ₁ per momentum over the rough window, without counting.
    BandScan {
        /// Strip height; mutually exclusive with --r-inner.
        #[arg(long, conflicts_with = "r_inner")]
        l: Option<f64>,
        /// Annulus inner radius; mutually exclusive with --l.
        #[arg(long)]
        r_inner: Option<f64>,
        #[arg(long)]
        h: f64,
        #[arg(long, value_enum, default_value = "dn")]
        variant: VariantArg,
        #[command(flatten)]
        plot: PlotArg,
    },
    /// Half-line splitting μ₀ − h against the exponential asymptotics.
    HalflineSweep {
        #[arg(long, value_enum, default_value = "neumann")]
        kind: KindArg,
        #[arg(long, default_value_t = 0.01)]
        h: f64,
        /// ξ/√h sample points, comma separated; must be ≤ −2 (localized regime).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-2.0,-2.5,-3.0,-3.5,-4.0")]
        ratios: Vec<f64>,
    },
    /// Richardson convergence table for one fiber's ground value.
    Convergence {
        #[arg(long, conflicts_with = "r_inner")]
        l: Option<f64>,
        #[arg(long)]
        r_inner: Option<f64>,
        #[arg(long)]
        h: f64,
        /// Angular momentum of the fiber.
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, value_enum, default_value = "dn")]
        variant: VariantArg,
        /// Number of doubling levels.
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Cross-check the Sturm counter against the Prüfer shooting oracle on
    /// random fibers.
    OracleCheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 60)]
        cases: usize,
    },
    /// Print the closed-form prediction for a counting or splitting law.
    Predict {
        #[arg(long, value_enum)]
        formula: FormulaArg,
        #[arg(long, conflicts_with = "r_inner")]
        l: Option<f64>,
        #[arg(long)]
        r_inner: Option<f64>,
        #[arg(long)]
        h: f64,
    },
}

/// Parses `std::env::args` and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints its own help/version output with success status
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        // ignore the error if a global pool already exists (e.g. in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match command {
        Command::StripCount { l, h, variant, tol, plot } => {
            let result = strip::count_strip(l, h, variant.into(), tol)?;
            emit_count(&mut out, &result, "xi", h)?;
            if let Some(path) = plot.plot {
                write_plot(&path, &count_plot(&result, "ξ = mh", h, &[]))?;
            }
        }
        Command::AnnulusCount { r_inner, h, variant, tol, plot } => {
            let result = annulus::count_annulus_variant(r_inner, h, variant.into(), tol)?;
            emit_count(&mut out, &result, "two_mh", 2.0 * h)?;
            if let Some(path) = plot.plot {
                let marks = [r_tilde(r_inner).powi(2)];
                write_plot(&path, &count_plot(&result, "2mh = r*²", 2.0 * h, &marks))?;
            }
        }
        Command::BandScan { l, r_inner, h, variant, plot } => {
            let variant: ProblemVariant = variant.into();
            let (geometry, range, x_scale, marks) = scan_setup(l, r_inner, h)?;
            writeln!(out, "m,x,lambda0,lambda1,lambda0_over_h")?;
            let rows: Vec<(i64, f64, f64)> = (range.0..=range.1)
                .map(|m| -> Result<_> {
                    let (l0, l1) = match geometry {
                        Geometry::Strip { l } => (
                            strip::band0(l, m, h, variant)?,
                            strip::second_band_floor(l, m, h, variant)?,
                        ),
                        Geometry::Annulus { r_inner } => (
                            annulus::band0_annulus(r_inner, m, h, variant)?,
                            annulus::second_band_annulus(r_inner, m, h, variant)?,
                        ),
                    };
                    Ok((m, l0, l1))
                })
                .collect::<Result<_>>()?;
            for &(m, l0, l1) in &rows {
                writeln!(out, "{m},{},{l0},{l1},{}", m as f64 * x_scale, l0 / h)?;
            }
            let summary = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "band-scan",
                "geometry": geometry,
                "h": h,
                "m_window": range,
                "rows": rows.len(),
                "min_lambda0_over_h": rows.iter().map(|r| r.1 / h).fold(f64::INFINITY, f64::min),
                "min_lambda1_over_h": rows.iter().map(|r| r.2 / h).fold(f64::INFINITY, f64::min),
            });
            writeln!(out, "{summary}")?;
            if let Some(path) = plot.plot {
                let mut p = Plot {
                    title: "band functions".into(),
                    x_label: "momentum coordinate".into(),
                    y_label: "λ/h".into(),
                    hlines: vec![1.0],
                    vlines: marks,
                    series: vec![
                        Series {
                            label: "λ₀/h".into(),
                            points: rows.iter().map(|r| (r.0 as f64 * x_scale, r.1 / h)).collect(),
                            color: "steelblue".into(),
                        },
                        Series {
                            label: "λ₁/h".into(),
                            points: rows.iter().map(|r| (r.0 as f64 * x_scale, r.2 / h)).collect(),
                            color: "firebrick".into(),
                        },
                    ],
                };
                p.series[1].points.retain(|p| p.1.is_finite());
                write_plot(&path, &p)?;
            }
        }
        Command::HalflineSweep { kind, h, ratios } => {
            let kind = match kind {
                KindArg::Neumann => HalflineKind::Neu,
                KindArg::Dirichlet => HalflineKind::Dir,
            };
            let results = splitting_sweep(kind, &ratios, h)?;
            writeln!(out, "ratio,xi,mu0,splitting,predicted_splitting,relative_error")?;
            for r in &results {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    r.xi / h.sqrt(),
                    r.xi,
                    r.mu0,
                    r.splitting,
                    r.predicted_splitting.map_or(String::from(""), |v| v.to_string()),
                    r.relative_error.map_or(String::from(""), |v| v.to_string()),
                )?;
            }
            let worst = results
                .iter()
                .filter_map(|r| r.relative_error)
                .fold(0.0f64, f64::max);
            let summary = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "halfline-sweep",
                "kind": kind,
                "h": h,
                "rows": results.len(),
                "max_relative_error": worst,
            });
            writeln!(out, "{summary}")?;
        }
        Command::Convergence { l, r_inner, h, m, variant, levels } => {
            let (geometry, _, _, _) = scan_setup(l, r_inner, h)?;
            let problem = make_fiber_problem(geometry, m, h, variant.into())?;
            let mut n = crate::tridiag::default_grid_n(&problem, &crate::tridiag::SolverConfig::default());
            writeln!(out, "n,lambda0,error_estimate")?;
            let mut rows = Vec::new();
            for _ in 0..levels.max(1) {
                let (lambda, err) = richardson_eigenvalue(&problem, 0, n)?;
                writeln!(out, "{n},{lambda},{err}")?;
                rows.push((n, lambda, err));
                n = 2 * n + 1;
            }
            // observed order from successive Richardson error estimates
            let order = if rows.len() >= 2 && rows[rows.len() - 1].2 > 0.0 {
                Some((rows[rows.len() - 2].2 / rows[rows.len() - 1].2).log2())
            } else {
                None
            };
            let summary = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "convergence",
                "geometry": geometry,
                "h": h,
                "m": m,
                "lambda0": rows.last().map(|r| r.1),
                "observed_order": order,
            });
            writeln!(out, "{summary}")?;
        }
        Command::OracleCheck { seed, cases } => {
            let results = oracle_sweep(seed, cases)?;
            writeln!(out, "case,threshold_over_h,sturm_count,shoot_count,lambda0_sturm,lambda0_shoot,ambiguous,agree")?;
            let mut failures = 0usize;
            for (i, c) in results.iter().enumerate() {
                let agree = c.counts_agree() && c.lambda0_agree();
                if !agree {
                    failures += 1;
                }
                writeln!(
                    out,
                    "{i},{},{},{},{},{},{},{}",
                    c.threshold / c.problem.h,
                    c.sturm_count,
                    c.shoot_count,
                    c.lambda0_sturm,
                    c.lambda0_shoot,
                    c.threshold_ambiguous,
                    agree,
                )?;
            }
            let summary = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "oracle-check",
                "seed": seed,
                "cases": results.len(),
                "failures": failures,
            });
            writeln!(out, "{summary}")?;
            if failures > 0 {
                return Err(Error::NoConvergence(format!(
                    "{failures} of {} oracle cases disagree",
                    results.len()
                )));
            }
        }
        Command::Predict { formula, l, r_inner, h } => {
            let (geometry, _, _, _) = scan_setup(l, r_inner, h)?;
            let report = predict(formula.into(), geometry, h)?;
            let summary = json!({
                "schema_version": SCHEMA_VERSION,
                "command": "predict",
                "report": report,
            });
            writeln!(out, "{summary}")?;
        }
    }
    Ok(())
}

/// Resolves the `--l`/`--r-inner` pair to a geometry and its scan metadata:
/// rough momentum window, x-axis scale per unit of m, and plot markers.
fn scan_setup(l: Option<f64>, r_inner: Option<f64>, h: f64) -> Result<(Geometry, (i64, i64), f64, Vec<f64>)> {
    match (l, r_inner) {
        (Some(l), None) => Ok((Geometry::Strip { l }, strip::scan_range(l, h)?, h, vec![0.0, -l])),
        (None, Some(r)) => Ok((
            Geometry::Annulus { r_inner: r },
            annulus::scan_range_annulus(r, h)?,
            2.0 * h,
            vec![r * r, 1.0, r_tilde(r).powi(2)],
        )),
        _ => Err(Error::InvalidParameter(
            "exactly one of --l (strip) or --r-inner (annulus) is required".into(),
        )),
    }
}

fn emit_count(out: &mut impl std::io::Write, result: &CountResult, x_name: &str, x_scale: f64) -> Result<()> {
    writeln!(out, "m,{x_name},lambda0,lambda0_over_h,below,ambiguous")?;
    for (&m, &lambda) in &result.ground_values {
        let label = result.labels.get(&m).copied().unwrap_or(0);
        writeln!(
            out,
            "{m},{},{lambda},{},{},{}",
            m as f64 * x_scale,
            lambda / result.h,
            label == -1,
            label == 0,
        )?;
    }
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "command": "count",
        "geometry": result.geometry,
        "h": result.h,
        "m_window": result.m_window,
        "count": result.count,
        "predicted": result.predicted,
        "ratio": result.ratio,
        "ambiguous": result.ambiguous_m.len(),
    });
    writeln!(out, "{summary}")?;
    Ok(())
}

fn count_plot(result: &CountResult, x_label: &str, x_scale: f64, extra_vlines: &[f64]) -> Plot {
    Plot {
        title: format!("ground band, h = {}", result.h),
        x_label: x_label.to_string(),
        y_label: "λ₀/h".to_string(),
        hlines: vec![1.0],
        vlines: extra_vlines.to_vec(),
        series: vec![Series {
            label: "λ₀/h".to_string(),
            points: result
                .ground_values
                .iter()
                .map(|(&m, &v)| (m as f64 * x_scale, v / result.h))
                .collect(),
            color: "steelblue".to_string(),
        }],
    }
}

fn write_plot(path: &std::path::Path, plot: &Plot) -> Result<()> {
    std::fs::write(path, plot.render())?;
    Ok(())
}
