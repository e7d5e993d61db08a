//! Subcommand implementations. Each returns the text to print plus an exit
//! status; `main` only does argument parsing and process plumbing.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use spa_witness::hakye::{self, HaKyeParams};
use spa_witness::spa::{classify_value, EIGEN_COMPARE_TOL, SCAN_TOL};
use spa_witness::states::random_separable_ensemble;
use spa_witness::witness::product_infimum;
use spa_witness::{
    corollary1_condition, ppt_check, random_density, DensityOperator, HermitianOperator,
    PptVerdict, Provenance, SeesawConfig, SpaResult,
};
use thiserror::Error;

use crate::io::{load_operator, save_operator, IoError, Metadata};
use crate::report::{unix_timestamp, write_csv, write_json_array};
use crate::scan::{self, Axis, GridError, GridSpec, ScanRow, SCAN_COLUMNS};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "SPA_WITNESS_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Clean = 0,
    InputError = 1,
    NumericFailure = 2,
    ViolationFound = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{0}")]
    Input(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Numeric(_) => Status::NumericFailure,
            _ => Status::InputError,
        }
    }
}

impl From<spa_witness::Error> for CliError {
    fn from(e: spa_witness::Error) -> Self {
        use spa_witness::Error as E;
        match e {
            E::ConvergenceFailure { .. } | E::ZeroTrace { .. } | E::NonRealResult { .. } => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub status: Status,
}

pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let from_env = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok());
    let n = threads.or(from_env).unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Input(format!("cannot build worker pool: {e}")))
}

fn write_or_return(text: String, out: Option<&Path>) -> Result<String, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|source| IoError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Ok(format!("wrote {}\n", path.display()))
        }
        None => Ok(text),
    }
}

// ---------------------------------------------------------------- analyze

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Witness operator file (JSON).
    pub witness: PathBuf,
    /// Eigenvalue comparison tolerance.
    #[arg(long, default_value_t = EIGEN_COMPARE_TOL)]
    pub tol: f64,
    /// Treat the witness as optimal and indecomposable (not checked).
    #[arg(long)]
    pub assert_onew: bool,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Omit the timestamp field.
    #[arg(long)]
    pub reproducible: bool,
}

#[derive(Debug, Serialize)]
pub struct SpaSummary {
    pub shift: f64,
    pub min_pt_eigenvalue: f64,
    pub min_pt_eigenvalue_normalized: f64,
    pub status: &'static str,
    pub conclusive_separability: bool,
}

impl SpaSummary {
    fn new(spa: &SpaResult, ppt: &PptVerdict) -> Self {
        Self {
            shift: spa.shift,
            min_pt_eigenvalue: ppt.unnormalized_min_pt_eigenvalue,
            min_pt_eigenvalue_normalized: ppt.min_pt_eigenvalue,
            status: ppt.status.label(),
            conclusive_separability: ppt.conclusive_separability,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub input: String,
    #[serde(rename = "dA")]
    pub d_a: usize,
    #[serde(rename = "dB")]
    pub d_b: usize,
    #[serde(rename = "lambda0_W")]
    pub lambda0_w: f64,
    #[serde(rename = "lambda0_WGamma")]
    pub lambda0_w_gamma: f64,
    pub gap: f64,
    pub condition_holds: bool,
    pub npt_side: Option<&'static str>,
    #[serde(rename = "spa_W")]
    pub spa_w: SpaSummary,
    #[serde(rename = "spa_WGamma")]
    pub spa_w_gamma: SpaSummary,
    pub asserted_onew: bool,
    pub conclusion: &'static str,
    pub assertion_note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labeling_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

/// Labeling note for inputs equal to the reference family member.
fn labeling_note_for(op: &HermitianOperator) -> Option<String> {
    let p = HaKyeParams::reference();
    let reference = hakye::hakye_witness(&p).ok()?;
    let diff = op.max_abs_diff(&reference).ok()?;
    (diff <= 1e-9)
        .then(|| hakye::reference_labeling_note(&p))
        .flatten()
}

pub fn analyze_report(
    op: &HermitianOperator,
    input: &str,
    args: &AnalyzeArgs,
) -> Result<AnalyzeReport, CliError> {
    let report = corollary1_condition(op, args.assert_onew, args.tol)?;
    let v = &report.verdict;
    Ok(AnalyzeReport {
        input: input.to_string(),
        d_a: op.dims().a(),
        d_b: op.dims().b(),
        lambda0_w: v.lambda0,
        lambda0_w_gamma: v.lambda0_pt,
        gap: report.gap,
        condition_holds: v.condition_holds,
        npt_side: report.npt_side.map(|s| s.label()),
        spa_w: SpaSummary::new(&report.spa_w, &report.spa_w_ppt),
        spa_w_gamma: SpaSummary::new(&report.spa_w_pt, &report.spa_w_pt_ppt),
        asserted_onew: args.assert_onew,
        conclusion: v.conclusion.label(),
        assertion_note: v.assertion_note.clone(),
        labeling_note: labeling_note_for(op),
        generated_unix: (!args.reproducible).then(unix_timestamp),
    })
}

fn analyze_text(r: &AnalyzeReport) -> String {
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k:<32} {v}\n"));
    line("input:", r.input.clone());
    line("dims:", format!("{}x{}", r.d_a, r.d_b));
    line("lambda0_W:", format!("{:.10}", r.lambda0_w));
    line("lambda0_WGamma:", format!("{:.10}", r.lambda0_w_gamma));
    line("gap:", format!("{:.10}", r.gap));
    line("condition_holds:", r.condition_holds.to_string());
    line("npt_side:", r.npt_side.unwrap_or("none").to_string());
    for (name, spa) in [("SPA(W)", &r.spa_w), ("SPA(W^Gamma)", &r.spa_w_gamma)] {
        line(&format!("{name} shift:"), format!("{:.10}", spa.shift));
        line(
            &format!("{name} PT min eigenvalue:"),
            format!("{:.10} ({})", spa.min_pt_eigenvalue, spa.status),
        );
    }
    line("asserted_onew:", r.asserted_onew.to_string());
    line("conclusion:", r.conclusion.to_string());
    line("note:", r.assertion_note.clone());
    if let Some(n) = &r.labeling_note {
        line("labeling_note:", n.clone());
    }
    if let Some(t) = r.generated_unix {
        line("generated_unix:", t.to_string());
    }
    s
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let op = load_operator(&args.witness)?;
    let report = analyze_report(&op, &args.witness.display().to_string(), args)?;
    let stdout = if args.json {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        analyze_text(&report)
    };
    let status = if report.conclusion == spa_witness::Conclusion::Violates.label() {
        Status::ViolationFound
    } else {
        Status::Clean
    };
    Ok(Outcome { stdout, status })
}

// ---------------------------------------------------------------- hakye

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct HakyeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Start from a = 4/3, b = 2/3, c = 0 (cos-scaled) and theta = pi/12.
    #[arg(long)]
    pub reference: bool,
    /// Multiply a, b, c by cos(theta) at every point.
    #[arg(long)]
    pub cos_scaled: bool,
    /// Grid axis key=start:stop:N (keys a, b, c, theta); repeatable.
    #[arg(long, value_name = "KEY=START:STOP:N")]
    pub scan: Vec<String>,
    /// Report file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Save the operator of a single-point run as an operator file.
    #[arg(long)]
    pub save_operator: Option<PathBuf>,
    /// Treat every grid point as an optimal indecomposable witness.
    #[arg(long)]
    pub assert_onew: bool,
    #[arg(long, default_value_t = SCAN_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub reproducible: bool,
    /// Worker threads (overrides SPA_WITNESS_THREADS).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl HakyeArgs {
    pub fn grid(&self) -> Result<GridSpec, CliError> {
        let axes = self
            .scan
            .iter()
            .map(|s| Axis::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let mut base = [self.a, self.b, self.c, self.theta];
        let mut cos_scaled = self.cos_scaled;
        if self.reference {
            let defaults = [4.0 / 3.0, 2.0 / 3.0, 0.0, std::f64::consts::PI / 12.0];
            for (slot, d) in base.iter_mut().zip(defaults) {
                slot.get_or_insert(d);
            }
            cos_scaled = true;
        }
        Ok(GridSpec {
            base,
            axes,
            cos_scaled,
        })
    }
}

pub fn render_scan(
    rows: &[ScanRow],
    format: Format,
    reproducible: bool,
) -> Result<String, CliError> {
    match format {
        Format::Csv => write_csv("hakye-scan", &SCAN_COLUMNS, rows, reproducible)
            .map_err(|e| CliError::Input(e.to_string())),
        Format::Json => Ok(write_json_array(rows)),
    }
}

pub fn cmd_hakye(args: &HakyeArgs) -> Result<Outcome, CliError> {
    let points = args.grid()?.points()?;
    if let Some(path) = &args.save_operator {
        let [p] = points.as_slice() else {
            return Err(CliError::Input(
                "--save-operator needs a single parameter point".into(),
            ));
        };
        let op = hakye::hakye_witness(p)?;
        let meta = Metadata {
            label: Some(format!(
                "W[a={},b={},c={};theta={}]",
                p.a, p.b, p.c, p.theta
            )),
            provenance: Some("hakye".into()),
        };
        save_operator(&op, Some(meta), path)?;
    }
    let pool = thread_pool(args.threads)?;
    let rows = scan::run_scan(&points, args.assert_onew, args.tol, &pool);
    let text = render_scan(&rows, args.format, args.reproducible)?;
    let stdout = write_or_return(text, args.out.as_deref())?;

    let status = if rows.iter().any(|r| {
        r.oracle_check == scan::ORACLE_MISMATCH || r.verdict == scan::VERDICT_NUMERIC_FAILURE
    }) {
        Status::NumericFailure
    } else if rows.iter().any(|r| r.verdict == "VIOLATES") {
        Status::ViolationFound
    } else {
        Status::Clean
    };
    Ok(Outcome { stdout, status })
}

// ---------------------------------------------------------------- cmax

#[derive(Debug, Clone, Args)]
pub struct CmaxArgs {
    /// Density operator file (JSON).
    pub sigma: PathBuf,
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub reproducible: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct CmaxReport {
    pub input: String,
    pub value: f64,
    pub mu: Vec<[f64; 2]>,
    pub nu: Vec<[f64; 2]>,
    pub restarts: usize,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

fn pairs(v: &spa_witness::CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

pub fn cmd_cmax(args: &CmaxArgs) -> Result<Outcome, CliError> {
    let op = load_operator(&args.sigma)?;
    let sigma = DensityOperator::new(op, Provenance::Unknown)?;
    let cfg = SeesawConfig {
        restarts: args.restarts,
        max_iter: args.max_iter,
        tol: args.tol,
        seed: args.seed,
    };
    let pool = thread_pool(args.threads)?;
    let est = pool.install(|| product_infimum(sigma.op(), &cfg))?;
    let report = CmaxReport {
        input: args.sigma.display().to_string(),
        value: est.value,
        mu: pairs(est.argmin.mu()),
        nu: pairs(est.argmin.nu()),
        restarts: est.restarts,
        iterations: est.iterations,
        converged: est.converged,
        seed: args.seed,
        generated_unix: (!args.reproducible).then(unix_timestamp),
    };
    let stdout = if args.json {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        let fmt = |v: &[[f64; 2]]| {
            v.iter()
                .map(|[re, im]| format!("{re:+.12}{im:+.12}i"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut s = format!(
            "input:      {}\ncmax:       {}\nmu:         [{}]\nnu:         [{}]\nrestarts:   {}\niterations: {}\nconverged:  {}\nseed:       {}\n",
            report.input,
            report.value,
            fmt(&report.mu),
            fmt(&report.nu),
            report.restarts,
            report.iterations,
            report.converged,
            report.seed
        );
        if let Some(t) = report.generated_unix {
            s.push_str(&format!("generated_unix: {t}\n"));
        }
        s
    };
    let status = if est.converged {
        Status::Clean
    } else {
        Status::NumericFailure
    };
    Ok(Outcome { stdout, status })
}

// ---------------------------------------------------------------- geometry

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    /// Witness operator file (JSON).
    pub witness: PathBuf,
    /// Random states and separable ensembles to sample (each).
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub reproducible: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

pub const GEOMETRY_COLUMNS: [&str; 6] = [
    "index",
    "kind",
    "witness_value",
    "min_pt_eigenvalue",
    "purity",
    "classification",
];

/// Dead zone for the sign of `tr(Wρ)`.
pub const GEOMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryRow {
    pub index: usize,
    pub kind: &'static str,
    pub witness_value: f64,
    pub min_pt_eigenvalue: f64,
    pub purity: f64,
    pub classification: &'static str,
}

fn geometry_state(
    w: &HermitianOperator,
    k: usize,
    samples: usize,
    seed: u64,
) -> Result<(&'static str, DensityOperator), CliError> {
    let dims = w.dims();
    let s = seed.wrapping_add(k as u64);
    if k < samples {
        Ok(("random", random_density(dims, s)))
    } else if k < 2 * samples {
        let terms = 1 + (k - samples) % (2 * dims.total());
        Ok((
            "separable",
            random_separable_ensemble(dims, terms, s).density()?,
        ))
    } else {
        let (_, v) = w.min_eigenpair()?;
        let proj = HermitianOperator::projector(&v, dims)?;
        Ok((
            "witness-ground",
            DensityOperator::from_unnormalized(&proj, Provenance::Unknown)?,
        ))
    }
}

/// `2·samples` sampled states plus the ground projector of `W`.
pub fn geometry_rows(
    w: &HermitianOperator,
    samples: usize,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<Vec<GeometryRow>, CliError> {
    pool.install(|| {
        (0..2 * samples + 1)
            .into_par_iter()
            .map(|k| {
                let (kind, rho) = geometry_state(w, k, samples, seed)?;
                let value = w.hs_inner(rho.op())?;
                let ppt = ppt_check(rho.op(), GEOMETRY_TOL)?;
                Ok(GeometryRow {
                    index: k,
                    kind,
                    witness_value: value,
                    min_pt_eigenvalue: ppt.min_pt_eigenvalue,
                    purity: rho.purity(),
                    classification: classify_value(value, GEOMETRY_TOL).label(),
                })
            })
            .collect()
    })
}

pub fn cmd_geometry(args: &GeometryArgs) -> Result<Outcome, CliError> {
    let w = load_operator(&args.witness)?;
    let pool = thread_pool(args.threads)?;
    let rows = geometry_rows(&w, args.samples, args.seed, &pool)?;
    let text = write_csv("geometry", &GEOMETRY_COLUMNS, &rows, args.reproducible)
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok(Outcome {
        stdout: write_or_return(text, args.out.as_deref())?,
        status: Status::Clean,
    })
}
