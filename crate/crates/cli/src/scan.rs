//! Parameter grids over the `W[a,b,c;θ]` family.

use rayon::prelude::*;
use serde::Serialize;
use spa_witness::hakye::{
    self, hakye_pt_spectrum_closed_form, hakye_spectrum_closed_form, reference_labeling_note,
    HaKyeParams,
};
use spa_witness::{corollary1_condition, Error};
use thiserror::Error;

/// Largest allowed disagreement between closed-form and numeric spectra.
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum GridError {
    #[error("invalid grid spec {spec:?}: {reason}")]
    InvalidGrid { spec: String, reason: String },
    #[error("missing value for {0} (give --{0}, --reference or scan it)")]
    MissingValue(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParamKey {
    A,
    B,
    C,
    Theta,
}

impl ParamKey {
    pub const ALL: [ParamKey; 4] = [ParamKey::A, ParamKey::B, ParamKey::C, ParamKey::Theta];

    pub fn name(&self) -> &'static str {
        match self {
            ParamKey::A => "a",
            ParamKey::B => "b",
            ParamKey::C => "c",
            ParamKey::Theta => "theta",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

/// `key=start:stop:N`, `N` evenly spaced points including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: ParamKey,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Axis {
    pub fn parse(spec: &str) -> Result<Self, GridError> {
        let bad = |reason: &str| GridError::InvalidGrid {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let (key, range) = spec
            .split_once('=')
            .ok_or_else(|| bad("expected key=start:stop:N"))?;
        let key = ParamKey::parse(key.trim()).ok_or_else(|| bad("key must be a, b, c or theta"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, n] = parts[..] else {
            return Err(bad("expected start:stop:N"));
        };
        let start: f64 = start
            .trim()
            .parse()
            .map_err(|_| bad("start is not a number"))?;
        let stop: f64 = stop
            .trim()
            .parse()
            .map_err(|_| bad("stop is not a number"))?;
        let points: usize = n
            .trim()
            .parse()
            .map_err(|_| bad("N is not a positive integer"))?;
        if !start.is_finite() || !stop.is_finite() {
            return Err(bad("bounds must be finite"));
        }
        if points == 0 {
            return Err(bad("N must be at least 1"));
        }
        Ok(Self {
            key,
            start,
            stop,
            points,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * k as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Values of `a, b, c, θ` for keys not scanned.
    pub base: [Option<f64>; 4],
    pub axes: Vec<Axis>,
    /// Multiply `a, b, c` by `cos θ` at each point.
    pub cos_scaled: bool,
}

impl GridSpec {
    /// Grid points in lexicographic order over `(a, b, c, θ)` axis indices.
    pub fn points(&self) -> Result<Vec<HaKyeParams>, GridError> {
        let mut values: Vec<Vec<f64>> = Vec::with_capacity(4);
        for key in ParamKey::ALL {
            let axes: Vec<&Axis> = self.axes.iter().filter(|ax| ax.key == key).collect();
            match axes.as_slice() {
                [] => {
                    let v = self.base[key as usize].ok_or(GridError::MissingValue(key.name()))?;
                    values.push(vec![v]);
                }
                [ax] => values.push(ax.values()),
                _ => {
                    return Err(GridError::InvalidGrid {
                        spec: key.name().to_string(),
                        reason: "axis given more than once".into(),
                    })
                }
            }
        }
        let mut out = Vec::new();
        for &a in &values[0] {
            for &b in &values[1] {
                for &c in &values[2] {
                    for &theta in &values[3] {
                        out.push(if self.cos_scaled {
                            HaKyeParams::cos_scaled(a, b, c, theta)
                        } else {
                            HaKyeParams { a, b, c, theta }
                        });
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub theta: f64,
    #[serde(rename = "lambda0_W")]
    pub lambda0_w: Option<f64>,
    #[serde(rename = "lambda0_WGamma")]
    pub lambda0_w_gamma: Option<f64>,
    pub gap: Option<f64>,
    pub condition_holds: Option<bool>,
    pub npt_side: Option<String>,
    pub spa_min_pt_eig: Option<f64>,
    pub verdict: String,
    pub oracle_check: String,
    pub note: Option<String>,
}

pub const SCAN_COLUMNS: [&str; 13] = [
    "a",
    "b",
    "c",
    "theta",
    "lambda0_W",
    "lambda0_WGamma",
    "gap",
    "condition_holds",
    "npt_side",
    "spa_min_pt_eig",
    "verdict",
    "oracle_check",
    "note",
];

pub const VERDICT_INVALID: &str = "invalid-params";
pub const VERDICT_NOT_NEGATIVE: &str = "not-a-witness-candidate";
pub const VERDICT_NUMERIC_FAILURE: &str = "numeric-failure";
pub const ORACLE_OK: &str = "ok";
pub const ORACLE_MISMATCH: &str = "oracle-mismatch";

fn max_sorted_diff(xs: &[f64], ys: &[f64]) -> f64 {
    xs.iter()
        .zip(ys)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Numeric analysis of one grid point, cross-checked against the closed forms.
pub fn evaluate_point(p: &HaKyeParams, assert_onew: bool, tol: f64) -> ScanRow {
    let mut row = ScanRow {
        a: p.a,
        b: p.b,
        c: p.c,
        theta: p.theta,
        lambda0_w: None,
        lambda0_w_gamma: None,
        gap: None,
        condition_holds: None,
        npt_side: None,
        spa_min_pt_eig: None,
        verdict: VERDICT_INVALID.to_string(),
        oracle_check: ORACLE_OK.to_string(),
        note: None,
    };
    let w = match hakye::hakye_witness(p) {
        Ok(w) => w,
        Err(e) => {
            row.note = Some(e.to_string());
            return row;
        }
    };
    let (spec, spec_pt) = match (w.eigenvalues(), w.pt().eigenvalues()) {
        (Ok(s), Ok(t)) => (s, t),
        (Err(e), _) | (_, Err(e)) => {
            row.verdict = VERDICT_NUMERIC_FAILURE.to_string();
            row.note = Some(e.to_string());
            return row;
        }
    };
    let mismatch = max_sorted_diff(&spec, &hakye_spectrum_closed_form(p))
        .max(max_sorted_diff(&spec_pt, &hakye_pt_spectrum_closed_form(p)));
    if mismatch > ORACLE_TOL {
        row.oracle_check = ORACLE_MISMATCH.to_string();
    }
    row.lambda0_w = Some(spec[0]);
    row.lambda0_w_gamma = Some(spec_pt[0]);
    row.gap = Some(spec[0] - spec_pt[0]);
    row.note = reference_labeling_note(p);

    match corollary1_condition(&w, assert_onew, tol) {
        Ok(report) => {
            row.condition_holds = Some(report.verdict.condition_holds);
            row.npt_side = report.npt_side.map(|s| s.label().to_string());
            row.spa_min_pt_eig = Some(report.npt_min_pt_eigenvalue());
            row.verdict = report.verdict.conclusion.label().to_string();
        }
        Err(Error::NotNegative { .. }) => {
            row.verdict = VERDICT_NOT_NEGATIVE.to_string();
        }
        Err(e) => {
            row.verdict = VERDICT_NUMERIC_FAILURE.to_string();
            row.note = Some(e.to_string());
        }
    }
    row
}

/// Evaluates every grid point on `pool`; rows come back in grid order
/// whatever the worker count.
pub fn run_scan(
    points: &[HaKyeParams],
    assert_onew: bool,
    tol: f64,
    pool: &rayon::ThreadPool,
) -> Vec<ScanRow> {
    pool.install(|| {
        points
            .par_iter()
            .map(|p| evaluate_point(p, assert_onew, tol))
            .collect()
    })
}
