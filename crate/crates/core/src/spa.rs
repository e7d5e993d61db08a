//! Structural physical approximation, the PPT test and the verdicts built on
//! top of them.
//!
//! For `W = σ − c·I` the smallest positivity shift is `s = c − λ₀(σ)`, so
//! the approximation `σ − λ₀(σ)·I` does not depend on `c`. Its partial
//! transpose has minimum eigenvalue `λ₀(σ^Γ) − λ₀(σ)`; when that is
//! negative the approximation is NPT and therefore entangled.

use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, Subsystem, DEFAULT_RANK_TOL};
use crate::states::{DensityOperator, Provenance};
use crate::witness::SigmaFormWitness;

/// Default absolute tolerance for eigenvalue comparisons.
pub const EIGEN_COMPARE_TOL: f64 = 1e-8;
/// Tolerance used when scanning parameter grids.
pub const SCAN_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SpaResult {
    /// Shift `s ≥ 0` added to the witness.
    pub shift: f64,
    /// `W + s·I`.
    pub operator: HermitianOperator,
    /// `operator / tr(operator)`.
    pub normalized_state: DensityOperator,
    /// Set when `σ` is rank deficient, in which case the output is `σ` itself.
    pub theorem1_shortcut: bool,
}

/// `W + s·I` with the smallest `s ≥ 0` making it positive.
pub fn spa(w: &HermitianOperator) -> Result<SpaResult> {
    let lambda_min = w.min_eigenvalue()?;
    let shift = (-lambda_min).max(0.0);
    let operator = w.shifted(shift);
    let normalized_state = normalize(&operator, Provenance::Unknown)?;
    Ok(SpaResult {
        shift,
        operator,
        normalized_state,
        theorem1_shortcut: false,
    })
}

/// The approximation of a σ-form witness, `σ − λ₀σ·I`.
///
/// When `σ` is rank deficient `λ₀σ = 0` and the output is exactly `σ`; it
/// inherits `σ`'s provenance, so a separable `σ` yields a separable output.
pub fn spa_sigma_form(w: &SigmaFormWitness) -> Result<SpaResult> {
    let sigma = w.sigma();
    let rank = sigma.op().numeric_rank(DEFAULT_RANK_TOL)?;
    if rank < sigma.dims().total() {
        let operator = sigma.op().clone();
        return Ok(SpaResult {
            shift: w.c(),
            normalized_state: sigma.clone(),
            operator,
            theorem1_shortcut: true,
        });
    }
    let lambda0 = w.lambda0_sigma();
    let operator = sigma.op().shifted(-lambda0);
    let normalized_state = normalize(&operator, Provenance::Unknown)?;
    Ok(SpaResult {
        shift: w.c() - lambda0,
        operator,
        normalized_state,
        theorem1_shortcut: false,
    })
}

fn normalize(op: &HermitianOperator, provenance: Provenance) -> Result<DensityOperator> {
    let trace = op.trace();
    if trace <= 1e-12 {
        return Err(Error::ZeroTrace { trace });
    }
    DensityOperator::new(op.scaled(1.0 / trace), provenance)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PptStatus {
    /// Negative partial transpose; entangled.
    NptEntangled,
    Ppt,
}

impl PptStatus {
    pub fn label(&self) -> &'static str {
        match self {
            PptStatus::NptEntangled => "NPT-entangled",
            PptStatus::Ppt => "PPT",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptVerdict {
    /// Minimum eigenvalue of the partial transpose of the trace-normalized input.
    pub min_pt_eigenvalue: f64,
    /// Same quantity before normalization.
    pub unnormalized_min_pt_eigenvalue: f64,
    pub status: PptStatus,
    /// PPT with `d_AB ≤ 6`, where PPT implies separability.
    pub conclusive_separability: bool,
}

impl PptVerdict {
    pub fn is_ppt(&self) -> bool {
        self.status == PptStatus::Ppt
    }

    pub fn is_npt(&self) -> bool {
        self.status == PptStatus::NptEntangled
    }
}

/// Peres–Horodecki test on the B-side partial transpose. Inputs with positive
/// trace are normalized first; `tol` applies to the normalized spectrum.
pub fn ppt_check(op: &HermitianOperator, tol: f64) -> Result<PptVerdict> {
    let raw = op.partial_transpose(Subsystem::B).min_eigenvalue()?;
    let trace = op.trace();
    let normalized = if trace > 0.0 { raw / trace } else { raw };
    let status = if normalized < -tol {
        PptStatus::NptEntangled
    } else {
        PptStatus::Ppt
    };
    Ok(PptVerdict {
        min_pt_eigenvalue: normalized,
        unnormalized_min_pt_eigenvalue: raw,
        status,
        conclusive_separability: status == PptStatus::Ppt && op.dims().total() <= 6,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Conclusion {
    /// An NPT approximation was found and the caller asserted the witness is
    /// optimal and indecomposable.
    Violates,
    /// The approximation is PPT in a dimension where that means separable.
    Consistent,
    Inconclusive,
}

impl Conclusion {
    pub fn label(&self) -> &'static str {
        match self {
            Conclusion::Violates => "VIOLATES",
            Conclusion::Consistent => "CONSISTENT",
            Conclusion::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureVerdict {
    pub condition_holds: bool,
    /// `λ₀σ` for the σ-form test, `λ₀W` for the operator test.
    pub lambda0: f64,
    /// `λ₀(σ^Γ)` for the σ-form test, `λ₀(W^Γ)` for the operator test.
    pub lambda0_pt: f64,
    /// PPT evidence for the approximation the verdict is about.
    pub spa_ppt: PptVerdict,
    pub conclusion: Conclusion,
    pub assertion_note: String,
}

fn conclude(
    condition_holds: bool,
    evidence: &[PptVerdict],
    npt: &PptVerdict,
    asserted_onew: bool,
) -> (Conclusion, String) {
    if condition_holds && npt.is_npt() {
        if asserted_onew {
            (
                Conclusion::Violates,
                "optimality and indecomposability asserted by caller; NPT evidence is unconditional"
                    .to_string(),
            )
        } else {
            (
                Conclusion::Inconclusive,
                "NPT approximation found; a violation additionally requires the witness to be \
                 optimal and indecomposable, which was not asserted"
                    .to_string(),
            )
        }
    } else if evidence.iter().all(|v| v.conclusive_separability) {
        (
            Conclusion::Consistent,
            "approximation is PPT in d_AB <= 6, hence separable".to_string(),
        )
    } else {
        (
            Conclusion::Inconclusive,
            "no NPT approximation; PPT does not settle separability for d_AB > 6".to_string(),
        )
    }
}

/// Sufficient condition on `σ`: `λ₀(σ^Γ) < λ₀σ` forces the approximation to
/// be NPT.
pub fn theorem2_condition(
    w: &SigmaFormWitness,
    asserted_onew: bool,
    tol: f64,
) -> Result<ConjectureVerdict> {
    let lambda0 = w.lambda0_sigma();
    let lambda0_pt = w.sigma().op().pt().min_eigenvalue()?;
    let condition_holds = lambda0_pt < lambda0 - tol;
    let approx = spa_sigma_form(w)?;
    let spa_ppt = ppt_check(&approx.operator, tol)?;
    let (conclusion, assertion_note) =
        conclude(condition_holds, &[spa_ppt], &spa_ppt, asserted_onew);
    Ok(ConjectureVerdict {
        condition_holds,
        lambda0,
        lambda0_pt,
        spa_ppt,
        conclusion,
        assertion_note,
    })
}

/// Which operator's approximation came out NPT.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WitnessSide {
    /// The approximation of `W`.
    Witness,
    /// The approximation of `W^Γ`.
    PartialTranspose,
}

impl WitnessSide {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessSide::Witness => "W",
            WitnessSide::PartialTranspose => "W^Gamma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Corollary1Report {
    pub verdict: ConjectureVerdict,
    /// `λ₀W − λ₀(W^Γ)`.
    pub gap: f64,
    pub npt_side: Option<WitnessSide>,
    pub spa_w: SpaResult,
    pub spa_w_ppt: PptVerdict,
    pub spa_w_pt: SpaResult,
    pub spa_w_pt_ppt: PptVerdict,
}

impl Corollary1Report {
    /// Unnormalized minimum PT eigenvalue of the NPT approximation, or of
    /// `W`'s approximation when neither side is NPT.
    pub fn npt_min_pt_eigenvalue(&self) -> f64 {
        match self.npt_side {
            Some(WitnessSide::PartialTranspose) => self.spa_w_pt_ppt.unnormalized_min_pt_eigenvalue,
            _ => self.spa_w_ppt.unnormalized_min_pt_eigenvalue,
        }
    }
}

/// Compares `λ₀W` with `λ₀(W^Γ)`. If they differ, the operator with the
/// larger minimum eigenvalue is under-shifted relative to its partner, so
/// its approximation has a negative partial transpose.
pub fn corollary1_condition(
    w: &HermitianOperator,
    asserted_onew: bool,
    tol: f64,
) -> Result<Corollary1Report> {
    let lambda0 = w.min_eigenvalue()?;
    if lambda0.is_nan() || lambda0 >= 0.0 {
        return Err(Error::NotNegative {
            lambda_min: lambda0,
        });
    }
    let w_pt = w.pt();
    let lambda0_pt = w_pt.min_eigenvalue()?;
    let gap = lambda0 - lambda0_pt;
    let condition_holds = gap.abs() > tol;

    let spa_w = spa(w)?;
    let spa_w_ppt = ppt_check(&spa_w.operator, tol)?;
    let spa_w_pt = spa(&w_pt)?;
    let spa_w_pt_ppt = ppt_check(&spa_w_pt.operator, tol)?;

    let npt_side = if !condition_holds {
        None
    } else if gap > 0.0 {
        Some(WitnessSide::Witness)
    } else {
        Some(WitnessSide::PartialTranspose)
    };
    let spa_ppt = match npt_side {
        Some(WitnessSide::PartialTranspose) => spa_w_pt_ppt,
        _ => spa_w_ppt,
    };
    // W^Γ ≥ 0 makes W decomposable; only W's own approximation is relevant.
    let (conclusion, assertion_note) = if lambda0_pt >= -tol {
        let (conclusion, note) = conclude(false, &[spa_w_ppt], &spa_w_ppt, asserted_onew);
        (
            conclusion,
            format!("W^Gamma is positive semidefinite, so W is decomposable; {note}"),
        )
    } else {
        conclude(
            condition_holds,
            &[spa_w_ppt, spa_w_pt_ppt],
            &spa_ppt,
            asserted_onew,
        )
    };
    Ok(Corollary1Report {
        verdict: ConjectureVerdict {
            condition_holds,
            lambda0,
            lambda0_pt,
            spa_ppt,
            conclusion,
            assertion_note,
        },
        gap,
        npt_side,
        spa_w,
        spa_w_ppt,
        spa_w_pt,
        spa_w_pt_ppt,
    })
}

/// Ground-eigenspace projectors of `σ` (`f0`) and of `σ^Γ` (`e0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalProjectors {
    pub f0: HermitianOperator,
    pub f0_rank: usize,
    pub e0: HermitianOperator,
    pub e0_rank: usize,
}

impl ExtremalProjectors {
    pub fn f0_degenerate(&self) -> bool {
        self.f0_rank > 1
    }

    pub fn e0_degenerate(&self) -> bool {
        self.e0_rank > 1
    }
}

/// Eigenvalues within [`EIGEN_COMPARE_TOL`] of the minimum count as one
/// degenerate ground space, returned as a whole.
pub fn extremal_projectors(sigma: &HermitianOperator) -> Result<ExtremalProjectors> {
    let ground = |op: &HermitianOperator| -> Result<(HermitianOperator, usize)> {
        let spec = op.spectrum()?;
        let rank = spec.ground_multiplicity(EIGEN_COMPARE_TOL);
        let proj = HermitianOperator::from_hermitian_part(spec.lowest_projector(rank), op.dims());
        Ok((proj, rank))
    };
    let (f0, f0_rank) = ground(sigma)?;
    let (e0, e0_rank) = ground(&sigma.pt())?;
    Ok(ExtremalProjectors {
        f0,
        f0_rank,
        e0,
        e0_rank,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HyperplaneSide {
    NegativeSide,
    OnPlane,
    PositiveSide,
}

impl HyperplaneSide {
    pub fn label(&self) -> &'static str {
        match self {
            HyperplaneSide::NegativeSide => "negative-side",
            HyperplaneSide::OnPlane => "on-plane",
            HyperplaneSide::PositiveSide => "positive-side",
        }
    }
}

/// Sign of `tr(Wρ)` with a dead zone of width `tol`.
pub fn hyperplane_classify(
    w: &HermitianOperator,
    rho: &DensityOperator,
    tol: f64,
) -> Result<HyperplaneSide> {
    let value = w.hs_inner(rho.op())?;
    Ok(classify_value(value, tol))
}

pub fn classify_value(value: f64, tol: f64) -> HyperplaneSide {
    if value < -tol {
        HyperplaneSide::NegativeSide
    } else if value > tol {
        HyperplaneSide::PositiveSide
    } else {
        HyperplaneSide::OnPlane
    }
}
