//! Witnesses written as `W = σ − c·I` with `σ` a density operator.
//!
//! The largest admissible `c` is the infimum of `⟨μν|σ|μν⟩` over unit
//! product vectors. That problem is bilinear and nonconvex; we attack it
//! with a multi-start see-saw in which each half-step is an exact
//! eigenproblem on one factor. The result is an achieved value, so it is
//! always an upper bound on the true infimum.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::operator::{ground_state, CMatrix, Dims, HermitianOperator, Subsystem};
use crate::states::{
    rng_from_seed, sample_product_vector, DensityOperator, ProductVector, Provenance,
};

/// Default dead zone for [`detects`].
pub const DETECTION_TOL: f64 = 1e-10;
/// Slack allowed on `c` above the infimum estimate.
pub const CMAX_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawConfig {
    pub restarts: usize,
    pub max_iter: usize,
    /// A run stops once one full sweep lowers the objective by less than this.
    pub tol: f64,
    /// Restart `r` is seeded with `seed + r`.
    pub seed: u64,
}

impl Default for SeesawConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iter: 500,
            tol: 1e-12,
            seed: 0,
        }
    }
}

/// Best product vector found for `inf ⟨μν|σ|μν⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmaxEstimate {
    /// Equals `⟨argmin|σ|argmin⟩`.
    pub value: f64,
    pub argmin: ProductVector,
    pub restarts: usize,
    /// Sweeps performed by the restart that produced `argmin`.
    pub iterations: usize,
    /// Whether that restart met the tolerance before `max_iter`.
    pub converged: bool,
}

/// Trace of a single see-saw run.
#[derive(Debug, Clone)]
pub struct SeesawRun {
    /// Objective after the start point and after each full sweep.
    pub history: Vec<f64>,
    pub best: ProductVector,
    pub best_value: f64,
    pub converged: bool,
}

impl SeesawRun {
    pub fn iterations(&self) -> usize {
        self.history.len() - 1
    }
}

pub fn product_expectation(op: &HermitianOperator, pv: &ProductVector) -> Result<f64> {
    if pv.dims() != op.dims() {
        return Err(Error::DimensionMismatch {
            expected: op.dims().total(),
            found: pv.dims().total(),
        });
    }
    op.expectation(&pv.tensor())
}

/// `M[i,k] = Σ_{j,l} conj(ν_j) σ[(i,j),(k,l)] ν_l` for `Subsystem::A`, and the
/// mirror image contracting the A factor for `Subsystem::B`.
pub fn conditioned_operator(
    op: &HermitianOperator,
    fixed: &crate::operator::CVector,
    keep: Subsystem,
) -> CMatrix {
    let d = op.dims();
    let m = op.matrix();
    match keep {
        Subsystem::A => CMatrix::from_fn(d.a(), d.a(), |i, k| {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for j in 0..d.b() {
                for l in 0..d.b() {
                    acc += fixed[j].conj() * m[(d.index(i, j), d.index(k, l))] * fixed[l];
                }
            }
            acc
        }),
        Subsystem::B => CMatrix::from_fn(d.b(), d.b(), |j, l| {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for i in 0..d.a() {
                for k in 0..d.a() {
                    acc += fixed[i].conj() * m[(d.index(i, j), d.index(k, l))] * fixed[k];
                }
            }
            acc
        }),
    }
}

fn hermitize(m: CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).scale(0.5)
}

/// One alternating run from `start`. The objective never increases beyond
/// rounding; the best point ever evaluated is kept.
pub fn seesaw_run(
    op: &HermitianOperator,
    start: ProductVector,
    max_iter: usize,
    tol: f64,
) -> Result<SeesawRun> {
    let mut current = start;
    let mut value = product_expectation(op, &current)?;
    let mut history = vec![value];
    let mut best = current.clone();
    let mut best_value = value;
    let mut converged = false;

    for _ in 0..max_iter {
        let m_a = hermitize(conditioned_operator(op, current.nu(), Subsystem::A));
        let (_, mu) = ground_state(&m_a)?;
        let m_b = hermitize(conditioned_operator(op, &mu, Subsystem::B));
        let (_, nu) = ground_state(&m_b)?;
        current = ProductVector::normalized(mu, nu)?;

        let next = product_expectation(op, &current)?;
        debug_assert!(
            next <= value + 1e-12 * value.abs().max(op.hs_norm()),
            "see-saw objective increased: {value} -> {next}"
        );
        history.push(next);
        if next < best_value {
            best_value = next;
            best = current.clone();
        }
        let decrease = value - next;
        value = next;
        if decrease < tol {
            converged = true;
            break;
        }
    }

    Ok(SeesawRun {
        history,
        best,
        best_value,
        converged,
    })
}

/// Multi-start see-saw estimate of `inf ⟨μν|op|μν⟩` for any Hermitian `op`.
pub fn product_infimum(op: &HermitianOperator, cfg: &SeesawConfig) -> Result<CmaxEstimate> {
    let dims = op.dims();
    let restarts = cfg.restarts.max(1);
    let runs: Vec<Result<SeesawRun>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_from_seed(cfg.seed.wrapping_add(r as u64));
            let start = sample_product_vector(dims, &mut rng);
            seesaw_run(op, start, cfg.max_iter, cfg.tol)
        })
        .collect();

    let mut best: Option<SeesawRun> = None;
    for run in runs {
        let run = run?;
        // Strict comparison keeps the lowest restart index on ties, so the
        // result does not depend on scheduling.
        if best.as_ref().is_none_or(|b| run.best_value < b.best_value) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one restart");
    let value = product_expectation(op, &best.best)?;
    Ok(CmaxEstimate {
        value,
        iterations: best.iterations(),
        converged: best.converged,
        argmin: best.best,
        restarts,
    })
}

/// Estimate of `c_σ^max = inf ⟨μν|σ|μν⟩`.
pub fn c_sigma_max(sigma: &DensityOperator, cfg: &SeesawConfig) -> Result<CmaxEstimate> {
    product_infimum(sigma.op(), cfg)
}

/// `W = σ − c·I` with `λ₀(σ) < c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaFormWitness {
    sigma: DensityOperator,
    c: f64,
    lambda0_sigma: f64,
    cmax: Option<CmaxEstimate>,
    operator: HermitianOperator,
}

impl SigmaFormWitness {
    pub fn sigma(&self) -> &DensityOperator {
        &self.sigma
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn lambda0_sigma(&self) -> f64 {
        self.lambda0_sigma
    }

    pub fn cmax_estimate(&self) -> Option<&CmaxEstimate> {
        self.cmax.as_ref()
    }

    pub fn dims(&self) -> Dims {
        self.sigma.dims()
    }

    /// `σ − c·I`.
    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    /// Runs the see-saw and attaches the estimate, failing if `c` exceeds it.
    pub fn with_cmax_estimate(self, cfg: &SeesawConfig) -> Result<Self> {
        let est = c_sigma_max(&self.sigma, cfg)?;
        build_witness(self.sigma, self.c, Some(est))
    }
}

/// Validates `c > λ₀σ` and, when an estimate is supplied, `c ≤ estimate`.
///
/// Passing the estimate check is necessary for `σ − cI` to be a witness but
/// not sufficient: the see-saw value bounds the infimum from above only.
pub fn build_witness(
    sigma: DensityOperator,
    c: f64,
    cmax: Option<CmaxEstimate>,
) -> Result<SigmaFormWitness> {
    let lambda0_sigma = sigma.op().min_eigenvalue()?;
    if c.is_nan() || c <= lambda0_sigma {
        return Err(Error::NotAWitness {
            lambda0: lambda0_sigma,
            c,
        });
    }
    if let Some(est) = &cmax {
        if est.argmin.dims() != sigma.dims() {
            return Err(Error::DimensionMismatch {
                expected: sigma.dims().total(),
                found: est.argmin.dims().total(),
            });
        }
        if c > est.value + CMAX_TOL {
            return Err(Error::ExceedsCmax { c, cmax: est.value });
        }
    }
    let operator = sigma.op().shifted(-c);
    Ok(SigmaFormWitness {
        sigma,
        c,
        lambda0_sigma,
        cmax,
        operator,
    })
}

/// Result of recasting a raw witness matrix into `σ − c·I` form.
#[derive(Debug, Clone)]
pub struct SigmaFormRecast {
    pub witness: SigmaFormWitness,
    /// `witness.operator() = gamma · W_raw`.
    pub gamma: f64,
    /// Positivity margin `ε` added to `|λ_min(W)|`.
    pub margin: f64,
}

/// Number of random product vectors used to spot-check block positivity.
pub const SPOT_CHECK_SAMPLES: usize = 256;

/// Rescales `W` to `γW = σ − cI` with `σ` strictly positive and unit trace.
///
/// Positivity of `σ` is certified; separability is not, so `σ` carries
/// [`Provenance::Asserted`].
pub fn sigma_form_from_matrix(w: &HermitianOperator) -> Result<SigmaFormRecast> {
    let dims = w.dims();
    let lambda_min = w.min_eigenvalue()?;
    if lambda_min.is_nan() || lambda_min >= 0.0 {
        return Err(Error::NotNegative { lambda_min });
    }
    let norm = w.hs_norm();
    let mut rng = rng_from_seed(0x5157_a11e);
    for _ in 0..SPOT_CHECK_SAMPLES {
        let pv = sample_product_vector(dims, &mut rng);
        let value = product_expectation(w, &pv)?;
        if value < -1e-10 * norm.max(1.0) {
            return Err(Error::NotBlockPositive { value });
        }
    }

    let margin = 1e-6 * norm;
    let n = dims.total() as f64;
    let gamma = 1.0 / (w.trace() + n * (lambda_min.abs() + margin));
    let c = gamma * (lambda_min.abs() + margin);
    let sigma_op = w.scaled(gamma).shifted(c);
    let sigma = DensityOperator::new(sigma_op, Provenance::Asserted)?;
    let witness = build_witness(sigma, c, None)?;
    Ok(SigmaFormRecast {
        witness,
        gamma,
        margin,
    })
}

/// Coefficient `c' = d_AB · c` of the form `W = σ − c'·τ₀`.
pub fn to_tau_form(w: &SigmaFormWitness) -> (DensityOperator, f64) {
    (w.sigma.clone(), tau_coefficient(w.c, w.dims()))
}

pub fn tau_coefficient(c: f64, dims: Dims) -> f64 {
    c * dims.total() as f64
}

pub fn identity_coefficient(c_prime: f64, dims: Dims) -> f64 {
    c_prime / dims.total() as f64
}

/// Weak optimality holds iff `|c − estimate| ≤ tol`; the certificate is the
/// product vector achieving the estimate.
pub fn is_weakly_optimal(w: &SigmaFormWitness, tol: f64) -> Result<(bool, Option<ProductVector>)> {
    let est = w.cmax.as_ref().ok_or(Error::EstimateMissing)?;
    if (w.c - est.value).abs() <= tol {
        Ok((true, Some(est.argmin.clone())))
    } else {
        Ok((false, None))
    }
}

/// `tr(ρ W)`.
pub fn witness_value(w: &SigmaFormWitness, rho: &DensityOperator) -> Result<f64> {
    rho.op().hs_inner(w.operator())
}

pub fn detects(w: &SigmaFormWitness, rho: &DensityOperator, tol: f64) -> Result<bool> {
    Ok(witness_value(w, rho)? < -tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fineness {
    Finer,
    Equal,
    /// Not decided by the same-σ comparison.
    Incomparable,
}

/// Same-σ comparison: a larger `c` detects strictly more states.
pub fn finer_than(w2: &SigmaFormWitness, w1: &SigmaFormWitness) -> Result<Fineness> {
    let max_diff = w2.sigma.op().max_abs_diff(w1.sigma.op())?;
    if max_diff > 1e-12 {
        return Err(Error::DifferentSigma { max_diff });
    }
    Ok(if w2.c > w1.c {
        Fineness::Finer
    } else if w2.c == w1.c {
        Fineness::Equal
    } else {
        Fineness::Incomparable
    })
}

/// Checks `W = P + Q^Γ` with `P, Q ≥ 0`, all within `tol`.
pub fn verify_decomposition(
    w: &HermitianOperator,
    p: &HermitianOperator,
    q: &HermitianOperator,
    tol: f64,
) -> bool {
    if w.dims() != p.dims() || w.dims() != q.dims() {
        return false;
    }
    let psd = |op: &HermitianOperator| op.min_eigenvalue().is_ok_and(|l| l >= -tol);
    if !psd(p) || !psd(q) {
        return false;
    }
    let Ok(sum) = p.add(&q.pt()) else {
        return false;
    };
    w.sub(&sum).is_ok_and(|d| d.hs_norm() <= tol)
}
