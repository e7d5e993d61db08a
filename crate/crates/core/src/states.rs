//! Product vectors, separable-by-construction ensembles and density operators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::operator::{c64, CMatrix, CVector, Dims, HermitianOperator};

/// Norm tolerance for the factors of a [`ProductVector`].
pub const UNIT_NORM_TOL: f64 = 1e-12;
/// Tolerance on ensemble weights summing to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Trace and positivity tolerance for [`DensityOperator`].
pub const DENSITY_TOL: f64 = 1e-10;

/// Unit product vector `|μ_A⟩ ⊗ |ν_B⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductVector {
    mu: CVector,
    nu: CVector,
}

impl ProductVector {
    pub fn new(mu: CVector, nu: CVector) -> Result<Self> {
        for v in [&mu, &nu] {
            let norm = v.norm();
            if (norm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::NotUnitVector { norm });
            }
        }
        if mu.len() < 2 || nu.len() < 2 {
            return Err(Error::InvalidDims {
                d_a: mu.len(),
                d_b: nu.len(),
            });
        }
        Ok(Self { mu, nu })
    }

    /// Normalizes both factors before validation.
    pub fn normalized(mu: CVector, nu: CVector) -> Result<Self> {
        let (nm, nn) = (mu.norm(), nu.norm());
        if nm == 0.0 || nn == 0.0 || !nm.is_finite() || !nn.is_finite() {
            return Err(Error::NotUnitVector {
                norm: if nm == 0.0 { nm } else { nn },
            });
        }
        Self::new(mu.unscale(nm), nu.unscale(nn))
    }

    /// Computational basis state `|i⟩|j⟩`.
    pub fn basis(dims: Dims, i: usize, j: usize) -> Self {
        let mut mu = CVector::zeros(dims.a());
        let mut nu = CVector::zeros(dims.b());
        mu[i] = c64(1.0, 0.0);
        nu[j] = c64(1.0, 0.0);
        Self { mu, nu }
    }

    pub fn mu(&self) -> &CVector {
        &self.mu
    }

    pub fn nu(&self) -> &CVector {
        &self.nu
    }

    pub fn dims(&self) -> Dims {
        Dims::new(self.mu.len(), self.nu.len()).expect("factors validated on construction")
    }

    /// Kronecker product in the A-major layout.
    pub fn tensor(&self) -> CVector {
        let db = self.nu.len();
        CVector::from_fn(self.mu.len() * db, |r, _| self.mu[r / db] * self.nu[r % db])
    }

    pub fn projector(&self) -> HermitianOperator {
        HermitianOperator::projector(&self.tensor(), self.dims()).expect("tensor length matches")
    }
}

/// Where a density operator came from; separability is only ever known by
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    SeparableByConstruction,
    /// Separability claimed by the caller, not established.
    Asserted,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
    provenance: Provenance,
}

impl DensityOperator {
    /// Checks unit trace and positivity, both within [`DENSITY_TOL`].
    pub fn new(op: HermitianOperator, provenance: Provenance) -> Result<Self> {
        let trace = op.trace();
        let lambda_min = op.min_eigenvalue()?;
        if (trace - 1.0).abs() > DENSITY_TOL || lambda_min < -DENSITY_TOL {
            return Err(Error::InvalidDensity { trace, lambda_min });
        }
        Ok(Self { op, provenance })
    }

    /// Divides a positive operator by its trace.
    pub fn from_unnormalized(op: &HermitianOperator, provenance: Provenance) -> Result<Self> {
        let trace = op.trace();
        if trace <= 1e-12 {
            return Err(Error::ZeroTrace { trace });
        }
        Self::new(op.scaled(1.0 / trace), provenance)
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn into_op(self) -> HermitianOperator {
        self.op
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dims(&self) -> Dims {
        self.op.dims()
    }

    pub fn is_separable_by_construction(&self) -> bool {
        self.provenance == Provenance::SeparableByConstruction
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.op.hs_norm().powi(2)
    }
}

/// Convex mixture `Σ w_k |μ_k ν_k⟩⟨μ_k ν_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparableEnsemble {
    dims: Dims,
    terms: Vec<(f64, ProductVector)>,
}

impl SeparableEnsemble {
    pub fn new(dims: Dims, terms: Vec<(f64, ProductVector)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::WeightSumError { sum: 0.0 });
        }
        let mut sum = 0.0;
        for (index, (w, pv)) in terms.iter().enumerate() {
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidWeight { index, weight: *w });
            }
            if pv.dims() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims.total(),
                    found: pv.dims().total(),
                });
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSumError { sum });
        }
        Ok(Self { dims, terms })
    }

    pub fn uniform(dims: Dims, vectors: Vec<ProductVector>) -> Result<Self> {
        let w = 1.0 / vectors.len() as f64;
        Self::new(dims, vectors.into_iter().map(|pv| (w, pv)).collect())
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn terms(&self) -> &[(f64, ProductVector)] {
        &self.terms
    }

    pub fn density(&self) -> Result<DensityOperator> {
        ensemble_density(self)
    }
}

pub fn ensemble_density(e: &SeparableEnsemble) -> Result<DensityOperator> {
    let n = e.dims.total();
    let mut m = CMatrix::zeros(n, n);
    for (w, pv) in &e.terms {
        let psi = pv.tensor();
        m += (&psi * psi.adjoint()).scale(*w);
    }
    let op = HermitianOperator::from_hermitian_part(m, e.dims);
    DensityOperator::new(op, Provenance::SeparableByConstruction)
}

/// `τ₀ = I / d_AB`.
pub fn maximally_mixed(dims: Dims) -> DensityOperator {
    DensityOperator {
        op: HermitianOperator::identity(dims).scaled(1.0 / dims.total() as f64),
        provenance: Provenance::SeparableByConstruction,
    }
}

pub(crate) fn haar_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(dim, |_, _| {
            c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let norm = v.norm();
        if norm > 1e-300 {
            return v.unscale(norm);
        }
    }
}

pub(crate) fn sample_product_vector<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> ProductVector {
    let mu = haar_vector(dims.a(), rng);
    let nu = haar_vector(dims.b(), rng);
    ProductVector { mu, nu }
}

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-random factors from a seeded ChaCha8 stream.
pub fn random_product_vector(dims: Dims, seed: u64) -> ProductVector {
    sample_product_vector(dims, &mut rng_from_seed(seed))
}

/// Hilbert–Schmidt random state `G G† / tr(G G†)` with complex Gaussian `G`.
pub fn random_density(dims: Dims, seed: u64) -> DensityOperator {
    let mut rng = rng_from_seed(seed);
    let n = dims.total();
    let g = CMatrix::from_fn(n, n, |_, _| {
        c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let gg = &g * g.adjoint();
    let trace: f64 = gg.diagonal().iter().map(|z| z.re).sum();
    let op = HermitianOperator::from_hermitian_part(gg.unscale(trace), dims);
    DensityOperator {
        op,
        provenance: Provenance::Unknown,
    }
}

/// `terms` Haar product vectors with flat-Dirichlet weights.
pub fn random_separable_ensemble(dims: Dims, terms: usize, seed: u64) -> SeparableEnsemble {
    assert!(terms > 0, "ensemble needs at least one term");
    let mut rng = rng_from_seed(seed);
    let raw: Vec<(f64, ProductVector)> = (0..terms)
        .map(|_| {
            let w: f64 = rng.sample::<f64, _>(Exp1) + 1e-3;
            (w, sample_product_vector(dims, &mut rng))
        })
        .collect();
    let total: f64 = raw.iter().map(|(w, _)| w).sum();
    let terms = raw.into_iter().map(|(w, pv)| (w / total, pv)).collect();
    SeparableEnsemble::new(dims, terms).expect("normalized weights")
}
