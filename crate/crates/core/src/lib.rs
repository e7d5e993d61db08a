//! Entanglement witnesses in the form `W = σ − c·I`, their structural
//! physical approximations, and PPT-based checks of when those
//! approximations are entangled.
//!
//! Modules:
//! - [`operator`]: dense Hermitian operators on `H_A ⊗ H_B`.
//! - [`states`]: product vectors, separable ensembles, density operators.
//! - [`witness`]: σ-form witnesses and the product-state infimum see-saw.
//! - [`spa`]: approximations, PPT verdicts and the eigenvalue conditions.
//! - [`hakye`]: the 3⊗3 family `W[a,b,c;θ]` with closed-form spectra.

pub mod error;
pub mod hakye;
pub mod operator;
pub mod spa;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use hakye::{hakye_witness, HaKyeParams};
pub use operator::{CMatrix, CVector, Dims, HermitianOperator, Spectrum, Subsystem};
pub use spa::{
    corollary1_condition, extremal_projectors, hyperplane_classify, ppt_check, spa, spa_sigma_form,
    theorem2_condition, Conclusion, ConjectureVerdict, Corollary1Report, HyperplaneSide, PptStatus,
    PptVerdict, SpaResult, WitnessSide,
};
pub use states::{
    ensemble_density, maximally_mixed, random_density, random_product_vector,
    random_separable_ensemble, DensityOperator, ProductVector, Provenance, SeparableEnsemble,
};
pub use witness::{
    build_witness, c_sigma_max, detects, finer_than, is_weakly_optimal, product_expectation,
    sigma_form_from_matrix, to_tau_form, verify_decomposition, witness_value, CmaxEstimate,
    Fineness, SeesawConfig, SigmaFormRecast, SigmaFormWitness,
};
