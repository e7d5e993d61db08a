use num_complex::Complex64;
use spa_witness::hakye::{hakye_witness, HaKyeParams};
use spa_witness::spa::{extremal_projectors, EIGEN_COMPARE_TOL};
use spa_witness::states::random_separable_ensemble;
use spa_witness::{
    build_witness, ppt_check, sigma_form_from_matrix, spa, spa_sigma_form, theorem2_condition,
    CMatrix, Conclusion, Dims, HermitianOperator,
};

fn swap(d: Dims) -> HermitianOperator {
    let n = d.total();
    let m = CMatrix::from_fn(n, n, |r, s| {
        let (i, j) = d.split(r);
        let (k, l) = d.split(s);
        Complex64::new(if i == l && j == k { 1.0 } else { 0.0 }, 0.0)
    });
    HermitianOperator::new(m, d).unwrap()
}

#[test]
fn shift_is_minimal() {
    let dims = [(2, 2), (2, 3), (3, 3)];
    for seed in 0..60u64 {
        let (a, b) = dims[seed as usize % 3];
        let d = Dims::new(a, b).unwrap();
        let sigma = random_separable_ensemble(d, 2 * d.total(), seed)
            .density()
            .unwrap();
        let l0 = sigma.op().min_eigenvalue().unwrap();
        let c = l0 + 0.01 + 0.05 * (seed % 7) as f64;
        let w = build_witness(sigma, c, None).unwrap();
        let r = spa(w.operator()).unwrap();
        let norm = w.operator().hs_norm();
        let lm = r.operator.min_eigenvalue().unwrap();
        assert!(lm >= -1e-10 && lm <= 1e-8 * norm, "{lm}");
        let under = w.operator().shifted(r.shift - 1e-6 * norm);
        assert!(under.min_eigenvalue().unwrap() < 0.0);
    }
}

#[test]
fn approximation_does_not_depend_on_c() {
    let d = Dims::new(3, 3).unwrap();
    let sigma = random_separable_ensemble(d, 18, 12).density().unwrap();
    let l0 = sigma.op().min_eigenvalue().unwrap();
    let reference = sigma.op().shifted(-l0);
    for k in 1..=5 {
        let w = build_witness(sigma.clone(), l0 + 0.02 * k as f64, None).unwrap();
        let r = spa(w.operator()).unwrap();
        assert!(r.operator.max_abs_diff(&reference).unwrap() < 1e-12);
        let rs = spa_sigma_form(&w).unwrap();
        assert!(rs.operator.max_abs_diff(&reference).unwrap() < 1e-15);
        assert!((rs.shift - r.shift).abs() < 1e-12);
    }
}

#[test]
fn theorem2_matches_pt_minimum() {
    let dims = [(2, 2), (2, 3), (3, 3)];
    for seed in 0..60u64 {
        let (a, b) = dims[seed as usize % 3];
        let d = Dims::new(a, b).unwrap();
        let sigma = random_separable_ensemble(d, d.total() + 2, 500 + seed)
            .density()
            .unwrap();
        let l0 = sigma.op().min_eigenvalue().unwrap();
        let w = build_witness(sigma, l0 + 0.01, None).unwrap();
        let v = theorem2_condition(&w, false, EIGEN_COMPARE_TOL).unwrap();
        let approx = spa(w.operator()).unwrap();
        let pt_min = approx.operator.pt().min_eigenvalue().unwrap();
        assert!((pt_min - (v.lambda0_pt - v.lambda0)).abs() < 1e-9);
        assert_eq!(v.condition_holds, pt_min < -EIGEN_COMPARE_TOL);
        if v.condition_holds {
            assert!(v.spa_ppt.is_npt());
            assert_eq!(v.conclusion, Conclusion::Inconclusive);
        }
    }
}

#[test]
fn rank_deficient_sigma_is_returned_unchanged() {
    let d = Dims::new(3, 3).unwrap();
    for seed in 0..20 {
        let terms = 1 + seed as usize % 8;
        let sigma = random_separable_ensemble(d, terms, 900 + seed)
            .density()
            .unwrap();
        let l0 = sigma.op().min_eigenvalue().unwrap();
        let w = build_witness(sigma.clone(), l0 + 0.05, None).unwrap();
        let shortcut = spa_sigma_form(&w).unwrap();
        assert!(shortcut.theorem1_shortcut);
        assert_eq!(&shortcut.operator, sigma.op());
        let generic = spa(w.operator()).unwrap();
        assert!(generic.operator.max_abs_diff(sigma.op()).unwrap() < 1e-10);
        assert!(ppt_check(&generic.operator, 1e-10).unwrap().is_ppt());
    }
}

#[test]
fn swap_witness_is_consistent() {
    let d = Dims::new(2, 2).unwrap();
    let recast = sigma_form_from_matrix(&swap(d)).unwrap();
    let w = &recast.witness;
    let v = theorem2_condition(w, true, EIGEN_COMPARE_TOL).unwrap();
    assert!(v.lambda0 < v.lambda0_pt);
    assert!(!v.condition_holds);
    assert!(v.spa_ppt.is_ppt());
    assert!(v.spa_ppt.conclusive_separability);
    assert_eq!(v.conclusion, Conclusion::Consistent);
    // λ₀σ = γε and λ₀(σ^Γ) = c = γ(1 + ε).
    assert!((v.lambda0 - recast.gamma * recast.margin).abs() < 1e-14);
    assert!((v.lambda0_pt - w.c()).abs() < 1e-14);
}

#[test]
fn hakye_recast_violates() {
    let raw = hakye_witness(&HaKyeParams::reference()).unwrap();
    let recast = sigma_form_from_matrix(&raw).unwrap();
    let back = recast.witness.operator().scaled(1.0 / recast.gamma);
    assert!(back.max_abs_diff(&raw).unwrap() < 1e-10);
    let sigma = recast.witness.sigma().op();
    assert_eq!(sigma.numeric_rank(1e-9).unwrap(), 9);
    assert!((sigma.trace() - 1.0).abs() < 1e-12);
    assert!(sigma.min_eigenvalue().unwrap() > 0.0);

    let v = theorem2_condition(&recast.witness, true, EIGEN_COMPARE_TOL).unwrap();
    assert!(v.condition_holds);
    assert!(v.spa_ppt.is_npt());
    assert_eq!(v.conclusion, Conclusion::Violates);
    // Rescaling maps the λ gap onto the raw pair's gap.
    let gap = (v.lambda0 - v.lambda0_pt) / recast.gamma;
    assert!((gap - 0.0846).abs() < 2e-3);
}

#[test]
fn ground_projectors_of_hakye_sigma() {
    let raw = hakye_witness(&HaKyeParams::reference()).unwrap();
    let recast = sigma_form_from_matrix(&raw).unwrap();
    let w = &recast.witness;
    let p = extremal_projectors(w.sigma().op()).unwrap();
    let value = w.operator().hs_inner(&p.f0).unwrap() / p.f0_rank as f64;
    assert!((value - (w.lambda0_sigma() - w.c())).abs() < 1e-12);
    // The σ^Γ ground space has the three-fold degeneracy of the PT blocks.
    assert_eq!(p.e0_rank, 3);
    assert!(p.e0_degenerate());
    let lhs = w.operator().hs_inner(&p.e0.pt()).unwrap();
    let rhs = w.operator().pt().hs_inner(&p.e0).unwrap();
    assert!((lhs - rhs).abs() < 1e-12);
    assert!(rhs < 0.0);
}
