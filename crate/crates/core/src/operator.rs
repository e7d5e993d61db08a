//! Dense Hermitian operators on a bipartite space `H_A ⊗ H_B`.
//!
//! Basis states are laid out A-major: the product basis vector `|i⟩|j⟩`
//! sits at row `i * d_b + j`. Every partial transpose and every file
//! written by the CLI depends on this layout.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Entrywise tolerance on `|A[r][s] - conj(A[s][r])|`.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Default relative residual tolerance for [`HermitianOperator::eig`].
pub const DEFAULT_EIG_TOL: f64 = 1e-10;
/// Default relative cut-off for [`HermitianOperator::numeric_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-9;
/// Imaginary residue above which a trace of a product is rejected.
pub const NON_REAL_TOL: f64 = 1e-10;

/// Local dimensions of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    d_a: usize,
    d_b: usize,
}

impl Dims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::InvalidDims { d_a, d_b });
        }
        Ok(Self { d_a, d_b })
    }

    pub fn a(&self) -> usize {
        self.d_a
    }

    pub fn b(&self) -> usize {
        self.d_b
    }

    /// `d_A · d_B`.
    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    /// Row of the product basis state `|i⟩|j⟩`.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.d_b + j
    }

    /// Inverse of [`Dims::index`].
    #[inline]
    pub fn split(&self, r: usize) -> (usize, usize) {
        (r / self.d_b, r % self.d_b)
    }
}

/// Which tensor factor a partial transpose acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Subsystem {
    A,
    #[default]
    B,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dims: Dims,
    matrix: CMatrix,
}

impl HermitianOperator {
    /// Validates squareness, side length and Hermiticity of `entries`.
    pub fn new(entries: CMatrix, dims: Dims) -> Result<Self> {
        let n = dims.total();
        if entries.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.nrows(),
            });
        }
        if entries.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: entries.ncols(),
            });
        }
        if let Some((row, col, asymmetry)) = first_asymmetry(&entries, HERMITICITY_TOL) {
            return Err(Error::NotHermitian {
                row,
                col,
                asymmetry,
            });
        }
        Ok(Self {
            dims,
            matrix: entries,
        })
    }

    /// Builds an operator from a matrix that is Hermitian up to rounding,
    /// replacing it with its exact Hermitian part `(M + M†)/2`.
    pub(crate) fn from_hermitian_part(matrix: CMatrix, dims: Dims) -> Self {
        debug_assert_eq!(matrix.nrows(), dims.total());
        let adj = matrix.adjoint();
        let matrix = (matrix + adj).scale(0.5);
        Self { dims, matrix }
    }

    pub fn identity(dims: Dims) -> Self {
        let n = dims.total();
        Self {
            dims,
            matrix: CMatrix::identity(n, n),
        }
    }

    pub fn zeros(dims: Dims) -> Self {
        let n = dims.total();
        Self {
            dims,
            matrix: CMatrix::zeros(n, n),
        }
    }

    /// Rank-one projector `|ψ⟩⟨ψ|` (not normalized).
    pub fn projector(psi: &CVector, dims: Dims) -> Result<Self> {
        if psi.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: psi.len(),
            });
        }
        Ok(Self::from_hermitian_part(psi * psi.adjoint(), dims))
    }

    /// Real diagonal operator.
    pub fn diagonal(values: &[f64], dims: Dims) -> Result<Self> {
        if values.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: values.len(),
            });
        }
        let diag = CVector::from_iterator(values.len(), values.iter().map(|&v| c64(v, 0.0)));
        Ok(Self {
            dims,
            matrix: CMatrix::from_diagonal(&diag),
        })
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, r: usize, s: usize) -> Complex64 {
        self.matrix[(r, s)]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }

    /// `self + s·I`.
    pub fn shifted(&self, s: f64) -> Self {
        let mut matrix = self.matrix.clone();
        for k in 0..matrix.nrows() {
            matrix[(k, k)] += s;
        }
        Self {
            dims: self.dims,
            matrix,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            dims: self.dims,
            matrix: self.matrix.scale(factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(Self {
            dims: self.dims,
            matrix: &self.matrix + &other.matrix,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(Self {
            dims: self.dims,
            matrix: &self.matrix - &other.matrix,
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dims(other)?;
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total(),
                found: other.dims.total(),
            });
        }
        Ok(())
    }

    /// Full ascending spectrum. Fails if any eigenpair residual exceeds
    /// `tol · max(1, ‖A‖)`.
    pub fn eig(&self, tol: f64) -> Result<Spectrum> {
        eig_hermitian_matrix(&self.matrix, tol)
    }

    /// [`HermitianOperator::eig`] at [`DEFAULT_EIG_TOL`].
    pub fn spectrum(&self) -> Result<Spectrum> {
        self.eig(DEFAULT_EIG_TOL)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.spectrum()?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.spectrum()?.min())
    }

    /// Smallest eigenvalue and a unit eigenvector for it.
    pub fn min_eigenpair(&self) -> Result<(f64, CVector)> {
        let spec = self.spectrum()?;
        Ok((spec.min(), spec.vector(0)))
    }

    /// Partial transpose on the chosen factor. For `Subsystem::B`,
    /// `out[(i,j),(k,l)] = in[(i,l),(k,j)]`.
    pub fn partial_transpose(&self, side: Subsystem) -> Self {
        let d = self.dims;
        let n = d.total();
        let matrix = CMatrix::from_fn(n, n, |r, s| {
            let (i, j) = d.split(r);
            let (k, l) = d.split(s);
            match side {
                Subsystem::B => self.matrix[(d.index(i, l), d.index(k, j))],
                Subsystem::A => self.matrix[(d.index(k, j), d.index(i, l))],
            }
        });
        Self { dims: d, matrix }
    }

    /// B-side partial transpose.
    pub fn pt(&self) -> Self {
        self.partial_transpose(Subsystem::B)
    }

    /// Hilbert–Schmidt inner product `tr(A·B)`.
    pub fn hs_inner(&self, other: &Self) -> Result<f64> {
        self.check_dims(other)?;
        let n = self.dims.total();
        let mut acc = Complex64::new(0.0, 0.0);
        for r in 0..n {
            for s in 0..n {
                acc += self.matrix[(r, s)] * other.matrix[(s, r)];
            }
        }
        if acc.im.abs() > NON_REAL_TOL {
            return Err(Error::NonRealResult { imag: acc.im });
        }
        Ok(acc.re)
    }

    /// `(tr A²)^{1/2}`.
    pub fn hs_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Number of eigenvalues with `|λ| > tol · max|λ|`.
    pub fn numeric_rank(&self, tol: f64) -> Result<usize> {
        let values = self.eigenvalues()?;
        let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return Ok(0);
        }
        Ok(values.iter().filter(|v| v.abs() > tol * scale).count())
    }

    /// `⟨ψ|A|ψ⟩`, real part.
    pub fn expectation(&self, psi: &CVector) -> Result<f64> {
        if psi.len() != self.dims.total() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.total(),
                found: psi.len(),
            });
        }
        Ok(psi.dotc(&(&self.matrix * psi)).re)
    }
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    values: Vec<f64>,
    vectors: CMatrix,
}

impl Spectrum {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvectors as columns, paired with [`Spectrum::values`].
    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> CVector {
        self.vectors.column(k).into_owned()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of eigenvalues within `tol` of the minimum.
    pub fn ground_multiplicity(&self, tol: f64) -> usize {
        let lo = self.min();
        self.values.iter().take_while(|&&v| v - lo <= tol).count()
    }

    /// Orthogonal projector onto the eigenvectors `0..count`.
    pub fn lowest_projector(&self, count: usize) -> CMatrix {
        let cols = self.vectors.columns(0, count);
        cols * cols.adjoint()
    }
}

/// Eigendecomposition of a square Hermitian matrix without bipartite metadata.
pub fn eig_hermitian_matrix(m: &CMatrix, tol: f64) -> Result<Spectrum> {
    let n = m.nrows();
    let max_iter = 1000 * n.max(1);
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, max_iter).ok_or(
        Error::ConvergenceFailure {
            residual: f64::INFINITY,
        },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let values: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

    let scale = values
        .iter()
        .fold(1.0_f64, |acc: f64, v: &f64| acc.max(v.abs()));
    let mut worst = 0.0_f64;
    for (k, &lambda) in values.iter().enumerate() {
        let v = vectors.column(k);
        let residual = (m * v - v * c64(lambda, 0.0)).norm();
        worst = worst.max(residual);
    }
    if worst.is_nan() || worst > tol * scale {
        return Err(Error::ConvergenceFailure { residual: worst });
    }
    Ok(Spectrum { values, vectors })
}

/// Ground eigenpair of a small Hermitian matrix.
pub(crate) fn ground_state(m: &CMatrix) -> Result<(f64, CVector)> {
    let spec = eig_hermitian_matrix(m, DEFAULT_EIG_TOL)?;
    Ok((spec.min(), spec.vector(0)))
}

fn first_asymmetry(m: &CMatrix, tol: f64) -> Option<(usize, usize, f64)> {
    let n = m.nrows();
    for r in 0..n {
        for s in r..n {
            let asym = (m[(r, s)] - m[(s, r)].conj()).norm();
            if asym > tol || asym.is_nan() {
                return Some((r, s, asym));
            }
        }
    }
    None
}

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d22() -> Dims {
        Dims::new(2, 2).unwrap()
    }

    #[test]
    fn dims_reject_trivial_factor() {
        assert!(matches!(Dims::new(1, 3), Err(Error::InvalidDims { .. })));
        let d = Dims::new(3, 4).unwrap();
        assert_eq!(d.total(), 12);
        assert_eq!(d.index(2, 1), 9);
        assert_eq!(d.split(9), (2, 1));
    }

    #[test]
    fn identity_is_valid() {
        let op = HermitianOperator::new(CMatrix::identity(4, 4), d22()).unwrap();
        assert_eq!(op.trace(), 4.0);
    }

    #[test]
    fn anti_hermitian_entry_rejected() {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 1)] = c64(0.0, 1.0);
        m[(1, 0)] = c64(0.0, 1.0);
        match HermitianOperator::new(m, d22()) {
            Err(Error::NotHermitian {
                row,
                col,
                asymmetry,
            }) => {
                assert_eq!((row, col), (0, 1));
                assert!((asymmetry - 2.0).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_side_rejected() {
        let m = CMatrix::identity(5, 5);
        assert!(matches!(
            HermitianOperator::new(m, d22()),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 5
            })
        ));
    }

    #[test]
    fn diagonal_spectrum_sorted() {
        let d = Dims::new(2, 2).unwrap();
        let op = HermitianOperator::diagonal(&[3.0, 1.0, 2.0, 0.5], d).unwrap();
        let spec = op.spectrum().unwrap();
        assert_eq!(spec.values(), &[0.5, 1.0, 2.0, 3.0]);
        let v0 = spec.vector(0);
        assert!((v0[3].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn min_eigenpair_of_diagonal() {
        let op = HermitianOperator::diagonal(&[-2.0, 0.0, 1.0, 5.0], d22()).unwrap();
        let (lambda, v) = op.min_eigenpair().unwrap();
        assert_eq!(lambda, -2.0);
        assert!((v[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_min_eigenpair_degenerate() {
        let (lambda, v) = HermitianOperator::identity(d22()).min_eigenpair().unwrap();
        assert!((lambda - 1.0).abs() < 1e-14);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_is_pt_fixed_point() {
        let op = HermitianOperator::diagonal(&[1.0, 2.0, 3.0, 4.0], d22()).unwrap();
        assert_eq!(op.pt(), op);
        assert_eq!(op.partial_transpose(Subsystem::A), op);
    }

    #[test]
    fn hs_basics() {
        let id = HermitianOperator::identity(d22());
        assert_eq!(id.hs_inner(&id).unwrap(), 4.0);
        assert_eq!(id.hs_norm(), 2.0);
        assert_eq!(HermitianOperator::zeros(d22()).hs_norm(), 0.0);
    }

    #[test]
    fn hs_inner_dims_checked() {
        let a = HermitianOperator::identity(d22());
        let b = HermitianOperator::identity(Dims::new(2, 3).unwrap());
        assert!(matches!(
            a.hs_inner(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rank_of_simple_operators() {
        let id = HermitianOperator::identity(d22());
        assert_eq!(id.numeric_rank(DEFAULT_RANK_TOL).unwrap(), 4);
        let p = HermitianOperator::diagonal(&[1.0, 0.0, 0.0, 0.0], d22()).unwrap();
        assert_eq!(p.numeric_rank(DEFAULT_RANK_TOL).unwrap(), 1);
        let mix = HermitianOperator::diagonal(&[0.5, 0.0, 0.0, 0.5], d22()).unwrap();
        assert_eq!(mix.numeric_rank(DEFAULT_RANK_TOL).unwrap(), 2);
        assert_eq!(
            HermitianOperator::zeros(d22())
                .numeric_rank(DEFAULT_RANK_TOL)
                .unwrap(),
            0
        );
    }
}
