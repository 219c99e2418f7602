//! Bipartite structure on `H1 ⊗ H2`: Schmidt decompositions, product
//! detection, partial traces, entanglement entropy and trace distance.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{eigh, normalize_phase, svd};
use crate::matrix::{ComplexMatrix, Tolerance, C64, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteSpace {
    d1: usize,
    d2: usize,
}

impl BipartiteSpace {
    pub fn new(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return Err(Error::InvalidArgument("subsystem dimensions must be positive"));
        }
        d1.checked_mul(d2).ok_or(Error::ShapeOverflow(d1, d2))?;
        Ok(Self { d1, d2 })
    }

    pub fn d1(&self) -> usize {
        self.d1
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn dim(&self) -> usize {
        self.d1 * self.d2
    }

    pub(crate) fn check_operator(&self, u: &ComplexMatrix) -> Result<()> {
        let n = self.dim();
        if u.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: (n, n),
                found: u.shape(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_vector(&self, v: &ComplexMatrix, dim: usize) -> Result<()> {
        if v.shape() != (dim, 1) {
            return Err(Error::DimensionMismatch {
                expected: (dim, 1),
                found: v.shape(),
            });
        }
        Ok(())
    }
}

/// Unit vector in `H1 ⊗ H2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    space: BipartiteSpace,
    vec: ComplexMatrix,
}

impl PureState {
    pub fn new(space: BipartiteSpace, vec: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        space.check_vector(&vec, space.dim())?;
        let norm = vec.norm();
        if (norm - 1.0).abs() > tol.eps {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { space, vec })
    }

    /// `a ⊗ b` for unit vectors `a ∈ H1`, `b ∈ H2`.
    pub fn product(a: &ComplexMatrix, b: &ComplexMatrix, tol: Tolerance) -> Result<Self> {
        let space = BipartiteSpace::new(a.rows(), b.rows())?;
        space.check_vector(a, a.rows())?;
        space.check_vector(b, b.rows())?;
        Self::new(space, a.kron(b)?, tol)
    }

    /// Normalizes `vec` first; for images of unit vectors under unitaries
    /// whose norms drift by rounding.
    pub(crate) fn renormalized(space: BipartiteSpace, vec: ComplexMatrix) -> Self {
        let n = vec.norm();
        Self {
            space,
            vec: vec.scale_real(1.0 / n),
        }
    }

    pub fn space(&self) -> BipartiteSpace {
        self.space
    }

    pub fn vec(&self) -> &ComplexMatrix {
        &self.vec
    }

    pub fn into_vec(self) -> ComplexMatrix {
        self.vec
    }

    /// The `d1 × d2` coefficient matrix `M[i][j] = ψ[i·d2 + j]`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        let d2 = self.space.d2;
        ComplexMatrix::from_fn(self.space.d1, d2, |i, j| self.vec[(i * d2 + j, 0)])
    }

    /// Applies a unitary on `H1 ⊗ H2` and returns the (renormalized) image.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<PureState> {
        self.space.check_operator(u)?;
        Ok(Self::renormalized(self.space, u * &self.vec))
    }
}

/// `ψ = Σ_k coeffs[k] · left[k] ⊗ right[k]`.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Descending, non-negative; `min(d1, d2)` entries including zeros.
    pub coeffs: Vec<f64>,
    pub left: Vec<ComplexMatrix>,
    pub right: Vec<ComplexMatrix>,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut acc = self.left[0].kron(&self.right[0]).unwrap().scale_real(self.coeffs[0]);
        for k in 1..self.coeffs.len() {
            acc = &acc + &self.left[k].kron(&self.right[k]).unwrap().scale_real(self.coeffs[k]);
        }
        acc
    }

    pub fn rank(&self, tol: Tolerance) -> usize {
        self.coeffs.iter().filter(|&&c| c > tol.eps).count()
    }

    /// Second-largest coefficient, zero when there is only one.
    pub fn second(&self) -> f64 {
        self.coeffs.get(1).copied().unwrap_or(0.0)
    }

    /// `−Σ c²·log₂ c²` in bits.
    pub fn entropy(&self) -> f64 {
        entropy_bits(self.coeffs.iter().map(|c| c * c))
    }
}

/// Shannon entropy in bits. Weights below `ε²` count as zero and weights
/// within a few ulps of one as exactly one.
pub(crate) fn entropy_bits(probabilities: impl Iterator<Item = f64>) -> f64 {
    let h: f64 = probabilities
        .filter(|&p| p > f64::EPSILON * f64::EPSILON && p < 1.0 - 4.0 * f64::EPSILON)
        .map(|p| -p * libm::log2(p))
        .sum();
    h.max(0.0)
}

/// Schmidt decomposition from the SVD of the coefficient matrix.
///
/// Each left vector's first component above `tol.eps` is made real
/// positive and the compensating phase moves into the right vector.
pub fn schmidt(psi: &PureState, tol: Tolerance) -> SchmidtDecomposition {
    let m = psi.coefficient_matrix();
    let dec = svd(&m);
    let k = dec.singular_values.len();
    let mut left = Vec::with_capacity(k);
    let mut right = Vec::with_capacity(k);
    for idx in 0..k {
        let mut l = dec.u.col(idx);
        let phase = normalize_phase(&mut l, tol.eps);
        // M = Σ σ u v†, so the H2 factor is the conjugate of column v, i.e.
        // row `idx` of V†.
        let r = ComplexMatrix::from_fn(m.cols(), 1, |j, _| dec.v_adj[(idx, j)] / phase);
        left.push(l);
        right.push(r);
    }
    SchmidtDecomposition {
        coeffs: dec.singular_values,
        left,
        right,
    }
}

/// Number of Schmidt coefficients above `tol.eps`.
pub fn schmidt_rank(psi: &PureState, tol: Tolerance) -> usize {
    schmidt(psi, tol).rank(tol).max(1)
}

/// `Some((a, b))` with `ψ ≈ a ⊗ b` when the Schmidt rank is one.
pub fn is_product(psi: &PureState, tol: Tolerance) -> Option<(ComplexMatrix, ComplexMatrix)> {
    let dec = schmidt(psi, tol);
    if dec.rank(tol) <= 1 {
        let a = dec.left.into_iter().next()?;
        let b = dec.right.into_iter().next()?;
        Some((a, b))
    } else {
        None
    }
}

/// Entanglement entropy of a pure state, in bits.
pub fn entanglement_entropy(psi: &PureState) -> f64 {
    schmidt(psi, Tolerance::default()).entropy()
}

/// Which tensor factor a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(mat: ComplexMatrix, tol: Tolerance) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let herm = mat.hermiticity_defect();
        if herm > tol.eps {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = mat.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.eps {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min = eigh(&mat, tol.eps).values.last().copied().unwrap_or(0.0);
        if min < -tol.eps {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { mat })
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &ComplexMatrix) -> Self {
        Self {
            mat: psi.outer(psi),
        }
    }

    pub(crate) fn trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.mat, Tolerance::DEFAULT_EPS).values
    }
}

/// Contracts away the factor not named by `keep`.
pub fn partial_trace(
    rho: &DensityOperator,
    space: BipartiteSpace,
    keep: Subsystem,
) -> Result<DensityOperator> {
    if rho.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: (space.dim(), space.dim()),
            found: rho.mat.shape(),
        });
    }
    let (d1, d2) = (space.d1, space.d2);
    let m = &rho.mat;
    let out = match keep {
        Subsystem::First => ComplexMatrix::from_fn(d1, d1, |i, k| {
            (0..d2).map(|j| m[(i * d2 + j, k * d2 + j)]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(d2, d2, |j, l| {
            (0..d1).map(|i| m[(i * d2 + j, i * d2 + l)]).sum()
        }),
    };
    Ok(DensityOperator::trusted(out))
}

/// `½·Σ|λ(a − b)|`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.mat.shape(),
            found: b.mat.shape(),
        });
    }
    let diff = &a.mat - &b.mat;
    if diff.as_slice().iter().all(|&z| z == ZERO) {
        return Ok(0.0);
    }
    let values = eigh(&diff, Tolerance::DEFAULT_EPS).values;
    Ok((0.5 * values.iter().map(|x| x.abs()).sum::<f64>()).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::random::{haar_unitary, random_state, RngSeed};
    use core::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn space(d1: usize, d2: usize) -> BipartiteSpace {
        BipartiteSpace::new(d1, d2).unwrap()
    }

    fn bell() -> PureState {
        let v = ComplexMatrix::from_real_rows(&[[FRAC_1_SQRT_2], [0.0], [0.0], [FRAC_1_SQRT_2]]);
        PureState::new(space(2, 2), v, tol()).unwrap()
    }

    fn basis_product(d1: usize, i: usize, d2: usize, j: usize) -> PureState {
        PureState::product(&ComplexMatrix::basis(d1, i), &ComplexMatrix::basis(d2, j), tol()).unwrap()
    }

    #[test]
    fn schmidt_of_product_basis_state() {
        let psi = basis_product(2, 0, 2, 1);
        let s = schmidt(&psi, tol());
        assert!((s.coeffs[0] - 1.0).abs() < 1e-15 && s.coeffs[1].abs() < 1e-15);
        assert!(s.left[0].distance(&ComplexMatrix::basis(2, 0)) < 1e-15);
        assert!(s.right[0].distance(&ComplexMatrix::basis(2, 1)) < 1e-15);
    }

    #[test]
    fn schmidt_of_bell_state() {
        let s = schmidt(&bell(), tol());
        for c in &s.coeffs {
            assert!((c - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        assert!(s.reconstruct().distance(bell().vec()) < 1e-15);
    }

    #[test]
    fn schmidt_random_3x4() {
        let v = random_state(12, RngSeed(9));
        let psi = PureState::new(space(3, 4), v.clone(), tol()).unwrap();
        let s = schmidt(&psi, tol());
        assert_eq!(s.coeffs.len(), 3);
        assert!(s.reconstruct().distance(&v) < 1e-10);
        let total: f64 = s.coeffs.iter().map(|c| c * c).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_ranks() {
        assert_eq!(schmidt_rank(&basis_product(2, 0, 2, 0), tol()), 1);
        assert_eq!(schmidt_rank(&bell(), tol()), 2);
        let plus = ComplexMatrix::from_real_rows(&[[FRAC_1_SQRT_2], [FRAC_1_SQRT_2]]);
        let input = PureState::product(&plus, &ComplexMatrix::basis(2, 0), tol()).unwrap();
        let image = input.evolve(&gates::cnot()).unwrap();
        assert!(image.vec().distance(bell().vec()) < 1e-15);
        assert_eq!(schmidt_rank(&image, tol()), 2);
    }

    #[test]
    fn product_detection() {
        let (a, b) = is_product(&basis_product(2, 1, 2, 0), tol()).unwrap();
        assert!(a.distance(&ComplexMatrix::basis(2, 1)) < 1e-15);
        assert!(b.distance(&ComplexMatrix::basis(2, 0)) < 1e-15);
        assert!(is_product(&bell(), tol()).is_none());

        let v = haar_unitary(2, RngSeed(3));
        let w = haar_unitary(2, RngSeed(4));
        let psi = basis_product(2, 0, 2, 0).evolve(&v.kron(&w).unwrap()).unwrap();
        let (a, b) = is_product(&psi, tol()).unwrap();
        assert!(a.kron(&b).unwrap().distance(psi.vec()) < 1e-12);
        // phase convention on the left factor
        let lead = a.as_slice().iter().find(|z| z.norm() > 1e-9).unwrap();
        assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);
    }

    #[test]
    fn entropy_examples() {
        assert!(entanglement_entropy(&basis_product(3, 2, 2, 1)) < 1e-15);
        assert!((entanglement_entropy(&bell()) - 1.0).abs() < 1e-14);
        let v = ComplexMatrix::from_real_rows(&[[libm::sqrt(0.9)], [0.0], [0.0], [libm::sqrt(0.1)]]);
        let psi = PureState::new(space(2, 2), v, tol()).unwrap();
        // -0.9 log2 0.9 - 0.1 log2 0.1
        assert!((entanglement_entropy(&psi) - 0.468_995_593_589_281_2).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_examples() {
        let r1 = DensityOperator::pure(&random_state(2, RngSeed(1)));
        let r2 = DensityOperator::pure(&random_state(3, RngSeed(2)));
        let joint = DensityOperator::trusted(r1.matrix().kron(r2.matrix()).unwrap());
        let kept = partial_trace(&joint, space(2, 3), Subsystem::First).unwrap();
        assert!(kept.matrix().distance(r1.matrix()) < 1e-14);
        let kept = partial_trace(&joint, space(2, 3), Subsystem::Second).unwrap();
        assert!(kept.matrix().distance(r2.matrix()) < 1e-14);

        let b = DensityOperator::pure(bell().vec());
        let m = partial_trace(&b, space(2, 2), Subsystem::First).unwrap();
        assert!(m.matrix().distance(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        assert!(partial_trace(&b, space(2, 3), Subsystem::First).is_err());
    }

    #[test]
    fn marginal_spectra_agree() {
        let psi = random_state(8, RngSeed(4));
        let rho = DensityOperator::pure(&psi);
        let a = partial_trace(&rho, space(2, 4), Subsystem::First).unwrap().eigenvalues();
        let b = partial_trace(&rho, space(2, 4), Subsystem::Second).unwrap().eigenvalues();
        for k in 0..2 {
            assert!((a[k] - b[k]).abs() < 1e-10);
        }
        for x in &b[2..] {
            assert!(x.abs() < 1e-10);
        }
    }

    #[test]
    fn trace_distance_examples() {
        let rho = DensityOperator::pure(&random_state(3, RngSeed(6)));
        assert_eq!(trace_distance(&rho, &rho).unwrap(), 0.0);
        let zero = DensityOperator::pure(&ComplexMatrix::basis(2, 0));
        let one = DensityOperator::pure(&ComplexMatrix::basis(2, 1));
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        let plus = DensityOperator::pure(&ComplexMatrix::from_real_rows(&[
            [FRAC_1_SQRT_2],
            [FRAC_1_SQRT_2],
        ]));
        assert!((trace_distance(&zero, &plus).unwrap() - FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(trace_distance(&zero, &rho).is_err());
    }

    #[test]
    fn density_validation() {
        let tol = tol();
        assert!(DensityOperator::new(ComplexMatrix::identity(2).scale_real(0.5), tol).is_ok());
        assert!(DensityOperator::new(ComplexMatrix::identity(2), tol).is_err());
        let neg = ComplexMatrix::from_real_rows(&[[1.5, 0.0], [0.0, -0.5]]);
        assert!(DensityOperator::new(neg, tol).is_err());
        let nonherm = ComplexMatrix::from_real_rows(&[[0.5, 0.1], [0.0, 0.5]]);
        assert!(DensityOperator::new(nonherm, tol).is_err());
    }

    #[test]
    fn pure_state_validation() {
        let v = ComplexMatrix::from_real_rows(&[[1.0], [1.0], [0.0], [0.0]]);
        assert!(matches!(
            PureState::new(space(2, 2), v, tol()),
            Err(Error::NotNormalized { .. })
        ));
        let v = ComplexMatrix::basis(3, 0);
        assert!(matches!(
            PureState::new(space(2, 2), v, tol()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(BipartiteSpace::new(0, 2).is_err());
    }
}
