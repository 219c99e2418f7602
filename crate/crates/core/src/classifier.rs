//! Classification of bipartite unitaries that never create entanglement.
//!
//! A unitary on `H1 ⊗ H2` maps all product states to product states iff it
//! is a product `V ⊗ W` or, when `d1 == d2`, a product composed with the
//! swap. Both shapes are detected spectrally: `U = V ⊗ W` exactly when the
//! realigned matrix `R[(i,k),(j,l)] = U[(i,j),(k,l)]` has rank one, and the
//! rank-one singular pair yields the factors. Everything else gets an
//! explicit product input whose image is entangled.
//!
//! [`classify_slice`] handles the weaker situation where only the slice
//! `φ ↦ U(φ ⊗ φ0)` is known to stay product, following the case split on the
//! orthogonality pattern of the image factors.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use rand::Rng;

use crate::bipartite::{is_product, schmidt, BipartiteSpace, PureState};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{isometry_defect, normalize_phase, numerical_rank, require_unitary, svd};
use crate::matrix::{ComplexMatrix, Tolerance, C64};
use crate::random::{random_state_from, RngSeed};

/// Random product inputs tried after the deterministic grid in the witness
/// search.
pub const WITNESS_RANDOM_INPUTS: usize = 256;

/// Operator-Schmidt reshuffle: `R[i·d1 + k, j·d2 + l] = U[i·d2 + j, k·d2 + l]`.
pub fn realign(u: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    let space = BipartiteSpace::new(d1, d2)?;
    space.check_operator(u)?;
    Ok(ComplexMatrix::from_fn(d1 * d1, d2 * d2, |r, c| {
        let (i, k) = (r / d1, r % d1);
        let (j, l) = (c / d2, c % d2);
        u[(i * d2 + j, k * d2 + l)]
    }))
}

/// Inverse of [`realign`].
pub fn unrealign(r: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    if r.shape() != (d1 * d1, d2 * d2) {
        return Err(Error::DimensionMismatch {
            expected: (d1 * d1, d2 * d2),
            found: r.shape(),
        });
    }
    let n = d1 * d2;
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (i, j) = (row / d2, row % d2);
        let (k, l) = (col / d2, col % d2);
        r[(i * d1 + k, j * d2 + l)]
    }))
}

/// Singular values of the realigned operator, descending.
pub fn operator_schmidt_coefficients(u: &ComplexMatrix, d1: usize, d2: usize) -> Result<Vec<f64>> {
    Ok(svd(&realign(u, d1, d2)?).singular_values)
}

/// Number of realignment singular values above `tol.eps · σ_max`.
pub fn operator_schmidt_rank(u: &ComplexMatrix, d1: usize, d2: usize, tol: Tolerance) -> Result<usize> {
    let sv = operator_schmidt_coefficients(u, d1, d2)?;
    Ok(numerical_rank(&sv, tol.eps).max(1))
}

/// Where an entangling witness came from in the deterministic search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateInput {
    /// `e_i ⊗ f_k`
    Basis { i: usize, k: usize },
    /// `(e_i + e_j)/√2 ⊗ f_k`
    ObjectSuperposition { i: usize, j: usize, k: usize },
    /// `e_i ⊗ (f_k + f_l)/√2`
    ProbeSuperposition { i: usize, k: usize, l: usize },
    /// `(e_i + e_j) ⊗ (f_k + f_l)`, normalized
    Grid { i: usize, j: usize, k: usize, l: usize },
    /// The n-th seeded random product input.
    Random(usize),
}

impl fmt::Display for CandidateInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Basis { i, k } => write!(f, "basis:{i},{k}"),
            Self::ObjectSuperposition { i, j, k } => write!(f, "object-sup:{i}+{j},{k}"),
            Self::ProbeSuperposition { i, k, l } => write!(f, "probe-sup:{i},{k}+{l}"),
            Self::Grid { i, j, k, l } => write!(f, "grid:{i}+{j},{k}+{l}"),
            Self::Random(n) => write!(f, "random:{n}"),
        }
    }
}

fn pair(d: usize, i: usize, j: usize) -> ComplexMatrix {
    if i == j {
        return ComplexMatrix::basis(d, i);
    }
    let mut v = ComplexMatrix::basis(d, i);
    v[(j, 0)] = C64::new(1.0, 0.0);
    v.scale_real(FRAC_1_SQRT_2)
}

fn product_input(a: &ComplexMatrix, b: &ComplexMatrix, space: BipartiteSpace) -> PureState {
    PureState::renormalized(space, a.kron(b).expect("small factors"))
}

/// The witness search order: basis states, object-side and probe-side
/// superpositions, then `n_random` seeded random product states.
pub fn witness_candidates(
    space: BipartiteSpace,
    seed: RngSeed,
    n_random: usize,
) -> Vec<(CandidateInput, PureState)> {
    let (d1, d2) = (space.d1(), space.d2());
    let mut out = Vec::new();
    for i in 0..d1 {
        for k in 0..d2 {
            out.push((
                CandidateInput::Basis { i, k },
                product_input(&ComplexMatrix::basis(d1, i), &ComplexMatrix::basis(d2, k), space),
            ));
        }
    }
    for i in 0..d1 {
        for j in i + 1..d1 {
            for k in 0..d2 {
                out.push((
                    CandidateInput::ObjectSuperposition { i, j, k },
                    product_input(&pair(d1, i, j), &ComplexMatrix::basis(d2, k), space),
                ));
            }
        }
    }
    for i in 0..d1 {
        for k in 0..d2 {
            for l in k + 1..d2 {
                out.push((
                    CandidateInput::ProbeSuperposition { i, k, l },
                    product_input(&ComplexMatrix::basis(d1, i), &pair(d2, k, l), space),
                ));
            }
        }
    }
    out.extend(random_products(space, seed, n_random).into_iter().enumerate().map(
        |(n, psi)| (CandidateInput::Random(n), psi),
    ));
    out
}

fn random_products(space: BipartiteSpace, seed: RngSeed, n: usize) -> Vec<PureState> {
    let mut rng = seed.rng();
    (0..n)
        .map(|_| {
            let a = random_state_from(space.d1(), &mut rng);
            let b = random_state_from(space.d2(), &mut rng);
            product_input(&a, &b, space)
        })
        .collect()
}

/// A product input whose image is entangled.
#[derive(Debug, Clone)]
pub struct EntanglingWitness {
    pub candidate: CandidateInput,
    pub input: PureState,
    pub image: PureState,
    /// Second Schmidt coefficient of the image.
    pub second_coefficient: f64,
}

#[derive(Debug, Clone)]
pub enum NonEntanglingForm {
    /// `U = V ⊗ W`.
    Product { v: ComplexMatrix, w: ComplexMatrix },
    /// `U = (V21 ⊗ W12)·SWAP`, i.e. `U(φ ⊗ χ) = V21 χ ⊗ W12 φ`.
    SwapForm { v21: ComplexMatrix, w12: ComplexMatrix },
    Entangling(EntanglingWitness),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Product,
    Swap,
    Entangling,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Product => "product",
            Verdict::Swap => "swap",
            Verdict::Entangling => "entangling",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl NonEntanglingForm {
    pub fn verdict(&self) -> Verdict {
        match self {
            Self::Product { .. } => Verdict::Product,
            Self::SwapForm { .. } => Verdict::Swap,
            Self::Entangling(_) => Verdict::Entangling,
        }
    }

    pub fn is_non_entangling(&self) -> bool {
        !matches!(self, Self::Entangling(_))
    }

    /// The operator rebuilt from its factors; `None` for entangling verdicts.
    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        match self {
            Self::Product { v, w } => v.kron(w).ok(),
            Self::SwapForm { v21, w12 } => {
                let local = v21.kron(w12).ok()?;
                Some(&local * &gates::swap(v21.rows()))
            }
            Self::Entangling(_) => None,
        }
    }
}

/// Factors of a rank-one realignment, with `V` normalized to be unitary
/// and its first significant entry (column order) real positive.
fn rank_one_factors(
    u: &ComplexMatrix,
    d1: usize,
    d2: usize,
    tol: Tolerance,
) -> Result<core::result::Result<(ComplexMatrix, ComplexMatrix), usize>> {
    let dec = svd(&realign(u, d1, d2)?);
    let rank = numerical_rank(&dec.singular_values, tol.eps).max(1);
    if rank != 1 {
        return Ok(Err(rank));
    }
    let sigma = dec.singular_values[0];
    let alpha = libm::sqrt(d1 as f64);
    let mut v = ComplexMatrix::from_fn(d1, d1, |i, k| dec.u[(i * d1 + k, 0)] * alpha);
    let mut w = ComplexMatrix::from_fn(d2, d2, |j, l| dec.v_adj[(0, j * d2 + l)] * (sigma / alpha));
    // phase convention: scan V column by column
    let lead = v.transpose().as_slice().iter().copied().find(|z| z.norm() > tol.eps);
    if let Some(z) = lead {
        let phase = z.conj() / z.norm();
        v = v.scale(phase);
        w = w.scale(phase.conj());
    }
    Ok(Ok((v, w)))
}

/// Factors `U = V ⊗ W`.
pub fn decompose_product(
    u: &ComplexMatrix,
    d1: usize,
    d2: usize,
    tol: Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    rank_one_factors(u, d1, d2, tol)?.map_err(|rank| Error::NotProductForm { rank })
}

/// Factors `U = (V21 ⊗ W12)·SWAP` on `C^d ⊗ C^d`.
pub fn decompose_swap(u: &ComplexMatrix, d: usize, tol: Tolerance) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = d.checked_mul(d).ok_or(Error::ShapeOverflow(d, d))?;
    if u.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: (n, n),
            found: u.shape(),
        });
    }
    let local = u * &gates::swap(d);
    rank_one_factors(&local, d, d, tol)?.map_err(|rank| Error::NotSwapForm { rank })
}

/// [`decompose_swap`] with the dimension constraint checked explicitly.
pub fn decompose_swap_dims(
    u: &ComplexMatrix,
    d1: usize,
    d2: usize,
    tol: Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if d1 != d2 {
        return Err(Error::UnequalDimensions { d1, d2 });
    }
    decompose_swap(u, d1, tol)
}

/// First candidate (in search order) whose image has second Schmidt
/// coefficient above `margin`.
pub fn find_witness(
    u: &ComplexMatrix,
    space: BipartiteSpace,
    seed: RngSeed,
    margin: f64,
    tol: Tolerance,
) -> Result<EntanglingWitness> {
    let candidates = witness_candidates(space, seed, WITNESS_RANDOM_INPUTS);
    let total = candidates.len();
    for (candidate, input) in candidates {
        let image = input.evolve(u)?;
        let second = schmidt(&image, tol).second();
        if second > margin {
            return Ok(EntanglingWitness {
                candidate,
                input,
                image,
                second_coefficient: second,
            });
        }
    }
    Err(Error::WitnessExhausted { candidates: total })
}

/// Decides which of the two non-entangling shapes `u` has, or produces an
/// entangling witness with margin `10·tol.eps`.
pub fn classify_unitary(
    u: &ComplexMatrix,
    d1: usize,
    d2: usize,
    tol: Tolerance,
    seed: RngSeed,
) -> Result<NonEntanglingForm> {
    let space = BipartiteSpace::new(d1, d2)?;
    space.check_operator(u)?;
    require_unitary(u, tol)?;
    if let Ok((v, w)) = rank_one_factors(u, d1, d2, tol)? {
        return Ok(NonEntanglingForm::Product { v, w });
    }
    if d1 == d2 {
        if let Ok((v21, w12)) = decompose_swap(u, d1, tol) {
            return Ok(NonEntanglingForm::SwapForm { v21, w12 });
        }
    }
    let witness = find_witness(u, space, seed, tol.scaled(10.0), tol)?;
    Ok(NonEntanglingForm::Entangling(witness))
}

/// Result of exhaustive sampling over product inputs.
#[derive(Debug, Clone)]
pub struct BruteForceReport {
    pub non_entangling: bool,
    pub inputs_checked: usize,
    pub counterexample: Option<EntanglingWitness>,
}

/// Independent check: every grid input `(e_i+e_j) ⊗ (f_k+f_l)` (normalized,
/// `i ≤ j`, `k ≤ l`) and `n_samples` random product inputs must map to
/// Schmidt-rank-one images.
pub fn brute_force_non_entangling(
    u: &ComplexMatrix,
    d1: usize,
    d2: usize,
    tol: Tolerance,
    seed: RngSeed,
    n_samples: usize,
) -> Result<BruteForceReport> {
    let space = BipartiteSpace::new(d1, d2)?;
    space.check_operator(u)?;
    require_unitary(u, tol)?;
    let mut inputs = Vec::new();
    for i in 0..d1 {
        for j in i..d1 {
            for k in 0..d2 {
                for l in k..d2 {
                    inputs.push((
                        CandidateInput::Grid { i, j, k, l },
                        product_input(&pair(d1, i, j), &pair(d2, k, l), space),
                    ));
                }
            }
        }
    }
    let mut rng = seed.derive("brute-force", 0).rng();
    for n in 0..n_samples {
        // one draw per sample keeps the stream independent of the grid size
        let s: u64 = rng.random();
        let a = random_state_from(d1, &mut RngSeed(s).rng());
        let b = random_state_from(d2, &mut RngSeed(s ^ 0x5555_5555_5555_5555).rng());
        inputs.push((CandidateInput::Random(n), product_input(&a, &b, space)));
    }
    let mut checked = 0;
    for (candidate, input) in inputs {
        checked += 1;
        let image = input.evolve(u)?;
        let second = schmidt(&image, tol).second();
        if second > tol.eps {
            return Ok(BruteForceReport {
                non_entangling: false,
                inputs_checked: checked,
                counterexample: Some(EntanglingWitness {
                    candidate,
                    input,
                    image,
                    second_coefficient: second,
                }),
            });
        }
    }
    Ok(BruteForceReport {
        non_entangling: true,
        inputs_checked: checked,
        counterexample: None,
    })
}

/// Shape of the slice map `φ ↦ U(φ ⊗ φ0)`.
#[derive(Debug, Clone)]
pub enum SliceForm {
    /// `U(φ ⊗ φ0) = Vφ ⊗ φ'` with `V` an isometry on `H1`.
    LocalOnObject { v: ComplexMatrix, phi_prime: ComplexMatrix },
    /// `U(φ ⊗ φ0) = φ' ⊗ W12 φ` with `W12 : H1 → H2` an isometry.
    TransferToProbe { phi_prime: ComplexMatrix, w12: ComplexMatrix },
}

impl SliceForm {
    pub fn name(&self) -> &'static str {
        match self {
            Self::LocalOnObject { .. } => "local_on_object",
            Self::TransferToProbe { .. } => "transfer_to_probe",
        }
    }

    /// Predicted image of `φ ⊗ φ0`.
    pub fn image(&self, phi: &ComplexMatrix) -> ComplexMatrix {
        match self {
            Self::LocalOnObject { v, phi_prime } => (v * phi).kron(phi_prime).expect("vector kron"),
            Self::TransferToProbe { phi_prime, w12 } => phi_prime.kron(&(w12 * phi)).expect("vector kron"),
        }
    }

    /// The isometry carried by either case.
    pub fn isometry(&self) -> &ComplexMatrix {
        match self {
            Self::LocalOnObject { v, .. } => v,
            Self::TransferToProbe { w12, .. } => w12,
        }
    }
}

/// Residual of `x` after projecting onto the line through unit vector `base`,
/// together with the overlap `⟨base|x⟩`.
fn off_line(base: &ComplexMatrix, x: &ComplexMatrix) -> (f64, C64) {
    let c = base.inner(x);
    ((x - &base.scale(c)).norm(), c)
}

/// Determines which of the two slice shapes `U` has on `H1 ⊗ φ0`.
///
/// Each basis image `U(e_i ⊗ φ0)` must be a product `a_i ⊗ b_i`. If all
/// `b_i` are parallel, the `a_i` (rephased) form the columns of `V`;
/// if all `a_i` are parallel, the rephased `b_i` form the columns of `W12`.
pub fn classify_slice(
    u: &ComplexMatrix,
    d1: usize,
    d2: usize,
    phi0: &ComplexMatrix,
    tol: Tolerance,
) -> Result<SliceForm> {
    let space = BipartiteSpace::new(d1, d2)?;
    space.check_operator(u)?;
    space.check_vector(phi0, d2)?;
    require_unitary(u, tol)?;
    let norm = phi0.norm();
    if (norm - 1.0).abs() > tol.eps {
        return Err(Error::NotNormalized { norm });
    }

    let mut lefts = Vec::with_capacity(d1);
    let mut rights = Vec::with_capacity(d1);
    for i in 0..d1 {
        let input = product_input(&ComplexMatrix::basis(d1, i), phi0, space);
        let image = input.evolve(u)?;
        match is_product(&image, tol) {
            Some((a, b)) => {
                lefts.push(a);
                rights.push(b);
            }
            None => {
                return Err(Error::SliceHypothesis {
                    input: format!("e{i}"),
                    index: i,
                    second_coefficient: schmidt(&image, tol).second(),
                })
            }
        }
    }
    for i in 0..d1 {
        for j in i + 1..d1 {
            let image = product_input(&pair(d1, i, j), phi0, space).evolve(u)?;
            let second = schmidt(&image, tol).second();
            if second > tol.eps {
                return Err(Error::SliceHypothesis {
                    input: format!("(e{i}+e{j})/√2"),
                    index: i,
                    second_coefficient: second,
                });
            }
        }
    }

    let line_tol = tol.scaled(10.0);
    let fits = |v: &[ComplexMatrix]| {
        let mut worst = 0.0f64;
        let mut phases = Vec::with_capacity(v.len());
        for x in v {
            let (res, c) = off_line(&v[0], x);
            worst = worst.max(res);
            phases.push(c);
        }
        (worst, phases)
    };
    let (right_spread, right_phases) = fits(&rights);
    let (left_spread, left_phases) = fits(&lefts);

    let form = if right_spread <= line_tol {
        // case (a): b_i = c_i b_0, so U(e_i ⊗ φ0) = c_i a_i ⊗ b_0
        let mut v = ComplexMatrix::zeros(d1, d1);
        for (i, a) in lefts.iter().enumerate() {
            v.set_col(i, &a.scale(right_phases[i]));
        }
        SliceForm::LocalOnObject {
            v,
            phi_prime: rights[0].clone(),
        }
    } else if left_spread <= line_tol {
        // case (b): a_i = c_i a_0, so U(e_i ⊗ φ0) = a_0 ⊗ c_i b_i
        let mut w12 = ComplexMatrix::zeros(d2, d1);
        for (i, b) in rights.iter().enumerate() {
            w12.set_col(i, &b.scale(left_phases[i]));
        }
        SliceForm::TransferToProbe {
            phi_prime: lefts[0].clone(),
            w12,
        }
    } else {
        return Err(Error::InconsistentSlice {
            residual: right_spread.min(left_spread),
        });
    };

    let defect = isometry_defect(form.isometry());
    if defect > tol.eps.max(line_tol) {
        return Err(Error::InconsistentSlice { residual: defect });
    }

    // Superposition consistency on (e_i + e_j)/√2 ⊗ φ0.
    let mut worst = 0.0f64;
    for i in 0..d1 {
        for j in i + 1..d1 {
            let phi = pair(d1, i, j);
            let actual = product_input(&phi, phi0, space).evolve(u)?;
            worst = worst.max(actual.vec().distance(&form.image(&phi)));
        }
    }
    if worst > line_tol {
        return Err(Error::InconsistentSlice { residual: worst });
    }
    Ok(form)
}

/// Phase-normalized copy of a vector, for stable reporting.
pub fn canonical_vector(v: &ComplexMatrix, tol: Tolerance) -> ComplexMatrix {
    let mut out = v.clone();
    normalize_phase(&mut out, tol.eps);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{phase_aligned_distance, phase_equality_gap, unitarity_defect};
    use crate::random::{haar_unitary, random_state};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn haar_product(d1: usize, d2: usize, seed: u64) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
        let v = haar_unitary(d1, RngSeed(seed));
        let w = haar_unitary(d2, RngSeed(seed + 1000));
        let u = v.kron(&w).unwrap();
        (v, w, u)
    }

    #[test]
    fn realign_identity_is_rank_one() {
        let r = realign(&ComplexMatrix::identity(4), 2, 2).unwrap();
        let vec_i = ComplexMatrix::from_real_rows(&[[1.0], [0.0], [0.0], [1.0]]);
        assert_eq!(r, vec_i.outer(&vec_i));
    }

    #[test]
    fn realign_round_trips() {
        let u = haar_unitary(6, RngSeed(1));
        let r = realign(&u, 2, 3).unwrap();
        assert_eq!(r.shape(), (4, 9));
        assert_eq!(unrealign(&r, 2, 3).unwrap(), u);
    }

    #[test]
    fn realign_of_haar_product_has_one_singular_value() {
        let (_, _, u) = haar_product(2, 2, 2);
        let sv = operator_schmidt_coefficients(&u, 2, 2).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-12, "σ_max = √(d1·d2)·... = {}", sv[0]);
        assert!(sv[1..].iter().all(|&s| s < 1e-12));
    }

    #[test]
    fn operator_schmidt_ranks() {
        assert_eq!(operator_schmidt_rank(&ComplexMatrix::identity(4), 2, 2, tol()).unwrap(), 1);
        assert_eq!(operator_schmidt_rank(&gates::swap(2), 2, 2, tol()).unwrap(), 4);
        assert_eq!(operator_schmidt_rank(&gates::cnot(), 2, 2, tol()).unwrap(), 2);
        assert!(realign(&ComplexMatrix::identity(4), 2, 3).is_err());
    }

    #[test]
    fn classify_swap() {
        match classify_unitary(&gates::swap(2), 2, 2, tol(), RngSeed(0)).unwrap() {
            NonEntanglingForm::SwapForm { v21, w12 } => {
                assert!(v21.distance(&ComplexMatrix::identity(2)) < 1e-12);
                assert!(w12.distance(&ComplexMatrix::identity(2)) < 1e-12);
            }
            other => panic!("expected swap form, got {other:?}"),
        }
    }

    #[test]
    fn classify_haar_product() {
        let (v, w, u) = haar_product(3, 2, 8);
        let form = classify_unitary(&u, 3, 2, tol(), RngSeed(0)).unwrap();
        let NonEntanglingForm::Product { v: v2, w: w2 } = &form else {
            panic!("expected product, got {form:?}");
        };
        assert!(form.reconstruct().unwrap().distance(&u) < 1e-9);
        assert!(phase_aligned_distance(&v, v2) < 1e-10);
        assert!(phase_aligned_distance(&w, w2) < 1e-10);
        assert!(unitarity_defect(v2).unwrap() < 1e-10);
    }

    #[test]
    fn classify_cnot_finds_bell_witness() {
        let form = classify_unitary(&gates::cnot(), 2, 2, tol(), RngSeed(0)).unwrap();
        let NonEntanglingForm::Entangling(w) = form else {
            panic!("expected entangling");
        };
        assert_eq!(w.candidate, CandidateInput::ObjectSuperposition { i: 0, j: 1, k: 0 });
        assert!((w.second_coefficient - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn classify_rejects_bad_input() {
        let d = ComplexMatrix::diagonal(&[C64::new(2.0, 0.0); 4]);
        assert!(matches!(
            classify_unitary(&d, 2, 2, tol(), RngSeed(0)),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            classify_unitary(&gates::swap(2), 2, 3, tol(), RngSeed(0)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn witness_exhaustion_at_absurd_margin() {
        let space = BipartiteSpace::new(2, 2).unwrap();
        let err = find_witness(&gates::cnot(), space, RngSeed(0), 2.0, tol()).unwrap_err();
        assert!(matches!(err, Error::WitnessExhausted { .. }));
    }

    #[test]
    fn decompose_product_examples() {
        let (v, w) = decompose_product(&ComplexMatrix::identity(4), 2, 2, tol()).unwrap();
        assert!(v.distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(w.distance(&ComplexMatrix::identity(2)) < 1e-14);

        let xz = gates::pauli_x().kron(&gates::pauli_z()).unwrap();
        let (v, w) = decompose_product(&xz, 2, 2, tol()).unwrap();
        assert!(v.distance(&gates::pauli_x()) < 1e-14);
        assert!(w.distance(&gates::pauli_z()) < 1e-14);

        let (_, _, u) = haar_product(3, 3, 8);
        let (v, w) = decompose_product(&u, 3, 3, tol()).unwrap();
        assert!(v.kron(&w).unwrap().distance(&u) < 1e-9);
        // first significant entry of V's first column is real positive
        assert!(v[(0, 0)].im.abs() < 1e-15 && v[(0, 0)].re > 0.0);

        assert!(matches!(
            decompose_product(&gates::cnot(), 2, 2, tol()),
            Err(Error::NotProductForm { rank: 2 })
        ));
    }

    #[test]
    fn decompose_swap_examples() {
        let (a, b) = decompose_swap(&gates::swap(2), 2, tol()).unwrap();
        assert!(a.distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!(b.distance(&ComplexMatrix::identity(2)) < 1e-14);

        let a = haar_unitary(3, RngSeed(13));
        let b = haar_unitary(3, RngSeed(14));
        let u = &a.kron(&b).unwrap() * &gates::swap(3);
        let (a2, b2) = decompose_swap(&u, 3, tol()).unwrap();
        assert!(phase_equality_gap(&a, &a2) < 1e-9);
        assert!(phase_equality_gap(&b, &b2) < 1e-9);
        let rebuilt = &a2.kron(&b2).unwrap() * &gates::swap(3);
        assert!(rebuilt.distance(&u) < 1e-9);

        // SWAP·(P⊗Q) = (Q⊗P)·SWAP
        let p = ComplexMatrix::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]);
        let u = &gates::swap(2) * &p.kron(&ComplexMatrix::identity(2)).unwrap();
        let form = classify_unitary(&u, 2, 2, tol(), RngSeed(0)).unwrap();
        assert_eq!(form.verdict(), Verdict::Swap);
        assert!(form.reconstruct().unwrap().distance(&u) < 1e-9);

        assert!(matches!(
            decompose_swap(&ComplexMatrix::identity(4), 2, tol()),
            Err(Error::NotSwapForm { rank: 4 })
        ));
        assert!(matches!(
            decompose_swap_dims(&ComplexMatrix::identity(6), 2, 3, tol()),
            Err(Error::UnequalDimensions { .. })
        ));
    }

    #[test]
    fn unequal_dimensions_never_swap() {
        for seed in 0..10 {
            let u = haar_unitary(6, RngSeed(seed));
            let form = classify_unitary(&u, 2, 3, tol(), RngSeed(seed)).unwrap();
            assert_eq!(form.verdict(), Verdict::Entangling);
        }
    }

    #[test]
    fn slice_of_identity() {
        let phi0 = random_state(3, RngSeed(1));
        let form = classify_slice(&ComplexMatrix::identity(6), 2, 3, &phi0, tol()).unwrap();
        let SliceForm::LocalOnObject { v, phi_prime } = &form else {
            panic!("expected local form")
        };
        assert!(phase_equality_gap(v, &ComplexMatrix::identity(2)) < 1e-12);
        assert!(phase_equality_gap(phi_prime, &phi0) < 1e-12);
        assert!(form.image(&ComplexMatrix::basis(2, 1)).distance(&ComplexMatrix::basis(2, 1).kron(&phi0).unwrap()) < 1e-12);
    }

    #[test]
    fn slice_of_swap_transfers_to_probe() {
        let phi0 = ComplexMatrix::basis(2, 0);
        let form = classify_slice(&gates::swap(2), 2, 2, &phi0, tol()).unwrap();
        let SliceForm::TransferToProbe { phi_prime, w12 } = &form else {
            panic!("expected transfer form")
        };
        assert!(phi_prime.distance(&phi0) < 1e-14);
        assert!(w12.distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn slice_of_haar_product() {
        let (v, w, u) = haar_product(3, 3, 21);
        let phi0 = random_state(3, RngSeed(22));
        let form = classify_slice(&u, 3, 3, &phi0, tol()).unwrap();
        let SliceForm::LocalOnObject { v: v2, phi_prime } = &form else {
            panic!("expected local form")
        };
        assert!(phase_aligned_distance(&v, v2) < 1e-10);
        assert!(phase_aligned_distance(&(&w * &phi0), phi_prime) < 1e-10);
    }

    #[test]
    fn slice_with_unequal_dimensions_transfers_into_larger_probe() {
        // permutation sending e_i ⊗ f_0 to e_0 ⊗ f_i on C^2 ⊗ C^3
        let (d1, d2) = (2, 3);
        let n = d1 * d2;
        let mut perm: Vec<usize> = (0..n).collect();
        // e_1 ⊗ f_0 (index 3) <-> e_0 ⊗ f_1 (index 1)
        perm.swap(1, 3);
        let u = ComplexMatrix::from_fn(n, n, |r, c| {
            if perm[c] == r {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let form = classify_slice(&u, d1, d2, &ComplexMatrix::basis(3, 0), tol()).unwrap();
        let SliceForm::TransferToProbe { phi_prime, w12 } = &form else {
            panic!("expected transfer form, got {form:?}")
        };
        assert_eq!(w12.shape(), (3, 2));
        assert!(isometry_defect(w12) < 1e-14);
        assert!(phi_prime.distance(&ComplexMatrix::basis(2, 0)) < 1e-14);
        // the full unitary is nevertheless entangling
        assert_eq!(
            classify_unitary(&u, d1, d2, tol(), RngSeed(0)).unwrap().verdict(),
            Verdict::Entangling
        );
    }

    #[test]
    fn slice_hypothesis_violations() {
        // control on the probe: e0 ⊗ |+⟩ already maps to a Bell state
        let plus = ComplexMatrix::from_real_rows(&[[FRAC_1_SQRT_2], [FRAC_1_SQRT_2]]);
        let err = classify_slice(&gates::cnot_reversed(), 2, 2, &plus, tol()).unwrap_err();
        assert!(matches!(err, Error::SliceHypothesis { index: 0, ref input, .. } if input == "e0"), "{err:?}");

        // control on the object: basis images stay product, superpositions do not
        let zero = ComplexMatrix::basis(2, 0);
        let err = classify_slice(&gates::cnot(), 2, 2, &zero, tol()).unwrap_err();
        assert!(matches!(err, Error::SliceHypothesis { index: 0, ref input, .. } if input == "(e0+e1)/√2"), "{err:?}");

        // control on the probe with probe in |0⟩: nothing happens on the slice
        let form = classify_slice(&gates::cnot_reversed(), 2, 2, &zero, tol()).unwrap();
        let SliceForm::LocalOnObject { v, .. } = form else { panic!() };
        assert!(v.distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn brute_force_examples() {
        let r = brute_force_non_entangling(&ComplexMatrix::identity(4), 2, 2, tol(), RngSeed(1), 50).unwrap();
        assert!(r.non_entangling);
        assert_eq!(r.inputs_checked, 9 + 50);

        let r = brute_force_non_entangling(&gates::cnot(), 2, 2, tol(), RngSeed(1), 50).unwrap();
        assert!(!r.non_entangling);
        assert!(matches!(r.counterexample.unwrap().candidate, CandidateInput::Grid { .. }));

        let (_, _, u) = haar_product(2, 2, 8);
        let r = brute_force_non_entangling(&u, 2, 2, tol(), RngSeed(1), 500).unwrap();
        assert!(r.non_entangling);
    }
}
