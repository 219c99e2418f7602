//! Finite-outcome POVMs, measurement schemes and their instruments.
//!
//! A scheme couples the object (`H1`, dimension `d1`) to a probe (`H2`)
//! prepared in `φ0` through a unitary `U`, then reads the probe with a
//! pointer POVM `E`. The measured observable on the object is
//! `E'(X) = J†(I ⊗ E(X))J` with `J = U(I ⊗ |φ0⟩)`, and the instrument uses
//! the square-root reading `I ⊗ √E(X)` of the pointer.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::Rng;

use crate::bipartite::{trace_distance, DensityOperator};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{eigh, require_unitary};
use crate::matrix::{ComplexMatrix, Tolerance, C64, ZERO};
use crate::random::{ginibre, random_state_from, RngSeed};

#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    outcomes: Vec<String>,
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    /// Checks shapes only; use [`validate_povm`] for positivity and
    /// completeness.
    pub fn new(outcomes: Vec<String>, effects: Vec<ComplexMatrix>) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::InvalidPovm("no outcomes".to_string()));
        }
        if outcomes.len() != effects.len() {
            return Err(Error::InvalidPovm(format!(
                "{} labels for {} effects",
                outcomes.len(),
                effects.len()
            )));
        }
        let dim = effects[0].rows();
        for e in &effects {
            if e.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    expected: (dim, dim),
                    found: e.shape(),
                });
            }
        }
        Ok(Self {
            dim,
            outcomes,
            effects,
        })
    }

    /// Shape check plus full validation.
    pub fn validated(outcomes: Vec<String>, effects: Vec<ComplexMatrix>, tol: Tolerance) -> Result<Self> {
        let povm = Self::new(outcomes, effects)?;
        povm.require_valid(tol)?;
        Ok(povm)
    }

    fn with_numbered_outcomes(effects: Vec<ComplexMatrix>) -> Self {
        let outcomes = (0..effects.len()).map(|k| k.to_string()).collect();
        Self::new(outcomes, effects).expect("consistent shapes")
    }

    /// Projective measurement in the computational basis.
    pub fn computational(d: usize) -> Self {
        Self::with_numbered_outcomes(
            (0..d)
                .map(|k| {
                    let e = ComplexMatrix::basis(d, k);
                    e.outer(&e)
                })
                .collect(),
        )
    }

    /// `{w_k · I}`: statistics independent of the state.
    pub fn trivial(d: usize, weights: &[f64]) -> Self {
        let id = ComplexMatrix::identity(d);
        Self::with_numbered_outcomes(weights.iter().map(|&w| id.scale_real(w)).collect())
    }

    /// Qubit trine `{⅔|ψ_k⟩⟨ψ_k|}` with `ψ_k` at angles `2πk/3` in the real plane.
    pub fn trine() -> Self {
        Self::with_numbered_outcomes(trine_effects(2))
    }

    /// The trine on `span{|0⟩, |1⟩}` completed by `|2⟩⟨2|` on a qutrit.
    pub fn qutrit_trine() -> Self {
        let mut effects = trine_effects(3);
        let e2 = ComplexMatrix::basis(3, 2);
        effects.push(e2.outer(&e2));
        Self::with_numbered_outcomes(effects)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    fn require_valid(&self, tol: Tolerance) -> Result<()> {
        let report = validate_povm(self, tol);
        if report.valid {
            Ok(())
        } else {
            Err(Error::InvalidPovm(report.summary()))
        }
    }
}

fn trine_effects(d: usize) -> Vec<ComplexMatrix> {
    (0..3)
        .map(|k| {
            let angle = 2.0 * core::f64::consts::PI * k as f64 / 3.0;
            let mut psi = ComplexMatrix::zeros(d, 1);
            psi[(0, 0)] = C64::new(libm::cos(angle), 0.0);
            psi[(1, 0)] = C64::new(libm::sin(angle), 0.0);
            psi.outer(&psi).scale_real(2.0 / 3.0)
        })
        .collect()
}

/// Worst violation of each POVM invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmReport {
    pub valid: bool,
    /// Largest `‖E − E†‖_F` and the outcome index where it occurs.
    pub hermiticity_defect: (f64, usize),
    /// Smallest eigenvalue over all effects and its outcome index.
    pub min_eigenvalue: (f64, usize),
    /// `‖Σ E − I‖_F`.
    pub completeness_defect: f64,
}

impl PovmReport {
    pub fn summary(&self) -> String {
        format!(
            "hermiticity defect {:e} (outcome {}), min eigenvalue {:e} (outcome {}), completeness defect {:e}",
            self.hermiticity_defect.0,
            self.hermiticity_defect.1,
            self.min_eigenvalue.0,
            self.min_eigenvalue.1,
            self.completeness_defect
        )
    }
}

/// Checks Hermiticity, positivity and completeness. Never fails.
pub fn validate_povm(e: &Povm, tol: Tolerance) -> PovmReport {
    let mut herm = (0.0f64, 0usize);
    let mut min_eig = (f64::INFINITY, 0usize);
    let mut sum = ComplexMatrix::zeros(e.dim, e.dim);
    for (k, eff) in e.effects.iter().enumerate() {
        let h = eff.hermiticity_defect();
        if h > herm.0 {
            herm = (h, k);
        }
        let lowest = eigh(eff, tol.eps).values.last().copied().unwrap_or(0.0);
        if lowest < min_eig.0 {
            min_eig = (lowest, k);
        }
        sum = &sum + eff;
    }
    let completeness = sum.distance(&ComplexMatrix::identity(e.dim));
    PovmReport {
        valid: herm.0 <= tol.eps && min_eig.0 >= -tol.eps && completeness <= tol.eps,
        hermiticity_defect: herm,
        min_eigenvalue: min_eig,
        completeness_defect: completeness,
    }
}

/// Random POVM with `n` full-rank effects: `S^{-1/2} G_k G_k† S^{-1/2}`.
pub fn random_povm<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Povm {
    let raw: Vec<ComplexMatrix> = (0..n)
        .map(|_| {
            let g = ginibre(d, d, rng);
            &g * &g.adjoint()
        })
        .collect();
    let mut total = ComplexMatrix::zeros(d, d);
    for a in &raw {
        total = &total + a;
    }
    let inv_sqrt = eigh(&total, 0.0).apply(|x| C64::new(1.0 / libm::sqrt(x), 0.0));
    let effects = raw
        .iter()
        .map(|a| hermitize(&(&(&inv_sqrt * a) * &inv_sqrt)))
        .collect();
    Povm::with_numbered_outcomes(effects)
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    (m + &m.adjoint()).scale_real(0.5)
}

/// Object space, probe preparation, coupling and pointer.
#[derive(Debug, Clone)]
pub struct MeasurementScheme {
    object_dim: usize,
    probe_init: ComplexMatrix,
    coupling: ComplexMatrix,
    pointer: Povm,
}

impl MeasurementScheme {
    pub fn new(
        object_dim: usize,
        probe_init: ComplexMatrix,
        coupling: ComplexMatrix,
        pointer: Povm,
        tol: Tolerance,
    ) -> Result<Self> {
        if object_dim == 0 {
            return Err(Error::InvalidArgument("object dimension must be positive"));
        }
        let probe_dim = pointer.dim();
        if probe_init.shape() != (probe_dim, 1) {
            return Err(Error::DimensionMismatch {
                expected: (probe_dim, 1),
                found: probe_init.shape(),
            });
        }
        let norm = probe_init.norm();
        if (norm - 1.0).abs() > tol.eps {
            return Err(Error::NotNormalized { norm });
        }
        let n = object_dim * probe_dim;
        if coupling.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: (n, n),
                found: coupling.shape(),
            });
        }
        require_unitary(&coupling, tol)?;
        pointer.require_valid(tol)?;
        Ok(Self {
            object_dim,
            probe_init,
            coupling,
            pointer,
        })
    }

    pub fn object_dim(&self) -> usize {
        self.object_dim
    }

    pub fn probe_dim(&self) -> usize {
        self.pointer.dim()
    }

    pub fn probe_init(&self) -> &ComplexMatrix {
        &self.probe_init
    }

    pub fn coupling(&self) -> &ComplexMatrix {
        &self.coupling
    }

    pub fn pointer(&self) -> &Povm {
        &self.pointer
    }

    /// `J = U(I ⊗ |φ0⟩)`, a `(d1·d2) × d1` isometry.
    fn embedding(&self) -> ComplexMatrix {
        let d2 = self.probe_dim();
        let attach = ComplexMatrix::from_fn(self.object_dim * d2, self.object_dim, |r, c| {
            if r / d2 == c {
                self.probe_init[(r % d2, 0)]
            } else {
                ZERO
            }
        });
        &self.coupling * &attach
    }

    fn lift(&self, effect: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::identity(self.object_dim)
            .kron(effect)
            .expect("small dimensions")
    }
}

/// The swap measurement model: `U = SWAP`, pointer `e`, probe in `φ0`.
pub fn swap_scheme(e: &Povm, phi0: &ComplexMatrix, tol: Tolerance) -> Result<MeasurementScheme> {
    e.require_valid(tol)?;
    MeasurementScheme::new(e.dim(), phi0.clone(), gates::swap(e.dim()), e.clone(), tol)
}

/// `E'(X) = (I ⊗ ⟨φ0|)U†(I ⊗ E(X))U(I ⊗ |φ0⟩)`.
pub fn measured_observable(s: &MeasurementScheme) -> Povm {
    let j = s.embedding();
    let jd = j.adjoint();
    let effects = s
        .pointer
        .effects
        .iter()
        .map(|e| hermitize(&(&(&jd * &s.lift(e)) * &j)))
        .collect();
    Povm {
        dim: s.object_dim,
        outcomes: s.pointer.outcomes.clone(),
        effects,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    pub labels: Vec<String>,
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    /// Applies the rounding policy: entries in `[−eps, 0)` become 0, the
    /// total is renormalized if it is within `10·eps` of one, anything
    /// worse is a defect.
    pub fn from_raw(labels: Vec<String>, raw: Vec<f64>, tol: Tolerance) -> Result<Self> {
        let mut probabilities = Vec::with_capacity(raw.len());
        for (k, &p) in raw.iter().enumerate() {
            if p < -tol.eps {
                return Err(Error::ProbabilityDefect(format!(
                    "outcome {} has probability {p:e}",
                    labels[k]
                )));
            }
            probabilities.push(p.max(0.0));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > tol.scaled(10.0) {
            return Err(Error::ProbabilityDefect(format!("probabilities sum to {total}")));
        }
        for p in &mut probabilities {
            *p /= total;
        }
        Ok(Self {
            labels,
            probabilities,
        })
    }
}

/// `p(X) = ⟨U(φ ⊗ φ0)|(I ⊗ E(X))|U(φ ⊗ φ0)⟩`.
pub fn outcome_probabilities(
    s: &MeasurementScheme,
    phi: &ComplexMatrix,
    tol: Tolerance,
) -> Result<OutcomeDistribution> {
    let raw = raw_probabilities(s, phi, tol)?;
    OutcomeDistribution::from_raw(s.pointer.outcomes.clone(), raw, tol)
}

/// Unclamped outcome probabilities, for comparisons at full precision.
pub fn raw_probabilities(s: &MeasurementScheme, phi: &ComplexMatrix, tol: Tolerance) -> Result<Vec<f64>> {
    if phi.shape() != (s.object_dim, 1) {
        return Err(Error::DimensionMismatch {
            expected: (s.object_dim, 1),
            found: phi.shape(),
        });
    }
    let norm = phi.norm();
    if (norm - 1.0).abs() > tol.eps {
        return Err(Error::NotNormalized { norm });
    }
    let psi = &s.coupling * &phi.kron(&s.probe_init)?;
    Ok(s.pointer
        .effects
        .iter()
        .map(|e| psi.inner(&(&s.lift(e) * &psi)).re)
        .collect())
}

/// One Kraus collection per outcome.
#[derive(Debug, Clone)]
pub struct Instrument {
    pub labels: Vec<String>,
    pub kraus: Vec<Vec<ComplexMatrix>>,
}

impl Instrument {
    /// `I_X(ρ) = Σ_k K ρ K†` (unnormalized; trace is `p(X)`).
    pub fn apply(&self, outcome: usize, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = rho.rows();
        let mut out = ComplexMatrix::zeros(d, d);
        for k in &self.kraus[outcome] {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        out
    }

    /// Non-selective operation `Σ_X I_X(ρ)`.
    pub fn total(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = rho.rows();
        let mut out = ComplexMatrix::zeros(d, d);
        for x in 0..self.kraus.len() {
            out = &out + &self.apply(x, rho);
        }
        out
    }

    /// `‖Σ_X Σ_k K†K − I‖_F`.
    pub fn completeness_defect(&self) -> f64 {
        let d = self.kraus[0][0].cols();
        let mut sum = ComplexMatrix::zeros(d, d);
        for k in self.kraus.iter().flatten() {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.distance(&ComplexMatrix::identity(d))
    }

    /// `trace_distance(ρ, Σ_X I_X(ρ))`.
    pub fn disturbance(&self, rho: &DensityOperator) -> Result<f64> {
        let after = DensityOperator::trusted(hermitize(&self.total(rho.matrix())));
        trace_distance(rho, &after)
    }
}

/// `√E` via eigendecomposition; eigenvalues in `[−eps, 0)` clamp to 0.
fn effect_sqrt(e: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let eig = eigh(e, tol.eps);
    if let Some(&low) = eig.values.last() {
        if low < -tol.eps {
            return Err(Error::InvalidPovm(format!("effect has eigenvalue {low:e}")));
        }
    }
    Ok(eig.apply(|x| C64::new(libm::sqrt(x.max(0.0)), 0.0)))
}

/// Square-root instrument of a scheme, with Kraus operators
/// `K_{X,k} = (I ⊗ ⟨g_k|)(I ⊗ √E(X))U(I ⊗ |φ0⟩)` over the probe basis.
pub fn luders_instrument(s: &MeasurementScheme, tol: Tolerance) -> Result<Instrument> {
    let j = s.embedding();
    let (d1, d2) = (s.object_dim, s.probe_dim());
    let mut kraus = Vec::with_capacity(s.pointer.len());
    for e in &s.pointer.effects {
        let m = &s.lift(&effect_sqrt(e, tol)?) * &j;
        let ops = (0..d2)
            .map(|g| ComplexMatrix::from_fn(d1, d1, |i, c| m[(i * d2 + g, c)]))
            .collect();
        kraus.push(ops);
    }
    Ok(Instrument {
        labels: s.pointer.outcomes.clone(),
        kraus,
    })
}

/// Non-selective state change `trace_distance(ρ, Σ_X I_X(ρ))`.
pub fn disturbance(s: &MeasurementScheme, rho: &DensityOperator, tol: Tolerance) -> Result<f64> {
    if rho.dim() != s.object_dim {
        return Err(Error::DimensionMismatch {
            expected: (s.object_dim, s.object_dim),
            found: (rho.dim(), rho.dim()),
        });
    }
    luders_instrument(s, tol)?.disturbance(rho)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrivialityReport {
    pub trivial: bool,
    /// `λ_X = Tr E(X) / dim`.
    pub scalars: Vec<f64>,
    /// `max_X ‖E(X) − λ_X I‖_F`.
    pub max_deviation: f64,
}

/// Whether every effect is a multiple of the identity.
pub fn is_trivial_povm(e: &Povm, tol: Tolerance) -> TrivialityReport {
    let id = ComplexMatrix::identity(e.dim);
    let mut scalars = Vec::with_capacity(e.len());
    let mut worst = 0.0f64;
    for eff in &e.effects {
        let lambda = eff.trace().re / e.dim as f64;
        worst = worst.max(eff.distance(&id.scale_real(lambda)));
        scalars.push(lambda);
    }
    TrivialityReport {
        trivial: worst <= tol.eps,
        scalars,
        max_deviation: worst,
    }
}

/// Outcome of probing "undisturbed on every state ⇒ trivial observable".
#[derive(Debug, Clone)]
pub struct NoInfoReport {
    pub states_checked: usize,
    pub max_disturbance: f64,
    /// The sampled state attaining `max_disturbance`.
    pub most_disturbed: ComplexMatrix,
    pub max_triviality_deviation: f64,
    pub undisturbed: bool,
    pub trivial: bool,
    /// `undisturbed ⇒ trivial`.
    pub implication_holds: bool,
}

/// Probe states: the basis, `(e_i + e_j)/√2`, `(e_i + i·e_j)/√2`, then `n`
/// seeded random states.
pub fn probe_states(d: usize, seed: RngSeed, n: usize) -> Vec<ComplexMatrix> {
    let mut out: Vec<ComplexMatrix> = (0..d).map(|i| ComplexMatrix::basis(d, i)).collect();
    for i in 0..d {
        for j in i + 1..d {
            for phase in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut v = ComplexMatrix::basis(d, i);
                v[(j, 0)] = phase;
                out.push(v.scale_real(FRAC_1_SQRT_2));
            }
        }
    }
    let mut rng = seed.rng();
    out.extend((0..n).map(|_| random_state_from(d, &mut rng)));
    out
}

pub fn no_info_no_disturbance_check(
    s: &MeasurementScheme,
    tol: Tolerance,
    seed: RngSeed,
    n_states: usize,
) -> Result<NoInfoReport> {
    let instrument = luders_instrument(s, tol)?;
    let states = probe_states(s.object_dim, seed, n_states);
    let mut max_disturbance = -1.0;
    let mut most_disturbed = states[0].clone();
    for phi in &states {
        let d = instrument.disturbance(&DensityOperator::pure(phi))?;
        if d > max_disturbance {
            max_disturbance = d;
            most_disturbed = phi.clone();
        }
    }
    let triviality = is_trivial_povm(&measured_observable(s), tol);
    let undisturbed = max_disturbance <= tol.eps;
    Ok(NoInfoReport {
        states_checked: states.len(),
        max_disturbance,
        most_disturbed,
        max_triviality_deviation: triviality.max_deviation,
        undisturbed,
        trivial: triviality.trivial,
        implication_holds: !undisturbed || triviality.trivial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;
    use alloc::vec;
    use crate::random::{haar_unitary, random_state};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn ket(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::column(v.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    fn product_scheme(seed: u64, pointer: Povm) -> (MeasurementScheme, ComplexMatrix, ComplexMatrix) {
        let d2 = pointer.dim();
        let v = haar_unitary(2, RngSeed(seed));
        let w = haar_unitary(d2, RngSeed(seed + 1));
        let phi0 = random_state(d2, RngSeed(seed + 2));
        let s = MeasurementScheme::new(2, phi0, v.kron(&w).unwrap(), pointer, tol()).unwrap();
        (s, v, w)
    }

    #[test]
    fn validation_examples() {
        assert!(validate_povm(&Povm::computational(2), tol()).valid);
        assert!(validate_povm(&Povm::trivial(2, &[0.7, 0.3]), tol()).valid);
        let r = validate_povm(&Povm::trivial(2, &[1.0, 1.0]), tol());
        assert!(!r.valid);
        // Σ = 2I, so ‖Σ − I‖_F = ‖I‖_F = √2
        assert!((r.completeness_defect - core::f64::consts::SQRT_2).abs() < 1e-15);
        let neg = Povm::new(
            ["a".into(), "b".into()].into(),
            [ComplexMatrix::diagonal(&[C64::new(1.5, 0.0), C64::new(1.0, 0.0)]),
             ComplexMatrix::diagonal(&[C64::new(-0.5, 0.0), C64::new(0.0, 0.0)])].into(),
        )
        .unwrap();
        let r = validate_povm(&neg, tol());
        assert!(!r.valid);
        assert_eq!(r.min_eigenvalue.1, 1);
    }

    #[test]
    fn named_povms_are_valid() {
        assert!(validate_povm(&Povm::trine(), tol()).valid);
        assert!(validate_povm(&Povm::qutrit_trine(), tol()).valid);
        let mut rng = RngSeed(3).rng();
        assert!(validate_povm(&random_povm(4, 3, &mut rng), Tolerance::new(1e-12).unwrap()).valid);
    }

    #[test]
    fn povm_shape_errors() {
        assert!(Povm::new(vec![], vec![]).is_err());
        assert!(Povm::new(vec!["a".into()], vec![ComplexMatrix::identity(2), ComplexMatrix::identity(2)]).is_err());
        assert!(Povm::new(
            vec!["a".into(), "b".into()],
            vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)]
        )
        .is_err());
    }

    #[test]
    fn swap_scheme_examples() {
        let s = swap_scheme(&Povm::computational(2), &ket(&[1.0, 0.0]), tol()).unwrap();
        assert_eq!(s.coupling(), &gates::swap(2));
        assert_eq!((s.object_dim(), s.probe_dim()), (2, 2));
        assert!(swap_scheme(&Povm::trivial(2, &[0.5, 0.5]), &ket(&[0.0, 1.0]), tol()).is_ok());
        let s = swap_scheme(&Povm::qutrit_trine(), &ket(&[1.0, 0.0, 0.0]), tol()).unwrap();
        assert_eq!(s.object_dim(), 3);
        assert!(matches!(
            swap_scheme(&Povm::trivial(2, &[1.0, 1.0]), &ket(&[1.0, 0.0]), tol()),
            Err(Error::InvalidPovm(_))
        ));
    }

    #[test]
    fn swap_scheme_measures_its_pointer() {
        let mut rng = RngSeed(17).rng();
        let e = random_povm(3, 4, &mut rng);
        let phi0 = random_state(3, RngSeed(18));
        let s = swap_scheme(&e, &phi0, Tolerance::new(1e-12).unwrap()).unwrap();
        let measured = measured_observable(&s);
        for (a, b) in measured.effects().iter().zip(e.effects()) {
            assert!(a.distance(b) < 1e-12);
        }
    }

    #[test]
    fn product_coupling_measures_trivial_observable() {
        let (s, _, w) = product_scheme(30, Povm::computational(3));
        let measured = measured_observable(&s);
        let wphi = &w * s.probe_init();
        for (eff, ptr) in measured.effects().iter().zip(s.pointer().effects()) {
            let lambda = wphi.inner(&(ptr * &wphi));
            assert!(eff.distance(&ComplexMatrix::identity(2).scale(lambda)) < 1e-10);
        }
        assert!(is_trivial_povm(&measured, tol()).trivial);
    }

    #[test]
    fn identity_coupling_measures_expectations() {
        let phi0 = ket(&[0.6, 0.8]);
        let s = MeasurementScheme::new(2, phi0.clone(), ComplexMatrix::identity(4), Povm::computational(2), tol())
            .unwrap();
        let measured = measured_observable(&s);
        let expected = [0.36, 0.64];
        for (eff, lambda) in measured.effects().iter().zip(expected) {
            assert!(eff.distance(&ComplexMatrix::identity(2).scale_real(lambda)) < 1e-15);
        }
    }

    #[test]
    fn probability_examples() {
        let s = swap_scheme(&Povm::computational(2), &ket(&[1.0, 0.0]), tol()).unwrap();
        let p = outcome_probabilities(&s, &ket(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]), tol()).unwrap();
        assert!((p.probabilities[0] - 0.5).abs() < 1e-15 && (p.probabilities[1] - 0.5).abs() < 1e-15);

        let single = Povm::trivial(2, &[1.0]);
        let s = MeasurementScheme::new(2, ket(&[1.0, 0.0]), haar_unitary(4, RngSeed(1)), single, tol()).unwrap();
        let p = outcome_probabilities(&s, &random_state(2, RngSeed(2)), tol()).unwrap();
        assert_eq!(p.probabilities, vec![1.0]);

        let (s, _, _) = product_scheme(40, Povm::computational(2));
        let a = outcome_probabilities(&s, &random_state(2, RngSeed(41)), tol()).unwrap();
        let b = outcome_probabilities(&s, &random_state(2, RngSeed(42)), tol()).unwrap();
        for (x, y) in a.probabilities.iter().zip(&b.probabilities) {
            assert!((x - y).abs() < 1e-12);
        }

        assert!(matches!(
            outcome_probabilities(&s, &ket(&[1.0, 1.0]), tol()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn probability_rounding_policy() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let t = tol();
        let d = OutcomeDistribution::from_raw(labels.clone(), vec![1.0 + 5e-10, -5e-10], t).unwrap();
        assert_eq!(d.probabilities[1], 0.0);
        assert!((d.probabilities[0] - 1.0).abs() < 1e-15);
        assert!(OutcomeDistribution::from_raw(labels.clone(), vec![1.0, -1e-6], t).is_err());
        assert!(OutcomeDistribution::from_raw(labels, vec![0.5, 0.4], t).is_err());
    }

    #[test]
    fn instrument_of_swap_scheme() {
        let phi0 = random_state(2, RngSeed(50));
        let s = swap_scheme(&Povm::computational(2), &phi0, tol()).unwrap();
        let inst = luders_instrument(&s, tol()).unwrap();
        assert!(inst.completeness_defect() < 1e-14);
        let phi = random_state(2, RngSeed(51));
        let rho = DensityOperator::pure(&phi);
        for k in 0..2 {
            let born = phi[(k, 0)].norm_sqr();
            let expected = phi0.outer(&phi0).scale_real(born);
            assert!(inst.apply(k, rho.matrix()).distance(&expected) < 1e-14);
        }
    }

    #[test]
    fn instrument_with_single_outcome_is_unitary_then_trace() {
        let u = haar_unitary(4, RngSeed(60));
        let s = MeasurementScheme::new(2, ket(&[1.0, 0.0]), u.clone(), Povm::trivial(2, &[1.0]), tol()).unwrap();
        let inst = luders_instrument(&s, tol()).unwrap();
        let rho = DensityOperator::pure(&random_state(2, RngSeed(61)));
        let out = inst.apply(0, rho.matrix());
        assert!((out.trace().re - 1.0).abs() < 1e-14);
        // compare with Tr_2[U(ρ ⊗ P)U†]
        let p = ket(&[1.0, 0.0]);
        let joint = &(&u * &rho.matrix().kron(&p.outer(&p)).unwrap()) * &u.adjoint();
        let space = crate::bipartite::BipartiteSpace::new(2, 2).unwrap();
        let reduced = crate::bipartite::partial_trace(
            &DensityOperator::trusted(joint),
            space,
            crate::bipartite::Subsystem::First,
        )
        .unwrap();
        assert!(out.distance(reduced.matrix()) < 1e-14);
    }

    #[test]
    fn identity_coupling_leaves_states_alone() {
        let phi0 = random_state(2, RngSeed(70));
        let s = MeasurementScheme::new(2, phi0.clone(), ComplexMatrix::identity(4), Povm::computational(2), tol())
            .unwrap();
        let inst = luders_instrument(&s, tol()).unwrap();
        let rho = DensityOperator::pure(&random_state(2, RngSeed(71)));
        for k in 0..2 {
            let weight = phi0[(k, 0)].norm_sqr();
            assert!(inst.apply(k, rho.matrix()).distance(&rho.matrix().scale_real(weight)) < 1e-14);
        }
        assert!(disturbance(&s, &rho, tol()).unwrap() < 1e-12);
    }

    #[test]
    fn swap_with_single_outcome_swaps_the_object_out() {
        let s = swap_scheme(&Povm::trivial(2, &[1.0]), &ket(&[1.0, 0.0]), tol()).unwrap();
        let rho = DensityOperator::pure(&ket(&[0.0, 1.0]));
        assert!((disturbance(&s, &rho, tol()).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_coupling_disturbance_is_local_rotation() {
        let (s, v, _) = product_scheme(80, Povm::computational(2));
        let rho = DensityOperator::pure(&random_state(2, RngSeed(81)));
        let rotated = DensityOperator::trusted(&(&v * rho.matrix()) * &v.adjoint());
        let expected = trace_distance(&rho, &rotated).unwrap();
        assert!((disturbance(&s, &rho, tol()).unwrap() - expected).abs() < 1e-12);
        assert!(unitarity_defect(&v).unwrap() < 1e-12);
    }

    #[test]
    fn triviality_examples() {
        let r = is_trivial_povm(&Povm::trivial(2, &[0.5, 0.5]), tol());
        assert!(r.trivial);
        assert_eq!(r.scalars, vec![0.5, 0.5]);
        assert!(!is_trivial_povm(&Povm::computational(2), tol()).trivial);
    }

    #[test]
    fn no_info_check_examples() {
        let id = MeasurementScheme::new(2, ket(&[1.0, 0.0]), ComplexMatrix::identity(4), Povm::computational(2), tol())
            .unwrap();
        let r = no_info_no_disturbance_check(&id, tol(), RngSeed(1), 16).unwrap();
        assert!(r.undisturbed && r.trivial && r.implication_holds);

        let sw = swap_scheme(&Povm::computational(2), &ket(&[1.0, 0.0]), tol()).unwrap();
        let r = no_info_no_disturbance_check(&sw, tol(), RngSeed(1), 16).unwrap();
        assert!(!r.undisturbed && !r.trivial && r.implication_holds);
        assert!(r.max_disturbance > 0.5);

        let (prod, _, _) = product_scheme(90, Povm::computational(2));
        let r = no_info_no_disturbance_check(&prod, tol(), RngSeed(1), 16).unwrap();
        assert!(!r.undisturbed && r.trivial && r.implication_holds);
        assert_eq!(r.states_checked, 2 + 2 + 16);
    }

    #[test]
    fn scheme_validation() {
        let t = tol();
        let p = Povm::computational(2);
        assert!(matches!(
            MeasurementScheme::new(2, ket(&[1.0, 1.0]), ComplexMatrix::identity(4), p.clone(), t),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            MeasurementScheme::new(3, ket(&[1.0, 0.0]), ComplexMatrix::identity(4), p.clone(), t),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad = ComplexMatrix::identity(4).scale_real(2.0);
        assert!(matches!(
            MeasurementScheme::new(2, ket(&[1.0, 0.0]), bad, p, t),
            Err(Error::NotUnitary { .. })
        ));
    }
}
