//! The `verify` corpus. Corpus sizes and pass thresholds are fixed here;
//! only the seed and the classification tolerance come from the caller.

use std::f64::consts::FRAC_1_SQRT_2;

use nonent_core::bipartite::{entanglement_entropy, PureState};
use nonent_core::classifier::{
    brute_force_non_entangling, classify_slice, classify_unitary, NonEntanglingForm, SliceForm, Verdict,
};
use nonent_core::dynamics::{entanglement_profile, geodesic_path, UnitaryPath};
use nonent_core::gates;
use nonent_core::linalg::phase_aligned_distance;
use nonent_core::measurement::{
    is_trivial_povm, measured_observable, no_info_no_disturbance_check, random_povm, raw_probabilities,
    swap_scheme, MeasurementScheme,
};
use nonent_core::random::{haar_unitary_from, random_hermitian, random_state_from};
use nonent_core::{ComplexMatrix, RngSeed, Tolerance, C64};
use serde::Serialize;

use crate::{Meta, Settings};

pub const REPRODUCIBILITY_CASES: usize = 100;
pub const REPRODUCIBILITY_THRESHOLD: f64 = 1e-10;
pub const CLASSIFICATION_PER_DIMS: usize = 80;
pub const RECONSTRUCTION_THRESHOLD: f64 = 1e-8;
pub const BRUTE_FORCE_SAMPLES: usize = 16;
pub const UNEQUAL_CASES: usize = 240;
pub const SLICE_CASES: usize = 240;
pub const SLICE_THRESHOLD: f64 = 1e-8;
pub const POINTER_CASES: usize = 200;
pub const TRIVIALITY_THRESHOLD: f64 = 1e-9;
pub const POINTER_THRESHOLD: f64 = 1e-10;
pub const SCHEME_CASES: usize = 160;
pub const NONTRIVIAL_THRESHOLD: f64 = 1e-6;
pub const DISTURBANCE_FLOOR: f64 = 1e-8;
pub const IDENTITY_DISTURBANCE_THRESHOLD: f64 = 1e-12;
pub const NO_INFO_RANDOM_STATES: usize = 16;
pub const OBSTRUCTION_STEPS: usize = 64;
pub const OBSTRUCTION_ENTROPY: f64 = 0.5;
pub const ORACLE_THRESHOLD: f64 = 1e-6;
pub const PROFILE_INPUTS: usize = 8;
pub const LOCAL_GENERATOR_CASES: usize = 50;
pub const LOCAL_GENERATOR_STEPS: usize = 32;
pub const LOCAL_ENTROPY_THRESHOLD: f64 = 1e-9;

/// Smallest and largest tolerance the suites can meaningfully run at.
pub const TOL_RANGE: (f64, f64) = (1e-13, 1e-3);

/// Pairs `(d1, d2)` with `d1·d2 ≤ 16` used by the classification corpora.
pub const DIMS: &[(usize, usize)] = &[
    (2, 2),
    (2, 3),
    (3, 2),
    (3, 3),
    (2, 4),
    (4, 2),
    (3, 4),
    (4, 3),
    (4, 4),
    (2, 5),
    (5, 2),
    (2, 8),
    (8, 2),
];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub claim: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// Largest measured deviation, when the suite has a numeric threshold.
    pub worst_deviation: Option<f64>,
    pub threshold: Option<f64>,
    pub passed: bool,
    pub detail: String,
}

impl SuiteReport {
    fn new(name: &'static str, claim: &'static str) -> Self {
        Self {
            name,
            claim,
            cases: 0,
            failures: 0,
            worst_deviation: None,
            threshold: None,
            passed: false,
            detail: String::new(),
        }
    }

    fn observe(&mut self, deviation: f64) {
        let worst = self.worst_deviation.get_or_insert(0.0);
        if deviation.is_nan() || deviation > *worst {
            *worst = deviation;
        }
    }

    fn fail(&mut self, note: impl FnOnce() -> String) {
        self.failures += 1;
        if self.failures == 1 {
            self.detail = note();
        }
    }

    fn finish(mut self, summary: impl FnOnce(&Self) -> String) -> Self {
        let summary = summary(&self);
        let within = match (self.worst_deviation, self.threshold) {
            (Some(w), Some(t)) => w < t,
            _ => true,
        };
        self.passed = self.failures == 0 && within && self.cases > 0;
        if self.detail.is_empty() {
            self.detail = summary;
        } else {
            self.detail = format!("{summary}; first failure: {}", self.detail);
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b).expect("corpus dimensions are small")
}

/// Swap schemes reproduce their pointer statistics on the object.
pub fn reproducibility(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("prob-reproducibility", "prob-reproducibility");
    r.threshold = Some(REPRODUCIBILITY_THRESHOLD);
    for n in 0..REPRODUCIBILITY_CASES {
        let d = 2 + n % 3;
        let outcomes = 2 + (n / 3) % 4;
        let mut rng = seed.derive("reproducibility", n as u64).rng();
        let e = random_povm(d, outcomes, &mut rng);
        let phi0 = random_state_from(d, &mut rng);
        let phi = random_state_from(d, &mut rng);
        r.cases += 1;
        let p = match swap_scheme(&e, &phi0, tol).and_then(|s| raw_probabilities(&s, &phi, tol)) {
            Ok(p) => p,
            Err(err) => {
                r.fail(|| format!("case {n}: {err}"));
                continue;
            }
        };
        let dev = p
            .iter()
            .zip(e.effects())
            .map(|(pk, eff)| (pk - phi.inner(&(eff * &phi)).re).abs())
            .fold(0.0, f64::max);
        r.observe(dev);
    }
    r.finish(|_| format!("{} triples at d in {{2,3,4}}", REPRODUCIBILITY_CASES))
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub kind: &'static str,
    pub d1: usize,
    pub d2: usize,
    pub u: ComplexMatrix,
}

/// Products, dressed swaps, Haar generics and structured entanglers over
/// [`DIMS`].
pub fn classification_corpus(seed: RngSeed) -> Vec<CorpusEntry> {
    let mut out = Vec::with_capacity(DIMS.len() * CLASSIFICATION_PER_DIMS);
    for (block, &(d1, d2)) in DIMS.iter().enumerate() {
        for n in 0..CLASSIFICATION_PER_DIMS {
            let mut rng = seed.derive("classification", (block * CLASSIFICATION_PER_DIMS + n) as u64).rng();
            let v = haar_unitary_from(d1, &mut rng);
            let w = haar_unitary_from(d2, &mut rng);
            let local = kron(&v, &w);
            let (kind, u) = match n % 5 {
                0 => ("haar-product", local),
                1 if d1 == d2 => ("dressed-swap", &local * &gates::swap(d1)),
                1 => ("haar-product", local),
                2 => ("haar", haar_unitary_from(d1 * d2, &mut rng)),
                3 => match (n / 5) % 4 {
                    0 if (d1, d2) == (2, 2) => ("cnot", gates::cnot()),
                    1 if (d1, d2) == (2, 2) => ("cnot-reversed", gates::cnot_reversed()),
                    2 => {
                        // a unit-modulus draw gives an angle in [0.5, 5.5], away from 0 mod 2π
                        let angle = 0.5 + 5.0 * random_state_from(1, &mut rng)[(0, 0)].re.abs();
                        ("controlled-phase", gates::controlled_phase(d1, d2, angle))
                    }
                    _ => ("controlled-shift", gates::controlled_shift(d1, d2)),
                },
                _ => {
                    let v2 = haar_unitary_from(d1, &mut rng);
                    let w2 = haar_unitary_from(d2, &mut rng);
                    let core = gates::controlled_shift(d1, d2);
                    ("dressed-shift", &(&local * &core) * &kron(&v2, &w2))
                }
            };
            out.push(CorpusEntry { kind, d1, d2, u });
        }
    }
    out
}

/// The classifier agrees with exhaustive product-input sampling, and
/// non-entangling verdicts reconstruct the operator.
pub fn classification(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("classification-oracle", "theorem-classification");
    r.threshold = Some(RECONSTRUCTION_THRESHOLD);
    r.observe(0.0);
    let (mut product, mut swap, mut entangling) = (0, 0, 0);
    for (n, c) in classification_corpus(seed).into_iter().enumerate() {
        r.cases += 1;
        let form = match classify_unitary(&c.u, c.d1, c.d2, tol, seed) {
            Ok(f) => f,
            Err(e) => {
                r.fail(|| format!("case {n} ({}, {}x{}): {e}", c.kind, c.d1, c.d2));
                continue;
            }
        };
        let oracle = match brute_force_non_entangling(&c.u, c.d1, c.d2, tol, seed, BRUTE_FORCE_SAMPLES) {
            Ok(o) => o,
            Err(e) => {
                r.fail(|| format!("case {n} ({}): oracle error {e}", c.kind));
                continue;
            }
        };
        match form.verdict() {
            Verdict::Product => product += 1,
            Verdict::Swap => swap += 1,
            Verdict::Entangling => entangling += 1,
        }
        if form.is_non_entangling() != oracle.non_entangling {
            r.fail(|| {
                format!(
                    "case {n} ({}, {}x{}): classifier says {}, sampling says non-entangling={}",
                    c.kind,
                    c.d1,
                    c.d2,
                    form.verdict(),
                    oracle.non_entangling
                )
            });
        }
        if let Some(rec) = form.reconstruct() {
            r.observe(rec.distance(&c.u));
        }
    }
    r.finish(|r| format!(
        "{} unitaries: {product} product, {swap} swap, {entangling} entangling",
        r.cases
    ))
}

/// `e_i ⊗ f_j ↔ e_j ⊗ f_i` for `i, j < min(d1, d2)`, identity elsewhere.
pub fn partial_swap(d1: usize, d2: usize) -> ComplexMatrix {
    let m = d1.min(d2);
    let n = d1 * d2;
    let target = |r: usize| {
        let (i, j) = (r / d2, r % d2);
        if i < m && j < m {
            j * d2 + i
        } else {
            r
        }
    };
    ComplexMatrix::from_fn(n, n, |row, col| {
        if target(col) == row {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// No swap verdict is ever issued when the factors differ in dimension.
pub fn equal_dimension(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("equal-dimension", "theorem-classification");
    let unequal: Vec<(usize, usize)> = DIMS.iter().copied().filter(|(a, b)| a != b).collect();
    for n in 0..UNEQUAL_CASES {
        let (d1, d2) = unequal[n % unequal.len()];
        let mut rng = seed.derive("unequal", n as u64).rng();
        let local = kron(&haar_unitary_from(d1, &mut rng), &haar_unitary_from(d2, &mut rng));
        let u = match (n / unequal.len()) % 4 {
            0 => local,
            1 => haar_unitary_from(d1 * d2, &mut rng),
            2 => &local * &partial_swap(d1, d2),
            _ => &local * &gates::controlled_shift(d1, d2),
        };
        r.cases += 1;
        match classify_unitary(&u, d1, d2, tol, seed) {
            Ok(f) if f.verdict() == Verdict::Swap => r.fail(|| format!("case {n} ({d1}x{d2}) classified swap")),
            Ok(_) => {}
            Err(e) => r.fail(|| format!("case {n} ({d1}x{d2}): {e}")),
        }
    }
    r.finish(|r| format!("{} unequal-dimension instances, 0 swap verdicts allowed", r.cases))
}

/// The embedding `φ ↦ U(φ ⊗ φ0)` predicted by a full classification.
fn embedding_from_form(form: &NonEntanglingForm, phi0: &ComplexMatrix) -> Option<ComplexMatrix> {
    match form {
        NonEntanglingForm::Product { v, w } => Some(kron(v, &(w * phi0))),
        NonEntanglingForm::SwapForm { v21, w12 } => Some(kron(&(v21 * phi0), w12)),
        NonEntanglingForm::Entangling(_) => None,
    }
}

fn embedding_from_slice(slice: &SliceForm) -> ComplexMatrix {
    match slice {
        SliceForm::LocalOnObject { v, phi_prime } => kron(v, phi_prime),
        SliceForm::TransferToProbe { phi_prime, w12 } => kron(phi_prime, w12),
    }
}

/// Slice classification matches full classification on non-entangling
/// couplings, operator for operator.
pub fn slice_consistency(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("slice-consistency", "prop1-slice");
    r.threshold = Some(SLICE_THRESHOLD);
    for n in 0..SLICE_CASES {
        let mut rng = seed.derive("slice", n as u64).rng();
        let (d1, d2, dressed) = if n % 2 == 0 {
            let (d1, d2) = DIMS[(n / 2) % DIMS.len()];
            (d1, d2, false)
        } else {
            let d = 2 + (n / 2) % 3;
            (d, d, true)
        };
        let local = kron(&haar_unitary_from(d1, &mut rng), &haar_unitary_from(d2, &mut rng));
        let u = if dressed { &local * &gates::swap(d1) } else { local };
        let phi0 = random_state_from(d2, &mut rng);
        r.cases += 1;
        let outcome = classify_unitary(&u, d1, d2, tol, seed)
            .and_then(|form| classify_slice(&u, d1, d2, &phi0, tol).map(|slice| (form, slice)));
        let (form, slice) = match outcome {
            Ok(x) => x,
            Err(e) => {
                r.fail(|| format!("case {n} ({d1}x{d2}): {e}"));
                continue;
            }
        };
        let matches = matches!(
            (form.verdict(), &slice),
            (Verdict::Product, SliceForm::LocalOnObject { .. }) | (Verdict::Swap, SliceForm::TransferToProbe { .. })
        );
        if !matches {
            r.fail(|| format!("case {n}: {} coupling gave {} slice", form.verdict(), slice.name()));
            continue;
        }
        let expected = embedding_from_form(&form, &phi0).expect("non-entangling");
        r.observe(phase_aligned_distance(&embedding_from_slice(&slice), &expected));
    }
    r.finish(|r| format!("{} non-entangling couplings (products and dressed swaps)", r.cases))
}

fn pointer_case(seed: RngSeed, n: usize) -> (usize, usize, MeasurementScheme, ComplexMatrix) {
    let mut rng = seed.derive("pointer", n as u64).rng();
    let d1 = 2 + n % 3;
    let d2 = 2 + (n / 3) % 3;
    let e = random_povm(d2, 2 + n % 4, &mut rng);
    let phi0 = random_state_from(d2, &mut rng);
    let coupling = kron(&haar_unitary_from(d1, &mut rng), &haar_unitary_from(d2, &mut rng));
    let s = MeasurementScheme::new(d1, phi0.clone(), coupling, e, Tolerance::new(1e-10).expect("valid"))
        .expect("generated scheme is valid");
    (d1, d2, s, phi0)
}

/// Product couplings measure trivial observables.
pub fn trivial_observable(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("trivial-observable", "no-info-no-disturbance");
    r.threshold = Some(TRIVIALITY_THRESHOLD);
    for n in 0..POINTER_CASES {
        let (_, _, s, _) = pointer_case(seed, n);
        r.cases += 1;
        r.observe(is_trivial_povm(&measured_observable(&s), tol).max_deviation);
    }
    r.finish(|r| format!("{} product couplings with random pointers", r.cases))
}

/// The same pointers under swap coupling are measured exactly.
pub fn swap_pointer(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("swap-pointer", "prob-reproducibility");
    r.threshold = Some(POINTER_THRESHOLD);
    for n in 0..POINTER_CASES {
        let (_, _, s, phi0) = pointer_case(seed, n);
        r.cases += 1;
        match swap_scheme(s.pointer(), &phi0, tol) {
            Ok(sw) => {
                let dev = measured_observable(&sw)
                    .effects()
                    .iter()
                    .zip(s.pointer().effects())
                    .map(|(a, b)| a.distance(b))
                    .fold(0.0, f64::max);
                r.observe(dev);
            }
            Err(e) => r.fail(|| format!("case {n}: {e}")),
        }
    }
    r.finish(|r| format!("{} pointers under swap coupling", r.cases))
}

/// Nontrivial measured observables always come with detectable disturbance,
/// and identity couplings neither inform nor disturb.
pub fn no_info_no_disturbance(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("no-info-no-disturbance", "no-info-no-disturbance");
    r.threshold = Some(IDENTITY_DISTURBANCE_THRESHOLD);
    r.observe(0.0);
    let mut nontrivial = 0;
    let mut least_disturbance = f64::INFINITY;
    let scheme_tol = Tolerance::new(1e-10).expect("valid");
    for n in 0..SCHEME_CASES {
        let mut rng = seed.derive("no-info", n as u64).rng();
        let kind = n % 4;
        let d1 = 2 + n % 3;
        let d2 = if kind == 1 { d1 } else { 2 + (n / 4) % 3 };
        let e = random_povm(d2, 2 + (n / 2) % 3, &mut rng);
        let phi0 = random_state_from(d2, &mut rng);
        let coupling = match kind {
            0 => ComplexMatrix::identity(d1 * d2),
            1 => &kron(&haar_unitary_from(d1, &mut rng), &haar_unitary_from(d2, &mut rng)) * &gates::swap(d1),
            2 => kron(&haar_unitary_from(d1, &mut rng), &haar_unitary_from(d2, &mut rng)),
            _ => haar_unitary_from(d1 * d2, &mut rng),
        };
        r.cases += 1;
        let report = MeasurementScheme::new(d1, phi0, coupling, e, scheme_tol)
            .and_then(|s| no_info_no_disturbance_check(&s, tol, seed.derive("no-info-states", n as u64), NO_INFO_RANDOM_STATES));
        let report = match report {
            Ok(x) => x,
            Err(err) => {
                r.fail(|| format!("case {n}: {err}"));
                continue;
            }
        };
        if kind == 0 {
            r.observe(report.max_disturbance);
            if !report.trivial {
                r.fail(|| format!("case {n}: identity coupling measured a nontrivial observable"));
            }
        }
        if report.max_triviality_deviation > NONTRIVIAL_THRESHOLD {
            nontrivial += 1;
            least_disturbance = least_disturbance.min(report.max_disturbance);
            if report.max_disturbance <= DISTURBANCE_FLOOR {
                r.fail(|| {
                    format!(
                        "case {n}: observable deviates from triviality by {:e} but disturbance is {:e}",
                        report.max_triviality_deviation, report.max_disturbance
                    )
                });
            }
        }
    }
    r.finish(|r| format!(
        "{} schemes, {nontrivial} nontrivial (least max-disturbance {least_disturbance:e})",
        r.cases
    ))
}

/// `√SWAP` built from its spectral projectors: `P_sym + i·P_anti`.
pub fn sqrt_swap_oracle(d: usize) -> ComplexMatrix {
    let id = ComplexMatrix::identity(d * d);
    let sw = gates::swap(d);
    let sym = (&id + &sw).scale_real(0.5);
    let anti = (&id - &sw).scale_real(0.5);
    &sym + &anti.scale(C64::new(0.0, 1.0))
}

/// Entropy of `(e0 + e1)/√2 ⊗ |0⟩` under `u` on `C^d ⊗ C^d`.
pub fn midpoint_entropy(u: &ComplexMatrix, d: usize, tol: Tolerance) -> nonent_core::Result<f64> {
    let mut plus = ComplexMatrix::basis(d, 0);
    plus[(1, 0)] = C64::new(1.0, 0.0);
    let plus = plus.scale_real(FRAC_1_SQRT_2);
    let psi = PureState::product(&plus, &ComplexMatrix::basis(d, 0), tol)?;
    Ok(entanglement_entropy(&psi.evolve(u)?))
}

/// A swap endpoint forces entangling intermediate couplings.
pub fn swap_obstruction(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("swap-obstruction", "swap-obstruction");
    r.threshold = Some(ORACLE_THRESHOLD);
    let mut notes = Vec::new();
    for d in [2usize, 3] {
        r.cases += 1;
        let run = geodesic_path(&gates::swap(d), d, d, tol).and_then(|p| {
            let prof = entanglement_profile(&p, &ComplexMatrix::basis(d, 0), OBSTRUCTION_STEPS, seed, PROFILE_INPUTS, tol)?;
            Ok((p, prof))
        });
        let (path, prof) = match run {
            Ok(x) => x,
            Err(e) => {
                r.fail(|| format!("d={d}: {e}"));
                continue;
            }
        };
        let best = prof.argmax();
        notes.push(format!("d={d}: max {:.6} bits at t={}", best.max_entropy, best.t));
        if !prof.obstruction_witnessed() || best.max_entropy <= OBSTRUCTION_ENTROPY {
            r.fail(|| format!("d={d}: no entangling interior point above {OBSTRUCTION_ENTROPY} bits"));
        }
        if d == 2 {
            let half = path.point(0.5).and_then(|u| midpoint_entropy(&u, d, tol));
            let oracle = midpoint_entropy(&sqrt_swap_oracle(d), d, tol);
            match (half, oracle) {
                (Ok(a), Ok(b)) => {
                    notes.push(format!("midpoint {a:.12} vs oracle {b:.12}"));
                    r.observe((a - b).abs());
                }
                _ => r.fail(|| "midpoint evaluation failed".to_string()),
            }
        }
    }
    r.finish(|_| notes.join("; "))
}

/// Generators `A⊗I + I⊗B` never create entanglement along the path.
pub fn local_generator(tol: Tolerance, seed: RngSeed) -> SuiteReport {
    let mut r = SuiteReport::new("local-generator", "swap-obstruction");
    r.threshold = Some(LOCAL_ENTROPY_THRESHOLD);
    for n in 0..LOCAL_GENERATOR_CASES {
        let (d1, d2) = DIMS[n % 9];
        let mut rng = seed.derive("local-generator", n as u64).rng();
        let a = random_hermitian(d1, &mut rng).scale_real(2.0);
        let b = random_hermitian(d2, &mut rng).scale_real(2.0);
        let h = &kron(&a, &ComplexMatrix::identity(d2)) + &kron(&ComplexMatrix::identity(d1), &b);
        let probe = random_state_from(d2, &mut rng);
        r.cases += 1;
        let prof = UnitaryPath::from_generator(&h, d1, d2, tol)
            .and_then(|p| entanglement_profile(&p, &probe, LOCAL_GENERATOR_STEPS, seed, PROFILE_INPUTS, tol));
        match prof {
            Ok(prof) => {
                for p in &prof.points {
                    r.observe(p.max_entropy);
                    if p.verdict != Verdict::Product {
                        r.fail(|| format!("case {n}: t={} classified {}", p.t, p.verdict));
                    }
                }
            }
            Err(e) => r.fail(|| format!("case {n}: {e}")),
        }
    }
    r.finish(|r| format!("{} local generators, {} grid steps each", r.cases, LOCAL_GENERATOR_STEPS))
}

pub type Suite = fn(Tolerance, RngSeed) -> SuiteReport;

/// `(name, claim, runner)` in report order.
pub const SUITES: &[(&str, &str, Suite)] = &[
    ("prob-reproducibility", "prob-reproducibility", reproducibility),
    ("classification-oracle", "theorem-classification", classification),
    ("equal-dimension", "theorem-classification", equal_dimension),
    ("slice-consistency", "prop1-slice", slice_consistency),
    ("trivial-observable", "no-info-no-disturbance", trivial_observable),
    ("swap-pointer", "prob-reproducibility", swap_pointer),
    ("no-info-no-disturbance", "no-info-no-disturbance", no_info_no_disturbance),
    ("swap-obstruction", "swap-obstruction", swap_obstruction),
    ("local-generator", "swap-obstruction", local_generator),
];

/// Runs every suite in order; a tolerance outside [`TOL_RANGE`] fails all
/// of them without running anything.
pub fn verify(settings: &Settings) -> VerifyReport {
    let eps = settings.tol.eps;
    let misconfigured = !(TOL_RANGE.0..=TOL_RANGE.1).contains(&eps);
    let suites: Vec<SuiteReport> = SUITES
        .iter()
        .map(|&(name, claim, run)| {
            if misconfigured {
                let mut r = SuiteReport::new(name, claim);
                r.detail = format!(
                    "tolerance misconfigured: {eps:e} is outside the attainable range [{:e}, {:e}] for double precision",
                    TOL_RANGE.0, TOL_RANGE.1
                );
                r
            } else {
                run(settings.tol, settings.seed)
            }
        })
        .collect();
    VerifyReport {
        meta: Meta::new("verify", settings),
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nonent_core::linalg::unitarity_defect;

    #[test]
    fn partial_swap_is_a_permutation() {
        let p = partial_swap(2, 3);
        assert!(unitarity_defect(&p).unwrap() < 1e-15);
        // e_0 ⊗ f_1 ↔ e_1 ⊗ f_0
        assert_eq!(p[(3, 1)], C64::new(1.0, 0.0));
        assert_eq!(p[(5, 5)], C64::new(1.0, 0.0));
    }

    #[test]
    fn oracle_squares_to_swap() {
        for d in [2, 3] {
            let o = sqrt_swap_oracle(d);
            assert!((&o * &o).distance(&gates::swap(d)) < 1e-14);
        }
    }

    #[test]
    fn corpus_is_large_enough_and_mixed() {
        let c = classification_corpus(RngSeed(1));
        assert!(c.len() >= 1000);
        for kind in ["haar-product", "dressed-swap", "haar", "cnot", "controlled-phase"] {
            assert!(c.iter().any(|e| e.kind == kind), "{kind}");
        }
        assert!(c.iter().all(|e| e.d1 * e.d2 <= 16));
    }

    #[test]
    fn misconfigured_tolerance_fails_every_suite() {
        let settings = Settings {
            tol: Tolerance::new(1e-30).unwrap(),
            ..Settings::default()
        };
        let report = verify(&settings);
        assert!(!report.passed);
        assert_eq!(report.suites.len(), SUITES.len());
        assert!(report.suites.iter().all(|s| !s.passed && s.detail.contains("misconfigured")));
    }

    #[test]
    fn suite_names_line_up() {
        for &(name, claim, run) in &SUITES[..1] {
            let r = run(Tolerance::default(), RngSeed(1));
            assert_eq!((r.name, r.claim), (name, claim));
        }
        let r = swap_obstruction(Tolerance::default(), RngSeed(1));
        assert_eq!((r.name, r.claim), (SUITES[7].0, SUITES[7].1));
    }
}
