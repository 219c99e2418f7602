//! Subcommand runners. Each returns its rendered report; the caller decides
//! where it goes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nonent_core::bipartite::{schmidt, DensityOperator};
use nonent_core::classifier::{
    classify_slice, classify_unitary, operator_schmidt_coefficients, operator_schmidt_rank, EntanglingWitness,
    NonEntanglingForm, SliceForm, Verdict,
};
use nonent_core::dynamics::{entanglement_profile, geodesic_path, EntanglementProfile, UnitaryPath};
use nonent_core::gates;
use nonent_core::linalg::{isometry_defect, unitarity_defect};
use nonent_core::measurement::{
    is_trivial_povm, luders_instrument, measured_observable, no_info_no_disturbance_check, outcome_probabilities,
    validate_povm, MeasurementScheme, PovmReport,
};
use nonent_core::random::random_state;
use nonent_core::{ComplexMatrix, Error};
use serde::Serialize;

use crate::formats::{load, to_json, MatrixJson, PovmJson, PureStateJson, SchemeJson, SchmidtJson};
use crate::output::write_atomic;
use crate::suites;
use crate::{fixtures, CliError, Format, Meta, Settings, EXIT_FAILURE, EXIT_VIOLATION};

pub const DEFAULT_PROFILE_INPUTS: usize = 16;
pub const DEFAULT_NO_INFO_STATES: usize = 32;

/// A finished command: exit code plus its report in one or more formats.
#[derive(Debug, Clone)]
pub struct Output {
    pub code: i32,
    pub renderings: Vec<(Format, String)>,
    /// Written next to `--out` in every available format instead of just
    /// the selected one.
    pub multi_file: bool,
    pub summary: Option<String>,
}

impl Output {
    fn single(code: i32, json: String, text: String) -> Self {
        Self {
            code,
            renderings: vec![(Format::Json, json), (Format::Text, text)],
            multi_file: false,
            summary: None,
        }
    }

    pub fn rendering(&self, format: Format) -> Option<&str> {
        self.renderings.iter().find(|(f, _)| *f == format).map(|(_, s)| s.as_str())
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "txt",
    }
}

/// Writes `output` to `out` (atomically) or standard output.
pub fn emit(output: &Output, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) if output.multi_file => {
            let files: Vec<(PathBuf, String)> = output
                .renderings
                .iter()
                .filter(|(f, _)| *f != Format::Text)
                .map(|(f, s)| (path.with_extension(extension(*f)), s.clone()))
                .collect();
            write_atomic(&files)?;
        }
        _ => {
            let body = output.rendering(format).ok_or_else(|| {
                CliError::input(format!("this command has no {} output", extension(format)))
            })?;
            match out {
                Some(path) => write_atomic(&[(path.to_path_buf(), body.to_string())])?,
                None => print!("{body}"),
            }
        }
    }
    if let Some(s) = &output.summary {
        eprintln!("{s}");
    }
    Ok(())
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    let m: MatrixJson = load(path)?;
    m.to_matrix()
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// `--dims` if given (checked against `n`), otherwise `√n × √n`.
fn resolve_dims(settings: &Settings, n: usize) -> Result<(usize, usize), CliError> {
    match settings.dims {
        Some((d1, d2)) if d1 == 0 || d2 == 0 => Err(CliError::input("dimensions must be positive")),
        Some((d1, d2)) if d1.checked_mul(d2) == Some(n) => Ok((d1, d2)),
        Some((d1, d2)) => Err(CliError::input(format!(
            "dims {d1} x {d2} do not match a {n} x {n} operator"
        ))),
        None => {
            let d = (n as f64).sqrt().round() as usize;
            if d * d == n && d > 0 {
                Ok((d, d))
            } else {
                Err(CliError::input(format!("cannot infer factor dimensions of a {n} x {n} operator; pass --dims")))
            }
        }
    }
}

fn require_square(u: &ComplexMatrix) -> Result<usize, CliError> {
    if u.is_square() {
        Ok(u.rows())
    } else {
        Err(CliError::input(format!("operator must be square, got {} x {}", u.rows(), u.cols())))
    }
}

fn unitary_input(settings: &Settings, path: &Path) -> Result<(ComplexMatrix, usize, usize), CliError> {
    let u = load_matrix(path)?;
    let n = require_square(&u)?;
    let (d1, d2) = resolve_dims(settings, n)?;
    Ok((u, d1, d2))
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Factors {
    Product { v: MatrixJson, w: MatrixJson },
    Swap { v21: MatrixJson, w12: MatrixJson },
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub candidate: String,
    pub input: PureStateJson,
    pub image: PureStateJson,
    pub schmidt: SchmidtJson,
    pub second_coefficient: f64,
}

impl WitnessJson {
    fn new(w: &EntanglingWitness, settings: &Settings) -> Self {
        Self {
            candidate: w.candidate.to_string(),
            input: (&w.input).into(),
            image: (&w.image).into(),
            schmidt: (&schmidt(&w.image, settings.tol)).into(),
            second_coefficient: w.second_coefficient,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub dims: [usize; 2],
    pub verdict: &'static str,
    pub factors: Option<Factors>,
    pub reconstruction_error: Option<f64>,
    pub witness: Option<WitnessJson>,
    pub unitarity_defect: f64,
    pub operator_schmidt_rank: usize,
    pub operator_schmidt_coefficients: Vec<f64>,
}

pub fn classify(settings: &Settings, input: &Path) -> Result<Output, CliError> {
    let (u, d1, d2) = unitary_input(settings, input)?;
    let form = classify_unitary(&u, d1, d2, settings.tol, settings.seed)?;
    let factors = match &form {
        NonEntanglingForm::Product { v, w } => Some(Factors::Product {
            v: v.into(),
            w: w.into(),
        }),
        NonEntanglingForm::SwapForm { v21, w12 } => Some(Factors::Swap {
            v21: v21.into(),
            w12: w12.into(),
        }),
        NonEntanglingForm::Entangling(_) => None,
    };
    let witness = match &form {
        NonEntanglingForm::Entangling(w) => Some(WitnessJson::new(w, settings)),
        _ => None,
    };
    let report = ClassifyReport {
        meta: Meta::new("theorem-classification", settings),
        dims: [d1, d2],
        verdict: form.verdict().as_str(),
        factors,
        reconstruction_error: form.reconstruct().map(|r| r.distance(&u)),
        witness,
        unitarity_defect: unitarity_defect(&u)?,
        operator_schmidt_rank: operator_schmidt_rank(&u, d1, d2, settings.tol)?,
        operator_schmidt_coefficients: operator_schmidt_coefficients(&u, d1, d2)?,
    };
    let mut text = format!("verdict: {}\ndims: {d1} x {d2}\n", report.verdict);
    let _ = writeln!(text, "operator Schmidt rank: {}", report.operator_schmidt_rank);
    if let Some(e) = report.reconstruction_error {
        let _ = writeln!(text, "reconstruction error: {e:e}");
    }
    if let NonEntanglingForm::Entangling(w) = &form {
        let _ = writeln!(
            text,
            "witness: {} (second Schmidt coefficient {:.6})",
            w.candidate, w.second_coefficient
        );
    }
    Ok(Output::single(0, to_json(&report), text))
}

/// Names the fixed gates a slice report can be about.
pub fn identify_gate(u: &ComplexMatrix, d1: usize, d2: usize) -> Option<&'static str> {
    let close = |g: &ComplexMatrix| g.shape() == u.shape() && g.distance(u) < 1e-12;
    if close(&ComplexMatrix::identity(d1 * d2)) {
        Some("identity")
    } else if d1 == d2 && close(&gates::swap(d1)) {
        Some("swap")
    } else if close(&gates::cnot()) {
        Some("cnot (control on object)")
    } else if close(&gates::cnot_reversed()) {
        Some("cnot (control on probe)")
    } else {
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SliceReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub dims: [usize; 2],
    pub gate: Option<&'static str>,
    pub form: &'static str,
    pub isometry: MatrixJson,
    pub phi_prime: MatrixJson,
    pub isometry_defect: f64,
    /// Largest `‖U(φ⊗φ0) − predicted image‖` over basis and sampled states.
    pub prediction_residual: f64,
}

pub fn slice(settings: &Settings, unitary: &Path, phi0_path: &Path) -> Result<Output, CliError> {
    let u = load_matrix(unitary)?;
    let n = require_square(&u)?;
    let phi0 = load_matrix(phi0_path)?;
    if phi0.cols() != 1 || phi0.rows() == 0 {
        return Err(CliError::input("probe state must be a column vector"));
    }
    let (d1, d2) = match settings.dims {
        Some(_) => resolve_dims(settings, n)?,
        None if n % phi0.rows() == 0 => (n / phi0.rows(), phi0.rows()),
        None => return Err(CliError::input("probe dimension does not divide the operator dimension")),
    };
    let form = classify_slice(&u, d1, d2, &phi0, settings.tol).map_err(|e| {
        let mut err = CliError::from(e);
        if let Some(gate) = identify_gate(&u, d1, d2) {
            err.message.push_str(&format!(" [input is {gate}]"));
        }
        err
    })?;
    let phi_prime = match &form {
        SliceForm::LocalOnObject { phi_prime, .. } | SliceForm::TransferToProbe { phi_prime, .. } => phi_prime,
    };
    let mut states: Vec<ComplexMatrix> = (0..d1).map(|i| ComplexMatrix::basis(d1, i)).collect();
    states.extend((0..8).map(|k| random_state(d1, settings.seed.derive("slice-check", k))));
    let mut residual = 0.0f64;
    for phi in &states {
        let actual = &u * &phi.kron(&phi0)?;
        residual = residual.max(actual.distance(&form.image(phi)));
    }
    let report = SliceReport {
        meta: Meta::new("prop1-slice", settings),
        dims: [d1, d2],
        gate: identify_gate(&u, d1, d2),
        form: form.name(),
        isometry: form.isometry().into(),
        phi_prime: phi_prime.into(),
        isometry_defect: isometry_defect(form.isometry()),
        prediction_residual: residual,
    };
    let text = format!(
        "form: {}\ndims: {d1} x {d2}\ngate: {}\nisometry defect: {:e}\nprediction residual: {:e}\n",
        report.form,
        report.gate.unwrap_or("-"),
        report.isometry_defect,
        report.prediction_residual
    );
    Ok(Output::single(0, to_json(&report), text))
}

#[derive(Debug, Clone, Serialize)]
pub struct PovmViolation {
    #[serde(flatten)]
    pub meta: Meta,
    pub valid: bool,
    pub hermiticity_defect: f64,
    pub hermiticity_outcome: usize,
    pub min_eigenvalue: f64,
    pub min_eigenvalue_outcome: usize,
    pub completeness_defect: f64,
}

impl PovmViolation {
    fn new(r: &PovmReport, settings: &Settings) -> Self {
        Self {
            meta: Meta::new("prob-reproducibility", settings),
            valid: r.valid,
            hermiticity_defect: r.hermiticity_defect.0,
            hermiticity_outcome: r.hermiticity_defect.1,
            min_eigenvalue: r.min_eigenvalue.0,
            min_eigenvalue_outcome: r.min_eigenvalue.1,
            completeness_defect: r.completeness_defect,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NoInfoJson {
    pub states_checked: usize,
    pub max_disturbance: f64,
    pub most_disturbed: MatrixJson,
    pub max_triviality_deviation: f64,
    pub undisturbed: bool,
    pub trivial: bool,
    pub implication_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub object_dim: usize,
    pub probe_dim: usize,
    pub outcomes: Vec<String>,
    pub probabilities: Vec<f64>,
    pub measured_observable: PovmJson,
    /// `⟨φ|E'(X)φ⟩` from the measured observable.
    pub measured_born: Vec<f64>,
    pub reproducibility_deviation: f64,
    /// `max_X ‖E'(X) − E(X)‖_F` when object and probe have equal dimension.
    pub pointer_deviation: Option<f64>,
    pub trivial: bool,
    pub triviality_deviation: f64,
    pub trivial_scalars: Vec<f64>,
    pub disturbance: f64,
    pub no_info: NoInfoJson,
}

pub fn measure(settings: &Settings, scheme_path: &Path, state_path: &Path) -> Result<Output, CliError> {
    let tol = settings.tol;
    let scheme: SchemeJson = load(scheme_path)?;
    let pointer = scheme
        .pointer
        .to_povm()
        .map_err(|e| CliError::new(EXIT_VIOLATION, format!("invalid POVM: {e}")))?;
    let check = validate_povm(&pointer, tol);
    if !check.valid {
        let json = to_json(&PovmViolation::new(&check, settings));
        let mut out = Output::single(EXIT_VIOLATION, json, format!("invalid POVM: {}\n", check.summary()));
        out.summary = Some(format!("invalid POVM: {}", check.summary()));
        return Ok(out);
    }
    let phi = load_matrix(state_path)?;
    if phi.shape() != (scheme.object_dim, 1) {
        return Err(CliError::input(format!(
            "state must be a {} x 1 vector, got {} x {}",
            scheme.object_dim,
            phi.rows(),
            phi.cols()
        )));
    }
    let norm = phi.norm();
    if (norm - 1.0).abs() > tol.eps {
        return Err(CliError::input(format!("state is not normalized (norm {norm})")));
    }
    let probe = scheme.probe_init.to_matrix().map_err(|e| CliError::input(format!("probe_init: {e}")))?;
    let coupling = scheme.coupling.to_matrix().map_err(|e| CliError::input(format!("coupling: {e}")))?;
    let s = MeasurementScheme::new(scheme.object_dim, probe, coupling, pointer, tol)?;

    let dist = outcome_probabilities(&s, &phi, tol)?;
    let measured = measured_observable(&s);
    let measured_born: Vec<f64> = measured.effects().iter().map(|e| phi.inner(&(e * &phi)).re).collect();
    let reproducibility_deviation = dist
        .probabilities
        .iter()
        .zip(&measured_born)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let pointer_deviation = (s.object_dim() == s.probe_dim()).then(|| {
        measured
            .effects()
            .iter()
            .zip(s.pointer().effects())
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    });
    let triviality = is_trivial_povm(&measured, tol);
    let disturbance = luders_instrument(&s, tol)?.disturbance(&DensityOperator::pure(&phi))?;
    let n_states = settings.samples.unwrap_or(DEFAULT_NO_INFO_STATES);
    let no_info = no_info_no_disturbance_check(&s, tol, settings.seed.derive("measure", 0), n_states)?;
    let report = MeasureReport {
        meta: Meta::new("prob-reproducibility", settings),
        object_dim: s.object_dim(),
        probe_dim: s.probe_dim(),
        outcomes: dist.labels.clone(),
        probabilities: dist.probabilities.clone(),
        measured_observable: (&measured).into(),
        measured_born,
        reproducibility_deviation,
        pointer_deviation,
        trivial: triviality.trivial,
        triviality_deviation: triviality.max_deviation,
        trivial_scalars: triviality.scalars,
        disturbance,
        no_info: NoInfoJson {
            states_checked: no_info.states_checked,
            max_disturbance: no_info.max_disturbance,
            most_disturbed: (&no_info.most_disturbed).into(),
            max_triviality_deviation: no_info.max_triviality_deviation,
            undisturbed: no_info.undisturbed,
            trivial: no_info.trivial,
            implication_holds: no_info.implication_holds,
        },
    };
    let mut text = String::new();
    for (label, p) in report.outcomes.iter().zip(&report.probabilities) {
        let _ = writeln!(text, "p({label}) = {p:.12}");
    }
    let _ = writeln!(
        text,
        "measured observable trivial: {} (deviation {:e})",
        report.trivial, report.triviality_deviation
    );
    let _ = writeln!(text, "disturbance at this state: {:e}", report.disturbance);
    let _ = writeln!(
        text,
        "no information without disturbance: {}",
        if report.no_info.implication_holds { "holds" } else { "VIOLATED" }
    );
    Ok(Output::single(0, to_json(&report), text))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfilePointJson {
    pub t: f64,
    pub max_entropy_bits: f64,
    pub op_schmidt_rank: usize,
    pub verdict: &'static str,
    pub maximizing_input_id: String,
    /// `φ ⊗ probe_init` for the maximizing object state `φ`.
    pub witness_input: MatrixJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub dims: [usize; 2],
    pub n_steps: usize,
    pub n_inputs: usize,
    pub endpoint_verdict: &'static str,
    pub probe_init: MatrixJson,
    pub max_entropy_bits: f64,
    pub t_max: f64,
    pub maximizing_input_id: String,
    pub interior_entangling: bool,
    pub swap_obstruction_witnessed: bool,
    pub points: Vec<ProfilePointJson>,
}

pub fn profile_csv(profile: &EntanglementProfile) -> String {
    let mut s = String::from("t,max_entropy_bits,op_schmidt_rank,verdict,maximizing_input_id\n");
    for p in &profile.points {
        let _ = writeln!(s, "{},{},{},{},{}", p.t, p.max_entropy, p.op_schmidt_rank, p.verdict, p.input);
    }
    s
}

pub fn path(settings: &Settings, input: &Path, generator: bool, probe: Option<&Path>) -> Result<Output, CliError> {
    let (m, d1, d2) = unitary_input(settings, input)?;
    let tol = settings.tol;
    let p = if generator {
        UnitaryPath::from_generator(&m, d1, d2, tol)?
    } else {
        geodesic_path(&m, d1, d2, tol)?
    };
    let probe_init = match probe {
        Some(path) => load_matrix(path)?,
        None => ComplexMatrix::basis(d2, 0),
    };
    let n_inputs = settings.samples.unwrap_or(DEFAULT_PROFILE_INPUTS);
    let profile = entanglement_profile(&p, &probe_init, settings.steps, settings.seed, n_inputs, tol)?;
    let endpoint_verdict = classify_unitary(p.endpoint(), d1, d2, tol, settings.seed)?.verdict();
    let best = profile.argmax();
    let interior = profile.obstruction_witnessed();
    let witnessed = interior && endpoint_verdict == Verdict::Swap;
    let report = PathReport {
        meta: Meta::new("swap-obstruction", settings),
        dims: [d1, d2],
        n_steps: settings.steps,
        n_inputs,
        endpoint_verdict: endpoint_verdict.as_str(),
        probe_init: (&probe_init).into(),
        max_entropy_bits: best.max_entropy,
        t_max: best.t,
        maximizing_input_id: best.input.to_string(),
        interior_entangling: interior,
        swap_obstruction_witnessed: witnessed,
        points: profile
            .points
            .iter()
            .map(|pt| -> Result<ProfilePointJson, Error> {
                Ok(ProfilePointJson {
                    t: pt.t,
                    max_entropy_bits: pt.max_entropy,
                    op_schmidt_rank: pt.op_schmidt_rank,
                    verdict: pt.verdict.as_str(),
                    maximizing_input_id: pt.input.to_string(),
                    witness_input: (&pt.object_state.kron(&probe_init)?).into(),
                })
            })
            .collect::<Result<_, _>>()?,
    };
    let summary = format!(
        "max entropy {:.6} bits at t = {} (input {}); swap obstruction witnessed: {}",
        best.max_entropy,
        best.t,
        best.input,
        if witnessed { "yes" } else { "no" }
    );
    let mut text = String::new();
    for pt in &profile.points {
        let _ = writeln!(
            text,
            "t={:<10} S={:.9} rank={} {} [{}]",
            pt.t, pt.max_entropy, pt.op_schmidt_rank, pt.verdict, pt.input
        );
    }
    let _ = writeln!(text, "{summary}");
    Ok(Output {
        code: 0,
        renderings: vec![
            (Format::Json, to_json(&report)),
            (Format::Csv, profile_csv(&profile)),
            (Format::Text, text),
        ],
        multi_file: true,
        summary: Some(summary),
    })
}

pub fn verify(settings: &Settings) -> Result<Output, CliError> {
    let report = suites::verify(settings);
    let mut text = String::new();
    for s in &report.suites {
        let _ = writeln!(
            text,
            "{} {:<24} {:<24} cases={:<5} worst={} :: {}",
            if s.passed { "PASS" } else { "FAIL" },
            s.name,
            s.claim,
            s.cases,
            s.worst_deviation.map_or("-".to_string(), |w| format!("{w:e}")),
            s.detail
        );
    }
    let _ = writeln!(text, "overall: {}", if report.passed { "PASS" } else { "FAIL" });
    let code = if report.passed { 0 } else { EXIT_FAILURE };
    Ok(Output::single(code, to_json(&report), text))
}

pub fn gen(settings: &Settings, name: &str) -> Result<Output, CliError> {
    let (d1, d2) = settings.dims.unwrap_or((2, 2));
    let json = fixtures::generate(name, d1, d2, settings.seed)?;
    Ok(Output::single(0, json.clone(), json))
}
