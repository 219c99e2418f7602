//! Named JSON fixtures for `nonent gen`.

use nonent_core::gates;
use nonent_core::measurement::{random_povm, Povm};
use nonent_core::random::{haar_unitary, random_hermitian, random_state};
use nonent_core::{ComplexMatrix, RngSeed};

use crate::formats::{to_json, MatrixJson, PovmJson, SchemeJson};
use crate::CliError;

pub const FIXTURES: &[&str] = &[
    "identity",
    "swap",
    "cnot",
    "cnot-reversed",
    "controlled-phase",
    "controlled-shift",
    "haar",
    "haar-product",
    "dressed-swap",
    "local-generator",
    "computational-povm",
    "trivial-povm",
    "trine-povm",
    "qubit-trine-povm",
    "random-povm",
    "zero-state",
    "plus-state",
    "random-state",
    "swap-scheme",
    "product-scheme",
    "identity-scheme",
];

fn haar_pair(d1: usize, d2: usize, seed: RngSeed) -> (ComplexMatrix, ComplexMatrix) {
    (
        haar_unitary(d1, seed.derive("gen-v", 0)),
        haar_unitary(d2, seed.derive("gen-w", 0)),
    )
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b).expect("fixture dimensions are small")
}

fn require_equal(name: &str, d1: usize, d2: usize) -> Result<usize, CliError> {
    if d1 == d2 {
        Ok(d1)
    } else {
        Err(CliError::input(format!("{name} needs equal dimensions, got {d1} and {d2}")))
    }
}

fn scheme(object_dim: usize, probe: &ComplexMatrix, coupling: &ComplexMatrix, pointer: &Povm) -> String {
    to_json(&SchemeJson {
        object_dim,
        probe_init: probe.into(),
        coupling: coupling.into(),
        pointer: pointer.into(),
    })
}

/// Renders the fixture `name` as JSON. Bipartite fixtures use `(d1, d2)`;
/// single-system fixtures use `d1`.
pub fn generate(name: &str, d1: usize, d2: usize, seed: RngSeed) -> Result<String, CliError> {
    if d1 == 0 || d2 == 0 {
        return Err(CliError::input("dimensions must be positive"));
    }
    let matrix = |m: &ComplexMatrix| Ok(to_json(&MatrixJson::from(m)));
    let povm = |p: &Povm| Ok(to_json(&PovmJson::from(p)));
    let zero1 = ComplexMatrix::basis(d1, 0);
    let zero2 = ComplexMatrix::basis(d2, 0);
    match name {
        "identity" => matrix(&ComplexMatrix::identity(d1 * d2)),
        "swap" => matrix(&gates::swap(require_equal(name, d1, d2)?)),
        "cnot" => matrix(&gates::cnot()),
        "cnot-reversed" => matrix(&gates::cnot_reversed()),
        "controlled-phase" => matrix(&gates::controlled_phase(d1, d2, std::f64::consts::FRAC_PI_2)),
        "controlled-shift" => matrix(&gates::controlled_shift(d1, d2)),
        "haar" => matrix(&haar_unitary(d1 * d2, seed.derive("gen-haar", 0))),
        "haar-product" => {
            let (v, w) = haar_pair(d1, d2, seed);
            matrix(&kron(&v, &w))
        }
        "dressed-swap" => {
            let d = require_equal(name, d1, d2)?;
            let (v, w) = haar_pair(d, d, seed);
            matrix(&(&kron(&v, &w) * &gates::swap(d)))
        }
        "local-generator" => {
            let mut rng = seed.derive("gen-generator", 0).rng();
            let a = random_hermitian(d1, &mut rng);
            let b = random_hermitian(d2, &mut rng);
            matrix(&(&kron(&a, &ComplexMatrix::identity(d2)) + &kron(&ComplexMatrix::identity(d1), &b)))
        }
        "computational-povm" => povm(&Povm::computational(d1)),
        "trivial-povm" => povm(&Povm::trivial(d1, &[0.5, 0.5])),
        "trine-povm" => povm(&Povm::qutrit_trine()),
        "qubit-trine-povm" => povm(&Povm::trine()),
        "random-povm" => povm(&random_povm(d1, 3, &mut seed.derive("gen-povm", 0).rng())),
        "zero-state" => matrix(&zero1),
        "plus-state" => {
            if d1 < 2 {
                return Err(CliError::input("plus-state needs dimension at least 2"));
            }
            let mut v = zero1;
            v[(1, 0)] = nonent_core::C64::new(1.0, 0.0);
            matrix(&v.scale_real(std::f64::consts::FRAC_1_SQRT_2))
        }
        "random-state" => matrix(&random_state(d1, seed.derive("gen-state", 0))),
        "swap-scheme" => {
            let d = require_equal(name, d1, d2)?;
            Ok(scheme(d, &zero2, &gates::swap(d), &Povm::computational(d)))
        }
        "product-scheme" => {
            let (v, w) = haar_pair(d1, d2, seed);
            Ok(scheme(d1, &zero2, &kron(&v, &w), &Povm::computational(d2)))
        }
        "identity-scheme" => Ok(scheme(
            d1,
            &zero2,
            &ComplexMatrix::identity(d1 * d2),
            &Povm::computational(d2),
        )),
        other => Err(CliError::input(format!(
            "unknown fixture {other:?}; known fixtures: {}",
            FIXTURES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nonent_core::measurement::validate_povm;
    use nonent_core::Tolerance;

    #[test]
    fn every_listed_fixture_generates() {
        for name in FIXTURES {
            let (d1, d2) = if name.starts_with("cnot") { (2, 2) } else { (3, 3) };
            assert!(generate(name, d1, d2, RngSeed(1)).is_ok(), "{name}");
        }
    }

    #[test]
    fn unknown_fixture_is_an_input_error() {
        assert_eq!(generate("nope", 2, 2, RngSeed(1)).unwrap_err().code, crate::EXIT_INPUT);
        assert_eq!(generate("swap", 2, 3, RngSeed(1)).unwrap_err().code, crate::EXIT_INPUT);
    }

    #[test]
    fn fixtures_are_deterministic_per_seed() {
        let a = generate("haar-product", 3, 3, RngSeed(8)).unwrap();
        assert_eq!(a, generate("haar-product", 3, 3, RngSeed(8)).unwrap());
        assert_ne!(a, generate("haar-product", 3, 3, RngSeed(9)).unwrap());
    }

    #[test]
    fn trine_fixture_is_a_valid_qutrit_povm() {
        let text = generate("trine-povm", 2, 2, RngSeed(1)).unwrap();
        let p: PovmJson = serde_json::from_str(&text).unwrap();
        let p = p.to_povm().unwrap();
        assert_eq!(p.dim(), 3);
        assert!(validate_povm(&p, Tolerance::default()).valid);
    }
}
