//! JSON file formats shared by every subcommand.

use std::fs;
use std::io::Read;
use std::path::Path;

use nonent_core::bipartite::{PureState, SchmidtDecomposition};
use nonent_core::measurement::Povm;
use nonent_core::{ComplexMatrix, Error};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `{"rows", "cols", "re", "im"}` with row-major parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            re: m.as_slice().iter().map(|z| z.re).collect(),
            im: m.as_slice().iter().map(|z| z.im).collect(),
        }
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, Error> {
        ComplexMatrix::from_parts(self.rows, self.cols, &self.re, &self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PureStateJson {
    pub d1: usize,
    pub d2: usize,
    pub vec: MatrixJson,
}

impl From<&PureState> for PureStateJson {
    fn from(psi: &PureState) -> Self {
        Self {
            d1: psi.space().d1(),
            d2: psi.space().d2(),
            vec: psi.vec().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtJson {
    pub coeffs: Vec<f64>,
    pub left: Vec<MatrixJson>,
    pub right: Vec<MatrixJson>,
}

impl From<&SchmidtDecomposition> for SchmidtJson {
    fn from(s: &SchmidtDecomposition) -> Self {
        Self {
            coeffs: s.coeffs.clone(),
            left: s.left.iter().map(MatrixJson::from).collect(),
            right: s.right.iter().map(MatrixJson::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmJson {
    pub dim: usize,
    pub outcomes: Vec<String>,
    pub effects: Vec<MatrixJson>,
}

impl From<&Povm> for PovmJson {
    fn from(p: &Povm) -> Self {
        Self {
            dim: p.dim(),
            outcomes: p.outcomes().to_vec(),
            effects: p.effects().iter().map(MatrixJson::from).collect(),
        }
    }
}

impl PovmJson {
    /// Shape-checked POVM; positivity and completeness are checked by the caller.
    pub fn to_povm(&self) -> Result<Povm, Error> {
        let effects = self
            .effects
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>, _>>()?;
        let povm = Povm::new(self.outcomes.clone(), effects)?;
        if povm.dim() != self.dim {
            return Err(Error::InvalidPovm(format!(
                "declared dim {} but effects are {}x{}",
                self.dim,
                povm.dim(),
                povm.dim()
            )));
        }
        Ok(povm)
    }
}

/// Object dimension, probe preparation, coupling and pointer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeJson {
    pub object_dim: usize,
    pub probe_init: MatrixJson,
    pub coupling: MatrixJson,
    pub pointer: PovmJson,
}

/// Reads and parses a JSON file; `-` reads standard input.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::input(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::input(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("parsing {}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
