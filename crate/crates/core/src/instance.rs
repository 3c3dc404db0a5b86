//! JSON instance and report files.
//!
//! An instance file names elements and automorphism words of one algebra:
//!
//! ```json
//! {
//!   "algebra": { "kind": "sym", "param": 2 },
//!   "elements": { "x": [[2, 1], [1, 2]], "y": [[1, 0], [0, 1]] },
//!   "maps": { "g": [ { "type": "scalar", "payload": 2.0 },
//!                    { "type": "congruence", "payload": [[1, 1], [0, 1]] } ] }
//! }
//! ```
//!
//! Symmetric matrices are written as row-major nested arrays; other
//! algebras use flat arrays. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::algebra::{Algebra, AlgebraKind, Element};
use crate::error::{Error, Result};
use crate::metric::MetricReport;
use crate::solver::SolveReport;
use crate::transforms::{AutomorphismWord, Generator};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coords {
    Flat(Vec<f64>),
    Rows(Vec<Vec<f64>>),
}

impl Coords {
    pub fn of(x: &Element) -> Coords {
        match x.algebra().kind {
            AlgebraKind::SymMatrix => Coords::Rows(x.rows()),
            _ => Coords::Flat(x.coords().to_vec()),
        }
    }

    pub fn to_element(&self, algebra: Algebra) -> Result<Element> {
        match (algebra.kind, self) {
            (AlgebraKind::SymMatrix, Coords::Rows(rows)) => {
                let e = Element::from_rows(rows)?;
                algebra.check_same(&e.algebra())?;
                Ok(e)
            }
            (AlgebraKind::SymMatrix, Coords::Flat(_)) => Err(Error::Parse(
                "symmetric matrices must be written as nested row arrays".into(),
            )),
            (_, Coords::Flat(c)) => Element::new(algebra, c.clone()),
            (_, Coords::Rows(_)) => Err(Error::Parse(format!(
                "{algebra} elements must be flat arrays"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "type",
    content = "payload",
    rename_all = "lowercase",
    deny_unknown_fields
)]
pub enum GeneratorSpec {
    Scalar(f64),
    Quad(Coords),
    Congruence(Vec<Vec<f64>>),
    Permutation(Vec<usize>),
}

impl GeneratorSpec {
    pub fn of(g: &Generator) -> GeneratorSpec {
        match g {
            Generator::Scalar(mu) => GeneratorSpec::Scalar(*mu),
            Generator::Quad(a) => GeneratorSpec::Quad(Coords::of(a)),
            Generator::Congruence { side, t } => {
                GeneratorSpec::Congruence(t.chunks(*side).map(<[f64]>::to_vec).collect())
            }
            Generator::Permutation(sigma) => GeneratorSpec::Permutation(sigma.clone()),
        }
    }

    pub fn to_generator(&self, algebra: Algebra) -> Result<Generator> {
        Ok(match self {
            GeneratorSpec::Scalar(mu) => Generator::Scalar(*mu),
            GeneratorSpec::Quad(c) => Generator::Quad(c.to_element(algebra)?),
            GeneratorSpec::Congruence(rows) => {
                let side = rows.len();
                if rows.iter().any(|r| r.len() != side) {
                    return Err(Error::InvalidGenerator(
                        "congruence matrix must be square".into(),
                    ));
                }
                Generator::Congruence {
                    side,
                    t: rows.concat(),
                }
            }
            GeneratorSpec::Permutation(sigma) => Generator::Permutation(sigma.clone()),
        })
    }
}

pub fn word_spec(word: &AutomorphismWord) -> Vec<GeneratorSpec> {
    word.factors().iter().map(GeneratorSpec::of).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub algebra: Algebra,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, Coords>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<GeneratorSpec>>,
}

impl InstanceFile {
    pub fn new(algebra: Algebra) -> Self {
        InstanceFile {
            algebra,
            elements: BTreeMap::new(),
            maps: BTreeMap::new(),
        }
    }

    /// Parses and validates every element and map.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Algebra::new(file.algebra.kind, file.algebra.param)
            .map_err(|e| Error::Parse(e.to_string()))?;
        for name in file.elements.keys() {
            file.element(name)?;
        }
        for name in file.maps.keys() {
            file.map(name)?;
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<u8>)> {
        let bytes = std::fs::read(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| Error::Parse(format!("{} is not UTF-8: {e}", path.display())))?;
        Ok((Self::from_json(text)?, bytes))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        self.elements
            .get(name)
            .ok_or_else(|| Error::Parse(format!("no element named `{name}`")))?
            .to_element(self.algebra)
            .map_err(|e| Error::Parse(format!("element `{name}`: {e}")))
    }

    pub fn map(&self, name: &str) -> Result<AutomorphismWord> {
        let specs = self
            .maps
            .get(name)
            .ok_or_else(|| Error::Parse(format!("no map named `{name}`")))?;
        let factors = specs
            .iter()
            .map(|s| s.to_generator(self.algebra))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| Error::Parse(format!("map `{name}`: {e}")))?;
        AutomorphismWord::new(self.algebra, factors)
            .map_err(|e| Error::Parse(format!("map `{name}`: {e}")))
    }

    pub fn insert_element(&mut self, name: &str, x: &Element) {
        self.elements.insert(name.to_owned(), Coords::of(x));
    }

    pub fn insert_map(&mut self, name: &str, word: &AutomorphismWord) {
        self.maps.insert(name.to_owned(), word_spec(word));
    }
}

/// Envelope written by every CLI command.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub command: String,
    /// Command-line arguments after the program name.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<String>,
    pub inputs_hash: String,
    pub tool_version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub result: Value,
}

impl ReportFile {
    /// `inputs` is hashed in order; pass the command line and any file contents.
    pub fn new(command: &str, inputs: &[&[u8]], seed: Option<u64>, result: Value) -> Self {
        let mut hasher = Sha256::new();
        for part in inputs {
            hasher.update((part.len() as u64).to_le_bytes());
            hasher.update(part);
        }
        ReportFile {
            command: command.to_owned(),
            args: Vec::new(),
            inputs_hash: hex::encode(hasher.finalize()),
            tool_version: TOOL_VERSION.to_owned(),
            seed,
            result,
        }
    }

    pub fn with_args(mut self, args: Vec<String>) -> Self {
        self.args = args;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

pub fn metric_json(r: &MetricReport) -> Value {
    json!({
        "lambda_max": r.lambda_max,
        "lambda_min": r.lambda_min,
        "distance": r.distance,
    })
}

pub fn solve_json(r: &SolveReport) -> Value {
    json!({
        "solution": Coords::of(&r.solution),
        "iterations": r.iterations,
        "distance_trace": r.distance_trace,
        "residual": r.residual,
        "contraction_estimate": r.contraction_estimate,
        "converged": r.converged,
    })
}
