//! JSON problem files.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PencilError, Result};
use crate::symbols::{
    to_epsilon, BoundaryOperator, BoundarySet, EpsilonPencil, MultiPoly, OperatorPencil,
};

/// Which parameterization the parts were written in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    #[default]
    Lambda,
    Epsilon,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub alpha: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub terms: Vec<TermSpec>,
    pub order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexSpec {
    pub r: i64,
    pub s: i64,
}

/// Optional tolerance and grid overrides; unset fields keep library defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub pole_cutoff: Option<f64>,
    pub margin_floor: Option<f64>,
    pub det_floor: Option<f64>,
    pub radial_nodes: Option<usize>,
    pub angular_nodes: Option<usize>,
    pub truncation_factor: Option<f64>,
}

/// On-disk layout. Parts are keyed by `j` as a string since JSON object keys
/// are strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub m: usize,
    pub mu: usize,
    pub parts: BTreeMap<String, Vec<TermSpec>>,
    pub boundary: Vec<BoundarySpec>,
    pub indices: IndexSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Form>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Overrides>,
}

/// A loaded problem. `pencil` is always the λ-form; for ε-form input the
/// parts are translated on load.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub pencil: OperatorPencil,
    pub boundary: BoundarySet,
    pub r: i64,
    pub s: i64,
    pub form: Form,
    pub overrides: Overrides,
}

fn terms_to_poly(n: usize, terms: &[TermSpec]) -> Result<MultiPoly> {
    MultiPoly::from_terms(
        n,
        terms
            .iter()
            .map(|t| (t.alpha.clone(), Complex64::new(t.re, t.im))),
    )
}

fn poly_to_terms(p: &MultiPoly) -> Vec<TermSpec> {
    p.terms()
        .map(|(a, c)| TermSpec {
            alpha: a.entries().to_vec(),
            re: c.re,
            im: c.im,
        })
        .collect()
}

impl Problem {
    pub fn new(pencil: OperatorPencil, boundary: BoundarySet, r: i64, s: i64) -> Self {
        Problem {
            pencil,
            boundary,
            r,
            s,
            form: Form::Lambda,
            overrides: Overrides::default(),
        }
    }

    pub fn epsilon_pencil(&self) -> EpsilonPencil {
        to_epsilon(&self.pencil)
    }

    pub fn from_file(file: &ProblemFile) -> Result<Self> {
        let mut parts = BTreeMap::new();
        for (key, terms) in &file.parts {
            let j: usize = key
                .parse()
                .map_err(|_| PencilError::input(format!("parts key {key:?} is not an integer")))?;
            parts.insert(j, terms_to_poly(file.n, terms)?);
        }
        let form = file.form.unwrap_or_default();
        // the ε-form parts coincide with the λ-form parts
        let pencil = OperatorPencil::new(file.n, file.m, file.mu, parts)?;
        let ops = file
            .boundary
            .iter()
            .map(|b| Ok(BoundaryOperator::new(terms_to_poly(file.n, &b.terms)?, b.order)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Problem {
            pencil,
            boundary: BoundarySet::new(ops),
            r: file.indices.r,
            s: file.indices.s,
            form,
            overrides: file.config.clone().unwrap_or_default(),
        })
    }

    pub fn to_file(&self) -> ProblemFile {
        ProblemFile {
            n: self.pencil.dim(),
            m: self.pencil.m(),
            mu: self.pencil.mu(),
            parts: self
                .pencil
                .parts()
                .iter()
                .map(|(j, p)| (j.to_string(), poly_to_terms(p)))
                .collect(),
            boundary: self
                .boundary
                .ops()
                .iter()
                .map(|b| BoundarySpec {
                    terms: poly_to_terms(&b.symbol),
                    order: b.order,
                })
                .collect(),
            indices: IndexSpec {
                r: self.r,
                s: self.s,
            },
            form: match self.form {
                Form::Lambda => None,
                Form::Epsilon => Some(Form::Epsilon),
            },
            config: if self.overrides == Overrides::default() {
                None
            } else {
                Some(self.overrides.clone())
            },
        }
    }

    /// Parses JSON text; syntax and schema errors carry line and column.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ProblemFile = serde_json::from_str(text).map_err(|e| {
            PencilError::input(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_file(&file)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PencilError::input(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("problem files always serialize")
    }
}
