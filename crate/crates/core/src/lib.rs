//! Parameter-ellipticity checks and estimate verification for constant
//! coefficient operator pencils `A(ξ, λ) = Σ λ^{2m−j} A_j(ξ)` with boundary
//! operators on the half-space `x_n > 0`.
//!
//! The crate is organized bottom-up:
//!
//! - [`symbols`]: polynomial symbols, pencils and boundary operators
//! - [`newton`]: the Newton polygon `N_{r,s}` and its weight functions
//! - [`rootsplit`]: root finding, half-plane splitting, `A₊`, `Q`, `Q₊`
//! - [`elliptic`]: the four ellipticity conditions with margin certificates
//! - [`halfline`]: exact half-line model solutions and their norms
//! - [`estimate_lab`]: spectral checks of the whole-space and half-space estimates
//! - [`problem`], [`fixtures`], [`cli`]: problem files and the command-line front end

use serde::{Deserialize, Serialize};

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod estimate_lab;
pub mod fixtures;
pub mod halfline;
pub mod newton;
pub mod problem;
pub mod quadrature;
pub mod rootsplit;
pub mod symbols;

pub use error::{PencilError, Result};

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Numerics could not decide, for example a root on the real axis.
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    /// Conjunction: any `Fail` wins, then any `Indeterminate`.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => Pass,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Indeterminate => "INDETERMINATE",
        })
    }
}
