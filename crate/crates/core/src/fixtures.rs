//! Built-in problems used by the examples, the tests and the CLI.
//!
//! `ex1` is `ε²Δ² − Δ` in the plane with a Dirichlet and a Neumann-type
//! condition: `A(ξ, λ) = |ξ|⁴ + λ²|ξ|²`, `B₁ = 1`, `B₂ = ξ₂`, `(r, s) = (4, 1)`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::problem::{Form, Problem};
use crate::symbols::{BoundaryOperator, BoundarySet, MultiPoly, OperatorPencil};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ex1_pencil_with_a2(a2: MultiPoly) -> OperatorPencil {
    let norm2 = MultiPoly::squared_norm(2);
    let mut parts = BTreeMap::new();
    parts.insert(4, &norm2 * &norm2);
    parts.insert(2, a2);
    OperatorPencil::new(2, 2, 1, parts).expect("fixture pencil is well formed")
}

fn ex1_with_b2(b2: MultiPoly, order: usize) -> Problem {
    Problem::new(
        ex1_pencil_with_a2(MultiPoly::squared_norm(2)),
        BoundarySet::new(vec![
            BoundaryOperator::new(MultiPoly::constant(2, c(1.0)), 0),
            BoundaryOperator::new(b2, order),
        ]),
        4,
        1,
    )
}

pub fn ex1() -> Problem {
    ex1_with_b2(MultiPoly::variable(2, 1), 1)
}

/// `ex1` read in the ε-form `ε²Δ² − Δ`.
pub fn ex1_epsilon() -> Problem {
    Problem {
        form: Form::Epsilon,
        ..ex1()
    }
}

/// `A₂ = −|ξ|²`: the symbol vanishes on `|ξ| = λ`.
pub fn ex1_sign_flipped() -> Problem {
    Problem {
        pencil: ex1_pencil_with_a2(MultiPoly::squared_norm(2).scale_coeffs(c(-1.0))),
        ..ex1()
    }
}

/// `B₂ = ξ₁`, a purely tangential second condition.
pub fn ex1_tangential() -> Problem {
    ex1_with_b2(MultiPoly::variable(2, 0), 1)
}

/// `B₂ = ξ₁ξ₂` of order 2. Conditions a, b, c hold with `Lop` vanishing like
/// `|ξ′|` at the pole, while `B₂(0, τ) ≡ 0` violates condition d.
pub fn ex1_oblique_control() -> Problem {
    ex1_with_b2(MultiPoly::monomial(vec![1, 1], c(1.0)), 2)
}

/// `ex1` with `B₂ = ξ₂³` of order 3.
pub fn ex1_cubic_b2() -> Problem {
    Problem {
        r: 4,
        s: 1,
        ..ex1_with_b2(MultiPoly::monomial(vec![0, 3], c(1.0)), 3)
    }
}

/// `ex1` with `A₂ = ξ₁²`, which has no normal term.
pub fn ex1_with_a2_tangential() -> OperatorPencil {
    ex1_pencil_with_a2(MultiPoly::monomial(vec![2, 0], c(1.0)))
}

/// Every named fixture, for the CLI and for shipping JSON copies.
pub fn named() -> Vec<(&'static str, Problem)> {
    vec![
        ("ex1", ex1()),
        ("ex1_epsilon", ex1_epsilon()),
        ("ex1_sign_flipped", ex1_sign_flipped()),
        ("ex1_tangential", ex1_tangential()),
        ("ex1_oblique_control", ex1_oblique_control()),
    ]
}
