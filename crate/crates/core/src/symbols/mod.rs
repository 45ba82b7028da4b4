//! Polynomial symbols, operator pencils and boundary operators.
//!
//! All symbols have constant coefficients. A pencil is stored through its
//! parts `A_j`, and every evaluation of `A(ξ, λ)` goes through
//! [`OperatorPencil::eval`] or [`OperatorPencil::restrict_to_normal`].

mod multipoly;
mod pencil;
mod unipoly;

pub use multipoly::{MultiIndex, MultiPoly};
pub use pencil::{
    from_epsilon, to_epsilon, validate_problem, BoundaryOperator, BoundarySet, EpsilonPencil,
    OperatorPencil, RuleCheck, RuleGroup, ValidationReport,
};
pub use unipoly::UniPoly;
