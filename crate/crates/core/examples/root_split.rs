//! Roots of `τ ↦ A(ξ′, τ, λ)` for the first example, split by half-plane,
//! and the root groups as `λ → ∞`.
//!
//! cargo run --example root_split

use pencil_lab::fixtures;
use pencil_lab::rootsplit::{find_roots, q_plus, q_polynomial, split_default, verify_root_groups};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = fixtures::ex1().pencil;
    for lam in [0.0, 1.0, 3f64.sqrt(), 10.0] {
        let poly = p.restrict_to_normal(&[1.0], lam)?;
        let rs = find_roots(&poly, 1e-10)?;
        let split = split_default(&rs);
        let (up, low, near) = split.counts();
        println!("lambda = {lam:.4}: {up} upper, {low} lower, {near} near-real, backward error {:.1e}", rs.backward_error);
        for r in &split.upper.roots {
            println!("  upper {:.6} (multiplicity {})", r.value, r.multiplicity);
        }
    }

    let q = q_polynomial(&p)?;
    let qp = q_plus(&q, &p)?;
    println!("Q(tau) = {q}; Q+ = {} [{}]", qp.poly, qp.verdict);

    let rep = verify_root_groups(&p, &[1.0], &[10.0, 100.0, 1e3, 1e4])?;
    println!("k1 = {}, correction exponent {:.4}", rep.k1, rep.absolute_exponent);
    for g in &rep.groups {
        println!("  lambda {:>8}: |tau - limit| = {:.3e}", g.lambda, g.absolute_correction);
    }
    Ok(())
}
