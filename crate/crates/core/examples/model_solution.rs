//! Fundamental solutions of the half-line model problem for the first
//! example and their closed-form norms.
//!
//! cargo run --example model_solution -- 1.0 1.7320508

use pencil_lab::fixtures;
use pencil_lab::halfline::{deriv_l2_norm, fundamental_solution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let xi: f64 = args.next().map_or(Ok(1.0), |a| a.parse())?;
    let lam: f64 = args.next().map_or(Ok(3f64.sqrt()), |a| a.parse())?;
    let p = fixtures::ex1();
    for j in 1..=p.pencil.m() {
        let w = fundamental_solution(&p.pencil, &p.boundary, &[xi], lam, j)?;
        println!("w_{j}:");
        for t in &w.terms {
            let coeffs: Vec<String> = t.coeffs.iter().map(|c| format!("{:.6}", c)).collect();
            println!("  tau = {:.6}, t^q coefficients [{}]", t.root, coeffs.join(", "));
        }
        for l in 0..=2 {
            println!("  ||D_t^{l} w_{j}|| = {:.12}", deriv_l2_norm(&w, l));
        }
        println!("  boundary residual {:.1e}, condition {:.2}", w.boundary_residual, w.condition);
    }
    Ok(())
}
