//! The singularly perturbed form `A_ε` checked natively and against the
//! λ-form at `λ = 1/ε`.
//!
//! cargo run --release --example epsilon_form

use pencil_lab::elliptic::{check_epsilon, CheckConfig};
use pencil_lab::estimate_lab::{apriori_ratio, eps_apriori, BoundaryDataSpec};
use pencil_lab::fixtures;
use pencil_lab::newton::WeightSpec;
use pencil_lab::quadrature::GridConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = fixtures::ex1_epsilon();
    let pe = p.epsilon_pencil();
    let rep = check_epsilon(&pe, &p.boundary, &CheckConfig::default())?;
    println!("epsilon check: {}", rep.overall);
    if let Some(end) = &rep.epsilon_endpoint {
        println!("endpoint condition at lambda = 0: {}", end.verdict);
    }

    let w = WeightSpec::new(p.r as f64, p.s as f64);
    let eps = [1.0, 0.1, 0.01, 1e-3];
    let lam: Vec<f64> = eps.iter().map(|e| 1.0 / e).collect();
    let grid = GridConfig::default();
    for j in 1..=pe.m() {
        let data = BoundaryDataSpec::default_for(pe.m(), &[j]);
        let te = eps_apriori(&pe, &p.boundary, &w, &data, &eps, &grid)?;
        let tl = apriori_ratio(&p.pencil, &p.boundary, &w, &data, &lam, &grid)?;
        println!("data on g{j}");
        for (a, b) in te.rows.iter().zip(&tl.rows) {
            println!("  eps {:>6}: ratio {:.6}, lambda-form {:.6}, gap {:.1e}", a.param, a.ratio, b.ratio, (a.ratio - b.ratio).abs());
        }
    }
    Ok(())
}
