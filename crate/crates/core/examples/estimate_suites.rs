//! Whole-space and half-space estimate ratios for the first example and the
//! oblique control, one table per boundary operator.
//!
//! cargo run --release --example estimate_suites

use pencil_lab::estimate_lab::{apriori_ratio, wholespace_ratio, BoundaryDataSpec, Profile, RatioTable};
use pencil_lab::fixtures;
use pencil_lab::newton::WeightSpec;
use pencil_lab::quadrature::GridConfig;

fn show(t: &RatioTable) {
    println!("{} (variation {:.3})", t.label, t.variation());
    for row in &t.rows {
        println!("  {:>8}  lhs {:.6e}  rhs {:.6e}  ratio {:.4}", row.param, row.lhs, row.rhs, row.ratio);
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = WeightSpec::new(4.0, 1.0);
    let grid = GridConfig::default();
    let ex1 = fixtures::ex1();
    show(&wholespace_ratio(&ex1.pencil, &w, &[Profile::gaussian(1.0)], &[0.0, 1.0, 10.0, 100.0], &grid)?);

    let ladder = [1.0, 10.0, 100.0, 1e3, 1e4];
    for (name, p) in [("ex1", ex1), ("oblique control", fixtures::ex1_oblique_control())] {
        for j in 1..=p.pencil.m() {
            let data = BoundaryDataSpec::default_for(p.pencil.m(), &[j]);
            let mut t = apriori_ratio(&p.pencil, &p.boundary, &w, &data, &ladder, &grid)?;
            t.label = format!("{name}, data on g{j}");
            show(&t);
        }
    }
    Ok(())
}
