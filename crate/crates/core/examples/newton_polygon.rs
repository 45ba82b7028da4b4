//! Lattice points of `N_{r,s}` and the two forms of its weight.
//!
//! cargo run --example newton_polygon -- 4 1

use pencil_lab::newton::{NewtonPolygon, WeightSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let r: i64 = args.next().map_or(Ok(4), |a| a.parse())?;
    let s: i64 = args.next().map_or(Ok(1), |a| a.parse())?;
    let poly = NewtonPolygon::new(r, s)?;
    let w = WeightSpec::new(r as f64, s as f64);
    println!("N_{{{r},{s}}}: {} lattice points, vertices {:?}", poly.card(), poly.vertices);
    println!("{:>8} {:>8} {:>14} {:>14} {:>8}", "|xi|", "lambda", "lattice sum", "product", "ratio");
    for (x, lam) in [(0.0, 1.0), (1.0, 1.0), (10.0, 1.0), (1.0, 100.0), (100.0, 100.0), (1e3, 10.0)] {
        let sum = poly.weight_sum(x, lam);
        let prod = w.weight_equiv(x, lam);
        println!("{x:>8} {lam:>8} {sum:>14.6e} {prod:>14.6e} {:>8.4}", sum / prod);
    }
    Ok(())
}
