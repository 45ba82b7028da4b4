//! Conditions a) to d) on the bundled problem files.
//!
//! cargo run --example ellipticity_check -- crates/core/problems/ex1.json

use pencil_lab::elliptic::{check_epsilon, full_check, CheckConfig};
use pencil_lab::problem::{Form, Problem};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    let problems: Vec<(String, Problem)> = if paths.is_empty() {
        pencil_lab::fixtures::named().into_iter().map(|(n, p)| (n.to_owned(), p)).collect()
    } else {
        paths.into_iter().map(|p| Problem::from_path(p.as_ref()).map(|x| (p, x))).collect::<Result<_, _>>()?
    };
    let cfg = CheckConfig::default();
    for (name, p) in problems {
        let rep = match p.form {
            Form::Epsilon => check_epsilon(&p.epsilon_pencil(), &p.boundary, &cfg)?,
            Form::Lambda => full_check(&p.pencil, &p.boundary, &cfg),
        };
        let [a, b, c, d] = rep.verdicts();
        println!(
            "{name}: a {a} (margin {:.4}), b {b}, c {c}, d {d}, overall {}",
            rep.condition_a.margin, rep.overall
        );
    }
    Ok(())
}
