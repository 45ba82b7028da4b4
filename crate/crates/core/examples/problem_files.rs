//! Writes the built-in fixtures as problem files and reads them back.
//!
//! cargo run --example problem_files -- crates/core/problems

use std::path::PathBuf;

use pencil_lab::fixtures;
use pencil_lab::problem::Problem;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "problems".into()));
    std::fs::create_dir_all(&dir)?;
    for (name, problem) in fixtures::named() {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, problem.to_json_string() + "\n")?;
        let back = Problem::from_path(&path)?;
        assert_eq!(back, problem);
        println!("{}", path.display());
    }
    Ok(())
}
