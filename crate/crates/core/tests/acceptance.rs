//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{adaptive_simpson, c, normal_derivatives, problem_path, random_pencil};
use pencil_lab::elliptic::{full_check, lopatinskii_det, CheckConfig};
use pencil_lab::estimate_lab::{
    apriori_ratio, eps_apriori, scaling_identity_test, wholespace_ratio, BoundaryDataSpec, Profile, RatioTable,
};
use pencil_lab::fixtures;
use pencil_lab::halfline::{check_homogeneity, estimate_table, fundamental_solution};
use pencil_lab::newton::WeightSpec;
use pencil_lab::quadrature::GridConfig;
use pencil_lab::rootsplit::{find_roots, split_default, verify_root_groups};
use pencil_lab::symbols::UniPoly;
use pencil_lab::Verdict;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit_s: u64) -> Result<(), String> {
    ensure(
        elapsed <= Duration::from_secs(limit_s),
        format!("took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()),
    )
}

fn ex1_weights() -> WeightSpec {
    WeightSpec::new(4.0, 1.0)
}

/// Closed-form interior ratio for EX1: `(|ξ|² + λ²)/(λ + |ξ|)²`.
fn ex1_ratio_oracle(xi: [f64; 2], lambda: f64) -> f64 {
    let x2 = xi[0] * xi[0] + xi[1] * xi[1];
    let x = x2.sqrt();
    (x2 + lambda * lambda) / (lambda + x).powi(2)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let p = fixtures::ex1();
    let rep = full_check(&p.pencil, &p.boundary, &CheckConfig::default());
    let elapsed = start.elapsed();
    ensure(rep.overall == Verdict::Pass, format!("overall {}", rep.overall))?;
    ensure(rep.verdicts().iter().all(|v| v.is_pass()), format!("{:?}", rep.verdicts()))?;

    // 1000 × 1000 grid over the hemisphere angle and the direction, refined
    // around the minimum with a second 1000-point sweep
    let n = 1000;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..n {
        let theta = 0.5 * PI * i as f64 / (n - 1) as f64;
        for k in 0..n {
            let phi = 2.0 * PI * k as f64 / n as f64;
            let (x, lam) = (theta.sin(), theta.cos());
            let v = ex1_ratio_oracle([x * phi.cos(), x * phi.sin()], lam);
            if v < best.0 {
                best = (v, theta);
            }
        }
    }
    let h = 0.5 * PI / (n - 1) as f64;
    for i in 0..n {
        let theta = best.1 - h + 2.0 * h * i as f64 / (n - 1) as f64;
        let v = ex1_ratio_oracle([theta.sin(), 0.0], theta.cos());
        best.0 = best.0.min(v);
    }
    let margin = rep.condition_a.margin;
    ensure((margin - best.0).abs() <= 1e-3, format!("margin {margin} vs oracle {}", best.0))?;
    ensure((margin - 0.5).abs() <= 1e-3, format!("margin {margin}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let xi = rng.gen_range(0.01..10.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let lam = rng.gen_range(0.0..100.0);
        let d = lopatinskii_det(&p.pencil, &p.boundary, &[xi], lam).map_err(|e| e.to_string())?;
        worst = worst.max((d - c(1.0, 0.0)).norm());
    }
    ensure(worst <= 1e-12, format!("|det − 1| up to {worst:.3e}"))?;
    within(elapsed, 10)?;
    Ok(format!(
        "margin {margin:.6} (oracle {:.6}), max |det − 1| {worst:.1e}, {:.2} s",
        best.0,
        elapsed.as_secs_f64()
    ))
}

fn criterion_2() -> Outcome {
    let p = fixtures::ex1();
    let lam = 3f64.sqrt();
    let w1 = fundamental_solution(&p.pencil, &p.boundary, &[1.0], lam, 1).map_err(|e| e.to_string())?;
    let w2 = fundamental_solution(&p.pencil, &p.boundary, &[1.0], lam, 2).map_err(|e| e.to_string())?;
    let mut sup: f64 = 0.0;
    for k in 0..=10_000 {
        let t = 10.0 * k as f64 / 10_000.0;
        let (e1, e2) = ((-t).exp(), (-2.0 * t).exp());
        sup = sup.max((w1.eval(t) - c(2.0 * e1 - e2, 0.0)).norm());
        sup = sup.max((w2.eval(t) - c(0.0, e1 - e2)).norm());
    }
    ensure(sup <= 1e-10, format!("sup deviation {sup:.3e}"))?;
    let oracle = adaptive_simpson(&|t| w1.eval(t).norm_sqr(), 0.0, 60.0, 1e-14);
    let norm_sq = pencil_lab::halfline::deriv_l2_norm(&w1, 0).powi(2);
    ensure((norm_sq - 11.0 / 12.0).abs() <= 1e-10, format!("‖w₁‖² = {norm_sq}"))?;
    ensure((oracle - 11.0 / 12.0).abs() <= 1e-10, format!("oracle ‖w₁‖² = {oracle}"))?;
    Ok(format!("sup deviation {sup:.1e}, ‖w₁‖² = {norm_sq:.15}, quadrature {oracle:.15}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let p = fixtures::ex1();
    let lambdas = [0.0, 1.0, 10.0, 1e2, 1e3, 1e4];
    let xs = vec![vec![1.0], vec![-1.0]];
    let t = estimate_table(&p.pencil, &p.boundary, &xs, &lambdas, 5).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(t.all_finite(), "non-finite ratio")?;
    ensure(t.rows.len() == 2 * 6 * 6 * 2, format!("{} rows", t.rows.len()))?;
    let (a, b) = (t.max_ratio_at(1e3), t.max_ratio_at(1e4));
    let change = (b - a).abs() / a;
    ensure(change <= 0.10, format!("max ratio {a} at 10³ vs {b} at 10⁴"))?;
    within(elapsed, 30)?;
    Ok(format!(
        "max ratio {:.4}, 10³ vs 10⁴ change {:.2}%, {:.2} s",
        t.max_ratio(),
        100.0 * change,
        elapsed.as_secs_f64()
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = vec![(fixtures::ex1().pencil, fixtures::ex1().boundary)];
    for k in 0..20 {
        let n = 2 + k % 2;
        let m = 1 + k % 3;
        let mu = rng.gen_range(0..m);
        cases.push((random_pencil(&mut rng, n, m, mu), normal_derivatives(n, m)));
    }
    let mut hom: f64 = 0.0;
    let mut scal: f64 = 0.0;
    for (p, b) in &cases {
        let n = p.dim();
        let xi: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-1.5..1.5)).collect();
        let lam = rng.gen_range(0.2..3.0);
        for j in 1..=p.m() {
            let d = check_homogeneity(p, b, &xi, lam, j, &[0.5, 2.0, 7.0], None).map_err(|e| e.to_string())?;
            hom = hom.max(d);
        }
        let grid = GridConfig { radial: 64, angular: 16, ..GridConfig::default() }
            .grid(n, 1.0)
            .map_err(|e| e.to_string())?;
        for part in p.parts().values() {
            let d = scaling_identity_test(part, &Profile::gaussian(1.0), &[0.5, 2.0, 10.0], &grid)
                .map_err(|e| e.to_string())?;
            scal = scal.max(d);
        }
    }
    ensure(hom <= 1e-10, format!("homogeneity deviation {hom:.3e}"))?;
    ensure(scal <= 1e-10, format!("scaling deviation {scal:.3e}"))?;
    Ok(format!("{} pencils: homogeneity {hom:.1e}, scaling {scal:.1e}", cases.len()))
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_pencil-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn criterion_5() -> Outcome {
    let p = fixtures::ex1();
    let profiles = [Profile::gaussian(1.0), Profile::gaussian(4.0), Profile::gaussian(0.3)];
    let t = wholespace_ratio(&p.pencil, &ex1_weights(), &profiles, &[0.0, 1.0, 10.0, 100.0], &GridConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(t.all_finite(), "non-finite ratio")?;
    ensure(t.max_ratio() <= 2.05, format!("max ratio {}", t.max_ratio()))?;
    let flipped = problem_path("ex1_sign_flipped");
    let out = run_cli(&["verify", flipped.to_str().unwrap(), "--suite", "wholespace"]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(1), format!("control exit {:?}", out.status.code()))?;
    ensure(
        stderr.contains("condition a: FAIL") && stderr.contains("suite not run"),
        format!("control stderr: {stderr}"),
    )?;
    Ok(format!("max ratio {:.4} ≤ 2.05; sign-flipped control stops at condition a", t.max_ratio()))
}

fn per_operator(
    m: usize,
    mut f: impl FnMut(&BoundaryDataSpec) -> pencil_lab::Result<RatioTable>,
) -> Result<Vec<RatioTable>, String> {
    (1..=m)
        .map(|j| f(&BoundaryDataSpec::default_for(m, &[j])).map_err(|e| e.to_string()))
        .collect()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let p = fixtures::ex1();
    let w = ex1_weights();
    let ladder = [1.0, 10.0, 100.0, 1000.0];
    let base = GridConfig::default();
    let fine = base.doubled();
    let coarse = per_operator(2, |d| apriori_ratio(&p.pencil, &p.boundary, &w, d, &ladder, &base))?;
    let refined = per_operator(2, |d| apriori_ratio(&p.pencil, &p.boundary, &w, d, &ladder, &fine))?;
    let mut notes = Vec::new();
    let mut drift: f64 = 0.0;
    for (a, b) in coarse.iter().zip(&refined) {
        ensure(a.all_finite(), "non-finite ratio")?;
        ensure(a.variation() <= 2.0, format!("variation {}", a.variation()))?;
        for (x, y) in a.rows.iter().zip(&b.rows) {
            drift = drift.max((x.ratio - y.ratio).abs() / x.ratio);
        }
        notes.push(format!("variation {:.3}", a.variation()));
    }
    ensure(drift <= 0.05, format!("grid-doubling drift {drift:.4}"))?;

    let ctl = fixtures::ex1_oblique_control();
    let data = BoundaryDataSpec::default_for(2, &[2]);
    let t = apriori_ratio(&ctl.pencil, &ctl.boundary, &w, &data, &ladder, &base).map_err(|e| e.to_string())?;
    let growth = t.rows[3].ratio / t.rows[0].ratio;
    ensure(growth > 2.0, format!("control growth {growth}"))?;
    let elapsed = start.elapsed();
    within(elapsed, 120)?;
    Ok(format!(
        "{}; doubling drift {:.1e}; control ratio(10³)/ratio(1) = {growth:.2}; {:.1} s",
        notes.join(", "),
        drift,
        elapsed.as_secs_f64()
    ))
}

fn criterion_7() -> Outcome {
    let p = fixtures::ex1_epsilon();
    let w = ex1_weights();
    let eps = [1.0, 0.1, 0.01];
    let lam: Vec<f64> = eps.iter().map(|e| 1.0 / e).collect();
    let grid = GridConfig::default();
    let pe = p.epsilon_pencil();
    let te = per_operator(2, |d| eps_apriori(&pe, &p.boundary, &w, d, &eps, &grid))?;
    let tl = per_operator(2, |d| apriori_ratio(&p.pencil, &p.boundary, &w, d, &lam, &grid))?;
    let mut gap: f64 = 0.0;
    for (a, b) in te.iter().zip(&tl) {
        for (x, y) in a.rows.iter().zip(&b.rows) {
            let k = x.param.powf(w.r - w.s);
            gap = gap.max((x.ratio - y.ratio).abs() / y.ratio);
            gap = gap.max((x.lhs - k * y.lhs).abs() / x.lhs);
            gap = gap.max((x.rhs - k * y.rhs).abs() / x.rhs);
        }
    }
    ensure(gap <= 1e-10, format!("relative gap {gap:.3e}"))?;
    Ok(format!("largest relative gap {gap:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_be: f64 = 0.0;
    for trial in 0..200 {
        let d = rng.gen_range(1..=12);
        let mut roots: Vec<(Complex64, usize)> = Vec::new();
        let mut deg = 0;
        while deg < d {
            let im = rng.gen_range(0.1..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let z = c(rng.gen_range(-3.0..3.0), im);
            let k = if deg + 2 <= d && rng.gen_bool(0.15) { 2 } else { 1 };
            roots.push((z, k));
            deg += k;
        }
        let expect_upper: usize = roots.iter().filter(|r| r.0.im > 0.0).map(|r| r.1).sum();
        let p = UniPoly::from_roots(&roots).scale(c(rng.gen_range(0.5..2.0), 0.0));
        let rs = find_roots(&p, 1e-8).map_err(|e| format!("trial {trial}: {e}"))?;
        let (up, low, near) = split_default(&rs).counts();
        ensure(
            up == expect_upper && low == d - expect_upper && near == 0,
            format!("trial {trial}: counts ({up}, {low}, {near}), expected upper {expect_upper} of {d}"),
        )?;
        worst_be = worst_be.max(rs.backward_error);
    }
    ensure(worst_be <= 1e-8, format!("backward error {worst_be:.3e}"))?;

    let p = fixtures::ex1();
    let rep = verify_root_groups(&p.pencil, &[1.0], &[10.0, 100.0, 1e3, 1e4]).map_err(|e| e.to_string())?;
    ensure(rep.k1 == 1, format!("k₁ = {}", rep.k1))?;
    ensure(
        (rep.absolute_exponent + 1.0).abs() <= 0.2,
        format!("correction exponent {}", rep.absolute_exponent),
    )?;
    Ok(format!(
        "200 planted polynomials, backward error ≤ {worst_be:.1e}; k₁ = 1, correction exponent {:.4}",
        rep.absolute_exponent
    ))
}

fn criterion_9() -> Outcome {
    let ex1 = problem_path("ex1");
    let path = ex1.to_str().unwrap();
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", path, "--json"],
        vec!["verify", path, "--suite", "apriori", "--json"],
        vec!["solve-model", path, "--xi", "1", "--lambda", "1.7320508", "--j", "1", "--json"],
    ];
    for args in runs {
        let a = run_cli(&args);
        let b = run_cli(&args);
        ensure(a.status.code() == Some(0), format!("{args:?} exit {:?}", a.status.code()))?;
        ensure(!a.stdout.is_empty(), format!("{args:?} printed nothing"))?;
        ensure(a.stdout == b.stdout, format!("{args:?} payloads differ"))?;
    }
    Ok("check, verify and solve-model payloads byte-identical across runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("EX1 full check", criterion_1),
        ("EX1 fundamental solutions", criterion_2),
        ("half-line estimate table", criterion_3),
        ("homogeneity and scaling identity", criterion_4),
        ("whole-space estimate", criterion_5),
        ("half-space a priori estimate", criterion_6),
        ("ε-translation consistency", criterion_7),
        ("root machinery", criterion_8),
        ("CLI determinism", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
