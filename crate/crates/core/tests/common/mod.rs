#![allow(dead_code)]

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pencil_lab::symbols::{BoundaryOperator, BoundarySet, MultiPoly, OperatorPencil};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Positive definite quadratic form with a random cross term.
pub fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> MultiPoly {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let mut terms = Vec::new();
    for (a, d) in diag.iter().enumerate() {
        let mut alpha = vec![0; n];
        alpha[a] = 2;
        terms.push((alpha, c(*d, 0.0)));
    }
    // |b| < √(d₀d₁)/(n−1) keeps the form diagonally dominant
    for a in 0..n {
        for b in (a + 1)..n {
            let bound = (diag[a] * diag[b]).sqrt() / (n - 1) as f64;
            let mut alpha = vec![0; n];
            alpha[a] = 1;
            alpha[b] = 1;
            terms.push((alpha, c(rng.gen_range(-bound..bound), 0.0)));
        }
    }
    MultiPoly::from_terms(n, terms).unwrap()
}

pub fn random_linear(rng: &mut ChaCha8Rng, n: usize) -> MultiPoly {
    MultiPoly::from_terms(
        n,
        (0..n).map(|a| {
            let mut alpha = vec![0; n];
            alpha[a] = 1;
            (alpha, c(rng.gen_range(-1.0..1.0), 0.0))
        }),
    )
    .unwrap()
}

/// `Π_{i ≤ μ} q_i · Π_{i > μ} (q_i + iλℓ_i + κ_iλ²)` with positive definite
/// `q_i`, real `ℓ_i` and `κ_i > 0`. Every factor is nonzero off the origin
/// and has one upper root in `τ`, so the pencil satisfies conditions a) to c).
pub fn random_pencil(rng: &mut ChaCha8Rng, n: usize, m: usize, mu: usize) -> OperatorPencil {
    // λ-power → coefficient polynomial
    let mut acc: BTreeMap<usize, MultiPoly> = BTreeMap::new();
    acc.insert(0, MultiPoly::constant(n, c(1.0, 0.0)));
    for i in 0..m {
        let mut factor: BTreeMap<usize, MultiPoly> = BTreeMap::new();
        factor.insert(0, random_quadratic(rng, n));
        if i >= mu {
            factor.insert(1, random_linear(rng, n).scale_coeffs(c(0.0, 1.0)));
            factor.insert(2, MultiPoly::constant(n, c(rng.gen_range(0.5..2.0), 0.0)));
        }
        let mut next: BTreeMap<usize, MultiPoly> = BTreeMap::new();
        for (ka, pa) in &acc {
            for (kb, pb) in &factor {
                let prod = pa * pb;
                let e = next.entry(ka + kb).or_insert_with(|| MultiPoly::zero(n));
                *e = &*e + &prod;
            }
        }
        acc = next;
    }
    let parts = acc.into_iter().map(|(k, p)| (2 * m - k, p)).collect();
    OperatorPencil::new(n, m, mu, parts).unwrap()
}

/// `B_j = ξ_n^{j−1}`; the remainder matrix modulo any monic degree-`m`
/// factor is the identity.
pub fn normal_derivatives(n: usize, m: usize) -> BoundarySet {
    BoundarySet::new(
        (0..m)
            .map(|k| {
                let mut alpha = vec![0; n];
                alpha[n - 1] = k as u32;
                BoundaryOperator::new(MultiPoly::monomial(alpha, c(1.0, 0.0)), k)
            })
            .collect(),
    )
}

/// Adaptive Simpson quadrature on `[a, b]`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

pub fn problem_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("problems")
        .join(format!("{name}.json"))
}
