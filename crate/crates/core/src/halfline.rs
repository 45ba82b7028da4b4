//! Half-line model problems `A⁽⁰⁾(ξ′, D_t, λ) w = 0`, `B_k⁽⁰⁾(ξ′, D_t) w|₀ = h_k`,
//! `w → 0` as `t → ∞`, solved exactly in the basis `t^q e^{iτt}` over the
//! upper roots `τ`, with closed-form `L₂(ℝ₊)` norms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::remainder_matrix;
use crate::error::{PencilError, Result};
use crate::newton::WeightSpec;
use crate::rootsplit::upper_roots_of;
use crate::symbols::{BoundarySet, OperatorPencil, UniPoly};

/// Largest accepted condition number of the boundary system.
pub const CONDITION_LIMIT: f64 = 1e12;
/// Lopatinskii determinants at or below this are treated as singular.
pub const LOP_FLOOR: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `Σ_q c_q t^q e^{iτt}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub root: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl ExpTerm {
    /// `D_t = −i d/dt` acts on the polynomial factor as `P ↦ τP − iP′`.
    fn d_t(&self) -> ExpTerm {
        let mut out: Vec<Complex64> = self.coeffs.iter().map(|c| c * self.root).collect();
        for q in 1..self.coeffs.len() {
            out[q - 1] -= I * self.coeffs[q] * q as f64;
        }
        ExpTerm {
            root: self.root,
            coeffs: out,
        }
    }

    fn apply(&self, op: &UniPoly) -> ExpTerm {
        let mut acc = vec![ZERO; self.coeffs.len()];
        let mut power = self.clone();
        for (k, a) in op.coeffs().iter().enumerate() {
            if k > 0 {
                power = power.d_t();
            }
            for (x, y) in acc.iter_mut().zip(&power.coeffs) {
                *x += a * y;
            }
        }
        ExpTerm {
            root: self.root,
            coeffs: acc,
        }
    }
}

/// A decaying solution on `ℝ₊` in exponential-polynomial form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpPolySolution {
    pub terms: Vec<ExpTerm>,
    pub xi_tan: Vec<f64>,
    pub lambda: f64,
    /// Boundary data `h_k`.
    pub data: Vec<Complex64>,
    /// `max_k |B_k w|₀ − h_k|`.
    pub boundary_residual: f64,
    /// Condition number of the boundary system that produced the solution.
    pub condition: f64,
}

impl ExpPolySolution {
    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| {
                let e = (I * term.root * t).exp();
                let mut p = ZERO;
                for c in term.coeffs.iter().rev() {
                    p = p * t + c;
                }
                p * e
            })
            .sum()
    }

    /// `op(D_t) w` as a new exponential polynomial.
    pub fn apply(&self, op: &UniPoly) -> ExpPolySolution {
        ExpPolySolution {
            terms: self.terms.iter().map(|t| t.apply(op)).collect(),
            ..self.clone()
        }
    }

    pub fn derivative(&self, l: usize) -> ExpPolySolution {
        self.apply(&UniPoly::monomial(l, Complex64::new(1.0, 0.0)))
    }

    /// `(op(D_t) w)(0)`.
    pub fn boundary_value(&self, op: &UniPoly) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.apply(op).coeffs.first().copied().unwrap_or(ZERO))
            .sum()
    }

    pub fn coeff_norm(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.coeffs.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Smallest decay rate `min Im τ`.
    pub fn min_decay(&self) -> f64 {
        self.terms.iter().map(|t| t.root.im).fold(f64::INFINITY, f64::min)
    }

    /// Relative size of `op(D_t) w`: its coefficients against the
    /// coefficient scale of `op` evaluated at the largest root.
    pub fn residual(&self, op: &UniPoly) -> f64 {
        let rho = self.terms.iter().map(|t| t.root.norm()).fold(1.0, f64::max);
        let scale: f64 = op
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, a)| a.norm() * rho.powi(k as i32))
            .sum();
        let w = self.coeff_norm();
        if w == 0.0 || scale == 0.0 {
            return 0.0;
        }
        self.apply(op).coeff_norm() / (scale * w)
    }

    fn zero_like(&self) -> ExpPolySolution {
        ExpPolySolution {
            terms: self
                .terms
                .iter()
                .map(|t| ExpTerm {
                    root: t.root,
                    coeffs: vec![ZERO; t.coeffs.len()],
                })
                .collect(),
            ..self.clone()
        }
    }

    fn axpy(&mut self, a: Complex64, other: &ExpPolySolution) {
        for (x, y) in self.terms.iter_mut().zip(&other.terms) {
            for (cx, cy) in x.coeffs.iter_mut().zip(&y.coeffs) {
                *cx += a * cy;
            }
        }
    }
}

/// `‖D_t^l w‖_{L₂(ℝ₊)}` from the Gram integrals
/// `∫₀^∞ t^{p+q} e^{i(τ_a − τ̄_b)t} dt = (p+q)! / (−i(τ_a − τ̄_b))^{p+q+1}`.
pub fn deriv_l2_norm(w: &ExpPolySolution, l: usize) -> f64 {
    let d = w.derivative(l);
    let mut sum = ZERO;
    for a in &d.terms {
        for b in &d.terms {
            let z = -I * (a.root - b.root.conj());
            let mut zpow = z;
            let max = a.coeffs.len() + b.coeffs.len();
            let mut fact = vec![1.0; max];
            for k in 1..max {
                fact[k] = fact[k - 1] * k as f64;
            }
            let mut inv_pows = Vec::with_capacity(max);
            for _ in 0..max {
                inv_pows.push(zpow.inv());
                zpow *= z;
            }
            for (p, ca) in a.coeffs.iter().enumerate() {
                for (q, cb) in b.coeffs.iter().enumerate() {
                    sum += ca * cb.conj() * fact[p + q] * inv_pows[p + q];
                }
            }
        }
    }
    sum.re.max(0.0).sqrt()
}

/// How the boundary system is set up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolvePath {
    /// Solve at `(ξ′/ρ, λ/ρ)` with `ρ = |(ξ′, λ)|` and rescale `t`.
    Normalized,
    /// Solve at the given point as is.
    Direct,
}

/// Solves the model problem with boundary data `h`.
pub fn solve_bvp(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
    h: &[Complex64],
) -> Result<ExpPolySolution> {
    solve_bvp_with(p, b, xi_tan, lambda, h, SolvePath::Normalized)
}

pub fn solve_bvp_with(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
    h: &[Complex64],
    path: SolvePath,
) -> Result<ExpPolySolution> {
    let m = p.m();
    if h.len() != m || b.len() != m {
        return Err(PencilError::input(format!(
            "need {m} boundary operators and data values, got {} and {}",
            b.len(),
            h.len()
        )));
    }
    match path {
        SolvePath::Direct => direct_solve(p, b, xi_tan, lambda, h),
        SolvePath::Normalized => {
            let rho = (xi_tan.iter().map(|x| x * x).sum::<f64>() + lambda * lambda).sqrt();
            if rho == 0.0 || !rho.is_finite() {
                return Err(PencilError::input("(ξ′, λ) must be finite and nonzero"));
            }
            let xi_hat: Vec<f64> = xi_tan.iter().map(|x| x / rho).collect();
            let h_hat: Vec<Complex64> = h
                .iter()
                .zip(b.orders())
                .map(|(v, mk)| v * rho.powi(-(mk as i32)))
                .collect();
            let w_hat = direct_solve(p, b, &xi_hat, lambda / rho, &h_hat)?;
            // w(t) = ŵ(ρt): roots scale by ρ, t^q coefficients by ρ^q
            let terms = w_hat
                .terms
                .into_iter()
                .map(|t| ExpTerm {
                    root: t.root * rho,
                    coeffs: t
                        .coeffs
                        .iter()
                        .enumerate()
                        .map(|(q, c)| c * rho.powi(q as i32))
                        .collect(),
                })
                .collect();
            let mut w = ExpPolySolution {
                terms,
                xi_tan: xi_tan.to_vec(),
                lambda,
                data: h.to_vec(),
                boundary_residual: 0.0,
                condition: w_hat.condition,
            };
            w.boundary_residual = boundary_residual(&w, b, xi_tan, h)?;
            Ok(w)
        }
    }
}

fn boundary_residual(
    w: &ExpPolySolution,
    b: &BoundarySet,
    xi_tan: &[f64],
    h: &[Complex64],
) -> Result<f64> {
    let rows = b.restricted_principal(xi_tan)?;
    Ok(rows
        .iter()
        .zip(h)
        .map(|(op, v)| (w.boundary_value(op) - v).norm())
        .fold(0.0, f64::max))
}

fn direct_solve(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
    h: &[Complex64],
) -> Result<ExpPolySolution> {
    let a = p.principal().restrict_to_normal(xi_tan, lambda)?;
    let rows = b.restricted_principal(xi_tan)?;
    let mut w = solve_symbol(&a, p.m(), &rows, h)?;
    w.xi_tan = xi_tan.to_vec();
    w.lambda = lambda;
    Ok(w)
}

/// Solves `a(D_t) w = 0`, `rows_k(D_t) w|₀ = h_k` for a normal-direction
/// polynomial `a` with `m` upper roots. The returned solution carries no
/// `(ξ′, λ)` metadata.
pub fn solve_symbol(
    a: &UniPoly,
    m: usize,
    rows: &[UniPoly],
    h: &[Complex64],
) -> Result<ExpPolySolution> {
    if rows.len() != m || h.len() != m {
        return Err(PencilError::input(format!(
            "need {m} boundary rows and data values, got {} and {}",
            rows.len(),
            h.len()
        )));
    }
    let roots = upper_roots_of(a, m, "normal-direction symbol")?;
    let lop = remainder_matrix(rows, &roots.to_poly())?.det();
    if lop.norm() <= LOP_FLOOR {
        return Err(PencilError::LopatinskiiDegenerate {
            detail: format!("|Lop| = {:.3e}", lop.norm()),
        });
    }
    // basis t^q e^{iτt}, q < multiplicity
    let basis: Vec<(Complex64, usize, usize)> = roots
        .roots
        .iter()
        .flat_map(|r| (0..r.multiplicity).map(move |q| (r.value, q, r.multiplicity)))
        .collect();
    let unit = |root: Complex64, q: usize, len: usize| {
        let mut coeffs = vec![ZERO; len];
        coeffs[q] = Complex64::new(1.0, 0.0);
        ExpTerm { root, coeffs }
    };
    let mat = DMatrix::from_fn(m, m, |k, c| {
        let (root, q, mult) = basis[c];
        unit(root, q, mult).apply(&rows[k]).coeffs[0]
    });
    let condition = condition_number(&mat);
    if !(condition <= CONDITION_LIMIT) {
        return Err(PencilError::Conditioning {
            condition,
            limit: CONDITION_LIMIT,
        });
    }
    let rhs = DVector::from_column_slice(h);
    let sol = mat
        .full_piv_lu()
        .solve(&rhs)
        .ok_or_else(|| PencilError::LopatinskiiDegenerate {
            detail: "boundary system singular".into(),
        })?;
    let terms = roots
        .roots
        .iter()
        .scan(0usize, |offset, r| {
            let coeffs = sol.as_slice()[*offset..*offset + r.multiplicity].to_vec();
            *offset += r.multiplicity;
            Some(ExpTerm {
                root: r.value,
                coeffs,
            })
        })
        .collect();
    let mut w = ExpPolySolution {
        terms,
        xi_tan: Vec::new(),
        lambda: f64::NAN,
        data: h.to_vec(),
        boundary_residual: 0.0,
        condition,
    };
    w.boundary_residual = rows
        .iter()
        .zip(h)
        .map(|(op, v)| (w.boundary_value(op) - v).norm())
        .fold(0.0, f64::max);
    Ok(w)
}

fn condition_number(mat: &DMatrix<Complex64>) -> f64 {
    let sv = mat.clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `w_j` with `B_k w_j|₀ = δ_{jk}`; `j` is 1-based.
pub fn fundamental_solution(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
    j: usize,
) -> Result<ExpPolySolution> {
    fundamental_solution_with(p, b, xi_tan, lambda, j, SolvePath::Normalized)
}

pub fn fundamental_solution_with(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
    j: usize,
    path: SolvePath,
) -> Result<ExpPolySolution> {
    let m = p.m();
    if j == 0 || j > m {
        return Err(PencilError::input(format!("j = {j} outside 1..={m}")));
    }
    let mut h = vec![ZERO; m];
    h[j - 1] = Complex64::new(1.0, 0.0);
    solve_bvp_with(p, b, xi_tan, lambda, &h, path)
}

/// `Σ_j h_j w_j` built from the fundamental solutions.
pub fn superpose_fundamentals(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
    h: &[Complex64],
) -> Result<ExpPolySolution> {
    let mut acc: Option<ExpPolySolution> = None;
    for (j, &hj) in h.iter().enumerate() {
        let wj = fundamental_solution(p, b, xi_tan, lambda, j + 1)?;
        let target = acc.get_or_insert_with(|| wj.zero_like());
        target.axpy(hj, &wj);
    }
    let mut w = acc.ok_or_else(|| PencilError::input("empty boundary data"))?;
    w.data = h.to_vec();
    w.boundary_residual = boundary_residual(&w, b, xi_tan, h)?;
    Ok(w)
}

/// Largest `|w_j(t, ξ′, λ) − r^{−e} w_j(rt, ξ′/r, λ/r)|` relative to `sup |w_j|`,
/// with `e = m_j` unless `exponent` overrides it. Both sides use the direct
/// solve path.
pub fn check_homogeneity(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
    j: usize,
    r_values: &[f64],
    exponent: Option<i32>,
) -> Result<f64> {
    let w = fundamental_solution_with(p, b, xi_tan, lambda, j, SolvePath::Direct)?;
    let e = exponent.unwrap_or(b.orders()[j - 1] as i32);
    let horizon = 10.0 / w.min_decay();
    let ts: Vec<f64> = (0..=200).map(|k| horizon * k as f64 / 200.0).collect();
    let sup = ts.iter().map(|&t| w.eval(t).norm()).fold(0.0, f64::max);
    let mut worst: f64 = 0.0;
    for &r in r_values {
        let xi_r: Vec<f64> = xi_tan.iter().map(|x| x / r).collect();
        let wr = fundamental_solution_with(p, b, &xi_r, lambda / r, j, SolvePath::Direct)?;
        for &t in &ts {
            let d = (w.eval(t) - wr.eval(r * t) * r.powi(-e)).norm();
            worst = worst.max(d);
        }
    }
    Ok(if sup > 0.0 { worst / sup } else { worst })
}

/// The bound of the sharp half-line estimate in its four regimes.
pub fn regime_bound(orders: &[usize], mu: usize, j: usize, l: usize, x: f64, lambda: f64) -> f64 {
    let (mj, m_mu, m_next) = (
        orders[j - 1] as f64,
        orders[mu - 1] as f64,
        orders[mu] as f64,
    );
    let l = l as f64;
    if j <= mu {
        if l <= m_next {
            x.powf(l - mj - 0.5)
        } else {
            x.powf(m_next - mj) * (lambda + x).powf(l - m_next - 0.5)
        }
    } else if l <= m_mu {
        x.powf(l - m_mu - 0.5) * (lambda + x).powf(m_mu - mj)
    } else {
        (lambda + x).powf(l - mj - 0.5)
    }
}

/// Exponent of `(λ + |ξ′|)` in [`regime_bound`]; the normalized form at
/// `|ξ′| = 1` is `Λ^{e}` for `Λ ≥ 1` and a constant below.
fn regime_lambda_exponent(orders: &[usize], mu: usize, j: usize, l: usize) -> f64 {
    let (mj, m_mu, m_next) = (
        orders[j - 1] as f64,
        orders[mu - 1] as f64,
        orders[mu] as f64,
    );
    let l = l as f64;
    if j <= mu {
        if l <= m_next {
            0.0
        } else {
            l - m_next - 0.5
        }
    } else if l <= m_mu {
        m_mu - mj
    } else {
        l - mj - 0.5
    }
}

fn regime_name(orders: &[usize], mu: usize, j: usize, l: usize) -> &'static str {
    match (j <= mu, j <= mu && l <= orders[mu] || j > mu && l <= orders[mu - 1]) {
        (true, true) => "j<=mu,l<=m_(mu+1)",
        (true, false) => "j<=mu,l>m_(mu+1)",
        (false, true) => "j>mu,l<=m_mu",
        (false, false) => "j>mu,l>m_mu",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub j: usize,
    pub l: usize,
    pub xi_norm: f64,
    pub lambda: f64,
    pub norm: f64,
    pub bound: f64,
    pub ratio: f64,
    pub regime: String,
    /// Ratio against the normalized bound, for rows with `|ξ′| = 1`.
    pub normalized_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateTable {
    pub rows: Vec<EstimateRow>,
}

#[derive(Serialize)]
struct CsvRow {
    j: usize,
    l: usize,
    xi_norm: f64,
    lambda: f64,
    norm: f64,
    bound: f64,
    ratio: f64,
}

impl EstimateTable {
    /// Empirical constant: the largest finite ratio.
    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.rows.iter().all(|r| r.ratio.is_finite() && r.ratio > 0.0)
    }

    /// Largest ratio among rows with the given `λ`.
    pub fn max_ratio_at(&self, lambda: f64) -> f64 {
        self.rows
            .iter()
            .filter(|r| r.lambda == lambda)
            .map(|r| r.ratio)
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            wtr.serialize(CsvRow {
                j: r.j,
                l: r.l,
                xi_norm: r.xi_norm,
                lambda: r.lambda,
                norm: r.norm,
                bound: r.bound,
                ratio: r.ratio,
            })
            .map_err(|e| PencilError::input(e.to_string()))?;
        }
        let bytes = wtr.into_inner().map_err(|e| PencilError::input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| PencilError::input(e.to_string()))
    }
}

/// Norms of `D_t^l w_j` for `j = 1..m`, `l = 0..=l_max` at every sample.
fn norm_grid(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_samples: &[Vec<f64>],
    lambdas: &[f64],
    l_max: usize,
) -> Result<Vec<(f64, f64, usize, usize, f64)>> {
    let pts: Vec<(&Vec<f64>, f64)> = xi_samples
        .iter()
        .flat_map(|x| lambdas.iter().map(move |&l| (x, l)))
        .collect();
    let per_point: Vec<Result<Vec<(f64, f64, usize, usize, f64)>>> = pts
        .par_iter()
        .map(|&(xi, lambda)| {
            let x = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut out = Vec::new();
            for j in 1..=p.m() {
                let w = fundamental_solution(p, b, xi, lambda, j)?;
                for l in 0..=l_max {
                    out.push((x, lambda, j, l, deriv_l2_norm(&w, l)));
                }
            }
            Ok(out)
        })
        .collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

/// Ratios of `‖D_t^l w_j‖` to the four-regime bound.
pub fn estimate_table(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_samples: &[Vec<f64>],
    lambdas: &[f64],
    l_max: usize,
) -> Result<EstimateTable> {
    let orders = b.orders();
    let mu = p.mu();
    let rows = norm_grid(p, b, xi_samples, lambdas, l_max)?
        .into_iter()
        .map(|(x, lambda, j, l, norm)| {
            let bound = regime_bound(&orders, mu, j, l, x, lambda);
            let normalized_ratio = ((x - 1.0).abs() < 1e-12).then(|| {
                let nb = if lambda >= 1.0 {
                    lambda.powf(regime_lambda_exponent(&orders, mu, j, l))
                } else {
                    1.0
                };
                norm / nb
            });
            EstimateRow {
                j,
                l,
                xi_norm: x,
                lambda,
                norm,
                bound,
                ratio: norm / bound,
                regime: regime_name(&orders, mu, j, l).to_string(),
                normalized_ratio,
            }
        })
        .collect();
    Ok(EstimateTable { rows })
}

/// Ratios against `Φ^{(−m_j−1/2)} / Φ^{(−l)}`.
pub fn phi_ratio_table(
    p: &OperatorPencil,
    b: &BoundarySet,
    weights: &WeightSpec,
    xi_samples: &[Vec<f64>],
    lambdas: &[f64],
    l_max: usize,
) -> Result<EstimateTable> {
    let orders = b.orders();
    let rows = norm_grid(p, b, xi_samples, lambdas, l_max)?
        .into_iter()
        .map(|(x, lambda, j, l, norm)| {
            let mj = orders[j - 1] as f64;
            let bound = weights.shifted_phi(mj + 0.5, x, lambda) / weights.shifted_phi(l as f64, x, lambda);
            EstimateRow {
                j,
                l,
                xi_norm: x,
                lambda,
                norm,
                bound,
                ratio: norm / bound,
                regime: "phi".to_string(),
                normalized_ratio: None,
            }
        })
        .collect();
    Ok(EstimateTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sqrt3() -> f64 {
        3f64.sqrt()
    }

    #[test]
    fn ex1_fundamental_solutions() {
        let p = fixtures::ex1();
        let w1 = fundamental_solution(&p.pencil, &p.boundary, &[1.0], sqrt3(), 1).unwrap();
        let w2 = fundamental_solution(&p.pencil, &p.boundary, &[1.0], sqrt3(), 2).unwrap();
        for k in 0..=100 {
            let t = k as f64 * 0.1;
            let (a, b) = ((-t).exp(), (-2.0 * t).exp());
            assert!((w1.eval(t) - c(2.0 * a - b, 0.0)).norm() < 1e-12);
            assert!((w2.eval(t) - c(0.0, a - b)).norm() < 1e-12);
        }
        assert!(w1.boundary_residual < 1e-12 && w2.boundary_residual < 1e-12);
    }

    #[test]
    fn superposition_of_unit_data() {
        let p = fixtures::ex1();
        let h = [c(1.0, 0.0), c(1.0, 0.0)];
        let w = solve_bvp(&p.pencil, &p.boundary, &[1.0], sqrt3(), &h).unwrap();
        let t = 0.7;
        let expect = c(2.0, 1.0) * (-t as f64).exp() - c(1.0, 1.0) * (-2.0 * t as f64).exp();
        assert!((w.eval(t) - expect).norm() < 1e-12);
        let zero = solve_bvp(&p.pencil, &p.boundary, &[1.0], sqrt3(), &[ZERO, ZERO]).unwrap();
        assert_eq!(zero.coeff_norm(), 0.0);
    }

    #[test]
    fn gram_norms() {
        let p = fixtures::ex1();
        let w1 = fundamental_solution(&p.pencil, &p.boundary, &[1.0], sqrt3(), 1).unwrap();
        assert!((deriv_l2_norm(&w1, 0).powi(2) - 11.0 / 12.0).abs() < 1e-13);
        let e = ExpPolySolution {
            terms: vec![ExpTerm { root: I, coeffs: vec![c(1.0, 0.0)] }],
            xi_tan: vec![1.0],
            lambda: 0.0,
            data: vec![],
            boundary_residual: 0.0,
            condition: 1.0,
        };
        assert!((deriv_l2_norm(&e, 0).powi(2) - 0.5).abs() < 1e-15);
        assert!((deriv_l2_norm(&e, 1).powi(2) - 0.5).abs() < 1e-15);
        // t e^{−t}: ∫ t² e^{−2t} = 1/4
        let te = ExpPolySolution {
            terms: vec![ExpTerm { root: I, coeffs: vec![ZERO, c(1.0, 0.0)] }],
            ..e
        };
        assert!((deriv_l2_norm(&te, 0).powi(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn double_root_at_lambda_zero() {
        let p = fixtures::ex1();
        let w1 = fundamental_solution(&p.pencil, &p.boundary, &[1.0], 0.0, 1).unwrap();
        // (τ − i)²: w₁ = (1 + t) e^{−t}
        for k in 0..20 {
            let t = k as f64 * 0.3;
            assert!((w1.eval(t) - c((1.0 + t) * (-t).exp(), 0.0)).norm() < 1e-7);
        }
        assert_eq!(w1.terms.len(), 1);
    }

    #[test]
    fn homogeneity_and_its_sensitivity() {
        let p = fixtures::ex1();
        let dev = check_homogeneity(&p.pencil, &p.boundary, &[1.0], sqrt3(), 1, &[2.0], None).unwrap();
        assert!(dev < 1e-10, "{dev}");
        let one = check_homogeneity(&p.pencil, &p.boundary, &[1.0], sqrt3(), 2, &[1.0], None).unwrap();
        assert_eq!(one, 0.0);
        let wrong = check_homogeneity(&p.pencil, &p.boundary, &[1.0], sqrt3(), 2, &[2.0], Some(0)).unwrap();
        assert!(wrong > 0.1, "{wrong}");
    }

    #[test]
    fn degenerate_boundary_is_reported() {
        let p = fixtures::ex1_tangential();
        let err = fundamental_solution(&p.pencil, &p.boundary, &[1.0], 1.0, 1).unwrap_err();
        assert!(matches!(err, PencilError::LopatinskiiDegenerate { .. }));
    }

    #[test]
    fn j_out_of_range() {
        let p = fixtures::ex1();
        assert!(matches!(
            fundamental_solution(&p.pencil, &p.boundary, &[1.0], 1.0, 3),
            Err(PencilError::Input(_))
        ));
    }

    #[test]
    fn regime_table_entry() {
        let p = fixtures::ex1();
        let t = estimate_table(&p.pencil, &p.boundary, &[vec![1.0]], &[sqrt3()], 1).unwrap();
        let row = t.rows.iter().find(|r| r.j == 1 && r.l == 0).unwrap();
        assert_eq!(row.bound, 1.0);
        assert!((row.ratio - (11f64 / 12.0).sqrt()).abs() < 1e-12);
        assert_eq!(row.regime, "j<=mu,l<=m_(mu+1)");
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("j,l,xi_norm,lambda,norm,bound,ratio\n"));
    }

    #[test]
    fn phi_bound_at_reference_point() {
        let p = fixtures::ex1();
        let w = WeightSpec::new(4.0, 1.0);
        let t = phi_ratio_table(&p.pencil, &p.boundary, &w, &[vec![1.0]], &[sqrt3()], 0).unwrap();
        let row = &t.rows[0];
        assert!((row.bound - 1.0).abs() < 1e-12);
        assert!((row.ratio - (11f64 / 12.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn phi_bound_dominates_regime_bound() {
        let p = fixtures::ex1();
        let w = WeightSpec::new(4.0, 1.0);
        let orders = p.boundary.orders();
        for j in 1..=2 {
            for l in 0..=5 {
                let a = regime_bound(&orders, 1, j, l, 1.0, 1e3);
                let mj = orders[j - 1] as f64;
                let phi = w.shifted_phi(mj + 0.5, 1.0, 1e3) / w.shifted_phi(l as f64, 1.0, 1e3);
                assert!(a <= phi * (1.0 + 1e-12), "j={j} l={l}: {a} vs {phi}");
            }
        }
    }
}
