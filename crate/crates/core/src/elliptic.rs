//! The four ellipticity conditions with quantitative certificates.
//!
//! a) interior margin of `|A⁽⁰⁾(ξ, λ)|` against `|ξ|^{2μ}(λ+|ξ|)^{2m−2μ}`;
//! b) nonvanishing Lopatinskii determinant for `ξ′ ≠ 0`;
//! c) the Shapiro–Lopatinskii condition for `A_{2μ}` and `B_1, …, B_μ`;
//! d) independence of `B_{μ+1}(0, τ), …, B_m(0, τ)` modulo `Q₊`.
//!
//! Every search runs on a compact set (hemisphere or quarter sphere) since all
//! tested quantities are jointly homogeneous.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PencilError, Result};
use crate::rootsplit::{self, q_plus, q_polynomial, upper_roots, upper_roots_of, QPlus};
use crate::symbols::{from_epsilon, BoundarySet, EpsilonPencil, OperatorPencil, UniPoly};
use crate::Verdict;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckConfig {
    /// Grid points per angular dimension.
    pub grid_n: usize,
    /// Smallest `|ξ′|` sampled by the condition b) scan.
    pub pole_cutoff: f64,
    pub margin_floor: f64,
    pub det_floor: f64,
    /// Radius of the search spheres. Verdicts do not depend on it.
    pub search_radius: f64,
    /// Golden-section sweeps after the interior grid search.
    pub refine_sweeps: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            grid_n: 200,
            pole_cutoff: 1e-3,
            margin_floor: 1e-6,
            det_floor: 1e-8,
            search_radius: 1.0,
            refine_sweeps: 3,
        }
    }
}

/// Point on `S^{k−1}` from hyperspherical angles (`k − 1` of them).
fn sphere_point(k: usize, angles: &[f64]) -> Vec<f64> {
    debug_assert_eq!(angles.len() + 1, k);
    let mut x = vec![0.0; k];
    let mut s = 1.0;
    for (i, &a) in angles.iter().enumerate() {
        x[i] = s * a.cos();
        s *= a.sin();
    }
    x[k - 1] = s;
    x
}

/// Parameter ranges for the angles of `S^{k−1}`; the last one is periodic.
fn angle_ranges(k: usize) -> Vec<(f64, f64, bool)> {
    (0..k.saturating_sub(1))
        .map(|i| if i + 2 == k { (0.0, 2.0 * PI, true) } else { (0.0, PI, false) })
        .collect()
}

fn grid_values(lo: f64, hi: f64, periodic: bool, n: usize) -> Vec<f64> {
    let n = n.max(2);
    if periodic {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
    } else {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

/// Directions on `S^{k−1}`. For `k = 1` this is `{+1, −1}`.
pub fn direction_grid(k: usize, n: usize) -> Vec<Vec<f64>> {
    if k == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    let axes: Vec<Vec<f64>> = angle_ranges(k)
        .into_iter()
        .map(|(lo, hi, p)| grid_values(lo, hi, p, n))
        .collect();
    tensor(&axes)
        .into_iter()
        .map(|a| sphere_point(k, &a))
        .collect()
}

fn tensor(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Result of the condition a) search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub margin: f64,
    /// `(ξ, λ)` at the minimum, concatenated.
    pub argmin: Vec<f64>,
    pub grid_spec: String,
    pub verdict: Verdict,
}

/// `|A⁽⁰⁾(ξ, λ)| / (|ξ|^{2μ}(λ+|ξ|)^{2m−2μ})`, with the `ξ → 0` limit
/// `|A⁽⁰⁾_{2μ}(ω)|` taken along the direction `ω`.
fn interior_ratio(p: &OperatorPencil, theta: f64, omega: &[f64], radius: f64) -> f64 {
    let (m, mu) = (p.m() as i32, p.mu() as i32);
    let t = radius * theta.sin();
    let lambda = radius * theta.cos();
    let value = if t == 0.0 {
        p.part(2 * p.mu())
            .eval_real(omega)
            .map(|z| z.norm())
            .unwrap_or(f64::NAN)
    } else {
        let xi: Vec<f64> = omega.iter().map(|w| w * t).collect();
        let den = t.powi(2 * mu) * (lambda + t).powi(2 * m - 2 * mu);
        p.eval(&xi, lambda).map(|z| z.norm() / den).unwrap_or(f64::NAN)
    };
    if value.is_nan() {
        0.0
    } else {
        value
    }
}

/// Condition a) on the hemisphere `|ξ|² + λ² = R²`, `λ ≥ 0`.
pub fn interior_margin(p: &OperatorPencil, grid_n: usize) -> MarginReport {
    interior_margin_with(
        p,
        &CheckConfig {
            grid_n,
            ..CheckConfig::default()
        },
    )
}

pub fn interior_margin_with(p: &OperatorPencil, cfg: &CheckConfig) -> MarginReport {
    let principal = p.principal();
    let n = p.dim();
    let mut ranges = vec![(0.0, PI / 2.0, false)];
    ranges.extend(angle_ranges(n));
    let axes: Vec<Vec<f64>> = ranges
        .iter()
        .map(|&(lo, hi, per)| grid_values(lo, hi, per, cfg.grid_n))
        .collect();
    let objective = |params: &[f64]| {
        let omega = sphere_point(n, &params[1..]);
        interior_ratio(&principal, params[0], &omega, cfg.search_radius)
    };
    let (mut best_val, mut best) = grid_minimum(&axes, &objective);
    for _ in 0..cfg.refine_sweeps {
        for (k, &(lo, hi, periodic)) in ranges.iter().enumerate() {
            let h = axes[k].get(1).map_or(hi - lo, |v| v - axes[k][0]);
            let (a, b) = if periodic {
                (best[k] - h, best[k] + h)
            } else {
                ((best[k] - h).max(lo), (best[k] + h).min(hi))
            };
            let mut probe = best.clone();
            let x = golden_section(a, b, 60, |x| {
                probe[k] = x;
                objective(&probe)
            });
            let mut cand = best.clone();
            cand[k] = x;
            let v = objective(&cand);
            if v < best_val {
                best_val = v;
                best = cand;
            }
        }
    }
    let t = cfg.search_radius * best[0].sin();
    let mut argmin: Vec<f64> = sphere_point(n, &best[1..]).iter().map(|w| w * t).collect();
    argmin.push(cfg.search_radius * best[0].cos());
    MarginReport {
        margin: best_val,
        argmin,
        grid_spec: format!(
            "hemisphere radius {} with {} points per angle in {} angles, {} golden-section sweeps",
            cfg.search_radius,
            cfg.grid_n,
            ranges.len(),
            cfg.refine_sweeps
        ),
        verdict: Verdict::from_bool(best_val > cfg.margin_floor),
    }
}

/// Smallest objective value over a tensor grid; ties resolve to the lowest index.
fn grid_minimum(axes: &[Vec<f64>], f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> (f64, Vec<f64>) {
    let total: usize = axes.iter().map(|a| a.len()).product();
    let point = |mut idx: usize| {
        let mut p = vec![0.0; axes.len()];
        for k in (0..axes.len()).rev() {
            p[k] = axes[k][idx % axes[k].len()];
            idx /= axes[k].len();
        }
        p
    };
    let (val, idx) = (0..total)
        .into_par_iter()
        .map(|i| (f(&point(i)), i))
        .reduce(
            || (f64::INFINITY, usize::MAX),
            |a, b| if (b.0, b.1) < (a.0, a.1) { b } else { a },
        );
    (val, point(idx.min(total.saturating_sub(1))))
}

fn golden_section(mut a: f64, mut b: f64, iters: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Regular degeneration: `Q` has exactly `m − μ` upper roots.
pub fn check_regular_degeneration(p: &OperatorPencil) -> Result<QPlus> {
    let q = q_polynomial(p)?;
    q_plus(&q, p)
}

/// Coefficients `b_{jk}` of the remainders of the boundary symbols.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LopMatrix {
    /// Row `j` holds the coefficients of `τ^0, …, τ^{m−1}`.
    pub entries: Vec<Vec<Complex64>>,
}

impl LopMatrix {
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let k = self.entries.len();
        DMatrix::from_fn(k, k, |i, j| self.entries[i][j])
    }

    pub fn det(&self) -> Complex64 {
        if self.entries.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        self.to_matrix().full_piv_lu().determinant()
    }
}

/// Rows of remainders of `polys` modulo the monic `modulus`.
pub fn remainder_matrix(polys: &[UniPoly], modulus: &UniPoly) -> Result<LopMatrix> {
    let k = modulus.degree().unwrap_or(0);
    let entries = polys
        .iter()
        .map(|b| Ok(b.div_rem(modulus)?.1.padded(k)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LopMatrix { entries })
}

pub fn lopatinskii_matrix(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
) -> Result<LopMatrix> {
    let a_plus = upper_roots(p, xi_tan, lambda)?.to_poly();
    remainder_matrix(&b.restricted_principal(xi_tan)?, &a_plus)
}

pub fn lopatinskii_det(
    p: &OperatorPencil,
    b: &BoundarySet,
    xi_tan: &[f64],
    lambda: f64,
) -> Result<Complex64> {
    Ok(lopatinskii_matrix(p, b, xi_tan, lambda)?.det())
}

/// Per-condition verdict with the smallest determinant found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub min_abs_det: f64,
    /// Tangential frequency (and parameter, where relevant) of the minimum.
    pub argmin: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl ConditionReport {
    fn from_error(e: &PencilError) -> Self {
        ConditionReport {
            verdict: verdict_for_error(e),
            min_abs_det: f64::NAN,
            argmin: Vec::new(),
            diagnostics: vec![e.to_string()],
        }
    }
}

fn verdict_for_error(e: &PencilError) -> Verdict {
    if e.is_structural() {
        Verdict::Fail
    } else {
        Verdict::Indeterminate
    }
}

/// Condition b) scan result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionBReport {
    #[serde(flatten)]
    pub report: ConditionReport,
    /// Fitted exponent of `|Lop(t ω, 1)| ~ t^κ` as `t → 0`; informational.
    pub decay_exponent: Option<f64>,
    pub pole_cutoff: f64,
}

/// Scans the quarter sphere `|ξ′|² + λ² = R²`, `λ ≥ 0`, `|ξ′| ≥ pole_cutoff·R`.
pub fn condition_b_scan(p: &OperatorPencil, b: &BoundarySet, cfg: &CheckConfig) -> ConditionBReport {
    let k = p.dim() - 1;
    let theta0 = cfg.pole_cutoff.clamp(0.0, 1.0).asin();
    let thetas = grid_values(theta0, PI / 2.0, false, cfg.grid_n);
    let dirs = direction_grid(k, cfg.grid_n);
    let pts: Vec<(Vec<f64>, f64)> = thetas
        .iter()
        .flat_map(|&th| {
            dirs.iter().map(move |w| {
                let xi: Vec<f64> = w.iter().map(|x| x * cfg.search_radius * th.sin()).collect();
                (xi, cfg.search_radius * th.cos())
            })
        })
        .collect();
    let report = scan_dets(&pts, cfg.det_floor, |xi, lam| {
        lopatinskii_det(p, b, xi, lam).map(|d| d.norm())
    });
    ConditionBReport {
        report,
        decay_exponent: pole_decay_exponent(p, b),
        pole_cutoff: cfg.pole_cutoff,
    }
}

/// Evaluates `f` at every point; errors become verdicts with the point as witness.
fn scan_dets(
    pts: &[(Vec<f64>, f64)],
    floor: f64,
    f: impl Fn(&[f64], f64) -> Result<f64> + Sync,
) -> ConditionReport {
    let vals: Vec<Result<f64>> = pts.par_iter().map(|(xi, lam)| f(xi, *lam)).collect();
    let mut verdict = Verdict::Pass;
    let mut diagnostics = Vec::new();
    let mut best = (f64::INFINITY, Vec::new());
    for ((xi, lam), v) in pts.iter().zip(vals) {
        match v {
            Ok(d) => {
                if d < best.0 {
                    let mut at = xi.clone();
                    at.push(*lam);
                    best = (d, at);
                }
            }
            Err(e) => {
                verdict = verdict.and(verdict_for_error(&e));
                if diagnostics.len() < 5 {
                    diagnostics.push(format!("at ξ′ = {xi:?}, λ = {lam}: {e}"));
                }
            }
        }
    }
    if best.0.is_finite() && !(best.0 > floor) {
        verdict = Verdict::Fail;
        diagnostics.push(format!(
            "|det| = {:.3e} at {:?} is not above the floor {floor:.1e}",
            best.0, best.1
        ));
    }
    ConditionReport {
        verdict,
        min_abs_det: best.0,
        argmin: best.1,
        diagnostics,
    }
}

/// Slope of `log |Lop(t e_1, 1)|` against `log t` for `t ∈ [1e-4, 1e-1]`.
fn pole_decay_exponent(p: &OperatorPencil, b: &BoundarySet) -> Option<f64> {
    let k = p.dim() - 1;
    let ts: Vec<f64> = (0..7).map(|i| 10f64.powf(-1.0 - 0.5 * i as f64)).collect();
    let mut dets = Vec::with_capacity(ts.len());
    for &t in &ts {
        let mut xi = vec![0.0; k];
        xi[0] = t;
        dets.push(lopatinskii_det(p, b, &xi, 1.0).ok()?.norm());
    }
    if dets.iter().any(|&d| d == 0.0) {
        return None;
    }
    let slope = rootsplit::loglog_slope(&ts, &dets);
    slope.is_finite().then_some(slope)
}

/// Condition c) over the unit sphere `|ξ′| = 1`.
pub fn condition_c(p: &OperatorPencil, b: &BoundarySet, cfg: &CheckConfig) -> Result<ConditionReport> {
    let mu = p.mu();
    if mu == 0 {
        return Ok(ConditionReport {
            verdict: Verdict::Pass,
            min_abs_det: 1.0,
            argmin: Vec::new(),
            diagnostics: vec!["empty matrix for mu = 0".into()],
        });
    }
    let low = p.principal().part(2 * mu);
    let ops = &b.ops()[..mu.min(b.len())];
    let dirs = direction_grid(p.dim() - 1, cfg.grid_n);
    let pts: Vec<(Vec<f64>, f64)> = dirs
        .into_iter()
        .map(|w| (w.iter().map(|x| x * cfg.search_radius).collect(), 0.0))
        .collect();
    // a root-count failure anywhere is the documented error
    let first = &pts[0].0;
    upper_roots_of(&low.restrict_to_normal(first)?, mu, "A_2mu(ξ′, ·)")?;
    let mut report = scan_dets(&pts, cfg.det_floor, |xi, _| {
        let plus = upper_roots_of(&low.restrict_to_normal(xi)?, mu, "A_2mu(ξ′, ·)")?.to_poly();
        let rows = ops
            .iter()
            .map(|op| op.principal().restrict_to_normal(xi))
            .collect::<Result<Vec<_>>>()?;
        Ok(remainder_matrix(&rows, &plus)?.det().norm())
    });
    for a in report.argmin.iter_mut() {
        *a /= cfg.search_radius;
    }
    report.argmin.pop();
    Ok(report)
}

/// Condition d): rows `B_j⁽⁰⁾(0, τ) mod Q₊` for `j > μ`.
pub fn condition_d(p: &OperatorPencil, b: &BoundarySet, cfg: &CheckConfig) -> Result<ConditionReport> {
    let qp = check_regular_degeneration(p)?;
    if qp.verdict != Verdict::Pass {
        return Err(PencilError::Structural(format!(
            "regular degeneration fails: {:?}",
            qp.diagnostics
        )));
    }
    let origin = vec![0.0; p.dim() - 1];
    let rows = b.ops()[p.mu().min(b.len())..]
        .iter()
        .map(|op| op.principal().restrict_to_normal(&origin))
        .collect::<Result<Vec<_>>>()?;
    let mat = remainder_matrix(&rows, &qp.poly)?;
    let d = mat.det().norm();
    let verdict = Verdict::from_bool(d > cfg.det_floor);
    let mut diagnostics = Vec::new();
    if !verdict.is_pass() {
        diagnostics.push(format!(
            "|det| = {d:.3e} for the remainders modulo Q₊ = {}",
            qp.poly
        ));
    }
    Ok(ConditionReport {
        verdict,
        min_abs_det: d,
        argmin: origin,
        diagnostics,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerationReport {
    pub verdict: Verdict,
    pub upper_count: Option<usize>,
    pub expected: usize,
    pub k1: Option<usize>,
    pub diagnostics: Vec<String>,
}

/// Verdicts and certificates for all conditions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub condition_a: MarginReport,
    pub regular_degeneration: DegenerationReport,
    pub condition_b: ConditionBReport,
    pub condition_c: ConditionReport,
    pub condition_d: ConditionReport,
    /// Condition b) at `λ = 0`, reported for ε-form problems.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_endpoint: Option<ConditionReport>,
    pub overall: Verdict,
}

impl EllipticityReport {
    fn conjunction(&self) -> Verdict {
        let mut v = self
            .condition_a
            .verdict
            .and(self.regular_degeneration.verdict)
            .and(self.condition_b.report.verdict)
            .and(self.condition_c.verdict)
            .and(self.condition_d.verdict);
        if let Some(e) = &self.epsilon_endpoint {
            v = v.and(e.verdict);
        }
        v
    }

    /// Verdicts of a) through d) in order.
    pub fn verdicts(&self) -> [Verdict; 4] {
        [
            self.condition_a.verdict,
            self.condition_b.report.verdict,
            self.condition_c.verdict,
            self.condition_d.verdict,
        ]
    }
}

/// Runs every condition; failures of one do not stop the others.
pub fn full_check(p: &OperatorPencil, b: &BoundarySet, cfg: &CheckConfig) -> EllipticityReport {
    let condition_a = interior_margin_with(p, cfg);
    let expected = p.m().saturating_sub(p.mu());
    let regular_degeneration = match check_regular_degeneration(p) {
        Ok(qp) => DegenerationReport {
            verdict: qp.verdict,
            upper_count: Some(qp.upper_count),
            expected,
            k1: Some(qp.k1),
            diagnostics: qp.diagnostics,
        },
        Err(e) => DegenerationReport {
            verdict: verdict_for_error(&e),
            upper_count: None,
            expected,
            k1: None,
            diagnostics: vec![e.to_string()],
        },
    };
    let condition_b = condition_b_scan(p, b, cfg);
    let condition_c = condition_c(p, b, cfg).unwrap_or_else(|e| ConditionReport::from_error(&e));
    let condition_d = condition_d(p, b, cfg).unwrap_or_else(|e| ConditionReport::from_error(&e));
    let mut report = EllipticityReport {
        condition_a,
        regular_degeneration,
        condition_b,
        condition_c,
        condition_d,
        epsilon_endpoint: None,
        overall: Verdict::Pass,
    };
    report.overall = report.conjunction();
    report
}

/// The ε-form check: the λ-form conditions plus the `ε = ∞` endpoint.
pub fn check_epsilon(pe: &EpsilonPencil, b: &BoundarySet, cfg: &CheckConfig) -> Result<EllipticityReport> {
    if !(pe.m() > pe.mu() && pe.mu() > 0) {
        return Err(PencilError::input(format!(
            "need m > mu > 0, got m = {}, mu = {}",
            pe.m(),
            pe.mu()
        )));
    }
    let p = from_epsilon(pe);
    let mut report = full_check(&p, b, cfg);
    let pts: Vec<(Vec<f64>, f64)> = direction_grid(p.dim() - 1, cfg.grid_n)
        .into_iter()
        .map(|w| (w, 0.0))
        .collect();
    report.epsilon_endpoint = Some(scan_dets(&pts, cfg.det_floor, |xi, lam| {
        lopatinskii_det(&p, b, xi, lam).map(|d| d.norm())
    }));
    report.overall = report.conjunction();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::symbols::{BoundaryOperator, MultiPoly};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ex1_margin_is_half() {
        let p = fixtures::ex1();
        let rep = interior_margin(&p.pencil, 200);
        assert!((rep.margin - 0.5).abs() < 1e-9, "{}", rep.margin);
        let t = rep.argmin[0].hypot(rep.argmin[1]);
        assert!((t - 0.5f64.sqrt()).abs() < 1e-4);
        assert!((rep.argmin[2] - 0.5f64.sqrt()).abs() < 1e-4);
        assert_eq!(rep.verdict, Verdict::Pass);
    }

    #[test]
    fn sign_flip_has_no_margin() {
        let rep = interior_margin(&fixtures::ex1_sign_flipped().pencil, 200);
        assert!(rep.margin < 1e-6);
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn lambda_zero_edge_is_one() {
        let p = fixtures::ex1().pencil;
        let v = interior_ratio(&p.principal(), PI / 2.0, &[0.6, 0.8], 1.0);
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ex1_lop_matrix_is_identity() {
        let p = fixtures::ex1();
        let lm = lopatinskii_matrix(&p.pencil, &p.boundary, &[1.0], 3f64.sqrt()).unwrap();
        assert_eq!(lm.entries, vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]);
        let d = lopatinskii_det(&p.pencil, &p.boundary, &[2.0], 2.0 * 3f64.sqrt()).unwrap();
        assert!((d - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cubic_boundary_row() {
        let p = fixtures::ex1_cubic_b2();
        let lm = lopatinskii_matrix(&p.pencil, &p.boundary, &[1.0], 3f64.sqrt()).unwrap();
        // τ³ = (τ + 3i)(τ² − 3iτ − 2) + 6i − 7τ
        assert!((lm.entries[1][0] - c(0.0, 6.0)).norm() < 1e-10);
        assert!((lm.entries[1][1] - c(-7.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn duplicate_boundary_rows_vanish() {
        let p = fixtures::ex1();
        let b1 = p.boundary.ops()[0].clone();
        let dup = BoundarySet::new(vec![b1.clone(), b1]);
        let d = lopatinskii_det(&p.pencil, &dup, &[1.0], 1.0).unwrap();
        assert_eq!(d.norm(), 0.0);
    }

    #[test]
    fn ex1_full_check_passes() {
        let p = fixtures::ex1();
        let rep = full_check(&p.pencil, &p.boundary, &CheckConfig::default());
        assert_eq!(rep.overall, Verdict::Pass, "{rep:#?}");
        assert!((rep.condition_b.report.min_abs_det - 1.0).abs() < 1e-10);
        assert!(rep.condition_b.decay_exponent.unwrap().abs() < 1e-6);
        assert!((rep.condition_c.min_abs_det - 1.0).abs() < 1e-10);
        assert!((rep.condition_d.min_abs_det - 1.0).abs() < 1e-10);
    }

    #[test]
    fn sign_flipped_reports_everything() {
        let p = fixtures::ex1_sign_flipped();
        let rep = full_check(&p.pencil, &p.boundary, &CheckConfig::default());
        assert_eq!(rep.condition_a.verdict, Verdict::Fail);
        assert_eq!(rep.overall, Verdict::Fail);
    }

    #[test]
    fn tangential_b2_fails_b_and_d() {
        let p = fixtures::ex1_tangential();
        let rep = full_check(&p.pencil, &p.boundary, &CheckConfig::default());
        assert_eq!(
            rep.verdicts(),
            [Verdict::Pass, Verdict::Fail, Verdict::Pass, Verdict::Fail]
        );
    }

    #[test]
    fn oblique_control_fails_only_d() {
        let p = fixtures::ex1_oblique_control();
        let rep = full_check(&p.pencil, &p.boundary, &CheckConfig::default());
        assert_eq!(
            rep.verdicts(),
            [Verdict::Pass, Verdict::Pass, Verdict::Pass, Verdict::Fail]
        );
        let k = rep.condition_b.decay_exponent.unwrap();
        assert!((k - 1.0).abs() < 1e-6, "{k}");
    }

    #[test]
    fn condition_c_detects_vanishing_remainder() {
        let p = fixtures::ex1();
        // B₁ = ξ₂ − iξ₁ vanishes at the root τ = i of (A₂)₊ for ξ′ = 1
        let b1 = MultiPoly::from_terms(2, [(vec![0, 1], c(1.0, 0.0)), (vec![1, 0], c(0.0, -1.0))]).unwrap();
        let b = BoundarySet::new(vec![
            BoundaryOperator::new(b1, 1),
            BoundaryOperator::new(MultiPoly::monomial(vec![0, 2], c(1.0, 0.0)), 2),
        ]);
        let rep = condition_c(&p.pencil, &b, &CheckConfig::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        assert_eq!(rep.argmin, vec![1.0]);
    }

    #[test]
    fn epsilon_form_checks_endpoint() {
        let p = fixtures::ex1_epsilon();
        let rep = check_epsilon(&p.epsilon_pencil(), &p.boundary, &CheckConfig::default()).unwrap();
        assert_eq!(rep.overall, Verdict::Pass);
        assert_eq!(rep.epsilon_endpoint.as_ref().unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn epsilon_endpoint_failure() {
        let p = fixtures::ex1_epsilon();
        // (ξ₂ − iξ₁)² vanishes to second order at the double root of Δ² for ξ′ = 1
        let b2 = MultiPoly::from_terms(
            2,
            [
                (vec![0, 2], c(1.0, 0.0)),
                (vec![1, 1], c(0.0, -2.0)),
                (vec![2, 0], c(-1.0, 0.0)),
            ],
        )
        .unwrap();
        let b = BoundarySet::new(vec![
            p.boundary.ops()[0].clone(),
            BoundaryOperator::new(b2, 2),
        ]);
        let rep = check_epsilon(&p.epsilon_pencil(), &b, &CheckConfig::default()).unwrap();
        assert_eq!(rep.epsilon_endpoint.unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn epsilon_requires_positive_mu() {
        let p = fixtures::ex1();
        let mut parts = std::collections::BTreeMap::new();
        parts.insert(4, p.pencil.part(4));
        let bih = EpsilonPencil::new(2, 2, 0, parts).unwrap();
        assert!(matches!(
            check_epsilon(&bih, &p.boundary, &CheckConfig::default()),
            Err(PencilError::Input(_))
        ));
    }

    #[test]
    fn verdicts_survive_rescaling() {
        for prob in [fixtures::ex1(), fixtures::ex1_oblique_control()] {
            let base = full_check(&prob.pencil, &prob.boundary, &CheckConfig::default());
            for r in [0.5, 2.0] {
                let cfg = CheckConfig {
                    search_radius: r,
                    ..CheckConfig::default()
                };
                let rep = full_check(&prob.pencil, &prob.boundary, &cfg);
                assert_eq!(rep.verdicts(), base.verdicts());
                assert!((rep.condition_a.margin - base.condition_a.margin).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn margin_refinement_is_stable() {
        let p = fixtures::ex1().pencil;
        let a = interior_margin(&p, 200).margin;
        let b = interior_margin(&p, 400).margin;
        assert!(b <= a + 1e-9);
        assert!((a - b).abs() / b < 0.1);
    }

    #[test]
    fn direction_grids() {
        assert_eq!(direction_grid(1, 10), vec![vec![1.0], vec![-1.0]]);
        for w in direction_grid(3, 6) {
            let n: f64 = w.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }
}
