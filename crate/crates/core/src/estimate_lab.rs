//! Spectral verification of the whole-space estimate, the half-space a priori
//! estimate for solutions of the homogeneous equation, the constant
//! coefficient parametrix, the dilation identity for symbols, and the ε-form
//! estimate.
//!
//! Half-space norms are exact in `x_n` (Gram integrals of the half-line
//! solutions) and quadrature sums in `ξ′`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::interior_margin;
use crate::error::{PencilError, Result};
use crate::halfline::{deriv_l2_norm, solve_bvp, solve_symbol, ExpPolySolution};
use crate::newton::{cutoff, WeightSpec};
use crate::quadrature::{GridConfig, SpectralGrid};
use crate::symbols::{BoundarySet, EpsilonPencil, MultiPoly, OperatorPencil};
use crate::Verdict;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Radial frequency-side profiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    /// `a · exp(−|ξ|²/(2σ²))`.
    Gaussian { amplitude: f64, sigma: f64 },
    /// `a · |ξ|^k · exp(−|ξ|²/(2σ²))`.
    VanishingGaussian { amplitude: f64, sigma: f64, order: u32 },
    /// `a · exp(−(|ξ| − R)²/(2w²))`.
    Shell { amplitude: f64, radius: f64, width: f64 },
    /// `a · exp(1 − 1/(1 − u²))` for `u = (|ξ| − R)/w ∈ (−1, 1)`, else 0.
    Bump { amplitude: f64, radius: f64, width: f64 },
}

impl Profile {
    pub fn gaussian(sigma: f64) -> Self {
        Profile::Gaussian { amplitude: 1.0, sigma }
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let x = norm(xi);
        match *self {
            Profile::Gaussian { amplitude, sigma } => amplitude * (-x * x / (2.0 * sigma * sigma)).exp(),
            Profile::VanishingGaussian { amplitude, sigma, order } => {
                amplitude * x.powi(order as i32) * (-x * x / (2.0 * sigma * sigma)).exp()
            }
            Profile::Shell { amplitude, radius, width } => {
                amplitude * (-(x - radius).powi(2) / (2.0 * width * width)).exp()
            }
            Profile::Bump { amplitude, radius, width } => {
                let u = (x - radius) / width;
                if u.abs() < 1.0 {
                    amplitude * (1.0 - 1.0 / (1.0 - u * u)).exp()
                } else {
                    0.0
                }
            }
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut p = self.clone();
        match &mut p {
            Profile::Gaussian { amplitude, .. }
            | Profile::VanishingGaussian { amplitude, .. }
            | Profile::Shell { amplitude, .. }
            | Profile::Bump { amplitude, .. } => *amplitude *= c,
        }
        p
    }

    /// Closed-form `‖·‖²_{L₂(ℝ^d)}` where one is available.
    pub fn l2_norm_sq(&self, dim: usize) -> Option<f64> {
        match *self {
            Profile::Gaussian { amplitude, sigma } => {
                Some(amplitude * amplitude * (std::f64::consts::PI * sigma * sigma).powf(dim as f64 / 2.0))
            }
            _ => None,
        }
    }
}

/// Boundary data `ĝ_j`, one optional profile per boundary operator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDataSpec {
    pub profiles: Vec<Option<Profile>>,
}

impl BoundaryDataSpec {
    pub fn new(profiles: Vec<Option<Profile>>) -> Self {
        BoundaryDataSpec { profiles }
    }

    /// `ĝ_j = |ξ′|² e^{−|ξ′|²/2}` for the listed `j` (1-based), zero otherwise.
    /// The factor `|ξ′|²` keeps the solution norms finite near `ξ′ = 0`.
    pub fn default_for(m: usize, active: &[usize]) -> Self {
        BoundaryDataSpec {
            profiles: (1..=m)
                .map(|j| {
                    active.contains(&j).then_some(Profile::VanishingGaussian {
                        amplitude: 1.0,
                        sigma: 1.0,
                        order: 2,
                    })
                })
                .collect(),
        }
    }

    pub fn values(&self, xi: &[f64]) -> Vec<Complex64> {
        self.profiles
            .iter()
            .map(|p| p.as_ref().map_or(ZERO, |p| Complex64::new(p.eval(xi), 0.0)))
            .collect()
    }

    pub fn scaled(&self, c: f64) -> Self {
        BoundaryDataSpec {
            profiles: self.profiles.iter().map(|p| p.as_ref().map(|p| p.scaled(c))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    /// `λ`, or `ε` for ε-form tables.
    pub param: f64,
    pub lhs: f64,
    pub rhs_components: Vec<f64>,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub label: String,
    pub component_names: Vec<String>,
    pub rows: Vec<RatioRow>,
}

impl RatioTable {
    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn min_ratio(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min)
    }

    pub fn all_finite(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.ratio.is_finite() && r.ratio > 0.0 && r.lhs.is_finite() && r.rhs.is_finite())
    }

    /// `max ratio / min ratio`.
    pub fn variation(&self) -> f64 {
        self.max_ratio() / self.min_ratio()
    }

    /// Finite positive ratios varying by at most a factor 2.
    pub fn stability_verdict(&self) -> Verdict {
        Verdict::from_bool(!self.rows.is_empty() && self.all_finite() && self.variation() <= 2.0)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["param".to_string(), "lhs".into(), "rhs".into(), "ratio".into()];
        header.extend(self.component_names.iter().cloned());
        wtr.write_record(&header).map_err(|e| PencilError::input(e.to_string()))?;
        for r in &self.rows {
            let mut rec = vec![r.param.to_string(), r.lhs.to_string(), r.rhs.to_string(), r.ratio.to_string()];
            rec.extend(r.rhs_components.iter().map(|c| c.to_string()));
            wtr.write_record(&rec).map_err(|e| PencilError::input(e.to_string()))?;
        }
        let bytes = wtr.into_inner().map_err(|e| PencilError::input(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| PencilError::input(e.to_string()))
    }
}

/// Relative weight of `|û|²` on the outermost radial shell; large values mean
/// the truncation radius cuts off mass.
fn truncation_tail(grid: &SpectralGrid, f: impl Fn(&[f64]) -> f64 + Sync) -> f64 {
    let peak = grid.nodes.par_iter().map(|x| f(x)).reduce(|| 0.0, f64::max);
    let outer: f64 = grid
        .nodes
        .par_iter()
        .filter(|x| norm(x) >= 0.9 * grid.truncation)
        .map(|x| f(x))
        .reduce(|| 0.0, f64::max);
    if peak > 0.0 {
        outer / peak
    } else {
        0.0
    }
}

/// Truncated-mass threshold for [`wholespace_ratio`].
pub const TAIL_LIMIT: f64 = 1e-10;

/// Whole-space estimate: `‖|D|^s(|D|+λ)^{r−s}u‖` against
/// `‖|D|^{s−2μ}(|D|+λ)^{r−s−2m+2μ} A(D,λ) u‖` for each profile and `λ`.
pub fn wholespace_ratio(
    p: &OperatorPencil,
    w: &WeightSpec,
    profiles: &[Profile],
    lambdas: &[f64],
    grid_cfg: &GridConfig,
) -> Result<RatioTable> {
    let (m, mu) = (p.m() as f64, p.mu() as f64);
    let (r, s) = (w.r, w.s);
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let grid = grid_cfg.grid(p.dim(), lambda)?;
        for prof in profiles {
            let tail = truncation_tail(&grid, |x| prof.eval(x).powi(2));
            if tail > TAIL_LIMIT {
                return Err(PencilError::Quadrature(format!(
                    "profile mass at the truncation radius {:.3e} is {tail:.3e} of the peak",
                    grid.truncation
                )));
            }
            let lhs = grid.integrate(|xi| {
                let x = norm(xi);
                (x.powf(s) * (x + lambda).powf(r - s) * prof.eval(xi)).powi(2)
            });
            let rhs = grid.integrate(|xi| {
                let x = norm(xi);
                let a = p.eval(xi, lambda).map(|z| z.norm()).unwrap_or(f64::NAN);
                (x.powf(s - 2.0 * mu) * (x + lambda).powf(r - s - 2.0 * m + 2.0 * mu) * a * prof.eval(xi))
                    .powi(2)
            });
            let (lhs, rhs) = (lhs.sqrt(), rhs.sqrt());
            rows.push(RatioRow {
                param: lambda,
                lhs,
                rhs_components: vec![rhs],
                rhs,
                ratio: lhs / rhs,
            });
        }
    }
    Ok(RatioTable {
        label: "wholespace".into(),
        component_names: vec!["symbol".into()],
        rows,
    })
}

/// Per-node half-line solutions `Σ_j ĝ_j(ξ′) w_j(·, ξ′, λ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceSolution {
    pub lambda: f64,
    pub grid: SpectralGrid,
    /// `None` where all data vanish.
    pub nodes: Vec<Option<ExpPolySolution>>,
}

pub fn halfspace_solution(
    p: &OperatorPencil,
    b: &BoundarySet,
    data: &BoundaryDataSpec,
    lambda: f64,
    grid: &SpectralGrid,
) -> Result<HalfspaceSolution> {
    if grid.dim + 1 != p.dim() {
        return Err(PencilError::input(format!(
            "tangential grid has dimension {} for n = {}",
            grid.dim,
            p.dim()
        )));
    }
    if data.profiles.len() != p.m() {
        return Err(PencilError::input("need one data profile per boundary operator"));
    }
    let nodes: Vec<Result<Option<ExpPolySolution>>> = grid
        .nodes
        .par_iter()
        .map(|xi| {
            let h = data.values(xi);
            if h.iter().all(|v| *v == ZERO) {
                return Ok(None);
            }
            solve_bvp(p, b, xi, lambda, &h)
                .map(Some)
                .map_err(|e| PencilError::AtNode {
                    node: xi.clone(),
                    source: Box::new(e),
                })
        })
        .collect();
    Ok(HalfspaceSolution {
        lambda,
        grid: grid.clone(),
        nodes: nodes.into_iter().collect::<Result<_>>()?,
    })
}

/// Squared contributions of the weighted seminorm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeminormParts {
    /// `∫ (Φ^{(−l)})² ‖D_n^l v‖² dξ′` for `l = 0..=r`.
    pub phi_terms: Vec<f64>,
    /// `‖v‖²_{L₂(ℝⁿ₊)}`.
    pub l2_sq: f64,
    /// `√Σ phi_terms`.
    pub seminorm: f64,
    /// `seminorm + scale · ‖v‖_{L₂}`.
    pub total: f64,
}

fn seminorm_with(
    v: &HalfspaceSolution,
    r: usize,
    phi: impl Fn(usize, f64) -> f64 + Sync,
    l2_scale: f64,
) -> SeminormParts {
    let per_node: Vec<Vec<f64>> = v
        .nodes
        .par_iter()
        .zip(&v.grid.nodes)
        .map(|(sol, xi)| match sol {
            None => vec![0.0; r + 2],
            Some(w) => {
                let x = norm(xi);
                let mut out: Vec<f64> = (0..=r)
                    .map(|l| (phi(l, x) * deriv_l2_norm(w, l)).powi(2))
                    .collect();
                out.push(deriv_l2_norm(w, 0).powi(2));
                out
            }
        })
        .collect();
    let column = |k: usize| {
        let vals: Vec<f64> = per_node.iter().map(|row| row[k]).collect();
        v.grid.sum_values(&vals)
    };
    let phi_terms: Vec<f64> = (0..=r).map(column).collect();
    let l2_sq = column(r + 1);
    let seminorm = phi_terms.iter().sum::<f64>().sqrt();
    SeminormParts {
        seminorm,
        total: seminorm + l2_scale * l2_sq.sqrt(),
        phi_terms,
        l2_sq,
    }
}

/// The anisotropic half-space norm of `v`: the `Φ^{(−l)}`-weighted seminorm
/// plus `λ^{r−s}‖v‖_{L₂}`.
pub fn lhs_seminorm(v: &HalfspaceSolution, w: &WeightSpec, lambda: f64) -> SeminormParts {
    let r = w.r.round() as usize;
    seminorm_with(v, r, |l, x| w.shifted_phi(l as f64, x, lambda), lambda.powf(w.r - w.s))
}

fn boundary_norms(
    grid: &SpectralGrid,
    data: &BoundaryDataSpec,
    orders: &[usize],
    weight: impl Fn(f64, f64) -> f64 + Sync,
) -> Vec<f64> {
    data.profiles
        .iter()
        .zip(orders)
        .map(|(prof, &mj)| match prof {
            None => 0.0,
            Some(pr) => grid
                .integrate(|xi| (weight(mj as f64 + 0.5, norm(xi)) * pr.eval(xi)).powi(2))
                .sqrt(),
        })
        .collect()
}

/// Half-space a priori estimate for `A v = 0`, `B_j v = g_j` over a ladder of `λ`.
///
/// `lhs = ‖v‖_Φ + λ^{r−s}‖v‖_{L₂}` and
/// `rhs = Σ_j ‖g_j‖_{Ξ^{(−m_j−1/2)}} + λ^{r−s}‖v‖_{L₂}`.
pub fn apriori_ratio(
    p: &OperatorPencil,
    b: &BoundarySet,
    w: &WeightSpec,
    data: &BoundaryDataSpec,
    lambdas: &[f64],
    grid_cfg: &GridConfig,
) -> Result<RatioTable> {
    let orders = b.orders();
    let mut rows = Vec::new();
    for &lambda in lambdas {
        let grid = grid_cfg.grid(p.dim() - 1, lambda)?;
        let v = halfspace_solution(p, b, data, lambda, &grid)?;
        let lhs = lhs_seminorm(&v, w, lambda);
        let mut comps = boundary_norms(&grid, data, &orders, |l, x| w.shifted_weight(l, x, lambda));
        comps.push(lambda.powf(w.r - w.s) * lhs.l2_sq.sqrt());
        let rhs: f64 = comps.iter().sum();
        rows.push(RatioRow {
            param: lambda,
            lhs: lhs.total,
            rhs_components: comps,
            rhs,
            ratio: lhs.total / rhs,
        });
    }
    Ok(RatioTable {
        label: "apriori".into(),
        component_names: component_names(b.len()),
        rows,
    })
}

fn component_names(m: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..=m).map(|j| format!("g{j}")).collect();
    names.push("l2".into());
    names
}

/// ε-form estimate computed natively: half-line solves from the ε-form symbol,
/// `Ξ_ε` and `Φ_ε` weights, the `ε^{m_j+1/2−s}` prefactors for `j > μ`, and
/// the unweighted `L₂` term.
pub fn eps_apriori(
    pe: &EpsilonPencil,
    b: &BoundarySet,
    w: &WeightSpec,
    data: &BoundaryDataSpec,
    eps_ladder: &[f64],
    grid_cfg: &GridConfig,
) -> Result<RatioTable> {
    let orders = b.orders();
    let principal = pe.principal();
    let r = w.r.round() as usize;
    let mut rows = Vec::new();
    for &eps in eps_ladder {
        if !(eps > 0.0) {
            return Err(PencilError::input(format!("ε must be positive, got {eps}")));
        }
        let grid = grid_cfg.grid(pe.dim() - 1, 1.0 / eps)?;
        let nodes: Vec<Result<Option<ExpPolySolution>>> = grid
            .nodes
            .par_iter()
            .map(|xi| {
                let h = data.values(xi);
                if h.iter().all(|v| *v == ZERO) {
                    return Ok(None);
                }
                let solve = || {
                    let a = principal.restrict_to_normal(xi, eps)?;
                    let rows = b.restricted_principal(xi)?;
                    solve_symbol(&a, pe.m(), &rows, &h)
                };
                solve().map(Some).map_err(|e| PencilError::AtNode {
                    node: xi.clone(),
                    source: Box::new(e),
                })
            })
            .collect();
        let v = HalfspaceSolution {
            lambda: 1.0 / eps,
            grid: grid.clone(),
            nodes: nodes.into_iter().collect::<Result<_>>()?,
        };
        let phi = |l: usize, x: f64| w.epsilon_shifted_phi(eps, l as f64, x).unwrap_or(f64::NAN);
        let lhs = seminorm_with(&v, r, phi, 1.0);
        let mut comps = boundary_norms(&grid, data, &orders, |l, x| {
            w.epsilon_shifted_weight(eps, l, x).unwrap_or(f64::NAN)
        });
        for (j, c) in comps.iter_mut().enumerate() {
            if j >= pe.mu() {
                *c *= eps.powf(orders[j] as f64 + 0.5 - w.s);
            }
        }
        comps.push(lhs.l2_sq.sqrt());
        let rhs: f64 = comps.iter().sum();
        rows.push(RatioRow {
            param: eps,
            lhs: lhs.total,
            rhs_components: comps,
            rhs,
            ratio: lhs.total / rhs,
        });
    }
    Ok(RatioTable {
        label: "epsilon".into(),
        component_names: component_names(b.len()),
        rows,
    })
}

/// Outcome of the parametrix check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametrixReport {
    pub lambda: f64,
    /// `‖u₁‖_{(r,s)} / ‖f‖_{(r−2m, s−2μ)}`.
    pub boundedness_ratio: f64,
    /// `‖Tf‖_{(r−2m, s−2μ)} / ‖f‖_Θ`.
    pub residual_ratio: f64,
    /// `max |A u₁ − (1−ψ) f̂|` over the grid; zero up to rounding.
    pub identity_defect: f64,
    /// `2^{2μ}/margin`, the pointwise bound for `boundedness_ratio`.
    pub bound: f64,
    pub margin: f64,
}

/// `u₁ = (1−ψ) f̂ / A` with `T f = A u₁ − f̂ = −ψ f̂`.
pub fn parametrix_p0(
    p: &OperatorPencil,
    w: &WeightSpec,
    f: &Profile,
    lambda: f64,
    grid_cfg: &GridConfig,
) -> Result<ParametrixReport> {
    if !(lambda > 0.0) {
        return Err(PencilError::input("the parametrix needs λ > 0"));
    }
    let margin = interior_margin(p, 200).margin;
    if !(margin > 0.0) {
        return Err(PencilError::Guard("interior margin is zero".into()));
    }
    let (m, mu) = (p.m() as f64, p.mu() as f64);
    let (r, s) = (w.r, w.s);
    let grid = grid_cfg.grid(p.dim(), lambda)?;
    let low = WeightSpec::new(r - 2.0 * m, s - 2.0 * mu);
    struct Node {
        u1: f64,
        t: f64,
        f: f64,
        defect: f64,
        guard: bool,
    }
    let vals: Vec<Node> = grid
        .nodes
        .par_iter()
        .map(|xi| {
            let x = norm(xi);
            let fh = f.eval(xi);
            let psi = cutoff(x);
            let a = p.eval(xi, lambda).unwrap_or(ZERO);
            let den = x.powf(2.0 * mu) * (lambda + x).powf(2.0 * m - 2.0 * mu);
            let guard = psi >= 1.0 || a.norm() >= 0.5 * margin * den;
            let u1 = if psi >= 1.0 { ZERO } else { Complex64::new((1.0 - psi) * fh, 0.0) / a };
            let tf = a * u1 - fh;
            Node {
                u1: u1.norm(),
                t: tf.norm(),
                f: fh,
                defect: (tf + psi * fh).norm(),
                guard,
            }
        })
        .collect();
    if let Some((k, _)) = vals.iter().enumerate().find(|(_, v)| !v.guard) {
        return Err(PencilError::Guard(format!(
            "|A| below margin/2 times the weight at ξ = {:?}",
            grid.nodes[k]
        )));
    }
    let sum = |g: &dyn Fn(&Node, f64) -> f64| {
        let v: Vec<f64> = vals
            .iter()
            .zip(&grid.nodes)
            .map(|(n, xi)| g(n, norm(xi)))
            .collect();
        grid.sum_values(&v).sqrt()
    };
    let u1_norm = sum(&|n, x| (w.weight_equiv(x, lambda) * n.u1).powi(2));
    let f_low = sum(&|n, x| (low.weight_equiv(x, lambda) * n.f).powi(2));
    let t_low = sum(&|n, x| (low.weight_equiv(x, lambda) * n.t).powi(2));
    let f_theta = sum(&|n, x| (w.theta_weight(p.m(), p.mu(), x, lambda) * n.f).powi(2));
    Ok(ParametrixReport {
        lambda,
        boundedness_ratio: u1_norm / f_low,
        residual_ratio: t_low / f_theta,
        identity_defect: vals.iter().map(|v| v.defect).fold(0.0, f64::max),
        bound: 4f64.powf(mu) / margin,
        margin,
    })
}

/// Largest relative gap between `p(ξ) ρ^{−n} û(ξ/ρ)` and
/// `ρ^{−n} p_ρ(ξ/ρ) û(ξ/ρ)`, where `p_ρ` is [`MultiPoly::scale_symbol`].
pub fn scaling_identity_test(
    p: &MultiPoly,
    u: &Profile,
    rhos: &[f64],
    grid: &SpectralGrid,
) -> Result<f64> {
    let n = p.dim() as i32;
    let mut worst: f64 = 0.0;
    for &rho in rhos {
        let p_rho = p.scale_symbol(rho)?;
        let pairs: Vec<Result<(f64, f64)>> = grid
            .nodes
            .par_iter()
            .map(|xi| {
                let shrunk: Vec<f64> = xi.iter().map(|v| v / rho).collect();
                let uh = rho.powi(-n) * u.eval(&shrunk);
                let lhs = p.eval_real(xi)? * uh;
                let rhs = p_rho.eval_real(&shrunk)? * uh;
                Ok(((lhs - rhs).norm(), lhs.norm()))
            })
            .collect();
        let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
        let scale = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
        let gap = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
        if scale > 0.0 {
            worst = worst.max(gap / scale);
        }
    }
    Ok(worst)
}
