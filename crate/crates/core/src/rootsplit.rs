//! Root finding for the normal-direction polynomials, half-plane splitting,
//! the factors `A₊`, `Q` and `Q₊`, and the two-group root asymptotics.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{PencilError, Result};
use crate::symbols::{OperatorPencil, UniPoly};
use crate::Verdict;

/// Default relative backward-error tolerance for [`find_roots`].
pub const DEFAULT_ROOT_TOL: f64 = 1e-8;
/// Default clustering radius relative to the root-magnitude scale.
pub const DEFAULT_CLUSTER_RADIUS: f64 = 1e-6;
/// Default near-real threshold relative to each root's modulus.
pub const DEFAULT_IMAG_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Roots with multiplicities and the backward error of the factorization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    pub backward_error: f64,
}

impl RootSet {
    pub fn empty() -> Self {
        RootSet {
            roots: Vec::new(),
            backward_error: 0.0,
        }
    }

    /// Sum of multiplicities.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Each root repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat(r.value).take(r.multiplicity))
            .collect()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).max().unwrap_or(0)
    }

    /// Largest root modulus, or 1 when every root is zero.
    pub fn magnitude_scale(&self) -> f64 {
        let s = self.roots.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    }

    /// Monic `Π (τ − z)^mult`.
    pub fn to_poly(&self) -> UniPoly {
        let pairs: Vec<(Complex64, usize)> =
            self.roots.iter().map(|r| (r.value, r.multiplicity)).collect();
        UniPoly::from_roots(&pairs)
    }

    fn subset(&self, keep: impl Fn(&Root) -> bool) -> RootSet {
        RootSet {
            roots: self.roots.iter().copied().filter(|r| keep(r)).collect(),
            backward_error: self.backward_error,
        }
    }
}

/// Knobs for [`find_roots_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    pub tol: f64,
    pub cluster_radius: f64,
    pub polish_iterations: usize,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            tol: DEFAULT_ROOT_TOL,
            cluster_radius: DEFAULT_CLUSTER_RADIUS,
            polish_iterations: 8,
        }
    }
}

/// All roots of `p` with multiplicities.
///
/// Companion-matrix eigenvalues of the rescaled monic polynomial, Newton
/// polishing of simple roots on the original coefficients, then clustering.
pub fn find_roots(p: &UniPoly, tol: f64) -> Result<RootSet> {
    find_roots_with(
        p,
        &RootConfig {
            tol,
            ..RootConfig::default()
        },
    )
}

pub fn find_roots_with(p: &UniPoly, cfg: &RootConfig) -> Result<RootSet> {
    let degree = match p.degree() {
        None => return Err(PencilError::input("cannot find roots of the zero polynomial")),
        Some(0) => return Err(PencilError::input("constant polynomial has no roots")),
        Some(d) => d,
    };
    let monic = p.monic()?;

    // exact zero roots come off first
    let zero_mult = monic.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let deflated = UniPoly::new(monic.coeffs()[zero_mult..].to_vec());
    let mut roots: Vec<Root> = Vec::new();
    if zero_mult > 0 {
        roots.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zero_mult,
        });
    }

    let sigma = fujiwara_bound(&deflated);
    let scaled = if deflated.degree().unwrap_or(0) > 0 {
        let q = deflated.compose_scale(Complex64::new(sigma, 0.0));
        Some(q.monic()?)
    } else {
        None
    };

    if let Some(q) = &scaled {
        let raw = two_sided_eigenvalues(q)?;
        let polished: Vec<Complex64> = raw
            .iter()
            .map(|&z| polish(q, z, cfg.polish_iterations))
            .collect();
        let clusters = cluster(q, &raw, &polished, cfg.cluster_radius);
        roots.extend(clusters.into_iter().map(|(z, k)| Root {
            value: z * sigma,
            multiplicity: k,
        }));
    }

    roots.sort_by(|a, b| {
        (a.value.im, a.value.re)
            .partial_cmp(&(b.value.im, b.value.re))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let mut set = RootSet {
        roots,
        backward_error: 0.0,
    };
    debug_assert_eq!(set.count(), degree);
    set.backward_error = backward_error(&monic, &set, sigma);
    if !(set.backward_error <= cfg.tol) {
        return Err(PencilError::IllConditioned {
            backward_error: set.backward_error,
            tol: cfg.tol,
            partial: Box::new(set),
        });
    }
    Ok(set)
}

fn fujiwara_bound(monic: &UniPoly) -> f64 {
    let d = match monic.degree() {
        Some(d) if d > 0 => d,
        _ => return 1.0,
    };
    let c = monic.coeffs();
    let mut b: f64 = 0.0;
    for k in 1..=d {
        let a = c[d - k].norm();
        let term = if k == d { (a / 2.0).powf(1.0 / k as f64) } else { a.powf(1.0 / k as f64) };
        b = b.max(term);
    }
    if b > 0.0 && b.is_finite() {
        2.0 * b
    } else {
        1.0
    }
}

/// Companion eigenvalues are accurate relative to the largest root only, so
/// roots inside the unit disk are taken from the reversed polynomial, whose
/// roots are their reciprocals. Needs `q(0) ≠ 0`.
fn two_sided_eigenvalues(q: &UniPoly) -> Result<Vec<Complex64>> {
    let d = q.degree().unwrap_or(0);
    let mut outer = companion_eigenvalues(q)?;
    let reversed = UniPoly::new(q.coeffs().iter().rev().copied().collect()).monic()?;
    let mut inner: Vec<Complex64> = companion_eigenvalues(&reversed)?
        .into_iter()
        .map(|w| w.inv())
        .filter(|z| z.norm() < 1.0)
        .collect();
    let by_modulus = |a: &Complex64, b: &Complex64| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    inner.sort_by(by_modulus);
    outer.sort_by(by_modulus);
    inner.truncate(d);
    let keep = d - inner.len();
    inner.extend(outer.split_off(d - keep));
    Ok(inner)
}

/// Eigenvalues of the companion matrix. Exactly symmetric root configurations
/// (such as `(τ² + 1)²`) can stall the QR shifts, so on non-convergence the
/// variable is rotated, `τ = e^{iφ} w`, and the rotated roots are mapped back.
fn companion_eigenvalues(monic: &UniPoly) -> Result<Vec<Complex64>> {
    let d = monic.degree().unwrap_or(0);
    if d == 1 {
        return Ok(vec![-monic.coeff(0)]);
    }
    for phi in [0.0, 0.37, 1.13, 2.71] {
        let rot = Complex64::from_polar(1.0, phi);
        let mut c = DMatrix::<Complex64>::zeros(d, d);
        for k in 1..d {
            c[(k, k - 1)] = Complex64::new(1.0, 0.0);
        }
        for k in 0..d {
            c[(k, d - 1)] = -monic.coeff(k) * rot.powi(k as i32 - d as i32);
        }
        if let Some(ev) = c.try_schur(f64::EPSILON, 2000).and_then(|s| s.eigenvalues()) {
            return Ok(ev.iter().map(|w| w * rot).collect());
        }
    }
    Err(PencilError::IllConditioned {
        backward_error: f64::INFINITY,
        tol: DEFAULT_ROOT_TOL,
        partial: Box::new(RootSet::empty()),
    })
}

fn polish(p: &UniPoly, z0: Complex64, iterations: usize) -> Complex64 {
    let dp = p.derivative();
    let mut z = z0;
    let mut fz = p.eval(z).norm();
    for _ in 0..iterations {
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let cand = z - p.eval(z) / d;
        let fc = p.eval(cand).norm();
        if !(fc < fz) {
            break;
        }
        z = cand;
        fz = fc;
    }
    z
}

/// Groups nearby roots. `raw` are the eigenvalues and `polished` their
/// Newton-refined versions; multiple roots keep the mean of the raw values.
///
/// A `k`-fold root spreads its eigenvalues by about `eps^{1/k}`, so groups are
/// linked at radii `max(radius, 50 eps^{1/k})` for growing `k`. A linked
/// component is merged only when its mean is a root to working precision,
/// which keeps distinct close roots apart.
fn cluster(
    q: &UniPoly,
    raw: &[Complex64],
    polished: &[Complex64],
    radius: f64,
) -> Vec<(Complex64, usize)> {
    let n = raw.len();
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let allowed = |k: usize| radius.max(50.0 * f64::EPSILON.powf(1.0 / k as f64));
    let noise = |c: Complex64| {
        q.coeffs()
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm() * c.norm().powi(i as i32))
            .sum::<f64>()
            * 1e3
            * f64::EPSILON
    };
    for k in 2..=n.max(2) {
        let link = allowed(k);
        let means: Vec<Complex64> = groups.iter().map(|g| mean(raw, g)).collect();
        let mut label: Vec<usize> = (0..groups.len()).collect();
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                if (means[i] - means[j]).norm() <= link {
                    let (a, b) = (label[i], label[j]);
                    label.iter_mut().filter(|l| **l == b).for_each(|l| *l = a);
                }
            }
        }
        let mut next: Vec<Vec<usize>> = Vec::new();
        let mut seen = vec![false; groups.len()];
        for i in 0..groups.len() {
            if seen[i] {
                continue;
            }
            let members: Vec<usize> = (i..groups.len()).filter(|&j| label[j] == label[i]).collect();
            members.iter().for_each(|&j| seen[j] = true);
            if members.len() == 1 {
                next.push(groups[i].clone());
                continue;
            }
            let merged: Vec<usize> = members.iter().flat_map(|&j| groups[j].iter().copied()).collect();
            let c = mean(raw, &merged);
            let spread = merged.iter().map(|&i| (raw[i] - c).norm()).fold(0.0, f64::max);
            if spread <= allowed(merged.len()) && q.eval(c).norm() <= noise(c) {
                next.push(merged);
            } else {
                next.extend(members.iter().map(|&j| groups[j].clone()));
            }
        }
        groups = next;
    }

    groups
        .into_iter()
        .map(|g| {
            if g.len() == 1 {
                (polished[g[0]], 1)
            } else {
                (mean(raw, &g), g.len())
            }
        })
        .collect()
}

fn mean(z: &[Complex64], idx: &[usize]) -> Complex64 {
    idx.iter().map(|&i| z[i]).sum::<Complex64>() / idx.len() as f64
}

/// Relative coefficient mismatch of the reconstructed factorization, measured
/// in the rescaled variable `τ = σ z` where roots are of unit size.
fn backward_error(monic: &UniPoly, roots: &RootSet, sigma: f64) -> f64 {
    let s = Complex64::new(sigma, 0.0);
    let target = monic.compose_scale(s);
    let rebuilt = roots.to_poly().compose_scale(s);
    let lead = target.leading().unwrap_or(Complex64::new(1.0, 0.0));
    let diff = (&target.scale(lead.inv()) - &rebuilt.scale(lead.inv())).coeff_scale();
    diff / target.scale(lead.inv()).coeff_scale().max(1.0)
}

/// Partition of a root set by the sign of the imaginary part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneSplit {
    pub upper: RootSet,
    pub lower: RootSet,
    pub near_real: RootSet,
    pub imag_tol: f64,
    /// Whether `imag_tol` is measured relative to each root's modulus.
    pub relative: bool,
}

impl HalfPlaneSplit {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.upper.count(), self.lower.count(), self.near_real.count())
    }
}

pub fn split_half_planes(rs: &RootSet, imag_tol: f64) -> HalfPlaneSplit {
    HalfPlaneSplit {
        upper: rs.subset(|r| r.value.im > imag_tol),
        lower: rs.subset(|r| r.value.im < -imag_tol),
        near_real: rs.subset(|r| r.value.im.abs() <= imag_tol),
        imag_tol,
        relative: false,
    }
}

/// Splits with the threshold `|Im z| ≤ rel_tol · |z|` per root. Small roots
/// are computed to relative accuracy, so their own modulus is the scale.
pub fn split_relative(rs: &RootSet, rel_tol: f64) -> HalfPlaneSplit {
    let near = |r: &Root| r.value.im.abs() <= rel_tol * r.value.norm();
    HalfPlaneSplit {
        upper: rs.subset(|r| !near(r) && r.value.im > 0.0),
        lower: rs.subset(|r| !near(r) && r.value.im < 0.0),
        near_real: rs.subset(near),
        imag_tol: rel_tol,
        relative: true,
    }
}

/// Splits with the default relative threshold `1e-9`.
pub fn split_default(rs: &RootSet) -> HalfPlaneSplit {
    split_relative(rs, DEFAULT_IMAG_TOL)
}

fn require_no_near_real(split: &HalfPlaneSplit, what: &str) -> Result<()> {
    if split.near_real.count() > 0 {
        return Err(PencilError::NearRealRoot {
            imag_tol: split.imag_tol,
            relative: split.relative,
            detail: format!("{what}: {:?}", split.near_real.expanded()),
        });
    }
    Ok(())
}

/// Upper-half-plane roots of `A⁽⁰⁾(ξ′, ·, λ)`; there must be exactly `m`.
pub fn upper_roots(pencil: &OperatorPencil, xi_tan: &[f64], lambda: f64) -> Result<RootSet> {
    if xi_tan.iter().all(|&x| x == 0.0) {
        return Err(PencilError::input("tangential frequency must be nonzero"));
    }
    if lambda < 0.0 {
        return Err(PencilError::input(format!("the parameter must be non-negative, got {lambda}")));
    }
    let poly = pencil.principal().restrict_to_normal(xi_tan, lambda)?;
    upper_roots_of(&poly, pencil.m(), "A(ξ′, ·, λ)")
}

pub(crate) fn upper_roots_of(poly: &UniPoly, expected: usize, what: &str) -> Result<RootSet> {
    let roots = find_roots(poly, DEFAULT_ROOT_TOL)?;
    let split = split_default(&roots);
    require_no_near_real(&split, what)?;
    if split.upper.count() != expected {
        return Err(PencilError::WrongRootCount {
            expected,
            found: split.upper.count(),
        });
    }
    Ok(split.upper)
}

/// Monic `A₊(ξ′, τ, λ) = Π (τ − τ_j)` over the upper roots.
pub fn a_plus_factor(pencil: &OperatorPencil, xi_tan: &[f64], lambda: f64) -> Result<UniPoly> {
    Ok(upper_roots(pencil, xi_tan, lambda)?.to_poly())
}

/// `Q(τ) = τ^{−2μ} A⁽⁰⁾(0, …, 0, τ, 1)`.
pub fn q_polynomial(pencil: &OperatorPencil) -> Result<UniPoly> {
    let principal = pencil.principal();
    let origin = vec![0.0; pencil.dim().saturating_sub(1)];
    let full = principal.restrict_to_normal(&origin, 1.0)?;
    let two_mu = 2 * pencil.mu();
    let scale = full.coeff_scale();
    if scale == 0.0 {
        return Err(PencilError::Structural(
            "A(0, τ, 1) vanishes identically".into(),
        ));
    }
    for k in 0..two_mu {
        if full.coeff(k).norm() > 1e-12 * scale {
            return Err(PencilError::Structural(format!(
                "A(0, τ, 1) is not divisible by τ^{two_mu}: coefficient of τ^{k} is {}",
                full.coeff(k)
            )));
        }
    }
    let q = UniPoly::new(full.coeffs().get(two_mu..).unwrap_or(&[]).to_vec());
    if q.coeff(0).norm() <= 1e-12 * scale {
        return Err(PencilError::Structural(format!(
            "A(0, τ, 1) vanishes to order above {two_mu} at τ = 0 (the normal coefficient of A_2mu is zero)"
        )));
    }
    if q.degree() != Some(2 * (pencil.m() - pencil.mu())) {
        return Err(PencilError::Structural(format!(
            "Q has degree {:?}, expected {}",
            q.degree(),
            2 * (pencil.m() - pencil.mu())
        )));
    }
    Ok(q)
}

/// `Q₊` and the regular-degeneration verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QPlus {
    pub poly: UniPoly,
    pub roots: RootSet,
    pub upper_count: usize,
    pub expected: usize,
    /// Largest multiplicity among all roots of `Q`.
    pub k1: usize,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

pub fn q_plus(q: &UniPoly, pencil: &OperatorPencil) -> Result<QPlus> {
    let roots = find_roots(q, DEFAULT_ROOT_TOL)?;
    let split = split_default(&roots);
    let expected = pencil.m() - pencil.mu();
    let upper_count = split.upper.count();
    let mut diagnostics = Vec::new();
    if split.near_real.count() > 0 {
        diagnostics.push(format!(
            "roots of Q within relative {:.3e} of the real axis: {:?}",
            split.imag_tol,
            split.near_real.expanded()
        ));
    }
    let verdict = if upper_count != expected {
        diagnostics.push(format!(
            "Q has {upper_count} roots in the upper half-plane, expected {expected}"
        ));
        Verdict::Fail
    } else if split.near_real.count() > 0 {
        Verdict::Indeterminate
    } else {
        Verdict::Pass
    };
    Ok(QPlus {
        poly: split.upper.to_poly(),
        k1: roots.max_multiplicity(),
        roots: split.upper,
        upper_count,
        expected,
        verdict,
        diagnostics,
    })
}

/// Root groups at one parameter value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootGroups {
    pub lambda: f64,
    /// `μ` roots staying near the upper roots of `A_{2μ}(ξ′, ·)`.
    pub bounded_group: Vec<Complex64>,
    /// `m − μ` roots growing like `λ τ¹_j`, ordered like `limits`.
    pub large_group: Vec<Complex64>,
    pub k1: usize,
    /// Distance between the bounded group and its limit set.
    pub bounded_distance: f64,
    /// `max_j |τ_j/λ − τ¹_j|`.
    pub normalized_correction: f64,
    /// `max_j |τ_j − λ τ¹_j|`.
    pub absolute_correction: f64,
    /// `|τ_j/λ − τ¹_j| λ^{1/k₁}` per large root.
    pub correction_bounds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootGroupReport {
    pub xi_tan: Vec<f64>,
    pub limit_set: Vec<Complex64>,
    pub limits: Vec<Complex64>,
    pub k1: usize,
    pub groups: Vec<RootGroups>,
    /// `max_λ max_j |τ_j/λ − τ¹_j| λ^{1/k₁}`.
    pub fitted_constant: f64,
    /// Least-squares slope of `log normalized_correction` against `log λ`.
    pub normalized_exponent: f64,
    /// Least-squares slope of `log absolute_correction` against `log λ`.
    pub absolute_exponent: f64,
}

pub fn verify_root_groups(
    pencil: &OperatorPencil,
    xi_tan: &[f64],
    lambda_ladder: &[f64],
) -> Result<RootGroupReport> {
    let norm = xi_tan.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(PencilError::input(format!("|ξ′| must be 1, got {norm}")));
    }
    if lambda_ladder.is_empty()
        || lambda_ladder.windows(2).any(|w| w[0] >= w[1])
        || lambda_ladder[0] < 1.0
    {
        return Err(PencilError::input(
            "the ladder must be increasing with smallest value >= 1",
        ));
    }
    let (m, mu) = (pencil.m(), pencil.mu());
    let principal = pencil.principal();
    let a_low = principal.part(2 * mu).restrict_to_normal(xi_tan)?;
    let limit_set = upper_roots_of(&a_low, mu, "A_2mu(ξ′, ·)")?.expanded();
    let q = q_polynomial(pencil)?;
    let qp = q_plus(&q, pencil)?;
    if qp.verdict != Verdict::Pass {
        return Err(PencilError::Structural(format!(
            "regular degeneration does not hold: {:?}",
            qp.diagnostics
        )));
    }
    let limits = qp.roots.expanded();
    let k1 = qp.k1.max(1);

    let mut groups = Vec::with_capacity(lambda_ladder.len());
    for &lambda in lambda_ladder {
        let roots = upper_roots(pencil, xi_tan, lambda)?.expanded();
        let mut bounded = Vec::new();
        let mut large = Vec::new();
        for &z in &roots {
            let d_b = min_dist(z, &limit_set, 1.0);
            let d_l = min_dist(z, &limits, lambda);
            if (d_b - d_l).abs() <= 1e-6 * d_b.max(d_l).max(1e-300) {
                return Err(PencilError::MatchingAmbiguity(format!(
                    "root {z} is equidistant from both groups at λ = {lambda}"
                )));
            }
            if d_b < d_l {
                bounded.push(z);
            } else {
                large.push(z);
            }
        }
        if bounded.len() != mu || large.len() != m - mu {
            return Err(PencilError::MatchingAmbiguity(format!(
                "group sizes {} + {} at λ = {lambda}, expected {mu} + {}",
                bounded.len(),
                large.len(),
                m - mu
            )));
        }
        let large = best_assignment(&large, &limits, lambda);
        let bounded_distance = set_distance(&bounded, &limit_set);
        let normalized: Vec<f64> = large
            .iter()
            .zip(&limits)
            .map(|(&z, &t)| (z / lambda - t).norm())
            .collect();
        let absolute: Vec<f64> = large
            .iter()
            .zip(&limits)
            .map(|(&z, &t)| (z - t * lambda).norm())
            .collect();
        groups.push(RootGroups {
            lambda,
            bounded_group: bounded,
            large_group: large,
            k1,
            bounded_distance,
            normalized_correction: normalized.iter().copied().fold(0.0, f64::max),
            absolute_correction: absolute.iter().copied().fold(0.0, f64::max),
            correction_bounds: normalized
                .iter()
                .map(|c| c * lambda.powf(1.0 / k1 as f64))
                .collect(),
        });
    }
    let fitted_constant = groups
        .iter()
        .flat_map(|g| g.correction_bounds.iter().copied())
        .fold(0.0, f64::max);
    let lams: Vec<f64> = groups.iter().map(|g| g.lambda).collect();
    let normalized_exponent = loglog_slope(
        &lams,
        &groups.iter().map(|g| g.normalized_correction).collect::<Vec<_>>(),
    );
    let absolute_exponent = loglog_slope(
        &lams,
        &groups.iter().map(|g| g.absolute_correction).collect::<Vec<_>>(),
    );
    Ok(RootGroupReport {
        xi_tan: xi_tan.to_vec(),
        limit_set,
        limits,
        k1,
        groups,
        fitted_constant,
        normalized_exponent,
        absolute_exponent,
    })
}

fn min_dist(z: Complex64, targets: &[Complex64], scale: f64) -> f64 {
    targets
        .iter()
        .map(|&t| (z - t * scale).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Hausdorff distance between two finite sets.
fn set_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    let one = a.iter().map(|&z| min_dist(z, b, 1.0)).fold(0.0, f64::max);
    let two = b.iter().map(|&z| min_dist(z, a, 1.0)).fold(0.0, f64::max);
    one.max(two)
}

/// Reorders `roots` to minimize the largest `|τ − λ t|` against `limits`.
fn best_assignment(roots: &[Complex64], limits: &[Complex64], lambda: f64) -> Vec<Complex64> {
    let n = roots.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_cost = f64::INFINITY;
    permute(&mut perm, 0, &mut |p| {
        let cost = p
            .iter()
            .zip(limits)
            .map(|(&i, &t)| (roots[i] - t * lambda).norm())
            .fold(0.0, f64::max);
        if cost < best_cost {
            best_cost = cost;
            best = p.to_vec();
        }
    });
    best.into_iter().map(|i| roots[i]).collect()
}

fn permute(p: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        visit(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, visit);
        p.swap(k, i);
    }
}

/// Least-squares slope of `log y` against `log x` over positive samples.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(&a, &b)| a > 0.0 && b > 0.0 && b.is_finite())
        .map(|(&a, &b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn has_root(rs: &RootSet, z: Complex64, mult: usize, tol: f64) -> bool {
        rs.roots
            .iter()
            .any(|r| (r.value - z).norm() < tol && r.multiplicity == mult)
    }

    #[test]
    fn simple_pair() {
        let rs = find_roots(&UniPoly::from_real(&[1.0, 0.0, 1.0]), 1e-8).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert!(has_root(&rs, c(0.0, 1.0), 1, 1e-14));
        assert!(has_root(&rs, c(0.0, -1.0), 1, 1e-14));
    }

    #[test]
    fn quadruple_zero() {
        let rs = find_roots(&UniPoly::monomial(4, c(1.0, 0.0)), 1e-8).unwrap();
        assert_eq!(rs.roots, vec![Root { value: c(0.0, 0.0), multiplicity: 4 }]);
    }

    #[test]
    fn planted_double_root() {
        let p = UniPoly::from_roots(&[(c(0.0, 1.0), 2), (c(0.0, -2.0), 1)]);
        let rs = find_roots(&p, 1e-8).unwrap();
        assert_eq!(rs.roots.len(), 2);
        assert!(has_root(&rs, c(0.0, 1.0), 2, 1e-7));
        assert!(has_root(&rs, c(0.0, -2.0), 1, 1e-12));
    }

    #[test]
    fn planted_triple_root() {
        let p = UniPoly::from_roots(&[(c(0.5, 1.0), 3), (c(-1.0, -0.3), 1)]);
        let rs = find_roots(&p, 1e-8).unwrap();
        assert!(has_root(&rs, c(0.5, 1.0), 3, 1e-6), "{rs:?}");
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(find_roots(&UniPoly::zero(), 1e-8), Err(PencilError::Input(_))));
        assert!(find_roots(&UniPoly::one(), 1e-8).is_err());
    }

    #[test]
    fn split_examples() {
        let rs = RootSet {
            roots: vec![
                Root { value: c(0.0, 1.0), multiplicity: 1 },
                Root { value: c(0.0, -1.0), multiplicity: 1 },
            ],
            backward_error: 0.0,
        };
        let sp = split_half_planes(&rs, 1e-9);
        assert_eq!(sp.counts(), (1, 1, 0));
        let rs = RootSet {
            roots: vec![
                Root { value: c(0.0, 0.5), multiplicity: 1 },
                Root { value: c(0.0, 1e-14), multiplicity: 1 },
            ],
            backward_error: 0.0,
        };
        let sp = split_half_planes(&rs, 1e-9);
        assert_eq!(sp.counts(), (1, 0, 1));
    }

    #[test]
    fn ex1_split_at_sqrt3() {
        let p = fixtures::ex1();
        let poly = p.pencil.restrict_to_normal(&[1.0], 3f64.sqrt()).unwrap();
        let sp = split_default(&find_roots(&poly, 1e-8).unwrap());
        assert_eq!(sp.counts(), (2, 2, 0));
        assert!(has_root(&sp.upper, c(0.0, 1.0), 1, 1e-12));
        assert!(has_root(&sp.upper, c(0.0, 2.0), 1, 1e-12));
    }

    #[test]
    fn a_plus_examples() {
        let p = fixtures::ex1();
        let ap = a_plus_factor(&p.pencil, &[1.0], 3f64.sqrt()).unwrap();
        let expect = [c(-2.0, 0.0), c(0.0, -3.0), c(1.0, 0.0)];
        for (a, b) in ap.coeffs().iter().zip(expect) {
            assert!((a - b).norm() < 1e-12);
        }
        let ap0 = a_plus_factor(&p.pencil, &[1.0], 0.0).unwrap();
        let expect = [c(-1.0, 0.0), c(0.0, -2.0), c(1.0, 0.0)];
        for (a, b) in ap0.coeffs().iter().zip(expect) {
            assert!((a - b).norm() < 1e-7, "{ap0}");
        }
        assert!(matches!(a_plus_factor(&p.pencil, &[0.0], 1.0), Err(PencilError::Input(_))));
    }

    #[test]
    fn q_examples() {
        let p = fixtures::ex1();
        assert_eq!(q_polynomial(&p.pencil).unwrap(), UniPoly::from_real(&[1.0, 0.0, 1.0]));
        let qp = q_plus(&q_polynomial(&p.pencil).unwrap(), &p.pencil).unwrap();
        assert_eq!(qp.verdict, Verdict::Pass);
        assert_eq!(qp.upper_count, 1);
        assert_eq!(qp.k1, 1);
        assert!((qp.poly.coeff(0) - c(0.0, -1.0)).norm() < 1e-14);

        let real = q_plus(&UniPoly::from_real(&[-1.0, 0.0, 1.0]), &p.pencil).unwrap();
        assert_eq!(real.verdict, Verdict::Fail);
        assert_eq!(real.upper_count, 0);

        let dbl = UniPoly::from_roots(&[(c(0.0, 1.0), 2)]);
        let qp = q_plus(&dbl, &p.pencil).unwrap();
        assert_eq!(qp.upper_count, 2);
        assert_eq!(qp.k1, 2);

        let tangential_a2 = fixtures::ex1_with_a2_tangential();
        assert!(matches!(q_polynomial(&tangential_a2), Err(PencilError::Structural(_))));
    }

    #[test]
    fn ex1_root_groups_at_ten() {
        let p = fixtures::ex1();
        let rep = verify_root_groups(&p.pencil, &[1.0], &[10.0]).unwrap();
        let g = &rep.groups[0];
        assert!((g.bounded_group[0] - c(0.0, 1.0)).norm() < 1e-12);
        assert!((g.large_group[0] - c(0.0, 101f64.sqrt())).norm() < 1e-10);
        assert!((g.normalized_correction - (101f64.sqrt() / 10.0 - 1.0)).abs() < 1e-12);
        assert!(g.bounded_distance < 1e-12);
        assert_eq!(rep.k1, 1);
    }

    #[test]
    fn root_group_preconditions() {
        let p = fixtures::ex1();
        assert!(verify_root_groups(&p.pencil, &[2.0], &[10.0]).is_err());
        assert!(verify_root_groups(&p.pencil, &[1.0], &[10.0, 5.0]).is_err());
        assert!(verify_root_groups(&p.pencil, &[1.0], &[0.5]).is_err());
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1.0, 10.0, 100.0];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-1.5)).collect();
        assert!((loglog_slope(&x, &y) + 1.5).abs() < 1e-12);
    }
}
