use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MultiPoly, UniPoly};
use crate::error::{PencilError, Result};

/// `A(ξ, λ) = Σ_{j=2μ}^{2m} λ^{2m−j} A_j(ξ)` with constant coefficients.
///
/// Parts absent from the map are zero. The constructor checks dimensions and
/// `deg A_j ≤ j`; the ordering constraint `m > μ > 0` is reported by
/// [`validate_problem`] instead of being enforced here.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorPencil {
    n: usize,
    m: usize,
    mu: usize,
    parts: BTreeMap<usize, MultiPoly>,
}

impl OperatorPencil {
    pub fn new(n: usize, m: usize, mu: usize, parts: BTreeMap<usize, MultiPoly>) -> Result<Self> {
        if mu > m {
            return Err(PencilError::input(format!("mu = {mu} exceeds m = {m}")));
        }
        for (&j, p) in &parts {
            if j < 2 * mu || j > 2 * m {
                return Err(PencilError::input(format!(
                    "part index {j} outside {}..={}",
                    2 * mu,
                    2 * m
                )));
            }
            if p.dim() != n {
                return Err(PencilError::input(format!(
                    "part {j} has dimension {} but n = {n}",
                    p.dim()
                )));
            }
            if p.degree().is_some_and(|d| d > j) {
                return Err(PencilError::input(format!(
                    "part {j} has degree {} > {j}",
                    p.degree().unwrap_or(0)
                )));
            }
        }
        let parts = parts.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        Ok(OperatorPencil { n, m, mu, parts })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    /// Order `2m` of the pencil.
    pub fn order(&self) -> usize {
        2 * self.m
    }

    pub fn part(&self, j: usize) -> MultiPoly {
        self.parts
            .get(&j)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(self.n))
    }

    pub fn parts(&self) -> &BTreeMap<usize, MultiPoly> {
        &self.parts
    }

    /// Keeps the degree-`j` homogeneous part of each `A_j`.
    pub fn principal(&self) -> OperatorPencil {
        OperatorPencil {
            n: self.n,
            m: self.m,
            mu: self.mu,
            parts: self
                .parts
                .iter()
                .map(|(&j, p)| (j, p.homogeneous_part(j)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }

    pub fn is_principal(&self) -> bool {
        self.parts.iter().all(|(&j, p)| p.is_homogeneous(j))
    }

    pub fn eval(&self, xi: &[f64], lambda: f64) -> Result<Complex64> {
        if lambda < 0.0 || lambda.is_nan() {
            return Err(PencilError::input(format!(
                "the parameter must be non-negative, got {lambda}"
            )));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&j, p) in &self.parts {
            acc += p.eval_real(xi)? * lambda.powi((2 * self.m - j) as i32);
        }
        Ok(acc)
    }

    /// `τ ↦ A(ξ′, τ, λ)`.
    pub fn restrict_to_normal(&self, xi_tan: &[f64], lambda: f64) -> Result<UniPoly> {
        let mut acc = UniPoly::zero();
        for (&j, p) in &self.parts {
            let r = p.restrict_to_normal(xi_tan)?;
            acc = &acc + &r.scale(Complex64::new(lambda.powi((2 * self.m - j) as i32), 0.0));
        }
        Ok(acc)
    }
}

/// `A_ε(ξ) = Σ_{j=2μ}^{2m} ε^{j−2μ} A_j(ξ)`, the small-parameter form.
///
/// It shares its parts with the pencil `λ^{2m−2μ} A_{1/λ}`, which is why
/// [`from_epsilon`] and [`to_epsilon`] copy coefficients verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonPencil {
    n: usize,
    m: usize,
    mu: usize,
    parts: BTreeMap<usize, MultiPoly>,
}

impl EpsilonPencil {
    pub fn new(n: usize, m: usize, mu: usize, parts: BTreeMap<usize, MultiPoly>) -> Result<Self> {
        let p = OperatorPencil::new(n, m, mu, parts)?;
        Ok(to_epsilon(&p))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn eval(&self, xi: &[f64], eps: f64) -> Result<Complex64> {
        if !(eps > 0.0) {
            return Err(PencilError::input(format!("epsilon must be positive, got {eps}")));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&j, p) in &self.parts {
            acc += p.eval_real(xi)? * eps.powi((j - 2 * self.mu) as i32);
        }
        Ok(acc)
    }

    /// `τ ↦ A_ε(ξ′, τ)`.
    pub fn restrict_to_normal(&self, xi_tan: &[f64], eps: f64) -> Result<UniPoly> {
        let mut acc = UniPoly::zero();
        for (&j, p) in &self.parts {
            let r = p.restrict_to_normal(xi_tan)?;
            acc = &acc + &r.scale(Complex64::new(eps.powi((j - 2 * self.mu) as i32), 0.0));
        }
        Ok(acc)
    }

    pub fn principal(&self) -> EpsilonPencil {
        to_epsilon(&from_epsilon(self).principal())
    }
}

/// λ-form `A(ξ, λ) = λ^{2m−2μ} A_{1/λ}(ξ)`.
pub fn from_epsilon(p: &EpsilonPencil) -> OperatorPencil {
    OperatorPencil {
        n: p.n,
        m: p.m,
        mu: p.mu,
        parts: p.parts.clone(),
    }
}

/// Inverse of [`from_epsilon`].
pub fn to_epsilon(p: &OperatorPencil) -> EpsilonPencil {
    EpsilonPencil {
        n: p.n,
        m: p.m,
        mu: p.mu,
        parts: p.parts.clone(),
    }
}

/// A boundary operator `B_j(D)` of declared order `m_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryOperator {
    pub symbol: MultiPoly,
    pub order: usize,
}

impl BoundaryOperator {
    pub fn new(symbol: MultiPoly, order: usize) -> Self {
        BoundaryOperator { symbol, order }
    }

    /// Degree-`m_j` homogeneous part.
    pub fn principal(&self) -> MultiPoly {
        self.symbol.homogeneous_part(self.order)
    }
}

/// Ordered boundary operators `B_1, …, B_m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySet {
    ops: Vec<BoundaryOperator>,
}

impl BoundarySet {
    pub fn new(ops: Vec<BoundaryOperator>) -> Self {
        BoundarySet { ops }
    }

    pub fn ops(&self) -> &[BoundaryOperator] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.ops.iter().map(|b| b.order).collect()
    }

    /// Principal symbols restricted to the normal line at `ξ′`.
    pub fn restricted_principal(&self, xi_tan: &[f64]) -> Result<Vec<UniPoly>> {
        self.ops
            .iter()
            .map(|b| b.principal().restrict_to_normal(xi_tan))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleGroup {
    /// Shape of the pencil and the boundary operators.
    Structural,
    /// Index window for the a priori estimate.
    EstimateIndices,
    /// Extra index window used when the estimate is read as a necessity statement.
    Necessity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: String,
    pub group: RuleGroup,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rules: Vec<RuleCheck>,
}

impl ValidationReport {
    fn group_ok(&self, group: RuleGroup) -> bool {
        self.rules.iter().filter(|r| r.group == group).all(|r| r.passed)
    }

    pub fn structural_ok(&self) -> bool {
        self.group_ok(RuleGroup::Structural)
    }

    pub fn estimate_indices_ok(&self) -> bool {
        self.group_ok(RuleGroup::EstimateIndices)
    }

    pub fn necessity_ok(&self) -> bool {
        self.group_ok(RuleGroup::Necessity)
    }

    /// Rules that must hold before any check or estimate runs.
    pub fn mandatory_ok(&self) -> bool {
        self.structural_ok() && self.estimate_indices_ok()
    }

    pub fn failures(&self) -> impl Iterator<Item = &RuleCheck> {
        self.rules.iter().filter(|r| !r.passed)
    }

    pub fn rule(&self, name: &str) -> Option<&RuleCheck> {
        self.rules.iter().find(|r| r.rule == name)
    }
}

/// Checks every structural and index rule, collecting violations.
pub fn validate_problem(
    pencil: &OperatorPencil,
    boundary: &BoundarySet,
    r: i64,
    s: i64,
) -> ValidationReport {
    let (n, m, mu) = (pencil.dim(), pencil.m(), pencil.mu());
    let mut rules = Vec::new();
    let mut push = |rule: &str, group, passed, detail: String| {
        rules.push(RuleCheck {
            rule: rule.to_string(),
            group,
            passed,
            detail,
        })
    };
    use RuleGroup::*;

    push(
        "dimension",
        Structural,
        n >= 2 && boundary.ops().iter().all(|b| b.symbol.dim() == n),
        format!("n = {n}; half-space problems need n >= 2 and matching boundary symbols"),
    );
    push(
        "pencil-orders",
        Structural,
        m > mu && mu > 0,
        format!("m = {m}, mu = {mu}; need m > mu > 0"),
    );
    let elliptic_top = pencil
        .part(2 * m)
        .homogeneous_part(2 * m)
        .is_zero();
    push(
        "top-part",
        Structural,
        !elliptic_top,
        "A_2m must have a nonzero principal part".to_string(),
    );
    push(
        "boundary-count",
        Structural,
        boundary.len() == m,
        format!("{} boundary operators for m = {m}", boundary.len()),
    );
    let bad_deg: Vec<usize> = boundary
        .ops()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.symbol.degree().is_some_and(|d| d > b.order))
        .map(|(k, _)| k + 1)
        .collect();
    push(
        "boundary-degrees",
        Structural,
        bad_deg.is_empty(),
        format!("operators whose degree exceeds the declared order: {bad_deg:?}"),
    );
    let orders = boundary.orders();
    push(
        "boundary-ordering",
        Structural,
        orders.windows(2).all(|w| w[0] <= w[1]),
        format!("orders {orders:?} must be non-decreasing"),
    );

    let indexable = mu >= 1 && mu < orders.len();
    if indexable {
        let (m_mu, m_next) = (orders[mu - 1], orders[mu]);
        let m_top = *orders.last().unwrap_or(&0);
        push(
            "order-gap",
            Structural,
            m_mu < m_next,
            format!("m_mu = {m_mu}, m_(mu+1) = {m_next}; need m_mu < m_(mu+1)"),
        );
        push(
            "estimate-indices",
            EstimateIndices,
            r >= m_top as i64 + 1 && m_mu as i64 + 1 <= s && s <= m_next as i64,
            format!(
                "r = {r}, s = {s}; need r >= m_m + 1 = {} and {} <= s <= {}",
                m_top + 1,
                m_mu + 1,
                m_next
            ),
        );
    } else {
        push(
            "order-gap",
            Structural,
            false,
            "m_mu and m_(mu+1) are undefined for this mu and boundary count".to_string(),
        );
        push(
            "estimate-indices",
            EstimateIndices,
            false,
            "index window undefined without m_mu and m_(mu+1)".to_string(),
        );
    }
    let (mi, mui) = (m as i64, mu as i64);
    push(
        "necessity-indices",
        Necessity,
        r >= mi && mui <= s && s <= r - mi + mui,
        format!("r = {r}, s = {s}; need r >= m = {m} and {mu} <= s <= {}", r - mi + mui),
    );
    ValidationReport { rules }
}
