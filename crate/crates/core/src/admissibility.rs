//! Closed-form parameter conditions for local and global well-posedness,
//! the supercritical regime, and constructive `(s, p)` witnesses for the
//! three regularity cases.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Width of the band around a closed-form bound inside which the
/// constructive search and the formula are allowed to disagree.
pub const BOUNDARY_BAND: f64 = 1e-9;

/// Which discriminant enters the second argument of the Case 2 bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum G2Variant {
    /// `4α² − 35α + 54`, as printed in the bound itself.
    #[default]
    Printed,
    /// `4α² − 36α + 54`, as obtained by solving the quadratic in `γ + 1`.
    Derived,
}

impl G2Variant {
    fn discriminant(self, alpha: f64) -> f64 {
        match self {
            G2Variant::Printed => 4.0 * alpha * alpha - 35.0 * alpha + 54.0,
            G2Variant::Derived => 4.0 * alpha * alpha - 36.0 * alpha + 54.0,
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")))
    }
}

/// Upper bound on `γ` for local well-posedness; `+∞` once `α ≥ 3/2`.
///
/// A negative discriminant leaves only the first argument of the minimum.
pub fn gamma_bound_thm1(alpha: f64, variant: G2Variant) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha >= 1.5 {
        return Ok(f64::INFINITY);
    }
    let denom = 3.0 * (3.0 - 2.0 * alpha);
    let first = (6.0 * alpha - 1.0) / denom;
    let disc = variant.discriminant(alpha);
    if disc < 0.0 {
        log::warn!("discriminant negative at alpha = {alpha}; using the first bound only");
        return Ok(first);
    }
    Ok(first.min((4.0 * alpha - 3.0 + disc.sqrt()) / denom))
}

/// `G₁ = (2α − 1)/(3 − 2α)` (regularity `s = 1`).
pub fn g1(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha >= 1.5 {
        return Ok(f64::INFINITY);
    }
    Ok((2.0 * alpha - 1.0) / (3.0 - 2.0 * alpha))
}

/// `G₂` (regularity `1/2 ≤ s < 1`); the same expression as
/// [`gamma_bound_thm1`].
pub fn g2(alpha: f64, variant: G2Variant) -> Result<f64> {
    gamma_bound_thm1(alpha, variant)
}

/// `G₃` (regularity `0 < s < 1/2`).
pub fn g3(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha >= 1.5 {
        return Ok(f64::INFINITY);
    }
    let beta = 3.0 - 2.0 * alpha;
    let first = beta / (2.0 * (alpha - 1.0));
    let disc = 4.0 * alpha * alpha - 28.0 * alpha + 37.0;
    if disc < 0.0 {
        return Ok(first);
    }
    Ok(first.min((2.0 * alpha - 1.0 + disc.sqrt()) / (2.0 * beta)))
}

/// The expression whose negativity is the global condition.
pub fn condition_14_expr(alpha: f64, gamma: f64) -> f64 {
    (2.0 - alpha) * (2.0 * gamma + 2.0 * (gamma + 1.0) / (gamma + 2.0) - 2.0) - alpha + 1.5 - 1.0 / (gamma + 1.0)
}

/// Global condition: `α > 11/7`, `1 ≤ γ < 4` and the expression is negative.
/// Points within `1e−12` of zero count as boundary and are rejected.
pub fn condition_14(alpha: f64, gamma: f64) -> bool {
    alpha > 11.0 / 7.0 && (1.0..4.0).contains(&gamma) && condition_14_expr(alpha, gamma) < -1e-12
}

/// `α ≤ 5/2 − 2/γ`.
pub fn supercritical(alpha: f64, gamma: f64) -> bool {
    gamma > 0.0 && alpha <= 2.5 - 2.0 / gamma
}

const INNER_GRID: usize = 2000;

/// Minimizes the global-condition expression over `α ∈ (11/7, 5/2 − 2/γ]`
/// with a grid scan followed by golden-section refinement. Returns `None`
/// when the interval is empty.
pub fn min_condition_14_over_alpha(gamma: f64) -> Option<(f64, f64)> {
    let lo = 11.0 / 7.0;
    let hi = 2.5 - 2.0 / gamma;
    if !(hi > lo) {
        return None;
    }
    let f = |a: f64| condition_14_expr(a, gamma);
    let h = (hi - lo) / INNER_GRID as f64;
    let (mut best_i, mut best) = (INNER_GRID, f(hi));
    for i in 1..INNER_GRID {
        let v = f(lo + i as f64 * h);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let a0 = lo + (best_i.saturating_sub(1)) as f64 * h;
    let b0 = (lo + (best_i + 1) as f64 * h).min(hi);
    let (a, v) = golden_min(f, a0, b0, 1e-14);
    Some(if v < best { (a, v) } else { (lo + best_i as f64 * h, best) })
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Whether some supercritical `α > 11/7` satisfies the global condition.
pub fn supercritical_gwp_feasible(gamma: f64) -> bool {
    if !(1.0..4.0).contains(&gamma) {
        return false;
    }
    min_condition_14_over_alpha(gamma).is_some_and(|(_, v)| v < -1e-12)
}

/// Smallest `γ ∈ [1, 4)` for which [`supercritical_gwp_feasible`] holds,
/// found by bisection to within `tolerance`.
pub fn supercritical_gwp_threshold(tolerance: f64) -> Result<f64> {
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let (mut lo, mut hi) = (1.0, 4.0 - 1e-12);
    if supercritical_gwp_feasible(lo) {
        return Ok(lo);
    }
    if !supercritical_gwp_feasible(hi) {
        return Err(Error::NonConvergence {
            what: "no feasible gamma below 4".into(),
            iterations: 0,
            residual: f64::NAN,
        });
    }
    let scan: Vec<bool> = (0..300).map(|i| supercritical_gwp_feasible(1.0 + 0.01 * i as f64)).collect();
    let flips = scan.windows(2).filter(|w| w[0] != w[1]).count();
    if flips > 1 {
        log::warn!("feasibility in gamma is not monotone on [1, 4): {flips} sign changes");
    }
    while hi - lo > tolerance {
        let mid = 0.5 * (lo + hi);
        if supercritical_gwp_feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Regularity case: `s = 1`, `1/2 ≤ s < 1`, `0 < s < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpCase {
    One,
    Two,
    Three,
}

impl SpCase {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(SpCase::One),
            2 => Ok(SpCase::Two),
            3 => Ok(SpCase::Three),
            _ => Err(Error::Domain(format!("case must be 1, 2 or 3, got {i}"))),
        }
    }

    /// Closed-form bound on `γ` for the case.
    pub fn bound(self, alpha: f64, variant: G2Variant) -> Result<f64> {
        match self {
            SpCase::One => g1(alpha),
            SpCase::Two => g2(alpha, variant),
            SpCase::Three => g3(alpha),
        }
    }
}

/// `ρ*(α)`: `4/(3 − 2α)` below `3/2`, else `+∞`.
pub fn rho_star(alpha: f64) -> f64 {
    if alpha < 1.5 {
        4.0 / (3.0 - 2.0 * alpha)
    } else {
        f64::INFINITY
    }
}

/// A regularity/integrability pair satisfying every constraint of a case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpWitness {
    pub s: f64,
    pub p: f64,
}

/// Checks every inequality of `case` at `(s, p)`.
pub fn check_witness(alpha: f64, gamma: f64, case: SpCase, w: SpWitness) -> bool {
    let SpWitness { s, p } = w;
    let x = gamma + 1.0;
    let px = p * x;
    if !(s.is_finite() && p.is_finite() && gamma >= 1.0) {
        return false;
    }
    let integrability = 2.0 <= px && px < rho_star(alpha) && px >= 4.0;
    let embedding = s > 0.5 - 1.0 / (2.0 * x) + (0.5 - 2.0 / px).max(0.0);
    let nonlinear = match case {
        SpCase::One => s == 1.0 && p >= 2.0,
        SpCase::Two => (0.5..1.0).contains(&s) && p > 6.0 / (5.0 - 2.0 * s),
        SpCase::Three => s > 0.0 && s < 0.5 && p > 2.0 / (2.0 - s),
    };
    integrability && embedding && nonlinear
}

/// Open window of admissible `s` for a given `p`, already clipped to the case.
fn s_window(gamma: f64, case: SpCase, p: f64) -> (f64, f64) {
    let x = gamma + 1.0;
    let lower = 1.0 - 1.0 / (2.0 * x) - 2.0 / (p * x);
    match case {
        SpCase::One => (lower, f64::INFINITY),
        SpCase::Two => (lower.max(0.5), (2.5 - 3.0 / p).min(1.0)),
        SpCase::Three => (lower.max(0.0), (2.0 - 2.0 / p).min(0.5)),
    }
}

/// Constructs an `(s, p)` witness for `case` by taking `p` just below the
/// integrability ceiling `ρ*(α)/(γ+1)` and `s` in the middle of the
/// resulting window. Every returned witness has passed [`check_witness`].
///
/// Below `α = 3/2` a witness exists exactly when the `s`-window is open in
/// the limit `p → ρ*(α)/(γ+1)`; pairs with `p` well below the ceiling that
/// happen to satisfy the constraints are not searched for. From `3/2` on,
/// `p` is scanned upward from `max{2, 4/(γ+1)}`.
pub fn feasible_sp(alpha: f64, gamma: f64, case: SpCase) -> Result<Option<SpWitness>> {
    check_alpha(alpha)?;
    if !(gamma >= 1.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite and at least 1, got {gamma}")));
    }
    let x = gamma + 1.0;
    let floor = (4.0 / x).max(if case == SpCase::One { 2.0 } else { 0.0 });
    let candidates: Vec<f64> = if alpha < 1.5 {
        let ceiling = rho_star(alpha) / x;
        let (lo, hi) = s_window(gamma, case, ceiling);
        let open = if case == SpCase::One { ceiling > floor } else { hi > lo };
        if !open {
            return Ok(None);
        }
        (1..=16).map(|k| ceiling * (1.0 - 10f64.powi(-k))).collect()
    } else if case == SpCase::One {
        vec![floor]
    } else {
        (0..12).map(|k| floor * 2f64.powi(k)).chain((1..40).map(|k| floor * (1.0 + k as f64 / 8.0))).collect()
    };
    for p in candidates {
        if p < floor {
            continue;
        }
        let s = if case == SpCase::One {
            1.0
        } else {
            let (lo, hi) = s_window(gamma, case, p);
            if !(hi > lo) {
                continue;
            }
            0.5 * (lo + hi)
        };
        let w = SpWitness { s, p };
        if check_witness(alpha, gamma, case, w) {
            return Ok(Some(w));
        }
        if case == SpCase::Two {
            let w = SpWitness { s: 0.5, p };
            if check_witness(alpha, gamma, case, w) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

/// Grid over which [`region_scan`] evaluates every condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSpec {
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_points: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_points: usize,
    #[serde(default)]
    pub g2_variant: G2Variant,
}

impl ScanSpec {
    fn axis(min: f64, max: f64, n: usize) -> Vec<f64> {
        if n == 1 {
            return vec![min];
        }
        (0..n).map(|i| min + (max - min) * i as f64 / (n - 1) as f64).collect()
    }

    pub fn alphas(&self) -> Vec<f64> {
        Self::axis(self.alpha_min, self.alpha_max, self.alpha_points)
    }

    pub fn gammas(&self) -> Vec<f64> {
        Self::axis(self.gamma_min, self.gamma_max, self.gamma_points)
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha_min > 1.0 && self.alpha_max >= self.alpha_min)
            || !(self.gamma_min > 0.0 && self.gamma_max >= self.gamma_min)
            || self.alpha_points == 0
            || self.gamma_points == 0
        {
            return Err(Error::Domain(format!("invalid scan ranges: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub alpha: f64,
    pub gamma: f64,
    pub cond11: bool,
    pub cond14: bool,
    pub supercritical: bool,
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionReport {
    pub spec: ScanSpec,
    pub cells: Vec<RegionCell>,
    /// Smallest `γ` admitting a supercritical `α` with global well-posedness.
    pub gwp_threshold: f64,
    /// Alphas on the grid where the two discriminant variants give different `G₂`.
    pub g2_variant_disagreements: usize,
}

pub fn region_scan(spec: &ScanSpec) -> Result<RegionReport> {
    spec.validate()?;
    let gammas = spec.gammas();
    let mut cells = Vec::with_capacity(spec.alpha_points * spec.gamma_points);
    let mut disagreements = 0;
    for alpha in spec.alphas() {
        let (b1, b2, b3) = (g1(alpha)?, g2(alpha, spec.g2_variant)?, g3(alpha)?);
        let other = match spec.g2_variant {
            G2Variant::Printed => G2Variant::Derived,
            G2Variant::Derived => G2Variant::Printed,
        };
        if (g2(alpha, other)? - b2).abs() > BOUNDARY_BAND {
            disagreements += 1;
        }
        let thm1 = gamma_bound_thm1(alpha, spec.g2_variant)?;
        for &gamma in &gammas {
            cells.push(RegionCell {
                alpha,
                gamma,
                cond11: gamma >= 1.0 && gamma < thm1,
                cond14: condition_14(alpha, gamma),
                supercritical: supercritical(alpha, gamma),
                g1: b1,
                g2: b2,
                g3: b3,
            });
        }
    }
    Ok(RegionReport {
        spec: spec.clone(),
        cells,
        gwp_threshold: supercritical_gwp_threshold(1e-6)?,
        g2_variant_disagreements: disagreements,
    })
}

impl RegionReport {
    /// CSV with columns `alpha,gamma,cond11,cond14,supercritical,g1,g2,g3`;
    /// infinite bounds are written as `inf`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "alpha,gamma,cond11,cond14,supercritical,g1,g2,g3")?;
        for c in &self.cells {
            writeln!(
                w,
                "{:.16e},{:.16e},{},{},{},{},{},{}",
                c.alpha,
                c.gamma,
                c.cond11,
                c.cond14,
                c.supercritical,
                fmt_bound(c.g1),
                fmt_bound(c.g2),
                fmt_bound(c.g3)
            )?;
        }
        Ok(())
    }
}

fn fmt_bound(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Result of comparing the constructive search with a closed-form bound.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub in_band: usize,
    pub disagreements: Vec<(f64, f64)>,
}

/// Runs [`feasible_sp`] on every `(α, γ)` pair and records where it disagrees
/// with `γ < bound(α)` outside [`BOUNDARY_BAND`].
pub fn consistency_check(
    alphas: &[f64],
    gammas: &[f64],
    case: SpCase,
    variant: G2Variant,
) -> Result<ConsistencyReport> {
    let mut report = ConsistencyReport::default();
    for &alpha in alphas {
        let bound = case.bound(alpha, variant)?;
        for &gamma in gammas {
            report.checked += 1;
            if (gamma - bound).abs() <= BOUNDARY_BAND {
                report.in_band += 1;
                continue;
            }
            let found = feasible_sp(alpha, gamma, case)?.is_some();
            if found != (gamma < bound) {
                report.disagreements.push((alpha, gamma));
            }
        }
    }
    Ok(report)
}
