//! Seeded Gaussian ensembles and Monte Carlo tail estimates.

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::modes::ModeSet;
use crate::par;
use crate::propagator::{apply_fractional, PhaseConvention, SpaceTimeNorm};
use crate::transform::Transform;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flavor {
    /// `a = g / z^α` with complex Gaussian `g`, `E|g|² = 1`.
    ComplexHalfwave,
    /// `φ = h / z^α`, `ψ = k / z^{α−1}` with real standard Gaussians.
    RealPair,
}

/// A seeded Gaussian random-data law on a fixed mode set.
#[derive(Debug, Clone)]
pub struct Ensemble {
    alpha: f64,
    flavor: Flavor,
    modes: Arc<ModeSet>,
    min_z: f64,
    seed: u64,
}

impl Ensemble {
    pub fn new(alpha: f64, flavor: Flavor, modes: Arc<ModeSet>, min_z: f64, seed: u64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
        }
        if !(min_z >= 0.0) {
            return Err(Error::Domain(format!("low-frequency cutoff must be nonnegative, got {min_z}")));
        }
        Ok(Self { alpha, flavor, modes, min_z, seed })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn min_z(&self) -> f64 {
        self.min_z
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Same law with a different low-frequency cutoff.
    pub fn with_min_z(&self, min_z: f64) -> Result<Self> {
        Self::new(self.alpha, self.flavor, Arc::clone(&self.modes), min_z, self.seed)
    }

    /// Independent stream for one sample. Every mode consumes the same
    /// draws whatever the cutoff, so samples at different `min_z` are
    /// coupled.
    fn rng(&self, sample_index: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(sample_index);
        rng
    }

    /// A complex-halfwave sample (Gaussian coefficients damped by `z^{−α}`).
    pub fn sample_complex(&self, sample_index: u64) -> Result<CoeffField> {
        if self.flavor != Flavor::ComplexHalfwave {
            return Err(Error::Domain("sample_complex needs the complex-halfwave flavor".into()));
        }
        let mut rng = self.rng(sample_index);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let values = self
            .modes
            .modes()
            .iter()
            .map(|m| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                if m.z < self.min_z {
                    Complex64::default()
                } else {
                    Complex64::new(re * s, im * s) / m.z.powf(self.alpha)
                }
            })
            .collect();
        CoeffField::from_values(Arc::clone(&self.modes), values)
    }

    /// A real-pair sample `(φ, ψ)`.
    ///
    /// Coefficients at `±n′` are shared, so `φ` and `ψ` are real-valued
    /// functions; each individual coefficient is a standard real Gaussian.
    pub fn sample_real_pair(&self, sample_index: u64) -> Result<(CoeffField, CoeffField)> {
        if self.flavor != Flavor::RealPair {
            return Err(Error::Domain("sample_real_pair needs the real-pair flavor".into()));
        }
        let mut rng = self.rng(sample_index);
        let mut phi = CoeffField::zeros(Arc::clone(&self.modes));
        let mut psi = CoeffField::zeros(Arc::clone(&self.modes));
        for (k, m) in self.modes.modes().iter().enumerate() {
            if m.nprime < 0 {
                continue;
            }
            let h: f64 = rng.sample(StandardNormal);
            let g: f64 = rng.sample(StandardNormal);
            if m.z < self.min_z {
                continue;
            }
            let a = Complex64::new(h / m.z.powf(self.alpha), 0.0);
            let b = Complex64::new(g / m.z.powf(self.alpha - 1.0), 0.0);
            phi.values_mut()[k] = a;
            psi.values_mut()[k] = b;
            if m.nprime > 0 {
                let mirror = self.modes.index_of(m.n, -m.nprime).expect("mask is symmetric in n'");
                phi.values_mut()[mirror] = a;
                psi.values_mut()[mirror] = b;
            }
        }
        Ok((phi, psi))
    }

    /// Half-wave data for this sample: the complex draw, or the real pair
    /// combined by [`pair_to_halfwave`].
    pub fn sample_halfwave(&self, sample_index: u64) -> Result<CoeffField> {
        match self.flavor {
            Flavor::ComplexHalfwave => self.sample_complex(sample_index),
            Flavor::RealPair => {
                let (phi, psi) = self.sample_real_pair(sample_index)?;
                pair_to_halfwave(&phi, &psi)
            }
        }
    }

    /// The position component of a sample: the complex draw itself, or `φ`.
    pub fn sample_position(&self, sample_index: u64) -> Result<CoeffField> {
        match self.flavor {
            Flavor::ComplexHalfwave => self.sample_complex(sample_index),
            Flavor::RealPair => Ok(self.sample_real_pair(sample_index)?.0),
        }
    }

    /// `Σ ⟨z⟩^{2s} z^{−2α}` over the supported modes, the mean of
    /// `‖a‖²_{H^s}` (and of `‖φ‖²_{H^s}` for the real pair).
    pub fn expected_hs_squared(&self, s: f64) -> f64 {
        self.modes
            .modes()
            .iter()
            .filter(|m| m.z >= self.min_z)
            .map(|m| (1.0 + m.z * m.z).powf(s) * m.z.powf(-2.0 * self.alpha))
            .sum()
    }
}

/// `u₀ = φ + i (√−Δ)^{-1} ψ`.
pub fn pair_to_halfwave(phi: &CoeffField, psi: &CoeffField) -> Result<CoeffField> {
    phi.axpy(Complex64::i(), &apply_fractional(psi, -1.0))
}

/// The integrability threshold `ρ*(α, s)`: `4 / (3 − 2(α − s))` when
/// `α − s < 3/2`, infinite otherwise.
pub fn rho_star(alpha: f64, s: f64) -> Result<f64> {
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
    }
    if !(s >= 0.0 && s < alpha - 1.0) {
        return Err(Error::Domain(format!("s must lie in [0, alpha - 1) = [0, {}), got {s}", alpha - 1.0)));
    }
    let d = alpha - s;
    Ok(if d < 1.5 { 4.0 / (3.0 - 2.0 * d) } else { f64::INFINITY })
}

/// Random variable whose tail is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailFunctional {
    /// `‖(√−Δ)^s φ‖_{L^p(B₂×𝕋)}`.
    SpatialLp { s: f64, p: f64 },
    /// `‖S(t)φ‖_{L^p_x L^q_t([0,T])}`.
    SpaceTime { p: f64, q: f64, t_final: f64 },
    /// `‖S(t)φ‖_{L^p_x L^q_t([0,T])} · L^{α−τ} / T^{1/q}` for data supported
    /// on `z ≥ L`; `L` is the ensemble's `min_z`.
    HighFrequency { p: f64, q: f64, t_final: f64, tau: f64 },
}

impl fmt::Display for TailFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TailFunctional::SpatialLp { s, p } => write!(f, "L^{p} norm of (-Delta)^({s}/2) phi"),
            TailFunctional::SpaceTime { p, q, t_final } => {
                write!(f, "L^{p}_x L^{q}_t([0,{t_final}]) norm of S(t) phi")
            }
            TailFunctional::HighFrequency { p, q, t_final, tau } => {
                write!(f, "L^{p}_x L^{q}_t([0,{t_final}]) norm of S(t) phi_2 rescaled by L^(alpha-{tau}) / T^(1/{q})")
            }
        }
    }
}

impl TailFunctional {
    fn validate(&self, ensemble: &Ensemble) -> Result<()> {
        let bad = |msg: String| Err(Error::Domain(msg));
        match *self {
            TailFunctional::SpatialLp { s, p } if !(p >= 1.0) || !(s >= 0.0) => {
                bad(format!("need p >= 1 and s >= 0, got p = {p}, s = {s}"))
            }
            TailFunctional::SpaceTime { p, q, t_final } | TailFunctional::HighFrequency { p, q, t_final, .. }
                if !(p >= 1.0) || !(q >= 1.0) || !(t_final > 0.0) =>
            {
                bad(format!("need p, q >= 1 and T > 0, got p = {p}, q = {q}, T = {t_final}"))
            }
            TailFunctional::HighFrequency { .. } if !(ensemble.min_z() >= 1.0) => {
                bad("the high-frequency functional needs a cutoff L >= 1".into())
            }
            _ => Ok(()),
        }
    }

    /// Value of the functional on one field.
    pub fn eval(&self, ensemble: &Ensemble, field: &CoeffField, transform: &Transform) -> Result<f64> {
        match *self {
            TailFunctional::SpatialLp { s, p } => Ok(transform.synthesize(&apply_fractional(field, s))?.lp_norm(p)),
            TailFunctional::SpaceTime { p, q, t_final } => {
                SpaceTimeNorm::new(p, q, t_final).eval(field, transform, PhaseConvention::Generator)
            }
            TailFunctional::HighFrequency { p, q, t_final, tau } => {
                let raw = SpaceTimeNorm::new(p, q, t_final).eval(field, transform, PhaseConvention::Generator)?;
                Ok(raw * ensemble.min_z().powf(ensemble.alpha() - tau) / t_final.powf(1.0 / q))
            }
        }
    }
}

/// Evaluates `functional` on samples `0..sample_count`, in index order.
pub fn sample_functional(
    ensemble: &Ensemble,
    functional: &TailFunctional,
    transform: &Transform,
    sample_count: usize,
) -> Result<Vec<f64>> {
    functional.validate(ensemble)?;
    if !Arc::ptr_eq(transform.mode_set(), ensemble.mode_set()) && **transform.mode_set() != **ensemble.mode_set() {
        return Err(Error::ModeSetMismatch);
    }
    par::map_range(0..sample_count, |i| {
        let field = ensemble.sample_position(i as u64)?;
        functional.eval(ensemble, &field, transform)
    })
    .into_iter()
    .collect()
}

/// Survival probabilities of a functional and a sub-Gaussian fit
/// `−log P ≈ c λ² + b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailReport {
    pub norm_descriptor: String,
    pub sample_count: usize,
    pub lambda_grid: Vec<f64>,
    pub empirical_prob: Vec<f64>,
    pub stderr: Vec<f64>,
    pub fitted_c: f64,
    pub fitted_intercept: f64,
    pub r_squared: f64,
    pub estimable_points: usize,
    pub warnings: Vec<String>,
}

/// Minimum exceedance count for a grid point to enter the fit.
pub const MIN_EXCEEDANCES: usize = 10;

impl TailReport {
    /// Builds the report from raw functional values.
    pub fn from_values(descriptor: impl Into<String>, values: &[f64], lambda_grid: &[f64]) -> Self {
        let n = values.len();
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut empirical_prob = Vec::with_capacity(lambda_grid.len());
        let mut stderr = Vec::with_capacity(lambda_grid.len());
        let mut fit_x = Vec::new();
        let mut fit_y = Vec::new();
        for &lambda in lambda_grid {
            let exceed = n - sorted.partition_point(|&v| v <= lambda);
            let prob = if n == 0 { 0.0 } else { exceed as f64 / n as f64 };
            empirical_prob.push(prob);
            stderr.push(if n == 0 { 0.0 } else { (prob * (1.0 - prob) / n as f64).sqrt() });
            if exceed >= MIN_EXCEEDANCES {
                fit_x.push(lambda * lambda);
                fit_y.push(-prob.ln());
            }
        }
        let mut warnings = Vec::new();
        let (fitted_c, fitted_intercept, r_squared) = if fit_x.len() >= 3 {
            least_squares(&fit_x, &fit_y)
        } else {
            warnings.push(format!(
                "only {} grid points have at least {MIN_EXCEEDANCES} exceedances; fit needs 3",
                fit_x.len()
            ));
            (f64::NAN, f64::NAN, f64::NAN)
        };
        for w in &warnings {
            log::warn!("{w}");
        }
        Self {
            norm_descriptor: descriptor.into(),
            sample_count: n,
            lambda_grid: lambda_grid.to_vec(),
            empirical_prob,
            stderr,
            fitted_c,
            fitted_intercept,
            r_squared,
            estimable_points: fit_x.len(),
            warnings,
        }
    }

    /// CSV with columns `lambda,empirical_prob,stderr`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "lambda,empirical_prob,stderr")?;
        for ((l, p), e) in self.lambda_grid.iter().zip(&self.empirical_prob).zip(&self.stderr) {
            writeln!(w, "{l:.16e},{p:.16e},{e:.16e}")?;
        }
        Ok(())
    }

    /// JSON summary without the per-point arrays.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "norm_descriptor": self.norm_descriptor,
            "sample_count": self.sample_count,
            "fitted_c": finite_or_null(self.fitted_c),
            "fitted_intercept": finite_or_null(self.fitted_intercept),
            "r_squared": finite_or_null(self.r_squared),
            "estimable_points": self.estimable_points,
            "warnings": self.warnings,
        })
    }
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::Value::Null
    }
}

/// Ordinary least squares `y ≈ c x + b`; returns `(c, b, R²)`.
pub(crate) fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let c = sxy / sxx;
    let b = my - c * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (c, b, r2)
}

/// Monte Carlo survival probabilities of `functional` under `ensemble`
/// on the thresholds `lambda_grid`.
pub fn tail_probability(
    ensemble: &Ensemble,
    functional: &TailFunctional,
    transform: &Transform,
    lambda_grid: &[f64],
    sample_count: usize,
) -> Result<TailReport> {
    let values = sample_functional(ensemble, functional, transform, sample_count)?;
    Ok(TailReport::from_values(functional.to_string(), &values, lambda_grid))
}
