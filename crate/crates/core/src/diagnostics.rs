//! Empirical probes of inequality-type statements: a discrete `X^{s,b}`
//! norm, Strichartz ratios for the linear flow and `X^{s,b}` embedding
//! ratios for random space-time fields.
//!
//! The `X^{s,b}` norm computed here is that of one canonical representation
//! (windowed DFT in time, each mode's frequency band centred on its own
//! `z`), so it bounds the infimum over representations from above.

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::modes::ModeSet;
use crate::par;
use crate::propagator::{evolve_linear, trapezoid_mixed_norm, PhaseConvention};
use crate::random::{Ensemble, Flavor};
use crate::solver::Trajectory;
use crate::transform::{RadialEigenfunction, Transform};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Time window applied before the DFT.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Window {
    None,
    /// Raised-cosine ramps over `fraction` of the interval at each end.
    CosineTaper {
        fraction: f64,
    },
}

impl Default for Window {
    fn default() -> Self {
        Window::CosineTaper { fraction: 0.1 }
    }
}

impl Window {
    /// Weight at relative position `x ∈ [0, 1)`.
    pub fn weight(self, x: f64) -> f64 {
        match self {
            Window::None => 1.0,
            Window::CosineTaper { fraction } => {
                if fraction <= 0.0 {
                    1.0
                } else if x < fraction {
                    0.5 * (1.0 - (PI * x / fraction).cos())
                } else if x > 1.0 - fraction {
                    0.5 * (1.0 - (PI * (1.0 - x) / fraction).cos())
                } else {
                    1.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct XsbSpec {
    pub s: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    #[serde(default)]
    pub t0: f64,
    pub duration: f64,
    /// Number of time samples; a power of two.
    pub n_time: usize,
    #[serde(default)]
    pub window: Window,
    /// Phase convention of the sampled trajectory. Under the generator
    /// convention temporal frequencies are rescaled by `−2π` before they are
    /// compared with `z`.
    #[serde(default)]
    pub convention: PhaseConvention,
}

fn default_b() -> f64 {
    0.55
}

impl XsbSpec {
    pub fn new(s: f64, duration: f64, n_time: usize) -> Self {
        Self {
            s,
            b: default_b(),
            t0: 0.0,
            duration,
            n_time,
            window: Window::default(),
            convention: PhaseConvention::Generator,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.5) {
            return Err(Error::Domain(format!("b must exceed 1/2, got {}", self.b)));
        }
        if self.n_time < 8 || !self.n_time.is_power_of_two() {
            return Err(Error::Domain(format!("n_time must be a power of two >= 8, got {}", self.n_time)));
        }
        if !(self.duration > 0.0) {
            return Err(Error::Domain(format!("duration must be positive, got {}", self.duration)));
        }
        if let Window::CosineTaper { fraction } = self.window {
            if !(0.0..=0.5).contains(&fraction) {
                return Err(Error::Domain(format!("taper fraction must lie in [0, 1/2], got {fraction}")));
            }
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        self.duration / self.n_time as f64
    }

    /// `t0 + j·duration/n_time` for `j < n_time`.
    pub fn sample_times(&self) -> Vec<f64> {
        (0..self.n_time).map(|j| self.t0 + j as f64 * self.step()).collect()
    }

    /// Frequency compared with `z` for DFT bin `k`.
    fn frequency(&self, k: i64) -> f64 {
        let nu = k as f64 / self.duration;
        match self.convention {
            PhaseConvention::Periodic => nu,
            PhaseConvention::Generator => -2.0 * PI * nu,
        }
    }

    /// Bin whose frequency is closest to `z`.
    fn centre_bin(&self, z: f64) -> i64 {
        let k = match self.convention {
            PhaseConvention::Periodic => z * self.duration,
            PhaseConvention::Generator => -z * self.duration / (2.0 * PI),
        };
        k.round() as i64
    }
}

/// Discrete `X^{s,b}` norm of a trajectory sampled at [`XsbSpec::sample_times`].
pub fn discrete_xsb_norm(traj: &Trajectory, spec: &XsbSpec) -> Result<f64> {
    spec.validate()?;
    if traj.states.len() < spec.n_time {
        return Err(Error::Domain(format!("trajectory has {} states, spec needs {}", traj.states.len(), spec.n_time)));
    }
    let tol = 1e-9 * spec.duration.max(1.0);
    for (j, t) in spec.sample_times().into_iter().enumerate() {
        if (traj.times[j] - t).abs() > tol {
            return Err(Error::Domain(format!(
                "trajectory time {} at index {j} does not match the spec grid value {t}",
                traj.times[j]
            )));
        }
    }
    xsb_norm_of_samples(&traj.states[..spec.n_time], spec)
}

/// Discrete `X^{s,b}` norm of `samples[j] = f(t0 + j·duration/n_time)`.
pub fn xsb_norm_of_samples(samples: &[CoeffField], spec: &XsbSpec) -> Result<f64> {
    spec.validate()?;
    if samples.len() != spec.n_time {
        return Err(Error::Domain(format!("expected {} samples, got {}", spec.n_time, samples.len())));
    }
    let modes = Arc::clone(samples[0].mode_set());
    if samples.iter().any(|f| **f.mode_set() != *modes) {
        return Err(Error::ModeSetMismatch);
    }
    let n = spec.n_time;
    let weights: Vec<f64> = (0..n).map(|j| spec.window.weight(j as f64 / n as f64)).collect();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let per_mode = par::map_range(0..modes.len(), |i| {
        let z = modes.modes()[i].z;
        let mut buf: Vec<Complex64> = samples.iter().zip(&weights).map(|(f, &w)| f.values()[i] * w).collect();
        if buf.iter().all(|c| *c == Complex64::default()) {
            return 0.0;
        }
        fft.process(&mut buf);
        let centre = spec.centre_bin(z);
        let half = (n / 2) as i64;
        let zw = japanese(z).powf(2.0 * spec.s);
        (centre - half..centre + half)
            .map(|k| {
                let c = buf[k.rem_euclid(n as i64) as usize] / n as f64;
                japanese(spec.frequency(k) - z).powf(2.0 * spec.b) * zw * c.norm_sqr()
            })
            .sum::<f64>()
    });
    Ok(per_mode.iter().sum::<f64>().sqrt())
}

/// Samples `S(t)f` on the spec's time grid under the spec's convention.
pub fn linear_samples(f: &CoeffField, spec: &XsbSpec) -> Vec<CoeffField> {
    spec.sample_times().into_iter().map(|t| evolve_linear(f, t, spec.convention)).collect()
}

/// `s > 1/2 − 1/q + max{1/2 − 2/p, 0}`.
pub fn strichartz_admissible(p: f64, q: f64, s: f64) -> bool {
    s > 0.5 - 1.0 / q + (0.5 - 2.0 / p).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrichartzSpec {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    pub t_final: f64,
    #[serde(default = "default_time_samples")]
    pub n_time: usize,
    #[serde(default)]
    pub t0: f64,
}

fn default_time_samples() -> usize {
    64
}

impl StrichartzSpec {
    pub fn new(p: f64, q: f64, s: f64, t_final: f64) -> Self {
        Self { p, q, s, t_final, n_time: default_time_samples(), t0: 0.0 }
    }

    pub fn admissible(&self) -> bool {
        strichartz_admissible(self.p, self.q, self.s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0 && self.q >= 1.0 && self.t_final > 0.0 && self.s >= 0.0) || self.n_time < 2 {
            return Err(Error::Domain(format!("invalid Strichartz parameters {self:?}")));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!(
            "||S(t)f||_(L^{}_x L^{}_t([{}, {}])) / ||f||_(H^{})",
            self.p,
            self.q,
            self.t0,
            self.t0 + self.t_final,
            self.s
        )
    }
}

/// Distribution of a ratio over a sample set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub descriptor: String,
    pub ratios: Vec<f64>,
    pub max: f64,
    pub mean: f64,
    /// `(level, value)` pairs.
    pub quantiles: Vec<(f64, f64)>,
    pub admissible: bool,
    pub warnings: Vec<String>,
}

impl RatioReport {
    pub fn from_ratios(descriptor: impl Into<String>, ratios: Vec<f64>, admissible: bool) -> Self {
        let mut warnings = Vec::new();
        if !admissible {
            warnings.push("parameters outside the admissible range; growth under refinement is expected".into());
        }
        let finite: Vec<f64> = ratios.iter().copied().filter(|r| r.is_finite()).collect();
        if finite.len() < ratios.len() {
            warnings.push(format!("{} samples gave a non-finite ratio", ratios.len() - finite.len()));
        }
        let mut sorted = finite.clone();
        sorted.sort_by(f64::total_cmp);
        let quantile = |level: f64| {
            if sorted.is_empty() {
                return f64::NAN;
            }
            let pos = level * (sorted.len() - 1) as f64;
            let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
            sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
        };
        let quantiles = [0.5, 0.9, 0.99].into_iter().map(|l| (l, quantile(l))).collect();
        Self {
            descriptor: descriptor.into(),
            max: sorted.last().copied().unwrap_or(f64::NAN),
            mean: if finite.is_empty() { f64::NAN } else { finite.iter().sum::<f64>() / finite.len() as f64 },
            quantiles,
            ratios,
            admissible,
            warnings,
        }
    }

    /// CSV with columns `sample_id,ratio`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "sample_id,ratio")?;
        for (i, r) in self.ratios.iter().enumerate() {
            writeln!(w, "{i},{r:.16e}")?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "descriptor": self.descriptor,
            "sample_count": self.ratios.len(),
            "max": self.max,
            "mean": self.mean,
            "quantiles": self.quantiles.iter().map(|(l, v)| serde_json::json!({"level": l, "value": v})).collect::<Vec<_>>(),
            "admissible": self.admissible,
            "warnings": self.warnings,
        })
    }
}

/// Strichartz ratio for every field in `data`.
pub fn strichartz_ratio(data: &[CoeffField], spec: &StrichartzSpec, transform: &Transform) -> Result<RatioReport> {
    spec.validate()?;
    if !spec.admissible() {
        log::warn!("(p, q, s) = ({}, {}, {}) is not admissible", spec.p, spec.q, spec.s);
    }
    if spec.t_final > 1.0 {
        log::warn!("interval length {} exceeds 1", spec.t_final);
    }
    let h = spec.t_final / (spec.n_time - 1) as f64;
    let ratios = par::map_range(0..data.len(), |i| {
        let f = &data[i];
        let denom = f.hs_norm(spec.s);
        if denom == 0.0 {
            return Ok(f64::NAN);
        }
        let num = trapezoid_mixed_norm(spec.n_time, h, spec.p, spec.q, transform.grid(), |k| {
            transform.synthesize(&evolve_linear(f, spec.t0 + k as f64 * h, PhaseConvention::Generator))
        })?;
        Ok(num / denom)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(RatioReport::from_ratios(spec.describe(), ratios, spec.admissible()))
}

/// Deterministic and random data sets for the ratio harnesses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSet {
    /// Samples `0..count` of the complex half-wave ensemble.
    Ensemble { alpha: f64, seed: u64, count: usize },
    /// The projection of a point mass at the origin, `a_{n,n′} = e_n(0)`.
    Focused,
    /// One field per listed mode `(n, n′)`.
    SingleModes { count: usize },
}

impl DataSet {
    pub fn build(&self, modes: &Arc<ModeSet>) -> Result<Vec<CoeffField>> {
        match *self {
            DataSet::Ensemble { alpha, seed, count } => {
                let ens = Ensemble::new(alpha, Flavor::ComplexHalfwave, Arc::clone(modes), 0.0, seed)?;
                (0..count as u64).map(|i| ens.sample_halfwave(i)).collect()
            }
            DataSet::Focused => Ok(vec![focused_data(modes)]),
            DataSet::SingleModes { count } => {
                let mut order: Vec<usize> = (0..modes.len()).collect();
                order.sort_by(|&a, &b| modes.modes()[b].z.total_cmp(&modes.modes()[a].z));
                order
                    .into_iter()
                    .take(count)
                    .map(|i| {
                        let m = modes.modes()[i];
                        CoeffField::delta(Arc::clone(modes), m.n, m.nprime)
                    })
                    .collect()
            }
        }
    }
}

/// `a_{n,n′} = e_n(0)`: the mode-set projection of a point mass at the origin.
pub fn focused_data(modes: &Arc<ModeSet>) -> CoeffField {
    let at_origin: Vec<f64> =
        modes.lambdas().iter().enumerate().map(|(i, &l)| RadialEigenfunction::from_zero(i + 1, l).eval(0.0)).collect();
    CoeffField::zeros(Arc::clone(modes)).map(|m, _| Complex64::new(at_origin[m.n - 1], 0.0))
}

/// Maxima of a ratio report across successive truncation levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationTrend {
    pub levels: Vec<usize>,
    pub maxima: Vec<f64>,
}

impl TruncationTrend {
    /// `max_k / max_{k−1} − 1` for each doubling.
    pub fn relative_changes(&self) -> Vec<f64> {
        self.maxima.windows(2).map(|w| w[1] / w[0] - 1.0).collect()
    }

    pub fn last_change(&self) -> Option<f64> {
        self.relative_changes().last().copied()
    }
}

/// Runs `report` at each truncation level and collects the maxima.
pub fn truncation_study(
    levels: &[usize],
    mut report: impl FnMut(usize) -> Result<RatioReport>,
) -> Result<(TruncationTrend, Vec<RatioReport>)> {
    let mut reports = Vec::with_capacity(levels.len());
    for &level in levels {
        let r = report(level)?;
        log::info!("truncation {level}: max ratio {:.6e}", r.max);
        reports.push(r);
    }
    let trend = TruncationTrend { levels: levels.to_vec(), maxima: reports.iter().map(|r| r.max).collect() };
    Ok((trend, reports))
}

/// Space-time coefficients `f_{m,n,n′}` with integer temporal frequencies
/// `m = round(z) + k`, `|k| ≤ half_width`, representing
/// `Σ f_{m,n,n′} e^{2πimt} e_n(r) e^{2πin′x₃}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    modes: Arc<ModeSet>,
    half_width: usize,
    values: Vec<Complex64>,
}

impl SpaceTimeField {
    pub fn zeros(modes: Arc<ModeSet>, half_width: usize) -> Self {
        let len = modes.len() * (2 * half_width + 1);
        Self { modes, half_width, values: vec![Complex64::default(); len] }
    }

    /// A single entry at mode `(n, n′)` and temporal frequency `m`.
    pub fn single(
        modes: Arc<ModeSet>,
        half_width: usize,
        n: usize,
        nprime: i64,
        m: i64,
        value: Complex64,
    ) -> Result<Self> {
        let mut f = Self::zeros(modes, half_width);
        let i = f
            .modes
            .index_of(n, nprime)
            .ok_or_else(|| Error::Domain(format!("mode ({n}, {nprime}) not in the mode set")))?;
        let k = m - f.centre(i);
        if k.unsigned_abs() as usize > half_width {
            return Err(Error::Domain(format!("frequency {m} outside the band around z")));
        }
        let w = f.width();
        f.values[i * w + (k + half_width as i64) as usize] = value;
        Ok(f)
    }

    fn width(&self) -> usize {
        2 * self.half_width + 1
    }

    fn centre(&self, i: usize) -> i64 {
        self.modes.modes()[i].z.round() as i64
    }

    fn frequency(&self, i: usize, slot: usize) -> i64 {
        self.centre(i) + slot as i64 - self.half_width as i64
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    /// Shifts time by `tau`: `f_m ↦ f_m e^{2πimτ}`.
    pub fn translate(&self, tau: f64) -> Self {
        let w = self.width();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &v)| v * Complex64::cis(2.0 * PI * self.frequency(idx / w, idx % w) as f64 * tau))
            .collect();
        Self { values, ..self.clone() }
    }

    /// `(Σ ⟨m−z⟩^{2b} ⟨z⟩^{2s} |f|²)^{1/2}` of this representation.
    pub fn xsb_norm(&self, s: f64, b: f64) -> f64 {
        let w = self.width();
        self.values
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let i = idx / w;
                let z = self.modes.modes()[i].z;
                japanese(self.frequency(i, idx % w) as f64 - z).powf(2.0 * b) * japanese(z).powf(2.0 * s) * v.norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Spatial coefficients at time `t`.
    pub fn at(&self, t: f64) -> CoeffField {
        let w = self.width();
        let values = (0..self.modes.len())
            .map(|i| {
                (0..w)
                    .map(|slot| {
                        self.values[i * w + slot] * Complex64::cis(2.0 * PI * self.frequency(i, slot) as f64 * t)
                    })
                    .sum()
            })
            .collect();
        CoeffField::from_values(Arc::clone(&self.modes), values).expect("length matches the mode set")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingSpec {
    pub p: f64,
    pub q: f64,
    pub s: f64,
    #[serde(default = "default_b")]
    pub b: f64,
    pub t_final: f64,
    #[serde(default)]
    pub t0: f64,
    #[serde(default = "default_time_samples")]
    pub n_time: usize,
    /// Temporal frequencies kept on each side of `round(z)`.
    #[serde(default = "default_half_width")]
    pub half_width: usize,
    /// Extra decay `⟨m−z⟩^{−time_decay}` of the random coefficients.
    #[serde(default = "default_decay")]
    pub time_decay: f64,
    /// Extra decay `⟨z⟩^{−space_decay}` of the random coefficients.
    #[serde(default = "default_decay")]
    pub space_decay: f64,
}

fn default_half_width() -> usize {
    4
}

fn default_decay() -> f64 {
    1.0
}

impl EmbeddingSpec {
    pub fn admissible(&self) -> bool {
        self.b > 0.5 && strichartz_admissible(self.p, self.q, self.s)
    }

    fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0 && self.q >= 1.0 && self.t_final > 0.0 && self.b > 0.0) || self.n_time < 2 {
            return Err(Error::Domain(format!("invalid embedding parameters {self:?}")));
        }
        Ok(())
    }
}

/// Random space-time field `f = g ⟨m−z⟩^{−b−time_decay} ⟨z⟩^{−s−space_decay}`
/// with complex Gaussian `g`, drawn from stream `index` of `seed`.
pub fn random_space_time_field(modes: &Arc<ModeSet>, spec: &EmbeddingSpec, seed: u64, index: u64) -> SpaceTimeField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut f = SpaceTimeField::zeros(Arc::clone(modes), spec.half_width);
    let w = f.width();
    let sd = std::f64::consts::FRAC_1_SQRT_2;
    for idx in 0..f.values.len() {
        let i = idx / w;
        let z = modes.modes()[i].z;
        let m = f.frequency(i, idx % w) as f64;
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        let weight = japanese(m - z).powf(-spec.b - spec.time_decay) * japanese(z).powf(-spec.s - spec.space_decay);
        f.values[idx] = Complex64::new(re * sd, im * sd) * weight;
    }
    f
}

/// `‖f‖_{L^p_x L^q_t} / ‖f‖_{X^{s,b}}` for every field.
pub fn embedding_ratio(fields: &[SpaceTimeField], spec: &EmbeddingSpec, transform: &Transform) -> Result<RatioReport> {
    spec.validate()?;
    if !spec.admissible() {
        log::warn!("embedding parameters {spec:?} are not admissible");
    }
    let h = spec.t_final / (spec.n_time - 1) as f64;
    let ratios = par::map_range(0..fields.len(), |i| {
        let f = &fields[i];
        let denom = f.xsb_norm(spec.s, spec.b);
        if denom == 0.0 {
            return Ok(f64::NAN);
        }
        let num = trapezoid_mixed_norm(spec.n_time, h, spec.p, spec.q, transform.grid(), |k| {
            transform.synthesize(&f.at(spec.t0 + k as f64 * h))
        })?;
        Ok(num / denom)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let descriptor = format!(
        "||f||_(L^{}_x L^{}_t([{}, {}])) / ||f||_(X^({}, {}))",
        spec.p,
        spec.q,
        spec.t0,
        spec.t0 + spec.t_final,
        spec.s,
        spec.b
    );
    Ok(RatioReport::from_ratios(descriptor, ratios, spec.admissible()))
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a − F_b|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic p-value of a two-sample KS statistic.
pub fn ks_p_value(d: f64, na: usize, nb: usize) -> f64 {
    let ne = (na * nb) as f64 / (na + nb) as f64;
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-16 {
            break;
        }
    }
    sum.clamp(0.0, 1.0)
}
