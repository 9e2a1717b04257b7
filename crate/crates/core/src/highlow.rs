//! The high/low frequency iteration: data split at frequency `L`, the low
//! part evolved by the full equation, the high part by the perturbed
//! equation around it, and the low-part energy tracked interval by
//! interval.

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::modes::ModeSet;
use crate::propagator::{evolve_linear, PhaseConvention};
use crate::random::{Ensemble, Flavor};
use crate::solver::{kinetic_sum, potential_integral, step_count, Solver, SolverConfig, Trajectory};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

const GENERATOR: PhaseConvention = PhaseConvention::Generator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HighLowConfig {
    /// Frequency cutoff `L`.
    #[serde(rename = "L")]
    pub l_cutoff: f64,
    /// Interval length `δ`.
    pub delta: f64,
    /// Final time `T`.
    #[serde(rename = "T")]
    pub t_final: f64,
    /// Nonlinearity power `γ`; must agree with `solver.gamma`.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub alpha: f64,
    pub seed: u64,
    #[serde(default)]
    pub sample_index: u64,
    #[serde(default = "default_flavor")]
    pub flavor: Flavor,
    pub n_max: usize,
    pub nprime_max: usize,
    #[serde(default)]
    pub z_max: Option<f64>,
    /// Regularity `σ ∈ (0, α−1)` entering the reported budget only.
    pub sigma: f64,
    /// `M` in the budget.
    #[serde(default = "default_budget_m")]
    pub budget_m: f64,
    /// `ε̃′` in the budget.
    #[serde(default = "default_budget_eps")]
    pub budget_eps: f64,
    #[serde(default)]
    pub solver: SolverConfig,
}

fn default_flavor() -> Flavor {
    Flavor::ComplexHalfwave
}

fn default_gamma() -> f64 {
    SolverConfig::default().gamma
}

fn default_budget_m() -> f64 {
    1.0
}

fn default_budget_eps() -> f64 {
    0.01
}

impl HighLowConfig {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        let bad = |m: String| Err(Error::Domain(m));
        if self.gamma != self.solver.gamma {
            return bad(format!("gamma = {} disagrees with solver.gamma = {}", self.gamma, self.solver.gamma));
        }
        if !(self.l_cutoff >= 1.0) {
            return bad(format!("L must be at least 1, got {}", self.l_cutoff));
        }
        if !(self.delta > 0.0 && self.delta <= self.t_final) || !self.t_final.is_finite() {
            return bad(format!("need 0 < delta <= T, got delta = {}, T = {}", self.delta, self.t_final));
        }
        if !(self.alpha > 1.0) {
            return bad(format!("alpha must exceed 1, got {}", self.alpha));
        }
        if !(self.sigma > 0.0 && self.sigma < self.alpha - 1.0) {
            return bad(format!("sigma must lie in (0, alpha - 1), got {}", self.sigma));
        }
        if !(self.budget_m >= 1.0) || !(self.budget_eps > 0.0) {
            return bad("budget constants need M >= 1 and eps > 0".into());
        }
        Ok(())
    }

    /// `W = δ^{1/2−ε} L^{(1−σ)γ − α + 3/2 − 1/(γ+1) + ε} M^{γ+1}`.
    pub fn w_budget(&self, delta: f64) -> f64 {
        let g = self.gamma;
        let eps = self.budget_eps;
        let exponent = (1.0 - self.sigma) * g - self.alpha + 1.5 - 1.0 / (g + 1.0) + eps;
        delta.powf(0.5 - eps) * self.l_cutoff.powf(exponent) * self.budget_m.powf(g + 1.0)
    }
}

/// `δ = (L^{1−σ} M)^{−c′}` with `c′ = 2γ + 1/2` and unit constants.
pub fn suggested_delta(l_cutoff: f64, sigma: f64, budget_m: f64, gamma: f64) -> f64 {
    (l_cutoff.powf(1.0 - sigma) * budget_m).powf(-(2.0 * gamma + 0.5))
}

/// Splits into the parts supported on `z < L` and `z ≥ L`.
pub fn split_data(coeffs: &CoeffField, l_cutoff: f64) -> (CoeffField, CoeffField) {
    let zero = Complex64::default();
    let low = coeffs.map(|m, a| if m.z < l_cutoff { a } else { zero });
    let high = coeffs.map(|m, a| if m.z < l_cutoff { zero } else { a });
    (low, high)
}

/// Full nonlinear solve for the low part on `[t0, t0 + delta]`, keeping the
/// stage values needed by [`solve_w`].
pub fn solve_v(phi1: &CoeffField, t0: f64, delta: f64, solver: &Solver) -> Result<Trajectory> {
    if !solver.config().record_stages {
        return Err(Error::Domain("solve_v needs a solver with record_stages enabled".into()));
    }
    solver.local_solve(phi1, t0, delta)
}

/// Perturbed solve for the high part around `v`. When `cutoff` is given,
/// data below it triggers a warning.
pub fn solve_w(
    phi2: &CoeffField,
    v: &Trajectory,
    t0: f64,
    delta: f64,
    solver: &Solver,
    cutoff: Option<f64>,
) -> Result<Trajectory> {
    if let Some(l) = cutoff {
        let below = phi2.mode_set().modes().iter().zip(phi2.values()).any(|(m, a)| m.z < l && a.norm_sqr() > 0.0);
        if below {
            log::warn!("high-frequency data has support below L = {l}");
        }
    }
    solver.solve_perturbation(phi2, v, t0, delta)
}

/// Per-interval measurements of the iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub k: usize,
    pub t_start: f64,
    pub t_end: f64,
    /// `E(φ₁^{(k)})`.
    pub energy_low: f64,
    /// `E(φ₁^{(k+1)})`.
    pub energy_low_next: f64,
    /// `‖√−Δ φ₁^{(k+1)}‖² − ‖√−Δ v^{(k)}(t_end)‖²`.
    pub increment_i: f64,
    /// `∫|Re φ₁^{(k+1)}|^{γ+2} − ∫|Re v^{(k)}(t_end)|^{γ+2}`.
    pub increment_ii: f64,
    pub w_budget: f64,
    /// `‖w^{(k)}(t_end) − S(δ)φ₂^{(k)}‖_{H¹}`.
    pub w_deviation: f64,
    /// Largest relative energy drift of `v^{(k)}`.
    pub v_energy_drift: f64,
    pub picard_iters_v: usize,
    pub picard_iters_w: usize,
    pub picard_max_v: usize,
    pub picard_max_w: usize,
}

impl IntervalRecord {
    /// `½ (I) + (II)/(γ+2)`.
    pub fn energy_increment(&self, gamma: f64) -> f64 {
        0.5 * self.increment_i + self.increment_ii / (gamma + 2.0)
    }
}

/// Result of [`run`]. If an interval fails, the records up to it are kept
/// and `error` says why.
#[derive(Debug, Clone)]
pub struct HighLowRun {
    pub records: Vec<IntervalRecord>,
    /// `u = v + w` at every step boundary; interval starts carry the state
    /// handed over from the previous interval.
    pub trajectory: Trajectory,
    /// `u` at the start of each interval, as handed to its split.
    pub interval_initial_states: Vec<CoeffField>,
    /// `v^{(k)} + w^{(k)}` at the end of each interval.
    pub interval_final_states: Vec<CoeffField>,
    pub error: Option<String>,
}

impl HighLowRun {
    pub fn is_partial(&self) -> bool {
        self.error.is_some()
    }

    /// `max_k |I_k| + |II_k|`.
    pub fn max_increment(&self) -> f64 {
        self.records.iter().map(|r| r.increment_i.abs() + r.increment_ii.abs()).fold(0.0, f64::max)
    }

    /// Largest deviation from `E(φ₁^{(k)}) − E(φ₁^{(0)}) = Σ_{k′<k} E_{k′}`.
    pub fn telescoping_defect(&self, gamma: f64) -> f64 {
        let Some(first) = self.records.first() else { return 0.0 };
        let mut sum = 0.0;
        let mut worst: f64 = 0.0;
        for r in &self.records {
            sum += r.energy_increment(gamma);
            worst = worst.max((r.energy_low_next - first.energy_low - sum).abs());
        }
        worst
    }

    /// CSV with columns
    /// `k,E_low,increment_I,increment_II,W_budget,w_deviation,picard_iters`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,E_low,increment_I,increment_II,W_budget,w_deviation,picard_iters")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                r.k,
                r.energy_low,
                r.increment_i,
                r.increment_ii,
                r.w_budget,
                r.w_deviation,
                r.picard_iters_v + r.picard_iters_w
            )?;
        }
        Ok(())
    }
}

/// Samples the data described by `config` and runs the iteration.
pub fn run(config: &HighLowConfig) -> Result<HighLowRun> {
    config.validate()?;
    let modes = Arc::new(ModeSet::new(config.n_max, config.nprime_max, config.z_max)?);
    let ensemble = Ensemble::new(config.alpha, config.flavor, Arc::clone(&modes), 0.0, config.seed)?;
    let u0 = ensemble.sample_halfwave(config.sample_index)?;
    run_with_data(config, &u0)
}

/// Runs the iteration from given data.
pub fn run_with_data(config: &HighLowConfig, u0: &CoeffField) -> Result<HighLowRun> {
    config.validate()?;
    let solver_config = SolverConfig { record_stages: true, ..config.solver.clone() };
    let solver = Solver::new(Arc::clone(u0.mode_set()), solver_config)?;
    let gamma = config.gamma;
    let n_intervals = step_count(config.t_final, config.delta);
    let (phi1_0, phi2_0) = split_data(u0, config.l_cutoff);

    let mut records = Vec::with_capacity(n_intervals);
    let mut initial_states = Vec::with_capacity(n_intervals);
    let mut final_states = Vec::with_capacity(n_intervals);
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![u0.clone()],
        picard_iters: vec![0],
        residuals: vec![0.0],
        energies: vec![solver.energy(u0)?],
        stage_nodes: Vec::new(),
        stages: None,
    };
    let mut u = u0.clone();
    let mut error = None;
    for k in 0..n_intervals {
        let t_start = k as f64 * config.delta;
        let t_end = if k + 1 == n_intervals { config.t_final } else { (k + 1) as f64 * config.delta };
        let outcome = (|| -> Result<(IntervalRecord, Trajectory, Trajectory)> {
            let phi2 = evolve_linear(&phi2_0, t_start, GENERATOR);
            let phi1 = if k == 0 { phi1_0.clone() } else { u.sub(&phi2)? };
            let length = t_end - t_start;
            let v = solve_v(&phi1, t_start, length, &solver)?;
            let w = solve_w(&phi2, &v, t_start, length, &solver, Some(config.l_cutoff))?;
            let v_end = v.final_state();
            let u_end = v_end.add(w.final_state())?;
            let phi1_next = u_end.sub(&evolve_linear(&phi2_0, t_end, GENERATOR))?;
            let increment_i = kinetic_sum(&phi1_next) - kinetic_sum(v_end);
            let transform = solver.transform();
            let increment_ii =
                potential_integral(&phi1_next, gamma, transform)? - potential_integral(v_end, gamma, transform)?;
            let w_deviation = w.final_state().sub(&evolve_linear(&phi2, length, GENERATOR))?.hs_norm(1.0);
            let record = IntervalRecord {
                k,
                t_start,
                t_end,
                energy_low: v.energies[0],
                energy_low_next: solver.energy(&phi1_next)?,
                increment_i,
                increment_ii,
                w_budget: config.w_budget(length),
                w_deviation,
                v_energy_drift: v.max_relative_energy_drift(),
                picard_iters_v: v.picard_iters.iter().sum(),
                picard_iters_w: w.picard_iters.iter().sum(),
                picard_max_v: v.picard_iters.iter().copied().max().unwrap_or(0),
                picard_max_w: w.picard_iters.iter().copied().max().unwrap_or(0),
            };
            Ok((record, v, w))
        })();
        match outcome {
            Ok((record, v, w)) => {
                initial_states.push(u.clone());
                for i in 1..v.times.len() {
                    let state = v.states[i].add(&w.states[i])?;
                    traj.energies.push(solver.energy(&state)?);
                    traj.states.push(state);
                    traj.times.push(v.times[i]);
                    traj.picard_iters.push(v.picard_iters[i] + w.picard_iters[i]);
                    traj.residuals.push(v.residuals[i].max(w.residuals[i]));
                }
                u = traj.final_state().clone();
                final_states.push(u.clone());
                log::debug!(
                    "interval {k}: E_low = {:.6e}, I = {:.3e}, II = {:.3e}",
                    record.energy_low,
                    record.increment_i,
                    record.increment_ii
                );
                records.push(record);
            }
            Err(e) => {
                log::error!("high/low iteration stopped in interval {k}: {e}");
                error = Some(format!("interval {k}: {e}"));
                break;
            }
        }
    }
    Ok(HighLowRun {
        records,
        trajectory: traj,
        interval_initial_states: initial_states,
        interval_final_states: final_states,
        error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::build_modes;

    #[test]
    fn split_is_exact() {
        let modes = Arc::new(build_modes(5, 4, None).unwrap());
        let f = CoeffField::zeros(Arc::clone(&modes)).map(|m, _| Complex64::new(m.z.sin(), m.z.cos()));
        let (low, high) = split_data(&f, 7.5);
        let sum = low.add(&high).unwrap();
        assert_eq!(sum.values(), f.values());
        let (low, high) = split_data(&f, 2.0);
        assert!(low.is_zero());
        assert_eq!(high.values(), f.values());
        let (low, high) = split_data(&f, 1e6);
        assert!(high.is_zero());
        assert_eq!(low.values(), f.values());
    }

    #[test]
    fn budget_formula() {
        let cfg: HighLowConfig = serde_json::from_value(serde_json::json!({
            "L": 8.0, "delta": 0.05, "T": 0.5, "alpha": 2.0, "seed": 1,
            "n_max": 4, "nprime_max": 4, "sigma": 0.5
        }))
        .unwrap();
        assert!(cfg.validate().is_ok());
        let g = cfg.gamma;
        let exponent = 0.5 * g - 2.0 + 1.5 - 1.0 / (g + 1.0) + 0.01;
        let want = 0.05f64.powf(0.49) * 8f64.powf(exponent);
        assert!((cfg.w_budget(0.05) - want).abs() < 1e-15);
        assert!((suggested_delta(4.0, 0.5, 1.0, 2.0) - 2f64.powf(-4.5)).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: std::result::Result<HighLowConfig, _> = serde_json::from_value(serde_json::json!({
            "L": 8.0, "delta": 0.05, "T": 0.5, "alpha": 2.0, "seed": 1,
            "n_max": 4, "nprime_max": 4, "sigma": 0.5, "gama": 2.0
        }));
        assert!(r.is_err());
    }
}
