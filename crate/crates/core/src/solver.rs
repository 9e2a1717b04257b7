//! Local solutions of the half-wave equation
//!
//! ```text
//! u_t = −i√−Δ u − i·sign·(√−Δ)^{-1} F(Re u),    F(x) = |x|^γ x,
//! ```
//!
//! whose real part `w = Re u` solves `w_tt − Δw + sign·|w|^γ w = 0`.
//! Each step solves the Duhamel equation on `[t_k, t_k + h]` by Gauss
//! collocation in the interaction picture: the integrand of
//! `∫ S(t − t′) N(u(t′)) dt′` is replaced by its interpolant through the
//! Gauss nodes, and the stage values are found by Picard iteration.

use crate::error::{Error, Result};
use crate::field::{CoeffField, PhysicalField};
use crate::modes::ModeSet;
use crate::propagator::PhaseConvention;
use crate::quadrature::gauss_legendre_on;
use crate::transform::Transform;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

const GENERATOR: PhaseConvention = PhaseConvention::Generator;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub gamma: f64,
    /// Largest allowed step; the interval is split into `⌈T/dt⌉` equal steps.
    pub dt: f64,
    pub picard_tol: f64,
    pub picard_max: usize,
    /// Gauss nodes per step.
    pub time_quad_order: usize,
    pub dealias_factor: f64,
    /// `+1` gives the defocusing wave equation and conserves the energy.
    pub sign: f64,
    /// `false` drops the nonlinear term entirely.
    pub nonlinear: bool,
    /// Keep the collocation stage values of every step in the trajectory.
    pub record_stages: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gamma: 2.0,
            dt: 1e-3,
            picard_tol: 1e-10,
            picard_max: 50,
            time_quad_order: 4,
            dealias_factor: 2.0,
            sign: 1.0,
            nonlinear: true,
            record_stages: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        if !(self.gamma >= 1.0) || !self.gamma.is_finite() {
            return bad(format!("gamma must be at least 1, got {}", self.gamma));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return bad(format!("dt must be positive, got {}", self.dt));
        }
        if !(self.picard_tol > 0.0) {
            return bad(format!("picard_tol must be positive, got {}", self.picard_tol));
        }
        if self.picard_max == 0 || self.time_quad_order == 0 {
            return bad("picard_max and time_quad_order must be positive".into());
        }
        if !(self.dealias_factor >= 1.5) {
            return bad(format!("dealias_factor must be at least 1.5, got {}", self.dealias_factor));
        }
        if !self.sign.is_finite() {
            return bad(format!("sign must be finite, got {}", self.sign));
        }
        Ok(())
    }
}

/// `F(x) = |x|^γ x`.
#[inline]
pub fn power_nonlinearity(x: f64, gamma: f64) -> f64 {
    if gamma == 1.0 {
        x.abs() * x
    } else if gamma == 2.0 {
        x * x * x
    } else if gamma == 3.0 {
        x.abs() * x * x * x
    } else {
        x.abs().powf(gamma) * x
    }
}

/// Pointwise `F(Re u)`, stored as complex values with zero imaginary part.
pub fn nonlinearity(field: &PhysicalField, gamma: f64) -> PhysicalField {
    let values = field.values().iter().map(|u| Complex64::new(power_nonlinearity(u.re, gamma), 0.0)).collect();
    PhysicalField::from_values(Arc::clone(field.grid()), values).expect("same grid")
}

/// `|F(Re a) − F(Re b)| / (|a − b| (|a|^γ + |b|^γ))`.
pub fn lipschitz_ratio(a: Complex64, b: Complex64, gamma: f64) -> Result<f64> {
    let d = (a - b).norm();
    if d == 0.0 {
        return Err(Error::Domain("lipschitz_ratio needs a != b".into()));
    }
    let num = (power_nonlinearity(a.re, gamma) - power_nonlinearity(b.re, gamma)).abs();
    Ok(num / (d * (a.norm().powf(gamma) + b.norm().powf(gamma))))
}

/// `½ Σ z²|a|² + 1/(γ+2) ∫ |Re u|^{γ+2}`, the second term by quadrature on
/// the transform's grid.
pub fn energy(u: &CoeffField, gamma: f64, transform: &Transform) -> Result<f64> {
    Ok(0.5 * kinetic_sum(u) + potential_integral(u, gamma, transform)? / (gamma + 2.0))
}

/// `∫ |Re u|^{γ+2}` by quadrature.
pub fn potential_integral(u: &CoeffField, gamma: f64, transform: &Transform) -> Result<f64> {
    let field = transform.synthesize(u)?;
    Ok(transform.grid().integrate(field.values().iter().map(|v| v.re.abs().powf(gamma + 2.0))))
}

/// `Σ z² |a|²`.
pub fn kinetic_sum(u: &CoeffField) -> f64 {
    u.mode_set().modes().iter().zip(u.values()).map(|(m, a)| m.z * m.z * a.norm_sqr()).sum()
}

/// Output of a local solve sampled at step boundaries.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CoeffField>,
    /// Picard iterations of the step ending at `times[k]` (0 for the start).
    pub picard_iters: Vec<usize>,
    /// Last Picard increment of the step ending at `times[k]`.
    pub residuals: Vec<f64>,
    pub energies: Vec<f64>,
    /// Fractions of a step at which stage values are taken.
    pub stage_nodes: Vec<f64>,
    /// `stages[k][j]`: solution at `times[k] + stage_nodes[j]·h`, if recorded.
    pub stages: Option<Vec<Vec<CoeffField>>>,
}

impl Trajectory {
    fn constant(u: &CoeffField, t0: f64, t_end: f64, n_steps: usize, energy: f64, nodes: &[f64], stages: bool) -> Self {
        let h = (t_end - t0) / n_steps as f64;
        let times: Vec<f64> = (0..=n_steps).map(|k| step_time(t0, t_end, h, k, n_steps)).collect();
        let n = times.len();
        Self {
            times,
            states: vec![u.clone(); n],
            picard_iters: vec![0; n],
            residuals: vec![0.0; n],
            energies: vec![energy; n],
            stage_nodes: nodes.to_vec(),
            stages: stages.then(|| vec![vec![u.clone(); nodes.len()]; n_steps]),
        }
    }

    pub fn final_state(&self) -> &CoeffField {
        self.states.last().expect("trajectories hold at least the initial state")
    }

    pub fn final_time(&self) -> f64 {
        *self.times.last().expect("nonempty")
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        self.states[0].mode_set()
    }

    /// Largest relative deviation of the energy from its initial value.
    pub fn max_relative_energy_drift(&self) -> f64 {
        let e0 = self.energies[0];
        let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
        self.energies.iter().map(|e| (e - e0).abs() / scale).fold(0.0, f64::max)
    }

    /// CSV with columns `t,h1_norm,energy,picard_iters`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,h1_norm,energy,picard_iters")?;
        for k in 0..self.times.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{}",
                self.times[k],
                self.states[k].hs_norm(1.0),
                self.energies[k],
                self.picard_iters[k]
            )?;
        }
        Ok(())
    }
}

fn step_time(t0: f64, t_end: f64, h: f64, k: usize, n_steps: usize) -> f64 {
    if k == n_steps {
        t_end
    } else {
        t0 + k as f64 * h
    }
}

/// Number of equal steps of size at most `dt` covering `length`.
pub fn step_count(length: f64, dt: f64) -> usize {
    ((length / dt) - 1e-9).ceil().max(1.0) as usize
}

/// Gauss collocation coefficients on `[0, 1]`.
#[derive(Debug, Clone)]
struct Tableau {
    c: Vec<f64>,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl Tableau {
    fn gauss(s: usize) -> Self {
        let (c, b) = gauss_legendre_on(s, 0.0, 1.0);
        let lagrange = |l: usize, x: f64| -> f64 {
            c.iter().enumerate().filter(|&(m, _)| m != l).map(|(_, &cm)| (x - cm) / (c[l] - cm)).product()
        };
        let a = c
            .iter()
            .map(|&cj| {
                let (x, w) = gauss_legendre_on(s, 0.0, cj);
                (0..s).map(|l| x.iter().zip(&w).map(|(&xi, &wi)| wi * lagrange(l, xi)).sum()).collect()
            })
            .collect();
        Self { c, a, b }
    }
}

struct StepOutcome {
    next: Vec<Complex64>,
    iterations: usize,
    residual: f64,
    stages: Vec<Vec<Complex64>>,
}

/// A solver bound to one mode set, grid and configuration.
pub struct Solver {
    config: SolverConfig,
    transform: Transform,
    tableau: Tableau,
    z: Vec<f64>,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver").field("config", &self.config).field("transform", &self.transform).finish()
    }
}

impl Solver {
    pub fn new(modes: Arc<ModeSet>, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let transform = Transform::for_modes(Arc::clone(&modes), config.dealias_factor)?;
        let tableau = Tableau::gauss(config.time_quad_order);
        let z = modes.modes().iter().map(|m| m.z).collect();
        Ok(Self { config, transform, tableau, z })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn transform(&self) -> &Transform {
        &self.transform
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        self.transform.mode_set()
    }

    /// Conserved energy of the configured flow, `½ Σ z²|a|² + sign/(γ+2) ∫ |Re u|^{γ+2}`;
    /// the quadratic part alone when the nonlinear term is switched off.
    pub fn energy(&self, u: &CoeffField) -> Result<f64> {
        let c = &self.config;
        if c.nonlinear && c.sign != 0.0 {
            Ok(0.5 * kinetic_sum(u) + c.sign * potential_integral(u, c.gamma, &self.transform)? / (c.gamma + 2.0))
        } else {
            Ok(0.5 * kinetic_sum(u))
        }
    }

    fn field(&self, values: Vec<Complex64>) -> CoeffField {
        CoeffField::from_values(Arc::clone(self.mode_set()), values).expect("solver-owned sizes")
    }

    fn check_modes(&self, u: &CoeffField) -> Result<()> {
        if Arc::ptr_eq(u.mode_set(), self.mode_set()) || **u.mode_set() == **self.mode_set() {
            Ok(())
        } else {
            Err(Error::ModeSetMismatch)
        }
    }

    /// `−i·sign·z^{-1} P[F(Re(V + U)) − F(Re V)]`, or with `V = 0`.
    fn forcing(&self, u: &[Complex64], background: Option<&PhysicalField>) -> Result<Vec<Complex64>> {
        let gamma = self.config.gamma;
        let mut phys = self.transform.synthesize(&self.field(u.to_vec()))?;
        match background {
            None => {
                for v in phys.values_mut() {
                    *v = Complex64::new(power_nonlinearity(v.re, gamma), 0.0);
                }
            }
            Some(bg) => {
                for (v, b) in phys.values_mut().iter_mut().zip(bg.values()) {
                    let total = power_nonlinearity(v.re + b.re, gamma);
                    *v = Complex64::new(total - power_nonlinearity(b.re, gamma), 0.0);
                }
            }
        }
        let coeffs = self.transform.analyze(&phys)?;
        let factor = Complex64::new(0.0, -self.config.sign);
        Ok(coeffs.values().iter().zip(&self.z).map(|(c, z)| factor * c / z).collect())
    }

    fn rotate(&self, x: &[Complex64], t: f64) -> Vec<Complex64> {
        x.iter().zip(&self.z).map(|(a, &z)| a * GENERATOR.phase(z, t)).collect()
    }

    /// One collocation step of length `h` from `u`, with optional
    /// background fields at the stage times.
    #[allow(clippy::needless_range_loop)]
    fn step(&self, t: f64, u: &[Complex64], h: f64, background: Option<&[PhysicalField]>) -> Result<StepOutcome> {
        let s = self.tableau.c.len();
        let dim = u.len();
        // Interaction-picture stage values B_j; S(c_j h) B_j are the stage solutions.
        let mut b_stage: Vec<Vec<Complex64>> = vec![u.to_vec(); s];
        let mut g: Vec<Vec<Complex64>> = vec![vec![Complex64::default(); dim]; s];
        let mut last_increment = f64::INFINITY;
        let mut increases = 0;
        for iteration in 1..=self.config.picard_max {
            for j in 0..s {
                let tau = self.tableau.c[j] * h;
                let stage_u = self.rotate(&b_stage[j], tau);
                let n = self.forcing(&stage_u, background.map(|bg| &bg[j]))?;
                g[j] = self.rotate(&n, -tau);
            }
            let mut increment: f64 = 0.0;
            for j in 0..s {
                let mut diff = 0.0;
                for k in 0..dim {
                    let mut acc = u[k];
                    for l in 0..s {
                        acc += g[l][k] * (h * self.tableau.a[j][l]);
                    }
                    diff += (acc - b_stage[j][k]).norm_sqr();
                    b_stage[j][k] = acc;
                }
                increment = increment.max(diff.sqrt());
            }
            if !increment.is_finite() {
                return Err(Error::PicardDivergence { time: t, iterations: iteration, residual: increment });
            }
            if increment < self.config.picard_tol {
                let mut end = u.to_vec();
                for (l, gl) in g.iter().enumerate() {
                    for (e, x) in end.iter_mut().zip(gl) {
                        *e += x * (h * self.tableau.b[l]);
                    }
                }
                let stages = (0..s).map(|j| self.rotate(&b_stage[j], self.tableau.c[j] * h)).collect();
                return Ok(StepOutcome {
                    next: self.rotate(&end, h),
                    iterations: iteration,
                    residual: increment,
                    stages,
                });
            }
            if increment > last_increment {
                increases += 1;
                if increases >= 3 {
                    return Err(Error::PicardDivergence { time: t, iterations: iteration, residual: increment });
                }
            } else {
                increases = 0;
            }
            last_increment = increment;
        }
        Err(Error::PicardDivergence { time: t, iterations: self.config.picard_max, residual: last_increment })
    }

    /// Linear evolution sampled on the same step grid.
    fn linear_trajectory(&self, u0: &CoeffField, t0: f64, t_end: f64, n_steps: usize) -> Result<Trajectory> {
        let h = (t_end - t0) / n_steps as f64;
        let mut traj = Trajectory::constant(u0, t0, t_end, n_steps, 0.0, &self.tableau.c, false);
        let mut stages = Vec::new();
        for k in 0..=n_steps {
            let state = crate::propagator::evolve_linear(u0, traj.times[k] - t0, GENERATOR);
            traj.energies[k] = self.energy(&state)?;
            traj.states[k] = state;
            if k < n_steps && self.config.record_stages {
                let start = traj.times[k] - t0;
                stages.push(
                    self.tableau
                        .c
                        .iter()
                        .map(|&c| crate::propagator::evolve_linear(u0, start + c * h, GENERATOR))
                        .collect(),
                );
            }
        }
        traj.stages = self.config.record_stages.then_some(stages);
        Ok(traj)
    }

    fn validate_interval(&self, u0: &CoeffField, t0: f64, length: f64) -> Result<()> {
        self.check_modes(u0)?;
        if !(length > 0.0) || !length.is_finite() || !t0.is_finite() {
            return Err(Error::Domain(format!(
                "need a finite interval of positive length, got [{t0}, {t0} + {length}]"
            )));
        }
        Ok(())
    }

    /// Solves on `[t0, t0 + length]` from `u0`.
    pub fn local_solve(&self, u0: &CoeffField, t0: f64, length: f64) -> Result<Trajectory> {
        self.validate_interval(u0, t0, length)?;
        let n_steps = step_count(length, self.config.dt);
        let t_end = t0 + length;
        if u0.is_zero() {
            return Ok(Trajectory::constant(u0, t0, t_end, n_steps, 0.0, &self.tableau.c, self.config.record_stages));
        }
        if !self.config.nonlinear {
            return self.linear_trajectory(u0, t0, t_end, n_steps);
        }
        self.march(u0, t0, t_end, n_steps, None)
    }

    /// Solves the perturbed equation for `w` with nonlinearity
    /// `F(Re(v + w)) − F(Re v)`, where `v` is a trajectory recorded with
    /// stage values on the same step grid.
    pub fn solve_perturbation(&self, w0: &CoeffField, v: &Trajectory, t0: f64, length: f64) -> Result<Trajectory> {
        self.validate_interval(w0, t0, length)?;
        let n_steps = step_count(length, self.config.dt);
        let t_end = t0 + length;
        let stages = v
            .stages
            .as_ref()
            .ok_or_else(|| Error::Domain("background trajectory was solved without record_stages".into()))?;
        let aligned = v.times.len() == n_steps + 1
            && (v.times[0] - t0).abs() <= 1e-12 * (1.0 + t0.abs())
            && (v.final_time() - t_end).abs() <= 1e-12 * (1.0 + t_end.abs())
            && v.stage_nodes == self.tableau.c;
        if !aligned {
            return Err(Error::Domain("background trajectory does not share the step grid".into()));
        }
        if w0.is_zero() {
            return Ok(Trajectory::constant(w0, t0, t_end, n_steps, 0.0, &self.tableau.c, self.config.record_stages));
        }
        if !self.config.nonlinear {
            return self.linear_trajectory(w0, t0, t_end, n_steps);
        }
        let background: Vec<Vec<PhysicalField>> = stages
            .iter()
            .map(|step| step.iter().map(|s| self.transform.synthesize(s)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        self.march(w0, t0, t_end, n_steps, Some(&background))
    }

    fn march(
        &self,
        u0: &CoeffField,
        t0: f64,
        t_end: f64,
        n_steps: usize,
        background: Option<&[Vec<PhysicalField>]>,
    ) -> Result<Trajectory> {
        let h = (t_end - t0) / n_steps as f64;
        let mut times = vec![t0];
        let mut states = vec![u0.clone()];
        let mut picard_iters = vec![0];
        let mut residuals = vec![0.0];
        let mut energies = vec![self.energy(u0)?];
        let mut stages = Vec::new();
        let mut u = u0.values().to_vec();
        for k in 0..n_steps {
            let t = times[k];
            let out = self.step(t, &u, h, background.map(|b| b[k].as_slice()))?;
            log::trace!("step {k} at t = {t}: {} Picard iterations", out.iterations);
            u = out.next;
            let state = self.field(u.clone());
            energies.push(self.energy(&state)?);
            states.push(state);
            times.push(step_time(t0, t_end, h, k + 1, n_steps));
            picard_iters.push(out.iterations);
            residuals.push(out.residual);
            if self.config.record_stages {
                stages.push(out.stages.into_iter().map(|s| self.field(s)).collect());
            }
        }
        Ok(Trajectory {
            times,
            states,
            picard_iters,
            residuals,
            energies,
            stage_nodes: self.tableau.c.clone(),
            stages: self.config.record_stages.then_some(stages),
        })
    }
}

/// Builds a solver for the data's mode set and runs it on `[t0, t0 + length]`.
pub fn local_solve(u0: &CoeffField, t0: f64, length: f64, config: &SolverConfig) -> Result<Trajectory> {
    Solver::new(Arc::clone(u0.mode_set()), config.clone())?.local_solve(u0, t0, length)
}

/// `(w, w_t)` of a half-wave state: `w = Re u`, `w_t = √−Δ Im u`, both as
/// coefficient fields of real-valued functions.
pub fn halfwave_state_to_wave(u: &CoeffField) -> Result<(CoeffField, CoeffField)> {
    let modes = u.mode_set();
    let mut w = CoeffField::zeros(Arc::clone(modes));
    let mut wt = CoeffField::zeros(Arc::clone(modes));
    for (k, m) in modes.modes().iter().enumerate() {
        let mirror =
            modes.index_of(m.n, -m.nprime).ok_or_else(|| Error::Domain("mode set is not symmetric in n'".into()))?;
        let a = u.values()[k];
        let b = u.values()[mirror].conj();
        w.values_mut()[k] = (a + b) * 0.5;
        wt.values_mut()[k] = (a - b) / Complex64::new(0.0, 2.0) * m.z;
    }
    Ok((w, wt))
}

/// [`halfwave_state_to_wave`] at every recorded time.
pub fn halfwave_to_wave(traj: &Trajectory) -> Result<Vec<(CoeffField, CoeffField)>> {
    traj.states.iter().map(halfwave_state_to_wave).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::build_modes;
    use approx::assert_abs_diff_eq;

    #[test]
    fn nonlinearity_examples() {
        assert_eq!(power_nonlinearity(2.0, 2.0), 8.0);
        assert_abs_diff_eq!(power_nonlinearity(-1.5, 3.0), -5.0625, epsilon = 1e-15);
        assert_abs_diff_eq!(power_nonlinearity(-1.5, 2.5), -(1.5f64.powf(3.5)), epsilon = 1e-14);
        let grid = Arc::new(crate::grid::Grid::new(4, 3).unwrap());
        let f = PhysicalField::from_fn(grid, |r, _| Complex64::new(0.0, r));
        assert!(nonlinearity(&f, 2.0).values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn lipschitz_examples() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(lipschitz_ratio(one, Complex64::default(), 2.0).unwrap(), 1.0);
        assert!(lipschitz_ratio(one, one, 2.0).is_err());
        let b = Complex64::new(0.7, 0.0);
        let r = lipschitz_ratio(b + 1e-7, b, 2.0).unwrap();
        assert_abs_diff_eq!(r, 1.5, epsilon = 1e-6);
    }

    #[test]
    fn gauss_tableau_reproduces_polynomials() {
        let t = Tableau::gauss(3);
        for (j, &c) in t.c.iter().enumerate() {
            // ∫₀^c τ² dτ from the stage weights.
            let v: f64 = t.a[j].iter().zip(&t.c).map(|(a, x)| a * x * x).sum();
            assert_abs_diff_eq!(v, c.powi(3) / 3.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(t.b.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let bad = SolverConfig { dealias_factor: 1.2, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { gamma: 0.5, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        assert_eq!(step_count(0.5, 1e-3), 500);
        assert_eq!(step_count(0.05, 0.005), 10);
        assert_eq!(step_count(0.3, 0.25), 2);
    }

    #[test]
    fn zero_data_short_circuits() {
        let modes = Arc::new(build_modes(3, 2, None).unwrap());
        let traj = local_solve(&CoeffField::zeros(modes), 0.0, 0.1, &SolverConfig::default()).unwrap();
        assert_eq!(traj.times.len(), 101);
        assert!(traj.states.iter().all(CoeffField::is_zero));
    }

    #[test]
    fn imaginary_single_mode_energy_is_kinetic() {
        let modes = Arc::new(build_modes(2, 1, None).unwrap());
        let t = Transform::for_modes(Arc::clone(&modes), 2.0).unwrap();
        let u = CoeffField::delta(modes, 1, 0).unwrap().scale(Complex64::new(0.0, 0.3));
        let lambda = 2.404825557695773;
        assert_abs_diff_eq!(energy(&u, 2.0, &t).unwrap(), 0.5 * lambda * lambda * 0.09, epsilon = 1e-13);
    }
}
