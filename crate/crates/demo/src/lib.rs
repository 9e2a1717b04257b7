//! WebAssembly bindings for the static page in `www/`.
//!
//! Each export returns a JSON document. The computations live in plain
//! functions so they can be exercised natively.

use cylnlw::admissibility::{condition_14, gamma_bound_thm1, region_scan, supercritical, G2Variant, ScanSpec};
use cylnlw::bessel::bessel_zero;
use cylnlw::random::{Ensemble, Flavor};
use cylnlw::solver::{Solver, SolverConfig};
use cylnlw::transform::RadialEigenfunction;
use cylnlw::{build_modes, CoeffField};
use num_complex::Complex64;
use serde::Serialize;
use std::sync::Arc;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct Profile {
    pub n: usize,
    pub lambda: f64,
    pub mcmahon: f64,
    pub r: Vec<f64>,
    pub value: Vec<f64>,
}

/// `e_n` sampled at `points` equispaced radii in `[0, 1]`.
pub fn eigenfunction_profile(n: usize, points: usize) -> cylnlw::Result<Profile> {
    let e = RadialEigenfunction::new(n)?;
    let lambda = bessel_zero(n)?;
    let r: Vec<f64> = (0..points.max(2)).map(|i| i as f64 / (points.max(2) - 1) as f64).collect();
    let value = r.iter().map(|&x| e.eval(x)).collect();
    let nf = n as f64;
    Ok(Profile { n, lambda, mcmahon: nf * std::f64::consts::PI - std::f64::consts::FRAC_PI_4, r, value })
}

#[derive(Debug, Serialize)]
pub struct Region {
    pub alphas: Vec<f64>,
    pub gammas: Vec<f64>,
    /// Row-major over `(alpha, gamma)`: bit 0 local, bit 1 global, bit 2 supercritical.
    pub flags: Vec<u8>,
    pub threshold: f64,
}

pub fn admissibility_region(alpha_points: usize, gamma_points: usize, derived: bool) -> cylnlw::Result<Region> {
    let spec = ScanSpec {
        alpha_min: 1.02,
        alpha_max: 2.5,
        alpha_points,
        gamma_min: 1.0,
        gamma_max: 5.0,
        gamma_points,
        g2_variant: if derived { G2Variant::Derived } else { G2Variant::Printed },
    };
    let report = region_scan(&spec)?;
    let flags = report
        .cells
        .iter()
        .map(|c| u8::from(c.cond11) | u8::from(c.cond14) << 1 | u8::from(c.supercritical) << 2)
        .collect();
    Ok(Region { alphas: spec.alphas(), gammas: spec.gammas(), flags, threshold: report.gwp_threshold })
}

/// Classification of a single point, for hover readouts.
pub fn classify(alpha: f64, gamma: f64, derived: bool) -> cylnlw::Result<serde_json::Value> {
    let variant = if derived { G2Variant::Derived } else { G2Variant::Printed };
    let bound = gamma_bound_thm1(alpha, variant)?;
    Ok(serde_json::json!({
        "local": gamma >= 1.0 && gamma < bound,
        "global": condition_14(alpha, gamma),
        "supercritical": supercritical(alpha, gamma),
        "gamma_bound": if bound.is_finite() { Some(bound) } else { None },
    }))
}

#[derive(Debug, Serialize)]
pub struct Evolution {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub h1: Vec<f64>,
    pub r: Vec<f64>,
    /// `Re u(r, x₃ = 0)` at each recorded time.
    pub profiles: Vec<Vec<f64>>,
    pub max_relative_energy_drift: f64,
}

fn radial_trace(u: &CoeffField, rows: &[Vec<f64>]) -> Vec<f64> {
    let mut sums = vec![Complex64::default(); rows.len()];
    for (m, a) in u.mode_set().modes().iter().zip(u.values()) {
        sums[m.n - 1] += a;
    }
    (0..rows[0].len()).map(|i| rows.iter().zip(&sums).map(|(row, s)| row[i] * s.re).sum()).collect()
}

/// Nonlinear (or linear) evolution of one random datum on a small truncation.
pub fn evolve(amplitude: f64, gamma: f64, seed: u64, t_final: f64, nonlinear: bool) -> cylnlw::Result<Evolution> {
    let modes = Arc::new(build_modes(10, 4, None)?);
    let ens = Ensemble::new(2.0, Flavor::RealPair, Arc::clone(&modes), 0.0, seed)?;
    let u0 = ens.sample_halfwave(0)?.scale(Complex64::new(amplitude, 0.0));
    let config = SolverConfig { gamma, dt: 0.01, nonlinear, ..Default::default() };
    let traj = Solver::new(Arc::clone(&modes), config)?.local_solve(&u0, 0.0, t_final)?;
    let r: Vec<f64> = (0..=60).map(|i| i as f64 / 60.0).collect();
    let rows: Vec<Vec<f64>> = modes
        .lambdas()
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let e = RadialEigenfunction::from_zero(i + 1, l);
            r.iter().map(|&x| e.eval(x)).collect()
        })
        .collect();
    Ok(Evolution {
        profiles: traj.states.iter().map(|u| radial_trace(u, &rows)).collect(),
        h1: traj.states.iter().map(|u| u.hs_norm(1.0)).collect(),
        max_relative_energy_drift: traj.max_relative_energy_drift(),
        times: traj.times,
        energy: traj.energies,
        r,
    })
}

fn to_js<T: Serialize>(result: cylnlw::Result<T>) -> Result<String, JsError> {
    let value = result.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = eigenfunctionProfile)]
pub fn eigenfunction_profile_js(n: usize, points: usize) -> Result<String, JsError> {
    to_js(eigenfunction_profile(n, points))
}

#[wasm_bindgen(js_name = admissibilityRegion)]
pub fn admissibility_region_js(alpha_points: usize, gamma_points: usize, derived: bool) -> Result<String, JsError> {
    to_js(admissibility_region(alpha_points, gamma_points, derived))
}

#[wasm_bindgen(js_name = classifyPoint)]
pub fn classify_js(alpha: f64, gamma: f64, derived: bool) -> Result<String, JsError> {
    to_js(classify(alpha, gamma, derived))
}

#[wasm_bindgen(js_name = evolveRandomDatum)]
pub fn evolve_js(amplitude: f64, gamma: f64, seed: u32, t_final: f64, nonlinear: bool) -> Result<String, JsError> {
    to_js(evolve(amplitude, gamma, u64::from(seed), t_final, nonlinear))
}
