//! Radial Dirichlet eigenfunctions of the disk and the transforms between
//! coefficient space and grid values.

use crate::bessel::{bessel_zero, j0_j1};
use crate::error::{Error, Result};
use crate::field::{CoeffField, PhysicalField};
use crate::grid::Grid;
use crate::modes::ModeSet;
use crate::par;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// `e_n(r) = J₀(λ_n r) / (√π |J₁(λ_n)|)`, normalized in `L²(B₂)` and
/// positive at the origin.
#[derive(Debug, Clone, Copy)]
pub struct RadialEigenfunction {
    pub n: usize,
    pub lambda: f64,
    scale: f64,
}

impl RadialEigenfunction {
    pub fn new(n: usize) -> Result<Self> {
        Ok(Self::from_zero(n, bessel_zero(n)?))
    }

    pub fn from_zero(n: usize, lambda: f64) -> Self {
        let j1 = j0_j1(lambda).1;
        Self { n, lambda, scale: 1.0 / (PI.sqrt() * j1.abs()) }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        self.scale * j0_j1(self.lambda * r).0
    }
}

/// `e_n(r)` for `0 ≤ r ≤ 1`.
pub fn eigenfunction_eval(n: usize, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius must lie in [0, 1], got {r}")));
    }
    Ok(RadialEigenfunction::new(n)?.eval(r))
}

/// Quadrature value of `‖e_n‖_{L^p(B₂)}`.
pub fn eigenfunction_lp_norm(n: usize, p: f64, grid: &Grid) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Domain(format!("exponent must be at least 1, got {p}")));
    }
    if grid.n_r() < 4 * n {
        log::warn!("{} radial nodes under-resolve e_{n}; at least {} recommended", grid.n_r(), 4 * n);
    }
    let e = RadialEigenfunction::new(n)?;
    let integral: f64 = grid.r_nodes().iter().zip(grid.r_weights()).map(|(&r, &w)| w * e.eval(r).abs().powf(p)).sum();
    Ok(integral.powf(1.0 / p))
}

/// Precomputed eigenfunction table and FFT plans for one
/// ([`ModeSet`], [`Grid`]) pair.
///
/// `analyze` is the exact adjoint of `synthesize` with respect to the grid
/// quadrature, so `analyze ∘ synthesize` is the identity whenever the
/// quadrature integrates products of resolved modes exactly.
pub struct Transform {
    modes: Arc<ModeSet>,
    grid: Arc<Grid>,
    /// `e_n(r_i)`, row `n − 1`.
    table: Vec<f64>,
    /// `W_i e_n(r_i)`, row `n − 1`.
    weighted: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Transform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transform")
            .field("n_max", &self.modes.n_max())
            .field("nprime_max", &self.modes.nprime_max())
            .field("grid", &self.grid.counts())
            .finish()
    }
}

impl Transform {
    pub fn new(modes: Arc<ModeSet>, grid: Arc<Grid>) -> Result<Self> {
        let width = 2 * modes.nprime_max() + 1;
        if grid.n_x3() < width {
            return Err(Error::Resolution(format!(
                "{} periodic nodes cannot represent |n'| <= {} (need at least {width})",
                grid.n_x3(),
                modes.nprime_max()
            )));
        }
        if grid.n_r() < 2 * modes.n_max() {
            log::warn!("{} radial nodes for n_max = {}; orthogonality will be inexact", grid.n_r(), modes.n_max());
        }
        let n_r = grid.n_r();
        let mut table = Vec::with_capacity(modes.n_max() * n_r);
        for (i, &lambda) in modes.lambdas().iter().enumerate() {
            let e = RadialEigenfunction::from_zero(i + 1, lambda);
            table.extend(grid.r_nodes().iter().map(|&r| e.eval(r)));
        }
        let weighted =
            table.chunks_exact(n_r).flat_map(|row| row.iter().zip(grid.r_weights()).map(|(e, w)| e * w)).collect();
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n_x3());
        let inv = planner.plan_fft_inverse(grid.n_x3());
        Ok(Self { modes, grid, table, weighted, fwd, inv })
    }

    /// Transform on the default grid for `modes` with the given oversampling.
    pub fn for_modes(modes: Arc<ModeSet>, dealias: f64) -> Result<Self> {
        let grid = Arc::new(Grid::for_modes(&modes, dealias)?);
        Self::new(modes, grid)
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// `e_n(r_i)` for the radial nodes of the grid.
    pub fn radial_row(&self, n: usize) -> &[f64] {
        let n_r = self.grid.n_r();
        &self.table[(n - 1) * n_r..n * n_r]
    }

    fn bin(&self, nprime: i64) -> usize {
        let n_x3 = self.grid.n_x3() as i64;
        nprime.rem_euclid(n_x3) as usize
    }

    /// Coefficients laid out on the full rectangle, row `n − 1`.
    fn to_rect(&self, coeffs: &CoeffField) -> Vec<Complex64> {
        let modes = &self.modes;
        let width = 2 * modes.nprime_max() + 1;
        let mut rect = vec![Complex64::default(); modes.n_max() * width];
        let np = modes.nprime_max() as i64;
        for (m, &a) in modes.modes().iter().zip(coeffs.values()) {
            rect[(m.n - 1) * width + (m.nprime + np) as usize] = a;
        }
        rect
    }

    fn check(&self, coeffs: &CoeffField) -> Result<()> {
        let other = coeffs.mode_set();
        if Arc::ptr_eq(other, &self.modes) || **other == *self.modes {
            Ok(())
        } else {
            Err(Error::ModeSetMismatch)
        }
    }

    /// Evaluates `Σ a_{n,n′} e_n(r) e^{2πi n′ x₃}` on the grid.
    pub fn synthesize(&self, coeffs: &CoeffField) -> Result<PhysicalField> {
        self.check(coeffs)?;
        let rect = self.to_rect(coeffs);
        let n_max = self.modes.n_max();
        let np = self.modes.nprime_max() as i64;
        let width = (2 * np + 1) as usize;
        let n_r = self.grid.n_r();
        let n_x3 = self.grid.n_x3();
        let mut values = vec![Complex64::default(); n_r * n_x3];
        let bins: Vec<usize> = (-np..=np).map(|k| self.bin(k)).collect();
        par::for_each_chunk(&mut values, n_x3, |i, row| {
            for n in 0..n_max {
                let e = self.table[n * n_r + i];
                let src = &rect[n * width..(n + 1) * width];
                for (a, &b) in src.iter().zip(&bins) {
                    row[b] += a * e;
                }
            }
        });
        self.inv.process(&mut values);
        PhysicalField::from_values(Arc::clone(&self.grid), values)
    }

    /// Projects grid values onto the mode set: periodic DFT, then the
    /// quadrature inner product with each `e_n`.
    pub fn analyze(&self, field: &PhysicalField) -> Result<CoeffField> {
        if !Arc::ptr_eq(field.grid(), &self.grid) && **field.grid() != *self.grid {
            return Err(Error::Domain("field lives on a different grid".into()));
        }
        let n_r = self.grid.n_r();
        let n_x3 = self.grid.n_x3();
        let np = self.modes.nprime_max() as i64;
        let width = (2 * np + 1) as usize;
        let mut buf = field.values().to_vec();
        self.fwd.process(&mut buf);
        let scale = 1.0 / n_x3 as f64;
        let bins: Vec<usize> = (-np..=np).map(|k| self.bin(k)).collect();
        let mut rect = vec![Complex64::default(); self.modes.n_max() * width];
        par::for_each_chunk(&mut rect, width, |n, out| {
            let w = &self.weighted[n * n_r..(n + 1) * n_r];
            for (i, &wi) in w.iter().enumerate() {
                let row = &buf[i * n_x3..(i + 1) * n_x3];
                for (o, &b) in out.iter_mut().zip(&bins) {
                    *o += row[b] * wi;
                }
            }
            for o in out.iter_mut() {
                *o *= scale;
            }
        });
        let values = self.modes.modes().iter().map(|m| rect[(m.n - 1) * width + (m.nprime + np) as usize]).collect();
        CoeffField::from_values(Arc::clone(&self.modes), values)
    }
}

/// One-shot synthesis on `grid`.
pub fn synthesize(coeffs: &CoeffField, grid: Arc<Grid>) -> Result<PhysicalField> {
    Transform::new(Arc::clone(coeffs.mode_set()), grid)?.synthesize(coeffs)
}

/// One-shot analysis onto `modes`.
pub fn analyze(field: &PhysicalField, modes: Arc<ModeSet>) -> Result<CoeffField> {
    Transform::new(modes, Arc::clone(field.grid()))?.analyze(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::build_modes;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigenfunction_values() {
        assert_abs_diff_eq!(eigenfunction_eval(1, 0.0).unwrap(), 1.0867616361312725, epsilon = 1e-12);
        for n in [1, 2, 10, 57] {
            assert_abs_diff_eq!(eigenfunction_eval(n, 1.0).unwrap(), 0.0, epsilon = 1e-10);
        }
        assert!(eigenfunction_eval(1, 1.5).is_err());
    }

    #[test]
    fn unit_l2_norm() {
        let grid = Grid::new(256, 1).unwrap();
        for n in [1, 5, 40] {
            assert_abs_diff_eq!(eigenfunction_lp_norm(n, 2.0, &grid).unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn delta_synthesizes_to_product_mode() {
        let modes = Arc::new(build_modes(4, 3, None).unwrap());
        let t = Transform::for_modes(Arc::clone(&modes), 2.0).unwrap();
        let e = RadialEigenfunction::new(3).unwrap();
        let f = t.synthesize(&CoeffField::delta(modes, 3, -2).unwrap()).unwrap();
        let grid = t.grid();
        for (i, &r) in grid.r_nodes().iter().enumerate() {
            for (j, &x) in grid.x3_nodes().iter().enumerate() {
                let want = Complex64::from_polar(e.eval(r), -2.0 * 2.0 * PI * x);
                assert_abs_diff_eq!((f.at(i, j) - want).norm(), 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn too_few_periodic_nodes_is_a_resolution_error() {
        let modes = Arc::new(build_modes(2, 4, None).unwrap());
        let grid = Arc::new(Grid::new(32, 8).unwrap());
        assert!(matches!(Transform::new(modes, grid), Err(Error::Resolution(_))));
    }
}
