//! The eigenvalue lattice `z = sqrt(λ_n² + n′²)` and its truncations.

use crate::bessel::bessel_zeros;
use crate::error::{Error, Result};

/// One product eigenfunction `e_n(r) e^{2πi n′ x₃}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: usize,
    pub nprime: i64,
    pub lambda: f64,
    pub z: f64,
}

/// A truncation of the lattice: the rectangle `1 ≤ n ≤ n_max`,
/// `|n′| ≤ nprime_max`, optionally intersected with the ball `z ≤ z_max`.
///
/// Modes are stored in lexicographic `(n, n′)` order.
#[derive(Debug, Clone)]
pub struct ModeSet {
    modes: Vec<Mode>,
    n_max: usize,
    nprime_max: usize,
    z_max: Option<f64>,
    lambdas: Vec<f64>,
    rect_index: Vec<u32>,
}

const MASKED: u32 = u32::MAX;

impl PartialEq for ModeSet {
    fn eq(&self, other: &Self) -> bool {
        self.n_max == other.n_max
            && self.nprime_max == other.nprime_max
            && self.z_max.map(f64::to_bits) == other.z_max.map(f64::to_bits)
    }
}

/// Builds the truncated lattice. `n_max` must be at least 1.
pub fn build_modes(n_max: usize, nprime_max: usize, z_max: Option<f64>) -> Result<ModeSet> {
    ModeSet::new(n_max, nprime_max, z_max)
}

impl ModeSet {
    pub fn new(n_max: usize, nprime_max: usize, z_max: Option<f64>) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::Domain("n_max must be at least 1".into()));
        }
        if let Some(zm) = z_max {
            if !(zm > 0.0) {
                return Err(Error::Domain(format!("z_max must be positive, got {zm}")));
            }
        }
        let lambdas = bessel_zeros(n_max)?;
        let width = 2 * nprime_max + 1;
        let mut modes = Vec::with_capacity(n_max * width);
        let mut rect_index = vec![MASKED; n_max * width];
        for (i, &lambda) in lambdas.iter().enumerate() {
            for j in 0..width {
                let nprime = j as i64 - nprime_max as i64;
                let np = nprime as f64;
                let z = (lambda * lambda + np * np).sqrt();
                if z_max.is_some_and(|zm| z > zm) {
                    continue;
                }
                rect_index[i * width + j] = modes.len() as u32;
                modes.push(Mode { n: i + 1, nprime, lambda, z });
            }
        }
        Ok(Self { modes, n_max, nprime_max, z_max, lambdas, rect_index })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn nprime_max(&self) -> usize {
        self.nprime_max
    }

    pub fn z_max(&self) -> Option<f64> {
        self.z_max
    }

    /// `λ_1, …, λ_{n_max}`.
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// Number of slots in the full rectangle, masked or not.
    pub fn rect_len(&self) -> usize {
        self.n_max * (2 * self.nprime_max + 1)
    }

    /// Position of `(n, n′)` in [`modes`](Self::modes), if present.
    pub fn index_of(&self, n: usize, nprime: i64) -> Option<usize> {
        if n == 0 || n > self.n_max || nprime.unsigned_abs() as usize > self.nprime_max {
            return None;
        }
        let j = (nprime + self.nprime_max as i64) as usize;
        match self.rect_index[(n - 1) * (2 * self.nprime_max + 1) + j] {
            MASKED => None,
            k => Some(k as usize),
        }
    }

    /// Largest frequency present.
    pub fn max_z(&self) -> f64 {
        self.modes.iter().map(|m| m.z).fold(0.0, f64::max)
    }

    /// Smallest frequency of a lattice point that this truncation leaves out.
    pub fn first_excluded_z(&self) -> Result<f64> {
        let next_lambda = crate::bessel::bessel_zero(self.n_max + 1)?;
        let l1 = self.lambdas[0];
        let np = (self.nprime_max + 1) as f64;
        let mut z = next_lambda.min((l1 * l1 + np * np).sqrt());
        if self.z_max.is_some() {
            let masked_min = self
                .rect_index
                .iter()
                .enumerate()
                .filter(|(_, &k)| k == MASKED)
                .map(|(slot, _)| {
                    let width = 2 * self.nprime_max + 1;
                    let lambda = self.lambdas[slot / width];
                    let nprime = (slot % width) as f64 - self.nprime_max as f64;
                    (lambda * lambda + nprime * nprime).sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            z = z.min(masked_min);
        }
        Ok(z)
    }
}

/// `N(k) = #{(n, n′) : ⌊z⌋ = k}` for `0 ≤ k ≤ k_max`.
///
/// Fails with [`Error::Coverage`] unless every lattice point with
/// `z < k_max + 1` belongs to `mode_set`.
pub fn multiplicity_histogram(mode_set: &ModeSet, k_max: usize) -> Result<Vec<u64>> {
    let required = k_max as f64 + 1.0;
    let available = mode_set.first_excluded_z()?;
    if available < required {
        return Err(Error::Coverage { required, available });
    }
    let mut hist = vec![0u64; k_max + 1];
    for m in mode_set.modes() {
        let k = m.z.floor() as usize;
        if k <= k_max {
            hist[k] += 1;
        }
    }
    Ok(hist)
}

/// The smallest ball-masked mode set on which [`multiplicity_histogram`]
/// up to `k_max` is defined.
pub fn covering_mode_set(k_max: usize) -> Result<ModeSet> {
    let bound = k_max as f64 + 1.0;
    let mut n_max = 1;
    while crate::bessel::bessel_zero(n_max + 1)? < bound {
        n_max += 1;
    }
    ModeSet::new(n_max, k_max + 1, Some(bound))
}
