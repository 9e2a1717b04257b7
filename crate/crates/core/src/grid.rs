use crate::error::{Error, Result};
use crate::modes::ModeSet;
use crate::quadrature::gauss_legendre_on;
use std::f64::consts::PI;

/// Tensor grid on `B₂ × 𝕋`: Gauss–Legendre radii with weights for the
/// area measure `2π r dr`, times uniform nodes `j / n_x3` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    r_nodes: Vec<f64>,
    r_weights: Vec<f64>,
    x3_nodes: Vec<f64>,
}

impl Grid {
    pub fn new(n_r: usize, n_x3: usize) -> Result<Self> {
        if n_r == 0 || n_x3 == 0 {
            return Err(Error::Domain(format!("grid counts must be positive, got ({n_r}, {n_x3})")));
        }
        let (r, w) = gauss_legendre_on(n_r, 0.0, 1.0);
        let r_weights = r.iter().zip(&w).map(|(&ri, &wi)| 2.0 * PI * ri * wi).collect();
        let x3_nodes = (0..n_x3).map(|j| j as f64 / n_x3 as f64).collect();
        Ok(Self { r_nodes: r, r_weights, x3_nodes })
    }

    /// Default grid for a mode set: `max(128, 4·n_max)` radial nodes and
    /// `⌈dealias·(2N′+1)⌉` periodic nodes.
    pub fn for_modes(modes: &ModeSet, dealias: f64) -> Result<Self> {
        if !(dealias >= 1.0) {
            return Err(Error::Domain(format!("dealias factor must be at least 1, got {dealias}")));
        }
        let n_r = default_radial_nodes(modes.n_max());
        let n_x3 = (dealias * (2 * modes.nprime_max() + 1) as f64).ceil() as usize;
        Self::new(n_r, n_x3)
    }

    pub fn r_nodes(&self) -> &[f64] {
        &self.r_nodes
    }

    pub fn r_weights(&self) -> &[f64] {
        &self.r_weights
    }

    pub fn x3_nodes(&self) -> &[f64] {
        &self.x3_nodes
    }

    /// Angular resolution; always 1 for radial fields.
    pub fn m_theta(&self) -> usize {
        1
    }

    pub fn n_r(&self) -> usize {
        self.r_nodes.len()
    }

    pub fn n_x3(&self) -> usize {
        self.x3_nodes.len()
    }

    pub fn counts(&self) -> (usize, usize) {
        (self.n_r(), self.n_x3())
    }

    pub fn len(&self) -> usize {
        self.n_r() * self.n_x3()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `∫_{B₂×𝕋} f` for real point values in r-major order.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        let n_x3 = self.n_x3();
        let mut row_sum = 0.0;
        let mut total = 0.0;
        for (k, v) in values.into_iter().enumerate() {
            row_sum += v;
            if (k + 1) % n_x3 == 0 {
                total += self.r_weights[k / n_x3] * row_sum;
                row_sum = 0.0;
            }
        }
        total / n_x3 as f64
    }
}

pub fn default_radial_nodes(n_max: usize) -> usize {
    (4 * n_max).max(128)
}
