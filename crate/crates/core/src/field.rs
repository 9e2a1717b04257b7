use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::modes::ModeSet;
use num_complex::Complex64;
use std::io::{Read, Write};
use std::sync::Arc;

/// Spectral coefficients `a_{n,n′}` over a [`ModeSet`], in its mode order.
#[derive(Debug, Clone)]
pub struct CoeffField {
    modes: Arc<ModeSet>,
    values: Vec<Complex64>,
}

impl CoeffField {
    pub fn zeros(modes: Arc<ModeSet>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); modes.len()];
        Self { modes, values }
    }

    pub fn from_values(modes: Arc<ModeSet>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != modes.len() {
            return Err(Error::Domain(format!("{} coefficients supplied for {} modes", values.len(), modes.len())));
        }
        Ok(Self { modes, values })
    }

    /// Field with coefficient 1 at `(n, n′)` and 0 elsewhere.
    pub fn delta(modes: Arc<ModeSet>, n: usize, nprime: i64) -> Result<Self> {
        let k = modes
            .index_of(n, nprime)
            .ok_or_else(|| Error::Domain(format!("mode ({n}, {nprime}) is not in the mode set")))?;
        let mut f = Self::zeros(modes);
        f.values[k] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    /// Applies `f(mode, a)` to every coefficient.
    pub fn map(&self, f: impl Fn(&crate::modes::Mode, Complex64) -> Complex64) -> Self {
        let values = self.modes.modes().iter().zip(&self.values).map(|(m, &a)| f(m, a)).collect();
        Self { modes: Arc::clone(&self.modes), values }
    }

    pub fn mode_set(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, n: usize, nprime: i64) -> Option<Complex64> {
        self.modes.index_of(n, nprime).map(|k| self.values[k])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|a| a.re == 0.0 && a.im == 0.0)
    }

    /// `( Σ ⟨z⟩^{2s} |a|² )^{1/2}` with `⟨z⟩ = (1 + z²)^{1/2}`.
    pub fn hs_norm(&self, s: f64) -> f64 {
        self.modes
            .modes()
            .iter()
            .zip(&self.values)
            .map(|(m, a)| (1.0 + m.z * m.z).powf(s) * a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Plain ℓ² norm of the coefficients, equal to the L² norm of the function.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.modes, &other.modes) || *self.modes == *other.modes {
            Ok(())
        } else {
            Err(Error::ModeSetMismatch)
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| a + c * b).collect();
        Ok(Self { modes: Arc::clone(&self.modes), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { modes: Arc::clone(&self.modes), values: self.values.iter().map(|&a| c * a).collect() }
    }

    /// ℓ² distance to `other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
    }
}

/// `hs_norm` as a free function.
pub fn hs_norm(coeffs: &CoeffField, s: f64) -> f64 {
    coeffs.hs_norm(s)
}

/// Complex point values on a [`Grid`], r-major (`values[i·n_x3 + j]` at
/// `(r_i, x3_j)`).
#[derive(Debug, Clone)]
pub struct PhysicalField {
    grid: Arc<Grid>,
    values: Vec<Complex64>,
}

impl PhysicalField {
    pub fn zeros(grid: Arc<Grid>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, values }
    }

    pub fn from_values(grid: Arc<Grid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Domain(format!(
                "{} samples supplied for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(r, x3)` at every grid point.
    pub fn from_fn(grid: Arc<Grid>, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for &r in grid.r_nodes() {
            for &x in grid.x3_nodes() {
                values.push(f(r, x));
            }
        }
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn at(&self, i_r: usize, j_x3: usize) -> Complex64 {
        self.values[i_r * self.grid.n_x3() + j_x3]
    }

    /// Quadrature value of `‖f‖_{L^p(B₂×𝕋)}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.grid.integrate(self.values.iter().map(|v| v.norm().powf(p))).powf(1.0 / p)
    }
}

const MAGIC: &[u8; 8] = b"CYLNLWCF";
const VERSION: u32 = 1;

/// Writes `field` in the binary snapshot format: the 8-byte magic
/// `CYLNLWCF`, a little-endian `u32` version and a reserved `u32`, then
/// `n_max` and `nprime_max` as little-endian `u64`, then `(re, im)` pairs
/// of little-endian `f64` over the full rectangle in lexicographic
/// `(n, n′)` order (modes removed by a ball mask are written as zero).
pub fn write_snapshot<W: Write>(field: &CoeffField, mut w: W) -> Result<()> {
    let modes = field.mode_set();
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&0u32.to_le_bytes())?;
    w.write_all(&(modes.n_max() as u64).to_le_bytes())?;
    w.write_all(&(modes.nprime_max() as u64).to_le_bytes())?;
    let np = modes.nprime_max() as i64;
    let mut buf = Vec::with_capacity(16 * modes.rect_len());
    for n in 1..=modes.n_max() {
        for nprime in -np..=np {
            let a = field.get(n, nprime).unwrap_or_default();
            buf.extend_from_slice(&a.re.to_le_bytes());
            buf.extend_from_slice(&a.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads a snapshot onto `modes`, whose rectangle must match the header.
/// Nonzero values at masked positions are rejected.
pub fn read_snapshot<R: Read>(modes: Arc<ModeSet>, mut r: R) -> Result<CoeffField> {
    let mut header = [0u8; 32];
    r.read_exact(&mut header).map_err(|e| Error::Snapshot(format!("truncated header: {e}")))?;
    if &header[..8] != MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
    if version != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {version}")));
    }
    let n_max = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
    let nprime_max = u64::from_le_bytes(header[24..32].try_into().unwrap()) as usize;
    if n_max != modes.n_max() || nprime_max != modes.nprime_max() {
        return Err(Error::Snapshot(format!(
            "snapshot holds a {n_max} x {nprime_max} rectangle, expected {} x {}",
            modes.n_max(),
            modes.nprime_max()
        )));
    }
    let mut body = vec![0u8; 16 * modes.rect_len()];
    r.read_exact(&mut body).map_err(|e| Error::Snapshot(format!("truncated body: {e}")))?;
    let mut field = CoeffField::zeros(Arc::clone(&modes));
    let np = nprime_max as i64;
    let mut chunks = body.chunks_exact(16);
    for n in 1..=n_max {
        for nprime in -np..=np {
            let c = chunks.next().expect("body length checked");
            let re = f64::from_le_bytes(c[..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..].try_into().unwrap());
            match modes.index_of(n, nprime) {
                Some(k) => field.values[k] = Complex64::new(re, im),
                None if re != 0.0 || im != 0.0 => {
                    return Err(Error::Snapshot(format!("nonzero value at masked mode ({n}, {nprime})")))
                }
                None => {}
            }
        }
    }
    Ok(field)
}
