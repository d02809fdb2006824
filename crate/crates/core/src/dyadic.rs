//! Periodic grids on `[-1, 1)`, Littlewood-Paley blocks and block-norm
//! smoothness readouts.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use once_cell::race::OnceBox;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fft;
use crate::{Error, Result};

/// Blocks whose norm falls below this fraction of the largest block norm
/// are treated as roundoff and skipped by [`estimate_smoothness`].
pub const NOISE_FLOOR: f64 = 1e-12;

/// Uniform grid of `2^J` points `x_k = -1 + k 2^(1-J)` on the torus of period 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    level: u32,
}

pub fn make_grid(level: u32) -> Result<TorusGrid> {
    TorusGrid::new(level)
}

impl TorusGrid {
    pub fn new(level: u32) -> Result<Self> {
        if !(4..=16).contains(&level) {
            return Err(Error::GridLevel(level));
        }
        Ok(Self { level })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn len(&self) -> usize {
        1 << self.level
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of intervals covering `[0, 1]`, i.e. `2^(J-1)`.
    pub fn half(&self) -> usize {
        self.len() / 2
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.len() as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        -1.0 + k as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Signed frequency index of FFT slot `m`; the Nyquist slot maps to `+n/2`.
    pub fn signed_index(&self, m: usize) -> i64 {
        let n = self.len();
        if m <= n / 2 {
            m as i64
        } else {
            m as i64 - n as i64
        }
    }

    /// Wavenumber `xi_m = pi * m` for slot `m`.
    pub fn wavenumber(&self, m: usize) -> f64 {
        PI * self.signed_index(m) as f64
    }

    pub fn max_wavenumber(&self) -> f64 {
        PI * self.half() as f64
    }

    pub(crate) fn ensure_same(&self, other: &TorusGrid) -> Result<()> {
        if self.level != other.level {
            return Err(Error::GridMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(())
    }
}

/// Real samples on a [`TorusGrid`] with a lazily cached spectrum.
pub struct GridFunction {
    grid: TorusGrid,
    values: Vec<f64>,
    spectrum: OnceBox<Vec<Complex64>>,
}

impl Clone for GridFunction {
    fn clone(&self) -> Self {
        let spectrum = OnceBox::new();
        if let Some(s) = self.spectrum.get() {
            let _ = spectrum.set(alloc::boxed::Box::new(s.clone()));
        }
        Self {
            grid: self.grid,
            values: self.values.clone(),
            spectrum,
        }
    }
}

impl core::fmt::Debug for GridFunction {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("GridFunction")
            .field("level", &self.grid.level)
            .field("values", &self.values)
            .finish()
    }
}

impl GridFunction {
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Length {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(Self {
            grid,
            values,
            spectrum: OnceBox::new(),
        })
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: TorusGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
            spectrum: OnceBox::new(),
        }
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(f64) -> f64) -> Self {
        Self {
            grid,
            values: grid.points().into_iter().map(f).collect(),
            spectrum: OnceBox::new(),
        }
    }

    /// Builds a real function from coefficients. The coefficients are first
    /// projected onto the conjugate-symmetric subspace; exact zeros stay zero.
    pub fn from_spectrum(grid: TorusGrid, spectrum: Vec<Complex64>) -> Result<Self> {
        let n = grid.len();
        if spectrum.len() != n {
            return Err(Error::Length {
                expected: n,
                got: spectrum.len(),
            });
        }
        let mut sym = spectrum.clone();
        sym[0] = Complex64::new(spectrum[0].re, 0.0);
        sym[n / 2] = Complex64::new(spectrum[n / 2].re, 0.0);
        for m in 1..n / 2 {
            let c = (spectrum[m] + spectrum[n - m].conj()) * 0.5;
            sym[m] = c;
            sym[n - m] = c.conj();
        }
        let values = fft::inverse_real(&sym);
        let cache = OnceBox::new();
        let _ = cache.set(alloc::boxed::Box::new(sym));
        Ok(Self {
            grid,
            values,
            spectrum: cache,
        })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Coefficients normalized by the grid mean, in FFT slot order.
    pub fn spectrum(&self) -> &[Complex64] {
        self.spectrum
            .get_or_init(|| alloc::boxed::Box::new(fft::forward(&self.values)))
    }

    /// Applies a real even multiplier `a(xi)`.
    pub fn multiply(&self, symbol: impl Fn(f64) -> f64) -> GridFunction {
        let spec: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(m, c)| c * symbol(self.grid.wavenumber(m)))
            .collect();
        Self::from_spectrum(self.grid, spec).expect("length preserved")
    }

    pub(crate) fn multiply_table(&self, table: &[f64]) -> GridFunction {
        let spec: Vec<Complex64> = self
            .spectrum()
            .iter()
            .zip(table)
            .map(|(c, &a)| c * a)
            .collect();
        Self::from_spectrum(self.grid, spec).expect("length preserved")
    }

    /// Spectral derivative, multiplier `i xi` with the Nyquist slot zeroed.
    pub fn derivative(&self) -> GridFunction {
        let n = self.grid.len();
        let spec: Vec<Complex64> = self
            .spectrum()
            .iter()
            .enumerate()
            .map(|(m, c)| {
                if m == n / 2 {
                    Complex64::new(0.0, 0.0)
                } else {
                    c * Complex64::new(0.0, self.grid.wavenumber(m))
                }
            })
            .collect();
        Self::from_spectrum(self.grid, spec).expect("length preserved")
    }

    pub fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<GridFunction> {
        self.grid.ensure_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        GridFunction::new(self.grid, values)
    }

    pub fn mul(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, a: f64) -> GridFunction {
        GridFunction::new(self.grid, self.values.iter().map(|v| a * v).collect())
            .expect("length preserved")
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Shape of the transition between adjacent blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PartitionProfile {
    /// Width of the transition in octaves, in `(0, 1]`.
    pub sharpness: f64,
}

impl Default for PartitionProfile {
    fn default() -> Self {
        Self { sharpness: 1.0 }
    }
}

impl PartitionProfile {
    /// `Phi_0` as a function of `|xi|`: 1 on `[0, 1]`, raised cosine in
    /// `log2 |xi|`, 0 from `2^sharpness` on.
    pub fn low(&self, r: f64) -> f64 {
        if r <= 1.0 {
            return 1.0;
        }
        let t = r.log2();
        if t >= self.sharpness {
            return 0.0;
        }
        let c = (0.5 * PI * t / self.sharpness).cos();
        c * c
    }
}

/// Littlewood-Paley partition `Phi_0, ..., Phi_{J_max}` sampled on a grid.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: TorusGrid,
    profile: PartitionProfile,
    j_max: usize,
    blocks: Vec<Vec<f64>>,
    lows: Vec<Vec<f64>>,
}

pub fn build_partition(grid: TorusGrid, profile: PartitionProfile) -> Result<DyadicPartition> {
    DyadicPartition::new(grid, profile)
}

impl DyadicPartition {
    pub fn new(grid: TorusGrid, profile: PartitionProfile) -> Result<Self> {
        if !(profile.sharpness > 0.0 && profile.sharpness <= 1.0) {
            return Err(Error::Sharpness(profile.sharpness));
        }
        let top = grid.max_wavenumber();
        let mut j_max = 0;
        while 2f64.powi(j_max as i32) <= top {
            j_max += 1;
        }
        let mut partition = Self {
            grid,
            profile,
            j_max,
            blocks: Vec::new(),
            lows: Vec::new(),
        };
        let n = grid.len();
        partition.blocks = (0..=j_max)
            .map(|j| {
                (0..n)
                    .map(|m| partition.multiplier(j, grid.wavenumber(m)))
                    .collect()
            })
            .collect();
        let mut acc = vec![0.0; n];
        for block in &partition.blocks {
            for (a, b) in acc.iter_mut().zip(block) {
                *a += b;
            }
            partition.lows.push(acc.clone());
        }
        Ok(partition)
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn profile(&self) -> PartitionProfile {
        self.profile
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// `Phi_j` sampled at the grid's FFT slots.
    pub fn block(&self, j: usize) -> Result<&[f64]> {
        self.check_index(j)?;
        Ok(&self.blocks[j])
    }

    /// `Phi_j(xi)` at an arbitrary wavenumber.
    pub fn multiplier(&self, j: usize, xi: f64) -> f64 {
        let r = xi.abs();
        let s = |k: usize| self.profile.low(r / 2f64.powi(k as i32));
        match j {
            0 => s(0),
            j if j < self.j_max => s(j) - s(j - 1),
            j if j == self.j_max => 1.0 - s(j - 1),
            _ => 0.0,
        }
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j > self.j_max {
            return Err(Error::BlockIndex {
                index: j,
                max: self.j_max,
            });
        }
        Ok(())
    }

    pub fn apply_block(&self, j: usize, g: &GridFunction) -> Result<GridFunction> {
        self.check_index(j)?;
        self.grid.ensure_same(&g.grid())?;
        Ok(g.multiply_table(&self.blocks[j]))
    }

    /// `(Phi_0(D) + ... + Phi_{j-2}(D)) g`.
    pub fn low_pass(&self, j: usize, g: &GridFunction) -> Result<GridFunction> {
        if j < 2 {
            return Err(Error::LowPassIndex(j));
        }
        self.grid.ensure_same(&g.grid())?;
        if j - 2 >= self.j_max {
            return Ok(g.clone());
        }
        Ok(g.multiply_table(&self.lows[j - 2]))
    }

    pub(crate) fn low_table(&self, k: usize) -> &[f64] {
        &self.lows[k]
    }

    pub(crate) fn block_table(&self, j: usize) -> &[f64] {
        &self.blocks[j]
    }
}

/// Block norms `b_j = ||Phi_j(D) g||_{L^p}`, `j = 0..=J_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockNormProfile {
    pub p: f64,
    pub norms: Vec<f64>,
}

impl BlockNormProfile {
    pub fn new(p: f64, norms: Vec<f64>) -> Result<Self> {
        check_block_exponent(p)?;
        Ok(Self { p, norms })
    }
}

fn check_block_exponent(p: f64) -> Result<()> {
    if p > 1.0 {
        Ok(())
    } else {
        Err(Error::Exponent(p))
    }
}

fn lp_mean(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let mean = values.iter().map(|v| v.abs().powf(p)).sum::<f64>() / values.len() as f64;
    mean.powf(1.0 / p)
}

pub fn block_norms(
    partition: &DyadicPartition,
    g: &GridFunction,
    p: f64,
) -> Result<BlockNormProfile> {
    check_block_exponent(p)?;
    partition.grid.ensure_same(&g.grid())?;
    let norms = (0..=partition.j_max)
        .map(|j| lp_mean(g.multiply_table(&partition.blocks[j]).values(), p))
        .collect();
    Ok(BlockNormProfile { p, norms })
}

/// Negated least-squares slope of `log2 b_j` over `j = 2..J_max-1`.
pub fn estimate_smoothness(profile: &BlockNormProfile) -> Result<f64> {
    let top = profile.norms.len().saturating_sub(1);
    let peak = profile.norms.iter().fold(0.0f64, |m, &b| m.max(b));
    let points: Vec<(f64, f64)> = (2..top)
        .filter(|&j| profile.norms[j] > 0.0 && profile.norms[j] > NOISE_FLOOR * peak)
        .map(|j| (j as f64, profile.norms[j].log2()))
        .collect();
    if points.len() < 4 {
        return Err(Error::TooFewBlocks {
            usable: points.len(),
        });
    }
    Ok(-least_squares_slope(&points))
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

fn check_sobolev_args(s: f64, p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Exponent(p));
    }
    if !(-8.0..=8.0).contains(&s) {
        return Err(Error::Smoothness(s));
    }
    Ok(())
}

/// `H^s_p` norm surrogate: the Bessel multiplier norm at `p = 2`, the
/// square-function norm otherwise.
pub fn sobolev_norm(partition: &DyadicPartition, g: &GridFunction, s: f64, p: f64) -> Result<f64> {
    check_sobolev_args(s, p)?;
    if p == 2.0 {
        partition.grid.ensure_same(&g.grid())?;
        let energy: f64 = g
            .spectrum()
            .iter()
            .enumerate()
            .map(|(m, c)| {
                let xi = g.grid().wavenumber(m);
                (1.0 + xi * xi).powf(s) * c.norm_sqr()
            })
            .sum();
        return Ok(energy.sqrt());
    }
    square_function_norm(partition, g, s, p)
}

/// `|| (sum_j 4^(js) |Phi_j(D) g|^2)^(1/2) ||_{L^p}` by grid quadrature.
pub fn square_function_norm(
    partition: &DyadicPartition,
    g: &GridFunction,
    s: f64,
    p: f64,
) -> Result<f64> {
    check_sobolev_args(s, p)?;
    partition.grid.ensure_same(&g.grid())?;
    let mut square = vec![0.0; g.grid().len()];
    for j in 0..=partition.j_max {
        let weight = 4f64.powf(j as f64 * s);
        let block = g.multiply_table(&partition.blocks[j]);
        for (acc, v) in square.iter_mut().zip(block.values()) {
            *acc += weight * v * v;
        }
    }
    let root: Vec<f64> = square.into_iter().map(f64::sqrt).collect();
    Ok(lp_mean(&root, p))
}

/// Random-phase signal with `|g_hat(xi)| = (1 + |xi|)^(-sigma - 1/2)`.
pub fn synthesize_rough(sigma: f64, seed: u64, grid: TorusGrid) -> Result<GridFunction> {
    if !(sigma > 0.0) {
        return Err(Error::Roughness(sigma));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.len();
    let amplitude = |m: usize| (1.0 + grid.wavenumber(m).abs()).powf(-sigma - 0.5);
    let mut spec = vec![Complex64::new(0.0, 0.0); n];
    for m in 0..=n / 2 {
        if m == 0 || m == n / 2 {
            let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
            spec[m] = Complex64::new(sign * amplitude(m), 0.0);
        } else {
            let phase = 2.0 * PI * rng.random::<f64>();
            let c = Complex64::from_polar(amplitude(m), phase);
            spec[m] = c;
            spec[n - m] = c.conj();
        }
    }
    GridFunction::from_spectrum(grid, spec)
}
