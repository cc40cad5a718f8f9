//! Uniform periodic sampling box and its discrete Fourier transform.
//!
//! Nodes are `x_j = −L + j·h` with `h = 2L/N`, `j = 0..N`, on each axis.
//! Momenta are `p_k = k·π/L` for the signed indices `k ∈ [−N/2, N/2)`, stored
//! in FFT order (non-negative indices first). Flat storage is row-major:
//! `idx = (i·N + j)·N + k`.
//!
//! The continuous conventions
//!
//! ```text
//! ĝ(p) = ∫ g(x) e^{−ip·x} dx        g(x) = (2π)^{-3} ∫ ĝ(p) e^{ip·x} dp
//! ```
//!
//! are discretised as
//!
//! ```text
//! ĝ_k = h³ (−1)^{k1+k2+k3} DFT[g]_k        g_j = (2L)^{-3} (−1)^{k1+k2+k3} IDFT[ĝ]_j
//! ```
//!
//! so that the discrete Parseval identity `Σ|g|²h³ = (2L)^{-3} Σ|ĝ|²` is exact.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible number of points per axis.
pub const MIN_POINTS: usize = 8;

/// Sampling box `[−L, L)³` with `N` points per axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSettings", into = "GridSettings")]
pub struct GridSpec {
    half_width: f64,
    points: usize,
}

/// Raw grid settings as they appear in JSON (`{"L": 2.5, "N": 48}`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSettings {
    /// Half-width of the box.
    #[serde(rename = "L")]
    pub half_width: f64,
    /// Points per axis.
    #[serde(rename = "N")]
    pub points: usize,
}

impl TryFrom<GridSettings> for GridSpec {
    type Error = Error;
    fn try_from(s: GridSettings) -> Result<Self> {
        GridSpec::new(s.half_width, s.points)
    }
}

impl From<GridSpec> for GridSettings {
    fn from(g: GridSpec) -> Self {
        GridSettings {
            half_width: g.half_width,
            points: g.points,
        }
    }
}

impl Default for GridSpec {
    /// `L = 2.5`, `N = 48`.
    fn default() -> Self {
        Self {
            half_width: 2.5,
            points: 48,
        }
    }
}

impl GridSpec {
    /// Validated constructor: `L > 1` and `N` even with `N ≥ 8`.
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !half_width.is_finite() || half_width <= 1.0 {
            return Err(Error::InvalidGrid(format!(
                "half-width must exceed 1 so the unit ball fits inside, got {half_width}"
            )));
        }
        if points < MIN_POINTS || points % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and at least {MIN_POINTS}, got {points}"
            )));
        }
        Ok(Self { half_width, points })
    }

    /// Half-width `L`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Points per axis `N`.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of nodes `N³`.
    pub fn len(&self) -> usize {
        self.points * self.points * self.points
    }

    /// Always false; a grid has at least `8³` nodes.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node spacing `h = 2L/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    /// Cell volume `h³`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(3)
    }

    /// Momentum spacing `Δp = π/L`.
    pub fn momentum_step(&self) -> f64 {
        PI / self.half_width
    }

    /// Momentum cell volume divided by `(2π)³`, i.e. `(2L)^{-3}`.
    pub fn spectral_weight(&self) -> f64 {
        (2.0 * self.half_width).powi(-3)
    }

    /// Coordinate of node `j` on one axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.spacing()
    }

    /// Splits a flat index into its three axis indices.
    #[inline]
    pub fn split(&self, idx: usize) -> [usize; 3] {
        let n = self.points;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    /// Flat index of the axis indices `(i, j, k)`.
    #[inline]
    pub fn flat(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.points + j) * self.points + k
    }

    /// Position of a node.
    pub fn node(&self, idx: usize) -> [f64; 3] {
        let [i, j, k] = self.split(idx);
        [self.coord(i), self.coord(j), self.coord(k)]
    }

    /// `|x|²` at a node.
    pub fn node_radius_sq(&self, idx: usize) -> f64 {
        let x = self.node(idx);
        x[0] * x[0] + x[1] * x[1] + x[2] * x[2]
    }

    /// Signed momentum index of storage position `m` on one axis.
    #[inline]
    pub fn signed_index(&self, m: usize) -> i64 {
        let n = self.points as i64;
        let m = m as i64;
        if m < n / 2 {
            m
        } else {
            m - n
        }
    }

    /// Momentum component of storage position `m` on one axis.
    #[inline]
    pub fn axis_momentum(&self, m: usize) -> f64 {
        self.signed_index(m) as f64 * self.momentum_step()
    }

    /// Whether storage position `m` is the unpaired Nyquist index `−N/2`.
    #[inline]
    pub fn is_nyquist(&self, m: usize) -> bool {
        m == self.points / 2
    }

    /// Whether a flat spectral index lies on one of the Nyquist planes.
    pub fn on_nyquist_plane(&self, idx: usize) -> bool {
        self.split(idx).iter().any(|&m| self.is_nyquist(m))
    }

    /// Momentum vector of a flat spectral index.
    pub fn momentum(&self, idx: usize) -> [f64; 3] {
        let [a, b, c] = self.split(idx);
        [self.axis_momentum(a), self.axis_momentum(b), self.axis_momentum(c)]
    }

    /// Squared integer momentum `k1² + k2² + k3²` of a flat spectral index.
    pub fn momentum_index_sq(&self, idx: usize) -> usize {
        self.split(idx)
            .iter()
            .map(|&m| {
                let s = self.signed_index(m);
                (s * s) as usize
            })
            .sum()
    }

    /// Flat index of the storage position holding `−p` (modulo `N` per axis;
    /// Nyquist positions map to themselves).
    pub fn negated_index(&self, idx: usize) -> usize {
        let n = self.points;
        let [a, b, c] = self.split(idx);
        self.flat((n - a) % n, (n - b) % n, (n - c) % n)
    }

    /// Flat index of the node at `−x` (exact for `j ≥ 1`; node 0 at `−L` maps
    /// to itself through periodicity).
    pub fn reflected_index(&self, idx: usize) -> usize {
        self.negated_index(idx)
    }

    /// Sign `(−1)^{k1+k2+k3}` attached to a flat spectral index.
    #[inline]
    pub fn checkerboard(&self, idx: usize) -> f64 {
        let [a, b, c] = self.split(idx);
        if (a + b + c) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Forward transform of one scalar component in the continuous convention.
    pub fn forward(&self, values: &[C64]) -> Vec<C64> {
        assert_eq!(values.len(), self.len(), "component length must be N³");
        let mut data = values.to_vec();
        let plans = plans(self.points);
        fft3_in_place(self.points, &mut data, plans.forward.as_ref());
        let h3 = self.cell_volume();
        for (idx, v) in data.iter_mut().enumerate() {
            *v *= h3 * self.checkerboard(idx);
        }
        data
    }

    /// Inverse transform of one scalar component.
    pub fn inverse(&self, spectrum: &[C64]) -> Vec<C64> {
        assert_eq!(spectrum.len(), self.len(), "component length must be N³");
        let w = self.spectral_weight();
        let mut data: Vec<C64> = spectrum
            .iter()
            .enumerate()
            .map(|(idx, v)| v * (w * self.checkerboard(idx)))
            .collect();
        let plans = plans(self.points);
        fft3_in_place(self.points, &mut data, plans.inverse.as_ref());
        data
    }

    /// Spectral partial derivative `∂/∂x_axis` of one scalar component. The
    /// Nyquist index is assigned zero wavenumber.
    pub fn derivative(&self, values: &[C64], axis: usize) -> Vec<C64> {
        let mut spec = self.forward(values);
        self.multiply_derivative(&mut spec, axis);
        self.inverse(&spec)
    }

    /// Multiplies a spectrum by the derivative symbol `i p_axis` (zero on the
    /// Nyquist index).
    pub fn multiply_derivative(&self, spectrum: &mut [C64], axis: usize) {
        for (idx, v) in spectrum.iter_mut().enumerate() {
            let m = self.split(idx)[axis];
            let p = if self.is_nyquist(m) { 0.0 } else { self.axis_momentum(m) };
            *v *= C64::new(0.0, p);
        }
    }
}

struct FftPlans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<FftPlans> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<FftPlans>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(FftPlans {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

/// Unnormalised 3-D transform along all three axes.
fn fft3_in_place(n: usize, data: &mut [C64], fft: &dyn Fft<f64>) {
    let mut scratch = vec![C64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // Last axis: contiguous lines.
    fft.process_with_scratch(data, &mut scratch);
    // Middle axis: stride n inside each plane.
    let mut block = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let plane = &mut data[i * n * n..(i + 1) * n * n];
        for j in 0..n {
            for k in 0..n {
                block[k * n + j] = plane[j * n + k];
            }
        }
        fft.process_with_scratch(&mut block, &mut scratch);
        for j in 0..n {
            for k in 0..n {
                plane[j * n + k] = block[k * n + j];
            }
        }
    }
    // First axis: stride n².
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                block[k * n + i] = data[(i * n + j) * n + k];
            }
        }
        fft.process_with_scratch(&mut block, &mut scratch);
        for i in 0..n {
            for k in 0..n {
                data[(i * n + j) * n + k] = block[k * n + i];
            }
        }
    }
}
