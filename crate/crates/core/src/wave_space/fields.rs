//! Sampled spinor fields and their spectra.
//!
//! Fields are stored component-major: `values[c][idx]` is component `c` at
//! flat node index `idx`. The same container serves the two-component Weyl
//! layer and the four-component Dirac layer.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::numerics::ordered_sum;

/// Time-zero data of a `D`-component spinor field sampled on a grid, with a
/// declared support radius.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchyData<const D: usize> {
    grid: GridSpec,
    values: [Vec<C64>; D],
    support_radius: f64,
}

/// Spectrum of a `D`-component field on the momentum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData<const D: usize> {
    grid: GridSpec,
    values: [Vec<C64>; D],
}

/// Cauchy data of a right-handed Weyl wave.
pub type WeylCauchyData = CauchyData<2>;
/// Spectrum of Weyl Cauchy data.
pub type WeylSpectrum = SpectralData<2>;

fn check_lengths<const D: usize>(grid: &GridSpec, values: &[Vec<C64>; D]) -> Result<()> {
    for (c, v) in values.iter().enumerate() {
        if v.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "component {c} has {} samples, expected {}",
                v.len(),
                grid.len()
            )));
        }
    }
    Ok(())
}

impl<const D: usize> CauchyData<D> {
    /// Wraps samples; checks lengths and `0 ≤ R ≤ L`.
    pub fn new(grid: GridSpec, values: [Vec<C64>; D], support_radius: f64) -> Result<Self> {
        check_lengths(&grid, &values)?;
        if !(support_radius >= 0.0 && support_radius <= grid.half_width()) {
            return Err(Error::SupportOverflow {
                needed: support_radius,
                available: grid.half_width(),
            });
        }
        Ok(Self {
            grid,
            values,
            support_radius,
        })
    }

    /// Identically zero field.
    pub fn zeros(grid: GridSpec, support_radius: f64) -> Self {
        Self {
            grid,
            values: std::array::from_fn(|_| vec![C64::new(0.0, 0.0); grid.len()]),
            support_radius: support_radius.clamp(0.0, grid.half_width()),
        }
    }

    pub(crate) fn from_parts(grid: GridSpec, values: [Vec<C64>; D], support_radius: f64) -> Self {
        Self {
            grid,
            values,
            support_radius: support_radius.clamp(0.0, grid.half_width()),
        }
    }

    /// Sampling grid.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// All components.
    pub fn values(&self) -> &[Vec<C64>; D] {
        &self.values
    }

    /// Consumes the field and returns its components.
    pub fn into_values(self) -> [Vec<C64>; D] {
        self.values
    }

    /// One component.
    pub fn component(&self, c: usize) -> &[C64] {
        &self.values[c]
    }

    /// Declared support radius.
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Same samples with a different declared support radius (clamped to `L`).
    pub fn with_support_radius(mut self, radius: f64) -> Self {
        self.support_radius = radius.clamp(0.0, self.grid.half_width());
        self
    }

    /// Spinor value at a flat node index.
    pub fn at(&self, idx: usize) -> [C64; D] {
        std::array::from_fn(|c| self.values[c][idx])
    }

    /// `Σ |Φ₀|² h³`.
    pub fn l2_norm_sq(&self) -> f64 {
        let h3 = self.grid.cell_volume();
        ordered_sum(self.grid.len(), |i| {
            self.values.iter().map(|v| v[i].norm_sqr()).sum::<f64>()
        }) * h3
    }

    /// `(Σ |Φ₀|² h³)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Largest pointwise spinor norm.
    pub fn max_abs(&self) -> f64 {
        crate::numerics::ordered_max(self.grid.len(), |i| {
            self.values.iter().map(|v| v[i].norm_sqr()).sum::<f64>().sqrt()
        })
    }

    /// Mass outside the ball of the given radius relative to the total mass
    /// (0 for the zero field).
    pub fn support_leak(&self, radius: f64) -> f64 {
        let total = self.l2_norm_sq();
        if total == 0.0 {
            return 0.0;
        }
        let r2 = radius * radius;
        let outside = ordered_sum(self.grid.len(), |i| {
            if self.grid.node_radius_sq(i) > r2 {
                self.values.iter().map(|v| v[i].norm_sqr()).sum::<f64>()
            } else {
                0.0
            }
        }) * self.grid.cell_volume();
        outside / total
    }

    /// Multiplies every sample by a complex scalar.
    pub fn scaled(&self, factor: C64) -> Self {
        let values = std::array::from_fn(|c| self.values[c].iter().map(|v| v * factor).collect());
        Self::from_parts(self.grid, values, self.support_radius)
    }

    /// `a·self + b·other`; the support radius is the larger of the two.
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = std::array::from_fn(|c| {
            self.values[c]
                .iter()
                .zip(&other.values[c])
                .map(|(x, y)| a * x + b * y)
                .collect()
        });
        Ok(Self::from_parts(
            self.grid,
            values,
            self.support_radius.max(other.support_radius),
        ))
    }

    /// `‖self − other‖ / ‖other‖` in the sampled L² norm (absolute distance if
    /// `other` is zero).
    pub fn relative_distance(&self, other: &Self) -> Result<f64> {
        let diff = self.combine(C64::new(1.0, 0.0), other, C64::new(-1.0, 0.0))?;
        let d = diff.l2_norm();
        let n = other.l2_norm();
        Ok(if n > 0.0 { d / n } else { d })
    }

    /// The same samples embedded in a box `factor` times larger with the same
    /// spacing (`L' = factor·L`, `N' = factor·N`), zero outside the original
    /// box. Used where a nonlocal spectral multiplier must act on compactly
    /// supported data with less periodic interference.
    pub fn zero_padded(&self, factor: usize) -> Result<Self> {
        let n = self.grid.points();
        let big = GridSpec::new(self.grid.half_width() * factor as f64, n * factor)?;
        let offset = (n * factor - n) / 2;
        let mut values: [Vec<C64>; D] = std::array::from_fn(|_| vec![C64::new(0.0, 0.0); big.len()]);
        for idx in 0..self.grid.len() {
            let [i, j, k] = self.grid.split(idx);
            let target = big.flat(i + offset, j + offset, k + offset);
            for c in 0..D {
                values[c][target] = self.values[c][idx];
            }
        }
        Ok(Self::from_parts(big, values, self.support_radius))
    }

    /// Restriction of data on a padded box back to `grid`, the inverse of
    /// [`Self::zero_padded`] on the original nodes.
    pub fn restricted_to(&self, grid: &GridSpec) -> Result<Self> {
        let (n, big) = (grid.points(), self.grid.points());
        let same_spacing = (grid.spacing() - self.grid.spacing()).abs() <= 1e-12 * grid.spacing();
        if big < n || (big - n) % 2 != 0 || !same_spacing {
            return Err(Error::GridMismatch);
        }
        let offset = (big - n) / 2;
        let values = std::array::from_fn(|c| {
            (0..grid.len())
                .map(|idx| {
                    let [i, j, k] = grid.split(idx);
                    self.values[c][self.grid.flat(i + offset, j + offset, k + offset)]
                })
                .collect()
        });
        Ok(Self::from_parts(*grid, values, self.support_radius))
    }

    /// The same field with every mode on a Nyquist plane removed.
    ///
    /// On a Nyquist plane the grid momentum `−π/h` is its own negative, so
    /// operations that pair `p` with `−p` (complex conjugation, parity) are
    /// not exact there. Band-limiting to the interior modes makes them exact.
    pub fn without_nyquist(&self) -> Self {
        let grid = self.grid;
        let spec = transform(self).map_modes(|idx, v| {
            if grid.on_nyquist_plane(idx) {
                [C64::new(0.0, 0.0); D]
            } else {
                v
            }
        });
        inverse_transform(&spec, self.support_radius)
    }

    /// Applies a pointwise map `idx, spinor ↦ spinor` in parallel.
    pub(crate) fn map_nodes<F>(&self, support_radius: f64, f: F) -> Self
    where
        F: Fn(usize, [C64; D]) -> [C64; D] + Sync,
    {
        let out: Vec<[C64; D]> = (0..self.grid.len()).into_par_iter().map(|i| f(i, self.at(i))).collect();
        Self::from_parts(self.grid, unzip(&out), support_radius)
    }
}

impl<const D: usize> SpectralData<D> {
    /// Wraps spectral samples.
    pub fn new(grid: GridSpec, values: [Vec<C64>; D]) -> Result<Self> {
        check_lengths(&grid, &values)?;
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts(grid: GridSpec, values: [Vec<C64>; D]) -> Self {
        Self { grid, values }
    }

    /// Momentum grid.
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// All components.
    pub fn values(&self) -> &[Vec<C64>; D] {
        &self.values
    }

    /// One component.
    pub fn component(&self, c: usize) -> &[C64] {
        &self.values[c]
    }

    /// Spinor value at a flat momentum index.
    pub fn at(&self, idx: usize) -> [C64; D] {
        std::array::from_fn(|c| self.values[c][idx])
    }

    /// Applies a per-mode map `idx, spinor ↦ spinor` in parallel.
    pub(crate) fn map_modes<F>(&self, f: F) -> Self
    where
        F: Fn(usize, [C64; D]) -> [C64; D] + Sync,
    {
        let out: Vec<[C64; D]> = (0..self.grid.len()).into_par_iter().map(|i| f(i, self.at(i))).collect();
        Self::from_parts(self.grid, unzip(&out))
    }
}

/// Converts node-major spinors to component-major storage.
pub(crate) fn unzip<const D: usize>(nodes: &[[C64; D]]) -> [Vec<C64>; D] {
    std::array::from_fn(|c| nodes.iter().map(|s| s[c]).collect())
}

/// Transforms every component of a field.
pub fn transform<const D: usize>(field: &CauchyData<D>) -> SpectralData<D> {
    let grid = field.grid;
    let spectra: Vec<Vec<C64>> = field.values.par_iter().map(|v| grid.forward(v)).collect();
    SpectralData::from_parts(grid, vec_to_array(spectra))
}

/// Inverse of [`transform`]; the caller supplies the support radius of the
/// result.
pub fn inverse_transform<const D: usize>(spectrum: &SpectralData<D>, support_radius: f64) -> CauchyData<D> {
    let grid = spectrum.grid;
    let values: Vec<Vec<C64>> = spectrum.values.par_iter().map(|v| grid.inverse(v)).collect();
    CauchyData::from_parts(grid, vec_to_array(values), support_radius)
}

/// Spectral gradient component `∂_axis` of every component of a field.
pub fn partial_derivative<const D: usize>(field: &CauchyData<D>, axis: usize) -> CauchyData<D> {
    let grid = field.grid;
    let values: Vec<Vec<C64>> = field.values.par_iter().map(|v| grid.derivative(v, axis)).collect();
    CauchyData::from_parts(grid, vec_to_array(values), field.support_radius)
}

pub(crate) fn vec_to_array<const D: usize>(v: Vec<Vec<C64>>) -> [Vec<C64>; D] {
    v.try_into()
        .unwrap_or_else(|_| unreachable!("component count is fixed by the caller"))
}
