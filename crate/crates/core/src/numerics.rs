//! Deterministic reductions.
//!
//! Every sum over grid points goes through these helpers. Work is split into
//! fixed-size blocks whose partial sums are computed (possibly in parallel)
//! with Neumaier compensation and then combined in block order. The block
//! layout depends only on the problem size, so results are bit-identical for
//! any number of worker threads.

use num_complex::Complex64 as C64;
use rayon::prelude::*;

/// Number of terms per reduction block.
pub const BLOCK: usize = 4096;

/// Neumaier-compensated accumulator for real sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    /// Empty accumulator.
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    /// Adds one term.
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Current value of the sum.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSumC {
    re: KahanSum,
    im: KahanSum,
}

impl KahanSumC {
    /// Empty accumulator.
    pub const fn new() -> Self {
        Self {
            re: KahanSum::new(),
            im: KahanSum::new(),
        }
    }

    /// Adds one term.
    #[inline]
    pub fn add(&mut self, z: C64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    /// Current value of the sum.
    #[inline]
    pub fn value(&self) -> C64 {
        C64::new(self.re.value(), self.im.value())
    }
}

/// Deterministic sum of `term(i)` for `i in 0..n`.
pub fn ordered_sum<F>(n: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let partials: Vec<f64> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = KahanSum::new();
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                acc.add(term(i));
            }
            acc.value()
        })
        .collect();
    let mut acc = KahanSum::new();
    for p in partials {
        acc.add(p);
    }
    acc.value()
}

/// Deterministic complex sum of `term(i)` for `i in 0..n`.
pub fn ordered_sum_c<F>(n: usize, term: F) -> C64
where
    F: Fn(usize) -> C64 + Sync,
{
    let partials: Vec<C64> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = KahanSumC::new();
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                acc.add(term(i));
            }
            acc.value()
        })
        .collect();
    let mut acc = KahanSumC::new();
    for p in partials {
        acc.add(p);
    }
    acc.value()
}

/// Deterministic maximum of `term(i)` for `i in 0..n` (0 for `n = 0`).
pub fn ordered_max<F>(n: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| (b * BLOCK..((b + 1) * BLOCK).min(n)).map(&term).fold(0.0_f64, f64::max))
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max)
}

/// Observed convergence order `log(e_coarse / e_fine) / log(step_coarse / step_fine)`.
pub fn observed_order(e_coarse: f64, e_fine: f64, step_coarse: f64, step_fine: f64) -> f64 {
    (e_coarse / e_fine).ln() / (step_coarse / step_fine).ln()
}

/// Formats a number with 17 significant digits (round-trip exact), in
/// scientific notation.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
