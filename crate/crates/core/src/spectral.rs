//! Discrete frequency grid, DFT contract and the circular modulation and
//! translation operators.
//!
//! The forward DFT is unnormalized and the inverse carries the `1/N` factor:
//!
//! ```text
//! X_k = Σ_t x_t e^{-2πi k t / N}        x_t = (1/N) Σ_k X_k e^{2πi k t / N}
//! ```
//!
//! With this convention a circular convolution in time is exactly a pointwise
//! product of spectra, so filtering needs no extra constants.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// `N` samples of the normalized frequency interval `(-π, π]`, indexed by
/// DFT bin.
///
/// Bin `k ≤ N/2` sits at `2πk/N`, bin `k > N/2` at `2π(k-N)/N`. For even `N`
/// the Nyquist bin is exactly `π`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrequencyGrid {
    n: usize,
}

/// Returned when a grid of zero samples is requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmptyGrid;

impl fmt::Display for EmptyGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a frequency grid needs at least one sample")
    }
}

impl std::error::Error for EmptyGrid {}

impl FrequencyGrid {
    pub fn new(n: usize) -> Result<Self, EmptyGrid> {
        if n == 0 {
            return Err(EmptyGrid);
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing between neighbouring bins, `2π/N`.
    #[inline]
    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Frequency in radians of DFT bin `k`.
    ///
    /// # Panics
    ///
    /// Panics if `k >= N`.
    pub fn xi(&self, k: usize) -> f64 {
        assert!(
            k < self.n,
            "bin {k} out of range for a {}-point grid",
            self.n
        );
        if 2 * k == self.n {
            PI
        } else if 2 * k < self.n {
            2.0 * PI * k as f64 / self.n as f64
        } else {
            -2.0 * PI * (self.n - k) as f64 / self.n as f64
        }
    }

    /// All bin frequencies in natural DFT order.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.xi(k)).collect()
    }

    /// Bin indices sorted by ascending frequency (the `fftshift` permutation).
    pub fn ascending_bins(&self) -> Vec<usize> {
        // First bin with a negative frequency.
        let first_negative = self.n / 2 + 1;
        (first_negative..self.n).chain(0..first_negative).collect()
    }
}

/// Cached forward/inverse FFT plans for one transform length.
#[derive(Clone)]
pub struct DftPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for DftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DftPlan").field("n", &self.n).finish()
    }
}

impl DftPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Unnormalized forward transform in place.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        if self.n > 0 {
            self.forward.process(buf);
        }
    }

    /// Inverse transform in place, including the `1/N` factor.
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        if self.n == 0 {
            return;
        }
        self.inverse.process(buf);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    pub fn forward(&self, signal: &[Complex64]) -> Vec<Complex64> {
        let mut buf = signal.to_vec();
        self.forward_in_place(&mut buf);
        buf
    }

    pub fn inverse(&self, spectrum: &[Complex64]) -> Vec<Complex64> {
        let mut buf = spectrum.to_vec();
        self.inverse_in_place(&mut buf);
        buf
    }
}

/// Forward DFT, `X_k = Σ_t x_t e^{-2πi k t/N}`.
pub fn dft(signal: &[Complex64]) -> Vec<Complex64> {
    DftPlan::new(signal.len()).forward(signal)
}

/// Inverse DFT, `x_t = (1/N) Σ_k X_k e^{2πi k t/N}`.
pub fn idft(spectrum: &[Complex64]) -> Vec<Complex64> {
    DftPlan::new(spectrum.len()).inverse(spectrum)
}

/// `e^{2πi m/N}` with `m` reduced modulo `N` first so that large products
/// `a·t` keep full phase accuracy.
fn unit_root(m: i128, n: usize) -> Complex64 {
    let r = m.rem_euclid(n as i128);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

/// Multiplies sample `t` by `e^{2πi a t/N}`.
///
/// On a spectrum the same operator realizes the phase ramp produced by a
/// time shift: `dft(translate(x, a)) = modulate(dft(x), -a)`.
pub fn modulate(signal: &[Complex64], a: i64) -> Vec<Complex64> {
    let n = signal.len();
    signal
        .iter()
        .enumerate()
        .map(|(t, &x)| x * unit_root(a as i128 * t as i128, n))
        .collect()
}

/// Circular shift by `a` samples: `y_t = x_{(t-a) mod N}`.
pub fn translate(signal: &[Complex64], a: i64) -> Vec<Complex64> {
    let n = signal.len();
    if n == 0 {
        return Vec::new();
    }
    let shift = (a as i128).rem_euclid(n as i128) as usize;
    let mut out = signal.to_vec();
    out.rotate_right(shift);
    out
}

/// `Σ |x_t|²`.
pub fn energy(signal: &[Complex64]) -> f64 {
    signal.iter().map(|z| z.norm_sqr()).sum()
}

/// Relative L² distance `‖a - b‖ / ‖b‖` (absolute when `b` is zero).
pub fn relative_l2_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let reference = energy(b);
    if reference == 0.0 {
        diff.sqrt()
    } else {
        (diff / reference).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_signal(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    fn naive_dft(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(t, &v)| {
                        let m = (k * t) % n;
                        v * Complex64::from_polar(1.0, -2.0 * PI * m as f64 / n as f64)
                    })
                    .sum()
            })
            .collect()
    }

    fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn grid_maps_bins_into_half_open_interval() {
        let grid = FrequencyGrid::new(8).unwrap();
        assert_eq!(grid.xi(0), 0.0);
        assert_eq!(grid.xi(4), PI);
        assert!((grid.xi(5) + 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((grid.xi(7) + PI / 4.0).abs() < 1e-15);

        let odd = FrequencyGrid::new(7).unwrap();
        let f = odd.frequencies();
        assert!(f.iter().all(|&x| x > -PI && x <= PI));
        assert!(f.iter().all(|&x| x < PI));
    }

    #[test]
    fn nyquist_is_exact_for_even_lengths() {
        for n in [2, 6, 10, 64, 4096] {
            assert_eq!(FrequencyGrid::new(n).unwrap().xi(n / 2), PI);
        }
    }

    #[test]
    fn ascending_bins_sort_frequencies() {
        for n in [1, 2, 5, 8, 9] {
            let grid = FrequencyGrid::new(n).unwrap();
            let order = grid.ascending_bins();
            assert_eq!(order.len(), n);
            let xs: Vec<f64> = order.iter().map(|&k| grid.xi(k)).collect();
            assert!(xs.windows(2).all(|w| w[0] < w[1]), "n={n}: {xs:?}");
        }
    }

    #[test]
    fn zero_length_grid_is_rejected() {
        assert_eq!(FrequencyGrid::new(0), Err(EmptyGrid));
    }

    #[test]
    fn impulse_has_flat_spectrum() {
        let mut x = vec![Complex64::new(0.0, 0.0); 16];
        x[0] = Complex64::new(1.0, 0.0);
        for v in dft(&x) {
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_concentrates_at_dc() {
        let n = 12;
        let x = vec![Complex64::new(1.0, 0.0); n];
        let spec = dft(&x);
        assert!((spec[0] - Complex64::new(n as f64, 0.0)).norm() < 1e-12);
        assert!(spec[1..].iter().all(|v| v.norm() < 1e-12));

        let back = idft(&spec);
        assert!(back
            .iter()
            .all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn fft_matches_direct_summation() {
        let x = random_signal(64, 1);
        assert!(max_abs_diff(&dft(&x), &naive_dft(&x)) < 1e-9);
    }

    #[test]
    fn phase_ramp_inverts_to_shifted_impulse() {
        let n = 32;
        let a = 5;
        let ramp: Vec<Complex64> = (0..n).map(|k| unit_root(-(k as i128) * a, n)).collect();
        let x = idft(&ramp);
        for (t, v) in x.iter().enumerate() {
            let expected = if t == a as usize { 1.0 } else { 0.0 };
            assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn round_trip_at_awkward_lengths() {
        for (i, n) in [1usize, 2, 63, 64, 4096].into_iter().enumerate() {
            let x = random_signal(n, 10 + i as u64);
            let back = idft(&dft(&x));
            assert!(relative_l2_error(&back, &x) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn translate_by_zero_is_identity() {
        let x = random_signal(9, 3);
        assert_eq!(translate(&x, 0), x);
    }

    #[test]
    fn full_period_modulation_is_identity() {
        let x = random_signal(24, 4);
        let y = modulate(&x, 24);
        assert!(max_abs_diff(&x, &y) < 1e-15);
    }

    #[test]
    fn translation_becomes_phase_ramp() {
        let x = random_signal(64, 5);
        let lhs = dft(&translate(&x, 7));
        let rhs = modulate(&dft(&x), -7);
        assert!(max_abs_diff(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn modulation_becomes_spectral_shift() {
        let x = random_signal(64, 6);
        let lhs = dft(&modulate(&x, 11));
        let rhs = translate(&dft(&x), 11);
        assert!(max_abs_diff(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn negative_shifts_wrap() {
        let x: Vec<Complex64> = (0..5).map(|t| Complex64::new(t as f64, 0.0)).collect();
        let y = translate(&x, -1);
        assert_eq!(y[0].re, 1.0);
        assert_eq!(y[4].re, 0.0);
    }
}
