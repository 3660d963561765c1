//! Forward empirical wavelet transform, dual filter banks and reconstruction.
//!
//! The transform of `f` on support `n` is the circular convolution of `f`
//! with the time-reversed conjugate of `ψ_n`, computed as
//! `idft(dft(f) · conj(ψ̂_n))`. Reconstruction sums `dft(row_n) · φ̂_n` over
//! all rows and applies a single inverse DFT, where
//! `φ̂_n = ψ̂_n / Σ_m |ψ̂_m|²` is the dual filter.

use num_complex::Complex64;
use thiserror::Error;

use crate::families::{Design, FilterBank};
use crate::spectral::DftPlan;

/// Default threshold below which `Σ|ψ̂_n|²` is treated as zero.
pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error("signal has {signal} samples but the filter bank grid has {grid}")]
    LengthMismatch { signal: usize, grid: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("frame is singular at {} bin(s) (Σ|ψ̂|² < {epsilon})", bins.len())]
    SingularFrame { bins: Vec<usize>, epsilon: f64 },
    #[error("tight-frame bound must be positive, got {0}")]
    NonPositiveA(f64),
}

/// Transform output: one length-`N` time series per support.
#[derive(Debug, Clone, PartialEq)]
pub struct EwtCoefficients {
    indices: Vec<i64>,
    rows: Vec<Vec<Complex64>>,
    design: Option<Design>,
}

impl EwtCoefficients {
    /// Wraps raw rows, e.g. read back from disk.
    pub fn from_rows(indices: Vec<i64>, rows: Vec<Vec<Complex64>>) -> Result<Self, TransformError> {
        if indices.len() != rows.len() {
            return Err(TransformError::ShapeMismatch(format!(
                "{} indices for {} rows",
                indices.len(),
                rows.len()
            )));
        }
        if let Some(first) = rows.first() {
            if rows.iter().any(|r| r.len() != first.len()) {
                return Err(TransformError::ShapeMismatch(
                    "rows differ in length".into(),
                ));
            }
        }
        Ok(Self {
            indices,
            rows,
            design: None,
        })
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.rows
    }

    /// Coefficients `E(·, n)` for support `n`.
    pub fn row(&self, n: i64) -> Option<&[Complex64]> {
        let pos = self.indices.iter().position(|&i| i == n)?;
        Some(&self.rows[pos])
    }

    pub fn design(&self) -> Option<&Design> {
        self.design.as_ref()
    }

    /// Number of samples per row.
    pub fn samples(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn into_rows(self) -> Vec<Vec<Complex64>> {
        self.rows
    }
}

/// What [`dual_bank_with`] does with bins where `Σ|ψ̂_n|² < ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SingularPolicy {
    /// Fail with [`TransformError::SingularFrame`].
    #[default]
    Strict,
    /// Set every dual filter to zero on those bins and report them.
    ZeroFill,
}

/// Dual filters `φ̂_n = ψ̂_n / Σ_m |ψ̂_m|²` on the same grid as the bank.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBank {
    bank: FilterBank,
    epsilon: f64,
    singular_bins: Vec<usize>,
}

impl DualBank {
    /// The dual spectra as a filter bank.
    pub fn bank(&self) -> &FilterBank {
        &self.bank
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Bins (natural DFT order) where the frame sum fell below `ε`.
    pub fn singular_bins(&self) -> &[usize] {
        &self.singular_bins
    }

    pub fn into_bank(self) -> FilterBank {
        self.bank
    }
}

/// `idft(dft(signal) · conj(ψ̂_n))` for every filter.
pub fn forward(signal: &[Complex64], bank: &FilterBank) -> Result<EwtCoefficients, TransformError> {
    let n = bank.grid().len();
    if signal.len() != n {
        return Err(TransformError::LengthMismatch {
            signal: signal.len(),
            grid: n,
        });
    }
    let plan = DftPlan::new(n);
    let spectrum = plan.forward(signal);
    let rows = bank
        .spectra()
        .iter()
        .map(|psi| {
            let mut row: Vec<Complex64> = spectrum
                .iter()
                .zip(psi)
                .map(|(f, p)| f * p.conj())
                .collect();
            plan.inverse_in_place(&mut row);
            row
        })
        .collect();
    Ok(EwtCoefficients {
        indices: bank.indices().to_vec(),
        rows,
        design: bank.design().cloned(),
    })
}

/// Strict dual bank: fails if `Σ|ψ̂_n|² < ε` at any bin.
pub fn dual_bank(bank: &FilterBank, epsilon: f64) -> Result<DualBank, TransformError> {
    dual_bank_with(bank, epsilon, SingularPolicy::Strict)
}

pub fn dual_bank_with(
    bank: &FilterBank,
    epsilon: f64,
    policy: SingularPolicy,
) -> Result<DualBank, TransformError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(TransformError::InvalidEpsilon(epsilon));
    }
    let sums = crate::frame::sum_squares(bank);
    let singular_bins: Vec<usize> = sums
        .iter()
        .enumerate()
        .filter(|(_, &s)| s.is_nan() || s < epsilon)
        .map(|(k, _)| k)
        .collect();
    if !singular_bins.is_empty() && policy == SingularPolicy::Strict {
        return Err(TransformError::SingularFrame {
            bins: singular_bins,
            epsilon,
        });
    }
    let spectra = bank
        .spectra()
        .iter()
        .map(|psi| {
            psi.iter()
                .zip(&sums)
                .map(|(&p, &s)| {
                    if s >= epsilon {
                        p / s
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    Ok(DualBank {
        bank: bank.with_spectra(spectra),
        epsilon,
        singular_bins,
    })
}

/// Sums `dft(row_n) · filter_n` over rows in index order and inverts once.
fn synthesize(
    coeffs: &EwtCoefficients,
    synthesis: &FilterBank,
    scale: f64,
) -> Result<Vec<Complex64>, TransformError> {
    let n = synthesis.grid().len();
    if coeffs.indices() != synthesis.indices() {
        return Err(TransformError::ShapeMismatch(format!(
            "coefficient supports {:?} do not match filter supports {:?}",
            coeffs.indices(),
            synthesis.indices()
        )));
    }
    if coeffs.rows().iter().any(|r| r.len() != n) {
        return Err(TransformError::ShapeMismatch(format!(
            "coefficient rows of length {} for a {}-point grid",
            coeffs.samples(),
            n
        )));
    }
    let plan = DftPlan::new(n);
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (row, filter) in coeffs.rows().iter().zip(synthesis.spectra()) {
        buf.copy_from_slice(row);
        plan.forward_in_place(&mut buf);
        for ((a, b), f) in acc.iter_mut().zip(&buf).zip(filter) {
            *a += b * f;
        }
    }
    if scale != 1.0 {
        for a in acc.iter_mut() {
            *a *= scale;
        }
    }
    plan.inverse_in_place(&mut acc);
    Ok(acc)
}

/// Reconstruction through the dual bank.
pub fn inverse(
    coeffs: &EwtCoefficients,
    dual: &DualBank,
) -> Result<Vec<Complex64>, TransformError> {
    synthesize(coeffs, dual.bank(), 1.0)
}

/// Reconstruction for a tight frame with `Σ|ψ̂_n|² = A`, using the analysis
/// filters scaled by `1/A`.
pub fn inverse_tight(
    coeffs: &EwtCoefficients,
    bank: &FilterBank,
    a: f64,
) -> Result<Vec<Complex64>, TransformError> {
    if a.is_nan() || a <= 0.0 {
        return Err(TransformError::NonPositiveA(a));
    }
    synthesize(coeffs, bank, 1.0 / a)
}

/// Real part of a reconstruction together with the largest discarded
/// imaginary magnitude.
pub fn real_part(signal: &[Complex64]) -> (Vec<f64>, f64) {
    let max_imag = signal.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    (signal.iter().map(|z| z.re).collect(), max_imag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{lp_gamma_limit, sample_bank, Family, GaborRays};
    use crate::partition::{Mode, Partition};
    use crate::spectral::{dft, energy, relative_l2_error, translate, FrequencyGrid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const INF: f64 = f64::INFINITY;

    fn scaled_example() -> Partition {
        Partition::new(
            Mode::VStar,
            [
                -INF,
                -3.0 * PI,
                -PI,
                -PI / 3.0,
                PI / 2.0,
                1.5 * PI,
                2.0 * PI,
                INF,
            ],
        )
        .unwrap()
        .scaled(0.25)
    }

    fn lp_bank(n: usize) -> FilterBank {
        let p = scaled_example();
        let gamma = 0.9 * lp_gamma_limit(&p).unwrap();
        sample_bank(
            &p,
            Family::LittlewoodPaley { gamma },
            FrequencyGrid::new(n).unwrap(),
        )
        .unwrap()
    }

    fn random_signal(n: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn all_pass_filter_returns_signal() {
        let grid = FrequencyGrid::new(32).unwrap();
        let bank =
            FilterBank::from_spectra(grid, vec![0], vec![vec![Complex64::new(1.0, 0.0); 32]])
                .unwrap();
        let x = random_signal(32, 1);
        let c = forward(&x, &bank).unwrap();
        assert!(relative_l2_error(&c.rows()[0], &x) < 1e-15);
    }

    #[test]
    fn pure_tone_lands_in_one_shannon_row() {
        let n = 256;
        let p = scaled_example();
        let grid = FrequencyGrid::new(n).unwrap();
        let bank = sample_bank(&p, Family::Shannon, grid).unwrap();
        // bin 40 sits at 2π·40/256 ≈ 0.98, inside Ω_1 = [π/8, 3π/8]
        let k0 = 40;
        let tone: Vec<Complex64> = (0..n)
            .map(|t| Complex64::from_polar(1.0, 2.0 * PI * (k0 * t % n) as f64 / n as f64))
            .collect();
        let c = forward(&tone, &bank).unwrap();
        let psi = bank.spectrum(1).unwrap()[k0];
        for (row, &idx) in c.rows().iter().zip(c.indices()) {
            if idx == 1 {
                for (r, t) in row.iter().zip(&tone) {
                    assert!((r - psi.conj() * t).norm() < 1e-12);
                }
            } else {
                assert!(row.iter().all(|v| v.norm() < 1e-12), "row {idx}");
            }
        }
    }

    #[test]
    fn forward_is_linear() {
        let bank = lp_bank(256);
        let x = random_signal(256, 2);
        let y = random_signal(256, 3);
        let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
        let mix: Vec<Complex64> = x.iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let cx = forward(&x, &bank).unwrap();
        let cy = forward(&y, &bank).unwrap();
        let cm = forward(&mix, &bank).unwrap();
        for ((rx, ry), rm) in cx.rows().iter().zip(cy.rows()).zip(cm.rows()) {
            for ((u, v), m) in rx.iter().zip(ry).zip(rm) {
                assert!((a * u + b * v - m).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn length_mismatch_is_reported() {
        let bank = lp_bank(64);
        assert_eq!(
            forward(&random_signal(63, 0), &bank).unwrap_err(),
            TransformError::LengthMismatch {
                signal: 63,
                grid: 64
            }
        );
    }

    #[test]
    fn lp_dual_equals_bank() {
        let bank = lp_bank(1024);
        let dual = dual_bank(&bank, DEFAULT_EPSILON).unwrap();
        for (d, p) in dual.bank().spectra().iter().zip(bank.spectra()) {
            for (a, b) in d.iter().zip(p) {
                assert!((a - b).norm() < 1e-12);
            }
        }
        assert!(dual.singular_bins().is_empty());
    }

    #[test]
    fn shannon_dual_rescales_by_length() {
        let p = scaled_example();
        let bank = sample_bank(&p, Family::Shannon, FrequencyGrid::new(512).unwrap()).unwrap();
        let dual = dual_bank(&bank, DEFAULT_EPSILON).unwrap();
        for (pos, s) in p
            .supports()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_compact())
        {
            for (d, b) in dual.bank().spectra()[pos].iter().zip(&bank.spectra()[pos]) {
                assert!((d - b * s.length()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gabor_local_tails_are_singular() {
        let p = scaled_example();
        let bank = sample_bank(
            &p,
            Family::Gabor {
                rays: GaborRays::Local,
            },
            FrequencyGrid::new(1 << 14).unwrap(),
        )
        .unwrap();
        let err = dual_bank(&bank, DEFAULT_EPSILON).unwrap_err();
        let TransformError::SingularFrame { bins, .. } = err else {
            panic!("expected a singular frame");
        };
        // the right ray Gaussian is centered at 9π/16 with width π/8
        let grid = bank.grid();
        assert!(bins.iter().all(|&k| grid.xi(k) > 9.0 * PI / 16.0));
        assert!(bins.contains(&(grid.len() / 2)));

        let lenient = dual_bank_with(&bank, DEFAULT_EPSILON, SingularPolicy::ZeroFill).unwrap();
        assert_eq!(lenient.singular_bins(), &bins[..]);
        for &k in &bins {
            assert!(lenient
                .bank()
                .spectra()
                .iter()
                .all(|s| s[k] == Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn epsilon_must_be_positive() {
        let bank = lp_bank(16);
        assert_eq!(
            dual_bank(&bank, 0.0).unwrap_err(),
            TransformError::InvalidEpsilon(0.0)
        );
    }

    #[test]
    fn lp_round_trip() {
        let bank = lp_bank(4096);
        let x = random_signal(4096, 4);
        let c = forward(&x, &bank).unwrap();
        let dual = dual_bank(&bank, DEFAULT_EPSILON).unwrap();
        let back = inverse(&c, &dual).unwrap();
        assert!(relative_l2_error(&back, &x) <= 1e-10);
    }

    #[test]
    fn meyer_round_trip() {
        let p = scaled_example();
        let bank = sample_bank(&p, Family::Meyer, FrequencyGrid::new(2048).unwrap()).unwrap();
        let x = random_signal(2048, 5);
        let c = forward(&x, &bank).unwrap();
        let back = inverse(&c, &dual_bank(&bank, DEFAULT_EPSILON).unwrap()).unwrap();
        assert!(relative_l2_error(&back, &x) <= 1e-10);
    }

    #[test]
    fn zero_coefficients_give_zero_signal() {
        let bank = lp_bank(64);
        let zeros = EwtCoefficients::from_rows(
            bank.indices().to_vec(),
            vec![vec![Complex64::new(0.0, 0.0); 64]; bank.len()],
        )
        .unwrap();
        let back = inverse(&zeros, &dual_bank(&bank, DEFAULT_EPSILON).unwrap()).unwrap();
        assert!(back.iter().all(|v| *v == Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn shape_mismatch_on_inverse() {
        let bank = lp_bank(64);
        let dual = dual_bank(&bank, DEFAULT_EPSILON).unwrap();
        let short =
            EwtCoefficients::from_rows(vec![1], vec![vec![Complex64::new(0.0, 0.0); 64]]).unwrap();
        assert!(matches!(
            inverse(&short, &dual),
            Err(TransformError::ShapeMismatch(_))
        ));
        assert!(EwtCoefficients::from_rows(vec![1, 2], vec![vec![]]).is_err());
    }

    #[test]
    fn tight_inverse_matches_dual_inverse_for_lp() {
        let bank = lp_bank(1024);
        let x = random_signal(1024, 6);
        let c = forward(&x, &bank).unwrap();
        let a = inverse(&c, &dual_bank(&bank, DEFAULT_EPSILON).unwrap()).unwrap();
        let b = inverse_tight(&c, &bank, 1.0).unwrap();
        assert!(relative_l2_error(&b, &a) < 1e-12);
        let half = inverse_tight(&c, &bank, 2.0).unwrap();
        for (h, v) in half.iter().zip(&b) {
            assert!((h * 2.0 - v).norm() < 1e-14);
        }
        assert_eq!(
            inverse_tight(&c, &bank, 0.0).unwrap_err(),
            TransformError::NonPositiveA(0.0)
        );
    }

    #[test]
    fn tight_inverse_on_shannon_is_wrong() {
        let p = scaled_example();
        let bank = sample_bank(&p, Family::Shannon, FrequencyGrid::new(512).unwrap()).unwrap();
        let x = random_signal(512, 7);
        let c = forward(&x, &bank).unwrap();
        let back = inverse_tight(&c, &bank, 1.0).unwrap();
        assert!(relative_l2_error(&back, &x) > 0.1);
    }

    #[test]
    fn lp_analysis_preserves_energy() {
        let bank = lp_bank(2048);
        let x = random_signal(2048, 8);
        let c = forward(&x, &bank).unwrap();
        let total: f64 = c.rows().iter().map(|r| energy(r)).sum();
        assert!((total - energy(&x)).abs() <= 1e-9 * energy(&x));
    }

    #[test]
    fn forward_commutes_with_translation() {
        let bank = lp_bank(128);
        let x = random_signal(128, 9);
        let shifted = forward(&translate(&x, 13), &bank).unwrap();
        let plain = forward(&x, &bank).unwrap();
        for (s, r) in shifted.rows().iter().zip(plain.rows()) {
            let moved = translate(r, 13);
            for (a, b) in s.iter().zip(&moved) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dual_of_dual_recovers_tight_bank() {
        let bank = lp_bank(512);
        let dual = dual_bank(&bank, DEFAULT_EPSILON).unwrap();
        let again = dual_bank(dual.bank(), DEFAULT_EPSILON).unwrap();
        for (a, b) in again.bank().spectra().iter().zip(bank.spectra()) {
            for (u, v) in a.iter().zip(b) {
                assert!((u - v).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn real_part_reports_discarded_imaginary() {
        let (re, max_imag) = real_part(&[Complex64::new(1.0, 1e-3), Complex64::new(-2.0, -2e-3)]);
        assert_eq!(re, vec![1.0, -2.0]);
        assert_eq!(max_imag, 2e-3);
    }

    #[test]
    fn coefficients_carry_design() {
        let bank = lp_bank(32);
        let c = forward(&dft(&random_signal(32, 1)), &bank).unwrap();
        assert_eq!(c.design(), bank.design());
        assert_eq!(c.samples(), 32);
    }
}
