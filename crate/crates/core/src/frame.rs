//! Frame sums `S(ξ) = Σ_n |ψ̂_n(ξ)|²`, empirical and analytic frame bounds,
//! and per-filter energies.
//!
//! A bank admits exact reconstruction through its dual filters whenever `S`
//! is bounded away from zero; the bounds `A ≤ S ≤ B` quantify how well
//! conditioned that reconstruction is, and `A = B` means the frame is tight.

use std::f64::consts::PI;

use serde::Serialize;

use crate::families::{Family, FilterBank, FilterError, GaborRays};
use crate::partition::{Boundary, Mode, Partition};

/// `e^{-25π/8}`: squared Gabor mother at the half-width point `ξ = 1/2`.
pub fn gabor_edge_energy() -> f64 {
    (-25.0 * PI / 8.0).exp()
}

/// `S(ξ_k)` at every bin, summing filters in bank order.
pub fn sum_squares(bank: &FilterBank) -> Vec<f64> {
    let mut sums = vec![0.0; bank.grid().len()];
    for spectrum in bank.spectra() {
        for (s, v) in sums.iter_mut().zip(spectrum) {
            *s += v.norm_sqr();
        }
    }
    sums
}

/// `(min_k S, max_k S)`.
pub fn empirical_bounds(bank: &FilterBank) -> (f64, f64) {
    let sums = sum_squares(bank);
    let lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Trapezoidal `∫|ψ̂_n(ξ)|² dξ` over the grid in ascending frequency order.
pub fn filter_norms(bank: &FilterBank) -> Vec<f64> {
    let grid = bank.grid();
    let order = grid.ascending_bins();
    let h = grid.spacing();
    bank.spectra()
        .iter()
        .map(|spectrum| {
            let values: Vec<f64> = order.iter().map(|&k| spectrum[k].norm_sqr()).collect();
            let interior: f64 = values.iter().sum();
            let ends = values.first().unwrap_or(&0.0) + values.last().unwrap_or(&0.0);
            h * (interior - 0.5 * ends)
        })
        .collect()
}

/// Closed-form frame bounds; `upper` is `None` when only a lower bound is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticBounds {
    pub lower: f64,
    pub upper: Option<f64>,
}

/// Frame bounds predicted for `family` on `partition`, if the family has them.
///
/// * Littlewood-Paley: tight with `A = B = 1`.
/// * Meyer: extremes of `2/(ω_{n+1} - ω_{n-1})` over interior filters and of
///   the two ray amplitudes.
/// * Shannon: `1/max|Ω_n|` and `1/min|Ω_n|`, counting rays as length 1.
/// * Gabor with extended rays on both sides: lower bound
///   `e^{-25π/8} / max|Ω_n|` over compact supports, which is the edge value
///   of the widest Gaussian including its `1/|Ω_n|` normalization.
pub fn analytic_bounds(
    family: Family,
    partition: &Partition,
) -> Result<Option<AnalyticBounds>, FilterError> {
    let supports = partition.supports();
    match family {
        Family::LittlewoodPaley { .. } => Ok(Some(AnalyticBounds {
            lower: 1.0,
            upper: Some(1.0),
        })),
        Family::Meyer => {
            if !(partition.has_left_ray() && partition.has_right_ray()) {
                return Err(FilterError::MeyerRequiresRays);
            }
            let c = (0..supports.len())
                .map(|pos| partition.center_at_position(pos))
                .collect::<Result<Vec<_>, _>>()?;
            let last = c.len() - 1;
            let terms = [2.0 / (c[last] - c[last - 1]), 2.0 / (c[1] - c[0])]
                .into_iter()
                .chain((1..last).map(|p| 2.0 / (c[p + 1] - c[p - 1])));
            let (lo, hi) = min_max(terms);
            Ok(Some(AnalyticBounds {
                lower: lo,
                upper: Some(hi),
            }))
        }
        Family::Shannon => {
            let lengths = supports
                .iter()
                .map(|s| if s.is_ray() { 1.0 } else { s.length() });
            let (shortest, longest) = min_max(lengths);
            Ok(Some(AnalyticBounds {
                lower: 1.0 / longest,
                upper: Some(1.0 / shortest),
            }))
        }
        Family::Gabor { rays } => {
            let covered = rays == GaborRays::Extended
                && partition.has_left_ray()
                && partition.has_right_ray();
            if !covered {
                return Ok(None);
            }
            let widest = supports
                .iter()
                .filter(|s| s.is_compact())
                .map(|s| s.length())
                .fold(0.0, f64::max);
            if widest == 0.0 {
                return Ok(None);
            }
            Ok(Some(AnalyticBounds {
                lower: gabor_edge_energy() / widest,
                upper: None,
            }))
        }
    }
}

fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

/// Everything the frame analysis knows about one bank.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameReport {
    pub family: Option<String>,
    pub mode: Option<Mode>,
    pub boundaries: Option<Vec<Boundary>>,
    pub n_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_squares: Option<Vec<f64>>,
    #[serde(rename = "A_emp")]
    pub a_emp: f64,
    #[serde(rename = "B_emp")]
    pub b_emp: f64,
    #[serde(rename = "A_analytic")]
    pub a_analytic: Option<f64>,
    #[serde(rename = "B_analytic")]
    pub b_analytic: Option<f64>,
    pub per_filter_norm: Vec<f64>,
    pub singular_bins: Vec<usize>,
    /// `e^{-25π/8}` before dividing by the largest support length (Gabor only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gabor_unnormalized_lower: Option<f64>,
}

impl FrameReport {
    /// Analyzes `bank`; bins with `S < epsilon` are listed as singular.
    pub fn new(bank: &FilterBank, epsilon: f64) -> Result<Self, FilterError> {
        let sums = sum_squares(bank);
        let (a_emp, b_emp) = empirical_bounds(bank);
        let singular_bins = sums
            .iter()
            .enumerate()
            .filter(|(_, &s)| s.is_nan() || s < epsilon)
            .map(|(k, _)| k)
            .collect();
        let design = bank.design();
        let analytic = match design {
            Some(d) => analytic_bounds(d.family, &d.partition)?,
            None => None,
        };
        let gabor_unnormalized_lower = match design.map(|d| d.family) {
            Some(Family::Gabor { .. }) if analytic.is_some() => Some(gabor_edge_energy()),
            _ => None,
        };
        Ok(Self {
            family: design.map(|d| d.family.name().to_string()),
            mode: design.map(|d| d.partition.mode()),
            boundaries: design.map(|d| {
                d.partition
                    .boundaries()
                    .iter()
                    .copied()
                    .map(Boundary)
                    .collect()
            }),
            n_samples: bank.grid().len(),
            sum_squares: Some(sums),
            a_emp,
            b_emp,
            a_analytic: analytic.map(|b| b.lower),
            b_analytic: analytic.and_then(|b| b.upper),
            per_filter_norm: filter_norms(bank),
            singular_bins,
            gabor_unnormalized_lower,
        })
    }

    /// `A_analytic - tol ≤ A_emp` and `B_emp ≤ B_analytic + tol` for whichever
    /// analytic bounds exist.
    pub fn respects_analytic_bounds(&self, tol: f64) -> bool {
        let lower_ok = self.a_analytic.is_none_or(|a| a - tol <= self.a_emp);
        let upper_ok = self.b_analytic.is_none_or(|b| self.b_emp <= b + tol);
        lower_ok && upper_ok
    }
}
