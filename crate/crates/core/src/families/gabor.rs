//! Empirical Gabor filters: Gaussians centered on each support.

use crate::partition::Partition;

use super::{FilterError, GaborRays};

/// Localization factor of the mother Gaussian `e^{-π(2.5ξ)²}`.
pub const GABOR_LOCALIZATION: f64 = 2.5;

/// Mother Gabor wavelet `e^{-π(2.5ξ)²}`, with `ψ̂(0) = 1`.
pub fn gabor_mother(xi: f64) -> f64 {
    let u = GABOR_LOCALIZATION * xi;
    (-std::f64::consts::PI * u * u).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Plateau {
    None,
    /// Held at the peak value for `ξ <= center`.
    Below,
    /// Held at the peak value for `ξ >= center`.
    Above,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct GaborFilter {
    center: f64,
    scale: f64,
    plateau: Plateau,
}

impl GaborFilter {
    pub(crate) fn eval(&self, xi: f64) -> f64 {
        let flat = match self.plateau {
            Plateau::None => false,
            Plateau::Below => xi <= self.center,
            Plateau::Above => xi >= self.center,
        };
        let peak = self.scale.sqrt().recip();
        if flat {
            peak
        } else {
            peak * gabor_mother((xi - self.center) / self.scale)
        }
    }
}

pub(crate) fn build(
    partition: &Partition,
    rays: GaborRays,
) -> Result<Vec<GaborFilter>, FilterError> {
    let supports = partition.supports();
    (0..supports.len())
        .map(|pos| {
            let s = &supports[pos];
            let center = partition.center_at_position(pos)?;
            let (scale, plateau) = if s.is_left_ray() {
                // a finite center guarantees a compact neighbour
                let scale = supports[pos + 1].length();
                (
                    scale,
                    if rays == GaborRays::Extended {
                        Plateau::Below
                    } else {
                        Plateau::None
                    },
                )
            } else if s.is_right_ray() {
                let scale = supports[pos - 1].length();
                (
                    scale,
                    if rays == GaborRays::Extended {
                        Plateau::Above
                    } else {
                        Plateau::None
                    },
                )
            } else {
                (s.length(), Plateau::None)
            };
            Ok(GaborFilter {
                center,
                scale,
                plateau,
            })
        })
        .collect()
}
