//! Empirical Shannon filters: scaled indicators of each support.

use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

use crate::partition::Partition;

use super::FilterError;

/// Mother Shannon wavelet `e^{-iπ/2 (ξ + 3/2)}` on `[-1/2, 1/2)`.
pub fn shannon_mother(xi: f64) -> Complex64 {
    if (-0.5..0.5).contains(&xi) {
        Complex64::from_polar(1.0, -FRAC_PI_2 * (xi + 1.5))
    } else {
        Complex64::new(0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ShannonFilter {
    /// `T_{ω} D_{|Ω|}` of the mother, supported on `[lo, hi)`.
    Compact {
        lo: f64,
        hi: f64,
        center: f64,
        length: f64,
    },
    /// `e^{-iπ} = -1` on `(-∞, hi)`.
    LeftRay { hi: f64 },
    /// `e^{-iπ/2} = -i` on `[lo, +∞)`.
    RightRay { lo: f64 },
}

impl ShannonFilter {
    pub(crate) fn eval(&self, xi: f64) -> Complex64 {
        match *self {
            ShannonFilter::Compact {
                lo,
                hi,
                center,
                length,
            } => {
                if lo <= xi && xi < hi {
                    let phase = -FRAC_PI_2 * ((xi - center) / length + 1.5);
                    Complex64::from_polar(length.sqrt().recip(), phase)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            ShannonFilter::LeftRay { hi } if xi < hi => Complex64::new(-1.0, 0.0),
            ShannonFilter::RightRay { lo } if xi >= lo => Complex64::new(0.0, -1.0),
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

pub(crate) fn build(partition: &Partition) -> Result<Vec<ShannonFilter>, FilterError> {
    Ok(partition
        .supports()
        .iter()
        .map(|s| match (s.is_left_ray(), s.is_right_ray()) {
            (true, _) => ShannonFilter::LeftRay { hi: s.hi },
            (_, true) => ShannonFilter::RightRay { lo: s.lo },
            _ => ShannonFilter::Compact {
                lo: s.lo,
                hi: s.hi,
                center: 0.5 * (s.lo + s.hi),
                length: s.length(),
            },
        })
        .collect())
}
