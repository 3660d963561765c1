//! Empirical Meyer filters, built directly from consecutive support centers.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::partition::Partition;

use super::{rolloff_angle, FilterError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Profile {
    /// `1` up to `center`, `cos` roll-off down to zero at `next`.
    LeftRay { center: f64, next: f64 },
    /// `sin` rise on `[prev, center]`, `cos` fall on `[center, next]`.
    Interior { prev: f64, center: f64, next: f64 },
    /// `sin` rise on `[prev, center]`, `1` beyond.
    RightRay { prev: f64, center: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct MeyerFilter {
    /// Amplitude times the constant phase factor.
    gain: Complex64,
    profile: Profile,
}

impl MeyerFilter {
    pub(crate) fn eval(&self, xi: f64) -> Complex64 {
        let rise = |a: f64, b: f64| rolloff_angle((xi - a) / (b - a)).sin();
        let fall = |a: f64, b: f64| rolloff_angle((xi - a) / (b - a)).cos();
        let value = match self.profile {
            Profile::LeftRay { center, next } => {
                if xi <= center {
                    1.0
                } else if xi <= next {
                    fall(center, next)
                } else {
                    0.0
                }
            }
            Profile::Interior { prev, center, next } => {
                if xi < prev || xi > next {
                    0.0
                } else if xi <= center {
                    rise(prev, center)
                } else {
                    fall(center, next)
                }
            }
            Profile::RightRay { prev, center } => {
                if xi >= center {
                    1.0
                } else if xi >= prev {
                    rise(prev, center)
                } else {
                    0.0
                }
            }
        };
        self.gain * value
    }
}

fn phase(n: i64, reference: f64) -> Result<Complex64, FilterError> {
    if reference == 0.0 {
        return Err(FilterError::MeyerDegeneratePhase(n));
    }
    Ok(Complex64::from_polar(1.0, 4.0 * PI / (3.0 * reference)))
}

pub(crate) fn build(partition: &Partition) -> Result<Vec<MeyerFilter>, FilterError> {
    if !(partition.has_left_ray() && partition.has_right_ray()) {
        return Err(FilterError::MeyerRequiresRays);
    }
    let count = partition.support_count();
    let centers = (0..count)
        .map(|pos| partition.center_at_position(pos))
        .collect::<Result<Vec<_>, _>>()?;
    let index = |pos: usize| partition.supports()[pos].index;

    (0..count)
        .map(|pos| {
            let n = index(pos);
            let filter = if pos == 0 {
                let (center, next) = (centers[0], centers[1]);
                MeyerFilter {
                    gain: (2.0 / (next - center)).sqrt() * phase(n, next.abs())?,
                    profile: Profile::LeftRay { center, next },
                }
            } else if pos == count - 1 {
                let (prev, center) = (centers[pos - 1], centers[pos]);
                MeyerFilter {
                    gain: (2.0 / (center - prev)).sqrt() * phase(n, prev.abs())?,
                    profile: Profile::RightRay { prev, center },
                }
            } else {
                let (prev, center, next) = (centers[pos - 1], centers[pos], centers[pos + 1]);
                MeyerFilter {
                    gain: (2.0 / (next - prev)).sqrt() * phase(n, prev.abs().max(next.abs()))?,
                    profile: Profile::Interior { prev, center, next },
                }
            };
            Ok(filter)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eval_meyer, Family, FilterSet};
    use crate::partition::{Mode, PartitionError};

    const INF: f64 = f64::INFINITY;

    fn example() -> Partition {
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
    }

    #[test]
    fn center_knot_gives_amplitude() {
        let p = example();
        // n = 1: neighbours ω_{-1} = π/12, ω_2 = 7π/4
        let v = eval_meyer(&p, 1, PI).unwrap();
        let amp = (2.0 / (7.0 * PI / 4.0 - PI / 12.0)).sqrt();
        assert!((v.norm() - amp).abs() < 1e-14);
        // the phase is fixed by max(|ω_{-1}|, |ω_2|) = 7π/4
        let expected = Complex64::from_polar(amp, 4.0 * PI / (3.0 * 7.0 * PI / 4.0));
        assert!((v - expected).norm() < 1e-14);
    }

    #[test]
    fn lower_knot_is_zero() {
        let p = example();
        assert_eq!(eval_meyer(&p, 1, PI / 12.0).unwrap().norm(), 0.0);
        assert_eq!(eval_meyer(&p, 1, PI / 12.0 - 0.1).unwrap().norm(), 0.0);
    }

    #[test]
    fn interior_filters_have_unit_energy() {
        // Composite Simpson on each filter's compact support.
        let p = example();
        let set = FilterSet::new(&p, Family::Meyer).unwrap();
        for pos in 1..p.support_count() - 1 {
            let lo = p.center_at_position(pos - 1).unwrap();
            let hi = p.center_at_position(pos + 1).unwrap();
            let m = 20_000;
            let h = (hi - lo) / m as f64;
            let mut acc = 0.0;
            for i in 0..=m {
                let w = if i == 0 || i == m {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * set.eval_at(pos, lo + i as f64 * h).norm_sqr();
            }
            let energy = acc * h / 3.0;
            assert!((energy - 1.0).abs() < 1e-8, "pos {pos}: {energy}");
        }
    }

    #[test]
    fn rays_are_one_sided() {
        let p = example();
        let left = eval_meyer(&p, -4, -100.0).unwrap();
        assert!((left.norm() - (2.0 / (2.0 * PI)).sqrt()).abs() < 1e-14);
        assert!(eval_meyer(&p, -4, -2.0 * PI).unwrap().norm() < 1e-16);
        assert_eq!(eval_meyer(&p, -4, -1.9 * PI).unwrap().norm(), 0.0);
        let right = eval_meyer(&p, 3, 100.0).unwrap();
        assert!((right.norm() - (2.0 / (PI / 2.0)).sqrt()).abs() < 1e-14);
        assert_eq!(eval_meyer(&p, 3, 7.0 * PI / 4.0).unwrap().norm(), 0.0);
    }

    #[test]
    fn requires_both_rays() {
        let p = Partition::new(Mode::VStar, [-INF, -1.0, 1.0, 2.0]).unwrap();
        assert_eq!(
            FilterSet::new(&p, Family::Meyer).unwrap_err(),
            FilterError::MeyerRequiresRays
        );
    }

    #[test]
    fn ray_pair_without_compact_support_is_rejected() {
        let p = Partition::new(Mode::V, [-INF, 0.0, INF]).unwrap();
        assert_eq!(
            FilterSet::new(&p, Family::Meyer).unwrap_err(),
            FilterError::Partition(PartitionError::RayWithoutNeighbor(-1))
        );
    }

    #[test]
    fn zero_centered_neighbour_of_a_ray_has_no_phase() {
        let p = Partition::new(Mode::VStar, [-INF, -1.0, 1.0, INF]).unwrap();
        assert_eq!(
            FilterSet::new(&p, Family::Meyer).unwrap_err(),
            FilterError::MeyerDegeneratePhase(-2)
        );
    }
}
