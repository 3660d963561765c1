//! Empirical Littlewood-Paley filters.

use crate::partition::{Mode, Partition};

use super::{rolloff_angle, FilterError};

/// Transition interval `[ν - τ, ν + τ]` around one boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Transition {
    start: f64,
    width: f64,
}

impl Transition {
    fn new(boundary: f64, half_width: f64) -> Self {
        Self {
            start: boundary - half_width,
            width: 2.0 * half_width,
        }
    }

    #[inline]
    fn end(&self) -> f64 {
        self.start + self.width
    }

    #[inline]
    fn angle(&self, xi: f64) -> f64 {
        rolloff_angle((xi - self.start) / self.width)
    }
}

/// Plateau between two transitions; a missing transition means a ray.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct LpFilter {
    lower: Option<Transition>,
    upper: Option<Transition>,
}

impl LpFilter {
    pub(crate) fn eval(&self, xi: f64) -> f64 {
        if let Some(up) = self.upper {
            if xi > up.end() {
                return 0.0;
            }
            if xi >= up.start {
                return up.angle(xi).cos();
            }
        }
        if let Some(low) = self.lower {
            if xi < low.start {
                return 0.0;
            }
            if xi <= low.end() {
                return low.angle(xi).sin();
            }
        }
        1.0
    }
}

/// Supremum of admissible `γ` for Littlewood-Paley filters on `partition`.
///
/// This is [`Partition::max_gamma`], further capped at `1/2` in `V` mode: the
/// zero boundary borrows the half-width `γ·min(|ν_{-1}|, |ν_1|)` of its
/// nearest neighbour, and `Ω_0 = [0, ν_1]` only fits both transitions when
/// `2γν_1 < ν_1`.
pub fn lp_gamma_limit(partition: &Partition) -> Result<f64, FilterError> {
    let limit = partition.max_gamma()?;
    Ok(match partition.mode() {
        Mode::V => limit.min(0.5),
        Mode::VStar => limit,
    })
}

/// Transition half-width `τ` at each boundary (by boundary position).
fn half_widths(partition: &Partition, gamma: f64) -> Result<Vec<f64>, FilterError> {
    let b = partition.boundaries();
    let mut tau: Vec<f64> = b.iter().map(|v| gamma * v.abs()).collect();
    if partition.mode() == Mode::V {
        let zero = b
            .iter()
            .position(|&v| v == 0.0)
            .expect("V partitions contain zero");
        let neighbours = [zero.checked_sub(1), Some(zero + 1)];
        let tau0 = neighbours
            .into_iter()
            .flatten()
            .filter_map(|p| b.get(p))
            .filter(|v| v.is_finite())
            .map(|v| gamma * v.abs())
            .reduce(f64::min)
            .ok_or(FilterError::ZeroTransitionUndefined)?;
        tau[zero] = tau0;
    }
    Ok(tau)
}

pub(crate) fn build(partition: &Partition, gamma: f64) -> Result<Vec<LpFilter>, FilterError> {
    let limit = lp_gamma_limit(partition)?;
    if !(gamma > 0.0 && gamma < limit) {
        return Err(FilterError::GammaOutOfRange { gamma, limit });
    }
    let b = partition.boundaries();
    let tau = half_widths(partition, gamma)?;
    let transition = |pos: usize| {
        let v = b[pos];
        v.is_finite().then(|| Transition::new(v, tau[pos]))
    };
    Ok((0..partition.support_count())
        .map(|pos| LpFilter {
            lower: transition(pos),
            upper: transition(pos + 1),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{eval_lp, Family, FilterSet};
    use std::f64::consts::PI;

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
    fn plateau_contains_center_when_transitions_leave_room() {
        // ω_n is on the plateau iff γ·max(|ν_n|, |ν_{n+1}|) ≤ |Ω_n|/2, which
        // is stricter than γ < γ_max.
        let p = example();
        let limit = lp_gamma_limit(&p).unwrap();
        for s in p.supports().iter().filter(|s| s.is_compact()) {
            let c = p.support_center(s.index).unwrap();
            let room = s.length() / (2.0 * s.lo.abs().max(s.hi.abs()));
            let gamma = 0.99 * room.min(limit);
            assert_eq!(eval_lp(&p, gamma, s.index, c).unwrap().re, 1.0);
        }
        // Ω_2 = [3π/2, 2π] with γ = 0.9/7: the upper transition starts
        // at 2π(1 - γ) < 7π/4, so the center is already rolling off.
        let gamma = 0.9 * limit;
        let v = eval_lp(&p, gamma, 2, 1.75 * PI).unwrap().re;
        assert!(v < 1.0 && v > 1.0 - 1e-9);
    }

    #[test]
    fn shared_boundary_splits_energy_evenly() {
        let p = example();
        let gamma = 0.1;
        let set = FilterSet::new(&p, Family::LittlewoodPaley { gamma }).unwrap();
        let nu = 1.5 * PI;
        let a = set.eval(1, nu).unwrap().re;
        let b = set.eval(2, nu).unwrap().re;
        assert!((a * a + b * b - 1.0).abs() < 1e-15);
        assert!((a * a - 0.5).abs() < 1e-12);
    }

    #[test]
    fn vanishes_outside_transition_hull() {
        let p = example();
        let gamma = 0.1;
        // Ω_1 = [π/2, 3π/2]: hull [π/2 - π/20, 3π/2 + 3π/20]
        let lo = PI / 2.0 * (1.0 - gamma);
        let hi = 1.5 * PI * (1.0 + gamma);
        assert_eq!(eval_lp(&p, gamma, 1, lo - 1e-9).unwrap().re, 0.0);
        assert_eq!(eval_lp(&p, gamma, 1, hi + 1e-9).unwrap().re, 0.0);
        assert!(eval_lp(&p, gamma, 1, lo + 1e-3).unwrap().re > 0.0);
    }

    #[test]
    fn output_is_real() {
        let p = example();
        for xi in [-10.0, -1.0, 0.0, 0.3, 4.0] {
            for n in p.indices() {
                assert_eq!(eval_lp(&p, 0.1, n, xi).unwrap().im, 0.0);
            }
        }
    }

    #[test]
    fn rejects_gamma_outside_range() {
        let p = example();
        assert!(matches!(
            eval_lp(&p, 1.0 / 7.0, 1, 0.0),
            Err(FilterError::GammaOutOfRange { .. })
        ));
        assert!(matches!(
            eval_lp(&p, 0.0, 1, 0.0),
            Err(FilterError::GammaOutOfRange { .. })
        ));
        assert!(matches!(
            eval_lp(&p, f64::NAN, 1, 0.0),
            Err(FilterError::GammaOutOfRange { .. })
        ));
    }

    #[test]
    fn v_mode_zero_transition_uses_nearest_neighbour() {
        let p = Partition::new(Mode::V, [-INF, -2.0, -1.0, 0.0, 0.5, 2.0, INF]).unwrap();
        let gamma = 0.2;
        // τ_0 = γ·min(1, 0.5) = 0.1: transition [-0.1, 0.1]
        let set = FilterSet::new(&p, Family::LittlewoodPaley { gamma }).unwrap();
        assert_eq!(set.eval(-1, -0.1 - 1e-12).unwrap().re, 1.0);
        assert_eq!(set.eval(0, -0.1 - 1e-12).unwrap().re, 0.0);
        let a = set.eval(-1, 0.0).unwrap().re;
        let b = set.eval(0, 0.0).unwrap().re;
        assert!((a * a - 0.5).abs() < 1e-12 && (b * b - 0.5).abs() < 1e-12);
        assert_eq!(set.eval(0, 0.1 + 1e-12).unwrap().re, 1.0);
    }

    #[test]
    fn v_mode_limit_is_capped_at_one_half() {
        let p = Partition::new(Mode::V, [-2.0, 0.0, 2.0]).unwrap();
        assert_eq!(p.max_gamma().unwrap(), 1.0);
        assert_eq!(lp_gamma_limit(&p).unwrap(), 0.5);
    }

    #[test]
    fn zero_boundary_between_rays_is_rejected() {
        let p = Partition::new(Mode::V, [-INF, 0.0, 1.0, INF]).unwrap();
        assert!(FilterSet::new(&p, Family::LittlewoodPaley { gamma: 0.2 }).is_ok());
        let q = Partition::new(Mode::V, [-INF, 0.0, INF]).unwrap();
        assert!(FilterSet::new(&q, Family::LittlewoodPaley { gamma: 0.2 }).is_err());
    }
}
