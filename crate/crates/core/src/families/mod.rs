//! The four empirical wavelet families and the sampler that turns them into
//! a [`FilterBank`] on a [`FrequencyGrid`].
//!
//! Every family is evaluated pointwise and analytically: `ψ̂_n(ξ)` is a
//! closed-form function of the partition and the frequency, defined on the
//! whole real line. Sampling a bank simply evaluates each filter at every
//! bin frequency.
//!
//! | family | filter on a compact support | rays |
//! |---|---|---|
//! | Littlewood-Paley | plateau with `β`-shaped transitions of half-width `γ|ν_n|` | one-sided plateau |
//! | Meyer | `sin`/`cos` profile between neighbouring centers, unit `L²` norm | one-sided plateau |
//! | Shannon | `1/√|Ω_n|` indicator with a linear phase | unit-modulus indicator |
//! | Gabor | Gaussian centered at `ω_n` with width `|Ω_n|` | Gaussian, optionally with a far-side plateau |

mod bank;
mod gabor;
mod lp;
mod meyer;
mod shannon;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::partition::{Partition, PartitionError};

pub use bank::{sample_bank, Design, FilterBank, ScaleFactor};
pub use gabor::{gabor_mother, GABOR_LOCALIZATION};
pub use lp::lp_gamma_limit;
pub use shannon::shannon_mother;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("gamma = {gamma} is outside the admissible range (0, {limit})")]
    GammaOutOfRange { gamma: f64, limit: f64 },
    #[error("the zero boundary has no finite neighbour to size its transition")]
    ZeroTransitionUndefined,
    #[error("Meyer filters need both a left and a right ray")]
    MeyerRequiresRays,
    #[error("the Meyer phase of filter {0} is undefined (neighbouring centers at zero)")]
    MeyerDegeneratePhase(i64),
    #[error("boundary {0} lies outside the open interval (-π, π) sampled by the grid")]
    BoundaryOutsideGrid(f64),
    #[error("filter bank shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// How Gabor ray filters are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaborRays {
    /// A plain Gaussian on each ray; spectrum far out on the ray is not analyzed.
    Local,
    /// The Gaussian is held at its peak value beyond the ray center, so the
    /// far spectrum stays covered.
    #[default]
    Extended,
}

/// Family selection together with its construction parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    LittlewoodPaley { gamma: f64 },
    Meyer,
    Shannon,
    Gabor { rays: GaborRays },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::LittlewoodPaley { .. } => "littlewood-paley",
            Family::Meyer => "meyer",
            Family::Shannon => "shannon",
            Family::Gabor { .. } => "gabor",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::LittlewoodPaley { gamma } => write!(f, "littlewood-paley(gamma={gamma})"),
            Family::Gabor { rays } => write!(f, "gabor({rays:?} rays)"),
            other => f.write_str(other.name()),
        }
    }
}

/// The Meyer-type roll-off polynomial `x⁴(35 - 84x + 70x² - 20x³)`.
///
/// It rises from `β(0) = 0` to `β(1) = 1` and satisfies `β(x) + β(1-x) = 1`.
///
/// ```
/// use ewt::families::beta;
/// assert_eq!(beta(0.0), 0.0);
/// assert_eq!(beta(1.0), 1.0);
/// assert!((beta(0.5) - 0.5).abs() < 1e-15);
/// ```
#[inline]
pub fn beta(x: f64) -> f64 {
    let x2 = x * x;
    x2 * x2 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x)
}

/// `π/2 · β(u)` with `u` clamped into `[0, 1]`.
#[inline]
pub(crate) fn rolloff_angle(u: f64) -> f64 {
    std::f64::consts::FRAC_PI_2 * beta(u.clamp(0.0, 1.0))
}

/// One analytic filter, precomputed for a single support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shape {
    Lp(lp::LpFilter),
    Meyer(meyer::MeyerFilter),
    Shannon(shannon::ShannonFilter),
    Gabor(gabor::GaborFilter),
}

impl Shape {
    #[inline]
    fn eval(&self, xi: f64) -> Complex64 {
        match self {
            Shape::Lp(f) => Complex64::new(f.eval(xi), 0.0),
            Shape::Meyer(f) => f.eval(xi),
            Shape::Shannon(f) => f.eval(xi),
            Shape::Gabor(f) => Complex64::new(f.eval(xi), 0.0),
        }
    }
}

/// Analytic evaluators `ψ̂_n` for every support of a partition.
///
/// Construction checks the family's preconditions once; evaluation is then
/// infallible for in-range positions.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSet {
    partition: Partition,
    family: Family,
    shapes: Vec<Shape>,
}

impl FilterSet {
    pub fn new(partition: &Partition, family: Family) -> Result<Self, FilterError> {
        let shapes = match family {
            Family::LittlewoodPaley { gamma } => lp::build(partition, gamma)?
                .into_iter()
                .map(Shape::Lp)
                .collect(),
            Family::Meyer => meyer::build(partition)?
                .into_iter()
                .map(Shape::Meyer)
                .collect(),
            Family::Shannon => shannon::build(partition)?
                .into_iter()
                .map(Shape::Shannon)
                .collect(),
            Family::Gabor { rays } => gabor::build(partition, rays)?
                .into_iter()
                .map(Shape::Gabor)
                .collect(),
        };
        Ok(Self {
            partition: partition.clone(),
            family,
            shapes,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// `ψ̂_n(ξ)` for support index `n`.
    pub fn eval(&self, n: i64, xi: f64) -> Result<Complex64, FilterError> {
        let pos = self.partition.position(n)?;
        Ok(self.shapes[pos].eval(xi))
    }

    /// `ψ̂` of the support at `pos` in [`Partition::supports`] order.
    #[inline]
    pub fn eval_at(&self, pos: usize, xi: f64) -> Complex64 {
        self.shapes[pos].eval(xi)
    }

    pub(crate) fn shapes(&self) -> &[Shape] {
        &self.shapes
    }
}

/// Empirical Littlewood-Paley filter `ψ̂_n^{LP}(ξ)`.
pub fn eval_lp(
    partition: &Partition,
    gamma: f64,
    n: i64,
    xi: f64,
) -> Result<Complex64, FilterError> {
    FilterSet::new(partition, Family::LittlewoodPaley { gamma })?.eval(n, xi)
}

/// Empirical Meyer filter `ψ̂_n^M(ξ)`.
pub fn eval_meyer(partition: &Partition, n: i64, xi: f64) -> Result<Complex64, FilterError> {
    FilterSet::new(partition, Family::Meyer)?.eval(n, xi)
}

/// Empirical Shannon filter `ψ̂_n^{SH}(ξ)`.
pub fn eval_shannon(partition: &Partition, n: i64, xi: f64) -> Result<Complex64, FilterError> {
    FilterSet::new(partition, Family::Shannon)?.eval(n, xi)
}

/// Empirical Gabor filter `ψ̂_n^G(ξ)`.
pub fn eval_gabor(
    partition: &Partition,
    rays: GaborRays,
    n: i64,
    xi: f64,
) -> Result<Complex64, FilterError> {
    FilterSet::new(partition, Family::Gabor { rays })?.eval(n, xi)
}
