//! Partitions of the Fourier line into supports `Ω_n = [ν_n, ν_{n+1}]`.
//!
//! Boundary indices follow the sign of the boundary: negative values get
//! negative indices, positive values positive ones. In [`Mode::V`] the zero
//! frequency is itself a boundary with index 0. In [`Mode::VStar`] there is no
//! index 0 and the support `Ω_{-1} = [ν_{-1}, ν_1]` straddles zero.
//!
//! The outermost boundaries may be `-∞` / `+∞`, turning the outermost
//! supports into rays.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error("a partition needs at least two boundaries, got {0}")]
    TooFewBoundaries(usize),
    #[error("boundary at position {0} is NaN")]
    NotANumber(usize),
    #[error("boundaries must be strictly increasing, but {prev} is followed by {next}")]
    NotSorted { prev: f64, next: f64 },
    #[error("boundary {0} is repeated, which would give a zero-length support")]
    ZeroLengthSupport(f64),
    #[error("support [{lo}, {hi}] does not have a finite length")]
    UnboundedLength { lo: f64, hi: f64 },
    #[error("at most one -inf (first) and one +inf (last) boundary are allowed")]
    MultipleInfinities,
    #[error("boundary signs do not match their indices: {0}")]
    SignIndexViolation(&'static str),
    #[error("a V* partition needs at least one negative and one positive finite boundary")]
    VstarMissingSide,
    #[error("no support with index {0}")]
    UnknownSupport(i64),
    #[error("ray support {0} has no adjacent compact support to size its center")]
    RayWithoutNeighbor(i64),
    #[error("compact support {0} is centered at zero")]
    DegenerateCenter(i64),
    #[error("the partition has no compact support")]
    NoCompactSupport,
}

/// Whether the zero frequency is a boundary (`V`) or lies inside `Ω_{-1}` (`V*`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "V")]
    V,
    #[serde(rename = "Vstar")]
    VStar,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::V => f.write_str("V"),
            Mode::VStar => f.write_str("Vstar"),
        }
    }
}

/// An extended-real boundary value in radians.
///
/// Serializes finite values as JSON numbers and the infinities as the
/// strings `"-inf"` and `"+inf"`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Boundary(pub f64);

impl Boundary {
    pub const NEG_INF: Boundary = Boundary(f64::NEG_INFINITY);
    pub const POS_INF: Boundary = Boundary(f64::INFINITY);
}

impl From<f64> for Boundary {
    fn from(v: f64) -> Self {
        Boundary(v)
    }
}

impl Serialize for Boundary {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0 == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else if self.0 == f64::INFINITY {
            s.serialize_str("+inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Boundary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Boundary(v)),
            Raw::Text(t) => match t.trim() {
                "-inf" | "-Infinity" => Ok(Boundary::NEG_INF),
                "+inf" | "inf" | "Infinity" | "+Infinity" => Ok(Boundary::POS_INF),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number, \"-inf\" or \"+inf\", got \"{other}\""
                ))),
            },
        }
    }
}

/// One support `Ω_n` of a partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub index: i64,
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    /// `|Ω_n| = ν_{n+1} - ν_n`; infinite for rays.
    #[inline]
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn is_left_ray(&self) -> bool {
        self.lo == f64::NEG_INFINITY
    }

    #[inline]
    pub fn is_right_ray(&self) -> bool {
        self.hi == f64::INFINITY
    }

    #[inline]
    pub fn is_ray(&self) -> bool {
        self.is_left_ray() || self.is_right_ray()
    }

    #[inline]
    pub fn is_compact(&self) -> bool {
        !self.is_ray()
    }

    /// Closed-interval membership.
    #[inline]
    pub fn contains(&self, xi: f64) -> bool {
        self.lo <= xi && xi <= self.hi
    }
}

/// A validated, ordered set of boundaries together with its supports.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    mode: Mode,
    boundaries: Vec<f64>,
    /// Index of the first boundary, `n_m`.
    first_index: i64,
    supports: Vec<Support>,
    /// `ω_n` per support, `None` where a ray has no compact neighbour.
    centers: Vec<Option<f64>>,
}

impl Partition {
    /// Validates `values` and assigns indices from their signs.
    pub fn new<I, B>(mode: Mode, values: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = B>,
        B: Into<Boundary>,
    {
        let boundaries: Vec<f64> = values.into_iter().map(|b| b.into().0).collect();
        validate(mode, &boundaries)?;

        let negatives = boundaries.iter().filter(|&&v| v < 0.0).count() as i64;
        let first_index = -negatives;
        let index_of = |pos: usize| -> i64 {
            let pos = pos as i64;
            match mode {
                Mode::V => pos - negatives,
                Mode::VStar if pos < negatives => pos - negatives,
                Mode::VStar => pos - negatives + 1,
            }
        };

        let supports: Vec<Support> = boundaries
            .windows(2)
            .enumerate()
            .map(|(pos, w)| Support {
                index: index_of(pos),
                lo: w[0],
                hi: w[1],
            })
            .collect();

        let centers = (0..supports.len())
            .map(|pos| center_at(&supports, pos))
            .collect();

        Ok(Self {
            mode,
            boundaries,
            first_index,
            supports,
            centers,
        })
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Boundary values in increasing order.
    #[inline]
    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// Boundary index range `(n_m, n_M)`.
    pub fn index_range(&self) -> (i64, i64) {
        let count = self.boundaries.len() as i64;
        let last = match self.mode {
            Mode::V => self.first_index + count - 1,
            Mode::VStar => self.first_index + count,
        };
        (self.first_index, last)
    }

    /// Value of boundary `ν_n`, if that index exists.
    pub fn boundary(&self, n: i64) -> Option<f64> {
        let pos = self.boundary_position(n)?;
        self.boundaries.get(pos).copied()
    }

    fn boundary_position(&self, n: i64) -> Option<usize> {
        if self.mode == Mode::VStar && n == 0 {
            return None;
        }
        let mut pos = n - self.first_index;
        if self.mode == Mode::VStar && n > 0 {
            pos -= 1;
        }
        usize::try_from(pos)
            .ok()
            .filter(|&p| p < self.boundaries.len())
    }

    /// Supports in increasing frequency (and index) order.
    #[inline]
    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    #[inline]
    pub fn support_count(&self) -> usize {
        self.supports.len()
    }

    /// Support indices in order.
    pub fn indices(&self) -> Vec<i64> {
        self.supports.iter().map(|s| s.index).collect()
    }

    /// Position of support `n` in [`Partition::supports`].
    pub fn position(&self, n: i64) -> Result<usize, PartitionError> {
        self.boundary_position(n)
            .filter(|&p| p < self.supports.len())
            .ok_or(PartitionError::UnknownSupport(n))
    }

    pub fn support(&self, n: i64) -> Result<&Support, PartitionError> {
        self.position(n).map(|p| &self.supports[p])
    }

    pub fn has_left_ray(&self) -> bool {
        self.boundaries[0] == f64::NEG_INFINITY
    }

    pub fn has_right_ray(&self) -> bool {
        self.boundaries[self.boundaries.len() - 1] == f64::INFINITY
    }

    /// `|Ω_n|`, `+∞` for rays.
    pub fn support_length(&self, n: i64) -> Result<f64, PartitionError> {
        self.support(n).map(Support::length)
    }

    /// `ω_n`: the midpoint of a compact support, or for a ray the finite
    /// edge pushed outward by half the width of the adjacent compact support.
    pub fn support_center(&self, n: i64) -> Result<f64, PartitionError> {
        let pos = self.position(n)?;
        self.centers[pos].ok_or(PartitionError::RayWithoutNeighbor(n))
    }

    /// Center of the support at `pos` in [`Partition::supports`].
    pub(crate) fn center_at_position(&self, pos: usize) -> Result<f64, PartitionError> {
        self.centers[pos].ok_or(PartitionError::RayWithoutNeighbor(self.supports[pos].index))
    }

    /// Strict upper bound on the transition ratio `γ` so that the
    /// Littlewood-Paley transition intervals of neighbouring boundaries do
    /// not overlap.
    ///
    /// In `V*` mode `Ω_{-1}` is left out of the minimum and the result is
    /// capped at `1/2`, which handles a support centered on zero.
    pub fn max_gamma(&self) -> Result<f64, PartitionError> {
        let mut best = match self.mode {
            Mode::V => f64::INFINITY,
            Mode::VStar => 0.5,
        };
        let mut seen_compact = false;
        for (pos, s) in self.supports.iter().enumerate() {
            if s.is_ray() {
                continue;
            }
            seen_compact = true;
            if self.mode == Mode::VStar && s.index == -1 {
                continue;
            }
            let center = self.center_at_position(pos)?;
            if center == 0.0 {
                return Err(PartitionError::DegenerateCenter(s.index));
            }
            best = best.min(s.length() / (2.0 * center.abs()));
        }
        if !seen_compact {
            return Err(PartitionError::NoCompactSupport);
        }
        Ok(best)
    }

    /// The same partition with every finite boundary multiplied by `factor`.
    ///
    /// # Panics
    ///
    /// Panics unless `factor` is finite and positive.
    pub fn scaled(&self, factor: f64) -> Partition {
        assert!(
            factor.is_finite() && factor > 0.0,
            "scale factor must be positive"
        );
        let values = self
            .boundaries
            .iter()
            .map(|&v| if v.is_finite() { v * factor } else { v });
        Partition::new(self.mode, values).expect("positive scaling preserves validity")
    }
}

fn validate(mode: Mode, b: &[f64]) -> Result<(), PartitionError> {
    if b.len() < 2 {
        return Err(PartitionError::TooFewBoundaries(b.len()));
    }
    if let Some(pos) = b.iter().position(|v| v.is_nan()) {
        return Err(PartitionError::NotANumber(pos));
    }
    let neg_inf = b.iter().filter(|v| **v == f64::NEG_INFINITY).count();
    let pos_inf = b.iter().filter(|v| **v == f64::INFINITY).count();
    if neg_inf > 1 || pos_inf > 1 {
        return Err(PartitionError::MultipleInfinities);
    }
    for w in b.windows(2) {
        if w[0] == w[1] {
            return Err(PartitionError::ZeroLengthSupport(w[0]));
        }
        if w[0] > w[1] {
            return Err(PartitionError::NotSorted {
                prev: w[0],
                next: w[1],
            });
        }
        if w[0].is_finite() && w[1].is_finite() && !(w[1] - w[0]).is_finite() {
            return Err(PartitionError::UnboundedLength { lo: w[0], hi: w[1] });
        }
    }
    let has_zero = b.contains(&0.0);
    match mode {
        Mode::V if !has_zero => Err(PartitionError::SignIndexViolation(
            "a V partition must contain the zero boundary ν_0",
        )),
        Mode::VStar if has_zero => Err(PartitionError::SignIndexViolation(
            "a V* partition has no index 0, so zero cannot be a boundary",
        )),
        Mode::VStar => {
            let neg = b.iter().any(|&v| v.is_finite() && v < 0.0);
            let pos = b.iter().any(|&v| v.is_finite() && v > 0.0);
            if neg && pos {
                Ok(())
            } else {
                Err(PartitionError::VstarMissingSide)
            }
        }
        Mode::V => Ok(()),
    }
}

fn center_at(supports: &[Support], pos: usize) -> Option<f64> {
    let s = &supports[pos];
    match (s.is_left_ray(), s.is_right_ray()) {
        (false, false) => Some(0.5 * (s.lo + s.hi)),
        (true, false) => {
            let next = supports.get(pos + 1).filter(|n| n.is_compact())?;
            Some(s.hi - 0.5 * next.length())
        }
        (false, true) => {
            let prev = pos
                .checked_sub(1)
                .map(|p| &supports[p])
                .filter(|p| p.is_compact())?;
            Some(s.lo + 0.5 * prev.length())
        }
        (true, true) => None,
    }
}

/// Serialized form: `{"mode": "Vstar", "boundaries": ["-inf", -1.0, 1.0, "+inf"]}`.
#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    mode: Mode,
    boundaries: Vec<Boundary>,
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PartitionRepr {
            mode: self.mode,
            boundaries: self.boundaries.iter().copied().map(Boundary).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PartitionRepr::deserialize(d)?;
        Partition::new(repr.mode, repr.boundaries).map_err(serde::de::Error::custom)
    }
}
