//! Job configuration, file formats and the toy boundary detector.
//!
//! * Job configs are JSON ([`JobConfig`]).
//! * Signals are CSV with a `re` or `re,im` column layout, or raw
//!   little-endian `f64` real samples.
//! * Coefficients use a small binary container, see [`write_coefficients`].
//! * Filter spectra are exported as CSV in ascending frequency order.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{lp_gamma_limit, Family, FilterBank, FilterError, GaborRays};
use crate::partition::{Boundary, Mode, Partition};
use crate::spectral::{dft, FrequencyGrid};
use crate::transform::{EwtCoefficients, DEFAULT_EPSILON};

/// Fraction of the admissible limit used when a config leaves `gamma` out.
pub const DEFAULT_GAMMA_FRACTION: f64 = 0.9;

/// Magic bytes opening a coefficient file.
pub const COEFFICIENT_MAGIC: [u8; 4] = *b"EWTC";
pub const COEFFICIENT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid config field `{field}`: {message}")]
    Config {
        field: &'static str,
        message: String,
    },
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("signal has {found} samples but the job expects {expected}")]
    LengthMismatch { found: usize, expected: usize },
    #[error("found {found} spectral peaks but {requested} were requested")]
    FewerPeaksThanRequested { found: usize, requested: usize },
}

impl IoError {
    fn config(field: &'static str, message: impl ToString) -> Self {
        IoError::Config {
            field,
            message: message.to_string(),
        }
    }

    /// Whether this is an input/parse problem rather than a validation one.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, IoError::Io(_) | IoError::Parse(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    LittlewoodPaley,
    Meyer,
    Shannon,
    Gabor,
}

fn default_epsilon() -> f64 {
    DEFAULT_EPSILON
}

/// A job description as found in a JSON config file.
///
/// ```json
/// {
///   "mode": "Vstar",
///   "boundaries": ["-inf", -0.75, -0.25, 0.4, 1.1, "+inf"],
///   "family": "littlewood-paley",
///   "n_samples": 4096
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub mode: Mode,
    pub boundaries: Vec<Boundary>,
    pub family: FamilyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub gabor_rays: GaborRays,
    pub n_samples: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default)]
    pub allow_singular: bool,
    #[serde(default)]
    pub real_output: bool,
}

/// A fully validated job.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub partition: Partition,
    pub family: Family,
    pub grid: FrequencyGrid,
    pub epsilon: f64,
    pub allow_singular: bool,
    pub real_output: bool,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, IoError> {
        serde_json::from_str(text).map_err(|e| IoError::Parse(format!("config: {e}")))
    }

    /// Validates the config. `sample_rate` converts boundaries given in Hz
    /// to radians; `n_samples` overrides the configured length.
    pub fn resolve(
        &self,
        sample_rate: Option<f64>,
        n_samples: Option<usize>,
    ) -> Result<Job, IoError> {
        let values: Vec<f64> = match sample_rate {
            None => self.boundaries.iter().map(|b| b.0).collect(),
            Some(rate) if rate.is_finite() && rate > 0.0 => self
                .boundaries
                .iter()
                .map(|b| {
                    if b.0.is_finite() {
                        2.0 * PI * b.0 / rate
                    } else {
                        b.0
                    }
                })
                .collect(),
            Some(rate) => {
                return Err(IoError::config(
                    "hz",
                    format!("sample rate {rate} must be positive"),
                ))
            }
        };
        let partition =
            Partition::new(self.mode, values).map_err(|e| IoError::config("boundaries", e))?;
        if let Some(&b) = partition
            .boundaries()
            .iter()
            .find(|b| b.is_finite() && !(-PI < **b && **b < PI))
        {
            return Err(IoError::config(
                "boundaries",
                format!("{b} rad is outside (-π, π)"),
            ));
        }

        let family = match self.family {
            FamilyName::LittlewoodPaley => {
                let limit =
                    lp_gamma_limit(&partition).map_err(|e| IoError::config("boundaries", e))?;
                let gamma = self.gamma.unwrap_or(DEFAULT_GAMMA_FRACTION * limit);
                if !(gamma > 0.0 && gamma < limit) {
                    return Err(IoError::config(
                        "gamma",
                        format!("{gamma} is outside the admissible range (0, {limit})"),
                    ));
                }
                Family::LittlewoodPaley { gamma }
            }
            other => {
                if self.gamma.is_some() {
                    return Err(IoError::config(
                        "gamma",
                        "only the littlewood-paley family takes a gamma",
                    ));
                }
                match other {
                    FamilyName::Meyer => Family::Meyer,
                    FamilyName::Shannon => Family::Shannon,
                    _ => Family::Gabor {
                        rays: self.gabor_rays,
                    },
                }
            }
        };

        let n = n_samples.unwrap_or(self.n_samples);
        let grid = FrequencyGrid::new(n).map_err(|e| IoError::config("n_samples", e))?;
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(IoError::config("epsilon", "must be positive"));
        }
        Ok(Job {
            partition,
            family,
            grid,
            epsilon: self.epsilon,
            allow_singular: self.allow_singular,
            real_output: self.real_output,
        })
    }
}

/// Parses a `re` or `re,im` CSV signal. A non-numeric first line is taken
/// as a header; blank lines are ignored.
pub fn parse_signal_csv(text: &str) -> Result<Vec<Complex64>, IoError> {
    let mut out = Vec::new();
    let mut columns = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if out.is_empty() && columns.is_none() => {
                columns = Some(fields.len());
                continue;
            }
            Err(e) => return Err(IoError::Parse(format!("signal line {}: {e}", lineno + 1))),
        };
        match (values.len(), columns) {
            (1 | 2, None) | (1, Some(1)) | (2, Some(2)) => {}
            (got, _) => {
                return Err(IoError::Parse(format!(
                    "signal line {}: expected re or re,im, got {got} columns",
                    lineno + 1
                )))
            }
        }
        columns.get_or_insert(values.len());
        out.push(Complex64::new(
            values[0],
            values.get(1).copied().unwrap_or(0.0),
        ));
    }
    if out.is_empty() {
        return Err(IoError::Parse("signal file contains no samples".into()));
    }
    Ok(out)
}

/// Parses raw little-endian `f64` real samples.
pub fn parse_signal_raw(bytes: &[u8]) -> Result<Vec<Complex64>, IoError> {
    if bytes.is_empty() || !bytes.len().is_multiple_of(8) {
        return Err(IoError::Parse(format!(
            "raw signal size {} is not a positive multiple of 8 bytes",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| Complex64::new(f64::from_le_bytes(c.try_into().unwrap()), 0.0))
        .collect())
}

/// Signal CSV with a `re,im` header, or `re` only when `real_only`.
pub fn format_signal_csv(signal: &[Complex64], real_only: bool) -> String {
    let mut out = String::with_capacity(signal.len() * 48);
    out.push_str(if real_only { "re\n" } else { "re,im\n" });
    for z in signal {
        if real_only {
            writeln!(out, "{:?}", z.re).unwrap();
        } else {
            writeln!(out, "{:?},{:?}", z.re, z.im).unwrap();
        }
    }
    out
}

/// Filter spectra as CSV: `xi,f<n>_re,f<n>_im,...`, one row per bin in
/// ascending frequency order.
pub fn format_filter_csv(bank: &FilterBank) -> String {
    let grid = bank.grid();
    let mut out = String::new();
    out.push_str("xi");
    for n in bank.indices() {
        write!(out, ",f{n}_re,f{n}_im").unwrap();
    }
    out.push('\n');
    for k in grid.ascending_bins() {
        write!(out, "{:?}", grid.xi(k)).unwrap();
        for spectrum in bank.spectra() {
            write!(out, ",{:?},{:?}", spectrum[k].re, spectrum[k].im).unwrap();
        }
        out.push('\n');
    }
    out
}

/// Writes coefficients as
///
/// ```text
/// "EWTC" | version: u32 = 1 | N: u32 | count: u32 | indices: count × i32
///        | rows: count × N × (re: f64, im: f64)
/// ```
///
/// all little-endian, rows in support order and samples in time order.
pub fn write_coefficients<W: Write>(mut w: W, coeffs: &EwtCoefficients) -> Result<(), IoError> {
    let n =
        u32::try_from(coeffs.samples()).map_err(|_| IoError::Parse("too many samples".into()))?;
    let count =
        u32::try_from(coeffs.rows().len()).map_err(|_| IoError::Parse("too many rows".into()))?;
    let mut buf =
        Vec::with_capacity(16 + 4 * count as usize + 16 * (n as usize) * (count as usize));
    buf.extend_from_slice(&COEFFICIENT_MAGIC);
    buf.extend_from_slice(&COEFFICIENT_VERSION.to_le_bytes());
    buf.extend_from_slice(&n.to_le_bytes());
    buf.extend_from_slice(&count.to_le_bytes());
    for &idx in coeffs.indices() {
        let idx =
            i32::try_from(idx).map_err(|_| IoError::Parse(format!("index {idx} exceeds i32")))?;
        buf.extend_from_slice(&idx.to_le_bytes());
    }
    for row in coeffs.rows() {
        for z in row {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

/// Reads a file produced by [`write_coefficients`].
pub fn read_coefficients<R: Read>(mut r: R) -> Result<EwtCoefficients, IoError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    let bad = |m: String| IoError::Parse(format!("coefficient file: {m}"));
    if bytes.len() < 16 {
        return Err(bad(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if bytes[..4] != COEFFICIENT_MAGIC {
        return Err(bad("bad magic".into()));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let version = word(4);
    if version != COEFFICIENT_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let n = word(8) as usize;
    let count = word(12) as usize;
    let expected = 16 + 4 * count + 16 * n * count;
    if bytes.len() != expected {
        return Err(bad(format!(
            "expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let indices = (0..count)
        .map(|i| i32::from_le_bytes(bytes[16 + 4 * i..20 + 4 * i].try_into().unwrap()) as i64)
        .collect();
    let body = &bytes[16 + 4 * count..];
    let value = |at: usize| f64::from_le_bytes(body[at..at + 8].try_into().unwrap());
    let rows = (0..count)
        .map(|r| {
            (0..n)
                .map(|t| {
                    let at = 16 * (r * n + t);
                    Complex64::new(value(at), value(at + 8))
                })
                .collect()
        })
        .collect();
    EwtCoefficients::from_rows(indices, rows).map_err(|e| bad(e.to_string()))
}

/// Boundaries proposed by [`propose_boundaries`], shaped like the partition
/// part of a [`JobConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Proposal {
    pub mode: Mode,
    pub boundaries: Vec<Boundary>,
}

/// A deliberately simple boundary detector for demos.
///
/// Picks the `count` largest local maxima of `|dft(signal)|` and puts a
/// boundary at the smallest magnitude between consecutive maxima. Real
/// signals are handled on the positive half and mirrored, yielding a `V*`
/// partition whose `Ω_{-1}` holds the DC component. Rays close both ends.
pub fn propose_boundaries(signal: &[Complex64], count: usize) -> Result<Proposal, IoError> {
    if count == 0 {
        return Err(IoError::config("count", "must be at least 1"));
    }
    let grid = FrequencyGrid::new(signal.len()).map_err(|e| IoError::Parse(e.to_string()))?;
    let spectrum = dft(signal);
    let order = grid.ascending_bins();
    let mag: Vec<f64> = order.iter().map(|&k| spectrum[k].norm()).collect();
    let xi: Vec<f64> = order.iter().map(|&k| grid.xi(k)).collect();
    let len = mag.len();
    let real = signal.iter().all(|z| z.im == 0.0);

    let mut peaks: Vec<usize> = (0..len)
        .filter(|&i| {
            let left = mag[(i + len - 1) % len];
            let right = mag[(i + 1) % len];
            len > 1 && mag[i] > left && mag[i] >= right && (!real || xi[i] > 0.0)
        })
        .collect();
    if peaks.len() < count {
        return Err(IoError::FewerPeaksThanRequested {
            found: peaks.len(),
            requested: count,
        });
    }
    peaks.sort_by(|&a, &b| mag[b].total_cmp(&mag[a]).then(a.cmp(&b)));
    peaks.truncate(count);
    peaks.sort_unstable();

    let valley = |a: usize, b: usize| -> f64 {
        (a + 1..b)
            .min_by(|&i, &j| mag[i].total_cmp(&mag[j]).then(i.cmp(&j)))
            .map_or(0.5 * (xi[a] + xi[b]), |i| xi[i])
    };

    let (mode, finite) = if real {
        let dc = order.iter().position(|&k| k == 0).expect("bin 0 exists");
        let mut anchors = vec![dc];
        anchors.extend(&peaks);
        let positive: Vec<f64> = anchors.windows(2).map(|w| valley(w[0], w[1])).collect();
        let mut all: Vec<f64> = positive.iter().rev().map(|v| -v).collect();
        all.extend(positive);
        (Mode::VStar, all)
    } else {
        let mut inner: Vec<f64> = peaks.windows(2).map(|w| valley(w[0], w[1])).collect();
        let has_neg = inner.iter().any(|&v| v < 0.0);
        let has_pos = inner.iter().any(|&v| v > 0.0);
        if inner.contains(&0.0) {
            (Mode::V, inner)
        } else if has_neg && has_pos {
            (Mode::VStar, inner)
        } else {
            inner.push(0.0);
            inner.sort_by(f64::total_cmp);
            (Mode::V, inner)
        }
    };

    let mut boundaries = vec![Boundary::NEG_INF];
    boundaries.extend(finite.into_iter().map(Boundary));
    boundaries.push(Boundary::POS_INF);
    Ok(Proposal { mode, boundaries })
}
