//! Continuous empirical wavelet systems.
//!
//! An empirical wavelet system is a bank of band-pass filters whose Fourier
//! supports follow a data-driven partition of the frequency line. This crate
//! builds such partitions ([`partition`]), evaluates four filter families on
//! them ([`families`]), runs the forward transform as FFT filtering and
//! reconstructs through dual filters ([`transform`]), and reports frame
//! bounds ([`frame`]). The [`io`] and [`cli`] modules back the `ewt` binary.
//!
//! ```
//! use ewt::families::{lp_gamma_limit, sample_bank, Family};
//! use ewt::partition::{Mode, Partition};
//! use ewt::spectral::{relative_l2_error, FrequencyGrid};
//! use ewt::transform::{dual_bank, forward, inverse, DEFAULT_EPSILON};
//! use num_complex::Complex64;
//!
//! let inf = f64::INFINITY;
//! let partition = Partition::new(Mode::VStar, [-inf, -1.0, -0.3, 0.4, 1.2, inf])?;
//! let gamma = 0.9 * lp_gamma_limit(&partition)?;
//! let grid = FrequencyGrid::new(256)?;
//! let bank = sample_bank(&partition, Family::LittlewoodPaley { gamma }, grid)?;
//!
//! let signal: Vec<Complex64> = (0..256)
//!     .map(|t| Complex64::new((0.2 * t as f64).sin(), 0.0))
//!     .collect();
//! let coefficients = forward(&signal, &bank)?;
//! let rebuilt = inverse(&coefficients, &dual_bank(&bank, DEFAULT_EPSILON)?)?;
//! assert!(relative_l2_error(&rebuilt, &signal) < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod families;
pub mod frame;
pub mod io;
pub mod partition;
pub mod spectral;
pub mod transform;

pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/partitions.md")]
    mod partitions {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/transform.md")]
    mod transform {}
    #[doc = include_str!("../../../book/src/frames.md")]
    mod frames {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
