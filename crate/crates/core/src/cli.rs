//! The `ewt` command line: argument definitions and command bodies.
//!
//! Commands write their primary output to `--out` when given and to stdout
//! otherwise. Failures come back as [`CliError`], which knows its exit code
//! and renders itself as a one-line JSON object for stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::families::{sample_bank, FilterBank, FilterError};
use crate::frame::FrameReport;
use crate::io::{self, IoError, Job, JobConfig};
use crate::spectral::relative_l2_error;
use crate::transform::{self, DualBank, EwtCoefficients, SingularPolicy, TransformError};

/// Frame reports include the per-bin sums only up to this many samples.
pub const SUM_SQUARES_MAX_SAMPLES: usize = 16384;

#[derive(Debug, Parser)]
#[command(
    name = "ewt",
    version,
    about = "Continuous empirical wavelet transforms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the filter bank and write it as CSV in ascending frequency order.
    Filters {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze a signal and write a binary coefficient file.
    Forward {
        #[command(flatten)]
        job: JobArgs,
        #[command(flatten)]
        signal: SignalArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct a signal from a coefficient file.
    Inverse {
        #[command(flatten)]
        job: JobArgs,
        #[command(flatten)]
        synthesis: SynthesisArgs,
        #[arg(long, value_name = "PATH")]
        coef: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward then inverse; report the reconstruction error as JSON.
    Roundtrip {
        #[command(flatten)]
        job: JobArgs,
        #[command(flatten)]
        signal: SignalArgs,
        #[command(flatten)]
        synthesis: SynthesisArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frame bounds and filter energies as JSON.
    Frame {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Propose boundaries from the spectral peaks of a signal (a toy detector).
    Detect {
        #[command(flatten)]
        signal: SignalArgs,
        /// Number of spectral peaks to separate.
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct JobArgs {
    /// JSON job configuration.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Overrides `n_samples` from the config.
    #[arg(long, value_name = "INT")]
    pub n_samples: Option<usize>,
    /// Read config boundaries as frequencies in Hz at this sample rate.
    #[arg(long, value_name = "RATE")]
    pub hz: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SignalArgs {
    /// Signal as CSV (`re` or `re,im`) or, with `--raw`, little-endian f64.
    #[arg(long, value_name = "PATH")]
    pub signal: PathBuf,
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Args)]
pub struct SynthesisArgs {
    /// Zero the dual filters where the frame sum vanishes instead of failing.
    #[arg(long)]
    pub allow_singular: bool,
    /// Skip the dual filters and divide by this tight frame constant.
    #[arg(long, value_name = "A")]
    pub tight: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for I/O and parse failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::File { .. } => 2,
            CliError::Io(e) if e.is_parse_error() => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::File { .. } => "io",
            CliError::Io(IoError::Io(_)) => "io",
            CliError::Io(IoError::Parse(_)) => "parse",
            CliError::Io(IoError::Config { .. }) => "config",
            CliError::Io(IoError::LengthMismatch { .. }) => "length_mismatch",
            CliError::Io(IoError::FewerPeaksThanRequested { .. }) => "fewer_peaks_than_requested",
            CliError::Io(IoError::Filter(_)) | CliError::Filter(_) => "filter",
            CliError::Transform(TransformError::SingularFrame { .. }) => "singular_frame",
            CliError::Transform(TransformError::LengthMismatch { .. }) => "length_mismatch",
            CliError::Transform(_) => "transform",
        }
    }

    /// One-line JSON description for stderr.
    pub fn to_json(&self) -> String {
        let mut value = json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        match self {
            CliError::Io(IoError::Config { field, .. }) => value["field"] = json!(field),
            CliError::Transform(TransformError::SingularFrame { bins, .. }) => {
                value["singular_bins"] = json!(bins)
            }
            _ => {}
        }
        value.to_string()
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    let result = match out {
        Some(path) => fs::write(path, bytes),
        None => stdout.write_all(bytes).and_then(|_| stdout.flush()),
    };
    result.map_err(|source| CliError::File {
        path: out.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf),
        source,
    })
}

fn load_job(args: &JobArgs) -> Result<Job, CliError> {
    let bytes = read_file(&args.config)?;
    let text = String::from_utf8(bytes).map_err(|e| IoError::Parse(format!("config: {e}")))?;
    Ok(JobConfig::from_json(&text)?.resolve(args.hz, args.n_samples)?)
}

fn load_signal(args: &SignalArgs) -> Result<Vec<Complex64>, CliError> {
    let bytes = read_file(&args.signal)?;
    if args.raw {
        return Ok(io::parse_signal_raw(&bytes)?);
    }
    let text = String::from_utf8(bytes).map_err(|e| IoError::Parse(format!("signal: {e}")))?;
    Ok(io::parse_signal_csv(&text)?)
}

fn load_job_signal(job: &Job, args: &SignalArgs) -> Result<Vec<Complex64>, CliError> {
    let signal = load_signal(args)?;
    if signal.len() != job.grid.len() {
        return Err(IoError::LengthMismatch {
            found: signal.len(),
            expected: job.grid.len(),
        }
        .into());
    }
    Ok(signal)
}

fn bank(job: &Job) -> Result<FilterBank, CliError> {
    Ok(sample_bank(&job.partition, job.family, job.grid)?)
}

/// Reconstruction plus the singular bins that were zeroed on the way.
fn synthesize(
    job: &Job,
    bank: &FilterBank,
    coeffs: &EwtCoefficients,
    args: &SynthesisArgs,
) -> Result<(Vec<Complex64>, Vec<usize>), CliError> {
    if let Some(a) = args.tight {
        return Ok((transform::inverse_tight(coeffs, bank, a)?, Vec::new()));
    }
    let policy = if args.allow_singular || job.allow_singular {
        SingularPolicy::ZeroFill
    } else {
        SingularPolicy::Strict
    };
    let dual: DualBank = transform::dual_bank_with(bank, job.epsilon, policy)?;
    let rebuilt = transform::inverse(coeffs, &dual)?;
    Ok((rebuilt, dual.singular_bins().to_vec()))
}

fn json_line(value: &impl serde::Serialize) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("report serializes");
    bytes.push(b'\n');
    bytes
}

/// Runs one parsed command, writing unredirected output to `stdout` and
/// diagnostics to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Filters { job, out } => {
            let job = load_job(&job)?;
            emit(
                out.as_deref(),
                stdout,
                io::format_filter_csv(&bank(&job)?).as_bytes(),
            )
        }
        Command::Forward { job, signal, out } => {
            let job = load_job(&job)?;
            let signal = load_job_signal(&job, &signal)?;
            let coeffs = transform::forward(&signal, &bank(&job)?)?;
            let mut bytes = Vec::new();
            io::write_coefficients(&mut bytes, &coeffs)?;
            emit(out.as_deref(), stdout, &bytes)
        }
        Command::Inverse {
            job,
            synthesis,
            coef,
            out,
        } => {
            let job = load_job(&job)?;
            let coeffs = io::read_coefficients(&read_file(&coef)?[..])?;
            let bank = bank(&job)?;
            let (rebuilt, singular) = synthesize(&job, &bank, &coeffs, &synthesis)?;
            let max_imag = rebuilt.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if job.real_output || !singular.is_empty() {
                let note = json!({ "max_imag": max_imag, "singular_bins": singular });
                let _ = writeln!(stderr, "{note}");
            }
            let csv = io::format_signal_csv(&rebuilt, job.real_output);
            emit(out.as_deref(), stdout, csv.as_bytes())
        }
        Command::Roundtrip {
            job,
            signal,
            synthesis,
            out,
        } => {
            let job = load_job(&job)?;
            let signal = load_job_signal(&job, &signal)?;
            let bank = bank(&job)?;
            let coeffs = transform::forward(&signal, &bank)?;
            let (mut rebuilt, singular) = synthesize(&job, &bank, &coeffs, &synthesis)?;
            let max_imag = rebuilt.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if job.real_output {
                rebuilt.iter_mut().for_each(|z| z.im = 0.0);
            }
            let mut report = json!({
                "rel_l2_error": relative_l2_error(&rebuilt, &signal),
                "max_imag": max_imag,
            });
            if !singular.is_empty() {
                report["rel_l2_error_nonsingular"] =
                    json!(nonsingular_error(&signal, &rebuilt, &singular));
                report["singular_bins"] = json!(singular);
            }
            emit(out.as_deref(), stdout, &json_line(&report))
        }
        Command::Frame { job, out } => {
            let job = load_job(&job)?;
            let mut report = FrameReport::new(&bank(&job)?, job.epsilon)?;
            if job.grid.len() > SUM_SQUARES_MAX_SAMPLES {
                report.sum_squares = None;
            }
            emit(out.as_deref(), stdout, &json_line(&report))
        }
        Command::Detect { signal, count, out } => {
            let proposal = io::propose_boundaries(&load_signal(&signal)?, count)?;
            emit(out.as_deref(), stdout, &json_line(&proposal))
        }
    }
}

/// Error against the part of `signal` that the frame can see: the signal
/// with its spectrum zeroed on the singular bins.
fn nonsingular_error(signal: &[Complex64], rebuilt: &[Complex64], singular: &[usize]) -> f64 {
    let mut spectrum = crate::spectral::dft(signal);
    for &k in singular {
        spectrum[k] = Complex64::new(0.0, 0.0);
    }
    relative_l2_error(rebuilt, &crate::spectral::idft(&spectrum))
}
