//! Corridor channel simulator and sounding analytics for the 250--330 GHz band.
//!
//! The crate has two halves that meet at the [`synthesis::CtfDataset`] type:
//!
//! * **Forward model** ([`geometry`], [`materials`], [`antenna`], [`synthesis`]):
//!   enumerates the specular rays of an ideal rectangular corridor, weights them
//!   with Fresnel reflection losses and horn-pattern gains, and sums them into a
//!   complex channel transfer function H(f, d) over a frequency sweep.
//! * **Sounding analytics** ([`analysis`]): estimates large-scale descriptors
//!   (windowed path gain, power-law exponent/intercept/deviation) and
//!   small-scale descriptors (power delay profile, Rician K-factor, RMS delay
//!   spread, coherence bandwidth) from any CTF dataset, simulated or measured.
//!
//! [`dataio`] persists scenarios, CTF datasets and report tables; [`cli`] wires
//! everything into the `corridor-channel` binary.

pub mod analysis;
pub mod antenna;
pub mod cli;
pub mod dataio;
pub mod geometry;
pub mod grid;
pub mod materials;
pub mod plot;
pub mod scenario;
pub mod selftest;
pub mod synthesis;
pub mod units;

use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid material: {0}")]
    Material(String),
    #[error("invalid antenna model: {0}")]
    Antenna(String),
    #[error("frequency {frequency_hz} Hz outside antenna curve domain [{lo} Hz, {hi} Hz]")]
    GainOutOfDomain { frequency_hz: f64, lo: f64, hi: f64 },
    #[error("invalid frequency grid: {0}")]
    Grid(String),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate regression: {0}")]
    DegenerateFit(String),
    #[error("empty or all-zero input: {0}")]
    EmptyInput(String),
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite sample at {0}")]
    NonFinite(String),
    #[error("unsupported format version {found} (reader supports up to major {supported})")]
    UnsupportedVersion { found: u16, supported: u16 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
