//! Certified rotation numbers on invariant ovals: turn counting around an
//! interior center, the rotation number at the critical level, and scans
//! over families of initial points.

pub mod critical;
pub mod scan;
pub mod winding;

pub use critical::rotation_at_critical;
pub use scan::{rows_to_csv, rows_to_json, scan_profile, ScanRow};
pub use winding::{
    assemble_bounds, choose_center, winding_bounds, Level, RotationBounds, RotationEstimate, TurnFraction, WindingLog,
    WindingResult, AUTO_EXACT_MAX_POINTS,
};

use crate::exact::{DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
use crate::lyness::{LynessError, Point};
use crate::exact::Rational;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RotationError {
    #[error("inconsistent winding: {0}")]
    InconsistentWinding(String),
    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),
    #[error("no interior center: {0}")]
    NoCenter(String),
    #[error("fixed point is not elliptic: {0}")]
    NotElliptic(String),
    #[error(transparent)]
    Lyness(#[from] LynessError),
}

/// Arithmetic used for orbit points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Ball,
    /// Exact for rational inputs up to [`AUTO_EXACT_MAX_POINTS`] points,
    /// balls otherwise.
    #[default]
    Auto,
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Backend::Exact),
            "ball" => Ok(Backend::Ball),
            "auto" => Ok(Backend::Auto),
            _ => Err(format!("unknown backend {s:?}: expected exact, ball or auto")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WindingOptions {
    pub backend: Backend,
    /// Starting ball precision in bits.
    pub precision: u32,
    pub precision_cap: u32,
    /// Preferred center; used only if it lies strictly inside the oval.
    pub hint: Option<Point<Rational>>,
}

impl Default for WindingOptions {
    fn default() -> Self {
        WindingOptions { backend: Backend::Auto, precision: DEFAULT_PRECISION, precision_cap: precision_cap_from_env(), hint: None }
    }
}

/// `LYNESS_PRECISION_CAP` if set to a valid bit count, else the default cap.
pub fn precision_cap_from_env() -> u32 {
    std::env::var("LYNESS_PRECISION_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&c: &u32| c >= 64)
        .unwrap_or(DEFAULT_PRECISION_CAP)
}
