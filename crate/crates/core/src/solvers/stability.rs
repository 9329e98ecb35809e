use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trace margin separating saddle / elliptic from parabolic.
pub const TRACE_MARGIN: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Saddle,
    Elliptic,
    Parabolic,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::Saddle => "saddle",
            Stability::Elliptic => "elliptic",
            Stability::Parabolic => "parabolic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub stability: Stability,
    pub multipliers: [Complex64; 2],
    pub trace: f64,
    pub det: f64,
}

/// Linear type of an area-preserving 2x2 monodromy matrix.
pub fn classify(monodromy: &Matrix2<f64>) -> Result<Classification> {
    let det = monodromy.determinant();
    if !det.is_finite() || (det - 1.0).abs() > 1e-4 {
        return Err(Error::InconsistentMonodromy { det });
    }
    let trace = monodromy.trace();
    let disc = trace * trace - 4.0 * det;
    let multipliers = if disc >= 0.0 {
        let root = disc.sqrt();
        // larger-magnitude root first, the other from the product to avoid cancellation
        let big = 0.5 * (trace + trace.signum() * root);
        let small = if big != 0.0 { det / big } else { 0.5 * (trace - root) };
        [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    } else {
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(0.5 * trace, im), Complex64::new(0.5 * trace, -im)]
    };
    let stability = if trace.abs() > 2.0 + TRACE_MARGIN {
        Stability::Saddle
    } else if trace.abs() < 2.0 - TRACE_MARGIN {
        Stability::Elliptic
    } else {
        Stability::Parabolic
    };
    Ok(Classification { stability, multipliers, trace, det })
}
