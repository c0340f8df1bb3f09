//! Reconstruction quality metrics.

use crate::error::{Error, Result};
use crate::signal::GraphSignal;

/// Peak intensity used by [`psnr`].
pub const PEAK: f64 = 255.0;

fn check_pair(a: &GraphSignal, b: &GraphSignal) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::param("signal", "metrics need at least one entry"));
    }
    Ok(())
}

/// Mean squared difference.
pub fn mse(reference: &GraphSignal, candidate: &GraphSignal) -> Result<f64> {
    check_pair(reference, candidate)?;
    let sum: f64 = reference
        .as_slice()
        .iter()
        .zip(candidate.as_slice())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum / reference.len() as f64)
}

/// Peak signal-to-noise ratio in dB, `10 log10(255^2 / MSE)`.
///
/// Identical signals give `f64::INFINITY`. The peak stays 255 even when the
/// candidate leaves the pixel range.
pub fn psnr(reference: &GraphSignal, candidate: &GraphSignal) -> Result<f64> {
    let m = mse(reference, candidate)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / m).log10())
}

/// Euclidean distance `||a - b||`.
pub fn l2_error(a: &GraphSignal, b: &GraphSignal) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}
