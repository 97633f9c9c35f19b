//! Inconsistency indicators on triads and matrices.
//!
//! [`kii_triad`] is the normalized indicator `1 - min(y/(xz), xz/y)`, which
//! stays in `[0, 1)`. [`distance_indicator_triad`] is the unnormalized
//! Euclidean distance `|y - xz|`; it is kept here as the comparison object
//! because it is unbounded and cannot tell a large triad with a tiny relative
//! error from a small triad with a gross one (see [`crate::experiments`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{PcMatrix, Triad};
use crate::normalization::BELOW_ONE;

/// Default acceptance threshold for matrix Kii.
pub const DEFAULT_TOLERANCE: f64 = 1.0 / 3.0;

/// Power iteration stops when the eigenvalue estimate moves less than this.
pub const EIGEN_TOLERANCE: f64 = 1e-10;
pub const EIGEN_MAX_ITER: usize = 10_000;

fn check_triad(x: f64, y: f64, z: f64) -> Result<()> {
    for value in [x, y, z] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::NonPositiveInput { value });
        }
    }
    Ok(())
}

/// Kii of a triad, `1 - min(y/(x*z), x*z/y)`.
///
/// Evaluated as `|y - x*z| / max(y, x*z)`, which is the same quantity
/// without the cancellation in `1 - min(..)`: `(2, 5, 2)` gives exactly 0.2
/// and the result is 0 iff `y == x*z` in floating point. Ratios beyond
/// 2^53 would round to 1, so the value saturates at [`BELOW_ONE`].
pub fn kii_triad(x: f64, y: f64, z: f64) -> Result<f64> {
    check_triad(x, y, z)?;
    let xz = x * z;
    Ok(((y - xz).abs() / y.max(xz)).min(BELOW_ONE))
}

/// `1 - exp(-|ln(y/(x*z))|)`, algebraically identical to [`kii_triad`].
pub fn kii_triad_exp(x: f64, y: f64, z: f64) -> Result<f64> {
    check_triad(x, y, z)?;
    Ok((1.0 - (-(y / (x * z)).ln().abs()).exp()).min(BELOW_ONE))
}

/// Euclidean distance `|y - x*z|`. Zero iff the triad is consistent, and
/// unbounded above.
pub fn distance_indicator_triad(x: f64, y: f64, z: f64) -> Result<f64> {
    check_triad(x, y, z)?;
    Ok((y - x * z).abs())
}

/// Relative error of `y` against its consistent approximation `x*z`,
/// measured against the observed value: `|y - x*z| / y`.
pub fn relative_error_triad(x: f64, y: f64, z: f64) -> Result<f64> {
    check_triad(x, y, z)?;
    Ok((y - x * z).abs() / y)
}

/// Relative error measured against the consistent value: `|y - x*z| / (x*z)`.
///
/// For three equal sticks estimated as `(1, 2, 1)` the true ratio is 1 and
/// this gives 100%, while [`relative_error_triad`] gives 50%.
pub fn relative_error_true_value(x: f64, y: f64, z: f64) -> Result<f64> {
    check_triad(x, y, z)?;
    let xz = x * z;
    Ok((y - xz).abs() / xz)
}

/// 0 for a triad consistent within `tol` (relative to `y`), 1 otherwise.
pub fn zero_one_indicator(x: f64, y: f64, z: f64, tol: f64) -> Result<u8> {
    check_triad(x, y, z)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("{tol} is not a nonnegative number"),
        });
    }
    Ok(u8::from((y - x * z).abs() > tol * y))
}

/// Kii for an additive triad: `1 - exp(-|y - (x + z)|)`, the image of the
/// exponential form of Kii under the `ln`/`exp` bridge.
pub fn additive_kii_triad(x: f64, y: f64, z: f64) -> Result<f64> {
    for value in [x, y, z] {
        if !value.is_finite() {
            return Err(Error::NonFiniteInput { value });
        }
    }
    Ok((-(-(y - (x + z)).abs()).exp_m1()).min(BELOW_ONE))
}

/// Per-triad entry of an [`IndicatorReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriadRecord {
    pub indices: (usize, usize, usize),
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub kii: f64,
    pub distance: f64,
    pub relative_error: f64,
}

impl TriadRecord {
    fn evaluate(t: &Triad) -> Self {
        let (x, y, z) = t.values();
        // PcMatrix guarantees positive finite entries.
        Self {
            indices: t.indices,
            x,
            y,
            z,
            kii: kii_triad(x, y, z).expect("valid triad"),
            distance: distance_indicator_triad(x, y, z).expect("valid triad"),
            relative_error: relative_error_triad(x, y, z).expect("valid triad"),
        }
    }
}

/// Matrix-level summary: every triad, the maximum Kii and where it occurs,
/// the eigenvalue-based CI, and a verdict at `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorReport {
    pub per_triad: Vec<TriadRecord>,
    pub matrix_kii: f64,
    pub worst_triad: (usize, usize, usize),
    pub ci: f64,
    pub tolerance: f64,
    pub consistent: bool,
}

impl IndicatorReport {
    pub fn worst(&self) -> &TriadRecord {
        self.per_triad
            .iter()
            .find(|r| r.indices == self.worst_triad)
            .expect("worst triad is one of the records")
    }

    pub fn max_distance(&self) -> f64 {
        self.per_triad.iter().map(|r| r.distance).fold(0.0, f64::max)
    }

    pub fn max_relative_error(&self) -> f64 {
        self.per_triad.iter().map(|r| r.relative_error).fold(0.0, f64::max)
    }
}

/// Maximum triad Kii and the lexicographically first triad attaining it.
pub fn matrix_kii(m: &PcMatrix) -> Result<(f64, (usize, usize, usize))> {
    if m.n() < 3 {
        return Err(Error::TooSmall { n: m.n(), min: 3 });
    }
    let mut best = (f64::NEG_INFINITY, (0, 1, 2));
    for t in m.triad_iter() {
        let k = kii_triad(t.x, t.y, t.z)?;
        if k > best.0 {
            best = (k, t.indices);
        }
    }
    Ok(best)
}

/// Full report at the default tolerance of 1/3.
pub fn kii_matrix(m: &PcMatrix) -> Result<IndicatorReport> {
    kii_matrix_with_tolerance(m, DEFAULT_TOLERANCE)
}

pub fn kii_matrix_with_tolerance(m: &PcMatrix, tolerance: f64) -> Result<IndicatorReport> {
    if m.n() < 3 {
        return Err(Error::TooSmall { n: m.n(), min: 3 });
    }
    if !(tolerance > 0.0 && tolerance <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            reason: format!("{tolerance} is outside (0, 1]"),
        });
    }
    let per_triad: Vec<TriadRecord> = m.triad_iter().map(|t| TriadRecord::evaluate(&t)).collect();
    let mut worst = &per_triad[0];
    for r in &per_triad[1..] {
        if r.kii > worst.kii {
            worst = r;
        }
    }
    let (matrix_kii, worst_triad) = (worst.kii, worst.indices);
    let ci = saaty_ci(m)?;
    Ok(IndicatorReport {
        per_triad,
        matrix_kii,
        worst_triad,
        ci,
        tolerance,
        consistent: matrix_kii < tolerance,
    })
}

/// Dominant eigenvalue by power iteration from the all-ones vector.
///
/// The iterate is kept normalized to unit sum, so `sum(A v)` is the
/// eigenvalue estimate at each step.
pub fn principal_eigenvalue(m: &PcMatrix) -> Result<f64> {
    let n = m.n();
    let mut v = vec![1.0 / n as f64; n];
    let mut w = vec![0.0; n];
    let mut lambda = f64::NAN;
    for _ in 0..EIGEN_MAX_ITER {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = m.row(i).iter().zip(&v).map(|(a, b)| a * b).sum();
        }
        let next: f64 = w.iter().sum();
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / next;
        }
        if (next - lambda).abs() < EIGEN_TOLERANCE {
            return Ok(next);
        }
        lambda = next;
    }
    Err(Error::NoConvergence {
        iterations: EIGEN_MAX_ITER,
    })
}

/// Eigenvalue consistency index `(lambda_max - n) / (n - 1)`.
pub fn saaty_ci(m: &PcMatrix) -> Result<f64> {
    let n = m.n();
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    let lambda = principal_eigenvalue(m)?;
    let ci = (lambda - n as f64) / (n as f64 - 1.0);
    // round-off can push lambda_max a hair below n
    Ok(if (-1e-9..0.0).contains(&ci) { 0.0 } else { ci })
}
