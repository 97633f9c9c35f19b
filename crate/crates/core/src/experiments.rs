//! Numerical experiments contrasting the unnormalized distance indicator with
//! relative error and Kii.
//!
//! The triads `T_n = (x^n, x^(2n) + c, x^n)` all sit at distance exactly `c`
//! from consistency, yet their relative error `c / (x^(2n) + c)` and their Kii
//! both go to zero: the sequence becomes consistent in the limit while the
//! distance indicator reports a constant inconsistency.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::consistency::{complete_from_generators, GeneratorSet};
use crate::error::{Error, Result};
use crate::indicators::{
    distance_indicator_triad, kii_matrix, kii_triad, relative_error_triad, relative_error_true_value,
};
use crate::matrix::{PcMatrix, Triad};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub triad: (f64, f64, f64),
    pub distance: f64,
    pub relative_error: f64,
    pub kii: f64,
    /// True when `y` holds `x^(2n) + c` exactly, i.e. neither term was lost
    /// to rounding. Only exact rows measure the sequence faithfully.
    pub exact: bool,
}

fn check_base(x: f64) -> Result<()> {
    if x.is_finite() && x > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "x",
            reason: format!("{x} must be a finite number greater than 1"),
        })
    }
}

/// `(x^n, x^(2n) + c, x^n)`, with `x^(2n)` formed as `x^n * x^n` so that the
/// distance `|y - x*z|` is exactly `c` whenever the sum is exact.
fn offset_triad(x: f64, c: f64, n: u32) -> Result<Triad> {
    check_base(x)?;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "must be at least 1".into(),
        });
    }
    let exponent = i32::try_from(n).map_err(|_| Error::Overflow { x, n })?;
    let xn = x.powi(exponent);
    let x2n = xn * xn;
    let y = x2n + c;
    if !xn.is_finite() || !x2n.is_finite() || !y.is_finite() {
        return Err(Error::Overflow { x, n });
    }
    Triad::new(xn, y, xn)
}

/// The counter-example triad `T_n = (x^n, x^(2n) + 1, x^n)`.
pub fn tn_triad(x: f64, n: u32) -> Result<Triad> {
    offset_triad(x, 1.0, n)
}

/// Rows `n = 1..=n_max` of the `T_n` sequence.
pub fn convergence_table(x: f64, n_max: u32) -> Result<Vec<ConvergenceRow>> {
    constant_offset_table(x, 1.0, n_max)
}

/// Rows of `(x^n, x^(2n) + c, x^n)` for `n = 1..=n_max`.
///
/// Each row is flagged `exact` when `x^(2n) + c` was formed without
/// rounding. For `x = 2, c = 1` that holds up to `n = 26`; for `c = 2^64`
/// the early rows lose `x^(2n)` into `c` instead, and rows 6 to 58 are exact.
pub fn constant_offset_table(x: f64, c: f64, n_max: u32) -> Result<Vec<ConvergenceRow>> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::InvalidParameter {
            name: "c",
            reason: format!("{c} must be a positive finite number"),
        });
    }
    (1..=n_max)
        .map(|n| {
            let t = offset_triad(x, c, n)?;
            let (tx, ty, tz) = t.values();
            let power = tx * tz;
            Ok(ConvergenceRow {
                n,
                triad: (tx, ty, tz),
                distance: distance_indicator_triad(tx, ty, tz)?,
                relative_error: relative_error_triad(tx, ty, tz)?,
                kii: kii_triad(tx, ty, tz)?,
                exact: ty - power == c && ty - c == power,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StickRow {
    pub triad: (f64, f64, f64),
    pub distance: f64,
    /// `|y - xz| / y`
    pub relative_error: f64,
    /// `|y - xz| / (xz)`
    pub true_value_relative_error: f64,
    pub kii: f64,
}

impl StickRow {
    fn new(x: f64, y: f64, z: f64) -> Self {
        Self {
            triad: (x, y, z),
            distance: distance_indicator_triad(x, y, z).expect("positive"),
            relative_error: relative_error_triad(x, y, z).expect("positive"),
            true_value_relative_error: relative_error_true_value(x, y, z).expect("positive"),
            kii: kii_triad(x, y, z).expect("positive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StickComparison {
    /// Three unit sticks estimated as `(1, 2, 1)`.
    pub coarse: StickRow,
    /// The same misestimate by one unit on a ten-times finer scale.
    pub fine: StickRow,
}

/// Two triads at the same distance 1 from consistency whose relative errors
/// differ a hundredfold.
pub fn stick_example() -> StickComparison {
    StickComparison {
        coarse: StickRow::new(1.0, 2.0, 1.0),
        fine: StickRow::new(10.0, 101.0, 10.0),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSummary {
    pub name: String,
    pub mean: f64,
    pub max: f64,
    /// Spearman correlation with the per-trial maximum relative error;
    /// `None` when either series is constant.
    pub rank_correlation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub n: usize,
    pub trials: usize,
    pub perturbation: f64,
    pub seed: u64,
    pub max_relative_error: IndicatorSummary,
    pub indicators: Vec<IndicatorSummary>,
}

impl MonteCarloSummary {
    pub fn indicator(&self, name: &str) -> Option<&IndicatorSummary> {
        self.indicators.iter().find(|s| s.name == name)
    }
}

#[derive(Debug, Clone, Copy)]
struct TrialOutcome {
    kii: f64,
    distance: f64,
    ci: f64,
    relative_error: f64,
}

/// Random generators uniform in `[1/9, 9]`, completed to a consistent matrix,
/// then every upper-triangle entry multiplied by a factor uniform in
/// `[1/perturbation, perturbation]`.
pub fn perturbed_matrix<R: Rng>(rng: &mut R, n: usize, perturbation: f64) -> PcMatrix {
    let generators = (0..n - 1).map(|_| rng.random_range(1.0 / 9.0..=9.0)).collect();
    let base = complete_from_generators(&GeneratorSet::new(generators).expect("positive generators"));
    let upper: Vec<f64> = base
        .upper_triangle()
        .into_iter()
        .map(|v| {
            if perturbation == 1.0 {
                v
            } else {
                v * rng.random_range(1.0 / perturbation..=perturbation)
            }
        })
        .collect();
    PcMatrix::from_upper_triangle(n, &upper).expect("positive entries")
}

/// Random stream for one trial, independent of how trials are scheduled.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Compares Kii, the maximum triad distance and the eigenvalue CI by how well
/// they rank matrices by their maximum triad relative error.
pub fn monte_carlo_comparison(n: usize, trials: usize, perturbation: f64, seed: u64) -> Result<MonteCarloSummary> {
    if n < 3 {
        return Err(Error::TooSmall { n, min: 3 });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter {
            name: "trials",
            reason: "must be at least 1".into(),
        });
    }
    if !(perturbation.is_finite() && perturbation >= 1.0) {
        return Err(Error::InvalidParameter {
            name: "perturbation",
            reason: format!("{perturbation} must be a finite factor >= 1"),
        });
    }

    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let m = perturbed_matrix(&mut rng, n, perturbation);
            let report = kii_matrix(&m)?;
            Ok(TrialOutcome {
                kii: report.matrix_kii,
                distance: report.max_distance(),
                ci: report.ci,
                relative_error: report.max_relative_error(),
            })
        })
        .collect::<Result<_>>()?;

    let reference: Vec<f64> = outcomes.iter().map(|o| o.relative_error).collect();
    let summarize = |name: &str, values: Vec<f64>| IndicatorSummary {
        name: name.to_string(),
        mean: values.iter().sum::<f64>() / values.len() as f64,
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        rank_correlation: spearman(&values, &reference),
    };

    Ok(MonteCarloSummary {
        n,
        trials,
        perturbation,
        seed,
        max_relative_error: summarize("max_relative_error", reference.clone()),
        indicators: vec![
            summarize("kii", outcomes.iter().map(|o| o.kii).collect()),
            summarize("distance", outcomes.iter().map(|o| o.distance).collect()),
            summarize("ci", outcomes.iter().map(|o| o.ci).collect()),
        ],
    })
}

/// Ranks starting at 1, ties sharing their average rank.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman rank correlation (Pearson correlation of average ranks).
pub fn spearman(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len());
    if a.len() < 2 {
        return None;
    }
    let (ra, rb) = (average_ranks(a), average_ranks(b));
    let mean = (a.len() as f64 + 1.0) / 2.0;
    let (mut cov, mut va, mut vb) = (0.0, 0.0, 0.0);
    for (x, y) in ra.iter().zip(&rb) {
        cov += (x - mean) * (y - mean);
        va += (x - mean) * (x - mean);
        vb += (y - mean) * (y - mean);
    }
    if va == 0.0 || vb == 0.0 {
        None
    } else {
        Some(cov / (va * vb).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tn_examples() {
        assert_eq!(tn_triad(2.0, 1).unwrap().values(), (2.0, 5.0, 2.0));
        assert_eq!(tn_triad(2.0, 3).unwrap().values(), (8.0, 65.0, 8.0));
        assert_eq!(tn_triad(2.0, 600).unwrap_err(), Error::Overflow { x: 2.0, n: 600 });
        assert!(tn_triad(2.0, 511).is_ok());
        assert!(tn_triad(2.0, 512).is_err());
        assert!(tn_triad(1.0, 3).is_err());
        assert!(tn_triad(2.0, 0).is_err());
    }

    #[test]
    fn convergence_rows() {
        let rows = convergence_table(2.0, 10).unwrap();
        assert_eq!(rows.len(), 10);
        assert_eq!(rows[0].distance, 1.0);
        assert_eq!(rows[0].relative_error, 0.2);
        assert_eq!(rows[0].kii, 0.2);
        assert!((rows[4].relative_error - 1.0 / 1025.0).abs() < 1e-15);
        for w in rows.windows(2) {
            assert!(w[1].kii < w[0].kii);
            assert!(w[1].relative_error < w[0].relative_error);
        }
        assert!(rows[9].kii < rows[0].kii / 1000.0);
    }

    #[test]
    fn rounding_is_flagged() {
        // 4^27 exceeds 2^53, so the +1 is lost
        let rows = convergence_table(2.0, 30).unwrap();
        assert!(rows[..26].iter().all(|r| r.exact && r.distance == 1.0));
        assert!(rows[26..].iter().all(|r| !r.exact && r.distance == 0.0));
    }

    #[test]
    fn cosmic_offset() {
        let c = 2f64.powi(64);
        let rows = constant_offset_table(2.0, c, 60).unwrap();
        let exact: Vec<u32> = rows.iter().filter(|r| r.exact).map(|r| r.n).collect();
        assert_eq!(exact, (6..=58).collect::<Vec<_>>());
        assert!(rows.iter().filter(|r| r.exact).all(|r| r.distance == c));
        let expected = 1.0 / (2f64.powi(16) + 1.0);
        assert!((rows[39].relative_error - expected).abs() < 1e-12);
        assert_eq!(
            constant_offset_table(2.0, 1.0, 5).unwrap(),
            convergence_table(2.0, 5).unwrap()
        );
        assert_eq!(constant_offset_table(2.0, 1.0, 1).unwrap()[0].distance, 1.0);
        assert!(constant_offset_table(2.0, 0.0, 1).is_err());
    }

    #[test]
    fn sticks() {
        let s = stick_example();
        assert_eq!(s.coarse.distance, 1.0);
        assert_eq!(s.fine.distance, 1.0);
        assert_eq!(s.coarse.true_value_relative_error, 1.0);
        assert_eq!(s.coarse.relative_error, 0.5);
        assert!((s.fine.relative_error - 1.0 / 101.0).abs() < 1e-16);
        assert!((s.fine.true_value_relative_error - 0.01).abs() < 1e-16);
    }

    #[test]
    fn spearman_basics() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(spearman(&a, &[10.0, 20.0, 30.0, 40.0]), Some(1.0));
        assert_eq!(spearman(&a, &[4.0, 3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&a, &[1.0, 1.0, 1.0, 1.0]), None);
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0]), vec![2.5, 1.0, 2.5]);
    }

    #[test]
    fn noiseless_trials_are_consistent() {
        for n in 3..=5 {
            let s = monte_carlo_comparison(n, 200, 1.0, 11).unwrap();
            for ind in &s.indicators {
                assert!(ind.max.abs() < 1e-9, "{} max {}", ind.name, ind.max);
            }
        }
    }

    #[test]
    fn kii_ranks_better_than_distance() {
        let s = monte_carlo_comparison(3, 10_000, 3.0, 20_170_601).unwrap();
        let kii = s.indicator("kii").unwrap().rank_correlation.unwrap();
        let dist = s.indicator("distance").unwrap().rank_correlation.unwrap();
        assert!(kii > dist, "kii {kii} vs distance {dist}");
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = monte_carlo_comparison(4, 500, 2.0, 5).unwrap();
        let b = monte_carlo_comparison(4, 500, 2.0, 5).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let c = monte_carlo_comparison(4, 500, 2.0, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn monte_carlo_validation() {
        assert!(monte_carlo_comparison(2, 10, 2.0, 0).is_err());
        assert!(monte_carlo_comparison(3, 0, 2.0, 0).is_err());
        assert!(monte_carlo_comparison(3, 10, 0.5, 0).is_err());
    }
}
