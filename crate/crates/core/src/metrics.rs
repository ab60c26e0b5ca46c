//! Per-iteration metrics, empirical rate fitting, inequality verifiers and
//! threshold classification.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;
use crate::sets::Projectable;

/// The scaled-metric exponents tracked per row: `sqrt(k) * error`,
/// `k * avg_dist` and `k^{3/2} * increment`, matching the three proved rates
/// for starts in `Y`.
pub const SCALED_EXPONENTS: [f64; 3] = [0.5, 1.0, 1.5];

/// One row of trajectory diagnostics at iteration `k`.
///
/// `error` is `||y_k - P_M(y_0)||` and is only defined in subspace mode;
/// `avg_dist` is `sqrt((1/m) sum_i d^2(y_k, S_i))`, `max_dist` the largest
/// individual distance, `increment` is `||y_k - y_{k-1}||`.
#[derive(Debug, Clone, Serialize)]
pub struct MetricRow<T> {
    pub k: usize,
    pub error: Option<T>,
    pub avg_dist: T,
    pub max_dist: T,
    pub increment: T,
    /// `sqrt(k) * error`.
    pub k12_error: Option<T>,
    /// `k * avg_dist`.
    pub k1_avg: T,
    /// `k^{3/2} * increment`.
    pub k32_increment: T,
}

/// Computes the full metric row for `(k, y_k, y_{k-1})`. Pass `pm_y0` only
/// in subspace mode; the error fields stay empty without it.
pub fn metrics_at<T: Scalar>(
    k: usize,
    y_k: &Vector<T>,
    y_prev: &Vector<T>,
    sets: &[Arc<dyn Projectable<T>>],
    pm_y0: Option<&Vector<T>>,
) -> MetricRow<T> {
    let kf = T::from_usize(k).unwrap();
    let mut sum_sq = T::zero();
    let mut max_dist = T::zero();
    for set in sets {
        let d = set.distance(y_k);
        sum_sq += d * d;
        if d > max_dist {
            max_dist = d;
        }
    }
    let avg_dist = (sum_sq / T::from_usize(sets.len()).unwrap()).sqrt();
    let increment = y_k.distance_to(y_prev);
    let error = pm_y0.map(|target| y_k.distance_to(target));
    MetricRow {
        k,
        error,
        avg_dist,
        max_dist,
        increment,
        k12_error: error.map(|e| kf.sqrt() * e),
        k1_avg: kf * avg_dist,
        k32_increment: kf * kf.sqrt() * increment,
    }
}

/// Least-squares line through `(log k, log value)` over a window.
#[derive(Debug, Clone, Serialize)]
pub struct RateFit<T> {
    /// Fitted log-log slope; the empirical `-p` of a `k^{-p}` law.
    pub slope: T,
    pub intercept: T,
    pub window: (usize, usize),
    /// RMS residual of the fit in log space.
    pub residual: T,
    pub points_used: usize,
    /// Nonpositive values dropped from the window before fitting.
    pub dropped: usize,
}

/// Fits `log value = intercept + slope * log k` over `window = [lo, hi]`.
/// Only strictly positive values enter the fit; fewer than five of them is
/// an error.
pub fn fit_rate<T: Scalar>(
    series: &[(usize, T)],
    window: (usize, usize),
) -> Result<RateFit<T>> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::InvalidParameter(format!(
            "empty fit window [{lo}, {hi}]"
        )));
    }
    let mut points: Vec<(T, T)> = Vec::new();
    let mut dropped = 0usize;
    for &(k, value) in series {
        if k < lo || k > hi || k == 0 {
            continue;
        }
        if value > T::zero() {
            points.push((T::from_usize(k).unwrap().ln(), value.ln()));
        } else {
            dropped += 1;
        }
    }
    if points.len() < 5 {
        return Err(Error::InsufficientPoints {
            needed: 5,
            got: points.len(),
        });
    }
    let n = T::from_usize(points.len()).unwrap();
    let mean_x = points.iter().map(|p| p.0).sum::<T>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<T>() / n;
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    for &(x, y) in &points {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == T::zero() {
        return Err(Error::InvalidParameter(
            "fit window has a single abscissa".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: T = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(RateFit {
        slope,
        intercept,
        window,
        residual: (ss_res / n).sqrt(),
        points_used: points.len(),
        dropped,
    })
}

/// Verdict for one tested epsilon of the threshold dichotomy.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdVerdict<T> {
    pub eps: T,
    /// True when the empirical slope is steeper than `-(base + eps)`,
    /// indicating super-threshold decay (the linear regime).
    pub beaten: bool,
}

/// Classification of a decaying series against the critical exponent of
/// its quantity: decay steeper than `k^{-(base + eps)}` for any positive
/// `eps` flags the linear regime.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdReport<T> {
    pub label: String,
    pub base_exponent: T,
    pub fitted_slope: T,
    pub verdicts: Vec<ThresholdVerdict<T>>,
    pub linear_regime_indicated: bool,
    pub window: (usize, usize),
}

/// Fits the series over the window and compares the slope against each
/// `-(base_exponent + eps)` in the grid. Verdicts are monotone in `eps`:
/// once an epsilon is not beaten, no larger one is.
pub fn threshold_classify<T: Scalar>(
    label: &str,
    series: &[(usize, T)],
    base_exponent: T,
    eps_grid: &[T],
    window: (usize, usize),
) -> Result<ThresholdReport<T>> {
    let fit = fit_rate(series, window)?;
    let verdicts: Vec<ThresholdVerdict<T>> = eps_grid
        .iter()
        .map(|&eps| ThresholdVerdict {
            eps,
            beaten: fit.slope < -(base_exponent + eps),
        })
        .collect();
    let linear_regime_indicated = verdicts.iter().any(|v| v.beaten);
    Ok(ThresholdReport {
        label: label.to_string(),
        base_exponent,
        fitted_slope: fit.slope,
        verdicts,
        linear_regime_indicated,
        window,
    })
}

/// Running maximum of `k^e * a_k`: the empirical limsup scan. The output is
/// monotone nondecreasing by construction.
pub fn limsup_scan<T: Scalar>(series: &[(usize, T)], exponent: T) -> Vec<(usize, T)> {
    let mut best = T::zero();
    let mut out = Vec::with_capacity(series.len());
    for &(k, value) in series {
        let scaled = T::from_usize(k).unwrap().powf(exponent) * value;
        if scaled > best {
            best = scaled;
        }
        out.push((k, best));
    }
    out
}

/// A single violated inequality in a verification sweep.
#[derive(Debug, Clone, Serialize)]
pub struct Violation<T> {
    pub k: usize,
    pub check: String,
    pub lhs: T,
    pub rhs: T,
    pub margin: T,
}

/// Outcome of checking the distance inequalities along a trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma31Report<T> {
    pub rows_checked: usize,
    pub sharp_constant_used: bool,
    pub violations: Vec<Violation<T>>,
}

impl<T> Lemma31Report<T> {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The averaged/maximum constants bounding squared distances by
/// `increment * d(y_{k-1}, C)`: the average inequality carries `m/2`
/// (sharpened to `m/2 - 1/(2m)` when `m` is odd) and the maximum carries `m`.
pub fn avg_distance_constant<T: Scalar>(m: usize, sharp: bool) -> T {
    let mf = T::from_usize(m).unwrap();
    let two = T::from_config(2.0);
    if sharp && m % 2 == 1 {
        mf / two - T::one() / (two * mf)
    } else {
        mf / two
    }
}

/// Checks, for every row, the two distance inequalities
/// `avg_dist^2 <= c_m * increment * d(y_{k-1}, C)` and
/// `max_dist^2 <= m * increment * d(y_{k-1}, C)`,
/// where `dist_prev_to_c[j]` is an upper bound for `d(y_{k-1}, C)` at the
/// row's `k` (any `||y_{k-1} - z||` with `z` in the intersection works, and
/// only weakens the bound being asserted). When `m` is odd the sharper
/// average constant is checked as well.
pub fn check_lemma31<T: Scalar>(
    rows: &[MetricRow<T>],
    dist_prev_to_c: &[T],
    m: usize,
    slack: T,
) -> Result<Lemma31Report<T>> {
    if rows.len() != dist_prev_to_c.len() {
        return Err(Error::InvalidParameter(format!(
            "{} rows but {} distance bounds",
            rows.len(),
            dist_prev_to_c.len()
        )));
    }
    let mf = T::from_usize(m).unwrap();
    let half_m = avg_distance_constant::<T>(m, false);
    let sharp = avg_distance_constant::<T>(m, true);
    let use_sharp = m % 2 == 1;
    let mut violations = Vec::new();
    for (row, &d_prev) in rows.iter().zip(dist_prev_to_c) {
        let coupling = row.increment * d_prev;
        let avg_sq = row.avg_dist * row.avg_dist;
        let max_sq = row.max_dist * row.max_dist;
        let mut push = |check: &str, lhs: T, rhs: T| {
            if lhs > rhs + slack {
                violations.push(Violation {
                    k: row.k,
                    check: check.to_string(),
                    lhs,
                    rhs,
                    margin: lhs - rhs,
                });
            }
        };
        push("avg_half_m", avg_sq, half_m * coupling);
        if use_sharp {
            push("avg_sharp", avg_sq, sharp * coupling);
        }
        push("max_m", max_sq, mf * coupling);
    }
    Ok(Lemma31Report {
        rows_checked: rows.len(),
        sharp_constant_used: use_sharp,
        violations,
    })
}
