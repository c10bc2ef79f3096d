//! Greedy optimal power-of-two segmentation, the per-segment least-squares
//! fitter, and the dyadic-cascade planners for `x^α` and `log x`.

use crate::amplitudes::{sample_target, TargetKind, TargetSpec};
use crate::error::{Error, Result};
use crate::plan::{Segment, SegmentPlan};
use crate::poly::{chebyshev_eval, chebyshev_lstsq, chebyshev_nodes};

/// Default number of Chebyshev nodes per segment for the continuous maximum.
pub const DEFAULT_PMAX_GRID: usize = 256;

/// Block-encoding arguments `t_x = 1 - 2x/L` for a segment of length `L`.
pub fn segment_ts(len: usize) -> Vec<f64> {
    (0..len).map(|x| 1.0 - 2.0 * x as f64 / len as f64).collect()
}

/// Least-squares Chebyshev fit of one segment's samples.
///
/// Returns the `degree + 1` coefficients and the L∞ error over the sample
/// points. A degree at or above the sample count interpolates exactly.
pub fn err_poly_approx(samples: &[f64], degree: usize) -> Result<(Vec<f64>, f64)> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("cannot fit an empty segment".into()));
    }
    let ts = segment_ts(samples.len());
    let coeffs = chebyshev_lstsq(&ts, samples, degree);
    if degree + 1 >= samples.len() {
        return Ok((coeffs, 0.0));
    }
    let err = ts
        .iter()
        .zip(samples)
        .map(|(&t, &y)| (chebyshev_eval(&coeffs, t) - y).abs())
        .fold(0.0, f64::max);
    Ok((coeffs, err))
}

/// Bookkeeping from one run of [`optimal_cuts_with_stats`].
#[derive(Debug, Clone, PartialEq)]
pub struct CutStats {
    /// Calls made to the fitter. Singleton segments are exact and not queried.
    pub queries: usize,
    /// Discrete L∞ fit error of each accepted segment, in plan order.
    pub errors: Vec<f64>,
}

/// Greedy right-to-left segmentation: at each step take the largest aligned
/// power-of-two block ending at the current right edge whose fit error is at
/// most `eps`, halving the block on failure.
pub fn optimal_cuts(samples: &[f64], degree: usize, eps: f64) -> Result<SegmentPlan> {
    optimal_cuts_with_stats(samples, degree, eps).map(|(plan, _)| plan)
}

pub fn optimal_cuts_with_stats(samples: &[f64], degree: usize, eps: f64) -> Result<(SegmentPlan, CutStats)> {
    let total = samples.len();
    if total < 2 || !total.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "sample count {total} is not a power of two with n >= 1"
        )));
    }
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {eps} must be positive")));
    }
    let n = total.trailing_zeros();
    let mut segments = Vec::new();
    let mut errors = Vec::new();
    let mut queries = 0usize;
    let mut rhs = total;
    while rhs > 0 {
        let block = 1usize << rhs.trailing_zeros();
        let mut lhs = rhs - block;
        let (coeffs, err) = loop {
            if rhs - lhs == 1 {
                let mut c = vec![0.0; degree + 1];
                c[0] = samples[lhs];
                break (c, 0.0);
            }
            let (c, e) = err_poly_approx(&samples[lhs..rhs], degree)?;
            queries += 1;
            if e.is_nan() {
                return Err(Error::Infeasible(format!("fit of [{lhs}, {rhs}) produced NaN")));
            }
            if e <= eps {
                break (c, e);
            }
            lhs = (lhs + rhs) / 2;
        };
        segments.push(Segment::new(lhs, rhs - lhs, coeffs));
        errors.push(err);
        rhs = lhs;
    }
    segments.reverse();
    errors.reverse();
    let plan = SegmentPlan::new(n, segments)?;
    Ok((plan, CutStats { queries, errors }))
}

/// Dyadic-cascade plan for the singular targets.
///
/// `power`: pieces `[2^{n-i-1}, 2^{n-i})` for `i = 0..n` plus a constant-zero
/// piece on `[0, 1)`, `n + 1` segments in all. `log`: each dyadic block
/// `[2^{n-i-1}, 2^{n-i})`, `i = 0..n-1`, is split at three quarters into two
/// halves, plus one exact linear piece on `[0, 2)`, `2n - 1` segments in all.
pub fn dyadic_cascade_plan(spec: &TargetSpec, degree: usize) -> Result<SegmentPlan> {
    let samples = sample_target(spec)?.values;
    let n = spec.n;
    let mut bounds: Vec<(usize, usize)> = Vec::new();
    match spec.kind {
        TargetKind::Power { .. } => {
            bounds.push((0, 1));
            for i in (0..n).rev() {
                let lo = 1usize << (n - i - 1);
                bounds.push((lo, lo));
            }
        }
        TargetKind::Log => {
            if degree == 0 {
                return Err(Error::InvalidParameter(
                    "the log cascade needs degree >= 1 for its two-point bottom piece".into(),
                ));
            }
            bounds.push((0, 2));
            for i in (0..n.saturating_sub(1)).rev() {
                let lo = 1usize << (n - i - 1);
                let half = lo / 2;
                bounds.push((lo, half));
                bounds.push((lo + half, half));
            }
        }
        _ => {
            return Err(Error::InvalidTarget(
                "dyadic cascade plans exist only for power and log targets".into(),
            ))
        }
    }
    let mut segments = Vec::with_capacity(bounds.len());
    for (start, len) in bounds {
        let coeffs = if start == 0 && len == 1 {
            let mut c = vec![0.0; degree + 1];
            c[0] = samples[0];
            c
        } else {
            err_poly_approx(&samples[start..start + len], degree)?.0
        };
        segments.push(Segment::new(start, len, coeffs));
    }
    SegmentPlan::new(n, segments)
}

/// Maximum of `|p(t)|` over `[-1, 1]` for one Chebyshev series: dense node
/// sampling plus the endpoints, then golden-section refinement around each
/// sampled local maximum.
pub fn segment_max_abs(coeffs: &[f64], grid: usize) -> f64 {
    let f = |t: f64| chebyshev_eval(coeffs, t).abs();
    let mut ts = Vec::with_capacity(grid + 2);
    ts.push(1.0);
    ts.extend(chebyshev_nodes(grid.max(1)));
    ts.push(-1.0);
    let vals: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
    let mut best = vals.iter().cloned().fold(0.0, f64::max);
    for i in 1..ts.len() - 1 {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            // ts is decreasing
            best = best.max(golden_max(&f, ts[i + 1], ts[i - 1]));
        }
    }
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
        if (b - a).abs() < 1e-15 {
            break;
        }
    }
    fc.max(fd)
}

/// `p̃_max`: the largest `|p̃_i(t)|` over all segments and `t ∈ [-1, 1]`.
pub fn continuous_pmax(plan: &SegmentPlan, grid_per_segment: usize) -> Result<f64> {
    if grid_per_segment < 64 {
        return Err(Error::InvalidParameter(format!(
            "grid of {grid_per_segment} nodes is below the minimum of 64"
        )));
    }
    Ok(plan
        .segments()
        .iter()
        .map(|s| segment_max_abs(&s.coeffs, grid_per_segment))
        .fold(0.0, f64::max))
}
