//! Window functions for phase estimation: output distributions, tail
//! probabilities, extra-ancilla requirements and preparation costs of the
//! B-spline window against the Kaiser window.
//!
//! Grid convention: `l` ancillas give outcomes `k ∈ (-2^{l-1}, 2^{l-1}]`,
//! stored at index `k + 2^{l-1} - 1`. The eigenphase offset `E` and the
//! confidence half-width are measured in grid bins.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{bessel_i0, bspline_piece, bspline_samples_exact, kaiser_samples};
use crate::cost::{prep_total_toffoli, BeVariant, CostParams, ResourceEstimate};
use crate::error::{Error, Result};
use crate::poly::{chebyshev_interpolate, chebyshev_nodes};
use crate::prep::aa_rounds_estimate;

/// Largest register for which distributions are materialised.
pub const MAX_GRID_QUBITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QpeWindow {
    Rect,
    Kaiser { beta: f64 },
    #[serde(rename = "bspline")]
    BSpline { m: u32 },
}

impl fmt::Display for QpeWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QpeWindow::Rect => write!(f, "rect"),
            QpeWindow::Kaiser { beta } => write!(f, "kaiser:{beta}"),
            QpeWindow::BSpline { m } => write!(f, "bspline:{m}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowFamily {
    Rect,
    Kaiser,
    #[serde(rename = "bspline")]
    BSpline,
}

impl WindowFamily {
    pub const ALL: [WindowFamily; 3] = [WindowFamily::Rect, WindowFamily::Kaiser, WindowFamily::BSpline];

    pub fn name(self) -> &'static str {
        match self {
            WindowFamily::Rect => "rect",
            WindowFamily::Kaiser => "kaiser",
            WindowFamily::BSpline => "bspline",
        }
    }
}

fn check_grid(l: u32) -> Result<usize> {
    if !(2..=MAX_GRID_QUBITS).contains(&l) {
        return Err(Error::InvalidParameter(format!("ancilla count {l} outside 2..={MAX_GRID_QUBITS}")));
    }
    Ok(1usize << l)
}

fn check_window(window: &QpeWindow) -> Result<()> {
    match *window {
        QpeWindow::Rect => Ok(()),
        QpeWindow::Kaiser { beta } if beta.is_finite() && (0.0..=MAX_BETA).contains(&beta) => Ok(()),
        QpeWindow::Kaiser { beta } => Err(Error::InvalidParameter(format!("Kaiser beta {beta} outside [0, {MAX_BETA}]"))),
        QpeWindow::BSpline { m } if m >= 1 => Ok(()),
        QpeWindow::BSpline { .. } => Err(Error::InvalidParameter("B-spline order must be at least 1".into())),
    }
}

/// Outcome `k` stored at index `i`.
pub fn grid_outcome(l: u32, i: usize) -> i64 {
    i as i64 - (1i64 << (l - 1)) + 1
}

fn sinc_pi(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - (PI * x).powi(2) / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Unnormalised closed-form probability `sinc((k - E)π/m)^{2m}`.
pub fn bspline_weight(m: u32, u: f64) -> f64 {
    sinc_pi(u / f64::from(m)).powi(2 * m as i32)
}

/// Squared continuum Fourier transform of the Kaiser window at `u` bins
/// from the peak, scaled to 1 at `u = 0`.
pub fn kaiser_weight(beta: f64, u: f64) -> f64 {
    let w = PI * u;
    let z = beta * beta - w * w;
    let log_peak = ln_sinh_over(beta);
    let amp = if z > 0.0 {
        (ln_sinh_over(z.sqrt()) - log_peak).exp()
    } else {
        let s = (-z).sqrt();
        let sinc = if s < 1e-8 { 1.0 } else { s.sin() / s };
        sinc * (-log_peak).exp()
    };
    amp * amp
}

/// `ln(sinh(x)/x)` without overflow.
fn ln_sinh_over(x: f64) -> f64 {
    if x < 1e-4 {
        x * x / 6.0
    } else if x < 20.0 {
        (x.sinh() / x).ln()
    } else {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2 - x.ln()
    }
}

/// Exact output distribution. B-spline windows use the closed form
/// `∝ sinc((k - E)π/m)^{2m}`; rectangular and Kaiser windows use the DFT of
/// their sampled amplitudes.
pub fn qpe_distribution(window: &QpeWindow, l: u32, e: f64) -> Result<Vec<f64>> {
    check_window(window)?;
    let dim = check_grid(l)?;
    match *window {
        QpeWindow::BSpline { m } => {
            let mut p: Vec<f64> = (0..dim).map(|i| bspline_weight(m, grid_outcome(l, i) as f64 - e)).collect();
            normalize(&mut p);
            Ok(p)
        }
        _ => qpe_distribution_dft(window, l, e),
    }
}

fn normalize(p: &mut [f64]) -> f64 {
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    total
}

/// Sampled window amplitudes on `2^l` points.
pub fn window_samples(window: &QpeWindow, l: u32) -> Result<Vec<f64>> {
    check_window(window)?;
    let dim = check_grid(l)?;
    Ok(match *window {
        QpeWindow::Rect => vec![1.0; dim],
        QpeWindow::Kaiser { beta } => kaiser_samples(beta, dim),
        QpeWindow::BSpline { m } => {
            if m as usize > dim {
                return Err(Error::InvalidParameter(format!("{m} pieces do not fit on {dim} points")));
            }
            bspline_samples_exact(m, l)
        }
    })
}

/// Distribution obtained from the discrete Fourier transform of the sampled
/// window after the phase kick `e^{2πi E x / 2^l}`.
pub fn qpe_distribution_dft(window: &QpeWindow, l: u32, e: f64) -> Result<Vec<f64>> {
    let w = window_samples(window, l)?;
    let dim = w.len();
    let mut buf: Vec<Complex64> = w
        .iter()
        .enumerate()
        .map(|(x, &a)| Complex64::from_polar(a, 2.0 * PI * e * x as f64 / dim as f64))
        .collect();
    FftPlanner::new().plan_fft_forward(dim).process(&mut buf);
    let mut p: Vec<f64> = (0..dim)
        .map(|i| {
            let k = grid_outcome(l, i);
            buf[k.rem_euclid(dim as i64) as usize].norm_sqr()
        })
        .collect();
    normalize(&mut p);
    Ok(p)
}

/// Largest pointwise gap between the closed form and the DFT of the
/// sampled B-spline window.
pub fn a2_dft_gap(m: u32, l: u32, e: f64) -> Result<f64> {
    let w = QpeWindow::BSpline { m };
    let a = qpe_distribution(&w, l, e)?;
    let b = qpe_distribution_dft(&w, l, e)?;
    Ok(a.iter().zip(&b).fold(0.0, |acc, (x, y)| acc.max((x - y).abs())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub exact: f64,
    pub approx: f64,
    pub relative_gap: f64,
}

/// `sqrt(Σ_k sinc(kπ/m)^{2m})` over the grid, against the Gaussian
/// estimate `(3m/π)^{1/4}`.
pub fn bspline_normalization(m: u32, l: u32) -> Result<Normalization> {
    if m == 0 {
        return Err(Error::InvalidParameter("B-spline order must be at least 1".into()));
    }
    let dim = check_grid(l)?;
    let exact = (0..dim).map(|i| bspline_weight(m, grid_outcome(l, i) as f64)).sum::<f64>().sqrt();
    let approx = (3.0 * f64::from(m) / PI).powf(0.25);
    Ok(Normalization { exact, approx, relative_gap: exact / approx - 1.0 })
}

/// Bound on the tail beyond `±m` bins: `(2/𝒩²) (m/(2m-1)) π^{-2m}`.
pub fn lemma2_bound(m: u32, normalization: f64) -> f64 {
    let mf = f64::from(m);
    2.0 / (normalization * normalization) * mf / (2.0 * mf - 1.0) * PI.powf(-2.0 * mf)
}

/// Probability of an outcome more than `confidence` bins from `E`.
pub fn tail_probability(window: &QpeWindow, l: u32, e: f64, confidence: f64) -> Result<f64> {
    if confidence.is_nan() || confidence <= 0.0 {
        return Err(Error::InvalidParameter(format!("confidence {confidence} must be positive")));
    }
    let p = qpe_distribution(window, l, e)?;
    Ok(tail_of(&p, l, e, confidence))
}

fn tail_of(p: &[f64], l: u32, e: f64, confidence: f64) -> f64 {
    // summed smallest-first to keep tiny tails accurate
    let mut tail: Vec<f64> = p
        .iter()
        .enumerate()
        .filter(|(i, _)| (grid_outcome(l, *i) as f64 - e).abs() > confidence)
        .map(|(_, v)| *v)
        .collect();
    tail.sort_by(|a, b| a.total_cmp(b));
    tail.iter().sum::<f64>().clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QpeTailReport {
    pub window: QpeWindow,
    pub l: u32,
    #[serde(rename = "E")]
    pub e: f64,
    pub confidence: f64,
    pub delta: f64,
    /// Square root of the summed unnormalised probabilities.
    pub normalization: f64,
    /// Analytic tail bound, for B-spline windows at confidence `m`.
    pub bound: Option<f64>,
}

pub fn tail_report(window: &QpeWindow, l: u32, e: f64, confidence: f64) -> Result<QpeTailReport> {
    let delta = tail_probability(window, l, e, confidence)?;
    let dim = check_grid(l)?;
    let normalization = match *window {
        QpeWindow::BSpline { m } => (0..dim)
            .map(|i| bspline_weight(m, grid_outcome(l, i) as f64 - e))
            .sum::<f64>()
            .sqrt(),
        _ => window_samples(window, l)?.iter().map(|w| w * w).sum::<f64>().sqrt(),
    };
    let bound = match *window {
        QpeWindow::BSpline { m } if (confidence - f64::from(m)).abs() < 1e-12 => Some(lemma2_bound(m, normalization)),
        _ => None,
    };
    Ok(QpeTailReport { window: *window, l, e, confidence, delta, normalization, bound })
}

/// Trigamma function `ψ₁(x)` for `x > 0`.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + 1.0 / x + x2 / 2.0
        + (1.0 / (x * x * x)) * (1.0 / 6.0 - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 / 30.0)))
}

/// Tail of the unboosted distribution `sin²(πE)/(π²(k-E)²)` on an
/// unbounded grid, summed in closed form.
pub fn rect_continuum_tail(e: f64, confidence: f64) -> f64 {
    let s = (PI * e).sin().powi(2) / (PI * PI);
    if s == 0.0 {
        return 0.0;
    }
    // outcomes k >= 1 at distance k - E, outcomes -j (j >= 0) at j + E
    let k0 = ((confidence + e).floor() + 1.0).max(1.0);
    let j0 = ((confidence - e).floor() + 1.0).max(0.0);
    (s * (trigamma(k0 - e) + trigamma(j0 + e))).clamp(0.0, 1.0)
}

/// Eigenphase offsets examined for the worst case; by symmetry `[0, 1/2]`
/// covers every fractional offset.
pub const WORST_CASE_OFFSETS: usize = 11;

fn offsets() -> impl Iterator<Item = f64> {
    (0..WORST_CASE_OFFSETS).map(|i| 0.5 * i as f64 / (WORST_CASE_OFFSETS - 1) as f64)
}

/// Kaiser parameters above this overflow the `I0` normalisation.
pub const MAX_BETA: f64 = 600.0;

/// Extra-ancilla scan resolution (qubits per step).
pub const SCAN_STEPS_PER_QUBIT: usize = 64;
/// Tail probabilities barely depend on the base register (it only sets how
/// finely the window is sampled), so scans cap it here to bound the grid.
pub const SCAN_BASE_CAP: u32 = 10;

/// Best achievable worst-case tail probability as a function of the number
/// of extra ancillas, for one window family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AncillaScan {
    pub family: WindowFamily,
    pub base_qubits: u32,
    pub extra: Vec<f64>,
    pub delta: Vec<f64>,
    /// Window parameter (`m` or `β`) attaining `delta`; zero for rect.
    pub parameter: Vec<f64>,
}

/// Half-width in bins of the confidence interval with `extra` ancillas
/// beyond the base register. A B-spline of order `m = 2^e` has its main
/// lobe exactly this wide.
pub fn confidence_for(extra: f64) -> f64 {
    2f64.powf(extra)
}

fn bspline_orders(max_extra: u32) -> Vec<f64> {
    (0..=max_extra + 1).map(|j| f64::from(1u32 << j)).collect()
}

fn kaiser_betas(max_extra: u32) -> Vec<f64> {
    let top = (PI * 2f64.powi(max_extra as i32 + 1)).min(MAX_BETA);
    // geometric grid, about 8% apart
    let mut out = Vec::new();
    let mut b: f64 = 0.5;
    while b <= top {
        out.push(b);
        b *= 1.08;
    }
    out
}

/// Worst-case tails at every confidence in `cs` for one window parameter.
fn worst_tails(weight: &(dyn Fn(f64) -> f64 + Sync), l: u32, cs: &[f64]) -> Vec<f64> {
    let half = 1i64 << (l - 1);
    let mut worst = vec![0.0f64; cs.len()];
    for e in offsets() {
        // outcomes in order of distance from E: 0, 1, -1, 2, -2, ...
        let mut dist = Vec::with_capacity(1 << l);
        let mut mass = Vec::with_capacity(1 << l);
        dist.push(e);
        mass.push(weight(-e));
        for j in 1..=half {
            dist.push(j as f64 - e);
            mass.push(weight(j as f64 - e));
            if j < half {
                dist.push(j as f64 + e);
                mass.push(weight(-(j as f64) - e));
            }
        }
        let mut suffix = vec![0.0; mass.len() + 1];
        for i in (0..mass.len()).rev() {
            suffix[i] = suffix[i + 1] + mass[i];
        }
        let total = suffix[0];
        for (w, &c) in worst.iter_mut().zip(cs) {
            let inside = dist.partition_point(|&d| d <= c);
            *w = w.max(suffix[inside] / total);
        }
    }
    worst
}

/// Tabulates the best worst-case tail for `e = 0, 1/64, ..., max_extra`.
pub fn ancilla_scan(family: WindowFamily, base_qubits: u32, max_extra: u32) -> Result<AncillaScan> {
    if base_qubits == 0 {
        return Err(Error::InvalidParameter("need at least one base qubit".into()));
    }
    let steps = max_extra as usize * SCAN_STEPS_PER_QUBIT;
    let extra: Vec<f64> = (0..=steps).map(|i| i as f64 / SCAN_STEPS_PER_QUBIT as f64).collect();
    let cs: Vec<f64> = extra.iter().map(|&e| confidence_for(e)).collect();
    if family == WindowFamily::Rect {
        let delta = cs.iter().map(|&c| offsets().map(|e| rect_continuum_tail(e, c)).fold(0.0, f64::max)).collect();
        let parameter = vec![0.0; extra.len()];
        return Ok(AncillaScan { family, base_qubits, extra, delta, parameter });
    }
    let l = base_qubits.min(SCAN_BASE_CAP) + max_extra;
    check_grid(l)?;
    let params = match family {
        WindowFamily::BSpline => bspline_orders(max_extra),
        _ => kaiser_betas(max_extra),
    };
    let tails: Vec<Vec<f64>> = params
        .par_iter()
        .map(|&p| match family {
            WindowFamily::BSpline => worst_tails(&|u| bspline_weight(p as u32, u), l, &cs),
            _ => worst_tails(&|u| kaiser_weight(p, u), l, &cs),
        })
        .collect();
    let mut delta = vec![f64::INFINITY; cs.len()];
    let mut parameter = vec![0.0; cs.len()];
    for (p, t) in params.iter().zip(&tails) {
        for i in 0..cs.len() {
            if t[i] < delta[i] {
                delta[i] = t[i];
                parameter[i] = *p;
            }
        }
    }
    Ok(AncillaScan { family, base_qubits, extra, delta, parameter })
}

impl AncillaScan {
    /// Smallest tabulated `e` whose best tail is at most `delta_target`.
    pub fn extra_for(&self, delta_target: f64) -> Result<f64> {
        if !(delta_target > 0.0 && delta_target < 1.0) {
            return Err(Error::InvalidParameter(format!("tail target {delta_target} outside (0, 1)")));
        }
        self.extra
            .iter()
            .zip(&self.delta)
            .find(|(_, d)| **d <= delta_target)
            .map(|(e, _)| *e)
            .ok_or_else(|| {
                Error::Infeasible(format!(
                    "{} window cannot reach tail {delta_target:e} within {} extra ancillas (best {:e})",
                    self.family.name(),
                    self.extra.last().copied().unwrap_or(0.0),
                    self.delta.last().copied().unwrap_or(1.0)
                ))
            })
    }

    /// Window parameter chosen at `extra`.
    pub fn parameter_at(&self, extra: f64) -> f64 {
        let i = ((extra * SCAN_STEPS_PER_QUBIT as f64).round() as usize).min(self.parameter.len() - 1);
        self.parameter[i]
    }
}

/// Default scan range for the boosted windows.
pub const DEFAULT_MAX_EXTRA: u32 = 8;
/// Unboosted phase estimation needs about `log2(1/δ)` extra qubits.
pub const RECT_MAX_EXTRA: u32 = 48;

/// Extra ancillas (fractional) for which the best window of `family`
/// keeps the worst-case tail outside the interval `eps_confidence` below
/// `delta_target`.
pub fn extra_ancillas_needed(family: WindowFamily, delta_target: f64, eps_confidence: f64) -> Result<f64> {
    if !(eps_confidence > 0.0 && eps_confidence < 1.0) {
        return Err(Error::InvalidParameter(format!("confidence {eps_confidence} outside (0, 1)")));
    }
    let base = (1.0 / eps_confidence).log2().ceil().max(1.0) as u32;
    let max_extra = if family == WindowFamily::Rect { RECT_MAX_EXTRA } else { DEFAULT_MAX_EXTRA };
    ancilla_scan(family, base, max_extra)?.extra_for(delta_target)
}

/// Straight-line least squares `y ≈ a + b x`; returns `(a, b, rss)`.
pub fn line_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let rss = xs.iter().zip(ys).map(|(x, y)| (y - a - b * x).powi(2)).sum();
    (a, b, rss)
}

/// Fits of `e(δ)` against `log2 ln(1/δ)` and against `log2(1/δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendFit {
    pub loglog_slope: f64,
    pub loglog_rss: f64,
    pub log_slope: f64,
    pub log_rss: f64,
}

pub fn fit_trends(deltas: &[f64], extras: &[f64]) -> TrendFit {
    let xll: Vec<f64> = deltas.iter().map(|d| (1.0 / d).ln().log2()).collect();
    let xl: Vec<f64> = deltas.iter().map(|d| (1.0 / d).log2()).collect();
    let (_, b1, r1) = line_fit(&xll, extras);
    let (_, b2, r2) = line_fit(&xl, extras);
    TrendFit { loglog_slope: b1, loglog_rss: r1, log_slope: b2, log_rss: r2 }
}

/// Tail targets `10^{-3}, ..., 10^{-12}`.
pub fn default_delta_targets() -> Vec<f64> {
    (3..=12).map(|k| 10f64.powi(-k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig6Row {
    pub delta_target: f64,
    pub window: WindowFamily,
    pub extra_ancillas: f64,
}

/// Extra ancillas per family and tail target.
pub fn fig6_rows(base_qubits: u32, deltas: &[f64]) -> Result<Vec<Fig6Row>> {
    let mut rows = Vec::new();
    for family in WindowFamily::ALL {
        let max_extra = if family == WindowFamily::Rect { RECT_MAX_EXTRA } else { DEFAULT_MAX_EXTRA };
        let scan = ancilla_scan(family, base_qubits, max_extra)?;
        for &d in deltas {
            rows.push(Fig6Row { delta_target: d, window: family, extra_ancillas: scan.extra_for(d)? });
        }
    }
    Ok(rows)
}

pub fn write_fig6_csv<W: Write>(out: W, rows: &[Fig6Row]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["delta_target", "window", "extra_ancillas"])?;
    for r in rows {
        w.write_record([format!("{:e}", r.delta_target), r.window.name().to_string(), r.extra_ancillas.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Target accuracy of the Kaiser polynomial fit, relative to the window peak.
pub const WINDOW_EPS: f64 = 1e-6;
/// Bits of rotation precision used when costing either window.
pub const WINDOW_LOG_INV_EPS: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowCost {
    pub extra_ancillas: u32,
    pub base_qubits: u32,
    pub bspline_toffoli: u64,
    pub kaiser_toffoli: u64,
    /// `kaiser / bspline`; infinite when the B-spline window is free.
    pub ratio: f64,
    pub bspline_m: u32,
    pub bspline_aa_rounds: u64,
    pub kaiser_beta: f64,
    pub kaiser_degree: usize,
    pub kaiser_aa_rounds: u64,
}

/// Mean of `(w/max w)²` for the cardinal B-spline of order `m`.
fn bspline_mean_square(m: u32) -> f64 {
    let per_piece = 2048;
    let mut sum = 0.0;
    let mut peak: f64 = 0.0;
    for j in 0..m {
        for i in 0..per_piece {
            let v = bspline_piece(m, j, (i as f64 + 0.5) / per_piece as f64);
            sum += v * v;
            peak = peak.max(v);
        }
    }
    // for even m the peak sits on a knot
    let peak = peak.max(bspline_piece(m, m / 2, 0.0));
    sum / (f64::from(m) * per_piece as f64) / (peak * peak)
}

/// Kaiser window on `t ∈ [-1, 1]`, peak 1.
fn kaiser_profile(beta: f64, t: f64) -> f64 {
    bessel_i0(beta * (1.0 - t * t).max(0.0).sqrt()) / bessel_i0(beta)
}

/// Lowest degree whose Chebyshev truncation of the Kaiser profile has
/// coefficient tail at most `eps`.
pub fn kaiser_fit_degree(beta: f64, eps: f64) -> Result<usize> {
    let count = (2.0 * beta).ceil() as usize + 64;
    let nodes = chebyshev_nodes(count);
    let values: Vec<f64> = nodes.iter().map(|&t| kaiser_profile(beta, t)).collect();
    let coeffs = chebyshev_interpolate(&values);
    let mut tail = 0.0;
    for d in (0..coeffs.len()).rev() {
        tail += coeffs[d].abs();
        if tail > eps {
            if d + 1 >= coeffs.len() {
                return Err(Error::Infeasible(format!(
                    "Kaiser beta {beta}: interpolant on {count} nodes does not resolve eps {eps:e}"
                )));
            }
            return Ok(d);
        }
    }
    Ok(0)
}

fn kaiser_mean_square(beta: f64) -> f64 {
    let pts = 1 << 16;
    (0..pts)
        .map(|i| {
            let t = -1.0 + 2.0 * (i as f64 + 0.5) / pts as f64;
            kaiser_profile(beta, t).powi(2)
        })
        .sum::<f64>()
        / pts as f64
}

fn prep_cost(n: u32, d: u64, s: u64, l_max: u32, mean_square: f64) -> Result<(u64, u64)> {
    let a = mean_square.sqrt().min(1.0);
    let rounds = aa_rounds_estimate(1.0, 1usize << n.min(62), a)?.rounds;
    let est = ResourceEstimate::new(CostParams {
        n: u64::from(n),
        d,
        s,
        l_max: u64::from(l_max),
        log_inv_eps: WINDOW_LOG_INV_EPS,
        aa_rounds: rounds,
        variant: BeVariant::UniformSizes,
    })?;
    Ok((prep_total_toffoli(&est, rounds, u64::from(n)), rounds))
}

/// Preparation Toffolis of the B-spline window with `m = 2^e` equal pieces
/// against a single-polynomial QSVT fit of the best Kaiser window, both on
/// `base + e` qubits.
pub fn window_prep_cost_comparison(extra_ancillas: u32, base_qubits: u32) -> Result<WindowCost> {
    if base_qubits < 8 {
        return Err(Error::InvalidParameter(format!("need at least 8 base qubits, got {base_qubits}")));
    }
    if extra_ancillas > 16 {
        return Err(Error::InvalidParameter(format!("{extra_ancillas} extra ancillas is beyond the scan range")));
    }
    let n = base_qubits + extra_ancillas;
    let m = 1u32 << extra_ancillas;

    let (bspline_toffoli, bspline_aa_rounds) = if m == 1 {
        // the rectangular window is a layer of Hadamards
        (0, 0)
    } else {
        prep_cost(n, u64::from(m - 1), u64::from(m), base_qubits, bspline_mean_square(m))?
    };

    let scan = ancilla_scan(WindowFamily::Kaiser, base_qubits, extra_ancillas.max(1))?;
    let kaiser_beta = scan.parameter_at(f64::from(extra_ancillas));
    let kaiser_degree = kaiser_fit_degree(kaiser_beta, WINDOW_EPS)?;
    let (kaiser_toffoli, kaiser_aa_rounds) = if kaiser_degree == 0 {
        (0, 0)
    } else {
        prep_cost(n, kaiser_degree as u64, 1, n, kaiser_mean_square(kaiser_beta))?
    };
    let ratio = if bspline_toffoli == 0 { f64::INFINITY } else { kaiser_toffoli as f64 / bspline_toffoli as f64 };
    Ok(WindowCost {
        extra_ancillas,
        base_qubits,
        bspline_toffoli,
        kaiser_toffoli,
        ratio,
        bspline_m: m,
        bspline_aa_rounds,
        kaiser_beta,
        kaiser_degree,
        kaiser_aa_rounds,
    })
}

/// Rows `extra_ancillas, window, toffoli, ratio` (two per comparison).
pub fn write_fig7_csv<W: Write>(out: W, costs: &[WindowCost]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["extra_ancillas", "window", "toffoli", "ratio"])?;
    for c in costs {
        for (name, t) in [("bspline", c.bspline_toffoli), ("kaiser", c.kaiser_toffoli)] {
            w.write_record([c.extra_ancillas.to_string(), name.to_string(), t.to_string(), c.ratio.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}
