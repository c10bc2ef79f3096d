//! Indefinite-parity QSVT on the diagonal block encoding.
//!
//! Convention: a QSVT control qubit is rotated by `e^{iφ_k X}` between
//! `2d` signal steps. On the walk eigenvector with eigenvalue `e^{±iθ}`,
//! `θ = arccos t`, signal step `k` applies `diag(1, e^{±iθ})` for odd `k`
//! and `diag(1, e^{∓iθ})` for even `k` (controlled walk and its inverse
//! alternate). The flag-zero input is an equal superposition of the two
//! eigenvectors, so the block entry is the average of the two branches.
//! That average is a real polynomial of degree at most `d` in `t`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::DiagonalBlockEncoding;
use crate::error::{Error, Result};
use crate::plan::SegmentPlan;
use crate::poly::{chebyshev_eval, chebyshev_nodes};
use crate::segmentation::segment_max_abs;

type C2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn rx(phi: f64) -> C2 {
    let (s, c) = phi.sin_cos();
    [[Complex64::new(c, 0.0), Complex64::new(0.0, s)], [Complex64::new(0.0, s), Complex64::new(c, 0.0)]]
}

fn mul(a: &C2, b: &C2) -> C2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Multiplies `m` on the right by the signal step `diag(1, phase)`.
fn mul_signal(m: &C2, phase: Complex64) -> C2 {
    [[m[0][0], m[0][1] * phase], [m[1][0], m[1][1] * phase]]
}

/// Phase of signal step `k` (1-based) on branch `branch` (±1).
fn signal_phase(k: usize, branch: f64, theta: f64) -> Complex64 {
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    Complex64::from_polar(1.0, branch * sign * theta)
}

fn branch_element(phases: &[f64], theta: f64, branch: f64) -> Complex64 {
    let mut m = rx(phases[0]);
    for (k, &phi) in phases.iter().enumerate().skip(1) {
        m = mul(&mul_signal(&m, signal_phase(k, branch, theta)), &rx(phi));
    }
    m[0][0]
}

/// Flag-zero amplitude of the QSVT sequence at block value `t`.
pub fn qsvt_amplitude(phases: &[f64], t: f64) -> Complex64 {
    assert!(!phases.is_empty() && phases.len() % 2 == 1, "need 2d + 1 phases");
    let theta = t.clamp(-1.0, 1.0).acos();
    0.5 * (branch_element(phases, theta, 1.0) + branch_element(phases, theta, -1.0))
}

/// Real flag-zero block entry of the QSVT sequence at `t ∈ [-1, 1]`.
pub fn qsvt_scalar(phases: &[f64], t: f64) -> f64 {
    qsvt_amplitude(phases, t).re
}

/// Amplitude and its gradient with respect to every phase.
fn amplitude_and_gradient(phases: &[f64], t: f64) -> (Complex64, Vec<Complex64>) {
    let theta = t.clamp(-1.0, 1.0).acos();
    let len = phases.len();
    let mut amp = ZERO;
    let mut grad = vec![ZERO; len];
    let ix: C2 = [[ZERO, Complex64::new(0.0, 1.0)], [Complex64::new(0.0, 1.0), ZERO]];
    for branch in [1.0, -1.0] {
        // left[j]: row 0 of R_0 S_1 R_1 ... S_j (everything before R_j)
        let mut left = vec![[ZERO; 2]; len];
        let mut row = [ONE, ZERO];
        for j in 0..len {
            if j > 0 {
                let p = signal_phase(j, branch, theta);
                row = [row[0], row[1] * p];
            }
            left[j] = row;
            let r = rx(phases[j]);
            row = [row[0] * r[0][0] + row[1] * r[1][0], row[0] * r[0][1] + row[1] * r[1][1]];
        }
        amp += 0.5 * row[0];
        // right: column 0 of S_{j+1} R_{j+1} ... R_{2d}
        let mut col = [ONE, ZERO];
        for j in (0..len).rev() {
            let r = rx(phases[j]);
            let d = mul(&ix, &r);
            let v = [d[0][0] * col[0] + d[0][1] * col[1], d[1][0] * col[0] + d[1][1] * col[1]];
            grad[j] += 0.5 * (left[j][0] * v[0] + left[j][1] * v[1]);
            col = [r[0][0] * col[0] + r[0][1] * col[1], r[1][0] * col[0] + r[1][1] * col[1]];
            if j > 0 {
                let p = signal_phase(j, branch, theta);
                col = [col[0], col[1] * p];
            }
        }
    }
    (amp, grad)
}

/// Solver settings for [`solve_phase_factors_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Required gap between `max |p|` and 1.
    pub margin: f64,
    pub max_iterations: usize,
    /// Random restarts after the deterministic initial guess.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { margin: 1e-4, max_iterations: 3000, restarts: 32, seed: 0x5eed }
    }
}

/// Finds `2d + 1` phases whose QSVT block entry matches the Chebyshev
/// series `coeffs` to within `tau` on `4d + 1` Chebyshev nodes.
pub fn solve_phase_factors(coeffs: &[f64], d: usize, tau: f64) -> Result<Vec<f64>> {
    solve_phase_factors_with(coeffs, d, tau, &SolverOptions::default())
}

pub fn solve_phase_factors_with(coeffs: &[f64], d: usize, tau: f64, opts: &SolverOptions) -> Result<Vec<f64>> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tau} must be positive")));
    }
    let effective = coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0);
    if effective > d {
        return Err(Error::InvalidParameter(format!(
            "polynomial of degree {effective} exceeds the capacity {d} of 2d queries"
        )));
    }
    let peak = segment_max_abs(coeffs, 256);
    if peak > 1.0 - opts.margin + 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "max |p| = {peak} exceeds 1 - margin = {}",
            1.0 - opts.margin
        )));
    }
    let nodes = chebyshev_nodes(4 * d + 1);
    let target: Vec<f64> = nodes.iter().map(|&t| chebyshev_eval(coeffs, t)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for attempt in 0..=opts.restarts {
        let init: Vec<f64> = if attempt == 0 {
            symmetric_start(d)
        } else {
            (0..2 * d + 1).map(|_| rng.gen_range(-1.0..1.0)).collect()
        };
        let (phases, residual) = levenberg_marquardt(init, &nodes, &target, tau, opts.max_iterations);
        if residual <= tau {
            return Ok(phases);
        }
        if best.as_ref().is_none_or(|(_, r)| residual < *r) {
            best = Some((phases, residual));
        }
    }
    Err(Error::PhaseSolve { residual: best.map_or(f64::INFINITY, |(_, r)| r), tolerance: tau })
}

/// Zero phases except `π/4` at both ends (a single `π/2` for `d = 0`).
fn symmetric_start(d: usize) -> Vec<f64> {
    let mut phi = vec![0.0; 2 * d + 1];
    phi[0] += std::f64::consts::FRAC_PI_4;
    phi[2 * d] += std::f64::consts::FRAC_PI_4;
    phi
}

fn residuals(phases: &[f64], nodes: &[f64], target: &[f64]) -> DVector<f64> {
    let m = nodes.len();
    let mut r = DVector::zeros(2 * m);
    for (i, (&t, &y)) in nodes.iter().zip(target).enumerate() {
        let amp = qsvt_amplitude(phases, t);
        r[i] = amp.re - y;
        r[m + i] = amp.im;
    }
    r
}

fn jacobian(phases: &[f64], nodes: &[f64]) -> DMatrix<f64> {
    let m = nodes.len();
    let mut jac = DMatrix::zeros(2 * m, phases.len());
    for (i, &t) in nodes.iter().enumerate() {
        let (_, grad) = amplitude_and_gradient(phases, t);
        for (j, g) in grad.iter().enumerate() {
            jac[(i, j)] = g.re;
            jac[(m + i, j)] = g.im;
        }
    }
    jac
}

fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |a, b| a.max(b.abs()))
}

/// Runs that are still this far off after `ABANDON_AFTER` iterations sit in
/// a spurious local minimum; they are dropped in favour of a fresh start.
const ABANDON_AFTER: usize = 200;
const ABANDON_ABOVE: f64 = 1e-4;
/// A run whose residual fails to halve over this many iterations has
/// stalled on a plateau and is restarted as well.
const STALL_WINDOW: usize = 100;
const STALL_RATIO: f64 = 0.5;

fn levenberg_marquardt(
    mut phases: Vec<f64>,
    nodes: &[f64],
    target: &[f64],
    tau: f64,
    max_iterations: usize,
) -> (Vec<f64>, f64) {
    let goal = 0.1 * tau;
    let mut r = residuals(&phases, nodes, target);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut checkpoint = f64::INFINITY;
    for iteration in 0..max_iterations {
        let res = max_abs(&r);
        if res <= goal || (iteration == ABANDON_AFTER && res > ABANDON_ABOVE) {
            break;
        }
        if iteration % STALL_WINDOW == 0 {
            if res > STALL_RATIO * checkpoint {
                break;
            }
            checkpoint = res;
        }
        let jac = jacobian(&phases, nodes);
        let jtj = jac.transpose() * &jac;
        let g = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..a.nrows() {
                a[(k, k)] += lambda * (1.0 + jtj[(k, k)]);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = phases.iter().zip(step.iter()).map(|(p, s)| p + s).collect();
            let tr = residuals(&trial, nodes, target);
            let tc = tr.norm_squared();
            if tc < cost {
                phases = trial;
                r = tr;
                cost = tc;
                lambda = (lambda * 0.3).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let res = max_abs(&r);
    (phases, res)
}

/// Per-segment QSVT phases for a plan, all of the same degree `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhaseRepr", into = "PhaseRepr")]
pub struct PhaseFactorSet {
    d: usize,
    phases: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PhaseRepr {
    d: usize,
    phases: Vec<Vec<f64>>,
}

impl TryFrom<PhaseRepr> for PhaseFactorSet {
    type Error = Error;

    fn try_from(r: PhaseRepr) -> Result<Self> {
        PhaseFactorSet::new(r.d, r.phases)
    }
}

impl From<PhaseFactorSet> for PhaseRepr {
    fn from(p: PhaseFactorSet) -> Self {
        Self { d: p.d, phases: p.phases }
    }
}

/// Upper bound on the degree accepted when reading phase sets.
pub const MAX_DEGREE: usize = 4096;

impl PhaseFactorSet {
    pub fn new(d: usize, phases: Vec<Vec<f64>>) -> Result<Self> {
        if d > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!("degree {d} exceeds {MAX_DEGREE}")));
        }
        if phases.is_empty() {
            return Err(Error::InvalidParameter("phase set has no segments".into()));
        }
        for (s, p) in phases.iter().enumerate() {
            if p.len() != 2 * d + 1 {
                return Err(Error::InvalidParameter(format!(
                    "segment {s} has {} phases, expected 2d + 1 = {}",
                    p.len(),
                    2 * d + 1
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("segment {s} has non-finite phases")));
            }
        }
        Ok(Self { d, phases })
    }

    /// Solves phases for every segment of an already rescaled plan.
    pub fn solve(plan: &SegmentPlan, tau: f64, opts: &SolverOptions) -> Result<Self> {
        let d = plan.degree();
        let phases = plan
            .segments()
            .par_iter()
            .map(|s| solve_phase_factors_with(&s.coeffs, d, tau, opts))
            .collect::<Result<Vec<_>>>()?;
        Self::new(d, phases)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn segment(&self, s: usize) -> &[f64] {
        &self.phases[s]
    }

    pub fn segment_count(&self) -> usize {
        self.phases.len()
    }

    pub fn segment_mut(&mut self, s: usize) -> &mut [f64] {
        &mut self.phases[s]
    }
}

/// Transformed diagonal: entry `x` is `qsvt_scalar(φ_{s_x}, t_x)`.
pub fn apply_piecewise_qsvt(be: &DiagonalBlockEncoding, phases: &PhaseFactorSet) -> Result<Vec<f64>> {
    if phases.segment_count() != be.plan.segment_count() {
        return Err(Error::InvalidParameter(format!(
            "{} phase vectors for {} segments",
            phases.segment_count(),
            be.plan.segment_count()
        )));
    }
    let diag = be.diag();
    let mut out = Vec::with_capacity(diag.len());
    for (s, seg) in be.plan.segments().iter().enumerate() {
        let phi = phases.segment(s);
        out.extend(diag[seg.start..seg.end()].iter().map(|&t| qsvt_scalar(phi, t)));
    }
    Ok(out)
}

/// Direct evaluation `p_{s_x}(t_x)`, no QSVT involved.
pub fn reference_transformed_diagonal(plan: &SegmentPlan) -> Vec<f64> {
    plan.values()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_identity() {
        for t in [-1.0, -0.3, 0.0, 0.8, 1.0] {
            assert!((qsvt_scalar(&[0.0], t) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let phases = [0.3, -0.7, 1.1, 0.2, -0.4];
        let t = 0.37;
        let (_, grad) = amplitude_and_gradient(&phases, t);
        let h = 1e-6;
        for j in 0..phases.len() {
            let mut p = phases;
            p[j] += h;
            let up = qsvt_amplitude(&p, t);
            p[j] -= 2.0 * h;
            let dn = qsvt_amplitude(&p, t);
            let fd = (up - dn) / (2.0 * h);
            assert!((fd - grad[j]).norm() < 1e-8, "phase {j}: {fd} vs {}", grad[j]);
        }
    }

    #[test]
    fn block_entry_is_real() {
        let phases = [0.9, -0.1, 0.4, 1.3, -2.0, 0.6, 0.05];
        for i in 0..=20 {
            let t = -1.0 + 0.1 * i as f64;
            assert!(qsvt_amplitude(&phases, t).im.abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_capacity_and_bound_violations() {
        assert!(solve_phase_factors(&[0.0, 0.0, 0.5], 1, 1e-10).is_err());
        assert!(solve_phase_factors(&[1.0], 0, 1e-10).is_err());
        assert!(solve_phase_factors(&[0.5], 0, 0.0).is_err());
    }

    #[test]
    fn phase_set_json() {
        let set = PhaseFactorSet::new(1, vec![vec![0.1, 0.2, 0.3]]).unwrap();
        let s = serde_json::to_string(&set).unwrap();
        assert_eq!(s, r#"{"d":1,"phases":[[0.1,0.2,0.3]]}"#);
        assert!(serde_json::from_str::<PhaseFactorSet>(r#"{"d":1,"phases":[[0.1]]}"#).is_err());
    }
}
