//! Target amplitude vectors: `x^α`, `log x`, B-spline and Kaiser windows,
//! and user-supplied samples.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plan::{PiecewisePolynomial, Segment, SegmentPlan, MAX_QUBITS};
use crate::poly::{chebyshev_interpolate, chebyshev_nodes};

/// Largest B-spline order accepted by [`bspline_piecewise_coefficients`].
pub const MAX_BSPLINE_PIECES: u32 = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum TargetKind {
    /// `(2^{-n} x)^α`
    Power { alpha: f64 },
    /// `log(2^{-n} x)`, with amplitude 0 at `x = 0`.
    Log,
    /// `m`-fold self-convolution of the rectangular window.
    BSpline { m: u32 },
    /// Zeroth-order Bessel (Kaiser) window with shape parameter `beta`.
    Kaiser { beta: f64 },
    Custom { samples: Vec<f64> },
}

/// A target state on `n` qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TargetRepr", into = "TargetRepr")]
pub struct TargetSpec {
    pub kind: TargetKind,
    pub n: u32,
}

#[derive(Serialize, Deserialize)]
struct TargetRepr {
    kind: String,
    n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<f64>>,
}

impl TryFrom<TargetRepr> for TargetSpec {
    type Error = Error;

    fn try_from(r: TargetRepr) -> Result<Self> {
        let missing = |f: &str| Error::InvalidTarget(format!("kind \"{}\" requires field \"{f}\"", r.kind));
        let kind = match r.kind.as_str() {
            "power" => TargetKind::Power { alpha: r.alpha.ok_or_else(|| missing("alpha"))? },
            "log" => TargetKind::Log,
            "bspline" => TargetKind::BSpline { m: r.m.ok_or_else(|| missing("m"))? },
            "kaiser" => TargetKind::Kaiser { beta: r.beta.ok_or_else(|| missing("beta"))? },
            "custom" => TargetKind::Custom { samples: r.samples.clone().ok_or_else(|| missing("samples"))? },
            other => return Err(Error::InvalidTarget(format!("unknown kind \"{other}\""))),
        };
        let spec = TargetSpec { kind, n: r.n };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<TargetSpec> for TargetRepr {
    fn from(s: TargetSpec) -> Self {
        let mut r = TargetRepr { kind: String::new(), n: s.n, alpha: None, m: None, beta: None, samples: None };
        r.kind = match s.kind {
            TargetKind::Power { alpha } => {
                r.alpha = Some(alpha);
                "power"
            }
            TargetKind::Log => "log",
            TargetKind::BSpline { m } => {
                r.m = Some(m);
                "bspline"
            }
            TargetKind::Kaiser { beta } => {
                r.beta = Some(beta);
                "kaiser"
            }
            TargetKind::Custom { samples } => {
                r.samples = Some(samples);
                "custom"
            }
        }
        .to_string();
        r
    }
}

impl TargetSpec {
    pub fn new(kind: TargetKind, n: u32) -> Result<Self> {
        let spec = Self { kind, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_QUBITS {
            return Err(Error::InvalidTarget(format!("qubit count {} outside 1..={MAX_QUBITS}", self.n)));
        }
        match &self.kind {
            // α = 1 is the plain linear ramp; it is accepted alongside the open interval.
            TargetKind::Power { alpha } if !(*alpha > 0.0 && *alpha <= 1.0) => {
                Err(Error::InvalidTarget(format!("power exponent {alpha} outside (0, 1]")))
            }
            TargetKind::BSpline { m } if *m == 0 => Err(Error::InvalidTarget("B-spline order must be at least 1".into())),
            TargetKind::Kaiser { beta } if !(beta.is_finite() && *beta >= 0.0) => {
                Err(Error::InvalidTarget(format!("Kaiser beta {beta} must be finite and nonnegative")))
            }
            TargetKind::Custom { samples } if samples.len() != self.dim() => Err(Error::InvalidTarget(format!(
                "custom target has {} samples, expected 2^{} = {}",
                samples.len(),
                self.n,
                self.dim()
            ))),
            TargetKind::Custom { samples } if samples.iter().any(|v| !v.is_finite()) => {
                Err(Error::InvalidTarget("custom samples must be finite".into()))
            }
            _ => Ok(()),
        }
    }
}

/// A real amplitude vector of unit L2 norm, with the normalization that was
/// divided out of the raw samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeVector {
    pub values: Vec<f64>,
    pub norm: f64,
}

impl AmplitudeVector {
    /// Normalizes raw samples. Fails on an all-zero input.
    pub fn from_raw(raw: Vec<f64>) -> Result<Self> {
        let norm = l2_norm(&raw);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidTarget("samples have zero or non-finite norm".into()));
        }
        let values = raw.into_iter().map(|v| v / norm).collect();
        Ok(Self { values, norm })
    }

    pub fn uniform(n: u32) -> Self {
        let dim = 1usize << n;
        let norm = (dim as f64).sqrt();
        Self { values: vec![1.0 / norm; dim], norm }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Samples the target on `0..2^n` and normalizes it.
pub fn sample_target(spec: &TargetSpec) -> Result<AmplitudeVector> {
    spec.validate()?;
    let dim = spec.dim();
    let scale = 1.0 / dim as f64;
    let raw = match &spec.kind {
        TargetKind::Power { alpha } => (0..dim).map(|x| (x as f64 * scale).powf(*alpha)).collect(),
        TargetKind::Log => (0..dim)
            .map(|x| if x == 0 { 0.0 } else { (x as f64 * scale).ln() })
            .collect(),
        TargetKind::BSpline { m } => bspline_samples_exact(*m, spec.n),
        TargetKind::Kaiser { beta } => kaiser_samples(*beta, dim),
        TargetKind::Custom { samples } => samples.clone(),
    };
    AmplitudeVector::from_raw(raw)
}

/// Sampled B-spline window evaluated with exact integer arithmetic.
///
/// With `x = i - N/2` the truncated-power sum reduces to
/// `T(i) = Σ_p (-1)^p C(m,p) ((i·m - p·N)_+)^{m-1}` up to a positive constant,
/// so every term is an integer. The result is scaled so its maximum is near 1.
pub(crate) fn bspline_samples_exact(m: u32, n: u32) -> Vec<f64> {
    let dim = 1u64 << n;
    let m64 = u64::from(m);
    let binom: Vec<BigInt> = {
        let mut row = vec![BigInt::from(1u32)];
        for p in 1..=m64 {
            let prev = row[(p - 1) as usize].clone();
            row.push(prev * BigInt::from(m64 - p + 1) / BigInt::from(p));
        }
        row
    };
    let exact: Vec<BigInt> = (0..dim)
        .map(|i| {
            let mut acc = BigInt::zero();
            for p in 0..=m64 {
                let shift = i128::from(i) * i128::from(m) - i128::from(p) * i128::from(dim);
                if shift < 0 {
                    continue;
                }
                let term = if m == 1 {
                    // (u)_+^0 is the right-continuous step.
                    BigInt::from(1u32)
                } else {
                    num_traits::pow::pow(BigInt::from(shift), (m - 1) as usize)
                };
                let term = &binom[p as usize] * term;
                if p % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        })
        .collect();
    let max_bits = exact.iter().map(|v| v.bits()).max().unwrap_or(0);
    let shift = max_bits.saturating_sub(64);
    exact
        .iter()
        .map(|v| {
            // Mathematically nonnegative; guard against a stray sign anyway.
            let v = if v.is_negative() { BigInt::zero() } else { v.clone() };
            (v >> shift).to_f64().unwrap_or(0.0)
        })
        .collect()
}

/// Value of piece `j` of the cardinal B-spline of order `m` (support `[0, m]`)
/// at local coordinate `u ∈ [0, 1]`, via the Cox–de Boor recursion.
pub(crate) fn bspline_piece(m: u32, j: u32, u: f64) -> f64 {
    // pieces[k][j] for the current order k
    let mut pieces = vec![1.0f64];
    for k in 2..=m {
        let kf = f64::from(k);
        let mut next = vec![0.0f64; k as usize];
        for jj in 0..k {
            let y = f64::from(jj) + u;
            let left = if jj < k - 1 { pieces[jj as usize] } else { 0.0 };
            let right = if jj >= 1 { pieces[(jj - 1) as usize] } else { 0.0 };
            next[jj as usize] = (y * left + (kf - y) * right) / (kf - 1.0);
        }
        pieces = next;
    }
    pieces.get(j as usize).copied().unwrap_or(0.0)
}

/// Standard Kaiser window `I0(β √(1 - (2i/(N-1) - 1)^2)) / I0(β)`.
pub fn kaiser_samples(beta: f64, dim: usize) -> Vec<f64> {
    if dim == 1 {
        return vec![1.0];
    }
    let denom = bessel_i0(beta);
    (0..dim)
        .map(|i| {
            let r = 2.0 * i as f64 / (dim - 1) as f64 - 1.0;
            bessel_i0(beta * (1.0 - r * r).max(0.0).sqrt()) / denom
        })
        .collect()
}

/// Modified Bessel function `I0` by its power series (all terms positive).
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

/// Exact piecewise representation of the B-spline window of `m` pieces on
/// `n` qubits: `m` equal segments of length `2^n / m`, each a degree `m-1`
/// Chebyshev polynomial, scaled so the sampled pieces have unit norm.
pub fn bspline_piecewise_coefficients(m: u32, n: u32) -> Result<PiecewisePolynomial> {
    if m == 0 || !m.is_power_of_two() {
        return Err(Error::InvalidTarget(format!("B-spline order {m} must be a power of two")));
    }
    if m > MAX_BSPLINE_PIECES {
        return Err(Error::InvalidTarget(format!("B-spline order {m} exceeds {MAX_BSPLINE_PIECES}")));
    }
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidTarget(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    let dim = 1usize << n;
    if m as usize > dim {
        return Err(Error::InvalidTarget(format!("B-spline order {m} exceeds 2^{n}")));
    }
    let len = dim / m as usize;
    let nodes = chebyshev_nodes(m as usize);
    let mut segments: Vec<Segment> = (0..m)
        .map(|j| {
            let vals: Vec<f64> = nodes.iter().map(|&t| bspline_piece(m, j, 0.5 * (1.0 - t))).collect();
            Segment::new(j as usize * len, len, chebyshev_interpolate(&vals))
        })
        .collect();
    let raw = SegmentPlan::new(n, segments.clone())?;
    let norm = l2_norm(&raw.values());
    for seg in &mut segments {
        seg.coeffs.iter_mut().for_each(|c| *c /= norm);
    }
    SegmentPlan::new(n, segments)
}
