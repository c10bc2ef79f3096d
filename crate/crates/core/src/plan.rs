//! Aligned power-of-two segment plans and their JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::chebyshev_eval;
use crate::segmentation::{segment_max_abs, DEFAULT_PMAX_GRID};

/// One polynomial piece covering `[start, start + length)`.
///
/// `coeffs` are Chebyshev coefficients in the block-encoding argument
/// `t = 1 - 2 (x - start) / length`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub length: usize,
    pub coeffs: Vec<f64>,
}

impl Segment {
    pub fn new(start: usize, length: usize, coeffs: Vec<f64>) -> Self {
        Self { start, length, coeffs }
    }

    /// `log2(length)`.
    pub fn level(&self) -> u32 {
        self.length.trailing_zeros()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn end(&self) -> usize {
        self.start + self.length
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= self.start && x < self.end()
    }

    /// Block-encoding argument for a global index inside this segment.
    pub fn t_of(&self, x: usize) -> f64 {
        debug_assert!(self.contains(x));
        1.0 - 2.0 * (x - self.start) as f64 / self.length as f64
    }

    pub fn eval(&self, t: f64) -> f64 {
        chebyshev_eval(&self.coeffs, t)
    }

    fn validate(&self) -> Result<()> {
        if self.length == 0 || !self.length.is_power_of_two() {
            return Err(Error::InvalidPlan(format!(
                "segment at {} has length {} which is not a power of two",
                self.start, self.length
            )));
        }
        if !self.start.is_multiple_of(self.length) {
            return Err(Error::InvalidPlan(format!(
                "segment [{}, {}) is not aligned to its length",
                self.start,
                self.end()
            )));
        }
        if self.coeffs.is_empty() {
            return Err(Error::InvalidPlan(format!("segment at {} has no coefficients", self.start)));
        }
        if self.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPlan(format!(
                "segment at {} has non-finite coefficients",
                self.start
            )));
        }
        Ok(())
    }
}

/// A tiling of `[0, 2^n)` by aligned power-of-two segments, each carrying a
/// fitted polynomial, together with the continuous maximum `pmax` of the
/// fitted pieces over `t ∈ [-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlanRepr", into = "PlanRepr")]
pub struct SegmentPlan {
    n: u32,
    segments: Vec<Segment>,
    pmax: f64,
}

/// Piecewise polynomial over the index register; same representation as a
/// segment plan.
pub type PiecewisePolynomial = SegmentPlan;

#[derive(Serialize, Deserialize)]
struct PlanRepr {
    n: u32,
    segments: Vec<Segment>,
    pmax: f64,
}

impl TryFrom<PlanRepr> for SegmentPlan {
    type Error = Error;

    fn try_from(r: PlanRepr) -> Result<Self> {
        if !r.pmax.is_finite() || r.pmax < 0.0 {
            return Err(Error::InvalidPlan(format!("pmax {} is not a finite nonnegative value", r.pmax)));
        }
        validate_tiling(r.n, &r.segments)?;
        Ok(Self { n: r.n, segments: r.segments, pmax: r.pmax })
    }
}

impl From<SegmentPlan> for PlanRepr {
    fn from(p: SegmentPlan) -> Self {
        Self { n: p.n, segments: p.segments, pmax: p.pmax }
    }
}

/// Largest register size accepted for plans (indices stay addressable).
pub const MAX_QUBITS: u32 = 30;

fn validate_tiling(n: u32, segments: &[Segment]) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidPlan(format!("qubit count {n} outside 1..={MAX_QUBITS}")));
    }
    if segments.is_empty() {
        return Err(Error::InvalidPlan("plan has no segments".into()));
    }
    let total = 1usize << n;
    let mut cursor = 0usize;
    for seg in segments {
        seg.validate()?;
        if seg.start != cursor {
            return Err(Error::InvalidPlan(format!(
                "segment starting at {} leaves a gap or overlap at {}",
                seg.start, cursor
            )));
        }
        cursor = seg.end();
        if cursor > total {
            return Err(Error::InvalidPlan(format!("segments extend past N = {total}")));
        }
    }
    if cursor != total {
        return Err(Error::InvalidPlan(format!("segments cover [0, {cursor}) instead of [0, {total})")));
    }
    Ok(())
}

impl SegmentPlan {
    /// Validates the tiling and computes `pmax` on the default grid.
    pub fn new(n: u32, segments: Vec<Segment>) -> Result<Self> {
        Self::with_grid(n, segments, DEFAULT_PMAX_GRID)
    }

    pub fn with_grid(n: u32, segments: Vec<Segment>, grid: usize) -> Result<Self> {
        validate_tiling(n, &segments)?;
        let pmax = segments
            .iter()
            .map(|s| segment_max_abs(&s.coeffs, grid))
            .fold(0.0, f64::max);
        Ok(Self { n, segments, pmax })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1usize << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Number of segments `S`.
    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// `l_max`, the largest segment level.
    pub fn l_max(&self) -> u32 {
        self.segments.iter().map(Segment::level).max().unwrap_or(0)
    }

    /// Largest polynomial degree over all segments.
    pub fn degree(&self) -> usize {
        self.segments.iter().map(Segment::degree).max().unwrap_or(0)
    }

    pub fn pmax(&self) -> f64 {
        self.pmax
    }

    /// Number of distinct segment lengths.
    pub fn unique_sizes(&self) -> usize {
        let mut levels: Vec<u32> = self.segments.iter().map(Segment::level).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len()
    }

    /// Index `s_x` of the segment containing `x`.
    pub fn segment_of(&self, x: usize) -> usize {
        assert!(x < self.len(), "index {x} out of range");
        self.segments.partition_point(|s| s.end() <= x)
    }

    /// `p̃_{s_x}(t_x)`, the fitted (unrescaled) value at index `x`.
    pub fn value_at(&self, x: usize) -> f64 {
        let seg = &self.segments[self.segment_of(x)];
        seg.eval(seg.t_of(x))
    }

    /// All fitted values in index order.
    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for seg in &self.segments {
            out.extend((seg.start..seg.end()).map(|x| seg.eval(seg.t_of(x))));
        }
        out
    }

    /// The polynomials actually implemented, `p_i = (1 - margin) p̃_i / p̃_max`,
    /// as a plan whose `pmax` is `1 - margin`.
    pub fn rescaled(&self, margin: f64) -> Result<SegmentPlan> {
        if !(0.0..1.0).contains(&margin) {
            return Err(Error::InvalidParameter(format!("margin {margin} outside [0, 1)")));
        }
        if self.pmax <= 0.0 {
            return Err(Error::InvalidPlan("cannot rescale an identically zero plan".into()));
        }
        let scale = (1.0 - margin) / self.pmax;
        let segments = self
            .segments
            .iter()
            .map(|s| Segment::new(s.start, s.length, s.coeffs.iter().map(|c| c * scale).collect()))
            .collect();
        Ok(SegmentPlan { n: self.n, segments, pmax: 1.0 - margin })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_misaligned_segment() {
        let segs = vec![Segment::new(0, 2, vec![1.0]), Segment::new(2, 4, vec![1.0]), Segment::new(6, 2, vec![1.0])];
        assert!(matches!(SegmentPlan::new(3, segs), Err(Error::InvalidPlan(_))));
    }

    #[test]
    fn rejects_gap_and_non_power_of_two() {
        let gap = vec![Segment::new(0, 2, vec![1.0]), Segment::new(4, 4, vec![1.0])];
        assert!(SegmentPlan::new(3, gap).is_err());
        let odd = vec![Segment::new(0, 3, vec![1.0]), Segment::new(3, 1, vec![1.0])];
        assert!(SegmentPlan::new(2, odd).is_err());
    }

    #[test]
    fn segment_lookup_and_levels() {
        // l = 3, 1, 1, 2, 4 on N = 32
        let lens = [8usize, 2, 2, 4, 16];
        let mut start = 0;
        let mut segs = Vec::new();
        for &l in &lens {
            segs.push(Segment::new(start, l, vec![0.5]));
            start += l;
        }
        let plan = SegmentPlan::new(5, segs).unwrap();
        assert_eq!(plan.segment_count(), 5);
        assert_eq!(plan.l_max(), 4);
        assert_eq!(plan.unique_sizes(), 4);
        assert_eq!(plan.segment_of(0), 0);
        assert_eq!(plan.segment_of(9), 1);
        assert_eq!(plan.segment_of(12), 3);
        assert_eq!(plan.segment_of(31), 4);
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let plan = SegmentPlan::new(2, vec![Segment::new(0, 4, vec![0.1, 0.2])]).unwrap();
        let s = serde_json::to_string(&plan).unwrap();
        assert!(s.contains("\"pmax\""));
        let back: SegmentPlan = serde_json::from_str(&s).unwrap();
        assert_eq!(plan, back);
        let bad = r#"{"n":2,"segments":[{"start":0,"length":3,"coeffs":[1.0]}],"pmax":1.0}"#;
        assert!(serde_json::from_str::<SegmentPlan>(bad).is_err());
    }
}
