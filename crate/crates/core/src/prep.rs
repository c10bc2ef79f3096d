//! State preparation from a transformed block encoding, with amplitude
//! amplification modelled on the two-dimensional good/junk subspace.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::amplitudes::{l2_norm, AmplitudeVector};
use crate::encoding::reference_diagonal;
use crate::error::{Error, Result};
use crate::plan::SegmentPlan;
use crate::qsvt::{apply_piecewise_qsvt, PhaseFactorSet, SolverOptions};

/// Above this value of `p̃_max √N` the polynomials spend most of their
/// range away from the sampled amplitudes and the success amplitude
/// collapses; reports flag such plans.
pub const INEFFICIENT_PMAX_SQRT_N: f64 = 10.0;

/// Good-state norms at or below this are indistinguishable from roundoff.
pub const ZERO_GOOD_NORM: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrepReport {
    pub fidelity: f64,
    pub success_amplitude: f64,
    pub aa_rounds: u64,
    pub post_aa_success: f64,
    #[serde(rename = "pmax_sqrtN")]
    pub pmax_sqrt_n: f64,
    pub inefficient: bool,
    pub segments: usize,
    pub l_max: u32,
    pub degree: usize,
}

impl PrepReport {
    pub fn write_csv_header<W: Write>(w: &mut csv::Writer<W>) -> Result<()> {
        w.write_record([
            "fidelity",
            "success_amplitude",
            "aa_rounds",
            "post_aa_success",
            "pmax_sqrtN",
            "inefficient",
            "segments",
            "l_max",
            "degree",
        ])?;
        Ok(())
    }

    pub fn write_csv_row<W: Write>(&self, w: &mut csv::Writer<W>) -> Result<()> {
        w.write_record([
            self.fidelity.to_string(),
            self.success_amplitude.to_string(),
            self.aa_rounds.to_string(),
            self.post_aa_success.to_string(),
            self.pmax_sqrt_n.to_string(),
            self.inefficient.to_string(),
            self.segments.to_string(),
            self.l_max.to_string(),
            self.degree.to_string(),
        ])?;
        Ok(())
    }
}

/// Flag-zero component of the prepared state and the norm of everything else.
#[derive(Debug, Clone, PartialEq)]
pub struct FlaggedState {
    pub good: Vec<f64>,
    pub junk_norm: f64,
}

impl FlaggedState {
    pub fn success_amplitude(&self) -> f64 {
        l2_norm(&self.good)
    }
}

/// Applies the transformed block encoding to `prior` (uniform when `None`).
pub fn flagged_state(
    plan: &SegmentPlan,
    phases: &PhaseFactorSet,
    prior: Option<&AmplitudeVector>,
) -> Result<FlaggedState> {
    let diag = apply_piecewise_qsvt(&reference_diagonal(plan), phases)?;
    let good: Vec<f64> = match prior {
        None => {
            let w = 1.0 / (diag.len() as f64).sqrt();
            diag.iter().map(|p| w * p).collect()
        }
        Some(c) => {
            check_prior(c, diag.len())?;
            diag.iter().zip(&c.values).map(|(p, c)| p * c).collect()
        }
    };
    let g2: f64 = good.iter().map(|g| g * g).sum();
    Ok(FlaggedState { good, junk_norm: (1.0 - g2).max(0.0).sqrt() })
}

fn check_prior(prior: &AmplitudeVector, dim: usize) -> Result<()> {
    if prior.len() != dim {
        return Err(Error::InvalidParameter(format!("prior has {} entries, expected {dim}", prior.len())));
    }
    let norm = l2_norm(&prior.values);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("prior norm {norm} is not 1")));
    }
    Ok(())
}

/// Ratios `a_x / c_x` to fit when preparing `target` on top of `prior`.
/// Entries where both vanish are zero.
pub fn prior_ratio(target: &AmplitudeVector, prior: &AmplitudeVector) -> Result<Vec<f64>> {
    if target.len() != prior.len() {
        return Err(Error::InvalidParameter("prior and target lengths differ".into()));
    }
    target
        .values
        .iter()
        .zip(&prior.values)
        .enumerate()
        .map(|(x, (&a, &c))| match (a == 0.0, c == 0.0) {
            (_, false) => Ok(a / c),
            (true, true) => Ok(0.0),
            (false, true) => Err(Error::InvalidTarget(format!("prior vanishes at {x} where the target does not"))),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AaEstimate {
    pub rounds: u64,
    pub post_success: f64,
    /// The cruder `p̃_max √N` predictor of the round count.
    pub pmax_sqrt_n: f64,
}

/// `k = round(π / (4 arcsin a) - 1/2)`, never negative.
pub fn aa_rounds_estimate(pmax: f64, dim: usize, success_amplitude: f64) -> Result<AaEstimate> {
    let a = success_amplitude;
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidParameter(format!("success amplitude {a} outside (0, 1]")));
    }
    let theta = a.asin();
    let k = (std::f64::consts::PI / (4.0 * theta) - 0.5).round().max(0.0);
    Ok(AaEstimate {
        rounds: k as u64,
        post_success: ((2.0 * k + 1.0) * theta).sin().powi(2),
        pmax_sqrt_n: pmax * (dim as f64).sqrt(),
    })
}

/// Runs `rounds` Grover iterates (flip the good component, then reflect
/// about the initial state) on the `(good, junk)` amplitude pair.
pub fn grover_2d(success_amplitude: f64, rounds: u64) -> (f64, f64) {
    let a = success_amplitude;
    let b = (1.0 - a * a).max(0.0).sqrt();
    let (mut g, mut j) = (a, b);
    for _ in 0..rounds {
        g = -g;
        let overlap = a * g + b * j;
        g = 2.0 * overlap * a - g;
        j = 2.0 * overlap * b - j;
    }
    (g, j)
}

/// `|⟨target, good / ‖good‖⟩|` for the uniform prior.
pub fn prepared_fidelity(plan: &SegmentPlan, phases: &PhaseFactorSet, target: &AmplitudeVector) -> Result<f64> {
    let state = flagged_state(plan, phases, None)?;
    fidelity_of(&state.good, target)
}

pub(crate) fn fidelity_of(good: &[f64], target: &AmplitudeVector) -> Result<f64> {
    if good.len() != target.len() {
        return Err(Error::InvalidParameter("target length does not match the plan".into()));
    }
    let norm = l2_norm(good);
    if norm.is_nan() || norm <= ZERO_GOOD_NORM {
        return Err(Error::ZeroGoodState);
    }
    let overlap: f64 = good.iter().zip(&target.values).map(|(g, t)| g * t).sum();
    Ok((overlap / norm).abs().min(1.0))
}

#[derive(Debug, Clone)]
pub struct PrepOptions {
    pub tau: f64,
    pub solver: SolverOptions,
}

impl Default for PrepOptions {
    fn default() -> Self {
        Self { tau: 1e-7, solver: SolverOptions::default() }
    }
}

/// Everything produced by one preparation run.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub report: PrepReport,
    pub plan: SegmentPlan,
    pub phases: PhaseFactorSet,
    pub state: FlaggedState,
}

/// Rescales `fitted`, solves its phases, applies them to `prior` and
/// scores the result against `target`.
///
/// `fitted` approximates the target amplitudes (or `a_x / c_x` under a
/// prior); its `pmax` is `p̃_max` in those units.
pub fn prepare(
    fitted: &SegmentPlan,
    target: &AmplitudeVector,
    prior: Option<&AmplitudeVector>,
    opts: &PrepOptions,
) -> Result<Prepared> {
    let plan = fitted.rescaled(opts.solver.margin)?;
    let phases = PhaseFactorSet::solve(&plan, opts.tau, &opts.solver)?;
    let state = flagged_state(&plan, &phases, prior)?;
    let fidelity = fidelity_of(&state.good, target)?;
    let a = state.success_amplitude().min(1.0);
    let aa = aa_rounds_estimate(fitted.pmax(), fitted.len(), a)?;
    let report = PrepReport {
        fidelity,
        success_amplitude: a,
        aa_rounds: aa.rounds,
        post_aa_success: aa.post_success,
        pmax_sqrt_n: aa.pmax_sqrt_n,
        inefficient: aa.pmax_sqrt_n > INEFFICIENT_PMAX_SQRT_N,
        segments: plan.segment_count(),
        l_max: plan.l_max(),
        degree: plan.degree(),
    };
    Ok(Prepared { report, plan, phases, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::Segment;

    fn single(n: u32, coeffs: Vec<f64>) -> SegmentPlan {
        SegmentPlan::new(n, vec![Segment::new(0, 1 << n, coeffs)]).unwrap()
    }

    #[test]
    fn rounds_examples() {
        assert_eq!(aa_rounds_estimate(1.0, 4, 1.0).unwrap().rounds, 0);
        let half = aa_rounds_estimate(1.0, 4, 0.5).unwrap();
        assert_eq!(half.rounds, 1);
        assert!((half.post_success - 1.0).abs() < 1e-12);
        let tenth = aa_rounds_estimate(1.0, 4, 0.1).unwrap();
        assert_eq!(tenth.rounds, 7);
        assert!((tenth.post_success - (15.0 * 0.1f64.asin()).sin().powi(2)).abs() < 1e-15);
        assert!(tenth.post_success > 0.99);
        assert!(aa_rounds_estimate(1.0, 4, 0.0).is_err());
        assert!(aa_rounds_estimate(1.0, 4, 1.5).is_err());
    }

    #[test]
    fn grover_matches_closed_form() {
        let a: f64 = 0.13;
        let theta = a.asin();
        for k in 0..10 {
            let (g, j) = grover_2d(a, k);
            let want = ((2 * k + 1) as f64 * theta).sin();
            assert!((g.abs() - want.abs()).abs() < 1e-12);
            assert!((g * g + j * j - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_polynomial_flagged_state() {
        let plan = single(2, vec![0.0, 1.0]);
        let opts = SolverOptions { margin: 0.0, ..Default::default() };
        let phases = PhaseFactorSet::solve(&plan, 1e-10, &opts).unwrap();
        let st = flagged_state(&plan, &phases, None).unwrap();
        let want = [0.5, 0.25, 0.0, -0.25];
        for (g, w) in st.good.iter().zip(want) {
            assert!((g - w).abs() < 1e-9, "{g} vs {w}");
        }
        let j2 = 1.0 - (1.0 + 0.25 + 0.0 + 0.25) / 4.0;
        assert!((st.junk_norm.powi(2) - j2).abs() < 1e-9);
    }

    #[test]
    fn zero_good_state_is_an_error() {
        let plan = single(2, vec![0.0]);
        let phases = PhaseFactorSet::new(0, vec![vec![std::f64::consts::FRAC_PI_2]]).unwrap();
        // a lone rotation by π/2 has a zero top-left entry
        let target = AmplitudeVector::uniform(2);
        assert!(matches!(prepared_fidelity(&plan, &phases, &target), Err(Error::ZeroGoodState)));
    }

    #[test]
    fn prior_ratio_rejects_unsupported_prior() {
        let a = AmplitudeVector::from_raw(vec![1.0, 1.0]).unwrap();
        let c = AmplitudeVector::from_raw(vec![1.0, 0.0]).unwrap();
        assert!(prior_ratio(&a, &c).is_err());
        let r = prior_ratio(&c, &c).unwrap();
        assert_eq!(r, vec![1.0, 0.0]);
    }

    #[test]
    fn report_json_uses_spec_key() {
        let r = PrepReport {
            fidelity: 1.0,
            success_amplitude: 0.5,
            aa_rounds: 1,
            post_aa_success: 1.0,
            pmax_sqrt_n: 2.0,
            inefficient: false,
            segments: 1,
            l_max: 2,
            degree: 0,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"pmax_sqrtN\":2.0"));
        assert_eq!(serde_json::from_str::<PrepReport>(&s).unwrap(), r);
    }
}
