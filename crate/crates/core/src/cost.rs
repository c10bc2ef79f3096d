//! Toffoli and qubit counts for the block encoding, the piecewise QSVT
//! circuit and amplitude-amplified state preparation.
//!
//! Uncomputation Toffolis are not counted. A multi-controlled Z on `m`
//! qubits is costed as `m - 1` Toffolis (standard ladder); that convention
//! lives in [`mcz_toffoli`] only.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which block-encoding construction is costed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BeVariant {
    /// Variable unary iteration over all `S` segments.
    General,
    /// All segments share one size (or `S = 1`): a single Toffoli copies the carry.
    UniformSizes,
    /// Only `k` distinct segment sizes; unary iteration over size labels.
    KUnique(u64),
}

impl fmt::Display for BeVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BeVariant::General => write!(f, "general"),
            BeVariant::UniformSizes => write!(f, "uniform"),
            BeVariant::KUnique(k) => write!(f, "unique:{k}"),
        }
    }
}

impl FromStr for BeVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "general" => Ok(BeVariant::General),
            "uniform" => Ok(BeVariant::UniformSizes),
            _ => {
                let k = s
                    .strip_prefix("unique:")
                    .and_then(|k| k.parse::<u64>().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown block-encoding variant \"{s}\"")))?;
                Ok(BeVariant::KUnique(k))
            }
        }
    }
}

/// Toffolis for one application of the block encoding.
pub fn be_toffoli(s: u64, l_max: u64, variant: BeVariant) -> Result<u64> {
    if s == 0 || l_max == 0 {
        return Err(Error::InvalidParameter("need S >= 1 and l_max >= 1".into()));
    }
    match variant {
        _ if s == 1 => Ok(l_max + 1),
        BeVariant::General => Ok(l_max + 2 * s - 1),
        BeVariant::UniformSizes => Ok(l_max + 1),
        BeVariant::KUnique(k) => {
            if k == 0 || k > s {
                return Err(Error::InvalidParameter(format!("{k} unique sizes with {s} segments")));
            }
            Ok(l_max + 2 * k - 1)
        }
    }
}

/// Toffolis for one run of the piecewise QSVT circuit:
/// `(2d+1)(log 1/ε - 1) + 2(S-2) + 2d(l_max+1) + 2d·BE`.
///
/// The phase-loading term is clamped at zero for `S = 1`, where no unary
/// iteration is needed.
pub fn qsvt_toffoli(d: u64, s: u64, l_max: u64, log_inv_eps: u64, variant: BeVariant) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidParameter("QSVT degree must be at least 1".into()));
    }
    if log_inv_eps < 2 {
        return Err(Error::InvalidParameter("log(1/eps) must be at least 2".into()));
    }
    let be = be_toffoli(s, l_max, variant)?;
    Ok((2 * d + 1) * (log_inv_eps - 1) + 2 * s.saturating_sub(2) + 2 * d * (l_max + 1) + 2 * d * be)
}

/// `2n + 2 l_max + (2d+1) log(1/ε) + 5`.
pub fn total_qubits(n: u64, d: u64, l_max: u64, log_inv_eps: u64) -> u64 {
    2 * n + 2 * l_max + (2 * d + 1) * log_inv_eps + 5
}

/// Toffolis of an `m`-controlled Z.
pub fn mcz_toffoli(controls: u64) -> u64 {
    controls.saturating_sub(1)
}

/// Inputs to a full preparation cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostParams {
    pub n: u64,
    pub d: u64,
    pub s: u64,
    pub l_max: u64,
    pub log_inv_eps: u64,
    pub aa_rounds: u64,
    pub variant: BeVariant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub toffoli_qsvt: u64,
    pub toffoli_per_be: u64,
    pub toffoli_total_with_aa: u64,
    pub qubits_total: u64,
    pub params: CostParams,
}

impl ResourceEstimate {
    pub fn new(params: CostParams) -> Result<Self> {
        let p = params;
        let toffoli_qsvt = qsvt_toffoli(p.d, p.s, p.l_max, p.log_inv_eps, p.variant)?;
        let toffoli_per_be = be_toffoli(p.s, p.l_max, p.variant)?;
        let mut est = Self {
            toffoli_qsvt,
            toffoli_per_be,
            toffoli_total_with_aa: 0,
            qubits_total: total_qubits(p.n, p.d, p.l_max, p.log_inv_eps),
            params,
        };
        est.toffoli_total_with_aa = prep_total_toffoli(&est, p.aa_rounds, p.n);
        Ok(est)
    }
}

/// QSVT runs `2A` times (once when `A = 0`) plus `A` reflections on the
/// `l_max + 2` flag qubits and `A` on all `n + l_max + 2` qubits.
pub fn prep_total_toffoli(estimate: &ResourceEstimate, aa_rounds: u64, n: u64) -> u64 {
    let l_max = estimate.params.l_max;
    let runs = (2 * aa_rounds).max(1);
    runs * estimate.toffoli_qsvt + aa_rounds * (mcz_toffoli(l_max + 2) + mcz_toffoli(n + l_max + 2))
}

/// Writes one CSV row per parameter set:
/// `n,d,S,l_max,log_inv_eps,variant,toffoli,qubits`.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[ResourceEstimate]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "d", "S", "l_max", "log_inv_eps", "variant", "toffoli", "qubits"])?;
    for e in rows {
        let p = e.params;
        w.write_record([
            p.n.to_string(),
            p.d.to_string(),
            p.s.to_string(),
            p.l_max.to_string(),
            p.log_inv_eps.to_string(),
            p.variant.to_string(),
            e.toffoli_total_with_aa.to_string(),
            e.qubits_total.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
