//! The piecewise exact linear diagonal block encoding.
//!
//! The encoding acts on a flag qubit `a`, an `l_max`-qubit register `k` and
//! the `n`-qubit index register `x`. Basis states are ordered as
//! `(a << (l_max + n)) | (k << n) | x`. Conjugating the carry kernel
//! `|a, k, x⟩ ↦ |a ⊕ carry(x, k, l_{s_x}), k, x⟩` by `X·H` on the flag and
//! Hadamards on `k` yields a Hermitian unitary whose flag-zero block is
//! `diag(1 - 2 (x mod L_{s_x}) / L_{s_x})`.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::plan::SegmentPlan;

/// Largest `n + l_max + 1` for which an explicit unitary is built.
pub const MAX_EXPLICIT_QUBITS: usize = 14;

/// Range of the encoded diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum EncodingVariant {
    /// `t_x = 1 - 2 r / L ∈ (-1, 1]`.
    #[default]
    Signed,
    /// Flag-qubit `X` and `H` removed: `t_x = 1 - r / L ∈ (0, 1]`.
    Unsigned,
}

/// Reference diagonal of the block encoding, held as exact rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalBlockEncoding {
    pub plan: SegmentPlan,
    pub variant: EncodingVariant,
    diag: Vec<Rational64>,
}

impl DiagonalBlockEncoding {
    /// Number of block-encoding flag qubits, `l_max + 1`.
    pub fn flag_qubits(&self) -> u32 {
        self.plan.l_max() + 1
    }

    pub fn exact(&self) -> &[Rational64] {
        &self.diag
    }

    /// The diagonal converted to floating point.
    pub fn diag(&self) -> Vec<f64> {
        self.diag.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Writes `x,t_x,segment_index` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "t_x", "segment_index"])?;
        for (x, t) in self.diag().iter().enumerate() {
            w.write_record([x.to_string(), format!("{t:.17e}"), self.plan.segment_of(x).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn reference_diagonal(plan: &SegmentPlan) -> DiagonalBlockEncoding {
    reference_diagonal_with(plan, EncodingVariant::Signed)
}

pub fn reference_diagonal_with(plan: &SegmentPlan, variant: EncodingVariant) -> DiagonalBlockEncoding {
    let mut diag = Vec::with_capacity(plan.len());
    for seg in plan.segments() {
        let len = seg.length as i64;
        for r in 0..len {
            let num = match variant {
                EncodingVariant::Signed => len - 2 * r,
                EncodingVariant::Unsigned => len - r,
            };
            diag.push(Rational64::new(num, len));
        }
    }
    DiagonalBlockEncoding { plan: plan.clone(), variant, diag }
}

/// 1 iff `(x mod 2^l) + (k mod 2^l) >= 2^l`.
pub fn carry_bit(x: u64, k: u64, l: u32) -> bool {
    if l == 0 {
        return false;
    }
    if l >= 64 {
        return (x as u128 + k as u128) >> 64 != 0;
    }
    let mask = (1u64 << l) - 1;
    (x & mask) + (k & mask) > mask
}

/// Carries `c_1..=c_{l_max}` of `x + k` from the majority ladder
/// `c_{l+1} = MAJ(x_l, k_l, c_l)` with `c_0 = 0`. Entry `l - 1` holds `c_l`.
pub fn ripple_carry_reference(x: u64, k: u64, l_max: u32) -> Vec<bool> {
    let mut carries = Vec::with_capacity(l_max as usize);
    let mut c = false;
    for l in 0..l_max {
        let xb = (x >> l) & 1 == 1;
        let kb = (k >> l) & 1 == 1;
        c = (xb & kb) | (xb & c) | (kb & c);
        carries.push(c);
    }
    carries
}

/// The block encoding as an explicit matrix. The index register is never
/// modified, so the full `2^{n + l_max + 1}` matrix is block diagonal in `x`
/// and is stored as one `2^{l_max + 1}` block per index value.
#[derive(Debug, Clone)]
pub struct ExplicitUnitary {
    pub n: u32,
    pub l_max: u32,
    blocks: Vec<DMatrix<Complex64>>,
}

impl ExplicitUnitary {
    /// Total dimension `2^{n + l_max + 1}`.
    pub fn dim(&self) -> usize {
        1usize << (self.n + self.l_max + 1)
    }

    /// Dimension of the per-index block over `(a, k)`.
    pub fn block_dim(&self) -> usize {
        1usize << (self.l_max + 1)
    }

    pub fn block(&self, x: usize) -> &DMatrix<Complex64> {
        &self.blocks[x]
    }

    /// Entry `⟨row| U |col⟩` of the full matrix.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        let mask = (1usize << self.n) - 1;
        let (xr, xc) = (row & mask, col & mask);
        if xr != xc {
            return Complex64::new(0.0, 0.0);
        }
        self.blocks[xr][(row >> self.n, col >> self.n)]
    }

    /// Dense full matrix; only sensible for a handful of qubits.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        let qubits = (self.n + self.l_max + 1) as usize;
        if qubits > 12 {
            return Err(Error::DimensionGuard { qubits, limit: 12 });
        }
        let d = self.dim();
        Ok(DMatrix::from_fn(d, d, |r, c| self.entry(r, c)))
    }

    /// `max |U - U†|` over all entries.
    pub fn hermiticity_error(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| max_abs_diff(b, &b.adjoint()))
            .fold(0.0, f64::max)
    }

    /// `max |U†U - I|` over all entries.
    pub fn unitarity_error(&self) -> f64 {
        let id = DMatrix::<Complex64>::identity(self.block_dim(), self.block_dim());
        self.blocks
            .iter()
            .map(|b| max_abs_diff(&(b.adjoint() * b), &id))
            .fold(0.0, f64::max)
    }
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max)
}

/// Applies a single-qubit gate on local qubit `q` to every column of `m`.
fn apply_left(m: &mut DMatrix<Complex64>, q: usize, g: [[f64; 2]; 2]) {
    let bit = 1usize << q;
    let rows = m.nrows();
    for mut col in m.column_iter_mut() {
        for r in 0..rows {
            if r & bit == 0 {
                let (v0, v1) = (col[r], col[r | bit]);
                col[r] = v0 * g[0][0] + v1 * g[0][1];
                col[r | bit] = v0 * g[1][0] + v1 * g[1][1];
            }
        }
    }
}

const S: f64 = std::f64::consts::FRAC_1_SQRT_2;
const HADAMARD: [[f64; 2]; 2] = [[S, S], [S, -S]];
/// `X · H`
const X_H: [[f64; 2]; 2] = [[S, -S], [S, S]];

/// Left-multiplies by the outer layer `A = (X·H or I) ⊗ H^{⊗ l_max}`.
fn apply_outer_layer(m: &mut DMatrix<Complex64>, l_max: u32, variant: EncodingVariant) {
    for q in 0..l_max as usize {
        apply_left(m, q, HADAMARD);
    }
    if variant == EncodingVariant::Signed {
        apply_left(m, l_max as usize, X_H);
    }
}

pub fn build_explicit_unitary(plan: &SegmentPlan) -> Result<ExplicitUnitary> {
    build_explicit_unitary_with(plan, EncodingVariant::Signed)
}

/// Builds `U = A · C · A†` where `C` is the carry-controlled flag flip.
pub fn build_explicit_unitary_with(plan: &SegmentPlan, variant: EncodingVariant) -> Result<ExplicitUnitary> {
    let n = plan.n();
    let l_max = plan.l_max();
    let qubits = (n + l_max + 1) as usize;
    if qubits > MAX_EXPLICIT_QUBITS {
        return Err(Error::DimensionGuard { qubits, limit: MAX_EXPLICIT_QUBITS });
    }
    let d = 1usize << (l_max + 1);
    let half = 1usize << l_max;
    let mut blocks = Vec::with_capacity(plan.len());
    for seg in plan.segments() {
        let l = seg.level();
        for x in seg.start..seg.end() {
            // C as a permutation matrix on (a, k)
            let mut c = DMatrix::<Complex64>::zeros(d, d);
            for col in 0..d {
                let (a, k) = (col / half, col % half);
                let a_out = a ^ usize::from(carry_bit(x as u64, k as u64, l));
                c[(a_out * half + k, col)] = Complex64::new(1.0, 0.0);
            }
            // P = A C, then U = P A† = (A P†)†
            apply_outer_layer(&mut c, l_max, variant);
            let mut q = c.adjoint();
            apply_outer_layer(&mut q, l_max, variant);
            blocks.push(q.adjoint());
        }
    }
    Ok(ExplicitUnitary { n, l_max, blocks })
}

/// Extracts the flag-zero diagonal `⟨0,0,x| U |0,0,x⟩`.
pub fn block_of(u: &ExplicitUnitary, plan: &SegmentPlan) -> Result<Vec<f64>> {
    if u.n != plan.n() || u.l_max != plan.l_max() {
        return Err(Error::InvalidPlan("unitary was not built from this plan's register sizes".into()));
    }
    u.blocks
        .iter()
        .enumerate()
        .map(|(x, b)| {
            let v = b[(0, 0)];
            if v.im.abs() > 1e-12 {
                Err(Error::InvalidParameter(format!(
                    "flag-zero entry at x = {x} has imaginary part {:.3e}",
                    v.im
                )))
            } else {
                Ok(v.re)
            }
        })
        .collect()
}
