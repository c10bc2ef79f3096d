//! Chebyshev-basis polynomial helpers on `t ∈ [-1, 1]`.

use nalgebra::{DMatrix, DVector};

/// Evaluates `Σ c_k T_k(t)` with the Clenshaw recurrence.
pub fn chebyshev_eval(coeffs: &[f64], t: f64) -> f64 {
    match coeffs.len() {
        0 => 0.0,
        1 => coeffs[0],
        _ => {
            let two_t = 2.0 * t;
            let mut b1 = 0.0;
            let mut b2 = 0.0;
            for &c in coeffs[1..].iter().rev() {
                let b0 = two_t.mul_add(b1, c) - b2;
                b2 = b1;
                b1 = b0;
            }
            t.mul_add(b1, coeffs[0]) - b2
        }
    }
}

/// Chebyshev nodes of the first kind, `cos((2k+1)π/2n)`, in decreasing order.
pub fn chebyshev_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|k| ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * count) as f64).cos())
        .collect()
}

/// Interpolating coefficients from values sampled at [`chebyshev_nodes`].
pub fn chebyshev_interpolate(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    if n == 0 {
        return Vec::new();
    }
    let scale = 2.0 / n as f64;
    let mut coeffs: Vec<f64> = (0..n)
        .map(|j| {
            let s: f64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let angle = j as f64 * (2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
                    v * angle.cos()
                })
                .sum();
            scale * s
        })
        .collect();
    coeffs[0] *= 0.5;
    coeffs
}

/// Chebyshev–Vandermonde matrix with `degree + 1` columns.
pub(crate) fn vandermonde(ts: &[f64], degree: usize) -> DMatrix<f64> {
    let mut v = DMatrix::zeros(ts.len(), degree + 1);
    for (row, &t) in ts.iter().enumerate() {
        let mut prev = 1.0;
        let mut cur = t;
        v[(row, 0)] = 1.0;
        if degree >= 1 {
            v[(row, 1)] = t;
        }
        for k in 2..=degree {
            let next = 2.0 * t * cur - prev;
            v[(row, k)] = next;
            prev = cur;
            cur = next;
        }
    }
    v
}

/// Least-squares Chebyshev fit of `ys` at `ts`, solved through an SVD.
///
/// When there are no more points than unknowns the fit interpolates; the
/// returned vector always has `degree + 1` entries (trailing zeros when the
/// effective degree was capped at `ts.len() - 1`).
pub fn chebyshev_lstsq(ts: &[f64], ys: &[f64], degree: usize) -> Vec<f64> {
    assert_eq!(ts.len(), ys.len());
    let mut out = vec![0.0; degree + 1];
    if ts.is_empty() {
        return out;
    }
    let eff = degree.min(ts.len() - 1);
    let v = vandermonde(ts, eff);
    let rhs = DVector::from_column_slice(ys);
    let svd = v.svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-14)
        .expect("svd computed with both factors");
    out[..=eff].copy_from_slice(sol.as_slice());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_k(k: usize, t: f64) -> f64 {
        (k as f64 * t.acos()).cos()
    }

    #[test]
    fn clenshaw_matches_trig_definition() {
        let c = [0.3, -1.2, 0.5, 0.25, -0.125];
        for i in 0..=20 {
            let t = -1.0 + i as f64 / 10.0;
            let direct: f64 = c.iter().enumerate().map(|(k, ck)| ck * t_k(k, t)).sum();
            assert!((chebyshev_eval(&c, t) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolation_recovers_coefficients() {
        let c = [0.1, 0.2, -0.3, 0.4];
        let nodes = chebyshev_nodes(4);
        let vals: Vec<f64> = nodes.iter().map(|&t| chebyshev_eval(&c, t)).collect();
        let back = chebyshev_interpolate(&vals);
        for (a, b) in c.iter().zip(&back) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn lstsq_caps_degree_at_point_count() {
        let ts = [1.0, 0.0];
        let ys = [2.0, 5.0];
        let c = chebyshev_lstsq(&ts, &ys, 4);
        assert_eq!(c.len(), 5);
        assert!((chebyshev_eval(&c, 1.0) - 2.0).abs() < 1e-12);
        assert!((chebyshev_eval(&c, 0.0) - 5.0).abs() < 1e-12);
    }
}
