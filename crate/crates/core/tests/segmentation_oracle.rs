use nalgebra::{DMatrix, DVector};
use pqsvt::segmentation::{err_poly_approx, optimal_cuts_with_stats, segment_ts};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Least squares through the normal equations in the Chebyshev basis, with
/// `T_k(t) = cos(k arccos t)`.
fn normal_equations_fit(ys: &[f64], degree: usize) -> Vec<f64> {
    let ts = segment_ts(ys.len());
    let v = DMatrix::from_fn(ts.len(), degree + 1, |r, k| (k as f64 * ts[r].acos()).cos());
    let vt = v.transpose();
    let gram = &vt * &v;
    let rhs = &vt * DVector::from_column_slice(ys);
    gram.cholesky().expect("full column rank").solve(&rhs).iter().copied().collect()
}

#[test]
fn fitter_matches_normal_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let len = 1usize << rng.gen_range(3..=7);
        let degree = rng.gen_range(0..=4).min(len - 2);
        let ys: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (coeffs, err) = err_poly_approx(&ys, degree).unwrap();
        let oracle = normal_equations_fit(&ys, degree);
        for (a, b) in coeffs.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9, "{coeffs:?} vs {oracle:?}");
        }
        let ts = segment_ts(len);
        let resid = ts
            .iter()
            .zip(&ys)
            .map(|(t, y)| {
                let p: f64 = oracle.iter().enumerate().map(|(k, c)| c * (k as f64 * t.acos()).cos()).sum();
                (p - y).abs()
            })
            .fold(0.0, f64::max);
        assert!((err - resid).abs() < 1e-9);
    }
}

/// Fewest aligned power-of-two blocks covering `[0, N)` with every block
/// fit within `eps`, by dynamic programming over right edges.
fn brute_force_min(samples: &[f64], degree: usize, eps: f64) -> usize {
    let n = samples.len();
    let mut best = vec![usize::MAX; n + 1];
    best[0] = 0;
    for rhs in 1..=n {
        let mut len = 1;
        while len <= rhs {
            let lhs = rhs - len;
            if lhs % len == 0 && best[lhs] != usize::MAX {
                let ok = len == 1 || err_poly_approx(&samples[lhs..rhs], degree).unwrap().1 <= eps;
                if ok {
                    best[rhs] = best[rhs].min(best[lhs] + 1);
                }
            }
            len *= 2;
        }
    }
    best[n]
}

/// Random piecewise polynomial of degree `degree` with breakpoints anywhere.
fn piecewise(rng: &mut ChaCha8Rng, n: usize, degree: usize) -> Vec<f64> {
    let pieces = rng.gen_range(1..=4);
    let mut cuts: Vec<usize> = (0..pieces - 1).map(|_| rng.gen_range(1..n)).collect();
    cuts.push(0);
    cuts.push(n);
    cuts.sort_unstable();
    cuts.dedup();
    let mut out = vec![0.0; n];
    for w in cuts.windows(2) {
        let c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for (x, slot) in out.iter_mut().enumerate().take(w[1]).skip(w[0]) {
            let u = x as f64 / n as f64;
            *slot = c.iter().rev().fold(0.0, |acc, ci| acc * u + ci);
        }
    }
    out
}

#[test]
fn greedy_is_minimal_on_piecewise_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..200 {
        let n = 1usize << rng.gen_range(1..=6);
        let degree = rng.gen_range(0..=3);
        let samples = piecewise(&mut rng, n, degree);
        let (plan, stats) = optimal_cuts_with_stats(&samples, degree, 1e-9).unwrap();
        assert_eq!(plan.segment_count(), brute_force_min(&samples, degree, 1e-9), "{samples:?}");
        let bound = n * (n.trailing_zeros() as usize);
        assert!(stats.queries <= bound, "{} queries for N = {n}", stats.queries);
        for (seg, err) in plan.segments().iter().zip(&stats.errors) {
            assert!(*err <= 1e-9);
            assert_eq!(seg.start % seg.length, 0);
        }
    }
}

proptest! {
    #[test]
    fn plan_tiles_and_respects_eps(values in prop::collection::vec(-1.0f64..1.0, 32), eps in 1e-6f64..0.5, degree in 0usize..4) {
        let (plan, stats) = optimal_cuts_with_stats(&values, degree, eps).unwrap();
        prop_assert_eq!(plan.len(), 32);
        let mut cursor = 0;
        for (seg, err) in plan.segments().iter().zip(&stats.errors) {
            prop_assert_eq!(seg.start, cursor);
            prop_assert!(*err <= eps);
            cursor = seg.end();
        }
        prop_assert!(plan.segment_count() >= brute_force_min(&values, degree, eps));
    }
}
