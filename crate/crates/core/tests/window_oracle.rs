use std::f64::consts::PI;

use pqsvt::window::{
    bspline_normalization, grid_outcome, lemma2_bound, qpe_distribution, qpe_distribution_dft, tail_probability,
    tail_report, window_samples, QpeWindow,
};

/// Direct `O(N²)` DFT of the phase-kicked window, normalized.
fn naive_distribution(window: &QpeWindow, l: u32, e: f64) -> Vec<f64> {
    let w = window_samples(window, l).unwrap();
    let dim = w.len();
    let mut p: Vec<f64> = (0..dim)
        .map(|i| {
            let k = grid_outcome(l, i) as f64;
            let (mut re, mut im) = (0.0, 0.0);
            for (x, a) in w.iter().enumerate() {
                let ang = 2.0 * PI * (e - k) * x as f64 / dim as f64;
                re += a * ang.cos();
                im += a * ang.sin();
            }
            re * re + im * im
        })
        .collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}

#[test]
fn fft_matches_direct_sum() {
    for w in [QpeWindow::Rect, QpeWindow::Kaiser { beta: 7.5 }, QpeWindow::BSpline { m: 4 }] {
        for e in [0.0, 0.25, 0.5] {
            let fast = qpe_distribution_dft(&w, 7, e).unwrap();
            let slow = naive_distribution(&w, 7, e);
            let gap = fast.iter().zip(&slow).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(gap < 1e-12, "{w:?} e={e} gap {gap}");
        }
    }
}

#[test]
fn distributions_are_normalized_and_symmetric() {
    for w in [QpeWindow::Rect, QpeWindow::Kaiser { beta: 3.0 }, QpeWindow::BSpline { m: 8 }] {
        for l in [6, 9, 12] {
            for e in [0.0, 0.1, 0.37, 0.5] {
                let p = qpe_distribution(&w, l, e).unwrap();
                assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            }
            let centre = (1usize << (l - 1)) - 1;
            let p = qpe_distribution(&w, l, 0.0).unwrap();
            for k in 1..(1usize << (l - 1)) - 1 {
                assert!((p[centre + k] - p[centre - k]).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn unit_bspline_is_rectangular() {
    for e in [0.0, 0.2, 0.5] {
        let sampled = qpe_distribution_dft(&QpeWindow::BSpline { m: 1 }, 10, e).unwrap();
        let rect = qpe_distribution(&QpeWindow::Rect, 10, e).unwrap();
        let gap = sampled.iter().zip(&rect).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(gap < 1e-12, "e={e} gap {gap}");
        // the closed form is the continuum limit of the same kernel
        let closed = qpe_distribution(&QpeWindow::BSpline { m: 1 }, 10, e).unwrap();
        let gap = closed.iter().zip(&rect).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        assert!(gap < 5e-4, "e={e} closed-form gap {gap}");
    }
}

#[test]
fn normalization_approaches_gaussian_estimate() {
    for m in [8, 16, 32] {
        let nrm = bspline_normalization(m, 12).unwrap();
        assert!(nrm.relative_gap.abs() <= 0.05, "m={m} {nrm:?}");
    }
}

#[test]
fn tail_bound_dominates() {
    let mut last = 0.0;
    for m in [1, 2, 3, 4, 6, 8] {
        for e in [0.0, 0.25, 0.5] {
            let r = tail_report(&QpeWindow::BSpline { m }, 12, e, f64::from(m)).unwrap();
            let bound = lemma2_bound(m, r.normalization);
            assert!(r.delta <= bound, "m={m} e={e}: {} > {bound}", r.delta);
            if e == 0.0 {
                last = r.delta;
            }
        }
        assert!(last > 0.0);
    }
}

#[test]
fn wider_confidence_shrinks_tail() {
    let w = QpeWindow::Kaiser { beta: 10.0 };
    let mut prev = 1.0;
    for c in [1.0, 2.0, 4.0, 8.0, 16.0] {
        let t = tail_probability(&w, 10, 0.3, c).unwrap();
        assert!(t <= prev);
        prev = t;
    }
}
