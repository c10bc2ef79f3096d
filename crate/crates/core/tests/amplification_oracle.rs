use pqsvt::prep::{aa_rounds_estimate, flagged_state, grover_2d};
use pqsvt::qsvt::SolverOptions;
use pqsvt::{PhaseFactorSet, Segment, SegmentPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Full state over `(flag, x)` with flag 0 good and flag 1 junk, amplified
/// by explicit reflections `-S_ψ S_good` applied `rounds` times.
fn amplify(good: &[f64], junk: &[f64], rounds: u64) -> (Vec<f64>, Vec<f64>) {
    let psi: Vec<f64> = good.iter().chain(junk).copied().collect();
    let half = good.len();
    let mut state = psi.clone();
    for _ in 0..rounds {
        for v in state.iter_mut().take(half) {
            *v = -*v;
        }
        let overlap: f64 = psi.iter().zip(&state).map(|(a, b)| a * b).sum();
        for (s, p) in state.iter_mut().zip(&psi) {
            *s = 2.0 * overlap * p - *s;
        }
    }
    let (g, j) = state.split_at(half);
    (g.to_vec(), j.to_vec())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[test]
fn full_space_amplification_matches_two_dimensional_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for n in 1..=5u32 {
        let dim = 1usize << n;
        let coeffs: Vec<f64> = (0..3).map(|_| rng.gen_range(-0.4..0.4)).collect();
        let plan = SegmentPlan::new(n, vec![Segment::new(0, dim, coeffs)]).unwrap().rescaled(0.05).unwrap();
        let phases = PhaseFactorSet::solve(&plan, 1e-10, &SolverOptions::default()).unwrap();
        let st = flagged_state(&plan, &phases, None).unwrap();
        // junk spread over the flag-one subspace, one amplitude per index
        let w = 1.0 / (dim as f64).sqrt();
        let junk: Vec<f64> = st.good.iter().map(|g| (w * w - g * g).max(0.0).sqrt()).collect();
        assert!((norm(&junk) - st.junk_norm).abs() < 1e-9);
        let a = st.success_amplitude();
        let est = aa_rounds_estimate(plan.pmax(), dim, a).unwrap();
        for k in 0..=est.rounds + 2 {
            let (g, j) = amplify(&st.good, &junk, k);
            let (g2d, j2d) = grover_2d(a, k);
            assert!((norm(&g) - g2d.abs()).abs() < 1e-10, "n={n} k={k}");
            assert!((norm(&j) - j2d.abs()).abs() < 1e-10);
            // direction inside the good subspace is unchanged
            let cos: f64 = g.iter().zip(&st.good).map(|(x, y)| x * y).sum::<f64>() / (norm(&g) * a);
            assert!((cos.abs() - 1.0).abs() < 1e-10);
        }
        let (g, _) = amplify(&st.good, &junk, est.rounds);
        assert!((norm(&g).powi(2) - est.post_success).abs() < 1e-10);
    }
}

#[test]
fn rounds_follow_the_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..500 {
        let a: f64 = rng.gen_range(1e-3..1.0);
        let est = aa_rounds_estimate(1.0, 4, a).unwrap();
        let k = (std::f64::consts::PI / (4.0 * a.asin()) - 0.5).round().max(0.0) as u64;
        assert_eq!(est.rounds, k);
        let (g, _) = grover_2d(a, k);
        assert!((g * g - est.post_success).abs() < 1e-12);
    }
}
