use pqsvt::encoding::reference_diagonal;
use pqsvt::poly::{chebyshev_eval, chebyshev_interpolate, chebyshev_nodes};
use pqsvt::qsvt::{
    apply_piecewise_qsvt, qsvt_scalar, reference_transformed_diagonal, solve_phase_factors, SolverOptions,
};
use pqsvt::{PhaseFactorSet, Segment, SegmentPlan};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_phases_give_degree_d_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for d in 0..8 {
        let phases: Vec<f64> = (0..2 * d + 1).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let nodes = chebyshev_nodes(d + 1);
        let vals: Vec<f64> = nodes.iter().map(|&t| qsvt_scalar(&phases, t)).collect();
        let coeffs = chebyshev_interpolate(&vals);
        for i in 0..50 {
            let t = -1.0 + 2.0 * i as f64 / 49.0;
            let got = qsvt_scalar(&phases, t);
            assert!((got - chebyshev_eval(&coeffs, t)).abs() < 1e-11, "d={d} t={t}");
            assert!(got.abs() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn solved_phases_reproduce_polynomial_off_nodes() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for d in 1..=6 {
        let mut c: Vec<f64> = (0..=d).map(|k| rng.gen_range(-1.0..1.0) / (1 + k) as f64).collect();
        let peak = (0..400).map(|i| chebyshev_eval(&c, -1.0 + i as f64 / 199.5).abs()).fold(0.0, f64::max);
        c.iter_mut().for_each(|v| *v *= 0.9 / peak);
        let phases = solve_phase_factors(&c, d, 1e-9).unwrap();
        for i in 0..101 {
            let t = -1.0 + i as f64 / 50.0;
            assert!((qsvt_scalar(&phases, t) - chebyshev_eval(&c, t)).abs() < 1e-7, "d={d}");
        }
    }
}

fn random_plan(rng: &mut ChaCha8Rng, n: u32, max_segments: usize, d: usize) -> SegmentPlan {
    let total = 1usize << n;
    let mut segments = Vec::new();
    let mut rhs = total;
    while rhs > 0 {
        let remaining_budget = max_segments.saturating_sub(segments.len() + 1);
        let max_level = rhs.trailing_zeros();
        let level = if remaining_budget == 0 { max_level } else { rng.gen_range(0..=max_level) };
        let len = 1usize << level;
        let coeffs = (0..=d).map(|k| rng.gen_range(-1.0..1.0) / (1 + k * k) as f64).collect();
        segments.push(Segment::new(rhs - len, len, coeffs));
        rhs -= len;
    }
    segments.reverse();
    SegmentPlan::new(n, segments).unwrap()
}

#[test]
fn piecewise_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..8 {
        let d = rng.gen_range(1..=6);
        let n = rng.gen_range(3..=7);
        let plan = random_plan(&mut rng, n, 8, d).rescaled(1e-4).unwrap();
        let phases = PhaseFactorSet::solve(&plan, 1e-7, &SolverOptions::default()).unwrap();
        let got = apply_piecewise_qsvt(&reference_diagonal(&plan), &phases).unwrap();
        let want = reference_transformed_diagonal(&plan);
        let gap = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(gap <= 1e-6, "gap {gap}");
    }
}

#[test]
fn mismatched_phase_count_is_rejected() {
    let plan = SegmentPlan::new(2, vec![Segment::new(0, 2, vec![0.5]), Segment::new(2, 2, vec![0.5])]).unwrap();
    let phases = PhaseFactorSet::new(0, vec![vec![0.0]]).unwrap();
    assert!(apply_piecewise_qsvt(&reference_diagonal(&plan), &phases).is_err());
    assert!(PhaseFactorSet::new(1, vec![vec![0.0; 2]]).is_err());
    assert!(PhaseFactorSet::new(0, vec![vec![f64::NAN]]).is_err());
}

#[test]
fn phase_sets_round_trip_through_json() {
    let set = PhaseFactorSet::new(1, vec![vec![0.1, -0.2, 0.3], vec![1.0, 2.0, 3.0]]).unwrap();
    let text = serde_json::to_string(&set).unwrap();
    assert_eq!(serde_json::from_str::<PhaseFactorSet>(&text).unwrap(), set);
    assert!(serde_json::from_str::<PhaseFactorSet>(r#"{"d":1,"phases":[[0.0]]}"#).is_err());
}
