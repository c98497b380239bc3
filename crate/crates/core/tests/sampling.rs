//! Metropolis walk, exact test and chi-square tail.

mod common;

use common::data;
use weakind::io::{read_model_file, read_table_csv};
use weakind::{
    chisq_sf, compute_basis, log_fiber_weight, mcmc_exact_test, BasisOptions, ContingencyTable, McmcParams,
    MetropolisChain, MinorSet, Move, Shape, Statistic, SuffStatMatrix,
};

/// Empirical state frequencies of a thinned walk on a 2x2 fiber, compared
/// with the normalized hypergeometric weights.
fn check_stationary(start: Vec<u64>, seed: u64) {
    let moves = vec![Move::new(vec![1, -1, -1, 1])];
    let n = start[0] + start[1];
    let m = start[0] + start[2];
    let states: Vec<Vec<u64>> = (0..=n.min(m))
        .filter(|&a| n >= a && m >= a && start.iter().sum::<u64>() + a >= n + m)
        .map(|a| vec![a, n - a, m - a, start.iter().sum::<u64>() + a - n - m])
        .collect();
    let weights: Vec<f64> = states
        .iter()
        .map(|s| log_fiber_weight(&ContingencyTable::new(Shape::new(2, 2), s.clone()).unwrap()).exp())
        .collect();
    let z: f64 = weights.iter().sum();

    let samples = 100_000usize;
    let mut walk = MetropolisChain::new(&moves, start, seed);
    for _ in 0..1000 {
        walk.step();
    }
    let mut hits = vec![0usize; states.len()];
    for _ in 0..samples {
        for _ in 0..10 {
            walk.step();
        }
        let k = states.iter().position(|s| s.as_slice() == walk.state()).expect("left the fiber");
        hits[k] += 1;
    }
    for (k, w) in weights.iter().enumerate() {
        let p = w / z;
        let freq = hits[k] as f64 / samples as f64;
        let se = (p * (1.0 - p) / samples as f64).sqrt();
        assert!((freq - p).abs() <= 3.0 * se, "state {:?}: {freq} vs {p}", states[k]);
    }
}

#[test]
fn two_state_fiber_is_uniform() {
    check_stationary(vec![1, 0, 0, 1], 11);
}

#[test]
fn three_state_fiber_matches_weights() {
    // margins (2,2) and (2,2): weights 1/4, 1, 1/4
    check_stationary(vec![2, 0, 0, 2], 12);
}

fn biostat() -> (SuffStatMatrix, weakind::MarkovBasis, ContingencyTable) {
    let model = read_model_file(data("models/ex3per3.json")).unwrap();
    let a = SuffStatMatrix::for_model(&model).unwrap();
    let basis = compute_basis(&a, BasisOptions::default()).unwrap();
    let h = read_table_csv(data("biostat.csv")).unwrap();
    (a, basis, h)
}

#[test]
fn same_seed_same_p_value() {
    let (a, basis, h) = biostat();
    for chains in [1, 3] {
        let params = McmcParams { samples: 2000, burn_in: 1000, thinning: 5, seed: 42, chains };
        let x = mcmc_exact_test(&a, &basis, &h, Statistic::C2, params).unwrap();
        let y = mcmc_exact_test(&a, &basis, &h, Statistic::C2, params).unwrap();
        assert_eq!(x.p_value.to_bits(), y.p_value.to_bits());
        assert_eq!(x.acceptance_rate.to_bits(), y.acceptance_rate.to_bits());
    }
}

#[test]
fn p_value_bounds_and_errors() {
    let (a, basis, h) = biostat();
    let params = McmcParams { samples: 500, burn_in: 100, thinning: 2, seed: 3, chains: 2 };
    for stat in [Statistic::C2, Statistic::G2] {
        let r = mcmc_exact_test(&a, &basis, &h, stat, params).unwrap();
        assert!(r.p_value > 0.0 && r.p_value <= 1.0);
        assert!(r.std_error > 0.0 && r.std_error < 0.05);
        assert!(r.acceptance_rate > 0.0 && r.acceptance_rate <= 1.0);
    }
    let bad = McmcParams { thinning: 0, ..params };
    assert!(mcmc_exact_test(&a, &basis, &h, Statistic::C2, bad).is_err());
    let wrong =
        weakind::MarkovBasis { shape: a.shape(), moves: vec![Move::new(vec![1, -1, 0, 0, 0, 0, 0, 0, 0])] };
    assert!(mcmc_exact_test(&a, &wrong, &h, Statistic::C2, params).is_err());
}

#[test]
fn singleton_fiber_has_p_one() {
    let shape = Shape::new(2, 3);
    let a = SuffStatMatrix::for_model(&MinorSet::validate(shape, &[]).unwrap()).unwrap();
    let basis = compute_basis(&a, BasisOptions::default()).unwrap();
    let h = ContingencyTable::new(shape, vec![1, 2, 3, 4, 5, 6]).unwrap();
    let r = mcmc_exact_test(&a, &basis, &h, Statistic::G2, McmcParams::default()).unwrap();
    assert_eq!(r.p_value, 1.0);
}

/// Composite Simpson rule on `[0, b]` with `steps` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, b: f64, steps: usize) -> f64 {
    let h = b / steps as f64;
    let mut acc = f(0.0) + f(b);
    for k in 1..steps {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// `Γ(df / 2)` from `Γ(1/2) = √π` and `Γ(1) = 1` by the recurrence.
fn half_gamma(df: usize) -> f64 {
    let (mut g, mut s) = if df % 2 == 1 { (std::f64::consts::PI.sqrt(), 0.5) } else { (1.0, 1.0) };
    while s < df as f64 / 2.0 {
        g *= s;
        s += 1.0;
    }
    g
}

/// Upper tail by integrating the density after substituting `t = u²`, which
/// removes the singularity at zero for `df = 1`.
fn tail_by_quadrature(x: f64, df: usize) -> f64 {
    let k = df as f64 / 2.0;
    let c = 1.0 / (2f64.powf(k) * half_gamma(df));
    let f = |u: f64| {
        let t = u * u;
        2.0 * u * c * t.powf(k - 1.0) * (-t / 2.0).exp()
    };
    let g = |u: f64| if u == 0.0 && df == 1 { 2.0 * c } else { f(u) };
    1.0 - simpson(g, x.sqrt(), 20_000)
}

#[test]
fn chisq_tail_against_quadrature() {
    assert!((chisq_sf(3.841459, 1) - 0.05).abs() < 1e-6);
    assert!((chisq_sf(3.841459, 1) - tail_by_quadrature(3.841459, 1)).abs() < 1e-10);
    for df in 1..=12 {
        for x in [0.1, 0.5, 1.0, 2.5, 4.0, 7.5, 12.0, 20.0] {
            let q = tail_by_quadrature(x, df);
            assert!((chisq_sf(x, df) - q).abs() < 1e-10, "df {df} x {x}: {} vs {q}", chisq_sf(x, df));
        }
    }
    assert!((chisq_sf(2.0, 2) - (-1.0f64).exp()).abs() < 1e-9);
}

#[test]
fn chisq_tail_is_monotone() {
    for df in 1..=30 {
        let mut prev = chisq_sf(0.0, df);
        assert_eq!(prev, 1.0);
        for k in 1..=400 {
            let p = chisq_sf(k as f64 * 0.25, df);
            assert!(p <= prev && (0.0..=1.0).contains(&p), "df {df} at {}", k as f64 * 0.25);
            prev = p;
        }
    }
}
