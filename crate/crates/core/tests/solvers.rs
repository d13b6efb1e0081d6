mod common;

use std::sync::Arc;

use common::*;
use rand::Rng;
use sik_core::operators::{
    compose, estimate_spectral_bound, make_blur_operator, make_haar_operator, materialize,
    Boundary, DenseMatrix, Identity, LinearOperator,
};
use sik_core::solvers::{
    entropy_weights, evaluate_cost, iwsta_step, soft_threshold, solve, strategy_weights, Problem,
    SolverConfig, Strategy, WeightVector,
};

#[test]
fn soft_threshold_matches_grid_prox() {
    let mut rng = rng(21);
    for _ in 0..200 {
        let v = rng.gen_range(-5.0..5.0);
        let theta = rng.gen_range(0.0..3.0);
        let got = soft_threshold(&[v], &[theta]).unwrap()[0];
        assert!((got - prox_grid(v, theta, 1e-4)).abs() <= 1e-4, "v={v} θ={theta}");
    }
    assert_eq!(soft_threshold(&[5.0, -1.0], &[2.0, 2.0]).unwrap(), vec![3.0, 0.0]);
}

#[test]
fn entropy_weights_two_coordinates() {
    let w = entropy_weights(&[1.0, 2.0], 1.0).unwrap();
    let e = (-1.0f64).exp();
    assert!((w.as_slice()[0] - 1.0 / (1.0 + e)).abs() < 1e-10);
    assert!((w.as_slice()[1] - e / (1.0 + e)).abs() < 1e-10);
    // brute-force grid over the 1-simplex, step 1e-5
    let (mut best_w1, mut best_g) = (0.0, f64::INFINITY);
    for i in 0..=100_000 {
        let w1 = i as f64 * 1e-5;
        let g = g_gamma(&[1.0, 2.0], &[w1, 1.0 - w1], 1.0);
        if g < best_g {
            best_g = g;
            best_w1 = w1;
        }
    }
    assert!((w.as_slice()[0] - best_w1).abs() <= 1e-5);
}

#[test]
fn entropy_weights_match_simplex_grid_in_3d() {
    let mut rng = rng(22);
    for gamma in [0.1, 1.0, 10.0] {
        for _ in 0..10 {
            let x = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let w = entropy_weights(&x, gamma).unwrap();
            let oracle = simplex_grid_3(&x, gamma);
            for i in 0..3 {
                assert!((w.as_slice()[i] - oracle[i]).abs() <= 2e-5, "x={x:?} γ={gamma}");
            }
        }
    }
}

#[test]
fn small_gamma_concentrates_on_smallest() {
    let w = entropy_weights(&[4.0, -1.0, 5.0], 1e-6).unwrap();
    assert!(w.as_slice()[0].abs() < 1e-9);
    assert!((w.as_slice()[1] - 1.0).abs() < 1e-9);
    assert!(w.as_slice()[2].abs() < 1e-9);
}

#[test]
fn decreasing_gamma_concentrates_monotonically() {
    let x = [0.8, -0.3, 0.35, 2.0, -0.31];
    let mut prev = 0.0;
    for e in 1..=8 {
        let w = entropy_weights(&x, 10f64.powi(-e)).unwrap().as_slice()[1];
        assert!(w > prev || (w == 1.0 && prev == 1.0), "γ=1e-{e}: {w} after {prev}");
        prev = w;
    }
    assert!((prev - 1.0).abs() < 1e-12);
}

#[test]
fn cost_matches_dense_recomputation() {
    let mut rng = rng(23);
    let a = random_dense(&mut rng, 6, 9);
    let b = random_vec(&mut rng, 6);
    let x = random_vec(&mut rng, 9);
    let problem = Problem::new(Arc::new(a.clone()), b.clone()).unwrap();
    let (beta, gamma) = (0.7, 0.3);

    let w = entropy_weights(&x, gamma).unwrap();
    let got = evaluate_cost(&x, &w, &problem, beta, gamma).unwrap();
    let mut resid = 0.0;
    for r in 0..6 {
        let ax: f64 = (0..9).map(|c| a.get(r, c) * x[c]).sum();
        resid += (ax - b[r]).powi(2);
    }
    let want = 0.5 * resid + beta * g_gamma(&x, w.as_slice(), gamma);
    assert!((got.total - want).abs() < 1e-10);

    let wb = WeightVector::new(random_vec(&mut rng, 9).iter().map(|v| v.abs()).collect()).unwrap();
    let got = evaluate_cost(&x, &wb, &problem, beta, gamma).unwrap();
    let l1: f64 = x.iter().zip(wb.as_slice()).map(|(xi, wi)| wi * xi.abs()).sum();
    assert!((got.total - (0.5 * resid + beta * l1)).abs() < 1e-10);
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = rng(24);
    for trial in 0..10 {
        let a = random_dense(&mut rng, 15, 20);
        let b = random_vec(&mut rng, 15);
        let x = random_vec(&mut rng, 20);
        let problem = Problem::new(Arc::new(a), b).unwrap();
        let grad = problem.gradient(&x).unwrap();
        let h = 1e-5;
        let fd: Vec<f64> = (0..20)
            .map(|i| {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                (problem.data_fidelity(&xp).unwrap() - problem.data_fidelity(&xm).unwrap()) / (2.0 * h)
            })
            .collect();
        let rel = max_abs_diff(&grad, &fd) / norm(&grad);
        assert!(rel < 1e-6, "trial {trial}: {rel}");
    }
}

#[test]
fn step_hand_value_agrees_with_prox_oracle() {
    let problem = Problem::new(Identity::shared(2), vec![5.0, -1.0]).unwrap();
    let w = WeightVector::new(vec![1.0, 1.0]).unwrap();
    let x = iwsta_step(&[0.0, 0.0], &w, &problem, 1.0, 2.0).unwrap();
    assert_eq!(x, vec![3.0, 0.0]);
    assert!((prox_grid(5.0, 2.0, 1e-4) - 3.0).abs() <= 1e-4);
    assert!(prox_grid(-1.0, 2.0, 1e-4).abs() <= 1e-4);
}

/// `f(x | xk) + β Σ wᵢ|xᵢ|` with `f` the quadratic majorizer of the data term.
fn majorizer(problem: &Problem, x: &[f64], xk: &[f64], w: &WeightVector, l: f64, beta: f64) -> f64 {
    let fk = problem.data_fidelity(xk).unwrap();
    let g = problem.gradient(xk).unwrap();
    let d: Vec<f64> = x.iter().zip(xk).map(|(a, b)| a - b).collect();
    let l1: f64 = x.iter().zip(w.as_slice()).map(|(xi, wi)| wi * xi.abs()).sum();
    fk + dot(&g, &d) + 0.5 * l * dot(&d, &d) + beta * l1
}

#[test]
fn majorizer_dominates_and_step_minimizes_it() {
    let mut rng = rng(25);
    for _ in 0..20 {
        let a = random_dense(&mut rng, 12, 16);
        let b = random_vec(&mut rng, 12);
        let problem = Problem::new(Arc::new(a.clone()), b).unwrap();
        let l = estimate_spectral_bound(&a, 1e-9, 1000, 1).unwrap().lipschitz(1.01);
        let zero = WeightVector::new(vec![0.0; 16]).unwrap();
        for _ in 0..10 {
            let xk = random_vec(&mut rng, 16);
            let x: Vec<f64> = random_vec(&mut rng, 16).iter().map(|v| 3.0 * v).collect();
            let f = problem.data_fidelity(&x).unwrap();
            assert!(majorizer(&problem, &x, &xk, &zero, l, 0.0) >= f - 1e-12);
        }
        let xk = random_vec(&mut rng, 16);
        let w = entropy_weights(&xk, 0.5).unwrap();
        let next = iwsta_step(&xk, &w, &problem, l, 2.0).unwrap();
        let at_next = majorizer(&problem, &next, &xk, &w, l, 2.0);
        assert!(at_next <= majorizer(&problem, &xk, &xk, &w, l, 2.0) + 1e-12);
        // exact minimizer: no random perturbation does better
        for _ in 0..50 {
            let probe: Vec<f64> = next.iter().map(|v| v + 0.01 * rng.gen_range(-1.0..1.0)).collect();
            assert!(at_next <= majorizer(&problem, &probe, &xk, &w, l, 2.0) + 1e-12);
        }
    }
}

#[test]
fn fixed_point_is_stable() {
    let mut rng = rng(26);
    let a = random_dense(&mut rng, 30, 10);
    let b = random_vec(&mut rng, 30);
    let problem = Problem::new(Arc::new(a.clone()), b).unwrap();
    let l = estimate_spectral_bound(&a, 1e-12, 10_000, 0).unwrap().lipschitz(1.01);
    let w = WeightVector::new(vec![1.0; 10]).unwrap();
    let mut x = vec![0.0; 10];
    for _ in 0..20_000 {
        x = iwsta_step(&x, &w, &problem, l, 0.5).unwrap();
    }
    let mut y = x.clone();
    for _ in 0..10 {
        y = iwsta_step(&y, &w, &problem, l, 0.5).unwrap();
    }
    assert!(max_abs_diff(&x, &y) < 1e-12);
}

fn deblur_instance(seed: u64, size: usize) -> Problem {
    let mut rng = rng(seed);
    let p = make_blur_operator(size, size, 5, Boundary::Circular).unwrap();
    let w = make_haar_operator(size, size, 2).unwrap();
    let a = compose(p, w.clone()).unwrap();
    let truth: Vec<f64> = (0..size * size)
        .map(|i| if rng.gen_bool(0.2) { rng.gen_range(0.0..1.0) } else { (i % 7) as f64 * 0.01 })
        .collect();
    let mut b = make_blur_operator(size, size, 5, Boundary::Circular)
        .unwrap()
        .forward(&truth)
        .unwrap();
    b.iter_mut().for_each(|v| *v += 0.01 * rng.gen_range(-1.0..1.0));
    Problem::new(a, b).unwrap().with_synthesis(w).unwrap()
}

#[test]
fn eriwsta_cost_never_increases() {
    for seed in 0..5 {
        let problem = deblur_instance(100 + seed, 32);
        for (beta, gamma) in [(1e2, 1e-2), (1.0, 0.1), (10.0, 1e-3)] {
            let config = SolverConfig {
                strategy: Strategy::Eriwsta,
                beta,
                gamma,
                max_iters: 60,
                seed,
                ..SolverConfig::default()
            };
            let out = solve(&problem, &config, &vec![0.0; 1024], None).unwrap();
            let costs: Vec<f64> = out.trace.costs().collect();
            // the starting cost too: Φ(x0, w(x0))
            let w0 = strategy_weights(&vec![0.0; 1024], &config).unwrap();
            let mut prev = evaluate_cost(&vec![0.0; 1024], &w0, &problem, beta, gamma).unwrap().total;
            for (k, c) in costs.iter().enumerate() {
                assert!(*c <= prev + 1e-9 * (1.0 + prev.abs()), "seed {seed} iter {}: {c} > {prev}", k + 1);
                prev = *c;
            }
        }
    }
}

#[test]
fn huge_gamma_reduces_to_scaled_ista() {
    let problem = deblur_instance(7, 16);
    let n = 256;
    let beta = 2.0;
    let eri = SolverConfig {
        strategy: Strategy::Eriwsta,
        beta,
        gamma: 1e8,
        max_iters: 10,
        ..SolverConfig::default()
    };
    let ista = SolverConfig {
        strategy: Strategy::Ista,
        beta: beta / n as f64,
        ..eri.clone()
    };
    let x0 = vec![0.0; n];
    let a = solve(&problem, &eri, &x0, None).unwrap();
    let b = solve(&problem, &ista, &x0, None).unwrap();
    assert_eq!(a.lipschitz, b.lipschitz);
    assert!(max_abs_diff(&a.x, &b.x) < 1e-6);
}

#[test]
fn baseline_weights_follow_their_rules_inside_solve() {
    let problem = deblur_instance(9, 16);
    for s in [Strategy::Ista, Strategy::Irl1, Strategy::Wlp, Strategy::Nw4] {
        let config = SolverConfig {
            strategy: s,
            beta: 1e-3,
            max_iters: 20,
            ..SolverConfig::default()
        };
        let out = solve(&problem, &config, &vec![0.0; 256], None).unwrap();
        assert_eq!(out.trace.len(), 20, "{s}");
        let last = out.trace.last().unwrap();
        let w = strategy_weights(&out.x, &config).unwrap();
        let c = evaluate_cost(&out.x, &w, &problem, config.beta, config.gamma).unwrap();
        assert_eq!(last.cost, c.total);
    }
}

#[test]
fn dense_materialization_of_problem_operator() {
    // gradient via the matrix-free path equals Aᵀ(Ax − b) with A materialized
    let problem = deblur_instance(3, 8);
    let a: DenseMatrix = materialize(problem.operator().as_ref()).unwrap();
    let mut rng = rng(27);
    let x = random_vec(&mut rng, 64);
    let r: Vec<f64> = a.forward(&x).unwrap().iter().zip(problem.observation()).map(|(p, q)| p - q).collect();
    let want = a.transpose().forward(&r).unwrap();
    assert!(max_abs_diff(&problem.gradient(&x).unwrap(), &want) < 1e-12);
    assert_eq!(problem.operator().in_dim(), 64);
}
