#![allow(dead_code)]

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sik_core::operators::{Boundary, DenseMatrix, Operator};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::new(rows, cols, random_vec(rng, rows * cols)).unwrap()
}

pub fn random_dense_op(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Operator {
    Arc::new(random_dense(rng, rows, cols))
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, (x - y).abs()))
}

/// Blur matrix straight from the definition: every output pixel averages
/// the k×k neighbourhood, with out-of-range taps resolved per boundary.
pub fn dense_blur(h: usize, w: usize, k: usize, boundary: Boundary) -> DenseMatrix {
    let n = h * w;
    let r = (k / 2) as isize;
    let tap = 1.0 / (k * k) as f64;
    let resolve = |i: isize, len: usize| -> Option<usize> {
        let len = len as isize;
        match boundary {
            Boundary::ZeroPad => (i >= 0 && i < len).then_some(i as usize),
            Boundary::Replicate => Some(i.max(0).min(len - 1) as usize),
            Boundary::Circular => Some((((i % len) + len) % len) as usize),
        }
    };
    let mut data = vec![0.0; n * n];
    for row in 0..h {
        for col in 0..w {
            for dr in -r..=r {
                for dc in -r..=r {
                    if let (Some(sr), Some(sc)) =
                        (resolve(row as isize + dr, h), resolve(col as isize + dc, w))
                    {
                        data[(row * w + col) * n + sr * w + sc] += tap;
                    }
                }
            }
        }
    }
    DenseMatrix::new(n, n, data).unwrap()
}

/// 1D single-level orthonormal Haar analysis matrix (averages first).
fn haar_1d(n: usize) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n / 2 {
        m[i][2 * i] = FRAC_1_SQRT_2;
        m[i][2 * i + 1] = FRAC_1_SQRT_2;
        m[n / 2 + i][2 * i] = FRAC_1_SQRT_2;
        m[n / 2 + i][2 * i + 1] = -FRAC_1_SQRT_2;
    }
    m
}

/// Multi-level 2D Haar analysis as an explicit product of per-level
/// matrices, each acting as `H_rows ⊗ H_cols` on the top-left block and as
/// the identity elsewhere.
pub fn dense_haar_analysis(h: usize, w: usize, levels: u32) -> DenseMatrix {
    let n = h * w;
    let mut total = DenseMatrix::identity(n);
    for l in 0..levels {
        let (bh, bw) = (h >> l, w >> l);
        let (hr, hc) = (haar_1d(bh), haar_1d(bw));
        let mut data = vec![0.0; n * n];
        for r in 0..h {
            for c in 0..w {
                let out = r * w + c;
                if r < bh && c < bw {
                    for sr in 0..bh {
                        for sc in 0..bw {
                            data[out * n + sr * w + sc] = hr[r][sr] * hc[c][sc];
                        }
                    }
                } else {
                    data[out * n + out] = 1.0;
                }
            }
        }
        let level = DenseMatrix::new(n, n, data).unwrap();
        total = level.matmul(&total).unwrap();
    }
    total
}

/// argmin over a uniform grid of `½(x − v)² + θ|x|` on `[−|v|−1, |v|+1]`.
pub fn prox_grid(v: f64, theta: f64, step: f64) -> f64 {
    let lo = -v.abs() - 1.0;
    let n = ((2.0 * (v.abs() + 1.0)) / step).ceil() as usize;
    (0..=n)
        .map(|i| lo + i as f64 * step)
        .map(|x| (x, 0.5 * (x - v).powi(2) + theta * x.abs()))
        .fold((0.0, f64::INFINITY), |best, (x, f)| if f < best.1 { (x, f) } else { best })
        .0
}

pub fn g_gamma(x: &[f64], w: &[f64], gamma: f64) -> f64 {
    x.iter()
        .zip(w)
        .map(|(xi, wi)| wi * xi.abs() + if *wi > 0.0 { gamma * wi * wi.ln() } else { 0.0 })
        .sum()
}

/// Minimizes `G_γ` over the 2-simplex by a coarse-to-fine grid: a full
/// 1e-2 grid, then windows of ±2 previous steps at 1e-3, 1e-4 and 1e-5.
/// `G_γ` is strictly convex on the simplex, so refinement cannot lose the
/// minimizer.
pub fn simplex_grid_3(x: &[f64; 3], gamma: f64) -> [f64; 3] {
    let mut best = (f64::INFINITY, [1.0 / 3.0; 3]);
    let search = |c1: f64, c2: f64, half: f64, step: f64, best: &mut (f64, [f64; 3])| {
        let k = (half / step).round() as i64;
        for i in -k..=k {
            for j in -k..=k {
                let w1 = c1 + i as f64 * step;
                let w2 = c2 + j as f64 * step;
                let w3 = 1.0 - w1 - w2;
                if w1 < 0.0 || w2 < 0.0 || w3 < -1e-15 {
                    continue;
                }
                let w = [w1, w2, w3.max(0.0)];
                let g = g_gamma(x, &w, gamma);
                if g < best.0 {
                    *best = (g, w);
                }
            }
        }
    };
    search(0.5, 0.5, 0.5, 1e-2, &mut best);
    for step in [1e-3, 1e-4, 1e-5] {
        let [c1, c2, _] = best.1;
        search(c1, c2, 20.0 * step, step, &mut best);
    }
    best.1
}
