use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LinearOperator;
use crate::error::{Error, Result};
use crate::signal::{dot, norm2};

/// Estimate of the largest eigenvalue of `AᵀA`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralBound {
    pub value: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

impl SpectralBound {
    /// Step constant `L = value · safety`. A zero operator yields `L = 1`:
    /// any positive constant majorizes a constant data term.
    pub fn lipschitz(&self, safety: f64) -> f64 {
        if self.value > 0.0 {
            self.value * safety
        } else {
            1.0
        }
    }
}

/// Power iteration on `x ↦ Aᵀ A x` from a seeded uniform random start.
///
/// Stops once two successive Rayleigh quotients agree to `rel_tol`. The
/// Rayleigh quotient never exceeds the true eigenvalue, so callers should
/// inflate it with [`SpectralBound::lipschitz`].
pub fn estimate_spectral_bound(
    op: &dyn LinearOperator,
    rel_tol: f64,
    max_iters: usize,
    seed: u64,
) -> Result<SpectralBound> {
    if !(rel_tol > 0.0) {
        return Err(Error::invalid(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let n = op.in_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nv = norm2(&v);
    v.iter_mut().for_each(|x| *x /= nv);

    let mut mid = vec![0.0; op.out_dim()];
    let mut w = vec![0.0; n];
    let mut estimate = 0.0_f64;
    for it in 1..=max_iters {
        op.forward_into(&v, &mut mid);
        op.adjoint_into(&mid, &mut w);
        let nw = norm2(&w);
        if nw == 0.0 {
            return Ok(SpectralBound {
                value: 0.0,
                iterations_used: it,
                converged: true,
            });
        }
        let rayleigh = dot(&v, &w).max(0.0);
        let done = it > 1 && (rayleigh - estimate).abs() <= rel_tol * rayleigh;
        estimate = rayleigh;
        if done {
            return Ok(SpectralBound {
                value: estimate,
                iterations_used: it,
                converged: true,
            });
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
    }
    Ok(SpectralBound {
        value: estimate,
        iterations_used: max_iters,
        converged: false,
    })
}
