//! Matrix-free linear operators.
//!
//! Every operator exposes a forward map and its exact adjoint. Operators are
//! immutable after construction and every apply call allocates its own
//! scratch, so a single [`Operator`] can be shared by concurrent solver runs.

mod blur;
mod dense;
mod haar;
mod spectral;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use blur::{make_blur_operator, Boundary, BlurOperator};
pub use dense::{materialize, materialize_with_cap, DenseMatrix, DEFAULT_MATERIALIZE_CAP};
pub use haar::{make_haar_operator, HaarSynthesis};
pub use spectral::{estimate_spectral_bound, SpectralBound};

/// Shared handle to a linear operator.
pub type Operator = Arc<dyn LinearOperator>;

pub trait LinearOperator: Send + Sync + fmt::Debug {
    fn in_dim(&self) -> usize;

    fn out_dim(&self) -> usize;

    /// `y = A x`. Lengths are the caller's responsibility.
    fn forward_into(&self, x: &[f64], y: &mut [f64]);

    /// `x = Aᵀ y`. Lengths are the caller's responsibility.
    fn adjoint_into(&self, y: &[f64], x: &mut [f64]);

    fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("forward input", x.len(), self.in_dim())?;
        let mut y = vec![0.0; self.out_dim()];
        self.forward_into(x, &mut y);
        Ok(y)
    }

    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("adjoint input", y.len(), self.out_dim())?;
        let mut x = vec![0.0; self.in_dim()];
        self.adjoint_into(y, &mut x);
        Ok(x)
    }

    /// `Aᵀ A x`.
    fn normal(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.forward(x)?;
        self.adjoint(&y)
    }
}

pub(crate) fn check_len(what: &str, got: usize, expected: usize) -> Result<()> {
    if got != expected {
        return Err(Error::invalid(format!(
            "{what} has length {got}, expected {expected}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct Identity {
    dim: usize,
}

impl Identity {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }

    pub fn shared(dim: usize) -> Operator {
        Arc::new(Self::new(dim))
    }
}

impl LinearOperator for Identity {
    fn in_dim(&self) -> usize {
        self.dim
    }

    fn out_dim(&self) -> usize {
        self.dim
    }

    fn forward_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }

    fn adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        x.copy_from_slice(y);
    }
}

/// Square diagonal operator.
#[derive(Debug, Clone)]
pub struct Diagonal {
    diag: Vec<f64>,
}

impl Diagonal {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::invalid("diagonal operator needs at least one entry"));
        }
        if !crate::signal::all_finite(&diag) {
            return Err(Error::invalid("diagonal entries must be finite"));
        }
        Ok(Self { diag })
    }
}

impl LinearOperator for Diagonal {
    fn in_dim(&self) -> usize {
        self.diag.len()
    }

    fn out_dim(&self) -> usize {
        self.diag.len()
    }

    fn forward_into(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), di) in y.iter_mut().zip(x).zip(&self.diag) {
            *yi = di * xi;
        }
    }

    fn adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        self.forward_into(y, x);
    }
}

/// `outer ∘ inner`.
#[derive(Debug, Clone)]
pub struct Composed {
    outer: Operator,
    inner: Operator,
}

impl LinearOperator for Composed {
    fn in_dim(&self) -> usize {
        self.inner.in_dim()
    }

    fn out_dim(&self) -> usize {
        self.outer.out_dim()
    }

    fn forward_into(&self, x: &[f64], y: &mut [f64]) {
        let mut mid = vec![0.0; self.inner.out_dim()];
        self.inner.forward_into(x, &mut mid);
        self.outer.forward_into(&mid, y);
    }

    fn adjoint_into(&self, y: &[f64], x: &mut [f64]) {
        let mut mid = vec![0.0; self.outer.in_dim()];
        self.outer.adjoint_into(y, &mut mid);
        self.inner.adjoint_into(&mid, x);
    }
}

/// Builds `outer ∘ inner`; the adjoint is `innerᵀ ∘ outerᵀ`.
pub fn compose(outer: Operator, inner: Operator) -> Result<Operator> {
    if outer.in_dim() != inner.out_dim() {
        return Err(Error::invalid(format!(
            "cannot compose: outer takes {} inputs but inner produces {}",
            outer.in_dim(),
            inner.out_dim()
        )));
    }
    Ok(Arc::new(Composed { outer, inner }))
}
