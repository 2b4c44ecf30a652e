use std::fmt;

use crate::eigen::{spectrum, Spectrum};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// The basis an [`Operator`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Multisets of size `k` on `[n]`, colex order.
    Multisets { n: usize, k: usize },
    /// Ordered `k`-tuples of distinct vertices.
    Tuples { n: usize, k: usize },
    /// `(i_1..i_k, j_1..j_m)`, row-major with `j_m` fastest.
    Tensor { n: usize, k: usize, m: usize },
    /// Orthonormal torus-invariant basis of the `(k, k)` tensor piece, indexed by multisets.
    TorInvSkk { n: usize, k: usize },
    /// The pure subspace of multisets of size `k`, in its orthogonal basis.
    Pure { n: usize, k: usize },
    /// One coordinate per vertex.
    Vertices { n: usize },
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Multisets { n, k } => write!(f, "MS({n},{k})"),
            Basis::Tuples { n, k } => write!(f, "Z({n},{k})"),
            Basis::Tensor { n, k, m } => write!(f, "R({n};{k},{m})"),
            Basis::TorInvSkk { n, k } => write!(f, "TorInv S({n};{k},{k})"),
            Basis::Pure { n, k } => write!(f, "pure({n},{k})"),
            Basis::Vertices { n } => write!(f, "C^{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Operator<S> {
    pub basis: Basis,
    pub matrix: Matrix<S>,
}

impl<S: Scalar> Operator<S> {
    pub fn new(basis: Basis, matrix: Matrix<S>) -> Self {
        Operator { basis, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn spectrum(&self, name: &str) -> Result<Spectrum> {
        spectrum(name, &self.matrix)
    }
}
