pub mod codim1;
pub mod combinatorics;
pub mod eigen;
pub mod error;
pub mod harness;
pub mod hypergraph;
pub mod kmp;
pub mod linalg;
pub mod matrix;
pub mod meanfield;
pub mod operator;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod symgroup;
pub mod verify;
pub mod weingarten;

pub use error::{Error, Result};
pub use scalar::{Mode, Rational, Scalar};
