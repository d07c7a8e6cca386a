//! Orthogonal matrix-valued wavelet masks from unitary transfer-function realizations.

// `!(r < tol)` is used on purpose: it also rejects NaN residuals.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod filterbank;
pub mod io;
pub mod linalg;
pub mod masks;
pub mod qmf;
pub mod realization;
pub mod synthesis;

pub use error::{Error, Result};
