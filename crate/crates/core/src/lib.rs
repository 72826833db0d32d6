//! Exact Euler calculus on piecewise-linear constructible functions and the
//! hybrid integral transforms built on it.

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cf1d;
pub mod cfnd;
pub mod complexes;
pub mod error;
pub mod geometry;
pub mod io;
pub mod kernels;
pub mod radon;
pub mod scenes;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::EPS;

/// Caps the worker pool used by grid sweeps. Effective only before the first
/// parallel sweep; a no-op without the `parallel` feature.
pub fn limit_threads(n: usize) -> Result<()> {
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let _ = n;
    Ok(())
}
