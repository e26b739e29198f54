//! Finitely supported Laurent series on the unit circle and 2x2 loops built from them.

mod grid;
mod matrix;
mod series;

pub use grid::{CircleGrid, DEFAULT_GRID_POINTS};
pub use matrix::{
    det_defect, spectral_norm, unitarity_defect, unitary_defect_at, LoopMatrix,
};
pub use series::{Half, LaurentSeries};
