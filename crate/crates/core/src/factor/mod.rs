//! Root-subgroup factorization of SU(2) loops and the identities it satisfies.

mod full;
mod k2;
mod verify;

pub use full::{
    compose_rootsub, lambda_loop, name_gate, predicted_triangular, reconstruct_lu,
    rootsub_factorize, PredictedTriangular, RootSubgroupData, RootsubFactorization,
};
pub use k2::{
    k2_from_x, k2_triangular_from_cd, k2_triangular_from_x, x_from_zeta, x_leastsquares,
    zeta_from_loop, zeta_from_x, K2Triangular, Peeled,
};
pub use verify::*;

use num_complex::Complex64;

use crate::laurent::{CircleGrid, LaurentSeries};

/// Coefficients below this are treated as roundoff when pruning grid transforms.
pub(crate) const NOISE: f64 = 1e-16;

/// Applies `f` pointwise to the samples of `inputs` and transforms back.
pub fn pointwise(
    grid: &CircleGrid,
    inputs: &[&LaurentSeries],
    f: impl Fn(&[Complex64]) -> Complex64,
) -> LaurentSeries {
    let samples: Vec<Vec<Complex64>> = inputs.iter().map(|s| grid.sample(s)).collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); inputs.len()];
    let vals: Vec<Complex64> = (0..grid.len())
        .map(|k| {
            for (slot, s) in buf.iter_mut().zip(&samples) {
                *slot = s[k];
            }
            f(&buf)
        })
        .collect();
    grid.coefficients_centered(&vals)
        .expect("sample count matches grid")
}

/// `exp(f)` expanded on `grid`, with roundoff-level coefficients dropped.
pub fn exp_series(f: &LaurentSeries, grid: &CircleGrid) -> LaurentSeries {
    if f.is_zero() {
        return LaurentSeries::one();
    }
    pointwise(grid, &[f], |v| v[0].exp()).cleanup(NOISE)
}
