use std::ops::Mul;

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::CircleGrid;
use super::series::LaurentSeries;

/// A 2x2 matrix `[[a, b], [c, d]]` of Laurent series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopMatrix {
    pub a: LaurentSeries,
    pub b: LaurentSeries,
    pub c: LaurentSeries,
    pub d: LaurentSeries,
}

impl LoopMatrix {
    pub fn new(a: LaurentSeries, b: LaurentSeries, c: LaurentSeries, d: LaurentSeries) -> Self {
        Self { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::diag(LaurentSeries::one(), LaurentSeries::one())
    }

    pub fn diag(a: LaurentSeries, d: LaurentSeries) -> Self {
        Self::new(a, LaurentSeries::zero(), LaurentSeries::zero(), d)
    }

    pub fn constant(m: &Matrix2<Complex64>) -> Self {
        Self::new(
            LaurentSeries::constant(m[(0, 0)]),
            LaurentSeries::constant(m[(0, 1)]),
            LaurentSeries::constant(m[(1, 0)]),
            LaurentSeries::constant(m[(1, 1)]),
        )
    }

    pub fn entries(&self) -> [&LaurentSeries; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    fn map(&self, f: impl Fn(&LaurentSeries) -> LaurentSeries) -> Self {
        Self::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }

    pub fn det(&self) -> LaurentSeries {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// Pointwise conjugate transpose on the circle.
    pub fn star(&self) -> Self {
        Self::new(self.a.star(), self.c.star(), self.b.star(), self.d.star())
    }

    /// `[[a, b], [c, d]] -> [[d, c z^-1], [b z, a]]`.
    ///
    /// This is conjugation by `[[0, z^{-1/2}], [z^{1/2}, 0]]`, so it is
    /// multiplicative, preserves unitarity and the determinant.
    pub fn sigma(&self) -> Self {
        Self::new(
            self.d.clone(),
            self.c.shift(-1),
            self.b.shift(1),
            self.a.clone(),
        )
    }

    /// Adjugate `[[d, -b], [-c, a]]`; equals the inverse when `det == 1`.
    pub fn adjugate(&self) -> Self {
        Self::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn scale(&self, s: &LaurentSeries) -> Self {
        self.map(|e| e * s)
    }

    pub fn truncate(&self, lo: i64, hi: i64) -> Self {
        self.map(|e| e.truncate(lo, hi))
    }

    pub fn cleanup(&self, tol: f64) -> Self {
        self.map(|e| e.cleanup(tol))
    }

    pub fn shift(&self, k: i64) -> Self {
        self.map(|e| e.shift(k))
    }

    /// Matrix coefficient of `z^n`.
    pub fn coefficient(&self, n: i64) -> Matrix2<Complex64> {
        Matrix2::new(
            self.a.coeff(n),
            self.b.coeff(n),
            self.c.coeff(n),
            self.d.coeff(n),
        )
    }

    pub fn eval(&self, z: Complex64) -> Matrix2<Complex64> {
        Matrix2::new(self.a.eval(z), self.b.eval(z), self.c.eval(z), self.d.eval(z))
    }

    pub fn low_power(&self) -> Option<i64> {
        self.entries().iter().filter_map(|e| e.low_power()).min()
    }

    pub fn high_power(&self) -> Option<i64> {
        self.entries().iter().filter_map(|e| e.high_power()).max()
    }

    pub fn max_abs_power(&self) -> i64 {
        self.entries().iter().map(|e| e.max_abs_power()).max().unwrap_or(0)
    }

    /// Largest coefficient modulus of `self - other` over all entries.
    pub fn distance(&self, other: &Self) -> f64 {
        self.a
            .distance(&other.a)
            .max(self.b.distance(&other.b))
            .max(self.c.distance(&other.c))
            .max(self.d.distance(&other.d))
    }

    /// Samples on a grid, one 2x2 matrix per point.
    pub fn sample(&self, grid: &CircleGrid) -> Vec<Matrix2<Complex64>> {
        let [a, b, c, d] = self.entries().map(|e| grid.sample(e));
        (0..grid.len())
            .map(|k| Matrix2::new(a[k], b[k], c[k], d[k]))
            .collect()
    }

    /// Inverse of [`LoopMatrix::sample`] in the centered power window.
    pub fn from_samples(grid: &CircleGrid, vals: &[Matrix2<Complex64>]) -> Self {
        let entry = |i: usize, j: usize| {
            let v: Vec<_> = vals.iter().map(|m| m[(i, j)]).collect();
            grid.coefficients_centered(&v).expect("sample count matches grid")
        };
        Self::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))
    }

    /// Largest sup-norm deviation `|| self(z) - other(z) ||` over the grid
    /// (operator 2-norm of each 2x2 difference).
    pub fn grid_distance(&self, other: &Self, grid: &CircleGrid) -> f64 {
        let x = self.sample(grid);
        let y = other.sample(grid);
        x.iter()
            .zip(&y)
            .map(|(p, q)| spectral_norm(&(p - q)))
            .fold(0.0, f64::max)
    }
}

impl Mul for &LoopMatrix {
    type Output = LoopMatrix;
    fn mul(self, r: &LoopMatrix) -> LoopMatrix {
        LoopMatrix::new(
            &(&self.a * &r.a) + &(&self.b * &r.c),
            &(&self.a * &r.b) + &(&self.b * &r.d),
            &(&self.c * &r.a) + &(&self.d * &r.c),
            &(&self.c * &r.b) + &(&self.d * &r.d),
        )
    }
}

impl Mul for LoopMatrix {
    type Output = LoopMatrix;
    fn mul(self, r: LoopMatrix) -> LoopMatrix {
        &self * &r
    }
}

/// Operator 2-norm of a complex 2x2 matrix.
pub fn spectral_norm(m: &Matrix2<Complex64>) -> f64 {
    // Largest eigenvalue of the Hermitian matrix m* m, in closed form.
    let h = m.adjoint() * m;
    let p = h[(0, 0)].re;
    let q = h[(1, 1)].re;
    let off = h[(0, 1)].norm_sqr();
    let lam = 0.5 * (p + q) + (0.25 * (p - q) * (p - q) + off).sqrt();
    lam.max(0.0).sqrt()
}

/// Spectral radius of the Hermitian matrix `m* m - I`, i.e. how far `m` is from unitary.
pub fn unitary_defect_at(m: &Matrix2<Complex64>) -> f64 {
    let h = m.adjoint() * m;
    let p = h[(0, 0)].re - 1.0;
    let q = h[(1, 1)].re - 1.0;
    let off = h[(0, 1)].norm_sqr();
    let mid = 0.5 * (p + q);
    let rad = (0.25 * (p - q) * (p - q) + off).sqrt();
    (mid + rad).abs().max((mid - rad).abs())
}

/// `max_z || g(z)* g(z) - I ||` over the grid.
pub fn unitarity_defect(g: &LoopMatrix, grid: &CircleGrid) -> f64 {
    g.sample(grid).iter().map(unitary_defect_at).fold(0.0, f64::max)
}

/// `max_z |det g(z) - 1|` over the grid.
pub fn det_defect(g: &LoopMatrix, grid: &CircleGrid) -> f64 {
    g.sample(grid)
        .iter()
        .map(|m| (m.determinant() - Complex64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn defect_of_shear() {
        // [[1, z], [0, 1]] at z = 1 has singular values phi and 1/phi.
        let g = LoopMatrix::new(
            LaurentSeries::one(),
            LaurentSeries::monomial(1, c(1.0, 0.0)),
            LaurentSeries::zero(),
            LaurentSeries::one(),
        );
        let m = g.eval(c(1.0, 0.0));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((unitary_defect_at(&m) - phi).abs() < 1e-12);
        assert!((spectral_norm(&m) - phi).abs() < 1e-12);
        assert!(unitarity_defect(&LoopMatrix::identity(), &CircleGrid::default()) < 1e-15);
    }

    #[test]
    fn sigma_is_multiplicative_on_example() {
        let f = LoopMatrix::new(
            LaurentSeries::from_terms([(0, c(1.0, 0.0)), (1, c(0.2, 0.1))]),
            LaurentSeries::monomial(-2, c(0.3, 0.0)),
            LaurentSeries::monomial(2, c(0.0, -0.4)),
            LaurentSeries::one(),
        );
        let g = f.star();
        let lhs = (&f * &g).sigma();
        let rhs = &f.sigma() * &g.sigma();
        assert!(lhs.distance(&rhs) < 1e-15);
        assert_eq!(f.sigma().sigma(), f);
    }

    #[test]
    fn json_has_four_entries() {
        let v = serde_json::to_value(LoopMatrix::identity()).unwrap();
        for key in ["a", "b", "c", "d"] {
            assert!(v.get(key).is_some());
        }
        assert_eq!(v["b"]["terms"].as_array().unwrap().len(), 0);
    }
}
