//! Block Toeplitz and Hankel truncations of loop multiplication operators,
//! and the Birkhoff and triangular factorizations computed from them.
//!
//! The Hardy space `H+` of C^2-valued functions is ordered as
//! `e1 z^0, e2 z^0, e1 z^1, e2 z^1, ...`, so the block in block-row `j` and
//! block-column `k` of the Toeplitz truncation is the coefficient `g_{j-k}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::laurent::{CircleGrid, LaurentSeries, LoopMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Default reciprocal-condition threshold for "invertible".
pub const DEFAULT_INVERTIBILITY_TOL: f64 = 1e-10;

/// Which compression of the multiplication operator `M_g` to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Compression {
    /// `A_N(g)`: `P+ M_g P+` on `z^0..z^N`.
    Toeplitz,
    /// The shifted Toeplitz operator, realised as `A_N(sigma(g))`.
    Shifted,
    /// `B_N(g)`: `P+ M_g P-` from `z^{-1}..z^{-N-1}` to `z^0..z^N`.
    HankelB,
    /// `C_N(g)`: `P- M_g P+` from `z^0..z^N` to `z^{-1}..z^{-N-1}`.
    HankelC,
}

/// Matrix whose `(r, c)` block is `g_{rows[r] - cols[c]}`.
pub fn block_section(g: &LoopMatrix, rows: &[i64], cols: &[i64]) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(2 * rows.len(), 2 * cols.len(), ZERO);
    for (r, &pr) in rows.iter().enumerate() {
        for (c, &pc) in cols.iter().enumerate() {
            let blk = g.coefficient(pr - pc);
            for i in 0..2 {
                for j in 0..2 {
                    m[(2 * r + i, 2 * c + j)] = blk[(i, j)];
                }
            }
        }
    }
    m
}

/// Scalar analogue of [`block_section`].
pub fn scalar_section(f: &LaurentSeries, rows: &[i64], cols: &[i64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows.len(), cols.len(), |r, c| f.coeff(rows[r] - cols[c]))
}

fn range(lo: i64, hi: i64) -> Vec<i64> {
    (lo..=hi).collect()
}

fn neg_range(n: usize) -> Vec<i64> {
    (1..=n as i64 + 1).map(|j| -j).collect()
}

/// Builds the requested `2(N+1) x 2(N+1)` compression.
pub fn compress(g: &LoopMatrix, kind: Compression, n: usize) -> DMatrix<Complex64> {
    let pos = range(0, n as i64);
    match kind {
        Compression::Toeplitz => block_section(g, &pos, &pos),
        Compression::Shifted => block_section(&g.sigma(), &pos, &pos),
        Compression::HankelB => block_section(g, &pos, &neg_range(n)),
        Compression::HankelC => block_section(g, &neg_range(n), &pos),
    }
}

/// The shifted compression built directly: `M_g` compressed to the span of
/// `e1 z^1.., e2 z^0..`, with new `e1 z^j` taken as old `e2 z^{j+1}`
/// and new `e2 z^j` as old `e1 z^j`. Agrees with [`Compression::Shifted`].
pub fn compress_shifted_direct(g: &LoopMatrix, n: usize) -> DMatrix<Complex64> {
    let big = compress(g, Compression::Toeplitz, n + 1);
    let old = |basis: usize| {
        let (j, e) = (basis / 2, basis % 2);
        if e == 0 {
            2 * (j + 1) + 1
        } else {
            2 * j
        }
    };
    let size = 2 * (n + 1);
    DMatrix::from_fn(size, size, |r, c| big[(old(r), old(c))])
}

/// `P+ M_g` restricted to `z^0..z^N` with all rows that can be hit
/// (`z^0..z^{N + max(0, deg g)}`), so that `R* R` is the compression of `A(g)* A(g)`.
pub fn tall_compression(g: &LoopMatrix, n: usize) -> DMatrix<Complex64> {
    let extra = g.high_power().unwrap_or(0).max(0);
    block_section(g, &range(0, n as i64 + extra), &range(0, n as i64))
}

/// Scalar version of [`tall_compression`].
pub fn scalar_tall_compression(f: &LaurentSeries, n: usize) -> DMatrix<Complex64> {
    let extra = f.high_power().unwrap_or(0).max(0);
    scalar_section(f, &range(0, n as i64 + extra), &range(0, n as i64))
}

/// Singular values, largest first.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `sigma_min / sigma_max`, or 0 for a zero or non-square matrix.
pub fn rcond(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() != m.ncols() {
        return 0.0;
    }
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if hi > 0.0 => lo / hi,
        _ => 0.0,
    }
}

/// Determinant of the square truncation `A_N(g)`.
pub fn det_truncation(g: &LoopMatrix, n: usize) -> Complex64 {
    compress(g, Compression::Toeplitz, n).determinant()
}

/// Finite-section approximation of `det(A(g)* A(g))`: the Gram determinant of
/// [`tall_compression`]. For unitary `g` it lies in `(0, 1]` and decreases to
/// the Widom limit as `N` grows.
pub fn det_a_star_a(g: &LoopMatrix, n: usize) -> f64 {
    let r = tall_compression(g, n);
    let gram = r.adjoint() * &r;
    gram.determinant().re
}

/// Scalar analogue of [`det_a_star_a`].
pub fn scalar_det_a_star_a(f: &LaurentSeries, n: usize) -> f64 {
    let r = scalar_tall_compression(f, n);
    (r.adjoint() * &r).determinant().re
}

/// Solves `A x = b` after checking `rcond(A) > tol`.
pub fn checked_solve(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    tol: f64,
) -> Result<DMatrix<Complex64>> {
    let rc = rcond(a);
    if !(rc > tol) {
        return Err(Error::NotInvertible { rcond: rc, tol });
    }
    a.clone()
        .lu()
        .solve(b)
        .ok_or(Error::NotInvertible { rcond: rc, tol })
}

fn block(m: &DMatrix<Complex64>, k: usize) -> Matrix2<Complex64> {
    Matrix2::new(
        m[(2 * k, 0)],
        m[(2 * k, 1)],
        m[(2 * k + 1, 0)],
        m[(2 * k + 1, 1)],
    )
}

fn loop_from_blocks(blocks: &[Matrix2<Complex64>], lo: i64) -> LoopMatrix {
    let entry = |i: usize, j: usize| LaurentSeries::new(lo, blocks.iter().map(|b| b[(i, j)]).collect());
    LoopMatrix::new(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1))
}

/// `g = minus * zero * plus` with `minus(inf) = I`, `plus(0) = I`.
#[derive(Debug, Clone)]
pub struct Birkhoff {
    pub minus: LoopMatrix,
    pub zero: Matrix2<Complex64>,
    pub plus: LoopMatrix,
    /// Max over the grid of `|| g - minus zero plus ||`.
    pub residual: f64,
    /// Largest coefficient of `g * (zero plus)^{-1}` at a positive power; zero
    /// when the truncation captured the factorization exactly.
    pub positive_leak: f64,
    /// Reciprocal condition number of `A_N(g)`.
    pub rcond: f64,
}

impl Birkhoff {
    pub fn product(&self) -> LoopMatrix {
        &(&self.minus * &LoopMatrix::constant(&self.zero)) * &self.plus
    }
}

/// Birkhoff factorization from the truncation `A_N(g)`.
///
/// Solving `A_N(g) X = [I; 0; ...; 0]` yields the coefficients of
/// `(g_0 g_+)^{-1}`; the other factors follow by multiplication. The result is
/// exact whenever `(g_0 g_+)^{-1}` is a polynomial of degree `<= N`.
pub fn birkhoff(g: &LoopMatrix, n: usize, tol: f64) -> Result<Birkhoff> {
    let a = compress(g, Compression::Toeplitz, n);
    let size = a.nrows();
    let rhs = DMatrix::from_fn(size, 2, |i, j| if i == j { ONE } else { ZERO });
    let rc = rcond(&a);
    let x = checked_solve(&a, &rhs, tol)?;
    let blocks: Vec<_> = (0..=n).map(|k| block(&x, k)).collect();
    let m_inv = loop_from_blocks(&blocks, 0); // (g0 g+)^{-1}

    let m0 = blocks[0];
    let zero = m0.try_inverse().ok_or(Error::NotInvertible { rcond: 0.0, tol })?;

    // g+^{-1} = M g0, normalised to the identity at z = 0.
    let plus_inv = &m_inv * &LoopMatrix::constant(&zero);
    let plus = invert_loop(&plus_inv, n, tol)?;

    let gm = g * &m_inv;
    let top = g.high_power().unwrap_or(0).max(0) + n as i64;
    let positive_leak = (1..=top)
        .map(|p| max_abs(&gm.coefficient(p)))
        .fold(0.0, f64::max);
    let low = gm.low_power().unwrap_or(0).min(0);
    let minus = gm.truncate(low, 0);

    let mut out = Birkhoff {
        minus,
        zero,
        plus,
        residual: 0.0,
        positive_leak,
        rcond: rc,
    };
    let span = g.max_abs_power().max(out.product().max_abs_power());
    let grid = CircleGrid::resolving(span, 256);
    out.residual = g.grid_distance(&out.product(), &grid);
    Ok(out)
}

/// Inverse of a loop that is a polynomial in `z` with invertible value at 0.
///
/// Uses the adjugate when the determinant is constant, otherwise a truncated
/// power-series inverse of the determinant through degree `2 * order`.
fn invert_loop(h: &LoopMatrix, order: usize, tol: f64) -> Result<LoopMatrix> {
    let det = h.det();
    let d0 = det.coeff(0);
    let nonconst = det.terms().filter(|(p, _)| *p != 0).map(|(_, c)| c.norm()).fold(0.0, f64::max);
    if nonconst <= 1e-12 * d0.norm().max(1.0) {
        return Ok(h.adjugate().scale(&LaurentSeries::constant(1.0 / d0)));
    }
    let inv = det.invert_series(2 * order + h.high_power().unwrap_or(0).max(0) as usize, tol)?;
    Ok(h.adjugate().scale(&inv))
}

fn max_abs(m: &Matrix2<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `g = l * diag(alpha, 1/alpha) * u` with `alpha = m0 * a0`, `|m0| = 1`, `a0 > 0`,
/// `l` lower unipotent at infinity and `u` upper unipotent at 0.
#[derive(Debug, Clone)]
pub struct Triangular {
    pub l: LoopMatrix,
    pub m0: Complex64,
    pub a0: f64,
    pub u: LoopMatrix,
    pub birkhoff: Birkhoff,
}

impl Triangular {
    pub fn middle(&self) -> LoopMatrix {
        let alpha = self.m0 * self.a0;
        LoopMatrix::diag(
            LaurentSeries::constant(alpha),
            LaurentSeries::constant(1.0 / alpha),
        )
    }

    pub fn product(&self) -> LoopMatrix {
        &(&self.l * &self.middle()) * &self.u
    }
}

/// Triangular factorization obtained by an LDU split of the Birkhoff middle factor.
pub fn triangular(g: &LoopMatrix, n: usize, tol: f64) -> Result<Triangular> {
    let b = birkhoff(g, n, tol)?;
    let [alpha, beta, gamma, delta] = [b.zero[(0, 0)], b.zero[(0, 1)], b.zero[(1, 0)], b.zero[(1, 1)]];
    if alpha.norm() <= tol {
        return Err(Error::ShiftedNotInvertible {
            pivot: alpha.norm(),
            tol,
        });
    }
    let lower = Matrix2::new(ONE, ZERO, gamma / alpha, ONE);
    let upper = Matrix2::new(ONE, beta / alpha, ZERO, ONE);
    // Keep the middle factor in SL(2) even when det g0 drifts from 1 numerically.
    let det0 = alpha * delta - beta * gamma;
    let l = &b.minus * &LoopMatrix::constant(&lower);
    let mut u = &LoopMatrix::constant(&upper) * &b.plus;
    if (det0 - ONE).norm() > 0.0 {
        let fix = Matrix2::new(ONE, ZERO, ZERO, det0);
        u = &LoopMatrix::constant(&fix) * &u;
    }
    Ok(Triangular {
        l,
        m0: alpha / alpha.norm(),
        a0: alpha.norm(),
        u,
        birkhoff: b,
    })
}

/// Winding number of a scalar symbol around 0, from the grid samples.
pub fn winding_number(f: &LaurentSeries, grid: &CircleGrid, tol: f64) -> Result<i64> {
    let vals = grid.sample(f);
    let min_modulus = vals.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    if !(min_modulus > tol) {
        return Err(Error::VanishingSymbol { min_modulus });
    }
    let mut total = 0.0;
    for k in 0..vals.len() {
        let next = vals[(k + 1) % vals.len()];
        total += (next / vals[k]).arg();
    }
    Ok((total / (2.0 * PI)).round() as i64)
}

fn kernel_dim(m: &DMatrix<Complex64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    let hi = s.first().copied().unwrap_or(0.0);
    let deficit = m.ncols().saturating_sub(m.nrows());
    deficit + s.iter().filter(|&&v| v <= rel_tol * hi.max(f64::MIN_POSITIVE)).count()
}

/// `dim ker T_N(f) - dim ker T_N(f*)`, using the tall compressions so that
/// the finite sections see every row the columns can reach.
pub fn numerical_index(f: &LaurentSeries, n: usize, rel_tol: f64) -> i64 {
    let k1 = kernel_dim(&scalar_tall_compression(f, n), rel_tol);
    let k2 = kernel_dim(&scalar_tall_compression(&f.star(), n), rel_tol);
    k1 as i64 - k2 as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zeta_factor(zeta: Complex64, n: i64) -> LoopMatrix {
        let a = 1.0 / (1.0 + zeta.norm_sqr()).sqrt();
        LoopMatrix::new(
            LaurentSeries::constant(c(a, 0.0)),
            LaurentSeries::monomial(-n, zeta * a),
            LaurentSeries::monomial(n, -zeta.conj() * a),
            LaurentSeries::constant(c(a, 0.0)),
        )
    }

    #[test]
    fn toeplitz_blocks_are_coefficients() {
        let g = zeta_factor(c(0.5, 0.0), 1);
        let a = compress(&g, Compression::Toeplitz, 2);
        assert_eq!(a.nrows(), 6);
        // block (1, 0) is g_1, which carries -conj(zeta) a in the (2,1) slot
        assert!((a[(3, 0)] - g.c.coeff(1)).norm() < 1e-15);
        // block (0, 1) is g_{-1}
        assert!((a[(0, 3)] - g.b.coeff(-1)).norm() < 1e-15);
    }

    #[test]
    fn shifted_equals_direct_reindexing() {
        let g = &zeta_factor(c(0.3, 0.2), 1) * &zeta_factor(c(-0.1, 0.4), 2);
        for n in [0, 3, 6] {
            let direct = compress_shifted_direct(&g, n);
            let shifted = compress(&g, Compression::Shifted, n);
            assert!((direct - shifted).norm() < 1e-14);
        }
    }

    #[test]
    fn single_factor_determinant() {
        let g = zeta_factor(c(0.5, 0.0), 1);
        for n in [1, 3, 8] {
            assert!((det_a_star_a(&g, n) - 0.8).abs() < 1e-12);
        }
    }

    #[test]
    fn birkhoff_of_single_factor() {
        let g = zeta_factor(c(0.5, 0.0), 1);
        let b = birkhoff(&g, 4, 1e-10).unwrap();
        assert!(b.residual < 1e-12);
        assert!(b.positive_leak < 1e-12);
        assert!((b.plus.coefficient(0) - Matrix2::identity()).norm() < 1e-12);
        assert!((b.minus.coefficient(0) - Matrix2::identity()).norm() < 1e-12);
    }

    #[test]
    fn triangular_of_single_factor() {
        let g = zeta_factor(c(0.5, 0.0), 1);
        let t = triangular(&g, 4, 1e-10).unwrap();
        assert!((t.a0 - 1.25f64.sqrt()).abs() < 1e-12);
        assert!((t.m0 - ONE).norm() < 1e-12);
        assert!((t.l.b.coeff(-1) - c(0.5, 0.0)).norm() < 1e-12);
        assert!((t.u.c.coeff(1) - c(-0.5, 0.0)).norm() < 1e-12);
        assert!(t.l.c.is_zero() || t.l.c.max_coeff_abs() < 1e-12);
        let grid = CircleGrid::default();
        assert!(g.grid_distance(&t.product(), &grid) < 1e-12);
    }

    #[test]
    fn winding_and_index_of_monomials() {
        let grid = CircleGrid::default();
        for k in -3..=3 {
            let f = LaurentSeries::monomial(k, ONE);
            assert_eq!(winding_number(&f, &grid, 1e-12).unwrap(), k);
            assert_eq!(numerical_index(&f, 10, 1e-8), -k);
        }
        assert!(matches!(
            winding_number(&LaurentSeries::from_real_poly(&[1.0, 1.0]), &grid, 1e-12),
            Err(Error::VanishingSymbol { .. })
        ));
    }

    #[test]
    fn singular_truncation_is_rejected() {
        let g = LoopMatrix::diag(
            LaurentSeries::monomial(1, ONE),
            LaurentSeries::monomial(-1, ONE),
        );
        assert!(matches!(birkhoff(&g, 3, 1e-10), Err(Error::NotInvertible { .. })));
    }
}
