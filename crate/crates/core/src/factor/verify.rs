//! Determinant and operator identities, evaluated at finite truncation and
//! reported line by line.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::full::{compose_rootsub, lambda_loop, RootSubgroupData};
use super::k2::k2_triangular_from_cd;
use crate::error::Result;
use crate::laurent::{CircleGrid, LaurentSeries, LoopMatrix};
use crate::rootsub::{full_product, RootParams};
use crate::toeplitz::{
    compress, compress_shifted_direct, det_a_star_a, scalar_det_a_star_a,
    scalar_section, Compression,
};

/// One verified identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportLine {
    pub identity_name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_deviation: f64,
    pub pass: bool,
}

impl ReportLine {
    pub fn compare(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let dev = (lhs - rhs).abs();
        Self {
            identity_name: name.into(),
            lhs,
            rhs,
            abs_deviation: dev,
            pass: dev < tol,
        }
    }

    /// A line whose left side is itself a deviation that should vanish.
    pub fn vanishing(name: impl Into<String>, deviation: f64, tol: f64) -> Self {
        Self::compare(name, deviation, 0.0, tol)
    }
}

/// Per-identity tolerances.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub determinant: f64,
    pub szego_widom: f64,
    pub product: f64,
    pub hankel_pattern: f64,
    pub shifted: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            determinant: 1e-8,
            szego_widom: 1e-9,
            product: 1e-8,
            hankel_pattern: 1e-9,
            shifted: 1e-12,
        }
    }
}

/// `prod_n (1 + |p_n|^2)^{-n}` with `n` the natural index of each parameter.
pub fn weighted_a_product(params: &RootParams) -> f64 {
    params
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| (1.0 + v.norm_sqr()).powi(-((k as i64 + params.first_index()) as i32)))
        .product()
}

/// `exp(-2 sum_j j |chi_j|^2)`.
pub fn szego_widom_value(chi: &LaurentSeries) -> f64 {
    (-2.0 * chi_energy(chi)).exp()
}

/// `sum_{j >= 1} j |chi_j|^2`.
pub fn chi_energy(chi: &LaurentSeries) -> f64 {
    chi.terms()
        .filter(|(p, _)| *p > 0)
        .map(|(p, c)| p as f64 * c.norm_sqr())
        .sum()
}

/// `det(1 + B B*)^{-1}` for the scalar Hankel operator `B = P+ M_x P-` on
/// `z^-1..z^-m` to `z^0..z^{m-1}`.
pub fn hankel_b_inverse_det(x: &LaurentSeries, m: usize) -> f64 {
    let rows: Vec<i64> = (0..m as i64).collect();
    let cols: Vec<i64> = (1..=m as i64).map(|j| -j).collect();
    let b = scalar_section(x, &rows, &cols);
    let eye = DMatrix::<Complex64>::identity(m, m);
    1.0 / (eye + &b * b.adjoint()).determinant().re
}

/// Determinant lines for `k2` built from `zeta`, at truncation `n`.
pub fn check_k2_determinants(zeta: &RootParams, n: usize, tol: f64) -> Result<Vec<ReportLine>> {
    let k2 = full_product(zeta);
    let lhs = det_a_star_a(&k2, n);
    let order = k2.c.high_power().unwrap_or(0).max(0) as usize;
    let t = k2_triangular_from_cd(&k2.c, &k2.d, order, 1e-12)?;
    let m = n.max(t.x.high_power().unwrap_or(0) as usize + 1);
    Ok(vec![
        ReportLine::compare("det_AstarA_k2_vs_zeta_product", lhs, weighted_a_product(zeta), tol),
        ReportLine::compare("det_AstarA_k2_vs_hankel_x", lhs, hankel_b_inverse_det(&t.x, m), tol),
    ])
}

/// Determinant lines for `lambda = exp(chi - chi*)`.
///
/// The diagonal loop `diag(lambda, 1/lambda)` carries the factor 2 in the
/// exponent; the scalar symbol alone gives `exp(-sum j |chi_j|^2)`.
pub fn check_szego_widom(
    chi: &LaurentSeries,
    n: usize,
    grid: &CircleGrid,
    tol: f64,
) -> Vec<ReportLine> {
    let lam = lambda_loop(Complex64::new(0.0, 0.0), chi, grid);
    let energy = chi_energy(chi);
    vec![
        ReportLine::compare(
            "szego_widom_diagonal_lambda",
            det_a_star_a(&lam, n),
            (-2.0 * energy).exp(),
            tol,
        ),
        ReportLine::compare(
            "szego_widom_scalar_lambda",
            scalar_det_a_star_a(&lam.a, n),
            (-energy).exp(),
            tol,
        ),
    ]
}

/// Three-factor determinant product for the composed loop.
pub fn check_product_formula(
    data: &RootSubgroupData,
    n: usize,
    grid: &CircleGrid,
    tol: f64,
) -> Vec<ReportLine> {
    let g = compose_rootsub(data, grid);
    let lhs = det_a_star_a(&g, n);
    let k1s = data.k1().star();
    let lam = lambda_loop(data.chi0, &data.chi, grid);
    let factors = det_a_star_a(&k1s, n) * det_a_star_a(&lam, n) * det_a_star_a(&data.k2(), n);
    let closed = weighted_a_product(&data.eta)
        * szego_widom_value(&data.chi)
        * weighted_a_product(&data.zeta);
    vec![
        ReportLine::compare("det_AstarA_g_vs_three_factors", lhs, factors, tol),
        ReportLine::compare("det_AstarA_g_vs_closed_form", lhs, closed, tol),
    ]
}

/// `Z_N = C_N(k2) A_N(k2)^{-1}` against `C_N((k2)-)` with `(k2)- = [[1, x*], [0, 1]]`,
/// compared on the leading `(n/2 + 1)`-block corner where edge effects of the
/// finite section have died out; and `C_N((k2)-)` against the explicit
/// pattern whose `(e1 z^-j, e2 z^k)` entry is `x*_{-(j+k)}` and all others vanish.
pub fn check_hankel_pattern(zeta: &RootParams, n: usize, tol: f64) -> Result<Vec<ReportLine>> {
    let k2 = full_product(zeta);
    let order = k2.c.high_power().unwrap_or(0).max(0) as usize;
    let t = k2_triangular_from_cd(&k2.c, &k2.d, order, 1e-12)?;
    let xs = t.x_star();
    let minus = LoopMatrix::new(
        LaurentSeries::one(),
        xs.clone(),
        LaurentSeries::zero(),
        LaurentSeries::one(),
    );
    let a = compress(&k2, Compression::Toeplitz, n);
    let c = compress(&k2, Compression::HankelC, n);
    let z = a
        .transpose()
        .lu()
        .solve(&c.transpose())
        .map(|m| m.transpose())
        .unwrap_or_else(|| DMatrix::from_element(c.nrows(), c.ncols(), Complex64::new(f64::NAN, 0.0)));
    let cm = compress(&minus, Compression::HankelC, n);
    let corner = 2 * (n / 2 + 1);
    let z_dev = (z.view((0, 0), (corner, corner)) - cm.view((0, 0), (corner, corner)))
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);

    let size = 2 * (n + 1);
    let pattern = DMatrix::from_fn(size, size, |r, s| {
        let (j, p) = (r / 2 + 1, r % 2);
        let (k, q) = (s / 2, s % 2);
        if p == 0 && q == 1 {
            xs.coeff(-((j + k) as i64))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let p_dev = (&cm - pattern).iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(vec![
        ReportLine::vanishing("Z_k2_equals_C_of_minus_factor", z_dev, tol),
        ReportLine::vanishing("C_of_minus_factor_x_pattern", p_dev, tol),
    ])
}

/// Shifted compression built directly against `A_N(sigma(g))`.
pub fn check_shifted(g: &LoopMatrix, n: usize, tol: f64) -> ReportLine {
    let dev = (compress_shifted_direct(g, n) - compress(g, Compression::Shifted, n))
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    ReportLine::vanishing("shifted_toeplitz_equals_A_of_sigma", dev, tol)
}

/// Every identity that applies to composed data, at truncation `n`.
pub fn verify_identities(
    data: &RootSubgroupData,
    n: usize,
    grid: &CircleGrid,
    tol: &Tolerances,
) -> Result<Vec<ReportLine>> {
    let mut lines = Vec::new();
    let zeta_n = n.max(data.zeta.values.len() + 32);
    lines.extend(check_k2_determinants(&data.zeta, zeta_n, tol.determinant)?);
    let sk1 = data.k1().sigma();
    let eta_as_zeta = RootParams::zeta(data.eta.values.clone());
    debug_assert!(sk1.distance(&full_product(&eta_as_zeta)) < 1e-12);
    let eta_lines = check_k2_determinants(&eta_as_zeta, zeta_n, tol.determinant)?;
    lines.push(ReportLine::compare(
        "det_AstarA_k1_vs_eta_product",
        det_a_star_a(&data.k1(), zeta_n),
        weighted_a_product(&data.eta),
        tol.determinant,
    ));
    lines.extend(eta_lines.into_iter().map(|mut l| {
        l.identity_name = l.identity_name.replace("k2_vs_zeta", "sigma_k1_vs_shifted_eta");
        l.identity_name = l.identity_name.replace("k2_vs_hankel_x", "sigma_k1_vs_hankel_y");
        l
    }));
    if !data.chi.is_zero() {
        lines.extend(check_szego_widom(&data.chi, n, grid, tol.szego_widom));
    }
    lines.extend(check_product_formula(data, n, grid, tol.product));
    lines.extend(check_hankel_pattern(&data.zeta, zeta_n, tol.hankel_pattern)?);
    lines.push(check_shifted(&compose_rootsub(data, grid), n.min(24), tol.shifted));
    Ok(lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_zeta_determinant() {
        let lines = check_k2_determinants(&RootParams::zeta_real(&[0.5]), 33, 1e-10).unwrap();
        for l in &lines {
            assert!(l.pass, "{l:?}");
            assert!((l.rhs - 0.8).abs() < 1e-14);
        }
    }

    #[test]
    fn two_zeta_determinant() {
        let z = RootParams::zeta_real(&[0.3, 0.2]);
        assert!((weighted_a_product(&z) - 1.0 / (1.09 * 1.04 * 1.04)).abs() < 1e-15);
        for l in check_k2_determinants(&z, 34, 1e-8).unwrap() {
            assert!(l.pass, "{l:?}");
        }
    }

    #[test]
    fn szego_widom_spot_value() {
        let chi = LaurentSeries::monomial(1, Complex64::new(0.3, 0.0));
        let lines = check_szego_widom(&chi, 64, &CircleGrid::default(), 1e-9);
        assert!((lines[0].rhs - (-0.18f64).exp()).abs() < 1e-15);
        for l in &lines {
            assert!(l.pass, "{l:?}");
        }
    }

    #[test]
    fn pattern_for_two_factors() {
        let z = RootParams::zeta(vec![Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.1)]);
        for l in check_hankel_pattern(&z, 24, 1e-9).unwrap() {
            assert!(l.pass, "{l:?}");
        }
    }
}
