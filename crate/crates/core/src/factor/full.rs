//! The factorization `g = k1* diag(e^psi, e^-psi) k2` of an SU(2) loop, with
//! `psi = -chi* + chi0 + chi`, and its inverse.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::k2::{k2_triangular_from_cd, zeta_from_loop, K2Triangular};
use super::{exp_series, pointwise, NOISE};
use crate::error::{Error, Result};
use crate::laurent::{unitarity_defect, CircleGrid, Half, LaurentSeries, LoopMatrix};
use crate::rootsub::{full_product, RootParams, Side};
use crate::toeplitz::{triangular, Triangular, DEFAULT_INVERTIBILITY_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Root-subgroup coordinates `(eta, chi0, chi, zeta)` of a loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSubgroupData {
    pub eta: RootParams,
    /// Purely imaginary, reported on the principal branch.
    pub chi0: Complex64,
    /// Powers `>= 1`.
    pub chi: LaurentSeries,
    pub zeta: RootParams,
    /// Grid defect of the source loop against the product of the recovered factors.
    pub residual: f64,
}

impl RootSubgroupData {
    pub fn trivial() -> Self {
        Self {
            eta: RootParams::eta(Vec::new()),
            chi0: ZERO,
            chi: LaurentSeries::zero(),
            zeta: RootParams::zeta(Vec::new()),
            residual: 0.0,
        }
    }

    /// `-chi* + chi0 + chi`.
    pub fn psi(&self) -> LaurentSeries {
        psi(self.chi0, &self.chi)
    }

    pub fn k1(&self) -> LoopMatrix {
        full_product(&self.eta)
    }

    pub fn k2(&self) -> LoopMatrix {
        full_product(&self.zeta)
    }

    /// Largest coordinate difference against `other`; `chi0` is compared modulo `2 pi i`.
    pub fn distance(&self, other: &Self) -> f64 {
        let dphase = (self.chi0.im - other.chi0.im).rem_euclid(2.0 * std::f64::consts::PI);
        let dphase = dphase.min(2.0 * std::f64::consts::PI - dphase);
        self.eta
            .distance(&other.eta)
            .max(self.zeta.distance(&other.zeta))
            .max(self.chi.distance(&other.chi))
            .max(dphase)
            .max((self.chi0.re - other.chi0.re).abs())
    }
}

fn psi(chi0: Complex64, chi: &LaurentSeries) -> LaurentSeries {
    &(&(-&chi.star()) + &LaurentSeries::constant(chi0)) + chi
}

/// `diag(e^psi, e^-psi)`, with the exponentials expanded on `grid`.
pub fn lambda_loop(chi0: Complex64, chi: &LaurentSeries, grid: &CircleGrid) -> LoopMatrix {
    let p = psi(chi0, chi);
    LoopMatrix::diag(exp_series(&p, grid), exp_series(&-&p, grid))
}

/// `k1* diag(e^psi, e^-psi) k2` in coefficient arithmetic.
pub fn compose_rootsub(data: &RootSubgroupData, grid: &CircleGrid) -> LoopMatrix {
    let lam = lambda_loop(data.chi0, &data.chi, grid);
    (&(&data.k1().star() * &lam) * &data.k2()).cleanup(NOISE)
}

/// Triangular factors of a composed loop predicted from its coordinates.
#[derive(Debug, Clone)]
pub struct PredictedTriangular {
    pub l: LoopMatrix,
    /// `m0 a0 = a1 a2 e^{chi0}`.
    pub alpha: Complex64,
    pub u: LoopMatrix,
    pub a1: f64,
    pub a2: f64,
}

/// Triangular data of `k1` read through `sigma`.
///
/// If `sigma(k1)` has data `(x', a', alpha', beta', gamma', delta')` then
/// `k1 = [[1, 0], [y*, 1]] diag(a1, 1/a1) [[alpha1, beta1], [gamma1, delta1]]`
/// with `a1 = 1/a'`, `y* = z x'*`, `alpha1 = delta'`, `beta1 = gamma' z^-1`,
/// `gamma1 = beta' z`, `delta1 = alpha'`.
fn k1_triangular(k1: &LoopMatrix, tol: f64) -> Result<(f64, LaurentSeries, LoopMatrix)> {
    let s = k1.sigma();
    let order = s.c.high_power().unwrap_or(0).max(0) as usize;
    let t: K2Triangular = k2_triangular_from_cd(&s.c, &s.d, order, tol)?;
    let upper = LoopMatrix::new(
        t.delta2.clone(),
        t.gamma2.shift(-1),
        t.beta2.shift(1),
        t.alpha2.clone(),
    );
    Ok((1.0 / t.a2, t.x_star().shift(1), upper))
}

/// Predicted `l`, `m0 a0`, `u` for `compose_rootsub(data)`.
///
/// With `h = e^{2 chi0} x* e^{2 chi} + y e^{2 chi*}` split as `h- + h+`:
/// `l = U1* diag(e^{-chi*}, e^{chi*}) [[1, a1^2 h-], [0, 1]]` and
/// `u = [[1, a2^-2 e^{-2 chi0} h+], [0, 1]] diag(e^chi, e^-chi) U2`.
pub fn predicted_triangular(
    data: &RootSubgroupData,
    grid: &CircleGrid,
    tol: f64,
) -> Result<PredictedTriangular> {
    let k2 = data.k2();
    let order = k2.c.high_power().unwrap_or(0).max(0) as usize;
    let t2 = k2_triangular_from_cd(&k2.c, &k2.d, order, tol)?;
    let (a1, y_star, u1) = k1_triangular(&data.k1(), tol)?;
    let a2 = t2.a2;

    let chi = &data.chi;
    let e2chi = exp_series(&chi.scale_real(2.0), grid);
    let e2chi_star = e2chi.star();
    let e2chi0 = (data.chi0 * 2.0).exp();
    let h = &(&t2.x_star() * &e2chi).scale(e2chi0) + &(&y_star.star() * &e2chi_star);
    let h = h.cleanup(NOISE);

    let emchi_star = exp_series(&-&chi.star(), grid);
    let echi_star = exp_series(&chi.star(), grid);
    let echi = exp_series(chi, grid);
    let emchi = exp_series(&-chi, grid);

    let one = LaurentSeries::one;
    let zero = LaurentSeries::zero;
    let l = &(&u1.star() * &LoopMatrix::diag(emchi_star, echi_star))
        * &LoopMatrix::new(one(), h.project(Half::Minus).scale_real(a1 * a1), zero(), one());
    let u = &(&LoopMatrix::new(
        one(),
        h.project(Half::Plus).scale((-data.chi0 * 2.0).exp() / (a2 * a2)),
        zero(),
        one(),
    ) * &LoopMatrix::diag(echi, emchi))
        * &t2.upper();
    Ok(PredictedTriangular {
        l: l.cleanup(NOISE),
        alpha: Complex64::new(a1 * a2, 0.0) * data.chi0.exp(),
        u: u.cleanup(NOISE),
        a1,
        a2,
    })
}

/// Output of [`rootsub_factorize`].
#[derive(Debug, Clone)]
pub struct RootsubFactorization {
    pub data: RootSubgroupData,
    pub k1: LoopMatrix,
    pub k2: LoopMatrix,
    pub a1: f64,
    pub a2: f64,
    /// `max |(|l11|^2 + |l21|^2) - (a1 a2)^-2 (|u21|^2 + |u22|^2)|` on the grid.
    pub consistency: f64,
    pub triangular: Triangular,
    /// Peeling remainders for `k2` and `sigma(k1)`.
    pub peel_remainders: (f64, f64),
}

/// Maps a failed invertibility gate to `NotFactorizable` naming the operator.
pub fn name_gate(err: Error) -> Error {
    match err {
        Error::NotInvertible { rcond, tol } => Error::NotFactorizable {
            gate: format!("A(g) not invertible (reciprocal condition {rcond:.3e} <= {tol:.3e})"),
        },
        Error::ShiftedNotInvertible { pivot, tol } => Error::NotFactorizable {
            gate: format!("A1(g) not invertible (|(g0)_11| = {pivot:.3e} <= {tol:.3e})"),
        },
        other => other,
    }
}

/// Root-subgroup coordinates of an SU(2) loop from its triangular factorization
/// at truncation `n`. `tol` gates unitarity and the consistency identity.
pub fn rootsub_factorize(
    g: &LoopMatrix,
    n: usize,
    tol: f64,
    grid: &CircleGrid,
) -> Result<RootsubFactorization> {
    let defect = unitarity_defect(g, grid);
    if defect > tol {
        return Err(Error::NotUnitary { defect });
    }
    let tri = triangular(g, n, DEFAULT_INVERTIBILITY_TOL).map_err(name_gate)?;
    let span = tri
        .l
        .max_abs_power()
        .max(tri.u.max_abs_power())
        .max(g.max_abs_power());
    let grid = CircleGrid::resolving(2 * span + 2, grid.len());

    let [l11, l21, u21, u22] = [&tri.l.a, &tri.l.c, &tri.u.c, &tri.u.d].map(|f| grid.sample(f));
    let big_l: Vec<f64> = (0..grid.len())
        .map(|k| l11[k].norm_sqr() + l21[k].norm_sqr())
        .collect();
    let big_u: Vec<f64> = (0..grid.len())
        .map(|k| u21[k].norm_sqr() + u22[k].norm_sqr())
        .collect();
    let mean_log = |v: &[f64]| v.iter().map(|x| x.ln()).sum::<f64>() / v.len() as f64;
    let a1 = (-0.5 * mean_log(&big_l)).exp();
    let a2 = (0.5 * mean_log(&big_u)).exp();
    let scale = (a1 * a2).powi(-2);
    let consistency = big_l
        .iter()
        .zip(&big_u)
        .map(|(l, u)| (l - scale * u).abs())
        .fold(0.0, f64::max);
    if consistency > tol {
        return Err(Error::ConsistencyViolation {
            deviation: consistency,
        });
    }

    let re_chi_vals: Vec<Complex64> = big_l
        .iter()
        .map(|l| Complex64::new(-a1.ln() - 0.5 * l.ln(), 0.0))
        .collect();
    let re_chi = grid
        .coefficients_centered(&re_chi_vals)
        .expect("sample count matches grid");
    let chi_full = &re_chi + &re_chi.conjugate_function().scale(Complex64::new(0.0, 1.0));
    let chi = chi_full.truncate(1, i64::MAX).cleanup(NOISE);
    let chi0 = Complex64::new(0.0, tri.m0.arg());

    let echi = grid.sample(&exp_series(&chi, &grid));
    let conj_samples = |f: &LaurentSeries| -> Vec<Complex64> {
        grid.sample(f).into_iter().map(|v| v.conj()).collect()
    };
    let l11c = conj_samples(&tri.l.a);
    let l21c = conj_samples(&tri.l.c);
    let back = |vals: Vec<Complex64>| -> LaurentSeries {
        grid.coefficients_centered(&vals)
            .expect("sample count matches grid")
            .project(Half::Plus)
            .cleanup(NOISE)
    };
    let ea = back((0..grid.len()).map(|k| echi[k] * l11c[k] * a1).collect());
    let eb = back((0..grid.len()).map(|k| echi[k] * l21c[k] * a1).collect());
    let ec = back((0..grid.len()).map(|k| echi[k] * u21[k] / a2).collect());
    let ed = back((0..grid.len()).map(|k| echi[k] * u22[k] / a2).collect());

    let k2 = LoopMatrix::new(ed.star(), -&ec.star(), ec.clone(), ed.clone());
    let k1 = LoopMatrix::new(ea.clone(), eb.clone(), -&eb.star(), ea.star());

    let zeta_peel = peel_all(&k2, tol)?;
    let eta_peel = peel_all(&k1.sigma(), tol)?;

    let mut data = RootSubgroupData {
        eta: RootParams {
            side: Side::Eta,
            values: eta_peel.0.values,
        },
        chi0,
        chi,
        zeta: zeta_peel.0,
        residual: 0.0,
    };
    let lam = lambda_loop(chi0, &data.chi, &grid);
    let product = &(&k1.star() * &lam) * &k2;
    data.residual = g.grid_distance(&product, &grid);
    Ok(RootsubFactorization {
        data,
        k1,
        k2,
        a1,
        a2,
        consistency,
        triangular: tri,
        peel_remainders: (zeta_peel.1, eta_peel.1),
    })
}

/// Peels every factor visible in the (2,1) entry above the noise floor.
fn peel_all(k2: &LoopMatrix, tol: f64) -> Result<(RootParams, f64)> {
    let c = k2.c.cleanup(1e-12);
    let n_max = c.high_power().unwrap_or(0).max(0) as usize;
    let p = zeta_from_loop(k2, n_max, tol)?;
    Ok((p.zeta.trimmed(1e-12), p.remainder_distance))
}

/// The remaining entries `(l12, l22, u12, u11)` of the triangular factors from
/// `l11, l21, u21, u22` and the middle factor `m0 a0`.
///
/// With `q = (l21* / l11 + m0^2 u21* / u22) / (|l11|^2 + |l21|^2)`:
/// `l12 = -l11 P-(q)`, `l22 = 1/l11 - l21 P-(q)`,
/// `u12 = -(m0 a0)^-2 u22 P+(q)`, `u11 = 1/u22 - (m0 a0)^-2 u21 P+(q)`.
#[allow(clippy::too_many_arguments)]
pub fn reconstruct_lu(
    l11: &LaurentSeries,
    l21: &LaurentSeries,
    u21: &LaurentSeries,
    u22: &LaurentSeries,
    a0: f64,
    m0: Complex64,
    grid: &CircleGrid,
    tol: f64,
) -> Result<(LaurentSeries, LaurentSeries, LaurentSeries, LaurentSeries)> {
    let span = [l11, l21, u21, u22]
        .iter()
        .map(|f| f.max_abs_power())
        .max()
        .unwrap_or(0);
    let grid = CircleGrid::resolving(2 * span + 2, grid.len());
    let m0sq = m0 * m0;
    let s = pointwise(&grid, &[l11, l21], |v| Complex64::new(v[0].norm_sqr() + v[1].norm_sqr(), 0.0));
    let s_vals = grid.sample(&s);
    let min_value = s_vals
        .iter()
        .map(|v| v.re)
        .chain(grid.sample(l11).iter().map(|v| v.norm()))
        .chain(grid.sample(u22).iter().map(|v| v.norm()))
        .fold(f64::INFINITY, f64::min);
    if !(min_value > tol) {
        return Err(Error::DenominatorVanishes { min_value });
    }
    let q = pointwise(&grid, &[l21, u21, l11, u22], |v| {
        (v[0].conj() / v[2] + m0sq * v[1].conj() / v[3]) / (v[2].norm_sqr() + v[0].norm_sqr())
    });
    let qm = q.project(Half::Minus);
    let qp = q.project(Half::Plus);
    let k = 1.0 / (m0sq * a0 * a0);
    let l12 = pointwise(&grid, &[l11, &qm], |v| -v[0] * v[1]);
    let l22 = pointwise(&grid, &[l11, l21, &qm], |v| 1.0 / v[0] - v[1] * v[2]);
    let u12 = pointwise(&grid, &[u22, &qp], |v| -k * v[0] * v[1]);
    let u11 = pointwise(&grid, &[u22, u21, &qp], |v| 1.0 / v[0] - k * v[1] * v[2]);
    Ok((
        l12.cleanup(NOISE),
        l22.cleanup(NOISE),
        u12.cleanup(NOISE),
        u11.cleanup(NOISE),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toeplitz::triangular;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_data() -> RootSubgroupData {
        RootSubgroupData {
            eta: RootParams::eta(vec![c(0.1, 0.2), c(-0.15, 0.05)]),
            chi0: c(0.0, std::f64::consts::PI / 5.0),
            chi: LaurentSeries::from_terms([(1, c(0.2, 0.1)), (2, c(-0.05, 0.0))]),
            zeta: RootParams::zeta(vec![c(0.25, -0.1), c(0.1, 0.1)]),
            residual: 0.0,
        }
    }

    #[test]
    fn trivial_data_compose_to_identity() {
        let g = compose_rootsub(&RootSubgroupData::trivial(), &CircleGrid::default());
        assert!(g.distance(&LoopMatrix::identity()) < 1e-15);
    }

    #[test]
    fn constant_phase() {
        let mut d = RootSubgroupData::trivial();
        d.chi0 = c(0.0, std::f64::consts::FRAC_PI_2);
        let g = compose_rootsub(&d, &CircleGrid::default());
        assert!((g.a.coeff(0) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((g.d.coeff(0) - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(g.max_abs_power(), 0);
    }

    #[test]
    fn predicted_factors_match_toeplitz() {
        let grid = CircleGrid::default();
        let data = sample_data();
        let g = compose_rootsub(&data, &grid);
        let p = predicted_triangular(&data, &grid, 1e-12).unwrap();
        let t = triangular(&g, 48, 1e-10).unwrap();
        assert!(g.grid_distance(&(&(&p.l * &LoopMatrix::diag(
            LaurentSeries::constant(p.alpha),
            LaurentSeries::constant(1.0 / p.alpha),
        )) * &p.u), &grid) < 1e-12);
        assert!(t.l.grid_distance(&p.l, &grid) < 1e-9);
        assert!(t.u.grid_distance(&p.u, &grid) < 1e-9);
        assert!((t.m0 * t.a0 - p.alpha).norm() < 1e-9);
    }

    #[test]
    fn factorize_round_trip() {
        let grid = CircleGrid::default();
        let data = sample_data();
        let g = compose_rootsub(&data, &grid);
        let f = rootsub_factorize(&g, 48, 1e-9, &grid).unwrap();
        assert!(f.data.distance(&data) < 1e-8, "{:?}", f.data);
        assert!(f.data.residual < 1e-8);
    }

    #[test]
    fn reconstruct_single_factor() {
        let grid = CircleGrid::default();
        let (l12, l22, u12, u11) = reconstruct_lu(
            &LaurentSeries::one(),
            &LaurentSeries::zero(),
            &LaurentSeries::monomial(1, c(-0.5, 0.0)),
            &LaurentSeries::one(),
            1.25f64.sqrt(),
            c(1.0, 0.0),
            &grid,
            1e-12,
        )
        .unwrap();
        assert!(l12.distance(&LaurentSeries::monomial(-1, c(0.5, 0.0))) < 1e-14);
        assert!(l22.distance(&LaurentSeries::one()) < 1e-14);
        assert!(u12.max_coeff_abs() < 1e-14);
        assert!(u11.distance(&LaurentSeries::one()) < 1e-14);
    }

    #[test]
    fn reconstruct_composed() {
        let grid = CircleGrid::default();
        let g = compose_rootsub(&sample_data(), &grid);
        let t = triangular(&g, 48, 1e-10).unwrap();
        let (l12, l22, u12, u11) =
            reconstruct_lu(&t.l.a, &t.l.c, &t.u.c, &t.u.d, t.a0, t.m0, &grid, 1e-12).unwrap();
        assert!(l12.distance(&t.l.b) < 1e-12);
        assert!(l22.distance(&t.l.d) < 1e-12);
        assert!(u12.distance(&t.u.b) < 1e-12);
        assert!(u11.distance(&t.u.a) < 1e-12);
    }
}
