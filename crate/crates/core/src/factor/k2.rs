//! Triangular data of loops of the form `k2 = [[d*, -c*], [c, d]]` and the
//! maps between such loops, their coordinate `x`, and their zeta parameters.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{Half, LaurentSeries, LoopMatrix};
use crate::rootsub::{a_factor, RootParams};
use crate::toeplitz::{rcond, scalar_section};

/// `k2 = [[1, x*], [0, 1]] diag(a2, 1/a2) [[alpha2, beta2], [gamma2, delta2]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct K2Triangular {
    pub a2: f64,
    /// Stored with powers `>= 1`; the factor above uses `x*`.
    pub x: LaurentSeries,
    pub alpha2: LaurentSeries,
    pub beta2: LaurentSeries,
    pub gamma2: LaurentSeries,
    pub delta2: LaurentSeries,
    /// Largest coefficient discarded when projecting `alpha2`, `beta2` onto
    /// nonnegative powers. Vanishes for genuine SU(2) input.
    pub negative_mass: f64,
}

impl K2Triangular {
    pub fn x_star(&self) -> LaurentSeries {
        self.x.star()
    }

    /// The upper-unipotent-at-0 factor `[[alpha2, beta2], [gamma2, delta2]]`.
    pub fn upper(&self) -> LoopMatrix {
        LoopMatrix::new(
            self.alpha2.clone(),
            self.beta2.clone(),
            self.gamma2.clone(),
            self.delta2.clone(),
        )
    }

    pub fn assemble(&self) -> LoopMatrix {
        let lower = LoopMatrix::new(
            LaurentSeries::one(),
            self.x_star(),
            LaurentSeries::zero(),
            LaurentSeries::one(),
        );
        let mid = LoopMatrix::diag(
            LaurentSeries::constant(Complex64::new(self.a2, 0.0)),
            LaurentSeries::constant(Complex64::new(1.0 / self.a2, 0.0)),
        );
        &(&lower * &mid) * &self.upper()
    }
}

fn check_power_series(f: &LaurentSeries, name: &str) -> Result<()> {
    match f.low_power() {
        Some(p) if p < 0 => Err(Error::BadNormalization(format!(
            "{name} has a negative power z^{p}"
        ))),
        _ => Ok(()),
    }
}

/// Triangular data from the bottom row `(c, d)` of a `k2`-form loop.
///
/// `x* = -P-(c* / d)` needs only the first `deg c` Taylor coefficients of
/// `1/d`, so the result is exact whenever `order >= deg c`.
pub fn k2_triangular_from_cd(
    c: &LaurentSeries,
    d: &LaurentSeries,
    order: usize,
    tol: f64,
) -> Result<K2Triangular> {
    check_power_series(c, "c")?;
    check_power_series(d, "d")?;
    if c.coeff(0).norm() > tol {
        return Err(Error::BadNormalization(format!(
            "c(0) = {} is not zero",
            c.coeff(0)
        )));
    }
    let d0 = d.coeff(0);
    if d0.re <= tol || d0.im.abs() > tol {
        return Err(Error::BadNormalization(format!(
            "d(0) = {d0} is not positive real"
        )));
    }
    let c = c.truncate(1, i64::MAX);
    let a2 = 1.0 / d0.re;
    let deg_c = c.high_power().unwrap_or(0).max(0) as usize;
    let inv_d = d.invert_series(order.max(deg_c), tol)?;
    let x_star = -(&c.star() * &inv_d).project(Half::Minus);

    let cs = c.star();
    let ds = d.star();
    let alpha_full = (&ds - &(&x_star * &c)).scale_real(1.0 / a2);
    let beta_full = (&(-&cs) - &(&x_star * d)).scale_real(1.0 / a2);
    let negative_mass = alpha_full
        .project(Half::Minus)
        .max_coeff_abs()
        .max(beta_full.project(Half::Minus).max_coeff_abs());

    Ok(K2Triangular {
        a2,
        x: x_star.star(),
        alpha2: alpha_full.project(Half::Plus),
        beta2: beta_full.project(Half::Plus),
        gamma2: c.scale_real(a2),
        delta2: d.scale_real(a2),
        negative_mass,
    })
}

/// Coordinate `x` of a `k2`-form loop by least squares.
///
/// Unknowns are the coefficients of `x*` at `z^-1..z^-N`; equations are
/// `P-(c x*) = P-(d*)` and `P-(d x*) = -c*` on `z^-1..z^-N`, solved through
/// the normal equations.
pub fn x_leastsquares(
    c: &LaurentSeries,
    d: &LaurentSeries,
    n: usize,
    tol: f64,
) -> Result<LaurentSeries> {
    check_power_series(c, "c")?;
    check_power_series(d, "d")?;
    if n == 0 {
        return Ok(LaurentSeries::zero());
    }
    let rows: Vec<i64> = (1..=n as i64).map(|j| -j).collect();
    let cols = rows.clone();
    // Entry (r, k) of multiplication by f from z^{cols[k]} to z^{rows[r]} is f_{r-k}.
    let mc = scalar_section(c, &rows, &cols);
    let md = scalar_section(d, &rows, &cols);
    let mut t = DMatrix::zeros(2 * n, n);
    t.rows_mut(0, n).copy_from(&mc);
    t.rows_mut(n, n).copy_from(&md);
    let ds = d.star();
    let cs = c.star();
    let b = DMatrix::from_fn(2 * n, 1, |r, _| {
        if r < n {
            ds.coeff(rows[r])
        } else {
            -cs.coeff(rows[r - n])
        }
    });
    let normal = t.adjoint() * &t;
    let rc = rcond(&normal);
    if !(rc > tol) {
        return Err(Error::RankDeficient { rcond: rc });
    }
    let rhs = t.adjoint() * b;
    let sol = normal
        .lu()
        .solve(&rhs)
        .ok_or(Error::RankDeficient { rcond: rc })?;
    let x_star = LaurentSeries::from_terms(cols.iter().enumerate().map(|(k, &p)| (p, sol[(k, 0)])));
    Ok(x_star.star())
}

/// Scalar `P- M_f P+` from `z^0..z^{m-1}` to `z^-1..z^-m`.
fn hankel_c(f: &LaurentSeries, m: usize) -> DMatrix<Complex64> {
    let rows: Vec<i64> = (1..=m as i64).map(|j| -j).collect();
    let cols: Vec<i64> = (0..m as i64).collect();
    scalar_section(f, &rows, &cols)
}

fn k2_triangular_from_x_at(x: &LaurentSeries, m: usize) -> K2Triangular {
    let xs = x.star();
    let zxs = xs.shift(1);
    let c_x = hankel_c(&xs, m);
    let c_zx = hankel_c(&zxs, m);
    let eye = DMatrix::<Complex64>::identity(m, m);

    let p = &eye + &c_zx * c_zx.adjoint();
    let q = &eye + c_x.adjoint() * &c_x;
    let r = &eye + c_zx.adjoint() * &c_zx;
    let a2_sq = (q.determinant() / r.determinant()).re;
    let a2 = a2_sq.sqrt();

    // x* as a vector on z^-1..z^-m.
    let v = DMatrix::from_fn(m, 1, |k, _| xs.coeff(-(k as i64) - 1));
    let w = p.lu().solve(&v).expect("1 + C C* is positive definite");
    let w_series = LaurentSeries::from_terms((0..m).map(|k| (-(k as i64) - 1, w[(k, 0)])));
    let gamma2 = -w_series.star();

    let xg = &xs * &gamma2;
    let delta2 = (&LaurentSeries::one() + &xg.project(Half::Minus)).star();
    let alpha2 = (&LaurentSeries::one() - &xg.project(Half::Plus)).scale_real(1.0 / a2_sq);
    let beta2 = (&xs * &delta2).project(Half::Plus).scale_real(-1.0 / a2_sq);

    K2Triangular {
        a2,
        x: x.clone(),
        alpha2,
        beta2,
        gamma2,
        delta2,
        negative_mass: 0.0,
    }
}

/// Triangular data of the `k2`-form loop with coordinate `x` (powers `>= 1`),
/// from truncated scalar Hankel operators of size `N`.
///
/// The computation is repeated at `N + 8`; `TruncationUnstable` is raised if
/// the two results differ by more than `tol`.
pub fn k2_triangular_from_x(x: &LaurentSeries, n: usize, tol: f64) -> Result<K2Triangular> {
    if let Some(lo) = x.low_power() {
        if lo < 1 {
            return Err(Error::InvalidArgument(format!(
                "x must have powers >= 1, found z^{lo}"
            )));
        }
    }
    let n = n.max(1);
    let first = k2_triangular_from_x_at(x, n);
    let second = k2_triangular_from_x_at(x, n + 8);
    let drift = first
        .assemble()
        .distance(&second.assemble())
        .max((first.a2 - second.a2).abs());
    if drift > tol {
        return Err(Error::TruncationUnstable {
            drift,
            n,
            n_next: n + 8,
        });
    }
    Ok(second)
}

/// The `k2`-form loop with coordinate `x`, and its `a2`.
pub fn k2_from_x(x: &LaurentSeries, n: usize, tol: f64) -> Result<(LoopMatrix, f64)> {
    let t = k2_triangular_from_x(x, n, tol)?;
    Ok((t.assemble(), t.a2))
}

/// Result of peeling a `k2`-form loop.
#[derive(Debug, Clone)]
pub struct Peeled {
    pub zeta: RootParams,
    /// Largest coefficient of `remainder - I` after removing every factor.
    pub remainder_distance: f64,
}

/// Zeta parameters of a `k2`-form loop, by stripping elementary factors.
///
/// With `R_n = F_N ... F_n`, the (2,1) entry of `R_n` has `z^n` coefficient
/// `-conj(zeta_n) d_n(0)`, where `d_n(0) = prod_{k >= n} a(zeta_k)`. Each
/// step reads `zeta_n` and replaces `R_n` by `R_n F_n*`.
///
/// Exact peeling never decreases `Re d(0)`; a drop by more than `tol`, or a
/// `d(0)` that is not positive real, raises `PeelDivergence`.
pub fn zeta_from_loop(k2: &LoopMatrix, n_max: usize, tol: f64) -> Result<Peeled> {
    let mut rem = k2.clone();
    let mut zeta = Vec::with_capacity(n_max);
    let mut last_d0 = f64::NEG_INFINITY;
    for n in 1..=n_max as i64 {
        let d0 = rem.d.coeff(0);
        if d0.re <= tol || d0.im.abs() > tol.max(1e-12) {
            return Err(Error::PeelDivergence {
                index: n as usize,
                reason: format!("d(0) = {d0} is not positive real"),
            });
        }
        if d0.re < last_d0 - tol {
            return Err(Error::PeelDivergence {
                index: n as usize,
                reason: format!("d(0) fell from {last_d0:.6e} to {:.6e}", d0.re),
            });
        }
        last_d0 = d0.re;
        let t = -(rem.c.coeff(n) / d0.re).conj();
        zeta.push(t);
        if t.norm() == 0.0 {
            continue;
        }
        let a = a_factor(t);
        let inv = LoopMatrix::new(
            LaurentSeries::constant(Complex64::new(a, 0.0)),
            LaurentSeries::monomial(-n, -t * a),
            LaurentSeries::monomial(n, t.conj() * a),
            LaurentSeries::constant(Complex64::new(a, 0.0)),
        );
        rem = (&rem * &inv).cleanup(1e-15);
    }
    let remainder_distance = rem.distance(&LoopMatrix::identity());
    Ok(Peeled {
        zeta: RootParams::zeta(zeta),
        remainder_distance,
    })
}

/// `x` of the `k2` built from `zeta`, via the residue route.
pub fn x_from_zeta(zeta: &RootParams, tol: f64) -> Result<LaurentSeries> {
    let k2 = crate::rootsub::full_product(zeta);
    let deg = k2.c.high_power().unwrap_or(0).max(0) as usize;
    Ok(k2_triangular_from_cd(&k2.c, &k2.d, deg, tol)?.x)
}

/// Zeta parameters of the `k2` with coordinate `x`, through the Hankel route and peeling.
pub fn zeta_from_x(x: &LaurentSeries, n: usize, tol: f64) -> Result<Peeled> {
    let (k2, _) = k2_from_x(x, n, tol)?;
    let k2 = k2.cleanup(1e-15);
    let top = k2.c.high_power().unwrap_or(0).max(0) as usize;
    let n_max = top.min(x.high_power().unwrap_or(0).max(0) as usize);
    zeta_from_loop(&k2, n_max, tol)
}
