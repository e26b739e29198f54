//! Hermitian sums `b_n(m)`, numerical extraction of `s_{n,r}`, and the
//! four-variable inverse formula for `zeta_1`.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::recursion::x1_table;
use super::ring::Truncated;
use crate::rootsub::RootParams;

type C = Complex64;
type T = Truncated<C>;
type E = Truncated<T>;

fn value(zeta: &RootParams, k: usize) -> C {
    if k == 0 {
        return C::zero();
    }
    zeta.values.get(k - 1).copied().unwrap_or_default()
}

/// `b_n(m) = sum_{k >= n} zeta_k zeta_bar_{k+m}` over the support.
pub fn b_sum(zeta: &RootParams, n: usize, m: usize) -> C {
    (n.max(1)..=zeta.values.len())
        .map(|k| value(zeta, k) * value(zeta, k + m).conj())
        .sum()
}

/// `s_{n,0}, .., s_{n,r_max}` at the given `zeta`.
///
/// Isolates `zeta_n p_n s_n = x1*(0, .., 0, zeta_n, ..) - x1*(0, .., 0, 0, zeta_{n+1}, ..)`,
/// runs the recursion with `zeta_n` kept as a formal variable `e` and every
/// `zeta_bar_k` carrying a grading variable `t`, divides by `e` and by
/// `p_n = prod_{k > n} (1 + t zeta_k zeta_bar_k)`, and reads off the `t^r`
/// coefficients after setting `e = zeta_n`.
pub fn s_components(zeta: &RootParams, n: usize, r_max: usize) -> Vec<C> {
    let len = zeta.values.len().max(n);
    if n == 0 {
        return vec![C::zero(); r_max + 1];
    }
    let e_cap = (1 + r_max * len) / n + 1;
    let inner = |c: C, t_pow: usize| T::monomial(c, t_pow, r_max);
    let outer = |x: T| E::new(vec![x], e_cap);

    let inputs = |with_n: bool| -> (Vec<E>, Vec<E>) {
        let mut z = Vec::with_capacity(len);
        let mut zb = Vec::with_capacity(len);
        for k in 1..=len {
            if k < n || (k == n && !with_n) {
                z.push(E::zero());
                zb.push(E::zero());
            } else if k == n {
                z.push(E::monomial(T::one(), 1, e_cap));
                zb.push(outer(inner(value(zeta, k).conj(), 1)));
            } else {
                z.push(outer(inner(value(zeta, k), 0)));
                zb.push(outer(inner(value(zeta, k).conj(), 1)));
            }
        }
        (z, zb)
    };
    let (z1, zb1) = inputs(true);
    let (z0, zb0) = inputs(false);
    let with = x1_table(&z1, &zb1).get(1, len).clone();
    let without = x1_table(&z0, &zb0).get(1, len).clone();
    let neg_one = outer(T::constant(C::new(-1.0, 0.0)));
    let diff = with + without * neg_one;

    let over_e = diff.shift_down().eval(&T::constant(value(zeta, n)));
    let mut s = over_e;
    for k in n + 1..=len {
        let v = value(zeta, k).norm_sqr();
        let inv: Vec<C> = (0..=r_max).map(|r| C::new((-v).powi(r as i32), 0.0)).collect();
        s = s * T::new(inv, r_max);
    }
    (0..=r_max).map(|r| s.coeff(r)).collect()
}

/// Which closed form [`s_identity_check`] tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SIdentity {
    /// `s_2 = b_2(1) + b_3(1)`, with no terms of higher degree.
    S2,
    /// `s_{n,1} = b_n(n-1) + b_{n+1}(n-1)` for every `n` from 2 to the support.
    SN1,
    /// The quadratic form for `s_{3,2}` in the variables `zeta_k zeta_bar_{k+1}`.
    S32,
}

/// `b_3(1)^2 + b_4(1)^2 + sum_{i>=4} u_i^2 + u_3 u_4 + 2 sum_{i>=4} u_i u_{i+1}`,
/// with `u_i = zeta_i zeta_bar_{i+1}`.
pub fn s32_closed_form(zeta: &RootParams) -> C {
    let u = |i: usize| value(zeta, i) * value(zeta, i + 1).conj();
    let top = zeta.values.len();
    let b3 = b_sum(zeta, 3, 1);
    let b4 = b_sum(zeta, 4, 1);
    let squares: C = (4..=top).map(|i| u(i) * u(i)).sum();
    let neighbours: C = (4..=top).map(|i| u(i) * u(i + 1)).sum();
    b3 * b3 + b4 * b4 + squares + u(3) * u(4) + 2.0 * neighbours
}

/// Largest deviation between `s` extracted from the recursion and the closed form.
pub fn s_identity_check(zeta: &RootParams, which: SIdentity) -> f64 {
    let top = zeta.values.len();
    match which {
        SIdentity::S2 => {
            let s = s_components(zeta, 2, 3);
            let claim = b_sum(zeta, 2, 1) + b_sum(zeta, 3, 1);
            s.iter()
                .enumerate()
                .map(|(r, v)| if r == 1 { (v - claim).norm() } else { v.norm() })
                .fold(0.0, f64::max)
        }
        SIdentity::SN1 => (2..=top.max(2))
            .map(|n| {
                let s = s_components(zeta, n, 1);
                (s[1] - (b_sum(zeta, n, n - 1) + b_sum(zeta, n + 1, n - 1))).norm()
            })
            .fold(0.0, f64::max),
        SIdentity::S32 => {
            let s = s_components(zeta, 3, 2);
            (s[2] - s32_closed_form(zeta)).norm()
        }
    }
}

/// `zeta_1` in terms of `x_1..x_4` (the residues `x1*(zeta_n, ..)`) and
/// `p_n = prod_{j > n} (1 + |zeta_j|^2)`, exact when `zeta` has support at most 4.
pub fn zeta1_four_vars(x: [C; 4], p: [f64; 4]) -> C {
    let [x1, x2, x3, x4] = x;
    let [p1, p2, p3, p4] = p;
    let (x3b, x4b) = (x3.conj(), x4.conj());
    x1 / p1 - x2 * x2 * x3b / (p1 * p2 * p3)
        + 2.0 * x2 * x3 * x3 * x3b * x4b / (p1 * p2 * p3 * p3 * p4)
        - 2.0 * x2 * x3 * x4b / (p1 * p3 * p4)
        - x3.powi(4) * x3b * x4b * x4b / (p1 * p2 * p3.powi(3) * p4 * p4)
        + x3.powi(3) * x4b * x4b / (p1 * p3 * p3 * p4 * p4)
}

/// The `x_n` and `p_n` inputs of [`zeta1_four_vars`] for `zeta_{first}, zeta_{first+1}, ..`.
pub fn four_var_inputs(zeta: &RootParams, first: usize) -> ([C; 4], [f64; 4]) {
    let len = zeta.values.len().max(first + 3);
    let z: Vec<C> = (1..=len).map(|k| value(zeta, k)).collect();
    let zb: Vec<C> = z.iter().map(|v| v.conj()).collect();
    let table = x1_table(&z, &zb);
    let x = std::array::from_fn(|k| *table.get(first + k, len));
    let p = std::array::from_fn(|k| {
        (first + k + 1..=len).map(|j| 1.0 + z[j - 1].norm_sqr()).product()
    });
    (x, p)
}
