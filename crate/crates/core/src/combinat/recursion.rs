//! The residue `x1*` as a function of the root-subgroup parameters, computed
//! by recursion on the number of variables.

use num_complex::Complex64;

use super::ring::Ring;
use crate::laurent::LaurentSeries;
use crate::rootsub::RootParams;

/// `x1*(zeta_i, ..., zeta_m)` for all `1 <= i <= m <= n`.
///
/// Entries are functions of `zeta` and `zeta_bar`, which the recursion treats
/// as independent inputs.
#[derive(Debug, Clone)]
pub struct X1Table<R> {
    n: usize,
    cells: Vec<R>,
}

impl<R: Ring> X1Table<R> {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `x1*(zeta_i, ..., zeta_m)`, 1-based and inclusive.
    pub fn get(&self, i: usize, m: usize) -> &R {
        assert!(1 <= i && i <= m && m <= self.n, "cell ({i}, {m}) outside table of size {}", self.n);
        &self.cells[(m - 1) * self.n + (i - 1)]
    }

    fn set(&mut self, i: usize, m: usize, v: R) {
        self.cells[(m - 1) * self.n + (i - 1)] = v;
    }
}

/// `a(w) b(w)` with powers of `w` above `max_deg` dropped.
fn mul_truncated<R: Ring>(a: &[R], b: &[R], max_deg: usize) -> Vec<R> {
    let mut out = vec![R::zero(); max_deg + 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            if i + j > max_deg {
                break;
            }
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Fills the table of `x1*` values for `zeta_1..zeta_n`.
///
/// With `N' = m - i + 1` variables in the window ending at `m`, the step to
/// `m + 1` is
///
/// `x1*(.., zeta_{m+1}) = (1 + zeta_{m+1} zeta_bar_{m+1})
///     sum_{s >= 0} zeta_bar_{m+1}^s sum_{I_1 + .. + I_{s+1} = s(N'+1) + 1} prod_l x1*(zeta_{I_l}, .., zeta_m)`
///
/// with each `I_l` in `1..=N'` counted relative to the window start. The inner
/// sum is the coefficient of `w^{s(N'+1)+1}` in `P(w)^{s+1}`,
/// `P(w) = sum_I x1*(zeta_I, ..) w^I`.
pub fn x1_table<R: Ring>(zeta: &[R], zeta_bar: &[R]) -> X1Table<R> {
    assert_eq!(zeta.len(), zeta_bar.len(), "zeta and zeta_bar lengths differ");
    let n = zeta.len();
    let mut table = X1Table { n, cells: vec![R::zero(); n * n] };
    if n == 0 {
        return table;
    }
    table.set(1, 1, zeta[0].clone());
    for m in 1..n {
        let bar = &zeta_bar[m];
        let norm = R::one() + zeta[m].clone() * bar.clone();
        for i in 1..=m {
            let width = m + 1 - i;
            let p: Vec<R> = (0..=width)
                .map(|d| if d == 0 { R::zero() } else { table.get(d + i - 1, m).clone() })
                .collect();
            let s_max = width - 1;
            let max_deg = s_max * (width + 1) + 1;
            let mut power: Vec<R> = p.clone();
            let mut bar_pow = R::one();
            let mut total = R::zero();
            for s in 0..=s_max {
                if s > 0 {
                    bar_pow = bar_pow * bar.clone();
                    if bar_pow.is_zero() {
                        break;
                    }
                    power = mul_truncated(&power, &p, max_deg);
                }
                let target = s * (width + 1) + 1;
                if let Some(c) = power.get(target).filter(|c| !c.is_zero()) {
                    total = total + c.clone() * bar_pow.clone();
                }
            }
            table.set(i, m + 1, norm.clone() * total);
        }
        table.set(m + 1, m + 1, zeta[m].clone());
    }
    table
}

fn complex_inputs(zeta: &RootParams, n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let z: Vec<Complex64> = (0..n)
        .map(|k| zeta.values.get(k).copied().unwrap_or_default())
        .collect();
    let zb = z.iter().map(|v| v.conj()).collect();
    (z, zb)
}

/// `x1*(zeta_1, ..., zeta_n)`: the values are read as `zeta_1, zeta_2, ..`
/// and padded with zeros to length `n`.
pub fn x1_recursion(zeta: &RootParams, n: usize) -> Complex64 {
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let (z, zb) = complex_inputs(zeta, n);
    *x1_table(&z, &zb).get(1, n)
}

/// `x* = sum_j x1*(zeta_j, zeta_{j+1}, ..) z^{-j}` over the support of `zeta`.
pub fn full_x_star(zeta: &RootParams) -> LaurentSeries {
    let n = zeta.values.len();
    if n == 0 {
        return LaurentSeries::zero();
    }
    let (z, zb) = complex_inputs(zeta, n);
    let table = x1_table(&z, &zb);
    LaurentSeries::from_terms((1..=n).map(|j| (-(j as i64), *table.get(j, n))))
}

/// `x`, with powers `>= 1`; the star of [`full_x_star`].
pub fn full_x(zeta: &RootParams) -> LaurentSeries {
    full_x_star(zeta).star()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_cases_match_closed_forms() {
        let (z1, z2, z3) = (c(0.3, 0.1), c(-0.2, 0.25), c(0.15, -0.05));
        let p = RootParams::zeta(vec![z1]);
        assert_eq!(x1_recursion(&p, 1), z1);

        let p = RootParams::zeta(vec![z1, z2]);
        assert!((x1_recursion(&p, 2) - z1 * (1.0 + z2.norm_sqr())).norm() < 1e-16);
        let xs = full_x_star(&p);
        assert_eq!(xs.coeff(-2), z2);

        let p = RootParams::zeta(vec![z1, z2, z3]);
        let expect = (1.0 + z3.norm_sqr()) * (z1 * (1.0 + z2.norm_sqr()) + z2 * z2 * z3.conj());
        assert!((x1_recursion(&p, 3) - expect).norm() < 1e-16);
    }

    #[test]
    fn exact_rational_mode() {
        let q = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
        let z = vec![q(1, 2), q(1, 3), q(1, 5)];
        let t = x1_table(&z, &z);
        // (1 + 1/25) (1/2 (1 + 1/9) + 1/9 * 1/5)
        let expect = q(26, 25) * (q(1, 2) * q(10, 9) + q(1, 45));
        assert_eq!(*t.get(1, 3), expect);
    }

    #[test]
    fn zeros_pad_without_effect() {
        let p = RootParams::zeta(vec![c(0.4, 0.0), c(0.1, 0.2)]);
        assert!((x1_recursion(&p, 2) - x1_recursion(&p, 5)).norm() < 1e-16);
    }
}
