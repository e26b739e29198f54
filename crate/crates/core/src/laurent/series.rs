use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Which Hardy half of a Laurent series to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Half {
    /// Powers `>= 0`.
    Plus,
    /// Powers `< 0`.
    Minus,
}

/// A finitely supported Laurent series `sum_k c_k z^k` with complex coefficients.
///
/// The stored coefficient vector is canonically trimmed: its first and last
/// entries are nonzero unless the series is zero, in which case it is empty.
/// Only exact zeros are trimmed; use [`LaurentSeries::cleanup`] to drop
/// numerically negligible terms.
#[derive(Clone, PartialEq, Default)]
pub struct LaurentSeries {
    min_power: i64,
    coeffs: Vec<Complex64>,
}

impl LaurentSeries {
    /// Builds a series whose coefficient of `z^(min_power + k)` is `coeffs[k]`.
    pub fn new(min_power: i64, coeffs: Vec<Complex64>) -> Self {
        let mut s = Self { min_power, coeffs };
        s.trim();
        s
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn monomial(power: i64, c: Complex64) -> Self {
        Self::new(power, vec![c])
    }

    /// Sums `(power, coefficient)` pairs; repeated powers accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex64)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
        for (p, c) in terms {
            coeffs[(p - lo) as usize] += c;
        }
        Self::new(lo, coeffs)
    }

    /// Real-coefficient polynomial `sum_k coeffs[k] z^k`.
    pub fn from_real_poly(coeffs: &[f64]) -> Self {
        Self::new(0, coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    fn trim(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        let lead = self.coeffs.iter().take_while(|c| **c == zero).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_power = 0;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_power += lead as i64;
        }
        while self.coeffs.last() == Some(&zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest power with a nonzero coefficient.
    pub fn low_power(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.min_power)
    }

    /// Highest power with a nonzero coefficient.
    pub fn high_power(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_power + self.coeffs.len() as i64 - 1)
    }

    /// `max |k|` over the support, 0 for the zero series.
    pub fn max_abs_power(&self) -> i64 {
        match (self.low_power(), self.high_power()) {
            (Some(lo), Some(hi)) => lo.abs().max(hi.abs()),
            _ => 0,
        }
    }

    pub fn coeff(&self, power: i64) -> Complex64 {
        let k = power - self.min_power;
        if k < 0 || k as usize >= self.coeffs.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[k as usize]
        }
    }

    /// Iterates over stored `(power, coefficient)` pairs, including interior zeros.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(k, c)| (self.min_power + k as i64, *c))
    }

    /// `f* = sum conj(f_n) z^{-n}`; on the circle this is the complex conjugate.
    pub fn star(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        match self.high_power() {
            Some(hi) => Self::new(-hi, coeffs),
            None => Self::zero(),
        }
    }

    pub fn project(&self, half: Half) -> Self {
        match half {
            Half::Plus => self.truncate(0, i64::MAX),
            Half::Minus => self.truncate(i64::MIN, -1),
        }
    }

    /// Keeps only the powers in `lo..=hi`.
    pub fn truncate(&self, lo: i64, hi: i64) -> Self {
        if self.is_zero() || lo > hi {
            return Self::zero();
        }
        let start = lo.max(self.min_power);
        let end = hi.min(self.high_power().unwrap());
        if start > end {
            return Self::zero();
        }
        let a = (start - self.min_power) as usize;
        let b = (end - self.min_power) as usize;
        Self::new(start, self.coeffs[a..=b].to_vec())
    }

    /// Zeroes coefficients of modulus `<= tol` and re-trims.
    pub fn cleanup(&self, tol: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if c.norm() <= tol { Complex64::new(0.0, 0.0) } else { *c })
            .collect();
        Self::new(self.min_power, coeffs)
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            min_power: self.min_power + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.min_power, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.min_power, self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        // Horner on the polynomial part, then rescale by z^min_power.
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.min_power as i32)
    }

    /// Sum of squared coefficient moduli (the squared L^2 norm on the circle).
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).max_coeff_abs()
    }

    /// Taylor expansion of `1/self` about 0 through `z^order`.
    ///
    /// Requires a power series (no negative powers) with `|self(0)| > tol`.
    pub fn invert_series(&self, order: usize, tol: f64) -> Result<Self> {
        if let Some(lo) = self.low_power() {
            if lo < 0 {
                return Err(Error::InvalidArgument(
                    "invert_series needs a series without negative powers".into(),
                ));
            }
        }
        let d0 = self.coeff(0);
        if d0.norm() <= tol {
            return Err(Error::ZeroConstantTerm {
                modulus: d0.norm(),
                tol,
            });
        }
        let inv0 = 1.0 / d0;
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        out[0] = inv0;
        for n in 1..=order {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 1..=n {
                acc += self.coeff(k as i64) * out[n - k];
            }
            out[n] = -acc * inv0;
        }
        Ok(Self::new(0, out))
    }

    /// Conjugate function: coefficient `n` is multiplied by `-i sign(n)`.
    ///
    /// For a real-valued `u` on the circle, `u + i H(u)` extends holomorphically
    /// into the disk.
    pub fn conjugate_function(&self) -> Self {
        let terms = self.terms().map(|(p, c)| {
            let factor = match p.signum() {
                1 => Complex64::new(0.0, -1.0),
                -1 => Complex64::new(0.0, 1.0),
                _ => Complex64::new(0.0, 0.0),
            };
            (p, c * factor)
        });
        Self::from_terms(terms)
    }
}

fn combine(a: &LaurentSeries, b: &LaurentSeries, sign: f64) -> LaurentSeries {
    if a.is_zero() {
        return b.scale_real(sign);
    }
    if b.is_zero() {
        return a.clone();
    }
    let lo = a.min_power.min(b.min_power);
    let hi = a.high_power().unwrap().max(b.high_power().unwrap());
    let coeffs = (lo..=hi).map(|p| a.coeff(p) + b.coeff(p) * sign).collect();
    LaurentSeries::new(lo, coeffs)
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        combine(self, rhs, 1.0)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        combine(self, rhs, -1.0)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        self.scale_real(-1.0)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        if self.is_zero() || rhs.is_zero() {
            return LaurentSeries::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        LaurentSeries::new(self.min_power + rhs.min_power, out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, c) in self.terms() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)z^{}", c.re, c.im, p)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    power: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    terms: Vec<TermJson>,
}

impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .terms()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(power, c)| TermJson {
                power,
                re: c.re,
                im: c.im,
            })
            .collect();
        SeriesJson { terms }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(deserializer)?;
        Ok(Self::from_terms(
            raw.terms
                .into_iter()
                .map(|t| (t.power, Complex64::new(t.re, t.im))),
        ))
    }
}
