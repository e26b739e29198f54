//! The minimal ring interface the recursions run over, plus truncated power
//! series in one grading variable.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};

/// Commutative ring with cheap clones. Blanket-implemented.
pub trait Ring: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {}

impl<T> Ring for T where T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> {}

/// Power series `sum_k c_k t^k` with all terms of degree above `cap` dropped.
///
/// Constants built through `Zero`/`One` carry no cap; a binary operation keeps
/// the smaller cap of its operands.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<R> {
    coeffs: Vec<R>,
    cap: usize,
}

impl<R: Ring> Truncated<R> {
    pub fn new(mut coeffs: Vec<R>, cap: usize) -> Self {
        coeffs.truncate(cap.saturating_add(1));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs, cap }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c], usize::MAX)
    }

    /// `c t^power`, zero if `power > cap`.
    pub fn monomial(c: R, power: usize, cap: usize) -> Self {
        if power > cap {
            return Self::new(Vec::new(), cap);
        }
        let mut coeffs = vec![R::zero(); power + 1];
        coeffs[power] = c;
        Self::new(coeffs, cap)
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Drops the constant term and divides by `t`.
    pub fn shift_down(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).cloned().collect(), self.cap.saturating_sub(1))
    }

    /// Horner evaluation at `t = v`.
    pub fn eval(&self, v: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * v.clone() + c.clone())
    }
}

impl<R: Ring> Add for Truncated<R> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let cap = self.cap.min(rhs.cap);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        Self::new(coeffs, cap)
    }
}

impl<R: Ring> Mul for Truncated<R> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let cap = self.cap.min(rhs.cap);
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::new(Vec::new(), cap);
        }
        let top = (self.coeffs.len() + rhs.coeffs.len() - 2).min(cap);
        let mut out = vec![R::zero(); top + 1];
        for (a, x) in self.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (b, y) in rhs.coeffs.iter().enumerate() {
                if a + b > top {
                    break;
                }
                out[a + b] = out[a + b].clone() + x.clone() * y.clone();
            }
        }
        Self::new(out, cap)
    }
}

impl<R: Ring> Zero for Truncated<R> {
    fn zero() -> Self {
        Self::new(Vec::new(), usize::MAX)
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Truncated<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_and_caps() {
        let a = Truncated::new(vec![1i64, 1], 3);
        let mut p = Truncated::one();
        for _ in 0..5 {
            p = p * a.clone();
        }
        assert_eq!(p.coeffs(), &[1, 5, 10, 10]);
        assert_eq!(p.cap(), 3);
        assert_eq!(p.eval(&2), 1 + 10 + 40 + 80);
        assert_eq!(p.shift_down().coeffs(), &[5, 10, 10]);
        assert!(Truncated::monomial(4i64, 4, 3).is_zero());
    }
}
