//! Sparse integer polynomials in `zeta_k`, `zeta_bar_k`, graded by index weight.

use std::collections::HashMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use super::ring::Ring;

/// Largest variable index a [`Monomial`] can hold.
pub const MAX_VARS: usize = 16;

/// Exponents of `zeta_1..zeta_16` followed by `zeta_bar_1..zeta_bar_16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial([u8; 2 * MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Self([0; 2 * MAX_VARS])
    }

    pub fn zeta(k: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&k), "variable index {k} out of range");
        let mut e = [0; 2 * MAX_VARS];
        e[k - 1] = 1;
        Self(e)
    }

    pub fn zeta_bar(k: usize) -> Self {
        assert!((1..=MAX_VARS).contains(&k), "variable index {k} out of range");
        let mut e = [0; 2 * MAX_VARS];
        e[MAX_VARS + k - 1] = 1;
        Self(e)
    }

    pub fn zeta_exponent(&self, k: usize) -> u8 {
        self.0[k - 1]
    }

    pub fn bar_exponent(&self, k: usize) -> u8 {
        self.0[MAX_VARS + k - 1]
    }

    /// `sum_k k (e_k + e_bar_k)`.
    pub fn weight(&self) -> usize {
        (1..=MAX_VARS)
            .map(|k| k * (self.zeta_exponent(k) as usize + self.bar_exponent(k) as usize))
            .sum()
    }

    /// `sum_k k (e_k - e_bar_k)`: the phase picked up under `zeta_k -> e^{ik theta} zeta_k`.
    pub fn charge(&self) -> i64 {
        (1..=MAX_VARS)
            .map(|k| k as i64 * (self.zeta_exponent(k) as i64 - self.bar_exponent(k) as i64))
            .sum()
    }

    pub fn min_zeta_index(&self) -> Option<usize> {
        (1..=MAX_VARS).find(|&k| self.zeta_exponent(k) > 0)
    }

    /// Indices of the `zeta` factors, with multiplicity, ascending.
    pub fn zeta_indices(&self) -> Vec<u32> {
        expand(&self.0[..MAX_VARS])
    }

    pub fn bar_indices(&self) -> Vec<u32> {
        expand(&self.0[MAX_VARS..])
    }

    /// `self / zeta_k`, if `zeta_k` divides it.
    pub fn divide_zeta(&self, k: usize) -> Option<Self> {
        let mut e = self.0;
        e[k - 1] = e[k - 1].checked_sub(1)?;
        Some(Self(e))
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0) {
            *a = a.checked_add(b).expect("monomial exponent overflow");
        }
        Self(e)
    }
}

fn expand(exps: &[u8]) -> Vec<u32> {
    exps.iter()
        .enumerate()
        .flat_map(|(k, &e)| std::iter::repeat_n(k as u32 + 1, e as usize))
        .collect()
}

/// Integer polynomial with every monomial of weight above `cap` dropped.
///
/// As with [`super::Truncated`], `Zero`/`One` carry no cap and operations keep
/// the smaller one.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePoly {
    terms: HashMap<Monomial, i128>,
    cap: usize,
}

impl SparsePoly {
    pub fn monomial(m: Monomial, c: i128, cap: usize) -> Self {
        let mut terms = HashMap::new();
        if c != 0 && m.weight() <= cap {
            terms.insert(m, c);
        }
        Self { terms, cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> i128 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// Terms sorted by monomial.
    pub fn terms(&self) -> Vec<(Monomial, i128)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (*m, *c)).collect();
        v.sort();
        v
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.terms.retain(|m, _| m.weight() <= cap);
        self.cap = cap;
        self
    }

    fn accumulate(&mut self, m: Monomial, c: i128) {
        let slot = self.terms.entry(m).or_insert(0);
        *slot = slot.checked_add(c).expect("coefficient overflow");
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    /// Substitutes ring values; `lift` maps integer coefficients into the ring.
    pub fn eval<R: Ring>(&self, zeta: &[R], zeta_bar: &[R], lift: impl Fn(i128) -> R) -> R {
        let mut total = R::zero();
        for (m, c) in self.terms() {
            let mut v = lift(c);
            for k in m.zeta_indices() {
                v = v * zeta[k as usize - 1].clone();
            }
            for k in m.bar_indices() {
                v = v * zeta_bar[k as usize - 1].clone();
            }
            total = total + v;
        }
        total
    }
}

impl Add for SparsePoly {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let cap = self.cap.min(rhs.cap);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        for (m, c) in small.terms {
            big.accumulate(m, c);
        }
        big.with_cap(cap)
    }
}

impl Mul for SparsePoly {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let cap = self.cap.min(rhs.cap);
        let weighted = |p: &SparsePoly| -> Vec<(Monomial, i128, usize)> {
            let mut v: Vec<_> = p.terms.iter().map(|(m, c)| (*m, *c, m.weight())).collect();
            v.sort_by_key(|t| t.2);
            v
        };
        let (a, b) = (weighted(&self), weighted(&rhs));
        let mut out = SparsePoly { terms: HashMap::new(), cap };
        for (ma, ca, wa) in &a {
            for (mb, cb, wb) in &b {
                if wa + wb > cap {
                    break;
                }
                out.accumulate(ma.times(mb), ca.checked_mul(*cb).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl Zero for SparsePoly {
    fn zero() -> Self {
        Self { terms: HashMap::new(), cap: usize::MAX }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SparsePoly {
    fn one() -> Self {
        Self::monomial(Monomial::one(), 1, usize::MAX)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_and_truncation() {
        let z2 = SparsePoly::monomial(Monomial::zeta(2), 1, 6);
        let zb3 = SparsePoly::monomial(Monomial::zeta_bar(3), 1, 6);
        let p = (SparsePoly::one() + z2.clone()) * (SparsePoly::one() + zb3);
        assert_eq!(p.len(), 4);
        let sq = p.clone() * p;
        // (1 + z2)^2 (1 + zb3)^2 minus the terms of weight > 6
        assert_eq!(sq.coeff(&Monomial::zeta(2).times(&Monomial::zeta(2))), 1);
        assert_eq!(sq.coeff(&Monomial::zeta_bar(3).times(&Monomial::zeta_bar(3))), 1);
        assert_eq!(sq.coeff(&Monomial::zeta(2).times(&Monomial::zeta_bar(3))), 4);
        assert_eq!(sq.len(), 6);
        let m = Monomial::zeta(2).times(&Monomial::zeta_bar(3));
        assert_eq!(m.charge(), -1);
        assert_eq!(m.weight(), 5);
        assert_eq!(m.zeta_indices(), vec![2]);
        assert_eq!(m.divide_zeta(2).unwrap(), Monomial::zeta_bar(3));
        assert!(m.divide_zeta(1).is_none());
    }
}
