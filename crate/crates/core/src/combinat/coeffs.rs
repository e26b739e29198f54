//! Index pairs and the integer coefficient tables of `x1*`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, SparsePoly, MAX_VARS};
use super::recursion::x1_table;
use super::ring::{Ring, Truncated};
use crate::error::{Error, Result};

/// Default cap on `sum i` for enumerations and expansions.
pub const DEFAULT_MAX_WEIGHT: usize = 12;

/// Multi-index `(i_0, .., i_L; j_1, .., j_L)` labelling the monomial
/// `zeta_{i_0} zeta_{i_1} zeta_bar_{j_1} .. zeta_{i_L} zeta_bar_{j_L}`.
///
/// Construction checks positivity, monotonicity, lengths and
/// `sum i - sum j = 1`. The interlacing conditions are exposed as predicates so
/// that pairs violating them can still be fed to the cluster enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct IndexPair {
    i: Vec<u32>,
    j: Vec<u32>,
}

#[derive(Deserialize)]
struct RawPair {
    i: Vec<u32>,
    j: Vec<u32>,
}

impl TryFrom<RawPair> for IndexPair {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        IndexPair::new(raw.i, raw.j)
    }
}

impl IndexPair {
    pub fn new(i: Vec<u32>, j: Vec<u32>) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidIndex(format!("i={i:?}, j={j:?}: {why}")));
        if i.len() != j.len() + 1 {
            return bad("need exactly one more i-index than j-indices");
        }
        if i.iter().chain(&j).any(|&v| v == 0) {
            return bad("indices must be positive");
        }
        if i.windows(2).any(|w| w[0] > w[1]) || j.windows(2).any(|w| w[0] > w[1]) {
            return bad("indices must be nondecreasing");
        }
        let si: i64 = i.iter().map(|&v| v as i64).sum();
        let sj: i64 = j.iter().map(|&v| v as i64).sum();
        if si - sj != 1 {
            return bad("sum i - sum j must be 1");
        }
        Ok(Self { i, j })
    }

    pub fn i(&self) -> &[u32] {
        &self.i
    }

    pub fn j(&self) -> &[u32] {
        &self.j
    }

    /// `L`, the number of `j`-indices.
    pub fn len(&self) -> usize {
        self.j.len()
    }

    pub fn is_empty(&self) -> bool {
        self.j.is_empty()
    }

    /// `sum i`.
    pub fn weight(&self) -> usize {
        self.i.iter().map(|&v| v as usize).sum()
    }

    /// `i_{l-1} < j_l` for every `l`.
    pub fn satisfies_strict(&self) -> bool {
        self.j.iter().enumerate().all(|(l, &jl)| self.i[l] < jl)
    }

    /// `i_l <= j_l` for `l >= 1`.
    pub fn satisfies_inequal(&self) -> bool {
        self.j.iter().enumerate().all(|(l, &jl)| self.i[l + 1] <= jl)
    }

    pub fn is_admissible(&self) -> bool {
        self.satisfies_strict() && self.satisfies_inequal()
    }

    /// No value is shared between `i_1..i_L` and `j_1..j_L`.
    pub fn is_generic(&self) -> bool {
        self.i[1..].iter().all(|v| !self.j.contains(v))
    }

    /// The monomial this pair labels. Indices must not exceed [`MAX_VARS`].
    pub fn monomial(&self) -> Monomial {
        let mut m = Monomial::one();
        for &k in &self.i {
            m = m.times(&Monomial::zeta(k as usize));
        }
        for &k in &self.j {
            m = m.times(&Monomial::zeta_bar(k as usize));
        }
        m
    }

    /// `prod zeta_i prod zeta_bar_j`, skipping `i_0` when `skip_first` is set.
    pub fn eval<R: Ring>(&self, zeta: &[R], zeta_bar: &[R], skip_first: bool) -> R {
        let start = usize::from(skip_first);
        let mut v = R::one();
        for &k in &self.i[start..] {
            v = v * zeta[k as usize - 1].clone();
        }
        for &k in &self.j {
            v = v * zeta_bar[k as usize - 1].clone();
        }
        v
    }

    /// Every pair with `sum i <= max_weight`, in ascending order.
    pub fn enumerate(max_weight: usize) -> Vec<IndexPair> {
        let mut out = Vec::new();
        for total in 1..=max_weight as u32 {
            for parts in 1..=total {
                let is = partitions(total, parts);
                let js = match (parts, total) {
                    (1, 1) => vec![Vec::new()],
                    (1, _) => Vec::new(),
                    _ => partitions(total - 1, parts - 1),
                };
                for i in &is {
                    for j in &js {
                        out.push(IndexPair { i: i.clone(), j: j.clone() });
                    }
                }
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for IndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i={:?} j={:?}", self.i, self.j)
    }
}

/// Nondecreasing sequences of `parts` positive integers summing to `total`.
pub fn partitions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, parts: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let mut v = min;
        while v * parts <= rest {
            cur.push(v);
            go(rest - v, parts - 1, v, cur, out);
            cur.pop();
            v += 1;
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(total, parts, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// One exported coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub i: Vec<u32>,
    pub j: Vec<u32>,
    pub c: i64,
}

/// The coefficients `c_{i,j}` of `s_n`, keyed with `i_0 = n`.
///
/// Every stored value is a positive integer; construction rejects anything else.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    max_weight: usize,
    entries: BTreeMap<IndexPair, i64>,
}

impl CoefficientTable {
    pub fn new(max_weight: usize, entries: BTreeMap<IndexPair, i64>) -> Result<Self> {
        if let Some((p, c)) = entries.iter().find(|(_, &c)| c <= 0) {
            return Err(Error::InvalidArgument(format!("coefficient {c} at {p} is not a positive integer")));
        }
        Ok(Self { max_weight, entries })
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn get(&self, pair: &IndexPair) -> Option<i64> {
        self.entries.get(pair).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IndexPair, i64)> {
        self.entries.iter().map(|(p, c)| (p, *c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn export(&self) -> Vec<CoefficientEntry> {
        self.iter()
            .map(|(p, c)| CoefficientEntry { i: p.i.clone(), j: p.j.clone(), c })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.export()).expect("entries serialize")
    }
}

/// Symbolic expansion of `x1*` truncated at `sum i <= max_weight`.
///
/// `monomial` holds the raw coefficient of every monomial of `x1*`. `reduced`
/// holds the coefficients left after writing
/// `x1* = sum_n zeta_n prod_{k > n} (1 + zeta_k zeta_bar_k) s_n`.
#[derive(Debug, Clone)]
pub struct X1Expansion {
    pub max_weight: usize,
    pub monomial: BTreeMap<IndexPair, i64>,
    pub reduced: BTreeMap<IndexPair, i64>,
}

fn symbolic_inputs(n: usize, cap: usize) -> (Vec<SparsePoly>, Vec<SparsePoly>) {
    let z = (1..=n).map(|k| SparsePoly::monomial(Monomial::zeta(k), 1, cap)).collect();
    let zb = (1..=n).map(|k| SparsePoly::monomial(Monomial::zeta_bar(k), 1, cap)).collect();
    (z, zb)
}

fn pair_of(m: &Monomial) -> Result<IndexPair> {
    IndexPair::new(m.zeta_indices(), m.bar_indices())
}

fn narrow(c: i128) -> Result<i64> {
    i64::try_from(c).map_err(|_| Error::InvalidArgument(format!("coefficient {c} exceeds i64")))
}

/// Expands `x1*(zeta_1, .., zeta_W)` with weight cap `W = max_weight`, and
/// divides out the products `prod_{k > n} (1 + zeta_k zeta_bar_k)`.
///
/// A monomial of `x1*` with `sum i <= W` has total weight `2 sum i - 1`, so
/// truncating every intermediate at weight `2W - 1` leaves those coefficients
/// exact.
pub fn expand_x1(max_weight: usize) -> Result<X1Expansion> {
    if max_weight == 0 || max_weight > MAX_VARS {
        return Err(Error::InvalidArgument(format!("max_weight must be in 1..={MAX_VARS}")));
    }
    let cap = 2 * max_weight - 1;
    let (z, zb) = symbolic_inputs(max_weight, cap);
    let x1 = x1_table(&z, &zb).get(1, max_weight).clone();

    let mut monomial = BTreeMap::new();
    let mut groups: BTreeMap<usize, SparsePoly> = BTreeMap::new();
    for (m, c) in x1.terms() {
        let c64 = narrow(c)?;
        monomial.insert(pair_of(&m)?, c64);
        let n = m.min_zeta_index().expect("every term of x1* carries a zeta factor");
        let rest = m.divide_zeta(n).expect("min index divides");
        let g = groups.entry(n).or_insert_with(|| SparsePoly::zero().with_cap(cap - n));
        *g = g.clone() + SparsePoly::monomial(rest, c, cap - n);
    }

    let mut reduced = BTreeMap::new();
    for (n, g) in groups {
        let sub_cap = cap - n;
        let mut s = g;
        for k in n + 1..=max_weight {
            s = s * inverse_one_plus(k, sub_cap);
        }
        for (m, c) in s.terms() {
            let mut i = vec![n as u32];
            i.extend(m.zeta_indices());
            let pair = IndexPair::new(i, m.bar_indices())?;
            reduced.insert(pair, narrow(c)?);
        }
    }
    Ok(X1Expansion { max_weight, monomial, reduced })
}

/// `1 / (1 + zeta_k zeta_bar_k)` as a geometric series truncated at `cap`.
fn inverse_one_plus(k: usize, cap: usize) -> SparsePoly {
    let v = SparsePoly::monomial(Monomial::zeta(k), 1, cap) * SparsePoly::monomial(Monomial::zeta_bar(k), 1, cap);
    let neg_v = v * SparsePoly::monomial(Monomial::one(), -1, cap);
    let mut term = SparsePoly::one().with_cap(cap);
    let mut total = term.clone();
    while !term.is_zero() {
        term = term * neg_v.clone();
        total = total + term.clone();
    }
    total
}

impl X1Expansion {
    /// The reduced coefficients as a validated table.
    pub fn table(&self) -> Result<CoefficientTable> {
        CoefficientTable::new(self.max_weight, self.reduced.clone())
    }

    pub fn max_len(&self) -> usize {
        self.monomial.keys().chain(self.reduced.keys()).map(IndexPair::len).max().unwrap_or(0)
    }

    /// Checks both tables against the recursion at random rational points.
    ///
    /// Each sample draws independent rationals `r_k`, `rb_k` and substitutes
    /// `zeta_k = r_k t^k`, `zeta_bar_k = rb_k t^k` in power series truncated at
    /// `t^{2W - 1}`. The recursion, the monomial table and the factored form
    /// must agree exactly. At least `L + 2` samples are drawn.
    pub fn certify(&self, samples: usize, seed: u64) -> Result<()> {
        let w = self.max_weight;
        let cap = 2 * w - 1;
        let samples = samples.max(self.max_len() + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        type Q = Truncated<BigRational>;
        let rational = |rng: &mut ChaCha8Rng| {
            BigRational::new(BigInt::from(rng.gen_range(1..=12i64)), BigInt::from(rng.gen_range(1..=12i64)))
        };
        let lift = |c: i64| Q::constant(BigRational::from_integer(BigInt::from(c)));
        for sample in 0..samples {
            let z: Vec<Q> = (1..=w).map(|k| Q::monomial(rational(&mut rng), k, cap)).collect();
            let zb: Vec<Q> = (1..=w).map(|k| Q::monomial(rational(&mut rng), k, cap)).collect();
            let reference = x1_table(&z, &zb).get(1, w).clone();

            let raw = self
                .monomial
                .iter()
                .fold(Q::zero(), |acc, (p, &c)| acc + lift(c) * p.eval(&z, &zb, false));
            if raw != reference {
                return Err(Error::IdentityTestFailed(format!(
                    "monomial table disagrees with the recursion at sample {sample}"
                )));
            }

            let mut factored = Q::zero();
            for n in 1..=w {
                let s_n = self
                    .reduced
                    .iter()
                    .filter(|(p, _)| p.i[0] as usize == n)
                    .fold(Q::zero(), |acc, (p, &c)| acc + lift(c) * p.eval(&z, &zb, true));
                let p_n = (n + 1..=w).fold(Q::one(), |acc, k| {
                    acc * (Q::one() + z[k - 1].clone() * zb[k - 1].clone())
                });
                factored = factored + z[n - 1].clone() * p_n * s_n;
            }
            if factored != reference {
                return Err(Error::IdentityTestFailed(format!(
                    "factored form disagrees with the recursion at sample {sample}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_pair_validation() {
        assert!(IndexPair::new(vec![1], vec![]).is_ok());
        assert!(IndexPair::new(vec![2], vec![]).is_err());
        assert!(IndexPair::new(vec![1, 1, 3], vec![2, 2]).is_ok());
        assert!(IndexPair::new(vec![2, 1], vec![2]).is_err());
        let p = IndexPair::new(vec![1, 1, 3], vec![2, 2]).unwrap();
        assert!(p.satisfies_strict());
        assert!(!p.satisfies_inequal());
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"i":[1,1,3],"j":[2,2]}"#);
        assert!(serde_json::from_str::<IndexPair>(r#"{"i":[2],"j":[]}"#).is_err());
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(5, 2), vec![vec![1, 4], vec![2, 3]]);
        assert_eq!(partitions(6, 3).len(), 3);
        let pairs = IndexPair::enumerate(4);
        assert!(pairs.iter().all(|p| p.weight() <= 4));
        assert!(pairs.contains(&IndexPair::new(vec![1, 2], vec![2]).unwrap()));
    }

    #[test]
    fn low_weight_expansion() {
        let e = expand_x1(5).unwrap();
        e.certify(3, 7).unwrap();
        let t = e.table().unwrap();
        assert_eq!(t.get(&IndexPair::new(vec![1], vec![]).unwrap()), Some(1));
        // s_2 = zeta_2 zeta_bar_3 + 2 zeta_3 zeta_bar_4 + ..
        assert_eq!(t.get(&IndexPair::new(vec![2, 2], vec![3]).unwrap()), Some(1));
        assert_eq!(t.get(&IndexPair::new(vec![2, 3], vec![4]).unwrap()), Some(2));
        assert!(t.iter().all(|(p, _)| p.weight() <= 5));
        // zeta_1 zeta_2 zeta_bar_2 appears in x1* through 1 + |zeta_2|^2
        assert_eq!(e.monomial.get(&IndexPair::new(vec![1, 2], vec![2]).unwrap()), Some(&1));
    }
}
