//! Cluster decompositions of an index multiset and the signed count built on them.

use serde::Serialize;

use super::coeffs::IndexPair;
use crate::error::Result;

/// Strictly interlacing run `i_1 < j_1 < i_2 < ..`; `j` has as many entries as
/// `i` (balanced) or one fewer (`i`-terminated).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub i: Vec<u32>,
    pub j: Vec<u32>,
}

impl Cluster {
    /// `sum i - sum j` for an `i`-terminated cluster, `sum j - sum i` for a balanced one.
    pub fn degree(&self) -> i64 {
        let si: i64 = self.i.iter().map(|&v| v as i64).sum();
        let sj: i64 = self.j.iter().map(|&v| v as i64).sum();
        if self.i.len() > self.j.len() {
            si - sj
        } else {
            sj - si
        }
    }

    /// Interleaved sequence `i_1, j_1, i_2, ..`.
    pub fn sequence(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.i.len() + self.j.len());
        for (k, &a) in self.i.iter().enumerate() {
            out.push(a);
            if let Some(&b) = self.j.get(k) {
                out.push(b);
            }
        }
        out
    }

    pub fn is_strictly_interlacing(&self) -> bool {
        self.sequence().windows(2).all(|w| w[0] < w[1])
    }
}

/// One `i`-terminated cluster followed by an ordered list of balanced clusters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub m_cluster: Cluster,
    pub n_clusters: Vec<Cluster>,
}

impl Decomposition {
    /// `(-1)^{s + L}` with `s` the number of balanced clusters.
    pub fn sign(&self, big_l: usize) -> i64 {
        if (self.n_clusters.len() + big_l).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// Multiset as ascending `(value, multiplicity)` pairs.
#[derive(Clone)]
struct Pool(Vec<(u32, u32)>);

impl Pool {
    fn from_sorted(v: &[u32]) -> Self {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &x in v {
            match out.last_mut() {
                Some((y, c)) if *y == x => *c += 1,
                _ => out.push((x, 1)),
            }
        }
        Self(out)
    }

    fn size(&self) -> u32 {
        self.0.iter().map(|(_, c)| c).sum()
    }

    fn values_above(&self, floor: u32) -> Vec<u32> {
        self.0.iter().filter(|(v, c)| *c > 0 && *v > floor).map(|(v, _)| *v).collect()
    }

    fn take(&mut self, v: u32) {
        let slot = self.0.iter_mut().find(|(x, _)| *x == v).expect("value present");
        slot.1 -= 1;
    }

    fn put(&mut self, v: u32) {
        let slot = self.0.iter_mut().find(|(x, _)| *x == v).expect("value present");
        slot.1 += 1;
    }
}

/// Extends `seq` by alternating draws from `is` and `js`, calling `emit` on each
/// admissible closing point. `next_is_i` says which pool the next element comes from.
fn grow(
    seq: &mut Vec<u32>,
    next_is_i: bool,
    balanced: bool,
    is: &mut Pool,
    js: &mut Pool,
    emit: &mut dyn FnMut(&[u32], &mut Pool, &mut Pool),
) {
    let closes_here = !seq.is_empty() && (next_is_i == balanced);
    if closes_here {
        emit(seq, is, js);
    }
    let floor = seq.last().copied().unwrap_or(0);
    let pool = if next_is_i { &*is } else { &*js };
    for v in pool.values_above(floor) {
        if next_is_i { is.take(v) } else { js.take(v) }
        seq.push(v);
        grow(seq, !next_is_i, balanced, is, js, emit);
        seq.pop();
        if next_is_i { is.put(v) } else { js.put(v) }
    }
}

fn split(seq: &[u32]) -> Cluster {
    Cluster {
        i: seq.iter().step_by(2).copied().collect(),
        j: seq.iter().skip(1).step_by(2).copied().collect(),
    }
}

fn balanced_sequences(is: &mut Pool, js: &mut Pool, prefix: &mut Vec<Cluster>, out: &mut dyn FnMut(&[Cluster])) {
    if is.size() == 0 && js.size() == 0 {
        out(prefix);
        return;
    }
    if is.size() != js.size() {
        return;
    }
    let mut seq = Vec::new();
    grow(&mut seq, true, true, is, js, &mut |s, is, js| {
        prefix.push(split(s));
        balanced_sequences(is, js, prefix, out);
        prefix.pop();
    });
}

/// Every decomposition of the index multiset of `pair`, each listed once.
///
/// Balanced clusters form an ordered tuple: two decompositions that differ only
/// in the order of distinct balanced clusters are counted separately, while
/// repeating an identical cluster does not multiply the count.
pub fn cluster_decompositions(pair: &IndexPair) -> Vec<Decomposition> {
    let mut is = Pool::from_sorted(pair.i());
    let mut js = Pool::from_sorted(pair.j());
    let mut out = Vec::new();
    let mut seq = Vec::new();
    grow(&mut seq, true, false, &mut is, &mut js, &mut |s, is, js| {
        let m_cluster = split(s);
        balanced_sequences(is, js, &mut Vec::new(), &mut |ns| {
            out.push(Decomposition { m_cluster: m_cluster.clone(), n_clusters: ns.to_vec() });
        });
    });
    out
}

/// `sum (-1)^{s + L}` over all cluster decompositions of `pair`.
pub fn cluster_coefficient(pair: &IndexPair) -> Result<i64> {
    let big_l = pair.len();
    Ok(cluster_decompositions(pair).iter().map(|d| d.sign(big_l)).sum())
}

/// [`cluster_coefficient`] from raw index lists, validating them first.
pub fn cluster_coefficient_of(i: Vec<u32>, j: Vec<u32>) -> Result<i64> {
    cluster_coefficient(&IndexPair::new(i, j)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(i: &[u32], j: &[u32]) -> IndexPair {
        IndexPair::new(i.to_vec(), j.to_vec()).unwrap()
    }

    #[test]
    fn smallest_pair() {
        let p = pair(&[1], &[]);
        let ds = cluster_decompositions(&p);
        assert_eq!(ds.len(), 1);
        assert_eq!(cluster_coefficient(&p).unwrap(), 1);
    }

    #[test]
    fn two_decompositions_cancel() {
        let p = pair(&[1, 1, 3], &[2, 2]);
        let ds = cluster_decompositions(&p);
        assert_eq!(ds.len(), 2);
        let signs: Vec<i64> = ds.iter().map(|d| d.sign(2)).collect();
        assert!(signs.contains(&1) && signs.contains(&-1));
        assert_eq!(cluster_coefficient(&p).unwrap(), 0);
    }

    #[test]
    fn invalid_lists_rejected() {
        assert!(cluster_coefficient_of(vec![2], vec![]).is_err());
        assert!(cluster_coefficient_of(vec![1, 2], vec![]).is_err());
    }

    #[test]
    fn clusters_interlace_strictly() {
        for p in IndexPair::enumerate(8) {
            for d in cluster_decompositions(&p) {
                assert!(d.m_cluster.is_strictly_interlacing());
                assert_eq!(d.m_cluster.i.len(), d.m_cluster.j.len() + 1);
                for c in &d.n_clusters {
                    assert!(c.is_strictly_interlacing());
                    assert_eq!(c.i.len(), c.j.len());
                    assert!(c.degree() >= 1);
                }
            }
        }
    }
}
