//! Loops assembled from root-subgroup parameters.
//!
//! A lower (zeta) sequence `zeta_1, zeta_2, ...` defines
//! `k2 = F_N ... F_1` with `F_n = a(zeta_n) [[1, zeta_n z^-n], [-conj(zeta_n) z^n, 1]]`.
//! An upper (eta) sequence `eta_0, eta_1, ...` defines
//! `k1 = G_N ... G_0` with `G_n = a(eta_n) [[1, -conj(eta_n) z^n], [eta_n z^-n, 1]]`.
//! The two are exchanged by [`LoopMatrix::sigma`]: `sigma(F_n(t)) = G_{n-1}(t)`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::laurent::{LaurentSeries, LoopMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// 1-indexed lower parameters.
    Zeta,
    /// 0-indexed upper parameters.
    Eta,
}

/// A finite root-subgroup parameter sequence.
///
/// `values[k]` is `zeta_{k+1}` on the zeta side and `eta_k` on the eta side.
#[derive(Debug, Clone, PartialEq)]
pub struct RootParams {
    pub side: Side,
    pub values: Vec<Complex64>,
}

impl RootParams {
    pub fn zeta(values: Vec<Complex64>) -> Self {
        Self { side: Side::Zeta, values }
    }

    pub fn eta(values: Vec<Complex64>) -> Self {
        Self { side: Side::Eta, values }
    }

    pub fn zeta_real(values: &[f64]) -> Self {
        Self::zeta(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Index of `values[0]`: 1 for zeta, 0 for eta.
    pub fn first_index(&self) -> i64 {
        match self.side {
            Side::Zeta => 1,
            Side::Eta => 0,
        }
    }

    /// Parameter at its natural index (zero outside the stored range).
    pub fn get(&self, index: i64) -> Complex64 {
        let k = index - self.first_index();
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.values.get(k as usize).copied().unwrap_or_default()
    }

    /// Largest index with a nonzero parameter, if any.
    pub fn support(&self) -> Option<i64> {
        self.values
            .iter()
            .rposition(|v| v.norm() > 0.0)
            .map(|k| k as i64 + self.first_index())
    }

    /// Drops trailing parameters of modulus `<= tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let keep = self.values.iter().rposition(|v| v.norm() > tol).map_or(0, |k| k + 1);
        Self {
            side: self.side,
            values: self.values[..keep].to_vec(),
        }
    }

    /// `sum |p_n|^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `sum n |p_n|^2`.
    pub fn w_half_norm_sq(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| (k as i64 + self.first_index()) as f64 * v.norm_sqr())
            .sum()
    }

    /// `prod a(p_n)`.
    pub fn a_product(&self) -> f64 {
        self.values.iter().map(|&v| a_factor(v)).product()
    }

    /// Largest modulus difference against `other`, padding the shorter one with zeros.
    pub fn distance(&self, other: &Self) -> f64 {
        let n = self.values.len().max(other.values.len());
        (0..n)
            .map(|k| {
                let a = self.values.get(k).copied().unwrap_or_default();
                let b = other.values.get(k).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct RootParamsJson {
    side: Side,
    values: Vec<[f64; 2]>,
}

impl Serialize for RootParams {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RootParamsJson {
            side: self.side,
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootParams {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RootParamsJson::deserialize(d)?;
        Ok(Self {
            side: raw.side,
            values: raw.values.iter().map(|v| Complex64::new(v[0], v[1])).collect(),
        })
    }
}

/// `(1 + |t|^2)^{-1/2}`.
pub fn a_factor(t: Complex64) -> f64 {
    (1.0 + t.norm_sqr()).sqrt().recip()
}

/// The elementary zeta-side factor `F_n(t)`.
pub fn zeta_factor(t: Complex64, n: i64) -> LoopMatrix {
    let a = a_factor(t);
    LoopMatrix::new(
        LaurentSeries::constant(Complex64::new(a, 0.0)),
        LaurentSeries::monomial(-n, t * a),
        LaurentSeries::monomial(n, -t.conj() * a),
        LaurentSeries::constant(Complex64::new(a, 0.0)),
    )
}

/// The elementary eta-side factor `G_n(t)`.
pub fn eta_factor(t: Complex64, n: i64) -> LoopMatrix {
    let a = a_factor(t);
    LoopMatrix::new(
        LaurentSeries::constant(Complex64::new(a, 0.0)),
        LaurentSeries::monomial(n, -t.conj() * a),
        LaurentSeries::monomial(-n, t * a),
        LaurentSeries::constant(Complex64::new(a, 0.0)),
    )
}

/// Ordered product of the first factors, highest index leftmost.
///
/// For zeta this uses `zeta_1..=zeta_n`; for eta it uses `eta_0..=eta_n`.
/// `n` larger than the stored support simply multiplies in identity factors.
pub fn partial_product(params: &RootParams, n: usize) -> LoopMatrix {
    let first = params.first_index();
    let mut out = LoopMatrix::identity();
    for idx in first..=n as i64 {
        let t = params.get(idx);
        if t.norm() == 0.0 {
            continue;
        }
        let f = match params.side {
            Side::Zeta => zeta_factor(t, idx),
            Side::Eta => eta_factor(t, idx),
        };
        out = &f * &out;
    }
    out
}

/// Product over every stored parameter.
pub fn full_product(params: &RootParams) -> LoopMatrix {
    let top = params.values.len() as i64 + params.first_index() - 1;
    partial_product(params, top.max(0) as usize)
}

/// Taylor coefficients `gamma2[0..=n_max]`, `delta2[0..=n_max]` of the
/// normalised (2,1) and (2,2) entries of `k2`, i.e. those entries divided by
/// `prod a(zeta_n)`, from the alternating index-chain expansion.
///
/// Chains are strictly increasing index sequences `i1 < j1 < i2 < ...`.
/// Odd-length chains contribute `(-conj z_i1) z_j1 (-conj z_i2) ...` to gamma at
/// weight `sum i - sum j`; even-length ones contribute
/// `z_i1 (-conj z_j1) ...` to delta at weight `sum (j - i)`.
pub fn gammadelta_coeffs(zeta: &RootParams, n_max: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    assert_eq!(zeta.side, Side::Zeta, "gammadelta_coeffs needs zeta parameters");
    let zero = Complex64::new(0.0, 0.0);
    let mut gamma = vec![zero; n_max + 1];
    let mut delta = vec![zero; n_max + 1];
    delta[0] = Complex64::new(1.0, 0.0);
    let top = zeta.values.len() as i64;
    let nm = n_max as i64;

    // gamma chains: i1, then pairs (j, i) each adding i - j >= 1.
    for i1 in 1..=top.min(nm) {
        let v = zeta.get(i1);
        if v.norm() == 0.0 {
            continue;
        }
        let p = -v.conj();
        gamma[i1 as usize] += p;
        append_pairs(zeta, top, nm, &mut gamma, i1, i1, p);
    }
    // delta chains: pairs (i, j) each adding j - i >= 1.
    append_pairs(zeta, top, nm, &mut delta, 0, 0, Complex64::new(1.0, 0.0));
    (gamma, delta)
}

/// Appends pairs `(p, q)` with `last < p < q`, each contributing the factor
/// `zeta_p * (-conj zeta_q)` and weight `q - p`, recording every prefix.
#[allow(clippy::too_many_arguments)]
fn append_pairs(
    zeta: &RootParams,
    top: i64,
    nm: i64,
    out: &mut [Complex64],
    last: i64,
    weight: i64,
    product: Complex64,
) {
    for p in last + 1..=top {
        let zp = zeta.get(p);
        if zp.norm() == 0.0 {
            continue;
        }
        for q in p + 1..=top {
            let w = weight + (q - p);
            if w > nm {
                break;
            }
            let zq = zeta.get(q);
            if zq.norm() == 0.0 {
                continue;
            }
            let next = product * zp * -zq.conj();
            out[w as usize] += next;
            append_pairs(zeta, top, nm, out, q, w, next);
        }
    }
}

/// Number of partitions of `n` into exactly `l` parts, for `l = 0..=n`.
pub fn partitions_by_length(n: usize) -> Vec<u64> {
    // p[m][l]: partitions of m into exactly l parts; p(m, l) = p(m-1, l-1) + p(m-l, l).
    let mut p = vec![vec![0u64; n + 1]; n + 1];
    p[0][0] = 1;
    for m in 1..=n {
        for l in 1..=m {
            p[m][l] = p[m - 1][l - 1] + if m >= l { p[m - l][l] } else { 0 };
        }
    }
    p[n].clone()
}

/// `sum over partitions P of n of ||zeta||^{2 len(P)}`, an upper bound for `|delta_{2,n}|`.
pub fn coefficient_bound(zeta: &RootParams, n: usize) -> f64 {
    let s = zeta.l2_norm_sq();
    partitions_by_length(n)
        .iter()
        .enumerate()
        .map(|(l, &count)| count as f64 * s.powi(l as i32))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{unitarity_defect, CircleGrid};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn a_factor_values() {
        assert_eq!(a_factor(c(0.0, 0.0)), 1.0);
        assert!((a_factor(c(1.0, 0.0)) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((a_factor(c(3.0, 4.0)) - 26f64.sqrt().recip()).abs() < 1e-15);
    }

    #[test]
    fn two_factor_entries() {
        let (z1, z2) = (c(0.3, 0.1), c(-0.2, 0.25));
        let k = partial_product(&RootParams::zeta(vec![z1, z2]), 2);
        let a = a_factor(z1) * a_factor(z2);
        assert!((k.c.coeff(1) - a * -z1.conj()).norm() < 1e-15);
        assert!((k.c.coeff(2) - a * -z2.conj()).norm() < 1e-15);
        assert!((k.d.coeff(0) - c(a, 0.0)).norm() < 1e-15);
        assert!((k.d.coeff(1) - a * -(z1 * z2.conj())).norm() < 1e-15);
        assert!(unitarity_defect(&k, &CircleGrid::default()) < 1e-14);
    }

    #[test]
    fn zero_params_give_identity() {
        let k = partial_product(&RootParams::zeta(vec![c(0.0, 0.0); 4]), 4);
        assert_eq!(k, LoopMatrix::identity());
    }

    #[test]
    fn sigma_maps_zeta_side_to_eta_side() {
        let vals = vec![c(0.3, 0.1), c(-0.2, 0.25), c(0.05, -0.1)];
        let k2 = full_product(&RootParams::zeta(vals.clone()));
        let k1 = full_product(&RootParams::eta(vals));
        assert!(k2.sigma().distance(&k1) < 1e-15);
    }

    #[test]
    fn gammadelta_small_case() {
        let (z1, z2) = (c(0.3, 0.1), c(-0.2, 0.25));
        let (g, d) = gammadelta_coeffs(&RootParams::zeta(vec![z1, z2]), 4);
        assert!((g[1] + z1.conj()).norm() < 1e-15);
        assert!((g[2] + z2.conj()).norm() < 1e-15);
        assert!((d[1] + z1 * z2.conj()).norm() < 1e-15);
        assert_eq!(d[0], c(1.0, 0.0));
        assert_eq!(g[0], c(0.0, 0.0));
    }

    #[test]
    fn bound_values() {
        let z = RootParams::zeta_real(&[0.3, 0.2]);
        assert!((coefficient_bound(&z, 1) - 0.13).abs() < 1e-15);
        assert!((coefficient_bound(&z, 2) - 0.1469).abs() < 1e-15);
        assert_eq!(partitions_by_length(5), vec![0, 1, 2, 2, 1, 1]);
    }

    #[test]
    fn json_form() {
        let p = RootParams::zeta(vec![c(0.5, -0.25)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"side":"zeta","values":[[0.5,-0.25]]}"#);
        assert_eq!(serde_json::from_str::<RootParams>(&s).unwrap(), p);
    }
}
