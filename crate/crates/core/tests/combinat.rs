use loopfact::combinat::*;
use loopfact::factor::x_from_zeta;
use loopfact::rootsub::RootParams;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const W: usize = 10;

fn random_zeta(rng: &mut ChaCha8Rng, len: usize, scale: f64) -> RootParams {
    RootParams::zeta(
        (1..=len)
            .map(|n| Complex64::from_polar(scale * rng.gen_range(0.2..1.0) * 0.7f64.powi(n as i32), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect(),
    )
}

#[test]
fn reduced_coefficients_are_positive_and_certified() {
    let e = expand_x1(W).unwrap();
    e.certify(0, 11).unwrap();
    let table = e.table().expect("every reduced coefficient is a positive integer");
    assert_eq!((table.len(), e.monomial.len()), (19, 47));
    for (p, _) in table.iter() {
        let n = p.i()[0];
        let r = p.len();
        assert!(p.i()[1..].iter().all(|&v| v >= n), "{p}");
        assert!(p.satisfies_inequal(), "{p}");
        if n == 1 {
            assert_eq!(r, 0);
        } else {
            assert!(r >= 1 && r < n as usize, "{p}");
        }
    }
}

#[test]
fn cluster_sum_matches_monomial_coefficients() {
    let e = expand_x1(W).unwrap();
    for p in IndexPair::enumerate(W) {
        let c = cluster_coefficient(&p).unwrap();
        let m = e.monomial.get(&p).copied().unwrap_or(0);
        assert_eq!(c, m, "{p}");
    }
}

#[test]
fn violating_pairs_cancel() {
    let mut violating = 0;
    for p in IndexPair::enumerate(W) {
        if !p.satisfies_inequal() {
            violating += 1;
            assert_eq!(cluster_coefficient(&p).unwrap(), 0, "{p}");
        }
        if !p.satisfies_strict() {
            assert!(cluster_decompositions(&p).is_empty(), "{p}");
        }
    }
    assert!(violating > 100);
}

#[test]
fn generic_pairs_agree_and_reduced_bounded_by_raw() {
    let e = expand_x1(W).unwrap();
    let table = e.table().unwrap();
    for (p, c) in table.iter() {
        let raw = e.monomial.get(p).copied().unwrap_or(0);
        assert!(c <= raw, "{p}: {c} > {raw}");
        if p.is_generic() {
            assert_eq!(cluster_coefficient(p).unwrap(), c, "{p}");
        }
    }
}

#[test]
fn s_identities_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let len = rng.gen_range(3..=6);
        let z = random_zeta(&mut rng, len, 1.0);
        for w in [SIdentity::S2, SIdentity::SN1, SIdentity::S32] {
            let dev = s_identity_check(&z, w);
            assert!(dev < 1e-10, "{w:?}: {dev:e}");
        }
    }
}

#[test]
fn recursion_matches_residue_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let len = rng.gen_range(1..=5);
        let z = random_zeta(&mut rng, len, 1.0);
        let a = full_x(&z);
        let b = x_from_zeta(&z, 1e-12).unwrap();
        assert!(a.distance(&b) < 1e-10, "{:e}", a.distance(&b));
    }
}

#[test]
fn four_variable_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let z = random_zeta(&mut rng, 4, 1.0);
        let (x, p) = four_var_inputs(&z, 1);
        assert!((zeta1_four_vars(x, p) - z.values[0]).norm() < 1e-9);
        let (x, p) = four_var_inputs(&z, 2);
        assert!((zeta1_four_vars(x, p) - z.values[1]).norm() < 1e-8);
    }
}

#[test]
fn default_weight_expansion() {
    let e = expand_x1(DEFAULT_MAX_WEIGHT).unwrap();
    e.certify(0, 13).unwrap();
    let t = e.table().unwrap();
    let json = serde_json::to_string(&t.export()).unwrap();
    assert!(json.starts_with(r#"[{"i":[1],"j":[],"c":1}"#), "{}", &json[..40]);
    assert_eq!((t.len(), e.monomial.len()), (33, 91));
}
