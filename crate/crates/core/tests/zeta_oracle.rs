use frobrel_arith::{FieldCtx, ModPoly};
use frobrel_core::curve_zeta::{curve_count, curve_count_in, lpolynomial, power_sums, CurveSpec};
use frobrel_core::weil_poly::{is_q_symplectic, rh_check};
use frobrel_core::CoreError;
use num_bigint::BigInt;
use proptest::prelude::*;

/// Points on `y^2 = f(x)(x - t)` over `F_{p^e}` by listing all `(x, y)`,
/// plus the single point at infinity of the odd-degree model.
fn brute_count(f: &[i64], t: u64, p: u64, e: u32) -> i64 {
    let k = FieldCtx::new(p, e).unwrap();
    let mut squares = vec![0i64; k.order() as usize];
    for y in k.elements() {
        squares[k.mul(y, y) as usize] += 1;
    }
    let mut n = 1;
    for x in k.elements() {
        let fx = f.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), k.from_int(c)));
        let h = k.mul(fx, k.sub(x, t));
        n += squares[h as usize];
    }
    n
}

#[test]
fn lpolynomial_matches_brute_force() {
    let cases: &[(&[i64], u64, u32)] = &[(&[1, 1, 1], 5, 1), (&[1, 1, 1], 5, 2), (&[-1, 6, 1], 7, 1), (&[3, 1, 0, 0, 1], 7, 1), (&[2, 0, 1, 0, 1], 3, 2)];
    let mut checked = 0;
    for &(f, p, e) in cases {
        let q = p.pow(e);
        for t in 0..q {
            let Ok(spec) = CurveSpec::new(f.to_vec(), t, p, e) else { continue };
            let l = lpolynomial(&spec).unwrap();
            let s = power_sums(&l, 1);
            assert_eq!(BigInt::from(brute_count(f, t, p, e)), BigInt::from(q + 1) - &s[0], "f={f:?} q={q} t={t}");
            checked += 1;
        }
    }
    assert!(checked > 40, "{checked}");
}

#[test]
fn counts_beyond_genus_follow_from_lpolynomial() {
    let spec = CurveSpec::new(vec![3, 1, 0, 0, 1], 1, 7, 1).unwrap();
    let l = lpolynomial(&spec).unwrap();
    let s = power_sums(&l, 5);
    for n in 1..=5u32 {
        let expect = BigInt::from(7u64.pow(n) + 1) - &s[n as usize - 1];
        assert_eq!(BigInt::from(curve_count(&spec, n).unwrap()), expect, "n={n}");
    }
}

#[test]
fn count_is_independent_of_field_model() {
    let spec = CurveSpec::new(vec![1, 1, 1], 3, 7, 1).unwrap();
    let default = curve_count(&spec, 2).unwrap();
    // x^2 + 1 is irreducible over F_7, and differs from the default modulus
    let other = FieldCtx::with_modulus(ModPoly::from_i64(7, &[1, 0, 1])).unwrap();
    assert_eq!(curve_count_in(&spec, &other).unwrap(), default);
    let other = FieldCtx::with_modulus(ModPoly::from_i64(7, &[3, 1, 1])).unwrap();
    assert_eq!(curve_count_in(&spec, &other).unwrap(), default);
}

#[test]
fn singular_and_invalid_parameters() {
    // x^2 + 6x - 1 = (x + 3)^2 mod 5
    assert!(matches!(CurveSpec::new(vec![-1, 6, 1], 0, 5, 1), Err(CoreError::SingularCurve(_))));
    // t a root of f
    assert!(CurveSpec::new(vec![-1, 0, 1], 1, 7, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn random_genus_two_curves_are_weil(c in prop::collection::vec(-6i64..=6, 4), t in 0u64..13) {
        let mut f = c.clone();
        f.push(1);
        if let Ok(spec) = CurveSpec::new(f.clone(), t, 13, 1) {
            let l = lpolynomial(&spec).unwrap();
            prop_assert!(is_q_symplectic(l.coeffs(), 13).unwrap());
            prop_assert!(rh_check(&l));
            let s = power_sums(&l, 1);
            prop_assert_eq!(BigInt::from(brute_count(&f, t, 13, 1)), BigInt::from(14) - &s[0]);
        }
    }
}
