//! Property tests. Every computed quantity is compared against a brute-force
//! or closed-form oracle written independently here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use resval_core::bounds::{bound_closed_form, bound_main, bound_with_s, resolution_pairing};
use resval_core::invariants::{
    chi_sum_lower_bound, guaranteed_valuation, joint_max_s, resultant_valuation,
};
use resval_core::padic::{int_valuation, root_valuation_profile, vp, Valuation};
use resval_core::resolution::{integral_minimal, integral_minimal_oracle, real_minimal, Kind};
use resval_core::resultant::{bareiss_determinant, resultant};
use resval_core::tree::{extremal_weight, scalar_product, validate_weight, TruncatedTree};
use resval_core::{Polynomial, Prime};

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn small_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3]).prop_map(|p| Prime::new(p).unwrap())
}

fn monic(max_deg: usize, bound: i64) -> impl Strategy<Value = Polynomial> {
    (1..=max_deg)
        .prop_flat_map(move |d| prop::collection::vec(-bound..=bound, d))
        .prop_map(|mut c| {
            c.push(1);
            Polynomial::from_i64s(&c)
        })
}

fn any_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-bound..=bound, 0..=max_deg + 1).prop_map(|c| Polynomial::from_i64s(&c))
}

fn roots(max: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, 1..=max)
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn from_roots(r: &[i64]) -> Polynomial {
    r.iter().map(|&a| Polynomial::linear(big(-a))).product()
}

fn pow(p: Prime, e: u32) -> BigInt {
    p.to_bigint().pow(e)
}

/// Determinant by Laplace expansion along the first row.
fn laplace(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * laplace(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// `min over n in [0, p^levels)` of `v_p(f(n))`, capped at `levels`.
fn brute_floor(f: &Polynomial, p: Prime, levels: u32) -> u64 {
    (0..p.get().pow(levels))
        .map(|n| {
            vp(&f.evaluate(&BigInt::from(n)), p)
                .unwrap_or(u64::MAX)
                .min(levels as u64)
        })
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shift_is_composition(f in any_poly(5, 20), a in -30i64..30, b in -30i64..30, n in -50i64..50) {
        let fa = f.compose_shift(&big(a));
        prop_assert_eq!(fa.evaluate(&big(n)), f.evaluate(&big(n + a)));
        prop_assert_eq!(fa.compose_shift(&big(b)), f.compose_shift(&big(a + b)));
        prop_assert_eq!(f.compose_shift(&BigInt::zero()), f.clone());
    }

    #[test]
    fn ring_operations_evaluate_pointwise(f in any_poly(4, 50), g in any_poly(4, 50), n in -40i64..40) {
        let n = big(n);
        prop_assert_eq!((&f * &g).evaluate(&n), f.evaluate(&n) * g.evaluate(&n));
        prop_assert_eq!((&f + &g).evaluate(&n), f.evaluate(&n) + g.evaluate(&n));
        prop_assert_eq!((&f - &g).evaluate(&n), f.evaluate(&n) - g.evaluate(&n));
        if let (Some(a), Some(b)) = (f.degree(), g.degree()) {
            prop_assert_eq!((&f * &g).degree(), Some(a + b));
        }
    }

    #[test]
    fn bareiss_matches_laplace(m in prop::collection::vec(prop::collection::vec(-9i64..=9, 5), 5), n in 1usize..=5) {
        let m: Vec<Vec<BigInt>> = m[..n].iter().map(|r| r[..n].iter().map(|&x| big(x)).collect()).collect();
        prop_assert_eq!(bareiss_determinant(m.clone()), laplace(&m));
    }

    #[test]
    fn resultant_product_formula(a in roots(4, 12), g in monic(4, 15)) {
        // res(prod (x - a_i), g) = prod g(a_i).
        let f = from_roots(&a);
        let expected: BigInt = a.iter().map(|&x| g.evaluate(&big(x))).product();
        prop_assert_eq!(resultant(&f, &g).unwrap(), expected);
    }

    #[test]
    fn resultant_symmetry_and_multiplicativity(f1 in monic(3, 10), f2 in monic(3, 10), g in monic(3, 10)) {
        let (m, n) = (f1.degree().unwrap(), g.degree().unwrap());
        let sign = if (m * n) % 2 == 0 { big(1) } else { big(-1) };
        prop_assert_eq!(resultant(&f1, &g).unwrap(), sign * resultant(&g, &f1).unwrap());
        prop_assert_eq!(
            resultant(&(&f1 * &f2), &g).unwrap(),
            resultant(&f1, &g).unwrap() * resultant(&f2, &g).unwrap()
        );
    }

    #[test]
    fn profile_of_split_polynomial(a in roots(5, 40), m in -60i64..60, p in prime()) {
        // With integer roots the profile is the multiset v_p(m - a_i).
        let f = from_roots(&a);
        let prof = root_valuation_profile(&f, &big(m), p).unwrap();
        let mut expected: Vec<Valuation> = a.iter().map(|&x| int_valuation(&big(m - x), p)).collect();
        expected.sort();
        let mut got: Vec<Valuation> = prof.finite.iter()
            .flat_map(|(v, &c)| std::iter::repeat_n(Valuation::Finite(v.clone()), c as usize))
            .collect();
        got.extend(std::iter::repeat_n(Valuation::Infinite, prof.infinite as usize));
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn profile_sums_to_valuation(f in monic(5, 60), m in -200i64..200, p in prime()) {
        let prof = root_valuation_profile(&f, &big(m), p).unwrap();
        prop_assert_eq!(prof.valuation(), int_valuation(&f.evaluate(&big(m)), p));
        prop_assert_eq!(prof.degree(), f.degree().unwrap() as u64);
    }

    #[test]
    fn chi_hat_properties(f in monic(4, 30), m in 0i64..500, p in small_prime()) {
        let prof = root_valuation_profile(&f, &big(m), p).unwrap();
        let v = vp(&f.evaluate(&big(m)), p);
        let top = v.unwrap_or(8) + 3;
        let mut prev: Option<BigRational> = None;
        let mut total = BigRational::zero();
        for t in 1..=top {
            let x = prof.chi_hat(t);
            prop_assert!(x.is_integer());
            prop_assert!(x >= BigRational::zero());
            if let Some(pv) = &prev {
                prop_assert!(&x <= pv);
            }
            // Depends only on m mod p^t.
            let shifted = big(m) + pow(p, t as u32) * big(3);
            let other = root_valuation_profile(&f, &shifted, p).unwrap().chi_hat(t);
            prop_assert_eq!(&x, &other);
            total += &x;
            prev = Some(x);
        }
        if let Some(v) = v {
            prop_assert_eq!(total, BigRational::from_integer(big(v as i64)));
        }
    }

    #[test]
    fn guaranteed_valuation_matches_brute_force(f in monic(4, 12), p in small_prime()) {
        let s = guaranteed_valuation(&f, p).unwrap();
        // p^(s+1) residues witness both s and the failure of s + 1.
        prop_assume!(p.get().pow(s as u32 + 1) <= 4096);
        prop_assert_eq!(brute_floor(&f, p, s as u32 + 1), s);
    }

    #[test]
    fn joint_max_matches_brute_force(f in monic(3, 10), g in monic(3, 10), p in small_prime()) {
        let Ok(vp_r) = resultant_valuation(&f, &g, p) else { return Ok(()) };
        prop_assume!(p.get().pow(vp_r as u32 + 1) <= 1 << 14);
        let s = joint_max_s(&f, &g, p).unwrap();
        let levels = vp_r + 1;
        let brute = (0..p.get().pow(levels as u32))
            .map(|n| {
                let n = BigInt::from(n);
                let a = vp(&f.evaluate(&n), p).unwrap_or(levels);
                let b = vp(&g.evaluate(&n), p).unwrap_or(levels);
                a.min(b)
            })
            .max()
            .unwrap();
        prop_assert_eq!(s, brute);
    }

    #[test]
    fn chi_sum_matches_direct_double_sum(f in monic(3, 10), g in monic(3, 10), p in small_prime()) {
        let Ok(vp_r) = resultant_valuation(&f, &g, p) else { return Ok(()) };
        let levels = vp_r as u32 + 2;
        prop_assume!(p.get().pow(levels) <= 1 << 12);
        let mut direct = BigRational::zero();
        for t in 1..=levels {
            for m in 0..p.get().pow(t) {
                let m = BigInt::from(m);
                let a = root_valuation_profile(&f, &m, p).unwrap().chi_hat(t as u64);
                let b = root_valuation_profile(&g, &m, p).unwrap().chi_hat(t as u64);
                direct += a * b;
            }
        }
        let got = chi_sum_lower_bound(&f, &g, p).unwrap();
        prop_assert_eq!(&got, &direct);
        prop_assert!(got <= BigRational::from_integer(big(vp_r as i64)));
    }

    #[test]
    fn resolutions_are_valid(omega in 0u64..300, p in prime()) {
        let r = real_minimal(omega, p);
        let i = integral_minimal(omega, p);
        prop_assert!(r.is_valid());
        prop_assert!(i.is_valid());
        // Integral resolutions are real ones, so the real minimum is no larger.
        prop_assert!(r.lex_cmp(&i).is_le());
    }

    #[test]
    fn integral_matches_oracle(omega in 0u64..=30, p in prime()) {
        prop_assert_eq!(integral_minimal(omega, p), integral_minimal_oracle(omega, p).unwrap());
    }

    #[test]
    fn repunit_resolutions_coincide(k in 0u32..5, p in prime()) {
        let omega = (0..=k).map(|i| p.get().pow(i)).sum::<u64>();
        let expected: Vec<BigRational> =
            (0..=k).map(|i| BigRational::from_integer(pow(p, k - i))).collect();
        prop_assert_eq!(&real_minimal(omega, p).terms, &expected);
        prop_assert_eq!(&integral_minimal(omega, p).terms, &expected);
    }

    #[test]
    fn bound_relations(s1 in 0u64..60, s2 in 0u64..60, extra in 0u64..10, p in prime()) {
        prop_assert!(bound_main(p, s1, s2, Kind::Integral) >= bound_main(p, s1, s2, Kind::Real));
        let s = s1.max(s2) + extra;
        prop_assert_eq!(
            bound_closed_form(p, s1, s2, s).unwrap(),
            bound_with_s(p, s1, s2, s, Kind::Real).unwrap()
        );
    }

    #[test]
    fn extremal_weights_realize_pairing(oa in 1u64..30, ob in 1u64..30, p in small_prime()) {
        for kind in [Kind::Real, Kind::Integral] {
            let (ra, rb) = (resolution_of(oa, p, kind), resolution_of(ob, p, kind));
            let depth = ra.len().max(rb.len()) as u32;
            let tree = TruncatedTree::new(p, depth);
            let (a, b) = (extremal_weight(&ra, tree).unwrap(), extremal_weight(&rb, tree).unwrap());
            prop_assert!(validate_weight(&a) && validate_weight(&b));
            prop_assert_eq!(scalar_product(&a, &b).unwrap(), resolution_pairing(p, oa, ob, kind));
        }
    }
}

fn resolution_of(omega: u64, p: Prime, kind: Kind) -> resval_core::resolution::Resolution {
    resval_core::resolution::minimal(omega, p, kind)
}

#[test]
fn lifted_resultant_identity_over_small_parameters() {
    use resval_core::construct::{build_extremal_pair, ConstructionSpec};
    for (p, k1, k2) in [
        (2, 0, 0),
        (2, 1, 0),
        (2, 1, 1),
        (3, 0, 0),
        (3, 1, 0),
        (2, 2, 1),
        (5, 0, 0),
    ] {
        let p = Prime::new(p).unwrap();
        let spec = ConstructionSpec::new(p, k1, k2).unwrap();
        let (f, g) = build_extremal_pair(&spec).unwrap();
        // g = prod_{t < p^{k2+1}} (x + t), so res(f, g) = +-prod f(-t).
        let direct: u64 = (0..p.get().pow(k2 + 1))
            .map(|t| vp(&f.evaluate(&-BigInt::from(t)), p).unwrap())
            .sum();
        let s1 = (0..=k1).map(|i| p.get().pow(i)).sum::<u64>();
        assert_eq!(resultant_valuation(&f, &g, p).unwrap(), direct);
        assert_eq!(direct, p.get().pow(k2 + 1) * s1);
        assert_eq!(guaranteed_valuation(&f, p).unwrap(), s1);
    }
}

#[test]
fn resultant_sign_oracle() {
    // res(x - a, x - b) = a - b up to the convention res(f, g) = prod g(roots of f).
    for a in -5i64..5 {
        for b in -5i64..5 {
            let r = resultant(&from_roots(&[a]), &from_roots(&[b])).unwrap();
            assert_eq!(r, big(a - b));
        }
    }
}
