//! p-adic valuations, Newton polygons and root-valuation profiles.
//!
//! The valuations `v_p(m - a)` over the roots `a` of a monic integer
//! polynomial `f` are read off the Newton polygon of `f(x + m)`, so no p-adic
//! root finding is ever needed. The characteristic functions `chi` and
//! `chi_hat` are evaluated directly on the resulting [`ValuationProfile`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// A prime number, checked by trial division.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }

    pub fn pow(self, e: u32) -> BigInt {
        num_traits::pow(self.to_bigint(), e as usize)
    }

    /// `p^e` as a machine integer, `None` on overflow.
    pub fn checked_pow(self, e: u32) -> Option<u64> {
        self.0.checked_pow(e)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A p-adic valuation: a non-negative rational, or infinity for zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(BigRational),
    Infinite,
}

impl Valuation {
    pub fn from_int(v: u64) -> Self {
        Valuation::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// The value as an integer, if it is finite and integral.
    pub fn as_u64(&self) -> Option<u64> {
        use num_traits::ToPrimitive;
        self.finite()
            .filter(|v| v.is_integer())
            .and_then(|v| v.to_integer().to_u64())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_u64() {
            Some(v) => s.serialize_u64(v),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

/// `v_p(n)` for a nonzero integer; `None` for zero.
pub fn vp(n: &BigInt, p: Prime) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = p.to_bigint();
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(e);
        }
        n = q;
        e += 1;
    }
}

pub fn int_valuation(n: &BigInt, p: Prime) -> Valuation {
    vp(n, p).map_or(Valuation::Infinite, Valuation::from_int)
}

/// One edge of a Newton polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: BigRational,
    pub length: u64,
}

/// Lower convex hull of `(i, v_p(c_i))` over the nonzero coefficients.
///
/// `zero_roots` is the index of the lowest nonzero coefficient, i.e. the
/// multiplicity of `0` as a root; those roots have infinite valuation and are
/// not part of the hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub segments: Vec<Segment>,
    pub zero_roots: u64,
}

impl NewtonPolygon {
    /// Total horizontal length plus the number of zero roots.
    pub fn degree(&self) -> u64 {
        self.zero_roots + self.segments.iter().map(|s| s.length).sum::<u64>()
    }
}

pub fn newton_polygon(f: &Polynomial, p: Prime) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let points: Vec<(i128, i128)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| vp(c, p).map(|v| (i as i128, v as i128)))
        .collect();
    let zero_roots = points[0].0 as u64;

    let mut hull: Vec<(i128, i128)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // Drop the middle point unless it lies strictly below the chord.
            let cross = (x2 - x1) * (pt.1 - y1) - (y2 - y1) * (pt.0 - x1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }

    let segments = hull
        .windows(2)
        .map(|w| {
            let (x1, y1) = w[0];
            let (x2, y2) = w[1];
            Segment {
                slope: BigRational::new(BigInt::from(y2 - y1), BigInt::from(x2 - x1)),
                length: (x2 - x1) as u64,
            }
        })
        .collect();
    Ok(NewtonPolygon {
        segments,
        zero_roots,
    })
}

/// The multiset `{v_p(m - a)}` over the roots `a` of a polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValuationProfile {
    /// Finite valuations with their multiplicities.
    pub finite: BTreeMap<BigRational, u64>,
    /// Multiplicity of `m` itself as a root.
    pub infinite: u64,
}

impl ValuationProfile {
    pub fn from_entries(
        entries: impl IntoIterator<Item = (BigRational, u64)>,
        infinite: u64,
    ) -> Self {
        let mut finite = BTreeMap::new();
        for (v, k) in entries {
            if k > 0 {
                *finite.entry(v).or_insert(0) += k;
            }
        }
        ValuationProfile { finite, infinite }
    }

    pub fn degree(&self) -> u64 {
        self.infinite + self.finite.values().sum::<u64>()
    }

    /// Largest finite valuation, if any.
    pub fn max_finite(&self) -> Option<&BigRational> {
        self.finite.keys().next_back()
    }

    /// Number of roots (with multiplicity) at valuation at least `t`.
    pub fn chi(&self, t: &BigRational) -> u64 {
        self.infinite + self.finite.range(t.clone()..).map(|(_, k)| k).sum::<u64>()
    }

    /// `chi` averaged over `[t - 1, t]`, for integer `t >= 1`.
    pub fn chi_hat(&self, t: u64) -> BigRational {
        assert!(t >= 1, "chi_hat is indexed from t = 1");
        let lo = BigRational::from_integer(BigInt::from(t - 1));
        let mut acc = BigRational::from_integer(BigInt::from(self.infinite));
        for (v, &k) in self.finite.range(lo.clone()..) {
            let part = (v - &lo).min(BigRational::one());
            acc += part * BigInt::from(k);
        }
        acc
    }

    /// `sum multiplicity * valuation`, or infinity if `m` is a root.
    pub fn valuation(&self) -> Valuation {
        if self.infinite > 0 {
            return Valuation::Infinite;
        }
        let total = self
            .finite
            .iter()
            .fold(BigRational::zero(), |acc, (v, &k)| {
                acc + v * BigInt::from(k)
            });
        Valuation::Finite(total)
    }
}

/// Valuations `v_p(m - a)` over the roots `a` of the monic polynomial `f`.
pub fn root_valuation_profile(f: &Polynomial, m: &BigInt, p: Prime) -> Result<ValuationProfile> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let poly = newton_polygon(&f.compose_shift(m), p)?;
    let entries = poly.segments.into_iter().map(|s| (-s.slope, s.length));
    Ok(ValuationProfile::from_entries(entries, poly.zero_roots))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p2() -> Prime {
        Prime::new(2).unwrap()
    }

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(0), Err(Error::NotPrime(0)));
        assert_eq!(Prime::new(91), Err(Error::NotPrime(91)));
    }

    #[test]
    fn integer_valuations() {
        assert_eq!(int_valuation(&12.into(), p2()), Valuation::from_int(2));
        assert_eq!(
            int_valuation(&0.into(), Prime::new(5).unwrap()),
            Valuation::Infinite
        );
        assert_eq!(
            int_valuation(&45.into(), Prime::new(3).unwrap()),
            Valuation::from_int(2)
        );
        assert_eq!(int_valuation(&(-8).into(), p2()), Valuation::from_int(3));
    }

    #[test]
    fn infinity_is_largest() {
        assert!(Valuation::Infinite > Valuation::from_int(1_000_000));
        assert!(Valuation::Finite(q(1, 2)) < Valuation::from_int(1));
    }

    #[test]
    fn polygons() {
        let f = Polynomial::from_i64s(&[8, 4, 0, 1]);
        let np = newton_polygon(&f, p2()).unwrap();
        assert_eq!(
            np.segments,
            vec![Segment {
                slope: q(-1, 1),
                length: 3
            }]
        );

        let f = Polynomial::from_i64s(&[6, 5, 1]);
        let np = newton_polygon(&f, p2()).unwrap();
        assert_eq!(
            np.segments,
            vec![
                Segment {
                    slope: q(-1, 1),
                    length: 1
                },
                Segment {
                    slope: q(0, 1),
                    length: 1
                }
            ]
        );

        for p in [2u64, 3, 7] {
            let f = Polynomial::from_i64s(&[(p * p) as i64, p as i64, 1]);
            let np = newton_polygon(&f, Prime::new(p).unwrap()).unwrap();
            assert_eq!(
                np.segments,
                vec![Segment {
                    slope: q(-1, 1),
                    length: 2
                }]
            );
        }

        assert_eq!(
            newton_polygon(&Polynomial::zero(), p2()),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn polygon_with_zero_roots_and_fractional_slope() {
        // x^2 (x^2 + 2): two zero roots, two roots of valuation 1/2.
        let f = Polynomial::from_i64s(&[0, 0, 2, 0, 1]);
        let np = newton_polygon(&f, p2()).unwrap();
        assert_eq!(np.zero_roots, 2);
        assert_eq!(
            np.segments,
            vec![Segment {
                slope: q(-1, 2),
                length: 2
            }]
        );
        assert_eq!(np.degree(), 4);
    }

    #[test]
    fn profiles() {
        let f = Polynomial::from_i64s(&[6, 5, 1]);
        let prof = root_valuation_profile(&f, &0.into(), p2()).unwrap();
        assert_eq!(
            prof,
            ValuationProfile::from_entries([(q(1, 1), 1), (q(0, 1), 1)], 0)
        );

        let h = Polynomial::from_i64s(&[8, 4, 0, 1]);
        let prof = root_valuation_profile(&h, &0.into(), p2()).unwrap();
        assert_eq!(prof, ValuationProfile::from_entries([(q(1, 1), 3)], 0));
        assert_eq!(prof.valuation(), Valuation::from_int(3));

        let prof = root_valuation_profile(&f, &(-2).into(), p2()).unwrap();
        assert_eq!(prof, ValuationProfile::from_entries([(q(0, 1), 1)], 1));
        assert_eq!(prof.valuation(), Valuation::Infinite);

        let prof = root_valuation_profile(&f, &0.into(), p2()).unwrap();
        assert_eq!(prof.valuation(), Valuation::from_int(1));

        assert_eq!(
            root_valuation_profile(&Polynomial::from_i64s(&[1, 2]), &0.into(), p2()),
            Err(Error::NotMonic)
        );
    }

    #[test]
    fn chi_values() {
        let three_ones = ValuationProfile::from_entries([(q(1, 1), 3)], 0);
        assert_eq!(three_ones.chi(&q(1, 1)), 3);
        assert_eq!(three_ones.chi(&q(3, 2)), 0);
        assert_eq!(three_ones.chi(&q(0, 1)), 3);
        let with_inf = ValuationProfile::from_entries([(q(0, 1), 1)], 1);
        assert_eq!(with_inf.chi(&q(100, 1)), 1);
    }

    #[test]
    fn chi_hat_values() {
        let three_ones = ValuationProfile::from_entries([(q(1, 1), 3)], 0);
        assert_eq!(three_ones.chi_hat(1), q(3, 1));
        assert_eq!(three_ones.chi_hat(2), q(0, 1));

        let two_halves = ValuationProfile::from_entries([(q(3, 2), 2)], 0);
        assert_eq!(two_halves.chi_hat(2), q(1, 1));
        assert_eq!(two_halves.chi_hat(1), q(2, 1));

        let zeros = ValuationProfile::from_entries([(q(0, 1), 4)], 0);
        for t in 1..5 {
            assert_eq!(zeros.chi_hat(t), q(0, 1));
        }
        let with_inf = ValuationProfile::from_entries([(q(0, 1), 1)], 1);
        assert_eq!(with_inf.chi_hat(40), q(1, 1));
    }
}
