//! Minimal resolutions of a weight.
//!
//! A resolution of `omega` is a finitely supported sequence `gamma_0,
//! gamma_1, ...` with `gamma_i >= p * gamma_{i+1}` and `sum gamma_i = omega`.
//! Real resolutions take values in `{0} ∪ [1, ∞)`, integral ones in the
//! non-negative integers. The lexicographically least resolution of each kind
//! is the *minimal* one.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::Prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Real,
    Integral,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Real => "real",
            Kind::Integral => "integral",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    /// Nonzero prefix of the sequence; every later term is zero.
    pub terms: Vec<BigRational>,
    pub kind: Kind,
    pub omega: BigRational,
    pub p: Prime,
}

impl Resolution {
    fn new(mut terms: Vec<BigRational>, kind: Kind, omega: BigRational, p: Prime) -> Self {
        while terms.last().is_some_and(Zero::is_zero) {
            terms.pop();
        }
        Resolution {
            terms,
            kind,
            omega,
            p,
        }
    }

    /// `gamma_i`, zero past the support.
    pub fn term(&self, i: usize) -> BigRational {
        self.terms.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Checks the ratio, sum and range conditions.
    pub fn is_valid(&self) -> bool {
        let p = BigRational::from_integer(self.p.to_bigint());
        let ratio_ok = (0..self.terms.len()).all(|i| self.term(i) >= &p * self.term(i + 1));
        let sum: BigRational = self.terms.iter().sum();
        let range_ok = self.terms.iter().all(|g| match self.kind {
            Kind::Real => g.is_zero() || *g >= BigRational::one(),
            Kind::Integral => g.is_integer() && *g >= BigRational::zero(),
        });
        ratio_ok && range_ok && sum == self.omega
    }

    /// Lexicographic comparison of the (zero-padded) sequences.
    pub fn lex_cmp(&self, other: &Resolution) -> Ordering {
        let n = self.terms.len().max(other.terms.len());
        (0..n)
            .map(|i| self.term(i).cmp(&other.term(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `k = floor(log_p((p - 1) omega + 1)) - 1`, by integer power iteration.
pub fn depth_k(omega: u64, p: Prime) -> Result<u32> {
    if omega == 0 {
        return Err(Error::EmptyResolution);
    }
    let target = (p.get() as u128 - 1) * omega as u128 + 1;
    let mut e = 0u32;
    let mut pow = p.get() as u128;
    while pow <= target {
        pow *= p.get() as u128;
        e += 1;
    }
    Ok(e - 1)
}

/// The minimal real resolution:
/// `gamma_i = p^{-i} (p - 1) / (p - p^{-k}) omega` for `0 <= i <= k`.
pub fn real_minimal(omega: u64, p: Prime) -> Resolution {
    real_minimal_rational(&int(omega), p).expect("integral weights are admissible")
}

/// `real_minimal` for a rational weight, which must be 0 or at least 1.
pub fn real_minimal_rational(omega: &BigRational, p: Prime) -> Result<Resolution> {
    if omega.is_zero() {
        return Ok(Resolution::new(Vec::new(), Kind::Real, int(0), p));
    }
    if *omega < BigRational::one() {
        return Err(Error::Invalid(format!(
            "a real resolution has weight 0 or at least 1, got {omega}"
        )));
    }
    let pr = int(p.get());
    let target = (&pr - int(1)) * omega + int(1);
    let mut k = 0u32;
    let mut pow = &pr * &pr;
    while pow <= target {
        pow *= &pr;
        k += 1;
    }
    let p_neg_k = BigRational::new(BigInt::one(), p.pow(k));
    let head = (&pr - int(1)) / (&pr - p_neg_k) * omega;
    let terms = (0..=k)
        .scan(head, |g, _| {
            let cur = g.clone();
            *g = &*g / &pr;
            Some(cur)
        })
        .collect();
    Ok(Resolution::new(terms, Kind::Real, omega.clone(), p))
}

/// `sum_{i>=0} floor(g / p^i)`: the largest weight an integral resolution
/// starting with `g` can carry.
fn integral_capacity(g: u64, p: Prime) -> u64 {
    let mut total = 0;
    let mut q = g;
    while q > 0 {
        total += q;
        q /= p.get();
    }
    total
}

/// The minimal integral resolution, by the greedy rule: `gamma_0` is the
/// least `g` whose capacity reaches `omega`, then recurse on `omega - g`.
pub fn integral_minimal(omega: u64, p: Prime) -> Resolution {
    let mut terms = Vec::new();
    let mut rest = omega;
    while rest > 0 {
        // Capacity is monotone in g and capacity(rest) >= rest.
        let (mut lo, mut hi) = (1u64, rest);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if integral_capacity(mid, p) >= rest {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        terms.push(int(lo));
        rest -= lo;
    }
    Resolution::new(terms, Kind::Integral, int(omega), p)
}

pub fn minimal(omega: u64, p: Prime, kind: Kind) -> Resolution {
    match kind {
        Kind::Real => real_minimal(omega, p),
        Kind::Integral => integral_minimal(omega, p),
    }
}

pub const ORACLE_MAX_OMEGA: u64 = 40;

/// Exhaustive search over every integral resolution of `omega`, returning
/// the lexicographically least. Test oracle; `omega <= 40`.
pub fn integral_minimal_oracle(omega: u64, p: Prime) -> Result<Resolution> {
    if omega > ORACLE_MAX_OMEGA {
        return Err(Error::TooLarge(format!(
            "oracle limited to omega <= {ORACLE_MAX_OMEGA}, got {omega}"
        )));
    }
    fn walk(rest: u64, cap: u64, p: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for g in 1..=cap.min(rest) {
            prefix.push(g);
            walk(rest - g, g / p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    walk(omega, omega, p.get(), &mut Vec::new(), &mut all);
    // Vec<u64> ordering is lexicographic, and a proper prefix of a sequence
    // compares like its zero-padding since all terms are positive.
    let best = all.into_iter().min().unwrap_or_default();
    Ok(Resolution::new(
        best.into_iter().map(int).collect(),
        Kind::Integral,
        int(omega),
        p,
    ))
}
