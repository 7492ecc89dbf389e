//! The hypothesis parameters of the resultant bounds.
//!
//! For monic `f`, `g` and a prime `p`:
//!
//! - `s1`, `s2` are the guaranteed valuations, `min_n v_p(f(n))` and
//!   `min_n v_p(g(n))`;
//! - `S` is the joint maximum `max_n min(v_p(f(n)), v_p(g(n)))`;
//! - the characteristic double sum `sum_t sum_{m mod p^t} chi_hat_t^f(m) chi_hat_t^g(m)`
//!   sits between the resolution bound and `v_p(res(f, g))`.
//!
//! Residues are always canonical representatives in `[0, p^t)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{int_valuation, root_valuation_profile, vp, Prime, Valuation};
use crate::poly::Polynomial;
use crate::resultant::resultant;

/// `v_p(res(f, g))`, rejecting a zero resultant.
pub fn resultant_valuation(f: &Polynomial, g: &Polynomial, p: Prime) -> Result<u64> {
    vp(&resultant(f, g)?, p).ok_or(Error::ZeroResultant)
}

/// `f(m) mod modulus`, by Horner's rule on reduced values.
fn eval_mod(f: &Polynomial, m: &BigInt, modulus: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in f.coeffs().iter().rev() {
        acc = (acc * m + c).mod_floor(modulus);
    }
    acc
}

fn require_monic_nonconstant(f: &Polynomial) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    if f.is_constant() {
        return Err(Error::Constant);
    }
    Ok(())
}

/// Largest `s` with `v_p(f(n)) >= s` for every integer `n`.
///
/// Level `t` is accepted when `p^t` divides `f(m)` for every residue
/// `m mod p^t`. The search is capped by `v_p(f(n0))` for the first `n0` in
/// `0..=deg f` with `f(n0) != 0`; a monic `f` cannot vanish at all of them.
pub fn guaranteed_valuation(f: &Polynomial, p: Prime) -> Result<u64> {
    require_monic_nonconstant(f)?;
    let deg = f.degree().unwrap_or(0) as i64;
    let cap = (0..=deg)
        .find_map(|n| vp(&f.evaluate(&BigInt::from(n)), p))
        .expect("monic polynomial vanishes at deg + 1 points");

    for t in 1..=cap {
        let modulus = p.pow(t as u32);
        let mut m = BigInt::zero();
        while m < modulus {
            if !eval_mod(f, &m, &modulus).is_zero() {
                return Ok(t - 1);
            }
            m += 1;
        }
    }
    Ok(cap)
}

/// `min(v_p(f(n)), v_p(g(n)))`, which is `v_p(gcd(f(n), g(n)))`.
pub fn gcd_valuation(f: &Polynomial, g: &Polynomial, n: &BigInt, p: Prime) -> Valuation {
    int_valuation(&f.evaluate(n), p).min(int_valuation(&g.evaluate(n), p))
}

/// `S = max_n min(v_p(f(n)), v_p(g(n)))`, by breadth-first residue search.
///
/// Level `t` holds the residues `m mod p^t` with `p^t | f(m)` and
/// `p^t | g(m)`; `S` is the deepest nonempty level. `S <= v_p(r)` bounds the
/// search.
pub fn joint_max_s(f: &Polynomial, g: &Polynomial, p: Prime) -> Result<u64> {
    let vp_r = resultant_valuation(f, g, p)?;
    let pb = p.to_bigint();
    let mut level = vec![BigInt::zero()];
    let mut step = BigInt::from(1u8);
    let mut t = 0u64;
    loop {
        let next_modulus = &step * &pb;
        let mut next = Vec::new();
        for m in &level {
            let mut child = m.clone();
            for _ in 0..p.get() {
                if eval_mod(f, &child, &next_modulus).is_zero()
                    && eval_mod(g, &child, &next_modulus).is_zero()
                {
                    next.push(child.clone());
                }
                child += &step;
            }
        }
        if next.is_empty() {
            return Ok(t);
        }
        t += 1;
        assert!(
            t <= vp_r,
            "joint maximum exceeded v_p(r); resultant is inconsistent"
        );
        level = next;
        step = next_modulus;
    }
}

/// `sum_{t>=1} sum_{m mod p^t} chi_hat_t^f(m) * chi_hat_t^g(m)`.
///
/// Residues whose product vanishes are not refined: `chi_hat` of each child
/// of `m` is bounded by `chi_hat` at `m`, so their products vanish as well.
/// The first empty level ends the sum; it occurs by `t = v_p(r) + 2`.
pub fn chi_sum_lower_bound(f: &Polynomial, g: &Polynomial, p: Prime) -> Result<BigRational> {
    let vp_r = resultant_valuation(f, g, p)?;
    let (sum, levels) = chi_sum_levels(f, g, p, vp_r + 2)?;
    debug_assert!(levels <= vp_r + 2);
    Ok(sum)
}

/// The double sum restricted to `t <= max_t`.
pub fn chi_sum_truncated(
    f: &Polynomial,
    g: &Polynomial,
    p: Prime,
    max_t: u64,
) -> Result<BigRational> {
    resultant_valuation(f, g, p)?;
    Ok(chi_sum_levels(f, g, p, max_t)?.0)
}

fn chi_sum_levels(
    f: &Polynomial,
    g: &Polynomial,
    p: Prime,
    max_t: u64,
) -> Result<(BigRational, u64)> {
    let mut sum = BigRational::zero();
    let mut live = vec![BigInt::zero()];
    // Residues at level t - 1 are refined with step p^(t-1).
    let mut step = BigInt::from(1u8);
    let mut t = 1u64;
    while t <= max_t && !live.is_empty() {
        let mut next = Vec::new();
        for m in &live {
            let mut child = m.clone();
            for _ in 0..p.get() {
                let a = root_valuation_profile(f, &child, p)?.chi_hat(t);
                if !a.is_zero() {
                    let b = root_valuation_profile(g, &child, p)?.chi_hat(t);
                    if !b.is_zero() {
                        sum += a * b;
                        next.push(child.clone());
                    }
                }
                child += &step;
            }
        }
        live = next;
        step *= p.to_bigint();
        t += 1;
    }
    Ok((sum, t - 1))
}

/// `s1`, `s2`, `S` and `v_p(r)` for one instance with nonzero resultant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JointInvariants {
    pub s1: u64,
    pub s2: u64,
    #[serde(rename = "S")]
    pub s_joint: u64,
    pub vp_r: u64,
}

impl JointInvariants {
    pub fn compute(f: &Polynomial, g: &Polynomial, p: Prime) -> Result<Self> {
        let vp_r = resultant_valuation(f, g, p)?;
        Ok(JointInvariants {
            s1: guaranteed_valuation(f, p)?,
            s2: guaranteed_valuation(g, p)?,
            s_joint: joint_max_s(f, g, p)?,
            vp_r,
        })
    }

    pub fn max_s(&self) -> u64 {
        self.s1.max(self.s2)
    }

    pub fn min_s(&self) -> u64 {
        self.s1.min(self.s2)
    }
}
