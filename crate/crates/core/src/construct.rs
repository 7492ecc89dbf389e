//! Polynomial pairs on which the resolution bound is attained.
//!
//! For repunit weights `s1 = (p^{k1+1} - 1)/(p - 1)` and
//! `s2 = (p^{k2+1} - 1)/(p - 1)` with `k1 >= k2`:
//!
//! - `h0` is a monic irreducible polynomial of degree `s1` over `F_p`,
//! - `h(x) = p^{s1} h0(x / p)`,
//! - `f(x) = h(x) h(x + 1) ... h(x + p - 1)`,
//! - `g(x) = x (x + 1) ... (x + p^{k2+1} - 1)`,
//!
//! and `v_p(res(f, g)) = p^{k2+1} s1`.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::bounds::{bound_main, BoundReport};
use crate::error::{Error, Result};
use crate::invariants::{chi_sum_lower_bound, JointInvariants};
use crate::padic::Prime;
use crate::poly::Polynomial;
use crate::resolution::Kind;
use crate::serde_util;

/// Largest `p^d` searched for an irreducible polynomial.
pub const MAX_FIELD_SEARCH: u64 = 1_000_000;
/// Largest `deg f + deg g` of a construction.
pub const MAX_PAIR_DEGREE: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionSpec {
    pub p: Prime,
    pub k1: u32,
    pub k2: u32,
}

fn repunit(p: Prime, k: u32) -> Option<u64> {
    let top = p.checked_pow(k + 1)?;
    Some((top - 1) / (p.get() - 1))
}

impl ConstructionSpec {
    pub fn new(p: Prime, k1: u32, k2: u32) -> Result<Self> {
        if k1 < k2 {
            return Err(Error::Invalid(format!(
                "k1 = {k1} must be at least k2 = {k2}"
            )));
        }
        let spec = ConstructionSpec { p, k1, k2 };
        let too_large = || Error::TooLarge(format!("construction p = {p}, k1 = {k1}, k2 = {k2}"));
        let s1 = repunit(p, k1).ok_or_else(too_large)?;
        let g_deg = p.checked_pow(k2 + 1).ok_or_else(too_large)?;
        let field = u32::try_from(s1).ok().and_then(|d| p.checked_pow(d));
        if field.is_none_or(|n| n > MAX_FIELD_SEARCH) || p.get() * s1 + g_deg > MAX_PAIR_DEGREE {
            return Err(too_large());
        }
        Ok(spec)
    }

    pub fn s1(&self) -> u64 {
        repunit(self.p, self.k1).expect("checked in new")
    }

    pub fn s2(&self) -> u64 {
        repunit(self.p, self.k2).expect("checked in new")
    }

    /// `p^{k2+1} s1`.
    pub fn expected_vp_r(&self) -> u64 {
        self.p.get().pow(self.k2 + 1) * self.s1()
    }
}

/// Remainder of `a` modulo the monic `b` over `F_p`; ascending coefficients.
fn rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Monic polynomial of degree `d` whose lower coefficients are the base-`p`
/// digits of `index`, least significant first.
fn monic_from_index(index: u64, d: usize, p: u64) -> Vec<u64> {
    let mut c = Vec::with_capacity(d + 1);
    let mut n = index;
    for _ in 0..d {
        c.push(n % p);
        n /= p;
    }
    c.push(1);
    c
}

fn is_irreducible_mod_p(c: &[u64], p: u64) -> bool {
    let d = c.len() - 1;
    for e in 1..=d / 2 {
        for idx in 0..p.pow(e as u32) {
            let divisor = monic_from_index(idx, e, p);
            if rem_mod_p(c, &divisor, p).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `d` over `F_p` with nonzero
/// constant term, in the order of the integer `sum c_i p^i` of its lower
/// coefficients. Coefficients are returned in `[0, p)`.
pub fn irreducible_mod_p(p: Prime, d: u32) -> Result<Polynomial> {
    if d == 0 {
        return Err(Error::Invalid("degree must be positive".into()));
    }
    let count = p
        .checked_pow(d)
        .filter(|&n| n <= MAX_FIELD_SEARCH)
        .ok_or_else(|| Error::TooLarge(format!("search over {p}^{d} polynomials")))?;
    let pv = p.get();
    let c = (0..count)
        .map(|idx| monic_from_index(idx, d as usize, pv))
        .find(|c| c[0] != 0 && is_irreducible_mod_p(c, pv))
        .expect("irreducible polynomials exist in every degree");
    Ok(Polynomial::new(c.into_iter().map(BigInt::from).collect()))
}

/// `h(x) = p^d h0(x / p)`: coefficient `c_i` becomes `c_i p^{d - i}`.
pub fn lift_h(h0: &Polynomial, p: Prime) -> Result<Polynomial> {
    if !h0.is_monic() {
        return Err(Error::NotMonic);
    }
    if h0.is_constant() {
        return Err(Error::Constant);
    }
    if (h0.coeff(0) % p.to_bigint()).is_zero() {
        return Err(Error::Invalid(
            "constant term of h0 must be nonzero mod p".into(),
        ));
    }
    let d = h0.degree().unwrap();
    Ok(Polynomial::new(
        h0.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * p.pow((d - i) as u32))
            .collect(),
    ))
}

pub fn build_extremal_pair(spec: &ConstructionSpec) -> Result<(Polynomial, Polynomial)> {
    let p = spec.p;
    let h0 = irreducible_mod_p(p, spec.s1() as u32)?;
    let h = lift_h(&h0, p)?;
    let f = (0..p.get())
        .map(|t| h.compose_shift(&BigInt::from(t)))
        .product();
    let g = (0..p.get().pow(spec.k2 + 1))
        .map(|t| Polynomial::linear(BigInt::from(t)))
        .product();
    Ok((f, g))
}

/// Measured data for one construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub spec: ConstructionSpec,
    pub s1_expected: u64,
    pub s2_expected: u64,
    pub expected_vp_r: u64,
    #[serde(serialize_with = "serde_util::bigints")]
    pub h0: Vec<BigInt>,
    #[serde(serialize_with = "serde_util::bigints")]
    pub h: Vec<BigInt>,
    #[serde(serialize_with = "serde_util::bigints")]
    pub f: Vec<BigInt>,
    #[serde(serialize_with = "serde_util::bigints")]
    pub g: Vec<BigInt>,
    pub report: BoundReport,
    /// `v_p(r) = p^{k2+1} s1`.
    pub identity_holds: bool,
    /// The measured `s1`, `s2` equal the repunits.
    pub floors_match: bool,
    /// `k1 = k2` and `v_p(r)` equals the real main bound and the closed form.
    pub attained: Option<bool>,
}

pub fn verify_tightness(spec: &ConstructionSpec) -> Result<TightnessReport> {
    let p = spec.p;
    let h0 = irreducible_mod_p(p, spec.s1() as u32)?;
    let h = lift_h(&h0, p)?;
    let (f, g) = build_extremal_pair(spec)?;
    let inv = JointInvariants::compute(&f, &g, p)?;
    let chi_sum = chi_sum_lower_bound(&f, &g, p)?;
    let report = BoundReport::from_invariants(&inv, p, chi_sum);

    let vp_r = num_rational::BigRational::from_integer(BigInt::from(inv.vp_r));
    let attained = (spec.k1 == spec.k2).then(|| {
        vp_r == bound_main(p, spec.s1(), spec.s2(), Kind::Real)
            && report.bound_closed_form.as_ref() == Some(&vp_r)
    });
    Ok(TightnessReport {
        spec: *spec,
        s1_expected: spec.s1(),
        s2_expected: spec.s2(),
        expected_vp_r: spec.expected_vp_r(),
        h0: h0.into_coeffs(),
        h: h.into_coeffs(),
        f: f.into_coeffs(),
        g: g.into_coeffs(),
        identity_holds: inv.vp_r == spec.expected_vp_r(),
        floors_match: inv.s1 == spec.s1() && inv.s2 == spec.s2(),
        attained,
        report,
    })
}
