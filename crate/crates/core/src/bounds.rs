//! Lower bounds for `v_p(res(f, g))` and the per-instance [`BoundReport`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{chi_sum_lower_bound, JointInvariants};
use crate::padic::Prime;
use crate::poly::Polynomial;
use crate::resolution::{depth_k, minimal, Kind};
use crate::serde_util;

fn int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `sum_i p^i gamma_i(omega_a) gamma_i(omega_b)` over minimal resolutions of
/// the given kind.
pub fn resolution_pairing(p: Prime, omega_a: u64, omega_b: u64, kind: Kind) -> BigRational {
    let a = minimal(omega_a, p, kind);
    let b = minimal(omega_b, p, kind);
    let n = a.len().min(b.len());
    (0..n)
        .map(|i| BigRational::from_integer(p.pow(i as u32)) * a.term(i) * b.term(i))
        .sum()
}

/// `p * sum_i p^i gamma_i(s1) gamma_i(s2)`.
pub fn bound_main(p: Prime, s1: u64, s2: u64, kind: Kind) -> BigRational {
    int(p.get()) * resolution_pairing(p, s1, s2, kind)
}

/// `S - max(s1, s2) + bound_main(p, s1, s2, kind)`.
pub fn bound_with_s(p: Prime, s1: u64, s2: u64, s_joint: u64, kind: Kind) -> Result<BigRational> {
    let max_s = s1.max(s2);
    if s_joint < max_s {
        return Err(Error::JointBelowGuaranteed { s_joint, max_s });
    }
    Ok(int(s_joint - max_s) + bound_main(p, s1, s2, kind))
}

/// `S - max(s1, s2) + p s1 s2 (p - 1) / (p - p^{-k})` with
/// `k = depth_k(max(s1, s2))`.
///
/// When `max(s1, s2) = 0` the product term vanishes and the bound is `S`.
pub fn bound_closed_form(p: Prime, s1: u64, s2: u64, s_joint: u64) -> Result<BigRational> {
    let max_s = s1.max(s2);
    if s_joint < max_s {
        return Err(Error::JointBelowGuaranteed { s_joint, max_s });
    }
    let head = int(s_joint - max_s);
    if max_s == 0 {
        return Ok(head);
    }
    let k = depth_k(max_s, p)?;
    let pr = int(p.get());
    let factor = (&pr - int(1)) / (&pr - BigRational::new(BigInt::one(), p.pow(k)));
    Ok(head + pr * int(s1) * int(s2) * factor)
}

pub const BASELINE_TRIVIAL: &str = "trivial";
pub const BASELINE_GENERAL: &str = "FZ-general";
pub const BASELINE_SMALL_S: &str = "FZ-small-s";

/// Earlier bounds in terms of a common floor `s` and the joint maximum `S`:
/// `S`, `S - s + (p - 1) s^2`, and `S - s + p s^2` when `s <= p`.
pub fn baseline_bounds(p: Prime, s: u64, s_joint: u64) -> Result<Vec<(&'static str, BigRational)>> {
    if s_joint < s {
        return Err(Error::JointBelowGuaranteed { s_joint, max_s: s });
    }
    let head = int(s_joint - s);
    let mut out = vec![
        (BASELINE_TRIVIAL, int(s_joint)),
        (BASELINE_GENERAL, &head + int(p.get() - 1) * int(s * s)),
    ];
    if s <= p.get() {
        out.push((BASELINE_SMALL_S, &head + int(p.get()) * int(s * s)));
    }
    Ok(out)
}

/// Every invariant and bound for one `(f, g, p)` instance.
///
/// Rationals serialize as `"num/den"` strings. The `S`-dependent bounds are
/// absent when `S < max(s1, s2)`, where the refined bound is not established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub p: Prime,
    pub s1: u64,
    pub s2: u64,
    #[serde(rename = "S")]
    pub s_joint: Option<u64>,
    pub vp_r: Option<u64>,
    /// `k` for `max(s1, s2)`, absent when both are zero.
    pub k: Option<u32>,
    #[serde(serialize_with = "serde_util::opt_rational")]
    pub chi_sum: Option<BigRational>,
    #[serde(serialize_with = "serde_util::rational")]
    pub bound_main_real: BigRational,
    #[serde(serialize_with = "serde_util::bigint")]
    pub bound_main_integral: BigInt,
    #[serde(
        rename = "bound_with_S_real",
        serialize_with = "serde_util::opt_rational"
    )]
    pub bound_with_s_real: Option<BigRational>,
    #[serde(
        rename = "bound_with_S_integral",
        serialize_with = "serde_util::opt_rational"
    )]
    pub bound_with_s_integral: Option<BigRational>,
    #[serde(serialize_with = "serde_util::opt_rational")]
    pub bound_closed_form: Option<BigRational>,
    #[serde(serialize_with = "serialize_named")]
    pub baselines: Vec<(String, BigRational)>,
    /// `v_p(r) - bound` for every bound present, keyed by field name.
    #[serde(serialize_with = "serialize_gaps")]
    pub gaps: BTreeMap<String, BigRational>,
}

fn serialize_named<S: serde::Serializer>(
    v: &[(String, BigRational)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(v.len()))?;
    for (k, x) in v {
        map.serialize_entry(k, &x.to_string())?;
    }
    map.end()
}

fn serialize_gaps<S: serde::Serializer>(
    v: &BTreeMap<String, BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(v.len()))?;
    for (k, x) in v {
        map.serialize_entry(k, &x.to_string())?;
    }
    map.end()
}

impl BoundReport {
    /// Bounds from the parameters alone; `S` and `v_p(r)` are optional.
    pub fn from_parameters(
        p: Prime,
        s1: u64,
        s2: u64,
        s_joint: Option<u64>,
        vp_r: Option<u64>,
        chi_sum: Option<BigRational>,
    ) -> Self {
        let max_s = s1.max(s2);
        let main_integral = bound_main(p, s1, s2, Kind::Integral);
        let with_s = |kind| s_joint.and_then(|s| bound_with_s(p, s1, s2, s, kind).ok());
        let mut report = BoundReport {
            p,
            s1,
            s2,
            s_joint,
            vp_r,
            k: depth_k(max_s, p).ok(),
            chi_sum,
            bound_main_real: bound_main(p, s1, s2, Kind::Real),
            bound_main_integral: main_integral.to_integer(),
            bound_with_s_real: with_s(Kind::Real),
            bound_with_s_integral: with_s(Kind::Integral),
            bound_closed_form: s_joint.and_then(|s| bound_closed_form(p, s1, s2, s).ok()),
            baselines: s_joint
                .and_then(|s| baseline_bounds(p, s1.min(s2), s).ok())
                .unwrap_or_default()
                .into_iter()
                .map(|(n, v)| (n.to_owned(), v))
                .collect(),
            gaps: BTreeMap::new(),
        };
        if let Some(v) = vp_r {
            let v = int(v);
            report.gaps = report
                .named_bounds()
                .into_iter()
                .map(|(name, b)| (name, &v - b))
                .collect();
        }
        report
    }

    /// Full report for an instance with nonzero resultant.
    pub fn compute(f: &Polynomial, g: &Polynomial, p: Prime) -> Result<Self> {
        let inv = JointInvariants::compute(f, g, p)?;
        let chi_sum = chi_sum_lower_bound(f, g, p)?;
        Ok(Self::from_invariants(&inv, p, chi_sum))
    }

    pub fn from_invariants(inv: &JointInvariants, p: Prime, chi_sum: BigRational) -> Self {
        Self::from_parameters(
            p,
            inv.s1,
            inv.s2,
            Some(inv.s_joint),
            Some(inv.vp_r),
            Some(chi_sum),
        )
    }

    /// Every lower bound present in the report, by name. All of them are
    /// proven lower bounds for `v_p(r)`.
    pub fn named_bounds(&self) -> Vec<(String, BigRational)> {
        let mut out = vec![
            ("bound_main_real".to_owned(), self.bound_main_real.clone()),
            (
                "bound_main_integral".to_owned(),
                BigRational::from_integer(self.bound_main_integral.clone()),
            ),
        ];
        let optional = [
            ("chi_sum", &self.chi_sum),
            ("bound_with_S_real", &self.bound_with_s_real),
            ("bound_with_S_integral", &self.bound_with_s_integral),
            ("bound_closed_form", &self.bound_closed_form),
        ];
        for (name, v) in optional {
            if let Some(v) = v {
                out.push((name.to_owned(), v.clone()));
            }
        }
        out.extend(self.baselines.iter().cloned());
        out
    }

    /// Bounds that exceed `v_p(r)`. Always empty for a correct implementation.
    pub fn violations(&self) -> Vec<(String, BigRational)> {
        let Some(v) = self.vp_r else {
            return Vec::new();
        };
        let v = int(v);
        self.named_bounds()
            .into_iter()
            .filter(|(_, b)| *b > v)
            .collect()
    }

    /// The tightest proven bound.
    pub fn best_bound(&self) -> BigRational {
        self.named_bounds()
            .into_iter()
            .map(|(_, b)| b)
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}
