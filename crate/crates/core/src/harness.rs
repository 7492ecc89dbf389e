//! Instance generation and the table-driven invariant checker.
//!
//! # Sampling algorithm
//!
//! Random corpora are reproducible from the seed alone. The generator is
//! ChaCha8 seeded through `rand_core`'s `seed_from_u64`, and every draw is
//! `next_u64() % span`. One pair is drawn as:
//!
//! 1. `f` then `g`, each by: degree `min + draw(max - min + 1)`, then the
//!    coefficients of `x^0 .. x^{d-1}` in ascending order, each
//!    `-B + draw(2B + 1)`; the leading coefficient is 1.
//! 2. Pairs with zero resultant are counted and discarded.
//!
//! The `i`-th accepted pair is checked at `primes[i % primes.len()]`.
//!
//! Exhaustive corpora list every monic polynomial with degree in range and
//! coefficients in `[-B, B]` (degree ascending, then the coefficient of
//! `x^0` varying fastest), take all ordered pairs with nonzero resultant and
//! check each at every prime.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::bounds::BoundReport;
use crate::error::{Error, Result};
use crate::invariants::{
    chi_sum_lower_bound, chi_sum_truncated, gcd_valuation, guaranteed_valuation, JointInvariants,
};
use crate::padic::{int_valuation, root_valuation_profile, vp, Prime, Valuation};
use crate::poly::Polynomial;
use crate::serde_util;
use crate::tree::{chi_weight_from_poly, scalar_product, validate_weight};

pub const MAX_DEGREE: usize = 4;
pub const MAX_COEFF_BOUND: i64 = 100;
pub const MAX_COUNT: usize = 100_000;
pub const MAX_EXHAUSTIVE_PAIRS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Random { seed: u64, count: usize },
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub min_degree: usize,
    pub max_degree: usize,
    pub coeff_bound: i64,
    pub primes: Vec<Prime>,
    pub mode: Mode,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: String| Err(Error::Invalid(m));
        if self.min_degree == 0 || self.min_degree > self.max_degree {
            return invalid(format!(
                "degree range {}..={} must be nonempty and start at 1 or more",
                self.min_degree, self.max_degree
            ));
        }
        if self.max_degree > MAX_DEGREE {
            return Err(Error::TooLarge(format!(
                "degree {} > {MAX_DEGREE}",
                self.max_degree
            )));
        }
        if self.coeff_bound < 1 {
            return invalid(format!(
                "coefficient bound {} must be positive",
                self.coeff_bound
            ));
        }
        if self.coeff_bound > MAX_COEFF_BOUND {
            return Err(Error::TooLarge(format!(
                "coefficient bound {} > {MAX_COEFF_BOUND}",
                self.coeff_bound
            )));
        }
        if self.primes.is_empty() {
            return invalid("at least one prime is required".into());
        }
        match self.mode {
            Mode::Random { count, .. } if count > MAX_COUNT => {
                Err(Error::TooLarge(format!("count {count} > {MAX_COUNT}")))
            }
            Mode::Exhaustive => {
                let n = self.exhaustive_poly_count();
                if n.saturating_mul(n) > MAX_EXHAUSTIVE_PAIRS {
                    Err(Error::TooLarge(format!("{n}^2 exhaustive pairs")))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    fn exhaustive_poly_count(&self) -> usize {
        let width = (2 * self.coeff_bound + 1) as usize;
        (self.min_degree..=self.max_degree)
            .map(|d| width.saturating_pow(d as u32))
            .fold(0usize, usize::saturating_add)
    }
}

fn all_monic(cfg: &GeneratorConfig) -> Vec<Polynomial> {
    let b = cfg.coeff_bound;
    let mut out = Vec::new();
    for d in cfg.min_degree..=cfg.max_degree {
        let mut c = vec![-b; d];
        loop {
            let mut coeffs: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
            coeffs.push(BigInt::from(1));
            out.push(Polynomial::new(coeffs));
            // Odometer, x^0 fastest.
            let Some(pos) = c.iter().position(|&x| x < b) else {
                break;
            };
            c[pos] += 1;
            c[..pos].iter_mut().for_each(|x| *x = -b);
        }
    }
    out
}

fn has_nonzero_resultant(f: &Polynomial, g: &Polynomial) -> bool {
    crate::resultant::resultant(f, g).is_ok_and(|r| !r.is_zero())
}

enum Source {
    Random {
        rng: Box<ChaCha8Rng>,
        remaining: usize,
        attempts_left: usize,
    },
    Exhaustive {
        polys: Vec<Polynomial>,
        next: usize,
    },
}

/// Deterministic stream of monic pairs with nonzero resultant.
pub struct PairGenerator {
    cfg: GeneratorConfig,
    source: Source,
    skipped: usize,
}

impl PairGenerator {
    /// Pairs discarded so far for having a zero resultant.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    fn draw(rng: &mut ChaCha8Rng, span: u64) -> u64 {
        rng.next_u64() % span
    }

    fn random_poly(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig) -> Polynomial {
        let span = (cfg.max_degree - cfg.min_degree + 1) as u64;
        let d = cfg.min_degree + Self::draw(rng, span) as usize;
        let width = 2 * cfg.coeff_bound as u64 + 1;
        let mut coeffs: Vec<BigInt> = (0..d)
            .map(|_| BigInt::from(-cfg.coeff_bound + Self::draw(rng, width) as i64))
            .collect();
        coeffs.push(BigInt::from(1));
        Polynomial::new(coeffs)
    }
}

impl Iterator for PairGenerator {
    type Item = (Polynomial, Polynomial);

    fn next(&mut self) -> Option<Self::Item> {
        match &mut self.source {
            Source::Random {
                rng,
                remaining,
                attempts_left,
            } => {
                while *remaining > 0 && *attempts_left > 0 {
                    *attempts_left -= 1;
                    let f = Self::random_poly(rng, &self.cfg);
                    let g = Self::random_poly(rng, &self.cfg);
                    if has_nonzero_resultant(&f, &g) {
                        *remaining -= 1;
                        return Some((f, g));
                    }
                    self.skipped += 1;
                }
                None
            }
            Source::Exhaustive { polys, next } => {
                let n = polys.len();
                while *next < n * n {
                    let (i, j) = (*next / n, *next % n);
                    *next += 1;
                    if has_nonzero_resultant(&polys[i], &polys[j]) {
                        return Some((polys[i].clone(), polys[j].clone()));
                    }
                    self.skipped += 1;
                }
                None
            }
        }
    }
}

pub fn generate_pairs(cfg: &GeneratorConfig) -> Result<PairGenerator> {
    cfg.validate()?;
    let source = match cfg.mode {
        Mode::Random { seed, count } => Source::Random {
            rng: Box::new(ChaCha8Rng::seed_from_u64(seed)),
            remaining: count,
            attempts_left: count.saturating_mul(100).saturating_add(1000),
        },
        Mode::Exhaustive => Source::Exhaustive {
            polys: all_monic(cfg),
            next: 0,
        },
    };
    Ok(PairGenerator {
        cfg: cfg.clone(),
        source,
        skipped: 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub f: Polynomial,
    pub g: Polynomial,
    pub p: Prime,
}

/// Pairs with their primes, in output order. Returns the zero-resultant
/// skip count alongside.
pub fn generate_instances(cfg: &GeneratorConfig) -> Result<(Vec<Instance>, usize)> {
    let mut gen = generate_pairs(cfg)?;
    let mut out = Vec::new();
    let primes = cfg.primes.clone();
    for (i, (f, g)) in gen.by_ref().enumerate() {
        match cfg.mode {
            Mode::Random { .. } => out.push(Instance {
                f,
                g,
                p: primes[i % primes.len()],
            }),
            Mode::Exhaustive => out.extend(primes.iter().map(|&p| Instance {
                f: f.clone(),
                g: g.clone(),
                p,
            })),
        }
    }
    Ok((out, gen.skipped()))
}

// ---------------------------------------------------------------------------
// Invariant checking

/// Everything the invariant table needs about one instance.
#[derive(Clone, Debug)]
pub struct InstanceFacts {
    pub f: Polynomial,
    pub g: Polynomial,
    pub p: Prime,
    pub inv: JointInvariants,
    pub report: BoundReport,
}

impl InstanceFacts {
    pub fn compute(f: &Polynomial, g: &Polynomial, p: Prime) -> Result<Self> {
        let inv = JointInvariants::compute(f, g, p)?;
        let chi_sum = chi_sum_lower_bound(f, g, p)?;
        let report = BoundReport::from_invariants(&inv, p, chi_sum);
        Ok(InstanceFacts {
            f: f.clone(),
            g: g.clone(),
            p,
            inv,
            report,
        })
    }

    fn vp_r(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.inv.vp_r))
    }

    fn s_refined_applies(&self) -> bool {
        self.inv.s_joint >= self.inv.max_s()
    }

    /// Integers at which pointwise properties are sampled.
    fn sample_points(&self) -> Vec<BigInt> {
        let span = self
            .p
            .checked_pow(self.inv.s_joint as u32 + 1)
            .unwrap_or(u64::MAX)
            .min(1024) as i64;
        (-32..=span.max(32)).map(BigInt::from).collect()
    }
}

type Check = fn(&InstanceFacts) -> std::result::Result<(), String>;

/// One row of the invariant table.
pub struct Invariant {
    pub name: &'static str,
    pub applies: fn(&InstanceFacts) -> bool,
    pub check: Check,
}

fn always(_: &InstanceFacts) -> bool {
    true
}

fn ensure(cond: bool, witness: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(witness())
    }
}

/// Largest residue level enumerated by the full `chi_hat` structure check.
pub const STRUCTURE_MAX_RESIDUES: u64 = 1 << 22;
/// Largest tree (in vertices per residue class) built for the weight
/// function checks.
pub const TREE_MAX_VERTICES: usize = 1 << 12;

fn structure_levels(facts: &InstanceFacts) -> u32 {
    facts.inv.vp_r as u32 + 2
}

fn structure_fits(facts: &InstanceFacts) -> bool {
    facts
        .p
        .checked_pow(structure_levels(facts))
        .is_some_and(|n| n <= STRUCTURE_MAX_RESIDUES)
}

fn tree_depth(facts: &InstanceFacts) -> u32 {
    facts.inv.max_s().max(1) as u32
}

fn tree_fits(facts: &InstanceFacts) -> bool {
    crate::tree::TruncatedTree::new(facts.p, tree_depth(facts)).vertex_count() <= TREE_MAX_VERTICES
}

fn check_gcd_divides(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let bound = Valuation::from_int(facts.inv.vp_r);
    for n in facts.sample_points() {
        let v = gcd_valuation(&facts.f, &facts.g, &n, facts.p);
        ensure(v <= bound, || {
            format!("n = {n}: gcd valuation {v} > v_p(r) = {}", facts.inv.vp_r)
        })?;
    }
    Ok(())
}

fn check_joint_max(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let inv = &facts.inv;
    ensure(
        inv.min_s() <= inv.s_joint && inv.s_joint <= inv.vp_r,
        || {
            format!(
                "min(s1, s2) = {}, S = {}, v_p(r) = {}",
                inv.min_s(),
                inv.s_joint,
                inv.vp_r
            )
        },
    )?;
    let s = Valuation::from_int(inv.s_joint);
    for n in facts.sample_points() {
        let v = gcd_valuation(&facts.f, &facts.g, &n, facts.p);
        ensure(v <= s, || {
            format!("n = {n}: gcd valuation {v} > S = {}", inv.s_joint)
        })?;
    }
    Ok(())
}

fn check_floors(facts: &InstanceFacts) -> std::result::Result<(), String> {
    for n in facts.sample_points() {
        for (name, h, s) in [("f", &facts.f, facts.inv.s1), ("g", &facts.g, facts.inv.s2)] {
            let v = int_valuation(&h.evaluate(&n), facts.p);
            ensure(v >= Valuation::from_int(s), || {
                format!("v_p({name}({n})) = {v} < {s}")
            })?;
        }
    }
    Ok(())
}

fn check_product_floor(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let fg = &facts.f * &facts.g;
    let s = guaranteed_valuation(&fg, facts.p).map_err(|e| e.to_string())?;
    let (s1, s2) = (facts.inv.s1, facts.inv.s2);
    ensure(s >= s1 + s2, || {
        format!("floor of f*g is {s} < s1 + s2 = {}", s1 + s2)
    })
}

fn check_chi_sum_le_vpr(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let c = facts.report.chi_sum.clone().unwrap_or_default();
    ensure(c <= facts.vp_r(), || {
        format!("chi sum {c} > v_p(r) = {}", facts.inv.vp_r)
    })
}

fn check_main_le_chi_sum(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let c = facts.report.chi_sum.clone().unwrap_or_default();
    let b = BigRational::from_integer(facts.report.bound_main_integral.clone());
    ensure(b <= c, || format!("integral main bound {b} > chi sum {c}"))
}

fn check_real_le_integral(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let r = &facts.report;
    let i = BigRational::from_integer(r.bound_main_integral.clone());
    ensure(r.bound_main_real <= i, || {
        format!("real main bound {} > integral {i}", r.bound_main_real)
    })
}

fn check_with_s_le_vpr(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let b = facts
        .report
        .bound_with_s_integral
        .clone()
        .unwrap_or_default();
    ensure(b <= facts.vp_r(), || {
        format!("S-refined integral bound {b} > v_p(r) = {}", facts.inv.vp_r)
    })
}

fn check_with_s_real_le_integral(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let r = &facts.report;
    let (a, b) = (r.bound_with_s_real.clone(), r.bound_with_s_integral.clone());
    ensure(a <= b, || {
        format!("S-refined real bound {a:?} > integral {b:?}")
    })
}

fn check_closed_form(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let r = &facts.report;
    ensure(r.bound_closed_form == r.bound_with_s_real, || {
        format!(
            "closed form {:?} != real resolution bound {:?}",
            r.bound_closed_form, r.bound_with_s_real
        )
    })
}

fn check_with_s_ge_trivial(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let b = facts.report.bound_with_s_real.clone().unwrap_or_default();
    let s = BigRational::from_integer(BigInt::from(facts.inv.s_joint));
    ensure(b >= s, || format!("S-refined real bound {b} < S = {s}"))
}

fn check_baselines(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let v = facts.vp_r();
    for (name, b) in &facts.report.baselines {
        ensure(*b <= v, || format!("baseline {name} = {b} > v_p(r) = {v}"))?;
    }
    Ok(())
}

fn check_profiles(facts: &InstanceFacts) -> std::result::Result<(), String> {
    for m in facts.sample_points() {
        for (name, h) in [("f", &facts.f), ("g", &facts.g)] {
            let prof = root_valuation_profile(h, &m, facts.p).map_err(|e| e.to_string())?;
            let direct = int_valuation(&h.evaluate(&m), facts.p);
            ensure(prof.valuation() == direct, || {
                format!(
                    "{name} at m = {m}: profile sum {} != v_p = {direct}",
                    prof.valuation()
                )
            })?;
        }
    }
    Ok(())
}

fn check_structure_f(facts: &InstanceFacts) -> std::result::Result<(), String> {
    check_chi_hat_structure(&facts.f, facts.p, structure_levels(facts))
}

fn check_structure_g(facts: &InstanceFacts) -> std::result::Result<(), String> {
    check_chi_hat_structure(&facts.g, facts.p, structure_levels(facts))
}

fn check_chi_weights(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let depth = tree_depth(facts);
    for (name, h, s) in [("f", &facts.f, facts.inv.s1), ("g", &facts.g, facts.inv.s2)] {
        for k in 0..facts.p.get() {
            let w = chi_weight_from_poly(h, facts.p, k, depth).map_err(|e| e.to_string())?;
            let omega = BigRational::from_integer(BigInt::from(s));
            ensure(w.omega == omega && validate_weight(&w), || {
                format!("chi weight of {name} on residue tree {k} (depth {depth}) is not a weight function of weight {s}")
            })?;
        }
    }
    Ok(())
}

fn check_tree_products(facts: &InstanceFacts) -> std::result::Result<(), String> {
    let depth = tree_depth(facts);
    let mut total = BigRational::zero();
    for k in 0..facts.p.get() {
        let a = chi_weight_from_poly(&facts.f, facts.p, k, depth).map_err(|e| e.to_string())?;
        let b = chi_weight_from_poly(&facts.g, facts.p, k, depth).map_err(|e| e.to_string())?;
        total += scalar_product(&a, &b).map_err(|e| e.to_string())?;
    }
    let direct = chi_sum_truncated(&facts.f, &facts.g, facts.p, depth as u64 + 1)
        .map_err(|e| e.to_string())?;
    ensure(total == direct, || {
        format!(
            "tree scalar products {total} != chi sum truncated at t = {} ({direct})",
            depth + 1
        )
    })
}

fn guarded_structure(f: &InstanceFacts) -> bool {
    structure_fits(f)
}

fn s_refined(f: &InstanceFacts) -> bool {
    f.s_refined_applies()
}

fn s_refined_positive(f: &InstanceFacts) -> bool {
    f.s_refined_applies() && f.inv.min_s() >= 1
}

/// The invariant table shared by the corpus command and the test suites.
pub static INVARIANTS: &[Invariant] = &[
    Invariant {
        name: "gcd_divides_resultant",
        applies: always,
        check: check_gcd_divides,
    },
    Invariant {
        name: "joint_max_bounds",
        applies: always,
        check: check_joint_max,
    },
    Invariant {
        name: "guaranteed_floors",
        applies: always,
        check: check_floors,
    },
    Invariant {
        name: "product_floor",
        applies: always,
        check: check_product_floor,
    },
    Invariant {
        name: "chi_sum_le_vp_r",
        applies: always,
        check: check_chi_sum_le_vpr,
    },
    Invariant {
        name: "main_integral_le_chi_sum",
        applies: always,
        check: check_main_le_chi_sum,
    },
    Invariant {
        name: "main_real_le_main_integral",
        applies: always,
        check: check_real_le_integral,
    },
    Invariant {
        name: "with_s_integral_le_vp_r",
        applies: s_refined,
        check: check_with_s_le_vpr,
    },
    Invariant {
        name: "with_s_real_le_with_s_integral",
        applies: s_refined,
        check: check_with_s_real_le_integral,
    },
    Invariant {
        name: "closed_form_matches_real_bound",
        applies: s_refined,
        check: check_closed_form,
    },
    Invariant {
        name: "with_s_real_ge_trivial",
        applies: s_refined_positive,
        check: check_with_s_ge_trivial,
    },
    Invariant {
        name: "baselines_le_vp_r",
        applies: always,
        check: check_baselines,
    },
    Invariant {
        name: "profile_matches_valuation",
        applies: always,
        check: check_profiles,
    },
    Invariant {
        name: "chi_hat_structure_f",
        applies: guarded_structure,
        check: check_structure_f,
    },
    Invariant {
        name: "chi_hat_structure_g",
        applies: guarded_structure,
        check: check_structure_g,
    },
    Invariant {
        name: "chi_weights_valid",
        applies: tree_fits,
        check: check_chi_weights,
    },
    Invariant {
        name: "tree_products_match_chi_sum",
        applies: tree_fits,
        check: check_tree_products,
    },
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantOutcome {
    pub name: &'static str,
    /// `None` when the invariant does not apply to the instance.
    pub passed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

pub fn evaluate_invariants(facts: &InstanceFacts) -> Vec<InvariantOutcome> {
    INVARIANTS
        .iter()
        .map(|inv| {
            if !(inv.applies)(facts) {
                return InvariantOutcome {
                    name: inv.name,
                    passed: None,
                    witness: None,
                };
            }
            match (inv.check)(facts) {
                Ok(()) => InvariantOutcome {
                    name: inv.name,
                    passed: Some(true),
                    witness: None,
                },
                Err(w) => InvariantOutcome {
                    name: inv.name,
                    passed: Some(false),
                    witness: Some(w),
                },
            }
        })
        .collect()
}

pub fn check_all_invariants(
    f: &Polynomial,
    g: &Polynomial,
    p: Prime,
) -> Result<Vec<InvariantOutcome>> {
    Ok(evaluate_invariants(&InstanceFacts::compute(f, g, p)?))
}

/// Checks, for every residue `m mod p^t` with `t <= levels`: `chi_hat` is
/// integral, non-increasing in `t`, sums to `v_p(f(m))`, and dominates the
/// sum over the `p` lifts of `m` one level down.
pub fn check_chi_hat_structure(
    f: &Polynomial,
    p: Prime,
    levels: u32,
) -> std::result::Result<(), String> {
    let top = p
        .checked_pow(levels)
        .filter(|&n| n <= STRUCTURE_MAX_RESIDUES)
        .ok_or_else(|| format!("{p}^{levels} residues exceed the structure check limit"))?;
    // table[t - 1][m] = chi_hat_t(m) for m < p^t.
    let mut table: Vec<Vec<u64>> = (1..=levels)
        .map(|t| Vec::with_capacity(p.get().pow(t) as usize))
        .collect();
    for m in 0..top {
        let mb = BigInt::from(m);
        let prof = root_valuation_profile(f, &mb, p).map_err(|e| e.to_string())?;
        let mut prev: Option<BigRational> = None;
        for t in 1..=levels {
            let x = prof.chi_hat(t as u64);
            if !x.is_integer() {
                return Err(format!("chi_hat_{t}({m}) = {x} is not an integer"));
            }
            if let Some(pv) = &prev {
                if x > *pv {
                    return Err(format!(
                        "chi_hat_{t}({m}) = {x} > chi_hat_{}({m}) = {pv}",
                        t - 1
                    ));
                }
            }
            if m < p.get().pow(t) {
                table[t as usize - 1].push(x.to_integer().to_u64().unwrap());
            }
            prev = Some(x);
        }
        let direct = vp(&f.evaluate(&mb), p);
        if let Some(direct) = direct {
            let last = prof
                .max_finite()
                .map_or(0, |v| v.ceil().to_integer().to_u64().unwrap())
                + 1;
            let total: BigRational = (1..=last).map(|t| prof.chi_hat(t)).sum();
            if total != BigRational::from_integer(direct.into()) {
                return Err(format!(
                    "sum of chi_hat at m = {m} is {total}, v_p(f(m)) = {direct}"
                ));
            }
        }
    }
    for t in 2..=levels as usize {
        let (parents, children) = (&table[t - 2], &table[t - 1]);
        let stride = parents.len();
        for (m, &pv) in parents.iter().enumerate() {
            let below: u64 = (0..p.get() as usize)
                .map(|i| children[m + i * stride])
                .sum();
            if below > pv {
                return Err(format!(
                    "chi_hat_{}({m}) = {pv} < {below} = sum of chi_hat_{t} over its lifts",
                    t - 1
                ));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Corpus records

/// One line of a corpus JSONL file.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusRecord {
    #[serde(serialize_with = "serde_util::bigints")]
    pub f: Vec<BigInt>,
    #[serde(serialize_with = "serde_util::bigints")]
    pub g: Vec<BigInt>,
    #[serde(flatten)]
    pub report: BoundReport,
    /// Some proven bound exceeds `v_p(r)`.
    pub violated: bool,
    /// Names of failed invariants, with witnesses.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<InvariantOutcome>,
}

impl CorpusRecord {
    pub fn evaluate(instance: &Instance, check_invariants: bool) -> Result<Self> {
        let facts = InstanceFacts::compute(&instance.f, &instance.g, instance.p)?;
        let failures = if check_invariants {
            evaluate_invariants(&facts)
                .into_iter()
                .filter(|o| o.passed == Some(false))
                .collect()
        } else {
            Vec::new()
        };
        Ok(CorpusRecord {
            f: instance.f.coeffs().to_vec(),
            g: instance.g.coeffs().to_vec(),
            violated: !facts.report.violations().is_empty(),
            report: facts.report,
            failures,
        })
    }

    pub fn failed(&self) -> bool {
        self.violated || !self.failures.is_empty()
    }

    /// `v_p(r)` minus the tightest proven bound.
    pub fn best_gap(&self) -> BigRational {
        let v = BigRational::from_integer(BigInt::from(self.report.vp_r.unwrap_or(0)));
        v - self.report.best_bound()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TightInstance {
    pub index: usize,
    #[serde(serialize_with = "serde_util::bigints")]
    pub f: Vec<BigInt>,
    #[serde(serialize_with = "serde_util::bigints")]
    pub g: Vec<BigInt>,
    pub p: Prime,
    pub vp_r: u64,
    #[serde(serialize_with = "serde_util::rational")]
    pub gap: BigRational,
}

/// Aggregate view over a corpus run.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusSummary {
    pub records: usize,
    pub skipped_zero_resultant: usize,
    pub violations: usize,
    pub invariant_failures: usize,
    /// Count of records per `floor(v_p(r) - bound)`, per bound.
    pub gap_histogram: BTreeMap<String, BTreeMap<i64, usize>>,
    /// Records whose best bound is closest to `v_p(r)`, larger `v_p(r)` first
    /// among ties.
    pub tightest: Vec<TightInstance>,
    /// Largest `v_p(r)` seen.
    pub max_vp_r: u64,
}

impl CorpusSummary {
    pub fn from_records(records: &[CorpusRecord], skipped: usize, top: usize) -> Self {
        let mut hist: BTreeMap<String, BTreeMap<i64, usize>> = BTreeMap::new();
        for r in records {
            for (name, gap) in &r.report.gaps {
                let bucket = gap.floor().to_integer().to_i64().unwrap_or(i64::MAX);
                *hist
                    .entry(name.clone())
                    .or_default()
                    .entry(bucket)
                    .or_default() += 1;
            }
        }
        let mut ranked: Vec<(usize, &CorpusRecord, BigRational)> = records
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r, r.best_gap()))
            .collect();
        ranked.sort_by(|a, b| {
            a.2.cmp(&b.2)
                .then(b.1.report.vp_r.cmp(&a.1.report.vp_r))
                .then(a.0.cmp(&b.0))
        });
        let tightest = ranked
            .into_iter()
            .take(top)
            .map(|(index, r, gap)| TightInstance {
                index,
                f: r.f.clone(),
                g: r.g.clone(),
                p: r.report.p,
                vp_r: r.report.vp_r.unwrap_or(0),
                gap,
            })
            .collect();
        CorpusSummary {
            records: records.len(),
            skipped_zero_resultant: skipped,
            violations: records.iter().filter(|r| r.violated).count(),
            invariant_failures: records.iter().filter(|r| !r.failures.is_empty()).count(),
            gap_histogram: hist,
            tightest,
            max_vp_r: records
                .iter()
                .filter_map(|r| r.report.vp_r)
                .max()
                .unwrap_or(0),
        }
    }
}

/// Evaluates every instance, in parallel, preserving input order.
pub fn evaluate_corpus(
    instances: &[Instance],
    check_invariants: bool,
) -> Result<Vec<CorpusRecord>> {
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(16);
    let chunk = instances.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = instances
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|inst| CorpusRecord::evaluate(inst, check_invariants))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(instances.len());
        for h in handles {
            out.extend(h.join().expect("corpus worker panicked")?);
        }
        Ok(out)
    })
}
