//! Subcommand implementations. Each returns the JSON document to print and,
//! when a checked property failed, a description that turns into exit code 3.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_bigint::BigInt;
use resval_core::bounds::{resolution_pairing, BoundReport};
use resval_core::construct::{verify_tightness, ConstructionSpec};
use resval_core::harness::{
    check_all_invariants, evaluate_corpus, generate_instances, CorpusRecord, CorpusSummary,
    GeneratorConfig, Mode,
};
use resval_core::invariants::{chi_sum_lower_bound, chi_sum_truncated, resultant_valuation};
use resval_core::resolution::{depth_k, integral_minimal, real_minimal_rational, Kind};
use resval_core::tree::min_scalar_exhaustive;
use resval_core::{BigRational, Error, Polynomial, Prime};
use serde_json::{json, Value};

use crate::{parse_polynomial, CliError, Command, CorpusArgs, PairArgs};

#[derive(Debug)]
pub struct Outcome {
    pub value: Value,
    /// Set when a checked property failed.
    pub violation: Option<String>,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome {
            value,
            violation: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.violation.is_some() {
            3
        } else {
            0
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn monic(arg: &'static str, text: &str) -> Result<Polynomial, CliError> {
    let f = parse_polynomial(text).map_err(|err| CliError::Parse { arg, err })?;
    if f.is_constant() {
        return Err(Error::Constant.into());
    }
    if !f.is_monic() {
        return Err(Error::NotMonic.into());
    }
    Ok(f)
}

fn pair(args: &PairArgs) -> Result<(Polynomial, Polynomial, Prime), CliError> {
    let f = monic("f", &args.f)?;
    let g = monic("g", &args.g)?;
    Ok((f, g, Prime::new(args.p)?))
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze { pair: args, check } => analyze(args, *check),
        Command::Resolution { omega, p, kind } => resolution(omega, *p, (*kind).into()),
        Command::Construct { p, k1, k2 } => construct(*p, *k1, *k2),
        Command::TreeMin {
            p,
            omega_a,
            omega_b,
            depth,
        } => tree_min(*p, *omega_a, *omega_b, *depth),
        Command::Corpus(args) => corpus(args),
        Command::ChiSum { pair: args, max_t } => chi_sum(args, *max_t),
    }
}

pub fn analyze(args: &PairArgs, check: bool) -> Result<Outcome, CliError> {
    let (f, g, p) = pair(args)?;
    let report = BoundReport::compute(&f, &g, p)?;
    let mut value = json!({ "f": f.to_string(), "g": g.to_string() });
    let map = value.as_object_mut().expect("object literal");
    if let Value::Object(fields) = to_value(&report) {
        map.extend(fields);
    }
    let mut problems: Vec<String> = report
        .violations()
        .into_iter()
        .map(|(name, b)| format!("{name} = {b} exceeds v_p(r)"))
        .collect();
    if check {
        let outcomes = check_all_invariants(&f, &g, p)?;
        problems.extend(
            outcomes
                .iter()
                .filter(|o| o.passed == Some(false))
                .map(|o| format!("{}: {}", o.name, o.witness.as_deref().unwrap_or(""))),
        );
        map.insert("invariants".into(), to_value(&outcomes));
    }
    Ok(Outcome {
        value,
        violation: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

fn parse_omega(text: &str) -> Result<BigRational, CliError> {
    let bad = || {
        CliError::Usage(format!(
            "--omega: '{text}' is not a non-negative integer or fraction"
        ))
    };
    let q = match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(text.trim().parse().map_err(|_| bad())?),
    };
    if q < BigRational::from_integer(0.into()) {
        return Err(bad());
    }
    Ok(q)
}

pub fn resolution(omega: &str, p: u64, kind: Kind) -> Result<Outcome, CliError> {
    let p = Prime::new(p)?;
    let omega = parse_omega(omega)?;
    let res = match kind {
        Kind::Real => real_minimal_rational(&omega, p)?,
        Kind::Integral => {
            let w = omega
                .is_integer()
                .then(|| u64::try_from(omega.to_integer()).ok())
                .flatten()
                .ok_or_else(|| {
                    CliError::Usage("--omega must be an integer for integral resolutions".into())
                })?;
            integral_minimal(w, p)
        }
    };
    let terms: Vec<Value> = res
        .terms
        .iter()
        .map(|t| match kind {
            Kind::Integral => {
                to_value(&i64::try_from(t.to_integer()).expect("terms are at most omega"))
            }
            Kind::Real => Value::String(t.to_string()),
        })
        .collect();
    let k = omega
        .is_integer()
        .then(|| {
            u64::try_from(omega.to_integer())
                .ok()
                .and_then(|w| depth_k(w, p).ok())
        })
        .flatten();
    Ok(Outcome::ok(json!({
        "omega": omega.to_string(),
        "p": p.get(),
        "kind": kind,
        "k": k,
        "terms": terms,
        "valid": res.is_valid(),
    })))
}

pub fn construct(p: u64, k1: u32, k2: u32) -> Result<Outcome, CliError> {
    let spec = ConstructionSpec::new(Prime::new(p)?, k1, k2)?;
    let t = verify_tightness(&spec)?;
    let f = Polynomial::new(t.f.clone());
    let g = Polynomial::new(t.g.clone());
    let mut value = to_value(&t);
    let map = value
        .as_object_mut()
        .expect("struct serializes to an object");
    map.insert("f_text".into(), Value::String(f.to_string()));
    map.insert("g_text".into(), Value::String(g.to_string()));
    let mut problems = Vec::new();
    if !t.identity_holds {
        problems.push(format!(
            "v_p(r) = {:?}, expected {}",
            t.report.vp_r, t.expected_vp_r
        ));
    }
    if !t.floors_match {
        problems.push(format!(
            "floors ({}, {}), expected ({}, {})",
            t.report.s1, t.report.s2, t.s1_expected, t.s2_expected
        ));
    }
    if t.attained == Some(false) {
        problems.push("the bound is not attained".into());
    }
    if !t.report.violations().is_empty() {
        problems.push("a bound exceeds v_p(r)".into());
    }
    Ok(Outcome {
        value,
        violation: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

pub fn tree_min(p: u64, omega_a: u64, omega_b: u64, depth: u32) -> Result<Outcome, CliError> {
    let p = Prime::new(p)?;
    let minimum = min_scalar_exhaustive(p, omega_a, omega_b, depth)?;
    let formula = resolution_pairing(p, omega_a, omega_b, Kind::Integral);
    let violation = (minimum < formula).then(|| format!("minimum {minimum} is below {formula}"));
    Ok(Outcome {
        value: json!({
            "p": p.get(),
            "omega_a": omega_a,
            "omega_b": omega_b,
            "depth": depth,
            "minimum": minimum.to_string(),
            "resolution_bound": formula.to_string(),
            "matches_theorem": minimum == formula,
        }),
        violation,
    })
}

pub fn chi_sum(args: &PairArgs, max_t: Option<u64>) -> Result<Outcome, CliError> {
    let (f, g, p) = pair(args)?;
    let vp_r = resultant_valuation(&f, &g, p)?;
    let value = match max_t {
        Some(t) => chi_sum_truncated(&f, &g, p, t)?,
        None => chi_sum_lower_bound(&f, &g, p)?,
    };
    let violation = (value > BigRational::from_integer(vp_r.into()))
        .then(|| format!("chi sum {value} exceeds v_p(r) = {vp_r}"));
    Ok(Outcome {
        value: json!({
            "f": f.to_string(),
            "g": g.to_string(),
            "p": p.get(),
            "max_t": max_t,
            "chi_sum": value.to_string(),
            "vp_r": vp_r,
        }),
        violation,
    })
}

fn write_jsonl(path: &Path, records: &[CorpusRecord]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    for r in records {
        serde_json::to_writer(&mut out, r).map_err(|e| CliError::Io(e.to_string()))?;
        out.write_all(b"\n").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn corpus(args: &CorpusArgs) -> Result<Outcome, CliError> {
    let primes = args
        .primes
        .iter()
        .map(|&p| Prime::new(p))
        .collect::<Result<Vec<_>, _>>()?;
    let cfg = GeneratorConfig {
        min_degree: args.degree_min,
        max_degree: args.degree_max,
        coeff_bound: args.coeff_bound,
        primes,
        mode: if args.exhaustive {
            Mode::Exhaustive
        } else {
            Mode::Random {
                seed: args.seed,
                count: args.count,
            }
        },
    };
    let (instances, skipped) = generate_instances(&cfg)?;
    // Open the output before the expensive part so a bad path fails fast.
    if let Some(path) = &args.out {
        File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let records = evaluate_corpus(&instances, !args.skip_invariants)?;
    if let Some(path) = &args.out {
        write_jsonl(path, &records)?;
    }
    let summary = CorpusSummary::from_records(&records, skipped, args.top);
    let failed: Vec<&CorpusRecord> = records.iter().filter(|r| r.failed()).collect();
    let mut value = to_value(&summary);
    let violation = if failed.is_empty() {
        None
    } else {
        value
            .as_object_mut()
            .expect("struct serializes to an object")
            .insert("failed_records".into(), to_value(&failed));
        Some(format!("{} record(s) failed", failed.len()))
    };
    Ok(Outcome { value, violation })
}
