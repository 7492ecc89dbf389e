//! The invariant table over small exhaustive and seeded corpora.

use resval_core::harness::{
    evaluate_corpus, generate_instances, GeneratorConfig, Mode, INVARIANTS,
};
use resval_core::Prime;

fn primes(ps: &[u64]) -> Vec<Prime> {
    ps.iter().map(|&p| Prime::new(p).unwrap()).collect()
}

fn assert_clean(cfg: GeneratorConfig) -> usize {
    let (instances, _) = generate_instances(&cfg).unwrap();
    let records = evaluate_corpus(&instances, true).unwrap();
    for r in &records {
        assert!(
            !r.failed(),
            "f = {:?}, g = {:?}, p = {}: {:?}",
            r.f,
            r.g,
            r.report.p,
            r.failures
        );
    }
    records.len()
}

#[test]
fn exhaustive_quadratics() {
    let n = assert_clean(GeneratorConfig {
        min_degree: 1,
        max_degree: 2,
        coeff_bound: 2,
        primes: primes(&[2, 3, 5]),
        mode: Mode::Exhaustive,
    });
    assert!(n > 2000);
}

#[test]
fn seeded_quartics() {
    for seed in 0..3 {
        assert_clean(GeneratorConfig {
            min_degree: 1,
            max_degree: 4,
            coeff_bound: 30,
            primes: primes(&[2, 3, 5, 7]),
            mode: Mode::Random { seed, count: 300 },
        });
    }
}

#[test]
fn table_names_are_unique() {
    let mut names: Vec<&str> = INVARIANTS.iter().map(|i| i.name).collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), INVARIANTS.len());
}
