//! Shared helpers for the integration suites: random value strategies and
//! the single-coefficient mutation machinery for the shipped scripts.

use std::collections::BTreeSet;

use proptest::prelude::*;

use moment_core::proofscript::{CheckStatus, Script, TheoremOutcome};
use moment_core::symkernel::{Poly, Ratio, VarId};

pub fn arb_poly(vars: &'static [VarId]) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0u16..3, vars.len()), -5i64..=5),
        0..4,
    )
    .prop_map(move |terms| {
        let mut poly = Poly::zero();
        for (exps, coeff) in terms {
            let mut mono = Poly::constant(num_rational::BigRational::from_integer(coeff.into()));
            for (v, e) in vars.iter().zip(exps) {
                if e > 0 {
                    mono = mono.mul(&Poly::var(*v).pow(e as u32).unwrap()).unwrap();
                }
            }
            poly = poly.add(&mono).unwrap();
        }
        poly
    })
}

pub fn arb_ratio(vars: &'static [VarId]) -> impl Strategy<Value = Ratio> {
    (arb_poly(vars), arb_poly(vars)).prop_map(|(num, den)| {
        let den = if den.is_zero() { Poly::one() } else { den };
        Ratio::new(num, den).unwrap()
    })
}

pub fn failing_ids(outcome: &TheoremOutcome) -> BTreeSet<String> {
    outcome
        .reports
        .iter()
        .filter(|r| r.status != CheckStatus::Pass)
        .map(|r| r.id.clone())
        .collect()
}

/// One maximal digit run inside a check's data text.
#[derive(Clone, Debug)]
pub struct MutationSite {
    pub check_index: usize,
    pub check_id: String,
    pub in_expected: bool,
    pub key: String,
    pub byte_range: (usize, usize),
}

/// Every integer-literal site in the data texts of checks that pass in the
/// baseline run (reserved procedure parameters excluded, substitution
/// values included).
pub fn mutation_sites(script: &Script, baseline_failing: &BTreeSet<String>) -> Vec<MutationSite> {
    let mut sites = Vec::new();
    for (check_index, check) in script.checks.iter().enumerate() {
        if baseline_failing.contains(&check.id) {
            continue;
        }
        let mut scan = |in_expected: bool, key: &str, value: &str| {
            if !in_expected && matches!(key, "dir" | "var" | "mode" | "support") {
                return;
            }
            let bytes = value.as_bytes();
            let mut i = 0;
            while i < bytes.len() {
                if bytes[i].is_ascii_digit() {
                    let start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    sites.push(MutationSite {
                        check_index,
                        check_id: check.id.clone(),
                        in_expected,
                        key: key.to_string(),
                        byte_range: (start, i),
                    });
                } else {
                    i += 1;
                }
            }
        };
        for (key, value) in &check.inputs {
            scan(false, key, value);
        }
        for (key, value) in &check.expected {
            scan(true, key, value);
        }
    }
    sites
}

/// Bump the integer at the site by one and return the mutated script.
pub fn apply_mutation(script: &Script, site: &MutationSite) -> Script {
    let mut mutated = script.clone();
    let check = &mut mutated.checks[site.check_index];
    let map = if site.in_expected {
        &mut check.expected
    } else {
        &mut check.inputs
    };
    let value = map.get_mut(&site.key).expect("site key exists");
    let (start, end) = site.byte_range;
    let n: u64 = value[start..end].parse().expect("digit run parses");
    let replacement = (n + 1).to_string();
    value.replace_range(start..end, &replacement);
    mutated
}
