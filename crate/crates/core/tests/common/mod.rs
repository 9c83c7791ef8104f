//! Oracles shared by the integration suites: truth-table checks and
//! brute-force satisfiability, implemented over plain `u64` arithmetic so
//! they share nothing with the library's arbitrary-precision code paths.

use num_traits::ToPrimitive;
use pblit_core::{Lit, PbConstraint, Var};
use rand::Rng;

pub fn lit(name: &str) -> Lit {
    let (positive, name) = match name.strip_prefix('~') {
        Some(rest) => (false, rest),
        None => (true, name),
    };
    let c = name.chars().next().expect("empty literal name");
    assert!(c.is_ascii_lowercase() && name.len() == 1);
    Lit::new(Var::new(c as u32 - 'a' as u32 + 1), positive)
}

pub fn pb(terms: &[(i64, &str)], degree: i64) -> PbConstraint {
    PbConstraint::from_terms(terms.iter().map(|&(c, name)| (c, lit(name))), degree)
}

/// Evaluates a constraint under the assignment encoded in `bits`, where
/// bit `i - 1` is the value of variable `x_i`.
pub fn eval_bits(c: &PbConstraint, bits: u64) -> bool {
    let degree = c.degree().to_u64().expect("small degree in tests");
    let satisfied: u64 = c
        .terms()
        .map(|(l, a)| {
            let value = bits >> (l.var().index() - 1) & 1 == 1;
            if value == l.is_positive() {
                a.to_u64().expect("small coefficient in tests")
            } else {
                0
            }
        })
        .sum();
    satisfied >= degree
}

fn max_var_index(constraints: &[&PbConstraint]) -> u32 {
    constraints
        .iter()
        .filter_map(|c| c.max_var())
        .map(Var::index)
        .max()
        .unwrap_or(0)
}

/// True iff every total assignment satisfying all of `premises` satisfies
/// `conclusion`; exhaustive over the union of their variables.
pub fn entails(premises: &[&PbConstraint], conclusion: &PbConstraint) -> bool {
    let mut all = premises.to_vec();
    all.push(conclusion);
    let n = max_var_index(&all);
    assert!(n <= 24, "exhaustive check kept small");
    (0u64..1 << n).all(|bits| {
        premises.iter().any(|c| !eval_bits(c, bits)) || eval_bits(conclusion, bits)
    })
}

/// True iff the two constraints have identical truth tables.
pub fn equivalent(c1: &PbConstraint, c2: &PbConstraint) -> bool {
    entails(&[c1], c2) && entails(&[c2], c1)
}

/// Definition-level irrelevance: flipping the variable in any satisfying
/// assignment never produces a falsifying one.
pub fn flip_check_irrelevant(c: &PbConstraint, var: Var) -> bool {
    let n = max_var_index(&[c]);
    assert!(var.index() <= n);
    let flip = 1u64 << (var.index() - 1);
    (0u64..1 << n).all(|bits| !eval_bits(c, bits) || eval_bits(c, bits ^ flip))
}

/// Brute-force satisfiability; the sums are `u64`, the scan exits early on
/// the first falsified constraint per assignment.
pub fn brute_force_sat(formula: &[PbConstraint]) -> bool {
    let refs: Vec<&PbConstraint> = formula.iter().collect();
    let n = max_var_index(&refs);
    (0u64..1 << n).any(|bits| formula.iter().all(|c| eval_bits(c, bits)))
}

/// A random normalized constraint over variables `x1..=max_var` with
/// coefficients up to `max_coeff` and a degree within the coefficient sum
/// (so it is neither a tautology nor an immediate contradiction).
pub fn random_constraint<R: Rng>(rng: &mut R, max_var: u32, max_coeff: i64) -> PbConstraint {
    let len = rng.gen_range(1..=max_var);
    let mut vars: Vec<u32> = (1..=max_var).collect();
    for i in (1..vars.len()).rev() {
        vars.swap(i, rng.gen_range(0..=i));
    }
    let terms: Vec<(i64, Lit)> = vars[..len as usize]
        .iter()
        .map(|&v| {
            (
                rng.gen_range(1..=max_coeff),
                Lit::new(Var::new(v), rng.gen_bool(0.5)),
            )
        })
        .collect();
    let total: i64 = terms.iter().map(|(a, _)| a).sum();
    PbConstraint::from_terms(terms, rng.gen_range(1..=total))
}
