//! Deterministic workload generators shared by the benchmarks.

use num_bigint::BigInt;
use pblit_core::{Lit, PbConstraint, Var};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reproducible multiset of coefficients in `1..=max`.
pub fn coefficients(count: usize, max: u64, seed: u64) -> Vec<BigInt> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| BigInt::from(rng.gen_range(1..=max))).collect()
}

/// A reproducible saturated constraint over `count` variables.
pub fn constraint(count: u32, max_coeff: u64, seed: u64) -> PbConstraint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms: Vec<(BigInt, Lit)> = (1..=count)
        .map(|v| {
            (
                BigInt::from(rng.gen_range(1..=max_coeff)),
                Lit::new(Var::new(v), rng.gen_bool(0.5)),
            )
        })
        .collect();
    let total: BigInt = terms.iter().map(|(a, _)| a).sum();
    let degree = &total / 2 + 1;
    pblit_core::rules::saturate(&PbConstraint::from_terms(terms, degree))
}
