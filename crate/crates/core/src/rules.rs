//! The cutting-planes inference rules.
//!
//! All rules are total, checked operations over normalized constraints and
//! return normalized constraints. None of them saturates its output
//! implicitly; saturation is its own rule so that callers can observe and
//! record intermediate constraints.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::constraint::PbConstraint;
use crate::literal::{Lit, Var};

/// Errors reported by rules whose preconditions are checked.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuleError {
    #[error("literal {0} does not occur in the constraint")]
    LiteralNotPresent(Lit),
    #[error("division requires a divisor >= 1, got {0}")]
    InvalidDivisor(BigInt),
    #[error("multiplication requires a multiplier >= 1, got {0}")]
    InvalidMultiplier(BigInt),
    #[error("variable {0} does not occur with opposite polarities in the two operands")]
    PivotNotOpposed(Var),
}

/// Caps every coefficient at the degree. The result is equivalent to the
/// input over Boolean assignments.
pub fn saturate(c: &PbConstraint) -> PbConstraint {
    let degree = c.degree();
    PbConstraint::from_terms(
        c.terms()
            .map(|(lit, coeff)| (coeff.min(degree).clone(), lit)),
        degree.clone(),
    )
}

/// Removes the term of `lit` and lowers the degree by its coefficient.
/// The input entails the result.
pub fn weaken(c: &PbConstraint, lit: Lit) -> Result<PbConstraint, RuleError> {
    let coeff = c
        .coeff_of(lit)
        .ok_or(RuleError::LiteralNotPresent(lit))?
        .clone();
    let degree = c.degree() - &coeff;
    Ok(PbConstraint::from_terms(
        c.terms()
            .filter(|(l, _)| *l != lit)
            .map(|(l, a)| (a.clone(), l)),
        degree,
    ))
}

/// Divides every coefficient and the degree by `rho`, rounding up. The
/// input entails the result; when every coefficient is divisible by `rho`
/// the two are equivalent.
pub fn divide(c: &PbConstraint, rho: &BigInt) -> Result<PbConstraint, RuleError> {
    if rho < &BigInt::one() {
        return Err(RuleError::InvalidDivisor(rho.clone()));
    }
    Ok(PbConstraint::from_terms(
        c.terms().map(|(lit, coeff)| (coeff.div_ceil(rho), lit)),
        c.degree().div_ceil(rho),
    ))
}

/// Scales every coefficient and the degree by `mu`; an equivalence.
pub fn multiply(c: &PbConstraint, mu: &BigInt) -> Result<PbConstraint, RuleError> {
    if mu < &BigInt::one() {
        return Err(RuleError::InvalidMultiplier(mu.clone()));
    }
    Ok(PbConstraint::from_terms(
        c.terms().map(|(lit, coeff)| (coeff * mu, lit)),
        c.degree() * mu,
    ))
}

/// Adds two constraints coefficient-wise. Opposite literals merge onto the
/// majority polarity and reduce the degree by the smaller coefficient.
pub fn add(c1: &PbConstraint, c2: &PbConstraint) -> PbConstraint {
    PbConstraint::from_terms(
        c1.terms()
            .chain(c2.terms())
            .map(|(lit, coeff)| (coeff.clone(), lit)),
        c1.degree() + c2.degree(),
    )
}

/// Cancels `pivot` between two constraints that contain it with opposite
/// polarities: both sides are scaled by the smallest multipliers that
/// equalize the pivot coefficients and then added, so the pivot variable
/// is absent from the result.
pub fn cancel(
    c1: &PbConstraint,
    c2: &PbConstraint,
    pivot: Var,
) -> Result<PbConstraint, RuleError> {
    let (l1, a1) = c1.term_of(pivot).ok_or(RuleError::PivotNotOpposed(pivot))?;
    let (l2, a2) = c2.term_of(pivot).ok_or(RuleError::PivotNotOpposed(pivot))?;
    if l1 == l2 {
        return Err(RuleError::PivotNotOpposed(pivot));
    }
    let lcm = a1.lcm(a2);
    let m1 = &lcm / a1;
    let m2 = &lcm / a2;
    Ok(add(&multiply(c1, &m1)?, &multiply(c2, &m2)?))
}
