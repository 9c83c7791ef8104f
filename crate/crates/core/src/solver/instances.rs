//! Built-in benchmark instance generators.

use crate::constraint::PbConstraint;
use crate::literal::Var;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("instance generator needs n >= 3, got {0}")]
pub struct InvalidInstanceSize(pub u32);

/// Encodes that the complete graph on `n` vertices has no vertex cover of
/// size `ceil(n/2) - 1`: one clause `x_i + x_j >= 1` per edge plus the
/// bound `sum ~x_i >= n - k`. Unsatisfiable for every `n >= 3`, since a
/// complete graph needs `n - 1` vertices in any cover.
pub fn generate_vertexcover_complete(n: u32) -> Result<Vec<PbConstraint>, InvalidInstanceSize> {
    if n < 3 {
        return Err(InvalidInstanceSize(n));
    }
    let k = n.div_ceil(2) - 1;
    let mut constraints = Vec::with_capacity((n * (n - 1) / 2 + 1) as usize);
    for i in 1..=n {
        for j in (i + 1)..=n {
            constraints.push(PbConstraint::from_terms(
                [(1, Var::new(i).positive()), (1, Var::new(j).positive())],
                1,
            ));
        }
    }
    constraints.push(PbConstraint::from_terms(
        (1..=n).map(|i| (1, Var::new(i).negative())),
        i64::from(n - k),
    ));
    Ok(constraints)
}
