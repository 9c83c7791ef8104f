//! Normalized pseudo-Boolean constraints.
//!
//! A constraint is kept in the normalized form `sum a_i * l_i >= d` where
//! every coefficient `a_i` and the degree `d` are non-negative integers of
//! arbitrary precision, with at most one term per variable. Two degenerate
//! cases get a canonical shape so they can be recognized in constant time:
//! a tautology is the empty constraint of degree 0, and an unsatisfiable
//! constraint is empty with a positive degree.
//!
//! Constraints are immutable values; every operation returns a new one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::assignment::Assignment;
use crate::literal::{Lit, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct TermData {
    coeff: BigInt,
    positive: bool,
}

/// A pseudo-Boolean constraint `sum a_i * l_i >= degree` in normalized form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PbConstraint {
    terms: BTreeMap<Var, TermData>,
    degree: BigInt,
}

impl PbConstraint {
    /// The canonical tautology `0 >= 0`.
    pub fn tautology() -> PbConstraint {
        PbConstraint {
            terms: BTreeMap::new(),
            degree: BigInt::zero(),
        }
    }

    /// Builds a constraint `sum coeff * lit >= degree` from possibly
    /// unnormalized terms: duplicate literals, opposite literals and
    /// negative coefficients are all resolved here.
    pub fn from_terms<I, C, D>(terms: I, degree: D) -> PbConstraint
    where
        I: IntoIterator<Item = (C, Lit)>,
        C: Into<BigInt>,
        D: Into<BigInt>,
    {
        let mut signed: BTreeMap<Var, BigInt> = BTreeMap::new();
        let mut rhs: BigInt = degree.into();
        for (coeff, lit) in terms {
            let coeff = coeff.into();
            let entry = signed.entry(lit.var()).or_insert_with(BigInt::zero);
            if lit.is_positive() {
                *entry += &coeff;
            } else {
                // a * ~v  ==  a - a * v
                *entry -= &coeff;
                rhs -= &coeff;
            }
        }
        PbConstraint::from_signed(signed, rhs)
    }

    /// Builds from per-variable net coefficients of the positive literal:
    /// the constraint `sum s_v * v >= rhs`.
    pub(crate) fn from_signed(signed: BTreeMap<Var, BigInt>, rhs: BigInt) -> PbConstraint {
        let mut terms = BTreeMap::new();
        let mut degree = rhs;
        for (var, net) in signed {
            if net.is_positive() {
                terms.insert(
                    var,
                    TermData {
                        coeff: net,
                        positive: true,
                    },
                );
            } else if net.is_negative() {
                let coeff = -net;
                degree += &coeff;
                terms.insert(
                    var,
                    TermData {
                        coeff,
                        positive: false,
                    },
                );
            }
        }
        PbConstraint::canonicalize(terms, degree)
    }

    /// Restores the canonical invariants on a term map whose coefficients
    /// are already positive: clamps non-positive degrees to the tautology
    /// and reduces unsatisfiable constraints (degree above the coefficient
    /// sum) to their empty form by weakening every term away, which keeps
    /// the slack unchanged.
    fn canonicalize(terms: BTreeMap<Var, TermData>, degree: BigInt) -> PbConstraint {
        if degree <= BigInt::zero() {
            return PbConstraint::tautology();
        }
        let total: BigInt = terms.values().map(|t| &t.coeff).sum();
        if degree > total {
            return PbConstraint {
                terms: BTreeMap::new(),
                degree: degree - total,
            };
        }
        PbConstraint { terms, degree }
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the constraint is satisfied by every assignment.
    pub fn is_tautology(&self) -> bool {
        self.terms.is_empty() && self.degree.is_zero()
    }

    /// True iff the constraint is satisfied by no assignment.
    pub fn is_contradiction(&self) -> bool {
        self.terms.is_empty() && self.degree.is_positive()
    }

    /// Terms in increasing variable order.
    pub fn terms(&self) -> impl Iterator<Item = (Lit, &BigInt)> + Clone + '_ {
        self.terms
            .iter()
            .map(|(&var, t)| (Lit::new(var, t.positive), &t.coeff))
    }

    /// The literal of `var` in this constraint together with its
    /// coefficient, if present.
    pub fn term_of(&self, var: Var) -> Option<(Lit, &BigInt)> {
        self.terms
            .get(&var)
            .map(|t| (Lit::new(var, t.positive), &t.coeff))
    }

    /// Coefficient of exactly this literal (`None` if the variable is
    /// absent or occurs with the opposite polarity).
    pub fn coeff_of(&self, lit: Lit) -> Option<&BigInt> {
        self.terms
            .get(&lit.var())
            .filter(|t| t.positive == lit.is_positive())
            .map(|t| &t.coeff)
    }

    pub fn contains_var(&self, var: Var) -> bool {
        self.terms.contains_key(&var)
    }

    /// Sum of all coefficients.
    pub fn coeff_sum(&self) -> BigInt {
        self.terms.values().map(|t| &t.coeff).sum()
    }

    /// The slack `sum a_i - degree`; negative iff the constraint is
    /// unsatisfiable.
    pub fn slack(&self) -> BigInt {
        self.coeff_sum() - &self.degree
    }

    /// The slack under a partial assignment: the coefficient sum of the
    /// terms not falsified by `assignment`, minus the degree. A negative
    /// result means the constraint cannot be satisfied by any extension
    /// of the assignment.
    pub fn slack_under(&self, assignment: &Assignment) -> BigInt {
        let not_falsified: BigInt = self
            .terms()
            .filter(|(lit, _)| !assignment.is_false(*lit))
            .map(|(_, coeff)| coeff)
            .sum();
        not_falsified - &self.degree
    }

    /// Evaluates under a total assignment of the constraint's variables.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<bool, UnassignedVar> {
        let mut satisfied = BigInt::zero();
        for (lit, coeff) in self.terms() {
            match assignment.lit_value(lit) {
                Some(true) => satisfied += coeff,
                Some(false) => {}
                None => return Err(UnassignedVar(lit.var())),
            }
        }
        Ok(satisfied >= self.degree)
    }

    /// True iff all coefficients are 1.
    pub fn is_cardinality(&self) -> bool {
        self.terms.values().all(|t| t.coeff == BigInt::from(1))
    }

    /// True iff all coefficients are 1 and the degree is 1.
    pub fn is_clause(&self) -> bool {
        self.is_cardinality() && self.degree == BigInt::from(1)
    }

    /// Largest variable occurring in the constraint.
    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().next_back().copied()
    }

    /// Conditions the constraint by a cube: literals of the cube are fixed
    /// to true, so matching terms leave the constraint lowering the degree
    /// by their coefficient, and opposing terms are dropped unchanged.
    pub fn condition(&self, cube: &Cube) -> PbConstraint {
        let mut terms = self.terms.clone();
        let mut degree = self.degree.clone();
        for &lit in cube.literals() {
            if let Some(t) = terms.get(&lit.var()) {
                if t.positive == lit.is_positive() {
                    degree -= &t.coeff;
                }
                terms.remove(&lit.var());
            }
        }
        PbConstraint::canonicalize(terms, degree)
    }
}

impl fmt::Display for PbConstraint {
    /// OPB-style rendering: `+10 x1 +5 x2 +1 ~x3 >= 15`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (lit, coeff) in self.terms() {
            write!(f, "+{coeff} {lit} ")?;
        }
        write!(f, ">= {}", self.degree)
    }
}

/// Error returned by [`PbConstraint::evaluate`] when the assignment misses
/// one of the constraint's variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("variable {0} is unassigned")]
pub struct UnassignedVar(pub Var);

/// A consistent set of literals, used to condition constraints.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cube {
    literals: BTreeSet<Lit>,
}

impl Cube {
    /// Builds a cube, rejecting any literal that appears together with its
    /// negation.
    pub fn new<I: IntoIterator<Item = Lit>>(literals: I) -> Result<Cube, InconsistentCube> {
        let mut set = BTreeSet::new();
        for lit in literals {
            if set.contains(&!lit) {
                return Err(InconsistentCube(lit.var()));
            }
            set.insert(lit);
        }
        Ok(Cube { literals: set })
    }

    pub fn literals(&self) -> impl Iterator<Item = &Lit> {
        self.literals.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("cube contains both polarities of {0}")]
pub struct InconsistentCube(pub Var);

/// A raw constraint as read from input: signed coefficients, any relation,
/// duplicate or opposite literals allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawConstraint {
    pub terms: Vec<(BigInt, Lit)>,
    pub relation: Relation,
    pub rhs: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
    Eq,
    Gt,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
            Relation::Gt => ">",
            Relation::Ge => ">=",
        })
    }
}

impl RawConstraint {
    pub fn new<I, C, R>(terms: I, relation: Relation, rhs: R) -> RawConstraint
    where
        I: IntoIterator<Item = (C, Lit)>,
        C: Into<BigInt>,
        R: Into<BigInt>,
    {
        RawConstraint {
            terms: terms.into_iter().map(|(c, l)| (c.into(), l)).collect(),
            relation,
            rhs: rhs.into(),
        }
    }

    /// Normalizes into one `>=` constraint, or two for an equality. The
    /// `>=` direction of an equality comes first.
    pub fn normalize(&self) -> Vec<PbConstraint> {
        match self.relation {
            Relation::Ge => vec![self.normalize_ge(&self.rhs)],
            Relation::Gt => vec![self.normalize_ge(&(&self.rhs + 1))],
            Relation::Le => vec![self.flipped().normalize_ge(&-&self.rhs)],
            Relation::Lt => vec![self.flipped().normalize_ge(&(-&self.rhs + 1))],
            Relation::Eq => vec![
                self.normalize_ge(&self.rhs),
                self.flipped().normalize_ge(&-&self.rhs),
            ],
        }
    }

    /// Negates every coefficient; used to turn `<=` into `>=`.
    fn flipped(&self) -> RawConstraint {
        RawConstraint {
            terms: self.terms.iter().map(|(c, l)| (-c, *l)).collect(),
            relation: Relation::Ge,
            rhs: -&self.rhs,
        }
    }

    fn normalize_ge(&self, rhs: &BigInt) -> PbConstraint {
        PbConstraint::from_terms(
            self.terms.iter().map(|(c, l)| (c.clone(), *l)),
            rhs.clone(),
        )
    }
}

impl fmt::Display for RawConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (coeff, lit) in &self.terms {
            if coeff.is_negative() {
                write!(f, "{coeff} {lit} ")?;
            } else {
                write!(f, "+{coeff} {lit} ")?;
            }
        }
        write!(f, "{} {}", self.relation, self.rhs)
    }
}
