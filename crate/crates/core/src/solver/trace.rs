//! Derivation traces: every rule application performed during conflict
//! analysis, recorded so that a run can be audited or replayed.
//!
//! Identifiers share one space: the input constraints of a run occupy ids
//! `0..inputs`, and every recorded step allocates the next id. A step may
//! only refer to input constraints or to earlier steps.

use num_bigint::BigInt;

use crate::constraint::PbConstraint;
use crate::literal::{Lit, Var};
use crate::relevance::RemovalStrategy;
use crate::rules::{self, RuleError};

/// One recorded rule application.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub id: u64,
    pub rule: RuleApp,
    pub operands: Vec<u64>,
    pub result: PbConstraint,
}

/// The rule of a step together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleApp {
    Saturate,
    Weaken(Lit),
    Divide(BigInt),
    Multiply(BigInt),
    Add,
    Cancel(Var),
    Eliminate {
        strategy: RemovalStrategy,
        literals: Vec<Lit>,
    },
}

impl RuleApp {
    pub fn name(&self) -> &'static str {
        match self {
            RuleApp::Saturate => "saturate",
            RuleApp::Weaken(_) => "weaken",
            RuleApp::Divide(_) => "divide",
            RuleApp::Multiply(_) => "multiply",
            RuleApp::Add => "add",
            RuleApp::Cancel(_) => "cancel",
            RuleApp::Eliminate { .. } => "eliminate",
        }
    }
}

/// An ordered list of steps over a fixed number of input constraints.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DerivationTrace {
    pub inputs: u64,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn new(inputs: u64) -> DerivationTrace {
        DerivationTrace {
            inputs,
            steps: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {step}: operand {operand} is neither an input nor an earlier step")]
    UnknownOperand { step: u64, operand: u64 },
    #[error("step {step}: expected {arity} operands")]
    WrongArity { step: u64, arity: usize },
    #[error("step {step}: {source}")]
    Rule { step: u64, source: RuleError },
    #[error("step {step}: recomputed constraint differs from the recorded one")]
    Mismatch { step: u64 },
}

/// Re-executes every step of a trace from the given inputs and checks that
/// each recomputed constraint equals the recorded one exactly. Returns the
/// constraints in step order.
pub fn replay(
    inputs: &[PbConstraint],
    trace: &DerivationTrace,
) -> Result<Vec<PbConstraint>, ReplayError> {
    let mut derived: std::collections::BTreeMap<u64, PbConstraint> = Default::default();
    let lookup = |derived: &std::collections::BTreeMap<u64, PbConstraint>, step: u64, id: u64| {
        if (id as usize) < inputs.len() {
            return Ok(inputs[id as usize].clone());
        }
        derived
            .get(&id)
            .cloned()
            .ok_or(ReplayError::UnknownOperand { step, operand: id })
    };

    for step in &trace.steps {
        let arity = match step.rule {
            RuleApp::Add | RuleApp::Cancel(_) => 2,
            _ => 1,
        };
        if step.operands.len() != arity {
            return Err(ReplayError::WrongArity {
                step: step.id,
                arity,
            });
        }
        let first = lookup(&derived, step.id, step.operands[0])?;
        let result = match &step.rule {
            RuleApp::Saturate => Ok(rules::saturate(&first)),
            RuleApp::Weaken(lit) => rules::weaken(&first, *lit),
            RuleApp::Divide(rho) => rules::divide(&first, rho),
            RuleApp::Multiply(mu) => rules::multiply(&first, mu),
            RuleApp::Add => {
                let second = lookup(&derived, step.id, step.operands[1])?;
                Ok(rules::add(&first, &second))
            }
            RuleApp::Cancel(pivot) => {
                let second = lookup(&derived, step.id, step.operands[1])?;
                rules::cancel(&first, &second, *pivot)
            }
            RuleApp::Eliminate { strategy, literals } => strategy.apply(&first, literals),
        }
        .map_err(|source| ReplayError::Rule {
            step: step.id,
            source,
        })?;
        if result != step.result {
            return Err(ReplayError::Mismatch { step: step.id });
        }
        derived.insert(step.id, result);
    }
    Ok(trace.steps.iter().map(|s| derived[&s.id].clone()).collect())
}

/// Incrementally builds a trace; a disabled builder records nothing and
/// hands out only the input-constraint ids it was given.
#[derive(Debug)]
pub(crate) struct TraceBuilder {
    trace: Option<DerivationTrace>,
    next_id: u64,
}

impl TraceBuilder {
    pub fn new(inputs: u64, enabled: bool) -> TraceBuilder {
        TraceBuilder {
            trace: enabled.then(|| DerivationTrace::new(inputs)),
            next_id: inputs,
        }
    }

    pub fn record(&mut self, rule: RuleApp, operands: Vec<u64>, result: &PbConstraint) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        if let Some(trace) = &mut self.trace {
            trace.steps.push(TraceStep {
                id,
                rule,
                operands,
                result: result.clone(),
            });
        }
        id
    }

    pub fn finish(self) -> Option<DerivationTrace> {
        self.trace
    }
}
