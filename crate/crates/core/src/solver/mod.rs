//! A small CDCL-style pseudo-Boolean solver.
//!
//! Propagation is counter-based: every constraint carries its slack under
//! the current trail, updated incrementally on each assignment, and
//! propagates any unassigned literal whose coefficient exceeds the slack.
//! Conflict analysis walks the trail backwards and cancels the working
//! constraint against reasons, in one of two styles: generalized
//! resolution (weaken the reason just enough to keep the resolvent
//! conflicting) or division-based (weaken indivisible non-falsified
//! literals and divide by the pivot coefficient). Irrelevant-literal
//! elimination can be hooked into either style, and every rule
//! application can be recorded in a derivation trace.
//!
//! The solver is deliberately deterministic: no randomization, ties in
//! the decision heuristic break to the lowest variable index, restarts
//! are off unless requested.

mod activity;
mod analyze;
mod instances;
pub mod trace;
mod trail;

pub use activity::Activity;
pub use instances::{generate_vertexcover_complete, InvalidInstanceSize};
pub use trace::{replay, DerivationTrace, ReplayError, RuleApp, TraceStep};

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::assignment::Assignment;
use crate::constraint::PbConstraint;
use crate::literal::Lit;
use crate::relevance::{DetectorConfig, RemovalStrategy};
use trace::TraceBuilder;
use trail::{ConstraintId, Trail};

/// Which conflict-analysis style to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnalysisMode {
    GeneralizedResolution,
    DivisionBased,
}

/// Whether and how irrelevant literals are removed during analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elimination {
    Off,
    Weaken,
    Simple,
    SlackBased,
}

impl Elimination {
    pub(crate) fn strategy(self) -> Option<RemovalStrategy> {
        match self {
            Elimination::Off => None,
            Elimination::Weaken => Some(RemovalStrategy::Weaken),
            Elimination::Simple => Some(RemovalStrategy::Simple),
            Elimination::SlackBased => Some(RemovalStrategy::SlackBased),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConflictAnalysisConfig {
    pub mode: AnalysisMode,
    pub elimination: Elimination,
    pub detector: DetectorConfig,
}

impl Default for ConflictAnalysisConfig {
    fn default() -> Self {
        ConflictAnalysisConfig {
            mode: AnalysisMode::GeneralizedResolution,
            elimination: Elimination::Off,
            detector: DetectorConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SolveLimits {
    pub max_conflicts: Option<u64>,
    pub max_time: Option<Duration>,
}

#[derive(Clone, Debug, Default)]
pub struct SolverOptions {
    pub analysis: ConflictAnalysisConfig,
    pub limits: SolveLimits,
    /// Luby-sequence restarts; off by default so proof sizes are not
    /// confounded.
    pub luby_restarts: bool,
    /// Record every rule application in a [`DerivationTrace`].
    pub record_trace: bool,
}

/// Run counters. `cancellations` is the proof-size measure: the number of
/// cancellation steps applied across the whole run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub learned: u64,
    pub cancellations: u64,
    pub irrelevant_detected: u64,
    pub irrelevant_removed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Satisfiable, with a model verified against every input constraint.
    Sat(Assignment),
    Unsat,
    /// A resource limit was reached before an answer.
    Unknown(LimitReached),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitReached {
    Conflicts,
    Time,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: Outcome,
    pub stats: SolverStats,
    pub trace: Option<DerivationTrace>,
}

/// Decides a normalized formula.
pub fn solve(formula: &[PbConstraint], options: &SolverOptions) -> SolveResult {
    Solver::new(formula, options).run(formula)
}

struct StoredConstraint {
    constraint: PbConstraint,
    /// Slack under the current trail, maintained incrementally.
    slack: BigInt,
    /// Trace id: input index for inputs, step id for learned constraints.
    trace_id: u64,
}

pub(crate) struct Solver<'a> {
    options: &'a SolverOptions,
    db: Vec<StoredConstraint>,
    /// For each literal code, the constraints containing that literal.
    occs: Vec<Vec<(ConstraintId, BigInt)>>,
    trail: Trail,
    qhead: usize,
    activity: Activity,
    stats: SolverStats,
    tracer: TraceBuilder,
}

fn lit_code(lit: Lit) -> usize {
    (lit.var().index() as usize) * 2 + usize::from(!lit.is_positive())
}

const ACTIVITY_DECAY: f64 = 0.95;
const LUBY_UNIT: u64 = 100;

impl<'a> Solver<'a> {
    fn new(formula: &[PbConstraint], options: &'a SolverOptions) -> Solver<'a> {
        let num_vars = formula
            .iter()
            .filter_map(PbConstraint::max_var)
            .map(|v| v.index() as usize)
            .max()
            .unwrap_or(0);
        let mut solver = Solver {
            options,
            db: Vec::with_capacity(formula.len()),
            occs: vec![Vec::new(); (num_vars + 1) * 2],
            trail: Trail::new(num_vars),
            qhead: 0,
            activity: Activity::new(num_vars, ACTIVITY_DECAY),
            stats: SolverStats::default(),
            tracer: TraceBuilder::new(formula.len() as u64, options.record_trace),
        };
        for (idx, constraint) in formula.iter().enumerate() {
            solver.attach(constraint.clone(), idx as u64);
        }
        solver
    }

    fn attach(&mut self, constraint: PbConstraint, trace_id: u64) -> ConstraintId {
        let cid = self.db.len();
        let slack = constraint.slack_under(self.trail.assignment());
        for (lit, coeff) in constraint.terms() {
            self.occs[lit_code(lit)].push((cid, coeff.clone()));
        }
        self.db.push(StoredConstraint {
            constraint,
            slack,
            trace_id,
        });
        cid
    }

    fn assign(&mut self, lit: Lit, reason: Option<ConstraintId>) {
        if reason.is_some() {
            self.stats.propagations += 1;
        }
        self.trail.push(lit, reason);
        let falsified = lit_code(!lit);
        for k in 0..self.occs[falsified].len() {
            let (cid, ref coeff) = self.occs[falsified][k];
            self.db[cid].slack -= coeff;
        }
    }

    fn backjump(&mut self, level: u32) {
        for lit in self.trail.pop_to_level(level) {
            let falsified = lit_code(!lit);
            for k in 0..self.occs[falsified].len() {
                let (cid, ref coeff) = self.occs[falsified][k];
                self.db[cid].slack += coeff;
            }
        }
        self.qhead = self.qhead.min(self.trail.len());
    }

    /// Runs unit propagation to fixpoint, returning a conflicting
    /// constraint if one arises. Slack counters stay exact either way.
    fn propagate(&mut self) -> Option<ConstraintId> {
        while self.qhead < self.trail.len() {
            let lit = self.trail.lit_at(self.qhead);
            self.qhead += 1;
            let falsified = lit_code(!lit);
            for k in 0..self.occs[falsified].len() {
                let cid = self.occs[falsified][k].0;
                if let Some(conflict) = self.scan_propagate(cid) {
                    return Some(conflict);
                }
            }
        }
        None
    }

    /// Assigns every unassigned literal of `cid` whose coefficient exceeds
    /// the constraint's current slack.
    fn scan_propagate(&mut self, cid: ConstraintId) -> Option<ConstraintId> {
        if self.db[cid].slack < BigInt::zero() {
            return Some(cid);
        }
        let terms: Vec<(Lit, BigInt)> = self.db[cid]
            .constraint
            .terms()
            .map(|(l, a)| (l, a.clone()))
            .collect();
        for (lit, coeff) in terms {
            // nested assignments may lower this constraint's slack too
            if self.db[cid].slack < BigInt::zero() {
                return Some(cid);
            }
            if self.trail.lit_value(lit).is_none() && coeff > self.db[cid].slack {
                self.assign(lit, Some(cid));
            }
        }
        None
    }

    fn decide(&mut self) -> bool {
        let trail = &self.trail;
        match self.activity.best_var(|v| trail.value(v).is_none()) {
            Some(var) => {
                self.stats.decisions += 1;
                self.trail.open_level();
                // default polarity: false
                self.assign(var.negative(), None);
                true
            }
            None => false,
        }
    }

    fn run(mut self, formula: &[PbConstraint]) -> SolveResult {
        let started = Instant::now();
        let outcome = self.search(formula, started);
        SolveResult {
            outcome,
            stats: self.stats,
            trace: self.tracer.finish(),
        }
    }

    fn search(&mut self, formula: &[PbConstraint], started: Instant) -> Outcome {
        // level-0 state of the inputs
        for cid in 0..self.db.len() {
            if self.scan_propagate(cid).is_some() {
                return Outcome::Unsat;
            }
        }

        let mut restarts = 0u64;
        let mut conflicts_since_restart = 0u64;

        loop {
            if let Some(conflict) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_since_restart += 1;
                if self.trail.current_level() == 0 {
                    return Outcome::Unsat;
                }
                match self.analyze(conflict) {
                    analyze::AnalysisResult::Refuted => return Outcome::Unsat,
                    analyze::AnalysisResult::Learned {
                        constraint,
                        level,
                        trace_id,
                        existing,
                    } => {
                        self.backjump(level);
                        let cid = match existing {
                            Some(cid) => cid,
                            None => {
                                self.stats.learned += 1;
                                self.attach(constraint, trace_id)
                            }
                        };
                        let still_conflicting = self.scan_propagate(cid).is_some();
                        debug_assert!(
                            !still_conflicting,
                            "assertive constraint conflicts after backjump"
                        );
                        if still_conflicting && self.trail.current_level() == 0 {
                            return Outcome::Unsat;
                        }
                    }
                }
                self.activity.decay();
                if let Some(max) = self.options.limits.max_conflicts {
                    if self.stats.conflicts >= max {
                        return Outcome::Unknown(LimitReached::Conflicts);
                    }
                }
                if self.options.luby_restarts
                    && conflicts_since_restart >= LUBY_UNIT * luby(restarts + 1)
                {
                    restarts += 1;
                    conflicts_since_restart = 0;
                    self.backjump(0);
                }
            } else {
                if let Some(max) = self.options.limits.max_time {
                    if started.elapsed() >= max {
                        return Outcome::Unknown(LimitReached::Time);
                    }
                }
                if !self.decide() {
                    let model = self.trail.assignment().clone();
                    for constraint in formula {
                        assert_eq!(
                            constraint.evaluate(&model),
                            Ok(true),
                            "model fails an input constraint"
                        );
                    }
                    return Outcome::Sat(model);
                }
            }
        }
    }
}

/// The Luby restart sequence: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
fn luby(mut i: u64) -> u64 {
    loop {
        // largest k with 2^k - 1 <= i
        let mut k = 1u64;
        while (1u64 << (k + 1)) - 1 <= i {
            k += 1;
        }
        if (1u64 << k) - 1 == i {
            return 1u64 << (k - 1);
        }
        i -= (1u64 << k) - 1;
    }
}
