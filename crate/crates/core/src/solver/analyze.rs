//! Conflict analysis.
//!
//! The working constraint starts as the conflicting constraint and stays
//! conflicting under the trail prefix below the current walk position.
//! Each round cancels it with the (possibly weakened, possibly
//! irrelevant-literal-eliminated) reason of the last relevant trail
//! literal, until the constraint would propagate after backjumping.

use num_integer::Integer;

use super::*;
use crate::relevance::detect_all;
use crate::rules;

pub(crate) enum AnalysisResult {
    Learned {
        constraint: PbConstraint,
        /// Backjump level at which the constraint propagates.
        level: u32,
        trace_id: u64,
        /// Set when the conflicting constraint itself was assertive and no
        /// rule was applied; it is already in the database.
        existing: Option<ConstraintId>,
    },
    /// The analysis derived an unsatisfiable constraint.
    Refuted,
}

impl Solver<'_> {
    /// Slack of `c` under the trail prefix `[0, pos)`.
    fn slack_below(&self, c: &PbConstraint, pos: usize) -> BigInt {
        let not_falsified: BigInt = c
            .terms()
            .filter(|(lit, _)| !self.trail.falsified_below(*lit, pos))
            .map(|(_, coeff)| coeff)
            .sum();
        not_falsified - c.degree()
    }

    /// Slack of `c` once every assignment above `level` is undone.
    fn slack_at_level(&self, c: &PbConstraint, pos: usize, level: u32) -> BigInt {
        let kept: BigInt = c
            .terms()
            .filter(|(lit, _)| {
                !(self.trail.falsified_below(*lit, pos)
                    && self.trail.level(lit.var()) <= level)
            })
            .map(|(_, coeff)| coeff)
            .sum();
        kept - c.degree()
    }

    /// True iff `c` would assign some literal after backjumping to
    /// `level`: it is not conflicting there and some literal unassigned at
    /// that level has a coefficient above the slack.
    fn propagates_at_level(&self, c: &PbConstraint, pos: usize, level: u32) -> bool {
        let slack = self.slack_at_level(c, pos, level);
        if slack < BigInt::zero() {
            return false;
        }
        c.terms().any(|(lit, coeff)| {
            *coeff > slack
                && (self.trail.lit_value(lit).is_none()
                    || self.trail.level(lit.var()) > level)
        })
    }

    /// Picks a backjump level at which `c` propagates: preferably the
    /// second-highest decision level among its falsified literals, which
    /// undoes the whole top block; otherwise the deepest level where it
    /// propagates. `None` means no backjump level makes `c` propagate and
    /// the analysis has to keep resolving.
    fn propagating_level(&self, c: &PbConstraint, pos: usize) -> Option<u32> {
        let mut top: Option<u32> = None;
        let mut second = 0u32;
        for (lit, _) in c.terms() {
            if self.trail.falsified_below(lit, pos) {
                let level = self.trail.level(lit.var());
                match top {
                    None => top = Some(level),
                    Some(t) if level > t => {
                        second = t;
                        top = Some(level);
                    }
                    Some(t) if level < t && level > second => second = level,
                    _ => {}
                }
            }
        }
        let top = top?;
        if self.propagates_at_level(c, pos, second) {
            return Some(second);
        }
        (0..top)
            .rev()
            .find(|&level| self.propagates_at_level(c, pos, level))
    }

    fn bump_constraint(&mut self, c: &PbConstraint) {
        for (lit, _) in c.terms() {
            self.activity.bump(lit.var());
        }
    }

    pub(crate) fn analyze(&mut self, conflict: ConstraintId) -> AnalysisResult {
        let mode = self.options.analysis.mode;
        let mut working = self.db[conflict].constraint.clone();
        let mut working_ref = self.db[conflict].trace_id;
        let mut touched = false;
        self.bump_constraint(&working);
        let mut pos = self.trail.len();

        loop {
            // the working constraint stays conflicting under trail[0..pos]
            debug_assert!(self.slack_below(&working, pos) < BigInt::zero());
            if pos == 0
                || !working
                    .terms()
                    .any(|(lit, _)| self.trail.falsified_below(lit, pos))
            {
                // conflicting with nothing to undo: unsatisfiability derived
                return AnalysisResult::Refuted;
            }
            let lit = self.trail.lit_at(pos - 1);
            let in_working = working.coeff_of(!lit).is_some();

            // stop once undoing the next literal would leave the
            // constraint propagating instead of conflicting, provided some
            // backjump level actually re-propagates it
            if in_working && self.slack_below(&working, pos - 1) >= BigInt::zero() {
                if let Some(level) = self.propagating_level(&working, pos) {
                    return AnalysisResult::Learned {
                        constraint: working,
                        level,
                        trace_id: working_ref,
                        existing: (!touched).then_some(conflict),
                    };
                }
            }

            pos -= 1;
            if !in_working {
                continue;
            }
            let Some(reason_cid) = self.trail.reason(lit.var()) else {
                // decisions have no reason to cancel with; undoing one
                // always leaves a level where the constraint propagates,
                // so the walk only reaches this arm while still
                // conflicting below
                debug_assert!(self.slack_below(&working, pos) < BigInt::zero());
                continue;
            };
            let (reason, reason_ref) = match mode {
                AnalysisMode::GeneralizedResolution => {
                    self.reduce_reason_gr(reason_cid, lit, &working, pos)
                }
                AnalysisMode::DivisionBased => self.reduce_reason_div(reason_cid, lit, pos),
            };
            self.bump_constraint(&reason);

            working = rules::cancel(&working, &reason, lit.var())
                .expect("pivot occurs with opposite polarities");
            self.stats.cancellations += 1;
            working_ref = self.tracer.record(
                RuleApp::Cancel(lit.var()),
                vec![working_ref, reason_ref],
                &working,
            );
            touched = true;

            let saturated = rules::saturate(&working);
            if saturated != working {
                working = saturated;
                working_ref = self
                    .tracer
                    .record(RuleApp::Saturate, vec![working_ref], &working);
            }

            if mode == AnalysisMode::GeneralizedResolution {
                (working, working_ref) =
                    self.try_eliminate(working, working_ref, |solver, candidate| {
                        solver.slack_below(candidate, pos) < BigInt::zero()
                    });
            }
        }
    }

    /// Weakens the reason of `pivot_lit` on its smallest non-falsified
    /// literals, saturating after each step, until the upcoming
    /// cancellation is guaranteed to stay conflicting. Below `pos` the
    /// pivot is unassigned and counts into both slacks, and cancellation
    /// merges the scaled pivot pair away while cutting the degree by their
    /// common coefficient, so the resolvent slack is bounded by
    /// `m1 * slack(conflict) + m2 * slack(reason) - lcm`.
    fn reduce_reason_gr(
        &mut self,
        reason_cid: ConstraintId,
        pivot_lit: Lit,
        working: &PbConstraint,
        pos: usize,
    ) -> (PbConstraint, u64) {
        let mut reason = self.db[reason_cid].constraint.clone();
        let mut reason_ref = self.db[reason_cid].trace_id;
        let conflict_coeff = working
            .coeff_of(!pivot_lit)
            .cloned()
            .expect("pivot is falsified in the working constraint");
        let working_slack = self.slack_below(working, pos);

        let preserves_conflict = |solver: &Self, candidate: &PbConstraint| -> bool {
            let Some(reason_coeff) = candidate.coeff_of(pivot_lit) else {
                return false;
            };
            let lcm = conflict_coeff.lcm(reason_coeff);
            let weighted = (&lcm / &conflict_coeff) * &working_slack
                + (&lcm / reason_coeff) * solver.slack_below(candidate, pos)
                - &lcm;
            weighted < BigInt::zero()
        };

        while !preserves_conflict(self, &reason) {
            let candidate = reason
                .terms()
                .filter(|(l, _)| *l != pivot_lit && !self.trail.falsified_below(*l, pos))
                .min_by(|(l1, a1), (l2, a2)| a1.cmp(a2).then(l1.var().cmp(&l2.var())))
                .map(|(l, _)| l);
            match candidate {
                Some(lit) => {
                    reason = rules::weaken(&reason, lit).expect("chosen from the constraint");
                    reason_ref = self
                        .tracer
                        .record(RuleApp::Weaken(lit), vec![reason_ref], &reason);
                }
                None => {
                    // a fully weakened reason preserves the conflict once
                    // saturated; saturation below closes the loop
                }
            }
            let saturated = rules::saturate(&reason);
            if saturated != reason {
                reason = saturated;
                reason_ref = self
                    .tracer
                    .record(RuleApp::Saturate, vec![reason_ref], &reason);
            } else if candidate.is_none() {
                unreachable!("fully weakened saturated reason must preserve the conflict");
            }
        }

        self.try_eliminate(reason, reason_ref, preserves_conflict)
    }

    /// Division-style reason processing: weaken every non-falsified
    /// literal whose coefficient the pivot coefficient does not divide,
    /// then divide by the pivot coefficient so the pivot ends at 1.
    fn reduce_reason_div(
        &mut self,
        reason_cid: ConstraintId,
        pivot_lit: Lit,
        pos: usize,
    ) -> (PbConstraint, u64) {
        let mut reason = self.db[reason_cid].constraint.clone();
        let mut reason_ref = self.db[reason_cid].trace_id;
        let pivot_coeff = reason
            .coeff_of(pivot_lit)
            .cloned()
            .expect("reason contains the literal it propagated");

        let mut to_weaken: Vec<(BigInt, Lit)> = reason
            .terms()
            .filter(|(l, a)| {
                *l != pivot_lit
                    && !self.trail.falsified_below(*l, pos)
                    && !(*a % &pivot_coeff).is_zero()
            })
            .map(|(l, a)| (a.clone(), l))
            .collect();
        to_weaken.sort_by(|(a1, l1), (a2, l2)| a1.cmp(a2).then(l1.var().cmp(&l2.var())));
        for (_, lit) in to_weaken {
            reason = rules::weaken(&reason, lit).expect("chosen from the constraint");
            reason_ref = self
                .tracer
                .record(RuleApp::Weaken(lit), vec![reason_ref], &reason);
        }

        // elimination sits between weakening and division; it is kept only
        // if the divided reason would still keep the resolvent conflicting
        let (mut reason, mut reason_ref) =
            self.try_eliminate(reason, reason_ref, |solver, candidate| {
                let Some(coeff) = candidate.coeff_of(pivot_lit) else {
                    return false;
                };
                match rules::divide(candidate, coeff) {
                    Ok(divided) => solver.slack_below(&divided, pos) <= BigInt::zero(),
                    Err(_) => false,
                }
            });

        let divisor = reason
            .coeff_of(pivot_lit)
            .cloned()
            .expect("pivot survives weakening and elimination");
        if divisor > BigInt::from(1) {
            reason = rules::divide(&reason, &divisor).expect("divisor is positive");
            reason_ref = self
                .tracer
                .record(RuleApp::Divide(divisor), vec![reason_ref], &reason);
        }
        (reason, reason_ref)
    }

    /// Detects irrelevant literals of `c` with the configured incomplete
    /// detector and removes them with the configured strategy, provided
    /// `accept` still holds for the result; otherwise the constraint is
    /// kept as is (the literals count as detected but not removed).
    fn try_eliminate<F>(&mut self, c: PbConstraint, c_ref: u64, accept: F) -> (PbConstraint, u64)
    where
        F: Fn(&Self, &PbConstraint) -> bool,
    {
        let Some(strategy) = self.options.analysis.elimination.strategy() else {
            return (c, c_ref);
        };
        let report = detect_all(&c, &self.options.analysis.detector, false)
            .expect("the incomplete detector is total");
        let irrelevant = report.proven_irrelevant();
        if irrelevant.is_empty() {
            return (c, c_ref);
        }
        self.stats.irrelevant_detected += irrelevant.len() as u64;
        let removed = strategy
            .apply(&c, &irrelevant)
            .expect("detected literals occur in the constraint");
        if removed == c || !accept(self, &removed) {
            return (c, c_ref);
        }
        self.stats.irrelevant_removed += irrelevant.len() as u64;
        let id = self.tracer.record(
            RuleApp::Eliminate {
                strategy,
                literals: irrelevant,
            },
            vec![c_ref],
            &removed,
        );
        (removed, id)
    }
}
