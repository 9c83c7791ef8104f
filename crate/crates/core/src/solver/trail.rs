//! The assignment trail: values, decision levels and reasons.

use crate::assignment::Assignment;
use crate::literal::{Lit, Var};

/// Index of a constraint in the solver database.
pub(crate) type ConstraintId = usize;

#[derive(Debug)]
pub(crate) struct Trail {
    assignment: Assignment,
    level_of: Vec<u32>,
    reason_of: Vec<Option<ConstraintId>>,
    position_of: Vec<usize>,
    order: Vec<Lit>,
    level_starts: Vec<usize>,
}

impl Trail {
    pub fn new(num_vars: usize) -> Trail {
        Trail {
            assignment: Assignment::new(),
            level_of: vec![0; num_vars + 1],
            reason_of: vec![None; num_vars + 1],
            position_of: vec![0; num_vars + 1],
            order: Vec::new(),
            level_starts: Vec::new(),
        }
    }

    pub fn assignment(&self) -> &Assignment {
        &self.assignment
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.assignment.value(var)
    }

    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.assignment.lit_value(lit)
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn lit_at(&self, pos: usize) -> Lit {
        self.order[pos]
    }

    pub fn current_level(&self) -> u32 {
        self.level_starts.len() as u32
    }

    pub fn level(&self, var: Var) -> u32 {
        self.level_of[var.index() as usize]
    }

    pub fn reason(&self, var: Var) -> Option<ConstraintId> {
        self.reason_of[var.index() as usize]
    }

    /// True iff `lit` is false under the prefix `trail[0..pos]`.
    pub fn falsified_below(&self, lit: Lit, pos: usize) -> bool {
        self.assignment.is_false(lit) && self.position_of[lit.var().index() as usize] < pos
    }

    pub fn open_level(&mut self) {
        self.level_starts.push(self.order.len());
    }

    /// Makes `lit` true at the current level. The caller keeps the slack
    /// counters in sync.
    pub fn push(&mut self, lit: Lit, reason: Option<ConstraintId>) {
        debug_assert!(self.lit_value(lit).is_none());
        let idx = lit.var().index() as usize;
        self.level_of[idx] = self.current_level();
        self.reason_of[idx] = reason;
        self.position_of[idx] = self.order.len();
        self.assignment.assign_lit(lit);
        self.order.push(lit);
    }

    /// Pops every literal above `level` and returns them, most recent
    /// first, so the caller can restore slack counters.
    pub fn pop_to_level(&mut self, level: u32) -> Vec<Lit> {
        debug_assert!(level <= self.current_level());
        let keep = if (level as usize) < self.level_starts.len() {
            self.level_starts[level as usize]
        } else {
            self.order.len()
        };
        let popped: Vec<Lit> = self.order.drain(keep..).rev().collect();
        for lit in &popped {
            self.assignment.unassign(lit.var());
        }
        self.level_starts.truncate(level as usize);
        popped
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::lit;

    #[test]
    fn levels_and_backjumps() {
        let mut trail = Trail::new(5);
        trail.push(lit("a"), Some(0));
        trail.open_level();
        trail.push(lit("~b"), None);
        trail.push(lit("c"), Some(1));
        trail.open_level();
        trail.push(lit("d"), None);

        assert_eq!(trail.current_level(), 2);
        assert_eq!(trail.level(lit("a").var()), 0);
        assert_eq!(trail.level(lit("c").var()), 1);
        assert_eq!(trail.reason(lit("b").var()), None);
        assert!(trail.falsified_below(lit("b"), trail.len()));
        assert!(!trail.falsified_below(lit("b"), 1));

        let popped = trail.pop_to_level(1);
        assert_eq!(popped, vec![lit("d")]);
        assert_eq!(trail.current_level(), 1);
        assert_eq!(trail.value(lit("d").var()), None);
        assert_eq!(trail.lit_value(lit("~b")), Some(true));
    }
}
