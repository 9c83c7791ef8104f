//! Partial truth assignments.

use crate::literal::{Lit, Var};

/// A partial assignment of truth values to variables, stored densely by
/// variable index. Variables beyond the stored range are unassigned.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<bool>>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    /// Builds an assignment from `(variable, value)` pairs.
    pub fn from_pairs<I: IntoIterator<Item = (Var, bool)>>(pairs: I) -> Assignment {
        let mut a = Assignment::new();
        for (var, value) in pairs {
            a.assign(var, value);
        }
        a
    }

    pub fn assign(&mut self, var: Var, value: bool) {
        let idx = var.index() as usize;
        if idx >= self.values.len() {
            self.values.resize(idx + 1, None);
        }
        self.values[idx] = Some(value);
    }

    /// Makes the given literal true.
    pub fn assign_lit(&mut self, lit: Lit) {
        self.assign(lit.var(), lit.is_positive());
    }

    pub fn unassign(&mut self, var: Var) {
        if let Some(slot) = self.values.get_mut(var.index() as usize) {
            *slot = None;
        }
    }

    pub fn value(&self, var: Var) -> Option<bool> {
        self.values.get(var.index() as usize).copied().flatten()
    }

    /// Truth value of a literal under this assignment, if its variable is
    /// assigned.
    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.value(lit.var()).map(|v| v == lit.is_positive())
    }

    pub fn is_true(&self, lit: Lit) -> bool {
        self.lit_value(lit) == Some(true)
    }

    pub fn is_false(&self, lit: Lit) -> bool {
        self.lit_value(lit) == Some(false)
    }

    /// Variables currently assigned, in increasing index order.
    pub fn assigned_vars(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|value| (Var::new(i as u32), value)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assign_and_query() {
        let mut a = Assignment::new();
        let x = Var::new(3);
        assert_eq!(a.value(x), None);
        a.assign(x, true);
        assert!(a.is_true(x.positive()));
        assert!(a.is_false(x.negative()));
        a.unassign(x);
        assert_eq!(a.lit_value(x.positive()), None);
    }

    #[test]
    fn unassigned_out_of_range_is_none() {
        let a = Assignment::new();
        assert_eq!(a.value(Var::new(100)), None);
    }
}
