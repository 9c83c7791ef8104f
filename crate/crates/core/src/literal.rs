//! Variables and literals.
//!
//! A variable is a positive integer identifier (dense indices are assigned
//! by the OPB parser). A literal is a variable together with a polarity;
//! internally both are packed into a single `u32` so that negation is a
//! single bit flip.

use std::fmt;
use std::ops::Not;

/// A propositional variable, identified by a positive integer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u32);

impl Var {
    /// Creates a variable from its identifier.
    ///
    /// Panics if `id` is zero; identifiers start at 1.
    pub fn new(id: u32) -> Var {
        assert!(id >= 1, "variable identifiers start at 1");
        Var(id)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// The positive literal of this variable.
    pub fn positive(self) -> Lit {
        Lit::new(self, true)
    }

    /// The negative literal of this variable.
    pub fn negative(self) -> Lit {
        Lit::new(self, false)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A literal: a variable or its negation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Lit {
        Lit(var.0 << 1 | u32::from(!positive))
    }

    #[inline]
    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Encodes the literal as a signed integer: `x3` is `3`, `~x3` is `-3`.
    pub fn to_signed(self) -> i64 {
        let v = i64::from(self.0 >> 1);
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Inverse of [`Lit::to_signed`]; returns `None` for zero.
    pub fn from_signed(code: i64) -> Option<Lit> {
        let var = u32::try_from(code.unsigned_abs()).ok().filter(|&v| v >= 1)?;
        Some(Lit::new(Var(var), code > 0))
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "{}", self.var())
        } else {
            write!(f, "~{}", self.var())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_is_involution() {
        let l = Var::new(7).positive();
        assert_eq!(!!l, l);
        assert_ne!(!l, l);
        assert_eq!((!l).var(), l.var());
    }

    #[test]
    fn signed_codes_round_trip() {
        for code in [1i64, -1, 42, -42] {
            assert_eq!(Lit::from_signed(code).unwrap().to_signed(), code);
        }
        assert_eq!(Lit::from_signed(0), None);
    }

    #[test]
    fn display_uses_opb_names() {
        let v = Var::new(12);
        assert_eq!(v.positive().to_string(), "x12");
        assert_eq!(v.negative().to_string(), "~x12");
    }
}
