//! Detection and removal of irrelevant literals.
//!
//! A literal is irrelevant to a constraint when conditioning it to true and
//! to false yields equivalent constraints; flipping it in a model can never
//! produce a counter-model. For a saturated constraint `a*l + rest >= d`
//! this reduces to a subset-sum question: `l` is irrelevant iff no
//! sub-multiset of the other coefficients sums to a value in the window
//! `[d - a, d - 1]`.
//!
//! Two detectors are provided. The exact one answers the subset-sum
//! question with a bitset dynamic program in `O(n * d)` and is intended as
//! an oracle on small degrees. The incomplete one solves subset-sum modulo
//! one or more fixed integers: if some modulus rules out every target in
//! the window, the literal is proven irrelevant; otherwise the answer is
//! "not proven", never a wrong "relevant is irrelevant".

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::constraint::PbConstraint;
use crate::literal::Lit;
use crate::rules::{saturate, weaken, RuleError};

/// Default modulus for the incomplete detector.
pub const DEFAULT_MODULUS: u64 = 4547;
/// Default bound on the number of literals of a constraint to analyze.
pub const DEFAULT_MAX_LITERALS: usize = 500;
/// Default budget, in table cells, for the exact oracle.
pub const DEFAULT_ORACLE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelevanceError {
    #[error("literal {0} does not occur in the constraint")]
    LiteralNotPresent(Lit),
    #[error("exact oracle over capacity: {cells} table cells exceed the budget of {budget}")]
    OracleCapacityExceeded { cells: BigInt, budget: u64 },
    #[error("detector moduli must be >= 2, got {0}")]
    InvalidModulus(u64),
    #[error("the literal bound must be >= 1")]
    InvalidLiteralBound,
}

/// Outcome of a relevance check for one literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelevanceVerdict {
    /// The literal is certainly irrelevant (both detectors may say this).
    ProvenIrrelevant,
    /// The literal is certainly relevant (exact detector only).
    Relevant,
    /// Nothing was proven (incomplete detector only).
    NotProven,
}

/// Configuration of the incomplete detector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectorConfig {
    moduli: Vec<u64>,
    max_literals: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            moduli: vec![DEFAULT_MODULUS],
            max_literals: DEFAULT_MAX_LITERALS,
        }
    }
}

impl DetectorConfig {
    /// Builds a configuration; every modulus must be at least 2 and the
    /// literal bound at least 1.
    pub fn new(moduli: Vec<u64>, max_literals: usize) -> Result<DetectorConfig, RelevanceError> {
        if moduli.is_empty() {
            return Err(RelevanceError::InvalidModulus(0));
        }
        if let Some(&p) = moduli.iter().find(|&&p| p < 2) {
            return Err(RelevanceError::InvalidModulus(p));
        }
        if max_literals == 0 {
            return Err(RelevanceError::InvalidLiteralBound);
        }
        Ok(DetectorConfig {
            moduli,
            max_literals,
        })
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn max_literals(&self) -> usize {
        self.max_literals
    }
}

/// Per-literal verdicts for one constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevanceReport {
    /// Verdict for every literal of the (saturated) constraint; empty when
    /// the constraint was skipped.
    pub verdicts: BTreeMap<Lit, RelevanceVerdict>,
    /// Number of detector invocations; one per distinct coefficient value
    /// actually checked.
    pub checks_performed: usize,
    /// True when the constraint had more literals than the configured
    /// bound and was not analyzed.
    pub skipped: bool,
}

impl RelevanceReport {
    fn skipped() -> RelevanceReport {
        RelevanceReport {
            verdicts: BTreeMap::new(),
            checks_performed: 0,
            skipped: true,
        }
    }

    /// Literals proven irrelevant, in canonical order.
    pub fn proven_irrelevant(&self) -> Vec<Lit> {
        self.verdicts
            .iter()
            .filter(|(_, &v)| v == RelevanceVerdict::ProvenIrrelevant)
            .map(|(&l, _)| l)
            .collect()
    }
}

/// The window of forbidden subset sums for `lit`: the closed interval
/// `[degree - coeff, degree - 1]`. `lit` is irrelevant iff no sub-multiset
/// of the other coefficients sums into it. The constraint must be
/// saturated for the lower bound to be non-negative.
///
/// Relevance is insensitive to the polarity of the queried literal, so the
/// lookup is by variable.
pub fn irrelevance_window(
    c: &PbConstraint,
    lit: Lit,
) -> Result<(BigInt, BigInt), RelevanceError> {
    let (_, coeff) = c
        .term_of(lit.var())
        .ok_or(RelevanceError::LiteralNotPresent(lit))?;
    Ok((c.degree() - coeff, c.degree() - 1))
}

/// Reachable subset sums strictly below a cap, as a bitset.
struct SumBits {
    words: Vec<u64>,
    len: usize,
}

impl SumBits {
    fn new(len: usize) -> SumBits {
        let mut bits = SumBits {
            words: vec![0; len.div_ceil(64)],
            len,
        };
        if len > 0 {
            bits.words[0] = 1; // the empty sum
        }
        bits
    }

    fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Adds a coefficient: every reachable sum `s` also makes `s + k`
    /// reachable. Sums at or above the cap are discarded; they can only
    /// grow and never fall back into range.
    fn shift_or(&mut self, k: usize) {
        if k >= self.len {
            return;
        }
        let word_shift = k / 64;
        let bit_shift = k % 64;
        for i in (word_shift..self.words.len()).rev() {
            let mut w = self.words[i - word_shift] << bit_shift;
            if bit_shift > 0 && i > word_shift {
                w |= self.words[i - word_shift - 1] >> (64 - bit_shift);
            }
            self.words[i] |= w;
        }
        self.trim();
    }

    fn trim(&mut self) {
        let spare = self.words.len() * 64 - self.len;
        if spare > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= u64::MAX >> spare;
            }
        }
    }

    fn any_in(&self, lo: usize, hi: usize) -> bool {
        (lo..=hi.min(self.len.saturating_sub(1))).any(|i| self.get(i))
    }
}

/// Exact irrelevance test by dynamic programming over the other
/// coefficients, capped at the degree. Refuses constraints whose table
/// would exceed `budget` cells.
pub fn exact_is_irrelevant_budgeted(
    c: &PbConstraint,
    lit: Lit,
    budget: u64,
) -> Result<bool, RelevanceError> {
    let c = saturate(c);
    let (lit_in_c, coeff) = c
        .term_of(lit.var())
        .map(|(l, a)| (l, a.clone()))
        .ok_or(RelevanceError::LiteralNotPresent(lit))?;
    let others: Vec<&BigInt> = c
        .terms()
        .filter(|(l, _)| *l != lit_in_c)
        .map(|(_, a)| a)
        .collect();
    let cells = BigInt::from(others.len().max(1)) * c.degree();
    let degree = match c.degree().to_u64() {
        Some(d) if cells <= BigInt::from(budget) => d as usize,
        _ => return Err(RelevanceError::OracleCapacityExceeded { cells, budget }),
    };

    // Reachable sums of the others in [0, degree); anything larger cannot
    // land in the window.
    let mut reachable = SumBits::new(degree);
    for other in others {
        if let Some(k) = other.to_u64() {
            reachable.shift_or(k as usize);
        }
        // coefficients at or above the degree never fit below the cap
    }

    let lo = (c.degree() - &coeff)
        .to_u64()
        .expect("window bounds fit once the degree does") as usize;
    Ok(!reachable.any_in(lo, degree - 1))
}

/// [`exact_is_irrelevant_budgeted`] with the default budget.
pub fn exact_is_irrelevant(c: &PbConstraint, lit: Lit) -> Result<bool, RelevanceError> {
    exact_is_irrelevant_budgeted(c, lit, DEFAULT_ORACLE_BUDGET)
}

/// The set of residues modulo `p` reachable as subset sums of a multiset
/// of coefficients. Always contains 0 (the empty sum).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueSet {
    words: Vec<u64>,
    p: u64,
}

impl ResidueSet {
    fn empty_sum(p: u64) -> ResidueSet {
        let mut set = ResidueSet {
            words: vec![0; (p as usize).div_ceil(64)],
            p,
        };
        set.insert(0);
        set
    }

    fn insert(&mut self, r: u64) {
        self.words[(r / 64) as usize] |= 1 << (r % 64);
    }

    pub fn contains(&self, r: u64) -> bool {
        let r = r % self.p;
        self.words[(r / 64) as usize] >> (r % 64) & 1 == 1
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    fn is_full(&self) -> bool {
        self.count() == self.p
    }

    /// Folds in one coefficient of residue `r`: every reachable residue
    /// `s` also makes `(s + r) mod p` reachable. The rotation by `r`
    /// within the `p`-bit window is a left shift by `r` combined with a
    /// right shift by `p - r`.
    fn rotate_or(&mut self, r: u64) {
        if r == 0 {
            return;
        }
        let len = self.p as usize;
        let left = shifted_left(&self.words, len, r as usize);
        let right = shifted_right(&self.words, len - r as usize);
        for (i, w) in self.words.iter_mut().enumerate() {
            *w |= left[i] | right[i];
        }
    }

    /// Residues in increasing order; mainly for tests and display.
    pub fn to_sorted_vec(&self) -> Vec<u64> {
        (0..self.p).filter(|&r| self.contains(r)).collect()
    }
}

/// `words` shifted left by `k` bits, truncated to `len` bits.
fn shifted_left(words: &[u64], len: usize, k: usize) -> Vec<u64> {
    let mut out = vec![0u64; words.len()];
    if k >= len {
        return out;
    }
    let word_shift = k / 64;
    let bit_shift = k % 64;
    for i in word_shift..words.len() {
        let mut w = words[i - word_shift] << bit_shift;
        if bit_shift > 0 && i > word_shift {
            w |= words[i - word_shift - 1] >> (64 - bit_shift);
        }
        out[i] = w;
    }
    let spare = words.len() * 64 - len;
    if spare > 0 {
        if let Some(last) = out.last_mut() {
            *last &= u64::MAX >> spare;
        }
    }
    out
}

/// `words` shifted right by `k` bits.
fn shifted_right(words: &[u64], k: usize) -> Vec<u64> {
    let mut out = vec![0u64; words.len()];
    let word_shift = k / 64;
    let bit_shift = k % 64;
    for i in 0..words.len().saturating_sub(word_shift) {
        let mut w = words[i + word_shift] >> bit_shift;
        if bit_shift > 0 && i + word_shift + 1 < words.len() {
            w |= words[i + word_shift + 1] << (64 - bit_shift);
        }
        out[i] = w;
    }
    out
}

/// Subset sums of `coefficients` modulo `p`, computed entirely over
/// residues.
pub fn modular_reachable<'a, I>(coefficients: I, p: u64) -> ResidueSet
where
    I: IntoIterator<Item = &'a BigInt>,
{
    debug_assert!(p >= 2);
    let big_p = BigInt::from(p);
    let mut set = ResidueSet::empty_sum(p);
    for coeff in coefficients {
        if set.is_full() {
            break;
        }
        let r = coeff.mod_floor(&big_p).to_u64().expect("residue fits u64");
        set.rotate_or(r);
    }
    set
}

/// Incomplete irrelevance test: a window target is ruled out when some
/// modulus cannot reach its residue; the literal is proven irrelevant when
/// every target is ruled out. A modulus no larger than the window length
/// covers all residues and is skipped. Sound by construction: an actual
/// subset sum reduces to a reachable residue modulo every `p`.
pub fn incomplete_is_irrelevant(
    c: &PbConstraint,
    lit: Lit,
    cfg: &DetectorConfig,
) -> RelevanceVerdict {
    let c = saturate(c);
    let Some((lit_in_c, coeff)) = c.term_of(lit.var()).map(|(l, a)| (l, a.clone())) else {
        return RelevanceVerdict::NotProven;
    };
    let lo = c.degree() - &coeff;
    debug_assert!(lo >= BigInt::zero());

    let usable: Vec<u64> = cfg
        .moduli
        .iter()
        .copied()
        .filter(|&p| BigInt::from(p) > coeff)
        .collect();
    if usable.is_empty() {
        return RelevanceVerdict::NotProven;
    }
    let window_len = coeff.to_u64().expect("window shorter than some modulus") as usize;

    let others = c.terms().filter(|(l, _)| *l != lit_in_c).map(|(_, a)| a);
    let others: Vec<&BigInt> = others.collect();

    let mut ruled_out = vec![false; window_len];
    let mut remaining = window_len;
    for p in usable {
        let reachable = modular_reachable(others.iter().copied(), p);
        let start = lo.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        for (i, out) in ruled_out.iter_mut().enumerate() {
            if *out {
                continue;
            }
            let residue = (start + i as u64) % p;
            if !reachable.contains(residue) {
                *out = true;
                remaining -= 1;
            }
        }
        if remaining == 0 {
            return RelevanceVerdict::ProvenIrrelevant;
        }
    }
    RelevanceVerdict::NotProven
}

/// Runs one relevance check per distinct coefficient value, smallest
/// first, sharing verdicts among literals with equal coefficients. The
/// first value not proven irrelevant stops the scan and its verdict
/// extends to every larger coefficient: an irrelevant literal's
/// coefficient bounds the coefficients of all other irrelevant literals
/// from above.
///
/// Constraints with more literals than `cfg.max_literals` are skipped. The
/// exact oracle is used instead of the modular detector when `oracle` is
/// set.
pub fn detect_all(
    c: &PbConstraint,
    cfg: &DetectorConfig,
    oracle: bool,
) -> Result<RelevanceReport, RelevanceError> {
    if c.len() > cfg.max_literals {
        return Ok(RelevanceReport::skipped());
    }
    let sc = saturate(c);
    let mut values: Vec<BigInt> = sc
        .terms()
        .map(|(_, a)| a.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    values.sort();

    let mut verdicts = BTreeMap::new();
    let mut checks = 0usize;
    let mut stopping_verdict: Option<RelevanceVerdict> = None;

    for value in values {
        let group: Vec<Lit> = sc
            .terms()
            .filter(|(_, a)| **a == value)
            .map(|(l, _)| l)
            .collect();
        let verdict = match stopping_verdict {
            Some(v) => v,
            None => {
                checks += 1;
                let v = if oracle {
                    if exact_is_irrelevant(&sc, group[0])? {
                        RelevanceVerdict::ProvenIrrelevant
                    } else {
                        RelevanceVerdict::Relevant
                    }
                } else {
                    incomplete_is_irrelevant(&sc, group[0], cfg)
                };
                if v != RelevanceVerdict::ProvenIrrelevant {
                    stopping_verdict = Some(v);
                }
                v
            }
        };
        for lit in group {
            verdicts.insert(lit, verdict);
        }
    }

    Ok(RelevanceReport {
        verdicts,
        checks_performed: checks,
        skipped: false,
    })
}

/// Removes certified-irrelevant literals by weakening each of them away
/// and saturating once at the end; equivalent to the input.
pub fn remove_by_weakening(
    c: &PbConstraint,
    irrelevant: &[Lit],
) -> Result<PbConstraint, RuleError> {
    let mut out = c.clone();
    for &lit in irrelevant {
        out = weaken(&out, lit)?;
    }
    Ok(saturate(&out))
}

/// Removes certified-irrelevant literals by dropping their terms with the
/// degree unchanged; equivalent over Booleans and stronger over the reals.
pub fn remove_simple(c: &PbConstraint, irrelevant: &[Lit]) -> Result<PbConstraint, RuleError> {
    for &lit in irrelevant {
        if c.coeff_of(lit).is_none() {
            return Err(RuleError::LiteralNotPresent(lit));
        }
    }
    Ok(PbConstraint::from_terms(
        c.terms()
            .filter(|(l, _)| !irrelevant.contains(l))
            .map(|(l, a)| (a.clone(), l)),
        c.degree().clone(),
    ))
}

/// Computes both removal variants and keeps the one with the smaller
/// slack; ties go to simple removal, which is stronger over the reals.
pub fn remove_slack_based(
    c: &PbConstraint,
    irrelevant: &[Lit],
) -> Result<PbConstraint, RuleError> {
    let weakened = remove_by_weakening(c, irrelevant)?;
    let dropped = remove_simple(c, irrelevant)?;
    if weakened.slack() < dropped.slack() {
        Ok(weakened)
    } else {
        Ok(dropped)
    }
}

/// How certified-irrelevant literals are removed from a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalStrategy {
    /// Weaken every irrelevant literal away, then saturate.
    Weaken,
    /// Drop the terms, degree unchanged.
    Simple,
    /// Whichever of the two yields the smaller slack.
    SlackBased,
}

impl RemovalStrategy {
    pub fn apply(self, c: &PbConstraint, irrelevant: &[Lit]) -> Result<PbConstraint, RuleError> {
        match self {
            RemovalStrategy::Weaken => remove_by_weakening(c, irrelevant),
            RemovalStrategy::Simple => remove_simple(c, irrelevant),
            RemovalStrategy::SlackBased => remove_slack_based(c, irrelevant),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RemovalStrategy::Weaken => "weaken",
            RemovalStrategy::Simple => "simple",
            RemovalStrategy::SlackBased => "slack",
        }
    }

    pub fn from_name(name: &str) -> Option<RemovalStrategy> {
        match name {
            "weaken" => Some(RemovalStrategy::Weaken),
            "simple" => Some(RemovalStrategy::Simple),
            "slack" => Some(RemovalStrategy::SlackBased),
            _ => None,
        }
    }
}
