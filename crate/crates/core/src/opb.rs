//! OPB instance files, derivation-trace files and statistics output.
//!
//! The reader targets the linear OPB dialect: an optional header comment
//! `* #variable= N #constraint= M`, comment lines starting with `*`, and
//! constraints of the form `[+|-]<int> <lit> ... <rel> <int> ;` where a
//! literal is `x<digits>` or `~x<digits>` and the relation is `>=`, `<=`
//! or `=`. Coefficients and degrees are arbitrary-precision integers.
//! Non-linear product terms are rejected.
//!
//! Traces are line-delimited JSON: one self-contained record per rule
//! application, with the resulting constraint rendered in OPB syntax.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::constraint::{PbConstraint, RawConstraint, Relation};
use crate::literal::{Lit, Var};
use crate::relevance::RemovalStrategy;
use crate::solver::trace::{DerivationTrace, RuleApp, TraceStep};

/// A parsed OPB file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpbDocument {
    pub declared_vars: Option<u64>,
    pub declared_constraints: Option<u64>,
    pub constraints: Vec<RawConstraint>,
    pub comments: Vec<String>,
    /// Non-fatal oddities, e.g. declared counts not matching the content.
    pub warnings: Vec<String>,
}

impl OpbDocument {
    /// Wraps normalized constraints for writing. Tautologies have no
    /// normalized rendering and are replaced by a comment marker.
    pub fn from_constraints<'a, I>(constraints: I) -> OpbDocument
    where
        I: IntoIterator<Item = &'a PbConstraint>,
    {
        let mut doc = OpbDocument::default();
        let mut max_var = 0u64;
        for c in constraints {
            if c.is_tautology() {
                doc.comments.push("tautology omitted".to_string());
                continue;
            }
            max_var = max_var.max(c.max_var().map_or(0, |v| u64::from(v.index())));
            doc.constraints.push(RawConstraint {
                terms: c.terms().map(|(l, a)| (a.clone(), l)).collect(),
                relation: Relation::Ge,
                rhs: c.degree().clone(),
            });
        }
        doc.declared_vars = Some(max_var);
        doc.declared_constraints = Some(doc.constraints.len() as u64);
        doc
    }

    /// Normalizes every raw constraint, in order.
    pub fn normalized(&self) -> Vec<PbConstraint> {
        self.constraints
            .iter()
            .flat_map(RawConstraint::normalize)
            .collect()
    }

    pub fn max_var(&self) -> u64 {
        self.constraints
            .iter()
            .flat_map(|c| c.terms.iter())
            .map(|(_, l)| u64::from(l.var().index()))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected a coefficient")]
    ExpectedCoefficient,
    #[error("expected a literal after the coefficient")]
    ExpectedLiteral,
    #[error("non-linear product term; only linear constraints are supported")]
    NonLinearTerm,
    #[error("unknown relation {0:?}")]
    UnknownRelation(String),
    #[error("expected the right-hand side integer")]
    ExpectedDegree,
    #[error("expected ';' to terminate the constraint")]
    MissingSemicolon,
    #[error("variable indices start at 1")]
    NonPositiveVariable,
    #[error("variable index too large")]
    VariableTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Int(BigInt),
    Literal(Lit),
    Rel(Relation),
    Semicolon,
}

struct Tokenizer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
    start_of_line: bool,
    comments: Vec<String>,
}

impl<'a> Tokenizer<'a> {
    fn new(src: &'a str) -> Tokenizer<'a> {
        Tokenizer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
            start_of_line: true,
            comments: Vec::new(),
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            kind,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let byte = *self.src.get(self.pos)?;
        self.pos += 1;
        if byte == b'\n' {
            self.line += 1;
            self.column = 1;
            self.start_of_line = true;
        } else {
            self.column += 1;
            if !byte.is_ascii_whitespace() {
                self.start_of_line = false;
            }
        }
        Some(byte)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_whitespace_and_comments(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'*') if self.start_of_line => {
                    let start = self.pos + 1;
                    while self.peek().is_some_and(|b| b != b'\n') {
                        self.bump();
                    }
                    let text = String::from_utf8_lossy(&self.src[start..self.pos])
                        .trim()
                        .to_string();
                    self.comments.push(text);
                }
                _ => return,
            }
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn variable(&mut self) -> Result<Var, ParseError> {
        // caller consumed the 'x'
        let digits = self.digits();
        if digits.is_empty() {
            return Err(self.error(ParseErrorKind::ExpectedLiteral));
        }
        let index: u64 = digits
            .parse()
            .map_err(|_| self.error(ParseErrorKind::VariableTooLarge))?;
        if index == 0 {
            return Err(self.error(ParseErrorKind::NonPositiveVariable));
        }
        let index =
            u32::try_from(index).map_err(|_| self.error(ParseErrorKind::VariableTooLarge))?;
        Ok(Var::new(index))
    }

    fn next(&mut self) -> Result<Option<Token>, ParseError> {
        self.skip_whitespace_and_comments();
        let Some(byte) = self.peek() else {
            return Ok(None);
        };
        match byte {
            b';' => {
                self.bump();
                Ok(Some(Token::Semicolon))
            }
            b'+' | b'-' | b'0'..=b'9' => {
                let negative = byte == b'-';
                if byte == b'+' || byte == b'-' {
                    self.bump();
                }
                let digits = self.digits();
                if digits.is_empty() {
                    return Err(self.error(ParseErrorKind::ExpectedCoefficient));
                }
                let mut value: BigInt = digits.parse().expect("digits parse as an integer");
                if negative {
                    value = -value;
                }
                Ok(Some(Token::Int(value)))
            }
            b'x' => {
                self.bump();
                Ok(Some(Token::Literal(self.variable()?.positive())))
            }
            b'~' => {
                self.bump();
                if self.peek() != Some(b'x') {
                    return Err(self.error(ParseErrorKind::ExpectedLiteral));
                }
                self.bump();
                Ok(Some(Token::Literal(self.variable()?.negative())))
            }
            b'>' | b'<' | b'=' => {
                let start = self.pos;
                while self.peek().is_some_and(|b| matches!(b, b'>' | b'<' | b'=')) {
                    self.bump();
                }
                let rel = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                match rel.as_str() {
                    ">=" => Ok(Some(Token::Rel(Relation::Ge))),
                    "<=" => Ok(Some(Token::Rel(Relation::Le))),
                    "=" => Ok(Some(Token::Rel(Relation::Eq))),
                    _ => Err(self.error(ParseErrorKind::UnknownRelation(rel))),
                }
            }
            other => Err(self.error(ParseErrorKind::UnexpectedChar(other as char))),
        }
    }
}

/// Parses an OPB document.
pub fn parse_opb(text: &str) -> Result<OpbDocument, ParseError> {
    let mut tokens = Tokenizer::new(text);
    let mut constraints = Vec::new();

    let mut pending = tokens.next()?;
    while let Some(token) = pending.take() {
        let mut terms: Vec<(BigInt, Lit)> = Vec::new();
        let mut current = token;
        // terms: a coefficient followed by exactly one literal
        loop {
            match current {
                Token::Int(coeff) => match tokens.next()? {
                    Some(Token::Literal(lit)) => {
                        terms.push((coeff, lit));
                        match tokens.next()? {
                            Some(Token::Literal(_)) => {
                                return Err(tokens.error(ParseErrorKind::NonLinearTerm));
                            }
                            Some(next) => current = next,
                            None => return Err(tokens.error(ParseErrorKind::MissingSemicolon)),
                        }
                    }
                    _ => return Err(tokens.error(ParseErrorKind::ExpectedLiteral)),
                },
                Token::Literal(_) => {
                    return Err(tokens.error(ParseErrorKind::ExpectedCoefficient));
                }
                Token::Rel(_) | Token::Semicolon => break,
            }
        }
        let Token::Rel(relation) = current else {
            return Err(tokens.error(ParseErrorKind::MissingSemicolon));
        };
        let Some(Token::Int(rhs)) = tokens.next()? else {
            return Err(tokens.error(ParseErrorKind::ExpectedDegree));
        };
        if tokens.next()? != Some(Token::Semicolon) {
            return Err(tokens.error(ParseErrorKind::MissingSemicolon));
        }
        constraints.push(RawConstraint {
            terms,
            relation,
            rhs,
        });
        pending = tokens.next()?;
    }

    let mut doc = OpbDocument {
        constraints,
        comments: tokens.comments,
        ..Default::default()
    };
    if let Some(header) = doc.comments.first() {
        doc.declared_vars = header_count(header, "#variable=");
        doc.declared_constraints = header_count(header, "#constraint=");
    }
    if let Some(declared) = doc.declared_constraints {
        if declared != doc.constraints.len() as u64 {
            doc.warnings.push(format!(
                "header declares {declared} constraints but {} were parsed",
                doc.constraints.len()
            ));
        }
    }
    if let Some(declared) = doc.declared_vars {
        if declared < doc.max_var() {
            doc.warnings.push(format!(
                "header declares {declared} variables but x{} occurs",
                doc.max_var()
            ));
        }
    }
    Ok(doc)
}

fn header_count(comment: &str, key: &str) -> Option<u64> {
    let rest = &comment[comment.find(key)? + key.len()..];
    rest.split_whitespace().next()?.parse().ok()
}

/// Parses a single constraint, as accepted on the command line; the
/// terminating `;` is optional there.
pub fn parse_constraint(text: &str) -> Result<RawConstraint, ParseError> {
    let trimmed = text.trim();
    let owned;
    let with_semi = if trimmed.ends_with(';') {
        trimmed
    } else {
        owned = format!("{trimmed} ;");
        &owned
    };
    let doc = parse_opb(with_semi)?;
    match <[RawConstraint; 1]>::try_from(doc.constraints) {
        Ok([constraint]) => Ok(constraint),
        Err(_) => Err(ParseError {
            line: 1,
            column: 1,
            kind: ParseErrorKind::MissingSemicolon,
        }),
    }
}

/// Serializes a document; `parse_opb(write_opb(doc))` is semantically
/// identical to `doc`.
pub fn write_opb(doc: &OpbDocument) -> String {
    let vars = doc.declared_vars.unwrap_or_else(|| doc.max_var());
    let count = doc
        .declared_constraints
        .unwrap_or(doc.constraints.len() as u64);
    let mut out = format!("* #variable= {vars} #constraint= {count}\n");
    for comment in &doc.comments {
        if comment.contains("#variable=") {
            continue;
        }
        out.push_str("* ");
        out.push_str(comment);
        out.push('\n');
    }
    for constraint in &doc.constraints {
        out.push_str(&constraint.to_string());
        out.push_str(" ;\n");
    }
    out
}

/// Renders one normalized constraint in OPB syntax, `;`-terminated.
pub fn opb_line(c: &PbConstraint) -> String {
    format!("{c} ;")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// One line of a trace file.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct TraceRecord {
    step: u64,
    rule: String,
    operands: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pivot: Option<u32>,
    /// Weakened literal, signed: `-4` is `~x4`.
    #[serde(skip_serializing_if = "Option::is_none")]
    literal: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    divisor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplier: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    literals: Option<Vec<i64>>,
    constraint: String,
}

impl TraceRecord {
    fn from_step(step: &TraceStep) -> TraceRecord {
        let mut record = TraceRecord {
            step: step.id,
            rule: step.rule.name().to_string(),
            operands: step.operands.clone(),
            pivot: None,
            literal: None,
            divisor: None,
            multiplier: None,
            strategy: None,
            literals: None,
            constraint: opb_line(&step.result),
        };
        match &step.rule {
            RuleApp::Saturate | RuleApp::Add => {}
            RuleApp::Weaken(lit) => record.literal = Some(lit.to_signed()),
            RuleApp::Divide(rho) => record.divisor = Some(rho.to_string()),
            RuleApp::Multiply(mu) => record.multiplier = Some(mu.to_string()),
            RuleApp::Cancel(var) => record.pivot = Some(var.index()),
            RuleApp::Eliminate { strategy, literals } => {
                record.strategy = Some(strategy.name().to_string());
                record.literals = Some(literals.iter().map(|l| l.to_signed()).collect());
            }
        }
        record
    }

    fn into_step(self, line: usize) -> Result<TraceStep, TraceError> {
        let malformed = |message: String| TraceError::Malformed { line, message };
        let lit_of = |code: i64| {
            Lit::from_signed(code).ok_or_else(|| malformed(format!("bad literal code {code}")))
        };
        let rule = match self.rule.as_str() {
            "saturate" => RuleApp::Saturate,
            "add" => RuleApp::Add,
            "weaken" => RuleApp::Weaken(lit_of(
                self.literal
                    .ok_or_else(|| malformed("weaken without literal".into()))?,
            )?),
            "divide" => RuleApp::Divide(
                self.divisor
                    .as_deref()
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| malformed("divide without divisor".into()))?,
            ),
            "multiply" => RuleApp::Multiply(
                self.multiplier
                    .as_deref()
                    .and_then(|m| m.parse().ok())
                    .ok_or_else(|| malformed("multiply without multiplier".into()))?,
            ),
            "cancel" => {
                let pivot = self
                    .pivot
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| malformed("cancel without pivot".into()))?;
                RuleApp::Cancel(Var::new(pivot))
            }
            "eliminate" => {
                let strategy = self
                    .strategy
                    .as_deref()
                    .and_then(RemovalStrategy::from_name)
                    .ok_or_else(|| malformed("eliminate without strategy".into()))?;
                let literals = self
                    .literals
                    .ok_or_else(|| malformed("eliminate without literals".into()))?
                    .into_iter()
                    .map(lit_of)
                    .collect::<Result<Vec<_>, _>>()?;
                RuleApp::Eliminate { strategy, literals }
            }
            other => return Err(malformed(format!("unknown rule {other:?}"))),
        };
        let raw = parse_constraint(&self.constraint)
            .map_err(|e| malformed(format!("bad constraint: {e}")))?;
        let normalized = raw.normalize();
        let [result] = <[PbConstraint; 1]>::try_from(normalized)
            .map_err(|_| malformed("constraint is not a single normalized inequality".into()))?;
        Ok(TraceStep {
            id: self.step,
            rule,
            operands: self.operands,
            result,
        })
    }
}

/// Serializes a trace as one JSON record per line.
pub fn write_trace(trace: &DerivationTrace) -> String {
    let mut out = String::new();
    for step in &trace.steps {
        let record = TraceRecord::from_step(step);
        out.push_str(&serde_json::to_string(&record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Parses one line of a trace file.
pub fn parse_trace_line(line: &str, line_number: usize) -> Result<TraceStep, TraceError> {
    let record: TraceRecord = serde_json::from_str(line).map_err(|e| TraceError::Malformed {
        line: line_number,
        message: e.to_string(),
    })?;
    record.into_step(line_number)
}

/// Reads a whole trace file; `inputs` is the number of input constraints
/// the step ids start after.
pub fn read_trace(text: &str, inputs: u64) -> Result<DerivationTrace, TraceError> {
    let mut trace = DerivationTrace::new(inputs);
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        trace.steps.push(parse_trace_line(line, idx + 1)?);
    }
    Ok(trace)
}

/// Per-instance aggregate counters for the analysis pipeline.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceStats {
    pub instance: String,
    pub family: String,
    pub constraints_dumped: u64,
    pub constraints_with_irrelevant: u64,
    pub irrelevant_literals_total: u64,
    pub checks_performed: u64,
    pub skipped_constraints: u64,
    pub cancellations: u64,
}

pub const STATS_CSV_HEADER: &str = "instance,family,constraints_dumped,constraints_with_irrelevant,irrelevant_literals_total,checks_performed,skipped_constraints,cancellations";

/// Renders one CSV row per instance, header included.
pub fn write_stats_csv(reports: &[InstanceStats]) -> String {
    let mut out = String::from(STATS_CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            csv_field(&r.instance),
            csv_field(&r.family),
            r.constraints_dumped,
            r.constraints_with_irrelevant,
            r.irrelevant_literals_total,
            r.checks_performed,
            r.skipped_constraints,
            r.cancellations
        ));
    }
    out
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}
