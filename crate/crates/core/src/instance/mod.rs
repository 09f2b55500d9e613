//! 3-SAT instances: types, DIMACS interchange, and a planted generator.

mod dimacs;
mod generator;

pub use dimacs::{parse_dimacs, write_dimacs};
pub use generator::{generate_planted, GeneratorConfig};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced while building or reading instances.
#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("clause {clause} is not a 3-SAT clause: {msg}")]
    NotThreeSat { clause: usize, msg: String },
    #[error("literal {literal} out of range (num_vars = {num_vars})")]
    IndexOutOfRange { literal: i64, num_vars: u32 },
    #[error("clause count {ratio} * {n_vars} rounds below 1")]
    InvalidRatio { ratio: f64, n_vars: u32 },
    #[error("clause type weights must contain a positive entry")]
    InvalidWeights,
    #[error("at least 3 variables are required to build 3-literal clauses, got {0}")]
    TooFewVariables(u32),
    #[error("assignment length {assignment} does not match num_vars {num_vars}")]
    LengthMismatch { assignment: usize, num_vars: u32 },
}

/// A single literal: a 1-based variable index plus its polarity.
///
/// `positive == true` means the literal is the plain variable (`q = +1`);
/// `false` means the negated variable (`q = -1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Self {
        Self { var, positive }
    }

    /// Polarity as a real number: +1 for a plain literal, -1 for a negated one.
    #[inline]
    pub fn q(self) -> f64 {
        if self.positive {
            1.0
        } else {
            -1.0
        }
    }

    /// Zero-based index into per-variable arrays.
    #[inline]
    pub fn index(self) -> usize {
        self.var as usize - 1
    }

    /// True iff this literal is satisfied under `bits`.
    #[inline]
    pub fn satisfied_by(self, bits: &[bool]) -> bool {
        bits[self.index()] == self.positive
    }

    /// Signed DIMACS encoding (`var` or `-var`).
    pub fn dimacs(self) -> i64 {
        if self.positive {
            i64::from(self.var)
        } else {
            -i64::from(self.var)
        }
    }
}

/// Exactly three literals over three distinct variables.
pub type Clause = [Literal; 3];

/// An immutable 3-SAT formula in conjunctive normal form.
///
/// Invariants enforced on construction: every clause has exactly three
/// literals over distinct variables, and every variable index lies in
/// `1..=num_vars`. Instances are immutable afterwards and safe to share
/// across concurrent solver runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf3Instance {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Cnf3Instance {
    /// Builds an instance, validating the 3-SAT clause structure.
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self, InstanceError> {
        for (idx, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var == 0 || lit.var > num_vars {
                    return Err(InstanceError::IndexOutOfRange {
                        literal: lit.dimacs(),
                        num_vars,
                    });
                }
            }
            let [a, b, c] = clause;
            if a.var == b.var || a.var == c.var || b.var == c.var {
                return Err(InstanceError::NotThreeSat {
                    clause: idx,
                    msg: "repeated variable".into(),
                });
            }
        }
        Ok(Self { num_vars, clauses })
    }

    #[inline]
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    #[inline]
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    #[inline]
    pub fn clause(&self, m: usize) -> &Clause {
        &self.clauses[m]
    }
}

/// A Boolean assignment, one bit per variable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// True iff every clause of `inst` has at least one satisfied literal.
pub fn check_assignment(inst: &Cnf3Instance, a: &Assignment) -> Result<bool, InstanceError> {
    if a.len() != inst.num_vars() as usize {
        return Err(InstanceError::LengthMismatch {
            assignment: a.len(),
            num_vars: inst.num_vars(),
        });
    }
    Ok(inst
        .clauses()
        .iter()
        .all(|clause| clause.iter().any(|lit| lit.satisfied_by(&a.bits))))
}
