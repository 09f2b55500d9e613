//! DIMACS CNF reading and writing.
//!
//! The accepted dialect is the usual competition format: `c` comment lines,
//! a `p cnf <vars> <clauses>` header, whitespace-separated signed literals,
//! clauses terminated by `0` (possibly spanning lines). A trailing `%`
//! line, as found in SATLIB archives, ends the clause section.

use std::fmt::Write as _;

use super::{Clause, Cnf3Instance, InstanceError, Literal};

/// Parses DIMACS CNF text into a validated 3-SAT instance.
pub fn parse_dimacs(text: &str) -> Result<Cnf3Instance, InstanceError> {
    let mut header: Option<(u32, usize)> = None;
    let mut current: Vec<Literal> = Vec::with_capacity(3);
    let mut clauses: Vec<Clause> = Vec::new();
    let mut done = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            done = true;
            continue;
        }
        if done {
            // SATLIB files carry a lone "0" after the "%" marker.
            if line == "0" {
                continue;
            }
            return Err(InstanceError::Syntax {
                line: lineno,
                msg: format!("unexpected content after %: {line:?}"),
            });
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(InstanceError::Syntax {
                    line: lineno,
                    msg: "duplicate problem line".into(),
                });
            }
            let mut parts = line.split_whitespace();
            parts.next(); // "p"
            if parts.next() != Some("cnf") {
                return Err(InstanceError::Syntax {
                    line: lineno,
                    msg: "expected `p cnf <vars> <clauses>`".into(),
                });
            }
            let vars = parse_count(parts.next(), lineno)?;
            let m = parse_count(parts.next(), lineno)? as usize;
            if parts.next().is_some() {
                return Err(InstanceError::Syntax {
                    line: lineno,
                    msg: "trailing tokens on problem line".into(),
                });
            }
            header = Some((vars, m));
            clauses.reserve(m);
            continue;
        }
        let (num_vars, _) = header.ok_or(InstanceError::Syntax {
            line: lineno,
            msg: "clause before `p cnf` header".into(),
        })?;
        for token in line.split_whitespace() {
            let value: i64 = token.parse().map_err(|_| InstanceError::Syntax {
                line: lineno,
                msg: format!("bad literal {token:?}"),
            })?;
            if value == 0 {
                clauses.push(finish_clause(&mut current, clauses.len())?);
            } else {
                let var = value.unsigned_abs();
                if var > u64::from(num_vars) {
                    return Err(InstanceError::IndexOutOfRange {
                        literal: value,
                        num_vars,
                    });
                }
                current.push(Literal::new(var as u32, value > 0));
            }
        }
    }

    let (num_vars, declared) = header.ok_or(InstanceError::Syntax {
        line: 0,
        msg: "missing `p cnf` header".into(),
    })?;
    if !current.is_empty() {
        return Err(InstanceError::Syntax {
            line: 0,
            msg: "unterminated clause at end of input".into(),
        });
    }
    if clauses.len() != declared {
        return Err(InstanceError::Syntax {
            line: 0,
            msg: format!("header declares {declared} clauses, found {}", clauses.len()),
        });
    }
    Cnf3Instance::new(num_vars, clauses)
}

fn parse_count(token: Option<&str>, line: usize) -> Result<u32, InstanceError> {
    token
        .and_then(|t| t.parse::<u32>().ok())
        .ok_or_else(|| InstanceError::Syntax {
            line,
            msg: "bad count in problem line".into(),
        })
}

fn finish_clause(current: &mut Vec<Literal>, index: usize) -> Result<Clause, InstanceError> {
    if current.len() != 3 {
        let msg = format!("{} literals", current.len());
        current.clear();
        return Err(InstanceError::NotThreeSat { clause: index, msg });
    }
    let clause = [current[0], current[1], current[2]];
    current.clear();
    if clause[0].var == clause[1].var
        || clause[0].var == clause[2].var
        || clause[1].var == clause[2].var
    {
        return Err(InstanceError::NotThreeSat {
            clause: index,
            msg: "repeated variable".into(),
        });
    }
    Ok(clause)
}

/// Serializes an instance as DIMACS CNF, LF line endings, one clause per line.
///
/// Round-trips through [`parse_dimacs`] to an identical instance.
pub fn write_dimacs(inst: &Cnf3Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", inst.num_vars(), inst.num_clauses());
    for clause in inst.clauses() {
        let _ = writeln!(
            out,
            "{} {} {} 0",
            clause[0].dimacs(),
            clause[1].dimacs(),
            clause[2].dimacs()
        );
    }
    out
}
