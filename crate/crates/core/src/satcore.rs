//! Weighted Max-2-SAT and positive NAE-Max-2-SAT instances and the Flip
//! neighbourhood.
//!
//! A standard (`std`) clause is satisfied when at least one of its two
//! literals evaluates to true; an NAE (`nae`) clause when its two literals
//! take different values. Costs are the total weight of satisfied clauses, so
//! Flip local search maximizes.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A literal: a variable index (0-based) plus polarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: usize,
    negated: bool,
}

impl Literal {
    pub fn positive(var: usize) -> Self {
        Literal {
            var,
            negated: false,
        }
    }

    pub fn negative(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// The same variable with opposite polarity.
    pub fn complement(&self) -> Self {
        Literal {
            var: self.var,
            negated: !self.negated,
        }
    }

    /// Truth value under an assignment.
    pub fn eval(&self, t: &Assignment) -> bool {
        t.bits[self.var] ^ self.negated
    }
}

impl fmt::Display for Literal {
    /// Prints `x3` / `!x3` with 1-based variable numbers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

impl FromStr for Literal {
    type Err = SatError;

    /// Accepts `x3`, `!x3`, `~x3` and `¬x3`.
    fn from_str(s: &str) -> Result<Self, SatError> {
        let s = s.trim();
        let (negated, rest) = if let Some(r) = s.strip_prefix('!') {
            (true, r)
        } else if let Some(r) = s.strip_prefix('~') {
            (true, r)
        } else if let Some(r) = s.strip_prefix('¬') {
            (true, r)
        } else {
            (false, s)
        };
        let digits = rest
            .strip_prefix('x')
            .ok_or_else(|| SatError::BadLiteral(s.to_string()))?;
        let num: usize = digits
            .parse()
            .map_err(|_| SatError::BadLiteral(s.to_string()))?;
        if num == 0 {
            return Err(SatError::BadLiteral(s.to_string()));
        }
        Ok(Literal {
            var: num - 1,
            negated,
        })
    }
}

/// Clause satisfaction semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// At least one literal true.
    Std,
    /// The two literal values differ (not-all-equal).
    Nae,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Std => write!(f, "std"),
            Mode::Nae => write!(f, "nae"),
        }
    }
}

impl FromStr for Mode {
    type Err = SatError;

    fn from_str(s: &str) -> Result<Self, SatError> {
        match s {
            "std" => Ok(Mode::Std),
            "nae" => Ok(Mode::Nae),
            other => Err(SatError::BadMode(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("expected a {expected} instance, found {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("assignment has {got} bits but the instance has {want} variables")]
    LengthMismatch { want: usize, got: usize },
    #[error("instance must have at least one variable")]
    NoVariables,
    #[error("clause {clause}: variable index {var} out of range 1..={num_vars}")]
    VarOutOfRange {
        clause: usize,
        var: usize,
        num_vars: usize,
    },
    #[error("clause {clause}: weights must be positive integers")]
    ZeroWeight { clause: usize },
    #[error("clause {clause}: nae clauses consist of two positive literals")]
    NegatedNaeLiteral { clause: usize },
    #[error("invalid literal `{0}`")]
    BadLiteral(String),
    #[error("invalid mode `{0}` (expected std or nae)")]
    BadMode(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A truth assignment over `N` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// All-false assignment over `n` variables.
    pub fn all_false(n: usize) -> Self {
        Assignment {
            bits: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, var: usize) -> bool {
        self.bits[var]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The assignment with variable `var` inverted.
    pub fn flip(&self, var: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[var] = !bits[var];
        Assignment { bits }
    }

    /// All assignments at Hamming distance one, ordered by flipped variable.
    pub fn flip_neighbors(&self) -> Vec<Assignment> {
        (0..self.bits.len()).map(|n| self.flip(n)).collect()
    }

    /// Hamming distance to another assignment of the same length.
    pub fn hamming(&self, other: &Assignment) -> usize {
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// The bitwise complement.
    pub fn complement(&self) -> Self {
        Assignment {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{}", if *b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = SatError;

    fn from_str(s: &str) -> Result<Self, SatError> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.trim().chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(SatError::BadLiteral(format!(
                        "assignment character `{other}`"
                    )))
                }
            }
        }
        Ok(Assignment { bits })
    }
}

/// Indices of clauses satisfied / unsatisfied by a fixed assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSets {
    pub satisfied: Vec<usize>,
    pub unsatisfied: Vec<usize>,
}

/// A weighted 2-CNF instance, standard or NAE-positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatInstance {
    num_vars: usize,
    clauses: Vec<[Literal; 2]>,
    weights: Vec<u64>,
    mode: Mode,
}

impl SatInstance {
    /// Builds and validates an instance. NAE instances must consist of
    /// positive literals; duplicate literals within a clause are allowed.
    pub fn new(
        num_vars: usize,
        clauses: Vec<[Literal; 2]>,
        weights: Vec<u64>,
        mode: Mode,
    ) -> Result<Self, SatError> {
        if num_vars == 0 {
            return Err(SatError::NoVariables);
        }
        if clauses.len() != weights.len() {
            return Err(SatError::LengthMismatch {
                want: clauses.len(),
                got: weights.len(),
            });
        }
        for (m, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var >= num_vars {
                    return Err(SatError::VarOutOfRange {
                        clause: m + 1,
                        var: lit.var + 1,
                        num_vars,
                    });
                }
                if mode == Mode::Nae && lit.negated {
                    return Err(SatError::NegatedNaeLiteral { clause: m + 1 });
                }
            }
            if weights[m] == 0 {
                return Err(SatError::ZeroWeight { clause: m + 1 });
            }
        }
        Ok(SatInstance {
            num_vars,
            clauses,
            weights,
            mode,
        })
    }

    /// Convenience constructor from signed 1-based literals, e.g. `(-1, 2)`
    /// for `!x1 v x2`.
    pub fn from_signed(
        num_vars: usize,
        clauses: &[(i64, i64, u64)],
        mode: Mode,
    ) -> Result<Self, SatError> {
        let mut lits = Vec::with_capacity(clauses.len());
        let mut weights = Vec::with_capacity(clauses.len());
        for (m, &(a, b, w)) in clauses.iter().enumerate() {
            lits.push([signed_literal(a, m)?, signed_literal(b, m)?]);
            weights.push(w);
        }
        SatInstance::new(num_vars, lits, weights, mode)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 2]] {
        &self.clauses
    }

    pub fn clause(&self, m: usize) -> &[Literal; 2] {
        &self.clauses[m]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, m: usize) -> u64 {
        self.weights[m]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The largest clause weight, 0 for an empty clause set.
    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(0)
    }

    /// Sum of all clause weights.
    pub fn total_weight(&self) -> u64 {
        self.weights
            .iter()
            .try_fold(0u64, |acc, w| acc.checked_add(*w))
            .expect("total clause weight overflows u64")
    }

    fn check_assignment(&self, t: &Assignment) -> Result<(), SatError> {
        if t.len() != self.num_vars {
            return Err(SatError::LengthMismatch {
                want: self.num_vars,
                got: t.len(),
            });
        }
        Ok(())
    }

    /// Whether clause `m` is satisfied by `t` under this instance's mode.
    pub fn clause_satisfied(&self, m: usize, t: &Assignment) -> bool {
        let [a, b] = self.clauses[m];
        match self.mode {
            Mode::Std => a.eval(t) || b.eval(t),
            Mode::Nae => a.eval(t) != b.eval(t),
        }
    }

    /// Total weight of satisfied clauses for a standard instance.
    pub fn sat_cost(&self, t: &Assignment) -> Result<u64, SatError> {
        if self.mode != Mode::Std {
            return Err(SatError::ModeMismatch {
                expected: Mode::Std,
                found: self.mode,
            });
        }
        self.check_assignment(t)?;
        Ok(self.satisfied_weight(t))
    }

    /// Total weight of not-all-equal clauses for an NAE instance.
    pub fn nae_cost(&self, t: &Assignment) -> Result<u64, SatError> {
        if self.mode != Mode::Nae {
            return Err(SatError::ModeMismatch {
                expected: Mode::Nae,
                found: self.mode,
            });
        }
        self.check_assignment(t)?;
        Ok(self.satisfied_weight(t))
    }

    /// Mode-appropriate cost.
    pub fn cost(&self, t: &Assignment) -> Result<u64, SatError> {
        self.check_assignment(t)?;
        Ok(self.satisfied_weight(t))
    }

    fn satisfied_weight(&self, t: &Assignment) -> u64 {
        (0..self.clauses.len())
            .filter(|&m| self.clause_satisfied(m, t))
            .try_fold(0u64, |acc, m| acc.checked_add(self.weights[m]))
            .expect("satisfied clause weight overflows u64")
    }

    /// Partitions clause indices into satisfied and unsatisfied sets.
    pub fn clause_sets(&self, t: &Assignment) -> Result<ClauseSets, SatError> {
        self.check_assignment(t)?;
        let mut satisfied = Vec::new();
        let mut unsatisfied = Vec::new();
        for m in 0..self.clauses.len() {
            if self.clause_satisfied(m, t) {
                satisfied.push(m);
            } else {
                unsatisfied.push(m);
            }
        }
        Ok(ClauseSets {
            satisfied,
            unsatisfied,
        })
    }

    /// Indices of clauses containing the literal `lit` (exact polarity).
    pub fn clauses_with(&self, lit: Literal) -> Vec<usize> {
        self.clauses
            .iter()
            .enumerate()
            .filter(|(_, c)| c.contains(&lit))
            .map(|(m, _)| m)
            .collect()
    }

    /// Parses the `wsat2` text format:
    ///
    /// ```text
    /// p wsat2 <N> <M> <std|nae>
    /// <lit1> <lit2> <weight>     (M lines, literals as nonzero signed ints)
    /// ```
    ///
    /// Blank lines and lines starting with `c` are ignored.
    pub fn parse_wsat2(text: &str) -> Result<Self, SatError> {
        let mut header: Option<(usize, usize, Mode, usize)> = None;
        let mut clauses = Vec::new();
        let mut weights = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if header.is_none() {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 5 || fields[0] != "p" || fields[1] != "wsat2" {
                    return Err(SatError::Parse {
                        line: lineno,
                        msg: "expected header `p wsat2 <N> <M> <std|nae>`".to_string(),
                    });
                }
                let n: usize = fields[2].parse().map_err(|_| SatError::Parse {
                    line: lineno,
                    msg: format!("invalid variable count `{}`", fields[2]),
                })?;
                let m: usize = fields[3].parse().map_err(|_| SatError::Parse {
                    line: lineno,
                    msg: format!("invalid clause count `{}`", fields[3]),
                })?;
                let mode = fields[4].parse().map_err(|_| SatError::Parse {
                    line: lineno,
                    msg: format!("invalid mode `{}`", fields[4]),
                })?;
                header = Some((n, m, mode, lineno));
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(SatError::Parse {
                    line: lineno,
                    msg: "expected `<lit1> <lit2> <weight>`".to_string(),
                });
            }
            let parse_lit = |s: &str| -> Result<Literal, SatError> {
                let v: i64 = s.parse().map_err(|_| SatError::Parse {
                    line: lineno,
                    msg: format!("invalid literal `{s}`"),
                })?;
                signed_literal(v, clauses.len()).map_err(|_| SatError::Parse {
                    line: lineno,
                    msg: format!("invalid literal `{s}`"),
                })
            };
            let w: u64 = fields[2].parse().map_err(|_| SatError::Parse {
                line: lineno,
                msg: format!("invalid weight `{}`", fields[2]),
            })?;
            clauses.push([parse_lit(fields[0])?, parse_lit(fields[1])?]);
            weights.push(w);
        }
        let (n, m, mode, header_line) = header.ok_or(SatError::Parse {
            line: 1,
            msg: "missing header line".to_string(),
        })?;
        if clauses.len() != m {
            return Err(SatError::Parse {
                line: header_line,
                msg: format!("header declares {m} clauses, found {}", clauses.len()),
            });
        }
        SatInstance::new(n, clauses, weights, mode)
    }

    /// Canonical `wsat2` serialization.
    pub fn to_wsat2(&self) -> String {
        let mut out = format!(
            "p wsat2 {} {} {}\n",
            self.num_vars,
            self.clauses.len(),
            self.mode
        );
        for (clause, w) in self.clauses.iter().zip(&self.weights) {
            let sig = |l: &Literal| {
                let v = (l.var + 1) as i64;
                if l.negated {
                    -v
                } else {
                    v
                }
            };
            out.push_str(&format!("{} {} {}\n", sig(&clause[0]), sig(&clause[1]), w));
        }
        out
    }
}

fn signed_literal(v: i64, clause: usize) -> Result<Literal, SatError> {
    if v == 0 {
        return Err(SatError::Parse {
            line: clause + 1,
            msg: "literal 0 is not allowed".to_string(),
        });
    }
    let var = v.unsigned_abs() as usize - 1;
    Ok(if v < 0 {
        Literal::negative(var)
    } else {
        Literal::positive(var)
    })
}
