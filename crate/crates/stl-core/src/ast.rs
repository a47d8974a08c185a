use std::collections::BTreeSet;
use std::fmt;

use crate::trace::TraceError;

/// One `coefficient * signal` term of an affine expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub signal: String,
}

impl Term {
    pub fn new(coef: f64, signal: impl Into<String>) -> Self {
        Self {
            coef,
            signal: signal.into(),
        }
    }
}

/// Affine combination of named signals plus a constant offset.
///
/// A predicate written `2*v + 3 <= 8` is stored as terms `[2*v]` with
/// offset `3 - 8 = -5` and compared against zero, so the offset absorbs
/// both sides' constants.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalExpr {
    pub terms: Vec<Term>,
    pub offset: f64,
}

impl SignalExpr {
    pub fn new(terms: Vec<Term>, offset: f64) -> Self {
        Self { terms, offset }
    }

    /// Single-signal expression `signal - constant`, the common case.
    pub fn signal_minus(signal: impl Into<String>, constant: f64) -> Self {
        Self {
            terms: vec![Term::new(1.0, signal)],
            offset: -constant,
        }
    }
}

/// Comparison of an affine expression against zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Comparator {
    pub(crate) fn holds(self, lhs: f64) -> bool {
        match self {
            Comparator::Lt => lhs < 0.0,
            Comparator::Le => lhs <= 0.0,
            Comparator::Gt => lhs > 0.0,
            Comparator::Ge => lhs >= 0.0,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
        }
    }
}

/// Time window of a temporal operator, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    Unbounded,
    Bounded { lo: f64, hi: f64 },
}

impl Interval {
    /// Bounded interval `[lo, hi]`; requires `0 <= lo <= hi`, both finite.
    pub fn bounded(lo: f64, hi: f64) -> Result<Self, TraceError> {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi < lo {
            return Err(TraceError::InvalidInterval { lo, hi });
        }
        Ok(Interval::Bounded { lo, hi })
    }

    /// Inclusive sample-index window anchored at `t`, clipped to `len`.
    ///
    /// Bounds in seconds map to index offsets by flooring `a/dt` and
    /// `b/dt`; the small bias guards against quotients like 0.3/0.1
    /// landing just below the integer. Returns `None` when no sample
    /// falls inside the window.
    pub(crate) fn sample_window(&self, dt: f64, t: usize, len: usize) -> Option<(usize, usize)> {
        debug_assert!(t < len);
        let last = len - 1;
        match *self {
            Interval::Unbounded => Some((t, last)),
            Interval::Bounded { lo, hi } => {
                let lo_off = (lo / dt + 1e-9).floor() as usize;
                let hi_off = (hi / dt + 1e-9).floor() as usize;
                let start = t.checked_add(lo_off)?;
                if start > last {
                    return None;
                }
                let end = t.saturating_add(hi_off).min(last);
                Some((start, end))
            }
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Unbounded => Ok(()),
            Interval::Bounded { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// STL formula over affine predicates.
///
/// Every leaf is a predicate; the tree is finite by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Pred { expr: SignalExpr, cmp: Comparator },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Always(Interval, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    Until(Interval, Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn pred(expr: SignalExpr, cmp: Comparator) -> Self {
        Formula::Pred { expr, cmp }
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn always(i: Interval, f: Formula) -> Self {
        Formula::Always(i, Box::new(f))
    }

    pub fn eventually(i: Interval, f: Formula) -> Self {
        Formula::Eventually(i, Box::new(f))
    }

    pub fn until(i: Interval, a: Formula, b: Formula) -> Self {
        Formula::Until(i, Box::new(a), Box::new(b))
    }

    /// All signal names referenced by any predicate in the tree.
    pub fn signals(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_signals(&mut out);
        out
    }

    fn collect_signals<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Pred { expr, .. } => {
                for term in &expr.terms {
                    out.insert(term.signal.as_str());
                }
            }
            Formula::Not(a) | Formula::Always(_, a) | Formula::Eventually(_, a) => {
                a.collect_signals(out)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(_, a, b) => {
                a.collect_signals(out);
                b.collect_signals(out);
            }
        }
    }
}

fn fmt_pred(f: &mut fmt::Formatter<'_>, expr: &SignalExpr, cmp: Comparator) -> fmt::Result {
    if expr.terms.is_empty() {
        write!(f, "0")?;
    } else {
        for (i, term) in expr.terms.iter().enumerate() {
            let mag = term.coef.abs();
            if i == 0 {
                if term.coef < 0.0 {
                    write!(f, "-")?;
                }
            } else if term.coef < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == 1.0 {
                write!(f, "{}", term.signal)?;
            } else {
                write!(f, "{}*{}", mag, term.signal)?;
            }
        }
    }
    // offset moved back to the right-hand side
    write!(f, " {} {}", cmp.symbol(), -expr.offset)
}

impl fmt::Display for Formula {
    /// Prints in the concrete grammar; `parse_formula` reverses it exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pred { expr, cmp } => fmt_pred(f, expr, *cmp),
            Formula::Not(a) => write!(f, "!({a})"),
            Formula::And(a, b) => write!(f, "({a} && {b})"),
            Formula::Or(a, b) => write!(f, "({a} || {b})"),
            Formula::Always(i, a) => write!(f, "G{i}({a})"),
            Formula::Eventually(i, a) => write!(f, "F{i}({a})"),
            Formula::Until(i, a, b) => write!(f, "(({a}) U{i} ({b}))"),
        }
    }
}
