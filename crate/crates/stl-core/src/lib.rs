//! Signal temporal logic over finite sampled traces.
//!
//! Formulas are built from affine predicates on named signals, boolean
//! connectives, and the temporal operators always / eventually / until,
//! each with an optional `[a,b]` time window in seconds. Evaluation is
//! boolean and prefix-oriented: [`indicator`] answers "does the trace
//! recorded so far satisfy the formula when judged from time zero",
//! which is the monitor output a reward engine consumes step by step.
//!
//! Everything here is a pure function over immutable inputs; values can
//! be shared freely across threads.

mod ast;
mod eval;
mod parser;
mod trace;

pub use ast::{Comparator, Formula, Interval, SignalExpr, Term};
pub use eval::{eval_at, indicator, EvalError};
pub use parser::{parse_formula, ParseError};
pub use trace::{Trace, TraceError};
