use thiserror::Error;

use crate::ast::{Formula, SignalExpr};
use crate::trace::Trace;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("unknown signal `{name}` in formula")]
    UnknownSignal { name: String },
    #[error("sample index {t} out of range for trace of length {len}")]
    TimeOutOfRange { t: usize, len: usize },
}

/// Evaluates `f` at sample index `t` over the whole trace.
///
/// Finite-trace semantics: a temporal window is clipped to the recorded
/// samples; `Always` over an empty or truncated window holds vacuously
/// (weak at end) while `Eventually` and `Until` demand their witness
/// inside the trace (strong).
pub fn eval_at(f: &Formula, tr: &Trace, t: usize) -> Result<bool, EvalError> {
    let len = tr.len();
    if t >= len {
        return Err(EvalError::TimeOutOfRange { t, len });
    }
    check_signals(f, tr)?;
    Ok(eval_rec(f, tr, len, t))
}

/// Prefix indicator: true iff the prefix `s_{0..=t}` satisfies `f` judged
/// from time zero. This is the per-step monitor output used for rewards.
pub fn indicator(f: &Formula, tr: &Trace, t: usize) -> Result<bool, EvalError> {
    let len = tr.len();
    if t >= len {
        return Err(EvalError::TimeOutOfRange { t, len });
    }
    check_signals(f, tr)?;
    Ok(eval_rec(f, tr, t + 1, 0))
}

fn check_signals(f: &Formula, tr: &Trace) -> Result<(), EvalError> {
    match f {
        Formula::Pred { expr, .. } => {
            for term in &expr.terms {
                if tr.col(&term.signal).is_none() {
                    return Err(EvalError::UnknownSignal {
                        name: term.signal.clone(),
                    });
                }
            }
            Ok(())
        }
        Formula::Not(a) | Formula::Always(_, a) | Formula::Eventually(_, a) => check_signals(a, tr),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(_, a, b) => {
            check_signals(a, tr)?;
            check_signals(b, tr)
        }
    }
}

fn expr_value(expr: &SignalExpr, tr: &Trace, t: usize) -> f64 {
    let mut acc = expr.offset;
    for term in &expr.terms {
        // signal presence was checked up front
        acc += term.coef * tr.col(&term.signal).unwrap()[t];
    }
    acc
}

/// Recursive semantics over the prefix `tr[0..len]`. Callers guarantee
/// `t < len` and that every referenced signal exists.
fn eval_rec(f: &Formula, tr: &Trace, len: usize, t: usize) -> bool {
    match f {
        Formula::Pred { expr, cmp } => cmp.holds(expr_value(expr, tr, t)),
        Formula::Not(a) => !eval_rec(a, tr, len, t),
        Formula::And(a, b) => eval_rec(a, tr, len, t) && eval_rec(b, tr, len, t),
        Formula::Or(a, b) => eval_rec(a, tr, len, t) || eval_rec(b, tr, len, t),
        Formula::Always(i, a) => match i.sample_window(tr.dt(), t, len) {
            None => true,
            Some((lo, hi)) => (lo..=hi).all(|u| eval_rec(a, tr, len, u)),
        },
        Formula::Eventually(i, a) => match i.sample_window(tr.dt(), t, len) {
            None => false,
            Some((lo, hi)) => (lo..=hi).any(|u| eval_rec(a, tr, len, u)),
        },
        Formula::Until(i, a, b) => match i.sample_window(tr.dt(), t, len) {
            None => false,
            Some((lo, hi)) => (lo..=hi).any(|witness| {
                eval_rec(b, tr, len, witness) && (t..witness).all(|u| eval_rec(a, tr, len, u))
            }),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{Comparator, Interval};
    use crate::parse_formula;

    fn tr1(name: &str, values: &[f64]) -> Trace {
        Trace::from_columns(0.1, vec![(name, values.to_vec())]).unwrap()
    }

    #[test]
    fn always_holds_when_every_sample_satisfies() {
        let f = parse_formula("G(v <= 5)").unwrap();
        let tr = tr1("v", &[3.0, 4.0, 5.0]);
        assert!(eval_at(&f, &tr, 0).unwrap());
    }

    #[test]
    fn eventually_fails_without_witness() {
        let f = parse_formula("F(v >= 6)").unwrap();
        let tr = tr1("v", &[3.0, 4.0, 5.0]);
        assert!(!eval_at(&f, &tr, 0).unwrap());
    }

    #[test]
    fn until_ignores_left_operand_at_the_witness() {
        // a=[1,1,0], b=[0,0,1]: witness t''=2 needs a>=1 only on [0,2),
        // so the formula holds; frozen from the naive-oracle run.
        let f = parse_formula("(a >= 1) U (b >= 1)").unwrap();
        let tr = Trace::from_columns(
            0.1,
            vec![("a", vec![1.0, 1.0, 0.0]), ("b", vec![0.0, 0.0, 1.0])],
        )
        .unwrap();
        assert!(eval_at(&f, &tr, 0).unwrap());
    }

    #[test]
    fn until_needs_left_operand_before_the_witness() {
        let f = parse_formula("(a >= 1) U (b >= 1)").unwrap();
        let tr = Trace::from_columns(
            0.1,
            vec![("a", vec![1.0, 0.0, 1.0]), ("b", vec![0.0, 0.0, 1.0])],
        )
        .unwrap();
        assert!(!eval_at(&f, &tr, 0).unwrap());
    }

    #[test]
    fn bounded_always_beyond_trace_end_is_vacuous() {
        let f = Formula::always(
            Interval::bounded(1.0, 2.0).unwrap(),
            Formula::pred(crate::SignalExpr::signal_minus("v", 100.0), Comparator::Ge),
        );
        let tr = tr1("v", &[0.0, 0.0]);
        assert!(eval_at(&f, &tr, 0).unwrap());
        let g = Formula::eventually(
            Interval::bounded(1.0, 2.0).unwrap(),
            Formula::pred(crate::SignalExpr::signal_minus("v", 0.0), Comparator::Ge),
        );
        let tr1s = tr1("v", &[5.0]);
        assert!(!eval_at(&g, &tr1s, 0).unwrap());
    }

    #[test]
    fn indicator_judges_the_prefix_from_time_zero() {
        let f = parse_formula("F(d <= 4.74)").unwrap();
        let tr = tr1("d", &[6.0, 5.0, 4.5, 7.0]);
        assert!(!indicator(&f, &tr, 0).unwrap());
        assert!(!indicator(&f, &tr, 1).unwrap());
        assert!(indicator(&f, &tr, 2).unwrap());
        // eventuality latches: still satisfied on the longer prefix
        assert!(indicator(&f, &tr, 3).unwrap());
    }

    #[test]
    fn indicator_for_safety_latches_violation() {
        let f = parse_formula("G(v >= 2)").unwrap();
        let tr = tr1("v", &[3.0, 1.0, 5.0]);
        assert!(indicator(&f, &tr, 0).unwrap());
        assert!(!indicator(&f, &tr, 1).unwrap());
        assert!(!indicator(&f, &tr, 2).unwrap());
    }

    #[test]
    fn unknown_signal_is_reported() {
        let f = parse_formula("G(w >= 2)").unwrap();
        let tr = tr1("v", &[3.0]);
        assert_eq!(
            eval_at(&f, &tr, 0),
            Err(EvalError::UnknownSignal { name: "w".into() })
        );
    }

    #[test]
    fn out_of_range_time_is_reported() {
        let f = parse_formula("v >= 0").unwrap();
        let tr = tr1("v", &[3.0]);
        assert_eq!(
            eval_at(&f, &tr, 1),
            Err(EvalError::TimeOutOfRange { t: 1, len: 1 })
        );
    }

    #[test]
    fn multi_term_predicate_uses_both_signals() {
        // x_adv_rear - x_ego_front >= 0
        let f = parse_formula("x_adv_rear - x_ego_front >= 0").unwrap();
        let tr = Trace::from_columns(
            0.1,
            vec![
                ("x_adv_rear", vec![5.0, 3.0]),
                ("x_ego_front", vec![4.0, 4.0]),
            ],
        )
        .unwrap();
        assert!(eval_at(&f, &tr, 0).unwrap());
        assert!(!eval_at(&f, &tr, 1).unwrap());
    }
}
