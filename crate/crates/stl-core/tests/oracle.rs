//! Cross-checks the evaluator against a naive reference evaluator that
//! follows the recursive finite-trace semantics directly. The reference
//! shares no code with the implementation: it materializes explicit
//! window index sets and copies trace prefixes instead of slicing.

use stl_core::{eval_at, indicator, Comparator, Formula, Interval, SignalExpr, Trace};

/// Textbook-style reference evaluator, deliberately unoptimized.
fn naive_eval(f: &Formula, tr: &Trace, t: usize) -> bool {
    match f {
        Formula::Pred { expr, cmp } => {
            let mut v = expr.offset;
            for term in &expr.terms {
                v += term.coef * tr.value(&term.signal, t).expect("signal must exist");
            }
            match cmp {
                Comparator::Lt => v < 0.0,
                Comparator::Le => v <= 0.0,
                Comparator::Gt => v > 0.0,
                Comparator::Ge => v >= 0.0,
            }
        }
        Formula::Not(a) => !naive_eval(a, tr, t),
        Formula::And(a, b) => naive_eval(a, tr, t) && naive_eval(b, tr, t),
        Formula::Or(a, b) => naive_eval(a, tr, t) || naive_eval(b, tr, t),
        Formula::Always(i, a) => window_indices(i, tr, t)
            .into_iter()
            .all(|u| naive_eval(a, tr, u)),
        Formula::Eventually(i, a) => window_indices(i, tr, t)
            .into_iter()
            .any(|u| naive_eval(a, tr, u)),
        Formula::Until(i, a, b) => {
            for witness in window_indices(i, tr, t) {
                if naive_eval(b, tr, witness) {
                    let mut left_ok = true;
                    for u in t..witness {
                        if !naive_eval(a, tr, u) {
                            left_ok = false;
                            break;
                        }
                    }
                    if left_ok {
                        return true;
                    }
                }
            }
            false
        }
    }
}

/// All sample indices u with (u - t) * dt inside the interval, flooring
/// the bound-to-index mapping, clipped to the trace.
fn window_indices(i: &Interval, tr: &Trace, t: usize) -> Vec<usize> {
    let mut out = Vec::new();
    match i {
        Interval::Unbounded => {
            for u in t..tr.len() {
                out.push(u);
            }
        }
        Interval::Bounded { lo, hi } => {
            let lo_off = (lo / tr.dt() + 1e-9).floor() as i64;
            let hi_off = (hi / tr.dt() + 1e-9).floor() as i64;
            for u in t..tr.len() {
                let off = (u - t) as i64;
                if off >= lo_off && off <= hi_off {
                    out.push(u);
                }
            }
        }
    }
    out
}

/// Prefix indicator via an honest copy of the prefix.
fn naive_indicator(f: &Formula, tr: &Trace, t: usize) -> bool {
    let cols = tr
        .names()
        .iter()
        .map(|n| (n.clone(), tr.col(n).unwrap()[..=t].to_vec()))
        .collect();
    let prefix = Trace::from_columns(tr.dt(), cols).unwrap();
    naive_eval(f, &prefix, 0)
}

fn atom(signal: &str, cmp: Comparator, c: f64) -> Formula {
    Formula::pred(SignalExpr::signal_minus(signal, c), cmp)
}

/// Every formula of depth <= `depth` over the given leaf set, with
/// operator intervals drawn from `ivals`.
fn enumerate_formulas(leaves: &[Formula], ivals: &[Interval], depth: usize) -> Vec<Formula> {
    let mut by_depth: Vec<Vec<Formula>> = vec![leaves.to_vec()];
    for d in 1..depth {
        let smaller: Vec<Formula> = by_depth.iter().flatten().cloned().collect();
        let mut next = Vec::new();
        for f in &smaller {
            next.push(Formula::not(f.clone()));
            for i in ivals {
                next.push(Formula::always(*i, f.clone()));
                next.push(Formula::eventually(*i, f.clone()));
            }
        }
        for a in &smaller {
            for b in &smaller {
                next.push(Formula::and(a.clone(), b.clone()));
                next.push(Formula::or(a.clone(), b.clone()));
                for i in ivals {
                    next.push(Formula::until(*i, a.clone(), b.clone()));
                }
            }
        }
        let _ = d;
        by_depth.push(next);
    }
    by_depth.into_iter().flatten().collect()
}

/// All traces of the given length over two signals with values {0,1,2}.
fn two_signal_traces(len: usize) -> impl Iterator<Item = Trace> {
    let total = 9usize.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut a = Vec::with_capacity(len);
        let mut b = Vec::with_capacity(len);
        for _ in 0..len {
            a.push((code % 3) as f64);
            code /= 3;
            b.push((code % 3) as f64);
            code /= 3;
        }
        Trace::from_columns(0.1, vec![("a", a), ("b", b)]).unwrap()
    })
}

#[test]
fn exhaustive_agreement_small_scale() {
    // Dev-scale sweep; the full acceptance run covers depth 3 / length 6.
    let leaves = vec![atom("a", Comparator::Ge, 1.0), atom("b", Comparator::Le, 1.0)];
    let ivals = [Interval::Unbounded, Interval::bounded(0.0, 0.2).unwrap()];
    let formulas = enumerate_formulas(&leaves, &ivals, 2);
    let mut checked = 0u64;
    for len in 1..=4 {
        for tr in two_signal_traces(len) {
            for f in &formulas {
                for t in 0..len {
                    let got = eval_at(f, &tr, t).unwrap();
                    let want = naive_eval(f, &tr, t);
                    assert_eq!(got, want, "formula {f} trace {tr:?} t={t}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 100_000, "sweep too small: {checked}");
}

#[test]
fn until_example_frozen_from_oracle() {
    // a=[1,1,0], b=[0,0,1]: the only witness for b>=1 is index 2 and
    // a>=1 holds on [0,2), so the recursive definition yields true.
    let f = Formula::until(
        Interval::Unbounded,
        atom("a", Comparator::Ge, 1.0),
        atom("b", Comparator::Ge, 1.0),
    );
    let tr = Trace::from_columns(
        0.1,
        vec![("a", vec![1.0, 1.0, 0.0]), ("b", vec![0.0, 0.0, 1.0])],
    )
    .unwrap();
    let oracle = naive_eval(&f, &tr, 0);
    assert!(oracle);
    assert_eq!(eval_at(&f, &tr, 0).unwrap(), oracle);
}

#[test]
fn indicator_matches_prefix_copy_oracle() {
    let leaves = vec![atom("a", Comparator::Ge, 1.0), atom("b", Comparator::Le, 1.0)];
    let ivals = [Interval::Unbounded, Interval::bounded(0.1, 0.3).unwrap()];
    let formulas = enumerate_formulas(&leaves, &ivals, 2);
    for tr in two_signal_traces(3) {
        for f in &formulas {
            for t in 0..tr.len() {
                assert_eq!(
                    indicator(f, &tr, t).unwrap(),
                    naive_indicator(f, &tr, t),
                    "formula {f} t={t}"
                );
            }
        }
    }
}

#[test]
fn safety_indicator_never_recovers_on_extensions() {
    // G(v >= 2) is 0 on prefix [3,1]; every extension of length <= 4
    // over values {0,1,2,3} keeps it 0, checked against the oracle.
    let f = Formula::always(Interval::Unbounded, atom("v", Comparator::Ge, 2.0));
    let base = vec![3.0, 1.0];
    let tr0 = Trace::from_columns(0.1, vec![("v", base.clone())]).unwrap();
    assert!(!indicator(&f, &tr0, 1).unwrap());
    for ext_len in 0..=2usize {
        let total = 4usize.pow(ext_len as u32);
        for mut code in 0..total {
            let mut vals = base.clone();
            for _ in 0..ext_len {
                vals.push((code % 4) as f64);
                code /= 4;
            }
            let tr = Trace::from_columns(0.1, vec![("v", vals)]).unwrap();
            let t = tr.len() - 1;
            assert!(!naive_indicator(&f, &tr, t));
            assert!(!indicator(&f, &tr, t).unwrap());
        }
    }
}
