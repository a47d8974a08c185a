use proptest::prelude::*;
use stl_core::{
    eval_at, indicator, parse_formula, Comparator, Formula, Interval, SignalExpr, Term, Trace,
};

fn comparator() -> impl Strategy<Value = Comparator> {
    prop_oneof![
        Just(Comparator::Lt),
        Just(Comparator::Le),
        Just(Comparator::Gt),
        Just(Comparator::Ge),
    ]
}

fn signal_name() -> impl Strategy<Value = String> {
    prop_oneof![Just("a".to_string()), Just("b".to_string())]
}

fn predicate() -> impl Strategy<Value = Formula> {
    (
        prop::collection::vec((-100.0..100.0f64, signal_name()), 1..3),
        -100.0..100.0f64,
        comparator(),
    )
        .prop_map(|(pairs, offset, cmp)| {
            let terms = pairs.into_iter().map(|(c, s)| Term::new(c, s)).collect();
            Formula::pred(SignalExpr::new(terms, offset), cmp)
        })
}

fn interval() -> impl Strategy<Value = Interval> {
    prop_oneof![
        Just(Interval::Unbounded),
        (0.0..2.0f64, 0.0..2.0f64).prop_map(|(x, y)| {
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            Interval::bounded(lo, hi).unwrap()
        }),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    predicate().prop_recursive(4, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (interval(), inner.clone()).prop_map(|(i, a)| Formula::always(i, a)),
            (interval(), inner.clone()).prop_map(|(i, a)| Formula::eventually(i, a)),
            (interval(), inner.clone(), inner).prop_map(|(i, a, b)| Formula::until(i, a, b)),
        ]
    })
}

fn trace() -> impl Strategy<Value = Trace> {
    (1usize..8).prop_flat_map(|len| {
        (
            prop::collection::vec(-3.0..3.0f64, len),
            prop::collection::vec(-3.0..3.0f64, len),
        )
            .prop_map(|(a, b)| Trace::from_columns(0.1, vec![("a", a), ("b", b)]).unwrap())
    })
}

proptest! {
    /// parse(print(f)) is structurally identical to f.
    #[test]
    fn parse_print_round_trip(f in formula()) {
        let printed = f.to_string();
        let reparsed = parse_formula(&printed)
            .unwrap_or_else(|e| panic!("`{printed}` failed to reparse: {e}"));
        prop_assert_eq!(f, reparsed);
    }

    /// !G(I, f) is equivalent to F(I, !f) under the clipped semantics.
    #[test]
    fn always_eventually_duality(f in formula(), i in interval(), tr in trace()) {
        for t in 0..tr.len() {
            let lhs = eval_at(
                &Formula::not(Formula::always(i, f.clone())),
                &tr,
                t,
            ).unwrap();
            let rhs = eval_at(
                &Formula::eventually(i, Formula::not(f.clone())),
                &tr,
                t,
            ).unwrap();
            prop_assert_eq!(lhs, rhs, "t={}", t);
        }
    }

    /// Safety prefixes never recover; eventualities never un-happen.
    #[test]
    fn prefix_indicator_monotonicity(p in predicate(), tr in trace()) {
        let safety = Formula::always(Interval::Unbounded, p.clone());
        let reach = Formula::eventually(Interval::Unbounded, p);
        let mut prev_safety = true;
        let mut prev_reach = false;
        for t in 0..tr.len() {
            let s = indicator(&safety, &tr, t).unwrap();
            let r = indicator(&reach, &tr, t).unwrap();
            prop_assert!(!(s && !prev_safety), "safety recovered at t={}", t);
            prop_assert!(!(prev_reach && !r), "eventuality lost at t={}", t);
            prev_safety = s;
            prev_reach = r;
        }
    }
}
