mod common;

use std::collections::BTreeMap;

use common::*;
use proptest::prelude::*;
use symlen_core::certificate::{verify_certificate, CertBuilder, Role, StepType, Verdict};
use symlen_core::parse::parse_tower;
use symlen_core::symbol::{BrauerExpr, Normalized, SplitStrategy, Symbol};
use symlen_core::tower::{Elem, FieldTower};

fn rational(q: u64) -> FieldTower {
    parse_tower(&format!("GF({q})(t)")).unwrap()
}

fn sym(a: symlen_core::ratfunc::RatFunc, b: symlen_core::ratfunc::RatFunc) -> Symbol {
    Symbol::new(Elem::Base(a), Elem::Base(b))
}

fn expr(t: &FieldTower, src: &str) -> BrauerExpr {
    t.parse_brauer(src, Some(0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn merge_preserves_invariants(qi in 0usize..2, x in raw_symbol(), y in raw_symbol(), same_a in any::<bool>()) {
        let t = rational([2, 3][qi]);
        let (Some((a1, b1)), Some((a2, b2))) = (symbol_slots(t.field(), &x), symbol_slots(t.field(), &y)) else {
            return Ok(());
        };
        let a2 = if same_a { a1.clone() } else { a2 };
        let e = BrauerExpr::new(0, vec![sym(a1, b1), sym(a2, b2)]);
        let m = t.merge_same_a(&e);
        prop_assert!(m.len() <= e.len());
        prop_assert_eq!(t.expr_invariants(&m).unwrap(), t.expr_invariants(&e).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalize_preserves_splitting(qi in 0usize..3, x in raw_symbol()) {
        let t = rational([2, 3, 4][qi]);
        let Some((a, b)) = symbol_slots(t.field(), &x) else { return Ok(()) };
        let s = sym(a, b);
        let before = t.is_split(&s, SplitStrategy::Invariants).unwrap().is_split();
        let after = match t.normalize_symbol(&s, 2) {
            Normalized::Split(_) => Some(true),
            Normalized::Symbol(n) => t.is_split(&n, SplitStrategy::Invariants).unwrap().is_split(),
        };
        prop_assert_eq!(before, after);
    }

    #[test]
    fn merge_certificate_endpoints_agree(qi in 0usize..2, x in raw_symbol(), y in raw_symbol()) {
        let t = rational([2, 3][qi]);
        let (Some((a, b1)), Some((_, b2))) = (symbol_slots(t.field(), &x), symbol_slots(t.field(), &y)) else {
            return Ok(());
        };
        let e = BrauerExpr::new(0, vec![sym(a.clone(), b1), sym(a, b2)]);
        let mut cb = CertBuilder::new(&t);
        cb.merge(&e);
        let c = cb.finish();
        prop_assume!(!c.steps.is_empty());
        prop_assert_eq!(verify_certificate(&c), Verdict::Accept);
        let ((l0, first), (l1, last)) = c.endpoints().unwrap();
        let t2 = parse_tower(&c.tower).unwrap();
        let inv = |l, s: &str| t2.expr_invariants(&t2.parse_brauer(s, Some(l)).unwrap()).unwrap();
        prop_assert_eq!(inv(l0, first), inv(l1, last));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn strategies_never_disagree(x in raw_symbol()) {
        let t = rational(2);
        let Some((a, b)) = symbol_slots(t.field(), &x) else { return Ok(()) };
        let s = sym(a, b);
        let both = t.is_split(&s, SplitStrategy::Both(1));
        prop_assert!(both.is_ok(), "{:?}", both);
        let inv = t.is_split(&s, SplitStrategy::Invariants).unwrap().is_split();
        if let Some(norm) = t.is_split(&s, SplitStrategy::NormSearch(1)).unwrap().is_split() {
            prop_assert_eq!(Some(norm), inv);
        }
    }
}

#[test]
fn merge_examples() {
    let t = rational(2);
    assert_eq!(
        t.merge_same_a(&expr(&t, "[1, t)_2 ⊗ [1, t+1)_2")),
        expr(&t, "[1, t^2+t)_2")
    );
    let twice = t.merge_same_a(&expr(&t, "[1, t)_2 ⊗ [1, t)_2"));
    assert_eq!(t.reduce_expr(&twice, 2), BrauerExpr::empty(0));
    let distinct = expr(&t, "[1, t)_2 ⊗ [t, t)_2");
    assert_eq!(t.merge_same_a(&distinct), distinct);
}

#[test]
fn normalize_examples() {
    let t = rational(2);
    let s = |src: &str| expr(&t, src).entries[0].clone();
    // t^2 = (t^2 + t) + t
    assert_eq!(
        t.normalize_symbol(&s("[t^2, t)_2"), 2),
        Normalized::Symbol(s("[t, t)_2"))
    );
    assert!(matches!(
        t.normalize_symbol(&s("[t, 1)_2"), 2),
        Normalized::Split(_)
    ));
    assert!(matches!(
        t.normalize_symbol(&s("[0, t)_2"), 2),
        Normalized::Split(_)
    ));
}

#[test]
fn split_examples() {
    let t = rational(2);
    let s = |src: &str| expr(&t, src).entries[0].clone();
    assert_eq!(
        t.is_split(&s("[1/t, t)_2"), SplitStrategy::NormSearch(1))
            .unwrap()
            .is_split(),
        Some(true)
    );
    assert_eq!(
        t.is_split(&s("[1/t, t)_2"), SplitStrategy::Invariants)
            .unwrap()
            .is_split(),
        Some(true)
    );
    match t
        .is_split(&s("[1, t)_2"), SplitStrategy::Invariants)
        .unwrap()
    {
        symlen_core::symbol::SplitStatus::NonSplit { place, value, .. } => {
            assert_eq!((place.as_str(), value), ("(t)", 1))
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(
        t.is_split(&s("[1, t)_2"), SplitStrategy::NormSearch(2))
            .unwrap()
            .is_split(),
        None
    );
    assert_eq!(
        t.is_split(&s("[t, 1)_2"), SplitStrategy::NormSearch(0))
            .unwrap()
            .is_split(),
        Some(true)
    );
}

#[test]
fn certificate_examples() {
    let t = rational(2);
    let mut cb = CertBuilder::new(&t);
    cb.merge(&expr(&t, "[1, t)_2 ⊗ [1, t+1)_2"));
    assert_eq!(verify_certificate(&cb.finish()), Verdict::Accept);

    // claims N(1) = t
    let before = expr(&t, "[1, t)_2");
    let claim = |keys: &[(&str, serde_json::Value)]| {
        let mut cb = CertBuilder::new(&t);
        let w: BTreeMap<String, serde_json::Value> = keys
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        cb.push(
            StepType::SplitNormWitness,
            Role::Main,
            &before,
            &BrauerExpr::empty(0),
            w,
        );
        verify_certificate(&cb.finish())
    };
    let ext = ("extension", "GF(2)(t) ; AS i: i^2+i = 1".into());
    let full = claim(&[("index", 0.into()), ext.clone(), ("z", "1".into())]);
    assert!(matches!(full, Verdict::Reject { step: 0, .. }), "{full:?}");
    let missing = claim(&[("index", 0.into()), ext]);
    assert!(matches!(missing, Verdict::Malformed { .. }), "{missing:?}");

    let t = parse_tower("GF(2)(t) ; ROOT s: s^2 = t").unwrap();
    let mut cb = CertBuilder::new(&t);
    let up = t.parse_brauer("[s, s)_2", Some(1)).unwrap();
    let down = t.parse_brauer("[t, t)_2", Some(0)).unwrap();
    cb.push(
        StepType::FrobeniusPush,
        Role::Main,
        &up,
        &down,
        BTreeMap::new(),
    );
    assert_eq!(verify_certificate(&cb.finish()), Verdict::Accept);
}
