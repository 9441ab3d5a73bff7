mod common;

use common::*;
use proptest::prelude::*;
use symlen_core::invariants::{
    index_exponent, invariants, local_invariant, realize, symbol_invariants, InvariantVector, Place,
};
use symlen_core::parse::{parse_ratfunc, parse_tower};
use symlen_core::ratfunc::RatFunc;
use symlen_core::upoly::UPoly;

fn r(q: u64, src: &str) -> RatFunc {
    parse_ratfunc(&field(q), &["t"], src).unwrap()
}

/// `c^p - c`
fn wp(c: &RatFunc) -> RatFunc {
    c.frobenius().sub(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reciprocity(qi in 0usize..3, x in raw_symbol()) {
        let f = field([2, 3, 4][qi]);
        let Some((a, b)) = symbol_slots(&f, &x) else { return Ok(()) };
        prop_assert_eq!(symbol_invariants(&a, &b, "t").unwrap().total(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn invariants_are_additive(qi in 0usize..3, x in raw_symbol(), y in raw_symbol()) {
        let f = field([2, 3, 4][qi]);
        let (Some(s1), Some(s2)) = (symbol_slots(&f, &x), symbol_slots(&f, &y)) else { return Ok(()) };
        let both = invariants(&f, "t", &[s1.clone(), s2.clone()]).unwrap();
        let sum = symbol_invariants(&s1.0, &s1.1, "t").unwrap().add(&symbol_invariants(&s2.0, &s2.1, "t").unwrap());
        prop_assert_eq!(both, sum);
    }

    #[test]
    fn shifts_leave_invariants_fixed(qi in 0usize..3, x in raw_symbol(), c in (coeffs(2), coeffs(1)), w in (coeffs(2), coeffs(1))) {
        let f = field([2, 3, 4][qi]);
        let (Some((a, b)), Some(c), Some(w)) = (symbol_slots(&f, &x), rat(&f, &c.0, &c.1), nonzero_rat(&f, &w.0, &w.1)) else {
            return Ok(());
        };
        let v = symbol_invariants(&a, &b, "t").unwrap();
        prop_assert_eq!(&symbol_invariants(&a.add(&wp(&c)), &b, "t").unwrap(), &v);
        prop_assert_eq!(&symbol_invariants(&a, &b.mul(&w.frobenius()), "t").unwrap(), &v);
    }

    #[test]
    fn realize_inverts_invariants(qi in 0usize..3, x in raw_symbol(), y in raw_symbol()) {
        let f = field([2, 3, 4][qi]);
        let (Some(s1), Some(s2)) = (symbol_slots(&f, &x), symbol_slots(&f, &y)) else { return Ok(()) };
        let v = invariants(&f, "t", &[s1, s2]).unwrap();
        let e = realize(&v, &[]).unwrap();
        prop_assert_eq!(invariants(&f, "t", &e).unwrap(), v);
    }

    #[test]
    fn residue_at_rational_place(qi in 0usize..4, cs in coeffs(4), c in 0u32..1024) {
        // a polynomial has no pole at (t - c), so the invariant is Tr(a(c))
        let f = field([2, 3, 4, 5][qi]);
        let c = c % f.size();
        let a = upoly(&f, &cs);
        let b = UPoly::new(vec![f.neg(c), 1]);
        let got = local_invariant(
            &RatFunc::from_poly(poly(&f, &cs)),
            &RatFunc::from_poly(symlen_core::poly::Poly::from_upoly(&f, 1, 0, &b)),
            &Place::Finite(b.clone()),
        )
        .unwrap();
        prop_assert_eq!(got, f.trace(a.eval(c, &f)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn norm_witness_implies_zero_invariants(x in raw_symbol()) {
        let t = parse_tower("GF(3)(t)").unwrap();
        let Some((a, b)) = symbol_slots(t.field(), &x) else { return Ok(()) };
        let v = symbol_invariants(&a, &b, "t").unwrap();
        let s = symlen_core::symbol::Symbol::new(symlen_core::tower::Elem::Base(a), symlen_core::tower::Elem::Base(b));
        match t.is_split(&s, symlen_core::symbol::SplitStrategy::NormSearch(1)).unwrap().is_split() {
            Some(true) => prop_assert!(v.is_zero()),
            Some(false) => prop_assert!(false, "norm search never proves nonsplitting"),
            None => {}
        }
    }
}

fn vector(q: u64, entries: &[(Place, u32)]) -> InvariantVector {
    let mut v = InvariantVector::zero(&field(q), "t");
    for (pl, x) in entries {
        v.set(pl.clone(), *x);
    }
    v
}

fn place(cs: &[u32]) -> Place {
    Place::Finite(UPoly::new(cs.to_vec()))
}

#[test]
fn pinned_local_invariants() {
    let (one, t) = (r(2, "1"), r(2, "t"));
    assert_eq!(local_invariant(&one, &t, &place(&[0, 1])).unwrap(), 1);
    // dt/t = -du/u at infinity
    assert_eq!(local_invariant(&one, &t, &Place::Infinity).unwrap(), 1);
    assert_eq!(local_invariant(&one, &t, &place(&[1, 1])).unwrap(), 0);
    assert_eq!(
        local_invariant(&r(2, "1/t"), &t, &place(&[0, 1])).unwrap(),
        0
    );
    assert_eq!(
        local_invariant(&r(2, "0"), &r(2, "t^2+t+1"), &place(&[1, 1, 1])).unwrap(),
        0
    );
}

#[test]
fn pinned_vectors() {
    let f = field(2);
    let v = symbol_invariants(&r(2, "1"), &r(2, "t"), "t").unwrap();
    assert_eq!(v, vector(2, &[(place(&[0, 1]), 1), (Place::Infinity, 1)]));
    assert!(invariants(&f, "t", &[]).unwrap().is_zero());
    let twice = invariants(&f, "t", &[(r(2, "1"), r(2, "t")), (r(2, "1"), r(2, "t"))]).unwrap();
    assert!(twice.is_zero());
}

#[test]
fn index_exponent_examples() {
    assert_eq!(index_exponent(&vector(2, &[])), (1, 1));
    assert_eq!(
        index_exponent(&vector(2, &[(place(&[0, 1]), 1), (Place::Infinity, 1)])),
        (2, 2)
    );
    let v = vector(
        3,
        &[
            (place(&[0, 1]), 1),
            (place(&[1, 1]), 1),
            (Place::Infinity, 1),
        ],
    );
    assert_eq!(v.total(), 0);
    assert_eq!(index_exponent(&v), (3, 3));
}

#[test]
fn realize_examples() {
    let f = field(2);
    let v = vector(2, &[(place(&[0, 1]), 1), (Place::Infinity, 1)]);
    let e = realize(&v, &[r(2, "t")]).unwrap();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0].1, r(2, "t"));
    assert_eq!(invariants(&f, "t", &e).unwrap(), v);

    assert!(realize(&vector(2, &[]), &[]).unwrap().is_empty());

    let v = vector(2, &[(place(&[0, 1]), 1), (place(&[1, 1]), 1)]);
    let e = realize(&v, &[r(2, "t^2+t")]).unwrap();
    assert_eq!(e.len(), 1);
    assert_eq!(e[0].1, r(2, "t^2+t"));
    assert_eq!(invariants(&f, "t", &e).unwrap(), v);

    assert!(realize(&vector(2, &[(place(&[0, 1]), 1)]), &[]).is_err());
}
