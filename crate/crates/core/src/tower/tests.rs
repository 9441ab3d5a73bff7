use super::*;
use crate::ff::FiniteField;

fn f2t() -> FieldTower {
    FieldTower::rational(FiniteField::new(2, 1).unwrap(), &["t"]).unwrap()
}

fn t(tw: &FieldTower, level: usize) -> Elem {
    tw.var(0, level)
}

/// F_2(t)(i) with i^2 + i = 1/t
fn as_tower() -> FieldTower {
    let b = f2t();
    let a = b.inv(&t(&b, 0)).unwrap();
    b.make_step(ExtStep::artin_schreier("i", a)).unwrap()
}

#[test]
fn make_step_accepts_and_rejects() {
    let b = f2t();
    assert!(b.make_step(ExtStep::artin_schreier("i", b.one(0))).is_ok());
    assert!(b.make_step(ExtStep::insep_root("s", t(&b, 0))).is_ok());
    let t2 = b.pow(&t(&b, 0), 2);
    assert!(matches!(
        b.make_step(ExtStep::insep_root("s", t2)),
        Err(Error::DegenerateStep(_))
    ));
    // t^2 + t is in the image of x^2 - x
    let a = b.add(&b.pow(&t(&b, 0), 2), &t(&b, 0));
    assert!(matches!(
        b.make_step(ExtStep::artin_schreier("i", a)),
        Err(Error::DegenerateStep(_))
    ));
    // repeated names and wrong levels
    let k = b.make_step(ExtStep::insep_root("s", t(&b, 0))).unwrap();
    assert!(k.make_step(ExtStep::insep_root("s", t(&k, 1))).is_err());
    assert!(matches!(
        k.make_step(ExtStep::insep_root("u", t(&k, 0))),
        Err(Error::LevelMismatch(_))
    ));
}

#[test]
fn min_poly_examples() {
    let b = f2t();
    let k = b.make_step(ExtStep::insep_root("s", t(&b, 0))).unwrap();
    let m = k.min_poly(&k.generator(1), 1, 0);
    assert_eq!(m, vec![t(&k, 0), k.zero(0), k.one(0)]);

    let l = as_tower();
    let i = l.generator(1);
    let m = l.min_poly(&i, 1, 0);
    let inv_t = l.inv(&t(&l, 0)).unwrap();
    assert_eq!(m, vec![inv_t, l.one(0), l.one(0)]);
    // constants have linear minimal polynomials
    assert_eq!(l.min_poly(&t(&l, 1), 1, 0).len(), 2);

    // i·t over the constant extension i^2 + i = 1
    let c = b.make_step(ExtStep::artin_schreier("i", b.one(0))).unwrap();
    let it = c.mul(&c.generator(1), &t(&c, 1));
    let m = c.min_poly(&it, 1, 0);
    assert_eq!(m, vec![c.pow(&t(&c, 0), 2), t(&c, 0), c.one(0)]);
}

#[test]
fn norm_examples() {
    let l = as_tower();
    let i = l.generator(1);
    let inv_t = l.inv(&t(&l, 0)).unwrap();
    assert_eq!(l.norm(&i, 1, 0), inv_t);
    assert_eq!(l.norm(&t(&l, 1), 1, 0), l.pow(&t(&l, 0), 2));
    assert_eq!(l.norm(&l.inv(&i).unwrap(), 1, 0), t(&l, 0));
}

#[test]
fn inverse_and_reduction() {
    let l = as_tower();
    let i = l.generator(1);
    let x = l.add(&i, &t(&l, 1));
    let y = l.inv(&x).unwrap();
    assert!(l.is_one(&l.mul(&x, &y)));
    // i^2 = i + 1/t
    let expected = l.add(&i, &l.lift(&l.inv(&t(&l, 0)).unwrap(), 0, 1));
    assert_eq!(l.mul(&i, &i), expected);
    assert_eq!(l.display(&expected), "1/t+i");
}

#[test]
fn solve_norm_examples() {
    let l = as_tower();
    let one = l.one(0);
    assert_eq!(l.solve_norm(&one, 1, 0, 0), NormSearch::Found(l.one(1)));
    let z = l
        .solve_norm(&t(&l, 0), 1, 0, 1)
        .found()
        .expect("t is a norm");
    assert_eq!(l.norm(&z, 1, 0), t(&l, 0));
    // the canonical search order reaches t·i before 1/i = t + t·i
    assert_eq!(z, l.mul(&t(&l, 1), &l.generator(1)));
    assert_eq!(l.norm(&l.inv(&l.generator(1)).unwrap(), 1, 0), t(&l, 0));

    // constant extension F_4(t)/F_2(t): t has odd valuation, never a norm
    let b = f2t();
    let c = b.make_step(ExtStep::artin_schreier("c", b.one(0))).unwrap();
    assert_eq!(
        c.solve_norm(&t(&c, 0), 1, 0, 2),
        NormSearch::Exhausted { bound: 2 }
    );
    let cc = c.generator(1);
    assert_eq!(c.norm(&cc, 1, 0), c.one(0));
}

#[test]
fn factored_norm_search() {
    // over F_4(t) the quartics t^4+t+1 and t^4+t^3+1 split into quadratics,
    // so the product needs a witness of height 5 but each factor one of height 2
    let b = f2t();
    let c = b.make_step(ExtStep::artin_schreier("c", b.one(0))).unwrap();
    let y = c
        .parse_elem("(t^2+t+1)*(t^4+t+1)*(t^4+t^3+1)/t^2", 0)
        .unwrap();
    assert_eq!(
        c.solve_norm(&y, 1, 0, 4),
        NormSearch::Exhausted { bound: 4 }
    );
    let z = c
        .solve_norm_factored(&y, 1, 0, 4)
        .found()
        .expect("factor-wise witness");
    assert_eq!(c.norm(&z, 1, 0), y);
    assert!(c.solve_norm_factored(&t(&c, 0), 1, 0, 2).found().is_none());
}

#[test]
fn truncated_search_reports_reached_height() {
    // F_256(t)/F_16(t): height 2 has 16^6 numerator pairs, above the cap
    let f = FiniteField::new(2, 4).unwrap();
    let b = FieldTower::rational(f.clone(), &["t"]).unwrap();
    let k = f.elements().find(|&x| f.trace(x) != 0).unwrap();
    let c = b
        .make_step(ExtStep::artin_schreier(
            "c",
            b.from_base(RatFunc::constant(&f, 1, k), 0),
        ))
        .unwrap();
    assert_eq!(
        c.solve_norm(&t(&c, 0), 1, 0, 3),
        NormSearch::Exhausted { bound: 1 }
    );
}

#[test]
fn pth_roots_in_towers() {
    let b = f2t();
    let k = b.make_step(ExtStep::insep_root("s", t(&b, 0))).unwrap();
    let s = k.generator(1);
    // s is not a square in F_2(s), but t = s^2 is
    assert_eq!(k.pth_root(&s), None);
    assert_eq!(k.pth_root(&t(&k, 1)), Some(s.clone()));
    let x = k.add(&s, &t(&k, 1));
    assert_eq!(k.pth_root(&k.frobenius(&x)), Some(x));

    let l = as_tower();
    let i = l.generator(1);
    let y = l.add(&i, &t(&l, 1));
    assert_eq!(l.pth_root(&l.frobenius(&y)), Some(y));
    assert_eq!(l.pth_root(&i), None);
    assert!(l.make_step(ExtStep::insep_root("s", i)).is_ok());
}

#[test]
fn artin_schreier_over_inseparable_level() {
    let b = f2t();
    let k = b.make_step(ExtStep::insep_root("s", t(&b, 0))).unwrap();
    let s = k.generator(1);
    // s = ℘(?) has no solution, s^2 + s does
    assert!(k.as_preimage(&s, 0).is_none());
    let a = k.add(&k.pow(&s, 2), &s);
    let y = k.as_preimage(&a, 0).unwrap();
    assert_eq!(k.wp(&y), a);
    // 1/s gives a proper step over K
    let l = k
        .make_step(ExtStep::artin_schreier("i", k.inv(&s).unwrap()))
        .unwrap();
    assert_eq!(l.checks(), &[CheckStatus::Exact, CheckStatus::Exact]);
    assert_eq!(l.degree(2, 0), 4);
}

#[test]
fn simple_steps() {
    let b = f2t();
    // x^2 + x + 1 over F_2(t): exact irreducibility
    let m = vec![b.one(0), b.one(0), b.one(0)];
    let c = b.make_step(ExtStep::simple("c", m)).unwrap();
    assert_eq!(c.checks(), &[CheckStatus::Exact]);
    let m = vec![b.zero(0), b.one(0), b.one(0)];
    assert!(b.make_step(ExtStep::simple("c", m)).is_err());
    assert_eq!(c.describe(), "GF(2)(t) ; ALG c: c^2+c+1 = 0");
}

#[test]
fn describe_round_shape() {
    let l = as_tower();
    let k = l.make_step(ExtStep::insep_root("s", t(&l, 1))).unwrap();
    assert_eq!(
        k.describe(),
        "GF(2)(t) ; AS i: i^2+i = 1/t ; ROOT s: s^2 = t"
    );
}

#[test]
fn univariate_models() {
    let b = f2t();
    let k = b.make_step(ExtStep::insep_root("s", t(&b, 0))).unwrap();
    let m = k.univariate_model(1).unwrap();
    assert_eq!(m.var(), "s");
    let s = RatFunc::var(m.field(), 1, 0);
    assert_eq!(m.map(&k.generator(1)), s);
    assert_eq!(m.map(&t(&k, 1)), s.pow(2));

    // t + 1 as radicand: the generator maps to u + 1
    let tp1 = b.add(&t(&b, 0), &b.one(0));
    let k2 = b.make_step(ExtStep::insep_root("w", tp1)).unwrap();
    let m2 = k2.univariate_model(1).unwrap();
    assert_eq!(m2.var(), "u");
    let u = RatFunc::var(m2.field(), 1, 0);
    assert_eq!(
        m2.map(&k2.generator(1)),
        u.add(&RatFunc::one(m2.field(), 1))
    );

    // constant extension then root: F_4(s)
    let c = b.make_step(ExtStep::artin_schreier("c", b.one(0))).unwrap();
    let cs = c.make_step(ExtStep::insep_root("s", t(&c, 1))).unwrap();
    let m3 = cs.univariate_model(2).unwrap();
    assert_eq!(m3.field().size(), 4);
    let g = m3.map(&cs.lift(&cs.generator(1), 1, 2));
    let gv = g.constant_value().unwrap();
    let f = m3.field();
    assert_eq!(f.add(f.mul(gv, gv), gv), 1);
    // products map to products
    let x = cs.add(&cs.generator(2), &cs.lift(&cs.generator(1), 1, 2));
    let y = cs.mul(&x, &x);
    assert_eq!(m3.map(&y), m3.map(&x).pow(2));

    // a non-constant Artin–Schreier step has no model
    assert!(as_tower().univariate_model(1).is_err());
}

#[test]
fn model_unmap() {
    let t = crate::parse::parse_tower("GF(2)(t) ; AS i: i^2+i = 1").unwrap();
    let m = t.univariate_model(1).unwrap();
    let x = t.parse_elem("(t+i)/(t^2+i)", 1).unwrap();
    assert_eq!(m.unmap(&t, &m.map(&x)).unwrap(), x);
    let r = crate::parse::parse_tower("GF(2)(t) ; ROOT s: s^2 = t").unwrap();
    let m = r.univariate_model(1).unwrap();
    let y = r.parse_elem("s^3+t/(s+1)", 1).unwrap();
    assert_eq!(m.unmap(&r, &m.map(&y)).unwrap(), y);
}

#[test]
fn model_unmap_other_radicand() {
    let r = crate::parse::parse_tower("GF(2)(t) ; ROOT s: s^2 = t^3+t").unwrap();
    let m = r.univariate_model(1).unwrap();
    let y = r.parse_elem("s/(t+1)+s^3", 1).unwrap();
    assert_eq!(m.unmap(&r, &m.map(&y)).unwrap(), y);
}
