mod common;

use common::*;
use proptest::prelude::*;
use symlen_core::parse::parse_tower;
use symlen_core::tower::{Elem, FieldTower, NormSearch};

const SHAPES: [&str; 6] = [
    "GF(2)(t) ; AS i: i^2+i = 1",
    "GF(2)(t) ; AS i: i^2+i = 1/t",
    "GF(2)(t) ; ROOT s: s^2 = t",
    "GF(3)(t) ; AS i: i^3-i = t",
    "GF(3)(t) ; ROOT s: s^3 = t+1",
    "GF(2)(t) ; ROOT s: s^2 = t ; AS i: i^2+i = s",
];

type Coords = Vec<(Vec<u32>, Vec<u32>)>;

fn coords(max_deg: usize) -> impl Strategy<Value = Coords> {
    prop::collection::vec((coeffs(max_deg), coeffs(1)), 4)
}

/// Top-level element from base coordinates; `None` if a denominator vanishes.
fn elem(t: &FieldTower, cs: &Coords) -> Option<Elem> {
    let n = t.degree(t.top(), 0);
    let base: Option<Vec<Elem>> = cs[..n]
        .iter()
        .map(|(a, b)| rat(t.field(), a, b).map(Elem::Base))
        .collect();
    Some(t.from_coords(&base?, t.top(), 0))
}

fn shape(k: usize) -> FieldTower {
    parse_tower(SHAPES[k]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn norm_is_multiplicative(k in 0..SHAPES.len(), x in coords(2), y in coords(2)) {
        let t = shape(k);
        let (Some(x), Some(y)) = (elem(&t, &x), elem(&t, &y)) else { return Ok(()) };
        let top = t.top();
        prop_assert_eq!(t.norm(&t.mul(&x, &y), top, 0), t.mul(&t.norm(&x, top, 0), &t.norm(&y, top, 0)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn min_poly_divides_degree_and_carries_norm(k in 0..SHAPES.len(), x in coords(2)) {
        let t = shape(k);
        let Some(x) = elem(&t, &x) else { return Ok(()) };
        let (top, n) = (t.top(), t.degree(t.top(), 0));
        let m = t.min_poly(&x, top, 0);
        let d = m.len() - 1;
        prop_assert_eq!(n % d, 0);
        prop_assert!(t.is_one(&m[d]));
        prop_assert!(t.is_zero(&t.eval_poly(&m, 0, &x)));
        // N(x) = ((-1)^d c_0)^(n/d)
        let c0 = if d % 2 == 1 { t.neg(&m[0]) } else { m[0].clone() };
        prop_assert_eq!(t.pow(&c0, (n / d) as i64), t.norm(&x, top, 0));
    }

    #[test]
    fn root_step_has_exponent_one(k in prop::sample::select(vec![2usize, 4]), x in coords(3)) {
        let t = shape(k);
        let Some(x) = elem(&t, &x) else { return Ok(()) };
        prop_assert!(t.down(&t.frobenius(&x), 1, 0).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn solve_norm_sound_and_monotone(k in prop::sample::select(vec![0usize, 1, 2, 3]), z in prop::collection::vec((coeffs(1), coeffs(0)), 4)) {
        let t = shape(k);
        let Some(z) = elem(&t, &z) else { return Ok(()) };
        prop_assume!(!t.is_zero(&z));
        let y = t.norm(&z, 1, 0);
        let mut found_before = false;
        for d in 0..=2 {
            match t.solve_norm(&y, 1, 0, d) {
                NormSearch::Found(w) => {
                    prop_assert_eq!(t.norm(&w, 1, 0), y.clone());
                    found_before = true;
                }
                NormSearch::Exhausted { bound } => {
                    prop_assert_eq!(bound, d);
                    prop_assert!(!found_before, "found at a smaller bound but not at {}", d);
                }
            }
        }
    }
}

fn e(t: &FieldTower, src: &str, level: usize) -> Elem {
    t.parse_elem(src, level).unwrap()
}

#[test]
fn min_poly_examples() {
    let t = parse_tower("GF(2)(t) ; ROOT s: s^2 = t").unwrap();
    assert_eq!(
        t.min_poly(&e(&t, "s", 1), 1, 0),
        vec![e(&t, "t", 0), e(&t, "0", 0), e(&t, "1", 0)]
    );
    let t = parse_tower("GF(2)(t) ; AS i: i^2+i = 1/t").unwrap();
    assert_eq!(
        t.min_poly(&e(&t, "i", 1), 1, 0),
        vec![e(&t, "1/t", 0), e(&t, "1", 0), e(&t, "1", 0)]
    );
    // trace of i*t is i*t + (i+1)*t = t, norm is i(i+1) t^2 = t^2
    let t = parse_tower("GF(2)(t) ; AS i: i^2+i = 1").unwrap();
    assert_eq!(
        t.min_poly(&e(&t, "i*t", 1), 1, 0),
        vec![e(&t, "t^2", 0), e(&t, "t", 0), e(&t, "1", 0)]
    );
}

#[test]
fn norm_examples() {
    let t = parse_tower("GF(2)(t) ; AS i: i^2+i = 1/t").unwrap();
    // i and i+1 are the conjugates, and i(i+1) = i^2+i
    assert_eq!(t.norm(&e(&t, "i", 1), 1, 0), e(&t, "1/t", 0));
    assert_eq!(t.norm(&e(&t, "1/i", 1), 1, 0), e(&t, "t", 0));
    assert_eq!(t.norm(&e(&t, "t+1", 1), 1, 0), e(&t, "t^2+1", 0));
}

#[test]
fn solve_norm_examples() {
    let t = parse_tower("GF(2)(t) ; AS i: i^2+i = 1/t").unwrap();
    assert_eq!(
        t.solve_norm(&e(&t, "1", 0), 1, 0, 0),
        NormSearch::Found(e(&t, "1", 1))
    );
    let z = t
        .solve_norm(&e(&t, "t", 0), 1, 0, 1)
        .found()
        .expect("witness within bound 1");
    assert_eq!(t.norm(&z, 1, 0), e(&t, "t", 0));
    let t = parse_tower("GF(2)(t) ; AS i: i^2+i = 1").unwrap();
    assert_eq!(
        t.solve_norm(&e(&t, "t", 0), 1, 0, 2),
        NormSearch::Exhausted { bound: 2 }
    );
}

#[test]
fn inseparable_root_of_square_rejected() {
    assert!(parse_tower("GF(2)(t) ; ROOT s: s^2 = t^2").is_err());
    assert!(parse_tower("GF(2)(t) ; AS i: i^2+i = t^2+t").is_err());
}
