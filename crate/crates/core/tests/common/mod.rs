#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use symlen_core::ff::FiniteField;
use symlen_core::poly::Poly;
use symlen_core::ratfunc::{normalize, RatFunc};
use symlen_core::upoly::UPoly;

pub fn field(q: u64) -> Arc<FiniteField> {
    FiniteField::from_size(q).unwrap()
}

/// Raw coefficient vector, reduced into the field by [`upoly`].
pub fn coeffs(max_deg: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..1024, 1..=max_deg + 1)
}

pub fn upoly(f: &FiniteField, cs: &[u32]) -> UPoly {
    UPoly::new(cs.iter().map(|c| c % f.size()).collect())
}

pub fn poly(f: &Arc<FiniteField>, cs: &[u32]) -> Poly {
    Poly::from_upoly(f, 1, 0, &upoly(f, cs))
}

/// `n / d` in F_q(t); `None` when the denominator reduces to zero.
pub fn rat(f: &Arc<FiniteField>, n: &[u32], d: &[u32]) -> Option<RatFunc> {
    let d = poly(f, d);
    if d.is_zero() {
        return None;
    }
    normalize(poly(f, n), d).ok()
}

/// Like [`rat`] but also rejects zero.
pub fn nonzero_rat(f: &Arc<FiniteField>, n: &[u32], d: &[u32]) -> Option<RatFunc> {
    rat(f, n, d).filter(|r| !r.is_zero())
}

pub fn t(f: &Arc<FiniteField>) -> RatFunc {
    RatFunc::var(f, 1, 0)
}

/// Raw data for a random symbol `[n_a/d_a, n_b/d_b)` with degrees up to 3.
pub type RawSymbol = (Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>);

pub fn raw_symbol() -> impl Strategy<Value = RawSymbol> {
    (coeffs(3), coeffs(2), coeffs(3), coeffs(2))
}

/// `(a, b)` with `b` nonzero; `None` when the raw data degenerates.
pub fn symbol_slots(f: &Arc<FiniteField>, s: &RawSymbol) -> Option<(RatFunc, RatFunc)> {
    Some((rat(f, &s.0, &s.1)?, nonzero_rat(f, &s.2, &s.3)?))
}
