//! Local invariants of symbols over the univariate global field `F_q(t)`.
//!
//! The invariant of `[a, b)` at a place `v` is `Tr(res_v(a · db/b))` read in
//! `Z/p`. Residues come from partial fractions: the `π`-part `N/π^k` of a
//! rational function (with `deg N < k·deg π`) has trace of residues equal to the
//! coefficient of `t^{k·deg π - 1}` in `N`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ff::{Fe, FiniteField};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::upoly::{factor, UPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    /// monic irreducible polynomial
    Finite(UPoly),
    Infinity,
}

impl Place {
    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    pub fn display(&self, field: &Arc<FiniteField>, var: &str) -> String {
        match self {
            Place::Finite(pi) => format!(
                "({})",
                Poly::from_upoly(field, 1, 0, pi).display(&[var.to_string()])
            ),
            Place::Infinity => "inf".into(),
        }
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
            (Place::Infinity, _) => Ordering::Greater,
            (_, Place::Infinity) => Ordering::Less,
            (Place::Finite(a), Place::Finite(b)) => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev())),
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finitely supported map from places to `Z/p`; zero entries are not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct InvariantVector {
    field: Arc<FiniteField>,
    var: String,
    entries: BTreeMap<Place, u32>,
}

impl fmt::Debug for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for InvariantVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p();
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(v, &x)| format!("{}: {x}/{p}", v.display(&self.field, &self.var)))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl InvariantVector {
    pub fn zero(field: &Arc<FiniteField>, var: &str) -> Self {
        InvariantVector {
            field: field.clone(),
            var: var.into(),
            entries: BTreeMap::new(),
        }
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn get(&self, v: &Place) -> u32 {
        self.entries.get(v).copied().unwrap_or(0)
    }

    pub fn set(&mut self, v: Place, x: u32) {
        let x = x % self.p();
        if x == 0 {
            self.entries.remove(&v);
        } else {
            self.entries.insert(v, x);
        }
    }

    pub fn add_at(&mut self, v: Place, x: u32) {
        let cur = self.get(&v);
        self.set(v, cur + x);
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, &x) in &other.entries {
            out.add_at(v.clone(), x);
        }
        out
    }

    pub fn scale(&self, k: u32) -> Self {
        let mut out = Self::zero(&self.field, &self.var);
        for (v, &x) in &self.entries {
            out.set(v.clone(), x * (k % self.p()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, u32)> {
        self.entries.iter().map(|(v, &x)| (v, x))
    }

    /// Sum of all entries in `Z/p`; zero for every vector coming from an algebra.
    pub fn total(&self) -> u32 {
        self.entries
            .values()
            .fold(0, |acc, &x| (acc + x) % self.p())
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(v, &x)| json!({"place": v.display(&self.field, &self.var), "value": x, "p": self.p()}))
            .collect();
        json!({ "p": self.p(), "entries": entries })
    }
}

fn upolys(r: &RatFunc) -> Result<(UPoly, UPoly)> {
    if r.nvars() != 1 {
        return Err(Error::NotUnivariate);
    }
    Ok((
        r.num().to_upoly(0).ok_or(Error::NotUnivariate)?,
        r.den().to_upoly(0).ok_or(Error::NotUnivariate)?,
    ))
}

fn ratfunc(field: &Arc<FiniteField>, n: &UPoly, d: &UPoly) -> RatFunc {
    crate::ratfunc::normalize(
        Poly::from_upoly(field, 1, 0, n),
        Poly::from_upoly(field, 1, 0, d),
    )
    .expect("nonzero denominator")
}

/// `(k, N)` with `d = π^k · R`, `gcd(π, R) = 1`, and `N ≡ n · R^{-1} (mod π^k)`.
fn pi_part(n: &UPoly, d: &UPoly, pi: &UPoly, f: &FiniteField) -> (usize, UPoly) {
    let mut k = 0;
    let mut r = d.clone();
    loop {
        let (q, rem) = r.divrem(pi, f);
        if !rem.is_zero() {
            break;
        }
        r = q;
        k += 1;
    }
    if k == 0 {
        return (0, UPoly::zero());
    }
    let pk = pi.pow(k as u64, f);
    let (_, s, _) = r.ext_gcd(&pk, f);
    (k, n.mul(&s, f).rem(&pk, f))
}

fn trace_value(f: &FiniteField, c: Fe) -> u32 {
    f.trace(c)
}

/// Smallest constant with the given trace.
fn with_trace(f: &FiniteField, x: u32) -> Fe {
    f.elements()
        .find(|&c| f.trace(c) == x % f.characteristic())
        .expect("trace is surjective")
}

/// Invariant of `[a, b)` at `v`, computed from `ω = a · b'/b`.
pub fn local_invariant(a: &RatFunc, b: &RatFunc, v: &Place) -> Result<u32> {
    if b.is_zero() {
        return Err(Error::Malformed("b-slot must be nonzero".into()));
    }
    upolys(a)?;
    let (a, _) = as_normalize(a)?;
    let omega = a.mul(&b.derivative(0).div(b)?);
    omega_invariant(&omega, v)
}

fn omega_invariant(omega: &RatFunc, v: &Place) -> Result<u32> {
    let f = omega.field().clone();
    if omega.is_zero() {
        return Ok(0);
    }
    let (n, d) = upolys(omega)?;
    Ok(match v {
        Place::Finite(pi) => {
            let (k, np) = pi_part(&n, &d, pi, &f);
            if k == 0 {
                return Ok(0);
            }
            let idx = k * pi.degree().unwrap() - 1;
            trace_value(&f, np.coeff(idx))
        }
        Place::Infinity => {
            let proper = n.rem(&d, &f);
            let dd = d.degree().unwrap();
            if dd == 0 {
                return Ok(0);
            }
            let c = proper.coeff(dd - 1);
            trace_value(&f, f.neg(c))
        }
    })
}

/// Invariant vector of a single symbol.
pub fn symbol_invariants(a: &RatFunc, b: &RatFunc, var: &str) -> Result<InvariantVector> {
    let f = a.field().clone();
    let mut out = InvariantVector::zero(&f, var);
    if b.is_zero() {
        return Err(Error::Malformed("b-slot must be nonzero".into()));
    }
    let (a, _) = as_normalize(a)?;
    let omega = a.mul(&b.derivative(0).div(b)?);
    if omega.is_zero() {
        return Ok(out);
    }
    let (_, d) = upolys(&omega)?;
    for (pi, _) in factor(&d.monic(&f), &f) {
        let v = Place::Finite(pi);
        let x = omega_invariant(&omega, &v)?;
        out.set(v, x);
    }
    let x = omega_invariant(&omega, &Place::Infinity)?;
    out.set(Place::Infinity, x);
    debug_assert_eq!(out.total(), 0, "reciprocity");
    Ok(out)
}

/// Invariant vector of a tensor product of symbols (sum of the entries).
pub fn invariants(
    field: &Arc<FiniteField>,
    var: &str,
    symbols: &[(RatFunc, RatFunc)],
) -> Result<InvariantVector> {
    let mut out = InvariantVector::zero(field, var);
    for (a, b) in symbols {
        out = out.add(&symbol_invariants(a, b, var)?);
    }
    Ok(out)
}

/// `(index, exponent)` of the class; both equal the lcm of the local orders,
/// which for exponent-`p` data is `p` unless the vector vanishes.
pub fn index_exponent(v: &InvariantVector) -> (u64, u64) {
    if v.is_zero() {
        (1, 1)
    } else {
        (v.p() as u64, v.p() as u64)
    }
}

/// Reduces pole orders so that none is divisible by `p`: returns `(a', c)` with
/// `a = a' + c^p - c`. The constant term of `a'` is the smallest constant with
/// its trace, so `a ∈ ℘(F)` iff `a' = 0`.
pub fn as_normalize(a: &RatFunc) -> Result<(RatFunc, RatFunc)> {
    let f = a.field().clone();
    let p = f.characteristic() as usize;
    let wp = |x: &RatFunc| x.frobenius().sub(x);
    let mut cur = a.clone();
    let mut acc = RatFunc::zero(&f, 1);
    'outer: loop {
        let (n, d) = upolys(&cur)?;
        if cur.is_zero() {
            break;
        }
        // finite poles
        let dm = d.monic(&f);
        if dm.degree().unwrap_or(0) > 0 {
            for (pi, e) in factor(&dm, &f) {
                if !(e as usize).is_multiple_of(p) {
                    continue;
                }
                let (k, np) = pi_part(&n, &d, &pi, &f);
                debug_assert_eq!(k, e as usize);
                // most polar Laurent coefficient: the lowest π-adic digit of np
                let top = np.rem(&pi, &f);
                // s^p ≡ top (mod π): s = top^{Q/p} with Q = |F[t]/π|
                let m = f.degree() as usize * pi.degree().unwrap();
                let mut s = top.clone();
                for _ in 0..m - 1 {
                    s = s.powmod(p as u64, &pi, &f);
                }
                let s_r = ratfunc(&f, &s, &pi.pow((k / p) as u64, &f));
                cur = cur.sub(&wp(&s_r));
                acc = acc.add(&s_r);
                continue 'outer;
            }
        }
        // polynomial part
        let (q, _) = n.divrem(&d, &f);
        if let Some(deg) = q.degree() {
            if deg > 0 && deg % p == 0 {
                let c = f.pth_root(q.lead());
                let s = ratfunc(&f, &UPoly::monomial(c, deg / p), &UPoly::one());
                cur = cur.sub(&wp(&s));
                acc = acc.add(&s);
                continue 'outer;
            }
        }
        let c0 = q.coeff(0);
        let canon = with_trace(&f, f.trace(c0));
        if canon != c0 {
            let diff = f.sub(c0, canon);
            let y = f
                .elements()
                .find(|&y| f.sub(f.pow(y, p as u64), y) == diff)
                .expect("trace-zero constants are in the image of x^p - x");
            let s = RatFunc::constant(&f, 1, y);
            cur = cur.sub(&wp(&s));
            acc = acc.add(&s);
            continue 'outer;
        }
        break;
    }
    debug_assert_eq!(cur.add(&wp(&acc)), *a);
    Ok((cur, acc))
}

/// Splits `b = b' · w^p` with `b'` monic and all multiplicities in `b'` below `p`.
pub fn pth_power_free(b: &RatFunc) -> Result<(RatFunc, RatFunc)> {
    let f = b.field().clone();
    let p = f.characteristic();
    let (n, d) = upolys(b)?;
    if n.is_zero() {
        return Err(Error::Malformed("b-slot must be nonzero".into()));
    }
    let mut free_n = UPoly::one();
    let mut w_n = UPoly::constant(f.pth_root(n.lead()));
    let mut w_d = UPoly::one();
    for (pi, e) in factor(&n.monic(&f), &f) {
        free_n = free_n.mul(&pi.pow((e % p) as u64, &f), &f);
        w_n = w_n.mul(&pi.pow((e / p) as u64, &f), &f);
    }
    if d.degree().unwrap_or(0) > 0 {
        for (pi, e) in factor(&d, &f) {
            // 1/π^e = π^{p⌈e/p⌉ - e} / π^{p⌈e/p⌉}
            let up = e.div_ceil(p);
            free_n = free_n.mul(&pi.pow((up * p - e) as u64, &f), &f);
            w_d = w_d.mul(&pi.pow(up as u64, &f), &f);
        }
    }
    Ok((ratfunc(&f, &free_n, &UPoly::one()), ratfunc(&f, &w_n, &w_d)))
}

/// Builds symbols with exactly the invariants `v`.
///
/// With `b_slots` empty every finite place `π` in the support gets its own
/// symbol `[a_π, π)`. Otherwise a single symbol `[a, b)` with the first usable
/// `b` is produced, with `a` a sum of partial fractions placing the prescribed
/// residue at each place and none elsewhere.
pub fn realize(v: &InvariantVector, b_slots: &[RatFunc]) -> Result<Vec<(RatFunc, RatFunc)>> {
    let f = v.field().clone();
    if v.total() != 0 {
        return Err(Error::Infeasible("invariants do not sum to zero".into()));
    }
    if v.is_zero() {
        return Ok(Vec::new());
    }
    let place_a = |pi: &UPoly, x: u32, m: &UPoly, s: &UPoly| -> RatFunc {
        // a_π = r · S / π^{j+1} with r ≡ c t^{d-1} M_0^{-1} (mod π)
        let mut j = 0;
        let mut m0 = m.clone();
        loop {
            let (q, r) = m0.divrem(pi, &f);
            if !r.is_zero() {
                break;
            }
            m0 = q;
            j += 1;
        }
        let d = pi.degree().unwrap();
        let c = with_trace(&f, x);
        let (_, inv, _) = m0.rem(pi, &f).ext_gcd(pi, &f);
        let r = UPoly::monomial(c, d - 1).mul(&inv, &f).rem(pi, &f);
        let num = r.mul(s, &f);
        let den = pi.pow(j as u64 + 1, &f);
        ratfunc(&f, &num, &den)
    };
    let finite: Vec<(UPoly, u32)> = v
        .iter()
        .filter_map(|(pl, x)| match pl {
            Place::Finite(pi) => Some((pi.clone(), x)),
            Place::Infinity => None,
        })
        .collect();
    let out = if b_slots.is_empty() {
        finite
            .iter()
            .map(|(pi, x)| {
                let m = pi.derivative(&f);
                let a = place_a(pi, *x, &m, pi);
                (a, ratfunc(&f, pi, &UPoly::one()))
            })
            .collect()
    } else {
        let b = b_slots
            .iter()
            .find(|b| !b.derivative(0).is_zero())
            .ok_or_else(|| {
                let first = v
                    .iter()
                    .next()
                    .map(|(pl, _)| pl.display(&f, v.var()))
                    .unwrap_or_default();
                Error::Infeasible(format!(
                    "obstruction at {first}: every b-slot is a p-th power"
                ))
            })?;
        let (m, s) = upolys(&b.derivative(0).div(b)?)?;
        let mut a = RatFunc::zero(&f, 1);
        for (pi, x) in &finite {
            a = a.add(&place_a(pi, *x, &m, &s));
        }
        vec![(a, b.clone())]
    };
    let check = invariants(&f, v.var(), &out)?;
    if check != *v {
        return Err(Error::Verification(format!(
            "realized invariants {check} differ from {v}"
        )));
    }
    Ok(out)
}

/// Monic irreducible polynomials of degree `1..=max_degree`, skipping degrees
/// with more than 4096 monic candidates.
fn small_irreducibles(f: &FiniteField, max_degree: usize) -> Vec<UPoly> {
    let q = f.size() as u64;
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let Some(count) = q.checked_pow(d as u32).filter(|&c| c <= 4096) else {
            break;
        };
        for idx in 0..count {
            let mut cs = Vec::with_capacity(d + 1);
            let mut x = idx;
            for _ in 0..d {
                cs.push((x % q) as Fe);
                x /= q;
            }
            cs.push(1);
            let g = UPoly::new(cs);
            if g.is_irreducible(f) {
                out.push(g);
            }
        }
    }
    out
}

/// Solves `M e = target` over `F_p`; `m` is given by columns.
fn solve_mod_p(cols: &[Vec<u32>], target: &[u32], p: u32) -> Option<Vec<u32>> {
    let rows = target.len();
    let n = cols.len();
    let mut m: Vec<Vec<u32>> = (0..rows)
        .map(|r| cols.iter().map(|c| c[r]).chain([target[r]]).collect())
        .collect();
    let inv = |x: u32| (1..p).find(|y| (x * y) % p == 1).expect("nonzero mod p");
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let iv = inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = (*x * iv) % p;
        }
        let pivot = m[row].clone();
        for (r, mr) in m.iter_mut().enumerate() {
            if r != row && mr[col] != 0 {
                let fct = mr[col];
                for (x, y) in mr.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - fct * y % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut e = vec![0; n];
    for (r, &c) in pivots.iter().enumerate() {
        e[c] = m[r][n];
    }
    Some(e)
}

/// A `b` with `invariants([a, b)) = v`, as a product of places drawn from the
/// support of `v`, the poles of `a`, and monic irreducibles of degree at most
/// `max_degree`.
pub fn realize_with_a(v: &InvariantVector, a: &RatFunc, max_degree: usize) -> Result<RatFunc> {
    let f = v.field().clone();
    let p = v.p();
    if v.total() != 0 {
        return Err(Error::Infeasible("invariants do not sum to zero".into()));
    }
    let one = RatFunc::one(&f, 1);
    if v.is_zero() {
        return Ok(one);
    }
    let (_, den) = upolys(a)?;
    let mut cands: Vec<UPoly> = v
        .iter()
        .filter_map(|(pl, _)| match pl {
            Place::Finite(pi) => Some(pi.clone()),
            Place::Infinity => None,
        })
        .chain(factor(&den, &f).into_iter().map(|(g, _)| g))
        .chain(small_irreducibles(&f, max_degree))
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    cands.retain(|g| seen.insert(g.coeffs().to_vec()));
    let vecs: Vec<InvariantVector> = cands
        .iter()
        .map(|g| symbol_invariants(a, &ratfunc(&f, g, &UPoly::one()), v.var()))
        .collect::<Result<_>>()?;
    let mut places: Vec<Place> = v.iter().map(|(pl, _)| pl.clone()).collect();
    for w in &vecs {
        places.extend(w.iter().map(|(pl, _)| pl.clone()));
    }
    places.sort();
    places.dedup();
    let cols: Vec<Vec<u32>> = vecs
        .iter()
        .map(|w| places.iter().map(|pl| w.get(pl)).collect())
        .collect();
    let target: Vec<u32> = places.iter().map(|pl| v.get(pl)).collect();
    let e = solve_mod_p(&cols, &target, p).ok_or_else(|| {
        Error::NotFound(format!(
            "no b-slot from places of degree ≤ {max_degree} matches the invariants"
        ))
    })?;
    let mut b = one;
    for (g, &k) in cands.iter().zip(&e) {
        if k > 0 {
            b = b.mul(&ratfunc(&f, g, &UPoly::one()).pow(k as i64));
        }
    }
    let check = symbol_invariants(a, &b, v.var())?;
    if check != *v {
        return Err(Error::Verification(format!(
            "realized invariants {check} differ from {v}"
        )));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_ratfunc;

    fn r(f: &Arc<FiniteField>, s: &str) -> RatFunc {
        parse_ratfunc(f, &["t"], s).unwrap()
    }

    fn pl(coeffs: &[u32]) -> Place {
        Place::Finite(UPoly::new(coeffs.to_vec()))
    }

    #[test]
    fn local_examples() {
        let f = FiniteField::new(2, 1).unwrap();
        let (one, t) = (r(&f, "1"), r(&f, "t"));
        assert_eq!(local_invariant(&one, &t, &pl(&[0, 1])).unwrap(), 1);
        assert_eq!(local_invariant(&one, &t, &Place::Infinity).unwrap(), 1);
        assert_eq!(local_invariant(&one, &t, &pl(&[1, 1])).unwrap(), 0);
        assert_eq!(local_invariant(&r(&f, "1/t"), &t, &pl(&[0, 1])).unwrap(), 0);
        assert_eq!(
            local_invariant(&r(&f, "0"), &r(&f, "t^2+t+1"), &pl(&[1, 1, 1])).unwrap(),
            0
        );
    }

    #[test]
    fn vector_examples() {
        let f = FiniteField::new(2, 1).unwrap();
        let v = symbol_invariants(&r(&f, "1"), &r(&f, "t"), "t").unwrap();
        assert_eq!(v.to_string(), "{(t): 1/2, inf: 1/2}");
        assert_eq!(index_exponent(&v), (2, 2));
        let e = invariants(&f, "t", &[]).unwrap();
        assert!(e.is_zero());
        assert_eq!(index_exponent(&e), (1, 1));
        let sq = invariants(
            &f,
            "t",
            &[(r(&f, "1"), r(&f, "t")), (r(&f, "1"), r(&f, "t"))],
        )
        .unwrap();
        assert!(sq.is_zero());
    }

    #[test]
    fn index_exponent_p3() {
        let f = FiniteField::new(3, 1).unwrap();
        let mut v = InvariantVector::zero(&f, "t");
        v.set(pl(&[0, 1]), 1);
        v.set(pl(&[1, 1]), 1);
        v.set(Place::Infinity, 1);
        assert_eq!(v.total(), 0);
        assert_eq!(index_exponent(&v), (3, 3));
        let syms = realize(&v, &[]).unwrap();
        assert_eq!(invariants(&f, "t", &syms).unwrap(), v);
    }

    #[test]
    fn realize_examples() {
        let f = FiniteField::new(2, 1).unwrap();
        let mut v = InvariantVector::zero(&f, "t");
        v.set(pl(&[0, 1]), 1);
        v.set(Place::Infinity, 1);
        assert_eq!(
            realize(&v, &[r(&f, "t")]).unwrap(),
            vec![(r(&f, "1"), r(&f, "t"))]
        );
        let zero = InvariantVector::zero(&f, "t");
        assert!(realize(&zero, &[r(&f, "t")]).unwrap().is_empty());
        let mut w = InvariantVector::zero(&f, "t");
        w.set(pl(&[0, 1]), 1);
        w.set(pl(&[1, 1]), 1);
        let out = realize(&w, &[r(&f, "t^2+t")]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].1, r(&f, "t^2+t"));
        assert!(matches!(
            realize(&w, &[r(&f, "t^2")]),
            Err(Error::Infeasible(_))
        ));
        let mut bad = InvariantVector::zero(&f, "t");
        bad.set(pl(&[0, 1]), 1);
        assert!(matches!(realize(&bad, &[]), Err(Error::Infeasible(_))));
    }

    #[test]
    fn realize_with_fixed_a() {
        let f = FiniteField::new(2, 1).unwrap();
        let v = symbol_invariants(&r(&f, "1"), &r(&f, "t^2+t+1"), "t").unwrap();
        let b = realize_with_a(&v, &r(&f, "1"), 2).unwrap();
        assert_eq!(symbol_invariants(&r(&f, "1"), &b, "t").unwrap(), v);
        let w = symbol_invariants(&r(&f, "1/t"), &r(&f, "t+1"), "t").unwrap();
        assert_eq!(
            symbol_invariants(
                &r(&f, "1/t"),
                &realize_with_a(&w, &r(&f, "1/t"), 2).unwrap(),
                "t"
            )
            .unwrap(),
            w
        );
        // [1, b) has no invariant at a single place of odd degree alone
        let mut bad = InvariantVector::zero(&f, "t");
        bad.set(Place::Finite(UPoly::new(vec![1, 1, 1])), 1);
        bad.set(Place::Finite(UPoly::new(vec![0, 1])), 1);
        assert!(realize_with_a(&bad, &r(&f, "1"), 2).is_err());
    }

    #[test]
    fn normalization() {
        let f = FiniteField::new(2, 1).unwrap();
        // t^2 = ℘(t) + t
        let (a, c) = as_normalize(&r(&f, "t^2")).unwrap();
        assert_eq!((a, c), (r(&f, "t"), r(&f, "t")));
        let (a, _) = as_normalize(&r(&f, "1/t^2 + 1/t")).unwrap();
        assert!(a.is_zero());
        let (a, _) = as_normalize(&r(&f, "t^2+t")).unwrap();
        assert!(a.is_zero());
        let (a, c) = as_normalize(&r(&f, "1/t^2")).unwrap();
        assert_eq!((a, c), (r(&f, "1/t"), r(&f, "1/t")));
        let f3 = FiniteField::new(3, 1).unwrap();
        let c = r(&f3, "2/(t^2+t+2)");
        let shifted = r(&f3, "2").add(&c.pow(3).sub(&c));
        assert_eq!(
            as_normalize(&shifted).unwrap().0,
            as_normalize(&r(&f3, "2")).unwrap().0
        );
        let (b, w) = pth_power_free(&r(&f, "t^3/(t+1)")).unwrap();
        assert_eq!(b, r(&f, "t^2+t"));
        assert_eq!(b.mul(&w.pow(2)), r(&f, "t^3/(t+1)"));
    }
}
