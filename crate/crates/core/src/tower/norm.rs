//! Norms, minimal polynomials and bounded norm-equation search.

use rayon::prelude::*;

use super::{Elem, FieldTower};
use crate::poly::{Mono, Poly};
use crate::ratfunc::RatFunc;
use crate::upoly::{factor, UPoly};

/// Default height bound for [`FieldTower::solve_norm`].
pub const DEFAULT_NORM_BOUND: u32 = 4;

/// Hard cap on enumerated numerator tuples per height.
const MAX_CANDIDATES: u64 = 1 << 20;

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormSearch {
    Found(Elem),
    /// no solution among candidates of height at most `bound`
    Exhausted {
        bound: u32,
    },
}

impl NormSearch {
    pub fn found(self) -> Option<Elem> {
        match self {
            NormSearch::Found(z) => Some(z),
            NormSearch::Exhausted { .. } => None,
        }
    }
}

impl FieldTower {
    /// `N_{level from / level to}(x)`
    pub fn norm(&self, x: &Elem, from: usize, to: usize) -> Elem {
        let mut cur = x.clone();
        for level in (to + 1..=from).rev() {
            let d = self.step_degree(level) as i64;
            cur = match self.down(&cur, level, level - 1) {
                Some(c) => self.pow(&c, d),
                None => {
                    let m = self.mult_matrix(&cur, level, level - 1);
                    self.det(&m, level - 1)
                }
            };
        }
        cur
    }

    /// Monic minimal polynomial of `x` (at level `from`) over level `to`,
    /// constant term first.
    pub fn min_poly(&self, x: &Elem, from: usize, to: usize) -> Vec<Elem> {
        let n = self.degree(from, to);
        let mut powers = vec![self.one(from)];
        for d in 1..=n {
            let next = self.mul(powers.last().unwrap(), x);
            let cols: Vec<Vec<Elem>> = powers.iter().map(|w| self.coords(w, to)).collect();
            let a: Vec<Vec<Elem>> = (0..n)
                .map(|i| cols.iter().map(|c| c[i].clone()).collect())
                .collect();
            if let Some(sol) = self.solve_linear(&a, &self.coords(&next, to), to) {
                let mut m: Vec<Elem> = sol.iter().map(|c| self.neg(c)).collect();
                m.push(self.one(to));
                return m;
            }
            powers.push(next);
            debug_assert!(d < n);
        }
        unreachable!("powers of an element are dependent by degree n")
    }

    /// Searches `z` at level `from` with `N_{from/to}(z) = y`, over candidates
    /// `(Σ u_e ω_e) / w` with `u_e, w` base polynomials of total degree at most
    /// `bound` and `ω_e` the monomial basis over the base field.
    pub fn solve_norm(&self, y: &Elem, from: usize, to: usize, bound: u32) -> NormSearch {
        debug_assert_eq!(y.depth(), to);
        let d = self.degree(from, to) as i64;
        if self.is_zero(y) {
            return NormSearch::Found(self.zero(from));
        }
        if d == 1 {
            return NormSearch::Found(y.clone());
        }
        let n = self.degree(from, 0);
        let basis = self.basis(from, 0);
        let q = self.field().size() as u64;
        let nv = self.nvars();
        // highest height searched completely
        let mut searched = 0;
        for h in 0..=bound {
            let monos = monomials_up_to(nv, h);
            let per_poly = match (q as u128).checked_pow(monos.len() as u32) {
                Some(v) => v,
                None => break,
            };
            let total = match per_poly.checked_pow(n as u32) {
                Some(v) if v <= MAX_CANDIDATES as u128 => v as u64,
                _ => break,
            };
            let per_poly = per_poly as u64;
            let hit = (1..total as usize).into_par_iter().find_map_first(|idx| {
                let mut idx = idx as u64;
                let mut us = Vec::with_capacity(n);
                let mut max_deg = 0;
                for _ in 0..n {
                    let digit = idx % per_poly;
                    idx /= per_poly;
                    let u = self.poly_from_index(&monos, digit);
                    if let Some(td) = u.total_degree() {
                        max_deg = max_deg.max(td);
                    }
                    us.push(u);
                }
                if h > 0 && max_deg < h {
                    return None;
                }
                let z = us.iter().zip(&basis).fold(self.zero(from), |acc, (u, b)| {
                    if u.is_zero() {
                        acc
                    } else {
                        let c = self.from_base(RatFunc::from_poly(u.clone()), from);
                        self.add(&acc, &self.mul(&c, b))
                    }
                });
                let nz = self.norm(&z, from, to);
                if self.is_zero(&nz) {
                    return None;
                }
                // N(z / w) = N(z) / w^d, so we need N(z) / y = w^d
                let r = self.div(&nz, y).ok()?;
                let rb = self.down(&r, to, 0)?;
                let rb = rb.as_base()?;
                let w = self.base_root(rb, d as u32, h)?;
                let winv = self.from_base(w.inv()?, from);
                Some(self.mul(&z, &winv))
            });
            if let Some(z) = hit {
                debug_assert!(self.norm(&z, from, to) == *y);
                return NormSearch::Found(z);
            }
            searched = h;
        }
        NormSearch::Exhausted { bound: searched }
    }

    /// [`solve_norm`](Self::solve_norm) with a shortcut when level `to` has a
    /// univariate model: after a cheap direct search, `y` is tried one prime
    /// power at a time, covering `π^e` by `π^(e div d)` times a small searched
    /// witness for `π^(e mod d)`. Falls back to the full search.
    pub fn solve_norm_factored(&self, y: &Elem, from: usize, to: usize, bound: u32) -> NormSearch {
        if let NormSearch::Found(z) = self.solve_norm(y, from, to, bound.min(1)) {
            return NormSearch::Found(z);
        }
        if let Some(z) = self.factored_witness(y, from, to, bound.min(2)) {
            return NormSearch::Found(z);
        }
        self.solve_norm(y, from, to, bound)
    }

    fn factored_witness(&self, y: &Elem, from: usize, to: usize, bound: u32) -> Option<Elem> {
        let model = self.univariate_model(to).ok()?;
        let r = model.map(y);
        let (num, den) = (r.num().to_upoly(0)?, r.den().to_upoly(0)?);
        if num.is_zero() {
            return None;
        }
        let f = model.field();
        let d = self.degree(from, to) as u32;
        let elem = |u: &UPoly| {
            model
                .unmap(self, &RatFunc::from_poly(Poly::from_upoly(f, 1, 0, u)))
                .ok()
        };
        let lc = UPoly::constant(f.div(num.lead(), den.lead())?);
        let mut z = self.solve_norm(&elem(&lc)?, from, to, 0).found()?;
        for (u, inverse) in [(&num, false), (&den, true)] {
            for (pi, e) in factor(u, f) {
                let pi = elem(&pi)?;
                let mut w = self.lift(&self.pow(&pi, (e / d) as i64), to, from);
                if e % d != 0 {
                    let part = self
                        .solve_norm(&self.pow(&pi, (e % d) as i64), from, to, bound)
                        .found()?;
                    w = self.mul(&w, &part);
                }
                z = if inverse {
                    self.div(&z, &w).ok()?
                } else {
                    self.mul(&z, &w)
                };
            }
        }
        (self.norm(&z, from, to) == *y).then_some(z)
    }

    /// A base polynomial `w` of total degree at most `h` with `w^d = r`.
    fn base_root(&self, r: &RatFunc, d: u32, h: u32) -> Option<RatFunc> {
        if !r.is_polynomial() {
            return None;
        }
        let p = self.p();
        let mut e = d;
        let mut cur = r.clone();
        while e.is_multiple_of(p) {
            cur = cur.pth_root()?;
            e /= p;
        }
        if e == 1 {
            return (cur.num().total_degree()? <= h).then_some(cur);
        }
        // general exponent: the degree pins the root's degree
        let td = cur.num().total_degree()?;
        if td % e != 0 || td / e > h {
            return None;
        }
        let monos = monomials_up_to(self.nvars(), td / e);
        let q = self.field().size() as u64;
        let count = (q as u128).checked_pow(monos.len() as u32)?;
        if count > MAX_CANDIDATES as u128 {
            return None;
        }
        // stripping p-th roots left cur = w^e
        (1..count as u64).find_map(|idx| {
            let w = RatFunc::from_poly(self.poly_from_index(&monos, idx));
            (w.pow(e as i64) == cur).then_some(w)
        })
    }

    fn poly_from_index(&self, monos: &[Mono], mut idx: u64) -> Poly {
        let q = self.field().size() as u64;
        let mut terms = Vec::new();
        for &m in monos {
            let c = (idx % q) as u32;
            idx /= q;
            if c != 0 {
                terms.push((m, c));
            }
        }
        Poly::from_terms(self.field(), self.nvars(), terms)
    }
}

/// Monomials of total degree at most `h`, in increasing order.
pub(crate) fn monomials_up_to(nvars: usize, h: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; nvars];
    fn rec(v: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if v == exps.len() {
            out.push(Mono::from_exponents(exps));
            return;
        }
        for e in 0..=left {
            exps[v] = e;
            rec(v + 1, left - e, exps, out);
        }
        exps[v] = 0;
    }
    rec(0, h, &mut exps, &mut out);
    out.sort();
    out
}
