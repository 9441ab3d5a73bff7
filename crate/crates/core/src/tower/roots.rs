//! p-th roots, Artin–Schreier preimages and root searches over a level.

use rayon::prelude::*;

use super::norm::monomials_up_to;
use super::{CheckStatus, Elem, FieldTower, StepKind};
use crate::error::{Error, Result};
use crate::ff::{Fe, FiniteField};
use crate::poly::{Mono, Poly};
use crate::ratfunc::RatFunc;
use crate::upoly::{factor, UPoly};

const MAX_SEARCH: u64 = 1 << 22;

impl FieldTower {
    /// Exact `y` with `y^p = x`, or `None` when `x` is not a p-th power.
    ///
    /// Works over `E = F_0^p`: `x ∈ K^p` iff the `E`-coordinates of `x` lie in the
    /// `E`-span of the coordinates of `ω^p` over the monomial basis `ω`.
    pub fn pth_root(&self, x: &Elem) -> Option<Elem> {
        let level = x.depth();
        if let Elem::Base(r) = x {
            return r.pth_root().map(Elem::Base);
        }
        if self.is_zero(x) {
            return Some(x.clone());
        }
        let basis = self.basis(level, 0);
        let n = basis.len();
        let frob_coords: Vec<Vec<RatFunc>> = basis
            .iter()
            .map(|w| self.base_coords(&self.frobenius(w)))
            .collect();
        let x_coords = self.base_coords(x);
        let m = self.nvars();
        let slots = (self.p() as usize).pow(m as u32);
        let mut a: Vec<Vec<Elem>> = Vec::with_capacity(n * slots);
        let mut b: Vec<Elem> = Vec::with_capacity(n * slots);
        let split: Vec<Vec<Vec<RatFunc>>> = frob_coords
            .iter()
            .map(|col| col.iter().map(|c| self.e_coords(c)).collect())
            .collect();
        for f in 0..n {
            let xf = self.e_coords(&x_coords[f]);
            for alpha in 0..slots {
                a.push(
                    (0..n)
                        .map(|e| Elem::Base(split[e][f][alpha].clone()))
                        .collect(),
                );
                b.push(Elem::Base(xf[alpha].clone()));
            }
        }
        let v = self.solve_linear(&a, &b, 0)?;
        let ys: Vec<Elem> = v
            .iter()
            .map(|ve| ve.as_base().and_then(|r| r.pth_root()).map(Elem::Base))
            .collect::<Option<_>>()?;
        let y = self.from_coords(&ys, level, 0);
        (self.frobenius(&y) == *x).then_some(y)
    }

    fn base_coords(&self, x: &Elem) -> Vec<RatFunc> {
        self.coords(x, 0)
            .into_iter()
            .map(|e| e.as_base().unwrap().clone())
            .collect()
    }

    /// Coordinates of a base element over `E = F_0^p` in the basis
    /// `t^α`, `α ∈ [0, p)^m` (first variable varies fastest).
    fn e_coords(&self, f: &RatFunc) -> Vec<RatFunc> {
        let p = self.p();
        let m = self.nvars();
        let slots = (p as usize).pow(m as u32);
        let field = self.field();
        let den_p = f.den().pow(p as u64);
        let num = f.num().mul(&f.den().pow(p as u64 - 1));
        let mut buckets: Vec<Vec<(Mono, Fe)>> = vec![Vec::new(); slots];
        for &(mono, c) in num.terms() {
            let exps = mono.exponents(m);
            let mut idx = 0;
            let mut rest = Vec::with_capacity(m);
            for &e in exps.iter().rev() {
                idx = idx * p as usize + (e % p) as usize;
                rest.push(e - e % p);
            }
            rest.reverse();
            buckets[idx].push((Mono::from_exponents(&rest), c));
        }
        buckets
            .into_iter()
            .map(|terms| {
                let pnum = Poly::from_terms(field, m, terms);
                crate::ratfunc::normalize(pnum, den_p.clone()).expect("nonzero denominator")
            })
            .collect()
    }

    /// `Some(y)` with `y^p - y = a`, plus how the answer was obtained.
    pub fn as_preimage_checked(&self, a: &Elem, bound: u32) -> (Option<Elem>, CheckStatus) {
        let level = a.depth();
        if let Elem::Base(r) = a {
            return (base_as_preimage(r).map(Elem::Base), CheckStatus::Exact);
        }
        if self.is_exponent_one_over_base(level) {
            // a^p = w^p - w with w ∈ F_0  ⟺  a = ℘(w - a)
            let ap = self.frobenius(a);
            let ap = self.down(&ap, level, 0).expect("exponent one level");
            let r = base_as_preimage(ap.as_base().unwrap()).map(|w| {
                let w = self.lift(&Elem::Base(w), 0, level);
                self.sub(&w, a)
            });
            return (r, CheckStatus::Exact);
        }
        let hit = self.search_level(level, bound, |y| self.wp(y) == *a);
        (hit, CheckStatus::Bounded(bound))
    }

    pub fn as_preimage(&self, a: &Elem, bound: u32) -> Option<Elem> {
        self.as_preimage_checked(a, bound).0
    }

    /// Every generator up to `level` has its p-th power in the base field.
    pub fn is_exponent_one_over_base(&self, level: usize) -> bool {
        (1..=level).all(|k| {
            let g = self.lift(&self.generator(k), k, level);
            self.down(&self.frobenius(&g), level, 0).is_some()
        })
    }

    /// Irreducibility status of a monic polynomial over the top level.
    pub(super) fn simple_irreducibility(&self, m: &[Elem], bound: u32) -> Result<CheckStatus> {
        let top = self.top();
        let consts: Option<Vec<Fe>> = m
            .iter()
            .map(|c| {
                self.down(c, top, 0)
                    .and_then(|b| b.as_base().unwrap().constant_value())
            })
            .collect();
        if top == 0 {
            if let Some(cs) = consts {
                let f = self.field();
                let factors = factor(&UPoly::new(cs), f);
                if factors.len() == 1 && factors[0].1 == 1 {
                    return Ok(CheckStatus::Exact);
                }
                return Err(Error::DegenerateStep(
                    "minimal polynomial is reducible".into(),
                ));
            }
        }
        let root = self.search_level(top, bound, |y| self.is_zero(&self.eval_poly(m, top, y)));
        if root.is_some() {
            return Err(Error::DegenerateStep(
                "minimal polynomial has a root".into(),
            ));
        }
        Ok(CheckStatus::Bounded(bound))
    }

    /// First element `(Σ u_e ω_e) / w` of height at most `bound` satisfying `pred`.
    pub fn search_level(
        &self,
        level: usize,
        bound: u32,
        pred: impl Fn(&Elem) -> bool + Sync,
    ) -> Option<Elem> {
        let basis = self.basis(level, 0);
        let n = basis.len();
        let q = self.field().size() as u64;
        for h in 0..=bound {
            let monos = monomials_up_to(self.nvars(), h);
            let per_poly = (q as u128).checked_pow(monos.len() as u32)?;
            let dens = monic_polys(self.field(), self.nvars(), &monos);
            let total = per_poly.checked_pow(n as u32)? * dens.len() as u128;
            if total > MAX_SEARCH as u128 {
                return None;
            }
            let per_poly = per_poly as u64;
            let dcount = dens.len() as u64;
            let hit = (0..total as usize).into_par_iter().find_map_first(|idx| {
                let mut idx = idx as u64;
                let w = &dens[(idx % dcount) as usize];
                idx /= dcount;
                let winv = RatFunc::from_poly(w.clone()).inv()?;
                let mut z = self.zero(level);
                let mut max_deg = w.total_degree().unwrap_or(0);
                for b in &basis {
                    let digit = idx % per_poly;
                    idx /= per_poly;
                    let u = poly_from_index(self.field(), self.nvars(), &monos, digit);
                    if u.is_zero() {
                        continue;
                    }
                    max_deg = max_deg.max(u.total_degree().unwrap());
                    let c = self.from_base(RatFunc::from_poly(u).mul(&winv), level);
                    z = self.add(&z, &self.mul(&c, b));
                }
                if h > 0 && max_deg < h {
                    return None;
                }
                pred(&z).then_some(z)
            });
            if hit.is_some() {
                return hit;
            }
        }
        None
    }

    /// Data of step `level` when it is an Artin–Schreier step.
    pub fn as_datum(&self, level: usize) -> Option<&Elem> {
        match &self.steps[level - 1].kind {
            StepKind::ArtinSchreier(a) => Some(a),
            _ => None,
        }
    }

    pub fn root_datum(&self, level: usize) -> Option<&Elem> {
        match &self.steps[level - 1].kind {
            StepKind::InsepRoot(b) => Some(b),
            _ => None,
        }
    }
}

fn poly_from_index(
    field: &std::sync::Arc<FiniteField>,
    nvars: usize,
    monos: &[Mono],
    mut idx: u64,
) -> Poly {
    let q = field.size() as u64;
    let mut terms = Vec::new();
    for &m in monos {
        let c = (idx % q) as u32;
        idx /= q;
        if c != 0 {
            terms.push((m, c));
        }
    }
    Poly::from_terms(field, nvars, terms)
}

/// Nonzero polynomials over the given monomials whose leading coefficient is 1.
fn monic_polys(field: &std::sync::Arc<FiniteField>, nvars: usize, monos: &[Mono]) -> Vec<Poly> {
    let q = field.size() as u64;
    let count = q.saturating_pow(monos.len() as u32).min(MAX_SEARCH);
    (1..count)
        .map(|i| poly_from_index(field, nvars, monos, i))
        .filter(|p| p.lc() == 1)
        .collect()
}

/// Exact test for `r ∈ ℘(F_q(t_1..t_m))`.
///
/// With `r = N/D` reduced, a preimage `U/V` must have `D = V^p` and
/// `N = U^p - U V^{p-1}`, which is `F_p`-linear in `U` once `V` is known.
pub fn base_as_preimage(r: &RatFunc) -> Option<RatFunc> {
    let field = r.field();
    let p = field.characteristic();
    let nv = r.nvars();
    if r.is_zero() {
        return Some(r.clone());
    }
    let v = r.den().pth_root()?;
    let n = r.num();
    let deg_v = v.total_degree().unwrap_or(0);
    let deg_n = n.total_degree().unwrap_or(0);
    let bound = deg_v.max(deg_n.div_ceil(p));
    let monos = monomials_up_to(nv, bound);
    let d = field.degree() as usize;
    let vp1 = v.pow(p as u64 - 1);
    // columns: images of g^j · m for each monomial m and F_p-basis element g^j
    let mut cols: Vec<Poly> = Vec::with_capacity(monos.len() * d);
    let mut gens: Vec<Fe> = Vec::with_capacity(d);
    for j in 0..d {
        let mut cs = vec![0u32; d];
        cs[j] = 1;
        gens.push(field.from_coefficients(&cs));
    }
    for &m in &monos {
        for &g in &gens {
            let u = Poly::monomial(field, nv, m, g);
            cols.push(u.frobenius().sub(&u.mul(&vp1)));
        }
    }
    let mut rows: Vec<Mono> = cols
        .iter()
        .flat_map(|c| c.terms().iter().map(|t| t.0))
        .collect();
    rows.extend(n.terms().iter().map(|t| t.0));
    rows.sort();
    rows.dedup();
    let coord = |poly: &Poly, row: Mono| -> Vec<u32> {
        let c = poly.terms().iter().find(|t| t.0 == row).map_or(0, |t| t.1);
        field.coefficients(c)
    };
    let mut mat: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    for &row in &rows {
        let colc: Vec<Vec<u32>> = cols.iter().map(|c| coord(c, row)).collect();
        let nc = coord(n, row);
        for k in 0..d {
            mat.push(colc.iter().map(|c| c[k]).collect());
            rhs.push(nc[k]);
        }
    }
    let sol = solve_mod_p(mat, rhs, p)?;
    let mut terms = Vec::new();
    for (i, &m) in monos.iter().enumerate() {
        let c = field.from_coefficients(&sol[i * d..(i + 1) * d]);
        if c != 0 {
            terms.push((m, c));
        }
    }
    let u = Poly::from_terms(field, nv, terms);
    let y = crate::ratfunc::normalize(u, v).ok()?;
    debug_assert_eq!(y.frobenius().sub(&y), *r);
    Some(y)
}

/// One solution of a linear system over `F_p`.
pub(crate) fn solve_mod_p(mut a: Vec<Vec<u32>>, mut b: Vec<u32>, p: u32) -> Option<Vec<u32>> {
    let ncols = a.first().map_or(0, |r| r.len());
    let inv = |x: u32| -> u32 {
        let mut r = 1u64;
        let mut base = x as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        r as u32
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..a.len()).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(row, pr);
        b.swap(row, pr);
        let iv = inv(a[row][col]);
        for x in a[row].iter_mut() {
            *x = (*x as u64 * iv as u64 % p as u64) as u32;
        }
        b[row] = (b[row] as u64 * iv as u64 % p as u64) as u32;
        let pivot = a[row].clone();
        for r in 0..a.len() {
            if r == row || a[r][col] == 0 {
                continue;
            }
            let f = a[r][col];
            for (x, y) in a[r].iter_mut().zip(&pivot).take(ncols) {
                let t = (f as u64 * *y as u64 % p as u64) as u32;
                *x = (*x + p - t) % p;
            }
            let t = (f as u64 * b[row] as u64 % p as u64) as u32;
            b[r] = (b[r] + p - t) % p;
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    if b[row..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut x = vec![0u32; ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = b[r];
    }
    Some(x)
}
