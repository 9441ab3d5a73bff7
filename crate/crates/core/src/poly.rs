//! Sparse multivariate polynomials over `F_q` in graded lexicographic order.
//!
//! Monomials are packed into a `u64`: the top 16 bits hold the total degree,
//! followed by 12 bits per variable (first variable most significant). Integer
//! comparison of packed monomials is therefore grlex comparison, and monomial
//! multiplication is integer addition.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ff::{Fe, FiniteField};
use crate::upoly::UPoly;

pub const MAX_VARS: usize = 4;
pub const MAX_EXPONENT: u32 = (1 << 12) - 1;
const VAR_BITS: u32 = 12;
const TOTAL_SHIFT: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono(u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    fn shift(var: usize) -> u32 {
        VAR_BITS * (MAX_VARS - 1 - var) as u32
    }

    pub fn var(var: usize, exp: u32) -> Mono {
        assert!(
            var < MAX_VARS && exp <= MAX_EXPONENT,
            "monomial out of range"
        );
        Mono(((exp as u64) << Self::shift(var)) | ((exp as u64) << TOTAL_SHIFT))
    }

    pub fn from_exponents(exps: &[u32]) -> Mono {
        exps.iter()
            .enumerate()
            .fold(Mono::ONE, |m, (v, &e)| m.mul(Mono::var(v, e)))
    }

    pub fn exp(self, var: usize) -> u32 {
        ((self.0 >> Self::shift(var)) & MAX_EXPONENT as u64) as u32
    }

    pub fn total(self) -> u32 {
        (self.0 >> TOTAL_SHIFT) as u32
    }

    pub fn exponents(self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|v| self.exp(v)).collect()
    }

    #[inline]
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Mono) -> Mono {
        debug_assert!((0..MAX_VARS).all(|v| self.exp(v) + other.exp(v) <= MAX_EXPONENT));
        Mono(self.0 + other.0)
    }

    pub fn divides(self, other: Mono) -> bool {
        (0..MAX_VARS).all(|v| self.exp(v) <= other.exp(v))
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient_of(self, other: Mono) -> Mono {
        Mono(other.0 - self.0)
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }
}

/// A polynomial in `nvars` variables; terms sorted by descending monomial.
#[derive(Clone)]
pub struct Poly {
    field: Arc<FiniteField>,
    nvars: usize,
    terms: Vec<(Mono, Fe)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}
impl Eq for Poly {}

impl Hash for Poly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.nvars.hash(state);
        self.terms.hash(state);
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by leading monomials, then coefficients, term by term.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms
            .len()
            .cmp(&other.terms.len())
            .then_with(|| self.terms.cmp(&other.terms))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|v| format!("x{v}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

impl Poly {
    pub fn zero(field: &Arc<FiniteField>, nvars: usize) -> Self {
        assert!(
            nvars <= MAX_VARS,
            "at most {MAX_VARS} variables are supported"
        );
        Poly {
            field: field.clone(),
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: &Arc<FiniteField>, nvars: usize, c: Fe) -> Self {
        let mut p = Self::zero(field, nvars);
        if c != 0 {
            p.terms.push((Mono::ONE, c));
        }
        p
    }

    pub fn one(field: &Arc<FiniteField>, nvars: usize) -> Self {
        Self::constant(field, nvars, 1)
    }

    pub fn var(field: &Arc<FiniteField>, nvars: usize, v: usize) -> Self {
        assert!(v < nvars);
        Poly {
            field: field.clone(),
            nvars,
            terms: vec![(Mono::var(v, 1), 1)],
        }
    }

    pub fn monomial(field: &Arc<FiniteField>, nvars: usize, m: Mono, c: Fe) -> Self {
        let mut p = Self::zero(field, nvars);
        if c != 0 {
            p.terms.push((m, c));
        }
        p
    }

    /// Builds from arbitrary (possibly repeated, unordered) terms.
    pub fn from_terms(field: &Arc<FiniteField>, nvars: usize, mut terms: Vec<(Mono, Fe)>) -> Self {
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Mono, Fe)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(last.1, c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| t.1 != 0);
        Poly {
            field: field.clone(),
            nvars,
            terms: out,
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Mono, Fe)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (Mono::ONE, 1)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    pub fn constant_value(&self) -> Option<Fe> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(Mono, Fe)> {
        self.terms.first().copied()
    }

    pub fn lc(&self) -> Fe {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.total()).max()
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.iter().map(|t| t.0.exp(v)).max()
    }

    /// Variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.iter().any(|t| t.0.exp(v) > 0))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = self.terms[i];
            let (mb, cb) = other.terms[j];
            match ma.cmp(&mb) {
                Ordering::Greater => {
                    out.push((ma, ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb, cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(ca, cb);
                    if c != 0 {
                        out.push((ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|&(m, c)| (m, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Fe) -> Self {
        if c == 0 {
            return Self::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|&(m, x)| (m, f.mul(x, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: Mono, c: Fe) -> Self {
        if c == 0 {
            return Self::zero(&self.field, self.nvars);
        }
        let f = &self.field;
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|&(mm, x)| (mm.mul(m), f.mul(x, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms[0];
            return other.mul_term(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = other.terms[0];
            return self.mul_term(m, c);
        }
        let f = &self.field;
        let mut prod = Vec::with_capacity(self.terms.len() * other.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &other.terms {
                prod.push((ma.mul(mb), f.mul(ca, cb)));
            }
        }
        Self::from_terms(&self.field, self.nvars, prod)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Frobenius `x ↦ x^p` computed termwise.
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic();
        let terms = self
            .terms
            .iter()
            .map(|&(m, c)| {
                let exps: Vec<u32> = m.exponents(self.nvars).iter().map(|e| e * p).collect();
                (Mono::from_exponents(&exps), f.pow(c, p as u64))
            })
            .collect();
        Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    /// The polynomial `h` with `h^p = self`, when every exponent is divisible by `p`.
    pub fn pth_root(&self) -> Option<Self> {
        let f = &self.field;
        let p = f.characteristic();
        let mut terms = Vec::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            let exps = m.exponents(self.nvars);
            if exps.iter().any(|e| e % p != 0) {
                return None;
            }
            let root: Vec<u32> = exps.iter().map(|e| e / p).collect();
            terms.push((Mono::from_exponents(&root), f.pth_root(c)));
        }
        Some(Poly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        })
    }

    pub fn derivative(&self, v: usize) -> Self {
        let f = &self.field;
        let terms = self
            .terms
            .iter()
            .filter_map(|&(m, c)| {
                let e = m.exp(v);
                if e == 0 {
                    return None;
                }
                let coef = f.mul(c, f.from_int(e as i64));
                let mut exps = m.exponents(self.nvars);
                exps[v] -= 1;
                Some((Mono::from_exponents(&exps), coef))
            })
            .collect();
        Self::from_terms(&self.field, self.nvars, terms)
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        if self.is_zero() {
            return Some(self.clone());
        }
        if d.terms.len() == 1 {
            let inv = self.field.inv(dc).unwrap();
            let mut terms = Vec::with_capacity(self.terms.len());
            for &(m, c) in &self.terms {
                if !dm.divides(m) {
                    return None;
                }
                terms.push((dm.quotient_of(m), self.field.mul(c, inv)));
            }
            return Some(Poly {
                field: self.field.clone(),
                nvars: self.nvars,
                terms,
            });
        }
        let inv = self.field.inv(dc).unwrap();
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.leading() {
            if !dm.divides(m) {
                return None;
            }
            let qm = dm.quotient_of(m);
            let qc = self.field.mul(c, inv);
            quot.push((qm, qc));
            rem = rem.sub(&d.mul_term(qm, qc));
        }
        Some(Self::from_terms(&self.field, self.nvars, quot))
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).unwrap()),
        }
    }

    /// Dense univariate image in variable `v`; `None` if other variables occur.
    pub fn to_upoly(&self, v: usize) -> Option<UPoly> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut coeffs = vec![0; deg + 1];
        for &(m, c) in &self.terms {
            if m.total() != m.exp(v) {
                return None;
            }
            coeffs[m.exp(v) as usize] = c;
        }
        Some(UPoly::new(coeffs))
    }

    pub fn from_upoly(field: &Arc<FiniteField>, nvars: usize, v: usize, u: &UPoly) -> Self {
        let terms = u
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (Mono::var(v, k as u32), c))
            .collect();
        Poly {
            field: field.clone(),
            nvars,
            terms,
        }
    }

    /// Coefficients with respect to variable `v` (index = power of `v`).
    pub fn coefficients_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v).unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Mono, Fe)>> = vec![Vec::new(); deg + 1];
        for &(m, c) in &self.terms {
            let e = m.exp(v);
            let stripped = Mono::var(v, e).quotient_of(m);
            buckets[e as usize].push((stripped, c));
        }
        buckets
            .into_iter()
            .map(|t| Self::from_terms(&self.field, self.nvars, t))
            .collect()
    }

    fn from_coefficients_in(field: &Arc<FiniteField>, nvars: usize, v: usize, cs: &[Poly]) -> Self {
        let mut acc = Self::zero(field, nvars);
        for (k, c) in cs.iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&c.mul_term(Mono::var(v, k as u32), 1));
            }
        }
        acc
    }

    /// Substitutes polynomials for every variable (targets may live in another ring).
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let target = &images[0];
        let mut acc = Poly::zero(target.field(), target.nvars());
        let mut cache: Vec<Vec<Poly>> = vec![Vec::new(); self.nvars];
        for &(m, c) in &self.terms {
            let mut t = Poly::constant(target.field(), target.nvars(), c);
            for (v, cached) in cache.iter_mut().enumerate() {
                let e = m.exp(v) as usize;
                if e == 0 {
                    continue;
                }
                while cached.len() <= e {
                    let next = match cached.last() {
                        None => Poly::one(target.field(), target.nvars()),
                        Some(prev) => prev.mul(&images[v]),
                    };
                    cached.push(next);
                }
                t = t.mul(&cached[e]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Applies a map to every coefficient (e.g. a field embedding).
    pub fn map_coefficients(&self, field: &Arc<FiniteField>, map: impl Fn(Fe) -> Fe) -> Poly {
        let terms = self.terms.iter().map(|&(m, c)| (m, map(c))).collect();
        Poly::from_terms(field, self.nvars, terms)
    }

    /// Monic gcd; zero only if both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one(&self.field, self.nvars);
        }
        let mut vars = self.support_vars();
        for v in other.support_vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars.sort_unstable();
        if vars.len() == 1 {
            let v = vars[0];
            let a = self.to_upoly(v).unwrap();
            let b = other.to_upoly(v).unwrap();
            return Self::from_upoly(&self.field, self.nvars, v, &a.gcd(&b, &self.field));
        }
        // main variable: the last one that occurs
        let main = *vars.last().unwrap();
        let ca = self.coefficients_in(main);
        let cb = other.coefficients_in(main);
        let cont_a = content(&ca);
        let cont_b = content(&cb);
        let cont = cont_a.gcd(&cont_b);
        if self.degree_in(main) == Some(0) || other.degree_in(main) == Some(0) {
            // one side is free of the main variable: gcd divides its content
            let (free, other_side) = if self.degree_in(main) == Some(0) {
                (self, &cb)
            } else {
                (other, &ca)
            };
            let c = content(other_side);
            return free.gcd(&c).monic();
        }
        let mut a = primitive(&ca, &cont_a);
        let mut b = primitive(&cb, &cont_b);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = pseudo_rem(&a, &b);
            if r.is_empty() {
                break;
            }
            if r.len() == 1 {
                // constant in the main variable: primitive parts are coprime
                return cont.monic();
            }
            let rc = content(&r);
            a = b;
            b = primitive(&r, &rc);
        }
        let g = Self::from_coefficients_in(&self.field, self.nvars, main, &b);
        g.mul(&cont).monic()
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, &(m, c)) in self.terms.iter().enumerate() {
            let coef = crate::display::fe_to_string(&self.field, c);
            let needs_paren = coef.contains('+') || coef.contains('-');
            if k > 0 {
                out.push('+');
            }
            let mut factors: Vec<String> = Vec::new();
            if !(c == 1 && !m.is_one()) {
                factors.push(if needs_paren && !m.is_one() {
                    format!("({coef})")
                } else {
                    coef
                });
            }
            for (v, name) in names.iter().enumerate().take(self.nvars) {
                match m.exp(v) {
                    0 => {}
                    1 => factors.push(name.clone()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn content(cs: &[Poly]) -> Poly {
    let mut g: Option<Poly> = None;
    for c in cs.iter().filter(|c| !c.is_zero()) {
        g = Some(match g {
            None => c.monic(),
            Some(acc) => acc.gcd(c),
        });
        if g.as_ref().is_some_and(|x| x.is_one()) {
            break;
        }
    }
    g.expect("content of zero polynomial")
}

fn primitive(cs: &[Poly], cont: &Poly) -> Vec<Poly> {
    cs.iter()
        .map(|c| c.div_exact(cont).expect("content divides coefficients"))
        .collect()
}

/// Pseudo-remainder in recursive (coefficient-vector) form; returns a trimmed vector.
fn pseudo_rem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut r: Vec<Poly> = a.to_vec();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = r[shift + k].sub(&bk.mul(&lr));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

/// Parses a non-negative integer exponent list into a monomial, checking bounds.
pub fn checked_mono(exps: &[u32]) -> Result<Mono> {
    if exps.len() > MAX_VARS || exps.iter().any(|&e| e > MAX_EXPONENT) {
        return Err(Error::Malformed("monomial exponent out of range".into()));
    }
    Ok(Mono::from_exponents(exps))
}

/// Factors a univariate polynomial into monic irreducibles with multiplicities.
/// The product of the factors times the leading coefficient recovers `f`.
pub fn factor_univariate(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let vars = f.support_vars();
    if vars.len() > 1 {
        return Err(Error::NotUnivariate);
    }
    let v = vars.first().copied().unwrap_or(0);
    let u = f.to_upoly(v).unwrap();
    Ok(crate::upoly::factor(&u, f.field())
        .into_iter()
        .map(|(g, m)| (Poly::from_upoly(f.field(), f.nvars(), v, &g), m))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(f: &Arc<FiniteField>, n: usize) -> Vec<Poly> {
        (0..n).map(|v| Poly::var(f, n, v)).collect()
    }

    #[test]
    fn grlex_packing() {
        let a = Mono::from_exponents(&[2, 0]);
        let b = Mono::from_exponents(&[1, 1]);
        let c = Mono::from_exponents(&[0, 3]);
        assert!(c > a && a > b);
        assert_eq!(a.mul(b).exponents(2), vec![3, 1]);
    }

    #[test]
    fn bivariate_gcd() {
        let f = FiniteField::new(2, 1).unwrap();
        let x = vars(&f, 2);
        let one = Poly::one(&f, 2);
        let g = x[0].mul(&x[1]).add(&one); // t1 t2 + 1
        let a = g.mul(&x[0].add(&x[1]));
        let b = g.mul(&x[0].mul(&x[0]).add(&x[1]));
        assert_eq!(a.gcd(&b), g);
        assert!(x[0].gcd(&x[1]).is_one());
    }

    #[test]
    fn trivariate_gcd_with_content() {
        let f = FiniteField::new(3, 1).unwrap();
        let x = vars(&f, 3);
        let one = Poly::one(&f, 3);
        let g = x[0].mul(&x[2]).add(&x[1]).add(&one);
        let h = x[0].add(&one);
        let a = g.mul(&h).mul(&x[2].add(&x[0]));
        let b = g.mul(&h).mul(&x[1].mul(&x[2]).sub(&one));
        assert_eq!(a.gcd(&b), g.mul(&h).monic());
    }

    #[test]
    fn exact_division() {
        let f = FiniteField::new(5, 1).unwrap();
        let x = vars(&f, 2);
        let a = x[0].add(&x[1]).pow(3);
        let b = x[0].add(&x[1]);
        assert_eq!(a.div_exact(&b), Some(b.pow(2)));
        assert_eq!(x[0].div_exact(&x[1]), None);
    }
}
