//! Extension towers over a rational function field `F_q(t_1, ..., t_m)`.
//!
//! Level 0 is the base field; level `k` is obtained from level `k - 1` by the
//! `k`-th step. An element of level `k` is a vector of `deg(step k)`
//! coefficients at level `k - 1`, read as a polynomial in the step generator
//! reduced modulo the step's monic minimal polynomial.

mod linalg;
mod norm;
mod rebase;
mod roots;
mod univariate;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::display::paren;
use crate::error::{Error, Result};
use crate::ff::FiniteField;
use crate::poly::MAX_VARS;
use crate::ratfunc::RatFunc;

pub use norm::{NormSearch, DEFAULT_NORM_BOUND};
pub use roots::base_as_preimage;
pub use univariate::UnivariateModel;

pub const MAX_DEPTH: usize = 8;
pub const MAX_TOTAL_DEGREE: usize = 256;

/// An exact element of some tower level; the nesting depth is the level.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Base(RatFunc),
    Ext(Vec<Elem>),
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Base(r) => write!(f, "{r:?}"),
            Elem::Ext(cs) => f.debug_list().entries(cs).finish(),
        }
    }
}

impl Elem {
    pub fn depth(&self) -> usize {
        match self {
            Elem::Base(_) => 0,
            Elem::Ext(cs) => 1 + cs[0].depth(),
        }
    }

    pub fn as_base(&self) -> Option<&RatFunc> {
        match self {
            Elem::Base(r) => Some(r),
            Elem::Ext(_) => None,
        }
    }

    fn coeffs(&self) -> &[Elem] {
        match self {
            Elem::Ext(cs) => cs,
            Elem::Base(_) => panic!("base element has no generator coefficients"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepKind {
    /// `x^p - x = a`
    ArtinSchreier(Elem),
    /// `x^p = b`
    InsepRoot(Elem),
    /// monic minimal polynomial, constant term first, leading 1 included
    Simple(Vec<Elem>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtStep {
    pub name: String,
    pub kind: StepKind,
}

impl ExtStep {
    pub fn artin_schreier(name: &str, a: Elem) -> Self {
        ExtStep {
            name: name.into(),
            kind: StepKind::ArtinSchreier(a),
        }
    }

    pub fn insep_root(name: &str, b: Elem) -> Self {
        ExtStep {
            name: name.into(),
            kind: StepKind::InsepRoot(b),
        }
    }

    pub fn simple(name: &str, minpoly: Vec<Elem>) -> Self {
        ExtStep {
            name: name.into(),
            kind: StepKind::Simple(minpoly),
        }
    }
}

/// How a step's non-degeneracy was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Exact,
    /// no root found among candidates of height at most the bound
    Bounded(u32),
    /// accepted without a check (internal étale algebras)
    Unchecked,
}

#[derive(Clone)]
pub struct FieldTower {
    field: Arc<FiniteField>,
    vars: Vec<String>,
    steps: Vec<ExtStep>,
    minpolys: Vec<Vec<Elem>>,
    checks: Vec<CheckStatus>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.vars == other.vars && self.steps == other.steps
    }
}

/// Dense polynomials over a level, constant term first, trimmed.
type LPoly = Vec<Elem>;

impl FieldTower {
    pub fn rational(field: Arc<FiniteField>, vars: &[&str]) -> Result<Self> {
        if vars.is_empty() || vars.len() > MAX_VARS {
            return Err(Error::TowerLimit(format!(
                "base field needs 1..={MAX_VARS} variables"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for v in vars {
            if !seen.insert(*v) || *v == "g" {
                return Err(Error::Malformed(format!(
                    "invalid or repeated variable name `{v}`"
                )));
            }
        }
        Ok(FieldTower {
            field,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            steps: Vec::new(),
            minpolys: Vec::new(),
            checks: Vec::new(),
        })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn steps(&self) -> &[ExtStep] {
        &self.steps
    }

    pub fn checks(&self) -> &[CheckStatus] {
        &self.checks
    }

    /// Index of the top level.
    pub fn top(&self) -> usize {
        self.steps.len()
    }

    pub fn is_univariate(&self) -> bool {
        self.vars.len() == 1
    }

    /// Degree of level `level` over level `level - 1`.
    pub fn step_degree(&self, level: usize) -> usize {
        self.minpolys[level - 1].len() - 1
    }

    /// `[level from : level to]`
    pub fn degree(&self, from: usize, to: usize) -> usize {
        assert!(to <= from && from <= self.top());
        (to + 1..=from).map(|k| self.step_degree(k)).product()
    }

    pub fn minpoly(&self, level: usize) -> &[Elem] {
        &self.minpolys[level - 1]
    }

    /// Tower truncated to levels `0..=level`.
    pub fn truncate(&self, level: usize) -> FieldTower {
        FieldTower {
            field: self.field.clone(),
            vars: self.vars.clone(),
            steps: self.steps[..level].to_vec(),
            minpolys: self.minpolys[..level].to_vec(),
            checks: self.checks[..level].to_vec(),
        }
    }

    pub fn level_of_name(&self, name: &str) -> Option<usize> {
        self.steps
            .iter()
            .position(|s| s.name == name)
            .map(|k| k + 1)
    }

    fn names_in_use(&self) -> Vec<&str> {
        self.vars
            .iter()
            .map(|s| s.as_str())
            .chain(self.steps.iter().map(|s| s.name.as_str()))
            .collect()
    }

    /// Validates and appends a step (the step's data must live at the current top level).
    pub fn make_step(&self, step: ExtStep) -> Result<FieldTower> {
        self.make_step_with_bound(step, DEFAULT_NORM_BOUND.min(2))
    }

    /// As [`make_step`](Self::make_step) with an explicit root-search bound for
    /// the cases that have no exact test.
    pub fn make_step_with_bound(&self, step: ExtStep, bound: u32) -> Result<FieldTower> {
        let top = self.top();
        if self.steps.len() >= MAX_DEPTH {
            return Err(Error::TowerLimit(format!(
                "nesting depth above {MAX_DEPTH}"
            )));
        }
        if step.name.is_empty()
            || step.name == "g"
            || self.names_in_use().contains(&step.name.as_str())
        {
            return Err(Error::Malformed(format!(
                "invalid or repeated generator name `{}`",
                step.name
            )));
        }
        let check_level = |x: &Elem| -> Result<()> {
            if x.depth() != top {
                return Err(Error::LevelMismatch(format!(
                    "step data at level {} but tower top is {top}",
                    x.depth()
                )));
            }
            Ok(())
        };
        let status = match &step.kind {
            StepKind::ArtinSchreier(a) => {
                check_level(a)?;
                match self.as_preimage_checked(a, bound) {
                    (Some(_), _) => {
                        return Err(Error::DegenerateStep(format!(
                            "{} lies in the image of x^p - x",
                            self.display(a)
                        )))
                    }
                    (None, status) => status,
                }
            }
            StepKind::InsepRoot(b) => {
                check_level(b)?;
                if self.is_zero(b) {
                    return Err(Error::DegenerateStep("radicand is zero".into()));
                }
                if self.pth_root(b).is_some() {
                    return Err(Error::DegenerateStep(format!(
                        "{} is a p-th power",
                        self.display(b)
                    )));
                }
                CheckStatus::Exact
            }
            StepKind::Simple(m) => {
                m.iter().try_for_each(check_level)?;
                if m.len() < 3 {
                    return Err(Error::DegenerateStep(
                        "minimal polynomial must have degree ≥ 2".into(),
                    ));
                }
                if !self.is_one(m.last().unwrap()) {
                    return Err(Error::DegenerateStep(
                        "minimal polynomial must be monic".into(),
                    ));
                }
                self.simple_irreducibility(m, bound)?
            }
        };
        let mut out = self.push_unchecked(step);
        *out.checks.last_mut().unwrap() = status;
        let total = out.degree(out.top(), 0);
        if total > MAX_TOTAL_DEGREE {
            return Err(Error::TowerLimit(format!(
                "total degree {total} above {MAX_TOTAL_DEGREE}"
            )));
        }
        Ok(out)
    }

    /// Appends a step without any degeneracy test. The quotient ring need not be
    /// a field; multiplication and norms remain meaningful, inverses may fail.
    pub fn push_unchecked(&self, step: ExtStep) -> FieldTower {
        let top = self.top();
        let p = self.p() as usize;
        let minpoly = match &step.kind {
            StepKind::ArtinSchreier(a) => {
                let mut m = vec![self.zero(top); p + 1];
                m[0] = self.neg(a);
                m[1] = self.neg(&self.one(top));
                m[p] = self.one(top);
                m
            }
            StepKind::InsepRoot(b) => {
                let mut m = vec![self.zero(top); p + 1];
                m[0] = self.neg(b);
                m[p] = self.one(top);
                m
            }
            StepKind::Simple(m) => m.clone(),
        };
        let mut out = self.clone();
        out.steps.push(step);
        out.minpolys.push(minpoly);
        out.checks.push(CheckStatus::Unchecked);
        out
    }

    // ---- constructors -------------------------------------------------

    pub fn zero(&self, level: usize) -> Elem {
        if level == 0 {
            Elem::Base(RatFunc::zero(&self.field, self.nvars()))
        } else {
            Elem::Ext(vec![self.zero(level - 1); self.step_degree(level)])
        }
    }

    pub fn one(&self, level: usize) -> Elem {
        self.from_base(RatFunc::one(&self.field, self.nvars()), level)
    }

    pub fn from_int(&self, n: i64, level: usize) -> Elem {
        let c = self.field.from_int(n);
        self.from_base(RatFunc::constant(&self.field, self.nvars(), c), level)
    }

    pub fn from_base(&self, r: RatFunc, level: usize) -> Elem {
        self.lift(&Elem::Base(r), 0, level)
    }

    pub fn var(&self, v: usize, level: usize) -> Elem {
        self.from_base(RatFunc::var(&self.field, self.nvars(), v), level)
    }

    /// The generator of step `level`, as an element of level `level`.
    pub fn generator(&self, level: usize) -> Elem {
        let mut cs = vec![self.zero(level - 1); self.step_degree(level)];
        cs[1] = self.one(level - 1);
        Elem::Ext(cs)
    }

    /// Embeds an element of level `from` into level `to ≥ from`.
    pub fn lift(&self, x: &Elem, from: usize, to: usize) -> Elem {
        let mut cur = x.clone();
        for level in from + 1..=to {
            let mut cs = vec![self.zero(level - 1); self.step_degree(level)];
            cs[0] = cur;
            cur = Elem::Ext(cs);
        }
        cur
    }

    /// Projects to level `to ≤ from` when the element lies there.
    pub fn down(&self, x: &Elem, from: usize, to: usize) -> Option<Elem> {
        let mut cur = x.clone();
        for _ in (to + 1..=from).rev() {
            let cs = match cur {
                Elem::Ext(cs) => cs,
                Elem::Base(_) => unreachable!(),
            };
            if cs[1..].iter().any(|c| !self.is_zero(c)) {
                return None;
            }
            cur = cs.into_iter().next().unwrap();
        }
        Some(cur)
    }

    // ---- arithmetic ---------------------------------------------------

    pub fn is_zero(&self, x: &Elem) -> bool {
        match x {
            Elem::Base(r) => r.is_zero(),
            Elem::Ext(cs) => cs.iter().all(|c| self.is_zero(c)),
        }
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        match x {
            Elem::Base(r) => r.is_one(),
            Elem::Ext(cs) => self.is_one(&cs[0]) && cs[1..].iter().all(|c| self.is_zero(c)),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base(x.add(y)),
            (Elem::Ext(xs), Elem::Ext(ys)) => {
                Elem::Ext(xs.iter().zip(ys).map(|(x, y)| self.add(x, y)).collect())
            }
            _ => panic!("level mismatch in addition"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Base(x) => Elem::Base(x.neg()),
            Elem::Ext(xs) => Elem::Ext(xs.iter().map(|x| self.neg(x)).collect()),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Base(x), Elem::Base(y)) => Elem::Base(x.mul(y)),
            (Elem::Ext(xs), Elem::Ext(ys)) => {
                let level = 1 + xs[0].depth();
                // scalar fast paths
                if xs[1..].iter().all(|c| self.is_zero(c)) {
                    return Elem::Ext(ys.iter().map(|y| self.mul(&xs[0], y)).collect());
                }
                if ys[1..].iter().all(|c| self.is_zero(c)) {
                    return Elem::Ext(xs.iter().map(|x| self.mul(x, &ys[0])).collect());
                }
                let prod = self.pmul(xs, ys, level - 1);
                Elem::Ext(self.reduce_mod(prod, level))
            }
            _ => panic!("level mismatch in multiplication"),
        }
    }

    pub fn pow(&self, a: &Elem, e: i64) -> Elem {
        if e < 0 {
            let inv = self.inv(a).expect("negative power of a non-unit");
            return self.pow(&inv, -e);
        }
        let mut e = e as u64;
        let mut r = self.one(a.depth());
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        r
    }

    pub fn frobenius(&self, a: &Elem) -> Elem {
        self.pow(a, self.p() as i64)
    }

    /// `℘(x) = x^p - x`
    pub fn wp(&self, a: &Elem) -> Elem {
        self.sub(&self.frobenius(a), a)
    }

    pub fn inv(&self, a: &Elem) -> Option<Elem> {
        match a {
            Elem::Base(x) => x.inv().map(Elem::Base),
            Elem::Ext(xs) => {
                let level = 1 + xs[0].depth();
                let lv = level - 1;
                let d = xs.len();
                if xs[1..].iter().all(|c| self.is_zero(c)) {
                    let c = self.inv(&xs[0])?;
                    let mut cs = vec![self.zero(lv); d];
                    cs[0] = c;
                    return Some(Elem::Ext(cs));
                }
                let mut r0: LPoly = self.minpolys[level - 1].clone();
                let mut r1: LPoly = self.ptrim(xs.to_vec());
                let mut s0: LPoly = Vec::new();
                let mut s1: LPoly = vec![self.one(lv)];
                while r1.len() > 1 {
                    let (q, r) = self.pdivrem(&r0, &r1, lv)?;
                    let s2 = self.psub(&s0, &self.pmul(&q, &s1, lv), lv);
                    r0 = r1;
                    r1 = r;
                    s0 = s1;
                    s1 = s2;
                }
                if r1.is_empty() {
                    return None;
                }
                let c = self.inv(&r1[0])?;
                let mut out: Vec<Elem> = s1.iter().map(|s| self.mul(s, &c)).collect();
                out.resize(d, self.zero(lv));
                Some(Elem::Ext(out))
            }
        }
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let inv = self.inv(b).ok_or(Error::ZeroDenominator)?;
        Ok(self.mul(a, &inv))
    }

    fn reduce_mod(&self, mut prod: LPoly, level: usize) -> Vec<Elem> {
        let m = &self.minpolys[level - 1];
        let d = m.len() - 1;
        let lv = level - 1;
        while prod.len() > d {
            let c = prod.pop().unwrap();
            if self.is_zero(&c) {
                continue;
            }
            let shift = prod.len() - d;
            for (i, mi) in m.iter().enumerate().take(d) {
                if self.is_zero(mi) {
                    continue;
                }
                prod[shift + i] = self.sub(&prod[shift + i], &self.mul(&c, mi));
            }
        }
        prod.resize(d, self.zero(lv));
        prod
    }

    // ---- polynomials over a level --------------------------------------

    fn ptrim(&self, mut a: LPoly) -> LPoly {
        while a.last().is_some_and(|c| self.is_zero(c)) {
            a.pop();
        }
        a
    }

    fn padd(&self, a: &[Elem], b: &[Elem], lv: usize) -> LPoly {
        let n = a.len().max(b.len());
        let z = self.zero(lv);
        let v = (0..n)
            .map(|k| self.add(a.get(k).unwrap_or(&z), b.get(k).unwrap_or(&z)))
            .collect();
        self.ptrim(v)
    }

    fn psub(&self, a: &[Elem], b: &[Elem], lv: usize) -> LPoly {
        let nb: Vec<Elem> = b.iter().map(|x| self.neg(x)).collect();
        self.padd(a, &nb, lv)
    }

    fn pmul(&self, a: &[Elem], b: &[Elem], lv: usize) -> LPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut v = vec![self.zero(lv); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.is_zero(y) {
                    continue;
                }
                v[i + j] = self.add(&v[i + j], &self.mul(x, y));
            }
        }
        self.ptrim(v)
    }

    fn pdivrem(&self, a: &[Elem], b: &[Elem], lv: usize) -> Option<(LPoly, LPoly)> {
        let db = b.len() - 1;
        let inv = self.inv(&b[db])?;
        let mut r = a.to_vec();
        if r.len() <= db {
            return Some((Vec::new(), self.ptrim(r)));
        }
        let mut q = vec![self.zero(lv); r.len() - db];
        for k in (db..r.len()).rev() {
            let c = self.mul(&r[k], &inv);
            if self.is_zero(&c) {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let idx = k - db + j;
                r[idx] = self.sub(&r[idx], &self.mul(&c, bj));
            }
            q[k - db] = c;
        }
        r.truncate(db);
        Some((self.ptrim(q), self.ptrim(r)))
    }

    /// Evaluates a polynomial over level `lv` (lifted) at an element of level `level ≥ lv`.
    pub fn eval_poly(&self, poly: &[Elem], lv: usize, x: &Elem) -> Elem {
        let level = x.depth();
        let mut acc = self.zero(level);
        for c in poly.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.lift(c, lv, level));
        }
        acc
    }

    // ---- coordinates ----------------------------------------------------

    /// Coordinates over level `to` in the monomial basis of generators
    /// (lower generators vary fastest).
    pub fn coords(&self, x: &Elem, to: usize) -> Vec<Elem> {
        if x.depth() == to {
            return vec![x.clone()];
        }
        x.coeffs().iter().flat_map(|c| self.coords(c, to)).collect()
    }

    pub fn from_coords(&self, cs: &[Elem], from: usize, to: usize) -> Elem {
        if from == to {
            return cs[0].clone();
        }
        let d = self.step_degree(from);
        let block = cs.len() / d;
        Elem::Ext(
            (0..d)
                .map(|j| self.from_coords(&cs[j * block..(j + 1) * block], from - 1, to))
                .collect(),
        )
    }

    /// Basis of level `from` over level `to`, matching [`coords`](Self::coords).
    pub fn basis(&self, from: usize, to: usize) -> Vec<Elem> {
        let n = self.degree(from, to);
        (0..n)
            .map(|k| {
                let mut cs = vec![self.zero(to); n];
                cs[k] = self.one(to);
                self.from_coords(&cs, from, to)
            })
            .collect()
    }

    // ---- printing -----------------------------------------------------

    pub fn display(&self, x: &Elem) -> String {
        match x {
            Elem::Base(r) => r.display(&self.vars),
            Elem::Ext(cs) => {
                let level = x.depth();
                let name = &self.steps[level - 1].name;
                let mut parts = Vec::new();
                for (j, c) in cs.iter().enumerate() {
                    if self.is_zero(c) {
                        continue;
                    }
                    let gen = match j {
                        0 => String::new(),
                        1 => name.clone(),
                        _ => format!("{name}^{j}"),
                    };
                    let cstr = self.display(c);
                    parts.push(if j == 0 {
                        cstr
                    } else if self.is_one(c) {
                        gen
                    } else {
                        format!("{}*{gen}", paren(&cstr))
                    });
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            }
        }
    }

    /// Text form `GF(q)(t) ; AS i: i^2+i = 1/t ; ROOT s: s^2 = t`.
    pub fn describe(&self) -> String {
        let p = self.p();
        let mut out = format!("GF({})({})", self.field.size(), self.vars.join(","));
        for (k, step) in self.steps.iter().enumerate() {
            let n = &step.name;
            let lower = self.truncate(k);
            let text = match &step.kind {
                StepKind::ArtinSchreier(a) => {
                    let lhs = if p == 2 {
                        format!("{n}^2+{n}")
                    } else {
                        format!("{n}^{p}-{n}")
                    };
                    format!("AS {n}: {lhs} = {}", lower.display(a))
                }
                StepKind::InsepRoot(b) => format!("ROOT {n}: {n}^{p} = {}", lower.display(b)),
                StepKind::Simple(m) => {
                    let mut terms = Vec::new();
                    for (j, c) in m.iter().enumerate().rev() {
                        if lower.is_zero(c) {
                            continue;
                        }
                        let g = match j {
                            0 => String::new(),
                            1 => n.clone(),
                            _ => format!("{n}^{j}"),
                        };
                        let cs = lower.display(c);
                        terms.push(if j == 0 {
                            paren(&cs)
                        } else if lower.is_one(c) {
                            g
                        } else {
                            format!("{}*{g}", paren(&cs))
                        });
                    }
                    format!("ALG {n}: {} = 0", terms.join("+"))
                }
            };
            out.push_str(" ; ");
            out.push_str(&text);
        }
        out
    }
}

#[cfg(test)]
mod tests;
