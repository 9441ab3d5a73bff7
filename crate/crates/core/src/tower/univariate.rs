//! Identification of suitable tower levels over `F_q(t)` with a rational
//! function field `F_Q(u)`.
//!
//! A level qualifies when every step is either a constant-field extension
//! (Artin–Schreier or simple step whose data are constants) or a p-th root
//! step. Each root step replaces the variable by its p-th root, since
//! `F(b^{1/p}) = F(t^{1/p})` for every `b ∉ F^p` when `[F : F^p] = p`.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Elem, FieldTower, StepKind};
use crate::error::{Error, Result};
use crate::ff::{Fe, FiniteField};
use crate::ratfunc::RatFunc;

#[derive(Clone, Debug)]
pub struct UnivariateModel {
    field: Arc<FiniteField>,
    var: String,
    level: usize,
    /// `t ↦ u^(p^roots)`
    roots: u32,
    embed: Vec<Fe>,
    gens: Vec<RatFunc>,
}

impl UnivariateModel {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn root_steps(&self) -> u32 {
        self.roots
    }

    /// Image of a constant of the base field.
    pub fn embed_constant(&self, c: Fe) -> Fe {
        self.embed[c as usize]
    }

    /// Image of an element of a level at most [`level`](Self::level).
    pub fn map(&self, x: &Elem) -> RatFunc {
        match x {
            Elem::Base(r) => {
                let e = &self.embed;
                let r = r.map_coefficients(&self.field, |c| e[c as usize]);
                if self.roots == 0 {
                    return r;
                }
                let p = self.field.characteristic() as u64;
                let u = RatFunc::var(&self.field, 1, 0).pow(p.pow(self.roots) as i64);
                r.substitute(&[u]).expect("substitution into a field")
            }
            Elem::Ext(cs) => {
                let g = &self.gens[x.depth() - 1];
                let mut acc = RatFunc::zero(&self.field, 1);
                for c in cs.iter().rev() {
                    acc = acc.mul(g).add(&self.map(c));
                }
                acc
            }
        }
    }

    pub fn var_names(&self) -> Vec<String> {
        vec![self.var.clone()]
    }

    /// Inverse of [`map`](Self::map) on the model level of `tower`. The model
    /// variable is `t^(1/p^r)`, recovered by repeated p-th roots in the tower.
    pub fn unmap(&self, tower: &FieldTower, r: &RatFunc) -> Result<Elem> {
        let lv = self.level;
        let mut u = tower.var(0, lv);
        for _ in 0..self.roots {
            u = tower
                .pth_root(&u)
                .ok_or_else(|| Error::Backend("model variable has no tower preimage".into()))?;
        }
        let mut table: HashMap<Fe, Elem> = HashMap::new();
        for c in tower.constant_elems(lv) {
            let img = self
                .map(&c)
                .constant_value()
                .expect("constants map to constants");
            table.entry(img).or_insert(c);
        }
        let poly = |p: &crate::poly::Poly| -> Result<Elem> {
            let mut acc = tower.zero(lv);
            for (m, c) in p.terms() {
                let cc = table.get(c).ok_or_else(|| {
                    Error::Backend("constant outside the tower's constant field".into())
                })?;
                acc = tower.add(&acc, &tower.mul(cc, &tower.pow(&u, m.exp(0) as i64)));
            }
            Ok(acc)
        };
        tower.div(&poly(r.num())?, &poly(r.den())?)
    }
}

impl FieldTower {
    /// All elements of the constant field at `level`.
    fn constant_elems(&self, level: usize) -> Vec<Elem> {
        if level == 0 {
            let f = self.field();
            return (0..f.size())
                .map(|c| Elem::Base(RatFunc::constant(f, self.nvars(), c)))
                .collect();
        }
        let below = self.constant_elems(level - 1);
        let d = self.step_degree(level);
        let zero = self.zero(level - 1);
        if matches!(self.steps[level - 1].kind, StepKind::InsepRoot(_)) {
            return below
                .into_iter()
                .map(|c| {
                    let mut cs = vec![zero.clone(); d];
                    cs[0] = c;
                    Elem::Ext(cs)
                })
                .collect();
        }
        let mut out: Vec<Vec<Elem>> = vec![Vec::new()];
        for _ in 0..d {
            out = out
                .into_iter()
                .flat_map(|pre| {
                    below
                        .iter()
                        .map(move |c| [pre.clone(), vec![c.clone()]].concat())
                })
                .collect();
        }
        out.into_iter().map(Elem::Ext).collect()
    }

    /// Whether `x` (at `level`) lies in the constant field, given which steps
    /// up to `level` are constant steps.
    fn is_constant_elem(&self, x: &Elem, constant_steps: &[bool]) -> bool {
        match x {
            Elem::Base(r) => r.constant_value().is_some(),
            Elem::Ext(cs) => {
                let k = x.depth();
                if constant_steps[k - 1] {
                    cs.iter().all(|c| self.is_constant_elem(c, constant_steps))
                } else {
                    self.is_constant_elem(&cs[0], constant_steps)
                        && cs[1..].iter().all(|c| self.is_zero(c))
                }
            }
        }
    }

    pub fn univariate_model(&self, level: usize) -> Result<UnivariateModel> {
        if !self.is_univariate() {
            return Err(Error::NotUnivariate);
        }
        let mut constant_steps = Vec::with_capacity(level);
        let mut const_degree = 1u32;
        let mut roots = 0u32;
        for k in 1..=level {
            let is_const = match &self.steps[k - 1].kind {
                StepKind::InsepRoot(_) => false,
                _ => self
                    .minpoly(k)
                    .iter()
                    .all(|c| self.is_constant_elem(c, &constant_steps)),
            };
            match (&self.steps[k - 1].kind, is_const) {
                (StepKind::InsepRoot(_), _) => roots += 1,
                (_, true) => const_degree *= self.step_degree(k) as u32,
                (_, false) => {
                    return Err(Error::Backend(format!(
                        "level {level} is not a rational function field: step `{}` is not a constant extension",
                        self.steps[k - 1].name
                    )))
                }
            }
            constant_steps.push(is_const);
        }
        let base = self.field();
        let big = FiniteField::new(base.characteristic(), base.degree() * const_degree)
            .map_err(|_| Error::Backend("constant field of the model is too large".into()))?;
        let embed = embedding(base, &big);
        let var = if roots == 0 {
            self.vars[0].clone()
        } else {
            let single = (1..=level).find_map(|k| self.root_datum(k).map(|b| (k, b)));
            match single {
                Some((k, b)) if roots == 1 && *b == self.var(0, k - 1) => {
                    self.steps[k - 1].name.clone()
                }
                _ => "u".to_string(),
            }
        };
        let mut model = UnivariateModel {
            field: big,
            var,
            level,
            roots,
            embed,
            gens: Vec::with_capacity(level),
        };
        for k in 1..=level {
            let g = match &self.steps[k - 1].kind {
                StepKind::InsepRoot(b) => model
                    .map(b)
                    .pth_root()
                    .ok_or_else(|| Error::Backend("p-th root step has no image".into()))?,
                _ => {
                    let cs: Vec<Fe> = self
                        .minpoly(k)
                        .iter()
                        .map(|c| {
                            model
                                .map(c)
                                .constant_value()
                                .expect("constant coefficients")
                        })
                        .collect();
                    let f = &model.field;
                    let root = f
                        .elements()
                        .find(|&x| cs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c)) == 0)
                        .ok_or_else(|| {
                            Error::Backend("constant step has no root in the model field".into())
                        })?;
                    RatFunc::constant(f, 1, root)
                }
            };
            model.gens.push(g);
        }
        Ok(model)
    }
}

/// The embedding `F_q → F_Q` sending the generator to the smallest root of its
/// minimal polynomial.
fn embedding(small: &FiniteField, big: &Arc<FiniteField>) -> Vec<Fe> {
    if small.degree() == 1 {
        return (0..small.size()).collect();
    }
    let m = small.modulus();
    let root = big
        .elements()
        .find(|&x| {
            m.iter()
                .rev()
                .fold(0, |acc, &c| big.add(big.mul(acc, x), c))
                == 0
        })
        .expect("subfield embeds");
    let powers: Vec<Fe> = (0..small.degree())
        .map(|k| big.pow(root, k as u64))
        .collect();
    (0..small.size())
        .map(|c| {
            small
                .coefficients(c)
                .iter()
                .zip(&powers)
                .fold(0, |acc, (&a, &g)| {
                    big.add(acc, big.mul(big.from_int(a as i64), g))
                })
        })
        .collect()
}
