//! Replayable equivalence certificates.
//!
//! A certificate is a tower description plus a list of rewrite steps. Main
//! steps form a chain (each `after` is the next `before`); side steps record
//! hypotheses such as "this class splits over `K`" and are checked on their
//! own. Every step is re-derived from its witnesses by field arithmetic, or,
//! for `AlbertDecomp` with `proof_ref = "invariants"`, by equality of local
//! invariants on the univariate backend.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::parse::parse_tower;
use crate::symbol::{BrauerExpr, Symbol};
use crate::tower::{Elem, FieldTower, StepKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepType {
    MergeSameA,
    SplitNormWitness,
    ASShift,
    PthPowerShift,
    FrobeniusPush,
    ScalarExtend,
    AlbertDecomp,
    Reorder,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    #[default]
    Main,
    Side,
}

fn is_main(r: &Role) -> bool {
    *r == Role::Main
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStep {
    pub kind: StepType,
    #[serde(default, skip_serializing_if = "is_main")]
    pub role: Role,
    pub level: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to_level: Option<usize>,
    pub before: String,
    pub after: String,
    #[serde(default)]
    pub witnesses: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub tower: String,
    pub steps: Vec<CertStep>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject { step: usize, reason: String },
    Malformed { step: Option<usize>, reason: String },
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        *self == Verdict::Accept
    }
}

/// An expression in a certificate with its tower level.
pub type Endpoint<'a> = (usize, &'a str);

impl Certificate {
    pub fn new(tower: &FieldTower) -> Self {
        Certificate {
            tower: tower.describe(),
            steps: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(format!("certificate JSON: {e}")))
    }

    pub fn main_steps(&self) -> impl Iterator<Item = &CertStep> {
        self.steps.iter().filter(|s| s.role == Role::Main)
    }

    /// First `before` and last `after` of the main chain with their levels.
    pub fn endpoints(&self) -> Option<(Endpoint<'_>, Endpoint<'_>)> {
        let first = self.main_steps().next()?;
        let last = self.main_steps().last()?;
        Some((
            (first.level, &first.before),
            (last.to_level.unwrap_or(last.level), &last.after),
        ))
    }
}

/// Helper for producing certificates from typed data.
pub struct CertBuilder<'a> {
    pub tower: &'a FieldTower,
    pub cert: Certificate,
}

impl<'a> CertBuilder<'a> {
    pub fn new(tower: &'a FieldTower) -> Self {
        CertBuilder {
            tower,
            cert: Certificate::new(tower),
        }
    }

    pub fn elem(&self, x: &Elem) -> Value {
        Value::String(self.tower.display(x))
    }

    pub fn push(
        &mut self,
        kind: StepType,
        role: Role,
        before: &BrauerExpr,
        after: &BrauerExpr,
        witnesses: BTreeMap<String, Value>,
    ) {
        let to_level = (after.level != before.level).then_some(after.level);
        self.cert.steps.push(CertStep {
            kind,
            role,
            level: before.level,
            to_level,
            before: self.tower.expr_to_string(before),
            after: self.tower.expr_to_string(after),
            witnesses,
        });
    }

    /// Appends a merge step when it changes the expression; returns the result.
    pub fn merge(&mut self, e: &BrauerExpr) -> BrauerExpr {
        let m = self.tower.merge_same_a(e);
        if m != *e {
            self.push(StepType::MergeSameA, Role::Main, e, &m, BTreeMap::new());
        }
        m
    }

    pub fn finish(self) -> Certificate {
        self.cert
    }
}

struct Ctx {
    tower: FieldTower,
}

type StepResult = std::result::Result<(), StepError>;

enum StepError {
    Reject(String),
    Malformed(String),
}

impl From<Error> for StepError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. }
            | Error::UnknownVariable(_)
            | Error::LevelMismatch(_)
            | Error::Malformed(_) => StepError::Malformed(e.to_string()),
            other => StepError::Reject(other.to_string()),
        }
    }
}

fn reject<T>(msg: impl Into<String>) -> std::result::Result<T, StepError> {
    Err(StepError::Reject(msg.into()))
}

fn malformed<T>(msg: impl Into<String>) -> std::result::Result<T, StepError> {
    Err(StepError::Malformed(msg.into()))
}

impl Ctx {
    fn expr(&self, s: &str, level: usize) -> std::result::Result<BrauerExpr, StepError> {
        if level > self.tower.top() {
            return malformed(format!(
                "level {level} above tower top {}",
                self.tower.top()
            ));
        }
        Ok(self.tower.parse_brauer(s, Some(level))?)
    }

    fn elem(
        &self,
        w: &BTreeMap<String, Value>,
        key: &str,
        level: usize,
    ) -> std::result::Result<Elem, StepError> {
        let s = w
            .get(key)
            .and_then(|v| v.as_str())
            .ok_or_else(|| StepError::Malformed(format!("missing witness `{key}`")))?;
        Ok(self.tower.parse_elem(s, level)?)
    }

    fn index(
        &self,
        w: &BTreeMap<String, Value>,
        len: usize,
    ) -> std::result::Result<usize, StepError> {
        let i = w
            .get("index")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| StepError::Malformed("missing witness `index`".into()))?
            as usize;
        if i >= len {
            return malformed(format!("index {i} out of range"));
        }
        Ok(i)
    }

    fn check(&self, st: &CertStep) -> StepResult {
        let t = &self.tower;
        let lv = st.level;
        let before = self.expr(&st.before, lv)?;
        let to = st.to_level.unwrap_or(lv);
        let after = self.expr(&st.after, to)?;
        let w = &st.witnesses;
        match st.kind {
            StepType::MergeSameA => {
                if to != lv {
                    return malformed("merge keeps the level");
                }
                if !self.same_up_to_merges(&before, &after) {
                    return reject("expressions differ after merging equal a-slots");
                }
            }
            StepType::Reorder => {
                let mut x = before.entries.clone();
                let mut y = after.entries.clone();
                x.sort();
                y.sort();
                if x != y {
                    return reject("not a permutation");
                }
            }
            StepType::SplitNormWitness => {
                let i = self.index(w, before.len())?;
                let s = &before.entries[i];
                let mut rest = before.entries.clone();
                rest.remove(i);
                if rest != after.entries {
                    return reject("after must drop exactly the witnessed entry");
                }
                if w.contains_key("a_zero") {
                    let c = self.elem(w, "a_zero", lv)?;
                    if t.wp(&c) != s.a {
                        return reject("a-slot is not c^p - c for the given c");
                    }
                } else {
                    let ext_text =
                        w.get("extension").and_then(|v| v.as_str()).ok_or_else(|| {
                            StepError::Malformed("missing witness `extension`".into())
                        })?;
                    let ext = parse_tower(ext_text)?;
                    if ext.top() != lv + 1 || ext.truncate(lv) != t.truncate(lv) {
                        return malformed(
                            "extension must be one Artin–Schreier step above the symbol's level",
                        );
                    }
                    match &ext.steps()[lv].kind {
                        StepKind::ArtinSchreier(a) if *a == s.a => {}
                        _ => return reject("extension is not generated by the symbol's a-slot"),
                    }
                    let zs = w
                        .get("z")
                        .and_then(|v| v.as_str())
                        .ok_or_else(|| StepError::Malformed("missing witness `z`".into()))?;
                    let z = ext.parse_elem(zs, lv + 1)?;
                    if ext.norm(&z, lv + 1, lv) != s.b {
                        return reject(format!(
                            "N(z) = {} is not b = {}",
                            t.display(&ext.norm(&z, lv + 1, lv)),
                            t.display(&s.b)
                        ));
                    }
                }
            }
            StepType::ASShift | StepType::PthPowerShift => {
                let i = self.index(w, before.len())?;
                if before.len() != after.len() {
                    return reject("shift keeps the number of entries");
                }
                for (k, (x, y)) in before.entries.iter().zip(&after.entries).enumerate() {
                    if k != i && x != y {
                        return reject(format!("entry {k} changed"));
                    }
                }
                let (x, y) = (&before.entries[i], &after.entries[i]);
                if st.kind == StepType::ASShift {
                    let c = self.elem(w, "c", lv)?;
                    if x.b != y.b || t.sub(&x.a, &y.a) != t.wp(&c) {
                        return reject("a-slots do not differ by c^p - c");
                    }
                } else {
                    let wv = self.elem(w, "w", lv)?;
                    if x.a != y.a || x.b != t.mul(&y.b, &t.frobenius(&wv)) {
                        return reject("b-slots do not differ by w^p");
                    }
                }
            }
            StepType::FrobeniusPush => {
                if to > lv {
                    return malformed("Frobenius pushes to a lower level");
                }
                for k in to + 1..=lv {
                    if !matches!(t.steps()[k - 1].kind, StepKind::InsepRoot(_)) {
                        return malformed("Frobenius push crosses a step that is not a p-th root");
                    }
                }
                let pushed: Option<Vec<Symbol>> = before
                    .entries
                    .iter()
                    .map(|s| {
                        Some(Symbol::new(
                            t.down(&t.frobenius(&s.a), lv, to)?,
                            t.down(&t.frobenius(&s.b), lv, to)?,
                        ))
                    })
                    .collect();
                let Some(pushed) = pushed else {
                    return reject("p-th powers do not lie in the target level");
                };
                if pushed != after.entries {
                    return reject("after is not [x^p, y^p) entrywise");
                }
            }
            StepType::ScalarExtend => {
                if to < lv {
                    return malformed("scalar extension goes up the tower");
                }
                if t.extend_expr(&before, to) != after {
                    return reject("after is not the lifted expression");
                }
            }
            StepType::AlbertDecomp => {
                if to != lv {
                    return malformed("Albert decomposition keeps the level");
                }
                let keep = w.get("keep").and_then(|v| v.as_u64()).unwrap_or(0) as usize;
                if keep > before.len() || keep > after.len() {
                    return malformed("`keep` exceeds the expression length");
                }
                let (bh, bt) = before.entries.split_at(before.len() - keep);
                let (ah, at) = after.entries.split_at(after.len() - keep);
                if bt != at {
                    return reject("kept entries changed");
                }
                let before = BrauerExpr::new(lv, bh.to_vec());
                let after = BrauerExpr::new(lv, ah.to_vec());
                match w.get("proof_ref").and_then(|v| v.as_str()) {
                    Some("invariants") => {
                        let x = t
                            .expr_invariants(&before)
                            .map_err(|e| StepError::Malformed(e.to_string()))?;
                        let y = t
                            .expr_invariants(&after)
                            .map_err(|e| StepError::Malformed(e.to_string()))?;
                        if x != y {
                            return reject(format!("invariants differ: {x} vs {y}"));
                        }
                    }
                    Some("slots") => self.check_slots(&before, &after, w)?,
                    _ => return malformed("AlbertDecomp needs proof_ref `invariants` or `slots`"),
                }
            }
        }
        Ok(())
    }

    /// Per distinct `a`, the products of the b-slots agree up to a p-th power.
    fn same_up_to_merges(&self, x: &BrauerExpr, y: &BrauerExpr) -> bool {
        let t = &self.tower;
        if x.entries.iter().chain(&y.entries).any(|s| t.is_zero(&s.b)) {
            return false;
        }
        let mut groups: Vec<(Elem, Elem)> = Vec::new();
        let mut add = |s: &Symbol, inv: bool| {
            let b = if inv {
                t.inv(&s.b).expect("nonzero b-slot")
            } else {
                s.b.clone()
            };
            match groups.iter_mut().find(|(a, _)| *a == s.a) {
                Some((_, acc)) => *acc = t.mul(acc, &b),
                None => groups.push((s.a.clone(), b)),
            }
        };
        x.entries.iter().for_each(|s| add(s, false));
        y.entries.iter().for_each(|s| add(s, true));
        groups
            .iter()
            .all(|(a, b)| t.is_zero(a) || t.pth_root(b).is_some())
    }

    /// Each entry `[a_i, β_i)` has `β_i = w_i^p ∏ b_j^{e_ij}`; the result is
    /// `⊗_j [Σ_i e_ij a_i, b_j)` with vanishing a-sums dropped.
    fn check_slots(
        &self,
        before: &BrauerExpr,
        after: &BrauerExpr,
        w: &BTreeMap<String, Value>,
    ) -> StepResult {
        let t = &self.tower;
        let lv = before.level;
        let strs = |key: &str| -> std::result::Result<Vec<String>, StepError> {
            w.get(key)
                .and_then(|v| v.as_array())
                .map(|a| {
                    a.iter()
                        .filter_map(|x| x.as_str().map(String::from))
                        .collect()
                })
                .ok_or_else(|| StepError::Malformed(format!("missing witness `{key}`")))
        };
        let slots: Vec<Elem> = strs("slots")?
            .iter()
            .map(|s| t.parse_elem(s, lv))
            .collect::<Result<_>>()
            .map_err(StepError::from)?;
        let ws: Vec<Elem> = strs("w")?
            .iter()
            .map(|s| t.parse_elem(s, lv))
            .collect::<Result<_>>()
            .map_err(StepError::from)?;
        let exps: Vec<Vec<u64>> = w
            .get("exponents")
            .and_then(|v| v.as_array())
            .map(|rows| {
                rows.iter()
                    .map(|r| {
                        r.as_array()
                            .map(|c| c.iter().filter_map(|x| x.as_u64()).collect())
                            .unwrap_or_default()
                    })
                    .collect()
            })
            .ok_or_else(|| StepError::Malformed("missing witness `exponents`".into()))?;
        if ws.len() != before.len()
            || exps.len() != before.len()
            || exps.iter().any(|r| r.len() != slots.len())
        {
            return malformed("witness dimensions do not match");
        }
        let p = t.p() as u64;
        let mut sums = vec![t.zero(lv); slots.len()];
        for (i, s) in before.entries.iter().enumerate() {
            let mut prod = t.frobenius(&ws[i]);
            for (j, b) in slots.iter().enumerate() {
                let e = exps[i][j] % p;
                if e > 0 {
                    prod = t.mul(&prod, &t.pow(b, e as i64));
                    let term = t.mul(&t.from_int(e as i64, lv), &s.a);
                    sums[j] = t.add(&sums[j], &term);
                }
            }
            if prod != s.b {
                return reject(format!(
                    "entry {i}: b-slot is not w^p times the slot product"
                ));
            }
        }
        let expected: Vec<Symbol> = sums
            .into_iter()
            .zip(slots)
            .filter(|(a, _)| !t.is_zero(a))
            .map(|(a, b)| Symbol::new(a, b))
            .collect();
        if expected != after.entries {
            return reject("after does not collect a-slots per radical slot");
        }
        Ok(())
    }
}

pub fn verify_certificate(c: &Certificate) -> Verdict {
    let tower = match parse_tower(&c.tower) {
        Ok(t) => t,
        Err(e) => {
            return Verdict::Malformed {
                step: None,
                reason: format!("tower: {e}"),
            }
        }
    };
    let ctx = Ctx { tower };
    // level-consistency pre-pass over the main chain
    let mut prev: Option<(usize, BrauerExpr)> = None;
    for (k, st) in c.steps.iter().enumerate() {
        if st.role != Role::Main {
            continue;
        }
        let before = match ctx.expr(&st.before, st.level) {
            Ok(e) => e,
            Err(StepError::Malformed(m)) | Err(StepError::Reject(m)) => {
                return Verdict::Malformed {
                    step: Some(k),
                    reason: m,
                }
            }
        };
        if let Some((pk, after)) = &prev {
            if *after != before {
                return Verdict::Malformed {
                    step: Some(k),
                    reason: format!("main chain broken between steps {pk} and {k}"),
                };
            }
        }
        let to = st.to_level.unwrap_or(st.level);
        match ctx.expr(&st.after, to) {
            Ok(a) => prev = Some((k, a)),
            Err(StepError::Malformed(m)) | Err(StepError::Reject(m)) => {
                return Verdict::Malformed {
                    step: Some(k),
                    reason: m,
                }
            }
        }
    }
    use rayon::prelude::*;
    let results: Vec<(usize, StepResult)> = c
        .steps
        .par_iter()
        .enumerate()
        .map(|(k, st)| (k, ctx.check(st)))
        .collect();
    for (k, r) in results {
        match r {
            Ok(()) => {}
            Err(StepError::Reject(reason)) => return Verdict::Reject { step: k, reason },
            Err(StepError::Malformed(reason)) => {
                return Verdict::Malformed {
                    step: Some(k),
                    reason,
                }
            }
        }
    }
    Verdict::Accept
}
