//! Descent along purely inseparable extensions: the Frobenius pushforward,
//! constructive Albert decompositions, splitting fields of degree-p symbols
//! over separable extensions, and the reduction of a class that becomes
//! cyclic over `K` to one split by `K` plus at most `p - 1` symbols.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use crate::certificate::{CertBuilder, Certificate, Role, StepType};
use crate::error::{Error, Result};
use crate::invariants::realize;
use crate::symbol::{BrauerExpr, Symbol};
use crate::tower::{Elem, ExtStep, FieldTower, NormSearch, StepKind};

/// `K = F(b_1^{1/p}, …, b_n^{1/p})` as the levels `base+1 ..= base+n` of a
/// tower chain, with every `b_i` in the base level.
#[derive(Clone, Debug)]
pub struct InsepTower {
    tower: FieldTower,
    base: usize,
}

impl InsepTower {
    /// Adjoins p-th roots of `gens` (elements of `base`) above `t.truncate(base)`.
    /// Fails when a generator is already a p-th power in the field built so
    /// far, i.e. the generators are not p-independent.
    pub fn new(t: &FieldTower, base: usize, gens: &[Elem]) -> Result<Self> {
        let mut k = InsepTower {
            tower: t.truncate(base),
            base,
        };
        for g in gens {
            k = k.push_root(g).map_err(|e| match e {
                Error::DegenerateStep(m) => {
                    Error::Infeasible(format!("generators are not p-independent: {m}"))
                }
                other => other,
            })?;
        }
        Ok(k)
    }

    /// As [`new`](Self::new), silently dropping generators that are p-th powers
    /// of the field built so far. Returns the indices that were kept.
    pub fn pruned(t: &FieldTower, base: usize, gens: &[Elem]) -> Result<(Self, Vec<usize>)> {
        InsepTower {
            tower: t.truncate(base),
            base,
        }
        .extend_pruned(gens)
    }

    /// Reads the levels above `base` of `t` as an exponent-one tower.
    pub fn from_levels(t: &FieldTower, base: usize) -> Result<Self> {
        for k in base + 1..=t.top() {
            match &t.steps()[k - 1].kind {
                StepKind::InsepRoot(b) if t.down(b, k - 1, base).is_some() => {}
                _ => {
                    return Err(Error::NotExponentOne(format!(
                        "step `{}` is not a p-th root of a base element",
                        t.steps()[k - 1].name
                    )))
                }
            }
        }
        Ok(InsepTower {
            tower: t.clone(),
            base,
        })
    }

    pub fn extend_pruned(&self, gens: &[Elem]) -> Result<(Self, Vec<usize>)> {
        let mut k = self.clone();
        let mut kept = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            if self.tower.is_zero(g) {
                continue;
            }
            match k.push_root(g) {
                Ok(next) => {
                    k = next;
                    kept.push(i);
                }
                Err(Error::DegenerateStep(_)) => {}
                Err(e) => return Err(e),
            }
        }
        Ok((k, kept))
    }

    fn push_root(&self, g: &Elem) -> Result<Self> {
        let t = &self.tower;
        let name = t.fresh_name("r");
        let b = t.lift(g, self.base, t.top());
        Ok(InsepTower {
            tower: t.make_step(ExtStep::insep_root(&name, b))?,
            base: self.base,
        })
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn top(&self) -> usize {
        self.tower.top()
    }

    pub fn n(&self) -> usize {
        self.top() - self.base
    }

    pub fn degree(&self) -> usize {
        self.tower.degree(self.top(), self.base)
    }

    /// The radicands `b_i`, as base-level elements.
    pub fn gens(&self) -> Vec<Elem> {
        let t = &self.tower;
        (self.base + 1..=self.top())
            .map(|k| {
                t.down(t.root_datum(k).expect("root step"), k - 1, self.base)
                    .expect("base radicand")
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    OracleChecked,
    WitnessChecked,
    /// Supplied hypothesis that no available method could check.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assertion {
    pub claim: String,
    pub kind: CheckKind,
}

impl Assertion {
    pub fn oracle(claim: impl Into<String>) -> Self {
        Assertion {
            claim: claim.into(),
            kind: CheckKind::OracleChecked,
        }
    }

    pub fn witness(claim: impl Into<String>) -> Self {
        Assertion {
            claim: claim.into(),
            kind: CheckKind::WitnessChecked,
        }
    }

    pub fn assumed(claim: impl Into<String>) -> Self {
        Assertion {
            claim: claim.into(),
            kind: CheckKind::Assumed,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    /// Tower chain the certificate and the expression refer to.
    pub tower: FieldTower,
    pub expr: BrauerExpr,
    pub certificate: Certificate,
    /// Certificates of intermediate stages over other chains.
    pub sub_certificates: Vec<Certificate>,
    pub reported_length: usize,
    pub log: Vec<String>,
    pub assertions: Vec<Assertion>,
}

impl DecompositionResult {
    pub fn expr_string(&self) -> String {
        self.tower.expr_to_string(&self.expr)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "expr": self.expr_string(),
            "length": self.reported_length,
            "certificate": self.certificate,
            "sub_certificates": self.sub_certificates,
            "log": self.log,
            "assertions": self.assertions,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlbertStrategy {
    /// Invariant matching on the univariate backend.
    Invariants,
    /// Factor every b-slot over the radicands; drop split entries by norm search.
    Slots { bound: u32 },
    /// Invariants when both ends have a univariate model, slots otherwise.
    Auto { bound: u32 },
}

impl AlbertStrategy {
    pub fn bound(self) -> u32 {
        match self {
            AlbertStrategy::Invariants => crate::tower::DEFAULT_NORM_BOUND,
            AlbertStrategy::Slots { bound } | AlbertStrategy::Auto { bound } => bound,
        }
    }

    fn use_invariants(self, t: &FieldTower, base: usize, top: usize) -> bool {
        match self {
            AlbertStrategy::Invariants => true,
            AlbertStrategy::Slots { .. } => false,
            AlbertStrategy::Auto { .. } => {
                t.univariate_model(base).is_ok() && t.univariate_model(top).is_ok()
            }
        }
    }
}

/// `[x, y)_K ↦ [x^p, y^p)_F` for `K` above `to` by p-th root steps only.
pub fn frobenius_push(t: &FieldTower, s: &Symbol, to: usize) -> Result<Symbol> {
    let from = s.level();
    if to > from {
        return Err(Error::LevelMismatch(
            "Frobenius pushes to a lower level".into(),
        ));
    }
    for k in to + 1..=from {
        if !matches!(t.steps()[k - 1].kind, StepKind::InsepRoot(_)) {
            return Err(Error::NotExponentOne(format!(
                "step `{}` is not a p-th root",
                t.steps()[k - 1].name
            )));
        }
    }
    let down = |x: &Elem| {
        t.down(&t.frobenius(x), from, to)
            .ok_or_else(|| Error::NotExponentOne("K^p is not contained in F".into()))
    };
    Ok(Symbol::new(down(&s.a)?, down(&s.b)?))
}

pub fn frobenius_push_expr(t: &FieldTower, e: &BrauerExpr, to: usize) -> Result<BrauerExpr> {
    let entries = e
        .entries
        .iter()
        .map(|s| frobenius_push(t, s, to))
        .collect::<Result<_>>()?;
    Ok(BrauerExpr::new(to, entries))
}

/// Exponents `e` in `[0, p)^n` and `w` with `beta = w^p ∏ gens_j^{e_j}`.
fn slot_factor(t: &FieldTower, beta: &Elem, gens: &[Elem]) -> Option<(Vec<u64>, Elem)> {
    let p = t.p() as u64;
    let n = gens.len();
    let total = p.checked_pow(n as u32)?;
    (0..total).find_map(|mut idx| {
        let mut exps = vec![0u64; n];
        let mut q = beta.clone();
        for (j, g) in gens.iter().enumerate() {
            exps[j] = idx % p;
            idx /= p;
            if exps[j] > 0 {
                q = t.mul(&q, &t.pow(g, -(exps[j] as i64)));
            }
        }
        t.pth_root(&q).map(|w| (exps, w))
    })
}

pub(crate) struct Albert {
    pub(crate) head: BrauerExpr,
    /// Radical slot index (into the tower generators) of every head entry.
    pub(crate) slot_of: Vec<usize>,
}

/// Decomposes `head` (with the trailing `tail` carried along) over `k`,
/// appending the certificate steps to `cb`.
pub(crate) fn albert_steps(
    k: &InsepTower,
    head: &BrauerExpr,
    tail: &BrauerExpr,
    strategy: AlbertStrategy,
    cb: &mut CertBuilder,
    log: &mut Vec<String>,
    assertions: &mut Vec<Assertion>,
) -> Result<Albert> {
    let t = k.tower();
    let base = k.base();
    let gens = k.gens();
    let whole = |h: &BrauerExpr| h.tensor(tail);
    let keep = json!(tail.len());
    if strategy.use_invariants(t, base, k.top()) {
        let over_k = t.expr_invariants(&t.extend_expr(head, k.top()))?;
        if !over_k.is_zero() {
            return Err(Error::Hypothesis(format!(
                "class is not split over K: invariants {over_k}"
            )));
        }
        assertions.push(Assertion::oracle("class splits over K (invariants vanish)"));
        let v = t.expr_invariants(head)?;
        let model = t.univariate_model(base)?;
        let mut out = BrauerExpr::empty(base);
        let mut slot_of = Vec::new();
        if !v.is_zero() {
            let (j, pair) = gens
                .iter()
                .enumerate()
                .find_map(|(j, g)| realize(&v, &[model.map(g)]).ok().map(|r| (j, r)))
                .ok_or_else(|| Error::Infeasible("no radicand realizes the invariants".into()))?;
            for (a, _) in pair {
                out.entries
                    .push(Symbol::new(model.unmap(t, &a)?, gens[j].clone()));
                slot_of.push(j);
            }
        }
        let mut w = BTreeMap::new();
        w.insert("proof_ref".into(), json!("invariants"));
        w.insert("keep".into(), keep);
        cb.push(
            StepType::AlbertDecomp,
            Role::Main,
            &whole(head),
            &whole(&out),
            w,
        );
        assertions.push(Assertion::oracle("decomposition has the same invariants"));
        log.push(format!(
            "albert decomposition by invariant matching: {} symbol(s)",
            out.len()
        ));
        return Ok(Albert { head: out, slot_of });
    }

    let bound = strategy.bound();
    let merged = t.merge_same_a(head);
    if merged != *head {
        cb.push(
            StepType::MergeSameA,
            Role::Main,
            &whole(head),
            &whole(&merged),
            BTreeMap::new(),
        );
    }
    let mut cur = merged;
    let mut factored: Vec<(Vec<u64>, Elem)> = Vec::new();
    let mut i = 0;
    while i < cur.len() {
        let s = cur.entries[i].clone();
        if let Some(f) = slot_factor(t, &s.b, &gens) {
            factored.push(f);
            i += 1;
            continue;
        }
        let ext = t.as_extension(base, &s.a)?;
        match ext.solve_norm_factored(&s.b, base + 1, base, bound) {
            NormSearch::Found(z) => {
                let mut next = cur.clone();
                next.entries.remove(i);
                let mut w = BTreeMap::new();
                w.insert("index".into(), json!(i));
                w.insert("extension".into(), json!(ext.describe()));
                w.insert("z".into(), json!(ext.display(&z)));
                cb.push(StepType::SplitNormWitness, Role::Main, &whole(&cur), &whole(&next), w);
                assertions.push(Assertion::witness(format!("{} is split (norm witness)", t.symbol_to_string(&s))));
                cur = next;
            }
            NormSearch::Exhausted { bound } => {
                return Err(Error::NotFound(format!(
                    "b-slot of {} is not a product of radicands up to p-th powers, and no norm witness up to degree {bound}",
                    t.symbol_to_string(&s)
                )))
            }
        }
    }
    let p = t.p() as u64;
    let mut sums = vec![t.zero(base); gens.len()];
    for (s, (exps, _)) in cur.entries.iter().zip(&factored) {
        for (j, &e) in exps.iter().enumerate() {
            if e > 0 {
                sums[j] = t.add(&sums[j], &t.mul(&t.from_int(e as i64, base), &s.a));
            }
        }
    }
    let mut out = BrauerExpr::empty(base);
    let mut slot_of = Vec::new();
    for (j, a) in sums.into_iter().enumerate() {
        if !t.is_zero(&a) {
            out.entries.push(Symbol::new(a, gens[j].clone()));
            slot_of.push(j);
        }
    }
    let mut w = BTreeMap::new();
    w.insert("proof_ref".into(), json!("slots"));
    w.insert("keep".into(), keep);
    w.insert(
        "slots".into(),
        Value::Array(gens.iter().map(|g| json!(t.display(g))).collect()),
    );
    w.insert(
        "exponents".into(),
        json!(factored
            .iter()
            .map(|(e, _)| e.iter().map(|x| x % p).collect::<Vec<_>>())
            .collect::<Vec<_>>()),
    );
    w.insert(
        "w".into(),
        Value::Array(factored.iter().map(|(_, x)| json!(t.display(x))).collect()),
    );
    cb.push(
        StepType::AlbertDecomp,
        Role::Main,
        &whole(&cur),
        &whole(&out),
        w,
    );
    assertions.push(Assertion::witness(
        "b-slots factor over the radicands up to p-th powers",
    ));
    log.push(format!(
        "albert decomposition by slot factorization: {} symbol(s)",
        out.len()
    ));
    Ok(Albert { head: out, slot_of })
}

/// Writes `e` (split over `K`) as `⊗ [a_i, b_i)` with the radicands of `K` in
/// the b-slots.
pub fn albert_decompose(
    k: &InsepTower,
    e: &BrauerExpr,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    if e.level != k.base() {
        return Err(Error::LevelMismatch(
            "expression must live at the base of the tower".into(),
        ));
    }
    let t = k.tower();
    let mut cb = CertBuilder::new(t);
    let mut log = Vec::new();
    let mut assertions = Vec::new();
    let out = albert_steps(
        k,
        e,
        &BrauerExpr::empty(e.level),
        strategy,
        &mut cb,
        &mut log,
        &mut assertions,
    )?;
    if out.head.len() > k.n() {
        return Err(Error::Verification(
            "Albert decomposition longer than the number of radicands".into(),
        ));
    }
    Ok(DecompositionResult {
        tower: t.clone(),
        reported_length: out.head.len(),
        expr: out.head,
        certificate: cb.finish(),
        sub_certificates: Vec::new(),
        log,
        assertions,
    })
}

#[derive(Clone, Debug)]
pub struct SplittingField {
    pub k: InsepTower,
    /// `L·K` as a chain: `F`, the root steps of `K`, then the steps of `L`.
    pub lk: FieldTower,
}

/// An exponent-one `K/F` with `C` split over `LK`, for `C` over a separable `L/F`.
/// The radicands are the coefficients of the minimal polynomial of the b-slot
/// of `C` over `F` that are not already p-th powers.
pub fn insep_splitting_field(
    t: &FieldTower,
    c: &Symbol,
    base: usize,
    bound: u32,
) -> Result<SplittingField> {
    let l = c.level();
    for k in base + 1..=l {
        if matches!(t.steps()[k - 1].kind, StepKind::InsepRoot(_)) {
            return Err(Error::Hypothesis("L/F must be separable".into()));
        }
    }
    let g = t.min_poly(&c.b, l, base);
    let coeffs: Vec<Elem> = g[..g.len() - 1].to_vec();
    let (k, _) = InsepTower::pruned(t, base, &coeffs)?;
    let roots: Vec<ExtStep> = k.tower().steps()[base..].to_vec();
    let lk = t.truncate(l).insert_steps(base, &roots)?;
    let r = roots.len();
    let y = t.translate(&c.b, l, base, r, &lk);
    if lk.pth_root(&y).is_none() {
        let a = t.translate(&c.a, l, base, r, &lk);
        let s = Symbol::new(a, y);
        let strategy = if lk.univariate_model(lk.top()).is_ok() {
            crate::symbol::SplitStrategy::Invariants
        } else {
            crate::symbol::SplitStrategy::NormSearch(bound)
        };
        match lk.is_split(&s, strategy)? {
            crate::symbol::SplitStatus::Split(_) => {}
            crate::symbol::SplitStatus::NonSplit { .. } => {
                return Err(Error::Verification("symbol does not split over LK".into()))
            }
            crate::symbol::SplitStatus::Unknown { bound } => {
                return Err(Error::NotFound(format!(
                    "splitting over LK not established up to degree {bound}"
                )))
            }
        }
    }
    Ok(SplittingField { k, lk })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CyclicCase {
    /// The cyclic data already splits over `K`.
    SplitOverK,
    /// The norm witness lies in `F`.
    WitnessInBase,
    /// The norm witness generates `L`; radicands of its minimal polynomial are adjoined.
    WitnessGeneratesL,
}

#[derive(Clone, Debug)]
pub struct CyclicStep {
    pub b: BrauerExpr,
    pub b_prime: BrauerExpr,
    pub case: CyclicCase,
    pub result: DecompositionResult,
}

/// Given `A` over `F` and `[x, y)` over `K` with `A_K ~ [x, y)`, writes
/// `A ~ B ⊗ B'` with `B` split by `K` (at most `n` symbols) and `B'` of at
/// most `p - 1` symbols.
pub fn reduce_to_cyclic_step(
    k: &InsepTower,
    a: &BrauerExpr,
    cyclic: Option<&Symbol>,
    strategy: AlbertStrategy,
) -> Result<CyclicStep> {
    let t = k.tower();
    let base = k.base();
    let top = k.top();
    let bound = strategy.bound();
    let mut log = Vec::new();
    let mut assertions = Vec::new();
    if a.level != base {
        return Err(Error::LevelMismatch(
            "algebra must live at the base of the tower".into(),
        ));
    }
    let split_case =
        |log: Vec<String>, mut assertions: Vec<Assertion>, why: &str| -> Result<CyclicStep> {
            let mut log = log;
            log.push(format!("cyclic data splits over K ({why}); B' is empty"));
            let mut cb = CertBuilder::new(t);
            let out = albert_steps(
                k,
                a,
                &BrauerExpr::empty(base),
                strategy,
                &mut cb,
                &mut log,
                &mut assertions,
            )?;
            Ok(CyclicStep {
                b: out.head.clone(),
                b_prime: BrauerExpr::empty(base),
                case: CyclicCase::SplitOverK,
                result: DecompositionResult {
                    tower: t.clone(),
                    reported_length: out.head.len(),
                    expr: out.head,
                    certificate: cb.finish(),
                    sub_certificates: Vec::new(),
                    log,
                    assertions,
                },
            })
        };
    let Some(cyc) = cyclic else {
        return split_case(log, assertions, "no cyclic data");
    };
    if cyc.level() != top {
        return Err(Error::LevelMismatch(
            "cyclic data must live at the top of K".into(),
        ));
    }
    if t.is_zero(&cyc.a) || t.pth_root(&cyc.b).is_some() {
        return split_case(log, assertions, "trivial slot");
    }
    let pushed = frobenius_push(t, cyc, base)?;
    log.push(format!(
        "frobenius push: {} over K gives {} over F",
        t.symbol_to_string(cyc),
        t.symbol_to_string(&pushed)
    ));
    let (xp, yp) = (pushed.a.clone(), pushed.b.clone());
    if t.as_preimage_checked(&xp, bound).0.is_some() {
        return split_case(log, assertions, "x^p lies in the image of x^p - x over F");
    }
    let l = match t.as_extension(base, &xp) {
        Ok(l) => l,
        Err(Error::DegenerateStep(_)) => {
            return split_case(log, assertions, "L/F is not a field extension")
        }
        Err(e) => return Err(e),
    };
    let lv = base + 1;
    assertions.push(Assertion::witness(format!(
        "L/F cyclic of degree p: {} ({:?})",
        l.describe(),
        l.checks()[base]
    )));
    let zp = match l.solve_norm_factored(&yp, lv, base, bound) {
        NormSearch::Found(z) => z,
        NormSearch::Exhausted { bound } => {
            return Err(Error::NotFound(format!(
                "norm witness z' with N(z') = y^p not found up to degree {bound}"
            )))
        }
    };
    log.push(format!(
        "norm witness z' = {} in {}",
        l.display(&zp),
        l.describe()
    ));
    assertions.push(Assertion::witness(
        "frobenius pushforward is split (norm witness)",
    ));
    let side_push = |cb: &mut CertBuilder| {
        let before = BrauerExpr::new(top, vec![cyc.clone()]);
        let after = BrauerExpr::new(base, vec![pushed.clone()]);
        cb.push(
            StepType::FrobeniusPush,
            Role::Side,
            &before,
            &after,
            BTreeMap::new(),
        );
        let mut w = BTreeMap::new();
        w.insert("index".into(), json!(0));
        w.insert("extension".into(), json!(l.describe()));
        w.insert("z".into(), json!(l.display(&zp)));
        cb.push(
            StepType::SplitNormWitness,
            Role::Side,
            &after,
            &BrauerExpr::empty(base),
            w,
        );
    };

    if let Some(zf) = l.down(&zp, lv, base) {
        // y = z' and A ⊗ [x^p, z')^op splits over K
        let bp = BrauerExpr::new(base, vec![Symbol::new(xp.clone(), zf.clone())]);
        log.push(format!("z' lies in F: B' = {}", t.expr_to_string(&bp)));
        let mut cb = CertBuilder::new(t);
        side_push(&mut cb);
        let head = a.tensor(&bp.opposite(t.p()));
        let padded = head.tensor(&bp);
        cb.push(
            StepType::MergeSameA,
            Role::Main,
            a,
            &padded,
            BTreeMap::new(),
        );
        let out = albert_steps(k, &head, &bp, strategy, &mut cb, &mut log, &mut assertions)?;
        let expr = out.head.tensor(&bp);
        return Ok(CyclicStep {
            b: out.head,
            b_prime: bp,
            case: CyclicCase::WitnessInBase,
            result: DecompositionResult {
                tower: t.clone(),
                reported_length: expr.len(),
                expr,
                certificate: cb.finish(),
                sub_certificates: Vec::new(),
                log,
                assertions,
            },
        });
    }

    // z' generates L: adjoin p-th roots of the middle coefficients of its minimal polynomial
    let g = l.min_poly(&zp, lv, base);
    let cs: Vec<Elem> = g[1..g.len() - 1].to_vec();
    let (m, kept) = k.extend_pruned(&cs)?;
    log.push(format!(
        "z' not in F: M = K adjoined p-th roots of {} coefficient(s), {} kept",
        cs.len(),
        kept.len()
    ));
    let mt = m.tower().clone();
    let mtop = m.top();
    let x_m = mt.lift(&t.lift(&xp, base, top), top, mtop);
    let ml = mt.push_unchecked(ExtStep::artin_schreier(&mt.fresh_name("i"), x_m.clone()));
    let zp_ml = Elem::Ext(
        l.coords(&zp, base)
            .iter()
            .map(|c| mt.lift(c, base, mtop))
            .collect(),
    );
    let z = ml
        .pth_root(&zp_ml)
        .ok_or_else(|| Error::Verification("z' is not a p-th power in ML".into()))?;
    let y_m = mt.lift(&cyc.b, top, mtop);
    if ml.norm(&z, mtop + 1, mtop) != y_m {
        return Err(Error::Verification("N(z) differs from y over M".into()));
    }
    assertions.push(Assertion::witness("A splits over M: y is a norm from ML"));
    let mut cb = CertBuilder::new(&mt);
    side_push(&mut cb);
    let s_m = BrauerExpr::new(mtop, vec![Symbol::new(x_m, y_m)]);
    let mut w = BTreeMap::new();
    w.insert("index".into(), json!(0));
    w.insert("extension".into(), json!(ml.describe()));
    w.insert("z".into(), json!(ml.display(&z)));
    cb.push(
        StepType::SplitNormWitness,
        Role::Side,
        &s_m,
        &BrauerExpr::empty(mtop),
        w,
    );
    let out = albert_steps(
        &m,
        a,
        &BrauerExpr::empty(base),
        strategy,
        &mut cb,
        &mut log,
        &mut assertions,
    )?;
    let nk = k.n();
    let mut b = BrauerExpr::empty(base);
    let mut b_prime = BrauerExpr::empty(base);
    for (s, &j) in out.head.entries.iter().zip(&out.slot_of) {
        if j < nk {
            b.entries.push(s.clone())
        } else {
            b_prime.entries.push(s.clone())
        }
    }
    let expr = b.tensor(&b_prime);
    if expr != out.head {
        cb.push(
            StepType::Reorder,
            Role::Main,
            &out.head,
            &expr,
            BTreeMap::new(),
        );
    }
    let certificate = cb.finish();
    Ok(CyclicStep {
        b,
        b_prime,
        case: CyclicCase::WitnessGeneratesL,
        result: DecompositionResult {
            tower: mt,
            reported_length: expr.len(),
            expr,
            certificate,
            sub_certificates: Vec::new(),
            log,
            assertions,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;
    use crate::parse::parse_tower;

    #[test]
    fn push_examples() {
        let t = parse_tower("GF(2)(t) ; ROOT s: s^2 = t").unwrap();
        let s = Symbol::new(t.parse_elem("s", 1).unwrap(), t.parse_elem("s", 1).unwrap());
        let pushed = frobenius_push(&t, &s, 0).unwrap();
        assert_eq!(t.symbol_to_string(&pushed), "[t, t)_2");
        let one = Symbol::new(t.parse_elem("s+1", 1).unwrap(), t.one(1));
        assert!(t.is_one(&frobenius_push(&t, &one, 0).unwrap().b));
        let as_t = parse_tower("GF(2)(t) ; AS i: i^2+i = t").unwrap();
        let s = Symbol::new(as_t.generator(1), as_t.one(1));
        assert!(matches!(
            frobenius_push(&as_t, &s, 0),
            Err(Error::NotExponentOne(_))
        ));
    }

    #[test]
    fn albert_univariate() {
        let t = parse_tower("GF(2)(t)").unwrap();
        let k = InsepTower::new(&t, 0, &[t.var(0, 0)]).unwrap();
        let e = k.tower().parse_brauer("[1, t)_2", Some(0)).unwrap();
        let r = albert_decompose(&k, &e, AlbertStrategy::Invariants).unwrap();
        assert_eq!(r.expr_string(), "[1, t)_2");
        assert!(verify_certificate(&r.certificate).is_accept());
        let empty =
            albert_decompose(&k, &BrauerExpr::empty(0), AlbertStrategy::Invariants).unwrap();
        assert!(empty.expr.is_empty());
        let e2 = k
            .tower()
            .parse_brauer("[1/t, t+1)_2 ⊗ [t, t^2+t+1)_2", Some(0))
            .unwrap();
        let r2 = albert_decompose(&k, &e2, AlbertStrategy::Invariants).unwrap();
        assert!(r2.reported_length <= 1);
        assert_eq!(
            t.expr_invariants(&e2).unwrap(),
            t.expr_invariants(&r2.expr).unwrap()
        );
        assert!(verify_certificate(&r2.certificate).is_accept());
    }

    #[test]
    fn dependent_generators_rejected() {
        let t = parse_tower("GF(2)(t)").unwrap();
        let gens = [
            t.parse_elem("t", 0).unwrap(),
            t.parse_elem("t+1", 0).unwrap(),
        ];
        assert!(matches!(
            InsepTower::new(&t, 0, &gens),
            Err(Error::Infeasible(_))
        ));
        let (k, kept) = InsepTower::pruned(&t, 0, &gens).unwrap();
        assert_eq!((k.n(), kept), (1, vec![0]));
    }

    #[test]
    fn splitting_field_examples() {
        let t = parse_tower("GF(2)(t) ; AS i: i^2+i = 1").unwrap();
        let c = Symbol::new(
            t.parse_elem("t", 1).unwrap(),
            t.parse_elem("i*t", 1).unwrap(),
        );
        let sf = insep_splitting_field(&t, &c, 0, 2).unwrap();
        assert_eq!(sf.k.n(), 1);
        assert_eq!(sf.k.gens(), vec![t.var(0, 0)]);
        let sq = Symbol::new(
            t.parse_elem("t", 1).unwrap(),
            t.parse_elem("(i*t)^2", 1).unwrap(),
        );
        assert_eq!(insep_splitting_field(&t, &sq, 0, 2).unwrap().k.n(), 0);
    }

    #[test]
    fn cyclic_step_univariate() {
        let t = parse_tower("GF(2)(t)").unwrap();
        let k = InsepTower::new(&t, 0, &[t.var(0, 0)]).unwrap();
        let kt = k.tower();
        let a = kt.parse_brauer("[1, t)_2", Some(0)).unwrap();
        let cyc = Symbol::new(kt.one(1), kt.var(0, 1));
        let r = reduce_to_cyclic_step(&k, &a, Some(&cyc), AlbertStrategy::Invariants).unwrap();
        assert!(r.result.reported_length <= 2);
        assert!(
            verify_certificate(&r.result.certificate).is_accept(),
            "{:?}",
            verify_certificate(&r.result.certificate)
        );
        assert_eq!(
            kt.expr_invariants(&a).unwrap(),
            kt.expr_invariants(&r.result.expr).unwrap()
        );
    }

    #[test]
    fn cyclic_step_two_variables() {
        let t = parse_tower("GF(2)(t1,t2)").unwrap();
        let k = InsepTower::new(&t, 0, &[t.var(0, 0)]).unwrap();
        let kt = k.tower();
        let a = kt.parse_brauer("[t1, t2)_2", Some(0)).unwrap();
        let cyc = Symbol::new(kt.generator(1), kt.parse_elem("r*t2", 1).unwrap());
        let r =
            reduce_to_cyclic_step(&k, &a, Some(&cyc), AlbertStrategy::Slots { bound: 1 }).unwrap();
        assert_eq!(r.case, CyclicCase::WitnessGeneratesL);
        assert!(r.b.is_empty());
        assert_eq!(r.b_prime.len(), 1);
        assert!(
            verify_certificate(&r.result.certificate).is_accept(),
            "{:?}",
            verify_certificate(&r.result.certificate)
        );
    }
}
