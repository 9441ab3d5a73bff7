//! Constructive drivers composing the descent steps into full decompositions:
//! one inseparable layer of degree p, induction over an inseparable tower,
//! cyclic algebras with a supplied cyclic presentation, one cyclic separable
//! layer, chains of cyclic layers, and the index driver in characteristic 2.

use std::collections::BTreeMap;

use serde_json::json;

use crate::certificate::{CertBuilder, Certificate, Role, StepType};
use crate::error::{Error, Result};
use crate::frobenius::{
    albert_decompose, albert_steps, insep_splitting_field, reduce_to_cyclic_step, AlbertStrategy,
    Assertion, DecompositionResult, InsepTower,
};
use crate::invariants::{index_exponent, realize, realize_with_a};
use crate::ratfunc::RatFunc;
use crate::symbol::{BrauerExpr, Symbol};
use crate::tower::{Elem, FieldTower, StepKind};

fn has_model(t: &FieldTower, level: usize) -> bool {
    t.univariate_model(level).is_ok()
}

/// Records `lhs ~ rhs` as oracle-checked when invariants are available,
/// otherwise as an assumed hypothesis.
fn check_equiv(
    t: &FieldTower,
    lhs: &BrauerExpr,
    rhs: &BrauerExpr,
    claim: &str,
    out: &mut Vec<Assertion>,
) -> Result<()> {
    if has_model(t, lhs.level) {
        let (x, y) = (t.expr_invariants(lhs)?, t.expr_invariants(rhs)?);
        if x != y {
            return Err(Error::Hypothesis(format!("{claim}: invariants {x} vs {y}")));
        }
        out.push(Assertion::oracle(claim));
    } else {
        out.push(Assertion::assumed(claim));
    }
    Ok(())
}

fn merge_into(
    r: &mut DecompositionResult,
    log: Vec<String>,
    assertions: Vec<Assertion>,
    subs: Vec<Certificate>,
) {
    let mut l = log;
    l.append(&mut r.log);
    r.log = l;
    let mut a = assertions;
    a.append(&mut r.assertions);
    r.assertions = a;
    let mut s = subs;
    s.append(&mut r.sub_certificates);
    r.sub_certificates = s;
}

/// An expression with the same invariants as `e` and at most one symbol,
/// on the univariate backend.
pub fn cyclic_presentation(t: &FieldTower, e: &BrauerExpr) -> Result<BrauerExpr> {
    let model = t.univariate_model(e.level)?;
    let v = t.expr_invariants(e)?;
    if v.is_zero() {
        return Ok(BrauerExpr::empty(e.level));
    }
    let u = RatFunc::var(model.field(), 1, 0);
    let pairs = realize(&v, &[u])?;
    let entries = pairs
        .iter()
        .map(|(a, b)| Ok(Symbol::new(model.unmap(t, a)?, model.unmap(t, b)?)))
        .collect::<Result<_>>()?;
    Ok(BrauerExpr::new(e.level, entries))
}

/// A result whose expression is `out`, certified against `a` by invariants.
fn invariant_result(
    t: &FieldTower,
    a: &BrauerExpr,
    out: BrauerExpr,
    log: Vec<String>,
) -> Result<DecompositionResult> {
    let mut cb = CertBuilder::new(t);
    let mut w = BTreeMap::new();
    w.insert("proof_ref".into(), json!("invariants"));
    cb.push(StepType::AlbertDecomp, Role::Main, a, &out, w);
    Ok(DecompositionResult {
        tower: t.clone(),
        reported_length: out.len(),
        expr: out,
        certificate: cb.finish(),
        sub_certificates: Vec::new(),
        log,
        assertions: vec![Assertion::oracle("result has the invariants of the input")],
    })
}

/// One inseparable layer: `K = F(b^{1/p})` at level `base + 1` and
/// `A_K ~ d` with `n` symbols give `A` as at most `n p` symbols.
pub fn insep_degree_p_step(
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
    d: &BrauerExpr,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    let kt = t.truncate(base + 1);
    let k = InsepTower::from_levels(&kt, base)?;
    if a.level != base || d.level != base + 1 {
        return Err(Error::LevelMismatch(
            "A at the base, its decomposition over K one level up".into(),
        ));
    }
    let p = t.p();
    let mut log = vec![format!(
        "inseparable layer over level {base}: A_K given by {} symbol(s)",
        d.len()
    )];
    let mut assertions = Vec::new();
    check_equiv(
        &kt,
        &kt.extend_expr(a, base + 1),
        d,
        "A_K ~ supplied decomposition",
        &mut assertions,
    )?;
    if d.is_empty() {
        let mut r = albert_decompose(&k, a, strategy)?;
        merge_into(&mut r, log, assertions, Vec::new());
        return Ok(r);
    }
    let downs: Vec<Option<Elem>> = d
        .entries
        .iter()
        .map(|s| kt.down(&s.b, base + 1, base))
        .collect();
    if downs.iter().all(Option::is_some) {
        // every y_i lies in F: A ⊗ (⊗ [x_i^p, y_i))^op splits over K
        let entries = d
            .entries
            .iter()
            .zip(&downs)
            .map(|(s, y)| {
                let xp = kt
                    .down(&kt.frobenius(&s.a), base + 1, base)
                    .expect("K^p ⊆ F");
                Symbol::new(xp, y.clone().unwrap())
            })
            .collect();
        let tail = BrauerExpr::new(base, entries);
        log.push(format!(
            "all radical slots lie in F: carry {}",
            kt.expr_to_string(&tail)
        ));
        let mut cb = CertBuilder::new(&kt);
        let head = a.tensor(&tail.opposite(p));
        cb.push(
            StepType::MergeSameA,
            Role::Main,
            a,
            &head.tensor(&tail),
            BTreeMap::new(),
        );
        let out = albert_steps(
            &k,
            &head,
            &tail,
            strategy,
            &mut cb,
            &mut log,
            &mut assertions,
        )?;
        let expr = out.head.tensor(&tail);
        return Ok(DecompositionResult {
            tower: kt.clone(),
            reported_length: expr.len(),
            expr,
            certificate: cb.finish(),
            sub_certificates: Vec::new(),
            log,
            assertions,
        });
    }
    let j = downs.iter().position(Option::is_none).unwrap();
    let y = d.entries[j].b.clone();
    // coordinates of the other radical slots in the basis 1, y, …, y^(p-1) of K/F
    let basis: Vec<Vec<Elem>> = (0..p as i64)
        .map(|e| kt.coords(&kt.pow(&y, e), base))
        .collect();
    let rows: Vec<Vec<Elem>> = (0..p as usize)
        .map(|r| basis.iter().map(|c| c[r].clone()).collect())
        .collect();
    let mut cs = Vec::new();
    for (i, s) in d.entries.iter().enumerate() {
        if i != j {
            let x = kt
                .solve_linear(&rows, &kt.coords(&s.b, base), base)
                .ok_or_else(|| {
                    Error::Verification("K is not generated by the chosen radical slot".into())
                })?;
            cs.extend(x);
        }
    }
    let (m, kept) = k.extend_pruned(&cs)?;
    log.push(format!(
        "M = K adjoined p-th roots of {} coefficient(s), {} kept",
        cs.len(),
        kept.len()
    ));
    let mt = m.tower();
    let mtop = m.top();
    let mut subs = Vec::new();
    let cyclic = if d.len() == 1 && m.n() == 1 {
        Some(d.entries[0].clone())
    } else {
        // A_M is split by M(y^{1/p}); Albert over M gives the cyclic presentation
        let y_m = mt.lift(&y, base + 1, mtop);
        let km = InsepTower::new(mt, mtop, &[y_m])?;
        let alb = albert_decompose(&km, &mt.extend_expr(d, mtop), strategy)?;
        subs.push(alb.certificate.clone());
        log.extend(alb.log.iter().map(|l| format!("over M: {l}")));
        assertions.extend(alb.assertions.iter().cloned());
        alb.expr.entries.first().cloned()
    };
    let mut step = reduce_to_cyclic_step(&m, a, cyclic.as_ref(), strategy)?;
    merge_into(&mut step.result, log, assertions, subs);
    Ok(step.result)
}

/// Induction over an exponent-one tower `K` (levels `base+1 ..= top`):
/// `A_K ~ d` with `λ` symbols gives at most `[K:F] λ` symbols.
pub fn insep_tower_driver(
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
    d: &BrauerExpr,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    InsepTower::from_levels(t, base)?;
    let top = t.top();
    if top == base {
        return Err(Error::Malformed(
            "the inseparable tower has no layers".into(),
        ));
    }
    let mut cur = d.clone();
    let mut log = Vec::new();
    let mut assertions = Vec::new();
    let mut subs = Vec::new();
    for k in (base..top).rev() {
        let mut r =
            insep_degree_p_step(&t.truncate(k + 1), k, &t.extend_expr(a, k), &cur, strategy)?;
        log.push(format!(
            "layer {}: A over level {k} as {} symbol(s)",
            k + 1,
            r.expr.len()
        ));
        if k == base {
            merge_into(&mut r, log, assertions, subs);
            return Ok(r);
        }
        log.append(&mut r.log);
        assertions.append(&mut r.assertions);
        subs.push(r.certificate);
        subs.append(&mut r.sub_certificates);
        cur = r.expr;
    }
    unreachable!()
}

/// A cyclic algebra `C` of degree `p^n` given by an exponent-one `K` of degree
/// `p^(n-1)` (levels above `base`) and `[x, y)` over `K` with `C_K ~ [x, y)`.
pub fn cyclic_algebra_driver(
    t: &FieldTower,
    base: usize,
    c: &BrauerExpr,
    cyclic: &Symbol,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    if cyclic.level() != t.top() {
        return Err(Error::LevelMismatch(
            "cyclic data must live at the top of the tower".into(),
        ));
    }
    let d = BrauerExpr::new(t.top(), vec![cyclic.clone()]);
    if t.top() == base {
        if !has_model(t, base) {
            return Err(Error::Hypothesis(
                "degree-p case needs invariants to identify C with its data".into(),
            ));
        }
        return invariant_result(
            t,
            c,
            d,
            vec!["degree p: the cyclic data is the answer".into()],
        );
    }
    insep_tower_driver(t, base, c, &d, strategy)
}

/// One cyclic separable layer `L = F(ι)`, `ι^p - ι = α` at level `base + 1`:
/// `λ(A_L) ≤ n` gives at most `(n + 1) p - 1` symbols.
pub fn cyclic_extension_step(
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
    d_l: Option<&BrauerExpr>,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    let lt = t.truncate(base + 1);
    let bound = strategy.bound();
    let alpha = match &lt.steps()[base].kind {
        StepKind::ArtinSchreier(x) => x.clone(),
        _ => {
            return Err(Error::Hypothesis(
                "L/F must be an Artin–Schreier step".into(),
            ))
        }
    };
    let mut log = Vec::new();
    let mut assertions = Vec::new();
    let a_l = lt.extend_expr(a, base + 1);
    let d_l = match d_l {
        Some(d) => {
            check_equiv(
                &lt,
                &a_l,
                d,
                "A_L ~ supplied decomposition",
                &mut assertions,
            )?;
            d.clone()
        }
        None => cyclic_presentation(&lt, &a_l)?,
    };
    log.push(format!(
        "cyclic layer over level {base}: A_L as {} symbol(s)",
        d_l.len()
    ));
    let mut gens = Vec::new();
    for c in &d_l.entries {
        gens.extend(insep_splitting_field(&lt, c, base, bound)?.k.gens());
    }
    let (k, kept) = InsepTower::pruned(&lt, base, &gens)?;
    log.push(format!(
        "K from splitting fields: {} radicand(s) of {} candidate(s)",
        kept.len(),
        gens.len()
    ));
    let kt = k.tower();
    let ktop = k.top();
    let roots = kt.steps()[base..].to_vec();
    let lk = lt.insert_steps(base, &roots)?;
    let r = roots.len();
    if has_model(&lk, lk.top()) {
        let e = BrauerExpr::new(
            lk.top(),
            a_l.entries
                .iter()
                .map(|s| {
                    Symbol::new(
                        lt.translate(&s.a, base + 1, base, r, &lk),
                        lt.translate(&s.b, base + 1, base, r, &lk),
                    )
                })
                .collect(),
        );
        if !lk.expr_invariants(&e)?.is_zero() {
            return Err(Error::Verification("A does not split over LK".into()));
        }
        assertions.push(Assertion::oracle("A splits over LK (invariants vanish)"));
    } else {
        for c in &d_l.entries {
            if lk
                .pth_root(&lt.translate(&c.b, base + 1, base, r, &lk))
                .is_none()
            {
                return Err(Error::Verification(
                    "a radical slot of A_L is not a p-th power in LK".into(),
                ));
            }
        }
        assertions.push(Assertion::witness(
            "radical slots of A_L are p-th powers in LK",
        ));
    }
    let alpha_k = kt.lift(&alpha, base, ktop);
    let cyclic = if has_model(kt, ktop) {
        let model = kt.univariate_model(ktop)?;
        let v = kt.expr_invariants(&kt.extend_expr(a, ktop))?;
        if v.is_zero() {
            None
        } else {
            let y = realize_with_a(&v, &model.map(&alpha_k), bound as usize)?;
            let s = Symbol::new(alpha_k, model.unmap(kt, &y)?);
            log.push(format!(
                "cyclic presentation over K: {}",
                kt.symbol_to_string(&s)
            ));
            assertions.push(Assertion::oracle("A_K ~ cyclic presentation (invariants)"));
            Some(s)
        }
    } else {
        return Err(Error::NotFound(
            "a cyclic presentation over K needs the univariate backend".into(),
        ));
    };
    let mut step = reduce_to_cyclic_step(&k, a, cyclic.as_ref(), strategy)?;
    merge_into(&mut step.result, log, assertions, Vec::new());
    Ok(step.result)
}

/// A chain of cyclic layers (levels `base+1 ..= top`, all Artin–Schreier):
/// `λ(A_L) ≤ n` gives at most `(n + 1) [L:F] - 1` symbols.
pub fn p_extension_driver(
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
    d_top: Option<&BrauerExpr>,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    let top = t.top();
    for k in base + 1..=top {
        if !matches!(t.steps()[k - 1].kind, StepKind::ArtinSchreier(_)) {
            return Err(Error::Hypothesis(
                "a p-extension is a chain of Artin–Schreier steps".into(),
            ));
        }
    }
    let mut cur = match d_top {
        Some(d) => d.clone(),
        None => cyclic_presentation(t, &t.extend_expr(a, top))?,
    };
    if top == base {
        return invariant_result(t, a, cur, vec!["no cyclic layers".into()]);
    }
    let mut log = Vec::new();
    let mut assertions = Vec::new();
    let mut subs = Vec::new();
    for k in (base..top).rev() {
        let mut r = cyclic_extension_step(
            &t.truncate(k + 1),
            k,
            &t.extend_expr(a, k),
            Some(&cur),
            strategy,
        )?;
        log.push(format!(
            "layer {}: A over level {k} as {} symbol(s)",
            k + 1,
            r.expr.len()
        ));
        if k == base {
            merge_into(&mut r, log, assertions, subs);
            return Ok(r);
        }
        log.append(&mut r.log);
        assertions.append(&mut r.assertions);
        subs.push(r.certificate);
        subs.append(&mut r.sub_certificates);
        cur = r.expr;
    }
    unreachable!()
}

/// Split by a p-extension of degree `p^n`: one symbol over the layer below the
/// top, then descent along the remaining `n - 1` layers.
pub fn p_extension_split_driver(
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    let top = t.top();
    if top == base {
        return Err(Error::Malformed("the p-extension has no layers".into()));
    }
    if has_model(t, top) && !t.expr_invariants(&t.extend_expr(a, top))?.is_zero() {
        return Err(Error::Hypothesis(
            "A does not split over the p-extension".into(),
        ));
    }
    let below = t.truncate(top - 1);
    let d = cyclic_presentation(&below, &below.extend_expr(a, top - 1))?;
    p_extension_driver(&below, base, a, Some(&d), strategy)
}

#[derive(Clone, Debug)]
pub struct IndexReduction {
    /// The separable extension `L` (its levels above the base), here a tower chain.
    pub l: FieldTower,
    pub degree: usize,
    pub index_over_k: u64,
    pub index_over_lk: u64,
}

/// For `p = 2` on the univariate backend: a separable `L` of degree
/// `ind(A_K)/2` with `ind A_{LK} ≤ 2`.
pub fn index_reduction_step(k: &InsepTower, a: &BrauerExpr) -> Result<IndexReduction> {
    let t = k.tower();
    if t.p() != 2 {
        return Err(Error::Hypothesis(
            "index reduction is implemented for p = 2".into(),
        ));
    }
    let v = t.expr_invariants(&t.extend_expr(a, k.top()))?;
    let (ind, _) = index_exponent(&v);
    if ind == 1 {
        return Err(Error::Hypothesis("hypothesis requires nonsplit A_K".into()));
    }
    if ind > 2 {
        return Err(Error::Infeasible(format!(
            "index {ind} over a global function field"
        )));
    }
    Ok(IndexReduction {
        l: t.truncate(k.base()),
        degree: 1,
        index_over_k: ind,
        index_over_lk: ind,
    })
}

/// Index `p^n` on the univariate backend: cyclic presentation, splitting field
/// of that symbol, then Albert decomposition.
pub fn index_driver(
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
    strategy: AlbertStrategy,
) -> Result<DecompositionResult> {
    let ft = t.truncate(base);
    let v = ft.expr_invariants(a)?;
    let (ind, _) = index_exponent(&v);
    if ind == 1 {
        return invariant_result(&ft, a, BrauerExpr::empty(base), vec!["A is split".into()]);
    }
    let mut log = vec![format!("index {ind}")];
    let trivial = InsepTower::new(&ft, base, &[])?;
    if ft.p() == 2 {
        let red = index_reduction_step(&trivial, a)?;
        log.push(format!(
            "index reduction: L of degree {}, index over L {}",
            red.degree, red.index_over_lk
        ));
    }
    let c = cyclic_presentation(&ft, a)?;
    let sym = c
        .entries
        .first()
        .ok_or_else(|| Error::Verification("nonzero class without presentation".into()))?;
    log.push(format!("cyclic presentation {}", ft.symbol_to_string(sym)));
    let sf = insep_splitting_field(&ft, sym, base, strategy.bound())?;
    let mut r = albert_decompose(&sf.k, a, strategy)?;
    merge_into(&mut r, log, Vec::new(), Vec::new());
    Ok(r)
}
