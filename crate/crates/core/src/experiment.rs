//! Randomized experiment harness: seeded instance generation, one scenario
//! per trial, CSV rows plus a JSON summary.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::Hypothesis;
use crate::error::{Error, Result};
use crate::ff::{Fe, FiniteField};
use crate::invariants::index_exponent;
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::scenario::{decompose, Driver, Scenario, ScenarioData};
use crate::symbol::{BrauerExpr, Symbol};
use crate::tower::{ExtStep, FieldTower, DEFAULT_NORM_BOUND};
use crate::upoly::UPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Constant-field cyclic `L` of degree p; driver for one cyclic layer.
    SplitByCyclicP,
    /// `K = F(t^{1/p})` with random split cyclic data over `K`; one reduction step.
    CyclicReduction,
    /// Cyclic algebra of degree `p^2` given by `K = F(t^{1/p})` and cyclic data.
    CyclicDeg,
    /// Index driver, p = 2.
    Index,
    /// Merge and normalize random symbols; invariants must sum to zero and
    /// be preserved.
    Symbols,
}

impl ExperimentKind {
    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::SplitByCyclicP => "split_by_cyclic_p",
            ExperimentKind::CyclicReduction => "cyclic_reduction",
            ExperimentKind::CyclicDeg => "cyclic_deg",
            ExperimentKind::Index => "index",
            ExperimentKind::Symbols => "symbols",
        }
    }
}

fn default_degree_cap() -> usize {
    3
}

fn default_symbols() -> usize {
    2
}

fn default_search_bound() -> u32 {
    DEFAULT_NORM_BOUND
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    pub p: u32,
    /// Size of the constant field; defaults to `p`.
    #[serde(default)]
    pub q: Option<u64>,
    pub scenario: ExperimentKind,
    #[serde(default = "default_degree_cap")]
    pub degree_cap: usize,
    #[serde(default = "default_symbols")]
    pub symbols: usize,
    #[serde(default = "default_search_bound")]
    pub search_bound: u32,
    /// Wall-clock times make the CSV nondeterministic; off by default.
    #[serde(default)]
    pub record_runtime: bool,
}

impl ExperimentConfig {
    pub fn from_toml(src: &str) -> Result<Self> {
        let c: Self =
            toml::from_str(src).map_err(|e| Error::Malformed(format!("experiment config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let f = FiniteField::from_size(self.q())?;
        if f.characteristic() != self.p {
            return Err(Error::Malformed(format!(
                "q = {} is not a power of p = {}",
                self.q(),
                self.p
            )));
        }
        if self.degree_cap == 0 || self.symbols == 0 || self.search_bound == 0 {
            return Err(Error::Malformed(
                "degree_cap, symbols and search_bound must be positive".into(),
            ));
        }
        if self.scenario == ExperimentKind::Index && self.p != 2 {
            return Err(Error::Malformed("the index scenario needs p = 2".into()));
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.q.unwrap_or(self.p as u64)
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub scenario: String,
    pub bound_rule: String,
    pub bound: Option<u128>,
    pub achieved: Option<usize>,
    pub certified: bool,
    pub runtime_ms: u64,
    #[serde(skip)]
    pub error: Option<String>,
    #[serde(skip)]
    pub instance: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.records.is_empty() {
            w.write_record([
                "trial",
                "scenario",
                "bound_rule",
                "bound",
                "achieved",
                "certified",
                "runtime_ms",
            ])
            .expect("in-memory write");
        }
        for r in &self.records {
            w.serialize(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records
            .iter()
            .filter(|r| r.error.is_some() || !r.certified)
    }

    pub fn all_within_bound(&self) -> bool {
        self.records.iter().all(|r| match (r.achieved, r.bound) {
            (Some(a), Some(b)) => a as u128 <= b,
            _ => true,
        })
    }

    pub fn summary(&self) -> Value {
        let completed = self.records.iter().filter(|r| r.error.is_none()).count();
        let certified = self.records.iter().filter(|r| r.certified).count();
        let max_achieved = self.records.iter().filter_map(|r| r.achieved).max();
        json!({
            "config": self.config,
            "trials": self.records.len(),
            "completed": completed,
            "certified": certified,
            "all_within_bound": self.all_within_bound(),
            "max_achieved": max_achieved,
            "failures": self.failures().map(|r| json!({
                "trial": r.trial,
                "instance": r.instance,
                "error": r.error,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Random instances over `F_q(t)`.
pub struct Generator {
    field: Arc<FiniteField>,
    degree_cap: usize,
}

impl Generator {
    pub fn new(field: &Arc<FiniteField>, degree_cap: usize) -> Self {
        Generator {
            field: field.clone(),
            degree_cap,
        }
    }

    fn poly(&self, u: &UPoly) -> RatFunc {
        RatFunc::from_poly(Poly::from_upoly(&self.field, 1, 0, u))
    }

    fn nonzero_constant(&self, rng: &mut ChaCha8Rng) -> Fe {
        rng.gen_range(1..self.field.size())
    }

    fn upoly(&self, rng: &mut ChaCha8Rng, deg: usize) -> UPoly {
        let mut cs: Vec<Fe> = (0..deg)
            .map(|_| rng.gen_range(0..self.field.size()))
            .collect();
        cs.push(self.nonzero_constant(rng));
        UPoly::new(cs)
    }

    fn irreducible(&self, rng: &mut ChaCha8Rng, deg: usize) -> UPoly {
        loop {
            let mut cs: Vec<Fe> = (0..deg)
                .map(|_| rng.gen_range(0..self.field.size()))
                .collect();
            cs.push(1);
            let u = UPoly::new(cs);
            if u.is_irreducible(&self.field) {
                return u;
            }
        }
    }

    /// Numerator and denominator of degree at most the cap.
    pub fn a_slot(&self, rng: &mut ChaCha8Rng) -> RatFunc {
        let deg = rng.gen_range(0..=self.degree_cap);
        let num = self.upoly(rng, deg);
        let r = self.poly(&num);
        if rng.gen_bool(0.5) {
            let d = rng.gen_range(1..=self.degree_cap.min(2));
            r.div(&self.poly(&self.irreducible(rng, d)))
                .expect("nonzero")
        } else {
            r
        }
    }

    /// A constant times at most two irreducibles of degree at most 2.
    pub fn b_slot(&self, rng: &mut ChaCha8Rng) -> RatFunc {
        let mut r = RatFunc::constant(&self.field, 1, self.nonzero_constant(rng));
        for _ in 0..rng.gen_range(1..=2) {
            let d = rng.gen_range(1..=2);
            r = r.mul(&self.poly(&self.irreducible(rng, d)));
        }
        r
    }

    pub fn symbol(&self, t: &FieldTower, rng: &mut ChaCha8Rng) -> Symbol {
        Symbol::new(
            t.from_base(self.a_slot(rng), 0),
            t.from_base(self.b_slot(rng), 0),
        )
    }

    pub fn expr(&self, t: &FieldTower, rng: &mut ChaCha8Rng, symbols: usize) -> BrauerExpr {
        BrauerExpr::new(0, (0..symbols).map(|_| self.symbol(t, rng)).collect())
    }

    /// A split symbol `[x, w^p (℘(u) + x))` over a rational level, drawn in
    /// its own variable; `℘(u) + x` is the norm of `u + ι`, `ι^p - ι = x`.
    pub fn split_symbol_over(
        &self,
        t: &FieldTower,
        level: usize,
        rng: &mut ChaCha8Rng,
    ) -> Result<Symbol> {
        let model = t.univariate_model(level)?;
        let p = self.field.characteristic() as i64;
        loop {
            let x = self.a_slot(rng);
            let deg = rng.gen_range(0..=1);
            let u = self.poly(&self.upoly(rng, deg));
            let norm = u.pow(p).sub(&u).add(&x);
            if norm.is_zero() {
                continue;
            }
            let w = if rng.gen_bool(0.5) {
                self.poly(&self.irreducible(rng, 1))
            } else {
                RatFunc::one(&self.field, 1)
            };
            let y = w.pow(p).mul(&norm);
            return Ok(Symbol::new(model.unmap(t, &x)?, model.unmap(t, &y)?));
        }
    }
}

/// Field tower over `F_q(t)` and the generator for a config.
fn base_tower(cfg: &ExperimentConfig) -> Result<(FieldTower, Arc<FiniteField>)> {
    let field = FiniteField::from_size(cfg.q())?;
    Ok((FieldTower::rational(field.clone(), &["t"])?, field))
}

fn constant_as_tower(t: &FieldTower, f: &FiniteField) -> Result<FieldTower> {
    let c = f
        .elements()
        .find(|&c| f.trace(c) != 0)
        .expect("trace is onto");
    let field = t.field().clone();
    t.make_step(ExtStep::artin_schreier(
        "i",
        t.from_base(RatFunc::constant(&field, 1, c), 0),
    ))
}

fn root_tower(t: &FieldTower) -> Result<FieldTower> {
    t.make_step(ExtStep::insep_root("s", t.var(0, 0)))
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let start = Instant::now();
    let mut rec = TrialRecord {
        trial,
        scenario: cfg.scenario.id().into(),
        bound_rule: String::new(),
        bound: None,
        achieved: None,
        certified: false,
        runtime_ms: 0,
        error: None,
        instance: String::new(),
    };
    if let Err(e) = trial_body(cfg, &mut rng, &mut rec) {
        rec.error = Some(e.to_string());
        rec.certified = false;
    }
    if cfg.record_runtime {
        rec.runtime_ms = start.elapsed().as_millis() as u64;
    }
    rec
}

fn trial_body(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng, rec: &mut TrialRecord) -> Result<()> {
    let (t0, field) = base_tower(cfg)?;
    let g = Generator::new(&field, cfg.degree_cap);
    let mut a = g.expr(&t0, rng, cfg.symbols);
    if cfg.scenario == ExperimentKind::Index {
        // index hypotheses need n ≥ 1
        while t0.expr_invariants(&a)?.is_zero() {
            a = g.expr(&t0, rng, cfg.symbols);
        }
    }
    let p = cfg.p;
    let (tower, hypothesis, driver, cyclic) = match cfg.scenario {
        ExperimentKind::Symbols => {
            rec.instance = t0.expr_to_string(&a);
            let v = t0.expr_invariants(&a)?;
            let reduced = t0.reduce_expr(&a, cfg.search_bound);
            let w = t0.expr_invariants(&reduced)?;
            rec.bound_rule = "-".into();
            rec.achieved = Some(reduced.len());
            rec.certified = v.total() == 0 && v == w;
            return Ok(());
        }
        ExperimentKind::SplitByCyclicP => (
            constant_as_tower(&t0, &field)?,
            Hypothesis::SplitByCyclicP { m: 1, lambda: 1 },
            Driver::CyclicExtension,
            None,
        ),
        ExperimentKind::CyclicReduction | ExperimentKind::CyclicDeg => {
            let k = root_tower(&t0)?;
            let cyc = k.symbol_to_string(&g.split_symbol_over(&k, 1, rng)?);
            if cfg.scenario == ExperimentKind::CyclicReduction {
                (
                    k,
                    Hypothesis::SplitByInsep { n: 1, lambda: 1 },
                    Driver::CyclicReduction,
                    Some(cyc),
                )
            } else {
                (
                    k,
                    Hypothesis::CyclicDeg { n: 2, e: 1 },
                    Driver::CyclicAlgebra,
                    Some(cyc),
                )
            }
        }
        ExperimentKind::Index => {
            let (ind, _) = index_exponent(&t0.expr_invariants(&a)?);
            (
                t0.clone(),
                Hypothesis::Index {
                    n: ind.trailing_zeros(),
                    e: 1,
                },
                Driver::Index,
                None,
            )
        }
    };
    let s = Scenario {
        p,
        hypothesis,
        p_cyclic_reducible: false,
        data: Some(ScenarioData {
            tower: tower.describe(),
            base: 0,
            algebra: t0.expr_to_string(&a),
            cyclic,
            decomposition: None,
            driver: Some(driver),
            search_bound: Some(cfg.search_bound),
        }),
    };
    rec.instance = s.to_toml();
    let report = s.bound()?;
    rec.bound_rule = report.rule.id().into();
    rec.bound = Some(report.bound);
    let o = decompose(&s)?;
    rec.achieved = Some(o.result.reported_length);
    rec.certified = o.certified;
    Ok(())
}

/// Runs all trials in parallel; rows come back in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect();
    Ok(ExperimentReport {
        config: cfg.clone(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(kind: &str, p: u32, trials: usize) -> ExperimentConfig {
        ExperimentConfig::from_toml(&format!(
            "seed = 11\ntrials = {trials}\np = {p}\nscenario = \"{kind}\"\n"
        ))
        .unwrap()
    }

    #[test]
    fn empty_and_deterministic() {
        let r = run_experiment(&cfg("split_by_cyclic_p", 2, 0)).unwrap();
        assert!(r.records.is_empty());
        assert_eq!(
            r.to_csv(),
            "trial,scenario,bound_rule,bound,achieved,certified,runtime_ms\n"
        );
        let c = cfg("symbols", 3, 6);
        assert_eq!(
            run_experiment(&c).unwrap().to_csv(),
            run_experiment(&c).unwrap().to_csv()
        );
        assert!(ExperimentConfig::from_toml("trials = 1\np = 2\nscenario = \"index\"").is_err());
    }

    #[test]
    fn small_runs() {
        for (kind, p) in [
            ("split_by_cyclic_p", 2),
            ("cyclic_reduction", 2),
            ("cyclic_deg", 2),
            ("index", 2),
            ("symbols", 3),
        ] {
            let r = run_experiment(&cfg(kind, p, 8)).unwrap();
            let bad: Vec<_> = r
                .failures()
                .map(|f| (f.trial, f.error.clone(), f.instance.clone()))
                .collect();
            assert!(bad.is_empty(), "{kind}: {bad:#?}");
            assert!(r.all_within_bound());
        }
    }
}
