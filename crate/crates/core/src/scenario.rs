//! Scenario files: a hypothesis for the bound calculator plus optional algebra
//! data for the constructive drivers.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bounds::{bound, BoundReport, Hypothesis};
use crate::certificate::verify_certificate;
use crate::drivers::{
    cyclic_algebra_driver, cyclic_extension_step, index_driver, insep_tower_driver,
    p_extension_driver, p_extension_split_driver,
};
use crate::error::{Error, Result};
use crate::frobenius::{reduce_to_cyclic_step, AlbertStrategy, DecompositionResult, InsepTower};
use crate::parse::parse_tower;
use crate::symbol::{BrauerExpr, Symbol};
use crate::tower::{FieldTower, DEFAULT_NORM_BOUND};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub p: u32,
    pub hypothesis: Hypothesis,
    #[serde(default)]
    pub p_cyclic_reducible: bool,
    #[serde(default)]
    pub data: Option<ScenarioData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioData {
    /// Tower text; level `base` is `F`, the levels above it are the extension
    /// named by the hypothesis.
    pub tower: String,
    #[serde(default)]
    pub base: usize,
    /// The algebra over `F`.
    pub algebra: String,
    /// Cyclic data over the top level, as a one-symbol expression.
    #[serde(default)]
    pub cyclic: Option<String>,
    /// A decomposition of the algebra over the top level.
    #[serde(default)]
    pub decomposition: Option<String>,
    #[serde(default)]
    pub driver: Option<Driver>,
    #[serde(default)]
    pub search_bound: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Driver {
    /// One inseparable layer with cyclic data over it.
    CyclicReduction,
    /// Induction over an exponent-one tower.
    InsepTower,
    /// Cyclic algebra from its exponent-one subfield and cyclic data.
    CyclicAlgebra,
    /// One cyclic separable layer.
    CyclicExtension,
    /// A chain of cyclic layers with a decomposition at the top.
    PExtension,
    /// Split by a p-extension.
    PExtensionSplit,
    /// Index driver in characteristic 2.
    Index,
}

impl Driver {
    pub fn id(self) -> &'static str {
        match self {
            Driver::CyclicReduction => "cyclic-reduction",
            Driver::InsepTower => "insep-tower",
            Driver::CyclicAlgebra => "cyclic-algebra",
            Driver::CyclicExtension => "cyclic-extension",
            Driver::PExtension => "p-extension",
            Driver::PExtensionSplit => "p-extension-split",
            Driver::Index => "index",
        }
    }

    fn default_for(h: &Hypothesis) -> Driver {
        match h {
            Hypothesis::CyclicDeg { .. } => Driver::CyclicAlgebra,
            Hypothesis::Index { .. } => Driver::Index,
            Hypothesis::SplitByInsep { .. } => Driver::InsepTower,
            Hypothesis::SplitByPExtension { .. } => Driver::PExtensionSplit,
            Hypothesis::SplitByCyclicP { m: 1, .. } => Driver::CyclicExtension,
            Hypothesis::SplitByCyclicP { .. } => Driver::PExtension,
        }
    }
}

impl Scenario {
    pub fn from_toml(src: &str) -> Result<Scenario> {
        toml::from_str(src).map_err(|e| Error::Malformed(format!("scenario: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn bound(&self) -> Result<BoundReport> {
        bound(self.p, &self.hypothesis, self.p_cyclic_reducible)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: BoundReport,
    pub driver: Driver,
    pub result: DecompositionResult,
    /// Every certificate accepted and, on the univariate backend, the final
    /// invariants equal the initial ones.
    pub certified: bool,
    pub invariants_checked: bool,
}

impl Outcome {
    pub fn to_json(&self) -> Value {
        json!({
            "bound": self.report,
            "driver": self.driver.id(),
            "certified": self.certified,
            "invariants_checked": self.invariants_checked,
            "decomposition": self.result.to_json(),
        })
    }
}

fn parse_single(t: &FieldTower, src: &str, level: usize) -> Result<Symbol> {
    let e = t.parse_brauer(src, Some(level))?;
    match e.entries.as_slice() {
        [s] => Ok(s.clone()),
        _ => Err(Error::Malformed(
            "cyclic data must be a single symbol".into(),
        )),
    }
}

fn expect_layers(got: usize, want: u32, what: &str) -> Result<()> {
    if got != want as usize {
        return Err(Error::Malformed(format!(
            "{what}: tower has {got} layer(s) above the base, hypothesis says {want}"
        )));
    }
    Ok(())
}

/// Runs the driver matching the hypothesis, then checks the result against
/// the bound and re-verifies every certificate.
pub fn decompose(s: &Scenario) -> Result<Outcome> {
    let report = s.bound()?;
    let data = s
        .data
        .as_ref()
        .ok_or_else(|| Error::Malformed("decompose needs a [data] table".into()))?;
    let t = parse_tower(&data.tower)?;
    if t.p() != s.p {
        return Err(Error::Malformed(format!(
            "tower has characteristic {}, scenario says {}",
            t.p(),
            s.p
        )));
    }
    let base = data.base;
    if base > t.top() {
        return Err(Error::Malformed(
            "base level above the top of the tower".into(),
        ));
    }
    let top = t.top();
    let layers = top - base;
    let a = t.parse_brauer(&data.algebra, Some(base))?;
    let bound_d = data.search_bound.unwrap_or(DEFAULT_NORM_BOUND);
    let strategy = AlbertStrategy::Auto { bound: bound_d };
    let cyclic = data
        .cyclic
        .as_deref()
        .map(|c| parse_single(&t, c, top))
        .transpose()?;
    let dtop = data
        .decomposition
        .as_deref()
        .map(|d| t.parse_brauer(d, Some(top)))
        .transpose()?;
    let driver = data
        .driver
        .unwrap_or_else(|| Driver::default_for(&s.hypothesis));

    let split_here = t.univariate_model(base).is_ok() && t.expr_invariants(&a)?.is_zero();
    let result = match (driver, s.hypothesis) {
        (Driver::CyclicReduction, _) => {
            expect_layers(layers, 1, "cyclic reduction")?;
            let k = InsepTower::from_levels(&t, base)?;
            reduce_to_cyclic_step(&k, &a, cyclic.as_ref(), strategy)?.result
        }
        (Driver::InsepTower, h) => {
            if let Hypothesis::SplitByInsep { n, lambda } = h {
                expect_layers(layers, n, "split_by_insep")?;
                if let Some(d) = &dtop {
                    if d.len() > lambda as usize {
                        return Err(Error::Malformed(format!(
                            "decomposition has {} symbols, lambda is {lambda}",
                            d.len()
                        )));
                    }
                }
            }
            let d = dtop.clone().unwrap_or_else(|| BrauerExpr::empty(top));
            insep_tower_driver(&t, base, &a, &d, strategy)?
        }
        (Driver::CyclicAlgebra, h) => {
            if let Hypothesis::CyclicDeg { n, .. } = h {
                expect_layers(layers, n.saturating_sub(1), "cyclic_deg")?;
            }
            if split_here && cyclic.is_none() {
                return empty_outcome(report, driver, &t, base, &a);
            }
            let c =
                cyclic.ok_or_else(|| Error::Malformed("cyclic_deg needs cyclic data".into()))?;
            cyclic_algebra_driver(&t, base, &a, &c, strategy)?
        }
        (Driver::CyclicExtension, _) => {
            expect_layers(layers, 1, "cyclic extension")?;
            cyclic_extension_step(&t, base, &a, dtop.as_ref(), strategy)?
        }
        (Driver::PExtension, h) => {
            if let Hypothesis::SplitByCyclicP { m, .. } = h {
                expect_layers(layers, m, "split_by_cyclic_p")?;
            }
            p_extension_driver(&t, base, &a, dtop.as_ref(), strategy)?
        }
        (Driver::PExtensionSplit, h) => {
            if let Hypothesis::SplitByPExtension { n } = h {
                expect_layers(layers, n, "split_by_p_extension")?;
            }
            p_extension_split_driver(&t, base, &a, strategy)?
        }
        (Driver::Index, h) => {
            if let Hypothesis::Index { n, .. } = h {
                let v = t.truncate(base).expr_invariants(&a)?;
                let (ind, _) = crate::invariants::index_exponent(&v);
                if ind != (s.p as u64).pow(n) {
                    return Err(Error::Malformed(format!(
                        "algebra has index {ind}, hypothesis says {}^{n}",
                        s.p
                    )));
                }
            }
            index_driver(&t, base, &a, strategy)?
        }
    };
    finish(report, driver, &t, base, &a, result)
}

fn empty_outcome(
    report: BoundReport,
    driver: Driver,
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
) -> Result<Outcome> {
    let ft = t.truncate(base);
    let k = InsepTower::new(&ft, base, &[])?;
    let result = crate::frobenius::albert_decompose(&k, a, AlbertStrategy::Invariants)?;
    finish(report, driver, t, base, a, result)
}

fn finish(
    report: BoundReport,
    driver: Driver,
    t: &FieldTower,
    base: usize,
    a: &BrauerExpr,
    result: DecompositionResult,
) -> Result<Outcome> {
    if result.reported_length as u128 > report.bound {
        return Err(Error::Verification(format!(
            "decomposition length {} exceeds the bound {}",
            result.reported_length, report.bound
        )));
    }
    let mut certified = std::iter::once(&result.certificate)
        .chain(&result.sub_certificates)
        .all(|c| verify_certificate(c).is_accept());
    let ft = t.truncate(base);
    let invariants_checked = ft.univariate_model(base).is_ok();
    if invariants_checked {
        let rt = result.tower.truncate(base);
        certified &= ft.expr_invariants(a)? == rt.expr_invariants(&result.expr)?;
    }
    Ok(Outcome {
        report,
        driver,
        result,
        certified,
        invariants_checked,
    })
}
