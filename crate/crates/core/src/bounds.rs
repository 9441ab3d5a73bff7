//! Symbol-length upper bounds as a scenario calculator.
//!
//! Each [`Rule`] is a closed formula with an applicability condition. The
//! calculator evaluates every applicable rule for a [`Hypothesis`] and reports
//! the minimum, ties going to the earlier rule in [`Rule::ALL`]. Rules that
//! come from the literature rather than from a constructive argument are
//! marked as cited.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Cyclic of degree `p^2`, exponent `p`: `p`.
    CyclicDegreeSquare,
    /// Cyclic of degree `p^n`, exponent `p`: `p^(n-1)`.
    CyclicExponentP,
    /// Split by an exponent-one extension of degree `p^n`: `n`.
    InsepSplit,
    /// Cyclic of degree `p` over an exponent-one `K` of degree `p^n`: `n + p - 1`.
    InsepCyclicReduction,
    /// `λ(A_K) ≤ λ` over an inseparable `K` of degree `p`: `λ p`.
    InsepDegreeP,
    /// `λ(A_K) ≤ λ`, `A_K` nonsplit, `K` purely inseparable: `[K:F] λ`.
    InsepTower,
    /// Index `p^n`, `p`-cyclic-reducible base: `2 p^(n-1) - 1`.
    CyclicReducibleIndex,
    /// Index `2^n` in characteristic 2: `2^n - 1`.
    IndexCharTwo,
    /// `λ(A_L) ≤ λ` over a cyclic `L` of degree `p`: `(λ + 1) p - 1`.
    CyclicExtension,
    /// `λ(A_L) ≤ λ` over a p-extension `L`: `(λ + 1) [L:F] - 1`.
    PExtensionChain,
    /// Split by a p-extension of degree `p^n`: `2 p^(n-1) - 1`.
    PExtensionSplit,
    /// Split by a 2-extension of degree `2^n`, `n ≥ 3`: `5 · 2^(n-3) - 1`.
    TwoExtensionSplit,
    /// Cited: exponent `p^e`, index `p^n`: `p^n - 1`.
    GenericIndexReference,
    /// Cited: cyclic of degree `p^n`, exponent `p^e`: `p^(n-e)`.
    CyclicExponentReference,
    /// Cited: exponent 2, index `2^n` with `n ≤ 2`: `n`.
    SmallIndexTwoReference,
    /// Cited: exponent 2, index 8: `4` (lower bound 3).
    IndexEightReference,
}

impl Rule {
    pub const ALL: [Rule; 16] = [
        Rule::CyclicDegreeSquare,
        Rule::CyclicExponentP,
        Rule::InsepSplit,
        Rule::InsepCyclicReduction,
        Rule::InsepDegreeP,
        Rule::InsepTower,
        Rule::IndexCharTwo,
        Rule::CyclicReducibleIndex,
        Rule::CyclicExtension,
        Rule::PExtensionChain,
        Rule::TwoExtensionSplit,
        Rule::PExtensionSplit,
        Rule::SmallIndexTwoReference,
        Rule::IndexEightReference,
        Rule::CyclicExponentReference,
        Rule::GenericIndexReference,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::CyclicDegreeSquare => "cyclic-degree-square",
            Rule::CyclicExponentP => "cyclic-exponent-p",
            Rule::InsepSplit => "insep-split",
            Rule::InsepCyclicReduction => "insep-cyclic-reduction",
            Rule::InsepDegreeP => "insep-degree-p",
            Rule::InsepTower => "insep-tower",
            Rule::CyclicReducibleIndex => "cyclic-reducible-index",
            Rule::IndexCharTwo => "index-char-two",
            Rule::CyclicExtension => "cyclic-extension",
            Rule::PExtensionChain => "p-extension-chain",
            Rule::PExtensionSplit => "p-extension-split",
            Rule::TwoExtensionSplit => "two-extension-split",
            Rule::GenericIndexReference => "generic-index-reference",
            Rule::CyclicExponentReference => "cyclic-exponent-reference",
            Rule::SmallIndexTwoReference => "small-index-two-reference",
            Rule::IndexEightReference => "index-eight-reference",
        }
    }

    pub fn from_id(s: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.id() == s)
    }

    pub fn formula(self) -> &'static str {
        match self {
            Rule::CyclicDegreeSquare => "p",
            Rule::CyclicExponentP => "p^(n-1)",
            Rule::InsepSplit => "n",
            Rule::InsepCyclicReduction => "n+p-1",
            Rule::InsepDegreeP => "lambda*p",
            Rule::InsepTower => "p^n*lambda",
            Rule::CyclicReducibleIndex => "2*p^(n-1)-1",
            Rule::IndexCharTwo => "2^n-1",
            Rule::CyclicExtension => "(lambda+1)*p-1",
            Rule::PExtensionChain => "(lambda+1)*p^m-1",
            Rule::PExtensionSplit => "2*p^(n-1)-1",
            Rule::TwoExtensionSplit => "5*2^(n-3)-1",
            Rule::GenericIndexReference => "p^n-1",
            Rule::CyclicExponentReference => "p^(n-e)",
            Rule::SmallIndexTwoReference => "n",
            Rule::IndexEightReference => "4",
        }
    }

    /// Rules taken from the literature without a constructive driver here.
    pub fn is_cited(self) -> bool {
        matches!(
            self,
            Rule::GenericIndexReference
                | Rule::CyclicExponentReference
                | Rule::SmallIndexTwoReference
                | Rule::IndexEightReference
        )
    }
}

/// Formula parameters; unused ones are ignored by a rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub p: u32,
    pub n: u32,
    pub e: u32,
    pub m: u32,
    pub lambda: u32,
}

fn pow(p: u32, k: u32) -> Result<u128> {
    (p as u128)
        .checked_pow(k)
        .ok_or_else(|| Error::Malformed(format!("{p}^{k} overflows")))
}

fn sub1(x: u128) -> Result<u128> {
    x.checked_sub(1)
        .ok_or_else(|| Error::Malformed("bound below zero".into()))
}

fn mul(x: u128, y: u128) -> Result<u128> {
    x.checked_mul(y)
        .ok_or_else(|| Error::Malformed("bound overflows".into()))
}

/// Value of a rule's formula, without applicability checks beyond the
/// formula's own domain.
pub fn rule_value(rule: Rule, q: Params) -> Result<u128> {
    let Params { p, n, e, m, lambda } = q;
    let l = lambda as u128;
    let need_n = |min: u32| -> Result<()> {
        if n < min {
            return Err(Error::Malformed(format!("{} needs n ≥ {min}", rule.id())));
        }
        Ok(())
    };
    match rule {
        Rule::CyclicDegreeSquare => Ok(p as u128),
        Rule::CyclicExponentP => {
            need_n(1)?;
            pow(p, n - 1)
        }
        Rule::InsepSplit => Ok(n as u128),
        Rule::InsepCyclicReduction => Ok(n as u128 + p as u128 - 1),
        Rule::InsepDegreeP => mul(l, p as u128),
        Rule::InsepTower => mul(pow(p, n)?, l),
        Rule::CyclicReducibleIndex | Rule::PExtensionSplit => {
            need_n(1)?;
            sub1(mul(2, pow(p, n - 1)?)?)
        }
        Rule::IndexCharTwo => sub1(pow(2, n)?),
        Rule::CyclicExtension => sub1(mul(l + 1, p as u128)?),
        Rule::PExtensionChain => sub1(mul(l + 1, pow(p, m)?)?),
        Rule::TwoExtensionSplit => {
            need_n(3)?;
            sub1(mul(5, pow(2, n - 3)?)?)
        }
        Rule::GenericIndexReference => sub1(pow(p, n)?),
        Rule::CyclicExponentReference => {
            if e > n {
                return Err(Error::Malformed("exponent above degree".into()));
            }
            pow(p, n - e)
        }
        Rule::SmallIndexTwoReference => Ok(n as u128),
        Rule::IndexEightReference => Ok(4),
    }
}

fn one() -> u32 {
    1
}

/// What is known about the algebra `A` (always of exponent `p` unless `e > 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "hypothesis", rename_all = "snake_case")]
pub enum Hypothesis {
    /// `A` cyclic of degree `p^n` and exponent `p^e`.
    CyclicDeg {
        n: u32,
        #[serde(default = "one")]
        e: u32,
    },
    /// `ind A = p^n`, `exp A = p^e`.
    Index {
        n: u32,
        #[serde(default = "one")]
        e: u32,
    },
    /// `[K:F] = p^n` exponent one and `λ(A_K) ≤ lambda` (0: `K` splits `A`).
    SplitByInsep {
        n: u32,
        #[serde(default)]
        lambda: u32,
    },
    /// `A` splits over a p-extension of degree `p^n`.
    SplitByPExtension { n: u32 },
    /// `λ(A_L) ≤ lambda` for a p-extension `L` of degree `p^m` (cyclic when `m = 1`).
    SplitByCyclicP {
        #[serde(default = "one")]
        m: u32,
        #[serde(default = "one")]
        lambda: u32,
    },
}

impl Hypothesis {
    pub fn kind(&self) -> &'static str {
        match self {
            Hypothesis::CyclicDeg { .. } => "cyclic_deg",
            Hypothesis::Index { .. } => "index",
            Hypothesis::SplitByInsep { .. } => "split_by_insep",
            Hypothesis::SplitByPExtension { .. } => "split_by_p_extension",
            Hypothesis::SplitByCyclicP { .. } => "split_by_cyclic_p",
        }
    }

    fn params(&self, p: u32) -> Params {
        match *self {
            Hypothesis::CyclicDeg { n, e } | Hypothesis::Index { n, e } => Params {
                p,
                n,
                e,
                ..Default::default()
            },
            Hypothesis::SplitByInsep { n, lambda } => Params {
                p,
                n,
                e: 1,
                lambda,
                ..Default::default()
            },
            Hypothesis::SplitByPExtension { n } => Params {
                p,
                n,
                e: 1,
                ..Default::default()
            },
            Hypothesis::SplitByCyclicP { m, lambda } => Params {
                p,
                n: m,
                e: 1,
                m,
                lambda,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Candidate {
    pub rule: Rule,
    pub value: u128,
    pub conditional: bool,
    pub cited: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub bound: u128,
    pub rule: Rule,
    /// Depends on an asserted p-cyclic-reducibility flag.
    pub conditional: bool,
    pub chain: Vec<String>,
    pub candidates: Vec<Candidate>,
    pub annotations: Vec<String>,
}

impl BoundReport {
    pub fn summary(&self) -> String {
        let mut s = format!("{} via {}", self.bound, self.rule.id());
        if self.conditional {
            s.push_str(" (conditional)");
        }
        s
    }
}

fn check_prime(p: u32) -> Result<()> {
    if p < 2
        || (2..p)
            .take_while(|d| d * d <= p)
            .any(|d| p.is_multiple_of(d))
    {
        return Err(Error::Malformed(format!("p = {p} is not prime")));
    }
    Ok(())
}

/// Applicable rules for a hypothesis, in preference order, with a flag
/// telling whether the rule is conditional on p-cyclic-reducibility.
fn applicable(h: &Hypothesis, p: u32, reducible_flag: bool) -> Vec<(Rule, bool)> {
    let mut out = Vec::new();
    match *h {
        Hypothesis::CyclicDeg { n, e } => {
            if e == 1 {
                if n == 2 {
                    out.push((Rule::CyclicDegreeSquare, false));
                }
                if n >= 1 {
                    out.push((Rule::CyclicExponentP, false));
                }
            }
            if e >= 1 && e <= n {
                out.push((Rule::CyclicExponentReference, false));
            }
        }
        Hypothesis::Index { n, e } => {
            if e == 1 && n >= 1 {
                if p == 2 {
                    out.push((Rule::IndexCharTwo, false));
                }
                if p == 2 || reducible_flag {
                    out.push((Rule::CyclicReducibleIndex, p != 2));
                }
                if p == 2 && n <= 2 {
                    out.push((Rule::SmallIndexTwoReference, false));
                }
                if p == 2 && n == 3 {
                    out.push((Rule::IndexEightReference, false));
                }
            }
            if e >= 1 && e <= n {
                out.push((Rule::GenericIndexReference, false));
            }
        }
        Hypothesis::SplitByInsep { n, lambda } => {
            if lambda == 0 {
                out.push((Rule::InsepSplit, false));
            } else {
                if lambda == 1 && n >= 1 {
                    out.push((Rule::InsepCyclicReduction, false));
                }
                if n == 1 {
                    out.push((Rule::InsepDegreeP, false));
                }
                out.push((Rule::InsepTower, false));
            }
        }
        Hypothesis::SplitByPExtension { n } => {
            if p == 2 && n >= 3 {
                out.push((Rule::TwoExtensionSplit, false));
            }
            if n >= 1 {
                out.push((Rule::PExtensionSplit, false));
            }
        }
        Hypothesis::SplitByCyclicP { m, .. } => {
            if m == 1 {
                out.push((Rule::CyclicExtension, false));
            }
            out.push((Rule::PExtensionChain, false));
        }
    }
    out
}

fn chain_for(rule: Rule, q: Params, value: u128) -> Vec<String> {
    let Params {
        p, n, lambda, m, ..
    } = q;
    match rule {
        Rule::TwoExtensionSplit => vec![
            format!("a 2-extension L' of degree 2^{} leaves index at most 8", n - 3),
            "cited bound: index 8, exponent 2 gives at most 4 symbols (no certificate for this block)".into(),
            format!("descent along L' by cyclic steps: (4+1)*2^{}-1 = {value}", n - 3),
        ],
        Rule::PExtensionSplit => vec![
            format!("an intermediate p-extension of degree {p}^{} has λ ≤ 1", n - 1),
            format!("descent by cyclic steps: (1+1)*{p}^{}-1 = {value}", n - 1),
        ],
        Rule::PExtensionChain => {
            let mut v = vec![format!("start: λ over L ≤ {lambda}")];
            let mut cur = lambda as u128;
            for k in 0..m {
                cur = (cur + 1) * p as u128 - 1;
                v.push(format!("cyclic step {}: (λ+1)*{p}-1 = {cur}", k + 1));
            }
            v
        }
        Rule::CyclicReducibleIndex | Rule::IndexCharTwo => vec![
            format!("index reduction yields an exponent-one K of degree ≤ p^(2p^{}-1) splitting A", n - 1),
            format!("Albert decomposition over K: {value}"),
        ],
        Rule::InsepTower => vec![
            format!("induction over the {n} degree-p layers of K"),
            format!("each layer multiplies by {p}: {p}^{n}*{lambda} = {value}"),
        ],
        Rule::CyclicExponentP | Rule::CyclicDegreeSquare => vec![
            format!("an exponent-one K of degree {p}^{} inside the algebra makes it cyclic of degree p", n.saturating_sub(1)),
            format!("layer induction: {value}"),
        ],
        _ => vec![format!("{} = {value}", rule.formula())],
    }
}

/// Minimum over the applicable rules.
pub fn bound(p: u32, h: &Hypothesis, p_cyclic_reducible: bool) -> Result<BoundReport> {
    check_prime(p)?;
    let q = h.params(p);
    let mut candidates = Vec::new();
    for (rule, conditional) in applicable(h, p, p_cyclic_reducible) {
        let value = rule_value(rule, q)?;
        candidates.push(Candidate {
            rule,
            value,
            conditional,
            cited: rule.is_cited(),
        });
    }
    let best = candidates
        .iter()
        .min_by_key(|c| c.value)
        .cloned()
        .ok_or_else(|| Error::NoRule(format!("no rule applies to {} with p = {p}", h.kind())))?;
    let mut annotations = Vec::new();
    if let Hypothesis::Index { n: 3, e: 1 } = h {
        if p == 2 {
            annotations
                .push("known lower bound for index 8, exponent 2: 3 (annotation only)".into());
        }
    }
    if best.rule == Rule::TwoExtensionSplit {
        annotations.push(
            "uses a cited bound for an index-8 block; that block carries no certificate".into(),
        );
    }
    if best.conditional {
        annotations.push(format!(
            "assumes the base field is {p}-cyclic reducible (asserted, not proven)"
        ));
    }
    if best.cited {
        annotations.push("cited result; reported for reference".into());
    }
    Ok(BoundReport {
        bound: best.value,
        rule: best.rule,
        conditional: best.conditional,
        chain: chain_for(best.rule, q, best.value),
        candidates,
        annotations,
    })
}
