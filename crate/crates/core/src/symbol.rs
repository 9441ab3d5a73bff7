//! Symbols `[a, b)`, formal tensor products of symbols, and the rewrite
//! relations used to shorten them.

use crate::error::{Error, Result};
use crate::invariants::{as_normalize, invariants, pth_power_free, InvariantVector};
use crate::parse::{parse_expr_at, Expr};
use crate::poly::{Mono, Poly};
use crate::ratfunc::RatFunc;
use crate::tower::{Elem, ExtStep, FieldTower, NormSearch};

/// The cyclic algebra generated by `i, j` with `i^p - i = a`, `j^p = b`,
/// `ji = (i - 1)j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub a: Elem,
    pub b: Elem,
}

impl Symbol {
    pub fn new(a: Elem, b: Elem) -> Self {
        Symbol { a, b }
    }

    pub fn level(&self) -> usize {
        self.a.depth()
    }
}

/// A tensor product of symbols over one tower level. Opposite factors are
/// stored as `p - 1` copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerExpr {
    pub level: usize,
    pub entries: Vec<Symbol>,
}

impl BrauerExpr {
    pub fn empty(level: usize) -> Self {
        BrauerExpr {
            level,
            entries: Vec::new(),
        }
    }

    pub fn new(level: usize, entries: Vec<Symbol>) -> Self {
        BrauerExpr { level, entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self ⊗ other`
    pub fn tensor(&self, other: &BrauerExpr) -> BrauerExpr {
        debug_assert_eq!(self.level, other.level);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        BrauerExpr {
            level: self.level,
            entries,
        }
    }

    /// Opposite algebra: every entry repeated `p - 1` times.
    pub fn opposite(&self, p: u32) -> BrauerExpr {
        let entries = self
            .entries
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.clone(), p as usize - 1))
            .collect();
        BrauerExpr {
            level: self.level,
            entries,
        }
    }
}

/// Outcome of [`FieldTower::normalize_symbol`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Symbol(Symbol),
    Split(&'static str),
}

/// How [`FieldTower::is_split`] should decide.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitStrategy {
    NormSearch(u32),
    Invariants,
    Both(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum SplitEvidence {
    /// `b = N(z)` for `z` in the extension `tower` (top level) of the symbol's level
    Norm { tower: FieldTower, z: Elem },
    /// `a = c^p - c`
    TrivialA { c: Elem },
    /// all local invariants vanish
    ZeroInvariants,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SplitStatus {
    Split(SplitEvidence),
    NonSplit {
        place: String,
        value: u32,
        invariants: String,
    },
    Unknown {
        bound: u32,
    },
}

impl SplitStatus {
    pub fn is_split(&self) -> Option<bool> {
        match self {
            SplitStatus::Split(_) => Some(true),
            SplitStatus::NonSplit { .. } => Some(false),
            SplitStatus::Unknown { .. } => None,
        }
    }
}

impl FieldTower {
    /// A generator name not yet used in the tower.
    pub fn fresh_name(&self, base: &str) -> String {
        let used = |n: &str| {
            self.vars().iter().any(|v| v == n) || self.level_of_name(n).is_some() || n == "g"
        };
        if !used(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}{k}"))
            .find(|n| !used(n))
            .unwrap()
    }

    pub fn symbol_to_string(&self, s: &Symbol) -> String {
        format!(
            "[{}, {})_{}",
            self.display(&s.a),
            self.display(&s.b),
            self.p()
        )
    }

    pub fn expr_to_string(&self, e: &BrauerExpr) -> String {
        if e.entries.is_empty() {
            return "1".into();
        }
        e.entries
            .iter()
            .map(|s| self.symbol_to_string(s))
            .collect::<Vec<_>>()
            .join(" ⊗ ")
    }

    /// Parses `[a, b)_p ⊗ [a', b')_p ⊗ ...`; `*` and `&` are accepted as
    /// separators, a trailing `^op` marks an opposite factor and `1` is the
    /// empty product. Without `level`, the lowest level containing every
    /// name is used.
    pub fn parse_brauer(&self, src: &str, level: Option<usize>) -> Result<BrauerExpr> {
        let raw = parse_symbol_list(src, self.p())?;
        let mut lv = 0;
        for (a, b, _) in &raw {
            lv = lv.max(self.level_of_expr(a)?).max(self.level_of_expr(b)?);
        }
        let level = match level {
            Some(l) if l < lv => {
                return Err(Error::LevelMismatch(format!(
                    "expression needs level {lv}, requested {l}"
                )))
            }
            Some(l) => l,
            None => lv,
        };
        let mut entries = Vec::new();
        for (a, b, op) in raw {
            let a = self.eval_expr(&a, level)?;
            let b = self.eval_expr(&b, level)?;
            if self.is_zero(&b) {
                return Err(Error::Malformed("b-slot must be nonzero".into()));
            }
            let copies = if op { self.p() as usize - 1 } else { 1 };
            for _ in 0..copies {
                entries.push(Symbol::new(a.clone(), b.clone()));
            }
        }
        Ok(BrauerExpr { level, entries })
    }

    /// Same-`a` entries merged by `[a,b) ⊗ [a,b') ~ [a,bb')`; entries with
    /// `b` a p-th power or `a = 0` are dropped. Output is sorted by `a`.
    pub fn merge_same_a(&self, e: &BrauerExpr) -> BrauerExpr {
        let mut groups: Vec<(Elem, Elem)> = Vec::new();
        for s in &e.entries {
            match groups.iter_mut().find(|(a, _)| *a == s.a) {
                Some((_, b)) => *b = self.mul(b, &s.b),
                None => groups.push((s.a.clone(), s.b.clone())),
            }
        }
        let mut entries: Vec<Symbol> = groups
            .into_iter()
            .filter(|(a, b)| !self.is_zero(a) && self.pth_root(b).is_none())
            .map(|(a, b)| Symbol::new(a, b))
            .collect();
        entries.sort();
        BrauerExpr {
            level: e.level,
            entries,
        }
    }

    /// Standard reductions: Artin–Schreier shifts of `a` and removal of
    /// p-th-power factors of `b`.
    pub fn normalize_symbol(&self, s: &Symbol, bound: u32) -> Normalized {
        let level = s.level();
        if self.is_zero(&s.a) {
            return Normalized::Split("a = 0");
        }
        if self.pth_root(&s.b).is_some() {
            return Normalized::Split("b is a p-th power");
        }
        if level == 0 && self.is_univariate() {
            let a = s.a.as_base().unwrap();
            let b = s.b.as_base().unwrap();
            let (a, _) = as_normalize(a).expect("univariate");
            let (b, _) = pth_power_free(b).expect("nonzero b");
            if a.is_zero() {
                return Normalized::Split("a lies in the image of x^p - x");
            }
            if b.is_one() {
                return Normalized::Split("b is a p-th power");
            }
            return Normalized::Symbol(Symbol::new(Elem::Base(a), Elem::Base(b)));
        }
        if self.as_preimage(&s.a, bound).is_some() {
            return Normalized::Split("a lies in the image of x^p - x");
        }
        if level == 0 {
            let a = reduce_pth_power_terms(s.a.as_base().unwrap());
            let b = strip_monomial_pth_powers(s.b.as_base().unwrap());
            return Normalized::Symbol(Symbol::new(Elem::Base(a), Elem::Base(b)));
        }
        Normalized::Symbol(s.clone())
    }

    /// Normalizes every entry and merges, repeated until nothing changes.
    pub fn reduce_expr(&self, e: &BrauerExpr, bound: u32) -> BrauerExpr {
        let mut cur = e.clone();
        loop {
            let entries = cur
                .entries
                .iter()
                .filter_map(|s| match self.normalize_symbol(s, bound) {
                    Normalized::Symbol(s) => Some(s),
                    Normalized::Split(_) => None,
                })
                .collect();
            let next = self.merge_same_a(&BrauerExpr {
                level: cur.level,
                entries,
            });
            if next == cur {
                return next;
            }
            cur = next;
        }
    }

    /// Invariant vector of an expression whose level has a univariate model.
    pub fn expr_invariants(&self, e: &BrauerExpr) -> Result<InvariantVector> {
        let model = self.univariate_model(e.level)?;
        let pairs: Vec<(RatFunc, RatFunc)> = e
            .entries
            .iter()
            .map(|s| (model.map(&s.a), model.map(&s.b)))
            .collect();
        invariants(model.field(), model.var(), &pairs)
    }

    /// The extension `level(i)`, `i^p - i = a`, as a tower whose top is `level + 1`.
    pub fn as_extension(&self, level: usize, a: &Elem) -> Result<FieldTower> {
        let base = self.truncate(level);
        let name = self.fresh_name("i");
        base.make_step(ExtStep::artin_schreier(&name, a.clone()))
    }

    pub fn is_split(&self, s: &Symbol, strategy: SplitStrategy) -> Result<SplitStatus> {
        let level = s.level();
        if self.is_zero(&s.b) {
            return Err(Error::Malformed("b-slot must be nonzero".into()));
        }
        let by_invariants = |_: ()| -> Result<SplitStatus> {
            let e = BrauerExpr::new(level, vec![s.clone()]);
            let v = self.expr_invariants(&e)?;
            let first = v
                .iter()
                .next()
                .map(|(pl, x)| (pl.display(v.field(), v.var()), x));
            Ok(match first {
                None => SplitStatus::Split(SplitEvidence::ZeroInvariants),
                Some((place, value)) => SplitStatus::NonSplit {
                    place,
                    value,
                    invariants: v.to_string(),
                },
            })
        };
        let by_norm = |d: u32| -> Result<SplitStatus> {
            let (pre, _) = self.as_preimage_checked(&s.a, d);
            if let Some(c) = pre {
                return Ok(SplitStatus::Split(SplitEvidence::TrivialA { c }));
            }
            let ext = self.as_extension(level, &s.a)?;
            Ok(match ext.solve_norm(&s.b, level + 1, level, d) {
                NormSearch::Found(z) => SplitStatus::Split(SplitEvidence::Norm { tower: ext, z }),
                NormSearch::Exhausted { bound } => SplitStatus::Unknown { bound },
            })
        };
        match strategy {
            SplitStrategy::Invariants => by_invariants(()),
            SplitStrategy::NormSearch(d) => by_norm(d),
            SplitStrategy::Both(d) => {
                let inv = by_invariants(())?;
                let norm = by_norm(d)?;
                match (&inv, &norm) {
                    (SplitStatus::NonSplit { .. }, SplitStatus::Split(_)) => {
                        Err(Error::Verification(
                            "norm witness found for a symbol with a nonzero invariant".into(),
                        ))
                    }
                    (_, SplitStatus::Split(_)) => Ok(norm),
                    _ => Ok(inv),
                }
            }
        }
    }

    /// Lifts an expression to a higher level (scalar extension).
    pub fn extend_expr(&self, e: &BrauerExpr, to: usize) -> BrauerExpr {
        BrauerExpr {
            level: to,
            entries: e
                .entries
                .iter()
                .map(|s| Symbol::new(self.lift(&s.a, e.level, to), self.lift(&s.b, e.level, to)))
                .collect(),
        }
    }
}

/// Repeatedly replaces a p-th-power term `c m^p` of a polynomial `a` by
/// `c^{1/p} m` (subtracting `℘(c^{1/p} m)`), largest first.
fn reduce_pth_power_terms(a: &RatFunc) -> RatFunc {
    if !a.is_polynomial() {
        return a.clone();
    }
    let f = a.field().clone();
    let p = f.characteristic();
    let nv = a.nvars();
    let mut cur = a.num().clone();
    loop {
        let hit = cur
            .terms()
            .iter()
            .find(|(m, _)| !m.is_one() && m.exponents(nv).iter().all(|e| e % p == 0))
            .copied();
        let Some((m, c)) = hit else { break };
        let root: Vec<u32> = m.exponents(nv).iter().map(|e| e / p).collect();
        let s = Poly::monomial(&f, nv, Mono::from_exponents(&root), f.pth_root(c));
        cur = cur.sub(&s.frobenius().sub(&s));
    }
    RatFunc::from_poly(cur)
}

/// Divides out monomial factors `t^{pk}` common to all terms of the numerator
/// or denominator.
fn strip_monomial_pth_powers(b: &RatFunc) -> RatFunc {
    let f = b.field().clone();
    let p = f.characteristic();
    let nv = b.nvars();
    let common = |poly: &Poly| -> Vec<u32> {
        (0..nv)
            .map(|v| {
                poly.terms()
                    .iter()
                    .map(|(m, _)| m.exp(v))
                    .min()
                    .unwrap_or(0)
                    / p
                    * p
            })
            .collect()
    };
    let strip = |poly: &Poly, exps: &[u32]| -> Poly {
        let d = Poly::monomial(&f, nv, Mono::from_exponents(exps), 1);
        poly.div_exact(&d).expect("common monomial divides")
    };
    let cn = common(b.num());
    let cd = common(b.den());
    crate::ratfunc::normalize(strip(b.num(), &cn), strip(b.den(), &cd))
        .expect("nonzero denominator")
}

type RawSymbol = (Expr, Expr, bool);

fn parse_symbol_list(src: &str, p: u32) -> Result<Vec<RawSymbol>> {
    let trimmed = src.trim();
    if trimmed.is_empty() || trimmed == "1" {
        return Ok(Vec::new());
    }
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    let perr = |pos: usize, msg: &str| Error::Parse {
        pos,
        msg: msg.into(),
    };
    let skip_ws = |k: &mut usize| {
        while *k < chars.len() && chars[*k].1.is_whitespace() {
            *k += 1;
        }
    };
    loop {
        skip_ws(&mut k);
        if k >= chars.len() {
            return Err(perr(src.len(), "expected a symbol"));
        }
        let mut op = false;
        if src[chars[k].0..].starts_with("op") {
            op = true;
            k += 2;
            skip_ws(&mut k);
        }
        if k >= chars.len() || chars[k].1 != '[' {
            return Err(perr(
                chars.get(k).map_or(src.len(), |c| c.0),
                "expected `[`",
            ));
        }
        k += 1;
        let a_start = k;
        let mut depth = 0i32;
        let mut comma = None;
        let mut close = None;
        while k < chars.len() {
            match chars[k].1 {
                '(' => depth += 1,
                ')' if depth == 0 => {
                    close = Some(k);
                    break;
                }
                ')' => depth -= 1,
                ',' if depth == 0 && comma.is_none() => comma = Some(k),
                _ => {}
            }
            k += 1;
        }
        let comma =
            comma.ok_or_else(|| perr(chars[a_start - 1].0, "expected `,` inside symbol"))?;
        let close = close.ok_or_else(|| perr(src.len(), "unterminated symbol, expected `)`"))?;
        let pos = |i: usize| chars.get(i).map_or(src.len(), |c| c.0);
        let a_src = &src[pos(a_start)..pos(comma)];
        let b_src = &src[pos(comma + 1)..pos(close)];
        let a = parse_expr_at(a_src, pos(a_start))?;
        let b = parse_expr_at(b_src, pos(comma + 1))?;
        k = close + 1;
        // optional `_p` and `^op`
        if k < chars.len() && chars[k].1 == '_' {
            let start = k + 1;
            let mut end = start;
            while end < chars.len() && chars[end].1.is_ascii_digit() {
                end += 1;
            }
            let given: u32 = src[pos(start)..pos(end)]
                .parse()
                .map_err(|_| perr(pos(k), "expected prime after `_`"))?;
            if given != p {
                return Err(perr(
                    pos(k),
                    &format!("symbol degree {given} differs from the characteristic {p}"),
                ));
            }
            k = end;
        }
        if src[pos(k)..].starts_with("^op") {
            op = true;
            k += 3;
        }
        out.push((a, b, op));
        skip_ws(&mut k);
        if k >= chars.len() {
            break;
        }
        match chars[k].1 {
            '⊗' | '*' | '&' => k += 1,
            _ if src[pos(k)..].starts_with("(x)") => k += 3,
            _ => return Err(perr(pos(k), "expected `⊗` between symbols")),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_tower;

    fn f2t() -> FieldTower {
        parse_tower("GF(2)(t)").unwrap()
    }

    #[test]
    fn merge_examples() {
        let t = f2t();
        let e = t.parse_brauer("[1, t)_2 ⊗ [1, t+1)_2", None).unwrap();
        assert_eq!(t.expr_to_string(&t.merge_same_a(&e)), "[1, t^2+t)_2");
        let e = t.parse_brauer("[1, t) ⊗ [1, t)", None).unwrap();
        assert!(t.merge_same_a(&e).is_empty());
        let e = t.parse_brauer("[1, t) ⊗ [t, t)", None).unwrap();
        assert_eq!(t.merge_same_a(&e).len(), 2);
    }

    #[test]
    fn normalize_examples() {
        let t = f2t();
        let s = t.parse_brauer("[t^2, t)", None).unwrap().entries.remove(0);
        assert_eq!(
            t.normalize_symbol(&s, 2),
            Normalized::Symbol(Symbol::new(t.parse("t").unwrap(), t.parse("t").unwrap()))
        );
        let s = t.parse_brauer("[t, 1)", None).unwrap().entries.remove(0);
        assert!(matches!(t.normalize_symbol(&s, 2), Normalized::Split(_)));
        let s = t.parse_brauer("[0, t)", None).unwrap().entries.remove(0);
        assert!(matches!(t.normalize_symbol(&s, 2), Normalized::Split(_)));
    }

    #[test]
    fn split_examples() {
        let t = f2t();
        let s = t.parse_brauer("[1/t, t)", None).unwrap().entries.remove(0);
        match t.is_split(&s, SplitStrategy::NormSearch(1)).unwrap() {
            SplitStatus::Split(SplitEvidence::Norm { tower, z }) => {
                assert_eq!(tower.norm(&z, 1, 0), s.b)
            }
            other => panic!("{other:?}"),
        }
        let s = t.parse_brauer("[1, t)", None).unwrap().entries.remove(0);
        match t.is_split(&s, SplitStrategy::Both(2)).unwrap() {
            SplitStatus::NonSplit { place, value, .. } => {
                assert_eq!((place.as_str(), value), ("(t)", 1))
            }
            other => panic!("{other:?}"),
        }
        let s = t.parse_brauer("[t, 1)", None).unwrap().entries.remove(0);
        match t.is_split(&s, SplitStrategy::NormSearch(0)).unwrap() {
            SplitStatus::Split(SplitEvidence::Norm { tower, z }) => assert!(tower.is_one(&z)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parsing_and_printing() {
        let t = f2t();
        let e = t.parse_brauer("[t, t+1)_2^op * op[1, t)", None).unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(t.expr_to_string(&e), "[t, t+1)_2 ⊗ [1, t)_2");
        assert_eq!(t.parse_brauer(&t.expr_to_string(&e), None).unwrap(), e);
        assert!(matches!(
            t.parse_brauer("[t, t)_3", None),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            t.parse_brauer("[t t)", None),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            t.parse_brauer("[t, 0)", None),
            Err(Error::Malformed(_))
        ));
        assert!(t.parse_brauer("1", None).unwrap().is_empty());
        let t3 = parse_tower("GF(3)(t)").unwrap();
        let e = t3.parse_brauer("op [t, t+1)", None).unwrap();
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn multivariate_normalization() {
        let t = parse_tower("GF(2)(t1,t2)").unwrap();
        let s = t
            .parse_brauer("[t1^2*t2^2 + t1, t1^3*t2^2)", None)
            .unwrap()
            .entries
            .remove(0);
        let Normalized::Symbol(n) = t.normalize_symbol(&s, 1) else {
            panic!()
        };
        assert_eq!(t.display(&n.a), "t1*t2+t1");
        assert_eq!(t.display(&n.b), "t1");
    }
}
