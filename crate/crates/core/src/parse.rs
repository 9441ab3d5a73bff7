//! Text formats: element expressions, tower descriptions and symbols.
//!
//! Element grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | name | '(' expr ')'
//! ```
//!
//! Integers are read in the prime field; `g` is the generator of the constant
//! field; other names are base variables or tower generators.

use crate::error::{Error, Result};
use crate::ff::FiniteField;
use crate::ratfunc::RatFunc;
use crate::tower::{Elem, ExtStep, FieldTower};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    /// Names occurring in the expression.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Int(_) => {}
            Expr::Name(n) => out.push(n),
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(u64),
    Name(String),
    Sym(char),
}

fn lex(src: &str, offset: usize) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let text: String = chars[start..k].iter().map(|x| x.1).collect();
            let v = text.parse::<u64>().map_err(|_| Error::Parse {
                pos: offset + pos,
                msg: "integer too large".into(),
            })?;
            out.push((offset + pos, Tok::Int(v)));
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((
                offset + pos,
                Tok::Name(chars[start..k].iter().map(|x| x.1).collect()),
            ));
        } else if "+-*/^()".contains(c) {
            out.push((offset + pos, Tok::Sym(c)));
            k += 1;
        } else if c == '−' {
            out.push((offset + pos, Tok::Sym('-')));
            k += 1;
        } else {
            return Err(Error::Parse {
                pos: offset + pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    k: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.k).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.k).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.k += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let paren = self.eat('(');
        let neg = if paren { self.eat('-') || neg } else { neg };
        let e = match self.peek() {
            Some(Tok::Int(v)) => *v,
            _ => return self.err("expected integer exponent"),
        };
        self.k += 1;
        if paren && !self.eat(')') {
            return self.err("expected `)`");
        }
        let e = i64::try_from(e)
            .ok()
            .filter(|&e| e <= 1 << 20)
            .ok_or(Error::Parse {
                pos: self.pos(),
                msg: "exponent too large".into(),
            })?;
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.k += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Name(n)) => {
                self.k += 1;
                Ok(Expr::Name(n))
            }
            Some(Tok::Sym('(')) => {
                self.k += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(_) => self.err("expected a number, a name or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an element expression; `offset` shifts reported positions.
pub fn parse_expr_at(src: &str, offset: usize) -> Result<Expr> {
    let toks = lex(src, offset)?;
    let mut p = Parser {
        toks,
        k: 0,
        end: offset + src.len(),
    };
    let e = p.expr()?;
    if p.k != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    parse_expr_at(src, 0)
}

/// Arithmetic needed to evaluate an [`Expr`].
#[allow(clippy::wrong_self_convention)]
trait Ring: Sized + Clone {
    fn from_int(&self, n: u64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Result<Self>;
    fn pow(&self, e: i64) -> Result<Self>;
}

fn eval<R: Ring>(e: &Expr, unit: &R, lookup: &dyn Fn(&str) -> Result<R>) -> Result<R> {
    Ok(match e {
        Expr::Int(n) => unit.from_int(*n),
        Expr::Name(n) => lookup(n)?,
        Expr::Neg(a) => eval(a, unit, lookup)?.neg(),
        Expr::Add(a, b) => eval(a, unit, lookup)?.add(&eval(b, unit, lookup)?),
        Expr::Sub(a, b) => eval(a, unit, lookup)?.sub(&eval(b, unit, lookup)?),
        Expr::Mul(a, b) => eval(a, unit, lookup)?.mul(&eval(b, unit, lookup)?),
        Expr::Div(a, b) => eval(a, unit, lookup)?.div(&eval(b, unit, lookup)?)?,
        Expr::Pow(a, k) => eval(a, unit, lookup)?.pow(*k)?,
    })
}

#[derive(Clone)]
struct LevelElem<'a> {
    tower: &'a FieldTower,
    x: Elem,
}

impl Ring for LevelElem<'_> {
    fn from_int(&self, n: u64) -> Self {
        let p = self.tower.p() as u64;
        self.with(self.tower.from_int((n % p) as i64, self.x.depth()))
    }
    fn add(&self, o: &Self) -> Self {
        self.with(self.tower.add(&self.x, &o.x))
    }
    fn sub(&self, o: &Self) -> Self {
        self.with(self.tower.sub(&self.x, &o.x))
    }
    fn neg(&self) -> Self {
        self.with(self.tower.neg(&self.x))
    }
    fn mul(&self, o: &Self) -> Self {
        self.with(self.tower.mul(&self.x, &o.x))
    }
    fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.with(self.tower.div(&self.x, &o.x)?))
    }
    fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 && self.tower.inv(&self.x).is_none() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.with(self.tower.pow(&self.x, e)))
    }
}

impl<'a> LevelElem<'a> {
    fn with(&self, x: Elem) -> Self {
        LevelElem {
            tower: self.tower,
            x,
        }
    }
}

/// Polynomials in one new indeterminate over a level (constant term first).
#[derive(Clone)]
struct LevelPoly<'a> {
    tower: &'a FieldTower,
    level: usize,
    cs: Vec<Elem>,
}

impl<'a> LevelPoly<'a> {
    fn with(&self, mut cs: Vec<Elem>) -> Self {
        while cs.last().is_some_and(|c| self.tower.is_zero(c)) {
            cs.pop();
        }
        LevelPoly {
            tower: self.tower,
            level: self.level,
            cs,
        }
    }

    fn constant(&self) -> Option<&Elem> {
        match self.cs.len() {
            0 => None,
            1 => Some(&self.cs[0]),
            _ => None,
        }
    }
}

impl Ring for LevelPoly<'_> {
    fn from_int(&self, n: u64) -> Self {
        let p = self.tower.p() as u64;
        self.with(vec![self.tower.from_int((n % p) as i64, self.level)])
    }
    fn add(&self, o: &Self) -> Self {
        let t = self.tower;
        let n = self.cs.len().max(o.cs.len());
        let z = t.zero(self.level);
        self.with(
            (0..n)
                .map(|k| t.add(self.cs.get(k).unwrap_or(&z), o.cs.get(k).unwrap_or(&z)))
                .collect(),
        )
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self {
        self.with(self.cs.iter().map(|c| self.tower.neg(c)).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        let t = self.tower;
        if self.cs.is_empty() || o.cs.is_empty() {
            return self.with(Vec::new());
        }
        let mut v = vec![t.zero(self.level); self.cs.len() + o.cs.len() - 1];
        for (i, a) in self.cs.iter().enumerate() {
            for (j, b) in o.cs.iter().enumerate() {
                v[i + j] = t.add(&v[i + j], &t.mul(a, b));
            }
        }
        self.with(v)
    }
    fn div(&self, o: &Self) -> Result<Self> {
        let c = match o.constant() {
            Some(c) => c,
            None if o.cs.is_empty() => return Err(Error::ZeroDenominator),
            None => {
                return Err(Error::Malformed(
                    "division by a polynomial in the step generator".into(),
                ))
            }
        };
        let inv = self.tower.inv(c).ok_or(Error::ZeroDenominator)?;
        Ok(self.with(self.cs.iter().map(|x| self.tower.mul(x, &inv)).collect()))
    }
    fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            let c = self
                .constant()
                .ok_or_else(|| Error::Malformed("negative power of the step generator".into()))?;
            let x = self.tower.pow(c, e);
            return Ok(self.with(vec![x]));
        }
        let mut r = self.from_int(1);
        for _ in 0..e {
            r = r.mul(self);
        }
        Ok(r)
    }
}

impl FieldTower {
    fn lookup(&self, name: &str, level: usize) -> Result<Elem> {
        if name == "g" {
            let f = self.field();
            if f.degree() == 1 {
                return Err(Error::UnknownVariable(
                    "g (the constant field is prime)".into(),
                ));
            }
            let c = crate::ratfunc::RatFunc::constant(f, self.nvars(), f.generator());
            return Ok(self.from_base(c, level));
        }
        if let Some(v) = self.vars().iter().position(|x| x == name) {
            return Ok(self.var(v, level));
        }
        match self.level_of_name(name) {
            Some(k) if k <= level => Ok(self.lift(&self.generator(k), k, level)),
            Some(k) => Err(Error::LevelMismatch(format!(
                "`{name}` lives at level {k}, above level {level}"
            ))),
            None => Err(Error::UnknownVariable(name.into())),
        }
    }

    /// Lowest level at which all names of `e` are defined.
    pub fn level_of_expr(&self, e: &Expr) -> Result<usize> {
        let mut level = 0;
        for n in e.names() {
            if n == "g" || self.vars().iter().any(|v| v == n) {
                continue;
            }
            level = level.max(
                self.level_of_name(n)
                    .ok_or_else(|| Error::UnknownVariable(n.into()))?,
            );
        }
        Ok(level)
    }

    pub fn eval_expr(&self, e: &Expr, level: usize) -> Result<Elem> {
        if level > self.top() {
            return Err(Error::LevelMismatch(format!(
                "level {level} above tower top {}",
                self.top()
            )));
        }
        let unit = LevelElem {
            tower: self,
            x: self.one(level),
        };
        let lookup = |n: &str| {
            Ok(LevelElem {
                tower: self,
                x: self.lookup(n, level)?,
            })
        };
        Ok(eval(e, &unit, &lookup)?.x)
    }

    /// Parses an element at the given level.
    pub fn parse_elem(&self, src: &str, level: usize) -> Result<Elem> {
        self.eval_expr(&parse_expr(src)?, level)
    }

    /// Parses an element at the top level.
    pub fn parse(&self, src: &str) -> Result<Elem> {
        self.parse_elem(src, self.top())
    }

    fn eval_in_new_var(&self, e: &Expr, var: &str, offset: usize) -> Result<Vec<Elem>> {
        let level = self.top();
        let unit = LevelPoly {
            tower: self,
            level,
            cs: vec![self.one(level)],
        };
        let lookup = |n: &str| {
            if n == var {
                Ok(unit.with(vec![self.zero(level), self.one(level)]))
            } else {
                Ok(unit.with(vec![self.lookup(n, level)?]))
            }
        };
        eval(e, &unit, &lookup)
            .map(|p| p.cs)
            .map_err(|err| match err {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset,
                    msg,
                },
                other => other,
            })
    }
}

/// Parses `GF(q)(t1,...)` followed by `; KIND name: lhs = rhs` steps.
pub fn parse_tower(src: &str) -> Result<FieldTower> {
    let mut parts = Vec::new();
    let mut start = 0;
    for (k, c) in src.char_indices() {
        if c == ';' {
            parts.push((start, &src[start..k]));
            start = k + 1;
        }
    }
    parts.push((start, &src[start..]));
    let (hoff, header) = parts[0];
    let mut tower = parse_header(header, hoff)?;
    for &(off, part) in &parts[1..] {
        let step = parse_step(&tower, part, off)?;
        tower = tower.make_step(step)?;
    }
    Ok(tower)
}

fn parse_header(h: &str, off: usize) -> Result<FieldTower> {
    let lead = h.len() - h.trim_start().len();
    let s = h.trim();
    let err = |msg: &str| Error::Parse {
        pos: off + lead,
        msg: msg.into(),
    };
    let rest = s
        .strip_prefix("GF(")
        .ok_or_else(|| err("expected `GF(q)(vars)`"))?;
    let close = rest.find(')').ok_or_else(|| err("unclosed `GF(`"))?;
    let q: u64 = rest[..close]
        .trim()
        .parse()
        .map_err(|_| err("field size must be an integer"))?;
    let field = FiniteField::from_size(q)?;
    let vars_part = rest[close + 1..].trim();
    let inner = vars_part
        .strip_prefix('(')
        .and_then(|v| v.strip_suffix(')'))
        .ok_or_else(|| err("expected variable list `(t, ...)`"))?;
    let vars: Vec<&str> = inner.split(',').map(|v| v.trim()).collect();
    for v in &vars {
        let ok = v.chars().next().is_some_and(|c| c.is_alphabetic())
            && v.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(err(&format!("invalid variable name `{v}`")));
        }
    }
    FieldTower::rational(field, &vars)
}

fn parse_step(tower: &FieldTower, part: &str, off: usize) -> Result<ExtStep> {
    let lead = part.len() - part.trim_start().len();
    let s = part.trim();
    let err = |pos: usize, msg: String| Error::Parse {
        pos: off + lead + pos,
        msg,
    };
    let (kind, rest) = s
        .split_once(char::is_whitespace)
        .ok_or_else(|| err(0, "expected `AS`, `ROOT` or `ALG`".into()))?;
    let (name, eq) = rest
        .split_once(':')
        .ok_or_else(|| err(kind.len(), "expected `name:`".into()))?;
    let name = name.trim();
    if !(name.chars().next().is_some_and(|c| c.is_alphabetic())
        && name.chars().all(|c| c.is_alphanumeric() || c == '_'))
    {
        return Err(err(kind.len(), format!("invalid generator name `{name}`")));
    }
    let eq_off = lead + s.len() - eq.len();
    let (lhs, rhs) = eq
        .split_once('=')
        .ok_or_else(|| err(s.len() - eq.len(), "expected `=`".into()))?;
    let lhs_e = parse_expr_at(lhs, off + eq_off)?;
    let rhs_e = parse_expr_at(rhs, off + eq_off + lhs.len() + 1)?;
    let diff = Expr::Sub(Box::new(lhs_e), Box::new(rhs_e));
    let mut poly = tower.eval_in_new_var(&diff, name, 0)?;
    let level = tower.top();
    let p = tower.p() as usize;
    let Some(lc) = poly.last().cloned() else {
        return Err(err(0, "equation is trivial".into()));
    };
    let inv = tower.inv(&lc).ok_or(Error::ZeroDenominator)?;
    poly = poly.iter().map(|c| tower.mul(c, &inv)).collect();
    let deg = poly.len() - 1;
    let coeff_zero = |k: usize| tower.is_zero(&poly[k]);
    match kind {
        "AS" => {
            let minus_one = tower.neg(&tower.one(level));
            if deg != p || poly[1] != minus_one || !(2..p).all(coeff_zero) {
                return Err(err(
                    0,
                    format!("Artin–Schreier step must read `{name}^{p} - {name} = a`"),
                ));
            }
            Ok(ExtStep::artin_schreier(name, tower.neg(&poly[0])))
        }
        "ROOT" => {
            if deg != p || !(1..p).all(coeff_zero) {
                return Err(err(0, format!("root step must read `{name}^{p} = b`")));
            }
            Ok(ExtStep::insep_root(name, tower.neg(&poly[0])))
        }
        "ALG" => Ok(ExtStep::simple(name, poly)),
        other => Err(err(0, format!("unknown step kind `{other}`"))),
    }
}

/// Parses a base-field element over `F_q(vars)`.
pub fn parse_ratfunc(
    field: &std::sync::Arc<FiniteField>,
    vars: &[&str],
    src: &str,
) -> Result<RatFunc> {
    let t = FieldTower::rational(field.clone(), vars)?;
    match t.parse_elem(src, 0)? {
        Elem::Base(r) => Ok(r),
        Elem::Ext(_) => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions() {
        let f = FiniteField::new(2, 1).unwrap();
        let r = parse_ratfunc(&f, &["t"], "(t^2+1)/(t+1)").unwrap();
        assert_eq!(r.display(&["t".into()]), "t+1");
        let r = parse_ratfunc(&f, &["t"], "t^-2 * t^(3)").unwrap();
        assert_eq!(r.display(&["t".into()]), "t");
        assert!(matches!(
            parse_expr("t +"),
            Err(Error::Parse { pos: 3, .. })
        ));
        assert!(matches!(
            parse_expr("t $ 1"),
            Err(Error::Parse { pos: 2, .. })
        ));
        assert!(matches!(
            parse_ratfunc(&f, &["t"], "1/(t+t)"),
            Err(Error::ZeroDenominator)
        ));
        assert!(matches!(
            parse_ratfunc(&f, &["t"], "x"),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn constant_generator() {
        let f = FiniteField::new(2, 2).unwrap();
        let r = parse_ratfunc(&f, &["t"], "(g+1)*t + g^3").unwrap();
        assert_eq!(r.display(&["t".into()]), "(g+1)*t+1");
    }

    #[test]
    fn towers_round_trip() {
        let src = "GF(2)(t) ; AS i: i^2+i = 1/t ; ROOT s: s^2 = t";
        let t = parse_tower(src).unwrap();
        assert_eq!(t.describe(), src);
        assert_eq!(parse_tower(&t.describe()).unwrap(), t);
        let t3 = parse_tower("GF(3)(x, y); AS i: i^3 - i = x/y").unwrap();
        assert_eq!(t3.describe(), "GF(3)(x,y) ; AS i: i^3-i = x/y");
        assert_eq!(parse_tower(&t3.describe()).unwrap(), t3);
        let c = parse_tower("GF(2)(t); ALG c: c^2 + c + 1 = 0").unwrap();
        assert_eq!(parse_tower(&c.describe()).unwrap(), c);
        let e = t.parse("s*i + 1/s").unwrap();
        assert_eq!(t.parse(&t.display(&e)).unwrap(), e);
    }

    #[test]
    fn tower_errors() {
        assert!(matches!(
            parse_tower("GF(2)(t) ; ROOT s: s^2 = t^2"),
            Err(Error::DegenerateStep(_))
        ));
        assert!(matches!(
            parse_tower("GF(6)(t)"),
            Err(Error::InvalidField(_))
        ));
        assert!(matches!(
            parse_tower("GF(2)(t) ; AS i: i^2 = t"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_tower("GF(2)(t) ; FOO i: i^2 = t"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_tower("GF(2)(t) ; ROOT s: s^2 = u"),
            Err(Error::UnknownVariable(_))
        ));
    }
}
