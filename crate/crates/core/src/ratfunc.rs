//! Reduced rational functions over `F_q`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::display::paren;
use crate::error::{Error, Result};
use crate::ff::{Fe, FiniteField};
use crate::poly::Poly;

/// `num / den` with `gcd(num, den) = 1` and `den` of leading coefficient 1.
/// Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.den
            .cmp(&other.den)
            .then_with(|| self.num.cmp(&other.num))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

/// Builds the reduced, canonically normalized fraction `n / d`.
pub fn normalize(n: Poly, d: Poly) -> Result<RatFunc> {
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(RatFunc::reduce(n, d))
}

impl RatFunc {
    fn reduce(n: Poly, d: Poly) -> Self {
        if n.is_zero() {
            let one = Poly::one(d.field(), d.nvars());
            return RatFunc { num: n, den: one };
        }
        let g = n.gcd(&d);
        let (n, d) = if g.is_one() {
            (n, d)
        } else {
            (n.div_exact(&g).unwrap(), d.div_exact(&g).unwrap())
        };
        let lc = d.lc();
        if lc == 1 {
            RatFunc { num: n, den: d }
        } else {
            let inv = d.field().inv(lc).unwrap();
            RatFunc {
                num: n.scale(inv),
                den: d.scale(inv),
            }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.field(), p.nvars());
        RatFunc { num: p, den: one }
    }

    pub fn zero(field: &Arc<FiniteField>, nvars: usize) -> Self {
        Self::from_poly(Poly::zero(field, nvars))
    }

    pub fn one(field: &Arc<FiniteField>, nvars: usize) -> Self {
        Self::from_poly(Poly::one(field, nvars))
    }

    pub fn constant(field: &Arc<FiniteField>, nvars: usize, c: Fe) -> Self {
        Self::from_poly(Poly::constant(field, nvars, c))
    }

    pub fn var(field: &Arc<FiniteField>, nvars: usize, v: usize) -> Self {
        Self::from_poly(Poly::var(field, nvars, v))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.num.field()
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Fe> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::reduce(self.num.add(&other.num), self.den.clone());
        }
        let n = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::reduce(n, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field(), self.nvars());
        }
        // cross cancellation keeps the result reduced
        let g1 = self.num.gcd(&other.den);
        let g2 = other.num.gcd(&self.den);
        let (n1, d2) = if g1.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            (
                self.num.div_exact(&g1).unwrap(),
                other.den.div_exact(&g1).unwrap(),
            )
        };
        let (n2, d1) = if g2.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            (
                other.num.div_exact(&g2).unwrap(),
                self.den.div_exact(&g2).unwrap(),
            )
        };
        let n = n1.mul(&n2);
        let d = d1.mul(&d2);
        let lc = d.lc();
        if lc == 1 {
            RatFunc { num: n, den: d }
        } else {
            let inv = d.field().inv(lc).unwrap();
            RatFunc {
                num: n.scale(inv),
                den: d.scale(inv),
            }
        }
    }

    pub fn scale(&self, c: Fe) -> Self {
        if c == 0 {
            return Self::zero(self.field(), self.nvars());
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let inv = other.inv().ok_or(Error::ZeroDenominator)?;
        Ok(self.mul(&inv))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let e = e as u64;
        // numerator and denominator stay coprime under powers
        let num = self.num.pow(e);
        let den = self.den.pow(e);
        RatFunc { num, den }
    }

    /// `x ↦ x^p`
    pub fn frobenius(&self) -> Self {
        RatFunc {
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    /// Returns `y` with `y^p = self`, or `None` when `self` is not a p-th power.
    /// In reduced form this is exactly divisibility of all exponents by `p`.
    pub fn pth_root(&self) -> Option<Self> {
        let n = self.num.pth_root()?;
        let d = self.den.pth_root()?;
        Some(RatFunc { num: n, den: d })
    }

    pub fn is_pth_power(&self) -> bool {
        self.pth_root().is_some()
    }

    /// Formal partial derivative by the quotient rule.
    pub fn derivative(&self, v: usize) -> Self {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        let n = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::reduce(n, self.den.mul(&self.den))
    }

    pub fn substitute(&self, images: &[RatFunc]) -> Result<Self> {
        let eval = |p: &Poly| -> RatFunc {
            let mut acc = RatFunc::zero(images[0].field(), images[0].nvars());
            for &(m, c) in p.terms() {
                let mut t = RatFunc::constant(images[0].field(), images[0].nvars(), c);
                for (v, img) in images.iter().enumerate().take(p.nvars()) {
                    let e = m.exp(v);
                    if e > 0 {
                        t = t.mul(&img.pow(e as i64));
                    }
                }
                acc = acc.add(&t);
            }
            acc
        };
        eval(&self.num).div(&eval(&self.den))
    }

    pub fn map_coefficients(
        &self,
        field: &Arc<FiniteField>,
        map: impl Fn(Fe) -> Fe + Copy,
    ) -> Self {
        Self::reduce(
            self.num.map_coefficients(field, map),
            self.den.map_coefficients(field, map),
        )
    }

    pub fn display(&self, names: &[String]) -> String {
        let n = self.num.display(names);
        if self.den.is_one() {
            return n;
        }
        format!("{}/{}", paren(&n), paren(&self.den.display(names)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::upoly::UPoly;

    fn t_poly(f: &Arc<FiniteField>, coeffs: &[u32]) -> Poly {
        Poly::from_upoly(f, 1, 0, &UPoly::new(coeffs.to_vec()))
    }

    #[test]
    fn normalize_examples() {
        let f = FiniteField::new(2, 1).unwrap();
        // (t^2+t)/t = t+1
        let r = normalize(t_poly(&f, &[0, 1, 1]), t_poly(&f, &[0, 1])).unwrap();
        assert_eq!(r, RatFunc::from_poly(t_poly(&f, &[1, 1])));
        // t/t = 1
        let r = normalize(t_poly(&f, &[0, 1]), t_poly(&f, &[0, 1])).unwrap();
        assert!(r.is_one());
        // (t^2+1)/(t+1) = t+1 since t^2+1 = (t+1)^2
        let r = normalize(t_poly(&f, &[1, 0, 1]), t_poly(&f, &[1, 1])).unwrap();
        assert_eq!(r, RatFunc::from_poly(t_poly(&f, &[1, 1])));
        assert_eq!(
            normalize(t_poly(&f, &[1]), Poly::zero(&f, 1)),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn pth_root_examples() {
        let f = FiniteField::new(2, 1).unwrap();
        let t = RatFunc::var(&f, 1, 0);
        assert_eq!(t.pow(2).pth_root(), Some(t.clone()));
        assert_eq!(t.pth_root(), None);
        // (t1^2 t2^4 + t1^4)/t2^2 -> (t1 t2^2 + t1^2)/t2
        let t1 = RatFunc::var(&f, 2, 0);
        let t2 = RatFunc::var(&f, 2, 1);
        let x = t1
            .pow(2)
            .mul(&t2.pow(4))
            .add(&t1.pow(4))
            .div(&t2.pow(2))
            .unwrap();
        let expected = t1.mul(&t2.pow(2)).add(&t1.pow(2)).div(&t2).unwrap();
        let root = x.pth_root().unwrap();
        assert_eq!(root, expected);
        assert_eq!(root.pow(2), x);
    }

    #[test]
    fn derivative_examples() {
        let f = FiniteField::new(2, 1).unwrap();
        let t = RatFunc::var(&f, 1, 0);
        let one = RatFunc::one(&f, 1);
        assert!(t.pow(2).derivative(0).is_zero());
        assert_eq!(t.pow(3).derivative(0), t.pow(2));
        let x = one.div(&t.add(&one)).unwrap();
        assert_eq!(x.derivative(0), one.div(&t.add(&one).pow(2)).unwrap());
    }
}
