//! Dense univariate polynomials over a finite field.
//!
//! Used for gcds, partial fractions and factorization. Coefficients are stored
//! constant term first and the vector is always trimmed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ff::{Fe, FiniteField};

const FACTOR_SEED: u64 = 0x5eed_f00d;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct UPoly {
    coeffs: Vec<Fe>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly { coeffs: vec![1] }
    }

    pub fn constant(c: Fe) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        UPoly { coeffs: vec![0, 1] }
    }

    /// `c * x^k`
    pub fn monomial(c: Fe, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fe {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Fe {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Self, f: &FiniteField) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let v = (0..n)
            .map(|k| f.add(self.coeff(k), other.coeff(k)))
            .collect();
        Self::new(v)
    }

    pub fn neg(&self, f: &FiniteField) -> Self {
        UPoly {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self, f: &FiniteField) -> Self {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Fe, f: &FiniteField) -> Self {
        Self::new(self.coeffs.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        UPoly { coeffs: v }
    }

    pub fn mul(&self, other: &Self, f: &FiniteField) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        Self::new(v)
    }

    pub fn pow(&self, mut e: u64, f: &FiniteField) -> Self {
        let mut r = Self::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f);
            }
        }
        r
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self, f: &FiniteField) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.lead()).unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = f.mul(r[k], inv);
            if c == 0 {
                continue;
            }
            q[k - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                r[idx] = f.sub(r[idx], f.mul(c, dj));
            }
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn rem(&self, d: &Self, f: &FiniteField) -> Self {
        self.divrem(d, f).1
    }

    pub fn monic(&self, f: &FiniteField) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(f.inv(self.lead()).unwrap(), f)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self, f: &FiniteField) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self, f: &FiniteField) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            let s2 = s0.sub(&q.mul(&s1, f), f);
            let t2 = t0.sub(&q.mul(&t1, f), f);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead()).unwrap();
        (r0.scale(inv, f), s0.scale(inv, f), t0.scale(inv, f))
    }

    pub fn derivative(&self, f: &FiniteField) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| f.mul(c, f.from_int(k as i64)))
            .collect();
        Self::new(v)
    }

    pub fn eval(&self, x: Fe, f: &FiniteField) -> Fe {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self(g(x))`
    pub fn compose(&self, g: &Self, f: &FiniteField) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, &c| {
            acc.mul(g, f).add(&Self::constant(c), f)
        })
    }

    /// The polynomial `h` with `h^p = self`, if it exists.
    pub fn pth_root(&self, f: &FiniteField) -> Option<Self> {
        let p = f.characteristic() as usize;
        let mut v = Vec::new();
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c != 0 && k % p != 0 {
                return None;
            }
            if k % p == 0 {
                v.push(f.pth_root(c));
            }
        }
        Some(Self::new(v))
    }

    pub fn powmod(&self, mut e: u64, m: &Self, f: &FiniteField) -> Self {
        let mut r = Self::one().rem(m, f);
        let mut base = self.rem(m, f);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base, f).rem(m, f);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, f).rem(m, f);
            }
        }
        r
    }

    pub fn is_irreducible(&self, f: &FiniteField) -> bool {
        match self.degree() {
            None | Some(0) => false,
            Some(1) => true,
            Some(_) => {
                let fac = factor(self, f);
                fac.len() == 1 && fac[0].1 == 1
            }
        }
    }
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with
/// `f = prod g_i^i`, each `g_i` squarefree and monic.
pub fn squarefree(fpoly: &UPoly, f: &FiniteField) -> Vec<(UPoly, u32)> {
    let mut out = Vec::new();
    if fpoly.degree().unwrap_or(0) == 0 {
        return out;
    }
    let p = f.characteristic();
    let mut c = fpoly.gcd(&fpoly.derivative(f), f);
    let mut w = fpoly.divrem(&c, f).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = w.gcd(&c, f);
        let z = w.divrem(&y, f).0;
        if !z.is_one() {
            out.push((z.monic(f), i));
        }
        i += 1;
        w = y;
        c = c.divrem(&w, f).0;
    }
    if !c.is_one() {
        let root = c.pth_root(f).expect("remaining cofactor is a p-th power");
        for (g, m) in squarefree(&root.monic(f), f) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(fpoly: &UPoly, f: &FiniteField) -> Vec<(UPoly, usize)> {
    let q = f.size() as u64;
    let mut out = Vec::new();
    let mut rest = fpoly.clone();
    let mut h = UPoly::x();
    let mut i = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (i + 1) {
            break;
        }
        i += 1;
        h = h.powmod(q, &rest, f);
        let g = h.sub(&UPoly::x(), f).gcd(&rest, f);
        if !g.is_one() {
            rest = rest.divrem(&g, f).0;
            h = h.rem(&rest, f);
            out.push((g, i));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let d = rest.degree().unwrap();
        out.push((rest, d));
    }
    out
}

fn random_poly(rng: &mut ChaCha8Rng, deg: usize, f: &FiniteField) -> UPoly {
    UPoly::new((0..deg).map(|_| rng.gen_range(0..f.size())).collect())
}

fn equal_degree(fpoly: &UPoly, d: usize, f: &FiniteField, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
    let n = fpoly.degree().unwrap();
    if n == d {
        return vec![fpoly.clone()];
    }
    let q = f.size() as u64;
    loop {
        let a = random_poly(rng, n, f);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if f.characteristic() == 2 {
            // trace map a + a^2 + ... + a^{2^{kd-1}}
            let steps = f.degree() as usize * d;
            let mut acc = UPoly::zero();
            let mut x = a.rem(fpoly, f);
            for _ in 0..steps {
                acc = acc.add(&x, f);
                x = x.mul(&x, f).rem(fpoly, f);
            }
            acc
        } else {
            // a^{(q^d - 1)/2} = (a^{1+q+...+q^{d-1}})^{(q-1)/2}
            let mut norm = UPoly::one();
            let mut x = a.rem(fpoly, f);
            for _ in 0..d {
                norm = norm.mul(&x, f).rem(fpoly, f);
                x = x.powmod(q, fpoly, f);
            }
            norm.powmod((q - 1) / 2, fpoly, f).sub(&UPoly::one(), f)
        };
        let g = b.gcd(fpoly, f);
        if let Some(gd) = g.degree() {
            if gd > 0 && gd < n {
                let h = fpoly.divrem(&g, f).0.monic(f);
                let mut out = equal_degree(&g, d, f, rng);
                out.extend(equal_degree(&h, d, f, rng));
                return out;
            }
        }
    }
}

/// Factorization into monic irreducibles with multiplicities, sorted by
/// (degree, coefficients). The leading coefficient is dropped.
pub fn factor(fpoly: &UPoly, f: &FiniteField) -> Vec<(UPoly, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
    let mut out = Vec::new();
    for (g, m) in squarefree(&fpoly.monic(f), f) {
        for (h, d) in distinct_degree(&g, f) {
            for irr in equal_degree(&h, d, f, &mut rng) {
                out.push((irr, m));
            }
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs.iter().rev().cmp(b.0.coeffs.iter().rev()))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> std::sync::Arc<FiniteField> {
        FiniteField::new(2, 1).unwrap()
    }

    #[test]
    fn factor_small_examples() {
        let f = f2();
        // t^2 + t
        let fac = factor(&UPoly::new(vec![0, 1, 1]), &f);
        assert_eq!(
            fac,
            vec![(UPoly::new(vec![0, 1]), 1), (UPoly::new(vec![1, 1]), 1)]
        );
        // t^2 + t + 1
        let fac = factor(&UPoly::new(vec![1, 1, 1]), &f);
        assert_eq!(fac, vec![(UPoly::new(vec![1, 1, 1]), 1)]);
        // t^4 + t = t (t+1) (t^2+t+1)
        let fac = factor(&UPoly::new(vec![0, 1, 0, 0, 1]), &f);
        assert_eq!(
            fac,
            vec![
                (UPoly::new(vec![0, 1]), 1),
                (UPoly::new(vec![1, 1]), 1),
                (UPoly::new(vec![1, 1, 1]), 1)
            ]
        );
    }

    #[test]
    fn squarefree_handles_pth_powers() {
        let f = FiniteField::new(3, 1).unwrap();
        // (x+1)^3 (x+2)^2 x
        let a = UPoly::new(vec![1, 1]).pow(3, &f);
        let b = UPoly::new(vec![2, 1]).pow(2, &f);
        let g = a.mul(&b, &f).mul(&UPoly::x(), &f);
        let fac = factor(&g, &f);
        assert_eq!(
            fac,
            vec![
                (UPoly::x(), 1),
                (UPoly::new(vec![1, 1]), 3),
                (UPoly::new(vec![2, 1]), 2)
            ]
        );
    }

    #[test]
    fn ext_gcd_identity() {
        let f = FiniteField::new(5, 1).unwrap();
        let a = UPoly::new(vec![1, 2, 3, 4]);
        let b = UPoly::new(vec![4, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b, &f);
        assert_eq!(s.mul(&a, &f).add(&t.mul(&b, &f), &f), g);
    }
}
