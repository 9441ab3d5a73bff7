//! Finite fields `F_{p^d}` with table-driven arithmetic.
//!
//! An element is encoded as the integer `c_0 + c_1 p + ... + c_{d-1} p^{d-1}`
//! where `c_k` is the coefficient of `g^k` and `g` is the class of `x` modulo
//! the canonical modulus (the lexicographically smallest monic irreducible of
//! degree `d`, comparing coefficients from `x^{d-1}` down to `x^0`).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 1024;

/// Field element encoding (see module docs).
pub type Fe = u32;

pub struct FiniteField {
    p: u32,
    d: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.d == other.d
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.d)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u32;
    while (k as u64) * (k as u64) <= n as u64 {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut k = 2u32;
    while (k as u64) * (k as u64) <= n as u64 {
        if n.is_multiple_of(k) {
            out.push(k);
            while n.is_multiple_of(k) {
                n /= k;
            }
        }
        k += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Dense polynomials over F_p, used only while constructing the field.
fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = fp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * inv_lead as u64 % p as u64) as u32;
        for (k, &bk) in b.iter().enumerate() {
            let t = (c as u64 * bk as u64 % p as u64) as u32;
            r[shift + k] = (r[shift + k] + p - t) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    r as u32
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    let d = f.len() - 1;
    if d <= 1 {
        return d == 1;
    }
    // trial division by every monic polynomial of degree 1..=d/2
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for code in 0..count {
            let mut g = vec![0u32; deg + 1];
            let mut c = code;
            for slot in g.iter_mut().take(deg) {
                *slot = (c % p as u64) as u32;
                c /= p as u64;
            }
            g[deg] = 1;
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn canonical_modulus(p: u32, d: u32) -> Vec<u32> {
    if d == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(d);
    // code digits: most significant digit is the x^{d-1} coefficient
    for code in 0..count {
        let mut f = vec![0u32; d as usize + 1];
        let mut c = code;
        for fk in f.iter_mut().take(d as usize) {
            *fk = (c % p as u64) as u32;
            c /= p as u64;
        }
        f[d as usize] = 1;
        if fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    /// Builds `F_{p^d}`; `p` must be prime and `p^d ≤ 2^16`.
    pub fn new(p: u32, d: u32) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if d == 0 {
            return Err(Error::InvalidField("extension degree must be ≥ 1".into()));
        }
        let q = (p as u64)
            .checked_pow(d)
            .filter(|&q| q <= MAX_FIELD_SIZE)
            .ok_or_else(|| {
                Error::InvalidField(format!("field size {p}^{d} exceeds {MAX_FIELD_SIZE}"))
            })? as u32;
        let modulus = canonical_modulus(p, d);
        let mut field = FiniteField {
            p,
            d,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            add_table: None,
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    pub fn prime_field(p: u32) -> Result<Arc<Self>> {
        Self::new(p, 1)
    }

    /// Parses sizes written as `q`, `p^d`.
    pub fn from_size(q: u64) -> Result<Arc<Self>> {
        if !(2..=MAX_FIELD_SIZE).contains(&q) {
            return Err(Error::InvalidField(format!("unsupported field size {q}")));
        }
        let p = prime_factors(q as u32)[0];
        let mut d = 0;
        let mut r = q;
        while r.is_multiple_of(p as u64) {
            r /= p as u64;
            d += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        Self::new(p, d)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u32; 2 * self.d as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let r = fp_rem(&prod, &self.modulus, p);
        self.digits_value(&r)
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let factors = prime_factors(order.max(1));
        let slow_pow = |f: &FiniteField, x: u32, mut e: u64| {
            let mut r = 1u32;
            let mut base = x;
            while e > 0 {
                if e & 1 == 1 {
                    r = f.slow_mul(r, base);
                }
                base = f.slow_mul(base, base);
                e >>= 1;
            }
            r
        };
        let mut generator = 1;
        if q > 2 {
            for cand in 2..q {
                if factors
                    .iter()
                    .all(|&r| slow_pow(self, cand, (order / r) as u64) != 1)
                {
                    generator = cand;
                    break;
                }
            }
        }
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            log[x as usize] = k;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        if self.p != 2 && q <= ADD_TABLE_LIMIT {
            let mut table = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = self.digit_add(a, b) as u16;
                }
            }
            self.add_table = Some(table);
        }
    }

    fn digits(&self, mut a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.d as usize);
        for _ in 0..self.d {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    fn digits_value(&self, ds: &[u32]) -> u32 {
        let mut a = 0u32;
        for &c in ds.iter().rev() {
            a = a * self.p + c;
        }
        a
    }

    fn digit_add(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut r = 0u32;
        let mut scale = 1u32;
        while a > 0 || b > 0 {
            r += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        r
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining modulus, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.add_table {
            t[(a * self.q + b) as usize] as u32
        } else {
            self.digit_add(a, b)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 || a == 0 {
            return a;
        }
        if self.d == 1 {
            return self.p - a;
        }
        let p = self.p;
        let mut x = a;
        let mut r = 0u32;
        let mut scale = 1u32;
        while x > 0 {
            r += ((p - x % p) % p) * scale;
            x /= p;
            scale *= p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] + self.log[b as usize];
        let n = self.q - 1;
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a as usize];
        Some(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        self.exp[((l * (e % n)) % n) as usize]
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.p as i64) as u32
    }

    /// The generator `g` (class of `x`); equals 1-digit `p` encoding when `d > 1`.
    pub fn generator(&self) -> Fe {
        if self.d == 1 {
            // prime fields have no symbolic generator; `g` is not meaningful
            0
        } else {
            self.p
        }
    }

    /// Frobenius inverse: the unique `y` with `y^p = a`.
    pub fn pth_root(&self, a: Fe) -> Fe {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// Absolute trace to `F_p`, returned in `0..p`.
    pub fn trace(&self, a: Fe) -> u32 {
        let mut acc = 0u32;
        let mut x = a;
        for _ in 0..self.d {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc < self.p);
        acc
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.q
    }

    /// Coefficients of `a` in the basis `1, g, ..., g^{d-1}`.
    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        self.digits(a)
    }

    pub fn from_coefficients(&self, cs: &[u32]) -> Fe {
        let mut v = cs.to_vec();
        v.resize(self.d as usize, 0);
        self.digits_value(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_moduli() {
        assert_eq!(FiniteField::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(FiniteField::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteField::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn field_axioms_small() {
        for (p, d) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (2, 4)] {
            let f = FiniteField::new(p, d).unwrap();
            let q = f.size();
            for a in 0..q {
                assert_eq!(f.pow(a, q as u64), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                let r = f.pth_root(a);
                assert_eq!(f.pow(r, p as u64), a);
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(FiniteField::new(4, 1).is_err());
        assert!(FiniteField::new(2, 0).is_err());
        assert!(FiniteField::new(2, 17).is_err());
        assert!(FiniteField::from_size(6).is_err());
        assert_eq!(FiniteField::from_size(9).unwrap().degree(), 2);
    }

    #[test]
    fn trace_counts() {
        let f = FiniteField::new(2, 2).unwrap();
        let zeros = f.elements().filter(|&a| f.trace(a) == 0).count();
        assert_eq!(zeros, 2);
    }
}
