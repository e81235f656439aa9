//! Finite fields F_q, q = p^e.
//!
//! Elements are stored as `u32` indices in `0..q`. For a prime field the index
//! is the residue itself. For an extension field the index encodes the
//! coefficients of the reducing polynomial's quotient ring in base p, least
//! significant digit first, so `x` is `Fq(p)` and `x + 1` is `Fq(p + 1)`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest prime accepted as a field size without further configuration.
pub const PRIME_BOUND: u32 = 1 << 16;

/// Largest extension field for which the multiplication table is built.
pub const EXTENSION_BOUND: u32 = 1 << 10;

/// An element of F_q; meaningful only together with its [`FiniteField`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field operation selector for [`FiniteField::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
}

#[derive(Clone, Debug)]
struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    degree: u32,
    q: u32,
    /// Monic reducing polynomial, constant term first. `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, e)` when `q = p^e` for a prime `p`.
fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

impl FiniteField {
    /// F_q for a prime `q <= PRIME_BOUND` or `q` in {4, 8, 9}.
    pub fn new(q: u32) -> Result<Self> {
        match q {
            4 => Self::with_modulus(2, &[1, 1, 1]),
            8 => Self::with_modulus(2, &[1, 1, 0, 1]),
            9 => Self::with_modulus(3, &[1, 0, 1]),
            _ if is_prime(q) => Self::prime(q),
            _ => match prime_power(q) {
                Some((p, e)) => Err(Error::UnsupportedField(format!(
                    "q = {q} = {p}^{e} needs an explicit irreducible polynomial"
                ))),
                None => Err(Error::UnsupportedField(format!(
                    "q = {q} is not a prime power"
                ))),
            },
        }
    }

    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not prime")));
        }
        if p > PRIME_BOUND {
            return Err(Error::UnsupportedField(format!(
                "prime {p} exceeds the supported bound {PRIME_BOUND}"
            )));
        }
        Ok(FiniteField {
            p,
            degree: 1,
            q: p,
            modulus: vec![0, 1],
            tables: None,
        })
    }

    /// F_{p^e} as F_p[x]/(f), with `modulus` the coefficients of `f`,
    /// constant term first. `f` must be monic and irreducible.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p) || p > PRIME_BOUND {
            return Err(Error::UnsupportedField(format!(
                "characteristic {p} is not a supported prime"
            )));
        }
        let mut modulus: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        while modulus.last() == Some(&0) {
            modulus.pop();
        }
        if modulus.len() < 2 || modulus[modulus.len() - 1] != 1 {
            return Err(Error::UnsupportedField(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        let degree = (modulus.len() - 1) as u32;
        if degree == 1 {
            return Self::prime(p);
        }
        let q = (p as u64).pow(degree);
        if q > EXTENSION_BOUND as u64 {
            return Err(Error::UnsupportedField(format!(
                "extension field of size {q} exceeds {EXTENSION_BOUND}"
            )));
        }
        let mut field = FiniteField {
            p,
            degree,
            q: q as u32,
            modulus,
            tables: None,
        };
        field.tables = Some(field.build_tables()?);
        Ok(field)
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = vec![0; self.degree as usize];
        let mut a = a;
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn poly_mulmod(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        let e = self.degree as usize;
        let mut prod = vec![0u64; 2 * e];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (e..2 * e).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (k, &m) in self.modulus[..e].iter().enumerate() {
                let idx = top - e + k;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
        }
        prod[..e].iter().map(|&c| c as u32).collect()
    }

    fn build_tables(&self) -> Result<Tables> {
        let q = self.q as usize;
        let digits: Vec<Vec<u32>> = (0..self.q).map(|a| self.digits(a)).collect();
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = digits[a]
                    .iter()
                    .zip(&digits[b])
                    .map(|(x, y)| (x + y) % self.p)
                    .collect();
                add[a * q + b] = self.undigits(&s) as u16;
                mul[a * q + b] = self.undigits(&self.poly_mulmod(&digits[a], &digits[b])) as u16;
            }
        }
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            neg[a] = (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16;
            if a != 0 {
                // a zero divisor means the modulus was reducible
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).ok_or_else(|| {
                    Error::UnsupportedField(format!(
                        "modulus {:?} is reducible over F_{}",
                        self.modulus, self.p
                    ))
                })? as u16;
            }
        }
        Ok(Tables { add, mul, neg, inv })
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// All elements, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        match &self.tables {
            None => {
                let s = a.0 + b.0;
                Fq(if s >= self.p { s - self.p } else { s })
            }
            Some(t) => Fq(t.add[(a.0 * self.q + b.0) as usize] as u32),
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        match &self.tables {
            None => Fq(if a.0 == 0 { 0 } else { self.p - a.0 }),
            Some(t) => Fq(t.neg[a.0 as usize] as u32),
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        match &self.tables {
            None => Fq(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Some(t) => Fq(t.mul[(a.0 * self.q + b.0) as usize] as u32),
        }
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            None => self.pow(a, (self.p - 2) as u64),
            Some(t) => Fq(t.inv[a.0 as usize] as u32),
        })
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let (mut base, mut acc) = (a, Fq::ONE);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn arith(&self, a: Fq, b: Fq, op: FieldOp) -> Result<Fq> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let f2 = FiniteField::new(2).unwrap();
        assert_eq!(f2.add(Fq(1), Fq(1)), Fq(0));
        let f3 = FiniteField::new(3).unwrap();
        assert_eq!(f3.mul(Fq(2), Fq(2)), Fq(1));
        // x * x = x + 1 modulo x^2 + x + 1
        let f4 = FiniteField::new(4).unwrap();
        assert_eq!(f4.mul(Fq(2), Fq(2)), Fq(3));
    }

    #[test]
    fn zero_has_no_inverse() {
        let f = FiniteField::new(5).unwrap();
        assert!(matches!(f.inv(Fq::ZERO), Err(Error::ZeroInverse)));
        assert!(f.arith(Fq::ZERO, Fq::ONE, FieldOp::Inv).is_err());
    }

    #[test]
    fn multiplicative_group_order() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13] {
            let f = FiniteField::new(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(a, (q - 1) as u64), Fq::ONE, "q={q} a={a}");
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Fq::ONE);
            }
        }
    }

    #[test]
    fn user_modulus() {
        // x^4 + x + 1 is irreducible over F_2
        let f16 = FiniteField::with_modulus(2, &[1, 1, 0, 0, 1]).unwrap();
        assert_eq!(f16.q(), 16);
        for a in f16.elements().skip(1) {
            assert_eq!(f16.pow(a, 15), Fq::ONE);
        }
        // x^2 + 1 = (x + 1)^2 over F_2
        assert!(FiniteField::with_modulus(2, &[1, 0, 1]).is_err());
    }

    #[test]
    fn rejects_unsupported_sizes() {
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(16).is_err());
        assert!(FiniteField::new(1).is_err());
    }

    #[test]
    fn field_axioms_f9() {
        let f = FiniteField::new(9).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}
