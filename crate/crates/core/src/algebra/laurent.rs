//! Laurent polynomials in t over F_q.
//!
//! Valuation convention: `val(t) = -1`, so the valuation ring `O = F_q[[1/t]]`
//! is `{val >= 0}` and `val(f) = -deg(f)` for a nonzero Laurent polynomial.

use std::fmt;

use super::field::{FiniteField, Fq};

/// Sparse Laurent polynomial: strictly increasing exponents, no zero
/// coefficients. The zero polynomial has no terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i32, Fq)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Fq::ONE, 0)
    }

    /// `c * t^exp`.
    pub fn monomial(c: Fq, exp: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly {
                terms: vec![(exp, c)],
            }
        }
    }

    /// `t^exp`.
    pub fn t_pow(exp: i32) -> Self {
        Self::monomial(Fq::ONE, exp)
    }

    pub fn constant(c: Fq) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (i32, Fq)>>(terms: I, field: &FiniteField) -> Self {
        let mut raw: Vec<(i32, Fq)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        raw.sort_by_key(|&(e, _)| e);
        let mut out: Vec<(i32, Fq)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc = field.add(*lc, c),
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(i32, Fq)] {
        &self.terms
    }

    /// Highest exponent; `None` stands for `-inf` (the zero polynomial).
    #[inline]
    pub fn deg(&self) -> Option<i32> {
        self.terms.last().map(|&(e, _)| e)
    }

    /// Lowest exponent.
    #[inline]
    pub fn low(&self) -> Option<i32> {
        self.terms.first().map(|&(e, _)| e)
    }

    /// `-deg`; `None` stands for `+inf`.
    #[inline]
    pub fn val(&self) -> Option<i32> {
        self.deg().map(|d| -d)
    }

    pub fn coeff(&self, exp: i32) -> Fq {
        match self.terms.binary_search_by_key(&exp, |&(e, _)| e) {
            Ok(i) => self.terms[i].1,
            Err(_) => Fq::ZERO,
        }
    }

    /// True when the polynomial is `c * t^e` for some nonzero `c`.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn add(&self, other: &Self, field: &FiniteField) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let ((ea, ca), (eb, cb)) = (a[i], b[j]);
            if ea < eb {
                out.push((ea, ca));
                i += 1;
            } else if eb < ea {
                out.push((eb, cb));
                j += 1;
            } else {
                let s = field.add(ca, cb);
                if !s.is_zero() {
                    out.push((ea, s));
                }
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly { terms: out }
    }

    pub fn neg(&self, field: &FiniteField) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|&(e, c)| (e, field.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Self, field: &FiniteField) -> Self {
        self.add(&other.neg(field), field)
    }

    pub fn scale(&self, c: Fq, field: &FiniteField) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|&(e, x)| (e, field.mul(x, c)))
                .collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|&(e, c)| (e + k, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, field: &FiniteField) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = self.terms[0];
            return other.scale(c, field).shift(e);
        }
        if other.terms.len() == 1 {
            let (e, c) = other.terms[0];
            return self.scale(c, field).shift(e);
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.deg().unwrap() + other.deg().unwrap();
        let mut buf = vec![Fq::ZERO; (hi - lo + 1) as usize];
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                let slot = &mut buf[(ea + eb - lo) as usize];
                *slot = field.add(*slot, field.mul(ca, cb));
            }
        }
        LaurentPoly {
            terms: buf
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i32, c))
                .collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}t")?,
                _ => write!(f, "{c}t^{e}")?,
            }
        }
        Ok(())
    }
}
