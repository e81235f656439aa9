use std::fmt;

use super::field::{FiniteField, Fq};
use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Square 2x2 or 3x3 matrix of Laurent polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatL {
    dim: usize,
    entries: Vec<LaurentPoly>,
}

impl MatL {
    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let dim = rows.len();
        if !(dim == 2 || dim == 3) {
            return Err(Error::Dimension(dim));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Domain("matrix rows must all have length dim".into()));
        }
        Ok(MatL {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![LaurentPoly::one(); dim])
    }

    /// Diagonal matrix; panics unless `diag.len()` is 2 or 3.
    pub fn diag(diag: &[LaurentPoly]) -> Self {
        let dim = diag.len();
        assert!(dim == 2 || dim == 3, "MatL is 2x2 or 3x3");
        let mut entries = vec![LaurentPoly::zero(); dim * dim];
        for (i, d) in diag.iter().enumerate() {
            entries[i * dim + i] = d.clone();
        }
        MatL { dim, entries }
    }

    /// `diag(t^e_0, t^e_1, ...)`.
    pub fn diag_t(exps: &[i32]) -> Self {
        Self::diag(
            &exps
                .iter()
                .map(|&e| LaurentPoly::t_pow(e))
                .collect::<Vec<_>>(),
        )
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn mul(&self, other: &MatL, field: &FiniteField) -> MatL {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b, field), field);
                    }
                }
                entries.push(acc);
            }
        }
        MatL { dim: n, entries }
    }

    pub fn scale(&self, s: &LaurentPoly, field: &FiniteField) -> MatL {
        MatL {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mul(s, field)).collect(),
        }
    }

    /// Multiplication by the scalar `t^k`.
    pub fn shift(&self, k: i32) -> MatL {
        MatL {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.shift(k)).collect(),
        }
    }

    fn minor2(&self, r: [usize; 2], c: [usize; 2], field: &FiniteField) -> LaurentPoly {
        let a = self.get(r[0], c[0]).mul(self.get(r[1], c[1]), field);
        let b = self.get(r[0], c[1]).mul(self.get(r[1], c[0]), field);
        a.sub(&b, field)
    }

    /// Determinant and adjugate, `adj * M = M * adj = det * I`.
    pub fn det_adj(&self, field: &FiniteField) -> (LaurentPoly, MatL) {
        let adj = self.adjugate(field);
        let mut det = LaurentPoly::zero();
        for k in 0..self.dim {
            det = det.add(&self.get(0, k).mul(adj.get(k, 0), field), field);
        }
        (det, adj)
    }

    pub fn det(&self, field: &FiniteField) -> LaurentPoly {
        self.det_adj(field).0
    }

    pub fn adjugate(&self, field: &FiniteField) -> MatL {
        match self.dim {
            2 => MatL {
                dim: 2,
                entries: vec![
                    self.get(1, 1).clone(),
                    self.get(0, 1).neg(field),
                    self.get(1, 0).neg(field),
                    self.get(0, 0).clone(),
                ],
            },
            _ => {
                let others = |i: usize| -> [usize; 2] {
                    match i {
                        0 => [1, 2],
                        1 => [0, 2],
                        _ => [0, 1],
                    }
                };
                let mut entries = Vec::with_capacity(9);
                for i in 0..3 {
                    for j in 0..3 {
                        // adj[i][j] = (-1)^(i+j) * minor with row j and column i removed
                        let m = self.minor2(others(j), others(i), field);
                        entries.push(if (i + j) % 2 == 0 { m } else { m.neg(field) });
                    }
                }
                MatL { dim: 3, entries }
            }
        }
    }

    /// All 2x2 minors (the 1x1 minors of the adjugate, up to sign).
    pub fn minors2(&self, field: &FiniteField) -> Vec<LaurentPoly> {
        match self.dim {
            2 => vec![self.det(field)],
            _ => self.adjugate(field).entries,
        }
    }

    /// Largest exponent over all nonzero entries.
    pub fn max_deg(&self) -> Option<i32> {
        self.entries.iter().filter_map(|e| e.deg()).max()
    }

    /// Smallest exponent over all nonzero entries.
    pub fn min_low(&self) -> Option<i32> {
        self.entries.iter().filter_map(|e| e.low()).min()
    }

    /// Matrix with constant entries.
    pub fn from_constants(rows: &[&[Fq]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&c| LaurentPoly::constant(c)).collect())
                .collect(),
        )
    }
}

impl fmt::Display for MatL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
