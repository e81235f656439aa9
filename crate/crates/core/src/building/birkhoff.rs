//! The double-coset invariant `g in Gamma diag(t^m, t^n, 1) K`,
//! `Gamma = PGL_3(F_q[t])`, computed from section dimensions.
//!
//! For a representative `g` and an integer `k`, let
//!
//! ```text
//! d(k) = dim_Fq { x in F_q[t]^dim (row vector) : deg(x g) <= k }.
//! ```
//!
//! If `g = gamma diag(t^a_1, ..., t^a_dim) kappa` then `x -> x gamma` is a
//! bijection of polynomial rows and `d(k) = sum_i max(0, k - a_i + 1)`, so the
//! increments `d(k) - d(k-1) = #{i : a_i <= k}` recover the exponents. Every
//! such `x` satisfies `deg x <= k + maxdeg(adj g) - deg det g`, which makes
//! `d(k)` a finite kernel dimension over F_q.

use std::fmt;

use super::{Building, VertexClass};
use crate::algebra::{Echelon, Fq, MatL};
use crate::error::{Error, Result};
use crate::shift::QVertex;

/// Normalized double-coset exponents: `(m, n)` with `m >= n >= 0` in dim 3;
/// in dim 2 `n` is always 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantPair {
    pub m: i64,
    pub n: i64,
}

impl InvariantPair {
    pub const ORIGIN: InvariantPair = InvariantPair { m: 0, n: 0 };

    pub fn to_qvertex(self) -> QVertex {
        QVertex {
            m: self.m,
            n: self.n,
        }
    }
}

impl fmt::Display for InvariantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.m, self.n)
    }
}

impl Building {
    pub fn birkhoff_invariant(&self, v: &VertexClass) -> Result<InvariantPair> {
        self.birkhoff_invariant_with_slack(v, 0)
    }

    /// Same as [`Self::birkhoff_invariant`] with the polynomial degree bound
    /// raised by `slack`; the answer must not change.
    pub fn birkhoff_invariant_with_slack(
        &self,
        v: &VertexClass,
        slack: i32,
    ) -> Result<InvariantPair> {
        let mut a = self.splitting_exponents(&v.rep, slack)?;
        a.sort_unstable_by(|x, y| y.cmp(x));
        let low = a[self.dim - 1];
        Ok(if self.dim == 3 {
            InvariantPair {
                m: a[0] - low,
                n: a[1] - low,
            }
        } else {
            InvariantPair {
                m: a[0] - low,
                n: 0,
            }
        })
    }

    /// The exponent multiset `{a_i}` of `g`, ascending.
    pub fn splitting_exponents(&self, g: &MatL, slack: i32) -> Result<Vec<i64>> {
        let field = &self.field;
        let dim = self.dim;
        let (det, adj) = g.det_adj(field);
        let deg_det = det.deg().ok_or(Error::Singular)?;
        let max_adj = adj.max_deg().ok_or(Error::Singular)?;
        let max_g = g.max_deg().ok_or(Error::Singular)?;

        // a_min >= deg det - maxdeg adj; a_max <= largest row degree of g
        let lower = deg_det - max_adj;
        let k_max = max_g;
        let bound = (k_max + max_adj - deg_det).max(0) + slack;
        let width = (bound + 1) as usize;
        let cols = dim * width;

        // coefficient of t^e in (x g)_j is sum_{i,d} x_{i,d} [t^{e-d}] g_{ij}
        let top = bound + max_g;
        let mut ech = Echelon::new(cols);
        // sections[k - (lower - 1)] = d(k) for k in lower-1 ..= k_max
        let span = (k_max - lower + 2) as usize;
        let mut sections = vec![cols; span];
        for e in (lower..=top).rev() {
            for j in 0..dim {
                let mut row = vec![Fq::ZERO; cols];
                for i in 0..dim {
                    let gij = g.get(i, j);
                    if gij.is_zero() {
                        continue;
                    }
                    for d in 0..=bound {
                        row[i * width + d as usize] = gij.coeff(e - d);
                    }
                }
                ech.insert(row, field);
            }
            let k = e - 1;
            if k <= k_max {
                sections[(k - (lower - 1)) as usize] = cols - ech.rank();
            }
        }

        if sections[0] != 0 {
            return Err(Error::NoPlateau(format!(
                "d({}) = {} for {g}, expected 0 below the lower bound",
                lower - 1,
                sections[0]
            )));
        }
        let counts: Vec<usize> = sections
            .windows(2)
            .map(|w| w[1].wrapping_sub(w[0]))
            .collect();
        if counts.last() != Some(&dim)
            || counts.windows(2).any(|w| w[0] > w[1])
            || counts.iter().any(|&c| c > dim)
        {
            return Err(Error::NoPlateau(format!(
                "section dimensions {sections:?} of {g} do not plateau at {dim}"
            )));
        }
        let mut exps = Vec::with_capacity(dim);
        let mut prev = 0;
        for (offset, &c) in counts.iter().enumerate() {
            let k = lower as i64 + offset as i64;
            for _ in prev..c {
                exps.push(k);
            }
            prev = c;
        }
        if exps.iter().sum::<i64>() != deg_det as i64 {
            return Err(Error::NoPlateau(format!(
                "exponents {exps:?} of {g} do not sum to deg det = {deg_det}"
            )));
        }
        Ok(exps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentPoly;

    fn pair(m: i64, n: i64) -> InvariantPair {
        InvariantPair { m, n }
    }

    #[test]
    fn diagonal_forms() {
        let b = Building::pgl3(2).unwrap();
        let v = |e: &[i32]| {
            b.birkhoff_invariant(&VertexClass::new(MatL::diag_t(e)))
                .unwrap()
        };
        assert_eq!(v(&[5, 2, 0]), pair(5, 2));
        assert_eq!(v(&[0, 0, 0]), pair(0, 0));
        assert_eq!(v(&[0, 3, 1]), pair(3, 1));
        assert_eq!(v(&[-2, 1, 4]), pair(6, 3));
    }

    #[test]
    fn type_one_neighbors_of_origin() {
        for q in [2u32, 3] {
            let b = Building::pgl3(q).unwrap();
            let f = b.field();
            let tinv = LaurentPoly::t_pow(-1);
            for c in f.elements() {
                for d in f.elements() {
                    let g = MatL::from_rows(vec![
                        vec![tinv.clone(), LaurentPoly::zero(), LaurentPoly::constant(c)],
                        vec![LaurentPoly::zero(), tinv.clone(), LaurentPoly::constant(d)],
                        vec![LaurentPoly::zero(), LaurentPoly::zero(), LaurentPoly::one()],
                    ])
                    .unwrap();
                    assert_eq!(
                        b.birkhoff_invariant(&VertexClass::new(g)).unwrap(),
                        pair(1, 0)
                    );
                }
            }
            for w in b.up_neighbors(&VertexClass::identity(3)) {
                assert_eq!(b.birkhoff_invariant(&w).unwrap(), pair(1, 0));
            }
        }
    }

    #[test]
    fn two_step_representative_over_f3() {
        let b = Building::pgl3(3).unwrap();
        let f = b.field();
        let inner = MatL::from_rows(vec![
            vec![
                LaurentPoly::one(),
                LaurentPoly::monomial(Fq(2), 1),
                LaurentPoly::zero(),
            ],
            vec![
                LaurentPoly::zero(),
                LaurentPoly::t_pow(1),
                LaurentPoly::zero(),
            ],
            vec![LaurentPoly::zero(), LaurentPoly::zero(), LaurentPoly::one()],
        ])
        .unwrap();
        let rep = VertexClass::new(MatL::diag_t(&[1, 0, 0]).mul(&inner, f));
        let got = b.birkhoff_invariant(&rep).unwrap();
        assert!(got == pair(2, 0) || got == pair(1, 1), "{got}");
        assert_eq!(b.birkhoff_invariant_with_slack(&rep, 3).unwrap(), got);
        assert_eq!((got.m + got.n).rem_euclid(3), b.vertex_type(&rep).unwrap());
        assert!(got.to_qvertex().is_adjacent(QVertex { m: 1, n: 0 }));
    }

    #[test]
    fn tree_invariant() {
        let b = Building::pgl2(2).unwrap();
        let v = |e: &[i32]| {
            b.birkhoff_invariant(&VertexClass::new(MatL::diag_t(e)))
                .unwrap()
        };
        assert_eq!(v(&[3, 0]), pair(3, 0));
        assert_eq!(v(&[1, 4]), pair(3, 0));
        for w in b.up_neighbors(&VertexClass::identity(2)) {
            assert_eq!(b.birkhoff_invariant(&w).unwrap(), pair(1, 0));
        }
    }

    #[test]
    fn singular_rejected() {
        let b = Building::pgl3(2).unwrap();
        let g = MatL::diag(&[LaurentPoly::one(), LaurentPoly::one(), LaurentPoly::zero()]);
        assert!(matches!(
            b.birkhoff_invariant(&VertexClass::new(g)),
            Err(Error::Singular)
        ));
    }
}
