//! Concrete vertices and type-1 edges of the Bruhat-Tits building of
//! PGL_3 over F_q((1/t)) (and the (q+1)-regular tree of PGL_2).
//!
//! A vertex is the class `gK` of an invertible Laurent-polynomial matrix `g`,
//! i.e. the homothety class of the lattice spanned by the columns of `g`.
//! Everything here is exact and division-free: comparisons of two classes go
//! through `adj(u) * w`, which is `det(u) * u^{-1} w`.

mod birkhoff;
mod oracle;

use std::fmt;

use crate::algebra::{FiniteField, Fq, LaurentPoly, MatL};
use crate::error::{Error, Result};

pub use birkhoff::InvariantPair;
pub use oracle::{oracle_counts, Census, Child, OracleCounts, PrefixCensus, DEFAULT_BUDGET};

/// A vertex `gK` of the building; equality of classes is
/// [`Building::class_equal`], not `==` on representatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexClass {
    rep: MatL,
}

impl VertexClass {
    pub fn new(rep: MatL) -> Self {
        VertexClass { rep }
    }

    pub fn identity(dim: usize) -> Self {
        VertexClass::new(MatL::identity(dim))
    }

    pub fn rep(&self) -> &MatL {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }
}

impl fmt::Display for VertexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}K", self.rep)
    }
}

/// A type-1 directed edge, stored as its ordered vertex pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BDirectedEdge {
    pub source: VertexClass,
    pub target: VertexClass,
}

/// Building (dim 3) or tree (dim 2) over a fixed F_q.
#[derive(Clone, Debug)]
pub struct Building {
    field: FiniteField,
    dim: usize,
    /// Right multipliers producing the type+1 neighbors of any vertex.
    step_generators: Vec<MatL>,
}

impl Building {
    pub fn new(field: FiniteField, dim: usize) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::Dimension(dim));
        }
        let step_generators = Self::generators(&field, dim);
        Ok(Building {
            field,
            dim,
            step_generators,
        })
    }

    /// PGL_3 building over F_q for a supported `q`.
    pub fn pgl3(q: u32) -> Result<Self> {
        Self::new(FiniteField::new(q)?, 3)
    }

    /// PGL_2 tree over F_q for a supported `q`.
    pub fn pgl2(q: u32) -> Result<Self> {
        Self::new(FiniteField::new(q)?, 2)
    }

    /// `diag(t,1,1)`, `[[1,bt,0],[0,t,0],[0,0,1]]` and
    /// `t * [[1/t,0,c],[0,1/t,d],[0,0,1]]` for `b, c, d` in F_q; in dim 2,
    /// `diag(t,1)` and `[[1,bt],[0,t]]`. The scalar `t` in the last family
    /// keeps representatives polynomial without changing the class.
    fn generators(field: &FiniteField, dim: usize) -> Vec<MatL> {
        let t = LaurentPoly::t_pow(1);
        let one = LaurentPoly::one();
        let zero = LaurentPoly::zero();
        let bt = |b: Fq| LaurentPoly::monomial(b, 1);
        let mut out = Vec::new();
        if dim == 3 {
            out.push(MatL::diag_t(&[1, 0, 0]));
            for b in field.elements() {
                out.push(
                    MatL::from_rows(vec![
                        vec![one.clone(), bt(b), zero.clone()],
                        vec![zero.clone(), t.clone(), zero.clone()],
                        vec![zero.clone(), zero.clone(), one.clone()],
                    ])
                    .unwrap(),
                );
            }
            for c in field.elements() {
                for d in field.elements() {
                    out.push(
                        MatL::from_rows(vec![
                            vec![one.clone(), zero.clone(), bt(c)],
                            vec![zero.clone(), one.clone(), bt(d)],
                            vec![zero.clone(), zero.clone(), t.clone()],
                        ])
                        .unwrap(),
                    );
                }
            }
        } else {
            out.push(MatL::diag_t(&[1, 0]));
            for b in field.elements() {
                out.push(
                    MatL::from_rows(vec![
                        vec![one.clone(), bt(b)],
                        vec![zero.clone(), t.clone()],
                    ])
                    .unwrap(),
                );
            }
        }
        out
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The right multipliers used by [`Self::up_neighbors`].
    pub fn step_generators(&self) -> &[MatL] {
        &self.step_generators
    }

    /// Number of geodesic continuations of any edge: `q^2` (dim 3) or `q`.
    pub fn branching(&self) -> u64 {
        (self.q() as u64).pow(self.dim as u32 - 1)
    }

    /// `a = diag(t,1,1)` (or `diag(t,1)`).
    pub fn std_step(&self) -> MatL {
        let mut e = vec![0; self.dim];
        e[0] = 1;
        MatL::diag_t(&e)
    }

    /// The base edge from the identity class to `a * identity`.
    pub fn base_edge(&self) -> BDirectedEdge {
        BDirectedEdge {
            source: VertexClass::identity(self.dim),
            target: VertexClass::new(self.std_step()),
        }
    }

    /// `deg det(rep) mod dim`.
    pub fn vertex_type(&self, v: &VertexClass) -> Result<i64> {
        let det = v.rep.det(&self.field);
        let d = det.deg().ok_or(Error::Singular)?;
        Ok((d as i64).rem_euclid(self.dim as i64))
    }

    /// Whether `u` and `w` are the same homothety class: with
    /// `h = adj(u) * w` and `deg det h = dim * j`, every entry of `h` has
    /// degree at most `j`.
    pub fn class_equal(&self, u: &VertexClass, w: &VertexClass) -> bool {
        let h = u.rep.adjugate(&self.field).mul(&w.rep, &self.field);
        Self::is_scalar_unit(&h, &self.field)
    }

    fn is_scalar_unit(h: &MatL, field: &FiniteField) -> bool {
        let Some(dd) = h.det(field).deg() else {
            return false;
        };
        if dd.rem_euclid(h.dim() as i32) != 0 {
            return false;
        }
        let j = dd.div_euclid(h.dim() as i32);
        h.max_deg().is_some_and(|m| m <= j)
    }

    /// Valuations of the elementary divisors of `u^{-1} w` over `O`, sorted
    /// ascending and shifted so the smallest is 0. Computed from minimal
    /// valuations of `k x k` minors of `adj(u) * w`.
    pub fn divisor_profile(&self, u: &VertexClass, w: &VertexClass) -> Result<Vec<i64>> {
        let adj_u = u.rep.adjugate(&self.field);
        self.divisor_profile_with(&adj_u, &w.rep)
    }

    fn divisor_profile_with(&self, adj_u: &MatL, w: &MatL) -> Result<Vec<i64>> {
        let f = &self.field;
        let h = adj_u.mul(w, f);
        let det = h.det(f);
        let min_val = |polys: &[LaurentPoly]| -> Option<i64> {
            polys.iter().filter_map(|p| p.val()).min().map(|v| v as i64)
        };
        let v1 = min_val(h.entries()).ok_or(Error::Singular)?;
        let v_top = det.val().ok_or(Error::Singular)? as i64;
        let mut cumulative = vec![v1];
        if self.dim == 3 {
            cumulative.push(min_val(&h.minors2(f)).ok_or(Error::Singular)?);
        }
        cumulative.push(v_top);
        let mut exps: Vec<i64> = cumulative
            .iter()
            .scan(0, |prev, &v| {
                let a = v - *prev;
                *prev = v;
                Some(a)
            })
            .collect();
        exps.sort_unstable();
        let lo = exps[0];
        Ok(exps.into_iter().map(|a| a - lo).collect())
    }

    /// Distinct classes spanning an edge of the building (or tree).
    pub fn are_adjacent(&self, u: &VertexClass, w: &VertexClass) -> bool {
        self.divisor_profile(u, w)
            .map(|p| Self::is_edge_profile(&p))
            .unwrap_or(false)
    }

    fn is_edge_profile(p: &[i64]) -> bool {
        matches!(p, [0, 0, 1] | [0, 1, 1] | [0, 1])
    }

    /// The `q^2 + q + 1` (dim 3) or `q + 1` (dim 2) neighbors of type one higher.
    pub fn up_neighbors(&self, v: &VertexClass) -> Vec<VertexClass> {
        self.step_generators
            .iter()
            .map(|g| VertexClass::new(v.rep.mul(g, &self.field)))
            .collect()
    }

    /// Edges `e' = (e.target -> w)` such that `e, e'` is a geodesic segment:
    /// `e.source, e.target, w` span no chamber (dim 3), or `w != e.source`
    /// (dim 2).
    pub fn geodesic_continuations(&self, e: &BDirectedEdge) -> Vec<BDirectedEdge> {
        let f = &self.field;
        let adj_s = e.source.rep.adjugate(f);
        self.up_neighbors(&e.target)
            .into_iter()
            .filter(|w| {
                if self.dim == 3 {
                    !self
                        .divisor_profile_with(&adj_s, &w.rep)
                        .map(|p| Self::is_edge_profile(&p))
                        .unwrap_or(false)
                } else {
                    !Self::is_scalar_unit(&adj_s.mul(&w.rep, f), f)
                }
            })
            .map(|w| BDirectedEdge {
                source: e.target.clone(),
                target: w,
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: MatL) -> VertexClass {
        VertexClass::new(m)
    }

    #[test]
    fn vertex_types() {
        let b = Building::pgl3(2).unwrap();
        assert_eq!(b.vertex_type(&v(MatL::identity(3))).unwrap(), 0);
        assert_eq!(b.vertex_type(&v(MatL::diag_t(&[1, 0, 0]))).unwrap(), 1);
        assert_eq!(b.vertex_type(&v(MatL::diag_t(&[1, 1, 0]))).unwrap(), 2);
        let singular = MatL::diag(&[LaurentPoly::one(), LaurentPoly::zero(), LaurentPoly::one()]);
        assert!(matches!(b.vertex_type(&v(singular)), Err(Error::Singular)));
    }

    #[test]
    fn class_equality() {
        let b = Building::pgl3(3).unwrap();
        let f = b.field();
        let g = v(MatL::from_rows(vec![
            vec![
                LaurentPoly::t_pow(2),
                LaurentPoly::one(),
                LaurentPoly::zero(),
            ],
            vec![
                LaurentPoly::zero(),
                LaurentPoly::t_pow(1),
                LaurentPoly::constant(Fq(2)),
            ],
            vec![LaurentPoly::one(), LaurentPoly::zero(), LaurentPoly::one()],
        ])
        .unwrap());
        let kappa = MatL::from_constants(&[
            &[Fq(1), Fq(0), Fq(0)],
            &[Fq(2), Fq(1), Fq(0)],
            &[Fq(1), Fq(1), Fq(1)],
        ])
        .unwrap();
        let gk = v(g.rep().mul(&kappa, f));
        assert!(b.class_equal(&g, &gk));
        assert!(b.class_equal(&gk, &g));
        assert!(b.class_equal(&g, &g));
        let id = VertexClass::identity(3);
        assert!(b.class_equal(&id, &v(MatL::diag_t(&[1, 1, 1]))));
        assert!(!b.class_equal(&id, &v(MatL::diag_t(&[1, 0, 0]))));
    }

    #[test]
    fn profiles_and_adjacency() {
        let b = Building::pgl3(2).unwrap();
        let id = VertexClass::identity(3);
        let p = |e: &[i32]| b.divisor_profile(&id, &v(MatL::diag_t(e))).unwrap();
        assert_eq!(p(&[1, 0, 0]), vec![0, 1, 1]);
        assert_eq!(p(&[1, 1, 0]), vec![0, 0, 1]);
        assert_eq!(p(&[2, 0, 0]), vec![0, 2, 2]);
        assert!(b.are_adjacent(&id, &v(MatL::diag_t(&[1, 0, 0]))));
        assert!(!b.are_adjacent(&id, &v(MatL::diag_t(&[2, 0, 0]))));
        assert!(b.are_adjacent(&id, &v(MatL::diag_t(&[1, 1, 0]))));
    }

    #[test]
    fn up_neighbors_are_distinct_adjacent_and_typed() {
        for (q, dim, count) in [(2u32, 3usize, 7usize), (3, 3, 13), (3, 2, 4), (4, 3, 21)] {
            let b = Building::new(FiniteField::new(q).unwrap(), dim).unwrap();
            let start = VertexClass::new(b.std_step());
            let ns = b.up_neighbors(&start);
            assert_eq!(ns.len(), count);
            let ty = b.vertex_type(&start).unwrap();
            for (i, w) in ns.iter().enumerate() {
                assert_eq!(b.vertex_type(w).unwrap(), (ty + 1) % dim as i64);
                assert!(b.are_adjacent(&start, w) && b.are_adjacent(w, &start));
                for x in &ns[i + 1..] {
                    assert!(!b.class_equal(w, x));
                }
            }
        }
        let b = Building::pgl3(2).unwrap();
        let id = VertexClass::identity(3);
        let a = v(MatL::diag_t(&[1, 0, 0]));
        assert!(b.up_neighbors(&id).iter().any(|w| b.class_equal(w, &a)));
    }

    #[test]
    fn continuation_counts() {
        let b = Building::pgl3(2).unwrap();
        let conts = b.geodesic_continuations(&b.base_edge());
        assert_eq!(conts.len(), 4);
        let straight = v(MatL::diag_t(&[2, 0, 0]));
        assert!(conts.iter().any(|e| b.class_equal(&e.target, &straight)));

        let tree = Building::pgl2(3).unwrap();
        let conts = tree.geodesic_continuations(&tree.base_edge());
        assert_eq!(conts.len(), 3);
        assert!(conts
            .iter()
            .all(|e| !tree.class_equal(&e.target, &VertexClass::identity(2))));
    }
}
