//! Dense Gaussian elimination over F_q.

use super::field::{FiniteField, Fq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMatrix {
            rows,
            cols,
            data: vec![Fq::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<Fq>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        FqMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec(), field);
        }
        ech.rank()
    }

    /// Dimension of the right null space `{x : A x = 0}`.
    pub fn kernel_dim(&self, field: &FiniteField) -> usize {
        self.cols - self.rank(field)
    }

    /// A basis of the right null space.
    pub fn kernel_basis(&self, field: &FiniteField) -> Vec<Vec<Fq>> {
        let mut ech = Echelon::new(self.cols);
        for i in 0..self.rows {
            ech.insert(self.row(i).to_vec(), field);
        }
        let (rows, pivots) = ech.reduced(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![Fq::ZERO; self.cols];
                x[fc] = Fq::ONE;
                for (row, &pc) in rows.iter().zip(&pivots) {
                    x[pc] = field.neg(row[fc]);
                }
                x
            })
            .collect()
    }

    pub fn mul_vec(&self, x: &[Fq], field: &FiniteField) -> Vec<Fq> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Fq::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
            })
            .collect()
    }
}

/// Row echelon form grown one row at a time; the rank is available after
/// every insertion.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Vec<Fq>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `row` against the current basis and keeps it if it is
    /// independent. Returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<Fq>, field: &FiniteField) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        if self.rows.len() == self.cols {
            return false;
        }
        for (basis, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = row[pc];
            if c.is_zero() {
                continue;
            }
            let neg = field.neg(c);
            for (x, &b) in row[pc..].iter_mut().zip(&basis[pc..]) {
                if !b.is_zero() {
                    *x = field.add(*x, field.mul(neg, b));
                }
            }
        }
        let Some(pc) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = field.inv(row[pc]).expect("pivot is nonzero");
        for x in row[pc..].iter_mut() {
            *x = field.mul(*x, inv);
        }
        self.rows.push(row);
        self.pivots.push(pc);
        true
    }

    /// Fully reduced rows sorted by pivot column, with the pivot list.
    fn reduced(&self, field: &FiniteField) -> (Vec<Vec<Fq>>, Vec<usize>) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| self.pivots[i]);
        let mut rows: Vec<Vec<Fq>> = order.iter().map(|&i| self.rows[i].clone()).collect();
        let pivots: Vec<usize> = order.iter().map(|&i| self.pivots[i]).collect();
        for i in (0..rows.len()).rev() {
            let pc = pivots[i];
            for k in 0..i {
                let c = rows[k][pc];
                if c.is_zero() {
                    continue;
                }
                let neg = field.neg(c);
                let src = rows[i].clone();
                for (x, b) in rows[k].iter_mut().zip(src) {
                    *x = field.add(*x, field.mul(neg, b));
                }
            }
        }
        (rows, pivots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_dim_examples() {
        let f2 = FiniteField::new(2).unwrap();
        assert_eq!(FqMatrix::zeros(2, 3).kernel_dim(&f2), 3);
        let f3 = FiniteField::new(3).unwrap();
        assert_eq!(FqMatrix::identity(3).kernel_dim(&f3), 0);
        let ones = FqMatrix::from_rows(&[vec![Fq(1), Fq(1)], vec![Fq(1), Fq(1)]]);
        assert_eq!(ones.kernel_dim(&f2), 1);
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(
            q in prop::sample::select(vec![2u32, 3, 4, 5, 9]),
            rows in 1usize..6,
            cols in 1usize..7,
            seed in prop::collection::vec(0u32..1000, 42),
        ) {
            let f = FiniteField::new(q).unwrap();
            let data: Vec<Vec<Fq>> = (0..rows)
                .map(|i| (0..cols).map(|j| Fq(seed[i * cols + j] % q)).collect())
                .collect();
            let a = FqMatrix::from_rows(&data);
            let basis = a.kernel_basis(&f);
            prop_assert_eq!(basis.len(), a.kernel_dim(&f));
            prop_assert_eq!(a.rank(&f) + basis.len(), cols);
            for x in &basis {
                prop_assert!(a.mul_vec(x, &f).iter().all(|c| c.is_zero()));
            }
        }
    }
}
