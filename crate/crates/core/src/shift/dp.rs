//! Exact transfer-matrix dynamic programming over the quotient shift.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::sector::{QuotientEdge, BASE_EDGE};
use super::table::{build_graph, WeightTable};
use crate::algebra::Count;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Number of lifted paths from the base edge ending at each quotient edge.
/// Only nonzero entries are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountProfile {
    counts: BTreeMap<QuotientEdge, Count>,
}

impl CountProfile {
    pub fn unit(e: QuotientEdge) -> Self {
        CountProfile {
            counts: BTreeMap::from([(e, BigUint::one())]),
        }
    }

    pub fn get(&self, e: &QuotientEdge) -> Count {
        self.counts.get(e).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Count {
        self.counts.values().sum()
    }

    pub fn support(&self) -> impl Iterator<Item = &QuotientEdge> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&QuotientEdge, &Count)> {
        self.counts.iter()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn remove(&mut self, e: &QuotientEdge) {
        self.counts.remove(e);
    }
}

impl FromIterator<(QuotientEdge, Count)> for CountProfile {
    fn from_iter<I: IntoIterator<Item = (QuotientEdge, Count)>>(iter: I) -> Self {
        CountProfile {
            counts: iter.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// The weight table compiled to predecessor lists over dense indices.
pub struct Transfer {
    edges: Vec<QuotientEdge>,
    index: HashMap<QuotientEdge, usize>,
    preds: Vec<Vec<(usize, u64)>>,
}

impl Transfer {
    pub fn new(table: &WeightTable) -> Self {
        let edges: Vec<QuotientEdge> = table.edges().copied().collect();
        let index: HashMap<QuotientEdge, usize> =
            edges.iter().enumerate().map(|(i, e)| (*e, i)).collect();
        let mut preds = vec![Vec::new(); edges.len()];
        for (from, to, w) in table.iter() {
            // successors past the table boundary are dropped; callers size
            // the table so those are never reached
            if let Some(&j) = index.get(&to) {
                preds[j].push((index[&from], w));
            }
        }
        Transfer {
            edges,
            index,
            preds,
        }
    }

    fn dense(&self, p: &CountProfile) -> Result<Vec<Count>> {
        let mut out = vec![BigUint::zero(); self.edges.len()];
        for (e, c) in p.iter() {
            let &i = self
                .index
                .get(e)
                .ok_or_else(|| Error::Domain(format!("{e} is outside the transfer table")))?;
            out[i] = c.clone();
        }
        Ok(out)
    }

    fn sparse(&self, v: Vec<Count>) -> CountProfile {
        self.edges.iter().copied().zip(v).collect()
    }

    fn step_dense(&self, cur: &[Count], exec: Exec) -> Vec<Count> {
        let idx: Vec<usize> = (0..self.edges.len()).collect();
        exec.map(&idx, |&j| {
            let mut acc = BigUint::zero();
            for &(i, w) in &self.preds[j] {
                if !cur[i].is_zero() {
                    acc += &cur[i] * w;
                }
            }
            acc
        })
    }

    /// One step `N'(e') = sum_e N(e) w(e, e')`.
    pub fn step(&self, p: &CountProfile, exec: Exec) -> Result<CountProfile> {
        Ok(self.sparse(self.step_dense(&self.dense(p)?, exec)))
    }
}

/// Fold-rule table wide enough that `steps` transitions from the base edge
/// never leave it.
fn table_for(q: u64, steps: usize) -> WeightTable {
    build_graph(q, steps as i64 + 2)
}

/// `N_0, ..., N_steps` starting from the unit profile at `e_{1/2,0}`.
pub fn dp_profiles(q: u64, steps: usize) -> Vec<CountProfile> {
    dp_profiles_with(q, steps, Exec::default())
}

pub fn dp_profiles_with(q: u64, steps: usize, exec: Exec) -> Vec<CountProfile> {
    let transfer = Transfer::new(&table_for(q, steps));
    let mut cur = transfer
        .dense(&CountProfile::unit(BASE_EDGE))
        .expect("base edge is in every table");
    let mut out = vec![transfer.sparse(cur.clone())];
    for _ in 0..steps {
        cur = transfer.step_dense(&cur, exec);
        out.push(transfer.sparse(cur.clone()));
    }
    out
}

/// Closed cycles of length `n` over the origin: `N_n(e_{1/2,0})`.
pub fn dp_g(q: u64, n: usize) -> Count {
    dp_g_with(q, n, Exec::default())
}

pub fn dp_g_with(q: u64, n: usize, exec: Exec) -> Count {
    dp_profiles_with(q, n, exec)
        .pop()
        .map(|p| p.get(&BASE_EDGE))
        .unwrap_or_default()
}

/// `g_s` for every `s` in `0..=n` from a single DP run.
pub fn dp_g_series(q: u64, n: usize) -> Vec<Count> {
    dp_profiles(q, n)
        .iter()
        .map(|p| p.get(&BASE_EDGE))
        .collect()
}

/// First-return cycles of length `n`: the DP with the base edge made taboo at
/// every intermediate step.
pub fn dp_f(q: u64, n: usize) -> Count {
    dp_f_with(q, n, Exec::default())
}

pub fn dp_f_with(q: u64, n: usize, exec: Exec) -> Count {
    dp_f_series_with(q, n, exec).pop().unwrap_or_default()
}

/// `f_s` for every `s` in `0..=n`, with `f_0 = 0`.
pub fn dp_f_series(q: u64, n: usize) -> Vec<Count> {
    dp_f_series_with(q, n, Exec::default())
}

fn dp_f_series_with(q: u64, n: usize, exec: Exec) -> Vec<Count> {
    let transfer = Transfer::new(&table_for(q, n));
    let base = transfer.index[&BASE_EDGE];
    let mut cur = transfer
        .dense(&CountProfile::unit(BASE_EDGE))
        .expect("base edge is in every table");
    let mut out = vec![BigUint::zero()];
    for _ in 0..n {
        cur = transfer.step_dense(&cur, exec);
        out.push(std::mem::take(&mut cur[base]));
    }
    out
}

/// Profile after `steps` steps with the base edge removed at every
/// intermediate step.
pub fn dp_taboo_profile(q: u64, steps: usize) -> CountProfile {
    let transfer = Transfer::new(&table_for(q, steps));
    let mut cur = CountProfile::unit(BASE_EDGE);
    for s in 0..steps {
        if s > 0 {
            cur.remove(&BASE_EDGE);
        }
        cur = transfer
            .step(&cur, Exec::default())
            .expect("profile stays inside the table");
    }
    cur
}

/// Total three-step weight into `e_{1/2,0}` from each edge that feeds it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeStep {
    pub feeders: BTreeMap<QuotientEdge, Count>,
}

impl ThreeStep {
    pub fn coefficient(&self, e: &QuotientEdge) -> Count {
        self.feeders.get(e).cloned().unwrap_or_default()
    }
}

/// The edges whose three-step recursion coefficient into `e_{1/2,0}` is
/// stated in closed form: `e_{1/2,0}, e_{3/2,1/2}, e_{2,3/2}, e_{5/2,5/2}`.
pub fn three_step_feeders() -> [QuotientEdge; 4] {
    [(1, 0), (3, 1), (4, 3), (5, 5)].map(|(k2, l2)| QuotientEdge::from_doubled(k2, l2).unwrap())
}

/// Closed-form coefficients `q^2(q^2-1)(q^2-q), q^4(q^2-q), q^4(q^2-q), q^6`.
pub fn three_step_expected(q: u64) -> [Count; 4] {
    let q = BigUint::from(q);
    let q2 = &q * &q;
    let a = &q2 - 1u32;
    let b = &q2 - &q;
    let q4 = &q2 * &q2;
    [&q2 * &a * &b, &q4 * &b, &q4 * &b, &q4 * &q2]
}

/// Composes the transition rule three times backwards from `e_{1/2,0}`.
/// Fails if any edge other than the four closed-form feeders contributes, or
/// if a coefficient differs from its closed form.
pub fn three_step_coefficients(q: u64) -> Result<[Count; 4]> {
    let three = three_step_raw(q);
    let feeders = three_step_feeders();
    for e in three.feeders.keys() {
        if !feeders.contains(e) {
            return Err(Error::Validation(format!(
                "{e} reaches e(1/2,0) in three steps with weight {}",
                three.coefficient(e)
            )));
        }
    }
    let got = feeders.map(|e| three.coefficient(&e));
    let expected = three_step_expected(q);
    for ((e, g), x) in feeders.iter().zip(&got).zip(&expected) {
        if g != x {
            return Err(Error::Validation(format!(
                "three-step coefficient from {e} is {g}, closed form gives {x}"
            )));
        }
    }
    Ok(got)
}

/// Unvalidated three-step weights into the base edge.
pub fn three_step_raw(q: u64) -> ThreeStep {
    // any three-step predecessor of e(1/2,0) lies within m <= 4
    let table = build_graph(q, 8);
    let mut weight: BTreeMap<QuotientEdge, Count> = BTreeMap::from([(BASE_EDGE, BigUint::one())]);
    for _ in 0..3 {
        let mut next: BTreeMap<QuotientEdge, Count> = BTreeMap::new();
        for (from, to, w) in table.iter() {
            if let Some(c) = weight.get(&to) {
                *next.entry(from).or_default() += c * w;
            }
        }
        next.retain(|_, c| !c.is_zero());
        weight = next;
    }
    ThreeStep { feeders: weight }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k2: i64, l2: i64) -> QuotientEdge {
        QuotientEdge::from_doubled(k2, l2).unwrap()
    }

    fn profile(items: &[((i64, i64), u64)]) -> CountProfile {
        items
            .iter()
            .map(|&((k2, l2), c)| (e(k2, l2), BigUint::from(c)))
            .collect()
    }

    #[test]
    fn first_profiles_q2() {
        let p = dp_profiles(2, 3);
        assert_eq!(p[1], profile(&[((3, 0), 1), ((2, 1), 3)]));
        assert_eq!(
            p[2],
            profile(&[((5, 0), 1), ((4, 1), 3), ((3, 2), 6), ((1, 1), 6)])
        );
        assert_eq!(
            p[3],
            profile(&[
                ((1, 0), 24),
                ((3, 1), 18),
                ((4, 3), 12),
                ((5, 2), 6),
                ((6, 1), 3),
                ((7, 0), 1)
            ])
        );
    }

    #[test]
    fn spot_values() {
        assert_eq!(dp_g(2, 6), BigUint::from(1536u32));
        assert_eq!(dp_f(2, 9), BigUint::from(38400u32));
        assert_eq!(dp_g(3, 5), BigUint::zero());
    }

    #[test]
    fn taboo_profile_matches_f() {
        for q in [2, 3] {
            for n in 1..10 {
                assert_eq!(
                    dp_taboo_profile(q, n).get(&BASE_EDGE),
                    dp_f(q, n),
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn mass_and_grading() {
        for q in [2u64, 3, 5] {
            for (s, p) in dp_profiles(q, 12).iter().enumerate() {
                assert_eq!(p.total(), BigUint::from(q).pow(2 * s as u32));
                for edge in p.support() {
                    // k + l = 1/2 + s (mod 3/2), doubled: k2 + l2 = 1 + 2s (mod 3)
                    assert_eq!((edge.k2() + edge.l2() - 1 - 2 * s as i64).rem_euclid(3), 0);
                }
            }
        }
    }

    #[test]
    fn sequential_matches_parallel() {
        assert_eq!(
            dp_profiles_with(3, 9, Exec::Sequential),
            dp_profiles_with(3, 9, Exec::Parallel)
        );
    }

    #[test]
    fn three_step_q2_q3() {
        let c = three_step_coefficients(2).unwrap();
        assert_eq!(c, [24u32, 32, 32, 64].map(BigUint::from));
        let c = three_step_coefficients(3).unwrap();
        assert_eq!(c, [432u32, 486, 486, 729].map(BigUint::from));
        // g_6 from N_3 at q = 2
        let n3 = &dp_profiles(2, 3)[3];
        let g6: BigUint = three_step_feeders()
            .iter()
            .zip(&three_step_coefficients(2).unwrap())
            .map(|(e, c)| n3.get(e) * c)
            .sum();
        assert_eq!(g6, BigUint::from(1536u32));
    }
}
