//! Brute-force path enumeration in the building: exact orbit counts and the
//! measured transition weights of the quotient shift.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;

use super::{BDirectedEdge, Building, InvariantPair};
use crate::algebra::Count;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::shift::{QuotientEdge, WeightTable};

/// Default cap on the number of enumerated leaves.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleCounts {
    /// Paths of `n` transitions from the base edge ending over the base
    /// quotient edge.
    pub plain: Count,
    /// The subset with no intermediate edge over the base quotient edge.
    pub first_return: Count,
}

/// Callback of [`Building::walk`]: depth, edge, target invariant, continuations.
pub type Visitor<'a> = dyn FnMut(usize, &BDirectedEdge, InvariantPair, &[Child]) -> Result<()> + 'a;

/// One enumeration-tree node: an edge with the invariant of its target.
#[derive(Clone, Debug)]
struct Node {
    edge: BDirectedEdge,
    target_inv: InvariantPair,
    /// Some intermediate vertex so far sits over the origin.
    hit: bool,
}

/// A continuation with the invariant of its new target.
#[derive(Clone, Debug)]
pub struct Child {
    pub edge: BDirectedEdge,
    pub target_inv: InvariantPair,
}

/// Oracle counts for the PGL_3 building with the default budget.
pub fn oracle_counts(q: u32, n: usize, first_return: bool) -> Result<Count> {
    let counts = Building::pgl3(q)?.oracle_counts(n, DEFAULT_BUDGET, Exec::default())?;
    Ok(if first_return {
        counts.first_return
    } else {
        counts.plain
    })
}

impl Building {
    /// Number of leaves of an `n`-transition enumeration.
    pub fn leaf_estimate(&self, n: usize) -> u128 {
        (self.branching() as u128).saturating_pow(n as u32)
    }

    fn check_budget(&self, n: usize, budget: u128) -> Result<()> {
        let leaves = self.leaf_estimate(n);
        if leaves > budget {
            return Err(Error::BudgetExceeded {
                leaves,
                limit: budget,
            });
        }
        Ok(())
    }

    fn continuations_checked(&self, e: &BDirectedEdge) -> Result<Vec<BDirectedEdge>> {
        let conts = self.geodesic_continuations(e);
        if conts.len() as u64 != self.branching() {
            return Err(Error::Validation(format!(
                "edge {} -> {} has {} geodesic continuations, expected {}",
                e.source,
                e.target,
                conts.len(),
                self.branching()
            )));
        }
        Ok(conts)
    }

    /// Continuations of `e` together with the invariants of their targets.
    pub fn children(&self, e: &BDirectedEdge) -> Result<Vec<Child>> {
        self.continuations_checked(e)?
            .into_iter()
            .map(|edge| {
                let target_inv = self.birkhoff_invariant(&edge.target)?;
                Ok(Child { edge, target_inv })
            })
            .collect()
    }

    /// Quotient edge from a pair of endpoint invariants.
    pub fn quotient_edge_from(
        &self,
        source: InvariantPair,
        target: InvariantPair,
    ) -> Result<QuotientEdge> {
        if self.dim != 3 {
            return Err(Error::Dimension(self.dim));
        }
        QuotientEdge::new(source.to_qvertex(), target.to_qvertex())
            .map_err(|_| Error::NotSectorAdjacent(source.to_qvertex(), target.to_qvertex()))
    }

    /// The quotient edge `e_{k,l}` under a building edge.
    pub fn quotient_edge_of(&self, e: &BDirectedEdge) -> Result<QuotientEdge> {
        let s = self.birkhoff_invariant(&e.source)?;
        let t = self.birkhoff_invariant(&e.target)?;
        self.quotient_edge_from(s, t)
    }

    fn root(&self) -> Result<Node> {
        let edge = self.base_edge();
        if self.birkhoff_invariant(&edge.source)? != InvariantPair::ORIGIN {
            return Err(Error::Validation(
                "identity class is not over the origin".into(),
            ));
        }
        let target_inv = self.birkhoff_invariant(&edge.target)?;
        Ok(Node {
            edge,
            target_inv,
            hit: false,
        })
    }

    fn expand(&self, node: &Node) -> Result<Vec<Node>> {
        let hit = node.hit || node.target_inv == InvariantPair::ORIGIN;
        Ok(self
            .children(&node.edge)?
            .into_iter()
            .map(|c| Node {
                edge: c.edge,
                target_inv: c.target_inv,
                hit,
            })
            .collect())
    }

    /// Adds the paths that end right after `node` (at `depth`): when its
    /// target is over the origin every continuation closes a cycle of
    /// length `depth + 1`.
    fn tally(&self, node: &Node, depth: usize, acc: &mut [(u64, u64)]) -> Result<()> {
        if node.target_inv != InvariantPair::ORIGIN {
            return Ok(());
        }
        let c = self.continuations_checked(&node.edge)?.len() as u64;
        let slot = &mut acc[depth + 1];
        slot.0 += c;
        if !node.hit {
            slot.1 += c;
        }
        Ok(())
    }

    fn count_below(
        &self,
        node: &Node,
        depth: usize,
        n: usize,
        acc: &mut [(u64, u64)],
    ) -> Result<()> {
        self.tally(node, depth, acc)?;
        if depth + 1 < n {
            for child in self.expand(node)? {
                self.count_below(&child, depth + 1, n, acc)?;
            }
        }
        Ok(())
    }

    /// Oracle counts for every length `0..=n` from one enumeration.
    pub fn oracle_series(&self, n: usize, budget: u128, exec: Exec) -> Result<Vec<OracleCounts>> {
        if n == 0 {
            return Err(Error::Domain("orbit length must be at least 1".into()));
        }
        self.check_budget(n, budget)?;
        let mut acc = vec![(0u64, 0u64); n + 1];
        // split the tree at a shallow frontier and count subtrees independently
        let mut frontier = vec![self.root()?];
        let split = (n - 1).min(2);
        for depth in 0..split {
            let mut next = Vec::new();
            for node in &frontier {
                self.tally(node, depth, &mut acc)?;
                next.extend(self.expand(node)?);
            }
            frontier = next;
        }
        let parts = exec.map(&frontier, |node| {
            let mut part = vec![(0u64, 0u64); n + 1];
            self.count_below(node, split, n, &mut part).map(|_| part)
        });
        for part in parts {
            for (slot, (p, f)) in acc.iter_mut().zip(part?) {
                slot.0 += p;
                slot.1 += f;
            }
        }
        Ok(acc
            .into_iter()
            .map(|(p, f)| OracleCounts {
                plain: BigUint::from(p),
                first_return: BigUint::from(f),
            })
            .collect())
    }

    /// Enumerates every geodesic path `(e_0, ..., e_n)` with `e_0` the base
    /// edge and counts those whose last edge lies over the base quotient
    /// edge, i.e. whose vertex `v_n` lies over the origin. First returns
    /// additionally avoid the origin at `v_1, ..., v_{n-1}`.
    pub fn oracle_counts(&self, n: usize, budget: u128, exec: Exec) -> Result<OracleCounts> {
        Ok(self.oracle_series(n, budget, exec)?.swap_remove(n))
    }

    /// Depth-first walk over all paths of at most `max_depth` transitions;
    /// `visit(depth, node_edge, target_inv, children)` sees every edge once
    /// per path together with its classified continuations.
    pub fn walk(&self, max_depth: usize, budget: u128, visit: &mut Visitor<'_>) -> Result<()> {
        self.check_budget(max_depth + 1, budget)?;
        let root = self.root()?;
        self.walk_from(&root.edge, root.target_inv, 0, max_depth, visit)
    }

    fn walk_from(
        &self,
        edge: &BDirectedEdge,
        target_inv: InvariantPair,
        depth: usize,
        max_depth: usize,
        visit: &mut Visitor<'_>,
    ) -> Result<()> {
        let children = self.children(edge)?;
        visit(depth, edge, target_inv, &children)?;
        if depth < max_depth {
            for c in &children {
                self.walk_from(&c.edge, c.target_inv, depth + 1, max_depth, visit)?;
            }
        }
        Ok(())
    }

    /// Transition multiset out of `e` (whose target invariant is known).
    pub fn transitions_of(
        &self,
        source_inv: InvariantPair,
        children: &[Child],
    ) -> Result<BTreeMap<QuotientEdge, u64>> {
        let mut out = BTreeMap::new();
        for c in children {
            *out.entry(self.quotient_edge_from(source_inv, c.target_inv)?)
                .or_insert(0) += 1;
        }
        Ok(out)
    }

    /// Breadth-first search over lifted edges, one lift per quotient edge,
    /// expanding quotient edges with both endpoints at `m <= m_max`.
    pub fn oracle_transition_census(&self, m_max: i64) -> Result<Census> {
        if self.dim != 3 {
            return Err(Error::Dimension(self.dim));
        }
        let root = self.root()?;
        let base = self.quotient_edge_from(InvariantPair::ORIGIN, root.target_inv)?;
        let mut lifts = BTreeMap::from([(base, root.edge.clone())]);
        let mut transitions = BTreeMap::new();
        let mut queue = VecDeque::from([(base, root.edge, root.target_inv)]);
        while let Some((qe, edge, target_inv)) = queue.pop_front() {
            if transitions.contains_key(&qe) {
                continue;
            }
            let children = self.children(&edge)?;
            let trans = self.transitions_of(target_inv, &children)?;
            for c in children {
                let next = self.quotient_edge_from(target_inv, c.target_inv)?;
                if next.max_m() <= m_max && !lifts.contains_key(&next) {
                    lifts.insert(next, c.edge.clone());
                    queue.push_back((next, c.edge, c.target_inv));
                }
            }
            transitions.insert(qe, trans);
        }
        Ok(Census {
            table: WeightTable::from_transitions(self.q() as u64, m_max, transitions),
            lifts,
        })
    }

    /// One lift of `target` found by [`Self::oracle_transition_census`].
    pub fn find_lift(&self, target: QuotientEdge, m_max: i64) -> Result<BDirectedEdge> {
        self.oracle_transition_census(m_max.max(target.max_m()))?
            .lift(&target)
            .cloned()
    }

    /// Transition multisets of every lifted edge on every path of at most
    /// `max_len` transitions, grouped by quotient edge.
    pub fn prefix_census(&self, max_len: usize, budget: u128) -> Result<PrefixCensus> {
        let mut observed: BTreeMap<QuotientEdge, BTreeMap<BTreeMap<QuotientEdge, u64>, usize>> =
            BTreeMap::new();
        let mut source_invs: Vec<InvariantPair> = vec![InvariantPair::ORIGIN];
        let mut edges_examined = 0usize;
        let mut visit =
            |depth: usize, _: &BDirectedEdge, target_inv: InvariantPair, children: &[Child]| {
                source_invs.truncate(depth + 1);
                let source_inv = source_invs[depth];
                let qe = self.quotient_edge_from(source_inv, target_inv)?;
                let trans = self.transitions_of(target_inv, children)?;
                *observed.entry(qe).or_default().entry(trans).or_insert(0) += 1;
                source_invs.push(target_inv);
                edges_examined += 1;
                Ok(())
            };
        self.walk(max_len, budget, &mut visit)?;
        Ok(PrefixCensus {
            q: self.q() as u64,
            observed,
            edges_examined,
        })
    }
}

/// Measured transition weights with one concrete lift per quotient edge.
#[derive(Clone, Debug)]
pub struct Census {
    pub table: WeightTable,
    pub lifts: BTreeMap<QuotientEdge, BDirectedEdge>,
}

impl Census {
    pub fn lift(&self, e: &QuotientEdge) -> Result<&BDirectedEdge> {
        self.lifts.get(e).ok_or(Error::Unreachable(*e))
    }
}

/// Distinct transition multisets observed per quotient edge, with the number
/// of lifted edges that produced each.
#[derive(Clone, Debug)]
pub struct PrefixCensus {
    pub q: u64,
    pub observed: BTreeMap<QuotientEdge, BTreeMap<BTreeMap<QuotientEdge, u64>, usize>>,
    pub edges_examined: usize,
}

impl PrefixCensus {
    /// Quotient edges whose lifts disagree on their transitions.
    pub fn prefix_dependent(&self) -> Vec<QuotientEdge> {
        self.observed
            .iter()
            .filter(|(_, sets)| sets.len() > 1)
            .map(|(e, _)| *e)
            .collect()
    }

    /// The common transitions, when every quotient edge has exactly one.
    pub fn to_table(&self, m_max: i64) -> Option<WeightTable> {
        let mut transitions = BTreeMap::new();
        for (e, sets) in &self.observed {
            if sets.len() != 1 {
                return None;
            }
            transitions.insert(*e, sets.keys().next().unwrap().clone());
        }
        Some(WeightTable::from_transitions(self.q, m_max, transitions))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{edge_transitions, BASE_EDGE};

    #[test]
    fn base_edge_maps_to_base_quotient_edge() {
        let b = Building::pgl3(2).unwrap();
        assert_eq!(b.quotient_edge_of(&b.base_edge()).unwrap(), BASE_EDGE);
        let straight = BDirectedEdge {
            source: b.base_edge().target,
            target: super::super::VertexClass::new(crate::algebra::MatL::diag_t(&[2, 0, 0])),
        };
        assert_eq!(
            b.quotient_edge_of(&straight).unwrap(),
            QuotientEdge::from_doubled(3, 0).unwrap()
        );
    }

    #[test]
    fn base_continuations_census_q2() {
        let b = Building::pgl3(2).unwrap();
        let root = b.root().unwrap();
        let children = b.children(&root.edge).unwrap();
        let trans = b.transitions_of(root.target_inv, &children).unwrap();
        assert_eq!(trans, edge_transitions(BASE_EDGE, 2));
        let e = |k2, l2| QuotientEdge::from_doubled(k2, l2).unwrap();
        assert_eq!(trans, BTreeMap::from([(e(3, 0), 1), (e(2, 1), 3)]));
    }

    #[test]
    fn small_counts() {
        let b = Building::pgl3(2).unwrap();
        let c = b
            .oracle_counts(3, DEFAULT_BUDGET, Exec::Sequential)
            .unwrap();
        assert_eq!(c.plain, BigUint::from(24u32));
        assert_eq!(c.first_return, BigUint::from(24u32));
        let c = b
            .oracle_counts(4, DEFAULT_BUDGET, Exec::Sequential)
            .unwrap();
        assert_eq!(c.plain, BigUint::from(0u32));
        let series = b.oracle_series(6, DEFAULT_BUDGET, Exec::Parallel).unwrap();
        let plain: Vec<u32> = series
            .iter()
            .map(|c| u32::try_from(&c.plain).unwrap())
            .collect();
        let first: Vec<u32> = series
            .iter()
            .map(|c| u32::try_from(&c.first_return).unwrap())
            .collect();
        assert_eq!(plain, [0, 0, 0, 24, 0, 0, 1536]);
        assert_eq!(first, [0, 0, 0, 24, 0, 0, 960]);
    }

    #[test]
    fn budget_refusal() {
        let b = Building::pgl3(3).unwrap();
        match b.oracle_counts(9, 1000, Exec::Sequential) {
            Err(Error::BudgetExceeded { leaves, limit }) => {
                assert_eq!(leaves, 9u128.pow(9));
                assert_eq!(limit, 1000);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn tree_counts() {
        let t = Building::pgl2(2).unwrap();
        let c = t
            .oracle_counts(2, DEFAULT_BUDGET, Exec::Sequential)
            .unwrap();
        assert_eq!(c.plain, BigUint::from(2u32));
    }

    #[test]
    fn lift_search() {
        let b = Building::pgl3(2).unwrap();
        let target = QuotientEdge::from_doubled(5, 5).unwrap();
        let lift = b.find_lift(target, 3).unwrap();
        assert_eq!(b.quotient_edge_of(&lift).unwrap(), target);
    }
}
