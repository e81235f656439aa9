//! The weighted transition graph of the quotient Markov shift.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::sector::{fold, QuotientEdge, Step, BASE_EDGE};

/// Lifts of the pair (in-step, out-step) at an interior vertex.
pub fn interior_weight(q: u64, incoming: Step, outgoing: Step) -> u64 {
    use Step::*;
    match (incoming, outgoing) {
        (R, R) => 1,
        (R, U) => q - 1,
        (R, D) => q * q - q,
        (U, R) => 0,
        (U, U) => q,
        (U, D) => q * q - q,
        (D, R) | (D, U) => 0,
        (D, D) => q * q,
    }
}

/// Successors of `e` with their weights: the interior rule keyed on the
/// sector displacement of `e`, raw targets folded into the sector, weights
/// of coinciding folded edges summed.
pub fn edge_transitions(e: QuotientEdge, q: u64) -> BTreeMap<QuotientEdge, u64> {
    let v = e.target();
    let mut out = BTreeMap::new();
    for step in Step::ALL {
        let w = interior_weight(q, e.step(), step);
        if w == 0 {
            continue;
        }
        let (dm, dn) = step.delta();
        let folded = fold(v.m + dm, v.n + dn);
        let next = QuotientEdge::new(v, folded).expect("folding preserves type-1 adjacency");
        *out.entry(next).or_insert(0) += w;
    }
    out
}

/// A transition whose weight or presence differs between two tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMismatch {
    pub from: QuotientEdge,
    pub to: QuotientEdge,
    pub expected: u64,
    pub actual: u64,
}

/// Weighted transition relation restricted to a finite set of source edges.
/// Every stored source keeps its complete successor list, so successors may
/// lie outside the source set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightTable {
    q: u64,
    m_max: i64,
    transitions: BTreeMap<QuotientEdge, BTreeMap<QuotientEdge, u64>>,
}

impl WeightTable {
    pub fn from_transitions(
        q: u64,
        m_max: i64,
        transitions: BTreeMap<QuotientEdge, BTreeMap<QuotientEdge, u64>>,
    ) -> Self {
        WeightTable {
            q,
            m_max,
            transitions,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m_max(&self) -> i64 {
        self.m_max
    }

    pub fn edges(&self) -> impl Iterator<Item = &QuotientEdge> {
        self.transitions.keys()
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn contains(&self, e: &QuotientEdge) -> bool {
        self.transitions.contains_key(e)
    }

    pub fn successors(&self, e: &QuotientEdge) -> Option<&BTreeMap<QuotientEdge, u64>> {
        self.transitions.get(e)
    }

    pub fn weight(&self, from: &QuotientEdge, to: &QuotientEdge) -> u64 {
        self.transitions
            .get(from)
            .and_then(|s| s.get(to))
            .copied()
            .unwrap_or(0)
    }

    /// Overrides one weight; used to inject faults into validation runs.
    pub fn set_weight(&mut self, from: QuotientEdge, to: QuotientEdge, w: u64) {
        let succ = self.transitions.entry(from).or_default();
        if w == 0 {
            succ.remove(&to);
        } else {
            succ.insert(to, w);
        }
    }

    /// `(from, to, weight)` ordered by the doubled indices of `from`, then `to`.
    pub fn iter(&self) -> impl Iterator<Item = (QuotientEdge, QuotientEdge, u64)> + '_ {
        self.transitions
            .iter()
            .flat_map(|(f, s)| s.iter().map(move |(t, w)| (*f, *t, *w)))
    }

    /// The admissible weight values `{1, q-1, q, q^2-q, q^2-1, q^2}`.
    pub fn weight_alphabet(q: u64) -> BTreeSet<u64> {
        [1, q - 1, q, q * q - q, q * q - 1, q * q]
            .into_iter()
            .collect()
    }

    /// Transitions whose weight lies outside [`Self::weight_alphabet`].
    pub fn alphabet_violations(&self) -> Vec<(QuotientEdge, QuotientEdge, u64)> {
        let alphabet = Self::weight_alphabet(self.q);
        self.iter()
            .filter(|(_, _, w)| !alphabet.contains(w))
            .collect()
    }

    /// Sources whose out-weights do not sum to `q^2`, with the actual sum.
    pub fn out_sum_violations(&self) -> Vec<(QuotientEdge, u64)> {
        self.transitions
            .iter()
            .map(|(e, s)| (*e, s.values().sum::<u64>()))
            .filter(|&(_, sum)| sum != self.q * self.q)
            .collect()
    }

    /// Differences against `actual` on the sources both tables share.
    pub fn mismatches(&self, actual: &WeightTable) -> Vec<WeightMismatch> {
        let mut out = Vec::new();
        for (from, expected) in &self.transitions {
            let Some(got) = actual.transitions.get(from) else {
                continue;
            };
            let targets: BTreeSet<&QuotientEdge> = expected.keys().chain(got.keys()).collect();
            for to in targets {
                let (e, a) = (
                    expected.get(to).copied().unwrap_or(0),
                    got.get(to).copied().unwrap_or(0),
                );
                if e != a {
                    out.push(WeightMismatch {
                        from: *from,
                        to: *to,
                        expected: e,
                        actual: a,
                    });
                }
            }
        }
        out
    }
}

/// All edges reachable from `e_{1/2,0}` through edges with both endpoints
/// satisfying `m <= m_max`, each with its fold-rule transitions.
pub fn build_graph(q: u64, m_max: i64) -> WeightTable {
    let mut transitions = BTreeMap::new();
    let mut queue = VecDeque::from([BASE_EDGE]);
    while let Some(e) = queue.pop_front() {
        if transitions.contains_key(&e) {
            continue;
        }
        let succ = edge_transitions(e, q);
        for next in succ.keys() {
            if next.max_m() <= m_max && !transitions.contains_key(next) {
                queue.push_back(*next);
            }
        }
        transitions.insert(e, succ);
    }
    WeightTable {
        q,
        m_max,
        transitions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::sector::QVertex;

    fn edge(s: (i64, i64), t: (i64, i64)) -> QuotientEdge {
        QuotientEdge::new(
            QVertex::new(s.0, s.1).unwrap(),
            QVertex::new(t.0, t.1).unwrap(),
        )
        .unwrap()
    }

    type Doubled = (i64, i64);

    fn map(items: &[(Doubled, Doubled, u64)]) -> BTreeMap<QuotientEdge, u64> {
        items.iter().map(|&(s, t, w)| (edge(s, t), w)).collect()
    }

    #[test]
    fn interior_rule() {
        for q in [2, 3, 5] {
            let e = edge((3, 1), (4, 1));
            assert_eq!(
                edge_transitions(e, q),
                map(&[
                    ((4, 1), (5, 1), 1),
                    ((4, 1), (4, 2), q - 1),
                    ((4, 1), (3, 0), q * q - q)
                ])
            );
        }
    }

    #[test]
    fn axis_and_origin_fold() {
        for q in [2, 3, 4] {
            for m in 2..6 {
                let e = edge((m - 1, 0), (m, 0));
                assert_eq!(
                    edge_transitions(e, q),
                    map(&[((m, 0), (m + 1, 0), 1), ((m, 0), (m, 1), q * q - 1)])
                );
            }
            assert_eq!(
                edge_transitions(edge((1, 1), (0, 0)), q),
                map(&[((0, 0), (1, 0), q * q)])
            );
        }
    }

    #[test]
    fn graph_weights_and_sums() {
        for q in [2, 3, 7] {
            let table = build_graph(q, 6);
            assert!(table.alphabet_violations().is_empty());
            assert!(table.out_sum_violations().is_empty());
            for (from, to, _) in table.iter() {
                assert!(Step::ALL.contains(&from.step()) && Step::ALL.contains(&to.step()));
            }
        }
    }

    #[test]
    fn origin_cycle_at_q2() {
        let t = build_graph(2, 3);
        let a = BASE_EDGE;
        let b = edge((1, 0), (1, 1));
        let c = edge((1, 1), (0, 0));
        assert_eq!(t.weight(&a, &b), 3);
        assert_eq!(t.weight(&b, &c), 2);
        assert_eq!(t.weight(&c, &a), 4);
        assert_eq!(t.successors(&c).unwrap().len(), 1);
    }

    #[test]
    fn mismatch_report() {
        let t = build_graph(2, 3);
        let mut bad = t.clone();
        let b = edge((1, 0), (1, 1));
        bad.set_weight(BASE_EDGE, b, 2);
        let diff = t.mismatches(&bad);
        assert_eq!(
            diff,
            vec![WeightMismatch {
                from: BASE_EDGE,
                to: b,
                expected: 3,
                actual: 2
            }]
        );
    }
}
