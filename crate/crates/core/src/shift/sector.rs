//! Vertices and type-1 directed edges of the quotient sector
//! `{(m, n) : m >= n >= 0}`, and the reflections that fold the apartment
//! onto it.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Sector vertex `v_{m,n}`, the class of `diag(t^m, t^n, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVertex {
    pub m: i64,
    pub n: i64,
}

pub const ORIGIN: QVertex = QVertex { m: 0, n: 0 };

impl QVertex {
    pub fn new(m: i64, n: i64) -> Result<Self> {
        if m >= n && n >= 0 {
            Ok(QVertex { m, n })
        } else {
            Err(Error::Domain(format!(
                "({m}, {n}) is outside the sector m >= n >= 0"
            )))
        }
    }

    pub fn vertex_type(self) -> i64 {
        (self.m + self.n).rem_euclid(3)
    }

    /// Neighbors in the quotient complex.
    pub fn sector_neighbors(self) -> Vec<QVertex> {
        let QVertex { m, n } = self;
        let raw: Vec<(i64, i64)> = if m > n && n > 0 {
            vec![
                (m - 1, n),
                (m + 1, n),
                (m, n - 1),
                (m, n + 1),
                (m - 1, n - 1),
                (m + 1, n + 1),
            ]
        } else if m > n {
            vec![(m - 1, 0), (m + 1, 0), (m, 1), (m + 1, 1)]
        } else if m > 0 {
            vec![(m + 1, n), (m, n - 1), (m - 1, n - 1), (m + 1, n + 1)]
        } else {
            vec![(1, 0), (1, 1)]
        };
        raw.into_iter().map(|(m, n)| QVertex { m, n }).collect()
    }

    pub fn is_adjacent(self, other: QVertex) -> bool {
        self.sector_neighbors().contains(&other)
    }
}

impl fmt::Display for QVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({},{})", self.m, self.n)
    }
}

/// Displacement of a type-1 edge in apartment coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// `(1, 0)`
    R,
    /// `(0, 1)`
    U,
    /// `(-1, -1)`
    D,
}

impl Step {
    pub const ALL: [Step; 3] = [Step::R, Step::U, Step::D];

    pub fn delta(self) -> (i64, i64) {
        match self {
            Step::R => (1, 0),
            Step::U => (0, 1),
            Step::D => (-1, -1),
        }
    }

    pub fn from_delta(dm: i64, dn: i64) -> Option<Step> {
        match (dm, dn) {
            (1, 0) => Some(Step::R),
            (0, 1) => Some(Step::U),
            (-1, -1) => Some(Step::D),
            _ => None,
        }
    }

    /// Image under `(m, n) -> (m - n, -n)`, the reflection in the wall `n = 0`.
    pub fn reflect_axis(self) -> Step {
        match self {
            Step::R => Step::R,
            Step::U => Step::D,
            Step::D => Step::U,
        }
    }

    /// Image under `(m, n) -> (n, m)`, the reflection in the diagonal.
    pub fn reflect_diagonal(self) -> Step {
        match self {
            Step::R => Step::U,
            Step::U => Step::R,
            Step::D => Step::D,
        }
    }
}

/// Folds an apartment point one step outside the sector back into it.
pub fn fold(m: i64, n: i64) -> QVertex {
    let (mut m, mut n) = (m, n);
    for _ in 0..3 {
        if n < 0 {
            (m, n) = (m - n, -n);
        } else if n > m {
            (m, n) = (n, m);
        } else {
            break;
        }
    }
    debug_assert!(
        m >= n && n >= 0,
        "fold needs a point adjacent to the sector"
    );
    QVertex { m, n }
}

/// A type-1 directed edge `e_{k,l}` of the quotient, from `source` to `target`.
/// Its midpoint `(k, l)` is kept doubled as the integers `(k2, l2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuotientEdge {
    source: QVertex,
    target: QVertex,
}

/// `e_{1/2,0}`, from the origin to `v_{1,0}`.
pub const BASE_EDGE: QuotientEdge = QuotientEdge {
    source: ORIGIN,
    target: QVertex { m: 1, n: 0 },
};

impl QuotientEdge {
    pub fn new(source: QVertex, target: QVertex) -> Result<Self> {
        QVertex::new(source.m, source.n)?;
        QVertex::new(target.m, target.n)?;
        let type_up = target.vertex_type() == (source.vertex_type() + 1) % 3;
        if !type_up || !source.is_adjacent(target) {
            return Err(Error::NotSectorAdjacent(source, target));
        }
        Ok(QuotientEdge { source, target })
    }

    /// Edge with doubled midpoint `(k2, l2) = (2k, 2l)`.
    pub fn from_doubled(k2: i64, l2: i64) -> Result<Self> {
        let (source, target) = match (k2.rem_euclid(2), l2.rem_euclid(2)) {
            (1, 0) => {
                let s = ((k2 - 1) / 2, l2 / 2);
                (s, (s.0 + 1, s.1))
            }
            (0, 1) => {
                let s = (k2 / 2, (l2 - 1) / 2);
                (s, (s.0, s.1 + 1))
            }
            (1, 1) => {
                let s = ((k2 + 1) / 2, (l2 + 1) / 2);
                (s, (s.0 - 1, s.1 - 1))
            }
            _ => return Err(Error::InvalidEdge(k2, l2)),
        };
        let v = |(m, n): (i64, i64)| QVertex::new(m, n).map_err(|_| Error::InvalidEdge(k2, l2));
        QuotientEdge::new(v(source)?, v(target)?).map_err(|_| Error::InvalidEdge(k2, l2))
    }

    pub fn source(&self) -> QVertex {
        self.source
    }

    pub fn target(&self) -> QVertex {
        self.target
    }

    pub fn k2(&self) -> i64 {
        self.source.m + self.target.m
    }

    pub fn l2(&self) -> i64 {
        self.source.n + self.target.n
    }

    pub fn step(&self) -> Step {
        Step::from_delta(self.target.m - self.source.m, self.target.n - self.source.n)
            .expect("type-1 sector edges have displacement R, U or D")
    }

    pub fn max_m(&self) -> i64 {
        self.source.m.max(self.target.m)
    }
}

impl Ord for QuotientEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.k2(), self.l2()).cmp(&(other.k2(), other.l2()))
    }
}

impl PartialOrd for QuotientEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Half-integer rendering of a doubled index.
pub fn half(x2: i64) -> String {
    if x2 % 2 == 0 {
        format!("{}", x2 / 2)
    } else {
        format!("{}/2", x2)
    }
}

impl fmt::Display for QuotientEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({},{})", half(self.k2()), half(self.l2()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(m: i64, n: i64) -> QVertex {
        QVertex::new(m, n).unwrap()
    }

    fn sorted(mut vs: Vec<QVertex>) -> Vec<QVertex> {
        vs.sort();
        vs
    }

    #[test]
    fn neighbor_cases() {
        assert_eq!(
            sorted(v(0, 0).sector_neighbors()),
            sorted(vec![v(1, 0), v(1, 1)])
        );
        assert_eq!(
            sorted(v(3, 1).sector_neighbors()),
            sorted(vec![v(2, 1), v(4, 1), v(3, 0), v(3, 2), v(2, 0), v(4, 2)])
        );
        assert_eq!(
            sorted(v(2, 2).sector_neighbors()),
            sorted(vec![v(3, 2), v(2, 1), v(3, 3), v(1, 1)])
        );
        assert_eq!(
            sorted(v(2, 0).sector_neighbors()),
            sorted(vec![v(1, 0), v(3, 0), v(2, 1), v(3, 1)])
        );
    }

    #[test]
    fn adjacency_is_symmetric() {
        for m in 0..8 {
            for n in 0..=m {
                for w in v(m, n).sector_neighbors() {
                    assert!(w.is_adjacent(v(m, n)), "{w} -/- v({m},{n})");
                }
            }
        }
    }

    #[test]
    fn fold_examples() {
        for m in 1..6 {
            assert_eq!(fold(m - 1, -1), v(m, 1));
        }
        assert_eq!(fold(1, 2), v(2, 1));
        assert_eq!(fold(-1, -1), v(1, 0));
    }

    #[test]
    fn doubled_indices_round_trip() {
        for m in 0..7 {
            for n in 0..=m {
                for w in v(m, n).sector_neighbors() {
                    if let Ok(e) = QuotientEdge::new(v(m, n), w) {
                        assert_eq!(QuotientEdge::from_doubled(e.k2(), e.l2()).unwrap(), e);
                    }
                }
            }
        }
        assert_eq!(QuotientEdge::from_doubled(1, 0).unwrap(), BASE_EDGE);
        assert!(QuotientEdge::from_doubled(2, 2).is_err());
        // the D edge out of the origin leaves the sector
        assert!(QuotientEdge::from_doubled(-1, -1).is_err());
    }

    #[test]
    fn edge_rejects_wrong_type() {
        assert!(QuotientEdge::new(v(0, 0), v(1, 1)).is_err());
        assert!(QuotientEdge::new(v(1, 0), v(0, 0)).is_err());
        assert!(QuotientEdge::new(v(1, 1), v(0, 0)).is_ok());
    }
}
