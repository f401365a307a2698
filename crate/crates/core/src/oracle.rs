//! Instrumented access to a graph through degree, neighbor, pair and
//! uniform-edge queries.
//!
//! Every algorithm in this crate reads the host graph only through an
//! [`Oracle`], so the counters are the query complexity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Which model metadata the oracle exposes besides `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `m` and ground-truth counts are available as metadata.
    Exact,
    /// Only `n` is known; everything else must be estimated.
    Strict,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "strict" => Ok(Mode::Strict),
            other => Err(format!("unknown mode {other:?}, expected exact|strict")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    /// The caller-configured global budget.
    Budget,
    /// A scoped limit set by an algorithm (Sample-H's fallback trigger).
    Scoped,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("vertex {v} out of range for n = {n}")]
    OutOfRange { v: usize, n: usize },
    #[error("neighbor index must be at least 1")]
    ZeroIndex,
    #[error("pair query on a single vertex {v}")]
    SelfPair { v: usize },
    #[error("uniform edge query on a graph without edges")]
    NoEdges,
    #[error("query limit reached ({kind:?}, {limit} queries)")]
    LimitReached { kind: LimitKind, limit: u64 },
}

/// Snapshot of the per-type counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryStats {
    pub degree: u64,
    pub neighbor: u64,
    pub pair: u64,
    pub uniform_edge: u64,
    pub total: u64,
    pub budget_exhausted: bool,
}

impl QueryStats {
    /// Counter difference `self - earlier`.
    pub fn since(&self, earlier: &QueryStats) -> QueryStats {
        QueryStats {
            degree: self.degree - earlier.degree,
            neighbor: self.neighbor - earlier.neighbor,
            pair: self.pair - earlier.pair,
            uniform_edge: self.uniform_edge - earlier.uniform_edge,
            total: self.total - earlier.total,
            budget_exhausted: self.budget_exhausted,
        }
    }
}

enum Kind {
    Degree,
    Neighbor,
    Pair,
    UniformEdge,
}

/// Query access to one graph with counters, an optional budget and a
/// seeded random stream. Not shareable across threads; use one per run.
pub struct Oracle<'g> {
    graph: &'g Graph,
    mode: Mode,
    stats: QueryStats,
    budget: Option<u64>,
    scoped: Option<u64>,
    rng: ChaCha8Rng,
}

impl<'g> Oracle<'g> {
    /// Exact-mode oracle without a budget.
    pub fn new(graph: &'g Graph, seed: u64) -> Oracle<'g> {
        Oracle {
            graph,
            mode: Mode::Exact,
            stats: QueryStats::default(),
            budget: None,
            scoped: None,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// Oriented edge count, available in exact mode only.
    pub fn m(&self) -> Option<usize> {
        match self.mode {
            Mode::Exact => Some(self.graph.m()),
            Mode::Strict => None,
        }
    }

    /// Ground truth for exact-mode estimators; `None` in strict mode.
    pub fn ground_truth(&self) -> Option<&'g Graph> {
        match self.mode {
            Mode::Exact => Some(self.graph),
            Mode::Strict => None,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn stats(&self) -> QueryStats {
        self.stats
    }

    pub fn total(&self) -> u64 {
        self.stats.total
    }

    /// Zeroes the counters; the budget and random stream are kept.
    pub fn reset(&mut self) {
        self.stats = QueryStats::default();
    }

    /// Sets or clears a limit on the running total.
    pub fn set_scoped_limit(&mut self, limit: Option<u64>) {
        self.scoped = limit;
    }

    fn charge(&mut self, kind: Kind) -> Result<(), QueryError> {
        if let Some(b) = self.budget {
            if self.stats.total >= b {
                self.stats.budget_exhausted = true;
                return Err(QueryError::LimitReached {
                    kind: LimitKind::Budget,
                    limit: b,
                });
            }
        }
        if let Some(s) = self.scoped {
            if self.stats.total >= s {
                return Err(QueryError::LimitReached {
                    kind: LimitKind::Scoped,
                    limit: s,
                });
            }
        }
        match kind {
            Kind::Degree => self.stats.degree += 1,
            Kind::Neighbor => self.stats.neighbor += 1,
            Kind::Pair => self.stats.pair += 1,
            Kind::UniformEdge => self.stats.uniform_edge += 1,
        }
        self.stats.total += 1;
        Ok(())
    }

    fn check(&self, v: usize) -> Result<(), QueryError> {
        if v >= self.graph.n() {
            Err(QueryError::OutOfRange { v, n: self.graph.n() })
        } else {
            Ok(())
        }
    }

    pub fn degree(&mut self, v: usize) -> Result<usize, QueryError> {
        self.check(v)?;
        self.charge(Kind::Degree)?;
        Ok(self.graph.degree(v))
    }

    /// The `i`-th neighbor of `v` (1-indexed); `None` is FAIL (`i > d(v)`).
    /// A FAIL answer is still charged as one query.
    pub fn neighbor(&mut self, v: usize, i: usize) -> Result<Option<usize>, QueryError> {
        self.check(v)?;
        if i == 0 {
            return Err(QueryError::ZeroIndex);
        }
        self.charge(Kind::Neighbor)?;
        Ok(self.graph.neighbors(v).get(i - 1).copied())
    }

    pub fn pair(&mut self, u: usize, v: usize) -> Result<bool, QueryError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(QueryError::SelfPair { v });
        }
        self.charge(Kind::Pair)?;
        Ok(self.graph.has_edge(u, v))
    }

    /// A uniformly random oriented edge.
    pub fn uniform_edge(&mut self) -> Result<(usize, usize), QueryError> {
        if self.graph.m() == 0 {
            return Err(QueryError::NoEdges);
        }
        self.charge(Kind::UniformEdge)?;
        let e = self.rng.random_range(0..self.graph.m());
        Ok(self.graph.oriented_edge(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn degree_answers() {
        let t = Graph::cycle(3);
        let mut o = Oracle::new(&t, 1);
        assert_eq!(o.degree(0), Ok(2));
        let k4 = Graph::complete(4);
        let mut o = Oracle::new(&k4, 1);
        assert!((0..4).all(|v| o.degree(v) == Ok(3)));
        let iso = Graph::empty(2);
        assert_eq!(Oracle::new(&iso, 1).degree(1), Ok(0));
        assert!(matches!(o.degree(4), Err(QueryError::OutOfRange { .. })));
    }

    #[test]
    fn neighbor_answers_and_fail_costs_a_query() {
        let t = Graph::cycle(3);
        let mut o = Oracle::new(&t, 1);
        assert_eq!(o.neighbor(0, 1), Ok(Some(1)));
        assert_eq!(o.neighbor(0, 3), Ok(None));
        assert_eq!(o.stats().neighbor, 2);
        let s3 = Graph::star(3);
        assert_eq!(Oracle::new(&s3, 1).neighbor(0, 2), Ok(Some(2)));
    }

    #[test]
    fn pair_answers() {
        let t = Graph::cycle(3);
        let p3 = Graph::path(3);
        assert_eq!(Oracle::new(&t, 1).pair(0, 1), Ok(true));
        assert_eq!(Oracle::new(&p3, 1).pair(0, 2), Ok(false));
        assert!(matches!(Oracle::new(&p3, 1).pair(1, 1), Err(QueryError::SelfPair { v: 1 })));
    }

    #[test]
    fn counters_and_reset() {
        let g = Graph::complete(4);
        let mut o = Oracle::new(&g, 1);
        for v in 0..3 {
            o.degree(v).unwrap();
        }
        o.pair(0, 1).unwrap();
        o.pair(1, 2).unwrap();
        let s = o.stats();
        assert_eq!((s.degree, s.pair, s.total), (3, 2, 5));
        o.reset();
        assert_eq!(o.stats(), QueryStats::default());
    }

    #[test]
    fn budget_signal_on_sixth_query() {
        let g = Graph::complete(4);
        let mut o = Oracle::new(&g, 1).with_budget(Some(5));
        for _ in 0..5 {
            o.degree(0).unwrap();
        }
        assert!(!o.stats().budget_exhausted);
        assert!(matches!(
            o.uniform_edge(),
            Err(QueryError::LimitReached { kind: LimitKind::Budget, limit: 5 })
        ));
        assert!(o.stats().budget_exhausted);
        assert_eq!(o.stats().total, 5);
    }

    #[test]
    fn scoped_limit_is_separate_from_budget() {
        let g = Graph::complete(4);
        let mut o = Oracle::new(&g, 1);
        o.set_scoped_limit(Some(1));
        o.degree(0).unwrap();
        assert!(matches!(
            o.degree(0),
            Err(QueryError::LimitReached { kind: LimitKind::Scoped, .. })
        ));
        assert!(!o.stats().budget_exhausted);
        o.set_scoped_limit(None);
        assert!(o.degree(0).is_ok());
    }

    #[test]
    fn strict_mode_hides_m() {
        let g = Graph::complete(4);
        let o = Oracle::new(&g, 1).with_mode(Mode::Strict);
        assert_eq!(o.m(), None);
        assert!(o.ground_truth().is_none());
        assert_eq!(o.n(), 4);
    }

    #[test]
    fn same_seed_same_answers() {
        let g = crate::graph::gen_er(20, 0.3, 2);
        let draw = |seed| {
            let mut o = Oracle::new(&g, seed);
            (0..50).map(|_| o.uniform_edge().unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }
}
