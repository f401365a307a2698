//! Lower-bound instance generators: the motif `H_D` built from a
//! decomposition, the cycle, few-cycles, star and CC gadgets, the graph
//! `G_z` embedding a t-set-disjointness instance, the good-counts
//! validator, and crucial-edge probing.
//!
//! `m` is the oriented edge count everywhere in this crate. The lower-bound
//! constructions size their parts by the square root of the undirected
//! edge count, so [`root_m`] is `ceil(sqrt(m / 2))` and the constraint
//! checks use `sqrt(m / 2)` in place of `sqrt(m)`.
//!
//! Constants at desk scale:
//! * cycle gadget: `k` parts of `ceil(o^(1/k))`, consecutive parts complete
//!   bipartite (with wraparound), so it holds `part^k` cycles of length `k`;
//! * few-cycles gadget: one singleton part and `k - 1` parts of
//!   `ceil(o^(1/(k-1)))`;
//! * star gadget: centers with the requested degrees, petals handed out
//!   round-robin;
//! * CC gadget: `k1 + 2` parts of `side`; every ordered pair `(i, j)` adds
//!   two edges, labeled `((j - i) mod side) + 1` at both endpoints.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{cost_profile, decompose, Counts, Shape};
use crate::exact::{binomial, count_motif, count_odd_cycles, count_stars};
use crate::graph::{Graph, GraphError, Motif};
use crate::oracle::{Oracle, QueryError};
use crate::samplers::ceil_root;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GadgetError {
    #[error("decomposition needs at least one odd cycle")]
    NoCycle,
    #[error("H_D has decomposition value {got}/2, expected {want}/2")]
    NotOptimal { got: u32, want: u32 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("instance has {found} intersections, promise allows 0 or {t}")]
    Promise { found: usize, t: usize },
    #[error("count constraints violated: {0:?}")]
    Constraints(Vec<ConstraintViolation>),
    #[error("ambiguous gadget pairing: {0}")]
    Pairing(String),
    #[error("scale cap exceeded: {0}")]
    ScaleCap(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `ceil(sqrt(m / 2))`.
pub fn root_m(m: f64) -> usize {
    ceil_root(m / 2.0, 2).max(1)
}

fn sqrt_m(m: f64) -> f64 {
    (m / 2.0).sqrt()
}

/// A t-set-disjointness instance over `n x n` bit matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessInstance {
    pub n: usize,
    pub x: Vec<Vec<bool>>,
    pub y: Vec<Vec<bool>>,
    /// Promised intersection size for YES instances.
    pub t: usize,
}

impl DisjointnessInstance {
    pub fn new(x: Vec<Vec<bool>>, y: Vec<Vec<bool>>, t: usize) -> Result<Self, GadgetError> {
        let n = x.len();
        let square = |a: &Vec<Vec<bool>>| a.len() == n && a.iter().all(|r| r.len() == n);
        if !square(&x) || !square(&y) {
            return Err(GadgetError::Precondition("matrices must be square and equal size".into()));
        }
        let inst = DisjointnessInstance { n, x, y, t };
        let found = inst.intersections().len();
        if found != 0 && found != t {
            return Err(GadgetError::Promise { found, t });
        }
        Ok(inst)
    }

    /// Random instance with exactly `t` intersections.
    pub fn random(n: usize, t: usize, promise: usize, seed: u64) -> Result<Self, GadgetError> {
        if t > n * n {
            return Err(GadgetError::Precondition(format!("t = {t} exceeds n^2 = {}", n * n)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hits: BTreeSet<usize> = rand::seq::index::sample(&mut rng, n * n, t).into_iter().collect();
        let mut x = vec![vec![false; n]; n];
        let mut y = vec![vec![false; n]; n];
        for c in 0..n * n {
            let (i, j) = (c / n, c % n);
            if hits.contains(&c) {
                x[i][j] = true;
                y[i][j] = true;
            } else {
                match rng.random_range(0..3) {
                    1 => x[i][j] = true,
                    2 => y[i][j] = true,
                    _ => {}
                }
            }
        }
        DisjointnessInstance::new(x, y, promise)
    }

    pub fn z(&self, i: usize, j: usize) -> bool {
        self.x[i][j] && self.y[i][j]
    }

    pub fn intersections(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.z(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_yes(&self) -> bool {
        !self.intersections().is_empty()
    }

    /// The two matrices as rows of `0`/`1` characters.
    pub fn to_bit_matrices(&self) -> (String, String) {
        let fmt = |a: &Vec<Vec<bool>>| {
            a.iter()
                .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>() + "\n")
                .collect::<String>()
        };
        (fmt(&self.x), fmt(&self.y))
    }

    pub fn from_bit_matrices(x: &str, y: &str, t: usize) -> Result<Self, GadgetError> {
        let parse = |s: &str| -> Result<Vec<Vec<bool>>, GadgetError> {
            s.lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| {
                    l.trim()
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            other => Err(GadgetError::Precondition(format!("bad bit {other:?}"))),
                        })
                        .collect()
                })
                .collect()
        };
        DisjointnessInstance::new(parse(x)?, parse(y)?, t)
    }
}

/// A generated graph with named vertex sets and, for CC gadgets, the edges
/// that depend on the instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GadgetGraph {
    #[serde(skip)]
    pub graph: Graph,
    pub roles: BTreeMap<String, Vec<usize>>,
    /// Realized `R1`-`R2` edges.
    pub crucial_edges: Vec<(usize, usize)>,
    /// Realized `R1'`-`R2'` edges paired with the crucial ones.
    pub twin_edges: Vec<(usize, usize)>,
}

impl GadgetGraph {
    pub fn role(&self, name: &str) -> &[usize] {
        self.roles.get(name).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Growable labeled adjacency lists.
#[derive(Default)]
struct Builder {
    adj: Vec<Vec<usize>>,
}

impl Builder {
    fn add(&mut self, k: usize) -> Vec<usize> {
        let s = self.adj.len();
        self.adj.resize(s + k, Vec::new());
        (s..s + k).collect()
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    fn complete(&mut self, a: &[usize], b: &[usize]) {
        for &u in a {
            for &v in b {
                self.edge(u, v);
            }
        }
    }

    /// Copies `g` in with its labels; returns the vertex offset.
    fn embed(&mut self, g: &Graph) -> usize {
        let off = self.adj.len();
        for v in 0..g.n() {
            self.adj.push(g.neighbors(v).iter().map(|&x| x + off).collect());
        }
        off
    }

    fn finish(self) -> Result<Graph, GraphError> {
        Graph::from_labeled_adjacency(self.adj)
    }
}

fn cyclic_parts(b: &mut Builder, sizes: &[usize]) -> Vec<Vec<usize>> {
    let parts: Vec<Vec<usize>> = sizes.iter().map(|&s| b.add(s)).collect();
    let k = parts.len();
    for i in 0..k {
        b.complete(&parts[i], &parts[(i + 1) % k]);
    }
    parts
}

fn roles_of(parts: &[Vec<usize>]) -> BTreeMap<String, Vec<usize>> {
    parts
        .iter()
        .enumerate()
        .map(|(i, p)| (format!("R{}", i + 1), p.clone()))
        .collect()
}

fn check_odd(k: usize) -> Result<(), GadgetError> {
    if k >= 3 && k % 2 == 1 {
        Ok(())
    } else {
        Err(GadgetError::Precondition(format!("cycle length {k} must be odd and >= 3")))
    }
}

/// Complete `k`-partite cycle blow-up with parts of `ceil(o_k^(1/k))`.
/// With `m` given, requires `o_k > sqrt(m/2)^(k-1)`.
pub fn cycle_gadget(k: usize, o_k: u64, m: Option<f64>) -> Result<GadgetGraph, GadgetError> {
    check_odd(k)?;
    if let Some(m) = m {
        if o_k as f64 <= sqrt_m(m).powi(k as i32 - 1) {
            return Err(GadgetError::Precondition(format!(
                "cycle gadget needs o_{k} > sqrt(m)^{}; use the few-cycles gadget",
                k - 1
            )));
        }
    }
    let s = ceil_root(o_k as f64, k).max(1);
    let mut b = Builder::default();
    let parts = cyclic_parts(&mut b, &vec![s; k]);
    Ok(GadgetGraph {
        graph: b.finish()?,
        roles: roles_of(&parts),
        crucial_edges: vec![],
        twin_edges: vec![],
    })
}

/// One singleton part plus `k - 1` parts of `ceil(o_k^(1/(k-1)))`. Every
/// `k`-cycle passes through the singleton. With `m` given, requires
/// `o_k <= sqrt(m/2)^(k-1)`.
pub fn few_cycles_gadget(k: usize, o_k: u64, m: Option<f64>) -> Result<GadgetGraph, GadgetError> {
    check_odd(k)?;
    if let Some(m) = m {
        if o_k as f64 > sqrt_m(m).powi(k as i32 - 1) {
            return Err(GadgetError::Precondition(format!(
                "few-cycles gadget needs o_{k} <= sqrt(m)^{}",
                k - 1
            )));
        }
    }
    let s = ceil_root(o_k as f64, k - 1).max(1);
    let mut sizes = vec![1];
    sizes.extend(std::iter::repeat_n(s, k - 1));
    let mut b = Builder::default();
    let parts = cyclic_parts(&mut b, &sizes);
    Ok(GadgetGraph {
        graph: b.finish()?,
        roles: roles_of(&parts),
        crucial_edges: vec![],
        twin_edges: vec![],
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum StarGadgetSpec {
    /// Centers with the given degrees; `r2` petals (default: one per edge).
    Multiset { degrees: Vec<usize>, r2: Option<usize> },
    /// `n` centers and `n` petals with degrees chosen greedily so that
    /// `sum C(d, p) = s_p`.
    Spread { n: usize, p: usize, s_p: u64 },
}

/// Greedy degrees `d <= cap` with `sum C(d, p) = s`, at most `slots` of
/// them. `None` if the greedy choice does not land exactly.
pub fn greedy_degrees(s: u64, p: usize, cap: usize, slots: usize) -> Option<Vec<usize>> {
    let mut rem = s as u128;
    let mut out = Vec::new();
    while rem > 0 {
        if out.len() == slots {
            return None;
        }
        let mut d = cap;
        while d >= p && binomial(d as u64, p as u64) > rem {
            d -= 1;
        }
        if d < p || d == 0 {
            return None;
        }
        rem -= binomial(d as u64, p as u64);
        out.push(d);
    }
    Some(out)
}

pub fn star_gadget(spec: &StarGadgetSpec) -> Result<GadgetGraph, GadgetError> {
    let (degrees, r2) = match spec {
        StarGadgetSpec::Multiset { degrees, r2 } => (degrees.clone(), r2.unwrap_or(degrees.iter().sum())),
        StarGadgetSpec::Spread { n, p, s_p } => {
            let mut d = greedy_degrees(*s_p, *p, *n, *n).ok_or_else(|| {
                GadgetError::Precondition(format!("s_{p} = {s_p} is not reachable with {n} centers of degree <= {n}"))
            })?;
            d.resize(*n, 0);
            (d, *n)
        }
    };
    if let Some(&a) = degrees.iter().find(|&&a| a > r2) {
        return Err(GadgetError::Precondition(format!("degree {a} exceeds {r2} petals")));
    }
    let mut b = Builder::default();
    let centers = b.add(degrees.len());
    let petals = b.add(r2);
    let mut cursor = 0;
    for (c, &a) in centers.iter().zip(&degrees) {
        for _ in 0..a {
            b.edge(*c, petals[cursor % r2.max(1)]);
            cursor += 1;
        }
    }
    let mut roles = BTreeMap::new();
    roles.insert("R1".to_string(), centers);
    roles.insert("R2".to_string(), petals);
    Ok(GadgetGraph {
        graph: b.finish()?,
        roles,
        crucial_edges: vec![],
        twin_edges: vec![],
    })
}

/// CC gadget for an odd cycle of length `k1`: parts `R1..Rk1, R1', R2'` of
/// size `side`, consecutive parts complete bipartite except `R1`-`R2`.
/// For every ordered `(i, j)`: if `z_ij` the edges `(r1_i, r2_j)` (crucial)
/// and `(r1'_j, r2'_i)` (twin), otherwise `(r1_i, r1'_j)` and
/// `(r2_j, r2'_i)`. Each occupies neighbor slot `((j - i) mod side) + 1` at
/// both endpoints, so degrees and labels of unaffected slots never depend
/// on `z`.
pub fn cc_gadget(k1: usize, side: usize, inst: &DisjointnessInstance) -> Result<GadgetGraph, GadgetError> {
    check_odd(k1)?;
    if inst.n != side || side == 0 {
        return Err(GadgetError::Precondition(format!(
            "instance size {} must equal side {side}",
            inst.n
        )));
    }
    let found = inst.intersections().len();
    if found != 0 && found != inst.t {
        return Err(GadgetError::Promise { found, t: inst.t });
    }
    let mut b = Builder::default();
    let parts: Vec<Vec<usize>> = (0..k1 + 2).map(|_| b.add(side)).collect();
    let (r1, r2, r1p, r2p) = (&parts[0], &parts[1], &parts[k1], &parts[k1 + 1]);
    for v in r1.iter().chain(r2).chain(r1p).chain(r2p) {
        b.adj[*v] = vec![usize::MAX; side];
    }
    let mut crucial = Vec::new();
    let mut twins = Vec::new();
    for i in 0..side {
        for j in 0..side {
            let slot = (j + side - i) % side;
            let pairs = if inst.z(i, j) {
                crucial.push((r1[i], r2[j]));
                twins.push((r1p[j], r2p[i]));
                [(r1[i], r2[j]), (r1p[j], r2p[i])]
            } else {
                [(r1[i], r1p[j]), (r2[j], r2p[i])]
            };
            for (u, v) in pairs {
                b.adj[u][slot] = v;
                b.adj[v][slot] = u;
            }
        }
    }
    for i in 1..k1 {
        let next = (i + 1) % k1;
        b.complete(&parts[i].clone(), &parts[next].clone());
    }
    let mut roles = roles_of(&parts[..k1]);
    roles.insert("R1'".to_string(), r1p.clone());
    roles.insert("R2'".to_string(), r2p.clone());
    Ok(GadgetGraph {
        graph: b.finish()?,
        roles,
        crucial_edges: crucial,
        twin_edges: twins,
    })
}

/// Target counts for a decomposition. `m` is oriented.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodCounts {
    pub n: f64,
    pub m: f64,
    pub counts: BTreeMap<Shape, f64>,
    pub h: f64,
}

impl GoodCounts {
    pub fn count(&self, s: Shape) -> f64 {
        self.counts.get(&s).copied().unwrap_or(0.0)
    }

    pub fn side(&self) -> usize {
        root_m(self.m)
    }

    fn as_counts(&self) -> Counts {
        Counts {
            n: self.n,
            m: self.m,
            shapes: self.counts.clone(),
            h: self.h,
        }
    }

    /// `prod(c_i) / h`.
    pub fn alpha(&self, d: &[Shape]) -> f64 {
        d.iter().map(|&s| self.count(s)).product::<f64>() / self.h
    }

    /// Index in `d` of the odd cycle with the largest cost.
    pub fn k1_index(&self, d: &[Shape]) -> Option<usize> {
        let prof = cost_profile(&self.as_counts(), d).ok()?;
        (0..d.len())
            .filter(|&i| d[i].is_cycle())
            .max_by(|&a, &b| prof.components[a].cost.total_cmp(&prof.components[b].cost).then(b.cmp(&a)))
    }

    /// `|T| = o_k1 / alpha`.
    pub fn t_set(&self, d: &[Shape]) -> f64 {
        match self.k1_index(d) {
            Some(i) => self.count(d[i]) / self.alpha(d),
            None => 0.0,
        }
    }

    /// `t = floor(|T| / side^(k1 - 2))`.
    pub fn t(&self, d: &[Shape]) -> u64 {
        let Some(i) = self.k1_index(d) else { return 0 };
        let k1 = d[i].vertex_count();
        (self.t_set(d) / (self.side() as f64).powi(k1 as i32 - 2) + 1e-9).floor() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintViolation {
    pub constraint: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodCountsReport {
    pub violations: Vec<ConstraintViolation>,
    pub not_checked: Vec<String>,
    /// Which branch of the fifth and sixth constraints held.
    pub branch_5: Option<String>,
    pub branch_6: Option<String>,
    /// Degree multiset found for branch 6b.
    pub multiset: Option<Vec<usize>>,
}

impl GoodCountsReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Bounded search for at most `slots` integers `a_i <= cap` with
/// `sum a_i <= budget` and `sum C(a_i, p) = s_p` for every `(p, s_p)`.
pub fn find_degree_multiset(
    targets: &[(usize, u64)],
    slots: usize,
    cap: usize,
    budget: u64,
    node_limit: u64,
) -> Option<Vec<usize>> {
    struct Search<'a> {
        targets: &'a [(usize, u64)],
        slots: usize,
        budget: u64,
        nodes: u64,
        limit: u64,
        chosen: Vec<usize>,
    }
    impl Search<'_> {
        fn go(&mut self, rem: &mut Vec<u128>, max_a: usize, spent: u64) -> bool {
            if rem.iter().all(|&r| r == 0) {
                return true;
            }
            self.nodes += 1;
            if self.nodes > self.limit || self.chosen.len() == self.slots {
                return false;
            }
            let left = (self.slots - self.chosen.len()) as u128;
            let min_p = self.targets.iter().map(|t| t.0).min().unwrap_or(1);
            let mut a = max_a.min((self.budget - spent) as usize);
            while a >= min_p.max(1) {
                let fits = self
                    .targets
                    .iter()
                    .zip(rem.iter())
                    .all(|(&(p, _), &r)| binomial(a as u64, p as u64) <= r);
                let reach = self
                    .targets
                    .iter()
                    .zip(rem.iter())
                    .all(|(&(p, _), &r)| binomial(a as u64, p as u64) * left >= r);
                if !reach {
                    return false;
                }
                if fits {
                    for (k, &(p, _)) in self.targets.iter().enumerate() {
                        rem[k] -= binomial(a as u64, p as u64);
                    }
                    self.chosen.push(a);
                    if self.go(rem, a, spent + a as u64) {
                        return true;
                    }
                    self.chosen.pop();
                    for (k, &(p, _)) in self.targets.iter().enumerate() {
                        rem[k] += binomial(a as u64, p as u64);
                    }
                }
                a -= 1;
            }
            false
        }
    }
    let mut s = Search {
        targets,
        slots,
        budget,
        nodes: 0,
        limit: node_limit,
        chosen: vec![],
    };
    let mut rem: Vec<u128> = targets.iter().map(|t| t.1 as u128).collect();
    s.go(&mut rem, cap, 0).then_some(s.chosen)
}

fn violation(c: &str, detail: String) -> ConstraintViolation {
    ConstraintViolation {
        constraint: c.to_string(),
        detail,
    }
}

/// Checks constraints 2 through 6 of good counts. Constraint 1
/// (realizability) is reported as not checked. The `omega` of constraint
/// 5a is read as a factor of `|H_D|`.
pub fn validate_good_counts(d: &[Shape], c: &GoodCounts) -> GoodCountsReport {
    let mut v = Vec::new();
    let rm = sqrt_m(c.m);
    let cycles: Vec<usize> = d.iter().filter(|s| s.is_cycle()).map(|s| s.vertex_count()).collect();
    let stars: Vec<usize> = d
        .iter()
        .filter_map(|s| match s {
            Shape::Star(p) => Some(*p),
            _ => None,
        })
        .collect();
    let o = |k: usize| c.count(Shape::Cycle(k));
    let s = |p: usize| c.count(Shape::Star(p));
    let few = |k: usize| o(k) <= rm.powi(k as i32 - 1);

    // 2
    let k1 = match cost_profile(&c.as_counts(), d) {
        Err(e) => {
            v.push(violation("2", e.to_string()));
            None
        }
        Ok(prof) => {
            let top = prof.max_cost;
            let cycle_top = (0..d.len()).any(|i| d[i].is_cycle() && prof.components[i].cost >= top * (1.0 - 1e-12));
            if !cycle_top {
                v.push(violation("2", format!("maximum cost {top:.3} comes from a star")));
            }
            c.k1_index(d).map(|i| d[i].vertex_count())
        }
    };
    // 3
    for &ki in &cycles {
        for &kj in cycles.iter().filter(|&&kj| kj > ki) {
            let ok = if few(ki) {
                o(kj).powf(1.0 / (kj - 1) as f64) >= o(ki).powf(1.0 / (ki - 1) as f64)
            } else {
                o(kj).powf(1.0 / kj as f64) >= o(ki).powf(1.0 / ki as f64)
            };
            if !ok {
                v.push(violation("3", format!("o_{kj} too small relative to o_{ki}")));
            }
        }
    }
    // 4
    for &p in &stars {
        if s(p) < rm.powi(p as i32 + 1) {
            v.push(violation("4", format!("s_{p} = {} < sqrt(m)^{}", s(p), p + 1)));
        }
    }
    // 5
    let hsize: usize = d.iter().map(|s| s.vertex_count()).sum();
    let k_star = cycles
        .iter()
        .copied()
        .max_by(|&a, &b| o(a).powf(1.0 / a as f64).total_cmp(&o(b).powf(1.0 / b as f64)));
    let five_a = k_star.is_some_and(|ks| {
        stars
            .iter()
            .any(|&p| s(p) >= hsize as f64 * c.m * o(ks).powf((p + 1) as f64 / ks as f64))
    });
    let five_b = k1.is_some_and(|k1| cycles.iter().filter(|&&k| k <= k1).all(|&k| few(k)));
    let branch_5 = if five_a {
        Some("5a".to_string())
    } else if five_b {
        Some("5b".to_string())
    } else {
        v.push(violation("5", "no star dominates the cycle gadgets and short cycles are not few".into()));
        None
    };
    // 6
    let mut multiset = None;
    let six_a = cycles.iter().any(|&k| few(k)) && stars.iter().all(|&p| s(p) >= c.n.powi(p as i32));
    let branch_6 = if stars.is_empty() || six_a {
        Some("6a".to_string())
    } else {
        let mut targets: Vec<(usize, u64)> = stars.iter().map(|&p| (p, s(p).round() as u64)).collect();
        targets.sort_unstable();
        targets.dedup();
        multiset = find_degree_multiset(&targets, c.side(), c.n as usize, (c.m / 2.0) as u64, 200_000);
        if multiset.is_some() {
            Some("6b".to_string())
        } else {
            v.push(violation("6", "no cycle is few with s_p >= n^p, and no degree multiset was found".into()));
            None
        }
    };
    GoodCountsReport {
        violations: v,
        not_checked: vec!["1".to_string()],
        branch_5,
        branch_6,
        multiset,
    }
}

/// `H_D` together with the vertices of each component and the component
/// pairs joined by an edge.
#[derive(Clone, Debug)]
pub struct HdLayout {
    pub motif: Motif,
    /// Component vertices in `d` order: cycle sequence, or center then petals.
    pub components: Vec<Vec<usize>>,
    pub attachments: Vec<(usize, usize)>,
    /// Index in `d` of the designated cycle `O_k1`.
    pub k1: usize,
}

/// Builds `H_D`: the designated cycle `O_k1` first, every other component
/// attached to it by one edge (stars by their center, the i-th attachment
/// at cycle vertex `i mod k1`). With counts, `O_k1` is the maximum-cost
/// cycle, and when some other cycle is few the stars attach to that cycle
/// instead, except one star with `s_p > |H| sqrt(m)^(p+1)`.
pub fn h_d_layout(d: &[Shape], counts: Option<&GoodCounts>) -> Result<HdLayout, GadgetError> {
    let k1 = match counts {
        Some(c) => c.k1_index(d),
        None => d.iter().position(Shape::is_cycle),
    }
    .ok_or(GadgetError::NoCycle)?;
    let mut order = vec![k1];
    order.extend((0..d.len()).filter(|&i| i != k1));
    let mut comps = vec![Vec::new(); d.len()];
    let mut next = 0;
    for &i in &order {
        comps[i] = (next..next + d[i].vertex_count()).collect();
        next += d[i].vertex_count();
    }
    let mut target = vec![k1; d.len()];
    if let Some(c) = counts {
        let rm = sqrt_m(c.m);
        let big = (0..d.len()).find(|&i| match d[i] {
            Shape::Star(p) => c.count(d[i]) > next as f64 * rm.powi(p as i32 + 1),
            _ => false,
        });
        let few = (0..d.len()).find(|&i| {
            i != k1 && matches!(d[i], Shape::Cycle(k) if c.count(d[i]) <= rm.powi(k as i32 - 1))
        });
        if let Some(f) = few {
            for i in 0..d.len() {
                if !d[i].is_cycle() && Some(i) != big {
                    target[i] = f;
                }
            }
        }
    }
    let mut edges = Vec::new();
    for (i, s) in d.iter().enumerate() {
        let v = &comps[i];
        match s {
            Shape::Cycle(k) => edges.extend((0..*k).map(|j| (v[j], v[(j + 1) % k]))),
            Shape::Star(_) => edges.extend(v[1..].iter().map(|&x| (v[0], x))),
        }
    }
    let mut used: BTreeMap<usize, usize> = BTreeMap::new();
    let mut attachments = Vec::new();
    for &i in &order[1..] {
        let t = target[i];
        let slot = used.entry(t).or_default();
        let anchor = comps[t][*slot % comps[t].len().min(d[t].vertex_count())];
        *slot += 1;
        edges.push((anchor, comps[i][0]));
        attachments.push((t, i));
    }
    let name = d.iter().map(Shape::to_string).collect::<Vec<_>>().join("-");
    let motif = Motif::from_edges(next, &edges, &name)?;
    let want: u32 = d.iter().map(Shape::weight_halves).sum();
    let got = decompose(&motif).map_err(|_| GadgetError::NotOptimal { got: 0, want })?.value_halves;
    if got != want {
        return Err(GadgetError::NotOptimal { got, want });
    }
    Ok(HdLayout {
        motif,
        components: comps,
        attachments,
        k1,
    })
}

pub fn build_h_d(d: &[Shape], counts: Option<&GoodCounts>) -> Result<Motif, GadgetError> {
    Ok(h_d_layout(d, counts)?.motif)
}

/// Exact counts of a graph for the shapes of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AchievedCounts {
    pub n: usize,
    pub m: usize,
    pub counts: BTreeMap<Shape, u64>,
    /// Copies of `H_D`; `None` when the graph is over the counting cap.
    pub h: Option<u64>,
}

pub fn achieved_counts(g: &Graph, d: &[Shape], h: Option<&Motif>) -> AchievedCounts {
    let counts = d
        .iter()
        .map(|&s| {
            let c = match s {
                Shape::Cycle(k) => count_odd_cycles(g, k).unwrap_or(0),
                Shape::Star(p) => count_stars(g, p),
            };
            (s, c)
        })
        .collect();
    AchievedCounts {
        n: g.n(),
        m: g.m(),
        counts,
        h: h.map(|h| count_motif(g, h)),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum Filler {
    #[default]
    None,
    /// Standalone gadgets covering counts below half their target.
    Auto,
    Graph(Graph),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GzConfig {
    pub filler: Filler,
    /// Largest vertex count `G_z` may have.
    pub max_vertices: usize,
    /// Largest oriented edge count for which `h` is counted exactly.
    pub count_edges_cap: usize,
}

impl Default for GzConfig {
    fn default() -> Self {
        GzConfig {
            filler: Filler::None,
            max_vertices: 50_000,
            count_edges_cap: 20_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GzReport {
    pub side: usize,
    pub t: u64,
    pub yes: bool,
    pub targets: GoodCounts,
    /// Counts of `G_z` without the filler.
    pub core: AchievedCounts,
    pub total: AchievedCounts,
    /// Gadget kind per component, in `d` order.
    pub gadgets: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Gz {
    pub gadget: GadgetGraph,
    pub h_d: Motif,
    /// Vertices `0..core_n` form `G_z` without the filler.
    pub core_n: usize,
    pub report: GzReport,
}

/// Assembles `G_z`: a CC gadget for `O_k1`, a few-cycles or cycle gadget
/// for every other cycle, a star gadget per star, complete bipartite
/// graphs between the `R1` sets of components adjacent in `H_D`, and a
/// disconnected filler.
pub fn build_gz(d: &[Shape], counts: &GoodCounts, inst: &DisjointnessInstance, cfg: &GzConfig) -> Result<Gz, GadgetError> {
    let report = validate_good_counts(d, counts);
    if !report.ok() {
        return Err(GadgetError::Constraints(report.violations));
    }
    let side = counts.side();
    if inst.n != side {
        return Err(GadgetError::Precondition(format!(
            "instance size {} must equal ceil(sqrt(m/2)) = {side}",
            inst.n
        )));
    }
    let t = counts.t(d);
    if t == 0 {
        return Err(GadgetError::Precondition("counts give t = 0".into()));
    }
    let found = inst.intersections().len();
    if found != 0 && found as u64 != t {
        return Err(GadgetError::Promise { found, t: t as usize });
    }
    let layout = h_d_layout(d, Some(counts))?;
    let rm = sqrt_m(counts.m);
    let n_target = counts.n as usize;
    let mut parts: Vec<(GadgetGraph, String)> = Vec::with_capacity(d.len());
    for (i, &s) in d.iter().enumerate() {
        let c = counts.count(s).round() as u64;
        parts.push(match s {
            _ if i == layout.k1 => (cc_gadget(s.vertex_count(), side, inst)?, "cc".into()),
            Shape::Cycle(k) if c as f64 <= rm.powi(k as i32 - 1) => (few_cycles_gadget(k, c, None)?, "few_cycles".into()),
            Shape::Cycle(k) => (cycle_gadget(k, c, None)?, "cycle".into()),
            Shape::Star(p) => {
                let spec = if report.branch_6.as_deref() == Some("6a") {
                    StarGadgetSpec::Spread { n: n_target, p, s_p: c }
                } else {
                    let a = find_degree_multiset(&[(p, c)], side, n_target, (counts.m / 2.0) as u64, 200_000)
                        .ok_or_else(|| GadgetError::Precondition(format!("no degree multiset for s_{p}")))?;
                    StarGadgetSpec::Multiset {
                        degrees: a,
                        r2: Some(n_target.max(1)),
                    }
                };
                (star_gadget(&spec)?, "star".into())
            }
        });
    }
    let planned: usize = parts.iter().map(|(g, _)| g.graph.n()).sum();
    if planned > cfg.max_vertices {
        return Err(GadgetError::ScaleCap(format!("{planned} vertices > {}", cfg.max_vertices)));
    }
    let mut b = Builder::default();
    let mut roles = BTreeMap::new();
    let mut r1 = Vec::new();
    let mut crucial = Vec::new();
    let mut twins = Vec::new();
    for (i, (g, _)) in parts.iter().enumerate() {
        let off = b.embed(&g.graph);
        for (name, vs) in &g.roles {
            roles.insert(format!("C{i}.{name}"), vs.iter().map(|v| v + off).collect::<Vec<_>>());
        }
        r1.push(g.role("R1").iter().map(|v| v + off).collect::<Vec<_>>());
        crucial.extend(g.crucial_edges.iter().map(|&(u, v)| (u + off, v + off)));
        twins.extend(g.twin_edges.iter().map(|&(u, v)| (u + off, v + off)));
    }
    for &(a, c) in &layout.attachments {
        let (x, y) = (&r1[a], &r1[c]);
        if (x.len() > side && y.len() > 1) || (y.len() > side && x.len() > 1) {
            return Err(GadgetError::Pairing(format!(
                "components {a} and {c} would join R1 sets of sizes {} and {}",
                x.len(),
                y.len()
            )));
        }
        b.complete(&x.clone(), &y.clone());
    }
    let core_graph = std::mem::take(&mut b).finish()?;
    let core_n = core_graph.n();
    let h_d = layout.motif.clone();
    let countable = |g: &Graph| (g.m() <= cfg.count_edges_cap).then_some(&h_d);
    let core = achieved_counts(&core_graph, d, countable(&core_graph));
    let filler = match &cfg.filler {
        Filler::None => None,
        Filler::Graph(g) => Some(g.clone()),
        Filler::Auto => {
            // Sized from counts that ignore the hidden cycles, so YES and
            // NO instances get the same filler.
            let mut hidden = crucial.clone();
            hidden.extend(&twins);
            let mut base = core.clone();
            let plain = achieved_counts(&core_graph.without_edges(&hidden), d, None);
            for s in d.iter().filter(|s| s.is_cycle()) {
                base.counts.insert(*s, plain.counts[s]);
            }
            Some(auto_filler(d, counts, &base)?)
        }
    };
    let mut b = Builder::default();
    b.embed(&core_graph);
    if let Some(f) = &filler {
        let off = b.embed(f);
        roles.insert("filler".into(), (off..off + f.n()).collect());
    }
    let graph = b.finish()?;
    let total = match &filler {
        None => core.clone(),
        Some(f) => {
            let fc = achieved_counts(f, d, countable(f));
            AchievedCounts {
                n: core.n + fc.n,
                m: core.m + fc.m,
                counts: core.counts.iter().map(|(s, c)| (*s, c + fc.counts[s])).collect(),
                h: core.h.zip(fc.h).map(|(a, b)| a + b),
            }
        }
    };
    Ok(Gz {
        gadget: GadgetGraph {
            graph,
            roles,
            crucial_edges: crucial,
            twin_edges: twins,
        },
        h_d,
        core_n,
        report: GzReport {
            side,
            t,
            yes: found > 0,
            targets: counts.clone(),
            core,
            total,
            gadgets: parts.into_iter().map(|(_, k)| k).collect(),
        },
    })
}

/// Disjoint gadgets supplying every count that the core leaves below half
/// its target, then isolated vertices and a matching for `n` and `m`.
fn auto_filler(d: &[Shape], counts: &GoodCounts, core: &AchievedCounts) -> Result<Graph, GadgetError> {
    let mut b = Builder::default();
    let mut shapes: Vec<Shape> = d.to_vec();
    shapes.sort_unstable();
    shapes.dedup();
    for s in shapes {
        let target = counts.count(s);
        let have = core.counts[&s] as f64;
        if have >= target / 2.0 {
            continue;
        }
        let need = (target - have).ceil() as u64;
        let g = match s {
            Shape::Cycle(k) => cycle_gadget(k, need, None)?.graph,
            Shape::Star(p) => {
                let a = greedy_degrees(need, p, usize::MAX, usize::MAX)
                    .ok_or_else(|| GadgetError::Precondition(format!("cannot fill s_{p}")))?;
                star_gadget(&StarGadgetSpec::Multiset { degrees: a, r2: None })?.graph
            }
        };
        b.embed(&g);
    }
    let n_now = core.n + b.adj.len();
    let m_now = core.m + b.adj.iter().map(Vec::len).sum::<usize>();
    if (m_now as f64) < counts.m / 2.0 {
        let pairs = ((counts.m / 2.0 - m_now as f64) / 2.0).ceil() as usize;
        for _ in 0..pairs {
            let v = b.add(2);
            b.edge(v[0], v[1]);
        }
    }
    let n_now = n_now.max(core.n + b.adj.len());
    if (n_now as f64) < counts.n / 2.0 {
        b.add((counts.n / 2.0).ceil() as usize - n_now);
    }
    Ok(b.finish()?)
}

/// Good counts for `D = {O3, S2}` at the given side: `m = 2 side^2`,
/// `o_3 = side^2 / 2`, `s_2 = 2 side^3`, `n = 4 side^1.5`, and
/// `h = t s_2 side` so that the counts give exactly `t`. Requires
/// `1 <= t <= side / 2`.
pub fn warm_up_counts(side: usize, t: u64) -> Result<GoodCounts, GadgetError> {
    if t == 0 || t as usize > side / 2 {
        return Err(GadgetError::Precondition(format!("t = {t} must lie in 1..={}", side / 2)));
    }
    let sf = side as f64;
    let s2 = 2.0 * sf.powi(3);
    Ok(GoodCounts {
        n: (4.0 * sf.powf(1.5)).ceil(),
        m: 2.0 * sf * sf,
        counts: BTreeMap::from([(Shape::Cycle(3), (sf * sf / 2.0).ceil()), (Shape::Star(2), s2)]),
        h: t as f64 * s2 * sf,
    })
}

/// Uniform-edge probing until an edge of `crucial` (either orientation)
/// shows up. Returns the number of queries, or `None` at the cap.
pub fn queries_to_crucial_edge(o: &mut Oracle, crucial: &[(usize, usize)], cap: u64) -> Result<Option<u64>, QueryError> {
    let set: BTreeSet<(usize, usize)> = crucial.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for q in 1..=cap {
        let (u, v) = o.uniform_edge()?;
        if set.contains(&(u.min(v), u.max(v))) {
            return Ok(Some(q));
        }
    }
    Ok(None)
}
