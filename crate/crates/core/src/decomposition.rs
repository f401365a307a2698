//! Optimal decompositions of a motif into vertex-disjoint odd cycles and
//! stars, and the component and decomposition costs they induce.
//!
//! Values are kept in half-units: an odd cycle on `k` vertices weighs `k`
//! halves, a star with `p` petals weighs `2p` halves.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Motif;

/// Component shape: `O_k` or `S_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Shape {
    Cycle(usize),
    Star(usize),
}

impl Shape {
    pub fn vertex_count(&self) -> usize {
        match *self {
            Shape::Cycle(k) => k,
            Shape::Star(p) => p + 1,
        }
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self, Shape::Cycle(_))
    }

    pub fn weight_halves(&self) -> u32 {
        match *self {
            Shape::Cycle(k) => k as u32,
            Shape::Star(p) => 2 * p as u32,
        }
    }

    /// Order of the shape's symmetry group acting on its labeled vertices:
    /// `2k` for a cycle, `p!` for a star (the center is fixed).
    pub fn symmetries(&self) -> u64 {
        match *self {
            Shape::Cycle(k) => 2 * k as u64,
            Shape::Star(p) => (1..=p as u64).product(),
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Cycle(k) => write!(f, "O{k}"),
            Shape::Star(p) => write!(f, "S{p}"),
        }
    }
}

impl FromStr for Shape {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("bad shape {s:?}, expected O<k> or S<p>");
        let (head, num) = s.split_at(s.len().min(1));
        let v: usize = num.parse().map_err(|_| bad())?;
        match head {
            "O" | "C" if v >= 3 && v % 2 == 1 => Ok(Shape::Cycle(v)),
            "S" if v >= 1 => Ok(Shape::Star(v)),
            _ => Err(bad()),
        }
    }
}

impl From<Shape> for String {
    fn from(s: Shape) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for Shape {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// One component of a decomposition, in motif vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Component {
    /// Cyclic vertex sequence.
    Cycle { vertices: Vec<usize> },
    Star { center: usize, petals: Vec<usize> },
}

impl Component {
    pub fn shape(&self) -> Shape {
        match self {
            Component::Cycle { vertices } => Shape::Cycle(vertices.len()),
            Component::Star { petals, .. } => Shape::Star(petals.len()),
        }
    }

    /// Vertices in role order: the cycle sequence, or center then petals.
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Component::Cycle { vertices } => vertices.clone(),
            Component::Star { center, petals } => {
                let mut v = vec![*center];
                v.extend(petals);
                v
            }
        }
    }

    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut v = self.vertices();
        v.sort_unstable();
        v
    }

    /// Edges the component itself uses.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match self {
            Component::Cycle { vertices } => {
                let k = vertices.len();
                (0..k).map(|i| (vertices[i], vertices[(i + 1) % k])).collect()
            }
            Component::Star { center, petals } => petals.iter().map(|&p| (*center, p)).collect(),
        }
    }
}

/// Nonnegative rational, used to print `rho` without float drift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub numerator: u64,
    pub denominator: u64,
}

impl Rational {
    pub fn new(num: u64, den: u64) -> Rational {
        let g = gcd(num, den).max(1);
        Rational {
            numerator: num / g,
            denominator: den / g,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub components: Vec<Component>,
    /// Value in half-units.
    pub value_halves: u32,
}

impl Decomposition {
    pub fn rho(&self) -> Rational {
        Rational::new(self.value_halves as u64, 2)
    }

    pub fn rho_f64(&self) -> f64 {
        self.value_halves as f64 / 2.0
    }

    pub fn shapes(&self) -> Vec<Shape> {
        self.components.iter().map(Component::shape).collect()
    }

    pub fn to_json(&self) -> DecompositionJson {
        DecompositionJson {
            rho: self.rho(),
            shapes: self.shapes(),
            components: self.components.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub rho: Rational,
    pub shapes: Vec<Shape>,
    pub components: Vec<Component>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("motif has no valid decomposition")]
    Infeasible,
}

/// Per-vertex-set facts shared by the DP.
struct MaskTable {
    n: usize,
    adj: Vec<u32>,
    /// `reach[mask][e]`: a path from `min(mask)` through all of `mask` ends at `e`.
    reach: Vec<u32>,
}

impl MaskTable {
    fn new(h: &Motif) -> MaskTable {
        let g = h.graph();
        let n = g.n();
        let adj: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |a, &u| a | (1 << u)))
            .collect();
        let mut reach = vec![0u32; 1 << n];
        for mask in 1u32..(1 << n) {
            let s = mask.trailing_zeros() as usize;
            if mask == 1 << s {
                reach[mask as usize] = 1 << s;
                continue;
            }
            let mut ends = 0u32;
            let mut rest = mask & !(1 << s);
            while rest != 0 {
                let e = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let prev = mask & !(1 << e);
                if reach[prev as usize] & adj[e] != 0 {
                    ends |= 1 << e;
                }
            }
            reach[mask as usize] = ends;
        }
        MaskTable { n, adj, reach }
    }

    /// Lexicographically smallest Hamiltonian cycle of `mask` starting at
    /// its minimum vertex, if `mask` spans one.
    fn canonical_cycle(&self, mask: u32) -> Option<Vec<usize>> {
        if mask.count_ones() < 3 {
            return None;
        }
        let s = mask.trailing_zeros() as usize;
        let mut seq = vec![s];
        let mut cur = s;
        let mut rest = mask & !(1 << s);
        while rest != 0 {
            let base = rest | (1 << s);
            let cand = self.adj[cur] & rest & self.reach[base as usize];
            if cand == 0 {
                return None;
            }
            let x = cand.trailing_zeros() as usize;
            seq.push(x);
            rest &= !(1 << x);
            cur = x;
        }
        Some(seq)
    }

    /// Smallest vertex adjacent to every other vertex of `mask`.
    fn star_center(&self, mask: u32) -> Option<usize> {
        if mask.count_ones() < 2 {
            return None;
        }
        (0..self.n).find(|&c| mask & (1 << c) != 0 && (self.adj[c] | (1 << c)) & mask == mask)
    }

    /// The cheapest component spanning exactly `mask`.
    fn best_component(&self, mask: u32) -> Option<Component> {
        let size = mask.count_ones();
        if size >= 3 && size % 2 == 1 && self.reach[mask as usize] & self.adj[mask.trailing_zeros() as usize] != 0 {
            if let Some(vertices) = self.canonical_cycle(mask) {
                return Some(Component::Cycle { vertices });
            }
        }
        self.star_center(mask).map(|c| Component::Star {
            center: c,
            petals: bits(mask & !(1 << c)),
        })
    }
}

fn bits(mut mask: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Compares two vertex sets by their ascending vertex lists.
fn cmp_mask(a: u32, b: u32) -> Ordering {
    bits(a).cmp(&bits(b))
}

#[derive(Clone)]
struct Best {
    halves: u32,
    parts: Vec<u32>,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        (self.halves, self.parts.len())
            .cmp(&(other.halves, other.parts.len()))
            .then_with(|| {
                for (a, b) in self.parts.iter().zip(&other.parts) {
                    match cmp_mask(*a, *b) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            })
            == Ordering::Less
    }
}

/// Minimum-value decomposition by DP over uncovered vertex sets.
///
/// Ties go to fewer components, then to the lexicographically smallest
/// list of sorted component vertex lists. Among stars on the same vertex
/// set the smallest-id center wins.
pub fn decompose(h: &Motif) -> Result<Decomposition, DecompositionError> {
    let t = MaskTable::new(h);
    let n = t.n;
    let full = ((1u64 << n) - 1) as u32;
    let comp: Vec<Option<Component>> = (0..=full).map(|m| t.best_component(m)).collect();
    let mut best: Vec<Option<Best>> = vec![None; full as usize + 1];
    best[0] = Some(Best {
        halves: 0,
        parts: Vec::new(),
    });
    for s in 1..=full {
        let v = s.trailing_zeros();
        let others = s & !(1 << v);
        let mut winner: Option<Best> = None;
        // Submasks of `others`, each joined with `v`.
        let mut sub = others;
        loop {
            let c = sub | (1 << v);
            if let (Some(k), Some(rest)) = (&comp[c as usize], &best[(s & !c) as usize]) {
                let mut parts = Vec::with_capacity(rest.parts.len() + 1);
                parts.push(c);
                parts.extend_from_slice(&rest.parts);
                let cand = Best {
                    halves: rest.halves + k.shape().weight_halves(),
                    parts,
                };
                if winner.as_ref().is_none_or(|w| cand.better_than(w)) {
                    winner = Some(cand);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
        best[s as usize] = winner;
    }
    let b = best[full as usize].take().ok_or(DecompositionError::Infeasible)?;
    Ok(Decomposition {
        components: b
            .parts
            .iter()
            .map(|&m| comp[m as usize].clone().expect("component"))
            .collect(),
        value_halves: b.halves,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    Uncovered(usize),
    Overlap(usize),
    OutOfRange(usize),
    EvenCycle(usize),
    ShortCycle(usize),
    EmptyStar,
    NotAnEdge(usize, usize),
    ValueMismatch { claimed_halves: u32, actual_halves: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Uncovered(v) => write!(f, "vertex {v} uncovered"),
            Violation::Overlap(v) => write!(f, "vertex {v} in two components"),
            Violation::OutOfRange(v) => write!(f, "vertex {v} not in motif"),
            Violation::EvenCycle(k) => write!(f, "even cycle of length {k}"),
            Violation::ShortCycle(k) => write!(f, "cycle of length {k} is too short"),
            Violation::EmptyStar => write!(f, "star without petals"),
            Violation::NotAnEdge(u, v) => write!(f, "({u}, {v}) is not a motif edge"),
            Violation::ValueMismatch {
                claimed_halves,
                actual_halves,
            } => write!(
                f,
                "claimed value {}/2 but components sum to {}/2",
                claimed_halves, actual_halves
            ),
        }
    }
}

/// Checks that `d` is a valid decomposition of `h`; empty means ok.
pub fn validate(h: &Motif, d: &Decomposition) -> Vec<Violation> {
    let g = h.graph();
    let n = g.n();
    let mut out = Vec::new();
    let mut owner = vec![0usize; n];
    let mut halves = 0;
    for c in &d.components {
        match c {
            Component::Cycle { vertices } => {
                let k = vertices.len();
                if k < 3 {
                    out.push(Violation::ShortCycle(k));
                } else if k % 2 == 0 {
                    out.push(Violation::EvenCycle(k));
                }
            }
            Component::Star { petals, .. } => {
                if petals.is_empty() {
                    out.push(Violation::EmptyStar);
                }
            }
        }
        halves += c.shape().weight_halves();
        for v in c.vertices() {
            if v >= n {
                out.push(Violation::OutOfRange(v));
                continue;
            }
            owner[v] += 1;
            if owner[v] == 2 {
                out.push(Violation::Overlap(v));
            }
        }
        for (u, v) in c.edges() {
            if u < n && v < n && (u == v || !g.has_edge(u, v)) {
                out.push(Violation::NotAnEdge(u, v));
            }
        }
    }
    for (v, &k) in owner.iter().enumerate() {
        if k == 0 {
            out.push(Violation::Uncovered(v));
        }
    }
    if halves != d.value_halves {
        out.push(Violation::ValueMismatch {
            claimed_halves: d.value_halves,
            actual_halves: halves,
        });
    }
    out
}

/// Graph-scale counts feeding the cost formulas. Counts may be estimates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Counts {
    pub n: f64,
    pub m: f64,
    pub shapes: BTreeMap<Shape, f64>,
    pub h: f64,
}

impl Counts {
    pub fn count(&self, s: Shape) -> Option<f64> {
        self.shapes.get(&s).copied()
    }
}

pub fn cycle_cost(m: f64, k: usize, o_k: f64) -> f64 {
    m.powf(k as f64 / 2.0) / o_k
}

/// `min{ m n^(p-1) / s_p, m / s_p^(1/p) }`.
pub fn star_cost(m: f64, n: f64, p: usize, s_p: f64) -> f64 {
    let p_f = p as f64;
    (m * n.powf(p_f - 1.0) / s_p).min(m / s_p.powf(1.0 / p_f))
}

/// The chain `m min{n^(p-1), s^((p-1)/p)} <= m s^((p-1)/p) < m mu^((p-1)/p) <= m^p`.
pub fn star_chain_holds(m: f64, n: f64, p: usize, s_p: f64, mu_p: f64) -> bool {
    let e = (p as f64 - 1.0) / p as f64;
    let slack = 1.0 + 1e-9;
    let a = m * n.powf(p as f64 - 1.0).min(s_p.powf(e));
    let b = m * s_p.powf(e);
    let c = m * mu_p.powf(e);
    let d = m.powi(p as i32);
    a <= b * slack && (b < c || (p == 1 && b <= c * slack)) && c <= d * slack
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentCost {
    pub shape: Shape,
    pub count: f64,
    pub cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostProfile {
    pub m: f64,
    pub n: f64,
    pub h: f64,
    pub components: Vec<ComponentCost>,
    pub max_cost: f64,
    pub argmax: usize,
    pub max_is_cycle: bool,
    pub count_product: f64,
    pub decomp_cost: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CostError {
    #[error("count for {0} is missing or zero")]
    ZeroCount(Shape),
    #[error("decomposition has no components")]
    Empty,
}

/// Component costs and `max cost * prod(c_i) / h` for the shapes of `d`.
pub fn cost_profile(counts: &Counts, shapes: &[Shape]) -> Result<CostProfile, CostError> {
    if shapes.is_empty() {
        return Err(CostError::Empty);
    }
    let mut comps = Vec::new();
    let mut product = 1.0;
    for &s in shapes {
        let c = counts.count(s).filter(|&c| c > 0.0).ok_or(CostError::ZeroCount(s))?;
        let cost = match s {
            Shape::Cycle(k) => cycle_cost(counts.m, k, c),
            Shape::Star(p) => star_cost(counts.m, counts.n, p, c),
        };
        product *= c;
        comps.push(ComponentCost {
            shape: s,
            count: c,
            cost,
        });
    }
    let mut argmax = 0;
    for (i, c) in comps.iter().enumerate() {
        if c.cost > comps[argmax].cost {
            argmax = i;
        }
    }
    let max_cost = comps[argmax].cost;
    Ok(CostProfile {
        m: counts.m,
        n: counts.n,
        h: counts.h,
        max_is_cycle: comps[argmax].shape.is_cycle(),
        components: comps,
        max_cost,
        argmax,
        count_product: product,
        decomp_cost: max_cost * product / counts.h,
    })
}
