//! Simple undirected graphs in CSR form, small connected pattern motifs,
//! motif copies, edge-list ingestion and random graph generation.

use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on motif size; the decomposition DP is exponential in it.
pub const MOTIF_MAX_VERTICES: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {v} out of range for n = {n}")]
    OutOfRange { line: usize, v: usize, n: usize },
    #[error("adjacency is not symmetric: {u} lists {v} but not the reverse")]
    Asymmetric { u: usize, v: usize },
    #[error("invalid motif: {0}")]
    Motif(String),
}

/// Immutable simple undirected graph.
///
/// Neighbors are stored twice: once in labeled order (the order the
/// `i`-th neighbor query sees) and once sorted, for adjacency tests.
/// Graphs built from edge lists use ascending labeled order.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    nbrs: Vec<usize>,
    sorted: Vec<usize>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            offsets: vec![0; n + 1],
            nbrs: Vec::new(),
            sorted: Vec::new(),
        }
    }

    /// Builds a graph from undirected edges; adjacency is sorted ascending.
    /// Error line numbers refer to the 1-based position in `edges`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Self::from_numbered_edges(
            n,
            edges.iter().enumerate().map(|(i, &(u, v))| (i + 1, u, v)),
        )
    }

    fn from_numbered_edges(
        n: usize,
        edges: impl Iterator<Item = (usize, usize, usize)>,
    ) -> Result<Graph, GraphError> {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for (line, u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::OutOfRange { line, v: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self::from_lists_unchecked(adj))
    }

    /// Builds a graph whose `i`-th neighbor of `v` is `adj[v][i]`.
    /// Used by generators that impose an explicit neighbor labeling.
    pub fn from_labeled_adjacency(adj: Vec<Vec<usize>>) -> Result<Graph, GraphError> {
        let n = adj.len();
        for (u, list) in adj.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &v in list {
                if v >= n {
                    return Err(GraphError::OutOfRange { line: 0, v, n });
                }
                if v == u {
                    return Err(GraphError::SelfLoop { line: 0, v });
                }
                if !seen.insert(v) {
                    return Err(GraphError::DuplicateEdge { line: 0, u, v });
                }
            }
        }
        let g = Self::from_lists_unchecked(adj);
        for u in 0..n {
            for &v in g.neighbors(u) {
                if !g.has_edge(v, u) {
                    return Err(GraphError::Asymmetric { u, v });
                }
            }
        }
        Ok(g)
    }

    fn from_lists_unchecked(adj: Vec<Vec<usize>>) -> Graph {
        let mut offsets = Vec::with_capacity(adj.len() + 1);
        offsets.push(0);
        let mut nbrs = Vec::new();
        let mut sorted = Vec::new();
        for list in adj {
            let start = nbrs.len();
            nbrs.extend_from_slice(&list);
            sorted.extend_from_slice(&list);
            sorted[start..].sort_unstable();
            offsets.push(nbrs.len());
        }
        Graph {
            offsets,
            nbrs,
            sorted,
        }
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("valid complete graph")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    /// Path on `n` vertices `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    /// Star with center 0 and petals `1..=p`.
    pub fn star(p: usize) -> Graph {
        let edges: Vec<_> = (1..=p).map(|i| (0, i)).collect();
        Graph::from_edges(p + 1, &edges).expect("valid star")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("valid bipartite graph")
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Oriented edge count, `sum of degrees`.
    pub fn m(&self) -> usize {
        self.nbrs.len()
    }

    /// Undirected edge count.
    pub fn edge_count(&self) -> usize {
        self.nbrs.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Neighbors of `v` in labeled order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbors of `v` in ascending order.
    pub fn sorted_neighbors(&self, v: usize) -> &[usize] {
        &self.sorted[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.sorted_neighbors(u).binary_search(&v).is_ok()
    }

    /// The `e`-th oriented edge in CSR order, `0 <= e < m`.
    pub fn oriented_edge(&self, e: usize) -> (usize, usize) {
        let u = self.offsets.partition_point(|&o| o <= e) - 1;
        (u, self.nbrs[e])
    }

    /// Undirected edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for &v in self.sorted_neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Copy of the graph with the given undirected edges removed.
    /// Labeled order of the remaining neighbors is preserved.
    pub fn without_edges(&self, removed: &[(usize, usize)]) -> Graph {
        let gone: BTreeSet<(usize, usize)> = removed
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let adj = (0..self.n())
            .map(|u| {
                self.neighbors(u)
                    .iter()
                    .copied()
                    .filter(|&v| !gone.contains(&(u.min(v), u.max(v))))
                    .collect()
            })
            .collect();
        Graph::from_lists_unchecked(adj)
    }

    /// Subgraph induced on `0..k`, keeping labeled order.
    pub fn prefix(&self, k: usize) -> Graph {
        let adj = (0..k)
            .map(|u| self.neighbors(u).iter().copied().filter(|&v| v < k).collect())
            .collect();
        Graph::from_lists_unchecked(adj)
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n();
        let mut adj: Vec<Vec<usize>> = (0..self.n()).map(|u| self.neighbors(u).to_vec()).collect();
        for u in 0..other.n() {
            adj.push(other.neighbors(u).iter().map(|&v| v + shift).collect());
        }
        Graph::from_lists_unchecked(adj)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    /// BFS 2-coloring; `None` if an odd cycle exists.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_coloring().is_some()
    }

    /// Text edge list: header `n e`, then one `u v` line per edge (`u < v`).
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n(),
            edges: self.edges(),
        }
    }
}

/// JSON mirror of the edge-list format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph, GraphError> {
        Graph::from_edges(self.n, &self.edges)
    }
}

/// Parses the `n e` / `u v` edge-list format. Blank lines and lines
/// starting with `#` are skipped.
pub fn load_edge_list<R: BufRead>(source: R) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| GraphError::Parse {
            line: lineno,
            msg: e.to_string(),
        })?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let nums = parse_pair(t, lineno)?;
        match header {
            None => header = Some(nums),
            Some(_) => edges.push((lineno, nums.0, nums.1)),
        }
    }
    let (n, e) = header.ok_or(GraphError::Parse {
        line: 1,
        msg: "missing header line `n e`".into(),
    })?;
    if edges.len() != e {
        return Err(GraphError::Parse {
            line: edges.last().map(|x| x.0).unwrap_or(1),
            msg: format!("header declares {e} edges, found {}", edges.len()),
        });
    }
    Graph::from_numbered_edges(n, edges.into_iter())
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    load_edge_list(text.as_bytes())
}

fn parse_pair(t: &str, line: usize) -> Result<(usize, usize), GraphError> {
    let mut it = t.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or(GraphError::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| GraphError::Parse {
            line,
            msg: format!("not a nonnegative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(GraphError::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok((a, b))
}

/// Erdős–Rényi `G(n, p)`; identical seeds give identical graphs.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability must lie in [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("valid random graph")
}

/// Random bipartite graph between `0..a` and `a..a+b` where every left
/// vertex picks `d` distinct right neighbors.
pub fn gen_random_bipartite(a: usize, b: usize, d: usize, seed: u64) -> Graph {
    assert!(d <= b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..a {
        let picks = rand::seq::index::sample(&mut rng, b, d);
        let mut picks: Vec<usize> = picks.into_iter().collect();
        picks.sort_unstable();
        for v in picks {
            edges.push((u, a + v));
        }
    }
    Graph::from_edges(a + b, &edges).expect("valid bipartite graph")
}

/// A small connected pattern graph with a fixed vertex labeling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motif {
    graph: Graph,
    name: Option<String>,
}

impl Motif {
    pub fn new(graph: Graph, name: Option<&str>) -> Result<Motif, GraphError> {
        if graph.n() < 2 {
            return Err(GraphError::Motif("needs at least two vertices".into()));
        }
        if graph.n() > MOTIF_MAX_VERTICES {
            return Err(GraphError::Motif(format!(
                "{} vertices exceeds the cap of {MOTIF_MAX_VERTICES}",
                graph.n()
            )));
        }
        if !graph.is_connected() {
            return Err(GraphError::Motif("pattern graph is disconnected".into()));
        }
        Ok(Motif {
            graph,
            name: name.map(str::to_owned),
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)], name: &str) -> Result<Motif, GraphError> {
        Motif::new(Graph::from_edges(n, edges)?, Some(name))
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.graph.n()
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("unnamed")
    }
}

/// Identity of a copy: sorted image vertex set and sorted image edge set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CopyKey {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

/// A copy of `H` in `G`, given by an injective edge-preserving map.
/// Equality ignores the map and compares the image subgraph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MotifCopy {
    /// `map[i]` is the image of motif vertex `i`.
    pub map: Vec<usize>,
    pub key: CopyKey,
}

impl MotifCopy {
    pub fn new(h: &Motif, map: Vec<usize>) -> MotifCopy {
        let mut vertices = map.clone();
        vertices.sort_unstable();
        let mut edges: Vec<(usize, usize)> = h
            .graph()
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (map[a], map[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        MotifCopy {
            map,
            key: CopyKey { vertices, edges },
        }
    }

    /// Checks injectivity and edge preservation against `g`.
    pub fn is_valid_in(&self, h: &Motif, g: &Graph) -> bool {
        let distinct: BTreeSet<_> = self.map.iter().collect();
        distinct.len() == self.map.len()
            && self.map.iter().all(|&v| v < g.n())
            && h
                .graph()
                .edges()
                .iter()
                .all(|&(a, b)| g.has_edge(self.map[a], self.map[b]))
    }
}

impl PartialEq for MotifCopy {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for MotifCopy {}

/// A `p`-star copy: center plus ascending petals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StarCopy {
    pub center: usize,
    pub petals: Vec<usize>,
}

impl StarCopy {
    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut v = self.petals.clone();
        v.push(self.center);
        v.sort_unstable();
        v
    }
}

/// A cycle copy stored in canonical traversal: it starts at its smallest
/// vertex and continues toward the smaller of that vertex's two cycle
/// neighbors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CycleCopy {
    pub order: Vec<usize>,
}

impl CycleCopy {
    /// Canonicalizes any traversal of the cycle.
    pub fn from_traversal(seq: &[usize]) -> CycleCopy {
        let k = seq.len();
        let start = (0..k).min_by_key(|&i| seq[i]).expect("nonempty cycle");
        let next = seq[(start + 1) % k];
        let prev = seq[(start + k - 1) % k];
        let order = if next < prev {
            (0..k).map(|j| seq[(start + j) % k]).collect()
        } else {
            (0..k).map(|j| seq[(start + k - j) % k]).collect()
        };
        CycleCopy { order }
    }

    pub fn sorted_vertices(&self) -> Vec<usize> {
        let mut v = self.order.clone();
        v.sort_unstable();
        v
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let k = self.order.len();
        let mut e: Vec<_> = (0..k)
            .map(|i| {
                let (a, b) = (self.order[i], self.order[(i + 1) % k]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        e
    }
}

fn odd_cycle_with_pendant_star(cycle: usize, petals: usize) -> (usize, Vec<(usize, usize)>) {
    let mut edges: Vec<_> = (0..cycle).map(|i| (i, (i + 1) % cycle)).collect();
    let center = cycle;
    edges.push((0, center));
    for j in 0..petals {
        edges.push((center, center + 1 + j));
    }
    (cycle + 1 + petals, edges)
}

/// Named motifs used throughout tests and the CLI.
///
/// `O3-S2` and `O3-O5-S2` match the lower-bound motif built from the
/// corresponding decomposition shapes.
pub fn motif_library() -> Vec<Motif> {
    let mut out = Vec::new();
    let mut add = |name: &str, g: Graph| out.push(Motif::new(g, Some(name)).expect("library motif"));
    add("edge", Graph::path(2));
    add("P3", Graph::path(3));
    add("P4", Graph::path(4));
    add("P5", Graph::path(5));
    add("triangle", Graph::cycle(3));
    add("C4", Graph::cycle(4));
    add("C5", Graph::cycle(5));
    add("C7", Graph::cycle(7));
    add("K4", Graph::complete(4));
    add("K5", Graph::complete(5));
    add("K6", Graph::complete(6));
    for p in 1..=4 {
        add(&format!("S{p}"), Graph::star(p));
    }
    add(
        "paw",
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (0, 3)]).unwrap(),
    );
    add(
        "diamond",
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (1, 3), (2, 3)]).unwrap(),
    );
    add(
        "bowtie",
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap(),
    );
    add(
        "house",
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)]).unwrap(),
    );
    add("K2,3", Graph::complete_bipartite(2, 3));
    let (n, e) = odd_cycle_with_pendant_star(3, 2);
    add("O3-S2", Graph::from_edges(n, &e).unwrap());
    let (n, e) = odd_cycle_with_pendant_star(3, 3);
    add("O3-S3", Graph::from_edges(n, &e).unwrap());
    add("O3-O5-S2", o3_o5_s2());
    out
}

/// Triangle `0,1,2`; a 5-cycle `3..8` attached by edge `0-3`; a 2-star
/// with center `8` attached by edge `1-8` and petals `9, 10`.
fn o3_o5_s2() -> Graph {
    let mut e = vec![(0, 1), (1, 2), (2, 0)];
    e.extend((0..5).map(|i| (3 + i, 3 + (i + 1) % 5)));
    e.push((0, 3));
    e.extend([(1, 8), (8, 9), (8, 10)]);
    Graph::from_edges(11, &e).unwrap()
}

/// Looks up a library motif; `C3` is accepted for `triangle`.
pub fn motif_by_name(name: &str) -> Option<Motif> {
    let name = match name {
        "C3" | "K3" | "O3" => "triangle",
        "P2" => "edge",
        other => other,
    };
    motif_library().into_iter().find(|m| m.name() == name)
}
