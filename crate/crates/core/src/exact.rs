//! Exhaustive ground truth: star counts, degree moments, odd cycles and
//! motif copies. Desk-scale only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CopyKey, CycleCopy, Graph, Motif, MotifCopy, StarCopy};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("cycle length {0} is not an odd integer >= 3")]
    NotOddLength(usize),
    #[error("star arity must be at least 1")]
    ZeroArity,
}

/// `C(d, p)` in 128-bit arithmetic.
pub fn binomial(d: u64, p: u64) -> u128 {
    if p > d {
        return 0;
    }
    let p = p.min(d - p);
    let mut acc: u128 = 1;
    for i in 0..p as u128 {
        acc = acc * (d as u128 - i) / (i + 1);
    }
    acc
}

pub fn count_stars(g: &Graph, p: usize) -> u64 {
    (0..g.n())
        .map(|v| binomial(g.degree(v) as u64, p as u64) as u64)
        .sum()
}

/// Every `p`-star once, ordered by sorted vertex list then center.
pub fn enumerate_stars(g: &Graph, p: usize) -> Vec<StarCopy> {
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    for c in 0..g.n() {
        let nb = g.sorted_neighbors(c);
        if nb.len() < p {
            continue;
        }
        let mut idx: Vec<usize> = (0..p).collect();
        loop {
            out.push(StarCopy {
                center: c,
                petals: idx.iter().map(|&i| nb[i]).collect(),
            });
            // Next p-combination of 0..nb.len().
            let mut i = p;
            while i > 0 && idx[i - 1] == nb.len() - p + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            idx[i - 1] += 1;
            for j in i..p {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out.sort_by_cached_key(|s| (s.sorted_vertices(), s.center));
    out
}

/// `sum_v d(v)^p`.
pub fn moment(g: &Graph, p: usize) -> u64 {
    (0..g.n()).map(|v| (g.degree(v) as u64).pow(p as u32)).sum()
}

fn check_odd(k: usize) -> Result<(), ExactError> {
    if k >= 3 && k % 2 == 1 {
        Ok(())
    } else {
        Err(ExactError::NotOddLength(k))
    }
}

/// Visits each `k`-cycle once as a path from its minimum vertex whose
/// second vertex is smaller than its last.
fn for_each_cycle(g: &Graph, k: usize, mut f: impl FnMut(&[usize])) {
    let n = g.n();
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(k);
    fn extend(
        g: &Graph,
        k: usize,
        root: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        f: &mut dyn FnMut(&[usize]),
    ) {
        let last = *path.last().unwrap();
        if path.len() == k {
            if path[1] < last && g.has_edge(last, root) {
                f(path);
            }
            return;
        }
        for &x in g.sorted_neighbors(last) {
            if x <= root || on_path[x] {
                continue;
            }
            // The closing vertex must exceed the second one.
            if path.len() == k - 1 && x < path[1] {
                continue;
            }
            on_path[x] = true;
            path.push(x);
            extend(g, k, root, path, on_path, f);
            path.pop();
            on_path[x] = false;
        }
    }
    for root in 0..n {
        path.clear();
        path.push(root);
        on_path[root] = true;
        extend(g, k, root, &mut path, &mut on_path, &mut f);
        on_path[root] = false;
    }
}

pub fn count_odd_cycles(g: &Graph, k: usize) -> Result<u64, ExactError> {
    check_odd(k)?;
    let mut c = 0u64;
    for_each_cycle(g, k, |_| c += 1);
    Ok(c)
}

/// Every `k`-cycle once in canonical traversal, ordered by sorted vertex
/// list then traversal.
pub fn enumerate_odd_cycles(g: &Graph, k: usize) -> Result<Vec<CycleCopy>, ExactError> {
    check_odd(k)?;
    let mut out = Vec::new();
    for_each_cycle(g, k, |p| out.push(CycleCopy::from_traversal(p)));
    out.sort_by_cached_key(|c| (c.sorted_vertices(), c.order.clone()));
    Ok(out)
}

/// Backtracking embedding search of a pattern into a host.
struct Matcher<'a> {
    host: &'a Graph,
    pat: &'a Graph,
    order: Vec<usize>,
    /// For each position, an earlier-placed pattern neighbor to expand from.
    anchor: Vec<Option<usize>>,
    /// For each position, earlier-placed pattern neighbors.
    back: Vec<Vec<usize>>,
}

impl<'a> Matcher<'a> {
    fn new(host: &'a Graph, pat: &'a Graph) -> Matcher<'a> {
        let k = pat.n();
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        // Greedy connected order: start at max degree, then the vertex with
        // the most placed neighbors.
        if k > 0 {
            let first = (0..k).max_by_key(|&v| (pat.degree(v), std::cmp::Reverse(v))).unwrap();
            order.push(first);
            placed[first] = true;
        }
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = pat.neighbors(v).iter().filter(|&&u| placed[u]).count();
                    (links, pat.degree(v), std::cmp::Reverse(v))
                })
                .unwrap();
            order.push(next);
            placed[next] = true;
        }
        let pos: Vec<usize> = {
            let mut p = vec![0; k];
            for (i, &v) in order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let back: Vec<Vec<usize>> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| pat.neighbors(v).iter().copied().filter(|&u| pos[u] < i).collect())
            .collect();
        let anchor = back.iter().map(|b| b.first().copied()).collect();
        Matcher {
            host,
            pat,
            order,
            anchor,
            back,
        }
    }

    fn run(&self, f: &mut dyn FnMut(&[usize])) {
        let k = self.pat.n();
        let mut map = vec![usize::MAX; k];
        let mut used = vec![false; self.host.n()];
        self.step(0, &mut map, &mut used, f);
    }

    fn step(&self, i: usize, map: &mut [usize], used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
        if i == self.order.len() {
            f(map);
            return;
        }
        let v = self.order[i];
        let need = self.pat.degree(v);
        let mut try_x = |x: usize, map: &mut [usize], used: &mut [bool]| {
            if used[x] || self.host.degree(x) < need {
                return;
            }
            if self.back[i].iter().all(|&u| self.host.has_edge(map[u], x)) {
                map[v] = x;
                used[x] = true;
                self.step(i + 1, map, used, f);
                used[x] = false;
                map[v] = usize::MAX;
            }
        };
        match self.anchor[i] {
            Some(a) => {
                let base = map[a];
                for &x in self.host.sorted_neighbors(base) {
                    try_x(x, map, used);
                }
            }
            None => {
                for x in 0..self.host.n() {
                    try_x(x, map, used);
                }
            }
        }
    }
}

/// All automorphisms of the motif as vertex maps.
pub fn automorphisms(h: &Motif) -> Vec<Vec<usize>> {
    let g = h.graph();
    let mut out = Vec::new();
    Matcher::new(g, g).run(&mut |m| out.push(m.to_vec()));
    out.sort();
    out
}

/// Number of injective edge-preserving maps `H -> G`.
pub fn count_embeddings(g: &Graph, h: &Motif) -> u64 {
    let mut c = 0u64;
    Matcher::new(g, h.graph()).run(&mut |_| c += 1);
    c
}

/// Calls `f` once per copy with the lexicographically smallest of its
/// `|Aut(H)|` embeddings.
fn for_each_copy(g: &Graph, h: &Motif, mut f: impl FnMut(&[usize])) {
    let auts = automorphisms(h);
    let mut scratch = vec![0usize; h.k()];
    Matcher::new(g, h.graph()).run(&mut |map| {
        let minimal = auts.iter().all(|sigma| {
            for (i, &s) in sigma.iter().enumerate() {
                scratch[i] = map[s];
            }
            scratch.as_slice() >= map
        });
        if minimal {
            f(map);
        }
    });
}

pub fn count_motif(g: &Graph, h: &Motif) -> u64 {
    let mut c = 0u64;
    for_each_copy(g, h, |_| c += 1);
    c
}

/// Every copy once, ordered by image key.
pub fn enumerate_motif(g: &Graph, h: &Motif) -> Vec<MotifCopy> {
    let mut out = Vec::new();
    for_each_copy(g, h, |m| out.push(MotifCopy::new(h, m.to_vec())));
    out.sort_by(|a, b| a.key.cmp(&b.key));
    out
}

/// Index from copy key to position in an enumeration, for binning.
pub fn copy_index(copies: &[MotifCopy]) -> BTreeMap<CopyKey, usize> {
    copies.iter().enumerate().map(|(i, c)| (c.key.clone(), i)).collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub n: usize,
    pub m: usize,
    pub stars: BTreeMap<usize, u64>,
    pub moments: BTreeMap<usize, u64>,
    pub cycles: BTreeMap<usize, u64>,
    pub motifs: BTreeMap<String, u64>,
}

pub fn count_report(
    g: &Graph,
    ps: &[usize],
    ks: &[usize],
    motifs: &[&Motif],
) -> Result<CountReport, ExactError> {
    let mut r = CountReport {
        n: g.n(),
        m: g.m(),
        ..Default::default()
    };
    for &p in ps {
        if p == 0 {
            return Err(ExactError::ZeroArity);
        }
        r.stars.insert(p, count_stars(g, p));
        r.moments.insert(p, moment(g, p));
    }
    for &k in ks {
        r.cycles.insert(k, count_odd_cycles(g, k)?);
    }
    for h in motifs {
        r.motifs.insert(h.name().to_owned(), count_motif(g, h));
    }
    Ok(r)
}
