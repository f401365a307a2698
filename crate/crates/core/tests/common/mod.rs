//! Brute-force reference implementations used as test oracles. They share
//! nothing with the library beyond the `Graph` accessors.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use sublinear_motifs::graph::Graph;

fn adjacent(g: &Graph, u: usize, v: usize) -> bool {
    g.neighbors(u).contains(&v)
}

/// All set partitions of `0..n`, as block lists.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            go(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn has_spanning_cycle(g: &Graph, block: &[usize]) -> bool {
    let (first, rest) = block.split_first().expect("nonempty");
    permutations(rest).into_iter().any(|p| {
        let mut seq = vec![*first];
        seq.extend(p);
        (0..seq.len()).all(|i| adjacent(g, seq[i], seq[(i + 1) % seq.len()]))
    })
}

fn has_spanning_star(g: &Graph, block: &[usize]) -> bool {
    block
        .iter()
        .any(|&c| block.iter().all(|&v| v == c || adjacent(g, c, v)))
}

/// Cheapest cover of one block in half-units, if any.
fn block_halves(g: &Graph, block: &[usize]) -> Option<u32> {
    let k = block.len();
    if k < 2 {
        return None;
    }
    let mut best = None;
    if has_spanning_star(g, block) {
        best = Some(2 * (k as u32 - 1));
    }
    if k >= 3 && k % 2 == 1 && has_spanning_cycle(g, block) {
        best = Some(best.map_or(k as u32, |b: u32| b.min(k as u32)));
    }
    best
}

/// Minimum decomposition value in half-units over every partition of the
/// vertex set into odd cycles and stars.
pub fn brute_rho_halves(g: &Graph) -> Option<u32> {
    set_partitions(g.n())
        .into_iter()
        .filter_map(|parts| parts.iter().map(|b| block_halves(g, b)).sum::<Option<u32>>())
        .min()
}

/// Distinct image edge sets over all injective maps `V(h) -> V(g)`.
pub fn brute_copies(g: &Graph, h: &Graph) -> usize {
    let h_edges: Vec<(usize, usize)> = (0..h.n())
        .flat_map(|u| h.neighbors(u).iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
        .collect();
    let mut seen = BTreeSet::new();
    let mut map = vec![usize::MAX; h.n()];
    let mut used = vec![false; g.n()];
    fn go(
        i: usize,
        g: &Graph,
        h: &Graph,
        h_edges: &[(usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        seen: &mut BTreeSet<Vec<(usize, usize)>>,
    ) {
        if i == h.n() {
            if h_edges.iter().all(|&(a, b)| adjacent(g, map[a], map[b])) {
                let mut e: Vec<(usize, usize)> = h_edges
                    .iter()
                    .map(|&(a, b)| (map[a].min(map[b]), map[a].max(map[b])))
                    .collect();
                e.sort_unstable();
                seen.insert(e);
            }
            return;
        }
        for v in 0..g.n() {
            if !used[v] {
                used[v] = true;
                map[i] = v;
                go(i + 1, g, h, h_edges, map, used, seen);
                used[v] = false;
            }
        }
    }
    go(0, g, h, &h_edges, &mut map, &mut used, &mut seen);
    seen.len()
}

/// `p`-subsets of each neighborhood, counted by bitmask.
pub fn brute_stars(g: &Graph, p: usize) -> u64 {
    (0..g.n())
        .map(|v| {
            let d = g.degree(v);
            assert!(d < 25, "degree too large for bitmask enumeration");
            (0u32..1 << d).filter(|m| m.count_ones() as usize == p).count() as u64
        })
        .sum()
}

/// Cycles of length `k`: sequences starting at their minimum vertex with
/// `seq[1] < seq[k-1]`.
pub fn brute_cycles(g: &Graph, k: usize) -> u64 {
    fn go(g: &Graph, k: usize, seq: &mut Vec<usize>, count: &mut u64) {
        let last = *seq.last().unwrap();
        if seq.len() == k {
            if adjacent(g, last, seq[0]) && seq[1] < seq[k - 1] {
                *count += 1;
            }
            return;
        }
        for &v in g.neighbors(last) {
            if v > seq[0] && !seq.contains(&v) {
                seq.push(v);
                go(g, k, seq, count);
                seq.pop();
            }
        }
    }
    let mut count = 0;
    for s in 0..g.n() {
        go(g, k, &mut vec![s], &mut count);
    }
    count
}

pub fn bfs_two_colorable(g: &Graph) -> bool {
    let mut color = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &v in g.neighbors(u) {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    q.push_back(v);
                } else if color[v] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|v| g.degree(v)).collect()
}
