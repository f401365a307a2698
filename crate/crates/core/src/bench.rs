//! Query-cost sweeps of Sample-H over planted graph families.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{cost_profile, decompose, Counts, Shape};
use crate::exact::{count_motif, count_odd_cycles, count_stars};
use crate::graph::{gen_random_bipartite, motif_by_name, Graph, Motif};
use crate::motif_sampler::{sample_motif, SampleHConfig};
use crate::oracle::{Mode, Oracle};
use crate::stats::log_log_slope;

/// Hubs and leaves of the bipartite base: every hub picks `HUB_DEGREE`
/// leaves.
pub const HUBS: usize = 8;
pub const LEAVES: usize = 200;
pub const HUB_DEGREE: usize = 50;

/// Triangles planted at scale `i`.
pub fn planted_triangles(scale: usize) -> usize {
    2 << (2 * scale)
}

/// Hub-and-leaf bipartite base plus `t` triangles, each made of a fresh
/// edge joined to a distinct non-isolated leaf. Stars of the base sit on
/// the hubs, so the triangles' pendant stars carry a constant share of
/// all 2-stars.
pub fn planted_triangles_graph(t: usize, seed: u64) -> Graph {
    let base = gen_random_bipartite(HUBS, LEAVES, HUB_DEGREE, seed);
    let mut leaves: Vec<usize> = (HUBS..HUBS + LEAVES).filter(|&v| base.degree(v) > 0).collect();
    leaves.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
    assert!(t <= leaves.len(), "not enough leaves for {t} triangles");
    let mut edges = base.edges();
    let mut n = base.n();
    for &b in &leaves[..t] {
        edges.extend([(b, n), (b, n + 1), (n, n + 1)]);
        n += 2;
    }
    Graph::from_edges(n, &edges).expect("planted graph is simple")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub scale: usize,
    pub planted: usize,
    pub n: usize,
    pub m: usize,
    pub h: u64,
    pub predicted_cost: f64,
    /// `m^rho / h`.
    pub naive_cost: f64,
    pub samples: usize,
    pub queries: u64,
    pub failures: usize,
    pub mean_queries: f64,
    pub mean_iterations: f64,
    pub predicted_iterations: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub family: String,
    pub motif: String,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    /// Log-log slope of mean queries against predicted cost.
    pub slope: f64,
    pub total_queries: u64,
}

impl BenchReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "seed,scale,planted,n,m,h,predicted_cost,naive_cost,samples,queries,failures,mean_queries,mean_iterations,predicted_iterations\n",
        );
        for r in &self.rows {
            s += &format!(
                "{},{},{},{},{},{},{:.6e},{:.6e},{},{},{},{:.6e},{:.4},{:.4}\n",
                self.seed,
                r.scale,
                r.planted,
                r.n,
                r.m,
                r.h,
                r.predicted_cost,
                r.naive_cost,
                r.samples,
                r.queries,
                r.failures,
                r.mean_queries,
                r.mean_iterations,
                r.predicted_iterations
            );
        }
        s
    }
}

fn counts_for(g: &Graph, h: &Motif, shapes: &[Shape]) -> Counts {
    let mut c = Counts {
        n: g.n() as f64,
        m: g.m() as f64,
        shapes: BTreeMap::new(),
        h: count_motif(g, h) as f64,
    };
    for &s in shapes {
        let v = match s {
            Shape::Cycle(k) => count_odd_cycles(g, k).expect("odd cycle"),
            Shape::Star(p) => count_stars(g, p),
        };
        c.shapes.insert(s, v as f64);
    }
    c
}

/// Runs `samples` exact-mode Sample-H draws of `O3-S2` (no fallback) per
/// scale of the planted-triangles family.
pub fn bench_planted_triangles(scales: usize, samples: usize, seed: u64) -> BenchReport {
    let h = motif_by_name("O3-S2").expect("library motif");
    let d = decompose(&h).expect("decomposable");
    let shapes = d.shapes();
    let rho = d.rho_f64();
    let cfg = SampleHConfig::default().without_fallback();
    let mut rows = Vec::new();
    let mut total_queries = 0;
    for scale in 0..scales {
        let t = planted_triangles(scale);
        let g = planted_triangles_graph(t, seed);
        let counts = counts_for(&g, &h, &shapes);
        let prof = cost_profile(&counts, &shapes).expect("all counts positive");
        let runs: Vec<_> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut o = Oracle::new(&g, seed.wrapping_mul(1_000_003).wrapping_add((scale * samples + i) as u64))
                    .with_mode(Mode::Exact);
                sample_motif(&mut o, &h, &cfg)
            })
            .collect();
        let ok: Vec<_> = runs.iter().filter(|r| r.outcome.copy().is_some()).collect();
        let q: u64 = runs.iter().map(|r| r.stats.total).sum();
        total_queries += q;
        let a = crate::motif_sampler::representation_constant(&h, &d).to_f64();
        rows.push(BenchRow {
            scale,
            planted: t,
            n: g.n(),
            m: g.m(),
            h: counts.h as u64,
            predicted_cost: prof.decomp_cost,
            naive_cost: counts.m.powf(rho) / counts.h,
            samples,
            queries: q,
            failures: runs.len() - ok.len(),
            mean_queries: ok.iter().map(|r| r.stats.total as f64).sum::<f64>() / ok.len().max(1) as f64,
            mean_iterations: ok.iter().map(|r| r.iterations as f64).sum::<f64>() / ok.len().max(1) as f64,
            predicted_iterations: prof.count_product / (a * counts.h),
        });
    }
    let slope = if rows.len() >= 2 {
        log_log_slope(&rows.iter().map(|r| (r.predicted_cost, r.mean_queries)).collect::<Vec<_>>())
    } else {
        f64::NAN
    };
    BenchReport {
        family: "planted-triangles".into(),
        motif: h.name().to_string(),
        seed,
        rows,
        slope,
        total_queries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planted_graph_has_the_triangles() {
        for t in [2, 8] {
            let g = planted_triangles_graph(t, 1);
            assert_eq!(count_odd_cycles(&g, 3).unwrap(), t as u64);
            assert_eq!(g.n(), HUBS + LEAVES + 2 * t);
        }
    }

    #[test]
    fn small_sweep_runs() {
        let r = bench_planted_triangles(2, 4, 7);
        assert_eq!(r.rows.len(), 2);
        assert!(r.rows.iter().all(|row| row.failures == 0));
        assert!(r.to_csv().lines().count() == 3);
    }
}
