//! Star and degree-moment samplers against their exact laws.

use std::collections::BTreeMap;

use sublinear_motifs::exact::{enumerate_stars, moment};
use sublinear_motifs::graph::gen_er;
use sublinear_motifs::oracle::Oracle;
use sublinear_motifs::samplers::{lp_sample, sample_star, LpSamplerConfig, StarSamplerConfig};
use sublinear_motifs::stats::{chi_square_uniform, tv_distance};

fn main() {
    let g = gen_er(30, 0.2, 1);
    for p in [2, 3] {
        let stars = enumerate_stars(&g, p);
        let cfg = StarSamplerConfig::new(p, g.n(), stars.len() as f64);
        let idx: BTreeMap<_, _> = stars.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let mut o = Oracle::new(&g, 1);
        let mut hist = vec![0u64; stars.len()];
        for _ in 0..20_000 {
            hist[idx[&sample_star(&mut o, &cfg, None).unwrap().value]] += 1;
        }
        println!("S{p}: {} stars, d_ub = {}, p = {:.4}", stars.len(), cfg.d_ub, chi_square_uniform(&hist).p_value);

        let mu = moment(&g, p) as f64;
        let lp = LpSamplerConfig::new(p, g.n(), mu);
        let mut hist = vec![0u64; g.n()];
        for _ in 0..20_000 {
            hist[lp_sample(&mut o, &lp, None).unwrap().value] += 1;
        }
        let probs: Vec<f64> = (0..g.n()).map(|v| (g.degree(v) as f64).powi(p as i32) / mu).collect();
        println!("l{p}: TV = {:.4}, {} queries so far", tv_distance(&hist, &probs), o.total());
    }
}
