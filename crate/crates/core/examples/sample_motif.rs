//! Draws uniform triangles from a random graph and compares the empirical
//! frequencies with exact enumeration.

use sublinear_motifs::exact::{copy_index, enumerate_motif};
use sublinear_motifs::graph::{gen_er, motif_by_name};
use sublinear_motifs::motif_sampler::{sample_motif, SampleHConfig};
use sublinear_motifs::oracle::Oracle;
use sublinear_motifs::stats::chi_square_uniform;

fn main() {
    let g = gen_er(12, 0.45, 3);
    let h = motif_by_name("triangle").unwrap();
    let idx = copy_index(&enumerate_motif(&g, &h));
    let cfg = SampleHConfig::default().without_fallback();
    let mut hist = vec![0u64; idx.len()];
    let mut queries = 0;
    let runs = 5000;
    for seed in 0..runs {
        let run = sample_motif(&mut Oracle::new(&g, seed), &h, &cfg);
        queries += run.stats.total;
        hist[idx[&run.outcome.copy().expect("host has triangles").key]] += 1;
    }
    let chi = chi_square_uniform(&hist);
    println!("{} copies, {runs} samples, {:.1} queries/sample", idx.len(), queries as f64 / runs as f64);
    println!("chi-square {:.2} on {} df, p = {:.4}", chi.statistic, chi.df, chi.p_value);
}
