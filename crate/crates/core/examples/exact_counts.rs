//! Exact star, cycle and motif counts on a small random graph.

use sublinear_motifs::exact::{count_motif, count_odd_cycles, count_stars, moment};
use sublinear_motifs::graph::{gen_er, motif_library};

fn main() {
    let g = gen_er(30, 0.2, 1);
    println!("n = {}, m = {} (oriented)", g.n(), g.m());
    for p in 1..=3 {
        println!("s_{p} = {}, mu_{p} = {}", count_stars(&g, p), moment(&g, p));
    }
    for k in [3, 5, 7] {
        println!("o_{k} = {}", count_odd_cycles(&g, k).unwrap());
    }
    for h in motif_library().iter().filter(|h| h.k() <= 6) {
        println!("{:<10} {}", h.name(), count_motif(&g, h));
    }
}
