//! Approximate motif counts in both oracle modes next to the exact count.

use sublinear_motifs::exact::count_motif;
use sublinear_motifs::graph::{gen_er, motif_by_name};
use sublinear_motifs::motif_sampler::{estimate_motif_count, SampleHConfig};
use sublinear_motifs::oracle::{Mode, Oracle};

fn main() {
    let g = gen_er(40, 0.25, 7);
    let cfg = SampleHConfig::default().without_fallback();
    for name in ["triangle", "S2", "O3-S2"] {
        let h = motif_by_name(name).unwrap();
        let exact = count_motif(&g, &h);
        for mode in [Mode::Exact, Mode::Strict] {
            let mut o = Oracle::new(&g, 11).with_mode(mode);
            match estimate_motif_count(&mut o, &h, 0.2, &cfg) {
                Ok(e) => println!("{name:<8} {mode:?}: {:.1} (exact {exact}), {} queries", e.value, e.stats.total),
                Err(e) => println!("{name:<8} {mode:?}: failed: {e}"),
            }
        }
    }
}
