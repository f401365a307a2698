//! YES and NO lower-bound graphs for the triangle-plus-2-star motif.

use sublinear_motifs::decomposition::Shape;
use sublinear_motifs::hard_instances::{
    build_gz, queries_to_crucial_edge, warm_up_counts, DisjointnessInstance, Filler, GzConfig,
};
use sublinear_motifs::oracle::Oracle;

fn main() {
    let d = [Shape::Cycle(3), Shape::Star(2)];
    let (side, t) = (8, 2);
    let counts = warm_up_counts(side, t).unwrap();
    let cfg = GzConfig {
        filler: Filler::Auto,
        ..GzConfig::default()
    };
    for hits in [0, t as usize] {
        let inst = DisjointnessInstance::random(side, hits, t as usize, 5).unwrap();
        let gz = build_gz(&d, &counts, &inst, &cfg).unwrap();
        let r = &gz.report;
        // NO instances have no crucial edge to find.
        let probes: u64 = if gz.gadget.crucial_edges.is_empty() {
            0
        } else {
            (0..50)
                .map(|s| queries_to_crucial_edge(&mut Oracle::new(&gz.gadget.graph, s), &gz.gadget.crucial_edges, 1 << 24))
                .map(|q| q.unwrap().unwrap_or(0))
                .sum()
        };
        println!(
            "yes={} n={} m={} counts={:?} core h={:?} gadgets={:?} crucial={:?} mean probes={:.1}",
            r.yes,
            r.total.n,
            r.total.m,
            r.total.counts,
            r.core.h,
            r.gadgets,
            gz.gadget.crucial_edges,
            probes as f64 / 50.0
        );
    }
}
