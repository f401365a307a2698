//! Optimal decompositions of every library motif.

use sublinear_motifs::decomposition::decompose;
use sublinear_motifs::graph::motif_library;

fn main() {
    for h in motif_library() {
        let d = decompose(&h).expect("library motifs decompose");
        let shapes: Vec<String> = d.shapes().iter().map(|s| s.to_string()).collect();
        println!("{:<10} rho = {:<4} [{}]", h.name(), d.rho().to_string(), shapes.join(", "));
    }
}
