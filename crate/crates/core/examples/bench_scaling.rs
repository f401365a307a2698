//! Mean Sample-H queries against the predicted decomposition cost on the
//! planted-triangles family.

use sublinear_motifs::bench::bench_planted_triangles;

fn main() {
    let scales = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let samples = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(40);
    let report = bench_planted_triangles(scales, samples, 1);
    print!("{}", report.to_csv());
    println!("slope {:.3}, total queries {}", report.slope, report.total_queries);
}
