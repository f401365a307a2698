//! Uniform sampling and approximate counting of small motifs in the
//! augmented graph query model (degree, neighbor, pair and uniform-edge
//! queries), together with the exact counters, statistics and lower-bound
//! instance generators used to check them.

pub mod bench;
pub mod cli;
pub mod decomposition;
pub mod estimators;
pub mod exact;
pub mod graph;
pub mod hard_instances;
pub mod motif_sampler;
pub mod oracle;
pub mod samplers;
pub mod stats;
