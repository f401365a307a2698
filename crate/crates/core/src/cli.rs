//! The `motifs` command line: decompose, sample, estimate, count, gen,
//! bench and uniformity.
//!
//! Exit codes: 0 ok, 2 configuration error, 3 infeasible request,
//! 4 runtime failure. Errors are also written to stderr as one JSON record.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bench::{bench_planted_triangles, planted_triangles_graph};
use crate::decomposition::{decompose, Shape};
use crate::exact::{copy_index, count_motif, count_odd_cycles, count_stars, enumerate_motif};
use crate::graph::{gen_er, gen_random_bipartite, load_edge_list, motif_by_name, Graph, Motif, MotifCopy};
use crate::hard_instances::{
    build_gz, cc_gadget, cycle_gadget, few_cycles_gadget, star_gadget, warm_up_counts, DisjointnessInstance, GadgetGraph,
    GzConfig, StarGadgetSpec,
};
use crate::motif_sampler::{estimate_motif_count, sample_motif, Fallback, Outcome, SampleHConfig};
use crate::oracle::{Mode, Oracle, QueryStats};
use crate::stats::{chi_square_uniform, tv_distance};

#[derive(Parser, Debug)]
#[command(name = "motifs", version, about = "Sublinear motif sampling and counting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal odd-cycle/star decomposition of a motif.
    Decompose(DecomposeArgs),
    /// Uniform copies of a motif, one CSV row per repetition.
    Sample(RunArgs),
    /// Approximate motif counts, one CSV row per repetition.
    Estimate(RunArgs),
    /// Exact motif count.
    Count(CountArgs),
    /// Gadget or random graph generation.
    Gen(GenArgs),
    /// Query-cost sweep over a planted family.
    Bench(BenchArgs),
    /// Chi-square uniformity of Sample-H against exact enumeration.
    Uniformity(UniformityArgs),
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    pub motif: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Edge-list file or generator spec (`er:N:P:SEED`, `complete:N`,
    /// `cycle:N`, `bipartite:A:B:D:SEED`, `star:P`).
    #[arg(long)]
    pub graph: String,
    /// Library motif name or edge-list file.
    #[arg(long)]
    pub motif: String,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.2)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Oracle query budget per repetition.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Never fall back to reading the whole graph.
    #[arg(long)]
    pub no_fallback: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub motif: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Exact,
    Strict,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Strict => Mode::Strict,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    Cc,
    Gz,
    Cycle,
    FewCycles,
    Star,
    Er,
    Bipartite,
    PlantedTriangles,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Yes,
    No,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub gadget: GadgetKind,
    /// Cycle length.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub side: Option<usize>,
    /// Promised intersection size, or planted triangles.
    #[arg(long)]
    pub t: Option<u64>,
    #[arg(long, value_enum, default_value_t = InstanceKind::Yes)]
    pub instance: InstanceKind,
    /// Target cycle count for cycle gadgets.
    #[arg(long)]
    pub count: Option<u64>,
    /// Comma-separated center degrees for the star gadget.
    #[arg(long, value_delimiter = ',')]
    pub degrees: Vec<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability (`er`) or per-vertex degree (`bipartite`).
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Edge-list path; the sidecar goes next to it as `<out>.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, default_value = "planted-triangles")]
    pub family: String,
    #[arg(long, default_value_t = 3)]
    pub scales: usize,
    /// Samples per scale.
    #[arg(long, default_value_t = 40)]
    pub reps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct UniformityArgs {
    #[arg(long)]
    pub graph: String,
    #[arg(long)]
    pub motif: String,
    /// Number of samples.
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long)]
    pub no_fallback: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a randomized run was configured with; echoed in JSON outputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub graph: Option<String>,
    pub motif: Option<String>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub eps: Option<f64>,
    pub mode: Option<ModeArg>,
    pub budget: Option<u64>,
    pub fallback: Option<Fallback>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            graph: None,
            motif: None,
            seed: None,
            reps: None,
            eps: None,
            mode: None,
            budget: None,
            fallback: None,
            out: None,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Infeasible(String),
    Runtime(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }

    fn record(&self) -> serde_json::Value {
        let (kind, msg) = match self {
            CliError::Config(m) => ("config", m),
            CliError::Infeasible(m) => ("infeasible", m),
            CliError::Runtime(m) => ("runtime", m),
        };
        json!({ "error": kind, "code": self.code(), "message": msg })
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "{}", e.record());
            e.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Decompose(a) => cmd_decompose(&a, out),
        Command::Sample(a) => cmd_sample(&a, out),
        Command::Estimate(a) => cmd_estimate(&a, out),
        Command::Count(a) => cmd_count(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Bench(a) => cmd_bench(&a, out),
        Command::Uniformity(a) => cmd_uniformity(&a, out),
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

/// Seed used by randomized commands run without `--seed`.
pub const DEFAULT_SEED: u64 = 1;

fn require_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or(DEFAULT_SEED)
}

/// Seed of repetition `rep` derived from the run seed.
pub fn rep_seed(seed: u64, rep: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(rep as u64)
}

fn field<T: std::str::FromStr>(spec: &str, parts: &[&str], i: usize) -> Result<T> {
    parts
        .get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Config(format!("bad graph spec {spec:?}")))
}

/// Loads an edge-list file or builds a graph from a generator spec.
pub fn load_graph(spec: &str) -> Result<Graph> {
    let path = Path::new(spec);
    if path.exists() {
        let f = std::fs::File::open(path).map_err(|e| CliError::Config(format!("{spec}: {e}")))?;
        return load_edge_list(std::io::BufReader::new(f)).map_err(|e| CliError::Config(format!("{spec}: {e}")));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let g = match parts[0] {
        "er" if parts.len() == 4 => {
            let p: f64 = field(spec, &parts, 2)?;
            if !(0.0..=1.0).contains(&p) {
                return Err(CliError::Config(format!("edge probability {p} outside [0, 1]")));
            }
            gen_er(field(spec, &parts, 1)?, p, field(spec, &parts, 3)?)
        }
        "complete" if parts.len() == 2 => Graph::complete(field(spec, &parts, 1)?),
        "cycle" if parts.len() == 2 => Graph::cycle(field(spec, &parts, 1)?),
        "star" if parts.len() == 2 => Graph::star(field(spec, &parts, 1)?),
        "bipartite" if parts.len() == 5 => {
            let (a, b, d): (usize, usize, usize) = (field(spec, &parts, 1)?, field(spec, &parts, 2)?, field(spec, &parts, 3)?);
            if d > b {
                return Err(CliError::Config(format!("degree {d} exceeds right side {b}")));
            }
            gen_random_bipartite(a, b, d, field(spec, &parts, 4)?)
        }
        _ => return Err(CliError::Config(format!("{spec:?} is neither a file nor a graph spec"))),
    };
    Ok(g)
}

/// Resolves a library motif name or an edge-list file.
pub fn load_motif(spec: &str) -> Result<Motif> {
    if let Some(m) = motif_by_name(spec) {
        return Ok(m);
    }
    let path = Path::new(spec);
    if path.exists() {
        let g = load_graph(spec)?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
        return Motif::new(g, Some(name)).map_err(|e| CliError::Config(format!("{spec}: {e}")));
    }
    Err(CliError::Config(format!("unknown motif {spec:?}")))
}

fn cmd_decompose(a: &DecomposeArgs, out: &mut dyn Write) -> Result<()> {
    let h = load_motif(&a.motif)?;
    let d = decompose(&h).map_err(|e| CliError::Infeasible(e.to_string()))?;
    let body = json!({ "motif": h.name(), "decomposition": d.to_json() });
    emit(out, a.out.as_deref(), &to_json(&body))
}

fn fallback(no_fallback: bool) -> Fallback {
    if no_fallback {
        Fallback::Disabled
    } else {
        Fallback::Enabled
    }
}

fn sampler_config(no_fallback: bool) -> SampleHConfig {
    SampleHConfig {
        fallback: fallback(no_fallback),
        ..SampleHConfig::default()
    }
}

fn stats_cols(s: &QueryStats) -> String {
    format!("{},{},{},{},{}", s.degree, s.neighbor, s.pair, s.uniform_edge, s.total)
}

fn copy_cols(c: Option<&MotifCopy>) -> String {
    match c {
        None => ",".into(),
        Some(c) => {
            let v: Vec<String> = c.key.vertices.iter().map(usize::to_string).collect();
            let e: Vec<String> = c.key.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
            format!("{},{}", v.join(" "), e.join(" "))
        }
    }
}

fn outcome_name(o: &Outcome) -> &'static str {
    match o {
        Outcome::Copy { .. } => "copy",
        Outcome::FallbackCopy { .. } => "fallback_copy",
        Outcome::NoCopyExists => "no_copy",
        Outcome::Failed { .. } => "failed",
    }
}

fn cmd_sample(a: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let seed = require_seed(a.seed);
    let g = load_graph(&a.graph)?;
    let h = load_motif(&a.motif)?;
    let cfg = sampler_config(a.no_fallback);
    let runs: Vec<_> = (0..a.reps)
        .into_par_iter()
        .map(|rep| {
            let s = rep_seed(seed, rep);
            let mut o = Oracle::new(&g, s).with_mode(a.mode.into()).with_budget(a.budget);
            (s, sample_motif(&mut o, &h, &cfg))
        })
        .collect();
    let mut csv = String::from("rep,seed,outcome,iterations,fallback,degree,neighbor,pair,uniform_edge,total,vertices,copy\n");
    let mut failed = 0;
    for (rep, (s, r)) in runs.iter().enumerate() {
        failed += matches!(r.outcome, Outcome::Failed { .. }) as usize;
        csv += &format!(
            "{rep},{s},{},{},{},{},{}\n",
            outcome_name(&r.outcome),
            r.iterations,
            r.fallback_triggered,
            stats_cols(&r.stats),
            copy_cols(r.outcome.copy())
        );
    }
    emit(out, a.out.as_deref(), &csv)?;
    if failed > 0 {
        return Err(CliError::Runtime(format!("{failed} of {} repetitions failed", a.reps)));
    }
    Ok(())
}

fn cmd_estimate(a: &RunArgs, out: &mut dyn Write) -> Result<()> {
    let seed = require_seed(a.seed);
    if !(a.eps > 0.0 && a.eps < 1.0) {
        return Err(CliError::Config(format!("--eps {} must lie in (0, 1)", a.eps)));
    }
    let g = load_graph(&a.graph)?;
    let h = load_motif(&a.motif)?;
    let cfg = sampler_config(a.no_fallback);
    let runs: Vec<_> = (0..a.reps)
        .into_par_iter()
        .map(|rep| {
            let s = rep_seed(seed, rep);
            let mut o = Oracle::new(&g, s).with_mode(a.mode.into()).with_budget(a.budget);
            let r = estimate_motif_count(&mut o, &h, a.eps, &cfg);
            (s, r, o.stats())
        })
        .collect();
    let mut csv = String::from("rep,seed,status,estimate,successes,iterations,fallback,degree,neighbor,pair,uniform_edge,total\n");
    let mut failed = 0;
    for (rep, (s, r, stats)) in runs.iter().enumerate() {
        match r {
            Ok(e) => {
                csv += &format!(
                    "{rep},{s},ok,{},{},{},{},{}\n",
                    e.value,
                    e.successes,
                    e.iterations,
                    e.fallback_triggered,
                    stats_cols(&e.stats)
                )
            }
            Err(e) => {
                failed += 1;
                csv += &format!("{rep},{s},\"failed: {e}\",,,,,{}\n", stats_cols(stats));
            }
        }
    }
    emit(out, a.out.as_deref(), &csv)?;
    if failed > 0 {
        return Err(CliError::Runtime(format!("{failed} of {} repetitions failed", a.reps)));
    }
    Ok(())
}

fn cmd_count(a: &CountArgs, out: &mut dyn Write) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let h = load_motif(&a.motif)?;
    let body = json!({
        "graph": a.graph,
        "motif": h.name(),
        "n": g.n(),
        "m": g.m(),
        "count": count_motif(&g, &h),
    });
    emit(out, a.out.as_deref(), &to_json(&body))
}

fn need<T: Copy>(v: Option<T>, flag: &str, gadget: GadgetKind) -> Result<T> {
    v.ok_or_else(|| CliError::Config(format!("--{flag} is required for {gadget:?}")))
}

fn infeasible<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Infeasible(e.to_string())
}

fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> Result<()> {
    let mut sidecar = BTreeMap::<String, serde_json::Value>::new();
    sidecar.insert("gadget".into(), json!(a.gadget));
    let mut bits = None;
    let gadget: GadgetGraph = match a.gadget {
        GadgetKind::Cc | GadgetKind::Gz => {
            let seed = require_seed(a.seed);
            let side = need(a.side, "side", a.gadget)?;
            let t = need(a.t, "t", a.gadget)?;
            let hits = if a.instance == InstanceKind::Yes { t as usize } else { 0 };
            let inst = DisjointnessInstance::random(side, hits, t as usize, seed).map_err(infeasible)?;
            sidecar.insert("seed".into(), json!(seed));
            sidecar.insert("instance".into(), json!({ "n": side, "t": t, "yes": inst.is_yes() }));
            bits = Some(inst.to_bit_matrices());
            if a.gadget == GadgetKind::Cc {
                let g = cc_gadget(a.k, side, &inst).map_err(infeasible)?;
                let cycles = count_odd_cycles(&g.graph, a.k).map_err(infeasible)?;
                sidecar.insert("achieved".into(), json!({ format!("O{}", a.k): cycles }));
                g
            } else {
                let d = [Shape::Cycle(3), Shape::Star(2)];
                let counts = warm_up_counts(side, t).map_err(infeasible)?;
                let gz = build_gz(&d, &counts, &inst, &GzConfig::default()).map_err(infeasible)?;
                sidecar.insert("report".into(), json!(gz.report));
                gz.gadget
            }
        }
        GadgetKind::Cycle | GadgetKind::FewCycles => {
            let c = need(a.count, "count", a.gadget)?;
            let g = if a.gadget == GadgetKind::Cycle {
                cycle_gadget(a.k, c, None)
            } else {
                few_cycles_gadget(a.k, c, None)
            }
            .map_err(infeasible)?;
            let cycles = count_odd_cycles(&g.graph, a.k).map_err(infeasible)?;
            sidecar.insert("achieved".into(), json!({ format!("O{}", a.k): cycles }));
            g
        }
        GadgetKind::Star => {
            if a.degrees.is_empty() {
                return Err(CliError::Config("--degrees is required for Star".into()));
            }
            let g = star_gadget(&StarGadgetSpec::Multiset {
                degrees: a.degrees.clone(),
                r2: a.n,
            })
            .map_err(infeasible)?;
            let s: BTreeMap<String, u64> = (1..=3).map(|p| (format!("S{p}"), count_stars(&g.graph, p))).collect();
            sidecar.insert("achieved".into(), json!(s));
            g
        }
        GadgetKind::Er | GadgetKind::Bipartite | GadgetKind::PlantedTriangles => {
            let seed = require_seed(a.seed);
            sidecar.insert("seed".into(), json!(seed));
            let graph = match a.gadget {
                GadgetKind::Er => {
                    let p = need(a.p, "p", a.gadget)?;
                    if !(0.0..=1.0).contains(&p) {
                        return Err(CliError::Config(format!("--p {p} outside [0, 1]")));
                    }
                    gen_er(need(a.n, "n", a.gadget)?, p, seed)
                }
                GadgetKind::Bipartite => {
                    let n = need(a.n, "n", a.gadget)?;
                    let side = need(a.side, "side", a.gadget)?;
                    let d = need(a.p, "p", a.gadget)? as usize;
                    if d > side {
                        return Err(CliError::Infeasible(format!("degree {d} exceeds {side}")));
                    }
                    gen_random_bipartite(n, side, d, seed)
                }
                _ => {
                    let t = need(a.t, "t", a.gadget)? as usize;
                    if t > crate::bench::LEAVES / 2 {
                        return Err(CliError::Infeasible(format!("at most {} planted triangles", crate::bench::LEAVES / 2)));
                    }
                    planted_triangles_graph(t, seed)
                }
            };
            GadgetGraph {
                graph,
                roles: BTreeMap::new(),
                crucial_edges: vec![],
                twin_edges: vec![],
            }
        }
    };
    sidecar.insert("n".into(), json!(gadget.graph.n()));
    sidecar.insert("m".into(), json!(gadget.graph.m()));
    sidecar.insert("roles".into(), json!(gadget.roles));
    sidecar.insert("crucial_edges".into(), json!(gadget.crucial_edges));
    sidecar.insert("twin_edges".into(), json!(gadget.twin_edges));
    let edge_list = gadget.graph.to_edge_list();
    match &a.out {
        Some(p) => {
            emit(out, Some(p), &edge_list)?;
            if let Some((x, y)) = &bits {
                emit(out, Some(&with_suffix(p, ".x")), x)?;
                emit(out, Some(&with_suffix(p, ".y")), y)?;
            }
            let text = to_json(&sidecar);
            emit(out, Some(&with_suffix(p, ".json")), &text)?;
            emit(out, None, &text)
        }
        None => {
            sidecar.insert("edge_list".into(), json!(edge_list));
            emit(out, None, &to_json(&sidecar))
        }
    }
}

fn with_suffix(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_bench(a: &BenchArgs, out: &mut dyn Write) -> Result<()> {
    let seed = require_seed(a.seed);
    if a.family != "planted-triangles" {
        return Err(CliError::Config(format!("unknown family {:?}", a.family)));
    }
    if a.scales == 0 || a.reps == 0 {
        return Err(CliError::Config("--scales and --reps must be positive".into()));
    }
    if crate::bench::planted_triangles(a.scales - 1) > crate::bench::LEAVES / 2 {
        return Err(CliError::Infeasible(format!("{} scales exceed the family", a.scales)));
    }
    let r = bench_planted_triangles(a.scales, a.reps, seed);
    let mut csv = r.to_csv();
    csv += &format!("# slope={:.4} total_queries={} seed={}\n", r.slope, r.total_queries, seed);
    emit(out, a.out.as_deref(), &csv)
}

fn cmd_uniformity(a: &UniformityArgs, out: &mut dyn Write) -> Result<()> {
    let seed = require_seed(a.seed);
    let g = load_graph(&a.graph)?;
    let h = load_motif(&a.motif)?;
    let copies = enumerate_motif(&g, &h);
    if copies.is_empty() {
        return Err(CliError::Infeasible(format!("{} has no copy in the graph", h.name())));
    }
    let index = copy_index(&copies);
    let cfg = sampler_config(a.no_fallback);
    let runs: Vec<_> = (0..a.n)
        .into_par_iter()
        .map(|rep| {
            let mut o = Oracle::new(&g, rep_seed(seed, rep)).with_mode(a.mode.into());
            sample_motif(&mut o, &h, &cfg)
        })
        .collect();
    let mut hist = vec![0u64; copies.len()];
    let (mut failures, mut invalid, mut queries, mut fallbacks) = (0, 0, 0u64, 0);
    for r in &runs {
        queries += r.stats.total;
        fallbacks += r.fallback_triggered as usize;
        match r.outcome.copy() {
            Some(c) => match index.get(&c.key) {
                Some(&i) if c.is_valid_in(&h, &g) => hist[i] += 1,
                _ => invalid += 1,
            },
            None => failures += 1,
        }
    }
    let chi = chi_square_uniform(&hist);
    let uniform = vec![1.0 / copies.len() as f64; copies.len()];
    let config = RunConfig {
        graph: Some(a.graph.clone()),
        motif: Some(a.motif.clone()),
        seed: Some(seed),
        reps: Some(a.n),
        mode: Some(a.mode),
        fallback: Some(fallback(a.no_fallback)),
        out: a.out.clone(),
        ..RunConfig::new("uniformity")
    };
    let body = json!({
        "config": config,
        "motif": h.name(),
        "seed": seed,
        "samples": a.n,
        "copies": copies.len(),
        "failures": failures,
        "invalid": invalid,
        "fallbacks": fallbacks,
        "chi_square": chi,
        "p_value": chi.p_value,
        "tv_distance": tv_distance(&hist, &uniform),
        "total_queries": queries,
    });
    emit(out, a.out.as_deref(), &to_json(&body))?;
    if invalid > 0 {
        return Err(CliError::Runtime(format!("{invalid} samples were not copies of {}", h.name())));
    }
    Ok(())
}
