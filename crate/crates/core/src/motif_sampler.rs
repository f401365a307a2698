//! Uniform motif sampling (Sample-H) and the sampling-to-estimation
//! reduction.
//!
//! One loop iteration draws a uniform copy of every component of an optimal
//! decomposition, maps the motif onto them through a uniformly random
//! symmetry of each component, and pair-queries the motif edges that join
//! components. A copy of `H` is produced by exactly `|Aut(H)|` of these
//! configurations, so each copy is returned with probability
//! `a / prod(c_i)` per iteration, where `a = |Aut(H)| / prod |Sym(C_i)|`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{decompose, Component, Decomposition, DecompositionJson, Rational, Shape};
use crate::estimators::{
    estimate_cycle_count_with, estimate_edge_count, estimate_star_count_with, log_repetitions, EstimateConfig,
    EstimateError,
};
use crate::exact::{automorphisms, count_odd_cycles, count_stars, enumerate_motif};
use crate::graph::{Graph, Motif, MotifCopy};
use crate::oracle::{LimitKind, Mode, Oracle, QueryError, QueryStats};
use crate::samplers::{sample_odd_cycle, sample_star, CycleSamplerConfig, SamplerError, StarSamplerConfig};

/// Whether a run may fall back to reading the whole graph once it has
/// spent `n + m_hat` queries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fallback {
    Enabled,
    Disabled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleHConfig {
    pub fallback: Fallback,
    pub estimate: EstimateConfig,
    /// Attempt cap for each component sampling loop.
    pub attempt_cap: Option<u64>,
    pub iteration_cap: Option<u64>,
    /// Draw components cheapest-first and stop an iteration at the first
    /// collision or missing joining edge. Same output law and iteration
    /// count; fewer queries.
    pub early_reject: bool,
}

impl Default for SampleHConfig {
    fn default() -> Self {
        SampleHConfig {
            fallback: Fallback::Enabled,
            estimate: EstimateConfig::default(),
            attempt_cap: None,
            iteration_cap: None,
            early_reject: true,
        }
    }
}

impl SampleHConfig {
    pub fn without_fallback(mut self) -> Self {
        self.fallback = Fallback::Disabled;
        self
    }

    /// Draws every component in every iteration.
    pub fn without_early_reject(mut self) -> Self {
        self.early_reject = false;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Copy { copy: MotifCopy },
    FallbackCopy { copy: MotifCopy },
    NoCopyExists,
    Failed { reason: String },
}

impl Outcome {
    pub fn copy(&self) -> Option<&MotifCopy> {
        match self {
            Outcome::Copy { copy } | Outcome::FallbackCopy { copy } => Some(copy),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleHRun {
    pub motif: String,
    pub decomposition: DecompositionJson,
    pub m_hat: Option<f64>,
    /// Star-count estimate per star arity in the decomposition.
    pub star_estimates: BTreeMap<usize, f64>,
    pub iterations: u64,
    pub fallback_triggered: bool,
    pub stats: QueryStats,
    pub outcome: Outcome,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RunError {
    #[error("motif cannot be decomposed")]
    Decomposition,
    #[error(transparent)]
    Estimate(#[from] EstimateError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("component sampler gave up after {0} attempts")]
    Timeout(u64),
    #[error("iteration cap {0} reached")]
    IterationCap(u64),
}

impl From<SamplerError> for RunError {
    fn from(e: SamplerError) -> Self {
        match e {
            SamplerError::Query(q) => RunError::Query(q),
            SamplerError::Timeout { attempts } => RunError::Timeout(attempts),
        }
    }
}

impl RunError {
    fn is_scoped_limit(&self) -> bool {
        matches!(
            self,
            RunError::Query(QueryError::LimitReached { kind: LimitKind::Scoped, .. })
                | RunError::Estimate(EstimateError::Query(QueryError::LimitReached { kind: LimitKind::Scoped, .. }))
        )
    }
}

/// `|Aut(H)| / prod |Sym(C_i)|`: the number of accepting loop
/// configurations per copy of `H`, divided by the symmetry draws.
pub fn representation_constant(h: &Motif, d: &Decomposition) -> Rational {
    let aut = automorphisms(h).len() as u64;
    let sym: u64 = d.components.iter().map(|c| c.shape().symmetries()).product();
    Rational::new(aut, sym)
}

/// Exact component counts `o_k` or `s_p` (with `s_1 = m`) in `g`.
pub fn component_counts(g: &Graph, d: &Decomposition) -> Vec<u64> {
    d.components
        .iter()
        .map(|c| match c {
            Component::Cycle { vertices } => count_odd_cycles(g, vertices.len()).unwrap_or(0),
            Component::Star { petals, .. } => count_stars(g, petals.len()),
        })
        .collect()
}

/// Expected number of loop iterations per returned copy:
/// `prod(c_i) / (a h)`.
pub fn predicted_iterations(counts: &[u64], a: Rational, h: u64) -> f64 {
    let prod: f64 = counts.iter().map(|&c| c as f64).product();
    prod * a.denominator as f64 / (a.numerator as f64 * h as f64)
}

/// One component copy together with the symmetry used to map onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pick {
    /// Image of the motif cycle sequence is `order` rotated by `shift`,
    /// read backwards if `reflect`.
    Cycle { order: Vec<usize>, shift: usize, reflect: bool },
    /// Image of the motif petals, in motif petal order.
    Star { center: usize, petals: Vec<usize> },
}

/// Motif-to-host vertex map for a tuple of component picks, or `None`
/// when it is not injective. Joining edges are not checked.
pub fn assemble(d: &Decomposition, k: usize, picks: &[Pick]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; k];
    for (comp, pick) in d.components.iter().zip(picks) {
        match (comp, pick) {
            (Component::Cycle { vertices }, Pick::Cycle { order, shift, reflect }) => {
                let len = vertices.len();
                for (j, &u) in vertices.iter().enumerate() {
                    let pos = if *reflect { (shift + len - j) % len } else { (shift + j) % len };
                    map[u] = order[pos];
                }
            }
            (Component::Star { center, petals }, Pick::Star { center: c, petals: ps }) => {
                map[*center] = *c;
                for (&u, &x) in petals.iter().zip(ps) {
                    map[u] = x;
                }
            }
            _ => panic!("pick does not match component shape"),
        }
    }
    let mut seen = map.clone();
    seen.sort_unstable();
    if seen.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(map)
}

/// Motif edges that are not used by any component.
pub fn joining_edges(h: &Motif, d: &Decomposition) -> Vec<(usize, usize)> {
    let mut inside: Vec<(usize, usize)> = d
        .components
        .iter()
        .flat_map(Component::edges)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    inside.sort_unstable();
    h.graph()
        .edges()
        .into_iter()
        .filter(|e| inside.binary_search(e).is_err())
        .collect()
}

enum Sampler {
    Cycle(CycleSamplerConfig),
    Star(StarSamplerConfig),
}

/// Everything one loop iteration needs.
struct Plan<'h> {
    h: &'h Motif,
    d: Decomposition,
    samplers: Vec<Sampler>,
    joining: Vec<(usize, usize)>,
    /// Component draw order: stars by arity, then cycles by length.
    order: Vec<usize>,
    star_estimates: BTreeMap<usize, f64>,
}

fn prepare<'h>(
    o: &mut Oracle,
    h: &'h Motif,
    d: Decomposition,
    m_hat: f64,
    cfg: &SampleHConfig,
) -> Result<Plan<'h>, RunError> {
    let n = o.n();
    let est = cfg
        .estimate
        .clone()
        .with_repetitions(log_repetitions(n * d.components.len()));
    let mut star_estimates = BTreeMap::new();
    let mut samplers = Vec::new();
    for c in &d.components {
        samplers.push(match c {
            Component::Cycle { vertices } => Sampler::Cycle(CycleSamplerConfig::new(vertices.len(), m_hat)),
            Component::Star { petals, .. } => {
                let p = petals.len();
                let s_hat = match star_estimates.get(&p) {
                    Some(&s) => s,
                    None => {
                        let s = estimate_star_count_with(o, p, m_hat, &est)?.value;
                        star_estimates.insert(p, s);
                        s
                    }
                };
                Sampler::Star(StarSamplerConfig::new(p, n, s_hat))
            }
        });
    }
    let mut order: Vec<usize> = (0..d.components.len()).collect();
    order.sort_by_key(|&i| match d.components[i].shape() {
        Shape::Star(p) => (0, p),
        Shape::Cycle(k) => (1, k),
    });
    Ok(Plan {
        h,
        order,
        joining: joining_edges(h, &d),
        d,
        samplers,
        star_estimates,
    })
}

fn draw(o: &mut Oracle, s: &Sampler, cap: Option<u64>) -> Result<Pick, RunError> {
    Ok(match s {
        Sampler::Cycle(cfg) => {
            let order = sample_odd_cycle(o, cfg, cap)?.value.order;
            let shift = o.rng().random_range(0..order.len());
            let reflect = o.rng().random_bool(0.5);
            Pick::Cycle { order, shift, reflect }
        }
        Sampler::Star(cfg) => {
            let star = sample_star(o, cfg, cap)?.value;
            let mut petals = star.petals;
            petals.shuffle(o.rng());
            Pick::Star {
                center: star.center,
                petals,
            }
        }
    })
}

fn iteration(o: &mut Oracle, plan: &Plan, cfg: &SampleHConfig) -> Result<Option<MotifCopy>, RunError> {
    if !cfg.early_reject {
        let mut picks = Vec::with_capacity(plan.samplers.len());
        for s in &plan.samplers {
            picks.push(draw(o, s, cfg.attempt_cap)?);
        }
        let Some(map) = assemble(&plan.d, plan.h.k(), &picks) else {
            return Ok(None);
        };
        for &(a, b) in &plan.joining {
            if !o.pair(map[a], map[b])? {
                return Ok(None);
            }
        }
        return Ok(Some(MotifCopy::new(plan.h, map)));
    }
    let k = plan.h.k();
    let mut map = vec![usize::MAX; k];
    let mut used = std::collections::BTreeSet::new();
    let mut checked = vec![false; plan.joining.len()];
    for &i in &plan.order {
        let pick = draw(o, &plan.samplers[i], cfg.attempt_cap)?;
        let comp = &plan.d.components[i];
        let motif_vertices = comp.vertices();
        let images: Vec<usize> = match (&pick, comp) {
            (Pick::Cycle { order, shift, reflect }, Component::Cycle { vertices }) => {
                let len = vertices.len();
                (0..len)
                    .map(|j| if *reflect { order[(shift + len - j) % len] } else { order[(shift + j) % len] })
                    .collect()
            }
            (Pick::Star { center, petals }, Component::Star { .. }) => {
                std::iter::once(*center).chain(petals.iter().copied()).collect()
            }
            _ => unreachable!("pick matches component shape"),
        };
        for (&u, &x) in motif_vertices.iter().zip(&images) {
            if !used.insert(x) {
                return Ok(None);
            }
            map[u] = x;
        }
        for (j, &(a, b)) in plan.joining.iter().enumerate() {
            if !checked[j] && map[a] != usize::MAX && map[b] != usize::MAX {
                checked[j] = true;
                if !o.pair(map[a], map[b])? {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(MotifCopy::new(plan.h, map)))
}

fn edge_estimate(o: &mut Oracle, cfg: &SampleHConfig) -> Result<f64, RunError> {
    let est = cfg.estimate.clone().with_repetitions(log_repetitions(o.n()));
    Ok(estimate_edge_count(o, &est)?.value)
}

/// Reads every adjacency list: `n` degree and `sum d(v)` neighbor queries.
pub fn read_graph(o: &mut Oracle) -> Result<Graph, QueryError> {
    let n = o.n();
    let mut adj = Vec::with_capacity(n);
    for v in 0..n {
        let d = o.degree(v)?;
        let mut list = Vec::with_capacity(d);
        for i in 1..=d {
            list.push(o.neighbor(v, i)?.expect("index within degree"));
        }
        adj.push(list);
    }
    Ok(Graph::from_labeled_adjacency(adj).expect("oracle answers form a simple graph"))
}

fn fallback_sample(o: &mut Oracle, h: &Motif) -> Outcome {
    o.set_scoped_limit(None);
    match read_graph(o) {
        Ok(g) => {
            let copies = enumerate_motif(&g, h);
            if copies.is_empty() {
                Outcome::NoCopyExists
            } else {
                let i = o.rng().random_range(0..copies.len());
                Outcome::FallbackCopy {
                    copy: copies[i].clone(),
                }
            }
        }
        Err(e) => Outcome::Failed { reason: e.to_string() },
    }
}

/// Samples one copy of `h`. Never panics on budget or estimator failures;
/// they are reported in the run record.
pub fn sample_motif(o: &mut Oracle, h: &Motif, cfg: &SampleHConfig) -> SampleHRun {
    let start = o.stats();
    let mut run = SampleHRun {
        motif: h.name().to_string(),
        decomposition: DecompositionJson {
            rho: Rational::new(0, 1),
            shapes: vec![],
            components: vec![],
        },
        m_hat: None,
        star_estimates: BTreeMap::new(),
        iterations: 0,
        fallback_triggered: false,
        stats: QueryStats::default(),
        outcome: Outcome::NoCopyExists,
    };
    let result = sample_inner(o, h, cfg, start.total, &mut run);
    o.set_scoped_limit(None);
    run.outcome = match result {
        Ok(copy) => Outcome::Copy { copy },
        Err(e) if cfg.fallback == Fallback::Enabled && e.is_scoped_limit() => {
            run.fallback_triggered = true;
            fallback_sample(o, h)
        }
        Err(e) => Outcome::Failed { reason: e.to_string() },
    };
    run.stats = o.stats().since(&start);
    run
}

fn sample_inner(
    o: &mut Oracle,
    h: &Motif,
    cfg: &SampleHConfig,
    start_total: u64,
    run: &mut SampleHRun,
) -> Result<MotifCopy, RunError> {
    let d = decompose(h).map_err(|_| RunError::Decomposition)?;
    run.decomposition = d.to_json();
    let m_hat = edge_estimate(o, cfg)?;
    run.m_hat = Some(m_hat);
    if cfg.fallback == Fallback::Enabled {
        o.set_scoped_limit(Some(start_total + o.n() as u64 + m_hat.ceil() as u64));
    }
    let plan = prepare(o, h, d, m_hat, cfg)?;
    run.star_estimates = plan.star_estimates.clone();
    loop {
        if let Some(c) = cfg.iteration_cap {
            if run.iterations >= c {
                return Err(RunError::IterationCap(c));
            }
        }
        run.iterations += 1;
        if let Some(copy) = iteration(o, &plan, cfg)? {
            return Ok(copy);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotifEstimate {
    pub value: f64,
    pub mode: Mode,
    pub m_hat: f64,
    pub component_estimates: Vec<f64>,
    pub a: Rational,
    pub successes: u64,
    pub iterations: u64,
    pub p_hat: f64,
    pub fallback_triggered: bool,
    pub stats: QueryStats,
}

/// Estimates `h` by running loop iterations until `ceil(4 / eps^2)`
/// successes and returning `p_hat * prod(c_hat_i) / a`. With the fallback
/// enabled the run reads the whole graph and returns the exact count once
/// it has spent `(n + m_hat)` queries per targeted success.
pub fn estimate_motif_count(o: &mut Oracle, h: &Motif, eps: f64, cfg: &SampleHConfig) -> Result<MotifEstimate, RunError> {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    let start = o.stats();
    let d = decompose(h).map_err(|_| RunError::Decomposition)?;
    let a = representation_constant(h, &d);
    let target = (4.0 / (eps * eps)).ceil() as u64;
    let mut out = MotifEstimate {
        value: 0.0,
        mode: o.mode(),
        m_hat: 0.0,
        component_estimates: vec![],
        a,
        successes: 0,
        iterations: 0,
        p_hat: 0.0,
        fallback_triggered: false,
        stats: QueryStats::default(),
    };
    let res = estimate_inner(o, h, d, cfg, target, start.total, &mut out);
    o.set_scoped_limit(None);
    match res {
        Ok(()) => {}
        Err(e) if cfg.fallback == Fallback::Enabled && e.is_scoped_limit() => {
            out.fallback_triggered = true;
            let g = read_graph(o)?;
            out.value = crate::exact::count_motif(&g, h) as f64;
        }
        Err(e) => return Err(e),
    }
    out.stats = o.stats().since(&start);
    Ok(out)
}

fn estimate_inner(
    o: &mut Oracle,
    h: &Motif,
    d: Decomposition,
    cfg: &SampleHConfig,
    target: u64,
    start_total: u64,
    out: &mut MotifEstimate,
) -> Result<(), RunError> {
    let m_hat = edge_estimate(o, cfg)?;
    out.m_hat = m_hat;
    if cfg.fallback == Fallback::Enabled {
        let per = o.n() as u64 + m_hat.ceil() as u64;
        o.set_scoped_limit(Some(start_total + per * target));
    }
    let counts: Vec<f64> = match o.ground_truth() {
        Some(g) => component_counts(g, &d).into_iter().map(|c| c as f64).collect(),
        None => {
            let est = cfg.estimate.clone();
            let mut v = Vec::new();
            for c in &d.components {
                v.push(match c {
                    Component::Cycle { vertices } => estimate_cycle_count_with(o, vertices.len(), m_hat, &est)?.value,
                    Component::Star { petals, .. } => {
                        estimate_star_count_with(o, petals.len(), m_hat, &est)?.value
                    }
                });
            }
            v
        }
    };
    out.component_estimates = counts.clone();
    if counts.contains(&0.0) {
        out.value = 0.0;
        return Ok(());
    }
    let plan = prepare(o, h, d, m_hat, cfg)?;
    while out.successes < target {
        if let Some(c) = cfg.iteration_cap {
            if out.iterations >= c {
                return Err(RunError::IterationCap(c));
            }
        }
        out.iterations += 1;
        out.successes += iteration(o, &plan, cfg)?.is_some() as u64;
    }
    out.p_hat = out.successes as f64 / out.iterations as f64;
    let prod: f64 = counts.iter().product();
    out.value = out.p_hat * prod * out.a.denominator as f64 / out.a.numerator as f64;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{count_motif, copy_index};
    use crate::graph::{motif_by_name, motif_library};

    fn all_perms(v: &[usize]) -> Vec<Vec<usize>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let x = rest.remove(i);
            for mut p in all_perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }

    /// Counts accepting configurations on the motif itself by brute force.
    fn accepting_configurations(h: &Motif, d: &Decomposition) -> u64 {
        let g = h.graph();
        let mut per_comp: Vec<Vec<Pick>> = Vec::new();
        for c in &d.components {
            let mut v = Vec::new();
            match c {
                Component::Cycle { vertices } => {
                    for cyc in crate::exact::enumerate_odd_cycles(g, vertices.len()).unwrap() {
                        for shift in 0..vertices.len() {
                            for reflect in [false, true] {
                                v.push(Pick::Cycle { order: cyc.order.clone(), shift, reflect });
                            }
                        }
                    }
                }
                Component::Star { petals, .. } => {
                    for s in crate::exact::enumerate_stars(g, petals.len()) {
                        for p in all_perms(&s.petals) {
                            v.push(Pick::Star { center: s.center, petals: p });
                        }
                    }
                }
            }
            per_comp.push(v);
        }
        let joining = joining_edges(h, d);
        let mut idx = vec![0usize; per_comp.len()];
        let mut hits = 0;
        'outer: loop {
            let picks: Vec<Pick> = idx.iter().zip(&per_comp).map(|(&i, v)| v[i].clone()).collect();
            if let Some(map) = assemble(d, h.k(), &picks) {
                if joining.iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                    hits += 1;
                }
            }
            for j in 0..idx.len() {
                idx[j] += 1;
                if idx[j] < per_comp[j].len() {
                    continue 'outer;
                }
                idx[j] = 0;
            }
            break;
        }
        hits
    }

    #[test]
    fn representation_constant_matches_brute_force() {
        for h in motif_library() {
            if h.k() > 7 {
                continue;
            }
            let d = decompose(&h).unwrap();
            let a = representation_constant(&h, &d);
            let sym: u64 = d.components.iter().map(|c| c.shape().symmetries()).product();
            // The motif contains itself exactly once.
            assert_eq!(count_motif(h.graph(), &h), 1);
            let acc = accepting_configurations(&h, &d);
            assert_eq!(Rational::new(acc, sym), a, "{}", h.name());
        }
    }

    #[test]
    fn known_constants() {
        let a = |name: &str| {
            let h = motif_by_name(name).unwrap();
            representation_constant(&h, &decompose(&h).unwrap())
        };
        assert_eq!(a("triangle"), Rational::new(1, 1));
        assert_eq!(a("O3-S2"), Rational::new(1, 3));
        assert_eq!(a("K4"), Rational::new(24, 1));
    }

    #[test]
    fn triangle_in_k4_is_uniform() {
        let g = Graph::complete(4);
        let h = motif_by_name("triangle").unwrap();
        let idx = copy_index(&enumerate_motif(&g, &h));
        let cfg = SampleHConfig::default().without_fallback();
        let mut freq = [0u32; 4];
        for seed in 0..4000 {
            let run = sample_motif(&mut Oracle::new(&g, seed), &h, &cfg);
            let c = run.outcome.copy().expect("copy");
            assert!(c.is_valid_in(&h, &g));
            freq[idx[&c.key]] += 1;
        }
        for f in freq {
            assert!((f as f64 / 4000.0 - 0.25).abs() < 0.03, "{freq:?}");
        }
    }

    #[test]
    fn early_reject_keeps_law_and_iterations() {
        // Triangle with two pendant 2-star centers; 4 copies of O3-S2.
        let g = Graph::from_edges(10, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (3, 5), (3, 6), (1, 7), (7, 8), (7, 9)])
            .unwrap();
        let h = motif_by_name("O3-S2").unwrap();
        let copies = enumerate_motif(&g, &h);
        let idx = copy_index(&copies);
        let d = decompose(&h).unwrap();
        let want = predicted_iterations(&component_counts(&g, &d), representation_constant(&h, &d), copies.len() as u64);
        for cfg in [
            SampleHConfig::default().without_fallback(),
            SampleHConfig::default().without_fallback().without_early_reject(),
        ] {
            let mut freq = vec![0u32; copies.len()];
            let (mut iters, mut queries) = (0, 0);
            let runs = 3000;
            for seed in 0..runs {
                let run = sample_motif(&mut Oracle::new(&g, seed), &h, &cfg);
                freq[idx[&run.outcome.copy().expect("copy").key]] += 1;
                iters += run.iterations;
                queries += run.stats.total;
            }
            let mean = iters as f64 / runs as f64;
            assert!((mean / want - 1.0).abs() < 0.1, "{mean} vs {want}");
            for f in &freq {
                assert!((*f as f64 / runs as f64 - 0.25).abs() < 0.04, "{freq:?}");
            }
            assert!(queries > 0);
        }
    }

    #[test]
    fn bipartite_host_falls_back_to_no_copy() {
        let g = Graph::complete_bipartite(4, 4);
        let h = motif_by_name("triangle").unwrap();
        let run = sample_motif(&mut Oracle::new(&g, 1), &h, &SampleHConfig::default());
        assert!(run.fallback_triggered);
        assert_eq!(run.outcome, Outcome::NoCopyExists);
        let ceiling = (g.n() + g.m()) as u64 + (g.n() + g.m()) as u64;
        assert!(run.stats.total <= ceiling);
        let run = sample_motif(
            &mut Oracle::new(&g, 1).with_mode(Mode::Strict),
            &h,
            &SampleHConfig::default(),
        );
        assert_eq!(run.outcome, Outcome::NoCopyExists);
    }

    #[test]
    fn budget_is_reported_not_panicked() {
        let g = Graph::complete_bipartite(4, 4);
        let h = motif_by_name("triangle").unwrap();
        let mut o = Oracle::new(&g, 1).with_budget(Some(50));
        let run = sample_motif(&mut o, &h, &SampleHConfig::default().without_fallback());
        assert!(matches!(run.outcome, Outcome::Failed { .. }));
        assert!(run.stats.budget_exhausted);
    }

    #[test]
    fn fallback_copy_is_valid() {
        let g = crate::graph::gen_er(30, 0.3, 4);
        let h = motif_by_name("O3-S2").unwrap();
        let run = sample_motif(&mut Oracle::new(&g, 3), &h, &SampleHConfig::default());
        let c = run.outcome.copy().expect("copy");
        assert!(c.is_valid_in(&h, &g));
    }

    #[test]
    fn estimate_zero_via_fallback_and_small_cases() {
        let g = Graph::complete_bipartite(3, 3);
        let h = motif_by_name("triangle").unwrap();
        let e = estimate_motif_count(&mut Oracle::new(&g, 2), &h, 0.2, &SampleHConfig::default()).unwrap();
        assert_eq!(e.value, 0.0);
        let t = Graph::cycle(3);
        let s2 = motif_by_name("S2").unwrap();
        let cfg = SampleHConfig::default().without_fallback();
        let e = estimate_motif_count(&mut Oracle::new(&t, 2), &s2, 0.2, &cfg).unwrap();
        assert!((e.value - 3.0).abs() < 1e-9);
    }
}
