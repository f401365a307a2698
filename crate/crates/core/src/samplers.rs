//! Component samplers: uniform `p`-stars, `l_p` vertex sampling and
//! per-copy uniform odd cycles. Each comes as a single attempt and as a
//! loop that repeats attempts until one succeeds.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::binomial;
use crate::graph::{CycleCopy, StarCopy};
use crate::oracle::{Oracle, QueryError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplerError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error("no success within {attempts} attempts")]
    Timeout { attempts: u64 },
}

/// A successful loop result with the number of attempts it took.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sampled<T> {
    pub value: T,
    pub attempts: u64,
}

/// Smallest integer `d >= 0` with `d^p >= x`.
pub fn ceil_root(x: f64, p: usize) -> usize {
    if x <= 0.0 {
        return 0;
    }
    let p_i = p as i32;
    let mut d = x.powf(1.0 / p as f64).ceil().max(0.0) as usize;
    while d > 0 && ((d - 1) as f64).powi(p_i) >= x {
        d -= 1;
    }
    while (d as f64).powi(p_i) < x {
        d += 1;
    }
    d
}

/// `max over k in [p, n] of ceil(k^p / C(k, p))`. The ratio falls with `k`,
/// so the maximum sits at `k = p` and equals `p^p`.
pub fn star_constant(p: usize, n: usize) -> u64 {
    let top = n.max(p).min(p + 4096);
    let mut best = 0u64;
    for k in p..=top {
        let num = (k as u128).checked_pow(p as u32);
        let den = binomial(k as u64, p as u64);
        let c = match num {
            Some(num) => num.div_ceil(den) as u64,
            None => ((k as f64).powi(p as i32) / den as f64).ceil() as u64,
        };
        best = best.max(c);
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarSamplerConfig {
    pub p: usize,
    pub n: usize,
    pub s_hat: f64,
    pub c_p: u64,
    pub d_ub: usize,
}

impl StarSamplerConfig {
    pub fn new(p: usize, n: usize, s_hat: f64) -> StarSamplerConfig {
        assert!(p >= 1, "stars need at least one petal");
        let c_p = star_constant(p, n);
        let d_ub = ceil_root(c_p as f64 * s_hat, p).min(n).max(1);
        StarSamplerConfig {
            p,
            n,
            s_hat,
            c_p,
            d_ub,
        }
    }

    /// Per-attempt probability of each specific star given `m`.
    pub fn per_copy_probability(&self, m: usize) -> f64 {
        1.0 / (m as f64 * (self.d_ub as f64).powi(self.p as i32 - 1))
    }
}

/// One attempt: a uniform oriented edge `(v0, v1)`, then `p - 1` neighbor
/// queries of `v0` at uniform indices in `[1, d_ub]`. Succeeds only when
/// every query answers and `v1 < v2 < ... < vp`.
pub fn star_attempt(o: &mut Oracle, cfg: &StarSamplerConfig) -> Result<Option<StarCopy>, QueryError> {
    let (v0, v1) = o.uniform_edge()?;
    let mut petals = Vec::with_capacity(cfg.p);
    petals.push(v1);
    for _ in 1..cfg.p {
        let j = o.rng().random_range(1..=cfg.d_ub);
        match o.neighbor(v0, j)? {
            Some(x) if x > *petals.last().unwrap() => petals.push(x),
            _ => return Ok(None),
        }
    }
    Ok(Some(StarCopy { center: v0, petals }))
}

pub fn sample_star(
    o: &mut Oracle,
    cfg: &StarSamplerConfig,
    cap: Option<u64>,
) -> Result<Sampled<StarCopy>, SamplerError> {
    repeat(cap, || star_attempt(o, cfg))
}

fn repeat<T>(
    cap: Option<u64>,
    mut attempt: impl FnMut() -> Result<Option<T>, QueryError>,
) -> Result<Sampled<T>, SamplerError> {
    let mut attempts = 0u64;
    loop {
        if cap.is_some_and(|c| attempts >= c) {
            return Err(SamplerError::Timeout { attempts });
        }
        attempts += 1;
        if let Some(value) = attempt()? {
            return Ok(Sampled { value, attempts });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSamplerConfig {
    pub p: usize,
    pub n: usize,
    pub mu_hat: f64,
    pub d_ub: usize,
}

impl LpSamplerConfig {
    pub fn new(p: usize, n: usize, mu_hat: f64) -> LpSamplerConfig {
        assert!(p >= 1);
        LpSamplerConfig {
            p,
            n,
            mu_hat,
            d_ub: ceil_root(mu_hat, p).min(n).max(1),
        }
    }
}

/// One attempt: a uniform oriented edge `(v0, .)` and `p - 1` neighbor
/// queries of `v0` at uniform indices in `[1, d_ub]`; returns `v0` if all
/// of them answer.
pub fn lp_attempt(o: &mut Oracle, cfg: &LpSamplerConfig) -> Result<Option<usize>, QueryError> {
    let (v0, _) = o.uniform_edge()?;
    for _ in 1..cfg.p {
        let j = o.rng().random_range(1..=cfg.d_ub);
        if o.neighbor(v0, j)?.is_none() {
            return Ok(None);
        }
    }
    Ok(Some(v0))
}

/// Returns `v` with probability `d(v)^p / mu_p`.
pub fn lp_sample(o: &mut Oracle, cfg: &LpSamplerConfig, cap: Option<u64>) -> Result<Sampled<usize>, SamplerError> {
    repeat(cap, || lp_attempt(o, cfg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Light,
    Heavy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleSamplerConfig {
    pub k: usize,
    /// Edge-count normalizer: exact `m` or an estimate in `[m, 2m]`.
    pub m_hat: f64,
    /// Degree threshold `ceil(sqrt(m_hat))`.
    pub theta: usize,
}

impl CycleSamplerConfig {
    pub fn new(k: usize, m_hat: f64) -> CycleSamplerConfig {
        assert!(k >= 3 && k % 2 == 1, "odd cycle length expected");
        CycleSamplerConfig {
            k,
            m_hat,
            theta: ceil_root(m_hat, 2).max(1),
        }
    }

    /// Distinguished-vertex probability after equalization.
    pub fn p_star(&self) -> f64 {
        1.0 / self.theta as f64
    }

    /// Per-attempt probability of one specific cycle whose canonical root
    /// is light (`heavy = false`) or heavy, when the true count is `m`.
    /// The two agree when `m_hat == m`.
    pub fn per_copy_probability(&self, m: usize, heavy: bool) -> f64 {
        let l = (self.k - 1) / 2;
        let base = 0.5 * (m as f64).powi(-(l as i32)) * self.p_star();
        if heavy {
            base * self.m_hat / m as f64
        } else {
            base
        }
    }
}

/// One attempt at a `k`-cycle. See the crate README for the procedure; in
/// short: `(k-1)/2` uniform edges give the path `v_1..v_{k-1}`, a coin
/// picks how `v_k` is found (neighbor of a light `v_{k-1}`, or a heavy
/// endpoint of a fresh uniform edge kept with probability
/// `m_hat / (d(u) theta)`), pair queries confirm the cycle, and the draw is
/// kept only if it is the copy's canonical configuration.
pub fn cycle_attempt(o: &mut Oracle, cfg: &CycleSamplerConfig) -> Result<Option<CycleCopy>, QueryError> {
    let k = cfg.k;
    let theta = cfg.theta;
    let mut v = Vec::with_capacity(k);
    for _ in 0..(k - 1) / 2 {
        let (a, b) = o.uniform_edge()?;
        v.push(a);
        v.push(b);
    }
    let route = if o.rng().random_bool(0.5) {
        Route::Light
    } else {
        Route::Heavy
    };
    let mut deg = vec![None; k];
    let last = v[k - 2];
    let vk = match route {
        Route::Light => {
            let d = o.degree(last)?;
            deg[k - 2] = Some(d);
            if d > theta {
                return Ok(None);
            }
            let j = o.rng().random_range(1..=theta);
            match o.neighbor(last, j)? {
                Some(x) => x,
                None => return Ok(None),
            }
        }
        Route::Heavy => {
            let (u, _) = o.uniform_edge()?;
            let d = o.degree(u)?;
            deg[k - 1] = Some(d);
            if d <= theta {
                return Ok(None);
            }
            let keep = cfg.m_hat / (d as f64 * theta as f64);
            if !o.rng().random_bool(keep.min(1.0)) {
                return Ok(None);
            }
            u
        }
    };
    v.push(vk);
    for i in 0..k {
        if v[i + 1..].contains(&v[i]) {
            return Ok(None);
        }
    }
    // Edges not already witnessed by the sampling steps.
    let mut pairs: Vec<(usize, usize)> = (1..k - 2).step_by(2).map(|i| (v[i], v[i + 1])).collect();
    if route == Route::Heavy {
        pairs.push((v[k - 2], v[k - 1]));
    }
    pairs.push((v[k - 1], v[0]));
    for (a, b) in pairs {
        if !o.pair(a, b)? {
            return Ok(None);
        }
    }
    for i in 0..k {
        if deg[i].is_none() {
            deg[i] = Some(o.degree(v[i])?);
        }
    }
    let deg: Vec<usize> = deg.into_iter().map(Option::unwrap).collect();
    let root = (0..k).min_by_key(|&i| (deg[i], v[i])).unwrap();
    let canonical = if deg[root] <= theta {
        route == Route::Light && root == k - 2 && v[k - 1] < v[k - 3]
    } else {
        route == Route::Heavy && root == k - 1 && v[0] < v[k - 2]
    };
    Ok(canonical.then(|| CycleCopy::from_traversal(&v)))
}

pub fn sample_odd_cycle(
    o: &mut Oracle,
    cfg: &CycleSamplerConfig,
    cap: Option<u64>,
) -> Result<Sampled<CycleCopy>, SamplerError> {
    repeat(cap, || cycle_attempt(o, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{count_stars, enumerate_odd_cycles, enumerate_stars};
    use crate::graph::{gen_er, Graph};
    use std::collections::BTreeMap;

    #[test]
    fn roots_and_constants() {
        assert_eq!(ceil_root(12.0, 2), 4);
        assert_eq!(ceil_root(16.0, 2), 4);
        assert_eq!(ceil_root(17.0, 2), 5);
        assert_eq!(ceil_root(27.0, 3), 3);
        assert_eq!(ceil_root(0.0, 3), 0);
        assert_eq!(star_constant(2, 3), 4);
        assert_eq!(star_constant(3, 50), 27);
        assert_eq!(star_constant(1, 10), 1);
    }

    #[test]
    fn triangle_star_config() {
        let cfg = StarSamplerConfig::new(2, 3, 3.0);
        assert_eq!(cfg.c_p, 4);
        assert_eq!(cfg.d_ub, 3);
        assert!((cfg.per_copy_probability(6) - 1.0 / 18.0).abs() < 1e-12);
    }

    #[test]
    fn d_ub_dominates_max_degree() {
        for seed in 0..20 {
            let g = gen_er(25, 0.05 + 0.04 * (seed % 10) as f64, seed);
            for p in 1..=4 {
                let s = count_stars(&g, p);
                if s == 0 {
                    continue;
                }
                let cfg = StarSamplerConfig::new(p, g.n(), s as f64);
                assert!(cfg.d_ub >= g.max_degree(), "p={p} seed={seed}");
            }
        }
    }

    #[test]
    fn star_attempt_rejects_fail_and_order() {
        // S3 with center 0: every 3-star attempt must start at the center.
        let g = Graph::star(3);
        let cfg = StarSamplerConfig::new(3, g.n(), 1.0);
        let mut o = Oracle::new(&g, 4);
        let got = sample_star(&mut o, &cfg, Some(100_000)).unwrap();
        assert_eq!(got.value, StarCopy { center: 0, petals: vec![1, 2, 3] });
        // A leaf center always hits FAIL for p = 2.
        let mut o = Oracle::new(&g, 5);
        let cfg = StarSamplerConfig::new(2, g.n(), 3.0);
        for _ in 0..200 {
            if let Some(s) = star_attempt(&mut o, &cfg).unwrap() {
                assert_eq!(s.center, 0);
                assert!(s.petals.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn star_loop_uniform_on_triangle() {
        let g = Graph::cycle(3);
        let cfg = StarSamplerConfig::new(2, 3, 3.0);
        let mut o = Oracle::new(&g, 8);
        let mut freq: BTreeMap<StarCopy, u32> = BTreeMap::new();
        for _ in 0..30_000 {
            *freq.entry(sample_star(&mut o, &cfg, None).unwrap().value).or_default() += 1;
        }
        let all = enumerate_stars(&g, 2);
        assert_eq!(freq.len(), all.len());
        for s in all {
            let f = freq[&s] as f64 / 30_000.0;
            assert!((f - 1.0 / 3.0).abs() < 0.015, "{s:?} {f}");
        }
    }

    #[test]
    fn lp_on_path_and_star() {
        let g = Graph::path(3);
        let cfg = LpSamplerConfig::new(2, 3, 6.0);
        let mut o = Oracle::new(&g, 1);
        let n = 40_000;
        let center = (0..n).filter(|_| lp_sample(&mut o, &cfg, None).unwrap().value == 1).count();
        assert!((center as f64 / n as f64 - 2.0 / 3.0).abs() < 0.015);
        let s = Graph::star(3);
        let cfg = LpSamplerConfig::new(1, 4, 6.0);
        let mut o = Oracle::new(&s, 2);
        let center = (0..n).filter(|_| lp_sample(&mut o, &cfg, None).unwrap().value == 0).count();
        assert!((center as f64 / n as f64 - 0.5).abs() < 0.015);
    }

    #[test]
    fn cycle_sampler_on_triangle_and_bipartite() {
        let t = Graph::cycle(3);
        let cfg = CycleSamplerConfig::new(3, t.m() as f64);
        let mut o = Oracle::new(&t, 3);
        let c = sample_odd_cycle(&mut o, &cfg, None).unwrap();
        assert_eq!(c.value.order, vec![0, 1, 2]);
        let b = Graph::complete_bipartite(3, 3);
        let cfg = CycleSamplerConfig::new(3, b.m() as f64);
        let mut o = Oracle::new(&b, 3);
        assert_eq!(
            sample_odd_cycle(&mut o, &cfg, Some(2_000)),
            Err(SamplerError::Timeout { attempts: 2_000 })
        );
    }

    #[test]
    fn cycle_sampler_spreads_over_k4() {
        let g = Graph::complete(4);
        let cfg = CycleSamplerConfig::new(3, g.m() as f64);
        let mut o = Oracle::new(&g, 12);
        let copies = enumerate_odd_cycles(&g, 3).unwrap();
        let mut freq: BTreeMap<CycleCopy, u32> = BTreeMap::new();
        for _ in 0..8_000 {
            *freq.entry(sample_odd_cycle(&mut o, &cfg, None).unwrap().value).or_default() += 1;
        }
        assert_eq!(freq.len(), copies.len());
        for c in copies {
            assert!((freq[&c] as f64 / 8_000.0 - 0.25).abs() < 0.03);
        }
    }

    #[test]
    fn heavy_route_is_used_on_hubs() {
        // Wheel: hub 0 joined to a 9-cycle; the hub has degree 9 > theta = 6.
        let mut e: Vec<_> = (1..10).map(|i| (0, i)).collect();
        e.extend((1..10).map(|i| (i, i % 9 + 1)));
        let g = Graph::from_edges(10, &e).unwrap();
        let cfg = CycleSamplerConfig::new(3, g.m() as f64);
        assert_eq!(cfg.theta, 6);
        let mut o = Oracle::new(&g, 6);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..3_000 {
            seen.insert(sample_odd_cycle(&mut o, &cfg, None).unwrap().value);
        }
        assert_eq!(seen.len(), 9);
    }
}
