//! Exact and Monte Carlo evaluation of the influence function via the
//! live-edge interpretation.
//!
//! A live-edge sample is a set of *directed* stored edges: for a linear
//! threshold model each vertex keeps at most one live in-edge; for
//! independent cascade each edge is live independently; for an explicit
//! triggering model each vertex draws a trigger subset of its in-neighbors.
//! The influence of a seed set is the expected reach over live edges.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{EdgeSet, ModelKind, SeedSet, TriggerModel, WeightedDigraph};

#[derive(Debug, Error)]
pub enum SimulateError {
    #[error("exact influence would enumerate {configs:.3e} configurations (limit {limit:.1e})")]
    InstanceTooLarge { configs: f64, limit: f64 },
}

/// A draw from the model's live-edge distribution. The bitset indexes the
/// graph's stored directed edges (not undirected slots).
#[derive(Debug, Clone)]
pub struct LiveEdgeSample {
    pub live: EdgeSet,
}

/// Monte Carlo influence estimate.
#[derive(Debug, Clone, Copy)]
pub struct InfluenceEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub replications: usize,
}

/// Vertices reachable from `s` along live directed edges.
pub fn reach_live(g: &WeightedDigraph, sample: &LiveEdgeSample, s: &SeedSet) -> SeedSet {
    let mut visited = s.mask(g.n());
    let mut queue: Vec<usize> = s.iter().collect();
    while let Some(u) = queue.pop() {
        for &(v, _, idx) in g.out_edges(u) {
            if !visited[v] && sample.live.contains(idx) {
                visited[v] = true;
                queue.push(v);
            }
        }
    }
    SeedSet::new((0..g.n()).filter(|&v| visited[v]).collect(), g.n()).unwrap()
}

pub fn sample_live_edges(model: &TriggerModel, rng: &mut impl Rng) -> LiveEdgeSample {
    let g = &model.graph;
    let mut live = EdgeSet::empty(g.edges().len());
    match &model.kind {
        ModelKind::LinearThreshold => {
            for i in 0..g.n() {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for &(_, w, idx) in g.in_edges(i) {
                    acc += w;
                    if u < acc {
                        live.insert(idx);
                        break;
                    }
                }
            }
        }
        ModelKind::IndependentCascade => {
            for (idx, e) in g.edges().iter().enumerate() {
                if rng.random::<f64>() < e.weight {
                    live.insert(idx);
                }
            }
        }
        ModelKind::Explicit(dists) => {
            for (i, dist) in dists.iter().enumerate() {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                for (p, set) in dist {
                    acc += p;
                    if u < acc {
                        for &j in set {
                            let idx = g
                                .in_edges(i)
                                .iter()
                                .find(|&&(src, _, _)| src == j)
                                .map(|&(_, _, idx)| idx)
                                .expect("validated trigger is an in-neighbor");
                            live.insert(idx);
                        }
                        break;
                    }
                }
            }
        }
    }
    LiveEdgeSample { live }
}

/// Unbiased Monte Carlo estimate of the influence. Replication r uses an
/// independent RNG stream derived from (seed, r), so the result does not
/// depend on how replications are scheduled across threads.
pub fn estimate_influence(
    model: &TriggerModel,
    a: &SeedSet,
    replications: usize,
    seed: u64,
) -> InfluenceEstimate {
    assert!(replications >= 1);
    let sizes: Vec<f64> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let sample = sample_live_edges(model, &mut rng);
            reach_live(&model.graph, &sample, a).len() as f64
        })
        .collect();
    let n = replications as f64;
    let mean = sizes.iter().sum::<f64>() / n;
    let var = if replications > 1 {
        sizes.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    InfluenceEstimate {
        mean,
        stderr: (var / n).sqrt(),
        replications,
    }
}

const EXACT_CONFIG_LIMIT: f64 = 1e7;

/// Brute-force influence by enumerating all live-edge configurations.
///
/// LT and explicit models enumerate per-vertex trigger choices; IC
/// enumerates subsets of the non-deterministic edges that could ever carry
/// infection out of `a`. Gated to ~1e7 configurations.
pub fn exact_influence(model: &TriggerModel, a: &SeedSet) -> Result<f64, SimulateError> {
    let g = &model.graph;
    match &model.kind {
        ModelKind::LinearThreshold | ModelKind::Explicit(_) => {
            // Per-vertex choice list: (probability, live in-edge indices).
            let mut choices: Vec<Vec<(f64, Vec<usize>)>> = Vec::with_capacity(g.n());
            match &model.kind {
                ModelKind::LinearThreshold => {
                    for i in 0..g.n() {
                        let mut c: Vec<(f64, Vec<usize>)> = g
                            .in_edges(i)
                            .iter()
                            .filter(|&&(_, w, _)| w > 0.0)
                            .map(|&(_, w, idx)| (w, vec![idx]))
                            .collect();
                        let none = 1.0 - c.iter().map(|(p, _)| p).sum::<f64>();
                        if none > 0.0 {
                            c.push((none, Vec::new()));
                        }
                        choices.push(c);
                    }
                }
                ModelKind::Explicit(dists) => {
                    for (i, dist) in dists.iter().enumerate() {
                        let c = dist
                            .iter()
                            .filter(|(p, _)| *p > 0.0)
                            .map(|(p, set)| {
                                let idxs = set
                                    .iter()
                                    .map(|&j| {
                                        g.in_edges(i)
                                            .iter()
                                            .find(|&&(src, _, _)| src == j)
                                            .map(|&(_, _, idx)| idx)
                                            .expect("validated trigger")
                                    })
                                    .collect();
                                (*p, idxs)
                            })
                            .collect();
                        choices.push(c);
                    }
                }
                ModelKind::IndependentCascade => unreachable!(),
            }
            let configs = choices
                .iter()
                .map(|c| c.len().max(1) as f64)
                .product::<f64>();
            if configs > EXACT_CONFIG_LIMIT {
                return Err(SimulateError::InstanceTooLarge {
                    configs,
                    limit: EXACT_CONFIG_LIMIT,
                });
            }
            let mut total = 0.0;
            let mut live = EdgeSet::empty(g.edges().len());
            enumerate_choices(g, a, &choices, 0, 1.0, &mut live, &mut total);
            Ok(total)
        }
        ModelKind::IndependentCascade => {
            // Only edges leaving vertices that are reachable at all can
            // matter; everything else integrates out.
            let underlying = EdgeSet::full(g.num_slots());
            let reachable = crate::graph::reach(g, &underlying, a).mask(g.n());
            let mut free = Vec::new(); // probability strictly in (0,1)
            let mut certain = Vec::new(); // weight exactly 1
            for (idx, e) in g.edges().iter().enumerate() {
                if !reachable[e.src] || e.weight == 0.0 {
                    continue;
                }
                if e.weight == 1.0 {
                    certain.push(idx);
                } else {
                    free.push((idx, e.weight));
                }
            }
            let configs = (free.len() as f64).exp2();
            if configs > EXACT_CONFIG_LIMIT {
                return Err(SimulateError::InstanceTooLarge {
                    configs,
                    limit: EXACT_CONFIG_LIMIT,
                });
            }
            let mut total = 0.0;
            for mask in 0u64..(1u64 << free.len()) {
                let mut live = EdgeSet::empty(g.edges().len());
                for &idx in &certain {
                    live.insert(idx);
                }
                let mut p = 1.0;
                for (bit, &(idx, w)) in free.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        live.insert(idx);
                        p *= w;
                    } else {
                        p *= 1.0 - w;
                    }
                }
                total += p * reach_live(g, &LiveEdgeSample { live }, a).len() as f64;
            }
            Ok(total)
        }
    }
}

fn enumerate_choices(
    g: &WeightedDigraph,
    a: &SeedSet,
    choices: &[Vec<(f64, Vec<usize>)>],
    vertex: usize,
    prob: f64,
    live: &mut EdgeSet,
    total: &mut f64,
) {
    if vertex == choices.len() {
        *total += prob * reach_live(g, &LiveEdgeSample { live: live.clone() }, a).len() as f64;
        return;
    }
    if choices[vertex].is_empty() {
        enumerate_choices(g, a, choices, vertex + 1, prob, live, total);
        return;
    }
    for (p, idxs) in &choices[vertex] {
        for &idx in idxs {
            live.insert(idx);
        }
        enumerate_choices(g, a, choices, vertex + 1, prob * p, live, total);
        for &idx in idxs {
            live.remove(idx);
        }
    }
}

/// The discrete-time linear threshold process: each vertex draws a uniform
/// threshold and becomes infected once the incoming weight from infected
/// neighbors exceeds it. Independent of the live-edge sampler; used as a
/// distributional oracle in tests.
pub fn run_lt_threshold(model: &TriggerModel, a: &SeedSet, rng: &mut impl Rng) -> SeedSet {
    assert!(matches!(model.kind, ModelKind::LinearThreshold));
    let g = &model.graph;
    let thresholds: Vec<f64> = (0..g.n()).map(|_| rng.random::<f64>()).collect();
    let mut infected = a.mask(g.n());
    loop {
        let mut changed = false;
        for i in 0..g.n() {
            if infected[i] {
                continue;
            }
            let w: f64 = g
                .in_edges(i)
                .iter()
                .filter(|&&(j, _, _)| infected[j])
                .map(|&(_, w, _)| w)
                .sum();
            if w > thresholds[i] {
                infected[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    SeedSet::new((0..g.n()).filter(|&v| infected[v]).collect(), g.n()).unwrap()
}
