//! Adversary strategies. All are oblivious by construction: each owns its
//! seeded RNG and never sees player state.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeSet, WeightedDigraph};

use super::{Adversary, BanditError};

/// Random-clique ensemble on an undirected complete graph: each round a
/// vertex subset is drawn by independent inclusion and every edge inside
/// it is opened. Strategy 𝒜^i (distinguished vertex i) includes i with
/// probability c/n and every other vertex with probability c/n·(1−δ);
/// 𝒜^0 (no distinguished vertex) uses c/n·(1−δ) everywhere.
pub struct CliqueAdversary {
    include: Vec<f64>,
    slots: Vec<Vec<usize>>, // slot lookup, upper triangle
    nslots: usize,
    n: usize,
    rng: ChaCha8Rng,
}

impl CliqueAdversary {
    pub fn new(
        graph: &WeightedDigraph,
        c: f64,
        delta: f64,
        distinguished: Option<usize>,
        seed: u64,
    ) -> Result<Self, BanditError> {
        let n = graph.n();
        if graph.directed() {
            return Err(BanditError::BadParams(
                "clique adversary needs an undirected complete graph".into(),
            ));
        }
        if !(c > 0.0 && c <= n as f64) {
            return Err(BanditError::BadParams(format!("need 0 < c <= n, got c = {c}")));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(BanditError::BadParams(format!(
                "need 0 <= delta < 1, got {delta}"
            )));
        }
        let base = c / n as f64 * (1.0 - delta);
        let mut include = vec![base; n];
        if let Some(i) = distinguished {
            if i >= n {
                return Err(BanditError::BadParams(format!("vertex {i} out of range")));
            }
            include[i] = c / n as f64;
        }
        let mut slots = vec![vec![usize::MAX; n]; n];
        for u in 0..n {
            for v in u + 1..n {
                let slot = graph.slot_between(u, v).ok_or_else(|| {
                    BanditError::BadParams("clique adversary needs a complete graph".into())
                })?;
                slots[u][v] = slot;
            }
        }
        Ok(Self {
            include,
            slots,
            nslots: graph.num_slots(),
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl Adversary for CliqueAdversary {
    fn next_edge_set(&mut self) -> EdgeSet {
        let chosen: Vec<usize> = (0..self.n)
            .filter(|&v| self.rng.random::<f64>() < self.include[v])
            .collect();
        let mut open = EdgeSet::empty(self.nslots);
        for (a, &u) in chosen.iter().enumerate() {
            for &v in &chosen[a + 1..] {
                open.insert(self.slots[u][v]);
            }
        }
        open
    }
}

/// Source/sink ensemble on a directed complete graph: each round every
/// vertex is independently labeled source, sink, or neither (mutually
/// exclusive, via one uniform draw partitioned into [0, p_src),
/// [p_src, p_src + d/n)), and all edges from sources to sinks are opened.
/// The distinguished vertex has source probability c/n, others c/n·(1−δ);
/// all sink probabilities are d/n.
pub struct SourceSinkAdversary {
    source_prob: Vec<f64>,
    sink_prob: f64,
    slots: Vec<Vec<usize>>,
    nslots: usize,
    n: usize,
    rng: ChaCha8Rng,
}

impl SourceSinkAdversary {
    pub fn new(
        graph: &WeightedDigraph,
        c: f64,
        d: f64,
        delta: f64,
        distinguished: Option<usize>,
        seed: u64,
    ) -> Result<Self, BanditError> {
        let n = graph.n();
        if !graph.directed() {
            return Err(BanditError::BadParams(
                "source/sink adversary needs a directed complete graph".into(),
            ));
        }
        if !(c >= 0.0 && d >= 0.0 && (c + d) <= n as f64) {
            return Err(BanditError::BadParams(format!(
                "need c, d >= 0 and c/n + d/n <= 1 (got c = {c}, d = {d})"
            )));
        }
        if !(0.0..1.0).contains(&delta) {
            return Err(BanditError::BadParams(format!(
                "need 0 <= delta < 1, got {delta}"
            )));
        }
        let base = c / n as f64 * (1.0 - delta);
        let mut source_prob = vec![base; n];
        if let Some(i) = distinguished {
            if i >= n {
                return Err(BanditError::BadParams(format!("vertex {i} out of range")));
            }
            source_prob[i] = c / n as f64;
        }
        let mut slots = vec![vec![usize::MAX; n]; n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    slots[u][v] = graph.slot_between(u, v).ok_or_else(|| {
                        BanditError::BadParams(
                            "source/sink adversary needs a complete graph".into(),
                        )
                    })?;
                }
            }
        }
        Ok(Self {
            source_prob,
            sink_prob: d / n as f64,
            slots,
            nslots: graph.num_slots(),
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl Adversary for SourceSinkAdversary {
    fn next_edge_set(&mut self) -> EdgeSet {
        let mut sources = Vec::new();
        let mut sinks = Vec::new();
        for v in 0..self.n {
            let u: f64 = self.rng.random();
            if u < self.source_prob[v] {
                sources.push(v);
            } else if u < self.source_prob[v] + self.sink_prob {
                sinks.push(v);
            }
        }
        let mut open = EdgeSet::empty(self.nslots);
        for &s in &sources {
            for &t in &sinks {
                open.insert(self.slots[s][t]);
            }
        }
        open
    }
}

/// Deterministic adversary replaying a fixed edge-set sequence.
pub struct FixedSequenceAdversary {
    sets: Vec<EdgeSet>,
    idx: usize,
}

impl FixedSequenceAdversary {
    pub fn new(sets: Vec<EdgeSet>) -> Self {
        Self { sets, idx: 0 }
    }
}

impl Adversary for FixedSequenceAdversary {
    fn next_edge_set(&mut self) -> EdgeSet {
        let s = self.sets[self.idx % self.sets.len()].clone();
        self.idx += 1;
        s
    }

    fn fixed_horizon(&self) -> Option<usize> {
        Some(self.sets.len())
    }
}

/// Opens every slot independently with a fixed probability each round.
pub struct IidBernoulliAdversary {
    nslots: usize,
    p: f64,
    rng: ChaCha8Rng,
}

impl IidBernoulliAdversary {
    pub fn new(graph: &WeightedDigraph, p: f64, seed: u64) -> Result<Self, BanditError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(BanditError::BadParams(format!("probability {p} outside [0, 1]")));
        }
        Ok(Self {
            nslots: graph.num_slots(),
            p,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }
}

impl Adversary for IidBernoulliAdversary {
    fn next_edge_set(&mut self) -> EdgeSet {
        let mut open = EdgeSet::empty(self.nslots);
        for s in 0..self.nslots {
            if self.rng.random::<f64>() < self.p {
                open.insert(s);
            }
        }
        open
    }
}

/// δ from the complete-graph minimax construction:
/// δ = (n−1)/(2n) · √(2n/T) · √((n−c)/(c(c+1))).
pub fn clique_delta_recipe(n: usize, t: usize, c: f64) -> f64 {
    let n = n as f64;
    (n - 1.0) / (2.0 * n) * (2.0 * n / t as f64).sqrt() * ((n - c) / (c * (c + 1.0))).sqrt()
}

/// δ from the directed source/sink construction:
/// δ = (1/2)·((n−1)/n)·√(2n/T)·√(n(n−c−d)/(c(n−d))).
pub fn source_sink_delta_recipe(n: usize, t: usize, c: f64, d: f64) -> f64 {
    let n = n as f64;
    0.5 * ((n - 1.0) / n)
        * (2.0 * n / t as f64).sqrt()
        * ((n * (n - c - d)) / (c * (n - d))).sqrt()
}
