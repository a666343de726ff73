//! Graph representation, validation, generators, and reachability primitives.
//!
//! Graphs are stored as symmetric directed adjacency when flagged undirected,
//! so a single reachability implementation serves both directedness modes.
//! Edge "slots" abstract over that: for a directed graph every edge has its
//! own slot; for an undirected graph the two stored directions of a pair
//! share one slot. [`EdgeSet`] is a bitset over slots and is the currency of
//! the adversarial game (`bandit`), while contagion sampling (`simulate`)
//! works with per-direction live edges.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex count must be positive")]
    EmptyGraph,
    #[error("edge ({src}, {dst}): endpoint out of range for n = {n}")]
    VertexOutOfRange { src: usize, dst: usize, n: usize },
    #[error("edge ({src}, {dst}): self-loops are not allowed")]
    SelfLoop { src: usize, dst: usize },
    #[error("edge ({src}, {dst}): duplicate edge")]
    DuplicateEdge { src: usize, dst: usize },
    #[error("edge ({src}, {dst}): weight {weight} outside [0, 1]")]
    WeightOutOfRange { src: usize, dst: usize, weight: f64 },
    #[error("vertex {vertex}: incoming weights sum to {sum}, which exceeds 1 (linear threshold)")]
    ColumnSumExceeded { vertex: usize, sum: f64 },
    #[error("vertex {vertex}: explicit trigger probabilities sum to {sum}, expected 1")]
    TriggerNotNormalized { vertex: usize, sum: f64 },
    #[error("vertex {vertex}: trigger set contains {trigger}, which is not an in-neighbor")]
    TriggerNotInNeighbor { vertex: usize, trigger: usize },
    #[error("vertex {vertex}: explicit marginal for edge ({src}, {dst}) is {marginal}, stored weight is {weight}")]
    TriggerMarginalMismatch {
        vertex: usize,
        src: usize,
        dst: usize,
        marginal: f64,
        weight: f64,
    },
    #[error("vertex {vertex}: trigger probability {p} outside [0, 1]")]
    TriggerProbOutOfRange { vertex: usize, p: f64 },
    #[error("vertex id {vertex} out of range for n = {n}")]
    SeedOutOfRange { vertex: usize, n: usize },
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A single stored directed edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

/// Weighted directed graph over dense vertex ids `0..n`.
///
/// Undirected graphs are canonicalized to symmetric directed storage with
/// equal weights in both directions and `directed() == false`.
#[derive(Debug, Clone)]
pub struct WeightedDigraph {
    n: usize,
    directed: bool,
    edges: Vec<Edge>,
    /// Per vertex: (neighbor, weight, edge index) for outgoing edges.
    out_adj: Vec<Vec<(usize, f64, usize)>>,
    /// Per vertex: (neighbor, weight, edge index) for incoming edges.
    in_adj: Vec<Vec<(usize, f64, usize)>>,
    /// Edge index -> slot.
    slot_of_edge: Vec<usize>,
    /// Slot -> canonical endpoints ((min, max) when undirected).
    slot_ends: Vec<(usize, usize)>,
}

impl WeightedDigraph {
    pub fn directed_from_edges(
        n: usize,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self, GraphError> {
        Self::build(n, edges, true)
    }

    /// Builds an undirected graph; `edges` lists each unordered pair once.
    /// Both directions are stored with the given weight.
    pub fn undirected_from_edges(
        n: usize,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self, GraphError> {
        Self::build(n, edges, false)
    }

    fn build(n: usize, input: &[(usize, usize, f64)], directed: bool) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut edges = Vec::new();
        let mut slot_of_edge = Vec::new();
        let mut slot_ends = Vec::new();
        let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
        for &(src, dst, weight) in input {
            if src >= n || dst >= n {
                return Err(GraphError::VertexOutOfRange { src, dst, n });
            }
            if src == dst {
                return Err(GraphError::SelfLoop { src, dst });
            }
            if !(0.0..=1.0).contains(&weight) || weight.is_nan() {
                return Err(GraphError::WeightOutOfRange { src, dst, weight });
            }
            let key = if directed {
                (src, dst)
            } else {
                (src.min(dst), src.max(dst))
            };
            if seen.insert(key, ()).is_some() {
                return Err(GraphError::DuplicateEdge { src, dst });
            }
            let slot = slot_ends.len();
            slot_ends.push(key);
            edges.push(Edge { src, dst, weight });
            slot_of_edge.push(slot);
            if !directed {
                edges.push(Edge {
                    src: dst,
                    dst: src,
                    weight,
                });
                slot_of_edge.push(slot);
            }
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            out_adj[e.src].push((e.dst, e.weight, idx));
            in_adj[e.dst].push((e.src, e.weight, idx));
        }
        Ok(Self {
            n,
            directed,
            edges,
            out_adj,
            in_adj,
            slot_of_edge,
            slot_ends,
        })
    }

    /// Returns a copy with every edge's weight replaced by `f(src, dst)`.
    /// The result is always flagged directed, because the new weights need
    /// not be symmetric.
    pub fn reweight(&self, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, GraphError> {
        let triples: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .map(|e| (e.src, e.dst, f(e.src, e.dst)))
            .collect();
        Self::directed_from_edges(self.n, &triples)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    /// All stored directed edges (for an undirected graph, both directions).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_slots(&self) -> usize {
        self.slot_ends.len()
    }

    pub fn slot_of_edge(&self, edge_idx: usize) -> usize {
        self.slot_of_edge[edge_idx]
    }

    /// Canonical endpoints of a slot ((min, max) for undirected graphs).
    pub fn slot_endpoints(&self, slot: usize) -> (usize, usize) {
        self.slot_ends[slot]
    }

    /// Slot containing the given ordered pair, if any edge matches.
    pub fn slot_between(&self, src: usize, dst: usize) -> Option<usize> {
        self.out_adj[src]
            .iter()
            .find(|&&(d, _, _)| d == dst)
            .map(|&(_, _, idx)| self.slot_of_edge[idx])
    }

    pub fn out_edges(&self, v: usize) -> &[(usize, f64, usize)] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: usize) -> &[(usize, f64, usize)] {
        &self.in_adj[v]
    }

    /// Incoming weight sum of a vertex (the LT column sum).
    pub fn column_sum(&self, v: usize) -> f64 {
        self.in_adj[v].iter().map(|&(_, w, _)| w).sum()
    }

    /// b_{src,dst}, or 0 when no edge is stored.
    pub fn weight(&self, src: usize, dst: usize) -> f64 {
        self.out_adj[src]
            .iter()
            .find(|&&(d, _, _)| d == dst)
            .map_or(0.0, |&(_, w, _)| w)
    }
}

/// Subset of a graph's edge slots, stored as a bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeSet {
    words: Vec<u64>,
    nslots: usize,
}

impl EdgeSet {
    pub fn empty(nslots: usize) -> Self {
        Self {
            words: vec![0; nslots.div_ceil(64)],
            nslots,
        }
    }

    pub fn full(nslots: usize) -> Self {
        let mut s = Self::empty(nslots);
        for i in 0..nslots {
            s.insert(i);
        }
        s
    }

    pub fn nslots(&self) -> usize {
        self.nslots
    }

    pub fn insert(&mut self, slot: usize) {
        debug_assert!(slot < self.nslots);
        self.words[slot / 64] |= 1 << (slot % 64);
    }

    pub fn remove(&mut self, slot: usize) {
        self.words[slot / 64] &= !(1 << (slot % 64));
    }

    pub fn contains(&self, slot: usize) -> bool {
        slot < self.nslots && self.words[slot / 64] >> (slot % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nslots).filter(|&s| self.contains(s))
    }

    pub fn from_slots(nslots: usize, slots: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(nslots);
        for slot in slots {
            s.insert(slot);
        }
        s
    }
}

/// Sorted, duplicate-free set of vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedSet(Vec<usize>);

impl SeedSet {
    pub fn new(mut ids: Vec<usize>, n: usize) -> Result<Self, GraphError> {
        ids.sort_unstable();
        ids.dedup();
        if let Some(&v) = ids.iter().find(|&&v| v >= n) {
            return Err(GraphError::SeedOutOfRange { vertex: v, n });
        }
        Ok(Self(ids))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Set union (used by greedy selection).
    pub fn with(&self, v: usize) -> Self {
        let mut ids = self.0.clone();
        if let Err(pos) = ids.binary_search(&v) {
            ids.insert(pos, v);
        }
        Self(ids)
    }

    /// Membership mask of length n.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.0 {
            m[v] = true;
        }
        m
    }
}

/// Which trigger-set distribution the model uses.
#[derive(Debug, Clone)]
pub enum ModelKind {
    LinearThreshold,
    IndependentCascade,
    /// Per-vertex distribution over trigger subsets of in-neighbors:
    /// `explicit[i]` lists (probability, trigger subset) pairs.
    Explicit(Vec<Vec<(f64, Vec<usize>)>>),
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::LinearThreshold => "lt",
            ModelKind::IndependentCascade => "ic",
            ModelKind::Explicit(_) => "explicit",
        }
    }
}

/// A weighted graph together with its triggering semantics. The stored
/// weights are always the marginal live-edge probabilities b_ji.
#[derive(Debug, Clone)]
pub struct TriggerModel {
    pub graph: WeightedDigraph,
    pub kind: ModelKind,
}

const VALIDATE_TOL: f64 = 1e-9;

impl TriggerModel {
    pub fn new(graph: WeightedDigraph, kind: ModelKind) -> Result<Self, GraphError> {
        let model = Self { graph, kind };
        model.validate()?;
        Ok(model)
    }

    /// Checks the model invariants, reporting the first violation.
    pub fn validate(&self) -> Result<(), GraphError> {
        match &self.kind {
            ModelKind::IndependentCascade => Ok(()),
            ModelKind::LinearThreshold => {
                for v in 0..self.graph.n() {
                    let sum = self.graph.column_sum(v);
                    if sum > 1.0 + VALIDATE_TOL {
                        return Err(GraphError::ColumnSumExceeded { vertex: v, sum });
                    }
                }
                Ok(())
            }
            ModelKind::Explicit(dists) => {
                if dists.len() != self.graph.n() {
                    return Err(GraphError::BadParams(format!(
                        "explicit distributions given for {} vertices, graph has {}",
                        dists.len(),
                        self.graph.n()
                    )));
                }
                for (v, dist) in dists.iter().enumerate() {
                    let in_neighbors: Vec<usize> =
                        self.graph.in_edges(v).iter().map(|&(j, _, _)| j).collect();
                    let mut total = 0.0;
                    let mut marginal: HashMap<usize, f64> = HashMap::new();
                    for (p, set) in dist {
                        if !(0.0..=1.0).contains(p) || p.is_nan() {
                            return Err(GraphError::TriggerProbOutOfRange { vertex: v, p: *p });
                        }
                        total += p;
                        for &j in set {
                            if !in_neighbors.contains(&j) {
                                return Err(GraphError::TriggerNotInNeighbor {
                                    vertex: v,
                                    trigger: j,
                                });
                            }
                            *marginal.entry(j).or_insert(0.0) += p;
                        }
                    }
                    if (total - 1.0).abs() > VALIDATE_TOL {
                        return Err(GraphError::TriggerNotNormalized {
                            vertex: v,
                            sum: total,
                        });
                    }
                    for &j in &in_neighbors {
                        let m = marginal.get(&j).copied().unwrap_or(0.0);
                        let w = self.graph.weight(j, v);
                        if (m - w).abs() > VALIDATE_TOL {
                            return Err(GraphError::TriggerMarginalMismatch {
                                vertex: v,
                                src: j,
                                dst: v,
                                marginal: m,
                                weight: w,
                            });
                        }
                    }
                }
                Ok(())
            }
        }
    }
}

/// Vertices reachable from `s` along open edges. In an undirected graph an
/// open slot transmits in both directions.
pub fn reach(g: &WeightedDigraph, open: &EdgeSet, s: &SeedSet) -> SeedSet {
    let mut visited = s.mask(g.n());
    let mut queue: Vec<usize> = s.iter().collect();
    while let Some(u) = queue.pop() {
        for &(v, _, idx) in g.out_edges(u) {
            if !visited[v] && open.contains(g.slot_of_edge(idx)) {
                visited[v] = true;
                queue.push(v);
            }
        }
    }
    let ids = (0..g.n()).filter(|&v| visited[v]).collect();
    SeedSet::new(ids, g.n()).expect("reach produces valid ids")
}

/// |reach| / n, the reward of the adversarial game.
pub fn infected_fraction(g: &WeightedDigraph, open: &EdgeSet, s: &SeedSet) -> f64 {
    reach(g, open, s).len() as f64 / g.n() as f64
}

pub mod generators {
    //! Graph-family generators (topology only; unit weights).

    use super::{GraphError, WeightedDigraph};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub fn erdos_renyi_directed(n: usize, p: f64, seed: u64) -> Result<WeightedDigraph, GraphError> {
        if n == 0 {
            return Err(GraphError::BadParams("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(GraphError::BadParams(format!("edge probability {p} outside [0, 1]")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.random::<f64>() < p {
                    edges.push((i, j, 1.0));
                }
            }
        }
        WeightedDigraph::directed_from_edges(n, &edges)
    }

    /// Barabási–Albert preferential attachment: `m0` initial vertices in a
    /// path, then each new vertex attaches `m` edges to existing vertices
    /// with probability proportional to degree. Undirected.
    pub fn preferential_attachment(
        n: usize,
        m0: usize,
        m: usize,
        seed: u64,
    ) -> Result<WeightedDigraph, GraphError> {
        if m0 < 1 || m < 1 || m > m0 || n < m0 {
            return Err(GraphError::BadParams(format!(
                "need 1 <= m <= m0 <= n (got n={n}, m0={m0}, m={m})"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges: Vec<(usize, usize, f64)> = Vec::new();
        // Repeated-vertex list for degree-proportional sampling.
        let mut chances: Vec<usize> = Vec::new();
        for v in 0..m0 {
            // Seed community: a path, so every initial vertex has degree >= 1.
            if v + 1 < m0 {
                edges.push((v, v + 1, 1.0));
                chances.push(v);
                chances.push(v + 1);
            }
        }
        if m0 == 1 {
            chances.push(0);
        }
        for v in m0..n {
            let mut targets = Vec::new();
            while targets.len() < m {
                let t = chances[rng.random_range(0..chances.len())];
                if !targets.contains(&t) {
                    targets.push(t);
                }
            }
            for &t in &targets {
                edges.push((t, v, 1.0));
                chances.push(t);
                chances.push(v);
            }
        }
        WeightedDigraph::undirected_from_edges(n, &edges)
    }

    /// rows x cols grid, undirected, 4-neighborhood.
    pub fn grid_2d(rows: usize, cols: usize) -> Result<WeightedDigraph, GraphError> {
        if rows == 0 || cols == 0 {
            return Err(GraphError::BadParams("grid dimensions must be positive".into()));
        }
        let n = rows * cols;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1, 1.0));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols, 1.0));
                }
            }
        }
        WeightedDigraph::undirected_from_edges(n, &edges)
    }

    pub fn complete(n: usize, directed: bool) -> Result<WeightedDigraph, GraphError> {
        if n == 0 {
            return Err(GraphError::BadParams("n must be positive".into()));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if directed && i != j {
                    edges.push((i, j, 1.0));
                } else if !directed && i < j {
                    edges.push((i, j, 1.0));
                }
            }
        }
        if directed {
            WeightedDigraph::directed_from_edges(n, &edges)
        } else {
            WeightedDigraph::undirected_from_edges(n, &edges)
        }
    }
}

/// Draws per-vertex γ(i) ~ Uniform[gamma_min, gamma_max] and assigns
/// b_ji = (1 − γ(i)) / d(i) to every in-edge (j, i), where d(i) is the
/// in-degree (= degree for undirected topology). Returns a linear-threshold
/// model; the result is flagged directed because the weights are not
/// symmetric.
pub fn lt_weights_gamma(
    g: &WeightedDigraph,
    gamma_min: f64,
    gamma_max: f64,
    seed: u64,
) -> Result<TriggerModel, GraphError> {
    use rand::Rng;
    use rand::SeedableRng;
    if !(0.0..=1.0).contains(&gamma_min) || !(0.0..=1.0).contains(&gamma_max) || gamma_min > gamma_max
    {
        return Err(GraphError::BadParams(format!(
            "need 0 <= gamma_min <= gamma_max <= 1 (got {gamma_min}, {gamma_max})"
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let gammas: Vec<f64> = (0..g.n())
        .map(|_| gamma_min + (gamma_max - gamma_min) * rng.random::<f64>())
        .collect();
    let graph = g.reweight(|_, dst| {
        let d = g.in_edges(dst).len() as f64;
        (1.0 - gammas[dst]) / d
    })?;
    TriggerModel::new(graph, ModelKind::LinearThreshold)
}

/// Writes the edge-list format: a `#directed`/`#undirected` header, then one
/// `src<TAB>dst<TAB>weight` line per edge (per slot for undirected graphs).
/// Weights use the shortest decimal that round-trips, so load(save(g)) is
/// lossless.
pub fn to_edge_list(g: &WeightedDigraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", if g.directed() { "#directed" } else { "#undirected" });
    let _ = writeln!(out, "#n\t{}", g.n());
    if g.directed() {
        for e in g.edges() {
            let _ = writeln!(out, "{}\t{}\t{}", e.src, e.dst, e.weight);
        }
    } else {
        for slot in 0..g.num_slots() {
            let (u, v) = g.slot_endpoints(slot);
            let _ = writeln!(out, "{}\t{}\t{}", u, v, g.weight(u, v));
        }
    }
    out
}

/// Parses the edge-list format. See [`to_edge_list`].
pub fn from_edge_list(text: &str, path: &str) -> Result<WeightedDigraph, GraphError> {
    let mut directed: Option<bool> = None;
    let mut declared_n: Option<usize> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut max_vertex = 0usize;
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            match rest {
                "directed" => directed = Some(true),
                "undirected" => directed = Some(false),
                _ => {
                    if let Some(nstr) = rest.strip_prefix("n\t").or_else(|| rest.strip_prefix("n ")) {
                        declared_n = nstr.trim().parse().ok();
                    }
                    // other comments ignored
                }
            }
            continue;
        }
        let mut parts = line.split('\t');
        let parse_err = |msg: String| GraphError::Parse {
            path: path.to_string(),
            line: lineno,
            msg,
        };
        let src: usize = parts
            .next()
            .ok_or_else(|| parse_err("missing src".into()))?
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("bad src: {e}")))?;
        let dst: usize = parts
            .next()
            .ok_or_else(|| parse_err("missing dst".into()))?
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("bad dst: {e}")))?;
        let weight: f64 = parts
            .next()
            .ok_or_else(|| parse_err("missing weight".into()))?
            .trim()
            .parse()
            .map_err(|e| parse_err(format!("bad weight: {e}")))?;
        if parts.next().is_some() {
            return Err(parse_err("trailing fields".into()));
        }
        max_vertex = max_vertex.max(src).max(dst);
        edges.push((src, dst, weight));
    }
    let directed = directed.ok_or_else(|| GraphError::Parse {
        path: path.to_string(),
        line: 1,
        msg: "missing #directed/#undirected header".into(),
    })?;
    let n = declared_n.unwrap_or(if edges.is_empty() { 1 } else { max_vertex + 1 });
    if directed {
        WeightedDigraph::directed_from_edges(n, &edges)
    } else {
        WeightedDigraph::undirected_from_edges(n, &edges)
    }
}

pub fn save_edge_list(g: &WeightedDigraph, path: &Path) -> Result<(), GraphError> {
    std::fs::write(path, to_edge_list(g)).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_edge_list(path: &Path) -> Result<WeightedDigraph, GraphError> {
    let text = std::fs::read_to_string(path).map_err(|source| GraphError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_edge_list(&text, &path.display().to_string())
}
