//! The adversarial online influence-maximization game.
//!
//! Each round an oblivious adversary opens a subset of edges, the player
//! picks k source vertices, earns the fraction of vertices reachable from
//! its sources along open edges, and receives edge semi-bandit feedback:
//! the open/closed status of exactly the edges incident to (undirected) or
//! leaving (directed) the infected set.

pub mod adversary;
pub mod harness;
pub mod loss;
pub mod player;
pub mod rates;

use thiserror::Error;

use crate::graph::{EdgeSet, SeedSet, WeightedDigraph};

pub use adversary::{
    clique_delta_recipe, source_sink_delta_recipe, CliqueAdversary, FixedSequenceAdversary,
    IidBernoulliAdversary, SourceSinkAdversary,
};
pub use harness::{play_episode, regret_report, singleton_rewards};
pub use loss::{node_loss_estimate, symmetric_loss_definitional, symmetric_loss_estimate};
pub use player::{
    osmd_update, Exp3Player, FixedPlayer, LossKind, OnlineGreedyPlayer, OsmdPlayer,
    UniformRandomPlayer,
};

#[derive(Debug, Error)]
pub enum BanditError {
    #[error("invalid parameter: {0}")]
    BadParams(String),
    #[error("player is configured for {player_k} sources per round, game expects {k}")]
    SourceCountMismatch { player_k: usize, k: usize },
    #[error("fixed adversary sequence has {len} rounds, game expects {t}")]
    SequenceLength { len: usize, t: usize },
    #[error("mirror-descent normalization did not converge (residual {residual:.3e})")]
    NormalizationFailed { residual: f64 },
    #[error("regret report needs at least one episode")]
    EmptyLogs,
}

/// Static parameters of one game.
#[derive(Debug, Clone)]
pub struct GameConfig {
    /// Topology only; every edge is playable by the adversary.
    pub graph: WeightedDigraph,
    pub horizon: usize,
    /// Sources per round.
    pub k: usize,
}

impl GameConfig {
    pub fn new(graph: WeightedDigraph, horizon: usize, k: usize) -> Result<Self, BanditError> {
        if horizon == 0 {
            return Err(BanditError::BadParams("horizon must be >= 1".into()));
        }
        if k == 0 || k > graph.n() {
            return Err(BanditError::BadParams(format!(
                "need 1 <= k <= n (k = {k}, n = {})",
                graph.n()
            )));
        }
        Ok(Self { graph, horizon, k })
    }
}

/// Revealed (slot, open?) pairs: for undirected graphs the slots with at
/// least one endpoint infected, for directed graphs the slots whose tail
/// is infected.
pub type Feedback = Vec<(usize, bool)>;

/// Computes the semi-bandit feedback revealed by an infected set.
pub fn feedback_for(g: &WeightedDigraph, open: &EdgeSet, infected: &SeedSet) -> Feedback {
    let mask = infected.mask(g.n());
    let mut fb = Vec::new();
    for slot in 0..g.num_slots() {
        let (u, v) = g.slot_endpoints(slot);
        let revealed = if g.directed() {
            mask[u]
        } else {
            mask[u] || mask[v]
        };
        if revealed {
            fb.push((slot, open.contains(slot)));
        }
    }
    fb
}

/// One recorded round.
#[derive(Debug, Clone)]
pub struct Round {
    pub adversary: EdgeSet,
    pub sources: SeedSet,
    pub reward: f64,
    pub feedback: Feedback,
}

/// Full record of one episode.
#[derive(Debug, Clone)]
pub struct EpisodeLog {
    pub rounds: Vec<Round>,
}

impl EpisodeLog {
    pub fn cumulative_reward(&self) -> f64 {
        self.rounds.iter().map(|r| r.reward).sum()
    }

    /// Line-oriented serialization:
    /// `t<TAB>adversary_edges<TAB>sources<TAB>reward<TAB>feedback`,
    /// edges as `src-dst` csv, feedback entries as `src-dst:0/1`.
    pub fn to_lines(&self, g: &WeightedDigraph) -> String {
        let mut out = String::new();
        for (t, r) in self.rounds.iter().enumerate() {
            let edges = r
                .adversary
                .iter()
                .map(|s| {
                    let (u, v) = g.slot_endpoints(s);
                    format!("{u}-{v}")
                })
                .collect::<Vec<_>>()
                .join(",");
            let sources = r
                .sources
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",");
            let feedback = r
                .feedback
                .iter()
                .map(|&(s, open)| {
                    let (u, v) = g.slot_endpoints(s);
                    format!("{u}-{v}:{}", open as u8)
                })
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.16e}\t{}\n",
                t + 1,
                edges,
                sources,
                r.reward,
                feedback
            ));
        }
        out
    }
}

/// Regret accounting over one or more episodes that share an adversary
/// distribution. `oracle` records how the best fixed set was found:
/// "exact" (singleton scan, k = 1) or "greedy" (k > 1).
#[derive(Debug, Clone, serde::Serialize)]
pub struct RegretReport {
    pub realized: f64,
    pub best_fixed: f64,
    pub regret: f64,
    pub pseudo_regret_mean: f64,
    pub pseudo_regret_stderr: f64,
    pub alpha: f64,
    pub scaled_regret: f64,
    pub oracle: &'static str,
}

/// An oblivious adversary: its edge-set sequence is a function of its own
/// construction parameters and seed only. The interface receives no player
/// information, enforcing obliviousness structurally.
pub trait Adversary {
    fn next_edge_set(&mut self) -> EdgeSet;
    /// Fixed-length strategies report their length so the harness can
    /// reject horizon mismatches.
    fn fixed_horizon(&self) -> Option<usize> {
        None
    }
}

/// A player strategy. The harness calls, per round: `begin_round`, then k
/// times `next_source` followed by `observe` with the marginal newly
/// infected vertices and the cumulative revealed feedback, then
/// `end_round`.
pub trait Player {
    fn label(&self) -> String;
    fn begin_round(&mut self, _t: usize) {}
    fn next_source(&mut self) -> usize;
    fn observe(&mut self, marginal: &[usize], feedback: &Feedback) -> Result<(), BanditError>;
    fn end_round(&mut self) {}
    /// Players hard-wired to a source count report it for validation.
    fn sources_per_round(&self) -> Option<usize> {
        None
    }
}
