//! The round loop and regret accounting.

use crate::graph::{reach, EdgeSet, SeedSet, WeightedDigraph};

use super::{
    feedback_for, Adversary, BanditError, EpisodeLog, GameConfig, Player, RegretReport, Round,
};

/// Plays one episode: per round the adversary commits an edge set, the
/// player picks k sources sequentially — observing after each pick the
/// marginal newly infected vertices and the cumulative revealed feedback —
/// and earns the infected fraction.
pub fn play_episode(
    config: &GameConfig,
    adversary: &mut dyn Adversary,
    player: &mut dyn Player,
) -> Result<EpisodeLog, BanditError> {
    if let Some(pk) = player.sources_per_round() {
        if pk != config.k {
            return Err(BanditError::SourceCountMismatch {
                player_k: pk,
                k: config.k,
            });
        }
    }
    if let Some(len) = adversary.fixed_horizon() {
        if len != config.horizon {
            return Err(BanditError::SequenceLength {
                len,
                t: config.horizon,
            });
        }
    }
    let g = &config.graph;
    let n = g.n();
    let mut rounds = Vec::with_capacity(config.horizon);
    for t in 0..config.horizon {
        let open = adversary.next_edge_set();
        player.begin_round(t);
        let mut picked = SeedSet::empty();
        let mut infected = SeedSet::empty();
        for _ in 0..config.k {
            let v = player.next_source();
            if v >= n {
                return Err(BanditError::BadParams(format!(
                    "player picked vertex {v}, graph has {n}"
                )));
            }
            picked = picked.with(v);
            let now = reach(g, &open, &picked);
            let marginal: Vec<usize> = now.iter().filter(|v| !infected.contains(*v)).collect();
            let fb = feedback_for(g, &open, &now);
            player.observe(&marginal, &fb)?;
            infected = now;
        }
        player.end_round();
        let reward = infected.len() as f64 / n as f64;
        let feedback = feedback_for(g, &open, &infected);
        rounds.push(Round {
            adversary: open,
            sources: picked,
            reward,
            feedback,
        });
    }
    Ok(EpisodeLog { rounds })
}

/// Per-round reward of every singleton source against a fixed open set.
/// For undirected graphs this is a connected-components pass; for directed
/// graphs a reachability sweep per vertex.
pub fn singleton_rewards(g: &WeightedDigraph, open: &EdgeSet) -> Vec<f64> {
    let n = g.n();
    if !g.directed() {
        // Union-find over the open slots.
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for slot in open.iter() {
            let (u, v) = g.slot_endpoints(slot);
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
            }
        }
        let mut size = vec![0usize; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            size[r] += 1;
        }
        (0..n)
            .map(|v| {
                let r = find(&mut parent, v);
                size[r] as f64 / n as f64
            })
            .collect()
    } else {
        (0..n)
            .map(|v| reach(g, open, &SeedSet::singleton(v)).len() as f64 / n as f64)
            .collect()
    }
}

/// Builds a [`RegretReport`] from episodes sharing one adversary
/// distribution. The best fixed set is found exactly by singleton scan for
/// k = 1 and by greedy over the recorded sequences for k > 1 (flagged via
/// `oracle`). Pseudo-regret follows the max-of-expectation convention:
/// replication means are taken before maximizing over the comparator.
pub fn regret_report(
    logs: &[EpisodeLog],
    config: &GameConfig,
    alpha: f64,
) -> Result<RegretReport, BanditError> {
    if logs.is_empty() {
        return Err(BanditError::EmptyLogs);
    }
    let g = &config.graph;
    let n = g.n();
    let r = logs.len() as f64;
    let realized_per: Vec<f64> = logs.iter().map(|l| l.cumulative_reward()).collect();
    let realized = realized_per.iter().sum::<f64>() / r;

    // Cumulative reward of each fixed comparator set, per episode.
    let (oracle, best_per): (&'static str, Vec<f64>) = if config.k == 1 {
        let mut totals = vec![vec![0.0; n]; logs.len()];
        for (li, log) in logs.iter().enumerate() {
            for round in &log.rounds {
                let rewards = singleton_rewards(g, &round.adversary);
                for v in 0..n {
                    totals[li][v] += rewards[v];
                }
            }
        }
        let means: Vec<f64> = (0..n)
            .map(|v| totals.iter().map(|t| t[v]).sum::<f64>() / r)
            .collect();
        let best = (0..n)
            .max_by(|&a, &b| means[a].partial_cmp(&means[b]).unwrap())
            .unwrap();
        ("exact", totals.iter().map(|t| t[best]).collect())
    } else {
        // Greedy comparator over the recorded sequences: maximize the mean
        // cumulative reward of a fixed k-set.
        let eval = |s: &SeedSet| -> f64 {
            logs.iter()
                .flat_map(|l| &l.rounds)
                .map(|round| reach(g, &round.adversary, s).len() as f64 / n as f64)
                .sum::<f64>()
                / r
        };
        let mut sel = SeedSet::empty();
        for _ in 0..config.k {
            let mut best: Option<(f64, usize)> = None;
            for v in 0..n {
                if sel.contains(v) {
                    continue;
                }
                let val = eval(&sel.with(v));
                if best.map_or(true, |(bv, _)| val > bv) {
                    best = Some((val, v));
                }
            }
            sel = sel.with(best.unwrap().1);
        }
        let per: Vec<f64> = logs
            .iter()
            .map(|l| {
                l.rounds
                    .iter()
                    .map(|round| reach(g, &round.adversary, &sel).len() as f64 / n as f64)
                    .sum::<f64>()
            })
            .collect();
        ("greedy", per)
    };

    let best_fixed = best_per.iter().sum::<f64>() / r;
    let regret = best_fixed - realized;
    // Per-episode gap of the chosen comparator; its mean equals the
    // pseudo-regret because the comparator is fixed across episodes.
    let gaps: Vec<f64> = best_per
        .iter()
        .zip(&realized_per)
        .map(|(b, x)| b - x)
        .collect();
    let mean = gaps.iter().sum::<f64>() / r;
    let stderr = if logs.len() > 1 {
        let var = gaps.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
        (var / r).sqrt()
    } else {
        0.0
    };
    Ok(RegretReport {
        realized,
        best_fixed,
        regret,
        pseudo_regret_mean: mean,
        pseudo_regret_stderr: stderr,
        alpha,
        scaled_regret: alpha * best_fixed - realized,
        oracle,
    })
}
