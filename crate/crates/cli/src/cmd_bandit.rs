//! `bandit`: plays R replications of the adversarial influence game,
//! aggregates a regret report, and emits a per-round cumulative-regret
//! curve with the matching theoretical bound overlay.

use std::fmt::Write as _;

use clap::Args;
use contagion::bandit::{
    self, play_episode, rates, regret_report, Adversary, CliqueAdversary, EpisodeLog,
    Exp3Player, FixedPlayer, GameConfig, IidBernoulliAdversary, LossKind, OnlineGreedyPlayer,
    OsmdPlayer, Player, SourceSinkAdversary, UniformRandomPlayer,
};
use contagion::graph::reach;
use contagion::{EdgeSet, SeedSet};
use rayon::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::model_spec;
use crate::{derive_seed, Common};

#[derive(Args)]
pub struct BanditArgs {
    #[command(flatten)]
    common: Common,
}

pub fn run(args: BanditArgs) -> Result<(), CliError> {
    crate::init_threads(args.common.threads)?;
    let cfg = ExperimentConfig::load_optional(args.common.config.as_deref())?;
    let master = args.common.seed.or(cfg.parse("seed")?).unwrap_or(0);

    let graph = model_spec::build_graph(&cfg)?;
    let n = graph.n();
    let horizon: usize = cfg
        .parse("horizon")?
        .ok_or_else(|| CliError::validation("config key `horizon` is required"))?;
    let k: usize = cfg.parse_or("k", 1)?;
    let episodes: usize = cfg.parse_or("episodes", 1)?;
    let alpha: f64 = cfg.parse_or("alpha", 1.0 - (-1.0f64).exp())?;
    let player_name = cfg.raw("player").unwrap_or("exp3-sym").to_string();
    let game = GameConfig::new(graph, horizon, k)?;

    // Episodes are independent; the e-th one derives its adversary and
    // player seeds from (master, e), so scheduling order cannot matter.
    let logs: Vec<EpisodeLog> = (0..episodes)
        .into_par_iter()
        .map(|e| -> Result<EpisodeLog, CliError> {
            let mut adversary =
                build_adversary(&cfg, &game, derive_seed(master, 2 * e as u64))?;
            let mut player = build_player(
                &cfg,
                &player_name,
                n,
                horizon,
                k,
                derive_seed(master, 2 * e as u64 + 1),
            )?;
            Ok(play_episode(&game, adversary.as_mut(), player.as_mut())?)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let report = regret_report(&logs, &game, alpha)?;
    let theory = theory_bound(&player_name, n, horizon, k);

    std::fs::create_dir_all(&args.common.out)?;
    let mut json = serde_json::to_value(&report).expect("report serializes");
    let obj = json.as_object_mut().unwrap();
    obj.insert("player".into(), player_name.clone().into());
    obj.insert("n".into(), n.into());
    obj.insert("horizon".into(), horizon.into());
    obj.insert("k".into(), k.into());
    obj.insert("episodes".into(), episodes.into());
    obj.insert("theory_bound".into(), serde_json::json!(theory));
    let report_path = args.common.out.join("regret.json");
    std::fs::write(
        &report_path,
        serde_json::to_string_pretty(&json).map_err(|e| CliError::runtime(e.to_string()))?,
    )?;

    let curve_path = args.common.out.join("regret_curve.csv");
    std::fs::write(&curve_path, regret_curve(&logs, &game, &player_name)?)?;

    if cfg.bool_or("log_episodes", false)? {
        let log_path = args.common.out.join("episodes.log");
        std::fs::write(&log_path, logs[0].to_lines(&game.graph))?;
    }
    println!("wrote {} and {}", report_path.display(), curve_path.display());
    Ok(())
}

fn build_adversary(
    cfg: &ExperimentConfig,
    game: &GameConfig,
    seed: u64,
) -> Result<Box<dyn Adversary>, CliError> {
    let name = cfg.raw("adversary").unwrap_or("empty");
    let n = game.graph.n();
    match name {
        "empty" => Ok(Box::new(bandit::FixedSequenceAdversary::new(vec![
            EdgeSet::empty(
                game.graph.num_slots()
            );
            game.horizon
        ]))),
        "iid" => {
            let p = cfg.parse_or("open_prob", 0.5f64)?;
            Ok(Box::new(IidBernoulliAdversary::new(&game.graph, p, seed)?))
        }
        "clique" => {
            let c = cfg.parse_or("c", 2.0 * n as f64 / 3.0)?;
            let delta = match cfg.parse::<f64>("delta")? {
                Some(d) => d,
                None => rates_clamped(bandit::clique_delta_recipe(n, game.horizon, c)),
            };
            let distinguished = parse_distinguished(cfg, n)?;
            Ok(Box::new(CliqueAdversary::new(
                &game.graph,
                c,
                delta,
                distinguished,
                seed,
            )?))
        }
        "source-sink" => {
            let c = cfg.parse_or("c", (n as f64 / 6.0).max(1.0))?;
            let d = cfg.parse_or("d", 2.0 * n as f64 / 3.0)?;
            let delta = match cfg.parse::<f64>("delta")? {
                Some(x) => x,
                None => rates_clamped(bandit::source_sink_delta_recipe(n, game.horizon, c, d)),
            };
            let distinguished = parse_distinguished(cfg, n)?;
            Ok(Box::new(SourceSinkAdversary::new(
                &game.graph,
                c,
                d,
                delta,
                distinguished,
                seed,
            )?))
        }
        other => Err(CliError::validation(format!(
            "unknown adversary `{other}` (empty, iid, clique, source-sink)"
        ))),
    }
}

/// The delta recipes scale like 1/sqrt(T) and can exceed 1 at small
/// horizons; clamp into the adversary's valid range.
fn rates_clamped(delta: f64) -> f64 {
    delta.clamp(0.0, 0.999)
}

fn parse_distinguished(cfg: &ExperimentConfig, n: usize) -> Result<Option<usize>, CliError> {
    match cfg.raw("distinguished") {
        None | Some("none") => Ok(None),
        Some(v) => {
            let i: usize = v
                .parse()
                .map_err(|_| CliError::validation(format!("bad `distinguished` value `{v}`")))?;
            if i >= n {
                return Err(CliError::validation(format!(
                    "distinguished vertex {i} out of range (n = {n})"
                )));
            }
            Ok(Some(i))
        }
    }
}

fn build_player(
    cfg: &ExperimentConfig,
    name: &str,
    n: usize,
    horizon: usize,
    k: usize,
    seed: u64,
) -> Result<Box<dyn Player>, CliError> {
    let eta = cfg.parse::<f64>("eta")?;
    let single = |name: &str| -> Result<(), CliError> {
        if k != 1 {
            return Err(CliError::validation(format!(
                "player `{name}` plays one source per round; use player = online-greedy for k > 1"
            )));
        }
        Ok(())
    };
    match name {
        "exp3-sym" => {
            single(name)?;
            let eta = eta.unwrap_or_else(|| rates::exp3_sym_eta(n, horizon));
            Ok(Box::new(Exp3Player::new(n, LossKind::Symmetric, eta, seed)))
        }
        "exp3-node" => {
            single(name)?;
            let eta = eta.unwrap_or_else(|| rates::exp3_sym_eta(n, horizon));
            Ok(Box::new(Exp3Player::new(n, LossKind::Node, eta, seed)))
        }
        "osmd-sym" => {
            single(name)?;
            let eta = eta.unwrap_or_else(|| rates::osmd_sym_eta(horizon));
            Ok(Box::new(OsmdPlayer::new(n, LossKind::Symmetric, eta, seed)))
        }
        "osmd-node" => {
            single(name)?;
            let eta = eta.unwrap_or_else(|| rates::osmd_node_eta(horizon));
            Ok(Box::new(OsmdPlayer::new(n, LossKind::Node, eta, seed)))
        }
        "online-greedy" => {
            let eta = eta.unwrap_or_else(|| rates::osmd_sym_eta(horizon));
            Ok(Box::new(OnlineGreedyPlayer::osmd_symmetric(n, k, eta, seed)))
        }
        "uniform" => {
            single(name)?;
            Ok(Box::new(UniformRandomPlayer::new(n, seed)))
        }
        "fixed" => {
            let set = cfg
                .usize_list("seeds")?
                .ok_or_else(|| CliError::validation("player `fixed` needs config `seeds`"))?;
            Ok(Box::new(FixedPlayer::new(set)))
        }
        other => Err(CliError::validation(format!(
            "unknown player `{other}` (exp3-sym, exp3-node, osmd-sym, osmd-node, online-greedy, uniform, fixed)"
        ))),
    }
}

fn theory_bound(player: &str, n: usize, t: usize, k: usize) -> Option<f64> {
    match player {
        "exp3-sym" => Some(rates::exp3_sym_bound(n, t)),
        "osmd-sym" => Some(rates::osmd_sym_bound(n, t)),
        "osmd-node" => Some(rates::osmd_node_bound(n, t)),
        "online-greedy" => Some(rates::online_greedy_sym_bound(n, t, k)),
        _ => None,
    }
}

/// Cumulative pseudo-regret per round against the best fixed comparator
/// (singleton scan for k = 1, greedy over the recorded sequences for
/// k > 1), averaged over episodes, with the theory bound evaluated at each
/// intermediate horizon.
fn regret_curve(
    logs: &[EpisodeLog],
    game: &GameConfig,
    player: &str,
) -> Result<String, CliError> {
    let g = &game.graph;
    let n = g.n();
    let horizon = game.horizon;
    let r = logs.len() as f64;

    let comparator = best_fixed_set(logs, game);
    let mut out =
        String::from("t,cumulative_reward_mean,comparator_reward_mean,pseudo_regret_mean,theory_bound\n");
    let mut cum_play = 0.0;
    let mut cum_best = 0.0;
    for t in 0..horizon {
        let mean_play: f64 = logs.iter().map(|l| l.rounds[t].reward).sum::<f64>() / r;
        let mean_best: f64 = logs
            .iter()
            .map(|l| reach(g, &l.rounds[t].adversary, &comparator).len() as f64 / n as f64)
            .sum::<f64>()
            / r;
        cum_play += mean_play;
        cum_best += mean_best;
        let bound = theory_bound(player, n, t + 1, game.k)
            .map_or("NA".to_string(), |b| format!("{b:.16e}"));
        writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{}",
            t + 1,
            cum_play,
            cum_best,
            cum_best - cum_play,
            bound
        )
        .unwrap();
    }
    Ok(out)
}

/// Best fixed source set by mean cumulative reward over the recorded
/// episodes (same convention as the regret report).
fn best_fixed_set(logs: &[EpisodeLog], game: &GameConfig) -> SeedSet {
    let g = &game.graph;
    let n = g.n();
    let eval = |s: &SeedSet| -> f64 {
        logs.iter()
            .flat_map(|l| &l.rounds)
            .map(|round| reach(g, &round.adversary, s).len() as f64)
            .sum::<f64>()
    };
    let mut sel = SeedSet::empty();
    for _ in 0..game.k {
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
        sel = sel.with(best.expect("k <= n").1);
    }
    sel
}
