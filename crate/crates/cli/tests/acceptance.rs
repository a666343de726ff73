//! Acceptance suite: ten end-to-end criteria, one pass/fail line each
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::process::Command;

use contagion::bandit::{
    self, play_episode, rates, regret_report, singleton_rewards, symmetric_loss_estimate,
    Adversary, CliqueAdversary, EpisodeLog, Exp3Player, GameConfig, IidBernoulliAdversary,
    LossKind, OnlineGreedyPlayer, OsmdPlayer, Player, SourceSinkAdversary,
};
use contagion::bounds;
use contagion::graph::{generators, infected_fraction, lt_weights_gamma, reach};
use contagion::maximize::{
    exhaustive_maximize, greedy_maximize, lazy_greedy_maximize, BoundKind, BoundObjective,
    McInfluence,
};
use contagion::{
    exact_influence, EdgeSet, ModelKind, SeedSet, SimulateError, TriggerModel, WeightedDigraph,
};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const TOL: f64 = 1e-10;

fn pass(criterion: usize, what: &str) {
    println!("criterion {criterion}: pass — {what}");
}

fn fail(criterion: usize, what: &str, detail: String) -> ! {
    println!("criterion {criterion}: FAIL — {what}: {detail}");
    panic!("criterion {criterion} failed: {detail}");
}

// ---------------------------------------------------------------------------
// Shared random-instance helpers
// ---------------------------------------------------------------------------

fn random_lt(n: usize, seed: u64) -> TriggerModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density = 2.5 / n as f64;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random::<f64>() < density {
                edges.push((i, j, rng.random::<f64>().max(1e-3)));
            }
        }
    }
    let mut colsum = vec![0.0; n];
    for &(_, j, w) in &edges {
        colsum[j] += w;
    }
    let target: Vec<f64> = (0..n).map(|_| 0.2 + 0.75 * rng.random::<f64>()).collect();
    for e in edges.iter_mut() {
        if colsum[e.1] > 0.0 {
            e.2 = (e.2 * target[e.1] / colsum[e.1]).min(1.0);
        }
    }
    let g = WeightedDigraph::directed_from_edges(n, &edges).unwrap();
    TriggerModel::new(g, ModelKind::LinearThreshold).unwrap()
}

fn random_seed_set(n: usize, rng: &mut ChaCha8Rng) -> SeedSet {
    loop {
        let mask: u32 = rng.random_range(1..(1u32 << n) - 1);
        let ids: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if !ids.is_empty() && ids.len() < n {
            return SeedSet::new(ids, n).unwrap();
        }
    }
}

// ---------------------------------------------------------------------------
// 1. Sandwich + DAG exactness
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_sandwich_and_dag_exactness() {
    let what = "sandwich ordering on 200 LT instances and DAG exactness on 100 DAGs";
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut checked = 0;
    let mut seed = 10_000u64;
    while checked < 200 {
        seed += 1;
        let n = 4 + (seed as usize % 7); // 4..=10
        let model = random_lt(n, seed);
        let a = random_seed_set(n, &mut rng);
        let exact = match exact_influence(&model, &a) {
            Ok(x) => x,
            Err(SimulateError::InstanceTooLarge { .. }) => continue,
        };
        let lb1 = bounds::lb_m(&model, &a, 1).unwrap();
        let lb2 = bounds::lb_m(&model, &a, 2).unwrap();
        let lb3 = bounds::lb_m(&model, &a, 3).unwrap();
        let ub_t = bounds::ub_truncated(&model, &a);
        let chain = [lb1, lb2, lb3, exact, ub_t];
        for w in chain.windows(2) {
            if w[0] > w[1] + TOL {
                fail(1, what, format!("seed {seed}: ordering violated {chain:?}"));
            }
        }
        if let Some(ub_n) = bounds::ub_neumann(&model, &a) {
            if ub_t > ub_n + TOL {
                fail(1, what, format!("seed {seed}: ub_trunc {ub_t} > ub_neumann {ub_n}"));
            }
        }
        checked += 1;
    }
    for inst in 0..100u64 {
        let n = 5 + (inst as usize % 8); // 5..=12
        let mut rng2 = ChaCha8Rng::seed_from_u64(20_000 + inst);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng2.random::<f64>() < 0.4 {
                    edges.push((i, j, rng2.random::<f64>().max(1e-3)));
                }
            }
        }
        let mut colsum = vec![0.0; n];
        for &(_, j, w) in &edges {
            colsum[j] += w;
        }
        for e in edges.iter_mut() {
            if colsum[e.1] > 1.0 {
                e.2 *= 0.95 / colsum[e.1];
            }
        }
        let g = WeightedDigraph::directed_from_edges(n, &edges).unwrap();
        let model = TriggerModel::new(g, ModelKind::LinearThreshold).unwrap();
        let a = random_seed_set(n, &mut rng);
        let exact = exact_influence(&model, &a).unwrap();
        let ub_t = bounds::ub_truncated(&model, &a);
        if (ub_t - exact).abs() > TOL {
            fail(1, what, format!("DAG {inst}: ub_trunc {ub_t} != exact {exact}"));
        }
    }
    pass(1, what);
}

// ---------------------------------------------------------------------------
// 2. Chain-star closed forms
// ---------------------------------------------------------------------------

#[test]
fn criterion_02_chain_star_example() {
    let what = "chain-star example: lb1 = 1.5 and oracle influence (n+4)/4";
    let n = 10;
    let mut edges = vec![(0, 1, 0.5)];
    for v in 2..n {
        edges.push((1, v, 0.5));
    }
    let g = WeightedDigraph::directed_from_edges(n, &edges).unwrap();
    let model = TriggerModel::new(g, ModelKind::LinearThreshold).unwrap();
    let a = SeedSet::singleton(0);
    let lb1 = bounds::lb_m(&model, &a, 1).unwrap();
    if lb1 != 1.5 {
        fail(2, what, format!("lb1 = {lb1}, want exactly 1.5"));
    }
    let exact = exact_influence(&model, &a).unwrap();
    let expected = (n as f64 + 4.0) / 4.0;
    if (exact - expected).abs() > 1e-12 {
        fail(2, what, format!("oracle influence = {exact}, want {expected}"));
    }
    pass(2, what);
}

// ---------------------------------------------------------------------------
// 3. Ratio theorem
// ---------------------------------------------------------------------------

#[test]
fn criterion_03_ratio_theorem() {
    let what = "ratio guarantees on 500 contractive LT instances";
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    let mut seed = 30_000u64;
    while checked < 500 {
        seed += 1;
        let n = 4 + (seed as usize % 6);
        let model = random_lt(n, seed);
        let a = random_seed_set(n, &mut rng);
        let (lambda, r1, r2) = bounds::ratio_guarantees(&model, &a);
        if lambda >= 1.0 {
            continue;
        }
        let (r1, r2) = (r1.unwrap(), r2.unwrap());
        let ub = match bounds::ub_neumann(&model, &a) {
            Some(u) => u,
            None => fail(3, what, format!("seed {seed}: lambda {lambda} < 1 but no Neumann value")),
        };
        let lb1 = bounds::lb_m(&model, &a, 1).unwrap();
        let lb2 = bounds::lb_m(&model, &a, 2).unwrap();
        if ub / lb1 > r1 + 1e-9 {
            fail(3, what, format!("seed {seed}: ub/lb1 = {} > {r1}", ub / lb1));
        }
        if ub / lb2 > r2 + 1e-9 {
            fail(3, what, format!("seed {seed}: ub/lb2 = {} > {r2}", ub / lb2));
        }
        checked += 1;
    }
    pass(3, what);
}

// ---------------------------------------------------------------------------
// 4. Submodularity / monotonicity
// ---------------------------------------------------------------------------

fn check_monotone_submodular(f: &[f64], m: usize, tol: f64) -> Result<(), String> {
    for t in 0u32..1 << m {
        let mut s = t;
        loop {
            for x in 0..m {
                if t >> x & 1 == 0 {
                    let xb = 1u32 << x;
                    let gain_t = f[(t | xb) as usize] - f[t as usize];
                    let gain_s = f[(s | xb) as usize] - f[s as usize];
                    if gain_t < -tol {
                        return Err(format!("monotonicity: gain {gain_t} at T = {t:b}"));
                    }
                    if gain_t > gain_s + tol {
                        return Err(format!(
                            "submodularity: gain {gain_t} at T = {t:b} exceeds {gain_s} at S = {s:b}"
                        ));
                    }
                }
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    Ok(())
}

#[test]
fn criterion_04_submodularity_exhaustive() {
    let what = "exhaustive monotone/submodular checks for lb objectives, per-round reward, and the sequence objective";
    use contagion::maximize::Objective;
    let n = 6;
    // Lower-bound objectives.
    for inst in 0..3u64 {
        let model = random_lt(n, 41_000 + inst);
        for kind in [BoundKind::Lb1, BoundKind::Lb2, BoundKind::Lb3, BoundKind::LbTrig] {
            let mut obj = BoundObjective { model: &model, kind };
            let f: Vec<f64> = (0u32..1 << n)
                .map(|mask| {
                    obj.eval(&SeedSet::new((0..n).filter(|&v| mask >> v & 1 == 1).collect(), n).unwrap())
                })
                .collect();
            if let Err(e) = check_monotone_submodular(&f, n, 1e-10) {
                fail(4, what, format!("{kind:?} instance {inst}: {e}"));
            }
        }
    }
    // Per-round reward as a function of the source set.
    let g = generators::complete(n, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let nslots = g.num_slots();
        let open = EdgeSet::from_slots(nslots, (0..nslots).filter(|_| rng.random::<f64>() < 0.4));
        let f: Vec<f64> = (0u32..1 << n)
            .map(|mask| {
                infected_fraction(
                    &g,
                    &open,
                    &SeedSet::new((0..n).filter(|&v| mask >> v & 1 == 1).collect(), n).unwrap(),
                )
            })
            .collect();
        if let Err(e) = check_monotone_submodular(&f, n, 1e-12) {
            fail(4, what, format!("per-round reward: {e}"));
        }
    }
    // Sequence objective over V^T, n = 3, T = 2 (9-element ground set).
    let g3 = generators::complete(3, false).unwrap();
    let seqs: Vec<(usize, usize)> = (0..9).map(|i| (i / 3, i % 3)).collect();
    for _ in 0..3 {
        let nslots = g3.num_slots();
        let opens: Vec<EdgeSet> = (0..2)
            .map(|_| EdgeSet::from_slots(nslots, (0..nslots).filter(|_| rng.random::<f64>() < 0.5)))
            .collect();
        let value = |mask: u32| -> f64 {
            let mut total = 0.0;
            for (t, open) in opens.iter().enumerate() {
                let picks: Vec<usize> = seqs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &(a, b))| if t == 0 { a } else { b })
                    .collect();
                total += infected_fraction(&g3, open, &SeedSet::new(picks, 3).unwrap());
            }
            total
        };
        let f: Vec<f64> = (0u32..1 << 9).map(value).collect();
        if let Err(e) = check_monotone_submodular(&f, 9, 1e-12) {
            fail(4, what, format!("sequence objective: {e}"));
        }
    }
    pass(4, what);
}

// ---------------------------------------------------------------------------
// 5. Greedy guarantee
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_greedy_guarantee() {
    let what = "greedy >= (1 - 1/e) * exhaustive for lb objectives, lazy == eager";
    let ratio = 1.0 - (-1.0f64).exp();
    let kinds = [BoundKind::Lb1, BoundKind::Lb2, BoundKind::Lb3, BoundKind::LbTrig];
    for inst in 0..100u64 {
        let n = 6 + (inst as usize % 7); // 6..=12
        let k = 1 + (inst as usize % 3);
        let model = random_lt(n, 51_000 + inst);
        let universe: Vec<usize> = (0..n).collect();
        let kind = kinds[inst as usize % kinds.len()];
        let mut obj = BoundObjective { model: &model, kind };
        let greedy = greedy_maximize(&mut obj, k, &universe).unwrap();
        let mut obj2 = BoundObjective { model: &model, kind };
        let lazy = lazy_greedy_maximize(&mut obj2, k, &universe).unwrap();
        for (a, b) in greedy.steps.iter().zip(&lazy.steps) {
            if a.vertex != b.vertex || a.objective_value != b.objective_value {
                fail(5, what, format!("instance {inst}: lazy trace diverged at vertex {}", b.vertex));
            }
        }
        let mut obj3 = BoundObjective { model: &model, kind };
        let (_, opt) = exhaustive_maximize(&mut obj3, k, &universe).unwrap();
        let got = greedy.final_value();
        if got < ratio * opt - 1e-9 {
            fail(5, what, format!("instance {inst}: greedy {got} < (1-1/e) * {opt}"));
        }
    }
    pass(5, what);
}

// ---------------------------------------------------------------------------
// 6. Loss-estimator exactness
// ---------------------------------------------------------------------------

#[test]
fn criterion_06_loss_estimator_exactness() {
    let what = "symmetric-loss unbiasedness and second moment by exact enumeration";
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in [3usize, 4, 5] {
        let g = generators::complete(n, false).unwrap();
        let nslots = g.num_slots();
        for draw in 0..50 {
            let mut p: Vec<f64> = (0..n).map(|_| 0.05 + rng.random::<f64>()).collect();
            let total: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= total);
            let open =
                EdgeSet::from_slots(nslots, (0..nslots).filter(|_| rng.random::<f64>() < 0.5));
            // Component labels and per-source infected masks.
            let comp: Vec<Vec<bool>> = (0..n)
                .map(|s| reach(&g, &open, &SeedSet::singleton(s)).mask(n))
                .collect();
            let est: Vec<Vec<f64>> = (0..n)
                .map(|s| symmetric_loss_estimate(&p, s, &comp[s]))
                .collect();
            // E_{S ~ p}[est_i] = true loss of i.
            for i in 0..n {
                let truth =
                    (0..n).filter(|&j| j != i && !comp[i][j]).count() as f64 / n as f64;
                let mean: f64 = (0..n).map(|s| p[s] * est[s][i]).sum();
                if (mean - truth).abs() > 1e-12 {
                    fail(6, what, format!("n={n} draw {draw}: E[est_{i}] = {mean} != {truth}"));
                }
            }
            // E_{I ~ p}[est_I] = loss of the actual source.
            for s in 0..n {
                let truth = (0..n).filter(|&j| j != s && !comp[s][j]).count() as f64 / n as f64;
                let mean: f64 = (0..n).map(|i| p[i] * est[s][i]).sum();
                if (mean - truth).abs() > 1e-12 {
                    fail(6, what, format!("n={n} draw {draw}: E_I[est] = {mean} != {truth} for source {s}"));
                }
            }
            // Second moment over both draws.
            let m2: f64 = (0..n)
                .map(|s| p[s] * (0..n).map(|i| p[i] * est[s][i] * est[s][i]).sum::<f64>())
                .sum();
            if m2 > (n as f64 + 1.0) / 2.0 + 1e-12 {
                fail(6, what, format!("n={n} draw {draw}: second moment {m2} > (n+1)/2"));
            }
        }
    }
    pass(6, what);
}

// ---------------------------------------------------------------------------
// 7. Regret upper bounds at desk scale
// ---------------------------------------------------------------------------

enum AdvSpec {
    Iid(f64),
    Clique { c: f64, delta: f64 },
    SourceSink { c: f64, d: f64, delta: f64 },
}

fn run_replications(
    game: &GameConfig,
    adv: &AdvSpec,
    mk_player: &(dyn Fn(u64) -> Box<dyn Player> + Sync),
    seeds: usize,
) -> Vec<EpisodeLog> {
    (0..seeds)
        .into_par_iter()
        .map(|e| {
            let aseed = 70_000 + 2 * e as u64;
            let pseed = 70_001 + 2 * e as u64;
            let mut adversary: Box<dyn Adversary> = match adv {
                AdvSpec::Iid(p) => Box::new(IidBernoulliAdversary::new(&game.graph, *p, aseed).unwrap()),
                AdvSpec::Clique { c, delta } => {
                    Box::new(CliqueAdversary::new(&game.graph, *c, *delta, None, aseed).unwrap())
                }
                AdvSpec::SourceSink { c, d, delta } => Box::new(
                    SourceSinkAdversary::new(&game.graph, *c, *d, *delta, None, aseed).unwrap(),
                ),
            };
            let mut player = mk_player(pseed);
            play_episode(game, adversary.as_mut(), player.as_mut()).unwrap()
        })
        .collect()
}

#[test]
fn criterion_07_regret_upper_bounds() {
    let what = "measured pseudo-regret within the theorem bounds (3 sigma slack)";
    let n = 20;
    let t = 5000;
    let seeds = 50;
    let alpha = 1.0 - (-1.0f64).exp();
    let und = generators::complete(n, false).unwrap();
    let dir = generators::complete(n, true).unwrap();
    let c = 2.0 * n as f64 / 3.0;
    let delta = bandit::clique_delta_recipe(n, t, c).clamp(0.0, 0.999);
    let und_advs = [AdvSpec::Iid(0.1), AdvSpec::Clique { c, delta }];

    // Exp3 with the symmetric loss.
    let game = GameConfig::new(und.clone(), t, 1).unwrap();
    let bound = rates::exp3_sym_bound(n, t);
    for (ai, adv) in und_advs.iter().enumerate() {
        let logs = run_replications(&game, adv, &|s| {
            Box::new(Exp3Player::new(n, LossKind::Symmetric, rates::exp3_sym_eta(n, t), s))
        }, seeds);
        let rep = regret_report(&logs, &game, alpha).unwrap();
        if rep.pseudo_regret_mean > bound + 3.0 * rep.pseudo_regret_stderr {
            fail(7, what, format!(
                "exp3-sym adversary {ai}: pseudo-regret {} > bound {bound}",
                rep.pseudo_regret_mean
            ));
        }
    }

    // OSMD with the symmetric loss.
    let bound = rates::osmd_sym_bound(n, t);
    for (ai, adv) in und_advs.iter().enumerate() {
        let logs = run_replications(&game, adv, &|s| {
            Box::new(OsmdPlayer::new(n, LossKind::Symmetric, rates::osmd_sym_eta(t), s))
        }, seeds);
        let rep = regret_report(&logs, &game, alpha).unwrap();
        if rep.pseudo_regret_mean > bound + 3.0 * rep.pseudo_regret_stderr {
            fail(7, what, format!(
                "osmd-sym adversary {ai}: pseudo-regret {} > bound {bound}",
                rep.pseudo_regret_mean
            ));
        }
    }

    // OSMD with the node loss, directed graph, source/sink adversary.
    let game_dir = GameConfig::new(dir, t, 1).unwrap();
    let cd = (n as f64 / 6.0, 2.0 * n as f64 / 3.0);
    let delta_dir = bandit::source_sink_delta_recipe(n, t, cd.0, cd.1).clamp(0.0, 0.999);
    let bound = rates::osmd_node_bound(n, t);
    let logs = run_replications(
        &game_dir,
        &AdvSpec::SourceSink { c: cd.0, d: cd.1, delta: delta_dir },
        &|s| Box::new(OsmdPlayer::new(n, LossKind::Node, rates::osmd_node_eta(t), s)),
        seeds,
    );
    let rep = regret_report(&logs, &game_dir, alpha).unwrap();
    if rep.pseudo_regret_mean > bound + 3.0 * rep.pseudo_regret_stderr {
        fail(7, what, format!(
            "osmd-node: pseudo-regret {} > bound {bound}",
            rep.pseudo_regret_mean
        ));
    }

    // Online greedy, k = 3, scaled pseudo-regret.
    let k = 3;
    let game_k = GameConfig::new(und, t, k).unwrap();
    let bound = rates::online_greedy_sym_bound(n, t, k);
    let logs = run_replications(
        &game_k,
        &AdvSpec::Clique { c, delta },
        &|s| Box::new(OnlineGreedyPlayer::osmd_symmetric(n, k, rates::osmd_sym_eta(t), s)),
        seeds,
    );
    let rep = regret_report(&logs, &game_k, alpha).unwrap();
    if rep.scaled_regret > bound + 3.0 * rep.pseudo_regret_stderr {
        fail(7, what, format!(
            "online-greedy k=3: scaled pseudo-regret {} > bound {bound}",
            rep.scaled_regret
        ));
    }
    pass(7, what);
}

// ---------------------------------------------------------------------------
// 8. Gap lemmas
// ---------------------------------------------------------------------------

fn gap_mc(
    g: &WeightedDigraph,
    adversary: &mut dyn Adversary,
    i: usize,
    j: usize,
    rounds: usize,
) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..rounds {
        let open = adversary.next_edge_set();
        let x = singleton_rewards(g, &open);
        let d = x[i] - x[j];
        sum += d;
        sumsq += d * d;
    }
    let mean = sum / rounds as f64;
    let var = (sumsq / rounds as f64 - mean * mean).max(0.0);
    (mean, (var / rounds as f64).sqrt())
}

#[test]
fn criterion_08_gap_lemmas() {
    let what = "per-round gap means match the closed forms over 1e6 rounds (4 sigma)";
    let rounds = 1_000_000;

    let n = 10;
    let (c, delta) = (2.0, 0.1);
    let g = generators::complete(n, false).unwrap();
    let mut adv = CliqueAdversary::new(&g, c, delta, Some(0), 88_001).unwrap();
    let (mean, stderr) = gap_mc(&g, &mut adv, 0, 5, rounds);
    let theory = (n as f64 - 2.0) * c * c * (1.0 - delta) * delta / (n as f64).powi(3);
    if (mean - theory).abs() > 4.0 * stderr {
        fail(8, what, format!("clique: mean {mean} vs theory {theory} (stderr {stderr})"));
    }

    let n = 6;
    let (c, d, delta) = (1.0, 2.0, 0.5);
    let g = generators::complete(n, true).unwrap();
    let mut adv = SourceSinkAdversary::new(&g, c, d, delta, Some(0), 88_002).unwrap();
    let (mean, stderr) = gap_mc(&g, &mut adv, 0, 3, rounds);
    let theory = (n as f64 - 1.0) * c * d * delta / (n as f64).powi(3);
    if (mean - theory).abs() > 4.0 * stderr {
        fail(8, what, format!("source/sink: mean {mean} vs theory {theory} (stderr {stderr})"));
    }
    pass(8, what);
}

// ---------------------------------------------------------------------------
// 9. Qualitative reproduction at reduced scale
// ---------------------------------------------------------------------------

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx.sqrt() * vy.sqrt())
}

#[test]
fn criterion_09_qualitative_reproduction() {
    let what = "gamma sweep closes the bound gap (Spearman < -0.8) and greedy runtimes order lb1 < lb2 < ub_trunc < mc";
    // (a) On each topology, sweep gamma_min upward; the gap between the
    // Neumann upper bound and lb2 must fall with the sweep index.
    let topologies: Vec<(&str, WeightedDigraph)> = vec![
        ("er", generators::erdos_renyi_directed(100, 0.02, 91).unwrap()),
        ("pa", generators::preferential_attachment(100, 10, 3, 92).unwrap()),
        ("grid", generators::grid_2d(10, 10).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (name, g) in &topologies {
        let seeds: Vec<usize> = {
            let mut s = std::collections::BTreeSet::new();
            while s.len() < 10 {
                s.insert(rng.random_range(0..g.n()));
            }
            s.into_iter().collect()
        };
        let a = SeedSet::new(seeds, g.n()).unwrap();
        let mut idx = Vec::new();
        let mut gaps = Vec::new();
        for i in 0..33 {
            let gmin = 0.5 + i as f64 * 0.0075;
            let model = lt_weights_gamma(g, gmin, 0.8, 900 + i).unwrap();
            let ub = bounds::ub_neumann(&model, &a)
                .unwrap_or_else(|| bounds::ub_truncated(&model, &a));
            let lb = bounds::lb_m(&model, &a, 2).unwrap();
            idx.push(i as f64);
            gaps.push(ub - lb);
        }
        let rho = spearman(&idx, &gaps);
        if rho >= -0.8 {
            fail(9, what, format!("{name}: Spearman(index, gap) = {rho} >= -0.8"));
        }
    }

    // (b) Greedy runtime ordering on the ER topology.
    let model = lt_weights_gamma(&topologies[0].1, 0.5, 0.8, 93).unwrap();
    let universe: Vec<usize> = (0..model.graph.n()).collect();
    let k = 5;
    let timed = |label: &str, f: &mut dyn FnMut()| -> (String, f64) {
        let t0 = std::time::Instant::now();
        f();
        (label.to_string(), t0.elapsed().as_secs_f64())
    };
    let mut times = Vec::new();
    for kind in [BoundKind::Lb1, BoundKind::Lb2, BoundKind::UbTrunc] {
        let mut obj = BoundObjective { model: &model, kind };
        times.push(timed(&format!("{kind:?}"), &mut || {
            greedy_maximize(&mut obj, k, &universe).unwrap();
        }));
    }
    {
        let mut obj = McInfluence::new(&model, 1000, 94);
        times.push(timed("mc", &mut || {
            greedy_maximize(&mut obj, k, &universe).unwrap();
        }));
    }
    for w in times.windows(2) {
        if w[0].1 >= w[1].1 {
            fail(9, what, format!(
                "runtime ordering violated: {} took {:.4}s >= {} at {:.4}s",
                w[0].0, w[0].1, w[1].0, w[1].1
            ));
        }
    }
    pass(9, what);
}

// ---------------------------------------------------------------------------
// 10. Determinism of the command-line tool
// ---------------------------------------------------------------------------

/// Wall-clock columns (`millis`, `scaled_runtime`) are hardware noise and
/// can never reproduce byte-for-byte; blank them before comparing so the
/// check covers every stochastic quantity but not the clock.
fn mask_timing_columns(bytes: Vec<u8>) -> Vec<u8> {
    let Ok(text) = String::from_utf8(bytes.clone()) else {
        return bytes;
    };
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return bytes;
    };
    let cols: Vec<&str> = header.split(',').collect();
    let timing: Vec<usize> = cols
        .iter()
        .enumerate()
        .filter(|(_, c)| **c == "millis" || **c == "scaled_runtime")
        .map(|(i, _)| i)
        .collect();
    if timing.is_empty() {
        return bytes;
    }
    let mut out = String::from(header);
    out.push('\n');
    for line in lines {
        let mut fields: Vec<String> = line.split(',').map(str::to_string).collect();
        for &i in &timing {
            if i < fields.len() {
                fields[i] = "masked".into();
            }
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

#[test]
fn criterion_10_cli_determinism() {
    let what = "every subcommand emits byte-identical output serially and in parallel";
    let bin = env!("CARGO_BIN_EXE_contagion");
    let base = std::env::temp_dir().join(format!("contagion-accept-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&base);
    std::fs::create_dir_all(&base).unwrap();

    let cfg_common = "family = grid\nrows = 6\ncols = 6\nweights = gamma\ngamma_min = 0.4\ngamma_max = 0.8\nseeds = 0,7,14\nk = 2\nobjectives = lb1,lb2,mc\nreplications = 2000\ngamma_steps = 5\n";
    let cfg_bandit = "family = complete\nn = 10\nadversary = clique\nc = 4\ndelta = 0.2\nplayer = osmd-sym\nhorizon = 300\nepisodes = 8\nlog_episodes = true\n";
    let cfg_path = base.join("study.cfg");
    std::fs::write(&cfg_path, cfg_common).unwrap();
    let bandit_path = base.join("bandit.cfg");
    std::fs::write(&bandit_path, cfg_bandit).unwrap();

    let runs: Vec<(&str, Vec<String>)> = vec![
        ("bound", vec!["bound".into(), "--config".into(), cfg_path.display().to_string(), "--seed".into(), "5".into()]),
        ("maximize", vec!["maximize".into(), "--config".into(), cfg_path.display().to_string(), "--seed".into(), "5".into()]),
        ("bandit", vec!["bandit".into(), "--config".into(), bandit_path.display().to_string(), "--seed".into(), "5".into()]),
        ("generate", vec!["generate".into(), "--config".into(), cfg_path.display().to_string(), "--seed".into(), "5".into()]),
        ("oracle-check", vec!["oracle-check".into()]),
    ];
    for (name, args) in &runs {
        let mut outputs = Vec::new();
        for threads in ["1", "4"] {
            let out_dir = base.join(format!("{name}-t{threads}"));
            let status = Command::new(bin)
                .args(args)
                .arg("--out")
                .arg(&out_dir)
                .arg("--threads")
                .arg(threads)
                .output()
                .unwrap();
            if !status.status.success() {
                fail(10, what, format!(
                    "{name} --threads {threads} exited with {:?}: {}",
                    status.status.code(),
                    String::from_utf8_lossy(&status.stderr)
                ));
            }
            let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(&out_dir)
                .map(|rd| {
                    rd.filter_map(|e| e.ok())
                        .map(|e| {
                            (
                                e.file_name().to_string_lossy().into_owned(),
                                mask_timing_columns(std::fs::read(e.path()).unwrap()),
                            )
                        })
                        .collect()
                })
                .unwrap_or_default();
            files.sort();
            outputs.push(files);
        }
        if outputs[0] != outputs[1] {
            fail(10, what, format!("{name}: serial and parallel outputs differ"));
        }
        if *name == "oracle-check" && outputs[0].is_empty() {
            // oracle-check writes nothing; determinism holds trivially via
            // its exit status, which both runs to reach here.
            continue;
        }
        if outputs[0].is_empty() {
            fail(10, what, format!("{name}: produced no output files"));
        }
    }
    let _ = std::fs::remove_dir_all(&base);
    pass(10, what);
}
