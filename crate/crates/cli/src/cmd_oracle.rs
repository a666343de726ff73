//! `oracle-check`: batch-runs the brute-force equivalence suites against
//! small instances and prints one pass/fail line per suite. Any failure
//! exits with the acceptance code.

use clap::Args;
use contagion::bandit::{osmd_update, symmetric_loss_definitional, symmetric_loss_estimate};
use contagion::bounds;
use contagion::graph::generators;
use contagion::{
    exact_influence, GraphError, ModelKind, SeedSet, TriggerModel, WeightedDigraph,
};

use crate::derive_seed;
use crate::error::CliError;
use crate::Common;

#[derive(Args)]
pub struct OracleArgs {
    #[command(flatten)]
    common: Common,
    /// Largest instance size used by the randomized suites.
    #[arg(long, default_value_t = 6)]
    max_n: usize,
}

/// Deterministic uniform double in [0, 1) from a counter.
fn u01(seed: u64, ctr: u64) -> f64 {
    (derive_seed(seed, ctr) >> 11) as f64 / (1u64 << 53) as f64
}

pub fn run(args: OracleArgs) -> Result<(), CliError> {
    if args.max_n < 4 {
        return Err(CliError::validation("--max-n must be at least 4"));
    }
    let suites: Vec<(&str, Box<dyn Fn() -> Result<(), String>>)> = vec![
        ("chain-star closed forms", Box::new(chain_star_suite)),
        (
            "LT sandwich vs brute force",
            Box::new(move || sandwich_suite(args.max_n)),
        ),
        (
            "DAG exactness of truncated bound",
            Box::new(move || dag_suite(args.max_n)),
        ),
        ("LT validation rejects bad columns", Box::new(validation_suite)),
        ("symmetric loss closed form", Box::new(loss_suite)),
        ("loss estimators are unbiased", Box::new(unbiased_suite)),
        ("mirror-descent simplex invariant", Box::new(simplex_suite)),
    ];
    let mut failures = 0;
    for (name, suite) in &suites {
        match suite() {
            Ok(()) => println!("pass  {name}"),
            Err(msg) => {
                println!("FAIL  {name}: {msg}");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        return Err(CliError::acceptance(format!("{failures} oracle suite(s) failed")));
    }
    Ok(())
}

fn chain_star() -> TriggerModel {
    let mut edges = vec![(0, 1, 0.5)];
    for v in 2..10 {
        edges.push((1, v, 0.5));
    }
    let g = WeightedDigraph::directed_from_edges(10, &edges).unwrap();
    TriggerModel::new(g, ModelKind::LinearThreshold).unwrap()
}

fn chain_star_suite() -> Result<(), String> {
    let model = chain_star();
    let a = SeedSet::singleton(0);
    let close = |x: f64, want: f64, name: &str| {
        if (x - want).abs() <= 1e-12 {
            Ok(())
        } else {
            Err(format!("{name} = {x}, want {want}"))
        }
    };
    close(bounds::lb_m(&model, &a, 1).unwrap(), 1.5, "lb1")?;
    close(bounds::lb_m(&model, &a, 2).unwrap(), 3.5, "lb2")?;
    close(bounds::lb_trig(&model, &a), 3.5, "lb_trig")?;
    close(bounds::ub_truncated(&model, &a), 3.5, "ub_trunc")?;
    close(
        exact_influence(&model, &a).map_err(|e| e.to_string())?,
        3.5,
        "exact",
    )
}

/// Seeded LT instance: ER topology with gamma-scheme weights.
fn random_lt(n: usize, seed: u64) -> TriggerModel {
    let g = generators::erdos_renyi_directed(n, 0.5, seed).unwrap();
    contagion::graph::lt_weights_gamma(&g, 0.1, 0.9, derive_seed(seed, 1)).unwrap()
}

fn random_seeds(n: usize, seed: u64) -> SeedSet {
    let count = 1 + (derive_seed(seed, 10) as usize % (n - 1));
    let ids: Vec<usize> = (0..count)
        .map(|i| derive_seed(seed, 20 + i as u64) as usize % n)
        .collect();
    SeedSet::new(ids, n).unwrap()
}

fn sandwich_suite(max_n: usize) -> Result<(), String> {
    for inst in 0..100u64 {
        let n = 4 + (inst as usize % (max_n - 3));
        let model = random_lt(n, 40_000 + inst);
        let a = random_seeds(n, inst);
        let lb1 = bounds::lb_m(&model, &a, 1).unwrap();
        let lb2 = bounds::lb_m(&model, &a, 2).unwrap();
        let lb3 = bounds::lb_m(&model, &a, 3).unwrap();
        let exact = exact_influence(&model, &a).map_err(|e| e.to_string())?;
        let ub = bounds::ub_truncated(&model, &a);
        let chain = [lb1, lb2, lb3, exact, ub];
        for w in chain.windows(2) {
            if w[0] > w[1] + 1e-10 {
                return Err(format!("instance {inst}: ordering violated ({chain:?})"));
            }
        }
        if let Some(ubn) = bounds::ub_neumann(&model, &a) {
            if ub > ubn + 1e-10 {
                return Err(format!("instance {inst}: ub_trunc {ub} > ub_neumann {ubn}"));
            }
        }
    }
    Ok(())
}

fn dag_suite(max_n: usize) -> Result<(), String> {
    for inst in 0..50u64 {
        let n = 4 + (inst as usize % (max_n - 3));
        // Keep only forward edges of an ER draw: a DAG in vertex order.
        let full = generators::erdos_renyi_directed(n, 0.6, 50_000 + inst).unwrap();
        let forward: Vec<(usize, usize, f64)> = full
            .edges()
            .iter()
            .filter(|e| e.src < e.dst)
            .map(|e| (e.src, e.dst, 0.3 + 0.5 * u01(inst, e.src as u64 * 97 + e.dst as u64)))
            .collect();
        let g = WeightedDigraph::directed_from_edges(n, &forward).unwrap();
        let model = contagion::graph::lt_weights_gamma(&g, 0.2, 0.8, derive_seed(inst, 3))
            .map_err(|e| e.to_string())?;
        let a = SeedSet::singleton(0);
        let exact = exact_influence(&model, &a).map_err(|e| e.to_string())?;
        let ub = bounds::ub_truncated(&model, &a);
        if (ub - exact).abs() > 1e-10 {
            return Err(format!("instance {inst}: ub_trunc {ub} != exact {exact}"));
        }
    }
    Ok(())
}

/// A column sum pushed above 1 must be rejected by LT validation.
fn validation_suite() -> Result<(), String> {
    let g = WeightedDigraph::directed_from_edges(3, &[(0, 2, 0.7), (1, 2, 0.6)]).unwrap();
    match TriggerModel::new(g, ModelKind::LinearThreshold) {
        Err(GraphError::ColumnSumExceeded { vertex: 2, .. }) => Ok(()),
        Err(e) => Err(format!("wrong error: {e}")),
        Ok(_) => Err("column sum 1.3 was accepted".into()),
    }
}

/// Closed-form symmetric-loss estimate vs the definitional double sum, on
/// random component structures.
fn loss_suite() -> Result<(), String> {
    for inst in 0..200u64 {
        let n = 3 + (inst as usize % 4);
        let mut p: Vec<f64> = (0..n).map(|i| 0.05 + u01(inst, i as u64)).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        let labels: Vec<usize> = (0..n)
            .map(|i| derive_seed(inst, 100 + i as u64) as usize % 3)
            .collect();
        let source = derive_seed(inst, 7) as usize % n;
        let infected: Vec<bool> = (0..n).map(|i| labels[i] == labels[source]).collect();
        let a = symmetric_loss_estimate(&p, source, &infected);
        let b = symmetric_loss_definitional(&p, source, &labels);
        for i in 0..n {
            if (a[i] - b[i]).abs() > 1e-12 {
                return Err(format!(
                    "instance {inst}: estimate {} != definitional {} at vertex {i}",
                    a[i], b[i]
                ));
            }
        }
    }
    Ok(())
}

/// E_{S ~ p}[estimate_i] must equal the true loss (1/n) |{j : j not in
/// component(i)}|, by exact enumeration over the source draw.
fn unbiased_suite() -> Result<(), String> {
    for inst in 0..50u64 {
        let n = 3 + (inst as usize % 3);
        let mut p: Vec<f64> = (0..n).map(|i| 0.05 + u01(inst, 50 + i as u64)).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        let labels: Vec<usize> = (0..n)
            .map(|i| derive_seed(inst, 200 + i as u64) as usize % 2)
            .collect();
        for i in 0..n {
            let truth = (0..n)
                .filter(|&j| j != i && labels[j] != labels[i])
                .count() as f64
                / n as f64;
            let mut expect = 0.0;
            for s in 0..n {
                let infected: Vec<bool> = (0..n).map(|v| labels[v] == labels[s]).collect();
                expect += p[s] * symmetric_loss_estimate(&p, s, &infected)[i];
            }
            if (expect - truth).abs() > 1e-12 {
                return Err(format!(
                    "instance {inst}: E[estimate_{i}] = {expect}, true loss {truth}"
                ));
            }
        }
    }
    Ok(())
}

/// The mirror-descent update must return a strictly positive distribution
/// summing to 1 within 1e-12.
fn simplex_suite() -> Result<(), String> {
    for inst in 0..100u64 {
        let n = 2 + (inst as usize % 8);
        let mut p: Vec<f64> = (0..n).map(|i| 0.01 + u01(inst, 300 + i as u64)).collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= total);
        let loss: Vec<f64> = (0..n).map(|i| 5.0 * u01(inst, 400 + i as u64)).collect();
        let q = osmd_update(&p, &loss).map_err(|e| e.to_string())?;
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(format!("instance {inst}: sum = {sum}"));
        }
        if q.iter().any(|&x| !(x > 0.0)) {
            return Err(format!("instance {inst}: nonpositive mass in {q:?}"));
        }
    }
    Ok(())
}
