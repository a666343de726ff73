//! `maximize`: greedy seed-set selection under each configured objective,
//! re-evaluating every selected set by Monte Carlo influence and emitting
//! per-objective traces plus a runtime table scaled to the lb1 row.

use std::fmt::Write as _;
use std::time::Instant;

use clap::Args;
use contagion::maximize::{
    greedy_maximize, lazy_greedy_maximize, BoundKind, BoundObjective, GreedyTrace, McInfluence,
};
use contagion::{estimate_influence, SeedSet, TriggerModel};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::model_spec;
use crate::{derive_seed, Common, Format};

#[derive(Args)]
pub struct MaximizeArgs {
    #[command(flatten)]
    common: Common,
    /// Seed-set size (overrides the config's `k`).
    #[arg(long)]
    k: Option<usize>,
    /// Use lazy greedy for the submodular bound objectives.
    #[arg(long)]
    lazy: bool,
}

struct StudyRow {
    label: String,
    trace: GreedyTrace,
    influence_mean: f64,
    influence_stderr: f64,
    millis: f64,
}

pub fn run(args: MaximizeArgs) -> Result<(), CliError> {
    crate::init_threads(args.common.threads)?;
    let cfg = ExperimentConfig::load_optional(args.common.config.as_deref())?;
    let master = args.common.seed.or(cfg.parse("seed")?).unwrap_or(0);
    let k = match args.k {
        Some(k) => k,
        None => cfg.parse_or("k", 1usize)?,
    };
    let replications = cfg.parse_or("replications", 10_000usize)?;
    let objectives = cfg
        .string_list("objectives")
        .unwrap_or_else(|| vec!["lb1".into(), "lb2".into(), "ub_trunc".into(), "mc".into()]);

    let graph = model_spec::build_graph(&cfg)?;
    let model = model_spec::build_model(&cfg, graph, master)?;
    let n = model.graph.n();
    let universe: Vec<usize> = (0..n).collect();

    let mut rows = Vec::new();
    for name in &objectives {
        let t0 = Instant::now();
        let trace = run_objective(name, &model, k, &universe, master, replications, args.lazy)?;
        let millis = t0.elapsed().as_secs_f64() * 1e3;
        let selected = trace.selected(n);
        let est = estimate_influence(&model, &selected, replications, derive_seed(master, 7));
        rows.push(StudyRow {
            label: name.clone(),
            trace,
            influence_mean: est.mean,
            influence_stderr: est.stderr,
            millis,
        });
    }

    std::fs::create_dir_all(&args.common.out)?;
    for row in &rows {
        let path = args.common.out.join(format!("trace_{}.csv", row.label));
        std::fs::write(&path, row.trace.to_csv())?;
    }
    let base_millis = rows
        .iter()
        .find(|r| r.label == "lb1")
        .or(rows.first())
        .map_or(1.0, |r| r.millis.max(1e-9));
    let path = args.common.out.join(match args.common.format {
        Format::Csv => "maximize.csv",
        Format::Json => "maximize.json",
    });
    let text = match args.common.format {
        Format::Csv => summary_csv(&rows, n, base_millis),
        Format::Json => summary_json(&rows, n, base_millis)?,
    };
    std::fs::write(&path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_objective(
    name: &str,
    model: &TriggerModel,
    k: usize,
    universe: &[usize],
    master: u64,
    replications: usize,
    lazy: bool,
) -> Result<GreedyTrace, CliError> {
    let bound_kind = match name {
        "lb1" => Some(BoundKind::Lb1),
        "lb2" => Some(BoundKind::Lb2),
        "lb3" => Some(BoundKind::Lb3),
        "lb_trig" => Some(BoundKind::LbTrig),
        "ub_trunc" => Some(BoundKind::UbTrunc),
        "mc" => None,
        other => {
            return Err(CliError::validation(format!(
                "unknown objective `{other}` (lb1, lb2, lb3, lb_trig, ub_trunc, mc)"
            )))
        }
    };
    match bound_kind {
        Some(kind) => {
            let mut obj = BoundObjective { model, kind };
            if lazy && obj_is_submodular(kind) {
                Ok(lazy_greedy_maximize(&mut obj, k, universe)?)
            } else {
                Ok(greedy_maximize(&mut obj, k, universe)?)
            }
        }
        None => {
            let mut obj = McInfluence::new(model, replications, derive_seed(master, 3));
            Ok(greedy_maximize(&mut obj, k, universe)?)
        }
    }
}

fn obj_is_submodular(kind: BoundKind) -> bool {
    !matches!(kind, BoundKind::UbTrunc)
}

fn selected_string(trace: &GreedyTrace, n: usize) -> String {
    let sel: SeedSet = trace.selected(n);
    sel.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn summary_csv(rows: &[StudyRow], n: usize, base_millis: f64) -> String {
    let mut out =
        String::from("objective,selected,final_value,influence_mean,influence_stderr,millis,scaled_runtime\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.label,
            selected_string(&r.trace, n),
            r.trace.final_value(),
            r.influence_mean,
            r.influence_stderr,
            r.millis,
            r.millis / base_millis,
        )
        .unwrap();
    }
    out
}

fn summary_json(rows: &[StudyRow], n: usize, base_millis: f64) -> Result<String, CliError> {
    let arr: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "objective": r.label,
                "selected": r.trace.selected(n).as_slice(),
                "final_value": r.trace.final_value(),
                "influence_mean": r.influence_mean,
                "influence_stderr": r.influence_stderr,
                "millis": r.millis,
                "scaled_runtime": r.millis / base_millis,
            })
        })
        .collect();
    serde_json::to_string_pretty(&arr).map_err(|e| CliError::runtime(format!("json: {e}")))
}
