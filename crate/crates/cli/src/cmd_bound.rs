//! `bound`: computes every applicable influence bound plus a Monte Carlo
//! influence estimate, one output row per instance (several rows for a
//! gamma sweep).

use std::fmt::Write as _;

use clap::Args;
use contagion::bounds::{bound_report, BoundReport};
use contagion::graph::lt_weights_gamma;
use contagion::{estimate_influence, SeedSet, TriggerModel};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::model_spec;
use crate::{derive_seed, Common, Format};

#[derive(Args)]
pub struct BoundArgs {
    #[command(flatten)]
    common: Common,
    /// Edge-list file (overrides the config's graph source).
    #[arg(long)]
    graph: Option<std::path::PathBuf>,
    /// Seed set, e.g. `0,3,5` (overrides the config's `seeds`).
    #[arg(long)]
    seeds: Option<String>,
    /// `none` builds an edgeless graph (requires --n).
    #[arg(long)]
    edges: Option<String>,
    /// Vertex count for --edges none.
    #[arg(long)]
    n: Option<usize>,
}

struct Row {
    instance: String,
    gamma_min: Option<f64>,
    report: BoundReport,
    mc_mean: f64,
    mc_stderr: f64,
}

pub fn run(args: BoundArgs) -> Result<(), CliError> {
    crate::init_threads(args.common.threads)?;
    let cfg = ExperimentConfig::load_optional(args.common.config.as_deref())?;
    let master = args.common.seed.or(cfg.parse("seed")?).unwrap_or(0);
    let replications = cfg.parse_or("replications", 10_000usize)?;

    let seeds = parse_seed_list(args.seeds.as_deref().or(cfg.raw("seeds")))?;

    let mut rows = Vec::new();
    if let Some(edges) = &args.edges {
        if edges != "none" {
            return Err(CliError::validation("--edges only accepts `none`"));
        }
        let n = args
            .n
            .ok_or_else(|| CliError::validation("--edges none requires --n"))?;
        let g = contagion::WeightedDigraph::directed_from_edges(n, &[])?;
        let model = TriggerModel::new(g, contagion::ModelKind::LinearThreshold)?;
        rows.push(make_row("edgeless", None, &model, &seeds, replications, master)?);
    } else {
        let graph = match &args.graph {
            Some(p) => contagion::graph::load_edge_list(p)?,
            None => model_spec::build_graph(&cfg)?,
        };
        let sweep_steps: usize = cfg.parse_or("gamma_steps", 0)?;
        if sweep_steps > 0 {
            // Gamma sweep: raise gamma_min step by step (weights shrink, so
            // the bound gap closes as the row-sum norm falls).
            let base = cfg.parse_or("gamma_min", 0.2f64)?;
            let gmax = cfg.parse_or("gamma_max", 0.8f64)?;
            let step = cfg.parse_or("gamma_step", 0.0075f64)?;
            for i in 0..sweep_steps {
                let gmin = (base + i as f64 * step).min(gmax);
                let model = lt_weights_gamma(&graph, gmin, gmax, derive_seed(master, i as u64))?;
                rows.push(make_row(
                    &format!("gamma_{i}"),
                    Some(gmin),
                    &model,
                    &seeds,
                    replications,
                    derive_seed(master, 1_000 + i as u64),
                )?);
            }
        } else {
            let model = model_spec::build_model(&cfg, graph, master)?;
            rows.push(make_row("instance_0", None, &model, &seeds, replications, master)?);
        }
    }

    std::fs::create_dir_all(&args.common.out)?;
    let path = args.common.out.join(match args.common.format {
        Format::Csv => "bounds.csv",
        Format::Json => "bounds.json",
    });
    let text = match args.common.format {
        Format::Csv => to_csv(&rows),
        Format::Json => to_json(&rows)?,
    };
    std::fs::write(&path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn parse_seed_list(raw: Option<&str>) -> Result<Vec<usize>, CliError> {
    let raw = raw.ok_or_else(|| {
        CliError::validation("a seed set is required (--seeds or config `seeds`)")
    })?;
    raw.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::validation(format!("bad seed vertex `{s}`")))
        })
        .collect()
}

fn make_row(
    instance: &str,
    gamma_min: Option<f64>,
    model: &TriggerModel,
    seeds: &[usize],
    replications: usize,
    seed: u64,
) -> Result<Row, CliError> {
    let a = SeedSet::new(seeds.to_vec(), model.graph.n())?;
    let report = bound_report(model, &a);
    let est = estimate_influence(model, &a, replications, seed);
    Ok(Row {
        instance: instance.to_string(),
        gamma_min,
        report,
        mc_mean: est.mean,
        mc_stderr: est.stderr,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| format!("{x:.16e}"))
}

fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(
        "instance,gamma_min,seed_size,lb1,lb2,lb3,lb_trig,ub_trunc,ub_neumann,ic_wc,hazard,lambda_bar_inf,ratio_guarantee_lb1,ratio_guarantee_lb2,mc_mean,mc_stderr\n",
    );
    for r in rows {
        let b = &r.report;
        writeln!(
            out,
            "{},{},{},{},{},{},{:.16e},{:.16e},{},{},{},{:.16e},{},{},{:.16e},{:.16e}",
            r.instance,
            opt(r.gamma_min),
            b.seed_size,
            opt(b.lb1),
            opt(b.lb2),
            opt(b.lb3),
            b.lb_trig,
            b.ub_trunc,
            opt(b.ub_neumann),
            opt(b.ic_wc),
            opt(b.hazard),
            b.lambda_bar_inf,
            opt(b.ratio_guarantee_lb1),
            opt(b.ratio_guarantee_lb2),
            r.mc_mean,
            r.mc_stderr,
        )
        .unwrap();
    }
    out
}

fn to_json(rows: &[Row]) -> Result<String, CliError> {
    let arr: Vec<serde_json::Value> = rows
        .iter()
        .map(|r| {
            let mut v = serde_json::to_value(&r.report).expect("report serializes");
            let obj = v.as_object_mut().unwrap();
            obj.insert("instance".into(), r.instance.clone().into());
            obj.insert("gamma_min".into(), serde_json::json!(r.gamma_min));
            obj.insert("mc_mean".into(), r.mc_mean.into());
            obj.insert("mc_stderr".into(), r.mc_stderr.into());
            v
        })
        .collect();
    serde_json::to_string_pretty(&arr)
        .map_err(|e| CliError::runtime(format!("json: {e}")))
}
