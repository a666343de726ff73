//! `generate`: builds a graph from a named family (optionally assigning
//! linear-threshold weights from the gamma scheme) and saves its edge list.

use clap::Args;
use contagion::graph::{lt_weights_gamma, save_edge_list};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::model_spec;
use crate::Common;

#[derive(Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    /// Output file name inside --out.
    #[arg(long, default_value = "graph.edges")]
    file: String,
    /// Assign LT weights b_ji = (1 - gamma(i)) / d(i), gamma uniform in
    /// [gamma-min, gamma-max].
    #[arg(long)]
    gamma_weights: bool,
    #[arg(long, default_value_t = 0.2)]
    gamma_min: f64,
    #[arg(long, default_value_t = 0.8)]
    gamma_max: f64,
}

pub fn run(args: GenerateArgs) -> Result<(), CliError> {
    let cfg = ExperimentConfig::load_optional(args.common.config.as_deref())?;
    let seed = args.common.seed.or(cfg.parse("seed")?).unwrap_or(0);
    let graph = model_spec::build_graph(&cfg)?;
    let graph = if args.gamma_weights {
        lt_weights_gamma(&graph, args.gamma_min, args.gamma_max, seed)?.graph
    } else {
        graph
    };
    std::fs::create_dir_all(&args.common.out)?;
    let path = args.common.out.join(&args.file);
    save_edge_list(&graph, &path)?;
    println!(
        "wrote {} ({} vertices, {} edges)",
        path.display(),
        graph.n(),
        graph.edges().len()
    );
    Ok(())
}
