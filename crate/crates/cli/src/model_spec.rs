//! Builds graphs and trigger models from a config: named generator
//! families, weight schemes, and the explicit trigger-distribution file
//! format.

use std::path::Path;

use contagion::graph::{generators, load_edge_list, lt_weights_gamma};
use contagion::{ModelKind, TriggerModel, WeightedDigraph};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Loads or generates the topology selected by the config.
pub fn build_graph(cfg: &ExperimentConfig) -> Result<WeightedDigraph, CliError> {
    match (cfg.raw("graph"), cfg.raw("family")) {
        (Some(_), Some(_)) => Err(CliError::validation(
            "set either `graph` (file) or `family` (generator), not both",
        )),
        (Some(path), None) => Ok(load_edge_list(&cfg.resolve(path))?),
        (None, Some(family)) => {
            let seed = cfg.parse_or("graph_seed", 1u64)?;
            match family {
                "er" => {
                    let n = cfg.parse::<usize>("n")?.ok_or_else(|| {
                        CliError::validation("family er needs `n`")
                    })?;
                    let p = cfg.parse::<f64>("p")?.ok_or_else(|| {
                        CliError::validation("family er needs `p`")
                    })?;
                    Ok(generators::erdos_renyi_directed(n, p, seed)?)
                }
                "pa" => {
                    let n = cfg.parse::<usize>("n")?.ok_or_else(|| {
                        CliError::validation("family pa needs `n`")
                    })?;
                    let m0 = cfg.parse_or("m0", 10usize)?;
                    let m = cfg.parse_or("m", 3usize)?;
                    Ok(generators::preferential_attachment(n, m0, m, seed)?)
                }
                "grid" => {
                    let rows = cfg.parse::<usize>("rows")?.ok_or_else(|| {
                        CliError::validation("family grid needs `rows`")
                    })?;
                    let cols = cfg.parse::<usize>("cols")?.ok_or_else(|| {
                        CliError::validation("family grid needs `cols`")
                    })?;
                    Ok(generators::grid_2d(rows, cols)?)
                }
                "complete" => {
                    let n = cfg.parse::<usize>("n")?.ok_or_else(|| {
                        CliError::validation("family complete needs `n`")
                    })?;
                    let directed = cfg.bool_or("directed", false)?;
                    Ok(generators::complete(n, directed)?)
                }
                other => Err(CliError::validation(format!(
                    "unknown graph family `{other}` (er, pa, grid, complete)"
                ))),
            }
        }
        (None, None) => Err(CliError::validation(
            "config must set `graph = <edge list file>` or `family = <generator>`",
        )),
    }
}

/// Applies the configured weight scheme and model kind to a topology.
pub fn build_model(
    cfg: &ExperimentConfig,
    graph: WeightedDigraph,
    seed: u64,
) -> Result<TriggerModel, CliError> {
    let model = cfg.raw("model").unwrap_or("lt");
    let weights = cfg.raw("weights").unwrap_or("file");
    let graph = match weights {
        "file" => graph,
        "gamma" => {
            let gmin = cfg.parse_or("gamma_min", 0.2f64)?;
            let gmax = cfg.parse_or("gamma_max", 0.8f64)?;
            if model != "lt" {
                return Err(CliError::validation(
                    "the gamma weight scheme defines a linear-threshold model",
                ));
            }
            return Ok(lt_weights_gamma(&graph, gmin, gmax, seed)?);
        }
        other => {
            return Err(CliError::validation(format!(
                "unknown weight scheme `{other}` (file, gamma)"
            )))
        }
    };
    match model {
        "lt" => Ok(TriggerModel::new(graph, ModelKind::LinearThreshold)?),
        "ic" => Ok(TriggerModel::new(graph, ModelKind::IndependentCascade)?),
        "explicit" => {
            let path = cfg.require("explicit_file")?;
            let dists = load_explicit_dists(&cfg.resolve(path), graph.n())?;
            Ok(TriggerModel::new(graph, ModelKind::Explicit(dists))?)
        }
        other => Err(CliError::validation(format!(
            "unknown model `{other}` (lt, ic, explicit)"
        ))),
    }
}

/// Explicit trigger-distribution file: blank-line-separated per-vertex
/// blocks, each starting `vertex <i>` followed by lines
/// `p<TAB>j1,j2,...` (probability, comma-separated trigger subset; an
/// empty subset is an empty second field). Vertices without a block get
/// the point mass on the empty trigger set.
pub fn load_explicit_dists(
    path: &Path,
    n: usize,
) -> Result<Vec<Vec<(f64, Vec<usize>)>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::validation(format!("cannot read {}: {e}", path.display()))
    })?;
    let mut dists: Vec<Vec<(f64, Vec<usize>)>> = vec![Vec::new(); n];
    let mut current: Option<usize> = None;
    for (ln, raw) in text.lines().enumerate() {
        let bad = |msg: String| {
            CliError::validation(format!("{}:{}: {msg}", path.display(), ln + 1))
        };
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertex ") {
            let v: usize = rest
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad vertex id `{}`", rest.trim())))?;
            if v >= n {
                return Err(bad(format!("vertex {v} out of range (n = {n})")));
            }
            if !dists[v].is_empty() {
                return Err(bad(format!("duplicate block for vertex {v}")));
            }
            current = Some(v);
            continue;
        }
        let v = current.ok_or_else(|| bad("expected a `vertex <i>` header".into()))?;
        let (p_str, set_str) = line
            .split_once('\t')
            .ok_or_else(|| bad("expected `p<TAB>j1,j2,...`".into()))?;
        let p: f64 = p_str
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad probability `{p_str}`")))?;
        let set = if set_str.trim().is_empty() {
            Vec::new()
        } else {
            set_str
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| bad(format!("bad trigger vertex `{s}`")))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        dists[v].push((p, set));
    }
    // Unlisted vertices never get triggered from neighbors.
    for d in dists.iter_mut() {
        if d.is_empty() {
            d.push((1.0, Vec::new()));
        }
    }
    Ok(dists)
}
