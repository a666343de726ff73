//! Greedy maximization of monotone set objectives under a cardinality
//! constraint, with a lazy (CELF-style) variant and a brute-force oracle.

use std::time::Instant;

use thiserror::Error;

use crate::bounds;
use crate::graph::{SeedSet, TriggerModel};
use crate::simulate;
use crate::util::OrdF64;

#[derive(Debug, Error)]
pub enum MaximizeError {
    #[error("exhaustive search over {combos:.3e} subsets exceeds the limit {limit:.1e}")]
    TooLarge { combos: f64, limit: f64 },
    #[error("k = {k} exceeds the universe size {n}")]
    KTooLarge { k: usize, n: usize },
}

/// A set objective to maximize. Implementations must be deterministic for
/// fixed inputs; stochastic objectives freeze their randomness per greedy
/// step via [`Objective::begin_step`].
pub trait Objective {
    fn label(&self) -> String;
    fn eval(&mut self, s: &SeedSet) -> f64;
    /// Whether the (1 − 1/e) greedy guarantee applies.
    fn guaranteed_submodular(&self) -> bool;
    /// Called once before each greedy step's candidate sweep.
    fn begin_step(&mut self, _step: usize) {}
}

/// Which closed-form bound a [`BoundObjective`] maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lb1,
    Lb2,
    Lb3,
    LbTrig,
    /// No approximation guarantee: the truncated upper bound is not
    /// submodular in general, it is offered for comparison studies only.
    UbTrunc,
}

pub struct BoundObjective<'a> {
    pub model: &'a TriggerModel,
    pub kind: BoundKind,
}

impl Objective for BoundObjective<'_> {
    fn label(&self) -> String {
        match self.kind {
            BoundKind::Lb1 => "lb1",
            BoundKind::Lb2 => "lb2",
            BoundKind::Lb3 => "lb3",
            BoundKind::LbTrig => "lb_trig",
            BoundKind::UbTrunc => "ub_trunc",
        }
        .to_string()
    }

    fn eval(&mut self, s: &SeedSet) -> f64 {
        match self.kind {
            BoundKind::Lb1 => bounds::lb_m(self.model, s, 1).unwrap(),
            BoundKind::Lb2 => bounds::lb_m(self.model, s, 2).unwrap(),
            BoundKind::Lb3 => bounds::lb_m(self.model, s, 3).unwrap(),
            BoundKind::LbTrig => bounds::lb_trig(self.model, s),
            BoundKind::UbTrunc => bounds::ub_truncated(self.model, s),
        }
    }

    fn guaranteed_submodular(&self) -> bool {
        !matches!(self.kind, BoundKind::UbTrunc)
    }
}

/// Monte Carlo influence objective. All candidate evaluations within one
/// greedy step share a step-derived seed (common random numbers), keeping
/// the candidate comparison noise-free and the trace deterministic.
pub struct McInfluence<'a> {
    pub model: &'a TriggerModel,
    pub replications: usize,
    pub master_seed: u64,
    step_seed: u64,
}

impl<'a> McInfluence<'a> {
    pub fn new(model: &'a TriggerModel, replications: usize, master_seed: u64) -> Self {
        Self {
            model,
            replications,
            master_seed,
            step_seed: master_seed,
        }
    }
}

impl Objective for McInfluence<'_> {
    fn label(&self) -> String {
        format!("mc_influence({})", self.replications)
    }

    fn eval(&mut self, s: &SeedSet) -> f64 {
        simulate::estimate_influence(self.model, s, self.replications, self.step_seed).mean
    }

    fn guaranteed_submodular(&self) -> bool {
        false
    }

    fn begin_step(&mut self, step: usize) {
        self.step_seed = self
            .master_seed
            .wrapping_mul(0x9e3779b97f4a7c15)
            .wrapping_add(step as u64);
    }
}

/// One accepted greedy step.
#[derive(Debug, Clone)]
pub struct TraceStep {
    pub vertex: usize,
    pub objective_value: f64,
    pub marginal_gain: f64,
    pub millis: f64,
}

/// Result of a greedy run: the selected vertices in order, with objective
/// values, marginal gains, and per-step wall time.
#[derive(Debug, Clone)]
pub struct GreedyTrace {
    pub label: String,
    pub base_value: f64,
    pub steps: Vec<TraceStep>,
}

impl GreedyTrace {
    pub fn selected(&self, n: usize) -> SeedSet {
        SeedSet::new(self.steps.iter().map(|s| s.vertex).collect(), n).unwrap()
    }

    pub fn final_value(&self) -> f64 {
        self.steps.last().map_or(self.base_value, |s| s.objective_value)
    }

    /// CSV serialization: `step,vertex,objective_value,marginal_gain,millis`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,vertex,objective_value,marginal_gain,millis\n");
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{:.17e},{:.17e},{:.17e}\n",
                i + 1,
                s.vertex,
                s.objective_value,
                s.marginal_gain,
                s.millis
            ));
        }
        out
    }
}

/// Plain greedy: repeatedly add the vertex with the largest marginal gain,
/// breaking ties by smallest vertex id.
pub fn greedy_maximize(
    obj: &mut dyn Objective,
    k: usize,
    universe: &[usize],
) -> Result<GreedyTrace, MaximizeError> {
    if k > universe.len() {
        return Err(MaximizeError::KTooLarge {
            k,
            n: universe.len(),
        });
    }
    let n = universe.iter().copied().max().map_or(1, |m| m + 1);
    let mut sel = SeedSet::empty();
    let base_value = obj.eval(&sel);
    let mut current = base_value;
    let mut steps = Vec::new();
    for step in 0..k {
        let t0 = Instant::now();
        obj.begin_step(step);
        let mut best: Option<(f64, usize)> = None;
        for &x in universe {
            if sel.contains(x) {
                continue;
            }
            let v = obj.eval(&sel.with(x));
            // Strict improvement keeps the smallest id on ties, because the
            // universe is scanned in order.
            if best.map_or(true, |(bv, _)| v > bv) {
                best = Some((v, x));
            }
        }
        let (value, vertex) = best.expect("k <= |universe| leaves a candidate");
        sel = sel.with(vertex);
        steps.push(TraceStep {
            vertex,
            objective_value: value,
            marginal_gain: value - current,
            millis: t0.elapsed().as_secs_f64() * 1e3,
        });
        current = value;
    }
    debug_assert!(sel.iter().all(|v| v < n));
    Ok(GreedyTrace {
        label: obj.label(),
        base_value,
        steps,
    })
}

/// Lazy greedy: exploits nonincreasing marginal gains to skip candidate
/// re-evaluations. Produces the identical trace (same selections, values,
/// and tie-breaking) as [`greedy_maximize`] for submodular objectives.
pub fn lazy_greedy_maximize(
    obj: &mut dyn Objective,
    k: usize,
    universe: &[usize],
) -> Result<GreedyTrace, MaximizeError> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    if k > universe.len() {
        return Err(MaximizeError::KTooLarge {
            k,
            n: universe.len(),
        });
    }
    let mut sel = SeedSet::empty();
    let base_value = obj.eval(&sel);
    let mut current = base_value;
    let mut steps = Vec::new();
    // Heap orders by (gain desc, vertex asc); entries carry the step at
    // which their gain was computed.
    let mut heap: BinaryHeap<(OrdF64, Reverse<usize>, usize)> = BinaryHeap::new();
    obj.begin_step(0);
    for &x in universe {
        let gain = obj.eval(&SeedSet::singleton(x)) - current;
        heap.push((OrdF64(gain), Reverse(x), 0));
    }
    for step in 0..k {
        if step > 0 {
            obj.begin_step(step);
        }
        let t0 = Instant::now();
        loop {
            let (OrdF64(gain), Reverse(x), computed_at) =
                heap.pop().expect("universe large enough");
            if computed_at == step {
                let value = current + gain;
                sel = sel.with(x);
                steps.push(TraceStep {
                    vertex: x,
                    objective_value: value,
                    marginal_gain: gain,
                    millis: t0.elapsed().as_secs_f64() * 1e3,
                });
                current = value;
                break;
            }
            let fresh = obj.eval(&sel.with(x)) - current;
            heap.push((OrdF64(fresh), Reverse(x), step));
        }
    }
    Ok(GreedyTrace {
        label: obj.label(),
        base_value,
        steps,
    })
}

const EXHAUSTIVE_LIMIT: f64 = 1e6;

/// True maximizer over all k-subsets of the universe (ties resolved to the
/// lexicographically first subset). Gated to C(n, k) <= 1e6.
pub fn exhaustive_maximize(
    obj: &mut dyn Objective,
    k: usize,
    universe: &[usize],
) -> Result<(SeedSet, f64), MaximizeError> {
    let n = universe.len();
    if k > n {
        return Err(MaximizeError::KTooLarge { k, n });
    }
    let combos = binomial(n, k);
    if combos > EXHAUSTIVE_LIMIT {
        return Err(MaximizeError::TooLarge {
            combos,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let id_bound = universe.iter().copied().max().map_or(1, |m| m + 1);
    let mut best: Option<(f64, SeedSet)> = None;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let set = SeedSet::new(idx.iter().map(|&i| universe[i]).collect(), id_bound).unwrap();
        let v = obj.eval(&set);
        if best.as_ref().map_or(true, |(bv, _)| v > *bv) {
            best = Some((v, set));
        }
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    let (v, s) = best.unwrap();
    Ok((s, v))
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}
