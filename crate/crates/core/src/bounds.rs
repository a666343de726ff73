//! Closed-form upper and lower bounds on the influence function, with
//! tightness diagnostics.
//!
//! Notation: for a seed set A, Ā = V ∖ A, B_ĀĀ is the weight sub-matrix on
//! Ā, and b_Ā(i) = Σ_{j∈A} b_ji is the direct weight from A into i ∈ Ā.
//! The lower bounds lb1..lb3 count live paths of bounded length and are
//! specific to the linear threshold model; lb_trig, the truncated upper
//! bound, and the Neumann-series upper bound apply to any triggering model
//! through the marginal live-edge matrix.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::graph::{ModelKind, SeedSet, TriggerModel, WeightedDigraph};

#[derive(Debug, Error)]
pub enum BoundsError {
    #[error("bound lb_{m} is only defined for m in {{1, 2, 3}}")]
    BadOrder { m: usize },
    #[error("bound requires a linear threshold model, got {got}")]
    RequiresLt { got: &'static str },
    #[error("bound requires an independent cascade model, got {got}")]
    RequiresIc { got: &'static str },
    #[error("power iteration did not converge after {iters} iterations (residual {residual:.3e})")]
    PowerIterationDiverged { iters: usize, residual: f64 },
}

/// All computable bounds for one seed set, plus diagnostics. Fields that
/// are undefined for the model kind, or whose applicability condition
/// fails, are `None` ("not-applicable").
#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundReport {
    pub seed_size: usize,
    pub lb1: Option<f64>,
    pub lb2: Option<f64>,
    pub lb3: Option<f64>,
    pub lb_trig: f64,
    pub ub_trunc: f64,
    pub ub_neumann: Option<f64>,
    pub ic_wc: Option<f64>,
    pub hazard: Option<f64>,
    pub lambda_bar_inf: f64,
    pub ratio_guarantee_lb1: Option<f64>,
    pub ratio_guarantee_lb2: Option<f64>,
}

/// Index bookkeeping for the complement Ā.
struct Complement {
    /// Vertices of Ā in ascending order.
    verts: Vec<usize>,
    /// Vertex id -> position in `verts`, or None for seeds.
    pos: Vec<Option<usize>>,
}

impl Complement {
    fn new(g: &WeightedDigraph, a: &SeedSet) -> Self {
        let in_a = a.mask(g.n());
        let mut verts = Vec::new();
        let mut pos = vec![None; g.n()];
        for v in 0..g.n() {
            if !in_a[v] {
                pos[v] = Some(verts.len());
                verts.push(v);
            }
        }
        Self { verts, pos }
    }

    fn len(&self) -> usize {
        self.verts.len()
    }

    /// b_Ā: direct incoming weight from A per complement vertex.
    fn b_from_seeds(&self, g: &WeightedDigraph) -> Vec<f64> {
        self.verts
            .iter()
            .map(|&i| {
                g.in_edges(i)
                    .iter()
                    .filter(|&&(j, _, _)| self.pos[j].is_none())
                    .map(|&(_, w, _)| w)
                    .sum()
            })
            .collect()
    }

    /// y = B_ĀĀ x in complement coordinates.
    fn matvec(&self, g: &WeightedDigraph, x: &[f64]) -> Vec<f64> {
        self.verts
            .iter()
            .map(|&i| {
                g.out_edges(i)
                    .iter()
                    .filter_map(|&(j, w, _)| self.pos[j].map(|p| w * x[p]))
                    .sum()
            })
            .collect()
    }

    /// Row sums of B_ĀĀ.
    fn row_sums(&self, g: &WeightedDigraph) -> Vec<f64> {
        self.matvec(g, &vec![1.0; self.len()])
    }

    fn dense(&self, g: &WeightedDigraph) -> DMatrix<f64> {
        let m = self.len();
        let mut mat = DMatrix::zeros(m, m);
        for (pi, &i) in self.verts.iter().enumerate() {
            for &(j, w, _) in g.out_edges(i) {
                if let Some(pj) = self.pos[j] {
                    mat[(pi, pj)] = w;
                }
            }
        }
        mat
    }
}

/// lb_m for m in {1, 2, 3}: |A| + b_Ā^T (Σ_{i<m} B_ĀĀ^i) 1, with the m = 3
/// form dropping the diagonal of B_ĀĀ² (a length-2 path may not return to
/// its own start). Linear threshold models only.
pub fn lb_m(model: &TriggerModel, a: &SeedSet, m: usize) -> Result<f64, BoundsError> {
    if !matches!(model.kind, ModelKind::LinearThreshold) {
        return Err(BoundsError::RequiresLt {
            got: model.kind.label(),
        });
    }
    if !(1..=3).contains(&m) {
        return Err(BoundsError::BadOrder { m });
    }
    let g = &model.graph;
    let comp = Complement::new(g, a);
    let b = comp.b_from_seeds(g);
    let mut value = a.len() as f64 + b.iter().sum::<f64>();
    if m >= 2 {
        let rows = comp.row_sums(g);
        value += b.iter().zip(&rows).map(|(bi, ri)| bi * ri).sum::<f64>();
    }
    if m >= 3 {
        // b^T (B² − Diag(B²)) 1 = Σ_i b_i Σ_j B_ij (rowsum_j − B_ji).
        let rows = comp.row_sums(g);
        let mut extra = 0.0;
        for (pi, &i) in comp.verts.iter().enumerate() {
            let mut acc = 0.0;
            for &(j, w, _) in g.out_edges(i) {
                if let Some(pj) = comp.pos[j] {
                    acc += w * (rows[pj] - g.weight(j, i));
                }
            }
            extra += b[pi] * acc;
        }
        value += extra;
    }
    Ok(value)
}

/// Truncated-series upper bound
/// |A| + b_Ā^T (Σ_{i=1}^{n−|A|} B_ĀĀ^{i−1}) 1. Valid for any triggering
/// model; exact on DAGs, where no path exceeds length n − |A|.
pub fn ub_truncated(model: &TriggerModel, a: &SeedSet) -> f64 {
    let g = &model.graph;
    let comp = Complement::new(g, a);
    let m = comp.len();
    if m == 0 {
        return a.len() as f64;
    }
    let b = comp.b_from_seeds(g);
    // s_k = Σ_{i=0}^{k-1} B^i 1, built as s <- 1 + B s.
    let mut s = vec![1.0; m];
    for _ in 1..m {
        let bs = comp.matvec(g, &s);
        for (si, bi) in s.iter_mut().zip(&bs) {
            *si = 1.0 + bi;
        }
    }
    a.len() as f64 + b.iter().zip(&s).map(|(bi, si)| bi * si).sum::<f64>()
}

/// Neumann-series upper bound |A| + b_Ā^T (I − B_ĀĀ)^{−1} 1. Returns
/// `None` when the series diverges (ρ(B_ĀĀ) ≥ 1).
pub fn ub_neumann(model: &TriggerModel, a: &SeedSet) -> Option<f64> {
    let g = &model.graph;
    let comp = Complement::new(g, a);
    let m = comp.len();
    if m == 0 {
        return Some(a.len() as f64);
    }
    let b = comp.b_from_seeds(g);
    if m <= 2000 {
        // Certify ρ(B_ĀĀ) < 1: since B is nonnegative, max(B^k 1) = ‖B^k‖∞
        // ≥ ρ^k, so any iterate dropping below 1 proves convergence, while
        // ρ ≥ 1 keeps every iterate at max ≥ 1.
        let mut y = vec![1.0; m];
        let mut certified = false;
        for _ in 0..5000 {
            y = comp.matvec(g, &y);
            let max = y.iter().cloned().fold(0.0, f64::max);
            if max < 1.0 {
                certified = true;
                break;
            }
            if max > 1e100 {
                return None;
            }
        }
        if !certified {
            return None;
        }
        let mat = DMatrix::identity(m, m) - comp.dense(g);
        let s = mat.lu().solve(&DVector::from_element(m, 1.0))?;
        Some(a.len() as f64 + b.iter().zip(s.iter()).map(|(bi, si)| bi * si).sum::<f64>())
    } else {
        // Large instance: sum the series term by term, declaring divergence
        // when the term norm grows over 10 consecutive terms.
        let mut term = vec![1.0; m];
        let mut s = vec![0.0; m];
        let mut prev_norm = f64::INFINITY;
        let mut growth_streak = 0;
        for _ in 0..200_000 {
            for (si, ti) in s.iter_mut().zip(&term) {
                *si += ti;
            }
            term = comp.matvec(g, &term);
            let norm = term.iter().cloned().fold(0.0, f64::max);
            if norm < 1e-14 {
                return Some(
                    a.len() as f64 + b.iter().zip(&s).map(|(bi, si)| bi * si).sum::<f64>(),
                );
            }
            if norm >= prev_norm {
                growth_streak += 1;
                if growth_streak >= 10 {
                    return None;
                }
            } else {
                growth_streak = 0;
            }
            prev_norm = norm;
        }
        None
    }
}

/// Triggering-model lower bound |A| + Σ_{i∈Ā} sup-weight path A → i whose
/// interior stays in Ā: a multi-source max-product Dijkstra run in the
/// complement, seeded with the best direct edge out of A. Zero-weight edges
/// are treated as absent.
pub fn lb_trig(model: &TriggerModel, a: &SeedSet) -> f64 {
    let g = &model.graph;
    let comp = Complement::new(g, a);
    let m = comp.len();
    let mut best = vec![0.0f64; m];
    for s in a.iter() {
        for &(i, w, _) in g.out_edges(s) {
            if w > 0.0 {
                if let Some(pi) = comp.pos[i] {
                    best[pi] = best[pi].max(w);
                }
            }
        }
    }
    // Max-product Dijkstra: probabilities only shrink along a path, so the
    // usual greedy-extraction argument applies.
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut done = vec![false; m];
    let mut heap: BinaryHeap<(ordered_float_bits, Reverse<usize>)> = best
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w > 0.0)
        .map(|(p, &w)| (ordered_float_bits(w), Reverse(p)))
        .collect();
    while let Some((ordered_float_bits(w), Reverse(p))) = heap.pop() {
        if done[p] || w < best[p] {
            continue;
        }
        done[p] = true;
        let u = comp.verts[p];
        for &(v, ew, _) in g.out_edges(u) {
            if ew <= 0.0 {
                continue;
            }
            if let Some(pv) = comp.pos[v] {
                let cand = w * ew;
                if cand > best[pv] {
                    best[pv] = cand;
                    heap.push((ordered_float_bits(cand), Reverse(pv)));
                }
            }
        }
    }
    a.len() as f64 + best.iter().sum::<f64>()
}

/// Total order on nonnegative finite f64.
#[derive(PartialEq, PartialOrd, Clone, Copy)]
#[allow(non_camel_case_types)]
struct ordered_float_bits(f64);

impl Eq for ordered_float_bits {}
impl Ord for ordered_float_bits {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).expect("finite weights")
    }
}

/// λ_{Ā,∞}: the maximum row sum of B_ĀĀ.
pub fn lambda_bar_inf(model: &TriggerModel, a: &SeedSet) -> f64 {
    let comp = Complement::new(&model.graph, a);
    comp.row_sums(&model.graph)
        .into_iter()
        .fold(0.0, f64::max)
}

/// Ratio guarantees UB/LB₁ ≤ 1/(1−λ) and UB/LB₂ ≤ 1/(1−λ²) with
/// λ = λ_{Ā,∞}; `None` for each when λ ≥ 1.
pub fn ratio_guarantees(model: &TriggerModel, a: &SeedSet) -> (f64, Option<f64>, Option<f64>) {
    let lambda = lambda_bar_inf(model, a);
    if lambda < 1.0 {
        (
            lambda,
            Some(1.0 / (1.0 - lambda)),
            Some(1.0 / (1.0 - lambda * lambda)),
        )
    } else {
        (lambda, None, None)
    }
}

/// Worst-case independent cascade bound. `finite` is
/// |A| + λ∞|A|(1−λ∞^{n−|A|})/(1−λ∞) (limit |A|(1 + n − |A|) at λ∞ = 1);
/// `simplified` is |A|/(1−λ∞), defined only for λ∞ < 1. `exceeds_n` flags
/// a bound weaker than the trivial ℐ(A) ≤ n.
#[derive(Debug, Clone, Copy)]
pub struct IcWorstCase {
    pub lambda_inf: f64,
    pub finite: f64,
    pub simplified: Option<f64>,
    pub exceeds_n: bool,
}

pub fn ic_worst_case(model: &TriggerModel, a: &SeedSet) -> Result<IcWorstCase, BoundsError> {
    if !matches!(model.kind, ModelKind::IndependentCascade) {
        return Err(BoundsError::RequiresIc {
            got: model.kind.label(),
        });
    }
    let g = &model.graph;
    let lambda_inf = (0..g.n())
        .map(|v| g.out_edges(v).iter().map(|&(_, w, _)| w).sum::<f64>())
        .fold(0.0, f64::max);
    let ka = a.len() as f64;
    let rem = (g.n() - a.len()) as f64;
    let finite = if lambda_inf == 1.0 {
        ka * (1.0 + rem)
    } else {
        ka + lambda_inf * ka * (1.0 - lambda_inf.powf(rem)) / (1.0 - lambda_inf)
    };
    let simplified = (lambda_inf < 1.0).then(|| ka / (1.0 - lambda_inf));
    Ok(IcWorstCase {
        lambda_inf,
        finite,
        simplified,
        exceeds_n: finite > g.n() as f64,
    })
}

/// Hazard-matrix bound for independent cascade: with ℋ_ij = −log(1−b_ij)
/// and ρ = ρ((ℋ+ℋᵀ)/2), the bound |A| + √(ρ/(1−ρ))·√(|A|(n−|A|)) holds
/// when ρ < 1 − δ, δ = (|A|/(4(n−|A|)))^{1/3}. Returns `Ok(None)` when the
/// condition fails or any b_ij = 1 (infinite hazard).
pub fn hazard_bound(model: &TriggerModel, a: &SeedSet) -> Result<Option<f64>, BoundsError> {
    if !matches!(model.kind, ModelKind::IndependentCascade) {
        return Err(BoundsError::RequiresIc {
            got: model.kind.label(),
        });
    }
    let g = &model.graph;
    let n = g.n();
    if a.len() >= n || a.is_empty() {
        return Ok(None);
    }
    if g.edges().iter().any(|e| e.weight >= 1.0) {
        return Ok(None);
    }
    let mut h = DMatrix::zeros(n, n);
    for e in g.edges() {
        let v = -(1.0 - e.weight).ln();
        h[(e.src, e.dst)] += v / 2.0;
        h[(e.dst, e.src)] += v / 2.0;
    }
    let rho = spectral_radius_symmetric(&h)?;
    let ka = a.len() as f64;
    let rem = (n - a.len()) as f64;
    let delta = (ka / (4.0 * rem)).cbrt();
    if rho >= 1.0 - delta {
        return Ok(None);
    }
    Ok(Some(ka + (rho / (1.0 - rho)).sqrt() * (ka * rem).sqrt()))
}

/// Largest eigenvalue of a symmetric nonnegative matrix by shifted power
/// iteration (the shift keeps the dominant eigenvalue simple-signed even
/// when the spectrum is symmetric, as for bipartite adjacency).
pub fn spectral_radius_symmetric(m: &DMatrix<f64>) -> Result<f64, BoundsError> {
    assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
    let n = m.nrows();
    if n == 0 {
        return Ok(0.0);
    }
    let shift = m
        .row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    if shift == 0.0 {
        return Ok(0.0);
    }
    let shifted = m + DMatrix::identity(n, n) * shift;
    let mut v = DVector::from_element(n, (n as f64).sqrt().recip());
    let rtol = 1e-8;
    let max_iters = 100_000;
    let mut lambda = 0.0;
    for it in 0..max_iters {
        let w = &shifted * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let next = w / norm;
        lambda = next.dot(&(&shifted * &next));
        let residual = (&shifted * &next - &next * lambda).norm();
        v = next;
        if residual <= rtol * lambda.abs().max(1e-300) {
            return Ok(lambda - shift);
        }
        if it == max_iters - 1 {
            return Err(BoundsError::PowerIterationDiverged {
                iters: max_iters,
                residual,
            });
        }
    }
    Ok(lambda - shift)
}

/// Assembles every bound applicable to the model kind into one report.
pub fn bound_report(model: &TriggerModel, a: &SeedSet) -> BoundReport {
    let is_lt = matches!(model.kind, ModelKind::LinearThreshold);
    let is_ic = matches!(model.kind, ModelKind::IndependentCascade);
    let (lambda, r1, r2) = ratio_guarantees(model, a);
    BoundReport {
        seed_size: a.len(),
        lb1: is_lt.then(|| lb_m(model, a, 1).unwrap()),
        lb2: is_lt.then(|| lb_m(model, a, 2).unwrap()),
        lb3: is_lt.then(|| lb_m(model, a, 3).unwrap()),
        lb_trig: lb_trig(model, a),
        ub_trunc: ub_truncated(model, a),
        ub_neumann: ub_neumann(model, a),
        ic_wc: if is_ic {
            Some(ic_worst_case(model, a).unwrap().finite)
        } else {
            None
        },
        hazard: if is_ic {
            hazard_bound(model, a).unwrap_or(None)
        } else {
            None
        },
        lambda_bar_inf: lambda,
        ratio_guarantee_lb1: r1,
        ratio_guarantee_lb2: r2,
    }
}
