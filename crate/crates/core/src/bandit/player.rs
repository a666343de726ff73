//! Player strategies: Exp3, OSMD with the 0-potential ψ(x) = 1/x², the
//! online greedy multi-source wrapper, and trivial baselines.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{BanditError, Feedback, Player};

/// Which loss estimator a single-source strategy feeds on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    Node,
    Symmetric,
}

impl LossKind {
    fn label(self) -> &'static str {
        match self {
            LossKind::Node => "node",
            LossKind::Symmetric => "sym",
        }
    }

    fn estimate(self, p: &[f64], source: usize, infected: &[bool]) -> Vec<f64> {
        match self {
            LossKind::Node => {
                let f = infected.iter().filter(|&&x| x).count() as f64 / p.len() as f64;
                super::loss::node_loss_estimate(p, source, f)
            }
            LossKind::Symmetric => super::loss::symmetric_loss_estimate(p, source, infected),
        }
    }
}

fn sample_index(p: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

fn infected_mask(n: usize, marginal: &[usize], source: usize) -> Vec<bool> {
    let mut mask = vec![false; n];
    mask[source] = true;
    for &v in marginal {
        mask[v] = true;
    }
    mask
}

/// Exp3: p_{i,t+1} ∝ exp(−η L̂_{i,t}), computed in log space with
/// max-subtraction. No exploration mixing.
pub struct Exp3Player {
    loss_kind: LossKind,
    eta: f64,
    cumulative: Vec<f64>,
    p: Vec<f64>,
    rng: ChaCha8Rng,
    chosen: usize,
}

impl Exp3Player {
    pub fn new(n: usize, loss_kind: LossKind, eta: f64, seed: u64) -> Self {
        Self {
            loss_kind,
            eta,
            cumulative: vec![0.0; n],
            p: vec![1.0 / n as f64; n],
            rng: ChaCha8Rng::seed_from_u64(seed),
            chosen: 0,
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }
}

impl Player for Exp3Player {
    fn label(&self) -> String {
        format!("exp3-{}", self.loss_kind.label())
    }

    fn next_source(&mut self) -> usize {
        self.chosen = sample_index(&self.p, &mut self.rng);
        self.chosen
    }

    fn observe(&mut self, marginal: &[usize], _feedback: &Feedback) -> Result<(), BanditError> {
        let n = self.p.len();
        let infected = infected_mask(n, marginal, self.chosen);
        let lhat = self.loss_kind.estimate(&self.p, self.chosen, &infected);
        for (c, l) in self.cumulative.iter_mut().zip(&lhat) {
            *c += l;
        }
        let min = self.cumulative.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut z = 0.0;
        for (pi, &c) in self.p.iter_mut().zip(&self.cumulative) {
            *pi = (-self.eta * (c - min)).exp();
            z += *pi;
        }
        for pi in &mut self.p {
            *pi /= z;
        }
        Ok(())
    }
}

/// One OSMD mirror step for F(x) = −2Σ√x_i: given the current distribution
/// and the scaled losses η·ℓ̂, returns the Bregman projection
/// p'_i = (p_i^{−1/2} + η ℓ̂_i + λ)^{−2} with λ chosen so Σ p' = 1.
///
/// Since η ℓ̂ ≥ 0 the unconstrained update sums to at most 1, so the
/// normalizing λ lies in (−min_i(p_i^{−1/2} + η ℓ̂_i), 0]. The sum is
/// strictly decreasing and convex in λ there; a Newton iteration with a
/// bisection safeguard converges to |Σp − 1| ≤ 1e−12.
pub fn osmd_update(p: &[f64], scaled_loss: &[f64]) -> Result<Vec<f64>, BanditError> {
    let base: Vec<f64> = p
        .iter()
        .zip(scaled_loss)
        .map(|(&pi, &l)| pi.powf(-0.5) + l)
        .collect();
    let min_base = base.iter().cloned().fold(f64::INFINITY, f64::min);
    let g = |lambda: f64| -> f64 {
        base.iter().map(|&b| (b + lambda).powi(-2)).sum::<f64>() - 1.0
    };
    let dg = |lambda: f64| -> f64 {
        -2.0 * base.iter().map(|&b| (b + lambda).powi(-3)).sum::<f64>()
    };
    let mut lo = -min_base; // g -> +inf as lambda -> lo
    let mut hi = 0.0f64; // g(0) <= 0
    let mut lambda = 0.0;
    let mut residual = g(lambda);
    let tol = 1e-12;
    for _ in 0..200 {
        if residual.abs() <= tol {
            return Ok(base.iter().map(|&b| (b + lambda).powi(-2)).collect());
        }
        if residual > 0.0 {
            lo = lo.max(lambda);
        } else {
            hi = hi.min(lambda);
        }
        let newton = lambda - residual / dg(lambda);
        lambda = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            // Bisection fallback; lo may still be the singular endpoint, so
            // step halfway.
            (lo + hi) / 2.0
        };
        residual = g(lambda);
        if !residual.is_finite() {
            // Landed too close to the pole; retreat toward hi.
            lambda = (lambda + hi) / 2.0;
            residual = g(lambda);
        }
    }
    Err(BanditError::NormalizationFailed { residual })
}

/// Online stochastic mirror descent over the simplex with the 0-potential
/// ψ(x) = 1/x² (Legendre function F(x) = −2Σ√x_i). Starts uniform.
pub struct OsmdPlayer {
    loss_kind: LossKind,
    eta: f64,
    p: Vec<f64>,
    rng: ChaCha8Rng,
    chosen: usize,
}

impl OsmdPlayer {
    pub fn new(n: usize, loss_kind: LossKind, eta: f64, seed: u64) -> Self {
        Self {
            loss_kind,
            eta,
            p: vec![1.0 / n as f64; n],
            rng: ChaCha8Rng::seed_from_u64(seed),
            chosen: 0,
        }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }
}

impl Player for OsmdPlayer {
    fn label(&self) -> String {
        format!("osmd-{}", self.loss_kind.label())
    }

    fn next_source(&mut self) -> usize {
        self.chosen = sample_index(&self.p, &mut self.rng);
        self.chosen
    }

    fn observe(&mut self, marginal: &[usize], _feedback: &Feedback) -> Result<(), BanditError> {
        let n = self.p.len();
        let infected = infected_mask(n, marginal, self.chosen);
        let lhat = self.loss_kind.estimate(&self.p, self.chosen, &infected);
        let scaled: Vec<f64> = lhat.iter().map(|l| self.eta * l).collect();
        self.p = osmd_update(&self.p, &scaled)?;
        Ok(())
    }
}

/// Runs k single-source sub-policies in parallel: sub-policy i picks the
/// i-th source each round and is fed the marginal feedback — the vertices
/// newly infected beyond the first i−1 picks, together with its own pick,
/// play the role of the infected component in the sub-policy's loss.
/// Duplicate picks across sub-policies are permitted (marginal gain zero).
pub struct OnlineGreedyPlayer {
    subs: Vec<Box<dyn Player>>,
    current: usize,
    last_pick: usize,
}

impl OnlineGreedyPlayer {
    pub fn new(subs: Vec<Box<dyn Player>>) -> Self {
        assert!(!subs.is_empty());
        Self {
            subs,
            current: 0,
            last_pick: 0,
        }
    }

    /// Convenience constructor: k OSMD-symmetric sub-policies.
    pub fn osmd_symmetric(n: usize, k: usize, eta: f64, seed: u64) -> Self {
        let subs = (0..k)
            .map(|i| {
                Box::new(OsmdPlayer::new(
                    n,
                    LossKind::Symmetric,
                    eta,
                    seed.wrapping_add(i as u64).wrapping_mul(0x9e3779b97f4a7c15),
                )) as Box<dyn Player>
            })
            .collect();
        Self::new(subs)
    }
}

impl Player for OnlineGreedyPlayer {
    fn label(&self) -> String {
        format!("online_greedy[{}x {}]", self.subs.len(), self.subs[0].label())
    }

    fn begin_round(&mut self, t: usize) {
        self.current = 0;
        for s in &mut self.subs {
            s.begin_round(t);
        }
    }

    fn next_source(&mut self) -> usize {
        self.last_pick = self.subs[self.current].next_source();
        self.last_pick
    }

    fn observe(&mut self, marginal: &[usize], feedback: &Feedback) -> Result<(), BanditError> {
        let mut own = marginal.to_vec();
        if !own.contains(&self.last_pick) {
            own.push(self.last_pick);
        }
        self.subs[self.current].observe(&own, feedback)?;
        self.current += 1;
        Ok(())
    }

    fn end_round(&mut self) {
        for s in &mut self.subs {
            s.end_round();
        }
    }

    fn sources_per_round(&self) -> Option<usize> {
        Some(self.subs.len())
    }
}

/// Plays the same source set every round.
pub struct FixedPlayer {
    set: Vec<usize>,
    idx: usize,
}

impl FixedPlayer {
    pub fn new(set: Vec<usize>) -> Self {
        assert!(!set.is_empty());
        Self { set, idx: 0 }
    }
}

impl Player for FixedPlayer {
    fn label(&self) -> String {
        format!("fixed{:?}", self.set)
    }

    fn begin_round(&mut self, _t: usize) {
        self.idx = 0;
    }

    fn next_source(&mut self) -> usize {
        let v = self.set[self.idx % self.set.len()];
        self.idx += 1;
        v
    }

    fn observe(&mut self, _marginal: &[usize], _feedback: &Feedback) -> Result<(), BanditError> {
        Ok(())
    }

    fn sources_per_round(&self) -> Option<usize> {
        Some(self.set.len())
    }
}

/// Picks uniformly random sources each round.
pub struct UniformRandomPlayer {
    n: usize,
    rng: ChaCha8Rng,
}

impl UniformRandomPlayer {
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Player for UniformRandomPlayer {
    fn label(&self) -> String {
        "uniform".into()
    }

    fn next_source(&mut self) -> usize {
        self.rng.random_range(0..self.n)
    }

    fn observe(&mut self, _marginal: &[usize], _feedback: &Feedback) -> Result<(), BanditError> {
        Ok(())
    }
}
