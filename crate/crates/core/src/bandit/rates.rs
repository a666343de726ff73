//! Learning rates and pseudo-regret bounds for the implemented strategies.

/// Exp3 with the symmetric loss: η_t = √(4 log n / (T(n+1))).
pub fn exp3_sym_eta(n: usize, t: usize) -> f64 {
    (4.0 * (n as f64).ln() / (t as f64 * (n as f64 + 1.0))).sqrt()
}

/// Pseudo-regret bound √(T(n+1) log n) for Exp3 with the symmetric loss.
pub fn exp3_sym_bound(n: usize, t: usize) -> f64 {
    (t as f64 * (n as f64 + 1.0) * (n as f64).ln()).sqrt()
}

/// OSMD with the symmetric loss: η = 2^{3/4} T^{−1/2}.
pub fn osmd_sym_eta(t: usize) -> f64 {
    2f64.powf(0.75) / (t as f64).sqrt()
}

/// Pseudo-regret bound 2^{1/4} √(Tn) for OSMD with the symmetric loss.
pub fn osmd_sym_bound(n: usize, t: usize) -> f64 {
    2f64.powf(0.25) * (t as f64 * n as f64).sqrt()
}

/// OSMD with the node loss: η = √(2/T).
pub fn osmd_node_eta(t: usize) -> f64 {
    (2.0 / t as f64).sqrt()
}

/// Pseudo-regret bound 2^{3/2} √(Tn) for OSMD with the node loss.
pub fn osmd_node_bound(n: usize, t: usize) -> f64 {
    2f64.powf(1.5) * (t as f64 * n as f64).sqrt()
}

/// Scaled pseudo-regret bound 2^{1/4} k √(Tn) for the online greedy stack
/// over OSMD-symmetric sub-policies.
pub fn online_greedy_sym_bound(n: usize, t: usize, k: usize) -> f64 {
    2f64.powf(0.25) * k as f64 * (t as f64 * n as f64).sqrt()
}
