//! Loss estimators computable from edge semi-bandit feedback.
//!
//! Per-round losses are ℓ_i = 1 − f(𝒜_t, {i}). The node estimator is the
//! standard importance-weighted bandit estimate; the symmetric estimator
//! exploits the fact that every vertex in the open component of the chosen
//! source shares the source's loss.

/// Node loss estimate: ℓ̂_i = (1 − f)/p_i · 1{i = source}, where f is the
/// round's reward. `p` is clamped away from zero before dividing.
pub fn node_loss_estimate(p: &[f64], source: usize, f: f64) -> Vec<f64> {
    let mut l = vec![0.0; p.len()];
    l[source] = (1.0 - f) / p[source].max(1e-300);
    l
}

/// Symmetric loss estimate in its computable three-case form. `infected`
/// is the open component C of the chosen source:
///   ℓ̂_i = 0                               for i ∈ C ∖ {source},
///   ℓ̂_source = (1/n) Σ_{j∉C} 1/(p_source + p_j),
///   ℓ̂_i = (1/n) / (p_i + p_source)        for i ∉ C.
pub fn symmetric_loss_estimate(p: &[f64], source: usize, infected: &[bool]) -> Vec<f64> {
    let n = p.len();
    let mut l = vec![0.0; n];
    let mut source_sum = 0.0;
    for j in 0..n {
        if !infected[j] {
            let denom = (p[source] + p[j]).max(1e-300);
            source_sum += 1.0 / denom;
            l[j] = 1.0 / (n as f64) / (p[j] + p[source]).max(1e-300);
        }
    }
    l[source] = source_sum / n as f64;
    l
}

/// The definitional pair sum
/// ℓ̂_i = (1/n) Σ_{j≠i} ℓ_ij · Z_ij / (p_i + p_j), with ℓ_ij the indicator
/// that i and j lie in different open components and Z_ij = 1{source ∈
/// {i,j}}. Quadratic; used as an oracle to test the closed form above.
pub fn symmetric_loss_definitional(
    p: &[f64],
    source: usize,
    components: &[usize],
) -> Vec<f64> {
    let n = p.len();
    let mut l = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..n {
            if j == i {
                continue;
            }
            let differs = components[i] != components[j];
            let z = source == i || source == j;
            if differs && z {
                acc += 1.0 / (p[i] + p[j]);
            }
        }
        l[i] = acc / n as f64;
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_simplex(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln()).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect()
    }

    #[test]
    fn hand_example_n3() {
        // n = 3 uniform p, source 0, component {0, 1}: ℓ̂ = (0.5, 0, 0.5).
        let p = vec![1.0 / 3.0; 3];
        let infected = [true, true, false];
        let l = symmetric_loss_estimate(&p, 0, &infected);
        assert!((l[0] - 0.5).abs() < 1e-15);
        assert_eq!(l[1], 0.0);
        assert!((l[2] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_definitional() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.random_range(2..7);
            let p = random_simplex(n, &mut rng);
            // Random partition into components.
            let components: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let source = rng.random_range(0..n);
            let infected: Vec<bool> = (0..n)
                .map(|i| components[i] == components[source])
                .collect();
            let fast = symmetric_loss_estimate(&p, source, &infected);
            let slow = symmetric_loss_definitional(&p, source, &components);
            for i in 0..n {
                assert!(
                    (fast[i] - slow[i]).abs() < 1e-12,
                    "i = {i}: {} vs {}",
                    fast[i],
                    slow[i]
                );
            }
        }
    }

    #[test]
    fn unbiasedness_by_enumeration() {
        // E_{S~p}[ℓ̂_i] = ℓ_i and E_{I~p}[ℓ̂_I] = ℓ_S for a fixed partition.
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 3..=5 {
            for _ in 0..20 {
                let p = random_simplex(n, &mut rng);
                let components: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
                let comp_size = |c: usize| components.iter().filter(|&&x| x == c).count();
                let loss = |i: usize| 1.0 - comp_size(components[i]) as f64 / n as f64;
                // First equality.
                for i in 0..n {
                    let mut expect = 0.0;
                    for s in 0..n {
                        let infected: Vec<bool> =
                            (0..n).map(|v| components[v] == components[s]).collect();
                        expect += p[s] * symmetric_loss_estimate(&p, s, &infected)[i];
                    }
                    assert!((expect - loss(i)).abs() < 1e-12);
                }
                // Second equality, for every realized source.
                for s in 0..n {
                    let infected: Vec<bool> =
                        (0..n).map(|v| components[v] == components[s]).collect();
                    let l = symmetric_loss_estimate(&p, s, &infected);
                    let expect: f64 = (0..n).map(|i| p[i] * l[i]).sum();
                    assert!((expect - loss(s)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn second_moment_bound() {
        // E_{S~p} E_{I~p} [(ℓ̂_I)²] <= (n + 1)/2.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 3..=5 {
            for _ in 0..20 {
                let p = random_simplex(n, &mut rng);
                let components: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
                let mut second = 0.0;
                for s in 0..n {
                    let infected: Vec<bool> =
                        (0..n).map(|v| components[v] == components[s]).collect();
                    let l = symmetric_loss_estimate(&p, s, &infected);
                    for i in 0..n {
                        second += p[s] * p[i] * l[i] * l[i];
                    }
                }
                assert!(second <= (n as f64 + 1.0) / 2.0 + 1e-12, "{second}");
            }
        }
    }

    #[test]
    fn double_sum_identity() {
        // Σ_i Σ_k a_i / (a_i + a_k) = n²/2 for positive a.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [2usize, 5, 9] {
            let a: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
            let mut s = 0.0;
            for i in 0..n {
                for k in 0..n {
                    s += a[i] / (a[i] + a[k]);
                }
            }
            assert!((s - (n * n) as f64 / 2.0).abs() < 1e-10);
        }
    }
}
