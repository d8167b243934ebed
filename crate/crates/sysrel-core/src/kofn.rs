//! k-out-of-n reliability primitives: the iid closed forms (binomial tail and
//! its derivatives) and the Poisson-binomial recursion for independent,
//! non-identical components.

/// Binomial coefficient as f64 (exact for the component counts in scope).
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Reliability of the k-out-of-n system with iid component reliability `p`:
/// `h(p) = Σ_{i=k}^{n} C(n,i) p^i (1-p)^{n-i}`.
pub fn kofn_reliability(k: usize, n: usize, p: f64) -> f64 {
    debug_assert!(k >= 1 && k <= n);
    let q = 1.0 - p;
    (k..=n).map(|i| binomial(n, i) * p.powi(i as i32) * q.powi((n - i) as i32)).sum()
}

/// Unreliability `1 - h(p) = Σ_{i=0}^{k-1} C(n,i) p^i (1-p)^{n-i}`, computed
/// as the lower binomial sum so no cancellation occurs near p = 1.
pub fn kofn_unreliability(k: usize, n: usize, p: f64) -> f64 {
    debug_assert!(k >= 1 && k <= n);
    let q = 1.0 - p;
    (0..k).map(|i| binomial(n, i) * pow_or_one(p, i) * pow_or_one(q, n - i)).sum()
}

/// First derivative: `h'(p) = k C(n,k) p^{k-1} (1-p)^{n-k}`.
pub fn kofn_d1(k: usize, n: usize, p: f64) -> f64 {
    debug_assert!(k >= 1 && k <= n);
    k as f64 * binomial(n, k) * pow_or_one(p, k - 1) * pow_or_one(1.0 - p, n - k)
}

/// Second derivative:
/// `h''(p) = k C(n,k) [ (k-1) p^{k-2} (1-p)^{n-k} - (n-k) p^{k-1} (1-p)^{n-k-1} ]`,
/// with vanishing-coefficient terms short-circuited so no negative powers are
/// formed at k = 1 or k = n.
pub fn kofn_d2(k: usize, n: usize, p: f64) -> f64 {
    debug_assert!(k >= 1 && k <= n);
    let c = k as f64 * binomial(n, k);
    let term1 = if k >= 2 {
        (k - 1) as f64 * pow_or_one(p, k - 2) * pow_or_one(1.0 - p, n - k)
    } else {
        0.0
    };
    let term2 = if n > k {
        (n - k) as f64 * pow_or_one(p, k - 1) * pow_or_one(1.0 - p, n - k - 1)
    } else {
        0.0
    };
    c * (term1 - term2)
}

fn pow_or_one(x: f64, e: usize) -> f64 {
    if e == 0 { 1.0 } else { x.powi(e as i32) }
}

/// Full distribution of the number of successes among independent Bernoulli
/// trials with the given probabilities (index = count).
pub fn success_count_pmf(probs: &[f64]) -> Vec<f64> {
    let mut pmf = vec![0.0; probs.len() + 1];
    pmf[0] = 1.0;
    for (t, &p) in probs.iter().enumerate() {
        for j in (0..=t + 1).rev() {
            let stay = if j <= t { pmf[j] * (1.0 - p) } else { 0.0 };
            let up = if j >= 1 { pmf[j - 1] * p } else { 0.0 };
            pmf[j] = stay + up;
        }
    }
    pmf
}

/// `P(at least k of the trials succeed)` for independent non-identical trials.
pub fn poisson_binomial_tail(probs: &[f64], k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > probs.len() {
        return 0.0;
    }
    let pmf = success_count_pmf(probs);
    pmf[k..].iter().sum()
}

/// `∂/∂p_i P(S ≥ k) = P(S_{-i} = k-1)`: the i-th partial of the k-out-of-n
/// reliability with independent components.
pub fn poisson_binomial_partial(probs: &[f64], k: usize, i: usize) -> f64 {
    debug_assert!(k >= 1 && k <= probs.len());
    let rest: Vec<f64> =
        probs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &p)| p).collect();
    let pmf = success_count_pmf(&rest);
    pmf.get(k - 1).copied().unwrap_or(0.0)
}

/// Mixed second partial `∂²/∂p_i∂p_j P(S ≥ k)`; zero when `i == j`.
pub fn poisson_binomial_second_partial(probs: &[f64], k: usize, i: usize, j: usize) -> f64 {
    if i == j {
        return 0.0;
    }
    let rest: Vec<f64> = probs
        .iter()
        .enumerate()
        .filter(|&(t, _)| t != i && t != j)
        .map(|(_, &p)| p)
        .collect();
    let pmf = success_count_pmf(&rest);
    let at = |c: isize| -> f64 {
        if c < 0 { 0.0 } else { pmf.get(c as usize).copied().unwrap_or(0.0) }
    };
    at(k as isize - 2) - at(k as isize - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_and_parallel_closed_forms() {
        for p in [0.1, 0.5, 0.9] {
            assert!((kofn_reliability(3, 3, p) - p.powi(3)).abs() < 1e-15);
            assert!((kofn_reliability(1, 3, p) - (1.0 - (1.0 - p).powi(3))).abs() < 1e-15);
        }
    }

    #[test]
    fn two_of_three_midpoint() {
        // Σ_{i=2}^{3} C(3,i) (1/2)^3 = (3 + 1)/8
        assert!((kofn_reliability(2, 3, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for (k, n) in [(1usize, 4usize), (2, 5), (3, 5), (5, 5)] {
            for p in [0.1, 0.37, 0.5, 0.82] {
                let fd = (kofn_reliability(k, n, p + h) - kofn_reliability(k, n, p - h)) / (2.0 * h);
                assert!(
                    (kofn_d1(k, n, p) - fd).abs() < 1e-7,
                    "k={k} n={n} p={p}"
                );
                let fd2 = (kofn_d1(k, n, p + h) - kofn_d1(k, n, p - h)) / (2.0 * h);
                assert!(
                    (kofn_d2(k, n, p) - fd2).abs() < 1e-5 * kofn_d2(k, n, p).abs().max(1.0),
                    "k={k} n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn second_derivative_changes_sign_at_mu() {
        // h'' > 0 below (k-1)/(n-1) and < 0 above
        let (k, n) = (2usize, 3usize);
        assert!(kofn_d2(k, n, 0.3) > 0.0);
        assert!(kofn_d2(k, n, 0.7) < 0.0);
        assert!(kofn_d2(k, n, 0.5).abs() < 1e-12);
    }

    #[test]
    fn poisson_binomial_agrees_with_iid_closed_form() {
        let probs = vec![0.35; 5];
        for k in 1..=5 {
            let dp = poisson_binomial_tail(&probs, k);
            let cf = kofn_reliability(k, 5, 0.35);
            assert!((dp - cf).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn poisson_binomial_partial_matches_finite_difference() {
        let probs = vec![0.2, 0.55, 0.7, 0.4];
        let h = 1e-7;
        for k in 1..=4 {
            for i in 0..4 {
                let mut up = probs.clone();
                let mut dn = probs.clone();
                up[i] += h;
                dn[i] -= h;
                let fd =
                    (poisson_binomial_tail(&up, k) - poisson_binomial_tail(&dn, k)) / (2.0 * h);
                let exact = poisson_binomial_partial(&probs, k, i);
                assert!((fd - exact).abs() < 1e-6, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        let pmf = success_count_pmf(&[0.1, 0.9, 0.5, 0.33]);
        let total: f64 = pmf.iter().sum();
        assert!((total - 1.0).abs() < 1e-14);
    }
}
