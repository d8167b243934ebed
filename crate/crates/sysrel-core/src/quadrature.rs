//! Gauss–Legendre and Gauss–Jacobi quadrature rules.
//!
//! Legendre nodes and weights come from Newton iteration on the Legendre
//! polynomial (Bonnet recurrence). Jacobi rules — needed because gamma and
//! beta environment densities carry algebraic endpoint singularities
//! `θ^{a-1}` that would wreck plain Gauss–Legendre convergence — come from
//! the Golub–Welsch eigenproblem, solved with an implicit-shift QL sweep
//! that tracks only the first eigenvector row.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // midpoint node is exactly zero
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_and_derivative(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// `n`-point rule mapped to `[a, b]`, returned as `(node, weight)` pairs in
/// ascending node order.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (nodes, weights) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    nodes
        .iter()
        .zip(weights.iter())
        .map(|(&x, &w)| (mid + half * x, half * w))
        .collect()
}

/// Nodes and weights of the `n`-point Gauss–Jacobi rule on `[-1, 1]` with
/// weight function `(1-x)^alpha (1+x)^beta`, `alpha, beta > -1`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    assert!(alpha > -1.0 && beta > -1.0, "weight exponents must exceed -1");
    // Jacobi-matrix recurrence coefficients.
    let ab = alpha + beta;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n]; // off[k] couples k-1 and k (off[0] unused)
    diag[0] = (beta - alpha) / (ab + 2.0);
    for k in 1..n {
        let kf = k as f64;
        let denom = (2.0 * kf + ab) * (2.0 * kf + ab + 2.0);
        diag[k] = (beta * beta - alpha * alpha) / denom;
        let num =
            4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab);
        let den = (2.0 * kf + ab).powi(2) * (2.0 * kf + ab + 1.0) * (2.0 * kf + ab - 1.0);
        off[k] = (num / den).sqrt();
    }
    // total weight-function mass: 2^{α+β+1} B(α+1, β+1)
    let mu0 = 2f64.powf(ab + 1.0)
        * (statrs::function::gamma::ln_gamma(alpha + 1.0)
            + statrs::function::gamma::ln_gamma(beta + 1.0)
            - statrs::function::gamma::ln_gamma(ab + 2.0))
        .exp();
    let mut first_row = vec![0.0; n];
    first_row[0] = 1.0;
    symmetric_tridiagonal_first_row(&mut diag, &mut off, &mut first_row);
    let mut pairs: Vec<(f64, f64)> =
        diag.iter().zip(first_row.iter()).map(|(&x, &z)| (x, mu0 * z * z)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    (pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
}

/// Implicit-shift QL on a symmetric tridiagonal matrix, updating only the
/// first row of the accumulated eigenvector matrix (all Golub–Welsch needs).
/// `off[k]` couples rows k-1 and k; `off[0]` is ignored.
fn symmetric_tridiagonal_first_row(d: &mut [f64], off: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    if n == 1 {
        return;
    }
    // shift the subdiagonal to e[k] coupling k and k+1
    let mut e = vec![0.0; n];
    e[..(n - 1)].copy_from_slice(&off[1..]);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
