//! Condition-check primitives shared by the rule catalog. Every check folds a
//! stream of relative margins (≥ 0 means the inequality holds at that probe)
//! into a verdict plus the worst witness.

use crate::distortions::{DistortionFunction, ScalarDistortion};
use crate::lifetimes::ConditionalLifetimeModel;
use crate::mixtures::Environment;
use crate::orders::{
    check_hr, check_lr, check_rhr, check_st, Certification, GridSpec, OrderRelation, OrderVerdict,
    RATIO_FLOOR,
};
use crate::points::{halton_cube, linspace};

pub(crate) const NAN_WITNESS: &str = "evaluator produced a non-finite value";

/// Folded outcome of a condition check.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Outcome {
    pub verdict: Certification,
    pub worst_margin: f64,
    pub witness: String,
}

pub(crate) struct MarginFold {
    tol: f64,
    worst: f64,
    witness: String,
    saw_nan: bool,
}

impl MarginFold {
    pub fn new(tol: f64) -> Self {
        MarginFold { tol, worst: f64::INFINITY, witness: String::new(), saw_nan: false }
    }

    pub fn push(&mut self, margin: f64, witness: impl FnOnce() -> String) {
        if !margin.is_finite() {
            self.saw_nan = true;
            return;
        }
        if margin < self.worst {
            self.worst = margin;
            self.witness = witness();
        }
    }

    pub fn finish(self) -> Outcome {
        if self.saw_nan {
            return Outcome {
                verdict: Certification::Inconclusive,
                worst_margin: f64::NAN,
                witness: NAN_WITNESS.to_string(),
            };
        }
        if self.worst == f64::INFINITY {
            return Outcome {
                verdict: Certification::Inconclusive,
                worst_margin: f64::NAN,
                witness: "empty probe set".to_string(),
            };
        }
        let verdict = if self.worst >= -self.tol {
            Certification::CertifiedOnGrid
        } else {
            Certification::Violated
        };
        Outcome { verdict, worst_margin: self.worst, witness: self.witness }
    }
}

fn rel(diff: f64, a: f64, b: f64) -> f64 {
    diff / a.abs().max(b.abs()).max(1e-12)
}

fn fmt_point(p: &[f64]) -> String {
    let coords: Vec<String> = p.iter().map(|v| format!("{v:.4}")).collect();
    format!("p=({})", coords.join(","))
}

/// Per-scenario probe structure shared by the checks.
pub(crate) struct ProbeSet {
    /// θ values covering the support(s).
    pub thetas: Vec<f64>,
    /// Ordered pairs θ1 < θ2.
    pub pairs: Vec<(f64, f64)>,
}

impl ProbeSet {
    pub fn for_envs(env1: &Environment, env2: &Environment, pair_cap: usize) -> ProbeSet {
        let mut thetas = env1.probe_thetas(pair_cap);
        if env2 != env1 {
            thetas.extend(env2.probe_thetas(pair_cap));
        }
        thetas.sort_by(|a, b| a.total_cmp(b));
        thetas.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut pairs = Vec::new();
        'outer: for i in 0..thetas.len() {
            for j in i + 1..thetas.len() {
                pairs.push((thetas[i], thetas[j]));
                if pairs.len() >= 64 {
                    break 'outer;
                }
            }
        }
        ProbeSet { thetas, pairs }
    }
}

/// Interior evaluation points: a Halton set plus the diagonal.
pub(crate) fn interior_points(dim: usize, count: usize, eps: f64) -> Vec<Vec<f64>> {
    let mut pts = halton_cube(dim, count, eps, 1.0 - eps);
    for p in linspace(eps, 1.0 - eps, 128) {
        pts.push(vec![p; dim]);
    }
    pts
}

// ---------------------------------------------------------------------------
// distortion-level conditions
// ---------------------------------------------------------------------------

/// `h1(p_1..p_n) ≤ h2(p_1..p_m)` on the point set.
pub(crate) fn h_dominance_multi(
    h1: &DistortionFunction,
    h2: &DistortionFunction,
    points: &[Vec<f64>],
    tol: f64,
) -> Outcome {
    let n = h1.dimension();
    let m = h2.dimension();
    let mut fold = MarginFold::new(tol);
    for p in points {
        let v1 = h1.eval_raw(&p[..n]);
        let v2 = h2.eval_raw(&p[..m]);
        fold.push(rel(v2 - v1, v1, v2), || format!("{} h1={v1:.6} h2={v2:.6}", fmt_point(p)));
    }
    fold.finish()
}

/// `h1(p) ≤ h2(p)` on the scalar grid.
pub(crate) fn h_dominance_scalar(
    h1: &ScalarDistortion,
    h2: &ScalarDistortion,
    grid: &[f64],
    tol: f64,
) -> Outcome {
    let mut fold = MarginFold::new(tol);
    for &p in grid {
        let v1 = h1.value(p);
        let v2 = h2.value(p);
        fold.push(rel(v2 - v1, v1, v2), || format!("p={p:.6} h1={v1:.6} h2={v2:.6}"));
    }
    fold.finish()
}

/// Alias of [`h_dominance_scalar`] under its comparison-family reading:
/// `h_{k:n}(p) ≤ h_{l:m}(p)` pointwise.
pub(crate) fn scalar_monotone_pairwise_le(
    h1: &ScalarDistortion,
    h2: &ScalarDistortion,
    grid: &[f64],
    tol: f64,
) -> Outcome {
    h_dominance_scalar(h1, h2, grid, tol)
}

/// Which per-coordinate functional a condition speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CoordFunctional {
    /// `∂_i h / h` (log-gradient).
    LogGradient,
    /// `p_i ∂_i h / h`.
    Elasticity,
    /// `∂_i h / (1-h)`.
    CoGradient,
    /// `(1-p_i) ∂_i h / (1-h)`.
    CoElasticity,
}

fn coord_functional(
    kind: CoordFunctional,
    h: &DistortionFunction,
    p: &[f64],
    grad: &mut [f64],
    i: usize,
) -> f64 {
    let n = h.dimension();
    h.gradient_raw(&p[..n], grad);
    match kind {
        CoordFunctional::LogGradient => grad[i] / h.eval_raw(&p[..n]),
        CoordFunctional::Elasticity => p[i] * grad[i] / h.eval_raw(&p[..n]),
        CoordFunctional::CoGradient => grad[i] / h.complement_raw(&p[..n]),
        CoordFunctional::CoElasticity => (1.0 - p[i]) * grad[i] / h.complement_raw(&p[..n]),
    }
}

/// Compares a per-coordinate functional of the two distortions on the point
/// set: `φ_i(h1) ≥ φ_i(h2)` (or `≤` with `ge = false`) for `i < upto`.
pub(crate) fn coord_functional_cmp(
    kind: CoordFunctional,
    h1: &DistortionFunction,
    h2: &DistortionFunction,
    points: &[Vec<f64>],
    upto: usize,
    ge: bool,
    tol: f64,
) -> Outcome {
    let n = h1.dimension();
    let m = h2.dimension();
    let mut g1 = vec![0.0; n];
    let mut g2 = vec![0.0; m];
    let mut fold = MarginFold::new(tol);
    for p in points {
        for i in 0..upto {
            let a = coord_functional(kind, h1, &p[..n], &mut g1, i);
            let b = coord_functional(kind, h2, &p[..m], &mut g2, i);
            let diff = if ge { a - b } else { b - a };
            fold.push(rel(diff, a, b), || {
                format!("{} i={} lhs={a:.6} rhs={b:.6}", fmt_point(p), i + 1)
            });
        }
    }
    fold.finish()
}

/// Monotonicity of `φ_i(h)` in its own coordinate `p_i`, all other
/// coordinates held fixed, over sweeps from low-discrepancy base points.
pub(crate) fn coord_functional_own_monotone(
    kind: CoordFunctional,
    h: &DistortionFunction,
    upto: usize,
    decreasing: bool,
    bases: &[Vec<f64>],
    sweep: &[f64],
    tol: f64,
) -> Outcome {
    let n = h.dimension();
    let mut grad = vec![0.0; n];
    let mut fold = MarginFold::new(tol);
    for base in bases {
        let mut p = base[..n].to_vec();
        for i in 0..upto {
            let mut prev: Option<f64> = None;
            for &value in sweep {
                p[i] = value;
                let current = coord_functional(kind, h, &p, &mut grad, i);
                if let Some(last) = prev {
                    let diff = if decreasing { last - current } else { current - last };
                    fold.push(rel(diff, last, current), || {
                        format!("{} i={} sweep p_i={value:.4}", fmt_point(&p), i + 1)
                    });
                }
                prev = Some(current);
            }
            p[i] = base[i];
        }
    }
    fold.finish()
}

/// Which aggregate (summed) functional a condition speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SumFunctional {
    /// `Σ_i p_i ∂_i h / h`.
    EtaSum,
    /// `Σ_i (1-p_i) ∂_i h / (1-h)`.
    RhoSum,
}

fn sum_functional(kind: SumFunctional, h: &DistortionFunction, p: &[f64], grad: &mut [f64]) -> f64 {
    let n = h.dimension();
    h.gradient_raw(&p[..n], grad);
    match kind {
        SumFunctional::EtaSum => {
            (0..n).map(|i| p[i] * grad[i]).sum::<f64>() / h.eval_raw(&p[..n])
        }
        SumFunctional::RhoSum => {
            (0..n).map(|i| (1.0 - p[i]) * grad[i]).sum::<f64>() / h.complement_raw(&p[..n])
        }
    }
}

/// `Σφ(h1) ≥ Σφ(h2)` (or `≤`) on the point set.
pub(crate) fn sum_functional_cmp(
    kind: SumFunctional,
    h1: &DistortionFunction,
    h2: &DistortionFunction,
    points: &[Vec<f64>],
    ge: bool,
    tol: f64,
) -> Outcome {
    let mut g1 = vec![0.0; h1.dimension()];
    let mut g2 = vec![0.0; h2.dimension()];
    let mut fold = MarginFold::new(tol);
    for p in points {
        let a = sum_functional(kind, h1, p, &mut g1);
        let b = sum_functional(kind, h2, p, &mut g2);
        let diff = if ge { a - b } else { b - a };
        fold.push(rel(diff, a, b), || format!("{} lhs={a:.6} rhs={b:.6}", fmt_point(p)));
    }
    fold.finish()
}

/// Joint coordinatewise monotonicity of a summed functional: every coordinate
/// is swept separately from each base point.
pub(crate) fn sum_functional_monotone(
    kind: SumFunctional,
    h: &DistortionFunction,
    decreasing: bool,
    bases: &[Vec<f64>],
    sweep: &[f64],
    tol: f64,
) -> Outcome {
    let n = h.dimension();
    let mut grad = vec![0.0; n];
    let mut fold = MarginFold::new(tol);
    for base in bases {
        let mut p = base[..n].to_vec();
        for i in 0..n {
            let mut prev: Option<f64> = None;
            for &value in sweep {
                p[i] = value;
                let current = sum_functional(kind, h, &p, &mut grad);
                if let Some(last) = prev {
                    let diff = if decreasing { last - current } else { current - last };
                    fold.push(rel(diff, last, current), || {
                        format!("{} coord {} at {value:.4}", fmt_point(&p), i + 1)
                    });
                }
                prev = Some(current);
            }
            p[i] = base[i];
        }
    }
    fold.finish()
}

// ---------------------------------------------------------------------------
// scalar (iid) conditions
// ---------------------------------------------------------------------------

/// Monotonicity of `f(p)/g(p)` on the scalar grid.
pub(crate) fn scalar_ratio_monotone(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    grid: &[f64],
    increasing: bool,
    tol: f64,
) -> Outcome {
    let mut fold = MarginFold::new(tol);
    let mut prev: Option<(f64, f64)> = None;
    for &p in grid {
        let den = g(p);
        if den.abs() < RATIO_FLOOR {
            continue;
        }
        let ratio = f(p) / den;
        if let Some((p0, r0)) = prev {
            let diff = if increasing { ratio - r0 } else { r0 - ratio };
            fold.push(rel(diff, r0, ratio), || format!("p∈[{p0:.6},{p:.6}] ratio {r0:.6}→{ratio:.6}"));
        }
        prev = Some((p, ratio));
    }
    fold.finish()
}

/// Monotonicity of a scalar functional on the grid.
pub(crate) fn scalar_monotone(
    f: impl Fn(f64) -> f64,
    grid: &[f64],
    increasing: bool,
    tol: f64,
) -> Outcome {
    let mut fold = MarginFold::new(tol);
    let mut prev: Option<(f64, f64)> = None;
    for &p in grid {
        let value = f(p);
        if let Some((p0, v0)) = prev {
            let diff = if increasing { value - v0 } else { v0 - value };
            fold.push(rel(diff, v0, value), || format!("p∈[{p0:.6},{p:.6}] {v0:.6}→{value:.6}"));
        }
        prev = Some((p, value));
    }
    fold.finish()
}

/// The sign-split condition on a scalar profile: there is a point μ with
/// `κ(p) = p h''/h'` decreasing and positive below μ and
/// `κ̄(p) = (1-p) h''/h'` decreasing and negative above μ.
/// Returns the detected sign-change location of h''.
pub(crate) fn inflection_split(
    profile: &ScalarDistortion,
    grid: &[f64],
    tol: f64,
) -> (Outcome, f64) {
    // detect the sign change of h'' on the grid
    let d2: Vec<f64> = grid.iter().map(|&p| profile.d2(p)).collect();
    let mut mu_hat = if d2[0] >= 0.0 { 1.0 } else { 0.0 };
    for i in 0..d2.len() - 1 {
        if d2[i] >= 0.0 && d2[i + 1] < 0.0 {
            mu_hat = 0.5 * (grid[i] + grid[i + 1]);
            break;
        }
    }
    let step = grid[1] - grid[0];
    let mut fold = MarginFold::new(tol);
    let mut prev_kappa: Option<(f64, f64)> = None;
    let mut prev_kbar: Option<(f64, f64)> = None;
    for &p in grid {
        if p < mu_hat - step {
            let k = profile.kappa(p);
            fold.push(rel(k, k, 1.0), || format!("κ({p:.4})={k:.6} not positive"));
            if let Some((p0, k0)) = prev_kappa {
                fold.push(rel(k0 - k, k0, k), || format!("κ not decreasing on [{p0:.4},{p:.4}]"));
            }
            prev_kappa = Some((p, k));
        } else if p > mu_hat + step {
            let k = profile.kappa_bar(p);
            fold.push(rel(-k, k, 1.0), || format!("κ̄({p:.4})={k:.6} not negative"));
            if let Some((p0, k0)) = prev_kbar {
                fold.push(rel(k0 - k, k0, k), || format!("κ̄ not decreasing on [{p0:.4},{p:.4}]"));
            }
            prev_kbar = Some((p, k));
        }
    }
    (fold.finish(), mu_hat)
}

// ---------------------------------------------------------------------------
// per-θ order conditions on the marginals
// ---------------------------------------------------------------------------

pub(crate) fn conditional_order(
    order: OrderRelation,
    mx: &ConditionalLifetimeModel,
    theta_x: f64,
    my: &ConditionalLifetimeModel,
    theta_y: f64,
    grid: &GridSpec,
) -> OrderVerdict {
    let nan = f64::NAN;
    match order {
        OrderRelation::St => check_st(
            |x| mx.survival(x, theta_x).unwrap_or(nan),
            |x| my.survival(x, theta_y).unwrap_or(nan),
            grid,
        ),
        OrderRelation::Hr => check_hr(
            |x| mx.survival(x, theta_x).unwrap_or(nan),
            |x| my.survival(x, theta_y).unwrap_or(nan),
            grid,
        ),
        OrderRelation::Rhr => check_rhr(
            |x| mx.cdf(x, theta_x).unwrap_or(nan),
            |x| my.cdf(x, theta_y).unwrap_or(nan),
            grid,
        ),
        OrderRelation::Lr => check_lr(
            |x| mx.density(x, theta_x).unwrap_or(nan),
            |x| my.density(x, theta_y).unwrap_or(nan),
            grid,
        ),
    }
}

fn fold_verdict(
    fold: &mut MarginFold,
    verdict: &OrderVerdict,
    label: impl Fn() -> String,
) {
    match verdict.holds {
        Certification::Inconclusive => fold.push(f64::NAN, String::new),
        _ => {
            let w = verdict.witness;
            fold.push(verdict.worst_margin, || {
                let at = w
                    .map(|w| format!(" at x∈[{:.4},{:.4}]", w.x_left, w.x_right))
                    .unwrap_or_default();
                format!("{}{at}", label())
            })
        }
    }
}

/// How component indices of the two systems are matched in a cross condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IndexMatch {
    /// X_i vs Y_i for i < limit.
    Paired(usize),
    /// X_i vs Y_j for all i < n, j < m.
    AllPairs,
}

/// `X_i(θ) ≤_ord Y_j(θ')` for every probe θ (θ' = θ in shared-environment
/// conditions, θ' = θ* for a deterministic second system).
#[allow(clippy::too_many_arguments)]
pub(crate) fn cross_order(
    order: OrderRelation,
    xs: &[ConditionalLifetimeModel],
    ys: &[ConditionalLifetimeModel],
    probes: &[f64],
    theta_y: Option<f64>,
    matching: IndexMatch,
    grid: &GridSpec,
    tol: f64,
) -> Outcome {
    let mut fold = MarginFold::new(tol);
    let index_pairs: Vec<(usize, usize)> = match matching {
        IndexMatch::Paired(limit) => (0..limit).map(|i| (i, i)).collect(),
        IndexMatch::AllPairs => {
            (0..xs.len()).flat_map(|i| (0..ys.len()).map(move |j| (i, j))).collect()
        }
    };
    for &theta in probes {
        for &(i, j) in &index_pairs {
            let verdict =
                conditional_order(order, &xs[i], theta, &ys[j], theta_y.unwrap_or(theta), grid);
            fold_verdict(&mut fold, &verdict, || {
                format!("X{}(θ={theta:.4}) vs Y{}{}", i + 1, j + 1,
                    theta_y.map(|t| format!("(θ*={t:.4})")).unwrap_or_else(|| format!("(θ={theta:.4})")))
            });
        }
    }
    fold.finish()
}

/// Within-family monotonicity in θ: `M_i(θ1) ≤_ord M_i(θ2)` (increasing) or
/// the reverse, over all ordered probe pairs.
pub(crate) fn family_monotone_in_theta(
    order: OrderRelation,
    models: &[ConditionalLifetimeModel],
    pairs: &[(f64, f64)],
    increasing: bool,
    grid: &GridSpec,
    tol: f64,
) -> Outcome {
    let mut fold = MarginFold::new(tol);
    for &(t1, t2) in pairs {
        for (i, m) in models.iter().enumerate() {
            let (lo, hi) = if increasing { (t1, t2) } else { (t2, t1) };
            let verdict = conditional_order(order, m, lo, m, hi, grid);
            fold_verdict(&mut fold, &verdict, || {
                format!("component {} θ-pair ({t1:.4},{t2:.4})", i + 1)
            });
        }
    }
    fold.finish()
}

// ---------------------------------------------------------------------------
// environment order conditions
// ---------------------------------------------------------------------------

/// `Θ1 ≤_ord Θ2`. Discrete pairs get exact ratio tests on the merged atom
/// support; anything involving a continuous law runs on a θ-grid.
pub(crate) fn env_order(
    order: OrderRelation,
    env1: &Environment,
    env2: &Environment,
    tol: f64,
) -> Outcome {
    match (env1, env2) {
        (Environment::Discrete { atoms: a1 }, Environment::Discrete { atoms: a2 }) => {
            let mut support: Vec<f64> = a1.iter().chain(a2.iter()).map(|&(t, _)| t).collect();
            support.sort_by(|x, y| x.total_cmp(y));
            support.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
            // a point strictly below the support pins the left limit
            let mut eval_points = vec![support[0] - 1.0];
            eval_points.extend(support.iter().copied());
            discrete_env_order(order, env1, env2, &eval_points, tol)
        }
        _ => {
            let lo = 0.0;
            let hi = continuous_support_hi(env1).max(continuous_support_hi(env2));
            let grid = GridSpec { x_lo: lo, x_hi: hi, n_points: 256, tol };
            let verdict = match order {
                OrderRelation::St => check_st(|t| env1.survival(t), |t| env2.survival(t), &grid),
                OrderRelation::Hr => check_hr(|t| env1.survival(t), |t| env2.survival(t), &grid),
                OrderRelation::Rhr => check_rhr(|t| env1.cdf(t), |t| env2.cdf(t), &grid),
                OrderRelation::Lr => check_lr(
                    |t| env1.density(t).unwrap_or(f64::NAN),
                    |t| env2.density(t).unwrap_or(f64::NAN),
                    &grid,
                ),
            };
            let mut fold = MarginFold::new(tol);
            fold_verdict(&mut fold, &verdict, || format!("environment {order} on grid"));
            fold.finish()
        }
    }
}

fn continuous_support_hi(env: &Environment) -> f64 {
    match env {
        Environment::Discrete { atoms } => atoms.last().map(|&(t, _)| t).unwrap_or(1.0),
        Environment::Continuous { .. } => {
            *env.probe_thetas(100).last().expect("non-empty probes")
        }
    }
}

fn discrete_env_order(
    order: OrderRelation,
    env1: &Environment,
    env2: &Environment,
    points: &[f64],
    tol: f64,
) -> Outcome {
    let mut fold = MarginFold::new(tol);
    match order {
        OrderRelation::St => {
            for &t in points {
                let s1 = env1.survival(t);
                let s2 = env2.survival(t);
                fold.push(rel(s2 - s1, s1, s2), || format!("t={t:.4} F̄1={s1:.4} F̄2={s2:.4}"));
            }
        }
        OrderRelation::Hr | OrderRelation::Rhr => {
            // ratio of step functions over the support, skipping 0/0 tails
            let values: Vec<(f64, f64, f64)> = points
                .iter()
                .map(|&t| match order {
                    OrderRelation::Hr => (t, env1.survival(t), env2.survival(t)),
                    _ => (t, env1.cdf(t), env2.cdf(t)),
                })
                .collect();
            let mut prev: Option<(f64, f64)> = None;
            for &(t, den, num) in &values {
                if den < RATIO_FLOOR {
                    if num >= RATIO_FLOOR && order == OrderRelation::Rhr {
                        // F2 > 0 while F1 = 0: the ratio starts at infinity
                        fold.push(-1.0, || format!("t={t:.4} F1=0 < F2={num:.4}"));
                    }
                    continue;
                }
                let ratio = num / den;
                if let Some((t0, r0)) = prev {
                    fold.push(rel(ratio - r0, r0, ratio), || {
                        format!("t∈[{t0:.4},{t:.4}] ratio {r0:.4}→{ratio:.4}")
                    });
                } else {
                    fold.push(0.0, String::new);
                }
                prev = Some((t, ratio));
            }
        }
        OrderRelation::Lr => {
            // likelihood ratios on atoms are not used by the catalog
            fold.push(f64::NAN, String::new);
        }
    }
    fold.finish()
}

/// The deterministic-comparison gradient-ratio condition: for every probe θ
/// and index pair (i, j), `∂_j h2(q(x)) / ∂_i h1(p(x,θ))` is nondecreasing in
/// x, where `p(x,θ)` are system 1's conditional survivals and `q(x)` system
/// 2's survivals at its fixed environment.
#[allow(clippy::too_many_arguments)]
pub(crate) fn partial_ratio_increasing(
    h1: &DistortionFunction,
    xs_models: &[ConditionalLifetimeModel],
    h2: &DistortionFunction,
    ys_models: &[ConditionalLifetimeModel],
    theta_star: f64,
    probes: &[f64],
    grid: &GridSpec,
    tol: f64,
) -> Outcome {
    let n = h1.dimension();
    let m = h2.dimension();
    let nodes = grid.ratio_nodes();
    let mut fold = MarginFold::new(tol);
    let mut p = vec![0.0; n];
    let mut q = vec![0.0; m];
    let mut g1 = vec![0.0; n];
    let mut g2 = vec![0.0; m];
    for &theta in probes {
        let mut prev: Option<Vec<(usize, usize, f64)>> = None;
        let mut prev_x = 0.0;
        for &x in &nodes {
            for (i, model) in xs_models.iter().enumerate() {
                p[i] = model.survival(x, theta).unwrap_or(f64::NAN);
            }
            for (j, model) in ys_models.iter().enumerate() {
                q[j] = model.survival(x, theta_star).unwrap_or(f64::NAN);
            }
            if p.iter().chain(q.iter()).any(|v| !v.is_finite()) {
                fold.push(f64::NAN, String::new);
                return fold.finish();
            }
            h1.gradient_raw(&p, &mut g1);
            h2.gradient_raw(&q, &mut g2);
            let mut current = Vec::with_capacity(n * m);
            #[allow(clippy::needless_range_loop)]
            for i in 0..n {
                for j in 0..m {
                    let ratio = if g1[i].abs() < RATIO_FLOOR { f64::NAN } else { g2[j] / g1[i] };
                    current.push((i, j, ratio));
                }
            }
            if let Some(last) = &prev {
                for (&(i, j, r1), &(_, _, r0)) in current.iter().zip(last.iter()) {
                    if !r0.is_finite() || !r1.is_finite() {
                        continue;
                    }
                    fold.push(rel(r1 - r0, r0, r1), || {
                        format!(
                            "θ={theta:.4} (i,j)=({},{}) x∈[{prev_x:.4},{x:.4}] ratio {r0:.5}→{r1:.5}",
                            i + 1,
                            j + 1
                        )
                    });
                }
            }
            prev = Some(current);
            prev_x = x;
        }
    }
    fold.finish()
}
