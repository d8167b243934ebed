//! Monte Carlo oracle: samples dependent component lifetimes under sampled
//! environments and estimates survival curves, independently validating the
//! quadrature and distortion algebra.
//!
//! Sampling happens on the survival-copula scale: a vector `V` is drawn with
//! joint cdf equal to the survival copula `C`, and lifetimes are produced
//! through the inverse survival functions, `X_i = F̄_i^{-1}(V_i | θ)`. A low
//! `V_i` therefore means a long life, and the joint survival of the lifetime
//! vector is exactly `C(F̄_1(x_1|θ), …, F̄_n(x_n|θ))` — the object the
//! distortion pipeline integrates.
//!
//! Reproducibility: estimates are accumulated as integer counts over a fixed
//! number of ChaCha substreams (one stream id per chunk), then reduced in
//! substream order. The result is bit-identical for a given seed regardless
//! of how many worker threads rayon uses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::copulas::{CopulaFamily, SurvivalCopula};
use crate::lifetimes::LifetimeError;
use crate::mixtures::{MixedSystemLifetime, MixtureError};

/// Number of independent RNG substreams the sample range is split into.
pub const SUBSTREAMS: u64 = 64;

/// Smallest admissible sample count.
pub const MIN_SAMPLES: usize = 1_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("no sampler for copula family {family} in dimension {dim}")]
    UnsupportedFamilyDimension { family: &'static str, dim: usize },
    #[error("sample count {0} below the minimum of {MIN_SAMPLES}")]
    SampleCountTooSmall(usize),
    #[error("empty evaluation grid")]
    EmptyGrid,
    #[error(transparent)]
    Mixture(#[from] MixtureError),
    #[error(transparent)]
    Lifetime(#[from] LifetimeError),
}

/// A reproducible simulation request.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub n_samples: usize,
    pub seed: u64,
    pub x_grid: Vec<f64>,
}

impl SimulationPlan {
    pub fn new(n_samples: usize, seed: u64, x_grid: Vec<f64>) -> Result<Self, SimError> {
        if n_samples < MIN_SAMPLES {
            return Err(SimError::SampleCountTooSmall(n_samples));
        }
        if x_grid.is_empty() {
            return Err(SimError::EmptyGrid);
        }
        Ok(Self { n_samples, seed, x_grid })
    }
}

/// One point of the estimated survival curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub analytic: f64,
    pub abs_z: f64,
}

/// Draws a vector whose joint law has the given survival copula as its cdf.
///
/// Supported: independence (any dimension), FGM (any dimension, rejection
/// sampling against the iid-uniform proposal with density bound 2), and
/// Gumbel–Barnett in dimension 2 (conditional-cdf inversion by bisection).
pub fn sample_copula(copula: &SurvivalCopula, rng: &mut impl Rng) -> Result<Vec<f64>, SimError> {
    sample_copula_counted(copula, rng).map(|(v, _)| v)
}

/// Like [`sample_copula`], additionally reporting the number of proposal
/// rounds the rejection sampler used (always 1 for direct samplers).
pub fn sample_copula_counted(
    copula: &SurvivalCopula,
    rng: &mut impl Rng,
) -> Result<(Vec<f64>, u32), SimError> {
    let dim = copula.dimension();
    match copula.family() {
        CopulaFamily::Independence => Ok(((0..dim).map(|_| rng.random::<f64>()).collect(), 1)),
        CopulaFamily::Fgm(lambda) => {
            // density c(u) = 1 + λ Π(1-2u_i) ∈ [0, 2] for |λ| ≤ 1
            let mut attempts = 0u32;
            loop {
                attempts += 1;
                let u: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
                let density = 1.0 + lambda * u.iter().map(|&v| 1.0 - 2.0 * v).product::<f64>();
                if rng.random::<f64>() * 2.0 <= density {
                    return Ok((u, attempts));
                }
            }
        }
        CopulaFamily::GumbelBarnett(alpha) => {
            if dim != 2 {
                return Err(SimError::UnsupportedFamilyDimension {
                    family: "gumbel-barnett",
                    dim,
                });
            }
            let u1: f64 = rng.random();
            let target: f64 = rng.random();
            // invert v ↦ ∂C/∂u1(u1, v), the conditional cdf given U1 = u1
            let conditional = |v: f64| -> f64 {
                v * (-alpha * u1.ln() * v.ln()).exp() * (1.0 - alpha * v.ln())
            };
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if conditional(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-10 {
                    break;
                }
            }
            Ok((vec![u1, 0.5 * (lo + hi)], 1))
        }
        CopulaFamily::ClaytonOakes(_) => {
            Err(SimError::UnsupportedFamilyDimension { family: "clayton-oakes", dim })
        }
    }
}

/// Draws the environment, the dependent component lifetimes, and the system
/// lifetime from the minimal path sets.
pub fn sample_lifetimes(
    mix: &MixedSystemLifetime,
    rng: &mut impl Rng,
) -> Result<(f64, Vec<f64>, f64), SimError> {
    let theta = mix.environment().sample_with(rng.random());
    let v = sample_copula(mix.distortion().copula(), rng)?;
    let mut lifetimes = Vec::with_capacity(v.len());
    for (vi, model) in v.iter().zip(mix.marginals()) {
        // V = 0 occurs with probability zero but must not panic
        let clamped = vi.clamp(1e-15, 1.0);
        lifetimes.push(model.inverse_survival(clamped, theta)?);
    }
    let tau = system_lifetime(mix, &lifetimes);
    Ok((theta, lifetimes, tau))
}

/// System lifetime from component lifetimes: the best path survives as long
/// as its weakest component.
fn system_lifetime(mix: &MixedSystemLifetime, lifetimes: &[f64]) -> f64 {
    let structure = mix.distortion().structure();
    if let Some(k) = structure.threshold() {
        // k-out-of-n fails at the (n-k+1)-th component failure
        let mut sorted = lifetimes.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        return sorted[lifetimes.len() - k];
    }
    let mut best = 0.0f64;
    for path in structure.expand_paths() {
        let weakest = path.iter().map(|&i| lifetimes[i - 1]).fold(f64::INFINITY, f64::min);
        best = best.max(weakest);
    }
    best
}

/// Estimates the survival curve on the plan's grid with binomial standard
/// errors, alongside the quadrature value and the standardized deviation.
pub fn estimate_survival(
    plan: &SimulationPlan,
    mix: &MixedSystemLifetime,
) -> Result<Vec<CurvePoint>, SimError> {
    if plan.n_samples < MIN_SAMPLES {
        return Err(SimError::SampleCountTooSmall(plan.n_samples));
    }
    if plan.x_grid.is_empty() {
        return Err(SimError::EmptyGrid);
    }
    let grid = &plan.x_grid;
    let per_stream = plan.n_samples / SUBSTREAMS as usize;
    let remainder = plan.n_samples % SUBSTREAMS as usize;
    let counts: Result<Vec<Vec<u64>>, SimError> = (0..SUBSTREAMS)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
            rng.set_stream(stream + 1);
            let quota = per_stream + usize::from((stream as usize) < remainder);
            let mut local = vec![0u64; grid.len()];
            for _ in 0..quota {
                let (_, _, tau) = sample_lifetimes(mix, &mut rng)?;
                for (slot, &x) in local.iter_mut().zip(grid.iter()) {
                    if tau > x {
                        *slot += 1;
                    }
                }
            }
            Ok(local)
        })
        .collect();
    let counts = counts?;
    let n = plan.n_samples as f64;
    let mut out = Vec::with_capacity(grid.len());
    for (j, &x) in grid.iter().enumerate() {
        let hits: u64 = counts.iter().map(|c| c[j]).sum();
        let estimate = hits as f64 / n;
        let stderr = (estimate * (1.0 - estimate) / n).sqrt();
        let analytic = mix.survival(x)?;
        let abs_z = if stderr > 0.0 { (estimate - analytic).abs() / stderr } else { 0.0 };
        out.push(CurvePoint { x, estimate, stderr, analytic, abs_z });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copulas::SurvivalCopula;
    use crate::distortions::DistortionFunction;
    use crate::lifetimes::{Baseline, ConditionalLifetimeModel, EnvironmentLink, Orientation};
    use crate::mixtures::Environment;
    use crate::structures::CoherentStructure;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn exp_frailty(rate: f64) -> ConditionalLifetimeModel {
        ConditionalLifetimeModel::new(
            Baseline::Exponential { rate },
            EnvironmentLink::MultiplicativeFrailty,
            Orientation::DecreasingInTheta,
        )
        .unwrap()
    }

    fn series_parallel_fgm(lambda: f64) -> MixedSystemLifetime {
        let h = DistortionFunction::build(
            CoherentStructure::from_paths(3, &[vec![1, 2], vec![1, 3]]).unwrap(),
            SurvivalCopula::fgm(3, lambda).unwrap(),
        )
        .unwrap();
        MixedSystemLifetime::new(
            h,
            vec![exp_frailty(1.0); 3],
            Environment::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
        )
        .unwrap()
    }

    /// One-sample Kolmogorov–Smirnov statistic against the uniform cdf.
    fn ks_uniform(samples: &mut [f64]) -> f64 {
        samples.sort_by(|a, b| a.total_cmp(b));
        let n = samples.len() as f64;
        samples
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                let lo = (u - i as f64 / n).abs();
                let hi = ((i as f64 + 1.0) / n - u).abs();
                lo.max(hi)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn independence_margins_are_uniform() {
        let c = SurvivalCopula::independence(3).unwrap();
        let mut r = rng(7);
        let n = 100_000;
        let mut firsts = Vec::with_capacity(n);
        for _ in 0..n {
            firsts.push(sample_copula(&c, &mut r).unwrap()[0]);
        }
        let stat = ks_uniform(&mut firsts);
        // 1% critical value ≈ 1.63 / sqrt(n)
        assert!(stat < 1.63 / (n as f64).sqrt(), "KS = {stat}");
    }

    #[test]
    fn fgm_sample_correlation_matches_closed_form() {
        // Pearson correlation of an FGM pair is λ/3
        let lambda = 1.0;
        let c = SurvivalCopula::fgm(2, lambda).unwrap();
        let mut r = rng(11);
        let n = 100_000usize;
        let (mut sx, mut sy, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let u = sample_copula(&c, &mut r).unwrap();
            sx += u[0];
            sy += u[1];
            sxx += u[0] * u[0];
            syy += u[1] * u[1];
            sxy += u[0] * u[1];
        }
        let nf = n as f64;
        let cov = sxy / nf - (sx / nf) * (sy / nf);
        let var_x = sxx / nf - (sx / nf).powi(2);
        let var_y = syy / nf - (sy / nf).powi(2);
        let corr = cov / (var_x * var_y).sqrt();
        // 3σ band for the correlation estimate is roughly 3/sqrt(n)
        assert!((corr - lambda / 3.0).abs() < 3.0 / nf.sqrt() + 0.01, "corr = {corr}");
    }

    #[test]
    fn fgm_rejection_acceptance_rate_is_one_half() {
        let c = SurvivalCopula::fgm(2, 1.0).unwrap();
        let mut r = rng(13);
        let n = 50_000usize;
        let mut attempts = 0u64;
        for _ in 0..n {
            attempts += u64::from(sample_copula_counted(&c, &mut r).unwrap().1);
        }
        let rate = n as f64 / attempts as f64;
        // mean of density/2 over the cube is 1/2; allow ~3σ
        assert!((rate - 0.5).abs() < 0.01, "acceptance rate {rate}");
    }

    #[test]
    fn gumbel_barnett_pair_matches_copula_cdf() {
        // empirical P(U1 ≤ a, U2 ≤ b) must match the copula value
        let alpha = 0.8;
        let c = SurvivalCopula::gumbel_barnett(2, alpha).unwrap();
        let mut r = rng(17);
        let n = 200_000usize;
        let probes = [(0.3, 0.4), (0.5, 0.5), (0.7, 0.2), (0.9, 0.8)];
        let mut hits = [0u64; 4];
        for _ in 0..n {
            let u = sample_copula(&c, &mut r).unwrap();
            for (k, &(a, b)) in probes.iter().enumerate() {
                if u[0] <= a && u[1] <= b {
                    hits[k] += 1;
                }
            }
        }
        for (k, &(a, b)) in probes.iter().enumerate() {
            let want = c.eval(&[a, b]).unwrap();
            let got = hits[k] as f64 / n as f64;
            let se = (want * (1.0 - want) / n as f64).sqrt();
            assert!((got - want).abs() < 4.0 * se, "probe ({a},{b}): got {got}, want {want}");
        }
    }

    #[test]
    fn clayton_oakes_has_no_sampler() {
        let c = SurvivalCopula::clayton_oakes(2, 1.0).unwrap();
        assert!(matches!(
            sample_copula(&c, &mut rng(1)),
            Err(SimError::UnsupportedFamilyDimension { .. })
        ));
        let gb3 = SurvivalCopula::gumbel_barnett(3, 0.5).unwrap();
        assert!(matches!(
            sample_copula(&gb3, &mut rng(1)),
            Err(SimError::UnsupportedFamilyDimension { .. })
        ));
    }

    #[test]
    fn system_lifetime_is_min_of_series_and_path_rule() {
        let series = MixedSystemLifetime::new(
            DistortionFunction::build(
                CoherentStructure::series(3).unwrap(),
                SurvivalCopula::independence(3).unwrap(),
            )
            .unwrap(),
            vec![exp_frailty(1.0); 3],
            Environment::degenerate(1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(system_lifetime(&series, &[3.0, 1.0, 2.0]), 1.0);

        // τ = min{x1, max{x2, x3}}
        let sp = series_parallel_fgm(0.5);
        assert_eq!(system_lifetime(&sp, &[5.0, 1.0, 2.0]), 2.0);
        assert_eq!(system_lifetime(&sp, &[0.5, 1.0, 2.0]), 0.5);

        // 2-of-3 fails at the second failure
        let kofn = MixedSystemLifetime::new(
            DistortionFunction::build(
                CoherentStructure::k_out_of_n(2, 3).unwrap(),
                SurvivalCopula::independence(3).unwrap(),
            )
            .unwrap(),
            vec![exp_frailty(1.0); 3],
            Environment::degenerate(1.0).unwrap(),
        )
        .unwrap();
        assert_eq!(system_lifetime(&kofn, &[3.0, 1.0, 2.0]), 2.0);
    }

    #[test]
    fn two_atom_series_estimate_matches_closed_form() {
        let mix = MixedSystemLifetime::new(
            DistortionFunction::build(
                CoherentStructure::series(2).unwrap(),
                SurvivalCopula::independence(2).unwrap(),
            )
            .unwrap(),
            vec![exp_frailty(1.0); 2],
            Environment::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
        )
        .unwrap();
        let plan = SimulationPlan::new(200_000, 42, vec![0.1, 0.25, 0.5, 1.0, 1.5]).unwrap();
        let curve = estimate_survival(&plan, &mix).unwrap();
        for pt in &curve {
            let want = 0.5 * ((-2.0 * pt.x).exp() + (-4.0 * pt.x).exp());
            assert!((pt.analytic - want).abs() < 1e-12);
            assert!(pt.abs_z <= 3.0, "x={} z={}", pt.x, pt.abs_z);
        }
    }

    #[test]
    fn fgm_scenario_estimate_matches_quadrature() {
        let mix = series_parallel_fgm(0.5);
        let plan = SimulationPlan::new(200_000, 4242, vec![0.25, 0.5, 0.75, 1.0, 1.5]).unwrap();
        let curve = estimate_survival(&plan, &mix).unwrap();
        for pt in &curve {
            assert!(
                pt.abs_z <= 3.0,
                "x={} z={} est={} ana={}",
                pt.x,
                pt.abs_z,
                pt.estimate,
                pt.analytic
            );
        }
    }

    #[test]
    fn fixed_seed_reproduces_identical_curves() {
        let mix = series_parallel_fgm(-0.5);
        let plan = SimulationPlan::new(20_000, 7, vec![0.2, 0.6, 1.2]).unwrap();
        let a = estimate_survival(&plan, &mix).unwrap();
        let b = estimate_survival(&plan, &mix).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_environment_matches_conditional_sampling() {
        // two-sample KS between the mixed sampler at a degenerate env and
        // direct conditional sampling at that θ
        let theta = 1.5;
        let h = DistortionFunction::build(
            CoherentStructure::series(2).unwrap(),
            SurvivalCopula::fgm(2, 0.8).unwrap(),
        )
        .unwrap();
        let model = exp_frailty(1.0);
        let mix = MixedSystemLifetime::new(
            h.clone(),
            vec![model; 2],
            Environment::degenerate(theta).unwrap(),
        )
        .unwrap();
        let n = 20_000usize;
        let mut r = rng(23);
        let mut a: Vec<f64> = (0..n).map(|_| sample_lifetimes(&mix, &mut r).unwrap().2).collect();
        // direct conditional route: same copula, fixed θ
        let mut r2 = rng(24);
        let mut b: Vec<f64> = (0..n)
            .map(|_| {
                let v = sample_copula(h.copula(), &mut r2).unwrap();
                v.iter()
                    .map(|&vi| model.inverse_survival(vi.clamp(1e-15, 1.0), theta).unwrap())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        a.sort_by(|x, y| x.total_cmp(y));
        b.sort_by(|x, y| x.total_cmp(y));
        // two-sample KS statistic
        let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
        while i < n && j < n {
            if a[i] <= b[j] {
                i += 1;
            } else {
                j += 1;
            }
            d = d.max((i as f64 / n as f64 - j as f64 / n as f64).abs());
        }
        let critical = 1.63 * ((2 * n) as f64 / (n * n) as f64).sqrt();
        assert!(d < critical, "two-sample KS {d} ≥ {critical}");
    }

    #[test]
    fn plan_validation() {
        assert!(matches!(
            SimulationPlan::new(999, 1, vec![1.0]),
            Err(SimError::SampleCountTooSmall(999))
        ));
        assert!(matches!(SimulationPlan::new(1000, 1, vec![]), Err(SimError::EmptyGrid)));
    }
}
