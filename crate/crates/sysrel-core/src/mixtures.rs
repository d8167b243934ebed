//! Environment laws and the mixture representation of the system lifetime:
//! the unconditional survival is the conditional distortion integrated over
//! the environment law,
//! `F̄(x) = ∫ h(F̄_1(x|θ), …, F̄_n(x|θ)) dF_Θ(θ)`,
//! with the cdf as the complementary integral and the density obtained from
//! the gradient chain rule under the integral sign.
//!
//! Discrete environments integrate exactly; continuous ones use a fixed
//! Gauss–Legendre rule on the (quantile-)truncated support, so every value is
//! deterministic given the node count and truncation level. Summation order
//! is fixed by node index.

use statrs::distribution::ContinuousCDF;
use thiserror::Error;

use crate::distortions::{DistortionError, DistortionFunction};
use crate::lifetimes::{ConditionalLifetimeModel, LifetimeError};
use crate::quadrature::{gauss_jacobi, gauss_legendre_on};

/// Default Gauss–Legendre node count for continuous environments.
pub const DEFAULT_NODES: usize = 64;
/// Default truncation quantile for unbounded environment supports.
pub const DEFAULT_TRUNCATION: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MixtureError {
    #[error("time {0} is negative")]
    NegativeTime(f64),
    #[error("invalid environment: {0}")]
    InvalidEnvironment(String),
    #[error("quadrature not converged at x = {x}: doubling the nodes moved the value by {delta:e}")]
    QuadratureNotConverged { x: f64, delta: f64 },
    #[error("system has {marginals} marginals but the distortion dimension is {distortion}")]
    DimensionMismatch { marginals: usize, distortion: usize },
    #[error("reversed hazard undefined at x = 0")]
    UndefinedAtZero,
    #[error(transparent)]
    Lifetime(#[from] LifetimeError),
    #[error(transparent)]
    Distortion(#[from] DistortionError),
}

/// Named density family for a continuous environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvFamily {
    /// Gamma(shape a, rate b) on [0, ∞).
    Gamma { shape: f64, rate: f64 },
    /// Uniform on [lo, hi].
    Uniform { lo: f64, hi: f64 },
    /// Beta(a, b) mapped affinely onto [lo, hi].
    Beta { a: f64, b: f64, lo: f64, hi: f64 },
}

/// Distribution of the environment variable Θ on a support Ω ⊆ [0, ∞).
#[derive(Debug, Clone, PartialEq)]
pub enum Environment {
    /// Finite support: list of (θ, weight) atoms, weights summing to one.
    Discrete { atoms: Vec<(f64, f64)> },
    /// Absolutely continuous with a named density and a quadrature rule.
    Continuous { family: EnvFamily, nodes: usize, truncation: f64 },
}

impl Environment {
    pub fn discrete(atoms: Vec<(f64, f64)>) -> Result<Self, MixtureError> {
        if atoms.is_empty() {
            return Err(MixtureError::InvalidEnvironment("no atoms".into()));
        }
        let mut total = 0.0;
        for &(theta, w) in &atoms {
            if theta.is_nan() || theta < 0.0 || !theta.is_finite() {
                return Err(MixtureError::InvalidEnvironment(format!(
                    "atom {theta} outside [0, ∞)"
                )));
            }
            if w.is_nan() || w <= 0.0 || !w.is_finite() {
                return Err(MixtureError::InvalidEnvironment(format!(
                    "weight {w} must be positive"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(MixtureError::InvalidEnvironment(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let mut sorted = atoms;
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Environment::Discrete { atoms: sorted })
    }

    /// Point mass at a single θ (a deterministic environment).
    pub fn degenerate(theta: f64) -> Result<Self, MixtureError> {
        Self::discrete(vec![(theta, 1.0)])
    }

    pub fn continuous(family: EnvFamily, nodes: usize, truncation: f64) -> Result<Self, MixtureError> {
        let valid = match family {
            EnvFamily::Gamma { shape, rate } => shape > 0.0 && rate > 0.0,
            EnvFamily::Uniform { lo, hi } => lo >= 0.0 && hi > lo,
            EnvFamily::Beta { a, b, lo, hi } => a > 0.0 && b > 0.0 && lo >= 0.0 && hi > lo,
        };
        if !valid {
            return Err(MixtureError::InvalidEnvironment(format!("{family:?}")));
        }
        if nodes < 2 {
            return Err(MixtureError::InvalidEnvironment(format!("{nodes} quadrature nodes")));
        }
        if !(truncation > 0.0 && truncation < 0.5) {
            return Err(MixtureError::InvalidEnvironment(format!(
                "truncation quantile tail mass {truncation} outside (0, 0.5)"
            )));
        }
        Ok(Environment::Continuous { family, nodes, truncation })
    }

    pub fn is_degenerate(&self) -> Option<f64> {
        match self {
            Environment::Discrete { atoms } if atoms.len() == 1 => Some(atoms[0].0),
            _ => None,
        }
    }

    /// Quadrature representation: (θ, weight) pairs in fixed order. Exact for
    /// discrete environments; Gauss–Legendre × density on the truncated
    /// support for continuous ones.
    pub fn quadrature(&self) -> Result<Vec<(f64, f64)>, MixtureError> {
        self.quadrature_with(None)
    }

    fn quadrature_with(&self, node_override: Option<usize>) -> Result<Vec<(f64, f64)>, MixtureError> {
        let rule = self.raw_quadrature(node_override)?;
        if let Environment::Continuous { .. } = self {
            // renormalize the truncated law so it carries unit mass; this
            // keeps survival(0) = 1 exactly and shrinks the truncation bias
            let mass: f64 = rule.iter().map(|&(_, w)| w).sum();
            return Ok(rule.into_iter().map(|(t, w)| (t, w / mass)).collect());
        }
        Ok(rule)
    }

    fn raw_quadrature(&self, node_override: Option<usize>) -> Result<Vec<(f64, f64)>, MixtureError> {
        match self {
            Environment::Discrete { atoms } => Ok(atoms.clone()),
            Environment::Continuous { family, nodes, truncation } => {
                let n = node_override.unwrap_or(*nodes);
                let (lo, hi) = self.window(*family, *truncation)?;
                let half = 0.5 * (hi - lo);
                match *family {
                    EnvFamily::Uniform { .. } => {
                        let rule = gauss_legendre_on(n, lo, hi);
                        Ok(rule.into_iter().map(|(theta, w)| (theta, w / (hi - lo))).collect())
                    }
                    // The gamma density carries θ^{a-1}; folding it into a
                    // Jacobi weight keeps the rule spectral for every a > 0.
                    EnvFamily::Gamma { shape, rate } => {
                        use statrs::function::gamma::ln_gamma;
                        let (xs, ws) = gauss_jacobi(n, 0.0, shape - 1.0);
                        let scale = (shape * rate.ln() + shape * half.ln() - ln_gamma(shape)).exp();
                        Ok(xs
                            .iter()
                            .zip(ws.iter())
                            .map(|(&x, &w)| {
                                let theta = lo + half * (1.0 + x);
                                (theta, scale * w * (-rate * theta).exp())
                            })
                            .collect())
                    }
                    EnvFamily::Beta { a, b, .. } => {
                        use statrs::function::beta::ln_beta;
                        let (xs, ws) = gauss_jacobi(n, b - 1.0, a - 1.0);
                        let scale = (-(a + b - 1.0) * 2f64.ln() - ln_beta(a, b)).exp();
                        Ok(xs
                            .iter()
                            .zip(ws.iter())
                            .map(|(&x, &w)| (lo + half * (1.0 + x), scale * w))
                            .collect())
                    }
                }
            }
        }
    }

    fn window(&self, family: EnvFamily, truncation: f64) -> Result<(f64, f64), MixtureError> {
        match family {
            EnvFamily::Uniform { lo, hi } | EnvFamily::Beta { lo, hi, .. } => Ok((lo, hi)),
            EnvFamily::Gamma { shape, rate } => {
                let dist = statrs::distribution::Gamma::new(shape, rate).map_err(|e| {
                    MixtureError::InvalidEnvironment(format!("gamma({shape},{rate}): {e}"))
                })?;
                Ok((0.0, dist.inverse_cdf(1.0 - truncation)))
            }
        }
    }

    fn density_at(&self, family: EnvFamily, theta: f64) -> f64 {
        match family {
            EnvFamily::Gamma { shape, rate } => {
                use statrs::function::gamma::ln_gamma;
                if theta <= 0.0 {
                    return 0.0;
                }
                (shape * rate.ln() + (shape - 1.0) * theta.ln() - rate * theta - ln_gamma(shape))
                    .exp()
            }
            EnvFamily::Uniform { lo, hi } => {
                if theta < lo || theta > hi {
                    0.0
                } else {
                    1.0 / (hi - lo)
                }
            }
            EnvFamily::Beta { a, b, lo, hi } => {
                if theta <= lo || theta >= hi {
                    return 0.0;
                }
                use statrs::function::beta::ln_beta;
                let z = (theta - lo) / (hi - lo);
                ((a - 1.0) * z.ln() + (b - 1.0) * (1.0 - z).ln() - ln_beta(a, b)).exp()
                    / (hi - lo)
            }
        }
    }

    /// P(Θ ≤ t).
    pub fn cdf(&self, t: f64) -> f64 {
        match self {
            Environment::Discrete { atoms } => {
                atoms.iter().filter(|&&(theta, _)| theta <= t).map(|&(_, w)| w).sum()
            }
            Environment::Continuous { family, .. } => match *family {
                EnvFamily::Gamma { shape, rate } => {
                    if t <= 0.0 {
                        0.0
                    } else {
                        statrs::function::gamma::gamma_lr(shape, rate * t)
                    }
                }
                EnvFamily::Uniform { lo, hi } => ((t - lo) / (hi - lo)).clamp(0.0, 1.0),
                EnvFamily::Beta { a, b, lo, hi } => {
                    let z = ((t - lo) / (hi - lo)).clamp(0.0, 1.0);
                    statrs::function::beta::beta_reg(a, b, z)
                }
            },
        }
    }

    /// P(Θ > t).
    pub fn survival(&self, t: f64) -> f64 {
        match self {
            Environment::Discrete { atoms } => {
                atoms.iter().filter(|&&(theta, _)| theta > t).map(|&(_, w)| w).sum()
            }
            _ => 1.0 - self.cdf(t),
        }
    }

    /// Density at θ for continuous environments; `None` for discrete ones.
    pub fn density(&self, theta: f64) -> Option<f64> {
        match self {
            Environment::Discrete { .. } => None,
            Environment::Continuous { family, .. } => Some(self.density_at(*family, theta)),
        }
    }

    /// Finite probe set used when a hypothesis quantifies over all θ ∈ Ω:
    /// the atoms themselves for discrete environments, evenly spaced
    /// quantiles for continuous ones (count chosen so that the number of
    /// ordered probe pairs stays within `pair_cap`).
    pub fn probe_thetas(&self, pair_cap: usize) -> Vec<f64> {
        match self {
            Environment::Discrete { atoms } => atoms.iter().map(|&(t, _)| t).collect(),
            Environment::Continuous { family, .. } => {
                let mut count = 2usize;
                while (count + 1) * count / 2 <= pair_cap && count < 16 {
                    count += 1;
                }
                let quantiles: Vec<f64> =
                    (0..count).map(|i| (i as f64 + 0.5) / count as f64).collect();
                quantiles.into_iter().map(|q| self.quantile_at(*family, q)).collect()
            }
        }
    }

    fn quantile_at(&self, family: EnvFamily, q: f64) -> f64 {
        match family {
            EnvFamily::Gamma { shape, rate } => {
                statrs::distribution::Gamma::new(shape, rate).map(|d| d.inverse_cdf(q)).unwrap_or(0.0)
            }
            EnvFamily::Uniform { lo, hi } => lo + q * (hi - lo),
            EnvFamily::Beta { a, b, lo, hi } => {
                let d = statrs::distribution::Beta::new(a, b).unwrap();
                lo + d.inverse_cdf(q) * (hi - lo)
            }
        }
    }

    /// Draws θ by inverse-transform sampling from a uniform variate.
    pub fn sample_with(&self, uniform: f64) -> f64 {
        match self {
            Environment::Discrete { atoms } => {
                let mut acc = 0.0;
                for &(theta, w) in atoms {
                    acc += w;
                    if uniform <= acc {
                        return theta;
                    }
                }
                atoms.last().expect("non-empty atoms").0
            }
            Environment::Continuous { family, .. } => {
                self.quantile_at(*family, uniform.clamp(1e-15, 1.0 - 1e-15))
            }
        }
    }
}

/// The lifetime of a coherent system with copula-dependent components in a
/// random environment.
#[derive(Debug, Clone)]
pub struct MixedSystemLifetime {
    distortion: DistortionFunction,
    marginals: Vec<ConditionalLifetimeModel>,
    environment: Environment,
    quad: Vec<(f64, f64)>,
}

impl MixedSystemLifetime {
    pub fn new(
        distortion: DistortionFunction,
        marginals: Vec<ConditionalLifetimeModel>,
        environment: Environment,
    ) -> Result<Self, MixtureError> {
        if marginals.len() != distortion.dimension() {
            return Err(MixtureError::DimensionMismatch {
                marginals: marginals.len(),
                distortion: distortion.dimension(),
            });
        }
        let quad = environment.quadrature()?;
        Ok(Self { distortion, marginals, environment, quad })
    }

    pub fn distortion(&self) -> &DistortionFunction {
        &self.distortion
    }

    pub fn marginals(&self) -> &[ConditionalLifetimeModel] {
        &self.marginals
    }

    pub fn environment(&self) -> &Environment {
        &self.environment
    }

    fn conditional_survivals(&self, x: f64, theta: f64, buf: &mut [f64]) -> Result<(), MixtureError> {
        for (i, m) in self.marginals.iter().enumerate() {
            buf[i] = m.survival(x, theta)?;
        }
        Ok(())
    }

    fn survival_on(&self, x: f64, quad: &[(f64, f64)]) -> Result<f64, MixtureError> {
        if x < 0.0 || x.is_nan() {
            return Err(MixtureError::NegativeTime(x));
        }
        let n = self.marginals.len();
        let mut p = vec![0.0; n];
        let mut acc = 0.0;
        for &(theta, w) in quad {
            self.conditional_survivals(x, theta, &mut p)?;
            acc += w * self.distortion.eval_raw(&p);
        }
        Ok(acc)
    }

    /// F̄(x): the environment mixture of the conditional system survival.
    pub fn survival(&self, x: f64) -> Result<f64, MixtureError> {
        self.survival_on(x, &self.quad)
    }

    /// F̄(x) with a quadrature-convergence guard: the node count is doubled
    /// and the two values must agree within `tol`.
    pub fn survival_checked(&self, x: f64, tol: f64) -> Result<f64, MixtureError> {
        let value = self.survival(x)?;
        if let Environment::Continuous { nodes, .. } = self.environment {
            let fine = self.environment.quadrature_with(Some(nodes * 2))?;
            let refined = self.survival_on(x, &fine)?;
            let delta = (value - refined).abs();
            if delta > tol {
                return Err(MixtureError::QuadratureNotConverged { x, delta });
            }
        }
        Ok(value)
    }

    /// F(x) = ∫ [1 - h(F̄(x|θ))] dF_Θ(θ).
    pub fn cdf(&self, x: f64) -> Result<f64, MixtureError> {
        if x < 0.0 || x.is_nan() {
            return Err(MixtureError::NegativeTime(x));
        }
        let n = self.marginals.len();
        let mut p = vec![0.0; n];
        let mut acc = 0.0;
        for &(theta, w) in &self.quad {
            self.conditional_survivals(x, theta, &mut p)?;
            acc += w * (1.0 - self.distortion.eval_raw(&p));
        }
        Ok(acc)
    }

    /// f(x) = ∫ Σ_i f_i(x|θ) ∂h/∂p_i dF_Θ(θ) (gradient chain rule).
    pub fn density(&self, x: f64) -> Result<f64, MixtureError> {
        if x < 0.0 || x.is_nan() {
            return Err(MixtureError::NegativeTime(x));
        }
        let n = self.marginals.len();
        let mut p = vec![0.0; n];
        let mut grad = vec![0.0; n];
        let mut acc = 0.0;
        for &(theta, w) in &self.quad {
            self.conditional_survivals(x, theta, &mut p)?;
            self.distortion.gradient_raw(&p, &mut grad);
            let mut inner = 0.0;
            for (i, m) in self.marginals.iter().enumerate() {
                inner += m.density(x, theta)? * grad[i];
            }
            acc += w * inner;
        }
        Ok(acc)
    }

    /// Hazard of the mixed lifetime (not the mixture of hazards).
    pub fn hazard(&self, x: f64) -> Result<f64, MixtureError> {
        Ok(self.density(x)? / self.survival(x)?)
    }

    /// Reversed hazard of the mixed lifetime.
    pub fn reversed_hazard(&self, x: f64) -> Result<f64, MixtureError> {
        if x == 0.0 {
            return Err(MixtureError::UndefinedAtZero);
        }
        Ok(self.density(x)? / self.cdf(x)?)
    }
}
