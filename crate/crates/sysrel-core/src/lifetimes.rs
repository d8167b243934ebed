//! Conditional component-lifetime models `F̄(x|θ)` with density, hazard and
//! reversed hazard, for the environment links used by the comparison rules.
//!
//! A model is a baseline law plus a link describing how the environment value
//! θ acts on it:
//!
//! * `scale`: `F̄(x|θ) = F̄₀(θₑx)`
//! * `mult-frailty`: `F̄(x|θ) = F̄₀(x)^{θₑ}` (hazard `θₑ·r₀(x)`)
//! * `add-frailty`: `F̄(x|θ) = F̄₀(x)·e^{-θₑx}` (hazard `r₀(x)+θₑ`)
//! * `none`: θ is ignored.
//!
//! The declared orientation selects the effective parameter `θₑ`: the
//! `decreasing-in-θ` orientation uses `θₑ = θ` (a harsher environment, i.e.
//! larger θ, shortens lifetimes — the natural direction of every link), and
//! `increasing-in-θ` uses `θₑ = 1/θ`, so larger θ lengthens lifetimes. The
//! orientation is declared, not inferred; order checkers verify it.

use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LifetimeError {
    #[error("time {0} is negative")]
    NegativeTime(f64),
    #[error("environment value {theta} outside the admissible support: {reason}")]
    ThetaOutOfSupport { theta: f64, reason: &'static str },
    #[error("reversed hazard undefined at x = 0 (distribution has no mass there)")]
    UndefinedAtZero,
    #[error("invalid parameter for {family}: {message}")]
    InvalidParameter { family: &'static str, message: String },
}

/// Baseline lifetime law in a fixed (deterministic) environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Baseline {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Gamma { shape: f64, rate: f64 },
}

impl Baseline {
    fn validate(self) -> Result<Self, LifetimeError> {
        let ok = match self {
            Baseline::Exponential { rate } => rate > 0.0 && rate.is_finite(),
            Baseline::Weibull { shape, scale } => {
                shape > 0.0 && scale > 0.0 && shape.is_finite() && scale.is_finite()
            }
            Baseline::Gamma { shape, rate } => {
                shape > 0.0 && rate > 0.0 && shape.is_finite() && rate.is_finite()
            }
        };
        if ok {
            Ok(self)
        } else {
            Err(LifetimeError::InvalidParameter {
                family: self.name(),
                message: format!("{self:?}"),
            })
        }
    }

    fn name(self) -> &'static str {
        match self {
            Baseline::Exponential { .. } => "exponential",
            Baseline::Weibull { .. } => "weibull",
            Baseline::Gamma { .. } => "gamma",
        }
    }

    /// ln F̄₀(x), computed without cancellation near x = 0.
    fn ln_survival(self, x: f64) -> f64 {
        match self {
            Baseline::Exponential { rate } => -rate * x,
            Baseline::Weibull { shape, scale } => -(x / scale).powf(shape),
            Baseline::Gamma { shape, rate } => {
                if x == 0.0 {
                    return 0.0;
                }
                let p = gamma_lr(shape, rate * x);
                if p < 0.5 {
                    (-p).ln_1p()
                } else {
                    gamma_ur(shape, rate * x).ln()
                }
            }
        }
    }

    fn density(self, x: f64) -> f64 {
        match self {
            Baseline::Exponential { rate } => rate * (-rate * x).exp(),
            Baseline::Weibull { shape, scale } => {
                let z = x / scale;
                if x == 0.0 {
                    // limit: +inf for shape < 1, 1/scale for shape = 1, 0 for shape > 1
                    return match shape.partial_cmp(&1.0).unwrap() {
                        std::cmp::Ordering::Less => f64::INFINITY,
                        std::cmp::Ordering::Equal => 1.0 / scale,
                        std::cmp::Ordering::Greater => 0.0,
                    };
                }
                (shape / scale) * z.powf(shape - 1.0) * (-z.powf(shape)).exp()
            }
            Baseline::Gamma { shape, rate } => {
                if x == 0.0 {
                    return match shape.partial_cmp(&1.0).unwrap() {
                        std::cmp::Ordering::Less => f64::INFINITY,
                        std::cmp::Ordering::Equal => rate,
                        std::cmp::Ordering::Greater => 0.0,
                    };
                }
                (shape * rate.ln() + (shape - 1.0) * x.ln() - rate * x - ln_gamma(shape)).exp()
            }
        }
    }

    /// Inverse of the baseline survival: x with F̄₀(x) = u, u ∈ (0, 1].
    fn inverse_survival(self, u: f64) -> f64 {
        match self {
            Baseline::Exponential { rate } => -u.ln() / rate,
            Baseline::Weibull { shape, scale } => scale * (-u.ln()).powf(1.0 / shape),
            Baseline::Gamma { shape, rate } => {
                if u >= 1.0 {
                    return 0.0;
                }
                // bisection on ln-survival (monotone decreasing)
                let target = u.ln();
                let mut lo = 0.0f64;
                let mut hi = (shape / rate).max(1.0 / rate);
                while self.ln_survival(hi) > target {
                    hi *= 2.0;
                    if hi > 1e300 {
                        break;
                    }
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.ln_survival(mid) > target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if (hi - lo) <= 1e-14 * hi.max(1.0) {
                        break;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

/// How the environment value acts on the baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvironmentLink {
    None,
    Scale,
    MultiplicativeFrailty,
    AdditiveFrailty,
}

/// Declared direction of the stochastic behaviour in θ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// Larger θ ⇒ stochastically smaller lifetime (the links' natural sense).
    #[default]
    DecreasingInTheta,
    /// Larger θ ⇒ stochastically larger lifetime (link applied with 1/θ).
    IncreasingInTheta,
}

/// A component lifetime law conditional on the environment value θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalLifetimeModel {
    baseline: Baseline,
    link: EnvironmentLink,
    orientation: Orientation,
}

impl ConditionalLifetimeModel {
    pub fn new(
        baseline: Baseline,
        link: EnvironmentLink,
        orientation: Orientation,
    ) -> Result<Self, LifetimeError> {
        Ok(Self { baseline: baseline.validate()?, link, orientation })
    }

    pub fn baseline(&self) -> Baseline {
        self.baseline
    }

    pub fn link(&self) -> EnvironmentLink {
        self.link
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Effective link parameter after applying the orientation.
    fn theta_eff(&self, theta: f64) -> Result<f64, LifetimeError> {
        if theta.is_nan() || theta < 0.0 {
            return Err(LifetimeError::ThetaOutOfSupport {
                theta,
                reason: "environment values live in [0, ∞)",
            });
        }
        let eff = match self.orientation {
            Orientation::DecreasingInTheta => theta,
            Orientation::IncreasingInTheta => {
                if theta == 0.0 {
                    return Err(LifetimeError::ThetaOutOfSupport {
                        theta,
                        reason: "increasing orientation needs θ > 0",
                    });
                }
                1.0 / theta
            }
        };
        match self.link {
            EnvironmentLink::Scale | EnvironmentLink::MultiplicativeFrailty => {
                if eff <= 0.0 {
                    return Err(LifetimeError::ThetaOutOfSupport {
                        theta,
                        reason: "scale and multiplicative links need θ > 0",
                    });
                }
            }
            EnvironmentLink::None | EnvironmentLink::AdditiveFrailty => {}
        }
        Ok(eff)
    }

    /// ln F̄(x|θ).
    pub fn ln_survival(&self, x: f64, theta: f64) -> Result<f64, LifetimeError> {
        if x < 0.0 || x.is_nan() {
            return Err(LifetimeError::NegativeTime(x));
        }
        let eff = self.theta_eff(theta)?;
        Ok(match self.link {
            EnvironmentLink::None => self.baseline.ln_survival(x),
            EnvironmentLink::Scale => self.baseline.ln_survival(eff * x),
            EnvironmentLink::MultiplicativeFrailty => eff * self.baseline.ln_survival(x),
            EnvironmentLink::AdditiveFrailty => self.baseline.ln_survival(x) - eff * x,
        })
    }

    /// F̄(x|θ).
    pub fn survival(&self, x: f64, theta: f64) -> Result<f64, LifetimeError> {
        Ok(self.ln_survival(x, theta)?.exp())
    }

    /// F(x|θ) = 1 - F̄(x|θ), accurate for small x.
    pub fn cdf(&self, x: f64, theta: f64) -> Result<f64, LifetimeError> {
        let ls = self.ln_survival(x, theta)?;
        Ok(if ls > -0.693 { -ls.exp_m1() } else { 1.0 - ls.exp() })
    }

    /// f(x|θ) = -∂F̄/∂x.
    pub fn density(&self, x: f64, theta: f64) -> Result<f64, LifetimeError> {
        if x < 0.0 || x.is_nan() {
            return Err(LifetimeError::NegativeTime(x));
        }
        let eff = self.theta_eff(theta)?;
        Ok(match self.link {
            EnvironmentLink::None => self.baseline.density(x),
            EnvironmentLink::Scale => eff * self.baseline.density(eff * x),
            EnvironmentLink::MultiplicativeFrailty => {
                // θₑ F̄₀(x)^{θₑ-1} f₀(x)
                eff * ((eff - 1.0) * self.baseline.ln_survival(x)).exp() * self.baseline.density(x)
            }
            EnvironmentLink::AdditiveFrailty => {
                let surv0 = self.baseline.ln_survival(x).exp();
                (-eff * x).exp() * (self.baseline.density(x) + eff * surv0)
            }
        })
    }

    /// r(x|θ) = f/F̄.
    pub fn hazard(&self, x: f64, theta: f64) -> Result<f64, LifetimeError> {
        Ok(self.density(x, theta)? / self.survival(x, theta)?)
    }

    /// r̃(x|θ) = f/F; undefined at x = 0.
    pub fn reversed_hazard(&self, x: f64, theta: f64) -> Result<f64, LifetimeError> {
        if x == 0.0 {
            return Err(LifetimeError::UndefinedAtZero);
        }
        Ok(self.density(x, theta)? / self.cdf(x, theta)?)
    }

    /// x with F̄(x|θ) = u, for u ∈ (0, 1]; closed form where the link allows,
    /// otherwise bisection on the exact ln-survival.
    pub fn inverse_survival(&self, u: f64, theta: f64) -> Result<f64, LifetimeError> {
        assert!(u > 0.0 && u <= 1.0, "inverse survival needs u in (0, 1]");
        let eff = self.theta_eff(theta)?;
        Ok(match self.link {
            EnvironmentLink::None => self.baseline.inverse_survival(u),
            EnvironmentLink::Scale => self.baseline.inverse_survival(u) / eff,
            EnvironmentLink::MultiplicativeFrailty => {
                // F̄₀(x)^θₑ = u  ⇔  ln F̄₀(x) = ln u / θₑ
                self.baseline.inverse_survival((u.ln() / eff).exp())
            }
            EnvironmentLink::AdditiveFrailty => {
                if let Baseline::Exponential { rate } = self.baseline {
                    -u.ln() / (rate + eff)
                } else {
                    let target = u.ln();
                    let mut lo = 0.0f64;
                    let mut hi = 1.0f64;
                    while self.ln_survival(hi, theta)? > target {
                        hi *= 2.0;
                        if hi > 1e300 {
                            break;
                        }
                    }
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if self.ln_survival(mid, theta)? > target {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                        if (hi - lo) <= 1e-13 * hi.max(1e-6) {
                            break;
                        }
                    }
                    0.5 * (lo + hi)
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::points::linspace;

    fn model(baseline: Baseline, link: EnvironmentLink) -> ConditionalLifetimeModel {
        ConditionalLifetimeModel::new(baseline, link, Orientation::DecreasingInTheta).unwrap()
    }

    #[test]
    fn exponential_multiplicative_frailty() {
        let m = model(Baseline::Exponential { rate: 1.0 }, EnvironmentLink::MultiplicativeFrailty);
        let s = m.survival(1.0, 2.0).unwrap();
        assert!((s - (-2.0f64).exp()).abs() < 1e-15);
        // hazard is θλ, constant in x
        for x in [0.2, 1.0, 3.5] {
            assert!((m.hazard(x, 2.0).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn survival_is_one_at_zero() {
        let models = vec![
            model(Baseline::Exponential { rate: 2.0 }, EnvironmentLink::Scale),
            model(Baseline::Weibull { shape: 2.0, scale: 1.0 }, EnvironmentLink::MultiplicativeFrailty),
            model(Baseline::Gamma { shape: 2.0, rate: 1.0 }, EnvironmentLink::AdditiveFrailty),
        ];
        for m in &models {
            assert_eq!(m.survival(0.0, 1.3).unwrap(), 1.0);
        }
    }

    #[test]
    fn weibull_scale_link() {
        // F̄(2 | θ=0.5) = exp(-(0.5·2)²) = e^{-1}
        let m = model(Baseline::Weibull { shape: 2.0, scale: 1.0 }, EnvironmentLink::Scale);
        let s = m.survival(2.0, 0.5).unwrap();
        assert!((s - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn additive_frailty_shifts_hazard() {
        let m = model(Baseline::Weibull { shape: 1.5, scale: 2.0 }, EnvironmentLink::AdditiveFrailty);
        let base = model(Baseline::Weibull { shape: 1.5, scale: 2.0 }, EnvironmentLink::None);
        for x in [0.3, 1.0, 2.5] {
            let got = m.hazard(x, 0.7).unwrap();
            let want = base.hazard(x, 1.0).unwrap() + 0.7;
            assert!((got - want).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn reversed_hazard_of_unit_exponential() {
        let m = model(Baseline::Exponential { rate: 1.0 }, EnvironmentLink::None);
        let got = m.reversed_hazard(1.0, 1.0).unwrap();
        assert!((got - 0.581976706869326).abs() < 1e-12, "got={got}");
        assert!(matches!(m.reversed_hazard(0.0, 1.0), Err(LifetimeError::UndefinedAtZero)));
    }

    #[test]
    fn hazard_identities_hold() {
        let models = vec![
            model(Baseline::Exponential { rate: 0.7 }, EnvironmentLink::MultiplicativeFrailty),
            model(Baseline::Weibull { shape: 2.2, scale: 1.4 }, EnvironmentLink::Scale),
            model(Baseline::Gamma { shape: 1.8, rate: 2.0 }, EnvironmentLink::AdditiveFrailty),
            model(Baseline::Gamma { shape: 0.9, rate: 1.0 }, EnvironmentLink::MultiplicativeFrailty),
        ];
        for m in &models {
            for x in [0.2, 0.9, 2.1] {
                for theta in [0.5, 1.0, 2.5] {
                    let f = m.density(x, theta).unwrap();
                    let surv = m.survival(x, theta).unwrap();
                    let cdf = m.cdf(x, theta).unwrap();
                    assert!((surv + cdf - 1.0).abs() < 1e-12);
                    assert!((m.hazard(x, theta).unwrap() - f / surv).abs() < 1e-10);
                    assert!((m.reversed_hazard(x, theta).unwrap() - f / cdf).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn density_matches_derivative_of_survival() {
        let models = vec![
            model(Baseline::Exponential { rate: 1.3 }, EnvironmentLink::AdditiveFrailty),
            model(Baseline::Weibull { shape: 1.7, scale: 0.8 }, EnvironmentLink::MultiplicativeFrailty),
            model(Baseline::Gamma { shape: 2.5, rate: 1.1 }, EnvironmentLink::Scale),
        ];
        let h = 1e-6;
        for m in &models {
            for x in linspace(0.1, 3.0, 10) {
                let fd = (m.survival(x - h, 1.6).unwrap() - m.survival(x + h, 1.6).unwrap())
                    / (2.0 * h);
                let f = m.density(x, 1.6).unwrap();
                assert!((fd - f).abs() <= 1e-6 * f.abs().max(1e-3), "x={x} fd={fd} f={f}");
            }
        }
    }

    #[test]
    fn density_integrates_to_one() {
        let m = model(Baseline::Weibull { shape: 2.0, scale: 1.0 }, EnvironmentLink::MultiplicativeFrailty);
        let theta = 1.7;
        // pick T with negligible tail, integrate with Gauss-Legendre
        let t_end = 6.0;
        assert!(m.survival(t_end, theta).unwrap() < 1e-10);
        let rule = crate::quadrature::gauss_legendre_on(128, 0.0, t_end);
        let mass: f64 = rule.iter().map(|&(x, w)| w * m.density(x, theta).unwrap()).sum::<f64>()
            + m.survival(t_end, theta).unwrap();
        assert!((mass - 1.0).abs() < 1e-6, "mass={mass}");
    }

    #[test]
    fn multiplicative_frailty_orders_hazards_in_theta() {
        let m = model(Baseline::Weibull { shape: 1.5, scale: 1.0 }, EnvironmentLink::MultiplicativeFrailty);
        for x in linspace(0.05, 3.0, 30) {
            let r_low = m.hazard(x, 1.0).unwrap();
            let r_high = m.hazard(x, 2.0).unwrap();
            assert!(r_high >= r_low);
        }
    }

    #[test]
    fn increasing_orientation_flips_the_direction() {
        let m = ConditionalLifetimeModel::new(
            Baseline::Exponential { rate: 3.0 },
            EnvironmentLink::MultiplicativeFrailty,
            Orientation::IncreasingInTheta,
        )
        .unwrap();
        // hazard = λ/θ: larger θ gives smaller hazard, longer life
        assert!((m.hazard(1.0, 2.0).unwrap() - 1.5).abs() < 1e-12);
        assert!(m.survival(1.0, 2.0).unwrap() > m.survival(1.0, 1.0).unwrap());
        assert!(matches!(m.survival(1.0, 0.0), Err(LifetimeError::ThetaOutOfSupport { .. })));
    }

    #[test]
    fn inverse_survival_round_trips() {
        let models = vec![
            model(Baseline::Exponential { rate: 2.0 }, EnvironmentLink::MultiplicativeFrailty),
            model(Baseline::Weibull { shape: 1.4, scale: 2.0 }, EnvironmentLink::Scale),
            model(Baseline::Gamma { shape: 2.0, rate: 1.5 }, EnvironmentLink::AdditiveFrailty),
            model(Baseline::Weibull { shape: 0.8, scale: 1.0 }, EnvironmentLink::AdditiveFrailty),
        ];
        for m in &models {
            for u in [0.99, 0.7, 0.4, 0.1, 0.01] {
                let x = m.inverse_survival(u, 1.3).unwrap();
                let back = m.survival(x, 1.3).unwrap();
                assert!((back - u).abs() < 1e-9, "{m:?} u={u} x={x} back={back}");
            }
        }
    }

    #[test]
    fn negative_time_and_bad_theta_are_rejected() {
        let m = model(Baseline::Exponential { rate: 1.0 }, EnvironmentLink::MultiplicativeFrailty);
        assert!(matches!(m.survival(-0.5, 1.0), Err(LifetimeError::NegativeTime(_))));
        assert!(matches!(m.survival(1.0, -1.0), Err(LifetimeError::ThetaOutOfSupport { .. })));
        assert!(matches!(m.survival(1.0, 0.0), Err(LifetimeError::ThetaOutOfSupport { .. })));
        assert!(Baseline::Exponential { rate: 0.0 }.validate().is_err());
    }
}
