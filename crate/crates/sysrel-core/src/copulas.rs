//! Survival copulas with exact first partial derivatives.
//!
//! The catalog covers the families used by the comparison rules: the
//! independence copula, the single-parameter exchangeable FGM copula
//! `C(u) = ∏uᵢ (1 + λ ∏(1-uᵢ))` with `λ ∈ [-1, 1]`, the Gumbel–Barnett
//! copula `C(u) = ∏uᵢ · exp(-α ∏ ln uᵢ)` with `α > 0`, and the Clayton–Oakes
//! copula `C(u) = (Σ uᵢ^{-θ} - (n-1))^{-1/θ}` with `θ > 0`.
//!
//! Note on Gumbel–Barnett for dimension ≥ 3: the formula is used throughout
//! the reliability literature but is 2-increasing (a genuine copula) only for
//! small α / away from the lower corner of the cube; coordinate monotonicity
//! can fail where `α·∏_{j≠i} |ln uⱼ| > 1`. Evaluation and derivatives are
//! exact everywhere; validity-style tests restrict themselves accordingly.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CopulaError {
    #[error("argument has {got} coordinates, copula dimension is {expected}")]
    DimensionMismatch { got: usize, expected: usize },
    #[error("coordinate {index} = {value} outside [0, 1]")]
    OutOfUnitCube { index: usize, value: f64 },
    #[error("coordinate {index} = {value} lies on a singular boundary for this family")]
    BoundaryPoint { index: usize, value: f64 },
    #[error("invalid parameter for {family}: {message}")]
    InvalidParameter { family: &'static str, message: String },
    #[error("dimension {0} unsupported (need at least {1})")]
    DimensionTooSmall(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CopulaFamily {
    Independence,
    /// Exchangeable FGM with dependence parameter `λ ∈ [-1, 1]`.
    Fgm(f64),
    /// Gumbel–Barnett with parameter `α > 0`.
    GumbelBarnett(f64),
    /// Clayton–Oakes (strict Archimedean form) with parameter `θ > 0`.
    ClaytonOakes(f64),
}

/// A parametric survival copula of fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalCopula {
    family: CopulaFamily,
    dim: usize,
}

impl SurvivalCopula {
    pub fn independence(dim: usize) -> Result<Self, CopulaError> {
        if dim < 1 {
            return Err(CopulaError::DimensionTooSmall(dim, 1));
        }
        Ok(Self { family: CopulaFamily::Independence, dim })
    }

    pub fn fgm(dim: usize, lambda: f64) -> Result<Self, CopulaError> {
        if dim < 2 {
            return Err(CopulaError::DimensionTooSmall(dim, 2));
        }
        if !(-1.0..=1.0).contains(&lambda) || lambda.is_nan() {
            return Err(CopulaError::InvalidParameter {
                family: "fgm",
                message: format!("lambda = {lambda}, admissible range is [-1, 1]"),
            });
        }
        Ok(Self { family: CopulaFamily::Fgm(lambda), dim })
    }

    pub fn gumbel_barnett(dim: usize, alpha: f64) -> Result<Self, CopulaError> {
        if dim < 2 {
            return Err(CopulaError::DimensionTooSmall(dim, 2));
        }
        if alpha <= 0.0 || !alpha.is_finite() {
            return Err(CopulaError::InvalidParameter {
                family: "gumbel-barnett",
                message: format!("alpha = {alpha}, must be positive"),
            });
        }
        Ok(Self { family: CopulaFamily::GumbelBarnett(alpha), dim })
    }

    pub fn clayton_oakes(dim: usize, theta: f64) -> Result<Self, CopulaError> {
        if dim < 2 {
            return Err(CopulaError::DimensionTooSmall(dim, 2));
        }
        if theta <= 0.0 || !theta.is_finite() {
            return Err(CopulaError::InvalidParameter {
                family: "clayton-oakes",
                message: format!("theta = {theta}, must be positive"),
            });
        }
        Ok(Self { family: CopulaFamily::ClaytonOakes(theta), dim })
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn family(&self) -> CopulaFamily {
        self.family
    }

    /// C(u) for `u ∈ [0, 1]^dim`.
    pub fn eval(&self, u: &[f64]) -> Result<f64, CopulaError> {
        self.check_dim(u)?;
        self.check_cube(u)?;
        Ok(self.eval_raw(u))
    }

    /// ∂C/∂uᵢ (0-based `i`), evaluated analytically.
    ///
    /// Families with logarithmic or power singularities reject boundary
    /// coordinates: Gumbel–Barnett rejects any coordinate in `{0, 1}`,
    /// Clayton–Oakes rejects any zero coordinate.
    pub fn partial(&self, u: &[f64], i: usize) -> Result<f64, CopulaError> {
        self.check_dim(u)?;
        if i >= self.dim {
            return Err(CopulaError::DimensionMismatch { got: i + 1, expected: self.dim });
        }
        self.check_cube(u)?;
        match self.family {
            CopulaFamily::GumbelBarnett(_) => {
                for (index, &v) in u.iter().enumerate() {
                    if v == 0.0 || v == 1.0 {
                        return Err(CopulaError::BoundaryPoint { index, value: v });
                    }
                }
            }
            CopulaFamily::ClaytonOakes(_) => {
                for (index, &v) in u.iter().enumerate() {
                    if v == 0.0 {
                        return Err(CopulaError::BoundaryPoint { index, value: v });
                    }
                }
            }
            CopulaFamily::Independence | CopulaFamily::Fgm(_) => {}
        }
        Ok(self.partial_raw(u, i))
    }

    /// Unvalidated evaluation; any zero coordinate grounds the result to 0.
    pub(crate) fn eval_raw(&self, u: &[f64]) -> f64 {
        if u.contains(&0.0) {
            return 0.0;
        }
        match self.family {
            CopulaFamily::Independence => u.iter().product(),
            CopulaFamily::Fgm(lambda) => {
                let p: f64 = u.iter().product();
                let q: f64 = u.iter().map(|&v| 1.0 - v).product();
                p * (1.0 + lambda * q)
            }
            CopulaFamily::GumbelBarnett(alpha) => {
                let p: f64 = u.iter().product();
                let l: f64 = u.iter().map(|&v| v.ln()).product();
                p * (-alpha * l).exp()
            }
            CopulaFamily::ClaytonOakes(theta) => {
                let s: f64 =
                    u.iter().map(|&v| v.powf(-theta)).sum::<f64>() - (self.dim as f64 - 1.0);
                s.powf(-1.0 / theta)
            }
        }
    }

    /// Unvalidated partial derivative. Callers must keep every coordinate in
    /// `(0, 1]`; coordinates equal to 1 are fine for every family (they arise
    /// from inclusion–exclusion masks).
    pub(crate) fn partial_raw(&self, u: &[f64], i: usize) -> f64 {
        match self.family {
            CopulaFamily::Independence => prod_excluding(u, i),
            CopulaFamily::Fgm(lambda) => {
                let p_rest = prod_excluding(u, i);
                let q_rest: f64 = u
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &v)| 1.0 - v)
                    .product();
                p_rest * (1.0 + lambda * (1.0 - 2.0 * u[i]) * q_rest)
            }
            CopulaFamily::GumbelBarnett(alpha) => {
                let p_rest = prod_excluding(u, i);
                let l_all: f64 = u.iter().map(|&v| v.ln()).product();
                let l_rest: f64 = u
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &v)| v.ln())
                    .product();
                p_rest * (-alpha * l_all).exp() * (1.0 - alpha * l_rest)
            }
            CopulaFamily::ClaytonOakes(theta) => {
                let s: f64 =
                    u.iter().map(|&v| v.powf(-theta)).sum::<f64>() - (self.dim as f64 - 1.0);
                s.powf(-(1.0 + theta) / theta) * u[i].powf(-theta - 1.0)
            }
        }
    }

    /// Exact second partials for the families that admit compact closed
    /// forms (independence and FGM). Other families fall back to numeric
    /// differentiation of the exact first derivative at call sites.
    pub(crate) fn second_partial_exact(&self, u: &[f64], i: usize, j: usize) -> Option<f64> {
        match self.family {
            CopulaFamily::Independence => {
                Some(if i == j { 0.0 } else { prod_excluding_two(u, i, j) })
            }
            CopulaFamily::Fgm(lambda) => {
                if i == j {
                    let p_rest = prod_excluding(u, i);
                    let q_rest: f64 = u
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i)
                        .map(|(_, &v)| 1.0 - v)
                        .product();
                    Some(-2.0 * lambda * p_rest * q_rest)
                } else {
                    let p_rest = prod_excluding_two(u, i, j);
                    let q_rest: f64 = u
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != i && k != j)
                        .map(|(_, &v)| 1.0 - v)
                        .product();
                    Some(
                        p_rest
                            * (1.0 + lambda * (1.0 - 2.0 * u[i]) * (1.0 - 2.0 * u[j]) * q_rest),
                    )
                }
            }
            CopulaFamily::GumbelBarnett(_) | CopulaFamily::ClaytonOakes(_) => None,
        }
    }

    pub(crate) fn has_exact_second_partials(&self) -> bool {
        matches!(self.family, CopulaFamily::Independence | CopulaFamily::Fgm(_))
    }

    fn check_dim(&self, u: &[f64]) -> Result<(), CopulaError> {
        if u.len() != self.dim {
            return Err(CopulaError::DimensionMismatch { got: u.len(), expected: self.dim });
        }
        Ok(())
    }

    fn check_cube(&self, u: &[f64]) -> Result<(), CopulaError> {
        for (index, &value) in u.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(CopulaError::OutOfUnitCube { index, value });
            }
        }
        Ok(())
    }
}

fn prod_excluding(u: &[f64], i: usize) -> f64 {
    u.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).product()
}

fn prod_excluding_two(u: &[f64], i: usize, j: usize) -> f64 {
    u.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v).product()
}
