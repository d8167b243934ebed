//! The domination (dual distortion) function `h` of a coherent structure and
//! a survival copula: `F̄_sys(x) = h(F̄_1(x), …, F̄_n(x))`.
//!
//! `h(p) = Σ_{∅≠S⊆paths} (-1)^{|S|+1} C(mask(∪S; p))` where `mask` keeps the
//! coordinates in the union and pins the rest to 1. Terms with equal unions
//! are coalesced at build time into integer coefficients, so evaluation cost
//! scales with the number of distinct union masks (≤ 2^n) rather than the
//! number of subfamilies (2^r). k-out-of-n structures under the independence
//! copula bypass inclusion–exclusion entirely through the Poisson-binomial
//! recursion.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::copulas::{CopulaError, SurvivalCopula};
use crate::kofn;
use crate::structures::{CoherentStructure, StructureError, MAX_COMPONENTS};

/// Inclusion–exclusion is refused beyond this many minimal path sets
/// (2^20 raw subfamilies).
pub const MAX_PATHS_FOR_EXPANSION: usize = 20;

const CLAMP_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistortionError {
    #[error("structure has {structure} components but copula dimension is {copula}")]
    DimensionMismatch { structure: usize, copula: usize },
    #[error("{paths} minimal path sets would need more than 2^{max} inclusion-exclusion terms")]
    TooManyPaths { paths: usize, max: usize },
    #[error("argument has {got} coordinates, expected {expected}")]
    ArityMismatch { got: usize, expected: usize },
    #[error("coordinate {index} = {value} outside [0, 1]")]
    OutOfUnitCube { index: usize, value: f64 },
    #[error("gradient requires an interior point; coordinate {index} = {value}")]
    BoundaryPoint { index: usize, value: f64 },
    #[error("threshold out of range: k={k}, n={n}")]
    OutOfRange { k: usize, n: usize },
    #[error(transparent)]
    Copula(#[from] CopulaError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// Coalesced signed terms: `(union mask, integer coefficient)`.
    Terms(Vec<(u32, f64)>),
    /// k-out-of-n + independence fast path.
    KofnIndependent { k: usize },
}

/// The domination function of a (structure, survival copula) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionFunction {
    structure: CoherentStructure,
    copula: SurvivalCopula,
    repr: Repr,
}

impl DistortionFunction {
    /// Builds `h` from a structure and a copula of matching dimension.
    pub fn build(
        structure: CoherentStructure,
        copula: SurvivalCopula,
    ) -> Result<Self, DistortionError> {
        let n = structure.component_count();
        if n != copula.dimension() {
            return Err(DistortionError::DimensionMismatch {
                structure: n,
                copula: copula.dimension(),
            });
        }
        use crate::copulas::CopulaFamily;
        if let (Some(k), CopulaFamily::Independence) = (structure.threshold(), copula.family()) {
            return Ok(Self { structure, copula, repr: Repr::KofnIndependent { k } });
        }
        let paths = structure.path_masks();
        if paths.len() > MAX_PATHS_FOR_EXPANSION {
            return Err(DistortionError::TooManyPaths {
                paths: paths.len(),
                max: MAX_PATHS_FOR_EXPANSION,
            });
        }
        // Fold one path at a time: appending path P maps the coefficient set
        // {A: c} to {A: c} + {P: 1} + {A|P: -c}.
        let mut coeffs: BTreeMap<u32, i64> = BTreeMap::new();
        for &p in &paths {
            let snapshot: Vec<(u32, i64)> = coeffs.iter().map(|(&a, &c)| (a, c)).collect();
            *coeffs.entry(p).or_insert(0) += 1;
            for (a, c) in snapshot {
                *coeffs.entry(a | p).or_insert(0) -= c;
            }
        }
        let terms: Vec<(u32, f64)> = coeffs
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(a, c)| (a, c as f64))
            .collect();
        Ok(Self { structure, copula, repr: Repr::Terms(terms) })
    }

    pub fn dimension(&self) -> usize {
        self.structure.component_count()
    }

    pub fn structure(&self) -> &CoherentStructure {
        &self.structure
    }

    pub fn copula(&self) -> &SurvivalCopula {
        &self.copula
    }

    /// h(p) for `p ∈ [0, 1]^n`.
    pub fn eval(&self, p: &[f64]) -> Result<f64, DistortionError> {
        self.check_args(p)?;
        Ok(self.eval_raw(p))
    }

    /// Exact gradient `(∂h/∂p_1, …, ∂h/∂p_n)` at an interior point.
    pub fn gradient(&self, p: &[f64]) -> Result<Vec<f64>, DistortionError> {
        self.check_args(p)?;
        for (index, &value) in p.iter().enumerate() {
            if value <= 0.0 || value >= 1.0 {
                return Err(DistortionError::BoundaryPoint { index, value });
            }
        }
        let mut out = vec![0.0; p.len()];
        self.gradient_raw(p, &mut out);
        Ok(out)
    }

    fn check_args(&self, p: &[f64]) -> Result<(), DistortionError> {
        if p.len() != self.dimension() {
            return Err(DistortionError::ArityMismatch {
                got: p.len(),
                expected: self.dimension(),
            });
        }
        for (index, &value) in p.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(DistortionError::OutOfUnitCube { index, value });
            }
        }
        Ok(())
    }

    /// Unvalidated evaluation (coordinates assumed in `[0, 1]`).
    pub(crate) fn eval_raw(&self, p: &[f64]) -> f64 {
        match &self.repr {
            Repr::KofnIndependent { k } => kofn::poisson_binomial_tail(p, *k),
            Repr::Terms(terms) => {
                let mut buf = [1.0f64; MAX_COMPONENTS];
                let n = p.len();
                let mut acc = 0.0;
                for &(mask, coeff) in terms {
                    fill_masked(&mut buf[..n], p, mask);
                    acc += coeff * self.copula.eval_raw(&buf[..n]);
                }
                acc
            }
        }
    }

    /// Unvalidated gradient; coordinates are clamped away from zero so the
    /// closed forms with logarithmic singularities stay finite. Coordinates
    /// equal to 1 are handled exactly (they occur in every mask).
    pub(crate) fn gradient_raw(&self, p: &[f64], out: &mut [f64]) {
        let n = p.len();
        let mut clamped = [0.0f64; MAX_COMPONENTS];
        for i in 0..n {
            clamped[i] = p[i].max(CLAMP_FLOOR);
        }
        out[..n].fill(0.0);
        match &self.repr {
            Repr::KofnIndependent { k } => {
                for (i, slot) in out[..n].iter_mut().enumerate() {
                    *slot = kofn::poisson_binomial_partial(&clamped[..n], *k, i);
                }
            }
            Repr::Terms(terms) => {
                let mut buf = [1.0f64; MAX_COMPONENTS];
                for &(mask, coeff) in terms {
                    fill_masked(&mut buf[..n], &clamped[..n], mask);
                    for (i, slot) in out[..n].iter_mut().enumerate() {
                        if mask & (1 << i) != 0 {
                            *slot += coeff * self.copula.partial_raw(&buf[..n], i);
                        }
                    }
                }
            }
        }
    }

    /// `1 - h(p)` without cancellation where a direct form exists (the
    /// Poisson-binomial path sums the lower tail instead of subtracting).
    pub(crate) fn complement_raw(&self, p: &[f64]) -> f64 {
        match &self.repr {
            Repr::KofnIndependent { k } => {
                let pmf = kofn::success_count_pmf(p);
                pmf[..*k].iter().sum()
            }
            Repr::Terms(_) => 1.0 - self.eval_raw(p),
        }
    }

    /// Exact `∂²h/∂p_i∂p_j` where the copula supplies closed-form second
    /// partials; `None` otherwise.
    pub(crate) fn second_partial_exact(&self, p: &[f64], i: usize, j: usize) -> Option<f64> {
        match &self.repr {
            Repr::KofnIndependent { k } => {
                Some(kofn::poisson_binomial_second_partial(p, *k, i, j))
            }
            Repr::Terms(terms) => {
                if !self.copula.has_exact_second_partials() {
                    return None;
                }
                let n = p.len();
                let mut buf = [1.0f64; MAX_COMPONENTS];
                let mut acc = 0.0;
                for &(mask, coeff) in terms {
                    if mask & (1 << i) == 0 || mask & (1 << j) == 0 {
                        continue;
                    }
                    fill_masked(&mut buf[..n], p, mask);
                    acc += coeff * self.copula.second_partial_exact(&buf[..n], i, j)?;
                }
                Some(acc)
            }
        }
    }

    /// The scalar profile `p ↦ h(p, …, p)` with first and second derivatives,
    /// used by all iid comparison rules.
    pub fn iid_profile(&self) -> ScalarDistortion {
        ScalarDistortion { imp: ProfileImpl::Diagonal { distortion: self.clone() } }
    }

    #[cfg(test)]
    pub(crate) fn term_count(&self) -> usize {
        match &self.repr {
            Repr::Terms(t) => t.len(),
            Repr::KofnIndependent { .. } => 0,
        }
    }
}

fn fill_masked(buf: &mut [f64], p: &[f64], mask: u32) {
    for (i, slot) in buf.iter_mut().enumerate() {
        *slot = if mask & (1 << i) != 0 { p[i] } else { 1.0 };
    }
}

/// The iid closed form `h_{k:n}` with exact first and second derivatives.
pub fn kofn_closed_form(k: usize, n: usize) -> Result<ScalarDistortion, DistortionError> {
    if n == 0 || k == 0 || k > n {
        return Err(DistortionError::OutOfRange { k, n });
    }
    Ok(ScalarDistortion { imp: ProfileImpl::Kofn { k, n } })
}

#[derive(Debug, Clone)]
enum ProfileImpl {
    Kofn { k: usize, n: usize },
    Diagonal { distortion: DistortionFunction },
}

/// A scalar distortion `p ↦ h(p)` on `[0, 1]` with derivatives and the
/// diagnostic functionals used by the comparison rules.
#[derive(Debug, Clone)]
pub struct ScalarDistortion {
    imp: ProfileImpl,
}

impl ScalarDistortion {
    pub fn value(&self, p: f64) -> f64 {
        match &self.imp {
            ProfileImpl::Kofn { k, n } => kofn::kofn_reliability(*k, *n, p),
            ProfileImpl::Diagonal { distortion } => {
                let n = distortion.dimension();
                let buf = vec![p; n];
                distortion.eval_raw(&buf)
            }
        }
    }

    /// h'(p); exact (sum of the exact gradient along the diagonal).
    pub fn d1(&self, p: f64) -> f64 {
        match &self.imp {
            ProfileImpl::Kofn { k, n } => kofn::kofn_d1(*k, *n, p),
            ProfileImpl::Diagonal { distortion } => {
                let n = distortion.dimension();
                let buf = vec![p; n];
                let mut grad = vec![0.0; n];
                distortion.gradient_raw(&buf, &mut grad);
                grad.iter().sum()
            }
        }
    }

    /// h''(p); exact where the copula supplies second partials (independence,
    /// FGM, and the Poisson-binomial fast path), otherwise one central
    /// difference of the exact h' with step 1e-5.
    pub fn d2(&self, p: f64) -> f64 {
        match &self.imp {
            ProfileImpl::Kofn { k, n } => kofn::kofn_d2(*k, *n, p),
            ProfileImpl::Diagonal { distortion } => {
                let n = distortion.dimension();
                let buf = vec![p; n];
                let mut exact = 0.0;
                let mut have_exact = true;
                'outer: for i in 0..n {
                    for j in 0..n {
                        match distortion.second_partial_exact(&buf, i, j) {
                            Some(v) => exact += v,
                            None => {
                                have_exact = false;
                                break 'outer;
                            }
                        }
                    }
                }
                if have_exact {
                    return exact;
                }
                let h = 1e-5f64.min(p / 2.0).min((1.0 - p) / 2.0).max(1e-9);
                (self.d1(p + h) - self.d1(p - h)) / (2.0 * h)
            }
        }
    }

    /// `1 - h(p)`, cancellation-free where a lower-tail form exists.
    pub fn complement(&self, p: f64) -> f64 {
        match &self.imp {
            ProfileImpl::Kofn { k, n } => kofn::kofn_unreliability(*k, *n, p),
            ProfileImpl::Diagonal { distortion } => {
                let n = distortion.dimension();
                let buf = vec![p; n];
                distortion.complement_raw(&buf)
            }
        }
    }

    /// η(p) = p h'(p) / h(p).
    pub fn eta(&self, p: f64) -> f64 {
        p * self.d1(p) / self.value(p)
    }

    /// ρ(p) = (1-p) h'(p) / (1 - h(p)).
    pub fn rho(&self, p: f64) -> f64 {
        (1.0 - p) * self.d1(p) / self.complement(p)
    }

    /// κ(p) = p h''(p) / h'(p).
    pub fn kappa(&self, p: f64) -> f64 {
        p * self.d2(p) / self.d1(p)
    }

    /// κ̄(p) = (1-p) h''(p) / h'(p).
    pub fn kappa_bar(&self, p: f64) -> f64 {
        (1.0 - p) * self.d2(p) / self.d1(p)
    }
}
