//! Standalone certification of the k-out-of-n distortion properties used as
//! building blocks by the rule catalog: scalar diagnostics of `h_{k:n}`, the
//! comparison family between `h_{k:n}` and `h_{l:m}` (admissible when `l ≤ k`
//! and `n-k ≤ m-l`), the multivariate sum functionals under independent
//! components, and the lr-driven gradient-ratio growth.

use super::checks::{self, CoordFunctional, SumFunctional};
use super::TheoremError;
use crate::copulas::SurvivalCopula;
use crate::distortions::{kofn_closed_form, DistortionFunction};
use crate::lifetimes::{Baseline, ConditionalLifetimeModel, EnvironmentLink, Orientation};
use crate::orders::Certification;
use crate::points::{halton_cube, linspace};
use crate::structures::CoherentStructure;

/// One certified sub-claim.
#[derive(Debug, Clone, PartialEq)]
pub struct KofnClaimReport {
    pub claim: String,
    pub verdict: Certification,
    pub worst_margin: f64,
    pub witness: String,
    /// Detected sign-change location of h'' (sign-split claims only).
    pub mu_hat: Option<f64>,
    /// The closed-form location `(k-1)/(n-1)` (sign-split claims only).
    pub mu_expected: Option<f64>,
}

impl KofnClaimReport {
    fn from_outcome(claim: &str, outcome: checks::Outcome) -> Self {
        KofnClaimReport {
            claim: claim.to_string(),
            verdict: outcome.verdict,
            worst_margin: outcome.worst_margin,
            witness: outcome.witness,
            mu_hat: None,
            mu_expected: None,
        }
    }
}

/// Certifies the full claim family for the pair `(k:n, l:m)` on grids with
/// `grid_points` scalar nodes. Requires `1 ≤ l ≤ k ≤ n` and `n-k ≤ m-l`.
pub fn certify_kofn_properties(
    k: usize,
    n: usize,
    l: usize,
    m: usize,
    grid_points: usize,
) -> Result<Vec<KofnClaimReport>, TheoremError> {
    if k == 0 || l == 0 || k > n || l > m {
        return Err(TheoremError::IndexConstraintViolated(format!(
            "need 1 ≤ k ≤ n and 1 ≤ l ≤ m, got (k,n)=({k},{n}), (l,m)=({l},{m})"
        )));
    }
    if l > k {
        return Err(TheoremError::IndexConstraintViolated(format!("l ≤ k fails: l={l} > k={k}")));
    }
    if n - k > m - l {
        return Err(TheoremError::IndexConstraintViolated(format!(
            "n-k ≤ m-l fails: {}-{} > {}-{}",
            n, k, m, l
        )));
    }
    let eps = 1e-6;
    let grid = linspace(eps, 1.0 - eps, grid_points.max(16));
    let tol = 1e-9;
    let hkn = kofn_closed_form(k, n).expect("validated indices");
    let hlm = kofn_closed_form(l, m).expect("validated indices");
    let mut out = Vec::new();

    // scalar diagnostics of h_{k:n}
    out.push(KofnClaimReport::from_outcome(
        "eta-decreasing",
        checks::scalar_monotone(|p| hkn.eta(p), &grid, false, tol),
    ));
    out.push(KofnClaimReport::from_outcome(
        "rho-increasing",
        checks::scalar_monotone(|p| hkn.rho(p), &grid, true, tol),
    ));
    let (split, mu_hat) = checks::inflection_split(&hkn, &grid, tol);
    let mu_expected = (k as f64 - 1.0) / (n as f64 - 1.0).max(1.0);
    out.push(KofnClaimReport {
        claim: "kappa-sign-split".to_string(),
        verdict: split.verdict,
        worst_margin: split.worst_margin,
        witness: split.witness,
        mu_hat: Some(mu_hat),
        mu_expected: Some(mu_expected),
    });

    // scalar comparisons h_{k:n} vs h_{l:m}
    out.push(KofnClaimReport::from_outcome(
        "pointwise-dominance",
        checks::scalar_monotone_pairwise_le(&hkn, &hlm, &grid, tol),
    ));
    out.push(KofnClaimReport::from_outcome(
        "reliability-ratio-increasing",
        checks::scalar_ratio_monotone(|p| hkn.value(p), |p| hlm.value(p), &grid, true, tol),
    ));
    out.push(KofnClaimReport::from_outcome(
        "cofailure-ratio-increasing",
        checks::scalar_ratio_monotone(
            |p| hkn.complement(p),
            |p| hlm.complement(p),
            &grid,
            true,
            tol,
        ),
    ));
    out.push(KofnClaimReport::from_outcome(
        "derivative-ratio-increasing",
        checks::scalar_ratio_monotone(|p| hkn.d1(p), |p| hlm.d1(p), &grid, true, tol),
    ));

    // multivariate claims under independent, non-identical components
    let dkn = independent_kofn(k, n);
    let dlm = independent_kofn(l, m);
    let dim = n.max(m);
    let bases = halton_cube(dim, 48, 1e-3, 1.0 - 1e-3);
    let sweep = linspace(1e-3, 1.0 - 1e-3, 32);
    let points = {
        let mut pts = halton_cube(dim, 512, 1e-3, 1.0 - 1e-3);
        for p in linspace(1e-3, 1.0 - 1e-3, 64) {
            pts.push(vec![p; dim]);
        }
        pts
    };
    out.push(KofnClaimReport::from_outcome(
        "eta-sum-decreasing",
        checks::sum_functional_monotone(SumFunctional::EtaSum, &dkn, true, &bases, &sweep, tol),
    ));
    out.push(KofnClaimReport::from_outcome(
        "rho-sum-increasing",
        checks::sum_functional_monotone(SumFunctional::RhoSum, &dkn, false, &bases, &sweep, tol),
    ));
    out.push(KofnClaimReport::from_outcome(
        "multivariate-dominance",
        checks::h_dominance_multi(&dkn, &dlm, &points, tol),
    ));
    let shared = n.min(m);
    out.push(KofnClaimReport::from_outcome(
        "log-gradient-dominance",
        checks::coord_functional_cmp(
            CoordFunctional::LogGradient,
            &dkn,
            &dlm,
            &points,
            shared,
            true,
            tol,
        ),
    ));
    out.push(KofnClaimReport::from_outcome(
        "complement-gradient-dominance",
        checks::coord_functional_cmp(
            CoordFunctional::CoGradient,
            &dkn,
            &dlm,
            &points,
            shared,
            false,
            tol,
        ),
    ));
    out.push(KofnClaimReport::from_outcome(
        "eta-sum-dominance",
        checks::sum_functional_cmp(SumFunctional::EtaSum, &dkn, &dlm, &points, true, tol),
    ));
    out.push(KofnClaimReport::from_outcome(
        "rho-sum-dominance",
        checks::sum_functional_cmp(SumFunctional::RhoSum, &dkn, &dlm, &points, false, tol),
    ));

    // lr-driven gradient-ratio growth on an lr-ordered marginal pair
    out.push(KofnClaimReport::from_outcome(
        "partial-ratio-increasing-in-x",
        partial_ratio_claim(&dkn, &dlm, tol),
    ));
    Ok(out)
}

fn independent_kofn(k: usize, n: usize) -> DistortionFunction {
    DistortionFunction::build(
        CoherentStructure::k_out_of_n(k, n).expect("validated indices"),
        SurvivalCopula::independence(n).expect("n ≥ 1"),
    )
    .expect("independence matches any dimension")
}

/// Fixed lr-ordered pair (exp(2) components vs exp(1) components) feeding the
/// gradient-ratio claim.
fn partial_ratio_claim(
    dkn: &DistortionFunction,
    dlm: &DistortionFunction,
    tol: f64,
) -> checks::Outcome {
    let fast = ConditionalLifetimeModel::new(
        Baseline::Exponential { rate: 2.0 },
        EnvironmentLink::None,
        Orientation::DecreasingInTheta,
    )
    .expect("valid model");
    let slow = ConditionalLifetimeModel::new(
        Baseline::Exponential { rate: 1.0 },
        EnvironmentLink::None,
        Orientation::DecreasingInTheta,
    )
    .expect("valid model");
    let grid = crate::orders::GridSpec { x_lo: 0.0, x_hi: 3.0, n_points: 400, tol };
    checks::partial_ratio_increasing(
        dkn,
        &vec![fast; dkn.dimension()],
        dlm,
        &vec![slow; dlm.dimension()],
        1.0,
        &[1.0],
        &grid,
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdicts(reports: &[KofnClaimReport]) -> Vec<(String, Certification)> {
        reports.iter().map(|r| (r.claim.clone(), r.verdict)).collect()
    }

    #[test]
    fn admissible_pair_fully_certifies() {
        let reports = certify_kofn_properties(2, 3, 1, 2, 1000).unwrap();
        for (claim, verdict) in verdicts(&reports) {
            assert_eq!(verdict, Certification::CertifiedOnGrid, "claim {claim}");
        }
    }

    #[test]
    fn sign_split_location_matches_closed_form() {
        for (k, n) in [(2usize, 3usize), (3, 5), (2, 5)] {
            let reports = certify_kofn_properties(k, n, k, n, 1000).unwrap();
            let split = reports.iter().find(|r| r.claim == "kappa-sign-split").unwrap();
            let mu = split.mu_expected.unwrap();
            assert!(
                (split.mu_hat.unwrap() - mu).abs() <= 1e-3,
                "(k,n)=({k},{n}) mu_hat={:?} mu={mu}",
                split.mu_hat
            );
            assert_eq!(split.verdict, Certification::CertifiedOnGrid);
        }
    }

    #[test]
    fn series_eta_is_constant_and_certifies_nonstrictly() {
        let reports = certify_kofn_properties(4, 4, 4, 4, 500).unwrap();
        let eta = reports.iter().find(|r| r.claim == "eta-decreasing").unwrap();
        assert_eq!(eta.verdict, Certification::CertifiedOnGrid);
        assert!(eta.worst_margin.abs() < 1e-9);
    }

    #[test]
    fn index_constraints_are_enforced() {
        assert!(matches!(
            certify_kofn_properties(1, 2, 2, 3, 100),
            Err(TheoremError::IndexConstraintViolated(_))
        ));
        assert!(matches!(
            certify_kofn_properties(3, 5, 2, 3, 100),
            Err(TheoremError::IndexConstraintViolated(_))
        ));
        assert!(matches!(
            certify_kofn_properties(0, 3, 1, 2, 100),
            Err(TheoremError::IndexConstraintViolated(_))
        ));
    }
}
