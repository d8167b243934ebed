//! Scenario-level verifiers: each rule in the comparison catalog couples a
//! set of numerically checkable sufficient conditions with a stochastic-order
//! conclusion between the two mixed system lifetimes. Conditions and
//! conclusion are certified independently, so a report can show exactly which
//! premise fails, and a soundness alarm fires if every premise certifies
//! while the conclusion is refuted (that combination indicates a bug or a
//! grid artifact somewhere, never a genuine finding).
//!
//! The catalog is organised by scenario shape:
//!
//! * rules `3.1`–`3.6`: both systems share one random environment;
//! * rules `4.1`–`4.6`: two different random environments;
//! * rules `5.1`–`5.10`: the second system operates in a deterministic
//!   environment (a degenerate atom).
//!
//! Rules `x.4`–`x.6` of the first two groups and `5.7`–`5.10` are the iid
//! reductions, phrased through scalar distortion profiles.

mod checks;
mod kofn_cert;
mod rules;

pub use kofn_cert::{certify_kofn_properties, KofnClaimReport};

use thiserror::Error;

use crate::distortions::{DistortionError, DistortionFunction};
use crate::lifetimes::ConditionalLifetimeModel;
use crate::mixtures::{Environment, MixtureError};
use crate::orders::{Certification, GridSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoremError {
    #[error("unknown rule id {0:?}")]
    UnknownRule(String),
    #[error("rule {rule} needs both systems in the same environment")]
    RequiresSameEnvironment { rule: RuleId },
    #[error("rule {rule} needs a degenerate (deterministic) second environment")]
    RequiresDegenerateEnvironment { rule: RuleId },
    #[error("rule {rule} needs iid components in each system")]
    RequiresIidComponents { rule: RuleId },
    #[error("rule {rule} needs {constraint} (system 1 has {n} components, system 2 has {m})")]
    DimensionConstraint { rule: RuleId, constraint: &'static str, n: usize, m: usize },
    #[error("system has {marginals} marginals for {components} components")]
    MarginalCount { marginals: usize, components: usize },
    #[error("k-out-of-n index constraint violated: {0}")]
    IndexConstraintViolated(String),
    #[error(transparent)]
    Distortion(#[from] DistortionError),
    #[error(transparent)]
    Mixture(#[from] MixtureError),
}

/// One system: a distortion function (structure × copula) plus per-component
/// conditional lifetime models.
#[derive(Debug, Clone)]
pub struct SystemModel {
    distortion: DistortionFunction,
    marginals: Vec<ConditionalLifetimeModel>,
}

impl SystemModel {
    pub fn new(
        distortion: DistortionFunction,
        marginals: Vec<ConditionalLifetimeModel>,
    ) -> Result<Self, TheoremError> {
        if marginals.len() != distortion.dimension() {
            return Err(TheoremError::MarginalCount {
                marginals: marginals.len(),
                components: distortion.dimension(),
            });
        }
        Ok(Self { distortion, marginals })
    }

    pub fn distortion(&self) -> &DistortionFunction {
        &self.distortion
    }

    pub fn marginals(&self) -> &[ConditionalLifetimeModel] {
        &self.marginals
    }

    pub fn dimension(&self) -> usize {
        self.distortion.dimension()
    }

    /// All marginals identical?
    pub fn is_iid(&self) -> bool {
        self.marginals.windows(2).all(|w| w[0] == w[1])
    }
}

/// Knobs for the grid checkers; the defaults match the shipped scenarios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    /// Cap on ordered θ-probe pairs drawn from continuous environments.
    pub theta_pair_cap: usize,
    /// Low-discrepancy interior points for multivariate conditions.
    pub point_count: usize,
    /// Nodes of the scalar grid on [diag_eps, 1-diag_eps].
    pub diag_points: usize,
    /// Base points for coordinate-sweep monotonicity checks.
    pub sweep_bases: usize,
    /// Sweep resolution per coordinate.
    pub sweep_steps: usize,
    /// Interior margin for multivariate point sets.
    pub interior_eps: f64,
    /// Interior margin for the scalar grid.
    pub diag_eps: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            theta_pair_cap: 12,
            point_count: 4096,
            diag_points: 1000,
            sweep_bases: 64,
            sweep_steps: 48,
            interior_eps: 1e-3,
            diag_eps: 1e-6,
        }
    }
}

/// Two systems, their environments, and the grids on which the rules are
/// checked.
#[derive(Debug, Clone)]
pub struct ComparisonScenario {
    pub system1: SystemModel,
    pub system2: SystemModel,
    pub env1: Environment,
    pub env2: Environment,
    pub grid: GridSpec,
    pub settings: VerifySettings,
}

/// Identifier of a comparison rule, displayed as `3.1` … `5.10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    SameEnvSt,
    SameEnvHr,
    SameEnvRhr,
    SameEnvIidSt,
    SameEnvIidHr,
    SameEnvIidRhr,
    DiffEnvSt,
    DiffEnvHr,
    DiffEnvRhr,
    DiffEnvIidSt,
    DiffEnvIidHr,
    DiffEnvIidRhr,
    DetEnvSt,
    DetEnvHrSums,
    DetEnvHrCoord,
    DetEnvRhrSums,
    DetEnvRhrCoord,
    DetEnvLr,
    DetEnvIidSt,
    DetEnvIidHr,
    DetEnvIidRhr,
    DetEnvIidLr,
}

impl RuleId {
    pub const ALL: [RuleId; 22] = [
        RuleId::SameEnvSt,
        RuleId::SameEnvHr,
        RuleId::SameEnvRhr,
        RuleId::SameEnvIidSt,
        RuleId::SameEnvIidHr,
        RuleId::SameEnvIidRhr,
        RuleId::DiffEnvSt,
        RuleId::DiffEnvHr,
        RuleId::DiffEnvRhr,
        RuleId::DiffEnvIidSt,
        RuleId::DiffEnvIidHr,
        RuleId::DiffEnvIidRhr,
        RuleId::DetEnvSt,
        RuleId::DetEnvHrSums,
        RuleId::DetEnvHrCoord,
        RuleId::DetEnvRhrSums,
        RuleId::DetEnvRhrCoord,
        RuleId::DetEnvLr,
        RuleId::DetEnvIidSt,
        RuleId::DetEnvIidHr,
        RuleId::DetEnvIidRhr,
        RuleId::DetEnvIidLr,
    ];

    pub fn code(self) -> &'static str {
        match self {
            RuleId::SameEnvSt => "3.1",
            RuleId::SameEnvHr => "3.2",
            RuleId::SameEnvRhr => "3.3",
            RuleId::SameEnvIidSt => "3.4",
            RuleId::SameEnvIidHr => "3.5",
            RuleId::SameEnvIidRhr => "3.6",
            RuleId::DiffEnvSt => "4.1",
            RuleId::DiffEnvHr => "4.2",
            RuleId::DiffEnvRhr => "4.3",
            RuleId::DiffEnvIidSt => "4.4",
            RuleId::DiffEnvIidHr => "4.5",
            RuleId::DiffEnvIidRhr => "4.6",
            RuleId::DetEnvSt => "5.1",
            RuleId::DetEnvHrSums => "5.2",
            RuleId::DetEnvHrCoord => "5.3",
            RuleId::DetEnvRhrSums => "5.4",
            RuleId::DetEnvRhrCoord => "5.5",
            RuleId::DetEnvLr => "5.6",
            RuleId::DetEnvIidSt => "5.7",
            RuleId::DetEnvIidHr => "5.8",
            RuleId::DetEnvIidRhr => "5.9",
            RuleId::DetEnvIidLr => "5.10",
        }
    }

    pub fn parse(text: &str) -> Result<RuleId, TheoremError> {
        RuleId::ALL
            .iter()
            .copied()
            .find(|r| r.code() == text.trim())
            .ok_or_else(|| TheoremError::UnknownRule(text.to_string()))
    }

    /// Catalog section: 3 = shared environment, 4 = two environments,
    /// 5 = deterministic second environment.
    pub fn section(self) -> u8 {
        self.code().as_bytes()[0] - b'0'
    }

    pub fn conclusion_order(self) -> crate::orders::OrderRelation {
        use crate::orders::OrderRelation::*;
        match self {
            RuleId::SameEnvSt
            | RuleId::SameEnvIidSt
            | RuleId::DiffEnvSt
            | RuleId::DiffEnvIidSt
            | RuleId::DetEnvSt
            | RuleId::DetEnvIidSt => St,
            RuleId::SameEnvHr
            | RuleId::SameEnvIidHr
            | RuleId::DiffEnvHr
            | RuleId::DiffEnvIidHr
            | RuleId::DetEnvHrSums
            | RuleId::DetEnvHrCoord
            | RuleId::DetEnvIidHr => Hr,
            RuleId::SameEnvRhr
            | RuleId::SameEnvIidRhr
            | RuleId::DiffEnvRhr
            | RuleId::DiffEnvIidRhr
            | RuleId::DetEnvRhrSums
            | RuleId::DetEnvRhrCoord
            | RuleId::DetEnvIidRhr => Rhr,
            RuleId::DetEnvLr | RuleId::DetEnvIidLr => Lr,
        }
    }
}

impl std::fmt::Display for RuleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// Verdict of one checked condition (or of the conclusion).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    /// Positional id: C1, C2, … (the conclusion row is labeled "conclusion").
    pub id: String,
    pub description: String,
    /// Conditions sharing a group id are disjunctive alternatives.
    pub group: Option<u8>,
    pub verdict: Certification,
    pub worst_margin: f64,
    pub witness: String,
}

/// Full report for one rule on one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub rule: RuleId,
    pub conditions: Vec<ConditionReport>,
    pub conclusion: ConditionReport,
    /// All non-group conditions certified and every group has a certified
    /// member.
    pub conditions_satisfied: bool,
    /// `false` is the soundness alarm: premises certified, conclusion
    /// violated.
    pub consistent: bool,
}

impl TheoremReport {
    pub(crate) fn assemble(
        rule: RuleId,
        conditions: Vec<ConditionReport>,
        conclusion: ConditionReport,
    ) -> Self {
        let satisfied = conditions_satisfied(&conditions);
        let consistent = !(satisfied && conclusion.verdict == Certification::Violated);
        TheoremReport { rule, conditions, conclusion, conditions_satisfied: satisfied, consistent }
    }

    /// Violated conditions that actually count against the rule: members of a
    /// group are excused when some alternative in the group certified.
    pub fn effective_violations(&self) -> Vec<&ConditionReport> {
        self.conditions
            .iter()
            .filter(|c| c.verdict == Certification::Violated)
            .filter(|c| match c.group {
                None => true,
                Some(g) => !self
                    .conditions
                    .iter()
                    .any(|o| o.group == Some(g) && o.verdict == Certification::CertifiedOnGrid),
            })
            .collect()
    }
}

fn conditions_satisfied(conditions: &[ConditionReport]) -> bool {
    let solo_ok = conditions
        .iter()
        .filter(|c| c.group.is_none())
        .all(|c| c.verdict == Certification::CertifiedOnGrid);
    let mut groups: Vec<u8> = conditions.iter().filter_map(|c| c.group).collect();
    groups.sort_unstable();
    groups.dedup();
    let groups_ok = groups.iter().all(|&g| {
        conditions
            .iter()
            .any(|c| c.group == Some(g) && c.verdict == Certification::CertifiedOnGrid)
    });
    solo_ok && groups_ok
}

/// Verifies a shared-environment rule (`3.x`). The scenario must carry equal
/// environments.
pub fn verify_same_env(
    scenario: &ComparisonScenario,
    rule: RuleId,
) -> Result<TheoremReport, TheoremError> {
    if rule.section() != 3 {
        return Err(TheoremError::UnknownRule(format!("{rule} is not a shared-environment rule")));
    }
    if scenario.env1 != scenario.env2 {
        return Err(TheoremError::RequiresSameEnvironment { rule });
    }
    rules::run(scenario, rule)
}

/// Verifies a two-environment rule (`4.x`).
pub fn verify_diff_env(
    scenario: &ComparisonScenario,
    rule: RuleId,
) -> Result<TheoremReport, TheoremError> {
    if rule.section() != 4 {
        return Err(TheoremError::UnknownRule(format!("{rule} is not a two-environment rule")));
    }
    rules::run(scenario, rule)
}

/// Verifies a deterministic-second-environment rule (`5.x`).
pub fn verify_one_deterministic(
    scenario: &ComparisonScenario,
    rule: RuleId,
) -> Result<TheoremReport, TheoremError> {
    if rule.section() != 5 {
        return Err(TheoremError::UnknownRule(format!(
            "{rule} is not a deterministic-environment rule"
        )));
    }
    if scenario.env2.is_degenerate().is_none() {
        return Err(TheoremError::RequiresDegenerateEnvironment { rule });
    }
    rules::run(scenario, rule)
}

/// Routes a rule to the appropriate verifier by section.
pub fn verify(scenario: &ComparisonScenario, rule: RuleId) -> Result<TheoremReport, TheoremError> {
    match rule.section() {
        3 => verify_same_env(scenario, rule),
        4 => verify_diff_env(scenario, rule),
        _ => verify_one_deterministic(scenario, rule),
    }
}
