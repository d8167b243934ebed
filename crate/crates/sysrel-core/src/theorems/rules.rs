//! Assembly of the rule catalog: each rule lists its conditions (with
//! disjunctive groups where the source offers alternative premise sets), runs
//! them through the check primitives, and then certifies the conclusion on
//! the mixed lifetimes independently.

use super::checks::{self, CoordFunctional, IndexMatch, Outcome, ProbeSet, SumFunctional};
use super::{ComparisonScenario, ConditionReport, RuleId, TheoremError, TheoremReport};
use crate::distortions::ScalarDistortion;
use crate::mixtures::MixedSystemLifetime;
use crate::orders::{check_hr, check_lr, check_rhr, check_st, Certification, OrderRelation};
use crate::points::linspace;

struct Ctx<'a> {
    sc: &'a ComparisonScenario,
    probes: ProbeSet,
    points: Vec<Vec<f64>>,
    bases: Vec<Vec<f64>>,
    sweep: Vec<f64>,
    diag: Vec<f64>,
    tol: f64,
}

impl<'a> Ctx<'a> {
    fn new(sc: &'a ComparisonScenario) -> Ctx<'a> {
        let dim = sc.system1.dimension().max(sc.system2.dimension());
        let s = sc.settings;
        Ctx {
            sc,
            probes: ProbeSet::for_envs(&sc.env1, &sc.env2, s.theta_pair_cap),
            points: checks::interior_points(dim, s.point_count, s.interior_eps),
            bases: crate::points::halton_cube(dim, s.sweep_bases, s.interior_eps, 1.0 - s.interior_eps),
            sweep: linspace(s.interior_eps, 1.0 - s.interior_eps, s.sweep_steps),
            diag: linspace(s.diag_eps, 1.0 - s.diag_eps, s.diag_points),
            tol: sc.grid.tol,
        }
    }

    fn n(&self) -> usize {
        self.sc.system1.dimension()
    }

    fn m(&self) -> usize {
        self.sc.system2.dimension()
    }

    fn profile1(&self) -> ScalarDistortion {
        self.sc.system1.distortion().iid_profile()
    }

    fn profile2(&self) -> ScalarDistortion {
        self.sc.system2.distortion().iid_profile()
    }

    fn require_iid(&self, rule: RuleId) -> Result<(), TheoremError> {
        if self.sc.system1.is_iid() && self.sc.system2.is_iid() {
            Ok(())
        } else {
            Err(TheoremError::RequiresIidComponents { rule })
        }
    }

    fn require_dims(
        &self,
        rule: RuleId,
        ok: bool,
        constraint: &'static str,
    ) -> Result<(), TheoremError> {
        if ok {
            Ok(())
        } else {
            Err(TheoremError::DimensionConstraint { rule, constraint, n: self.n(), m: self.m() })
        }
    }

    /// The deterministic environment value of system 2 in section-5 rules.
    fn theta_star(&self) -> f64 {
        self.sc.env2.is_degenerate().expect("section-5 rules require a degenerate env2")
    }

    fn condition(&self, idx: usize, group: Option<u8>, description: &str, outcome: Outcome) -> ConditionReport {
        ConditionReport {
            id: format!("C{idx}"),
            description: description.to_string(),
            group,
            verdict: outcome.verdict,
            worst_margin: outcome.worst_margin,
            witness: outcome.witness,
        }
    }

    fn conclusion(&self, rule: RuleId) -> Result<ConditionReport, TheoremError> {
        let mix1 = MixedSystemLifetime::new(
            self.sc.system1.distortion().clone(),
            self.sc.system1.marginals().to_vec(),
            self.sc.env1.clone(),
        )?;
        let mix2 = MixedSystemLifetime::new(
            self.sc.system2.distortion().clone(),
            self.sc.system2.marginals().to_vec(),
            self.sc.env2.clone(),
        )?;
        let order = rule.conclusion_order();
        let grid = &self.sc.grid;
        let nan = f64::NAN;
        let verdict = match order {
            OrderRelation::St => check_st(
                |x| mix1.survival(x).unwrap_or(nan),
                |x| mix2.survival(x).unwrap_or(nan),
                grid,
            ),
            OrderRelation::Hr => check_hr(
                |x| mix1.survival(x).unwrap_or(nan),
                |x| mix2.survival(x).unwrap_or(nan),
                grid,
            ),
            OrderRelation::Rhr => check_rhr(
                |x| mix1.cdf(x).unwrap_or(nan),
                |x| mix2.cdf(x).unwrap_or(nan),
                grid,
            ),
            OrderRelation::Lr => check_lr(
                |x| mix1.density(x).unwrap_or(nan),
                |x| mix2.density(x).unwrap_or(nan),
                grid,
            ),
        };
        let witness = verdict
            .witness
            .map(|w| format!("x∈[{:.5},{:.5}] margin {:.3e}", w.x_left, w.x_right, w.margin))
            .unwrap_or_default();
        Ok(ConditionReport {
            id: "conclusion".to_string(),
            description: format!("system1 ≤_{order} system2 on the mixture laws"),
            group: None,
            verdict: verdict.holds,
            worst_margin: verdict.worst_margin,
            witness,
        })
    }
}

pub(super) fn run(sc: &ComparisonScenario, rule: RuleId) -> Result<TheoremReport, TheoremError> {
    let ctx = Ctx::new(sc);
    let conditions = match rule {
        RuleId::SameEnvSt => same_env_st(&ctx)?,
        RuleId::SameEnvHr => same_env_hr(&ctx, rule)?,
        RuleId::SameEnvRhr => same_env_rhr(&ctx, rule)?,
        RuleId::SameEnvIidSt => same_env_iid_st(&ctx, rule)?,
        RuleId::SameEnvIidHr => same_env_iid_hr(&ctx, rule)?,
        RuleId::SameEnvIidRhr => same_env_iid_rhr(&ctx, rule)?,
        RuleId::DiffEnvSt => diff_env_st(&ctx)?,
        RuleId::DiffEnvHr => {
            let mut c = same_env_hr(&ctx, rule)?;
            c.push(ctx.condition(
                5,
                None,
                "Θ1 ≤_hr Θ2",
                checks::env_order(OrderRelation::Hr, &sc.env1, &sc.env2, ctx.tol),
            ));
            c
        }
        RuleId::DiffEnvRhr => {
            let mut c = same_env_rhr(&ctx, rule)?;
            c.push(ctx.condition(
                5,
                None,
                "Θ1 ≤_rhr Θ2",
                checks::env_order(OrderRelation::Rhr, &sc.env1, &sc.env2, ctx.tol),
            ));
            c
        }
        RuleId::DiffEnvIidSt => diff_env_iid_st(&ctx, rule)?,
        RuleId::DiffEnvIidHr => {
            let mut c = same_env_iid_hr(&ctx, rule)?;
            c.push(ctx.condition(
                5,
                None,
                "Θ1 ≤_hr Θ2",
                checks::env_order(OrderRelation::Hr, &sc.env1, &sc.env2, ctx.tol),
            ));
            c
        }
        RuleId::DiffEnvIidRhr => {
            let mut c = same_env_iid_rhr(&ctx, rule)?;
            c.push(ctx.condition(
                5,
                None,
                "Θ1 ≤_rhr Θ2",
                checks::env_order(OrderRelation::Rhr, &sc.env1, &sc.env2, ctx.tol),
            ));
            c
        }
        RuleId::DetEnvSt => det_env_st(&ctx)?,
        RuleId::DetEnvHrSums => det_env_hr_sums(&ctx)?,
        RuleId::DetEnvHrCoord => det_env_hr_coord(&ctx, rule)?,
        RuleId::DetEnvRhrSums => det_env_rhr_sums(&ctx)?,
        RuleId::DetEnvRhrCoord => det_env_rhr_coord(&ctx, rule)?,
        RuleId::DetEnvLr => det_env_lr(&ctx)?,
        RuleId::DetEnvIidSt => det_env_iid_st(&ctx, rule)?,
        RuleId::DetEnvIidHr => det_env_iid_hr(&ctx, rule)?,
        RuleId::DetEnvIidRhr => det_env_iid_rhr(&ctx, rule)?,
        RuleId::DetEnvIidLr => det_env_iid_lr(&ctx, rule)?,
    };
    let conclusion = ctx.conclusion(rule)?;
    Ok(TheoremReport::assemble(rule, conditions, conclusion))
}

// ---------------------------------------------------------------------------
// section 3: one shared random environment
// ---------------------------------------------------------------------------

fn same_env_st(ctx: &Ctx) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    let shared = ctx.n().min(ctx.m());
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1(p) ≤ h2(p) on interior points",
            checks::h_dominance_multi(
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            None,
            "X_i(θ) ≤_st Y_i(θ) for all probe θ",
            checks::cross_order(
                OrderRelation::St,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(shared),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

/// The two opposite-orientation premise chains of the hr rules.
fn hr_chains(ctx: &Ctx, start_idx: usize) -> Vec<ConditionReport> {
    let sc = ctx.sc;
    let m = ctx.m();
    let chain = |x_increasing: bool| -> Outcome {
        let mut fold = checks::MarginFold::new(ctx.tol);
        for outcome in [
            checks::family_monotone_in_theta(
                OrderRelation::Hr,
                sc.system1.marginals(),
                &ctx.probes.pairs,
                x_increasing,
                &sc.grid,
                ctx.tol,
            ),
            checks::cross_order(
                OrderRelation::Hr,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(m),
                &sc.grid,
                ctx.tol,
            ),
            checks::family_monotone_in_theta(
                OrderRelation::Hr,
                sc.system2.marginals(),
                &ctx.probes.pairs,
                !x_increasing,
                &sc.grid,
                ctx.tol,
            ),
        ] {
            if outcome.verdict == Certification::Inconclusive {
                fold.push(f64::NAN, String::new);
            } else {
                fold.push(outcome.worst_margin, || outcome.witness.clone());
            }
        }
        fold.finish()
    };
    vec![
        ctx.condition(
            start_idx,
            Some(1),
            "hr chain: X increasing in θ, X(θ) ≤_hr Y(θ), Y decreasing in θ",
            chain(true),
        ),
        ctx.condition(
            start_idx + 1,
            Some(1),
            "hr chain: X decreasing in θ, X(θ) ≤_hr Y(θ), Y increasing in θ",
            chain(false),
        ),
    ]
}

fn rhr_chains(ctx: &Ctx, start_idx: usize) -> Vec<ConditionReport> {
    let sc = ctx.sc;
    let shared = ctx.n().min(ctx.m());
    let chain = |x_increasing: bool| -> Outcome {
        let mut fold = checks::MarginFold::new(ctx.tol);
        for outcome in [
            checks::family_monotone_in_theta(
                OrderRelation::Rhr,
                sc.system1.marginals(),
                &ctx.probes.pairs,
                x_increasing,
                &sc.grid,
                ctx.tol,
            ),
            checks::cross_order(
                OrderRelation::Rhr,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(shared),
                &sc.grid,
                ctx.tol,
            ),
            checks::family_monotone_in_theta(
                OrderRelation::Rhr,
                sc.system2.marginals(),
                &ctx.probes.pairs,
                !x_increasing,
                &sc.grid,
                ctx.tol,
            ),
        ] {
            if outcome.verdict == Certification::Inconclusive {
                fold.push(f64::NAN, String::new);
            } else {
                fold.push(outcome.worst_margin, || outcome.witness.clone());
            }
        }
        fold.finish()
    };
    vec![
        ctx.condition(
            start_idx,
            Some(1),
            "rhr chain: X increasing in θ, X(θ) ≤_rhr Y(θ), Y decreasing in θ",
            chain(true),
        ),
        ctx.condition(
            start_idx + 1,
            Some(1),
            "rhr chain: X decreasing in θ, X(θ) ≤_rhr Y(θ), Y increasing in θ",
            chain(false),
        ),
    ]
}

fn same_env_hr(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    let (n, m) = (ctx.n(), ctx.m());
    ctx.require_dims(rule, n >= m, "n ≥ m")?;
    let mut conditions = vec![
        ctx.condition(
            1,
            None,
            "(1/h1)∂h1/∂p_i ≥ (1/h2)∂h2/∂p_i for i ≤ m",
            checks::coord_functional_cmp(
                CoordFunctional::LogGradient,
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                m,
                true,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            None,
            "p_i ∂h2/∂p_i / h2 decreasing in p_i, for i ≤ m",
            checks::coord_functional_own_monotone(
                CoordFunctional::Elasticity,
                sc.system2.distortion(),
                m,
                true,
                &ctx.bases,
                &ctx.sweep,
                ctx.tol,
            ),
        ),
    ];
    conditions.extend(hr_chains(ctx, 3));
    Ok(conditions)
}

fn same_env_rhr(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    let (n, m) = (ctx.n(), ctx.m());
    ctx.require_dims(rule, m >= n, "m ≥ n")?;
    let mut conditions = vec![
        ctx.condition(
            1,
            None,
            "∂h1/∂p_i/(1-h1) ≤ ∂h2/∂p_i/(1-h2) for i ≤ n",
            checks::coord_functional_cmp(
                CoordFunctional::CoGradient,
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                n,
                false,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            None,
            "(1-p_i)∂h1/∂p_i/(1-h1) increasing in p_i, for i ≤ n",
            checks::coord_functional_own_monotone(
                CoordFunctional::CoElasticity,
                sc.system1.distortion(),
                n,
                false,
                &ctx.bases,
                &ctx.sweep,
                ctx.tol,
            ),
        ),
    ];
    conditions.extend(rhr_chains(ctx, 3));
    Ok(conditions)
}

fn same_env_iid_st(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let sc = ctx.sc;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1(p) ≤ h2(p) on (0,1)",
            checks::h_dominance_scalar(&h1, &h2, &ctx.diag, ctx.tol),
        ),
        ctx.condition(
            2,
            None,
            "X1(θ) ≤_st Y1(θ) for all probe θ",
            checks::cross_order(
                OrderRelation::St,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn same_env_iid_hr(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    let mut conditions = vec![
        ctx.condition(
            1,
            None,
            "h1(p)/h2(p) increasing on (0,1)",
            checks::scalar_ratio_monotone(|p| h1.value(p), |p| h2.value(p), &ctx.diag, true, ctx.tol),
        ),
        ctx.condition(
            2,
            None,
            "p h2'(p)/h2(p) decreasing on (0,1)",
            checks::scalar_monotone(|p| h2.eta(p), &ctx.diag, false, ctx.tol),
        ),
    ];
    conditions.extend(iid_hr_chains(ctx, 3));
    Ok(conditions)
}

fn iid_hr_chains(ctx: &Ctx, start_idx: usize) -> Vec<ConditionReport> {
    let sc = ctx.sc;
    let chain = |x_increasing: bool| -> Outcome {
        let mut fold = checks::MarginFold::new(ctx.tol);
        for outcome in [
            checks::family_monotone_in_theta(
                OrderRelation::Hr,
                &sc.system1.marginals()[..1],
                &ctx.probes.pairs,
                x_increasing,
                &sc.grid,
                ctx.tol,
            ),
            checks::cross_order(
                OrderRelation::Hr,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
            checks::family_monotone_in_theta(
                OrderRelation::Hr,
                &sc.system2.marginals()[..1],
                &ctx.probes.pairs,
                !x_increasing,
                &sc.grid,
                ctx.tol,
            ),
        ] {
            if outcome.verdict == Certification::Inconclusive {
                fold.push(f64::NAN, String::new);
            } else {
                fold.push(outcome.worst_margin, || outcome.witness.clone());
            }
        }
        fold.finish()
    };
    vec![
        ctx.condition(
            start_idx,
            Some(1),
            "hr chain: X1(θ1) ≤ X1(θ2) ≤ Y1(θ2) ≤ Y1(θ1) for θ1 ≤ θ2",
            chain(true),
        ),
        ctx.condition(
            start_idx + 1,
            Some(1),
            "hr chain: X1(θ2) ≤ X1(θ1) ≤ Y1(θ1) ≤ Y1(θ2) for θ1 ≤ θ2",
            chain(false),
        ),
    ]
}

fn same_env_iid_rhr(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let sc = ctx.sc;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    let chain = |x_increasing: bool| -> Outcome {
        let mut fold = checks::MarginFold::new(ctx.tol);
        for outcome in [
            checks::family_monotone_in_theta(
                OrderRelation::Rhr,
                &sc.system1.marginals()[..1],
                &ctx.probes.pairs,
                x_increasing,
                &sc.grid,
                ctx.tol,
            ),
            checks::cross_order(
                OrderRelation::Rhr,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
            checks::family_monotone_in_theta(
                OrderRelation::Rhr,
                &sc.system2.marginals()[..1],
                &ctx.probes.pairs,
                !x_increasing,
                &sc.grid,
                ctx.tol,
            ),
        ] {
            if outcome.verdict == Certification::Inconclusive {
                fold.push(f64::NAN, String::new);
            } else {
                fold.push(outcome.worst_margin, || outcome.witness.clone());
            }
        }
        fold.finish()
    };
    Ok(vec![
        ctx.condition(
            1,
            None,
            "(1-h1(p))/(1-h2(p)) increasing on (0,1)",
            checks::scalar_ratio_monotone(
                |p| h1.complement(p),
                |p| h2.complement(p),
                &ctx.diag,
                true,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            None,
            "(1-p) h1'(p)/(1-h1(p)) increasing on (0,1)",
            checks::scalar_monotone(|p| h1.rho(p), &ctx.diag, true, ctx.tol),
        ),
        ctx.condition(
            3,
            Some(1),
            "rhr chain: X1(θ1) ≤ X1(θ2) ≤ Y1(θ2) ≤ Y1(θ1) for θ1 ≤ θ2",
            chain(true),
        ),
        ctx.condition(
            4,
            Some(1),
            "rhr chain: X1(θ2) ≤ X1(θ1) ≤ Y1(θ1) ≤ Y1(θ2) for θ1 ≤ θ2",
            chain(false),
        ),
    ])
}

// ---------------------------------------------------------------------------
// section 4: two different random environments
// ---------------------------------------------------------------------------

fn diff_env_st(ctx: &Ctx) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    let shared = ctx.n().min(ctx.m());
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1(p) ≤ h2(p) on interior points",
            checks::h_dominance_multi(
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            Some(1),
            "X_i st-increasing in θ",
            checks::family_monotone_in_theta(
                OrderRelation::St,
                sc.system1.marginals(),
                &ctx.probes.pairs,
                true,
                &sc.grid,
                ctx.tol,
            ),
        ),
        ctx.condition(
            3,
            Some(1),
            "Y_i st-increasing in θ",
            checks::family_monotone_in_theta(
                OrderRelation::St,
                sc.system2.marginals(),
                &ctx.probes.pairs,
                true,
                &sc.grid,
                ctx.tol,
            ),
        ),
        ctx.condition(
            4,
            None,
            "X_i(θ) ≤_st Y_i(θ) for all probe θ",
            checks::cross_order(
                OrderRelation::St,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(shared),
                &sc.grid,
                ctx.tol,
            ),
        ),
        ctx.condition(
            5,
            None,
            "Θ1 ≤_st Θ2",
            checks::env_order(OrderRelation::St, &sc.env1, &sc.env2, ctx.tol),
        ),
    ])
}

fn diff_env_iid_st(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let sc = ctx.sc;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1(p) ≤ h2(p) on (0,1)",
            checks::h_dominance_scalar(&h1, &h2, &ctx.diag, ctx.tol),
        ),
        ctx.condition(
            2,
            Some(1),
            "X1 st-increasing in θ",
            checks::family_monotone_in_theta(
                OrderRelation::St,
                &sc.system1.marginals()[..1],
                &ctx.probes.pairs,
                true,
                &sc.grid,
                ctx.tol,
            ),
        ),
        ctx.condition(
            3,
            Some(1),
            "Y1 st-increasing in θ",
            checks::family_monotone_in_theta(
                OrderRelation::St,
                &sc.system2.marginals()[..1],
                &ctx.probes.pairs,
                true,
                &sc.grid,
                ctx.tol,
            ),
        ),
        ctx.condition(
            4,
            None,
            "X1(θ) ≤_st Y1(θ) for all probe θ",
            checks::cross_order(
                OrderRelation::St,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                None,
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
        ),
        ctx.condition(
            5,
            None,
            "Θ1 ≤_st Θ2",
            checks::env_order(OrderRelation::St, &sc.env1, &sc.env2, ctx.tol),
        ),
    ])
}

// ---------------------------------------------------------------------------
// section 5: second system in a deterministic environment
// ---------------------------------------------------------------------------

fn det_env_st(ctx: &Ctx) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    let shared = ctx.n().min(ctx.m());
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1(p) ≤ h2(p) on interior points",
            checks::h_dominance_multi(
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            None,
            "X_i(θ) ≤_st Y_i for all probe θ",
            checks::cross_order(
                OrderRelation::St,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::Paired(shared),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_hr_sums(ctx: &Ctx) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    Ok(vec![
        ctx.condition(
            1,
            None,
            "Σ p_i ∂h1/∂p_i / h1 ≥ Σ p_i ∂h2/∂p_i / h2",
            checks::sum_functional_cmp(
                SumFunctional::EtaSum,
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                true,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            Some(1),
            "Σ p_i ∂h1/∂p_i / h1 decreasing in each p_i",
            checks::sum_functional_monotone(
                SumFunctional::EtaSum,
                sc.system1.distortion(),
                true,
                &ctx.bases,
                &ctx.sweep,
                ctx.tol,
            ),
        ),
        ctx.condition(
            3,
            Some(1),
            "Σ p_i ∂h2/∂p_i / h2 decreasing in each p_i",
            checks::sum_functional_monotone(
                SumFunctional::EtaSum,
                sc.system2.distortion(),
                true,
                &ctx.bases,
                &ctx.sweep,
                ctx.tol,
            ),
        ),
        ctx.condition(
            4,
            None,
            "X_i(θ) ≤_hr Y_j for all probe θ and all (i, j)",
            checks::cross_order(
                OrderRelation::Hr,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::AllPairs,
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_hr_coord(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    let (n, m) = (ctx.n(), ctx.m());
    ctx.require_dims(rule, n >= m, "n ≥ m")?;
    let own1 = checks::coord_functional_own_monotone(
        CoordFunctional::Elasticity,
        sc.system1.distortion(),
        m,
        true,
        &ctx.bases,
        &ctx.sweep,
        ctx.tol,
    );
    let own2 = checks::coord_functional_own_monotone(
        CoordFunctional::Elasticity,
        sc.system2.distortion(),
        m,
        true,
        &ctx.bases,
        &ctx.sweep,
        ctx.tol,
    );
    let either = pick_better("h1", own1, "h2", own2);
    Ok(vec![
        ctx.condition(
            1,
            None,
            "p_i ∂h1/∂p_i / h1 ≥ p_i ∂h2/∂p_i / h2 for i ≤ m",
            checks::coord_functional_cmp(
                CoordFunctional::Elasticity,
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                m,
                true,
                ctx.tol,
            ),
        ),
        ctx.condition(2, None, "p_i ∂h/∂p_i / h decreasing in p_i for h1 or h2", either),
        ctx.condition(
            3,
            None,
            "X_i(θ) ≤_hr Y_i for all probe θ, i ≤ m",
            checks::cross_order(
                OrderRelation::Hr,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::Paired(m),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_rhr_sums(ctx: &Ctx) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    Ok(vec![
        ctx.condition(
            1,
            None,
            "Σ (1-p_i) ∂h1/∂p_i / (1-h1) ≤ Σ (1-p_i) ∂h2/∂p_i / (1-h2)",
            checks::sum_functional_cmp(
                SumFunctional::RhoSum,
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                false,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            Some(1),
            "Σ (1-p_i) ∂h1/∂p_i / (1-h1) increasing in each p_i",
            checks::sum_functional_monotone(
                SumFunctional::RhoSum,
                sc.system1.distortion(),
                false,
                &ctx.bases,
                &ctx.sweep,
                ctx.tol,
            ),
        ),
        ctx.condition(
            3,
            Some(1),
            "Σ (1-p_i) ∂h2/∂p_i / (1-h2) increasing in each p_i",
            checks::sum_functional_monotone(
                SumFunctional::RhoSum,
                sc.system2.distortion(),
                false,
                &ctx.bases,
                &ctx.sweep,
                ctx.tol,
            ),
        ),
        ctx.condition(
            4,
            None,
            "X_i(θ) ≤_rhr Y_j for all probe θ and all (i, j)",
            checks::cross_order(
                OrderRelation::Rhr,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::AllPairs,
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_rhr_coord(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    let (n, m) = (ctx.n(), ctx.m());
    ctx.require_dims(rule, m >= n, "m ≥ n")?;
    let own1 = checks::coord_functional_own_monotone(
        CoordFunctional::CoElasticity,
        sc.system1.distortion(),
        n,
        false,
        &ctx.bases,
        &ctx.sweep,
        ctx.tol,
    );
    let own2 = checks::coord_functional_own_monotone(
        CoordFunctional::CoElasticity,
        sc.system2.distortion(),
        n,
        false,
        &ctx.bases,
        &ctx.sweep,
        ctx.tol,
    );
    let either = pick_better("h1", own1, "h2", own2);
    Ok(vec![
        ctx.condition(
            1,
            None,
            "(1-p_i)∂h1/∂p_i/(1-h1) ≤ (1-p_i)∂h2/∂p_i/(1-h2) for i ≤ n",
            checks::coord_functional_cmp(
                CoordFunctional::CoElasticity,
                sc.system1.distortion(),
                sc.system2.distortion(),
                &ctx.points,
                n,
                false,
                ctx.tol,
            ),
        ),
        ctx.condition(2, None, "(1-p_i)∂h/∂p_i/(1-h) increasing in p_i for h1 or h2", either),
        ctx.condition(
            3,
            None,
            "X_i(θ) ≤_rhr Y_i for all probe θ, i ≤ n",
            checks::cross_order(
                OrderRelation::Rhr,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::Paired(n),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_lr(ctx: &Ctx) -> Result<Vec<ConditionReport>, TheoremError> {
    let sc = ctx.sc;
    Ok(vec![
        ctx.condition(
            1,
            None,
            "∂h2/∂q_j / ∂h1/∂p_i increasing in x for all (i, j) and probe θ",
            checks::partial_ratio_increasing(
                sc.system1.distortion(),
                sc.system1.marginals(),
                sc.system2.distortion(),
                sc.system2.marginals(),
                ctx.theta_star(),
                &ctx.probes.thetas,
                &sc.grid,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            None,
            "X_i(θ) ≤_lr Y_j for all probe θ and all (i, j)",
            checks::cross_order(
                OrderRelation::Lr,
                sc.system1.marginals(),
                sc.system2.marginals(),
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::AllPairs,
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_iid_st(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let sc = ctx.sc;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1(p) ≤ h2(p) on (0,1)",
            checks::h_dominance_scalar(&h1, &h2, &ctx.diag, ctx.tol),
        ),
        ctx.condition(
            2,
            None,
            "X1(θ) ≤_st Y1 for all probe θ",
            checks::cross_order(
                OrderRelation::St,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_iid_hr(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let sc = ctx.sc;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    let eta1 = checks::scalar_monotone(|p| h1.eta(p), &ctx.diag, false, ctx.tol);
    let eta2 = checks::scalar_monotone(|p| h2.eta(p), &ctx.diag, false, ctx.tol);
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1(p)/h2(p) increasing on (0,1)",
            checks::scalar_ratio_monotone(|p| h1.value(p), |p| h2.value(p), &ctx.diag, true, ctx.tol),
        ),
        ctx.condition(2, None, "p h'(p)/h(p) decreasing for h1 or h2", pick_better("h1", eta1, "h2", eta2)),
        ctx.condition(
            3,
            None,
            "X1(θ) ≤_hr Y1 for all probe θ",
            checks::cross_order(
                OrderRelation::Hr,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_iid_rhr(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let sc = ctx.sc;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    let rho1 = checks::scalar_monotone(|p| h1.rho(p), &ctx.diag, true, ctx.tol);
    let rho2 = checks::scalar_monotone(|p| h2.rho(p), &ctx.diag, true, ctx.tol);
    Ok(vec![
        ctx.condition(
            1,
            None,
            "(1-h1(p))/(1-h2(p)) increasing on (0,1)",
            checks::scalar_ratio_monotone(
                |p| h1.complement(p),
                |p| h2.complement(p),
                &ctx.diag,
                true,
                ctx.tol,
            ),
        ),
        ctx.condition(
            2,
            None,
            "(1-p)h'(p)/(1-h(p)) increasing for h1 or h2",
            pick_better("h1", rho1, "h2", rho2),
        ),
        ctx.condition(
            3,
            None,
            "X1(θ) ≤_rhr Y1 for all probe θ",
            checks::cross_order(
                OrderRelation::Rhr,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

fn det_env_iid_lr(ctx: &Ctx, rule: RuleId) -> Result<Vec<ConditionReport>, TheoremError> {
    ctx.require_iid(rule)?;
    let sc = ctx.sc;
    let (h1, h2) = (ctx.profile1(), ctx.profile2());
    let (split1, mu1) = checks::inflection_split(&h1, &ctx.diag, ctx.tol);
    let (split2, mu2) = checks::inflection_split(&h2, &ctx.diag, ctx.tol);
    let mut split = pick_better("h1", split1, "h2", split2);
    split.witness = format!("μ̂(h1)={mu1:.4} μ̂(h2)={mu2:.4}; {}", split.witness);
    Ok(vec![
        ctx.condition(
            1,
            None,
            "h1'(p)/h2'(p) increasing on (0,1)",
            checks::scalar_ratio_monotone(|p| h1.d1(p), |p| h2.d1(p), &ctx.diag, true, ctx.tol),
        ),
        ctx.condition(
            2,
            None,
            "κ decreasing-positive below μ and κ̄ decreasing-negative above, for h1 or h2",
            split,
        ),
        ctx.condition(
            3,
            None,
            "X1(θ) ≤_lr Y1 for all probe θ",
            checks::cross_order(
                OrderRelation::Lr,
                &sc.system1.marginals()[..1],
                &sc.system2.marginals()[..1],
                &ctx.probes.thetas,
                Some(ctx.theta_star()),
                IndexMatch::Paired(1),
                &sc.grid,
                ctx.tol,
            ),
        ),
    ])
}

/// Merges a disjunctive pair of sub-checks into one outcome: certified if
/// either side certifies; the witness names the side that carried it.
fn pick_better(name_a: &str, a: Outcome, name_b: &str, b: Outcome) -> Outcome {
    let a_ok = a.verdict == Certification::CertifiedOnGrid;
    let b_ok = b.verdict == Certification::CertifiedOnGrid;
    match (a_ok, b_ok) {
        (true, _) => Outcome { witness: format!("holds for {name_a}: {}", a.witness), ..a },
        (false, true) => Outcome { witness: format!("holds for {name_b}: {}", b.witness), ..b },
        (false, false) => {
            let (worse_name, mut worst) =
                if a.worst_margin <= b.worst_margin { (name_a, a) } else { (name_b, b) };
            worst.witness = format!("fails for both; worst on {worse_name}: {}", worst.witness);
            worst
        }
    }
}
