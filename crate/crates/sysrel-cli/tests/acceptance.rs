//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them all). Tolerances are
//! pinned in this file; a red criterion here blocks release.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sysrel_core::copulas::SurvivalCopula;
use sysrel_core::distortions::DistortionFunction;
use sysrel_core::lifetimes::{Baseline, ConditionalLifetimeModel, EnvironmentLink, Orientation};
use sysrel_core::mixtures::{EnvFamily, Environment, MixedSystemLifetime};
use sysrel_core::orders::{check_hr, check_lr, check_rhr, check_st, Certification, GridSpec};
use sysrel_core::points::linspace;
use sysrel_core::structures::{enumerate_coherent, CoherentStructure};
use sysrel_core::theorems::{certify_kofn_properties, verify, ComparisonScenario, RuleId};

fn pass(criterion: u8, detail: &str) {
    println!("[criterion {criterion:02}] PASS — {detail}");
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_sysrel")
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn tmpfile(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sysrel-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Exhaustive state-enumeration reliability for independent components — the
/// independent oracle for criterion 1.
fn brute_force_independence(s: &CoherentStructure, p: &[f64]) -> f64 {
    let n = s.component_count();
    let mut total = 0.0;
    for state in 0u32..(1 << n) {
        if !s.system_works(state) {
            continue;
        }
        let mut prob = 1.0;
        for (i, &pi) in p.iter().enumerate() {
            prob *= if state & (1 << i) != 0 { pi } else { 1.0 - pi };
        }
        total += prob;
    }
    total
}

#[test]
fn criterion_01_distortion_equals_state_enumeration() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    let mut checks = 0u64;
    for n in 1..=4usize {
        for structure in enumerate_coherent(n) {
            let copula = SurvivalCopula::independence(n).unwrap();
            let h = DistortionFunction::build(structure.clone(), copula).unwrap();
            for _ in 0..100 {
                let p: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                let expected = brute_force_independence(&structure, &p);
                let got = h.eval(&p).unwrap();
                worst = worst.max((got - expected).abs());
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(worst <= 1e-12, "worst |Δ| = {worst:e}");
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    pass(1, &format!("max |Δ| = {worst:.2e} over {checks} checks in {elapsed:.2?}"));
}

#[test]
fn criterion_02_gradients_match_finite_differences() {
    let structure = CoherentStructure::from_paths(3, &[vec![1, 2], vec![1, 3]]).unwrap();
    let copulas = vec![
        SurvivalCopula::independence(3).unwrap(),
        SurvivalCopula::fgm(3, 0.8).unwrap(),
        SurvivalCopula::gumbel_barnett(3, 0.5).unwrap(),
        SurvivalCopula::clayton_oakes(3, 1.4).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let step = 1e-5;
    let mut worst_rel: f64 = 0.0;
    for copula in &copulas {
        let h = DistortionFunction::build(structure.clone(), copula.clone()).unwrap();
        for _ in 0..500 {
            let p: Vec<f64> = (0..3).map(|_| 0.02 + 0.96 * rng.random::<f64>()).collect();
            let grad = h.gradient(&p).unwrap();
            for i in 0..3 {
                let mut up = p.clone();
                let mut dn = p.clone();
                up[i] += step;
                dn[i] -= step;
                let fd = (h.eval(&up).unwrap() - h.eval(&dn).unwrap()) / (2.0 * step);
                let rel = (grad[i] - fd).abs() / grad[i].abs().max(1e-3);
                worst_rel = worst_rel.max(rel);
            }
        }
    }
    assert!(worst_rel <= 1e-6, "worst relative gradient error {worst_rel:e}");

    // the Gumbel–Barnett log-gradient identity in dimension four:
    // p_i ∂_i h / h = 1 - α Π_{j≠i} ln p_j for the series system
    let alpha = 0.7;
    let series = DistortionFunction::build(
        CoherentStructure::series(4).unwrap(),
        SurvivalCopula::gumbel_barnett(4, alpha).unwrap(),
    )
    .unwrap();
    let mut worst_identity: f64 = 0.0;
    for _ in 0..500 {
        let p: Vec<f64> = (0..4).map(|_| 0.02 + 0.96 * rng.random::<f64>()).collect();
        let value = series.eval(&p).unwrap();
        let grad = series.gradient(&p).unwrap();
        for i in 0..4 {
            let elasticity = p[i] * grad[i] / value;
            let l_rest: f64 = (0..4).filter(|&j| j != i).map(|j| p[j].ln()).product();
            let expected = 1.0 - alpha * l_rest;
            worst_identity =
                worst_identity.max((elasticity - expected).abs() / expected.abs().max(1.0));
        }
    }
    assert!(worst_identity <= 1e-10, "identity error {worst_identity:e}");
    pass(
        2,
        &format!(
            "FD relative error ≤ {worst_rel:.2e} (4 families × 500 points); log-gradient identity ≤ {worst_identity:.2e}"
        ),
    );
}

#[test]
fn criterion_03_mixture_closed_forms() {
    let frailty = ConditionalLifetimeModel::new(
        Baseline::Exponential { rate: 1.0 },
        EnvironmentLink::MultiplicativeFrailty,
        Orientation::DecreasingInTheta,
    )
    .unwrap();

    // two-atom environment: survival is (e^{-2x} + e^{-4x})/2 exactly
    let two_atom = MixedSystemLifetime::new(
        DistortionFunction::build(
            CoherentStructure::series(2).unwrap(),
            SurvivalCopula::independence(2).unwrap(),
        )
        .unwrap(),
        vec![frailty; 2],
        Environment::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap(),
    )
    .unwrap();
    let mut worst_atoms: f64 = 0.0;
    for x in linspace(0.0, 3.0, 20) {
        let want = 0.5 * ((-2.0 * x).exp() + (-4.0 * x).exp());
        worst_atoms = worst_atoms.max((two_atom.survival(x).unwrap() - want).abs());
    }
    assert!(worst_atoms <= 1e-12, "two-atom error {worst_atoms:e}");

    // gamma(2, 1) environment with a series of three: (b/(b+3x))^2
    let gamma_mix = MixedSystemLifetime::new(
        DistortionFunction::build(
            CoherentStructure::series(3).unwrap(),
            SurvivalCopula::independence(3).unwrap(),
        )
        .unwrap(),
        vec![frailty; 3],
        Environment::continuous(EnvFamily::Gamma { shape: 2.0, rate: 1.0 }, 64, 1e-8).unwrap(),
    )
    .unwrap();
    let mut worst_gamma: f64 = 0.0;
    for x in linspace(0.1, 2.0, 20) {
        let want = (1.0 / (1.0 + 3.0 * x)).powi(2);
        worst_gamma = worst_gamma.max((gamma_mix.survival(x).unwrap() - want).abs());
    }
    assert!(worst_gamma <= 1e-8, "gamma-environment error {worst_gamma:e}");
    pass(3, &format!("two-atom |Δ| ≤ {worst_atoms:.2e}; gamma(2,1) |Δ| ≤ {worst_gamma:.2e} at 64 nodes"));
}

#[test]
fn criterion_04_monte_carlo_oracle() {
    let start = Instant::now();
    let scenario = scenarios_dir().join("mc_series_parallel_fgm.toml");
    let run_sim = |seed: &str, out: &Path| {
        let res = Command::new(bin())
            .args([
                "simulate",
                scenario.to_str().unwrap(),
                "--n",
                "200000",
                "--seed",
                seed,
                "--out",
                out.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    };
    let a = tmpfile("mc_a.csv");
    let b = tmpfile("mc_b.csv");
    run_sim("424242", &a);
    run_sim("424242", &b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "seed must be reproducible");

    let max_abs_z = |path: &Path| -> f64 {
        let text = std::fs::read_to_string(path).unwrap();
        let rows: Vec<f64> = text
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
            .collect();
        assert_eq!(rows.len(), 5);
        rows.into_iter().fold(0.0, f64::max)
    };
    let mut z = max_abs_z(&a);
    let mut reruns = 0;
    if z > 3.0 {
        // one re-run with a fresh seed is allowed (≈0.3% spurious failure
        // probability per grid point)
        reruns = 1;
        let c = tmpfile("mc_c.csv");
        run_sim("424243", &c);
        z = max_abs_z(&c);
    }
    let elapsed = start.elapsed();
    assert!(z <= 3.0, "max |z| = {z}");
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(4, &format!("byte-identical at fixed seed; max |z| = {z:.2} ({reruns} re-runs) in {elapsed:.2?}"));
}

#[test]
fn criterion_05_fgm_profile_monotonicity() {
    let grid = linspace(1e-6, 1.0 - 1e-6, 1000);
    let slack = 1e-9;
    for lambda in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let c = SurvivalCopula::fgm(3, lambda).unwrap();
        let h1 = DistortionFunction::build(CoherentStructure::series(3).unwrap(), c.clone())
            .unwrap()
            .iid_profile();
        let h2 = DistortionFunction::build(
            CoherentStructure::from_paths(3, &[vec![1, 2], vec![1, 3]]).unwrap(),
            c,
        )
        .unwrap()
        .iid_profile();
        let mut prev_ratio = f64::NEG_INFINITY;
        let mut prev_eta = f64::INFINITY;
        for &p in &grid {
            let ratio = h1.value(p) / h2.value(p);
            let eta = h2.eta(p);
            assert!(
                ratio >= prev_ratio - slack * prev_ratio.abs().max(1.0),
                "h1/h2 not nondecreasing at p={p}, λ={lambda}"
            );
            assert!(
                eta <= prev_eta + slack * prev_eta.abs().max(1.0),
                "p·h2'/h2 not nonincreasing at p={p}, λ={lambda}"
            );
            prev_ratio = ratio;
            prev_eta = eta;
        }
    }
    pass(5, "h1/h2 nondecreasing and p·h2'/h2 nonincreasing on 1000-point grids for λ ∈ {-1,-0.5,0,0.5,1}");
}

#[test]
fn criterion_06_second_derivative_sign_split() {
    let mut details = Vec::new();
    for (k, n) in [(2usize, 3usize), (3, 5), (2, 5)] {
        let reports = certify_kofn_properties(k, n, k, n, 1000).unwrap();
        let split = reports.iter().find(|r| r.claim == "kappa-sign-split").unwrap();
        let mu = split.mu_expected.unwrap();
        let mu_hat = split.mu_hat.unwrap();
        assert!(
            (mu_hat - mu).abs() <= 1e-3,
            "(k,n)=({k},{n}): μ̂={mu_hat} vs μ={mu}"
        );
        assert_eq!(
            split.verdict,
            Certification::CertifiedOnGrid,
            "(k,n)=({k},{n}): {}",
            split.witness
        );
        details.push(format!("({k},{n}): μ̂={mu_hat:.4}"));
    }
    pass(6, &format!("sign change within 1e-3 of (k-1)/(n-1) for {}", details.join(", ")));
}

#[test]
fn criterion_07_kofn_comparison_suite() {
    let start = Instant::now();
    let mut tuples = 0u32;
    for n in 1..=6usize {
        for k in 1..=n {
            for m in 1..=6usize {
                for l in 1..=m {
                    if l > k || n - k > m - l {
                        continue;
                    }
                    let reports = certify_kofn_properties(k, n, l, m, 1000).unwrap();
                    for r in &reports {
                        assert_eq!(
                            r.verdict,
                            Certification::CertifiedOnGrid,
                            "(k,n;l,m)=({k},{n};{l},{m}) claim {}: margin {:.3e}, {}",
                            r.claim,
                            r.worst_margin,
                            r.witness
                        );
                    }
                    tuples += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(7, &format!("all claims certified for {tuples} admissible (k,n;l,m) tuples in {elapsed:.2?}"));
}

#[test]
fn criterion_08_order_implication_chain() {
    #[derive(Clone, Copy)]
    struct Law {
        baseline: Baseline,
    }
    impl Law {
        fn model(self) -> ConditionalLifetimeModel {
            ConditionalLifetimeModel::new(
                self.baseline,
                EnvironmentLink::None,
                Orientation::DecreasingInTheta,
            )
            .unwrap()
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let random_law = |rng: &mut ChaCha8Rng| -> Law {
        let baseline = match rng.random_range(0..3) {
            0 => Baseline::Exponential { rate: rng.random_range(0.5..3.0) },
            1 => Baseline::Weibull {
                shape: rng.random_range(0.8..2.5),
                scale: rng.random_range(0.5..2.0),
            },
            _ => Baseline::Gamma {
                shape: rng.random_range(0.8..3.0),
                rate: rng.random_range(0.5..2.0),
            },
        };
        Law { baseline }
    };
    // half the pairs are constructed within-family so the lr order holds by
    // design; the other half are arbitrary cross-family draws
    let mut pairs: Vec<(Law, Law)> = Vec::with_capacity(200);
    for i in 0..200 {
        if i % 2 == 0 {
            let pair = match rng.random_range(0..3) {
                0 => {
                    let hi = rng.random_range(1.0..3.0);
                    let lo = rng.random_range(0.3..1.0);
                    (
                        Law { baseline: Baseline::Exponential { rate: hi } },
                        Law { baseline: Baseline::Exponential { rate: lo } },
                    )
                }
                1 => {
                    let shape = rng.random_range(0.9..2.5);
                    let s1 = rng.random_range(0.5..1.2);
                    let s2 = s1 + rng.random_range(0.1..1.0);
                    (
                        Law { baseline: Baseline::Weibull { shape, scale: s1 } },
                        Law { baseline: Baseline::Weibull { shape, scale: s2 } },
                    )
                }
                _ => {
                    let a = rng.random_range(0.9..2.5);
                    let b = rng.random_range(0.8..2.0);
                    (
                        Law { baseline: Baseline::Gamma { shape: a, rate: b } },
                        Law { baseline: Baseline::Gamma { shape: a + rng.random_range(0.2..1.5), rate: b } },
                    )
                }
            };
            pairs.push(pair);
        } else {
            pairs.push((random_law(&mut rng), random_law(&mut rng)));
        }
    }
    let mut lr_certified = 0u32;
    for (idx, (law_x, law_y)) in pairs.iter().enumerate() {
        let mx = law_x.model();
        let my = law_y.model();
        // a window covering all but ~1e-9 of both laws' mass, so the grid
        // verdicts reflect global tail behaviour
        let x_hi = mx
            .inverse_survival(1e-9, 1.0)
            .unwrap()
            .max(my.inverse_survival(1e-9, 1.0).unwrap())
            .min(500.0);
        let grid = GridSpec { x_lo: 0.0, x_hi, n_points: 400, tol: 1e-9 };
        let lr = check_lr(
            |t| mx.density(t, 1.0).unwrap_or(f64::NAN),
            |t| my.density(t, 1.0).unwrap_or(f64::NAN),
            &grid,
        );
        if lr.holds != Certification::CertifiedOnGrid {
            continue;
        }
        lr_certified += 1;
        let hr = check_hr(
            |t| mx.survival(t, 1.0).unwrap_or(f64::NAN),
            |t| my.survival(t, 1.0).unwrap_or(f64::NAN),
            &grid,
        );
        let rhr = check_rhr(
            |t| mx.cdf(t, 1.0).unwrap_or(f64::NAN),
            |t| my.cdf(t, 1.0).unwrap_or(f64::NAN),
            &grid,
        );
        let st = check_st(
            |t| mx.survival(t, 1.0).unwrap_or(f64::NAN),
            |t| my.survival(t, 1.0).unwrap_or(f64::NAN),
            &grid,
        );
        for (name, verdict) in [("hr", &hr), ("rhr", &rhr), ("st", &st)] {
            assert_eq!(
                verdict.holds,
                Certification::CertifiedOnGrid,
                "pair {idx}: lr certified but {name} federated margin {:.3e}",
                verdict.worst_margin
            );
        }
    }
    assert!(lr_certified >= 60, "only {lr_certified} lr-certified pairs; chain barely exercised");
    pass(8, &format!("lr ⇒ hr, rhr, st with zero violations over {lr_certified} lr-certified pairs of 200"));
}

#[test]
fn criterion_09_bundled_corpus_soundness() {
    let mut positives = 0u32;
    let mut negatives = 0u32;
    for entry in std::fs::read_dir(scenarios_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("toml") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        if !text.contains("[verify]") {
            continue;
        }
        let expected: Vec<String> = text
            .lines()
            .find(|l| l.starts_with("expect_violated"))
            .map(|l| {
                l.split('[').nth(1).unwrap().trim_end_matches(']').split(',')
                    .map(|s| s.trim().trim_matches('"').to_string())
                    .collect()
            })
            .unwrap_or_default();
        let report = tmpfile("corpus_report.csv");
        let out = Command::new(bin())
            .args(["verify", path.to_str().unwrap(), "--out", report.to_str().unwrap()])
            .output()
            .unwrap();
        let code = out.status.code();
        assert_ne!(code, Some(3), "soundness alarm in {}", path.display());
        let rows = std::fs::read_to_string(&report).unwrap();
        assert!(
            !rows.contains(",ALARM,"),
            "soundness alarm row in {}",
            path.display()
        );
        if expected.is_empty() {
            assert_eq!(code, Some(0), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
            positives += 1;
        } else {
            assert_eq!(code, Some(2), "{}", path.display());
            for id in &expected {
                let hit = rows.lines().any(|l| {
                    let mut parts = l.splitn(3, ',');
                    let _rule = parts.next();
                    parts.next() == Some(id.as_str()) && l.contains(",violated,")
                });
                assert!(hit, "{}: expected violated {id} not reported", path.display());
            }
            negatives += 1;
        }
    }
    assert!(positives >= 12, "only {positives} positive scenarios");
    assert!(negatives >= 6, "only {negatives} negative controls");
    pass(9, &format!("{positives} positive scenarios and {negatives} negative controls, zero soundness alarms"));
}

#[test]
fn criterion_10_two_environment_rules_reduce_to_shared_environment() {
    fn exp_model(rate: f64, orientation: Orientation) -> ConditionalLifetimeModel {
        ConditionalLifetimeModel::new(
            Baseline::Exponential { rate },
            EnvironmentLink::MultiplicativeFrailty,
            orientation,
        )
        .unwrap()
    }
    fn system(
        structure: CoherentStructure,
        copula: SurvivalCopula,
        model: ConditionalLifetimeModel,
    ) -> sysrel_core::theorems::SystemModel {
        let n = structure.component_count();
        sysrel_core::theorems::SystemModel::new(
            DistortionFunction::build(structure, copula).unwrap(),
            vec![model; n],
        )
        .unwrap()
    }
    let env = Environment::discrete(vec![(1.0, 0.5), (2.0, 0.5)]).unwrap();
    let grid = GridSpec { x_lo: 0.0, x_hi: 1.5, n_points: 200, tol: 1e-9 };

    let gb = ComparisonScenario {
        system1: system(
            CoherentStructure::series(4).unwrap(),
            SurvivalCopula::gumbel_barnett(4, 0.2).unwrap(),
            exp_model(1.5, Orientation::DecreasingInTheta),
        ),
        system2: system(
            CoherentStructure::series(3).unwrap(),
            SurvivalCopula::gumbel_barnett(3, 0.2).unwrap(),
            exp_model(1.0, Orientation::IncreasingInTheta),
        ),
        env1: env.clone(),
        env2: env.clone(),
        grid,
        settings: Default::default(),
    };
    let fgm_pair = ComparisonScenario {
        system1: system(
            CoherentStructure::series(3).unwrap(),
            SurvivalCopula::fgm(3, 0.5).unwrap(),
            exp_model(5.0, Orientation::IncreasingInTheta),
        ),
        system2: system(
            CoherentStructure::from_paths(3, &[vec![1, 2], vec![1, 3]]).unwrap(),
            SurvivalCopula::fgm(3, 0.5).unwrap(),
            exp_model(1.0, Orientation::DecreasingInTheta),
        ),
        env1: env.clone(),
        env2: env.clone(),
        grid: GridSpec { x_lo: 0.0, x_hi: 3.0, n_points: 200, tol: 1e-9 },
        settings: Default::default(),
    };
    let parallel_pair = ComparisonScenario {
        system1: system(
            CoherentStructure::parallel(3).unwrap(),
            SurvivalCopula::independence(3).unwrap(),
            exp_model(5.0, Orientation::IncreasingInTheta),
        ),
        system2: system(
            CoherentStructure::parallel(4).unwrap(),
            SurvivalCopula::independence(4).unwrap(),
            exp_model(1.0, Orientation::DecreasingInTheta),
        ),
        env1: env.clone(),
        env2: env,
        grid: GridSpec { x_lo: 0.0, x_hi: 3.0, n_points: 200, tol: 1e-9 },
        settings: Default::default(),
    };

    // (two-env rule, shared-env rule, scenario, pairs of condition indices)
    type ReductionCase<'a> = (RuleId, RuleId, &'a ComparisonScenario, Vec<(usize, usize)>);
    let cases: Vec<ReductionCase> = vec![
        (RuleId::DiffEnvSt, RuleId::SameEnvSt, &fgm_pair, vec![(0, 0), (3, 1)]),
        (RuleId::DiffEnvHr, RuleId::SameEnvHr, &gb, vec![(0, 0), (1, 1), (2, 2), (3, 3)]),
        (RuleId::DiffEnvRhr, RuleId::SameEnvRhr, &parallel_pair, vec![(0, 0), (1, 1), (2, 2), (3, 3)]),
        (RuleId::DiffEnvIidSt, RuleId::SameEnvIidSt, &fgm_pair, vec![(0, 0), (3, 1)]),
        (RuleId::DiffEnvIidHr, RuleId::SameEnvIidHr, &fgm_pair, vec![(0, 0), (1, 1), (2, 2), (3, 3)]),
        (RuleId::DiffEnvIidRhr, RuleId::SameEnvIidRhr, &fgm_pair, vec![(0, 0), (1, 1), (2, 2), (3, 3)]),
    ];
    for (diff_rule, same_rule, sc, index_pairs) in cases {
        let diff = verify(sc, diff_rule).unwrap();
        let same = verify(sc, same_rule).unwrap();
        for (di, si) in index_pairs {
            assert_eq!(
                diff.conditions[di].verdict, same.conditions[si].verdict,
                "{diff_rule} C{} vs {same_rule} C{}",
                di + 1,
                si + 1
            );
            let a = diff.conditions[di].worst_margin;
            let b = same.conditions[si].worst_margin;
            assert!(
                (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0),
                "{diff_rule} margin drift {} vs {}",
                a,
                b
            );
        }
        // the extra environment-order premise certifies trivially at equality
        let env_cond = diff.conditions.last().unwrap();
        assert_eq!(env_cond.verdict, Certification::CertifiedOnGrid, "{diff_rule} env premise");
    }
    pass(10, "all six two-environment rules reproduce their shared-environment premise verdicts at env1 = env2");
}
