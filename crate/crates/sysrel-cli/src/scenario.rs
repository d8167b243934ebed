//! Declarative scenario files (TOML): systems, environments, grids, the rule
//! list to verify, and an optional simulation plan.

use serde::{Deserialize, Serialize};

use sysrel_core::copulas::SurvivalCopula;
use sysrel_core::distortions::DistortionFunction;
use sysrel_core::lifetimes::{Baseline, ConditionalLifetimeModel, EnvironmentLink, Orientation};
use sysrel_core::mixtures::{EnvFamily, Environment, MixedSystemLifetime};
use sysrel_core::orders::GridSpec;
use sysrel_core::theorems::{ComparisonScenario, SystemModel, VerifySettings};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meta: Option<MetaSection>,
    pub grids: GridsSection,
    pub system1: SystemSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub system2: Option<SystemSection>,
    pub environment: EnvSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub environment2: Option<EnvSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MetaSection {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridsSection {
    pub x_lo: f64,
    pub x_hi: f64,
    pub n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kofn: Option<KofnSpec>,
    pub copula: CopulaSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginal: Option<MarginalSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marginals: Option<Vec<MarginalSpec>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct KofnSpec {
    pub k: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CopulaSpec {
    pub family: String,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub param: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MarginalSpec {
    pub baseline: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    pub link: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EnvSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub theorems: Vec<String>,
    /// Intended violated condition ids, present only in negative controls.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expect_violated: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub n: usize,
    pub seed: u64,
    pub x_grid: Vec<f64>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<ScenarioFile, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn grid(&self) -> Result<GridSpec, CliError> {
        GridSpec::new(
            self.grids.x_lo,
            self.grids.x_hi,
            self.grids.n_points,
            self.grids.tol.unwrap_or(1e-9),
        )
        .map_err(|e| CliError::Schema(format!("grids: {e}")))
    }

    pub fn settings(&self) -> VerifySettings {
        let mut s = VerifySettings::default();
        if let Some(pairs) = self.grids.theta_pairs {
            s.theta_pair_cap = pairs;
        }
        if let Some(points) = self.grids.points {
            s.point_count = points;
        }
        s
    }

    pub fn system1(&self) -> Result<SystemModel, CliError> {
        build_system(&self.system1, "system1")
    }

    pub fn system2(&self) -> Result<SystemModel, CliError> {
        let section = self
            .system2
            .as_ref()
            .ok_or_else(|| CliError::Schema("missing [system2] section".into()))?;
        build_system(section, "system2")
    }

    pub fn env1(&self) -> Result<Environment, CliError> {
        build_environment(&self.environment, "environment")
    }

    pub fn env2(&self) -> Result<Environment, CliError> {
        match &self.environment2 {
            Some(section) => build_environment(section, "environment2"),
            None => self.env1(),
        }
    }

    /// The full comparison scenario (both systems and environments).
    pub fn comparison(&self) -> Result<ComparisonScenario, CliError> {
        Ok(ComparisonScenario {
            system1: self.system1()?,
            system2: self.system2()?,
            env1: self.env1()?,
            env2: self.env2()?,
            grid: self.grid()?,
            settings: self.settings(),
        })
    }

    /// System 1 under its environment, as a mixture lifetime.
    pub fn mixture1(&self) -> Result<MixedSystemLifetime, CliError> {
        let system = self.system1()?;
        MixedSystemLifetime::new(
            system.distortion().clone(),
            system.marginals().to_vec(),
            self.env1()?,
        )
        .map_err(|e| CliError::Schema(e.to_string()))
    }
}

fn build_system(section: &SystemSection, label: &str) -> Result<SystemModel, CliError> {
    let structure = match (&section.paths, &section.kofn) {
        (Some(paths), None) => {
            let n = section.copula.dim;
            sysrel_core::structures::CoherentStructure::from_paths(n, paths)
                .map_err(|e| CliError::Schema(format!("{label}.paths: {e}")))?
        }
        (None, Some(kofn)) => sysrel_core::structures::CoherentStructure::k_out_of_n(kofn.k, kofn.n)
            .map_err(|e| CliError::Schema(format!("{label}.kofn: {e}")))?,
        _ => {
            return Err(CliError::Schema(format!(
                "{label}: declare exactly one of `paths` or `kofn`"
            )))
        }
    };
    let copula = build_copula(&section.copula, label)?;
    let n = structure.component_count();
    let marginals: Vec<ConditionalLifetimeModel> = match (&section.marginal, &section.marginals) {
        (Some(shared), None) => vec![build_marginal(shared, label)?; n],
        (None, Some(list)) => {
            if list.len() != n {
                return Err(CliError::Schema(format!(
                    "{label}: {} marginals for {n} components",
                    list.len()
                )));
            }
            list.iter().map(|m| build_marginal(m, label)).collect::<Result<_, _>>()?
        }
        _ => {
            return Err(CliError::Schema(format!(
                "{label}: declare exactly one of `marginal` or `marginals`"
            )))
        }
    };
    let distortion = DistortionFunction::build(structure, copula)
        .map_err(|e| CliError::Schema(format!("{label}: {e}")))?;
    SystemModel::new(distortion, marginals).map_err(|e| CliError::Schema(format!("{label}: {e}")))
}

fn build_copula(spec: &CopulaSpec, label: &str) -> Result<SurvivalCopula, CliError> {
    let need_param = |what: &str| {
        spec.param.ok_or_else(|| {
            CliError::Schema(format!("{label}.copula: family {what} needs `param`"))
        })
    };
    let result = match spec.family.as_str() {
        "independence" => SurvivalCopula::independence(spec.dim),
        "fgm" => SurvivalCopula::fgm(spec.dim, need_param("fgm")?),
        "gumbel-barnett" => SurvivalCopula::gumbel_barnett(spec.dim, need_param("gumbel-barnett")?),
        "clayton-oakes" => SurvivalCopula::clayton_oakes(spec.dim, need_param("clayton-oakes")?),
        other => {
            return Err(CliError::Schema(format!("{label}.copula: unknown family {other:?}")))
        }
    };
    result.map_err(|e| CliError::Schema(format!("{label}.copula: {e}")))
}

fn build_marginal(spec: &MarginalSpec, label: &str) -> Result<ConditionalLifetimeModel, CliError> {
    let get = |field: Option<f64>, name: &str| {
        field.ok_or_else(|| {
            CliError::Schema(format!(
                "{label}.marginal: baseline {:?} needs `{name}`",
                spec.baseline
            ))
        })
    };
    let baseline = match spec.baseline.as_str() {
        "exponential" => Baseline::Exponential { rate: get(spec.rate, "rate")? },
        "weibull" => {
            Baseline::Weibull { shape: get(spec.shape, "shape")?, scale: get(spec.scale, "scale")? }
        }
        "gamma" => Baseline::Gamma { shape: get(spec.shape, "shape")?, rate: get(spec.rate, "rate")? },
        other => {
            return Err(CliError::Schema(format!("{label}.marginal: unknown baseline {other:?}")))
        }
    };
    let link = match spec.link.as_str() {
        "none" => EnvironmentLink::None,
        "scale" => EnvironmentLink::Scale,
        "mult-frailty" => EnvironmentLink::MultiplicativeFrailty,
        "add-frailty" => EnvironmentLink::AdditiveFrailty,
        other => return Err(CliError::Schema(format!("{label}.marginal: unknown link {other:?}"))),
    };
    let orientation = match spec.orientation.as_deref() {
        None | Some("decreasing") => Orientation::DecreasingInTheta,
        Some("increasing") => Orientation::IncreasingInTheta,
        Some(other) => {
            return Err(CliError::Schema(format!(
                "{label}.marginal: unknown orientation {other:?}"
            )))
        }
    };
    ConditionalLifetimeModel::new(baseline, link, orientation)
        .map_err(|e| CliError::Schema(format!("{label}.marginal: {e}")))
}

fn build_environment(section: &EnvSection, label: &str) -> Result<Environment, CliError> {
    let sources = [
        section.atoms.is_some(),
        section.degenerate.is_some(),
        section.family.is_some(),
    ];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(CliError::Schema(format!(
            "{label}: declare exactly one of `atoms`, `degenerate`, or `family`"
        )));
    }
    if let Some(atoms) = &section.atoms {
        let pairs: Vec<(f64, f64)> = atoms.iter().map(|&[t, w]| (t, w)).collect();
        return Environment::discrete(pairs).map_err(|e| CliError::Schema(format!("{label}: {e}")));
    }
    if let Some(theta) = section.degenerate {
        return Environment::degenerate(theta)
            .map_err(|e| CliError::Schema(format!("{label}: {e}")));
    }
    let family = section.family.as_deref().expect("checked above");
    let need = |field: Option<f64>, name: &str| {
        field.ok_or_else(|| {
            CliError::Schema(format!("{label}: family {family:?} needs `{name}`"))
        })
    };
    let env_family = match family {
        "gamma" => EnvFamily::Gamma { shape: need(section.a, "a")?, rate: need(section.b, "b")? },
        "uniform" => EnvFamily::Uniform { lo: need(section.lo, "lo")?, hi: need(section.hi, "hi")? },
        "beta" => EnvFamily::Beta {
            a: need(section.a, "a")?,
            b: need(section.b, "b")?,
            lo: need(section.lo, "lo")?,
            hi: need(section.hi, "hi")?,
        },
        other => return Err(CliError::Schema(format!("{label}: unknown family {other:?}"))),
    };
    Environment::continuous(
        env_family,
        section.nodes.unwrap_or(sysrel_core::mixtures::DEFAULT_NODES),
        section.trunc.unwrap_or(sysrel_core::mixtures::DEFAULT_TRUNCATION),
    )
    .map_err(|e| CliError::Schema(format!("{label}: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
[meta]
name = "example"

[grids]
x_lo = 0.0
x_hi = 3.0
n_points = 200

[system1]
kofn = { k = 3, n = 3 }
copula = { family = "fgm", dim = 3, param = 0.5 }
marginal = { baseline = "exponential", rate = 5.0, link = "mult-frailty", orientation = "increasing" }

[system2]
paths = [[1, 2], [1, 3]]
copula = { family = "fgm", dim = 3, param = 0.5 }
marginal = { baseline = "exponential", rate = 1.0, link = "mult-frailty" }

[environment]
atoms = [[1.0, 0.5], [2.0, 0.5]]

[verify]
theorems = ["3.5"]

[simulate]
n = 200000
seed = 42
x_grid = [0.25, 0.5, 1.0]
"#;

    #[test]
    fn parses_and_builds() {
        let sf = ScenarioFile::parse(EXAMPLE).unwrap();
        let sc = sf.comparison().unwrap();
        assert_eq!(sc.system1.dimension(), 3);
        assert_eq!(sc.system2.dimension(), 3);
        assert_eq!(sc.env1, sc.env2);
        assert!(sf.simulate.is_some());
    }

    #[test]
    fn serialization_round_trips() {
        let sf = ScenarioFile::parse(EXAMPLE).unwrap();
        let text = toml::to_string(&sf).unwrap();
        let back = ScenarioFile::parse(&text).unwrap();
        assert_eq!(back, sf);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = EXAMPLE.replace("x_lo = 0.0", "x_lo = 0.0\nbogus = 1");
        assert!(matches!(ScenarioFile::parse(&bad), Err(CliError::Parse(_))));
    }

    #[test]
    fn schema_errors_are_specific() {
        let text = EXAMPLE.replace("family = \"fgm\", dim = 3, param = 0.5", "family = \"fgm\", dim = 3");
        let sf = ScenarioFile::parse(&text).unwrap();
        let err = sf.comparison().unwrap_err();
        assert!(matches!(err, CliError::Schema(ref m) if m.contains("param")), "{err:?}");
    }

    #[test]
    fn environment_variants() {
        let gamma = r#"
[grids]
x_lo = 0.0
x_hi = 1.0
n_points = 32

[system1]
kofn = { k = 1, n = 2 }
copula = { family = "independence", dim = 2 }
marginal = { baseline = "exponential", rate = 1.0, link = "mult-frailty" }

[environment]
family = "gamma"
a = 2.0
b = 1.0
nodes = 64
"#;
        let sf = ScenarioFile::parse(gamma).unwrap();
        assert!(matches!(sf.env1().unwrap(), Environment::Continuous { .. }));
        let degenerate = gamma.replace("family = \"gamma\"\na = 2.0\nb = 1.0\nnodes = 64", "degenerate = 1.5");
        let sf = ScenarioFile::parse(&degenerate).unwrap();
        assert_eq!(sf.env1().unwrap().is_degenerate(), Some(1.5));
    }
}
