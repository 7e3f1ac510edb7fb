//! Run configuration: strict JSON parsing, resolution of the model, pore set,
//! material and functional, and the resolved echo written with every run.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use porode::estimator::EstimateOptions;
use porode::fem::Functional;
use porode::geometry::{parse_pore_set, pore_set_to_json, read_pore_set, Pore};
use porode::mesh::io::read_mesh2d;
use porode::mesh::VolumeMesh;
use porode::verify::{find_benchmark, models};
use porode::{MaterialModel, PointLoad, PorodeError, ReferenceModel, Result};

/// Only accepted value of the `version` field.
pub const CONFIG_VERSION: u32 = 1;

/// Built-in geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// Cantilever beam with the four-pore cluster.
    Beam,
    /// Bracket with six pores.
    Bracket,
}

impl Builtin {
    fn reference(self) -> Result<ReferenceModel> {
        match self {
            Builtin::Beam => models::beam_reference(),
            Builtin::Bracket => models::bracket_reference(),
        }
    }

    fn functional(self) -> Functional {
        match self {
            Builtin::Beam => models::beam_functional(),
            Builtin::Bracket => models::bracket_functional(),
        }
    }

    /// Estimator options of the matching built-in benchmark (all pore
    /// pairs for the clustered beam layout).
    fn options(self) -> EstimateOptions {
        let name = match self {
            Builtin::Beam => "four_pore",
            Builtin::Bracket => "bracket_six",
        };
        find_benchmark(name).map(|b| b.options).unwrap_or_default()
    }

    fn pores(self) -> Result<Vec<Pore>> {
        match self {
            Builtin::Beam => Ok(models::four_pore_beam()?.pores().to_vec()),
            Builtin::Bracket => models::bracket_six_pores(),
        }
    }
}

/// Where the reference model comes from. Exactly one of `builtin`, `file`
/// and `mesh` must be given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    /// Built-in geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<Builtin>,
    /// Reference-model JSON file (domain, supports, loads).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    /// `mesh2d v1` file carrying supports and edge loads.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<PathBuf>,
    /// Concentrated forces applied on a mesh model.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub point_loads: Vec<PointLoad>,
}

/// Material parameters; omitted values default to the benchmark material
/// and to the model's own thickness.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    /// Young's modulus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub youngs_modulus: Option<f64>,
    /// Poisson ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poissons_ratio: Option<f64>,
    /// Out-of-plane thickness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<f64>,
}

/// Log levels accepted by `verbosity`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verbosity {
    /// Errors only.
    Error,
    /// Errors and warnings.
    #[default]
    Warn,
    /// Progress messages.
    Info,
    /// Diagnostics.
    Debug,
    /// Everything.
    Trace,
}

impl Verbosity {
    /// `env_logger` filter string.
    pub fn filter(self) -> &'static str {
        match self {
            Verbosity::Error => "error",
            Verbosity::Warn => "warn",
            Verbosity::Info => "info",
            Verbosity::Debug => "debug",
            Verbosity::Trace => "trace",
        }
    }
}

/// Contents of a run-configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Format version; must equal [`CONFIG_VERSION`].
    pub version: u32,
    /// Reference model.
    #[serde(default)]
    pub model: ModelConfig,
    /// Pore set: a path to a pore-set JSON file or an inline array of pore
    /// records. Omitted: the built-in geometry's pores, or none.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pores: Option<serde_json::Value>,
    /// Material.
    #[serde(default)]
    pub material: MaterialConfig,
    /// Quantity of interest; omitted: the built-in geometry's functional.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functional: Option<Functional>,
    /// Estimator options (mesh sizes, pairing policy, ξ fraction, …).
    #[serde(default)]
    pub estimator: EstimateOptions,
    /// Parent of the per-run output directories.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Log level when `PORODE_LOG` is not set.
    #[serde(default)]
    pub verbosity: Verbosity,
}

impl RunConfig {
    /// Configuration of a built-in geometry with its benchmark's estimator
    /// options.
    pub fn seed(builtin: Builtin) -> Self {
        RunConfig {
            version: CONFIG_VERSION,
            model: ModelConfig {
                builtin: Some(builtin),
                ..ModelConfig::default()
            },
            pores: None,
            material: MaterialConfig::default(),
            functional: None,
            estimator: builtin.options(),
            output_dir: None,
            verbosity: Verbosity::default(),
        }
    }

    /// Strict parse: unknown keys anywhere are rejected with their path.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let location = if path == "." { String::new() } else { format!(" at '{path}'") };
            PorodeError::Parse {
                source_name: source.to_string(),
                line: inner.line(),
                message: format!("{inner}{location}"),
            }
        })?;
        if config.version != CONFIG_VERSION {
            return Err(PorodeError::validation(format!(
                "{source}: unsupported config version {} (expected {CONFIG_VERSION})",
                config.version
            )));
        }
        Ok(config)
    }

    /// Reads and parses a configuration file.
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PorodeError::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Applies `--seed-geometry`: fills in the model when the configuration
    /// does not name one, and rejects a conflicting one.
    pub fn with_seed(mut self, seed: Builtin) -> Result<Self> {
        let m = &self.model;
        if m.builtin.is_none() && m.file.is_none() && m.mesh.is_none() {
            self.model.builtin = Some(seed);
            Ok(self)
        } else if m.builtin == Some(seed) {
            Ok(self)
        } else {
            Err(PorodeError::validation(
                "--seed-geometry conflicts with the model given in the configuration",
            ))
        }
    }

    /// Resolves relative paths against `base` (the configuration file's
    /// directory).
    pub fn rebase(mut self, base: &Path) -> Self {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = self.model.file.as_mut() {
            fix(p);
        }
        if let Some(p) = self.model.mesh.as_mut() {
            fix(p);
        }
        if let Some(serde_json::Value::String(s)) = self.pores.as_mut() {
            let mut p = PathBuf::from(&*s);
            fix(&mut p);
            *s = p.display().to_string();
        }
        if let Some(p) = self.output_dir.as_mut() {
            fix(p);
        }
        self
    }
}

/// Reference model of a resolved run.
#[derive(Debug, Clone)]
pub enum ResolvedModel {
    /// Geometric model: the reference mesh is generated.
    Geometric(ReferenceModel),
    /// Prescribed mesh with its boundary conditions and extra point loads.
    Mesh {
        /// The mesh.
        mesh: Box<VolumeMesh>,
        /// Concentrated forces.
        point_loads: Vec<PointLoad>,
    },
}

/// Fully resolved run inputs.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    /// Reference model.
    pub model: ResolvedModel,
    /// Pores.
    pub pores: Vec<Pore>,
    /// Material.
    pub material: MaterialModel,
    /// Functional.
    pub functional: Functional,
    /// Estimator options.
    pub options: EstimateOptions,
}

fn io_error(path: &Path, e: std::io::Error) -> PorodeError {
    PorodeError::Io {
        path: path.display().to_string(),
        source: e,
    }
}

impl ResolvedRun {
    /// Loads every referenced file and checks all values.
    pub fn resolve(config: &RunConfig) -> Result<Self> {
        let m = &config.model;
        let given = [m.builtin.is_some(), m.file.is_some(), m.mesh.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(PorodeError::validation(
                "model: exactly one of 'builtin', 'file' and 'mesh' must be given (or use --seed-geometry)",
            ));
        }
        if !m.point_loads.is_empty() && m.mesh.is_none() {
            return Err(PorodeError::validation(
                "model.point_loads is only accepted with a mesh model; geometric models carry their own loads",
            ));
        }
        let thickness = config.material.thickness;
        if let Some(t) = thickness {
            if !(t.is_finite() && t > 0.0) {
                return Err(PorodeError::validation(format!("material.thickness must be positive, got {t}")));
            }
        }
        let model = if let Some(b) = m.builtin {
            ResolvedModel::Geometric(b.reference()?)
        } else if let Some(path) = &m.file {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            let reference: ReferenceModel = serde_path_to_error::deserialize(de).map_err(|e| {
                let at = e.path().to_string();
                PorodeError::Parse {
                    source_name: path.display().to_string(),
                    line: e.inner().line(),
                    message: format!("{} at '{at}'", e.into_inner()),
                }
            })?;
            reference.validate()?;
            ResolvedModel::Geometric(reference)
        } else {
            let path = m.mesh.as_ref().expect("one model source is present");
            ResolvedModel::Mesh {
                mesh: Box::new(read_mesh2d(path)?),
                point_loads: m.point_loads.clone(),
            }
        };
        let model = match (model, thickness) {
            (ResolvedModel::Geometric(mut r), Some(t)) => {
                r.domain = r.domain.with_thickness(t)?;
                ResolvedModel::Geometric(r)
            }
            (ResolvedModel::Mesh { mesh, point_loads }, Some(t)) => ResolvedModel::Mesh {
                mesh: Box::new(mesh.with_thickness(t)?),
                point_loads,
            },
            (model, None) => model,
        };
        let pores = match &config.pores {
            None => match m.builtin {
                Some(b) => b.pores()?,
                None => Vec::new(),
            },
            Some(serde_json::Value::String(path)) => read_pore_set(path).map_err(|e| match e {
                PorodeError::Json(inner) => PorodeError::Parse {
                    source_name: path.clone(),
                    line: inner.line(),
                    message: inner.to_string(),
                },
                other => other,
            })?,
            Some(v @ serde_json::Value::Array(_)) => parse_pore_set(&v.to_string()).map_err(|e| match e {
                PorodeError::Json(inner) => PorodeError::validation(format!("pores: {inner}")),
                other => other,
            })?,
            Some(_) => {
                return Err(PorodeError::validation(
                    "pores: expected a pore-set file path or an array of pore records",
                ))
            }
        };
        let base = models::benchmark_material();
        let material = MaterialModel::new(
            config.material.youngs_modulus.unwrap_or(base.youngs_modulus),
            config.material.poissons_ratio.unwrap_or(base.poissons_ratio),
        )?;
        let functional = match (&config.functional, m.builtin) {
            (Some(f), _) => f.clone(),
            (None, Some(b)) => b.functional(),
            (None, None) => {
                return Err(PorodeError::validation(
                    "functional: required when the model is not a built-in geometry",
                ))
            }
        };
        functional.validate()?;
        config.estimator.validate()?;
        Ok(ResolvedRun {
            model,
            pores,
            material,
            functional,
            options: config.estimator,
        })
    }
}

/// Resolved configuration echoed into every run directory: the parsed
/// configuration with defaults filled in, plus the resolved pore set and
/// functional.
pub fn echo(config: &RunConfig, run: &ResolvedRun) -> Result<String> {
    let mut v = serde_json::to_value(config)?;
    let pores: serde_json::Value = serde_json::from_str(&pore_set_to_json(&run.pores)?)?;
    v["pores"] = pores;
    v["functional"] = serde_json::to_value(&run.functional)?;
    v["material"] = serde_json::json!({
        "youngs_modulus": run.material.youngs_modulus,
        "poissons_ratio": run.material.poissons_ratio,
        "thickness": match &run.model {
            ResolvedModel::Geometric(r) => r.domain.thickness(),
            ResolvedModel::Mesh { mesh, .. } => mesh.thickness(),
        },
    });
    Ok(serde_json::to_string_pretty(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let c = RunConfig::parse(r#"{"version": 1, "model": {"builtin": "beam"}}"#, "t").unwrap();
        assert_eq!(c.model.builtin, Some(Builtin::Beam));
        assert_eq!(c.estimator, EstimateOptions::default());
        let run = ResolvedRun::resolve(&c).unwrap();
        assert_eq!(run.pores.len(), 4);
    }

    #[test]
    fn unknown_keys_are_named_with_their_path() {
        let e = RunConfig::parse(r#"{"version": 1, "modle": {}}"#, "t").unwrap_err();
        assert!(e.to_string().contains("modle"), "{e}");
        let e = RunConfig::parse(
            r#"{"version": 1, "estimator": {"topo": {"xi_fractoin": 0.1}}}"#,
            "t",
        )
        .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("xi_fractoin") && msg.contains("estimator.topo"), "{msg}");
        assert!(e.is_validation());
    }

    #[test]
    fn version_is_required_and_checked() {
        assert!(RunConfig::parse(r#"{"model": {"builtin": "beam"}}"#, "t").is_err());
        let e = RunConfig::parse(r#"{"version": 2}"#, "t").unwrap_err();
        assert!(e.to_string().contains("version"), "{e}");
    }

    #[test]
    fn model_source_must_be_unique() {
        let c = RunConfig::parse(r#"{"version": 1, "model": {"builtin": "beam", "mesh": "x"}}"#, "t").unwrap();
        assert!(ResolvedRun::resolve(&c).is_err());
        let c = RunConfig::parse(r#"{"version": 1}"#, "t").unwrap();
        assert!(ResolvedRun::resolve(&c).is_err());
        assert!(c.clone().with_seed(Builtin::Bracket).is_ok());
        let c = RunConfig::seed(Builtin::Beam);
        assert!(c.with_seed(Builtin::Bracket).is_err());
    }

    #[test]
    fn inline_pores_and_overrides_resolve() {
        let c = RunConfig::parse(
            r#"{"version": 1, "model": {"builtin": "beam"},
                "pores": [{"id": 3, "centroid": [100, 50], "boundary": [[99, 49], [99, 51], [101, 51], [101, 49]]}],
                "material": {"youngs_modulus": 1000, "thickness": 2},
                "estimator": {"pair_mode": "unordered", "topo": {"xi_fraction": 0.05}}}"#,
            "t",
        )
        .unwrap();
        let run = ResolvedRun::resolve(&c).unwrap();
        assert_eq!(run.pores.len(), 1);
        assert_eq!(run.pores[0].id(), 3);
        assert_eq!(run.material.youngs_modulus, 1000.0);
        match &run.model {
            ResolvedModel::Geometric(r) => assert_eq!(r.domain.thickness(), 2.0),
            _ => unreachable!(),
        }
        let echoed: serde_json::Value = serde_json::from_str(&echo(&c, &run).unwrap()).unwrap();
        assert_eq!(echoed["material"]["poissons_ratio"], 0.35);
        assert_eq!(echoed["estimator"]["topo"]["xi_fraction"], 0.05);
    }

    #[test]
    fn inline_pore_with_unknown_key_is_rejected() {
        let c = RunConfig::parse(
            r#"{"version": 1, "model": {"builtin": "beam"},
                "pores": [{"id": 3, "center": [100, 50], "boundary": []}]}"#,
            "t",
        )
        .unwrap();
        let e = ResolvedRun::resolve(&c).unwrap_err();
        assert!(e.to_string().contains("center"), "{e}");
    }
}
