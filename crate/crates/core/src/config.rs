//! Config file format.
//!
//! A config is a TOML document:
//!
//! ```toml
//! dimension = 3
//! method = "et"              # or "iet"
//! # `{}` is an absent interaction
//! pairs = [
//!     [{ amplitude = 1.0, exponent = 2.0 }, { amplitude = 10.0, exponent = 2.0 }],
//!     [{ amplitude = 10.0, exponent = 2.0 }, {}],
//! ]
//!
//! [state]
//! mode = "ground"            # or "explicit", with `quanta`
//! phi = "auto"               # "genuine", "auto" or a number; optional
//!
//! [[sets]]
//! count = 2
//! statistics = "boson"       # or "fermion", with `degeneracy`
//! kinetic = { form = "ultrarelativistic" }
//!
//! [[sets]]
//! count = 1
//! statistics = "boson"
//! kinetic = { form = "nonrelativistic", mass = 5.0 }
//! one_body = { amplitude = 1.0, exponent = 2.0 }
//!
//! [solver]
//! tol = 1e-10
//! strategy = "auto"
//! ```
//!
//! Without `state.phi`, `method = "et"` uses the genuine quantum number and
//! `method = "iet"` the automatic `φ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::etsolver::SolverConfig;
use crate::model::{
    validate, Dimension, KineticForm, OscillatorQuanta, ParticleSet, Phi, PotentialForm,
    QuantumMode, QuantumSpec, Statistics, SystemSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Et,
    Iet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticsName {
    Boson,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KineticName {
    Nonrelativistic,
    Ultrarelativistic,
    Relativistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KineticConfig {
    pub form: KineticName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
}

/// A power law `amplitude·x^exponent`; both keys missing means no potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
}

impl TermConfig {
    fn is_absent(&self) -> bool {
        self.amplitude.is_none() && self.exponent.is_none()
    }

    fn to_potential(self, what: &str) -> Result<PotentialForm> {
        match (self.amplitude, self.exponent) {
            (None, None) => Ok(PotentialForm::Absent),
            (Some(a), Some(b)) => Ok(PotentialForm::power_law(a, b)),
            _ => Err(Error::Config(format!("{what}: give both `amplitude` and `exponent`, or neither"))),
        }
    }
}

impl From<PotentialForm> for TermConfig {
    fn from(p: PotentialForm) -> Self {
        match p {
            PotentialForm::Absent => TermConfig::default(),
            PotentialForm::PowerLaw {
                amplitude,
                exponent,
            } => TermConfig {
                amplitude: Some(amplitude),
                exponent: Some(exponent),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetConfig {
    pub count: usize,
    pub statistics: StatisticsName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<u32>,
    pub kinetic: KineticConfig,
    #[serde(default, skip_serializing_if = "TermConfig::is_absent")]
    pub one_body: TermConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    #[default]
    Ground,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiName {
    Auto,
    Genuine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhiConfig {
    Named(PhiName),
    Value(f64),
}

impl From<PhiConfig> for Phi {
    fn from(p: PhiConfig) -> Phi {
        match p {
            PhiConfig::Named(PhiName::Auto) => Phi::Auto,
            PhiConfig::Named(PhiName::Genuine) => Phi::Genuine,
            PhiConfig::Value(v) => Phi::Value(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct StateConfig {
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quanta: Option<Vec<OscillatorQuanta>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<PhiConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub dimension: u32,
    #[serde(default)]
    pub method: Method,
    pub pairs: Vec<Vec<TermConfig>>,
    #[serde(default)]
    pub state: StateConfig,
    pub sets: Vec<SetConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
}

/// Everything a solve needs, checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub spec: SystemSpec,
    pub state: QuantumSpec,
    pub solver: SolverConfig,
    pub method: Method,
}

pub fn parse(text: &str) -> Result<Config> {
    toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
}

pub fn to_toml(config: &Config) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Config(e.to_string()))
}

impl Config {
    /// Builds a config describing `spec` in state `state`.
    pub fn from_system(spec: &SystemSpec, state: &QuantumSpec, method: Method, solver: SolverConfig) -> Self {
        let sets = spec
            .sets
            .iter()
            .map(|set| {
                let (statistics, degeneracy) = match set.statistics {
                    Statistics::Boson => (StatisticsName::Boson, None),
                    Statistics::Fermion { degeneracy } => (StatisticsName::Fermion, Some(degeneracy)),
                };
                let kinetic = match set.kinetic {
                    KineticForm::NonRelativistic { mass } => KineticConfig {
                        form: KineticName::Nonrelativistic,
                        mass: Some(mass),
                    },
                    KineticForm::Ultrarelativistic => KineticConfig {
                        form: KineticName::Ultrarelativistic,
                        mass: None,
                    },
                    KineticForm::Relativistic { mass } => KineticConfig {
                        form: KineticName::Relativistic,
                        mass: Some(mass),
                    },
                };
                SetConfig {
                    count: set.count,
                    statistics,
                    degeneracy,
                    kinetic,
                    one_body: set.one_body.into(),
                }
            })
            .collect();
        let (mode, quanta) = match &state.mode {
            QuantumMode::GroundState => (ModeName::Ground, None),
            QuantumMode::Explicit(q) => (ModeName::Explicit, Some(q.clone())),
        };
        let phi = match (method, state.phi) {
            (Method::Et, Phi::Genuine) | (Method::Iet, Phi::Auto) => None,
            (_, Phi::Genuine) => Some(PhiConfig::Named(PhiName::Genuine)),
            (_, Phi::Auto) => Some(PhiConfig::Named(PhiName::Auto)),
            (_, Phi::Value(v)) => Some(PhiConfig::Value(v)),
        };
        Config {
            dimension: spec.dimension.get(),
            method,
            pairs: spec
                .pairs
                .iter()
                .map(|row| row.iter().map(|&p| p.into()).collect())
                .collect(),
            state: StateConfig { mode, quanta, phi },
            sets,
            solver,
        }
    }

    pub fn phi(&self) -> Phi {
        match (self.state.phi, self.method) {
            (Some(p), _) => p.into(),
            (None, Method::Et) => Phi::Genuine,
            (None, Method::Iet) => Phi::Auto,
        }
    }

    pub fn system(&self) -> Result<SystemSpec> {
        let dimension = Dimension::new(self.dimension)?;
        let mut sets = Vec::with_capacity(self.sets.len());
        for (a, s) in self.sets.iter().enumerate() {
            let statistics = match (s.statistics, s.degeneracy) {
                (StatisticsName::Boson, None) => Statistics::Boson,
                (StatisticsName::Boson, Some(_)) => {
                    return Err(Error::Config(format!("sets[{a}]: `degeneracy` is only for fermions")))
                }
                (StatisticsName::Fermion, d) => Statistics::Fermion {
                    degeneracy: d.unwrap_or(2),
                },
            };
            let kinetic = match (s.kinetic.form, s.kinetic.mass) {
                (KineticName::Nonrelativistic, Some(mass)) => KineticForm::NonRelativistic { mass },
                (KineticName::Relativistic, Some(mass)) => KineticForm::Relativistic { mass },
                (KineticName::Ultrarelativistic, None) => KineticForm::Ultrarelativistic,
                (KineticName::Ultrarelativistic, Some(_)) => {
                    return Err(Error::Config(format!("sets[{a}]: ultrarelativistic kinematics takes no mass")))
                }
                (_, None) => return Err(Error::Config(format!("sets[{a}]: `kinetic.mass` is required"))),
            };
            sets.push(ParticleSet {
                count: s.count,
                statistics,
                kinetic,
                one_body: s.one_body.to_potential(&format!("sets[{a}].one_body"))?,
            });
        }
        let mut pairs = Vec::with_capacity(self.pairs.len());
        for (a, row) in self.pairs.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (b, term) in row.iter().enumerate() {
                out.push(term.to_potential(&format!("pairs[{a}][{b}]"))?);
            }
            pairs.push(out);
        }
        Ok(SystemSpec {
            dimension,
            sets,
            pairs,
        })
    }

    pub fn quantum(&self) -> Result<QuantumSpec> {
        let mode = match (self.state.mode, &self.state.quanta) {
            (ModeName::Ground, None) => QuantumMode::GroundState,
            (ModeName::Ground, Some(_)) => {
                return Err(Error::Config("state.quanta needs state.mode = \"explicit\"".into()))
            }
            (ModeName::Explicit, Some(q)) => QuantumMode::Explicit(q.clone()),
            (ModeName::Explicit, None) => {
                return Err(Error::Config("state.mode = \"explicit\" needs state.quanta".into()))
            }
        };
        Ok(QuantumSpec {
            mode,
            phi: self.phi(),
        })
    }

    /// Converts and validates. Invariant violations come back as
    /// [`Error::InvalidSpec`] with every diagnostic.
    pub fn resolve(&self) -> Result<Resolved> {
        let spec = self.system()?;
        let violations = validate(&spec);
        if !violations.is_empty() {
            return Err(Error::InvalidSpec(violations));
        }
        Ok(Resolved {
            spec,
            state: self.quantum()?,
            solver: self.solver.clone(),
            method: self.method,
        })
    }

    /// Sets a numeric leaf named by a dotted path such as
    /// `sets.1.kinetic.mass` or `pairs.0.1.amplitude`. Pair leaves are set
    /// on both orderings.
    pub fn with_leaf(&self, path: &str, value: f64) -> Result<Config> {
        let keys: Vec<&str> = path.split('.').collect();
        let mut paths = vec![keys.clone()];
        if keys.len() == 4 && keys[0] == "pairs" && keys[1] != keys[2] {
            paths.push(vec![keys[0], keys[2], keys[1], keys[3]]);
        }
        let mut doc = toml::Value::try_from(self).map_err(|e| Error::Config(e.to_string()))?;
        for keys in paths {
            set_leaf(&mut doc, &keys, value).map_err(|e| Error::Config(format!("`{path}`: {e}")))?;
        }
        doc.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))
    }
}

fn set_leaf(doc: &mut toml::Value, keys: &[&str], value: f64) -> std::result::Result<(), String> {
    let (last, parents) = keys.split_last().ok_or("empty path")?;
    let mut node = doc;
    for key in parents {
        node = child(node, key)?;
    }
    let leaf = match node {
        toml::Value::Table(t) => t.entry(last.to_string()).or_insert(toml::Value::Float(0.0)),
        toml::Value::Array(a) => {
            let i: usize = last.parse().map_err(|_| format!("`{last}` is not an index"))?;
            a.get_mut(i).ok_or_else(|| format!("index {i} out of range"))?
        }
        _ => return Err(format!("`{last}` has no parent table")),
    };
    *leaf = match leaf {
        toml::Value::Integer(_) if value.fract() == 0.0 && value >= 0.0 => toml::Value::Integer(value as i64),
        toml::Value::Integer(_) => return Err(format!("{value} is not a valid integer")),
        toml::Value::Float(_) => toml::Value::Float(value),
        _ => return Err("not a numeric leaf".into()),
    };
    Ok(())
}

fn child<'a>(node: &'a mut toml::Value, key: &str) -> std::result::Result<&'a mut toml::Value, String> {
    match node {
        toml::Value::Table(t) => t.get_mut(key).ok_or_else(|| format!("no key `{key}`")),
        toml::Value::Array(a) => {
            let i: usize = key.parse().map_err(|_| format!("`{key}` is not an index"))?;
            a.get_mut(i).ok_or_else(|| format!("index {i} out of range"))
        }
        _ => Err(format!("`{key}` is below a scalar")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{builtin_system, Builtin, ViolationCode};

    const UR: &str = r#"
dimension = 3
method = "et"
pairs = [
    [{ amplitude = 1.0, exponent = 2.0 }, { amplitude = 10.0, exponent = 2.0 }],
    [{ amplitude = 10.0, exponent = 2.0 }, {}],
]

[[sets]]
count = 2
statistics = "boson"
kinetic = { form = "ultrarelativistic" }

[[sets]]
count = 1
statistics = "boson"
kinetic = { form = "ultrarelativistic" }
"#;

    #[test]
    fn parses_the_ultrarelativistic_benchmark() {
        let cfg = parse(UR).unwrap();
        let r = cfg.resolve().unwrap();
        let expected = builtin_system(&Builtin::UltraRelOsc { lambda: 10.0, n: 3 }).unwrap();
        assert_eq!(r.spec, expected);
        assert_eq!(r.state, QuantumSpec::ground_state());
        assert_eq!(r.solver, SolverConfig::default());
    }

    #[test]
    fn serialization_is_idempotent() {
        let cfg = parse(UR).unwrap();
        let once = to_toml(&cfg).unwrap();
        let twice = to_toml(&parse(&once).unwrap()).unwrap();
        assert_eq!(once, twice);
        assert_eq!(parse(&once).unwrap(), cfg);
    }

    #[test]
    fn builtin_round_trip() {
        let spec = builtin_system(&Builtin::Atom {
            charge: 2.0,
            electrons: 2,
            nuclear_mass: 7294.3,
        })
        .unwrap();
        let state = QuantumSpec::improved_ground_state();
        let cfg = Config::from_system(&spec, &state, Method::Iet, SolverConfig::default());
        let back = parse(&to_toml(&cfg).unwrap()).unwrap().resolve().unwrap();
        assert_eq!(back.spec, spec);
        assert_eq!(back.state, state);
    }

    #[test]
    fn asymmetric_pairs_are_reported() {
        let text = UR.replace(
            "[{ amplitude = 10.0, exponent = 2.0 }, {}]",
            "[{ amplitude = 9.0, exponent = 2.0 }, {}]",
        );
        match parse(&text).unwrap().resolve() {
            Err(Error::InvalidSpec(v)) => assert_eq!(v[0].code, ViolationCode::PairAsymmetry),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse("dimension = 3\nfoo = 1\npairs = []\nsets = []"), Err(Error::Config(_))));
        let text = UR.replacen("kinetic = { form = \"ultrarelativistic\" }", "kinetic = { form = \"relativistic\" }", 1);
        assert!(matches!(parse(&text).unwrap().resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn phi_defaults_follow_the_method() {
        let mut cfg = parse(UR).unwrap();
        assert_eq!(cfg.phi(), Phi::Genuine);
        cfg.method = Method::Iet;
        assert_eq!(cfg.phi(), Phi::Auto);
        let text = UR.replace("method = \"et\"", "method = \"iet\"\nstate = { phi = 1.5 }");
        assert_eq!(parse(&text).unwrap().phi(), Phi::Value(1.5));
    }

    #[test]
    fn leaf_update_keeps_pairs_symmetric() {
        let cfg = parse(UR).unwrap().with_leaf("pairs.0.1.amplitude", 0.1).unwrap();
        let spec = cfg.resolve().unwrap().spec;
        assert_eq!(spec, builtin_system(&Builtin::UltraRelOsc { lambda: 0.1, n: 3 }).unwrap());
        let cfg = cfg.with_leaf("sets.0.count", 4.0).unwrap();
        assert_eq!(cfg.sets[0].count, 4);
        assert!(cfg.with_leaf("sets.7.count", 1.0).is_err());
        assert!(cfg.with_leaf("sets.0.count", 1.5).is_err());
    }
}
