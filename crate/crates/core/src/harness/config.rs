//! Experiment configuration: TOML (`key = value` sections) or JSON.
//!
//! ```toml
//! [curve]
//! builtin = { kind = "unit-circle" }   # or: file = "curve.csv"
//!
//! [run]
//! n = 512
//! seed = 7
//! epsilon_exponents = [4, 5, 6, 7, 8, 9]   # ε = 2^-k; or `epsilons = [...]`
//! suites = ["geometry", "energy"]          # default: all
//! output = "out"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BuiltinCurve, ClosedCurve};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Geometry,
    Field,
    Energy,
    Flux,
    Flatnorm,
    Bcf,
    Stability,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Geometry,
        Suite::Field,
        Suite::Energy,
        Suite::Flux,
        Suite::Flatnorm,
        Suite::Bcf,
        Suite::Stability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Field => "field",
            Suite::Energy => "energy",
            Suite::Flux => "flux",
            Suite::Flatnorm => "flatnorm",
            Suite::Bcf => "bcf",
            Suite::Stability => "stability",
        }
    }

    /// Suites drawing random probes; these require a seed.
    pub fn is_randomized(self) -> bool {
        matches!(self, Suite::Geometry | Suite::Flatnorm | Suite::Stability)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// Where the curve comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinCurve>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

impl CurveSpec {
    pub fn builtin(b: BuiltinCurve) -> Self {
        CurveSpec {
            builtin: Some(b),
            file: None,
        }
    }

    /// `circle:R`, `unit-circle`, `ellipse:A:B`, `trefoil`,
    /// `perturbed-circle:AMP:MODE`, or a path to a curve file.
    pub fn parse_arg(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| Error::Config(format!("curve `{s}`: missing parameter {i}")))?
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("curve `{s}`: {e}")))
        };
        let b = match parts[0] {
            "unit-circle" => BuiltinCurve::UnitCircle,
            "circle" => BuiltinCurve::Circle { radius: num(1)? },
            "ellipse" => BuiltinCurve::Ellipse {
                a: num(1)?,
                b: num(2)?,
            },
            "trefoil" => BuiltinCurve::Trefoil,
            "perturbed-circle" => BuiltinCurve::PerturbedCircle {
                amplitude: num(1)?,
                mode: num(2)? as u32,
            },
            _ => {
                return Ok(CurveSpec {
                    builtin: None,
                    file: Some(PathBuf::from(s)),
                })
            }
        };
        Ok(CurveSpec::builtin(b))
    }

    pub fn build(&self, n: usize) -> Result<ClosedCurve> {
        match (&self.builtin, &self.file) {
            (Some(b), None) => b.build(n),
            (None, Some(p)) => {
                let c = ClosedCurve::load(p)?;
                if c.is_polygon() || c.n() == n {
                    Ok(c)
                } else {
                    c.resampled(n)
                }
            }
            _ => Err(Error::Config(
                "curve: give exactly one of `builtin` or `file`".into(),
            )),
        }
    }
}

fn default_n() -> usize {
    512
}

fn default_exponents() -> Vec<i32> {
    (4..=9).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub epsilon_exponents: Option<Vec<i32>>,
    #[serde(default)]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default)]
    pub suites: Option<Vec<Suite>>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    curve: CurveSpec,
    #[serde(default)]
    run: Option<RunSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub curve: CurveSpec,
    pub epsilons: Vec<f64>,
    pub n: usize,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub suites: Vec<Suite>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            curve: CurveSpec::builtin(BuiltinCurve::UnitCircle),
            epsilons: dyadic(&default_exponents()),
            n: default_n(),
            seed: None,
            output: None,
            suites: Suite::ALL.to_vec(),
        }
    }
}

/// ε = 2^{-k} for each k.
pub fn dyadic(exponents: &[i32]) -> Vec<f64> {
    exponents.iter().map(|&k| 2f64.powi(-k)).collect()
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let f: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_file_struct(f)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ConfigFile = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_file_struct(f)
    }

    /// Reads `.json` as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::from_json(&text),
            _ => Self::from_toml(&text),
        }
    }

    fn from_file_struct(f: ConfigFile) -> Result<Self> {
        let run = f.run.unwrap_or(RunSection {
            n: default_n(),
            seed: None,
            epsilon_exponents: None,
            epsilons: None,
            suites: None,
            output: None,
        });
        let epsilons = match (run.epsilons, run.epsilon_exponents) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "run: give `epsilons` or `epsilon_exponents`, not both".into(),
                ))
            }
            (Some(e), None) => e,
            (None, Some(k)) => dyadic(&k),
            (None, None) => dyadic(&default_exponents()),
        };
        Ok(ExperimentConfig {
            curve: f.curve,
            epsilons,
            n: run.n,
            seed: run.seed,
            output: run.output,
            suites: run.suites.unwrap_or_else(|| Suite::ALL.to_vec()),
        })
    }

    /// Checks the field-level invariants and builds the curve.
    pub fn validate(&self) -> Result<ClosedCurve> {
        if self.n < 64 || !self.n.is_power_of_two() {
            return Err(Error::Config(format!(
                "run.n: must be a power of two ≥ 64, got {}",
                self.n
            )));
        }
        let curve = self
            .curve
            .build(self.n)
            .map_err(|e| Error::Config(format!("curve: {e}")))?;
        let half = 0.5 * curve.length();
        for (i, &e) in self.epsilons.iter().enumerate() {
            if !(e > 0.0 && e < half) {
                return Err(Error::Config(format!(
                    "run.epsilons[{i}]: ε = {e} outside (0, L/2) with L = {}",
                    curve.length()
                )));
            }
        }
        if self.seed.is_none() {
            if let Some(s) = self.suites.iter().find(|s| s.is_randomized()) {
                return Err(Error::Config(format!(
                    "run.seed: required by the randomized suite `{s}`"
                )));
            }
        }
        Ok(curve)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_toml() {
        let c = ExperimentConfig::from_toml(
            r#"
[curve]
builtin = { kind = "ellipse", a = 0.2, b = 0.1 }

[run]
n = 128
seed = 3
epsilon_exponents = [4, 5]
suites = ["energy", "bcf"]
"#,
        )
        .unwrap();
        assert_eq!(c.n, 128);
        assert_eq!(c.epsilons, vec![0.0625, 0.03125]);
        assert_eq!(c.suites, vec![Suite::Energy, Suite::Bcf]);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn parses_json() {
        let c = ExperimentConfig::from_json(
            r#"{"curve": {"builtin": {"kind": "trefoil"}}, "run": {"epsilons": [0.01]}}"#,
        )
        .unwrap();
        assert_eq!(c.curve, CurveSpec::builtin(BuiltinCurve::Trefoil));
        assert_eq!(c.epsilons, vec![0.01]);
        assert_eq!(c.n, 512);
    }

    #[test]
    fn rejects_large_epsilon() {
        let c = ExperimentConfig {
            epsilons: vec![0.6],
            suites: vec![],
            ..Default::default()
        };
        let e = c.validate().unwrap_err();
        assert!(e.to_string().contains("run.epsilons[0]"), "{e}");
    }

    #[test]
    fn rejects_bad_resolution() {
        for n in [32, 100] {
            let c = ExperimentConfig {
                n,
                suites: vec![],
                ..Default::default()
            };
            assert!(matches!(c.validate(), Err(Error::Config(_))));
        }
    }

    #[test]
    fn randomized_suites_need_seed() {
        let c = ExperimentConfig {
            suites: vec![Suite::Geometry],
            ..Default::default()
        };
        assert!(c.validate().unwrap_err().to_string().contains("seed"));
        let c = ExperimentConfig {
            suites: vec![Suite::Energy],
            ..Default::default()
        };
        assert!(c.validate().is_ok());
    }

    #[test]
    fn curve_arguments() {
        assert_eq!(
            CurveSpec::parse_arg("circle:0.3").unwrap(),
            CurveSpec::builtin(BuiltinCurve::Circle { radius: 0.3 })
        );
        assert_eq!(
            CurveSpec::parse_arg("trefoil").unwrap(),
            CurveSpec::builtin(BuiltinCurve::Trefoil)
        );
        assert!(CurveSpec::parse_arg("ellipse:0.2").is_err());
        assert_eq!(
            CurveSpec::parse_arg("a.csv").unwrap().file,
            Some(PathBuf::from("a.csv"))
        );
    }
}
