//! Model configuration files.
//!
//! A config is flat, sectioned TOML with every field expression quoted
//! verbatim (see `docs/config-format.md`). Emission is canonical: the
//! writer produces one fixed layout, so emit -> parse -> emit is
//! byte-identical.

use serde::Deserialize;
use sha2::{Digest, Sha256};

use upsilon_core::expr::parse as parse_expr;
use upsilon_core::fields::{
    Chart, ConnectionField, GeneralConnection, LinearConnection, MetricField,
};
use upsilon_core::geometry::levi_civita;
use upsilon_core::verify::{SampleSpec, Tolerances};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config syntax error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("config error in [{section}]: {message}")]
    Semantic { section: &'static str, message: String },
}

fn semantic(section: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Semantic {
        section,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub name: String,
    pub chart: ChartSection,
    pub metric: MetricSection,
    pub connection: ConnectionSection,
    pub sampling: SamplingSection,
    pub tolerances: ToleranceSection,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSection {
    pub dim: usize,
    pub coordinates: Vec<String>,
    #[serde(default)]
    pub guards: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    #[serde(default = "default_unit_power")]
    pub unit_power: i32,
    pub rows: Vec<Vec<String>>,
}

fn default_unit_power() -> i32 {
    2
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionSection {
    pub kind: String,
    #[serde(default)]
    pub components: Option<ComponentArray>,
}

/// Connection component strings: `[l][u]` for general connections,
/// `[l][u][m]` for linear ones.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ComponentArray {
    General(Vec<Vec<String>>),
    Linear(Vec<Vec<Vec<String>>>),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplingSection {
    pub points: usize,
    pub seed: u64,
    pub base_box: Vec<[f64; 2]>,
    pub velocity_box: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub residual: f64,
    pub nondegeneracy: f64,
}

/// Everything a command needs, built and validated from a config.
pub struct Model {
    pub name: String,
    pub chart: Chart,
    pub metric: MetricField,
    pub connection: ConnectionField,
    pub sample_spec: SampleSpec,
    pub tolerances: Tolerances,
}

impl std::str::FromStr for ModelConfig {
    type Err = ConfigError;

    fn from_str(source: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(source)?)
    }
}

impl ModelConfig {
    /// Validates the sections and builds the chart-level objects.
    pub fn build(&self) -> Result<Model, ConfigError> {
        let n = self.chart.dim;
        let guards = self
            .chart
            .guards
            .iter()
            .map(|g| parse_expr(g, n).map_err(|e| semantic("chart", format!("guard '{g}': {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let chart = Chart::new(n, self.chart.coordinates.clone(), guards)
            .map_err(|e| semantic("chart", e.to_string()))?;

        if self.metric.rows.len() != n || self.metric.rows.iter().any(|r| r.len() != n) {
            return Err(semantic("metric", format!("rows must form an {n} x {n} array")));
        }
        let sources: Vec<&str> = self
            .metric
            .rows
            .iter()
            .flat_map(|r| r.iter().map(|s| s.as_str()))
            .collect();
        let metric = MetricField::parse(n, &sources, self.metric.unit_power)
            .map_err(|e| semantic("metric", e.to_string()))?;

        let connection = match self.connection.kind.as_str() {
            "levi-civita" => {
                if self.connection.components.is_some() {
                    return Err(semantic(
                        "connection",
                        "kind \"levi-civita\" takes no components",
                    ));
                }
                levi_civita(&metric)
            }
            "linear" => match &self.connection.components {
                Some(ComponentArray::Linear(rows)) => {
                    if rows.len() != n
                        || rows.iter().any(|a| a.len() != n)
                        || rows.iter().flatten().any(|b| b.len() != n)
                    {
                        return Err(semantic(
                            "connection",
                            format!("components must form an {n} x {n} x {n} array"),
                        ));
                    }
                    let sources: Vec<&str> = rows
                        .iter()
                        .flat_map(|a| a.iter().flat_map(|b| b.iter().map(|s| s.as_str())))
                        .collect();
                    ConnectionField::Linear(
                        LinearConnection::parse(n, &sources)
                            .map_err(|e| semantic("connection", e.to_string()))?,
                    )
                }
                _ => {
                    return Err(semantic(
                        "connection",
                        "kind \"linear\" requires components as an n x n x n string array",
                    ))
                }
            },
            "general" => match &self.connection.components {
                Some(ComponentArray::General(rows)) => {
                    if rows.len() != n || rows.iter().any(|a| a.len() != n) {
                        return Err(semantic(
                            "connection",
                            format!("components must form an {n} x {n} array"),
                        ));
                    }
                    let sources: Vec<&str> = rows
                        .iter()
                        .flat_map(|a| a.iter().map(|s| s.as_str()))
                        .collect();
                    ConnectionField::General(
                        GeneralConnection::parse(n, &sources)
                            .map_err(|e| semantic("connection", e.to_string()))?,
                    )
                }
                _ => {
                    return Err(semantic(
                        "connection",
                        "kind \"general\" requires components as an n x n string array",
                    ))
                }
            },
            other => {
                return Err(semantic(
                    "connection",
                    format!("unknown kind \"{other}\" (expected levi-civita, linear or general)"),
                ))
            }
        };

        let sample_spec = SampleSpec {
            count: self.sampling.points,
            base_box: self.sampling.base_box.iter().map(|b| (b[0], b[1])).collect(),
            velocity_box: self
                .sampling
                .velocity_box
                .iter()
                .map(|b| (b[0], b[1]))
                .collect(),
            seed: self.sampling.seed,
        };
        sample_spec
            .validate(n)
            .map_err(|e| semantic("sampling", e.to_string()))?;

        if !(self.tolerances.residual > 0.0 && self.tolerances.nondegeneracy > 0.0) {
            return Err(semantic("tolerances", "tolerances must be positive"));
        }

        Ok(Model {
            name: self.name.clone(),
            chart,
            metric,
            connection,
            sample_spec,
            tolerances: Tolerances {
                residual: self.tolerances.residual,
                nondegeneracy: self.tolerances.nondegeneracy,
            },
        })
    }
}

/// Content hash binding reports to the exact config bytes.
pub fn config_hash(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{:x}", hasher.finalize())
}

fn fmt_float(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else if v != 0.0 && v.abs() < 1e-3 {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn fmt_string_list(items: &[String]) -> String {
    let quoted: Vec<String> = items.iter().map(|s| format!("\"{s}\"")).collect();
    format!("[{}]", quoted.join(", "))
}

fn fmt_box(intervals: &[[f64; 2]]) -> String {
    let pairs: Vec<String> = intervals
        .iter()
        .map(|b| format!("[{}, {}]", fmt_float(b[0]), fmt_float(b[1])))
        .collect();
    format!("[{}]", pairs.join(", "))
}

/// Canonical emission; the only writer this tool ships.
pub fn emit(config: &ModelConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("name = \"{}\"\n", config.name));
    out.push_str("\n[chart]\n");
    out.push_str(&format!("dim = {}\n", config.chart.dim));
    out.push_str(&format!(
        "coordinates = {}\n",
        fmt_string_list(&config.chart.coordinates)
    ));
    out.push_str(&format!("guards = {}\n", fmt_string_list(&config.chart.guards)));
    out.push_str("\n[metric]\n");
    out.push_str(&format!("unit_power = {}\n", config.metric.unit_power));
    out.push_str("rows = [\n");
    for row in &config.metric.rows {
        out.push_str(&format!("    {},\n", fmt_string_list(row)));
    }
    out.push_str("]\n");
    out.push_str("\n[connection]\n");
    out.push_str(&format!("kind = \"{}\"\n", config.connection.kind));
    match &config.connection.components {
        None => {}
        Some(ComponentArray::General(rows)) => {
            out.push_str("components = [\n");
            for row in rows {
                out.push_str(&format!("    {},\n", fmt_string_list(row)));
            }
            out.push_str("]\n");
        }
        Some(ComponentArray::Linear(rows)) => {
            out.push_str("components = [\n");
            for plane in rows {
                let inner: Vec<String> = plane.iter().map(|r| fmt_string_list(r)).collect();
                out.push_str(&format!("    [{}],\n", inner.join(", ")));
            }
            out.push_str("]\n");
        }
    }
    out.push_str("\n[sampling]\n");
    out.push_str(&format!("points = {}\n", config.sampling.points));
    out.push_str(&format!("seed = {}\n", config.sampling.seed));
    out.push_str(&format!("base_box = {}\n", fmt_box(&config.sampling.base_box)));
    out.push_str(&format!(
        "velocity_box = {}\n",
        fmt_box(&config.sampling.velocity_box)
    ));
    out.push_str("\n[tolerances]\n");
    out.push_str(&format!(
        "residual = {}\n",
        fmt_float(config.tolerances.residual)
    ));
    out.push_str(&format!(
        "nondegeneracy = {}\n",
        fmt_float(config.tolerances.nondegeneracy)
    ));
    out
}
