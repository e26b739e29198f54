//! JSON file formats shared by the subcommands.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use loopfact::factor::RootSubgroupData;
use loopfact::laurent::LaurentSeries;
use loopfact::random::PRNG_NAME;
use loopfact::rootsub::RootParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub prng: &'static str,
}

impl Metadata {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            tool: "loopfact",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config: config.clone(),
            prng: PRNG_NAME,
        }
    }
}

/// Root-subgroup coordinates as they appear in files. `eta` is indexed from 0,
/// `zeta` from 1; `chi` holds powers `>= 1`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default)]
    pub eta: Vec<Complex64>,
    #[serde(default)]
    pub chi0: Complex64,
    #[serde(default)]
    pub chi: LaurentSeries,
    #[serde(default)]
    pub zeta: Vec<Complex64>,
}

impl Params {
    pub fn support(&self) -> usize {
        self.eta.len().max(self.zeta.len())
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.chi0.re.abs() > tol {
            bail!("chi0 must be purely imaginary, got {}", self.chi0);
        }
        if let Some(p) = self.chi.low_power().filter(|&p| p < 1) {
            bail!("chi must only contain powers >= 1, found z^{p}");
        }
        Ok(())
    }

    pub fn to_data(&self) -> RootSubgroupData {
        RootSubgroupData {
            eta: RootParams::eta(self.eta.clone()),
            chi0: self.chi0,
            chi: self.chi.clone(),
            zeta: RootParams::zeta(self.zeta.clone()),
            residual: 0.0,
        }
    }

    pub fn from_data(data: &RootSubgroupData) -> Self {
        Self {
            eta: data.eta.values.clone(),
            chi0: data.chi0,
            chi: data.chi.clone(),
            zeta: data.zeta.values.clone(),
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    check_schema(&value).with_context(|| format!("in {}", path.display()))?;
    Ok(value)
}

fn check_schema(value: &Value) -> Result<()> {
    let Some(obj) = value.as_object() else {
        bail!("top level must be a JSON object");
    };
    match obj.get("schema_version").and_then(Value::as_u64) {
        Some(v) if v == SCHEMA_VERSION as u64 => Ok(()),
        Some(v) => bail!("unsupported schema_version {v} (expected {SCHEMA_VERSION})"),
        None => bail!("missing schema_version"),
    }
}

/// Deserializes `key` of a file object, or the whole object minus
/// `schema_version` when `key` is absent and `fallback_whole` is set.
pub fn field<T: for<'de> Deserialize<'de>>(value: &Value, key: &str, fallback_whole: bool) -> Result<T> {
    let obj = value.as_object().expect("checked by read_json");
    if let Some(v) = obj.get(key) {
        return serde_json::from_value(v.clone()).with_context(|| format!("field {key:?}"));
    }
    if !fallback_whole {
        bail!("missing field {key:?}");
    }
    let mut rest = obj.clone();
    rest.remove("schema_version");
    rest.remove("metadata");
    serde_json::from_value(Value::Object(rest)).context("parameter object")
}

/// Writes `{"schema_version": 1, "metadata": .., ..body}` to `out`, or stdout.
pub fn emit(out: Option<&Path>, metadata: &Metadata, body: impl Serialize) -> Result<()> {
    let mut obj = serde_json::Map::new();
    obj.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
    obj.insert("metadata".into(), serde_json::to_value(metadata)?);
    match serde_json::to_value(body)? {
        Value::Object(fields) => obj.extend(fields),
        other => {
            obj.insert("result".into(), other);
        }
    }
    let mut text = serde_json::to_string_pretty(&Value::Object(obj))?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
