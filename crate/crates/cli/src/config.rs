//! The TOML configuration file.
//!
//! Only the completion credential is interpolated, and only in the form
//! `credential = "${VAR}"`, so secrets stay out of files on disk.

use std::path::Path;

use maintkit::dataset::{FieldMap, Schema, SplitSpec};
use maintkit::evaluation::ReportFormat;
use maintkit::refactor::{CompletionConfig, GatePolicy};
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    jobs: Option<usize>,
    format: Option<String>,
    #[serde(default)]
    dataset: DatasetSection,
    #[serde(default)]
    split: SplitSection,
    completion: Option<toml::Table>,
    gate: Option<GatePolicy>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSection {
    pub schema: Option<Schema>,
    pub max_malformed: Option<usize>,
    pub fields: Option<FieldMap>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    pub ratios: Option<[f64; 3]>,
    pub sizes: Option<[usize; 3]>,
}

#[derive(Debug, Default)]
pub struct ToolConfig {
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub format: Option<ReportFormat>,
    pub dataset: DatasetSection,
    pub split: SplitSection,
    pub completion: Option<CompletionConfig>,
    pub gate: GatePolicy,
}

/// `${NAME}` → `NAME`.
fn credential_var(value: &str) -> Option<&str> {
    let name = value.strip_prefix("${")?.strip_suffix('}')?;
    let ok = !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    ok.then_some(name)
}

fn completion(mut table: toml::Table) -> Result<CompletionConfig, Failure> {
    if let Some(value) = table.remove("credential") {
        let text = value.as_str().unwrap_or_default();
        let var = credential_var(text).ok_or_else(|| {
            Failure::Usage("completion.credential must name an environment variable as \"${VAR}\"".into())
        })?;
        table.insert("credential_env".into(), toml::Value::String(var.into()));
    }
    table
        .try_into()
        .map_err(|e| Failure::Usage(format!("[completion]: {e}")))
}

impl ToolConfig {
    pub fn parse(text: &str) -> Result<Self, Failure> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Failure::Usage(format!("config: {e}")))?;
        if raw.split.ratios.is_some() && raw.split.sizes.is_some() {
            return Err(Failure::Usage("config: [split] takes either ratios or sizes, not both".into()));
        }
        let format = raw
            .format
            .map(|f| f.parse::<ReportFormat>())
            .transpose()
            .map_err(|e| Failure::Usage(format!("config: {e}")))?;
        Ok(ToolConfig {
            seed: raw.seed,
            jobs: raw.jobs,
            format,
            dataset: raw.dataset,
            split: raw.split,
            completion: raw.completion.map(completion).transpose()?,
            gate: raw.gate.unwrap_or_default(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn split_spec(&self, seed: u64) -> Result<SplitSpec, Failure> {
        match (self.split.ratios, self.split.sizes) {
            (_, Some([t, v, s])) => Ok(SplitSpec::sizes(t, v, s, seed)),
            (Some([t, v, s]), None) => SplitSpec::ratios(t, v, s, seed).map_err(|e| Failure::Usage(e.to_string())),
            (None, None) => SplitSpec::ratios(0.8, 0.1, 0.1, seed).map_err(|e| Failure::Usage(e.to_string())),
        }
    }
}
