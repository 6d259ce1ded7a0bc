//! Instruction-dataset records: JSONL loading and writing, metric
//! augmentation, prompt rendering and train/validation/test splits.

mod prompt;
mod split;

use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::metrics::{snippet_report, MaintainabilityReport};
use crate::source::SourceUnit;

pub use prompt::{render_prompt, render_template, PromptError, PromptMode, PromptValues};
pub use split::{split, split_indices, Split, SplitError, SplitSpec, SplitSizes};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schema {
    Commitpack,
    Codealpaca,
}

impl Schema {
    pub fn name(self) -> &'static str {
        match self {
            Schema::Commitpack => "commitpack",
            Schema::Codealpaca => "codealpaca",
        }
    }
}

impl std::str::FromStr for Schema {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "commitpack" => Ok(Schema::Commitpack),
            "codealpaca" => Ok(Schema::Codealpaca),
            other => Err(format!("unknown schema {other:?} (expected commitpack or codealpaca)")),
        }
    }
}

/// JSON key names for one source schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldMap {
    /// Key holding a stable identifier; records without it get
    /// `<schema>-<line>`.
    pub id: String,
    pub instruction: String,
    /// Optional extra input appended to the instruction on a new line.
    pub input: Option<String>,
    pub original: String,
    pub refactored: String,
}

impl Default for FieldMap {
    fn default() -> Self {
        Self::for_schema(Schema::Commitpack)
    }
}

impl FieldMap {
    pub fn for_schema(schema: Schema) -> Self {
        match schema {
            Schema::Commitpack => FieldMap {
                id: "commit".into(),
                instruction: "message".into(),
                input: None,
                original: "old_contents".into(),
                refactored: "new_contents".into(),
            },
            Schema::Codealpaca => FieldMap {
                id: "id".into(),
                instruction: "instruction".into(),
                input: Some("input".into()),
                original: "output".into(),
                refactored: "refactored_code".into(),
            },
        }
    }

    fn known(&self, key: &str) -> bool {
        key == self.id
            || key == self.instruction
            || key == self.original
            || key == self.refactored
            || self.input.as_deref() == Some(key)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub schema: Schema,
    pub instruction: String,
    pub original_code: String,
    pub refactored_code: Option<String>,
    /// Source fields the schema does not map, in file order.
    pub extra: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub records: Vec<DatasetRecord>,
    pub errors: Vec<LineError>,
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{count} malformed lines exceed the limit of {limit} (first: line {first_line}: {first_message})")]
    TooManyMalformed {
        count: usize,
        limit: usize,
        first_line: usize,
        first_message: String,
    },
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub fields: FieldMap,
    /// Malformed lines tolerated before loading aborts.
    pub max_malformed: usize,
}

impl LoadOptions {
    pub fn for_schema(schema: Schema) -> Self {
        LoadOptions {
            fields: FieldMap::for_schema(schema),
            max_malformed: usize::MAX,
        }
    }
}

fn string_field(obj: &Map<String, Value>, key: &str) -> Result<Option<String>, String> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.clone())),
        Some(other) => Err(format!("field {key:?} must be a string, found {}", type_name(other))),
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

fn parse_line(text: &str, line: usize, schema: Schema, fields: &FieldMap) -> Result<DatasetRecord, String> {
    let value: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let Value::Object(obj) = value else {
        return Err(format!("expected a JSON object, found {}", type_name(&value)));
    };
    let instruction = string_field(&obj, &fields.instruction)?
        .ok_or_else(|| format!("missing field {:?}", fields.instruction))?;
    let input = match &fields.input {
        Some(key) => string_field(&obj, key)?.filter(|s| !s.is_empty()),
        None => None,
    };
    let instruction = match input {
        Some(input) => format!("{instruction}\n{input}"),
        None => instruction,
    };
    let original_code = string_field(&obj, &fields.original)?
        .ok_or_else(|| format!("missing field {:?}", fields.original))?;
    let refactored_code = string_field(&obj, &fields.refactored)?;
    let id = match obj.get(&fields.id) {
        Some(Value::Number(n)) => n.to_string(),
        _ => string_field(&obj, &fields.id)?.unwrap_or_else(|| format!("{}-{line}", schema.name())),
    };
    let extra = obj.into_iter().filter(|(k, _)| !fields.known(k)).collect();
    Ok(DatasetRecord {
        id,
        schema,
        instruction,
        original_code,
        refactored_code,
        extra,
    })
}

/// Parses JSONL text. Blank lines are skipped; bad lines and duplicate ids
/// are reported with their 1-based line numbers.
pub fn parse_records(reader: impl BufRead, schema: Schema, options: &LoadOptions) -> io::Result<Loaded> {
    let mut records = Vec::new();
    let mut errors = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let number = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(&line, number, schema, &options.fields) {
            Ok(record) if !seen.insert(record.id.clone()) => errors.push(LineError {
                line: number,
                message: format!("duplicate id {:?}", record.id),
            }),
            Ok(record) => records.push(record),
            Err(message) => errors.push(LineError { line: number, message }),
        }
    }
    Ok(Loaded { records, errors })
}

pub fn load_records(path: &Path, schema: Schema, options: &LoadOptions) -> Result<Loaded, DatasetError> {
    let io_err = |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::open(path).map_err(io_err)?;
    let loaded = parse_records(BufReader::new(file), schema, options).map_err(io_err)?;
    if loaded.errors.len() > options.max_malformed {
        let first = &loaded.errors[0];
        return Err(DatasetError::TooManyMalformed {
            count: loaded.errors.len(),
            limit: options.max_malformed,
            first_line: first.line,
            first_message: first.message.clone(),
        });
    }
    Ok(loaded)
}

/// The source-schema JSON object for a record, with mapped fields first
/// and pass-through fields after them.
pub fn record_to_json(record: &DatasetRecord, fields: &FieldMap) -> Map<String, Value> {
    let mut obj = Map::new();
    obj.insert(fields.id.clone(), Value::String(record.id.clone()));
    obj.insert(fields.instruction.clone(), Value::String(record.instruction.clone()));
    obj.insert(fields.original.clone(), Value::String(record.original_code.clone()));
    if let Some(code) = &record.refactored_code {
        obj.insert(fields.refactored.clone(), Value::String(code.clone()));
    }
    for (k, v) in &record.extra {
        obj.insert(k.clone(), v.clone());
    }
    obj
}

pub fn write_jsonl<T: Serialize>(items: &[T], path: &Path) -> Result<(), DatasetError> {
    let io_err = |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(|e| io_err(e.into()))?;
        out.write_all(b"\n").map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

/// Writes records in their source schema so [`load_records`] reads them
/// back unchanged.
pub fn write_records(records: &[DatasetRecord], path: &Path, fields: &FieldMap) -> Result<(), DatasetError> {
    let objects: Vec<_> = records.iter().map(|r| record_to_json(r, fields)).collect();
    write_jsonl(&objects, path)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum AnalysisStatus {
    Analyzed,
    /// Parsed but has no source lines; kept, excluded from aggregates.
    Degenerate,
    Unanalyzable(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentedRecord {
    pub record: DatasetRecord,
    pub status: AnalysisStatus,
    pub original_metrics: Option<MaintainabilityReport>,
    pub refactored_metrics: Option<MaintainabilityReport>,
    /// Inference-mode prompt; absent for unanalyzable records.
    pub rendered_prompt: Option<String>,
    /// Why the refactored code could not be analyzed, if it could not.
    pub refactored_error: Option<String>,
}

impl AugmentedRecord {
    pub fn is_usable(&self) -> bool {
        self.status == AnalysisStatus::Analyzed
    }
}

pub fn augment_one(record: DatasetRecord) -> AugmentedRecord {
    let unit = SourceUnit::new(record.original_code.clone(), record.id.clone());
    let (status, original_metrics) = match snippet_report(&unit) {
        Ok(r) if r.degenerate => (AnalysisStatus::Degenerate, Some(r)),
        Ok(r) => (AnalysisStatus::Analyzed, Some(r)),
        Err(e) => (AnalysisStatus::Unanalyzable(e.source.to_string()), None),
    };
    let (refactored_metrics, refactored_error) = match &record.refactored_code {
        Some(code) => match snippet_report(&SourceUnit::new(code.clone(), record.id.clone())) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.source.to_string())),
        },
        None => (None, None),
    };
    let mut out = AugmentedRecord {
        record,
        status,
        original_metrics,
        refactored_metrics,
        rendered_prompt: None,
        refactored_error,
    };
    out.rendered_prompt = render_prompt(&out, PromptMode::Inference).ok();
    out
}

/// Augments every record in parallel; output order equals input order.
pub fn augment(records: Vec<DatasetRecord>) -> Vec<AugmentedRecord> {
    records.into_par_iter().map(augment_one).collect()
}

/// Like [`augment`] but on a dedicated pool of `jobs` threads.
pub fn augment_with_jobs(records: Vec<DatasetRecord>, jobs: usize) -> Vec<AugmentedRecord> {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(|| augment(records)),
        Err(_) => records.into_iter().map(augment_one).collect(),
    }
}
