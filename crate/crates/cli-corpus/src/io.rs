//! Reading and writing the JSON documents.
//!
//! Schema errors carry the JSON path of the offending value. Template and
//! family arguments name a built-in entry or a file; instance files may be a
//! bare instance or a generator dump `{instance, witness}`, and assignment
//! files likewise a bare assignment or `{witness}`.

use std::fs;
use std::path::{Path, PathBuf};

use pcsp_model::{Assignment, AssignmentDoc, Instance, InstanceDoc, PromiseTemplate, TemplateDoc};
use rounding_pipelines::{Family, FamilyDoc};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::CliError;

/// What `gen` writes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Planted {
    pub instance: InstanceDoc,
    pub witness: AssignmentDoc,
}

fn read_value(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_json::Value::deserialize(&mut de)
        .and_then(|v| de.end().map(|()| v))
        .map_err(|e| CliError::Json { path: path.into(), at: format!("line {} column {}", e.line(), e.column()), msg: e.to_string() })
}

/// Deserializes `v`, reporting failures by JSON path; `prefix` is the path
/// of `v` inside its file.
fn from_value<T: DeserializeOwned>(path: &Path, prefix: &str, v: serde_json::Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let inner = e.path().to_string();
        let at = match (prefix, inner.as_str()) {
            ("", i) => i.to_string(),
            (p, ".") => p.to_string(),
            (p, i) => format!("{p}.{i}"),
        };
        CliError::Json { path: path.into(), at, msg: e.into_inner().to_string() }
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    from_value(path, "", read_value(path)?)
}

/// Takes `key` out of a wrapper object, or the whole document if it has no
/// such key.
fn unwrap_key(mut v: serde_json::Value, key: &str) -> (serde_json::Value, &str) {
    match v.as_object_mut().and_then(|o| o.remove(key)) {
        Some(inner) => (inner, key),
        None => (v, ""),
    }
}

pub fn load_template(arg: &str) -> Result<PromiseTemplate, CliError> {
    if let Some(t) = corpus::template(arg) {
        return Ok(t);
    }
    let doc: TemplateDoc = read_json(Path::new(arg))?;
    Ok(PromiseTemplate::try_from(doc)?)
}

pub fn load_family(arg: &str) -> Result<Family, CliError> {
    if let Some(f) = corpus::family(arg) {
        return Ok(f);
    }
    let doc: FamilyDoc = read_json(Path::new(arg))?;
    Ok(Family::try_from(&doc)?)
}

pub fn load_instance(path: &Path, tmpl: &PromiseTemplate) -> Result<Instance, CliError> {
    let (v, prefix) = unwrap_key(read_value(path)?, "instance");
    let doc: InstanceDoc = from_value(path, prefix, v)?;
    Ok(Instance::from_doc(&doc, tmpl)?)
}

pub fn load_assignment(path: &Path, tmpl: &PromiseTemplate) -> Result<Assignment, CliError> {
    let (v, prefix) = unwrap_key(read_value(path)?, "witness");
    let doc: AssignmentDoc = from_value(path, prefix, v)?;
    Ok(Assignment::from_doc(&doc, tmpl)?)
}

/// Pretty JSON with a trailing newline.
pub fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("documents serialize");
    s.push('\n');
    s
}

pub fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("documents serialize")
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: PathBuf::from(path), source })
}
