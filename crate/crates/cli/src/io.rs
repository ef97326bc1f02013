//! Model and relation files.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use plausikit::bisim::{Relation, RelationDoc};
use plausikit::Model;

pub fn read_model(path: &Path) -> Result<Model> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Model::from_json(&text).with_context(|| format!("in {}", path.display()))
}

pub fn write_model(path: &Path, m: &Model) -> Result<()> {
    fs::write(path, m.to_json() + "\n").with_context(|| format!("cannot write {}", path.display()))
}

/// Reads a relation file between `left` and `right`. The model references
/// stored in the file are not followed.
pub fn read_relation(path: &Path, left: &Model, right: &Model) -> Result<Relation> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc: RelationDoc =
        serde_json::from_str(&text).with_context(|| format!("malformed relation file {}", path.display()))?;
    doc.resolve(left, right).with_context(|| format!("in {}", path.display()))
}
