//! Model files: strict JSON documents holding every model section.

use std::path::Path;

use crate::diagnostic::Diagnostic;
use crate::model::Model;
use crate::validate::validate;

/// Parses `text` without validating it. Syntax and schema errors come back
/// as one diagnostic carrying the field path and line/column.
pub fn parse_model(text: &str) -> Result<Model, Diagnostic> {
    let de = &mut serde_json::Deserializer::from_str(text);
    match serde_path_to_error::deserialize::<_, Model>(de) {
        Ok(m) => Ok(m),
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let rule = match inner.classify() {
                serde_json::error::Category::Data => "schema",
                _ => "syntax",
            };
            let entity = if path == "." || path.is_empty() { "model".to_string() } else { path };
            Err(Diagnostic::error(rule, entity, inner.to_string()))
        }
    }
}

/// Parses and validates. Any error-level finding rejects the model.
pub fn load_model_str(text: &str) -> Result<Model, Vec<Diagnostic>> {
    let model = parse_model(text).map_err(|d| vec![d])?;
    let diags = validate(&model);
    if diags.iter().any(Diagnostic::is_error) {
        return Err(diags);
    }
    Ok(model)
}

pub fn load_model(path: &Path) -> Result<Model, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| vec![Diagnostic::error("io", path.display().to_string(), e.to_string())])?;
    load_model_str(&text)
}

/// Pretty JSON with a trailing newline. Deterministic: map keys are ordered
/// and collections keep their declaration order.
pub fn serialize_model(model: &Model) -> String {
    let mut s = serde_json::to_string_pretty(model).expect("model serialization cannot fail");
    s.push('\n');
    s
}

pub fn save_model(model: &Model, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, serialize_model(model))
}
