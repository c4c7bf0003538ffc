//! Reading JSON inputs with schema errors located by JSON pointer.

use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

use groupoidlab::calgebra::AlgebraElementJson;
use groupoidlab::groupoid::{FinGroupoid, GroupoidInput};
use groupoidlab::twist::TwoCocycleJson;

/// Bad input: unreadable file, malformed JSON, schema violation, or data the
/// library rejects. Maps to exit code 1.
#[derive(Debug)]
pub struct InputError {
    pub message: String,
    pub pointer: Option<String>,
}

impl InputError {
    pub fn new(message: impl fmt::Display) -> Self {
        Self { message: message.to_string(), pointer: None }
    }

    pub fn at(pointer: impl Into<String>, message: impl fmt::Display) -> Self {
        Self { message: message.to_string(), pointer: Some(pointer.into()) }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pointer {
            Some(p) => write!(f, "at `{p}`: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for InputError {}

pub type InputResult<T> = Result<T, InputError>;

pub fn read_value(path: &Path) -> InputResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::new(format!("cannot read {}: {e}", path.display())))?;
    parse_value(&text)
}

pub fn parse_value(text: &str) -> InputResult<Value> {
    serde_json::from_str(text).map_err(|e| InputError::new(format!("invalid JSON: {e}")))
}

fn escape(segment: &str) -> String {
    segment.replace('~', "~0").replace('/', "~1")
}

fn pointer(base: &str, path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = base.to_string();
    for segment in path.iter() {
        match segment {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape(variant))),
            Segment::Unknown => {}
        }
    }
    out
}

/// Deserialises `value`, which sits at `base` in the input document.
pub fn decode<T: DeserializeOwned>(value: &Value, base: &str) -> InputResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let p = pointer(base, e.path());
        let p = if p.is_empty() { "/".to_string() } else { p };
        InputError::at(p, e.into_inner())
    })
}

pub fn field<'a>(value: &'a Value, base: &str, key: &str) -> InputResult<&'a Value> {
    value.get(key).ok_or_else(|| InputError::at(if base.is_empty() { "/" } else { base }, format!("missing field `{key}`")))
}

/// A groupoid given as `{"psi": map}` or explicitly. The variant is chosen
/// by key so that schema errors keep their location.
pub fn decode_groupoid(value: &Value, base: &str) -> InputResult<GroupoidInput> {
    if let Some(psi) = value.get("psi") {
        if value.as_object().is_some_and(|o| o.len() > 1) {
            return Err(InputError::at(base_or_root(base), "a relation groupoid takes only the field `psi`"));
        }
        Ok(GroupoidInput::Relation { psi: decode(psi, &format!("{base}/psi"))? })
    } else {
        Ok(GroupoidInput::Explicit(decode::<FinGroupoid>(value, base)?))
    }
}

fn base_or_root(base: &str) -> &str {
    if base.is_empty() {
        "/"
    } else {
        base
    }
}

/// `{"groupoid": …, "cocycle": …, "elements": […]}`; the last two are
/// optional where the command allows it.
pub struct TwistedInput {
    pub groupoid: GroupoidInput,
    pub cocycle: Option<TwoCocycleJson>,
    pub elements: Vec<AlgebraElementJson>,
}

pub fn decode_twisted(value: &Value, allowed: &[&str]) -> InputResult<TwistedInput> {
    let object = value.as_object().ok_or_else(|| InputError::at("/", "expected an object"))?;
    for key in object.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(InputError::at(format!("/{}", escape(key)), format!("unknown field `{key}`")));
        }
    }
    let groupoid = decode_groupoid(field(value, "", "groupoid")?, "/groupoid")?;
    let cocycle = value.get("cocycle").map(|c| decode(c, "/cocycle")).transpose()?;
    let elements = value.get("elements").map(|e| decode(e, "/elements")).transpose()?.unwrap_or_default();
    Ok(TwistedInput { groupoid, cocycle, elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use groupoidlab::FinSpace;

    #[test]
    fn schema_errors_carry_pointers() {
        let v = parse_value(r#"{"points": ["a"], "min_open": {"a": [1]}}"#).unwrap();
        let err = decode::<FinSpace>(&v, "").unwrap_err();
        assert_eq!(err.pointer.as_deref(), Some("/min_open/a/0"));
        let v = parse_value(r#"{"groupoid": {"psi": {"dom": 3}}}"#).unwrap();
        let err = decode_twisted(&v, &["groupoid"]).err().unwrap();
        assert_eq!(err.pointer.as_deref(), Some("/groupoid/psi/dom"));
    }

    #[test]
    fn pointer_segments_are_escaped() {
        assert_eq!(escape("a/b~c"), "a~1b~0c");
    }
}
