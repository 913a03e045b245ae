use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fuglede_core::{standard_h12, standard_h6, ButsonMatrix, GroupElement, GroupSpec};
use serde_json::Value;

/// Reads `arg` as a file when one exists at that path, otherwise as inline text.
fn read_text(arg: &str) -> Result<String> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    } else {
        Ok(arg.to_string())
    }
}

/// Parses JSON, also accepting `{a,b}` brace notation for sets.
fn parse_json(text: &str, what: &str) -> Result<Value> {
    let normalized = text.replace('{', "[").replace('}', "]");
    serde_json::from_str(&normalized).with_context(|| format!("parsing {what}"))
}

fn element(g: &GroupSpec, v: &Value) -> Result<GroupElement> {
    let coords: Vec<u32> = match v {
        Value::Number(_) if g.dimension() == 1 => vec![as_u32(v)?],
        Value::Array(items) => items.iter().map(as_u32).collect::<Result<_>>()?,
        other => bail!("expected an element of {g}, found {other}"),
    };
    let x = GroupElement(coords);
    g.validate(&x)?;
    Ok(x)
}

fn as_u32(v: &Value) -> Result<u32> {
    v.as_u64()
        .and_then(|n| u32::try_from(n).ok())
        .with_context(|| format!("expected a nonnegative coordinate, found {v}"))
}

fn set_from_value(g: &GroupSpec, v: &Value) -> Result<Vec<GroupElement>> {
    match v {
        Value::Array(items) => items.iter().map(|x| element(g, x)).collect(),
        other => bail!("expected an array of elements, found {other}"),
    }
}

/// A set given inline (`'{0,1}'`, `'[[0,1],[1,0]]'`) or as a JSON file.
pub fn parse_set(g: &GroupSpec, arg: &str, what: &str) -> Result<Vec<GroupElement>> {
    let v = parse_json(&read_text(arg)?, what)?;
    set_from_value(g, &v).with_context(|| format!("reading {what}"))
}

/// A JSON array of sets.
pub fn parse_sets(g: &GroupSpec, arg: &str) -> Result<Vec<Vec<GroupElement>>> {
    let v = parse_json(&read_text(arg)?, "set list")?;
    match &v {
        Value::Array(sets) => sets.iter().map(|s| set_from_value(g, s)).collect(),
        other => bail!("expected an array of sets, found {other}"),
    }
}

/// `h12`, `h6`, or a path to a `{"q": .., "logs": [[..]]}` file.
pub fn load_matrix(arg: &str) -> Result<ButsonMatrix> {
    match arg {
        "h12" => Ok(standard_h12()),
        "h6" => Ok(standard_h6()),
        path => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading matrix file {path}"))?;
            serde_json::from_str(&text).with_context(|| format!("parsing matrix file {path}"))
        }
    }
}
