//! JSON file formats.
//!
//! Instance:
//!
//! ```json
//! {"num_labels": 3,
//!  "nodes": [{"name": "u", "costs": ["inf", 0, 0]}],
//!  "edges": [{"u": "u", "v": "v", "weight": 5}]}
//! ```
//!
//! Numbers may be JSON numbers, decimal strings (`"1.5"`) or fraction
//! strings (`"3/2"`); costs may also be `"inf"`.
//!
//! Fractional solution:
//!
//! ```json
//! {"nodes": [{"name": "u", "values": ["0", "1/2", "1/2"]}]}
//! ```

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fractional::FractionalSolution;
use crate::instance::{Instance, RawCost};
use crate::rational::{self, Rational};

#[derive(Debug, Deserialize, Serialize)]
struct InstanceFile {
    num_labels: usize,
    nodes: Vec<NodeEntry>,
    #[serde(default)]
    edges: Vec<EdgeEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
struct NodeEntry {
    name: String,
    costs: Vec<Value>,
}

#[derive(Debug, Deserialize, Serialize)]
struct EdgeEntry {
    u: String,
    v: String,
    weight: Value,
}

#[derive(Debug, Deserialize, Serialize)]
struct SolutionFile {
    nodes: Vec<SolutionEntry>,
}

#[derive(Debug, Deserialize, Serialize)]
struct SolutionEntry {
    name: String,
    values: Vec<Value>,
}

fn number(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => rational::parse(&n.to_string()),
        Value::String(s) => rational::parse(s),
        other => Err(Error::parse(format!("expected a number, got {other}"))),
    }
}

fn cost(v: &Value) -> Result<RawCost> {
    if let Value::String(s) = v {
        let t = s.trim().to_ascii_lowercase();
        if matches!(t.as_str(), "inf" | "infinity" | "+inf" | "∞") {
            return Ok(RawCost::Infinite);
        }
    }
    number(v).map(RawCost::Finite)
}

fn number_value(r: &Rational) -> Value {
    if r.is_integer() {
        if let Ok(i) = i64::try_from(r.numer()) {
            return Value::from(i);
        }
    }
    Value::String(rational::to_fraction_string(r))
}

/// Parses an instance from JSON text.
pub fn parse_instance(text: &str) -> Result<Instance> {
    parse_instance_with_big_m(text, None)
}

/// Parses an instance, replacing infinite costs with `big_m` if given.
pub fn parse_instance_with_big_m(text: &str, big_m: Option<Rational>) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let names: Vec<String> = file.nodes.iter().map(|n| n.name.clone()).collect();
    let index = |name: &str| {
        names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::validation(format!("edge refers to unknown node {name:?}")))
    };
    let costs = file
        .nodes
        .iter()
        .map(|n| n.costs.iter().map(cost).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let edges = file
        .edges
        .iter()
        .map(|e| Ok((index(&e.u)?, index(&e.v)?, number(&e.weight)?)))
        .collect::<Result<Vec<_>>>()?;
    Instance::from_raw(file.num_labels, Some(names.clone()), costs, edges, big_m)
}

pub fn read_instance(path: impl AsRef<std::path::Path>) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Serializes an instance. Integers are written as JSON numbers and other
/// rationals as fraction strings, so the output re-parses exactly.
pub fn instance_to_json(inst: &Instance) -> String {
    let file = InstanceFile {
        num_labels: inst.num_labels(),
        nodes: inst
            .names()
            .iter()
            .zip(inst.costs())
            .map(|(name, row)| NodeEntry {
                name: name.clone(),
                costs: row.iter().map(number_value).collect(),
            })
            .collect(),
        edges: inst
            .edges()
            .iter()
            .map(|e| EdgeEntry {
                u: inst.names()[e.u].clone(),
                v: inst.names()[e.v].clone(),
                weight: number_value(&e.weight),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("instance serializes");
    text.push('\n');
    text
}

/// Parses a fractional solution whose node names must match `inst`.
pub fn parse_fractional(inst: &Instance, text: &str) -> Result<FractionalSolution> {
    let file: SolutionFile = serde_json::from_str(text)?;
    let mut rows: Vec<Option<Vec<Rational>>> = vec![None; inst.num_nodes()];
    for entry in &file.nodes {
        let u = inst
            .node_index(&entry.name)
            .ok_or_else(|| Error::validation(format!("unknown node {:?}", entry.name)))?;
        if rows[u].is_some() {
            return Err(Error::validation(format!("node {:?} listed twice", entry.name)));
        }
        rows[u] = Some(entry.values.iter().map(number).collect::<Result<Vec<_>>>()?);
    }
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(u, r)| r.ok_or_else(|| Error::validation(format!("node {:?} missing", inst.names()[u]))))
        .collect::<Result<Vec<_>>>()?;
    let s = FractionalSolution::new(rows)?;
    s.check_shape(inst)?;
    Ok(s)
}

pub fn fractional_to_json(inst: &Instance, s: &FractionalSolution) -> String {
    let file = SolutionFile {
        nodes: inst
            .names()
            .iter()
            .zip(s.rows())
            .map(|(name, row)| SolutionEntry {
                name: name.clone(),
                values: row
                    .iter()
                    .map(|x| Value::String(rational::to_fraction_string(x)))
                    .collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("solution serializes");
    text.push('\n');
    text
}
