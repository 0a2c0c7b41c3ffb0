use potts::rational::{to_decimal_string, to_fraction_string};
use potts::{Instance, Labeling, Rational};
use serde_json::{json, Map, Value};

pub const DECIMALS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Human,
    Json,
}

/// What a command produced: a JSON result plus the human rendering of it.
pub struct Outcome {
    pub result: Value,
    pub human: Vec<String>,
    pub exit: u8,
}

impl Outcome {
    pub fn new() -> Self {
        Outcome {
            result: Value::Object(Map::new()),
            human: Vec::new(),
            exit: 0,
        }
    }

    pub fn set(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.result {
            map.insert(key.to_string(), value);
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.human.push(text.into());
    }

    /// Sets `key` and adds an aligned `key: text` line.
    pub fn field(&mut self, key: &str, value: Value, text: impl std::fmt::Display) {
        self.line(format!("{:<18} {}", format!("{key}:"), text));
        self.set(key, value);
    }
}

pub fn number(r: &Rational) -> Value {
    json!({ "fraction": to_fraction_string(r), "decimal": to_decimal_string(r, DECIMALS) })
}

pub fn number_text(r: &Rational) -> String {
    let fraction = to_fraction_string(r);
    let decimal = to_decimal_string(r, DECIMALS);
    if r.is_integer() {
        fraction
    } else {
        format!("{fraction} ({decimal})")
    }
}

pub fn labeling(g: &Labeling) -> Value {
    Value::Array(g.to_one_based().into_iter().map(Value::from).collect())
}

pub fn nodes(inst: &Instance, set: &[usize]) -> Value {
    Value::Array(set.iter().map(|&v| Value::from(inst.names()[v].clone())).collect())
}

pub fn node_text(inst: &Instance, set: &[usize]) -> String {
    let names: Vec<&str> = set.iter().map(|&v| inst.names()[v].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

pub fn digest(inst: &Instance) -> Value {
    json!({
        "nodes": inst.num_nodes(),
        "edges": inst.edges().len(),
        "labels": inst.num_labels(),
    })
}
