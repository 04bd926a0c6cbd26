//! JSON instance files.
//!
//! ```json
//! {
//!   "vertices": [{"id": "a", "weight": 1}, ...],
//!   "edges": [{"id": "e1", "u": "a", "v": "u", "length": 2, "cost": "5",
//!              "inc_bound": "10", "dec_bound": "1/2"}, ...],
//!   "targets": ["a", "b"],
//!   "objective": "chebyshev"
//! }
//! ```
//!
//! Ids are strings or integers. Numbers are JSON numbers or strings holding
//! an integer, a decimal or `p/q`; both are read exactly. `weight` defaults
//! to 1 and `objective` is optional.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use invmaxian::rational::{parse_rational, to_exact_string};
use invmaxian::{InverseInstance, Objective, Rational, Tree};
use num_traits::{One, Signed};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("PARSE_ERROR at {at}: {message}")]
    Parse { at: String, message: String },
    #[error("VALIDATION_ERROR: {0}")]
    Validation(String),
}

fn parse_err(at: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Parse { at: at.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Id {
    Int(i64),
    Text(String),
}

impl Id {
    fn from_json(value: &Value, at: &str) -> Result<Id, FormatError> {
        match value {
            Value::String(s) => Ok(Id::Text(s.clone())),
            Value::Number(n) => n
                .to_string()
                .parse()
                .map(Id::Int)
                .map_err(|_| parse_err(at, format!("id {n} is not an integer"))),
            other => Err(parse_err(at, format!("expected a string or integer id, found {other}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Id::Int(i) => Value::from(*i),
            Id::Text(s) => Value::from(s.as_str()),
        }
    }

    /// Matches a command-line argument against this id.
    pub fn matches(&self, text: &str) -> bool {
        match self {
            Id::Int(i) => text.parse::<i64>() == Ok(*i),
            Id::Text(s) => s == text,
        }
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Id::Int(i) => write!(f, "{i}"),
            Id::Text(s) => f.write_str(s),
        }
    }
}

/// An instance together with the ids it was written with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub vertex_ids: Vec<Id>,
    pub edge_ids: Vec<Id>,
    pub instance: InverseInstance,
    /// Objective named in the file, if any.
    pub objective: Option<Objective>,
}

impl InstanceFile {
    /// Default ids `v0..` and `e0..` in index order.
    pub fn with_default_ids(instance: InverseInstance, objective: Option<Objective>) -> Self {
        let vertex_ids = (0..instance.tree.vertex_count()).map(|i| Id::Text(format!("v{i}"))).collect();
        let edge_ids = (0..instance.tree.edge_count()).map(|e| Id::Text(format!("e{e}"))).collect();
        InstanceFile { vertex_ids, edge_ids, instance, objective }
    }

    pub fn vertex_index(&self, text: &str) -> Option<usize> {
        self.vertex_ids.iter().position(|id| id.matches(text))
    }

    pub fn to_json(&self) -> Value {
        let inst = &self.instance;
        let tree = &inst.tree;
        let num = |x: &Rational| Value::from(to_exact_string(x));
        let vertices: Vec<Value> = self
            .vertex_ids
            .iter()
            .zip(tree.weights())
            .map(|(id, w)| object([("id", id.to_json()), ("weight", num(w))]))
            .collect();
        let edges: Vec<Value> = (0..tree.edge_count())
            .map(|e| {
                let (u, v) = tree.ends()[e];
                object([
                    ("id", self.edge_ids[e].to_json()),
                    ("u", self.vertex_ids[u].to_json()),
                    ("v", self.vertex_ids[v].to_json()),
                    ("length", num(&tree.lengths()[e])),
                    ("cost", num(&inst.costs[e])),
                    ("inc_bound", num(&inst.inc_bounds[e])),
                    ("dec_bound", num(&inst.dec_bounds[e])),
                ])
            })
            .collect();
        let targets: Vec<Value> = inst.targets.iter().map(|&t| self.vertex_ids[t].to_json()).collect();
        let mut doc = object([
            ("vertices", Value::from(vertices)),
            ("edges", Value::from(edges)),
            ("targets", Value::from(targets)),
        ]);
        if let Some(objective) = self.objective {
            doc["objective"] = Value::from(objective.name());
        }
        doc
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("values serialize") + "\n"
    }
}

fn object<const N: usize>(fields: [(&str, Value); N]) -> Value {
    Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, at: &str) -> Result<&'a Value, FormatError> {
    obj.get(key).ok_or_else(|| parse_err(at, format!("missing field `{key}`")))
}

fn as_object<'a>(value: &'a Value, at: &str) -> Result<&'a Map<String, Value>, FormatError> {
    value.as_object().ok_or_else(|| parse_err(at, "expected an object"))
}

fn as_array<'a>(value: &'a Value, at: &str) -> Result<&'a Vec<Value>, FormatError> {
    value.as_array().ok_or_else(|| parse_err(at, "expected an array"))
}

pub fn parse_number(value: &Value, at: &str) -> Result<Rational, FormatError> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(parse_err(at, format!("expected a number, found {other}"))),
    };
    parse_rational(&text).map_err(|e| parse_err(at, e.to_string()))
}

fn nonnegative(value: Rational, at: &str) -> Result<Rational, FormatError> {
    if value.is_negative() {
        Err(FormatError::Validation(format!("negative datum {at} = {value}")))
    } else {
        Ok(value)
    }
}

/// Parses and validates an instance document.
pub fn parse_instance_str(text: &str) -> Result<InstanceFile, FormatError> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let root = as_object(&doc, "document")?;
    for key in root.keys() {
        if !["vertices", "edges", "targets", "objective"].contains(&key.as_str()) {
            return Err(parse_err(key.as_str(), "unknown field"));
        }
    }

    let mut vertex_ids = Vec::new();
    let mut weights = Vec::new();
    let mut index: HashMap<Id, usize> = HashMap::new();
    for (i, v) in as_array(field(root, "vertices", "document")?, "vertices")?.iter().enumerate() {
        let at = format!("vertices[{i}]");
        let obj = as_object(v, &at)?;
        let id = Id::from_json(field(obj, "id", &at)?, &format!("{at}.id"))?;
        let weight = match obj.get("weight") {
            Some(w) => nonnegative(parse_number(w, &format!("{at}.weight"))?, &format!("{at}.weight (vertex {id})"))?,
            None => Rational::one(),
        };
        if index.insert(id.clone(), i).is_some() {
            return Err(FormatError::Validation(format!("duplicate vertex id {id}")));
        }
        vertex_ids.push(id);
        weights.push(weight);
    }
    let lookup = |value: &Value, at: &str| -> Result<usize, FormatError> {
        let id = Id::from_json(value, at)?;
        index.get(&id).copied().ok_or_else(|| FormatError::Validation(format!("{at}: unknown vertex {id}")))
    };

    let mut edge_ids = Vec::new();
    let (mut ends, mut lengths, mut costs, mut inc, mut dec) = (vec![], vec![], vec![], vec![], vec![]);
    let mut seen: BTreeMap<(usize, usize), Id> = BTreeMap::new();
    let mut edge_index: HashMap<Id, usize> = HashMap::new();
    for (e, item) in as_array(field(root, "edges", "document")?, "edges")?.iter().enumerate() {
        let at = format!("edges[{e}]");
        let obj = as_object(item, &at)?;
        let id = Id::from_json(field(obj, "id", &at)?, &format!("{at}.id"))?;
        if edge_index.insert(id.clone(), e).is_some() {
            return Err(FormatError::Validation(format!("duplicate edge id {id}")));
        }
        let u = lookup(field(obj, "u", &at)?, &format!("{at}.u"))?;
        let v = lookup(field(obj, "v", &at)?, &format!("{at}.v"))?;
        if u == v {
            return Err(FormatError::Validation(format!("not a tree: edge {id} is a loop at {}", vertex_ids[u])));
        }
        if let Some(other) = seen.insert((u.min(v), u.max(v)), id.clone()) {
            return Err(FormatError::Validation(format!(
                "not a tree: edges {other} and {id} both join {} and {}",
                vertex_ids[u], vertex_ids[v]
            )));
        }
        let number = |key: &str| -> Result<Rational, FormatError> {
            let value = parse_number(field(obj, key, &at)?, &format!("{at}.{key}"))?;
            nonnegative(value, &format!("{at}.{key} (edge {id})"))
        };
        let length = number("length")?;
        if !length.is_positive() {
            return Err(FormatError::Validation(format!("edge {id} has length {length}; lengths must be positive")));
        }
        ends.push((u, v));
        lengths.push(length);
        costs.push(number("cost")?);
        inc.push(number("inc_bound")?);
        dec.push(number("dec_bound")?);
        edge_ids.push(id);
    }

    let mut targets = Vec::new();
    for (i, t) in as_array(field(root, "targets", "document")?, "targets")?.iter().enumerate() {
        let at = format!("targets[{i}]");
        let v = lookup(t, &at)?;
        if targets.contains(&v) {
            return Err(FormatError::Validation(format!("target {} listed twice", vertex_ids[v])));
        }
        targets.push(v);
    }
    let objective = match root.get("objective") {
        None | Some(Value::Null) => None,
        Some(Value::String(name)) => Some(
            Objective::from_name(name).ok_or_else(|| parse_err("objective", format!("unknown objective {name:?}")))?,
        ),
        Some(other) => return Err(parse_err("objective", format!("expected a string, found {other}"))),
    };

    let tree = Tree::new(weights, ends, lengths).map_err(|e| FormatError::Validation(e.to_string()))?;
    for &t in &targets {
        if !tree.is_leaf(t) {
            return Err(FormatError::Validation(format!("target {} is not a leaf", vertex_ids[t])));
        }
    }
    let instance = InverseInstance::new(tree, targets, costs, inc, dec, objective.unwrap_or(Objective::L1))
        .map_err(|e| FormatError::Validation(e.to_string()))?;
    Ok(InstanceFile { vertex_ids, edge_ids, instance, objective })
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Format(#[from] FormatError),
}

pub fn parse_instance(path: &Path) -> Result<InstanceFile, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    Ok(parse_instance_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use invmaxian::random::{random_instance, InstanceParams};
    use invmaxian::rational::{frac, int};
    use proptest::prelude::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn minimal_instance() {
        let text = r#"{
            "vertices": [{"id": 1}, {"id": 2}],
            "edges": [{"id": "e", "u": 1, "v": 2, "length": 3, "cost": 1, "inc_bound": 0, "dec_bound": 0}],
            "targets": [1, 2]
        }"#;
        let file = parse_instance_str(text).unwrap();
        assert_eq!(file.instance.tree.edge_count(), 1);
        assert_eq!(file.vertex_ids, vec![Id::Int(1), Id::Int(2)]);
        assert_eq!(file.objective, None);
        assert_eq!(file.instance.objective, Objective::L1);
    }

    #[test]
    fn numbers_are_exact() {
        let text = r#"{
            "vertices": [{"id": "a", "weight": 0.1}, {"id": "b", "weight": "2/6"}],
            "edges": [{"id": "e", "u": "a", "v": "b", "length": 0.30000000000000000001,
                       "cost": "1e-2", "inc_bound": "7", "dec_bound": 12345678901234567890123}],
            "targets": ["a", "b"]
        }"#;
        let inst = parse_instance_str(text).unwrap().instance;
        assert_eq!(inst.tree.weights(), &[frac(1, 10), frac(1, 3)]);
        assert_eq!(inst.tree.lengths()[0], parse_rational("0.30000000000000000001").unwrap());
        assert_eq!(inst.costs[0], frac(1, 100));
        assert_eq!(inst.dec_bounds[0], parse_rational("12345678901234567890123").unwrap());
        assert_eq!(inst.inc_bounds[0], int(7));
    }

    fn star_doc(edges: &str, targets: &str) -> String {
        format!(
            r#"{{"vertices": [{{"id": "c"}}, {{"id": "x"}}, {{"id": "y"}}, {{"id": "z"}}],
                "edges": [{edges}], "targets": [{targets}]}}"#
        )
    }

    fn edge(id: &str, u: &str, v: &str, length: &str) -> String {
        format!(r#"{{"id": "{id}", "u": "{u}", "v": "{v}", "length": {length}, "cost": 1, "inc_bound": 1, "dec_bound": 1}}"#)
    }

    fn validation(text: &str) -> String {
        match parse_instance_str(text) {
            Err(FormatError::Validation(m)) => m,
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_edge_is_not_a_tree() {
        let edges = [edge("e1", "c", "x", "1"), edge("e2", "x", "c", "1"), edge("e3", "c", "y", "1")].join(",");
        let m = validation(&star_doc(&edges, r#""x", "y""#));
        assert!(m.starts_with("not a tree"), "{m}");
        assert!(m.contains("e1") && m.contains("e2"));
    }

    #[test]
    fn cycle_and_disconnection() {
        let cycle = [edge("e1", "c", "x", "1"), edge("e2", "x", "y", "1"), edge("e3", "y", "c", "1")].join(",");
        assert!(validation(&star_doc(&cycle, r#""x", "y""#)).starts_with("not a tree"));
        let short = [edge("e1", "c", "x", "1"), edge("e2", "c", "y", "1")].join(",");
        assert!(validation(&star_doc(&short, r#""x", "y""#)).starts_with("not a tree"));
    }

    #[test]
    fn bad_data() {
        let ok = [edge("e1", "c", "x", "1"), edge("e2", "c", "y", "1"), edge("e3", "c", "z", "1")];
        assert!(validation(&star_doc(&ok.join(","), r#""x", "c""#)).contains("target c is not a leaf"));
        let neg = [edge("e1", "c", "x", "\"-1/2\""), ok[1].clone(), ok[2].clone()].join(",");
        assert!(validation(&star_doc(&neg, r#""x", "y""#)).contains("edges[0].length"));
        let zero = [edge("e1", "c", "x", "0"), ok[1].clone(), ok[2].clone()].join(",");
        assert!(validation(&star_doc(&zero, r#""x", "y""#)).contains("must be positive"));
        let unknown = [edge("e1", "c", "w", "1"), ok[1].clone(), ok[2].clone()].join(",");
        assert!(validation(&star_doc(&unknown, r#""x", "y""#)).contains("unknown vertex w"));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse_instance_str("{\n  \"vertices\": [\n  oops\n]}").unwrap_err();
        assert!(err.to_string().starts_with("PARSE_ERROR at line 3"), "{err}");
        let bad = edge("e1", "c", "x", "\"abc\"");
        let err = parse_instance_str(&star_doc(&bad, r#""x", "y""#)).unwrap_err();
        assert!(err.to_string().starts_with("PARSE_ERROR at edges[0].length"), "{err}");
        let err = parse_instance_str(r#"{"vertices": [], "edges": [], "targets": [], "extra": 1}"#).unwrap_err();
        assert!(err.to_string().contains("extra"));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]

        #[test]
        fn round_trip(seed in any::<u64>(), n in 2usize..40, den in 1u64..5, named in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let params = InstanceParams::new(n).max_denominator(den).max_weight(3).targets(2 + seed as usize % 3);
            let mut inst = random_instance(&mut rng, &params);
            if named {
                inst = inst.with_objective(Objective::Chebyshev);
            }
            let mut file = InstanceFile::with_default_ids(inst, named.then_some(Objective::Chebyshev));
            if !named {
                file.vertex_ids = (0..file.vertex_ids.len() as i64).map(|i| Id::Int(100 - i)).collect();
            }
            let back = parse_instance_str(&file.to_json_string()).unwrap();
            prop_assert_eq!(back, file);
        }
    }
}
