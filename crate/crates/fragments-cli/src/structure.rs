//! Structure files.
//!
//! ```json
//! {
//!   "universe_size": 2,
//!   "predicates": { "p": [[0, 1], [1, 1]] },
//!   "constants": { "c": 0 },
//!   "functions": { "f": [1, 0] }
//! }
//! ```
//!
//! A predicate lists its true tuples. A function table lists the values for
//! all argument tuples in row-major order, first argument most significant.

use std::collections::BTreeMap;

use fragments_core::model::{FiniteStructure, Signature};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub universe_size: usize,
    #[serde(default)]
    pub predicates: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub constants: BTreeMap<String, usize>,
    #[serde(default)]
    pub functions: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, thiserror::Error)]
pub enum StructureError {
    #[error("invalid structure JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid structure: {0}")]
    Invalid(String),
}

pub fn to_file(a: &FiniteStructure) -> StructureFile {
    let mut out = StructureFile {
        universe_size: a.size,
        predicates: BTreeMap::new(),
        constants: BTreeMap::new(),
        functions: BTreeMap::new(),
    };
    for (p, _) in &a.signature.predicates {
        out.predicates.insert(p.clone(), a.relation_tuples(p).unwrap_or_default());
    }
    for (i, (f, k)) in a.signature.functions.iter().enumerate() {
        if *k == 0 {
            out.constants.insert(f.clone(), a.tables[i][0]);
        } else {
            out.functions.insert(f.clone(), a.tables[i].clone());
        }
    }
    out
}

pub fn to_json(a: &FiniteStructure) -> serde_json::Value {
    serde_json::to_value(to_file(a)).expect("structure is plain data")
}

/// Builds a structure. Arities come from `hint` when it names the symbol,
/// otherwise from the tuples or the table length.
pub fn from_json(text: &str, hint: &Signature) -> Result<FiniteStructure, StructureError> {
    let file: StructureFile = serde_json::from_str(text)?;
    let n = file.universe_size;
    if n == 0 {
        return Err(StructureError::Invalid("universe_size must be positive".into()));
    }
    let arity_of = |list: &[(String, usize)], name: &str| list.iter().find(|(s, _)| s == name).map(|(_, k)| *k);

    let mut sig = Signature::default();
    for (p, tuples) in &file.predicates {
        let k = match arity_of(&hint.predicates, p) {
            Some(k) => k,
            None => match tuples.first() {
                Some(t) => t.len(),
                None => return Err(StructureError::Invalid(format!("cannot infer the arity of `{p}`"))),
            },
        };
        sig.add_predicate(p, k);
    }
    for c in file.constants.keys() {
        sig.add_function(c, 0);
    }
    for (f, table) in &file.functions {
        let k = match arity_of(&hint.functions, f) {
            Some(k) => k,
            None => (1..=8)
                .find(|&k| n.checked_pow(k as u32) == Some(table.len()))
                .ok_or_else(|| StructureError::Invalid(format!("table of `{f}` has {} entries", table.len())))?,
        };
        sig.add_function(f, k);
    }
    for (name, k) in hint.predicates.iter().chain(&hint.functions) {
        let present = file.predicates.contains_key(name) || file.constants.contains_key(name) || file.functions.contains_key(name);
        if !present {
            return Err(StructureError::Invalid(format!("no interpretation for `{name}/{k}`")));
        }
    }

    let mut a = FiniteStructure::new(sig, n);
    for (p, tuples) in &file.predicates {
        let k = arity_of(&a.signature.predicates, p).unwrap();
        for t in tuples {
            if t.len() != k || t.iter().any(|&e| e >= n) {
                return Err(StructureError::Invalid(format!("bad tuple {t:?} for `{p}/{k}`")));
            }
            a.set(p, t, true);
        }
    }
    for (c, &e) in &file.constants {
        if e >= n {
            return Err(StructureError::Invalid(format!("constant `{c}` maps outside the universe")));
        }
        a.set_function(c, &[], e);
    }
    for (f, table) in &file.functions {
        let k = arity_of(&a.signature.functions, f).unwrap();
        if Some(table.len()) != n.checked_pow(k as u32) || table.iter().any(|&e| e >= n) {
            return Err(StructureError::Invalid(format!("bad table for `{f}/{k}`")));
        }
        for (i, &v) in table.iter().enumerate() {
            let args = a.tuple_at(i, k);
            a.set_function(f, &args, v);
        }
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FiniteStructure {
        let mut a = FiniteStructure::new(Signature::new(&[("p", 2), ("q", 0)], &[("c", 0), ("f", 1)]), 2);
        a.set("p", &[0, 1], true);
        a.set("q", &[], true);
        a.set_function("c", &[], 1);
        a.set_function("f", &[0], 1);
        a
    }

    #[test]
    fn round_trip() {
        let a = sample();
        let text = serde_json::to_string(&to_json(&a)).unwrap();
        assert_eq!(
            text,
            r#"{"constants":{"c":1},"functions":{"f":[1,0]},"predicates":{"p":[[0,1]],"q":[[]]},"universe_size":2}"#
        );
        assert_eq!(from_json(&text, &Signature::default()).unwrap(), a);
    }

    #[test]
    fn hint_supplies_arity_of_empty_relations() {
        let text = r#"{"universe_size": 1, "predicates": {"r": []}}"#;
        assert!(from_json(text, &Signature::default()).is_err());
        let a = from_json(text, &Signature::new(&[("r", 3)], &[])).unwrap();
        assert_eq!(a.holds("r", &[0, 0, 0]), Some(false));
    }

    #[test]
    fn rejects_bad_input() {
        let sig = Signature::default();
        assert!(from_json(r#"{"universe_size": 0}"#, &sig).is_err());
        assert!(from_json(r#"{"universe_size": 2, "constants": {"c": 2}}"#, &sig).is_err());
        assert!(from_json(r#"{"universe_size": 2, "functions": {"f": [0, 1, 0]}}"#, &sig).is_err());
        assert!(from_json(r#"{"universe_size": 1}"#, &Signature::new(&[("p", 1)], &[])).is_err());
        assert!(from_json(r#"{"universe_size": 1, "extra": 1}"#, &sig).is_err());
    }
}
