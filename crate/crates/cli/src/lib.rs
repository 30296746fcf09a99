//! Document parsing and report assembly for the command-line front end.
//!
//! A graph document is JSON with a group name, vertex ids, edges as id
//! pairs, and one permutation map per group generator; the remaining group
//! elements are derived by composition.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cylrig::graph::{GroupName, GroupSpec, SymOp, SymmetricGraph};

/// The on-disk graph document.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphDocument {
    pub group: String,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub action: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug)]
pub enum DocError {
    Schema(String),
    Validation(String),
}

impl std::fmt::Display for DocError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DocError::Schema(m) => write!(f, "schema error: {m}"),
            DocError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

fn generator_key(op: SymOp) -> &'static str {
    match op {
        SymOp::Inversion => "inv",
        SymOp::SigmaAxial => "sigma",
        SymOp::SigmaHorizontal => "sigma_p",
        SymOp::HalfturnPerp => "c2p",
        SymOp::RotationZ(2) => "c2z",
        _ => unreachable!("not a generator"),
    }
}

/// Required generator keys per group; other elements derive by composition.
pub fn generators(name: GroupName) -> Vec<SymOp> {
    match name {
        GroupName::Trivial => vec![],
        GroupName::Ci => vec![SymOp::Inversion],
        GroupName::CsAxial => vec![SymOp::SigmaAxial],
        GroupName::CsHorizontal => vec![SymOp::SigmaHorizontal],
        GroupName::C2 => vec![SymOp::HalfturnPerp],
        GroupName::C2v => vec![SymOp::SigmaAxial, SymOp::SigmaHorizontal],
        GroupName::C2h => vec![SymOp::SigmaAxial, SymOp::HalfturnPerp],
        GroupName::C2z => vec![SymOp::RotationZ(2)],
    }
}

/// Parse and validate a document into a symmetric graph.
pub fn parse_document(bytes: &[u8]) -> Result<SymmetricGraph, DocError> {
    let doc: GraphDocument = serde_json::from_slice(bytes)
        .map_err(|e| DocError::Schema(format!("malformed JSON: {e}")))?;
    graph_from_document(&doc)
}

pub fn graph_from_document(doc: &GraphDocument) -> Result<SymmetricGraph, DocError> {
    let name = GroupName::parse(&doc.group)
        .ok_or_else(|| DocError::Schema(format!("unknown group {:?}", doc.group)))?;
    let group = GroupSpec::new(name);
    let gens = generators(name);
    let mut perms: BTreeMap<SymOp, Vec<u32>> = BTreeMap::new();
    let index: BTreeMap<&str, u32> = doc
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i as u32))
        .collect();
    if index.len() != doc.vertices.len() {
        return Err(DocError::Schema("duplicate vertex id".into()));
    }
    for &op in &gens {
        let key = generator_key(op);
        let map = doc.action.get(key).ok_or_else(|| {
            DocError::Schema(format!(
                "group {} requires generator {key:?} in \"action\"",
                doc.group
            ))
        })?;
        let mut perm = vec![u32::MAX; doc.vertices.len()];
        for (from, to) in map {
            let i = *index
                .get(from.as_str())
                .ok_or_else(|| DocError::Schema(format!("unknown vertex {from:?}")))?;
            let j = *index
                .get(to.as_str())
                .ok_or_else(|| DocError::Schema(format!("unknown vertex {to:?}")))?;
            perm[i as usize] = j;
        }
        if perm.contains(&u32::MAX) {
            return Err(DocError::Schema(format!(
                "generator {key:?} does not cover every vertex"
            )));
        }
        perms.insert(op, perm);
    }
    // derive the non-generator elements by composing generators
    for &op in group.non_identity() {
        if perms.contains_key(&op) {
            continue;
        }
        let mut found = None;
        for &a in &gens {
            for &b in &gens {
                if group.compose(a, b) == Some(op) {
                    found = Some((a, b));
                }
            }
        }
        let (a, b) = found.ok_or_else(|| {
            DocError::Schema(format!("cannot derive element {op} from the generators"))
        })?;
        let pa = perms[&a].clone();
        let pb = perms[&b].clone();
        let composed: Vec<u32> = (0..pa.len()).map(|v| pa[pb[v] as usize]).collect();
        perms.insert(op, composed);
    }
    let action: Vec<Vec<u32>> = group
        .non_identity()
        .iter()
        .map(|op| perms[op].clone())
        .collect();
    let mut edges = Vec::new();
    for (a, b) in &doc.edges {
        let i = *index
            .get(a.as_str())
            .ok_or_else(|| DocError::Schema(format!("unknown vertex {a:?} in edge")))?;
        let j = *index
            .get(b.as_str())
            .ok_or_else(|| DocError::Schema(format!("unknown vertex {b:?} in edge")))?;
        edges.push(cylrig::graph::edge(i, j));
    }
    let graph = SymmetricGraph::from_indices(group, doc.vertices.clone(), edges, action);
    let report = graph.validate();
    if !report.ok() {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.message.clone()).collect();
        return Err(DocError::Validation(msgs.join("; ")));
    }
    Ok(graph)
}

/// Canonical document form: sorted ids, sorted edge pairs, generator maps.
pub fn serialize_document(graph: &SymmetricGraph) -> GraphDocument {
    let name = graph.group().name;
    let mut vertices: Vec<String> = graph.vertex_ids().to_vec();
    vertices.sort();
    let mut edges: Vec<(String, String)> = graph
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (graph.vertex_id(a), graph.vertex_id(b));
            if x <= y {
                (x.to_string(), y.to_string())
            } else {
                (y.to_string(), x.to_string())
            }
        })
        .collect();
    edges.sort();
    let mut action = BTreeMap::new();
    for op in generators(name) {
        let mut map = BTreeMap::new();
        for v in 0..graph.vertex_count() as u32 {
            map.insert(
                graph.vertex_id(v).to_string(),
                graph.vertex_id(graph.apply(op, v)).to_string(),
            );
        }
        action.insert(generator_key(op).to_string(), map);
    }
    GraphDocument {
        group: name.as_str().to_string(),
        vertices,
        edges,
        action,
    }
}

/// Witness/verdict payloads use vertex ids, not indices.
pub fn ids(graph: &SymmetricGraph, vs: &[u32]) -> Vec<String> {
    let mut out: Vec<String> = vs.iter().map(|&v| graph.vertex_id(v).to_string()).collect();
    out.sort();
    out
}

pub fn gamma_report_json(graph: &SymmetricGraph, r: &cylrig::sparsity::GammaTightReport) -> Value {
    json!({
        "tight": r.tight,
        "sufficient": r.sufficient,
        "sparse": r.sparsity.sparse,
        "count_tight": r.sparsity.tight,
        "witness": r.sparsity.witness.as_ref().map(|w| ids(graph, w)),
        "reasons": r.reasons,
        "fixed_counts": serde_json::to_value(r.counts).unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cylrig::catalog;

    #[test]
    fn parse_serialize_roundtrip_is_identity_on_canonical_documents() {
        for entry in catalog::catalog() {
            let doc = serialize_document(&entry.graph);
            let text = serde_json::to_string_pretty(&doc).unwrap();
            let graph = parse_document(text.as_bytes()).unwrap();
            let doc2 = serialize_document(&graph);
            assert_eq!(doc, doc2, "{}", entry.id);
        }
    }

    #[test]
    fn missing_generator_is_a_schema_error() {
        let text = r#"{"group":"Ci","vertices":["a","b"],"edges":[],"action":{}}"#;
        match parse_document(text.as_bytes()) {
            Err(DocError::Schema(m)) => assert!(m.contains("inv")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn non_automorphism_action_is_a_validation_error() {
        let text = r#"{
            "group": "Ci",
            "vertices": ["a", "b", "c", "d"],
            "edges": [["a", "b"], ["c", "d"], ["a", "c"]],
            "action": {"inv": {"a": "b", "b": "a", "c": "d", "d": "c"}}
        }"#;
        match parse_document(text.as_bytes()) {
            Err(DocError::Validation(m)) => assert!(m.contains("automorphism")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn c2v_document_derives_the_halfturn() {
        let text = r#"{
            "group": "C2v",
            "vertices": ["a", "b", "c", "d"],
            "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["a", "d"]],
            "action": {
                "sigma": {"a": "d", "b": "c", "c": "b", "d": "a"},
                "sigma_p": {"a": "b", "b": "a", "c": "d", "d": "c"}
            }
        }"#;
        let g = parse_document(text.as_bytes()).unwrap();
        assert_eq!(g.group().name, GroupName::C2v);
        let a = g.vertex_index("a").unwrap();
        let c = g.vertex_index("c").unwrap();
        assert_eq!(g.apply(SymOp::HalfturnPerp, a), c);
    }
}
