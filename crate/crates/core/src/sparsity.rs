//! `(2,2)`-sparsity via the pebble game, addability queries, the brute-force
//! subset oracle, and the symmetry-refined tightness verdict.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{edge, Edge, FixedCounts, GroupName, SymmetricGraph};

/// Verdict of a `(2,2)`-sparsity check. When `sparse` is false the witness is
/// a vertex set `X` with `i(X) > 2|X| - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub sparse: bool,
    pub tight: bool,
    pub witness: Option<Vec<u32>>,
}

#[derive(Debug, Error)]
pub enum SparsityError {
    #[error("({0},{1}) is already an edge")]
    ExistingEdge(u32, u32),
    #[error("loop at vertex {0}")]
    Loop(u32),
    #[error("graph too large for the brute-force oracle (|V| = {0} > 16)")]
    TooLarge(usize),
    #[error("group {0} has no tightness characterization")]
    UnsupportedGroup(GroupName),
}

/// Pebble-game state for the `(k, l) = (2, 2)` sparsity matroid: every vertex
/// starts with two pebbles, accepting an edge costs one and orients it.
///
/// Invariant: total pebbles + accepted edges = `2|V|`, every vertex holds at
/// most two pebbles.
#[derive(Clone, Debug)]
pub struct PebbleState {
    pebbles: Vec<u8>,
    out: Vec<Vec<u32>>,
}

impl PebbleState {
    pub fn new(n: usize) -> PebbleState {
        PebbleState {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
        }
    }

    pub fn pebbles(&self, v: u32) -> u8 {
        self.pebbles[v as usize]
    }

    /// Move one pebble to `start` by reversing a directed path, if some vertex
    /// outside `{a, b}` with a free pebble is reachable.
    fn gather(&mut self, start: u32, a: u32, b: u32) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![u32::MAX; n];
        let mut visited = vec![false; n];
        let mut stack = vec![start];
        visited[start as usize] = true;
        let mut found = None;
        while let Some(v) = stack.pop() {
            if v != a && v != b && self.pebbles[v as usize] > 0 {
                found = Some(v);
                break;
            }
            for &w in &self.out[v as usize] {
                if !visited[w as usize] {
                    visited[w as usize] = true;
                    parent[w as usize] = v;
                    stack.push(w);
                }
            }
        }
        let Some(w) = found else { return false };
        // reverse the path start -> ... -> w
        let mut cur = w;
        while cur != start {
            let p = parent[cur as usize];
            let pos = self.out[p as usize]
                .iter()
                .position(|&x| x == cur)
                .expect("tree edge exists");
            self.out[p as usize].swap_remove(pos);
            self.out[cur as usize].push(p);
            cur = p;
        }
        self.pebbles[w as usize] -= 1;
        self.pebbles[start as usize] += 1;
        true
    }

    /// Try to accept edge `uv`; false means `G + uv` violates `(2,2)`-sparsity.
    pub fn try_insert(&mut self, u: u32, v: u32) -> bool {
        debug_assert_ne!(u, v);
        while (self.pebbles[u as usize] + self.pebbles[v as usize]) < 3 {
            if !(self.gather(u, u, v) || self.gather(v, u, v)) {
                return false;
            }
        }
        // total >= 3 with a cap of 2 forces a pebble at each endpoint
        self.pebbles[u as usize] -= 1;
        self.out[u as usize].push(v);
        true
    }

    /// Vertices reachable from `{u, v}` in the orientation; on a failed
    /// insertion this is the tight witness set.
    pub fn reach_closure(&self, u: u32, v: u32) -> Vec<u32> {
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        let mut stack = vec![u, v];
        seen.insert(u);
        seen.insert(v);
        while let Some(x) = stack.pop() {
            for &w in &self.out[x as usize] {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// Decide `(2,2)`-sparsity and tightness of a plain graph on `n` vertices.
pub fn check_22(n: usize, edges: &[Edge]) -> SparsityReport {
    let mut state = PebbleState::new(n);
    for &(u, v) in edges {
        if u == v {
            return SparsityReport {
                sparse: false,
                tight: false,
                witness: Some(vec![u]),
            };
        }
        if !state.try_insert(u, v) {
            return SparsityReport {
                sparse: false,
                tight: false,
                witness: Some(state.reach_closure(u, v)),
            };
        }
    }
    let tight = edges.len() + 2 == 2 * n;
    SparsityReport {
        sparse: true,
        tight,
        witness: None,
    }
}

pub fn check_22_graph(g: &SymmetricGraph) -> SparsityReport {
    check_22(g.vertex_count(), g.edges())
}

/// True iff `G + uv` stays `(2,2)`-sparse.
pub fn addable(n: usize, edges: &[Edge], u: u32, v: u32) -> Result<bool, SparsityError> {
    if u == v {
        return Err(SparsityError::Loop(u));
    }
    if edges.contains(&edge(u, v)) {
        return Err(SparsityError::ExistingEdge(u, v));
    }
    let mut state = PebbleState::new(n);
    for &(a, b) in edges {
        if !state.try_insert(a, b) {
            return Ok(false);
        }
    }
    Ok(state.try_insert(u, v))
}

/// True iff both edges can be added simultaneously: catches the blockers that
/// reject a pair even when each edge alone would be fine.
pub fn addable_pair(
    n: usize,
    edges: &[Edge],
    e1: Edge,
    e2: Edge,
) -> Result<bool, SparsityError> {
    for &(u, v) in &[e1, e2] {
        if u == v {
            return Err(SparsityError::Loop(u));
        }
        if edges.contains(&edge(u, v)) {
            return Err(SparsityError::ExistingEdge(u, v));
        }
    }
    if edge(e1.0, e1.1) == edge(e2.0, e2.1) {
        return Err(SparsityError::ExistingEdge(e2.0, e2.1));
    }
    let mut state = PebbleState::new(n);
    for &(a, b) in edges {
        if !state.try_insert(a, b) {
            return Ok(false);
        }
    }
    Ok(state.try_insert(e1.0, e1.1) && state.try_insert(e2.0, e2.1))
}

/// Symmetry-refined tightness verdict: `(2,2)`-tight plus the fixed-element
/// constraints of the group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaTightReport {
    pub tight: bool,
    /// False for C2v/C2h, where only the necessary conditions are known.
    pub sufficient: bool,
    pub sparsity: SparsityReport,
    pub counts: FixedCounts,
    pub reasons: Vec<String>,
}

/// Decide `(2,2)`-Γ-tightness. For C2v and C2h the verdict is the
/// necessary-condition check only (`sufficient` comes back false).
pub fn gamma_tight(g: &SymmetricGraph) -> Result<GammaTightReport, SparsityError> {
    let name = g.group().name;
    let sufficient = matches!(
        name,
        GroupName::Ci | GroupName::CsAxial | GroupName::CsHorizontal | GroupName::C2
    );
    if !sufficient && !matches!(name, GroupName::C2v | GroupName::C2h) {
        return Err(SparsityError::UnsupportedGroup(name));
    }
    let sparsity = check_22_graph(g);
    let counts = g.fixed_counts();
    let mut reasons = Vec::new();
    if !sparsity.tight {
        reasons.push(if sparsity.sparse {
            format!(
                "not (2,2)-tight: |E| = {} but 2|V|-2 = {}",
                g.edge_count(),
                2 * g.vertex_count() as i64 - 2
            )
        } else {
            "not (2,2)-sparse".to_string()
        });
    }
    reasons.extend(table3_violations(name, &counts));
    if name == GroupName::C2 && reasons.is_empty() && !c2_free_part_sparse(g) {
        reasons.push(
            "a half-turn-symmetric tight vertex set avoids every fixed element, forcing a \
             symmetric self-stress"
                .into(),
        );
    }
    Ok(GammaTightReport {
        tight: reasons.is_empty(),
        sufficient,
        sparsity,
        counts,
        reasons,
    })
}

/// The half-turn class needs more than the fixed-element counts: a
/// C2-symmetric tight vertex set whose induced subgraph carries no fixed
/// vertex or edge supports a symmetric self-stress at every symmetric
/// placement (its rigidity block loses the two trivial-motion columns on the
/// anti-symmetric side), so no such set may exist. Equivalently, the
/// quotient multigraph of the free part — orbit pairs as vertices, one
/// quotient edge per non-fixed edge orbit away from the fixed elements —
/// must itself be `(2,2)`-sparse, which the pebble game decides.
fn c2_free_part_sparse(g: &SymmetricGraph) -> bool {
    let op = g.group().non_identity()[0];
    let (fixed_v, fixed_e) = match g.fixed_elements(op) {
        Ok(x) => x,
        Err(_) => return true,
    };
    let mut forbidden: std::collections::BTreeSet<u32> = fixed_v.into_iter().collect();
    for (a, b) in fixed_e {
        forbidden.insert(a);
        forbidden.insert(b);
    }
    // orbit representatives of the free part
    let mut rep_index: std::collections::BTreeMap<u32, u32> = Default::default();
    let mut count = 0u32;
    for v in 0..g.vertex_count() as u32 {
        if forbidden.contains(&v) || rep_index.contains_key(&v) {
            continue;
        }
        rep_index.insert(v, count);
        rep_index.insert(g.apply(op, v), count);
        count += 1;
    }
    let mut quotient_edges = Vec::new();
    let mut seen: std::collections::BTreeSet<Edge> = Default::default();
    for &e in g.edges() {
        if seen.contains(&e) {
            continue;
        }
        seen.insert(e);
        seen.insert(g.apply_edge(op, e));
        let (Some(&a), Some(&b)) = (rep_index.get(&e.0), rep_index.get(&e.1)) else {
            continue;
        };
        quotient_edges.push(edge(a, b));
    }
    let mut state = PebbleState::new(count as usize);
    quotient_edges.iter().all(|&(a, b)| state.try_insert(a, b))
}

/// Violations of the per-group fixed-element constraints (the table rows:
/// Ci needs `e_φ = 0`; Cs needs no fixed edge under its mirror; C2 needs
/// `(e_2', v_2') ∈ {(2,0), (0,1)}`; C2v and C2h combine these, with C2h
/// additionally excluding the fixed-vertex branch). Groups without a row
/// contribute nothing.
pub fn table3_violations(name: GroupName, counts: &FixedCounts) -> Vec<String> {
    let mut reasons = Vec::new();
    let c2_branch = |reasons: &mut Vec<String>, allow_fixed_vertex: bool| {
        let ok = (counts.e_2p == 2 && counts.v_2p == 0)
            || (allow_fixed_vertex && counts.e_2p == 0 && counts.v_2p == 1);
        if !ok {
            reasons.push(format!(
                "half-turn fixed counts (e_2' = {}, v_2' = {}) not in the allowed set",
                counts.e_2p, counts.v_2p
            ));
        }
    };
    match name {
        GroupName::Ci => {
            if counts.e_phi != 0 {
                reasons.push(format!(
                    "{} edges fixed by the inversion (must be 0)",
                    counts.e_phi
                ));
            }
        }
        GroupName::CsAxial => {
            if counts.e_sigma != 0 {
                reasons.push(format!(
                    "{} edges fixed by the reflection (must be 0)",
                    counts.e_sigma
                ));
            }
        }
        GroupName::CsHorizontal => {
            if counts.e_sigmap != 0 {
                reasons.push(format!(
                    "{} edges fixed by the reflection (must be 0)",
                    counts.e_sigmap
                ));
            }
        }
        GroupName::C2 => c2_branch(&mut reasons, true),
        GroupName::C2v => {
            if counts.e_sigma != 0 || counts.e_sigmap != 0 {
                reasons.push("an edge is fixed by a reflection (must be none)".into());
            }
            c2_branch(&mut reasons, true);
        }
        GroupName::C2h => {
            if counts.e_sigma != 0 {
                reasons.push("an edge is fixed by the reflection (must be none)".into());
            }
            if counts.e_phi != 0 {
                reasons.push("an edge is fixed by the inversion (must be none)".into());
            }
            c2_branch(&mut reasons, false);
        }
        GroupName::Trivial | GroupName::C2z => {}
    }
    reasons
}

/// Exhaustive subset oracle, identical verdict to [`check_22`]; `|V| <= 16`.
pub fn brute_force_sparse(n: usize, edges: &[Edge]) -> Result<SparsityReport, SparsityError> {
    if n > 16 {
        return Err(SparsityError::TooLarge(n));
    }
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as i64;
        if size < 2 {
            continue;
        }
        let induced = edges
            .iter()
            .filter(|&&(a, b)| (mask >> a) & 1 == 1 && (mask >> b) & 1 == 1)
            .count() as i64;
        if induced > 2 * size - 2 {
            let witness = (0..n as u32).filter(|&v| (mask >> v) & 1 == 1).collect();
            return Ok(SparsityReport {
                sparse: false,
                tight: false,
                witness: Some(witness),
            });
        }
    }
    Ok(SparsityReport {
        sparse: true,
        tight: edges.len() + 2 == 2 * n,
        witness: None,
    })
}
