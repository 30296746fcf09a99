//! Γ-symmetric graphs: cylinder-preserving symmetry operations, the small
//! groups they generate, group actions on graphs, and the orbit /
//! fixed-element / pattern queries every other module builds on.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A cylinder-preserving isometry class (cylinder axis = z-axis).
///
/// `improper_z(2)` is the inversion; the canonical form stores it as
/// [`SymOp::Inversion`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymOp {
    Identity,
    /// Rotation by `2π/n` about the z-axis.
    RotationZ(u32),
    /// Half-turn about an axis perpendicular to the cylinder axis (`c_2'`).
    HalfturnPerp,
    /// Reflection in a plane containing the z-axis (`σ`, canonically xz).
    SigmaAxial,
    /// Reflection in the xy-plane (`σ'`).
    SigmaHorizontal,
    /// Improper rotation `s_n` about the z-axis, `n ≥ 3` (s_2 = inversion).
    ImproperZ(u32),
    /// Inversion in the origin (`φ = s_2`).
    Inversion,
}

impl SymOp {
    /// Canonical form: `improper_z(2)` becomes `Inversion`, `rotation_z(1)`
    /// becomes `Identity`.
    pub fn canonical(self) -> SymOp {
        match self {
            SymOp::ImproperZ(2) => SymOp::Inversion,
            SymOp::RotationZ(1) => SymOp::Identity,
            other => other,
        }
    }

    /// True for operations with no fixed point on the cylinder (inversion and
    /// z-rotations); a validated realizable action may not fix vertices under
    /// these.
    pub fn is_fixed_point_free(self) -> bool {
        matches!(
            self.canonical(),
            SymOp::Inversion | SymOp::RotationZ(_) | SymOp::ImproperZ(_)
        )
    }

    /// Trace of the orthogonal matrix representing the operation.
    pub fn tau_trace(self) -> i64 {
        let d = self.canonical().canonical_matrix();
        d[0] + d[1] + d[2]
    }

    /// The canonical representative as a signed diagonal matrix
    /// `diag(sx, sy, sz)`; every operation appearing in the supported groups
    /// is one (the exact arithmetic path). `rotation_z(n)` with `n ∉ {1, 2}`
    /// has no rational matrix and is rejected at group construction.
    pub fn canonical_matrix(self) -> [i64; 3] {
        match self.canonical() {
            SymOp::Identity => [1, 1, 1],
            SymOp::RotationZ(2) => [-1, -1, 1],
            SymOp::RotationZ(_) | SymOp::ImproperZ(_) => {
                // only ever queried through validated groups, which exclude these
                [1, 1, 1]
            }
            SymOp::HalfturnPerp => [1, -1, -1], // about the x-axis
            SymOp::SigmaAxial => [1, -1, 1],    // xz-plane
            SymOp::SigmaHorizontal => [1, 1, -1], // xy-plane
            SymOp::Inversion => [-1, -1, -1],
        }
    }
}

impl fmt::Display for SymOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymOp::Identity => write!(f, "id"),
            SymOp::RotationZ(n) => write!(f, "c{n}"),
            SymOp::HalfturnPerp => write!(f, "c2'"),
            SymOp::SigmaAxial => write!(f, "sigma"),
            SymOp::SigmaHorizontal => write!(f, "sigma'"),
            SymOp::ImproperZ(n) => write!(f, "s{n}"),
            SymOp::Inversion => write!(f, "phi"),
        }
    }
}

/// The symmetry groups supported on the cylinder.
///
/// `C2z` is the order-two group generated by the half-turn *about* the
/// cylinder axis; it admits no isostatic framework and exists so that the
/// character conditions can exhibit that failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GroupName {
    Trivial,
    Ci,
    CsAxial,
    CsHorizontal,
    C2,
    C2v,
    C2h,
    C2z,
}

impl GroupName {
    pub fn parse(s: &str) -> Option<GroupName> {
        match s {
            "trivial" => Some(GroupName::Trivial),
            "Ci" => Some(GroupName::Ci),
            "Cs_axial" => Some(GroupName::CsAxial),
            "Cs_horizontal" => Some(GroupName::CsHorizontal),
            "C2" => Some(GroupName::C2),
            "C2v" => Some(GroupName::C2v),
            "C2h" => Some(GroupName::C2h),
            "C2_z" => Some(GroupName::C2z),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            GroupName::Trivial => "trivial",
            GroupName::Ci => "Ci",
            GroupName::CsAxial => "Cs_axial",
            GroupName::CsHorizontal => "Cs_horizontal",
            GroupName::C2 => "C2",
            GroupName::C2v => "C2v",
            GroupName::C2h => "C2h",
            GroupName::C2z => "C2_z",
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A symmetry group: an ordered element list (identity first) together with
/// the signed-diagonal isometry assigned to each element.
///
/// The assignment is canonical per group. For `C2h` the half-turn axis is the
/// y-axis rather than the x-axis: with the xz mirror, `σ · c2'(x-axis)` would
/// be `σ'` and the four-element set would not close, while `σ · c2'(y-axis)`
/// is the inversion as required. All choices are conjugate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: GroupName,
    elements: Vec<SymOp>,
    taus: Vec<[i64; 3]>,
}

impl GroupSpec {
    pub fn new(name: GroupName) -> GroupSpec {
        let (elements, taus): (Vec<SymOp>, Vec<[i64; 3]>) = match name {
            GroupName::Trivial => (vec![SymOp::Identity], vec![[1, 1, 1]]),
            GroupName::Ci => (
                vec![SymOp::Identity, SymOp::Inversion],
                vec![[1, 1, 1], [-1, -1, -1]],
            ),
            GroupName::CsAxial => (
                vec![SymOp::Identity, SymOp::SigmaAxial],
                vec![[1, 1, 1], [1, -1, 1]],
            ),
            GroupName::CsHorizontal => (
                vec![SymOp::Identity, SymOp::SigmaHorizontal],
                vec![[1, 1, 1], [1, 1, -1]],
            ),
            GroupName::C2 => (
                vec![SymOp::Identity, SymOp::HalfturnPerp],
                vec![[1, 1, 1], [1, -1, -1]],
            ),
            GroupName::C2v => (
                vec![
                    SymOp::Identity,
                    SymOp::SigmaAxial,
                    SymOp::SigmaHorizontal,
                    SymOp::HalfturnPerp,
                ],
                vec![[1, 1, 1], [1, -1, 1], [1, 1, -1], [1, -1, -1]],
            ),
            GroupName::C2h => (
                vec![
                    SymOp::Identity,
                    SymOp::SigmaAxial,
                    SymOp::HalfturnPerp,
                    SymOp::Inversion,
                ],
                // half-turn about the y-axis so the set closes under products
                vec![[1, 1, 1], [1, -1, 1], [-1, 1, -1], [-1, -1, -1]],
            ),
            GroupName::C2z => (
                vec![SymOp::Identity, SymOp::RotationZ(2)],
                vec![[1, 1, 1], [-1, -1, 1]],
            ),
        };
        GroupSpec {
            name,
            elements,
            taus,
        }
    }

    /// Ordered element list, identity first.
    pub fn elements(&self) -> &[SymOp] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, op: SymOp) -> bool {
        self.elements.contains(&op.canonical())
    }

    /// Non-identity elements in group order.
    pub fn non_identity(&self) -> &[SymOp] {
        &self.elements[1..]
    }

    /// The signed-diagonal matrix `τ(γ)` this group assigns to `γ`.
    pub fn tau(&self, op: SymOp) -> Option<[i64; 3]> {
        let op = op.canonical();
        self.elements
            .iter()
            .position(|&e| e == op)
            .map(|i| self.taus[i])
    }

    /// Group multiplication via the faithful matrix representation.
    pub fn compose(&self, a: SymOp, b: SymOp) -> Option<SymOp> {
        let ta = self.tau(a)?;
        let tb = self.tau(b)?;
        let prod = [ta[0] * tb[0], ta[1] * tb[1], ta[2] * tb[2]];
        self.taus
            .iter()
            .position(|t| *t == prod)
            .map(|i| self.elements[i])
    }
}

/// One problem found by [`SymmetricGraph::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub message: String,
}

/// Outcome of validating a [`SymmetricGraph`]; violations are data, not
/// failures.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, message: String) {
        self.violations.push(Violation { message });
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("symmetry operation {0} is not an element of group {1}")]
    OpNotInGroup(SymOp, GroupName),
    #[error("unknown vertex id {0:?}")]
    UnknownVertex(String),
    #[error("graph failed validation: {0}")]
    Invalid(String),
}

/// An edge as an unordered pair of vertex indices, stored `(min, max)`.
pub type Edge = (u32, u32);

pub fn edge(u: u32, v: u32) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A finite simple graph with a group action: vertex ids are opaque strings,
/// internally everything runs on indices into `vertices`.
///
/// The action stores the full permutation for every non-identity element;
/// composition closure is part of validation. Immutable after validation and
/// safe to share across threads.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    group: GroupSpec,
    /// Permutation per non-identity element, in group element order.
    action: Vec<Vec<u32>>,
}

impl SymmetricGraph {
    /// Build a graph from string ids. Duplicate edges collapse; loops are kept
    /// so that `validate` can report them.
    pub fn new(
        group: GroupSpec,
        vertices: Vec<String>,
        edge_pairs: &[(String, String)],
        action_maps: &BTreeMap<SymOp, BTreeMap<String, String>>,
    ) -> Result<SymmetricGraph, GraphError> {
        let index: BTreeMap<&str, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i as u32))
            .collect();
        if index.len() != vertices.len() {
            return Err(GraphError::Invalid("duplicate vertex id".into()));
        }
        let mut edges = Vec::new();
        for (a, b) in edge_pairs {
            let ia = *index
                .get(a.as_str())
                .ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
            let ib = *index
                .get(b.as_str())
                .ok_or_else(|| GraphError::UnknownVertex(b.clone()))?;
            edges.push(edge(ia, ib));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut action = Vec::new();
        for &op in group.non_identity() {
            let map = action_maps
                .get(&op.canonical())
                .ok_or_else(|| GraphError::Invalid(format!("no action given for {op}")))?;
            let mut perm = vec![u32::MAX; vertices.len()];
            for (from, to) in map {
                let i = *index
                    .get(from.as_str())
                    .ok_or_else(|| GraphError::UnknownVertex(from.clone()))?;
                let j = *index
                    .get(to.as_str())
                    .ok_or_else(|| GraphError::UnknownVertex(to.clone()))?;
                perm[i as usize] = j;
            }
            if perm.contains(&u32::MAX) {
                return Err(GraphError::Invalid(format!(
                    "action for {op} does not cover every vertex"
                )));
            }
            action.push(perm);
        }
        Ok(SymmetricGraph {
            vertices,
            edges,
            group,
            action,
        })
    }

    /// Build directly from indices; `action[k]` matches `group.non_identity()[k]`.
    pub fn from_indices(
        group: GroupSpec,
        vertices: Vec<String>,
        mut edges: Vec<Edge>,
        action: Vec<Vec<u32>>,
    ) -> SymmetricGraph {
        edges.sort_unstable();
        edges.dedup();
        SymmetricGraph {
            vertices,
            edges,
            group,
            action,
        }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: u32) -> &str {
        &self.vertices[v as usize]
    }

    pub fn vertex_index(&self, id: &str) -> Option<u32> {
        self.vertices.iter().position(|w| w == id).map(|i| i as u32)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.edges.binary_search(&edge(u, v)).is_ok()
    }

    /// Image of vertex `v` under the element `op`.
    pub fn apply(&self, op: SymOp, v: u32) -> u32 {
        let op = op.canonical();
        if op == SymOp::Identity {
            return v;
        }
        let k = self
            .group
            .non_identity()
            .iter()
            .position(|&e| e == op)
            .expect("element of the graph's group");
        self.action[k][v as usize]
    }

    /// Image of an edge under `op`.
    pub fn apply_edge(&self, op: SymOp, e: Edge) -> Edge {
        edge(self.apply(op, e.0), self.apply(op, e.1))
    }

    /// Shorthand for the image under the unique non-identity element of an
    /// order-two group (`v'` in the usual notation).
    pub fn partner(&self, v: u32) -> u32 {
        debug_assert_eq!(self.group.order(), 2);
        self.action[0][v as usize]
    }

    pub fn neighbors(&self, v: u32) -> Vec<u32> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    /// Check every structural invariant; violations come back as data.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.vertices.len() as u32;
        for &(a, b) in &self.edges {
            if a == b {
                report.push(format!("loop at vertex {}", self.vertices[a as usize]));
            }
            if a >= n || b >= n {
                report.push(format!("edge ({a},{b}) references a missing vertex"));
            }
        }
        if self.action.len() != self.group.non_identity().len() {
            report.push("action does not cover every non-identity element".into());
            return report;
        }
        for (k, perm) in self.action.iter().enumerate() {
            let op = self.group.non_identity()[k];
            if perm.len() != self.vertices.len() {
                report.push(format!("action for {op} has wrong length"));
                return report;
            }
            let mut seen = vec![false; perm.len()];
            for &img in perm {
                if img >= n || seen[img as usize] {
                    report.push(format!("action for {op} is not a permutation"));
                    return report;
                }
                seen[img as usize] = true;
            }
            // automorphism: the edge set is preserved
            for &e in &self.edges {
                let im = (perm[e.0 as usize], perm[e.1 as usize]);
                let im = edge(im.0, im.1);
                if self.edges.binary_search(&im).is_err() {
                    report.push(format!(
                        "{op} is not an automorphism: edge {}{} maps to non-edge {}{}",
                        self.vertices[e.0 as usize],
                        self.vertices[e.1 as usize],
                        self.vertices[im.0 as usize],
                        self.vertices[im.1 as usize],
                    ));
                }
            }
            // no fixed vertex under inversion / z-rotations (no fixed point on the cylinder)
            if op.is_fixed_point_free() {
                for (v, &img) in perm.iter().enumerate() {
                    if img == v as u32 {
                        report.push(format!(
                            "vertex {} is fixed by {op}, which fixes no point of the cylinder",
                            self.vertices[v]
                        ));
                    }
                }
            }
        }
        // homomorphism: composition-compatible on all element pairs
        for &a in self.group.elements() {
            for &b in self.group.elements() {
                let Some(ab) = self.group.compose(a, b) else {
                    report.push(format!("group {} not closed under {a}·{b}", self.group.name));
                    continue;
                };
                for v in 0..n {
                    if self.apply(a, self.apply(b, v)) != self.apply(ab, v) {
                        report.push(format!(
                            "action is not a homomorphism at {a}·{b} on vertex {}",
                            self.vertices[v as usize]
                        ));
                        break;
                    }
                }
            }
        }
        report
    }

    /// Vertices and edges fixed by `element` (an edge is fixed if its
    /// endpoints are preserved or swapped).
    pub fn fixed_elements(&self, element: SymOp) -> Result<(Vec<u32>, Vec<Edge>), GraphError> {
        let element = element.canonical();
        if !self.group.contains(element) {
            return Err(GraphError::OpNotInGroup(element, self.group.name));
        }
        let fixed_vertices: Vec<u32> = (0..self.vertices.len() as u32)
            .filter(|&v| self.apply(element, v) == v)
            .collect();
        let fixed_edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|&e| self.apply_edge(element, e) == e)
            .collect();
        Ok((fixed_vertices, fixed_edges))
    }

    /// Orbit of a vertex, sorted.
    pub fn vertex_orbit(&self, v: u32) -> Vec<u32> {
        let mut orbit: BTreeSet<u32> = BTreeSet::new();
        for &op in self.group.elements() {
            orbit.insert(self.apply(op, v));
        }
        orbit.into_iter().collect()
    }

    /// Orbit of an edge, sorted.
    pub fn edge_orbit(&self, e: Edge) -> Vec<Edge> {
        let mut orbit: BTreeSet<Edge> = BTreeSet::new();
        for &op in self.group.elements() {
            orbit.insert(self.apply_edge(op, e));
        }
        orbit.into_iter().collect()
    }

    /// Partition of vertices and edges into orbits under the action.
    pub fn orbits(&self) -> (Vec<Vec<u32>>, Vec<Vec<Edge>>) {
        let mut vertex_orbits = Vec::new();
        let mut seen = vec![false; self.vertices.len()];
        for v in 0..self.vertices.len() as u32 {
            if seen[v as usize] {
                continue;
            }
            let orbit = self.vertex_orbit(v);
            for &w in &orbit {
                seen[w as usize] = true;
            }
            vertex_orbits.push(orbit);
        }
        let mut edge_orbits = Vec::new();
        let mut seen_edges: BTreeSet<Edge> = BTreeSet::new();
        for &e in &self.edges {
            if seen_edges.contains(&e) {
                continue;
            }
            let orbit = self.edge_orbit(e);
            seen_edges.extend(orbit.iter().copied());
            edge_orbits.push(orbit);
        }
        (vertex_orbits, edge_orbits)
    }

    /// Counts of fixed vertices/edges per relevant operation, the `v_*`, `e_*`
    /// symbols of the character table.
    pub fn fixed_counts(&self) -> FixedCounts {
        let mut c = FixedCounts::default();
        for &op in self.group.non_identity() {
            let (fv, fe) = self.fixed_elements(op).expect("element of own group");
            match op {
                SymOp::RotationZ(2) => c.e_2 = fe.len(),
                SymOp::HalfturnPerp => {
                    c.e_2p = fe.len();
                    c.v_2p = fv.len();
                }
                SymOp::SigmaAxial => {
                    c.e_sigma = fe.len();
                    c.v_sigma = fv.len();
                }
                SymOp::SigmaHorizontal => {
                    c.e_sigmap = fe.len();
                    c.v_sigmap = fv.len();
                }
                SymOp::Inversion => c.e_phi = fe.len(),
                _ => {}
            }
        }
        c
    }

    /// Rename every vertex; the map must be a bijection onto fresh ids.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<SymmetricGraph, GraphError> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            let new = map
                .get(v)
                .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
            vertices.push(new.clone());
        }
        let mut uniq: BTreeSet<&String> = BTreeSet::new();
        if !vertices.iter().all(|v| uniq.insert(v)) {
            return Err(GraphError::Invalid("relabeling is not injective".into()));
        }
        Ok(SymmetricGraph {
            vertices,
            edges: self.edges.clone(),
            group: self.group.clone(),
            action: self.action.clone(),
        })
    }

    /// Induced subgraph on `keep` (sorted indices), inheriting the action.
    /// Fails if `keep` is not closed under the action.
    pub fn induced(&self, keep: &[u32]) -> Result<SymmetricGraph, GraphError> {
        let keep_set: BTreeSet<u32> = keep.iter().copied().collect();
        let mut new_index = BTreeMap::new();
        let mut vertices = Vec::new();
        for &v in &keep_set {
            new_index.insert(v, vertices.len() as u32);
            vertices.push(self.vertices[v as usize].clone());
        }
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            if keep_set.contains(&a) && keep_set.contains(&b) {
                edges.push(edge(new_index[&a], new_index[&b]));
            }
        }
        let mut action = Vec::new();
        for &op in self.group.non_identity() {
            let mut perm = Vec::with_capacity(vertices.len());
            for &v in &keep_set {
                let img = self.apply(op, v);
                let Some(&new) = new_index.get(&img) else {
                    return Err(GraphError::Invalid(
                        "vertex set is not closed under the action".into(),
                    ));
                };
                perm.push(new);
            }
            action.push(perm);
        }
        Ok(SymmetricGraph::from_indices(
            self.group.clone(),
            vertices,
            edges,
            action,
        ))
    }

    /// Number of edges with exactly one endpoint in `xs` and one in `ys`.
    pub fn edges_between(&self, xs: &BTreeSet<u32>, ys: &BTreeSet<u32>) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| {
                (xs.contains(&a) && ys.contains(&b) && !xs.contains(&b) && !ys.contains(&a))
                    || (xs.contains(&b) && ys.contains(&a) && !xs.contains(&a) && !ys.contains(&b))
            })
            .count()
    }

    /// All 4-cliques, as sorted vertex quadruples.
    pub fn k4_copies(&self) -> Vec<[u32; 4]> {
        let n = self.vertices.len() as u32;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.has_edge(a, b) {
                    continue;
                }
                for c in b + 1..n {
                    if !(self.has_edge(a, c) && self.has_edge(b, c)) {
                        continue;
                    }
                    for d in c + 1..n {
                        if self.has_edge(a, d) && self.has_edge(b, d) && self.has_edge(c, d) {
                            out.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Embeddings of `K4 - e` with `u, v` as the two non-adjacent vertices:
    /// pairs `{a, b}` of common neighbors of `u` and `v` joined by an edge.
    pub fn k4_minus_edge_through(&self, u: u32, v: u32) -> Vec<[u32; 2]> {
        if self.has_edge(u, v) {
            return Vec::new();
        }
        let nu: BTreeSet<u32> = self.neighbors(u).into_iter().collect();
        let nv: BTreeSet<u32> = self.neighbors(v).into_iter().collect();
        let common: Vec<u32> = nu.intersection(&nv).copied().collect();
        let mut out = Vec::new();
        for (i, &a) in common.iter().enumerate() {
            for &b in &common[i + 1..] {
                if self.has_edge(a, b) {
                    out.push([a, b]);
                }
            }
        }
        out
    }

    /// All action-equivariant isomorphisms `pattern -> self` (as index maps
    /// from pattern vertices to self vertices). Both graphs must carry the
    /// same group; equivariance means `m(γ·v) = γ·m(v)` for every element.
    pub fn equivariant_isomorphisms(&self, pattern: &SymmetricGraph) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        if pattern.vertices.len() != self.vertices.len()
            || pattern.edges.len() != self.edges.len()
            || pattern.group.name != self.group.name
        {
            return out;
        }
        let mut pat_deg: Vec<usize> = (0..pattern.vertices.len())
            .map(|v| pattern.degree(v as u32))
            .collect();
        let mut self_deg: Vec<usize> = (0..self.vertices.len())
            .map(|v| self.degree(v as u32))
            .collect();
        {
            let mut a = pat_deg.clone();
            let mut b = self_deg.clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return out;
            }
        }
        pat_deg.shrink_to_fit();
        self_deg.shrink_to_fit();
        let n = pattern.vertices.len();
        let mut map = vec![u32::MAX; n];
        let mut used = vec![false; n];
        self.equivariant_search(pattern, &pat_deg, &self_deg, &mut map, &mut used, 0, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn equivariant_search(
        &self,
        pattern: &SymmetricGraph,
        pat_deg: &[usize],
        self_deg: &[usize],
        map: &mut Vec<u32>,
        used: &mut Vec<bool>,
        next: usize,
        out: &mut Vec<Vec<u32>>,
    ) {
        let n = pattern.vertices.len();
        let v = (next..n).find(|&v| map[v] == u32::MAX);
        let Some(v) = v else {
            out.push(map.clone());
            return;
        };
        'cand: for w in 0..n as u32 {
            if used[w as usize] || pat_deg[v] != self_deg[w as usize] {
                continue;
            }
            // propagate through the action closure of the assignment v -> w
            let mut assigned: Vec<(u32, u32)> = Vec::new();
            let mut stack = vec![(v as u32, w)];
            let mut ok = true;
            while let Some((pv, sv)) = stack.pop() {
                let cur = map[pv as usize];
                if cur != u32::MAX {
                    if cur != sv {
                        ok = false;
                        break;
                    }
                    continue;
                }
                if used[sv as usize] || pat_deg[pv as usize] != self_deg[sv as usize] {
                    ok = false;
                    break;
                }
                map[pv as usize] = sv;
                used[sv as usize] = true;
                assigned.push((pv, sv));
                for &op in pattern.group.non_identity() {
                    stack.push((pattern.apply(op, pv), self.apply(op, sv)));
                }
            }
            if ok {
                // adjacency consistency over all currently mapped pairs
                for &(pv, sv) in &assigned {
                    for pu in 0..n as u32 {
                        let su = map[pu as usize];
                        if su == u32::MAX {
                            continue;
                        }
                        if pattern.has_edge(pv, pu) != self.has_edge(sv, su) {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        break;
                    }
                }
            }
            if !ok {
                for &(pv, sv) in assigned.iter().rev() {
                    map[pv as usize] = u32::MAX;
                    used[sv as usize] = false;
                }
                continue 'cand;
            }
            self.equivariant_search(pattern, pat_deg, self_deg, map, used, v + 1, out);
            for &(pv, sv) in assigned.iter().rev() {
                map[pv as usize] = u32::MAX;
                used[sv as usize] = false;
            }
        }
    }
}

/// Fixed vertex/edge counts per operation: the `e_2, e_2', e_σ, e_σ', e_φ`
/// and `v_2', v_σ, v_σ'` of the character table. Counts for operations not
/// in the group stay zero.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedCounts {
    pub e_2: usize,
    pub e_2p: usize,
    pub e_sigma: usize,
    pub e_sigmap: usize,
    pub e_phi: usize,
    pub v_2p: usize,
    pub v_sigma: usize,
    pub v_sigmap: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4_c2() -> SymmetricGraph {
        // K4 with the half-turn acting as (ab)(cd)
        let group = GroupSpec::new(GroupName::C2);
        let verts: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let action = vec![vec![1, 0, 3, 2]];
        SymmetricGraph::from_indices(group, verts, edges, action)
    }

    fn f1_ci() -> SymmetricGraph {
        let group = GroupSpec::new(GroupName::Ci);
        let verts: Vec<String> = ["a", "b", "c", "d", "e", "f"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let edges = vec![
            (0, 1),
            (0, 2),
            (0, 3),
            (1, 2),
            (1, 3),
            (2, 4),
            (2, 5),
            (3, 4),
            (3, 5),
            (4, 5),
        ];
        let action = vec![vec![5, 4, 3, 2, 1, 0]];
        SymmetricGraph::from_indices(group, verts, edges, action)
    }

    #[test]
    fn k4_with_c2_action_validates() {
        assert!(k4_c2().validate().ok());
    }

    #[test]
    fn non_automorphism_is_reported() {
        // map sending the edge ab through a non-edge: use a path a-b-c with action (ac)
        let group = GroupSpec::new(GroupName::C2);
        let verts: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let edges = vec![(0, 1), (1, 2), (2, 3)];
        let action = vec![vec![2, 1, 0, 3]]; // d fixed; bd would be needed for cd's image
        let g = SymmetricGraph::from_indices(group, verts, edges, action);
        let report = g.validate();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|v| v.message.contains("not an automorphism")));
    }

    #[test]
    fn f1_with_ci_action_validates_and_has_no_fixed_elements() {
        let g = f1_ci();
        assert!(g.validate().ok());
        let (fv, fe) = g.fixed_elements(SymOp::Inversion).unwrap();
        assert!(fv.is_empty());
        assert!(fe.is_empty());
    }

    #[test]
    fn fixed_vertex_under_inversion_is_a_violation() {
        let group = GroupSpec::new(GroupName::Ci);
        let verts: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let edges = vec![(0, 1), (1, 2)];
        let action = vec![vec![2, 1, 0]]; // b fixed by the inversion
        let g = SymmetricGraph::from_indices(group, verts, edges, action);
        let report = g.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.message.contains("fixed by phi")));
    }

    #[test]
    fn identity_fixes_everything() {
        let g = k4_c2();
        let (fv, fe) = g.fixed_elements(SymOp::Identity).unwrap();
        assert_eq!(fv.len(), 4);
        assert_eq!(fe.len(), 6);
    }

    #[test]
    fn fixed_elements_rejects_foreign_op() {
        let g = k4_c2();
        assert!(g.fixed_elements(SymOp::Inversion).is_err());
    }

    #[test]
    fn k4_c2_orbits() {
        let g = k4_c2();
        let (vo, eo) = g.orbits();
        assert_eq!(vo, vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(eo.len(), 4);
        assert!(eo.contains(&vec![(0, 1)]));
        assert!(eo.contains(&vec![(2, 3)]));
        assert!(eo.contains(&vec![(0, 2), (1, 3)]));
        assert!(eo.contains(&vec![(0, 3), (1, 2)]));
    }

    #[test]
    fn trivial_group_gives_singleton_orbits() {
        let group = GroupSpec::new(GroupName::Trivial);
        let verts: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let g = SymmetricGraph::from_indices(group, verts, vec![(0, 1)], vec![]);
        let (vo, eo) = g.orbits();
        assert_eq!(vo.len(), 2);
        assert_eq!(eo, vec![vec![(0, 1)]]);
    }

    #[test]
    fn k4_fixed_edges_under_halfturn() {
        let g = k4_c2();
        let (fv, fe) = g.fixed_elements(SymOp::HalfturnPerp).unwrap();
        assert!(fv.is_empty());
        assert_eq!(fe, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn k4_copy_enumeration() {
        let g = k4_c2();
        assert_eq!(g.k4_copies().len(), 1);
        let f1 = f1_ci();
        assert_eq!(f1.k4_copies().len(), 0);
    }

    #[test]
    fn c2h_composes_to_inversion() {
        let g = GroupSpec::new(GroupName::C2h);
        assert_eq!(
            g.compose(SymOp::SigmaAxial, SymOp::HalfturnPerp),
            Some(SymOp::Inversion)
        );
    }

    #[test]
    fn c2v_closure() {
        let g = GroupSpec::new(GroupName::C2v);
        assert_eq!(
            g.compose(SymOp::SigmaAxial, SymOp::SigmaHorizontal),
            Some(SymOp::HalfturnPerp)
        );
        for &a in g.elements() {
            for &b in g.elements() {
                assert!(g.compose(a, b).is_some());
            }
        }
    }

    #[test]
    fn equivariant_iso_finds_relabeled_copy() {
        let g = f1_ci();
        let map: BTreeMap<String, String> = [("a", "u"), ("b", "v"), ("c", "w"), ("d", "x"), ("e", "y"), ("f", "z")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let h = g.relabel(&map).unwrap();
        let isos = h.equivariant_isomorphisms(&g);
        assert!(!isos.is_empty());
        // identity-index map must be among them since relabel keeps indices
        assert!(isos.iter().any(|m| m.iter().enumerate().all(|(i, &j)| i as u32 == j)));
    }
}
