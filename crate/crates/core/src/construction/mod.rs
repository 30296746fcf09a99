//! Symmetrised extension operations, their inverse reductions, and
//! construction certificates: a Γ-tight graph reduces step by step to a
//! catalog base graph, and the recorded steps replay to the original graph.
//!
//! The reduction engine is try-and-test: it enumerates the candidate moves
//! the case analysis allows (in a fixed priority order) and accepts the first
//! candidate whose result is again Γ-tight. The recursive theorems guarantee
//! some candidate succeeds on every non-base Γ-tight graph, so exhaustion is
//! reported as an internal error with the offending graph attached.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::graph::{GroupName, GroupSpec, SymmetricGraph};
use crate::sparsity::{self, GammaTightReport};

/// A symmetric graph in portable string form: used for the side graphs
/// embedded in steps (the joined component, the substituted tight block).
/// `action` lists the swapped vertex pairs of the involution; omitted
/// vertices are fixed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphData {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub action: Vec<(String, String)>,
}

impl GraphData {
    pub fn from_graph(g: &SymmetricGraph) -> GraphData {
        let op = g.group().non_identity()[0];
        let mut action = Vec::new();
        for v in 0..g.vertex_count() as u32 {
            let w = g.apply(op, v);
            if w > v {
                action.push((g.vertex_id(v).to_string(), g.vertex_id(w).to_string()));
            }
        }
        GraphData {
            vertices: g.vertex_ids().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| (g.vertex_id(a).to_string(), g.vertex_id(b).to_string()))
                .collect(),
            action,
        }
    }

    pub fn to_graph(&self, group: GroupSpec) -> Result<SymmetricGraph, StepError> {
        let op = group.non_identity()[0];
        let mut map: BTreeMap<String, String> = self
            .vertices
            .iter()
            .map(|v| (v.clone(), v.clone()))
            .collect();
        for (a, b) in &self.action {
            map.insert(a.clone(), b.clone());
            map.insert(b.clone(), a.clone());
        }
        let mut actions = BTreeMap::new();
        actions.insert(op, map);
        let g = SymmetricGraph::new(group, self.vertices.clone(), &self.edges, &actions)
            .map_err(|e| StepError::BadParam(e.to_string()))?;
        let report = g.validate();
        if !report.ok() {
            return Err(StepError::BadParam(format!(
                "embedded graph invalid: {:?}",
                report.violations
            )));
        }
        Ok(g)
    }
}

/// One symmetrised extension step, in replay direction (small to large).
/// All steps assume a group of order two; `v'` denotes the image of `v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Step {
    /// Add the orbit `{v, v'}`, `v` adjacent to the two `neighbors`.
    Sym0Ext {
        new: (String, String),
        neighbors: (String, String),
    },
    /// Cs only: add one new vertex fixed by the mirror, adjacent to
    /// `neighbor` and its image.
    FixedVertex0Ext { new: String, neighbor: String },
    /// Remove the edge orbit of `removed`, add `{v, v'}` with `v` adjacent to
    /// the removed endpoints and to `third`.
    Sym1Ext {
        new: (String, String),
        removed: (String, String),
        third: String,
    },
    /// Split `at` into a `K4` on `{at} ∪ new`, reattaching each old neighbor
    /// of `at` to its assigned member (and symmetrically).
    VertexToK4 {
        at: String,
        new: [String; 3],
        new_images: [String; 3],
        assignment: Vec<(String, String)>,
    },
    /// Split `at` into the 4-cycle `at – doubled.0 – new – doubled.1`;
    /// `moved` lists the old neighbors that migrate to `new`. When
    /// `new_image == new` this is the mirror variant with both `at` and `new`
    /// fixed and `doubled` an orbit pair.
    VertexToC4 {
        at: String,
        new: String,
        new_image: String,
        doubled: (String, String),
        moved: Vec<String>,
    },
    /// Ci only: disjoint union with `other` joined by the edge orbit
    /// `{(x, y), (x', y')}`, first endpoints in the current graph.
    JoinTwoEdges {
        other: GraphData,
        edges: ((String, String), (String, String)),
    },
    /// C2 only: remove the fixed edge, add the orbit `{w, w'}` with
    /// `w ~ {x, third, w'}` and `w' ~ {x', third', w}`.
    Double1Ext {
        new: (String, String),
        fixed_edge: (String, String),
        third: String,
    },
    /// Cs only: substitute the tight `block` for the fixed vertex `at`,
    /// rerouting each old edge `{y, at}` to `{y, attach(y)}`.
    VertexToTight {
        at: String,
        block: GraphData,
        attach: Vec<(String, String)>,
    },
}

impl Step {
    pub fn variant_name(&self) -> &'static str {
        match self {
            Step::Sym0Ext { .. } => "sym_0_ext",
            Step::FixedVertex0Ext { .. } => "fixed_vertex_0_ext",
            Step::Sym1Ext { .. } => "sym_1_ext",
            Step::VertexToK4 { .. } => "vertex_to_k4",
            Step::VertexToC4 { .. } => "vertex_to_c4",
            Step::JoinTwoEdges { .. } => "join_two_edges",
            Step::Double1Ext { .. } => "double_1_ext",
            Step::VertexToTight { .. } => "vertex_to_tight",
        }
    }
}

/// A recursive construction: a catalog base graph (relabeled by `base_map`)
/// followed by extension steps. Serializes to stable JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub group: GroupName,
    pub base: String,
    /// catalog vertex id -> target graph vertex id
    pub base_map: Vec<(String, String)>,
    pub steps: Vec<Step>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Certificate, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("invalid step parameters: {0}")]
    BadParam(String),
    #[error("step result is not a valid symmetric graph: {0}")]
    ResultInvalid(String),
    #[error("internal error: step lost Γ-tightness: {0}")]
    TightnessLost(String),
    #[error("group {0} is not supported by the construction module")]
    UnsupportedGroup(GroupName),
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("graph is not Γ-tight")]
    NotTight(Box<GammaTightReport>),
    #[error("group {0} has no recursive characterization")]
    UnsupportedGroup(GroupName),
    #[error("step failed during certification: {0}")]
    Step(#[from] StepError),
    #[error(
        "internal exhaustion: no reduction candidate validated; this contradicts the \
         recursive construction theorems. Graph: {0}"
    )]
    Exhausted(String),
}

pub(crate) fn construction_group(name: GroupName) -> bool {
    matches!(
        name,
        GroupName::Ci | GroupName::C2 | GroupName::CsAxial | GroupName::CsHorizontal
    )
}

pub(crate) fn is_cs(name: GroupName) -> bool {
    matches!(name, GroupName::CsAxial | GroupName::CsHorizontal)
}

/// Mutable string-keyed view of an order-two symmetric graph, for building
/// step results.
#[derive(Clone, Debug)]
pub(crate) struct Builder {
    group: GroupSpec,
    vertices: Vec<String>,
    edges: BTreeSet<(String, String)>,
    invol: BTreeMap<String, String>,
}

pub(crate) fn norm(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

impl Builder {
    pub(crate) fn from_graph(g: &SymmetricGraph) -> Result<Builder, StepError> {
        if g.group().order() != 2 {
            return Err(StepError::UnsupportedGroup(g.group().name));
        }
        let op = g.group().non_identity()[0];
        let invol = (0..g.vertex_count() as u32)
            .map(|v| {
                (
                    g.vertex_id(v).to_string(),
                    g.vertex_id(g.apply(op, v)).to_string(),
                )
            })
            .collect();
        Ok(Builder {
            group: g.group().clone(),
            vertices: g.vertex_ids().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|&(a, b)| norm(g.vertex_id(a), g.vertex_id(b)))
                .collect(),
            invol,
        })
    }

    pub(crate) fn has_vertex(&self, v: &str) -> bool {
        self.invol.contains_key(v)
    }

    pub(crate) fn img(&self, v: &str) -> Result<String, StepError> {
        self.invol
            .get(v)
            .cloned()
            .ok_or_else(|| StepError::BadParam(format!("unknown vertex {v:?}")))
    }

    pub(crate) fn add_vertex_pair(&mut self, v: &str, w: &str) -> Result<(), StepError> {
        if self.has_vertex(v) || self.has_vertex(w) || v == w {
            return Err(StepError::BadParam(format!(
                "new vertices {v:?}, {w:?} must be fresh and distinct"
            )));
        }
        self.vertices.push(v.to_string());
        self.vertices.push(w.to_string());
        self.invol.insert(v.to_string(), w.to_string());
        self.invol.insert(w.to_string(), v.to_string());
        Ok(())
    }

    pub(crate) fn add_fixed_vertex(&mut self, v: &str) -> Result<(), StepError> {
        if self.has_vertex(v) {
            return Err(StepError::BadParam(format!("vertex {v:?} already exists")));
        }
        self.vertices.push(v.to_string());
        self.invol.insert(v.to_string(), v.to_string());
        Ok(())
    }

    pub(crate) fn add_edge(&mut self, a: &str, b: &str) -> Result<(), StepError> {
        if a == b {
            return Err(StepError::BadParam(format!("loop at {a:?}")));
        }
        if !self.has_vertex(a) || !self.has_vertex(b) {
            return Err(StepError::BadParam(format!(
                "edge ({a:?}, {b:?}) references a missing vertex"
            )));
        }
        if !self.edges.insert(norm(a, b)) {
            return Err(StepError::BadParam(format!(
                "edge ({a:?}, {b:?}) already present"
            )));
        }
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, a: &str, b: &str) -> Result<(), StepError> {
        if !self.edges.remove(&norm(a, b)) {
            return Err(StepError::BadParam(format!(
                "({a:?}, {b:?}) is not an edge"
            )));
        }
        Ok(())
    }

    pub(crate) fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges.contains(&norm(a, b))
    }

    pub(crate) fn neighbors(&self, v: &str) -> Vec<String> {
        let mut out = Vec::new();
        for (a, b) in &self.edges {
            if a == v {
                out.push(b.clone());
            } else if b == v {
                out.push(a.clone());
            }
        }
        out
    }

    pub(crate) fn remove_vertex(&mut self, v: &str) {
        self.vertices.retain(|w| w != v);
        self.invol.remove(v);
        self.edges.retain(|(a, b)| a != v && b != v);
    }

    pub(crate) fn absorb(&mut self, other: &Builder) {
        for v in &other.vertices {
            self.vertices.push(v.clone());
        }
        for (k, v) in &other.invol {
            self.invol.insert(k.clone(), v.clone());
        }
        for (a, c) in &other.edges {
            self.edges.insert((a.clone(), c.clone()));
        }
    }

    pub(crate) fn finish(self) -> Result<SymmetricGraph, StepError> {
        let op = self.group.non_identity()[0];
        let mut actions = BTreeMap::new();
        actions.insert(op, self.invol);
        let edges: Vec<(String, String)> = self.edges.into_iter().collect();
        let g = SymmetricGraph::new(self.group, self.vertices, &edges, &actions)
            .map_err(|e| StepError::ResultInvalid(e.to_string()))?;
        let report = g.validate();
        if !report.ok() {
            return Err(StepError::ResultInvalid(format!(
                "{:?}",
                report.violations
            )));
        }
        Ok(g)
    }
}

/// Apply one extension step. The result is validated, and if the input was
/// Γ-tight the output must be too (the forward direction of the recursion
/// theorems); losing tightness is reported as an internal error.
pub fn apply_step(graph: &SymmetricGraph, step: &Step) -> Result<SymmetricGraph, StepError> {
    let name = graph.group().name;
    if !construction_group(name) {
        return Err(StepError::UnsupportedGroup(name));
    }
    let was_tight = sparsity::gamma_tight(graph)
        .map(|r| r.tight)
        .unwrap_or(false);
    let out = apply_step_inner(graph, step)?;
    if was_tight {
        let now =
            sparsity::gamma_tight(&out).map_err(|e| StepError::ResultInvalid(e.to_string()))?;
        if !now.tight {
            return Err(StepError::TightnessLost(format!(
                "{} produced {:?}",
                step.variant_name(),
                now.reasons
            )));
        }
    }
    Ok(out)
}

fn apply_step_inner(graph: &SymmetricGraph, step: &Step) -> Result<SymmetricGraph, StepError> {
    let name = graph.group().name;
    let mut b = Builder::from_graph(graph)?;
    match step {
        Step::Sym0Ext { new, neighbors } => {
            let (v, w) = new;
            let (a, c) = neighbors;
            if a == c {
                return Err(StepError::BadParam(
                    "0-extension neighbors must differ".into(),
                ));
            }
            let (ai, ci) = (b.img(a)?, b.img(c)?);
            b.add_vertex_pair(v, w)?;
            b.add_edge(v, a)?;
            b.add_edge(v, c)?;
            b.add_edge(w, &ai)?;
            b.add_edge(w, &ci)?;
        }
        Step::FixedVertex0Ext { new, neighbor } => {
            if !is_cs(name) {
                return Err(StepError::BadParam(
                    "fixed-vertex 0-extension requires a mirror group".into(),
                ));
            }
            let xi = b.img(neighbor)?;
            if xi == *neighbor {
                return Err(StepError::BadParam(
                    "neighbor of a fixed 0-extension vertex may not itself be fixed".into(),
                ));
            }
            b.add_fixed_vertex(new)?;
            b.add_edge(new, neighbor)?;
            b.add_edge(new, &xi)?;
        }
        Step::Sym1Ext {
            new,
            removed,
            third,
        } => {
            let (v, w) = new;
            let (x, y) = removed;
            let (xi, yi) = (b.img(x)?, b.img(y)?);
            if norm(x, y) == norm(&xi, &yi) {
                return Err(StepError::BadParam(
                    "symmetrised 1-extension may not remove a fixed edge".into(),
                ));
            }
            if third == x || third == y {
                return Err(StepError::BadParam(
                    "third neighbor must avoid the removed edge".into(),
                ));
            }
            let ti = b.img(third)?;
            b.remove_edge(x, y)?;
            b.remove_edge(&xi, &yi)?;
            b.add_vertex_pair(v, w)?;
            b.add_edge(v, x)?;
            b.add_edge(v, y)?;
            b.add_edge(v, third)?;
            b.add_edge(w, &xi)?;
            b.add_edge(w, &yi)?;
            b.add_edge(w, &ti)?;
        }
        Step::VertexToK4 {
            at,
            new,
            new_images,
            assignment,
        } => {
            let ati = b.img(at)?;
            if ati == *at {
                return Err(StepError::BadParam(
                    "vertex-to-K4 may not split a fixed vertex".into(),
                ));
            }
            let old_neighbors: BTreeSet<String> = b.neighbors(at).into_iter().collect();
            let assigned: BTreeSet<String> = assignment.iter().map(|(y, _)| y.clone()).collect();
            if assigned != old_neighbors || assignment.len() != old_neighbors.len() {
                return Err(StepError::BadParam(
                    "assignment must cover the split vertex's neighbors exactly once".into(),
                ));
            }
            let cluster: Vec<String> = std::iter::once(at.clone())
                .chain(new.iter().cloned())
                .collect();
            let cluster_img: Vec<String> = std::iter::once(ati.clone())
                .chain(new_images.iter().cloned())
                .collect();
            let img_of = |t: &str| -> Option<String> {
                cluster
                    .iter()
                    .position(|c| c == t)
                    .map(|i| cluster_img[i].clone())
            };
            for i in 0..3 {
                b.add_vertex_pair(&new[i], &new_images[i])?;
            }
            for (y, target) in assignment {
                let timg = img_of(target).ok_or_else(|| {
                    StepError::BadParam(format!(
                        "assignment target {target:?} is not in the new K4"
                    ))
                })?;
                if y == &ati {
                    // the single orbit edge {at, at'} becomes {target, target'}
                    b.remove_edge(at, &ati)?;
                    b.add_edge(target, &timg)?;
                } else {
                    let yi = b.img(y)?;
                    if target != at {
                        b.remove_edge(at, y)?;
                        b.add_edge(target, y)?;
                        b.remove_edge(&ati, &yi)?;
                        b.add_edge(&timg, &yi)?;
                    }
                }
            }
            for i in 0..4 {
                for j in i + 1..4 {
                    b.add_edge(&cluster[i], &cluster[j])?;
                    b.add_edge(&cluster_img[i], &cluster_img[j])?;
                }
            }
        }
        Step::VertexToC4 {
            at,
            new,
            new_image,
            doubled,
            moved,
        } => {
            let ati = b.img(at)?;
            let (d1, d2) = doubled;
            let nbrs: BTreeSet<String> = b.neighbors(at).into_iter().collect();
            if !nbrs.contains(d1) || !nbrs.contains(d2) || d1 == d2 {
                return Err(StepError::BadParam(
                    "doubled vertices must be two distinct neighbors of the split vertex".into(),
                ));
            }
            for m in moved {
                if !nbrs.contains(m) {
                    return Err(StepError::BadParam(format!(
                        "moved vertex {m:?} is not a neighbor of the split vertex"
                    )));
                }
                if m == d1 || m == d2 {
                    return Err(StepError::BadParam(
                        "moved vertices must be disjoint from the doubled pair".into(),
                    ));
                }
                if *m == ati {
                    return Err(StepError::BadParam(
                        "the orbit edge cannot migrate in a vertex-to-C4".into(),
                    ));
                }
            }
            if new == new_image {
                // mirror variant: both split halves fixed
                if !is_cs(name) || ati != *at {
                    return Err(StepError::BadParam(
                        "mirror vertex-to-C4 needs a fixed split vertex in a mirror group".into(),
                    ));
                }
                if b.img(d1)? != *d2 {
                    return Err(StepError::BadParam(
                        "mirror vertex-to-C4 doubles an orbit pair".into(),
                    ));
                }
                b.add_fixed_vertex(new)?;
            } else {
                // `at` may be fixed: the split then spawns the whole new
                // orbit {u, u'} around it
                b.add_vertex_pair(new, new_image)?;
            }
            b.add_edge(new, d1)?;
            b.add_edge(new, d2)?;
            if new != new_image {
                let (d1i, d2i) = (b.img(d1)?, b.img(d2)?);
                b.add_edge(new_image, &d1i)?;
                b.add_edge(new_image, &d2i)?;
            }
            let mut moved_done: BTreeSet<(String, String)> = BTreeSet::new();
            for m in moved {
                let mi = b.img(m)?;
                if !moved_done.insert(norm(at, m)) {
                    continue;
                }
                b.remove_edge(at, m)?;
                b.add_edge(new, m)?;
                if moved_done.insert(norm(&ati, &mi)) && (ati != *at || mi != *m) {
                    b.remove_edge(&ati, &mi)?;
                    b.add_edge(new_image, &mi)?;
                }
            }
        }
        Step::JoinTwoEdges { other, edges } => {
            if name != GroupName::Ci {
                return Err(StepError::BadParam(
                    "joining by an edge orbit is an inversion-group operation".into(),
                ));
            }
            let h = other.to_graph(graph.group().clone())?;
            let h_tight =
                sparsity::gamma_tight(&h).map_err(|e| StepError::BadParam(e.to_string()))?;
            if !h_tight.tight {
                return Err(StepError::BadParam(
                    "joined component must be Γ-tight".into(),
                ));
            }
            for v in h.vertex_ids() {
                if b.has_vertex(v) {
                    return Err(StepError::BadParam(format!(
                        "joined component reuses vertex id {v:?}"
                    )));
                }
            }
            let hb = Builder::from_graph(&h)?;
            let ((x, y), (x2, y2)) = edges;
            if b.img(x)? != *x2 || hb.img(y)? != *y2 {
                return Err(StepError::BadParam(
                    "join edges must be images of each other".into(),
                ));
            }
            b.absorb(&hb);
            b.add_edge(x, y)?;
            b.add_edge(x2, y2)?;
        }
        Step::Double1Ext {
            new,
            fixed_edge,
            third,
        } => {
            if name != GroupName::C2 {
                return Err(StepError::BadParam(
                    "the double 1-extension is a half-turn operation".into(),
                ));
            }
            let (v, w) = new;
            let (x, ximg) = fixed_edge;
            if b.img(x)? != *ximg || x == ximg || !b.has_edge(x, ximg) {
                return Err(StepError::BadParam(
                    "double 1-extension must remove a fixed edge".into(),
                ));
            }
            if third == x {
                return Err(StepError::BadParam(
                    "third neighbor must differ from the fixed-edge endpoint".into(),
                ));
            }
            let ti = b.img(third)?;
            b.remove_edge(x, ximg)?;
            b.add_vertex_pair(v, w)?;
            b.add_edge(v, w)?;
            b.add_edge(v, x)?;
            b.add_edge(w, ximg)?;
            if third != ximg {
                b.add_edge(v, third)?;
                b.add_edge(w, &ti)?;
            } else {
                // the special shape: both new vertices see both fixed-edge ends
                b.add_edge(v, ximg)?;
                b.add_edge(w, x)?;
            }
        }
        Step::VertexToTight { at, block, attach } => {
            // a mirror-group operation; also the half-turn completion rule
            // for tight pieces glued at the fixed vertex
            if !is_cs(name) && name != GroupName::C2 {
                return Err(StepError::BadParam(
                    "vertex-to-tight substitution needs a fixed vertex to replace".into(),
                ));
            }
            if b.img(at)? != *at {
                return Err(StepError::BadParam(
                    "only a fixed vertex can be substituted by a tight block".into(),
                ));
            }
            let h = block.to_graph(graph.group().clone())?;
            let h_tight =
                sparsity::gamma_tight(&h).map_err(|e| StepError::BadParam(e.to_string()))?;
            if !h_tight.tight {
                return Err(StepError::BadParam(
                    "substituted block must be Γ-tight".into(),
                ));
            }
            let hb = Builder::from_graph(&h)?;
            for v in &hb.vertices {
                if b.has_vertex(v) {
                    return Err(StepError::BadParam(format!(
                        "block reuses vertex id {v:?}"
                    )));
                }
            }
            let nbrs: BTreeSet<String> = b.neighbors(at).into_iter().collect();
            let listed: BTreeSet<String> = attach.iter().map(|(y, _)| y.clone()).collect();
            if listed != nbrs || attach.len() != nbrs.len() {
                return Err(StepError::BadParam(
                    "attach map must cover the substituted vertex's neighbors exactly once".into(),
                ));
            }
            let attach_map: BTreeMap<String, String> = attach.iter().cloned().collect();
            for (y, hv) in attach {
                let yi = b.img(y)?;
                let hvi = hb.img(hv)?;
                match attach_map.get(&yi) {
                    Some(other_v) if *other_v == hvi => {}
                    _ => {
                        return Err(StepError::BadParam(
                            "attach map is not equivariant".into(),
                        ))
                    }
                }
            }
            b.remove_vertex(at);
            b.absorb(&hb);
            for (y, hv) in attach {
                b.add_edge(y, hv)?;
            }
        }
    }
    b.finish()
}

/// Replay a certificate from its base graph.
pub fn replay(cert: &Certificate) -> Result<SymmetricGraph, StepError> {
    let entry = catalog::entries_for(cert.group)
        .into_iter()
        .find(|e| e.id == cert.base)
        .ok_or_else(|| {
            StepError::BadParam(format!(
                "unknown base graph {:?} for group {}",
                cert.base, cert.group
            ))
        })?;
    let map: BTreeMap<String, String> = cert.base_map.iter().cloned().collect();
    if map.len() != entry.graph.vertex_count() {
        return Err(StepError::BadParam(
            "base map must cover the base graph".into(),
        ));
    }
    let mut g = entry
        .graph
        .relabel(&map)
        .map_err(|e| StepError::BadParam(e.to_string()))?;
    for step in &cert.steps {
        g = apply_step(&g, step)?;
    }
    Ok(g)
}

/// Check a certificate against a target graph: replay it and compare, first
/// for literal equality of the labeled structure, then up to
/// action-equivariant isomorphism.
pub fn verify_certificate(graph: &SymmetricGraph, cert: &Certificate) -> bool {
    let Ok(h) = replay(cert) else { return false };
    if graph.group().name != h.group().name {
        return false;
    }
    let same_labels = {
        let mut a: Vec<&String> = graph.vertex_ids().iter().collect();
        let mut c: Vec<&String> = h.vertex_ids().iter().collect();
        a.sort();
        c.sort();
        a == c
    };
    if same_labels {
        let data = |g: &SymmetricGraph| {
            let mut d = GraphData::from_graph(g);
            d.vertices.sort();
            d.edges = d.edges.iter().map(|(a, b)| norm(a, b)).collect();
            d.edges.sort();
            d.action.sort();
            d
        };
        if data(graph) == data(&h) {
            return true;
        }
    }
    !graph.equivariant_isomorphisms(&h).is_empty()
}

/// Outcome of one reduction attempt.
#[allow(clippy::large_enum_variant)]
pub enum Reduction {
    /// The graph is a catalog base graph (with the recognition map).
    Base {
        id: &'static str,
        map: BTreeMap<String, String>,
    },
    /// A strictly smaller Γ-tight graph plus the step that rebuilds the input.
    Reduced {
        graph: SymmetricGraph,
        inverse: Step,
    },
}

mod reduce;
pub use reduce::reduce_once;

/// Certify a Γ-tight graph by reducing it to a catalog base graph; the
/// returned steps replay to the input.
pub fn certify(graph: &SymmetricGraph) -> Result<Certificate, CertifyError> {
    let name = graph.group().name;
    if !construction_group(name) {
        return Err(CertifyError::UnsupportedGroup(name));
    }
    let report = sparsity::gamma_tight(graph).map_err(|_| CertifyError::UnsupportedGroup(name))?;
    if !report.tight {
        return Err(CertifyError::NotTight(Box::new(report)));
    }
    let mut steps = Vec::new();
    let mut current = graph.clone();
    let budget = graph.vertex_count() + graph.edge_count() + 4;
    for _ in 0..budget {
        match reduce_once(&current)? {
            Reduction::Base { id, map } => {
                steps.reverse();
                return Ok(Certificate {
                    group: name,
                    base: id.to_string(),
                    base_map: map.into_iter().collect(),
                    steps,
                });
            }
            Reduction::Reduced { graph, inverse } => {
                steps.push(inverse);
                current = graph;
            }
        }
    }
    Err(CertifyError::Exhausted(
        serde_json::to_string(&GraphData::from_graph(&current)).unwrap_or_default(),
    ))
}
