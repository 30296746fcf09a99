//! Symmetric two-spanning-tree decompositions: every Γ-tight graph splits
//! into two edge-disjoint spanning trees, setwise invariant under a
//! half-turn and swapped by an inversion or reflection.
//!
//! The decomposition is propagated along a construction certificate from the
//! hard-coded base colorings; steps whose coloring rule the theory leaves
//! implicit fall back to an exact one-edge-per-orbit spanning-tree search
//! (matroid-intersection style), and every activation is recorded.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog;
use crate::construction::{self, Certificate, Step};
use crate::graph::{GroupName, SymmetricGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

type IdEdge = (String, String);

fn norm(a: &str, b: &str) -> IdEdge {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// An edge two-coloring whose classes are the two spanning trees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoTreeColoring {
    pub red: BTreeSet<IdEdge>,
    pub blue: BTreeSet<IdEdge>,
}

impl TwoTreeColoring {
    fn color_of(&self, e: &IdEdge) -> Option<Color> {
        if self.red.contains(e) {
            Some(Color::Red)
        } else if self.blue.contains(e) {
            Some(Color::Blue)
        } else {
            None
        }
    }

    fn insert(&mut self, e: IdEdge, c: Color) {
        match c {
            Color::Red => self.red.insert(e),
            Color::Blue => self.blue.insert(e),
        };
    }

    fn remove(&mut self, e: &IdEdge) -> Option<Color> {
        if self.red.remove(e) {
            Some(Color::Red)
        } else if self.blue.remove(e) {
            Some(Color::Blue)
        } else {
            None
        }
    }

    /// Serialize as a JSON object mapping `"u,v"` to `"red"`/`"blue"`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (a, b) in &self.red {
            map.insert(format!("{a},{b}"), "red".into());
        }
        for (a, b) in &self.blue {
            map.insert(format!("{a},{b}"), "blue".into());
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json(v: &serde_json::Value) -> Option<TwoTreeColoring> {
        let obj = v.as_object()?;
        let mut out = TwoTreeColoring::default();
        for (key, val) in obj {
            let (a, b) = key.split_once(',')?;
            let e = norm(a, b);
            match val.as_str()? {
                "red" => out.red.insert(e),
                "blue" => out.blue.insert(e),
                _ => return None,
            };
        }
        Some(out)
    }
}

#[derive(Debug, Error)]
pub enum TreesError {
    #[error("certificate does not verify against the graph")]
    BadCertificate,
    #[error("group {0} has no symmetric tree decomposition theory")]
    UnsupportedGroup(GroupName),
    #[error("step failed during replay: {0}")]
    Step(#[from] construction::StepError),
    #[error("certification of an embedded component failed: {0}")]
    Certify(#[from] construction::CertifyError),
    #[error("internal error: no symmetric decomposition found ({0}); the decomposition corollaries guarantee one exists")]
    SearchFailed(String),
}

/// Result of [`decompose`]: the coloring plus the indices of the steps where
/// the propagation rules did not apply and the fallback search ran.
#[derive(Clone, Debug)]
pub struct DecomposeOutcome {
    pub coloring: TwoTreeColoring,
    pub fallback_steps: Vec<usize>,
}

fn swaps_classes(name: GroupName) -> bool {
    // half-turn trees are invariant; inversion/reflection trees swap
    name != GroupName::C2
}

/// Color for the image edge of an edge colored `c`.
fn image_color(name: GroupName, c: Color) -> Color {
    if swaps_classes(name) {
        c.other()
    } else {
        c
    }
}

fn edge_ids(g: &SymmetricGraph) -> BTreeSet<IdEdge> {
    g.edges()
        .iter()
        .map(|&(a, b)| norm(g.vertex_id(a), g.vertex_id(b)))
        .collect()
}

fn involution_ids(g: &SymmetricGraph) -> BTreeMap<String, String> {
    let op = g.group().non_identity()[0];
    (0..g.vertex_count() as u32)
        .map(|v| {
            (
                g.vertex_id(v).to_string(),
                g.vertex_id(g.apply(op, v)).to_string(),
            )
        })
        .collect()
}

fn image_edge(invol: &BTreeMap<String, String>, e: &IdEdge) -> IdEdge {
    norm(&invol[&e.0], &invol[&e.1])
}

fn is_spanning_tree(vertices: &BTreeSet<String>, edges: &BTreeSet<IdEdge>) -> bool {
    if edges.len() + 1 != vertices.len() {
        return false;
    }
    let index: BTreeMap<&String, usize> = vertices.iter().zip(0..).collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (a, b) in edges {
        let (Some(&ia), Some(&ib)) = (index.get(a), index.get(b)) else {
            return false;
        };
        let (ra, rb) = (find(&mut parent, ia), find(&mut parent, ib));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// True iff the coloring partitions the edges into two spanning trees with
/// the group's symmetry property (invariant classes for the half-turn,
/// swapped classes for inversion/reflection).
pub fn verify_decomposition(graph: &SymmetricGraph, coloring: &TwoTreeColoring) -> bool {
    let edges = edge_ids(graph);
    let mut union: BTreeSet<IdEdge> = coloring.red.clone();
    for e in &coloring.blue {
        if !union.insert(e.clone()) {
            return false; // overlap
        }
    }
    if union != edges {
        return false;
    }
    let vertices: BTreeSet<String> = graph.vertex_ids().iter().cloned().collect();
    if !is_spanning_tree(&vertices, &coloring.red) || !is_spanning_tree(&vertices, &coloring.blue)
    {
        return false;
    }
    let invol = involution_ids(graph);
    let red_image: BTreeSet<IdEdge> = coloring
        .red
        .iter()
        .map(|e| image_edge(&invol, e))
        .collect();
    if swaps_classes(graph.group().name) {
        red_image == coloring.blue
    } else {
        red_image == coloring.red
    }
}

/// Exact fallback for the swapped-classes groups: pick one edge per orbit so
/// that the picks form a spanning tree (then the images form the other).
/// Matroid-intersection style augmenting search between the graphic matroid
/// and the one-per-orbit partition matroid.
fn rainbow_spanning_tree(g: &SymmetricGraph) -> Option<TwoTreeColoring> {
    let invol = involution_ids(g);
    let edges: Vec<IdEdge> = edge_ids(g).into_iter().collect();
    let n = g.vertex_count();
    // orbit index per edge
    let mut orbit_of: Vec<usize> = vec![usize::MAX; edges.len()];
    let pos: BTreeMap<&IdEdge, usize> = edges.iter().zip(0..).collect();
    let mut orbits = 0;
    for i in 0..edges.len() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        orbit_of[i] = orbits;
        let img = image_edge(&invol, &edges[i]);
        if img == edges[i] {
            return None; // fixed edge: no swapped decomposition exists
        }
        orbit_of[pos[&img]] = orbits;
        orbits += 1;
    }
    let vid: BTreeMap<&String, usize> = {
        let mut m = BTreeMap::new();
        for v in g.vertex_ids() {
            let k = m.len();
            m.insert(v, k);
        }
        m
    };
    let ends = |e: &IdEdge| (vid[&e.0], vid[&e.1]);

    let mut in_set = vec![false; edges.len()];
    let forest_ok = |sel: &[bool], extra_in: Option<usize>, removed: Option<usize>| -> bool {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, e) in edges.iter().enumerate() {
            let take = (sel[i] && Some(i) != removed) || Some(i) == extra_in;
            if !take {
                continue;
            }
            let (a, b) = ends(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    };
    let orbit_used = |sel: &[bool], orbit: usize, ignoring: Option<usize>| -> bool {
        (0..edges.len()).any(|i| sel[i] && Some(i) != ignoring && orbit_of[i] == orbit)
    };

    for _round in 0..n.saturating_sub(1) {
        // BFS in the exchange digraph from free-to-add-in-graphic sources to
        // free-orbit sinks
        let mut prev: Vec<Option<usize>> = vec![None; edges.len()];
        let mut queued = vec![false; edges.len()];
        let mut queue: std::collections::VecDeque<usize> = Default::default();
        for (i, _) in edges.iter().enumerate() {
            if !in_set[i] && forest_ok(&in_set, Some(i), None) {
                queue.push_back(i);
                queued[i] = true;
            }
        }
        let mut found = None;
        'bfs: while let Some(x) = queue.pop_front() {
            if !in_set[x] && !orbit_used(&in_set, orbit_of[x], None) {
                found = Some(x);
                break 'bfs;
            }
            if !in_set[x] {
                // x -> y when removing y frees x's orbit
                for (y, _) in edges.iter().enumerate() {
                    if in_set[y]
                        && !queued[y]
                        && orbit_of[y] == orbit_of[x]
                        && !orbit_used(&in_set, orbit_of[x], Some(y))
                    {
                        queued[y] = true;
                        prev[y] = Some(x);
                        queue.push_back(y);
                    }
                }
            } else {
                // y -> x when the forest stays a forest after the swap
                for (z, _) in edges.iter().enumerate() {
                    if !in_set[z] && !queued[z] && forest_ok(&in_set, Some(z), Some(x)) {
                        queued[z] = true;
                        prev[z] = Some(x);
                        queue.push_back(z);
                    }
                }
            }
        }
        let mut cur = found?;
        // augment along the alternating path
        loop {
            in_set[cur] = !in_set[cur];
            match prev[cur] {
                Some(p) => cur = p,
                None => break,
            }
        }
        if in_set.iter().filter(|&&b| b).count() == n - 1 {
            let mut out = TwoTreeColoring::default();
            for (i, e) in edges.iter().enumerate() {
                out.insert(e.clone(), if in_set[i] { Color::Red } else { Color::Blue });
            }
            return Some(out);
        }
    }
    None
}

/// Exhaustive fallback for invariant classes (half-turn): choose whole edge
/// orbits for the red tree. Only feasible for modest orbit counts.
fn invariant_tree_search(g: &SymmetricGraph) -> Option<TwoTreeColoring> {
    let invol = involution_ids(g);
    let edges: Vec<IdEdge> = edge_ids(g).into_iter().collect();
    let mut orbit_reps: Vec<Vec<IdEdge>> = Vec::new();
    let mut seen: BTreeSet<IdEdge> = BTreeSet::new();
    for e in &edges {
        if seen.contains(e) {
            continue;
        }
        let img = image_edge(&invol, e);
        seen.insert(e.clone());
        let mut orbit = vec![e.clone()];
        if img != *e {
            seen.insert(img.clone());
            orbit.push(img);
        }
        orbit_reps.push(orbit);
    }
    if orbit_reps.len() > 22 {
        return None;
    }
    let vertices: BTreeSet<String> = g.vertex_ids().iter().cloned().collect();
    for mask in 0u32..(1 << orbit_reps.len()) {
        let mut red: BTreeSet<IdEdge> = BTreeSet::new();
        for (k, orbit) in orbit_reps.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                red.extend(orbit.iter().cloned());
            }
        }
        if red.len() + 1 != vertices.len() {
            continue;
        }
        let blue: BTreeSet<IdEdge> = edges.iter().filter(|e| !red.contains(*e)).cloned().collect();
        if is_spanning_tree(&vertices, &red) && is_spanning_tree(&vertices, &blue) {
            let mut out = TwoTreeColoring::default();
            for e in red {
                out.insert(e, Color::Red);
            }
            for e in blue {
                out.insert(e, Color::Blue);
            }
            return Some(out);
        }
    }
    None
}

fn fallback(g: &SymmetricGraph) -> Option<TwoTreeColoring> {
    if swaps_classes(g.group().name) {
        rainbow_spanning_tree(g)
    } else {
        invariant_tree_search(g)
    }
}

/// Decompose a certified Γ-tight graph into its two symmetric spanning
/// trees, propagating the base coloring along the certificate.
pub fn decompose(
    graph: &SymmetricGraph,
    cert: &Certificate,
) -> Result<DecomposeOutcome, TreesError> {
    let name = graph.group().name;
    if !matches!(
        name,
        GroupName::Ci | GroupName::C2 | GroupName::CsAxial | GroupName::CsHorizontal
    ) {
        return Err(TreesError::UnsupportedGroup(name));
    }
    let entry = catalog::entries_for(cert.group)
        .into_iter()
        .find(|e| e.id == cert.base)
        .ok_or(TreesError::BadCertificate)?;
    let base_map: BTreeMap<String, String> = cert.base_map.iter().cloned().collect();
    let mut current = entry
        .graph
        .relabel(&base_map)
        .map_err(|_| TreesError::BadCertificate)?;
    let mut coloring = TwoTreeColoring::default();
    for (&e, color) in entry
        .red
        .iter()
        .map(|e| (e, Color::Red))
        .chain(entry.blue.iter().map(|e| (e, Color::Blue)))
    {
        let a = &base_map[entry.graph.vertex_id(e.0)];
        let b = &base_map[entry.graph.vertex_id(e.1)];
        coloring.insert(norm(a, b), color);
    }
    let mut fallback_steps = Vec::new();
    for (idx, step) in cert.steps.iter().enumerate() {
        let next = construction::apply_step(&current, step)?;
        let invol = involution_ids(&current);
        let img = |v: &String| invol[v].clone();
        let mut ok = true;
        match step {
            Step::Sym0Ext {
                new: (v, w),
                neighbors: (a, b),
            } => {
                coloring.insert(norm(v, a), Color::Red);
                coloring.insert(norm(v, b), Color::Blue);
                coloring.insert(norm(w, &img(a)), image_color(name, Color::Red));
                coloring.insert(norm(w, &img(b)), image_color(name, Color::Blue));
            }
            Step::FixedVertex0Ext { new, neighbor } => {
                coloring.insert(norm(new, neighbor), Color::Red);
                coloring.insert(norm(new, &img(neighbor)), image_color(name, Color::Red));
            }
            Step::Sym1Ext {
                new: (v, w),
                removed: (x, y),
                third,
            } => {
                let c = coloring.remove(&norm(x, y)).ok_or(TreesError::BadCertificate)?;
                let ci = coloring
                    .remove(&norm(&img(x), &img(y)))
                    .ok_or(TreesError::BadCertificate)?;
                coloring.insert(norm(v, x), c);
                coloring.insert(norm(v, y), c);
                coloring.insert(norm(v, third), c.other());
                coloring.insert(norm(w, &img(x)), ci);
                coloring.insert(norm(w, &img(y)), ci);
                coloring.insert(norm(w, &img(third)), ci.other());
            }
            Step::Double1Ext {
                new: (v, w),
                fixed_edge: (x, ximg),
                third,
            } => {
                let c = coloring
                    .remove(&norm(x, ximg))
                    .ok_or(TreesError::BadCertificate)?;
                coloring.insert(norm(v, x), c);
                coloring.insert(norm(v, w), c);
                coloring.insert(norm(w, ximg), c);
                if third == ximg {
                    coloring.insert(norm(v, ximg), c.other());
                    coloring.insert(norm(w, x), c.other());
                } else {
                    coloring.insert(norm(v, third), c.other());
                    coloring.insert(norm(w, &img(third)), c.other());
                }
            }
            Step::VertexToK4 {
                at,
                new,
                new_images,
                assignment,
            } => {
                let ati = img(at);
                for (y, target) in assignment {
                    if target == at {
                        continue;
                    }
                    if *y == ati {
                        let c = coloring
                            .remove(&norm(at, &ati))
                            .ok_or(TreesError::BadCertificate)?;
                        let timg = if let Some(k) = new.iter().position(|n| n == target) {
                            new_images[k].clone()
                        } else {
                            ati.clone()
                        };
                        coloring.insert(norm(target, &timg), c);
                    } else {
                        let c = coloring
                            .remove(&norm(at, y))
                            .ok_or(TreesError::BadCertificate)?;
                        let ci = coloring
                            .remove(&norm(&ati, &img(y)))
                            .ok_or(TreesError::BadCertificate)?;
                        let timg = if let Some(k) = new.iter().position(|n| n == target) {
                            new_images[k].clone()
                        } else {
                            ati.clone()
                        };
                        coloring.insert(norm(target, y), c);
                        coloring.insert(norm(&timg, &img(y)), ci);
                    }
                }
                // spanning-tree coloring of each new K4: red path, blue star
                let (w0, n1, n2, n3) = (at, &new[0], &new[1], &new[2]);
                let (w0i, m1, m2, m3) = (&ati, &new_images[0], &new_images[1], &new_images[2]);
                for (e, c) in [
                    (norm(w0, n1), Color::Red),
                    (norm(n1, n2), Color::Red),
                    (norm(n2, n3), Color::Red),
                    (norm(w0, n2), Color::Blue),
                    (norm(w0, n3), Color::Blue),
                    (norm(n1, n3), Color::Blue),
                ] {
                    coloring.insert(e, c);
                }
                for (e, c) in [
                    (norm(w0i, m1), image_color(name, Color::Red)),
                    (norm(m1, m2), image_color(name, Color::Red)),
                    (norm(m2, m3), image_color(name, Color::Red)),
                    (norm(w0i, m2), image_color(name, Color::Blue)),
                    (norm(w0i, m3), image_color(name, Color::Blue)),
                    (norm(m1, m3), image_color(name, Color::Blue)),
                ] {
                    coloring.insert(e, c);
                }
            }
            Step::VertexToC4 {
                at,
                new,
                new_image,
                doubled: (d1, d2),
                moved,
            } => {
                let ati = img(at);
                for m in moved {
                    let c = coloring
                        .remove(&norm(at, m))
                        .ok_or(TreesError::BadCertificate)?;
                    coloring.insert(norm(new, m), c);
                    let (mi_at, mi_m) = (ati.clone(), img(m));
                    if let Some(ci) = coloring.remove(&norm(&mi_at, &mi_m)) {
                        coloring.insert(norm(new_image, &mi_m), ci);
                    }
                }
                let c1 = coloring
                    .color_of(&norm(at, d1))
                    .ok_or(TreesError::BadCertificate)?;
                let c2 = coloring
                    .color_of(&norm(at, d2))
                    .ok_or(TreesError::BadCertificate)?;
                if c1 != c2 {
                    coloring.insert(norm(new, d1), c1);
                    coloring.insert(norm(new, d2), c2);
                    if new != new_image {
                        coloring.insert(norm(new_image, &img(d1)), image_color(name, c1));
                        coloring.insert(norm(new_image, &img(d2)), image_color(name, c2));
                    }
                } else {
                    // both doubled edges share a color: search the ≤ 2^4
                    // colorings of the quadrilateral (images forced)
                    ok = false;
                    let quad = [norm(at, d1), norm(at, d2), norm(new, d1), norm(new, d2)];
                    let quad_images: Vec<IdEdge> = {
                        let next_inv = involution_ids(&next);
                        quad.iter().map(|e| image_edge(&next_inv, e)).collect()
                    };
                    'search: for mask in 0u32..16 {
                        let mut trial = coloring.clone();
                        for e in quad.iter().chain(quad_images.iter()) {
                            trial.remove(e);
                        }
                        for (k, e) in quad.iter().enumerate() {
                            let c = if (mask >> k) & 1 == 1 {
                                Color::Red
                            } else {
                                Color::Blue
                            };
                            trial.insert(e.clone(), c);
                            let e_img = &quad_images[k];
                            if e_img != e {
                                trial.insert(e_img.clone(), image_color(name, c));
                            }
                        }
                        if verify_decomposition(&next, &trial) {
                            coloring = trial;
                            ok = true;
                            break 'search;
                        }
                    }
                    if ok {
                        fallback_steps.push(idx);
                    }
                }
            }
            Step::JoinTwoEdges {
                other,
                edges: ((x, y), (x2, y2)),
            } => {
                let h = other.to_graph(current.group().clone())?;
                let h_cert = construction::certify(&h)?;
                let sub = decompose(&h, &h_cert)?;
                fallback_steps.extend(sub.fallback_steps.iter().map(|_| idx));
                for e in sub.coloring.red {
                    coloring.insert(e, Color::Red);
                }
                for e in sub.coloring.blue {
                    coloring.insert(e, Color::Blue);
                }
                coloring.insert(norm(x, y), Color::Red);
                coloring.insert(norm(x2, y2), image_color(name, Color::Red));
            }
            Step::VertexToTight { .. } => {
                // no propagation rule in the theory: exact fallback search
                ok = false;
            }
        }
        if !ok || !verify_decomposition(&next, &coloring) {
            let found = fallback(&next).ok_or_else(|| {
                TreesError::SearchFailed(format!(
                    "step {idx} ({})",
                    step.variant_name()
                ))
            })?;
            coloring = found;
            fallback_steps.push(idx);
        }
        current = next;
    }
    // the certificate must reproduce the target graph
    if !construction::verify_certificate(graph, cert) {
        return Err(TreesError::BadCertificate);
    }
    // translate through an isomorphism when the replay ids differ
    if edge_ids(graph) != edge_ids(&current) {
        let isos = graph.equivariant_isomorphisms(&current);
        let m = isos.first().ok_or(TreesError::BadCertificate)?;
        let translate = |e: &IdEdge, g_to: &SymmetricGraph| -> IdEdge {
            // m maps current indices onto graph indices
            let ai = current.vertex_index(&e.0).unwrap();
            let bi = current.vertex_index(&e.1).unwrap();
            norm(g_to.vertex_id(m[ai as usize]), g_to.vertex_id(m[bi as usize]))
        };
        let mut out = TwoTreeColoring::default();
        for e in &coloring.red {
            out.insert(translate(e, graph), Color::Red);
        }
        for e in &coloring.blue {
            out.insert(translate(e, graph), Color::Blue);
        }
        coloring = out;
    }
    if !verify_decomposition(graph, &coloring) {
        return Err(TreesError::SearchFailed("final verification".into()));
    }
    Ok(DecomposeOutcome {
        coloring,
        fallback_steps,
    })
}
