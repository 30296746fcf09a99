//! Deterministic random corpora for the test suites: certified random
//! constructions per group, symmetry-preserving edge perturbations, plain
//! random graphs for the sparsity oracle, and random symmetric graphs for
//! the representation checks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cylrig::catalog;
use cylrig::construction::{apply_step, GraphData, Step, StepError};
use cylrig::graph::{GroupName, GroupSpec, SymOp, SymmetricGraph};

pub struct Gen {
    pub rng: ChaCha8Rng,
    counter: u64,
}

#[allow(dead_code)]
impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            counter: 0,
        }
    }

    fn fresh(&mut self) -> String {
        self.counter += 1;
        format!("g{}", self.counter)
    }

    pub fn random_base(&mut self, group: GroupName) -> SymmetricGraph {
        let entries = catalog::entries_for(group);
        let entry = entries.choose(&mut self.rng).expect("catalog entry");
        entry.graph.clone()
    }

    fn pick_vertex(&mut self, g: &SymmetricGraph) -> u32 {
        self.rng.gen_range(0..g.vertex_count() as u32)
    }

    fn pick_nonfixed_vertex(&mut self, g: &SymmetricGraph) -> Option<u32> {
        let cands: Vec<u32> = (0..g.vertex_count() as u32)
            .filter(|&v| g.partner(v) != v)
            .collect();
        cands.choose(&mut self.rng).copied()
    }

    fn id(&self, g: &SymmetricGraph, v: u32) -> String {
        g.vertex_id(v).to_string()
    }

    /// A random valid step of the named variant, if the graph admits one.
    pub fn random_step_of(&mut self, g: &SymmetricGraph, variant: &str) -> Option<Step> {
        let name = g.group().name;
        match variant {
            "sym_0_ext" => {
                let a = self.pick_vertex(g);
                let mut b = self.pick_vertex(g);
                for _ in 0..8 {
                    if b != a {
                        break;
                    }
                    b = self.pick_vertex(g);
                }
                if a == b {
                    return None;
                }
                Some(Step::Sym0Ext {
                    new: (self.fresh(), self.fresh()),
                    neighbors: (self.id(g, a), self.id(g, b)),
                })
            }
            "fixed_vertex_0_ext" => {
                let x = self.pick_nonfixed_vertex(g)?;
                Some(Step::FixedVertex0Ext {
                    new: self.fresh(),
                    neighbor: self.id(g, x),
                })
            }
            "sym_1_ext" => {
                let movable: Vec<(u32, u32)> = g
                    .edges()
                    .iter()
                    .copied()
                    .filter(|&e| g.apply_edge(g.group().non_identity()[0], e) != e)
                    .collect();
                let &(a, b) = movable.choose(&mut self.rng)?;
                let z = (0..g.vertex_count() as u32)
                    .filter(|&v| v != a && v != b)
                    .collect::<Vec<_>>();
                let &z = z.choose(&mut self.rng)?;
                Some(Step::Sym1Ext {
                    new: (self.fresh(), self.fresh()),
                    removed: (self.id(g, a), self.id(g, b)),
                    third: self.id(g, z),
                })
            }
            "vertex_to_k4" => {
                let w = self.pick_nonfixed_vertex(g)?;
                let new = [self.fresh(), self.fresh(), self.fresh()];
                let new_images = [self.fresh(), self.fresh(), self.fresh()];
                let targets: Vec<String> = std::iter::once(self.id(g, w))
                    .chain(new.iter().cloned())
                    .collect();
                let mut assignment = Vec::new();
                let mut covered: BTreeSet<String> = BTreeSet::new();
                for y in g.neighbors(w) {
                    let yid = self.id(g, y);
                    if covered.insert(yid.clone()) {
                        let t = targets.choose(&mut self.rng).unwrap().clone();
                        assignment.push((yid, t));
                    }
                }
                Some(Step::VertexToK4 {
                    at: self.id(g, w),
                    new,
                    new_images,
                    assignment,
                })
            }
            "vertex_to_c4" => {
                let w = self.pick_nonfixed_vertex(g)?;
                let wi = g.partner(w);
                let nbrs: Vec<u32> = g.neighbors(w).into_iter().filter(|&u| u != wi).collect();
                if nbrs.len() < 2 {
                    return None;
                }
                let mut picks = nbrs.clone();
                picks.shuffle(&mut self.rng);
                let (d1, d2) = (picks[0], picks[1]);
                let mut moved = Vec::new();
                for &m in &picks[2..] {
                    if self.rng.gen::<bool>() {
                        moved.push(self.id(g, m));
                    }
                }
                Some(Step::VertexToC4 {
                    at: self.id(g, w),
                    new: self.fresh(),
                    new_image: self.fresh(),
                    doubled: (self.id(g, d1), self.id(g, d2)),
                    moved,
                })
            }
            "vertex_to_c4_mirror" => {
                let fixed: Vec<u32> = (0..g.vertex_count() as u32)
                    .filter(|&v| g.partner(v) == v)
                    .collect();
                let &w = fixed.choose(&mut self.rng)?;
                let nbrs = g.neighbors(w);
                let nonfixed: Vec<u32> = nbrs
                    .iter()
                    .copied()
                    .filter(|&v| g.partner(v) != v)
                    .collect();
                let &v = nonfixed.choose(&mut self.rng)?;
                let vi = g.partner(v);
                // moved must be orbit-closed within the remaining neighbors
                let mut moved: BTreeSet<String> = BTreeSet::new();
                for &m in &nbrs {
                    if m == v || m == vi {
                        continue;
                    }
                    if self.rng.gen::<bool>() {
                        moved.insert(self.id(g, m));
                        moved.insert(self.id(g, g.partner(m)));
                    }
                }
                let moved: Vec<String> = moved
                    .into_iter()
                    .filter(|m| {
                        let mi = g.vertex_index(m).unwrap();
                        nbrs.contains(&mi) && mi != v && mi != vi
                    })
                    .collect();
                let u = self.fresh();
                Some(Step::VertexToC4 {
                    at: self.id(g, w),
                    new: u.clone(),
                    new_image: u,
                    doubled: (self.id(g, v), self.id(g, vi)),
                    moved,
                })
            }
            "join_two_edges" => {
                if name != GroupName::Ci {
                    return None;
                }
                let base = self.random_base(GroupName::Ci);
                let other = self.relabel_fresh(&base);
                let x = self.pick_vertex(g);
                let xi = g.partner(x);
                let other_g = other
                    .to_graph(GroupSpec::new(GroupName::Ci))
                    .expect("relabel stays valid");
                let y = self.rng.gen_range(0..other_g.vertex_count() as u32);
                let yi = other_g.partner(y);
                Some(Step::JoinTwoEdges {
                    edges: (
                        (self.id(g, x), other_g.vertex_id(y).to_string()),
                        (self.id(g, xi), other_g.vertex_id(yi).to_string()),
                    ),
                    other,
                })
            }
            "double_1_ext" => {
                if name != GroupName::C2 {
                    return None;
                }
                let (_, fixed_edges) = g.fixed_elements(SymOp::HalfturnPerp).ok()?;
                let &(x, xi) = fixed_edges.first()?;
                let (x, xi) = if g.partner(x) == xi { (x, xi) } else { (xi, x) };
                let third: Vec<u32> = (0..g.vertex_count() as u32).filter(|&v| v != x).collect();
                let &z = third.choose(&mut self.rng)?;
                Some(Step::Double1Ext {
                    new: (self.fresh(), self.fresh()),
                    fixed_edge: (self.id(g, x), self.id(g, xi)),
                    third: self.id(g, z),
                })
            }
            "vertex_to_tight" => {
                let fixed: Vec<u32> = (0..g.vertex_count() as u32)
                    .filter(|&v| g.partner(v) == v)
                    .collect();
                let &w = fixed.choose(&mut self.rng)?;
                let base = self.random_base(name);
                let block = self.relabel_fresh(&base);
                let block_g = block.to_graph(g.group().clone()).ok()?;
                let mut attach = Vec::new();
                let mut covered: BTreeSet<u32> = BTreeSet::new();
                for y in g.neighbors(w) {
                    if !covered.insert(y) {
                        continue;
                    }
                    let yi = g.partner(y);
                    covered.insert(yi);
                    let h = self.rng.gen_range(0..block_g.vertex_count() as u32);
                    let hi = block_g.partner(h);
                    attach.push((self.id(g, y), block_g.vertex_id(h).to_string()));
                    if yi != y {
                        attach.push((self.id(g, yi), block_g.vertex_id(hi).to_string()));
                    }
                }
                Some(Step::VertexToTight {
                    at: self.id(g, w),
                    block,
                    attach,
                })
            }
            other => panic!("unknown variant {other}"),
        }
    }

    fn relabel_fresh(&mut self, g: &SymmetricGraph) -> GraphData {
        let mut data = GraphData::from_graph(g);
        let map: std::collections::BTreeMap<String, String> = data
            .vertices
            .iter()
            .map(|v| (v.clone(), self.fresh()))
            .collect();
        for v in &mut data.vertices {
            *v = map[v].clone();
        }
        for (a, b) in data.edges.iter_mut().chain(data.action.iter_mut()) {
            *a = map[a].clone();
            *b = map[b].clone();
        }
        data
    }

    /// Variants applicable to the group, with rough weights.
    fn menu(&self, name: GroupName) -> Vec<&'static str> {
        let mut m = vec![
            "sym_0_ext",
            "sym_0_ext",
            "sym_1_ext",
            "sym_1_ext",
            "vertex_to_k4",
            "vertex_to_c4",
        ];
        match name {
            GroupName::Ci => m.push("join_two_edges"),
            GroupName::C2 => m.push("double_1_ext"),
            GroupName::CsAxial | GroupName::CsHorizontal => {
                m.push("fixed_vertex_0_ext");
                m.push("fixed_vertex_0_ext");
                m.push("vertex_to_c4_mirror");
                m.push("vertex_to_tight");
            }
            _ => {}
        }
        m
    }

    /// Grow a random Γ-tight graph to at least `min_vertices` vertices by
    /// random certified steps from a random base graph.
    pub fn grow(&mut self, group: GroupName, min_vertices: usize) -> SymmetricGraph {
        let mut g = self.random_base(group);
        let mut guard = 0;
        while g.vertex_count() < min_vertices {
            guard += 1;
            assert!(guard < 4000, "generator stalled");
            let menu = self.menu(group);
            let variant = menu[self.rng.gen_range(0..menu.len())];
            let Some(step) = self.random_step_of(&g, variant) else {
                continue;
            };
            match apply_step(&g, &step) {
                Ok(next) => g = next,
                Err(StepError::BadParam(_)) => continue,
                Err(e) => panic!("step generator produced an internal error: {e}"),
            }
        }
        g
    }

    /// Swap random same-size edge orbits with non-edge orbits, preserving the
    /// action but usually breaking tightness.
    pub fn perturb(&mut self, g: &SymmetricGraph, swaps: usize) -> SymmetricGraph {
        let mut edges: BTreeSet<(u32, u32)> = g.edges().iter().copied().collect();
        let op = g.group().non_identity()[0];
        let n = g.vertex_count() as u32;
        for _ in 0..swaps {
            for _attempt in 0..200 {
                let all: Vec<(u32, u32)> = edges.iter().copied().collect();
                let &e = match all.choose(&mut self.rng) {
                    Some(e) => e,
                    None => break,
                };
                let e_img = g.apply_edge(op, e);
                let out_orbit: BTreeSet<(u32, u32)> = [e, e_img].into_iter().collect();
                // candidate non-edge of matching orbit size
                let a = self.rng.gen_range(0..n);
                let b = self.rng.gen_range(0..n);
                if a == b {
                    continue;
                }
                let f = cylrig::graph::edge(a, b);
                let f_img = g.apply_edge(op, f);
                let in_orbit: BTreeSet<(u32, u32)> = [f, f_img].into_iter().collect();
                if in_orbit.iter().any(|x| edges.contains(x)) {
                    continue;
                }
                if in_orbit.len() != out_orbit.len() {
                    continue;
                }
                for x in &out_orbit {
                    edges.remove(x);
                }
                for x in &in_orbit {
                    edges.insert(*x);
                }
                break;
            }
        }
        let action: Vec<Vec<u32>> = g
            .group()
            .non_identity()
            .iter()
            .map(|&o| (0..n).map(|v| g.apply(o, v)).collect())
            .collect();
        let out = SymmetricGraph::from_indices(
            g.group().clone(),
            g.vertex_ids().to_vec(),
            edges.into_iter().collect(),
            action,
        );
        assert!(out.validate().ok(), "perturbation kept the action");
        out
    }

    /// Plain random graph on `n` vertices for the sparsity oracle.
    pub fn random_plain(&mut self, n: usize) -> Vec<(u32, u32)> {
        let mut pairs = Vec::new();
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                pairs.push((a, b));
            }
        }
        pairs.shuffle(&mut self.rng);
        let m = self.rng.gen_range(0..=(2 * n).min(pairs.len()));
        pairs.truncate(m);
        pairs.sort_unstable();
        pairs
    }

    /// Random Γ-symmetric graph (not necessarily tight) built from free
    /// orbits under the regular action, for representation checks.
    pub fn random_symmetric(&mut self, group: GroupName, orbit_count: usize) -> SymmetricGraph {
        let spec = GroupSpec::new(group);
        let order = spec.order();
        let elements: Vec<SymOp> = spec.elements().to_vec();
        let mut vertices = Vec::new();
        for i in 0..orbit_count {
            for k in 0..order {
                vertices.push(format!("o{i}e{k}"));
            }
        }
        let n = vertices.len() as u32;
        let vid = |i: usize, k: usize| (i * order + k) as u32;
        // regular action: element a sends (i, k) to (i, index of a∘elements[k])
        let mut action = Vec::new();
        for &a in spec.non_identity() {
            let mut perm = vec![0u32; n as usize];
            for i in 0..orbit_count {
                for k in 0..order {
                    let prod = spec.compose(a, elements[k]).expect("closed");
                    let m = elements.iter().position(|&e| e == prod).unwrap();
                    perm[vid(i, k) as usize] = vid(i, m);
                }
            }
            action.push(perm);
        }
        let g0 = SymmetricGraph::from_indices(spec.clone(), vertices.clone(), vec![], action.clone());
        let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
        let wanted = (2 * orbit_count).max(3);
        let mut guard = 0;
        while edges.len() < wanted && guard < 200 {
            guard += 1;
            let a = self.rng.gen_range(0..n);
            let b = self.rng.gen_range(0..n);
            if a == b {
                continue;
            }
            for &op in spec.elements() {
                let e = cylrig::graph::edge(g0.apply(op, a), g0.apply(op, b));
                if e.0 != e.1 {
                    edges.insert(e);
                }
            }
        }
        let out = SymmetricGraph::from_indices(spec, vertices, edges.into_iter().collect(), action);
        assert!(out.validate().ok());
        out
    }
}

/// The construction groups in a fixed order.
#[allow(dead_code)]
pub const CONSTRUCTION_GROUPS: [GroupName; 3] = [GroupName::Ci, GroupName::C2, GroupName::CsAxial];
