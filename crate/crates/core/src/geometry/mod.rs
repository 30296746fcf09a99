//! Exact rational frameworks on the cylinder `x^2 + y^2 = 1`: symmetric
//! realizations, the rigidity matrix, rank and kernel over the rationals,
//! and the isostaticity verdicts.
//!
//! Everything here is exact: cylinder points come from the tangent-half-angle
//! parametrization, the symmetry operations are signed diagonal matrices, and
//! rank has no tolerance.

pub mod linalg;

use num::bigint::BigInt;
use num::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{SymOp, SymmetricGraph};
pub use linalg::{exact_rank, kernel_basis, Rat};

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("point {0} is not on the cylinder")]
    NotOnCylinder(String),
    #[error("{0} has no exact rational matrix")]
    NonExactOp(SymOp),
    #[error("graph failed validation: {0}")]
    InvalidGraph(String),
    #[error("geometric degeneracy: {0}")]
    Degenerate(String),
    #[error("framework shape mismatch: {0}")]
    Shape(String),
}

/// An exact rational point on the cylinder; `x^2 + y^2 = 1` is enforced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylPoint {
    x: Rat,
    y: Rat,
    z: Rat,
}

impl CylPoint {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Result<CylPoint, GeomError> {
        if &x * &x + &y * &y != Rat::one() {
            return Err(GeomError::NotOnCylinder(format!("({x}, {y}, {z})")));
        }
        Ok(CylPoint { x, y, z })
    }

    /// Rational circle point from an integer parameter:
    /// `(x, y) = ((1 - t^2)/(1 + t^2), 2t/(1 + t^2))`.
    pub fn from_tangent(t: i64, z: Rat) -> CylPoint {
        let t = BigInt::from(t);
        let t2 = &t * &t;
        let den = &t2 + BigInt::one();
        let x = Rat::new(BigInt::one() - &t2, den.clone());
        let y = Rat::new(BigInt::from(2) * t, den);
        CylPoint { x, y, z }
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }

    pub fn z(&self) -> &Rat {
        &self.z
    }

    /// Normal to the cylinder at this point: `(x, y, 0)`.
    pub fn normal(&self) -> [Rat; 3] {
        [self.x.clone(), self.y.clone(), Rat::zero()]
    }

    fn apply_signs(&self, s: [i64; 3]) -> CylPoint {
        let flip = |v: &Rat, s: i64| if s < 0 { -v.clone() } else { v.clone() };
        CylPoint {
            x: flip(&self.x, s[0]),
            y: flip(&self.y, s[1]),
            z: flip(&self.z, s[2]),
        }
    }
}

/// Apply a symmetry operation with its canonical representative (axial mirror
/// in the xz-plane, half-turn about the x-axis). Only the exact operations
/// are accepted; `rotation_z(n)` with `n ∉ {1, 2}` is rejected.
pub fn apply_isometry(op: SymOp, point: &CylPoint) -> Result<CylPoint, GeomError> {
    match op.canonical() {
        SymOp::RotationZ(n) if n != 2 => Err(GeomError::NonExactOp(op)),
        SymOp::ImproperZ(n) => Err(GeomError::NonExactOp(SymOp::ImproperZ(n))),
        exact => Ok(point.apply_signs(exact.canonical_matrix())),
    }
}

/// A symmetric graph together with an exact symmetric placement on the
/// cylinder: `τ(γ)·p(v) = p(γ·v)` and adjacent points are distinct.
#[derive(Clone, Debug)]
pub struct Framework {
    graph: SymmetricGraph,
    points: Vec<CylPoint>,
}

impl Framework {
    pub fn new(graph: SymmetricGraph, points: Vec<CylPoint>) -> Result<Framework, GeomError> {
        if points.len() != graph.vertex_count() {
            return Err(GeomError::Shape(format!(
                "{} points for {} vertices",
                points.len(),
                graph.vertex_count()
            )));
        }
        for &op in graph.group().non_identity() {
            let tau = graph.group().tau(op).expect("element of own group");
            for v in 0..graph.vertex_count() as u32 {
                let image = points[v as usize].apply_signs(tau);
                let w = graph.apply(op, v);
                if image != points[w as usize] {
                    return Err(GeomError::Shape(format!(
                        "placement is not equivariant at {op} on vertex {}",
                        graph.vertex_id(v)
                    )));
                }
            }
        }
        for &(a, b) in graph.edges() {
            if points[a as usize] == points[b as usize] {
                return Err(GeomError::Degenerate(format!(
                    "adjacent vertices {} and {} coincide",
                    graph.vertex_id(a),
                    graph.vertex_id(b)
                )));
            }
        }
        Ok(Framework { graph, points })
    }

    pub fn graph(&self) -> &SymmetricGraph {
        &self.graph
    }

    pub fn point(&self, v: u32) -> &CylPoint {
        &self.points[v as usize]
    }

    pub fn points(&self) -> &[CylPoint] {
        &self.points
    }
}

/// One 3-vector of rationals per vertex; an infinitesimal motion iff the
/// rigidity matrix annihilates it.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionVector(pub Vec<[Rat; 3]>);

impl MotionVector {
    pub fn flat(&self) -> Vec<Rat> {
        self.0
            .iter()
            .flat_map(|b| b.iter().cloned())
            .collect()
    }

    pub fn from_flat(v: &[Rat]) -> MotionVector {
        assert_eq!(v.len() % 3, 0);
        MotionVector(
            v.chunks(3)
                .map(|c| [c[0].clone(), c[1].clone(), c[2].clone()])
                .collect(),
        )
    }
}

/// The `(|E| + |V|) × 3|V|` rigidity matrix: edge rows then normal rows, in
/// input order.
#[derive(Clone, Debug)]
pub struct RigidityMatrix {
    pub rows: Vec<Vec<Rat>>,
    pub n_edges: usize,
    pub n_vertices: usize,
}

impl RigidityMatrix {
    pub fn row_count(&self) -> usize {
        self.n_edges + self.n_vertices
    }

    pub fn col_count(&self) -> usize {
        3 * self.n_vertices
    }

    /// `R · u` for a motion vector, exact.
    pub fn apply(&self, u: &MotionVector) -> Vec<Rat> {
        linalg::mat_vec(&self.rows, &u.flat())
    }
}

pub fn rigidity_matrix(fw: &Framework) -> RigidityMatrix {
    let n = fw.graph.vertex_count();
    let m = fw.graph.edge_count();
    let mut rows = Vec::with_capacity(m + n);
    for &(i, j) in fw.graph.edges() {
        let mut row = vec![Rat::zero(); 3 * n];
        let pi = fw.point(i);
        let pj = fw.point(j);
        let d = [&pi.x - &pj.x, &pi.y - &pj.y, &pi.z - &pj.z];
        for k in 0..3 {
            row[3 * i as usize + k] = d[k].clone();
            row[3 * j as usize + k] = -d[k].clone();
        }
        rows.push(row);
    }
    for v in 0..n {
        let mut row = vec![Rat::zero(); 3 * n];
        let p = fw.point(v as u32);
        row[3 * v] = p.x.clone();
        row[3 * v + 1] = p.y.clone();
        rows.push(row);
    }
    RigidityMatrix {
        rows,
        n_edges: m,
        n_vertices: n,
    }
}

/// Kernel basis of a rigidity matrix as motion vectors.
pub fn motion_kernel(matrix: &RigidityMatrix) -> Vec<MotionVector> {
    kernel_basis(&matrix.rows)
        .into_iter()
        .map(|v| MotionVector::from_flat(&v))
        .collect()
}

/// The two trivial motions: `t` differentiates the z-translation,
/// `r` the rotation about the z-axis (`r_k = (-y_k, x_k, 0)`).
pub fn trivial_motion_basis(fw: &Framework) -> (MotionVector, MotionVector) {
    let t = MotionVector(
        fw.points
            .iter()
            .map(|_| [Rat::zero(), Rat::zero(), Rat::one()])
            .collect(),
    );
    let r = MotionVector(
        fw.points
            .iter()
            .map(|p| [-p.y.clone(), p.x.clone(), Rat::zero()])
            .collect(),
    );
    (t, r)
}

/// Exact rank of the rigidity matrix, with a structural speedup: the normal
/// rows have single-block support and always contribute `|V|` independent
/// rows, so one coordinate column per vertex is eliminated exactly and only
/// the reduced `|E| × 2|V|` block needs full elimination. `rank ≤ 3|V| - 2`
/// caps the reduced block at `2|V| - 2` and lets a modular check certify the
/// generic (full-rank) case quickly.
pub fn framework_rank(fw: &Framework) -> usize {
    let n = fw.graph.vertex_count();
    if n == 0 {
        return 0;
    }
    let mut reduced: Vec<Vec<Rat>> = Vec::with_capacity(fw.graph.edge_count());
    for &(i, j) in fw.graph.edges() {
        let mut row = vec![Rat::zero(); 2 * n];
        for (v, other) in [(i, j), (j, i)] {
            let p = fw.point(v);
            let q = fw.point(other);
            // block entries of the edge row at v: p_v - p_other
            let (dx, dy, dz) = (&p.x - &q.x, &p.y - &q.y, &p.z - &q.z);
            // eliminate the pivot coordinate with v's normal row (x, y, 0)
            let free = if !p.x.is_zero() {
                // pivot on x leaves (0, dy - dx·y/x, dz)
                &dy - &dx * &p.y / &p.x
            } else {
                // x = 0 forces y = ±1; pivot on y leaves (dx - dy·x/y, 0, dz)
                &dx - &dy * &p.x / &p.y
            };
            row[2 * v as usize] = free;
            row[2 * v as usize + 1] = dz;
        }
        reduced.push(row);
    }
    let ceiling = fw.graph.edge_count().min(2 * n.saturating_sub(1));
    n + linalg::rank_with_ceiling(&reduced, ceiling)
}

pub fn is_infinitesimally_rigid(fw: &Framework) -> bool {
    framework_rank(fw) == 3 * fw.graph.vertex_count() - 2
}

pub fn is_independent(fw: &Framework) -> bool {
    framework_rank(fw) == fw.graph.edge_count() + fw.graph.vertex_count()
}

pub fn is_isostatic(fw: &Framework) -> bool {
    let rank = framework_rank(fw);
    rank == 3 * fw.graph.vertex_count() - 2
        && rank == fw.graph.edge_count() + fw.graph.vertex_count()
}

/// Draw an exact symmetric realization: one free point per vertex orbit,
/// images by the group's isometries, fixed vertices on the fixed locus of
/// their stabilizer. Coincident adjacent points trigger a bounded redraw.
pub fn random_symmetric_realization(
    graph: &SymmetricGraph,
    seed: u64,
    coordinate_range: u32,
) -> Result<Framework, GeomError> {
    realization_with_signs(graph, seed, coordinate_range, None).map(|(fw, _)| fw)
}

/// Like [`random_symmetric_realization`], but the fixed-locus branch choices
/// (which of the two mirror lines or axis points each fixed vertex takes)
/// follow the bits of `signs` instead of coin flips. The fixed locus of a
/// mirror or half-turn has two connected components, so the space of
/// symmetric realizations splits into components indexed by these choices;
/// rank maximality is only guaranteed on some of them, and the isostaticity
/// test scans them. Returns the framework and the number of sign decisions.
pub fn realization_with_signs(
    graph: &SymmetricGraph,
    seed: u64,
    coordinate_range: u32,
    signs: Option<u64>,
) -> Result<(Framework, u32), GeomError> {
    let report = graph.validate();
    if !report.ok() {
        return Err(GeomError::InvalidGraph(format!(
            "{:?}",
            report.violations
        )));
    }
    let range = coordinate_range.max(2) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = None;
    for _attempt in 0..16 {
        match draw_once(graph, &mut rng, range, signs) {
            Ok(out) => return Ok(out),
            Err(e @ GeomError::Degenerate(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| GeomError::Degenerate("no valid draw".into())))
}

fn draw_once(
    graph: &SymmetricGraph,
    rng: &mut ChaCha8Rng,
    range: i64,
    signs: Option<u64>,
) -> Result<(Framework, u32), GeomError> {
    let n = graph.vertex_count();
    let group = graph.group();
    let mut points: Vec<Option<CylPoint>> = vec![None; n];
    let mut sign_decisions = 0u32;
    let mut next_sign = |rng: &mut ChaCha8Rng| -> i64 {
        let k = sign_decisions;
        sign_decisions += 1;
        match signs {
            Some(bits) => {
                if (bits >> k.min(63)) & 1 == 1 {
                    1
                } else {
                    -1
                }
            }
            None => {
                if rng.gen::<bool>() {
                    1
                } else {
                    -1
                }
            }
        }
    };
    let (vertex_orbits, _) = graph.orbits();
    for orbit in vertex_orbits {
        let rep = orbit[0];
        let stab: Vec<[i64; 3]> = group
            .non_identity()
            .iter()
            .filter(|&&op| graph.apply(op, rep) == rep)
            .map(|&op| group.tau(op).expect("element of own group"))
            .collect();
        let need_x0 = stab.iter().any(|t| t[0] < 0);
        let need_y0 = stab.iter().any(|t| t[1] < 0);
        let need_z0 = stab.iter().any(|t| t[2] < 0);
        if need_x0 && need_y0 {
            return Err(GeomError::Degenerate(format!(
                "vertex {} is fixed by an operation without cylinder fixed points",
                graph.vertex_id(rep)
            )));
        }
        let rand_z = |rng: &mut ChaCha8Rng| {
            let num = rng.gen_range(1..=range);
            let den = rng.gen_range(1..=range);
            let sign = if rng.gen::<bool>() { 1 } else { -1 };
            linalg::rat_frac(sign * num, den)
        };
        let z = if need_z0 { Rat::zero() } else { rand_z(rng) };
        let point = if need_y0 {
            // on the xz-plane mirror: one of the two lines x = ±1 (a single
            // point each when z is forced to 0)
            let s = next_sign(rng);
            CylPoint::new(linalg::rat(s), Rat::zero(), z).expect("(±1,0,z) is on the cylinder")
        } else if need_x0 {
            // y-axis half-turn locus (0, ±1, 0)
            let s = next_sign(rng);
            CylPoint::new(Rat::zero(), linalg::rat(s), z).expect("(0,±1,0) is on the cylinder")
        } else {
            CylPoint::from_tangent(rng.gen_range(-range..=range), z)
        };
        for &op in group.elements() {
            let w = graph.apply(op, rep);
            if points[w as usize].is_none() {
                let tau = group.tau(op).expect("element of own group");
                points[w as usize] = Some(point.apply_signs(tau));
            }
        }
    }
    let points: Vec<CylPoint> = points.into_iter().map(|p| p.expect("orbit cover")).collect();
    Framework::new(graph.clone(), points).map(|fw| (fw, sign_decisions))
}

/// Verdict of the randomized geometric test. A positive answer is a
/// certificate (rank is exact); a negative answer is probabilistic over the
/// drawn realizations. `degenerate_size` flags `|V| ≤ 2`, where the
/// trivial-motion dimension convention matters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsostaticVerdict {
    pub isostatic: bool,
    pub probabilistic: bool,
    pub max_rank: usize,
    pub target_rank: usize,
    pub row_count: usize,
    pub realizations: u32,
    pub seed: u64,
    pub degenerate_size: bool,
}

/// Decide `τ(Γ)`-isostaticity of a graph by drawing up to `retries` random
/// symmetric realizations; one isostatic draw certifies the graph.
pub fn graph_is_gamma_isostatic(
    graph: &SymmetricGraph,
    seed: u64,
    retries: u32,
) -> Result<IsostaticVerdict, GeomError> {
    let n = graph.vertex_count();
    let target_rank = if n == 0 { 0 } else { 3 * n - 2 };
    let row_count = graph.edge_count() + n;
    let mut max_rank = 0;
    let mut tried = 0;
    let verdict = |isostatic: bool, max_rank: usize, tried: u32| IsostaticVerdict {
        isostatic,
        probabilistic: !isostatic,
        max_rank,
        target_rank,
        row_count,
        realizations: tried,
        seed,
        degenerate_size: n <= 2,
    };
    for k in 0..retries.max(1) {
        let (fw, sign_count) =
            realization_with_signs(graph, seed.wrapping_add(k as u64), 10_000, None)?;
        tried += 1;
        let rank = framework_rank(&fw);
        max_rank = max_rank.max(rank);
        if rank == target_rank && rank == row_count {
            return Ok(verdict(true, rank, tried));
        }
        // the fixed locus of a mirror or perpendicular half-turn has two
        // components, so scan the branch assignments: rank maximality is
        // only guaranteed on some of them
        if sign_count > 0 {
            let width = sign_count.min(5);
            for bits in 0..(1u64 << width) {
                let Ok((fw2, _)) = realization_with_signs(
                    graph,
                    seed.wrapping_add(k as u64),
                    10_000,
                    Some(bits),
                ) else {
                    continue; // this branch pattern forces a degeneracy
                };
                tried += 1;
                let rank = framework_rank(&fw2);
                max_rank = max_rank.max(rank);
                if rank == target_rank && rank == row_count {
                    return Ok(verdict(true, rank, tried));
                }
            }
        }
    }
    Ok(verdict(false, max_rank, tried))
}

/// `(τ ⊗ P_V)(γ) u`: permute vertex blocks by the action and apply `τ(γ)`
/// to each block.
pub fn external_rep_apply(graph: &SymmetricGraph, op: SymOp, u: &[Rat]) -> Vec<Rat> {
    let n = graph.vertex_count();
    assert_eq!(u.len(), 3 * n);
    let tau = graph.group().tau(op).expect("element of the group");
    let mut out = vec![Rat::zero(); 3 * n];
    for v in 0..n as u32 {
        let w = graph.apply(op, v);
        for k in 0..3 {
            let val = &u[3 * v as usize + k];
            out[3 * w as usize + k] = if tau[k] < 0 { -val.clone() } else { val.clone() };
        }
    }
    out
}

/// `P̃_E(γ) z`: permute edge coordinates then vertex coordinates.
pub fn internal_rep_apply(graph: &SymmetricGraph, op: SymOp, z: &[Rat]) -> Vec<Rat> {
    let m = graph.edge_count();
    let n = graph.vertex_count();
    assert_eq!(z.len(), m + n);
    let mut out = vec![Rat::zero(); m + n];
    for (idx, &e) in graph.edges().iter().enumerate() {
        let image = graph.apply_edge(op, e);
        let target = graph
            .edges()
            .binary_search(&image)
            .expect("automorphism image");
        out[target] = z[idx].clone();
    }
    for v in 0..n as u32 {
        let w = graph.apply(op, v);
        out[m + w as usize] = z[m + v as usize].clone();
    }
    out
}
