//! Combinatorial arc systems on compact orientable surfaces.
//!
//! A model is a trivalent graph (arcs plus boundary circles) with the cyclic
//! edge-end order at each vertex forced by the orientation, together with one
//! record per complementary region: its genus, its free boundary circles, and
//! which traced frontier circuits bound it. The surface itself is never
//! stored; Euler-characteristic additivity is the consistency law:
//! chi(S) = chi(graph) + sum над regions of chi(region).

mod keyineq;
mod pi1;
mod reduce;

pub use keyineq::{
    key_consequence, key_inequality_subgraph, widen_length, widen_subgraph, KeyConsOutcome,
    KeyIneqOutcome, Labeling, WeightSystem,
};
pub use pi1::{complement_components, pi1_oracle, pi1_subgraph, Components};
pub use reduce::{reduce_system, Reduction};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, Subgraph, VertexId};

pub type ArcId = u32;
pub type CircuitId = u32;
pub type RegionId = u32;
pub type Dart = u32;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionSpec {
    pub genus: u32,
    #[serde(default)]
    pub free_boundary: u32,
    /// Traced circuit ids bounding this region. If omitted, `frontier` many
    /// circuits are taken in trace order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuits: Option<Vec<CircuitId>>,
    /// Frontier circuit count; redundant when `circuits` is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frontier: Option<u32>,
}

/// Serialized model: boundary circles as cyclic vertex lists, arcs as vertex
/// pairs, and the complementary-region records.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcModelSpec {
    pub circles: Vec<Vec<VertexId>>,
    pub arcs: Vec<(VertexId, VertexId)>,
    pub regions: Vec<RegionSpec>,
}

#[derive(Clone, Debug)]
pub struct Region {
    pub genus: u32,
    pub free_circles: u32,
    pub circuits: Vec<CircuitId>,
}

impl Region {
    /// chi of the compact region surface: 2 - 2g - frontier - free.
    pub fn chi(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.circuits.len() as i64 - self.free_circles as i64
    }

    pub fn is_disk(&self) -> bool {
        self.genus == 0 && self.free_circles == 0 && self.circuits.len() == 1
    }
}

/// One step of a traced frontier circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// An arc traversed on one of its two sides; `forward` is the stored
    /// endpoint order.
    Arc { arc: ArcId, forward: bool },
    /// A boundary edge; `positive` means in the circle orientation.
    BEdge { bedge: u32, positive: bool },
}

#[derive(Clone, Debug)]
pub struct Circuit {
    pub steps: Vec<Step>,
    pub darts: Vec<Dart>,
}

impl Circuit {
    /// Number of arc traversals.
    pub fn arc_steps(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Arc { .. })).count()
    }
}

#[derive(Clone, Debug)]
pub struct ArcModel {
    spec: ArcModelSpec,
    n_arcs: usize,
    n_vertices: usize,
    /// vertex -> its unique arc
    vertex_arc: Vec<ArcId>,
    /// vertex -> (circle, position)
    vertex_pos: Vec<(u32, usize)>,
    /// bedge -> (circle, from-vertex, to-vertex); bedge k of circle c runs
    /// from the vertex at position k to position k+1 (cyclically).
    bedges: Vec<(u32, VertexId, VertexId)>,
    /// rotation successor over all darts of the full model
    rot_next: Vec<Dart>,
    circuits: Vec<Circuit>,
    regions: Vec<Region>,
    circuit_region: Vec<RegionId>,
    /// which circuit each arc side lies on: [dart0 circuit, dart1 circuit]
    arc_side_circuit: Vec<[CircuitId; 2]>,
    /// which circuit each bedge's inner (negative) side lies on
    bedge_circuit: Vec<CircuitId>,
    /// the underlying multigraph: vertices 0..2n-1, arcs 0..n-1, then bedges
    graph: Multigraph,
    chi_surface: i64,
    boundary_circles: usize,
    genus: u32,
}

// dart helpers: dart = 2*edge + dir; edges: arcs then bedges
fn dart(edge: usize, dir: u32) -> Dart {
    (2 * edge) as u32 + dir
}

/// Tracing of the canonical ribbon structure on circles + arcs, before any
/// region data is attached.
pub(crate) struct Traced {
    pub vertex_arc: Vec<ArcId>,
    pub vertex_pos: Vec<(u32, usize)>,
    pub bedges: Vec<(u32, VertexId, VertexId)>,
    pub rot_next: Vec<Dart>,
    pub circuits: Vec<Circuit>,
    pub arc_side_circuit: Vec<[CircuitId; 2]>,
    pub bedge_circuit: Vec<CircuitId>,
}

pub(crate) fn trace_structure(
    circles: &[Vec<VertexId>],
    arcs: &[(VertexId, VertexId)],
) -> Result<Traced> {
    let n_arcs = arcs.len();
    if n_arcs == 0 {
        return Err(Error::MalformedRibbon("arc system is empty".into()));
    }
    let n_vertices = 2 * n_arcs;
    let mut vertex_pos = vec![None; n_vertices];
    let mut n_bedges = 0usize;
    for (c, circle) in circles.iter().enumerate() {
        if circle.is_empty() {
            return Err(Error::MalformedRibbon(format!("circle {c} has no vertices")));
        }
        for (i, &v) in circle.iter().enumerate() {
            let slot = vertex_pos
                .get_mut(v as usize)
                .ok_or_else(|| Error::MalformedRibbon(format!("vertex {v} out of range")))?;
            if slot.is_some() {
                return Err(Error::DuplicateId(v));
            }
            *slot = Some((c as u32, i));
        }
        n_bedges += circle.len();
    }
    let vertex_pos: Vec<(u32, usize)> = vertex_pos
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or(Error::MalformedRibbon(format!("vertex {v} on no circle"))))
        .collect::<Result<_>>()?;
    if n_bedges != n_vertices {
        return Err(Error::MalformedRibbon("vertex/boundary-edge count mismatch".into()));
    }
    let mut vertex_arc = vec![None; n_vertices];
    for (a, &(u, w)) in arcs.iter().enumerate() {
        if u == w {
            return Err(Error::MalformedRibbon(format!("arc {a} has equal endpoints")));
        }
        for v in [u, w] {
            let slot = vertex_arc
                .get_mut(v as usize)
                .ok_or_else(|| Error::MalformedRibbon(format!("vertex {v} out of range")))?;
            if slot.is_some() {
                return Err(Error::MalformedRibbon(format!("vertex {v} on two arcs")));
            }
            *slot = Some(a as ArcId);
        }
    }
    let vertex_arc: Vec<ArcId> = vertex_arc
        .into_iter()
        .enumerate()
        .map(|(v, a)| a.ok_or(Error::MalformedRibbon(format!("vertex {v} on no arc"))))
        .collect::<Result<_>>()?;

    let mut bedges = Vec::with_capacity(n_bedges);
    let mut bedge_at: BTreeMap<(u32, usize), usize> = BTreeMap::new();
    for (c, circle) in circles.iter().enumerate() {
        let k = circle.len();
        for i in 0..k {
            bedge_at.insert((c as u32, i), bedges.len());
            bedges.push((c as u32, circle[i], circle[(i + 1) % k]));
        }
    }

    let n_edges = n_arcs + n_bedges;
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); n_vertices];
    for v in 0..n_vertices {
        let (c, i) = vertex_pos[v];
        let k = circles[c as usize].len();
        let out_b = bedge_at[&(c, i)];
        let in_b = bedge_at[&(c, (i + k - 1) % k)];
        let a = vertex_arc[v] as usize;
        let arc_dir = if arcs[a].0 == v as VertexId { 0 } else { 1 };
        rot[v] = vec![dart(n_arcs + out_b, 0), dart(a, arc_dir), dart(n_arcs + in_b, 1)];
    }
    let mut rot_next = vec![u32::MAX; 2 * n_edges];
    for r in &rot {
        for (i, &d) in r.iter().enumerate() {
            rot_next[d as usize] = r[(i + 1) % r.len()];
        }
    }

    let faces = trace_faces(&rot_next, 2 * n_edges, |_| true);
    let mut circuits = Vec::new();
    let mut arc_side_circuit = vec![[u32::MAX; 2]; n_arcs];
    let mut bedge_circuit = vec![u32::MAX; n_bedges];
    for face in faces {
        let outer = face.iter().all(|&d| (d / 2) as usize >= n_arcs && d % 2 == 0);
        if outer {
            continue;
        }
        let cid = circuits.len() as CircuitId;
        let mut steps = Vec::with_capacity(face.len());
        for &d in &face {
            let e = (d / 2) as usize;
            if e < n_arcs {
                arc_side_circuit[e][(d % 2) as usize] = cid;
                steps.push(Step::Arc { arc: e as ArcId, forward: d % 2 == 0 });
            } else {
                let b = e - n_arcs;
                debug_assert_eq!(d % 2, 1, "full-model region circuits run negatively");
                bedge_circuit[b] = cid;
                steps.push(Step::BEdge { bedge: b as u32, positive: d % 2 == 0 });
            }
        }
        circuits.push(Circuit { steps, darts: face });
    }
    Ok(Traced {
        vertex_arc,
        vertex_pos,
        bedges,
        rot_next,
        circuits,
        arc_side_circuit,
        bedge_circuit,
    })
}

impl ArcModel {
    pub fn n_arcs(&self) -> usize {
        self.n_arcs
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn spec(&self) -> &ArcModelSpec {
        &self.spec
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn circuits(&self) -> &[Circuit] {
        &self.circuits
    }

    pub fn chi_surface(&self) -> i64 {
        self.chi_surface
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn boundary_circles(&self) -> usize {
        self.boundary_circles
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.boundary_circles == 2
    }

    /// Edge id of an arc in the graph view.
    pub fn arc_edge(&self, a: ArcId) -> EdgeId {
        a
    }

    pub fn is_arc_edge(&self, e: EdgeId) -> bool {
        (e as usize) < self.n_arcs
    }

    /// Bedge index -> graph edge id.
    pub fn bedge_edge(&self, b: usize) -> EdgeId {
        (self.n_arcs + b) as EdgeId
    }

    /// Oriented endpoints of a boundary edge, in the circle direction.
    /// (The graph view sorts endpoint pairs, so use this when the direction
    /// along the boundary matters.)
    pub fn bedge_endpoints(&self, b: usize) -> (VertexId, VertexId) {
        let (_, from, to) = self.bedges[b];
        (from, to)
    }

    pub fn n_bedges(&self) -> usize {
        self.bedges.len()
    }

    pub fn region_of_circuit(&self, c: CircuitId) -> RegionId {
        self.circuit_region[c as usize]
    }

    pub fn arc_side_region(&self, a: ArcId, side: usize) -> RegionId {
        self.circuit_region[self.arc_side_circuit[a as usize][side] as usize]
    }

    pub fn bedge_region(&self, b: usize) -> RegionId {
        self.circuit_region[self.bedge_circuit[b] as usize]
    }

    pub fn vertex_arc(&self, v: VertexId) -> ArcId {
        self.vertex_arc[v as usize]
    }

    /// Build and validate a model from its spec.
    pub fn new(spec: ArcModelSpec) -> Result<Self> {
        let n_arcs = spec.arcs.len();
        let n_vertices = 2 * n_arcs;
        let Traced {
            vertex_arc,
            vertex_pos,
            bedges,
            rot_next,
            circuits,
            arc_side_circuit,
            bedge_circuit,
        } = trace_structure(&spec.circles, &spec.arcs)?;
        let n_edges = n_arcs + bedges.len();
        let _ = n_edges;

        // region assignment
        let mut circuit_region = vec![u32::MAX; circuits.len()];
        let mut regions = Vec::with_capacity(spec.regions.len());
        let mut cursor = 0usize;
        for (r, rs) in spec.regions.iter().enumerate() {
            let ids: Vec<CircuitId> = match (&rs.circuits, rs.frontier) {
                (Some(ids), _) => ids.clone(),
                (None, Some(b)) => {
                    let ids = (cursor..cursor + b as usize).map(|c| c as CircuitId).collect();
                    cursor += b as usize;
                    ids
                }
                (None, None) => {
                    return Err(Error::RegionMismatch(format!(
                        "region {r}: neither circuits nor frontier given"
                    )))
                }
            };
            for &c in &ids {
                let slot = circuit_region.get_mut(c as usize).ok_or_else(|| {
                    Error::RegionMismatch(format!("region {r} names unknown circuit {c}"))
                })?;
                if *slot != u32::MAX {
                    return Err(Error::RegionMismatch(format!("circuit {c} assigned twice")));
                }
                *slot = r as RegionId;
            }
            if ids.is_empty() {
                return Err(Error::RegionMismatch(format!("region {r} has no frontier")));
            }
            regions.push(Region { genus: rs.genus, free_circles: rs.free_boundary, circuits: ids });
        }
        if let Some(c) = circuit_region.iter().position(|&r| r == u32::MAX) {
            return Err(Error::RegionMismatch(format!(
                "traced circuit {c} not covered by any region (of {})",
                circuits.len()
            )));
        }

        // graph view
        let verts: Vec<VertexId> = (0..n_vertices as u32).collect();
        let mut edge_lists: Vec<(EdgeId, Vec<VertexId>)> = Vec::with_capacity(n_edges);
        for (a, &(u, w)) in spec.arcs.iter().enumerate() {
            edge_lists.push((a as EdgeId, vec![u, w]));
        }
        for (b, &(_, from, to)) in bedges.iter().enumerate() {
            edge_lists.push(((n_arcs + b) as EdgeId, vec![from, to]));
        }
        let graph = Multigraph::build(&verts, &edge_lists)?;

        // surface invariants
        let chi_graph = -(n_arcs as i64);
        debug_assert_eq!(graph.euler_char(), chi_graph);
        let chi_surface = chi_graph + regions.iter().map(|r| r.chi()).sum::<i64>();
        let boundary_circles =
            spec.circles.len() + regions.iter().map(|r| r.free_circles as usize).sum::<usize>();
        let two_g = 2 - chi_surface - boundary_circles as i64;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(Error::RegionMismatch(format!(
                "genus is not a non-negative integer: chi = {chi_surface}, boundary = {boundary_circles}"
            )));
        }

        let model = ArcModel {
            spec,
            n_arcs,
            n_vertices,
            vertex_arc,
            vertex_pos,
            bedges,
            rot_next,
            circuits,
            regions,
            circuit_region,
            arc_side_circuit,
            bedge_circuit,
            graph,
            chi_surface,
            boundary_circles,
            genus: (two_g / 2) as u32,
        };

        // connectivity of the assembled surface
        if !model.surface_connected() {
            return Err(Error::MalformedRibbon("surface is not connected".into()));
        }
        // essentiality: a disk region whose frontier meets one arc once flags
        // that arc as boundary-parallel
        for region in &model.regions {
            if region.is_disk() {
                let circ = &model.circuits[region.circuits[0] as usize];
                if circ.arc_steps() == 1 {
                    let Step::Arc { arc, .. } = circ.steps.iter().find(|s| matches!(s, Step::Arc { .. })).unwrap() else {
                        unreachable!()
                    };
                    return Err(Error::BoundaryParallelArc(*arc));
                }
            }
        }
        Ok(model)
    }

    fn surface_connected(&self) -> bool {
        // union-find over circles and regions, joined by arcs and circuits
        let nc = self.spec.circles.len();
        let nr = self.regions.len();
        let mut uf = UnionFind::new(nc + nr);
        for (a, &(u, w)) in self.spec.arcs.iter().enumerate() {
            let cu = self.vertex_pos[u as usize].0 as usize;
            let cw = self.vertex_pos[w as usize].0 as usize;
            uf.union(cu, cw);
            let _ = a;
        }
        for (cid, &r) in self.circuit_region.iter().enumerate() {
            // a circuit touches the circles of its bedges and its region
            for step in &self.circuits[cid].steps {
                if let Step::BEdge { bedge, .. } = step {
                    let c = self.bedges[*bedge as usize].0 as usize;
                    uf.union(nc + r as usize, c);
                }
                if let Step::Arc { arc, .. } = step {
                    let c = self.vertex_pos[self.spec.arcs[*arc as usize].0 as usize].0 as usize;
                    uf.union(nc + r as usize, c);
                }
            }
        }
        let root = uf.find(0);
        (0..nc + nr).all(|i| uf.find(i) == root)
    }

    /// Trace the faces of the ribbon structure restricted to a subgraph of
    /// the model graph, together with the per-dart presence map used.
    pub fn trace_subgraph_faces(&self, sub: &Subgraph<'_>) -> Vec<Vec<Dart>> {
        let n_edges = self.n_arcs + self.bedges.len();
        let present = |d: Dart| sub.contains_edge(d / 2);
        // filtered rotation successor: skip absent darts
        let rot_next = &self.rot_next;
        let next = |d: Dart| -> Dart {
            let mut cur = rot_next[d as usize];
            loop {
                if present(cur) {
                    return cur;
                }
                cur = rot_next[cur as usize];
            }
        };
        let mut seen = vec![false; 2 * n_edges];
        let mut faces = Vec::new();
        for d0 in 0..(2 * n_edges) as u32 {
            if seen[d0 as usize] || !present(d0) {
                continue;
            }
            let mut face = Vec::new();
            let mut d = d0;
            loop {
                seen[d as usize] = true;
                face.push(d);
                d = next(d ^ 1);
                if d == d0 {
                    break;
                }
            }
            faces.push(face);
        }
        faces
    }

    /// Pairs of distinct arcs cobounding a rectangle: a disk region whose
    /// frontier is (arc, bedge, arc, bedge).
    pub fn parallel_rectangle_pairs(&self) -> Vec<(ArcId, ArcId)> {
        let mut out = Vec::new();
        for region in &self.regions {
            if !region.is_disk() {
                continue;
            }
            let circ = &self.circuits[region.circuits[0] as usize];
            if circ.steps.len() != 4 {
                continue;
            }
            let arcs: Vec<ArcId> = circ
                .steps
                .iter()
                .filter_map(|s| match s {
                    Step::Arc { arc, .. } => Some(*arc),
                    _ => None,
                })
                .collect();
            if arcs.len() == 2 && arcs[0] != arcs[1] {
                out.push((arcs[0].min(arcs[1]), arcs[0].max(arcs[1])));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// No two arcs are parallel.
    pub fn is_reduced(&self) -> bool {
        self.parallel_rectangle_pairs().is_empty()
    }

    /// The dual graph: one vertex per region, one edge per arc joining the
    /// regions on its two sides.
    pub fn dual_graph(&self) -> Multigraph {
        let verts: Vec<VertexId> = (0..self.regions.len() as u32).collect();
        let edges: Vec<(EdgeId, Vec<VertexId>)> = (0..self.n_arcs)
            .map(|a| {
                (
                    a as EdgeId,
                    vec![
                        self.arc_side_region(a as ArcId, 0),
                        self.arc_side_region(a as ArcId, 1),
                    ],
                )
            })
            .collect();
        Multigraph::build(&verts, &edges).expect("dual graph is well-formed")
    }

    /// Primitive word of a face in the edges of the model graph, as signed
    /// edge ids (+ for dart direction 0).
    pub fn face_word(&self, face: &[Dart]) -> Vec<(EdgeId, bool)> {
        face.iter().map(|&d| (d / 2, d % 2 == 0)).collect()
    }
}

/// Generic oriented face tracing over a rotation-successor table.
fn trace_faces(rot_next: &[Dart], n_darts: usize, present: impl Fn(Dart) -> bool) -> Vec<Vec<Dart>> {
    let mut seen = vec![false; n_darts];
    let mut faces = Vec::new();
    for d0 in 0..n_darts as u32 {
        if seen[d0 as usize] || !present(d0) {
            continue;
        }
        let mut face = Vec::new();
        let mut d = d0;
        loop {
            seen[d as usize] = true;
            face.push(d);
            d = rot_next[(d ^ 1) as usize];
            if d == d0 {
                break;
            }
        }
        faces.push(face);
    }
    faces
}

/// Freely reduce a signed edge word; empty means contractible in the graph.
pub fn freely_reduce(word: &[(EdgeId, bool)]) -> Vec<(EdgeId, bool)> {
    let mut stack: Vec<(EdgeId, bool)> = Vec::with_capacity(word.len());
    for &(e, s) in word {
        if let Some(&(te, ts)) = stack.last() {
            if te == e && ts != s {
                stack.pop();
                continue;
            }
        }
        stack.push((e, s));
    }
    // cyclic reduction
    while stack.len() >= 2 {
        let (fe, fs) = stack[0];
        let (le, ls) = *stack.last().unwrap();
        if fe == le && fs != ls {
            stack.remove(0);
            stack.pop();
        } else {
            break;
        }
    }
    stack
}

#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }
    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Subgraph of the model graph given by arc and bedge selections.
pub fn model_subgraph<'g>(
    model: &'g ArcModel,
    arcs: impl IntoIterator<Item = ArcId>,
    bedges: impl IntoIterator<Item = u32>,
    extra_vertices: impl IntoIterator<Item = VertexId>,
) -> Result<Subgraph<'g>> {
    let g = model.graph();
    let mut vs: BTreeSet<VertexId> = extra_vertices.into_iter().collect();
    let mut es: BTreeSet<EdgeId> = BTreeSet::new();
    for a in arcs {
        es.insert(model.arc_edge(a));
        let (u, w) = model.spec.arcs[a as usize];
        vs.insert(u);
        vs.insert(w);
    }
    for b in bedges {
        es.insert(model.bedge_edge(b as usize));
        let (_, from, to) = model.bedges[b as usize];
        vs.insert(from);
        vs.insert(to);
    }
    Subgraph::new(g, vs, es)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// One arc across the annulus: essential (endpoints on distinct circles).
    pub fn annulus_cross() -> ArcModel {
        ArcModel::new(ArcModelSpec {
            circles: vec![vec![0], vec![1]],
            arcs: vec![(0, 1)],
            regions: vec![RegionSpec {
                genus: 0,
                free_boundary: 0,
                circuits: Some(vec![0]),
                frontier: None,
            }],
        })
        .unwrap()
    }

    /// One non-separating arc on a one-holed torus: both endpoints on the one
    /// circle, single region of genus 0 bounded by both traced circuits.
    pub fn holed_torus_arc() -> ArcModel {
        ArcModel::new(ArcModelSpec {
            circles: vec![vec![0, 1]],
            arcs: vec![(0, 1)],
            regions: vec![RegionSpec {
                genus: 0,
                free_boundary: 0,
                circuits: Some(vec![0, 1]),
                frontier: None,
            }],
        })
        .unwrap()
    }

    #[test]
    fn annulus_invariants() {
        let m = annulus_cross();
        assert_eq!(m.chi_surface(), 0);
        assert_eq!(m.genus(), 0);
        assert_eq!(m.boundary_circles(), 2);
        assert!(m.is_annulus());
        assert_eq!(m.circuits().len(), 1);
        assert_eq!(m.circuits()[0].steps.len(), 4);
    }

    #[test]
    fn holed_torus_invariants() {
        let m = holed_torus_arc();
        assert_eq!(m.chi_surface(), -1);
        assert_eq!(m.genus(), 1);
        assert_eq!(m.boundary_circles(), 1);
        // the complement is an annulus-like region with two frontier circuits
        assert_eq!(m.circuits().len(), 2);
        assert_eq!(m.regions()[0].chi(), 0);
    }

    #[test]
    fn boundary_parallel_arc_rejected() {
        // both endpoints on the same circle, two disk regions: one of them
        // meets the arc once
        let err = ArcModel::new(ArcModelSpec {
            circles: vec![vec![0, 1], vec![]],
            arcs: vec![(0, 1)],
            regions: vec![],
        })
        .unwrap_err();
        assert!(matches!(err, Error::MalformedRibbon(_)));

        let err = ArcModel::new(ArcModelSpec {
            circles: vec![vec![0, 1]],
            arcs: vec![(0, 1)],
            regions: vec![
                RegionSpec { genus: 0, free_boundary: 0, circuits: Some(vec![0]), frontier: None },
                RegionSpec { genus: 1, free_boundary: 0, circuits: Some(vec![1]), frontier: None },
            ],
        })
        .unwrap_err();
        assert!(matches!(err, Error::BoundaryParallelArc(0)));
    }

    #[test]
    fn empty_arc_set_rejected() {
        let err = ArcModel::new(ArcModelSpec {
            circles: vec![vec![]],
            arcs: vec![],
            regions: vec![],
        })
        .unwrap_err();
        assert!(matches!(err, Error::MalformedRibbon(_)));
    }

    #[test]
    fn genus_integrality_rejected() {
        // declaring the one-holed-torus complement a disk breaks integrality
        let err = ArcModel::new(ArcModelSpec {
            circles: vec![vec![0, 1]],
            arcs: vec![(0, 1)],
            regions: vec![RegionSpec {
                genus: 0,
                free_boundary: 0,
                circuits: Some(vec![0]),
                frontier: None,
            }],
        })
        .unwrap_err();
        assert!(matches!(err, Error::RegionMismatch(_)));
    }

    #[test]
    fn dual_graph_of_holed_torus() {
        let m = holed_torus_arc();
        let dual = m.dual_graph();
        assert_eq!(dual.num_vertices(), 1);
        assert_eq!(dual.num_edges(), 1);
        let (_, betti) = dual.components_and_betti();
        assert_eq!(betti, vec![1]);
        assert!(betti[0] as u32 >= m.genus());
    }

    #[test]
    fn two_parallel_arcs_make_a_rectangle() {
        // circles (0,1,2,3) and (4,5,6,7) with arcs 0-5, 1-4 parallel:
        // rectangle region between them
        let m = ArcModel::new(ArcModelSpec {
            circles: vec![vec![0, 1], vec![2, 3]],
            arcs: vec![(0, 3), (1, 2)],
            regions: vec![
                RegionSpec { genus: 0, free_boundary: 0, circuits: Some(vec![0]), frontier: None },
                RegionSpec { genus: 1, free_boundary: 0, circuits: Some(vec![1]), frontier: None },
            ],
        });
        // one of the two circuits is a rectangle (2 arcs + 2 bedges)
        let m = m.unwrap();
        let rect = m
            .circuits()
            .iter()
            .filter(|c| c.steps.len() == 4 && c.arc_steps() == 2)
            .count();
        assert!(rect >= 1);
    }

    #[test]
    fn free_reduction() {
        let w = vec![(0u32, true), (1, true), (1, false), (0, false), (2, true)];
        assert_eq!(freely_reduce(&w), vec![(2, true)]);
        let w = vec![(0u32, true), (0, false)];
        assert!(freely_reduce(&w).is_empty());
    }
}
