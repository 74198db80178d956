//! Finite multigraphs: loops and parallel edges allowed, an edge has one or
//! two endpoints (a single listed endpoint is a loop). Iteration is always in
//! id order so every algorithm downstream is deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    /// Endpoints, sorted. A loop stores the same vertex twice.
    pub ends: [VertexId; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    pub fn other_end(&self, v: VertexId) -> VertexId {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

/// Immutable after construction; safe to share across threads.
#[derive(Clone, Debug)]
pub struct Multigraph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    /// vertex -> list of (edge, other endpoint); a loop appears twice,
    /// so `adj[v].len()` is the valence of `v`.
    adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
}

/// Serialized form: `{"vertices":[..], "edges":[[u],[u,v],..]}` with edge ids
/// given by position. Loops may be written `[u]` or `[u,u]`.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Vec<VertexId>>,
}

impl Multigraph {
    /// Validating constructor. Endpoint lists of length 1 are loops.
    pub fn build(vertices: &[VertexId], endpoint_lists: &[(EdgeId, Vec<VertexId>)]) -> Result<Self> {
        let mut vset = BTreeSet::new();
        for &v in vertices {
            if !vset.insert(v) {
                return Err(Error::DuplicateId(v));
            }
        }
        let mut eids = BTreeSet::new();
        let mut edges = Vec::with_capacity(endpoint_lists.len());
        for (id, ends) in endpoint_lists {
            if !eids.insert(*id) {
                return Err(Error::DuplicateId(*id));
            }
            let pair = match ends.len() {
                1 => [ends[0], ends[0]],
                2 => {
                    let (a, b) = (ends[0], ends[1]);
                    [a.min(b), a.max(b)]
                }
                n => {
                    return Err(Error::BadInput(format!(
                        "edge {id} has {n} endpoints, expected 1 or 2"
                    )))
                }
            };
            for &v in &pair {
                if !vset.contains(&v) {
                    return Err(Error::DanglingEndpoint { edge: *id, vertex: v });
                }
            }
            edges.push(Edge { id: *id, ends: pair });
        }
        edges.sort_by_key(|e| e.id);
        let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> =
            vset.iter().map(|&v| (v, Vec::new())).collect();
        for e in &edges {
            adj.get_mut(&e.ends[0]).unwrap().push((e.id, e.ends[1]));
            adj.get_mut(&e.ends[1]).unwrap().push((e.id, e.ends[0]));
        }
        for lst in adj.values_mut() {
            lst.sort();
        }
        Ok(Multigraph { vertices: vset.into_iter().collect(), edges, adj })
    }

    pub fn from_json(j: &GraphJson) -> Result<Self> {
        let lists: Vec<(EdgeId, Vec<VertexId>)> = j
            .edges
            .iter()
            .enumerate()
            .map(|(i, ends)| (i as EdgeId, ends.clone()))
            .collect();
        Self::build(&j.vertices, &lists)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| if e.is_loop() { vec![e.ends[0]] } else { e.ends.to_vec() })
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        let i = self.edges.binary_search_by_key(&id, |e| e.id).expect("edge id");
        &self.edges[i]
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of oriented-edge incidences at `v`; a loop contributes 2.
    pub fn valence(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |l| l.len())
    }

    /// Incidences at `v` as (edge, other endpoint); loops listed twice.
    pub fn incidences(&self, v: VertexId) -> &[(EdgeId, VertexId)] {
        self.adj.get(&v).map_or(&[], |l| l.as_slice())
    }

    pub fn euler_char(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    pub fn min_valence(&self) -> usize {
        self.vertices.iter().map(|&v| self.valence(v)).min().unwrap_or(0)
    }

    /// The whole graph as a subgraph of itself.
    pub fn full(&self) -> Subgraph<'_> {
        Subgraph {
            graph: self,
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges.iter().map(|e| e.id).collect(),
        }
    }

    /// Connected components, each as a sorted vertex list (order: min id).
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut comps = Vec::new();
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![];
            let mut queue = std::collections::VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &(_, w) in self.incidences(v) {
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            comp.sort();
            comps.push(comp);
        }
        comps
    }

    /// (component count, per-component first Betti number b1 = E - V + 1),
    /// components ordered by least vertex id.
    pub fn components_and_betti(&self) -> (usize, Vec<i64>) {
        let comps = self.components();
        let betti = comps
            .iter()
            .map(|comp| {
                let vset: BTreeSet<_> = comp.iter().copied().collect();
                let e = self
                    .edges
                    .iter()
                    .filter(|ed| vset.contains(&ed.ends[0]))
                    .count() as i64;
                e - comp.len() as i64 + 1
            })
            .collect();
        (comps.len(), betti)
    }

    /// True if some component is a tree (simply connected, b1 = 0).
    pub fn has_simply_connected_component(&self) -> bool {
        self.components_and_betti().1.contains(&0)
    }
}

/// A subgraph stores index sets against a frozen parent graph. Every endpoint
/// of a retained edge must be a retained vertex.
#[derive(Clone, Debug)]
pub struct Subgraph<'g> {
    graph: &'g Multigraph,
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<EdgeId>,
}

impl<'g> PartialEq for Subgraph<'g> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph)
            && self.vertices == other.vertices
            && self.edges == other.edges
    }
}

impl<'g> Subgraph<'g> {
    pub fn new(
        graph: &'g Multigraph,
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = EdgeId>,
    ) -> Result<Self> {
        let vertices: BTreeSet<_> = vertices.into_iter().collect();
        let edges: BTreeSet<_> = edges.into_iter().collect();
        for &v in &vertices {
            if !graph.has_vertex(v) {
                return Err(Error::BadInput(format!("vertex {v} not in parent graph")));
            }
        }
        for &e in &edges {
            if graph.edges.binary_search_by_key(&e, |x| x.id).is_err() {
                return Err(Error::BadInput(format!("edge {e} not in parent graph")));
            }
            let ed = graph.edge(e);
            for &v in &ed.ends {
                if !vertices.contains(&v) {
                    return Err(Error::DanglingEndpoint { edge: e, vertex: v });
                }
            }
        }
        Ok(Subgraph { graph, vertices, edges })
    }

    pub fn single_vertex(graph: &'g Multigraph, v: VertexId) -> Result<Self> {
        Self::new(graph, [v], [])
    }

    pub fn parent(&self) -> &'g Multigraph {
        self.graph
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edge_set(&self) -> &BTreeSet<EdgeId> {
        &self.edges
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.edges.len()
    }

    pub fn euler_char(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64
    }

    pub fn is_subset_of(&self, other: &Subgraph<'_>) -> bool {
        self.vertices.is_subset(&other.vertices) && self.edges.is_subset(&other.edges)
    }

    /// Valence of `v` within the subgraph (loops count 2).
    pub fn valence(&self, v: VertexId) -> usize {
        self.graph
            .incidences(v)
            .iter()
            .filter(|(e, _)| self.edges.contains(e))
            .count()
    }

    pub fn valence_one_vertices(&self) -> Vec<VertexId> {
        self.vertices.iter().copied().filter(|&v| self.valence(v) == 1).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let start = *self.vertices.iter().next().unwrap();
        let mut seen = BTreeSet::from([start]);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(e, w) in self.graph.incidences(v) {
                if self.edges.contains(&e) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Components of the subgraph, as subgraphs, ordered by least vertex id.
    pub fn components(&self) -> Vec<Subgraph<'g>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in &self.vertices {
            if seen.contains(&start) {
                continue;
            }
            let mut vs = BTreeSet::from([start]);
            let mut es = BTreeSet::new();
            let mut queue = std::collections::VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                for &(e, w) in self.graph.incidences(v) {
                    if self.edges.contains(&e) {
                        es.insert(e);
                        if seen.insert(w) {
                            vs.insert(w);
                            queue.push_back(w);
                        }
                    }
                }
            }
            out.push(Subgraph { graph: self.graph, vertices: vs, edges: es });
        }
        out
    }

    pub fn union(&self, other: &Subgraph<'g>) -> Subgraph<'g> {
        assert!(std::ptr::eq(self.graph, other.graph));
        Subgraph {
            graph: self.graph,
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }
}

/// N_r: union of the seed with the tracks of all edge paths of length <= r
/// starting at a vertex of the seed. N_0 is the seed itself.
pub fn neighborhood<'g>(graph: &'g Multigraph, seed: &Subgraph<'g>, r: usize) -> Subgraph<'g> {
    assert!(std::ptr::eq(graph, seed.parent()), "seed must live in the same graph");
    let mut dist: BTreeMap<VertexId, usize> = seed.vertex_set().iter().map(|&v| (v, 0)).collect();
    let mut queue: std::collections::VecDeque<VertexId> = seed.vertex_set().iter().copied().collect();
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d >= r {
            continue;
        }
        for &(_, w) in graph.incidences(v) {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(d + 1);
                queue.push_back(w);
            }
        }
    }
    let mut vs: BTreeSet<VertexId> = seed.vertex_set().clone();
    let mut es: BTreeSet<EdgeId> = seed.edge_set().clone();
    if r > 0 {
        for e in graph.edges() {
            let reach = e
                .ends
                .iter()
                .filter_map(|v| dist.get(v))
                .min()
                .copied();
            if let Some(d) = reach {
                if d < r {
                    es.insert(e.id);
                    vs.insert(e.ends[0]);
                    vs.insert(e.ends[1]);
                }
            }
        }
    }
    Subgraph::new(graph, vs, es).expect("neighborhood is closed by construction")
}

/// B_r(v) = N_r({v}).
pub fn ball(graph: &Multigraph, v: VertexId, r: usize) -> Subgraph<'_> {
    let seed = Subgraph::single_vertex(graph, v).expect("vertex in graph");
    neighborhood(graph, &seed, r)
}

/// Shared test fixture: one vertex, two loops.
#[cfg(test)]
pub(crate) fn figure_eight() -> Multigraph {
    Multigraph::build(&[0], &[(0, vec![0]), (1, vec![0])]).unwrap()
}

/// Shared test fixture: two vertices, three parallel edges.
#[cfg(test)]
pub(crate) fn theta() -> Multigraph {
    Multigraph::build(&[0, 1], &[(0, vec![0, 1]), (1, vec![0, 1]), (2, vec![0, 1])]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k33() -> Multigraph {
        let mut edges = vec![];
        let mut id = 0;
        for a in 0..3u32 {
            for b in 3..6u32 {
                edges.push((id, vec![a, b]));
                id += 1;
            }
        }
        Multigraph::build(&[0, 1, 2, 3, 4, 5], &edges).unwrap()
    }

    #[test]
    fn figure_eight_basics() {
        let g = figure_eight();
        assert_eq!(g.valence(0), 4);
        assert_eq!(g.euler_char(), -1);
        let (c, b) = g.components_and_betti();
        assert_eq!((c, b), (1, vec![2]));
    }

    #[test]
    fn theta_basics() {
        let g = theta();
        assert_eq!(g.euler_char(), -1);
        assert_eq!(g.valence(0), 3);
        let (c, b) = g.components_and_betti();
        assert_eq!((c, b), (1, vec![2]));
    }

    #[test]
    fn isolated_vertex_chi() {
        let g = Multigraph::build(&[7], &[]).unwrap();
        assert_eq!(g.euler_char(), 1);
    }

    #[test]
    fn dangling_endpoint_rejected() {
        let err = Multigraph::build(&[0], &[(0, vec![0, 1])]).unwrap_err();
        assert!(matches!(err, Error::DanglingEndpoint { edge: 0, vertex: 1 }));
    }

    #[test]
    fn duplicate_ids_rejected() {
        assert!(matches!(
            Multigraph::build(&[0, 0], &[]),
            Err(Error::DuplicateId(0))
        ));
        assert!(matches!(
            Multigraph::build(&[0, 1], &[(3, vec![0]), (3, vec![1])]),
            Err(Error::DuplicateId(3))
        ));
    }

    #[test]
    fn neighborhood_examples() {
        let th = theta();
        let seed = Subgraph::single_vertex(&th, 0).unwrap();
        // N_0 is the seed
        let n0 = neighborhood(&th, &seed, 0);
        assert_eq!(n0, seed);
        // B_1(v) in the theta graph is the whole graph
        let b1 = ball(&th, 0, 1);
        assert_eq!(b1, th.full());

        // B_1(v) in K_{3,3}: star with 3 leaves, 3 edges
        let g = k33();
        let b = ball(&g, 0, 1);
        assert_eq!(b.length(), 3);
        assert_eq!(b.vertex_set().len(), 4);
        assert_eq!(b.valence_one_vertices().len(), 3);
    }

    #[test]
    fn neighborhood_monotone_and_stabilizes() {
        let g = k33();
        let seed = Subgraph::single_vertex(&g, 0).unwrap();
        let mut prev = neighborhood(&g, &seed, 0);
        for r in 1..6 {
            let next = neighborhood(&g, &seed, r);
            assert!(prev.is_subset_of(&next));
            prev = next;
        }
        // stabilizes at the component
        assert_eq!(prev, g.full());
    }

    #[test]
    fn two_triangles_betti() {
        let g = Multigraph::build(
            &[0, 1, 2, 10, 11, 12],
            &[
                (0, vec![0, 1]),
                (1, vec![1, 2]),
                (2, vec![0, 2]),
                (3, vec![10, 11]),
                (4, vec![11, 12]),
                (5, vec![10, 12]),
            ],
        )
        .unwrap();
        let (c, b) = g.components_and_betti();
        assert_eq!((c, b), (2, vec![1, 1]));
    }

    #[test]
    fn json_roundtrip_normalizes_loops() {
        let j: GraphJson =
            serde_json::from_str(r#"{"vertices":[0,1],"edges":[[0],[0,0],[0,1]]}"#).unwrap();
        let g = Multigraph::from_json(&j).unwrap();
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.valence(0), 5);
        let back = g.to_json();
        assert_eq!(back.edges, vec![vec![0], vec![0], vec![0, 1]]);
    }
}
