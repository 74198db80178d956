//! Bigirth: the minimum number of edges of a connected subgraph with negative
//! Euler characteristic. This module has two independent halves: an exact
//! brute-force oracle, and constructive extraction procedures whose outputs
//! the oracle certifies.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::graph::{ball, neighborhood, EdgeId, Multigraph, Subgraph, VertexId};

/// Largest vertex count the exact oracle will enumerate.
pub const ORACLE_MAX_VERTICES: usize = 24;

#[derive(Clone, Debug)]
pub struct BigirthWitness<'g> {
    pub subgraph: Subgraph<'g>,
    pub length: usize,
    pub chi: i64,
    /// For constructive witnesses: which branch of the case analysis fired.
    pub branch: &'static str,
}

impl<'g> BigirthWitness<'g> {
    fn checked(subgraph: Subgraph<'g>, branch: &'static str) -> Result<Self> {
        let chi = subgraph.euler_char();
        if !subgraph.is_connected() || chi >= 0 {
            return Err(Error::ConstructionFailed(format!(
                "witness invalid: connected={} chi={}",
                subgraph.is_connected(),
                chi
            )));
        }
        Ok(BigirthWitness { length: subgraph.length(), chi, subgraph, branch })
    }
}

/// `length <= base_log * mult` checked as the integer inequality
/// `2^length <= arg^(base_log_exponent)`; avoids floating-point logs.
pub fn le_log2_bound(length: usize, log_arg: u64, mult: u64) -> bool {
    if log_arg < 1 {
        return false;
    }
    // length <= mult * log2(arg)  <=>  2^length <= arg^mult
    let lhs = BigUint::from(1u8) << length;
    let rhs = BigUint::from(log_arg).pow(mult as u32);
    lhs <= rhs
}

// ---------------------------------------------------------------------------
// Exact oracle
// ---------------------------------------------------------------------------

/// Exact bigirth by enumeration over vertex subsets.
///
/// A minimal connected subgraph K with chi < 0 has no valence-1 vertices and
/// chi(K) = -1, so its length is #V(K) + 1. Conversely, if the sub-multigraph
/// induced on a vertex set W is connected and carries at least |W| + 1 edges,
/// a spanning tree plus any two extra edges is such a K. Hence
/// bigirth = min { |W| + 1 : induced(W) connected, #edges(W) >= |W| + 1 },
/// and we enumerate W by increasing cardinality.
pub fn bigirth_exact(g: &Multigraph) -> Result<(Option<usize>, Option<BigirthWitness<'_>>)> {
    let (_, betti) = g.components_and_betti();
    let comps = g.components();
    let has_neg = comps.iter().any(|c| {
        let vs: BTreeSet<_> = c.iter().copied().collect();
        let e = g.edges().iter().filter(|ed| vs.contains(&ed.ends[0])).count() as i64;
        (c.len() as i64 - e) < 0
    });
    debug_assert_eq!(has_neg, betti.iter().any(|&b| b >= 2));
    if !has_neg {
        return Ok((None, None));
    }
    let n = g.num_vertices();
    if n > ORACLE_MAX_VERTICES {
        return Err(Error::CapExceeded(format!(
            "oracle enumerates vertex subsets; {n} vertices > {ORACLE_MAX_VERTICES}"
        )));
    }
    let verts = g.vertices().to_vec();
    let index: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // adjacency bitmask (ignores loops) and edge counters
    let mut nbr = vec![0u32; n];
    let mut loops = vec![0u32; n];
    // pair_cnt[(i, j)] with i < j
    let mut pair_cnt: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for e in g.edges() {
        let a = index[&e.ends[0]];
        let b = index[&e.ends[1]];
        if a == b {
            loops[a] += 1;
        } else {
            nbr[a] |= 1 << b;
            nbr[b] |= 1 << a;
            *pair_cnt.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    let pairs_at: Vec<Vec<(usize, u32)>> = (0..n)
        .map(|v| {
            pair_cnt
                .iter()
                .filter(|&(&(_, b), _)| b == v)
                .map(|(&(a, _), &c)| (a, c))
                .collect()
        })
        .collect();

    let connected = |mask: u32| -> bool {
        let first = mask.trailing_zeros();
        let mut seen = 1u32 << first;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= nbr[v] & mask & !seen;
            }
            seen |= next;
            frontier = next;
        }
        seen == mask & ((!0u32) >> (32 - n))
    };
    let edge_count = |mask: u32| -> u32 {
        let mut cnt = 0;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            cnt += loops[v];
            for &(u, c) in &pairs_at[v] {
                if mask & (1 << u) != 0 {
                    cnt += c;
                }
            }
        }
        cnt
    };

    for k in 1..=n {
        // enumerate k-subsets in increasing numeric order (Gosper's hack)
        let mut mask: u32 = (1u32 << k) - 1;
        let limit: u32 = (1u32 << n) - 1;
        loop {
            if edge_count(mask) > k as u32 && connected(mask) {
                let wit = oracle_witness(g, &verts, mask)?;
                return Ok((Some(k + 1), Some(wit)));
            }
            // next k-subset
            let c = mask & mask.wrapping_neg();
            let r = mask.wrapping_add(c);
            if r > limit || r == 0 {
                break;
            }
            mask = (((r ^ mask) >> 2) / c) | r;
            if mask > limit {
                break;
            }
        }
    }
    Err(Error::ConstructionFailed(
        "component with chi<0 exists but no qualifying vertex set found".into(),
    ))
}

/// Spanning tree of the induced graph on `mask` plus the two least extra edges.
fn oracle_witness<'g>(g: &'g Multigraph, verts: &[VertexId], mask: u32) -> Result<BigirthWitness<'g>> {
    let chosen: BTreeSet<VertexId> = verts
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &v)| v)
        .collect();
    let mut tree_edges = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let root = *chosen.iter().next().unwrap();
    seen.insert(root);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &(e, w) in g.incidences(v) {
            if chosen.contains(&w) && !seen.contains(&w) && v != w {
                seen.insert(w);
                tree_edges.insert(e);
                queue.push_back(w);
            }
        }
    }
    let mut extra: Vec<EdgeId> = g
        .edges()
        .iter()
        .filter(|e| {
            chosen.contains(&e.ends[0]) && chosen.contains(&e.ends[1]) && !tree_edges.contains(&e.id)
        })
        .map(|e| e.id)
        .collect();
    extra.truncate(2);
    if extra.len() < 2 {
        return Err(Error::ConstructionFailed("not enough extra edges".into()));
    }
    tree_edges.extend(extra);
    let sub = Subgraph::new(g, chosen, tree_edges)?;
    BigirthWitness::checked(sub, "oracle")
}

// ---------------------------------------------------------------------------
// Tie extraction
// ---------------------------------------------------------------------------

/// A tie: a closed union of vertices and open edges of N_1(seed) - seed with
/// controlled combinatorics.
#[derive(Clone, Debug)]
pub struct TieSet {
    pub edges: BTreeSet<EdgeId>,
    pub interior_vertices: BTreeSet<VertexId>,
    /// Vertices of the seed met by the closure of the tie.
    pub attach_vertices: BTreeSet<VertexId>,
    pub e_t: usize,
    pub v_t: usize,
    pub w: usize,
}

impl TieSet {
    pub fn excess(&self) -> usize {
        self.e_t - self.v_t
    }
}

/// Constructive tie extraction. Requires min valence 3 in the ambient graph
/// and n1 < 2 n0, where n_i counts valence-1 vertices of N_i(seed).
pub fn extract_tie<'g>(g: &'g Multigraph, seed: &Subgraph<'g>) -> Result<TieSet> {
    if g.min_valence() < 3 {
        return Err(Error::HypothesisViolated("a vertex has valence < 3".into()));
    }
    let g1 = neighborhood(g, seed, 1);
    let n0 = seed.valence_one_vertices().len();
    let n1 = g1.valence_one_vertices().len();
    if n1 >= 2 * n0 {
        return Err(Error::HypothesisViolated(format!("n1 = {n1} >= 2 n0 = {}", 2 * n0)));
    }
    let tie = extract_tie_inner(g, seed, &g1)?;
    // structural postconditions
    let excess = tie.excess();
    if !(1..=2).contains(&excess) {
        return Err(Error::ConstructionFailed(format!("tie excess {excess}")));
    }
    if n1 + 2 < 2 * n0 && excess != 2 {
        return Err(Error::ConstructionFailed("expected excess 2".into()));
    }
    if tie.w.max(tie.e_t) > 2 * excess {
        return Err(Error::ConstructionFailed("max(w, E_t) > 2(E_t - V_t)".into()));
    }
    for &e in &tie.edges {
        if seed.contains_edge(e) {
            return Err(Error::ConstructionFailed("tie edge lies in seed".into()));
        }
        for &v in &g.edge(e).ends {
            if !tie.interior_vertices.contains(&v) && !seed.contains_vertex(v) {
                return Err(Error::ConstructionFailed("tie not closed in N1 - seed".into()));
            }
        }
    }
    Ok(tie)
}

fn extract_tie_inner<'g>(
    g: &'g Multigraph,
    seed: &Subgraph<'g>,
    g1: &Subgraph<'g>,
) -> Result<TieSet> {
    let outside: Vec<VertexId> = g1
        .vertex_set()
        .iter()
        .copied()
        .filter(|v| !seed.contains_vertex(*v))
        .collect();

    // Case 1: a vertex outside the seed with valence >= 3 in N_1. Take the
    // three least edges at it; their far endpoints all lie in the seed.
    for &v0 in &outside {
        let inc: Vec<(EdgeId, VertexId)> = g
            .incidences(v0)
            .iter()
            .copied()
            .filter(|(e, _)| g1.contains_edge(*e))
            .collect();
        if inc.len() >= 3 {
            let mut edges = BTreeSet::new();
            let mut attach = BTreeSet::new();
            for &(e, w) in inc.iter().take(3) {
                edges.insert(e);
                debug_assert!(seed.contains_vertex(w), "far endpoint must be in the seed");
                attach.insert(w);
            }
            let e_t = 3;
            return Ok(TieSet {
                edges,
                interior_vertices: BTreeSet::from([v0]),
                w: attach.len(),
                attach_vertices: attach,
                e_t,
                v_t: 1,
            });
        }
    }

    // Case 2: every outside vertex has valence <= 2 in N_1. Components of
    // |N_1| - |seed| avoiding valence-1 vertices of N_1 are single edges with
    // both endpoints in the seed, or a vertex with two edges back to the seed.
    let val1: BTreeSet<VertexId> = g1.valence_one_vertices().into_iter().collect();
    let mut comps: Vec<TieSet> = Vec::new();
    // single-edge components (both ends in the seed)
    for &e in g1.edge_set() {
        if seed.contains_edge(e) {
            continue;
        }
        let ed = g.edge(e);
        if ed.ends.iter().all(|v| seed.contains_vertex(*v)) {
            comps.push(TieSet {
                edges: BTreeSet::from([e]),
                interior_vertices: BTreeSet::new(),
                attach_vertices: ed.ends.iter().copied().collect(),
                e_t: 1,
                v_t: 0,
                w: if ed.is_loop() { 1 } else { 2 },
            });
        }
    }
    // vertex-with-two-edges components: every edge of N_1 has an endpoint in
    // the seed, so the far endpoints of both edges at an outside valence-2
    // vertex lie in the seed
    for &v in &outside {
        if val1.contains(&v) {
            continue;
        }
        let inc: Vec<(EdgeId, VertexId)> = g
            .incidences(v)
            .iter()
            .copied()
            .filter(|(e, _)| g1.contains_edge(*e))
            .collect();
        debug_assert_eq!(inc.len(), 2, "outside vertex valence in N1");
        let mut attach = BTreeSet::new();
        for &(_, w) in &inc {
            debug_assert!(seed.contains_vertex(w), "far endpoint outside the seed");
            attach.insert(w);
        }
        comps.push(TieSet {
            edges: inc.iter().map(|&(e, _)| e).collect(),
            interior_vertices: BTreeSet::from([v]),
            w: attach.len(),
            attach_vertices: attach,
            e_t: 2,
            v_t: 1,
        });
    }
    if comps.is_empty() {
        return Err(Error::ConstructionFailed("no tie components found".into()));
    }
    // deterministic order: by least edge id
    comps.sort_by_key(|t| *t.edges.iter().next().unwrap());
    let take = comps.len().min(2);
    let mut edges = BTreeSet::new();
    let mut ivs = BTreeSet::new();
    let mut attach = BTreeSet::new();
    let (mut e_t, mut v_t) = (0, 0);
    for t in comps.into_iter().take(take) {
        edges.extend(t.edges);
        ivs.extend(t.interior_vertices);
        attach.extend(t.attach_vertices);
        e_t += t.e_t;
        v_t += t.v_t;
    }
    Ok(TieSet {
        edges,
        interior_vertices: ivs,
        w: attach.len(),
        attach_vertices: attach,
        e_t,
        v_t,
    })
}

// ---------------------------------------------------------------------------
// Short-subgraph witnesses
// ---------------------------------------------------------------------------

/// BFS shortest path (as a subgraph track) from `root` to `target` inside `h`,
/// visiting least ids first.
fn arc_in<'g>(h: &Subgraph<'g>, root: VertexId, target: VertexId) -> Subgraph<'g> {
    let g = h.parent();
    let mut pred: BTreeMap<VertexId, (EdgeId, VertexId)> = BTreeMap::new();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        if v == target {
            break;
        }
        for &(e, w) in g.incidences(v) {
            if h.contains_edge(e) && seen.insert(w) {
                pred.insert(w, (e, v));
                queue.push_back(w);
            }
        }
    }
    let mut vs = BTreeSet::from([target, root]);
    let mut es = BTreeSet::new();
    let mut cur = target;
    while cur != root {
        let (e, p) = pred[&cur];
        es.insert(e);
        vs.insert(p);
        cur = p;
    }
    Subgraph::new(g, vs, es).expect("path is closed")
}

/// Tie + arcs assembly: K = union of shortest arcs from v0 to the attach
/// vertices, H = K with the tie added.
fn tie_union<'g>(
    g: &'g Multigraph,
    b_s: &Subgraph<'g>,
    v0: VertexId,
    tie: &TieSet,
) -> Subgraph<'g> {
    let mut h = Subgraph::single_vertex(g, v0).expect("v0 in graph");
    for &w in &tie.attach_vertices {
        h = h.union(&arc_in(b_s, v0, w));
    }
    let tie_sub = Subgraph::new(
        g,
        tie.interior_vertices
            .iter()
            .chain(tie.attach_vertices.iter())
            .copied(),
        tie.edges.iter().copied(),
    )
    .expect("tie closure");
    h.union(&tie_sub)
}

/// Witness for graphs of min valence >= 3 with at least two vertices:
/// bigirth <= 4 log2(V), found constructively.
pub fn trivalent_witness(g: &Multigraph) -> Result<BigirthWitness<'_>> {
    let v_count = g.num_vertices();
    if v_count < 2 {
        return Err(Error::HypothesisViolated("need at least two vertices".into()));
    }
    if g.min_valence() < 3 {
        return Err(Error::HypothesisViolated("a vertex has valence < 3".into()));
    }

    // Degenerate case a: a single-vertex component carries >= 2 loops.
    for comp in g.components() {
        if comp.len() == 1 {
            let v = comp[0];
            let loops: Vec<EdgeId> = g
                .incidences(v)
                .iter()
                .filter(|(_, w)| *w == v)
                .map(|(e, _)| *e)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            debug_assert!(loops.len() >= 2);
            let sub = Subgraph::new(g, [v], loops.into_iter().take(2))?;
            let wit = BigirthWitness::checked(sub, "single-vertex")?;
            check_trivalent_bound(&wit, v_count)?;
            return Ok(wit);
        }
        if comp.len() == 2 {
            let (a, b) = (comp[0], comp[1]);
            let joins: Vec<EdgeId> = g
                .incidences(a)
                .iter()
                .filter(|(_, w)| *w == b)
                .map(|(e, _)| *e)
                .collect();
            let loops_at = |v: VertexId| -> Vec<EdgeId> {
                g.incidences(v)
                    .iter()
                    .filter(|(_, w)| *w == v)
                    .map(|(e, _)| *e)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            };
            let (la, lb) = (loops_at(a), loops_at(b));
            let sub = if joins.len() >= 3 {
                Subgraph::new(g, [a, b], joins.into_iter().take(3))?
            } else if !la.is_empty() && !lb.is_empty() {
                Subgraph::new(g, [a, b], [la[0], joins[0], lb[0]])?
            } else if la.len() >= 2 {
                Subgraph::new(g, [a], la.into_iter().take(2))?
            } else if lb.len() >= 2 {
                Subgraph::new(g, [b], lb.into_iter().take(2))?
            } else {
                return Err(Error::ConstructionFailed(
                    "two-vertex component admits no short witness".into(),
                ));
            };
            let wit = BigirthWitness::checked(sub, "two-vertex")?;
            check_trivalent_bound(&wit, v_count)?;
            return Ok(wit);
        }
    }

    // Find a vertex avoiding all circuits of length <= 2 (no loop, no parallel
    // pair at it). If none exists, degenerate case c applies.
    let in_short_circuit = |v: VertexId| -> bool {
        let mut seen_other: BTreeMap<VertexId, u32> = BTreeMap::new();
        for &(_, w) in g.incidences(v) {
            if w == v {
                return true; // loop (counted twice, but one hit is enough)
            }
            *seen_other.entry(w).or_insert(0) += 1;
        }
        seen_other.values().any(|&c| c >= 2)
    };
    let free_vertex = g.vertices().iter().copied().find(|&v| !in_short_circuit(v));

    let Some(v0) = free_vertex else {
        // Case c: every vertex lies in a circuit of length <= 2.
        return witness_everything_short(g, v_count);
    };

    // Main case. m_r = number of valence-1 vertices of B_r(v0).
    let m = |r: usize| -> usize { ball(g, v0, r).valence_one_vertices().len() };
    let mut s = 0usize;
    loop {
        if m(s + 1) < (1usize << (s + 1)) {
            break;
        }
        s += 1;
        if s > 2 * v_count {
            return Err(Error::ConstructionFailed("no level s found".into()));
        }
    }
    if s == 0 {
        return Err(Error::ConstructionFailed("m_1 < 2 contradicts valence >= 3".into()));
    }

    let m_s = m(s);
    if m_s > (1usize << s) {
        // usingties(1): tie at B_s has excess 2; H = K + tie has chi < 0.
        let b_s = ball(g, v0, s);
        let tie = extract_tie(g, &b_s)?;
        let h = tie_union(g, &b_s, v0, &tie);
        let wit = BigirthWitness::checked(h, "ties-excess2")?;
        if wit.length > 4 * s + 4 {
            return Err(Error::ConstructionFailed("witness exceeds 4s+4".into()));
        }
        check_trivalent_bound(&wit, v_count)?;
        return Ok(wit);
    }

    // m_s = 2^s: find s' in [1, s) with m(s'+1) < 2 m(s').
    let mut s_prime = None;
    for r in 1..s {
        if m(r + 1) < 2 * m(r) {
            s_prime = Some(r);
            break;
        }
    }
    let s_prime = s_prime.ok_or_else(|| {
        Error::ConstructionFailed("doubling never fails below s, contradiction".into())
    })?;

    // usingties(2) at level s'.
    let b_sp = ball(g, v0, s_prime);
    let tie_sp = extract_tie(g, &b_sp)?;
    let h0 = tie_union(g, &b_sp, v0, &tie_sp);
    if h0.euler_char() < 0 {
        let wit = BigirthWitness::checked(h0, "ties-level-sprime")?;
        if wit.length > 4 * s_prime + 4 {
            return Err(Error::ConstructionFailed("witness exceeds 4s'+4".into()));
        }
        check_trivalent_bound(&wit, v_count)?;
        return Ok(wit);
    }
    // chi(H0) = 0, length <= 2s'+2, contains v0: move to level s, where the
    // tie has excess 1 or 2.
    debug_assert!(h0.euler_char() <= 0 && h0.contains_vertex(v0));
    let b_s = ball(g, v0, s);
    let tie = extract_tie(g, &b_s)?;
    let h_s = tie_union(g, &b_s, v0, &tie);
    if h_s.euler_char() < 0 {
        // excess 2 (or a cycle among the arcs): the level-s union stands alone
        let wit = BigirthWitness::checked(h_s, "ties-level-s")?;
        if wit.length > 4 * s + 4 {
            return Err(Error::ConstructionFailed("level-s witness exceeds 4s+4".into()));
        }
        check_trivalent_bound(&wit, v_count)?;
        return Ok(wit);
    }
    // excess 1 here (excess 2 always has chi < 0), so length(h_s) <= 2s+2 and
    // attaching the level-s' subgraph through v0 drops chi below zero
    let wit = BigirthWitness::checked(h_s.union(&h0), "ties-combined")?;
    if wit.length > 4 * s + 4 {
        return Err(Error::ConstructionFailed("combined witness exceeds 4s+4".into()));
    }
    check_trivalent_bound(&wit, v_count)?;
    Ok(wit)
}

/// Degenerate case: every vertex lies in a circuit of length <= 2 and some
/// component has >= 3 vertices. Produces a witness of length <= 6.
fn witness_everything_short(g: &Multigraph, v_count: usize) -> Result<BigirthWitness<'_>> {
    // shortest circuit (length <= 2) through v: a loop, or a parallel pair
    let short_circuit = |v: VertexId| -> Option<Subgraph<'_>> {
        let mut loops = g
            .incidences(v)
            .iter()
            .filter(|(_, w)| *w == v)
            .map(|(e, _)| *e)
            .collect::<BTreeSet<_>>()
            .into_iter();
        if let Some(l) = loops.next() {
            return Some(Subgraph::new(g, [v], [l]).unwrap());
        }
        let mut by_other: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
        for &(e, w) in g.incidences(v) {
            by_other.entry(w).or_default().push(e);
        }
        for (w, es) in by_other {
            if es.len() >= 2 {
                return Some(Subgraph::new(g, [v, w], [es[0], es[1]]).unwrap());
            }
        }
        None
    };
    // a vertex with two distinct neighbors
    for &v in g.vertices() {
        let mut others: Vec<(EdgeId, VertexId)> = g
            .incidences(v)
            .iter()
            .copied()
            .filter(|(_, w)| *w != v)
            .collect();
        others.dedup_by_key(|(_, w)| *w);
        let distinct: Vec<(EdgeId, VertexId)> = {
            let mut seen = BTreeSet::new();
            others.into_iter().filter(|(_, w)| seen.insert(*w)).collect()
        };
        if distinct.len() >= 2 {
            let (e1, v1) = distinct[0];
            let (e2, v2) = distinct[1];
            let c1 = short_circuit(v1).ok_or_else(|| {
                Error::ConstructionFailed("expected short circuit at neighbor".into())
            })?;
            let c2 = short_circuit(v2).ok_or_else(|| {
                Error::ConstructionFailed("expected short circuit at neighbor".into())
            })?;
            let spokes = Subgraph::new(g, [v, v1, v2], [e1, e2])?;
            let h = c1.union(&c2).union(&spokes);
            let wit = BigirthWitness::checked(h, "short-circuits")?;
            if wit.length > 6 {
                return Err(Error::ConstructionFailed("witness exceeds 6".into()));
            }
            check_trivalent_bound(&wit, v_count)?;
            return Ok(wit);
        }
    }
    Err(Error::ConstructionFailed("no vertex with two distinct neighbors".into()))
}

fn check_trivalent_bound(wit: &BigirthWitness<'_>, v_count: usize) -> Result<()> {
    // length <= 4 log2 V  <=>  2^length <= V^4
    if !le_log2_bound(wit.length, v_count as u64, 4) {
        return Err(Error::ConstructionFailed(format!(
            "witness length {} exceeds 4 log2 {v_count}",
            wit.length
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Pruning and the general bound
// ---------------------------------------------------------------------------

/// Prune to a subgraph with chi < 0, min valence 2, a valence->=3 vertex in
/// every component, and every maximal valence-2 chain of at most
/// floor(length/|chi|) edges (the ratio taken on the input graph).
pub fn prune_balanced(g: &Multigraph) -> Result<Subgraph<'_>> {
    let chi = g.euler_char();
    if chi >= 0 {
        return Err(Error::HypothesisViolated(format!("chi = {chi} >= 0")));
    }
    let len0 = g.num_edges() as i64;
    let alpha_floor = (len0 / -chi) as usize; // floor(length / |chi|)

    let mut cur = g.full();
    // invariant: chi(cur) < 0 and length(cur) <= alpha * |chi(cur)|
    let in_family = |s: &Subgraph<'_>| -> bool {
        let c = s.euler_char();
        c < 0 && (s.length() as i64) * (-chi) <= len0 * (-c)
    };
    debug_assert!(in_family(&cur));
    loop {
        // isolated vertex
        if let Some(&v) = cur.vertex_set().iter().find(|&&v| cur.valence(v) == 0) {
            let vs: BTreeSet<_> = cur.vertex_set().iter().copied().filter(|&x| x != v).collect();
            cur = Subgraph::new(g, vs, cur.edge_set().iter().copied())?;
            continue;
        }
        // valence-1 vertex
        if let Some(&v) = cur.vertex_set().iter().find(|&&v| cur.valence(v) == 1) {
            let e = g
                .incidences(v)
                .iter()
                .find(|(e, _)| cur.contains_edge(*e))
                .map(|(e, _)| *e)
                .unwrap();
            let vs: BTreeSet<_> = cur.vertex_set().iter().copied().filter(|&x| x != v).collect();
            let es: BTreeSet<_> = cur.edge_set().iter().copied().filter(|&x| x != e).collect();
            cur = Subgraph::new(g, vs, es)?;
            continue;
        }
        // component with max valence 2 (circle)
        let comps = cur.components();
        if let Some(c) = comps
            .iter()
            .find(|c| c.vertex_set().iter().all(|&v| c.valence(v) <= 2))
        {
            let vs: BTreeSet<_> = cur
                .vertex_set()
                .iter()
                .copied()
                .filter(|v| !c.contains_vertex(*v))
                .collect();
            let es: BTreeSet<_> = cur
                .edge_set()
                .iter()
                .copied()
                .filter(|e| !c.contains_edge(*e))
                .collect();
            cur = Subgraph::new(g, vs, es)?;
            continue;
        }
        // over-long valence-2 chain
        if let Some(chain) = chains(&cur).into_iter().find(|c| c.edges.len() > alpha_floor) {
            let vs: BTreeSet<_> = cur
                .vertex_set()
                .iter()
                .copied()
                .filter(|v| !chain.interior.contains(v))
                .collect();
            let es: BTreeSet<_> = cur
                .edge_set()
                .iter()
                .copied()
                .filter(|e| !chain.edges.contains(e))
                .collect();
            cur = Subgraph::new(g, vs, es)?;
            if !in_family(&cur) {
                return Err(Error::ConstructionFailed("chain removal left the family".into()));
            }
            continue;
        }
        break;
    }
    if !in_family(&cur) {
        return Err(Error::ConstructionFailed("pruned graph left the family".into()));
    }
    Ok(cur)
}

/// A maximal valence-2 chain: a component of |G| minus its valence->=3
/// vertices. `ends` are the attaching branch vertices (may coincide).
#[derive(Clone, Debug)]
pub struct Chain {
    pub edges: Vec<EdgeId>,
    pub interior: Vec<VertexId>,
    pub ends: (VertexId, VertexId),
}

/// Decompose a subgraph with min valence 2 and a valence->=3 vertex per
/// component into maximal valence-2 chains between branch vertices.
pub fn chains(sub: &Subgraph<'_>) -> Vec<Chain> {
    let g = sub.parent();
    let branch: BTreeSet<VertexId> = sub
        .vertex_set()
        .iter()
        .copied()
        .filter(|&v| sub.valence(v) >= 3)
        .collect();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut out = Vec::new();
    // walk from each branch vertex along each incident edge
    for &b in &branch {
        let inc: Vec<(EdgeId, VertexId)> = g
            .incidences(b)
            .iter()
            .copied()
            .filter(|(e, _)| sub.contains_edge(*e))
            .collect();
        for (e0, mut next) in inc {
            if used.contains(&e0) {
                continue;
            }
            let mut edges = vec![e0];
            used.insert(e0);
            let mut interior = vec![];
            let mut prev_edge = e0;
            while !branch.contains(&next) {
                interior.push(next);
                let (e, w) = g
                    .incidences(next)
                    .iter()
                    .copied()
                    .find(|(e, _)| sub.contains_edge(*e) && *e != prev_edge)
                    .expect("valence-2 interior vertex has a second edge");
                edges.push(e);
                used.insert(e);
                prev_edge = e;
                next = w;
            }
            out.push(Chain { edges, interior, ends: (b, next) });
        }
    }
    out.sort_by_key(|c| c.edges[0]);
    out
}

/// Constructive witness under the general hypotheses (no simply-connected
/// component, chi < 0): length <= 4 log2|2 chi| * floor(length/|chi|).
pub fn general_witness(g: &Multigraph) -> Result<BigirthWitness<'_>> {
    if g.has_simply_connected_component() {
        return Err(Error::HypothesisViolated("a component is simply connected".into()));
    }
    let chi = g.euler_char();
    if chi >= 0 {
        return Err(Error::HypothesisViolated(format!("chi = {chi} >= 0")));
    }
    let alpha_floor = (g.num_edges() as i64 / -chi) as u64;

    let pruned = prune_balanced(g)?;
    let chain_list = chains(&pruned);
    // contract chains: branch vertices become the vertices, chains the edges
    let branch: Vec<VertexId> = pruned
        .vertex_set()
        .iter()
        .copied()
        .filter(|&v| pruned.valence(v) >= 3)
        .collect();
    let contracted = Multigraph::build(
        &branch,
        &chain_list
            .iter()
            .enumerate()
            .map(|(i, c)| (i as EdgeId, vec![c.ends.0, c.ends.1]))
            .collect::<Vec<_>>(),
    )?;

    let expand = |star_edges: &BTreeSet<EdgeId>, star_vertices: &BTreeSet<VertexId>| -> Result<Subgraph<'_>> {
        let mut vs: BTreeSet<VertexId> = star_vertices.clone();
        let mut es: BTreeSet<EdgeId> = BTreeSet::new();
        for &ce in star_edges {
            let chain = &chain_list[ce as usize];
            es.extend(chain.edges.iter().copied());
            vs.extend(chain.interior.iter().copied());
            vs.insert(chain.ends.0);
            vs.insert(chain.ends.1);
        }
        Subgraph::new(g, vs, es)
    };

    let (star_sub, branch_tag) = if contracted.num_vertices() == 1 {
        // single branch vertex: two least chain-loops
        let v = branch[0];
        let loops: Vec<EdgeId> = contracted
            .incidences(v)
            .iter()
            .filter(|(_, w)| *w == v)
            .map(|(e, _)| *e)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if loops.len() < 2 {
            return Err(Error::ConstructionFailed("single branch vertex lacks two loops".into()));
        }
        let es: BTreeSet<EdgeId> = loops.into_iter().take(2).collect();
        ((es, BTreeSet::from([v])), "contracted-single-vertex")
    } else {
        let wit = trivalent_witness(&contracted)?;
        (
            (wit.subgraph.edge_set().clone(), wit.subgraph.vertex_set().clone()),
            wit.branch,
        )
    };
    let expanded = expand(&star_sub.0, &star_sub.1)?;
    let wit = BigirthWitness::checked(expanded, branch_tag)?;
    // length <= 4 * floor(alpha) * log2(2|chi|)
    if !le_log2_bound(wit.length, 2 * (-chi) as u64, 4 * alpha_floor) {
        return Err(Error::ConstructionFailed(format!(
            "general witness length {} exceeds the bound",
            wit.length
        )));
    }
    Ok(wit)
}

/// Shrink a connected subgraph with chi < 0 to a connected subgraph with
/// first Betti number exactly 2 and no valence-<=1 vertices: strip leaves,
/// then remove non-bridge edges (least id first) while chi < -1.
pub fn trim_to_betti_two<'g>(sub: &Subgraph<'g>) -> Result<Subgraph<'g>> {
    if !sub.is_connected() || sub.euler_char() >= 0 {
        return Err(Error::HypothesisViolated("need a connected subgraph with chi < 0".into()));
    }
    let g = sub.parent();
    let strip = |mut s: Subgraph<'g>| -> Subgraph<'g> {
        loop {
            let dead: Vec<VertexId> = s
                .vertex_set()
                .iter()
                .copied()
                .filter(|&v| s.valence(v) <= 1 && s.vertex_set().len() > 1)
                .collect();
            if dead.is_empty() {
                break;
            }
            let mut vs = s.vertex_set().clone();
            let mut es = s.edge_set().clone();
            for v in dead {
                if s.valence(v) == 1 {
                    let e = g
                        .incidences(v)
                        .iter()
                        .find(|(e, _)| es.contains(e))
                        .map(|(e, _)| *e)
                        .unwrap();
                    es.remove(&e);
                }
                vs.remove(&v);
            }
            s = Subgraph::new(g, vs, es).expect("stripping keeps closure");
        }
        s
    };
    let mut cur = strip(sub.clone());
    while cur.euler_char() < -1 {
        // least non-bridge edge
        let mut removed = false;
        for &e in cur.edge_set() {
            let mut es = cur.edge_set().clone();
            es.remove(&e);
            let cand = Subgraph::new(g, cur.vertex_set().iter().copied(), es)?;
            if cand.is_connected() {
                cur = strip(cand);
                removed = true;
                break;
            }
        }
        if !removed {
            return Err(Error::ConstructionFailed("no removable cycle edge found".into()));
        }
    }
    debug_assert_eq!(cur.euler_char(), -1);
    debug_assert!(cur.is_connected());
    debug_assert!(cur.vertex_set().iter().all(|&v| cur.valence(v) >= 2));
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{figure_eight, theta};

    fn k4() -> Multigraph {
        let mut edges = vec![];
        let mut id = 0;
        for a in 0..4u32 {
            for b in (a + 1)..4u32 {
                edges.push((id, vec![a, b]));
                id += 1;
            }
        }
        Multigraph::build(&[0, 1, 2, 3], &edges).unwrap()
    }

    #[test]
    fn oracle_figure_eight() {
        let g = figure_eight();
        let (b, w) = bigirth_exact(&g).unwrap();
        assert_eq!(b, Some(2));
        assert_eq!(w.unwrap().length, 2);
    }

    #[test]
    fn oracle_theta() {
        let g = theta();
        let (b, _) = bigirth_exact(&g).unwrap();
        assert_eq!(b, Some(3));
    }

    #[test]
    fn oracle_k4() {
        let g = k4();
        let (b, w) = bigirth_exact(&g).unwrap();
        assert_eq!(b, Some(5));
        let w = w.unwrap();
        assert_eq!(w.chi, -1);
        assert!(w.subgraph.is_connected());
    }

    #[test]
    fn oracle_infinite_on_cycle() {
        let g = Multigraph::build(&[0, 1], &[(0, vec![0, 1]), (1, vec![0, 1])]).unwrap();
        let (b, w) = bigirth_exact(&g).unwrap();
        assert!(b.is_none() && w.is_none());
    }

    #[test]
    fn tie_on_k33() {
        let g = {
            let mut edges = vec![];
            let mut id = 0;
            for a in 0..3u32 {
                for b in 3..6u32 {
                    edges.push((id, vec![a, b]));
                    id += 1;
                }
            }
            Multigraph::build(&[0, 1, 2, 3, 4, 5], &edges).unwrap()
        };
        // seed = B_1(0): n0 = 3, n1 = 0 < 2*3 - 2
        let seed = ball(&g, 0, 1);
        let tie = extract_tie(&g, &seed).unwrap();
        assert_eq!(tie.excess(), 2);
        assert!(tie.w.max(tie.e_t) <= 4);
    }

    #[test]
    fn tie_hypothesis_violated() {
        let g = theta();
        // seed with n0 = 0: full graph
        let seed = g.full();
        assert!(matches!(
            extract_tie(&g, &seed),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn trivalent_small_cases() {
        let th = theta();
        let w = trivalent_witness(&th).unwrap();
        assert_eq!(w.length, 3);

        // two vertices joined by one edge, loops at both
        let g = Multigraph::build(&[0, 1], &[(0, vec![0]), (1, vec![0, 1]), (2, vec![1])]).unwrap();
        let w = trivalent_witness(&g).unwrap();
        assert!(w.length <= 3);

        let g = k4();
        let w = trivalent_witness(&g).unwrap();
        assert!(w.length <= 8);
        let (exact, _) = bigirth_exact(&g).unwrap();
        assert!(exact.unwrap() <= w.length);
    }

    #[test]
    fn trivalent_single_vertex_component() {
        // figure-eight component next to a theta component: the loops win
        let g = Multigraph::build(
            &[0, 5, 6],
            &[
                (0, vec![0]),
                (1, vec![0]),
                (2, vec![5, 6]),
                (3, vec![5, 6]),
                (4, vec![5, 6]),
            ],
        )
        .unwrap();
        let w = trivalent_witness(&g).unwrap();
        assert_eq!(w.branch, "single-vertex");
        assert_eq!(w.length, 2);
    }

    #[test]
    fn prune_fixed_point_on_figure_eight() {
        let g = figure_eight();
        let p = prune_balanced(&g).unwrap();
        assert_eq!(p, g.full());
    }

    #[test]
    fn prune_removes_pendant_path() {
        // figure-eight at vertex 0 plus a pendant path 0-1-2-3
        let g = Multigraph::build(
            &[0, 1, 2, 3],
            &[
                (0, vec![0]),
                (1, vec![0]),
                (2, vec![0, 1]),
                (3, vec![1, 2]),
                (4, vec![2, 3]),
            ],
        )
        .unwrap();
        let p = prune_balanced(&g).unwrap();
        assert_eq!(p.length(), 2);
        assert_eq!(p.vertex_set().len(), 1);
    }

    #[test]
    fn prune_rejects_nonnegative_chi() {
        let cycle = Multigraph::build(&[0, 1], &[(0, vec![0, 1]), (1, vec![0, 1])]).unwrap();
        assert!(matches!(
            prune_balanced(&cycle),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn general_witness_subdivided_theta() {
        // theta with each edge subdivided into 2
        let g = Multigraph::build(
            &[0, 1, 2, 3, 4],
            &[
                (0, vec![0, 2]),
                (1, vec![2, 1]),
                (2, vec![0, 3]),
                (3, vec![3, 1]),
                (4, vec![0, 4]),
                (5, vec![4, 1]),
            ],
        )
        .unwrap();
        let w = general_witness(&g).unwrap();
        assert_eq!(w.length, 6);
        let (exact, _) = bigirth_exact(&g).unwrap();
        assert_eq!(exact, Some(6));
    }

    #[test]
    fn general_witness_allows_cycle_component() {
        // figure-eight plus a disjoint 3-cycle: cycle component is fine
        let g = Multigraph::build(
            &[0, 5, 6, 7],
            &[
                (0, vec![0]),
                (1, vec![0]),
                (2, vec![5, 6]),
                (3, vec![6, 7]),
                (4, vec![5, 7]),
            ],
        )
        .unwrap();
        let w = general_witness(&g).unwrap();
        assert_eq!(w.length, 2);
    }

    #[test]
    fn general_witness_rejects_tree_component() {
        let g = Multigraph::build(
            &[0, 5, 6],
            &[(0, vec![0]), (1, vec![0]), (2, vec![5, 6])],
        )
        .unwrap();
        assert!(matches!(
            general_witness(&g),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn log_bound_helper() {
        assert!(le_log2_bound(8, 4, 4)); // 2^8 = 256 = 4^4
        assert!(!le_log2_bound(9, 4, 4));
    }
}
