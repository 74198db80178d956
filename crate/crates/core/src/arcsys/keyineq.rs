//! The labeled/weighted subgraph construction and its consequence: from a
//! labeled reduced arc system, extract an injective subgraph avoiding an
//! excluded edge set whose weight-per-complexity ratio beats the phi bound,
//! then combine with the short-subgraph machinery to get a Betti-2 subgraph
//! whose unreduced length is controlled.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arb::{log2_rational, Ctx, Interval};
use crate::bigirth::{general_witness, trim_to_betti_two};
use crate::bounds::{phi_tau, tau_from_q, PhiValue};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, Subgraph, VertexId};
use crate::report::BoundReport;

use super::{model_subgraph, pi1_oracle, pi1_subgraph, ArcId, ArcModel, Reduction};

/// Surjective map from arcs to a finite label set 0..n_labels.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub label_of: Vec<u32>,
    pub n_labels: usize,
}

impl Labeling {
    pub fn new(label_of: Vec<u32>, n_labels: usize) -> Result<Self> {
        let mut seen = vec![false; n_labels];
        for &l in &label_of {
            *seen
                .get_mut(l as usize)
                .ok_or_else(|| Error::BadInput(format!("label {l} out of range")))? = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::BadInput("labeling is not surjective".into()));
        }
        Ok(Labeling { label_of, n_labels })
    }

    /// theta_i: arcs carrying each label.
    pub fn multiplicities(&self) -> Vec<u64> {
        let mut m = vec![0u64; self.n_labels];
        for &l in &self.label_of {
            m[l as usize] += 1;
        }
        m
    }
}

/// Positive rational weight per label.
pub type WeightSystem = Vec<BigRational>;

#[derive(Clone, Debug)]
pub struct KeyIneqOutcome<'g> {
    pub subgraph: Subgraph<'g>,
    pub chi: i64,
    /// min over interior edges of theta_(label).
    pub theta_min: u64,
    pub lambda_value: BigRational,
    pub phi: PhiValue,
    pub m: u32,
    pub k: u32,
    /// lambda / (theta_min * |chi|), the left side of the ratio inequality.
    pub lhs: BigRational,
    /// Strict inequality lhs < phi * (sum lambda)/Theta, decided exactly.
    pub ratio_strict: bool,
    pub oracle_ok: bool,
}

fn lambda_of_subgraph(
    model: &ArcModel,
    labeling: &Labeling,
    weights: &WeightSystem,
    sub: &Subgraph<'_>,
) -> BigRational {
    let mut total = BigRational::zero();
    for &v in sub.vertex_set() {
        let l = labeling.label_of[model.vertex_arc(v) as usize] as usize;
        total += &weights[l];
    }
    total
}

fn theta_min_of_subgraph(
    model: &ArcModel,
    labeling: &Labeling,
    theta: &[u64],
    sub: &Subgraph<'_>,
) -> Option<u64> {
    sub.edge_set()
        .iter()
        .filter(|&&e| model.is_arc_edge(e))
        .map(|&e| theta[labeling.label_of[e as usize] as usize])
        .min()
}

/// The main extraction. Preconditions: the model is reduced and not an
/// annulus, weights are positive, and for every label i the excluded set
/// contains at most theta_i / q of its arcs.
pub fn key_inequality_subgraph<'g>(
    model: &'g ArcModel,
    labeling: &Labeling,
    weights: &WeightSystem,
    excluded: &BTreeSet<ArcId>,
    q: &BigRational,
) -> Result<KeyIneqOutcome<'g>> {
    if model.is_annulus() {
        return Err(Error::HypothesisViolated("surface is an annulus".into()));
    }
    if !model.is_reduced() {
        return Err(Error::HypothesisViolated("arc system is not reduced".into()));
    }
    let n = model.n_arcs();
    if labeling.label_of.len() != n {
        return Err(Error::BadInput("labeling size mismatch".into()));
    }
    if weights.len() != labeling.n_labels || weights.iter().any(|w| !w.is_positive()) {
        return Err(Error::BadInput("weights must be positive, one per label".into()));
    }
    let theta = labeling.multiplicities();
    let theta_total: u64 = n as u64;
    let theta_max = *theta.iter().max().unwrap();
    // excluded multiplicities and the q-sparseness hypothesis
    let mut theta_star = vec![0u64; labeling.n_labels];
    for &a in excluded {
        if a as usize >= n {
            return Err(Error::BadInput(format!("excluded arc {a} out of range")));
        }
        theta_star[labeling.label_of[a as usize] as usize] += 1;
    }
    for i in 0..labeling.n_labels {
        // theta*_i <= theta_i / q, exactly
        if BigRational::from_integer(BigInt::from(theta_star[i])) * q
            > BigRational::from_integer(BigInt::from(theta[i]))
        {
            return Err(Error::HypothesisViolated(format!(
                "label {i}: {} excluded of {} exceeds 1/q",
                theta_star[i], theta[i]
            )));
        }
    }

    let tau = tau_from_q(q)?;
    let phi = phi_tau(&tau, &BigRational::from_integer(BigInt::from(theta_max)))?;
    let m = phi.m;
    // A = tau^(m+1)/(tau - 1); omega = (sum lambda)/Theta
    let a_const = tau.pow((m + 1) as i32) / (&tau - BigRational::one());
    let lambda_sum: BigRational = weights.iter().sum();
    let omega = &lambda_sum / BigRational::from_integer(BigInt::from(theta_total));

    // label partition: I_0 by weight, then bands by multiplicity
    // band j (1..m-1): theta_max^((m-j)/m) < theta_i <= theta_max^((m-j+1)/m)
    // band m: theta_i^m <= theta_max
    let band_of = |ti: u64| -> u32 {
        let tm = BigInt::from(ti).pow(m);
        let mut lo = BigInt::one(); // theta_max^(m-j) as j descends
        for j in (1..=m).rev() {
            // j = m: tm <= theta_max^1; j < m: theta_max^(m-j) < tm <= ^(m-j+1)
            let hi = BigInt::from(theta_max).pow(m - j + 1);
            if tm <= hi && (j == m || tm > lo) {
                return j;
            }
            lo = hi;
        }
        unreachable!("multiplicity bands partition [1, theta_max]")
    };
    let mut band = vec![0u32; labeling.n_labels];
    for i in 0..labeling.n_labels {
        let lam = &weights[i];
        let heavy = lam > &(&a_const * &omega * BigRational::from_integer(BigInt::from(theta[i])));
        band[i] = if heavy { 0 } else { band_of(theta[i]) };
    }
    let mut theta_band = vec![0u64; m as usize + 1];
    for i in 0..labeling.n_labels {
        theta_band[band[i] as usize] += theta[i];
    }
    // Theta_0 <= alpha Theta, i.e. Theta_0 * A <= Theta
    if BigRational::from_integer(BigInt::from(theta_band[0])) * &a_const
        > BigRational::from_integer(BigInt::from(theta_total))
    {
        return Err(Error::ConstructionFailed("heavy band exceeds alpha Theta".into()));
    }
    // least k with Theta_k > tau^k alpha Theta, i.e. Theta_k * A > tau^k Theta
    let mut k = None;
    for j in 0..=m {
        if BigRational::from_integer(BigInt::from(theta_band[j as usize])) * &a_const
            > tau.pow(j as i32) * BigRational::from_integer(BigInt::from(theta_total))
        {
            k = Some(j);
            break;
        }
    }
    let k = k.ok_or_else(|| Error::ConstructionFailed("no band beats its threshold".into()))?;
    if k == 0 {
        return Err(Error::ConstructionFailed("threshold index is zero".into()));
    }

    // seed subgraph: vertices with labels in bands k..m, interior edges of
    // band k minus the excluded set, boundary edges with both ends inside
    let in_plus = |a: ArcId| band[labeling.label_of[a as usize] as usize] >= k;
    let seed_arcs: Vec<ArcId> = (0..n as ArcId)
        .filter(|&a| band[labeling.label_of[a as usize] as usize] == k && !excluded.contains(&a))
        .collect();
    let seed_vertices: Vec<VertexId> = (0..2 * n as u32)
        .filter(|&v| in_plus(model.vertex_arc(v)))
        .collect();
    let vset: BTreeSet<VertexId> = seed_vertices.iter().copied().collect();
    let seed_bedges: Vec<u32> = (0..model.n_bedges())
        .filter(|&b| {
            let e = model.graph().edge(model.bedge_edge(b));
            vset.contains(&e.ends[0]) && vset.contains(&e.ends[1])
        })
        .map(|b| b as u32)
        .collect();
    let seed = model_subgraph(model, seed_arcs.iter().copied(), seed_bedges, seed_vertices)?;

    let nu = seed_arcs.len();
    if nu == 0 {
        return Err(Error::ConstructionFailed("seed has no interior edges".into()));
    }
    let injective = pi1_subgraph(model, &seed)?;

    // drop simply-connected components
    let mut vs: BTreeSet<VertexId> = BTreeSet::new();
    let mut es: BTreeSet<EdgeId> = BTreeSet::new();
    for comp in injective.components() {
        if comp.euler_char() <= 0 {
            vs.extend(comp.vertex_set().iter().copied());
            es.extend(comp.edge_set().iter().copied());
        }
    }
    let gamma1 = Subgraph::new(model.graph(), vs, es)?;

    // postconditions
    let chi = gamma1.euler_char();
    if chi >= 0 {
        return Err(Error::ConstructionFailed(format!("chi = {chi} not negative")));
    }
    for &a in excluded {
        if gamma1.contains_edge(model.arc_edge(a)) {
            return Err(Error::ConstructionFailed("excluded edge survived".into()));
        }
    }
    if gamma1.components().iter().any(|c| c.euler_char() > 0) {
        return Err(Error::ConstructionFailed("simply connected component survived".into()));
    }
    let theta_min = theta_min_of_subgraph(model, labeling, &theta, &gamma1)
        .ok_or_else(|| Error::ConstructionFailed("no interior edge survived".into()))?;
    let lambda_value = lambda_of_subgraph(model, labeling, weights, &gamma1);
    let lhs = &lambda_value
        / (BigRational::from_integer(BigInt::from(theta_min)) * rat_i64(-chi));
    // strict ratio inequality, cleared of phi exactly:
    // lhs < phi * omega  <=>  lhs/omega < phi
    let ratio_strict = phi.gt_rational(&(&lhs / &omega));
    if !ratio_strict {
        return Err(Error::ConstructionFailed("ratio inequality failed".into()));
    }
    let oracle_ok = pi1_oracle(model, &gamma1);
    if !oracle_ok {
        return Err(Error::ConstructionFailed("injectivity oracle rejected the output".into()));
    }
    Ok(KeyIneqOutcome {
        subgraph: gamma1,
        chi,
        theta_min,
        lambda_value,
        phi,
        m,
        k,
        lhs,
        ratio_strict,
        oracle_ok,
    })
}

fn rat_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Length in the unreduced graph of the subgraph of the reduced graph:
/// every interior edge counts once, a boundary edge counts 1 + the dropped
/// vertices it absorbed.
pub fn widen_length(model: &ArcModel, reduction_inner: &[u32], sub: &Subgraph<'_>) -> u64 {
    let mut len = 0u64;
    for &e in sub.edge_set() {
        if model.is_arc_edge(e) {
            len += 1;
        } else {
            let b = e as usize - model.n_arcs();
            len += 1 + reduction_inner[b] as u64;
        }
    }
    len
}

/// The associated subgraph in the unreduced graph, materialized: each
/// boundary edge splits into inner+1 pieces (arcs stay whole), with the same
/// underlying space. Returns the subdivided multigraph and the parent
/// (reduced-graph edge id) of every piece.
pub fn widen_subgraph(
    model: &ArcModel,
    inner: &[u32],
    sub: &Subgraph<'_>,
) -> Result<(Multigraph, BTreeMap<EdgeId, EdgeId>)> {
    let mut verts: Vec<VertexId> = sub.vertex_set().iter().copied().collect();
    let mut edges: Vec<(EdgeId, Vec<VertexId>)> = Vec::new();
    let mut parent: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut next_vertex = 2 * model.n_arcs() as u32;
    let mut next_edge = 0u32;
    for &e in sub.edge_set() {
        let ends = model.graph().edge(e).ends;
        if model.is_arc_edge(e) {
            parent.insert(next_edge, e);
            edges.push((next_edge, vec![ends[0], ends[1]]));
            next_edge += 1;
        } else {
            let c = inner[e as usize - model.n_arcs()];
            let mut prev = ends[0];
            for i in 0..=c {
                let to = if i == c {
                    ends[1]
                } else {
                    let v = next_vertex;
                    next_vertex += 1;
                    verts.push(v);
                    v
                };
                parent.insert(next_edge, e);
                edges.push((next_edge, vec![prev, to]));
                next_edge += 1;
                prev = to;
            }
        }
    }
    Ok((Multigraph::build(&verts, &edges)?, parent))
}

#[derive(Clone, Debug)]
pub struct KeyConsOutcome<'g> {
    /// The Betti-2 subgraph, in the reduced model graph.
    pub k_subgraph: Subgraph<'g>,
    /// Its length in the unreduced graph.
    pub k0_length: u64,
    pub theta_min: u64,
    pub betti: i64,
    pub oracle_ok: bool,
    pub report: BoundReport,
    pub keyineq: KeyIneqOutcome<'g>,
}

/// Pipeline: key inequality extraction, then a short Betti-2 subgraph of the
/// subdivided graph, pulled back to the reduced graph, with the length bound
///   length(K0)/theta(K) < 6 phi(theta_max) log2(2 Theta) (sum lambda)/Theta
/// certified by directed arithmetic.
pub fn key_consequence<'g>(
    reduction: &'g Reduction,
    labeling: &Labeling,
    excluded: &BTreeSet<ArcId>,
    q: &BigRational,
    ctx: &Ctx,
) -> Result<KeyConsOutcome<'g>> {
    let model = &reduction.model;
    // the standard weights: per label, the maximum width among its arcs
    let mut weights = vec![BigRational::zero(); labeling.n_labels];
    for a in 0..model.n_arcs() {
        let l = labeling.label_of[a] as usize;
        let w = BigRational::from_integer(BigInt::from(reduction.widths[a]));
        if w > weights[l] {
            weights[l] = w;
        }
    }
    let keyineq = key_inequality_subgraph(model, labeling, &weights, excluded, q)?;

    // short Betti-2 subgraph of the subdivided realization
    let (wgraph, parent) = widen_subgraph(model, &reduction.inner, &keyineq.subgraph)?;
    let witness = general_witness(&wgraph)?;
    let trimmed = trim_to_betti_two(&witness.subgraph)?;

    // pull back: group subdivided edges by parent, all-or-nothing per chain
    let mut per_parent: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for &e in trimmed.edge_set() {
        *per_parent.entry(parent[&e]).or_insert(0) += 1;
    }
    let mut k_edges: BTreeSet<EdgeId> = BTreeSet::new();
    for (&p, &cnt) in &per_parent {
        let expected = if model.is_arc_edge(p) {
            1
        } else {
            reduction.inner[p as usize - model.n_arcs()] as usize + 1
        };
        if cnt != expected {
            return Err(Error::ConstructionFailed(
                "trimmed witness broke a subdivision chain".into(),
            ));
        }
        k_edges.insert(p);
    }
    let k_vertices: BTreeSet<VertexId> = k_edges
        .iter()
        .flat_map(|&e| model.graph().edge(e).ends)
        .collect();
    let k_sub = Subgraph::new(model.graph(), k_vertices, k_edges)?;

    // postconditions
    let chi = k_sub.euler_char();
    let betti = 1 - chi;
    if betti != 2 || !k_sub.is_connected() {
        return Err(Error::ConstructionFailed(format!("Betti number {betti}, want 2")));
    }
    if k_sub.vertex_set().iter().any(|&v| k_sub.valence(v) <= 1) {
        return Err(Error::ConstructionFailed("valence <= 1 vertex survived".into()));
    }
    for &a in excluded {
        if k_sub.contains_edge(model.arc_edge(a)) {
            return Err(Error::ConstructionFailed("excluded edge in output".into()));
        }
    }
    let oracle_ok = pi1_oracle(model, &k_sub);
    if !oracle_ok {
        return Err(Error::ConstructionFailed("output not injective".into()));
    }
    let theta = labeling.multiplicities();
    let theta_min = theta_min_of_subgraph(model, labeling, &theta, &k_sub)
        .ok_or_else(|| Error::ConstructionFailed("no interior edge in output".into()))?;
    let k0_length = widen_length(model, &reduction.inner, &k_sub);
    debug_assert_eq!(k0_length, trimmed.length() as u64);

    // length(K0)/theta_min < 6 phi(theta_max) log2(2 Theta) (sum lambda)/Theta
    let theta_total = model.n_arcs() as u64;
    let lambda_sum: BigRational = weights.iter().sum();
    let lhs = BigRational::from_integer(BigInt::from(k0_length))
        / BigRational::from_integer(BigInt::from(theta_min));
    let coef = BigRational::from_integer(BigInt::from(6u8)) * &lambda_sum
        / BigRational::from_integer(BigInt::from(theta_total));
    let rhs = keyineq
        .phi
        .interval(ctx)
        .mul(ctx, &log2_rational(ctx, &rat_i64(2 * theta_total as i64)))
        .mul(ctx, &Interval::from_rational(ctx, &coef));
    let lhs_iv = Interval::from_rational(ctx, &lhs);
    let holds = lhs_iv.certified_lt(&rhs) == Some(true);
    let report = BoundReport::directed(
        "key-consequence-length",
        lhs.to_string(),
        rhs.to_decimal(ctx, 30),
        holds,
        rhs.sub(&lhs_iv).to_decimal(ctx, 30),
        ctx.prec,
    );
    if !holds {
        return Err(Error::ConstructionFailed("length bound failed".into()));
    }
    Ok(KeyConsOutcome { k_subgraph: k_sub, k0_length, theta_min, betti, oracle_ok, report, keyineq })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arcsys::{ArcModel, ArcModelSpec, RegionSpec};
    use std::str::FromStr;

    fn rat(s: &str) -> BigRational {
        BigRational::from_str(s).unwrap()
    }

    /// A genus-2-ish surface cut by several arcs, reduced by construction:
    /// two circles, six arcs, no rectangles (all complement circuits grouped
    /// into non-disk regions).
    fn six_arc_model() -> ArcModel {
        let circles = vec![vec![0, 1, 2, 3, 4, 5], vec![6, 7, 8, 9, 10, 11]];
        let arcs = vec![(0, 7), (1, 6), (2, 9), (3, 8), (4, 11), (5, 10)];
        let traced = crate::arcsys::trace_structure(&circles, &arcs).unwrap();
        let all: Vec<u32> = (0..traced.circuits.len() as u32).collect();
        // one region holding every circuit, with genus chosen for integrality
        let b = all.len() as i64;
        let chi_graph = -(arcs.len() as i64);
        // chi(S) = chi_graph + (2 - 2g - b); boundary = 2; need integrality
        // try g = 0..4 for a valid assignment
        for g in 0..5u32 {
            let chi_s = chi_graph + (2 - 2 * g as i64 - b);
            let two_genus = 2 - chi_s - 2;
            if two_genus >= 0 && two_genus % 2 == 0 {
                let m = ArcModel::new(ArcModelSpec {
                    circles: circles.clone(),
                    arcs: arcs.clone(),
                    regions: vec![RegionSpec {
                        genus: g,
                        free_boundary: 0,
                        circuits: Some(all.clone()),
                        frontier: None,
                    }],
                });
                if let Ok(m) = m {
                    return m;
                }
            }
        }
        panic!("no valid region assignment found");
    }

    #[test]
    fn key_inequality_single_label() {
        let m = six_arc_model();
        assert!(m.is_reduced());
        assert!(!m.is_annulus());
        let labeling = Labeling::new(vec![0; 6], 1).unwrap();
        let weights = vec![rat("1")];
        let out =
            key_inequality_subgraph(&m, &labeling, &weights, &BTreeSet::new(), &rat("2")).unwrap();
        assert!(out.chi < 0);
        assert!(out.ratio_strict);
        assert!(out.oracle_ok);
        assert!(out.k >= 1);
    }

    #[test]
    fn key_inequality_respects_exclusions() {
        let m = six_arc_model();
        let labeling = Labeling::new(vec![0; 6], 1).unwrap();
        let weights = vec![rat("1")];
        // q = 2 allows excluding up to 3 of 6 arcs with one label
        let excluded: BTreeSet<ArcId> = [0u32, 2].into_iter().collect();
        let out = key_inequality_subgraph(&m, &labeling, &weights, &excluded, &rat("2")).unwrap();
        for a in excluded {
            assert!(!out.subgraph.contains_edge(a));
        }
    }

    #[test]
    fn key_inequality_hypothesis_violation() {
        let m = six_arc_model();
        let labeling = Labeling::new(vec![0; 6], 1).unwrap();
        let weights = vec![rat("1")];
        // q = 3: at most 2 exclusions allowed; 3 is too many
        let excluded: BTreeSet<ArcId> = [0u32, 2, 4].into_iter().collect();
        assert!(matches!(
            key_inequality_subgraph(&m, &labeling, &weights, &excluded, &rat("3")),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
