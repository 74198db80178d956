//! Seeded instance generators and the corpus suites. Identical configs give
//! identical instance streams and byte-identical reports; instances run in
//! parallel with a deterministic ordered merge.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::arb::Ctx;
use crate::arcsys::{
    key_consequence, key_inequality_subgraph, reduce_system, widen_length, ArcModel, ArcModelSpec,
    Labeling, RegionSpec, Reduction,
};
use crate::bigirth::{bigirth_exact, general_witness, le_log2_bound, trivalent_witness};
use crate::bounds::{
    choose_q_tau, easy_constant_consistency, f_interval, f_step_holds, hard_le_explicit,
    qualitative_implication, theorem_check, torus_knot_data, xfprime_interval, KnotData,
    TheoremKind,
};
use crate::error::{Error, Result};
use crate::field::{PAdic, ValuedField};
use crate::graph::{Multigraph, Subgraph};
use crate::norms::{knot_chain_verify, minkowski_check, ChainInput, HomologyClass, ParallelogramNorm};
use crate::par::{ordered_map, ExecMode};
use crate::report::{CorpusConfig, InstanceResult, RunReport};
use crate::tree::{
    apply, arc_commutator_check, base_vertex, displacement, translation_length,
    translation_length_oracle, Mat2,
};

pub fn instance_rng(seed: u64, index: u32) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ---------------------------------------------------------------------------
// Graph generators
// ---------------------------------------------------------------------------

/// Connected multigraph with every valence at least 3.
pub fn gen_trivalent_graph(rng: &mut ChaCha8Rng, max_v: u32) -> Multigraph {
    let v = rng.random_range(2..=max_v);
    let mut edges: Vec<(u32, Vec<u32>)> = Vec::new();
    let mut next = 0u32;
    for w in 1..v {
        let u = rng.random_range(0..w);
        edges.push((next, vec![u, w]));
        next += 1;
    }
    let mut valence = vec![0u32; v as usize];
    for (_, e) in &edges {
        valence[e[0] as usize] += 1;
        valence[e[1] as usize] += 1;
    }
    while let Some(low) = (0..v).find(|&x| valence[x as usize] < 3) {
        let other = rng.random_range(0..v);
        edges.push((next, vec![low, other]));
        valence[low as usize] += 1;
        valence[other as usize] += 1; // a loop at `low` gets both increments
        next += 1;
    }
    let verts: Vec<u32> = (0..v).collect();
    Multigraph::build(&verts, &edges).expect("generator emits valid graphs")
}

/// Graph with no simply connected component and chi < 0: a trivalent base
/// with subdivided edges, sometimes with a disjoint cycle component.
pub fn gen_general_graph(rng: &mut ChaCha8Rng) -> Multigraph {
    loop {
        let base = gen_trivalent_graph(rng, 6);
        let max_parts = rng.random_range(1..=3u32);
        let mut verts: Vec<u32> = base.vertices().to_vec();
        let mut next_v = verts.iter().max().copied().unwrap_or(0) + 1;
        let mut edges: Vec<(u32, Vec<u32>)> = Vec::new();
        let mut next_e = 0u32;
        for e in base.edges() {
            let parts = rng.random_range(1..=max_parts);
            let mut prev = e.ends[0];
            for i in 0..parts {
                let to = if i + 1 == parts {
                    e.ends[1]
                } else {
                    let nv = next_v;
                    next_v += 1;
                    verts.push(nv);
                    nv
                };
                edges.push((next_e, vec![prev, to]));
                next_e += 1;
                prev = to;
            }
        }
        if rng.random_bool(0.25) {
            // disjoint cycle component (allowed: not simply connected)
            let len = rng.random_range(1..=3u32);
            let start = next_v;
            for i in 0..len {
                verts.push(start + i);
            }
            for i in 0..len {
                edges.push((next_e, vec![start + i, start + (i + 1) % len]));
                next_e += 1;
            }
        }
        if verts.len() > 20 {
            continue;
        }
        let g = Multigraph::build(&verts, &edges).expect("generator emits valid graphs");
        debug_assert!(!g.has_simply_connected_component());
        if g.euler_char() < 0 {
            return g;
        }
    }
}

// ---------------------------------------------------------------------------
// Matrix generators
// ---------------------------------------------------------------------------

/// Random SL2 element: a word of elementary matrices and diag(p, 1/p).
pub fn gen_sl2_matrix(rng: &mut ChaCha8Rng, f: &PAdic, word_len: u32) -> Mat2<BigRational> {
    let mut m = Mat2::identity(f);
    for _ in 0..word_len {
        let r = f.from_int(rng.random_range(-3..=3i64));
        let gen = match rng.random_range(0..3u32) {
            0 => Mat2::new(f.one(), r, f.zero(), f.one()),
            1 => Mat2::new(f.one(), f.zero(), r, f.one()),
            _ => {
                if rng.random_bool(0.5) {
                    Mat2::new(f.uniformizer_pow(1), f.zero(), f.zero(), f.uniformizer_pow(-1))
                } else {
                    Mat2::new(f.uniformizer_pow(-1), f.zero(), f.zero(), f.uniformizer_pow(1))
                }
            }
        };
        m = m.mul(f, &gen);
    }
    debug_assert!(m.is_sl2(f));
    m
}

/// Random element of the arc-stabilizer shape: integral entries, lower-left
/// valuation at least t.
pub fn gen_stabilizer_matrix(rng: &mut ChaCha8Rng, f: &PAdic, t: i64, word_len: u32) -> Mat2<BigRational> {
    let pi_t = f.uniformizer_pow(t);
    let mut m = Mat2::identity(f);
    for _ in 0..word_len {
        let r = f.from_int(rng.random_range(-3..=3i64));
        let gen = match rng.random_range(0..3u32) {
            0 => Mat2::new(f.one(), r, f.zero(), f.one()),
            1 => Mat2::new(f.one(), f.zero(), f.mul(&pi_t, &r), f.one()),
            _ => {
                // unit diagonal
                let mut u = rng.random_range(1..=5i64);
                while (u as u64).is_multiple_of(f.p) {
                    u += 1;
                }
                Mat2::new(f.from_int(u), f.zero(), f.zero(), rat(1, u))
            }
        };
        m = m.mul(f, &gen);
    }
    m
}

// ---------------------------------------------------------------------------
// Arc-model generators
// ---------------------------------------------------------------------------

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<u32> {
    let mut v: Vec<u32> = (0..n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
    v
}

/// Random validated arc model. With `all_planar`, every region has genus 0.
pub fn gen_arc_model(rng: &mut ChaCha8Rng, max_arcs: u32, all_planar: bool) -> ArcModel {
    for _ in 0..500 {
        let n = rng.random_range(2..=max_arcs) as usize;
        let c = rng.random_range(1..=3u32.min(n as u32)) as usize;
        // distribute 2n vertices over c circles, each nonempty
        let perm = random_permutation(rng, 2 * n);
        let mut sizes = vec![1usize; c];
        for _ in 0..(2 * n - c) {
            sizes[rng.random_range(0..c)] += 1;
        }
        let mut circles = Vec::with_capacity(c);
        let mut at = 0;
        for &s in &sizes {
            circles.push(perm[at..at + s].to_vec());
            at += s;
        }
        let pairing = random_permutation(rng, 2 * n);
        let arcs: Vec<(u32, u32)> =
            (0..n).map(|i| (pairing[2 * i], pairing[2 * i + 1])).collect();
        let Ok(traced) = crate::arcsys::trace_structure(&circles, &arcs) else { continue };
        let b = traced.circuits.len();
        let r = rng.random_range(1..=b as u32) as usize;
        let mut group = vec![0u32; b];
        for (i, g) in group.iter_mut().enumerate() {
            *g = if i < r { i as u32 } else { rng.random_range(0..r as u32) };
        }
        // compact group ids
        let mut ids: Vec<u32> = group.clone();
        ids.sort();
        ids.dedup();
        let mut regions: Vec<RegionSpec> = ids
            .iter()
            .map(|&g| {
                let circuits: Vec<u32> = (0..b as u32).filter(|&i| group[i as usize] == g).collect();
                let genus = if all_planar { 0 } else { rng.random_range(0..=2) };
                let free = rng.random_range(0..=1);
                RegionSpec { genus, free_boundary: free, circuits: Some(circuits), frontier: None }
            })
            .collect();
        // avoid declaring a one-arc-traversal circuit a bare disk
        for spec in &mut regions {
            let cs = spec.circuits.as_ref().unwrap();
            if cs.len() == 1 && spec.genus == 0 && spec.free_boundary == 0 {
                let circ = &traced.circuits[cs[0] as usize];
                if circ.arc_steps() == 1 {
                    if all_planar {
                        spec.free_boundary = 1;
                    } else {
                        spec.genus = 1;
                    }
                }
            }
        }
        if let Ok(model) = ArcModel::new(ArcModelSpec { circles, arcs, regions }) {
            return model;
        }
    }
    panic!("arc-model generator failed to produce a valid instance");
}

/// Random reduced arc system (reduced via the reduction of a random model).
pub fn gen_reduced_model(rng: &mut ChaCha8Rng, max_arcs: u32) -> Reduction {
    for _ in 0..200 {
        let model = gen_arc_model(rng, max_arcs, false);
        let Ok(red) = reduce_system(&model) else { continue };
        if red.model.n_arcs() >= 2 && !red.model.is_annulus() {
            return red;
        }
    }
    panic!("reduced-model generator failed");
}

/// Surjective labeling with at most 5 labels.
pub fn gen_labeling(rng: &mut ChaCha8Rng, n_arcs: usize) -> Labeling {
    let l = rng.random_range(1..=5usize.min(n_arcs));
    let perm = random_permutation(rng, n_arcs);
    let mut label_of = vec![0u32; n_arcs];
    for (i, &a) in perm.iter().enumerate() {
        label_of[a as usize] = if i < l { i as u32 } else { rng.random_range(0..l as u32) };
    }
    Labeling::new(label_of, l).expect("surjective by construction")
}

/// Excluded arc set respecting theta*_i <= theta_i / q.
pub fn gen_excluded(
    rng: &mut ChaCha8Rng,
    labeling: &Labeling,
    q_num: u64,
) -> BTreeSet<u32> {
    let theta = labeling.multiplicities();
    let mut by_label: Vec<Vec<u32>> = vec![Vec::new(); labeling.n_labels];
    for (a, &l) in labeling.label_of.iter().enumerate() {
        by_label[l as usize].push(a as u32);
    }
    let mut out = BTreeSet::new();
    for (i, arcs) in by_label.iter().enumerate() {
        let allowed = (theta[i] / q_num) as usize;
        let k = rng.random_range(0..=allowed);
        let perm = random_permutation(rng, arcs.len());
        for &j in perm.iter().take(k) {
            out.insert(arcs[j as usize]);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Norm generators
// ---------------------------------------------------------------------------

/// Balanced parallelogram with no interior lattice point, by shrinking.
pub fn gen_lattice_free_parallelogram(rng: &mut ChaCha8Rng) -> ParallelogramNorm {
    loop {
        let coord = |rng: &mut ChaCha8Rng| rat(rng.random_range(-8..=8i64), rng.random_range(1..=4i64));
        let v1 = (coord(rng), coord(rng));
        let v2 = (coord(rng), coord(rng));
        let Ok(mut b) = ParallelogramNorm::new(v1, v2) else { continue };
        for _ in 0..12 {
            if b.interior_lattice_point().is_none() {
                return b;
            }
            let half = rat(1, 2);
            b = ParallelogramNorm::new(
                (&b.v1.0 * &half, &b.v1.1 * &half),
                (&b.v2.0 * &half, &b.v2.1 * &half),
            )
            .expect("halving keeps independence");
        }
    }
}

fn gcd64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd64(b, a % b)
    }
}

fn gen_primitive(rng: &mut ChaCha8Rng) -> HomologyClass {
    loop {
        let a = rng.random_range(-6..=6i64);
        let b = rng.random_range(-6..=6i64);
        if (a, b) != (0, 0) && gcd64(a, b) == 1 {
            return HomologyClass(a, b);
        }
    }
}

/// Hypothesis-satisfying chain inputs for the slope-denominator verifier.
pub fn gen_chain_input(rng: &mut ChaCha8Rng) -> ChainInput {
    loop {
        let alpha1 = gen_primitive(rng);
        let alpha2 = gen_primitive(rng);
        if crate::norms::omega(alpha1, alpha2) == 0 {
            continue;
        }
        let a1 = rng.random_range(1..=4i64);
        let a2 = rng.random_range(1..=4i64);
        let mu0 = HomologyClass(a1 * alpha1.0 + a2 * alpha2.0, a1 * alpha1.1 + a2 * alpha2.1);
        let g = gcd64(mu0.0, mu0.1);
        if g == 0 {
            continue;
        }
        let mu = HomologyClass(mu0.0 / g, mu0.1 / g);
        if !mu.is_primitive() {
            continue;
        }
        let t_den = rng.random_range(2..=9i64);
        let t_num = rng.random_range(1..t_den);
        let input = ChainInput {
            alpha1,
            alpha2,
            mu,
            t: rat(t_num, t_den),
            chain_constant: rat(1, 1),
        };
        if knot_chain_verify(&input).is_ok() {
            return input;
        }
    }
}

/// Knot data satisfying the chi bound (so the qualitative implication and
/// constant-consistency checks apply) with g2 >= 2.
pub fn gen_knot_data(rng: &mut ChaCha8Rng) -> KnotData {
    let g1 = rng.random_range(0..=5u64);
    let g2 = rng.random_range(2..=8u64);
    let m1 = rng.random_range(1..=4u64);
    let m2 = rng.random_range(1..=4u64);
    let q1 = rng.random_range(1..=10u64);
    let chi1_abs = (2i64 - 2 * g1 as i64 - m1 as i64).unsigned_abs();
    let delta_min = (2 * chi1_abs).div_ceil(m1 * m2).max(1);
    let delta = delta_min + rng.random_range(0..=5u64);
    KnotData { g1, g2, m1, m2, q1, delta }
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

fn result_of(index: u32, out: Result<String>) -> InstanceResult {
    match out {
        Ok(detail) => InstanceResult { index, pass: true, detail },
        Err(e) => InstanceResult { index, pass: false, detail: format!("FAIL: {e}") },
    }
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::ConstructionFailed(msg.into()))
    }
}

pub fn run_suite(config: &CorpusConfig, mode: ExecMode) -> Result<RunReport> {
    // `start` offsets the instance indices, so a failing instance replays
    // alone with --count 1 --params '{"start":<index>}'
    let start = config.params.get("start").and_then(|v| v.as_u64()).unwrap_or(0) as u32;
    let indices: Vec<u32> = (start..start + config.count).collect();
    let seed = config.seed;
    let ctx = Ctx::with_digits(config.digits.max(30));
    let results: Vec<InstanceResult> = match config.suite.as_str() {
        "bigirth-trivalent" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_bigirth_trivalent(&mut rng))
        }),
        "bigirth-general" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_bigirth_general(&mut rng))
        }),
        "tree-length" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_tree_length(&mut rng, i))
        }),
        "tree-commutator" => ordered_map(indices, mode, move |i| {
            let mut rng = instance_rng(seed, i);
            // arc lengths cycle through 1..=5, so any count divisible by 5
            // tests them evenly and replay is index-stable
            let t = 1 + (i % 5) as i64;
            result_of(i, suite_tree_commutator(&mut rng, i, t))
        }),
        "arcsys-keyineq" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_keyineq(&mut rng, i))
        }),
        "arcsys-keycons" => {
            let ctx = ctx.clone();
            ordered_map(indices, mode, move |i| {
                let mut rng = instance_rng(seed, i);
                result_of(i, suite_keycons(&mut rng, i, &ctx))
            })
        }
        "arcsys-weights" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_weights(&mut rng))
        }),
        "arcsys-dualgenus" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_dual_genus(&mut rng))
        }),
        "norms-minkowski" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_minkowski(&mut rng))
        }),
        "norms-chain" => ordered_map(indices, mode, |i| {
            let mut rng = instance_rng(seed, i);
            result_of(i, suite_chain(&mut rng))
        }),
        "bounds-torus" => {
            let ctx = ctx.clone();
            let pairs = torus_pairs();
            let idx: Vec<u32> = (0..pairs.len() as u32).collect();
            ordered_map(idx, mode, move |i| {
                let (p, q) = pairs[i as usize];
                result_of(i, suite_torus(p, q, &ctx))
            })
        }
        "bounds-calculus" => {
            let ctx = ctx.clone();
            let lo = config.params.get("lo").and_then(|v| v.as_u64()).unwrap_or(333);
            let hi = config.params.get("hi").and_then(|v| v.as_u64()).unwrap_or(1_000_000);
            let chunks = config
                .params
                .get("chunks")
                .and_then(|v| v.as_u64())
                .map(|c| c as u32)
                .unwrap_or(config.count)
                .max(1);
            ordered_map(indices, mode, move |i| {
                result_of(i, suite_calculus_chunk(lo, hi, i, chunks, &ctx))
            })
        }
        "bounds-consistency" => {
            let ctx = ctx.clone();
            ordered_map(indices, mode, move |i| {
                let mut rng = instance_rng(seed, i);
                result_of(i, suite_consistency(&mut rng, i, &ctx))
            })
        }
        other => return Err(Error::BadInput(format!("unknown suite {other}"))),
    };
    Ok(RunReport::new(config.clone(), results))
}

fn suite_bigirth_trivalent(rng: &mut ChaCha8Rng) -> Result<String> {
    let g = gen_trivalent_graph(rng, 14);
    let v = g.num_vertices();
    let (bg, wit) = bigirth_exact(&g)?;
    let bg = bg.ok_or_else(|| Error::ConstructionFailed("no finite bigirth".into()))?;
    check(le_log2_bound(bg, v as u64, 4), "exact bigirth exceeds 4 log2 V")?;
    let wit = wit.unwrap();
    check(wit.length >= bg, "oracle witness below the optimum")?;
    let cons = trivalent_witness(&g)?;
    check(bg <= cons.length, "constructive witness beat the oracle")?;
    Ok(format!("V={v} E={} bigirth={bg} witness={} ({})", g.num_edges(), cons.length, cons.branch))
}

fn suite_bigirth_general(rng: &mut ChaCha8Rng) -> Result<String> {
    let g = gen_general_graph(rng);
    let chi = g.euler_char();
    let alpha_floor = (g.num_edges() as i64 / -chi) as u64;
    let (bg, _) = bigirth_exact(&g)?;
    let bg = bg.ok_or_else(|| Error::ConstructionFailed("no finite bigirth".into()))?;
    check(
        le_log2_bound(bg, 2 * (-chi) as u64, 4 * alpha_floor),
        "exact bigirth exceeds the general bound",
    )?;
    let wit = general_witness(&g)?;
    check(bg <= wit.length, "constructive witness beat the oracle")?;
    Ok(format!(
        "V={} E={} chi={chi} bigirth={bg} witness={} ({})",
        g.num_vertices(),
        g.num_edges(),
        wit.length,
        wit.branch
    ))
}

fn suite_tree_length(rng: &mut ChaCha8Rng, index: u32) -> Result<String> {
    let p = [2u64, 3, 5][(index % 3) as usize];
    let f = PAdic::new(p);
    let len = rng.random_range(1..=10u32);
    let a = gen_sl2_matrix(rng, &f, len);
    let formula = translation_length(&f, &a)?;
    let (oracle, _) = translation_length_oracle(&f, &a)?;
    check(oracle == formula, "oracle disagrees with 2 max(0, -v(tr))")?;
    let s0 = base_vertex(&f);
    let d = displacement(&f, &a, &s0)?;
    check(d % 2 == 0, "odd displacement at the base vertex")?;
    // action is isometric on a sample pair
    let s1 = apply(&f, &a, &s0)?;
    let d2 = crate::tree::tree_distance(&f, &s0, &s1)?;
    check(d2 == d, "distance/displacement mismatch")?;
    Ok(format!("p={p} len={formula} disp0={d}"))
}

fn suite_tree_commutator(rng: &mut ChaCha8Rng, _index: u32, t: i64) -> Result<String> {
    let p = [2u64, 3, 5][rng.random_range(0..3usize)];
    let f = PAdic::new(p);
    let (lx, ly) = (rng.random_range(2..=6), rng.random_range(2..=6));
    let x = gen_stabilizer_matrix(rng, &f, t, lx);
    let y = gen_stabilizer_matrix(rng, &f, t, ly);
    let (holds, v) = arc_commutator_check(&f, t, &x, &y)?;
    check(holds, "commutator trace valuation below t")?;
    Ok(format!("p={p} t={t} v(tr-2)={v}"))
}

fn keyineq_instance(rng: &mut ChaCha8Rng, index: u32) -> (Reduction, Labeling, BTreeSet<u32>, BigRational, u64) {
    let red = gen_reduced_model(rng, 20);
    let n = red.model.n_arcs();
    let labeling = gen_labeling(rng, n);
    let q_num = if index.is_multiple_of(2) { 2u64 } else { 3 };
    let excluded = gen_excluded(rng, &labeling, q_num);
    (red, labeling, excluded, rat(q_num as i64, 1), q_num)
}

fn suite_keyineq(rng: &mut ChaCha8Rng, index: u32) -> Result<String> {
    let (red, labeling, excluded, q, q_num) = keyineq_instance(rng, index);
    let weights: Vec<BigRational> = (0..labeling.n_labels)
        .map(|_| rat(rng.random_range(1..=9i64), rng.random_range(1..=9i64)))
        .collect();
    let out = key_inequality_subgraph(&red.model, &labeling, &weights, &excluded, &q)?;
    check(out.ratio_strict && out.oracle_ok && out.chi < 0, "postconditions failed")?;
    Ok(format!(
        "Theta={} labels={} q={q_num} chi={} theta_min={} m={} k={}",
        red.model.n_arcs(),
        labeling.n_labels,
        out.chi,
        out.theta_min,
        out.m,
        out.k
    ))
}

fn suite_keycons(rng: &mut ChaCha8Rng, index: u32, ctx: &Ctx) -> Result<String> {
    let (red, labeling, excluded, q, q_num) = keyineq_instance(rng, index);
    let out = key_consequence(&red, &labeling, &excluded, &q, ctx)?;
    check(out.betti == 2 && out.oracle_ok && out.report.holds, "postconditions failed")?;
    Ok(format!(
        "Theta={} q={q_num} K0_len={} theta_min={} margin={}",
        red.model.n_arcs(),
        out.k0_length,
        out.theta_min,
        out.report.margin
    ))
}

#[allow(clippy::needless_range_loop)] // several per-arc arrays share the index
fn suite_weights(rng: &mut ChaCha8Rng) -> Result<String> {
    let red = gen_reduced_model(rng, 10);
    // synthesize random widths and inner counts consistent with them
    let model = &red.model;
    let n = model.n_arcs();
    let widths: Vec<u32> = (0..n).map(|_| rng.random_range(1..=5)).collect();
    // per-arc split of the w-1 dropped duplicates between the two flanks
    let mut left = vec![0u32; 2 * n]; // per vertex: dropped endpoints entering side
    let mut right = vec![0u32; 2 * n];
    for a in 0..n {
        let w = widths[a];
        let s1 = rng.random_range(0..w);
        let s2 = w - 1 - s1;
        let (x, y) = model.spec().arcs[a];
        left[x as usize] = s1;
        right[x as usize] = s2;
        left[y as usize] = s2;
        right[y as usize] = s1;
    }
    let mut inner = vec![0u32; model.n_bedges()];
    for (b, item) in inner.iter_mut().enumerate() {
        // oriented: a bedge absorbs right-of-tail and left-of-head
        let (tail, head) = model.bedge_endpoints(b);
        *item = right[tail as usize] + left[head as usize];
    }
    let labeling = gen_labeling(rng, n);
    // lambda(i) = max width over label-i arcs
    let mut lam = vec![0u64; labeling.n_labels];
    for a in 0..n {
        let l = labeling.label_of[a] as usize;
        lam[l] = lam[l].max(widths[a] as u64);
    }
    // check on the full graph and two random subgraphs
    let mut checked = 0;
    let subs: Vec<Subgraph<'_>> = {
        let full = model.graph().full();
        let mut list = vec![full];
        for _ in 0..2 {
            let arcs: Vec<u32> =
                (0..n as u32).filter(|_| rng.random_bool(0.7)).collect();
            let bedges: Vec<u32> =
                (0..model.n_bedges() as u32).filter(|_| rng.random_bool(0.7)).collect();
            let mut vs: BTreeSet<u32> = BTreeSet::new();
            for &a in &arcs {
                let (u, w) = model.spec().arcs[a as usize];
                vs.insert(u);
                vs.insert(w);
            }
            for &b in &bedges {
                let e = model.graph().edge(model.bedge_edge(b as usize));
                vs.insert(e.ends[0]);
                vs.insert(e.ends[1]);
            }
            if let Ok(s) = crate::arcsys::model_subgraph(model, arcs, bedges, vs) {
                list.push(s);
            }
        }
        list
    };
    for sub in &subs {
        if sub.edge_set().is_empty() {
            continue;
        }
        let len = widen_length(model, &inner, sub);
        let lambda: u64 = sub
            .vertex_set()
            .iter()
            .map(|&v| lam[labeling.label_of[model.vertex_arc(v) as usize] as usize])
            .sum();
        // exact: 2 * len <= 3 * lambda
        check(2 * len <= 3 * lambda, "widened length exceeds (3/2) lambda")?;
        checked += 1;
    }
    // interior-only subgraph: the sharper bound length <= lambda / 2
    let arcs_only =
        crate::arcsys::model_subgraph(model, 0..n as u32, [], []).expect("arcs are closed");
    let len = widen_length(model, &inner, &arcs_only);
    let lambda: u64 = arcs_only
        .vertex_set()
        .iter()
        .map(|&v| lam[labeling.label_of[model.vertex_arc(v) as usize] as usize])
        .sum();
    check(2 * len <= lambda, "interior-only widened length exceeds lambda/2")?;
    Ok(format!("arcs={n} checked={checked}"))
}

fn suite_dual_genus(rng: &mut ChaCha8Rng) -> Result<String> {
    let model = gen_arc_model(rng, 10, true);
    let dual = model.dual_graph();
    let (_, betti) = dual.components_and_betti();
    let b1: i64 = betti.iter().sum();
    check(b1 >= model.genus() as i64, "dual Betti number below the genus")?;
    Ok(format!("arcs={} regions={} b1={} genus={}", model.n_arcs(), model.regions().len(), b1, model.genus()))
}

fn suite_minkowski(rng: &mut ChaCha8Rng) -> Result<String> {
    let b = gen_lattice_free_parallelogram(rng);
    let (area, pt) = minkowski_check(&b);
    check(pt.is_none(), "generator emitted a non-lattice-free ball")?;
    check(area <= rat(4, 1), "lattice-free balanced parallelogram with area > 4")?;
    Ok(format!("area={area}"))
}

fn suite_chain(rng: &mut ChaCha8Rng) -> Result<String> {
    let input = gen_chain_input(rng);
    let out = knot_chain_verify(&input)?;
    check(out.report.holds, "chain inequality failed")?;
    Ok(format!("q1={} Delta={} ratio={}", out.q1, out.delta, out.ratio))
}

pub fn torus_pairs() -> Vec<(u64, u64)> {
    let mut out = vec![];
    for p in 2..=25u64 {
        for q in (p + 1)..=25 {
            if num_integer::Integer::gcd(&p, &q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

fn suite_torus(p: u64, q: u64, ctx: &Ctx) -> Result<String> {
    let (slope, genus) = torus_knot_data(p, q)?;
    if genus < 2 {
        return Ok(format!("p={p} q={q} genus={genus} (vacuous)"));
    }
    let data = KnotData { g1: 0, g2: genus, m1: 1, m2: 1, q1: 1, delta: slope };
    let rep = theorem_check(
        &data,
        &TheoremKind::SpanningCorollary { g: genus, r: slope },
        ctx,
        &rat(1, 1),
    )?;
    check(rep.holds, "spanning corollary failed")?;
    Ok(format!("p={p} q={q} r={slope} g={genus} margin={}", rep.margin))
}

fn suite_calculus_chunk(lo: u64, hi: u64, index: u32, chunks: u32, ctx: &Ctx) -> Result<String> {
    let span = hi - lo;
    let per = span.div_ceil(chunks as u64);
    let a = lo + per * index as u64;
    let b = (a + per).min(hi);
    if a >= hi {
        return Ok("empty".into());
    }
    if index == 0 {
        // sign facts at the threshold
        let d333 = xfprime_interval(ctx, 333);
        let d334 = xfprime_interval(ctx, 334);
        check(d333.is_positive(), "x f'(x) not positive at 333")?;
        check(d334.hi < num_bigint::BigInt::from(0), "x f'(x) not negative at 334")?;
        check(f_step_holds(ctx, 333) == Some(true), "f(334) < f(333) failed")?;
        // q/tau certificates on a logarithmic grid
        let mut x = 2u64;
        while x <= 1_000_000 {
            let chosen = choose_q_tau(&BigRational::from_integer(BigInt::from(x)), ctx)?;
            check(
                chosen.cert_q_range.holds && chosen.cert_ln_phi.holds,
                "q/tau certificate failed",
            )?;
            x *= 2;
        }
        let chosen = choose_q_tau(&rat(1_000_000, 1), ctx)?;
        check(chosen.cert_q_range.holds && chosen.cert_ln_phi.holds, "q/tau certificate failed")?;
    }
    // evaluate f once per point, comparing consecutive enclosures
    let mut prev = f_interval(ctx, a);
    for n in a..b {
        let next = f_interval(ctx, n + 1);
        if next.certified_le(&prev) != Some(true) {
            return Err(Error::ConstructionFailed(format!("f({}) <= f({n}) failed", n + 1)));
        }
        prev = next;
    }
    Ok(format!("checked [{a}, {b}]"))
}

fn suite_consistency(rng: &mut ChaCha8Rng, index: u32, ctx: &Ctx) -> Result<String> {
    let data = gen_knot_data(rng);
    check(easy_constant_consistency(&data)?, "constant consistency failed")?;
    check(qualitative_implication(&data)?, "qualitative implication failed")?;
    // the hard bound at Theta = |chi2| with the selected q never exceeds the
    // explicit closed form
    let big = KnotData {
        g2: 170 + index as u64,
        m2: 1 + index as u64 % 3,
        ..data
    };
    check(hard_le_explicit(&big, ctx)?, "hard bound exceeded the explicit form")?;
    Ok(format!(
        "g1={} g2={} m1={} m2={} q1={} Delta={}",
        data.g1, data.g2, data.m1, data.m2, data.q1, data.delta
    ))
}
