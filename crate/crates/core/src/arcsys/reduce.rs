//! Reduction of an arc system: collapse each parallelism class to one
//! representative, recording widths and, per surviving boundary edge, how
//! many dropped endpoints it absorbed (needed to recover lengths in the
//! unreduced graph).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::{
    trace_structure, ArcId, ArcModel, ArcModelSpec, RegionSpec, Step, UnionFind,
};

#[derive(Clone, Debug)]
pub struct Reduction {
    pub model: ArcModel,
    /// Parallelism-class size per reduced arc.
    pub widths: Vec<u32>,
    /// Dropped original vertices strictly inside each reduced boundary edge.
    pub inner: Vec<u32>,
    /// Reduced arc -> original representative arc id.
    pub arc_map: Vec<ArcId>,
    /// Original arc -> reduced arc index.
    pub class_of: Vec<u32>,
}

impl Reduction {
    pub fn total_original_arcs(&self) -> u64 {
        self.widths.iter().map(|&w| w as u64).sum()
    }
}

pub fn reduce_system(model0: &ArcModel) -> Result<Reduction> {
    let n0 = model0.n_arcs();
    // parallelism classes: transitive closure over rectangle regions
    let mut uf = UnionFind::new(n0);
    for (a, b) in model0.parallel_rectangle_pairs() {
        uf.union(a as usize, b as usize);
    }
    let mut class_members: BTreeMap<usize, Vec<ArcId>> = BTreeMap::new();
    for a in 0..n0 {
        class_members.entry(uf.find(a)).or_default().push(a as ArcId);
    }
    // representative = least id; reduced arcs ordered by representative
    let mut reps: Vec<(ArcId, Vec<ArcId>)> = class_members
        .into_values()
        .map(|members| (members[0], members))
        .collect();
    reps.sort_by_key(|(rep, _)| *rep);
    let mut class_of = vec![0u32; n0];
    let mut widths = Vec::with_capacity(reps.len());
    let mut arc_map = Vec::with_capacity(reps.len());
    let mut is_rep = vec![false; n0];
    for (i, (rep, members)) in reps.iter().enumerate() {
        arc_map.push(*rep);
        widths.push(members.len() as u32);
        is_rep[*rep as usize] = true;
        for &m in members {
            class_of[m as usize] = i as u32;
        }
    }

    // filter circles: keep vertices whose arc is a representative, renumber
    // kept vertices by old id order
    let spec0 = model0.spec();
    let keep_vertex = |v: u32| is_rep[model0.vertex_arc(v) as usize];
    let mut new_id = BTreeMap::new();
    for v in 0..(2 * n0) as u32 {
        if keep_vertex(v) {
            let id = new_id.len() as u32;
            new_id.insert(v, id);
        }
    }
    let mut new_circles: Vec<Vec<u32>> = Vec::new();
    let mut inner_per_bedge: Vec<u32> = Vec::new();
    let mut vanished_circles: Vec<usize> = Vec::new(); // original circle index
    for (c, circle) in spec0.circles.iter().enumerate() {
        let kept: Vec<usize> = (0..circle.len()).filter(|&i| keep_vertex(circle[i])).collect();
        if kept.is_empty() {
            vanished_circles.push(c);
            continue;
        }
        let k = circle.len();
        let mut verts = Vec::with_capacity(kept.len());
        for (j, &i) in kept.iter().enumerate() {
            verts.push(new_id[&circle[i]]);
            // dropped vertices strictly between this kept vertex and the next
            let next = kept[(j + 1) % kept.len()];
            let gap = if kept.len() == 1 {
                k - 1
            } else {
                (next + k - i - 1) % k
            };
            inner_per_bedge.push(gap as u32);
        }
        new_circles.push(verts);
    }
    let new_arcs: Vec<(u32, u32)> = arc_map
        .iter()
        .map(|&rep| {
            let (u, w) = spec0.arcs[rep as usize];
            (new_id[&u], new_id[&w])
        })
        .collect();

    // trace the reduced structure, then assemble region data by merging the
    // original regions across dropped arcs
    let traced = trace_structure(&new_circles, &new_arcs)?;
    let nr0 = model0.regions().len();
    let mut region_uf = UnionFind::new(nr0);
    let mut dropped_per_root: BTreeMap<usize, u32> = BTreeMap::new();
    for a in 0..n0 as u32 {
        if !is_rep[a as usize] {
            region_uf.union(
                model0.arc_side_region(a, 0) as usize,
                model0.arc_side_region(a, 1) as usize,
            );
        }
    }
    for a in 0..n0 as u32 {
        if !is_rep[a as usize] {
            let root = region_uf.find(model0.arc_side_region(a, 0) as usize);
            *dropped_per_root.entry(root).or_insert(0) += 1;
        }
    }
    // map each new circuit to its merged component via any arc step
    let mut circuits_of_root: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for (cid, circ) in traced.circuits.iter().enumerate() {
        let mut root: Option<usize> = None;
        for step in &circ.steps {
            if let Step::Arc { arc, forward } = step {
                let orig = arc_map[*arc as usize];
                let side = if *forward { 0 } else { 1 };
                let r = region_uf.find(model0.arc_side_region(orig, side) as usize);
                if let Some(prev) = root {
                    if prev != r {
                        return Err(Error::ConstructionFailed(
                            "reduced circuit spans two merged regions".into(),
                        ));
                    }
                } else {
                    root = Some(r);
                }
            }
        }
        circuits_of_root
            .entry(root.ok_or_else(|| {
                Error::ConstructionFailed("reduced circuit without arc steps".into())
            })?)
            .or_default()
            .push(cid as u32);
    }
    // vanished circles become free boundary circles of their component
    let mut vanished_per_root: BTreeMap<usize, u32> = BTreeMap::new();
    for &c in &vanished_circles {
        // any vertex of the circle names an adjacent region through its arc
        let v = spec0.circles[c][0];
        let a = model0.vertex_arc(v);
        let root = region_uf.find(model0.arc_side_region(a, 0) as usize);
        *vanished_per_root.entry(root).or_insert(0) += 1;
    }

    let mut region_specs = Vec::new();
    for (root, circuit_ids) in &circuits_of_root {
        let mut chi = 0i64;
        let mut free = 0u32;
        for r in 0..nr0 {
            if region_uf.find(r) == *root {
                chi += model0.regions()[r].chi();
                free += model0.regions()[r].free_circles;
            }
        }
        chi -= *dropped_per_root.get(root).unwrap_or(&0) as i64;
        free += *vanished_per_root.get(root).unwrap_or(&0);
        let b = circuit_ids.len() as i64;
        let two_g = 2 - chi - b - free as i64;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(Error::ConstructionFailed(format!(
                "merged region has invalid genus: chi = {chi}, frontier = {b}, free = {free}"
            )));
        }
        region_specs.push(RegionSpec {
            genus: (two_g / 2) as u32,
            free_boundary: free,
            circuits: Some(circuit_ids.clone()),
            frontier: None,
        });
    }

    let model = ArcModel::new(ArcModelSpec {
        circles: new_circles,
        arcs: new_arcs,
        regions: region_specs,
    })?;
    if model.genus() != model0.genus() || model.boundary_circles() != model0.boundary_circles() {
        return Err(Error::ConstructionFailed(
            "reduction changed the underlying surface".into(),
        ));
    }
    if !model.is_reduced() {
        return Err(Error::ConstructionFailed(
            "parallel arcs survived the reduction".into(),
        ));
    }
    let total: u64 = widths.iter().map(|&w| w as u64).sum();
    if total != n0 as u64 {
        return Err(Error::ConstructionFailed("widths do not sum to the arc count".into()));
    }
    Ok(Reduction { model, widths, inner: inner_per_bedge, arc_map, class_of })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Three parallel arcs across an annulus-with-genus: circles (0,1,2) and
    /// (3,4,5), arcs 0-5, 1-4, 2-3 (nested), rectangles between neighbors.
    fn three_parallel() -> ArcModel {
        // trace order is checked in the test; regions: two rectangles plus
        // one outer region carrying the genus
        let spec = ArcModelSpec {
            circles: vec![vec![0, 1, 2], vec![3, 4, 5]],
            arcs: vec![(0, 5), (1, 4), (2, 3)],
            regions: vec![],
        };
        // find the circuits first
        let traced = trace_structure(&spec.circles, &spec.arcs).unwrap();
        // rectangles: 4-step circuits with two distinct arcs; in the flat
        // annulus picture all three complement pieces look like rectangles,
        // so declare two of them disks and give the third the genus
        let mut rect = vec![];
        let mut rest = vec![];
        for (i, c) in traced.circuits.iter().enumerate() {
            if rect.len() < 2 && c.steps.len() == 4 && c.arc_steps() == 2 {
                rect.push(i as u32);
            } else {
                rest.push(i as u32);
            }
        }
        assert_eq!(rect.len(), 2, "expected two rectangles");
        let mut regions: Vec<RegionSpec> = rect
            .iter()
            .map(|&c| RegionSpec {
                genus: 0,
                free_boundary: 0,
                circuits: Some(vec![c]),
                frontier: None,
            })
            .collect();
        // remaining circuits form one region; choose its genus to make the
        // total genus integral
        regions.push(RegionSpec {
            genus: 1,
            free_boundary: 0,
            circuits: Some(rest),
            frontier: None,
        });
        ArcModel::new(ArcModelSpec { regions, ..spec }).unwrap()
    }

    #[test]
    fn reduce_three_parallel_family() {
        let m0 = three_parallel();
        assert!(!m0.is_reduced());
        let red = reduce_system(&m0).unwrap();
        assert_eq!(red.model.n_arcs(), 1);
        assert_eq!(red.widths, vec![3]);
        assert_eq!(red.total_original_arcs(), 3);
        // two dropped vertices absorbed per circle, split among the bedges
        let total_inner: u32 = red.inner.iter().sum();
        assert_eq!(total_inner, 4);
        assert!(red.model.is_reduced());
    }

    #[test]
    fn reduce_already_reduced_is_identity_shaped() {
        let m = crate::arcsys::tests::holed_torus_arc();
        let red = reduce_system(&m).unwrap();
        assert_eq!(red.model.n_arcs(), m.n_arcs());
        assert_eq!(red.widths, vec![1]);
        assert_eq!(red.inner, vec![0, 0]);
        assert_eq!(red.model.genus(), m.genus());
    }

    #[test]
    fn mixed_widths() {
        // 7 arcs in classes (3, 2, 1, 1) is exercised by the corpus; here a
        // small mixed case: two parallel plus one independent on a genus
        // surface assembled from two circles
        let spec = ArcModelSpec {
            circles: vec![vec![0, 1, 2], vec![3, 4, 5]],
            arcs: vec![(0, 5), (1, 4), (2, 3)],
            regions: vec![],
        };
        let traced = trace_structure(&spec.circles, &spec.arcs).unwrap();
        // make only ONE rectangle a disk region; group the others together
        let mut rect = None;
        let mut rest = vec![];
        for (i, c) in traced.circuits.iter().enumerate() {
            if rect.is_none() && c.steps.len() == 4 && c.arc_steps() == 2 {
                rect = Some(i as u32);
            } else {
                rest.push(i as u32);
            }
        }
        let regions = vec![
            RegionSpec { genus: 0, free_boundary: 0, circuits: Some(vec![rect.unwrap()]), frontier: None },
            RegionSpec { genus: 1, free_boundary: 0, circuits: Some(rest), frontier: None },
        ];
        let m0 = ArcModel::new(ArcModelSpec { regions, ..spec }).unwrap();
        // the two parallel arcs give a doubled edge in the dual graph
        let dual = m0.dual_graph();
        let doubled = dual
            .edges()
            .iter()
            .filter(|e| {
                dual.edges()
                    .iter()
                    .any(|f| f.id != e.id && f.ends == e.ends)
            })
            .count();
        assert!(doubled >= 2, "parallel arcs should double a dual edge");
        let red = reduce_system(&m0).unwrap();
        assert_eq!(red.model.n_arcs(), 2);
        let mut ws = red.widths.clone();
        ws.sort();
        assert_eq!(ws, vec![1, 2]);
    }
}
