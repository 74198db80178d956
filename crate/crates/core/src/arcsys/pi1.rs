//! Injectivity of subgraph inclusions, decided combinatorially.
//!
//! Cutting the surface along a subgraph splits it into components assembled
//! from the model regions; a component kills fundamental-group elements iff
//! it is a disk whose frontier word is non-trivial after free reduction.
//! The constructive extraction below instead works at the arc level: it
//! drops arcs bounding disk components while preserving the count
//! (#arcs - #disk components), and keeps at least a third of them.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::Subgraph;

use super::{freely_reduce, model_subgraph, ArcId, ArcModel, RegionId, UnionFind};

/// Components of the complement of an arc set: model regions merged across
/// the removed arcs.
#[derive(Clone, Debug)]
pub struct Components {
    pub comp_of_region: Vec<usize>,
    /// Per component root: (chi, member regions, removed arcs inside).
    pub info: BTreeMap<usize, CompInfo>,
}

#[derive(Clone, Debug, Default)]
pub struct CompInfo {
    pub chi: i64,
    pub regions: Vec<RegionId>,
    pub removed_arcs: Vec<ArcId>,
}

/// Merge model regions across every arc not in `kept`.
pub fn complement_components(model: &ArcModel, kept: &BTreeSet<ArcId>) -> Components {
    let nr = model.regions().len();
    let mut uf = UnionFind::new(nr);
    let mut removed = Vec::new();
    for a in 0..model.n_arcs() as ArcId {
        if !kept.contains(&a) {
            removed.push(a);
            uf.union(
                model.arc_side_region(a, 0) as usize,
                model.arc_side_region(a, 1) as usize,
            );
        }
    }
    let comp_of_region: Vec<usize> = (0..nr).map(|r| uf.find(r)).collect();
    let mut info: BTreeMap<usize, CompInfo> = BTreeMap::new();
    for (r, &root) in comp_of_region.iter().enumerate() {
        let e = info.entry(root).or_default();
        e.chi += model.regions()[r].chi();
        e.regions.push(r as RegionId);
    }
    for &a in &removed {
        let root = comp_of_region[model.arc_side_region(a, 0) as usize];
        let e = info.get_mut(&root).expect("root present");
        e.chi -= 1; // gluing a band along two interval sides
        e.removed_arcs.push(a);
    }
    Components { comp_of_region, info }
}

/// Decide whether the inclusion of a subgraph of the model graph into the
/// surface is injective on fundamental groups.
///
/// A complement component that touches the surface boundary (a removed
/// boundary edge, or a free boundary circle) is glued to the subgraph along
/// boundary intervals only; such a gluing is a free-product extension and
/// never kills anything. An interior component is glued along whole frontier
/// circles; it kills a loop exactly when it is a disk whose frontier word
/// does not freely reduce to the empty word.
pub fn pi1_oracle(model: &ArcModel, sub: &Subgraph<'_>) -> bool {
    let kept: BTreeSet<ArcId> = (0..model.n_arcs() as ArcId)
        .filter(|&a| sub.contains_edge(model.arc_edge(a)))
        .collect();
    let comps = complement_components(model, &kept);

    // components with surface-boundary contact
    let mut touches_boundary: BTreeSet<usize> = BTreeSet::new();
    for (r, region) in model.regions().iter().enumerate() {
        if region.free_circles > 0 {
            touches_boundary.insert(comps.comp_of_region[r]);
        }
    }
    for b in 0..model.n_bedges() {
        if !sub.contains_edge(model.bedge_edge(b)) {
            touches_boundary.insert(comps.comp_of_region[model.bedge_region(b) as usize]);
        }
    }

    // trace the ribbon faces of the subgraph; a face with a positive
    // boundary-edge dart runs along the surface boundary and only borders
    // boundary-touching components, so only pure faces matter here
    let faces = model.trace_subgraph_faces(sub);
    let mut faces_of_comp: BTreeMap<usize, Vec<Vec<u32>>> = BTreeMap::new();
    for face in faces {
        if face.iter().any(|&d| !model.is_arc_edge(d / 2) && d % 2 == 0) {
            continue;
        }
        let mut comp: Option<usize> = None;
        for &d in &face {
            let e = (d / 2) as usize;
            let region = if model.is_arc_edge(d / 2) {
                model.arc_side_region(e as ArcId, (d % 2) as usize)
            } else {
                model.bedge_region(e - model.n_arcs())
            };
            let root = comps.comp_of_region[region as usize];
            debug_assert!(
                comp.is_none_or(|c| c == root),
                "interior face spans two components"
            );
            comp = Some(root);
        }
        if let Some(root) = comp {
            faces_of_comp.entry(root).or_default().push(face);
        }
    }

    for (root, info) in &comps.info {
        if info.chi != 1 || touches_boundary.contains(root) {
            continue;
        }
        let Some(faces) = faces_of_comp.get(root) else {
            continue;
        };
        for face in faces {
            let word = model.face_word(face);
            if !freely_reduce(&word).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Constructive extraction: drop arcs on disk components until none remain.
/// Keeps every vertex and boundary edge of the seed, and at least a third of
/// its interior edges.
pub fn pi1_subgraph<'g>(model: &'g ArcModel, seed: &Subgraph<'g>) -> Result<Subgraph<'g>> {
    if model.is_annulus() {
        return Err(Error::HypothesisViolated("surface is an annulus".into()));
    }
    if !model.is_reduced() {
        return Err(Error::HypothesisViolated("arc system is not reduced".into()));
    }
    let mut kept: BTreeSet<ArcId> = (0..model.n_arcs() as ArcId)
        .filter(|&a| seed.contains_edge(model.arc_edge(a)))
        .collect();
    let nu = kept.len();

    let disk_count = |kept: &BTreeSet<ArcId>| -> usize {
        complement_components(model, kept)
            .info
            .values()
            .filter(|i| i.chi == 1)
            .count()
    };
    let mu0 = disk_count(&kept);
    if nu > 0 && 3 * mu0 > 2 * nu {
        return Err(Error::ConstructionFailed(format!(
            "disk count {mu0} exceeds 2/3 of {nu} arcs"
        )));
    }
    let invariant = nu as i64 - mu0 as i64;

    loop {
        let comps = complement_components(model, &kept);
        // least kept arc adjacent to a disk component
        let mut drop: Option<ArcId> = None;
        for &a in &kept {
            for side in 0..2 {
                let root = comps.comp_of_region[model.arc_side_region(a, side) as usize];
                if comps.info[&root].chi == 1 {
                    drop = Some(a);
                    break;
                }
            }
            if drop.is_some() {
                break;
            }
        }
        let Some(a) = drop else { break };
        kept.remove(&a);
        let mu_now = disk_count(&kept);
        if kept.len() as i64 - mu_now as i64 != invariant {
            return Err(Error::ConstructionFailed(
                "arc drop did not preserve #arcs - #disks".into(),
            ));
        }
    }

    if 3 * kept.len() < nu {
        return Err(Error::ConstructionFailed(format!(
            "kept {} arcs, below a third of {nu}",
            kept.len()
        )));
    }

    // output keeps all vertices and boundary edges of the seed
    let bedges: Vec<u32> = (0..model.n_bedges())
        .filter(|&b| seed.contains_edge(model.bedge_edge(b)))
        .map(|b| b as u32)
        .collect();
    let out = model_subgraph(
        model,
        kept.iter().copied(),
        bedges,
        seed.vertex_set().iter().copied(),
    )?;
    debug_assert!(pi1_oracle(model, &out), "extracted subgraph fails the oracle");
    Ok(out)
}
