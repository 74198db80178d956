//! Property tests for the structural invariants: Euler-characteristic
//! bookkeeping, neighborhood monotonicity, the subgraph chi inequality,
//! normal-form canonicity, and the norm axioms.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use slopebound_core::field::{PAdic, ValuedField};
use slopebound_core::graph::{ball, neighborhood, Multigraph, Subgraph};
use slopebound_core::norms::{delta, numerical_slope, HomologyClass, ParallelogramNorm, Slope};
use slopebound_core::tree::{vertex_normalize, Mat2};

fn arb_graph() -> impl Strategy<Value = Multigraph> {
    (2u32..9, proptest::collection::vec((0u32..8, 0u32..8), 1..16)).prop_map(|(v, pairs)| {
        let verts: Vec<u32> = (0..v).collect();
        let edges: Vec<(u32, Vec<u32>)> = pairs
            .into_iter()
            .enumerate()
            .map(|(i, (a, b))| (i as u32, vec![a % v, b % v]))
            .collect();
        Multigraph::build(&verts, &edges).expect("endpoints reduced mod v")
    })
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn chi_adds_over_components(g in arb_graph()) {
        let comps = g.full().components();
        let total: i64 = comps.iter().map(|c| c.euler_char()).sum();
        prop_assert_eq!(total, g.euler_char());
        // per-component Betti number is 1 - chi
        let (_, betti) = g.components_and_betti();
        for (c, b) in comps.iter().zip(betti) {
            prop_assert_eq!(b, 1 - c.euler_char());
        }
    }

    #[test]
    fn neighborhoods_are_monotone(g in arb_graph(), v in 0u32..9, r in 0usize..4) {
        let v = v % g.num_vertices() as u32;
        let smaller = ball(&g, v, r);
        let larger = ball(&g, v, r + 1);
        prop_assert!(smaller.is_subset_of(&larger));
        let seed = Subgraph::single_vertex(&g, v).unwrap();
        prop_assert_eq!(neighborhood(&g, &seed, 0), seed);
    }

    #[test]
    fn subgraph_chi_dominates(g in arb_graph(), keep_v in proptest::collection::vec(any::<bool>(), 9), keep_e in proptest::collection::vec(any::<bool>(), 16)) {
        prop_assume!(!g.has_simply_connected_component());
        // random closed subgraph: keep chosen vertices, then edges whose
        // endpoints survive
        let vs: BTreeSet<u32> = g
            .vertices()
            .iter()
            .copied()
            .filter(|&v| keep_v.get(v as usize).copied().unwrap_or(false))
            .collect();
        let es: BTreeSet<u32> = g
            .edges()
            .iter()
            .filter(|e| {
                keep_e.get(e.id as usize).copied().unwrap_or(false)
                    && e.ends.iter().all(|x| vs.contains(x))
            })
            .map(|e| e.id)
            .collect();
        let sub = Subgraph::new(&g, vs, es).unwrap();
        prop_assert!(sub.euler_char() >= g.euler_char());
    }

    #[test]
    fn normal_form_is_class_invariant(
        a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20,
        r in -6i64..6, scale_pow in -2i64..3,
    ) {
        let f = PAdic::new(3);
        let m = Mat2::new(rat(a, 1), rat(b, 1), rat(c, 1), rat(d, 1));
        prop_assume!(!f.is_zero(&m.det(&f)));
        let v = vertex_normalize(&f, &m).unwrap();
        // right multiplication by an integral elementary matrix
        let u = Mat2::new(rat(1, 1), rat(r, 1), rat(0, 1), rat(1, 1));
        let mu = m.mul(&f, &u);
        prop_assert_eq!(vertex_normalize(&f, &mu).unwrap(), v.clone());
        let u2 = Mat2::new(rat(1, 1), rat(0, 1), rat(r, 1), rat(1, 1));
        prop_assert_eq!(vertex_normalize(&f, &m.mul(&f, &u2)).unwrap(), v.clone());
        // homothety
        let s = f.uniformizer_pow(scale_pow);
        prop_assert_eq!(vertex_normalize(&f, &m.scale(&f, &s)).unwrap(), v);
    }

    #[test]
    fn tree_distance_is_a_metric(
        mats in proptest::collection::vec((-9i64..10, -9i64..10, -9i64..10, -9i64..10, 0u32..4), 3..4),
    ) {
        let f = PAdic::new(3);
        let mut vertices = vec![];
        for (a, b, c, d, k) in mats {
            let pk = f.uniformizer_pow(k as i64);
            let m = Mat2::new(rat(a, 1), &rat(b, 1) * &pk, rat(c, 1), &rat(d, 1) * &pk);
            if !f.is_zero(&m.det(&f)) {
                vertices.push(vertex_normalize(&f, &m).unwrap());
            }
        }
        prop_assume!(vertices.len() == 3);
        use slopebound_core::tree::tree_distance;
        let d01 = tree_distance(&f, &vertices[0], &vertices[1]).unwrap();
        let d10 = tree_distance(&f, &vertices[1], &vertices[0]).unwrap();
        prop_assert_eq!(d01, d10);
        let d12 = tree_distance(&f, &vertices[1], &vertices[2]).unwrap();
        let d02 = tree_distance(&f, &vertices[0], &vertices[2]).unwrap();
        prop_assert!(d02 <= d01 + d12);
        prop_assert_eq!(tree_distance(&f, &vertices[0], &vertices[0]).unwrap(), 0);
    }

    #[test]
    fn parallelogram_gauge_is_a_norm(
        x1 in -5i64..6, y1 in -5i64..6, x2 in -5i64..6, y2 in -5i64..6,
        ux in -9i64..10, uy in -9i64..10, vx in -9i64..10, vy in -9i64..10,
        s in 1i64..5,
    ) {
        prop_assume!(x1 * y2 - y1 * x2 != 0);
        let b = ParallelogramNorm::new((rat(x1, 1), rat(y1, 1)), (rat(x2, 1), rat(y2, 1))).unwrap();
        let u = (rat(ux, 3), rat(uy, 3));
        let v = (rat(vx, 3), rat(vy, 3));
        // homogeneity
        let su = (&u.0 * rat(s, 1), &u.1 * rat(s, 1));
        prop_assert_eq!(b.eval(&su), rat(s, 1) * b.eval(&u));
        // symmetry
        let nu = (-u.0.clone(), -u.1.clone());
        prop_assert_eq!(b.eval(&nu), b.eval(&u));
        // triangle inequality
        let sum = (&u.0 + &v.0, &u.1 + &v.1);
        prop_assert!(b.eval(&sum) <= b.eval(&u) + b.eval(&v));
        // vertices lie on the unit sphere
        prop_assert_eq!(b.eval(&b.v1), rat(1, 1));
    }

    #[test]
    fn delta_is_symmetric_and_framing_free(
        p1 in -9i64..10, q1 in -9i64..10, p2 in -9i64..10, q2 in -9i64..10,
    ) {
        let a = HomologyClass(p1, q1);
        let b = HomologyClass(p2, q2);
        prop_assume!(a.is_primitive() && b.is_primitive());
        let (sa, sb) = (Slope::new(a).unwrap(), Slope::new(b).unwrap());
        prop_assert_eq!(delta(sa, sb), delta(sb, sa));
        prop_assert_eq!(delta(sa, sb) == 0, sa == sb);
        // denominator of the numerical slope is framing-independent
        let den_std = delta(sa, Slope::new(HomologyClass(1, 0)).unwrap());
        for lam in [HomologyClass(0, 1), HomologyClass(1, 1), HomologyClass(-2, 1)] {
            let mu = HomologyClass(1, 0);
            if let Ok(Some(v)) = numerical_slope(a, mu, lam) {
                prop_assert_eq!(v.denom().clone(), BigInt::from(den_std));
            }
        }
    }
}
