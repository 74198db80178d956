//! The simplicial tree whose vertices are homothety classes of rank-2
//! lattices over a discretely valued field, the 2x2 matrix action on it,
//! translation lengths, and a displacement-descent oracle.

use crate::error::{Error, Result};
use crate::field::{PAdic, Val, ValuedField};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<E> {
    /// Row-major entries [[a, b], [c, d]].
    pub e: [[E; 2]; 2],
}

impl<E: Clone + PartialEq + std::fmt::Debug> Mat2<E> {
    pub fn new(a: E, b: E, c: E, d: E) -> Self {
        Mat2 { e: [[a, b], [c, d]] }
    }

    pub fn identity<F: ValuedField<Elem = E>>(f: &F) -> Self {
        Mat2::new(f.one(), f.zero(), f.zero(), f.one())
    }

    pub fn det<F: ValuedField<Elem = E>>(&self, f: &F) -> E {
        f.sub(
            &f.mul(&self.e[0][0], &self.e[1][1]),
            &f.mul(&self.e[0][1], &self.e[1][0]),
        )
    }

    pub fn trace<F: ValuedField<Elem = E>>(&self, f: &F) -> E {
        f.add(&self.e[0][0], &self.e[1][1])
    }

    pub fn mul<F: ValuedField<Elem = E>>(&self, f: &F, o: &Mat2<E>) -> Mat2<E> {
        let p = |i: usize, j: usize| {
            f.add(
                &f.mul(&self.e[i][0], &o.e[0][j]),
                &f.mul(&self.e[i][1], &o.e[1][j]),
            )
        };
        Mat2 { e: [[p(0, 0), p(0, 1)], [p(1, 0), p(1, 1)]] }
    }

    pub fn inverse<F: ValuedField<Elem = E>>(&self, f: &F) -> Result<Mat2<E>> {
        let det = self.det(f);
        if f.is_zero(&det) {
            return Err(Error::SingularMatrix);
        }
        let inv_det = f.inv(&det)?;
        Ok(Mat2::new(
            f.mul(&self.e[1][1], &inv_det),
            f.mul(&f.neg(&self.e[0][1]), &inv_det),
            f.mul(&f.neg(&self.e[1][0]), &inv_det),
            f.mul(&self.e[0][0], &inv_det),
        ))
    }

    pub fn scale<F: ValuedField<Elem = E>>(&self, f: &F, s: &E) -> Mat2<E> {
        Mat2 {
            e: [
                [f.mul(&self.e[0][0], s), f.mul(&self.e[0][1], s)],
                [f.mul(&self.e[1][0], s), f.mul(&self.e[1][1], s)],
            ],
        }
    }

    pub fn is_sl2<F: ValuedField<Elem = E>>(&self, f: &F) -> bool {
        self.det(f) == f.one()
    }

    /// Minimum valuation over the four entries.
    pub fn min_valuation<F: ValuedField<Elem = E>>(&self, f: &F) -> Val {
        let mut m = Val::Infinity;
        for row in &self.e {
            for x in row {
                m = m.min(f.valuation(x));
            }
        }
        m
    }
}

/// A vertex of the tree: the homothety class of a lattice, held as the
/// unique normal-form basis [[pi^a, r], [0, pi^c]] with r reduced mod pi^a
/// and min entry valuation 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeVertex<E> {
    pub basis: Mat2<E>,
}

/// Canonical representative of the homothety class of the column span of `m`.
pub fn vertex_normalize<F: ValuedField>(f: &F, m: &Mat2<F::Elem>) -> Result<LatticeVertex<F::Elem>> {
    if f.is_zero(&m.det(f)) {
        return Err(Error::SingularMatrix);
    }
    let mut a = m.e[0][0].clone();
    let mut b = m.e[0][1].clone();
    let mut c = m.e[1][0].clone();
    let mut d = m.e[1][1].clone();
    // kill the lower-left entry by column operations over the valuation ring
    if !f.is_zero(&c) {
        let swap = if f.is_zero(&d) {
            true
        } else {
            // ensure v(c) >= v(d) so that c/d is integral
            match (f.valuation(&c), f.valuation(&d)) {
                (Val::Finite(vc), Val::Finite(vd)) => vc < vd,
                _ => unreachable!("both nonzero"),
            }
        };
        if swap {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut c, &mut d);
        }
        if !f.is_zero(&c) {
            let q = f.div(&c, &d)?;
            a = f.sub(&a, &f.mul(&q, &b));
            c = f.sub(&c, &f.mul(&q, &d)); // exactly zero
            debug_assert!(f.is_zero(&c));
        }
    }
    // now upper triangular: [[a, b], [0, d]]; scale columns by units so the
    // diagonal becomes exact powers of the uniformizer
    let va = f.valuation(&a).finite().expect("nonsingular");
    let vd = f.valuation(&d).finite().expect("nonsingular");
    let unit_a = f.div(&a, &f.uniformizer_pow(va))?;
    a = f.uniformizer_pow(va);
    let _ = unit_a; // column 1 scaling does not touch b
    let unit_d = f.div(&d, &f.uniformizer_pow(vd))?;
    b = f.div(&b, &unit_d)?;
    d = f.uniformizer_pow(vd);
    // reduce b modulo pi^va (column operation with column 1)
    b = f.reduce_mod(&b, va);
    // homothety: subtract the minimum valuation
    let vb = f.valuation(&b);
    let s = Val::Finite(va.min(vd)).min(vb).finite().unwrap();
    let shift = f.uniformizer_pow(-s);
    let a = f.mul(&a, &shift);
    let b = f.mul(&b, &shift);
    let d = f.mul(&d, &shift);
    Ok(LatticeVertex { basis: Mat2::new(a, b, f.zero(), d) })
}

/// Base vertex: class of the standard lattice.
pub fn base_vertex<F: ValuedField>(f: &F) -> LatticeVertex<F::Elem> {
    vertex_normalize(f, &Mat2::identity(f)).expect("identity is nonsingular")
}

/// Distance between two vertices: difference of the two elementary-divisor
/// valuations of the change-of-basis matrix.
pub fn tree_distance<F: ValuedField>(
    f: &F,
    x: &LatticeVertex<F::Elem>,
    y: &LatticeVertex<F::Elem>,
) -> Result<u64> {
    let n = x.basis.inverse(f)?.mul(f, &y.basis);
    distance_from_matrix(f, &n)
}

fn distance_from_matrix<F: ValuedField>(f: &F, n: &Mat2<F::Elem>) -> Result<u64> {
    let vdet = f
        .valuation(&n.det(f))
        .finite()
        .ok_or(Error::SingularMatrix)?;
    let vmin = n.min_valuation(f).finite().expect("nonzero matrix");
    let d = vdet - 2 * vmin;
    debug_assert!(d >= 0, "elementary divisor order");
    Ok(d as u64)
}

/// Image vertex under the matrix action.
pub fn apply<F: ValuedField>(
    f: &F,
    m: &Mat2<F::Elem>,
    v: &LatticeVertex<F::Elem>,
) -> Result<LatticeVertex<F::Elem>> {
    vertex_normalize(f, &m.mul(f, &v.basis))
}

/// Displacement d(v, A v).
pub fn displacement<F: ValuedField>(
    f: &F,
    m: &Mat2<F::Elem>,
    v: &LatticeVertex<F::Elem>,
) -> Result<u64> {
    let n = v.basis.inverse(f)?.mul(f, m).mul(f, &v.basis);
    distance_from_matrix(f, &n)
}

/// Translation length of an SL2 element: 2 max(0, -v(trace)).
pub fn translation_length<F: ValuedField>(f: &F, m: &Mat2<F::Elem>) -> Result<u64> {
    if !m.is_sl2(f) {
        return Err(Error::NotSl2);
    }
    Ok(match f.valuation(&m.trace(f)) {
        Val::Infinity => 0,
        Val::Finite(v) => 2 * (-v).max(0) as u64,
    })
}

/// The p+1 neighbors of a vertex, in a fixed deterministic order.
fn neighbors(f: &PAdic, v: &LatticeVertex<<PAdic as ValuedField>::Elem>) -> Vec<LatticeVertex<<PAdic as ValuedField>::Elem>> {
    let mut out = Vec::with_capacity(f.p as usize + 1);
    for r in 0..f.p {
        let s = Mat2::new(
            f.one(),
            f.zero(),
            f.from_int(r as i64),
            f.uniformizer_pow(1),
        );
        out.push(vertex_normalize(f, &v.basis.mul(f, &s)).expect("index-p sublattice"));
    }
    let s = Mat2::new(f.uniformizer_pow(1), f.zero(), f.zero(), f.one());
    out.push(vertex_normalize(f, &v.basis.mul(f, &s)).expect("index-p sublattice"));
    out
}

/// Independent certificate for the translation length over the p-adics.
///
/// The displacement function of an isometry of a tree is convex along
/// geodesics and its minimum set is connected, so steepest descent from any
/// vertex reaches the global minimum, and a vertex none of whose neighbors
/// improves the displacement realizes it. Returns (min displacement, witness).
pub fn translation_length_oracle(
    f: &PAdic,
    m: &Mat2<<PAdic as ValuedField>::Elem>,
) -> Result<(u64, LatticeVertex<<PAdic as ValuedField>::Elem>)> {
    if !m.is_sl2(f) {
        return Err(Error::NotSl2);
    }
    // seeds: the base vertex, plus the lattice spanned by (1,0),(0,1/trace)
    // when the trace has negative valuation
    let mut seeds = vec![base_vertex(f)];
    if let Val::Finite(v) = f.valuation(&m.trace(f)) {
        if v < 0 {
            let tr_inv = f.inv(&m.trace(f))?;
            let cand = Mat2::new(f.one(), f.zero(), f.zero(), tr_inv);
            seeds.push(vertex_normalize(f, &cand)?);
        }
    }
    let mut best: Option<(u64, LatticeVertex<_>)> = None;
    for seed in seeds {
        let d = displacement(f, m, &seed)?;
        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
            best = Some((d, seed));
        }
    }
    let (mut cur_d, mut cur) = best.unwrap();
    loop {
        if cur_d == 0 {
            break;
        }
        let mut improved = false;
        for n in neighbors(f, &cur) {
            let d = displacement(f, m, &n)?;
            if d < cur_d {
                cur = n;
                cur_d = d;
                improved = true;
                break;
            }
        }
        if !improved {
            break; // local minimum certifies the global minimum
        }
    }
    Ok((cur_d, cur))
}

/// Commutator test for arc stabilizers: X, Y integral with lower-left entry
/// of valuation >= t; then v(trace(\[X,Y\]) - 2) >= t. Returns the verdict and
/// the measured valuation.
pub fn arc_commutator_check<F: ValuedField>(
    f: &F,
    t: i64,
    x: &Mat2<F::Elem>,
    y: &Mat2<F::Elem>,
) -> Result<(bool, Val)> {
    if t < 1 {
        return Err(Error::HypothesisViolated("t must be positive".into()));
    }
    for (name, m) in [("X", x), ("Y", y)] {
        if !m.is_sl2(f) {
            return Err(Error::NotSl2);
        }
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            if !f.valuation(&m.e[i][j]).ge(0) {
                return Err(Error::NotInStabilizer(format!("{name}[{i}][{j}] not integral")));
            }
        }
        if !f.valuation(&m.e[1][0]).ge(t) {
            return Err(Error::NotInStabilizer(format!(
                "{name} lower-left valuation below t = {t}"
            )));
        }
    }
    let a = x.mul(f, y).mul(f, &x.inverse(f)?).mul(f, &y.inverse(f)?);
    let tr_minus_2 = f.sub(&a.trace(f), &f.from_int(2));
    let measured = f.valuation(&tr_minus_2);
    Ok((measured.ge(t), measured))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use std::str::FromStr;

    fn rat(s: &str) -> BigRational {
        BigRational::from_str(s).unwrap()
    }

    fn m2(f: &PAdic, a: &str, b: &str, c: &str, d: &str) -> Mat2<BigRational> {
        let _ = f;
        Mat2::new(rat(a), rat(b), rat(c), rat(d))
    }

    #[test]
    fn normalize_identity_and_homothety() {
        let f = PAdic::new(3);
        let s0 = base_vertex(&f);
        let scaled = m2(&f, "3", "0", "0", "3");
        assert_eq!(vertex_normalize(&f, &scaled).unwrap(), s0);
        let scaled = m2(&f, "1/9", "0", "0", "1/9");
        assert_eq!(vertex_normalize(&f, &scaled).unwrap(), s0);
    }

    #[test]
    fn distance_diag_pi_cubed() {
        let f = PAdic::new(3);
        let s0 = base_vertex(&f);
        let v = vertex_normalize(&f, &m2(&f, "1", "0", "0", "27")).unwrap();
        assert_eq!(tree_distance(&f, &s0, &v).unwrap(), 3);
        assert_eq!(tree_distance(&f, &v, &s0).unwrap(), 3);
        assert_eq!(tree_distance(&f, &s0, &s0).unwrap(), 0);
    }

    #[test]
    fn normalize_invariance_under_unimodular_column_ops() {
        let f = PAdic::new(3);
        let m = m2(&f, "2", "1/3", "9", "5");
        let v = vertex_normalize(&f, &m).unwrap();
        // right multiplication by integral elementary matrices
        let u1 = m2(&f, "1", "7", "0", "1");
        let u2 = m2(&f, "1", "0", "6", "1");
        let u3 = m2(&f, "2", "0", "0", "1"); // 2 is a 3-adic unit
        for u in [u1, u2, u3] {
            let mu = m.mul(&f, &u);
            assert_eq!(vertex_normalize(&f, &mu).unwrap(), v);
        }
        // homothety
        let mv = m.scale(&f, &rat("1/3"));
        assert_eq!(vertex_normalize(&f, &mv).unwrap(), v);
    }

    #[test]
    fn action_is_isometric() {
        let f = PAdic::new(5);
        let a = m2(&f, "1", "2", "0", "1").mul(&f, &m2(&f, "5", "0", "0", "1/5"));
        let v1 = vertex_normalize(&f, &m2(&f, "1", "0", "0", "25")).unwrap();
        let v2 = vertex_normalize(&f, &m2(&f, "1", "2", "0", "5")).unwrap();
        let d_before = tree_distance(&f, &v1, &v2).unwrap();
        let w1 = apply(&f, &a, &v1).unwrap();
        let w2 = apply(&f, &a, &v2).unwrap();
        assert_eq!(tree_distance(&f, &w1, &w2).unwrap(), d_before);
    }

    #[test]
    fn translation_lengths() {
        let f = PAdic::new(3);
        // integral SL2 fixes the base vertex
        let a = m2(&f, "1", "2", "3", "7"); // det 1, integral
        assert_eq!(a.det(&f), rat("1"));
        assert_eq!(translation_length(&f, &a).unwrap(), 0);
        assert_eq!(displacement(&f, &a, &base_vertex(&f)).unwrap(), 0);

        // [[0, -1], [1, pi^-2]]
        let b = m2(&f, "0", "-1", "1", "1/9");
        assert_eq!(translation_length(&f, &b).unwrap(), 4);
        let (oracle, _) = translation_length_oracle(&f, &b).unwrap();
        assert_eq!(oracle, 4);

        // diag(p, 1/p): v(tr) = -1
        let c = m2(&f, "3", "0", "0", "1/3");
        assert_eq!(translation_length(&f, &c).unwrap(), 2);
        let (oracle, _) = translation_length_oracle(&f, &c).unwrap();
        assert_eq!(oracle, 2);
    }

    #[test]
    fn fixed_vertex_maps_lattice_to_itself() {
        let f = PAdic::new(3);
        let a = m2(&f, "2", "3", "1", "2"); // det 1, integral
        assert!(a.is_sl2(&f));
        let s0 = base_vertex(&f);
        assert_eq!(displacement(&f, &a, &s0).unwrap(), 0);
        // conjugated matrix is integral
        let n = s0.basis.inverse(&f).unwrap().mul(&f, &a).mul(&f, &s0.basis);
        assert!(n.min_valuation(&f).ge(0));
    }

    #[test]
    fn bipartite_parity_small_ball() {
        let f = PAdic::new(2);
        let mats = [
            m2(&f, "1", "1", "0", "1"),
            m2(&f, "0", "-1", "1", "1/2"),
            m2(&f, "2", "0", "0", "1/2"),
            m2(&f, "1", "0", "3", "1"),
        ];
        // vertices within distance 2 of the base vertex
        let mut ball = vec![base_vertex(&f)];
        let mut frontier = ball.clone();
        for _ in 0..2 {
            let mut next = vec![];
            for v in &frontier {
                for n in neighbors(&f, v) {
                    if !ball.contains(&n) {
                        ball.push(n.clone());
                        next.push(n);
                    }
                }
            }
            frontier = next;
        }
        for a in &mats {
            assert!(a.is_sl2(&f));
            for v in &ball {
                let d = displacement(&f, a, v).unwrap();
                assert_eq!(d % 2, 0, "odd displacement");
            }
        }
    }

    #[test]
    fn commutator_check_cases() {
        let f = PAdic::new(3);
        let x = m2(&f, "1", "2", "9", "19"); // det 1, c = 9: v = 2
        assert_eq!(x.det(&f), rat("1"));
        let (holds, v) = arc_commutator_check(&f, 2, &x, &x).unwrap();
        assert!(holds);
        assert_eq!(v, Val::Infinity); // [X, X] = identity

        let y = m2(&f, "4", "1", "27", "7");
        assert_eq!(y.det(&f), rat("1"));
        let (holds, v) = arc_commutator_check(&f, 2, &x, &y).unwrap();
        assert!(holds, "measured valuation {v}");

        // lower-left valuation t-1: rejected
        let bad = m2(&f, "1", "0", "3", "1");
        assert!(matches!(
            arc_commutator_check(&f, 2, &bad, &y),
            Err(Error::NotInStabilizer(_))
        ));
    }

    #[test]
    fn function_field_pole_translation_identity() {
        use crate::field::{FunctionField, Poly, RatFun};
        let f = FunctionField;
        // A = [[0, -1], [1, 1/t]]: trace has a pole of order 1 at zero
        let a = Mat2::new(
            f.zero(),
            f.from_int(-1),
            f.one(),
            RatFun::new(Poly::constant(rat("1")), Poly::monomial(1)).unwrap(),
        );
        assert!(a.is_sl2(&f));
        let lam = translation_length(&f, &a).unwrap();
        // Pi(trace) = max(0, -v) = 1; 2 Pi = lambda
        let pole_order = match f.valuation(&a.trace(&f)) {
            Val::Finite(v) => (-v).max(0) as u64,
            Val::Infinity => 0,
        };
        assert_eq!(lam, 2 * pole_order);
        assert_eq!(lam, 2);
    }
}
