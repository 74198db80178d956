//! Slope arithmetic on the boundary torus and the exact plane geometry used
//! by the slope-denominator inequality chain: balanced parallelogram norms,
//! lattice-point search, and the q^2/Delta chain verifier.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::report::BoundReport;

/// A class in the rank-2 integer homology of the boundary torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomologyClass(pub i64, pub i64);

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.0 == 0 && self.1 == 0
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_zero() && self.0.gcd(&self.1) == 1
    }
}

/// Homological intersection number, as i128 to dodge overflow.
pub fn omega(a: HomologyClass, b: HomologyClass) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

/// A slope: a primitive class modulo sign, stored with the first nonzero
/// coordinate positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope(HomologyClass);

impl Slope {
    pub fn new(a: HomologyClass) -> Result<Self> {
        if !a.is_primitive() {
            return Err(Error::BadInput(format!("({}, {}) is not primitive", a.0, a.1)));
        }
        let flip = a.0 < 0 || (a.0 == 0 && a.1 < 0);
        Ok(Slope(if flip { HomologyClass(-a.0, -a.1) } else { a }))
    }

    pub fn class(&self) -> HomologyClass {
        self.0
    }
}

/// Geometric intersection number of two slopes.
pub fn delta(s1: Slope, s2: Slope) -> u64 {
    omega(s1.0, s2.0).unsigned_abs() as u64
}

/// Numerical slope of a class with respect to a framing (mu, lambda):
/// omega(alpha, lambda) / omega(alpha, mu), infinity when the denominator
/// vanishes.
pub fn numerical_slope(
    alpha: HomologyClass,
    mu: HomologyClass,
    lambda: HomologyClass,
) -> Result<Option<BigRational>> {
    if omega(mu, lambda).abs() != 1 {
        return Err(Error::DegenerateFraming);
    }
    if alpha.is_zero() {
        return Err(Error::BadInput("zero class has no slope".into()));
    }
    let num = omega(alpha, lambda);
    let den = omega(alpha, mu);
    if den == 0 {
        Ok(None)
    } else {
        Ok(Some(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }
}

pub type Vec2 = (BigRational, BigRational);

fn cross(u: &Vec2, v: &Vec2) -> BigRational {
    &u.0 * &v.1 - &u.1 * &v.0
}

/// The norm whose unit ball is the convex hull of +-v1, +-v2.
#[derive(Clone, Debug)]
pub struct ParallelogramNorm {
    pub v1: Vec2,
    pub v2: Vec2,
}

impl ParallelogramNorm {
    pub fn new(v1: Vec2, v2: Vec2) -> Result<Self> {
        if cross(&v1, &v2).is_zero() {
            return Err(Error::DegenerateNorm("v1, v2 linearly dependent".into()));
        }
        Ok(ParallelogramNorm { v1, v2 })
    }

    /// Solve v = a v1 + b v2.
    pub fn coordinates(&self, v: &Vec2) -> (BigRational, BigRational) {
        let det = cross(&self.v1, &self.v2);
        let a = cross(v, &self.v2) / &det;
        let b = cross(&self.v1, v) / &det;
        (a, b)
    }

    /// Gauge of the hull of +-v1, +-v2: |a| + |b| in (v1, v2)-coordinates.
    pub fn eval(&self, v: &Vec2) -> BigRational {
        let (a, b) = self.coordinates(v);
        a.abs() + b.abs()
    }

    /// Twice the absolute cross product: the area of the unit ball.
    pub fn area(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(2)) * cross(&self.v1, &self.v2).abs()
    }

    /// Exhaustive search for a nonzero lattice point with gauge < 1, least
    /// (x, y) lexicographically.
    pub fn interior_lattice_point(&self) -> Option<(i64, i64)> {
        let bound = |c1: &BigRational, c2: &BigRational| -> i64 {
            let m = c1.abs() + c2.abs();
            (m.numer() / m.denom()).try_into().unwrap_or(i64::MAX)
        };
        let bx = bound(&self.v1.0, &self.v2.0);
        let by = bound(&self.v1.1, &self.v2.1);
        let one = BigRational::one();
        for x in -bx..=bx {
            for y in -by..=by {
                if x == 0 && y == 0 {
                    continue;
                }
                let v = (
                    BigRational::from_integer(BigInt::from(x)),
                    BigRational::from_integer(BigInt::from(y)),
                );
                if self.eval(&v) < one {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

/// Minkowski check: (area, interior lattice point if any). If there is no
/// interior point the area is at most 4; this is asserted.
pub fn minkowski_check(b: &ParallelogramNorm) -> (BigRational, Option<(i64, i64)>) {
    let area = b.area();
    let pt = b.interior_lattice_point();
    if pt.is_none() {
        assert!(
            area <= BigRational::from_integer(BigInt::from(4)),
            "lattice-point-free balanced parallelogram with area > 4"
        );
    }
    (area, pt)
}

/// Sum of weighted intersection numbers against a slope: the norm value a
/// family of surfaces assigns to a class of slope `s`.
pub fn norm_from_surfaces(surfaces: &[(u64, u64, Slope)], s: Slope) -> Result<u64> {
    if surfaces.is_empty() {
        return Err(Error::DegenerateNorm("no surfaces".into()));
    }
    let first = surfaces[0].2;
    if surfaces.iter().all(|&(_, _, si)| si == first) {
        return Err(Error::DegenerateNorm("all boundary slopes coincide".into()));
    }
    Ok(surfaces
        .iter()
        .map(|&(n, m, si)| n * m * delta(s, si))
        .sum())
}

/// Inputs to the slope-denominator chain verifier.
#[derive(Clone, Debug)]
pub struct ChainInput {
    pub alpha1: HomologyClass,
    pub alpha2: HomologyClass,
    pub mu: HomologyClass,
    pub t: BigRational,
    /// Extra constant multiplying the right-hand side; 1 by default.
    pub chain_constant: BigRational,
}

#[derive(Clone, Debug)]
pub struct ChainOutcome {
    pub report: BoundReport,
    pub q1: u64,
    pub delta: u64,
    pub ratio: BigRational,
    pub cross_v1v2_abs: BigRational,
}

/// Verify the exact inequality chain
///   q1^2 / Delta = t^2 * ratio * |omega(v1, v2)| <= 2 * ratio,
/// where v1, v2 are the positive multiples of alpha1, alpha2 with
/// mu = (1 - t) v1 + t v2 and the unit ball conv(+-v1, +-v2) has no interior
/// lattice point (Minkowski then gives |omega(v1, v2)| <= 2).
pub fn knot_chain_verify(input: &ChainInput) -> Result<ChainOutcome> {
    let ChainInput { alpha1, alpha2, mu, t, chain_constant } = input;
    if !mu.is_primitive() {
        return Err(Error::HypothesisViolated("mu must be primitive".into()));
    }
    if !alpha1.is_primitive() || !alpha2.is_primitive() {
        return Err(Error::HypothesisViolated("alpha classes must be primitive".into()));
    }
    let d = omega(*alpha1, *alpha2);
    if d == 0 {
        return Err(Error::HypothesisViolated("alpha1, alpha2 dependent".into()));
    }
    if !(t.is_positive() && *t < BigRational::one()) {
        return Err(Error::HypothesisViolated("t must lie strictly in (0, 1)".into()));
    }
    // mu = x alpha1 + y alpha2 with x = (1-t) c1, y = t c2
    let x = BigRational::new(BigInt::from(omega(*mu, *alpha2)), BigInt::from(d));
    let y = BigRational::new(BigInt::from(omega(*alpha1, *mu)), BigInt::from(d));
    let one = BigRational::one();
    let c1 = &x / (&one - t);
    let c2 = &y / t;
    if !c1.is_positive() || !c2.is_positive() {
        return Err(Error::HypothesisViolated(
            "mu is not a positive combination of alpha1, alpha2".into(),
        ));
    }
    let a1 = (
        BigRational::from_integer(BigInt::from(alpha1.0)),
        BigRational::from_integer(BigInt::from(alpha1.1)),
    );
    let a2 = (
        BigRational::from_integer(BigInt::from(alpha2.0)),
        BigRational::from_integer(BigInt::from(alpha2.1)),
    );
    let v1 = (&a1.0 * &c1, &a1.1 * &c1);
    let v2 = (&a2.0 * &c2, &a2.1 * &c2);
    let ball = ParallelogramNorm::new(v1, v2)?;
    // mu must lie on the unit sphere of the ball by construction
    let mu_vec = (
        BigRational::from_integer(BigInt::from(mu.0)),
        BigRational::from_integer(BigInt::from(mu.1)),
    );
    if ball.eval(&mu_vec) != one {
        return Err(Error::ConstructionFailed("mu not on the unit sphere".into()));
    }
    let (area, interior) = minkowski_check(&ball);
    if interior.is_some() {
        return Err(Error::HypothesisViolated(
            "unit ball contains a nonzero lattice point".into(),
        ));
    }
    let cross_abs = cross(&ball.v1, &ball.v2).abs();
    assert!(&area / BigRational::from_integer(BigInt::from(2)) == cross_abs);

    let q1 = omega(*alpha1, *mu).unsigned_abs() as u64;
    let delta_abs = d.unsigned_abs() as u64;
    let ratio = &c2 / &c1; // |alpha1-norm| / |alpha2-norm|
    let lhs = BigRational::new(
        BigInt::from(q1).pow(2),
        BigInt::from(delta_abs),
    );
    // exact identity: q1^2/Delta = t^2 * ratio * |omega(v1, v2)|
    let identity_rhs = t * t * &ratio * &cross_abs;
    if lhs != identity_rhs {
        return Err(Error::ConstructionFailed("chain identity failed".into()));
    }
    let rhs = chain_constant * BigRational::from_integer(BigInt::from(2)) * &ratio;
    let holds = lhs <= rhs;
    let report = BoundReport::exact("knot-chain", &lhs, &rhs, holds);
    Ok(ChainOutcome { report, q1, delta: delta_abs, ratio, cross_v1v2_abs: cross_abs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn rat(s: &str) -> BigRational {
        BigRational::from_str(s).unwrap()
    }

    #[test]
    fn delta_examples() {
        let s1 = Slope::new(HomologyClass(3, 1)).unwrap();
        let s2 = Slope::new(HomologyClass(5, 2)).unwrap();
        assert_eq!(delta(s1, s2), 1);
        assert_eq!(delta(s1, s1), 0);
        // meridian vs (p, q): denominator q
        let m = Slope::new(HomologyClass(1, 0)).unwrap();
        let s = Slope::new(HomologyClass(5, 3)).unwrap();
        assert_eq!(delta(m, s), 3);
    }

    #[test]
    fn slope_sign_canonical() {
        let a = Slope::new(HomologyClass(-3, 1)).unwrap();
        let b = Slope::new(HomologyClass(3, -1)).unwrap();
        assert_eq!(a, b);
        assert!(Slope::new(HomologyClass(2, 4)).is_err());
    }

    #[test]
    fn numerical_slope_examples() {
        let mu = HomologyClass(1, 0);
        let lam = HomologyClass(0, 1);
        assert_eq!(numerical_slope(mu, mu, lam).unwrap(), None);
        assert_eq!(numerical_slope(lam, mu, lam).unwrap(), Some(rat("0")));
        // alpha = mu + 2 lambda -> -1/2
        let alpha = HomologyClass(1, 2);
        assert_eq!(numerical_slope(alpha, mu, lam).unwrap(), Some(rat("-1/2")));
        // degenerate framing
        assert!(matches!(
            numerical_slope(alpha, mu, HomologyClass(2, 0)),
            Err(Error::DegenerateFraming)
        ));
    }

    #[test]
    fn gauge_basics() {
        let b = ParallelogramNorm::new((rat("1"), rat("0")), (rat("0"), rat("1"))).unwrap();
        assert_eq!(b.eval(&(rat("1"), rat("0"))), rat("1"));
        assert_eq!(b.eval(&(rat("1/2"), rat("1/2"))), rat("1"));
        assert_eq!(b.area(), rat("2"));
        assert_eq!(b.interior_lattice_point(), None);

        let big = ParallelogramNorm::new((rat("2"), rat("0")), (rat("0"), rat("2"))).unwrap();
        assert_eq!(big.area(), rat("8"));
        assert_eq!(big.interior_lattice_point(), Some((-1, 0)));

        let skew = ParallelogramNorm::new((rat("2"), rat("1")), (rat("1"), rat("2"))).unwrap();
        assert_eq!(skew.area(), rat("6"));
        assert_eq!(skew.eval(&(rat("1"), rat("1"))), rat("2/3"));
        assert!(skew.interior_lattice_point().is_some());
    }

    #[test]
    fn norm_is_a_norm() {
        let b = ParallelogramNorm::new((rat("3"), rat("1")), (rat("-1"), rat("2"))).unwrap();
        let u = (rat("5/7"), rat("-2"));
        let v = (rat("1/3"), rat("4/5"));
        // homogeneity
        let two_u = (&u.0 * rat("2"), &u.1 * rat("2"));
        assert_eq!(b.eval(&two_u), rat("2") * b.eval(&u));
        // triangle inequality
        let sum = (&u.0 + &v.0, &u.1 + &v.1);
        assert!(b.eval(&sum) <= b.eval(&u) + b.eval(&v));
        // symmetry
        let neg_u = (-u.0.clone(), -u.1.clone());
        assert_eq!(b.eval(&neg_u), b.eval(&u));
    }

    #[test]
    fn norm_from_surfaces_example() {
        let s01 = Slope::new(HomologyClass(0, 1)).unwrap();
        let s10 = Slope::new(HomologyClass(1, 0)).unwrap();
        let s = Slope::new(HomologyClass(1, 1)).unwrap();
        let val = norm_from_surfaces(&[(1, 1, s01), (1, 1, s10)], s).unwrap();
        assert_eq!(val, 2);
        assert!(matches!(
            norm_from_surfaces(&[(1, 1, s01), (2, 3, s01)], s),
            Err(Error::DegenerateNorm(_))
        ));
    }

    #[test]
    fn chain_example() {
        let input = ChainInput {
            alpha1: HomologyClass(1, 1),
            alpha2: HomologyClass(1, -1),
            mu: HomologyClass(1, 0),
            t: rat("1/2"),
            chain_constant: rat("1"),
        };
        let out = knot_chain_verify(&input).unwrap();
        assert_eq!(out.q1, 1);
        assert_eq!(out.delta, 2);
        assert!(out.report.holds);
        // q1^2/Delta = 1/2 <= 2 * ratio = 2
        assert_eq!(out.ratio, rat("1"));
    }

    #[test]
    fn chain_degenerate_t() {
        let input = ChainInput {
            alpha1: HomologyClass(1, 1),
            alpha2: HomologyClass(1, -1),
            mu: HomologyClass(1, 0),
            t: rat("0"),
            chain_constant: rat("1"),
        };
        assert!(matches!(
            knot_chain_verify(&input),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
