//! Discretely valued fields with exact arithmetic: p-adic valuations on the
//! rationals, and the order-at-zero valuation on univariate rational
//! functions over Q. Everything stays exact; no completions are formed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Val {
    Finite(i64),
    Infinity,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinity => None,
        }
    }

    pub fn min(self, other: Val) -> Val {
        match (self, other) {
            (Val::Infinity, x) | (x, Val::Infinity) => x,
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a.min(b)),
        }
    }

    pub fn ge(self, t: i64) -> bool {
        match self {
            Val::Infinity => true,
            Val::Finite(v) => v >= t,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinity => write!(f, "inf"),
        }
    }
}

/// A field with a discrete rank-1 valuation, exact element arithmetic, and a
/// canonical residue representative mod powers of the uniformizer.
#[allow(clippy::wrong_self_convention)] // from_int is a field constructor
pub trait ValuedField: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn sub(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn mul(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn neg(&self, x: &Self::Elem) -> Self::Elem;
    fn inv(&self, x: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, x: &Self::Elem) -> bool;
    /// v(x); v(0) = Infinity by convention.
    fn valuation(&self, x: &Self::Elem) -> Val;
    /// pi^k for any integer k.
    fn uniformizer_pow(&self, k: i64) -> Self::Elem;
    /// Canonical representative of x + pi^k * O (zero when v(x) >= k).
    fn reduce_mod(&self, x: &Self::Elem, k: i64) -> Self::Elem;

    fn div(&self, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(x, &self.inv(y)?))
    }
}

// ---------------------------------------------------------------------------
// p-adic rationals
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    pub p: u64,
}

impl PAdic {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "p must be at least 2");
        PAdic { p }
    }

    fn vp_int(&self, n: &BigInt) -> Val {
        if n.is_zero() {
            return Val::Infinity;
        }
        let p = BigInt::from(self.p);
        let mut v = 0i64;
        let mut m = n.abs();
        loop {
            let (q, r) = num_integer::Integer::div_rem(&m, &p);
            if r.is_zero() {
                v += 1;
                m = q;
            } else {
                return Val::Finite(v);
            }
        }
    }
}

impl ValuedField for PAdic {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x + y
    }
    fn sub(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x - y
    }
    fn mul(&self, x: &BigRational, y: &BigRational) -> BigRational {
        x * y
    }
    fn neg(&self, x: &BigRational) -> BigRational {
        -x
    }
    fn inv(&self, x: &BigRational) -> Result<BigRational> {
        if x.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(x.recip())
    }
    fn is_zero(&self, x: &BigRational) -> bool {
        x.is_zero()
    }

    fn valuation(&self, x: &BigRational) -> Val {
        if x.is_zero() {
            return Val::Infinity;
        }
        let vn = self.vp_int(x.numer()).finite().unwrap();
        let vd = self.vp_int(x.denom()).finite().unwrap();
        Val::Finite(vn - vd)
    }

    fn uniformizer_pow(&self, k: i64) -> BigRational {
        let p = BigInt::from(self.p);
        if k >= 0 {
            BigRational::from_integer(p.pow(k as u32))
        } else {
            BigRational::new(BigInt::one(), p.pow((-k) as u32))
        }
    }

    fn reduce_mod(&self, x: &BigRational, k: i64) -> BigRational {
        let v = match self.valuation(x) {
            Val::Infinity => return BigRational::zero(),
            Val::Finite(v) => v,
        };
        if v >= k {
            return BigRational::zero();
        }
        // x = p^v * (n/d), gcd(n, p) = gcd(d, p) = 1; representative is
        // p^v * (n * d^{-1} mod p^{k-v}) with the residue in [0, p^{k-v}).
        let unit = x * self.uniformizer_pow(-v);
        let modulus = BigInt::from(self.p).pow((k - v) as u32);
        let n = unit.numer().mod_floor(&modulus);
        let d = unit.denom().mod_floor(&modulus);
        let d_inv = mod_inverse(&d, &modulus).expect("denominator is a p-adic unit");
        let residue = (n * d_inv).mod_floor(&modulus);
        BigRational::from_integer(residue) * self.uniformizer_pow(v)
    }
}

use num_integer::Integer as _;

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Rational function field Q(t), valuation = order of vanishing at t = 0
// ---------------------------------------------------------------------------

/// Dense polynomial over Q, trailing zeros trimmed; empty = zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<BigRational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }
    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }
    pub fn from_coeffs(mut v: Vec<BigRational>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        Poly(v)
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }
    /// Order of vanishing at zero.
    pub fn ord(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = o.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            v.push(a + b);
        }
        Poly::from_coeffs(v)
    }
    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c.clone()).collect())
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::from_coeffs(v)
    }
    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quo = vec![BigRational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let rd = rem.len() - 1;
            let c = rem[rd].clone();
            if c.is_zero() {
                rem.pop();
                continue;
            }
            let q = &c / &lead;
            let shift = rd - dd;
            quo[shift] = q.clone();
            for (j, dc) in d.0.iter().enumerate() {
                rem[shift + j] -= &q * dc;
            }
            rem.pop();
        }
        (Poly::from_coeffs(quo), Poly::from_coeffs(rem))
    }
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        // normalize: lowest nonzero coefficient 1
        if let Some(k) = a.ord() {
            let c = a.0[k].clone();
            Poly(a.0.iter().map(|x| x / &c).collect())
        } else {
            a
        }
    }
    /// t^k.
    pub fn monomial(k: usize) -> Poly {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = BigRational::one();
        Poly(v)
    }
}

/// Ratio of polynomials, normalized: gcd removed, denominator's lowest
/// nonzero coefficient scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    pub num: Poly,
    pub den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::BadInput("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFun { num: Poly::zero(), den: Poly::constant(BigRational::one()) };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let k = den.ord().expect("nonzero denominator");
        let c = den.0[k].clone();
        RatFun {
            num: Poly(num.0.iter().map(|x| x / &c).collect()),
            den: Poly(den.0.iter().map(|x| x / &c).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FunctionField;

impl ValuedField for FunctionField {
    type Elem = RatFun;

    fn zero(&self) -> RatFun {
        RatFun::normalized(Poly::zero(), Poly::constant(BigRational::one()))
    }
    fn one(&self) -> RatFun {
        RatFun::normalized(
            Poly::constant(BigRational::one()),
            Poly::constant(BigRational::one()),
        )
    }
    fn from_int(&self, n: i64) -> RatFun {
        RatFun::normalized(
            Poly::constant(BigRational::from_integer(BigInt::from(n))),
            Poly::constant(BigRational::one()),
        )
    }
    fn add(&self, x: &RatFun, y: &RatFun) -> RatFun {
        RatFun::normalized(
            x.num.mul(&y.den).add(&y.num.mul(&x.den)),
            x.den.mul(&y.den),
        )
    }
    fn sub(&self, x: &RatFun, y: &RatFun) -> RatFun {
        self.add(x, &self.neg(y))
    }
    fn mul(&self, x: &RatFun, y: &RatFun) -> RatFun {
        RatFun::normalized(x.num.mul(&y.num), x.den.mul(&y.den))
    }
    fn neg(&self, x: &RatFun) -> RatFun {
        RatFun { num: x.num.neg(), den: x.den.clone() }
    }
    fn inv(&self, x: &RatFun) -> Result<RatFun> {
        if x.num.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(RatFun::normalized(x.den.clone(), x.num.clone()))
    }
    fn is_zero(&self, x: &RatFun) -> bool {
        x.num.is_zero()
    }

    fn valuation(&self, x: &RatFun) -> Val {
        match (x.num.ord(), x.den.ord()) {
            (None, _) => Val::Infinity,
            (Some(a), Some(b)) => Val::Finite(a as i64 - b as i64),
            (Some(_), None) => unreachable!("denominator nonzero"),
        }
    }

    fn uniformizer_pow(&self, k: i64) -> RatFun {
        if k >= 0 {
            RatFun::normalized(Poly::monomial(k as usize), Poly::constant(BigRational::one()))
        } else {
            RatFun::normalized(Poly::constant(BigRational::one()), Poly::monomial((-k) as usize))
        }
    }

    fn reduce_mod(&self, x: &RatFun, k: i64) -> RatFun {
        let v = match self.valuation(x) {
            Val::Infinity => return self.zero(),
            Val::Finite(v) => v,
        };
        if v >= k {
            return self.zero();
        }
        // Laurent expansion at zero, truncated to exponents < k.
        let n_ord = x.num.ord().unwrap();
        let d_ord = x.den.ord().unwrap();
        let n0: Vec<BigRational> = x.num.0[n_ord..].to_vec();
        let d0: Vec<BigRational> = x.den.0[d_ord..].to_vec();
        let terms = (k - v) as usize;
        let mut q = Vec::with_capacity(terms);
        #[allow(clippy::needless_range_loop)] // convolution indexing
        for j in 0..terms {
            let mut acc = n0.get(j).cloned().unwrap_or_else(BigRational::zero);
            for i in 0..j {
                let d_c = d0.get(j - i).cloned().unwrap_or_else(BigRational::zero);
                acc -= &q[i] * d_c;
            }
            q.push(acc / &d0[0]);
        }
        // representative = t^v * sum q_j t^j
        let series = Poly::from_coeffs(q);
        if v >= 0 {
            RatFun::normalized(series.mul(&Poly::monomial(v as usize)), Poly::constant(BigRational::one()))
        } else {
            RatFun::normalized(series, Poly::monomial((-v) as usize))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn rat(s: &str) -> BigRational {
        BigRational::from_str(s).unwrap()
    }

    #[test]
    fn padic_valuations() {
        let f = PAdic::new(3);
        assert_eq!(f.valuation(&rat("18/5")), Val::Finite(2));
        assert_eq!(f.valuation(&rat("5/9")), Val::Finite(-2));
        assert_eq!(f.valuation(&rat("0")), Val::Infinity);
    }

    #[test]
    fn padic_reduce() {
        let f = PAdic::new(3);
        // 1/2 mod 9: inverse of 2 mod 9 is 5
        assert_eq!(f.reduce_mod(&rat("1/2"), 2), rat("5"));
        // v(x) >= k -> 0
        assert_eq!(f.reduce_mod(&rat("27/4"), 2), rat("0"));
        // negative valuation: 1/3 mod 3^1: v=-1, residue of unit 1 mod 3^2 = 1
        assert_eq!(f.reduce_mod(&rat("1/3"), 1), rat("1/3"));
        // reduce is idempotent and congruent
        let x = rat("22/7");
        let r = f.reduce_mod(&x, 3);
        assert_eq!(f.reduce_mod(&r, 3), r);
        assert!(f.valuation(&(&x - &r)).ge(3));
    }

    #[test]
    fn function_field_valuations() {
        let f = FunctionField;
        // t^2 / (1 + t)
        let x = RatFun::new(Poly::monomial(2), Poly::from_coeffs(vec![rat("1"), rat("1")])).unwrap();
        assert_eq!(f.valuation(&x), Val::Finite(2));
        let inv = f.inv(&x).unwrap();
        assert_eq!(f.valuation(&inv), Val::Finite(-2));
        assert_eq!(f.valuation(&f.zero()), Val::Infinity);
    }

    #[test]
    fn function_field_reduce() {
        let f = FunctionField;
        // 1/(1 - t) = 1 + t + t^2 + ... truncated below t^3
        let x = RatFun::new(
            Poly::constant(rat("1")),
            Poly::from_coeffs(vec![rat("1"), rat("-1")]),
        )
        .unwrap();
        let r = f.reduce_mod(&x, 3);
        let expected = RatFun::new(
            Poly::from_coeffs(vec![rat("1"), rat("1"), rat("1")]),
            Poly::constant(rat("1")),
        )
        .unwrap();
        assert_eq!(r, expected);
        assert!(f.valuation(&f.sub(&x, &r)).ge(3));
    }

    #[test]
    fn ultrametric_property() {
        let f = PAdic::new(5);
        let xs = [rat("7/5"), rat("25/3"), rat("1/125"), rat("4"), rat("-6/35")];
        for x in &xs {
            for y in &xs {
                let vxy = f.valuation(&(x * y));
                let vx = f.valuation(x).finite().unwrap();
                let vy = f.valuation(y).finite().unwrap();
                assert_eq!(vxy, Val::Finite(vx + vy));
                let vsum = f.valuation(&(x + y));
                assert!(vsum.ge(vx.min(vy)));
            }
        }
    }
}
