//! Fixed-point interval arithmetic with directed rounding.
//!
//! Values are `v / 2^prec` with `v: BigInt`. Every operation rounds the lower
//! endpoint down and the upper endpoint up, so an `Interval` always encloses
//! the exact real result. `ln`, `exp`, `sqrt` and `log2` carry certified
//! truncation-error bounds; a comparison decided through these intervals is a
//! rigorous certificate.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Precision context. `prec` is the number of fractional bits.
#[derive(Clone, Debug)]
pub struct Ctx {
    pub prec: u32,
    ln2: Interval,
    ln7: Interval,
}

/// 50 decimal digits with guard bits.
pub const DEFAULT_DIGITS: u32 = 50;

impl Ctx {
    pub fn new(prec: u32) -> Self {
        let mut ctx = Ctx {
            prec,
            ln2: Interval::point(BigInt::zero()),
            ln7: Interval::point(BigInt::zero()),
        };
        ctx.ln2 = ln2_series(&ctx);
        ctx.ln7 = ln_rational(&ctx, &BigRational::from_integer(BigInt::from(7)));
        ctx
    }

    /// Precision sufficient to certify comparisons at `digits` decimal digits.
    pub fn with_digits(digits: u32) -> Self {
        Self::new((digits as f64 * 3.3220).ceil() as u32 + 32)
    }

    pub fn ln2(&self) -> &Interval {
        &self.ln2
    }

    pub fn ln7(&self) -> &Interval {
        &self.ln7
    }

    fn eps_target(&self) -> BigInt {
        BigInt::one() << 2 // a few ulps
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
}

fn shr_floor(x: &BigInt, k: u32) -> BigInt {
    x >> k // arithmetic shift: floor
}

fn shr_ceil(x: &BigInt, k: u32) -> BigInt {
    -((-x) >> k)
}

impl Interval {
    pub fn point(v: BigInt) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_int(ctx: &Ctx, v: i64) -> Self {
        Interval::point(BigInt::from(v) << ctx.prec)
    }

    pub fn from_rational(ctx: &Ctx, r: &BigRational) -> Self {
        let scaled_num = r.numer() << ctx.prec;
        Interval {
            lo: scaled_num.div_floor(r.denom()),
            hi: scaled_num.div_ceil(r.denom()),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.lo <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn mul(&self, ctx: &Ctx, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let pmin = products.iter().min().unwrap();
        let pmax = products.iter().max().unwrap();
        Interval { lo: shr_floor(pmin, ctx.prec), hi: shr_ceil(pmax, ctx.prec) }
    }

    pub fn mul_int(&self, v: i64) -> Interval {
        let b = BigInt::from(v);
        if v >= 0 {
            Interval { lo: &self.lo * &b, hi: &self.hi * &b }
        } else {
            Interval { lo: &self.hi * &b, hi: &self.lo * &b }
        }
    }

    /// Division; the divisor interval must not contain zero.
    pub fn div(&self, ctx: &Ctx, other: &Interval) -> Interval {
        assert!(
            other.lo.sign() == other.hi.sign() && !other.lo.is_zero(),
            "division by an interval containing zero"
        );
        let shifted_lo = &self.lo << ctx.prec;
        let shifted_hi = &self.hi << ctx.prec;
        let cands_floor = [
            shifted_lo.div_floor(&other.lo),
            shifted_lo.div_floor(&other.hi),
            shifted_hi.div_floor(&other.lo),
            shifted_hi.div_floor(&other.hi),
        ];
        let cands_ceil = [
            shifted_lo.div_ceil(&other.lo),
            shifted_lo.div_ceil(&other.hi),
            shifted_hi.div_ceil(&other.lo),
            shifted_hi.div_ceil(&other.hi),
        ];
        Interval {
            lo: cands_floor.into_iter().min().unwrap(),
            hi: cands_ceil.into_iter().max().unwrap(),
        }
    }

    /// Multiply the represented value by 2^k (k may be negative).
    pub fn scale2(&self, k: i64) -> Interval {
        if k >= 0 {
            Interval { lo: &self.lo << k as u32, hi: &self.hi << k as u32 }
        } else {
            let s = (-k) as u32;
            Interval { lo: shr_floor(&self.lo, s), hi: shr_ceil(&self.hi, s) }
        }
    }

    pub fn powi(&self, ctx: &Ctx, mut n: u32) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::from_int(ctx, 1);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(ctx, &base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(ctx, &base);
            }
        }
        acc
    }

    /// Square root of a non-negative interval.
    pub fn sqrt(&self, ctx: &Ctx) -> Interval {
        assert!(!self.lo.is_negative(), "sqrt of a negative interval");
        let lo = (self.lo.clone() << ctx.prec).sqrt();
        let hi_scaled = self.hi.clone() << ctx.prec;
        let root = hi_scaled.sqrt();
        let hi = if &root * &root == hi_scaled { root } else { root + 1 };
        Interval { lo, hi }
    }

    /// Some(true) if certainly self < other; Some(false) if certainly >=.
    pub fn certified_lt(&self, other: &Interval) -> Option<bool> {
        if self.hi < other.lo {
            Some(true)
        } else if self.lo >= other.hi {
            Some(false)
        } else {
            None
        }
    }

    /// Some(true) if certainly self <= other; Some(false) if certainly >.
    pub fn certified_le(&self, other: &Interval) -> Option<bool> {
        if self.hi <= other.lo {
            Some(true)
        } else if self.lo > other.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn cmp_rational(&self, ctx: &Ctx, r: &BigRational) -> Option<Ordering> {
        let other = Interval::from_rational(ctx, r);
        // exact endpoints: compare as scaled integers
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.lo == self.hi && other.lo == other.hi && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn mid_f64(&self, ctx: &Ctx) -> f64 {
        let sum = (&self.lo + &self.hi).to_f64().unwrap_or(0.0);
        sum / 2.0 / 2f64.powi(ctx.prec as i32)
    }

    /// Decimal rendering of the midpoint, with enough digits to be honest
    /// about the enclosure width.
    pub fn to_decimal(&self, ctx: &Ctx, digits: u32) -> String {
        decimal_string(&self.lo, ctx.prec, digits)
    }

    pub fn width(&self) -> BigInt {
        &self.hi - &self.lo
    }
}

fn decimal_string(scaled: &BigInt, prec: u32, digits: u32) -> String {
    let pow10 = BigInt::from(10u8).pow(digits);
    let v = (scaled * &pow10) >> prec;
    let neg = v.is_negative();
    let v = v.abs();
    let (int_part, frac_part) = v.div_rem(&pow10);
    let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac)
}

// ---------------------------------------------------------------------------
// Elementary functions
// ---------------------------------------------------------------------------

/// atanh-based logarithm series on z in [0, 1/2): returns interval for
/// 2*atanh(z) = ln((1+z)/(1-z)), with the truncation error pushed into hi.
fn atanh2(ctx: &Ctx, z: &Interval) -> Interval {
    debug_assert!(!z.lo.is_negative());
    let one = Interval::from_int(ctx, 1);
    let z2 = z.mul(ctx, z);
    let mut term = z.clone(); // z^(2k+1)
    let mut sum = Interval::point(BigInt::zero());
    let mut k = 0u32;
    let eps = ctx.eps_target();
    loop {
        let contrib = Interval {
            lo: term.lo.clone() / BigInt::from(2 * k + 1),
            hi: term.hi.div_ceil(&BigInt::from(2 * k + 1)),
        };
        sum = sum.add(&contrib);
        term = term.mul(ctx, &z2);
        k += 1;
        if term.hi < eps || k > 4 * ctx.prec {
            break;
        }
    }
    // remainder: sum_{j>=k} z^(2j+1)/(2j+1) <= term / ((2k+1)(1 - z^2))
    let denom = one.sub(&z2);
    assert!(denom.lo.is_positive(), "series argument too large");
    let rem = term.div(ctx, &denom);
    let rem_hi = rem.hi.div_ceil(&BigInt::from(2 * k + 1)).max(BigInt::zero());
    let s = Interval { lo: sum.lo, hi: sum.hi + rem_hi };
    s.mul_int(2)
}

fn ln2_series(ctx: &Ctx) -> Interval {
    // ln 2 = 2 atanh(1/3)
    let third = Interval::from_rational(ctx, &BigRational::new(BigInt::one(), BigInt::from(3)));
    atanh2(ctx, &third)
}

/// floor(log2(p/q)) for positive p, q.
fn floor_log2(num: &BigInt, den: &BigInt) -> i64 {
    let mut e = num.bits() as i64 - den.bits() as i64;
    // adjust: want 2^e <= num/den < 2^(e+1)
    loop {
        let ok_lower = if e >= 0 { num >= &(den << e as u32) } else { &(num << (-e) as u32) >= den };
        if !ok_lower {
            e -= 1;
            continue;
        }
        let ok_upper =
            if e + 1 >= 0 { num < &(den << (e + 1) as u32) } else { &(num << (-(e + 1)) as u32) < den };
        if !ok_upper {
            e += 1;
            continue;
        }
        return e;
    }
}

/// Certified enclosure of ln(r) for rational r > 0.
pub fn ln_rational(ctx: &Ctx, r: &BigRational) -> Interval {
    assert!(r.is_positive(), "ln of a non-positive rational");
    let mut e = floor_log2(r.numer(), r.denom());
    // m = r / 2^e in [1, 2)
    let (a, mut b) = if e >= 0 {
        (r.numer().clone(), r.denom() << e as u32)
    } else {
        (r.numer() << (-e) as u32, r.denom().clone())
    };
    // tighter reduction: push m into [3/4, 3/2) so |z| <= 1/5, which roughly
    // halves the series length versus z <= 1/3
    if &a * 2u8 >= &b * 3u8 {
        e += 1;
        b <<= 1;
    }
    let z = BigRational::new(&a - &b, &a + &b);
    let z_iv = Interval::from_rational(ctx, &z);
    let ln_m = atanh2_signed(ctx, &z_iv);
    ctx.ln2().mul_int(e).add(&ln_m)
}

/// atanh series for z in (-1/2, 1/2), either sign.
fn atanh2_signed(ctx: &Ctx, z: &Interval) -> Interval {
    if !z.lo.is_negative() {
        return atanh2(ctx, z);
    }
    if !z.hi.is_positive() {
        return atanh2(ctx, &z.neg()).neg();
    }
    // straddles zero: evaluate both sides
    let pos = atanh2(ctx, &Interval { lo: BigInt::zero(), hi: z.hi.clone() });
    let neg = atanh2(ctx, &Interval { lo: BigInt::zero(), hi: -z.lo.clone() }).neg();
    Interval { lo: neg.lo, hi: pos.hi }
}

/// ln over an interval with rational-valued dyadic endpoints.
pub fn ln_interval(ctx: &Ctx, x: &Interval) -> Interval {
    assert!(x.lo.is_positive(), "ln of interval touching zero");
    let lo_r = BigRational::new(x.lo.clone(), BigInt::one() << ctx.prec);
    let hi_r = BigRational::new(x.hi.clone(), BigInt::one() << ctx.prec);
    let lo = ln_rational(ctx, &lo_r);
    if x.lo == x.hi {
        return lo;
    }
    let hi = ln_rational(ctx, &hi_r);
    Interval { lo: lo.lo, hi: hi.hi }
}

/// Certified enclosure of exp over an interval.
pub fn exp_interval(ctx: &Ctx, x: &Interval) -> Interval {
    // range-reduce: x = n ln2 + s, |s| <= ln2/2 + slack
    let mid = x.mid_f64(ctx);
    let n = (mid / std::f64::consts::LN_2).round() as i64;
    let s = x.sub(&ctx.ln2().mul_int(n));
    // |s| should be small; if x is wide this still converges, just slower
    let u = s.lo.abs().max(s.hi.abs());
    assert!(
        u < (BigInt::one() << (ctx.prec + 6)),
        "exp argument too large for range reduction"
    );
    let mut term = Interval::from_int(ctx, 1);
    let mut sum = Interval::from_int(ctx, 1);
    let mut k = 1u32;
    let eps = ctx.eps_target();
    loop {
        term = term.mul(ctx, &s);
        term = Interval {
            lo: term.lo.div_floor(&BigInt::from(k)),
            hi: term.hi.div_ceil(&BigInt::from(k)),
        };
        sum = sum.add(&term);
        let tmax = term.lo.abs().max(term.hi.abs());
        k += 1;
        if tmax < eps || k > 8 * ctx.prec {
            // remainder: geometric tail bound |t| * q/(1-q) with q = u/k <= 1/2 for k large
            let q_num = &u;
            let k_big = BigInt::from(k) << ctx.prec;
            if q_num * 2 < k_big {
                let rem = (tmax.clone() * 2u8).max(BigInt::one());
                sum = Interval { lo: sum.lo - &rem, hi: sum.hi + rem };
                break;
            }
        }
        if k > 16 * ctx.prec {
            panic!("exp series failed to converge");
        }
    }
    let out = sum.scale2(n);
    assert!(out.is_valid());
    out
}

/// Certified enclosure of log2(r) for rational r > 0.
pub fn log2_rational(ctx: &Ctx, r: &BigRational) -> Interval {
    ln_rational(ctx, r).div(ctx, ctx.ln2())
}

pub fn log2_interval(ctx: &Ctx, x: &Interval) -> Interval {
    ln_interval(ctx, x).div(ctx, ctx.ln2())
}

/// sqrt of a rational, as a certified interval.
pub fn sqrt_rational(ctx: &Ctx, r: &BigRational) -> Interval {
    assert!(!r.is_negative());
    Interval::from_rational(ctx, r).sqrt(ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn rat(s: &str) -> BigRational {
        BigRational::from_str(s).unwrap()
    }

    /// The decimal literal is truncated at its last digit, so the true value
    /// lies within one unit of that digit; check the enclosure against that.
    fn assert_encloses(iv: &Interval, ctx: &Ctx, decimal: &str, _tol_ulps: u64) {
        let (int_part, frac) = decimal.split_once('.').unwrap();
        let digits = frac.len() as u32;
        let num = BigInt::from_str(&format!("{int_part}{frac}")).unwrap();
        let den = BigInt::from(10u8).pow(digits);
        let r = BigRational::new(num, den);
        let slack = Interval::from_rational(
            ctx,
            &BigRational::new(BigInt::from(2), BigInt::from(10u8).pow(digits)),
        );
        let r_iv = Interval::from_rational(ctx, &r);
        assert!(
            iv.lo <= &r_iv.hi + &slack.hi && iv.hi >= &r_iv.lo - &slack.hi,
            "enclosure {} misses {}",
            iv.to_decimal(ctx, 55),
            decimal
        );
        assert!(iv.width() < (BigInt::one() << 40), "interval too wide");
    }

    #[test]
    fn ln2_digits() {
        let ctx = Ctx::with_digits(50);
        assert_encloses(
            ctx.ln2(),
            &ctx,
            "0.69314718055994530941723212145817656807550013436026",
            4,
        );
    }

    #[test]
    fn ln_ten() {
        let ctx = Ctx::with_digits(50);
        let l = ln_rational(&ctx, &rat("10"));
        assert_encloses(&l, &ctx, "2.30258509299404568401799145468436420760110148862877", 8);
    }

    #[test]
    fn exp_one() {
        let ctx = Ctx::with_digits(50);
        let e = exp_interval(&ctx, &Interval::from_int(&ctx, 1));
        assert_encloses(&e, &ctx, "2.71828182845904523536028747135266249775724709369995", 16);
    }

    #[test]
    fn sqrt_two() {
        let ctx = Ctx::with_digits(50);
        let s = sqrt_rational(&ctx, &rat("2"));
        assert_encloses(&s, &ctx, "1.41421356237309504880168872420969807856967187537694", 4);
    }

    #[test]
    fn log2_of_eight() {
        let ctx = Ctx::with_digits(30);
        let l = log2_rational(&ctx, &rat("8"));
        assert_eq!(l.cmp_rational(&ctx, &rat("3")), None); // encloses 3, cannot separate
        assert_eq!(l.cmp_rational(&ctx, &rat("29/10")), Some(Ordering::Greater));
        assert_eq!(l.cmp_rational(&ctx, &rat("31/10")), Some(Ordering::Less));
    }

    #[test]
    fn exp_ln_roundtrip() {
        let ctx = Ctx::with_digits(40);
        for v in ["3/2", "10", "1/7", "355/113"] {
            let r = rat(v);
            let back = exp_interval(&ctx, &ln_rational(&ctx, &r));
            let direct = Interval::from_rational(&ctx, &r);
            assert!(back.lo <= direct.hi && back.hi >= direct.lo, "roundtrip {v}");
        }
    }

    #[test]
    fn directed_division() {
        let ctx = Ctx::new(16);
        let a = Interval::from_int(&ctx, 1);
        let b = Interval::from_int(&ctx, 3);
        let t = a.div(&ctx, &b);
        assert!(t.lo <= t.hi);
        let third = rat("1/3");
        let exact = Interval::from_rational(&ctx, &third);
        assert!(t.lo <= exact.lo && t.hi >= exact.hi);
    }

    #[test]
    fn negative_scaling() {
        let ctx = Ctx::new(32);
        let x = Interval::from_rational(&ctx, &rat("-7/3"));
        let y = x.scale2(-3);
        let expected = rat("-7/24");
        let e = Interval::from_rational(&ctx, &expected);
        assert!(y.lo <= e.lo && y.hi >= e.hi);
    }
}
