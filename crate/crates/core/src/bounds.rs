//! Closed-form bound evaluators and checkers: the phi minimization, the
//! q/tau selection with its certificates, the monotonicity sweep, the kappa
//! upper bounds, the headline slope-genus inequalities, and torus-knot data.
//!
//! Comparisons are exact rational arithmetic wherever the transcendental
//! parts can be cleared by integer exponentiation; otherwise they are decided
//! by directed interval arithmetic at the context precision, with escalation,
//! and reported as certified with a margin.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::arb::{exp_interval, ln_rational, log2_rational, Ctx, Interval};
use crate::error::{Error, Result};
use crate::report::BoundReport;

fn rat_u64(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------------
// phi
// ---------------------------------------------------------------------------

/// The value (1/(tau-1)) * min_m tau^(2m+2) * arg^(1/m) over positive
/// integers m, kept symbolic so comparisons against rationals stay exact.
#[derive(Clone, Debug)]
pub struct PhiValue {
    pub tau: BigRational,
    pub arg: BigRational,
    /// The minimizing exponent.
    pub m: u32,
}

/// a_m <= a_m' for a_m = tau^(2m+2) arg^(1/m), compared exactly by raising
/// both sides to the power m * m'.
fn phi_candidate_le(tau: &BigRational, arg: &BigRational, m: u32, m2: u32) -> bool {
    let lhs = tau.pow(((2 * m + 2) * m * m2) as i32) * arg.pow(m2 as i32);
    let rhs = tau.pow(((2 * m2 + 2) * m * m2) as i32) * arg.pow(m as i32);
    lhs <= rhs
}

pub fn phi_tau(tau: &BigRational, arg: &BigRational) -> Result<PhiValue> {
    if tau <= &BigRational::one() {
        return Err(Error::HypothesisViolated("tau must exceed 1".into()));
    }
    if arg < &BigRational::one() {
        return Err(Error::HypothesisViolated("argument must be at least 1".into()));
    }
    // window: beyond M with tau^(2 M (M+1)) >= arg the candidates increase,
    // since a_{m+1}/a_m = tau^2 * arg^(-1/(m(m+1))) >= 1 for m >= M.
    let mut window = {
        let bits = (arg.numer().bits() as u32).max(1);
        bits + 2
    };
    loop {
        let cert = tau.pow((2 * window * (window + 1)) as i32) >= *arg;
        if cert {
            break;
        }
        window *= 2;
        if window > 1 << 20 {
            return Err(Error::ConstructionFailed("phi window certification failed".into()));
        }
    }
    let mut best = 1u32;
    for m in 2..=window {
        if !phi_candidate_le(tau, arg, best, m) {
            best = m;
        }
    }
    Ok(PhiValue { tau: tau.clone(), arg: arg.clone(), m: best })
}

impl PhiValue {
    /// Exact comparison of this value against a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        if !r.is_positive() {
            return Ordering::Greater;
        }
        // phi vs r  <=>  tau^(2m+2) arg^(1/m) vs r (tau - 1)
        // raise both sides to the m-th power
        let m = self.m;
        let lhs = self.tau.pow(((2 * m + 2) * m) as i32) * &self.arg;
        let scaled = r * (&self.tau - BigRational::one());
        let rhs = scaled.pow(m as i32);
        lhs.cmp(&rhs)
    }

    /// r < phi, exactly.
    pub fn gt_rational(&self, r: &BigRational) -> bool {
        self.cmp_rational(r) == Ordering::Greater
    }

    /// phi(arg) <= phi(arg') for the same tau, exactly.
    pub fn le(&self, other: &PhiValue) -> bool {
        assert_eq!(self.tau, other.tau);
        // compare tau^(2m+2) arg^(1/m) vs tau^(2m'+2) arg'^(1/m')
        let (m, m2) = (self.m, other.m);
        let lhs = self.tau.pow(((2 * m + 2) * m * m2) as i32) * self.arg.pow(m2 as i32);
        let rhs = self.tau.pow(((2 * m2 + 2) * m * m2) as i32) * other.arg.pow(m as i32);
        lhs <= rhs
    }

    /// Certified enclosure of the value.
    pub fn interval(&self, ctx: &Ctx) -> Interval {
        let rational_part =
            &self.tau.pow((2 * self.m + 2) as i32) / (&self.tau - BigRational::one());
        let root = if self.arg.is_one() {
            Interval::from_int(ctx, 1)
        } else {
            // arg^(1/m) = exp(ln(arg)/m)
            let ln_arg = ln_rational(ctx, &self.arg);
            let over_m = Interval {
                lo: ln_arg.lo.div_floor(&BigInt::from(self.m)),
                hi: ln_arg.hi.div_ceil(&BigInt::from(self.m)),
            };
            exp_interval(ctx, &over_m)
        };
        Interval::from_rational(ctx, &rational_part).mul(ctx, &root)
    }

    /// Certified enclosure of ln(phi).
    pub fn ln_interval(&self, ctx: &Ctx) -> Interval {
        let ln_tau = ln_rational(ctx, &self.tau);
        let ln_tau_m1 = ln_rational(ctx, &(&self.tau - BigRational::one()));
        let ln_arg = ln_rational(ctx, &self.arg);
        let over_m = Interval {
            lo: ln_arg.lo.div_floor(&BigInt::from(self.m)),
            hi: ln_arg.hi.div_ceil(&BigInt::from(self.m)),
        };
        ln_tau.mul_int((2 * self.m + 2) as i64).add(&over_m).sub(&ln_tau_m1)
    }
}

/// tau = (7q - 1)/(q - 1).
pub fn tau_from_q(q: &BigRational) -> Result<BigRational> {
    if q <= &BigRational::one() {
        return Err(Error::HypothesisViolated("q must exceed 1".into()));
    }
    Ok((q * rat_i64(7) - BigRational::one()) / (q - BigRational::one()))
}

// ---------------------------------------------------------------------------
// q and tau selection with certificates
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct ChosenQ {
    pub mu: u64,
    pub q: BigRational,
    pub tau: BigRational,
    pub cert_q_range: BoundReport,
    pub cert_ln_phi: BoundReport,
}

fn interval_floor(ctx: &Ctx, iv: &Interval) -> Option<BigInt> {
    let lo = iv.lo.div_floor(&(BigInt::one() << ctx.prec));
    let hi = iv.hi.div_floor(&(BigInt::one() << ctx.prec));
    if lo == hi {
        Some(lo)
    } else {
        None
    }
}

/// Select q = (12 mu + 19)/7 with mu = floor(sqrt(ln x / (2 ln 7))) + 1, and
/// certify the two defining inequalities at the context precision.
pub fn choose_q_tau(x: &BigRational, ctx: &Ctx) -> Result<ChosenQ> {
    if x <= &BigRational::one() {
        return Err(Error::HypothesisViolated("x must exceed 1".into()));
    }
    let ln7 = ctx.ln7().clone();
    let ln_x = ln_rational(ctx, x);
    // mu = floor(sqrt(ln x / (2 ln 7))) + 1
    let ratio = ln_x.div(ctx, &ln7.mul_int(2));
    let root = ratio.sqrt(ctx);
    let mu_floor = interval_floor(ctx, &root).ok_or_else(|| {
        Error::Inconclusive("floor of sqrt(ln x / (2 ln 7)) not pinned".into())
    })?;
    let mu = mu_floor.to_u64().ok_or_else(|| Error::BadInput("mu out of range".into()))? + 1;
    let q = BigRational::new(BigInt::from(12 * mu + 19), BigInt::from(7));
    let tau = tau_from_q(&q)?;

    // certificate 1: 1 < q <= (6 sqrt(2 ln x / ln 7) + 31)/7
    let two_lnx_over_ln7 = ln_x.mul_int(2).div(ctx, &ln7);
    let bound1 = two_lnx_over_ln7
        .sqrt(ctx)
        .mul_int(6)
        .add(&Interval::from_int(ctx, 31))
        .div(ctx, &Interval::from_int(ctx, 7));
    let q_iv = Interval::from_rational(ctx, &q);
    let c1_holds = q > BigRational::one() && q_iv.certified_le(&bound1) == Some(true);
    let cert_q_range = BoundReport::directed(
        "q-range",
        q.to_string(),
        bound1.to_decimal(ctx, 30),
        c1_holds,
        bound1.sub(&q_iv).to_decimal(ctx, 30),
        ctx.prec,
    );

    // certificate 2: ln phi_tau(x) <= 2 sqrt(2 ln7 ln x) + 4 ln 7 + 1
    let phi = phi_tau(&tau, x)?;
    let lhs = phi.ln_interval(ctx);
    let rhs = ln7
        .mul(ctx, &ln_x)
        .mul_int(2)
        .sqrt(ctx)
        .mul_int(2)
        .add(&ln7.mul_int(4))
        .add(&Interval::from_int(ctx, 1));
    let c2_holds = lhs.certified_le(&rhs) == Some(true);
    let cert_ln_phi = BoundReport::directed(
        "ln-phi",
        lhs.to_decimal(ctx, 30),
        rhs.to_decimal(ctx, 30),
        c2_holds,
        rhs.sub(&lhs).to_decimal(ctx, 30),
        ctx.prec,
    );
    Ok(ChosenQ { mu, q, tau, cert_q_range, cert_ln_phi })
}

// ---------------------------------------------------------------------------
// The monotone comparison function f
// ---------------------------------------------------------------------------

/// f(x) = 2 sqrt(2 ln7 ln x) + ln(6 sqrt(2 ln x / ln 7) + 31)
///        + ln(ln x / ln 2 + 1) - ln x, as a certified enclosure.
pub fn f_interval(ctx: &Ctx, x: u64) -> Interval {
    let ln7 = ctx.ln7().clone();
    let ln_x = ln_rational(ctx, &rat_u64(x));
    let term1 = ln7.mul(ctx, &ln_x).mul_int(2).sqrt(ctx).mul_int(2);
    let inner2 = ln_x
        .mul_int(2)
        .div(ctx, &ln7)
        .sqrt(ctx)
        .mul_int(6)
        .add(&Interval::from_int(ctx, 31));
    let term2 = crate::arb::ln_interval(ctx, &inner2);
    let inner3 = ln_x.div(ctx, ctx.ln2()).add(&Interval::from_int(ctx, 1));
    let term3 = crate::arb::ln_interval(ctx, &inner3);
    term1.add(&term2).add(&term3).sub(&ln_x)
}

/// x f'(x) = a/(2 sqrt(L)) + b/(2 b L + 2 c sqrt(L)) + d/(d L + 1) - 1 with
/// L = ln x, a = 2 sqrt(2 ln7), b = 6 sqrt(2/ln7), c = 31, d = 1/ln2.
pub fn xfprime_interval(ctx: &Ctx, x: u64) -> Interval {
    let ln7 = ctx.ln7().clone();
    let big_l = ln_rational(ctx, &rat_u64(x));
    let sqrt_l = big_l.sqrt(ctx);
    let a = ln7.mul_int(2).sqrt(ctx).mul_int(2);
    let b = Interval::from_int(ctx, 2).div(ctx, &ln7).sqrt(ctx).mul_int(6);
    let term1 = a.div(ctx, &sqrt_l.mul_int(2));
    let term2 = b.div(ctx, &b.mul(ctx, &big_l).mul_int(2).add(&sqrt_l.mul_int(62)));
    // d/(d L + 1) = 1/(L + ln 2) after multiplying through by ln 2
    let term3 = Interval::from_int(ctx, 1).div(ctx, &big_l.add(ctx.ln2()));
    term1.add(&term2).add(&term3).sub(&Interval::from_int(ctx, 1))
}

/// One monotonicity step: certified f(n+1) <= f(n).
pub fn f_step_holds(ctx: &Ctx, n: u64) -> Option<bool> {
    let fa = f_interval(ctx, n);
    let fb = f_interval(ctx, n + 1);
    fb.certified_le(&fa)
}

/// Certify f(n+1) <= f(n) across an integer range within [333, 1e6], plus
/// the sign facts at the threshold when the range starts there: f(334) <
/// f(333) strictly, and x f'(x) positive at 333, negative at 334.
pub fn f_monotone_check(lo: u64, hi: u64, ctx: &Ctx) -> Result<BoundReport> {
    if !(333..=1_000_000).contains(&lo) || hi > 1_000_000 || lo > hi {
        return Err(Error::HypothesisViolated(format!("range [{lo}, {hi}] outside [333, 1e6]")));
    }
    if lo == 333 {
        let d333 = xfprime_interval(ctx, 333);
        let d334 = xfprime_interval(ctx, 334);
        if !d333.is_positive() || !d334.hi.is_negative() {
            return Err(Error::Inconclusive("derivative signs at 333/334 not certified".into()));
        }
        let strict = f_interval(ctx, 334).certified_lt(&f_interval(ctx, 333));
        if strict != Some(true) {
            return Ok(BoundReport::directed(
                "f-monotone",
                "f(334)".into(),
                "f(333)".into(),
                false,
                "strict step failed".into(),
                ctx.prec,
            ));
        }
    }
    let mut prev = f_interval(ctx, lo);
    let mut worst = prev.sub(&prev).hi.clone();
    for n in lo..hi {
        let next = f_interval(ctx, n + 1);
        match next.certified_le(&prev) {
            Some(true) => {}
            _ => {
                return Ok(BoundReport::directed(
                    "f-monotone",
                    format!("f({})", n + 1),
                    format!("f({n})"),
                    false,
                    "step not certified".into(),
                    ctx.prec,
                ))
            }
        }
        let margin = prev.sub(&next).lo.clone();
        if n == lo || margin < worst {
            worst = margin;
        }
        prev = next;
    }
    Ok(BoundReport::directed(
        "f-monotone",
        format!("f on [{lo}, {hi}]"),
        "monotone nonincreasing".into(),
        true,
        Interval::point(worst).to_decimal(ctx, 30),
        ctx.prec,
    ))
}

// ---------------------------------------------------------------------------
// Knot data and the kappa bounds
// ---------------------------------------------------------------------------

/// Numeric invariants of a pair of essential surfaces: genera, boundary
/// counts, the denominator q1 and the slope distance Delta. Euler
/// characteristics are derived: chi = 2 - 2g - m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnotData {
    pub g1: u64,
    pub g2: u64,
    pub m1: u64,
    pub m2: u64,
    pub q1: u64,
    pub delta: u64,
}

impl KnotData {
    pub fn chi1(&self) -> i64 {
        2 - 2 * self.g1 as i64 - self.m1 as i64
    }
    pub fn chi2(&self) -> i64 {
        2 - 2 * self.g2 as i64 - self.m2 as i64
    }
    pub fn validate(&self) -> Result<()> {
        if self.m1 < 1 || self.m2 < 1 {
            return Err(Error::HypothesisViolated("boundary counts must be positive".into()));
        }
        Ok(())
    }
}

/// coef * log2(log2_arg), kept symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct LogTerm {
    pub coef: BigRational,
    pub log2_arg: u64,
}

impl LogTerm {
    pub fn interval(&self, ctx: &Ctx) -> Interval {
        Interval::from_rational(ctx, &self.coef)
            .mul(ctx, &log2_rational(ctx, &rat_u64(self.log2_arg)))
    }
}

#[derive(Clone, Debug)]
pub enum KappaVariant {
    Easy,
    Hard { theta: u64, q: BigRational },
    Explicit,
}

#[derive(Clone, Debug)]
pub enum KappaBound {
    /// (2 m2^2 Delta / (g2 - 1)) * log2(2 g2 - 2)
    Easy(LogTerm),
    /// (36 q m2 |chi1| / (m1 Theta)) * phi_tau(Theta) * log2(2 Theta)
    Hard { coef: BigRational, phi: PhiValue, log2_arg: u64 },
    /// g(chi2) * m2 |chi1| / (m1 |chi2|)
    Explicit { value: Interval, bits: u32 },
}

impl KappaBound {
    pub fn interval(&self, ctx: &Ctx) -> Interval {
        match self {
            KappaBound::Easy(t) => t.interval(ctx),
            KappaBound::Hard { coef, phi, log2_arg } => Interval::from_rational(ctx, coef)
                .mul(ctx, &phi.interval(ctx))
                .mul(ctx, &log2_rational(ctx, &rat_u64(*log2_arg))),
            KappaBound::Explicit { value, .. } => value.clone(),
        }
    }
}

/// g(x) = 12348 (6 sqrt(2 ln|x|/ln7) + 31)(ln|x|/ln2 + 1)
///        exp(1 + 2 sqrt(2 ln7 ln|x|)).
pub fn g_interval(ctx: &Ctx, x_abs: u64) -> Interval {
    let ln7 = ctx.ln7().clone();
    let big_l = ln_rational(ctx, &rat_u64(x_abs));
    let f1 = big_l
        .mul_int(2)
        .div(ctx, &ln7)
        .sqrt(ctx)
        .mul_int(6)
        .add(&Interval::from_int(ctx, 31));
    let f2 = big_l.div(ctx, ctx.ln2()).add(&Interval::from_int(ctx, 1));
    let f3 = exp_interval(
        ctx,
        &ln7.mul(ctx, &big_l).mul_int(2).sqrt(ctx).mul_int(2).add(&Interval::from_int(ctx, 1)),
    );
    f1.mul(ctx, &f2).mul(ctx, &f3).mul_int(12348)
}

pub fn kappa_bound(data: &KnotData, variant: &KappaVariant, ctx: &Ctx) -> Result<KappaBound> {
    data.validate()?;
    match variant {
        KappaVariant::Easy => {
            if data.g2 < 2 {
                return Err(Error::HypothesisViolated("g2 must be at least 2".into()));
            }
            let coef = rat_u64(2 * data.m2 * data.m2 * data.delta) / rat_u64(data.g2 - 1);
            Ok(KappaBound::Easy(LogTerm { coef, log2_arg: 2 * data.g2 - 2 }))
        }
        KappaVariant::Hard { theta, q } => {
            let chi2_abs = data.chi2().unsigned_abs();
            if *theta < chi2_abs || *theta == 0 {
                return Err(Error::HypothesisViolated(format!(
                    "Theta = {theta} must be a positive integer >= |chi2| = {chi2_abs}"
                )));
            }
            let tau = tau_from_q(q)?;
            let phi = phi_tau(&tau, &rat_u64(*theta))?;
            let coef = rat_u64(36) * q * rat_u64(data.m2) * rat_u64(data.chi1().unsigned_abs())
                / (rat_u64(data.m1) * rat_u64(*theta));
            Ok(KappaBound::Hard { coef, phi, log2_arg: 2 * theta })
        }
        KappaVariant::Explicit => {
            let chi2_abs = data.chi2().unsigned_abs();
            if chi2_abs < 333 {
                return Err(Error::HypothesisViolated(format!("|chi2| = {chi2_abs} < 333")));
            }
            let coef = rat_u64(data.m2) * rat_u64(data.chi1().unsigned_abs())
                / (rat_u64(data.m1) * rat_u64(chi2_abs));
            let value = g_interval(ctx, chi2_abs).mul(ctx, &Interval::from_rational(ctx, &coef));
            Ok(KappaBound::Explicit { value, bits: ctx.prec })
        }
    }
}

// ---------------------------------------------------------------------------
// Exact rational-vs-log2 comparison
// ---------------------------------------------------------------------------

/// Compare a rational r against log2(a), exactly when a is a power of two,
/// otherwise by escalating directed precision (equality is then impossible).
pub fn cmp_rational_vs_log2(r: &BigRational, a: u64, base_ctx: &Ctx) -> Result<Ordering> {
    assert!(a >= 1);
    if a.is_power_of_two() {
        let k = rat_u64(a.trailing_zeros() as u64);
        return Ok(r.cmp(&k));
    }
    if !r.is_positive() {
        return Ok(Ordering::Less); // log2(a) > 0 since a >= 2 here
    }
    let mut prec = base_ctx.prec;
    for _ in 0..3 {
        let ctx = if prec == base_ctx.prec { base_ctx.clone() } else { Ctx::new(prec) };
        let lg = log2_rational(&ctx, &rat_u64(a));
        if let Some(ord) = lg.cmp_rational(&ctx, r) {
            return Ok(ord.reverse());
        }
        prec *= 2;
    }
    Err(Error::Inconclusive(format!("{r} vs log2({a})")))
}

// ---------------------------------------------------------------------------
// Theorem checkers
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum TheoremKind {
    Easy,
    Hard,
    ChiBound,
    /// Spanning-surface corollary: (g - 1)/(4 log2(2g - 2)) <= r^2.
    SpanningCorollary { g: u64, r: u64 },
}

pub fn theorem_check(
    data: &KnotData,
    which: &TheoremKind,
    ctx: &Ctx,
    chain_constant: &BigRational,
) -> Result<BoundReport> {
    data.validate()?;
    match which {
        TheoremKind::Easy => {
            if data.g2 < 2 {
                return Err(Error::HypothesisViolated("g2 must be at least 2".into()));
            }
            if data.delta == 0 {
                return Err(Error::HypothesisViolated("Delta must be nonzero".into()));
            }
            // (q1/Delta)^2 <= chain * 4 m2^2 log2(2g2-2)/(g2-1)
            let lhs = rat_u64(data.q1 * data.q1) / rat_u64(data.delta * data.delta);
            let coef = chain_constant * rat_u64(4 * data.m2 * data.m2) / rat_u64(data.g2 - 1);
            let reduced = &lhs / &coef;
            let ord = cmp_rational_vs_log2(&reduced, 2 * data.g2 - 2, ctx)?;
            let holds = ord != Ordering::Greater;
            let rhs_iv = Interval::from_rational(ctx, &coef)
                .mul(ctx, &log2_rational(ctx, &rat_u64(2 * data.g2 - 2)));
            let lhs_iv = Interval::from_rational(ctx, &lhs);
            Ok(BoundReport::directed(
                "easy-slope-genus",
                lhs.to_string(),
                rhs_iv.to_decimal(ctx, 30),
                holds,
                rhs_iv.sub(&lhs_iv).to_decimal(ctx, 30),
                ctx.prec,
            ))
        }
        TheoremKind::Hard => {
            let chi2_abs = data.chi2().unsigned_abs();
            if chi2_abs < 333 {
                return Err(Error::HypothesisViolated(format!("|chi2| = {chi2_abs} < 333")));
            }
            if data.delta == 0 {
                return Err(Error::HypothesisViolated("Delta must be nonzero".into()));
            }
            let lhs = rat_u64(data.q1 * data.q1) / rat_u64(data.delta);
            let bound = kappa_bound(data, &KappaVariant::Explicit, ctx)?;
            let rhs = bound
                .interval(ctx)
                .mul_int(2)
                .mul(ctx, &Interval::from_rational(ctx, chain_constant));
            let lhs_iv = Interval::from_rational(ctx, &lhs);
            let holds = lhs_iv.certified_le(&rhs) == Some(true);
            Ok(BoundReport::directed(
                "hard-slope-genus",
                lhs.to_string(),
                rhs.to_decimal(ctx, 30),
                holds,
                rhs.sub(&lhs_iv).to_decimal(ctx, 30),
                ctx.prec,
            ))
        }
        TheoremKind::ChiBound => {
            if data.delta == 0 {
                return Err(Error::HypothesisViolated("Delta must be nonzero".into()));
            }
            let rhs = rat_u64(data.m1 * data.m2 * data.delta) / rat_u64(2);
            let worst = data.chi1().unsigned_abs().max(data.chi2().unsigned_abs());
            let lhs = rat_u64(worst);
            Ok(BoundReport::exact("chi-bound", &lhs, &rhs, lhs <= rhs))
        }
        TheoremKind::SpanningCorollary { g, r } => {
            if *g < 2 {
                return Err(Error::HypothesisViolated("g must be at least 2".into()));
            }
            if *r == 0 {
                return Err(Error::HypothesisViolated("r must be nonzero".into()));
            }
            // (g-1)/(4 log2(2g-2)) <= r^2  <=>  (g-1)/(4 r^2) <= log2(2g-2)
            let reduced = rat_u64(g - 1) / rat_u64(4 * r * r);
            let ord = cmp_rational_vs_log2(&reduced, 2 * g - 2, ctx)?;
            let holds = ord != Ordering::Greater;
            let log_iv = log2_rational(ctx, &rat_u64(2 * g - 2));
            let lhs_iv = Interval::from_rational(ctx, &rat_u64(g - 1))
                .div(ctx, &log_iv.mul_int(4));
            let rhs = rat_u64(r * r);
            let rhs_iv = Interval::from_rational(ctx, &rhs);
            Ok(BoundReport::directed(
                "spanning-corollary",
                lhs_iv.to_decimal(ctx, 50),
                rhs.to_string(),
                holds,
                rhs_iv.sub(&lhs_iv).to_decimal(ctx, 50),
                ctx.prec,
            ))
        }
    }
}

/// Symbolic consistency: the easy kappa bound composed with the chain factor
/// 2 reproduces the easy theorem right-hand side coefficient exactly.
pub fn easy_constant_consistency(data: &KnotData) -> Result<bool> {
    if data.g2 < 2 || data.delta == 0 {
        return Err(Error::HypothesisViolated("need g2 >= 2 and Delta >= 1".into()));
    }
    let ctx = Ctx::new(64);
    let kappa = kappa_bound(data, &KappaVariant::Easy, &ctx)?;
    let KappaBound::Easy(term) = kappa else { unreachable!() };
    // q1^2/Delta <= 2 kappa  =>  (q1/Delta)^2 <= (2 coef / Delta) log2(arg)
    let derived_coef = rat_u64(2) * &term.coef / rat_u64(data.delta);
    let theorem_coef = rat_u64(4 * data.m2 * data.m2) / rat_u64(data.g2 - 1);
    Ok(derived_coef == theorem_coef && term.log2_arg == 2 * data.g2 - 2)
}

/// The formal step from the chi bound and a hard-style bound to an easy-style
/// bound: given |chi1| <= m1 m2 Delta / 2, the factor multiplying f1(|chi2|)
/// reduces from m2 |chi1| / (m1 Delta) to m2^2 / 2. Checked exactly.
pub fn qualitative_implication(data: &KnotData) -> Result<bool> {
    if data.delta == 0 {
        return Err(Error::HypothesisViolated("Delta must be nonzero".into()));
    }
    let chi1_abs = rat_u64(data.chi1().unsigned_abs());
    let chi_bound_holds = chi1_abs <= rat_u64(data.m1 * data.m2 * data.delta) / rat_u64(2);
    let lhs = rat_u64(data.m2) * &chi1_abs / (rat_u64(data.m1) * rat_u64(data.delta));
    let rhs = rat_u64(data.m2 * data.m2) / rat_u64(2);
    let implied = lhs <= rhs;
    // the two are equivalent; both directions must agree
    Ok(chi_bound_holds == implied)
}

/// Cross-check that the hard bound, instantiated with the chosen q at
/// Theta = |chi2|, never exceeds the explicit closed form.
pub fn hard_le_explicit(data: &KnotData, ctx: &Ctx) -> Result<bool> {
    let chi2_abs = data.chi2().unsigned_abs();
    if chi2_abs < 333 {
        return Err(Error::HypothesisViolated("|chi2| < 333".into()));
    }
    let chosen = choose_q_tau(&rat_u64(chi2_abs), ctx)?;
    if !chosen.cert_q_range.holds || !chosen.cert_ln_phi.holds {
        return Err(Error::ConstructionFailed("q/tau certificates failed".into()));
    }
    let hard = kappa_bound(
        data,
        &KappaVariant::Hard { theta: chi2_abs, q: chosen.q.clone() },
        ctx,
    )?;
    let explicit = kappa_bound(data, &KappaVariant::Explicit, ctx)?;
    Ok(hard.interval(ctx).certified_le(&explicit.interval(ctx)) == Some(true))
}

// ---------------------------------------------------------------------------
// Torus knots and qualitative decay
// ---------------------------------------------------------------------------

/// For coprime p, q >= 2: the annulus slope p q and the spanning genus
/// (p-1)(q-1)/2.
pub fn torus_knot_data(p: u64, q: u64) -> Result<(u64, u64)> {
    if p < 2 || q < 2 {
        return Err(Error::HypothesisViolated("p, q must be at least 2".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    Ok((p * q, (p - 1) * (q - 1) / 2))
}

#[derive(Clone, Copy, Debug)]
pub enum DecayFamily {
    /// f0(x) = 4 log2(2x - 2)/(x - 1)
    F0,
    /// f1(x) = 2 g(x)/x
    F1,
}

#[derive(Clone, Debug)]
pub struct DecayReport {
    pub family: &'static str,
    pub eps: BigRational,
    /// (x, certified decimal value of x^(1-eps) f(x)).
    pub samples: Vec<(u64, String)>,
    pub tail_decreasing: bool,
    pub last_below: Option<BigRational>,
    pub last_is_below: bool,
}

/// Evaluate x^(1-eps) f(x) along a doubling grid from `start` up to `limit`
/// and certify that the tail decreases (and optionally ends below a target).
pub fn qualitative_check(
    family: DecayFamily,
    eps: &BigRational,
    start: u64,
    limit: u64,
    below: Option<BigRational>,
    ctx: &Ctx,
) -> Result<DecayReport> {
    if !eps.is_positive() {
        return Err(Error::HypothesisViolated("eps must be positive".into()));
    }
    let mut xs = vec![];
    let mut x = start;
    while x <= limit {
        xs.push(x);
        match x.checked_mul(2) {
            Some(n) => x = n,
            None => break,
        }
    }
    let value = |x: u64| -> Interval {
        let fx = match family {
            DecayFamily::F0 => log2_rational(ctx, &rat_u64(2 * x - 2))
                .mul_int(4)
                .div(ctx, &Interval::from_int(ctx, (x - 1) as i64)),
            DecayFamily::F1 => g_interval(ctx, x)
                .mul_int(2)
                .div(ctx, &Interval::from_int(ctx, x as i64)),
        };
        // x^(1-eps) = exp((1-eps) ln x)
        let expo = Interval::from_rational(ctx, &(BigRational::one() - eps));
        let pow = exp_interval(ctx, &ln_rational(ctx, &rat_u64(x)).mul(ctx, &expo));
        fx.mul(ctx, &pow)
    };
    let vals: Vec<Interval> = xs.iter().map(|&x| value(x)).collect();
    let mut tail_decreasing = true;
    for w in vals.windows(2) {
        if w[1].certified_le(&w[0]) != Some(true) {
            tail_decreasing = false;
        }
    }
    let last_is_below = match (&below, vals.last()) {
        (Some(t), Some(v)) => v.cmp_rational(ctx, t) == Some(Ordering::Less),
        _ => true,
    };
    Ok(DecayReport {
        family: match family {
            DecayFamily::F0 => "f0",
            DecayFamily::F1 => "f1",
        },
        eps: eps.clone(),
        samples: xs
            .iter()
            .zip(&vals)
            .map(|(&x, v)| (x, v.to_decimal(ctx, 12)))
            .collect(),
        tail_decreasing,
        last_below: below,
        last_is_below,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn rat(s: &str) -> BigRational {
        BigRational::from_str(s).unwrap()
    }

    #[test]
    fn phi_at_one_is_tau4() {
        let tau = rat("13");
        let phi = phi_tau(&tau, &rat("1")).unwrap();
        assert_eq!(phi.m, 1);
        // value = 13^4 / 12
        assert_eq!(phi.cmp_rational(&(rat("28561") / rat("12"))), Ordering::Equal);
        assert!(phi.gt_rational(&rat("2380")));
        assert!(!phi.gt_rational(&rat("2381")));
    }

    #[test]
    fn phi_windowed_argmin_is_global() {
        // tau = 13 (q = 2), arg = 40: argmin within the certified window
        let tau = rat("13");
        let phi = phi_tau(&tau, &rat("40")).unwrap();
        for m in 1..=32u32 {
            assert!(
                phi_candidate_le(&tau, &rat("40"), phi.m, m),
                "candidate m = {m} beats the reported argmin"
            );
        }
    }

    #[test]
    fn phi_monotone_in_arg() {
        let tau = rat("10"); // q = 3
        let mut prev = phi_tau(&tau, &rat("1")).unwrap();
        for n in 2..=60u64 {
            let next = phi_tau(&tau, &rat_u64(n)).unwrap();
            assert!(prev.le(&next), "phi not monotone at n = {n}");
            prev = next;
        }
    }

    #[test]
    fn phi_interval_encloses_exact_rational_case() {
        let ctx = Ctx::with_digits(30);
        let tau = rat("13");
        let phi = phi_tau(&tau, &rat("1")).unwrap();
        let iv = phi.interval(&ctx);
        assert_eq!(iv.cmp_rational(&ctx, &(rat("28561") / rat("12"))), None);
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau_from_q(&rat("2")).unwrap(), rat("13"));
        assert_eq!(tau_from_q(&rat("3")).unwrap(), rat("10"));
        assert!(tau_from_q(&rat("1")).is_err());
    }

    #[test]
    fn choose_q_small_values() {
        let ctx = Ctx::with_digits(50);
        let chosen = choose_q_tau(&rat("2"), &ctx).unwrap();
        assert_eq!(chosen.mu, 1);
        assert_eq!(chosen.q, rat("31/7"));
        assert!(chosen.cert_q_range.holds);
        assert!(chosen.cert_ln_phi.holds);

        let chosen = choose_q_tau(&rat("333"), &ctx).unwrap();
        assert!(chosen.cert_q_range.holds);
        assert!(chosen.cert_ln_phi.holds);
    }

    #[test]
    fn f_sign_facts() {
        let ctx = Ctx::with_digits(50);
        // f(334) < f(333)
        assert_eq!(f_step_holds(&ctx, 333), Some(true));
        let f333 = f_interval(&ctx, 333);
        let f334 = f_interval(&ctx, 334);
        assert_eq!(f334.certified_lt(&f333), Some(true));
        // x f'(x): positive at 333, negative at 334
        let d333 = xfprime_interval(&ctx, 333);
        let d334 = xfprime_interval(&ctx, 334);
        assert!(d333.is_positive());
        assert!(d334.hi.is_negative());
    }

    #[test]
    fn easy_kappa_example() {
        // m2 = 1, Delta = 2, g2 = 4 -> (4/3) log2(6)
        let data = KnotData { g1: 1, g2: 4, m1: 1, m2: 1, q1: 1, delta: 2 };
        let ctx = Ctx::with_digits(30);
        let bound = kappa_bound(&data, &KappaVariant::Easy, &ctx).unwrap();
        let KappaBound::Easy(term) = &bound else { panic!() };
        assert_eq!(term.coef, rat("4/3"));
        assert_eq!(term.log2_arg, 6);
        assert!(easy_constant_consistency(&data).unwrap());
    }

    #[test]
    fn explicit_needs_333() {
        let data = KnotData { g1: 2, g2: 166, m1: 1, m2: 2, q1: 3, delta: 2 };
        // |chi2| = 2*166 + 2 - 2 = 332
        assert_eq!(data.chi2().unsigned_abs(), 332);
        let ctx = Ctx::with_digits(30);
        assert!(matches!(
            kappa_bound(&data, &KappaVariant::Explicit, &ctx),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn hard_vs_explicit_once() {
        let data = KnotData { g1: 3, g2: 170, m1: 2, m2: 1, q1: 5, delta: 3 };
        assert!(data.chi2().unsigned_abs() >= 333);
        let ctx = Ctx::with_digits(50);
        assert!(hard_le_explicit(&data, &ctx).unwrap());
    }

    #[test]
    fn torus_knots() {
        assert_eq!(torus_knot_data(2, 3).unwrap(), (6, 1));
        assert_eq!(torus_knot_data(3, 5).unwrap(), (15, 4));
        assert!(matches!(torus_knot_data(2, 4), Err(Error::NotCoprime(2, 4))));
    }

    #[test]
    fn spanning_corollary_trefoil_family() {
        let ctx = Ctx::with_digits(50);
        let data = KnotData { g1: 0, g2: 4, m1: 1, m2: 1, q1: 1, delta: 15 };
        let rep = theorem_check(
            &data,
            &TheoremKind::SpanningCorollary { g: 4, r: 15 },
            &ctx,
            &rat("1"),
        )
        .unwrap();
        assert!(rep.holds);
    }

    #[test]
    fn chi_bound_equality_case() {
        // chi = -m1 m2 Delta / 2 exactly: margin 0
        let data = KnotData { g1: 2, g2: 1, m1: 2, m2: 2, q1: 1, delta: 3 };
        // chi1 = 2 - 4 - 2 = -4; m1 m2 Delta/2 = 6 -> holds, not equality
        let ctx = Ctx::with_digits(20);
        let rep = theorem_check(&data, &TheoremKind::ChiBound, &ctx, &rat("1")).unwrap();
        assert!(rep.holds);
        let eq_data = KnotData { g1: 2, g2: 0, m1: 2, m2: 2, q1: 1, delta: 2 };
        // chi1 = -4, m1 m2 Delta / 2 = 4: equality
        let rep = theorem_check(&eq_data, &TheoremKind::ChiBound, &ctx, &rat("1")).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.margin, "0");
    }

    #[test]
    fn qualitative_f0_decay() {
        let ctx = Ctx::with_digits(30);
        let rep = qualitative_check(
            DecayFamily::F0,
            &rat("1/2"),
            8,
            1_000_000_000_000,
            Some(rat("1/1000")),
            &ctx,
        )
        .unwrap();
        assert!(rep.tail_decreasing);
        assert!(rep.last_is_below);
    }

    #[test]
    fn qualitative_implication_exact() {
        let data = KnotData { g1: 2, g2: 3, m1: 1, m2: 2, q1: 3, delta: 4 };
        assert!(qualitative_implication(&data).unwrap());
    }

    #[test]
    fn qualitative_f1_decay_tail() {
        // f1 itself decays from small x on; x^(1-eps) f1 for eps < 1 turns
        // over only near x ~ e^67, far beyond any u64 grid
        let ctx = Ctx::with_digits(30);
        let rep = qualitative_check(DecayFamily::F1, &rat("1"), 1 << 10, 1 << 34, None, &ctx)
            .unwrap();
        assert!(rep.tail_decreasing, "samples: {:?}", rep.samples);
    }
}
