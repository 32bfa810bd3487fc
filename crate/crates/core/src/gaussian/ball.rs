//! Certified complex ball arithmetic over dyadic midpoints.
//!
//! A [`Dyadic`] is an exact value m * 2^e. A [`ComplexBall`] is a dyadic
//! midpoint plus a nonnegative dyadic radius; every operation returns a ball
//! that contains the exact result of the enclosed inputs. Midpoints are
//! rounded to the working precision after each operation and the rounding
//! error is folded into the radius, so mantissas never grow past the
//! precision. Precision is a per-value parameter, never global state.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::rat::GaussianRational;
use super::real::Rat;

/// Mantissa bits kept for radii; radii only ever need an upper bound.
const RADIUS_BITS: u32 = 32;

/// Exact dyadic number m * 2^e, normalized so m is odd or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: 0,
        }
    }

    pub fn pow2(exp: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp,
        }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Dyadic { mant: n, exp: 0 }.normalized()
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    fn normalized(mut self) -> Self {
        match self.mant.trailing_zeros() {
            None => Dyadic::zero(),
            Some(0) => self,
            Some(k) => {
                self.mant >>= k;
                self.exp += k as i64;
                self
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &rhs.mant << (rhs.exp - e) as u64;
        Dyadic { mant: a + b, exp: e }.normalized()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
        .normalized()
    }

    /// Rounds to `p` mantissa bits (half away from zero); returns the result
    /// and an upper bound on the absolute rounding error.
    pub fn round(&self, p: u32) -> (Dyadic, Dyadic) {
        let bits = self.bits();
        if bits <= p as u64 {
            return (self.clone(), Dyadic::zero());
        }
        let k = bits - p as u64;
        let (sign, mag) = (self.mant.sign(), self.mant.magnitude());
        let half = BigInt::one() << (k - 1);
        let rounded = (BigInt::from(mag.clone()) + half) >> k;
        let mant = match sign {
            Sign::Minus => -rounded,
            _ => rounded,
        };
        let err = Dyadic::pow2(self.exp + k as i64 - 1);
        (
            Dyadic {
                mant,
                exp: self.exp + k as i64,
            }
            .normalized(),
            err,
        )
    }

    /// Rounds a nonnegative value up to `RADIUS_BITS` mantissa bits.
    fn round_up_radius(&self) -> Dyadic {
        debug_assert!(!self.is_negative());
        let bits = self.bits();
        if bits <= RADIUS_BITS as u64 {
            return self.clone();
        }
        let k = bits - RADIUS_BITS as u64;
        let mag = (self.mant.magnitude() >> k) + 1u32;
        Dyadic {
            mant: BigInt::from(mag),
            exp: self.exp + k as i64,
        }
        .normalized()
    }

    /// Quotient self/rhs rounded to about `p` significant bits, with an
    /// upper bound on the absolute error. `rhs` must be nonzero.
    pub fn div(&self, rhs: &Self, p: u32) -> Result<(Dyadic, Dyadic)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok((Dyadic::zero(), Dyadic::zero()));
        }
        let t = (p as u64 + 2 + rhs.bits()).saturating_sub(self.bits());
        let num = &self.mant << t;
        let q = round_div_int(&num, &rhs.mant);
        let exp = self.exp - rhs.exp - t as i64;
        let err = if &q * &rhs.mant == num {
            Dyadic::zero()
        } else {
            Dyadic::pow2(exp - 1)
        };
        Ok((Dyadic { mant: q, exp }.normalized(), err))
    }

    /// Largest dyadic s (at roughly `p` bits) with s^2 <= self.
    pub fn sqrt_lower(&self, p: u32) -> Dyadic {
        self.sqrt_bound(p, false)
    }

    /// Smallest bound s with s^2 >= self.
    pub fn sqrt_upper(&self, p: u32) -> Dyadic {
        self.sqrt_bound(p, true)
    }

    fn sqrt_bound(&self, p: u32, upper: bool) -> Dyadic {
        assert!(!self.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // Shift so the exponent is even and the mantissa has >= 2p bits.
        let want = (2 * p as u64 + 2).saturating_sub(self.bits());
        let mut t = want as i64;
        if (self.exp - t) % 2 != 0 {
            t += 1;
        }
        let m = &self.mant << t as u64;
        let s = m.sqrt(); // floor sqrt
        let e = (self.exp - t) / 2;
        let mant = if upper && &s * &s != m { s + 1u32 } else { s };
        Dyadic { mant, exp: e }.normalized()
    }

    pub fn cmp(&self, rhs: &Self) -> Ordering {
        match (self.is_negative(), rhs.is_negative()) {
            (false, true) => return Ordering::Greater,
            (true, false) => return Ordering::Less,
            _ => {}
        }
        let d = self.sub(rhs);
        if d.is_zero() {
            Ordering::Equal
        } else if d.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    /// Nearest integer (half away from zero is irrelevant here: exact
    /// halves round up).
    pub fn to_nearest_bigint(&self) -> BigInt {
        let shifted = self.add(&Dyadic::pow2(-1)).to_rat();
        let q = shifted.num() / shifted.den();
        let back: BigInt = &q * shifted.den();
        if shifted.num() < &back {
            q - 1
        } else {
            q
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        // m 2^e  vs  p/q  <=>  m 2^e q vs p
        let (lhs, rhs) = if self.exp >= 0 {
            ((&self.mant << self.exp as u64) * r.den(), r.num().clone())
        } else {
            (&self.mant * r.den(), r.num() << (-self.exp) as u64)
        };
        lhs.cmp(&rhs)
    }

    pub fn to_rat(&self) -> Rat {
        if self.exp >= 0 {
            Rat::reduced(&self.mant << self.exp as u64, BigInt::one())
        } else {
            Rat::reduced(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }

    pub fn max(&self, rhs: &Self) -> Self {
        if self.cmp(rhs) == Ordering::Less {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    /// Exact decimal representation.
    pub fn to_decimal_string(&self) -> String {
        if self.exp >= 0 {
            return (&self.mant << self.exp as u64).to_string();
        }
        let k = (-self.exp) as u32;
        let scaled: BigInt = &self.mant * BigInt::from(5u32).pow(k);
        let neg = scaled.is_negative();
        let digits = scaled.magnitude().to_string();
        let k = k as usize;
        let body = if digits.len() > k {
            format!("{}.{}", &digits[..digits.len() - k], &digits[digits.len() - k..])
        } else {
            format!("0.{}{}", "0".repeat(k - digits.len()), digits)
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Decimal string truncated to `sig` significant digits.
    pub fn to_decimal_approx(&self, sig: usize) -> String {
        let full = self.to_decimal_string();
        let (sign, body) = match full.strip_prefix('-') {
            Some(b) => ("-", b),
            None => ("", full.as_str()),
        };
        let mut count = 0usize;
        let mut cut = body.len();
        let mut seen_nonzero = false;
        for (k, ch) in body.char_indices() {
            if ch == '.' {
                continue;
            }
            if ch != '0' {
                seen_nonzero = true;
            }
            if seen_nonzero {
                count += 1;
            }
            if count == sig {
                cut = k + 1;
                break;
            }
        }
        let mut out = body[..cut].to_string();
        // pad out the integer part if it was truncated before the point
        if let Some(dot) = body.find('.') {
            if cut < dot {
                out.push_str(&"0".repeat(dot - cut));
            }
        }
        format!("{sign}{out}")
    }
}

/// Nearest-integer division (half away from zero); n may be negative.
fn round_div_int(x: &BigInt, n: &BigInt) -> BigInt {
    let (x, n) = if n.is_negative() {
        (-x, -n)
    } else {
        (x.clone(), n.clone())
    };
    let two_x: BigInt = &x * 2;
    let two_n: BigInt = &n * 2;
    if x.is_negative() {
        -((-two_x + &n) / two_n)
    } else {
        (two_x + &n) / two_n
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal_approx(24))
    }
}

/// A real interval [lo, hi] with exact dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealBall {
    lo: Dyadic,
    hi: Dyadic,
}

impl RealBall {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo.cmp(&hi) != Ordering::Greater);
        RealBall { lo, hi }
    }

    pub fn exact(v: Dyadic) -> Self {
        RealBall {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RealBall {
            lo: self.lo.add(&rhs.lo),
            hi: self.hi.add(&rhs.hi),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        RealBall {
            lo: self.lo.sub(&rhs.hi),
            hi: self.hi.sub(&rhs.lo),
        }
    }

    /// Certified comparison; `None` when the intervals overlap.
    pub fn cmp_interval(&self, rhs: &Self) -> Option<Ordering> {
        if self.hi.cmp(&rhs.lo) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.cmp(&rhs.hi) == Ordering::Greater {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Certified comparison against an exact rational.
    pub fn cmp_rat(&self, r: &Rat) -> Option<Ordering> {
        if self.hi.cmp_rat(r) == Ordering::Less {
            Some(Ordering::Less)
        } else if self.lo.cmp_rat(r) == Ordering::Greater {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn contains_rat(&self, r: &Rat) -> bool {
        self.lo.cmp_rat(r) != Ordering::Greater && self.hi.cmp_rat(r) != Ordering::Less
    }

    /// Interval square root; requires a nonnegative lower bound.
    pub fn sqrt(&self, p: u32) -> Self {
        let lo = if self.lo.is_negative() {
            Dyadic::zero()
        } else {
            self.lo.sqrt_lower(p)
        };
        RealBall {
            lo,
            hi: self.hi.sqrt_upper(p),
        }
    }
}

/// A complex ball: dyadic midpoint, nonnegative dyadic radius, and the
/// working precision in bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexBall {
    re: Dyadic,
    im: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl ComplexBall {
    pub fn new(re: Dyadic, im: Dyadic, rad: Dyadic, prec: u32) -> Self {
        debug_assert!(!rad.is_negative());
        ComplexBall { re, im, rad, prec }
    }

    pub fn exact_zero(prec: u32) -> Self {
        ComplexBall::new(Dyadic::zero(), Dyadic::zero(), Dyadic::zero(), prec)
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Encloses an exact Gaussian rational at `prec` bits. The radius is
    /// bounded by 2^(1-prec) * (1 + |x|).
    pub fn from_rational(x: &GaussianRational, prec: u32) -> Self {
        let prec = prec.max(2);
        let den = Dyadic::from_bigint(x.den().clone());
        let (re, e1) = Dyadic::from_bigint(x.num().re().clone())
            .div(&den, prec)
            .expect("den > 0");
        let (im, e2) = Dyadic::from_bigint(x.num().im().clone())
            .div(&den, prec)
            .expect("den > 0");
        ComplexBall::new(re, im, e1.add(&e2).round_up_radius(), prec)
    }

    pub fn from_dyadic(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        ComplexBall::new(re, im, Dyadic::zero(), prec)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn neg(&self) -> Self {
        ComplexBall::new(self.re.neg(), self.im.neg(), self.rad.clone(), self.prec)
    }

    pub fn conj(&self) -> Self {
        ComplexBall::new(self.re.clone(), self.im.neg(), self.rad.clone(), self.prec)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        let (re, e1) = self.re.add(&rhs.re).round(p);
        let (im, e2) = self.im.add(&rhs.im).round(p);
        let rad = self
            .rad
            .add(&rhs.rad)
            .add(&e1)
            .add(&e2)
            .round_up_radius();
        ComplexBall::new(re, im, rad, p)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Upper bound for the midpoint magnitude (|re| + |im|).
    fn mid_mag_upper(&self) -> Dyadic {
        self.re.abs().add(&self.im.abs())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec.max(rhs.prec);
        let re = self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im));
        let im = self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re));
        let (re, e1) = re.round(p);
        let (im, e2) = im.round(p);
        let cross = self
            .mid_mag_upper()
            .mul(&rhs.rad)
            .add(&rhs.mid_mag_upper().mul(&self.rad))
            .add(&self.rad.mul(&rhs.rad));
        let rad = cross.add(&e1).add(&e2).round_up_radius();
        ComplexBall::new(re, im, rad, p)
    }

    /// |z|^2 of the midpoint, exactly.
    fn mid_norm_sq(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    /// True when the ball provably contains zero (|mid| <= rad, decided
    /// exactly on dyadics). The negation certifies the enclosed value is
    /// nonzero.
    pub fn contains_zero(&self) -> bool {
        self.mid_norm_sq().cmp(&self.rad.mul(&self.rad)) != Ordering::Greater
    }

    /// Lower bound for |z| over the ball.
    pub fn mag_lower(&self) -> Dyadic {
        let m = self.re.abs().max(&self.im.abs());
        let d = m.sub(&self.rad);
        if d.is_negative() {
            Dyadic::zero()
        } else {
            d
        }
    }

    /// Upper bound for |z| over the ball.
    pub fn mag_upper(&self) -> Dyadic {
        self.mid_mag_upper().add(&self.rad)
    }

    pub fn recip(&self) -> Result<Self> {
        let p = self.prec;
        let low = self.mag_lower();
        if low.is_zero() {
            return Err(Error::Indeterminate(
                "reciprocal of a ball that may contain zero".into(),
            ));
        }
        let nsq = self.mid_norm_sq();
        let (re, e1) = self.re.div(&nsq, p)?;
        let (im, e2) = self.im.neg().div(&nsq, p)?;
        // |1/z - 1/m| <= rad / (|z| |m|) <= rad / (low * mid_low)
        let mid_low = self.re.abs().max(&self.im.abs());
        let (q, eq) = self.rad.div(&low.mul(&mid_low), RADIUS_BITS)?;
        let rad = q.add(&eq).add(&e1).add(&e2).round_up_radius();
        Ok(ComplexBall::new(re, im, rad, p))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn mul_rational(&self, k: &GaussianRational) -> Self {
        self.mul(&ComplexBall::from_rational(k, self.prec))
    }

    /// Certified enclosure of |z|^2.
    pub fn abs_sq(&self) -> RealBall {
        let d = self.mid_norm_sq();
        if self.rad.is_zero() {
            return RealBall::exact(d);
        }
        let u = d.sqrt_upper(RADIUS_BITS);
        let spread = u.mul(&self.rad).add(&u.mul(&self.rad)).add(&self.rad.mul(&self.rad));
        let lo = d.sub(&spread);
        let lo = if lo.is_negative() { Dyadic::zero() } else { lo };
        RealBall::new(lo, d.add(&spread))
    }

    /// Certified enclosure of |z|.
    pub fn abs(&self) -> RealBall {
        self.abs_sq().sqrt(self.prec)
    }

    /// Certified enclosure of the real part.
    pub fn re_ball(&self) -> RealBall {
        RealBall::new(self.re.sub(&self.rad), self.re.add(&self.rad))
    }

    /// Certified enclosure of the imaginary part.
    pub fn im_ball(&self) -> RealBall {
        RealBall::new(self.im.sub(&self.rad), self.im.add(&self.rad))
    }

    /// True when the exact rational provably lies inside the ball
    /// (sufficient condition; uses the conservative componentwise bound).
    pub fn contains_rational(&self, x: &GaussianRational) -> bool {
        // |x - mid| <= |dre| + |dim| <= rad suffices.
        let dre = &x.re() - &self.re.to_rat();
        let dim = &x.im() - &self.im.to_rat();
        let sum = &dre.abs() + &dim.abs();
        self.rad.cmp_rat(&sum) != Ordering::Less
    }
}

impl fmt::Display for ComplexBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} + {}i ± {})",
            self.re.to_decimal_approx(12),
            self.im.to_decimal_approx(12),
            self.rad.to_decimal_approx(3)
        )
    }
}
