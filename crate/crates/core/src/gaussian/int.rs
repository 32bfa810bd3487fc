//! Gaussian integers: Z[i] with arbitrary-precision components.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element of Z[i].
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GaussianInteger {
    re: BigInt,
    im: BigInt,
}

impl GaussianInteger {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInteger {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInteger::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInteger::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInteger::new(0, 1)
    }

    /// The four units of Z[i]: 1, -1, i, -i.
    pub fn units() -> [GaussianInteger; 4] {
        [
            GaussianInteger::new(1, 0),
            GaussianInteger::new(-1, 0),
            GaussianInteger::new(0, 1),
            GaussianInteger::new(0, -1),
        ]
    }

    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInteger {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Field norm re^2 + im^2 (a nonnegative rational integer).
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Inverse of a unit. Errors for non-units.
    pub fn unit_inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::MalformedInput(format!("{self} is not a unit")));
        }
        Ok(self.conj())
    }

    /// Exact division; errors unless `rhs` divides `self` in Z[i].
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = rhs.norm();
        let t = self * &rhs.conj();
        let (qr, rr) = t.re.div_rem(&n);
        let (qi, ri) = t.im.div_rem(&n);
        if !rr.is_zero() || !ri.is_zero() {
            return Err(Error::MalformedInput(format!("{rhs} does not divide {self}")));
        }
        Ok(GaussianInteger { re: qr, im: qi })
    }

    /// Nearest-integer quotient: rounds each coordinate of self/rhs.
    pub fn div_round(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = rhs.norm();
        let t = self * &rhs.conj();
        Ok(GaussianInteger {
            re: round_div(&t.re, &n),
            im: round_div(&t.im, &n),
        })
    }

    /// Euclidean gcd, normalized so the result has argument in [0, pi/2)
    /// (first nonzero with re > 0, im >= 0); gcd(0, 0) = 0.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let q = a.div_round(&b).expect("b nonzero");
            let r = &a - &(&q * &b);
            a = b;
            b = r;
        }
        a.canonical_associate()
    }

    /// The unique associate with re > 0 and im >= 0 (zero maps to zero).
    pub fn canonical_associate(&self) -> Self {
        self.clone() * &self.canonicalizing_unit()
    }

    /// The unit u such that self * u is the canonical associate.
    pub fn canonicalizing_unit(&self) -> GaussianInteger {
        if self.is_zero() {
            return GaussianInteger::one();
        }
        for u in GaussianInteger::units() {
            let c = self * &u;
            if c.re.is_positive() && !c.im.is_negative() {
                return u;
            }
        }
        unreachable!("one associate always lands in the closed-open quadrant")
    }

    /// Lexicographic order on (re, im); used for deterministic tie-breaking.
    pub fn lex_cmp(&self, rhs: &Self) -> Ordering {
        self.re.cmp(&rhs.re).then_with(|| self.im.cmp(&rhs.im))
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussianInteger::new(re, im)
    }
}

/// Rounds x/n to the nearest integer (half away from zero), n > 0.
fn round_div(x: &BigInt, n: &BigInt) -> BigInt {
    debug_assert!(n.is_positive());
    let two_x: BigInt = x * 2;
    let two_n: BigInt = n * 2;
    if x.is_negative() {
        -((-two_x + n) / two_n)
    } else {
        (two_x + n) / two_n
    }
}

impl Add for &GaussianInteger {
    type Output = GaussianInteger;
    fn add(self, rhs: Self) -> GaussianInteger {
        GaussianInteger {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussianInteger {
    type Output = GaussianInteger;
    fn sub(self, rhs: Self) -> GaussianInteger {
        GaussianInteger {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, rhs: Self) -> GaussianInteger {
        GaussianInteger {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul<&GaussianInteger> for GaussianInteger {
    type Output = GaussianInteger;
    fn mul(self, rhs: &GaussianInteger) -> GaussianInteger {
        &self * rhs
    }
}

impl Neg for &GaussianInteger {
    type Output = GaussianInteger;
    fn neg(self) -> GaussianInteger {
        GaussianInteger {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

impl Neg for GaussianInteger {
    type Output = GaussianInteger;
    fn neg(self) -> GaussianInteger {
        GaussianInteger {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Text form `a+bi`: both parts printed when both nonzero, the imaginary
/// coefficient always carries an explicit digit string (`1i`, `-1i`).
impl fmt::Display for GaussianInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, self.im.magnitude())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl FromStr for GaussianInteger {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_complex(s.trim())
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, with `i` and `-i` accepted for `1i`/`-1i`.
pub(crate) fn parse_complex(s: &str) -> Result<GaussianInteger> {
    let bad = || Error::MalformedInput(format!("invalid Gaussian integer: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    // Split into at most two signed terms.
    let bytes = s.as_bytes();
    let mut split = None;
    for (k, &b) in bytes.iter().enumerate().skip(1) {
        if b == b'+' || b == b'-' {
            if split.is_some() {
                return Err(bad());
            }
            split = Some(k);
        }
    }
    let (first, second) = match split {
        Some(k) => (&s[..k], Some(&s[k..])),
        None => (s, None),
    };
    let parse_term = |t: &str| -> Result<(BigInt, bool)> {
        let t = t.trim();
        let (imag, digits) = match t.strip_suffix(['i', 'I']) {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let digits = digits.trim();
        let v = if imag && (digits.is_empty() || digits == "+" || digits == "-") {
            // bare `i`, `+i`, `-i`
            if digits == "-" {
                BigInt::from(-1)
            } else {
                BigInt::one()
            }
        } else {
            BigInt::from_str(digits).map_err(|_| bad())?
        };
        Ok((v, imag))
    };
    let (v1, i1) = parse_term(first)?;
    match second {
        None => {
            if i1 {
                Ok(GaussianInteger::new(0, v1))
            } else {
                Ok(GaussianInteger::new(v1, 0))
            }
        }
        Some(t) => {
            let (v2, i2) = parse_term(t)?;
            match (i1, i2) {
                (false, true) => Ok(GaussianInteger { re: v1, im: v2 }),
                (true, false) => Ok(GaussianInteger { re: v2, im: v1 }),
                _ => Err(bad()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi(re: i64, im: i64) -> GaussianInteger {
        GaussianInteger::from_i64(re, im)
    }

    #[test]
    fn product_of_conjugates_is_norm() {
        // (1+i)(1-i) = 2
        assert_eq!(&gi(1, 1) * &gi(1, -1), gi(2, 0));
    }

    #[test]
    fn conjugation() {
        assert_eq!(gi(3, -2).conj(), gi(3, 2));
    }

    #[test]
    fn norm_by_hand() {
        // 2^2 + 1^2 = 5
        assert_eq!(gi(2, 1).norm(), BigInt::from(5));
    }

    #[test]
    fn units_are_exactly_norm_one() {
        for re in -2i64..=2 {
            for im in -2i64..=2 {
                let z = gi(re, im);
                let expected = matches!((re, im), (1, 0) | (-1, 0) | (0, 1) | (0, -1));
                assert_eq!(z.is_unit(), expected, "{z}");
            }
        }
    }

    #[test]
    fn schoolbook_oracle_equivalence() {
        // Oracle: component formulas written out independently.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 2001) as i64 - 1000
        };
        for _ in 0..1000 {
            let (a, b, c, d) = (next(), next(), next(), next());
            let x = gi(a, b);
            let y = gi(c, d);
            assert_eq!(&x + &y, gi(a + c, b + d));
            assert_eq!(&x - &y, gi(a - c, b - d));
            assert_eq!(&x * &y, gi(a * c - b * d, a * d + b * c));
            assert_eq!(x.conj(), gi(a, -b));
            assert_eq!(x.norm(), BigInt::from(a * a + b * b));
        }
    }

    #[test]
    fn gcd_and_exact_division() {
        let a = &gi(3, 1) * &gi(2, 7);
        let b = &gi(3, 1) * &gi(1, -4);
        let g = a.gcd(&b);
        assert!(a.div_exact(&g).is_ok());
        assert!(b.div_exact(&g).is_ok());
        // gcd is an associate of 3+i; canonical associate has re>0, im>=0
        assert_eq!(g.norm(), BigInt::from(10));
        assert!(g.re().is_positive() && !g.im().is_negative());
    }

    #[test]
    fn rounding_division() {
        // (7+i)/(2) rounds to 4+1i? 7/2 = 3.5 -> half away from zero -> 4; 1/2 -> 1
        assert_eq!(gi(7, 1).div_round(&gi(2, 0)).unwrap(), gi(4, 1));
        assert_eq!(gi(-7, -1).div_round(&gi(2, 0)).unwrap(), gi(-4, -1));
    }

    #[test]
    fn display_parse_roundtrip() {
        for z in [
            gi(0, 0),
            gi(5, 0),
            gi(0, 3),
            gi(-2, 3),
            gi(1, -1),
            gi(-7, -9),
            gi(0, -1),
        ] {
            let s = z.to_string();
            let back: GaussianInteger = s.parse().unwrap();
            assert_eq!(back, z, "{s}");
        }
        assert_eq!("i".parse::<GaussianInteger>().unwrap(), gi(0, 1));
        assert_eq!("-i".parse::<GaussianInteger>().unwrap(), gi(0, -1));
        assert_eq!("3-2i".parse::<GaussianInteger>().unwrap(), gi(3, -2));
    }
}
