//! Gaussian rationals: Q(i) in the canonical form (a+bi)/d with d > 0 a
//! rational integer and gcd(gcd(a, b), d) = 1.
//!
//! Keeping the denominator rational (by conjugate-multiplication) gives a
//! unique representation, so equality and hashing are cheap.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::int::{parse_complex, GaussianInteger};
use super::real::Rat;

/// An element of Q(i).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    num: GaussianInteger,
    den: BigInt,
}

impl GaussianRational {
    pub fn new(num: GaussianInteger, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(mut num: GaussianInteger, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return GaussianRational {
                num,
                den: BigInt::one(),
            };
        }
        let g = num.re().gcd(num.im()).gcd(&den);
        if !g.is_one() {
            num = GaussianInteger::new(num.re() / &g, num.im() / &g);
            den /= g;
        }
        GaussianRational { num, den }
    }

    pub fn from_integer(z: GaussianInteger) -> Self {
        GaussianRational {
            num: z,
            den: BigInt::one(),
        }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        Self::from_integer(GaussianInteger::from_i64(re, im))
    }

    pub fn from_rat_pair(re: &Rat, im: &Rat) -> Self {
        let den = re.den().lcm(im.den());
        let a = re.num() * (&den / re.den());
        let b = im.num() * (&den / im.den());
        Self::reduced(GaussianInteger::new(a, b), den)
    }

    pub fn zero() -> Self {
        Self::from_i64(0, 0)
    }

    pub fn one() -> Self {
        Self::from_i64(1, 0)
    }

    pub fn i() -> Self {
        Self::from_i64(0, 1)
    }

    pub fn num(&self) -> &GaussianInteger {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn re(&self) -> Rat {
        Rat::reduced(self.num.re().clone(), self.den.clone())
    }

    pub fn im(&self) -> Rat {
        Rat::reduced(self.num.im().clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            num: self.num.conj(),
            den: self.den.clone(),
        }
    }

    /// |z|^2 as an exact nonnegative rational.
    pub fn norm_sq(&self) -> Rat {
        Rat::reduced(self.num.norm(), &self.den * &self.den)
    }

    /// As a Gaussian integer, when the denominator is 1.
    pub fn to_integer(&self) -> Option<GaussianInteger> {
        self.den.is_one().then(|| self.num.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1 / (n/d) = d * conj(n) / norm(n)
        let conj = self.num.conj();
        Ok(Self::reduced(
            GaussianInteger::new(conj.re() * &self.den, conj.im() * &self.den),
            self.num.norm(),
        ))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn mul_integer(&self, z: &GaussianInteger) -> Self {
        Self::reduced(&self.num * z, self.den.clone())
    }

    pub fn add_integer(&self, z: &GaussianInteger) -> Self {
        Self::reduced(
            &self.num + &GaussianInteger::new(z.re() * &self.den, z.im() * &self.den),
            self.den.clone(),
        )
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: Self) -> GaussianRational {
        let a = GaussianInteger::new(
            self.num.re() * &rhs.den + rhs.num.re() * &self.den,
            self.num.im() * &rhs.den + rhs.num.im() * &self.den,
        );
        GaussianRational::reduced(a, &self.den * &rhs.den)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: Self) -> GaussianRational {
        self + &(-rhs)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: Self) -> GaussianRational {
        GaussianRational::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            num: -self.num,
            den: self.den,
        }
    }
}

/// Text form: `a+bi` when the denominator is 1, `(a+bi)/d` otherwise.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedInput(format!("invalid Gaussian rational: {s:?}"));
        // `(complex)/den`, `complex/den`, or plain `complex`
        if let Some(k) = s.rfind('/') {
            let num_part = s[..k].trim();
            let den_part = s[k + 1..].trim();
            let den = BigInt::from_str(den_part).map_err(|_| bad())?;
            let inner = num_part
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .unwrap_or(num_part);
            let num = parse_complex(inner.trim())?;
            GaussianRational::new(num, den)
        } else {
            Ok(GaussianRational::from_integer(parse_complex(s)?))
        }
    }
}
