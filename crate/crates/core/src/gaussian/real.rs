//! Real rationals, used for norms, squared distances, and tolerances.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A rational number num/den in lowest terms with den > 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rat {
    num: BigInt,
    den: BigInt,
}

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let num = num.into();
        let den = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    pub(crate) fn reduced(mut num: BigInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Rat {
                num,
                den: BigInt::one(),
            };
        }
        let g = num.gcd(&den);
        Rat {
            num: num / &g,
            den: den / g,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rat {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Rat::from_int(0)
    }

    pub fn one() -> Self {
        Rat::from_int(1)
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat::reduced(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn abs(&self) -> Self {
        Rat {
            num: self.num.abs(),
            den: self.den.clone(),
        }
    }

    pub fn square(&self) -> Self {
        Rat {
            num: &self.num * &self.num,
            den: &self.den * &self.den,
        }
    }

    /// 10^-k, handy for decimal tolerances.
    pub fn pow10_neg(k: u32) -> Self {
        Rat::reduced(BigInt::one(), BigInt::from(10u32).pow(k))
    }
}

impl Add for &Rat {
    type Output = Rat;
    fn add(self, rhs: Self) -> Rat {
        Rat::reduced(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &Rat {
    type Output = Rat;
    fn sub(self, rhs: Self) -> Rat {
        Rat::reduced(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &Rat {
    type Output = Rat;
    fn mul(self, rhs: Self) -> Rat {
        Rat::reduced(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Accepts `p`, `p/q`, and decimal strings like `0.00000001` or `-1.25e-3`.
impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::MalformedInput(format!("invalid rational: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let num = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            return Rat::new(num, den);
        }
        // decimal with optional exponent
        let (mantissa, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, i64::from_str(e).map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((a, b)) => (a, b),
            None => (mantissa, ""),
        };
        if frac_part.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let num = BigInt::from_str(&digits).map_err(|_| bad())?;
        let shift = exp - frac_part.len() as i64;
        if shift >= 0 {
            Rat::new(num * BigInt::from(10u32).pow(shift as u32), 1)
        } else {
            Rat::new(num, BigInt::from(10u32).pow((-shift) as u32))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_order() {
        let a = Rat::new(1, 3).unwrap();
        let b = Rat::new(1, 6).unwrap();
        assert_eq!(&a + &b, Rat::new(1, 2).unwrap());
        assert_eq!(&a - &b, b);
        assert_eq!(&a * &b, Rat::new(1, 18).unwrap());
        assert!(b < a);
        assert_eq!(a.recip().unwrap(), Rat::from_int(3));
    }

    #[test]
    fn parse_decimal() {
        assert_eq!(
            "0.00000001".parse::<Rat>().unwrap(),
            Rat::pow10_neg(8)
        );
        assert_eq!("-1.25".parse::<Rat>().unwrap(), Rat::new(-5, 4).unwrap());
        assert_eq!("3/4".parse::<Rat>().unwrap(), Rat::new(3, 4).unwrap());
        assert_eq!("2e3".parse::<Rat>().unwrap(), Rat::from_int(2000));
    }
}
