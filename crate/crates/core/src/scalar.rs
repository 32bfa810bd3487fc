//! The scalar backend abstraction.
//!
//! Heisenberg points are generic over their coordinate scalars. Three
//! backends exist: exact Gaussian rationals, number-field elements of
//! degree at most 3 over Q(i), and complex balls. Exact backends settle
//! every decision (comparisons, zero tests) either symbolically or by
//! escalating ball evaluation; the ball backend works at its stored
//! precision and reports indeterminate decisions as errors.

use std::cmp::Ordering;
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::gaussian::{ComplexBall, Decision, GaussianInteger, GaussianRational, Rat};

pub trait Scalar: Clone + PartialEq + Debug {
    /// Zero in the same backend context (field, precision) as `self`.
    fn zero_like(&self) -> Self;

    /// Embeds an exact Gaussian rational into this backend.
    fn from_rational_like(&self, x: &GaussianRational) -> Self;

    fn add(&self, rhs: &Self) -> Result<Self>;
    fn sub(&self, rhs: &Self) -> Result<Self>;
    fn mul(&self, rhs: &Self) -> Result<Self>;
    fn div(&self, rhs: &Self) -> Result<Self>;
    fn neg(&self) -> Self;

    fn add_rational(&self, k: &GaussianRational) -> Self;
    fn mul_rational(&self, k: &GaussianRational) -> Self;

    fn add_integer(&self, k: &GaussianInteger) -> Self {
        self.add_rational(&GaussianRational::from_integer(k.clone()))
    }

    fn mul_integer(&self, k: &GaussianInteger) -> Self {
        self.mul_rational(&GaussianRational::from_integer(k.clone()))
    }

    /// Complex conjugate, when the backend supports it exactly.
    fn conj_checked(&self) -> Result<Self>;

    /// Certified zero test.
    fn is_zero_certified(&self) -> Result<bool>;

    /// Certified equality.
    fn eq_certified(&self, rhs: &Self) -> Result<bool> {
        self.sub(rhs)?.is_zero_certified()
    }

    /// Certified enclosure at the requested precision (exact backends) or
    /// at the stored precision (ball backend).
    fn to_ball(&self, prec: u32) -> Result<ComplexBall>;

    /// Exact lowering to Q(i), when the value happens to be rational.
    fn as_rational(&self) -> Option<GaussianRational>;

    /// Certified comparison of |self| and |rhs|. `Equal` means a proven tie.
    fn cmp_abs(&self, rhs: &Self, ctx: &Decision) -> Result<Ordering>;

    /// Certified comparison of |self| against a nonnegative rational.
    fn cmp_abs_rat(&self, bound: &Rat, ctx: &Decision) -> Result<Ordering>;

    /// Certified check of the Siegel quadric |u|^2 - 2 Re(v) = 0.
    fn on_quadric(u: &Self, v: &Self, ctx: &Decision) -> Result<bool>;

    /// Certified check of the projective quadric
    /// |z2|^2 - 2 Re(conj(z1) z3) = 0.
    fn proj_quadric(q: &Self, r: &Self, p: &Self, ctx: &Decision) -> Result<bool>;

    /// Rough size of the representation, for orbit growth cutoffs.
    fn complexity_bits(&self) -> u64 {
        0
    }
}

impl Scalar for GaussianRational {
    fn zero_like(&self) -> Self {
        GaussianRational::zero()
    }

    fn from_rational_like(&self, x: &GaussianRational) -> Self {
        x.clone()
    }

    fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(self + rhs)
    }

    fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(self - rhs)
    }

    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self * rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        GaussianRational::div(self, rhs)
    }

    fn neg(&self) -> Self {
        -self
    }

    fn add_rational(&self, k: &GaussianRational) -> Self {
        self + k
    }

    fn mul_rational(&self, k: &GaussianRational) -> Self {
        self * k
    }

    fn conj_checked(&self) -> Result<Self> {
        Ok(self.conj())
    }

    fn is_zero_certified(&self) -> Result<bool> {
        Ok(self.is_zero())
    }

    fn to_ball(&self, prec: u32) -> Result<ComplexBall> {
        Ok(ComplexBall::from_rational(self, prec))
    }

    fn as_rational(&self) -> Option<GaussianRational> {
        Some(self.clone())
    }

    fn cmp_abs(&self, rhs: &Self, _ctx: &Decision) -> Result<Ordering> {
        Ok(self.norm_sq().cmp(&rhs.norm_sq()))
    }

    fn cmp_abs_rat(&self, bound: &Rat, _ctx: &Decision) -> Result<Ordering> {
        Ok(self.norm_sq().cmp(&bound.square()))
    }

    fn on_quadric(u: &Self, v: &Self, _ctx: &Decision) -> Result<bool> {
        let residual = &u.norm_sq() - &(&v.re() + &v.re());
        Ok(residual.is_zero())
    }

    fn proj_quadric(q: &Self, r: &Self, p: &Self, _ctx: &Decision) -> Result<bool> {
        let cross = &q.conj() * p;
        let residual = &r.norm_sq() - &(&cross.re() + &cross.re());
        Ok(residual.is_zero())
    }

    fn complexity_bits(&self) -> u64 {
        self.num().re().magnitude().bits()
            + self.num().im().magnitude().bits()
            + self.den().magnitude().bits()
    }
}

impl Scalar for ComplexBall {
    fn zero_like(&self) -> Self {
        ComplexBall::exact_zero(self.prec())
    }

    fn from_rational_like(&self, x: &GaussianRational) -> Self {
        ComplexBall::from_rational(x, self.prec())
    }

    fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(ComplexBall::add(self, rhs))
    }

    fn sub(&self, rhs: &Self) -> Result<Self> {
        Ok(ComplexBall::sub(self, rhs))
    }

    fn mul(&self, rhs: &Self) -> Result<Self> {
        Ok(ComplexBall::mul(self, rhs))
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        ComplexBall::div(self, rhs)
    }

    fn neg(&self) -> Self {
        ComplexBall::neg(self)
    }

    fn add_rational(&self, k: &GaussianRational) -> Self {
        ComplexBall::add(self, &ComplexBall::from_rational(k, self.prec()))
    }

    fn mul_rational(&self, k: &GaussianRational) -> Self {
        ComplexBall::mul_rational(self, k)
    }

    fn conj_checked(&self) -> Result<Self> {
        Ok(ComplexBall::conj(self))
    }

    fn is_zero_certified(&self) -> Result<bool> {
        if self.is_exact() {
            return Ok(self.contains_zero());
        }
        if !self.contains_zero() {
            return Ok(false);
        }
        Err(Error::Indeterminate(
            "ball contains zero but is not exact".into(),
        ))
    }

    fn to_ball(&self, _prec: u32) -> Result<ComplexBall> {
        Ok(self.clone())
    }

    fn as_rational(&self) -> Option<GaussianRational> {
        None
    }

    fn cmp_abs(&self, rhs: &Self, _ctx: &Decision) -> Result<Ordering> {
        self.abs_sq()
            .cmp_interval(&rhs.abs_sq())
            .ok_or_else(|| Error::Indeterminate("ball magnitudes overlap".into()))
    }

    fn cmp_abs_rat(&self, bound: &Rat, _ctx: &Decision) -> Result<Ordering> {
        self.abs_sq()
            .cmp_rat(&bound.square())
            .ok_or_else(|| Error::Indeterminate("ball magnitude straddles the bound".into()))
    }

    fn on_quadric(u: &Self, v: &Self, _ctx: &Decision) -> Result<bool> {
        // |u|^2 - 2 Re(v) must contain zero.
        let residual = u.mul(&u.conj()).sub(&v.add(&v.conj()));
        Ok(residual.contains_zero())
    }

    fn proj_quadric(q: &Self, r: &Self, p: &Self, _ctx: &Decision) -> Result<bool> {
        let cross = q.conj().mul(p);
        let residual = r.mul(&r.conj()).sub(&cross.add(&cross.conj()));
        Ok(residual.contains_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_cmp_abs() {
        let ctx = Decision::default();
        let a = GaussianRational::from_i64(3, 4);
        let b = GaussianRational::from_i64(5, 0);
        assert_eq!(a.cmp_abs(&b, &ctx).unwrap(), Ordering::Equal);
        assert_eq!(
            a.cmp_abs_rat(&Rat::from_int(5), &ctx).unwrap(),
            Ordering::Equal
        );
        assert_eq!(
            a.cmp_abs_rat(&Rat::from_int(6), &ctx).unwrap(),
            Ordering::Less
        );
    }

    #[test]
    fn ball_quadric() {
        let ctx = Decision::default();
        let u = ComplexBall::from_rational(&GaussianRational::from_i64(1, 1), 64);
        let v = ComplexBall::from_rational(&GaussianRational::from_i64(1, 7), 64);
        assert!(<ComplexBall as Scalar>::on_quadric(&u, &v, &ctx).unwrap());
        let bad = ComplexBall::from_rational(&GaussianRational::from_i64(2, 7), 64);
        assert!(!<ComplexBall as Scalar>::on_quadric(&u, &bad, &ctx).unwrap());
    }
}
