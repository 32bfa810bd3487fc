//! Dense univariate polynomials over Q(i).

use std::fmt;

use crate::error::{Error, Result};
use crate::gaussian::{ComplexBall, GaussianRational};

/// Coefficients from constant term upward; trailing zeros stripped, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<GaussianRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![GaussianRational::one()],
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Poly::new(vec![c])
    }

    /// t - r
    pub fn linear_from_root(r: &GaussianRational) -> Self {
        Poly::new(vec![-r, GaussianRational::one()])
    }

    pub fn from_i64_coeffs(coeffs: &[(i64, i64)]) -> Self {
        Poly::new(
            coeffs
                .iter()
                .map(|&(re, im)| GaussianRational::from_i64(re, im))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(&self.coeff(k) + &rhs.coeff(k));
        }
        Poly::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Euclidean division; rhs must be nonzero.
    pub fn divmod(&self, rhs: &Self) -> Result<(Poly, Poly)> {
        let d = rhs.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = rhs.leading().unwrap().recip()?;
        let mut rem = self.clone();
        let mut quo = vec![GaussianRational::zero(); self.coeffs.len().saturating_sub(d)];
        while let Some(rd) = rem.degree() {
            if rd < d {
                break;
            }
            let factor = rem.leading().unwrap() * &lead_inv;
            let shift = rd - d;
            quo[shift] = factor.clone();
            let mut sub = vec![GaussianRational::zero(); shift];
            sub.extend(rhs.coeffs.iter().map(|c| c * &factor));
            rem = rem.sub(&Poly::new(sub));
        }
        Ok((Poly::new(quo), rem))
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*rhs = g, g monic
    /// unless zero.
    pub fn ext_gcd(&self, rhs: &Self) -> Result<(Poly, Poly, Poly)> {
        let mut r0 = self.clone();
        let mut r1 = rhs.clone();
        let mut s0 = Poly::one();
        let mut s1 = Poly::zero();
        let mut t0 = Poly::zero();
        let mut t1 = Poly::one();
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if let Some(lead) = r0.leading() {
            let inv = lead.recip()?;
            Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
        } else {
            Ok((r0, s0, t0))
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from_i64(k as i64, 0))
                .collect(),
        )
    }

    pub fn eval_rational(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_ball(&self, x: &ComplexBall, prec: u32) -> ComplexBall {
        let mut acc = ComplexBall::exact_zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(&ComplexBall::from_rational(c, prec));
        }
        acc
    }

    /// Coefficient-wise complex conjugate; conj(root) is a root of it.
    pub fn conj_coeffs(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Deflation by a known root: self / (t - r); errors if r is not a root.
    pub fn deflate(&self, r: &GaussianRational) -> Result<Poly> {
        let (q, rem) = self.divmod(&Poly::linear_from_root(r))?;
        if !rem.is_zero() {
            return Err(Error::MalformedInput(format!("{r} is not a root")));
        }
        Ok(q)
    }

    /// True iff gcd(self, self') is constant.
    pub fn is_squarefree(&self) -> Result<bool> {
        let (g, _, _) = self.ext_gcd(&self.derivative())?;
        Ok(g.degree() == Some(0))
    }

    /// Deterministic ordering key: degree, then coefficients from the top.
    pub fn cmp_key(&self, rhs: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let by_deg = self.coeffs.len().cmp(&rhs.coeffs.len());
        if by_deg != Ordering::Equal {
            return by_deg;
        }
        for (a, b) in self.coeffs.iter().rev().zip(rhs.coeffs.iter().rev()) {
            let o = a
                .num()
                .lex_cmp(b.num())
                .then_with(|| a.den().cmp(b.den()));
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}
