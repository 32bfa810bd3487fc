//! Exact arithmetic in Q(i)[t]/(f) for deg f <= 3, with a certified
//! enclosure of a selected root.
//!
//! Elements are coefficient vectors in the basis 1, t, t^2. Arithmetic is
//! polynomial arithmetic mod f; inverses come from the extended Euclidean
//! algorithm. Complex conjugation generally leaves the field, so nothing
//! here requires it: real decisions (|a| vs |b|, quadric membership) are
//! settled by escalating ball evaluation with an exact fallback in the
//! conjugation-closed tensor algebra of dimension at most 9.
//!
//! Degree 1 degenerates to plain Q(i); every code path accepts it.

mod poly;
mod roots;
pub mod spectrum;
mod tensor;

pub use poly::Poly;
pub use roots::{isolate_roots, refine_root};
pub use spectrum::{
    char_poly, colinearity_certificate, factor_spectrum, fixed_point_of, is_square_zi,
    FixedPoint, RootSelector,
};
pub use tensor::TensorElem;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gaussian::{ComplexBall, Decision, Dyadic, GaussianRational, Rat};
use crate::scalar::Scalar;

/// A number field Q(i)[t]/(f) together with one certified root enclosure
/// selecting the complex embedding.
#[derive(Debug)]
pub struct NumberField {
    modulus: Poly,
    conj_modulus: Poly,
    base_root: ComplexBall,
    // Deterministic memo of refined enclosures, keyed by precision.
    cache: Mutex<BTreeMap<u32, ComplexBall>>,
}

impl NumberField {
    /// Builds the field from an irreducible monic factor and the index of
    /// one of its roots in the deterministic (re, im) ordering.
    pub fn from_factor(f: &Poly, which: usize, ctx: &Decision) -> Result<Arc<Self>> {
        check_irreducible(f)?;
        let roots = isolate_roots(f, ctx)?;
        let base_root = roots
            .get(which)
            .cloned()
            .ok_or_else(|| Error::SelectionError(format!("no root with index {which}")))?;
        Ok(Arc::new(NumberField {
            conj_modulus: f.conj_coeffs(),
            modulus: f.clone(),
            base_root,
            cache: Mutex::new(BTreeMap::new()),
        }))
    }

    /// Builds the field from a serialized root box: the box must contain
    /// exactly one of the isolated roots.
    pub fn from_root_box(f: &Poly, hint: &ComplexBall, ctx: &Decision) -> Result<Arc<Self>> {
        check_irreducible(f)?;
        let roots = isolate_roots(f, ctx)?;
        let mut matches = Vec::new();
        for (k, r) in roots.iter().enumerate() {
            if boxes_overlap(r, hint) {
                matches.push(k);
            }
        }
        match matches.as_slice() {
            [k] => Self::from_factor(f, *k, ctx),
            [] => Err(Error::SelectionError(
                "root box does not contain any root of the modulus".into(),
            )),
            _ => Err(Error::SelectionError(
                "root box overlaps more than one root of the modulus".into(),
            )),
        }
    }

    /// The rationals, as the degenerate degree-1 field Q(i)[t]/(t).
    pub fn rationals(ctx: &Decision) -> Arc<Self> {
        let f = Poly::new(vec![GaussianRational::zero(), GaussianRational::one()]);
        Self::from_factor(&f, 0, ctx).expect("t is irreducible")
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("modulus is nonzero")
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn conj_modulus(&self) -> &Poly {
        &self.conj_modulus
    }

    pub fn base_root(&self) -> &ComplexBall {
        &self.base_root
    }

    /// Certified enclosure of the selected root at the given precision.
    pub fn refined_root(&self, prec: u32) -> Result<ComplexBall> {
        if let Some(hit) = self.cache.lock().unwrap().get(&prec) {
            return Ok(hit.clone());
        }
        let ctx = Decision::new(prec, (prec.max(2)).saturating_mul(64).max(65536));
        let refined = refine_root(&self.modulus, &self.base_root, prec, &ctx)?;
        self.cache.lock().unwrap().insert(prec, refined.clone());
        Ok(refined)
    }
}

fn boxes_overlap(a: &ComplexBall, b: &ComplexBall) -> bool {
    let dre = a.re().sub(b.re());
    let dim = a.im().sub(b.im());
    let dist_sq = dre.mul(&dre).add(&dim.mul(&dim));
    let rsum = a.rad().add(b.rad());
    dist_sq.cmp(&rsum.mul(&rsum)) != Ordering::Greater
}

fn check_irreducible(f: &Poly) -> Result<()> {
    if !f.is_monic() {
        return Err(Error::MalformedInput("modulus must be monic".into()));
    }
    let d = f.degree().unwrap_or(0);
    match d {
        1 => Ok(()),
        2 => {
            // t^2 + b t + c splits over Q(i) iff b^2 - 4c is a square.
            let b = f.coeff(1);
            let c = f.coeff(0);
            let disc = &(&b * &b) - &(&c * &GaussianRational::from_i64(4, 0));
            if spectrum::is_square_qi(&disc).is_some() {
                Err(Error::MalformedInput(
                    "quadratic modulus splits over Q(i)".into(),
                ))
            } else {
                Ok(())
            }
        }
        3 => {
            // Root candidates of a monic Z[i] polynomial with unit constant
            // term are units; this is the only cubic shape that arises
            // (characteristic factors of unitary matrices).
            if f.coeff(0).norm_sq() != Rat::one() {
                return Err(Error::MalformedInput(
                    "cubic modulus must have a unit constant term".into(),
                ));
            }
            for u in crate::gaussian::GaussianInteger::units() {
                let at = f.eval_rational(&GaussianRational::from_integer(u));
                if at.is_zero() {
                    return Err(Error::MalformedInput(
                        "cubic modulus has a unit root over Q(i)".into(),
                    ));
                }
            }
            Ok(())
        }
        _ => Err(Error::MalformedInput(format!(
            "modulus degree {d} is not in 1..=3"
        ))),
    }
}

/// An element of the field, as coefficients in the basis 1, t, t^2.
#[derive(Debug, Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coeffs: Vec<GaussianRational>,
}

impl FieldElement {
    pub fn new(field: &Arc<NumberField>, mut coeffs: Vec<GaussianRational>) -> Result<Self> {
        let d = field.degree();
        if coeffs.len() > d {
            // reduce mod the modulus
            let p = Poly::new(coeffs);
            let (_, r) = p.divmod(field.modulus())?;
            coeffs = r.coeffs().to_vec();
        }
        coeffs.resize(d, GaussianRational::zero());
        Ok(FieldElement {
            field: field.clone(),
            coeffs,
        })
    }

    pub fn from_rational(field: &Arc<NumberField>, c: GaussianRational) -> Self {
        let mut coeffs = vec![GaussianRational::zero(); field.degree()];
        coeffs[0] = c;
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    /// The generator t of the field (equals the root for degree 1 fields
    /// only after reduction; for degree 1 this is the rational root).
    pub fn generator(field: &Arc<NumberField>) -> Self {
        if field.degree() == 1 {
            // t = -c0 mod (t + c0)
            let c0 = field.modulus().coeff(0);
            return FieldElement::from_rational(field, -&c0);
        }
        let mut coeffs = vec![GaussianRational::zero(); field.degree()];
        coeffs[1] = GaussianRational::one();
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Exact lowering to Q(i) when the element is a constant.
    pub fn rational_part(&self) -> Option<GaussianRational> {
        self.coeffs[1..]
            .iter()
            .all(|c| c.is_zero())
            .then(|| self.coeffs[0].clone())
    }

    fn same_field(&self, rhs: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.field, &rhs.field) {
            Ok(())
        } else {
            Err(Error::BackendMismatch)
        }
    }

    pub fn add_elem(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn mul_elem(&self, rhs: &Self) -> Result<Self> {
        self.same_field(rhs)?;
        let p = Poly::new(self.coeffs.clone()).mul(&Poly::new(rhs.coeffs.clone()));
        let (_, r) = p.divmod(self.field.modulus())?;
        FieldElement::new(&self.field, r.coeffs().to_vec())
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = Poly::new(self.coeffs.clone());
        let (d, _, t) = self.field.modulus().ext_gcd(&g)?;
        if d.degree() != Some(0) {
            return Err(Error::Internal(
                "modulus shares a factor with a nonzero element".into(),
            ));
        }
        // d is monic, hence exactly 1: t * g = 1 (mod f)
        let (_, r) = t.divmod(self.field.modulus())?;
        FieldElement::new(&self.field, r.coeffs().to_vec())
    }

    /// The conjugate-partner coefficient vector: evaluated at
    /// conj(lambda), a root of the conjugate modulus, it equals the complex
    /// conjugate of self's evaluation.
    pub fn star_coeffs(&self) -> Vec<GaussianRational> {
        self.coeffs.iter().map(|c| c.conj()).collect()
    }

    /// |self|^2 as an exact tensor element.
    pub fn abs_sq_tensor(&self) -> TensorElem {
        TensorElem::abs_sq(&self.field, &self.coeffs)
    }

    pub fn eval_ball(&self, prec: u32) -> Result<ComplexBall> {
        let d = self.field.degree();
        if d == 1 {
            return Ok(ComplexBall::from_rational(&self.coeffs[0], prec));
        }
        let lam = self.field.refined_root(prec)?;
        let mut acc = ComplexBall::exact_zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lam).add(&ComplexBall::from_rational(c, prec));
        }
        Ok(acc)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Poly::new(self.coeffs.clone()))
    }
}

impl Scalar for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement::from_rational(&self.field, GaussianRational::zero())
    }

    fn from_rational_like(&self, x: &GaussianRational) -> Self {
        FieldElement::from_rational(&self.field, x.clone())
    }

    fn add(&self, rhs: &Self) -> Result<Self> {
        self.add_elem(rhs)
    }

    fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add_elem(&rhs.neg())
    }

    fn mul(&self, rhs: &Self) -> Result<Self> {
        self.mul_elem(rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self> {
        self.mul_elem(&rhs.inverse()?)
    }

    fn neg(&self) -> Self {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn add_rational(&self, k: &GaussianRational) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = &coeffs[0] + k;
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    fn mul_rational(&self, k: &GaussianRational) -> Self {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    fn conj_checked(&self) -> Result<Self> {
        match self.rational_part() {
            Some(c) => Ok(FieldElement::from_rational(&self.field, c.conj())),
            None => Err(Error::ConjugationUnavailable),
        }
    }

    fn is_zero_certified(&self) -> Result<bool> {
        Ok(self.is_zero())
    }

    fn to_ball(&self, prec: u32) -> Result<ComplexBall> {
        self.eval_ball(prec)
    }

    fn as_rational(&self) -> Option<GaussianRational> {
        self.rational_part()
    }

    fn cmp_abs(&self, rhs: &Self, ctx: &Decision) -> Result<Ordering> {
        self.same_field(rhs)?;
        if let (Some(a), Some(b)) = (self.rational_part(), rhs.rational_part()) {
            return Ok(a.norm_sq().cmp(&b.norm_sq()));
        }
        // |a|^2 - |b|^2 evaluated in the tensor algebra is real; its sign
        // settles the comparison, with ball evaluation fast-pathing the
        // generic case.
        let mut p = ctx.precision_start.max(32);
        for _ in 0..3 {
            let a2 = self.eval_ball(p)?.abs_sq();
            let b2 = rhs.eval_ball(p)?.abs_sq();
            if let Some(ord) = a2.cmp_interval(&b2) {
                return Ok(ord);
            }
            p = (p * 2).min(ctx.precision_cap);
        }
        let delta = self.abs_sq_tensor().sub(&rhs.abs_sq_tensor());
        delta.eval_real_sign(ctx)
    }

    fn cmp_abs_rat(&self, bound: &Rat, ctx: &Decision) -> Result<Ordering> {
        if let Some(a) = self.rational_part() {
            return Ok(a.norm_sq().cmp(&bound.square()));
        }
        let bound_sq = bound.square();
        let mut p = ctx.precision_start.max(32);
        for _ in 0..3 {
            let a2 = self.eval_ball(p)?.abs_sq();
            if let Some(ord) = a2.cmp_rat(&bound_sq) {
                return Ok(ord);
            }
            p = (p * 2).min(ctx.precision_cap);
        }
        let delta = self
            .abs_sq_tensor()
            .sub(&TensorElem::constant(&self.field, &bound_sq));
        delta.eval_real_sign(ctx)
    }

    fn on_quadric(u: &Self, v: &Self, ctx: &Decision) -> Result<bool> {
        u.same_field(v)?;
        if let (Some(a), Some(b)) = (u.rational_part(), v.rational_part()) {
            let residual = &a.norm_sq() - &(&b.re() + &b.re());
            return Ok(residual.is_zero());
        }
        // |u|^2 - v - conj(v) evaluates to a real; exact zero test.
        let residual = u
            .abs_sq_tensor()
            .sub(&TensorElem::from_left(&u.field, &v.coeffs))
            .sub(&TensorElem::from_right_star(&u.field, &v.coeffs));
        residual.eval_is_zero(ctx)
    }

    fn complexity_bits(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| {
                c.num().re().magnitude().bits()
                    + c.num().im().magnitude().bits()
                    + c.den().magnitude().bits()
            })
            .sum()
    }

    fn proj_quadric(q: &Self, r: &Self, p: &Self, ctx: &Decision) -> Result<bool> {
        q.same_field(r)?;
        q.same_field(p)?;
        if let (Some(a), Some(b), Some(c)) =
            (q.rational_part(), r.rational_part(), p.rational_part())
        {
            let cross = &a.conj() * &c;
            let residual = &b.norm_sq() - &(&cross.re() + &cross.re());
            return Ok(residual.is_zero());
        }
        // |r|^2 - conj(q) p - q conj(p), real by symmetry.
        let f = &q.field;
        let residual = TensorElem::abs_sq(f, &r.coeffs)
            .sub(&TensorElem::from_right_star(f, &q.coeffs).mul(&TensorElem::from_left(f, &p.coeffs)))
            .sub(&TensorElem::from_left(f, &q.coeffs).mul(&TensorElem::from_right_star(f, &p.coeffs)));
        residual.eval_is_zero(ctx)
    }
}

/// Serialized form of a field: modulus coefficients (constant term first)
/// plus the selected root enclosure as exact decimal midpoint/radius.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpecJson {
    pub modulus: Vec<String>,
    pub root: RootBoxJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootBoxJson {
    pub re: String,
    pub im: String,
    pub rad: String,
    pub precision: u32,
}

impl FieldSpecJson {
    pub fn from_field(field: &NumberField) -> Self {
        let b = field.base_root();
        FieldSpecJson {
            modulus: field
                .modulus()
                .coeffs()
                .iter()
                .map(|c| c.to_string())
                .collect(),
            root: RootBoxJson {
                re: b.re().to_decimal_string(),
                im: b.im().to_decimal_string(),
                rad: b.rad().to_decimal_string(),
                precision: b.prec(),
            },
        }
    }

    pub fn to_field(&self, ctx: &Decision) -> Result<Arc<NumberField>> {
        let coeffs: Result<Vec<GaussianRational>> =
            self.modulus.iter().map(|s| s.parse()).collect();
        let f = Poly::new(coeffs?);
        let parse_rat = |s: &str| -> Result<Rat> { s.parse() };
        let re = parse_rat(&self.root.re)?;
        let im = parse_rat(&self.root.im)?;
        let rad = parse_rat(&self.root.rad)?;
        // Decimal values are exact binary fractions only when the radix
        // allows; widen the hint box by the conversion slack.
        let p = self.root.precision.max(64);
        let re_b = rat_to_dyadic(&re, p);
        let im_b = rat_to_dyadic(&im, p);
        let rad_b = rat_to_dyadic_upper(&rad, p).add(&Dyadic::pow2(4 - p as i64));
        let hint = ComplexBall::new(re_b, im_b, rad_b, p);
        NumberField::from_root_box(&f, &hint, ctx)
    }
}

fn rat_to_dyadic(r: &Rat, p: u32) -> Dyadic {
    Dyadic::from_bigint(r.num().clone())
        .div(&Dyadic::from_bigint(r.den().clone()), p)
        .expect("den > 0")
        .0
}

fn rat_to_dyadic_upper(r: &Rat, p: u32) -> Dyadic {
    let (q, err) = Dyadic::from_bigint(r.num().clone())
        .div(&Dyadic::from_bigint(r.den().clone()), p)
        .expect("den > 0");
    q.add(&err)
}

/// A planar point with number-field coordinates, JSON form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraicPointJson {
    pub field: FieldSpecJson,
    pub u: Vec<String>,
    pub v: Vec<String>,
}

impl AlgebraicPointJson {
    pub fn from_point(
        field: &Arc<NumberField>,
        h: &crate::siegel::HeisenbergPoint<FieldElement>,
    ) -> Self {
        let to_strings =
            |e: &FieldElement| e.coeffs().iter().map(|c| c.to_string()).collect();
        AlgebraicPointJson {
            field: FieldSpecJson::from_field(field),
            u: to_strings(h.u()),
            v: to_strings(h.v()),
        }
    }

    pub fn to_point(
        &self,
        ctx: &Decision,
    ) -> Result<(Arc<NumberField>, crate::siegel::HeisenbergPoint<FieldElement>)> {
        let field = self.field.to_field(ctx)?;
        let parse = |v: &[String]| -> Result<FieldElement> {
            let coeffs: Result<Vec<GaussianRational>> = v.iter().map(|s| s.parse()).collect();
            FieldElement::new(&field, coeffs?)
        };
        let u = parse(&self.u)?;
        let v = parse(&self.v)?;
        let h = crate::siegel::HeisenbergPoint::new(u, v, ctx)?;
        Ok((field, h))
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(_d: D) -> std::result::Result<Self, D::Error> {
        Err(D::Error::custom(
            "field elements deserialize through AlgebraicPointJson",
        ))
    }
}

impl Serialize for FieldElement {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}
