//! The matrix group U(2,1;Z[i]): Gaussian-integer matrices M with
//! M^dagger J M = J, acting on the Siegel quadric as linear fractional
//! transformations.
//!
//! Three generator families matter: the inversion J (acting as the Koranyi
//! inversion), translations T_gamma for gamma in S(Z), and the eight
//! rotational (diagonal) matrices. Every fourth power M^4 decomposes into a
//! word T_(g0) J T_(g1) J ... J T_(gn) J; the decomposition drives both
//! directions of the periodicity correspondence in `cf`.
//!
//! Entry labels follow the convention
//!
//! ```text
//!         ( Q'  Q~  -Q )
//!     M = ( R'  R~  -R )
//!         ( P'  P~  -P )
//! ```
//!
//! so the first column is the projective point (Q':R':P') and the top row
//! pairs with planar coordinates as Q' + Q~ u - Q v.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gaussian::{GaussianInteger, GaussianRational};
use crate::lattice::{rational_digits, DomainConfig};
use crate::scalar::Scalar;
use crate::siegel::{HeisenbergPoint, IntegerPoint, ProjectivePoint, QPoint};

/// A matrix in U(2,1;Z[i]); the defining relation is verified exactly at
/// construction, along with the row/column quadric identities it implies.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnitaryMatrix {
    m: [[GaussianInteger; 3]; 3],
}

/// True iff the defining relation M^dagger J M = J holds exactly.
pub fn verify_unitary(entries: &[[GaussianInteger; 3]; 3]) -> bool {
    let m = UnitaryMatrix { m: entries.clone() };
    let lhs = m.dagger_raw().mul_raw(&j_raw()).mul_raw(&m);
    lhs.m == j_raw().m
}

fn j_raw() -> UnitaryMatrix {
    let z = GaussianInteger::zero;
    let o = GaussianInteger::one;
    UnitaryMatrix {
        m: [
            [z(), z(), -o()],
            [z(), o(), z()],
            [-o(), z(), z()],
        ],
    }
}

impl UnitaryMatrix {
    pub fn new(entries: [[GaussianInteger; 3]; 3]) -> Result<Self> {
        if !verify_unitary(&entries) {
            return Err(Error::NotUnitary);
        }
        let m = UnitaryMatrix { m: entries };
        m.assert_transform_identities()?;
        Ok(m)
    }

    pub fn identity() -> Self {
        let z = GaussianInteger::zero;
        let o = GaussianInteger::one;
        UnitaryMatrix {
            m: [
                [o(), z(), z()],
                [z(), o(), z()],
                [z(), z(), o()],
            ],
        }
    }

    /// The inversion matrix J.
    pub fn j() -> Self {
        j_raw()
    }

    /// The translation matrix T_gamma with rows (1,0,0), (u,1,0), (v,conj u,1).
    pub fn translation(gamma: &IntegerPoint) -> Self {
        let z = GaussianInteger::zero;
        let o = GaussianInteger::one;
        let u = gamma.a().clone();
        let v = gamma.v();
        UnitaryMatrix {
            m: [
                [o(), z(), z()],
                [u.clone(), o(), z()],
                [v, u.conj(), o()],
            ],
        }
    }

    /// The eight diagonal matrices diag(d, e, d) with d a unit and e = +-1.
    pub fn diagonals() -> Vec<UnitaryMatrix> {
        let mut out = Vec::with_capacity(8);
        for d1 in GaussianInteger::units() {
            for d2 in [GaussianInteger::one(), -&GaussianInteger::one()] {
                out.push(Diagonal::new(d1.clone(), d2.clone()).unwrap().to_matrix());
            }
        }
        out
    }

    pub fn entries(&self) -> &[[GaussianInteger; 3]; 3] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussianInteger {
        &self.m[i][j]
    }

    // Labeled accessors per the entry convention above.
    pub fn q_prime(&self) -> &GaussianInteger {
        &self.m[0][0]
    }
    pub fn frak_q(&self) -> &GaussianInteger {
        &self.m[0][1]
    }
    pub fn q(&self) -> GaussianInteger {
        -&self.m[0][2]
    }
    pub fn r_prime(&self) -> &GaussianInteger {
        &self.m[1][0]
    }
    pub fn frak_r(&self) -> &GaussianInteger {
        &self.m[1][1]
    }
    pub fn r(&self) -> GaussianInteger {
        -&self.m[1][2]
    }
    pub fn p_prime(&self) -> &GaussianInteger {
        &self.m[2][0]
    }
    pub fn frak_p(&self) -> &GaussianInteger {
        &self.m[2][1]
    }
    pub fn p(&self) -> GaussianInteger {
        -&self.m[2][2]
    }

    fn mul_raw(&self, rhs: &Self) -> Self {
        let mut out: [[GaussianInteger; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = GaussianInteger::zero();
                for (k, rhs_row) in rhs.m.iter().enumerate() {
                    acc = &acc + &(&self.m[i][k] * &rhs_row[j]);
                }
                out[i][j] = acc;
            }
        }
        UnitaryMatrix { m: out }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.mul_raw(rhs)
    }

    fn dagger_raw(&self) -> Self {
        let mut out: [[GaussianInteger; 3]; 3] = Default::default();
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[j][i].conj();
            }
        }
        UnitaryMatrix { m: out }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        self.dagger_raw()
    }

    /// Exact inverse J M^dagger J.
    pub fn inverse(&self) -> Self {
        j_raw().mul_raw(&self.dagger_raw()).mul_raw(&j_raw())
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = UnitaryMatrix::identity();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_raw(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_raw(&base);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.m == UnitaryMatrix::identity().m
    }

    pub fn det(&self) -> GaussianInteger {
        let m = &self.m;
        let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
        let t0 = &m[0][0] * &minor(1, 2, 2, 1);
        let t1 = &m[0][1] * &minor(0, 2, 2, 0);
        let t2 = &m[0][2] * &minor(0, 1, 1, 0);
        &(&t0 - &t1) + &t2
    }

    pub fn trace(&self) -> GaussianInteger {
        &(&self.m[0][0] + &self.m[1][1]) + &self.m[2][2]
    }

    /// The identities forced by M^dagger J M = J and its transpose: the
    /// first and third columns and the first row are projective points of
    /// the quadric, the middle column pairs to zero against the first, and
    /// the first/third columns pair to 1.
    fn assert_transform_identities(&self) -> Result<()> {
        let qp = self.q_prime();
        let rp = self.r_prime();
        let pp = self.p_prime();
        let q = self.q();
        let r = self.r();
        let p = self.p();
        let fq = self.frak_q();
        let fr = self.frak_r();
        let fp = self.frak_p();

        let two_re = |z: &GaussianInteger| z.re() * 2;
        let ok1 = rp.norm() == two_re(&(&pp.conj() * qp));
        let ok2 = r.norm() == two_re(&(&p.conj() * &q));
        let lhs3 = &(&rp.conj() * fr) - &(&qp.conj() * fp);
        let ok3 = (&lhs3 - &(&pp.conj() * fq)).is_zero();
        let lhs4 = &(&rp.conj() * &r) - &(&qp.conj() * &p);
        let ok4 = (&lhs4 - &(&pp.conj() * &q)).is_one();
        let ok5 = {
            let cross = &qp.conj() * &q;
            fq.norm() + cross.re() * 2 == BigInt::zero()
        };
        if ok1 && ok2 && ok3 && ok4 && ok5 {
            Ok(())
        } else {
            Err(Error::Internal(
                "unitary relation holds but a transform identity failed".into(),
            ))
        }
    }

    /// Projective action: plain matrix-vector product.
    pub fn act_projective<S: Scalar>(&self, pt: &ProjectivePoint<S>) -> ProjectivePoint<S> {
        let row = |i: usize| -> S {
            pt.q()
                .mul_integer(&self.m[i][0])
                .add(&pt.r().mul_integer(&self.m[i][1]))
                .expect("same backend")
                .add(&pt.p().mul_integer(&self.m[i][2]))
                .expect("same backend")
        };
        ProjectivePoint::from_parts_unchecked(row(0), row(1), row(2))
    }

    /// Planar action ((R'+R~u-Rv)/(Q'+Q~u-Qv), (P'+P~u-Pv)/(Q'+Q~u-Qv));
    /// errors when the output is the point at infinity.
    pub fn act<S: Scalar>(&self, h: &HeisenbergPoint<S>) -> Result<HeisenbergPoint<S>> {
        let proj = self.act_projective(&h.to_projective());
        if proj.is_infinity()? {
            return Err(Error::PointAtInfinity);
        }
        proj.to_planar()
    }
}

impl fmt::Display for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.m.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

/// Row-major array of nine Gaussian-integer strings.
impl Serialize for UnitaryMatrix {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let flat: Vec<String> = self
            .m
            .iter()
            .flat_map(|row| row.iter().map(|z| z.to_string()))
            .collect();
        flat.serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let flat: Vec<String> = Vec::deserialize(d)?;
        if flat.len() != 9 {
            return Err(D::Error::custom("matrix must have exactly 9 entries"));
        }
        let mut it = flat.iter();
        let mut entries: [[GaussianInteger; 3]; 3] = Default::default();
        for row in entries.iter_mut() {
            for cell in row.iter_mut() {
                *cell = it.next().unwrap().parse().map_err(D::Error::custom)?;
            }
        }
        UnitaryMatrix::new(entries).map_err(D::Error::custom)
    }
}

/// A diagonal matrix diag(d1, d2, d1) in U(2,1;Z[i]); the relation forces
/// the two corners equal. The eight members of the group with determinant
/// +-1 additionally have d2 = +-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonal {
    d1: GaussianInteger,
    d2: GaussianInteger,
}

impl Diagonal {
    pub fn new(d1: GaussianInteger, d2: GaussianInteger) -> Result<Self> {
        if !d1.is_unit() || !d2.is_unit() {
            return Err(Error::MalformedInput("diagonal entries must be units".into()));
        }
        Ok(Diagonal { d1, d2 })
    }

    pub fn identity() -> Self {
        Diagonal {
            d1: GaussianInteger::one(),
            d2: GaussianInteger::one(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.d1.is_one() && self.d2.is_one()
    }

    pub fn to_matrix(&self) -> UnitaryMatrix {
        let z = GaussianInteger::zero;
        UnitaryMatrix {
            m: [
                [self.d1.clone(), z(), z()],
                [z(), self.d2.clone(), z()],
                [z(), z(), self.d1.clone()],
            ],
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Diagonal {
            d1: &self.d1 * &rhs.d1,
            d2: &self.d2 * &rhs.d2,
        }
    }

    /// The gamma' with D T_gamma = T_gamma' D: gamma' = (a d2/d1, c).
    pub fn transform_point(&self, gamma: &IntegerPoint) -> IntegerPoint {
        let unit = &self.d2 * &self.d1.unit_inverse().expect("unit");
        IntegerPoint::new(gamma.a() * &unit, gamma.c().clone()).expect("norm unchanged")
    }

    /// Multiplicative order, a divisor of 4.
    pub fn order(&self) -> u64 {
        let mut acc = Diagonal::identity();
        for k in 1..=4u64 {
            acc = acc.mul(self);
            if acc.is_identity() {
                return k;
            }
        }
        unreachable!("units have order dividing 4")
    }
}

/// One letter of a generator word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    J,
    T(IntegerPoint),
}

/// Stack-based normal form: merges adjacent translations, cancels J J, and
/// drops identity translations. The rewriting system is confluent, so a
/// single pass with a reduction stack suffices.
pub fn normalize_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::new();
    for letter in letters {
        push_reduced(&mut stack, letter);
    }
    stack
}

fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    match letter {
        Letter::T(g) if g.is_zero() => {}
        Letter::T(g) => match stack.pop() {
            Some(Letter::T(prev)) => {
                let merged = prev.mul(&g);
                push_reduced(stack, Letter::T(merged));
            }
            Some(Letter::J) => {
                stack.push(Letter::J);
                stack.push(Letter::T(g));
            }
            None => stack.push(Letter::T(g)),
        },
        Letter::J => match stack.pop() {
            Some(Letter::J) => {
                // J J = I; the two neighbors may now interact.
                if let Some(top) = stack.pop() {
                    push_reduced(stack, top);
                }
            }
            Some(other) => {
                stack.push(other);
                stack.push(Letter::J);
            }
            None => stack.push(Letter::J),
        },
    }
}

pub fn letters_inverse(letters: &[Letter]) -> Vec<Letter> {
    letters
        .iter()
        .rev()
        .map(|l| match l {
            Letter::J => Letter::J,
            Letter::T(g) => Letter::T(g.inv()),
        })
        .collect()
}

pub fn letters_to_matrix(letters: &[Letter]) -> UnitaryMatrix {
    let mut acc = UnitaryMatrix::identity();
    for l in letters {
        let m = match l {
            Letter::J => UnitaryMatrix::j(),
            Letter::T(g) => UnitaryMatrix::translation(g),
        };
        acc = acc.mul(&m);
    }
    acc
}

/// A word T_(g0)? (J T_(g1)) (J T_(g2)) ... (J T_(gn)) J?, the normal form
/// for products of inversion and translation generators. Interior body
/// letters are nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorWord {
    pub leading: Option<IntegerPoint>,
    pub body: Vec<IntegerPoint>,
    pub trailing_j: bool,
}

impl GeneratorWord {
    pub fn new(
        leading: Option<IntegerPoint>,
        body: Vec<IntegerPoint>,
        trailing_j: bool,
    ) -> Result<Self> {
        let n = body.len();
        for (k, g) in body.iter().enumerate() {
            if k + 1 < n && k >= 1 && g.is_zero() {
                return Err(Error::MalformedInput(format!(
                    "interior word letter {k} is (0,0)"
                )));
            }
        }
        Ok(GeneratorWord {
            leading,
            body,
            trailing_j,
        })
    }

    pub fn identity() -> Self {
        GeneratorWord {
            leading: None,
            body: Vec::new(),
            trailing_j: false,
        }
    }

    pub fn to_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        if let Some(g) = &self.leading {
            out.push(Letter::T(g.clone()));
        }
        for g in &self.body {
            out.push(Letter::J);
            out.push(Letter::T(g.clone()));
        }
        if self.trailing_j {
            out.push(Letter::J);
        }
        out
    }

    /// Parses a normalized letter sequence; the alternation is guaranteed
    /// by `normalize_letters`.
    pub fn from_normalized_letters(letters: &[Letter]) -> Result<Self> {
        let mut leading = None;
        let mut body = Vec::new();
        let mut trailing_j = false;
        let mut iter = letters.iter().peekable();
        if let Some(Letter::T(g)) = iter.peek() {
            leading = Some(g.clone());
            iter.next();
        }
        while let Some(l) = iter.next() {
            match l {
                Letter::J => match iter.next() {
                    Some(Letter::T(g)) => body.push(g.clone()),
                    Some(Letter::J) => {
                        return Err(Error::Internal("JJ survived normalization".into()))
                    }
                    None => {
                        trailing_j = true;
                    }
                },
                Letter::T(_) => {
                    return Err(Error::Internal("TT survived normalization".into()))
                }
            }
        }
        Ok(GeneratorWord {
            leading,
            body,
            trailing_j,
        })
    }

    pub fn to_matrix(&self) -> UnitaryMatrix {
        letters_to_matrix(&self.to_letters())
    }

    pub fn len(&self) -> usize {
        self.body.len() + usize::from(self.leading.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.leading.is_none() && self.body.is_empty() && !self.trailing_j
    }
}

impl Serialize for GeneratorWord {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GeneratorWord", 3)?;
        st.serialize_field("leading", &self.leading)?;
        st.serialize_field("body", &self.body)?;
        st.serialize_field("trailing_j", &self.trailing_j)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for GeneratorWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            leading: Option<IntegerPoint>,
            body: Vec<IntegerPoint>,
            trailing_j: bool,
        }
        let raw = Raw::deserialize(d)?;
        GeneratorWord::new(raw.leading, raw.body, raw.trailing_j).map_err(D::Error::custom)
    }
}

/// Exact product of the word in the written order.
pub fn word_to_matrix(word: &GeneratorWord) -> UnitaryMatrix {
    word.to_matrix()
}

/// Corner-zero classification. A zero corner forces its two neighbors to
/// zero and puts units on the adjacent diagonal, pinning the matrix to a
/// product of a diagonal with one or two generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CornerStructure {
    /// No zero corner.
    None,
    /// Q = 0 (upper-right): M = D T_gamma, lower triangular.
    TranslationLike { d: Diagonal, gamma: IntegerPoint },
    /// Q' = 0 (upper-left): M = D T_gamma J.
    InversionLike { d: Diagonal, gamma: IntegerPoint },
    /// P = 0 (lower-right): M = D J T_gamma.
    InversionLeft { d: Diagonal, gamma: IntegerPoint },
    /// P' = 0 (lower-left): M = J T_gamma J D, upper triangular.
    UpperUnit { gamma: IntegerPoint, d: Diagonal },
}

/// Recognizes M = D T_gamma (lower triangular with unit diagonal).
fn as_translation_like(m: &UnitaryMatrix) -> Option<(Diagonal, IntegerPoint)> {
    let e = &m.m;
    if !(e[0][1].is_zero() && e[0][2].is_zero() && e[1][2].is_zero()) {
        return None;
    }
    let d1 = e[0][0].clone();
    let d2 = e[1][1].clone();
    let d3 = e[2][2].clone();
    if !(d1.is_unit() && d2.is_unit() && d3 == d1) {
        return None;
    }
    let u = (&e[1][0] * &d2.unit_inverse().ok()?).clone();
    let v = (&e[2][0] * &d3.unit_inverse().ok()?).clone();
    let gamma = IntegerPoint::from_uv(u, v).ok()?;
    let d = Diagonal::new(d1, d2).ok()?;
    let rebuilt = d.to_matrix().mul(&UnitaryMatrix::translation(&gamma));
    (rebuilt == *m).then_some((d, gamma))
}

/// Recognizes M = D T_gamma J (the Q' = 0 pattern).
fn as_inversion_like(m: &UnitaryMatrix) -> Option<(Diagonal, IntegerPoint)> {
    let e = &m.m;
    if !(e[0][0].is_zero() && e[0][1].is_zero() && e[1][0].is_zero()) {
        return None;
    }
    let d1 = -&e[0][2];
    let d2 = e[1][1].clone();
    let d3 = -&e[2][0];
    if !(d1.is_unit() && d2.is_unit() && d3 == d1) {
        return None;
    }
    let u = -&(&e[1][2] * &d2.unit_inverse().ok()?);
    let v = -&(&e[2][2] * &d3.unit_inverse().ok()?);
    let gamma = IntegerPoint::from_uv(u, v).ok()?;
    let d = Diagonal::new(d1, d2).ok()?;
    let rebuilt = d
        .to_matrix()
        .mul(&UnitaryMatrix::translation(&gamma))
        .mul(&UnitaryMatrix::j());
    (rebuilt == *m).then_some((d, gamma))
}

/// Recognizes M = D J T_gamma (the P = 0 pattern).
fn as_inversion_left(m: &UnitaryMatrix) -> Option<(Diagonal, IntegerPoint)> {
    let e = &m.m;
    if !(e[2][2].is_zero() && e[1][2].is_zero() && e[2][1].is_zero()) {
        return None;
    }
    // D (J T_gamma) = [[-d1 v, -d1 conj(u), -d1], [d2 u, d2, 0], [-d1, 0, 0]]
    let d1 = -&e[0][2];
    let d2 = e[1][1].clone();
    if !(d1.is_unit() && d2.is_unit() && -&e[2][0] == d1) {
        return None;
    }
    let u = &e[1][0] * &d2.unit_inverse().ok()?;
    let v = -&(&e[0][0] * &d1.unit_inverse().ok()?);
    let gamma = IntegerPoint::from_uv(u, v).ok()?;
    let d = Diagonal::new(d1, d2).ok()?;
    let rebuilt = d
        .to_matrix()
        .mul(&UnitaryMatrix::j())
        .mul(&UnitaryMatrix::translation(&gamma));
    (rebuilt == *m).then_some((d, gamma))
}

/// Recognizes N = J T_gamma J D (upper triangular with unit diagonal).
fn as_upper_unit(m: &UnitaryMatrix) -> Option<(IntegerPoint, Diagonal)> {
    let e = &m.m;
    if !(e[1][0].is_zero() && e[2][0].is_zero() && e[2][1].is_zero()) {
        return None;
    }
    let d1 = e[0][0].clone();
    let d2 = e[1][1].clone();
    if !(d1.is_unit() && d2.is_unit() && e[2][2] == d1) {
        return None;
    }
    let inv_d1 = d1.unit_inverse().ok()?;
    let u = -&(&e[1][2] * &inv_d1);
    let v = &e[0][2] * &inv_d1;
    let gamma = IntegerPoint::from_uv(u, v).ok()?;
    let d = Diagonal::new(d1, d2).ok()?;
    let rebuilt = UnitaryMatrix::j()
        .mul(&UnitaryMatrix::translation(&gamma))
        .mul(&UnitaryMatrix::j())
        .mul(&d.to_matrix());
    (rebuilt == *m).then_some((gamma, d))
}

/// Classifies the zero-corner structure of a unitary matrix.
pub fn corner_zero_structure(m: &UnitaryMatrix) -> CornerStructure {
    if m.m[0][2].is_zero() {
        if let Some((d, gamma)) = as_translation_like(m) {
            return CornerStructure::TranslationLike { d, gamma };
        }
    }
    if m.m[0][0].is_zero() {
        if let Some((d, gamma)) = as_inversion_like(m) {
            return CornerStructure::InversionLike { d, gamma };
        }
    }
    if m.m[2][2].is_zero() {
        if let Some((d, gamma)) = as_inversion_left(m) {
            return CornerStructure::InversionLeft { d, gamma };
        }
    }
    if m.m[2][0].is_zero() {
        if let Some((gamma, d)) = as_upper_unit(m) {
            return CornerStructure::UpperUnit { gamma, d };
        }
    }
    CornerStructure::None
}

/// Writes M as a letter word times a trailing diagonal: M = W * D, where W
/// alternates translations and inversions.
pub fn decompose_generators(
    m: &UnitaryMatrix,
    cfg: &DomainConfig,
) -> Result<(Vec<Letter>, Diagonal)> {
    let (letters, d) = decompose_letters(m, cfg)?;
    let rebuilt = letters_to_matrix(&letters).mul(&d.to_matrix());
    if rebuilt != *m {
        return Err(Error::Internal(
            "generator decomposition does not recompose".into(),
        ));
    }
    Ok((letters, d))
}

fn decompose_letters(m: &UnitaryMatrix, cfg: &DomainConfig) -> Result<(Vec<Letter>, Diagonal)> {
    if m.m[0][2].is_zero() {
        let (d, gamma) = as_translation_like(m).ok_or_else(|| {
            Error::Internal("Q = 0 but the translation-like pattern failed".into())
        })?;
        // D T = T' D
        let g2 = d.transform_point(&gamma);
        return Ok((normalize_letters([Letter::T(g2)]), d));
    }
    if m.m[0][0].is_zero() {
        let (d, gamma) = as_inversion_like(m).ok_or_else(|| {
            Error::Internal("Q' = 0 but the inversion-like pattern failed".into())
        })?;
        let g2 = d.transform_point(&gamma);
        return Ok((normalize_letters([Letter::T(g2), Letter::J]), d));
    }
    // Generic case: expand the first column (Q':R':P'), a rational point of
    // the quadric, into its terminating digit sequence. The word matrix M'
    // built from those digits shares M's first column up to a unit, so
    // M'^(-1) M is upper triangular and peels off as J T_gamma J D.
    let q = GaussianRational::from_integer(m.q_prime().clone());
    let r = GaussianRational::from_integer(m.r_prime().clone());
    let p = GaussianRational::from_integer(m.p_prime().clone());
    let h = HeisenbergPoint::new(r.div(&q)?, p.div(&q)?, &cfg.decision)?;
    let digits = rational_digits(&h, cfg)?;
    let mut letters = Vec::new();
    for (k, g) in digits.iter().enumerate() {
        if k > 0 {
            letters.push(Letter::J);
        }
        letters.push(Letter::T(g.clone()));
    }
    let m_prime = letters_to_matrix(&letters);
    let n = m_prime.inverse().mul(m);
    let (gamma, d) = as_upper_unit(&n).ok_or_else(|| {
        Error::Internal("M'^(-1) M is not of the J T J D shape".into())
    })?;
    letters.push(Letter::J);
    letters.push(Letter::T(gamma));
    letters.push(Letter::J);
    Ok((normalize_letters(letters), d))
}

/// Applies the diagonal commutation T_gamma -> T_(D gamma D^-1) to every
/// translation letter.
pub fn conjugate_letters_by_diagonal(letters: &[Letter], d: &Diagonal) -> Vec<Letter> {
    letters
        .iter()
        .map(|l| match l {
            Letter::J => Letter::J,
            Letter::T(g) => Letter::T(d.transform_point(g)),
        })
        .collect()
}

/// Writes M^4 as a generator word T_(g0) J T_(g1) J ... J T_(gn) J with
/// nonzero interior letters.
///
/// M factors as W D with W a letter word and D diagonal; pushing the four
/// copies of D rightward through W transforms the letters by powers of the
/// diagonal commutation and the D^4 = I tail disappears. Interior identity
/// translations collapse via T J T_(0,0) J T' = T T'.
pub fn decompose_power4(m: &UnitaryMatrix, cfg: &DomainConfig) -> Result<GeneratorWord> {
    let (letters, d) = decompose_letters(m, cfg)?;
    let mut all = Vec::with_capacity(4 * letters.len());
    let mut dk = Diagonal::identity();
    for _ in 0..4 {
        all.extend(conjugate_letters_by_diagonal(&letters, &dk));
        dk = dk.mul(&d);
    }
    let normalized = normalize_letters(all);
    let word = GeneratorWord::from_normalized_letters(&normalized)?;
    let m4 = m.pow(4);
    if word.to_matrix() != m4 {
        return Err(Error::Internal(
            "power-4 decomposition does not recompose to M^4".into(),
        ));
    }
    Ok(word)
}

/// Divisors of 2520, ascending. 2520 is the lcm of the possible orders of
/// eigenvalue roots of unity: an eigenvalue generates an extension of
/// degree at most 6 over Q, so phi(m) <= 6, and lcm{m : phi(m) <= 6} = 2520.
fn divisors_of_2520() -> Vec<u64> {
    let mut d: Vec<u64> = (1..=2520).filter(|k| 2520 % k == 0).collect();
    d.sort_unstable();
    d
}

/// Decides whether M^n = I for some n >= 1, returning the order when so.
pub fn is_root_of_unity(m: &UnitaryMatrix) -> Option<u64> {
    // Fast rejection: torsion matrices have all eigenvalues on the unit
    // circle, so the characteristic coefficients are bounded: |e1| <= 3,
    // |e2| <= 3, |e3| = 1.
    let e1 = m.trace();
    let e3 = m.det();
    if e1.norm() > BigInt::from(9) || !e3.is_unit() {
        return None;
    }
    let e2 = {
        let mm = &m.m;
        let minor = |i: usize, j: usize| {
            &(&mm[i][i] * &mm[j][j]) - &(&mm[i][j] * &mm[j][i])
        };
        &(&minor(0, 1) + &minor(0, 2)) + &minor(1, 2)
    };
    if e2.norm() > BigInt::from(9) {
        return None;
    }
    if !m.pow(2520).is_identity() {
        return None;
    }
    divisors_of_2520()
        .into_iter()
        .find(|&n| m.pow(n).is_identity())
}

/// Verifies the generator-level dagger identity (J T_gamma)^dagger
/// = J T_(gamma^-1) exactly. Writing gamma = (u, v), the partner letter is
/// (-u, conj v), which is the group inverse of gamma.
pub fn dagger_word_identity_check(gamma: &IntegerPoint) -> bool {
    let lhs = UnitaryMatrix::j()
        .mul(&UnitaryMatrix::translation(gamma))
        .dagger();
    let rhs = UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&gamma.inv()));
    lhs == rhs
}

/// Planar fixed-point pairing: vec(h)^dagger J M vec(h) for an exact
/// rational point; zero iff M fixes h projectively.
pub fn relation_form(m: &UnitaryMatrix, h: &QPoint) -> GaussianRational {
    let vec = h.to_projective();
    let mv = m.act_projective(&vec);
    // vec^dagger J mv = -conj(q) p' + conj(r) r' - conj(p) q'
    let t1 = &vec.q().conj() * mv.p();
    let t2 = &vec.r().conj() * mv.r();
    let t3 = &vec.p().conj() * mv.q();
    &(&t2 - &t1) - &t3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::enumerate_integer_points;

    fn gi(re: i64, im: i64) -> GaussianInteger {
        GaussianInteger::from_i64(re, im)
    }

    fn gamma(re: i64, im: i64, c: i64) -> IntegerPoint {
        IntegerPoint::from_i64(re, im, c).unwrap()
    }

    #[test]
    fn j_squares_to_identity() {
        let j = UnitaryMatrix::j();
        assert!(j.mul(&j).is_identity());
        assert!(verify_unitary(j.entries()));
    }

    #[test]
    fn translation_composition() {
        let g1 = gamma(1, 1, 0);
        let g2 = gamma(2, 0, -1);
        let lhs = UnitaryMatrix::translation(&g1).mul(&UnitaryMatrix::translation(&g2));
        let rhs = UnitaryMatrix::translation(&g1.mul(&g2));
        assert_eq!(lhs, rhs);
        assert!(UnitaryMatrix::translation(&IntegerPoint::zero()).is_identity());
    }

    #[test]
    fn eight_diagonals() {
        let ds = UnitaryMatrix::diagonals();
        assert_eq!(ds.len(), 8);
        let j = UnitaryMatrix::j();
        for d in &ds {
            assert!(verify_unitary(d.entries()));
            assert!(d.pow(4).is_identity());
            assert_eq!(d.mul(&j), j.mul(d));
            // determinant is +-1 for the listed eight
            let det = d.det();
            assert!(det.is_one() || (-&det).is_one());
        }
        // pairwise distinct
        for (i, a) in ds.iter().enumerate() {
            for b in ds.iter().skip(i + 1) {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let mut e = UnitaryMatrix::identity().entries().clone();
        e[0][2] = gi(1, 0);
        assert!(!verify_unitary(&e));
        assert!(UnitaryMatrix::new(e).is_err());
    }

    #[test]
    fn translations_verify_for_random_lattice_points() {
        for g in enumerate_integer_points(2, 2) {
            assert!(verify_unitary(UnitaryMatrix::translation(&g).entries()));
        }
    }

    #[test]
    fn action_matches_group_operations() {
        let h = QPoint::from_rationals(
            GaussianRational::new(gi(3, 1), 5).unwrap(),
            GaussianRational::new(gi(1, 7), 5).unwrap(),
        )
        .unwrap();
        // identity acts trivially
        assert_eq!(UnitaryMatrix::identity().act(&h).unwrap(), h);
        // T_gamma acts as left translation
        let g = gamma(1, -1, 2);
        assert_eq!(
            UnitaryMatrix::translation(&g).act(&h).unwrap(),
            h.translate(&g)
        );
        assert_eq!(
            UnitaryMatrix::translation(&g).act(&QPoint::origin()).unwrap(),
            g.to_planar()
        );
        // J acts as the Koranyi inversion
        assert_eq!(
            UnitaryMatrix::j().act(&h).unwrap(),
            h.koranyi_inv().unwrap()
        );
        // J at the origin lands at infinity
        assert_eq!(
            UnitaryMatrix::j().act(&QPoint::origin()),
            Err(Error::PointAtInfinity)
        );
    }

    #[test]
    fn inverse_properties() {
        let j = UnitaryMatrix::j();
        assert_eq!(j.inverse(), j);
        let g = gamma(2, 2, 1);
        assert_eq!(
            UnitaryMatrix::translation(&g).inverse(),
            UnitaryMatrix::translation(&g.inv())
        );
        for d in UnitaryMatrix::diagonals() {
            assert_eq!(d.inverse(), d.dagger());
            assert!(d.mul(&d.inverse()).is_identity());
        }
        let m = j.mul(&UnitaryMatrix::translation(&g));
        assert!(m.mul(&m.inverse()).is_identity());
    }

    #[test]
    fn frozen_word_product() {
        // J T_(2, 2+i) computed by hand
        let m = UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&gamma(2, 0, 1)));
        let expect = [
            [gi(-2, -1), gi(-2, 0), gi(-1, 0)],
            [gi(2, 0), gi(1, 0), gi(0, 0)],
            [gi(-1, 0), gi(0, 0), gi(0, 0)],
        ];
        assert_eq!(m.entries(), &expect);
    }

    #[test]
    fn dagger_identity_uses_the_group_inverse() {
        // (J T_gamma)^dagger = J T_(gamma^-1); the coordinate-conjugate
        // variants (conj u, v) and (u, conj v) both fail in general.
        for g in enumerate_integer_points(2, 2) {
            assert!(dagger_word_identity_check(&g), "{g}");
        }
        let g = gamma(2, 0, 1);
        let lhs = UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&g)).dagger();
        let coord_conj = IntegerPoint::new(g.a().conj(), g.c().clone()).unwrap();
        let wrong = UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&coord_conj));
        assert_ne!(lhs, wrong);
    }

    #[test]
    fn diagonal_commutation() {
        for dm in UnitaryMatrix::diagonals() {
            let d = match corner_zero_structure(&dm) {
                CornerStructure::TranslationLike { d, gamma } => {
                    assert!(gamma.is_zero());
                    d
                }
                other => panic!("diagonal classified as {other:?}"),
            };
            for g in enumerate_integer_points(2, 1) {
                let lhs = dm.mul(&UnitaryMatrix::translation(&g));
                let g2 = d.transform_point(&g);
                let rhs = UnitaryMatrix::translation(&g2).mul(&dm);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn corner_structures() {
        let g = gamma(2, 0, 1);
        let t = UnitaryMatrix::translation(&g);
        match corner_zero_structure(&t) {
            CornerStructure::TranslationLike { d, gamma: gg } => {
                assert!(d.is_identity());
                assert_eq!(gg, g);
            }
            other => panic!("{other:?}"),
        }
        let tj = t.mul(&UnitaryMatrix::j());
        assert!(matches!(
            corner_zero_structure(&tj),
            CornerStructure::InversionLike { .. }
        ));
        let jt = UnitaryMatrix::j().mul(&t);
        match corner_zero_structure(&jt) {
            CornerStructure::InversionLeft { d, gamma: gg } => {
                assert!(d.is_identity());
                assert_eq!(gg, g);
            }
            other => panic!("{other:?}"),
        }
        // generic word J T J T' has no zero corner
        let m = UnitaryMatrix::j()
            .mul(&UnitaryMatrix::translation(&g))
            .mul(&UnitaryMatrix::j())
            .mul(&UnitaryMatrix::translation(&gamma(1, 1, -1)));
        assert!(matches!(corner_zero_structure(&m), CornerStructure::None));
    }

    #[test]
    fn zero_corner_always_classifies() {
        // any constructed unitary with a zero corner must match one of the
        // four corner patterns
        let mut mats = vec![UnitaryMatrix::identity(), UnitaryMatrix::j()];
        for g in enumerate_integer_points(2, 1) {
            let t = UnitaryMatrix::translation(&g);
            mats.push(t.clone());
            mats.push(t.mul(&UnitaryMatrix::j()));
            mats.push(UnitaryMatrix::j().mul(&t));
            for d in UnitaryMatrix::diagonals() {
                mats.push(d.mul(&t));
                mats.push(d.mul(&t).mul(&UnitaryMatrix::j()));
            }
        }
        for m in &mats {
            let has_zero_corner = m.entry(0, 0).is_zero()
                || m.entry(0, 2).is_zero()
                || m.entry(2, 0).is_zero()
                || m.entry(2, 2).is_zero();
            if has_zero_corner {
                assert!(
                    !matches!(corner_zero_structure(m), CornerStructure::None),
                    "unclassified zero corner in\n{m}"
                );
            }
        }
    }

    #[test]
    fn word_letters_roundtrip() {
        let w = GeneratorWord::new(
            Some(gamma(1, 1, 0)),
            vec![gamma(2, 0, 1), gamma(0, 2, -1)],
            true,
        )
        .unwrap();
        let letters = w.to_letters();
        let back = GeneratorWord::from_normalized_letters(&normalize_letters(letters)).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn word_normalization_collapses() {
        // J T_(0,0) J = I
        let letters = normalize_letters([
            Letter::J,
            Letter::T(IntegerPoint::zero()),
            Letter::J,
        ]);
        assert!(letters.is_empty());
        // T J T0 J T' = T T'
        let g1 = gamma(1, 1, 0);
        let g2 = gamma(1, -1, 2);
        let letters = normalize_letters([
            Letter::T(g1.clone()),
            Letter::J,
            Letter::T(IntegerPoint::zero()),
            Letter::J,
            Letter::T(g2.clone()),
        ]);
        assert_eq!(letters, vec![Letter::T(g1.mul(&g2))]);
    }

    #[test]
    fn word_to_matrix_examples() {
        // empty word with zero leading letter is the identity
        let w = GeneratorWord::new(Some(IntegerPoint::zero()), vec![], false).unwrap();
        assert!(w.to_matrix().is_identity());
        // J T_(0,0) J = I
        let w = GeneratorWord::new(None, vec![IntegerPoint::zero()], true).unwrap();
        assert!(w.to_matrix().is_identity());
        // J T_gamma frozen product
        let w = GeneratorWord::new(None, vec![gamma(2, 0, 1)], false).unwrap();
        let m = w.to_matrix();
        assert_eq!(m.entry(0, 0), &gi(-2, -1));
    }

    #[test]
    fn decompose_power4_small_cases() {
        let cfg = DomainConfig::default();
        // identity
        let w = decompose_power4(&UnitaryMatrix::identity(), &cfg).unwrap();
        assert!(w.to_matrix().is_identity());
        // J: J^4 = I
        let w = decompose_power4(&UnitaryMatrix::j(), &cfg).unwrap();
        assert!(w.to_matrix().is_identity());
        // J T_gamma
        let m = UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&gamma(2, 0, 1)));
        let w = decompose_power4(&m, &cfg).unwrap();
        assert_eq!(w.to_matrix(), m.pow(4));
        // a translation
        let t = UnitaryMatrix::translation(&gamma(1, 1, -2));
        let w = decompose_power4(&t, &cfg).unwrap();
        assert_eq!(w.to_matrix(), t.pow(4));
        // a diagonal with determinant i (unitary relation holds, outside
        // the eight listed): still decomposes, to the empty word
        let mut e: [[GaussianInteger; 3]; 3] = Default::default();
        e[0][0] = gi(1, 0);
        e[1][1] = gi(0, 1);
        e[2][2] = gi(1, 0);
        let m = UnitaryMatrix::new(e).unwrap();
        let w = decompose_power4(&m, &cfg).unwrap();
        assert!(w.to_matrix().is_identity());
    }

    #[test]
    fn torsion_detection() {
        assert_eq!(is_root_of_unity(&UnitaryMatrix::j()), Some(2));
        assert_eq!(is_root_of_unity(&UnitaryMatrix::identity()), Some(1));
        for d in UnitaryMatrix::diagonals() {
            let order = is_root_of_unity(&d).expect("diagonals are torsion");
            assert!(order == 1 || order == 2 || order == 4);
            assert!(4 % order == 0 || order % 2 == 0);
        }
        for g in [gamma(1, 1, 0), gamma(2, 0, 1), gamma(0, 0, 1)] {
            assert_eq!(is_root_of_unity(&UnitaryMatrix::translation(&g)), None);
        }
        let m = UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&gamma(2, 0, 1)));
        assert_eq!(is_root_of_unity(&m), None);
    }

    #[test]
    fn matrix_json_roundtrip() {
        let m = UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&gamma(2, 0, 1)));
        let s = serde_json::to_string(&m).unwrap();
        let back: UnitaryMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        // tampered matrix fails to deserialize
        let bad = s.replace("-2-1i", "5");
        assert!(serde_json::from_str::<UnitaryMatrix>(&bad).is_err());
    }

    #[test]
    fn relation_form_examples() {
        let h = QPoint::from_rationals(
            GaussianRational::new(gi(3, 1), 5).unwrap(),
            GaussianRational::new(gi(1, 7), 5).unwrap(),
        )
        .unwrap();
        assert!(relation_form(&UnitaryMatrix::identity(), &h).is_zero());
        // a nonzero translation never satisfies the relation at a finite point
        let t = UnitaryMatrix::translation(&gamma(1, 1, 0));
        assert!(!relation_form(&t, &h).is_zero());
    }
}
