//! Eigenvalues and fixed points of unitary matrices.
//!
//! The characteristic polynomial of M in U(2,1;Z[i]) is a monic cubic over
//! Z[i] with unit constant term, so any Q(i)-root is one of the four units;
//! the remaining factors are irreducible of degree 2 or 3 and their roots
//! generate the number fields in which fixed points live. A fixed point of
//! M on the quadric is an eigenvector (z1:z2:z3) that is null for the
//! Hermitian form x^dagger J y, dehomogenized at z1.

use std::sync::Arc;


use crate::error::{Error, Result};
use crate::gaussian::{Decision, GaussianInteger, GaussianRational};
use crate::scalar::Scalar;
use crate::siegel::HeisenbergPoint;
use crate::unitary::{is_root_of_unity, UnitaryMatrix};

use super::poly::Poly;
use super::roots::isolate_roots;
use super::{FieldElement, NumberField};

/// det(tI - M), exactly: t^3 - e1 t^2 + e2 t - e3.
pub fn char_poly(m: &UnitaryMatrix) -> Poly {
    let e = m.entries();
    let e1 = m.trace();
    let minor = |i: usize, j: usize| &(&e[i][i] * &e[j][j]) - &(&e[i][j] * &e[j][i]);
    let e2 = &(&minor(0, 1) + &minor(0, 2)) + &minor(1, 2);
    let e3 = m.det();
    Poly::new(vec![
        GaussianRational::from_integer(-&e3),
        GaussianRational::from_integer(e2),
        GaussianRational::from_integer(-&e1),
        GaussianRational::one(),
    ])
}

/// Exact square root in Z[i], if one exists: a high-precision root of
/// t^2 - z rounds to the unique candidate, which is then squared back.
pub fn is_square_zi(z: &GaussianInteger) -> Option<GaussianInteger> {
    if z.is_zero() {
        return Some(GaussianInteger::zero());
    }
    let f = Poly::new(vec![
        -&GaussianRational::from_integer(z.clone()),
        GaussianRational::zero(),
        GaussianRational::one(),
    ]);
    let ctx = Decision::new(64, 4096);
    let roots = isolate_roots(&f, &ctx).ok()?;
    let root = roots.first()?;
    // base isolation boxes are far tighter than 1/4, so rounding the
    // midpoint pins the only possible integer square root
    let cand = GaussianInteger::new(
        root.re().to_nearest_bigint(),
        root.im().to_nearest_bigint(),
    );
    if &cand * &cand != *z {
        return None;
    }
    // normalize: re > 0, or re = 0 with im > 0
    use num_traits::Signed;
    let flip = cand.re().is_negative() || (cand.re().sign() == num_bigint::Sign::NoSign
        && cand.im().is_negative());
    Some(if flip { -&cand } else { cand })
}

/// Exact square root in Q(i): n/d is a square iff n*d is a square in Z[i].
pub fn is_square_qi(q: &GaussianRational) -> Option<GaussianRational> {
    if q.is_zero() {
        return Some(GaussianRational::zero());
    }
    let n = q.num();
    let d = q.den();
    let nd = GaussianInteger::new(n.re() * d, n.im() * d);
    let s = is_square_zi(&nd)?;
    Some(GaussianRational::new(s, d.clone()).expect("d > 0"))
}

/// Factors a monic polynomial with unit-norm constant term over Q(i),
/// returning (factor, multiplicity) pairs in a deterministic order.
/// Unit roots are stripped first (the only possible rational roots);
/// a remaining quadratic is split by the discriminant square test; a
/// remaining cubic is irreducible.
pub fn factor_spectrum(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    if !p.is_monic() {
        return Err(Error::MalformedInput("spectrum polynomial must be monic".into()));
    }
    let deg = p.degree().unwrap_or(0);
    if deg == 0 || deg > 3 {
        return Err(Error::MalformedInput(format!(
            "spectrum degree {deg} is not in 1..=3"
        )));
    }
    if p.coeff(0).norm_sq() != crate::gaussian::Rat::one() {
        return Err(Error::MalformedInput(
            "spectrum polynomial must have a unit-norm constant term".into(),
        ));
    }
    let mut rest = p.clone();
    let mut factors: Vec<(Poly, usize)> = Vec::new();
    for u in GaussianInteger::units() {
        let root = GaussianRational::from_integer(u);
        let mut mult = 0usize;
        while rest.degree().is_some_and(|d| d >= 1) && rest.eval_rational(&root).is_zero() {
            rest = rest.deflate(&root)?;
            mult += 1;
        }
        if mult > 0 {
            factors.push((Poly::linear_from_root(&root), mult));
        }
    }
    match rest.degree() {
        None | Some(0) => {}
        Some(1) => {
            factors.push((rest.clone(), 1));
        }
        Some(2) => {
            let b = rest.coeff(1);
            let c = rest.coeff(0);
            let disc = &(&b * &b) - &(&c * &GaussianRational::from_i64(4, 0));
            match is_square_qi(&disc) {
                Some(s) => {
                    let half = GaussianRational::new(GaussianInteger::one(), 2).unwrap();
                    let r1 = &(&s - &b) * &half;
                    let r2 = &(&(-&s) - &b) * &half;
                    if r1 == r2 {
                        factors.push((Poly::linear_from_root(&r1), 2));
                    } else {
                        factors.push((Poly::linear_from_root(&r1), 1));
                        factors.push((Poly::linear_from_root(&r2), 1));
                    }
                }
                None => factors.push((rest.clone(), 1)),
            }
        }
        Some(_) => factors.push((rest.clone(), 1)),
    }
    factors.sort_by(|a, b| a.0.cmp_key(&b.0));
    // self-check: the factorization recomposes exactly
    let mut prod = Poly::one();
    for (f, mult) in &factors {
        for _ in 0..*mult {
            prod = prod.mul(f);
        }
    }
    if prod != *p {
        return Err(Error::Internal("factorization does not recompose".into()));
    }
    Ok(factors)
}

/// Kernel basis of a 3x3 matrix over the field, by Gauss-Jordan with exact
/// zero tests.
fn kernel_basis(mat: &[[FieldElement; 3]; 3]) -> Result<Vec<[FieldElement; 3]>> {
    let zero = mat[0][0].zero_like();
    let one = zero.add_rational(&GaussianRational::one());
    let mut rows: Vec<Vec<FieldElement>> = mat.iter().map(|r| r.to_vec()).collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut next_row = 0usize;
    for col in 0..3 {
        let Some(pr) = (next_row..3).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pr);
        let inv = rows[next_row][col].inverse()?;
        for c in 0..3 {
            rows[next_row][c] = rows[next_row][c].mul_elem(&inv)?;
        }
        for r in 0..3 {
            if r != next_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..3 {
                    let delta = rows[next_row][c].mul_elem(&factor)?;
                    rows[r][c] = rows[r][c].sub(&delta)?;
                }
            }
        }
        pivot_cols.push(col);
        next_row += 1;
        if next_row == 3 {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..3 {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut vec = [zero.clone(), zero.clone(), zero.clone()];
        vec[free] = one.clone();
        for (row_idx, &pc) in pivot_cols.iter().enumerate() {
            vec[pc] = rows[row_idx][free].neg();
        }
        basis.push(vec);
    }
    Ok(basis)
}

/// Which eigenvector a fixed-point query selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootSelector {
    /// First finite quadric eigenvector in the deterministic
    /// (factor, root) order.
    #[default]
    Auto,
    /// The k-th finite candidate in that order.
    Index(usize),
}

/// An exact fixed point of a non-torsion unitary matrix.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub field: Arc<NumberField>,
    pub point: HeisenbergPoint<FieldElement>,
    pub eigenvalue: FieldElement,
}

/// Computes an exact fixed point of M on the quadric: an eigenvector that
/// is null for the Hermitian form, dehomogenized at its first coordinate.
///
/// Errors: torsion input; `PointAtInfinity` when every quadric eigenvector
/// has z1 = 0; `SelectionError` when no eigenvector lies on the quadric.
pub fn fixed_point_of(
    m: &UnitaryMatrix,
    selector: RootSelector,
    ctx: &Decision,
) -> Result<FixedPoint> {
    if let Some(order) = is_root_of_unity(m) {
        return Err(Error::TorsionMatrix { order });
    }
    let factors = factor_spectrum(&char_poly(m))?;
    let mut finite: Vec<FixedPoint> = Vec::new();
    let mut saw_infinite = false;
    for (f, _mult) in &factors {
        let deg = f.degree().unwrap_or(0);
        for which in 0..deg {
            let field = NumberField::from_factor(f, which, ctx)?;
            let lam = FieldElement::generator(&field);
            let mut a: [[FieldElement; 3]; 3] = std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    FieldElement::from_rational(
                        &field,
                        GaussianRational::from_integer(m.entry(i, j).clone()),
                    )
                })
            });
            for (i, lam_i) in [&lam, &lam, &lam].into_iter().enumerate() {
                a[i][i] = a[i][i].sub(lam_i)?;
            }
            let basis = kernel_basis(&a)?;
            let null_vectors: Vec<[FieldElement; 3]> = match basis.len() {
                0 => {
                    return Err(Error::Internal(
                        "eigenvalue with an empty kernel".into(),
                    ))
                }
                1 => basis,
                2 => rank_deficient_null_vectors(&field, &basis)?,
                _ => {
                    return Err(Error::Internal(
                        "non-torsion matrix with a 3-dimensional eigenspace".into(),
                    ))
                }
            };
            for z in null_vectors {
                if !FieldElement::proj_quadric(&z[0], &z[1], &z[2], ctx)? {
                    continue;
                }
                if z[0].is_zero() {
                    saw_infinite = true;
                    continue;
                }
                let u = z[1].div(&z[0])?;
                let v = z[2].div(&z[0])?;
                let point = HeisenbergPoint::new(u, v, ctx)?;
                finite.push(FixedPoint {
                    field: field.clone(),
                    point,
                    eigenvalue: lam.clone(),
                });
            }
        }
    }
    let chosen = match selector {
        RootSelector::Auto => finite.into_iter().next(),
        RootSelector::Index(k) => finite.into_iter().nth(k),
    };
    match chosen {
        Some(fp) => Ok(fp),
        None if saw_infinite => Err(Error::PointAtInfinity),
        None => Err(Error::SelectionError(
            "no eigenvector lies on the quadric".into(),
        )),
    }
}

/// Null vectors of the Hermitian form restricted to a 2-dimensional
/// eigenspace. This only arises for rational eigenvalues (a repeated
/// irrational eigenvalue would force degree 4); the restricted form is
/// degenerate for non-torsion matrices and its radical is the unique null
/// line.
fn rank_deficient_null_vectors(
    field: &Arc<NumberField>,
    basis: &[[FieldElement; 3]],
) -> Result<Vec<[FieldElement; 3]>> {
    let lower = |e: &FieldElement| -> Result<GaussianRational> {
        e.rational_part().ok_or_else(|| {
            Error::Internal("two-dimensional eigenspace over an irrational eigenvalue".into())
        })
    };
    let k1: Vec<GaussianRational> = basis[0].iter().map(&lower).collect::<Result<_>>()?;
    let k2: Vec<GaussianRational> = basis[1].iter().map(&lower).collect::<Result<_>>()?;
    let pairing = |x: &[GaussianRational], y: &[GaussianRational]| -> GaussianRational {
        let t1 = &x[0].conj() * &y[2];
        let t2 = &x[1].conj() * &y[1];
        let t3 = &x[2].conj() * &y[0];
        &(&t2 - &t1) - &t3
    };
    let g00 = pairing(&k1, &k1);
    let g01 = pairing(&k1, &k2);
    let g10 = pairing(&k2, &k1);
    let g11 = pairing(&k2, &k2);
    let det = &(&g00 * &g11) - &(&g01 * &g10);
    if !det.is_zero() {
        // nondegenerate restriction: a circle of null lines, which only
        // happens for torsion-like rotations
        return Err(Error::SelectionError(
            "eigenspace meets the quadric in a circle, not a point".into(),
        ));
    }
    let (w0, w1) = if !g00.is_zero() {
        (g01.clone(), -&g00)
    } else if !g11.is_zero() {
        (g11.clone(), -&g10)
    } else {
        // g00 = g11 = 0 with det = 0 forces g01 = 0, a totally isotropic
        // plane, impossible for signature (2,1)
        return Err(Error::Internal("totally isotropic eigenplane".into()));
    };
    let w0 = FieldElement::from_rational(field, w0);
    let w1 = FieldElement::from_rational(field, w1);
    let z: [FieldElement; 3] = std::array::from_fn(|k| {
        basis[0][k]
            .mul_elem(&w0)
            .and_then(|a| basis[1][k].mul_elem(&w1).and_then(|b| a.add_elem(&b)))
            .expect("same field")
    });
    if z.iter().all(|c| c.is_zero()) {
        return Err(Error::Internal("zero radical vector".into()));
    }
    Ok(vec![z])
}

/// Exact certificate that M fixes h projectively: M (1,u,v)^T is a scalar
/// multiple of (1,u,v)^T, checked by vanishing 2x2 minors. Since the
/// Hermitian pairing of two quadric vectors vanishes exactly when they are
/// projectively equal, this is equivalent to vec(h)^dagger J M vec(h) = 0.
pub fn colinearity_certificate<S: Scalar>(m: &UnitaryMatrix, h: &HeisenbergPoint<S>) -> Result<bool> {
    let row = |i: usize| -> Result<S> {
        Ok(h.u()
            .zero_like()
            .add_integer(m.entry(i, 0))
            .add(&h.u().mul_integer(m.entry(i, 1)))?
            .add(&h.v().mul_integer(m.entry(i, 2)))?)
    };
    let w0 = row(0)?;
    let w1 = row(1)?;
    let w2 = row(2)?;
    let minor1 = w0.mul(h.u())?.sub(&w1)?;
    let minor2 = w0.mul(h.v())?.sub(&w2)?;
    Ok(minor1.is_zero_certified()? && minor2.is_zero_certified()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::siegel::IntegerPoint;

    fn gamma(re: i64, im: i64, c: i64) -> IntegerPoint {
        IntegerPoint::from_i64(re, im, c).unwrap()
    }

    fn jt(re: i64, im: i64, c: i64) -> UnitaryMatrix {
        UnitaryMatrix::j().mul(&UnitaryMatrix::translation(&gamma(re, im, c)))
    }

    #[test]
    fn char_poly_examples() {
        // identity: (t-1)^3
        let p = char_poly(&UnitaryMatrix::identity());
        assert_eq!(p, Poly::from_i64_coeffs(&[(-1, 0), (3, 0), (-3, 0), (1, 0)]));
        // J: (t-1)^2 (t+1) = t^3 - t^2 - t + 1
        let p = char_poly(&UnitaryMatrix::j());
        assert_eq!(p, Poly::from_i64_coeffs(&[(1, 0), (-1, 0), (-1, 0), (1, 0)]));
        // J T_(2,2+i): frozen by hand, constant term of norm 1
        let p = char_poly(&jt(2, 0, 1));
        assert_eq!(p, Poly::from_i64_coeffs(&[(1, 0), (1, -1), (1, 1), (1, 0)]));
        assert_eq!(p.coeff(0).norm_sq(), crate::gaussian::Rat::one());
    }

    #[test]
    fn factor_examples() {
        let cube = Poly::from_i64_coeffs(&[(-1, 0), (3, 0), (-3, 0), (1, 0)]);
        let f = factor_spectrum(&cube).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].1, 3);
        let j = factor_spectrum(&char_poly(&UnitaryMatrix::j())).unwrap();
        assert_eq!(j.len(), 2);
        let mults: Vec<usize> = j.iter().map(|x| x.1).collect();
        assert_eq!(mults.iter().sum::<usize>(), 3);
        // the cubic from J T_(2,2+i) is irreducible
        let f = factor_spectrum(&char_poly(&jt(2, 0, 1))).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.degree(), Some(3));
    }

    #[test]
    fn squares_in_zi() {
        let z = GaussianInteger::from_i64(3, 4); // (2+i)^2
        assert_eq!(is_square_zi(&z), Some(GaussianInteger::from_i64(2, 1)));
        // i is not a square in Z[i]
        assert_eq!(is_square_zi(&GaussianInteger::i()), None);
        assert_eq!(is_square_zi(&GaussianInteger::from_i64(2, 0)), None);
        // 2i = (1+i)^2
        assert!(is_square_zi(&GaussianInteger::from_i64(0, 2)).is_some());
    }

    #[test]
    fn t_squared_minus_i_is_irreducible() {
        let f = Poly::from_i64_coeffs(&[(0, -1), (0, 0), (1, 0)]);
        assert!(NumberField::from_factor(&f, 0, &Decision::default()).is_ok());
    }

    #[test]
    fn translation_fixed_point_is_infinite() {
        let t = UnitaryMatrix::translation(&gamma(1, 1, 0));
        let err = fixed_point_of(&t, RootSelector::Auto, &Decision::default());
        assert_eq!(err.unwrap_err(), Error::PointAtInfinity);
        // vertical translations have a two-dimensional eigenspace; still
        // only the point at infinity
        let t = UnitaryMatrix::translation(&gamma(0, 0, 1));
        let err = fixed_point_of(&t, RootSelector::Auto, &Decision::default());
        assert_eq!(err.unwrap_err(), Error::PointAtInfinity);
    }

    #[test]
    fn torsion_input_rejected() {
        let err = fixed_point_of(&UnitaryMatrix::j(), RootSelector::Auto, &Decision::default());
        assert!(matches!(err.unwrap_err(), Error::TorsionMatrix { .. }));
    }

    #[test]
    fn cubic_fixed_point_certifies() {
        let ctx = Decision::default();
        let m = jt(2, 0, 1);
        let fp = fixed_point_of(&m, RootSelector::Auto, &ctx).unwrap();
        assert_eq!(fp.field.degree(), 3);
        assert!(colinearity_certificate(&m, &fp.point).unwrap());
        // certificate transfers to the inverse and to powers
        assert!(colinearity_certificate(&m.inverse(), &fp.point).unwrap());
        for k in 2..=4 {
            assert!(colinearity_certificate(&m.pow(k), &fp.point).unwrap());
        }
        // a mismatched matrix fails
        let other = jt(1, 1, 2);
        assert!(!colinearity_certificate(&other, &fp.point).unwrap());
    }

    #[test]
    fn identity_colinearity_is_trivial() {
        let h = crate::siegel::QPoint::from_rationals(
            GaussianRational::new(GaussianInteger::from_i64(3, 1), 5).unwrap(),
            GaussianRational::new(GaussianInteger::from_i64(1, 7), 5).unwrap(),
        )
        .unwrap();
        assert!(colinearity_certificate(&UnitaryMatrix::identity(), &h).unwrap());
        let t = UnitaryMatrix::translation(&gamma(1, 1, 0));
        assert!(!colinearity_certificate(&t, &h).unwrap());
    }
}
