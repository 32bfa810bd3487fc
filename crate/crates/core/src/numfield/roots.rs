//! Certified root isolation for low-degree polynomials over Q(i).
//!
//! Approximation is heuristic (Durand-Kerner seeding plus Newton polish at
//! dyadic precision); certification is an interval Newton contraction: if
//! N(X) = z - f(z)/f'(X) maps the disk X strictly into itself, X contains
//! exactly one root of f and N(X) encloses it. Disjointness of the
//! certified disks is checked exactly on dyadic midpoints.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::gaussian::{ComplexBall, Decision, Dyadic};

use super::poly::Poly;

/// Midpoint-only complex arithmetic at a fixed precision, used by the
/// heuristic stages. Errors are ignored; certification comes later.
#[derive(Clone, Debug)]
struct Approx {
    re: Dyadic,
    im: Dyadic,
}

impl Approx {
    fn zero() -> Self {
        Approx {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        }
    }

    fn round(&self, p: u32) -> Self {
        Approx {
            re: self.re.round(p).0,
            im: self.im.round(p).0,
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        Approx {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        Approx {
            re: self.re.sub(&rhs.re),
            im: self.im.sub(&rhs.im),
        }
    }

    fn mul(&self, rhs: &Self, p: u32) -> Self {
        Approx {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
        .round(p)
    }

    fn div(&self, rhs: &Self, p: u32) -> Option<Self> {
        let nsq = rhs.re.mul(&rhs.re).add(&rhs.im.mul(&rhs.im));
        if nsq.is_zero() {
            return None;
        }
        let num = self.mul(
            &Approx {
                re: rhs.re.clone(),
                im: rhs.im.neg(),
            },
            p + 8,
        );
        Some(Approx {
            re: num.re.div(&nsq, p).ok()?.0,
            im: num.im.div(&nsq, p).ok()?.0,
        })
    }

    fn mag_sq(&self) -> Dyadic {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }
}

fn eval_approx(f: &Poly, z: &Approx, p: u32) -> Approx {
    let mut acc = Approx::zero();
    for c in f.coeffs().iter().rev() {
        let cb = ComplexBall::from_rational(c, p);
        acc = acc.mul(z, p).add(&Approx {
            re: cb.re().clone(),
            im: cb.im().clone(),
        });
    }
    acc.round(p)
}

/// Upper bound for |c| of a rational as a dyadic.
fn abs_upper(c: &crate::gaussian::GaussianRational, p: u32) -> Dyadic {
    let b = ComplexBall::from_rational(c, p);
    b.mag_upper()
}

/// Cauchy root bound 1 + max |c_k| for a monic polynomial.
fn cauchy_bound(f: &Poly, p: u32) -> Dyadic {
    let mut m = Dyadic::zero();
    let deg = f.degree().unwrap_or(0);
    for c in f.coeffs().iter().take(deg) {
        m = m.max(&abs_upper(c, p));
    }
    m.add(&Dyadic::one())
}

/// Durand-Kerner sweep at precision `p`; returns `deg` approximations.
fn durand_kerner(f: &Poly, p: u32) -> Vec<Approx> {
    let deg = f.degree().expect("nonzero poly");
    let radius = cauchy_bound(f, 32);
    // seed angle generator (0.4 + 0.9 i)^k, slightly off the unit circle
    let w = Approx {
        re: Dyadic::from_i64(2).div(&Dyadic::from_i64(5), 32).unwrap().0,
        im: Dyadic::from_i64(9).div(&Dyadic::from_i64(10), 32).unwrap().0,
    };
    let mut roots: Vec<Approx> = Vec::with_capacity(deg);
    let mut cur = Approx {
        re: radius.clone(),
        im: radius.round(16).0,
    };
    for _ in 0..deg {
        cur = cur.mul(&w, 64);
        roots.push(cur.clone());
    }
    let tol = Dyadic::pow2(-(2 * p as i64) / 3);
    for _ in 0..400 {
        let mut max_step = Dyadic::zero();
        for k in 0..deg {
            let fz = eval_approx(f, &roots[k], p);
            let mut denom = Approx {
                re: Dyadic::one(),
                im: Dyadic::zero(),
            };
            for j in 0..deg {
                if j != k {
                    denom = denom.mul(&roots[k].sub(&roots[j]), p);
                }
            }
            let Some(step) = fz.div(&denom, p) else {
                // coincident iterates; nudge and continue
                roots[k] = roots[k].add(&Approx {
                    re: Dyadic::pow2(-7),
                    im: Dyadic::pow2(-9),
                });
                continue;
            };
            roots[k] = roots[k].sub(&step).round(p);
            max_step = max_step.max(&step.mag_sq());
        }
        if max_step.cmp(&tol.mul(&tol)) == Ordering::Less {
            break;
        }
    }
    roots
}

/// Newton polish of one approximation at precision `p`.
fn newton_polish(f: &Poly, fp: &Poly, z0: &Approx, p: u32) -> Approx {
    let mut z = z0.round(p);
    let iters = (p.ilog2() as usize) + 8;
    for _ in 0..iters {
        let fz = eval_approx(f, &z, p);
        let dz = eval_approx(fp, &z, p);
        match fz.div(&dz, p) {
            Some(step) => {
                let next = z.sub(&step).round(p);
                if step.mag_sq().is_zero() {
                    return next;
                }
                z = next;
            }
            None => break,
        }
    }
    z
}

/// Interval Newton contraction test on the disk of radius `r` around `z`.
/// On success returns the refined certified enclosure (which contains the
/// unique root of `f` inside the disk).
fn certify_disk(f: &Poly, fp: &Poly, z: &Approx, r: &Dyadic, p: u32) -> Option<ComplexBall> {
    let x = ComplexBall::new(z.re.clone(), z.im.clone(), r.clone(), p);
    let fz = f.eval_ball(&ComplexBall::from_dyadic(z.re.clone(), z.im.clone(), p), p);
    let dfx = fp.eval_ball(&x, p);
    let step = fz.div(&dfx).ok()?;
    let n = ComplexBall::from_dyadic(z.re.clone(), z.im.clone(), p).sub(&step);
    // strict containment: |mid(N) - z| + rad(N) < r
    let shift = n
        .sub(&ComplexBall::from_dyadic(z.re.clone(), z.im.clone(), p))
        .mag_upper();
    let reach = shift.add(n.rad());
    (reach.cmp(r) == Ordering::Less).then_some(n)
}

fn disks_disjoint(a: &ComplexBall, b: &ComplexBall) -> bool {
    let dre = a.re().sub(b.re());
    let dim = a.im().sub(b.im());
    let dist_sq = dre.mul(&dre).add(&dim.mul(&dim));
    let rsum = a.rad().add(b.rad());
    dist_sq.cmp(&rsum.mul(&rsum)) == Ordering::Greater
}

/// Isolates all roots of a squarefree polynomial of degree 1..=3.
/// Returns certified pairwise-disjoint enclosures sorted by midpoint
/// (re, then im).
pub fn isolate_roots(f: &Poly, ctx: &Decision) -> Result<Vec<ComplexBall>> {
    let deg = f
        .degree()
        .ok_or_else(|| Error::MalformedInput("zero polynomial".into()))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg > 3 {
        return Err(Error::MalformedInput(format!(
            "degree {deg} exceeds the supported bound 3"
        )));
    }
    if !f.is_squarefree()? {
        return Err(Error::MalformedInput(
            "root isolation requires a squarefree polynomial".into(),
        ));
    }
    if deg == 1 {
        // exact root -c0 / c1
        let root = -&(f.coeff(0).div(&f.coeff(1))?);
        return Ok(vec![ComplexBall::from_rational(
            &root,
            ctx.precision_start.max(64),
        )]);
    }
    let fp = f.derivative();
    let start = ctx.precision_start.max(64);
    let mut p = start;
    loop {
        let approx: Vec<Approx> = durand_kerner(f, p)
            .iter()
            .map(|z| newton_polish(f, &fp, z, p))
            .collect();
        let r = Dyadic::pow2(-(p as i64) / 3);
        let certified: Vec<Option<ComplexBall>> = approx
            .iter()
            .map(|z| certify_disk(f, &fp, z, &r, p))
            .collect();
        if certified.iter().all(Option::is_some) {
            let mut boxes: Vec<ComplexBall> =
                certified.into_iter().map(Option::unwrap).collect();
            let mut ok = true;
            'outer: for i in 0..boxes.len() {
                for j in i + 1..boxes.len() {
                    if !disks_disjoint(&boxes[i], &boxes[j]) {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            if ok {
                boxes.sort_by(|a, b| {
                    a.re()
                        .cmp(b.re())
                        .then_with(|| a.im().cmp(b.im()))
                });
                return Ok(boxes);
            }
        }
        if p >= ctx.precision_cap {
            return Err(Error::PrecisionExhausted {
                bits: ctx.precision_cap,
            });
        }
        p = (p * 2).min(ctx.precision_cap);
    }
}

/// Refines a certified enclosure of a root of `f` down to radius about
/// 2^-(prec+8), staying inside the original isolating disk.
pub fn refine_root(
    f: &Poly,
    base: &ComplexBall,
    prec: u32,
    ctx: &Decision,
) -> Result<ComplexBall> {
    if let Some(1) = f.degree() {
        let root = -&(f.coeff(0).div(&f.coeff(1))?);
        return Ok(ComplexBall::from_rational(&root, prec));
    }
    let fp = f.derivative();
    let mut wp = prec + 32;
    loop {
        let seed = Approx {
            re: base.re().clone(),
            im: base.im().clone(),
        };
        let z = newton_polish(f, &fp, &seed, wp);
        let r = Dyadic::pow2(-(prec as i64) - 8);
        if let Some(n) = certify_disk(f, &fp, &z, &r, wp) {
            // same-root check: the refined disk must sit inside the
            // isolating disk (conservative componentwise test).
            let dre = n.re().sub(base.re());
            let dim = n.im().sub(base.im());
            let dist_sq = dre.mul(&dre).add(&dim.mul(&dim));
            let slack = base.rad().sub(n.rad());
            if !slack.is_negative() && dist_sq.cmp(&slack.mul(&slack)) != Ordering::Greater {
                return Ok(n);
            }
        }
        if wp >= ctx.precision_cap {
            return Err(Error::PrecisionExhausted {
                bits: ctx.precision_cap,
            });
        }
        wp = (wp * 2).min(ctx.precision_cap);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational;

    #[test]
    fn isolates_quadratic_pair() {
        // t^2 + 1: roots +-i
        let f = Poly::from_i64_coeffs(&[(1, 0), (0, 0), (1, 0)]);
        let roots = isolate_roots(&f, &Decision::default()).unwrap();
        assert_eq!(roots.len(), 2);
        // sorted by (re, im): -i before i
        assert!(roots[0].im().is_negative());
        assert!(!roots[1].im().is_negative());
        for r in &roots {
            let val = f.eval_ball(r, 64);
            assert!(val.contains_zero());
        }
    }

    #[test]
    fn isolates_cubic_with_gaussian_coeffs() {
        // char poly of J T_(2, 2+i): t^3 + (1+i)t^2 + (1-i)t + 1
        let f = Poly::from_i64_coeffs(&[(1, 0), (1, -1), (1, 1), (1, 0)]);
        let roots = isolate_roots(&f, &Decision::default()).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(f.eval_ball(r, 128).contains_zero());
        }
    }

    #[test]
    fn refine_shrinks_radius() {
        let f = Poly::from_i64_coeffs(&[(1, 0), (1, -1), (1, 1), (1, 0)]);
        let ctx = Decision::default();
        let roots = isolate_roots(&f, &ctx).unwrap();
        let fine = refine_root(&f, &roots[0], 256, &ctx).unwrap();
        assert!(fine.rad().cmp(&Dyadic::pow2(-250)) == Ordering::Less);
        assert!(f.eval_ball(&fine, 300).contains_zero());
    }

    #[test]
    fn square_root_via_isolation() {
        // t^2 - (3+4i): roots +-(2+i)
        let f = Poly::new(vec![
            GaussianRational::from_i64(-3, -4),
            GaussianRational::zero(),
            GaussianRational::one(),
        ]);
        let roots = isolate_roots(&f, &Decision::default()).unwrap();
        assert_eq!(roots.len(), 2);
        let two_plus_i = GaussianRational::from_i64(2, 1);
        assert!(roots.iter().any(|r| r.contains_rational(&two_plus_i)));
    }

    #[test]
    fn rejects_squareful() {
        let f = Poly::from_i64_coeffs(&[(1, 0), (2, 0), (1, 0)]);
        assert!(isolate_roots(&f, &Decision::default()).is_err());
    }
}
