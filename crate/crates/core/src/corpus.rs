//! Deterministic seeded generators for tests and the self-test suite.
//!
//! Everything flows from a single ChaCha seed; no wall clock, no thread
//! scheduling, no platform dependence.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gaussian::{Decision, GaussianInteger, GaussianRational, Rat};
use crate::numfield::{char_poly, factor_spectrum, fixed_point_of, FixedPoint, RootSelector};
use crate::numfield::isolate_roots;
use crate::siegel::{IntegerPoint, QPoint};
use crate::unitary::{is_root_of_unity, GeneratorWord, UnitaryMatrix};
use crate::cf::DigitSequence;

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Derives an independent stream for a subtask.
    pub fn derive(seed: u64, stream: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15)),
        }
    }

    fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// A lattice point with |re a|, |im a| <= a_bound and |c| <= c_bound.
    pub fn integer_point(&mut self, a_bound: i64, c_bound: i64) -> IntegerPoint {
        loop {
            let re = self.int_in(-a_bound, a_bound);
            let im = self.int_in(-a_bound, a_bound);
            if (re + im) % 2 != 0 {
                continue;
            }
            let c = self.int_in(-c_bound, c_bound);
            return IntegerPoint::from_i64(re, im, c).expect("parity enforced");
        }
    }

    pub fn nonzero_integer_point(&mut self, a_bound: i64, c_bound: i64) -> IntegerPoint {
        loop {
            let g = self.integer_point(a_bound, c_bound);
            if !g.is_zero() {
                return g;
            }
        }
    }

    /// A digit with |v| >= 2, the kind that contracts well.
    pub fn heavy_integer_point(&mut self) -> IntegerPoint {
        loop {
            let g = self.integer_point(2, 3);
            let v = g.v();
            if v.norm() >= 4.into() {
                return g;
            }
        }
    }

    /// A random generator word with the given number of body letters.
    pub fn word(&mut self, max_len: usize, a_bound: i64, c_bound: i64) -> GeneratorWord {
        let len = self.int_in(1, max_len as i64) as usize;
        let leading = if self.rng.gen_bool(0.5) {
            Some(self.integer_point(a_bound, c_bound))
        } else {
            None
        };
        let body: Vec<IntegerPoint> = (0..len)
            .map(|_| self.nonzero_integer_point(a_bound, c_bound))
            .collect();
        let trailing_j = self.rng.gen_bool(0.5);
        GeneratorWord::new(leading, body, trailing_j).expect("body letters nonzero")
    }

    /// A random exact rational point on the quadric.
    pub fn rational_point(&mut self, num_bound: i64, den_bound: i64) -> QPoint {
        let den = self.int_in(2, den_bound);
        let u = GaussianRational::new(
            GaussianInteger::from_i64(self.int_in(-num_bound, num_bound), self.int_in(-num_bound, num_bound)),
            den,
        )
        .expect("den > 0");
        let im = Rat::new(self.int_in(-num_bound, num_bound), self.int_in(2, den_bound)).unwrap();
        let re = &u.norm_sq() * &Rat::new(1, 2).unwrap();
        let v = GaussianRational::from_rat_pair(&re, &im);
        QPoint::from_rationals(u, v).expect("constructed on the quadric")
    }

    /// A non-torsion word matrix.
    pub fn nontorsion_word_matrix(&mut self, max_len: usize) -> (GeneratorWord, UnitaryMatrix) {
        loop {
            let w = self.word(max_len, 3, 3);
            let m = w.to_matrix();
            if is_root_of_unity(&m).is_none() {
                return (w, m);
            }
        }
    }

    /// A pure-form word J T ... J T with a finite fixed point, suitable for
    /// the orbit identities.
    pub fn word_with_fixed_point(
        &mut self,
        max_len: usize,
        ctx: &Decision,
    ) -> (GeneratorWord, UnitaryMatrix, FixedPoint) {
        loop {
            let len = self.int_in(1, max_len as i64) as usize;
            let body: Vec<IntegerPoint> = (0..len).map(|_| self.heavy_integer_point()).collect();
            let Ok(w) = GeneratorWord::new(None, body, false) else {
                continue;
            };
            let m = w.to_matrix();
            if is_root_of_unity(&m).is_some() {
                continue;
            }
            match fixed_point_of(&m, RootSelector::Auto, ctx) {
                Ok(fp) => return (w, m, fp),
                Err(Error::PointAtInfinity | Error::SelectionError(_)) => continue,
                Err(Error::PrecisionExhausted { .. }) => continue,
                Err(e) => panic!("unexpected corpus failure: {e}"),
            }
        }
    }

    /// An expansion-grade matrix: word form, non-torsion, certified
    /// loxodromic (an eigenvalue with |lambda|^2 > 3/2), with a finite
    /// fixed point. Parabolic matrices converge too slowly to be useful
    /// test targets at fixed digit budgets.
    pub fn expansion_matrix(&mut self, ctx: &Decision) -> (UnitaryMatrix, FixedPoint) {
        loop {
            let len = self.int_in(1, 3) as usize;
            let body: Vec<IntegerPoint> = (0..len).map(|_| self.heavy_integer_point()).collect();
            let leading = if self.rng.gen_bool(0.3) {
                Some(self.integer_point(2, 2))
            } else {
                None
            };
            let Ok(w) = GeneratorWord::new(leading, body, self.rng.gen_bool(0.3)) else {
                continue;
            };
            let m = w.to_matrix();
            if is_root_of_unity(&m).is_some() {
                continue;
            }
            if !certified_loxodromic(&m, ctx) {
                continue;
            }
            match fixed_point_of(&m, RootSelector::Auto, ctx) {
                Ok(fp) => return (m, fp),
                Err(Error::PointAtInfinity | Error::SelectionError(_)) => continue,
                Err(Error::PrecisionExhausted { .. }) => continue,
                Err(e) => panic!("unexpected corpus failure: {e}"),
            }
        }
    }

    /// An eventually periodic digit sequence with nonzero digits.
    pub fn digit_sequence(&mut self, pre_max: usize, per_max: usize) -> DigitSequence {
        let pre_len = self.int_in(0, pre_max as i64) as usize;
        let per_len = self.int_in(1, per_max as i64) as usize;
        let preperiod: Vec<IntegerPoint> = (0..pre_len)
            .map(|_| self.nonzero_integer_point(3, 3))
            .collect();
        let period: Vec<IntegerPoint> = (0..per_len)
            .map(|_| self.nonzero_integer_point(3, 3))
            .collect();
        DigitSequence::periodic(preperiod, period).expect("period nonempty")
    }

    pub fn gen_bool(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A random nonzero Gaussian rational scale factor.
    pub fn nonzero_scale(&mut self, bound: i64) -> GaussianRational {
        loop {
            let z = GaussianRational::new(
                GaussianInteger::from_i64(self.int_in(-bound, bound), self.int_in(-bound, bound)),
                self.int_in(1, bound),
            )
            .unwrap();
            if !z.is_zero() {
                return z;
            }
        }
    }
}

/// True when some eigenvalue is certified off the unit circle.
fn certified_loxodromic(m: &UnitaryMatrix, ctx: &Decision) -> bool {
    let Ok(factors) = factor_spectrum(&char_poly(m)) else {
        return false;
    };
    for (f, _) in factors {
        if f.degree() == Some(1) {
            continue; // unit roots sit on the circle
        }
        let Ok(roots) = isolate_roots(&f, ctx) else {
            continue;
        };
        for r in roots {
            let m2 = r.abs_sq();
            if let Some(std::cmp::Ordering::Greater) = m2.cmp_rat(&Rat::new(3, 2).unwrap()) {
                return true;
            }
        }
    }
    false
}
