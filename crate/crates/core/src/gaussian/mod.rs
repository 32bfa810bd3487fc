//! Exact arithmetic over the Gaussian integers Z[i], the Gaussian rationals
//! Q(i), and certified complex ball arithmetic.
//!
//! Every other module builds on these scalars. All values are immutable and
//! all operations are pure.

mod ball;
mod int;
mod rat;
mod real;

pub use ball::{ComplexBall, Dyadic, RealBall};
pub use int::GaussianInteger;
pub use rat::GaussianRational;
pub use real::Rat;

/// Escalation policy for inexact decisions.
///
/// Comparisons on exact scalars that cannot be settled symbolically are
/// evaluated to balls starting at `precision_start` bits; the precision
/// doubles until the decision separates or `precision_cap` is reached, at
/// which point `Error::PrecisionExhausted` is raised. Failure is always
/// explicit; a wrong digit is never returned silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub precision_start: u32,
    pub precision_cap: u32,
}

impl Decision {
    pub const fn new(precision_start: u32, precision_cap: u32) -> Self {
        Decision {
            precision_start,
            precision_cap,
        }
    }

    /// Iterator over the doubling precision schedule.
    pub fn schedule(&self) -> impl Iterator<Item = u32> {
        let start = self.precision_start.max(2);
        let cap = self.precision_cap.max(start);
        std::iter::successors(Some(start), move |p| {
            if *p >= cap {
                None
            } else {
                Some((p.saturating_mul(2)).min(cap))
            }
        })
    }
}

impl Default for Decision {
    fn default() -> Self {
        Decision::new(128, 65536)
    }
}
