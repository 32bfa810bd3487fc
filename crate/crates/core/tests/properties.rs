//! Property tests for the exact scalar layer and the group operations.

use proptest::prelude::*;

use siegelcf::gaussian::{ComplexBall, Decision, GaussianInteger, GaussianRational, Rat};
use siegelcf::scalar::Scalar;
use siegelcf::siegel::{IntegerPoint, QPoint};

fn arb_gaussian_rational() -> impl Strategy<Value = GaussianRational> {
    (-200i64..=200, -200i64..=200, 1i64..=60).prop_map(|(re, im, den)| {
        GaussianRational::new(GaussianInteger::from_i64(re, im), den).unwrap()
    })
}

/// A random exact point on the quadric: u free, im(v) free, re(v) forced.
fn arb_quadric_point() -> impl Strategy<Value = QPoint> {
    (arb_gaussian_rational(), -200i64..=200, 1i64..=60).prop_map(|(u, vim, vden)| {
        let re = &u.norm_sq() * &Rat::new(1, 2).unwrap();
        let im = Rat::new(vim, vden).unwrap();
        QPoint::from_rationals(u, GaussianRational::from_rat_pair(&re, &im)).unwrap()
    })
}

#[derive(Debug, Clone)]
enum Op {
    Add(GaussianRational),
    Sub(GaussianRational),
    Mul(GaussianRational),
    Div(GaussianRational),
    Conj,
    Neg,
}

fn arb_op() -> impl Strategy<Value = Op> {
    prop_oneof![
        arb_gaussian_rational().prop_map(Op::Add),
        arb_gaussian_rational().prop_map(Op::Sub),
        arb_gaussian_rational().prop_map(Op::Mul),
        arb_gaussian_rational()
            .prop_filter("nonzero divisor", |x| !x.is_zero())
            .prop_map(Op::Div),
        Just(Op::Conj),
        Just(Op::Neg),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_print_roundtrip(x in arb_gaussian_rational()) {
        let s = x.to_string();
        let back: GaussianRational = s.parse().unwrap();
        prop_assert_eq!(back, x);
    }

    /// The exact result of a random operation chain lies inside the ball
    /// result at every precision >= 32.
    #[test]
    fn ball_containment_through_op_chains(
        start in arb_gaussian_rational(),
        ops in proptest::collection::vec(arb_op(), 1..8),
        prec in prop_oneof![Just(32u32), Just(64), Just(128)],
    ) {
        let mut exact = start.clone();
        let mut ball = ComplexBall::from_rational(&start, prec);
        for op in &ops {
            match op {
                Op::Add(k) => {
                    exact = &exact + k;
                    ball = ball.add(&ComplexBall::from_rational(k, prec));
                }
                Op::Sub(k) => {
                    exact = &exact - k;
                    ball = ball.sub(&ComplexBall::from_rational(k, prec));
                }
                Op::Mul(k) => {
                    exact = &exact * k;
                    ball = ball.mul(&ComplexBall::from_rational(k, prec));
                }
                Op::Div(k) => {
                    exact = exact.div(k).unwrap();
                    ball = ball.div(&ComplexBall::from_rational(k, prec)).unwrap();
                }
                Op::Conj => {
                    exact = exact.conj();
                    ball = ball.conj();
                }
                Op::Neg => {
                    exact = -&exact;
                    ball = ball.neg();
                }
            }
        }
        prop_assert!(ball.contains_rational(&exact), "{exact} escaped {ball}");
    }

    #[test]
    fn group_axioms(a in arb_quadric_point(), b in arb_quadric_point(), c in arb_quadric_point()) {
        // associativity, exact
        let left = a.group_mul(&b).unwrap().group_mul(&c).unwrap();
        let right = a.group_mul(&b.group_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        // identity and inverse
        prop_assert_eq!(&QPoint::origin().group_mul(&a).unwrap(), &a);
        let e = a.group_inv().unwrap().group_mul(&a).unwrap();
        prop_assert!(e.is_origin().unwrap());
        // products stay on the quadric (the checked constructor accepts them)
        let ctx = Decision::default();
        prop_assert!(
            QPoint::new(left.u().clone(), left.v().clone(), &ctx).is_ok()
        );
    }

    #[test]
    fn quadric_preserved_by_inversion(h in arb_quadric_point()) {
        prop_assume!(!h.is_origin().unwrap());
        let inv = h.koranyi_inv().unwrap();
        let ctx = Decision::default();
        prop_assert!(QPoint::new(inv.u().clone(), inv.v().clone(), &ctx).is_ok());
        prop_assert_eq!(inv.koranyi_inv().unwrap(), h);
    }

    #[test]
    fn left_invariance_of_distance(
        g in arb_quadric_point(),
        h1 in arb_quadric_point(),
        h2 in arb_quadric_point(),
    ) {
        let t1 = g.group_mul(&h1).unwrap();
        let t2 = g.group_mul(&h2).unwrap();
        prop_assert_eq!(
            t1.distance_v(&t2).unwrap().norm_sq(),
            h1.distance_v(&h2).unwrap().norm_sq()
        );
    }

    #[test]
    fn integer_point_json_roundtrip(
        re in -40i64..=40,
        im in -40i64..=40,
        c in -1000i64..=1000,
    ) {
        prop_assume!((re + im) % 2 == 0);
        let g = IntegerPoint::from_i64(re, im, c).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: IntegerPoint = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, g);
    }
}
