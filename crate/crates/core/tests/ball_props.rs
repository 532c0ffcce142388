mod common;

use common::*;
use logmono_core::ball::{exact_decimal, parse_decimal, Ball, Comparison};
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = BigRational> {
    (-(1i64 << 40)..(1i64 << 40), 1i64..(1 << 30)).prop_map(|(n, d)| rat(n, d))
}

fn prec() -> impl Strategy<Value = u32> {
    prop_oneof![Just(64u32), Just(128), Just(256), Just(512)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_ops_contain_exact(a in rational(), b in rational(), p in prec()) {
        let (x, y) = (Ball::from_rational(&a, p), Ball::from_rational(&b, p));
        prop_assert!(x.contains_rational(&a));
        prop_assert!(x.add(&y).contains_rational(&(&a + &b)));
        prop_assert!(x.sub(&y).contains_rational(&(&a - &b)));
        prop_assert!(x.mul(&y).contains_rational(&(&a * &b)));
        prop_assert!(x.sqr().contains_rational(&(&a * &a)));
        if !num_traits::Zero::is_zero(&b) {
            prop_assert!(x.div(&y).unwrap().contains_rational(&(&a / &b)));
        }
    }

    #[test]
    fn exp_and_log_meet_oracle(a in -(1i64 << 20)..(1i64 << 20), d in 1i64..(1 << 16), p in prec()) {
        let q = rat(a, d * 256);
        let w = 4 * p + 128;
        let e = Ball::from_rational(&q, p).exp().unwrap();
        prop_assert!(ball_meets(&e, &exp_oracle(&q, w), w));
        let pos = q.abs() + rat(1, 7);
        let l = Ball::from_rational(&pos, p).log().unwrap();
        prop_assert!(ball_meets(&l, &log_oracle(&pos, w), w));
    }

    #[test]
    fn sqrt_squares_bracket(a in 1i64..(1i64 << 50), d in 1i64..(1 << 20), p in prec()) {
        let q = rat(a, d);
        let r = Ball::from_rational(&q, p).sqrt().unwrap();
        let lo = dyadic_rational(&r.lower());
        let hi = dyadic_rational(&r.upper());
        prop_assert!(&lo * &lo <= q && q <= &hi * &hi);
    }

    #[test]
    fn inclusion_monotone(a in rational(), w1 in 1i64..1000, w2 in 1i64..1000, p in prec()) {
        // A wider input never gives a narrower-than-contained result.
        let inner = rational_interval(&(&a - rat(w1, 1 << 20)), &(&a + rat(w1, 1 << 20)), p);
        let outer = rational_interval(&(&a - rat(w1 + w2, 1 << 20)), &(&a + rat(w1 + w2, 1 << 20)), p);
        let small = rational_interval(&rat(1, 1 << 10), &rat(3, 1 << 10), p);
        let fi = inner.mul(&inner).add(&small).exp();
        let fo = outer.mul(&outer).add(&small).exp();
        if let (Ok(fi), Ok(fo)) = (fi, fo) {
            prop_assert!(fo.overlaps(&fi));
            prop_assert!(fo.lower() <= fi.upper() && fi.lower() <= fo.upper());
        }
    }

    #[test]
    fn compare_is_antisymmetric(a in rational(), b in rational(), p in prec()) {
        let (x, y) = (Ball::from_rational(&a, p), Ball::from_rational(&b, p));
        let back = match x.compare(&y) {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            other => other,
        };
        prop_assert_eq!(y.compare(&x), back);
        prop_assert_eq!(x.overlaps(&y), y.overlaps(&x));
    }

    #[test]
    fn decimal_rendering_encloses(a in rational(), p in prec()) {
        let x = Ball::from_rational(&a, p);
        let s = x.to_string();
        let (m, r) = s.split_once(" ± ").unwrap();
        let m = parse_decimal(m).unwrap();
        let r = parse_decimal(r).unwrap();
        prop_assert!(&m - &r <= dyadic_rational(&x.lower()));
        prop_assert!(dyadic_rational(&x.upper()) <= &m + &r);
    }

    #[test]
    fn exact_decimal_round_trip(n in -(1i64 << 40)..(1i64 << 40), e in 0u32..30) {
        let q = rat(n, 1 << e);
        prop_assert_eq!(parse_decimal(&exact_decimal(&q)).unwrap(), q);
    }
}
