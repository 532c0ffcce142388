mod common;

use common::*;
use logmono_core::special::{
    loggamma_derivs, loggamma_stirling, zeta_derivs, zeta_enclosure, zeta_even_exact, ZetaEnclosureParams,
    DEFAULT_SHIFT,
};
use logmono_core::{Ball, Comparison};
use proptest::prelude::*;

const P: u32 = 128;

fn zeta(x: &Ball) -> Ball {
    zeta_enclosure(x, &ZetaEnclosureParams::with_prec(x.prec())).unwrap()
}

#[test]
fn zeta_even_values_agree() {
    for n in 1..=20u64 {
        let x = Ball::from_int(2 * n as i64, P);
        let direct = zeta(&x);
        let exact = zeta_even_exact(n, P);
        assert!(direct.overlaps(&exact), "zeta({})", 2 * n);
        assert!(direct.rad_f64() < 1e-30);
    }
}

#[test]
fn zeta_decreasing_on_grid() {
    let mut prev = zeta(&Ball::from_ratio(11, 10, P));
    for i in 12..=200 {
        let cur = zeta(&Ball::from_ratio(i, 10, P));
        assert_eq!(cur.compare(&prev), Comparison::Less, "at {}", i as f64 / 10.0);
        prev = cur;
    }
}

#[test]
fn loggamma_band_matches_factorials() {
    // log Gamma(n) = log (n-1)!
    let mut fact = num_bigint::BigInt::from(1);
    for n in 1..=40i64 {
        if n > 1 {
            fact *= n - 1;
        }
        let want = Ball::from_bigint(&fact, P).log().unwrap();
        let x = Ball::from_int(n, P);
        let band = loggamma_derivs(&x, 0, DEFAULT_SHIFT).unwrap().remove(0);
        let stir = loggamma_stirling(&x).unwrap();
        assert!(band.overlaps(&want) && stir.overlaps(&want), "n = {n}");
        assert!(stir.rad_f64() < 1e-30);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn zeta_tail_inequality(n in 500i64..6000) {
        // 1 < zeta(x) < 1 + 1.5/2^x for x >= 5.
        let x = Ball::from_ratio(n, 100, P);
        let z = zeta(&x);
        let bound = Ball::from_ratio(3, 2, P)
            .div(&Ball::from_int(2, P).pow(&x).unwrap())
            .unwrap()
            .add_int(1);
        prop_assert_eq!(z.compare(&Ball::one(P)), Comparison::Greater);
        prop_assert_eq!(z.compare(&bound), Comparison::Less);
    }

    #[test]
    fn zeta_derivs_match_differences(n in 150i64..4000, j in 1u32..4) {
        let x = rat(n, 100);
        let f = |t: &Ball| zeta_enclosure(t, &ZetaEnclosureParams::with_prec(t.prec()));
        let fd = fd_oracle(&f, &x, j, -12).unwrap();
        let z = zeta_derivs(&Ball::from_rational(&x, P), j, &ZetaEnclosureParams::with_prec(P)).unwrap();
        let got = &z[j as usize];
        prop_assert!(got.overlaps(&fd), "order {} at {}: {} vs {}", j, n, got, fd);
        prop_assert_eq!(got.is_positive(), j % 2 == 0);
    }

    #[test]
    fn loggamma_derivs_match_differences(n in 100i64..6000, j in 1u32..5) {
        let x = rat(n, 100);
        let fd = fd_oracle(&loggamma_stirling, &x, j, -12).unwrap();
        let g = loggamma_derivs(&Ball::from_rational(&x, P), j, DEFAULT_SHIFT).unwrap();
        prop_assert!(g[j as usize].overlaps(&fd), "order {} at {}", j, n);
    }

    #[test]
    fn band_contains_stirling(n in 50i64..20000) {
        let x = Ball::from_ratio(n, 100, P);
        let band = loggamma_derivs(&x, 0, DEFAULT_SHIFT).unwrap().remove(0);
        prop_assert!(band.contains_ball(&loggamma_stirling(&x).unwrap()));
    }
}
