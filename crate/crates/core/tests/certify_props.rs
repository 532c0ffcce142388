mod common;

use common::*;
use logmono_core::certify::{
    bound_function, certify_d2_log_theta, certify_negative, d2_log_theta, derivative_negative_from,
    kth_deriv_log_theta, log_4x_deriv_bound, log_theta, paper_bound_terms, replay, BoundFunction, CertStatus, CertifyOptions,
    D2LogTheta,
};
use logmono_core::{Ball, Comparison, Result};
use proptest::prelude::*;

const P: u32 = 128;

#[test]
fn two_paths_agree() {
    for i in 0..=52 {
        let x = Ball::from_int(8 + i, P);
        let split = d2_log_theta(&x).unwrap().total;
        let general = kth_deriv_log_theta(&x, 2).unwrap();
        assert!(split.overlaps(&general), "x = {}", 8 + i);
    }
}

#[test]
fn analytic_bound_dominates() {
    // x^3 (log theta)''(x) never exceeds the summed bound terms.
    for i in 0..=540 {
        let x = Ball::from_ratio(601 + 10 * i, 100, P);
        let scaled = d2_log_theta(&x).unwrap().total.mul(&x.powi(3).unwrap());
        let bound = paper_bound_terms(&x).unwrap().total;
        assert!(scaled.upper() <= bound.upper(), "x = {}", x.mid_f64());
    }
}

fn bound_decreasing(f: BoundFunction, lo: i64, hi: i64) {
    let at = |v: i64| bound_function(f, &Ball::from_ratio(v, 4, P)).unwrap();
    let mut prev = at(4 * lo);
    for v in (4 * lo + 1)..=(4 * hi) {
        let cur = at(v);
        assert_eq!(cur.compare(&prev), Comparison::Less, "{f:?} at {}", v as f64 / 4.0);
        prev = cur;
    }
    assert!(derivative_negative_from(f, &Ball::from_int(lo, P)).unwrap(), "{f:?}");
}

#[test]
fn bound_functions_decrease() {
    bound_decreasing(BoundFunction::F0, 3, 30);
    bound_decreasing(BoundFunction::F1, 1, 30);
    for k in [2u32, 5, 10] {
        bound_decreasing(BoundFunction::Fkx { k }, k as i64, 10 * k as i64);
    }
}

#[test]
fn log_4x_claim_holds() {
    for k in 2..=8u32 {
        for i in 0..20 {
            let x = Ball::from_ratio(3 + 4 * i, 4, P);
            let r = log_4x_deriv_bound(&x, k).unwrap();
            let lhs = r.closed_form.abs();
            assert!(lhs.lower() <= r.claim_bound.upper(), "k = {k}, x = {}", x.mid_f64());
            if k == 2 {
                // Attained.
                assert!(lhs.overlaps(&r.claim_bound));
            }
        }
    }
}

#[test]
fn certificate_replays() {
    let opts = CertifyOptions::default();
    let cert = certify_d2_log_theta(&rat(8, 1), &rat(10, 1), &opts).unwrap();
    assert_eq!(cert.status, CertStatus::Certified);
    assert!(replay(&D2LogTheta, &cert).unwrap());

    let mut gap = cert.clone();
    if gap.leaves.len() > 1 {
        gap.leaves.remove(gap.leaves.len() / 2);
        assert!(!replay(&D2LogTheta, &gap).unwrap());
    }
    let mut stretched = cert;
    stretched.interval[1] = "11".into();
    assert!(!replay(&D2LogTheta, &stretched).unwrap());
}

#[test]
fn sign_change_is_not_certified() {
    let f = |x: &Ball| -> Result<Ball> { Ok(x.sqr().add_int(-10)) };
    let opts = CertifyOptions {
        max_depth: 16,
        ..CertifyOptions::default()
    };
    let cert = certify_negative(&f, &rat(-3, 1), &rat(4, 1), &opts);
    assert_eq!(cert.status, CertStatus::Undecided);
    let ok = certify_negative(&f, &rat(-3, 1), &rat(3, 1), &opts);
    assert_eq!(ok.status, CertStatus::Certified);
    assert!(replay(&f, &ok).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn derivatives_match_differences(n in 800i64..6000, k in 2u32..5) {
        let x = rat(n, 100);
        let fd = fd_oracle(&log_theta, &x, k, -10).unwrap();
        let got = kth_deriv_log_theta(&Ball::from_rational(&x, P), k).unwrap();
        prop_assert!(got.overlaps(&fd), "order {} at {}: {} vs {}", k, n, got, fd);
    }

    #[test]
    fn enclosures_nest(n in 700i64..6000, w in 1i64..64) {
        // A sub-ball's enclosure meets the outer enclosure.
        let outer = rational_interval(&rat(n, 100), &rat(n * 64 + w, 6400), P);
        let inner = Ball::from_rational(&rat(n * 64 + w / 2, 6400), P);
        let a = d2_log_theta(&outer).unwrap().total;
        let b = d2_log_theta(&inner).unwrap().total;
        prop_assert!(a.overlaps(&b));
    }
}
