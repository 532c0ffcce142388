//! The analytic upper bounds on `x^3 (log theta)''(x)` and on the scaled
//! higher derivatives, with the monotonicity evidence that extends a bound
//! at one point to a whole tail.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::ball::{constant, Ball, Constant, Dyadic};
use crate::error::{domain, Error, Result};
use crate::exactnum::harmonic;

use super::theta::BoundBreakdown;

/// The total printed at the end of the second-derivative chain.
pub const PRINTED_TOTAL_AT_6: f64 = -0.2465;

/// Named analytic bound functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundFunction {
    /// `f0(x) = 1.5/2^(x-1) (x^2 + sqrt(2) x)`
    F0,
    /// `f1(x) = -x + log x - 3/2 + 1/(2x) + log 2 pi`
    F1,
    /// `f(k, x) = log x/2 - H_k/2 - x/k + 3 log 2/2 + log pi/2 + (k+1)/(12x)`
    Fkx { k: u32 },
}

fn two_pow(x: &Ball) -> Result<Ball> {
    x.mul(&constant(Constant::Log2, x.prec())).exp()
}

fn ratio(n: i64, d: i64, p: u32) -> Ball {
    Ball::from_ratio(n, d, p)
}

fn check_positive(x: &Ball) -> Result<()> {
    if !x.is_positive() {
        return Err(domain("bound function requires inf(x) > 0"));
    }
    Ok(())
}

pub fn bound_function(f: BoundFunction, x: &Ball) -> Result<Ball> {
    check_positive(x)?;
    let p = x.prec();
    match f {
        BoundFunction::F0 => {
            let sqrt2 = Ball::from_int(2, p).sqrt()?;
            let poly = x.sqr().add(&sqrt2.mul(x));
            ratio(3, 1, p).mul(&poly).div(&two_pow(x)?)
        }
        BoundFunction::F1 => Ok(x
            .neg()
            .add(&x.log()?)
            .sub(&ratio(3, 2, p))
            .add(&x.recip()?.mul_pow2(-1))
            .add(&constant(Constant::Log2Pi, p))),
        BoundFunction::Fkx { k } => {
            if k < 2 {
                return Err(domain("f(k, x) needs k >= 2"));
            }
            let h = Ball::from_rational(&harmonic(k as u64), p);
            let log_pi = constant(Constant::Pi, p).log()?;
            Ok(x.log()?
                .mul_pow2(-1)
                .sub(&h.mul_pow2(-1))
                .sub(&x.div_int(k as i64))
                .add(&constant(Constant::Log2, p).mul_int(3).mul_pow2(-1))
                .add(&log_pi.mul_pow2(-1))
                .add(&x.recip()?.mul_int(k as i64 + 1).div_int(12)))
        }
    }
}

/// Derivative in `x` of the named bound function.
pub fn bound_function_derivative(f: BoundFunction, x: &Ball) -> Result<Ball> {
    check_positive(x)?;
    let p = x.prec();
    let log2 = constant(Constant::Log2, p);
    match f {
        BoundFunction::F0 => {
            // -3/2^x (log2 x^2 + (sqrt2 log2 - 2) x - sqrt2)
            let sqrt2 = Ball::from_int(2, p).sqrt()?;
            let q = f0_quadratic(x, &log2, &sqrt2);
            q.mul_int(-3).div(&two_pow(x)?)
        }
        BoundFunction::F1 => {
            // -(2x^2 - 2x + 1)/(2x^2)
            let x2 = x.sqr();
            x2.mul_int(2)
                .sub(&x.mul_int(2))
                .add_int(1)
                .neg()
                .div(&x2.mul_int(2))
        }
        BoundFunction::Fkx { k } => {
            // -(12x^2 - 6kx + k^2 + 1)/(12 k x^2)
            let k = k as i64;
            let x2 = x.sqr();
            x2.mul_int(12)
                .sub(&x.mul_int(6 * k))
                .add_int(k * k + 1)
                .neg()
                .div(&x2.mul_int(12 * k))
        }
    }
}

fn f0_quadratic(x: &Ball, log2: &Ball, sqrt2: &Ball) -> Ball {
    log2.mul(&x.sqr())
        .add(&sqrt2.mul(log2).add_int(-2).mul(x))
        .sub(sqrt2)
}

/// Derivative signs of a bound function on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeSignReport {
    pub function: BoundFunction,
    pub points: usize,
    /// Every enclosed derivative on the grid lies strictly below zero.
    pub all_negative: bool,
    /// Largest upper endpoint seen.
    pub max_upper: f64,
    /// Analytic evidence that holds for every admissible `x`, not only on
    /// the grid (see [`derivative_negative_from`]).
    pub analytic: bool,
}

pub fn derivative_sign_report(f: BoundFunction, grid: &[Ball]) -> Result<DerivativeSignReport> {
    let mut all_negative = true;
    let mut max_upper = f64::NEG_INFINITY;
    let mut x_min: Option<Ball> = None;
    for x in grid {
        let d = bound_function_derivative(f, x)?;
        all_negative &= d.is_negative();
        max_upper = max_upper.max(d.upper_f64());
        if x_min.as_ref().is_none_or(|m| x.lower() < m.lower()) {
            x_min = Some(x.clone());
        }
    }
    let analytic = match &x_min {
        Some(x) => derivative_negative_from(f, x)?,
        None => false,
    };
    Ok(DerivativeSignReport {
        function: f,
        points: grid.len(),
        all_negative,
        max_upper,
        analytic,
    })
}

/// Certifies that the derivative of `f` is negative for every `t >= x`.
///
/// * `f0`: the quadratic `q` in `f0' = -3 q / 2^x` is positive at `x` and
///   `q' = 2 log2 x + sqrt2 log2 - 2` is positive there; `q'` increases.
/// * `f1`: `2x^2 - 2x + 1` has negative discriminant.
/// * `f(k, .)`: `12x^2 - 6kx + k^2 + 1` has discriminant
///   `36k^2 - 48(k^2 + 1) < 0`.
pub fn derivative_negative_from(f: BoundFunction, x: &Ball) -> Result<bool> {
    check_positive(x)?;
    let p = x.prec();
    Ok(match f {
        BoundFunction::F0 => {
            let log2 = constant(Constant::Log2, p);
            let sqrt2 = Ball::from_int(2, p).sqrt()?;
            let q = f0_quadratic(x, &log2, &sqrt2);
            let dq = log2.mul(x).mul_int(2).add(&sqrt2.mul(&log2)).add_int(-2);
            q.is_positive() && dq.is_positive()
        }
        BoundFunction::F1 => {
            let disc = (-2i64).pow(2) - 4 * 2;
            disc < 0
        }
        BoundFunction::Fkx { k } => {
            let k = BigInt::from(k);
            let disc: BigInt = 36 * &k * &k - 48 * (&k * &k + 1);
            disc < BigInt::from(0)
        }
    })
}

/// The three bounds on `x^3` times each part of `(log theta)''`, for
/// `x >= 6`: `2 log 2`, `f0(x) + 2 (sqrt(1 + 1.5/2^x) - 0.977)` and `f1(x)`.
pub fn paper_bound_terms(x: &Ball) -> Result<BoundBreakdown> {
    if x.lower() < Dyadic::from_int(6) {
        return Err(domain("paper_bound_terms requires x >= 6"));
    }
    let p = x.prec();
    let term_log2 = constant(Constant::Log2, p).mul_int(2);
    let root = ratio(3, 2, p)
        .div(&two_pow(x)?)?
        .add_int(1)
        .sqrt()?;
    let term_zeta = bound_function(BoundFunction::F0, x)?
        .add(&root.sub(&ratio(977, 1000, p)).mul_int(2));
    let term_gamma = bound_function(BoundFunction::F1, x)?;
    Ok(BoundBreakdown::new(x.clone(), term_log2, term_zeta, term_gamma))
}

/// Evaluation of the bound chain at `x_from` plus the evidence that each
/// term is non-increasing on `[x_from, inf)`.
#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub x_from: Ball,
    pub breakdown: BoundBreakdown,
    pub f0_decreasing: bool,
    pub f1_decreasing: bool,
    /// `total` bounds `x^3 (log theta)''(x)` for all `x >= x_from` and is
    /// negative.
    pub certified_negative: bool,
    pub computed_total: f64,
    pub printed_total: f64,
    /// The recomputed total at 6 differs from the printed constant.
    pub discrepancy_flag: bool,
}

pub fn tail_bound_report(x_from: &Ball) -> Result<TailReport> {
    let breakdown = paper_bound_terms(x_from)?;
    let f0_decreasing = derivative_negative_from(BoundFunction::F0, x_from)?;
    let f1_decreasing = derivative_negative_from(BoundFunction::F1, x_from)?;
    // sqrt(1 + 1.5/2^x) decreases for every x.
    let certified_negative = f0_decreasing && f1_decreasing && breakdown.total.is_negative();
    let computed_total = breakdown.total.mid_f64();
    let at_six = x_from.contains(&Dyadic::from_int(6)) && x_from.rad().is_zero();
    let discrepancy_flag = at_six && (computed_total - PRINTED_TOTAL_AT_6).abs() > 5e-5;
    Ok(TailReport {
        x_from: x_from.clone(),
        breakdown,
        f0_decreasing,
        f1_decreasing,
        certified_negative,
        computed_total,
        printed_total: PRINTED_TOTAL_AT_6,
        discrepancy_flag,
    })
}

/// `f(k, 3k)` and the claimed cap `-17/(36k) - 0.8108`.
pub fn f_at_3k(k: u32, prec: u32) -> Result<(Ball, Ball)> {
    let x = Ball::from_int(3 * k as i64, prec);
    let f = bound_function(BoundFunction::Fkx { k }, &x)?;
    let cap = Ball::from_rational(
        &(BigRational::new((-17).into(), (36 * k as i64).into()) - BigRational::new(8108.into(), 10000.into())),
        prec,
    );
    Ok((f, cap))
}

/// `1.5 e sum_{j=0}^k (sqrt2 x)^j / 2^x`, the bound on
/// `|x^(k+1)/k! (log zeta / x)^(k)|` for `x - k/2 >= 5`.
pub fn zeta_term(k: u32, x: &Ball) -> Result<Ball> {
    let p = x.prec();
    let s = Ball::from_int(2, p).sqrt()?.mul(x);
    let mut pow = Ball::one(p);
    let mut sum = Ball::one(p);
    for _ in 0..k {
        pow = pow.mul(&s);
        sum = sum.add(&pow);
    }
    let e = Ball::one(p).exp()?;
    ratio(3, 2, p).mul(&e).mul(&sum).div(&two_pow(x)?)
}

/// A computed point beyond which `(-1)^k x^(k+1) (log theta)^(k)(x) / k!`
/// has a negative analytic upper bound.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdCertificate {
    pub k: u32,
    pub threshold: f64,
    /// Upper bound on the scaled derivative at the threshold.
    pub bound: Ball,
    /// `"second-derivative chain"` for `k = 2`, `"f + zeta term"` otherwise.
    pub method: String,
    /// The bound is non-increasing from the threshold on.
    pub monotone_evidence: bool,
}

/// Grid search (step 1/4) for the threshold `X(k)`, up to `cap`.
pub fn kth_sign_threshold(k: u32, cap: f64, prec: u32) -> Result<ThresholdCertificate> {
    if k < 2 {
        return Err(domain("kth_sign_threshold needs k >= 2"));
    }
    if k == 2 {
        let mut x = 6.0;
        while x <= cap {
            let r = tail_bound_report(&Ball::from_f64(x, prec))?;
            if r.certified_negative {
                return Ok(ThresholdCertificate {
                    k,
                    threshold: x,
                    bound: r.breakdown.total.mul_pow2(-1),
                    method: "second-derivative chain".into(),
                    monotone_evidence: r.f0_decreasing && r.f1_decreasing,
                });
            }
            x += 0.25;
        }
        return Err(Error::SearchExhausted(format!("{cap}")));
    }
    // The zeta bound needs x - k/2 >= 5; each (sqrt2 x)^j / 2^x decreases
    // once x >= k / log 2.
    let start = (k as f64 / std::f64::consts::LN_2)
        .max(k as f64 / 2.0 + 5.0)
        .max(6.0);
    let mut x = (start * 4.0).ceil() / 4.0;
    while x <= cap {
        let xb = Ball::from_f64(x, prec);
        let total = bound_function(BoundFunction::Fkx { k }, &xb)?.add(&zeta_term(k, &xb)?);
        if total.is_negative() {
            let monotone = derivative_negative_from(BoundFunction::Fkx { k }, &xb)?
                && xb.lower_f64() * std::f64::consts::LN_2 >= k as f64;
            return Ok(ThresholdCertificate {
                k,
                threshold: x,
                bound: total,
                method: "f + zeta term".into(),
                monotone_evidence: monotone,
            });
        }
        x += 0.25;
    }
    Err(Error::SearchExhausted(format!("{cap}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn constants_at_six() {
        let t = paper_bound_terms(&Ball::from_int(6, P)).unwrap();
        assert!(t.term_log2.lower_f64() > 1.386 && t.term_log2.upper_f64() < 1.387);
        assert!((t.term_zeta.mid_f64() - 2.154_554).abs() < 1e-5);
        assert!((t.term_gamma.mid_f64() + 3.787_031).abs() < 1e-5);
        assert!(t.total.upper_f64() < -0.24);
    }

    #[test]
    fn f0_and_f1_values() {
        let f0 = bound_function(BoundFunction::F0, &Ball::from_int(6, P)).unwrap();
        let direct = 1.5 / 32.0 * (36.0 + 6.0 * 2f64.sqrt());
        assert!((f0.mid_f64() - direct).abs() < 1e-14);
        let f1 = bound_function(BoundFunction::F1, &Ball::from_int(6, P)).unwrap();
        assert!((f1.mid_f64() + 3.787).abs() < 5e-4);
    }

    #[test]
    fn derivative_evidence() {
        assert!(derivative_negative_from(BoundFunction::F0, &Ball::from_int(3, P)).unwrap());
        assert!(!derivative_negative_from(BoundFunction::F0, &Ball::from_int(1, P)).unwrap());
        assert!(derivative_negative_from(BoundFunction::F1, &Ball::from_int(1, P)).unwrap());
        assert!(derivative_negative_from(BoundFunction::Fkx { k: 7 }, &Ball::from_int(1, P)).unwrap());
    }

    #[test]
    fn tail_report_flags_discrepancy() {
        let r = tail_bound_report(&Ball::from_int(6, P)).unwrap();
        assert!(r.certified_negative);
        assert!(r.discrepancy_flag);
        assert!((r.computed_total + 0.246_183).abs() < 1e-5);
        let r10 = tail_bound_report(&Ball::from_int(10, P)).unwrap();
        assert!(r10.breakdown.total.upper() < r.breakdown.total.lower());
    }

    #[test]
    fn thresholds() {
        let t2 = kth_sign_threshold(2, 100.0, P).unwrap();
        assert!(t2.threshold <= 7.0);
        let t3 = kth_sign_threshold(3, 200.0, P).unwrap();
        assert!(t3.monotone_evidence && t3.bound.is_negative());
        let z = zeta_term(4, &Ball::from_int(40, P)).unwrap();
        let cap = 1.5 * std::f64::consts::E * 5.0 * (2f64.sqrt() * 40.0).powi(4) / 2f64.powi(40);
        assert!(z.upper_f64() <= cap);
    }
}
