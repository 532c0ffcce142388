//! The tangent interpolation `t(x) = 2 zeta(2x) Gamma(2x+1) (4^x - 1) 4^x
//! / ((2 pi)^(2x) 2x)`, with `t(n) = T(n)`, and the signs of its log
//! derivatives.

use serde::{Deserialize, Serialize};

use crate::ball::{constant, Ball, Constant, Dyadic};
use crate::error::{domain, Result};
use crate::exactnum::{binomial, eulerian_row, factorial, harmonic};
use crate::special::{loggamma_derivs, loggamma_stirling, zeta_derivs, ZetaEnclosureParams, DEFAULT_SHIFT};

use super::theta::{kth_deriv_unchecked, leibniz_over_x, log_zeta_derivs, logx_over_x_deriv, recip_derivs};

/// `log(4^x - 1)` and its first `k` derivatives, written in `q = 4^-x`:
/// `g' = log 4 / (1-q)` and `g^(j) = -(-log 4)^j q A_{j-1}(q) / (1-q)^j` for
/// `j >= 2`, with `A` the Eulerian polynomials.
pub fn log4x_derivs(x: &Ball, k: u32) -> Result<Vec<Ball>> {
    if !x.is_positive() {
        return Err(domain("log(4^x - 1) needs inf(x) > 0"));
    }
    let p = x.prec();
    let log4 = constant(Constant::Log2, p).mul_pow2(1);
    let q = log4.mul(x).neg().exp()?;
    let one_minus_q = Ball::one(p).sub(&q);
    let mut out = vec![log4.mul(x).add(&one_minus_q.log()?)];
    let neg_log4 = log4.neg();
    let mut c_pow = Ball::one(p);
    let mut denom = Ball::one(p);
    for j in 1..=k {
        c_pow = c_pow.mul(&neg_log4);
        denom = denom.mul(&one_minus_q);
        if j == 1 {
            out.push(log4.div(&one_minus_q)?);
            continue;
        }
        let row = eulerian_row(j as u64 - 1);
        let mut poly = Ball::zero(p);
        for c in row.iter().rev() {
            poly = poly.mul(&q).add(&Ball::from_bigint(c, p));
        }
        out.push(c_pow.mul(&q).mul(&poly).div(&denom)?.neg());
    }
    Ok(out)
}

/// `t(x)` for `x >= 1`.
pub fn tangent_interp(x: &Ball) -> Result<Ball> {
    if x.lower() < Dyadic::one() {
        return Err(domain("tangent_interp requires inf(x) >= 1"));
    }
    let p = x.prec();
    let two_x = x.mul_pow2(1);
    let lz = zeta_derivs(&two_x, 0, &ZetaEnclosureParams::with_prec(p))?[0].log()?;
    let lg = loggamma_stirling(&two_x.add_int(1))?;
    let g = log4x_derivs(x, 0)?.remove(0);
    let log4 = constant(Constant::Log2, p).mul_pow2(1);
    constant(Constant::Log2, p)
        .add(&lz)
        .add(&lg)
        .sub(&two_x.mul(&constant(Constant::Log2Pi, p)))
        .add(&g)
        .add(&log4.mul(x))
        .sub(&two_x.log()?)
        .exp()
}

fn fd_weights(k: u32) -> Vec<(f64, i64)> {
    // Offsets (k/2 - i) in half-steps, weights (-1)^i C(k, i).
    (0..=k)
        .map(|i| {
            let w = binomial(k as u64, i as u64);
            let w: f64 = w.to_string().parse().expect("small binomial");
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            (sign * w, k as i64 - 2 * i as i64)
        })
        .collect()
}

/// Central `k`-th difference of `f` at `x` with step `2^-16`, evaluated in
/// 256-bit balls and returned as its midpoint.
pub fn finite_difference(f: impl Fn(&Ball) -> Result<Ball>, x: f64, k: u32) -> Result<f64> {
    const P: u32 = 256;
    let half_h = Dyadic::pow2(-17);
    let mut acc = Ball::zero(P);
    for (w, halves) in fd_weights(k) {
        let at = Ball::exact(
            Dyadic::from_f64(x).ok_or_else(|| domain("non-finite point"))?.add(&half_h.mul(&Dyadic::from_int(halves))),
            P,
        );
        acc = acc.add(&f(&at)?.mul(&Ball::from_f64(w, P)));
    }
    Ok(acc.mul_pow2(16 * k as i64).mid_f64())
}

/// The Claim bound on `|(log(4^x - 1))^(k)|`, the closed-form enclosure and
/// a finite-difference estimate.
#[derive(Debug, Clone, Serialize)]
pub struct Log4xReport {
    pub k: u32,
    /// `sum_{i=1}^k (log 4)^k (k-1)! / (4^x - 1)^i`
    pub claim_bound: Ball,
    pub claim_bound_f64: f64,
    pub closed_form: Ball,
    pub finite_difference: f64,
}

pub fn log_4x_deriv_bound(x: &Ball, k: u32) -> Result<Log4xReport> {
    if k < 2 {
        return Err(domain("log_4x_deriv_bound needs k >= 2"));
    }
    if !x.is_positive() {
        return Err(domain("log_4x_deriv_bound requires inf(x) > 0"));
    }
    let p = x.prec();
    let log4 = constant(Constant::Log2, p).mul_pow2(1);
    let inv = log4.mul(x).exp()?.add_int(-1).recip()?;
    let mut sum = Ball::zero(p);
    let mut pw = Ball::one(p);
    for _ in 1..=k {
        pw = pw.mul(&inv);
        sum = sum.add(&pw);
    }
    let claim_bound = log4
        .powi(k as i64)?
        .mul(&Ball::from_bigint(&factorial(k as u64 - 1), p))
        .mul(&sum);
    let closed_form = log4x_derivs(x, k)?.pop().expect("k + 1 entries");
    let finite_difference = finite_difference(|t| Ok(log4x_derivs(t, 0)?.remove(0)), x.mid_f64(), k)?;
    Ok(Log4xReport {
        k,
        claim_bound_f64: claim_bound.upper_f64(),
        claim_bound,
        closed_form,
        finite_difference,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TangentVariant {
    /// `log t(x)`
    T,
    /// `log t(x)^(-1/x)`
    InvXthRootT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignFlag {
    Positive,
    Negative,
    Undecided,
}

impl SignFlag {
    pub fn of(b: &Ball) -> Self {
        if b.is_positive() {
            SignFlag::Positive
        } else if b.is_negative() {
            SignFlag::Negative
        } else {
            SignFlag::Undecided
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TangentSignReport {
    pub variant: TangentVariant,
    pub k: u32,
    /// `(-1)^k` times the `k`-th log derivative.
    pub value: Ball,
    pub flag: SignFlag,
    /// `log x >= H_k`, which makes `(-1)^k (log x / x)^(k)` non-negative.
    /// Only set for [`TangentVariant::InvXthRootT`].
    pub logx_condition: Option<bool>,
}

/// `(log t)^(k)(x) = 2^k [(log zeta)^(k)(2x) + (log Gamma)^(k)(2x+1)]
/// + (log(4^x-1))^(k) + (-1)^k (k-1)!/x^k`.
fn log_t_deriv(x: &Ball, k: u32) -> Result<Ball> {
    let p = x.prec();
    let two_x = x.mul_pow2(1);
    let l = log_zeta_derivs(&two_x, k)?.pop().expect("k + 1 entries");
    let g = loggamma_derivs(&two_x.add_int(1), k, DEFAULT_SHIFT)?
        .pop()
        .expect("k + 1 entries");
    let h = log4x_derivs(x, k)?.pop().expect("k + 1 entries");
    let mut tail = Ball::from_bigint(&factorial(k as u64 - 1), p).div(&x.powi(k as i64)?)?;
    if k % 2 == 1 {
        tail = tail.neg();
    }
    Ok(l.add(&g).mul_pow2(k as i64).add(&h).add(&tail))
}

/// `(log t^(-1/x))^(k) = -2^(k+1) (log theta)^(k)(2x) - (log(4^x-1)/x)^(k)
/// + (log 2/x)^(k) + (log x/x)^(k)`.
fn log_inv_root_t_deriv(x: &Ball, k: u32) -> Result<Ball> {
    let p = x.prec();
    let th = kth_deriv_unchecked(&x.mul_pow2(1), k)?.mul_pow2(k as i64 + 1);
    let r = recip_derivs(x, k)?;
    let g = log4x_derivs(x, k)?;
    let log2 = constant(Constant::Log2, p).mul(&r[k as usize]);
    Ok(th
        .neg()
        .sub(&leibniz_over_x(&g, &r, k))
        .add(&log2)
        .add(&logx_over_x_deriv(x, k)?))
}

pub fn kth_sign_tangent(variant: TangentVariant, x: &Ball, k: u32) -> Result<TangentSignReport> {
    if k < 2 {
        return Err(domain("kth_sign_tangent needs k >= 2"));
    }
    if x.lower() <= Dyadic::from_int(k as i64 + 3) {
        return Err(domain(format!("kth_sign_tangent requires inf(x) > {}", k + 3)));
    }
    let raw = match variant {
        TangentVariant::T => log_t_deriv(x, k)?,
        TangentVariant::InvXthRootT => log_inv_root_t_deriv(x, k)?,
    };
    let value = if k % 2 == 1 { raw.neg() } else { raw };
    let logx_condition = match variant {
        TangentVariant::T => None,
        TangentVariant::InvXthRootT => {
            let h = Ball::from_rational(&harmonic(k as u64), x.prec());
            Some(x.log()?.sub(&h).is_positive())
        }
    };
    Ok(TangentSignReport {
        variant,
        k,
        flag: SignFlag::of(&value),
        value,
        logx_condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn b(v: f64) -> Ball {
        Ball::from_f64(v, P)
    }

    #[test]
    fn t_at_integers_contains_tangent_numbers() {
        for (n, t) in [(1, 1), (3, 16), (5, 7936)] {
            let v = tangent_interp(&b(n as f64)).unwrap();
            assert!(v.contains(&Dyadic::from_int(t)), "t({n}) = {}", v.mid_f64());
            assert!(v.rad_f64() < 1e-15 * t as f64);
        }
        assert!(tangent_interp(&b(0.5)).is_err());
    }

    #[test]
    fn claim_bound_at_three() {
        let r = log_4x_deriv_bound(&b(3.0), 2).unwrap();
        let l4 = 4f64.ln();
        let expect = l4 * l4 * (1.0 / 63.0 + 1.0 / 3969.0);
        assert!((r.claim_bound.mid_f64() - expect).abs() < 1e-14);
        assert!(r.finite_difference.abs() <= r.claim_bound_f64 * (1.0 + 1e-9));
        assert!((r.closed_form.mid_f64() - r.finite_difference).abs() < 1e-7);
        assert!(log_4x_deriv_bound(&b(30.0), 2).unwrap().claim_bound_f64 < 1e-15);
    }

    #[test]
    fn log4x_closed_form_small_orders() {
        // g' = log 4 * 4^x / (4^x - 1) and g'' = -(log 4)^2 4^x / (4^x - 1)^2
        let x = 1.5f64;
        let l4 = 4f64.ln();
        let e = 4f64.powf(x);
        let g = log4x_derivs(&b(x), 3).unwrap();
        assert!((g[0].mid_f64() - (e - 1.0).ln()).abs() < 1e-14);
        assert!((g[1].mid_f64() - l4 * e / (e - 1.0)).abs() < 1e-14);
        assert!((g[2].mid_f64() + l4 * l4 * e / ((e - 1.0) * (e - 1.0))).abs() < 1e-14);
        // g''' = (log 4)^3 4^x (4^x + 1) / (4^x - 1)^3
        let g3 = l4.powi(3) * e * (e + 1.0) / (e - 1.0).powi(3);
        assert!((g[3].mid_f64() - g3).abs() < 1e-13);
    }

    #[test]
    fn signs_at_thirty() {
        for variant in [TangentVariant::T, TangentVariant::InvXthRootT] {
            let r = kth_sign_tangent(variant, &b(30.0), 2).unwrap();
            assert_eq!(r.flag, SignFlag::Positive, "{variant:?}");
        }
        assert!(kth_sign_tangent(TangentVariant::T, &b(4.0), 2).is_err());
        // 50-digit numerical derivatives of -log t(x) / x at 30.
        let r2 = kth_sign_tangent(TangentVariant::InvXthRootT, &b(30.0), 2).unwrap();
        assert!(r2.value.overlaps(&b(0.002_198_586_668_834_012)));
        let r3 = kth_sign_tangent(TangentVariant::InvXthRootT, &b(30.0), 3).unwrap();
        assert!(r3.value.overlaps(&b(0.000_144_539_737_794_583)));
        assert_eq!(r3.logx_condition, Some(true));
    }

    #[test]
    fn log_t_derivative_matches_difference() {
        let x = 30.0;
        let fd = finite_difference(|t| tangent_interp(t)?.log(), x, 2).unwrap();
        let v = log_t_deriv(&b(x), 2).unwrap();
        assert!((v.mid_f64() - fd).abs() < 1e-6 + v.rad_f64(), "{} vs {fd}", v.mid_f64());
    }
}
