//! `log theta(x) = (log 2 + log zeta(x) + log Gamma(x+1)) / x` and its
//! derivatives.

use serde::Serialize;

use crate::ball::{constant, Ball, Constant, Dyadic};
use crate::error::{domain, Result};
use crate::exactnum::{binomial, factorial, harmonic};
use crate::special::{loggamma_derivs, loggamma_stirling, zeta_derivs, ZetaEnclosureParams, DEFAULT_SHIFT};

/// The three-term split of a second derivative (or of its analytic bound).
#[derive(Debug, Clone, Serialize)]
pub struct BoundBreakdown {
    pub at_x: Ball,
    pub term_log2: Ball,
    pub term_zeta: Ball,
    pub term_gamma: Ball,
    pub total: Ball,
}

impl BoundBreakdown {
    pub(crate) fn new(at_x: Ball, term_log2: Ball, term_zeta: Ball, term_gamma: Ball) -> Self {
        let total = term_log2.add(&term_zeta).add(&term_gamma);
        Self {
            at_x,
            term_log2,
            term_zeta,
            term_gamma,
            total,
        }
    }
}

fn require_above(x: &Ball, bound: i64, what: &str) -> Result<()> {
    if x.lower() <= Dyadic::from_int(bound) {
        return Err(domain(format!("{what} requires inf(x) > {bound}")));
    }
    Ok(())
}

/// `(1/x)^(n) = (-1)^n n! / x^(n+1)` for `n = 0 ..= k`.
pub(crate) fn recip_derivs(x: &Ball, k: u32) -> Result<Vec<Ball>> {
    let inv = x.recip()?;
    let mut out = vec![inv.clone()];
    for n in 1..=k {
        let prev = out.last().expect("nonempty");
        out.push(prev.mul(&inv).mul_int(-(n as i64)));
    }
    Ok(out)
}

/// `(g / x)^(k)` by Leibniz from `g^(0..=k)` and `(1/x)^(0..=k)`.
pub(crate) fn leibniz_over_x(g: &[Ball], r: &[Ball], k: u32) -> Ball {
    let mut acc = Ball::zero(g[0].prec());
    for j in 0..=k {
        let c = binomial(k as u64, j as u64);
        let term = g[j as usize].mul(&r[(k - j) as usize]).mul(&Ball::from_bigint(&c, g[0].prec()));
        acc = acc.add(&term);
    }
    acc
}

/// `(log zeta)^(n)` for `n = 0 ..= k` from `zeta^(0..=k)` via
/// `zeta L^(n) = zeta^(n) - sum_{i=1}^{n-1} C(n-1, i-1) L^(i) zeta^(n-i)`.
pub fn log_zeta_from_derivs(z: &[Ball]) -> Result<Vec<Ball>> {
    let mut l = vec![z[0].log()?];
    for n in 1..z.len() {
        let mut acc = z[n].clone();
        for i in 1..n {
            let c = Ball::from_bigint(&binomial(n as u64 - 1, i as u64 - 1), z[0].prec());
            acc = acc.sub(&c.mul(&l[i]).mul(&z[n - i]));
        }
        l.push(acc.div(&z[0])?);
    }
    Ok(l)
}

/// `(log zeta)^(j)(x)` for `j = 0 ..= k`.
pub fn log_zeta_derivs(x: &Ball, k: u32) -> Result<Vec<Ball>> {
    let z = zeta_derivs(x, k, &ZetaEnclosureParams::with_prec(x.prec()))?;
    log_zeta_from_derivs(&z)
}

/// Closed form `(log x / x)^(j) = (-1)^(j-1) j! (H_j - log x) / x^(j+1)`.
pub fn logx_over_x_deriv(x: &Ball, j: u32) -> Result<Ball> {
    if j == 0 {
        return Err(domain("logx_over_x_deriv needs j >= 1"));
    }
    if !x.is_positive() {
        return Err(domain("logx_over_x_deriv requires inf(x) > 0"));
    }
    let p = x.prec();
    let h = Ball::from_rational(&harmonic(j as u64), p);
    let v = Ball::from_bigint(&factorial(j as u64), p)
        .mul(&h.sub(&x.log()?))
        .div(&x.powi(j as i64 + 1)?)?;
    Ok(if j % 2 == 1 { v } else { v.neg() })
}

/// `log theta(x)`, with `log Gamma` from the Stirling series.
pub fn log_theta(x: &Ball) -> Result<Ball> {
    require_above(x, 2, "log_theta")?;
    let p = x.prec();
    let lz = zeta_derivs(x, 0, &ZetaEnclosureParams::with_prec(p))?[0].log()?;
    let lg = loggamma_stirling(x)?;
    constant(Constant::Log2, p)
        .add(&lz)
        .add(&x.log()?)
        .add(&lg)
        .div(x)
}

/// `theta(x)`.
pub fn theta(x: &Ball) -> Result<Ball> {
    log_theta(x)?.exp()
}

/// `(log theta)''(x)` as `(log 2/x)'' + (log zeta/x)'' + (log Gamma(x+1)/x)''`.
pub fn d2_log_theta(x: &Ball) -> Result<BoundBreakdown> {
    require_above(x, 3, "d2_log_theta")?;
    let p = x.prec();
    let r = recip_derivs(x, 2)?;
    let term_log2 = constant(Constant::Log2, p).mul(&r[2]);

    let z = zeta_derivs(x, 2, &ZetaEnclosureParams::with_prec(p))?;
    // (zeta'' zeta - zeta'^2) / zeta^2, then the quotient split over x.
    let l0 = z[0].log()?;
    let l1 = z[1].div(&z[0])?;
    let l2 = z[2].mul(&z[0]).sub(&z[1].sqr()).div(&z[0].sqr())?;
    let term_zeta = leibniz_over_x(&[l0, l1, l2], &r, 2);

    let g = loggamma_derivs(x, 2, DEFAULT_SHIFT)?;
    let term_gamma = logx_over_x_deriv(x, 2)?.add(&leibniz_over_x(&g, &r, 2));
    Ok(BoundBreakdown::new(x.clone(), term_log2, term_zeta, term_gamma))
}

/// `(log theta)^(k)(x)` for `k >= 2` and `inf(x) > k + 3`.
pub fn kth_deriv_log_theta(x: &Ball, k: u32) -> Result<Ball> {
    if k < 2 {
        return Err(domain("kth_deriv_log_theta needs k >= 2"));
    }
    require_above(x, k as i64 + 3, "kth_deriv_log_theta")?;
    kth_deriv_unchecked(x, k)
}

pub(crate) fn kth_deriv_unchecked(x: &Ball, k: u32) -> Result<Ball> {
    let p = x.prec();
    let r = recip_derivs(x, k)?;
    let log2 = constant(Constant::Log2, p).mul(&r[k as usize]);
    let l = log_zeta_derivs(x, k)?;
    let g = loggamma_derivs(x, k, DEFAULT_SHIFT)?;
    Ok(log2
        .add(&leibniz_over_x(&l, &r, k))
        .add(&logx_over_x_deriv(x, k)?)
        .add(&leibniz_over_x(&g, &r, k)))
}
