//! Enclosures of `zeta` and its derivatives on `x > 1`, and of `log Gamma`
//! and its derivatives from the two-sided Stirling bands.
//!
//! `zeta(x)` is a Dirichlet partial sum plus an Euler-Maclaurin tail.
//! `zeta^(j)(x)` for `j >= 1` uses a partial sum plus an integral-test tail.
//! `(log Gamma)^(j)` comes from the band
//!
//! ```text
//! (-1)^j (log Gamma)^(j)(y) in ((-1)^j S^(j)(y), (-1)^j S^(j)(y) + j!/(12 y^(j+1)))
//! ```
//!
//! with `S(y) = (y - 1/2) log y - y + log sqrt(2 pi)`, applied at `y = x + m`
//! and pulled back with `Gamma(x+1) = x Gamma(x)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::ball::{constant, Ball, Constant, Dyadic};
use crate::error::{domain, Result};
use crate::exactnum::{abs_bernoulli_even, bernoulli, factorial};

/// Default shift `m` for the log-gamma bands.
pub const DEFAULT_SHIFT: u32 = 24;

/// Truncation point for the Dirichlet partial sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaEnclosureParams {
    /// Terms `n = 1 .. N-1` are summed directly.
    pub partial_terms: u64,
    pub prec: u32,
}

impl ZetaEnclosureParams {
    pub fn new(partial_terms: u64, prec: u32) -> Result<Self> {
        if partial_terms < 2 {
            return Err(domain("partial_terms must be at least 2"));
        }
        Ok(Self {
            partial_terms,
            prec,
        })
    }

    /// `N = max(32, floor(prec/9) + 3)`.
    pub fn with_prec(prec: u32) -> Self {
        Self {
            partial_terms: 32u64.max(prec as u64 / 9 + 3),
            prec,
        }
    }
}

fn log_int(n: u64, prec: u32) -> Ball {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Ball>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("log cache").get(&(n, prec)) {
        return b.clone();
    }
    let v = Ball::from_int(n as i64, prec).log().expect("n >= 1");
    cache.lock().expect("log cache").insert((n, prec), v.clone());
    v
}

fn smallest_factor(n: u64) -> u64 {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return d;
        }
        d += 1;
    }
    n
}

/// `n^(-x)` for `n = 0 ..= upto` (entries 0 and 1 are `1`).
fn inverse_powers(x: &Ball, upto: u64, wp: u32) -> Result<Vec<Ball>> {
    let mut pows = vec![Ball::one(wp); (upto + 1) as usize];
    for n in 2..=upto {
        let p = smallest_factor(n);
        pows[n as usize] = if p == n {
            x.mul(&log_int(n, wp)).neg().exp()?
        } else {
            pows[p as usize].mul(&pows[(n / p) as usize])
        };
    }
    Ok(pows)
}

/// Ball `[lo(a), hi(b)]`.
fn hull(a: &Ball, b: &Ball, prec: u32) -> Ball {
    let lo = a.lower().min(b.lower());
    let hi = a.upper().max(b.upper());
    Ball::from_endpoints(&lo, &hi, prec)
}

/// `[0, sup w]`.
fn zero_to(w: &Ball) -> Ball {
    let hi = w.upper().max(Dyadic::zero());
    Ball::from_endpoints(&Dyadic::zero(), &hi, w.prec())
}

/// Tail `sum_{n >= N} n^(-s)` by Euler-Maclaurin with a remainder of twice
/// the first omitted correction term.
fn euler_maclaurin_tail(s: &Ball, n: u64, n_pow: &Ball, wp: u32) -> Result<Ball> {
    let nb = Ball::from_int(n as i64, wp);
    let s_minus_1 = s.add_int(-1);
    let mut acc = nb
        .mul(n_pow)
        .div(&s_minus_1)
        .map_err(|_| domain("zeta argument touches 1"))?
        .add(&n_pow.mul_pow2(-1));

    // Choose the number of correction terms from a float estimate of
    // log2 |T_k|, T_k = B_2k/(2k)! (s)_{2k-1} N^(-s-2k+1).
    let s_hi = s.upper_f64();
    let log2_n = (n as f64).log2();
    let log2_pn = n_pow.upper().magnitude() as f64;
    let log2_2pi = (2.0 * std::f64::consts::PI).log2();
    let target = -((wp + 8) as f64);
    let mut log2_poch = s_hi.log2();
    let mut prev = f64::INFINITY;
    let mut m = 1u64;
    loop {
        let est = 1.0 - 2.0 * m as f64 * log2_2pi + log2_poch + log2_pn - (2 * m - 1) as f64 * log2_n;
        if est < target || est >= prev || m > 4 * n + 16 {
            if est >= prev {
                m -= 1;
            }
            break;
        }
        prev = est;
        log2_poch += (s_hi + (2 * m - 1) as f64).log2() + (s_hi + (2 * m) as f64).log2();
        m += 1;
    }
    let m = m.max(1);

    // Corrections k = 1 .. m-1, then the remainder at k = m.
    let mut poch = s.clone();
    let mut npow = BigInt::from(n);
    for k in 1..=m {
        let coeff = BigRational::new(BigInt::one(), factorial(2 * k) * &npow);
        if k < m {
            let b = bernoulli(2 * k) * &coeff;
            acc = acc.add(&poch.mul(n_pow).mul_rational(&b));
            let a = s.add_int((2 * k - 1) as i64);
            let c = s.add_int((2 * k) as i64);
            poch = poch.mul(&a).mul(&c);
            npow *= n * n;
        } else {
            let b = abs_bernoulli_even(k) * coeff * BigInt::from(2);
            let bound = poch.abs().mul(n_pow).mul_rational(&b);
            acc = acc.widen(&bound.upper());
        }
    }
    Ok(acc)
}

/// `int_L^inf (log t)^j t^(-x) dt` for a point `x > 1` and integer `L >= 2`.
fn log_power_integral(x: &Dyadic, l: u64, j: u32, wp: u32) -> Result<Ball> {
    let xm1 = Ball::exact(x.clone(), wp).add_int(-1);
    let a = xm1.mul(&log_int(l, wp));
    let mut term = Ball::one(wp);
    let mut sum = Ball::one(wp);
    for i in 1..=j {
        term = term.mul(&a).div_int(i as i64);
        sum = sum.add(&term);
    }
    let fact = Ball::from_bigint(&factorial(j as u64), wp);
    fact.mul(&a.neg().exp()?)
        .mul(&sum)
        .div(&xm1.powi(j as i64 + 1)?)
}

fn check_zeta_domain(x: &Ball, jmax: u32, params: &ZetaEnclosureParams) -> Result<()> {
    if x.lower() <= Dyadic::one() {
        return Err(domain("zeta requires inf(x) > 1"));
    }
    if jmax >= 1 {
        // Terms (log t)^j t^(-x) must decrease on [N-1, inf).
        let need = (jmax as f64 / x.lower_f64()).exp();
        if ((params.partial_terms - 1) as f64) < need + 1e-9 {
            return Err(domain("partial_terms too small for a monotone tail"));
        }
    }
    Ok(())
}

/// `[zeta(x), zeta'(x), ..., zeta^(jmax)(x)]` sharing the powers `n^(-x)`.
/// Only needs `inf(x) > 1` and a monotone tail from `N - 1` on.
pub fn zeta_derivs(x: &Ball, jmax: u32, params: &ZetaEnclosureParams) -> Result<Vec<Ball>> {
    check_zeta_domain(x, jmax, params)?;
    let n = params.partial_terms;
    let prec = params.prec;
    let wp = prec + 16 + (64 - n.leading_zeros());
    let x = x.with_prec(wp);
    let pows = inverse_powers(&x, n, wp)?;

    let mut out = Vec::with_capacity(jmax as usize + 1);
    let mut partial = Ball::one(wp);
    for p in &pows[2..n as usize] {
        partial = partial.add(p);
    }
    let tail = euler_maclaurin_tail(&x, n, &pows[n as usize], wp)?;
    out.push(partial.add(&tail).with_prec(prec));

    if jmax == 0 {
        return Ok(out);
    }
    let logs: Vec<Ball> = (0..n).map(|k| if k < 2 { Ball::zero(wp) } else { log_int(k, wp).neg() }).collect();
    let mut weighted: Vec<Ball> = pows[..n as usize].to_vec();
    let (x_lo, x_hi) = (x.lower(), x.upper());
    for j in 1..=jmax {
        let mut partial = Ball::zero(wp);
        for k in 2..n as usize {
            weighted[k] = weighted[k].mul(&logs[k]);
            partial = partial.add(&weighted[k]);
        }
        let lo = log_power_integral(&x_hi, n, j, wp)?;
        let hi = log_power_integral(&x_lo, n - 1, j, wp)?;
        let mut tail = hull(&lo, &hi, wp);
        if j % 2 == 1 {
            tail = tail.neg();
        }
        out.push(partial.add(&tail).with_prec(prec));
    }
    Ok(out)
}

/// Enclosure of `zeta(x)` for `inf(x) > 1`.
pub fn zeta_enclosure(x: &Ball, params: &ZetaEnclosureParams) -> Result<Ball> {
    Ok(zeta_derivs(x, 0, params)?.remove(0))
}

/// `zeta^(j)(x) = sum_{n >= 1} (-log n)^j n^(-x)`; needs `inf(x) > j + 2`
/// for `j >= 1`.
pub fn zeta_deriv_enclosure(x: &Ball, j: u32, params: &ZetaEnclosureParams) -> Result<Ball> {
    if j >= 1 && x.lower() <= Dyadic::from_int(j as i64 + 2) {
        return Err(domain(format!("zeta^({j}) requires inf(x) > {}", j + 2)));
    }
    Ok(zeta_derivs(x, j, params)?.pop().expect("nonempty"))
}

/// `zeta(2n) = 2^(2n-1) pi^(2n) |B_2n| / (2n)!`.
pub fn zeta_even_exact(n: u64, prec: u32) -> Ball {
    assert!(n >= 1, "zeta_even_exact needs n >= 1");
    let wp = prec + 16 + (64 - n.leading_zeros()) * 2;
    let pi = constant(Constant::Pi, wp);
    let coeff = abs_bernoulli_even(n) / BigRational::from(factorial(2 * n));
    pi.powi(2 * n as i64)
        .expect("nonnegative power")
        .mul_pow2(2 * n as i64 - 1)
        .mul_rational(&coeff)
        .with_prec(prec)
}

/// `S(y) = (y - 1/2) log y - y + log sqrt(2 pi)`.
fn stirling_main(y: &Ball, log_y: &Ball) -> Ball {
    let half_log_2pi = constant(Constant::Log2Pi, y.prec()).mul_pow2(-1);
    y.sub(&Ball::from_ratio(1, 2, y.prec()))
        .mul(log_y)
        .sub(y)
        .add(&half_log_2pi)
}

fn check_gamma_domain(x: &Ball) -> Result<()> {
    if !x.is_positive() {
        return Err(domain("log-gamma requires inf(x) > 0"));
    }
    Ok(())
}

/// `log prod_{i<m} (x + i)`.
fn shift_log(x: &Ball, m: u32) -> Result<Ball> {
    if m == 0 {
        return Ok(Ball::zero(x.prec()));
    }
    let mut prod = x.clone();
    for i in 1..m {
        prod = prod.mul(&x.add_int(i as i64));
    }
    prod.log()
}

/// `[(log Gamma)(x), (log Gamma)'(x), ..., (log Gamma)^(jmax)(x)]` from the
/// Stirling bands at `x + m`.
pub fn loggamma_derivs(x: &Ball, jmax: u32, m: u32) -> Result<Vec<Ball>> {
    check_gamma_domain(x)?;
    let prec = x.prec();
    let wp = prec + 16;
    let x = x.with_prec(wp);
    let y = x.add_int(m as i64);
    let log_y = y.log()?;
    let inv_y = y.recip()?;

    let mut out = Vec::with_capacity(jmax as usize + 1);
    // j = 0
    let band = stirling_main(&y, &log_y).add(&zero_to(&inv_y.div_int(12)));
    out.push(band.sub(&shift_log(&x, m)?).with_prec(prec));
    if jmax == 0 {
        return Ok(out);
    }

    let inv_xi: Vec<Ball> = (0..m)
        .map(|i| x.add_int(i as i64).recip())
        .collect::<Result<_>>()?;
    let mut pow_xi = inv_xi.clone();
    let mut inv_y_pow = inv_y.clone(); // y^(-j)
    for j in 1..=jmax {
        let jf = factorial(j as u64);
        let width = Ball::from_bigint(&jf, wp)
            .mul(&inv_y_pow)
            .mul(&inv_y)
            .div_int(12);
        let s_j = if j == 1 {
            log_y.sub(&inv_y.mul_pow2(-1))
        } else {
            let a = Ball::from_bigint(&factorial(j as u64 - 2), wp).mul(&inv_y_pow).mul(&y);
            let b = Ball::from_bigint(&factorial(j as u64 - 1), wp)
                .mul(&inv_y_pow)
                .mul_pow2(-1);
            let v = a.add(&b);
            if j % 2 == 0 {
                v
            } else {
                v.neg()
            }
        };
        let w = zero_to(&width);
        let band = if j % 2 == 0 { s_j.add(&w) } else { s_j.sub(&w) };

        let mut shift = Ball::zero(wp);
        for p in &pow_xi {
            shift = shift.add(p);
        }
        // d^j log(x+i) = (-1)^(j-1) (j-1)! (x+i)^(-j)
        let mut shift = shift.mul(&Ball::from_bigint(&factorial(j as u64 - 1), wp));
        if j % 2 == 0 {
            shift = shift.neg();
        }
        out.push(band.sub(&shift).with_prec(prec));

        for (p, inv) in pow_xi.iter_mut().zip(&inv_xi) {
            *p = p.mul(inv);
        }
        inv_y_pow = inv_y_pow.mul(&inv_y);
    }
    Ok(out)
}

/// `log Gamma(x)` from the band at `x + m`; width at most `1/(12(x+m))` plus
/// rounding.
pub fn loggamma_enclosure(x: &Ball, m: u32) -> Result<Ball> {
    Ok(loggamma_derivs(x, 0, m)?.remove(0))
}

/// `(log Gamma)^(j)(x)` for `j >= 1`.
pub fn loggamma_deriv_enclosure(x: &Ball, j: u32, m: u32) -> Result<Ball> {
    if j == 0 {
        return Err(domain("loggamma_deriv_enclosure needs j >= 1"));
    }
    Ok(loggamma_derivs(x, j, m)?.pop().expect("nonempty"))
}

/// Tight `log Gamma(x)` from the Stirling series with Bernoulli corrections,
/// shifted until the series reaches the ball's precision.
pub fn loggamma_stirling(x: &Ball) -> Result<Ball> {
    check_gamma_domain(x)?;
    let prec = x.prec();
    let wp = prec + 16;
    let x = x.with_prec(wp);
    let want = 0.12 * wp as f64 + 4.0;
    let m = (want - x.lower_f64()).ceil().max(0.0) as u32;
    let y = x.add_int(m as i64);
    let log_y = y.log()?;
    let inv_y = y.recip()?;
    let inv_y2 = inv_y.sqr();
    let log2_y = y.lower_f64().log2();

    let mut acc = stirling_main(&y, &log_y);
    let mut y_pow = inv_y.clone(); // y^(1-2k)
    let mut k = 1u64;
    loop {
        let b = abs_bernoulli_even(k + 1);
        let est = b.numer().bits() as f64 - b.denom().bits() as f64
            - ((2 * k + 2) as f64 * (2 * k + 1) as f64).log2()
            - (2 * k + 1) as f64 * log2_y;
        let c = bernoulli(2 * k) / BigRational::from(BigInt::from(2 * k * (2 * k - 1)));
        acc = acc.add(&y_pow.mul_rational(&c));
        y_pow = y_pow.mul(&inv_y2);
        if est < -((wp + 8) as f64) || k >= 400 {
            break;
        }
        k += 1;
    }
    // |R_K| <= |B_{2K+2}| / ((2K+2)(2K+1) y^(2K+1)), with y^(1-2(K+1)) in y_pow.
    let c = abs_bernoulli_even(k + 1) / BigRational::from(BigInt::from((2 * k + 2) * (2 * k + 1)));
    let bound = y_pow.abs().mul_rational(&c);
    acc = acc.widen(&bound.upper());
    Ok(acc.sub(&shift_log(&x, m)?).with_prec(prec))
}

/// Alzer's `G0(x) = -log Gamma(x) + S(x) + 1/(12x)` and
/// `F0(x) = log Gamma(x) - S(x)`, with `log Gamma` from the Stirling series.
pub fn alzer_band_values(x: &Ball) -> Result<(Ball, Ball)> {
    check_gamma_domain(x)?;
    let lg = loggamma_stirling(x)?;
    let s = stirling_main(x, &x.log()?);
    let f0 = lg.sub(&s);
    let g0 = x.recip()?.div_int(12).sub(&f0);
    Ok((g0, f0))
}
