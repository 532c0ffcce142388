//! Enclosed `exp`, `log`, `sqrt` and real powers.
//!
//! Point values come from argument reduction plus a truncated series whose
//! remainder bound is added to the radius. Balls of positive width are
//! handled by evaluating the (monotone) function at both endpoints.

use num_bigint::BigInt;

use super::constants::{constant, Constant};
use super::{Ball, Dyadic, Round};
use crate::error::{domain, Result};

const GUARD: u32 = 32;

impl Ball {
    pub fn exp(&self) -> Result<Ball> {
        let prec = self.prec;
        if self.is_exact() {
            return exp_point(&self.mid, prec);
        }
        let wp = prec + GUARD;
        let lo = exp_point(&self.lower_rounded(wp), prec)?.lower();
        let hi = exp_point(&self.upper_rounded(wp), prec)?.upper();
        Ok(Ball::from_endpoints(&lo, &hi, prec))
    }

    pub fn log(&self) -> Result<Ball> {
        if !self.is_positive() {
            return Err(domain("log of a ball that is not entirely positive"));
        }
        let prec = self.prec;
        if self.is_exact() {
            return log_point(&self.mid, prec);
        }
        let wp = prec + GUARD;
        let lo = log_point(&self.lower_rounded(wp), prec)?.lower();
        let hi = log_point(&self.upper_rounded(wp), prec)?.upper();
        Ok(Ball::from_endpoints(&lo, &hi, prec))
    }

    pub fn sqrt(&self) -> Result<Ball> {
        if !self.is_positive() {
            return Err(domain("sqrt of a ball that is not entirely positive"));
        }
        let wp = self.prec + 8;
        let lo = sqrt_directed(&self.lower(), wp, Round::Down);
        let hi = sqrt_directed(&self.upper(), wp, Round::Up);
        Ok(Ball::from_endpoints(&lo, &hi, self.prec))
    }

    /// `self^exponent = exp(exponent * log self)` for a positive base.
    pub fn pow(&self, exponent: &Ball) -> Result<Ball> {
        if !self.is_positive() {
            return Err(domain("pow with a base that is not entirely positive"));
        }
        exponent.mul(&self.log()?).exp()
    }
}

/// `sqrt(x)` rounded in the given direction to `prec` bits, `x >= 0`.
pub(crate) fn sqrt_directed(x: &Dyadic, prec: u32, mode: Round) -> Dyadic {
    assert!(!x.is_negative());
    if x.is_zero() {
        return Dyadic::zero();
    }
    let target = 2 * prec as i64 + 4;
    let mut shift = (target - x.bits() as i64).max(0);
    if (x.exponent() - shift) % 2 != 0 {
        shift += 1;
    }
    let m: BigInt = x.mantissa() << shift as u64;
    let e = x.exponent() - shift;
    let root = m.sqrt();
    let exact = &root * &root == m;
    let root = if !exact && mode == Round::Up {
        root + 1
    } else {
        root
    };
    Dyadic::new(root, e / 2).round(prec, mode)
}

fn exp_point(x: &Dyadic, prec: u32) -> Result<Ball> {
    if x.is_zero() {
        return Ok(Ball::one(prec));
    }
    let xf = x.to_f64();
    if !xf.is_finite() || xf.abs() > 1e15 {
        return Err(domain("exp argument out of range"));
    }
    let n = (xf / std::f64::consts::LN_2).round() as i64;
    let nbits = 64 - n.unsigned_abs().leading_zeros();
    let wp = prec + GUARD + nbits;
    let ln2 = constant(Constant::Log2, wp + 8);
    let r = Ball::exact(x.clone(), wp).sub(&ln2.mul_int(n));
    let s = ((wp as f64).sqrt() / 1.5).ceil() as i64;
    let r = r.mul_pow2(-s);
    let rho = std::cmp::max(r.lower().abs(), r.upper().abs());
    let rho_f = rho.to_f64().max(f64::MIN_POSITIVE);

    // Smallest K with rho^(K+1)/(K+1)! below 2^-(wp+4).
    let mut k = 1u64;
    let mut log2_term = rho_f.log2();
    loop {
        let next = log2_term + rho_f.log2() - ((k + 1) as f64).log2();
        if next < -((wp + 4) as f64) {
            break;
        }
        log2_term = next;
        k += 1;
    }

    let mut acc = Ball::one(wp);
    for i in (1..=k).rev() {
        acc = acc.mul(&r).div_int(i as i64).add_int(1);
    }
    // Tail sum_{i>K} rho^i / i! <= 2 rho^(K+1) / (K+1)!  for rho <= 1.
    let mut tail = rho.round(32, Round::Up);
    let mut fact = Dyadic::one();
    for i in 2..=k + 1 {
        tail = tail.mul(&rho).round(32, Round::Up);
        fact = fact.mul(&Dyadic::from_int(i as i64));
    }
    let tail = tail.mul_pow2(1).div(&fact, 32, Round::Up);
    acc = acc.widen(&tail);

    for _ in 0..s {
        acc = acc.sqr();
    }
    Ok(acc.mul_pow2(n).with_prec(prec))
}

fn log_point(x: &Dyadic, prec: u32) -> Result<Ball> {
    if !x.is_positive() {
        return Err(domain("log of a non-positive number"));
    }
    // x = m * 2^e with m in [3/4, 3/2).
    let mut e = x.magnitude() - 1;
    let mut m = x.mul_pow2(-e);
    if m > Dyadic::new(BigInt::from(3), -1) {
        m = m.mul_pow2(-1);
        e += 1;
    }
    let ebits = 64 - e.unsigned_abs().leading_zeros();
    let wp = prec + GUARD + ebits;
    let j = ((wp as f64).sqrt() / 2.0).ceil() as u32;
    let wp = wp + j;

    let mut mb = Ball::exact(m, wp);
    for _ in 0..j {
        let lo = sqrt_directed(&mb.lower(), wp, Round::Down);
        let hi = sqrt_directed(&mb.upper(), wp, Round::Up);
        mb = Ball::from_endpoints(&lo, &hi, wp);
    }
    let one = Ball::one(wp);
    let t = mb.sub(&one).div(&mb.add(&one))?;
    let t2 = t.sqr();
    let tmax = std::cmp::max(t.lower().abs(), t.upper().abs());
    let tmax_f = tmax.to_f64();

    let mut terms = 0u64;
    if tmax_f > 0.0 {
        // |t|^(2K+3)/(2K+3) below 2^-(wp+4).
        let l2 = tmax_f.log2();
        while (2 * terms + 3) as f64 * l2 - ((2 * terms + 3) as f64).log2() > -((wp + 4) as f64) {
            terms += 1;
        }
    }
    // atanh(t) = t * sum_{i=0}^{K} t^(2i) / (2i+1) + R
    let mut acc = Ball::one(wp).div_int((2 * terms + 1) as i64);
    for i in (0..terms).rev() {
        acc = acc.mul(&t2).add(&Ball::one(wp).div_int((2 * i + 1) as i64));
    }
    let mut atanh = t.mul(&acc);
    if !tmax.is_zero() {
        // R <= tmax^(2K+3) / ((2K+3) (1 - tmax^2)), and tmax <= 1/4 here.
        let power = (2 * terms + 3) as i64;
        let mut bound = Dyadic::one();
        for _ in 0..power {
            bound = bound.mul(&tmax).round(32, Round::Up);
        }
        let denom = Dyadic::from_int(power).mul(&Dyadic::new(BigInt::from(15), -4));
        atanh = atanh.widen(&bound.div(&denom, 32, Round::Up));
    }
    let log_m = atanh.mul_pow2(j as i64 + 1);
    let result = if e == 0 {
        log_m
    } else {
        log_m.add(&constant(Constant::Log2, wp).mul_int(e))
    };
    Ok(result.with_prec(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn log_of_one_is_zero() {
        let l = Ball::one(P).log().unwrap();
        assert!(l.contains(&Dyadic::zero()));
        assert!(l.rad() <= &Dyadic::pow2(1 - P as i64));
    }

    #[test]
    fn exp_of_zero_is_one() {
        assert!(Ball::zero(P).exp().unwrap().contains(&Dyadic::one()));
    }

    #[test]
    fn sqrt_newton_oracle() {
        // sqrt(1 + 1.5/2^6) = sqrt(1.0234375); Newton iteration in f64 from 1.
        let mut y = 1.0f64;
        for _ in 0..8 {
            y = 0.5 * (y + 1.0234375 / y);
        }
        let s = Ball::from_f64(1.0234375, P).sqrt().unwrap();
        assert!((s.mid_f64() - y).abs() < 1e-15);
        assert!((s.mid_f64() - 1.0116509).abs() < 1e-7);
        assert!(s.sqr().contains(&Dyadic::from_f64(1.0234375).unwrap()));
    }

    #[test]
    fn exp_log_roundtrip() {
        for v in [0.001, 0.5, 1.0, 2.0, 10.0, 123.456, 1e-30, 1e30] {
            let x = Ball::from_f64(v, P);
            let back = x.log().unwrap().exp().unwrap();
            assert!(back.contains(x.mid()), "roundtrip at {v}");
            assert!(back.rad_f64() < v * 1e-30, "radius at {v}: {}", back.rad_f64());
        }
    }

    #[test]
    fn domain_errors() {
        assert!(Ball::from_int(-1, P).log().is_err());
        assert!(Ball::zero(P).sqrt().is_err());
        assert!(Ball::from_int(-2, P).pow(&Ball::one(P)).is_err());
    }

    #[test]
    fn pow_integer_exponent() {
        let r = Ball::from_int(2, P).pow(&Ball::from_int(10, P)).unwrap();
        assert!(r.contains(&Dyadic::from_int(1024)));
        let r = Ball::from_int(9, P).pow(&Ball::from_ratio(1, 2, P)).unwrap();
        assert!(r.contains(&Dyadic::from_int(3)));
    }

    #[test]
    fn wide_argument_enclosure() {
        let x = Ball::with_rad(Dyadic::from_int(2), Dyadic::from_f64(0.25).unwrap(), P);
        let e = x.exp().unwrap();
        assert!(e.lower_f64() <= 1.75f64.exp() && e.upper_f64() >= 2.25f64.exp());
        let l = x.log().unwrap();
        assert!(l.lower_f64() <= 1.75f64.ln() && l.upper_f64() >= 2.25f64.ln());
    }
}
