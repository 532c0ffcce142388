//! Enclosures of pi, log 2, log 2pi and Euler's constant, cached per
//! precision.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{Ball, Dyadic, Round};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constant {
    Pi,
    Log2,
    Log2Pi,
    EulerGamma,
}

/// Enclosure of a named constant with radius at most `2^(4 - prec)`.
pub fn constant(name: Constant, prec: u32) -> Ball {
    assert!(prec >= 16, "constant precision below 16 bits");
    static CACHE: OnceLock<Mutex<HashMap<(Constant, u32), Ball>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().expect("constant cache").get(&(name, prec)) {
        return b.clone();
    }
    let wp = prec + 24;
    let value = match name {
        Constant::Pi => pi(wp),
        Constant::Log2 => log2(wp),
        Constant::Log2Pi => pi(wp).mul_pow2(1).log().expect("2pi > 0"),
        Constant::EulerGamma => euler_gamma(wp),
    }
    .with_prec(prec);
    cache
        .lock()
        .expect("constant cache")
        .insert((name, prec), value.clone());
    value
}

/// `sum_{i=0}^{K} 1 / ((2i+1) k^(2i+1))` with `K` large enough that the first
/// omitted term is below `2^-(wp+4)`; returns the partial sum (with `sign`
/// alternation if requested) and the first omitted term's bound.
fn inverse_odd_series(k: u64, wp: u32, alternating: bool) -> (Ball, Dyadic) {
    let kk = BigInt::from(k) * BigInt::from(k);
    let mut power = BigInt::from(k);
    let mut acc = Ball::zero(wp);
    let mut i = 0u64;
    loop {
        let den = &power * (2 * i + 1);
        let term = Ball::from_rational(&num_rational::BigRational::new(BigInt::one(), den.clone()), wp);
        acc = if alternating && i % 2 == 1 {
            acc.sub(&term)
        } else {
            acc.add(&term)
        };
        power *= &kk;
        i += 1;
        if power.bits() as i64 > wp as i64 + 8 {
            let next_den = Dyadic::from_bigint(&power * (2 * i + 1));
            let bound = Dyadic::one().div(&next_den, 32, Round::Up);
            return (acc, bound);
        }
    }
}

fn atan_inv(k: u64, wp: u32) -> Ball {
    // Alternating series with decreasing terms: error <= first omitted term.
    let (sum, bound) = inverse_odd_series(k, wp, true);
    sum.widen(&bound)
}

fn pi(wp: u32) -> Ball {
    atan_inv(5, wp)
        .mul_int(16)
        .sub(&atan_inv(239, wp).mul_int(4))
}

fn log2(wp: u32) -> Ball {
    // log 2 = 2 atanh(1/3); tail <= first omitted term * 9/8.
    let (sum, bound) = inverse_odd_series(3, wp, false);
    let tail = bound.mul(&Dyadic::new(BigInt::from(9), -3));
    sum.widen(&tail).mul_pow2(1)
}

/// Brent-McMillan: with `A_0 = -log n`, `B_0 = 1`,
/// `B_k = B_{k-1} n^2 / k^2`, `A_k = (A_{k-1} n^2 / k + B_k) / k`,
/// `0 < (sum A_k)/(sum B_k) - gamma < pi e^(-4n)`.
fn euler_gamma(wp: u32) -> Ball {
    // pi e^(-4n) < 2^-(wp+2) once 4n log2(e) > wp + 4.
    let n = ((wp as f64 + 4.0) / (4.0 * std::f64::consts::LOG2_E)).ceil() as i64 + 1;
    let terms = (2.0 * std::f64::consts::E * n as f64).ceil() as i64 + 1;
    let n2 = Ball::from_int(n * n, wp);
    let mut a = Ball::from_int(n, wp).log().expect("n > 0").neg();
    let mut b = Ball::one(wp);
    let mut u = a.clone();
    let mut v = b.clone();
    for k in 1..=terms {
        b = b.mul(&n2).div_int(k * k);
        a = a.mul(&n2).div_int(k).add(&b).div_int(k);
        u = u.add(&a);
        v = v.add(&b);
    }
    let gamma = u.div(&v).expect("v >= 1");
    // Truncation: for k >= 2en the terms (n^k/k!)^2 (H_k - log n) are below
    // 2^(-4en) (1 + log k) and shrink geometrically, so they sit well under
    // the Bessel-ratio bound; widen by both.
    let bessel = Dyadic::pow2(-((4.0 * n as f64 * std::f64::consts::LOG2_E).floor() as i64) + 2);
    let trunc = Dyadic::pow2(-((4.0 * std::f64::consts::E * n as f64).floor() as i64) + 8);
    gamma.widen(&bessel).widen(&trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_and_radius() {
        for p in [16u32, 64, 128, 512] {
            for (c, approx) in [
                (Constant::Pi, std::f64::consts::PI),
                (Constant::Log2, std::f64::consts::LN_2),
                (Constant::Log2Pi, (2.0 * std::f64::consts::PI).ln()),
                (Constant::EulerGamma, 0.577_215_664_901_532_9),
            ] {
                let b = constant(c, p);
                assert!(b.rad() <= &Dyadic::pow2(4 - p as i64), "{c:?} at {p}");
                assert!((b.mid_f64() - approx).abs() < 1e-15_f64.max(2f64.powi(3 - p as i32)));
            }
        }
    }
}
