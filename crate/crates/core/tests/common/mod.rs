//! Independent oracles for the integration tests: fixed-point `exp`/`log`
//! on plain big integers (Taylor series and Newton steps, no argument
//! halving or atanh) and Richardson-extrapolated finite differences.

#![allow(dead_code)]

use logmono_core::ball::{Ball, Dyadic};
use logmono_core::Result;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `floor(q 2^w)`.
pub fn to_fixed(q: &BigRational, w: u32) -> BigInt {
    (q.numer() << w).div_floor(q.denom())
}

pub fn from_fixed(a: &BigInt, w: u32) -> BigRational {
    BigRational::new(a.clone(), BigInt::one() << w)
}

fn mul_fixed(a: &BigInt, b: &BigInt, w: u32) -> BigInt {
    (a * b) >> w
}

/// `e^f 2^w` for `0 <= f <= 1` given as a fixed-point integer, by the plain
/// Taylor series. Error at most a few hundred ulps.
fn exp_unit(f: &BigInt, w: u32) -> BigInt {
    let one = BigInt::one() << w;
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u64;
    loop {
        term = mul_fixed(&term, f, w) / k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    sum
}

/// Approximation of `e^q`, `|q| <= 200`, with relative error below
/// `2^-(w - 64)`.
pub fn exp_oracle(q: &BigRational, w: u32) -> BigRational {
    let n = q.floor().to_integer();
    let f = q - BigRational::from_integer(n.clone());
    let n = n.to_i64().expect("small exponent");
    assert!(n.abs() <= 200);
    let wp = w + 96;
    let ef = exp_unit(&to_fixed(&f, wp), wp);
    let e = exp_unit(&(BigInt::one() << wp), wp);
    let mut en = BigInt::one() << wp;
    for _ in 0..n.abs() {
        en = mul_fixed(&en, &e, wp);
    }
    let en = if n >= 0 {
        en
    } else {
        (BigInt::one() << (2 * wp)) / en
    };
    from_fixed(&mul_fixed(&en, &ef, wp), wp)
}

/// `log q` for `2^-200 < q < 2^200` by Newton steps `y += 2 (q - e^y)/(q + e^y)`
/// on [`exp_oracle`].
pub fn log_oracle(q: &BigRational, w: u32) -> BigRational {
    assert!(q.is_positive());
    let qf = q.numer().to_f64().unwrap().ln() - q.denom().to_f64().unwrap().ln();
    let mut y = BigRational::from_float(qf).expect("finite log");
    let mut bits = 40u32;
    while bits < 2 * w {
        let e = exp_oracle(&y, w + 32);
        let step = (q - &e) * BigRational::from_integer(2.into()) / (q + &e);
        // Keep the rationals small.
        y = from_fixed(&to_fixed(&(y + step), w + 64), w + 64);
        bits *= 3;
    }
    y
}

/// Does `b` overlap the interval `q ± |q| 2^-(w-80) + 2^-(w-80)`?
pub fn ball_meets(b: &Ball, q: &BigRational, w: u32) -> bool {
    let eps = (q.abs() + BigRational::one()) * from_fixed(&BigInt::one(), w - 80);
    let lo = dyadic_rational(&b.lower());
    let hi = dyadic_rational(&b.upper());
    lo <= q + &eps && q - &eps <= hi
}

pub fn dyadic_rational(d: &Dyadic) -> BigRational {
    let m = BigRational::from_integer(d.mantissa().clone());
    let e = d.exponent();
    if e >= 0 {
        m * BigRational::from_integer(BigInt::one() << e as u32)
    } else {
        m / BigRational::from_integer(BigInt::one() << (-e) as u32)
    }
}

/// Ball with the same endpoints as `[lo, hi]` if both are dyadic, else an
/// outward enclosure.
pub fn rational_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Ball {
    let a = Ball::from_rational(lo, prec).lower();
    let b = Ball::from_rational(hi, prec).upper();
    Ball::from_endpoints(&a, &b, prec)
}

/// Random rational `num/den` with `|num| < 2^nbits` and `1 <= den < 2^dbits`.
pub fn random_rational<R: Rng>(rng: &mut R, nbits: u32, dbits: u32) -> BigRational {
    let num: i64 = rng.gen_range(-(1i64 << nbits) + 1..(1i64 << nbits));
    let den: i64 = rng.gen_range(1..(1i64 << dbits));
    rat(num, den)
}

/// Central `k`-th difference of `f` at `x` with step `h` in `prec`-bit balls.
fn central_difference(f: &dyn Fn(&Ball) -> Result<Ball>, x: &BigRational, k: u32, h_log2: i64, prec: u32) -> Result<Ball> {
    let mut acc = Ball::zero(prec);
    let mut c = BigInt::one();
    for i in 0..=k {
        // Offset (k/2 - i) h.
        let off = BigRational::new(BigInt::from(k as i64 - 2 * i as i64), BigInt::from(2))
            * BigRational::from_integer(2.into()).pow(h_log2 as i32);
        let v = f(&Ball::from_rational(&(x + off), prec))?;
        let term = v.mul(&Ball::from_bigint(&c, prec));
        acc = if i % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        c = c * BigInt::from(k - i) / BigInt::from(i + 1);
    }
    Ok(acc.mul_pow2(-(k as i64) * h_log2))
}

/// 512-bit finite-difference estimate of `f^(k)(x)` with two Richardson
/// levels on steps `2^h_log2, 2^(h_log2-1), 2^(h_log2-2)`. The returned
/// ball's radius is the disagreement of the last two extrapolants plus the
/// rounding slack, so it is an estimate rather than a proof.
pub fn fd_oracle(f: &dyn Fn(&Ball) -> Result<Ball>, x: &BigRational, k: u32, h_log2: i64) -> Result<Ball> {
    const P: u32 = 512;
    let d: Vec<Ball> = (0..3)
        .map(|i| central_difference(f, x, k, h_log2 - i, P))
        .collect::<Result<_>>()?;
    let rich = |a: &Ball, b: &Ball| b.mul_int(4).sub(a).div_int(3);
    let r1 = rich(&d[0], &d[1]);
    let r2 = rich(&d[1], &d[2]);
    let err = r2.sub(&r1).abs().upper();
    let slack = r2.rad().clone();
    Ok(Ball::with_rad(r2.mid().clone(), err.mul_pow2(1).add(&slack), P))
}
