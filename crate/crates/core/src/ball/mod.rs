//! Midpoint-radius ("ball") arithmetic over arbitrary-precision dyadics.
//!
//! A [`Ball`] `[mid - rad, mid + rad]` is an enclosure: every operation
//! returns a ball containing the exact result for all inputs drawn from the
//! argument balls. The midpoint carries `prec` significant bits; the radius
//! is kept to a short mantissa and only ever rounded upward.

mod constants;
mod dyadic;
mod elementary;
mod format;

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use constants::{constant, Constant};
pub use dyadic::{Dyadic, Round};
pub use format::{decimal_directed, exact_decimal, parse_decimal, rational_decimal};

/// Working precision used when the caller does not choose one.
pub const DEFAULT_PREC: u32 = 128;
/// Ceiling for adaptive precision escalation.
pub const DEFAULT_PREC_CAP: u32 = 4096;

const RAD_BITS: u32 = 30;

/// Outcome of comparing two enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Greater,
    Overlap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

fn up(d: Dyadic) -> Dyadic {
    d.round(RAD_BITS, Round::Up)
}

fn mag_up(d: &Dyadic) -> Dyadic {
    d.abs().round(RAD_BITS, Round::Up)
}

impl Ball {
    pub fn exact(mid: Dyadic, prec: u32) -> Self {
        Self::with_rad(mid, Dyadic::zero(), prec)
    }

    /// Ball `mid ± rad`; the midpoint is rounded to `prec` bits and the
    /// rounding error folded into the radius.
    pub fn with_rad(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        let rounded = mid.round(prec, Round::Nearest);
        let err = mid.sub(&rounded).abs();
        Self {
            mid: rounded,
            rad: up(rad.add(&err)),
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Dyadic::zero(), prec)
    }

    pub fn one(prec: u32) -> Self {
        Self::from_int(1, prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        Self::exact(Dyadic::from_int(v), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        Self::with_rad(Dyadic::from_bigint(v.clone()), Dyadic::zero(), prec)
    }

    /// Exact conversion of a finite `f64` (it is a dyadic rational).
    pub fn from_f64(v: f64, prec: u32) -> Self {
        let d = Dyadic::from_f64(v).expect("finite f64");
        Self::with_rad(d, Dyadic::zero(), prec)
    }

    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        Self::from_rational(&BigRational::new(num.into(), den.into()), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        let num = Dyadic::from_bigint(q.numer().clone());
        let den = Dyadic::from_bigint(q.denom().clone());
        if q.denom() == &BigInt::from(1) {
            return Self::with_rad(num, Dyadic::zero(), prec);
        }
        let lo = num.div(&den, prec + 4, Round::Down);
        let hi = num.div(&den, prec + 4, Round::Up);
        Self::from_endpoints(&lo, &hi, prec)
    }

    /// Smallest convenient ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted endpoints");
        let mid = lo.add(hi).mul_pow2(-1).round(prec, Round::Nearest);
        let r = hi.sub(&mid).max(mid.sub(lo));
        Self {
            mid,
            rad: up(r),
            prec,
        }
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same enclosure carried at another precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Self::with_rad(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    /// Exact lower endpoint.
    pub fn lower(&self) -> Dyadic {
        self.mid.sub(&self.rad)
    }

    /// Exact upper endpoint.
    pub fn upper(&self) -> Dyadic {
        self.mid.add(&self.rad)
    }

    pub fn mid_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    /// Upper endpoint rounded outward to `f64` precision.
    pub fn upper_f64(&self) -> f64 {
        let u = self.upper().round(53, Round::Up);
        u.to_f64()
    }

    pub fn lower_f64(&self) -> f64 {
        let l = self.lower().round(53, Round::Down);
        l.to_f64()
    }

    pub fn contains_zero(&self) -> bool {
        self.mid.abs() <= self.rad
    }

    pub fn is_positive(&self) -> bool {
        self.lower().is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.upper().is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    pub fn contains_rational(&self, q: &BigRational) -> bool {
        let lo = dyadic_to_rational(&self.lower());
        let hi = dyadic_to_rational(&self.upper());
        &lo <= q && q <= &hi
    }

    /// Interval containment: `other ⊆ self`.
    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.lower() <= other.lower() && other.upper() <= self.upper()
    }

    pub fn overlaps(&self, other: &Ball) -> bool {
        self.compare(other) == Comparison::Overlap
    }

    pub fn compare(&self, other: &Ball) -> Comparison {
        if self.upper() < other.lower() {
            Comparison::Less
        } else if self.lower() > other.upper() {
            Comparison::Greater
        } else {
            Comparison::Overlap
        }
    }

    /// Convex hull of two balls.
    pub fn union(&self, other: &Ball) -> Ball {
        let lo = std::cmp::min(self.lower(), other.lower());
        let hi = std::cmp::max(self.upper(), other.upper());
        Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec))
    }

    /// Intersection, or `None` when disjoint.
    pub fn intersect(&self, other: &Ball) -> Option<Ball> {
        let lo = std::cmp::max(self.lower(), other.lower());
        let hi = std::cmp::min(self.upper(), other.upper());
        (lo <= hi).then(|| Ball::from_endpoints(&lo, &hi, self.prec.max(other.prec)))
    }

    /// Adds `r` to the radius.
    pub fn widen(&self, r: &Dyadic) -> Ball {
        Ball {
            mid: self.mid.clone(),
            rad: up(self.rad.add(&r.abs())),
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            mid: self.mid.neg(),
            rad: self.rad.clone(),
            prec: self.prec,
        }
    }

    pub fn abs(&self) -> Ball {
        if !self.contains_zero() {
            return if self.mid.is_negative() {
                self.neg()
            } else {
                self.clone()
            };
        }
        let hi = std::cmp::max(self.lower().abs(), self.upper().abs());
        Ball::from_endpoints(&Dyadic::zero(), &hi, self.prec)
    }

    pub fn add(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let (mid, err) = if far_apart(&self.mid, &other.mid, prec) {
            let (big, small) = if self.mid.magnitude() >= other.mid.magnitude() {
                (&self.mid, &other.mid)
            } else {
                (&other.mid, &self.mid)
            };
            let m = big.round(prec, Round::Nearest);
            let e = big.sub(&m).abs().add(&mag_up(small));
            (m, e)
        } else {
            round_exact(self.mid.add(&other.mid), prec)
        };
        Ball {
            mid,
            rad: up(self.rad.add(&other.rad).add(&err)),
            prec,
        }
    }

    pub fn sub(&self, other: &Ball) -> Ball {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let (mid, err) = round_exact(self.mid.mul(&other.mid), prec);
        let rad = mag_up(&self.mid)
            .mul(&other.rad)
            .add(&mag_up(&other.mid).mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&err);
        Ball {
            mid,
            rad: up(rad),
            prec,
        }
    }

    pub fn sqr(&self) -> Ball {
        let sq = self.mul(self);
        if self.contains_zero() {
            // x^2 >= 0: clip the enclosure at zero.
            let hi = sq.upper();
            return Ball::from_endpoints(&Dyadic::zero(), &hi, sq.prec);
        }
        sq
    }

    pub fn div(&self, other: &Ball) -> Result<Ball> {
        if other.contains_zero() {
            return Err(Error::DivisionByEnclosedZero);
        }
        let prec = self.prec.max(other.prec);
        let q = self.mid.div(&other.mid, prec, Round::Down);
        // Truncation error of the quotient: at most one unit in the last place.
        let ulp = if q.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic::pow2(q.magnitude() - prec as i64)
        };
        let rad = if self.rad.is_zero() && other.rad.is_zero() {
            ulp
        } else {
            // |a/b - am/bm| <= (ra + |am/bm| rb) / (|bm| - rb)
            let qmag = mag_up(&q).add(&ulp);
            let num = up(self.rad.add(&qmag.mul(&other.rad)));
            let den = other.mid.abs().sub(&other.rad).round(RAD_BITS, Round::Down);
            num.div(&den, RAD_BITS, Round::Up).add(&ulp)
        };
        Ok(Ball {
            mid: q,
            rad: up(rad),
            prec,
        })
    }

    pub fn recip(&self) -> Result<Ball> {
        Ball::one(self.prec).div(self)
    }

    pub fn mul_pow2(&self, k: i64) -> Ball {
        Ball {
            mid: self.mid.mul_pow2(k),
            rad: self.rad.mul_pow2(k),
            prec: self.prec,
        }
    }

    pub fn mul_int(&self, k: i64) -> Ball {
        self.mul(&Ball::from_int(k, self.prec))
    }

    pub fn add_int(&self, k: i64) -> Ball {
        self.add(&Ball::from_int(k, self.prec))
    }

    pub fn div_int(&self, k: i64) -> Ball {
        assert!(k != 0, "division by zero integer");
        self.div(&Ball::from_int(k, self.prec))
            .expect("nonzero integer divisor")
    }

    pub fn mul_rational(&self, q: &BigRational) -> Ball {
        self.mul(&Ball::from_rational(q, self.prec))
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: i64) -> Result<Ball> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut result = Ball::one(self.prec);
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        Ok(result)
    }

    /// Lower endpoint rounded down to `prec` bits.
    pub(crate) fn lower_rounded(&self, prec: u32) -> Dyadic {
        self.lower().round(prec, Round::Down)
    }

    pub(crate) fn upper_rounded(&self, prec: u32) -> Dyadic {
        self.upper().round(prec, Round::Up)
    }

    /// Width `2 rad` as an approximate float.
    pub fn width_f64(&self) -> f64 {
        2.0 * self.rad.to_f64()
    }
}

fn far_apart(a: &Dyadic, b: &Dyadic, prec: u32) -> bool {
    if a.is_zero() || b.is_zero() {
        return false;
    }
    let (ma, mb) = (a.magnitude(), b.magnitude());
    (ma - mb).abs() > prec as i64 + 8
}

fn round_exact(exact: Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    let m = exact.round(prec, Round::Nearest);
    let err = exact.sub(&m).abs();
    (m, err)
}

pub(crate) fn dyadic_to_rational(d: &Dyadic) -> BigRational {
    let e = d.exponent();
    if e >= 0 {
        BigRational::from(d.mantissa() << e as u64)
    } else {
        BigRational::new(d.mantissa().clone(), BigInt::from(1) << (-e) as u64)
    }
}

impl PartialOrd for Comparison {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let rank = |c: &Comparison| match c {
            Comparison::Less => 0,
            Comparison::Overlap => 1,
            Comparison::Greater => 2,
        };
        rank(self).partial_cmp(&rank(other))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Ball> for &Ball {
            type Output = Ball;
            fn $method(self, rhs: &Ball) -> Ball {
                Ball::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball::neg(self)
    }
}

impl std::iter::Sum for Ball {
    fn sum<I: Iterator<Item = Ball>>(iter: I) -> Ball {
        let mut acc: Option<Ball> = None;
        for b in iter {
            acc = Some(match acc {
                None => b,
                Some(a) => a.add(&b),
            });
        }
        acc.unwrap_or_else(|| Ball::zero(DEFAULT_PREC))
    }
}
