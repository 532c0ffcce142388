//! Exact dyadic rationals `man * 2^exp` with directed rounding.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    /// Toward negative infinity.
    Down,
    /// Toward positive infinity.
    Up,
    Nearest,
}

/// An exact dyadic number. Normalized: the mantissa is odd, or zero with
/// exponent zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Self {
            man: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Self { man, exp };
        d.normalize();
        d
    }

    pub fn from_int(v: i64) -> Self {
        Self::new(BigInt::from(v), 0)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::new(v, 0)
    }

    /// Exact conversion; `None` for non-finite input.
    pub fn from_f64(v: f64) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        if v == 0.0 {
            return Some(Self::zero());
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        Some(Self::new(BigInt::from(m) * sign, e))
    }

    pub fn pow2(e: i64) -> Self {
        Self {
            man: BigInt::one(),
            exp: e,
        }
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.man.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.man >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.man.sign()
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.man.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit plus one: `2^(mag-1) <= |x| < 2^mag`.
    /// Zero maps to `i64::MIN`.
    pub fn magnitude(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            man: -&self.man,
            exp: self.exp,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            man: self.man.abs(),
            exp: self.exp,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            man: self.man.clone(),
            exp: self.exp + k,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << (self.exp - e) as u64;
        let b = &other.man << (other.exp - e) as u64;
        Self::new(a + b, e)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self {
            man: &self.man * &other.man,
            exp: self.exp + other.exp,
        }
    }

    /// Rounds to at most `prec` significant bits.
    pub fn round(&self, prec: u32, mode: Round) -> Self {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let shift = bits - prec as u64;
        Self::new(shift_round(&self.man, shift, mode), self.exp + shift as i64)
    }

    /// Rounds to a multiple of `2^exp_floor`.
    pub fn round_abs_exp(&self, exp_floor: i64, mode: Round) -> Self {
        if self.is_zero() || self.exp >= exp_floor {
            return self.clone();
        }
        let shift = (exp_floor - self.exp) as u64;
        Self::new(shift_round(&self.man, shift, mode), exp_floor)
    }

    /// Quotient rounded to `prec` bits in the given direction.
    pub fn div(&self, other: &Self, prec: u32, mode: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let shift = prec as i64 + 2 + other.man.bits() as i64 - self.man.bits() as i64;
        let (num, den) = if shift >= 0 {
            (&self.man << shift as u64, other.man.clone())
        } else {
            (self.man.clone(), &other.man << (-shift) as u64)
        };
        // q = floor(num / den) for any signs; r carries the sign of den.
        let (q, r) = num.div_mod_floor(&den);
        let exp = self.exp - other.exp - shift;
        let q = if r.is_zero() {
            q
        } else {
            match mode {
                Round::Up => q + 1,
                Round::Down => q,
                Round::Nearest => {
                    let twice = (&r * 2i32).abs();
                    if twice >= den.abs() {
                        q + 1
                    } else {
                        q
                    }
                }
            }
        };
        Self::new(q, exp).round(prec, mode)
    }

    /// Approximate value; saturates to 0 or infinity out of range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let keep = bits.min(60);
        let m = (&self.man >> (bits - keep) as u64).to_f64().unwrap_or(0.0);
        let e = self.exp + bits - keep;
        scale_f64(m, e)
    }

    /// Floor as an integer.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << self.exp as u64
        } else {
            &self.man >> (-self.exp) as u64
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exp >= 0 || self.is_zero()
    }
}

fn scale_f64(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
        if v.is_infinite() {
            return v;
        }
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
        if v == 0.0 {
            return v;
        }
    }
    v * 2f64.powi(e as i32)
}

/// `man / 2^shift` rounded in the given direction. `>>` on `BigInt` floors.
fn shift_round(man: &BigInt, shift: u64, mode: Round) -> BigInt {
    let q = man >> shift;
    let exact = man.trailing_zeros().is_none_or(|tz| tz >= shift);
    if exact {
        return q;
    }
    match mode {
        Round::Down => q,
        Round::Up => q + 1,
        Round::Nearest => {
            let rem = man - (&q << shift);
            let half = BigInt::one() << (shift - 1);
            if rem >= half {
                q + 1
            } else {
                q
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.man.sign(), other.man.sign());
        if sa != sb {
            return sign_rank(sa).cmp(&sign_rank(sb));
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes first.
        let (ma, mb) = (self.magnitude(), other.magnitude());
        let mag_order = if ma != mb {
            ma.cmp(&mb)
        } else {
            let e = self.exp.min(other.exp);
            let a = self.man.abs() << (self.exp - e) as u64;
            let b = other.man.abs() << (other.exp - e) as u64;
            a.cmp(&b)
        };
        if sa == Sign::Plus {
            mag_order
        } else {
            mag_order.reverse()
        }
    }
}

fn sign_rank(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
