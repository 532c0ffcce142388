//! Decimal rendering ("mid ± rad", outward rounded) and decimal parsing.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{dyadic_to_rational, Ball, Dyadic, Round};

const MAX_DIGITS: i64 = 40;

fn pow10(k: u64) -> BigInt {
    num_traits::pow(BigInt::from(10), k as usize)
}

/// `floor(log10 |q|)` for a nonzero rational.
fn decimal_exponent(q: &BigRational) -> i64 {
    let q = q.abs();
    let n = q.numer();
    let d = q.denom();
    let approx = (n.bits() as f64 - d.bits() as f64) * std::f64::consts::LOG10_2;
    let mut e = approx.floor() as i64 - 1;
    // Correct the estimate upward until 10^(e+1) > q.
    loop {
        let next = scale10(&BigRational::one(), e + 1);
        if next > q {
            break;
        }
        e += 1;
    }
    while scale10(&BigRational::one(), e) > q {
        e -= 1;
    }
    e
}

fn scale10(q: &BigRational, s: i64) -> BigRational {
    if s >= 0 {
        q * BigRational::from(pow10(s as u64))
    } else {
        q / BigRational::from(pow10((-s) as u64))
    }
}

enum Dir {
    Nearest,
    Up,
    Down,
}

/// Rounds `q * 10^s` to an integer.
fn round_scaled(q: &BigRational, s: i64, dir: Dir) -> BigInt {
    let v = scale10(q, s);
    match dir {
        Dir::Nearest => v.round().to_integer(),
        Dir::Up => v.ceil().to_integer(),
        Dir::Down => v.floor().to_integer(),
    }
}

/// Renders `digits * 10^-scale` in fixed or scientific notation.
fn render(digits: &BigInt, scale: i64) -> String {
    let neg = digits.is_negative();
    let s = digits.abs().to_string();
    let n = s.len() as i64;
    let exp10 = n - 1 - scale;
    let sign = if neg { "-" } else { "" };
    if (-4..=15).contains(&exp10) {
        if scale <= 0 {
            let zeros = "0".repeat((-scale) as usize);
            format!("{sign}{s}{zeros}")
        } else if scale >= n {
            let zeros = "0".repeat((scale - n) as usize);
            format!("{sign}0.{zeros}{s}")
        } else {
            let (a, b) = s.split_at((n - scale) as usize);
            format!("{sign}{a}.{b}")
        }
    } else {
        let (a, b) = s.split_at(1);
        let b = b.trim_end_matches('0');
        if b.is_empty() {
            format!("{sign}{a}e{exp10}")
        } else {
            format!("{sign}{a}.{b}e{exp10}")
        }
    }
}

/// Outward-rounded decimal rendering of a nonnegative radius bound with
/// two significant digits.
fn render_up(q: &BigRational) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let e = decimal_exponent(q);
    let s = 1 - e;
    let d = round_scaled(q, s, Dir::Up);
    render(&d, s)
}

impl Ball {
    /// Decimal `"m ± r"` with `sig` significant digits in the midpoint. The
    /// printed interval contains the ball: the radius absorbs the midpoint's
    /// decimal rounding and is itself rounded up.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = (sig.max(1) as i64).min(MAX_DIGITS);
        let mid = dyadic_to_rational(self.mid());
        let rad = dyadic_to_rational(self.rad());
        if mid.is_zero() {
            return format!("0 ± {}", render_up(&rad));
        }
        let e = decimal_exponent(&mid);
        let s = sig - 1 - e;
        let d = round_scaled(&mid, s, Dir::Nearest);
        let printed = scale10(&BigRational::from(d.clone()), -s);
        let slack = (&mid - &printed).abs();
        let total = rad + slack;
        format!("{} ± {}", render(&d, s), render_up(&total))
    }

    /// Significant digits justified by the radius (at least 3, at most 40).
    pub fn natural_digits(&self) -> usize {
        if self.rad().is_zero() || self.mid().is_zero() {
            return ((self.prec() as f64 * std::f64::consts::LOG10_2) as usize).clamp(3, MAX_DIGITS as usize);
        }
        let m = self.mid().magnitude() as f64;
        let r = self.rad().magnitude() as f64;
        (((m - r) * std::f64::consts::LOG10_2).ceil() as i64 + 1).clamp(3, MAX_DIGITS) as usize
    }

    /// Ball enclosing an exact decimal literal such as `"6.001"` or `"1e4"`.
    pub fn from_decimal_str(s: &str, prec: u32) -> Option<Ball> {
        parse_decimal(s).map(|q| Ball::from_rational(&q, prec))
    }
}

/// Decimal with `sig` significant digits, rounded in the given direction.
pub fn decimal_directed(d: &Dyadic, sig: usize, mode: Round) -> String {
    rational_decimal(&dyadic_to_rational(d), sig, mode)
}

/// Decimal rendering of a rational with `sig` significant digits.
pub fn rational_decimal(q: &BigRational, sig: usize, mode: Round) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let e = decimal_exponent(q);
    let s = (sig.max(1) as i64) - 1 - e;
    let dir = match mode {
        Round::Up => Dir::Up,
        Round::Down => Dir::Down,
        Round::Nearest => Dir::Nearest,
    };
    render(&round_scaled(q, s, dir), s)
}

/// Exact decimal for rationals whose denominator is `2^a 5^b`; `p/q`
/// otherwise.
pub fn exact_decimal(q: &BigRational) -> String {
    let mut d = q.denom().clone();
    let mut scale = 0i64;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() || (&d % &five).is_zero() {
        if (&d % &two).is_zero() {
            d /= &two;
        } else {
            d /= &five;
        }
        scale += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let digits = scale10(q, scale).to_integer();
    let mut out = render_fixed(&digits, scale);
    if out.contains('.') {
        out = out.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    out
}

fn render_fixed(digits: &BigInt, scale: i64) -> String {
    let neg = digits.is_negative();
    let s = digits.abs().to_string();
    let n = s.len() as i64;
    let sign = if neg { "-" } else { "" };
    if scale <= 0 {
        format!("{sign}{s}")
    } else if scale >= n {
        format!("{sign}0.{}{s}", "0".repeat((scale - n) as usize))
    } else {
        let (a, b) = s.split_at((n - scale) as usize);
        format!("{sign}{a}.{b}")
    }
}

impl serde::Serialize for Ball {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal(self.natural_digits()))
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or_else(|| self.natural_digits());
        f.write_str(&self.to_decimal(digits))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = dyadic_to_rational(self);
        if q.is_zero() {
            return f.write_str("0");
        }
        let digits = f.precision().unwrap_or(17) as i64;
        let e = decimal_exponent(&q);
        let s = digits - 1 - e;
        let d = round_scaled(&q, s, Dir::Nearest);
        f.write_str(&render(&d, s))
    }
}

/// Parses an exact decimal literal (`-12.5e-3`, `6.001`, `100`).
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (body, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match body.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, body.strip_prefix('+').unwrap_or(body)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((a, b)) => (a, b),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let scale = exp - frac_part.len() as i64;
    let mut q = scale10(&BigRational::from(digits), scale);
    if neg {
        q = -q;
    }
    Some(q)
}
