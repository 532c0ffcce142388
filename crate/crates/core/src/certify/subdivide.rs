//! Adaptive bisection proving that an enclosed function is negative on an
//! interval.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{decimal_directed, exact_decimal, parse_decimal, Ball, Dyadic, Round, DEFAULT_PREC, DEFAULT_PREC_CAP};
use crate::error::{domain, Result};

use super::theta::{d2_log_theta, kth_deriv_unchecked};

/// A function whose sign is to be certified.
pub trait SignTarget: Sync {
    fn enclose(&self, x: &Ball) -> Result<Ball>;

    /// Enclosure of the derivative on `x`, used for the mean-value form.
    fn enclose_derivative(&self, _x: &Ball) -> Option<Result<Ball>> {
        None
    }
}

impl<F> SignTarget for F
where
    F: Fn(&Ball) -> Result<Ball> + Sync,
{
    fn enclose(&self, x: &Ball) -> Result<Ball> {
        self(x)
    }
}

/// `(log theta)''`, with `(log theta)'''` for the mean-value form.
#[derive(Debug, Clone, Copy, Default)]
pub struct D2LogTheta;

impl SignTarget for D2LogTheta {
    fn enclose(&self, x: &Ball) -> Result<Ball> {
        Ok(d2_log_theta(x)?.total)
    }

    fn enclose_derivative(&self, x: &Ball) -> Option<Result<Ball>> {
        Some(kth_deriv_unchecked(x, 3))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertStatus {
    Certified,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertLeaf {
    /// Exact decimal endpoints.
    pub lo: String,
    pub hi: String,
    /// Upper bound of the enclosure on the leaf, rounded up; `"+inf"` when
    /// the evaluation failed.
    pub upper_bound_decimal: String,
    pub precision_bits: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignCertificate {
    pub interval: [String; 2],
    /// Sorted by `lo`; consecutive leaves share endpoints.
    pub leaves: Vec<CertLeaf>,
    pub status: CertStatus,
    /// Largest precision used by any leaf.
    pub precision_bits: u32,
    pub max_upper: String,
    pub max_upper_f64: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub max_depth: u32,
    pub prec: u32,
    pub prec_cap: u32,
    pub max_leaves: usize,
    /// Leaves narrower than `2^min_width_log2` get more precision before
    /// being split again.
    pub min_width_log2: i64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            max_depth: 40,
            prec: DEFAULT_PREC,
            prec_cap: DEFAULT_PREC_CAP,
            max_leaves: 200_000,
            min_width_log2: -20,
        }
    }
}

#[derive(Debug, Clone)]
struct Leaf {
    lo: BigRational,
    hi: BigRational,
    depth: u32,
    prec: u32,
    upper: Option<Dyadic>,
    lower: Option<Dyadic>,
}

fn interval_ball(lo: &BigRational, hi: &BigRational, prec: u32) -> Ball {
    if lo == hi {
        return Ball::from_rational(lo, prec);
    }
    let a = Ball::from_rational(lo, prec).lower();
    let b = Ball::from_rational(hi, prec).upper();
    Ball::from_endpoints(&a, &b, prec)
}

/// Enclosure of `target` on `[lo, hi]`: the mean-value form when a
/// derivative is available, else the direct enclosure.
fn evaluate<T: SignTarget + ?Sized>(target: &T, lo: &BigRational, hi: &BigRational, prec: u32) -> Option<Ball> {
    let x = interval_ball(lo, hi, prec);
    if lo != hi {
        if let Some(Ok(d)) = target.enclose_derivative(&x) {
            let c = (lo + hi) / BigRational::from_integer(BigInt::from(2));
            let cb = Ball::from_rational(&c, prec);
            if let Ok(fc) = target.enclose(&cb) {
                let mv = fc.add(&d.mul(&x.sub(&cb)));
                return Some(match target.enclose(&x) {
                    Ok(direct) => direct.intersect(&mv).unwrap_or(mv),
                    Err(_) => mv,
                });
            }
        }
    }
    target.enclose(&x).ok()
}

fn evaluated(target: &(impl SignTarget + ?Sized), mut leaf: Leaf) -> Leaf {
    let e = evaluate(target, &leaf.lo, &leaf.hi, leaf.prec);
    leaf.upper = e.as_ref().map(|b| b.upper());
    leaf.lower = e.as_ref().map(|b| b.lower());
    leaf
}

fn width_log2(leaf: &Leaf) -> f64 {
    let w = &leaf.hi - &leaf.lo;
    if w.is_zero() {
        return f64::NEG_INFINITY;
    }
    w.numer().bits() as f64 - w.denom().bits() as f64
}

fn is_negative(leaf: &Leaf) -> bool {
    leaf.upper.as_ref().is_some_and(|u| u.is_negative())
}

/// The target is certainly non-negative somewhere on the leaf.
fn is_refuted(leaf: &Leaf) -> bool {
    leaf.lower.as_ref().is_some_and(|l| !l.is_negative())
}

/// Certifies `target < 0` on `[a, b]` by bisection, splitting the leaves
/// with the largest upper bounds first. Never fails: exhaustion of depth,
/// precision or the leaf budget yields `Undecided`.
pub fn certify_negative<T: SignTarget + ?Sized>(
    target: &T,
    a: &BigRational,
    b: &BigRational,
    opts: &CertifyOptions,
) -> SignCertificate {
    let (a, b) = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let root = evaluated(
        target,
        Leaf {
            lo: a.clone(),
            hi: b.clone(),
            depth: 0,
            prec: opts.prec,
            upper: None,
            lower: None,
        },
    );
    let mut done: Vec<Leaf> = Vec::new();
    let mut stuck: Vec<Leaf> = Vec::new();
    let mut pending = vec![root];
    let half = BigRational::new(BigInt::one(), BigInt::from(2));

    while !pending.is_empty() {
        let mut open = Vec::new();
        for leaf in pending.drain(..) {
            if is_negative(&leaf) {
                done.push(leaf);
            } else if is_refuted(&leaf) || leaf.lo == leaf.hi {
                stuck.push(leaf);
            } else {
                open.push(leaf);
            }
        }
        if stuck.iter().any(is_refuted) {
            stuck.append(&mut open);
            break;
        }
        // Worst leaves first, ties by position.
        open.sort_by(|x, y| {
            let ux = x.upper.clone();
            let uy = y.upper.clone();
            match (ux, uy) {
                (None, None) => x.lo.cmp(&y.lo),
                (None, Some(_)) => std::cmp::Ordering::Less,
                (Some(_), None) => std::cmp::Ordering::Greater,
                (Some(p), Some(q)) => q.cmp(&p).then_with(|| x.lo.cmp(&y.lo)),
            }
        });
        let mut children = Vec::new();
        for leaf in open {
            let budget_left = done.len() + stuck.len() + children.len() + 2 <= opts.max_leaves;
            if !budget_left {
                stuck.push(leaf);
                continue;
            }
            if width_log2(&leaf) < opts.min_width_log2 as f64 && leaf.prec < opts.prec_cap {
                children.push(Leaf {
                    prec: (leaf.prec * 2).min(opts.prec_cap),
                    ..leaf
                });
            } else if leaf.depth < opts.max_depth {
                let mid = (&leaf.lo + &leaf.hi) * &half;
                children.push(Leaf {
                    lo: leaf.lo.clone(),
                    hi: mid.clone(),
                    depth: leaf.depth + 1,
                    prec: leaf.prec,
                    upper: None,
                    lower: None,
                });
                children.push(Leaf {
                    lo: mid,
                    hi: leaf.hi,
                    depth: leaf.depth + 1,
                    prec: leaf.prec,
                    upper: None,
                    lower: None,
                });
            } else {
                stuck.push(leaf);
            }
        }
        pending = children.into_par_iter().map(|l| evaluated(target, l)).collect();
    }

    let status = if stuck.is_empty() {
        CertStatus::Certified
    } else {
        CertStatus::Undecided
    };
    let mut leaves: Vec<Leaf> = done.into_iter().chain(stuck).collect();
    leaves.sort_by(|x, y| x.lo.cmp(&y.lo).then_with(|| x.hi.cmp(&y.hi)));
    let max_upper = leaves
        .iter()
        .map(|l| l.upper.clone())
        .try_fold(None::<Dyadic>, |acc, u| {
            u.map(|u| Some(match acc {
                Some(m) if m > u => m,
                _ => u,
            }))
        })
        .flatten();
    let precision_bits = leaves.iter().map(|l| l.prec).max().unwrap_or(opts.prec);
    SignCertificate {
        interval: [exact_decimal(&a), exact_decimal(&b)],
        leaves: leaves
            .iter()
            .map(|l| CertLeaf {
                lo: exact_decimal(&l.lo),
                hi: exact_decimal(&l.hi),
                upper_bound_decimal: render_upper(l.upper.as_ref()),
                precision_bits: l.prec,
            })
            .collect(),
        status,
        precision_bits,
        max_upper: render_upper(max_upper.as_ref()),
        max_upper_f64: max_upper.map_or(f64::INFINITY, |d| d.to_f64()),
    }
}

fn render_upper(u: Option<&Dyadic>) -> String {
    match u {
        Some(d) => decimal_directed(d, 6, Round::Up),
        None => "+inf".to_string(),
    }
}

fn parse_endpoint(s: &str) -> Result<BigRational> {
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.parse().map_err(|_| domain(format!("bad endpoint {s}")))?;
        let d: BigInt = d.parse().map_err(|_| domain(format!("bad endpoint {s}")))?;
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s).ok_or_else(|| domain(format!("bad endpoint {s}")))
}

/// `(log theta)'' < 0` on `[a, b]` with `6 < a`.
pub fn certify_d2_log_theta(a: &BigRational, b: &BigRational, opts: &CertifyOptions) -> Result<SignCertificate> {
    if *a <= BigRational::from_integer(6.into()) || b < a {
        return Err(domain("certification interval must satisfy 6 < a <= b"));
    }
    Ok(certify_negative(&D2LogTheta, a, b, opts))
}

/// Re-evaluates every leaf and checks that the leaves tile the interval and
/// every upper bound is negative.
pub fn replay<T: SignTarget + ?Sized>(target: &T, cert: &SignCertificate) -> Result<bool> {
    if cert.status != CertStatus::Certified || cert.leaves.is_empty() {
        return Ok(false);
    }
    let mut expect = parse_endpoint(&cert.interval[0])?;
    let end = parse_endpoint(&cert.interval[1])?;
    for leaf in &cert.leaves {
        let lo = parse_endpoint(&leaf.lo)?;
        let hi = parse_endpoint(&leaf.hi)?;
        if lo != expect {
            return Ok(false);
        }
        match evaluate(target, &lo, &hi, leaf.precision_bits) {
            Some(b) if b.is_negative() => {}
            _ => return Ok(false),
        }
        expect = hi;
    }
    Ok(expect == end)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_decimal(s).unwrap()
    }

    #[test]
    fn degenerate_interval_is_single_leaf() {
        let f = |x: &Ball| Ok(x.add_int(-7));
        let c = certify_negative(&f, &q("6.5"), &q("6.5"), &CertifyOptions::default());
        assert_eq!(c.leaves.len(), 1);
        assert_eq!(c.status, CertStatus::Certified);
    }

    #[test]
    fn sign_change_is_undecided() {
        let f = |x: &Ball| Ok(x.add_int(-7));
        let c = certify_negative(&f, &q("6.5"), &q("7.5"), &CertifyOptions::default());
        assert_eq!(c.status, CertStatus::Undecided);
    }

    #[test]
    fn negative_linear_certifies_and_replays() {
        let f = |x: &Ball| Ok(x.add_int(-8));
        let c = certify_negative(&f, &q("6.5"), &q("7.5"), &CertifyOptions::default());
        assert_eq!(c.status, CertStatus::Certified);
        assert!(replay(&f, &c).unwrap());
        assert_eq!(c.interval, ["6.5".to_string(), "7.5".to_string()]);
    }

    #[test]
    fn d2_on_short_interval() {
        let c = certify_d2_log_theta(&q("6.001"), &q("8"), &CertifyOptions::default()).unwrap();
        assert_eq!(c.status, CertStatus::Certified);
        assert!(c.max_upper_f64 < 0.0);
        assert!(replay(&D2LogTheta, &c).unwrap());
        assert!(certify_d2_log_theta(&q("5"), &q("8"), &CertifyOptions::default()).is_err());
    }
}
