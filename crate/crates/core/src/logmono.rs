//! The ratio operator `R`, log-concavity and log-convexity verdicts, and
//! scans for (almost) infinite log-monotonicity.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ball::{Ball, DEFAULT_PREC, DEFAULT_PREC_CAP};
use crate::error::{domain, Error, Result};
use crate::exactnum::{abs_bernoulli_even, tangent};

/// A sequence term: exact, or an enclosure at some precision.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Exact(BigRational),
    Enclosed(Ball),
}

impl Term {
    pub fn to_ball(&self, prec: u32) -> Ball {
        match self {
            Term::Exact(q) => Ball::from_rational(q, prec),
            Term::Enclosed(b) => b.clone(),
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Term::Exact(q) => q.is_positive(),
            Term::Enclosed(b) => b.is_positive(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceName {
    AbsBernoulli,
    RootAbsBernoulli,
    InvRootAbsBernoulli,
    Tangent,
    RootTangent,
    InvRootTangent,
    Custom,
}

impl SequenceName {
    pub const ALL: [SequenceName; 6] = [
        SequenceName::AbsBernoulli,
        SequenceName::RootAbsBernoulli,
        SequenceName::InvRootAbsBernoulli,
        SequenceName::Tangent,
        SequenceName::RootTangent,
        SequenceName::InvRootTangent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SequenceName::AbsBernoulli => "abs_bernoulli",
            SequenceName::RootAbsBernoulli => "root_abs_bernoulli",
            SequenceName::InvRootAbsBernoulli => "inv_root_abs_bernoulli",
            SequenceName::Tangent => "tangent",
            SequenceName::RootTangent => "root_tangent",
            SequenceName::InvRootTangent => "inv_root_tangent",
            SequenceName::Custom => "custom",
        }
    }
}

impl fmt::Display for SequenceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .chain([SequenceName::Custom])
            .find(|n| n.as_str() == s)
            .ok_or_else(|| domain(format!("unknown sequence {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceKind {
    ExactRational,
    Enclosed,
}

type Generator = Arc<dyn Fn(u64, u32) -> Result<Term> + Send + Sync>;

/// A positive sequence with a memoized generator.
#[derive(Clone)]
pub struct SequenceHandle {
    name: SequenceName,
    label: String,
    kind: SequenceKind,
    start_index: u64,
    generator: Generator,
    cache: Arc<RwLock<HashMap<(u64, u32), Term>>>,
}

impl fmt::Debug for SequenceHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceHandle")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("start_index", &self.start_index)
            .finish()
    }
}

/// `exp(log(q) / n)`, or its reciprocal.
fn nth_root(q: &BigRational, n: u64, prec: u32, invert: bool) -> Result<Ball> {
    let l = Ball::from_rational(q, prec).log()?.div_int(n as i64);
    if invert { l.neg() } else { l }.exp()
}

impl SequenceHandle {
    fn new(name: SequenceName, label: String, kind: SequenceKind, start_index: u64, generator: Generator) -> Self {
        Self {
            name,
            label,
            kind,
            start_index,
            generator,
            cache: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    /// One of the built-in sequences, all indexed from 1:
    /// `|B_{2n}|`, its `n`-th root and the reciprocal root, and the same for
    /// the tangent numbers `T(n)`.
    pub fn named(name: SequenceName) -> Result<Self> {
        let (kind, generator): (SequenceKind, Generator) = match name {
            SequenceName::AbsBernoulli => (
                SequenceKind::ExactRational,
                Arc::new(|n, _| Ok(Term::Exact(abs_bernoulli_even(n)))),
            ),
            SequenceName::RootAbsBernoulli => (
                SequenceKind::Enclosed,
                Arc::new(|n, p| Ok(Term::Enclosed(nth_root(&abs_bernoulli_even(n), n, p, false)?))),
            ),
            SequenceName::InvRootAbsBernoulli => (
                SequenceKind::Enclosed,
                Arc::new(|n, p| Ok(Term::Enclosed(nth_root(&abs_bernoulli_even(n), n, p, true)?))),
            ),
            SequenceName::Tangent => (
                SequenceKind::ExactRational,
                Arc::new(|n, _| Ok(Term::Exact(BigRational::from_integer(tangent(n)?)))),
            ),
            SequenceName::RootTangent => (
                SequenceKind::Enclosed,
                Arc::new(|n, p| {
                    let t = BigRational::from_integer(tangent(n)?);
                    Ok(Term::Enclosed(nth_root(&t, n, p, false)?))
                }),
            ),
            SequenceName::InvRootTangent => (
                SequenceKind::Enclosed,
                Arc::new(|n, p| {
                    let t = BigRational::from_integer(tangent(n)?);
                    Ok(Term::Enclosed(nth_root(&t, n, p, true)?))
                }),
            ),
            SequenceName::Custom => return Err(domain("custom sequences need a generator")),
        };
        Ok(Self::new(name, name.as_str().to_string(), kind, 1, generator))
    }

    /// An exact custom sequence.
    pub fn exact<F>(label: &str, start_index: u64, f: F) -> Self
    where
        F: Fn(u64) -> Result<BigRational> + Send + Sync + 'static,
    {
        Self::new(
            SequenceName::Custom,
            label.to_string(),
            SequenceKind::ExactRational,
            start_index,
            Arc::new(move |n, _| f(n).map(Term::Exact)),
        )
    }

    /// A custom sequence of enclosures; `f(n, prec)`.
    pub fn enclosed<F>(label: &str, start_index: u64, f: F) -> Self
    where
        F: Fn(u64, u32) -> Result<Ball> + Send + Sync + 'static,
    {
        Self::new(
            SequenceName::Custom,
            label.to_string(),
            SequenceKind::Enclosed,
            start_index,
            Arc::new(move |n, p| f(n, p).map(Term::Enclosed)),
        )
    }

    pub fn name(&self) -> SequenceName {
        self.name
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn start_index(&self) -> u64 {
        self.start_index
    }

    /// Term `n`; exact sequences ignore `prec`.
    pub fn value(&self, n: u64, prec: u32) -> Result<Term> {
        if n < self.start_index {
            return Err(domain(format!(
                "{} starts at index {}, asked for {n}",
                self.label, self.start_index
            )));
        }
        let key = (n, if self.kind == SequenceKind::ExactRational { 0 } else { prec });
        if let Some(t) = self.cache.read().expect("sequence cache poisoned").get(&key) {
            return Ok(t.clone());
        }
        let t = (self.generator)(n, prec)?;
        if !t.is_positive() {
            return Err(Error::NonPositiveTerm(n));
        }
        self.cache
            .write()
            .expect("sequence cache poisoned")
            .entry(key)
            .or_insert_with(|| t.clone());
        Ok(t)
    }

    /// `R s`: term `n` is `s(n+1) / s(n)`.
    pub fn r_operator(&self) -> SequenceHandle {
        let inner = self.clone();
        let generator: Generator = Arc::new(move |n, p| {
            let a = inner.value(n, p)?;
            let b = inner.value(n + 1, p)?;
            Ok(match (a, b) {
                (Term::Exact(a), Term::Exact(b)) => Term::Exact(b / a),
                (a, b) => Term::Enclosed(b.to_ball(p).div(&a.to_ball(p))?),
            })
        });
        Self::new(
            self.name,
            format!("R({})", self.label),
            self.kind,
            self.start_index,
            generator,
        )
    }

    /// `R^r s`.
    pub fn r_power(&self, r: u32) -> SequenceHandle {
        (0..r).fold(self.clone(), |s, _| s.r_operator())
    }
}

/// Term `n` of a built-in sequence.
pub fn sequence_value(name: &str, n: u64, prec: u32) -> Result<Term> {
    SequenceHandle::named(name.parse()?)?.value(n, prec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VerdictTag {
    Holds,
    Fails,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub tag: VerdictTag,
    pub strict: bool,
    /// Bits of the deciding evaluation; 0 when decided exactly.
    pub precision_used: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// `s(n+1)^2 >= s(n) s(n+2)`
    Concave,
    /// `s(n+1)^2 <= s(n) s(n+2)`
    Convex,
    /// `s(n) <= s(n+1)`
    Increasing,
}

/// The precision cap, from `LOGMONO_PREC_CAP` when set.
pub fn default_prec_cap() -> u32 {
    std::env::var("LOGMONO_PREC_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_PREC_CAP)
}

/// `128, 256, ...` up to `cap`, always ending at `cap`.
pub fn precision_ladder(cap: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = DEFAULT_PREC.min(cap);
    while p < cap {
        out.push(p);
        p *= 2;
    }
    out.push(cap);
    out
}

fn sign_tag(sign: std::cmp::Ordering, strict: bool) -> VerdictTag {
    use std::cmp::Ordering::*;
    match (sign, strict) {
        (Greater, _) | (Equal, false) => VerdictTag::Holds,
        _ => VerdictTag::Fails,
    }
}

/// The quantity whose positivity the shape asks for.
fn shape_margin_exact(shape: Shape, t: &[BigRational]) -> BigRational {
    match shape {
        Shape::Concave => &t[1] * &t[1] - &t[0] * &t[2],
        Shape::Convex => &t[0] * &t[2] - &t[1] * &t[1],
        Shape::Increasing => &t[1] - &t[0],
    }
}

fn shape_margin_ball(shape: Shape, t: &[Ball]) -> Ball {
    match shape {
        Shape::Concave => t[1].sqr().sub(&t[0].mul(&t[2])),
        Shape::Convex => t[0].mul(&t[2]).sub(&t[1].sqr()),
        Shape::Increasing => t[1].sub(&t[0]),
    }
}

/// Verdict on `shape` at index `n`, escalating precision up to `cap` for
/// enclosed sequences.
pub fn shape_at(s: &SequenceHandle, n: u64, shape: Shape, strict: bool, cap: u32) -> Result<Verdict> {
    let width = if shape == Shape::Increasing { 2 } else { 3 };
    for p in precision_ladder(cap) {
        let terms = (0..width).map(|i| s.value(n + i, p)).collect::<Result<Vec<_>>>()?;
        if let Some(exact) = terms
            .iter()
            .map(|t| match t {
                Term::Exact(q) => Some(q.clone()),
                Term::Enclosed(_) => None,
            })
            .collect::<Option<Vec<_>>>()
        {
            let m = shape_margin_exact(shape, &exact);
            let ord = if m.is_zero() {
                std::cmp::Ordering::Equal
            } else if m.is_positive() {
                std::cmp::Ordering::Greater
            } else {
                std::cmp::Ordering::Less
            };
            return Ok(Verdict {
                tag: sign_tag(ord, strict),
                strict,
                precision_used: 0,
            });
        }
        let balls: Vec<Ball> = terms.iter().map(|t| t.to_ball(p)).collect();
        let m = shape_margin_ball(shape, &balls);
        let tag = if m.is_positive() {
            Some(VerdictTag::Holds)
        } else if m.is_negative() {
            Some(VerdictTag::Fails)
        } else {
            None
        };
        if let Some(tag) = tag {
            return Ok(Verdict {
                tag,
                strict,
                precision_used: p,
            });
        }
    }
    Ok(Verdict {
        tag: VerdictTag::Undecided,
        strict,
        precision_used: cap,
    })
}

pub fn logconcave_at(s: &SequenceHandle, n: u64, strict: bool) -> Result<Verdict> {
    shape_at(s, n, Shape::Concave, strict, default_prec_cap())
}

pub fn logconvex_at(s: &SequenceHandle, n: u64, strict: bool) -> Result<Verdict> {
    shape_at(s, n, Shape::Convex, strict, default_prec_cap())
}

/// Verdicts for one power `R^r` of the sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub r: u32,
    pub shape: Shape,
    /// First and last checked index.
    pub checked: [u64; 2],
    /// One verdict per checked index.
    pub verdicts: Vec<VerdictTag>,
    /// Smallest index from which every verdict through the range holds.
    pub threshold: u64,
    pub violations: Vec<u64>,
    pub undecided: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Threshold {
    pub r: u32,
    #[serde(rename = "N")]
    pub n: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexAt {
    pub r: u32,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub sequence: String,
    pub depth: u32,
    pub strict: bool,
    pub range: [u64; 2],
    pub thresholds: Vec<Threshold>,
    pub violations: Vec<IndexAt>,
    pub undecided: Vec<IndexAt>,
    pub reports: Vec<MonotonicityReport>,
}

impl ScanReport {
    pub fn worst(&self) -> VerdictTag {
        if !self.violations.is_empty() {
            VerdictTag::Fails
        } else if !self.undecided.is_empty() {
            VerdictTag::Undecided
        } else {
            VerdictTag::Holds
        }
    }
}

/// Scans `R^r s` for `r = 0..=max_depth` over indices `lo..=hi` of `s`:
/// odd `r` must be log-concave and even `r` log-convex. Term `n` of `R^r s`
/// uses `s(n..=n+r)`, so the check at depth `r` covers `n <= hi - r - 2`.
pub fn scan_infinite_logmono(
    s: &SequenceHandle,
    max_depth: u32,
    range: (u64, u64),
    strict: bool,
    cap: u32,
) -> Result<ScanReport> {
    let (lo, hi) = range;
    if max_depth < 1 {
        return Err(domain("scan depth must be at least 1"));
    }
    let lo = lo.max(s.start_index());
    let got = (hi + 1).saturating_sub(lo);
    let needed = max_depth as u64 + 3;
    if got < needed {
        return Err(Error::InsufficientRange { needed, got });
    }
    let mut reports = Vec::new();
    for r in 0..=max_depth {
        let shape = if r % 2 == 1 { Shape::Concave } else { Shape::Convex };
        let sr = s.r_power(r);
        let last = hi - r as u64 - 2;
        let verdicts = (lo..=last)
            .into_par_iter()
            .map(|n| shape_at(&sr, n, shape, strict, cap).map(|v| v.tag))
            .collect::<Result<Vec<_>>>()?;
        let at = |tag: VerdictTag| -> Vec<u64> {
            verdicts
                .iter()
                .zip(lo..)
                .filter(|(t, _)| **t == tag)
                .map(|(_, n)| n)
                .collect()
        };
        let violations = at(VerdictTag::Fails);
        let undecided = at(VerdictTag::Undecided);
        let threshold = violations
            .iter()
            .chain(&undecided)
            .max()
            .map_or(lo, |m| m + 1);
        reports.push(MonotonicityReport {
            r,
            shape,
            checked: [lo, last],
            verdicts,
            threshold,
            violations,
            undecided,
        });
    }
    let collect = |f: fn(&MonotonicityReport) -> &Vec<u64>| -> Vec<IndexAt> {
        reports
            .iter()
            .flat_map(|m| f(m).iter().map(move |&n| IndexAt { r: m.r, n }))
            .collect()
    };
    Ok(ScanReport {
        sequence: s.label().to_string(),
        depth: max_depth,
        strict,
        range: [lo, hi],
        thresholds: reports
            .iter()
            .map(|m| Threshold {
                r: m.r,
                n: m.threshold,
            })
            .collect(),
        violations: collect(|m| &m.violations),
        undecided: collect(|m| &m.undecided),
        reports,
    })
}

/// Per-index outcome of the two parts of the conjecture on `|B_{2n}|^(1/n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SunReport {
    pub n_max: u64,
    /// `a(n) < a(n+1)` for `n = 1..n_max-1`.
    pub increasing: Vec<VerdictTag>,
    /// `a(n+1)/a(n) > a(n+2)/a(n+1)` for `n = 2..=n_max-2`.
    pub ratio_decreasing: Vec<VerdictTag>,
    pub fails: usize,
    pub undecided: usize,
}

impl SunReport {
    pub fn all_hold(&self) -> bool {
        self.fails == 0 && self.undecided == 0
    }
}

pub fn sun_conjecture_check(n_max: u64, cap: u32) -> Result<SunReport> {
    if n_max < 4 {
        return Err(domain("sun_conjecture_check needs n_max >= 4"));
    }
    // Fill the exact table once, serially, before the parallel reads.
    let _ = abs_bernoulli_even(n_max);
    let s = SequenceHandle::named(SequenceName::RootAbsBernoulli)?;
    let increasing = (1..n_max)
        .into_par_iter()
        .map(|n| shape_at(&s, n, Shape::Increasing, true, cap).map(|v| v.tag))
        .collect::<Result<Vec<_>>>()?;
    let ratio_decreasing = (2..=n_max - 2)
        .into_par_iter()
        .map(|n| shape_at(&s, n, Shape::Concave, true, cap).map(|v| v.tag))
        .collect::<Result<Vec<_>>>()?;
    let count = |t: VerdictTag| increasing.iter().chain(&ratio_decreasing).filter(|v| **v == t).count();
    Ok(SunReport {
        n_max,
        fails: count(VerdictTag::Fails),
        undecided: count(VerdictTag::Undecided),
        increasing,
        ratio_decreasing,
    })
}

/// `4 |B_{2n}|^(1/n) (4^n - 1)^(1/n) (2n)^(-1/n)`, the second route to
/// `T(n)^(1/n)`.
pub fn root_tangent_via_bernoulli(n: u64, prec: u32) -> Result<Ball> {
    if n == 0 {
        return Err(domain("index starts at 1"));
    }
    let b = nth_root(&abs_bernoulli_even(n), n, prec, false)?;
    let four_n = (BigInt::one() << (2 * n)) - 1u32;
    let f = nth_root(&BigRational::from_integer(four_n), n, prec, false)?;
    let g = nth_root(&BigRational::from_integer(BigInt::from(2 * n)), n, prec, true)?;
    Ok(b.mul(&f).mul(&g).mul_int(4))
}
