//! Exact integer and rational sequences: binomials, Bernoulli numbers,
//! tangent numbers, and the independent oracles used to cross-check them.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The full row `C(n, 0), ..., C(n, n)`.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * (n - k) / (k + 1);
        row.push(c.clone());
    }
    row
}

/// Memoized Bernoulli numbers `B_0..=B_max_index` (convention `B_1 = -1/2`).
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    values: Vec<BigRational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        Self {
            values: vec![BigRational::one()],
        }
    }

    pub fn max_index(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn get(&self, n: u64) -> Option<&BigRational> {
        self.values.get(n as usize)
    }

    /// Grows the table with the defining recurrence
    /// `sum_{k=0}^{n} C(n+1, k) B_k = 0`.
    pub fn extend_to(&mut self, max_index: u64) {
        while self.max_index() < max_index {
            let n = self.max_index() + 1;
            let row = binomial_row(n + 1);
            // Accumulate over the lcm of the denominators, which stays small
            // (they are squarefree by von Staudt-Clausen), and reduce once.
            let mut num = BigInt::zero();
            let mut den = BigInt::one();
            for (k, b) in self.values.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let bd = b.denom();
                if !(&den % bd).is_zero() {
                    let l = den.lcm(bd);
                    num *= &l / &den;
                    den = l;
                }
                num += &row[k] * b.numer() * (&den / bd);
            }
            let value = BigRational::new(-num, den * (n + 1));
            self.values.push(value);
        }
    }
}

fn shared_table() -> &'static RwLock<BernoulliTable> {
    static TABLE: OnceLock<RwLock<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(BernoulliTable::new()))
}

/// Exact `B_n`, memoized in a process-wide table.
///
/// Readers share the table; growth happens under the write lock, so an entry
/// is only visible once it is complete.
pub fn bernoulli(n: u64) -> BigRational {
    {
        let table = shared_table().read().expect("bernoulli table poisoned");
        if let Some(b) = table.get(n) {
            return b.clone();
        }
    }
    let mut table = shared_table().write().expect("bernoulli table poisoned");
    table.extend_to(n);
    table.get(n).cloned().expect("table extended")
}

/// Snapshot of `B_0..=B_n`.
pub fn bernoulli_table(n: u64) -> Vec<BigRational> {
    let _ = bernoulli(n);
    let table = shared_table().read().expect("bernoulli table poisoned");
    table.values()[..=n as usize].to_vec()
}

/// `|B_{2n}|`.
pub fn abs_bernoulli_even(n: u64) -> BigRational {
    bernoulli(2 * n).abs()
}

/// Tangent number `T(n) = |B_{2n}| (4^n - 1) 4^n / (2n)`, `n >= 1`.
pub fn tangent(n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::DomainViolation("tangent index starts at 1".into()));
    }
    let four_n = BigInt::one() << (2 * n);
    let factor = (&four_n - 1u32) * &four_n;
    let t = abs_bernoulli_even(n) * BigRational::new(factor, BigInt::from(2 * n));
    if t.denom().is_one() {
        Ok(t.to_integer())
    } else {
        Err(Error::NonIntegerResult(n))
    }
}

/// `T(n)` from the Seidel boustrophedon (Entringer) triangle, with no
/// Bernoulli numbers involved: `T(n)` is the zigzag number `E_{2n-1}`.
pub fn tangent_oracle(n: u64) -> BigInt {
    assert!(n >= 1, "tangent index starts at 1");
    let target = 2 * n - 1;
    let mut row: Vec<BigInt> = vec![BigInt::one()];
    for k in 1..=target as usize {
        let mut next = Vec::with_capacity(k + 1);
        next.push(BigInt::zero());
        for j in 1..=k {
            let v = &next[j - 1] + &row[k - j];
            next.push(v);
        }
        row = next;
    }
    row.pop().expect("nonempty row")
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes `p` with `(p - 1) | m`, ascending.
pub fn staudt_primes(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            for q in [d, m / d] {
                if is_prime(q + 1) {
                    out.push(q + 1);
                }
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// True iff `B_{2n} + sum_{(p-1) | 2n} 1/p` is an integer.
pub fn von_staudt_clausen_check(n: u64) -> bool {
    assert!(n >= 1);
    let mut acc = bernoulli(2 * n);
    for p in staudt_primes(2 * n) {
        acc += BigRational::new(BigInt::one(), BigInt::from(p));
    }
    acc.denom().is_one()
}

/// Harmonic number `H_j` as an exact rational.
pub fn harmonic(j: u64) -> BigRational {
    let mut acc = BigRational::zero();
    for i in 1..=j {
        acc += BigRational::new(BigInt::one(), BigInt::from(i));
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Eulerian polynomial coefficients `A(n, 0..n)`, so that
/// `sum_{m>=1} m^n q^m = q A_n(q) / (1 - q)^(n+1)` for `n >= 1`.
pub fn eulerian_row(n: u64) -> Vec<BigInt> {
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut row = vec![BigInt::one()];
    for m in 2..=n {
        let mut next = vec![BigInt::zero(); m as usize];
        for (i, slot) in next.iter_mut().enumerate() {
            let i64v = i as u64;
            let left = if i > 0 { row.get(i - 1).cloned() } else { None };
            let here = row.get(i).cloned();
            let mut v = BigInt::zero();
            if let Some(h) = here {
                v += h * (i64v + 1);
            }
            if let Some(l) = left {
                v += l * (m - i64v);
            }
            *slot = v;
        }
        row = next;
    }
    row
}
