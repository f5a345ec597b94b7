//! p-adic valuations and canonical digit expansions of rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A prime below 2⁶⁴, checked deterministically on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(Error::InvalidPrime(p.to_string()))
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let p: u64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidPrime(s.trim().to_string()))?;
        Prime::new(p)
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.0)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin with the first twelve primes as witnesses; exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n.is_multiple_of(w) {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A valuation: an integer, or `+∞` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValOrInf {
    Finite(i64),
    Infinite,
}

impl ValOrInf {
    pub fn finite(self) -> Option<i64> {
        match self {
            ValOrInf::Finite(v) => Some(v),
            ValOrInf::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == ValOrInf::Infinite
    }

    pub fn to_rational(self) -> Option<Rational> {
        self.finite().map(|v| Rational::from_integer(v.into()))
    }
}

impl PartialOrd for ValOrInf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ValOrInf {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ValOrInf::Finite(a), ValOrInf::Finite(b)) => a.cmp(b),
            (ValOrInf::Finite(_), ValOrInf::Infinite) => Ordering::Less,
            (ValOrInf::Infinite, ValOrInf::Finite(_)) => Ordering::Greater,
            (ValOrInf::Infinite, ValOrInf::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ValOrInf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValOrInf::Finite(v) => write!(f, "{v}"),
            ValOrInf::Infinite => f.write_str("inf"),
        }
    }
}

/// Splits off the largest power of `p`: returns `(k, n / p^k)` for nonzero `n`.
fn strip_prime(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

/// `v_p(q)`: exponent of `p` in the numerator minus that in the denominator.
pub fn val_p(q: &Rational, p: Prime) -> ValOrInf {
    if q.is_zero() {
        return ValOrInf::Infinite;
    }
    let pb = p.to_bigint();
    let (num, _) = strip_prime(q.numer(), &pb);
    let (den, _) = strip_prime(q.denom(), &pb);
    ValOrInf::Finite(num - den)
}

/// `v_p(a − b)`.
pub fn val_diff(a: &Rational, b: &Rational, p: Prime) -> ValOrInf {
    val_p(&(a - b), p)
}

/// Digit of `q` at index `i` of its canonical expansion `Σ d_i p^i`, `d_i ∈ {0,…,p−1}`.
pub fn digit(q: &Rational, p: Prime, i: i64) -> u64 {
    DigitStream::new(q.clone(), p).digit(i)
}

/// Lazily expanded canonical p-adic digits of a rational, memoized from the
/// leading index upward. Clone to share across threads.
#[derive(Debug, Clone)]
pub struct DigitStream {
    source: Rational,
    prime: Prime,
    start: ValOrInf,
    // remaining value is `numer / denom · p^(start + digits.len())`, with `p ∤ denom`
    numer: BigInt,
    denom: BigInt,
    denom_inv: u64,
    digits: Vec<u64>,
}

impl DigitStream {
    pub fn new(source: Rational, prime: Prime) -> Self {
        let pb = prime.to_bigint();
        let start = val_p(&source, prime);
        let (numer, denom) = if source.is_zero() {
            (BigInt::zero(), BigInt::one())
        } else {
            let (_, n) = strip_prime(source.numer(), &pb);
            let (_, d) = strip_prime(source.denom(), &pb);
            (n, d)
        };
        let d_mod = denom.mod_floor(&pb).to_u64().unwrap_or(1);
        let denom_inv = if source.is_zero() {
            0
        } else {
            pow_mod(d_mod, prime.get() - 2, prime.get())
        };
        DigitStream {
            source,
            prime,
            start,
            numer,
            denom,
            denom_inv,
            digits: Vec::new(),
        }
    }

    pub fn source(&self) -> &Rational {
        &self.source
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    /// Index of the first nonzero digit (`v_p` of the source).
    pub fn start_index(&self) -> ValOrInf {
        self.start
    }

    pub fn digit(&mut self, i: i64) -> u64 {
        let ValOrInf::Finite(start) = self.start else {
            return 0;
        };
        if i < start {
            return 0;
        }
        let offset = (i - start) as usize;
        let pb = self.prime.to_bigint();
        while self.digits.len() <= offset {
            let n_mod = self.numer.mod_floor(&pb).to_u64().expect("residue fits");
            let d = mul_mod(n_mod, self.denom_inv, self.prime.get());
            self.numer = (&self.numer - &self.denom * BigInt::from(d)) / &pb;
            self.digits.push(d);
        }
        self.digits[offset]
    }

    /// `Σ_{start ≤ i ≤ last} d_i p^i`.
    pub fn partial_sum(&mut self, last: i64) -> Rational {
        let ValOrInf::Finite(start) = self.start else {
            return Rational::zero();
        };
        let p = Rational::from_integer(self.prime.to_bigint());
        let mut acc = Rational::zero();
        for i in (start..=last).rev() {
            acc = acc * &p + Rational::from_integer(self.digit(i).into());
        }
        if last >= start {
            acc * pow_rational(&p, start)
        } else {
            acc
        }
    }
}

/// `p^e` for any integer exponent.
pub fn pow_rational(p: &Rational, e: i64) -> Rational {
    let mag = num_traits::pow(p.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        mag.recip()
    } else {
        mag
    }
}

/// Integer `p^e` for `e ≥ 0`.
pub fn prime_power(p: Prime, e: u32) -> BigInt {
    p.to_bigint().pow(e)
}
