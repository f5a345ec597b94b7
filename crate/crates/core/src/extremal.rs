//! A family of supports whose amoebae have at least `k² + k + 1` complement components.

use num_bigint::BigInt;
use num_traits::One;

use crate::amoeba::PlanarAmoeba;
use crate::arrangement::{count_complement, ComplementCount};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::padic::{prime_power, Prime};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalFamily {
    pub k: usize,
    pub prime: Prime,
    /// `2 × (2k+2)`; its transpose is the kernel matrix `B`.
    pub d: IntMatrix,
    /// `2k × (2k+2)`, rows orthogonal to the rows of `D`.
    pub n: IntMatrix,
    /// `N` without its last row.
    pub a: IntMatrix,
}

impl ExtremalFamily {
    pub fn b(&self) -> IntMatrix {
        self.d.transpose()
    }

    /// `n` of the support: number of forms minus three.
    pub fn support_dimension(&self) -> usize {
        2 * self.k - 1
    }

    /// Guaranteed number of complement components once `p` is large enough.
    pub fn lower_bound(&self) -> usize {
        self.k * self.k + self.k + 1
    }
}

/// Builds `D`, `N` and `A`, checking `N·Dᵀ = 0` exactly. Requires `k ≥ 2`.
pub fn extremal_family(k: usize, p: Prime) -> Result<ExtremalFamily> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "extremal family needs k >= 2, got {k}"
        )));
    }
    let cols = 2 * k + 2;
    let kk = BigInt::from(k);
    let mut d = IntMatrix::zeros(2, cols);
    d.set(0, 0, -kk.clone());
    d.set(0, 1, -kk.clone());
    for j in 2..cols {
        d.set(0, j, BigInt::one());
    }
    for i in 0..=k {
        let pi = prime_power(p, i as u32);
        d.set(1, 2 * i, -pi.clone());
        d.set(1, 2 * i + 1, pi);
    }
    let mut n = IntMatrix::zeros(2 * k, cols);
    for i in 1..=k {
        let kp = &kk * prime_power(p, i as u32);
        let one = BigInt::one();
        let (odd, even) = (2 * i - 2, 2 * i - 1);
        n.set(odd, 0, -&kp + &one);
        n.set(odd, 1, &kp + &one);
        n.set(odd, 2 * i, BigInt::from(2 * k));
        n.set(even, 0, &kp + &one);
        n.set(even, 1, -&kp + &one);
        n.set(even, 2 * i + 1, BigInt::from(2 * k));
    }
    let prod = n.mul(&d.transpose())?;
    if !prod.is_zero() {
        return Err(Error::Invariant("extremal N is not orthogonal to D".into()));
    }
    let a = n.without_row(2 * k - 1);
    Ok(ExtremalFamily {
        k,
        prime: p,
        d,
        n,
        a,
    })
}

/// Primes tried by [`select_prime`].
pub const PRIME_SEARCH_LIMIT: u64 = 100;

/// An extremal instance pushed through the planar pipeline.
#[derive(Debug, Clone)]
pub struct ExtremalRun {
    pub family: ExtremalFamily,
    pub amoeba: PlanarAmoeba,
    pub count: ComplementCount,
}

pub fn run_family(k: usize, p: Prime) -> Result<ExtremalRun> {
    let family = extremal_family(k, p)?;
    let amoeba = PlanarAmoeba::from_kernel(&family.b().to_rational(), p)?;
    let count = count_complement(&amoeba.graph, family.support_dimension())?;
    Ok(ExtremalRun {
        family,
        amoeba,
        count,
    })
}

/// The smallest prime `p ≤ 100` for which the family reaches `k² + k + 1`
/// complement components.
pub fn select_prime(k: usize) -> Result<ExtremalRun> {
    for p in 2..=PRIME_SEARCH_LIMIT {
        let Ok(prime) = Prime::new(p) else { continue };
        let run = run_family(k, prime)?;
        if run.count.total >= run.family.lower_bound() {
            return Ok(run);
        }
    }
    Err(Error::DegenerateFamily(format!(
        "no prime up to {PRIME_SEARCH_LIMIT} gives k^2+k+1 components for k = {k}"
    )))
}
