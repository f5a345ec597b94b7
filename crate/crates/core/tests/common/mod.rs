//! Fixtures and random general-position instances shared by the integration tests.
#![allow(dead_code)]

use num_traits::Zero;
use padic_amoeba::amoeba::{FormZero, PlanarAmoeba, ZeroSet};
use padic_amoeba::linalg::{build_ahat, integer_kernel, rank};
use padic_amoeba::rational::{frac, int};
use padic_amoeba::trop::DiscriminantMap;
use padic_amoeba::{IntMatrix, Prime, RatMatrix, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub const PRIMES: [u64; 4] = [2, 3, 5, 7];

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

/// Kernel matrix of the six-monomial example with two holes.
pub fn six_term_b() -> RatMatrix {
    RatMatrix::from_i64(&[
        &[-2, 2],
        &[35, -11],
        &[-33, 9],
        &[-12, 4],
        &[0, -4],
        &[12, 0],
    ])
}

/// Forms λ−1, λ−13, λ−25 over ℚ₂.
pub fn worked_b() -> RatMatrix {
    RatMatrix::from_i64(&[&[1, -1], &[1, -13], &[1, -25]])
}

/// Named m = 2 fixtures with their prime and support dimension `n`.
pub fn planar_fixtures() -> Vec<(&'static str, RatMatrix, Prime, usize)> {
    let mut out = vec![
        ("six-term", six_term_b(), prime(3), 3),
        ("worked-example", worked_b(), prime(2), 0),
        (
            "pair",
            RatMatrix::from_i64(&[&[1, 0], &[-1, 1], &[0, -1]]),
            prime(2),
            0,
        ),
    ];
    for (k, p) in [(2, 2), (3, 3), (3, 2), (4, 3)] {
        let f = padic_amoeba::extremal::extremal_family(k, prime(p)).unwrap();
        let name: &'static str = Box::leak(format!("extremal-k{k}-p{p}").into_boxed_str());
        out.push((name, f.b().to_rational(), prime(p), f.support_dimension()));
    }
    out
}

/// Every 2×2 minor of `b` is nonzero: distinct zeros, no vanishing form,
/// at most one constant form.
pub fn general_position(b: &RatMatrix) -> bool {
    let rows = b.rows();
    (0..rows).all(|i| {
        (i + 1..rows).all(|j| {
            let det = b.get(i, 0) * b.get(j, 1) - b.get(i, 1) * b.get(j, 0);
            !det.is_zero()
        })
    })
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub n: usize,
    pub a: IntMatrix,
    pub b: RatMatrix,
    pub prime: Prime,
}

impl Instance {
    pub fn map(&self) -> DiscriminantMap {
        DiscriminantMap::from_kernel(&self.b, self.prime).unwrap()
    }

    pub fn amoeba(&self) -> PlanarAmoeba {
        PlanarAmoeba::from_kernel(&self.b, self.prime).unwrap()
    }
}

/// Random support with `n ≤ n_max` rows and `n + m + 1` columns whose kernel
/// is in general position (checked on every 2×2 minor when `m = 2`).
pub fn random_instance<R: Rng>(rng: &mut R, n_max: usize, m: usize, entry: i64) -> Instance {
    loop {
        let n = rng.gen_range(0..=n_max);
        let cols = n + m + 1;
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..cols).map(|_| rng.gen_range(-entry..=entry)).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let a = if n == 0 {
            IntMatrix::zeros(0, cols)
        } else {
            IntMatrix::from_i64(&refs)
        };
        let Ok(ahat) = build_ahat(&a) else { continue };
        if rank(&ahat.to_rational()) != n + 1 {
            continue;
        }
        let b = integer_kernel(&ahat).unwrap().to_rational();
        if m == 2 && !general_position(&b) {
            continue;
        }
        if m != 2 && (0..b.rows()).any(|i| b.row(i).iter().all(Zero::is_zero)) {
            continue;
        }
        let p = *PRIMES.choose(rng).unwrap();
        return Instance {
            n,
            a,
            b,
            prime: prime(p),
        };
    }
}

/// A parameter value avoiding every zero: either near a random zero (to probe
/// deep branches) or a generic rational.
pub fn random_lambda<R: Rng>(rng: &mut R, zeros: &ZeroSet, p: Prime) -> Rational {
    let finite: Vec<&Rational> = zeros.finite().map(|(_, z)| z).collect();
    loop {
        let lam = if rng.gen_bool(0.6) && !finite.is_empty() {
            let z = finite[rng.gen_range(0..finite.len())];
            let e: i32 = rng.gen_range(-3..=6);
            let unit = frac(rng.gen_range(1..=40), rng.gen_range(1..=40));
            let scale = if e >= 0 {
                int(p.get().pow(e as u32) as i64)
            } else {
                frac(1, p.get().pow((-e) as u32) as i64)
            };
            let sign = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
            z + sign * scale * unit
        } else {
            frac(rng.gen_range(-500..=500), rng.gen_range(1..=60))
        };
        let hits_zero = zeros
            .entries()
            .iter()
            .any(|e| matches!(e, FormZero::Zero(z) if *z == lam));
        if !hits_zero {
            return lam;
        }
    }
}
