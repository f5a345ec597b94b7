//! Exact linear algebra: `Â`, integer kernels and Gauss-Jordan changes of variables.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RatMatrix};
use crate::rational::Rational;

/// Prepends a row of ones to the support matrix `A` (`n × (n+m+1)`).
pub fn build_ahat(a: &IntMatrix) -> Result<IntMatrix> {
    if a.cols() < a.rows() + 2 {
        return Err(Error::InvalidSupport(format!(
            "a {}x{} support leaves no room for m >= 1",
            a.rows(),
            a.cols()
        )));
    }
    let mut rows = vec![vec![BigInt::one(); a.cols()]];
    rows.extend(a.row_iter().map(<[BigInt]>::to_vec));
    IntMatrix::from_rows(rows)
}

/// Rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    let mut work = m.clone();
    row_echelon(&mut work).len()
}

/// In-place reduced row echelon form; returns the pivot columns.
fn row_echelon(m: &mut RatMatrix) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = (r..m.rows()).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        swap_rows(m, r, p);
        let inv = m.get(r, c).recip();
        for j in 0..m.cols() {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..m.rows() {
            if i == r || m.get(i, c).is_zero() {
                continue;
            }
            let factor = m.get(i, c).clone();
            for j in 0..m.cols() {
                let v = m.get(i, j) - &factor * m.get(r, j);
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn swap_rows<T: Clone>(m: &mut crate::matrix::Matrix<T>, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

/// Inverse of a square rational matrix, `None` when singular.
pub fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.rows();
    assert_eq!(n, m.cols(), "invert needs a square matrix");
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, Rational::one());
    }
    let pivots = row_echelon(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let mut inv = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, aug.get(i, n + j).clone());
        }
    }
    Some(inv)
}

/// Basis of the integer lattice `ker(M) ∩ ℤ^cols`, as the columns of a `cols × (cols − rows)` matrix.
///
/// Column operations with extended-gcd steps bring `M` to lower echelon form
/// while tracking the unimodular transform `U`; the trailing columns of `U`
/// then generate the full kernel lattice. The basis is LLL-reduced so entries
/// stay small.
pub fn integer_kernel(m: &IntMatrix) -> Result<IntMatrix> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows > cols {
        return Err(Error::DegenerateSupport(format!(
            "{rows}x{cols} matrix cannot have full row rank"
        )));
    }
    let mut work = m.clone();
    let mut u = IntMatrix::zeros(cols, cols);
    for i in 0..cols {
        u.set(i, i, BigInt::one());
    }
    for r in 0..rows {
        for c in r + 1..cols {
            if work.get(r, c).is_zero() {
                continue;
            }
            let a = work.get(r, r).clone();
            let b = work.get(r, c).clone();
            let eg = a.extended_gcd(&b);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (ag, bg) = (&a / &g, &b / &g);
            combine_columns(&mut work, r, c, &s, &t, &ag, &bg);
            combine_columns(&mut u, r, c, &s, &t, &ag, &bg);
        }
        if work.get(r, r).is_zero() {
            return Err(Error::DegenerateSupport(format!(
                "matrix is rank deficient (row {} depends on the rows above it)",
                r + 1
            )));
        }
    }
    let basis: Vec<Vec<BigInt>> = (rows..cols).map(|c| u.column(c)).collect();
    let reduced = lll_reduce(basis);
    let mut out = IntMatrix::zeros(cols, cols - rows);
    for (j, v) in reduced.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            out.set(i, j, x.clone());
        }
    }
    Ok(out)
}

/// `col_i ← s·col_i + t·col_j`, `col_j ← ag·col_j − bg·col_i` (unimodular).
fn combine_columns(
    m: &mut IntMatrix,
    i: usize,
    j: usize,
    s: &BigInt,
    t: &BigInt,
    ag: &BigInt,
    bg: &BigInt,
) {
    for r in 0..m.rows() {
        let x = m.get(r, i).clone();
        let y = m.get(r, j).clone();
        m.set(r, i, s * &x + t * &y);
        m.set(r, j, ag * &y - bg * &x);
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL reduction (δ = 3/4) of linearly independent integer vectors.
pub fn lll_reduce(basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let mut b = basis;
    let n = b.len();
    let delta = Rational::new(BigInt::from(3), BigInt::from(4));
    let to_q = |v: &[BigInt]| -> Vec<Rational> {
        v.iter()
            .map(|x| Rational::from_integer(x.clone()))
            .collect()
    };
    let gram_schmidt = |b: &[Vec<BigInt>]| {
        let mut star: Vec<Vec<Rational>> = Vec::with_capacity(b.len());
        let mut mu = vec![vec![Rational::zero(); b.len()]; b.len()];
        for i in 0..b.len() {
            let bi = to_q(&b[i]);
            let mut v = bi.clone();
            for j in 0..i {
                mu[i][j] = dot(&bi, &star[j]) / dot(&star[j], &star[j]);
                for (vk, sk) in v.iter_mut().zip(&star[j]) {
                    *vk -= &mu[i][j] * sk;
                }
            }
            star.push(v);
        }
        (star, mu)
    };
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (_, mu) = gram_schmidt(&b);
            let q = mu[k][j].round().to_integer();
            if !q.is_zero() {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &q * y;
                }
            }
        }
        let (star, mu) = gram_schmidt(&b);
        let lhs = dot(&star[k], &star[k]);
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * dot(&star[k - 1], &star[k - 1]);
        if lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    // Sign convention: first nonzero entry of each vector positive.
    for v in &mut b {
        if v.iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative())
        {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
    b
}

/// The forms `f_i(x) = β_{i,1}x_1 + ⋯ + β_{i,m−1}x_{m−1} + β_{i,m}`, one per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFormSystem {
    coeffs: RatMatrix,
}

impl AffineFormSystem {
    pub fn new(coeffs: RatMatrix) -> Result<Self> {
        if coeffs.cols() == 0 {
            return Err(Error::InvalidArgument("forms need m >= 1 columns".into()));
        }
        Ok(AffineFormSystem { coeffs })
    }

    pub fn coeffs(&self) -> &RatMatrix {
        &self.coeffs
    }

    pub fn num_forms(&self) -> usize {
        self.coeffs.rows()
    }

    /// `m`; the forms take `m − 1` variables.
    pub fn m(&self) -> usize {
        self.coeffs.cols()
    }

    pub fn eval(&self, i: usize, x: &[Rational]) -> Rational {
        let row = self.coeffs.row(i);
        let m = row.len();
        debug_assert_eq!(x.len(), m - 1);
        let mut acc = row[m - 1].clone();
        for (c, xi) in row[..m - 1].iter().zip(x) {
            acc += c * xi;
        }
        acc
    }

    /// The forms indexed by `idx` have a unique common zero.
    pub fn is_transversal(&self, idx: &[usize]) -> bool {
        idx.len() + 1 == self.m() && invert(&self.variable_minor(idx)).is_some()
    }

    fn variable_minor(&self, idx: &[usize]) -> RatMatrix {
        let k = self.m() - 1;
        let mut s = RatMatrix::zeros(idx.len(), k);
        for (r, &i) in idx.iter().enumerate() {
            for c in 0..k {
                s.set(r, c, self.coeffs.get(i, c).clone());
            }
        }
        s
    }
}

/// Substitutes variables so that form `idx[j]` becomes the coordinate `x_j`.
///
/// The new coefficient matrix is `coeffs · T` with `T = [[S⁻¹, −S⁻¹c], [0, 1]]`,
/// where `S` and `c` are the variable coefficients and constants of the chosen rows.
pub fn affine_change(forms: &AffineFormSystem, idx: &[usize]) -> Result<AffineFormSystem> {
    let m = forms.m();
    if idx.len() + 1 != m || idx.iter().any(|&i| i >= forms.num_forms()) {
        return Err(Error::NonTransversal(idx.to_vec()));
    }
    let s_inv =
        invert(&forms.variable_minor(idx)).ok_or_else(|| Error::NonTransversal(idx.to_vec()))?;
    let k = m - 1;
    let mut t = RatMatrix::zeros(m, m);
    for i in 0..k {
        for j in 0..k {
            t.set(i, j, s_inv.get(i, j).clone());
        }
        let shift: Rational = (0..k)
            .map(|j| s_inv.get(i, j) * forms.coeffs.get(idx[j], k))
            .sum();
        t.set(i, k, -shift);
    }
    t.set(k, k, Rational::one());
    let coeffs = forms.coeffs.mul(&t)?;
    Ok(AffineFormSystem { coeffs })
}
