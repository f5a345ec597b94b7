//! The parametric valuation map `F`, its tropicalization, and the witness
//! procedure that finds an index set `I` whose tropical map `φ_{F_I}`
//! approximates a given value `F(λ)`.
//!
//! Coordinate `ℓ` of `F` at `λ ∈ ℚ^{m−1}` is `Σ_i γ_{i,ℓ} · v_p(f_i(λ))`.
//! The tropical map replaces each `v_p(f_i)` by the min-plus expression
//! `min(v(β_{i,1}) + r_1, …, v(β_{i,m−1}) + r_{m−1}, v(β_{i,m}))`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{affine_change, AffineFormSystem};
use crate::matrix::RatMatrix;
use crate::padic::{val_p, Prime, ValOrInf};
use crate::rational::{fract, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantMap {
    forms: AffineFormSystem,
    gamma: RatMatrix,
    prime: Prime,
}

impl DiscriminantMap {
    pub fn new(forms: AffineFormSystem, gamma: RatMatrix, prime: Prime) -> Result<Self> {
        if gamma.rows() != forms.num_forms() || gamma.cols() != forms.m() {
            return Err(Error::InvalidArgument(format!(
                "gamma is {}x{}, forms need {}x{}",
                gamma.rows(),
                gamma.cols(),
                forms.num_forms(),
                forms.m()
            )));
        }
        Ok(DiscriminantMap {
            forms,
            gamma,
            prime,
        })
    }

    /// The genuine discriminant map of a kernel matrix `B`: forms and multipliers are both `B`.
    pub fn from_kernel(b: &RatMatrix, prime: Prime) -> Result<Self> {
        DiscriminantMap::new(AffineFormSystem::new(b.clone())?, b.clone(), prime)
    }

    pub fn forms(&self) -> &AffineFormSystem {
        &self.forms
    }

    pub fn gamma(&self) -> &RatMatrix {
        &self.gamma
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn m(&self) -> usize {
        self.forms.m()
    }

    /// `F_I`: same multipliers, forms after the change of variables making `f_{I[j]} = x_j`.
    pub fn transformed(&self, idx: &[usize]) -> Result<Self> {
        Ok(DiscriminantMap {
            forms: affine_change(&self.forms, idx)?,
            gamma: self.gamma.clone(),
            prime: self.prime,
        })
    }

    /// `b = max_ℓ Σ_i |γ_{i,ℓ}|`, the Lipschitz constant of `F` in the sup norm
    /// with respect to the individual form valuations.
    pub fn approximation_constant(&self) -> Rational {
        (0..self.gamma.cols())
            .map(|l| {
                (0..self.gamma.rows())
                    .map(|i| self.gamma.get(i, l).abs())
                    .sum()
            })
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Exact `F(λ)`.
    pub fn eval_exact(&self, lambda: &[Rational]) -> Result<Vec<Rational>> {
        if lambda.len() + 1 != self.m() {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameters, got {}",
                self.m() - 1,
                lambda.len()
            )));
        }
        let vals = (0..self.forms.num_forms())
            .map(|i| {
                val_p(&self.forms.eval(i, lambda), self.prime)
                    .to_rational()
                    .ok_or(Error::UndefinedPoint { form: i })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(combine(&self.gamma, &vals))
    }

    pub fn tropicalize(&self) -> TropicalParametricMap {
        let coeffs = self.forms.coeffs();
        let val_table = coeffs
            .row_iter()
            .map(|row| row.iter().map(|c| val_p(c, self.prime)).collect())
            .collect();
        TropicalParametricMap {
            gamma: self.gamma.clone(),
            val_table,
        }
    }
}

/// `Σ_i γ_{i,ℓ} · vals[i]` for each column `ℓ`.
fn combine(gamma: &RatMatrix, vals: &[Rational]) -> Vec<Rational> {
    (0..gamma.cols())
        .map(|l| {
            vals.iter()
                .enumerate()
                .map(|(i, v)| gamma.get(i, l) * v)
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalParametricMap {
    gamma: RatMatrix,
    val_table: Vec<Vec<ValOrInf>>,
}

impl TropicalParametricMap {
    pub fn gamma(&self) -> &RatMatrix {
        &self.gamma
    }

    pub fn val_table(&self) -> &[Vec<ValOrInf>] {
        &self.val_table
    }

    /// Min-plus value of form `i` at `r`.
    pub fn form_value(&self, i: usize, r: &[Rational]) -> Result<Rational> {
        let row = &self.val_table[i];
        let (consts, vars) = row.split_last().expect("m >= 1");
        let terms = vars
            .iter()
            .zip(r)
            .filter_map(|(v, ri)| v.to_rational().map(|v| v + ri))
            .chain(consts.to_rational());
        terms.min().ok_or(Error::UndefinedTropicalForm { row: i })
    }

    pub fn eval(&self, r: &[Rational]) -> Result<Vec<Rational>> {
        if r.len() + 1 != self.gamma.cols() {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameters, got {}",
                self.gamma.cols() - 1,
                r.len()
            )));
        }
        let vals = (0..self.val_table.len())
            .map(|i| self.form_value(i, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(combine(&self.gamma, &vals))
    }
}

/// All sorted `(m−1)`-subsets of form indices (0-based) whose forms have a unique common zero.
pub fn enumerate_index_sets(forms: &AffineFormSystem) -> Vec<Vec<usize>> {
    let k = forms.m() - 1;
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    subsets(forms.num_forms(), k, 0, &mut current, &mut |s| {
        if forms.is_transversal(s) {
            out.push(s.to_vec());
        }
    });
    out
}

fn subsets(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in from..n {
        if n - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(n, k, i + 1, cur, f);
        cur.pop();
    }
}

/// An index set `I` and tropical parameter `ℓ` with `φ_{F_I}(ℓ)` close to `F(λ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    /// Sorted, 0-based.
    pub index_set: Vec<usize>,
    /// Parameters in the coordinates of `F_I`; non-integral with pairwise non-integral differences.
    pub ell: Vec<Rational>,
    /// `b` in the guarantee `|φ_{F_I}(ℓ) − F(λ)|_∞ ≤ b·ε`.
    pub constant: Rational,
}

/// Chooses, variable by variable, the form whose zero `λ` is closest to
/// (largest `v(f_i(λ)) − v(β_{i,k})`), pins that variable to a monomial
/// `β·ω^ℓ` with `ℓ` just below the critical level, and makes the form a
/// coordinate by Gauss-Jordan substitution.
///
/// Valuations at the partially symbolic point are exact: the fixed
/// variables carry pairwise distinct non-integral fractional parts, so no
/// cancellation can occur between them or against the rational remainder.
pub fn witness_index_set(
    map: &DiscriminantMap,
    lambda: &[Rational],
    eps: &Rational,
) -> Result<Witness> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    // well-definedness of F(λ)
    map.eval_exact(lambda)?;

    let p = map.prime();
    let m = map.m();
    let nvars = m - 1;
    let step_eps = eps / Rational::from_integer((nvars.max(1) as i64).into());
    let mut coeffs = map.forms().coeffs().clone();
    let mut chosen: Vec<usize> = Vec::with_capacity(nvars);
    let mut ells: Vec<Rational> = Vec::with_capacity(nvars);

    let val = |q: &Rational| val_p(q, p).to_rational();

    for k in 0..nvars {
        let current_val = |coeffs: &RatMatrix, i: usize| -> Result<Rational> {
            let row = coeffs.row(i);
            let mut rest = row[m - 1].clone();
            for (j, lam) in lambda.iter().enumerate().skip(k) {
                rest += &row[j] * lam;
            }
            let symbolic = row[..k]
                .iter()
                .zip(&ells)
                .filter_map(|(c, l)| val(c).map(|v| v + l));
            symbolic
                .chain(val(&rest))
                .min()
                .ok_or(Error::UndefinedPoint { form: i })
        };

        let mut candidates: Vec<(usize, Rational)> = Vec::new();
        for i in 0..coeffs.rows() {
            let Some(vc) = val(coeffs.get(i, k)) else {
                continue;
            };
            candidates.push((i, current_val(&coeffs, i)? - vc));
        }
        let Some(top) = candidates.iter().map(|(_, n)| n.clone()).max() else {
            return Err(Error::Underdetermined { variable: k });
        };
        let pivot = candidates
            .iter()
            .find(|(_, n)| *n == top)
            .expect("max exists")
            .0;
        let second = candidates
            .iter()
            .map(|(_, n)| n)
            .filter(|n| **n < top)
            .max();

        let mut gap = step_eps.clone();
        if let Some(s) = second {
            let spread = &top - s;
            if spread < gap {
                gap = spread;
            }
        }
        let pivot_coeff = coeffs.get(pivot, k).clone();
        let shift = val(&pivot_coeff).expect("pivot coefficient is nonzero");
        let forbidden: Vec<Rational> = ells.iter().map(fract).collect();
        let mut divisor = 2i64;
        let ell = loop {
            let candidate = &top - &gap / Rational::from_integer(divisor.into());
            let f = fract(&candidate);
            if !f.is_zero() && !forbidden.contains(&f) {
                break candidate + &shift;
            }
            divisor += 1;
        };

        // x_k ← (y_k − Σ_{j≠k} c_{pivot,j} x_j − c_{pivot,m}) / c_{pivot,k}
        let pivot_row = coeffs.row(pivot).to_vec();
        for i in 0..coeffs.rows() {
            let cik = coeffs.get(i, k).clone();
            if cik.is_zero() {
                continue;
            }
            let ratio = &cik / &pivot_coeff;
            for (j, pj) in pivot_row.iter().enumerate() {
                let v = if j == k {
                    ratio.clone()
                } else {
                    coeffs.get(i, j) - &ratio * pj
                };
                coeffs.set(i, j, v);
            }
        }
        chosen.push(pivot);
        ells.push(ell);
    }

    let mut pairs: Vec<(usize, Rational)> = chosen.into_iter().zip(ells).collect();
    pairs.sort_by_key(|(i, _)| *i);
    let (index_set, ell) = pairs.into_iter().unzip();
    Ok(Witness {
        index_set,
        ell,
        constant: map.approximation_constant(),
    })
}

/// `|φ_{F_I}(ℓ) − F(λ)|_∞` for a witness.
pub fn witness_error(map: &DiscriminantMap, lambda: &[Rational], w: &Witness) -> Result<Rational> {
    let exact = map.eval_exact(lambda)?;
    let approx = map.transformed(&w.index_set)?.tropicalize().eval(&w.ell)?;
    Ok(exact
        .iter()
        .zip(&approx)
        .map(|(a, b)| (a - b).abs())
        .max()
        .unwrap_or_else(Rational::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    /// Forms λ−1, λ−13, λ−25 over ℚ₂ with multipliers taken from the same rows.
    fn worked_map() -> DiscriminantMap {
        let b = RatMatrix::from_i64(&[&[1, -1], &[1, -13], &[1, -25]]);
        DiscriminantMap::from_kernel(&b, p(2)).unwrap()
    }

    #[test]
    fn exact_evaluation() {
        let star = worked_map().transformed(&[0]).unwrap();
        assert_eq!(star.eval_exact(&[int(8)]).unwrap(), vec![int(9), int(-129)]);
        // v₂(8, −4, −16) = (3, 2, 4)
        assert_eq!(
            worked_map().eval_exact(&[int(9)]).unwrap(),
            vec![int(9), int(-129)]
        );
        assert_eq!(
            worked_map().eval_exact(&[int(13)]),
            Err(Error::UndefinedPoint { form: 1 })
        );
        let zero_gamma =
            DiscriminantMap::new(worked_map().forms().clone(), RatMatrix::zeros(3, 2), p(2))
                .unwrap();
        assert_eq!(
            zero_gamma.eval_exact(&[frac(1, 7)]).unwrap(),
            vec![int(0), int(0)]
        );
    }

    #[test]
    fn tropicalization_tables() {
        use ValOrInf::{Finite as F, Infinite as Inf};
        let first = worked_map().transformed(&[0]).unwrap().tropicalize();
        assert_eq!(
            first.val_table(),
            &[vec![F(0), Inf], vec![F(0), F(2)], vec![F(0), F(3)]]
        );
        let third = worked_map().transformed(&[2]).unwrap().tropicalize();
        assert_eq!(
            third.val_table(),
            &[vec![F(0), F(3)], vec![F(0), F(2)], vec![F(0), Inf]]
        );
        let monomials = DiscriminantMap::new(
            AffineFormSystem::new(RatMatrix::from_i64(&[&[1, 0], &[1, 0]])).unwrap(),
            RatMatrix::from_i64(&[&[1, 1], &[-1, -1]]),
            p(3),
        )
        .unwrap()
        .tropicalize();
        assert_eq!(monomials.val_table(), &[vec![F(0), Inf], vec![F(0), Inf]]);
    }

    #[test]
    fn tropical_evaluation() {
        let third = worked_map().transformed(&[2]).unwrap().tropicalize();
        assert_eq!(third.eval(&[int(4)]).unwrap(), vec![int(9), int(-129)]);
        let first = worked_map().transformed(&[0]).unwrap().tropicalize();
        // 3 + min(3,2) + min(3,3) = 8;  −3 − 13·2 − 25·3 = −104
        assert_eq!(first.eval(&[int(3)]).unwrap(), vec![int(8), int(-104)]);
        assert_eq!(first.eval(&[int(1)]).unwrap(), vec![int(3), int(-39)]);
    }

    #[test]
    fn all_infinite_row_is_rejected() {
        let zero_form = DiscriminantMap::new(
            AffineFormSystem::new(RatMatrix::from_i64(&[&[0, 0], &[1, 1]])).unwrap(),
            RatMatrix::from_i64(&[&[1, 0], &[0, 1]]),
            p(5),
        )
        .unwrap();
        assert_eq!(
            zero_form.tropicalize().eval(&[int(0)]),
            Err(Error::UndefinedTropicalForm { row: 0 })
        );
    }

    #[test]
    fn index_sets() {
        let six_term = RatMatrix::from_i64(&[
            &[-2, 2],
            &[35, -11],
            &[-33, 9],
            &[-12, 4],
            &[0, -4],
            &[12, 0],
        ]);
        let forms = AffineFormSystem::new(six_term).unwrap();
        assert_eq!(
            enumerate_index_sets(&forms),
            vec![vec![0], vec![1], vec![2], vec![3], vec![5]]
        );
        let forms = AffineFormSystem::new(RatMatrix::from_i64(&[
            &[1, 2, 0],
            &[2, 4, 1],
            &[0, 1, 1],
            &[1, 0, 1],
        ]))
        .unwrap();
        let sets = enumerate_index_sets(&forms);
        assert!(!sets.contains(&vec![0, 1]));
        assert_eq!(sets.len(), 5);
    }

    #[test]
    fn witness_on_worked_example() {
        let map = worked_map();
        let w = witness_index_set(&map, &[int(9)], &frac(1, 2)).unwrap();
        assert_eq!(w.index_set, vec![2]);
        assert!(w.ell[0] < int(4) && w.ell[0] > frac(7, 2));
        assert_eq!(w.constant, int(39));
        let err = witness_error(&map, &[int(9)], &w).unwrap();
        assert!(err <= &w.constant * frac(1, 2));
    }

    #[test]
    fn witness_reports_underdetermined() {
        let map = DiscriminantMap::new(
            AffineFormSystem::new(RatMatrix::from_i64(&[&[0, 3], &[0, 5]])).unwrap(),
            RatMatrix::from_i64(&[&[1, 0], &[0, 1]]),
            p(5),
        )
        .unwrap();
        assert_eq!(
            witness_index_set(&map, &[int(1)], &int(1)),
            Err(Error::Underdetermined { variable: 0 })
        );
    }
}
