//! Symmetric polynomials, their elementary-symmetric form, and the
//! decomposition with respect to a distinguished last variable.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Monomial, Poly, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("polynomial is not symmetric (fails under x{0} <-> x{1})")]
    NotSymmetric(usize, usize),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected degree {expected}, found {found}")]
    WrongDegree { expected: u32, found: u32 },
    #[error("expected {expected} variables, found {found}")]
    WrongArity { expected: usize, found: usize },
}

/// `["x1", …, "xk"]`.
pub fn x_vars(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

/// `["s1", …, "sk"]`, standing for the elementary symmetric functions.
pub fn sigma_vars(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("s{i}")).collect()
}

/// `e_i(x_1, …, x_k)`.
pub fn elementary(k: usize, i: usize) -> Poly {
    let vars = x_vars(k);
    if i > k {
        return Poly::zero(&vars);
    }
    let mut out = Poly::zero(&vars);
    for subset in subsets(k, i) {
        let mut e = vec![0u32; k];
        for j in subset {
            e[j] = 1;
        }
        out = &out + &Poly::monomial(&vars, e, Q::one());
    }
    out
}

fn subsets(k: usize, i: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for j in start..k {
            if k - j < left {
                break;
            }
            cur.push(j);
            rec(j + 1, k, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, i, &mut Vec::new(), &mut out);
    out
}

/// `Σ x_i^d` in `k` variables.
pub fn power_sum(k: usize, d: u32) -> Poly {
    let vars = x_vars(k);
    let mut out = Poly::zero(&vars);
    for i in 0..k {
        out = &out + &Poly::var_index(&vars, i).pow(d);
    }
    out
}

/// Partitions of `d` into at most `max_parts` parts, each at most `max_part`,
/// listed in decreasing lexicographic order.
fn partitions(d: u32, max_part: u32, max_parts: usize) -> Vec<Vec<u32>> {
    fn rec(d: u32, max_part: u32, max_parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if d == 0 {
            out.push(cur.clone());
            return;
        }
        if max_parts == 0 {
            return;
        }
        for p in (1..=max_part.min(d)).rev() {
            cur.push(p);
            rec(d - p, p, max_parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, max_part, max_parts, &mut Vec::new(), &mut out);
    out
}

fn is_symmetric_under(p: &Poly, i: usize, j: usize) -> bool {
    p.terms().all(|(m, c)| {
        let mut e = m.0.clone();
        e.swap(i, j);
        p.coeff(&e) == *c
    })
}

fn check_symmetric(p: &Poly) -> Result<(), SymError> {
    for i in 0..p.nvars().saturating_sub(1) {
        if !is_symmetric_under(p, i, i + 1) {
            return Err(SymError::NotSymmetric(i + 1, i + 2));
        }
    }
    Ok(())
}

/// Expresses a symmetric polynomial in `x1..xk` as a polynomial in the
/// elementary symmetric functions `s1..sk`, solving a linear system against
/// the monomial symmetric basis degree by degree.
pub fn to_elementary(p: &Poly) -> Result<Poly, SymError> {
    check_symmetric(p)?;
    let k = p.nvars();
    let svars = sigma_vars(k);
    let mut out = Poly::zero(&svars);
    let Some(top) = p.degree() else {
        return Ok(out);
    };
    let es: Vec<Poly> = (0..=k).map(|i| elementary(k, i)).collect();
    for d in 0..=top {
        let comp = p.homogeneous_component(d);
        if comp.is_zero() {
            continue;
        }
        if d == 0 {
            out = &out + &Poly::constant(&svars, comp.constant_term());
            continue;
        }
        // rows: partitions λ (monomial symmetric basis); columns: products e_μ
        let lambdas = partitions(d, d, k);
        let mus = partitions(d, k as u32, d as usize);
        debug_assert_eq!(lambdas.len(), mus.len());
        let size = lambdas.len();
        let lambda_exps: Vec<Vec<u32>> = lambdas
            .iter()
            .map(|l| {
                let mut e = l.clone();
                e.resize(k, 0);
                e
            })
            .collect();
        let mut matrix: Vec<Vec<Q>> = vec![vec![Q::zero(); size + 1]; size];
        for (col, mu) in mus.iter().enumerate() {
            let mut prod = Poly::one(&x_vars(k));
            for &part in mu {
                prod = &prod * &es[part as usize];
            }
            for (row, e) in lambda_exps.iter().enumerate() {
                matrix[row][col] = prod.coeff(e);
            }
        }
        for (row, e) in lambda_exps.iter().enumerate() {
            matrix[row][size] = comp.coeff(e);
        }
        let sol = solve(matrix);
        for (col, mu) in mus.iter().enumerate() {
            if sol[col].is_zero() {
                continue;
            }
            let mut exps = vec![0u32; k];
            for &part in mu {
                exps[part as usize - 1] += 1;
            }
            out = &out + &Poly::monomial(&svars, exps, sol[col].clone());
        }
    }
    Ok(out)
}

/// Solves a square nonsingular augmented system over Q.
fn solve(mut a: Vec<Vec<Q>>) -> Vec<Q> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("elementary products form a basis");
        a.swap(pivot, col);
        let p = a[col][col].clone();
        for c in col..=n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..=n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

/// Substitutes `e_i(x)` for `s_i`, recovering a polynomial in `x1..xk`.
pub fn from_elementary(elem: &Poly) -> Poly {
    let k = elem.nvars();
    let images: Vec<Poly> = (1..=k).map(|i| elementary(k, i)).collect();
    if k == 0 {
        return Poly::constant(&[], elem.constant_term());
    }
    elem.substitute(&images)
}

/// Symmetric homogeneous polynomial kept in both the monomial and the
/// elementary form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    degree: u32,
    mono: Poly,
    elem: Poly,
}

impl SymPoly {
    /// Builds from a polynomial in `x1..xk`; fails unless symmetric and
    /// homogeneous. The zero polynomial is accepted with degree 0.
    pub fn new(mono: Poly) -> Result<Self, SymError> {
        if !mono.is_homogeneous() {
            return Err(SymError::NotHomogeneous);
        }
        let degree = mono.degree().unwrap_or(0);
        Self::with_degree(mono, degree)
    }

    /// As [`SymPoly::new`] but with a declared degree, so that zero can carry one.
    pub fn with_degree(mono: Poly, degree: u32) -> Result<Self, SymError> {
        if !mono.is_homogeneous() {
            return Err(SymError::NotHomogeneous);
        }
        if let Some(found) = mono.degree() {
            if found != degree {
                return Err(SymError::WrongDegree {
                    expected: degree,
                    found,
                });
            }
        }
        let k = mono.nvars();
        let mono = Poly::from_terms(
            &x_vars(k),
            mono.terms().map(|(m, c)| (m.clone(), c.clone())),
        );
        let elem = to_elementary(&mono)?;
        Ok(SymPoly { degree, mono, elem })
    }

    /// Builds from an expression in `s1..sk`, weighting `s_i` by degree `i`.
    pub fn from_elementary_form(elem: Poly) -> Result<Self, SymError> {
        let mono = from_elementary(&elem);
        Self::new(mono)
    }

    pub fn arity(&self) -> usize {
        self.mono.nvars()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn monomial_form(&self) -> &Poly {
        &self.mono
    }

    pub fn elementary_form(&self) -> &Poly {
        &self.elem
    }

    pub fn is_zero(&self) -> bool {
        self.mono.is_zero()
    }

    /// Evaluates at the eigenvalues of a matrix given only through
    /// `σ_i = e_i(λ)`, the coefficients of `det(I + tA)`.
    pub fn eval_from_charpoly(&self, sigmas: &[Q]) -> Result<Q, SymError> {
        if sigmas.len() != self.arity() {
            return Err(SymError::WrongArity {
                expected: self.arity(),
                found: sigmas.len(),
            });
        }
        Ok(self.elem.eval(sigmas))
    }

    /// `φ̂_0, …, φ̂_{n+1}` with `φ = Σ_i x_{n+1}^{n+1−i} φ̂_i(x_1, …, x_n)`.
    pub fn hat_decompose(&self) -> Result<HatDecomposition, SymError> {
        let k = self.arity();
        if k == 0 {
            return Err(SymError::WrongArity {
                expected: 1,
                found: 0,
            });
        }
        let n = k - 1;
        if self.degree as usize != k {
            return Err(SymError::WrongDegree {
                expected: k as u32,
                found: self.degree,
            });
        }
        let small = x_vars(n);
        let mut parts: Vec<BTreeMap<Monomial, Q>> = vec![BTreeMap::new(); k + 1];
        for (m, c) in self.mono.terms() {
            let last = m.0[n] as usize;
            let i = k - last;
            parts[i].insert(Monomial(m.0[..n].to_vec()), c.clone());
        }
        let hats = parts
            .into_iter()
            .enumerate()
            .map(|(i, terms)| SymPoly::with_degree(Poly::from_terms(&small, terms), i as u32))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(HatDecomposition { n, hats })
    }

    /// `φ_odd = Σ_j x_{n+1}^{2j+1} φ̂_{n−2j}`, the part odd in `x_{n+1}`.
    pub fn odd_part(&self) -> Result<Poly, SymError> {
        self.hat_decompose()?;
        let n = self.arity() - 1;
        Ok(Poly::from_terms(
            self.mono.vars(),
            self.mono
                .terms()
                .filter(|(m, _)| m.0[n] % 2 == 1)
                .map(|(m, c)| (m.clone(), c.clone())),
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatDecomposition {
    n: usize,
    hats: Vec<SymPoly>,
}

impl HatDecomposition {
    /// The number of undistinguished variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `φ̂_i`, homogeneous of degree `i` in `x1..xn`.
    pub fn hat(&self, i: usize) -> &SymPoly {
        &self.hats[i]
    }

    pub fn hats(&self) -> &[SymPoly] {
        &self.hats
    }

    /// `Σ_i x_{n+1}^{n+1−i} φ̂_i`.
    pub fn reconstruct(&self) -> Poly {
        let k = self.n + 1;
        let vars = x_vars(k);
        let last = Poly::var_index(&vars, self.n);
        let mut out = Poly::zero(&vars);
        for (i, h) in self.hats.iter().enumerate() {
            let lifted = h.monomial_form().extend_vars(&vars[self.n..]);
            out = &out + &(&lifted * &last.pow((k - i) as u32));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::qi;

    fn p(text: &str, k: usize) -> Poly {
        parse_poly(text, &x_vars(k)).unwrap()
    }

    fn s(text: &str, k: usize) -> Poly {
        parse_poly(text, &sigma_vars(k)).unwrap()
    }

    #[test]
    fn elementary_basics() {
        assert_eq!(to_elementary(&p("x1 + x2", 2)).unwrap(), s("s1", 2));
        assert_eq!(to_elementary(&p("x1*x2", 2)).unwrap(), s("s2", 2));
        let sq = to_elementary(&p("x1^2 + x2^2", 2)).unwrap();
        assert_eq!(sq, s("s1^2 - 2*s2", 2));
        assert_eq!(from_elementary(&sq), p("x1^2 + x2^2", 2));
    }

    #[test]
    fn rejects_asymmetric() {
        assert_eq!(
            to_elementary(&p("x1^2 + x2", 2)),
            Err(SymError::NotSymmetric(1, 2))
        );
    }

    #[test]
    fn charpoly_evaluation() {
        let sigmas = [qi(5), qi(6)];
        let det = SymPoly::new(p("x1*x2", 2)).unwrap();
        assert_eq!(det.eval_from_charpoly(&sigmas).unwrap(), qi(6));
        let sq = SymPoly::new(p("x1^2 + x2^2", 2)).unwrap();
        assert_eq!(sq.eval_from_charpoly(&sigmas).unwrap(), qi(13));
        assert!(sq.eval_from_charpoly(&[qi(1)]).is_err());
    }

    #[test]
    fn hat_of_cubic_power_sum() {
        let phi = SymPoly::new(power_sum(3, 3)).unwrap();
        let h = phi.hat_decompose().unwrap();
        assert_eq!(h.hat(0).monomial_form(), &Poly::one(&x_vars(2)));
        assert_eq!(h.hat(3).monomial_form(), &p("x1^3 + x2^3", 2));
        for i in [1, 2] {
            assert!(h.hat(i).is_zero());
        }
        assert_eq!(phi.odd_part().unwrap(), p("x3^3", 3));
    }

    #[test]
    fn hat_of_top_elementary() {
        let phi = SymPoly::new(elementary(4, 4)).unwrap();
        let h = phi.hat_decompose().unwrap();
        for i in 0..=4 {
            if i == 3 {
                assert_eq!(h.hat(i).monomial_form(), &p("x1*x2*x3", 3));
            } else {
                assert!(h.hat(i).is_zero());
            }
        }
        assert_eq!(h.reconstruct(), *phi.monomial_form());
    }

    #[test]
    fn degree_guard() {
        let phi = SymPoly::new(power_sum(3, 2)).unwrap();
        assert!(matches!(
            phi.hat_decompose(),
            Err(SymError::WrongDegree { .. })
        ));
    }
}
