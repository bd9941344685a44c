use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::{fmt_q, AlgebraError, FunctionRing, Q};

/// Sparse multivariate polynomial over the rationals.
///
/// Terms live in a `BTreeMap` keyed by graded-lex monomials with no zero
/// coefficients stored, so two equal polynomials over the same variable
/// list are structurally identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(vars: &[String]) -> Self {
        Poly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Q::one())
    }

    pub fn constant(vars: &[String], c: Q) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn var(vars: &[String], name: &str) -> Result<Self, AlgebraError> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_index(vars, i))
    }

    pub fn var_index(vars: &[String], i: usize) -> Self {
        let mut p = Self::zero(vars);
        p.terms.insert(Monomial::var(vars.len(), i), Q::one());
        p
    }

    pub fn monomial(vars: &[String], exps: Vec<u32>, c: Q) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(exps), c);
        }
        p
    }

    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Q)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent vector length");
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars()])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Lowest total degree present; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.valuation(), self.degree()) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    fn check_vars(&self, other: &Poly) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, AlgebraError> {
        self.check_vars(other)?;
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Poly {
            vars: self.vars.clone(),
            terms: acc,
        })
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial(&self, var: usize) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c * Q::from_integer(e.into()));
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars(), "point dimension");
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; all images share one
    /// variable list, which becomes the result's.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let target: Vec<String> = match images.first() {
            Some(p) => p.vars.clone(),
            None => Vec::new(),
        };
        // cache powers of each image
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::one(&target), p.clone()])
            .collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Re-expresses the polynomial over `vars`, matching variables by name.
    pub fn with_vars(&self, vars: &[String]) -> Result<Poly, AlgebraError> {
        let mut index = Vec::with_capacity(self.nvars());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => index.push(Some(j)),
                None => {
                    if self.degree_in(i).unwrap_or(0) > 0 {
                        return Err(AlgebraError::UnknownVariable(v.clone()));
                    }
                    index.push(None);
                }
            }
        }
        let mut out = Poly::zero(vars);
        for (m, c) in &self.terms {
            let mut exps = vec![0; vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if let Some(j) = index[i] {
                    exps[j] += e;
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// `p(x + point)`: recentres the polynomial at `point`.
    pub fn shift(&self, point: &[Q]) -> Poly {
        let images: Vec<Poly> = (0..self.nvars())
            .map(|i| {
                &Poly::var_index(&self.vars, i) + &Poly::constant(&self.vars, point[i].clone())
            })
            .collect();
        self.substitute(&images)
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() || self.vars != d.vars {
            return None;
        }
        let (lm, lc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = c / &lc;
            let step = Poly::monomial(&self.vars, qm.0.clone(), qc.clone());
            rem = &rem - &(&step * d);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Appends fresh variables (with exponent zero) after the existing ones.
    pub fn extend_vars(&self, extra: &[String]) -> Poly {
        let mut vars = self.vars.clone();
        vars.extend_from_slice(extra);
        let pad = extra.len();
        Poly {
            vars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.extend(std::iter::repeat(0).take(pad));
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    /// Panics on mismatched variable lists; use [`Poly::checked_add`] on
    /// untrusted input.
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial variable mismatch")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial variable mismatch")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial variable mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Q::one())
    }
}

impl FunctionRing for Poly {
    fn nvars(&self) -> usize {
        self.vars.len()
    }
    fn constant_like(&self, c: Q) -> Self {
        Poly::constant(&self.vars, c)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Q) -> Self {
        Poly::scale(self, c)
    }
    fn partial(&self, var: usize) -> Self {
        Poly::partial(self, var)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

pub(crate) fn fmt_monomial(vars: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (v, &e) in vars.iter().zip(&m.0) {
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    parts.join("*")
}

/// Canonical text form: descending graded-lex order, accepted back by the
/// expression parser.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = fmt_monomial(&self.vars, m);
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), mono)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn cancellation_leaves_canonical_form() {
        let v = xy();
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        let s = &(&x + &y) + &(&x - &y);
        assert_eq!(s, x.scale(&qi(2)));
        assert_eq!(s.num_terms(), 1);
    }

    #[test]
    fn difference_of_squares() {
        let v = vec!["x".to_string()];
        let x = Poly::var(&v, "x").unwrap();
        let one = Poly::one(&v);
        let p = &(&x + &one) * &(&x - &one);
        assert_eq!(p, &x.pow(2) - &one);
    }

    #[test]
    fn rational_scaling_reduces() {
        let v = vec!["x".to_string()];
        let x = Poly::var(&v, "x").unwrap();
        let p = &x.scale(&q(2, 3)) * &Poly::constant(&v, q(3, 2));
        assert_eq!(p, x);
    }

    #[test]
    fn mismatched_variables_are_rejected() {
        let a = Poly::one(&xy());
        let b = Poly::one(&["x".to_string()]);
        assert!(matches!(
            a.checked_add(&b),
            Err(AlgebraError::VariableMismatch { .. })
        ));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn exact_division() {
        let v = xy();
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        let f = &(&x * &y) - &y.pow(3);
        let d = &x - &y.pow(2);
        assert_eq!(f.div_exact(&d), Some(y.clone()));
        assert_eq!((&f + &Poly::one(&v)).div_exact(&d), None);
    }

    #[test]
    fn display_is_descending() {
        let v = xy();
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        let p = &x.pow(2) - &y.scale(&q(2, 3));
        assert_eq!(p.to_string(), "x^2 - 2/3*y");
        assert_eq!((-&Poly::one(&v)).to_string(), "-1");
    }

    #[test]
    fn shift_and_eval_agree() {
        let v = xy();
        let x = Poly::var(&v, "x").unwrap();
        let y = Poly::var(&v, "y").unwrap();
        let p = &(&x * &y) + &x.pow(3);
        let s = p.shift(&[qi(2), q(-1, 3)]);
        assert_eq!(s.constant_term(), p.eval(&[qi(2), q(-1, 3)]));
    }
}
