use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{fmt_q, AlgebraError, Series, Q};

/// Univariate Laurent expansion with finite principal part, known through
/// exponent `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent {
    var: String,
    order: i64,
    coeffs: BTreeMap<i64, Q>,
}

impl Laurent {
    pub fn zero(var: &str, order: i64) -> Self {
        Laurent {
            var: var.to_string(),
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(var: &str, k: i64, c: Q, order: i64) -> Self {
        let mut l = Self::zero(var, order);
        l.add_term(k, c);
        l
    }

    pub fn from_coeffs<I>(var: &str, order: i64, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Q)>,
    {
        let mut l = Self::zero(var, order);
        for (k, c) in coeffs {
            l.add_term(k, c);
        }
        l
    }

    /// Embeds a univariate power series.
    pub fn from_series(s: &Series) -> Self {
        assert_eq!(s.nvars(), 1, "Laurent expansions are univariate");
        Self::from_coeffs(
            &s.vars()[0],
            s.order(),
            s.terms().map(|(m, c)| (m.0[0] as i64, c.clone())),
        )
    }

    fn add_term(&mut self, k: i64, c: Q) {
        if c.is_zero() || k > self.order {
            return;
        }
        let slot = self.coeffs.entry(k).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn coeff(&self, k: i64) -> Q {
        self.coeffs.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &Q)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    /// Lowest exponent present, or `order + 1` if nothing is known.
    pub fn valuation(&self) -> i64 {
        self.coeffs
            .keys()
            .next()
            .copied()
            .unwrap_or(self.order + 1)
    }

    pub fn pole_order(&self) -> u32 {
        (-self.valuation()).max(0) as u32
    }

    pub fn is_holomorphic(&self) -> bool {
        self.pole_order() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: i64) -> Laurent {
        let order = order.min(self.order);
        Laurent {
            var: self.var.clone(),
            order,
            coeffs: self
                .coeffs
                .range(..=order)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// The regular part as a power series; fails on a pole.
    pub fn to_series(&self) -> Option<Series> {
        if !self.is_holomorphic() {
            return None;
        }
        let n = self.order;
        let coeffs: Vec<Q> = (0..=n.max(-1)).map(|k| self.coeff(k)).collect();
        Some(Series::univariate(&self.var, &coeffs, n))
    }

    fn check(&self, other: &Laurent) -> Result<(), AlgebraError> {
        if self.var != other.var {
            return Err(AlgebraError::VariableMismatch {
                left: vec![self.var.clone()],
                right: vec![other.var.clone()],
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Laurent) -> Result<Laurent, AlgebraError> {
        self.check(other)?;
        let mut out = self.truncate(self.order.min(other.order));
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Laurent) -> Result<Laurent, AlgebraError> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn mul(&self, other: &Laurent) -> Result<Laurent, AlgebraError> {
        self.check(other)?;
        let order = (self.order + other.valuation()).min(other.order + self.valuation());
        let mut out = Laurent::zero(&self.var, order);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a + b, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Q) -> Laurent {
        let mut out = Laurent::zero(&self.var, self.order);
        for (k, v) in &self.coeffs {
            out.add_term(*k, v * c);
        }
        out
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            var: self.var.clone(),
            order: self.order + k,
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn derivative(&self) -> Laurent {
        let mut out = Laurent::zero(&self.var, self.order - 1);
        for (k, c) in &self.coeffs {
            if *k != 0 {
                out.add_term(k - 1, c * Q::from_integer((*k).into()));
            }
        }
        out
    }

    /// Inverse of `z^v · u` with `u(0) ≠ 0`, known through `order − 2v`.
    pub fn reciprocal(&self) -> Result<Laurent, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let v = self.valuation();
        let unit = self.shift(-v);
        let n = unit.order;
        let c0 = unit.coeff(0);
        let inv0 = Q::one() / &c0;
        let mut r: Vec<Q> = vec![inv0.clone()];
        for d in 1..=n.max(0) {
            let mut acc = Q::zero();
            for j in 1..=d {
                acc += unit.coeff(j) * &r[(d - j) as usize];
            }
            r.push(-acc * &inv0);
        }
        let out = Laurent::from_coeffs(
            &self.var,
            n,
            r.into_iter().enumerate().map(|(k, c)| (k as i64, c)),
        );
        Ok(out.shift(-v))
    }

    pub fn div(&self, other: &Laurent) -> Result<Laurent, AlgebraError> {
        self.mul(&other.reciprocal()?)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.coeffs {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono = match k {
                0 => String::new(),
                1 => self.var.clone(),
                _ => format!("{}^{}", self.var, k),
            };
            if mono.is_empty() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{}*{}", fmt_q(&abs), mono)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order + 1)
    }
}

/// 1 for one-form coefficients `α dz`, 2 for quadratic differentials `β dz²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormWeight {
    One,
    Two,
}

impl FormWeight {
    pub fn value(self) -> u32 {
        match self {
            FormWeight::One => 1,
            FormWeight::Two => 2,
        }
    }

    pub fn from_value(w: u32) -> Option<Self> {
        match w {
            1 => Some(FormWeight::One),
            2 => Some(FormWeight::Two),
            _ => None,
        }
    }
}

/// A meromorphic one-form or quadratic differential `c(z) dz^w`.
///
/// The pole order of `c` is not bounded at construction; operations that
/// need a Fuchsian pole check it themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeromorphicForm {
    pub weight: FormWeight,
    pub coeff: Laurent,
}

impl MeromorphicForm {
    pub fn new(weight: FormWeight, coeff: Laurent) -> Self {
        MeromorphicForm { weight, coeff }
    }

    /// Pole order at most the weight.
    pub fn is_fuchsian(&self) -> bool {
        self.coeff.pole_order() <= self.weight.value()
    }

    /// Coefficient of `z^{-1}` of a one-form.
    pub fn residue(&self) -> Result<Q, AlgebraError> {
        if self.weight != FormWeight::One {
            return Err(AlgebraError::WeightMismatch {
                expected: 1,
                found: self.weight.value(),
            });
        }
        Ok(self.coeff.coeff(-1))
    }

    /// Coefficient of `z^{-2}` of a quadratic differential.
    pub fn quadratic_residue(&self) -> Result<Q, AlgebraError> {
        if self.weight != FormWeight::Two {
            return Err(AlgebraError::WeightMismatch {
                expected: 2,
                found: self.weight.value(),
            });
        }
        Ok(self.coeff.coeff(-2))
    }
}

impl fmt::Display for MeromorphicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.weight {
            FormWeight::One => write!(f, "({}) d{}", self.coeff, self.coeff.var),
            FormWeight::Two => write!(f, "({}) d{}^2", self.coeff, self.coeff.var),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, qi};

    #[test]
    fn residue_of_simple_pole() {
        let a = Laurent::from_coeffs("z", 8, [(-1, qi(1)), (0, qi(2)), (1, qi(1))]);
        let form = MeromorphicForm::new(FormWeight::One, a);
        assert_eq!(form.residue().unwrap(), qi(1));
        assert!(form.quadratic_residue().is_err());
    }

    #[test]
    fn quadratic_residue_reads_double_pole() {
        let b = Laurent::from_coeffs("z", 8, [(-2, qi(3)), (-1, qi(1))]);
        let form = MeromorphicForm::new(FormWeight::Two, b);
        assert_eq!(form.quadratic_residue().unwrap(), qi(3));
        assert!(form.is_fuchsian());
    }

    #[test]
    fn holomorphic_form_has_no_residue() {
        let a = Laurent::from_coeffs("z", 8, [(0, qi(5)), (3, q(1, 7))]);
        let form = MeromorphicForm::new(FormWeight::One, a);
        assert_eq!(form.residue().unwrap(), qi(0));
    }

    #[test]
    fn reciprocal_of_pole() {
        let z2 = Laurent::from_coeffs("z", 10, [(2, qi(1)), (3, qi(1))]);
        let r = z2.reciprocal().unwrap();
        assert_eq!(r.valuation(), -2);
        let one = z2.mul(&r).unwrap();
        assert_eq!(one.coeff(0), qi(1));
        for k in 1..=one.order() {
            assert_eq!(one.coeff(k), qi(0));
        }
    }
}
