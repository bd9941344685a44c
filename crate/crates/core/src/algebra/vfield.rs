use std::fmt;

use super::{AlgebraError, Poly, Q};

/// Polynomial vector field `Σ X^i ∂/∂x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorField {
    vars: Vec<String>,
    comps: Vec<Poly>,
}

impl VectorField {
    pub fn new(vars: &[String], comps: Vec<Poly>) -> Result<Self, AlgebraError> {
        if comps.len() != vars.len() {
            return Err(AlgebraError::VariableMismatch {
                left: vars.to_vec(),
                right: comps.first().map(|p| p.vars().to_vec()).unwrap_or_default(),
            });
        }
        for c in &comps {
            if c.vars() != vars {
                return Err(AlgebraError::VariableMismatch {
                    left: vars.to_vec(),
                    right: c.vars().to_vec(),
                });
            }
        }
        Ok(VectorField {
            vars: vars.to_vec(),
            comps,
        })
    }

    pub fn zero(vars: &[String]) -> Self {
        VectorField {
            vars: vars.to_vec(),
            comps: vec![Poly::zero(vars); vars.len()],
        }
    }

    /// `c · ∂/∂x_i`.
    pub fn coordinate(vars: &[String], i: usize, c: Poly) -> Self {
        let mut f = Self::zero(vars);
        f.comps[i] = c;
        f
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// The derivation `f ↦ Σ X^i ∂f/∂x_i`.
    pub fn apply(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.vars);
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = f.partial(i);
            if !d.is_zero() {
                acc = &acc + &(c * &d);
            }
        }
        acc
    }

    /// `[X, Y]^i = X(Y^i) − Y(X^i)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField, AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        let comps = (0..self.vars.len())
            .map(|i| &self.apply(&other.comps[i]) - &other.apply(&self.comps[i]))
            .collect();
        Ok(VectorField {
            vars: self.vars.clone(),
            comps,
        })
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            vars: self.vars.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        self.add(&other.scale(&-Q::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Q) -> VectorField {
        VectorField {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiplication by a function.
    pub fn times(&self, f: &Poly) -> VectorField {
        VectorField {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|p| p * f).collect(),
        }
    }

    /// Re-expresses the field with extra trailing variables.
    pub fn extend_vars(&self, extra: &[String]) -> VectorField {
        let mut vars = self.vars.clone();
        vars.extend_from_slice(extra);
        let mut comps: Vec<Poly> = self.comps.iter().map(|p| p.extend_vars(extra)).collect();
        comps.extend(std::iter::repeat(Poly::zero(&vars)).take(extra.len()));
        VectorField { vars, comps }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .zip(&self.vars)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, v)| format!("({c}) d/d{v}"))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}
