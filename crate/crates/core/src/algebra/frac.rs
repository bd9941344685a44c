use std::fmt;

use num_traits::One;

use super::{AlgebraError, FunctionRing, Poly, Q};

/// Quotient `num / den` of polynomials over one variable list.
///
/// No gcd is taken; equality is decided by cross multiplication. When the
/// denominator divides the numerator exactly the fraction collapses to a
/// polynomial, and the denominator is kept monic in its leading term.
#[derive(Debug, Clone)]
pub struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    pub fn new(num: Poly, den: Poly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.vars() != den.vars() {
            return Err(AlgebraError::VariableMismatch {
                left: num.vars().to_vec(),
                right: den.vars().to_vec(),
            });
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.vars());
        Frac { num: p, den }
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Frac {
                den: Poly::one(num.vars()),
                num,
            };
        }
        if let Some(q) = num.div_exact(&den) {
            let den = Poly::one(q.vars());
            return Frac { num: q, den };
        }
        let lc = den.leading_term().map(|(_, c)| c.clone()).unwrap();
        let inv = Q::one() / lc;
        Frac {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn vars(&self) -> &[String] {
        self.num.vars()
    }

    /// The polynomial this fraction equals, if any.
    pub fn as_poly(&self) -> Option<Poly> {
        self.num.div_exact(&self.den)
    }

    pub fn recip(&self) -> Result<Frac, AlgebraError> {
        Frac::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Frac) -> Result<Frac, AlgebraError> {
        Ok(FunctionRing::mul(self, &other.recip()?))
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl FunctionRing for Frac {
    fn nvars(&self) -> usize {
        self.num.nvars()
    }
    fn constant_like(&self, c: Q) -> Self {
        Frac::from_poly(Poly::constant(self.vars(), c))
    }
    fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Frac::normalized(&self.num + &other.num, self.den.clone());
        }
        Frac::normalized(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }
    fn sub(&self, other: &Self) -> Self {
        FunctionRing::add(self, &FunctionRing::neg(other))
    }
    fn mul(&self, other: &Self) -> Self {
        Frac::normalized(&self.num * &other.num, &self.den * &other.den)
    }
    fn scale(&self, c: &Q) -> Self {
        Frac::normalized(self.num.scale(c), self.den.clone())
    }
    fn partial(&self, var: usize) -> Self {
        let n = &(&self.num.partial(var) * &self.den) - &(&self.num * &self.den.partial(var));
        Frac::normalized(n, &self.den * &self.den)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl Eq for Frac {}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else if self.num.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::qi;

    #[test]
    fn inverse_round_trip() {
        let v = vec!["u".to_string()];
        let u = Poly::var_index(&v, 0);
        let f = Frac::new(Poly::one(&v), u.clone()).unwrap();
        let g = Frac::from_poly(u);
        let one = FunctionRing::mul(&f, &g);
        assert_eq!(one.as_poly(), Some(Poly::one(&v)));
    }

    #[test]
    fn quotient_rule() {
        let v = vec!["u".to_string()];
        let u = Poly::var_index(&v, 0);
        let f = Frac::new(Poly::one(&v), u.clone()).unwrap();
        let d = f.partial(0);
        let expect = Frac::new(Poly::constant(&v, qi(-1)), u.pow(2)).unwrap();
        assert_eq!(d, expect);
    }
}
