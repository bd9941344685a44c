//! Exact arithmetic kernel: rationals, sparse multivariate polynomials,
//! truncated power series, Laurent expansions and rational functions.

mod frac;
mod laurent;
mod matrix;
mod monomial;
pub mod parse;
mod poly;
mod series;
mod vfield;

pub use frac::Frac;
pub use laurent::{FormWeight, Laurent, MeromorphicForm};
pub use matrix::{charpoly_sigmas, determinant, Matrix};
pub use monomial::Monomial;
pub(crate) use monomial::exponents_of_degree;
pub use poly::Poly;
pub use series::{Series, DEFAULT_ORDER};
pub use vfield::VectorField;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact scalar used for every coefficient in the crate.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable sets differ: {left:?} vs {right:?}")]
    VariableMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("series has nonzero constant term; composition needs g(0) = 0")]
    NonzeroConstantTerm,
    #[error("series has zero constant term; no reciprocal")]
    ZeroConstantTerm,
    #[error("composition needs a univariate outer series")]
    NotUnivariate,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
    #[error("form weight {found} where weight {expected} is required")]
    WeightMismatch { expected: u32, found: u32 },
}

/// `n/d` as an exact scalar. Panics when `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer scalar.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (optional leading sign) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Q, AlgebraError> {
    let bad = || AlgebraError::BadRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Canonical `p/q` rendering (`p` for integers).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Exact rational square root when one exists (nonnegative root).
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

pub(crate) fn q_pow(x: &Q, k: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Common surface of the function types the foliation code is generic
/// over: exact polynomials, truncated series and rational functions.
pub trait FunctionRing: Clone + std::fmt::Debug + PartialEq {
    fn nvars(&self) -> usize;
    fn constant_like(&self, c: Q) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Q) -> Self;
    fn partial(&self, var: usize) -> Self;
    fn is_zero(&self) -> bool;

    fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    /// `Σ field[i] · ∂f/∂x_i`.
    fn derive_along(&self, field: &[Self]) -> Self {
        assert_eq!(field.len(), self.nvars(), "field arity must match");
        let mut acc = self.constant_like(Q::zero());
        for (i, comp) in field.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            acc = acc.add(&comp.mul(&self.partial(i)));
        }
        acc
    }
}

/// Serde adapters writing rationals as canonical `"p/q"` strings.
pub mod qser {
    use super::{fmt_q, parse_rational, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&fmt_q(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(q) => s.serialize_some(&fmt_q(q)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| parse_rational(&t).map_err(D::Error::custom))
                .transpose()
        }
    }
}
