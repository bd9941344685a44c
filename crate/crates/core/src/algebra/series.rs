use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::monomial::{exponents_of_degree, Monomial};
use super::poly::{fmt_monomial, Poly};
use super::{fmt_q, AlgebraError, FunctionRing, Q};

/// Truncation order used when a caller does not pick one.
pub const DEFAULT_ORDER: i64 = 12;

/// Multivariate power series known through total degree `order`.
///
/// Every stored term has degree at most `order`; everything of higher
/// degree is unknown. A negative order means no coefficient is known.
/// Each operation derives the order of its result from the orders and
/// valuations of its inputs, so precision loss is always visible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    vars: Vec<String>,
    order: i64,
    terms: BTreeMap<Monomial, Q>,
}

impl Series {
    pub fn zero(vars: &[String], order: i64) -> Self {
        Series {
            vars: vars.to_vec(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Q, order: i64) -> Self {
        Self::from_poly(&Poly::constant(vars, c), order)
    }

    pub fn one(vars: &[String], order: i64) -> Self {
        Self::constant(vars, Q::one(), order)
    }

    pub fn var_index(vars: &[String], i: usize, order: i64) -> Self {
        Self::from_poly(&Poly::var_index(vars, i), order)
    }

    /// Univariate series in `z` from coefficients `c[0] + c[1] z + …`.
    pub fn univariate(var: &str, coeffs: &[Q], order: i64) -> Self {
        let vars = vec![var.to_string()];
        let mut s = Self::zero(&vars, order);
        for (k, c) in coeffs.iter().enumerate() {
            if (k as i64) <= order && !c.is_zero() {
                s.terms.insert(Monomial(vec![k as u32]), c.clone());
            }
        }
        s
    }

    /// Truncates a polynomial; the polynomial is taken as exact.
    pub fn from_poly(p: &Poly, order: i64) -> Self {
        let mut s = Self::zero(p.vars(), order);
        for (m, c) in p.terms() {
            if (m.degree() as i64) <= order {
                s.terms.insert(m.clone(), c.clone());
            }
        }
        s
    }

    pub fn from_terms<I>(vars: &[String], order: i64, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Q)>,
    {
        let mut s = Self::zero(vars, order);
        for (m, c) in terms {
            assert_eq!(m.len(), vars.len(), "exponent vector length");
            s.add_term(m, c);
        }
        s
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() || (m.degree() as i64) > self.order {
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

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Q {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Univariate coefficient of `z^k`.
    pub fn coeff1(&self, k: u32) -> Q {
        self.coeff(&[k])
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.nvars()])
    }

    /// Lowest degree carrying a nonzero term, or `order + 1` if none is known.
    pub fn valuation(&self) -> i64 {
        self.terms
            .keys()
            .next()
            .map(|m| m.degree() as i64)
            .unwrap_or(self.order + 1)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The known part as a polynomial.
    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(
            &self.vars,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    pub fn truncate(&self, order: i64) -> Series {
        let order = order.min(self.order);
        Series {
            vars: self.vars.clone(),
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (m.degree() as i64) <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Poly {
        Poly::from_terms(
            &self.vars,
            self.terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Agreement of all coefficients through degree `n`. Panics if either
    /// side is not known that far.
    pub fn agrees_to(&self, other: &Series, n: i64) -> bool {
        assert!(
            self.order >= n && other.order >= n,
            "comparison beyond known order"
        );
        self.truncate(n).terms == other.truncate(n).terms
    }

    /// Agreement on the common known range.
    pub fn agrees(&self, other: &Series) -> bool {
        let n = self.order.min(other.order);
        self.truncate(n).terms == other.truncate(n).terms
    }

    fn check_vars(&self, other: &Series) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.truncate(self.order.min(other.order));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.truncate(self.order.min(other.order));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series, AlgebraError> {
        self.check_vars(other)?;
        let order = (self.order + other.valuation())
            .min(other.order + self.valuation())
            .min(self.order.max(other.order));
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree() as i64;
            if da > order {
                break;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() as i64 > order {
                    break;
                }
                *acc.entry(ma.mul(mb)).or_insert_with(Q::zero) += ca * cb;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Series {
            vars: self.vars.clone(),
            order,
            terms: acc,
        })
    }

    pub fn add(&self, other: &Series) -> Series {
        self.checked_add(other).expect("series variable mismatch")
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.checked_sub(other).expect("series variable mismatch")
    }

    pub fn mul(&self, other: &Series) -> Series {
        self.checked_mul(other).expect("series variable mismatch")
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Series {
        if c.is_zero() {
            return Series::zero(&self.vars, self.order);
        }
        Series {
            vars: self.vars.clone(),
            order: self.order,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add_const(&self, c: &Q) -> Series {
        self.add(&Series::constant(&self.vars, c.clone(), self.order))
    }

    pub fn pow(&self, k: u32) -> Series {
        let mut acc = Series::one(&self.vars, self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂x_var`; the result is known through `order − 1`.
    pub fn partial(&self, var: usize) -> Series {
        let mut out = Series::zero(&self.vars, self.order - 1);
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

    /// `d/dz` of a univariate series.
    pub fn derivative(&self) -> Series {
        assert_eq!(self.nvars(), 1, "derivative needs a univariate series");
        self.partial(0)
    }

    /// `Σ Z^i ∂f/∂x_i` for polynomial components. The order of the result is
    /// `order − 1 + min_i val(Z^i)`, capped at `order`.
    pub fn directional_derive(&self, field: &[Poly]) -> Series {
        assert_eq!(field.len(), self.nvars(), "field arity must match");
        let comps: Vec<Series> = field
            .iter()
            .map(|p| Series::from_poly(p, self.order))
            .collect();
        self.derive_along(&comps)
    }

    /// Composition `f(g)` for univariate `f`; needs `g(0) = 0`.
    pub fn compose(&self, g: &Series) -> Result<Series, AlgebraError> {
        if self.nvars() != 1 {
            return Err(AlgebraError::NotUnivariate);
        }
        if !g.constant_term().is_zero() {
            return Err(AlgebraError::NonzeroConstantTerm);
        }
        let order = self.order.min(g.order);
        let g = g.truncate(order);
        let mut acc = Series::zero(&g.vars, order);
        // Horner from the top known coefficient
        let top = self.terms.keys().next_back().map(|m| m.0[0]).unwrap_or(0);
        for k in (0..=top).rev() {
            acc = acc.mul(&g).truncate(order);
            acc.order = order;
            acc.add_term(Monomial::one(g.nvars()), self.coeff1(k));
        }
        acc.order = order;
        Ok(acc)
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Series, AlgebraError> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(AlgebraError::ZeroConstantTerm);
        }
        let inv0 = Q::one() / &c0;
        let n = self.order;
        let comps: Vec<Poly> = (0..=n.max(0))
            .map(|d| self.homogeneous_component(d as u32))
            .collect();
        let mut r: Vec<Poly> = vec![Poly::constant(&self.vars, inv0.clone())];
        for d in 1..=n.max(0) as usize {
            let mut acc = Poly::zero(&self.vars);
            for j in 1..=d {
                if comps[j].is_zero() || r[d - j].is_zero() {
                    continue;
                }
                acc = &acc + &(&comps[j] * &r[d - j]);
            }
            r.push(acc.scale(&-inv0.clone()));
        }
        let mut out = Series::zero(&self.vars, n);
        for p in r {
            for (m, c) in p.terms() {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn div(&self, other: &Series) -> Result<Series, AlgebraError> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// Antiderivative with zero constant term (univariate).
    pub fn integrate(&self) -> Series {
        assert_eq!(self.nvars(), 1, "integrate needs a univariate series");
        let mut out = Series::zero(&self.vars, self.order + 1);
        for (m, c) in &self.terms {
            let k = m.0[0] + 1;
            out.add_term(Monomial(vec![k]), c / Q::from_integer(k.into()));
        }
        out
    }

    /// Substitutes polynomials for the variables and truncates at `order`.
    pub fn substitute(&self, images: &[Series]) -> Series {
        assert_eq!(images.len(), self.nvars());
        let target = images[0].vars.clone();
        let order = images
            .iter()
            .map(|s| s.order)
            .min()
            .unwrap_or(self.order)
            .min(self.order);
        let mut out = Series::zero(&target, order);
        for (m, c) in &self.terms {
            let mut t = Series::constant(&target, c.clone(), order);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&images[i]).truncate(order);
                }
            }
            out = out.add(&t.truncate(order));
        }
        out.order = order;
        out
    }

    /// Monomials of degree `d` in this series' variables, descending lex.
    pub fn monomials_of_degree(&self, d: u32) -> Vec<Monomial> {
        exponents_of_degree(self.nvars(), d)
            .into_iter()
            .map(Monomial)
            .collect()
    }
}

impl FunctionRing for Series {
    fn nvars(&self) -> usize {
        self.vars.len()
    }
    fn constant_like(&self, c: Q) -> Self {
        Series::constant(&self.vars, c, self.order)
    }
    fn add(&self, other: &Self) -> Self {
        Series::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Series::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Series::mul(self, other)
    }
    fn scale(&self, c: &Q) -> Self {
        Series::scale(self, c)
    }
    fn partial(&self, var: usize) -> Self {
        Series::partial(self, var)
    }
    fn is_zero(&self) -> bool {
        Series::is_zero(self)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms.iter() {
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
            let mono = fmt_monomial(&self.vars, m);
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
        write!(f, " + O({})", self.order + 1)
    }
}
