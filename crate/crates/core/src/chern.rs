//! Finitely presented graded cohomology rings, total Chern classes,
//! projectivized rank-two bundles, and the characteristic numbers on the
//! right-hand sides of the index formulas.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::parse::{parse_poly, ParseError};
use crate::algebra::{fmt_q, parse_rational, qi, AlgebraError, Monomial, Poly, Q};
use crate::symfun::{SymError, SymPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("generator `{0}` has odd or zero real degree {1}")]
    BadDegree(String, u32),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relation `{0}`: {1}")]
    BadRelation(String, String),
    #[error("rewriting did not terminate at monomial {0}")]
    NonTerminating(String),
    #[error("multiplication is not associative on ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("integral: {0}")]
    BadIntegral(String),
    #[error("degree-0 term of a total Chern class must be 1")]
    NotTotalClass,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("ring is not a projective bundle")]
    NotBundle,
    #[error("expected a class of complex degree {expected}, found {found}")]
    DegreeMismatch { expected: u32, found: String },
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Multiplicative structure of a projectivized bundle `P(V) → M`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BundleData {
    base: Arc<RingPresentation>,
    /// Basis index in the bundle ring of `π*b · ζ^a` for base index `b`.
    lift: Vec<[usize; 2]>,
}

/// A graded commutative ring with rational coefficients, stored by an
/// explicit monomial basis, a multiplication table on the basis, and a
/// linear functional on the top degree.
///
/// Degrees are complex degrees: a generator of real degree 2 has degree 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    label: String,
    gens: Vec<(String, u32)>,
    dim: u32,
    basis: Vec<Vec<u32>>,
    basis_deg: Vec<u32>,
    table: Vec<Vec<Vec<(usize, Q)>>>,
    integral: Vec<Q>,
    bundle: Option<BundleData>,
}

/// Relation `lhs = rhs` used as a rewrite rule on monomials.
#[derive(Debug, Clone)]
pub struct Relation {
    pub lhs: Vec<u32>,
    pub rhs: Poly,
}

impl RingPresentation {
    /// Builds a ring from generators (complex degrees), rewrite relations and
    /// top-degree integrals. Monomials above `dim` vanish. The basis is the
    /// set of monomials not divisible by any relation head.
    pub fn from_relations(
        label: &str,
        gens: Vec<(String, u32)>,
        dim: u32,
        relations: Vec<Relation>,
        integral: Vec<(Vec<u32>, Q)>,
    ) -> Result<Self, ChernError> {
        for (i, (name, d)) in gens.iter().enumerate() {
            if *d == 0 {
                return Err(ChernError::BadDegree(name.clone(), 2 * d));
            }
            if gens[..i].iter().any(|(n, _)| n == name) {
                return Err(ChernError::DuplicateGenerator(name.clone()));
            }
        }
        let names: Vec<String> = gens.iter().map(|(n, _)| n.clone()).collect();
        let weights: Vec<u32> = gens.iter().map(|(_, d)| *d).collect();
        let wdeg = |e: &[u32]| -> u32 { e.iter().zip(&weights).map(|(a, w)| a * w).sum() };
        for r in &relations {
            let d = wdeg(&r.lhs);
            for (m, _) in r.rhs.terms() {
                if wdeg(&m.0) != d {
                    return Err(ChernError::BadRelation(
                        fmt_exps(&names, &r.lhs),
                        "right side is not of the same degree".into(),
                    ));
                }
                if m.0 == r.lhs {
                    return Err(ChernError::BadRelation(
                        fmt_exps(&names, &r.lhs),
                        "right side contains the head".into(),
                    ));
                }
            }
        }
        let mut basis: Vec<Vec<u32>> = Vec::new();
        for d in 0..=dim {
            for e in weighted_exponents(&weights, d) {
                if !relations.iter().any(|r| divides(&r.lhs, &e)) {
                    basis.push(e);
                }
            }
        }
        let index: HashMap<Vec<u32>, usize> =
            basis.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let mut reducer = Reducer {
            relations: &relations,
            weights: &weights,
            dim,
            memo: HashMap::new(),
            names: &names,
        };
        let nb = basis.len();
        let mut table = vec![vec![Vec::new(); nb]; nb];
        for i in 0..nb {
            for j in i..nb {
                let prod: Vec<u32> = basis[i].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
                let red = reducer.reduce(&prod, 0)?;
                let entry: Vec<(usize, Q)> = red
                    .into_iter()
                    .map(|(e, c)| (index[&e], c))
                    .collect();
                table[i][j] = entry.clone();
                table[j][i] = entry;
            }
        }
        let mut ints = vec![Q::zero(); nb];
        if integral.is_empty() {
            return Err(ChernError::BadIntegral("no top-degree value declared".into()));
        }
        for (e, v) in integral {
            let text = fmt_exps(&names, &e);
            let Some(&i) = index.get(&e) else {
                return Err(ChernError::BadIntegral(format!("{text} is not a basis monomial")));
            };
            if wdeg(&e) != dim {
                return Err(ChernError::BadIntegral(format!("{text} is not of top degree")));
            }
            if v.is_zero() {
                return Err(ChernError::BadIntegral(format!("{text} declared with value 0")));
            }
            ints[i] = v;
        }
        let basis_deg = basis.iter().map(|e| wdeg(e)).collect();
        let ring = RingPresentation {
            label: label.to_string(),
            gens,
            dim,
            basis,
            basis_deg,
            table,
            integral: ints,
            bundle: None,
        };
        ring.check_associative()?;
        Ok(ring)
    }

    fn check_associative(&self) -> Result<(), ChernError> {
        let nb = self.basis.len();
        for a in 0..nb {
            for b in a..nb {
                for c in b..nb {
                    if self.basis_deg[a] + self.basis_deg[b] + self.basis_deg[c] > self.dim {
                        continue;
                    }
                    let ab = self.mul_vec(&self.table[a][b], &[(c, Q::one())]);
                    let bc = self.mul_vec(&[(a, Q::one())], &self.table[b][c]);
                    let ac = self.mul_vec(&self.table[a][c], &[(b, Q::one())]);
                    if ab != bc || ab != ac {
                        return Err(ChernError::NotAssociative(
                            self.basis_name(a),
                            self.basis_name(b),
                            self.basis_name(c),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn mul_vec(&self, x: &[(usize, Q)], y: &[(usize, Q)]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.basis.len()];
        for (i, a) in x {
            for (j, b) in y {
                for (k, c) in &self.table[*i][*j] {
                    out[*k] += a * b * c;
                }
            }
        }
        out
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Complex dimension: the top degree.
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn generators(&self) -> &[(String, u32)] {
        &self.gens
    }

    pub fn generator_names(&self) -> Vec<String> {
        self.gens.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_name(&self, i: usize) -> String {
        fmt_exps(&self.generator_names(), &self.basis[i])
    }

    pub fn basis_degree(&self, i: usize) -> u32 {
        self.basis_deg[i]
    }

    pub fn is_bundle(&self) -> bool {
        self.bundle.is_some()
    }

    /// The base ring when this is a projective bundle.
    pub fn base(&self) -> Option<&Arc<RingPresentation>> {
        self.bundle.as_ref().map(|b| &b.base)
    }
}

struct Reducer<'a> {
    relations: &'a [Relation],
    weights: &'a [u32],
    dim: u32,
    memo: HashMap<Vec<u32>, BTreeMap<Vec<u32>, Q>>,
    names: &'a [String],
}

impl Reducer<'_> {
    fn reduce(&mut self, e: &[u32], depth: usize) -> Result<BTreeMap<Vec<u32>, Q>, ChernError> {
        if depth > 256 {
            return Err(ChernError::NonTerminating(fmt_exps(self.names, e)));
        }
        let deg: u32 = e.iter().zip(self.weights).map(|(a, w)| a * w).sum();
        if deg > self.dim {
            return Ok(BTreeMap::new());
        }
        if let Some(hit) = self.memo.get(e) {
            return Ok(hit.clone());
        }
        let rule = self.relations.iter().find(|r| divides(&r.lhs, e)).cloned();
        let out = match rule {
            None => BTreeMap::from([(e.to_vec(), Q::one())]),
            Some(r) => {
                let rest: Vec<u32> = e.iter().zip(&r.lhs).map(|(a, b)| a - b).collect();
                let mut acc: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
                for (m, c) in r.rhs.terms() {
                    let prod: Vec<u32> = m.0.iter().zip(&rest).map(|(a, b)| a + b).collect();
                    for (k, v) in self.reduce(&prod, depth + 1)? {
                        *acc.entry(k).or_insert_with(Q::zero) += c * v;
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                acc
            }
        };
        self.memo.insert(e.to_vec(), out.clone());
        Ok(out)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn weighted_exponents(weights: &[u32], d: u32) -> Vec<Vec<u32>> {
    fn rec(weights: &[u32], d: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if weights.is_empty() {
            if d == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let w = weights[0];
        for a in (0..=d / w).rev() {
            cur.push(a);
            rec(&weights[1..], d - a * w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, d, &mut Vec::new(), &mut out);
    out
}

fn fmt_exps(names: &[String], e: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(e)
        .filter(|(_, &a)| a > 0)
        .map(|(n, &a)| if a == 1 { n.clone() } else { format!("{n}^{a}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// The model manifolds with built-in cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BuiltinRing {
    /// `Z[h]/(h^{n+1})`, `∫h^n = 1`.
    ProjectiveSpace { n: u32 },
    /// `Z[h, v]/(h², v²)`, `∫hv = 1`; `v` is dual to a vertical fibre, `h`
    /// to a horizontal section.
    CurveTimesP1 { genus: u32 },
    /// `Z[p]/(p²)`, `∫p = 1`.
    Curve { genus: u32 },
}

impl BuiltinRing {
    pub fn ring(self) -> Arc<RingPresentation> {
        let r = match self {
            BuiltinRing::ProjectiveSpace { n } => RingPresentation::from_relations(
                &format!("P^{n}"),
                vec![("h".into(), 1)],
                n,
                vec![],
                vec![(vec![n], Q::one())],
            ),
            BuiltinRing::CurveTimesP1 { genus } => {
                let gens = vec![("h".to_string(), 1), ("v".to_string(), 1)];
                let names = vec!["h".to_string(), "v".to_string()];
                RingPresentation::from_relations(
                    &format!("C_{genus} x P^1"),
                    gens,
                    2,
                    vec![
                        Relation {
                            lhs: vec![2, 0],
                            rhs: Poly::zero(&names),
                        },
                        Relation {
                            lhs: vec![0, 2],
                            rhs: Poly::zero(&names),
                        },
                    ],
                    vec![(vec![1, 1], Q::one())],
                )
            }
            BuiltinRing::Curve { genus } => RingPresentation::from_relations(
                &format!("C_{genus}"),
                vec![("p".into(), 1)],
                1,
                vec![],
                vec![(vec![1], Q::one())],
            ),
        };
        Arc::new(r.expect("built-in presentations are consistent"))
    }

    /// Total Chern class of the tangent bundle.
    pub fn tangent_class(self, ring: &Arc<RingPresentation>) -> RingElement {
        match self {
            BuiltinRing::ProjectiveSpace { n } => {
                let h = RingElement::generator(ring, "h").unwrap();
                RingElement::one(ring).add(&h).unwrap().pow(n + 1)
            }
            BuiltinRing::CurveTimesP1 { genus } => {
                let h = RingElement::generator(ring, "h").unwrap();
                let v = RingElement::generator(ring, "v").unwrap();
                let chi = qi(2 - 2 * genus as i64);
                let a = RingElement::one(ring).add(&h.scale(&qi(2))).unwrap();
                let b = RingElement::one(ring).add(&v.scale(&chi)).unwrap();
                a.mul(&b).unwrap()
            }
            BuiltinRing::Curve { genus } => {
                let p = RingElement::generator(ring, "p").unwrap();
                RingElement::one(ring)
                    .add(&p.scale(&qi(2 - 2 * genus as i64)))
                    .unwrap()
            }
        }
    }

    /// The orientation convention every sign in a report derives from.
    pub fn convention(self) -> &'static str {
        match self {
            BuiltinRing::ProjectiveSpace { .. } => "integral of h^n over P^n is 1",
            BuiltinRing::CurveTimesP1 { .. } => {
                "integral of h*v over C x P^1 is 1 (h horizontal, v vertical)"
            }
            BuiltinRing::Curve { .. } => "integral of the point class p is 1",
        }
    }
}

/// Element of a ring presentation, by coordinates on its basis.
#[derive(Debug, Clone)]
pub struct RingElement {
    ring: Arc<RingPresentation>,
    coeffs: Vec<Q>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.coeffs == other.coeffs
    }
}

impl RingElement {
    pub fn zero(ring: &Arc<RingPresentation>) -> Self {
        RingElement {
            ring: ring.clone(),
            coeffs: vec![Q::zero(); ring.basis.len()],
        }
    }

    pub fn constant(ring: &Arc<RingPresentation>, c: Q) -> Self {
        let mut e = Self::zero(ring);
        e.coeffs[0] = c;
        e
    }

    pub fn one(ring: &Arc<RingPresentation>) -> Self {
        Self::constant(ring, Q::one())
    }

    pub fn generator(ring: &Arc<RingPresentation>, name: &str) -> Result<Self, ChernError> {
        let vars = ring.generator_names();
        let p = Poly::var(&vars, name)?;
        Self::from_poly(ring, &p)
    }

    /// Evaluates a polynomial in the generator names inside the ring.
    pub fn from_poly(ring: &Arc<RingPresentation>, p: &Poly) -> Result<Self, ChernError> {
        let vars = ring.generator_names();
        let p = p.with_vars(&vars)?;
        let gens: Vec<RingElement> = (0..vars.len())
            .map(|i| {
                let mut e = vec![0u32; vars.len()];
                e[i] = 1;
                Self::basis_monomial(ring, &e)
            })
            .collect();
        let mut acc = Self::zero(ring);
        for (m, c) in p.terms() {
            let mut t = Self::constant(ring, c.clone());
            for (i, &a) in m.0.iter().enumerate() {
                for _ in 0..a {
                    t = t.mul(&gens[i])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }

    /// Parses an expression in the generator names.
    pub fn parse(ring: &Arc<RingPresentation>, text: &str) -> Result<Self, ChernError> {
        let p = parse_poly(text, &ring.generator_names())?;
        Self::from_poly(ring, &p)
    }

    /// The basis element with the given exponents, or the reduction of
    /// a generator when the exponent vector is a single generator.
    fn basis_monomial(ring: &Arc<RingPresentation>, e: &[u32]) -> Self {
        let mut out = Self::zero(ring);
        if let Some(i) = ring.basis.iter().position(|b| b == e) {
            out.coeffs[i] = Q::one();
        }
        out
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    fn same_ring(&self, other: &Self) -> Result<(), ChernError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(ChernError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ChernError> {
        self.same_ring(other)?;
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, ChernError> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        RingElement {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, ChernError> {
        self.same_ring(other)?;
        let x: Vec<(usize, Q)> = sparse(&self.coeffs);
        let y: Vec<(usize, Q)> = sparse(&other.coeffs);
        Ok(RingElement {
            ring: self.ring.clone(),
            coeffs: self.ring.mul_vec(&x, &y),
        })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..k {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Homogeneous component of complex degree `d`.
    pub fn component(&self, d: u32) -> Self {
        RingElement {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if self.ring.basis_deg[i] == d {
                        c.clone()
                    } else {
                        Q::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || self.ring.basis_deg[i] == d)
    }

    fn expect_degree(&self, d: u32) -> Result<(), ChernError> {
        if self.is_homogeneous_of(d) {
            Ok(())
        } else {
            Err(ChernError::DegreeMismatch {
                expected: d,
                found: self.to_string(),
            })
        }
    }

    /// Degree-zero coefficient.
    pub fn rank_part(&self) -> Q {
        self.coeffs[0].clone()
    }

    /// Pairing of the top-degree component with the fundamental class.
    pub fn integral(&self) -> Q {
        self.coeffs
            .iter()
            .zip(&self.ring.integral)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Inverse of a total class `1 + x`, `x` nilpotent.
    pub fn inverse_total(&self) -> Result<Self, ChernError> {
        if !self.rank_part().is_one() {
            return Err(ChernError::NotTotalClass);
        }
        let x = self.sub(&Self::one(&self.ring))?;
        let neg = x.scale(&-Q::one());
        let mut acc = Self::one(&self.ring);
        let mut term = Self::one(&self.ring);
        for _ in 0..self.ring.dim {
            term = term.mul(&neg)?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// The polynomial in generator names representing this element.
    pub fn to_poly(&self) -> Poly {
        let vars = self.ring.generator_names();
        Poly::from_terms(
            &vars,
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (Monomial(self.ring.basis[i].clone()), c.clone())),
        )
    }

    /// Coefficient on a basis monomial given by exponents.
    pub fn coeff_of(&self, e: &[u32]) -> Q {
        self.ring
            .basis
            .iter()
            .position(|b| b == e)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(Q::zero)
    }
}

fn sparse(v: &[Q]) -> Vec<(usize, Q)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// `c(A − B) = c(A) · c(B)⁻¹`.
pub fn chern_difference(ca: &RingElement, cb: &RingElement) -> Result<RingElement, ChernError> {
    if !ca.rank_part().is_one() {
        return Err(ChernError::NotTotalClass);
    }
    ca.mul(&cb.inverse_total()?)
}

/// A virtual bundle recorded by its total Chern class.
#[derive(Debug, Clone, PartialEq)]
pub struct VirtualBundle {
    total: RingElement,
}

impl VirtualBundle {
    pub fn new(total: RingElement) -> Result<Self, ChernError> {
        if !total.rank_part().is_one() {
            return Err(ChernError::NotTotalClass);
        }
        Ok(VirtualBundle { total })
    }

    /// The line bundle with first Chern class `c1`.
    pub fn line(c1: &RingElement) -> Result<Self, ChernError> {
        c1.expect_degree(1)?;
        Self::new(RingElement::one(c1.ring()).add(c1)?)
    }

    pub fn total(&self) -> &RingElement {
        &self.total
    }

    pub fn chern(&self, k: u32) -> RingElement {
        self.total.component(k)
    }

    pub fn difference(&self, other: &VirtualBundle) -> Result<VirtualBundle, ChernError> {
        Ok(VirtualBundle {
            total: chern_difference(&self.total, &other.total)?,
        })
    }

    pub fn sum(&self, other: &VirtualBundle) -> Result<VirtualBundle, ChernError> {
        Ok(VirtualBundle {
            total: self.total.mul(&other.total)?,
        })
    }

    /// Evaluates a symmetric polynomial in the Chern roots, through its
    /// elementary form with `s_i ↦ c_i`.
    pub fn eval_symmetric(&self, phi: &SymPoly) -> Result<RingElement, ChernError> {
        let ring = self.total.ring();
        let elem = phi.elementary_form();
        let cs: Vec<RingElement> = (1..=elem.nvars() as u32).map(|k| self.chern(k)).collect();
        let mut acc = RingElement::zero(ring);
        for (m, c) in elem.terms() {
            let mut t = RingElement::constant(ring, c.clone());
            for (i, &a) in m.0.iter().enumerate() {
                for _ in 0..a {
                    t = t.mul(&cs[i])?;
                }
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

/// `P(V)` for a rank-two bundle `V` with Chern classes `c1`, `c2`: adjoins
/// `zeta` (degree 1) subject to `ζ² + c1 ζ + c2 = 0`, with fundamental class
/// normalized by `∫ ζ·π*β = ∫ β`.
pub fn proj_bundle(
    c1: &RingElement,
    c2: &RingElement,
) -> Result<Arc<RingPresentation>, ChernError> {
    c1.same_ring(c2)?;
    c1.expect_degree(1)?;
    c2.expect_degree(2)?;
    let base = c1.ring().clone();
    let nb = base.basis.len();
    let mut gens = base.gens.clone();
    let zname = if gens.iter().any(|(n, _)| n == "zeta") {
        "zeta1"
    } else {
        "zeta"
    };
    gens.push((zname.to_string(), 1));
    let mut basis = Vec::with_capacity(2 * nb);
    let mut basis_deg = Vec::with_capacity(2 * nb);
    let mut lift = Vec::with_capacity(nb);
    for a in 0..2u32 {
        for b in 0..nb {
            let mut e = base.basis[b].clone();
            e.push(a);
            basis.push(e);
            basis_deg.push(base.basis_deg[b] + a);
        }
    }
    for b in 0..nb {
        lift.push([b, nb + b]);
    }
    let neg_c1 = sparse(&c1.scale(&-Q::one()).coeffs);
    let neg_c2 = sparse(&c2.scale(&-Q::one()).coeffs);
    let total = 2 * nb;
    let mut table = vec![vec![Vec::new(); total]; total];
    for i in 0..total {
        for j in 0..total {
            let (bi, ai) = (i % nb, i / nb);
            let (bj, aj) = (j % nb, j / nb);
            let p = base.table[bi][bj].clone();
            let mut out = vec![Q::zero(); total];
            match ai + aj {
                0 => {
                    for (k, c) in p {
                        out[k] += c;
                    }
                }
                1 => {
                    for (k, c) in p {
                        out[nb + k] += c;
                    }
                }
                _ => {
                    // ζ² = −c1 ζ − c2
                    let pz = base.mul_vec(&p, &neg_c1);
                    let p0 = base.mul_vec(&p, &neg_c2);
                    for k in 0..nb {
                        out[nb + k] += &pz[k];
                        out[k] += &p0[k];
                    }
                }
            }
            table[i][j] = sparse(&out);
        }
    }
    let mut integral = vec![Q::zero(); total];
    for b in 0..nb {
        integral[nb + b] = base.integral[b].clone();
    }
    let ring = RingPresentation {
        label: format!("P(V) over {}", base.label),
        gens,
        dim: base.dim + 1,
        basis,
        basis_deg,
        table,
        integral,
        bundle: Some(BundleData { base, lift }),
    };
    ring.check_associative()?;
    Ok(Arc::new(ring))
}

/// `π*`: pulls a base class back to the bundle ring.
pub fn pullback(
    bundle: &Arc<RingPresentation>,
    x: &RingElement,
) -> Result<RingElement, ChernError> {
    let data = bundle.bundle.as_ref().ok_or(ChernError::NotBundle)?;
    if !(Arc::ptr_eq(&data.base, x.ring()) || *data.base == **x.ring()) {
        return Err(ChernError::RingMismatch);
    }
    let mut out = RingElement::zero(bundle);
    for (b, c) in x.coeffs.iter().enumerate() {
        out.coeffs[data.lift[b][0]] = c.clone();
    }
    Ok(out)
}

/// `π^!`, integration along the fibres: `α·ζ ↦ α`, `α ↦ 0` for pullbacks `α`.
pub fn transfer(x: &RingElement) -> Result<RingElement, ChernError> {
    let data = x.ring().bundle.as_ref().ok_or(ChernError::NotBundle)?;
    let mut out = RingElement::zero(&data.base);
    for (b, l) in data.lift.iter().enumerate() {
        out.coeffs[b] = x.coeffs[l[1]].clone();
    }
    Ok(out)
}

/// The fibre class `ζ` of a bundle ring.
pub fn zeta(bundle: &Arc<RingPresentation>) -> Result<RingElement, ChernError> {
    let data = bundle.bundle.as_ref().ok_or(ChernError::NotBundle)?;
    let mut out = RingElement::zero(bundle);
    out.coeffs[data.lift[0][1]] = Q::one();
    Ok(out)
}

/// `∫ c1(T_F)^n`.
pub fn rhs_affine(c1_tf: &RingElement) -> Result<Q, ChernError> {
    c1_tf.expect_degree(1)?;
    Ok(c1_tf.pow(c1_tf.ring().dim).integral())
}

/// `∫ φ(c(TM − T_F))` for `φ` symmetric of degree `n` in `n` variables.
pub fn rhs_baum_bott(
    c_tm: &RingElement,
    c1_tf: &RingElement,
    phi: &SymPoly,
) -> Result<Q, ChernError> {
    let n = c_tm.ring().dim;
    check_phi(phi, n as usize, n)?;
    let normal = VirtualBundle::new(c_tm.clone())?.difference(&VirtualBundle::line(c1_tf)?)?;
    Ok(normal.eval_symmetric(phi)?.integral())
}

/// `Σ_j ∫ c1(T_F)^{2j} · φ̂_{n−2j}(c(TM − T_F))` for `φ` symmetric of
/// degree `n+1` in `n+1` variables.
pub fn rhs_projective(
    c_tm: &RingElement,
    c1_tf: &RingElement,
    phi: &SymPoly,
) -> Result<Q, ChernError> {
    let n = c_tm.ring().dim;
    check_phi(phi, n as usize + 1, n + 1)?;
    c1_tf.expect_degree(1)?;
    let normal = VirtualBundle::new(c_tm.clone())?.difference(&VirtualBundle::line(c1_tf)?)?;
    let hats = phi.hat_decompose()?;
    let mut total = Q::zero();
    let mut j = 0u32;
    while 2 * j <= n {
        let hat = hats.hat((n - 2 * j) as usize);
        if !hat.is_zero() {
            let val = normal.eval_symmetric(hat)?;
            total += c1_tf.pow(2 * j).mul(&val)?.integral();
        }
        j += 1;
    }
    Ok(total)
}

fn check_phi(phi: &SymPoly, arity: usize, degree: u32) -> Result<(), ChernError> {
    if phi.arity() != arity {
        return Err(SymError::WrongArity {
            expected: arity,
            found: phi.arity(),
        }
        .into());
    }
    if !phi.is_zero() && phi.degree() != degree {
        return Err(SymError::WrongDegree {
            expected: degree,
            found: phi.degree(),
        }
        .into());
    }
    Ok(())
}

/// Classes attached to a foliation on `C × P¹` with vertical degree `n_v`
/// and horizontal degree `n_h`, as `(h, v)` coefficient pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductSurfaceClasses {
    pub genus: u32,
    pub n_v: i64,
    pub n_h: i64,
    pub c1_k_s: HvPair,
    pub c1_n_f: HvPair,
    pub c1_k_f: HvPair,
    pub c1_k_f2_k_s_dual: HvPair,
    #[serde(with = "crate::algebra::qser")]
    pub c1_t_f_squared: Q,
}

/// A class `a·h + b·v` on `C × P¹`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HvPair {
    #[serde(with = "crate::algebra::qser")]
    pub h: Q,
    #[serde(with = "crate::algebra::qser")]
    pub v: Q,
}

/// Computes `c1(K_S)`, `c1(N_F)`, `c1(K_F) = c1(K_S) + c1(N_F)` and
/// `c1(K_F² ⊗ K_S*)` in the ring of `C_g × P¹`. The normal class comes from
/// counting tangencies with generic horizontal and vertical curves:
/// `n_h − N·h = 2g − 2` and `n_v − N·v = −2`.
pub fn product_surface(genus: u32, n_v: i64, n_h: i64) -> ProductSurfaceClasses {
    let ring = BuiltinRing::CurveTimesP1 { genus }.ring();
    let h = RingElement::generator(&ring, "h").unwrap();
    let v = RingElement::generator(&ring, "v").unwrap();
    let g = genus as i64;
    let k_s = v.scale(&qi(2 * g - 2)).sub(&h.scale(&qi(2))).unwrap();
    // N·h is the v-coefficient and N·v the h-coefficient since ∫hv = 1
    let n_f = h
        .scale(&qi(n_v + 2))
        .add(&v.scale(&qi(n_h - (2 * g - 2))))
        .unwrap();
    let k_f = k_s.add(&n_f).unwrap();
    let target = k_f.scale(&qi(2)).sub(&k_s).unwrap();
    let pair = |x: &RingElement| HvPair {
        h: x.coeff_of(&[1, 0]),
        v: x.coeff_of(&[0, 1]),
    };
    let c1_t_f = k_f.scale(&-Q::one());
    ProductSurfaceClasses {
        genus,
        n_v,
        n_h,
        c1_k_s: pair(&k_s),
        c1_n_f: pair(&n_f),
        c1_k_f: pair(&k_f),
        c1_k_f2_k_s_dual: pair(&target),
        c1_t_f_squared: c1_t_f.pow(2).integral(),
    }
}

/// Characteristic numbers of a compact surface carrying a regular foliation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureReport {
    pub c1_squared: String,
    pub c2: String,
    pub c1_t_f_squared: String,
    /// `(c1² − 2c2)/3`.
    pub signature: String,
    /// Whether the declared `c1²(T_F)` equals `c1² − 2c2`, as it must for a
    /// regular foliation.
    pub regular_consistent: bool,
    /// A foliated projective structure forces `c1²(T_F) = 0`.
    pub projective_structure_possible: bool,
    pub verdict: String,
}

/// Checks declared surface data against the vanishing of `c1²(T_F)` that a
/// foliated projective structure on a regular foliation imposes. When
/// `c1_t_f_squared` is absent it is taken to be `c1² − 2c2`.
pub fn signature_harness(c1_squared: &Q, c2: &Q, c1_t_f_squared: Option<&Q>) -> SignatureReport {
    let regular = c1_squared - c2 * qi(2);
    let tf = c1_t_f_squared.cloned().unwrap_or_else(|| regular.clone());
    let tau = &regular / qi(3);
    let consistent = tf == regular;
    let possible = tf.is_zero();
    let verdict = if possible {
        if tau.is_zero() {
            "compatible: c1^2(T_F) = 0 and the signature vanishes".to_string()
        } else {
            "inconsistent data: c1^2(T_F) = 0 but the signature is nonzero".to_string()
        }
    } else {
        format!(
            "incompatible with any foliated projective structure: c1^2(T_F) = {} != 0 (signature {})",
            fmt_q(&tf),
            fmt_q(&tau)
        )
    };
    SignatureReport {
        c1_squared: fmt_q(c1_squared),
        c2: fmt_q(c2),
        c1_t_f_squared: fmt_q(&tf),
        signature: fmt_q(&tau),
        regular_consistent: consistent,
        projective_structure_possible: possible,
        verdict,
    }
}

/// JSON ring descriptor: generators with real degrees, relations written
/// `monomial=expr`, and top-degree integrals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDescriptor {
    pub generators: Vec<GeneratorDescriptor>,
    #[serde(default)]
    pub relations: Vec<String>,
    pub integral: BTreeMap<String, String>,
    /// Complex dimension; defaults to the largest degree of an integral monomial.
    #[serde(default)]
    pub dim: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDescriptor {
    pub name: String,
    /// Real degree; must be positive and even.
    pub degree: u32,
}

impl RingDescriptor {
    pub fn build(&self) -> Result<Arc<RingPresentation>, ChernError> {
        let mut gens = Vec::new();
        for g in &self.generators {
            if g.degree == 0 || g.degree % 2 == 1 {
                return Err(ChernError::BadDegree(g.name.clone(), g.degree));
            }
            gens.push((g.name.clone(), g.degree / 2));
        }
        let names: Vec<String> = gens.iter().map(|(n, _)| n.clone()).collect();
        let weights: Vec<u32> = gens.iter().map(|(_, d)| *d).collect();
        let single = |text: &str| -> Result<Vec<u32>, ChernError> {
            let p = parse_poly(text, &names)?;
            match p.terms().collect::<Vec<_>>().as_slice() {
                [(m, c)] if c.is_one() => Ok(m.0.clone()),
                _ => Err(ChernError::BadRelation(
                    text.to_string(),
                    "left side must be a monic monomial".into(),
                )),
            }
        };
        let mut relations = Vec::new();
        for r in &self.relations {
            let (l, rhs) = r.split_once('=').ok_or_else(|| {
                ChernError::BadRelation(r.clone(), "expected `monomial=expr`".into())
            })?;
            relations.push(Relation {
                lhs: single(l)?,
                rhs: parse_poly(rhs, &names)?,
            });
        }
        let mut integral = Vec::new();
        for (m, v) in &self.integral {
            integral.push((single(m)?, parse_rational(v)?));
        }
        let dim = match self.dim {
            Some(d) => d,
            None => integral
                .iter()
                .map(|(e, _)| e.iter().zip(&weights).map(|(a, w)| a * w).sum::<u32>())
                .max()
                .unwrap_or(0),
        };
        Ok(Arc::new(RingPresentation::from_relations(
            "custom", gens, dim, relations, integral,
        )?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::{elementary, power_sum};

    fn p2() -> Arc<RingPresentation> {
        BuiltinRing::ProjectiveSpace { n: 2 }.ring()
    }

    #[test]
    fn projective_plane_presentation() {
        let r = p2();
        assert_eq!(r.basis_len(), 3);
        let h = RingElement::generator(&r, "h").unwrap();
        assert!(h.pow(3).is_zero());
        assert_eq!(h.pow(2).integral(), qi(1));
    }

    #[test]
    fn tangent_class_of_plane() {
        let r = p2();
        let c = BuiltinRing::ProjectiveSpace { n: 2 }.tangent_class(&r);
        assert_eq!(c, RingElement::parse(&r, "1 + 3*h + 3*h^2").unwrap());
        let same = chern_difference(&c, &c).unwrap();
        assert_eq!(same, RingElement::one(&r));
    }

    #[test]
    fn normal_class_count() {
        let r = p2();
        let c = BuiltinRing::ProjectiveSpace { n: 2 }.tangent_class(&r);
        for d in 0..5i64 {
            let tf = RingElement::parse(&r, &format!("1 + {}*h", 1 - d)).unwrap();
            let diff = chern_difference(&c, &tf).unwrap();
            assert_eq!(diff.coeff_of(&[2]), qi(d * d + d + 1));
        }
    }

    #[test]
    fn product_ring() {
        let r = BuiltinRing::CurveTimesP1 { genus: 2 }.ring();
        let hv = RingElement::parse(&r, "h*v").unwrap();
        assert_eq!(hv.integral(), qi(1));
        assert!(RingElement::parse(&r, "h^2").unwrap().is_zero());
    }

    #[test]
    fn elliptic_curve_affine_rhs_vanishes() {
        let kind = BuiltinRing::Curve { genus: 1 };
        let r = kind.ring();
        let c = kind.tangent_class(&r);
        assert_eq!(rhs_affine(&c.component(1)).unwrap(), qi(0));
    }

    #[test]
    fn trivial_bundle_has_square_zero_zeta() {
        let r = p2();
        let z = RingElement::zero(&r);
        let b = proj_bundle(&z, &z).unwrap();
        let zt = zeta(&b).unwrap();
        assert!(zt.pow(2).is_zero());
        assert_eq!(transfer(&zt).unwrap(), RingElement::one(&r));
    }

    #[test]
    fn affine_rhs_on_plane() {
        let r = p2();
        let c1 = RingElement::parse(&r, "-h").unwrap();
        assert_eq!(rhs_affine(&c1).unwrap(), qi(1));
    }

    #[test]
    fn projective_rhs_even_case_is_affine_rhs() {
        let r = p2();
        let c = BuiltinRing::ProjectiveSpace { n: 2 }.tangent_class(&r);
        let c1 = RingElement::parse(&r, "-2*h").unwrap();
        let phi = SymPoly::new(power_sum(3, 3)).unwrap();
        assert_eq!(rhs_projective(&c, &c1, &phi).unwrap(), qi(4));
        let zero = SymPoly::with_degree(Poly::zero(&crate::symfun::x_vars(3)), 3).unwrap();
        assert_eq!(rhs_projective(&c, &c1, &zero).unwrap(), qi(0));
    }

    #[test]
    fn baum_bott_rhs_wrong_degree() {
        let r = p2();
        let c = BuiltinRing::ProjectiveSpace { n: 2 }.tangent_class(&r);
        let c1 = RingElement::parse(&r, "-h").unwrap();
        let phi = SymPoly::new(elementary(2, 1)).unwrap();
        assert!(rhs_baum_bott(&c, &c1, &phi).is_err());
        let phi = SymPoly::new(elementary(2, 2)).unwrap();
        assert_eq!(rhs_baum_bott(&c, &c1, &phi).unwrap(), qi(7));
    }

    #[test]
    fn descriptor_round_trip() {
        let d: RingDescriptor = serde_json::from_str(
            r#"{"generators":[{"name":"h","degree":2}],
                "relations":["h^3=0"],
                "integral":{"h^2":"1"}}"#,
        )
        .unwrap();
        let r = d.build().unwrap();
        assert_eq!(r.dim(), 2);
        assert_eq!(r.basis_len(), 3);
    }

    #[test]
    fn descriptor_rejects_odd_degree_and_bad_integral() {
        let d: RingDescriptor = serde_json::from_str(
            r#"{"generators":[{"name":"h","degree":3}],"integral":{"h":"1"}}"#,
        )
        .unwrap();
        assert!(matches!(d.build(), Err(ChernError::BadDegree(..))));
        let d: RingDescriptor = serde_json::from_str(
            r#"{"generators":[{"name":"h","degree":2}],"relations":["h^2=0"],"integral":{"h^2":"1"}}"#,
        )
        .unwrap();
        assert!(matches!(d.build(), Err(ChernError::BadIntegral(..))));
    }

    #[test]
    fn signature_flags_nonzero_c1_squared() {
        let rep = signature_harness(&qi(44), &qi(16), None);
        assert_eq!(rep.signature, "4");
        assert!(!rep.projective_structure_possible);
        let torus = signature_harness(&qi(0), &qi(0), None);
        assert!(torus.projective_structure_possible);
    }
}
