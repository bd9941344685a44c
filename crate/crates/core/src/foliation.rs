//! Foliations by curves in affine charts: generating vector fields,
//! Christoffel symbols of foliated affine and projective structures and their
//! transformation laws, the structure induced by a homogeneous vector field
//! on projective space, and singular-point records.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    charpoly_sigmas, determinant, fmt_q, qi, rational_sqrt, AlgebraError, FormWeight,
    Frac, FunctionRing, Laurent, Matrix, MeromorphicForm, Poly, VectorField, Q,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoliationError {
    #[error("vector field is identically zero")]
    ZeroField,
    #[error("component {0} is not homogeneous of the common degree")]
    NotHomogeneous(usize),
    #[error("degenerate: radial")]
    Radial,
    #[error("chart index {0} out of range")]
    BadChart(usize),
    #[error("expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("factor {index} does not divide its derivative along the field")]
    NotInvariant { index: usize },
    #[error("supplied cofactor for factor {index} is wrong")]
    WrongCofactor { index: usize },
    #[error("not singular: field does not vanish at {0}")]
    NotSingular(String),
    #[error("duplicate candidate {0}")]
    DuplicateCandidate(String),
    #[error("log-type singularity: Christoffel symbol vanishes at {0}")]
    LogType(String),
    #[error("degenerate Jacobian at {0}")]
    Degenerate(String),
    #[error("expected a form of weight {expected}, found {found}")]
    Weight { expected: u32, found: u32 },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A polynomial vector field generating the foliation on one chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartField {
    pub chart: String,
    field: VectorField,
}

impl ChartField {
    pub fn new(chart: &str, vars: &[String], comps: Vec<Poly>) -> Result<Self, FoliationError> {
        if comps.len() != vars.len() {
            return Err(FoliationError::Arity {
                expected: vars.len(),
                found: comps.len(),
            });
        }
        let field = VectorField::new(vars, comps)?;
        if field.is_zero() {
            return Err(FoliationError::ZeroField);
        }
        Ok(ChartField {
            chart: chart.to_string(),
            field,
        })
    }

    pub fn vars(&self) -> &[String] {
        self.field.vars()
    }

    pub fn dim(&self) -> usize {
        self.field.vars().len()
    }

    pub fn components(&self) -> &[Poly] {
        self.field.components()
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    /// `Z(f)`.
    pub fn apply(&self, f: &Poly) -> Poly {
        self.field.apply(f)
    }

    /// Jacobian `∂Z^i/∂x_j` at a point.
    pub fn jacobian_at(&self, p: &[Q]) -> Matrix {
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| self.components()[i].partial(j).eval(p))
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows)
    }
}

impl fmt::Display for ChartField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureKind {
    Affine,
    Projective,
}

impl fmt::Display for StructureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureKind::Affine => write!(f, "affine"),
            StructureKind::Projective => write!(f, "projective"),
        }
    }
}

/// Christoffel symbol `γ = ∇(Z)` or `ρ = Ξ(Z)` of a generator on a chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Christoffel {
    pub kind: StructureKind,
    pub symbol: Poly,
}

impl Christoffel {
    pub fn affine(symbol: Poly) -> Self {
        Christoffel {
            kind: StructureKind::Affine,
            symbol,
        }
    }

    pub fn projective(symbol: Poly) -> Self {
        Christoffel {
            kind: StructureKind::Projective,
            symbol,
        }
    }
}

/// Symbol of `gZ` from the symbol `γ` of `Z`: `Zg + gγ`.
pub fn change_generator_affine<R: FunctionRing>(gamma: &R, g: &R, z: &[R]) -> R {
    g.derive_along(z).add(&g.mul(gamma))
}

/// Symbol of `gZ` from the symbol `ρ` of `Z`: `g²ρ + g·Z(Zg) − ½(Zg)²`.
pub fn change_generator_projective<R: FunctionRing>(rho: &R, g: &R, z: &[R]) -> R {
    let zg = g.derive_along(z);
    let zzg = zg.derive_along(z);
    g.square()
        .mul(rho)
        .add(&g.mul(&zzg))
        .sub(&zg.square().scale(&Q::new(1.into(), 2.into())))
}

/// Projective symbol associated with an affine one: `−½γ² + Zγ`.
pub fn affine_to_projective<R: FunctionRing>(gamma: &R, z: &[R]) -> R {
    gamma
        .derive_along(z)
        .sub(&gamma.square().scale(&Q::new(1.into(), 2.into())))
}

/// An invariant factor `f` with multiplicity `n` and cofactor `h`, `Zf = hf`.
#[derive(Debug, Clone)]
pub struct InvariantFactor {
    pub f: Poly,
    pub n: i64,
    pub h: Option<Poly>,
}

/// Affine symbol `−Σ n_i h_i` of the structure extended across the invariant
/// hypersurfaces `f_i = 0`. Cofactors are verified, or computed by exact
/// division when absent.
pub fn extension_christoffel(
    z: &ChartField,
    factors: &[InvariantFactor],
) -> Result<Poly, FoliationError> {
    let mut gamma = Poly::zero(z.vars());
    for (index, fac) in factors.iter().enumerate() {
        let zf = z.apply(&fac.f);
        let h = match &fac.h {
            Some(h) => {
                if &(h * &fac.f) != &zf {
                    return Err(FoliationError::WrongCofactor { index });
                }
                h.clone()
            }
            None => zf
                .div_exact(&fac.f)
                .ok_or(FoliationError::NotInvariant { index })?,
        };
        gamma = &gamma - &h.scale(&qi(fac.n));
    }
    Ok(gamma)
}

/// Result of extending a structure across a turbulent fibre.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurbulentExtension {
    pub symbol: Laurent,
    pub holomorphic: bool,
}

/// Symbol of `zⁿZ` where `Z = ∂z` in the fibre coordinate has symbol
/// given by `form`. Projective mode uses `z^{2n−2}(z²Ξ₀ + ½n(n−2))` and needs
/// a quadratic differential; affine mode uses `z^{n−1}(z∇₀ + n)` and needs a
/// one-form.
pub fn turbulent_extension(
    n: u32,
    form: &MeromorphicForm,
    mode: StructureKind,
) -> Result<TurbulentExtension, FoliationError> {
    let coeff = &form.coeff;
    let var = coeff.var();
    let n_i = n as i64;
    let symbol = match mode {
        StructureKind::Projective => {
            if form.weight != FormWeight::Two {
                return Err(FoliationError::Weight {
                    expected: 2,
                    found: form.weight.value(),
                });
            }
            let c = Q::new((n_i * (n_i - 2)).into(), 2.into());
            let order = coeff.order() + 2;
            let inner = coeff
                .shift(2)
                .add(&Laurent::monomial(var, 0, c, order))?;
            inner.shift(2 * n_i - 2)
        }
        StructureKind::Affine => {
            if form.weight != FormWeight::One {
                return Err(FoliationError::Weight {
                    expected: 1,
                    found: form.weight.value(),
                });
            }
            let order = coeff.order() + 1;
            let inner = coeff
                .shift(1)
                .add(&Laurent::monomial(var, 0, qi(n_i), order))?;
            inner.shift(n_i - 1)
        }
    };
    let holomorphic = symbol.is_holomorphic();
    Ok(TurbulentExtension {
        symbol,
        holomorphic,
    })
}

/// A homogeneous polynomial vector field on `C^{n+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousField {
    vars: Vec<String>,
    comps: Vec<Poly>,
    degree: u32,
}

impl HomogeneousField {
    pub fn new(vars: &[String], comps: Vec<Poly>) -> Result<Self, FoliationError> {
        if comps.len() != vars.len() {
            return Err(FoliationError::Arity {
                expected: vars.len(),
                found: comps.len(),
            });
        }
        let degree = comps
            .iter()
            .find_map(Poly::degree)
            .ok_or(FoliationError::ZeroField)?;
        for (i, c) in comps.iter().enumerate() {
            if c.vars() != vars {
                return Err(AlgebraError::VariableMismatch {
                    left: vars.to_vec(),
                    right: c.vars().to_vec(),
                }
                .into());
            }
            if !c.is_zero() && (!c.is_homogeneous() || c.degree() != Some(degree)) {
                return Err(FoliationError::NotHomogeneous(i));
            }
        }
        Ok(HomogeneousField {
            vars: vars.to_vec(),
            comps,
            degree,
        })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }

    /// Number of homogeneous coordinates, `n + 1`.
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Variables of chart `k`: the affine coordinates `x_i / x_k`, named
    /// after `x_i`.
    pub fn chart_vars(&self, k: usize) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, v)| v.clone())
            .collect()
    }

    /// Restriction of a polynomial in the homogeneous variables to `x_k = 1`.
    pub fn slice(&self, p: &Poly, k: usize) -> Poly {
        let cv = self.chart_vars(k);
        let images: Vec<Poly> = (0..self.len())
            .map(|i| {
                if i == k {
                    Poly::one(&cv)
                } else {
                    let j = if i < k { i } else { i - 1 };
                    Poly::var_index(&cv, j)
                }
            })
            .collect();
        p.substitute(&images)
    }

    /// Homogeneous point lifted from chart coordinates.
    pub fn lift_point(&self, k: usize, p: &[Q]) -> Vec<Q> {
        let mut out = p.to_vec();
        out.insert(k, Q::one());
        out
    }

    /// Chart coordinates of a homogeneous point with `x_k ≠ 0`.
    pub fn chart_point(&self, k: usize, x: &[Q]) -> Option<Vec<Q>> {
        if x[k].is_zero() {
            return None;
        }
        Some(
            x.iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .map(|(_, c)| c / &x[k])
                .collect(),
        )
    }

    /// Chart field `W_i = Z^i − u_i Z^k` and affine symbol `γ = −(d−1) Z^k`
    /// on the slice `x_k = 1`.
    pub fn to_chart(&self, k: usize) -> Result<(ChartField, Poly), FoliationError> {
        if k >= self.len() {
            return Err(FoliationError::BadChart(k));
        }
        let cv = self.chart_vars(k);
        let zk = self.slice(&self.comps[k], k);
        let mut w = Vec::with_capacity(cv.len());
        for i in 0..self.len() {
            if i == k {
                continue;
            }
            let j = if i < k { i } else { i - 1 };
            let zi = self.slice(&self.comps[i], k);
            w.push(&zi - &(&Poly::var_index(&cv, j) * &zk));
        }
        if w.iter().all(Poly::is_zero) {
            return Err(FoliationError::Radial);
        }
        let gamma = zk.scale(&-qi(self.degree as i64 - 1));
        let field = ChartField::new(&self.vars[k], &cv, w)?;
        Ok((field, gamma))
    }

    /// Multiplier `g` with `W^(k) = g · W^(l)` on the overlap, written in the
    /// coordinates of chart `k`: `g = u_l^{d−1}`.
    pub fn transition_multiplier(&self, k: usize, l: usize) -> Poly {
        let cv = self.chart_vars(k);
        let j = if l < k { l } else { l - 1 };
        Poly::var_index(&cv, j).pow(self.degree.saturating_sub(1))
    }

    /// Coordinates of chart `l` as rational functions of those of chart `k`.
    pub fn chart_change(&self, k: usize, l: usize) -> Vec<Frac> {
        let cv = self.chart_vars(k);
        let jl = if l < k { l } else { l - 1 };
        let ul = Poly::var_index(&cv, jl);
        (0..self.len())
            .filter(|&i| i != l)
            .map(|i| {
                let num = if i == k {
                    Poly::one(&cv)
                } else {
                    Poly::var_index(&cv, if i < k { i } else { i - 1 })
                };
                Frac::new(num, ul.clone()).expect("nonzero denominator")
            })
            .collect()
    }
}

/// Evaluates a polynomial at rational-function arguments.
pub fn compose_frac(p: &Poly, args: &[Frac]) -> Frac {
    let vars = args[0].vars().to_vec();
    let mut acc = Frac::from_poly(Poly::zero(&vars));
    for (m, c) in p.terms() {
        let mut t = Frac::from_poly(Poly::constant(&vars, c.clone()));
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&args[i]);
            }
        }
        acc = acc.add(&t);
    }
    acc
}

/// Which parts of a transition agree on the overlap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionCheck {
    pub fields: bool,
    pub symbols: bool,
}

impl TransitionCheck {
    pub fn ok(&self) -> bool {
        self.fields && self.symbols
    }
}

/// Exact check of a chart transition. `coords` gives the coordinates of chart
/// `to` as rational functions on chart `from`, and `multiplier` is `g` with
/// `W_from = g·W_to` on the overlap. Verifies `Dφ·W_from = g·(W_to∘φ)` and
/// that the symbol of `W_from` is the symbol of `W_to` changed by `g`.
pub fn transition_consistent(
    from: &ChartField,
    sym_from: &Christoffel,
    to: &ChartField,
    sym_to: &Christoffel,
    multiplier: &Poly,
    coords: &[Frac],
) -> Result<TransitionCheck, FoliationError> {
    if coords.len() != to.dim() {
        return Err(FoliationError::Arity {
            expected: to.dim(),
            found: coords.len(),
        });
    }
    if multiplier.is_zero() {
        return Err(AlgebraError::DivisionByZero.into());
    }
    let g = Frac::from_poly(multiplier.clone());
    let w_from: Vec<Frac> = from
        .components()
        .iter()
        .map(|p| Frac::from_poly(p.clone()))
        .collect();
    let fields = coords.iter().enumerate().all(|(i, phi_i)| {
        phi_i.derive_along(&w_from) == compose_frac(&to.components()[i], coords).mul(&g)
    });
    let pulled = compose_frac(&sym_to.symbol, coords);
    // W_to acting on functions of chart `from` is W_from / g
    let w_to: Vec<Frac> = w_from
        .iter()
        .map(|c| c.div(&g).expect("multiplier is nonzero"))
        .collect();
    let expected = match sym_from.kind {
        StructureKind::Affine => change_generator_affine(&pulled, &g, &w_to),
        StructureKind::Projective => change_generator_projective(&pulled, &g, &w_to),
    };
    let symbols =
        sym_from.kind == sym_to.kind && expected == Frac::from_poly(sym_from.symbol.clone());
    Ok(TransitionCheck { fields, symbols })
}

/// Cross-chart oracle for the structure induced by a homogeneous field.
pub fn cross_chart_consistent(
    zh: &HomogeneousField,
    k: usize,
    l: usize,
) -> Result<TransitionCheck, FoliationError> {
    let (wk, gk) = zh.to_chart(k)?;
    let (wl, gl) = zh.to_chart(l)?;
    transition_consistent(
        &wk,
        &Christoffel::affine(gk),
        &wl,
        &Christoffel::affine(gl),
        &zh.transition_multiplier(k, l),
        &zh.chart_change(k, l),
    )
}

/// Per-singularity invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularPointRecord {
    pub chart: String,
    pub point: Vec<Q>,
    pub jacobian: Matrix,
    /// Coefficients of `det(I + tA) = 1 + Σ σ_i t^i`.
    pub sigmas: Vec<Q>,
    pub det: Q,
    pub kind: StructureKind,
    /// `γ(p)` or `ρ(p)`.
    pub symbol_value: Q,
    pub nondegenerate: bool,
    pub eigenvalues: Option<Vec<Q>>,
}

impl SingularPointRecord {
    pub fn dim(&self) -> usize {
        self.point.len()
    }

    /// Usable in the index theorems: nondegenerate with nonvanishing symbol.
    pub fn admissible(&self) -> bool {
        self.nondegenerate && !self.symbol_value.is_zero()
    }

    pub fn point_text(&self) -> String {
        fmt_point(&self.point)
    }

    /// Why the record is excluded from index sums, if it is.
    pub fn inadmissible_reason(&self) -> Option<FoliationError> {
        if !self.nondegenerate {
            Some(FoliationError::Degenerate(self.point_text()))
        } else if self.symbol_value.is_zero() {
            Some(FoliationError::LogType(self.point_text()))
        } else {
            None
        }
    }
}

pub fn fmt_point(p: &[Q]) -> String {
    let parts: Vec<String> = p.iter().map(fmt_q).collect();
    format!("({})", parts.join(", "))
}

/// Exact eigenvalues when they are rational and easy to read off.
fn exact_eigenvalues(a: &Matrix, sigmas: &[Q]) -> Option<Vec<Q>> {
    if a.is_upper_triangular() || a.is_lower_triangular() {
        return Some(a.diag());
    }
    match sigmas.len() {
        1 => Some(vec![sigmas[0].clone()]),
        2 => {
            let disc = &sigmas[0] * &sigmas[0] - &sigmas[1] * qi(4);
            let r = rational_sqrt(&disc)?;
            let half = Q::new(1.into(), 2.into());
            Some(vec![
                (&sigmas[0] + &r) * &half,
                (&sigmas[0] - &r) * &half,
            ])
        }
        _ => None,
    }
}

/// Builds a record for each caller-supplied candidate, verifying that the
/// field vanishes there.
pub fn singular_records(
    w: &ChartField,
    christoffel: &Christoffel,
    candidates: &[Vec<Q>],
) -> Result<Vec<SingularPointRecord>, FoliationError> {
    for (i, p) in candidates.iter().enumerate() {
        if candidates[..i].contains(p) {
            return Err(FoliationError::DuplicateCandidate(fmt_point(p)));
        }
    }
    candidates
        .iter()
        .map(|p| singular_record(w, christoffel, p))
        .collect()
}

pub fn singular_record(
    w: &ChartField,
    christoffel: &Christoffel,
    p: &[Q],
) -> Result<SingularPointRecord, FoliationError> {
    if p.len() != w.dim() {
        return Err(FoliationError::Arity {
            expected: w.dim(),
            found: p.len(),
        });
    }
    if w.components().iter().any(|c| !c.eval(p).is_zero()) {
        return Err(FoliationError::NotSingular(fmt_point(p)));
    }
    let jacobian = w.jacobian_at(p);
    let sigmas = charpoly_sigmas(&jacobian);
    let det = determinant(&jacobian);
    let eigenvalues = exact_eigenvalues(&jacobian, &sigmas);
    Ok(SingularPointRecord {
        chart: w.chart.clone(),
        point: p.to_vec(),
        nondegenerate: !det.is_zero(),
        det,
        sigmas,
        jacobian,
        kind: christoffel.kind,
        symbol_value: christoffel.symbol.eval(p),
        eigenvalues,
    })
}

/// Ramification data at a singular point. `values` holds `ν_i = λ_i/γ(p)`
/// (affine) or `ν_i² = −λ_i²/(2ρ(p))` (projective) when the eigenvalues are
/// rational; the characteristic coefficients and symbol value always suffice
/// for the index formulas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexData {
    pub kind: StructureKind,
    pub values: Option<Vec<Q>>,
    pub sigmas: Vec<Q>,
    pub symbol_value: Q,
}

pub fn ramification_indices(rec: &SingularPointRecord) -> Result<IndexData, FoliationError> {
    if let Some(e) = rec.inadmissible_reason() {
        return Err(e);
    }
    let s = &rec.symbol_value;
    let values = rec.eigenvalues.as_ref().map(|ls| match rec.kind {
        StructureKind::Affine => ls.iter().map(|l| l / s).collect(),
        StructureKind::Projective => ls
            .iter()
            .map(|l| -(l * l) / (s * qi(2)))
            .collect(),
    });
    Ok(IndexData {
        kind: rec.kind,
        values,
        sigmas: rec.sigmas.clone(),
        symbol_value: s.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::q;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, v: &[String]) -> Poly {
        parse_poly(text, v).unwrap()
    }

    #[test]
    fn affine_change_by_coordinate() {
        let v = vars(&["z"]);
        let z = vec![Poly::one(&v)];
        let out = change_generator_affine(&Poly::zero(&v), &p("z", &v), &z);
        assert_eq!(out, Poly::one(&v));
        let gamma = p("3 + z^2", &v);
        assert_eq!(change_generator_affine(&gamma, &Poly::one(&v), &z), gamma);
    }

    #[test]
    fn projective_change_by_coordinate() {
        let v = vars(&["z"]);
        let z = vec![Poly::one(&v)];
        let out = change_generator_projective(&Poly::zero(&v), &p("z", &v), &z);
        assert_eq!(out, Poly::constant(&v, q(-1, 2)));
        let rho = p("z - 1", &v);
        let c = Poly::constant(&v, qi(3));
        assert_eq!(change_generator_projective(&rho, &c, &z), rho.scale(&qi(9)));
    }

    #[test]
    fn affine_to_projective_constant() {
        let v = vars(&["z"]);
        let z = vec![p("z", &v)];
        let out = affine_to_projective(&Poly::constant(&v, qi(4)), &z);
        assert_eq!(out, Poly::constant(&v, qi(-8)));
        assert!(affine_to_projective(&Poly::zero(&v), &z).is_zero());
    }

    #[test]
    fn extension_of_euler_field() {
        let v = vars(&["z"]);
        let z = ChartField::new("c", &v, vec![p("z", &v)]).unwrap();
        let fac = InvariantFactor {
            f: p("z", &v),
            n: 1,
            h: None,
        };
        let gamma = extension_christoffel(&z, &[fac.clone()]).unwrap();
        assert_eq!(gamma, Poly::constant(&v, qi(-1)));
        // the symbol of zZ vanishes
        let zz = change_generator_affine(&gamma, &fac.f, z.components());
        assert!(zz.is_zero());
        let neg = InvariantFactor { n: -1, ..fac };
        assert_eq!(
            extension_christoffel(&z, &[neg]).unwrap(),
            Poly::constant(&v, qi(1))
        );
        assert!(extension_christoffel(&z, &[]).unwrap().is_zero());
    }

    #[test]
    fn non_invariant_factor_is_rejected() {
        let v = vars(&["z"]);
        let z = ChartField::new("c", &v, vec![Poly::one(&v)]).unwrap();
        let fac = InvariantFactor {
            f: p("z", &v),
            n: 1,
            h: None,
        };
        assert_eq!(
            extension_christoffel(&z, &[fac]),
            Err(FoliationError::NotInvariant { index: 0 })
        );
    }

    #[test]
    fn turbulent_fibres() {
        let double = Laurent::from_coeffs("z", 8, [(-2, qi(5)), (0, qi(1))]);
        let form = MeromorphicForm::new(FormWeight::Two, double);
        for n in 1..4 {
            let t = turbulent_extension(n, &form, StructureKind::Projective).unwrap();
            assert!(t.holomorphic);
        }
        let triple = Laurent::from_coeffs("z", 8, [(-3, qi(2))]);
        let form = MeromorphicForm::new(FormWeight::Two, triple);
        let t = turbulent_extension(1, &form, StructureKind::Projective).unwrap();
        assert!(!t.holomorphic);
        assert_eq!(t.symbol.coeff(-1), qi(2));
        assert_eq!(t.symbol.coeff(0), q(-1, 2));
        let hol = Laurent::from_coeffs("z", 8, [(0, qi(3))]);
        let form = MeromorphicForm::new(FormWeight::One, hol);
        let t = turbulent_extension(1, &form, StructureKind::Affine).unwrap();
        assert!(t.holomorphic);
        assert_eq!(t.symbol.coeff(0), qi(1));
        assert_eq!(t.symbol.coeff(1), qi(3));
    }

    #[test]
    fn linear_field_descends_with_zero_symbol() {
        let v = vars(&["x0", "x1", "x2"]);
        let zh = HomogeneousField::new(&v, vec![p("x0", &v), p("2*x1", &v), p("3*x2", &v)])
            .unwrap();
        for k in 0..3 {
            let (_, gamma) = zh.to_chart(k).unwrap();
            assert!(gamma.is_zero());
        }
    }

    #[test]
    fn radial_field_is_rejected() {
        let v = vars(&["x0", "x1"]);
        let zh = HomogeneousField::new(&v, vec![p("x0", &v), p("x1", &v)]).unwrap();
        assert_eq!(zh.to_chart(0), Err(FoliationError::Radial));
    }

    #[test]
    fn non_homogeneous_input() {
        let v = vars(&["x0", "x1"]);
        assert!(matches!(
            HomogeneousField::new(&v, vec![p("x0^2 + x1", &v), p("x1^2", &v)]),
            Err(FoliationError::NotHomogeneous(0))
        ));
    }

    #[test]
    fn quadratic_field_charts_agree() {
        let v = vars(&["x0", "x1", "x2"]);
        let zh = HomogeneousField::new(
            &v,
            vec![p("x0^2", &v), p("x1^2 - x0*x2", &v), p("x2^2 + 2*x0*x1", &v)],
        )
        .unwrap();
        for k in 0..3 {
            for l in 0..3 {
                if k != l {
                    assert!(cross_chart_consistent(&zh, k, l).unwrap().ok(), "{k}->{l}");
                }
            }
        }
    }

    #[test]
    fn projective_symbols_glue_and_perturbation_is_caught() {
        let v = vars(&["x0", "x1", "x2"]);
        let zh = HomogeneousField::new(
            &v,
            vec![p("x0^2", &v), p("x1^2", &v), p("x2^2 - x0*x1", &v)],
        )
        .unwrap();
        let proj = |k: usize| {
            let (w, g) = zh.to_chart(k).unwrap();
            let rho = affine_to_projective(&g, w.components());
            (w, Christoffel::projective(rho))
        };
        let (w0, r0) = proj(0);
        let (w1, r1) = proj(1);
        let g = zh.transition_multiplier(0, 1);
        let phi = zh.chart_change(0, 1);
        assert!(transition_consistent(&w0, &r0, &w1, &r1, &g, &phi).unwrap().ok());
        let bumped = Christoffel::projective(&r1.symbol + &Poly::one(w1.vars()));
        let check = transition_consistent(&w0, &r0, &w1, &bumped, &g, &phi).unwrap();
        assert!(check.fields && !check.symbols);
        let wrong_g = &g + &Poly::one(w0.vars());
        let check = transition_consistent(&w0, &r0, &w1, &r1, &wrong_g, &phi).unwrap();
        assert!(!check.fields);
    }

    #[test]
    fn record_of_linear_field() {
        let v = vars(&["x", "y"]);
        let w = ChartField::new("c", &v, vec![p("x", &v), p("2*y", &v)]).unwrap();
        let c = Christoffel::affine(p("3 + x", &v));
        let rec = singular_record(&w, &c, &[qi(0), qi(0)]).unwrap();
        assert_eq!(rec.sigmas, vec![qi(3), qi(2)]);
        assert_eq!(rec.symbol_value, qi(3));
        assert!(rec.nondegenerate);
        assert_eq!(
            singular_record(&w, &c, &[qi(1), qi(0)]),
            Err(FoliationError::NotSingular("(1, 0)".into()))
        );
        assert!(matches!(
            singular_records(&w, &c, &[vec![qi(0), qi(0)], vec![qi(0), qi(0)]]),
            Err(FoliationError::DuplicateCandidate(_))
        ));
    }

    #[test]
    fn degenerate_record_is_flagged() {
        let v = vars(&["x", "y"]);
        let w = ChartField::new("c", &v, vec![p("x^2", &v), p("y", &v)]).unwrap();
        let c = Christoffel::affine(Poly::one(&v));
        let rec = singular_record(&w, &c, &[qi(0), qi(0)]).unwrap();
        assert!(!rec.nondegenerate);
        assert!(!rec.admissible());
        assert!(matches!(
            ramification_indices(&rec),
            Err(FoliationError::Degenerate(_))
        ));
    }

    #[test]
    fn ramification_examples() {
        let v = vars(&["z"]);
        let w = ChartField::new("c", &v, vec![p("z", &v)]).unwrap();
        let rec = singular_record(&w, &Christoffel::affine(Poly::one(&v)), &[qi(0)]).unwrap();
        assert_eq!(ramification_indices(&rec).unwrap().values, Some(vec![qi(1)]));
        let rho = Christoffel::projective(Poly::constant(&v, q(-1, 2)));
        let rec = singular_record(&w, &rho, &[qi(0)]).unwrap();
        assert_eq!(ramification_indices(&rec).unwrap().values, Some(vec![qi(1)]));

        let v2 = vars(&["x", "y"]);
        let w2 = ChartField::new("c", &v2, vec![p("2*x", &v2), p("3*y", &v2)]).unwrap();
        let rec = singular_record(&w2, &Christoffel::affine(Poly::one(&v2)), &[qi(0), qi(0)])
            .unwrap();
        assert_eq!(
            ramification_indices(&rec).unwrap().values,
            Some(vec![qi(2), qi(3)])
        );
        let zero = Christoffel::affine(Poly::zero(&v2));
        let rec = singular_record(&w2, &zero, &[qi(0), qi(0)]).unwrap();
        assert!(matches!(
            ramification_indices(&rec),
            Err(FoliationError::LogType(_))
        ));
    }
}
