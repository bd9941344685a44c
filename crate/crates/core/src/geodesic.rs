//! Geodesic vector fields on the tangent bundle of the foliation and on its
//! first jet bundle, the structural fields `H` and `Y`, and gluing checks.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{q, AlgebraError, Frac, FunctionRing, Poly, VectorField, Q};
use crate::foliation::{
    change_generator_affine, change_generator_projective, compose_frac, ChartField, Christoffel,
    FoliationError, HomogeneousField, StructureKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeodesicError {
    #[error("expected a {expected} Christoffel symbol, found {found}")]
    Kind {
        expected: StructureKind,
        found: StructureKind,
    },
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
}

/// A vector field on `chart × C^k` with fibre coordinates appended after the
/// base coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedField {
    base: Vec<String>,
    fiber: Vec<String>,
    field: VectorField,
}

impl LiftedField {
    pub fn base_vars(&self) -> &[String] {
        &self.base
    }

    pub fn fiber_vars(&self) -> &[String] {
        &self.fiber
    }

    pub fn field(&self) -> &VectorField {
        &self.field
    }

    pub fn components(&self) -> &[Poly] {
        self.field.components()
    }

    fn with_field(&self, field: VectorField) -> LiftedField {
        LiftedField {
            base: self.base.clone(),
            fiber: self.fiber.clone(),
            field,
        }
    }
}

pub fn lie_bracket(x: &LiftedField, y: &LiftedField) -> Result<LiftedField, GeodesicError> {
    Ok(x.with_field(x.field.bracket(&y.field)?))
}

/// A name not among `taken`, built from `stem`.
fn fresh(stem: &str, taken: &[String]) -> String {
    if !taken.iter().any(|t| t == stem) {
        return stem.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded")
}

fn lift_vars(z: &ChartField, stems: &[&str]) -> (Vec<String>, Vec<String>) {
    let base = z.vars().to_vec();
    let mut fiber = Vec::new();
    for s in stems {
        let mut taken = base.clone();
        taken.extend(fiber.iter().cloned());
        fiber.push(fresh(s, &taken));
    }
    (base, fiber)
}

fn all_vars(base: &[String], fiber: &[String]) -> Vec<String> {
    base.iter().chain(fiber).cloned().collect()
}

fn require(c: &Christoffel, kind: StructureKind) -> Result<(), GeodesicError> {
    if c.kind != kind {
        return Err(GeodesicError::Kind {
            expected: kind,
            found: c.kind,
        });
    }
    Ok(())
}

/// Outcome of one symbolic identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

impl IdentityCheck {
    fn compare(name: &str, lhs: &VectorField, rhs: &VectorField) -> Self {
        let witness = lhs
            .components()
            .iter()
            .zip(rhs.components())
            .zip(lhs.vars())
            .find(|((a, b), _)| a != b)
            .map(|((a, b), v)| format!("∂{v} component: {a} ≠ {b}"));
        IdentityCheck {
            name: name.to_string(),
            holds: witness.is_none(),
            witness,
        }
    }

    fn boolean(name: &str, holds: bool, witness: impl FnOnce() -> String) -> Self {
        IdentityCheck {
            name: name.to_string(),
            holds,
            witness: (!holds).then(witness),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AffineGeodesic {
    pub x: LiftedField,
    pub h: LiftedField,
    base_field: ChartField,
}

/// `X = ζZ − γζ²∂ζ` and `H = ζ∂ζ` on `chart × C`.
pub fn build_geodesic_affine(
    z: &ChartField,
    gamma: &Christoffel,
) -> Result<AffineGeodesic, GeodesicError> {
    require(gamma, StructureKind::Affine)?;
    let (base, fiber) = lift_vars(z, &["zeta"]);
    let vars = all_vars(&base, &fiber);
    let n = base.len();
    let zeta = Poly::var_index(&vars, n);
    let mut comps: Vec<Poly> = z
        .components()
        .iter()
        .map(|c| &c.extend_vars(&fiber) * &zeta)
        .collect();
    comps.push(-&(&gamma.symbol.extend_vars(&fiber) * &zeta.pow(2)));
    let x = VectorField::new(&vars, comps)?;
    let h = VectorField::coordinate(&vars, n, zeta);
    Ok(AffineGeodesic {
        x: LiftedField {
            base: base.clone(),
            fiber: fiber.clone(),
            field: x,
        },
        h: LiftedField {
            base,
            fiber,
            field: h,
        },
        base_field: z.clone(),
    })
}

fn base_components_check(x: &LiftedField, z: &ChartField) -> IdentityCheck {
    let zeta = Poly::var_index(
        &all_vars(&x.base, &x.fiber),
        x.base.len(),
    );
    let expected: Vec<Poly> = z
        .components()
        .iter()
        .map(|c| &c.extend_vars(&x.fiber) * &zeta)
        .collect();
    let holds = x.components()[..x.base.len()] == expected[..];
    IdentityCheck::boolean("base components = ζ·Z", holds, || {
        "base part of X differs from ζ·Z".to_string()
    })
}

impl AffineGeodesic {
    pub fn checks(&self) -> Result<Vec<IdentityCheck>, GeodesicError> {
        let hx = lie_bracket(&self.h, &self.x)?;
        Ok(vec![
            IdentityCheck::compare("[H,X] = X", hx.field(), self.x.field()),
            base_components_check(&self.x, &self.base_field),
        ])
    }
}

#[derive(Debug, Clone)]
pub struct ProjectiveGeodesic {
    pub x: LiftedField,
    pub h: LiftedField,
    pub y: LiftedField,
    base_field: ChartField,
}

/// `X = ζZ + ζξ∂ζ + (½ξ² − ρζ²)∂ξ`, `H = ζ∂ζ + ξ∂ξ`, `Y = 2∂ξ` on
/// `chart × C²`.
pub fn build_geodesic_projective(
    z: &ChartField,
    rho: &Christoffel,
) -> Result<ProjectiveGeodesic, GeodesicError> {
    require(rho, StructureKind::Projective)?;
    let (base, fiber) = lift_vars(z, &["zeta", "xi"]);
    let vars = all_vars(&base, &fiber);
    let n = base.len();
    let zeta = Poly::var_index(&vars, n);
    let xi = Poly::var_index(&vars, n + 1);
    let mut comps: Vec<Poly> = z
        .components()
        .iter()
        .map(|c| &c.extend_vars(&fiber) * &zeta)
        .collect();
    comps.push(&zeta * &xi);
    comps.push(&xi.pow(2).scale(&q(1, 2)) - &(&rho.symbol.extend_vars(&fiber) * &zeta.pow(2)));
    let x = VectorField::new(&vars, comps)?;
    let h = VectorField::coordinate(&vars, n, zeta.clone())
        .add(&VectorField::coordinate(&vars, n + 1, xi));
    let y = VectorField::coordinate(&vars, n + 1, Poly::constant(&vars, Q::from_integer(2.into())));
    let lift = |field| LiftedField {
        base: base.clone(),
        fiber: fiber.clone(),
        field,
    };
    Ok(ProjectiveGeodesic {
        x: lift(x),
        h: lift(h),
        y: lift(y),
        base_field: z.clone(),
    })
}

impl ProjectiveGeodesic {
    /// The `sl(2,C)` relations and the base-component identity.
    pub fn checks(&self) -> Result<Vec<IdentityCheck>, GeodesicError> {
        let yx = lie_bracket(&self.y, &self.x)?;
        let hx = lie_bracket(&self.h, &self.x)?;
        let hy = lie_bracket(&self.h, &self.y)?;
        let two = Q::from_integer(2.into());
        Ok(vec![
            IdentityCheck::compare("[Y,X] = 2H", yx.field(), &self.h.field.scale(&two)),
            IdentityCheck::compare("[H,X] = X", hx.field(), self.x.field()),
            IdentityCheck::compare("[H,Y] = -Y", hy.field(), &self.y.field.scale(&-Q::one())),
            base_components_check(&self.x, &self.base_field),
        ])
    }
}

/// Pushes a lifted field forward along a fibrewise map `(x, w) ↦ (x, φ(x, w))`
/// and compares with `target`: `target∘Φ = DΦ·source`.
fn pushforward_matches(source: &VectorField, target: &VectorField, fiber_map: &[Poly]) -> bool {
    let vars = source.vars();
    let n = vars.len() - fiber_map.len();
    let mut images: Vec<Poly> = (0..n).map(|i| Poly::var_index(vars, i)).collect();
    images.extend(fiber_map.iter().cloned());
    (0..vars.len()).all(|i| {
        let lhs = target.components()[i].substitute(&images);
        let rhs = source.apply(&images[i]);
        lhs == rhs
    })
}

/// With `Z' = gZ`, verifies that the geodesic field of `(Z', γ')`, with `γ'`
/// the changed symbol, maps to that of `(Z, γ)` under `ζ = gζ'`.
pub fn glue_affine(z: &ChartField, gamma: &Poly, g: &Poly) -> Result<bool, GeodesicError> {
    let zg = ChartField::new(&z.chart, z.vars(), z.components().iter().map(|c| g * c).collect())?;
    let gamma_g = change_generator_affine(gamma, g, z.components());
    let x = build_geodesic_affine(z, &Christoffel::affine(gamma.clone()))?;
    let xg = build_geodesic_affine(&zg, &Christoffel::affine(gamma_g))?;
    let vars = all_vars(&x.x.base, &x.x.fiber);
    let zeta = Poly::var_index(&vars, x.x.base.len());
    let map = [&g.extend_vars(&x.x.fiber) * &zeta];
    Ok(pushforward_matches(xg.x.field(), x.x.field(), &map))
}

/// Projective analogue of [`glue_affine`]: `(ζ, ξ) = ψ(ζ', ξ')` with
/// `ψ = [[g, 0], [Zg, 1]]`.
pub fn glue_projective(z: &ChartField, rho: &Poly, g: &Poly) -> Result<bool, GeodesicError> {
    let zg = ChartField::new(&z.chart, z.vars(), z.components().iter().map(|c| g * c).collect())?;
    let rho_g = change_generator_projective(rho, g, z.components());
    let x = build_geodesic_projective(z, &Christoffel::projective(rho.clone()))?;
    let xg = build_geodesic_projective(&zg, &Christoffel::projective(rho_g))?;
    let fiber = &x.x.fiber;
    let vars = all_vars(&x.x.base, fiber);
    let n = x.x.base.len();
    let zeta = Poly::var_index(&vars, n);
    let xi = Poly::var_index(&vars, n + 1);
    let dg = z.apply(g).extend_vars(fiber);
    let map = [
        &g.extend_vars(fiber) * &zeta,
        &(&dg * &zeta) + &xi,
    ];
    Ok(pushforward_matches(xg.x.field(), x.x.field(), &map))
}

/// The projectivized geodesic field in the two affine charts `u` and
/// `v = 1/u` of the fibre `P¹`.
#[derive(Debug, Clone)]
pub struct RiccatiCharts {
    pub u_chart: VectorField,
    pub v_chart: VectorField,
}

/// `Z − (½u² + ρ)∂u` and `Z + (½ + ρv²)∂v`.
pub fn projectivized_riccati(
    z: &ChartField,
    rho: &Christoffel,
) -> Result<RiccatiCharts, GeodesicError> {
    require(rho, StructureKind::Projective)?;
    let chart = |stem: &str, last: &dyn Fn(&Poly, &Poly) -> Poly| {
        let (base, fiber) = lift_vars(z, &[stem]);
        let vars = all_vars(&base, &fiber);
        let w = Poly::var_index(&vars, base.len());
        let mut comps: Vec<Poly> = z.components().iter().map(|c| c.extend_vars(&fiber)).collect();
        comps.push(last(&w, &rho.symbol.extend_vars(&fiber)));
        VectorField::new(&vars, comps)
    };
    let half = q(1, 2);
    let u_chart = chart("u", &|u, r| -&(&u.pow(2).scale(&half) + r))?;
    let v_chart = chart("v", &|v, r| {
        &Poly::constant(v.vars(), half.clone()) + &(r * &v.pow(2))
    })?;
    Ok(RiccatiCharts { u_chart, v_chart })
}

impl RiccatiCharts {
    /// Exact agreement of the two charts under `v = 1/u`.
    pub fn consistent(&self) -> bool {
        let vars = self.u_chart.vars();
        let n = vars.len() - 1;
        let u = Poly::var_index(vars, n);
        let one = Poly::one(vars);
        let mut images: Vec<Frac> = (0..n).map(|i| Frac::from_poly(Poly::var_index(vars, i))).collect();
        images.push(Frac::new(one.clone(), u.clone()).expect("nonzero"));
        let u_comps: Vec<Frac> = self.u_chart.components().iter().map(|c| Frac::from_poly(c.clone())).collect();
        (0..=n).all(|i| {
            let pushed = images[i].derive_along(&u_comps);
            let target = compose_frac(&self.v_chart.components()[i], &images);
            pushed == target
        })
    }

    /// Symmetric functions of the fibre eigenvalues at the equilibria over a
    /// base point: their sum and product, and whether the two equilibria
    /// collide.
    pub fn fiber_equilibria(&self, point: &[Q]) -> FiberEquilibria {
        let vars = self.u_chart.vars();
        let n = vars.len() - 1;
        let last = &self.u_chart.components()[n];
        let coeff_at = |k: u32| {
            let mut acc = Q::zero();
            for (m, c) in last.terms() {
                if m.0[n] == k {
                    let mut val = c.clone();
                    for (i, &e) in m.0[..n].iter().enumerate() {
                        for _ in 0..e {
                            val *= &point[i];
                        }
                    }
                    acc += val;
                }
            }
            acc
        };
        let (a, b, c) = (coeff_at(2), coeff_at(1), coeff_at(0));
        let four = Q::from_integer(4.into());
        let disc = &b * &b - &four * &a * &c;
        FiberEquilibria {
            sum: Q::zero(),
            product: &four * &a * &c - &b * &b,
            degenerate: disc.is_zero(),
        }
    }
}

/// Pair invariants of the two fibre equilibria: for roots `r` of
/// `f(u) = au² + bu + c` the eigenvalues `f'(r)` have sum `0` and product
/// `4ac − b²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberEquilibria {
    pub sum: Q,
    pub product: Q,
    pub degenerate: bool,
}

/// A declared chart transition `Z_from = g·Z_to`, all data written in a
/// common coordinate system on the overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: String,
    pub to: String,
    pub multiplier: Frac,
}

type Mat2 = [[Frac; 2]; 2];

/// `ψ = [[g, 0], [Z_to(g), 1]]`, mapping `(ζ, ξ)` of chart `from` to those of
/// chart `to`.
pub fn cocycle_matrix(g: &Frac, z_to: &[Frac]) -> Mat2 {
    let zero = g.constant_like(Q::zero());
    let one = g.constant_like(Q::one());
    [[g.clone(), zero], [g.derive_along(z_to), one]]
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn identity_witness(m: &Mat2) -> Option<String> {
    for (i, row) in m.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            let expected = entry.constant_like(if i == j { Q::one() } else { Q::zero() });
            if *entry != expected {
                return Some(format!(
                    "entry ({},{}) = {} instead of {}",
                    i + 1,
                    j + 1,
                    entry,
                    expected
                ));
            }
        }
    }
    None
}

/// Verifies `Z_from = g·Z_to` for each transition, `ψ_ji ψ_ij = I` for each
/// declared pair and `ψ_ki ψ_jk ψ_ij = I` for each declared triangle.
pub fn cocycle_check(
    fields: &BTreeMap<String, Vec<Frac>>,
    transitions: &[Transition],
) -> Result<Vec<IdentityCheck>, GeodesicError> {
    let field = |name: &str| {
        fields
            .get(name)
            .ok_or_else(|| GeodesicError::UnknownChart(name.to_string()))
    };
    let mut mats: BTreeMap<(String, String), Mat2> = BTreeMap::new();
    let mut out = Vec::new();
    for t in transitions {
        let zf = field(&t.from)?;
        let zt = field(&t.to)?;
        let mismatch = zf
            .iter()
            .zip(zt)
            .position(|(a, b)| *a != b.mul(&t.multiplier));
        out.push(IdentityCheck::boolean(
            &format!("Z_{} = g·Z_{}", t.from, t.to),
            mismatch.is_none(),
            || format!("component {} differs", mismatch.unwrap_or(0) + 1),
        ));
        mats.insert(
            (t.from.clone(), t.to.clone()),
            cocycle_matrix(&t.multiplier, zt),
        );
    }
    for ((i, j), m_ij) in &mats {
        if i < j {
            if let Some(m_ji) = mats.get(&(j.clone(), i.clone())) {
                let w = identity_witness(&mat_mul(m_ji, m_ij));
                out.push(IdentityCheck {
                    name: format!("ψ_{j}{i}·ψ_{i}{j} = I"),
                    holds: w.is_none(),
                    witness: w,
                });
            }
        }
    }
    for ((i, j), m_ij) in &mats {
        for ((j2, k), m_jk) in &mats {
            if j2 != j || k == i || k == j {
                continue;
            }
            if !(i < j && i < k) {
                continue;
            }
            if let Some(m_ki) = mats.get(&(k.clone(), i.clone())) {
                let w = identity_witness(&mat_mul(m_ki, &mat_mul(m_jk, m_ij)));
                out.push(IdentityCheck {
                    name: format!("ψ_{k}{i}·ψ_{j}{k}·ψ_{i}{j} = I"),
                    holds: w.is_none(),
                    witness: w,
                });
            }
        }
    }
    Ok(out)
}

/// Standard-chart overlap data of a homogeneous field, written in the
/// coordinates of chart 0: `Z_k = W^(0) / u_k^{d−1}` and the monomial
/// multipliers `g_kl = u_l^{d−1} / u_k^{d−1}` for every ordered pair.
pub fn standard_overlaps(
    zh: &HomogeneousField,
) -> Result<(BTreeMap<String, Vec<Frac>>, Vec<Transition>), GeodesicError> {
    let (w0, _) = zh.to_chart(0)?;
    let cv = w0.vars().to_vec();
    let e = zh.degree().saturating_sub(1);
    let u = |k: usize| {
        if k == 0 {
            Poly::one(&cv)
        } else {
            Poly::var_index(&cv, k - 1).pow(e)
        }
    };
    let name = |k: usize| zh.vars()[k].clone();
    let mut fields = BTreeMap::new();
    for k in 0..zh.len() {
        let comps = w0
            .components()
            .iter()
            .map(|c| Frac::new(c.clone(), u(k)))
            .collect::<Result<Vec<_>, _>>()?;
        fields.insert(name(k), comps);
    }
    let mut transitions = Vec::new();
    for k in 0..zh.len() {
        for l in 0..zh.len() {
            if k != l {
                transitions.push(Transition {
                    from: name(k),
                    to: name(l),
                    multiplier: Frac::new(u(l), u(k))?,
                });
            }
        }
    }
    Ok((fields, transitions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::qi;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(text: &str, v: &[String]) -> Poly {
        parse_poly(text, v).unwrap()
    }

    fn chart(v: &[String], comps: &[&str]) -> ChartField {
        ChartField::new("c", v, comps.iter().map(|c| p(c, v)).collect()).unwrap()
    }

    #[test]
    fn bracket_basics() {
        let v = vars(&["x"]);
        let z = chart(&v, &["1"]);
        let g = build_geodesic_affine(&z, &Christoffel::affine(Poly::zero(&v))).unwrap();
        let hh = lie_bracket(&g.h, &g.h).unwrap();
        assert!(hh.field().is_zero());
        let dx = LiftedField {
            base: v.clone(),
            fiber: vec![],
            field: VectorField::coordinate(&v, 0, Poly::one(&v)),
        };
        let xdx = dx.with_field(VectorField::coordinate(&v, 0, p("x", &v)));
        assert_eq!(lie_bracket(&dx, &xdx).unwrap(), dx);
    }

    #[test]
    fn affine_geodesic_relations() {
        let v = vars(&["x", "y"]);
        let z = chart(&v, &["x^2 - y", "x*y + 1"]);
        for gamma in ["0", "3*x - y^2 + 1/2"] {
            let g = build_geodesic_affine(&z, &Christoffel::affine(p(gamma, &v))).unwrap();
            assert!(g.checks().unwrap().iter().all(|c| c.holds));
        }
        assert_eq!(g_fiber_name(&z), "zeta");
    }

    fn g_fiber_name(z: &ChartField) -> String {
        let g = build_geodesic_affine(z, &Christoffel::affine(Poly::zero(z.vars()))).unwrap();
        g.x.fiber_vars()[0].clone()
    }

    #[test]
    fn fiber_name_avoids_clash() {
        let v = vars(&["zeta"]);
        assert_eq!(g_fiber_name(&chart(&v, &["zeta"])), "zeta1");
    }

    #[test]
    fn projective_geodesic_relations() {
        let v = vars(&["x", "y"]);
        let z = chart(&v, &["y", "x - 2*y^2"]);
        for rho in ["0", "x*y - 7/3"] {
            let g = build_geodesic_projective(&z, &Christoffel::projective(p(rho, &v))).unwrap();
            let checks = g.checks().unwrap();
            assert_eq!(checks.len(), 4);
            assert!(checks.iter().all(|c| c.holds), "{checks:?}");
        }
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let v = vars(&["x"]);
        let z = chart(&v, &["x"]);
        assert!(matches!(
            build_geodesic_affine(&z, &Christoffel::projective(Poly::zero(&v))),
            Err(GeodesicError::Kind { .. })
        ));
    }

    #[test]
    fn gluing_under_multipliers() {
        let v = vars(&["x", "y"]);
        let z = chart(&v, &["x", "x + y^2"]);
        let gamma = p("1 + x*y", &v);
        let g = p("2 + x - y^2", &v);
        assert!(glue_affine(&z, &gamma, &g).unwrap());
        assert!(glue_projective(&z, &gamma, &g).unwrap());
    }

    #[test]
    fn riccati_charts_and_equilibria() {
        let v = vars(&["x"]);
        let z = chart(&v, &["x"]);
        let r = projectivized_riccati(&z, &Christoffel::projective(Poly::constant(&v, q(-1, 2))))
            .unwrap();
        assert!(r.consistent());
        let eq = r.fiber_equilibria(&[qi(0)]);
        assert_eq!(eq.sum, qi(0));
        assert_eq!(eq.product, qi(-1));
        assert!(!eq.degenerate);
        let flat = projectivized_riccati(&z, &Christoffel::projective(p("x", &v))).unwrap();
        assert!(flat.fiber_equilibria(&[qi(0)]).degenerate);
    }

    #[test]
    fn standard_cocycles_and_perturbation() {
        let v = vars(&["x0", "x1", "x2"]);
        let zh = HomogeneousField::new(
            &v,
            vec![p("x0^2", &v), p("x1^2", &v), p("x2^2", &v)],
        )
        .unwrap();
        let (fields, mut transitions) = standard_overlaps(&zh).unwrap();
        let checks = cocycle_check(&fields, &transitions).unwrap();
        assert_eq!(checks.len(), 6 + 3 + 2);
        assert!(checks.iter().all(|c| c.holds));
        let t = &mut transitions[0];
        let bump = t.multiplier.constant_like(qi(1));
        t.multiplier = t.multiplier.add(&bump);
        let checks = cocycle_check(&fields, &transitions).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.holds).collect();
        assert!(!failed.is_empty());
        assert!(failed.iter().any(|c| c.witness.as_deref().unwrap_or("").contains("entry")));
    }
}
