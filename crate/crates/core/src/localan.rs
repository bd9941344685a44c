//! One-variable operator calculus and formal normal-form solvers.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{
    exponents_of_degree,    fmt_q, q, qi, rational_sqrt, AlgebraError, FormWeight, FunctionRing, Laurent,
    MeromorphicForm, Monomial, Poly, Series, Q,
};
use crate::foliation::{affine_to_projective, change_generator_affine};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("critical point at 0: f'(0) = 0")]
    Critical,
    #[error("expected a univariate series")]
    NotUnivariate,
    #[error("non-Fuchsian: pole of order {pole} for a form of weight {weight}")]
    NonFuchsian { pole: u32, weight: u32 },
    #[error("resonant at K={}", fmt_multi(.0))]
    Resonant(Vec<u32>),
    #[error("resonant: θ∈Z₊ (θ = {})", fmt_q(.0))]
    ResonantTheta(Q),
    #[error("quadratic residue {} does not match (1 - θ²)/2 for θ = {}", fmt_q(.found), fmt_q(.theta))]
    ThetaMismatch { theta: Q, found: Q },
    #[error("irrational branch: {} is not a rational square", fmt_q(.0))]
    IrrationalBranch(Q),
    #[error("branch {} does not square to {}", fmt_q(.branch), fmt_q(.target))]
    BranchMismatch { branch: Q, target: Q },
    #[error("symbol vanishes at the singular point")]
    ZeroSymbol,
    #[error("F(0, 0) must vanish")]
    NonzeroForcing,
    #[error("expected {expected} variables, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("bound {0} is below the minimum 4")]
    SmallBound(u32),
    #[error("internal defect: residual {0} does not vanish")]
    Residual(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub fn fmt_multi(k: &[u32]) -> String {
    let parts: Vec<String> = k.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn check_univariate(f: &Series) -> Result<(), LocalError> {
    if f.nvars() != 1 {
        return Err(LocalError::NotUnivariate);
    }
    Ok(())
}

/// `L(f) = f''/f'`.
pub fn affine_distortion(f: &Series) -> Result<Series, LocalError> {
    check_univariate(f)?;
    let d1 = f.derivative();
    if d1.constant_term().is_zero() {
        return Err(LocalError::Critical);
    }
    Ok(d1.derivative().div(&d1)?)
}

/// `{f, z} = f'''/f' − 3/2 (f''/f')²`.
pub fn schwarzian(f: &Series) -> Result<Series, LocalError> {
    check_univariate(f)?;
    let d1 = f.derivative();
    if d1.constant_term().is_zero() {
        return Err(LocalError::Critical);
    }
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let l = d2.div(&d1)?;
    Ok(d3.div(&d1)?.sub(&l.square().scale(&q(3, 2))))
}

/// Schwarzian of a Laurent expansion on a punctured disk.
pub fn schwarzian_laurent(f: &Laurent) -> Result<Laurent, LocalError> {
    let d1 = f.derivative();
    if d1.is_zero() {
        return Err(LocalError::Critical);
    }
    let d2 = d1.derivative();
    let d3 = d2.derivative();
    let l = d2.div(&d1)?;
    Ok(d3.div(&d1)?.sub(&l.mul(&l)?.scale(&q(3, 2)))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Taxonomy {
    Logarithmic,
    Power,
    PowerOrPowerPlusLog,
}

impl fmt::Display for Taxonomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Taxonomy::Logarithmic => write!(f, "logarithmic"),
            Taxonomy::Power => write!(f, "power"),
            Taxonomy::PowerOrPowerPlusLog => write!(f, "power-or-power-plus-log"),
        }
    }
}

fn is_negative_integer(x: &Q) -> bool {
    x.is_integer() && x.is_negative()
}

/// Developing-map type for affine angle `θ`.
pub fn classify_affine(theta: &Q) -> Taxonomy {
    if theta.is_zero() {
        Taxonomy::Logarithmic
    } else if is_negative_integer(theta) {
        Taxonomy::PowerOrPowerPlusLog
    } else {
        Taxonomy::Power
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineAngle {
    pub theta: Q,
    pub class: Taxonomy,
    /// `1/θ` when `θ ≠ 0`.
    pub ramification: Option<Q>,
}

/// Normalized angle `θ = Res(α) + 1` of a Fuchsian one-form.
pub fn affine_angle(alpha: &MeromorphicForm) -> Result<AffineAngle, LocalError> {
    if alpha.weight != FormWeight::One {
        return Err(AlgebraError::WeightMismatch {
            expected: 1,
            found: alpha.weight.value(),
        }
        .into());
    }
    if !alpha.is_fuchsian() {
        return Err(LocalError::NonFuchsian {
            pole: alpha.coeff.pole_order(),
            weight: 1,
        });
    }
    let theta = alpha.residue()? + Q::one();
    let ramification = (!theta.is_zero()).then(|| Q::one() / &theta);
    Ok(AffineAngle {
        class: classify_affine(&theta),
        theta,
        ramification,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveAngle {
    pub theta_squared: Q,
    /// Nonnegative root when `θ²` is a rational square; `±θ` are both valid.
    pub theta: Option<Q>,
    pub class: Taxonomy,
}

/// `θ² = 1 − 2Q(β)` for a Fuchsian quadratic differential.
pub fn projective_angle(beta: &MeromorphicForm) -> Result<ProjectiveAngle, LocalError> {
    if beta.weight != FormWeight::Two {
        return Err(AlgebraError::WeightMismatch {
            expected: 2,
            found: beta.weight.value(),
        }
        .into());
    }
    if !beta.is_fuchsian() {
        return Err(LocalError::NonFuchsian {
            pole: beta.coeff.pole_order(),
            weight: 2,
        });
    }
    let theta_squared = Q::one() - beta.quadratic_residue()? * qi(2);
    let theta = rational_sqrt(&theta_squared);
    let class = match &theta {
        _ if theta_squared.is_zero() => Taxonomy::Logarithmic,
        Some(t) if t.is_integer() => Taxonomy::PowerOrPowerPlusLog,
        _ => Taxonomy::Power,
    };
    Ok(ProjectiveAngle {
        theta_squared,
        theta,
        class,
    })
}

/// A formal solution with the multi-indices whose coefficient was free
/// (vanishing denominator and vanishing right-hand side); those are set to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub series: Series,
    pub free: Vec<Vec<u32>>,
}

fn ensure_zero(residual: &Series) -> Result<(), LocalError> {
    if residual.is_zero() {
        Ok(())
    } else {
        Err(LocalError::Residual(residual.to_string()))
    }
}

/// Solves `z u' = z² S + u + ½u²` with `u(0) = θ − 1`. The affine symbol is
/// `u/z`.
pub fn riccati_projective_to_affine(
    s: &MeromorphicForm,
    theta: &Q,
    order: i64,
) -> Result<Solution, LocalError> {
    if s.weight != FormWeight::Two {
        return Err(AlgebraError::WeightMismatch {
            expected: 2,
            found: s.weight.value(),
        }
        .into());
    }
    if !s.is_fuchsian() {
        return Err(LocalError::NonFuchsian {
            pole: s.coeff.pole_order(),
            weight: 2,
        });
    }
    let residue = s.quadratic_residue()?;
    let expected = (Q::one() - theta * theta) / qi(2);
    if residue != expected {
        return Err(LocalError::ThetaMismatch {
            theta: theta.clone(),
            found: residue,
        });
    }
    let z2s = s.coeff.shift(2);
    let order = order.min(z2s.order());
    let half = q(1, 2);
    let mut u: Vec<Q> = vec![theta - Q::one()];
    let mut free = Vec::new();
    for k in 1..=order.max(0) {
        let mut rhs = z2s.coeff(k);
        for i in 1..k {
            rhs += &half * &u[i as usize] * &u[(k - i) as usize];
        }
        let den = qi(k) - theta;
        if den.is_zero() {
            if !rhs.is_zero() {
                return Err(LocalError::ResonantTheta(theta.clone()));
            }
            free.push(vec![k as u32]);
            u.push(Q::zero());
        } else {
            u.push(rhs / den);
        }
    }
    let var = s.coeff.var();
    let series = Series::univariate(var, &u, order);
    let vars = [var.to_string()];
    let z = Series::var_index(&vars, 0, order);
    let forcing = z2s.to_series().expect("Fuchsian").truncate(order);
    let residual = z
        .mul(&series.derivative())
        .sub(&forcing)
        .sub(&series)
        .sub(&series.square().scale(&half))
        .truncate(order);
    ensure_zero(&residual)?;
    Ok(Solution { series, free })
}

fn pairing(k: &[u32], lambda: &[Q]) -> Q {
    k.iter()
        .zip(lambda)
        .map(|(&e, l)| l * qi(e as i64))
        .fold(Q::zero(), |a, b| a + b)
}

/// Formal solution of `Zf = F(f, z)` for `Z = Σ λ_i z_i ∂_i`, `F(0,0) = 0`,
/// with `f(0) = 0`. The first variable of `F` stands for `f`.
pub fn briot_bouquet_solve(
    lambda: &[Q],
    forcing: &Series,
    order: i64,
) -> Result<Solution, LocalError> {
    let n = lambda.len();
    if forcing.nvars() != n + 1 {
        return Err(LocalError::Arity {
            expected: n + 1,
            found: forcing.nvars(),
        });
    }
    if !forcing.constant_term().is_zero() {
        return Err(LocalError::NonzeroForcing);
    }
    let order = order.min(forcing.order());
    let mut mu_exps = vec![0; n + 1];
    mu_exps[0] = 1;
    let mu = forcing.coeff(&mu_exps);
    let zvars = forcing.vars()[1..].to_vec();
    let z: Vec<Series> = (0..n).map(|i| Series::var_index(&zvars, i, order)).collect();

    let mut f = Poly::zero(&zvars);
    let mut free = Vec::new();
    for d in 1..=order.max(0) as u32 {
        let mut images = vec![Series::from_poly(&f, d as i64)];
        images.extend(z.iter().map(|s| s.truncate(d as i64)));
        let rhs = forcing.substitute(&images).homogeneous_component(d);
        for exps in exponents_of_degree(n, d) {
            let num = rhs.coeff(&exps);
            let den = pairing(&exps, lambda) - &mu;
            if den.is_zero() {
                if !num.is_zero() {
                    return Err(LocalError::Resonant(exps));
                }
                free.push(exps);
            } else if !num.is_zero() {
                f = &f + &Poly::monomial(&zvars, exps, num / den);
            }
        }
    }
    let series = Series::from_poly(&f, order);
    let field: Vec<Series> = z
        .iter()
        .zip(lambda)
        .map(|(zi, l)| zi.scale(l))
        .collect();
    let mut images = vec![series.clone()];
    images.extend(z.iter().cloned());
    let residual = series
        .derive_along(&field)
        .sub(&forcing.substitute(&images))
        .truncate(order);
    ensure_zero(&residual)?;
    Ok(Solution { series, free })
}

/// Builds `F(f, z)` in the variables `(f, z…)` from a polynomial in `f` with
/// series coefficients: `coeffs[j]` multiplies `f^j`.
fn forcing_from(coeffs: &[Series]) -> Series {
    let zvars = coeffs[0].vars();
    let mut vars = vec![fresh_name(zvars)];
    vars.extend(zvars.iter().cloned());
    let order = coeffs.iter().map(Series::order).min().unwrap_or(0);
    let terms = coeffs.iter().enumerate().flat_map(|(j, c)| {
        c.terms().map(move |(m, v)| {
            let mut e = vec![j as u32];
            e.extend_from_slice(m.exps());
            (Monomial(e), v.clone())
        })
    });
    Series::from_terms(&vars, order, terms.collect::<Vec<_>>())
}

fn fresh_name(vars: &[String]) -> String {
    let mut name = "f".to_string();
    while vars.contains(&name) {
        name.push('f');
    }
    name
}

fn linear_field(lambda: &[Q], vars: &[String], order: i64) -> Vec<Series> {
    lambda
        .iter()
        .enumerate()
        .map(|(i, l)| Series::var_index(vars, i, order).scale(l))
        .collect()
}

/// Finds `f` with `f(0) = 1` and `Zf = γ(0) − fγ`, so that `fZ` has the
/// constant affine symbol `γ(0)`.
pub fn normalize_affine(lambda: &[Q], gamma: &Series, order: i64) -> Result<Solution, LocalError> {
    if gamma.nvars() != lambda.len() {
        return Err(LocalError::Arity {
            expected: lambda.len(),
            found: gamma.nvars(),
        });
    }
    let g0 = gamma.constant_term();
    if g0.is_zero() {
        return Err(LocalError::ZeroSymbol);
    }
    let order = order.min(gamma.order());
    let gamma = gamma.truncate(order);
    // f = 1 + g:  Zg = −(γ − γ₀) − γ g
    let tail = gamma.add_const(&-g0.clone());
    let forcing = forcing_from(&[tail.neg(), gamma.neg()]);
    let sol = briot_bouquet_solve(lambda, &forcing, order)?;
    let f = sol.series.add_const(&Q::one());
    let z = linear_field(lambda, gamma.vars(), order);
    let symbol = change_generator_affine(&gamma, &f, &z);
    ensure_zero(&symbol.add_const(&-g0).truncate(order))?;
    Ok(Solution {
        series: f,
        free: sol.free,
    })
}

/// Both roots of `γ₀² = −2ρ(0)` when rational.
pub fn projective_branches(rho0: &Q) -> Result<[Q; 2], LocalError> {
    let target = -rho0 * qi(2);
    let r = rational_sqrt(&target).ok_or(LocalError::IrrationalBranch(target))?;
    Ok([r.clone(), -r])
}

/// Finds `γ` with `γ(0) = branch` and `Zγ = ½γ² + ρ`, an affine structure in
/// the class of the projective symbol `ρ`.
pub fn normalize_projective(
    lambda: &[Q],
    rho: &Series,
    branch: &Q,
    order: i64,
) -> Result<Solution, LocalError> {
    if rho.nvars() != lambda.len() {
        return Err(LocalError::Arity {
            expected: lambda.len(),
            found: rho.nvars(),
        });
    }
    let rho0 = rho.constant_term();
    if rho0.is_zero() {
        return Err(LocalError::ZeroSymbol);
    }
    let roots = projective_branches(&rho0)?;
    if !roots.contains(branch) {
        return Err(LocalError::BranchMismatch {
            branch: branch.clone(),
            target: -rho0 * qi(2),
        });
    }
    let order = order.min(rho.order());
    let rho = rho.truncate(order);
    // γ = γ₀ + g:  Zg = (ρ − ρ₀) + γ₀ g + ½ g²
    let vars = rho.vars().to_vec();
    let forcing = forcing_from(&[
        rho.add_const(&-rho0),
        Series::constant(&vars, branch.clone(), order),
        Series::constant(&vars, q(1, 2), order),
    ]);
    let sol = briot_bouquet_solve(lambda, &forcing, order)?;
    let gamma = sol.series.add_const(branch);
    let z = linear_field(lambda, &vars, order);
    let back = affine_to_projective(&gamma, &z);
    ensure_zero(&back.sub(&rho).truncate(order))?;
    Ok(Solution {
        series: gamma,
        free: sol.free,
    })
}

/// Row of the small-divisor table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaEntry {
    pub m: u32,
    pub omega: Q,
    pub attained_by: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrjunoDiagnostic {
    pub lambda: Vec<Q>,
    pub mu: Q,
    pub table: Vec<OmegaEntry>,
    /// Partial sums of `Σ 2^{−ν} log ω′(2^{ν+1})`; `None` once a term is `log 0`.
    pub partial_sums: Vec<Option<f64>>,
    pub negated_sums: Vec<Option<f64>>,
    pub resonant: bool,
    pub verdict: &'static str,
}

pub const BRJUNO_VERDICT: &str = "inconclusive by construction";

/// `ω′(m) = min_{2≤|K|≤m} |⟨K,λ⟩ − μ|` for `m ≤ m_max`, with minimizers.
pub fn brjuno_diagnostic(lambda: &[Q], mu: &Q, m_max: u32) -> Result<BrjunoDiagnostic, LocalError> {
    if m_max < 4 {
        return Err(LocalError::SmallBound(m_max));
    }
    if lambda.is_empty() {
        return Err(LocalError::Arity {
            expected: 1,
            found: 0,
        });
    }
    let mut table: Vec<OmegaEntry> = Vec::new();
    let mut best: Option<(Q, Vec<Vec<u32>>)> = None;
    for m in 2..=m_max {
        for k in exponents_of_degree(lambda.len(), m) {
            let v = (pairing(&k, lambda) - mu).abs();
            best = match best {
                None => Some((v, vec![k])),
                Some((b, mut ks)) => {
                    if v < b {
                        Some((v, vec![k]))
                    } else {
                        if v == b {
                            ks.push(k);
                        }
                        Some((b, ks))
                    }
                }
            };
        }
        let (omega, attained_by) = best.clone().expect("nonempty range");
        table.push(OmegaEntry {
            m,
            omega,
            attained_by,
        });
    }
    let mut partial_sums = Vec::new();
    let mut acc = Some(0.0f64);
    let mut nu = 0u32;
    while (1u64 << (nu + 1)) <= m_max as u64 {
        let m = 1u32 << (nu + 1);
        let omega = &table[(m - 2) as usize].omega;
        acc = match (acc, omega.is_zero()) {
            (Some(a), false) => {
                let w = omega.to_f64().unwrap_or(f64::NAN);
                Some(a + w.ln() / 2f64.powi(nu as i32))
            }
            _ => None,
        };
        partial_sums.push(acc);
        nu += 1;
    }
    let negated_sums = partial_sums.iter().map(|s| s.map(|v| -v)).collect();
    let resonant = table.iter().any(|e| e.omega.is_zero());
    Ok(BrjunoDiagnostic {
        lambda: lambda.to_vec(),
        mu: mu.clone(),
        table,
        partial_sums,
        negated_sums,
        resonant,
        verdict: BRJUNO_VERDICT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DEFAULT_ORDER;

    fn exp_series(order: i64) -> Series {
        let mut c = vec![Q::one()];
        for k in 1..=order {
            let prev = c[(k - 1) as usize].clone();
            c.push(prev / qi(k));
        }
        Series::univariate("z", &c, order)
    }

    #[test]
    fn distortion_of_affine_and_exp() {
        let f = Series::univariate("z", &[qi(3), qi(2)], DEFAULT_ORDER);
        assert!(affine_distortion(&f).unwrap().is_zero());
        let e = affine_distortion(&exp_series(DEFAULT_ORDER)).unwrap();
        assert_eq!(e.order(), DEFAULT_ORDER - 2);
        assert!(e.agrees(&Series::one(&["z".to_string()], DEFAULT_ORDER)));
        let crit = Series::univariate("z", &[qi(0), qi(0), qi(1)], 6);
        assert_eq!(affine_distortion(&crit), Err(LocalError::Critical));
    }

    #[test]
    fn schwarzian_of_square_on_punctured_disk() {
        let f = Laurent::from_coeffs("z", 10, [(2, qi(1))]);
        let s = schwarzian_laurent(&f).unwrap();
        assert_eq!(s.coeff(-2), q(-3, 2));
        assert!(s.coeffs().all(|(k, c)| k == -2 || c.is_zero()));
    }

    #[test]
    fn affine_angles() {
        let log = MeromorphicForm::new(FormWeight::One, Laurent::from_coeffs("z", 4, [(-1, qi(-1))]));
        let a = affine_angle(&log).unwrap();
        assert_eq!(a.theta, qi(0));
        assert_eq!(a.class, Taxonomy::Logarithmic);
        assert_eq!(a.ramification, None);
        let half = MeromorphicForm::new(FormWeight::One, Laurent::from_coeffs("z", 4, [(-1, q(-1, 2))]));
        let a = affine_angle(&half).unwrap();
        assert_eq!(a.class, Taxonomy::Power);
        assert_eq!(a.ramification, Some(qi(2)));
        let neg = MeromorphicForm::new(FormWeight::One, Laurent::from_coeffs("z", 4, [(-1, qi(-2))]));
        assert_eq!(affine_angle(&neg).unwrap().class, Taxonomy::PowerOrPowerPlusLog);
        let bad = MeromorphicForm::new(FormWeight::One, Laurent::from_coeffs("z", 4, [(-2, qi(1))]));
        assert!(matches!(affine_angle(&bad), Err(LocalError::NonFuchsian { .. })));
    }

    #[test]
    fn projective_angles() {
        let zero = MeromorphicForm::new(FormWeight::Two, Laurent::zero("z", 4));
        assert_eq!(projective_angle(&zero).unwrap().theta_squared, qi(1));
        let sq = MeromorphicForm::new(FormWeight::Two, Laurent::from_coeffs("z", 4, [(-2, q(-3, 2))]));
        let a = projective_angle(&sq).unwrap();
        assert_eq!(a.theta_squared, qi(4));
        assert_eq!(a.theta, Some(qi(2)));
        let log = MeromorphicForm::new(FormWeight::Two, Laurent::from_coeffs("z", 4, [(-2, q(1, 2))]));
        let a = projective_angle(&log).unwrap();
        assert_eq!(a.theta_squared, qi(0));
        assert_eq!(a.class, Taxonomy::Logarithmic);
    }

    #[test]
    fn riccati_constant_and_resonant() {
        let theta = q(1, 3);
        let s = MeromorphicForm::new(
            FormWeight::Two,
            Laurent::from_coeffs("z", 10, [(-2, (Q::one() - &theta * &theta) / qi(2))]),
        );
        let u = riccati_projective_to_affine(&s, &theta, 10).unwrap();
        assert_eq!(u.series, Series::univariate("z", &[&theta - Q::one()], 10));

        let zero = MeromorphicForm::new(FormWeight::Two, Laurent::zero("z", 10));
        let u = riccati_projective_to_affine(&zero, &qi(1), 10).unwrap();
        assert!(u.series.is_zero());
        assert_eq!(u.free, vec![vec![1]]);

        let generic = MeromorphicForm::new(
            FormWeight::Two,
            Laurent::from_coeffs("z", 10, [(-2, q(-3, 2)), (0, qi(1))]),
        );
        let e = riccati_projective_to_affine(&generic, &qi(2), 10).unwrap_err();
        assert_eq!(e, LocalError::ResonantTheta(qi(2)));
        assert!(e.to_string().starts_with("resonant: θ∈Z₊"));
    }

    #[test]
    fn briot_bouquet_examples() {
        let vars: Vec<String> = vec!["f".into(), "z".into()];
        let trivial = Series::from_terms(&vars, 8, [(Monomial(vec![1, 0]), qi(3))]);
        assert!(briot_bouquet_solve(&[qi(1)], &trivial, 8).unwrap().series.is_zero());

        let quad = Series::from_terms(
            &vars,
            8,
            [(Monomial(vec![2, 0]), qi(1)), (Monomial(vec![0, 1]), qi(1))],
        );
        let sol = briot_bouquet_solve(&[qi(1)], &quad, 8).unwrap();
        assert_eq!(sol.series.coeff1(1), qi(1));
        assert_eq!(sol.series.coeff1(2), q(1, 2));

        let res = Series::from_terms(
            &vars,
            8,
            [(Monomial(vec![1, 0]), qi(2)), (Monomial(vec![0, 2]), qi(1))],
        );
        let e = briot_bouquet_solve(&[qi(1)], &res, 8).unwrap_err();
        assert_eq!(e.to_string(), "resonant at K=(2)");
    }

    #[test]
    fn affine_normal_form() {
        let vars = vec!["z".to_string()];
        let c = Series::constant(&vars, qi(5), 8);
        let f = normalize_affine(&[qi(1)], &c, 8).unwrap();
        assert_eq!(f.series, Series::one(&vars, 8));
        let g = Series::univariate("z", &[qi(1), qi(1)], 8);
        let f = normalize_affine(&[qi(1)], &g, 8).unwrap();
        assert_eq!(f.series.constant_term(), qi(1));
        // −γ(0) = ⟨K,λ⟩ at K = (2)
        let r = Series::univariate("z", &[qi(-2), qi(0), qi(1)], 8);
        assert!(matches!(
            normalize_affine(&[qi(1)], &r, 8),
            Err(LocalError::Resonant(k)) if k == vec![2]
        ));
    }

    #[test]
    fn projective_normal_form() {
        let vars = vec!["z".to_string()];
        let c = Series::constant(&vars, q(-9, 2), 8);
        let g = normalize_projective(&[qi(1)], &c, &qi(3), 8).unwrap();
        assert_eq!(g.series, Series::constant(&vars, qi(3), 8));
        let rho = Series::univariate("z", &[q(-1, 2), qi(1)], 8);
        // the branch γ₀ = 1 meets ⟨K,λ⟩ = γ₀ at |K| = 1
        assert_eq!(
            normalize_projective(&[qi(1)], &rho, &qi(1), 8),
            Err(LocalError::Resonant(vec![1]))
        );
        let g = normalize_projective(&[qi(1)], &rho, &qi(-1), 8).unwrap();
        assert_eq!(g.series.constant_term(), qi(-1));
        assert_eq!(g.series.coeff1(1), q(1, 2));
        let res = Series::univariate("z", &[qi(-2), qi(0), qi(1)], 8);
        assert!(matches!(
            normalize_projective(&[qi(1)], &res, &qi(2), 8),
            Err(LocalError::Resonant(_))
        ));
        let irr = Series::constant(&vars, qi(-1), 8);
        assert!(matches!(
            normalize_projective(&[qi(1)], &irr, &qi(1), 8),
            Err(LocalError::IrrationalBranch(_))
        ));
    }

    #[test]
    fn brjuno_tables() {
        let d = brjuno_diagnostic(&[qi(1), qi(1)], &q(-1, 2), 8).unwrap();
        assert!(d.table.iter().all(|e| e.omega == q(5, 2)));
        assert!(!d.resonant);
        assert_eq!(d.verdict, BRJUNO_VERDICT);
        let d = brjuno_diagnostic(&[qi(1), qi(-1)], &q(1, 3), 8).unwrap();
        assert!(d.table.windows(2).all(|w| w[1].omega <= w[0].omega));
        assert_eq!(d.table[0].omega, q(1, 3));
        let d = brjuno_diagnostic(&[qi(1)], &qi(3), 6).unwrap();
        assert!(d.resonant);
        assert_eq!(d.table[0].omega, qi(1));
        assert_eq!(d.table[1].omega, qi(0));
        assert!(brjuno_diagnostic(&[qi(1)], &qi(0), 3).is_err());
    }
}
