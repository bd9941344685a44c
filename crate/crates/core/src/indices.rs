//! Per-singularity index contributions and exact verification of the affine,
//! projective and Baum–Bott index theorems.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{q_pow, qi, Q};
use crate::chern::{
    rhs_affine, rhs_baum_bott, rhs_projective, BuiltinRing, ChernError, RingElement,
    RingPresentation,
};
use crate::foliation::{
    affine_to_projective, singular_record, Christoffel, FoliationError, HomogeneousField,
    SingularPointRecord, StructureKind,
};
use crate::symfun::{SymError, SymPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("inadmissible record: {0}")]
    Inadmissible(FoliationError),
    #[error("expected a record of {expected} kind, found {found}")]
    Kind {
        expected: StructureKind,
        found: StructureKind,
    },
    #[error("record dimension {found} does not match manifold dimension {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("point {0} is not covered by any chart")]
    Uncovered(String),
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
}

fn nondegenerate(rec: &SingularPointRecord) -> Result<(), IndexError> {
    if !rec.nondegenerate {
        return Err(IndexError::Inadmissible(FoliationError::Degenerate(
            rec.point_text(),
        )));
    }
    Ok(())
}

fn admissible(rec: &SingularPointRecord, kind: StructureKind) -> Result<(), IndexError> {
    if rec.kind != kind {
        return Err(IndexError::Kind {
            expected: kind,
            found: rec.kind,
        });
    }
    match rec.inadmissible_reason() {
        Some(e) => Err(IndexError::Inadmissible(e)),
        None => Ok(()),
    }
}

/// `(−1)ⁿ γ(p)ⁿ / det A_p`.
pub fn affine_contribution(rec: &SingularPointRecord) -> Result<Q, IndexError> {
    admissible(rec, StructureKind::Affine)?;
    let n = rec.dim();
    let v = q_pow(&rec.symbol_value, n as u32) / &rec.det;
    Ok(if n % 2 == 0 { v } else { -v })
}

/// `Σ_j (−2ρ(p))^j φ̂_{n−2j}(λ) / det A_p`, evaluated from the characteristic
/// coefficients.
pub fn projective_contribution(rec: &SingularPointRecord, phi: &SymPoly) -> Result<Q, IndexError> {
    admissible(rec, StructureKind::Projective)?;
    let n = rec.dim();
    check_phi(phi, n + 1)?;
    let hats = phi.hat_decompose()?;
    let s = -&rec.symbol_value * qi(2);
    let mut total = Q::zero();
    let mut j = 0;
    while 2 * j <= n {
        let hat = hats.hat(n - 2 * j);
        if !hat.is_zero() {
            total += q_pow(&s, j as u32) * hat.eval_from_charpoly(&rec.sigmas)?;
        }
        j += 1;
    }
    Ok(total / &rec.det)
}

/// `φ(A_p) / det A_p`.
pub fn baum_bott_contribution(rec: &SingularPointRecord, phi: &SymPoly) -> Result<Q, IndexError> {
    nondegenerate(rec)?;
    check_phi(phi, rec.dim())?;
    Ok(phi.eval_from_charpoly(&rec.sigmas)? / &rec.det)
}

/// `b₀ⁿ / det A_p`.
pub fn lehmann_residue(b0: &Q, rec: &SingularPointRecord) -> Result<Q, IndexError> {
    nondegenerate(rec)?;
    Ok(q_pow(b0, rec.dim() as u32) / &rec.det)
}

fn check_phi(phi: &SymPoly, degree: usize) -> Result<(), IndexError> {
    if phi.arity() != degree {
        return Err(SymError::WrongArity {
            expected: degree,
            found: phi.arity(),
        }
        .into());
    }
    if !phi.is_zero() && phi.degree() as usize != degree {
        return Err(SymError::WrongDegree {
            expected: degree as u32,
            found: phi.degree(),
        }
        .into());
    }
    Ok(())
}

/// A compact model manifold with the Chern data of the foliation on it.
#[derive(Debug, Clone)]
pub struct ModelManifold {
    pub label: String,
    pub ring: Arc<RingPresentation>,
    pub c_tm: RingElement,
    pub c1_tf: RingElement,
    pub convention: String,
}

impl ModelManifold {
    /// `c1(T_F)` given as text in the generators of the built-in ring.
    pub fn new(builtin: BuiltinRing, c1_tf: &str) -> Result<Self, IndexError> {
        let ring = builtin.ring();
        let c1_tf = RingElement::parse(&ring, c1_tf)?;
        Ok(ModelManifold {
            label: ring.label().to_string(),
            c_tm: builtin.tangent_class(&ring),
            c1_tf,
            ring,
            convention: builtin.convention().to_string(),
        })
    }

    /// `Pⁿ` with a foliation of degree `d`: `c1(T_F) = (1 − d)h`.
    pub fn projective_space(n: u32, d: u32) -> Self {
        Self::new(
            BuiltinRing::ProjectiveSpace { n },
            &format!("{}*h", 1 - d as i64),
        )
        .expect("built-in data")
    }

    pub fn dim(&self) -> usize {
        self.ring.dim() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Affine,
    Projective,
    BaumBott,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::Affine => write!(f, "affine"),
            Theorem::Projective => write!(f, "projective"),
            Theorem::BaumBott => write!(f, "baum-bott"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Match => write!(f, "match"),
            Verdict::Mismatch => write!(f, "mismatch"),
            Verdict::NotApplicable => write!(f, "not-applicable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Contribution {
    pub chart: String,
    #[serde(with = "crate::algebra::qser::vec")]
    pub point: Vec<Q>,
    #[serde(with = "crate::algebra::qser::vec")]
    pub sigmas: Vec<Q>,
    #[serde(with = "crate::algebra::qser")]
    pub det: Q,
    #[serde(with = "crate::algebra::qser")]
    pub symbol_value: Q,
    #[serde(with = "crate::algebra::qser::opt")]
    pub contribution: Option<Q>,
    pub admissible: bool,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub theorem: Theorem,
    pub manifold: String,
    pub convention: String,
    pub contributions: Vec<Contribution>,
    #[serde(with = "crate::algebra::qser")]
    pub lhs: Q,
    #[serde(with = "crate::algebra::qser")]
    pub rhs: Q,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

const VANISHING_SYMBOL_NOTE: &str = "points with vanishing Christoffel symbol would contribute a \
     Baum-Bott index for the top hat component; that extension is not implemented and such \
     points are rejected";

fn assemble(
    theorem: Theorem,
    model: &ModelManifold,
    records: &[SingularPointRecord],
    rhs: Q,
    contribution: impl Fn(&SingularPointRecord) -> Result<Q, IndexError>,
) -> Result<IndexReport, IndexError> {
    let mut contributions = Vec::with_capacity(records.len());
    let mut lhs = Q::zero();
    let mut all_ok = true;
    let mut notes = Vec::new();
    for rec in records {
        if rec.dim() != model.dim() {
            return Err(IndexError::Dimension {
                expected: model.dim(),
                found: rec.dim(),
            });
        }
        let (value, reason) = match contribution(rec) {
            Ok(v) => (Some(v), None),
            Err(IndexError::Inadmissible(e)) => {
                if matches!(e, FoliationError::LogType(_))
                    && !notes.iter().any(|n| n == VANISHING_SYMBOL_NOTE)
                {
                    notes.push(VANISHING_SYMBOL_NOTE.to_string());
                }
                (None, Some(e.to_string()))
            }
            Err(e) => return Err(e),
        };
        if let Some(v) = &value {
            lhs += v;
        } else {
            all_ok = false;
        }
        contributions.push(Contribution {
            chart: rec.chart.clone(),
            point: rec.point.clone(),
            sigmas: rec.sigmas.clone(),
            det: rec.det.clone(),
            symbol_value: rec.symbol_value.clone(),
            admissible: value.is_some(),
            contribution: value,
            reason,
        });
    }
    let verdict = if !all_ok {
        Verdict::NotApplicable
    } else if lhs == rhs {
        Verdict::Match
    } else {
        Verdict::Mismatch
    };
    Ok(IndexReport {
        theorem,
        manifold: model.label.clone(),
        convention: model.convention.clone(),
        contributions,
        lhs,
        rhs,
        verdict,
        notes,
    })
}

/// `(−1)ⁿ Σ γⁿ/det` against `∫ c1(T_F)ⁿ`.
pub fn verify_affine_index(
    model: &ModelManifold,
    records: &[SingularPointRecord],
) -> Result<IndexReport, IndexError> {
    let rhs = rhs_affine(&model.c1_tf)?;
    assemble(Theorem::Affine, model, records, rhs, affine_contribution)
}

/// Projective contributions against `Σ_j ∫ c1(T_F)^{2j} φ̂_{n−2j}(TM − T_F)`.
pub fn verify_projective_index(
    model: &ModelManifold,
    records: &[SingularPointRecord],
    phi: &SymPoly,
) -> Result<IndexReport, IndexError> {
    let rhs = rhs_projective(&model.c_tm, &model.c1_tf, phi)?;
    assemble(Theorem::Projective, model, records, rhs, |r| {
        projective_contribution(r, phi)
    })
}

/// `Σ φ(A)/det A` against `∫ φ(TM − T_F)`.
pub fn verify_baum_bott(
    model: &ModelManifold,
    records: &[SingularPointRecord],
    phi: &SymPoly,
) -> Result<IndexReport, IndexError> {
    let rhs = rhs_baum_bott(&model.c_tm, &model.c1_tf, phi)?;
    assemble(Theorem::BaumBott, model, records, rhs, |r| {
        baum_bott_contribution(r, phi)
    })
}

/// Singular records of the structure induced by a homogeneous field, one per
/// homogeneous point, each taken in the first chart `x_k ≠ 0`.
pub fn homogeneous_records(
    zh: &HomogeneousField,
    kind: StructureKind,
    points: &[Vec<Q>],
) -> Result<Vec<SingularPointRecord>, IndexError> {
    let mut out = Vec::with_capacity(points.len());
    for x in points {
        let k = x
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| IndexError::Uncovered(crate::foliation::fmt_point(x)))?;
        let scaled: Vec<Q> = x.iter().map(|c| c / &x[k]).collect();
        let (w, gamma) = zh.to_chart(k)?;
        let symbol = match kind {
            StructureKind::Affine => Christoffel::affine(gamma),
            StructureKind::Projective => {
                Christoffel::projective(affine_to_projective(&gamma, w.components()))
            }
        };
        let p = zh.chart_point(k, &scaled).expect("x_k is nonzero");
        out.push(singular_record(&w, &symbol, &p)?);
    }
    Ok(out)
}

/// All points of `{0, 1}^{n+1} \ {0}` up to scaling, ordered so that the
/// first nonzero coordinate is 1.
pub fn binary_points(len: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << len) {
        let pt: Vec<Q> = (0..len)
            .map(|i| {
                if mask & (1 << (len - 1 - i)) != 0 {
                    Q::one()
                } else {
                    Q::zero()
                }
            })
            .collect();
        out.push(pt);
    }
    out.sort();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::{q, Poly};
    use crate::foliation::{singular_record, ChartField};
    use crate::symfun::{elementary, power_sum};

    fn record(diag: &[i64], symbol: Q, kind: StructureKind) -> SingularPointRecord {
        let n = diag.len();
        let v: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
        let comps = diag
            .iter()
            .enumerate()
            .map(|(i, &l)| Poly::var_index(&v, i).scale(&qi(l)))
            .collect();
        let w = ChartField::new("c", &v, comps).unwrap();
        let c = Christoffel {
            kind,
            symbol: Poly::constant(&v, symbol),
        };
        singular_record(&w, &c, &vec![Q::zero(); n]).unwrap()
    }

    fn sym(p: Poly) -> SymPoly {
        SymPoly::new(p).unwrap()
    }

    #[test]
    fn affine_examples() {
        let r = record(&[1], qi(1), StructureKind::Affine);
        assert_eq!(affine_contribution(&r).unwrap(), qi(-1));
        let r = record(&[1, 2], qi(3), StructureKind::Affine);
        assert_eq!(affine_contribution(&r).unwrap(), q(9, 2));
        assert_eq!(
            lehmann_residue(&-r.symbol_value.clone(), &r).unwrap(),
            affine_contribution(&r).unwrap()
        );
    }

    #[test]
    fn lehmann_examples() {
        let r = record(&[4], qi(1), StructureKind::Affine);
        assert_eq!(lehmann_residue(&qi(2), &r).unwrap(), q(1, 2));
        assert_eq!(lehmann_residue(&qi(0), &r).unwrap(), qi(0));
    }

    #[test]
    fn projective_examples() {
        let r = record(&[1, 2], q(-1, 2), StructureKind::Projective);
        let phi = sym(power_sum(3, 3));
        assert_eq!(projective_contribution(&r, &phi).unwrap(), q(1, 2));
        // φ = x1·x2·x3 has φ̂_2 = x1·x2 and φ̂_0 = 0
        let top = sym(elementary(3, 3));
        assert_eq!(projective_contribution(&r, &top).unwrap(), qi(1));
    }

    #[test]
    fn even_projective_agrees_with_affine() {
        for (diag, g) in [(vec![1, 2], qi(3)), (vec![-1, 5], q(2, 7))] {
            let ra = record(&diag, g.clone(), StructureKind::Affine);
            let rp = record(&diag, -&g * &g / qi(2), StructureKind::Projective);
            let phi = sym(power_sum(3, 3));
            assert_eq!(
                affine_contribution(&ra).unwrap(),
                projective_contribution(&rp, &phi).unwrap()
            );
        }
    }

    #[test]
    fn baum_bott_examples() {
        let r = record(&[1, 2], qi(1), StructureKind::Affine);
        assert_eq!(
            baum_bott_contribution(&r, &sym(power_sum(2, 2))).unwrap(),
            q(5, 2)
        );
        assert_eq!(
            baum_bott_contribution(&r, &sym(elementary(2, 2))).unwrap(),
            qi(1)
        );
        assert!(matches!(
            baum_bott_contribution(&r, &sym(power_sum(2, 1))),
            Err(IndexError::Sym(SymError::WrongDegree { .. }))
        ));
    }

    #[test]
    fn inadmissible_records_are_rejected() {
        let r = record(&[1, 2], qi(0), StructureKind::Affine);
        assert!(matches!(
            affine_contribution(&r),
            Err(IndexError::Inadmissible(FoliationError::LogType(_)))
        ));
        let model = ModelManifold::projective_space(2, 2);
        let rep = verify_affine_index(&model, &[r]).unwrap();
        assert_eq!(rep.verdict, Verdict::NotApplicable);
        assert_eq!(rep.notes.len(), 1);
    }

    fn quadratic_p2() -> HomogeneousField {
        let v: Vec<String> = (0..3).map(|i| format!("x{i}")).collect();
        HomogeneousField::new(
            &v,
            vec![
                parse_poly("x0^2", &v).unwrap(),
                parse_poly("x1^2", &v).unwrap(),
                parse_poly("x2^2", &v).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn p2_affine_and_projective() {
        let zh = quadratic_p2();
        let pts = binary_points(3);
        assert_eq!(pts.len(), 7);
        let model = ModelManifold::projective_space(2, 2);
        let recs = homogeneous_records(&zh, StructureKind::Affine, &pts).unwrap();
        let rep = verify_affine_index(&model, &recs).unwrap();
        assert_eq!(rep.lhs, qi(1));
        assert_eq!(rep.verdict, Verdict::Match);
        let recs = homogeneous_records(&zh, StructureKind::Projective, &pts).unwrap();
        let rep = verify_projective_index(&model, &recs, &sym(power_sum(3, 3))).unwrap();
        assert_eq!(rep.lhs, qi(1));
        assert_eq!(rep.verdict, Verdict::Match);
    }

    #[test]
    fn wrong_scaling_is_a_mismatch() {
        let zh = quadratic_p2();
        let pts = binary_points(3);
        let model = ModelManifold::projective_space(2, 2);
        let mut recs = homogeneous_records(&zh, StructureKind::Affine, &pts).unwrap();
        for r in &mut recs {
            r.symbol_value *= qi(2);
        }
        assert_eq!(verify_affine_index(&model, &recs).unwrap().verdict, Verdict::Mismatch);
        let recs = homogeneous_records(&zh, StructureKind::Affine, &pts).unwrap();
        let rep = verify_baum_bott(&model, &recs[1..], &sym(elementary(2, 2))).unwrap();
        assert_eq!(rep.verdict, Verdict::Mismatch);
        assert_eq!(rep.lhs, qi(6));
        assert_eq!(rep.rhs, qi(7));
    }

    #[test]
    fn empty_singular_set() {
        let model = ModelManifold::projective_space(2, 2);
        let rep = verify_projective_index(&model, &[], &sym(power_sum(3, 3))).unwrap();
        assert_eq!(rep.lhs, qi(0));
        assert_eq!(rep.verdict, Verdict::Mismatch);
        let elliptic = ModelManifold::new(BuiltinRing::Curve { genus: 1 }, "0").unwrap();
        let rep = verify_affine_index(&elliptic, &[]).unwrap();
        assert_eq!(rep.verdict, Verdict::Match);
    }

    #[test]
    fn baum_bott_on_p1() {
        let v = vec!["x0".to_string(), "x1".to_string()];
        let zh = HomogeneousField::new(
            &v,
            vec![parse_poly("x0", &v).unwrap(), parse_poly("3*x1", &v).unwrap()],
        )
        .unwrap();
        let model = ModelManifold::projective_space(1, 1);
        let pts = vec![vec![qi(1), qi(0)], vec![qi(0), qi(1)]];
        let recs = homogeneous_records(&zh, StructureKind::Affine, &pts).unwrap();
        let rep = verify_baum_bott(&model, &recs, &sym(power_sum(1, 1))).unwrap();
        assert_eq!(rep.lhs, qi(2));
        assert_eq!(rep.verdict, Verdict::Match);
    }
}
