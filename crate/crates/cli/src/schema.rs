//! JSON input documents and their conversion into library objects. Every
//! conversion error carries the JSON path of the offending value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use leafwise::algebra::parse::parse_poly;
use leafwise::algebra::{
    parse_rational, FormWeight, Frac, Laurent, MeromorphicForm, Monomial, Poly, Series, Q,
};
use leafwise::chern::BuiltinRing;
use leafwise::foliation::{ChartField, Christoffel, HomogeneousField, StructureKind};

use crate::CliError;

fn input(path: impl Into<String>, message: impl ToString) -> CliError {
    CliError::Input {
        path: path.into(),
        message: message.to_string(),
    }
}

/// Deserializes `text`, reporting the JSON path on failure.
pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        input(if path == "." { "$".into() } else { format!("$.{path}") }, e.into_inner())
    })
}

pub fn rational(path: &str, text: &str) -> Result<Q, CliError> {
    parse_rational(text).map_err(|e| input(path, e))
}

pub fn poly(path: &str, text: &str, vars: &[String]) -> Result<Poly, CliError> {
    parse_poly(text, vars).map_err(|e| input(path, e))
}

/// `{vars, order, coeffs: {"i,j": "p/q"}}` or `{vars, order, expr}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesDoc {
    pub vars: Vec<String>,
    #[serde(default)]
    pub order: Option<i64>,
    #[serde(default)]
    pub coeffs: BTreeMap<String, String>,
    #[serde(default)]
    pub expr: Option<String>,
}

fn exponent_key(path: &str, key: &str, len: usize) -> Result<Vec<u32>, CliError> {
    let exps: Result<Vec<u32>, _> = key.split(',').map(|s| s.trim().parse::<u32>()).collect();
    let exps = exps.map_err(|_| input(path, format!("bad exponent tuple `{key}`")))?;
    if exps.len() != len {
        return Err(input(
            path,
            format!("exponent tuple `{key}` has {} entries, expected {len}", exps.len()),
        ));
    }
    Ok(exps)
}

impl SeriesDoc {
    pub fn build(&self, path: &str, default_order: i64) -> Result<Series, CliError> {
        let order = self.order.unwrap_or(default_order);
        if order < 0 {
            return Err(input(format!("{path}.order"), "order must be nonnegative"));
        }
        let mut terms = Vec::new();
        for (key, value) in &self.coeffs {
            let p = format!("{path}.coeffs[\"{key}\"]");
            let exps = exponent_key(&p, key, self.vars.len())?;
            terms.push((Monomial(exps), rational(&p, value)?));
        }
        let mut s = Series::from_terms(&self.vars, order, terms);
        if let Some(e) = &self.expr {
            let p = poly(&format!("{path}.expr"), e, &self.vars)?;
            s = s.add(&Series::from_poly(&p, order));
        }
        Ok(s)
    }
}

/// `{var, order, weight, coeffs: {"-2": "p/q"}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LaurentDoc {
    pub var: String,
    #[serde(default)]
    pub order: Option<i64>,
    pub weight: u32,
    #[serde(default)]
    pub coeffs: BTreeMap<String, String>,
}

impl LaurentDoc {
    pub fn build(&self, path: &str, default_order: i64) -> Result<MeromorphicForm, CliError> {
        let weight = FormWeight::from_value(self.weight)
            .ok_or_else(|| input(format!("{path}.weight"), "weight must be 1 or 2"))?;
        let order = self.order.unwrap_or(default_order);
        let mut coeffs = Vec::new();
        for (key, value) in &self.coeffs {
            let p = format!("{path}.coeffs[\"{key}\"]");
            let k: i64 = key
                .trim()
                .parse()
                .map_err(|_| input(&p, format!("bad exponent `{key}`")))?;
            coeffs.push((k, rational(&p, value)?));
        }
        Ok(MeromorphicForm::new(
            weight,
            Laurent::from_coeffs(&self.var, order, coeffs),
        ))
    }
}

/// Input of `normalform`: eigenvalues of the linear part and the symbol.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalFormDoc {
    pub lambda: Vec<String>,
    pub symbol: SeriesDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDoc {
    pub name: String,
    pub vars: Vec<String>,
    pub components: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FracDoc {
    pub num: String,
    #[serde(default = "one")]
    pub den: String,
}

fn one() -> String {
    "1".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub from: String,
    pub to: String,
    /// `g` with `W_from = g·W_to`, in the variables of `from`.
    pub multiplier: String,
    /// Coordinates of `to` as functions on `from`.
    #[serde(default)]
    pub coordinates: Option<Vec<FracDoc>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChristoffelDoc {
    pub kind: StructureKind,
    /// Symbol per chart name.
    pub symbols: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomogeneousDoc {
    pub vars: Vec<String>,
    pub components: Vec<String>,
    /// Homogeneous coordinates of the singular points.
    #[serde(default)]
    pub singular_points: Vec<Vec<String>>,
}

/// A foliation with a foliated structure on a model manifold, given either by
/// explicit charts or by a homogeneous vector field on `C^{n+1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationDoc {
    pub manifold: BuiltinRing,
    /// `c1(T_F)` in the generators of the manifold's ring.
    pub c1_tf: String,
    #[serde(default)]
    pub charts: Vec<ChartDoc>,
    #[serde(default)]
    pub transitions: Vec<TransitionDoc>,
    #[serde(default)]
    pub christoffel: Option<ChristoffelDoc>,
    /// Candidate singular points per chart, in chart coordinates.
    #[serde(default)]
    pub singular_candidates: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub homogeneous: Option<HomogeneousDoc>,
}

/// Library objects for one chart.
#[derive(Debug, Clone)]
pub struct Chart {
    pub field: ChartField,
    pub symbol: Christoffel,
    pub candidates: Vec<Vec<Q>>,
}

#[derive(Debug, Clone)]
pub struct Transition {
    pub from: String,
    pub to: String,
    pub multiplier: Poly,
    pub coordinates: Option<Vec<Frac>>,
}

#[derive(Debug, Clone)]
pub struct Foliation {
    pub charts: Vec<Chart>,
    pub transitions: Vec<Transition>,
}

impl FoliationDoc {
    /// Replaces a homogeneous description by the equivalent chart data.
    pub fn expand(&self) -> Result<FoliationDoc, CliError> {
        let Some(h) = &self.homogeneous else {
            return Ok(self.clone());
        };
        if !self.charts.is_empty() || self.christoffel.is_some() {
            return Err(input(
                "$.homogeneous",
                "give either a homogeneous field or explicit charts, not both",
            ));
        }
        let vars = &h.vars;
        let comps = h
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| poly(&format!("$.homogeneous.components[{i}]"), c, vars))
            .collect::<Result<Vec<_>, _>>()?;
        let zh = HomogeneousField::new(vars, comps).map_err(|e| input("$.homogeneous", e))?;
        let mut charts = Vec::new();
        let mut symbols = BTreeMap::new();
        let mut candidates: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
        for k in 0..zh.len() {
            let (w, gamma) = zh
                .to_chart(k)
                .map_err(|e| input("$.homogeneous", e))?;
            charts.push(ChartDoc {
                name: w.chart.clone(),
                vars: w.vars().to_vec(),
                components: w.components().iter().map(Poly::to_string).collect(),
            });
            symbols.insert(w.chart.clone(), gamma.to_string());
            candidates.insert(w.chart.clone(), Vec::new());
        }
        for (i, pt) in h.singular_points.iter().enumerate() {
            let p = format!("$.homogeneous.singular_points[{i}]");
            if pt.len() != zh.len() {
                return Err(input(&p, format!("expected {} coordinates", zh.len())));
            }
            let x = pt
                .iter()
                .enumerate()
                .map(|(j, c)| rational(&format!("{p}[{j}]"), c))
                .collect::<Result<Vec<_>, _>>()?;
            let k = x
                .iter()
                .position(|c| *c != Q::from_integer(0.into()))
                .ok_or_else(|| input(&p, "the zero vector is not a point"))?;
            let local = zh.chart_point(k, &x).expect("x_k is nonzero");
            candidates
                .get_mut(&vars[k])
                .expect("chart exists")
                .push(local.iter().map(leafwise::algebra::fmt_q).collect());
        }
        let mut transitions = Vec::new();
        for k in 0..zh.len() {
            for l in 0..zh.len() {
                if k == l {
                    continue;
                }
                let coords = zh
                    .chart_change(k, l)
                    .iter()
                    .map(|f| FracDoc {
                        num: f.num().to_string(),
                        den: f.den().to_string(),
                    })
                    .collect();
                transitions.push(TransitionDoc {
                    from: vars[k].clone(),
                    to: vars[l].clone(),
                    multiplier: zh.transition_multiplier(k, l).to_string(),
                    coordinates: Some(coords),
                });
            }
        }
        Ok(FoliationDoc {
            manifold: self.manifold,
            c1_tf: self.c1_tf.clone(),
            charts,
            transitions,
            christoffel: Some(ChristoffelDoc {
                kind: StructureKind::Affine,
                symbols,
            }),
            singular_candidates: candidates,
            homogeneous: None,
        })
    }

    pub fn build(&self) -> Result<Foliation, CliError> {
        let doc = self.expand()?;
        if doc.charts.is_empty() {
            return Err(input("$.charts", "at least one chart is required"));
        }
        let christoffel = doc
            .christoffel
            .as_ref()
            .ok_or_else(|| input("$.christoffel", "missing Christoffel data"))?;
        let mut charts = Vec::new();
        for (i, c) in doc.charts.iter().enumerate() {
            let p = format!("$.charts[{i}]");
            if doc.charts[..i].iter().any(|o| o.name == c.name) {
                return Err(input(format!("{p}.name"), format!("duplicate chart `{}`", c.name)));
            }
            let comps = c
                .components
                .iter()
                .enumerate()
                .map(|(j, e)| poly(&format!("{p}.components[{j}]"), e, &c.vars))
                .collect::<Result<Vec<_>, _>>()?;
            let field = ChartField::new(&c.name, &c.vars, comps).map_err(|e| input(&p, e))?;
            let sp = format!("$.christoffel.symbols[\"{}\"]", c.name);
            let text = christoffel
                .symbols
                .get(&c.name)
                .ok_or_else(|| input(&sp, "missing symbol for chart"))?;
            let symbol = Christoffel {
                kind: christoffel.kind,
                symbol: poly(&sp, text, &c.vars)?,
            };
            let mut candidates = Vec::new();
            if let Some(list) = doc.singular_candidates.get(&c.name) {
                for (j, pt) in list.iter().enumerate() {
                    let pp = format!("$.singular_candidates[\"{}\"][{j}]", c.name);
                    if pt.len() != c.vars.len() {
                        return Err(input(&pp, format!("expected {} coordinates", c.vars.len())));
                    }
                    candidates.push(
                        pt.iter()
                            .enumerate()
                            .map(|(m, t)| rational(&format!("{pp}[{m}]"), t))
                            .collect::<Result<Vec<_>, _>>()?,
                    );
                }
            }
            charts.push(Chart {
                field,
                symbol,
                candidates,
            });
        }
        for name in doc.singular_candidates.keys() {
            if !doc.charts.iter().any(|c| &c.name == name) {
                return Err(input(
                    format!("$.singular_candidates[\"{name}\"]"),
                    "unknown chart",
                ));
            }
        }
        let mut transitions = Vec::new();
        for (i, t) in doc.transitions.iter().enumerate() {
            let p = format!("$.transitions[{i}]");
            let chart_of = |name: &str, field: &str| {
                doc.charts
                    .iter()
                    .find(|c| c.name == name)
                    .ok_or_else(|| input(format!("{p}.{field}"), format!("unknown chart `{name}`")))
            };
            let from = chart_of(&t.from, "from")?;
            let to = chart_of(&t.to, "to")?;
            let multiplier = poly(&format!("{p}.multiplier"), &t.multiplier, &from.vars)?;
            let coordinates = match &t.coordinates {
                None => None,
                Some(list) => {
                    if list.len() != to.vars.len() {
                        return Err(input(
                            format!("{p}.coordinates"),
                            format!("expected {} coordinates", to.vars.len()),
                        ));
                    }
                    let mut out = Vec::new();
                    for (j, f) in list.iter().enumerate() {
                        let fp = format!("{p}.coordinates[{j}]");
                        let num = poly(&format!("{fp}.num"), &f.num, &from.vars)?;
                        let den = poly(&format!("{fp}.den"), &f.den, &from.vars)?;
                        out.push(Frac::new(num, den).map_err(|e| input(&fp, e))?);
                    }
                    Some(out)
                }
            };
            transitions.push(Transition {
                from: t.from.clone(),
                to: t.to.clone(),
                multiplier,
                coordinates,
            });
        }
        Ok(Foliation {
            charts,
            transitions,
        })
    }
}
