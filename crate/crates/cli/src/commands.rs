//! One function per subcommand; each returns the report body and exit code.

use serde_json::{json, Map, Value};

use leafwise::algebra::parse::parse_poly;
use leafwise::algebra::{FormWeight, Laurent, Q};
use leafwise::chern::{product_surface, signature_harness};
use leafwise::foliation::{
    affine_to_projective, singular_record, transition_consistent, Christoffel, FoliationError,
    SingularPointRecord, StructureKind,
};
use leafwise::geodesic::{build_geodesic_affine, build_geodesic_projective, projectivized_riccati};
use leafwise::indices::{
    verify_affine_index, verify_baum_bott, verify_projective_index, IndexError, ModelManifold,
    Verdict,
};
use leafwise::localan::{
    affine_angle, affine_distortion, brjuno_diagnostic, fmt_multi, normalize_affine,
    normalize_projective, projective_angle, projective_branches, riccati_projective_to_affine,
    schwarzian, LocalError,
};
use leafwise::symfun::{elementary, power_sum, x_vars, SymPoly};

use crate::report::{self, Report};
use crate::schema::{self, FoliationDoc, LaurentDoc, NormalFormDoc, SeriesDoc};
use crate::{read_input, Cli, CliError, Command, GeodesicAction, KindArg, TheoremArg};

type Outcome = Result<(Report, i32), CliError>;

pub fn dispatch(cli: &Cli) -> Outcome {
    if cli.order < 0 {
        return Err(input("--order", "order must be nonnegative"));
    }
    if cli.jobs == 0 {
        return Err(input("--jobs", "at least one job is required"));
    }
    match &cli.command {
        Command::Distortion { file } => series_op(cli, file, false),
        Command::Schwarzian { file } => series_op(cli, file, true),
        Command::Angle { file } => angle(cli, file),
        Command::Riccati { file } => riccati(cli, file),
        Command::Normalform { kind, file } => normalform(cli, *kind, file),
        Command::Brjuno { lambda, mu, max } => brjuno(cli, lambda, mu, *max),
        Command::Geodesic {
            action: GeodesicAction::Check { file },
        } => geodesic_check(cli, file),
        Command::Index { theorem, file } => index(cli, *theorem, file),
        Command::ProductSurface { genus, nv, nh } => {
            let classes = product_surface(*genus, *nv, *nh);
            let mut body = Map::new();
            body.insert(
                "input".into(),
                json!({"genus": genus, "n_v": nv, "n_h": nh}),
            );
            body.insert("result".into(), to_value(&classes));
            Ok((Report::new(cli, Map::new(), body), 0))
        }
        Command::Signature { c1sq, c2, tf } => {
            let c1sq_q = schema::rational("--c1sq", c1sq)?;
            let c2_q = schema::rational("--c2", c2)?;
            let tf_q = tf
                .as_ref()
                .map(|t| schema::rational("--tf", t))
                .transpose()?;
            let r = signature_harness(&c1sq_q, &c2_q, tf_q.as_ref());
            let code = if r.projective_structure_possible { 0 } else { 1 };
            let mut body = Map::new();
            body.insert(
                "input".into(),
                json!({"c1_squared": c1sq, "c2": c2, "c1_t_f_squared": tf}),
            );
            body.insert("result".into(), to_value(&r));
            Ok((Report::new(cli, Map::new(), body), code))
        }
        Command::Expand { file } => {
            let doc: FoliationDoc = schema::from_json(&read_input(file)?)?;
            let mut body = Map::new();
            body.insert("result".into(), to_value(&doc.expand()?));
            Ok((Report::new(cli, Map::new(), body), 0))
        }
    }
}

fn input(path: &str, message: impl ToString) -> CliError {
    CliError::Input {
        path: path.into(),
        message: message.to_string(),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn local(e: LocalError) -> CliError {
    match e {
        LocalError::Resonant(_) | LocalError::ResonantTheta(_) | LocalError::ZeroSymbol => {
            CliError::Inadmissible(e.to_string())
        }
        LocalError::Residual(_) => CliError::Defect(e.to_string()),
        other => input("$", other),
    }
}

fn order_options(cli: &Cli) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("order".into(), json!(cli.order));
    m
}

fn series_op(cli: &Cli, file: &std::path::Path, schwarz: bool) -> Outcome {
    let doc: SeriesDoc = schema::from_json(&read_input(file)?)?;
    let f = doc.build("$", cli.order)?;
    let result = if schwarz {
        schwarzian(&f)
    } else {
        affine_distortion(&f)
    }
    .map_err(local)?;
    let mut body = Map::new();
    body.insert("input".into(), to_value(&doc));
    body.insert("result".into(), report::series(&result));
    Ok((Report::new(cli, order_options(cli), body), 0))
}

fn angle(cli: &Cli, file: &std::path::Path) -> Outcome {
    let doc: LaurentDoc = schema::from_json(&read_input(file)?)?;
    let form = doc.build("$", cli.order)?;
    let result = match form.weight {
        FormWeight::One => {
            let a = affine_angle(&form).map_err(local)?;
            json!({
                "weight": 1,
                "theta": report::q(&a.theta),
                "class": a.class.to_string(),
                "ramification": report::opt_q(&a.ramification),
            })
        }
        FormWeight::Two => {
            let a = projective_angle(&form).map_err(local)?;
            json!({
                "weight": 2,
                "theta_squared": report::q(&a.theta_squared),
                "theta": report::opt_q(&a.theta),
                "class": a.class.to_string(),
            })
        }
    };
    let mut body = Map::new();
    body.insert("input".into(), to_value(&doc));
    body.insert("result".into(), result);
    Ok((Report::new(cli, order_options(cli), body), 0))
}

fn branch(cli: &Cli, hint: impl FnOnce() -> String) -> Result<Q, CliError> {
    match &cli.branch {
        Some(b) => schema::rational("--branch", b),
        None => Err(input("--branch", format!("a branch is required; {}", hint()))),
    }
}

fn riccati(cli: &Cli, file: &std::path::Path) -> Outcome {
    let doc: LaurentDoc = schema::from_json(&read_input(file)?)?;
    let form = doc.build("$", cli.order)?;
    let angle = projective_angle(&form).map_err(local)?;
    let theta = branch(cli, || match &angle.theta {
        Some(t) => format!("θ² = {}, choose θ = ±{}", leafwise::algebra::fmt_q(&angle.theta_squared), leafwise::algebra::fmt_q(t)),
        None => format!("θ² = {} is not a rational square", leafwise::algebra::fmt_q(&angle.theta_squared)),
    })?;
    let sol = riccati_projective_to_affine(&form, &theta, cli.order).map_err(local)?;
    let symbol = Laurent::from_series(&sol.series).shift(-1);
    let mut options = order_options(cli);
    options.insert("branch".into(), report::q(&theta));
    let mut body = Map::new();
    body.insert("input".into(), to_value(&doc));
    body.insert(
        "result".into(),
        json!({
            "u": report::series(&sol.series),
            "affine_symbol": report::laurent(&symbol),
            "free": sol.free.iter().map(|k| fmt_multi(k)).collect::<Vec<_>>(),
        }),
    );
    Ok((Report::new(cli, options, body), 0))
}

fn rationals(path: &str, items: &[String]) -> Result<Vec<Q>, CliError> {
    items
        .iter()
        .enumerate()
        .map(|(i, t)| schema::rational(&format!("{path}[{i}]"), t))
        .collect()
}

fn normalform(cli: &Cli, kind: KindArg, file: &std::path::Path) -> Outcome {
    let doc: NormalFormDoc = schema::from_json(&read_input(file)?)?;
    let lambda = rationals("$.lambda", &doc.lambda)?;
    let symbol = doc.symbol.build("$.symbol", cli.order)?;
    let mut options = order_options(cli);
    let result = match kind {
        KindArg::Affine => {
            let sol = normalize_affine(&lambda, &symbol, cli.order).map_err(local)?;
            json!({
                "kind": "affine",
                "normalizing_factor": report::series(&sol.series),
                "normal_symbol": report::q(&symbol.constant_term()),
                "free": sol.free.iter().map(|k| fmt_multi(k)).collect::<Vec<_>>(),
            })
        }
        KindArg::Projective => {
            let rho0 = symbol.constant_term();
            let branches = projective_branches(&rho0).map_err(local)?;
            let b = branch(cli, || {
                format!(
                    "γ(0)² = {}, choose {} or {}",
                    leafwise::algebra::fmt_q(&(-&rho0 * Q::from_integer(2.into()))),
                    leafwise::algebra::fmt_q(&branches[0]),
                    leafwise::algebra::fmt_q(&branches[1])
                )
            })?;
            options.insert("branch".into(), report::q(&b));
            let sol = normalize_projective(&lambda, &symbol, &b, cli.order).map_err(local)?;
            json!({
                "kind": "projective",
                "affine_symbol": report::series(&sol.series),
                "free": sol.free.iter().map(|k| fmt_multi(k)).collect::<Vec<_>>(),
            })
        }
    };
    let mut body = Map::new();
    body.insert("input".into(), to_value(&doc));
    body.insert("result".into(), result);
    Ok((Report::new(cli, options, body), 0))
}

fn brjuno(cli: &Cli, lambda: &str, mu: &str, max: u32) -> Outcome {
    let lambda_q = lambda
        .split(',')
        .map(|t| schema::rational("--lambda", t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let mu_q = schema::rational("--mu", mu)?;
    let d = brjuno_diagnostic(&lambda_q, &mu_q, max).map_err(|e| match e {
        LocalError::SmallBound(_) => input("--max", e),
        other => local(other),
    })?;
    let table: Vec<Value> = d
        .table
        .iter()
        .map(|e| {
            json!({
                "m": e.m,
                "omega": report::q(&e.omega),
                "attained_by": e.attained_by.iter().map(|k| fmt_multi(k)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut body = Map::new();
    body.insert(
        "input".into(),
        json!({"lambda": report::qs(&d.lambda), "mu": report::q(&d.mu), "max": max}),
    );
    body.insert(
        "result".into(),
        json!({
            "table": table,
            "partial_sums": d.partial_sums,
            "negated_sums": d.negated_sums,
            "floating": ["partial_sums", "negated_sums"],
            "resonant": d.resonant,
            "verdict": d.verdict,
        }),
    );
    Ok((Report::new(cli, Map::new(), body), 0))
}

fn check_value(subject: &str, name: &str, holds: bool, witness: Option<String>) -> Value {
    json!({"subject": subject, "identity": name, "holds": holds, "witness": witness})
}

fn geodesic_check(cli: &Cli, file: &std::path::Path) -> Outcome {
    let doc: FoliationDoc = schema::from_json(&read_input(file)?)?;
    let fol = doc.build()?;
    let mut checks = Vec::new();
    for (i, chart) in fol.charts.iter().enumerate() {
        let subject = format!("chart {}", chart.field.chart);
        let path = format!("$.charts[{i}]");
        let list = match chart.symbol.kind {
            StructureKind::Affine => build_geodesic_affine(&chart.field, &chart.symbol)
                .and_then(|g| g.checks()),
            StructureKind::Projective => build_geodesic_projective(&chart.field, &chart.symbol)
                .and_then(|g| g.checks()),
        }
        .map_err(|e| input(&path, e))?;
        for c in list {
            checks.push(check_value(&subject, &c.name, c.holds, c.witness));
        }
        if chart.symbol.kind == StructureKind::Projective {
            let r = projectivized_riccati(&chart.field, &chart.symbol).map_err(|e| input(&path, e))?;
            checks.push(check_value(
                &subject,
                "fibre charts agree under v = 1/u",
                r.consistent(),
                None,
            ));
        }
    }
    for (i, t) in fol.transitions.iter().enumerate() {
        let Some(coords) = &t.coordinates else {
            continue;
        };
        let path = format!("$.transitions[{i}]");
        let chart = |name: &str| fol.charts.iter().find(|c| c.field.chart == name).expect("validated");
        let (from, to) = (chart(&t.from), chart(&t.to));
        let r = transition_consistent(
            &from.field,
            &from.symbol,
            &to.field,
            &to.symbol,
            &t.multiplier,
            coords,
        )
        .map_err(|e| input(&path, e))?;
        let subject = format!("transition {} -> {}", t.from, t.to);
        checks.push(check_value(&subject, "W_from = g·W_to", r.fields, None));
        checks.push(check_value(
            &subject,
            "symbol changes by the multiplier",
            r.symbols,
            None,
        ));
    }
    let pass = checks.iter().all(|c| c["holds"] == json!(true));
    let mut body = Map::new();
    body.insert("input".into(), to_value(&doc));
    body.insert("checks".into(), Value::Array(checks));
    body.insert("verdict".into(), json!(if pass { "pass" } else { "fail" }));
    Ok((Report::new(cli, Map::new(), body), if pass { 0 } else { 1 }))
}

/// Maps `f` over `items` on `jobs` threads, keeping the input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                s.spawn(move || c.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn phi_arg(cli: &Cli, arity: usize, default: impl FnOnce() -> leafwise::algebra::Poly) -> Result<SymPoly, CliError> {
    let poly = match &cli.phi {
        Some(text) => parse_poly(text, &x_vars(arity)).map_err(|e| input("--phi", e))?,
        None => default(),
    };
    SymPoly::with_degree(poly, arity as u32).map_err(|e| input("--phi", e))
}

fn index_error(e: IndexError) -> CliError {
    match e {
        IndexError::Sym(_) => input("--phi", e),
        IndexError::Inadmissible(_) => CliError::Inadmissible(e.to_string()),
        other => input("$", other),
    }
}

fn index(cli: &Cli, theorem: TheoremArg, file: &std::path::Path) -> Outcome {
    let doc: FoliationDoc = schema::from_json(&read_input(file)?)?;
    let model = ModelManifold::new(doc.manifold, &doc.c1_tf).map_err(|e| input("$.c1_tf", e))?;
    let fol = doc.build()?;
    let n = model.dim();
    let mut tasks = Vec::new();
    for chart in &fol.charts {
        let symbol = match (theorem, chart.symbol.kind) {
            (TheoremArg::Affine, StructureKind::Projective) => {
                return Err(input(
                    "$.christoffel.kind",
                    "the affine index needs affine Christoffel symbols",
                ))
            }
            (TheoremArg::Projective, StructureKind::Affine) => Christoffel::projective(
                affine_to_projective(&chart.symbol.symbol, chart.field.components()),
            ),
            _ => chart.symbol.clone(),
        };
        for (j, p) in chart.candidates.iter().enumerate() {
            if chart.candidates[..j].contains(p) {
                return Err(input(
                    &format!("$.singular_candidates[\"{}\"][{j}]", chart.field.chart),
                    FoliationError::DuplicateCandidate(leafwise::foliation::fmt_point(p)),
                ));
            }
            tasks.push((chart, symbol.clone(), j, p));
        }
    }
    let records: Vec<SingularPointRecord> = par_map(&tasks, cli.jobs, |(chart, symbol, j, p)| {
        singular_record(&chart.field, symbol, p).map_err(|e| {
            input(
                &format!("$.singular_candidates[\"{}\"][{j}]", chart.field.chart),
                e,
            )
        })
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    let mut options = Map::new();
    let (name, result) = match theorem {
        TheoremArg::Affine => ("affine", verify_affine_index(&model, &records)),
        TheoremArg::Projective => {
            let phi = phi_arg(cli, n + 1, || power_sum(n + 1, n as u32 + 1))?;
            options.insert("phi".into(), json!(phi.monomial_form().to_string()));
            ("projective", verify_projective_index(&model, &records, &phi))
        }
        TheoremArg::Baumbott => {
            let phi = phi_arg(cli, n, || elementary(n, n))?;
            options.insert("phi".into(), json!(phi.monomial_form().to_string()));
            ("baumbott", verify_baum_bott(&model, &records, &phi))
        }
    };
    let r = result.map_err(index_error)?;
    options.insert("jobs".into(), json!(cli.jobs));
    options.insert("theorem".into(), json!(name));
    let code = match r.verdict {
        Verdict::Match => 0,
        Verdict::Mismatch => 1,
        Verdict::NotApplicable => 3,
    };
    let mut body = Map::new();
    body.insert("input".into(), to_value(&doc));
    body.insert("result".into(), to_value(&r));
    Ok((Report::new(cli, options, body), code))
}
