//! The `invert` subcommand: run one or all routes on a problem and report
//! the results as JSON.
//!
//! Coefficients are emitted as strings (exact fractions in rational mode,
//! shortest round-tripping decimal in float mode) so the report can be fed
//! back into other tools without loss.

use std::time::Instant;

use num::BigRational;
use serde_json::{json, Map, Value};
use serinv_core::coeff::{Coeff, DEFAULT_TOL};
use serinv_core::matrix::{multivariate_matrix_invert, pwq_invert, ybar_invert};
use serinv_core::multi::{MSeries, MultiIndex};
use serinv_core::multivariate::{invert_system, system_residual, PolySystem};
use serinv_core::oracles::{composition_residual, lagrange_invert};
use serinv_core::series::Series1;
use serinv_core::univariate::{canonical_polynomials, compute_w, taylor_shift};

use crate::problem::{parse_float, parse_rational, ProblemDoc};
use crate::CliError;

pub fn run(
    doc: &ProblemDoc,
    order_flag: Option<usize>,
    method_flag: Option<&str>,
    mode_flag: Option<&str>,
    max_kron_cells: usize,
) -> Result<Value, CliError> {
    let order = order_flag.unwrap_or(doc.order);
    if order < 1 {
        return Err(CliError::Schema("order must be >= 1".into()));
    }
    let mode = mode_flag.unwrap_or_else(|| doc.mode());
    if mode != "rational" && mode != "float" {
        return Err(CliError::Schema(format!("unknown mode {mode:?}")));
    }
    let method = method_flag.unwrap_or_else(|| doc.method());
    let methods = expand_methods(method, &doc.kind)?;

    let mut report = match (doc.kind.as_str(), mode) {
        ("univariate", "rational") => {
            run_univariate::<BigRational>(doc, order, &methods, &parse_rational)?
        }
        ("univariate", "float") => run_univariate::<f64>(doc, order, &methods, &parse_float)?,
        ("multivariate", "rational") => run_multivariate::<BigRational>(
            doc,
            order,
            &methods,
            &parse_rational,
            max_kron_cells,
        )?,
        ("multivariate", "float") => {
            run_multivariate::<f64>(doc, order, &methods, &parse_float, max_kron_cells)?
        }
        _ => unreachable!("kind was validated at parse time"),
    };
    let obj = report.as_object_mut().unwrap();
    obj.insert("kind".into(), json!(doc.kind));
    obj.insert("order".into(), json!(order));
    obj.insert("mode".into(), json!(mode));
    Ok(report)
}

/// Expand "all" to every route that applies to this kind of problem, and
/// refuse routes that do not.
fn expand_methods(method: &str, kind: &str) -> Result<Vec<&'static str>, CliError> {
    const UNIVARIATE: [&str; 4] = ["operator", "pwq", "matrix-op", "lagrange"];
    const MULTIVARIATE: [&str; 2] = ["operator", "matrix-op"];
    let applicable: &[&'static str] = if kind == "univariate" {
        &UNIVARIATE
    } else {
        &MULTIVARIATE
    };
    if method == "all" {
        return Ok(applicable.to_vec());
    }
    match applicable.iter().find(|m| **m == method) {
        Some(m) => Ok(vec![m]),
        None => Err(CliError::Validation(format!(
            "method {method:?} is not defined for {kind} problems"
        ))),
    }
}

fn run_univariate<F: Coeff>(
    doc: &ProblemDoc,
    order: usize,
    methods: &[&'static str],
    parse: &dyn Fn(&str) -> Result<F, CliError>,
) -> Result<Value, CliError> {
    let v = build_series(doc.coeffs.as_ref().unwrap(), parse)?;
    let powers = doc.powers.clone().unwrap_or_default();

    // With a shift the inversion runs on V1(z) = V(z + z0) - v0 and the
    // reported series gains constant term z0.
    let (v1, z0) = match &doc.shift {
        Some((z0s, v0s)) => {
            if !powers.is_empty() {
                return Err(CliError::Validation(
                    "powers are not supported together with a shift".into(),
                ));
            }
            let z0 = parse(z0s)?;
            let v0 = parse(v0s)?;
            (shifted_map(&v, &z0, &v0)?, Some(z0))
        }
        None => (v, None),
    };
    for &m in &powers {
        if m < 1 || m > order {
            return Err(CliError::Validation(format!(
                "power {m} out of range 1..={order}"
            )));
        }
    }

    let mut results = Map::new();
    let mut inverses: Vec<Series1<F>> = Vec::new();
    for &name in methods {
        let t = Instant::now();
        let (u, power_series) = match name {
            "operator" => {
                let basis = canonical_polynomials(&v1, order)?;
                let u = basis.power_series(1)?;
                let ps: Vec<(usize, Series1<F>)> = powers
                    .iter()
                    .map(|&m| Ok((m, basis.power_series(m)?)))
                    .collect::<Result<_, CliError>>()?;
                (u, ps)
            }
            "pwq" => {
                let w = compute_w(&v1, order)?;
                let u = pwq_invert(w.coeffs(), order)?;
                (u.clone(), ring_powers(&u, &powers))
            }
            "matrix-op" => {
                let u = ybar_invert(&v1, order)?.inverse().clone();
                (u.clone(), ring_powers(&u, &powers))
            }
            "lagrange" => {
                let u = lagrange_invert(&v1, order)?;
                (u.clone(), ring_powers(&u, &powers))
            }
            other => unreachable!("unexpanded method {other}"),
        };
        let ns = t.elapsed().as_nanos() as u64;
        let residual = composition_residual(&v1, &u, order)?;

        let mut entry = Map::new();
        entry.insert("U".into(), series_value(&u, z0.as_ref()));
        if !power_series.is_empty() {
            let mut pmap = Map::new();
            for (m, s) in &power_series {
                pmap.insert(m.to_string(), series_value(s, None));
            }
            entry.insert("powers".into(), Value::Object(pmap));
        }
        entry.insert("residual".into(), json!(residual));
        entry.insert("ns".into(), json!(ns));
        results.insert(name.into(), Value::Object(entry));
        inverses.push(u);
    }

    let discrepancy = pairwise_max(&inverses, |a, b| a.sub(b).max_abs_coeff());
    Ok(json!({
        "method_results": Value::Object(results),
        "discrepancy": format_discrepancy(discrepancy),
    }))
}

fn run_multivariate<F: Coeff>(
    doc: &ProblemDoc,
    order: usize,
    methods: &[&'static str],
    parse: &dyn Fn(&str) -> Result<F, CliError>,
    max_kron_cells: usize,
) -> Result<Value, CliError> {
    if doc.powers.is_some() {
        return Err(CliError::Validation(
            "powers apply to univariate problems only".into(),
        ));
    }
    let sys = build_system(doc.components.as_ref().unwrap(), order, parse)?;

    let mut results = Map::new();
    let mut inverses: Vec<Vec<MSeries<F>>> = Vec::new();
    for &name in methods {
        let t = Instant::now();
        let u = match name {
            "operator" => invert_system(&sys, order)?,
            "matrix-op" => {
                let cells = kron_cells(order, sys.nvars());
                if cells > max_kron_cells {
                    return Err(CliError::Validation(format!(
                        "matrix-op needs {cells} tensor cells at order {order} with {} variables, above the cap {max_kron_cells}",
                        sys.nvars()
                    )));
                }
                multivariate_matrix_invert(&sys, order)?
            }
            other => unreachable!("unexpanded method {other}"),
        };
        let ns = t.elapsed().as_nanos() as u64;
        let residual = system_residual(&sys, &u)?;

        let mut entry = Map::new();
        entry.insert(
            "U".into(),
            Value::Array(u.iter().map(mseries_value).collect()),
        );
        entry.insert("residual".into(), json!(residual));
        entry.insert("ns".into(), json!(ns));
        results.insert(name.into(), Value::Object(entry));
        inverses.push(u);
    }

    let discrepancy = pairwise_max(&inverses, |a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.sub(y).map(|d| d.max_abs_coeff()).unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    });
    Ok(json!({
        "method_results": Value::Object(results),
        "discrepancy": format_discrepancy(discrepancy),
    }))
}

pub(crate) fn build_series<F: Coeff>(
    coeffs: &[(usize, String)],
    parse: &dyn Fn(&str) -> Result<F, CliError>,
) -> Result<Series1<F>, CliError> {
    let degree = coeffs.iter().map(|(e, _)| *e).max().unwrap_or(0);
    let terms: Vec<(usize, F)> = coeffs
        .iter()
        .map(|(e, s)| Ok((*e, parse(s)?)))
        .collect::<Result<_, CliError>>()?;
    Ok(Series1::from_terms(&terms, degree.max(1)))
}

pub(crate) fn build_system<F: Coeff>(
    components: &[Vec<(Vec<usize>, String)>],
    order: usize,
    parse: &dyn Fn(&str) -> Result<F, CliError>,
) -> Result<PolySystem<F>, CliError> {
    let nvars = components.len();
    if nvars == 0 {
        return Err(CliError::Schema("a system needs at least one component".into()));
    }
    let mut series = Vec::with_capacity(nvars);
    for comp in components {
        let mut terms = Vec::with_capacity(comp.len());
        for (exps, s) in comp {
            if exps.len() != nvars {
                return Err(CliError::Schema(format!(
                    "exponent vector {exps:?} does not have {nvars} entries"
                )));
            }
            terms.push((MultiIndex::new(exps.clone()), parse(s)?));
        }
        series.push(MSeries::from_terms(terms, nvars, order));
    }
    Ok(PolySystem::new(series)?)
}

/// V1(z) = V(z + z0) - v0, with the consistency checks a shifted problem
/// needs: V(z0) = v0 and V'(z0) != 0.
fn shifted_map<F: Coeff>(v: &Series1<F>, z0: &F, v0: &F) -> Result<Series1<F>, CliError> {
    let shifted = taylor_shift(v, z0);
    let mut coeffs = shifted.coeffs().to_vec();
    let c0 = coeffs[0].clone() - v0.clone();
    let matches = if F::EXACT {
        c0.is_zero()
    } else {
        c0.approx_eq(&F::zero(), DEFAULT_TOL)
    };
    if !matches {
        return Err(CliError::Validation("V(z0) does not equal v0".into()));
    }
    coeffs[0] = F::zero();
    let v1 = Series1::new(coeffs);
    if v1.coeff(1).is_zero() {
        return Err(CliError::Validation(
            "V'(z0) = 0: the map is not invertible at the expansion point".into(),
        ));
    }
    Ok(v1)
}

fn ring_powers<F: Coeff>(u: &Series1<F>, powers: &[usize]) -> Vec<(usize, Series1<F>)> {
    powers.iter().map(|&m| (m, u.pow(m))).collect()
}

fn series_value<F: Coeff>(s: &Series1<F>, constant: Option<&F>) -> Value {
    let mut out: Vec<Value> = s.coeffs().iter().map(|c| json!(c.to_string())).collect();
    if let Some(z0) = constant {
        out[0] = json!(z0.to_string());
    }
    Value::Array(out)
}

fn mseries_value<F: Coeff>(s: &MSeries<F>) -> Value {
    let mut out = Map::new();
    for (mi, c) in s.terms() {
        let key = mi
            .components()
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(",");
        out.insert(key, json!(c.to_string()));
    }
    Value::Object(out)
}

fn kron_cells(order: usize, nvars: usize) -> usize {
    (order + 1).checked_pow(nvars as u32).unwrap_or(usize::MAX)
}

fn pairwise_max<T>(items: &[T], diff: impl Fn(&T, &T) -> f64) -> f64 {
    let mut max = 0.0f64;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            max = max.max(diff(&items[i], &items[j]));
        }
    }
    max
}

fn format_discrepancy(d: f64) -> String {
    if d == 0.0 {
        "0".to_string()
    } else {
        format!("{d:e}")
    }
}
