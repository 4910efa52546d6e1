//! The `bench` subcommand: wall-clock timings of every applicable route,
//! emitted as CSV. Routes must agree on the output before a timing counts.

use num::BigRational;
use serinv_core::bench::{bench_multivariate, bench_univariate, rows_to_csv, BenchRow};
use serinv_core::coeff::{Coeff, DEFAULT_TOL};

use crate::invert;
use crate::problem::{parse_float, parse_rational, ProblemDoc};
use crate::CliError;

pub fn run(doc: &ProblemDoc, orders: &[usize]) -> Result<String, CliError> {
    let rows = match (doc.kind.as_str(), doc.mode()) {
        ("univariate", "rational") => univariate::<BigRational>(doc, orders, &parse_rational)?,
        ("univariate", "float") => univariate::<f64>(doc, orders, &parse_float)?,
        ("multivariate", "rational") => {
            multivariate::<BigRational>(doc, orders, &parse_rational)?
        }
        ("multivariate", "float") => multivariate::<f64>(doc, orders, &parse_float)?,
        _ => unreachable!("kind and mode were validated at parse time"),
    };
    Ok(rows_to_csv(&rows))
}

fn tol<F: Coeff>() -> f64 {
    if F::EXACT {
        0.0
    } else {
        DEFAULT_TOL
    }
}

fn univariate<F: Coeff>(
    doc: &ProblemDoc,
    orders: &[usize],
    parse: &dyn Fn(&str) -> Result<F, CliError>,
) -> Result<Vec<BenchRow>, CliError> {
    let v = invert::build_series(doc.coeffs.as_ref().unwrap(), parse)?;
    Ok(bench_univariate(&v, orders, tol::<F>())?)
}

fn multivariate<F: Coeff>(
    doc: &ProblemDoc,
    orders: &[usize],
    parse: &dyn Fn(&str) -> Result<F, CliError>,
) -> Result<Vec<BenchRow>, CliError> {
    let max_order = orders.iter().copied().max().unwrap();
    let sys = invert::build_system(doc.components.as_ref().unwrap(), max_order, parse)?;
    Ok(bench_multivariate(&sys, orders, tol::<F>())?)
}
