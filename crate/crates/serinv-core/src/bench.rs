//! Wall-clock comparison of the computation routes. Timings are recorded,
//! never asserted; output agreement across routes is checked before a row is
//! emitted.

use std::time::Instant;

use crate::coeff::Coeff;
use crate::error::Result;
use crate::matrix::{multivariate_matrix_invert, pwq_invert, ybar_invert};
use crate::multivariate::{invert_system, PolySystem};
use crate::oracles::lagrange_invert;
use crate::series::Series1;
use crate::univariate::{compute_w, invert_series};

/// One timing measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub method: String,
    pub order: usize,
    pub nanoseconds: u128,
}

/// CSV with header `method,order,nanoseconds`.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("method,order,nanoseconds\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.method, r.order, r.nanoseconds));
    }
    out
}

/// Time every univariate route at each order. All routes must produce the
/// same series (up to `tol`) or the run fails.
pub fn bench_univariate<F: Coeff>(
    v: &Series1<F>,
    orders: &[usize],
    tol: f64,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &order in orders {
        let t = Instant::now();
        let operator = invert_series(v, order)?;
        rows.push(row("operator", order, t.elapsed().as_nanos()));

        let t = Instant::now();
        let w = compute_w(v, order)?;
        let pwq = pwq_invert(w.coeffs(), order)?;
        rows.push(row("pwq", order, t.elapsed().as_nanos()));

        let t = Instant::now();
        let matrix_op = ybar_invert(v, order)?;
        rows.push(row("matrix-op", order, t.elapsed().as_nanos()));

        let t = Instant::now();
        let lagrange = lagrange_invert(v, order)?;
        rows.push(row("lagrange", order, t.elapsed().as_nanos()));

        let reference = operator.inverse();
        assert!(
            pwq.approx_eq(reference, tol)
                && matrix_op.inverse().approx_eq(reference, tol)
                && lagrange.approx_eq(reference, tol),
            "routes disagree at order {order}"
        );
    }
    Ok(rows)
}

/// Time the operator and Kronecker-matrix routes for a system.
pub fn bench_multivariate<F: Coeff>(
    v: &PolySystem<F>,
    orders: &[usize],
    tol: f64,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &order in orders {
        let t = Instant::now();
        let operator = invert_system(v, order)?;
        rows.push(row("operator", order, t.elapsed().as_nanos()));

        let t = Instant::now();
        let matrix_op = multivariate_matrix_invert(v, order)?;
        rows.push(row("matrix-op", order, t.elapsed().as_nanos()));

        assert!(
            operator
                .iter()
                .zip(matrix_op.iter())
                .all(|(a, b)| a.approx_eq(b, tol)),
            "routes disagree at order {order}"
        );
    }
    Ok(rows)
}

fn row(method: &str, order: usize, nanoseconds: u128) -> BenchRow {
    BenchRow {
        method: method.to_string(),
        order,
        nanoseconds,
    }
}
