//! Explicit matrix formulations of the inversion method: the Toeplitz
//! coefficient recursion (PWQ), the operator-matrix representation
//! Ybar = Xbar W(Dbar), and its Kronecker-product extension to several
//! variables.

use crate::coeff::{factorial, Coeff};
use crate::error::{InversionError, Result};
use crate::multi::{MSeries, MultiIndex};
use crate::multivariate::PolySystem;
use crate::series::Series1;
use crate::univariate::{CanonicalBasis, InversionResult, Method};

/// Dense matrix over the coefficient field.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Coeff> Mat<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn diag(entries: Vec<F>) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i * self.cols + j].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a.clone() * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc + a * v[j].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| {
                let mut acc = F::zero();
                for i in 0..self.rows {
                    if !v[i].is_zero() {
                        let a = self.get(i, j);
                        if !a.is_zero() {
                            acc = acc + v[i].clone() * a;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a.clone() * b,
                        );
                    }
                }
            }
        }
        out
    }
}

/// The matrices of the Toeplitz coefficient recursion: W (Toeplitz in the
/// w-coefficients), P = diag(1!..n!), M = diag(1..n), Q = diag(1/0!..1/(n-1)!).
#[derive(Debug, Clone)]
pub struct PwqSet<F> {
    pub n: usize,
    pub wmat: Mat<F>,
    pub p: Mat<F>,
    pub m: Mat<F>,
    pub q: Mat<F>,
}

impl<F: Coeff> PwqSet<F> {
    /// Build from the coefficients w_0..w_n of W.
    pub fn new(w: &[F], n: usize) -> Self {
        let wc = |k: i64| -> F {
            if k < 0 {
                F::zero()
            } else {
                w.get(k as usize).cloned().unwrap_or_else(F::zero)
            }
        };
        let mut wmat = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                // 1-indexed entry (i+1, j+1) = w_{(i+1)-(j+1)+1}
                wmat.set(i, j, wc(i as i64 - j as i64 + 1));
            }
        }
        let p = Mat::diag((1..=n).map(|k| factorial::<F>(k)).collect());
        let m = Mat::diag((1..=n).map(|k| F::from_int(k as i64)).collect());
        let q = Mat::diag(
            (1..=n)
                .map(|k| factorial::<F>(k - 1).inverse().unwrap())
                .collect(),
        );
        PwqSet { n, wmat, p, m, q }
    }
}

/// Inverse series from the coefficient recursion: start from w_0 e_1,
/// iterate multiplication by (W M) on row vectors, and divide the k-th
/// iterate's first component by k! (the final-Q bookkeeping). Agrees exactly
/// with the operator route.
pub fn pwq_invert<F: Coeff>(w: &[F], n: usize) -> Result<Series1<F>> {
    if n == 0 {
        return Err(InversionError::DimensionMismatch(
            "pwq recursion needs order >= 1".into(),
        ));
    }
    let set = PwqSet::new(w, n);
    let wm = set.wmat.mul(&set.m);
    // s^{(k)} = c^{(k)} P, where c^{(k)} are the coefficients of y_k;
    // s^{(k+1)} = s^{(k)} W M and the v^k coefficient of U is s_1^{(k)}/k!.
    let mut s = vec![F::zero(); n];
    s[0] = w.first().cloned().unwrap_or_else(F::zero);
    let mut coeffs = vec![F::zero(); n + 1];
    let mut k_fact = F::one();
    for k in 1..=n {
        k_fact = k_fact * F::from_int(k as i64);
        coeffs[k] = s[0].clone() * k_fact.inverse().unwrap();
        if k < n {
            s = wm.apply_row(&s);
        }
    }
    Ok(Series1::new(coeffs))
}

/// Matrix of d/dx on polynomials of degree <= n (coefficient column
/// vectors, basis 1, x, ..., x^n).
pub fn dbar<F: Coeff>(n: usize) -> Mat<F> {
    let mut m = Mat::zero(n + 1, n + 1);
    for i in 0..n {
        m.set(i, i + 1, F::from_int(i as i64 + 1));
    }
    m
}

/// Matrix of multiplication by x on the same space, with x * x^n cut off to
/// zero.
pub fn xbar<F: Coeff>(n: usize) -> Mat<F> {
    let mut m = Mat::zero(n + 1, n + 1);
    for i in 1..=n {
        m.set(i, i - 1, F::one());
    }
    m
}

/// The pair (Dbar, Xbar) for degree bound n.
#[derive(Debug, Clone)]
pub struct OperatorMatrices<F> {
    pub n: usize,
    pub dbar: Mat<F>,
    pub xbar: Mat<F>,
}

impl<F: Coeff> OperatorMatrices<F> {
    pub fn new(n: usize) -> Self {
        OperatorMatrices {
            n,
            dbar: dbar(n),
            xbar: xbar(n),
        }
    }
}

/// W(Dbar) as a matrix polynomial, substituting Dbar into the expansion of W
/// up to order n.
pub fn w_of_dbar<F: Coeff>(w: &Series1<F>, n: usize) -> Mat<F> {
    let d = dbar::<F>(n);
    let mut acc = Mat::zero(n + 1, n + 1);
    let mut d_pow = Mat::identity(n + 1);
    for j in 0..=n.min(w.order()) {
        let wj = w.coeff(j);
        if !wj.is_zero() {
            acc = acc.add(&d_pow.scale(&wj));
        }
        if j < n {
            d_pow = d_pow.mul(&d);
        }
    }
    acc
}

/// The matrix representation Ybar = Xbar W(Dbar) of the raising operator.
pub fn ybar_matrix<F: Coeff>(w: &Series1<F>, n: usize) -> Mat<F> {
    xbar::<F>(n).mul(&w_of_dbar(w, n))
}

/// Canonical polynomials via the matrix route: iterate Ybar on the unit
/// vector e_1 (the polynomial 1).
pub fn ybar_iterate<F: Coeff>(w: &Series1<F>, n: usize) -> CanonicalBasis<F> {
    let ybar = ybar_matrix(w, n);
    let mut rows = Vec::with_capacity(n + 1);
    let mut y = vec![F::zero(); n + 1];
    y[0] = F::one();
    rows.push(y.clone());
    for _ in 0..n {
        y = ybar.apply(&y);
        rows.push(y.clone());
    }
    CanonicalBasis::from_rows(n, rows)
}

/// End-to-end inversion through the Ybar representation.
pub fn ybar_invert<F: Coeff>(v: &Series1<F>, n: usize) -> Result<InversionResult<F>> {
    let w = crate::univariate::compute_w(v, n)?;
    let basis = ybar_iterate(&w, n);
    let u = basis.power_series(1)?;
    Ok(crate::univariate::package(v, u, n, Method::MatrixOp))
}

/// Which operator to lift with Kronecker products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Derivative,
    Multiplication,
}

/// I (x) ... (x) B (x) ... (x) I with the base operator in slot `index`
/// (0-based), acting on the tensor basis of monomials with each exponent
/// <= n. Slot 0 varies slowest.
pub fn kron_operator<F: Coeff>(
    nvars: usize,
    n: usize,
    which: OperatorKind,
    index: usize,
) -> Result<Mat<F>> {
    if index >= nvars {
        return Err(InversionError::IndexOutOfRange {
            index,
            nvars,
        });
    }
    let base = match which {
        OperatorKind::Derivative => dbar::<F>(n),
        OperatorKind::Multiplication => xbar::<F>(n),
    };
    let eye = Mat::<F>::identity(n + 1);
    let mut acc: Option<Mat<F>> = None;
    for slot in 0..nvars {
        let factor = if slot == index { &base } else { &eye };
        acc = Some(match acc {
            None => factor.clone(),
            Some(m) => m.kron(factor),
        });
    }
    Ok(acc.unwrap())
}

/// Index of the monomial x^m in the tensor basis used by `kron_operator`.
pub fn tensor_index(m: &MultiIndex, n: usize) -> usize {
    m.components()
        .iter()
        .fold(0, |acc, &e| acc * (n + 1) + e)
}

/// Multivariate inversion computed entirely through Kronecker matrices.
/// Same output contract as `multivariate::invert_system`; the two must agree
/// exactly in rational mode.
pub fn multivariate_matrix_invert<F: Coeff>(
    vsys: &PolySystem<F>,
    order: usize,
) -> Result<Vec<MSeries<F>>> {
    let nvars = vsys.nvars();
    let w = vsys.jacobian(order).invert()?;
    let dim = (order + 1).pow(nvars as u32);

    let d_ops: Vec<Mat<F>> = (0..nvars)
        .map(|j| kron_operator(nvars, order, OperatorKind::Derivative, j))
        .collect::<Result<_>>()?;
    let x_ops: Vec<Mat<F>> = (0..nvars)
        .map(|j| kron_operator(nvars, order, OperatorKind::Multiplication, j))
        .collect::<Result<_>>()?;

    // W_{ki}(D) as a matrix: substitute the commuting D_j matrices into each
    // series entry of W.
    let w_of_d = |k: usize, i: usize| -> Mat<F> {
        let mut acc = Mat::zero(dim, dim);
        for (m, c) in w.entry(k, i).terms() {
            let mut term = Mat::identity(dim);
            for j in 0..nvars {
                for _ in 0..m.component(j) {
                    term = term.mul(&d_ops[j]);
                }
            }
            acc = acc.add(&term.scale(c));
        }
        acc
    };

    // Y_i = sum_k X_k W_{ki}(D)
    let y_ops: Vec<Mat<F>> = (0..nvars)
        .map(|i| {
            let mut acc = Mat::zero(dim, dim);
            for k in 0..nvars {
                acc = acc.add(&x_ops[k].mul(&w_of_d(k, i)));
            }
            acc
        })
        .collect();

    // Build the y_n table on coefficient vectors, raising along the lowest
    // nonzero coordinate.
    let mut table: std::collections::BTreeMap<MultiIndex, Vec<F>> = std::collections::BTreeMap::new();
    let mut e1 = vec![F::zero(); dim];
    e1[0] = F::one();
    table.insert(MultiIndex::zero(nvars), e1);
    for m in MultiIndex::up_to_degree(nvars, order) {
        if m.total_degree() == 0 {
            continue;
        }
        let i = (0..nvars).find(|&i| m.component(i) > 0).unwrap();
        let prev = table[&m.minus_unit(i).unwrap()].clone();
        table.insert(m, y_ops[i].apply(&prev));
    }

    // U_k: coefficient of v^m is (coefficient of x_k in y_m) / m!.
    let mut inverses = Vec::with_capacity(nvars);
    for k in 0..nvars {
        let xk_idx = tensor_index(&MultiIndex::unit(nvars, k), order);
        let mut u = MSeries::zero(nvars, order);
        for (m, y_vec) in &table {
            let c = y_vec[xk_idx].clone();
            if !c.is_zero() {
                u.add_term(m.clone(), c * m.factorial::<F>().inverse().unwrap());
            }
        }
        inverses.push(u);
    }
    Ok(inverses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::univariate::{canonical_polynomials, compute_w, invert_series};
    use num::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        <BigRational as Coeff>::from_ratio(n, d)
    }

    fn t3() -> Series1<BigRational> {
        Series1::from_terms(&[(1, rat(-3, 1)), (3, rat(4, 1))], 3)
    }

    #[test]
    fn qp_equals_m() {
        let w: Vec<BigRational> = (0..=8).map(|k| rat(k + 1, 3)).collect();
        let set = PwqSet::new(&w, 8);
        assert_eq!(set.q.mul(&set.p), set.m);
    }

    #[test]
    fn wmat_is_toeplitz() {
        let w: Vec<BigRational> = vec![rat(1, 1), rat(2, 1), rat(3, 1), rat(4, 1), rat(5, 1)];
        let set = PwqSet::new(&w, 4);
        // first row: w1, w0, 0, 0; last row: w4, w3, w2, w1
        assert_eq!(set.wmat.get(0, 0), rat(2, 1));
        assert_eq!(set.wmat.get(0, 1), rat(1, 1));
        assert_eq!(set.wmat.get(0, 2), rat(0, 1));
        assert_eq!(set.wmat.get(3, 0), rat(5, 1));
        assert_eq!(set.wmat.get(3, 3), rat(2, 1));
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(set.wmat.get(i, j), set.wmat.get(i + 1, j + 1));
            }
        }
    }

    #[test]
    fn pwq_identity_map() {
        // w = (1, 0, ..., 0) -> U = v
        let w: Vec<BigRational> = vec![rat(1, 1); 1];
        let u = pwq_invert(&w, 5).unwrap();
        assert_eq!(u, Series1::identity(5));
    }

    #[test]
    fn pwq_t3() {
        let w = compute_w(&t3(), 7).unwrap();
        let u = pwq_invert(w.coeffs(), 7).unwrap();
        let expect = Series1::from_terms(
            &[
                (1, rat(-1, 3)),
                (3, rat(-4, 81)),
                (5, rat(-16, 729)),
                (7, rat(-256, 19683)),
            ],
            7,
        );
        assert_eq!(u, expect);
    }

    #[test]
    fn ybar_reduces_to_xbar_for_unit_w() {
        let w = Series1::<BigRational>::one(3);
        assert_eq!(ybar_matrix(&w, 3), xbar::<BigRational>(3));
    }

    #[test]
    fn ybar_reproduces_t3_y3() {
        let w = compute_w(&t3(), 3).unwrap();
        let basis = ybar_iterate(&w, 3);
        // y3 = (-1/27)(x^3 + 8x)
        assert_eq!(basis.row(3), &[rat(0, 1), rat(-8, 27), rat(0, 1), rat(-1, 27)]);
    }

    #[test]
    fn ybar_matches_operator_route() {
        let v = Series1::from_terms(&[(1, rat(1, 1)), (2, rat(-2, 3)), (4, rat(1, 5))], 4);
        let n = 6;
        let w = compute_w(&v, n).unwrap();
        let via_matrix = ybar_iterate(&w, n);
        let via_operator = canonical_polynomials(&v, n).unwrap();
        assert_eq!(via_matrix, via_operator);
        assert_eq!(
            *ybar_invert(&v, n).unwrap().inverse(),
            *invert_series(&v, n).unwrap().inverse()
        );
    }

    #[test]
    fn kron_reduces_to_base_for_one_variable() {
        let d = kron_operator::<BigRational>(1, 3, OperatorKind::Derivative, 0).unwrap();
        assert_eq!(d, dbar::<BigRational>(3));
        let x = kron_operator::<BigRational>(1, 3, OperatorKind::Multiplication, 0).unwrap();
        assert_eq!(x, xbar::<BigRational>(3));
    }

    #[test]
    fn kron_different_variables_commute() {
        let d1 = kron_operator::<BigRational>(2, 2, OperatorKind::Derivative, 0).unwrap();
        let x2 = kron_operator::<BigRational>(2, 2, OperatorKind::Multiplication, 1).unwrap();
        assert_eq!(d1.mul(&x2), x2.mul(&d1));
    }

    #[test]
    fn kron_index_out_of_range() {
        assert!(matches!(
            kron_operator::<BigRational>(2, 2, OperatorKind::Derivative, 2),
            Err(InversionError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn commutator_on_low_degrees() {
        // [Dbar, Xbar] = I except in the top degree absorbed by the cutoff
        let n = 5;
        let d = dbar::<BigRational>(n);
        let x = xbar::<BigRational>(n);
        let comm = d.mul(&x).sub(&x.mul(&d));
        for j in 0..n {
            let mut e = vec![rat(0, 1); n + 1];
            e[j] = rat(1, 1);
            let r = comm.apply(&e);
            assert_eq!(r, e, "commutator defect below top degree, j={j}");
        }
    }
}
