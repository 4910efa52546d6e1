//! Multivariate polynomials / total-degree-truncated series, and matrices
//! with series entries.

use std::collections::BTreeMap;

use crate::coeff::{factorial, Coeff};
use crate::error::{InversionError, Result};

/// Exponent tuple (n_1, ..., n_N).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(components: Vec<usize>) -> Self {
        MultiIndex(components)
    }

    pub fn zero(nvars: usize) -> Self {
        MultiIndex(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut c = vec![0; nvars];
        c[i] = 1;
        MultiIndex(c)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn component(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn total_degree(&self) -> usize {
        self.0.iter().sum()
    }

    /// n! = prod n_i! as a field element.
    pub fn factorial<F: Coeff>(&self) -> F {
        let mut acc = F::one();
        for &n in &self.0 {
            acc = acc * factorial::<F>(n);
        }
        acc
    }

    pub fn plus_unit(&self, i: usize) -> Self {
        let mut c = self.0.clone();
        c[i] += 1;
        MultiIndex(c)
    }

    pub fn minus_unit(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut c = self.0.clone();
        c[i] -= 1;
        Some(MultiIndex(c))
    }

    /// All multi-indices with `nvars` components and total degree exactly `d`.
    pub fn with_degree(nvars: usize, d: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; nvars];
        fn rec(cur: &mut Vec<usize>, pos: usize, rem: usize, out: &mut Vec<MultiIndex>) {
            if pos + 1 == cur.len() {
                cur[pos] = rem;
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for k in 0..=rem {
                cur[pos] = k;
                rec(cur, pos + 1, rem - k, out);
            }
        }
        if nvars == 0 {
            if d == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(&mut cur, 0, d, &mut out);
        out
    }

    /// All multi-indices with total degree at most `order`, by degree.
    pub fn up_to_degree(nvars: usize, order: usize) -> Vec<MultiIndex> {
        (0..=order)
            .flat_map(|d| Self::with_degree(nvars, d))
            .collect()
    }
}

/// A multivariate series (or polynomial) truncated by total degree. Only
/// nonzero terms are stored in rational mode; float zeros are removed only by
/// an explicit `cleanup`.
#[derive(Debug, Clone, PartialEq)]
pub struct MSeries<F> {
    nvars: usize,
    order: usize,
    terms: BTreeMap<MultiIndex, F>,
}

impl<F: Coeff> MSeries<F> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        MSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: F, nvars: usize, order: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(MultiIndex::zero(nvars), c);
        s
    }

    pub fn one(nvars: usize, order: usize) -> Self {
        Self::constant(F::one(), nvars, order)
    }

    /// The variable x_i as a series.
    pub fn variable(i: usize, nvars: usize, order: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(MultiIndex::unit(nvars, i), F::one());
        s
    }

    pub fn from_terms(terms: Vec<(MultiIndex, F)>, nvars: usize, order: usize) -> Self {
        let mut s = Self::zero(nvars, order);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "multi-index arity mismatch");
            s.add_term(m, c);
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &F)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &MultiIndex) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.is_zero())
    }

    /// Actual maximal total degree among stored terms (None if zero).
    pub fn total_degree(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, _)| m.total_degree())
            .max()
    }

    /// Accumulate a term, honoring the truncation bound. Exact zeros are
    /// dropped in rational mode.
    pub fn add_term(&mut self, m: MultiIndex, c: F) {
        if m.total_degree() > self.order {
            return;
        }
        let new = match self.terms.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !(F::EXACT && new.is_zero()) {
            self.terms.insert(m, new);
        }
    }

    /// Same series under a different truncation bound. Lowering the bound
    /// drops terms; raising it is exact for polynomials.
    pub fn with_order(&self, order: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.total_degree() <= order)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MSeries {
            nvars: self.nvars,
            order,
            terms,
        }
    }

    fn check_compat(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(InversionError::DimensionMismatch(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.nvars, order);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        MSeries {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.clone() * c.clone());
        }
        out
    }

    /// Product truncated to the common total-degree bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compat(other)?;
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.nvars, order);
        for (ma, ca) in &self.terms {
            if ca.is_zero() || ma.total_degree() > order {
                continue;
            }
            for (mb, cb) in &other.terms {
                if cb.is_zero() {
                    continue;
                }
                if ma.total_degree() + mb.total_degree() > order {
                    continue;
                }
                let m = MultiIndex(
                    ma.0.iter()
                        .zip(mb.0.iter())
                        .map(|(a, b)| a + b)
                        .collect(),
                );
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn pow(&self, m: usize) -> Result<Self> {
        let mut acc = Self::one(self.nvars, self.order);
        for _ in 0..m {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Partial derivative in variable `i` (0-based).
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(InversionError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars, self.order);
        for (m, c) in &self.terms {
            if let Some(down) = m.minus_unit(i) {
                out.add_term(down, c.clone() * F::from_int(m.component(i) as i64));
            }
        }
        Ok(out)
    }

    /// Repeated partials per the exponent tuple `m`.
    pub fn partial_multi(&self, m: &MultiIndex) -> Result<Self> {
        let mut acc = self.clone();
        for i in 0..m.nvars() {
            for _ in 0..m.component(i) {
                acc = acc.partial(i)?;
            }
        }
        Ok(acc)
    }

    /// Multiply by the variable x_i, raising the truncation bound by one so
    /// no term is lost.
    pub fn mul_var(&self, i: usize) -> Result<Self> {
        if i >= self.nvars {
            return Err(InversionError::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Self::zero(self.nvars, self.order + 1);
        for (m, c) in &self.terms {
            out.add_term(m.plus_unit(i), c.clone());
        }
        Ok(out)
    }

    /// Substitute z_i -> z_i + c_i (exact Taylor re-centering of a
    /// polynomial).
    pub fn shifted(&self, center: &[F]) -> Result<Self> {
        if center.len() != self.nvars {
            return Err(InversionError::DimensionMismatch(format!(
                "shift center has {} entries for {} variables",
                center.len(),
                self.nvars
            )));
        }
        let mut acc = self.clone();
        for (i, c) in center.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut next = Self::zero(self.nvars, self.order);
            for (m, a) in &acc.terms {
                // (z_i + c)^{m_i} expanded binomially
                let mi = m.component(i);
                let mut binom = F::one();
                let mut cpow = F::one();
                // k runs from m_i down to 0; coefficient C(mi,k) c^{mi-k}
                for k in (0..=mi).rev() {
                    let mut idx = m.0.clone();
                    idx[i] = k;
                    next.add_term(
                        MultiIndex(idx),
                        a.clone() * binom.clone() * cpow.clone(),
                    );
                    if k > 0 {
                        // update C(mi, k-1) = C(mi,k) * k / (mi-k+1)
                        binom = binom * F::from_int(k as i64)
                            * F::from_int((mi - k + 1) as i64).inverse().unwrap();
                        cpow = cpow * c.clone();
                    }
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Substitute the series `args` for the variables of `self`; `self` is
    /// treated as a polynomial. Each argument must vanish at the origin.
    pub fn substitute(&self, args: &[Self]) -> Result<Self> {
        if args.len() != self.nvars {
            return Err(InversionError::DimensionMismatch(format!(
                "{} arguments for {} variables",
                args.len(),
                self.nvars
            )));
        }
        let nvars = args[0].nvars;
        let order = args.iter().map(|a| a.order).min().unwrap();
        let mut out = MSeries::zero(nvars, order);
        for (m, c) in &self.terms {
            let mut term = MSeries::constant(c.clone(), nvars, order);
            for i in 0..self.nvars {
                for _ in 0..m.component(i) {
                    term = term.mul(&args[i])?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    pub fn constant_term(&self) -> F {
        self.coeff(&MultiIndex::zero(self.nvars))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|m| self.coeff(m).approx_eq(&other.coeff(m), tol))
    }

    /// Drop float coefficients below `tol`; no-op in rational mode (exact
    /// zeros are already dropped on insertion).
    pub fn cleanup(&self, tol: f64) -> Self {
        if F::EXACT {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .filter(|(_, c)| c.abs_f64() >= tol)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MSeries {
            nvars: self.nvars,
            order: self.order,
            terms,
        }
    }
}

/// Square matrix with series entries, all sharing arity and truncation bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesMatrix<F> {
    dim: usize,
    nvars: usize,
    order: usize,
    entries: Vec<MSeries<F>>,
}

impl<F: Coeff> SeriesMatrix<F> {
    pub fn new(dim: usize, entries: Vec<MSeries<F>>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(InversionError::DimensionMismatch(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let nvars = entries[0].nvars();
        let order = entries[0].order();
        if entries
            .iter()
            .any(|e| e.nvars() != nvars || e.order() != order)
        {
            return Err(InversionError::DimensionMismatch(
                "matrix entries disagree on arity or order".into(),
            ));
        }
        Ok(SeriesMatrix {
            dim,
            nvars,
            order,
            entries,
        })
    }

    pub fn identity(dim: usize, nvars: usize, order: usize) -> Self {
        let entries = (0..dim * dim)
            .map(|k| {
                if k / dim == k % dim {
                    MSeries::one(nvars, order)
                } else {
                    MSeries::zero(nvars, order)
                }
            })
            .collect();
        SeriesMatrix {
            dim,
            nvars,
            order,
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, i: usize, j: usize) -> &MSeries<F> {
        &self.entries[i * self.dim + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, s: MSeries<F>) {
        self.entries[i * self.dim + j] = s;
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(InversionError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.dim, self.dim, other.dim, other.dim
            )));
        }
        let order = self.order.min(other.order);
        let mut out = Self::identity(self.dim, self.nvars, order);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = MSeries::zero(self.nvars, order);
                for k in 0..self.dim {
                    acc = acc.add(&self.entry(i, k).mul(other.entry(k, j))?)?;
                }
                out.set_entry(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let order = self.order.min(other.order);
        let mut out = Self::identity(self.dim, self.nvars, order);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set_entry(i, j, self.entry(i, j).add(other.entry(i, j))?);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let order = self.order.min(other.order);
        let mut out = Self::identity(self.dim, self.nvars, order);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set_entry(i, j, self.entry(i, j).sub(other.entry(i, j))?);
            }
        }
        Ok(out)
    }

    /// Constant-term matrix J(0).
    pub fn constant_matrix(&self) -> Vec<Vec<F>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entry(i, j).constant_term())
                    .collect()
            })
            .collect()
    }

    /// Series inverse: exact inversion of the constant term followed by a
    /// Neumann-series correction in the truncated ring. Errors with
    /// `SingularAtOrigin` when J(0) is not invertible.
    pub fn invert(&self) -> Result<Self> {
        let j0 = self.constant_matrix();
        let j0_inv = invert_const_matrix(&j0).ok_or(InversionError::SingularAtOrigin)?;
        let j0_inv_m = Self::from_const(&j0_inv, self.nvars, self.order);
        // K = I - J0^{-1} J has no constant term, so the Neumann series for
        // (I - K)^{-1} terminates at the truncation order.
        let k = Self::identity(self.dim, self.nvars, self.order).sub(&j0_inv_m.mul(self)?)?;
        let mut sum = Self::identity(self.dim, self.nvars, self.order);
        let mut pw = Self::identity(self.dim, self.nvars, self.order);
        for _ in 0..self.order {
            pw = pw.mul(&k)?;
            sum = sum.add(&pw)?;
        }
        sum.mul(&j0_inv_m)
    }

    pub fn from_const(a: &[Vec<F>], nvars: usize, order: usize) -> Self {
        let dim = a.len();
        let entries = a
            .iter()
            .flat_map(|row| {
                row.iter()
                    .map(|c| MSeries::constant(c.clone(), nvars, order))
            })
            .collect();
        SeriesMatrix {
            dim,
            nvars,
            order,
            entries,
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(other.entries.iter())
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Gauss-Jordan inversion over the coefficient field. Returns `None` for a
/// singular matrix. Float mode uses partial pivoting.
pub fn invert_const_matrix<F: Coeff>(a: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = a.len();
    let mut m: Vec<Vec<F>> = a.to_vec();
    let mut inv: Vec<Vec<F>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { F::one() } else { F::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = if F::EXACT {
            (col..n).find(|&r| !m[r][col].is_zero())?
        } else {
            let p = (col..n).max_by(|&r, &s| {
                m[r][col]
                    .abs_f64()
                    .partial_cmp(&m[s][col].abs_f64())
                    .unwrap()
            })?;
            if m[p][col].is_zero() {
                return None;
            }
            p
        };
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let piv_inv = m[col][col].inverse()?;
        for j in 0..n {
            m[col][j] = m[col][j].clone() * piv_inv.clone();
            inv[col][j] = inv[col][j].clone() * piv_inv.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                m[r][j] = m[r][j].clone() - f.clone() * m[col][j].clone();
                inv[r][j] = inv[r][j].clone() - f.clone() * inv[col][j].clone();
            }
        }
    }
    Some(inv)
}
