//! Inversion of polynomial maps C^N -> C^N: Jacobian, its series inverse W,
//! the commuting raising operators Y_i = sum_k x_k W_{ki}(D), and extraction
//! of the inverse components from the canonical table.

use std::collections::BTreeMap;

use crate::coeff::Coeff;
use crate::error::{InversionError, Result};
use crate::multi::{MSeries, MultiIndex, SeriesMatrix};

/// A polynomial system V_1..V_N with V_i(0) = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem<F> {
    nvars: usize,
    components: Vec<MSeries<F>>,
}

impl<F: Coeff> PolySystem<F> {
    pub fn new(components: Vec<MSeries<F>>) -> Result<Self> {
        let nvars = components.len();
        if nvars == 0 {
            return Err(InversionError::DimensionMismatch("empty system".into()));
        }
        for c in &components {
            if c.nvars() != nvars {
                return Err(InversionError::DimensionMismatch(format!(
                    "component in {} variables for a {}-dimensional system",
                    c.nvars(),
                    nvars
                )));
            }
            if !c.constant_term().is_zero() {
                return Err(InversionError::NotNormalized);
            }
        }
        Ok(PolySystem { nvars, components })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn component(&self, i: usize) -> &MSeries<F> {
        &self.components[i]
    }

    pub fn components(&self) -> &[MSeries<F>] {
        &self.components
    }

    /// Jacobian matrix (dV_i/dz_j), entries truncated at `order`.
    pub fn jacobian(&self, order: usize) -> SeriesMatrix<F> {
        let entries = (0..self.nvars)
            .flat_map(|i| {
                (0..self.nvars).map(move |j| {
                    self.components[i]
                        .with_order(self.components[i].order().max(order))
                        .partial(j)
                        .expect("index in range")
                        .with_order(order)
                })
            })
            .collect();
        SeriesMatrix::new(self.nvars, entries).expect("square by construction")
    }

    /// Exact Taylor re-centering: the system z -> V(z + z0) - V(z0).
    pub fn recentered(&self, z0: &[F]) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| {
                let shifted = c.shifted(z0)?;
                let v0 = shifted.constant_term();
                shifted.sub(&MSeries::constant(v0, self.nvars, shifted.order()))
            })
            .collect::<Result<Vec<_>>>()?;
        PolySystem::new(components)
    }
}

/// Table of multivariate canonical polynomials y_n, |n| <= order.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTable<F> {
    order: usize,
    nvars: usize,
    entries: BTreeMap<MultiIndex, MSeries<F>>,
}

impl<F: Coeff> CanonicalTable<F> {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, m: &MultiIndex) -> Option<&MSeries<F>> {
        self.entries.get(m)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&MultiIndex, &MSeries<F>)> {
        self.entries.iter()
    }
}

/// One raising step: p -> sum_k x_k (W_{ki}(D) p). The series entries of W
/// act through their monomials, each substituted by the matching mixed
/// partial; terms beyond deg p annihilate p, so the sum is finite.
pub fn raising_apply<F: Coeff>(
    w: &SeriesMatrix<F>,
    i: usize,
    p: &MSeries<F>,
) -> Result<MSeries<F>> {
    let nvars = w.dim();
    if i >= nvars {
        return Err(InversionError::IndexOutOfRange { index: i, nvars });
    }
    let deg = p.total_degree().unwrap_or(0);
    if deg >= w.order() {
        return Err(InversionError::OrderExhausted {
            degree: deg,
            order: w.order(),
        });
    }
    let mut acc = MSeries::zero(nvars, deg + 1);
    for k in 0..nvars {
        let mut wp = MSeries::zero(nvars, deg);
        for (m, c) in w.entry(k, i).terms() {
            if m.total_degree() > deg || c.is_zero() {
                continue;
            }
            wp = wp.add(&p.partial_multi(m)?.scale(c).with_order(deg))?;
        }
        acc = acc.add(&wp.mul_var(k)?)?;
    }
    Ok(acc)
}

/// Canonical polynomials y_n for all |n| <= order, built by raising along
/// the lowest-index coordinate. Path independence is a property of the
/// commuting Y_i and is covered by tests.
pub fn canonical_table<F: Coeff>(v: &PolySystem<F>, order: usize) -> Result<CanonicalTable<F>> {
    let w = v.jacobian(order).invert()?;
    let nvars = v.nvars();
    let mut entries = BTreeMap::new();
    entries.insert(
        MultiIndex::zero(nvars),
        MSeries::one(nvars, order.max(1)),
    );
    for m in MultiIndex::up_to_degree(nvars, order) {
        if m.total_degree() == 0 {
            continue;
        }
        let i = (0..nvars).find(|&i| m.component(i) > 0).unwrap();
        let prev = entries
            .get(&m.minus_unit(i).unwrap())
            .cloned()
            .expect("predecessor built first");
        entries.insert(m, raising_apply(&w, i, &prev)?);
    }
    Ok(CanonicalTable {
        order,
        nvars,
        entries,
    })
}

/// The inverse map: U_k(v) = sum_n (coefficient of x_k in y_n) v^n / n!.
pub fn invert_system<F: Coeff>(v: &PolySystem<F>, order: usize) -> Result<Vec<MSeries<F>>> {
    let table = canonical_table(v, order)?;
    let nvars = v.nvars();
    let mut out = Vec::with_capacity(nvars);
    for k in 0..nvars {
        let xk = MultiIndex::unit(nvars, k);
        let mut u = MSeries::zero(nvars, order);
        for (m, y) in table.entries() {
            let c = y.coeff(&xk);
            if !c.is_zero() {
                u.add_term(m.clone(), c * m.factorial::<F>().inverse().unwrap());
            }
        }
        out.push(u);
    }
    Ok(out)
}

/// Evaluate the lowering operator V_i(D) on a polynomial, the same
/// monomial-by-monomial evaluation as in `raising_apply`.
pub fn lowering_apply<F: Coeff>(v_i: &MSeries<F>, p: &MSeries<F>) -> Result<MSeries<F>> {
    let deg = p.total_degree().unwrap_or(0);
    let mut acc = MSeries::zero(p.nvars(), p.order());
    for (m, c) in v_i.terms() {
        if m.total_degree() > deg || c.is_zero() {
            continue;
        }
        acc = acc.add(&p.partial_multi(m)?.scale(c))?;
    }
    Ok(acc)
}

/// The residual series V_i(U(v)) - v_i for each component.
pub fn system_residual_series<F: Coeff>(
    v: &PolySystem<F>,
    u: &[MSeries<F>],
) -> Result<Vec<MSeries<F>>> {
    let nvars = v.nvars();
    if u.len() != nvars {
        return Err(InversionError::DimensionMismatch(format!(
            "{} inverse components for a {}-dimensional system",
            u.len(),
            nvars
        )));
    }
    (0..nvars)
        .map(|i| {
            let composed = v.component(i).substitute(u)?;
            let vi = MSeries::variable(i, nvars, composed.order());
            composed.sub(&vi)
        })
        .collect()
}

/// Max-norm of all residual coefficients.
pub fn system_residual<F: Coeff>(v: &PolySystem<F>, u: &[MSeries<F>]) -> Result<f64> {
    Ok(system_residual_series(v, u)?
        .iter()
        .map(|s| s.max_abs_coeff())
        .fold(0.0, f64::max))
}

/// Inverse of a polynomial system near a point z0, per the shift identity
/// U(v) = z0 + U1(v - v0). Returns the series of U1 in (v - v0) together
/// with the centers.
#[derive(Debug, Clone)]
pub struct ShiftedSystemInverse<F> {
    pub z0: Vec<F>,
    pub v0: Vec<F>,
    /// U_k(v) = z0_k + series_k evaluated at (v - v0).
    pub series: Vec<MSeries<F>>,
}

pub fn shift_invert_system<F: Coeff>(
    v: &PolySystem<F>,
    z0: &[F],
    v0: &[F],
    order: usize,
) -> Result<ShiftedSystemInverse<F>> {
    if z0.len() != v.nvars() || v0.len() != v.nvars() {
        return Err(InversionError::DimensionMismatch(
            "shift centers must match the system arity".into(),
        ));
    }
    for (i, c) in v.components().iter().enumerate() {
        let mut val = F::zero();
        for (m, a) in c.terms() {
            let mut t = a.clone();
            for j in 0..v.nvars() {
                for _ in 0..m.component(j) {
                    t = t * z0[j].clone();
                }
            }
            val = val + t;
        }
        if !val.approx_eq(&v0[i], crate::coeff::DEFAULT_TOL) {
            return Err(InversionError::PointMismatch);
        }
    }
    let recentered = v.recentered(z0)?;
    let u1 = invert_system(&recentered, order)?;
    Ok(ShiftedSystemInverse {
        z0: z0.to_vec(),
        v0: v0.to_vec(),
        series: u1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        <BigRational as Coeff>::from_ratio(n, d)
    }

    fn mi(c: &[usize]) -> MultiIndex {
        MultiIndex::new(c.to_vec())
    }

    /// The worked 2x2 example: V1 = z1 + z2^2/2, V2 = z2 - z1 z2.
    pub fn example_system(order: usize) -> PolySystem<BigRational> {
        let v1 = MSeries::from_terms(
            vec![(mi(&[1, 0]), rat(1, 1)), (mi(&[0, 2]), rat(1, 2))],
            2,
            order,
        );
        let v2 = MSeries::from_terms(
            vec![(mi(&[0, 1]), rat(1, 1)), (mi(&[1, 1]), rat(-1, 1))],
            2,
            order,
        );
        PolySystem::new(vec![v1, v2]).unwrap()
    }

    #[test]
    fn jacobian_of_example() {
        let sys = example_system(2);
        let j = sys.jacobian(2);
        let one = MSeries::<BigRational>::one(2, 2);
        let z1 = MSeries::variable(0, 2, 2);
        let z2 = MSeries::variable(1, 2, 2);
        assert_eq!(*j.entry(0, 0), one);
        assert_eq!(*j.entry(0, 1), z2);
        assert_eq!(*j.entry(1, 0), z2.neg());
        assert_eq!(*j.entry(1, 1), one.sub(&z1).unwrap());
    }

    #[test]
    fn jacobian_identity_map() {
        let sys = PolySystem::new(vec![
            MSeries::<BigRational>::variable(0, 2, 2),
            MSeries::variable(1, 2, 2),
        ])
        .unwrap();
        let j = sys.jacobian(2);
        assert_eq!(j, SeriesMatrix::identity(2, 2, 2));
    }

    #[test]
    fn jacobian_triangular_map() {
        // V = (z1 + z2, z2) -> [[1, 1], [0, 1]]
        let v1 = MSeries::<BigRational>::variable(0, 2, 2)
            .add(&MSeries::variable(1, 2, 2))
            .unwrap();
        let v2 = MSeries::variable(1, 2, 2);
        let sys = PolySystem::new(vec![v1, v2]).unwrap();
        let j = sys.jacobian(2);
        let one = MSeries::<BigRational>::one(2, 2);
        assert_eq!(*j.entry(0, 0), one);
        assert_eq!(*j.entry(0, 1), one);
        assert!(j.entry(1, 0).is_zero());
        assert_eq!(*j.entry(1, 1), one);
    }

    #[test]
    fn raising_from_one_gives_variables() {
        let sys = example_system(3);
        let w = sys.jacobian(3).invert().unwrap();
        let one = MSeries::one(2, 3);
        assert_eq!(
            raising_apply(&w, 1, &one).unwrap(),
            MSeries::variable(1, 2, 1)
        );
        assert_eq!(
            raising_apply(&w, 0, &one).unwrap(),
            MSeries::variable(0, 2, 1)
        );
    }

    #[test]
    fn raising_identity_map_multiplies() {
        let sys = PolySystem::new(vec![
            MSeries::<BigRational>::variable(0, 2, 4),
            MSeries::variable(1, 2, 4),
        ])
        .unwrap();
        let w = sys.jacobian(4).invert().unwrap();
        let p = MSeries::variable(1, 2, 2);
        let expect = MSeries::from_terms(vec![(mi(&[1, 1]), rat(1, 1))], 2, 2);
        assert_eq!(raising_apply(&w, 0, &p).unwrap(), expect);
    }

    #[test]
    fn raising_example_y11() {
        // Y_1 x_2 = x_2 + x_1 x_2
        let sys = example_system(3);
        let w = sys.jacobian(3).invert().unwrap();
        let p = MSeries::variable(1, 2, 1);
        let expect = MSeries::from_terms(
            vec![(mi(&[0, 1]), rat(1, 1)), (mi(&[1, 1]), rat(1, 1))],
            2,
            2,
        );
        assert_eq!(raising_apply(&w, 0, &p).unwrap(), expect);
    }

    #[test]
    fn canonical_table_example_order2() {
        let sys = example_system(2);
        let table = canonical_table(&sys, 2).unwrap();
        let check = |idx: &[usize], terms: Vec<(&[usize], (i64, i64))>| {
            let y = table.get(&mi(idx)).unwrap();
            let expect = MSeries::from_terms(
                terms
                    .into_iter()
                    .map(|(m, (n, d))| (mi(m), rat(n, d)))
                    .collect(),
                2,
                y.order(),
            );
            assert_eq!(*y, expect, "y_{idx:?}");
        };
        check(&[0, 1], vec![(&[0, 1], (1, 1))]);
        check(&[1, 0], vec![(&[1, 0], (1, 1))]);
        check(&[0, 2], vec![(&[0, 2], (1, 1)), (&[1, 0], (-1, 1))]);
        check(&[1, 1], vec![(&[0, 1], (1, 1)), (&[1, 1], (1, 1))]);
        check(&[2, 0], vec![(&[2, 0], (1, 1))]);
    }

    #[test]
    fn canonical_table_identity_map() {
        let sys = PolySystem::new(vec![
            MSeries::<BigRational>::variable(0, 2, 3),
            MSeries::variable(1, 2, 3),
        ])
        .unwrap();
        let table = canonical_table(&sys, 3).unwrap();
        for (m, y) in table.entries() {
            let expect = MSeries::from_terms(vec![(m.clone(), rat(1, 1))], 2, y.order());
            assert_eq!(*y, expect);
        }
    }

    #[test]
    fn canonical_table_diagonal_linear_map() {
        // V = (2 z1, 3 z2) -> y_n = (x1/2)^{n1} (x2/3)^{n2}
        let sys = PolySystem::new(vec![
            MSeries::<BigRational>::variable(0, 2, 3).scale(&rat(2, 1)),
            MSeries::variable(1, 2, 3).scale(&rat(3, 1)),
        ])
        .unwrap();
        let table = canonical_table(&sys, 3).unwrap();
        for (m, y) in table.entries() {
            let c = rat(1, 2i64.pow(m.component(0) as u32))
                * rat(1, 3i64.pow(m.component(1) as u32));
            let expect = MSeries::from_terms(vec![(m.clone(), c)], 2, y.order());
            assert_eq!(*y, expect);
        }
    }

    #[test]
    fn invert_example_order2() {
        // Correct inverse of the printed system: U1 = v1 - v2^2/2,
        // U2 = v2 + v1 v2 (composition residual arbitrates).
        let sys = example_system(2);
        let u = invert_system(&sys, 2).unwrap();
        let u1 = MSeries::from_terms(
            vec![(mi(&[1, 0]), rat(1, 1)), (mi(&[0, 2]), rat(-1, 2))],
            2,
            2,
        );
        let u2 = MSeries::from_terms(
            vec![(mi(&[0, 1]), rat(1, 1)), (mi(&[1, 1]), rat(1, 1))],
            2,
            2,
        );
        assert_eq!(u, vec![u1, u2]);
        assert_eq!(system_residual(&sys, &u).unwrap(), 0.0);
    }

    #[test]
    fn invert_identity() {
        let sys = PolySystem::new(vec![
            MSeries::<BigRational>::variable(0, 2, 3),
            MSeries::variable(1, 2, 3),
        ])
        .unwrap();
        let u = invert_system(&sys, 3).unwrap();
        assert_eq!(u[0], MSeries::variable(0, 2, 3));
        assert_eq!(u[1], MSeries::variable(1, 2, 3));
    }

    #[test]
    fn invert_linear_map() {
        // V = A z with A = [[1, 2], [3, 4]]: U = A^{-1} v
        let a = [[rat(1, 1), rat(2, 1)], [rat(3, 1), rat(4, 1)]];
        let comps = (0..2)
            .map(|i| {
                MSeries::from_terms(
                    vec![
                        (mi(&[1, 0]), a[i][0].clone()),
                        (mi(&[0, 1]), a[i][1].clone()),
                    ],
                    2,
                    1,
                )
            })
            .collect();
        let sys = PolySystem::new(comps).unwrap();
        let u = invert_system(&sys, 1).unwrap();
        // A^{-1} = [[-2, 1], [3/2, -1/2]]
        let u1 = MSeries::from_terms(
            vec![(mi(&[1, 0]), rat(-2, 1)), (mi(&[0, 1]), rat(1, 1))],
            2,
            1,
        );
        let u2 = MSeries::from_terms(
            vec![(mi(&[1, 0]), rat(3, 2)), (mi(&[0, 1]), rat(-1, 2))],
            2,
            1,
        );
        assert_eq!(u, vec![u1, u2]);
    }

    #[test]
    fn reduction_to_univariate() {
        // N = 1 must agree with the univariate route.
        let v = MSeries::from_terms(
            vec![(mi(&[1]), rat(-3, 1)), (mi(&[3]), rat(4, 1))],
            1,
            3,
        );
        let sys = PolySystem::new(vec![v]).unwrap();
        let u = invert_system(&sys, 7).unwrap();
        let t3 = crate::series::Series1::from_terms(&[(1, rat(-3, 1)), (3, rat(4, 1))], 3);
        let uni = crate::univariate::invert_series(&t3, 7).unwrap();
        for j in 0..=7 {
            assert_eq!(u[0].coeff(&mi(&[j])), uni.inverse().coeff(j));
        }
    }

    #[test]
    fn singular_jacobian_detected() {
        let sys = PolySystem::new(vec![
            MSeries::<BigRational>::from_terms(vec![(mi(&[2, 0]), rat(1, 1))], 2, 2),
            MSeries::variable(1, 2, 2),
        ])
        .unwrap();
        assert_eq!(
            canonical_table(&sys, 2).err(),
            Some(InversionError::SingularAtOrigin)
        );
    }

    #[test]
    fn rejects_unnormalized_system() {
        let c = MSeries::<BigRational>::one(1, 2);
        assert_eq!(PolySystem::new(vec![c]).err(), Some(InversionError::NotNormalized));
    }

    #[test]
    fn lowering_on_table() {
        // V_i(D) y_n = n_i y_{n - e_i}
        let sys = example_system(4);
        let table = canonical_table(&sys, 4).unwrap();
        for (m, y) in table.entries() {
            for i in 0..2 {
                if let Some(down) = m.minus_unit(i) {
                    let lowered = lowering_apply(sys.component(i), y).unwrap();
                    let expect = table
                        .get(&down)
                        .unwrap()
                        .scale(&rat(m.component(i) as i64, 1));
                    assert!(
                        lowered.approx_eq(&expect, 0.0),
                        "lowering failed at {m:?} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn shift_invert_system_roundtrip() {
        // shift the example system to z0 = (1, 1); v0 = V(z0) = (3/2, 0)
        let sys = example_system(3);
        let z0 = [rat(1, 1), rat(1, 1)];
        let v0 = [rat(3, 2), rat(0, 1)];
        let s = shift_invert_system(&sys, &z0, &v0, 2).unwrap();
        // recentered system must invert with residual zero
        let rec = sys.recentered(&z0).unwrap();
        assert_eq!(system_residual(&rec, &s.series).unwrap(), 0.0);
        // wrong v0 is rejected
        assert!(matches!(
            shift_invert_system(&sys, &z0, &[rat(0, 1), rat(0, 1)], 2),
            Err(InversionError::PointMismatch)
        ));
    }
}
