//! End-to-end acceptance suite. Each test prints one pass line for the
//! behavior it pins down (run with `--nocapture` to see them).

use std::time::Instant;

use num::{BigRational, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use serinv_core::coeff::Coeff;
use serinv_core::fixtures::{cubic, cubic_cos_pi_4, rat, t3, two_var_system};
use serinv_core::matrix::{multivariate_matrix_invert, pwq_invert, ybar_invert};
use serinv_core::multi::{MSeries, MultiIndex};
use serinv_core::multivariate::{canonical_table, invert_system, system_residual};
use serinv_core::oracles::{
    chebyshev_u, composition_residual_series, lagrange_invert, t3_inverse_closed_form,
    w_period8_closed_form,
};
use serinv_core::series::Series1;
use serinv_core::univariate::{
    apply_diff_operator, canonical_polynomials, compute_w, invert_series, shift_invert,
};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

fn t3_inverse_order7() -> Series1<BigRational> {
    Series1::from_terms(
        &[
            (1, rat(-1, 3)),
            (3, rat(-4, 81)),
            (5, rat(-16, 729)),
            (7, rat(-256, 19683)),
        ],
        7,
    )
}

/// Deterministic pool of 100 random polynomial maps, degree <= 5, V(0) = 0,
/// V'(0) != 0.
fn random_maps(deg: usize) -> Vec<Series1<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e41);
    (0..100)
        .map(|_| {
            let mut coeffs = vec![rat(0, 1)];
            let mut c1 = rat(0, 1);
            while c1.is_zero() {
                c1 = rat(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            }
            coeffs.push(c1);
            for _ in 2..=deg {
                coeffs.push(rat(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
            }
            Series1::new(coeffs)
        })
        .collect()
}

#[test]
fn criterion_01_t3_four_routes() {
    let start = Instant::now();
    let v = t3::<BigRational>();
    let expect = t3_inverse_order7();

    assert_eq!(*invert_series(&v, 7).unwrap().inverse(), expect);
    let w = compute_w(&v, 7).unwrap();
    assert_eq!(pwq_invert(w.coeffs(), 7).unwrap(), expect);
    assert_eq!(*ybar_invert(&v, 7).unwrap().inverse(), expect);
    assert_eq!(lagrange_invert(&v, 7).unwrap(), expect);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("PASS criterion 1: all four routes reproduce the T3 inverse to order 7 in {elapsed:?}");
}

#[test]
fn criterion_02_t3_closed_form() {
    let u = invert_series(&t3::<BigRational>(), 15).unwrap();
    assert_eq!(*u.inverse(), t3_inverse_closed_form::<BigRational>(15));
    println!("PASS criterion 2: operator route equals the closed-form T3 inverse to order 15");
}

#[test]
fn criterion_03_cubic_float_fixture() {
    let tol = 1e-10;
    let v = cubic_cos_pi_4();
    let basis = canonical_polynomials(&v, 6).unwrap();

    // printed polynomials y_2..y_6, coefficients of x^1..x^k
    let expected: [&[f64]; 5] = [
        &[SQRT_2, 1.0],
        &[4.0, 3.0 * SQRT_2, 1.0],
        &[10.0 * SQRT_2, 22.0, 6.0 * SQRT_2, 1.0],
        &[40.0, 90.0 * SQRT_2, 70.0, 10.0 * SQRT_2, 1.0],
        &[-140.0 * SQRT_2, 700.0, 420.0 * SQRT_2, 170.0, 15.0 * SQRT_2, 1.0],
    ];
    for (k, row) in (2..=6).zip(expected.iter()) {
        assert!(basis.coeff(k, 0).abs() <= tol);
        for (j, c) in row.iter().enumerate() {
            assert!(
                (basis.coeff(k, j + 1) - c).abs() <= tol,
                "y_{k} coefficient of x^{} is {} expected {c}",
                j + 1,
                basis.coeff(k, j + 1),
            );
        }
    }

    let u = invert_series(&v, 6).unwrap();
    let expect_u = [
        0.0,
        1.0,
        SQRT_2 / 2.0,
        2.0 / 3.0,
        SQRT_2 * 5.0 / 12.0,
        1.0 / 3.0,
        -SQRT_2 * 7.0 / 36.0,
    ];
    for (j, c) in expect_u.iter().enumerate() {
        assert!((u.inverse().coeff(j) - c).abs() <= tol);
    }
    println!("PASS criterion 3: float-mode cubic reproduces y_2..y_6 and U to order 6 at 1e-10");
}

#[test]
fn criterion_04_chebyshev_structure() {
    // exact: W coefficients equal U_n(alpha) for rational alpha
    for alpha in [rat(0, 1), rat(1, 2), rat(3, 5)] {
        let w = compute_w(&cubic(&alpha), 12).unwrap();
        for n in 0..=12 {
            assert_eq!(w.coeff(n), chebyshev_u(&alpha, n), "alpha={alpha} n={n}");
        }
    }
    // float: alpha = cos(pi/4) gives period-8 coefficients matching the
    // displayed rational function
    let w = compute_w(&cubic_cos_pi_4(), 24).unwrap();
    let closed = w_period8_closed_form(24);
    for n in 0..=24 {
        assert!((w.coeff(n) - closed.coeff(n)).abs() <= 1e-12);
        if n + 8 <= 24 {
            assert!((w.coeff(n) - w.coeff(n + 8)).abs() <= 1e-12);
        }
    }
    println!("PASS criterion 4: W coefficients are Chebyshev-U values; period 8 at cos(pi/4)");
}

#[test]
fn criterion_05_two_variable_system() {
    let mi = |c: &[usize]| MultiIndex::new(c.to_vec());
    let sys = two_var_system::<BigRational>(2);
    let table = canonical_table(&sys, 2).unwrap();

    let expect_y = [
        (vec![0, 1], vec![(vec![0, 1], rat(1, 1))]),
        (vec![1, 0], vec![(vec![1, 0], rat(1, 1))]),
        (
            vec![0, 2],
            vec![(vec![0, 2], rat(1, 1)), (vec![1, 0], rat(-1, 1))],
        ),
        (
            vec![1, 1],
            vec![(vec![0, 1], rat(1, 1)), (vec![1, 1], rat(1, 1))],
        ),
        (vec![2, 0], vec![(vec![2, 0], rat(1, 1))]),
    ];
    for (idx, terms) in expect_y {
        let y = table.get(&mi(&idx)).unwrap();
        let expect = MSeries::from_terms(
            terms.into_iter().map(|(m, c)| (mi(&m), c)).collect(),
            2,
            y.order(),
        );
        assert_eq!(*y, expect, "y_{idx:?}");
    }

    // The printed inverse has a typo in U1 (it fails V(U) = v); the
    // composition residual arbitrates: U1 = v1 - v2^2/2, U2 = v2 + v1 v2.
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

    // Kronecker matrix route agrees exactly
    let u_kron = multivariate_matrix_invert(&sys, 2).unwrap();
    assert_eq!(u, u_kron);
    println!("PASS criterion 5: two-variable canonical table and inverse match; Kronecker route agrees");
}

#[test]
fn criterion_06_power_column_suite() {
    for v in random_maps(5) {
        let basis = canonical_polynomials(&v, 10).unwrap();
        let u = basis.power_series(1).unwrap();
        for m in 1..=5 {
            assert_eq!(basis.power_series(m).unwrap(), u.pow(m));
        }
    }
    println!("PASS criterion 6: U^m equals the ring power of U on 100 random maps, m = 1..5");
}

#[test]
fn criterion_07_oracle_equivalence() {
    for v in random_maps(5) {
        let n = 10;
        let operator = invert_series(&v, n).unwrap();
        let w = compute_w(&v, n).unwrap();
        assert_eq!(&pwq_invert(w.coeffs(), n).unwrap(), operator.inverse());
        assert_eq!(ybar_invert(&v, n).unwrap().inverse(), operator.inverse());
        assert_eq!(&lagrange_invert(&v, n).unwrap(), operator.inverse());
        assert!(composition_residual_series(&v, operator.inverse(), n)
            .unwrap()
            .is_zero());
    }
    println!("PASS criterion 7: Lagrange oracle equals every route; residual 0 on 100 random maps");
}

#[test]
fn criterion_08_lowering_relations() {
    // univariate: V(D) y_n = n y_{n-1}, n <= 8
    let mut rng = ChaCha8Rng::seed_from_u64(0x10e1);
    let mut maps = vec![t3::<BigRational>(), cubic(&rat(3, 5))];
    for _ in 0..5 {
        let coeffs = vec![
            rat(0, 1),
            rat(rng.gen_range(1..=9), rng.gen_range(1..=4)),
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
            rat(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
        ];
        maps.push(Series1::new(coeffs));
    }
    for v in &maps {
        let n = 8;
        let basis = canonical_polynomials(v, n).unwrap();
        for k in 1..=n {
            let lowered = apply_diff_operator(&v.extended(n), &basis.polynomial(k));
            let expect = basis.polynomial(k - 1).extended(n).scale(&rat(k as i64, 1));
            assert_eq!(lowered.extended(n), expect);
        }
    }

    // multivariate: V_i(D) y_n = n_i y_{n - e_i}, |n| <= 5, N <= 3
    use serinv_core::multivariate::{lowering_apply, PolySystem};
    let mi = |c: &[usize]| MultiIndex::new(c.to_vec());
    let three_var = PolySystem::new(vec![
        MSeries::from_terms(
            vec![(mi(&[1, 0, 0]), rat(1, 1)), (mi(&[0, 2, 0]), rat(1, 2))],
            3,
            5,
        ),
        MSeries::from_terms(
            vec![(mi(&[0, 1, 0]), rat(1, 1)), (mi(&[1, 0, 1]), rat(-1, 1))],
            3,
            5,
        ),
        MSeries::from_terms(
            vec![(mi(&[0, 0, 1]), rat(1, 1)), (mi(&[2, 0, 0]), rat(1, 3))],
            3,
            5,
        ),
    ])
    .unwrap();
    for (sys, order) in [(two_var_system::<BigRational>(5), 5usize), (three_var, 5)] {
        let table = canonical_table(&sys, order).unwrap();
        for (m, y) in table.entries() {
            for i in 0..sys.nvars() {
                if let Some(down) = m.minus_unit(i) {
                    let lowered = lowering_apply(sys.component(i), y).unwrap();
                    let expect = table
                        .get(&down)
                        .unwrap()
                        .scale(&rat(m.component(i) as i64, 1));
                    assert!(lowered.approx_eq(&expect, 0.0), "failed at {m:?} i={i}");
                }
            }
        }
    }
    println!("PASS criterion 8: lowering relations hold, univariate n <= 8 and multivariate |n| <= 5");
}

#[test]
fn criterion_09_shift_remark() {
    let v = Series1::from_terms(&[(2, rat(1, 1))], 2);
    let s = shift_invert(&v, &rat(1, 1), &rat(1, 1), 3).unwrap();
    let expect = Series1::from_terms(
        &[
            (0, rat(1, 1)),
            (1, rat(1, 2)),
            (2, rat(-1, 8)),
            (3, rat(1, 16)),
        ],
        3,
    );
    assert_eq!(s.series, expect);
    assert_eq!(s.residual, 0.0);
    println!("PASS criterion 9: shifted inversion of z^2 at (1, 1) matches the sqrt series, residual 0");
}
