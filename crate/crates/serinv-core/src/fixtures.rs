//! Shared fixtures: the worked examples used across tests, the CLI, and the
//! benchmark harness.

use num::BigRational;

use crate::coeff::Coeff;
use crate::multi::{MSeries, MultiIndex};
use crate::multivariate::PolySystem;
use crate::series::Series1;

pub fn rat(n: i64, d: i64) -> BigRational {
    <BigRational as Coeff>::from_ratio(n, d)
}

/// T_3(z) = 4z^3 - 3z.
pub fn t3<F: Coeff>() -> Series1<F> {
    Series1::from_terms(&[(1, F::from_int(-3)), (3, F::from_int(4))], 3)
}

/// The cubic z^3/3 - alpha z^2 + z whose W expands in Chebyshev-U values.
pub fn cubic<F: Coeff>(alpha: &F) -> Series1<F> {
    Series1::from_terms(
        &[
            (1, F::one()),
            (2, -alpha.clone()),
            (3, F::from_ratio(1, 3)),
        ],
        3,
    )
}

/// The cubic specialized to alpha = cos(pi/4) (float mode).
pub fn cubic_cos_pi_4() -> Series1<f64> {
    cubic(&std::f64::consts::FRAC_1_SQRT_2)
}

/// The worked 2x2 system V1 = z1 + z2^2/2, V2 = z2 - z1 z2.
pub fn two_var_system<F: Coeff>(order: usize) -> PolySystem<F> {
    let mi = |c: &[usize]| MultiIndex::new(c.to_vec());
    let v1 = MSeries::from_terms(
        vec![
            (mi(&[1, 0]), F::one()),
            (mi(&[0, 2]), F::from_ratio(1, 2)),
        ],
        2,
        order,
    );
    let v2 = MSeries::from_terms(
        vec![
            (mi(&[0, 1]), F::one()),
            (mi(&[1, 1]), F::from_int(-1)),
        ],
        2,
        order,
    );
    PolySystem::new(vec![v1, v2]).expect("fixture is normalized")
}
