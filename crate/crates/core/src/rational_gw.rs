//! The genus-zero potential
//!
//! ```text
//! Gamma = sum_{d >= 1} N_d e^{d y1} y2^(3d-1) / (3d-1)!
//! ```
//!
//! and the WDVV equation `Gamma_222 - Gamma_112^2 + Gamma_111 Gamma_122 = 0`,
//! which fixes every `N_d` once `N_1 = 1` is given.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::{InvariantKind, InvariantTable, Route};
use crate::rational::{factorial, int, Rational};
use crate::series::BigradedSeries;

/// The one external input: a single line passes through two points.
pub fn seed() -> Rational {
    Rational::one()
}

/// `y2`-exponent of the degree-`d` term of the rational potential.
pub fn gamma_exponent(d: u32) -> u32 {
    3 * d - 1
}

/// The potential built from `table`, known through degree `truncation`.
pub fn gamma_series(table: &InvariantTable, truncation: u32) -> Result<BigradedSeries> {
    table.require(truncation)?;
    Ok(gamma_from_values(&table.values()[..truncation as usize], truncation))
}

fn gamma_from_values(values: &[Rational], truncation: u32) -> BigradedSeries {
    BigradedSeries::from_terms(
        values.iter().enumerate().map(|(i, n)| {
            let d = i as u32 + 1;
            let k = gamma_exponent(d);
            (d, k, n / factorial(k))
        }),
        truncation,
    )
}

/// Left side of the WDVV equation, `Gamma_222 - Gamma_112^2 + Gamma_111 Gamma_122`.
pub fn wdvv_residual(gamma: &BigradedSeries) -> BigradedSeries {
    let g222 = gamma.partial(0, 3);
    let g112 = gamma.partial(2, 1);
    let g111 = gamma.partial(3, 0);
    let g122 = gamma.partial(1, 2);
    &(&g222 - &(&g112 * &g112)) + &(&g111 * &g122)
}

/// Every residual term must sit at `k = 3d - 4`; anything else means the
/// series was assembled wrongly.
pub fn check_wdvv_shape(residual: &BigradedSeries) -> Result<()> {
    check_shape(residual, "WDVV residual", |d| 3 * d as i64 - 4)
}

pub(crate) fn check_shape(
    series: &BigradedSeries,
    context: &'static str,
    expected_k: impl Fn(u32) -> i64,
) -> Result<()> {
    for ((d, k), _) in series.terms() {
        if k as i64 != expected_k(d) {
            return Err(Error::ShapeViolation {
                context,
                d,
                k,
                expected_k: expected_k(d),
            });
        }
    }
    Ok(())
}

/// Solution of `a + slope * x = 0` from the values `at0 = a` and
/// `at1 = a + slope` of an affine function of `x`.
pub(crate) fn solve_affine(at0: &Rational, at1: &Rational, d: u32) -> Result<Rational> {
    let slope = at1 - at0;
    if slope.is_zero() {
        return Err(if at0.is_zero() {
            Error::Underdetermined { d }
        } else {
            Error::Inconsistent { d }
        });
    }
    Ok(-at0 / slope)
}

/// Result of [`solve_wdvv_from`]: the table and how many degrees actually
/// went through the solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WdvvSolution {
    pub table: InvariantTable,
    pub solved_degrees: u32,
}

/// `N_1, ..., N_{d_max}` from the seed `N_1 = 1` and the WDVV equation.
pub fn solve_wdvv(d_max: u32) -> Result<InvariantTable> {
    solve_wdvv_from(None, d_max).map(|s| s.table)
}

/// Like [`solve_wdvv`], but resumes from an already known prefix. Degrees in
/// the prefix are not re-solved; they are re-checked against the residual.
pub fn solve_wdvv_from(known: Option<&InvariantTable>, d_max: u32) -> Result<WdvvSolution> {
    if d_max == 0 {
        return Err(Error::EmptyRange);
    }
    let mut values: Vec<Rational> = match known {
        Some(t) if t.d_max() > 0 => t.values()[..t.d_max().min(d_max) as usize].to_vec(),
        _ => vec![seed()],
    };
    if values[0] != seed() {
        return Err(Error::Inconsistent { d: 1 });
    }
    let start = values.len() as u32 + 1;
    // A cached prefix must itself satisfy the equation.
    let known_through = values.len() as u32;
    let residual = wdvv_residual(&gamma_from_values(&values, known_through));
    check_wdvv_shape(&residual)?;
    if let Some(((d, k), _)) = residual.terms().next() {
        return Err(Error::NonzeroResidual { context: "WDVV", d, k });
    }

    for d in start..=d_max {
        let key_k = 3 * d - 4;
        let mut probe = |n: Rational| -> Result<Rational> {
            values.push(n);
            let residual = wdvv_residual(&gamma_from_values(&values, d));
            values.pop();
            check_wdvv_shape(&residual)?;
            // Lower degrees were settled already; only degree d may survive.
            if let Some(((dd, k), _)) = residual.terms().find(|((dd, _), _)| *dd < d) {
                return Err(Error::NonzeroResidual { context: "WDVV", d: dd, k });
            }
            residual.coefficient(d, key_k)
        };
        let at0 = probe(int(0))?;
        let at1 = probe(int(1))?;
        values.push(solve_affine(&at0, &at1, d)?);
    }

    let table = InvariantTable::new(InvariantKind::Rational, values, Route::Wdvv)?;
    Ok(WdvvSolution {
        table,
        solved_degrees: (d_max + 1).saturating_sub(start),
    })
}

/// Whether `Gamma_1 - (y2/3) Gamma_2 - Gamma/3` vanishes through the truncation.
/// True for any series supported on `k = 3d - 1`.
pub fn check_gamma_scaling(gamma: &BigradedSeries) -> bool {
    let third = crate::rational::ratio(1, 3);
    let lhs = gamma.d1();
    let rhs = &gamma.d2().shift_y2(1).scale(&third) + &gamma.scale(&third);
    (&lhs - &rhs).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num_bigint::BigInt;

    /// Coefficient of the residual at `(d, 3d-4)` expanded by hand:
    /// `N_d/(3d-4)! - sum_{d1+d2=d} [d1^2 d2^2/((3d1-2)!(3d2-2)!) - d1^3 d2/((3d1-1)!(3d2-3)!)] N_d1 N_d2`.
    fn hand_oracle(prefix: &[i64]) -> Rational {
        let d = prefix.len() as u32 + 1;
        let f = |n: u32| Rational::from_integer(factorial(n));
        let mut sum = Rational::zero();
        for d1 in 1..d {
            let d2 = d - d1;
            let (n1, n2) = (int(prefix[d1 as usize - 1]), int(prefix[d2 as usize - 1]));
            let w = int((d1 * d1 * d2 * d2) as i64) / (f(3 * d1 - 2) * f(3 * d2 - 2))
                - int((d1 * d1 * d1 * d2) as i64) / (f(3 * d1 - 1) * f(3 * d2 - 3));
            sum += w * n1 * n2;
        }
        sum * f(3 * d - 4)
    }

    #[test]
    fn hand_oracle_gives_first_values() {
        // d = 2 expanded fully: N_2/2 - 1 + 1/2 = 0.
        assert_eq!(hand_oracle(&[1]), int(1));
        assert_eq!(hand_oracle(&[1, 1]), int(12));
        assert_eq!(hand_oracle(&[1, 1, 12]), int(620));
    }

    #[test]
    fn solver_matches_hand_oracle() {
        let t = solve_wdvv(3).unwrap();
        assert_eq!(t.values(), &[int(1), int(1), int(12)]);
        assert_eq!(solve_wdvv(2).unwrap().get(2), Some(&int(1)));
        let t = solve_wdvv(5).unwrap();
        let expected: Vec<Rational> = [1, 1, 12, 620, 87304].iter().map(|&n| int(n)).collect();
        assert_eq!(t.values(), expected.as_slice());
        assert_eq!(t.route(), Route::Wdvv);
    }

    #[test]
    fn gamma_series_shape() {
        let t = solve_wdvv(3).unwrap();
        let g = gamma_series(&t, 3).unwrap();
        assert_eq!(g.coefficient(1, 2).unwrap(), ratio(1, 2));
        assert_eq!(g.coefficient(3, 8).unwrap(), Rational::new(BigInt::from(12), factorial(8)));
        let empty = InvariantTable::new_unchecked(InvariantKind::Rational, Vec::new(), Route::Wdvv);
        assert!(gamma_series(&empty, 0).unwrap().is_empty());
        assert_eq!(
            gamma_series(&t, 4),
            Err(Error::TableTooShort { required: 4, available: 3 })
        );
    }

    #[test]
    fn convolution_of_degree_one_terms() {
        let g = gamma_series(&solve_wdvv(3).unwrap(), 3).unwrap();
        assert_eq!((&g * &g).coefficient(2, 4).unwrap(), ratio(1, 4));
        assert_eq!(g.d1().coefficient(3, 8).unwrap(), Rational::new(BigInt::from(36), factorial(8)));
    }

    #[test]
    fn residual_cases() {
        let t = solve_wdvv(5).unwrap();
        let g1 = gamma_series(&t, 1).unwrap();
        assert!(wdvv_residual(&g1).is_empty());
        assert!(wdvv_residual(&gamma_series(&t, 5).unwrap()).is_empty());

        let mut vals = t.values()[..2].to_vec();
        vals[1] = int(2);
        let bad = InvariantTable::new_unchecked(InvariantKind::Rational, vals, Route::Wdvv);
        let r = wdvv_residual(&gamma_series(&bad, 2).unwrap());
        assert_eq!(r.coefficient(2, 2).unwrap(), ratio(1, 2));
        check_wdvv_shape(&r).unwrap();
    }

    #[test]
    fn resume_skips_known_degrees() {
        let prefix = solve_wdvv(4).unwrap();
        let resumed = solve_wdvv_from(Some(&prefix), 6).unwrap();
        assert_eq!(resumed.solved_degrees, 2);
        assert_eq!(resumed.table, solve_wdvv(6).unwrap());
        assert_eq!(solve_wdvv_from(Some(&prefix), 3).unwrap().solved_degrees, 0);

        let corrupt = InvariantTable::new_unchecked(
            InvariantKind::Rational,
            [1, 1, 13].iter().map(|&n| int(n)).collect(),
            Route::Wdvv,
        );
        assert_eq!(
            solve_wdvv_from(Some(&corrupt), 5),
            Err(Error::NonzeroResidual { context: "WDVV", d: 3, k: 5 })
        );
    }

    #[test]
    fn zero_degree_is_rejected() {
        assert_eq!(solve_wdvv(0), Err(Error::EmptyRange));
    }

    #[test]
    fn affine_probe_degenerate_cases() {
        assert_eq!(solve_affine(&int(0), &int(0), 4), Err(Error::Underdetermined { d: 4 }));
        assert_eq!(solve_affine(&int(1), &int(1), 4), Err(Error::Inconsistent { d: 4 }));
        assert_eq!(solve_affine(&int(-3), &int(-1), 4).unwrap(), ratio(3, 2));
    }

    #[test]
    fn scaling_relation() {
        let g = gamma_series(&solve_wdvv(10).unwrap(), 10).unwrap();
        assert!(check_gamma_scaling(&g));
        let off = BigradedSeries::monomial(2, 4, int(1), 3).unwrap();
        assert!(!check_gamma_scaling(&off));
    }
}
