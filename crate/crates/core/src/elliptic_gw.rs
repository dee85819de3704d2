//! Genus-one invariants `N_d^(1)` of the plane.
//!
//! The elliptic potential is `E = -y1/8 + E~` with
//! `E~ = sum_d N_d^(1) e^{d y1} y2^(3d) / (3d)!`. Only `E~` is stored as a
//! series; the `-y1/8` term shows up once, as the constant `-1/8` in `E_1`.
//!
//! Three independent routes produce the same table:
//!
//! * [`ehx_table`]: the Eguchi-Hori-Xiong recursion,
//! * [`elliptic_via_integral`]: `E~ = int P / Q dy2` with
//!   `P = (Gamma_111 - 3 Gamma_11 + 2 Gamma_1) / 72` and
//!   `Q = 1 - y2 Gamma_11 / 9 + 2 y2 Gamma_1 / 27`,
//! * [`elliptic_via_pde`]: order-by-order solution of Getzler's equation
//!   ([`getzler_pde_residual`]).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::invariants::{InvariantKind, InvariantTable, Route};
use crate::rational::{binomial, factorial, int, ratio, Rational};
use crate::rational_gw::{check_shape, solve_affine};
use crate::series::BigradedSeries;

/// `y2`-exponent of the degree-`d` term of `E~`.
pub fn elliptic_exponent(d: u32) -> u32 {
    3 * d
}

/// The shifted elliptic potential `E~ = E + y1/8`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticPotential {
    tilde: BigradedSeries,
}

impl EllipticPotential {
    pub fn from_table(table: &InvariantTable, truncation: u32) -> Result<Self> {
        table.require(truncation)?;
        Ok(Self::from_values(&table.values()[..truncation as usize], truncation))
    }

    fn from_values(values: &[Rational], truncation: u32) -> Self {
        let tilde = BigradedSeries::from_terms(
            values.iter().enumerate().map(|(i, n)| {
                let d = i as u32 + 1;
                let k = elliptic_exponent(d);
                (d, k, n / factorial(k))
            }),
            truncation,
        );
        EllipticPotential { tilde }
    }

    /// Wraps a series, which must be supported on `k = 3d` with `d >= 1`.
    pub fn from_series(tilde: BigradedSeries) -> Result<Self> {
        check_shape(&tilde, "elliptic potential", |d| {
            if d == 0 {
                -1
            } else {
                3 * d as i64
            }
        })?;
        Ok(EllipticPotential { tilde })
    }

    pub fn tilde(&self) -> &BigradedSeries {
        &self.tilde
    }

    pub fn truncation(&self) -> u32 {
        self.tilde.truncation()
    }

    /// `N_d^(1)` for `d = 1..=d_max`.
    pub fn invariants(&self, d_max: u32, route: Route) -> Result<InvariantTable> {
        let values = (1..=d_max)
            .map(|d| {
                let k = elliptic_exponent(d);
                Ok(self.tilde.coefficient(d, k)? * factorial(k))
            })
            .collect::<Result<Vec<_>>>()?;
        InvariantTable::new(InvariantKind::Elliptic, values, route)
    }
}

/// The Eguchi-Hori-Xiong recursion
///
/// ```text
/// N_d^(1)/(3d-1)! = C(d,3)/12 * N_d^(0)/(3d-1)!
///     + sum_{d1+d2=d} (3 d1^2 d2 - 2 d1 d2)/9 * N_d1^(0)/(3d1-1)! * N_d2^(1)/(3d2)!
/// ```
pub fn ehx_table(rational: &InvariantTable, d_max: u32) -> Result<InvariantTable> {
    rational.require(d_max)?;
    let f = |n: u32| Rational::from_integer(factorial(n));
    let mut elliptic: Vec<Rational> = Vec::with_capacity(d_max as usize);
    for d in 1..=d_max {
        let n0 = |d: u32| rational.get(d).expect("covered by require");
        let mut rhs = Rational::from_integer(binomial(d, 3)) / int(12) * n0(d) / f(3 * d - 1);
        for d1 in 1..d {
            let d2 = d - d1;
            let weight = ratio((3 * d1 * d1 * d2 - 2 * d1 * d2) as i64, 9);
            rhs += weight * n0(d1) / f(3 * d1 - 1) * &elliptic[d2 as usize - 1] / f(3 * d2);
        }
        elliptic.push(rhs * f(3 * d - 1));
    }
    InvariantTable::new(InvariantKind::Elliptic, elliptic, Route::Ehx)
}

/// `(P, Q)` with `P = (Gamma_111 - 3 Gamma_11 + 2 Gamma_1)/72` and
/// `Q = 1 - y2 Gamma_11/9 + 2 y2 Gamma_1/27`, so that `E~_2 = P / Q`.
pub fn integrand_parts(gamma: &BigradedSeries) -> (BigradedSeries, BigradedSeries) {
    let g1 = gamma.d1();
    let g11 = g1.d1();
    let g111 = g11.d1();
    let p = (&(&g111 - &g11.scale(&int(3))) + &g1.scale(&int(2))).scale(&ratio(1, 72));
    let y2_part = (&g1.scale(&ratio(2, 27)) - &g11.scale(&ratio(1, 9))).shift_y2(1);
    let q = &BigradedSeries::one(gamma.truncation()) + &y2_part;
    (p, q)
}

/// `E~` from the integral formula, known through the truncation of `gamma`.
pub fn elliptic_potential_via_integral(gamma: &BigradedSeries) -> Result<EllipticPotential> {
    let (p, q) = integrand_parts(gamma);
    let tilde = (&p * &q.invert_unit()?).integrate_y2();
    EllipticPotential::from_series(tilde)
}

pub fn elliptic_via_integral(gamma: &BigradedSeries, d_max: u32) -> Result<InvariantTable> {
    if gamma.truncation() < d_max {
        return Err(Error::TableTooShort {
            required: d_max,
            available: gamma.truncation(),
        });
    }
    elliptic_potential_via_integral(&gamma.truncate(d_max))?.invariants(d_max, Route::Integral)
}

/// Left side of Getzler's equation
///
/// ```text
/// 36 E_11 G_122^2 - 48 E_12 G_112 G_122 - 48 E_22 G_222 - 12 E_1 G_1122 G_122
///   + 24 E_1 G_112 G_1222 + 24 E_2 G_2222 + 2 G_1222 G_1112
///   + 1/2 G_12222 G_111 + 3/2 G_22222 - 3 G_1122^2
/// ```
///
/// with `G = Gamma` and `E = E~ - y1/8`. The result is truncated to the
/// smaller of the two truncations.
pub fn getzler_pde_residual(gamma: &BigradedSeries, elliptic: &EllipticPotential) -> BigradedSeries {
    let t = gamma.truncation().min(elliptic.truncation());
    let g = |a, b| gamma.truncate(t).partial(a, b);
    let e = elliptic.tilde().truncate(t);

    let e1 = &e.d1() - &BigradedSeries::constant(ratio(1, 8), t);
    let e2 = e.d2();
    let e11 = e.partial(2, 0);
    let e12 = e.partial(1, 1);
    let e22 = e.partial(0, 2);

    let (g111, g112, g122, g222) = (g(3, 0), g(2, 1), g(1, 2), g(0, 3));
    let (g1112, g1122, g1222, g2222) = (g(3, 1), g(2, 2), g(1, 3), g(0, 4));
    let (g12222, g22222) = (g(1, 4), g(0, 5));

    let terms: [(Rational, BigradedSeries); 10] = [
        (int(36), &e11 * &(&g122 * &g122)),
        (int(-48), &e12 * &(&g112 * &g122)),
        (int(-48), &e22 * &g222),
        (int(-12), &e1 * &(&g1122 * &g122)),
        (int(24), &e1 * &(&g112 * &g1222)),
        (int(24), &e2 * &g2222),
        (int(2), &g1222 * &g1112),
        (ratio(1, 2), &g12222 * &g111),
        (ratio(3, 2), g22222),
        (int(-3), &g1122 * &g1122),
    ];
    terms
        .iter()
        .fold(BigradedSeries::zero(t), |acc, (c, s)| &acc + &s.scale(c))
}

/// Every term of the Getzler residual sits at `k = 3d - 6`.
pub fn check_pde_shape(residual: &BigradedSeries) -> Result<()> {
    check_shape(residual, "Getzler residual", |d| 3 * d as i64 - 6)
}

/// `N_1^(1), ..., N_{d_max}^(1)` by solving Getzler's equation degree by
/// degree. The unknown of degree `m` first enters the residual in total
/// degree `m + 2`, at `k = 3m`; this offset is checked on every step.
pub fn elliptic_via_pde(gamma: &BigradedSeries, d_max: u32) -> Result<InvariantTable> {
    if d_max == 0 {
        return Err(Error::EmptyRange);
    }
    if gamma.truncation() < d_max + 2 {
        return Err(Error::TableTooShort {
            required: d_max + 2,
            available: gamma.truncation(),
        });
    }
    let mut values: Vec<Rational> = Vec::with_capacity(d_max as usize);
    for m in 1..=d_max {
        let t = m + 2;
        let gamma_t = gamma.truncate(t);
        let mut probe = |n: Rational| -> Result<BigradedSeries> {
            values.push(n);
            let e = EllipticPotential::from_values(&values, t);
            values.pop();
            let residual = getzler_pde_residual(&gamma_t, &e);
            check_pde_shape(&residual)?;
            Ok(residual)
        };
        let at0 = probe(int(0))?;
        let at1 = probe(int(1))?;
        // Below degree m + 2 the residual must not see the unknown, and
        // must already vanish.
        for d in 0..t {
            let (low0, low1) = (at0.degree_part(d), at1.degree_part(d));
            if !low0.eq(low1) {
                return Err(Error::ShapeViolation {
                    context: "Getzler probe offset",
                    d,
                    k: 3 * m,
                    expected_k: 3 * t as i64 - 6,
                });
            }
            if let Some((k, _)) = at0.degree_part(d).next() {
                return Err(Error::NonzeroResidual { context: "Getzler", d, k });
            }
        }
        let key_k = 3 * t - 6;
        let n = solve_affine(&at0.coefficient(t, key_k)?, &at1.coefficient(t, key_k)?, m)?;
        values.push(n);
    }
    // The two top degrees are now determined too.
    let e = EllipticPotential::from_values(&values, d_max + 2);
    let residual = getzler_pde_residual(&gamma.truncate(d_max + 2), &e);
    if let Some(((d, k), _)) = residual.terms().next() {
        return Err(Error::NonzeroResidual { context: "Getzler", d, k });
    }
    InvariantTable::new(InvariantKind::Elliptic, values, Route::Pde)
}

/// Whether `E~_1 = (y2/3) E~_2` through the truncation. True for any series
/// supported on `k = 3d`.
pub fn check_tilde_scaling(elliptic: &EllipticPotential) -> bool {
    let e = elliptic.tilde();
    (&e.d1() - &e.d2().shift_y2(1).scale(&ratio(1, 3))).is_zero()
}

/// Runs all three routes through `d_max` and requires exact agreement.
/// `gamma` must be known through `d_max + 2`.
pub fn all_routes(rational: &InvariantTable, d_max: u32) -> Result<[InvariantTable; 3]> {
    let gamma = crate::rational_gw::gamma_series(rational, d_max + 2)?;
    let ehx = ehx_table(rational, d_max)?;
    let integral = elliptic_via_integral(&gamma, d_max)?;
    let pde = elliptic_via_pde(&gamma, d_max)?;
    ehx.agree_with(&integral)?;
    ehx.agree_with(&pde)?;
    Ok([ehx, integral, pde])
}
