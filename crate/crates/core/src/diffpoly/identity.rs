//! The symbolic identity behind the elliptic recursion.
//!
//! Substituting the integral formula `E_2 = P/Q` into Getzler's equation and
//! clearing `Q^2` gives a differential polynomial in `Gamma` alone
//! ([`build_required_pde`]). Modulo the scaling relation it should be a
//! multiple of `A Psi + B Psi_2 + C Psi_2^2 + D Psi_22` ([`build_fform_rhs`]),
//! where `Psi` is the WDVV left side. [`verify_fform`] checks this exactly,
//! [`random_point_check`] checks it at random rational points.

use alloc::collections::BTreeMap;

use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{DiffPoly, JetVar, Monomial};
use crate::error::{Error, Result};
use crate::rational::{int, ratio, Rational};

/// Largest power of the normalized `Q` tried when matching the two sides.
pub const MAX_CLEARING_POWER: u32 = 4;

/// `numerator / base^power`. Every expression in the substitution has a
/// power of the same `Q` as its denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpr {
    numerator: DiffPoly,
    base: DiffPoly,
    power: u32,
}

impl RationalExpr {
    pub fn new(numerator: DiffPoly, base: DiffPoly, power: u32) -> Self {
        assert!(!base.is_zero(), "zero denominator");
        RationalExpr { numerator, base, power }
    }

    pub fn polynomial(p: DiffPoly, base: &DiffPoly) -> Self {
        Self::new(p, base.clone(), 0)
    }

    pub fn numerator(&self) -> &DiffPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> DiffPoly {
        self.base.pow(self.power)
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    /// Numerator after rewriting over `base^power` (`power >= self.power`).
    pub fn numerator_over(&self, power: u32) -> DiffPoly {
        assert!(power >= self.power);
        &self.numerator * &self.base.pow(power - self.power)
    }

    /// Quotient rule: `(N' B - k N B') / B^(k+1)`.
    pub fn derive_y2(&self) -> Self {
        let num = &(&self.numerator.derive_y2() * &self.base)
            - &(&self.numerator * &self.base.derive_y2()).scale(&int(self.power as i64));
        Self::new(num, self.base.clone(), self.power + 1)
    }

    pub fn mul_poly(&self, p: &DiffPoly) -> Self {
        Self::new(&self.numerator * p, self.base.clone(), self.power)
    }

    pub fn add(&self, other: &RationalExpr) -> Self {
        assert_eq!(self.base, other.base, "expressions over different denominators");
        let power = self.power.max(other.power);
        Self::new(
            &self.numerator_over(power) + &other.numerator_over(power),
            self.base.clone(),
            power,
        )
    }
}

fn g(s: &str) -> DiffPoly {
    DiffPoly::g(s)
}

fn c(n: i64, d: i64) -> DiffPoly {
    DiffPoly::constant(ratio(n, d))
}

fn y() -> DiffPoly {
    DiffPoly::y2()
}

/// `P = (Gamma_111 - 3 Gamma_11 + 2 Gamma_1) / 72`.
pub fn integrand_numerator() -> DiffPoly {
    (g("111") - c(3, 1) * g("11") + c(2, 1) * g("1")).scale(&ratio(1, 72))
}

/// `Q = 1 - y2 Gamma_11 / 9 + 2 y2 Gamma_1 / 27`.
pub fn integrand_denominator() -> DiffPoly {
    DiffPoly::one() - c(1, 9) * y() * g("11") + c(2, 27) * y() * g("1")
}

/// `Psi = Gamma_222 - Gamma_112^2 + Gamma_111 Gamma_122`.
pub fn wdvv_psi() -> DiffPoly {
    g("222") - g("112").pow(2) + g("111") * g("122")
}

/// Getzler's equation with `E_1, E_11, E_12` replaced via the scaling
/// relation of the elliptic potential, `E_2 = P/Q`, `E_22 = (P/Q)_2`, and
/// the whole multiplied by `Q^2`.
pub fn build_required_pde() -> DiffPoly {
    let q = integrand_denominator();
    let e2 = RationalExpr::new(integrand_numerator(), q.clone(), 1);
    let e22 = e2.derive_y2();
    let constant = |p: DiffPoly| RationalExpr::polynomial(p, &q);

    let e1 = e2.mul_poly(&(c(1, 3) * y())).add(&constant(c(-1, 8)));
    let e11 = e22
        .mul_poly(&(c(1, 9) * y().pow(2)))
        .add(&e2.mul_poly(&(c(1, 9) * y())));
    let e12 = e22.mul_poly(&(c(1, 3) * y())).add(&e2.mul_poly(&c(1, 3)));

    let terms = [
        e11.mul_poly(&(c(36, 1) * g("122").pow(2))),
        e12.mul_poly(&(c(-48, 1) * g("112") * g("122"))),
        e22.mul_poly(&(c(-48, 1) * g("222"))),
        e1.mul_poly(&(c(-12, 1) * g("1122") * g("122"))),
        e1.mul_poly(&(c(24, 1) * g("112") * g("1222"))),
        e2.mul_poly(&(c(24, 1) * g("2222"))),
        constant(c(2, 1) * g("1222") * g("1112")),
        constant(c(1, 2) * g("12222") * g("111")),
        constant(c(3, 2) * g("22222")),
        constant(c(-3, 1) * g("1122").pow(2)),
    ];
    let total = terms[1..].iter().fold(terms[0].clone(), |acc, t| acc.add(t));
    total.numerator_over(2)
}

/// The four coefficient polynomials of `A Psi + B Psi_2 + C Psi_2^2 + D Psi_22`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FformCoefficients {
    pub a: DiffPoly,
    pub b: DiffPoly,
    pub c: DiffPoly,
    pub d: DiffPoly,
}

impl FformCoefficients {
    /// The coefficients `A, B, C, D` of the closed form.
    pub fn expected() -> Self {
        let (g1, g11, g111) = (g("1"), g("11"), g("111"));
        let a = c(-128, 1)
            * (c(36, 1) * y() * g("22") + c(24, 1) * y().pow(2) * g("222")
                - c(4, 1) * g1.clone() * g11.clone()
                - c(9, 1) * g11.pow(2)
                + c(4, 3) * g1.pow(2)
                + c(12, 1) * g1.clone() * g111.clone()
                - c(18, 1) * g11.clone() * g111.clone()
                + c(27, 1) * g111.pow(2));
        let b = c(-64, 1)
            * (c(-60, 1) * g("") + c(375, 1) * g1.clone() - c(1521, 2) * g11.clone()
                + c(783, 2) * g111.clone()
                + c(2, 1) * y() * g1.pow(2)
                - c(6, 1) * y() * g1.clone() * g11.clone()
                + c(8, 1) * y() * g1.clone() * g111.clone()
                - c(11, 2) * y() * g11.pow(2)
                - c(9, 1) * y() * g11.clone() * g111.clone()
                + c(9, 2) * y() * g111.pow(2));
        let cc = c(-64, 1) * y().pow(4);
        let d = c(-32, 1)
            * (y() * g111 + c(9, 1))
            * (c(3, 1) * y() * g11 - c(2, 1) * y() * g1 - c(27, 1));
        FformCoefficients { a, b, c: cc, d }
    }
}

/// `A Psi + B Psi_2 + C Psi_2^2 + D Psi_22`.
pub fn build_fform_rhs(coeffs: &FformCoefficients) -> DiffPoly {
    let psi = wdvv_psi();
    let psi2 = psi.derive_y2();
    let psi22 = psi2.derive_y2();
    &(&(&coeffs.a * &psi) + &(&coeffs.b * &psi2)) + &(&(&coeffs.c * &psi2.pow(2)) + &(&coeffs.d * &psi22))
}

/// Which side carries the power of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arrangement {
    /// `R * Q^q = kappa * S`.
    RequiredTimesQ,
    /// `S * Q^q = kappa * R`.
    CandidateTimesQ,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityMatch {
    pub kappa: Rational,
    pub q: u32,
    pub arrangement: Arrangement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityReport {
    Match(IdentityMatch),
    /// No `(kappa, q)` worked. `kappa` is the scalar fitted at `q = 0` on the
    /// leading monomial of the candidate (if it occurs in the required
    /// side), `residual` is `R - kappa S` (or `R` itself), and `monomial` is
    /// the first monomial where the two sides differ.
    Mismatch {
        monomial: Monomial,
        required_coefficient: Rational,
        candidate_coefficient: Rational,
        kappa: Option<Rational>,
        residual: DiffPoly,
    },
}

impl IdentityReport {
    pub fn is_match(&self) -> bool {
        matches!(self, IdentityReport::Match(_))
    }
}

/// Searches `q <= q_max` and a scalar `kappa` with `R Q^q = kappa S` or
/// `S Q^q = kappa R`, everything taken modulo the scaling relation.
/// `kappa` is fitted on the leading monomial of the right-hand side and then
/// checked on every coefficient.
pub fn verify_identity(required: &DiffPoly, candidate: &DiffPoly, q_max: u32) -> Result<IdentityReport> {
    let r = required.normalize_ll();
    let s = candidate.normalize_ll();
    if r.is_zero() {
        return Err(Error::Degenerate("required"));
    }
    if s.is_zero() {
        return Err(Error::Degenerate("candidate"));
    }
    let q_norm = integrand_denominator().normalize_ll();

    let mut q_pow = DiffPoly::one();
    for q in 0..=q_max {
        for (arrangement, lhs, rhs) in [
            (Arrangement::RequiredTimesQ, &r, &s),
            (Arrangement::CandidateTimesQ, &s, &r),
        ] {
            let lhs = lhs * &q_pow;
            if let Some(kappa) = fit_scalar(&lhs, rhs) {
                if lhs == rhs.scale(&kappa) {
                    return Ok(IdentityReport::Match(IdentityMatch { kappa, q, arrangement }));
                }
            }
        }
        q_pow = &q_pow * &q_norm;
    }

    let kappa = fit_scalar(&r, &s);
    let residual = match &kappa {
        Some(k) => &r - &s.scale(k),
        None => r.clone(),
    };
    let monomial = residual
        .leading()
        .map(|(m, _)| m.clone())
        .expect("a zero residual would have matched at q = 0");
    Ok(IdentityReport::Mismatch {
        required_coefficient: r.coefficient(&monomial),
        candidate_coefficient: s.coefficient(&monomial),
        monomial,
        kappa,
        residual,
    })
}

fn fit_scalar(lhs: &DiffPoly, rhs: &DiffPoly) -> Option<Rational> {
    let (m, rc) = rhs.leading()?;
    let lc = lhs.coefficient(m);
    (!lc.is_zero()).then(|| lc / rc)
}

/// [`verify_identity`] on the substituted Getzler equation and the expected
/// `A, B, C, D`.
pub fn verify_fform() -> Result<IdentityReport> {
    verify_identity(
        &build_required_pde(),
        &build_fform_rhs(&FformCoefficients::expected()),
        MAX_CLEARING_POWER,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointWitness {
    pub trial: u32,
    pub y2: Rational,
    /// `G[0,b]` for `b = 0, 1, ...`.
    pub jets: alloc::vec::Vec<Rational>,
    pub required_value: Rational,
    pub candidate_value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointCheckReport {
    pub trials: u32,
    /// Fitted on a calibration point that is not counted as a trial.
    pub kappa: Rational,
    pub witness: Option<PointWitness>,
}

impl PointCheckReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Random-point test of the identity for the expected coefficients.
pub fn random_point_check(trials: u32, seed: u64) -> Result<PointCheckReport> {
    random_point_check_with(
        &build_required_pde(),
        &build_fform_rhs(&FformCoefficients::expected()),
        trials,
        seed,
    )
}

/// Draws random rationals for `y2` and the jets `G[0,b]`, derives the other
/// jets numerically from the scaling relation, and checks that `R = kappa S`
/// at every point. `kappa` comes from one extra calibration point; no
/// symbolic normalization is involved.
pub fn random_point_check_with(
    required: &DiffPoly,
    candidate: &DiffPoly,
    trials: u32,
    seed: u64,
) -> Result<PointCheckReport> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let order = required
        .max_jet_order()
        .into_iter()
        .chain(candidate.max_jet_order())
        .max()
        .unwrap_or(0);

    let mut calibration = 0u64;
    let kappa = loop {
        let point = RandomPoint::draw(point_seed(seed, calibration), order);
        let s = point.evaluate(candidate);
        if !s.is_zero() {
            break point.evaluate(required) / s;
        }
        calibration += 1;
        if calibration >= 16 {
            return Err(Error::Degenerate("candidate"));
        }
    };

    for trial in 1..=trials {
        let point = RandomPoint::draw(point_seed(seed, u64::MAX - trial as u64), order);
        let r = point.evaluate(required);
        let s = point.evaluate(candidate);
        if r != &kappa * &s {
            return Ok(PointCheckReport {
                trials,
                kappa,
                witness: Some(PointWitness {
                    trial,
                    y2: point.y2,
                    jets: point.base,
                    required_value: r,
                    candidate_value: s,
                }),
            });
        }
    }
    Ok(PointCheckReport {
        trials,
        kappa,
        witness: None,
    })
}

fn point_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct RandomPoint {
    y2: Rational,
    base: alloc::vec::Vec<Rational>,
}

impl RandomPoint {
    fn draw(seed: u64, order: u32) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || {
            let num = (rng.next_u64() % 201) as i64 - 100;
            let den = (rng.next_u64() % 97) as i64 + 1;
            ratio(num, den)
        };
        let y2 = draw();
        let base = (0..=order).map(|_| draw()).collect();
        RandomPoint { y2, base }
    }

    /// `G[a,b] = (y2/3) G[a-1,b+1] + ((b+1)/3) G[a-1,b]`, evaluated numerically.
    fn jet(&self, j: JetVar, memo: &mut BTreeMap<JetVar, Rational>) -> Rational {
        if j.a == 0 {
            return self.base[j.b as usize].clone();
        }
        if let Some(v) = memo.get(&j) {
            return v.clone();
        }
        let up = self.jet(JetVar::new(j.a - 1, j.b + 1), memo);
        let same = self.jet(JetVar::new(j.a - 1, j.b), memo);
        let v = (&self.y2 * up + same * int(j.b as i64 + 1)) / int(3);
        memo.insert(j, v.clone());
        v
    }

    fn evaluate(&self, p: &DiffPoly) -> Rational {
        let mut memo = BTreeMap::new();
        p.evaluate_rational(&self.y2, |j| self.jet(j, &mut memo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_gw::{elliptic_potential_via_integral, getzler_pde_residual, integrand_parts};
    use crate::rational_gw::{gamma_series, solve_wdvv};

    fn mono(y2: u32, jets: &[(&str, u32)]) -> Monomial {
        Monomial::new(y2, jets.iter().map(|&(s, e)| (JetVar::from_subscript(s), e)))
    }

    #[test]
    fn required_pde_keeps_gamma_only_terms() {
        let r = build_required_pde();
        assert_eq!(r.coefficient(&mono(0, &[("22222", 1)])), ratio(3, 2));
        assert_eq!(r.coefficient(&mono(0, &[("1222", 1), ("1112", 1)])), int(2));
        assert_eq!(r.coefficient(&mono(0, &[("12222", 1), ("111", 1)])), ratio(1, 2));
        assert_eq!(r.coefficient(&mono(0, &[("1122", 2)])), int(-3));
    }

    #[test]
    fn fform_rhs_has_c_term() {
        let s = build_fform_rhs(&FformCoefficients::expected());
        assert_eq!(s.coefficient(&mono(4, &[("2222", 2)])), int(-64));
        let zero = FformCoefficients {
            a: DiffPoly::zero(),
            b: DiffPoly::zero(),
            c: DiffPoly::zero(),
            d: DiffPoly::zero(),
        };
        assert!(build_fform_rhs(&zero).is_zero());
    }

    #[test]
    fn identity_holds_with_expected_coefficients() {
        match verify_fform().unwrap() {
            IdentityReport::Match(m) => {
                assert_eq!(m.q, 0);
                assert_eq!(m.arrangement, Arrangement::RequiredTimesQ);
                assert_eq!(m.kappa, ratio(1, 5184));
            }
            other => panic!("no match: {other:?}"),
        }
    }

    #[test]
    fn flipped_sign_in_b_is_reported() {
        let mut coeffs = FformCoefficients::expected();
        let (m, c) = coeffs.b.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        coeffs.b = &coeffs.b - &DiffPoly::term(c * int(2), m);
        let report =
            verify_identity(&build_required_pde(), &build_fform_rhs(&coeffs), MAX_CLEARING_POWER).unwrap();
        match report {
            IdentityReport::Mismatch { residual, monomial, .. } => {
                assert!(!residual.is_zero());
                assert_eq!(residual.leading().unwrap().0, &monomial);
            }
            IdentityReport::Match(_) => panic!("perturbed identity matched"),
        }
    }

    #[test]
    fn zero_polynomials_are_degenerate() {
        let r = build_required_pde();
        assert_eq!(verify_identity(&r, &DiffPoly::zero(), 4), Err(Error::Degenerate("candidate")));
        assert_eq!(verify_identity(&DiffPoly::zero(), &r, 4), Err(Error::Degenerate("required")));
    }

    #[test]
    fn random_points() {
        let report = random_point_check(20, 7).unwrap();
        assert!(report.passed());
        assert_eq!(report.kappa, ratio(1, 5184));
        assert_eq!(random_point_check(0, 7), Err(Error::NoTrials));

        let mut coeffs = FformCoefficients::expected();
        coeffs.b = -&coeffs.b;
        let bad = random_point_check_with(&build_required_pde(), &build_fform_rhs(&coeffs), 1, 7).unwrap();
        let witness = bad.witness.expect("perturbed identity must fail");
        assert_eq!(witness.trial, 1);
        assert_ne!(witness.required_value, &bad.kappa * &witness.candidate_value);
    }

    #[test]
    fn rational_expr_quotient_rule() {
        let q = integrand_denominator();
        let e = RationalExpr::new(DiffPoly::one(), q.clone(), 1);
        let d = e.derive_y2();
        assert_eq!(d.power(), 2);
        assert_eq!(d.numerator(), &-&q.derive_y2());
        assert_eq!(d.denominator(), q.pow(2));
    }

    #[test]
    fn symbolic_pieces_match_series_pieces() {
        let gamma = gamma_series(&solve_wdvv(6).unwrap(), 6).unwrap();
        let (p, q) = integrand_parts(&gamma);
        assert_eq!(integrand_numerator().evaluate_series(&gamma), p);
        assert_eq!(integrand_denominator().evaluate_series(&gamma), q);
    }

    #[test]
    fn series_evaluation_vanishes_on_true_potential() {
        let gamma = gamma_series(&solve_wdvv(6).unwrap(), 6).unwrap();
        assert!(wdvv_psi().normalize_ll().evaluate_series(&gamma).is_empty());
        assert!(build_required_pde().evaluate_series(&gamma).is_empty());
        // The same statement on the series side.
        let e = elliptic_potential_via_integral(&gamma).unwrap();
        assert!(getzler_pde_residual(&gamma, &e).is_empty());
    }
}
