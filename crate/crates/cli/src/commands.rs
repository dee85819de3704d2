use std::fmt::Write;
use std::path::Path;

use gw_core::diffpoly::{self, Arrangement, IdentityReport};
use gw_core::elliptic_gw::{
    check_pde_shape, ehx_table, elliptic_via_integral, elliptic_via_pde, getzler_pde_residual,
    EllipticPotential,
};
use gw_core::rational::format_rational;
use gw_core::rational_gw::{check_gamma_scaling, check_wdvv_shape, gamma_series, solve_wdvv_from, wdvv_residual};
use gw_core::strata::{self, StrataData};
use gw_core::{BigradedSeries, Error, InvariantTable};

use crate::args::{EllipticArgs, RationalArgs, RouteArg, Target, VerifyArgs};
use crate::cache;
use crate::exit;
use crate::output::render;

/// What a command produced; `main` prints it and exits with `code`.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failure(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn code_for(e: &Error) -> i32 {
    match e {
        Error::RouteDisagreement { .. } => exit::ROUTE_DISAGREEMENT,
        _ => exit::SOLVER,
    }
}

/// Rational invariants through some degree, and how they were obtained.
#[derive(Debug, Clone)]
pub struct RationalRun {
    pub table: InvariantTable,
    /// Degrees that went through the WDVV solver (cached ones do not).
    pub solved_degrees: u32,
    /// Set when the cache was unusable or could not be written.
    pub cache_warning: Option<String>,
}

/// Solves WDVV through `d_max`, reusing and extending the cache at `cache`.
/// An unusable cache is ignored (and left untouched) with a warning.
pub fn rational_with_cache(d_max: u32, cache: Option<&Path>) -> Result<RationalRun, Error> {
    let Some(path) = cache else {
        let s = solve_wdvv_from(None, d_max)?;
        return Ok(RationalRun {
            table: s.table,
            solved_degrees: s.solved_degrees,
            cache_warning: None,
        });
    };

    let (solution, mut warning, cached_degrees) = match cache::load(path) {
        Ok(prefix) => match solve_wdvv_from(prefix.as_ref(), d_max) {
            Ok(s) => (s, None, prefix.map_or(0, |p| p.d_max())),
            Err(e) if prefix.is_some() => (
                solve_wdvv_from(None, d_max)?,
                Some(format!("{} does not satisfy WDVV ({e}); cache ignored", path.display())),
                u32::MAX,
            ),
            Err(e) => return Err(e),
        },
        Err(e) => (solve_wdvv_from(None, d_max)?, Some(format!("{e}; cache ignored")), u32::MAX),
    };
    if warning.is_none() && solution.table.d_max() > cached_degrees {
        if let Err(e) = cache::store(path, &solution.table) {
            warning = Some(e.to_string());
        }
    }
    Ok(RationalRun {
        table: solution.table.prefix(d_max)?,
        solved_degrees: solution.solved_degrees,
        cache_warning: warning,
    })
}

fn with_cache_warning(mut outcome: Outcome, warning: Option<String>) -> Outcome {
    if let Some(w) = warning {
        outcome.stderr.insert_str(0, &format!("warning: {w}\n"));
        if outcome.code == exit::SUCCESS {
            outcome.code = exit::CACHE;
        }
    }
    outcome
}

pub fn cmd_rational(args: &RationalArgs) -> Outcome {
    let c = &args.common;
    match rational_with_cache(c.d_max, c.cache.as_deref()) {
        Ok(run) => with_cache_warning(
            Outcome {
                code: exit::SUCCESS,
                stdout: render(&run.table, "wdvv", c.format),
                stderr: String::new(),
            },
            run.cache_warning,
        ),
        Err(e) => Outcome::failure(code_for(&e), e),
    }
}

fn elliptic_routes(route: RouteArg, rational: &InvariantTable, d_max: u32) -> Result<InvariantTable, Error> {
    match route {
        RouteArg::Ehx => ehx_table(rational, d_max),
        RouteArg::Integral => elliptic_via_integral(&gamma_series(rational, d_max)?, d_max),
        RouteArg::Pde => elliptic_via_pde(&gamma_series(rational, d_max + 2)?, d_max),
        RouteArg::All => {
            let ehx = ehx_table(rational, d_max)?;
            let integral = elliptic_via_integral(&gamma_series(rational, d_max)?, d_max)?;
            let pde = elliptic_via_pde(&gamma_series(rational, d_max + 2)?, d_max)?;
            ehx.agree_with(&integral)?;
            ehx.agree_with(&pde)?;
            Ok(ehx)
        }
    }
}

pub fn cmd_elliptic(args: &EllipticArgs) -> Outcome {
    let c = &args.common;
    let needed = match args.route {
        RouteArg::Ehx | RouteArg::Integral => c.d_max,
        RouteArg::Pde | RouteArg::All => c.d_max + 2,
    };
    let run = match rational_with_cache(needed, c.cache.as_deref()) {
        Ok(run) => run,
        Err(e) => return Outcome::failure(code_for(&e), e),
    };
    let label = match args.route {
        RouteArg::Ehx => "ehx",
        RouteArg::Integral => "integral",
        RouteArg::Pde => "pde",
        RouteArg::All => "all",
    };
    let outcome = match elliptic_routes(args.route, &run.table, c.d_max) {
        Ok(table) => Outcome {
            code: exit::SUCCESS,
            stdout: render(&table, label, c.format),
            stderr: String::new(),
        },
        Err(e) => Outcome::failure(code_for(&e), e),
    };
    with_cache_warning(outcome, run.cache_warning)
}

/// One line of `gw verify` output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

fn first_term(s: &BigradedSeries) -> String {
    match s.terms().next() {
        Some(((d, k), c)) => format!("first nonzero coefficient at (d={d}, k={k}): {}", format_rational(c)),
        None => String::from("empty"),
    }
}

pub fn check_wdvv(d_max: u32) -> Vec<Check> {
    let table = match solve_wdvv_from(None, d_max) {
        Ok(s) => s.table,
        Err(e) => return vec![Check::new("wdvv", false, e.to_string())],
    };
    let gamma = gamma_series(&table, d_max).expect("table covers d_max");
    let residual = wdvv_residual(&gamma);
    let residual_check = match check_wdvv_shape(&residual) {
        Err(e) => Check::new("wdvv", false, e.to_string()),
        Ok(()) if residual.is_empty() => Check::new(
            "wdvv",
            true,
            format!("residual vanishes through d={d_max}; N_d are positive integers"),
        ),
        Ok(()) => Check::new("wdvv", false, first_term(&residual)),
    };
    let scaling = check_gamma_scaling(&gamma);
    vec![
        residual_check,
        Check::new(
            "wdvv-scaling",
            scaling,
            if scaling {
                "Gamma_1 = (y2/3) Gamma_2 + Gamma/3 holds".to_string()
            } else {
                "scaling relation fails".to_string()
            },
        ),
    ]
}

pub fn check_pde(d_max: u32) -> Vec<Check> {
    let result = (|| -> Result<BigradedSeries, Error> {
        let rational = solve_wdvv_from(None, d_max)?.table;
        let gamma = gamma_series(&rational, d_max)?;
        let elliptic = EllipticPotential::from_table(&ehx_table(&rational, d_max)?, d_max)?;
        let residual = getzler_pde_residual(&gamma, &elliptic);
        check_pde_shape(&residual)?;
        Ok(residual)
    })();
    vec![match result {
        Ok(r) if r.is_empty() => Check::new("pde", true, format!("Getzler residual vanishes through d={d_max}")),
        Ok(r) => Check::new("pde", false, first_term(&r)),
        Err(e) => Check::new("pde", false, e.to_string()),
    }]
}

pub fn check_identity(trials: u32, seed: u64) -> Vec<Check> {
    let symbolic = match diffpoly::verify_fform() {
        Ok(IdentityReport::Match(m)) => {
            let arrangement = match m.arrangement {
                Arrangement::RequiredTimesQ => "R*Q^q = kappa*S",
                Arrangement::CandidateTimesQ => "S*Q^q = kappa*R",
            };
            Check::new(
                "identity",
                true,
                format!("{arrangement} with kappa = {}, q = {}", format_rational(&m.kappa), m.q),
            )
        }
        Ok(IdentityReport::Mismatch {
            monomial,
            required_coefficient,
            candidate_coefficient,
            kappa,
            residual,
        }) => Check::new(
            "identity",
            false,
            format!(
                "first mismatch at {monomial}: required {}, candidate {}, kappa {}\nresidual: {residual}",
                format_rational(&required_coefficient),
                format_rational(&candidate_coefficient),
                kappa.as_ref().map_or_else(|| "undetermined".to_string(), format_rational),
            ),
        ),
        Err(e) => Check::new("identity", false, e.to_string()),
    };
    let random = match diffpoly::random_point_check(trials, seed) {
        Ok(r) if r.passed() => Check::new(
            "identity-random",
            true,
            format!("{trials} trials, seed {seed}, kappa = {}", format_rational(&r.kappa)),
        ),
        Ok(r) => {
            let w = r.witness.expect("failed report has a witness");
            Check::new(
                "identity-random",
                false,
                format!(
                    "trial {} at y2 = {}: required {}, candidate {}, kappa = {}",
                    w.trial,
                    format_rational(&w.y2),
                    format_rational(&w.required_value),
                    format_rational(&w.candidate_value),
                    format_rational(&r.kappa)
                ),
            )
        }
        Err(e) => Check::new("identity-random", false, e.to_string()),
    };
    vec![symbolic, random]
}

pub fn check_strata() -> Vec<Check> {
    let data = match StrataData::embedded() {
        Ok(d) => d,
        Err(e) => return vec![Check::new("strata-tables", false, e.to_string())],
    };
    let image = strata::relation_image(&data);
    let anss = strata::check_anss(&data);
    let getzler = strata::check_getzler(&data);
    let combined = &data.anss - &data.ratt.scale(&gw_core::rational::int(2));
    vec![
        match data.pushforward.validate() {
            Ok(()) => Check::new("strata-tables", true, "16 push-forwards loaded and validated"),
            Err(e) => Check::new("strata-tables", false, e.to_string()),
        },
        Check::new("strata-anss", anss, format!("pushed-forward relation = {image}")),
        Check::new("strata-getzler", getzler, format!("anss - 2*ratt = {combined}")),
    ]
}

pub fn cmd_verify(args: &VerifyArgs) -> Outcome {
    let mut checks = Vec::new();
    let all = args.target == Target::All;
    if all || args.target == Target::Wdvv {
        checks.extend(check_wdvv(args.d_max));
    }
    if all || args.target == Target::Pde {
        checks.extend(check_pde(args.d_max));
    }
    if all || args.target == Target::Identity {
        checks.extend(check_identity(args.trials, args.seed));
    }
    if all || args.target == Target::Strata {
        checks.extend(check_strata());
    }
    let mut stdout = String::new();
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        writeln!(stdout, "{status} {}: {}", c.name, c.detail).unwrap();
    }
    let code = if checks.iter().all(|c| c.passed) {
        exit::SUCCESS
    } else {
        exit::VERIFICATION_FAILURE
    };
    Outcome {
        code,
        stdout,
        stderr: String::new(),
    }
}
