//! Tables `d -> N_d` of rational or elliptic invariants.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InvariantKind {
    /// Genus zero, `N_d^(0)`.
    Rational,
    /// Genus one, `N_d^(1)`.
    Elliptic,
}

impl InvariantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InvariantKind::Rational => "rational",
            InvariantKind::Elliptic => "elliptic",
        }
    }
}

impl fmt::Display for InvariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Algorithm that produced a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Route {
    /// Order-by-order solution of the WDVV equation.
    Wdvv,
    /// The Eguchi-Hori-Xiong recursion.
    Ehx,
    /// Closed integral formula for the elliptic potential.
    Integral,
    /// Order-by-order solution of Getzler's genus-one equation.
    Pde,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Wdvv => "wdvv",
            Route::Ehx => "ehx",
            Route::Integral => "integral",
            Route::Pde => "pde",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    kind: InvariantKind,
    /// `values[d - 1] = N_d`.
    values: Vec<Rational>,
    route: Route,
}

impl InvariantTable {
    /// Wraps `values` (starting at degree 1) and checks the invariants of
    /// `kind`: rational invariants are positive integers, elliptic ones are
    /// nonnegative integers vanishing in degrees 1 and 2.
    pub fn new(kind: InvariantKind, values: Vec<Rational>, route: Route) -> Result<Self> {
        let table = InvariantTable { kind, values, route };
        table.validate()?;
        Ok(table)
    }

    /// Wraps `values` without checking the invariants.
    pub fn new_unchecked(kind: InvariantKind, values: Vec<Rational>, route: Route) -> Self {
        InvariantTable { kind, values, route }
    }

    pub fn validate(&self) -> Result<()> {
        let violation = |d: usize, reason| Error::InvariantViolation {
            kind: self.kind,
            d: d as u32 + 1,
            reason,
        };
        for (i, n) in self.values.iter().enumerate() {
            if !n.is_integer() {
                return Err(violation(i, "not an integer"));
            }
            match self.kind {
                InvariantKind::Rational if !n.is_positive() => {
                    return Err(violation(i, "not positive"))
                }
                InvariantKind::Elliptic if n.is_negative() => {
                    return Err(violation(i, "negative"))
                }
                InvariantKind::Elliptic if i < 2 && !n.is_zero() => {
                    return Err(violation(i, "must vanish in degrees 1 and 2"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> InvariantKind {
        self.kind
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn d_max(&self) -> u32 {
        self.values.len() as u32
    }

    /// `N_d`, for `1 <= d <= d_max`.
    pub fn get(&self, d: u32) -> Option<&Rational> {
        d.checked_sub(1).and_then(|i| self.values.get(i as usize))
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `(d, N_d)` pairs in increasing degree.
    pub fn iter(&self) -> impl Iterator<Item = (u32, &Rational)> + '_ {
        self.values.iter().enumerate().map(|(i, n)| (i as u32 + 1, n))
    }

    /// The first `d_max` entries.
    pub fn prefix(&self, d_max: u32) -> Result<Self> {
        self.require(d_max)?;
        Ok(InvariantTable {
            kind: self.kind,
            values: self.values[..d_max as usize].to_vec(),
            route: self.route,
        })
    }

    pub fn require(&self, d_max: u32) -> Result<()> {
        if self.d_max() < d_max {
            return Err(Error::TableTooShort {
                required: d_max,
                available: self.d_max(),
            });
        }
        Ok(())
    }

    /// Fails with the first degree where `self` and `other` differ, over the
    /// degrees both cover.
    pub fn agree_with(&self, other: &InvariantTable) -> Result<()> {
        for ((d, a), (_, b)) in self.iter().zip(other.iter()) {
            if a != b {
                return Err(Error::RouteDisagreement {
                    d,
                    left: self.route,
                    right: other.route,
                    left_value: format_rational(a),
                    right_value: format_rational(b),
                });
            }
        }
        if self.d_max() != other.d_max() {
            let d = self.d_max().min(other.d_max()) + 1;
            let show = |t: &InvariantTable| {
                t.get(d)
                    .map(format_rational)
                    .unwrap_or_else(|| alloc::string::String::from("missing"))
            };
            return Err(Error::RouteDisagreement {
                d,
                left: self.route,
                right: other.route,
                left_value: show(self),
                right_value: show(other),
            });
        }
        Ok(())
    }
}
