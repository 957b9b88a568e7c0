//! The log-power exponents governing the counting asymptotics.
//!
//! Everything is exact: `rho(G) = sum_{g != 0} ord(g) / [k_{ord g} : k]` and
//! `omega(G) = sum_{g != 0} 1 / [k(mu_{ord g}) : k]`, where the field degrees
//! come from a [`DegreeOracle`]. Over `Q` the built-in oracles cover the
//! trivial subgroup `A = 1` (degrees `phi(d)`) and `A = <-1>` (degrees
//! `phi(2d)`, which equals `phi(d)` for odd `d`).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;

use crate::arith::{divisors, totient};
use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

pub type Rational = Ratio<i64>;

/// Degrees `[k_d : k]` for `d` dividing the exponent of the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DegreeOracle {
    /// `k = Q`, `A` trivial: `[Q(mu_d) : Q] = phi(d)`.
    Rational,
    /// `k = Q`, `A = <-1>`: `[Q(mu_d, (-1)^(1/d)) : Q] = [Q(mu_2d) : Q]`.
    RationalMinusOne,
    /// A user-supplied table; `d = 1` defaults to degree 1.
    Table(BTreeMap<u64, u64>),
}

impl DegreeOracle {
    pub fn degree(&self, d: u64) -> Result<u64> {
        match self {
            Self::Rational => Ok(totient(d)),
            Self::RationalMinusOne => Ok(if d.is_multiple_of(2) {
                totient(2 * d)
            } else {
                totient(d)
            }),
            Self::Table(t) => match t.get(&d) {
                Some(&deg) => Ok(deg),
                None if d == 1 => Ok(1),
                None => Err(Error::MissingOracleEntry(d)),
            },
        }
    }

    /// Oracle for a base field containing `mu_n` for every `n` (all degrees 1).
    pub fn all_roots_of_unity(exponent: u64) -> Self {
        Self::Table(divisors(exponent).into_iter().map(|d| (d, 1)).collect())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }
}

impl FromStr for DegreeOracle {
    type Err = Error;

    /// One line per divisor, `"d degree"`; `#` starts a comment.
    fn from_str(s: &str) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: &str| Error::Parse {
                line: i + 1,
                message: message.to_string(),
            };
            let mut parts = line.split_whitespace();
            let d: u64 = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err("expected divisor"))?;
            let deg: u64 = parts
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err("expected degree"))?;
            if parts.next().is_some() {
                return Err(parse_err("trailing tokens"));
            }
            if d == 0 || deg == 0 {
                return Err(parse_err("divisor and degree must be positive"));
            }
            if table.insert(d, deg).is_some() {
                return Err(parse_err("duplicate divisor"));
            }
        }
        Ok(Self::Table(table))
    }
}

impl fmt::Display for DegreeOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational => write!(f, "Q"),
            Self::RationalMinusOne => write!(f, "Q, A=<-1>"),
            Self::Table(t) => {
                for (d, deg) in t {
                    writeln!(f, "{d} {deg}")?;
                }
                Ok(())
            }
        }
    }
}

fn weighted_sum(
    group: &FiniteAbelianGroup,
    oracle: &DegreeOracle,
    weight: impl Fn(u64) -> i64,
) -> Result<Rational> {
    let mut total = Rational::zero();
    for f in divisors(group.exponent()) {
        if f == 1 {
            continue;
        }
        let count = group.count_elements_of_order(f) as i64;
        if count == 0 {
            continue;
        }
        total += Rational::new(weight(f) * count, oracle.degree(f)? as i64);
    }
    Ok(total)
}

/// `rho(k, G, A) = sum_{f | e, f > 1} f |G_f| / [k_f : k]`.
pub fn rho(group: &FiniteAbelianGroup, oracle: &DegreeOracle) -> Result<Rational> {
    weighted_sum(group, oracle, |f| f as i64)
}

/// `omega(k, G) = sum_{f | e, f > 1} |G_f| / [k(mu_f) : k]`.
pub fn omega(group: &FiniteAbelianGroup, oracle: &DegreeOracle) -> Result<Rational> {
    weighted_sum(group, oracle, |_| 1)
}

/// `rho - omega = sum_{g != 0} (ord g - 1) / [k(mu_{ord g}) : k]`, the exponent of
/// the average genus number.
pub fn rho_minus_omega(group: &FiniteAbelianGroup, oracle: &DegreeOracle) -> Result<Rational> {
    weighted_sum(group, oracle, |f| f as i64 - 1)
}

/// Whether `rho` is an integer. Always true for cyclotomic oracles.
pub fn rho_integer_check(group: &FiniteAbelianGroup, oracle: &DegreeOracle) -> Result<bool> {
    Ok(rho(group, oracle)?.is_integer())
}

/// `rho(Q, G)` as an integer; the built-in oracle always yields one.
pub fn rho_q(group: &FiniteAbelianGroup) -> u64 {
    let r = rho(group, &DegreeOracle::Rational).expect("built-in oracle is total");
    assert!(r.is_integer(), "rho over Q must be integral");
    r.to_integer() as u64
}

/// `omega(Q, G)` as an integer.
pub fn omega_q(group: &FiniteAbelianGroup) -> u64 {
    let w = omega(group, &DegreeOracle::Rational).expect("built-in oracle is total");
    assert!(w.is_integer(), "omega over Q must be integral");
    w.to_integer() as u64
}
