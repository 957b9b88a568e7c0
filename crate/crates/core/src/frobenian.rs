//! Local Fourier coefficients and their frobenian statistics.
//!
//! At a good prime `q` the coefficient `s_{x,H}(q)` depends only on two power
//! residue invariants, `d_A(q)` and `d_x(q)`, through the closed form
//! `F(A, B) = -1 + sum_{m | A} m sum_{d | (m, B)} mu(m/d) |H[d]|`.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{divisors, gcd, is_prime, moebius, pow_mod, primes_up_to};
use crate::error::{Error, Result};
use crate::exponents::{rho, DegreeOracle, Rational};
use crate::group::FiniteAbelianGroup;

/// A finitely generated subgroup of `Q^*`, given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgroupOfQStar {
    generators: Vec<Ratio<i64>>,
}

impl SubgroupOfQStar {
    pub fn new(generators: Vec<Ratio<i64>>) -> Result<Self> {
        if generators.iter().any(|g| *g.numer() == 0) {
            return Err(Error::InvalidCondition("zero is not in Q^*".into()));
        }
        Ok(Self { generators })
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn minus_one() -> Self {
        Self {
            generators: vec![Ratio::from_integer(-1)],
        }
    }

    pub fn generators(&self) -> &[Ratio<i64>] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(|g| *g == Ratio::from_integer(1))
    }

    /// Built-in degree oracle over `Q`, when one applies.
    pub fn oracle(&self) -> Option<DegreeOracle> {
        if self.is_trivial() {
            Some(DegreeOracle::Rational)
        } else if self
            .generators
            .iter()
            .all(|g| g.abs() == Ratio::from_integer(1))
        {
            Some(DegreeOracle::RationalMinusOne)
        } else {
            None
        }
    }
}

impl FromStr for SubgroupOfQStar {
    type Err = Error;

    /// Comma-separated rationals such as `-1` or `2,-3/5`; empty or `1` is trivial.
    fn from_str(s: &str) -> Result<Self> {
        let gens = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<Ratio<i64>>()
                    .map_err(|_| Error::InvalidCondition(format!("bad rational {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }
}

impl fmt::Display for SubgroupOfQStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// An element of `O_S^* (x) H^`: one rational per invariant factor of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualElement {
    pub components: Vec<Ratio<i64>>,
}

impl DualElement {
    pub fn one(h: &FiniteAbelianGroup) -> Self {
        Self {
            components: vec![Ratio::from_integer(1); h.rank()],
        }
    }

    pub fn new(h: &FiniteAbelianGroup, components: Vec<Ratio<i64>>) -> Result<Self> {
        if components.len() != h.rank() {
            return Err(Error::DualLength {
                expected: h.rank(),
                got: components.len(),
            });
        }
        if components.iter().any(|c| *c.numer() == 0) {
            return Err(Error::InvalidCondition("zero is not in Q^*".into()));
        }
        Ok(Self { components })
    }
}

/// `r mod q`, or an error when `q` divides its numerator or denominator.
fn reduce(r: &Ratio<i64>, q: u64) -> Result<u64> {
    let num = r.numer().rem_euclid(q as i64) as u64;
    let den = r.denom().rem_euclid(q as i64) as u64;
    if num == 0 || den == 0 {
        return Err(Error::BadPrime { q });
    }
    Ok(crate::arith::mul_mod(
        num,
        crate::arith::inv_mod(den, q).unwrap(),
        q,
    ))
}

fn is_power_residue(a: u64, d: u64, q: u64) -> bool {
    pow_mod(a, (q - 1) / gcd(d, q - 1), q) == 1
}

fn check_prime(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    Ok(())
}

/// Largest `d | gcd(e, q - 1)` with `A mod q` inside the `d`-th powers.
pub fn d_a_h(a: &SubgroupOfQStar, h: &FiniteAbelianGroup, q: u64) -> Result<u64> {
    check_prime(q)?;
    let residues = a
        .generators
        .iter()
        .map(|g| reduce(g, q))
        .collect::<Result<Vec<_>>>()?;
    let top = gcd(h.exponent(), q - 1);
    Ok(divisors(top)
        .into_iter()
        .rev()
        .find(|&d| residues.iter().all(|&r| is_power_residue(r, d, q)))
        .unwrap_or(1))
}

/// Largest `d | gcd(e, q - 1)` with each `x_i` a `gcd(d, n_i)`-th power mod `q`.
pub fn d_x_h(x: &DualElement, h: &FiniteAbelianGroup, q: u64) -> Result<u64> {
    check_prime(q)?;
    if x.components.len() != h.rank() {
        return Err(Error::DualLength {
            expected: h.rank(),
            got: x.components.len(),
        });
    }
    let residues = x
        .components
        .iter()
        .map(|c| reduce(c, q))
        .collect::<Result<Vec<_>>>()?;
    let top = gcd(h.exponent(), q - 1);
    Ok(divisors(top)
        .into_iter()
        .rev()
        .find(|&d| {
            residues
                .iter()
                .zip(h.invariant_factors())
                .all(|(&r, &n)| is_power_residue(r, gcd(d, n), q))
        })
        .unwrap_or(1))
}

/// `F(A, B) = -1 + sum_{m | A} m sum_{d | gcd(m, B)} mu(m/d) |H[d]|`.
pub fn closed_form_f(a_val: u64, b_val: u64, h: &FiniteAbelianGroup) -> i64 {
    let mut total = -1i64;
    for m in divisors(a_val) {
        let inner: i64 = divisors(gcd(m, b_val))
            .into_iter()
            .map(|d| moebius(m / d) * h.torsion_count(d) as i64)
            .sum();
        total += m as i64 * inner;
    }
    total
}

/// `s_{x,H}(q) = F(d_A(q), d_x(q))`.
pub fn s_x_h(q: u64, h: &FiniteAbelianGroup, a: &SubgroupOfQStar, x: &DualElement) -> Result<i64> {
    Ok(closed_form_f(d_a_h(a, h, q)?, d_x_h(x, h, q)?, h))
}

/// `1 + s / q` as an exact rational.
pub fn euler_factor(q: u64, s_val: i64) -> Rational {
    Rational::new(q as i64 + s_val, q as i64)
}

/// `1 + s / q^sigma` for real `sigma > 1/2`.
pub fn euler_factor_real(q: u64, s_val: i64, sigma: f64) -> f64 {
    1.0 + s_val as f64 / (q as f64).powf(sigma)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobenianSample {
    pub q: u64,
    pub d_a: u64,
    pub d_x: u64,
    pub s: i64,
    pub euler_factor: f64,
}

pub fn frobenian_sample(
    q: u64,
    h: &FiniteAbelianGroup,
    a: &SubgroupOfQStar,
    x: &DualElement,
) -> Result<FrobenianSample> {
    let d_a = d_a_h(a, h, q)?;
    let d_x = d_x_h(x, h, q)?;
    let s = closed_form_f(d_a, d_x, h);
    Ok(FrobenianSample {
        q,
        d_a,
        d_x,
        s,
        euler_factor: euler_factor_real(q, s, 1.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobenianMean {
    /// Average of `s + 1` over the good primes up to `q_max`.
    pub empirical: f64,
    /// `sum_{h in H} ord(h) / [k_{ord h} : k]`, when a degree oracle is known.
    pub predicted: Option<f64>,
    pub samples: usize,
    pub q_max: u64,
}

/// Empirical mean of `s_{x,H} + 1` over primes `q <= q_max`; primes dividing
/// `|H|` or the data of `A` and `x` are skipped.
pub fn frobenian_mean_empirical(
    h: &FiniteAbelianGroup,
    a: &SubgroupOfQStar,
    x: &DualElement,
    q_max: u64,
) -> Result<FrobenianMean> {
    let order = h.order();
    let values: Vec<i64> = primes_up_to(q_max)
        .into_par_iter()
        .filter(|&q| !order.is_multiple_of(q))
        .filter_map(|q| match s_x_h(q, h, a, x) {
            Ok(s) => Some(Ok(s + 1)),
            Err(Error::BadPrime { .. }) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<Vec<_>>>()?;
    let samples = values.len();
    let empirical = values.iter().sum::<i64>() as f64 / samples.max(1) as f64;
    let predicted = if x.components.iter().all(|c| *c == Ratio::from_integer(1)) {
        a.oracle()
            .map(|o| predicted_mean(h, &o))
            .transpose()?
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
    } else {
        None
    };
    Ok(FrobenianMean {
        empirical,
        predicted,
        samples,
        q_max,
    })
}

/// `1 + rho(H, oracle)`: the identity contributes 1.
pub fn predicted_mean(h: &FiniteAbelianGroup, oracle: &DegreeOracle) -> Result<Rational> {
    Ok(rho(h, oracle)? + Rational::from_integer(1))
}

/// The unit classes of `Q` that are local `e`-th powers almost everywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShaOmega {
    pub classes: Vec<i64>,
    /// Set when `8 | e`, where `Q(mu_{2^r})/Q` is non-cyclic and the class of
    /// `-1` (or `16`) is not decided here.
    pub unsupported: bool,
}

pub fn sha_omega_unit_classes(e: u64) -> ShaOmega {
    ShaOmega {
        classes: vec![1],
        unsupported: e.is_multiple_of(8),
    }
}

/// `a + b sqrt(7)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadInt {
    pub a: i128,
    pub b: i128,
}

impl std::ops::Mul for QuadInt {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Self {
            a: self.a * o.a + Self::D * self.b * o.b,
            b: self.a * o.b + self.b * o.a,
        }
    }
}

impl QuadInt {
    const D: i128 = 7;

    pub fn pow(self, k: u32) -> Self {
        (0..k).fold(Self { a: 1, b: 0 }, |acc, _| acc * self)
    }

    pub fn norm(self) -> i128 {
        self.a * self.a - Self::D * self.b * self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WangReport {
    pub unit: QuadInt,
    pub fourth_power: QuadInt,
    /// `(8 + 3 sqrt 7)^4 = 32257 + 12192 sqrt 7`.
    pub power_identity: bool,
    /// `8 + 3 sqrt 7` is the fundamental unit, so `u = eps^4` is not `+-eps^{8k}`.
    pub not_global_eighth_power: bool,
    /// Odd split primes tested for the local eighth-power condition.
    pub split_primes_tested: usize,
    pub local_failures: Vec<u64>,
}

impl WangReport {
    pub fn passed(&self) -> bool {
        self.power_identity && self.not_global_eighth_power && self.local_failures.is_empty()
    }
}

/// Checks that `u = 32257 + 12192 sqrt 7` is a local eighth power at every
/// odd split prime up to `p_max` but not a global eighth power in `Z[sqrt 7]`.
pub fn wang_counterexample_check(p_max: u64) -> Result<WangReport> {
    let eps = QuadInt { a: 8, b: 3 };
    let u = QuadInt { a: 32257, b: 12192 };
    let fourth = eps.pow(4);
    let power_identity = fourth == u && u.norm() == 1;

    // Fundamental unit: smallest y > 0 with x^2 - 7 y^2 = +-1.
    let fundamental = (1i128..)
        .find_map(|y| {
            let t = QuadInt::D * y * y;
            [t + 1, t - 1].into_iter().find_map(|n| {
                let x = (n as f64).sqrt().round() as i128;
                (x * x == n).then_some(QuadInt { a: x, b: y })
            })
        })
        .expect("Pell equation has a solution");
    // u = eps^4 and every unit is +-eps^k; 8k = 4 has no integer solution.
    let not_global_eighth_power = fundamental == eps && (1..=4).all(|k| eps.pow(8 * k) != u);

    let mut tested = 0;
    let mut failures = Vec::new();
    for p in primes_up_to(p_max) {
        if p == 2 || p == 7 || pow_mod(7, (p - 1) / 2, p) != 1 {
            continue;
        }
        let r = (1..p).find(|&r| r * r % p == 7 % p).expect("7 is a square");
        tested += 1;
        let exp = (p - 1) / gcd(8, p - 1);
        for root in [r, p - r] {
            let a = (u.a as u64) % p;
            let b = (u.b as u64) % p;
            let image = (a + crate::arith::mul_mod(b, root, p)) % p;
            if pow_mod(image, exp, p) != 1 {
                failures.push(p);
            }
        }
    }
    if !power_identity || !not_global_eighth_power || !failures.is_empty() {
        return Err(Error::CheckFailed(format!(
            "identity {power_identity}, non-eighth-power {not_global_eighth_power}, local failures {failures:?}"
        )));
    }
    Ok(WangReport {
        unit: u,
        fourth_power: fourth,
        power_identity,
        not_global_eighth_power,
        split_primes_tested: tested,
        local_failures: failures,
    })
}
