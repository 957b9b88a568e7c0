//! Exponent and constant fits, zero-density tables and predicted constants.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use statrs::function::gamma::digamma;

use crate::arith::{gcd, primes_up_to};
use crate::characters::unit_group_structure;
use crate::enumerate::{
    local_character_table, max_conductor_exponent, LocalCondition, LocalConditionSet,
    LocalTableEntry, Place, Statistic, SummationSeries,
};
use crate::error::{Error, Result};
use crate::exponents::{omega_q, rho_q, Rational};
use crate::frobenian::{closed_form_f, sha_omega_unit_classes};
use crate::group::FiniteAbelianGroup;

/// Checkpoints below this are ignored by the default fits.
pub const DEFAULT_FIT_FLOOR: u64 = 1_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    /// `r` in `S(B) ~ c B (log B + s)^{r-1}`; for a mean, the power of `log B + s`.
    pub exponent: f64,
    pub constant: f64,
    /// `s` in `c (log B + s)^beta`.
    pub shift: f64,
    /// Weighted RMS residual in `log S`.
    pub residual: f64,
    /// Slope between the two largest checkpoints, on the same scale as `exponent`.
    pub two_point_exponent: f64,
    pub predicted: Option<f64>,
    pub min_bound: u64,
    pub max_bound: u64,
    pub points: usize,
}

/// Weighted least squares `min sum w (row . x - y)^2`.
fn weighted_least_squares(rows: &[Vec<f64>], ys: &[f64], ws: &[f64]) -> Option<Vec<f64>> {
    let n = rows.first()?.len();
    let a = DMatrix::from_fn(rows.len(), n, |i, j| ws[i].sqrt() * rows[i][j]);
    let b = DVector::from_fn(ys.len(), |i, _| ws[i].sqrt() * ys[i]);
    let x = a.svd(true, true).solve(&b, 1e-14).ok()?;
    x.iter()
        .all(|v| v.is_finite())
        .then(|| x.iter().copied().collect())
}

struct LogPowerFit {
    beta: f64,
    leading: f64,
    shift: f64,
    residual: f64,
    two_point: f64,
}

/// Weighted regression of `ln y` on `ln(L + shift)`: `(ss, ln a, beta)`.
fn shifted_regression(ls: &[f64], ys: &[f64], ws: &[f64], shift: f64) -> Option<(f64, f64, f64)> {
    let rows: Vec<Vec<f64>> = ls.iter().map(|&l| vec![1.0, (l + shift).ln()]).collect();
    let logs: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let coef = weighted_least_squares(&rows, &logs, ws)?;
    let ss = rows
        .iter()
        .zip(&logs)
        .zip(ws)
        .map(|((r, y), w)| w * (coef[0] + coef[1] * r[1] - y).powi(2))
        .sum();
    Some((ss, coef[0], coef[1]))
}

/// Fits `y(B) ~ a (log B + shift)^beta`, weighting the two largest
/// checkpoints double. The shift absorbs the lower powers of `log B`; it is
/// found by a scan refined with golden sections.
fn fit_log_power(points: &[(u64, f64)]) -> Result<LogPowerFit> {
    let count = points.len();
    let span = match (points.first(), points.last()) {
        (Some(a), Some(b)) => (b.0 as f64 / a.0 as f64).log10(),
        _ => 0.0,
    };
    if count < 4 || span < 2.0 - 1e-9 {
        return Err(Error::InsufficientCheckpoints { count, span });
    }
    let ls: Vec<f64> = points.iter().map(|&(b, _)| (b as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    let ws: Vec<f64> = (0..count)
        .map(|i| if i + 2 >= count { 2.0 } else { 1.0 })
        .collect();
    let objective =
        |shift: f64| shifted_regression(&ls, &ys, &ws, shift).map_or(f64::INFINITY, |r| r.0);
    let lo_bound = -0.9 * ls[0];
    let hi_bound = 10.0 * ls[count - 1];
    let steps = 4000;
    let step = (hi_bound - lo_bound) / steps as f64;
    let mut best = (0..=steps)
        .map(|k| lo_bound + step * k as f64)
        .min_by(|&a, &b| objective(a).total_cmp(&objective(b)))
        .unwrap_or(0.0);
    let (mut lo, mut hi) = ((best - step).max(lo_bound), (best + step).min(hi_bound));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let m1 = hi - phi * (hi - lo);
        let m2 = lo + phi * (hi - lo);
        if objective(m1) < objective(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    if objective((lo + hi) / 2.0) <= objective(best) {
        best = (lo + hi) / 2.0;
    }
    let (ss, log_a, beta) = shifted_regression(&ls, &ys, &ws, best)
        .ok_or_else(|| Error::CheckFailed("singular fit".into()))?;
    let residual = (ss / ws.iter().sum::<f64>()).sqrt();
    let two_point = (ys[count - 1] / ys[count - 2]).ln() / (ls[count - 1] / ls[count - 2]).ln();
    Ok(LogPowerFit {
        beta,
        leading: log_a.exp(),
        shift: best,
        residual,
        two_point,
    })
}

fn usable(series: &SummationSeries, stat: Statistic, floor: u64) -> Vec<(u64, u64)> {
    series
        .column(stat)
        .into_iter()
        .filter(|&(b, v)| b >= floor && b <= series.completed_bound && v > 0)
        .collect()
}

/// Exponent fit of a statistic with checkpoints at or above `floor`.
pub fn fit_exponent_from(
    series: &SummationSeries,
    stat: Statistic,
    floor: u64,
) -> Result<FitResult> {
    let raw = usable(series, stat, floor);
    let points: Vec<(u64, f64)> = raw.iter().map(|&(b, v)| (b, v as f64 / b as f64)).collect();
    let fit = fit_log_power(&points)?;
    let predicted = match stat {
        Statistic::Count | Statistic::FieldCount => Some(omega_q(&series.group) as f64),
        Statistic::GenusSum | Statistic::ProdESum | Statistic::NarrowGenusSum => {
            Some(rho_q(&series.group) as f64)
        }
    };
    Ok(FitResult {
        exponent: fit.beta + 1.0,
        constant: fit.leading,
        shift: fit.shift,
        residual: fit.residual,
        two_point_exponent: fit.two_point + 1.0,
        predicted,
        min_bound: points[0].0,
        max_bound: points[points.len() - 1].0,
        points: points.len(),
    })
}

pub fn fit_exponent(series: &SummationSeries, stat: Statistic) -> Result<FitResult> {
    fit_exponent_from(series, stat, DEFAULT_FIT_FLOOR)
}

/// Fit of `(sum g / N)(B) ~ c (log B)^{rho - omega}`.
pub fn mean_genus_exponent_from(series: &SummationSeries, floor: u64) -> Result<FitResult> {
    let points: Vec<(u64, f64)> = series
        .checkpoints
        .iter()
        .filter(|c| c.bound >= floor && c.bound <= series.completed_bound && c.count > 0)
        .map(|c| (c.bound, c.genus_sum as f64 / c.count as f64))
        .collect();
    let fit = fit_log_power(&points)?;
    Ok(FitResult {
        exponent: fit.beta,
        constant: fit.leading,
        shift: fit.shift,
        residual: fit.residual,
        two_point_exponent: fit.two_point,
        predicted: Some(rho_q(&series.group) as f64 - omega_q(&series.group) as f64),
        min_bound: points[0].0,
        max_bound: points[points.len() - 1].0,
        points: points.len(),
    })
}

pub fn mean_genus_exponent(series: &SummationSeries) -> Result<FitResult> {
    mean_genus_exponent_from(series, DEFAULT_FIT_FLOOR)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    pub bound: u64,
    pub count: u64,
    pub genus_proportion: f64,
    /// Entry `r`: proportion with at most `r` ramified finite primes.
    pub omega_at_most: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroDensityReport {
    pub genus: u64,
    pub rows: Vec<DensityRow>,
    /// Checkpoints where the genus proportion went up.
    pub inversions: Vec<u64>,
}

impl ZeroDensityReport {
    pub fn row(&self, bound: u64) -> Option<&DensityRow> {
        self.rows.iter().find(|r| r.bound == bound)
    }
}

pub fn zero_density_report(
    series: &SummationSeries,
    genus: u64,
    max_omega: usize,
) -> ZeroDensityReport {
    let rows: Vec<DensityRow> = series
        .checkpoints
        .iter()
        .filter(|c| c.bound <= series.completed_bound)
        .map(|c| DensityRow {
            bound: c.bound,
            count: c.count,
            genus_proportion: c.genus_proportion(genus),
            omega_at_most: (0..=max_omega)
                .map(|r| c.omega_at_most_proportion(r))
                .collect(),
        })
        .collect();
    let inversions = rows
        .windows(2)
        .filter(|w| w[1].genus_proportion > w[0].genus_proportion)
        .map(|w| w[1].bound)
        .collect();
    ZeroDensityReport {
        genus,
        rows,
        inversions,
    }
}

/// `delta_p = t / (p + t)` with `t = |G[p - 1]| - 1`.
pub fn delta_p_prediction(group: &FiniteAbelianGroup, p: u64) -> Result<Rational> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if group.order().is_multiple_of(p) {
        return Err(Error::PrimeExcluded(p));
    }
    let t = group.torsion_count(gcd(p - 1, group.exponent())) as i64 - 1;
    Ok(Rational::new(t, p as i64 + t))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaComparison {
    pub p: u64,
    pub bound: u64,
    pub predicted: f64,
    pub empirical: f64,
    pub relative_error: f64,
}

/// Frequency of `p | Phi` at the last complete checkpoint, against `delta_p`.
pub fn delta_p_comparison(series: &SummationSeries, p: u64) -> Result<DeltaComparison> {
    let predicted = delta_p_prediction(&series.group, p)?;
    let predicted = *predicted.numer() as f64 / *predicted.denom() as f64;
    let index = series
        .tracked_index(p)
        .ok_or_else(|| Error::InvalidCondition(format!("prime {p} was not tracked")))?;
    let cp = series
        .checkpoints
        .iter()
        .rev()
        .find(|c| c.bound <= series.completed_bound && c.count > 0)
        .ok_or_else(|| Error::CheckFailed("series has no extensions".into()))?;
    let empirical = cp.ramified_counts[index] as f64 / cp.count as f64;
    Ok(DeltaComparison {
        p,
        bound: cp.bound,
        predicted,
        empirical,
        relative_error: (empirical - predicted).abs() / predicted,
    })
}

fn passes(entry: &LocalTableEntry, group: &FiniteAbelianGroup, condition: &LocalCondition) -> bool {
    match condition {
        LocalCondition::Any => true,
        LocalCondition::Unramified | LocalCondition::Split => entry.conductor_exponent == 0,
        LocalCondition::RamificationIndex(k) => entry.ramification_index == *k,
        LocalCondition::Characters(list) => list.iter().any(|c| c.primitive() == entry.character),
        LocalCondition::NormMinusOne => group.is_identity(&entry.value_at_minus_one),
    }
}

/// `sum_chi e(chi) / Phi(chi)` over characters of `Z_p^*` allowed by `condition`.
pub fn local_sum(
    group: &FiniteAbelianGroup,
    p: u64,
    condition: &LocalCondition,
) -> Result<Rational> {
    let level = max_conductor_exponent(p, group);
    let table = local_character_table(p, level, group)?;
    let mut total = Rational::from_integer(0);
    for entry in table.iter().filter(|e| passes(e, group, condition)) {
        let phi = crate::arith::checked_pow(p, entry.conductor_exponent)
            .ok_or(Error::ModulusTooLarge(p as u128))?;
        total += Rational::new(entry.ramification_index as i64, phi as i64);
    }
    Ok(total)
}

/// `(1 + s_{1,G}(q) / q)(1 - 1/q)^rho` at a tame prime, or the table sum in
/// place of the first factor when `q | |G|`.
pub fn regularized_euler_factor(group: &FiniteAbelianGroup, q: u64) -> Result<f64> {
    let rho = rho_q(group) as i32;
    let first = if group.order().is_multiple_of(q) {
        let r = local_sum(group, q, &LocalCondition::Any)?;
        *r.numer() as f64 / *r.denom() as f64
    } else {
        let s = closed_form_f(
            gcd(group.exponent(), q - 1),
            gcd(group.exponent(), q - 1),
            group,
        );
        1.0 + s as f64 / q as f64
    };
    Ok(first * (1.0 - 1.0 / q as f64).powi(rho))
}

/// Hurwitz `zeta(2, x)` for `x > 0`, by Euler-Maclaurin after 20 terms.
fn hurwitz_zeta2(x: f64) -> f64 {
    let n = 20.0;
    let head: f64 = (0..20).map(|k| 1.0 / (k as f64 + x).powi(2)).sum();
    let y = n + x;
    head + 1.0 / y + 1.0 / (2.0 * y * y) + 1.0 / (6.0 * y.powi(3)) - 1.0 / (30.0 * y.powi(5))
        + 1.0 / (42.0 * y.powi(7))
}

/// Dirichlet characters modulo `e` carrying the dependence of the factors on
/// `q mod e`. With `s(q) - rho = sum_chi a_chi chi(q)`, multiplying each
/// factor by `prod_chi (1 - chi(q)/q)^{a_chi}` leaves `1 + c(q)/q^2 + ...`;
/// with `c(q) = sum_chi b_chi chi(q)` a second layer
/// `prod_chi (1 - chi(q)/q^2)^{b_chi}` leaves `1 + O(1/q^3)`. Both layers are
/// restored exactly through `L(1, chi)^{a_chi} L(2, chi)^{b_chi}`.
struct Twist {
    modulus: u64,
    /// `chi(0..e)` for every character modulo `e`, the trivial one first.
    characters: Vec<Vec<Complex64>>,
    first: Vec<Complex64>,
    second: Vec<Complex64>,
}

impl Twist {
    fn new(group: &FiniteAbelianGroup) -> Result<Self> {
        let e = group.exponent();
        let units: Vec<u64> = (1..=e).filter(|&a| gcd(a, e) == 1).collect();
        // Coordinates of each unit in a basis of (Z/e)^*.
        let mut orders = Vec::new();
        let mut logs = vec![Vec::new(); units.len()];
        for (p, k) in crate::arith::factorize(e) {
            let structure = unit_group_structure(p, k)?;
            orders.extend(structure.generators().iter().map(|&(_, n)| n));
            for (i, &a) in units.iter().enumerate() {
                logs[i].extend(structure.discrete_log(a as i64)?);
            }
        }
        let mut characters = Vec::new();
        let mut t = vec![0u64; orders.len()];
        'odometer: loop {
            let mut values = vec![Complex64::new(0.0, 0.0); e as usize];
            for (i, &a) in units.iter().enumerate() {
                let turn: f64 = logs[i]
                    .iter()
                    .zip(&t)
                    .zip(&orders)
                    .map(|((&l, &tj), &n)| (l * tj % n) as f64 / n as f64)
                    .sum();
                values[(a % e) as usize] = Complex64::from_polar(1.0, TAU * turn);
            }
            characters.push(values);
            let mut j = 0;
            loop {
                if j == t.len() {
                    break 'odometer;
                }
                t[j] += 1;
                if t[j] < orders[j] {
                    break;
                }
                t[j] = 0;
                j += 1;
            }
        }
        let rho = rho_q(group) as f64;
        let phi = units.len() as f64;
        let at = |chi: &[Complex64], a: u64| chi[(a % e) as usize];
        let expand = |f: &dyn Fn(u64) -> Complex64| -> Vec<Complex64> {
            characters
                .iter()
                .map(|chi| {
                    units
                        .iter()
                        .map(|&a| f(a) * at(chi, a).conj())
                        .sum::<Complex64>()
                        / phi
                })
                .collect()
        };
        let s_value = |a: u64| {
            let d = gcd(e, a + e - 1);
            closed_form_f(d, d, group) as f64
        };
        let mut first = expand(&|a| Complex64::new(s_value(a) - rho, 0.0));
        first[0] = Complex64::new(0.0, 0.0);
        // Coefficient of 1/q^2 in log[(1 + s/q)(1 - 1/q)^rho prod (1 - chi/q)^{a_chi}].
        let second = expand(&|a| {
            let twisted: Complex64 = characters
                .iter()
                .zip(&first)
                .map(|(chi, c)| c * at(chi, a) * at(chi, a))
                .sum();
            -(twisted + s_value(a).powi(2) + rho) / 2.0
        });
        Ok(Self {
            modulus: e,
            characters,
            first,
            second,
        })
    }

    fn chi(&self, index: usize, q: u64) -> Complex64 {
        self.characters[index][(q % self.modulus) as usize]
    }

    fn layers(&self) -> impl Iterator<Item = (usize, Complex64, Complex64)> + '_ {
        (0..self.characters.len()).map(|i| (i, self.first[i], self.second[i]))
    }

    /// `Re sum_chi [a_chi log(1 - chi(q)/q) + b_chi log(1 - chi(q)/q^2)]`.
    fn damping(&self, q: u64) -> f64 {
        let one = Complex64::new(1.0, 0.0);
        let x = 1.0 / q as f64;
        self.layers()
            .map(|(i, a, b)| {
                let chi = self.chi(i, q);
                (a * (one - chi * x).ln() + b * (one - chi * x * x).ln()).re
            })
            .sum()
    }

    /// `Re sum_chi [a_chi log L_S(1, chi) + b_chi log L_S(2, chi)]`, with the
    /// branch at `s = 1` continuing the Euler product.
    fn completion(&self, primes: &[u64], s_primes: &[u64]) -> f64 {
        let e = self.modulus as f64;
        let one = Complex64::new(1.0, 0.0);
        self.layers()
            .map(|(i, a, b)| {
                let mut total = Complex64::new(0.0, 0.0);
                if a.norm() > 1e-12 {
                    let l1 = -(1..=self.modulus)
                        .map(|r| self.chi(i, r) * digamma(r as f64 / e))
                        .sum::<Complex64>()
                        / e;
                    let partial: Complex64 = primes
                        .iter()
                        .map(|&q| -(one - self.chi(i, q) / q as f64).ln())
                        .sum();
                    let mut log_l = l1.ln();
                    log_l.im += TAU * ((partial.im - log_l.im) / TAU).round();
                    let local: Complex64 = s_primes
                        .iter()
                        .map(|&q| (one - self.chi(i, q) / q as f64).ln())
                        .sum();
                    total += a * (log_l + local);
                }
                if b.norm() > 1e-12 {
                    let l2 = (1..=self.modulus)
                        .map(|r| self.chi(i, r) * hurwitz_zeta2(r as f64 / e))
                        .sum::<Complex64>()
                        / (e * e);
                    let local: Complex64 = s_primes
                        .iter()
                        .map(|&q| (one - self.chi(i, q) / (q * q) as f64).ln())
                        .sum();
                    total += b * (l2.ln() + local);
                }
                total.re
            })
            .sum()
    }
}

/// Weight of the archimedean place and the unit index in the leading term.
///
/// A character `psi` of conductor `m` has `g = e_inf prod e_p / (|G| iota)`.
/// The Dirichlet series of `prod e_p` over all tuples of local unit characters
/// is the Euler product; `iota` and `e_inf` are global, but their indicator
/// functions expand over `G^` into further Euler products of strictly smaller
/// pole order except for the terms with trivial dual character. What remains:
/// `iota = 2` generically when `e` is even; `psi(-1)` is equidistributed on
/// `G[2]`, so `E[e_inf] = 2 - 1/|G[2]|`, or `1/|G[2]|` when the real place is
/// forced to split and `2 (1 - 1/|G[2]|)` when it must ramify. A finite prime
/// forced to split also fixes its Frobenius, a further factor `1/|G|`.
pub fn global_normalization(group: &FiniteAbelianGroup, conditions: &LocalConditionSet) -> f64 {
    let order = group.order() as f64;
    let n2 = group.torsion_count(2) as f64;
    let unit = if group.exponent().is_multiple_of(2) {
        0.5
    } else {
        1.0
    };
    let archimedean = if conditions.real_split() {
        1.0 / n2
    } else if conditions.real_ramified() {
        2.0 * (1.0 - 1.0 / n2)
    } else {
        2.0 - 1.0 / n2
    };
    let split = conditions
        .iter()
        .filter(|(p, c)| matches!(p, Place::Finite(_)) && **c == LocalCondition::Split)
        .count() as i32;
    unit * archimedean / order * order.powi(-split)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantPrediction {
    pub group: String,
    pub rho: u64,
    /// `c` in `sum_{Phi <= B} g ~ c B (log B)^{rho - 1}`, over surjections.
    pub surjection_constant: f64,
    /// The same divided by `|Aut(G)|`.
    pub field_constant: Option<f64>,
    pub automorphisms: Option<u64>,
    pub normalization: f64,
    /// Product of the regularized factors over the primes in `S`.
    pub s_factor: f64,
    /// Product over the remaining primes up to `truncation`, accelerated by
    /// the Dirichlet `L`-values carrying the dependence of `s(q)` on `q mod e`.
    pub euler_product: f64,
    pub truncation: u64,
    pub s_primes: Vec<u64>,
}

/// Leading constant of the genus-weighted count, from a truncated Euler product.
pub fn predict_leading_constant(
    group: &FiniteAbelianGroup,
    conditions: &LocalConditionSet,
    truncation: u64,
) -> Result<ConstantPrediction> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    if sha_omega_unit_classes(group.exponent()).unsupported {
        return Err(Error::UnsupportedShaOmega);
    }
    let order = group.order();
    let square = order.saturating_mul(order);
    let mut s_primes: Vec<u64> = primes_up_to(square);
    s_primes.extend(crate::arith::factorize(order).into_iter().map(|(p, _)| p));
    s_primes.extend(conditions.finite_primes());
    s_primes.sort_unstable();
    s_primes.dedup();
    let largest = *s_primes.last().unwrap_or(&2);
    if truncation < largest.max(100) {
        return Err(Error::TruncationTooSmall(truncation));
    }
    let rho = rho_q(group);
    let rho_i = rho as i32;
    let mut s_factor = 1.0;
    for &p in &s_primes {
        let r = local_sum(group, p, conditions.get(Place::Finite(p)))?;
        s_factor *= *r.numer() as f64 / *r.denom() as f64 * (1.0 - 1.0 / p as f64).powi(rho_i);
    }
    let twist = Twist::new(group)?;
    let mut log_product = 0.0;
    let primes = primes_up_to(truncation);
    for &q in &primes {
        if s_primes.binary_search(&q).is_ok() {
            continue;
        }
        log_product += regularized_euler_factor(group, q)?.ln() + twist.damping(q);
    }
    log_product += twist.completion(&primes, &s_primes);
    let euler_product = log_product.exp();
    let normalization = global_normalization(group, conditions);
    let gamma: f64 = (1..rho).map(|k| k as f64).product();
    let surjection_constant = normalization * s_factor * euler_product / gamma;
    let automorphisms = group.automorphism_count().ok();
    Ok(ConstantPrediction {
        group: group.to_string(),
        rho,
        surjection_constant,
        field_constant: automorphisms.map(|a| surjection_constant / a as f64),
        automorphisms,
        normalization,
        s_factor,
        euler_product,
        truncation,
        s_primes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantFit {
    pub bound: u64,
    /// Leading coefficient of `S(B) / B` as a polynomial in `log B`.
    pub constant: f64,
    pub points: usize,
}

/// Fits `S(B) / B` by a polynomial of degree `rho - 1` in `log B` over the
/// checkpoints in `[bound / 100, bound]`, returning the leading coefficient.
pub fn empirical_constant(
    series: &SummationSeries,
    stat: Statistic,
    bound: u64,
) -> Result<ConstantFit> {
    let degree = match stat {
        Statistic::Count | Statistic::FieldCount => omega_q(&series.group),
        _ => rho_q(&series.group),
    }
    .saturating_sub(1) as usize;
    let points: Vec<(u64, u64)> = usable(series, stat, (bound / 100).max(1))
        .into_iter()
        .filter(|&(b, _)| b <= bound)
        .collect();
    let span = match (points.first(), points.last()) {
        (Some(a), Some(b)) => (b.0 as f64 / a.0 as f64).log10(),
        _ => 0.0,
    };
    if points.len() < degree + 3 || span < 2.0 - 1e-9 {
        return Err(Error::InsufficientCheckpoints {
            count: points.len(),
            span,
        });
    }
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|&(b, _)| {
            let l = (b as f64).ln();
            (0..=degree).map(|k| l.powi(k as i32)).collect()
        })
        .collect();
    let ys: Vec<f64> = points.iter().map(|&(b, v)| v as f64 / b as f64).collect();
    let ws: Vec<f64> = ys.iter().map(|y| 1.0 / (y * y)).collect();
    let coef = weighted_least_squares(&rows, &ys, &ws)
        .ok_or_else(|| Error::CheckFailed("singular fit".into()))?;
    Ok(ConstantFit {
        bound,
        constant: coef[degree],
        points: points.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantRatio {
    pub bound: u64,
    pub empirical: f64,
    pub ratio: f64,
}

/// Empirical over predicted genus-sum constant at every checkpoint that
/// admits a fit.
pub fn constant_ratios(
    series: &SummationSeries,
    prediction: &ConstantPrediction,
) -> Vec<ConstantRatio> {
    series
        .checkpoints
        .iter()
        .filter_map(|c| empirical_constant(series, Statistic::GenusSum, c.bound).ok())
        .map(|fit| ConstantRatio {
            bound: fit.bound,
            empirical: fit.constant,
            ratio: fit.constant / prediction.surjection_constant,
        })
        .collect()
}
