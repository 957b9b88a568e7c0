//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use genuslab::arith::{is_fundamental_discriminant, primes_up_to};
use genuslab::asymptotics::{
    delta_p_comparison, empirical_constant, fit_exponent, mean_genus_exponent,
    predict_leading_constant, zero_density_report,
};
use genuslab::enumerate::{
    enumerate, enumerate_with, quarter_decade_checkpoints, surjection_count_via_moebius,
    ConductorCounter, EnumerationConfig, Statistic,
};
use genuslab::exponents::{rho, DegreeOracle, Rational};
use genuslab::forms::genus_number_forms;
use genuslab::frobenian::{
    euler_factor, frobenian_mean_empirical, s_x_h, wang_counterexample_check, DualElement,
    SubgroupOfQStar,
};
use genuslab::genus::genus_number;
use genuslab::{
    ExtensionRecord, FiniteAbelianGroup, LocalConditionSet, ResidueCharacter, Result,
    SummationSeries,
};

type Outcome = Result<(bool, String)>;

fn g(s: &str) -> FiniteAbelianGroup {
    s.parse().expect("group literal")
}

struct Series {
    cache: BTreeMap<(String, u64), SummationSeries>,
}

impl Series {
    fn get(&mut self, group: &str, bound: u64) -> Result<&SummationSeries> {
        let key = (group.to_string(), bound);
        if !self.cache.contains_key(&key) {
            let s = enumerate(
                &g(group),
                bound,
                &LocalConditionSet::new(),
                &quarter_decade_checkpoints(bound),
            )?;
            self.cache.insert(key.clone(), s);
        }
        Ok(&self.cache[&key])
    }
}

fn exponent_tables() -> Outcome {
    let q = DegreeOracle::Rational;
    let mut ok = true;
    for l in [2u64, 3, 5, 7] {
        ok &= rho(&FiniteAbelianGroup::cyclic(l), &q)? == Rational::from_integer(l as i64);
    }
    let klein = rho(&g("2,2"), &q)?;
    let z4 = rho(&g("4"), &q)?;
    let z4_mu4 = rho(&g("4"), &DegreeOracle::all_roots_of_unity(4))?;
    ok &= klein == Rational::from_integer(6)
        && z4 == Rational::from_integer(6)
        && z4_mu4 == Rational::from_integer(10);
    Ok((
        ok,
        format!(
            "rho(Z/2,Z/3,Z/5,Z/7) = l; (Z/2)^2 -> {klein}; Z/4 -> {z4}; Z/4 with mu_4 -> {z4_mu4}"
        ),
    ))
}

fn oracle_equivalence() -> Outcome {
    let mut total = 0;
    let mut mismatches = Vec::new();
    for d in -9_999i64..0 {
        if !is_fundamental_discriminant(d) {
            continue;
        }
        total += 1;
        let a = genus_number(&ResidueCharacter::quadratic(d)?)?;
        let b = genus_number_forms(d)?;
        if a != b {
            mismatches.push(d);
        }
    }
    Ok((
        mismatches.is_empty(),
        format!(
            "{total} discriminants, {} mismatches {mismatches:?}",
            mismatches.len()
        ),
    ))
}

fn integrality() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["2", "3", "2,2", "4"] {
        let group = g(name);
        let mut records = 0u64;
        let mut bad = 0u64;
        let odd = group.order() % 2 == 1;
        let mut sink = |r: &ExtensionRecord| -> Result<()> {
            records += 1;
            let ratio_ok = r.narrow_genus == r.genus || r.narrow_genus == 2 * r.genus;
            if !ratio_ok || (odd && r.narrow_genus != r.genus) {
                bad += 1;
            }
            Ok(())
        };
        let series = enumerate_with(
            &group,
            100_000,
            &LocalConditionSet::new(),
            &[100_000],
            &EnumerationConfig::default(),
            Some(&mut sink),
        )?;
        let count = series.checkpoints[0].count;
        let counter = ConductorCounter::new(&group)?;
        let mut moebius_bad = 0;
        for m in 1..=1000u64 {
            let direct: u64 = (1..=m)
                .filter(|d| m % d == 0)
                .map(|d| counter.count(d).1)
                .sum();
            if surjection_count_via_moebius(&group, m)? != direct {
                moebius_bad += 1;
            }
        }
        ok &= bad == 0 && records == count && moebius_bad == 0;
        notes.push(format!(
            "{name}: {records} records, {bad} bad, {moebius_bad} Moebius mismatches"
        ));
    }
    Ok((ok, notes.join("; ")))
}

fn slopes(series: &mut Series) -> Outcome {
    let z2 = series.get("2", 10_000_000)?;
    let genus2 = fit_exponent(z2, Statistic::GenusSum)?;
    let count2 = fit_exponent(z2, Statistic::Count)?;
    let z3 = series.get("3", 10_000_000)?;
    let genus3 = fit_exponent(z3, Statistic::GenusSum)?;
    let ok = (genus2.exponent - 2.0).abs() <= 0.15
        && (count2.exponent - 1.0).abs() <= 0.1
        && (genus3.exponent - 3.0).abs() <= 0.3;
    Ok((
        ok,
        format!(
            "Z/2 genus r = {:.4}, Z/2 count r = {:.4}, Z/3 genus r = {:.4}",
            genus2.exponent, count2.exponent, genus3.exponent
        ),
    ))
}

fn mean_exponents(series: &mut Series) -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["2", "3"] {
        let fit = mean_genus_exponent(series.get(name, 10_000_000)?)?;
        let predicted = fit.predicted.unwrap_or(f64::NAN);
        ok &= (fit.exponent - predicted).abs() <= 0.2;
        notes.push(format!("Z/{name}: {:.4} vs {predicted}", fit.exponent));
    }
    Ok((ok, notes.join(", ")))
}

fn ramification_density(series: &mut Series) -> Outcome {
    let z2 = series.get("2", 10_000_000)?;
    let mut ok = true;
    let mut notes = Vec::new();
    for p in [3u64, 5, 7, 11, 13] {
        let c = delta_p_comparison(z2, p)?;
        ok &= c.relative_error <= 0.02;
        notes.push(format!("p={p}: {:.5}/{:.5}", c.empirical, c.predicted));
    }
    Ok((ok, notes.join(", ")))
}

fn zero_density(series: &mut Series) -> Outcome {
    let report = zero_density_report(series.get("2", 10_000_000)?, 1, 4);
    let at = |b: u64| {
        report
            .row(b)
            .map(|r| r.genus_proportion)
            .unwrap_or(f64::NAN)
    };
    let (p3, p5, p7) = (at(1_000), at(100_000), at(10_000_000));
    Ok((
        p7 < p5 && p7 < p3 / 2.0,
        format!("g = 1: {p3:.4} (10^3), {p5:.4} (10^5), {p7:.4} (10^7)"),
    ))
}

fn frobenian_means() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for name in ["2", "3", "2,2", "4"] {
        let h = g(name);
        for (label, a) in [
            ("1", SubgroupOfQStar::trivial()),
            ("-1", SubgroupOfQStar::minus_one()),
        ] {
            let m = frobenian_mean_empirical(&h, &a, &DualElement::one(&h), 1_000_000)?;
            let predicted = m.predicted.unwrap_or(f64::NAN);
            ok &= ((m.empirical - predicted) / predicted).abs() <= 0.01;
            if name == "2" && label == "1" {
                ok &= m.empirical == 3.0;
            }
            notes.push(format!(
                "{name}/<{label}>: {:.4} vs {predicted}",
                m.empirical
            ));
        }
    }
    Ok((ok, notes.join(", ")))
}

/// `sum_chi e(chi) / Phi(chi)` over `Hom((Z/q)^*, G)`, by direct enumeration.
fn direct_character_sum(group: &FiniteAbelianGroup, q: u64) -> Result<Rational> {
    let mut total = Rational::from_integer(0);
    for h in group.elements() {
        if !group.is_identity(&group.scale(&h, q - 1)) {
            continue;
        }
        // chi(generator) = h: image is <h>, conductor q unless h = 0.
        let e = group.element_order(&h)?;
        let phi = if e == 1 { 1 } else { q };
        total += Rational::new(e as i64, phi as i64);
    }
    Ok(total)
}

fn fourier_shadow() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for name in ["2", "3", "4", "2,2"] {
        let group = g(name);
        for q in primes_up_to(1000) {
            if group.order().is_multiple_of(q) {
                continue;
            }
            let s = s_x_h(
                q,
                &group,
                &SubgroupOfQStar::trivial(),
                &DualElement::one(&group),
            )?;
            let formula = euler_factor(q, s);
            let direct = direct_character_sum(&group, q)?;
            let table = genuslab::asymptotics::local_sum(
                &group,
                q,
                &genuslab::enumerate::LocalCondition::Any,
            )?;
            checked += 1;
            if formula != direct || formula != table {
                failures.push(format!("{name}@{q}"));
            }
        }
    }
    Ok((
        failures.is_empty(),
        format!("{checked} (G, q) pairs, failures {failures:?}"),
    ))
}

fn leading_constant(series: &mut Series) -> Outcome {
    let prediction = predict_leading_constant(&g("2"), &LocalConditionSet::new(), 1_000_000)?;
    let c = prediction
        .field_constant
        .unwrap_or(prediction.surjection_constant);
    let z2 = series.get("2", 10_000_000)?;
    let r5 = empirical_constant(z2, Statistic::GenusSum, 100_000)?.constant / c;
    let r7 = empirical_constant(z2, Statistic::GenusSum, 10_000_000)?.constant / c;
    let ok = (0.8..=1.2).contains(&r7) && (r7 - 1.0).abs() < (r5 - 1.0).abs();
    Ok((
        ok,
        format!("predicted c = {c:.6}; ratio {r5:.5} at 10^5, {r7:.5} at 10^7"),
    ))
}

fn wang() -> Outcome {
    let report = wang_counterexample_check(10_000)?;
    Ok((
        report.passed(),
        format!(
            "(8+3 sqrt7)^4 = {} + {} sqrt7; {} split primes checked",
            report.fourth_power.a, report.fourth_power.b, report.split_primes_tested
        ),
    ))
}

fn determinism() -> Outcome {
    let group = g("2,2");
    let cps = quarter_decade_checkpoints(100_000);
    let run = |threads| -> Result<String> {
        let config = EnumerationConfig {
            threads: Some(threads),
            ..EnumerationConfig::default()
        };
        enumerate_with(
            &group,
            100_000,
            &LocalConditionSet::new(),
            &cps,
            &config,
            None,
        )?
        .to_json()
    };
    let serial = run(1)?;
    let parallel = run(4)?;
    let parallel8 = run(8)?;
    Ok((
        serial == parallel && serial == parallel8,
        format!("{} bytes, 1 vs 4 vs 8 workers", serial.len()),
    ))
}

fn main() -> ExitCode {
    let mut series = Series {
        cache: BTreeMap::new(),
    };
    let mut failed = 0;
    let mut report = |n: u32, name: &str, outcome: Outcome, started: Instant| {
        let (pass, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {n:>2} ({name}): {detail} [{:.1}s]",
            if pass { "PASS" } else { "FAIL" },
            started.elapsed().as_secs_f64()
        );
    };
    let t = Instant::now();
    report(1, "exponent tables", exponent_tables(), t);
    let t = Instant::now();
    report(2, "oracle equivalence", oracle_equivalence(), t);
    let t = Instant::now();
    report(3, "integrality and structure", integrality(), t);
    let t = Instant::now();
    report(4, "asymptotic slope", slopes(&mut series), t);
    let t = Instant::now();
    report(5, "mean genus exponent", mean_exponents(&mut series), t);
    let t = Instant::now();
    report(
        6,
        "ramification density",
        ramification_density(&mut series),
        t,
    );
    let t = Instant::now();
    report(7, "zero density", zero_density(&mut series), t);
    let t = Instant::now();
    report(8, "frobenian means", frobenian_means(), t);
    let t = Instant::now();
    report(9, "Fourier shadow", fourier_shadow(), t);
    let t = Instant::now();
    report(10, "leading constant", leading_constant(&mut series), t);
    let t = Instant::now();
    report(11, "Wang check", wang(), t);
    let t = Instant::now();
    report(12, "determinism", determinism(), t);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
