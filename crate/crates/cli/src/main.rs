use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use genuslab::arith::is_fundamental_discriminant;
use genuslab::asymptotics::{
    constant_ratios, fit_exponent_from, mean_genus_exponent_from, predict_leading_constant,
    zero_density_report, DEFAULT_FIT_FLOOR,
};
use genuslab::enumerate::{
    decade_checkpoints, default_checkpoints, enumerate_with, quarter_decade_checkpoints,
    CsvRecordWriter, EnumerationConfig, Statistic,
};
use genuslab::forms::{class_number, genus_number_forms};
use genuslab::frobenian::{frobenian_mean_empirical, DualElement, SubgroupOfQStar};
use genuslab::genus::genus_number;
use genuslab::{
    ExtensionRecord, FiniteAbelianGroup, LocalConditionSet, ResidueCharacter, SummationSeries,
};
use num_rational::Ratio;
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "genuslab",
    version,
    about = "Genus numbers of abelian extensions of Q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Spacing {
    /// B, B/2, B/4, ...
    Geometric,
    Decade,
    /// 10^{k/4}
    Quarter,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate G-extensions by conductor and write cumulative statistics.
    Enumerate {
        #[arg(long)]
        group: FiniteAbelianGroup,
        #[arg(long)]
        bound: u64,
        /// One condition per line: "p unramified", "p split", "p e=K", "inf split", "p norm -1".
        #[arg(long)]
        conditions: Option<PathBuf>,
        /// Series JSON; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-extension CSV.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value = "geometric")]
        checkpoints: Spacing,
        /// Extra primes whose ramification counts are tracked.
        #[arg(long, value_delimiter = ',')]
        track: Vec<u64>,
        #[arg(long)]
        sieve_cache: Option<PathBuf>,
    },
    /// Average of the frobenian function over primes up to qmax.
    Frobmean {
        #[arg(long)]
        group: FiniteAbelianGroup,
        /// Generators of A as comma-separated rationals; empty for the trivial subgroup.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        subgroup: String,
        /// Components of x in the dual, comma-separated rationals; defaults to 1.
        #[arg(long, allow_hyphen_values = true)]
        dual: Option<String>,
        #[arg(long)]
        qmax: u64,
    },
    /// Fit the log-power exponent of a cumulative statistic.
    Fit {
        #[arg(long)]
        series: PathBuf,
        /// count, field_count, prod_e_sum, genus_sum, narrow_genus_sum or mean_genus.
        #[arg(long, default_value = "genus_sum")]
        stat: String,
        #[arg(long, default_value_t = DEFAULT_FIT_FLOOR)]
        floor: u64,
        #[arg(long)]
        csv: bool,
    },
    /// Proportion of extensions with a given genus number, per checkpoint.
    Density {
        #[arg(long)]
        series: PathBuf,
        #[arg(long, default_value_t = 1)]
        genus: u64,
        #[arg(long, default_value_t = 4)]
        max_omega: usize,
        #[arg(long)]
        csv: bool,
    },
    /// Predicted leading constant of the genus sum.
    Predict {
        #[arg(long)]
        group: FiniteAbelianGroup,
        #[arg(long, default_value_t = 100_000)]
        qmax: u64,
        #[arg(long)]
        conditions: Option<PathBuf>,
        /// Compare against the fitted constants of a series.
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long)]
        csv: bool,
    },
    /// Compare genus numbers from binary forms with the character formula.
    Oracle {
        #[arg(long, default_value_t = 10_000)]
        dmax: i64,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Enumerate {
            group,
            bound,
            conditions,
            out,
            records,
            threads,
            checkpoints,
            track,
            sieve_cache,
        } => {
            let conditions = load_conditions(conditions.as_ref())?;
            let cps = match checkpoints {
                Spacing::Geometric => default_checkpoints(bound),
                Spacing::Decade => decade_checkpoints(bound),
                Spacing::Quarter => quarter_decade_checkpoints(bound),
            };
            let mut config = EnumerationConfig {
                threads,
                sieve_cache,
                ..Default::default()
            };
            config.tracked_primes.extend(track);
            config.tracked_primes.sort_unstable();
            config.tracked_primes.dedup();

            let series = match records {
                Some(path) => {
                    let file = File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    let mut writer = CsvRecordWriter::new(BufWriter::new(file))?;
                    let mut sink = |r: &ExtensionRecord| writer.write(r);
                    let series =
                        enumerate_with(&group, bound, &conditions, &cps, &config, Some(&mut sink))?;
                    writer.finish()?;
                    series
                }
                None => enumerate_with(&group, bound, &conditions, &cps, &config, None)?,
            };
            match out {
                Some(path) => series.save(&path)?,
                None => println!("{}", series.to_json()?),
            }
        }
        Command::Frobmean {
            group,
            subgroup,
            dual,
            qmax,
        } => {
            let a: SubgroupOfQStar = subgroup.parse()?;
            let x = match dual {
                Some(s) => DualElement::new(&group, parse_rationals(&s)?)?,
                None => DualElement::one(&group),
            };
            let mean = frobenian_mean_empirical(&group, &a, &x, qmax)?;
            print_json(&mean)?;
        }
        Command::Fit {
            series,
            stat,
            floor,
            csv,
        } => {
            let series = SummationSeries::load(&series)?;
            let fit = if stat == "mean_genus" {
                mean_genus_exponent_from(&series, floor)?
            } else {
                fit_exponent_from(&series, stat.parse::<Statistic>()?, floor)?
            };
            if csv {
                let stat = if stat == "mean_genus" {
                    None
                } else {
                    Some(stat.parse::<Statistic>()?)
                };
                let mut w = csv::Writer::from_writer(io::stdout().lock());
                w.write_record(["bound", "value", "fitted"])?;
                for c in series
                    .checkpoints
                    .iter()
                    .filter(|c| c.bound >= fit.min_bound)
                {
                    let value = match stat {
                        Some(s) => s.value(c).map(|v| v as f64),
                        None => (c.count > 0).then(|| c.genus_sum as f64 / c.count as f64),
                    };
                    let Some(value) = value else { continue };
                    let l = (c.bound as f64).ln() + fit.shift;
                    let fitted = match stat {
                        Some(_) => fit.constant * c.bound as f64 * l.powf(fit.exponent - 1.0),
                        None => fit.constant * l.powf(fit.exponent),
                    };
                    w.serialize((c.bound, value, fitted))?;
                }
                w.flush()?;
            } else {
                print_json(&fit)?;
            }
        }
        Command::Density {
            series,
            genus,
            max_omega,
            csv,
        } => {
            let series = SummationSeries::load(&series)?;
            let report = zero_density_report(&series, genus, max_omega);
            if csv {
                let mut w = csv::Writer::from_writer(io::stdout().lock());
                let mut header = vec![
                    "bound".to_string(),
                    "count".into(),
                    "genus_proportion".into(),
                ];
                header.extend((0..=max_omega).map(|r| format!("omega_le_{r}")));
                w.write_record(&header)?;
                for row in &report.rows {
                    let mut rec = vec![
                        row.bound.to_string(),
                        row.count.to_string(),
                        row.genus_proportion.to_string(),
                    ];
                    rec.extend(row.omega_at_most.iter().map(f64::to_string));
                    w.write_record(&rec)?;
                }
                w.flush()?;
            } else {
                print_json(&report)?;
            }
        }
        Command::Predict {
            group,
            qmax,
            conditions,
            series,
            csv,
        } => {
            let conditions = load_conditions(conditions.as_ref())?;
            let prediction = predict_leading_constant(&group, &conditions, qmax)?;
            let ratios = match series {
                Some(path) => Some(constant_ratios(&SummationSeries::load(&path)?, &prediction)),
                None => None,
            };
            if csv {
                let Some(ratios) = ratios else {
                    bail!("--csv needs --series to tabulate");
                };
                let mut w = csv::Writer::from_writer(io::stdout().lock());
                w.write_record(["bound", "empirical", "ratio"])?;
                for r in &ratios {
                    w.serialize((r.bound, r.empirical, r.ratio))?;
                }
                w.flush()?;
            } else {
                #[derive(Serialize)]
                struct Out<'a, P: Serialize, R: Serialize> {
                    #[serde(flatten)]
                    prediction: &'a P,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    ratios: Option<R>,
                }
                print_json(&Out {
                    prediction: &prediction,
                    ratios,
                })?;
            }
        }
        Command::Oracle { dmax } => {
            if dmax < 3 {
                bail!("--dmax must be at least 3");
            }
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(["D", "h", "genus_forms", "genus_furuta", "match"])?;
            let mut mismatches = 0usize;
            for d in (-dmax..0).rev().filter(|&d| is_fundamental_discriminant(d)) {
                let h = class_number(d)?;
                let forms = genus_number_forms(d)?;
                let furuta = genus_number(&ResidueCharacter::quadratic(d)?)?;
                mismatches += usize::from(forms != furuta);
                w.serialize((d, h, forms, furuta, forms == furuta))?;
            }
            w.flush()?;
            if mismatches > 0 {
                bail!("{mismatches} mismatches");
            }
        }
    }
    Ok(())
}

fn load_conditions(path: Option<&PathBuf>) -> Result<LocalConditionSet> {
    Ok(match path {
        Some(p) => {
            LocalConditionSet::from_file(p).with_context(|| format!("reading {}", p.display()))?
        }
        None => LocalConditionSet::new(),
    })
}

fn parse_rationals(s: &str) -> Result<Vec<Ratio<i64>>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<Ratio<i64>>()
                .with_context(|| format!("bad rational {t:?}"))
        })
        .collect()
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
