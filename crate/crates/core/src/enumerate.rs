//! Enumeration of `G`-extensions of `Q` by conductor.
//!
//! Moduli are factored by a segmented sieve. For each `m` the primitive local
//! characters at every `p^a || m` are looked up in precomputed tables, and the
//! product of those lists is walked depth first, keeping the join of the local
//! images in the subgroup lattice; a leaf is a surjection exactly when that
//! join is all of `G`. Segments are independent and their accumulators merge
//! in a fixed order, so the result does not depend on the thread count.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::arith::{factorize, gcd, isqrt, primes_up_to};
use crate::characters::{unit_group_structure, LocalCharacter, LocalUnitStructure};
use crate::error::{Error, Result};
use crate::genus::{genus_pair, ExtensionRecord};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::lattice::SubgroupLattice;

pub const DEFAULT_MAX_BOUND: u64 = 100_000_000;
pub const DEFAULT_SEGMENT: u64 = 1 << 16;
const MAX_DISTINCT_PRIMES: usize = 15;

// ---------------------------------------------------------------------------
// Local conditions

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalCondition {
    Any,
    Unramified,
    /// The local character is trivial (the place splits completely).
    Split,
    RamificationIndex(u64),
    /// The restriction to local units must be one of these (primitive) characters.
    Characters(Vec<LocalCharacter>),
    /// `-1` must be a local norm.
    NormMinusOne,
}

impl fmt::Display for LocalCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Any => write!(f, "any"),
            Self::Unramified => write!(f, "unramified"),
            Self::Split => write!(f, "split"),
            Self::RamificationIndex(e) => write!(f, "e={e}"),
            Self::Characters(list) => {
                write!(f, "chars ")?;
                for (i, c) in list.iter().enumerate() {
                    write!(f, "{}{c}", if i > 0 { " | " } else { "" })?;
                }
                Ok(())
            }
            Self::NormMinusOne => write!(f, "norm -1"),
        }
    }
}

/// Conditions at finitely many places; every other place is unconstrained.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LocalConditionSet {
    conditions: BTreeMap<Place, LocalCondition>,
}

impl LocalConditionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, place: Place, condition: LocalCondition) -> Result<Self> {
        self.insert(place, condition)?;
        Ok(self)
    }

    pub fn insert(&mut self, place: Place, condition: LocalCondition) -> Result<()> {
        if let Place::Finite(p) = place {
            if !crate::arith::is_prime(p) {
                return Err(Error::InvalidCondition(format!("{p} is not prime")));
            }
            if let LocalCondition::Characters(list) = &condition {
                if list.iter().any(|c| c.prime() != p) {
                    return Err(Error::InvalidCondition(format!(
                        "character list at {p} contains characters at another prime"
                    )));
                }
            }
        } else if matches!(
            condition,
            LocalCondition::Characters(_) | LocalCondition::RamificationIndex(3..)
        ) {
            return Err(Error::InvalidCondition(format!(
                "condition '{condition}' is not available at the real place"
            )));
        }
        if let LocalCondition::RamificationIndex(0) = condition {
            return Err(Error::InvalidCondition("e=0".into()));
        }
        if self.conditions.insert(place, condition).is_some() {
            return Err(Error::InvalidCondition(format!(
                "two conditions at {place}"
            )));
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.values().all(|c| *c == LocalCondition::Any)
    }

    pub fn get(&self, place: Place) -> &LocalCondition {
        self.conditions.get(&place).unwrap_or(&LocalCondition::Any)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, &LocalCondition)> {
        self.conditions.iter()
    }

    /// Finite primes carrying a non-trivial condition.
    pub fn finite_primes(&self) -> Vec<u64> {
        self.conditions
            .iter()
            .filter(|(_, c)| **c != LocalCondition::Any)
            .filter_map(|(p, _)| match p {
                Place::Finite(p) => Some(*p),
                Place::Infinite => None,
            })
            .collect()
    }

    /// Whether the real place must stay unramified.
    pub fn real_split(&self) -> bool {
        matches!(
            self.get(Place::Infinite),
            LocalCondition::Split
                | LocalCondition::Unramified
                | LocalCondition::NormMinusOne
                | LocalCondition::RamificationIndex(1)
        )
    }

    /// Whether the real place must ramify.
    pub fn real_ramified(&self) -> bool {
        matches!(
            self.get(Place::Infinite),
            LocalCondition::RamificationIndex(2)
        )
    }

    pub fn to_lines(&self) -> Vec<String> {
        self.conditions
            .iter()
            .map(|(p, c)| format!("{p} {c}"))
            .collect()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }
}

impl FromStr for LocalConditionSet {
    type Err = Error;

    /// One condition per line: `p unramified`, `p split`, `p e=K`,
    /// `p norm -1`, `inf split`; `#` starts a comment.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = Self::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let place = match tokens[0] {
                "inf" | "infinity" | "oo" => Place::Infinite,
                t => Place::Finite(t.parse().map_err(|_| err(format!("bad place {t:?}")))?),
            };
            let condition = match &tokens[1..] {
                ["any"] => LocalCondition::Any,
                ["unramified"] => LocalCondition::Unramified,
                ["split"] => LocalCondition::Split,
                ["norm", "-1"] => LocalCondition::NormMinusOne,
                ["norm", "1"] => LocalCondition::Any,
                ["norm", eps] => {
                    return Err(err(format!(
                        "norm condition for {eps} is not supported; only the units 1 and -1 are"
                    )))
                }
                [t] if t.starts_with("e=") => LocalCondition::RamificationIndex(
                    t[2..]
                        .parse()
                        .map_err(|_| err(format!("bad ramification index {t:?}")))?,
                ),
                _ => return Err(err(format!("unrecognized condition {line:?}"))),
            };
            set.insert(place, condition)
                .map_err(|e| err(e.to_string()))?;
        }
        Ok(set)
    }
}

// ---------------------------------------------------------------------------
// Local character tables

/// One character `(Z/p^L)^* -> G`, annotated with its local invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalTableEntry {
    /// The character at its conductor level.
    pub character: LocalCharacter,
    pub conductor_exponent: u32,
    pub ramification_index: u64,
    pub value_at_minus_one: GroupElement,
}

/// All homomorphisms `(Z/p^L)^* -> G` for `L = max_level`, each reduced to
/// its conductor level.
pub fn local_character_table(
    p: u64,
    max_level: u32,
    group: &FiniteAbelianGroup,
) -> Result<Vec<LocalTableEntry>> {
    let structure = unit_group_structure(p, max_level)?;
    let candidates: Vec<Vec<GroupElement>> = structure
        .generators()
        .iter()
        .map(|&(_, n)| {
            group
                .elements()
                .filter(|h| group.is_identity(&group.scale(h, n)))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; candidates.len()];
    loop {
        let images: Vec<GroupElement> = idx
            .iter()
            .zip(&candidates)
            .map(|(&i, c)| c[i].clone())
            .collect();
        let chi = LocalCharacter::new(structure.clone(), group, images)?;
        let character = chi.primitive();
        out.push(LocalTableEntry {
            conductor_exponent: character.level(),
            ramification_index: character.ramification_index(),
            value_at_minus_one: character.value_at_minus_one(),
            character,
        });
        // Odometer over the candidate lists.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < candidates[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Highest conductor exponent a character `(Z/p^a)^* -> G` can have.
pub fn max_conductor_exponent(p: u64, group: &FiniteAbelianGroup) -> u32 {
    let e = group.exponent();
    let v = crate::arith::valuation(e, p);
    if p == 2 {
        if e % 2 == 1 {
            0
        } else {
            v + 2
        }
    } else if v > 0 {
        v + 1
    } else {
        u32::from(gcd(p - 1, e) > 1)
    }
}

/// `sum_{H <= G} mu(G/H) |Hom((Z/m)^*, H)|`: surjections `(Z/m)^* -> G` of any
/// conductor dividing `m`.
pub fn surjection_count_via_moebius(group: &FiniteAbelianGroup, m: u64) -> Result<u64> {
    let lattice = SubgroupLattice::new(group)?;
    let mut cyclic_orders = Vec::new();
    for (p, a) in factorize(m) {
        for &(_, n) in unit_group_structure(p, a)?.generators() {
            cyclic_orders.push(n);
        }
    }
    let mut total: i128 = 0;
    for s in lattice.subgroup_ids() {
        let mu = lattice.quotient(s).moebius();
        if mu == 0 {
            continue;
        }
        let homs: i128 = cyclic_orders
            .iter()
            .map(|&n| lattice.torsion_in(s, n) as i128)
            .product();
        total += mu as i128 * homs;
    }
    Ok(total as u64)
}

/// `|Hom((Z/m)^*, G)| = prod_p |Hom((Z/p^a)^*, G)|`.
pub fn hom_count(group: &FiniteAbelianGroup, m: u64) -> Result<u64> {
    let mut total = 1u64;
    for (p, a) in factorize(m) {
        for &(_, n) in unit_group_structure(p, a)?.generators() {
            total *= group.torsion_count(n);
        }
    }
    Ok(total)
}

#[derive(Debug, Clone)]
struct Entry {
    e: u32,
    image: u32,
    minus_one: u16,
    gens: SmallVec<[u16; 2]>,
}

/// Allowed entries at a conditioned prime, indexed by conductor exponent.
#[derive(Debug, Clone)]
struct ConditionedPrime {
    levels: Vec<Vec<Entry>>,
}

struct Tables {
    group: FiniteAbelianGroup,
    lattice: SubgroupLattice,
    exponent: u64,
    /// Tame level-1 entries, keyed by `(l - 1) mod 2e`.
    tame: Vec<Vec<Entry>>,
    /// Entries for primes dividing `2|G|`, indexed by level.
    wild: BTreeMap<u64, Vec<Vec<Entry>>>,
    conditioned: BTreeMap<u64, ConditionedPrime>,
    /// Conditioned primes that must divide the conductor.
    required: Vec<u64>,
    split_primes: Vec<u64>,
    real_split: bool,
    real_ramified: bool,
}

impl Tables {
    fn new(group: &FiniteAbelianGroup, conditions: &LocalConditionSet) -> Result<Self> {
        let lattice = SubgroupLattice::new(group)?;
        let exponent = group.exponent();
        let n = group.order() as u16;
        let two_e = 2 * exponent;
        let mut tame = Vec::with_capacity(two_e as usize);
        for r in 0..two_e {
            // l - 1 = r mod 2e: characters are h in G[l-1], value at -1 is ((l-1)/2) h.
            let d = gcd(r, exponent);
            let list = if r % 2 == 1 {
                Vec::new()
            } else {
                (1..n)
                    .filter(|&h| d % lattice.element_order(h) as u64 == 0)
                    .map(|h| Entry {
                        e: lattice.element_order(h),
                        image: lattice.cyclic(h),
                        minus_one: lattice.scale(h, r / 2),
                        gens: SmallVec::from_slice(&[h]),
                    })
                    .collect()
            };
            tame.push(list);
        }
        let mut wild = BTreeMap::new();
        let mut wild_primes: Vec<u64> = factorize(group.order())
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        if !wild_primes.contains(&2) {
            wild_primes.insert(0, 2);
        }
        let mut tables = Self {
            group: group.clone(),
            lattice,
            exponent,
            tame,
            wild: BTreeMap::new(),
            conditioned: BTreeMap::new(),
            required: Vec::new(),
            split_primes: Vec::new(),
            real_split: conditions.real_split(),
            real_ramified: conditions.real_ramified(),
        };
        for p in wild_primes {
            let max = max_conductor_exponent(p, group);
            let levels = tables.levels_from_table(p, max)?;
            wild.insert(p, levels);
        }
        tables.wild = wild;
        for (place, cond) in conditions.iter() {
            let Place::Finite(p) = *place else { continue };
            if *cond == LocalCondition::Any {
                continue;
            }
            let base = tables.all_levels(p);
            let allow_unramified = match cond {
                LocalCondition::RamificationIndex(k) => *k == 1,
                LocalCondition::Characters(list) => list.iter().any(|c| c.is_trivial()),
                _ => true,
            };
            let mut levels = Vec::with_capacity(base.len());
            for (a, list) in base.iter().enumerate() {
                let mut kept = Vec::new();
                for entry in list {
                    let keep = match cond {
                        LocalCondition::Any | LocalCondition::Unramified => {
                            matches!(cond, LocalCondition::Any)
                        }
                        LocalCondition::Split => false,
                        LocalCondition::RamificationIndex(k) => entry.e as u64 == *k,
                        LocalCondition::NormMinusOne => entry.minus_one == 0,
                        LocalCondition::Characters(list) => {
                            let chi = tables.entry_character(p, a as u32, entry)?;
                            list.iter().any(|c| c.primitive() == chi)
                        }
                    };
                    if keep {
                        kept.push(entry.clone());
                    }
                }
                levels.push(kept);
            }
            if !allow_unramified {
                tables.required.push(p);
            }
            if *cond == LocalCondition::Split {
                tables.split_primes.push(p);
            }
            tables.conditioned.insert(p, ConditionedPrime { levels });
        }
        Ok(tables)
    }

    fn levels_from_table(&self, p: u64, max: u32) -> Result<Vec<Vec<Entry>>> {
        let mut levels = vec![Vec::new(); max as usize + 1];
        if max == 0 {
            return Ok(levels);
        }
        for row in local_character_table(p, max, &self.group)? {
            let c = row.conductor_exponent as usize;
            if c == 0 {
                continue;
            }
            let gens: SmallVec<[u16; 2]> = row
                .character
                .images()
                .iter()
                .map(|g| self.group.index_of(g) as u16)
                .collect();
            let image = gens.iter().fold(self.lattice.trivial(), |s, &g| {
                self.lattice.join(s, self.lattice.cyclic(g))
            });
            levels[c].push(Entry {
                e: row.ramification_index as u32,
                image,
                minus_one: self.group.index_of(&row.value_at_minus_one) as u16,
                gens,
            });
        }
        Ok(levels)
    }

    /// Unfiltered entries at every level for `p`.
    fn all_levels(&self, p: u64) -> Vec<Vec<Entry>> {
        if let Some(levels) = self.wild.get(&p) {
            return levels.clone();
        }
        vec![
            Vec::new(),
            self.tame[((p - 1) % (2 * self.exponent)) as usize].clone(),
        ]
    }

    fn entry_character(&self, p: u64, a: u32, entry: &Entry) -> Result<LocalCharacter> {
        let images = entry
            .gens
            .iter()
            .map(|&g| self.group.element_at(g as u64))
            .collect();
        LocalCharacter::new(unit_group_structure(p, a)?, &self.group, images)
    }

    /// Primitive entries of conductor exactly `p^a`, or `None` when there are none.
    #[inline]
    fn entries(&self, p: u64, a: u32) -> Option<&[Entry]> {
        let list: &[Entry] = if let Some(c) = self.conditioned.get(&p) {
            c.levels.get(a as usize)?
        } else if let Some(levels) = self.wild.get(&p) {
            levels.get(a as usize)?
        } else if a == 1 {
            &self.tame[((p - 1) % (2 * self.exponent)) as usize]
        } else {
            return None;
        };
        (!list.is_empty()).then_some(list)
    }
}

// ---------------------------------------------------------------------------
// Series

/// Cumulative statistics over all extensions with conductor at most `bound`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub bound: u64,
    /// Surjections `(Z/m)^* -> G` with `m <= bound`.
    pub count: u64,
    /// Fields: `count / |Aut(G)|`, when `|Aut(G)|` is known.
    pub field_count: Option<u64>,
    /// `sum e_inf * prod_p e_p`.
    pub prod_e_sum: u64,
    pub genus_sum: u64,
    pub narrow_genus_sum: u64,
    /// Extensions with `e_inf = 1`.
    pub real_count: u64,
    /// Genus number -> count.
    pub genus_histogram: BTreeMap<u64, u64>,
    /// Index `k`: extensions with exactly `k` ramified finite primes.
    pub omega_histogram: Vec<u64>,
    /// Extensions ramified at each tracked prime, parallel to `tracked_primes`.
    pub ramified_counts: Vec<u64>,
}

impl Checkpoint {
    fn absorb(&mut self, other: &Checkpoint) {
        self.count += other.count;
        self.prod_e_sum += other.prod_e_sum;
        self.genus_sum += other.genus_sum;
        self.narrow_genus_sum += other.narrow_genus_sum;
        self.real_count += other.real_count;
        for (&g, &c) in &other.genus_histogram {
            *self.genus_histogram.entry(g).or_default() += c;
        }
        if self.omega_histogram.len() < other.omega_histogram.len() {
            self.omega_histogram.resize(other.omega_histogram.len(), 0);
        }
        for (a, b) in self.omega_histogram.iter_mut().zip(&other.omega_histogram) {
            *a += b;
        }
        if self.ramified_counts.len() < other.ramified_counts.len() {
            self.ramified_counts.resize(other.ramified_counts.len(), 0);
        }
        for (a, b) in self.ramified_counts.iter_mut().zip(&other.ramified_counts) {
            *a += b;
        }
    }

    /// Proportion of extensions with genus number `g`.
    pub fn genus_proportion(&self, g: u64) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        *self.genus_histogram.get(&g).unwrap_or(&0) as f64 / self.count as f64
    }

    /// Proportion of extensions with at most `r` ramified finite primes.
    pub fn omega_at_most_proportion(&self, r: usize) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let hits: u64 = self.omega_histogram.iter().take(r + 1).sum();
        hits as f64 / self.count as f64
    }
}

/// The column of a series used for fitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Count,
    FieldCount,
    ProdESum,
    GenusSum,
    NarrowGenusSum,
}

impl Statistic {
    pub fn value(self, c: &Checkpoint) -> Option<u64> {
        match self {
            Self::Count => Some(c.count),
            Self::FieldCount => c.field_count,
            Self::ProdESum => Some(c.prod_e_sum),
            Self::GenusSum => Some(c.genus_sum),
            Self::NarrowGenusSum => Some(c.narrow_genus_sum),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "count" => Self::Count,
            "field_count" => Self::FieldCount,
            "prod_e_sum" => Self::ProdESum,
            "genus_sum" => Self::GenusSum,
            "narrow_genus_sum" => Self::NarrowGenusSum,
            _ => return Err(Error::InvalidCondition(format!("unknown statistic {s:?}"))),
        })
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Count => "count",
            Self::FieldCount => "field_count",
            Self::ProdESum => "prod_e_sum",
            Self::GenusSum => "genus_sum",
            Self::NarrowGenusSum => "narrow_genus_sum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummationSeries {
    pub group: FiniteAbelianGroup,
    pub bound: u64,
    /// Every modulus up to here has been processed.
    pub completed_bound: u64,
    pub automorphisms: Option<u64>,
    pub conditions: Vec<String>,
    pub tracked_primes: Vec<u64>,
    pub checkpoints: Vec<Checkpoint>,
}

impl SummationSeries {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// `(B_i, value)` pairs for a statistic.
    pub fn column(&self, stat: Statistic) -> Vec<(u64, u64)> {
        self.checkpoints
            .iter()
            .filter_map(|c| stat.value(c).map(|v| (c.bound, v)))
            .collect()
    }

    pub fn checkpoint_at(&self, bound: u64) -> Option<&Checkpoint> {
        self.checkpoints.iter().find(|c| c.bound == bound)
    }

    /// Position of `p` in the tracked primes.
    pub fn tracked_index(&self, p: u64) -> Option<usize> {
        self.tracked_primes.iter().position(|&q| q == p)
    }
}

// ---------------------------------------------------------------------------
// Configuration and sieve cache

#[derive(Debug, Clone)]
pub struct EnumerationConfig {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub max_bound: u64,
    pub segment_size: u64,
    pub deadline: Option<Duration>,
    /// Abort once this many extensions have been found.
    pub max_extensions: Option<u64>,
    pub tracked_primes: Vec<u64>,
    pub sieve_cache: Option<PathBuf>,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self {
            threads: None,
            max_bound: DEFAULT_MAX_BOUND,
            segment_size: DEFAULT_SEGMENT,
            deadline: None,
            max_extensions: None,
            tracked_primes: primes_up_to(50),
            sieve_cache: None,
        }
    }
}

const CACHE_MAGIC: &[u8; 8] = b"GLSIEVE\0";
pub const CACHE_VERSION: u32 = 1;

/// Primes up to `limit`, read from a versioned cache file when one covers the
/// limit; otherwise sieved and written back.
pub fn cached_primes(path: Option<&Path>, limit: u64) -> Result<Vec<u64>> {
    let Some(path) = path else {
        return Ok(primes_up_to(limit));
    };
    if let Some(primes) = read_cache(path, limit) {
        return Ok(primes);
    }
    let primes = primes_up_to(limit);
    let mut buf = Vec::with_capacity(28 + 8 * primes.len());
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&limit.to_le_bytes());
    buf.extend_from_slice(&(primes.len() as u64).to_le_bytes());
    for p in &primes {
        buf.extend_from_slice(&p.to_le_bytes());
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&buf))
        .map_err(|e| Error::Cache(format!("writing {}: {e}", path.display())))?;
    Ok(primes)
}

fn read_cache(path: &Path, limit: u64) -> Option<Vec<u64>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .ok()?
        .read_to_end(&mut bytes)
        .ok()?;
    let header = bytes.get(..28)?;
    if &header[..8] != CACHE_MAGIC {
        return None;
    }
    let version = u32::from_le_bytes(header[8..12].try_into().ok()?);
    let cached_limit = u64::from_le_bytes(header[12..20].try_into().ok()?);
    let count = u64::from_le_bytes(header[20..28].try_into().ok()?) as usize;
    if version != CACHE_VERSION || cached_limit < limit || bytes.len() != 28 + 8 * count {
        return None;
    }
    Some(
        bytes[28..]
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .take_while(|&p| p <= limit)
            .collect(),
    )
}

/// Geometric checkpoints `B 2^{-k}` down to about 10, increasing.
pub fn default_checkpoints(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut b = bound;
    while b >= 10 {
        out.push(b);
        b /= 2;
    }
    if out.is_empty() {
        out.push(bound);
    }
    out.reverse();
    out
}

/// Decade checkpoints `10^k <= bound`, plus `bound` itself.
pub fn decade_checkpoints(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut b = 10u64;
    while b < bound {
        out.push(b);
        b *= 10;
    }
    out.push(bound);
    out
}

/// Quarter-decade geometric checkpoints `round(10^{k/4})` from 100 up to `bound`.
pub fn quarter_decade_checkpoints(bound: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (8..)
        .map(|k| 10f64.powf(k as f64 / 4.0).round() as u64)
        .take_while(|&b| b < bound)
        .collect();
    out.push(bound);
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Enumeration

/// A callback receiving every extension, in increasing order of conductor.
pub type RecordSink<'a> = &'a mut dyn FnMut(&ExtensionRecord) -> Result<()>;

pub fn enumerate(
    group: &FiniteAbelianGroup,
    bound: u64,
    conditions: &LocalConditionSet,
    checkpoints: &[u64],
) -> Result<SummationSeries> {
    enumerate_with(
        group,
        bound,
        conditions,
        checkpoints,
        &EnumerationConfig::default(),
        None,
    )
}

struct Component<'t> {
    p: u64,
    entries: &'t [Entry],
    /// Discrete logs of the split primes modulo `p^a`.
    split_logs: SmallVec<[SmallVec<[u64; 2]>; 2]>,
}

struct Segment {
    stats: Vec<Checkpoint>,
    records: Vec<ExtensionRecord>,
    found: u64,
}

struct Walker<'t> {
    tables: &'t Tables,
    full: u32,
    order: u64,
    tracked: &'t [u64],
    want_records: bool,
    structures: HashMap<(u64, u32), LocalUnitStructure>,
}

struct Leaf<'a> {
    m: u64,
    prod_e: u64,
    minus_one: u16,
    all_local_norms: bool,
    chosen: &'a [(u64, u32)],
}

impl<'t> Walker<'t> {
    fn structure(&mut self, p: u64, a: u32) -> &LocalUnitStructure {
        self.structures
            .entry((p, a))
            .or_insert_with(|| unit_group_structure(p, a).expect("p is prime"))
    }

    /// Components of `m` from its factorization, or `None` if some prime power
    /// admits no primitive character.
    fn components(
        &mut self,
        m: u64,
        factors: &[(u64, u8)],
    ) -> Option<SmallVec<[Component<'t>; 8]>> {
        let tables = self.tables;
        for &p in &tables.required {
            if !m.is_multiple_of(p) {
                return None;
            }
        }
        for &q in &tables.split_primes {
            if m.is_multiple_of(q) {
                return None;
            }
        }
        let mut comps = SmallVec::new();
        for &(p, a) in factors {
            let entries = tables.entries(p, a as u32)?;
            let split_logs = tables
                .split_primes
                .iter()
                .map(|&q| {
                    self.structure(p, a as u32)
                        .discrete_log(q as i64)
                        .expect("split prime is coprime to m")
                        .into_iter()
                        .collect()
                })
                .collect();
            comps.push(Component {
                p,
                entries,
                split_logs,
            });
        }
        Some(comps)
    }

    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        comps: &[Component<'_>],
        depth: usize,
        image: u32,
        prod_e: u64,
        minus_one: u16,
        all_local_norms: bool,
        split_sums: &mut SmallVec<[u16; 2]>,
        chosen: &mut Vec<(u64, u32)>,
        m: u64,
        out: &mut Vec<LeafData>,
    ) {
        if depth == comps.len() {
            if image != self.full || split_sums.iter().any(|&s| s != 0) {
                return;
            }
            let leaf = Leaf {
                m,
                prod_e,
                minus_one,
                all_local_norms,
                chosen,
            };
            if let Some(d) = self.leaf(&leaf) {
                out.push(d);
            }
            return;
        }
        let lat = &self.tables.lattice;
        let comp = &comps[depth];
        for entry in comp.entries {
            let saved: SmallVec<[u16; 2]> = split_sums.clone();
            for (s, logs) in split_sums.iter_mut().zip(&comp.split_logs) {
                for (&g, &k) in entry.gens.iter().zip(logs) {
                    *s = lat.add(*s, lat.scale(g, k));
                }
            }
            chosen.push((comp.p, entry.e));
            self.walk(
                comps,
                depth + 1,
                lat.join(image, entry.image),
                prod_e * entry.e as u64,
                lat.add(minus_one, entry.minus_one),
                all_local_norms && entry.minus_one == 0,
                split_sums,
                chosen,
                m,
                out,
            );
            chosen.pop();
            *split_sums = saved;
        }
    }

    fn leaf(&self, leaf: &Leaf<'_>) -> Option<LeafData> {
        let e_infty: u8 = if leaf.minus_one == 0 { 1 } else { 2 };
        if (self.tables.real_split && e_infty == 2) || (self.tables.real_ramified && e_infty == 1) {
            return None;
        }
        let iota: u8 = if leaf.all_local_norms { 1 } else { 2 };
        let (genus, narrow) = match genus_pair(self.order, e_infty, leaf.prod_e, iota) {
            Ok(v) => v,
            Err(e) => panic!("conductor {}: {e}", leaf.m),
        };
        Some(LeafData {
            e_infty,
            iota,
            prod_e: leaf.prod_e,
            genus,
            narrow,
            ramification: if self.want_records {
                leaf.chosen.iter().map(|&(p, e)| (p, e as u64)).collect()
            } else {
                SmallVec::new()
            },
        })
    }

    fn account(&self, stats: &mut Checkpoint, factors: &[(u64, u8)], d: &LeafData) {
        let omega = factors.len();
        stats.count += 1;
        stats.prod_e_sum += d.e_infty as u64 * d.prod_e;
        stats.genus_sum += d.genus;
        stats.narrow_genus_sum += d.narrow;
        if d.e_infty == 1 {
            stats.real_count += 1;
        }
        *stats.genus_histogram.entry(d.genus).or_default() += 1;
        if stats.omega_histogram.len() <= omega {
            stats.omega_histogram.resize(omega + 1, 0);
        }
        stats.omega_histogram[omega] += 1;
        if stats.ramified_counts.len() < self.tracked.len() {
            stats.ramified_counts.resize(self.tracked.len(), 0);
        }
        for &(p, _) in factors {
            if let Ok(i) = self.tracked.binary_search(&p) {
                stats.ramified_counts[i] += 1;
            }
        }
    }
}

struct LeafData {
    e_infty: u8,
    iota: u8,
    prod_e: u64,
    genus: u64,
    narrow: u64,
    ramification: SmallVec<[(u64, u64); 8]>,
}

type Factorization = [(u64, u8); MAX_DISTINCT_PRIMES];

/// Factorizations of `lo..hi`, with prime powers that admit no primitive
/// character rejected during the sieve.
fn sieve_segment(
    tables: &Tables,
    primes: &[u64],
    lo: u64,
    hi: u64,
) -> (Vec<bool>, Vec<Factorization>, Vec<u8>) {
    let len = (hi - lo) as usize;
    let mut alive: Vec<bool> = (lo..hi).map(|n| n >= 2).collect();
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut facs = vec![[(0u64, 0u8); MAX_DISTINCT_PRIMES]; len];
    let mut nf = vec![0u8; len];
    let admissible = |p: u64, a: u32| tables.entries(p, a).is_some();
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let start = lo.div_ceil(p) * p;
        let mut n = start;
        while n < hi {
            let i = (n - lo) as usize;
            if alive[i] {
                let mut a = 0u32;
                while rem[i].is_multiple_of(p) {
                    rem[i] /= p;
                    a += 1;
                }
                if admissible(p, a) {
                    facs[i][nf[i] as usize] = (p, a as u8);
                    nf[i] += 1;
                } else {
                    alive[i] = false;
                }
            }
            n += p;
        }
    }
    for i in 0..len {
        if alive[i] && rem[i] > 1 {
            let q = rem[i];
            if admissible(q, 1) {
                facs[i][nf[i] as usize] = (q, 1);
                nf[i] += 1;
            } else {
                alive[i] = false;
            }
        }
    }
    // Factors were found in increasing order except the leftover prime, which is largest.
    (alive, facs, nf)
}

fn process_segment(
    walker: &mut Walker<'_>,
    primes: &[u64],
    lo: u64,
    hi: u64,
    buckets: &[u64],
) -> Segment {
    let tables = walker.tables;
    let (alive, facs, nf) = sieve_segment(tables, primes, lo, hi);
    let mut stats = vec![Checkpoint::default(); buckets.len()];
    let mut records = Vec::new();
    let mut found = 0;
    let mut bucket = buckets.partition_point(|&b| b < lo);
    let mut leaves = Vec::new();
    let mut chosen = Vec::new();
    for m in lo.max(2)..hi {
        let i = (m - lo) as usize;
        if !alive[i] {
            continue;
        }
        while buckets[bucket] < m {
            bucket += 1;
        }
        let factors = &facs[i][..nf[i] as usize];
        let Some(comps) = walker.components(m, factors) else {
            continue;
        };
        leaves.clear();
        let mut split_sums: SmallVec<[u16; 2]> = SmallVec::from_elem(0, tables.split_primes.len());
        walker.walk(
            &comps,
            0,
            tables.lattice.trivial(),
            1,
            0,
            true,
            &mut split_sums,
            &mut chosen,
            m,
            &mut leaves,
        );
        for d in &leaves {
            walker.account(&mut stats[bucket], factors, d);
            found += 1;
            if walker.want_records {
                records.push(ExtensionRecord {
                    conductor: m,
                    group: tables.group.clone(),
                    surjective: true,
                    e_infty: d.e_infty,
                    ramification: d.ramification.to_vec(),
                    iota: d.iota,
                    genus: d.genus,
                    narrow_genus: d.narrow,
                });
            }
        }
    }
    Segment {
        stats,
        records,
        found,
    }
}

/// Full enumeration with explicit configuration and an optional record sink.
pub fn enumerate_with(
    group: &FiniteAbelianGroup,
    bound: u64,
    conditions: &LocalConditionSet,
    checkpoints: &[u64],
    config: &EnumerationConfig,
    mut sink: Option<RecordSink<'_>>,
) -> Result<SummationSeries> {
    if group.is_trivial() {
        return Err(Error::TrivialGroup);
    }
    if bound > config.max_bound {
        return Err(Error::BoundTooLarge {
            bound,
            max: config.max_bound,
        });
    }
    let tables = Tables::new(group, conditions)?;
    let mut buckets: Vec<u64> = checkpoints
        .iter()
        .copied()
        .filter(|&b| b <= bound)
        .collect();
    buckets.push(bound);
    buckets.sort_unstable();
    buckets.dedup();
    let mut tracked = config.tracked_primes.clone();
    tracked.sort_unstable();
    tracked.dedup();
    let primes = cached_primes(config.sieve_cache.as_deref(), isqrt(bound) + 1)?;
    let automorphisms = group.automorphism_count().ok();
    let started = Instant::now();

    let segment = config.segment_size.max(1024);
    let ranges: Vec<(u64, u64)> = (0..=bound / segment)
        .map(|k| (k * segment, ((k + 1) * segment).min(bound + 1)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    let pool = match config.threads {
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::CheckFailed(format!("thread pool: {e}")))?,
        ),
        None => None,
    };
    let workers = pool
        .as_ref()
        .map_or_else(rayon::current_num_threads, |p| p.current_num_threads());
    let batch = (4 * workers).max(1);
    let want_records = sink.is_some();
    let new_walker = || Walker {
        tables: &tables,
        full: tables.lattice.full(),
        order: group.order(),
        tracked: &tracked,
        want_records,
        structures: HashMap::new(),
    };

    let mut totals = vec![Checkpoint::default(); buckets.len()];
    let mut completed = 0u64;
    let mut found = 0u64;
    let mut stop: Option<String> = None;
    for chunk in ranges.chunks(batch) {
        let run = || -> Vec<Segment> {
            chunk
                .par_iter()
                .map_init(new_walker, |w, &(lo, hi)| {
                    process_segment(w, &primes, lo, hi, &buckets)
                })
                .collect()
        };
        let results = match &pool {
            Some(p) if p.current_num_threads() > 1 => p.install(run),
            Some(_) => chunk
                .iter()
                .map(|&(lo, hi)| process_segment(&mut new_walker(), &primes, lo, hi, &buckets))
                .collect(),
            None => run(),
        };
        for seg in results {
            for (t, s) in totals.iter_mut().zip(&seg.stats) {
                t.absorb(s);
            }
            found += seg.found;
            if let Some(sink) = sink.as_mut() {
                for r in &seg.records {
                    sink(r)?;
                }
            }
        }
        completed = chunk.last().map_or(completed, |&(_, hi)| hi - 1);
        if completed >= bound {
            break;
        }
        if let Some(limit) = config.deadline {
            if started.elapsed() > limit {
                stop = Some(format!("deadline of {:.1}s", limit.as_secs_f64()));
                break;
            }
        }
        if let Some(cap) = config.max_extensions {
            if found > cap {
                stop = Some(format!("more than {cap} extensions"));
                break;
            }
        }
    }

    // Prefix sums turn per-bucket statistics into cumulative checkpoints.
    let mut running = Checkpoint {
        omega_histogram: Vec::new(),
        ramified_counts: vec![0; tracked.len()],
        ..Default::default()
    };
    let mut cps = Vec::new();
    for (b, s) in buckets.iter().zip(&totals) {
        running.absorb(s);
        if *b > completed {
            break;
        }
        let mut c = running.clone();
        c.bound = *b;
        c.field_count = automorphisms
            .filter(|a| c.count.is_multiple_of(*a))
            .map(|a| c.count / a);
        cps.push(c);
    }
    let series = SummationSeries {
        group: group.clone(),
        bound,
        completed_bound: completed.min(bound),
        automorphisms,
        conditions: conditions.to_lines(),
        tracked_primes: tracked,
        checkpoints: cps,
    };
    match stop {
        Some(reason) => Err(Error::ResourceLimit {
            reason,
            partial: Box::new(series),
        }),
        None => Ok(series),
    }
}

/// Counts characters `(Z/m)^* -> G` of conductor exactly `m`.
pub struct ConductorCounter {
    tables: Tables,
}

impl ConductorCounter {
    pub fn new(group: &FiniteAbelianGroup) -> Result<Self> {
        Ok(Self {
            tables: Tables::new(group, &LocalConditionSet::new())?,
        })
    }

    /// `(all characters, surjective characters)` of conductor exactly `m`.
    pub fn count(&self, m: u64) -> (u64, u64) {
        let lat = &self.tables.lattice;
        if m == 1 {
            return (1, u64::from(lat.order() == 1));
        }
        let mut total = 1u64;
        let mut frontier: HashMap<u32, u64> = HashMap::from([(lat.trivial(), 1)]);
        for (p, a) in factorize(m) {
            let Some(list) = self.tables.entries(p, a) else {
                return (0, 0);
            };
            total *= list.len() as u64;
            let mut next = HashMap::new();
            for (&s, &c) in &frontier {
                for entry in list {
                    *next.entry(lat.join(s, entry.image)).or_insert(0) += c;
                }
            }
            frontier = next;
        }
        (total, *frontier.get(&lat.full()).unwrap_or(&0))
    }
}

pub fn count_with_conductor(group: &FiniteAbelianGroup, m: u64) -> Result<(u64, u64)> {
    Ok(ConductorCounter::new(group)?.count(m))
}

/// Writes extension records as CSV.
pub struct CsvRecordWriter<W: Write> {
    inner: csv::Writer<W>,
}

impl<W: Write> CsvRecordWriter<W> {
    pub fn new(w: W) -> Result<Self> {
        let mut inner = csv::Writer::from_writer(w);
        inner
            .write_record(ExtensionRecord::CSV_HEADER)
            .map_err(|e| Error::Io(e.into()))?;
        Ok(Self { inner })
    }

    pub fn write(&mut self, r: &ExtensionRecord) -> Result<()> {
        self.inner
            .write_record(r.csv_fields())
            .map_err(|e| Error::Io(e.into()))
    }

    pub fn finish(mut self) -> Result<()> {
        self.inner.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn count(group: &str, bound: u64) -> u64 {
        let s = enumerate(&g(group), bound, &LocalConditionSet::new(), &[]).unwrap();
        s.checkpoints.last().unwrap().count
    }

    #[test]
    fn small_counts() {
        assert_eq!(count("2", 50), 30);
        assert_eq!(count("2", 3), 1);
        assert_eq!(count("3", 6), 0);
        assert_eq!(count("3", 7), 2);
    }

    #[test]
    fn quadratic_conductors_are_fundamental_discriminants() {
        let mut conductors = Vec::new();
        let mut sink = |r: &ExtensionRecord| {
            conductors.push((r.conductor, r.e_infty));
            Ok(())
        };
        enumerate_with(
            &g("2"),
            2000,
            &LocalConditionSet::new(),
            &[],
            &EnumerationConfig::default(),
            Some(&mut sink),
        )
        .unwrap();
        let mut expected: Vec<(u64, u8)> = (-2000i64..=2000)
            .filter(|&d| crate::arith::is_fundamental_discriminant(d))
            .map(|d| (d.unsigned_abs(), if d < 0 { 2 } else { 1 }))
            .collect();
        expected.sort_unstable();
        conductors.sort_unstable();
        assert_eq!(conductors, expected);
    }

    #[test]
    fn local_tables() {
        let t = local_character_table(5, 1, &g("2")).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.iter().filter(|r| r.conductor_exponent == 0).count(), 1);
        assert!(t
            .iter()
            .any(|r| r.conductor_exponent == 1 && r.ramification_index == 2));
        assert_eq!(local_character_table(3, 1, &g("5")).unwrap().len(), 1);
        let t = local_character_table(7, 1, &g("3")).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(
            t.iter()
                .filter(|r| r.conductor_exponent == 1 && r.ramification_index == 3)
                .count(),
            2
        );
    }

    #[test]
    fn tame_memo_matches_tables() {
        for group in ["2", "3", "4", "2,2", "6", "2,4", "3,3"] {
            let gr = g(group);
            let tables = Tables::new(&gr, &LocalConditionSet::new()).unwrap();
            for p in primes_up_to(200) {
                if tables.wild.contains_key(&p) {
                    continue;
                }
                let mut memo: Vec<(u32, GroupElement)> = tables
                    .entries(p, 1)
                    .unwrap_or(&[])
                    .iter()
                    .map(|e| (e.e, gr.element_at(e.minus_one as u64)))
                    .collect();
                let mut direct: Vec<(u32, GroupElement)> = local_character_table(p, 1, &gr)
                    .unwrap()
                    .into_iter()
                    .filter(|r| r.conductor_exponent == 1)
                    .map(|r| (r.ramification_index as u32, r.value_at_minus_one))
                    .collect();
                memo.sort();
                direct.sort();
                assert_eq!(memo, direct, "group {group}, p = {p}");
            }
        }
    }

    #[test]
    fn moebius_examples() {
        // (Z/8)^* is a Klein four group: four homomorphisms, three onto.
        assert_eq!(surjection_count_via_moebius(&g("2"), 8).unwrap(), 3);
        assert_eq!(surjection_count_via_moebius(&g("2"), 3).unwrap(), 1);
        assert_eq!(surjection_count_via_moebius(&g("2,2"), 24).unwrap(), 42);
    }

    #[test]
    fn moebius_matches_direct_counts() {
        for group in ["2", "3", "4", "2,2", "5", "6", "7", "8", "2,4", "2,2,2"] {
            let gr = g(group);
            let counter = ConductorCounter::new(&gr).unwrap();
            for m in 1..=300u64 {
                let direct: u64 = crate::arith::divisors(m)
                    .into_iter()
                    .map(|d| counter.count(d).1)
                    .sum();
                assert_eq!(
                    direct,
                    surjection_count_via_moebius(&gr, m).unwrap(),
                    "{group}, m={m}"
                );
            }
        }
    }

    #[test]
    fn characters_by_conductor_sum_to_hom_count() {
        for group in ["2", "3", "4", "2,2", "6"] {
            let gr = g(group);
            let counter = ConductorCounter::new(&gr).unwrap();
            for m in [1u64, 8, 9, 16, 24, 27, 63, 105, 240, 720, 1001, 5040] {
                let total: u64 = crate::arith::divisors(m)
                    .into_iter()
                    .map(|d| counter.count(d).0)
                    .sum();
                assert_eq!(total, hom_count(&gr, m).unwrap(), "{group}, m={m}");
            }
        }
    }

    #[test]
    fn conditions_parse_and_filter() {
        let set: LocalConditionSet = "3 unramified\n# c\n5 split\n7 e=2\n11 norm -1\ninf split\n"
            .parse()
            .unwrap();
        assert_eq!(set.finite_primes(), vec![3, 5, 7, 11]);
        assert!(set.real_split());
        assert!("4 split".parse::<LocalConditionSet>().is_err());
        assert!("3 norm 2".parse::<LocalConditionSet>().is_err());
        assert!("3 split\n3 unramified"
            .parse::<LocalConditionSet>()
            .is_err());
        assert!("3 bogus".parse::<LocalConditionSet>().is_err());

        let mut recs = Vec::new();
        let mut sink = |r: &ExtensionRecord| {
            recs.push(r.clone());
            Ok(())
        };
        enumerate_with(
            &g("2"),
            5000,
            &set,
            &[],
            &EnumerationConfig::default(),
            Some(&mut sink),
        )
        .unwrap();
        assert!(!recs.is_empty());
        for r in &recs {
            assert_ne!(r.conductor % 3, 0);
            assert_ne!(r.conductor % 5, 0);
            assert_eq!(r.conductor % 7, 0);
            assert_ne!(r.conductor % 11, 0);
            assert_eq!(r.e_infty, 1);
            let d = r.conductor as i64;
            // real quadratic field: discriminant is the conductor; 5 splits iff (d/5) = 1
            assert!([1, 4].contains(&(d % 5)), "5 should split in Q(sqrt {d})");
        }
    }

    #[test]
    fn sieve_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes.bin");
        let a = cached_primes(Some(&path), 1000).unwrap();
        let b = cached_primes(Some(&path), 500).unwrap();
        assert_eq!(b, primes_up_to(500));
        assert_eq!(a, primes_up_to(1000));
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[8] = 99;
        std::fs::write(&path, &bytes).unwrap();
        assert_eq!(cached_primes(Some(&path), 1000).unwrap(), a);
        assert_eq!(std::fs::read(&path).unwrap()[8], CACHE_VERSION as u8);
    }

    #[test]
    fn deadline_reports_partial_series() {
        let config = EnumerationConfig {
            deadline: Some(Duration::ZERO),
            threads: Some(1),
            segment_size: 1024,
            ..Default::default()
        };
        let err = enumerate_with(
            &g("2"),
            1_000_000,
            &LocalConditionSet::new(),
            &[1000, 10_000],
            &config,
            None,
        )
        .unwrap_err();
        match err {
            Error::ResourceLimit { partial, .. } => {
                assert!(partial.completed_bound < 1_000_000);
                assert!(partial
                    .checkpoints
                    .iter()
                    .all(|c| c.bound <= partial.completed_bound));
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn trivial_group_and_bound_errors() {
        assert!(matches!(
            enumerate(
                &FiniteAbelianGroup::trivial(),
                10,
                &LocalConditionSet::new(),
                &[]
            ),
            Err(Error::TrivialGroup)
        ));
        assert!(matches!(
            enumerate(
                &g("2"),
                DEFAULT_MAX_BOUND + 1,
                &LocalConditionSet::new(),
                &[]
            ),
            Err(Error::BoundTooLarge { .. })
        ));
    }

    #[test]
    fn checkpoint_helpers() {
        assert_eq!(default_checkpoints(100), vec![12, 25, 50, 100]);
        assert_eq!(decade_checkpoints(1000), vec![10, 100, 1000]);
        let q = quarter_decade_checkpoints(10_000);
        assert_eq!(q, vec![100, 178, 316, 562, 1000, 1778, 3162, 5623, 10000]);
    }
}
