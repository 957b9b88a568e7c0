//! Finite abelian groups in invariant-factor form.
//!
//! A group is stored as `d_1 | d_2 | ... | d_r` with every `d_i >= 2`; the
//! empty list is the trivial group. Elements are coordinate vectors with
//! `coords[i] in [0, d_i)`. Elements are also addressed by a mixed-radix index
//! (coordinate 0 least significant), which is how subgroups store their
//! element sets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, lcm, moebius};
use crate::error::{Error, Result};

/// Default cap on `|G|` for brute-force automorphism counting.
pub const AUT_BRUTE_FORCE_LIMIT: u64 = 10_000;
const AUT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FiniteAbelianGroup {
    invariants: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

impl GroupElement {
    pub fn new(coords: Vec<u64>) -> Self {
        Self { coords }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for GroupElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::GroupLiteral(s.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        inner
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::GroupLiteral(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl FiniteAbelianGroup {
    /// Builds the group `Z/n_1 x ... x Z/n_k` from arbitrary cyclic orders and
    /// normalizes it to invariant-factor form. Orders equal to 1 are dropped.
    pub fn new(cyclic_orders: &[u64]) -> Result<Self> {
        if cyclic_orders.contains(&0) {
            return Err(Error::GroupLiteral(format!("{cyclic_orders:?}")));
        }
        // Per prime, the exponents of the elementary divisors, largest first.
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &n in cyclic_orders {
            for (p, a) in factorize(n) {
                by_prime.entry(p).or_default().push(a);
            }
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut invariants = vec![1u64; rank];
        for (p, mut exps) in by_prime {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            for (i, a) in exps.into_iter().enumerate() {
                invariants[rank - 1 - i] *= p.pow(a);
            }
        }
        Ok(Self { invariants })
    }

    pub fn trivial() -> Self {
        Self {
            invariants: Vec::new(),
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(&[n]).expect("cyclic order must be positive")
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    /// Validates `g` as an element of this group.
    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.rank() {
            return Err(Error::ElementLength {
                expected: self.rank(),
                got: g.coords.len(),
            });
        }
        for (index, (&value, &modulus)) in g.coords.iter().zip(&self.invariants).enumerate() {
            if value >= modulus {
                return Err(Error::CoordinateOutOfRange {
                    index,
                    value,
                    modulus,
                });
            }
        }
        Ok(())
    }

    pub fn element(&self, coords: Vec<u64>) -> Result<GroupElement> {
        let g = GroupElement::new(coords);
        self.check(&g)?;
        Ok(g)
    }

    /// Reduces arbitrary integer coordinates into the group.
    pub fn element_reduced(&self, coords: &[i64]) -> GroupElement {
        GroupElement::new(
            coords
                .iter()
                .zip(&self.invariants)
                .map(|(&c, &d)| c.rem_euclid(d as i64) as u64)
                .collect(),
        )
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&b.coords)
                .zip(&self.invariants)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&self.invariants)
                .map(|(&x, &d)| (d - x) % d)
                .collect(),
        )
    }

    pub fn scale(&self, a: &GroupElement, k: u64) -> GroupElement {
        GroupElement::new(
            a.coords
                .iter()
                .zip(&self.invariants)
                .map(|(&x, &d)| ((x as u128 * k as u128) % d as u128) as u64)
                .collect(),
        )
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        a.coords.iter().all(|&c| c == 0)
    }

    /// Smallest `n >= 1` with `n * g = 0`.
    pub fn element_order(&self, g: &GroupElement) -> Result<u64> {
        self.check(g)?;
        Ok(self.order_unchecked(g))
    }

    pub(crate) fn order_unchecked(&self, g: &GroupElement) -> u64 {
        g.coords
            .iter()
            .zip(&self.invariants)
            .fold(1, |acc, (&c, &d)| lcm(acc, d / gcd(c, d)))
    }

    /// `|G[d]| = prod_i gcd(d, d_i)`.
    pub fn torsion_count(&self, d: u64) -> u64 {
        self.invariants.iter().map(|&di| gcd(d, di)).product()
    }

    /// Number of elements of order exactly `f`, by Möbius inversion of torsion counts.
    pub fn count_elements_of_order(&self, f: u64) -> u64 {
        if f == 0 || !self.exponent().is_multiple_of(f) {
            return 0;
        }
        let total: i64 = crate::arith::divisors(f)
            .into_iter()
            .map(|d| moebius(f / d) * self.torsion_count(d) as i64)
            .sum();
        total as u64
    }

    pub fn index_of(&self, g: &GroupElement) -> u64 {
        let mut idx = 0u64;
        let mut radix = 1u64;
        for (&c, &d) in g.coords.iter().zip(&self.invariants) {
            idx += c * radix;
            radix *= d;
        }
        idx
    }

    pub fn element_at(&self, mut idx: u64) -> GroupElement {
        let coords = self
            .invariants
            .iter()
            .map(|&d| {
                let c = idx % d;
                idx /= d;
                c
            })
            .collect();
        GroupElement::new(coords)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(|i| self.element_at(i))
    }

    /// Canonical generators: the unit vectors of the cyclic factors.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        (0..self.rank())
            .map(|i| {
                let mut c = vec![0; self.rank()];
                c[i] = 1;
                GroupElement::new(c)
            })
            .collect()
    }

    /// Closure of `elements` under addition, as a sorted list of element indices.
    pub(crate) fn closure_indices(&self, elements: &[GroupElement]) -> Vec<u64> {
        let n = self.order() as usize;
        let mut member = vec![false; n];
        member[0] = true;
        let mut current = vec![self.identity()];
        for g in elements {
            if member[self.index_of(g) as usize] {
                continue;
            }
            // H + <g> = union of cosets H + k g.
            let ord = self.order_unchecked(g);
            let mut shift = g.clone();
            let base = current.clone();
            for _ in 1..ord {
                if member[self.index_of(&shift) as usize] {
                    break;
                }
                for h in &base {
                    let s = self.add(h, &shift);
                    let i = self.index_of(&s) as usize;
                    if !member[i] {
                        member[i] = true;
                        current.push(s);
                    }
                }
                shift = self.add(&shift, g);
            }
        }
        member
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i as u64))
            .collect()
    }

    /// Whether `elements` generate the whole group.
    pub fn generates(&self, elements: &[GroupElement]) -> Result<bool> {
        for g in elements {
            self.check(g)?;
        }
        Ok(self.closure_indices(elements).len() as u64 == self.order())
    }

    pub fn subgroup(&self, generators: Vec<GroupElement>) -> Result<Subgroup> {
        for g in &generators {
            self.check(g).map_err(|_| Error::NotASubgroup)?;
        }
        Ok(Subgroup {
            ambient: self.clone(),
            generators,
            elements: OnceLock::new(),
        })
    }

    /// Rebuilds a group from its torsion counts `|Q[d]|`, given as a closure.
    pub(crate) fn from_torsion<F: Fn(u64) -> u64>(order: u64, torsion: F) -> Self {
        let mut cyclic = Vec::new();
        for (p, a) in factorize(order) {
            // t[j] = log_p |Q[p^j]|; factors of order >= p^j number t[j] - t[j-1].
            let mut t = vec![0u32];
            let mut pj = 1u64;
            for _ in 0..a {
                pj *= p;
                let c = torsion(pj);
                t.push(crate::arith::valuation(c, p));
            }
            let at_least: Vec<u32> = (1..t.len()).map(|j| t[j] - t[j - 1]).collect();
            for j in 0..at_least.len() {
                let next = at_least.get(j + 1).copied().unwrap_or(0);
                for _ in 0..(at_least[j] - next) {
                    cyclic.push(p.pow(j as u32 + 1));
                }
            }
        }
        Self::new(&cyclic).expect("torsion data yields positive orders")
    }

    /// Möbius function of this group on isomorphism classes of finite abelian
    /// groups: multiplicative over primes; a p-part contributes
    /// `(-1)^k p^(k(k-1)/2)` when elementary abelian of rank `k`, else 0.
    pub fn moebius(&self) -> i64 {
        let mut result = 1i64;
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &d in &self.invariants {
            for (p, a) in factorize(d) {
                by_prime.entry(p).or_default().push(a);
            }
        }
        for (p, exps) in by_prime {
            if exps.iter().any(|&a| a > 1) {
                return 0;
            }
            let k = exps.len() as u32;
            let sign = if k.is_multiple_of(2) { 1 } else { -1 };
            result *= sign * (p as i64).pow(k * (k - 1) / 2);
        }
        result
    }

    /// `mu(G/H)` for the subgroup `H`.
    pub fn moebius_quotient(&self, h: &Subgroup) -> Result<i64> {
        if h.ambient != *self {
            return Err(Error::NotASubgroup);
        }
        Ok(h.quotient().moebius())
    }

    /// Number of automorphisms, by brute force over images of the standard
    /// generators. The image of generator `i` must have order dividing `d_i`,
    /// and a tuple extends to an automorphism iff the images generate the group.
    pub fn automorphism_count(&self) -> Result<u64> {
        self.automorphism_count_with_limit(AUT_BRUTE_FORCE_LIMIT)
    }

    pub fn automorphism_count_with_limit(&self, limit: u64) -> Result<u64> {
        let order = self.order();
        if order > limit {
            return Err(Error::GroupTooLarge {
                order,
                limit,
                what: "brute-force automorphism count",
            });
        }
        let candidates: Vec<Vec<GroupElement>> = self
            .invariants
            .iter()
            .map(|&d| {
                self.elements()
                    .filter(|g| self.is_identity(&self.scale(g, d)))
                    .collect()
            })
            .collect();
        let mut budget = AUT_NODE_BUDGET;
        let mut chosen = Vec::with_capacity(self.rank());
        let count = self.aut_dfs(&candidates, &mut chosen, 1, &mut budget);
        count.ok_or(Error::GroupTooLarge {
            order,
            limit,
            what: "brute-force automorphism search budget",
        })
    }

    // The images of the first i generators must generate a subgroup of order
    // d_1...d_i, otherwise the full tuple cannot generate G.
    fn aut_dfs(
        &self,
        candidates: &[Vec<GroupElement>],
        chosen: &mut Vec<GroupElement>,
        prefix_order: u64,
        budget: &mut u64,
    ) -> Option<u64> {
        let i = chosen.len();
        if i == candidates.len() {
            return Some(1);
        }
        let target = prefix_order * self.invariants[i];
        let mut total = 0u64;
        for g in &candidates[i] {
            *budget = budget.checked_sub(1)?;
            chosen.push(g.clone());
            if self.closure_indices(chosen).len() as u64 == target {
                total += self.aut_dfs(candidates, chosen, target, budget)?;
            }
            chosen.pop();
        }
        Some(total)
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.invariants.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// Comma-separated cyclic orders, e.g. `"2,2"` or `"4"`; `"1"` is trivial.
    fn from_str(s: &str) -> Result<Self> {
        let orders = s
            .split(',')
            .map(|t| t.trim().parse::<u64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::GroupLiteral(s.to_string()))?;
        Self::new(&orders).map_err(|_| Error::GroupLiteral(s.to_string()))
    }
}

impl TryFrom<String> for FiniteAbelianGroup {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FiniteAbelianGroup> for String {
    fn from(g: FiniteAbelianGroup) -> String {
        g.to_string()
    }
}

/// A subgroup given by generators; its element set is computed on first use.
#[derive(Debug, Clone)]
pub struct Subgroup {
    ambient: FiniteAbelianGroup,
    generators: Vec<GroupElement>,
    elements: OnceLock<Vec<u64>>,
}

impl Subgroup {
    pub fn ambient(&self) -> &FiniteAbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    /// Sorted element indices in the ambient group.
    pub fn element_indices(&self) -> &[u64] {
        self.elements
            .get_or_init(|| self.ambient.closure_indices(&self.generators))
    }

    pub fn order(&self) -> u64 {
        self.element_indices().len() as u64
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.ambient.check(g).is_ok()
            && self
                .element_indices()
                .binary_search(&self.ambient.index_of(g))
                .is_ok()
    }

    /// `|H[d]|`, counted over the element set.
    pub fn torsion_count(&self, d: u64) -> u64 {
        self.element_indices()
            .iter()
            .filter(|&&i| {
                let g = self.ambient.element_at(i);
                self.ambient.is_identity(&self.ambient.scale(&g, d))
            })
            .count() as u64
    }

    /// Isomorphism type of `H` itself.
    pub fn structure(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::from_torsion(self.order(), |d| self.torsion_count(d))
    }

    /// Isomorphism type of `G/H`, from `|(G/H)[d]| = #{g : d g in H} / |H|`.
    pub fn quotient(&self) -> FiniteAbelianGroup {
        let g = &self.ambient;
        let h_order = self.order();
        let index = g.order() / h_order;
        let members = self.element_indices();
        FiniteAbelianGroup::from_torsion(index, |d| {
            let hits = g
                .elements()
                .filter(|x| members.binary_search(&g.index_of(&g.scale(x, d))).is_ok())
                .count() as u64;
            hits / h_order
        })
    }
}

/// All abelian groups of order at most `max_order`, one per isomorphism class,
/// sorted by order and then by invariant factors.
pub fn all_groups_up_to(max_order: u64) -> Vec<FiniteAbelianGroup> {
    fn partitions(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            partitions(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for n in 1..=max_order {
        // One partition of the exponent per prime power dividing n.
        let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
        for (p, a) in factorize(n) {
            let mut parts = Vec::new();
            partitions(a, a, &mut Vec::new(), &mut parts);
            combos = combos
                .iter()
                .flat_map(|c| {
                    parts.iter().map(move |part| {
                        let mut next = c.clone();
                        next.extend(part.iter().map(|&k| p.pow(k)));
                        next
                    })
                })
                .collect();
        }
        out.extend(
            combos
                .into_iter()
                .map(|c| FiniteAbelianGroup::new(&c).expect("positive orders")),
        );
    }
    out.sort_by_key(|g| (g.order(), g.invariant_factors().to_vec()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FiniteAbelianGroup {
        s.parse().unwrap()
    }

    fn el(v: &[u64]) -> GroupElement {
        GroupElement::new(v.to_vec())
    }

    #[test]
    fn normalization_to_invariant_factors() {
        assert_eq!(g("6,2").invariant_factors(), &[2, 6]);
        assert_eq!(g("2,3").invariant_factors(), &[6]);
        assert_eq!(g("4,6,9").invariant_factors(), &[6, 36]);
        assert_eq!(g("1").invariant_factors(), &[] as &[u64]);
        assert_eq!(g("1,1,2").to_string(), "2");
        assert!("0".parse::<FiniteAbelianGroup>().is_err());
        assert!("x".parse::<FiniteAbelianGroup>().is_err());
        assert_eq!(g("2,2").exponent(), 2);
        assert_eq!(FiniteAbelianGroup::trivial().exponent(), 1);
    }

    #[test]
    fn element_order_examples() {
        assert_eq!(g("2,2").element_order(&el(&[1, 1])).unwrap(), 2);
        assert_eq!(g("4").element_order(&el(&[2])).unwrap(), 2);
        assert_eq!(g("2,6").element_order(&el(&[1, 2])).unwrap(), 6);
    }

    #[test]
    fn element_order_errors() {
        assert!(matches!(
            g("2,2").element_order(&el(&[1])),
            Err(Error::ElementLength { .. })
        ));
        assert!(matches!(
            g("4").element_order(&el(&[4])),
            Err(Error::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn torsion_examples() {
        assert_eq!(g("2,2").torsion_count(2), 4);
        assert_eq!(g("4").torsion_count(2), 2);
        assert_eq!(g("2,6").torsion_count(3), 3);
    }

    #[test]
    fn order_counts_examples() {
        assert_eq!(g("2,2").count_elements_of_order(2), 3);
        assert_eq!(g("4").count_elements_of_order(4), 2);
        assert_eq!(g("2,6").count_elements_of_order(6), 6);
        assert_eq!(g("2,6").count_elements_of_order(5), 0);
    }

    #[test]
    fn generates_examples() {
        assert!(g("2,2").generates(&[el(&[1, 0]), el(&[0, 1])]).unwrap());
        assert!(!g("2,2").generates(&[el(&[1, 1])]).unwrap());
        assert!(g("4").generates(&[el(&[2]), el(&[3])]).unwrap());
        assert!(FiniteAbelianGroup::trivial().generates(&[]).unwrap());
    }

    #[test]
    fn moebius_examples() {
        let z2 = g("2");
        let trivial = z2.subgroup(vec![]).unwrap();
        assert_eq!(z2.moebius_quotient(&trivial).unwrap(), -1);
        let whole = z2.subgroup(z2.standard_generators()).unwrap();
        assert_eq!(z2.moebius_quotient(&whole).unwrap(), 1);
        let v4 = g("2,2");
        assert_eq!(
            v4.moebius_quotient(&v4.subgroup(vec![]).unwrap()).unwrap(),
            2
        );
        assert_eq!(g("4").moebius(), 0);
        assert_eq!(g("2,2,2").moebius(), -8);
        assert_eq!(g("6").moebius(), 1);
    }

    #[test]
    fn moebius_rejects_foreign_subgroup() {
        let h = g("4").subgroup(vec![]).unwrap();
        assert!(g("2").moebius_quotient(&h).is_err());
        assert!(g("2").subgroup(vec![el(&[3])]).is_err());
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(g("2").automorphism_count().unwrap(), 1);
        assert_eq!(g("2,2").automorphism_count().unwrap(), 6);
        assert_eq!(g("4").automorphism_count().unwrap(), 2);
        assert_eq!(
            FiniteAbelianGroup::trivial().automorphism_count().unwrap(),
            1
        );
        assert!(matches!(
            g("10007,3").automorphism_count(),
            Err(Error::GroupTooLarge { .. })
        ));
    }

    #[test]
    fn quotient_and_structure() {
        let z2z4 = g("2,4");
        let h = z2z4.subgroup(vec![el(&[0, 2])]).unwrap();
        assert_eq!(h.structure(), g("2"));
        assert_eq!(h.quotient(), g("2,2"));
        let k = z2z4.subgroup(vec![el(&[1, 2])]).unwrap();
        assert_eq!(k.quotient(), g("4"));
    }

    #[test]
    fn literal_round_trip() {
        for s in ["2", "2,2", "4", "2,6", "1"] {
            assert_eq!(g(s).to_string(), s);
        }
        let e: GroupElement = "(1,0)".parse().unwrap();
        assert_eq!(e, el(&[1, 0]));
        assert_eq!(e.to_string(), "(1,0)");
    }

    #[test]
    fn groups_up_to_eight() {
        let names: Vec<String> = all_groups_up_to(8).iter().map(|g| g.to_string()).collect();
        assert_eq!(
            names,
            vec!["1", "2", "3", "2,2", "4", "5", "6", "7", "2,2,2", "2,4", "8"]
        );
    }
}
