//! Characters of `(Z/mZ)^*` with values in a finite abelian group.
//!
//! Over `Q` a `G`-extension is a surjection `(Z/mZ)^* -> G`, and by the Chinese
//! remainder theorem it is a tuple of local characters on `(Z/p^a)^*`. Values
//! are only ever compared with the identity or collected into image subgroups,
//! so the Artin-map normalization (arithmetic or geometric Frobenius, inversion
//! on units) is left unfixed: every downstream test is invariant under it.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::arith::{
    factorize, gcd, inv_mod, is_prime, isqrt, mul_mod, multiplicative_order, pow_mod, reduce_signed,
};
use crate::error::{Error, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};

/// Moduli up to this size get a full discrete-log lookup table.
pub const DLOG_TABLE_LIMIT: u64 = 1 << 16;
const MAX_MODULUS: u64 = 1 << 63;

/// A presentation of `(Z/p^a)^*` as a product of cyclic groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalUnitStructure {
    p: u64,
    a: u32,
    modulus: u64,
    /// `(generator mod p^a, cyclic order)`.
    generators: Vec<(u64, u64)>,
}

/// Builds the standard presentation of `(Z/p^a)^*`: a primitive root for odd
/// `p`, `{-1}` for `4`, `{-1, 5}` for `2^a` with `a >= 3`.
pub fn unit_group_structure(p: u64, a: u32) -> Result<LocalUnitStructure> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a == 0 {
        return Ok(LocalUnitStructure {
            p,
            a,
            modulus: 1,
            generators: Vec::new(),
        });
    }
    let modulus = p
        .checked_pow(a)
        .filter(|&m| m <= MAX_MODULUS)
        .ok_or(Error::ModulusTooLarge((p as u128).saturating_pow(a)))?;
    let generators = if p == 2 {
        match a {
            1 => Vec::new(),
            2 => vec![(3, 2)],
            _ => vec![(modulus - 1, 2), (5, 1 << (a - 2))],
        }
    } else {
        let phi = modulus / p * (p - 1);
        let mut phi_factors = factorize(p - 1);
        if a > 1 {
            phi_factors.push((p, a - 1));
        }
        let g = (2..modulus)
            .find(|&g| g % p != 0 && multiplicative_order(g, modulus, phi, &phi_factors) == phi)
            .expect("(Z/p^a)^* is cyclic for odd p");
        vec![(g, phi)]
    };
    Ok(LocalUnitStructure {
        p,
        a,
        modulus,
        generators,
    })
}

type DlogTable = Arc<Vec<u32>>;

fn dlog_tables() -> &'static RwLock<HashMap<u64, DlogTable>> {
    static TABLES: OnceLock<RwLock<HashMap<u64, DlogTable>>> = OnceLock::new();
    TABLES.get_or_init(Default::default)
}

impl LocalUnitStructure {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.a
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generators(&self) -> &[(u64, u64)] {
        &self.generators
    }

    /// `phi(p^a)`.
    pub fn order(&self) -> u64 {
        self.generators.iter().map(|&(_, n)| n).product()
    }

    fn table(&self) -> DlogTable {
        if let Some(t) = dlog_tables().read().unwrap().get(&self.modulus) {
            return t.clone();
        }
        let m = self.modulus as usize;
        let mut table = vec![u32::MAX; m.max(1)];
        // Walk all exponent tuples in mixed radix, generator 0 least significant.
        let total = self.order() as usize;
        let mut exps = vec![0u64; self.generators.len()];
        let inverses: Vec<u64> = self
            .generators
            .iter()
            .map(|&(g, n)| inv_mod(pow_mod(g, n - 1, self.modulus), self.modulus).unwrap())
            .collect();
        let mut value = 1 % self.modulus;
        for idx in 0..total {
            table[value as usize] = idx as u32;
            for (i, &(g, n)) in self.generators.iter().enumerate() {
                exps[i] += 1;
                if exps[i] < n {
                    value = mul_mod(value, g, self.modulus);
                    break;
                }
                exps[i] = 0;
                value = mul_mod(value, inverses[i], self.modulus);
            }
        }
        if m <= 1 {
            table[0] = 0;
        }
        let table = Arc::new(table);
        dlog_tables()
            .write()
            .unwrap()
            .insert(self.modulus, table.clone());
        table
    }

    /// Exponents `(e_i)` with `prod g_i^{e_i} = u mod p^a`.
    pub fn discrete_log(&self, u: i64) -> Result<Vec<u64>> {
        let m = self.modulus;
        let r = reduce_signed(u, m.max(1));
        if m > 1 && r.is_multiple_of(self.p) {
            return Err(Error::NotAUnit { n: u, modulus: m });
        }
        if self.generators.is_empty() {
            return Ok(Vec::new());
        }
        if m <= DLOG_TABLE_LIMIT {
            let mut idx = self.table()[r as usize] as u64;
            return Ok(self
                .generators
                .iter()
                .map(|&(_, n)| {
                    let e = idx % n;
                    idx /= n;
                    e
                })
                .collect());
        }
        if self.p == 2 {
            // u = (-1)^s 5^k with s read off mod 4.
            let (s, v) = if r % 4 == 3 { (1, m - r) } else { (0, r) };
            let n = self.generators[1].1;
            let k = cyclic_dlog(5, v, n, &[(2, self.a - 2)], m);
            Ok(vec![s, k])
        } else {
            let (g, n) = self.generators[0];
            let mut factors = factorize(self.p - 1);
            if self.a > 1 {
                factors.push((self.p, self.a - 1));
            }
            Ok(vec![cyclic_dlog(g, r, n, &factors, m)])
        }
    }

    /// Generator of `U_j = {u = 1 mod p^j}` for `0 < j < a`, or `None` when
    /// `U_j` is the whole group.
    fn higher_unit_generator(&self, j: u32) -> Option<u64> {
        if self.p == 2 && j == 1 {
            return None;
        }
        Some(1 + self.p.pow(j))
    }
}

/// Pohlig-Hellman in the cyclic group `<g>` of order `n` modulo `m`.
fn cyclic_dlog(g: u64, h: u64, n: u64, n_factors: &[(u64, u32)], m: u64) -> u64 {
    let mut residues = Vec::with_capacity(n_factors.len());
    for &(q, k) in n_factors {
        let qk = q.pow(k);
        let cofactor = n / qk;
        let g1 = pow_mod(g, cofactor, m);
        let h1 = pow_mod(h, cofactor, m);
        // gamma has order q; digits of the log in base q.
        let gamma = pow_mod(g1, qk / q, m);
        let g1_inv = inv_mod(g1, m).expect("generator is a unit");
        let mut x = 0u64;
        let mut qi = 1u64;
        for _ in 0..k {
            let shifted = mul_mod(h1, pow_mod(g1_inv, x, m), m);
            let hk = pow_mod(shifted, qk / qi / q, m);
            let d = baby_giant(gamma, hk, q, m);
            x += d * qi;
            qi *= q;
        }
        residues.push((x, qk));
    }
    // Combine by CRT.
    let mut x = 0u128;
    let mut modulus = 1u128;
    for (r, qk) in residues {
        let inv = inv_mod((modulus % qk as u128) as u64, qk).unwrap_or(0) as u128;
        let t = ((r as u128 + qk as u128 - (x % qk as u128)) % qk as u128) * inv % qk as u128;
        x += modulus * t;
        modulus *= qk as u128;
    }
    (x % n as u128) as u64
}

/// Solves `gamma^d = h` with `gamma` of order `q`.
fn baby_giant(gamma: u64, h: u64, q: u64, m: u64) -> u64 {
    if q <= 64 {
        let mut cur = 1 % m;
        for d in 0..q {
            if cur == h {
                return d;
            }
            cur = mul_mod(cur, gamma, m);
        }
        panic!("discrete log does not exist in subgroup of order {q}");
    }
    let step = isqrt(q) + 1;
    let mut baby = HashMap::with_capacity(step as usize);
    let mut cur = 1 % m;
    for j in 0..step {
        baby.entry(cur).or_insert(j);
        cur = mul_mod(cur, gamma, m);
    }
    let giant = inv_mod(pow_mod(gamma, step, m), m).expect("unit");
    let mut y = h;
    for i in 0..step {
        if let Some(&j) = baby.get(&y) {
            return (i * step + j) % q;
        }
        y = mul_mod(y, giant, m);
    }
    panic!("discrete log does not exist in subgroup of order {q}");
}

/// A homomorphism `(Z/p^a)^* -> G`, given by the images of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocalCharacter {
    structure: LocalUnitStructure,
    group: FiniteAbelianGroup,
    images: Vec<GroupElement>,
}

impl LocalCharacter {
    pub fn new(
        structure: LocalUnitStructure,
        group: &FiniteAbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self> {
        if images.len() != structure.generators.len() {
            return Err(Error::ElementLength {
                expected: structure.generators.len(),
                got: images.len(),
            });
        }
        for (img, &(_, n)) in images.iter().zip(&structure.generators) {
            group.check(img)?;
            if !group.is_identity(&group.scale(img, n)) {
                return Err(Error::NotASubgroup);
            }
        }
        Ok(Self {
            structure,
            group: group.clone(),
            images,
        })
    }

    pub fn trivial(p: u64, group: &FiniteAbelianGroup) -> Result<Self> {
        Self::new(unit_group_structure(p, 0)?, group, Vec::new())
    }

    pub fn structure(&self) -> &LocalUnitStructure {
        &self.structure
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn prime(&self) -> u64 {
        self.structure.p
    }

    pub fn level(&self) -> u32 {
        self.structure.a
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|g| self.group.is_identity(g))
    }

    /// `chi(u mod p^a)`.
    pub fn evaluate(&self, u: i64) -> Result<GroupElement> {
        let exps = self.structure.discrete_log(u)?;
        let mut acc = self.group.identity();
        for (img, e) in self.images.iter().zip(exps) {
            acc = self.group.add(&acc, &self.group.scale(img, e));
        }
        Ok(acc)
    }

    /// Smallest `c` with `chi` trivial on `U_c = {u = 1 mod p^c}`.
    pub fn conductor_exponent(&self) -> u32 {
        if self.is_trivial() {
            return 0;
        }
        for j in 1..self.structure.a {
            if let Some(u) = self.structure.higher_unit_generator(j) {
                let v = self.evaluate(u as i64).expect("1 + p^j is a unit");
                if self.group.is_identity(&v) {
                    return j;
                }
            }
        }
        self.structure.a
    }

    /// `e_p = |chi((Z/p^a)^*)|`.
    pub fn ramification_index(&self) -> u64 {
        self.group
            .subgroup(self.images.clone())
            .expect("images are group elements")
            .order()
    }

    /// The same character viewed on `(Z/p^c)^*`; requires `c >= conductor_exponent`.
    pub fn at_level(&self, c: u32) -> Result<Self> {
        if c < self.conductor_exponent() {
            return Err(Error::InvalidCondition(format!(
                "level {c} is below the conductor exponent"
            )));
        }
        let structure = unit_group_structure(self.structure.p, c)?;
        let modulus = self.structure.modulus;
        let images = structure
            .generators
            .iter()
            .map(|&(g, _)| self.evaluate((g % modulus.max(1)) as i64))
            .collect::<Result<Vec<_>>>()?;
        Self::new(structure, &self.group, images)
    }

    /// The character at its conductor level.
    pub fn primitive(&self) -> Self {
        self.at_level(self.conductor_exponent())
            .expect("conductor level is admissible")
    }

    pub fn value_at_minus_one(&self) -> GroupElement {
        if self.structure.modulus <= 2 {
            return self.group.identity();
        }
        self.evaluate(-1).expect("-1 is a unit")
    }
}

impl fmt::Display for LocalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{} -> [", self.structure.p, self.structure.a)?;
        for (i, ((g, _), img)) in self
            .structure
            .generators
            .iter()
            .zip(&self.images)
            .enumerate()
        {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}:{img}")?;
        }
        write!(f, "]")
    }
}

/// A primitive character `(Z/mZ)^* -> G`; `m` is its conductor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueCharacter {
    group: FiniteAbelianGroup,
    components: BTreeMap<u64, LocalCharacter>,
}

impl ResidueCharacter {
    /// Assembles local components, reducing each to its conductor level and
    /// dropping trivial ones.
    pub fn new(group: &FiniteAbelianGroup, components: Vec<LocalCharacter>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for chi in components {
            if chi.group != *group {
                return Err(Error::NotASubgroup);
            }
            let p = chi.prime();
            let prim = chi.primitive();
            if prim.level() == 0 {
                continue;
            }
            if map.insert(p, prim).is_some() {
                return Err(Error::InvalidCondition(format!("two components at {p}")));
            }
        }
        Ok(Self {
            group: group.clone(),
            components: map,
        })
    }

    pub fn trivial(group: &FiniteAbelianGroup) -> Self {
        Self {
            group: group.clone(),
            components: BTreeMap::new(),
        }
    }

    /// The Kronecker character of a fundamental discriminant, with values in `Z/2`.
    pub fn quadratic(d: i64) -> Result<Self> {
        if !crate::arith::is_fundamental_discriminant(d) {
            return Err(Error::InvalidDiscriminant(d));
        }
        let z2 = FiniteAbelianGroup::cyclic(2);
        let one = GroupElement::new(vec![1]);
        let zero = GroupElement::new(vec![0]);
        let mut comps = Vec::new();
        // d = d_2 * prod p* with p* = (-1)^((p-1)/2) p.
        let mut d2 = d;
        for (p, _) in factorize(d.unsigned_abs()) {
            if p == 2 {
                continue;
            }
            let p_star = if p % 4 == 1 { p as i64 } else { -(p as i64) };
            d2 /= p_star;
            comps.push(LocalCharacter::new(
                unit_group_structure(p, 1)?,
                &z2,
                vec![one.clone()],
            )?);
        }
        match d2 {
            1 => {}
            -4 => comps.push(LocalCharacter::new(
                unit_group_structure(2, 2)?,
                &z2,
                vec![one.clone()],
            )?),
            8 => comps.push(LocalCharacter::new(
                unit_group_structure(2, 3)?,
                &z2,
                vec![zero, one.clone()],
            )?),
            -8 => comps.push(LocalCharacter::new(
                unit_group_structure(2, 3)?,
                &z2,
                vec![one.clone(), one],
            )?),
            _ => return Err(Error::InvalidDiscriminant(d)),
        }
        Self::new(&z2, comps)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn components(&self) -> impl Iterator<Item = &LocalCharacter> {
        self.components.values()
    }

    pub fn component(&self, p: u64) -> Option<&LocalCharacter> {
        self.components.get(&p)
    }

    /// The conductor `m = prod p^{c_p}`.
    pub fn conductor(&self) -> u64 {
        self.components
            .values()
            .map(|c| c.structure.modulus)
            .product()
    }

    /// `sum_p chi_p(n mod p^{a_p})`.
    pub fn evaluate(&self, n: i64) -> Result<GroupElement> {
        let m = self.conductor();
        if m > 1 && gcd(reduce_signed(n, m), m) != 1 {
            return Err(Error::NotAUnit { n, modulus: m });
        }
        let mut acc = self.group.identity();
        for chi in self.components.values() {
            acc = self.group.add(&acc, &chi.evaluate(n)?);
        }
        Ok(acc)
    }

    /// `e_infinity`: 2 when `psi(-1)` is nontrivial (complex field), else 1.
    pub fn infinite_ramification(&self) -> u8 {
        let v = self.evaluate(-1).expect("-1 is a unit");
        if self.group.is_identity(&v) {
            1
        } else {
            2
        }
    }

    /// Whether `-1` is a local norm at every finite prime. The real place needs
    /// no separate test: the local values at `-1` sum to `psi(-1)`, so if every
    /// finite value vanishes then `psi(-1) = 0` and the field is real.
    pub fn unit_is_everywhere_local_norm(&self) -> bool {
        self.components
            .values()
            .all(|chi| self.group.is_identity(&chi.value_at_minus_one()))
    }

    /// `(p, e_p)` for every ramified prime.
    pub fn ramification_indices(&self) -> Vec<(u64, u64)> {
        self.components
            .values()
            .map(|c| (c.prime(), c.ramification_index()))
            .collect()
    }

    /// Whether the local images generate `G`.
    pub fn is_surjective(&self) -> bool {
        let gens: Vec<GroupElement> = self
            .components
            .values()
            .flat_map(|c| c.images.iter().cloned())
            .collect();
        self.group.generates(&gens).expect("images lie in G")
    }

    /// Parses the `"m: p^a -> [gen:img,...]; ..."` serialization.
    pub fn parse(s: &str, group: &FiniteAbelianGroup) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 1,
            message: format!("{msg}: {s:?}"),
        };
        let (m_str, rest) = s.split_once(':').ok_or_else(|| bad("missing conductor"))?;
        let m: u64 = m_str.trim().parse().map_err(|_| bad("bad conductor"))?;
        let mut comps = Vec::new();
        for part in rest.split(';').map(str::trim).filter(|t| !t.is_empty()) {
            let (pa, imgs) = part.split_once("->").ok_or_else(|| bad("missing '->'"))?;
            let (p, a) = pa
                .trim()
                .split_once('^')
                .ok_or_else(|| bad("missing '^'"))?;
            let p: u64 = p.trim().parse().map_err(|_| bad("bad prime"))?;
            let a: u32 = a.trim().parse().map_err(|_| bad("bad level"))?;
            let structure = unit_group_structure(p, a)?;
            let body = imgs
                .trim()
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| bad("missing brackets"))?;
            let mut by_gen = HashMap::new();
            // Entries look like "g:(x,y)"; split on the closing parenthesis.
            for entry in body.split_inclusive(')') {
                let entry = entry.trim().trim_start_matches(',').trim();
                if entry.is_empty() {
                    continue;
                }
                let (g, img) = entry
                    .split_once(':')
                    .ok_or_else(|| bad("bad image entry"))?;
                let g: u64 = g.trim().parse().map_err(|_| bad("bad generator"))?;
                by_gen.insert(g, img.trim().parse::<GroupElement>()?);
            }
            let images = structure
                .generators
                .iter()
                .map(|(g, _)| by_gen.remove(g).ok_or_else(|| bad("generator mismatch")))
                .collect::<Result<Vec<_>>>()?;
            if !by_gen.is_empty() {
                return Err(bad("unknown generator"));
            }
            comps.push(LocalCharacter::new(structure, group, images)?);
        }
        let psi = Self::new(group, comps)?;
        if psi.conductor() != m {
            return Err(bad("conductor does not match the components"));
        }
        Ok(psi)
    }
}

impl fmt::Display for ResidueCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.conductor())?;
        for (i, chi) in self.components.values().enumerate() {
            write!(f, "{} {chi}", if i > 0 { ";" } else { "" })?;
        }
        Ok(())
    }
}
