//! Table-driven view of a small group for the enumeration hot path.
//!
//! Elements are the mixed-radix indices of [`FiniteAbelianGroup`]; every
//! subgroup gets a dense id, and joining two subgroups (or a subgroup and a
//! cyclic subgroup) is a single table lookup.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::FiniteAbelianGroup;

pub const MAX_TABLE_ORDER: u64 = 256;
pub const MAX_SUBGROUPS: usize = 4096;

type Bits = Vec<u64>;

#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    group: FiniteAbelianGroup,
    n: usize,
    add: Vec<u16>,
    orders: Vec<u32>,
    subgroups: Vec<Bits>,
    sizes: Vec<u32>,
    cyclic: Vec<u32>,
    join: Vec<u32>,
    trivial: u32,
    full: u32,
}

fn words(n: usize) -> usize {
    n.div_ceil(64)
}

fn set(bits: &mut Bits, i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn has(bits: &Bits, i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

impl SubgroupLattice {
    pub fn new(group: &FiniteAbelianGroup) -> Result<Self> {
        let order = group.order();
        if order > MAX_TABLE_ORDER {
            return Err(Error::GroupTooLarge {
                order,
                limit: MAX_TABLE_ORDER,
                what: "table-driven enumeration",
            });
        }
        let n = order as usize;
        let elems: Vec<_> = group.elements().collect();
        let mut add = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                add[i * n + j] = group.index_of(&group.add(&elems[i], &elems[j])) as u16;
            }
        }
        let orders = elems
            .iter()
            .map(|g| group.order_unchecked(g) as u32)
            .collect();
        let mut lattice = Self {
            group: group.clone(),
            n,
            add,
            orders,
            subgroups: Vec::new(),
            sizes: Vec::new(),
            cyclic: vec![0; n],
            join: Vec::new(),
            trivial: 0,
            full: 0,
        };
        lattice.build()?;
        Ok(lattice)
    }

    fn closure_with(&self, base: &Bits, g: usize) -> Bits {
        let mut out = base.clone();
        let members: Vec<usize> = (0..self.n).filter(|&i| has(base, i)).collect();
        // Cosets H + k g until k g falls back into H.
        let mut shift = g;
        while !has(base, shift) {
            for &h in &members {
                set(&mut out, self.add[h * self.n + shift] as usize);
            }
            shift = self.add[shift * self.n + g] as usize;
        }
        out
    }

    fn build(&mut self) -> Result<()> {
        let w = words(self.n);
        let mut trivial = vec![0u64; w];
        set(&mut trivial, 0);
        let mut index: HashMap<Bits, u32> = HashMap::new();
        self.subgroups.push(trivial.clone());
        index.insert(trivial, 0);
        // Every subgroup is reachable by adjoining one element at a time.
        let mut frontier = 0;
        let mut extend: Vec<Vec<u32>> = Vec::new();
        while frontier < self.subgroups.len() {
            let base = self.subgroups[frontier].clone();
            let mut row = vec![0u32; self.n];
            for (g, slot) in row.iter_mut().enumerate() {
                let bits = if has(&base, g) {
                    base.clone()
                } else {
                    self.closure_with(&base, g)
                };
                let id = match index.get(&bits) {
                    Some(&id) => id,
                    None => {
                        let id = self.subgroups.len() as u32;
                        if self.subgroups.len() >= MAX_SUBGROUPS {
                            return Err(Error::GroupTooLarge {
                                order: self.n as u64,
                                limit: MAX_SUBGROUPS as u64,
                                what: "subgroup lattice size",
                            });
                        }
                        self.subgroups.push(bits.clone());
                        index.insert(bits, id);
                        id
                    }
                };
                *slot = id;
            }
            extend.push(row);
            frontier += 1;
        }
        let count = self.subgroups.len();
        self.sizes = self
            .subgroups
            .iter()
            .map(|b| b.iter().map(|w| w.count_ones()).sum())
            .collect();
        self.cyclic = extend[0].clone();
        self.trivial = 0;
        self.full = self
            .sizes
            .iter()
            .position(|&s| s as usize == self.n)
            .expect("the whole group is a subgroup") as u32;
        // join(a, b): adjoin the generators of b one by one to a.
        let gens: Vec<Vec<usize>> = (0..count)
            .map(|b| self.generators_of(&self.subgroups[b], &extend))
            .collect();
        self.join = vec![0; count * count];
        for a in 0..count {
            for b in 0..count {
                let mut cur = a as u32;
                for &g in &gens[b] {
                    cur = extend[cur as usize][g];
                }
                self.join[a * count + b] = cur;
            }
        }
        Ok(())
    }

    fn generators_of(&self, bits: &Bits, extend: &[Vec<u32>]) -> Vec<usize> {
        let mut cur = 0u32;
        let mut gens = Vec::new();
        for g in 0..self.n {
            if has(bits, g) && !has(&self.subgroups[cur as usize], g) {
                gens.push(g);
                cur = extend[cur as usize][g];
            }
        }
        gens
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn scale(&self, a: u16, k: u64) -> u16 {
        let ord = self.orders[a as usize] as u64;
        let mut r = k % ord;
        let mut acc = 0u16;
        let mut base = a;
        while r > 0 {
            if r & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            r >>= 1;
        }
        acc
    }

    #[inline]
    pub fn element_order(&self, a: u16) -> u32 {
        self.orders[a as usize]
    }

    #[inline]
    pub fn cyclic(&self, a: u16) -> u32 {
        self.cyclic[a as usize]
    }

    #[inline]
    pub fn join(&self, a: u32, b: u32) -> u32 {
        self.join[a as usize * self.subgroups.len() + b as usize]
    }

    #[inline]
    pub fn size(&self, s: u32) -> u32 {
        self.sizes[s as usize]
    }

    #[inline]
    pub fn contains(&self, s: u32, a: u16) -> bool {
        has(&self.subgroups[s as usize], a as usize)
    }

    pub fn trivial(&self) -> u32 {
        self.trivial
    }

    pub fn full(&self) -> u32 {
        self.full
    }

    /// Ids of all subgroups, in discovery order (trivial first).
    pub fn subgroup_ids(&self) -> impl Iterator<Item = u32> {
        0..self.subgroups.len() as u32
    }

    pub fn members(&self, s: u32) -> impl Iterator<Item = u16> + '_ {
        (0..self.n as u16).filter(move |&i| self.contains(s, i))
    }

    /// `|H[d]|` for the subgroup `s`.
    pub fn torsion_in(&self, s: u32, d: u64) -> u64 {
        self.members(s)
            .filter(|&a| d.is_multiple_of(self.orders[a as usize] as u64))
            .count() as u64
    }

    /// Isomorphism type of the quotient `G / s`.
    pub fn quotient(&self, s: u32) -> FiniteAbelianGroup {
        let h = self.size(s) as u64;
        FiniteAbelianGroup::from_torsion(self.n as u64 / h, |d| {
            let hits = (0..self.n as u16)
                .filter(|&a| self.contains(s, self.scale(a, d)))
                .count() as u64;
            hits / h
        })
    }

    /// Möbius function `mu(G/s)` by recursion over the subgroup lattice:
    /// `mu(s, s) = 1`, `mu(s, t) = -sum_{s <= u < t} mu(s, u)`.
    pub fn moebius_by_recursion(&self, s: u32) -> i64 {
        let count = self.subgroups.len();
        let contains_sub = |outer: usize, inner: usize| {
            self.subgroups[inner]
                .iter()
                .zip(&self.subgroups[outer])
                .all(|(i, o)| i & !o == 0)
        };
        let mut order: Vec<usize> = (0..count)
            .filter(|&u| contains_sub(u, s as usize))
            .collect();
        order.sort_by_key(|&u| self.sizes[u]);
        let mut mu: HashMap<usize, i64> = HashMap::new();
        for &t in &order {
            let value = if t == s as usize {
                1
            } else {
                -order
                    .iter()
                    .filter(|&&u| u != t && self.sizes[u] < self.sizes[t] && contains_sub(t, u))
                    .map(|u| mu[u])
                    .sum::<i64>()
            };
            mu.insert(t, value);
        }
        mu[&(self.full as usize)]
    }
}
