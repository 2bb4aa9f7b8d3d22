//! Brute-force ground truth.
//!
//! Materializes a small finite abelian group, closes its subgroup lattice by
//! joining cyclic subgroups to a fixpoint, and classifies every subgroup
//! from raw element arithmetic: nothing here reuses any counting identity,
//! which is what makes the equivalence tests meaningful.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::One;

use crate::arith::{small, Natural};
use crate::counting::GroupSpec;
use crate::enumerate::IsoType;
use crate::error::{Error, Result};

/// Order bound beyond which the oracle refuses to enumerate (overridable
/// per call).
pub const DEFAULT_ORACLE_BOUND: u64 = 2000;

/// Mixed-radix index of one group element.
pub type ElementIndex = u64;

/// The ambient group: moduli, strides for encode/decode, element count.
pub struct OracleGroup {
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
}

impl OracleGroup {
    pub fn new(g: &GroupSpec, bound: u64) -> Result<Self> {
        let moduli = g.moduli_u64()?;
        let mut order: u128 = 1;
        for &m in &moduli {
            order *= m as u128;
        }
        if order > bound as u128 {
            return Err(Error::OracleBound {
                order,
                bound: bound as u128,
            });
        }
        let mut strides = Vec::with_capacity(moduli.len());
        let mut acc = 1u64;
        for &m in &moduli {
            strides.push(acc);
            acc *= m;
        }
        Ok(OracleGroup {
            moduli,
            strides,
            order: order as u64,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn decode(&self, x: ElementIndex) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(&self.strides)
            .map(|(&m, &s)| x / s % m)
            .collect()
    }

    pub fn encode(&self, coords: &[u64]) -> ElementIndex {
        coords
            .iter()
            .zip(&self.strides)
            .zip(&self.moduli)
            .map(|((&c, &s), &m)| (c % m) * s)
            .sum()
    }

    pub fn add(&self, x: ElementIndex, y: ElementIndex) -> ElementIndex {
        let mut out = 0u64;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let cx = x / s % m;
            let cy = y / s % m;
            out += (cx + cy) % m * s;
        }
        out
    }

    /// Order of an element: lcm over coordinates of m_i / gcd(m_i, x_i).
    pub fn element_order(&self, x: ElementIndex) -> u64 {
        let mut ord = 1u64;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let c = x / s % m;
            ord = small::lcm(ord, m / small::gcd(m, c));
        }
        ord
    }
}

/// One subgroup as a membership bitset over the element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OracleSubgroup {
    bits: Vec<u64>,
    order: u64,
}

impl OracleSubgroup {
    fn empty(n: u64) -> Self {
        OracleSubgroup {
            bits: vec![0u64; (n as usize).div_ceil(64)],
            order: 0,
        }
    }

    fn insert(&mut self, x: ElementIndex) -> bool {
        let (w, b) = ((x / 64) as usize, x % 64);
        let fresh = self.bits[w] & (1 << b) == 0;
        if fresh {
            self.bits[w] |= 1 << b;
            self.order += 1;
        }
        fresh
    }

    pub fn contains(&self, x: ElementIndex) -> bool {
        self.bits[(x / 64) as usize] & (1 << (x % 64)) != 0
    }

    pub fn is_subset_of(&self, other: &OracleSubgroup) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Member indices, ascending.
    pub fn elements(&self) -> Vec<ElementIndex> {
        let mut out = Vec::with_capacity(self.order as usize);
        for (w, &word) in self.bits.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                out.push(w as u64 * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }
}

/// The cyclic subgroup generated by one element.
fn cyclic_closure(g: &OracleGroup, x: ElementIndex) -> OracleSubgroup {
    let mut sub = OracleSubgroup::empty(g.order());
    let mut cur = 0u64;
    loop {
        sub.insert(cur);
        cur = g.add(cur, x);
        if cur == 0 {
            break;
        }
    }
    sub
}

/// H + <gen>: the union of the cosets H + t.gen.
fn join_cyclic(g: &OracleGroup, h: &OracleSubgroup, gen: ElementIndex, gen_order: u64) -> OracleSubgroup {
    let mut out = h.clone();
    let mut shifted = h.elements();
    for _ in 1..gen_order {
        for e in shifted.iter_mut() {
            *e = g.add(*e, gen);
            out.insert(*e);
        }
    }
    out
}

/// Every subgroup, by breadth-first closure: seed with the trivial group,
/// repeatedly join with each cyclic subgroup until nothing new appears.
/// Output sorted by (order, membership bitset), so it is deterministic.
pub fn all_subgroups_bounded(g: &GroupSpec, bound: u64) -> Result<Vec<OracleSubgroup>> {
    let table = OracleGroup::new(g, bound)?;
    let n = table.order();

    // Canonical generators: one per distinct cyclic subgroup.
    let mut cyclic_seen: HashMap<Vec<u64>, ()> = HashMap::new();
    let mut seeds: Vec<(ElementIndex, u64)> = Vec::new();
    for x in 1..n {
        let c = cyclic_closure(&table, x);
        if cyclic_seen.insert(c.bits.clone(), ()).is_none() {
            seeds.push((x, table.element_order(x)));
        }
    }

    let trivial = cyclic_closure(&table, 0);
    let mut found: HashMap<Vec<u64>, ()> = HashMap::new();
    found.insert(trivial.bits.clone(), ());
    let mut queue = VecDeque::from([trivial.clone()]);
    let mut out = vec![trivial];
    while let Some(h) = queue.pop_front() {
        for &(gen, gen_order) in &seeds {
            if h.contains(gen) {
                continue;
            }
            let joined = join_cyclic(&table, &h, gen, gen_order);
            if found.insert(joined.bits.clone(), ()).is_none() {
                queue.push_back(joined.clone());
                out.push(joined);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// [`all_subgroups_bounded`] at the default bound.
pub fn all_subgroups(g: &GroupSpec) -> Result<Vec<OracleSubgroup>> {
    all_subgroups_bounded(g, DEFAULT_ORACLE_BOUND)
}

/// Isomorphism type recovered from annihilator counts alone: for each prime
/// p dividing |H|, a_j = #{x in H : p^j x = 0} determines the conjugate
/// type partition via lambda'_j = log_p(a_j / a_{j-1}).
pub fn isotype_of(g: &OracleGroup, h: &OracleSubgroup) -> Result<IsoType> {
    if h.order() == 1 {
        return Ok(IsoType::trivial());
    }
    let elements = h.elements();
    let mut parts: Vec<(Natural, Vec<u32>)> = Vec::new();
    for (p, _) in small::factor_u64(h.order()) {
        // residual moduli for the p^j annihilator test
        let mut conj: Vec<u32> = Vec::new();
        let mut prev = 1u64;
        loop {
            let j = conj.len() as u32 + 1;
            let pj = p.pow(j);
            let count = elements
                .iter()
                .filter(|&&x| {
                    g.moduli
                        .iter()
                        .zip(&g.strides)
                        .all(|(&m, &s)| (x / s % m) % (m / small::gcd(m, pj)) == 0)
                })
                .count() as u64;
            if count == prev {
                break;
            }
            if count % prev != 0 {
                return Err(Error::Internal(format!(
                    "annihilator counts {count}/{prev} not a power of {p}"
                )));
            }
            let ratio = count / prev;
            let mut log = 0u32;
            let mut acc = 1u64;
            while acc < ratio {
                acc *= p;
                log += 1;
            }
            if acc != ratio {
                return Err(Error::Internal(format!(
                    "annihilator ratio {ratio} is not a power of {p}"
                )));
            }
            conj.push(log);
            prev = count;
        }
        // conj is the conjugate partition lambda'; transpose it.
        let max = conj.first().copied().unwrap_or(0);
        let lambda: Vec<u32> = (1..=max)
            .map(|v| conj.iter().filter(|&&c| c >= v).count() as u32)
            .collect();
        parts.push((Natural::from(p), lambda));
    }
    Ok(IsoType::from_prime_partitions(parts))
}

/// Everything the equivalence tests compare, from one lattice pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleStats {
    pub total: u64,
    pub cyclic: u64,
    pub by_order: BTreeMap<u64, u64>,
    pub by_isotype: BTreeMap<IsoType, u64>,
    /// sigma_t for t = 0, 1, 2.
    pub sigma: [Natural; 3],
    pub maximal: u64,
    pub exponent_sum: Natural,
}

/// Single-pass statistics over the whole lattice.
pub fn oracle_stats_bounded(g: &GroupSpec, bound: u64) -> Result<OracleStats> {
    let table = OracleGroup::new(g, bound)?;
    let subs = all_subgroups_bounded(g, bound)?;
    let total = subs.len() as u64;
    let mut cyclic = 0u64;
    let mut by_order: BTreeMap<u64, u64> = BTreeMap::new();
    let mut by_isotype: BTreeMap<IsoType, u64> = BTreeMap::new();
    let mut sigma = [Natural::from(0u32), Natural::from(0u32), Natural::from(0u32)];
    let mut exponent_sum = Natural::from(0u32);
    for h in &subs {
        // cyclicity and exponent from raw element orders
        let exponent = h
            .elements()
            .iter()
            .fold(1u64, |acc, &x| small::lcm(acc, table.element_order(x)));
        if exponent == h.order() {
            cyclic += 1;
        }
        exponent_sum += Natural::from(exponent);
        *by_order.entry(h.order()).or_insert(0) += 1;
        let iso = isotype_of(&table, h)?;
        if iso.exponent() != Natural::from(exponent) || iso.order() != Natural::from(h.order()) {
            return Err(Error::Internal(format!(
                "isotype {iso} disagrees with element arithmetic on order/exponent"
            )));
        }
        *by_isotype.entry(iso).or_insert(0) += 1;
        let o = Natural::from(h.order());
        sigma[0] += Natural::one();
        sigma[1] += &o;
        sigma[2] += &o * &o;
    }
    // maximal subgroups: proper subgroups with no strictly larger proper
    // subgroup above them
    let full = subs.last().expect("lattice is non-empty");
    let mut maximal = 0u64;
    for h in &subs {
        if h.order() == full.order() {
            continue;
        }
        let mut is_max = true;
        for k in &subs {
            if k.order() > h.order()
                && k.order() < full.order()
                && k.order() % h.order() == 0
                && h.is_subset_of(k)
            {
                is_max = false;
                break;
            }
        }
        if is_max {
            maximal += 1;
        }
    }
    Ok(OracleStats {
        total,
        cyclic,
        by_order,
        by_isotype,
        sigma,
        maximal,
        exponent_sum,
    })
}

/// [`oracle_stats_bounded`] at the default bound.
pub fn oracle_stats(g: &GroupSpec) -> Result<OracleStats> {
    oracle_stats_bounded(g, DEFAULT_ORACLE_BOUND)
}
