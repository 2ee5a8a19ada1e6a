//! Boolean lattices, subset masks and t-chains.
//!
//! A subset `S` of the ground set `[n] = {1, ..., n}` is stored as a `u32`
//! with bit `i - 1` set iff `i ∈ S`. Subsets are ordered by their integer
//! value, and t-chains by the lexicographic order of their mask tuples
//! (bottom set first). A chain's position in that order is its id.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default cap on the host dimension.
pub const DEFAULT_MAX_DIMENSION: u32 = 28;

/// A subset of `[n]` as a canonical bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SubsetMask {
    bits: u32,
    n: u32,
}

impl SubsetMask {
    pub fn new(bits: u32, n: u32) -> Result<Self> {
        if n > 31 || (n < 32 && u64::from(bits) >= 1u64 << n) {
            return Err(Error::param(format!("mask {bits} is not a subset of [{n}]")));
        }
        Ok(SubsetMask { bits, n })
    }

    pub(crate) fn from_raw(bits: u32, n: u32) -> Self {
        debug_assert!(u64::from(bits) < 1u64 << n);
        SubsetMask { bits, n }
    }

    /// Builds a mask from 1-based ground elements.
    pub fn from_elements(elements: &[u32], n: u32) -> Result<Self> {
        let mut bits = 0u32;
        for &e in elements {
            if e == 0 || e > n {
                return Err(Error::param(format!("element {e} is not in [{n}]")));
            }
            bits |= 1 << (e - 1);
        }
        SubsetMask::new(bits, n)
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn cardinality(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn comparable(self, other: SubsetMask) -> bool {
        is_comparable(self.bits, other.bits)
    }

    /// 1-based ground elements in ascending order.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        (0..self.n).filter(move |i| self.bits >> i & 1 == 1).map(|i| i + 1)
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

#[inline]
pub(crate) fn is_comparable(a: u32, b: u32) -> bool {
    a & !b == 0 || b & !a == 0
}

/// The Boolean lattice `B_n`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BooleanLattice {
    n: u32,
}

impl BooleanLattice {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_cap(n, DEFAULT_MAX_DIMENSION)
    }

    pub fn with_cap(n: u32, cap: u32) -> Result<Self> {
        if n > cap || n > 31 {
            return Err(Error::param(format!(
                "host dimension {n} exceeds the cap {}",
                cap.min(31)
            )));
        }
        Ok(BooleanLattice { n })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u64 {
        1u64 << self.n
    }

    pub fn full(&self) -> SubsetMask {
        SubsetMask::from_raw(self.full_bits(), self.n)
    }

    pub(crate) fn full_bits(&self) -> u32 {
        full_bits(self.n)
    }

    pub fn elements(&self) -> impl Iterator<Item = SubsetMask> {
        let n = self.n;
        (0..(1u64 << n)).map(move |b| SubsetMask::from_raw(b as u32, n))
    }

    /// All subsets of size `i`, ascending.
    pub fn level(&self, i: u32) -> impl Iterator<Item = SubsetMask> {
        self.elements().filter(move |s| s.cardinality() == i)
    }
}

#[inline]
pub(crate) fn full_bits(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        ((1u64 << n) - 1) as u32
    }
}

/// Supersets of `base` inside `full`, ascending by mask value.
pub(crate) fn supersets_within(base: u32, full: u32) -> impl Iterator<Item = u32> {
    let free = full & !base;
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let s = next?;
        next = if s == free {
            None
        } else {
            Some((s | !free).wrapping_add(1) & free)
        };
        Some(base | s)
    })
}

/// A t-chain `sets[0] ⊂ sets[1] ⊂ ... ⊂ sets[t-1]` with its canonical id.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TChain {
    pub sets: Vec<SubsetMask>,
    pub id: usize,
}

impl fmt::Display for TChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sets.iter().enumerate() {
            if i > 0 {
                f.write_str("⊂")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Every t-chain of `host`, in canonical id order.
pub fn enumerate_t_chains(host: &BooleanLattice, t: usize) -> Result<Vec<TChain>> {
    let table = ChainTable::new(host.dimension(), t)?;
    let n = host.dimension();
    let mut buf = Vec::with_capacity(t);
    Ok((0..table.len())
        .map(|id| {
            table.masks_into(id, &mut buf);
            TChain {
                sets: buf.iter().map(|&b| SubsetMask::from_raw(b, n)).collect(),
                id,
            }
        })
        .collect())
}

/// Flat table of the t-chains of `B_n` with id lookup.
///
/// For `t = 1` the table is implicit: the id of `{S}` is the mask of `S`.
#[derive(Clone, Debug)]
pub struct ChainTable {
    n: u32,
    t: usize,
    len: usize,
    data: Vec<u32>,
}

impl ChainTable {
    pub fn new(n: u32, t: usize) -> Result<Self> {
        if n > 31 {
            return Err(Error::param(format!("host dimension {n} too large")));
        }
        if t == 0 || t > n as usize + 1 {
            return Err(Error::param(format!(
                "chain size t={t} must lie in 1..={}",
                n + 1
            )));
        }
        if t == 1 {
            return Ok(ChainTable {
                n,
                t,
                len: 1usize << n,
                data: Vec::new(),
            });
        }
        let expected = chain_count_formula(n, t as u32)?
            .to_usize()
            .filter(|&c| c.saturating_mul(t) <= 1 << 30)
            .ok_or_else(|| {
                Error::Infeasible(format!("too many {t}-chains in B_{n} to tabulate"))
            })?;
        let mut data = Vec::with_capacity(expected * t);
        let full = full_bits(n);
        let mut prefix = Vec::with_capacity(t);
        for first in 0..=full {
            prefix.push(first);
            extend_chains(&mut prefix, t, full, &mut data);
            prefix.pop();
        }
        let len = data.len() / t;
        debug_assert_eq!(len, expected);
        Ok(ChainTable { n, t, len, data })
    }

    pub fn dimension(&self) -> u32 {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Masks of chain `id`, bottom first.
    ///
    /// Panics for `t = 1`, whose table is implicit; use [`ChainTable::masks_into`].
    pub fn chain(&self, id: usize) -> &[u32] {
        assert!(self.t > 1, "the t = 1 chain table is implicit");
        &self.data[id * self.t..(id + 1) * self.t]
    }

    /// Writes the masks of chain `id` into `out`.
    pub fn masks_into(&self, id: usize, out: &mut Vec<u32>) {
        out.clear();
        if self.t == 1 {
            out.push(id as u32);
        } else {
            out.extend_from_slice(self.chain(id));
        }
    }

    /// Id of the chain with the given strictly increasing masks.
    pub fn id_of(&self, sets: &[u32]) -> Option<usize> {
        if sets.len() != self.t {
            return None;
        }
        if self.t == 1 {
            return ((sets[0] as usize) < self.len).then_some(sets[0] as usize);
        }
        let (mut lo, mut hi) = (0usize, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.chain(mid).cmp(sets) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

fn extend_chains(prefix: &mut Vec<u32>, t: usize, full: u32, out: &mut Vec<u32>) {
    if prefix.len() == t {
        out.extend_from_slice(prefix);
        return;
    }
    let last = *prefix.last().expect("prefix is non-empty");
    for next in supersets_within(last, full).skip(1) {
        prefix.push(next);
        extend_chains(prefix, t, full, out);
        prefix.pop();
    }
}

/// Exact number `h_n(t)` of t-chains in `B_n`, via
/// `Σ_{i=0}^{t-1} (-1)^{t-i+1} C(t-1, i) (i+2)^n`.
pub fn chain_count_formula(n: u32, t: u32) -> Result<BigUint> {
    if t == 0 {
        return Err(Error::param("chain size t must be positive"));
    }
    let mut total = BigInt::zero();
    for i in 0..t {
        let term = BigInt::from(binomial(u64::from(t - 1), u64::from(i)))
            * num_traits::pow(BigInt::from(i + 2), n as usize);
        if (t - i + 1).is_multiple_of(2) {
            total += term;
        } else {
            total -= term;
        }
    }
    total
        .to_biguint()
        .ok_or_else(|| Error::Verification("negative chain count".into()))
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b2_two_chains_by_hand() {
        let host = BooleanLattice::new(2).unwrap();
        let chains = enumerate_t_chains(&host, 2).unwrap();
        let got: Vec<(u32, u32)> = chains
            .iter()
            .map(|c| (c.sets[0].bits(), c.sets[1].bits()))
            .collect();
        // ∅⊂{1}, ∅⊂{2}, ∅⊂{1,2}, {1}⊂{1,2}, {2}⊂{1,2}
        assert_eq!(got, vec![(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)]);
    }

    #[test]
    fn one_chains_are_elements() {
        for n in 0..6 {
            let host = BooleanLattice::new(n).unwrap();
            let chains = enumerate_t_chains(&host, 1).unwrap();
            assert_eq!(chains.len(), 1 << n);
            assert!(chains.iter().all(|c| c.sets[0].bits() as usize == c.id));
        }
    }

    #[test]
    fn b5_three_chains_against_pair_loop() {
        let host = BooleanLattice::new(5).unwrap();
        let chains = enumerate_t_chains(&host, 3).unwrap();
        // independent count: for every strict pair A⊂B count C with B⊂C
        let mut brute = 0u64;
        for a in 0u32..32 {
            for b in 0u32..32 {
                if a != b && a & !b == 0 {
                    for c in 0u32..32 {
                        if c != b && b & !c == 0 {
                            brute += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(brute, 570);
        assert_eq!(chains.len(), 570);
        assert_eq!(chain_count_formula(5, 3).unwrap(), BigUint::from(570u32));
    }

    #[test]
    fn formula_small_cases() {
        for n in 0..10u32 {
            assert_eq!(chain_count_formula(n, 1).unwrap(), BigUint::from(1u64 << n));
            let two = BigUint::from(3u64.pow(n) - 2u64.pow(n));
            assert_eq!(chain_count_formula(n, 2).unwrap(), two);
            assert!(chain_count_formula(n, n + 2).unwrap().is_zero());
        }
        assert_eq!(chain_count_formula(2, 2).unwrap(), BigUint::from(5u32));
        assert!(chain_count_formula(3, 0).is_err());
    }

    #[test]
    fn formula_exceeds_u64_near_the_cap() {
        let h = chain_count_formula(28, 10).unwrap();
        assert!(h > BigUint::from(u64::MAX));
    }

    #[test]
    fn out_of_range_t_is_rejected() {
        let host = BooleanLattice::new(3).unwrap();
        assert!(enumerate_t_chains(&host, 0).is_err());
        assert!(enumerate_t_chains(&host, 5).is_err());
        assert_eq!(enumerate_t_chains(&host, 4).unwrap().len(), 6);
    }

    #[test]
    fn ids_are_strictly_sorted_and_lookup_inverts() {
        let table = ChainTable::new(4, 3).unwrap();
        for id in 1..table.len() {
            assert!(table.chain(id - 1) < table.chain(id));
        }
        for id in 0..table.len() {
            assert_eq!(table.id_of(table.chain(id)), Some(id));
        }
        assert_eq!(table.id_of(&[0, 0, 1]), None);
    }

    #[test]
    fn superset_iteration_is_ascending() {
        let got: Vec<u32> = supersets_within(0b0010, 0b1111).collect();
        assert_eq!(got, vec![2, 3, 6, 7, 10, 11, 14, 15]);
        assert_eq!(supersets_within(0b111, 0b111).collect::<Vec<_>>(), vec![7]);
    }

    #[test]
    fn mask_validation_and_display() {
        assert!(SubsetMask::new(8, 3).is_err());
        let s = SubsetMask::from_elements(&[1, 3], 4).unwrap();
        assert_eq!(s.bits(), 0b101);
        assert_eq!(s.cardinality(), 2);
        assert_eq!(s.to_string(), "{1,3}");
        assert!(BooleanLattice::new(29).is_err());
        assert!(BooleanLattice::with_cap(29, 30).is_ok());
    }
}
