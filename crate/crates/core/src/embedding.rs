//! Weak and strong embeddings of target posets into Boolean lattices.
//!
//! All searches share one backtracking engine. Target elements are placed
//! in a fixed plan order; the candidates for an element are the masks `M`
//! with `lo ⊆ M ⊆ hi`, where `lo` is the union of the images of placed
//! elements below it and `hi` the intersection of the images of placed
//! elements above it, scanned in ascending mask order.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::coloring::ChainColoring;
use crate::error::{Error, Result};
use crate::lattice::{full_bits, is_comparable, supersets_within, BooleanLattice, ChainTable, SubsetMask};
use crate::poset::{TargetPoset, MAX_TARGET_SIZE};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum EmbeddingMode {
    /// `x ≤ y ⇒ f(x) ⊆ f(y)`.
    Weak,
    /// `x ≤ y ⇔ f(x) ⊆ f(y)`.
    Strong,
}

impl fmt::Display for EmbeddingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingMode::Weak => "weak",
            EmbeddingMode::Strong => "strong",
        })
    }
}

impl FromStr for EmbeddingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(EmbeddingMode::Weak),
            "strong" => Ok(EmbeddingMode::Strong),
            _ => Err(Error::param(format!("unknown mode `{s}` (weak|strong)"))),
        }
    }
}

/// An injective map from target elements to subsets; `images[i]` is the
/// image of element `i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Embedding {
    pub target: TargetPoset,
    pub images: Vec<SubsetMask>,
    pub mode: EmbeddingMode,
}

impl Embedding {
    /// Re-checks injectivity and the order conditions of `mode`.
    pub fn is_valid(&self) -> bool {
        is_embedding(&self.target, &self.images, self.mode)
    }
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} copy:", self.mode, self.target)?;
        for (i, s) in self.images.iter().enumerate() {
            write!(f, " {i}->{}={s}", s.bits())?;
        }
        Ok(())
    }
}

/// Direct check of the embedding conditions, independent of the search.
pub fn is_embedding(target: &TargetPoset, images: &[SubsetMask], mode: EmbeddingMode) -> bool {
    if images.len() != target.size() {
        return false;
    }
    for x in 0..images.len() {
        for y in 0..images.len() {
            if x == y {
                continue;
            }
            if images[x] == images[y] {
                return false;
            }
            let sub = images[x].is_subset_of(images[y]);
            match mode {
                EmbeddingMode::Weak if target.le(x, y) && !sub => return false,
                EmbeddingMode::Strong if target.le(x, y) != sub => return false,
                _ => {}
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub(crate) struct Step {
    elem: usize,
    /// Previously placed elements strictly below / above / incomparable.
    below: u64,
    above: u64,
    incomparable: u64,
    /// Target t-chains (bottom first) whose last element is placed here.
    chains: Vec<Vec<usize>>,
}

/// Placement order for one target, optionally starting with pinned elements.
#[derive(Clone, Debug)]
pub(crate) struct Plan {
    steps: Vec<Step>,
    size: usize,
}

impl Plan {
    /// `pinned` elements come first in the given order; the rest follow a
    /// greedy most-constrained-first linear extension.
    pub(crate) fn new(target: &TargetPoset, pinned: &[usize], chains: &[Vec<usize>]) -> Plan {
        let size = target.size();
        let mut order: Vec<usize> = pinned.to_vec();
        let mut placed: u64 = pinned.iter().fold(0, |acc, &x| acc | 1 << x);
        while order.len() < size {
            let next = (0..size)
                .filter(|&x| placed >> x & 1 == 0)
                .filter(|&x| target.below_mask(x) & !placed == 0)
                .max_by_key(|&x| {
                    let cmp = target.comparable_mask(x);
                    (
                        (cmp & placed).count_ones(),
                        cmp.count_ones(),
                        std::cmp::Reverse(x),
                    )
                })
                .expect("a minimal unplaced element exists");
            order.push(next);
            placed |= 1 << next;
        }
        let mut position = vec![0usize; size];
        for (i, &x) in order.iter().enumerate() {
            position[x] = i;
        }
        let mut steps: Vec<Step> = Vec::with_capacity(size);
        let mut before = 0u64;
        for &x in &order {
            let below = target.below_mask(x) & before;
            let above = target.above_mask(x) & before;
            steps.push(Step {
                elem: x,
                below,
                above,
                incomparable: before & !below & !above,
                chains: Vec::new(),
            });
            before |= 1 << x;
        }
        for chain in chains {
            let last = chain.iter().map(|&x| position[x]).max().expect("non-empty chain");
            steps[last].chains.push(chain.clone());
        }
        Plan { steps, size }
    }
}

/// Backtracking state for one plan on one host.
pub(crate) struct Engine<'a, E, C> {
    plan: &'a Plan,
    full: u32,
    mode: EmbeddingMode,
    element_ok: E,
    chain_ok: C,
    img: [u32; MAX_TARGET_SIZE],
}

impl<'a, E, C> Engine<'a, E, C>
where
    E: Fn(u32) -> bool,
    C: Fn(&[u32]) -> bool,
{
    pub(crate) fn new(plan: &'a Plan, n: u32, mode: EmbeddingMode, element_ok: E, chain_ok: C) -> Self {
        Engine {
            plan,
            full: full_bits(n),
            mode,
            element_ok,
            chain_ok,
            img: [0; MAX_TARGET_SIZE],
        }
    }

    /// Runs the search with the first `pins.len()` plan steps fixed to the
    /// given masks. `visit` sees the images indexed by target element.
    /// Returns true if `visit` stopped the search.
    pub(crate) fn run<V>(&mut self, pins: &[u32], visit: &mut V) -> bool
    where
        V: FnMut(&[u32]) -> ControlFlow<()>,
    {
        self.dfs(0, pins, visit).is_break()
    }

    fn accepts(&self, depth: usize, m: u32) -> bool {
        let step = &self.plan.steps[depth];
        for prev in &self.plan.steps[..depth] {
            if self.img[prev.elem] == m {
                return false;
            }
        }
        if !(self.element_ok)(m) {
            return false;
        }
        if self.mode == EmbeddingMode::Strong {
            let mut inc = step.incomparable;
            while inc != 0 {
                let y = inc.trailing_zeros() as usize;
                inc &= inc - 1;
                if is_comparable(m, self.img[y]) {
                    return false;
                }
            }
        }
        true
    }

    fn chains_ok(&self, depth: usize) -> bool {
        let mut buf = [0u32; MAX_TARGET_SIZE];
        self.plan.steps[depth].chains.iter().all(|chain| {
            for (slot, &x) in buf.iter_mut().zip(chain) {
                *slot = self.img[x];
            }
            (self.chain_ok)(&buf[..chain.len()])
        })
    }

    fn dfs<V>(&mut self, depth: usize, pins: &[u32], visit: &mut V) -> ControlFlow<()>
    where
        V: FnMut(&[u32]) -> ControlFlow<()>,
    {
        if depth == self.plan.steps.len() {
            return visit(&self.img[..self.plan.size]);
        }
        let step = &self.plan.steps[depth];
        let mut lo = 0u32;
        let mut bits = step.below;
        while bits != 0 {
            let y = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            lo |= self.img[y];
        }
        let mut hi = self.full;
        let mut bits = step.above;
        while bits != 0 {
            let y = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            hi &= self.img[y];
        }
        if lo & !hi != 0 {
            return ControlFlow::Continue(());
        }
        let elem = step.elem;
        if let Some(&pin) = pins.get(depth) {
            if pin & !hi != 0 || lo & !pin != 0 || !self.accepts(depth, pin) {
                return ControlFlow::Continue(());
            }
            self.img[elem] = pin;
            if self.chains_ok(depth) {
                self.dfs(depth + 1, pins, visit)?;
            }
            return ControlFlow::Continue(());
        }
        for m in supersets_within(lo, hi) {
            if !self.accepts(depth, m) {
                continue;
            }
            self.img[elem] = m;
            if self.chains_ok(depth) {
                self.dfs(depth + 1, pins, visit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

fn check_size(host: &BooleanLattice, target: &TargetPoset) -> bool {
    target.size() as u64 <= host.size()
}

fn to_embedding(target: &TargetPoset, n: u32, img: &[u32], mode: EmbeddingMode) -> Embedding {
    Embedding {
        target: target.clone(),
        images: img.iter().map(|&b| SubsetMask::from_raw(b, n)).collect(),
        mode,
    }
}

/// First embedding (in the canonical search order) whose images all pass
/// `filter`.
pub fn find_copy(
    host: &BooleanLattice,
    target: &TargetPoset,
    mode: EmbeddingMode,
    filter: Option<&dyn Fn(SubsetMask) -> bool>,
) -> Option<Embedding> {
    if !check_size(host, target) {
        return None;
    }
    let n = host.dimension();
    let plan = Plan::new(target, &[], &[]);
    let element_ok = |m: u32| filter.is_none_or(|f| f(SubsetMask::from_raw(m, n)));
    let mut engine = Engine::new(&plan, n, mode, element_ok, |_: &[u32]| true);
    let mut found = None;
    engine.run(&[], &mut |img: &[u32]| {
        found = Some(to_embedding(target, n, img, mode));
        ControlFlow::Break(())
    });
    found
}

/// Counts all embeddings of `target` into `host` passing `filter`.
pub fn count_copies(
    host: &BooleanLattice,
    target: &TargetPoset,
    mode: EmbeddingMode,
    filter: Option<&dyn Fn(SubsetMask) -> bool>,
) -> u64 {
    if !check_size(host, target) {
        return 0;
    }
    let n = host.dimension();
    let plan = Plan::new(target, &[], &[]);
    let element_ok = |m: u32| filter.is_none_or(|f| f(SubsetMask::from_raw(m, n)));
    let mut engine = Engine::new(&plan, n, mode, element_ok, |_: &[u32]| true);
    let mut count = 0u64;
    engine.run(&[], &mut |_: &[u32]| {
        count += 1;
        ControlFlow::Continue(())
    });
    count
}

/// Enumeration cap for [`enumerate_strong_boolean_embeddings`].
pub fn strong_embedding_count_feasible(m: u32, n: u32) -> bool {
    m <= n && ((m <= 3 && n <= 6) || (m <= 1 && n <= 12))
}

/// `e(m, N)`: the number of strong embeddings of `B_m` into `B_N`, by
/// exhaustive enumeration.
pub fn enumerate_strong_boolean_embeddings(m: u32, n: u32) -> Result<BigUint> {
    if m > n {
        return Err(Error::param(format!("need m ≤ N, got m={m}, N={n}")));
    }
    if !strong_embedding_count_feasible(m, n) {
        return Err(Error::Infeasible(format!(
            "enumerating strong embeddings of B_{m} into B_{n} exceeds the desk cap (m ≤ 3, N ≤ 6)"
        )));
    }
    let host = BooleanLattice::new(n)?;
    let target = crate::poset::make_target(crate::poset::TargetFamily::Boolean(m as usize))?;
    Ok(BigUint::from(count_copies(&host, &target, EmbeddingMode::Strong, None)))
}

/// `2^{2·C(m, ⌊m/2⌋)·(N−m)}`, the closed-form bound on `e(m, N)`.
///
/// The bound is asymptotic in nature: for tiny arguments it can be smaller
/// than the exact count (e.g. `e(1, 3) = 19 > 16`).
pub fn embedding_count_upper_bound(m: u32, n: u32) -> Result<BigUint> {
    if m > n {
        return Err(Error::param(format!("need m ≤ N, got m={m}, N={n}")));
    }
    let central = crate::lattice::binomial(u64::from(m), u64::from(m / 2));
    let exponent = central * 2u32 * (n - m);
    let exponent: u32 = exponent
        .try_into()
        .map_err(|_| Error::Infeasible("exponent too large".into()))?;
    Ok(BigUint::from(1u32) << exponent)
}

/// `a(m)`: the number of antichains of `B_m` (the empty family included).
pub fn count_antichains(m: u32) -> Result<BigUint> {
    if m > 6 {
        return Err(Error::Infeasible(format!(
            "antichain enumeration in B_{m} exceeds the cap m ≤ 6"
        )));
    }
    let size = 1usize << m;
    let comparable: Vec<u64> = (0..size as u32)
        .map(|x| {
            (0..size as u32)
                .filter(|&y| is_comparable(x, y))
                .fold(0u64, |acc, y| acc | 1 << y)
        })
        .collect();
    fn count(available: u64, comparable: &[u64]) -> u64 {
        let mut total = 1;
        let mut rest = available;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            total += count(rest & !comparable[x], comparable);
        }
        total
    }
    let all = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
    Ok(BigUint::from(count(all, &comparable)))
}

/// Searches for a copy of `target` all of whose t-chains (all elements,
/// when `t = 1`) carry `color`.
pub fn find_monochromatic_copy(
    host: &BooleanLattice,
    target: &TargetPoset,
    mode: EmbeddingMode,
    coloring: &ChainColoring,
    color: u8,
) -> Result<Option<Embedding>> {
    if coloring.host_n() != host.dimension() {
        return Err(Error::param(format!(
            "coloring is on B_{}, host is B_{}",
            coloring.host_n(),
            host.dimension()
        )));
    }
    if !check_size(host, target) {
        return Ok(None);
    }
    let n = host.dimension();
    let colors = coloring.colors();
    let mut found = None;
    let mut visit = |img: &[u32]| {
        found = Some(to_embedding(target, n, img, mode));
        ControlFlow::Break(())
    };
    if coloring.t() == 1 {
        let plan = Plan::new(target, &[], &[]);
        let mut engine = Engine::new(
            &plan,
            n,
            mode,
            |m: u32| colors[m as usize] == color,
            |_: &[u32]| true,
        );
        engine.run(&[], &mut visit);
    } else {
        let chains = target.t_chains(coloring.t());
        let table = if chains.is_empty() {
            None
        } else if coloring.t() > n as usize + 1 {
            return Ok(None);
        } else {
            Some(ChainTable::new(n, coloring.t())?)
        };
        let plan = Plan::new(target, &[], &chains);
        let mut engine = Engine::new(
            &plan,
            n,
            mode,
            |_: u32| true,
            |sets: &[u32]| {
                table
                    .as_ref()
                    .and_then(|tb| tb.id_of(sets))
                    .is_some_and(|id| colors[id] == color)
            },
        );
        engine.run(&[], &mut visit);
    }
    Ok(found)
}

pub fn monochromatic_copy_exists(
    host: &BooleanLattice,
    target: &TargetPoset,
    mode: EmbeddingMode,
    coloring: &ChainColoring,
    color: u8,
) -> Result<bool> {
    Ok(find_monochromatic_copy(host, target, mode, coloring, color)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::parse_target;

    fn host(n: u32) -> BooleanLattice {
        BooleanLattice::new(n).unwrap()
    }

    #[test]
    fn diamond_in_b2_is_the_whole_lattice() {
        let d = parse_target("diamond:2").unwrap();
        let e = find_copy(&host(2), &d, EmbeddingMode::Strong, None).unwrap();
        let mut bits: Vec<u32> = e.images.iter().map(|s| s.bits()).collect();
        assert!(e.is_valid());
        bits.sort();
        assert_eq!(bits, vec![0, 1, 2, 3]);
    }

    #[test]
    fn matching_two_does_not_fit_b1() {
        let m2 = parse_target("matching:2").unwrap();
        assert!(find_copy(&host(1), &m2, EmbeddingMode::Weak, None).is_none());
    }

    #[test]
    fn butterfly_between_levels_one_and_two_of_b3() {
        let b = parse_target("butterfly:2:2").unwrap();
        let mid = |s: SubsetMask| (1..=2).contains(&s.cardinality());
        // two singletons have exactly one 2-set above both, so no copy
        assert!(find_copy(&host(3), &b, EmbeddingMode::Weak, Some(&mid)).is_none());
        let wide = |s: SubsetMask| (1..=3).contains(&s.cardinality());
        let e = find_copy(&host(3), &b, EmbeddingMode::Weak, Some(&wide)).unwrap();
        assert!(e.is_valid());
    }

    #[test]
    fn strong_counts() {
        assert_eq!(enumerate_strong_boolean_embeddings(1, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(enumerate_strong_boolean_embeddings(1, 2).unwrap(), BigUint::from(5u32));
        for m in 0..=3u32 {
            let fact: u32 = (1..=m).product();
            assert_eq!(
                enumerate_strong_boolean_embeddings(m, m).unwrap(),
                BigUint::from(fact)
            );
        }
        assert!(enumerate_strong_boolean_embeddings(4, 7).is_err());
        assert!(enumerate_strong_boolean_embeddings(3, 2).is_err());
    }

    #[test]
    fn strong_b1_copies_are_two_chains() {
        for n in 1..=5u32 {
            assert_eq!(
                enumerate_strong_boolean_embeddings(1, n).unwrap(),
                crate::lattice::chain_count_formula(n, 2).unwrap()
            );
        }
    }

    #[test]
    fn upper_bound_substitution() {
        assert_eq!(embedding_count_upper_bound(3, 3).unwrap(), BigUint::from(1u32));
        assert_eq!(embedding_count_upper_bound(1, 3).unwrap(), BigUint::from(16u32));
        assert_eq!(embedding_count_upper_bound(2, 4).unwrap(), BigUint::from(256u32));
    }

    #[test]
    fn antichain_counts() {
        let expect = [2u32, 3, 6, 20, 168, 7581];
        for (m, &a) in expect.iter().enumerate() {
            assert_eq!(count_antichains(m as u32).unwrap(), BigUint::from(a));
        }
        assert!(count_antichains(7).is_err());
    }

    #[test]
    fn level_coloring_blocks_matchings() {
        let m2 = parse_target("matching:2").unwrap();
        let coloring =
            ChainColoring::from_element_fn(3, 4, |s| s.count_ones() as u8 + 1).unwrap();
        for c in 1..=4 {
            assert!(!monochromatic_copy_exists(&host(3), &m2, EmbeddingMode::Weak, &coloring, c)
                .unwrap());
        }
    }

    #[test]
    fn single_element_target() {
        let c1 = parse_target("chain:1").unwrap();
        let coloring = ChainColoring::from_element_fn(2, 3, |s| if s == 3 { 2 } else { 1 }).unwrap();
        let h = host(2);
        assert!(monochromatic_copy_exists(&h, &c1, EmbeddingMode::Weak, &coloring, 1).unwrap());
        assert!(monochromatic_copy_exists(&h, &c1, EmbeddingMode::Weak, &coloring, 2).unwrap());
        assert!(!monochromatic_copy_exists(&h, &c1, EmbeddingMode::Weak, &coloring, 3).unwrap());
    }

    #[test]
    fn all_one_coloring_contains_diamond() {
        let d = parse_target("diamond:2").unwrap();
        let coloring = ChainColoring::uniform(2, 1, 1, 1).unwrap();
        assert!(
            monochromatic_copy_exists(&host(2), &d, EmbeddingMode::Strong, &coloring, 1).unwrap()
        );
    }

    #[test]
    fn two_chain_coloring_detection() {
        // C_3 needs its three 2-chains monochromatic.
        let c3 = parse_target("chain:3").unwrap();
        let h = host(2);
        let all = ChainColoring::uniform(2, 2, 2, 1).unwrap();
        assert!(monochromatic_copy_exists(&h, &c3, EmbeddingMode::Weak, &all, 1).unwrap());
        // ∅⊂{1,2} colored 2 kills both 3-chains for color 1
        let cut = ChainColoring::from_fn(2, 2, 2, |s| if s == [0, 3] { 2 } else { 1 }).unwrap();
        assert!(!monochromatic_copy_exists(&h, &c3, EmbeddingMode::Weak, &cut, 1).unwrap());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("weak".parse::<EmbeddingMode>().unwrap(), EmbeddingMode::Weak);
        assert!("induced".parse::<EmbeddingMode>().is_err());
    }
}
