//! Exact Lubell values, maximum Lubell value of P-free families by branch
//! and bound, and the Lubell sufficient condition for Ramsey upper bounds.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::embedding::{EmbeddingMode, Engine, Plan};
use crate::error::{Error, Result};
use crate::lattice::{binomial, is_comparable, SubsetMask};
use crate::poset::TargetPoset;

/// Largest host for [`max_lubell_p_free`]; families are `u64` bitsets.
pub const MAX_LUBELL_DIMENSION: u32 = 6;

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn check_members(n: u32, family: &[SubsetMask]) -> Result<()> {
    if n > 31 {
        return Err(Error::param(format!("dimension {n} too large")));
    }
    match family.iter().find(|s| u64::from(s.bits()) >> n != 0) {
        Some(s) => Err(Error::param(format!("{s} is not a subset of [{n}]"))),
        None => Ok(()),
    }
}

/// `lu_N(F) = Σ 1/C(N, |F|)` over the distinct members of `family`.
pub fn lubell(n: u32, family: &[SubsetMask]) -> Result<BigRational> {
    check_members(n, family)?;
    let mut bits: Vec<u32> = family.iter().map(|s| s.bits()).collect();
    bits.sort_unstable();
    bits.dedup();
    // group by size so each level costs one division
    let mut per_level = vec![0u64; n as usize + 1];
    for b in bits {
        per_level[b.count_ones() as usize] += 1;
    }
    Ok(per_level
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| {
            BigRational::new(BigInt::from(c), BigInt::from(binomial(u64::from(n), i as u64)))
        })
        .fold(BigRational::zero(), |acc, x| acc + x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YblmCheck {
    pub is_antichain: bool,
    pub value: BigRational,
}

impl YblmCheck {
    /// Antichain with Lubell value at most one.
    pub fn holds(&self) -> bool {
        self.is_antichain && self.value <= rat(1)
    }
}

pub fn yblm_check(n: u32, family: &[SubsetMask]) -> Result<YblmCheck> {
    let value = lubell(n, family)?;
    let is_antichain = family.iter().enumerate().all(|(i, a)| {
        family[i + 1..]
            .iter()
            .all(|b| a.bits() != b.bits() && !is_comparable(a.bits(), b.bits()))
    });
    Ok(YblmCheck { is_antichain, value })
}

#[derive(Clone, Debug)]
pub struct LubellSearch {
    /// Best value found; the exact maximum when `complete`.
    pub value: BigRational,
    pub witness: Vec<SubsetMask>,
    pub nodes: u64,
    pub complete: bool,
    /// Upper bound on the maximum (equal to `value` when complete).
    pub upper_bound: BigRational,
}

/// Detects weak copies of one target inside a family of `B_n`.
struct FreenessOracle {
    n: u32,
    /// One plan per target element, that element placed first.
    plans: Vec<Plan>,
}

impl FreenessOracle {
    fn new(n: u32, target: &TargetPoset) -> Self {
        let plans = (0..target.size())
            .map(|x| Plan::new(target, &[x], &[]))
            .collect();
        FreenessOracle { n, plans }
    }

    /// Does `family` (a bitset of masks) contain a copy through `mask`?
    fn copy_through(&self, family: u64, mask: u32) -> bool {
        let mut stop = |_: &[u32]| ControlFlow::Break(());
        self.plans.iter().any(|plan| {
            Engine::new(
                plan,
                self.n,
                EmbeddingMode::Weak,
                |m: u32| family >> m & 1 == 1,
                |_: &[u32]| true,
            )
            .run(&[mask], &mut stop)
        })
    }

    fn is_free(&self, family: u64) -> bool {
        let mut rest = family;
        while rest != 0 {
            let m = rest.trailing_zeros();
            rest &= rest - 1;
            if self.copy_through(family, m) {
                return false;
            }
        }
        true
    }
}

/// Whether `family` contains no weak copy of `target`.
pub fn is_p_free(n: u32, target: &TargetPoset, family: &[SubsetMask]) -> Result<bool> {
    check_members(n, family)?;
    if n > MAX_LUBELL_DIMENSION {
        return Err(Error::Infeasible(format!("P-freeness checks are capped at N ≤ {MAX_LUBELL_DIMENSION}")));
    }
    let bits = family.iter().fold(0u64, |acc, s| acc | 1 << s.bits());
    Ok(FreenessOracle::new(n, target).is_free(bits))
}

struct BranchAndBound<'a> {
    oracle: &'a FreenessOracle,
    /// Candidate masks, heaviest first, ties by ascending mask.
    order: Vec<u32>,
    weight: Vec<u64>,
    best: u64,
    best_family: u64,
    nodes: u64,
    max_nodes: Option<u64>,
    open_bound: u64,
}

impl BranchAndBound<'_> {
    fn bound(&self, value: u64, alive: u64) -> u64 {
        let mut total = value;
        let mut rest = alive;
        while rest != 0 {
            total += self.weight[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        total
    }

    /// `alive`: undecided positions each individually addable to `family`.
    /// Returns true when the node budget ran out.
    fn dfs(&mut self, family: u64, value: u64, alive: u64) -> bool {
        self.nodes += 1;
        let bound = self.bound(value, alive);
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            self.open_bound = self.open_bound.max(bound);
            return true;
        }
        if value > self.best {
            self.best = value;
            self.best_family = family;
        }
        if alive == 0 || bound <= self.best {
            return false;
        }
        let j = alive.trailing_zeros() as usize;
        let mask = self.order[j];
        let rest = alive & !(1u64 << j);
        let grown = family | 1 << mask;
        let mut next_alive = 0u64;
        let mut scan = rest;
        while scan != 0 {
            let u = scan.trailing_zeros() as usize;
            scan &= scan - 1;
            let m = self.order[u];
            if !self.oracle.copy_through(grown | 1 << m, m) {
                next_alive |= 1 << u;
            }
        }
        if self.dfs(grown, value + self.weight[j], next_alive) || self.dfs(family, value, rest) {
            self.open_bound = self.open_bound.max(bound);
            return true;
        }
        false
    }
}

/// `L_N(P; Q)`: the largest Lubell value of a `P`-free family avoiding
/// `excluded`, with a maximizing family. `P`-free means no weak copy.
pub fn max_lubell_p_free(
    n: u32,
    target: &TargetPoset,
    excluded: &[SubsetMask],
    max_nodes: Option<u64>,
) -> Result<LubellSearch> {
    check_members(n, excluded)?;
    if n > MAX_LUBELL_DIMENSION {
        return Err(Error::Infeasible(format!(
            "Lubell maximization is capped at N ≤ {MAX_LUBELL_DIMENSION}"
        )));
    }
    let oracle = FreenessOracle::new(n, target);
    let lcm = (0..=u64::from(n))
        .map(|i| binomial(u64::from(n), i).to_u64().expect("small binomial"))
        .fold(1u64, |acc, c| acc.lcm(&c));
    let weight_of = |m: u32| lcm / binomial(u64::from(n), u64::from(m.count_ones())).to_u64().expect("small");
    let banned = excluded.iter().fold(0u64, |acc, s| acc | 1 << s.bits());
    let mut order: Vec<u32> = (0..1u32 << n).filter(|&m| banned >> m & 1 == 0).collect();
    order.sort_by_key(|&m| (std::cmp::Reverse(weight_of(m)), m));
    let weight: Vec<u64> = order.iter().map(|&m| weight_of(m)).collect();
    let alive = order
        .iter()
        .enumerate()
        .filter(|&(_, &m)| !oracle.copy_through(1 << m, m))
        .fold(0u64, |acc, (i, _)| acc | 1 << i);
    let mut bb = BranchAndBound {
        oracle: &oracle,
        order,
        weight,
        best: 0,
        best_family: 0,
        nodes: 0,
        max_nodes,
        open_bound: 0,
    };
    let aborted = bb.dfs(0, 0, alive);
    let scale = |v: u64| BigRational::new(BigInt::from(v), BigInt::from(lcm));
    let witness: Vec<SubsetMask> = (0..1u32 << n)
        .filter(|&m| bb.best_family >> m & 1 == 1)
        .map(|m| SubsetMask::from_raw(m, n))
        .collect();
    Ok(LubellSearch {
        value: scale(bb.best),
        witness,
        nodes: bb.nodes,
        complete: !aborted,
        upper_bound: scale(if aborted { bb.open_bound.max(bb.best) } else { bb.best }),
    })
}

/// `{∅, [N]}`.
pub fn trivial_excluded(n: u32) -> Vec<SubsetMask> {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut v = vec![SubsetMask::from_raw(0, n)];
    if n > 0 {
        v.push(SubsetMask::from_raw(full, n));
    }
    v
}

/// `{∅, [N]}` together with levels `1` and `N − 1`.
pub fn matching_excluded(n: u32) -> Vec<SubsetMask> {
    let mut v = trivial_excluded(n);
    v.extend(
        (0..1u32 << n)
            .filter(|m| {
                let c = m.count_ones();
                (c == 1 || c + 1 == n) && c != 0 && c != n
            })
            .map(|m| SubsetMask::from_raw(m, n)),
    );
    v.sort_by_key(|s| s.bits());
    v.dedup();
    v
}

/// `1 + 1/N`, the maximum for the 2-matching (valid for `N ≥ 5`).
pub fn matching_two_value(n: u32) -> Result<BigRational> {
    if n < 5 {
        return Err(Error::param("the closed form holds for N ≥ 5"));
    }
    Ok(rat(1) + BigRational::new(1.into(), n.into()))
}

/// `[1 + 2(s−1)/(N(N−1)), 1 + 4(s−1)/(N(N−1))]` for `3 ≤ s ≤ C(N,2) + 1`
/// with the [`matching_excluded`] set removed.
pub fn matching_bracket(s: u32, n: u32) -> Result<(BigRational, BigRational)> {
    let max_s = binomial(u64::from(n), 2) + 1u32;
    if s < 3 || num_bigint::BigUint::from(s) > max_s {
        return Err(Error::param(format!("need 3 ≤ s ≤ C(N,2)+1, got s={s}, N={n}")));
    }
    let den = BigInt::from(n) * BigInt::from(n - 1);
    let lo = rat(1) + BigRational::new(BigInt::from(2 * (s - 1)), den.clone());
    let hi = rat(1) + BigRational::new(BigInt::from(4 * (s - 1)), den);
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LubellCondition {
    /// `k · L_N(P; Q)`.
    pub lhs: BigRational,
    /// `N + 1 − lu_N(Q)`.
    pub rhs: BigRational,
}

impl LubellCondition {
    /// `lhs < rhs` certifies `R_k(B | P) ≤ N`.
    pub fn certified(&self) -> bool {
        self.lhs < self.rhs
    }
}

/// Evaluates `k·L < N + 1 − lu_N(Q)` exactly, given `L = L_N(P; Q)` (or any
/// proven upper bound on it).
pub fn ramsey_upper_by_lubell(
    k: u32,
    n: u32,
    l_value: &BigRational,
    excluded: &[SubsetMask],
) -> Result<LubellCondition> {
    let lu_q = lubell(n, excluded)?;
    Ok(LubellCondition {
        lhs: rat(k) * l_value,
        rhs: rat(n + 1) - lu_q,
    })
}
