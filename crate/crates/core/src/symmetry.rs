//! Symmetries of `B_n` acting on t-chains: ground-set permutations and,
//! when every target is self-dual, complementation.

use std::fmt;
use std::str::FromStr;

use crate::coloring::RamseyInstance;
use crate::error::{Error, Result};
use crate::lattice::{full_bits, ChainTable};

/// Largest host dimension for which the group is materialized (`7! · 2`
/// permutations of the chain ids).
pub const MAX_SYMMETRY_DIMENSION: u32 = 7;

/// `S_n`, optionally times the reversal involution.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GroupDescriptor {
    pub n: u32,
    pub reversal: bool,
}

impl GroupDescriptor {
    pub fn trivial() -> Self {
        GroupDescriptor {
            n: 0,
            reversal: false,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.n <= 1 && !self.reversal
    }

    /// Group order `n! · (2 if reversal)`.
    pub fn order(&self) -> u128 {
        let fact: u128 = (1..=u128::from(self.n)).product();
        if self.reversal {
            fact * 2
        } else {
            fact
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n, self.reversal) {
            (0 | 1, false) => f.write_str("trivial"),
            (n, false) => write!(f, "S{n}"),
            (n, true) => write!(f, "S{n}xR"),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "trivial" {
            return Ok(GroupDescriptor::trivial());
        }
        let (body, reversal) = match s.strip_suffix("xR") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let n = body
            .strip_prefix('S')
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| Error::parse(format!("bad group descriptor `{s}`")))?;
        Ok(GroupDescriptor { n, reversal })
    }
}

/// The group used to reduce the search on `B_{host_n}`: `S_{host_n}`, with
/// complementation added exactly when every target is isomorphic to its dual.
pub fn canonical_symmetry_group(instance: &RamseyInstance, host_n: u32) -> GroupDescriptor {
    if host_n == 0 {
        return GroupDescriptor::trivial();
    }
    GroupDescriptor {
        n: host_n,
        reversal: instance.targets().iter().all(|p| p.is_self_dual()),
    }
}

/// Visits every permutation of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut p: Vec<u32> = (0..n as u32).collect();
    loop {
        f(&p);
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

pub(crate) fn permute_mask(mask: u32, sigma: &[u32]) -> u32 {
    let mut out = 0;
    let mut bits = mask;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        out |= 1 << sigma[i];
    }
    out
}

/// Applies one group element to a chain, given bottom first.
pub(crate) fn map_chain(sets: &[u32], sigma: &[u32], reverse: bool, full: u32, out: &mut Vec<u32>) {
    out.clear();
    out.extend(sets.iter().map(|&s| permute_mask(s, sigma)));
    if reverse {
        for s in out.iter_mut() {
            *s = full & !*s;
        }
        out.reverse();
    }
}

/// Every non-identity group element as a permutation of chain ids.
pub(crate) fn chain_permutations(group: GroupDescriptor, table: &ChainTable) -> Vec<Vec<u32>> {
    let n = table.dimension();
    if group.is_trivial() || group.n != n {
        return Vec::new();
    }
    let full = full_bits(n);
    let reversals: &[bool] = if group.reversal { &[false, true] } else { &[false] };
    let mut perms = Vec::new();
    let mut src = Vec::with_capacity(table.t());
    let mut dst = Vec::with_capacity(table.t());
    for_each_permutation(n as usize, |sigma| {
        for &rev in reversals {
            let identity = !rev && sigma.iter().enumerate().all(|(i, &s)| s == i as u32);
            if identity {
                continue;
            }
            let perm: Vec<u32> = (0..table.len())
                .map(|id| {
                    table.masks_into(id, &mut src);
                    map_chain(&src, sigma, rev, full, &mut dst);
                    table.id_of(&dst).expect("group maps chains to chains") as u32
                })
                .collect();
            perms.push(perm);
        }
    });
    perms
}
