//! Small abstract posets used as Ramsey targets.

use std::fmt;
use std::str::FromStr;

use crate::embedding::{find_copy, EmbeddingMode};
use crate::error::{Error, Result};
use crate::lattice::BooleanLattice;

/// Largest target size; relations are stored as one `u64` row per element.
pub const MAX_TARGET_SIZE: usize = 64;

/// Named poset families with their parameters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum TargetFamily {
    /// `C_n`, a total order on `n` elements.
    Chain(usize),
    /// `A_n`, `n` pairwise incomparable elements.
    Antichain(usize),
    /// `M_s`: `x_i < y_i` for `i = 1..s`, nothing else.
    Matching(usize),
    /// `r` bottoms each below all of `s` tops.
    Butterfly(usize, usize),
    /// `◊_r`: `x < y_1..y_r < z` with the `y_i` pairwise incomparable.
    Diamond(usize),
    /// `B_m` as an abstract poset; element `i` is the subset with mask `i`.
    Boolean(usize),
    /// `∨_s`: one bottom below `s` tops.
    Cup(usize),
    /// `∧_s`: `s` bottoms below one top.
    Cap(usize),
}

impl fmt::Display for TargetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TargetFamily::Chain(n) => write!(f, "chain:{n}"),
            TargetFamily::Antichain(n) => write!(f, "antichain:{n}"),
            TargetFamily::Matching(s) => write!(f, "matching:{s}"),
            TargetFamily::Butterfly(r, s) => write!(f, "butterfly:{r}:{s}"),
            TargetFamily::Diamond(r) => write!(f, "diamond:{r}"),
            TargetFamily::Boolean(m) => write!(f, "boolean:{m}"),
            TargetFamily::Cup(s) => write!(f, "cup:{s}"),
            TargetFamily::Cap(s) => write!(f, "cap:{s}"),
        }
    }
}

impl FromStr for TargetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().split(':');
        let name = parts.next().unwrap_or_default();
        let params = parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::param(format!("bad parameter `{p}` in target `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let one = |family: fn(usize) -> TargetFamily| match params.as_slice() {
            [a] => Ok(family(*a)),
            _ => Err(Error::param(format!("target `{s}` takes one parameter"))),
        };
        match name {
            "chain" => one(TargetFamily::Chain),
            "antichain" => one(TargetFamily::Antichain),
            "matching" => one(TargetFamily::Matching),
            "diamond" => one(TargetFamily::Diamond),
            "boolean" => one(TargetFamily::Boolean),
            "cup" => one(TargetFamily::Cup),
            "cap" => one(TargetFamily::Cap),
            "butterfly" => match params.as_slice() {
                [r, s] => Ok(TargetFamily::Butterfly(*r, *s)),
                [] => Ok(TargetFamily::Butterfly(2, 2)),
                _ => Err(Error::param(format!("target `{s}` takes two parameters"))),
            },
            _ => Err(Error::param(format!("unknown target family `{name}`"))),
        }
    }
}

/// A finite poset given by its order relation.
///
/// `up[x]` has bit `y` set iff `x ≤ y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TargetPoset {
    size: usize,
    up: Vec<u64>,
    label: Option<TargetFamily>,
}

impl TargetPoset {
    /// Builds a poset from a full `size × size` relation matrix, checking the
    /// partial-order axioms.
    pub fn from_matrix(leq: &[Vec<bool>]) -> Result<Self> {
        let size = leq.len();
        if size == 0 || size > MAX_TARGET_SIZE {
            return Err(Error::param(format!(
                "poset size must lie in 1..={MAX_TARGET_SIZE}"
            )));
        }
        let mut up = vec![0u64; size];
        for (x, row) in leq.iter().enumerate() {
            if row.len() != size {
                return Err(Error::param("relation matrix is not square"));
            }
            for (y, &rel) in row.iter().enumerate() {
                if rel {
                    up[x] |= 1 << y;
                }
            }
        }
        let poset = TargetPoset {
            size,
            up,
            label: None,
        };
        poset.check_axioms()?;
        Ok(poset)
    }

    /// Builds a poset as the reflexive-transitive closure of `relations`
    /// (pairs `(x, y)` meaning `x ≤ y`).
    pub fn from_relations(size: usize, relations: &[(usize, usize)]) -> Result<Self> {
        if size == 0 || size > MAX_TARGET_SIZE {
            return Err(Error::param(format!(
                "poset size must lie in 1..={MAX_TARGET_SIZE}"
            )));
        }
        let mut up: Vec<u64> = (0..size).map(|x| 1u64 << x).collect();
        for &(x, y) in relations {
            if x >= size || y >= size {
                return Err(Error::param(format!("relation ({x}, {y}) out of range")));
            }
            up[x] |= 1 << y;
        }
        // Warshall closure on bit rows.
        for k in 0..size {
            for x in 0..size {
                if up[x] >> k & 1 == 1 {
                    up[x] |= up[k];
                }
            }
        }
        let poset = TargetPoset {
            size,
            up,
            label: None,
        };
        poset.check_axioms()?;
        Ok(poset)
    }

    fn check_axioms(&self) -> Result<()> {
        for x in 0..self.size {
            if !self.le(x, x) {
                return Err(Error::param(format!("relation is not reflexive at {x}")));
            }
            for y in 0..self.size {
                if x != y && self.le(x, y) && self.le(y, x) {
                    return Err(Error::param(format!(
                        "relation is not antisymmetric at ({x}, {y})"
                    )));
                }
                if self.le(x, y) {
                    // every z above y must be above x
                    if self.up[y] & !self.up[x] != 0 {
                        return Err(Error::param(format!(
                            "relation is not transitive through ({x}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn label(&self) -> Option<TargetFamily> {
        self.label
    }

    pub fn with_label(mut self, label: TargetFamily) -> Self {
        self.label = Some(label);
        self
    }

    #[inline]
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le(x, y)
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    /// Elements strictly above `x`, as a bitmask over elements.
    pub(crate) fn above_mask(&self, x: usize) -> u64 {
        self.up[x] & !(1u64 << x)
    }

    /// Elements strictly below `x`, as a bitmask over elements.
    pub(crate) fn below_mask(&self, x: usize) -> u64 {
        (0..self.size)
            .filter(|&y| self.lt(y, x))
            .fold(0, |acc, y| acc | 1 << y)
    }

    pub(crate) fn comparable_mask(&self, x: usize) -> u64 {
        self.above_mask(x) | self.below_mask(x)
    }

    /// The relation as a boolean matrix.
    pub fn matrix(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|x| (0..self.size).map(|y| self.le(x, y)).collect())
            .collect()
    }

    /// Number of comparable pairs of distinct elements.
    pub fn comparable_pairs(&self) -> usize {
        (0..self.size)
            .map(|x| self.above_mask(x).count_ones() as usize)
            .sum()
    }

    /// The order-reversed poset. Labels are mapped to the dual family name
    /// when one exists.
    pub fn dual(&self) -> TargetPoset {
        let mut up = vec![0u64; self.size];
        for (x, row) in up.iter_mut().enumerate() {
            for y in 0..self.size {
                if self.le(y, x) {
                    *row |= 1 << y;
                }
            }
        }
        let label = self.label.map(|l| match l {
            TargetFamily::Butterfly(r, s) => TargetFamily::Butterfly(s, r),
            TargetFamily::Cup(s) => TargetFamily::Cap(s),
            TargetFamily::Cap(s) => TargetFamily::Cup(s),
            other => other,
        });
        TargetPoset {
            size: self.size,
            up,
            label,
        }
    }

    /// Order isomorphism by exhaustive bijection search.
    pub fn is_isomorphic(&self, other: &TargetPoset) -> bool {
        if self.size != other.size || self.comparable_pairs() != other.comparable_pairs() {
            return false;
        }
        let sig = |p: &TargetPoset, x: usize| {
            (
                p.above_mask(x).count_ones(),
                p.below_mask(x).count_ones(),
            )
        };
        let mut map = vec![usize::MAX; self.size];
        let mut used = 0u64;
        fn go(
            a: &TargetPoset,
            b: &TargetPoset,
            x: usize,
            map: &mut [usize],
            used: &mut u64,
            sig: &dyn Fn(&TargetPoset, usize) -> (u32, u32),
        ) -> bool {
            if x == a.size {
                return true;
            }
            for y in 0..b.size {
                if *used >> y & 1 == 1 || sig(a, x) != sig(b, y) {
                    continue;
                }
                let consistent = (0..x).all(|w| {
                    a.le(w, x) == b.le(map[w], y) && a.le(x, w) == b.le(y, map[w])
                });
                if consistent {
                    map[x] = y;
                    *used |= 1 << y;
                    if go(a, b, x + 1, map, used, sig) {
                        return true;
                    }
                    *used &= !(1 << y);
                }
            }
            false
        }
        go(self, other, 0, &mut map, &mut used, &sig)
    }

    pub fn is_self_dual(&self) -> bool {
        self.is_isomorphic(&self.dual())
    }

    /// All t-chains of the poset, each listed bottom first; the list is in
    /// lexicographic order of element indices after sorting each chain by
    /// index.
    pub fn t_chains(&self, t: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        if t == 0 || t > self.size {
            return out;
        }
        let mut current = Vec::with_capacity(t);
        self.collect_chains(0, t, &mut current, &mut out);
        for chain in &mut out {
            chain.sort_by_key(|&x| self.below_mask(x).count_ones());
        }
        out
    }

    fn collect_chains(
        &self,
        start: usize,
        t: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == t {
            out.push(current.clone());
            return;
        }
        for x in start..self.size {
            if current.iter().all(|&y| self.comparable(x, y)) {
                current.push(x);
                self.collect_chains(x + 1, t, current, out);
                current.pop();
            }
        }
    }

    /// Size of a longest chain.
    pub fn height(&self) -> usize {
        let order = self.linear_extension();
        let mut longest = vec![1usize; self.size];
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[..i] {
                if self.lt(y, x) {
                    longest[x] = longest[x].max(longest[y] + 1);
                }
            }
        }
        longest.into_iter().max().unwrap_or(0)
    }

    /// Elements sorted by the number of elements below them.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&x| (self.below_mask(x).count_ones(), x));
        order
    }
}

impl fmt::Display for TargetPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label {
            Some(label) => write!(f, "{label}"),
            None => write!(f, "poset({} elements)", self.size),
        }
    }
}

/// Builds the named poset.
pub fn make_target(family: TargetFamily) -> Result<TargetPoset> {
    let positive = |v: usize, what: &str| {
        if v == 0 {
            Err(Error::param(format!("{what} must be positive in `{family}`")))
        } else {
            Ok(())
        }
    };
    let poset = match family {
        TargetFamily::Chain(n) => {
            positive(n, "length")?;
            let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            TargetPoset::from_relations(n, &rel)?
        }
        TargetFamily::Antichain(n) => {
            positive(n, "size")?;
            TargetPoset::from_relations(n, &[])?
        }
        TargetFamily::Matching(s) => {
            positive(s, "size")?;
            let rel: Vec<_> = (0..s).map(|i| (i, s + i)).collect();
            TargetPoset::from_relations(2 * s, &rel)?
        }
        TargetFamily::Butterfly(r, s) => {
            positive(r, "bottom count")?;
            positive(s, "top count")?;
            let rel: Vec<_> = (0..r)
                .flat_map(|i| (0..s).map(move |j| (i, r + j)))
                .collect();
            TargetPoset::from_relations(r + s, &rel)?
        }
        TargetFamily::Diamond(r) => {
            positive(r, "width")?;
            let top = r + 1;
            let mut rel: Vec<_> = (1..=r).flat_map(|i| [(0, i), (i, top)]).collect();
            rel.push((0, top));
            TargetPoset::from_relations(r + 2, &rel)?
        }
        TargetFamily::Boolean(m) => {
            if m > 6 {
                return Err(Error::param(format!(
                    "boolean:{m} exceeds the {MAX_TARGET_SIZE}-element target limit"
                )));
            }
            let size = 1usize << m;
            let rel: Vec<_> = (0..size)
                .flat_map(|a| (0..size).filter(move |b| a & !b == 0).map(move |b| (a, b)))
                .collect();
            TargetPoset::from_relations(size, &rel)?
        }
        TargetFamily::Cup(s) => {
            positive(s, "size")?;
            let rel: Vec<_> = (1..=s).map(|j| (0, j)).collect();
            TargetPoset::from_relations(s + 1, &rel)?
        }
        TargetFamily::Cap(s) => {
            positive(s, "size")?;
            let rel: Vec<_> = (0..s).map(|i| (i, s)).collect();
            TargetPoset::from_relations(s + 1, &rel)?
        }
    };
    Ok(poset.with_label(family))
}

/// Parses `family:params` and builds the poset.
pub fn parse_target(spec: &str) -> Result<TargetPoset> {
    make_target(spec.parse()?)
}

/// Parses a comma-separated target list such as `diamond:2,butterfly:2:2`.
pub fn parse_targets(spec: &str) -> Result<Vec<TargetPoset>> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_target)
        .collect()
}

/// Outcome of [`level_of_embedding_bound_e`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LevelBound {
    /// Largest `m` with no weak embedding into `m` consecutive levels.
    pub value: u32,
    /// True when the value holds for every host dimension, not just the probed ones.
    pub verified: bool,
    /// `(N, s)` such that the poset embeds into levels `s..=s+value` of `B_N`.
    pub witness: Option<(u32, u32)>,
}

/// Computes `e(P)` by probing hosts `B_N` with `N ≤ probe_cap`.
///
/// The smallest band width `w` admitting a weak embedding is searched for
/// `N ≤ probe_cap`; `e(P) = w - 1`. A band narrower than the height of `P`
/// can never hold a copy, so the answer is verified when `w` equals the
/// height. Otherwise larger hosts might admit narrower bands and the value
/// is flagged as heuristic.
pub fn level_of_embedding_bound_e(poset: &TargetPoset, probe_cap: u32) -> LevelBound {
    let height = poset.height() as u32;
    for width in height..=probe_cap + 1 {
        for n in 0..=probe_cap.min(31) {
            if (1u64 << n) < poset.size() as u64 || width > n + 1 {
                continue;
            }
            let host = BooleanLattice::with_cap(n, 31).expect("n ≤ 31");
            for low in 0..=(n + 1 - width) {
                let high = low + width - 1;
                let filter = |s: crate::lattice::SubsetMask| {
                    let c = s.cardinality();
                    c >= low && c <= high
                };
                if find_copy(&host, poset, EmbeddingMode::Weak, Some(&filter)).is_some() {
                    return LevelBound {
                        value: width - 1,
                        verified: width == height,
                        witness: Some((n, low)),
                    };
                }
            }
        }
    }
    LevelBound {
        value: probe_cap + 1,
        verified: false,
        witness: None,
    }
}
