//! Colorings of t-chains and Ramsey problem instances.

use std::fmt;

use num_traits::ToPrimitive;

use crate::embedding::EmbeddingMode;
use crate::error::{Error, Result};
use crate::lattice::{chain_count_formula, ChainTable};
use crate::poset::TargetPoset;

/// Colors `1..=k` assigned to every t-chain of `B_{host_n}`, indexed by
/// canonical chain id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainColoring {
    host_n: u32,
    t: usize,
    k: u8,
    colors: Vec<u8>,
}

impl ChainColoring {
    pub fn new(host_n: u32, t: usize, k: u8, colors: Vec<u8>) -> Result<Self> {
        let expected = expected_len(host_n, t)?;
        if k == 0 {
            return Err(Error::param("a coloring needs at least one color"));
        }
        if colors.len() != expected {
            return Err(Error::param(format!(
                "coloring of B_{host_n} with t={t} needs {expected} entries, got {}",
                colors.len()
            )));
        }
        if let Some((id, c)) = colors.iter().enumerate().find(|(_, &c)| c == 0 || c > k) {
            return Err(Error::param(format!(
                "chain {id} has color {c}, outside 1..={k}"
            )));
        }
        Ok(ChainColoring {
            host_n,
            t,
            k,
            colors,
        })
    }

    /// Every chain gets `color`.
    pub fn uniform(host_n: u32, t: usize, k: u8, color: u8) -> Result<Self> {
        let len = expected_len(host_n, t)?;
        ChainColoring::new(host_n, t, k, vec![color; len])
    }

    /// Colors each chain by a function of its masks (bottom first).
    pub fn from_fn(host_n: u32, t: usize, k: u8, f: impl Fn(&[u32]) -> u8) -> Result<Self> {
        let table = ChainTable::new(host_n, t)?;
        let mut buf = Vec::with_capacity(t);
        let colors = (0..table.len())
            .map(|id| {
                table.masks_into(id, &mut buf);
                f(&buf)
            })
            .collect();
        ChainColoring::new(host_n, t, k, colors)
    }

    /// Element coloring (`t = 1`) from a function of the mask.
    pub fn from_element_fn(host_n: u32, k: u8, f: impl Fn(u32) -> u8) -> Result<Self> {
        ChainColoring::from_fn(host_n, 1, k, |s| f(s[0]))
    }

    pub fn host_n(&self) -> u32 {
        self.host_n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn color_of(&self, id: usize) -> u8 {
        self.colors[id]
    }

    /// Replaces the color of chain `id`.
    pub fn set_color(&mut self, id: usize, color: u8) -> Result<()> {
        if color == 0 || color > self.k {
            return Err(Error::param(format!("color {color} outside 1..={}", self.k)));
        }
        let slot = self
            .colors
            .get_mut(id)
            .ok_or_else(|| Error::param(format!("chain id {id} out of range")))?;
        *slot = color;
        Ok(())
    }

    /// Number of chains of each color, indexed `0..k` for colors `1..=k`.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0usize; self.k as usize];
        for &c in &self.colors {
            h[c as usize - 1] += 1;
        }
        h
    }
}

fn expected_len(host_n: u32, t: usize) -> Result<usize> {
    if t == 0 {
        return Err(Error::param("chain size t must be positive"));
    }
    chain_count_formula(host_n, t as u32)?
        .to_usize()
        .ok_or_else(|| Error::Infeasible(format!("too many {t}-chains in B_{host_n}")))
}

/// Host family of a Ramsey instance.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HostFamily {
    /// Boolean lattices `B_1 ⊂ B_2 ⊂ ...`.
    Boolean,
    /// Chains `C_1 ⊂ C_2 ⊂ ...`; only meaningful for `t ≥ 2`.
    Chain,
}

/// A full Ramsey problem: color t-chains with `k` colors and look for a
/// monochromatic copy of `targets[i]` in color `i + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RamseyInstance {
    t: usize,
    targets: Vec<TargetPoset>,
    mode: EmbeddingMode,
    family: HostFamily,
}

impl RamseyInstance {
    pub fn new(t: usize, targets: Vec<TargetPoset>, mode: EmbeddingMode) -> Result<Self> {
        Self::with_family(t, targets, mode, HostFamily::Boolean)
    }

    pub fn with_family(
        t: usize,
        targets: Vec<TargetPoset>,
        mode: EmbeddingMode,
        family: HostFamily,
    ) -> Result<Self> {
        if t == 0 {
            return Err(Error::param("chain size t must be positive"));
        }
        if targets.is_empty() || targets.len() > u8::MAX as usize {
            return Err(Error::param("need between 1 and 255 targets"));
        }
        if family == HostFamily::Chain && t < 2 {
            return Err(Error::param("chain hosts require t ≥ 2"));
        }
        Ok(RamseyInstance {
            t,
            targets,
            mode,
            family,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> u8 {
        self.targets.len() as u8
    }

    pub fn targets(&self) -> &[TargetPoset] {
        &self.targets
    }

    pub fn mode(&self) -> EmbeddingMode {
        self.mode
    }

    pub fn family(&self) -> HostFamily {
        self.family
    }

    /// Comma-separated family names, e.g. `diamond:2,diamond:2`.
    pub fn targets_spec(&self) -> Result<String> {
        self.targets
            .iter()
            .map(|p| {
                p.label()
                    .map(|l| l.to_string())
                    .ok_or_else(|| Error::param("unlabelled target posets cannot be serialized"))
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| v.join(","))
    }
}

impl fmt::Display for RamseyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.targets.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "{} k={} t={} targets=({})",
            self.mode,
            self.k(),
            self.t,
            names.join(", ")
        )
    }
}
