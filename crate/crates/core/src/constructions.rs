//! Explicit lower-bound colorings and the biased random sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::LLLParameters;
use crate::coloring::ChainColoring;
use crate::error::{Error, Result};

/// Colors the levels of `B_{Σe_i − 1}` in consecutive blocks: the first
/// `e_1` levels get color 1, the next `e_2` color 2, and so on.
///
/// This only witnesses the `Σ e(P_i)` part of the lower bound; whether each
/// `P_i` fits into the host at all is a separate question.
pub fn level_block_coloring(e: &[u32]) -> Result<ChainColoring> {
    if e.is_empty() || e.len() > u8::MAX as usize {
        return Err(Error::param("need between 1 and 255 blocks"));
    }
    if e.contains(&0) {
        return Err(Error::param("block sizes must be positive"));
    }
    let levels: u32 = e.iter().sum();
    let host_n = levels - 1;
    let mut color_of_level = Vec::with_capacity(levels as usize);
    for (i, &len) in e.iter().enumerate() {
        color_of_level.extend(std::iter::repeat_n(i as u8 + 1, len as usize));
    }
    ChainColoring::from_element_fn(host_n, e.len() as u8, |s| {
        color_of_level[s.count_ones() as usize]
    })
}

/// `B_{k+1}` with level `i` colored `i` for `1 ≤ i ≤ k`, the empty set
/// colored 1 and the full set colored `k`. Every class lies in two
/// consecutive levels whose only comparable pairs share the extreme set, so
/// no class holds two disjoint comparable pairs.
pub fn matching_lower_coloring(k: u8, s: u32) -> Result<ChainColoring> {
    if k < 2 || s < 2 {
        return Err(Error::param(format!("need k ≥ 2 and s ≥ 2, got k={k}, s={s}")));
    }
    let n = u32::from(k) + 1;
    ChainColoring::from_element_fn(n, k, |m| {
        let level = m.count_ones();
        if level == 0 {
            1
        } else if level == n {
            k
        } else {
            level as u8
        }
    })
}

/// `B_{2k−1}` with levels `2i−2` and `2i−1` colored `i`.
pub fn diamond_lower_coloring(k: u8, r: u32) -> Result<ChainColoring> {
    if k < 1 || r < 2 {
        return Err(Error::param(format!("need k ≥ 1 and r ≥ 2, got k={k}, r={r}")));
    }
    let n = 2 * u32::from(k) - 1;
    ChainColoring::from_element_fn(n, k, |m| (m.count_ones() / 2) as u8 + 1)
}

/// Colors every t-chain of `B_{host_n}` independently, color `i` with
/// probability `p_i`, where `p = ln|B_{host_n}| / (m_k/(n_k+td+2))`,
/// `p_i = p/(k−1)` for `i < k` and `p_k = 1 − p`.
pub fn lll_random_coloring(params: &LLLParameters, host_n: u32, seed: u64) -> Result<ChainColoring> {
    if host_n >= 64 {
        return Err(Error::param("host too large"));
    }
    let probs = params.probabilities(1u64 << host_n)?;
    let k = params.k() as u8;
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cumulative.push(acc);
    }
    let t = params.t as usize;
    let len = crate::lattice::ChainTable::new(host_n, t)?.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let colors = (0..len)
        .map(|_| {
            let u: f64 = rng.random();
            cumulative
                .iter()
                .position(|&c| u < c)
                .map_or(k, |i| i as u8 + 1)
        })
        .collect();
    ChainColoring::new(host_n, t, k, colors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_shapes() {
        let c = level_block_coloring(&[1, 1]).unwrap();
        assert_eq!((c.host_n(), c.colors()), (1, &[1u8, 2][..]));
        let c = level_block_coloring(&[1, 1, 1]).unwrap();
        assert_eq!(c.colors(), &[1, 2, 2, 3]);
        let c = level_block_coloring(&[2, 2]).unwrap();
        assert_eq!(c.host_n(), 3);
        assert_eq!(c.colors(), &[1, 1, 1, 2, 1, 2, 2, 2]);
        assert!(level_block_coloring(&[1, 0]).is_err());
    }

    #[test]
    fn matching_shape() {
        let c = matching_lower_coloring(2, 2).unwrap();
        assert_eq!(c.colors(), &[1, 1, 1, 2, 1, 2, 2, 2]);
        assert_eq!(c, matching_lower_coloring(2, 3).unwrap());
        assert!(matching_lower_coloring(1, 2).is_err());
    }

    #[test]
    fn diamond_shape() {
        let c = diamond_lower_coloring(3, 2).unwrap();
        assert_eq!(c.host_n(), 5);
        assert!(c.histogram().iter().all(|&h| h > 0));
        assert!(diamond_lower_coloring(2, 1).is_err());
    }

    #[test]
    fn sampler_is_seeded() {
        let targets = crate::poset::parse_targets("chain:3,chain:5").unwrap();
        let p = LLLParameters::new(2, &targets).unwrap();
        let a = lll_random_coloring(&p, 2, 7).unwrap();
        assert_eq!(a, lll_random_coloring(&p, 2, 7).unwrap());
        assert_eq!(a.t(), 2);
        assert!(lll_random_coloring(&p, 3, 7).is_err());
    }
}
