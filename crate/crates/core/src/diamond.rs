//! Finds a monochromatic induced `r`-diamond in any `k`-coloring of
//! `B_N`, `N = 3kr − 2r − k + 1`, by growing a nested sequence of sets.
//!
//! `X_0 = ∅`. For `i = 1..2k−1` the one-element extensions of `X_{i−1}`
//! number at least `k(r−1)+1`, so some color has `r` of them; these are
//! `Y_i^1..Y_i^r` and `X_i` is their union. Among the `2k+1` colors
//! `c_0 = χ(X_0)`, `c_i = χ(Y_i^j)`, `c_{2k} = χ(X_{2k−1})` three agree, and
//! those three levels give the diamond.

use crate::coloring::ChainColoring;
use crate::embedding::{is_embedding, Embedding, EmbeddingMode};
use crate::error::{Error, Result};
use crate::lattice::SubsetMask;
use crate::poset::{make_target, TargetFamily};

/// Intermediate sets of one extraction, for independent checking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionTrace {
    /// `X_0..X_{2k−1}`.
    pub x: Vec<u32>,
    /// `y[i−1] = [Y_i^1..Y_i^r]` for `i = 1..2k−1`.
    pub y: Vec<Vec<u32>>,
    /// `c_0..c_{2k}`.
    pub colors: Vec<u8>,
    /// Lexicographically least `i_1 < i_2 < i_3` with equal colors.
    pub indices: (usize, usize, usize),
}

#[derive(Clone, Debug)]
pub struct DiamondExtraction {
    pub embedding: Embedding,
    pub color: u8,
    pub trace: ExtractionTrace,
}

/// `3kr − 2r − k + 1`.
pub fn extraction_dimension(k: u32, r: u32) -> u32 {
    3 * k * r + 1 - 2 * r - k
}

/// Runs the construction. With `strict` the host must have exactly the
/// dimension above; otherwise any larger host is accepted too.
pub fn extract_monochromatic_diamond(
    k: u8,
    r: u32,
    coloring: &ChainColoring,
    strict: bool,
) -> Result<DiamondExtraction> {
    if k < 1 || r < 2 {
        return Err(Error::param(format!("need k ≥ 1 and r ≥ 2, got k={k}, r={r}")));
    }
    if coloring.t() != 1 || coloring.k() != k {
        return Err(Error::param(format!(
            "need an element coloring with {k} colors, got t={}, k={}",
            coloring.t(),
            coloring.k()
        )));
    }
    let k32 = u32::from(k);
    let need = extraction_dimension(k32, r);
    let n = coloring.host_n();
    if (strict && n != need) || n < need {
        return Err(Error::param(format!(
            "host B_{n} does not match the required dimension {need}"
        )));
    }
    let chi = |m: u32| coloring.color_of(m as usize);
    let steps = 2 * k32 as usize - 1;
    let mut xs = vec![0u32];
    let mut ys: Vec<Vec<u32>> = Vec::with_capacity(steps);
    let mut cs = vec![chi(0)];
    for i in 1..=steps as u32 {
        let prev = *xs.last().expect("X_0 exists");
        let pool: Vec<u32> = (0..n).filter(|b| prev >> b & 1 == 0).map(|b| prev | 1 << b).collect();
        assert!(
            pool.len() as u32 > k32 * (r - 1),
            "pigeonhole pool too small at step {i}"
        );
        let color = (1..=k)
            .find(|&c| pool.iter().filter(|&&m| chi(m) == c).count() >= r as usize)
            .expect("pigeonhole gives r sets of one color");
        let chosen: Vec<u32> = pool.iter().copied().filter(|&m| chi(m) == color).take(r as usize).collect();
        let next = chosen.iter().fold(0, |acc, &m| acc | m);
        // sizes, one new element each, shared color
        assert_eq!(next.count_ones(), i * r);
        for &y in &chosen {
            assert_eq!(y.count_ones(), (i - 1) * r + 1);
            assert_eq!((y & !prev).count_ones(), 1);
            assert_eq!(y & prev, prev);
            assert_eq!(chi(y), color);
        }
        xs.push(next);
        ys.push(chosen);
        cs.push(color);
    }
    let top = *xs.last().expect("non-empty");
    cs.push(chi(top));
    let slots = cs.len();
    let indices = (0..slots)
        .flat_map(|a| (a + 1..slots).flat_map(move |b| (b + 1..slots).map(move |c| (a, b, c))))
        .find(|&(a, b, c)| cs[a] == cs[b] && cs[b] == cs[c])
        .expect("2k+1 slots in k colors repeat a color three times");
    let (i1, i2, i3) = indices;
    let bottom = if i1 == 0 { xs[0] } else { ys[i1 - 1][0] };
    let peak = if i3 == slots - 1 { top } else { ys[i3 - 1][0] };
    let middles = &ys[i2 - 1];
    // nesting bottom ⊆ middles ⊆ peak ⊆ top
    for &m in middles {
        assert_eq!(bottom & m, bottom);
        assert_eq!(m & peak, m);
    }
    assert_eq!(peak & top, peak);
    let target = make_target(TargetFamily::Diamond(r as usize))?;
    let mut images = vec![SubsetMask::from_raw(bottom, n)];
    images.extend(middles.iter().map(|&m| SubsetMask::from_raw(m, n)));
    images.push(SubsetMask::from_raw(peak, n));
    let embedding = Embedding {
        target,
        images,
        mode: EmbeddingMode::Strong,
    };
    Ok(DiamondExtraction {
        embedding,
        color: cs[i1],
        trace: ExtractionTrace {
            x: xs,
            y: ys,
            colors: cs,
            indices,
        },
    })
}

/// Independent check: `embedding` is a strong copy of an `r`-diamond in the
/// host of `coloring` and every image has color `color`.
pub fn verify_extraction(embedding: &Embedding, coloring: &ChainColoring, color: u8) -> bool {
    let size = embedding.images.len();
    if size < 4 || coloring.t() != 1 {
        return false;
    }
    let Ok(diamond) = make_target(TargetFamily::Diamond(size - 2)) else {
        return false;
    };
    let n = coloring.host_n();
    embedding.target.is_isomorphic(&diamond)
        && embedding.images.iter().all(|s| s.n() == n && u64::from(s.bits()) >> n == 0)
        && is_embedding(&embedding.target, &embedding.images, EmbeddingMode::Strong)
        && embedding
            .images
            .iter()
            .all(|s| coloring.color_of(s.bits() as usize) == color)
}
