use num_bigint::BigUint;
use num_rational::BigRational;
use poset_ramsey::bounds::{diamond_bounds, strong_lower_bound, halving_recurrence, StrongLowerBoundInput};
use poset_ramsey::certificate::{load_certificate_str, Certificate, CertificateCheck};
use poset_ramsey::coloring::{ChainColoring, RamseyInstance};
use poset_ramsey::constructions::{diamond_lower_coloring, level_block_coloring, lll_random_coloring, matching_lower_coloring};
use poset_ramsey::diamond::{extract_monochromatic_diamond, extraction_dimension, verify_extraction};
use poset_ramsey::embedding::{
    count_antichains, enumerate_strong_boolean_embeddings, find_copy, is_embedding, monochromatic_copy_exists,
    EmbeddingMode,
};
use poset_ramsey::lattice::{chain_count_formula, enumerate_t_chains, BooleanLattice, SubsetMask};
use poset_ramsey::lubell::{is_p_free, lubell, matching_bracket, matching_excluded, max_lubell_p_free, trivial_excluded, yblm_check};
use poset_ramsey::poset::{make_target, parse_target, parse_targets, TargetFamily, TargetPoset};
use poset_ramsey::search::{is_ramsey_at, verify_coloring, RamseyVerdict, SearchOptions};
use proptest::prelude::*;

fn masks(n: u32, bits: &[u32]) -> Vec<SubsetMask> {
    bits.iter().map(|&b| SubsetMask::new(b, n).unwrap()).collect()
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn chain_enumeration_is_sorted_and_counted() {
    for n in 0..=6 {
        let host = BooleanLattice::new(n).unwrap();
        for t in 1..=n as usize + 1 {
            let chains = enumerate_t_chains(&host, t).unwrap();
            assert!(chains.windows(2).all(|w| w[0].id < w[1].id));
            assert_eq!(BigUint::from(chains.len()), chain_count_formula(n, t as u32).unwrap());
        }
        assert_eq!(chain_count_formula(n, n + 2).unwrap(), BigUint::from(0u32));
    }
}

fn sample_targets() -> Vec<TargetPoset> {
    [
        "chain:1", "chain:3", "antichain:2", "antichain:3", "matching:2", "butterfly", "diamond:2", "diamond:3",
        "boolean:2", "cup:2", "cap:3",
    ]
    .iter()
    .map(|s| parse_target(s).unwrap())
    .collect()
}

#[test]
fn targets_are_partial_orders() {
    for p in sample_targets() {
        let n = p.size();
        for x in 0..n {
            assert!(p.le(x, x));
            for y in 0..n {
                if x != y {
                    assert!(!(p.le(x, y) && p.le(y, x)), "{p}");
                }
                for z in 0..n {
                    if p.le(x, y) && p.le(y, z) {
                        assert!(p.le(x, z), "{p}");
                    }
                }
            }
        }
    }
}

fn brute_isomorphic(a: &TargetPoset, b: &TargetPoset) -> bool {
    fn go(a: &TargetPoset, b: &TargetPoset, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = map.len();
        if i == a.size() {
            return (0..i).all(|x| (0..i).all(|y| a.le(x, y) == b.le(map[x], map[y])));
        }
        for j in 0..b.size() {
            if !used[j] {
                used[j] = true;
                map.push(j);
                if go(a, b, map, used) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    a.size() == b.size() && go(a, b, &mut Vec::new(), &mut vec![false; b.size()])
}

#[test]
fn diamond_two_is_boolean_two() {
    let d = make_target(TargetFamily::Diamond(2)).unwrap();
    let b = make_target(TargetFamily::Boolean(2)).unwrap();
    assert!(brute_isomorphic(&d, &b));
    assert!(d.is_isomorphic(&b));
    let butterfly = parse_target("butterfly").unwrap();
    assert!(!brute_isomorphic(&d, &butterfly));
}

/// All injective maps `P → B_n`, checked with the direct predicate.
fn brute_has_copy(p: &TargetPoset, n: u32, mode: EmbeddingMode) -> bool {
    fn go(p: &TargetPoset, n: u32, mode: EmbeddingMode, img: &mut Vec<SubsetMask>) -> bool {
        if img.len() == p.size() {
            return is_embedding(p, img, mode);
        }
        for b in 0..1u32 << n {
            let s = SubsetMask::new(b, n).unwrap();
            if !img.contains(&s) {
                img.push(s);
                if go(p, n, mode, img) {
                    return true;
                }
                img.pop();
            }
        }
        false
    }
    go(p, n, mode, &mut Vec::new())
}

#[test]
fn find_copy_agrees_with_brute_force() {
    for p in sample_targets().into_iter().filter(|p| p.size() <= 4) {
        for n in 0..=4 {
            let host = BooleanLattice::new(n).unwrap();
            for mode in [EmbeddingMode::Weak, EmbeddingMode::Strong] {
                let found = find_copy(&host, &p, mode, None);
                assert_eq!(found.is_some(), brute_has_copy(&p, n, mode), "{p} in B_{n} {mode}");
                if let Some(e) = found {
                    assert!(e.is_valid());
                    assert!(is_embedding(&p, &e.images, EmbeddingMode::Weak));
                }
            }
        }
    }
}

#[test]
fn strong_copies_of_b1_are_two_chains() {
    for n in 1..=5 {
        assert_eq!(enumerate_strong_boolean_embeddings(1, n).unwrap(), chain_count_formula(n, 2).unwrap());
    }
    let counts: Vec<BigUint> = (0..=5).map(|m| count_antichains(m).unwrap()).collect();
    assert!(counts.windows(2).all(|w| w[0] < w[1]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn copy_existence_is_monotone_in_the_class(colors in prop::collection::vec(1u8..=2, 16), extra in 0usize..16) {
        let host = BooleanLattice::new(4).unwrap();
        let c = ChainColoring::new(4, 1, 2, colors).unwrap();
        for p in ["diamond:2", "matching:2", "chain:3", "butterfly"] {
            let p = parse_target(p).unwrap();
            for mode in [EmbeddingMode::Weak, EmbeddingMode::Strong] {
                let before = monochromatic_copy_exists(&host, &p, mode, &c, 1).unwrap();
                let mut bigger = c.clone();
                bigger.set_color(extra, 1).unwrap();
                let after = monochromatic_copy_exists(&host, &p, mode, &bigger, 1).unwrap();
                prop_assert!(!before || after);
            }
        }
    }

    #[test]
    fn symmetric_colorings_share_verdicts(
        colors in prop::collection::vec(1u8..=2, 16),
        perm in Just((0..4u32).collect::<Vec<_>>()).prop_shuffle(),
        reverse in any::<bool>(),
    ) {
        let inst = RamseyInstance::new(1, parse_targets("diamond:2,matching:2").unwrap(), EmbeddingMode::Strong).unwrap();
        let c = ChainColoring::new(4, 1, 2, colors.clone()).unwrap();
        let map = |m: u32| {
            let mut out = 0;
            for (i, &p) in perm.iter().enumerate() {
                if m >> i & 1 == 1 {
                    out |= 1 << p;
                }
            }
            out
        };
        let g = ChainColoring::from_element_fn(4, 2, |m| colors[map(m) as usize]).unwrap();
        prop_assert_eq!(
            verify_coloring(&inst, 4, &c).unwrap().is_good(),
            verify_coloring(&inst, 4, &g).unwrap().is_good()
        );
        if reverse {
            // complement swaps each target with its dual; both targets here are self-dual
            let r = ChainColoring::from_element_fn(4, 2, |m| colors[(!m & 15) as usize]).unwrap();
            prop_assert_eq!(
                verify_coloring(&inst, 4, &c).unwrap().is_good(),
                verify_coloring(&inst, 4, &r).unwrap().is_good()
            );
        }
    }

    #[test]
    fn lubell_is_additive(a in prop::collection::btree_set(0u32..64, 0..20), b in prop::collection::btree_set(0u32..64, 0..20)) {
        let b: Vec<u32> = b.difference(&a).copied().collect();
        let a: Vec<u32> = a.into_iter().collect();
        let both: Vec<u32> = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(
            lubell(6, &masks(6, &both)).unwrap(),
            lubell(6, &masks(6, &a)).unwrap() + lubell(6, &masks(6, &b)).unwrap()
        );
    }

    #[test]
    fn yblm_on_random_antichains(n in 1u32..=8, seeds in prop::collection::vec(any::<u32>(), 1..40)) {
        let mut family: Vec<u32> = Vec::new();
        for s in seeds {
            let m = s & ((1u32 << n) - 1);
            if family.iter().all(|&f| f & m != f && f & m != m) {
                family.push(m);
            }
        }
        let fam = masks(n, &family);
        let check = yblm_check(n, &fam).unwrap();
        prop_assert!(check.is_antichain);
        prop_assert!(check.holds());
        if check.value == BigRational::from_integer(1.into()) {
            let level = fam[0].cardinality();
            prop_assert!(fam.iter().all(|s| s.cardinality() == level));
        }
    }

    #[test]
    fn strong_lower_bound_is_monotone(t in 2u32..=3, base in prop::collection::vec(2u32..=5, 3..=4), bump in 0usize..4) {
        let mut dims = base.clone();
        dims.sort();
        let before = strong_lower_bound(&StrongLowerBoundInput::new(t, dims.clone()).unwrap()).unwrap();
        let mut raised = dims.clone();
        let i = bump % raised.len();
        raised[i] += 1;
        raised.sort();
        let after = strong_lower_bound(&StrongLowerBoundInput::new(t, raised).unwrap()).unwrap();
        prop_assert!(after.value.hi() >= before.value.lo());
        let mut more = dims.clone();
        more.push(*dims.last().unwrap());
        let wider = strong_lower_bound(&StrongLowerBoundInput::new(t, more).unwrap()).unwrap();
        prop_assert!(wider.value.hi() >= before.value.lo());
    }

    #[test]
    fn extraction_holds_on_random_colorings(k in 1u8..=3, r in 2u32..=3, colors in prop::collection::vec(any::<u8>(), 1 << 15)) {
        let n = extraction_dimension(u32::from(k), r);
        prop_assume!(n <= 15);
        let c = ChainColoring::from_element_fn(n, k, |m| colors[m as usize] % k + 1).unwrap();
        let out = extract_monochromatic_diamond(k, r, &c, true).unwrap();
        prop_assert!(verify_extraction(&out.embedding, &c, out.color));
        let tr = &out.trace;
        for (i, ys) in tr.y.iter().enumerate() {
            let i = i as u32 + 1;
            prop_assert_eq!(tr.x[i as usize].count_ones(), i * r);
            for &y in ys {
                prop_assert_eq!(y.count_ones(), (i - 1) * r + 1);
                prop_assert_eq!((y & !tr.x[i as usize - 1]).count_ones(), 1);
            }
        }
    }
}

#[test]
fn diamond_bounds_are_ordered() {
    for k in 1..=100u64 {
        for r in 2..=100u64 {
            let (lo, hi) = diamond_bounds(k, r).unwrap();
            assert!(hi >= lo);
        }
    }
}

#[test]
fn halving_recurrence_is_reproducible() {
    let base: std::collections::BTreeMap<u32, BigUint> =
        [(3, 21u32), (4, 48)].into_iter().map(|(k, v)| (k, BigUint::from(v))).collect();
    let a = halving_recurrence(7, 3, &base).unwrap();
    assert_eq!(a, halving_recurrence(7, 3, &base).unwrap());
    assert_eq!(a, BigUint::from((21u32 - 2) * 48 + 21));
}

#[test]
fn generators_are_good() {
    for k in 1..=4u8 {
        let e: Vec<u32> = (0..k).map(|i| u32::from(i % 2) + 1).collect();
        let c = level_block_coloring(&e).unwrap();
        let targets: Vec<TargetPoset> = e.iter().map(|&w| make_target(TargetFamily::Chain(w as usize + 1)).unwrap()).collect();
        let inst = RamseyInstance::new(1, targets, EmbeddingMode::Weak).unwrap();
        assert!(verify_coloring(&inst, c.host_n(), &c).unwrap().is_good(), "level block {e:?}");
    }
    for k in 2..=5u8 {
        for s in 2..=3u32 {
            let c = matching_lower_coloring(k, s).unwrap();
            let inst = RamseyInstance::new(1, vec![make_target(TargetFamily::Matching(s as usize)).unwrap(); k as usize], EmbeddingMode::Weak).unwrap();
            assert!(verify_coloring(&inst, k as u32 + 1, &c).unwrap().is_good());
            for level in 1..=u32::from(k) {
                let class: Vec<u32> = (0..1u32 << (k + 1)).filter(|&m| m.count_ones() == level).collect();
                assert!(class.iter().all(|&m| c.color_of(m as usize) == level as u8));
            }
        }
    }
    for k in 1..=4u8 {
        for r in 2..=3u32 {
            let c = diamond_lower_coloring(k, r).unwrap();
            assert!(c.histogram().iter().all(|&h| h > 0));
            assert_eq!(c.histogram().len(), k as usize);
            let inst = RamseyInstance::new(1, vec![make_target(TargetFamily::Diamond(r as usize)).unwrap(); k as usize], EmbeddingMode::Strong).unwrap();
            assert!(verify_coloring(&inst, 2 * k as u32 - 1, &c).unwrap().is_good());
        }
    }
}

#[test]
fn sampler_frequencies_match() {
    let targets = parse_targets("chain:3,chain:5").unwrap();
    let p = poset_ramsey::bounds::LLLParameters::new(2, &targets).unwrap();
    let probs = p.probabilities(4).unwrap();
    let mut hits = [0u64; 2];
    let mut draws = 0u64;
    let mut seed = 0;
    while draws < 100_000 {
        let c = lll_random_coloring(&p, 2, seed).unwrap();
        for &x in c.colors() {
            hits[x as usize - 1] += 1;
        }
        draws += c.colors().len() as u64;
        seed += 1;
    }
    for (i, &h) in hits.iter().enumerate() {
        let p = probs[i];
        let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
        assert!((h as f64 - draws as f64 * p).abs() <= 3.0 * sigma, "color {} {h} of {draws}, p={p}", i + 1);
    }
}

/// Every subfamily of `B_n \ excluded`, maximized directly.
fn brute_max_lubell(n: u32, p: &TargetPoset, excluded: &[SubsetMask]) -> BigRational {
    let pool: Vec<SubsetMask> = BooleanLattice::new(n).unwrap().elements().filter(|s| !excluded.contains(s)).collect();
    let mut best = BigRational::from_integer(0.into());
    for pick in 0u64..1 << pool.len() {
        let fam: Vec<SubsetMask> = (0..pool.len()).filter(|i| pick >> i & 1 == 1).map(|i| pool[i]).collect();
        let v = lubell(n, &fam).unwrap();
        if v > best && is_p_free(n, p, &fam).unwrap() {
            best = v;
        }
    }
    best
}

#[test]
fn branch_and_bound_matches_brute_force() {
    for n in 1..=4u32 {
        let excluded = trivial_excluded(n);
        for spec in ["matching:2", "matching:3", "chain:2", "chain:3"] {
            let p = parse_target(spec).unwrap();
            let got = max_lubell_p_free(n, &p, &excluded, None).unwrap();
            assert!(got.complete);
            assert_eq!(got.value, brute_max_lubell(n, &p, &excluded), "{spec} N={n}");
            assert!(is_p_free(n, &p, &got.witness).unwrap());
        }
    }
}

#[test]
fn matching_maxima_within_bracket() {
    for s in [3u32, 4] {
        let p = make_target(TargetFamily::Matching(s as usize)).unwrap();
        let got = max_lubell_p_free(5, &p, &matching_excluded(5), None).unwrap();
        let (lo, hi) = matching_bracket(s, 5).unwrap();
        assert!(got.complete);
        assert!(lo <= got.value && got.value <= hi, "s={s}: {} not in [{lo}, {hi}]", got.value);
    }
    let m2 = make_target(TargetFamily::Matching(2)).unwrap();
    let got = max_lubell_p_free(5, &m2, &trivial_excluded(5), None).unwrap();
    assert_eq!(got.value, rat(6, 5));
    assert!(is_p_free(5, &m2, &got.witness).unwrap());
}

/// Small random instances: emitted certificates re-verify, symmetric and
/// plain search agree, and the verdict is monotone in the host.
#[test]
fn search_self_consistency() {
    let pool = ["chain:2", "chain:3", "antichain:2", "matching:2", "diamond:2", "cup:2", "cap:2", "butterfly"];
    let mut instances = 0;
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i..] {
            for mode in [EmbeddingMode::Weak, EmbeddingMode::Strong] {
                let inst = RamseyInstance::new(1, parse_targets(&format!("{a},{b}")).unwrap(), mode).unwrap();
                let mut was_ramsey = false;
                for n in 0..=3 {
                    let sym = is_ramsey_at(&inst, n, &SearchOptions::default()).unwrap();
                    let plain = is_ramsey_at(&inst, n, &SearchOptions::plain()).unwrap();
                    assert_eq!(sym.is_ramsey(), plain.is_ramsey(), "{a},{b} {mode} B_{n}");
                    assert!(!was_ramsey || sym.is_ramsey(), "{a},{b} {mode} lost ramsey at B_{n}");
                    was_ramsey = sym.is_ramsey();
                    match sym {
                        RamseyVerdict::NotRamsey(c, _) => {
                            let cert = Certificate::good_coloring(inst.clone(), c);
                            let text = cert.to_text().unwrap();
                            assert_eq!(load_certificate_str(&text).unwrap().check().unwrap(), CertificateCheck::Verified);
                        }
                        RamseyVerdict::Ramsey(stats) => {
                            let cert = Certificate::exhaustion(inst.clone(), n, &stats);
                            assert_eq!(cert.check().unwrap(), CertificateCheck::Verified);
                        }
                        RamseyVerdict::Inconclusive(_) => unreachable!(),
                    }
                    instances += 1;
                }
            }
        }
    }
    assert!(instances >= 100);
}
