//! Closed-form bound calculators: the local-lemma threshold, the strong
//! Boolean lower bound, the `c_t` ratio, the `B_m` recurrences and the
//! diamond bounds.
//!
//! Anything involving `ln`, `e` or `log2` is evaluated with [`Interval`]s and
//! only reported as holding or failing once the enclosure clears the
//! threshold.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::embedding::{embedding_count_upper_bound, enumerate_strong_boolean_embeddings, strong_embedding_count_feasible};
use crate::error::{Error, Result};
use crate::interval::{certify_less, e_interval, factorial, ln_interval, log2_interval, Comparison, Interval, MAX_PRECISION};
use crate::lattice::{binomial, chain_count_formula};
use crate::poset::TargetPoset;

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn urat(n: &BigUint) -> BigRational {
    rat(BigInt::from(n.clone()))
}

/// Parameters of the local-lemma coloring for targets `P_1..P_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LLLParameters {
    pub t: u64,
    /// `n_i = |P_i|`.
    pub sizes: Vec<u64>,
    /// `m_i`: number of t-chains of `P_i`.
    pub chains: Vec<u64>,
    /// `m = min(m_1..m_{k-1})`.
    pub m: u64,
    /// `d = C(n_k, t) − m_k`.
    pub d: BigUint,
    /// `a = max_{i<k} C(C(n_i, t), m_i)`.
    pub a: BigUint,
}

impl LLLParameters {
    /// Validates the hypotheses from the raw counts.
    pub fn from_counts(t: u64, sizes: Vec<u64>, chains: Vec<u64>) -> Result<Self> {
        let k = sizes.len();
        if k < 2 || chains.len() != k {
            return Err(Error::param("need k ≥ 2 targets with one chain count each"));
        }
        if t < 2 || t > sizes[0] {
            return Err(Error::param(format!("need 2 ≤ t ≤ n_1, got t={t}, n_1={}", sizes[0])));
        }
        if sizes.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("target sizes must be non-decreasing"));
        }
        if sizes[k - 1] < 3 {
            return Err(Error::param("need n_k ≥ 3"));
        }
        for (i, (&n, &mi)) in sizes.iter().zip(&chains).enumerate() {
            if BigUint::from(mi) > binomial(n, t) {
                return Err(Error::param(format!(
                    "target {} cannot have {mi} {t}-chains on {n} elements",
                    i + 1
                )));
            }
        }
        let m = *chains[..k - 1].iter().min().expect("k ≥ 2");
        if m == 0 {
            return Err(Error::param("need m = min(m_1..m_{k-1}) ≥ 1"));
        }
        let d = binomial(sizes[k - 1], t) - chains[k - 1];
        let a = (0..k - 1)
            .map(|i| binomial_big(&binomial(sizes[i], t), chains[i]))
            .max()
            .expect("k ≥ 2");
        Ok(LLLParameters {
            t,
            sizes,
            chains,
            m,
            d,
            a,
        })
    }

    /// Derives the counts from the posets and checks that every element
    /// lies in some t-chain.
    pub fn new(t: usize, targets: &[TargetPoset]) -> Result<Self> {
        let mut sizes = Vec::new();
        let mut chains = Vec::new();
        for (i, p) in targets.iter().enumerate() {
            let cs = p.t_chains(t);
            let covered = cs.iter().flatten().fold(0u64, |acc, &x| acc | 1 << x);
            if covered.count_ones() as usize != p.size() {
                return Err(Error::param(format!(
                    "target {} ({p}) has an element in no {t}-chain",
                    i + 1
                )));
            }
            sizes.push(p.size() as u64);
            chains.push(cs.len() as u64);
        }
        LLLParameters::from_counts(t as u64, sizes, chains)
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    /// `m_k / (n_k + t·d + 2)`.
    pub fn threshold(&self) -> BigRational {
        let k = self.k();
        let den = BigInt::from(self.sizes[k - 1]) + BigInt::from(self.t) * BigInt::from(self.d.clone()) + 2;
        BigRational::new(BigInt::from(self.chains[k - 1]), den)
    }

    /// Color probabilities `(p_1..p_k)` for host size `n`, in floating point
    /// (sampling only; certification never uses these).
    pub fn probabilities(&self, n: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::param("host must be non-empty"));
        }
        let a = self.threshold();
        let ln = ln_interval(&rat(n), 64);
        if ln.hi() >= &a {
            return Err(Error::param(format!(
                "ln {n} ≥ m_k/(n_k+td+2) = {a}; the color probabilities leave (0, 1)"
            )));
        }
        let p = ln.div(&Interval::exact(a)).midpoint_f64();
        let k = self.k();
        let mut out = vec![p / (k - 1) as f64; k - 1];
        out.push(1.0 - p);
        Ok(out)
    }
}

fn binomial_big(n: &BigUint, k: u64) -> BigUint {
    let kb = BigUint::from(k);
    if &kb > n {
        return BigUint::zero();
    }
    let k = k.min((n - &kb).to_u64().unwrap_or(u64::MAX));
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Clone, Debug)]
pub struct LllCheck {
    pub first: Comparison,
    pub second: Comparison,
    /// `ln n` against the exact threshold `m_k/(n_k+td+2)`.
    pub ln_n: Interval,
    pub threshold: BigRational,
    /// `(ln n)^m · n^{n_{k-1}}` and `C_0 · threshold^m`.
    pub lhs: Interval,
    pub rhs: Interval,
    /// `n < n_k`: the all-`k` coloring already works.
    pub trivial_regime: bool,
    pub precision: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LllVerdict {
    Guaranteed,
    NotGuaranteed,
    Indeterminate,
}

impl fmt::Display for LllVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LllVerdict::Guaranteed => "guaranteed",
            LllVerdict::NotGuaranteed => "not-guaranteed",
            LllVerdict::Indeterminate => "indeterminate-at-precision",
        })
    }
}

impl LllCheck {
    pub fn verdict(&self) -> LllVerdict {
        match (self.first, self.second) {
            (Comparison::Holds, Comparison::Holds) => LllVerdict::Guaranteed,
            (Comparison::Fails, _) | (_, Comparison::Fails) => LllVerdict::NotGuaranteed,
            _ => LllVerdict::Indeterminate,
        }
    }
}

pub fn lll_threshold_check(params: &LLLParameters, n: &BigUint) -> Result<LllCheck> {
    lll_threshold_check_at(params, n, MAX_PRECISION)
}

/// Same as [`lll_threshold_check`] with an explicit precision ceiling.
pub fn lll_threshold_check_at(params: &LLLParameters, n: &BigUint, max_prec: u32) -> Result<LllCheck> {
    if n.is_zero() {
        return Err(Error::param("host must have at least one element"));
    }
    let k = params.k();
    let a = params.threshold();
    let nq = urat(n);
    let m = params.m;
    let n1 = params.sizes[0];
    let nk1 = params.sizes[k - 2];

    let (first, ln_n, p1) = certify_less(|prec| ln_interval(&nq, prec), &a, max_prec);

    // (ln n)^m n^{n_{k-1}} · 2a e^{n_1+1} < (k-1)^{m-1} n_1^{n_1} A^m, which is
    // the second condition with C_0 multiplied out.
    let n_pow = urat(&num_traits::pow(n.clone(), nk1 as usize));
    let exact_rhs = rat(BigInt::from(k as u64 - 1)).pow((m - 1) as i32)
        * rat(BigInt::from(n1)).pow(n1 as i32)
        * a.pow(m as i32);
    let two_a = urat(&(params.a.clone() * 2u32));
    let scaled = |prec: u32| {
        let ln = ln_interval(&nq, prec + 32);
        ln.pow(m, prec + 32)
            .mul(&Interval::exact(n_pow.clone() * &two_a))
            .mul(&e_interval(prec + 32).pow(n1 + 1, prec + 32))
            .rounded(prec)
    };
    let (second, _, p2) = certify_less(scaled, &exact_rhs, max_prec);
    let prec = p1.max(p2);

    let lhs = ln_interval(&nq, prec).pow(m, prec).mul(&Interval::exact(n_pow));
    let c0 = c0_interval(params, prec);
    let rhs = c0.mul(&Interval::exact(a.pow(m as i32)));
    Ok(LllCheck {
        first,
        second,
        ln_n,
        threshold: a,
        lhs,
        rhs,
        trivial_regime: n < &BigUint::from(params.sizes[k - 1]),
        precision: prec,
    })
}

/// `C_0 = (k−1)^{m−1} / (2ea) · (n_1/e)^{n_1}`.
pub fn c0_interval(params: &LLLParameters, prec: u32) -> Interval {
    let k = params.k() as u64;
    let n1 = params.sizes[0];
    let num = rat(BigInt::from(k - 1)).pow((params.m - 1) as i32) * rat(BigInt::from(n1)).pow(n1 as i32);
    let den = e_interval(prec + 32)
        .pow(n1 + 1, prec + 32)
        .mul(&Interval::exact(urat(&(params.a.clone() * 2u32))));
    Interval::exact(num).div(&den).rounded(prec)
}

/// Parameters of the strong lower bound for `B_{m_1}, …, B_{m_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongLowerBoundInput {
    pub t: u32,
    pub dims: Vec<u32>,
}

impl StrongLowerBoundInput {
    pub fn new(t: u32, dims: Vec<u32>) -> Result<Self> {
        if dims.len() < 3 {
            return Err(Error::param(format!("need k ≥ 3 dimensions, got {}", dims.len())));
        }
        if t < 2 {
            return Err(Error::param("need t ≥ 2"));
        }
        if dims.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("dimensions must be non-decreasing"));
        }
        if dims[0] + 1 < t {
            return Err(Error::param(format!("need t − 1 ≤ m_1, got t={t}, m_1={}", dims[0])));
        }
        Ok(StrongLowerBoundInput { t, dims })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Arm {
    First,
    Last,
    /// Both arms are equal.
    Tie,
}

#[derive(Clone, Debug)]
pub struct StrongLowerBound {
    /// `m_1 + (h + (h−1)·log2(k−1) − 1) / (4·C(m_1, ⌊m_1/2⌋))`.
    pub arm1: Interval,
    /// `m_k + (h − 1) / (2·C(m_k, ⌊m_k/2⌋))`, always rational.
    pub arm2: BigRational,
    pub value: Interval,
    /// `None` when the arms could not be separated at the maximum precision.
    pub attained_by: Option<Arm>,
}

impl StrongLowerBound {
    /// The bound as an exact rational when it is one.
    pub fn exact(&self) -> Option<BigRational> {
        self.value.is_exact().then(|| self.value.lo().clone())
    }
}

fn central(m: u32) -> BigUint {
    binomial(u64::from(m), u64::from(m / 2))
}

pub fn strong_lower_bound(input: &StrongLowerBoundInput) -> Result<StrongLowerBound> {
    let k = input.dims.len() as u64;
    let m1 = input.dims[0];
    let mk = *input.dims.last().expect("k ≥ 3");
    let h1 = urat(&chain_count_formula(m1, input.t)?);
    let hk = urat(&chain_count_formula(mk, input.t)?);
    let arm2 = rat(mk) + (hk - rat(1)) / (rat(2) * urat(&central(mk)));
    let arm1_at = |prec: u32| {
        let log = log2_interval(&BigUint::from(k - 1), prec);
        let num = Interval::exact(&h1 - rat(1))
            .mul(&log)
            .add(&Interval::exact(&h1 - rat(1)));
        Interval::exact(rat(m1))
            .add(&num.div(&Interval::exact(rat(4) * urat(&central(m1)))))
            .rounded(prec)
    };
    let mut prec = 64;
    let arm1 = loop {
        let a = arm1_at(prec);
        if a.is_exact() || a.compare(&arm2).is_some() || prec >= MAX_PRECISION {
            break a;
        }
        prec *= 2;
    };
    let (value, attained_by) = match arm1.compare(&arm2) {
        Some(std::cmp::Ordering::Less) => (arm1.clone(), Some(Arm::First)),
        Some(std::cmp::Ordering::Greater) => (Interval::exact(arm2.clone()), Some(Arm::Last)),
        Some(std::cmp::Ordering::Equal) => (arm1.clone(), Some(Arm::Tie)),
        None => {
            let lo = arm1.lo().clone().min(arm2.clone());
            let hi = arm1.hi().clone().min(arm2.clone());
            (Interval::new(lo, hi), None)
        }
    };
    Ok(StrongLowerBound {
        arm1,
        arm2,
        value,
        attained_by,
    })
}

/// Where an `e(m, N)` value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountSource {
    Exact,
    /// The closed form `2^{2·C(m,⌊m/2⌋)(N−m)}`, which is asymptotic and may
    /// undercount at small sizes.
    ClosedForm,
}

/// `e(m, N)` exactly where a formula or enumeration is available.
pub fn strong_embedding_count(m: u32, n: u32) -> Result<(BigUint, CountSource)> {
    if m > n {
        return Err(Error::param(format!("need m ≤ N, got m={m}, N={n}")));
    }
    let exact = if m == 0 {
        Some(BigUint::one() << n)
    } else if m == n {
        Some(factorial(u64::from(m)))
    } else if m == 1 {
        Some(chain_count_formula(n, 2)?)
    } else if strong_embedding_count_feasible(m, n) {
        Some(enumerate_strong_boolean_embeddings(m, n)?)
    } else {
        None
    };
    match exact {
        Some(v) => Ok((v, CountSource::Exact)),
        None => Ok((embedding_count_upper_bound(m, n)?, CountSource::ClosedForm)),
    }
}

#[derive(Clone, Debug)]
pub struct CtBound {
    /// `None` when the denominator is not positive.
    pub value: Option<BigRational>,
    pub e_m: (BigUint, CountSource),
    pub e_n: (BigUint, CountSource),
    pub h_m: BigUint,
    pub h_n: BigUint,
    /// `t ≥ 3` and `m, n ≥ 2`.
    pub hypotheses_hold: bool,
}

impl CtBound {
    pub fn is_vacuous(&self) -> bool {
        self.value.is_none()
    }

    /// The ratio exceeds one, so it says nothing as a probability.
    pub fn exceeds_one(&self) -> bool {
        self.value.as_ref().is_some_and(|v| v > &rat(1))
    }
}

const MAX_EXPONENT: u64 = 1 << 20;

fn two_pow(h: &BigUint) -> Result<BigUint> {
    let e = h
        .to_u64()
        .filter(|&e| e <= MAX_EXPONENT)
        .ok_or_else(|| Error::Infeasible(format!("2^{h} is too large to evaluate exactly")))?;
    Ok(BigUint::one() << e)
}

/// `e(m,N)·2^{−h_m(t)} / (1 − e(n,N)·2^{−h_n(t)})` in exact arithmetic.
pub fn c_t_upper_bound(m: u32, n: u32, big_n: u32, t: u32) -> Result<CtBound> {
    if t == 0 {
        return Err(Error::param("need t ≥ 1"));
    }
    let e_m = strong_embedding_count(m, big_n)?;
    let e_n = strong_embedding_count(n, big_n)?;
    let h_m = chain_count_formula(m, t)?;
    let h_n = chain_count_formula(n, t)?;
    let num = BigRational::new(BigInt::from(e_m.0.clone()), BigInt::from(two_pow(&h_m)?));
    let den = rat(1) - BigRational::new(BigInt::from(e_n.0.clone()), BigInt::from(two_pow(&h_n)?));
    let value = den.is_positive().then(|| num / den);
    Ok(CtBound {
        value,
        e_m,
        e_n,
        h_m,
        h_n,
        hypotheses_hold: t >= 3 && m >= 2 && n >= 2,
    })
}

/// `(R_{⌊k/2⌋} − 2)·R_{⌈k/2⌉} + R_{⌊k/2⌋}` from a table of known values or
/// bounds for smaller color counts.
pub fn halving_recurrence(k: u32, m: u32, base: &BTreeMap<u32, BigUint>) -> Result<BigUint> {
    if k < 6 || m < 2 {
        return Err(Error::param(format!("need k ≥ 6 and m ≥ 2, got k={k}, m={m}")));
    }
    let get = |j: u32| {
        base.get(&j)
            .cloned()
            .ok_or_else(|| Error::param(format!("missing base entry R_{j}")))
    };
    let lo = get(k / 2)?;
    let hi = get(k.div_ceil(2))?;
    if lo < BigUint::from(2u32) {
        return Err(Error::param("base entries must be at least 2"));
    }
    Ok((&lo - 2u32) * hi + lo)
}

/// One step `(m−1)·R_{k−1} + m + k − 1`.
pub fn walzer_recurrence(k: u32, m: u32, previous: &BigUint) -> Result<BigUint> {
    if k < 3 || m < 2 {
        return Err(Error::param(format!("need k ≥ 3 and m ≥ 2, got k={k}, m={m}")));
    }
    Ok(previous * (m - 1) + (m + k - 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceRow {
    pub k: u32,
    /// `None` for `k < 6`.
    pub halving: Option<BigUint>,
    pub walzer: BigUint,
    /// Smaller of the two, fed to later rows.
    pub best: BigUint,
}

/// Rows `k = 2..=k_max` starting from a supplied bound on `R_2`. Walzer's
/// step is iterated on its own column; the halving recurrence uses the best
/// available value for each smaller `k`.
pub fn recurrence_table(m: u32, r2: &BigUint, k_max: u32) -> Result<Vec<RecurrenceRow>> {
    if m < 2 {
        return Err(Error::param("need m ≥ 2"));
    }
    let mut best: BTreeMap<u32, BigUint> = BTreeMap::new();
    best.insert(1, BigUint::from(m));
    best.insert(2, r2.clone());
    let mut rows = vec![RecurrenceRow {
        k: 2,
        halving: None,
        walzer: r2.clone(),
        best: r2.clone(),
    }];
    let mut walzer = r2.clone();
    for k in 3..=k_max {
        walzer = walzer_recurrence(k, m, &walzer)?;
        let halved = if k >= 6 {
            Some(halving_recurrence(k, m, &best)?)
        } else {
            None
        };
        let via_best = walzer_recurrence(k, m, &best[&(k - 1)])?;
        let b = halved.iter().cloned().chain([via_best]).min().expect("non-empty");
        best.insert(k, b.clone());
        rows.push(RecurrenceRow {
            k,
            halving: halved,
            walzer: walzer.clone(),
            best: b,
        });
    }
    Ok(rows)
}

/// `(2k, 3kr − 2r − k + 1)`.
pub fn diamond_bounds(k: u64, r: u64) -> Result<(u64, u64)> {
    if k < 1 || r < 2 {
        return Err(Error::param(format!("need k ≥ 1 and r ≥ 2, got k={k}, r={r}")));
    }
    let upper = (3 * k * r + 1)
        .checked_sub(2 * r + k)
        .ok_or_else(|| Error::param("overflow"))?;
    Ok((2 * k, upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn strong_bound_small_example() {
        let b = strong_lower_bound(&StrongLowerBoundInput::new(2, vec![2, 2, 2]).unwrap()).unwrap();
        assert_eq!(b.exact(), Some(q(3, 1)));
        assert_eq!(b.arm2, q(3, 1));
        assert_eq!(b.attained_by, Some(Arm::Tie));
        let b = strong_lower_bound(&StrongLowerBoundInput::new(2, vec![1, 1, 1, 1]).unwrap()).unwrap();
        assert_eq!(b.arm1, Interval::from_int(1));
        assert!(StrongLowerBoundInput::new(2, vec![2, 2]).is_err());
        assert!(StrongLowerBoundInput::new(3, vec![1, 2, 2]).is_err());
    }

    #[test]
    fn ct_small_example() {
        let b = c_t_upper_bound(1, 2, 2, 2).unwrap();
        assert_eq!(b.value, Some(q(8, 3)));
        assert!(b.exceeds_one());
        assert!(!b.hypotheses_hold);
        assert_eq!(b.e_m, (BigUint::from(5u32), CountSource::Exact));
    }

    #[test]
    fn ct_vacuous_when_denominator_non_positive() {
        // e(0,1) = 2, h_0(1) = 1: 1 − 2/2 = 0
        let b = c_t_upper_bound(0, 0, 1, 1).unwrap();
        assert!(b.is_vacuous());
    }

    #[test]
    fn recurrences() {
        let mut base = BTreeMap::new();
        base.insert(3, BigUint::from(10u32));
        assert_eq!(halving_recurrence(6, 2, &base).unwrap(), BigUint::from(90u32));
        assert!(halving_recurrence(7, 2, &base).is_err());
        assert!(halving_recurrence(5, 2, &base).is_err());
        assert_eq!(walzer_recurrence(3, 2, &BigUint::from(4u32)).unwrap(), BigUint::from(8u32));
        let rows = recurrence_table(4, &BigUint::from(14u32), 10).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| (r.k >= 6) == r.halving.is_some()));
    }

    #[test]
    fn diamond_closed_forms() {
        assert_eq!(diamond_bounds(2, 2).unwrap(), (4, 7));
        // one color: the smallest host of an r-diamond is B_r
        assert_eq!(diamond_bounds(1, 5).unwrap(), (2, 5));
        assert!(diamond_bounds(0, 2).is_err());
        assert!(diamond_bounds(2, 1).is_err());
    }

    #[test]
    fn lll_parameters() {
        let targets = crate::poset::parse_targets("chain:3,chain:5").unwrap();
        let p = LLLParameters::new(2, &targets).unwrap();
        assert_eq!(p.chains, vec![3, 10]);
        assert_eq!(p.d, BigUint::zero());
        assert_eq!(p.a, BigUint::one());
        assert_eq!(p.threshold(), q(10, 7));
        let probs = p.probabilities(4).unwrap();
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.probabilities(5).is_err());
        let bad = crate::poset::parse_targets("chain:3,antichain:3").unwrap();
        assert!(LLLParameters::new(2, &bad).is_err());
    }

    #[test]
    fn lll_trivial_host() {
        let targets = crate::poset::parse_targets("chain:3,chain:5").unwrap();
        let p = LLLParameters::new(2, &targets).unwrap();
        let c = lll_threshold_check(&p, &BigUint::one()).unwrap();
        assert_eq!(c.verdict(), LllVerdict::Guaranteed);
        assert!(c.trivial_regime);
    }
}
