//! Rational intervals with outward dyadic rounding, enough to compare
//! expressions in `ln`, `e` and `log2` against exact rationals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const START_PRECISION: u32 = 64;
pub const MAX_PRECISION: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow2(bits: u32) -> BigRational {
    rat(BigInt::one() << bits)
}

fn round_down(q: &BigRational, prec: u32) -> BigRational {
    let scale = pow2(prec);
    (q * &scale).floor() / scale
}

fn round_up(q: &BigRational, prec: u32) -> BigRational {
    let scale = pow2(prec);
    (q * &scale).ceil() / scale
}

impl Interval {
    pub fn exact(q: BigRational) -> Self {
        Interval { lo: q.clone(), hi: q }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Interval::exact(rat(n))
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    /// Widens both ends to multiples of `2^-prec`.
    pub fn rounded(&self, prec: u32) -> Self {
        Interval {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }

    /// Panics if `other` contains zero.
    pub fn div(&self, other: &Interval) -> Interval {
        assert!(
            other.lo.is_positive() || other.hi.is_negative(),
            "division by an interval containing zero"
        );
        let inv = Interval {
            lo: other.hi.recip(),
            hi: other.lo.recip(),
        };
        self.mul(&inv)
    }

    /// Integer power by squaring, rounding after each product.
    pub fn pow(&self, mut e: u64, prec: u32) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rounded(prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rounded(prec);
            }
        }
        acc
    }

    /// Three-way comparison against a rational; `None` when `q` lies inside.
    pub fn compare(&self, q: &BigRational) -> Option<Ordering> {
        if &self.hi < q {
            Some(Ordering::Less)
        } else if &self.lo > q {
            Some(Ordering::Greater)
        } else if self.is_exact() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.lo)
        } else {
            write!(
                f,
                "[{:.12}, {:.12}]",
                self.lo.to_f64().unwrap_or(f64::NAN),
                self.hi.to_f64().unwrap_or(f64::NAN)
            )
        }
    }
}

/// Euler's number to within `2^-prec`.
pub fn e_interval(prec: u32) -> Interval {
    // tail after 1/K! is below 2/(K+1)!
    let target = BigUint::one() << (prec + 2);
    let mut sum = rat(1);
    let mut fact = BigUint::one();
    let mut k = 0u64;
    loop {
        k += 1;
        fact *= k;
        sum += BigRational::new(BigInt::one(), BigInt::from(fact.clone()));
        if &fact * (k + 1) > target {
            break;
        }
    }
    let tail = BigRational::new(BigInt::from(2), BigInt::from(&fact * (k + 1)));
    Interval {
        lo: round_down(&sum, prec),
        hi: round_up(&(sum + tail), prec),
    }
}

/// `2·atanh(z)` for rational `0 ≤ z ≤ 1/3`.
fn two_atanh(z: &BigRational, prec: u32) -> Interval {
    if z.is_zero() {
        return Interval::from_int(0);
    }
    let work = prec + 16;
    let z2 = z * z;
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (prec + 4));
    let mut power = Interval::exact(z.clone());
    let mut sum = Interval::from_int(0);
    let mut i = 0u64;
    loop {
        let term = power.mul(&Interval::exact(BigRational::new(
            BigInt::one(),
            BigInt::from(2 * i + 1),
        )));
        sum = sum.add(&term).rounded(work);
        power = power.mul(&Interval::exact(z2.clone())).rounded(work);
        i += 1;
        // remaining terms sum to at most z^{2i+1} / ((2i+1)(1 - z^2))
        let bound = power.hi() / (rat(2 * i + 1) * (rat(1) - &z2));
        if bound < eps {
            let two = Interval::from_int(2);
            let with_tail = Interval {
                lo: sum.lo.clone(),
                hi: &sum.hi + bound,
            };
            return two.mul(&with_tail).rounded(prec);
        }
    }
}

pub fn ln2_interval(prec: u32) -> Interval {
    two_atanh(&BigRational::new(BigInt::one(), BigInt::from(3)), prec)
}

/// Natural logarithm of a positive rational.
pub fn ln_interval(x: &BigRational, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive number");
    // x = 2^j · y with 1 ≤ y < 2
    let (num, den) = (x.numer().clone(), x.denom().clone());
    let mut j = num.bits() as i64 - den.bits() as i64;
    let mut y = if j >= 0 {
        BigRational::new(num, den << j as u64)
    } else {
        BigRational::new(num << (-j) as u64, den)
    };
    if y < rat(1) {
        y *= rat(2);
        j -= 1;
    } else if y >= rat(2) {
        y /= rat(2);
        j += 1;
    }
    let z = (&y - rat(1)) / (&y + rat(1));
    let ln_y = two_atanh(&z, prec + 8);
    let ln_x = if j == 0 {
        ln_y
    } else {
        ln2_interval(prec + 8 + 64 - (j.unsigned_abs().leading_zeros()))
            .mul(&Interval::from_int(j))
            .add(&ln_y)
    };
    ln_x.rounded(prec)
}

/// `log2(x)` for a positive integer; exact for powers of two.
pub fn log2_interval(x: &BigUint, prec: u32) -> Interval {
    assert!(!x.is_zero(), "log2 of zero");
    if x.is_power_of_two() {
        return Interval::from_int(x.bits() - 1);
    }
    let q = rat(BigInt::from(x.clone()));
    ln_interval(&q, prec + 4)
        .div(&ln2_interval(prec + 4))
        .rounded(prec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Holds,
    Fails,
    /// The enclosure still straddles the threshold at the maximum precision.
    Indeterminate,
}

/// Decides `lhs < rhs` by evaluating `lhs` at doubling precision until
/// the interval clears `rhs` or `max_prec` is passed. Returns the verdict and
/// the last enclosure.
pub fn certify_less(
    lhs: impl Fn(u32) -> Interval,
    rhs: &BigRational,
    max_prec: u32,
) -> (Comparison, Interval, u32) {
    let mut prec = START_PRECISION.min(max_prec.max(1));
    loop {
        let value = lhs(prec);
        match value.compare(rhs) {
            Some(Ordering::Less) => return (Comparison::Holds, value, prec),
            Some(_) if value.is_exact() || value.lo() >= rhs => {
                return (Comparison::Fails, value, prec)
            }
            _ => {}
        }
        if prec >= max_prec {
            return (Comparison::Indeterminate, value, prec);
        }
        prec = (prec * 2).min(max_prec);
    }
}

trait PowerOfTwo {
    fn is_power_of_two(&self) -> bool;
}

impl PowerOfTwo for BigUint {
    fn is_power_of_two(&self) -> bool {
        !self.is_zero() && (self & (self - 1u32)).is_zero()
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}
