//! Outward-rounded interval arithmetic on dyadic fixed-point numbers,
//! with rigorous enclosures of π and of cos/sin at rational turns.
//!
//! An interval at precision `p` is `[lo / 2^p, hi / 2^p]` with integer
//! endpoints. Every operation rounds `lo` down and `hi` up, so the true
//! value always lies inside.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    prec: u32,
}

fn floor_shift(x: &BigInt, bits: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << bits))
}

fn ceil_shift(x: &BigInt, bits: u32) -> BigInt {
    -((-x).div_floor(&(BigInt::one() << bits)))
}

impl Interval {
    pub fn point(value: &BigInt, prec: u32) -> Self {
        let v = value << prec;
        Interval {
            lo: v.clone(),
            hi: v,
            prec,
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let scaled = r * BigRational::from_integer(BigInt::one() << prec);
        Interval {
            lo: scaled.floor().to_integer(),
            hi: scaled.ceil().to_integer(),
            prec,
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.prec)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.prec)
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        &self.lower() <= r && r <= &self.upper()
    }

    /// Twice the midpoint, in units of `2^-prec`; a sort key.
    pub fn mid2(&self) -> BigInt {
        &self.lo + &self.hi
    }

    /// Every point of `self` exceeds every point of `other`.
    pub fn certainly_gt(&self, other: &Interval) -> bool {
        debug_assert_eq!(self.prec, other.prec);
        self.lo > other.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.prec, other.prec);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.prec, other.prec);
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().expect("nonempty");
        let max = products.iter().max().expect("nonempty");
        Interval {
            lo: floor_shift(min, self.prec),
            hi: ceil_shift(max, self.prec),
            prec: self.prec,
        }
    }

    /// Division by a positive integer.
    fn div_int(&self, d: &BigInt) -> Interval {
        debug_assert!(d.is_positive());
        Interval {
            lo: self.lo.div_floor(d),
            hi: -((-&self.hi).div_floor(d)),
            prec: self.prec,
        }
    }

    // widen by [-m, m] ulps
    fn widen(&self, m: &BigInt) -> Interval {
        Interval {
            lo: &self.lo - m,
            hi: &self.hi + m,
            prec: self.prec,
        }
    }
}

// arctan(1/x) at working precision `w`, as (value, error bound) in ulps
fn arctan_inv(x: u32, w: u32) -> (BigInt, BigInt) {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << w).div_floor(&x);
    let mut sum = BigInt::zero();
    let mut terms = 0u64;
    let mut k = 0u64;
    loop {
        let term = power.div_floor(&BigInt::from(2 * k + 1));
        if term.is_zero() {
            break;
        }
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        terms += 1;
        power = power.div_floor(&x2);
        k += 1;
    }
    // each term carries < 2 ulps of truncation; the tail is below 1 ulp
    (sum, BigInt::from(2 * terms + 2))
}

/// π enclosed by Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
pub fn pi(prec: u32) -> Interval {
    let guard = 24;
    let w = prec + guard;
    let (a, ea) = arctan_inv(5, w);
    let (b, eb) = arctan_inv(239, w);
    let value = a * 16 - b * 4;
    let err = ea * 16 + eb * 4;
    Interval {
        lo: floor_shift(&(&value - &err), guard),
        hi: ceil_shift(&(&value + &err), guard),
        prec,
    }
}

/// Evaluates cos and sin at angles `2π·r` for rational `r` at a fixed
/// precision.
#[derive(Debug, Clone)]
pub struct TrigContext {
    prec: u32,
    two_pi: Interval,
}

enum Series {
    Sin,
    Cos,
}

impl TrigContext {
    pub fn new(prec: u32) -> Self {
        let two_pi = pi(prec).add(&pi(prec));
        TrigContext { prec, two_pi }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    // Taylor series on 0 <= t < 1 with a Lagrange remainder bound.
    fn series(&self, t: &Interval, kind: Series) -> Interval {
        let t2 = t.mul(t);
        let one = Interval::point(&BigInt::one(), self.prec);
        let (mut term, mut n) = match kind {
            Series::Sin => (t.clone(), 1u64),
            Series::Cos => (one, 0u64),
        };
        let mut sum = Interval::point(&BigInt::zero(), self.prec);
        let mut sign = true;
        loop {
            // term encloses t^n / n!; stop once it is at most one ulp
            if term.hi <= BigInt::one() && n > 1 {
                let bound = term.hi.clone().max(BigInt::zero());
                return sum.widen(&bound);
            }
            sum = if sign { sum.add(&term) } else { sum.sub(&term) };
            sign = !sign;
            term = term.mul(&t2).div_int(&BigInt::from((n + 1) * (n + 2)));
            n += 2;
        }
    }

    /// `(cos 2πr, sin 2πr)`.
    pub fn cos_sin_turns(&self, r: &BigRational) -> (Interval, Interval) {
        let frac = r - r.floor();
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        let eighth = BigRational::new(BigInt::one(), BigInt::from(8));
        let q = (&frac * BigRational::from_integer(BigInt::from(4)))
            .floor()
            .to_integer();
        let s = &frac - &quarter * BigRational::from_integer(q.clone());
        // (cos 2πs, sin 2πs) for s in [0, 1/4)
        let (c, sn) = if s <= eighth {
            let t = self.two_pi.mul(&Interval::from_rational(&s, self.prec));
            (self.series(&t, Series::Cos), self.series(&t, Series::Sin))
        } else {
            let t = self
                .two_pi
                .mul(&Interval::from_rational(&(&quarter - &s), self.prec));
            (self.series(&t, Series::Sin), self.series(&t, Series::Cos))
        };
        match q.to_u8().expect("quadrant") {
            0 => (c, sn),
            1 => (sn.neg(), c),
            2 => (c.neg(), sn.neg()),
            _ => (sn, c.neg()),
        }
    }

    pub fn cos_turns(&self, r: &BigRational) -> Interval {
        self.cos_sin_turns(r).0
    }

    pub fn sin_turns(&self, r: &BigRational) -> Interval {
        self.cos_sin_turns(r).1
    }
}

/// Orders two intervals when they are disjoint.
pub fn certified_cmp(a: &Interval, b: &Interval) -> Option<Ordering> {
    if a.certainly_gt(b) {
        Some(Ordering::Greater)
    } else if b.certainly_gt(a) {
        Some(Ordering::Less)
    } else {
        None
    }
}
