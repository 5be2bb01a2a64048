//! Directed fixed-point interval arithmetic.
//!
//! Values are enclosed in `[lo, hi] / 2^PREC_BITS` with `BigInt` endpoints;
//! every operation rounds `lo` down and `hi` up, so an interval comparison
//! that succeeds is a rigorous certificate. 192 fractional bits give just
//! under 58 decimal digits of working precision.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};

pub const PREC_BITS: u64 = 192;

fn floor_shift(x: &BigInt) -> BigInt {
    // BigInt shr rounds toward negative infinity, matching primitives.
    x >> PREC_BITS
}

fn ceil_shift(x: &BigInt) -> BigInt {
    -floor_shift(&-x)
}

fn floor_div(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den.is_positive());
    let q = num / den;
    if (num - &q * den).is_negative() {
        q - 1
    } else {
        q
    }
}

fn ceil_div(num: &BigInt, den: &BigInt) -> BigInt {
    -floor_div(&-num, den)
}

/// Closed enclosure `[lo, hi] / 2^PREC_BITS` of a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
}

impl Interval {
    pub fn zero() -> Self {
        Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
        }
    }

    pub fn from_u64(x: u64) -> Self {
        let v = BigInt::from(x) << PREC_BITS;
        Interval { lo: v.clone(), hi: v }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        let v = BigInt::from(x.clone()) << PREC_BITS;
        Interval { lo: v.clone(), hi: v }
    }

    /// Exact rational `num / den`, `den > 0`, rounded outward.
    pub fn from_ratio(num: i64, den: u64) -> Self {
        let num = BigInt::from(num) << PREC_BITS;
        let den = BigInt::from(den);
        Interval {
            lo: floor_div(&num, &den),
            hi: ceil_div(&num, &den),
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
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval {
            lo: floor_shift(min),
            hi: ceil_shift(max),
        }
    }

    /// Reciprocal; requires a strictly positive enclosure.
    pub fn inv(&self) -> Interval {
        assert!(self.lo.is_positive(), "inv needs a positive interval");
        let unit = BigInt::from(1u8) << (2 * PREC_BITS);
        Interval {
            lo: floor_div(&unit, &self.hi),
            hi: ceil_div(&unit, &self.lo),
        }
    }

    /// Integer power of a non-negative enclosure.
    pub fn pow_u64(&self, e: u64) -> Interval {
        assert!(!self.lo.is_negative(), "pow needs a non-negative interval");
        let mut acc = Interval::from_u64(1);
        let mut base = self.clone();
        let mut e = e;
        while e != 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e != 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `k`-th root of a non-negative enclosure.
    pub fn nth_root(&self, k: u32) -> Interval {
        assert!(k >= 1);
        assert!(!self.lo.is_negative(), "root needs a non-negative interval");
        let scale = PREC_BITS * (k as u64 - 1);
        let root_dir = |x: &BigInt, up: bool| -> BigInt {
            let shifted: BigUint = (x << scale).to_biguint().unwrap();
            let r = shifted.nth_root(k);
            let exact = num_traits::Pow::pow(&r, k) == shifted;
            let r = BigInt::from(r);
            if up && !exact {
                r + 1
            } else {
                r
            }
        };
        Interval {
            lo: root_dir(&self.lo, false),
            hi: root_dir(&self.hi, true),
        }
    }

    pub fn sqrt(&self) -> Interval {
        self.nth_root(2)
    }

    /// `x^(num/den)` for a positive enclosure.
    pub fn pow_ratio(&self, num: i64, den: u32) -> Interval {
        assert!(den >= 1);
        let t = self.pow_u64(num.unsigned_abs());
        let t = t.nth_root(den);
        if num < 0 {
            t.inv()
        } else {
            t
        }
    }

    /// Certified strict comparison: the whole of `self` lies below `other`.
    pub fn lt_certain(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// The whole of `self` lies at or below every point of `other`.
    pub fn le_certain(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    /// Certified `self >= x` for an integer `x`.
    pub fn ge_u64_certain(&self, x: u64) -> bool {
        self.lo >= BigInt::from(x) << PREC_BITS
    }

    /// Upper bound on the ceiling of the enclosed value.
    pub fn ceil_upper(&self) -> BigInt {
        ceil_shift(&self.hi)
    }

    /// Lower bound on the enclosed value, as a floor integer.
    pub fn floor_lower(&self) -> BigInt {
        floor_shift(&self.lo)
    }

    pub fn lo_f64(&self) -> f64 {
        big_to_f64(&self.lo)
    }

    pub fn hi_f64(&self) -> f64 {
        big_to_f64(&self.hi)
    }

    pub fn to_f64(&self) -> f64 {
        (self.lo_f64() + self.hi_f64()) / 2.0
    }

    /// Width of the enclosure, for diagnostics.
    pub fn width_f64(&self) -> f64 {
        big_to_f64(&(&self.hi - &self.lo))
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(PREC_BITS as i32)
}
