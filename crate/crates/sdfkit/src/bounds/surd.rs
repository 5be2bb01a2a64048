//! Exact values of the form `c·√r` with `c` a non-negative integer and `r`
//! squarefree. Half-integer powers of integers are closed under products in
//! this form, which covers the main bound, `G_d` and the `√m` bound exactly.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::interval::Interval;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    coeff: BigUint,
    radicand: u64,
}

impl Surd {
    pub fn integer(c: impl Into<BigUint>) -> Self {
        Surd {
            coeff: c.into(),
            radicand: 1,
        }
    }

    /// `√n`, with the largest square divisor pulled out of the radical.
    pub fn sqrt_of(n: u64) -> Self {
        assert!(n >= 1);
        let mut outside = 1u64;
        let mut inside = n;
        let mut d = 2u64;
        while d * d <= inside {
            while inside % (d * d) == 0 {
                inside /= d * d;
                outside *= d;
            }
            d += 1;
        }
        Surd {
            coeff: BigUint::from(outside),
            radicand: inside,
        }
    }

    /// `base^(half_exp / 2)` for an integer `base >= 1`.
    pub fn pow_half(base: u64, half_exp: u64) -> Self {
        let int_part = num_traits::Pow::pow(&BigUint::from(base), half_exp / 2);
        let mut v = Surd {
            coeff: int_part,
            radicand: 1,
        };
        if half_exp % 2 == 1 {
            v = v.mul(&Surd::sqrt_of(base));
        }
        v
    }

    pub fn coeff(&self) -> &BigUint {
        &self.coeff
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_integer(&self) -> bool {
        self.radicand == 1
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        let g = crate::modarith::gcd(self.radicand, other.radicand);
        Surd {
            coeff: &self.coeff * &other.coeff * BigUint::from(g),
            radicand: (self.radicand / g) * (other.radicand / g),
        }
    }

    /// Smallest integer `>= c√r`.
    pub fn ceil(&self) -> BigUint {
        let sq = &self.coeff * &self.coeff * BigUint::from(self.radicand);
        let root = sq.sqrt();
        if &root * &root == sq {
            root
        } else {
            root + BigUint::one()
        }
    }

    /// Does the integer `x` satisfy `x > c√r`?
    pub fn lt_integer(&self, x: &BigUint) -> bool {
        let sq = &self.coeff * &self.coeff * BigUint::from(self.radicand);
        &(x * x) > &sq
    }

    pub fn to_interval(&self) -> Interval {
        Interval::from_biguint(&self.coeff).mul(&Interval::from_u64(self.radicand).sqrt())
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64().unwrap_or(f64::INFINITY) * (self.radicand as f64).sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }
}

impl std::fmt::Display for Surd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.radicand == 1 {
            write!(f, "{}", self.coeff)
        } else if self.coeff.is_one() {
            write!(f, "sqrt({})", self.radicand)
        } else {
            write!(f, "{}*sqrt({})", self.coeff, self.radicand)
        }
    }
}
