//! Coefficients: `Z/r` for `r >= 1`, and `Z` itself when `r = 0`.
//!
//! Elements are plain `i64` values. For `r > 0` every element handed out by
//! [`CoeffRing`] is the canonical representative in `[0, r)`; for `r = 0`
//! (framings) elements are arbitrary integers.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoeffRing {
    modulus: u64,
}

impl CoeffRing {
    pub const fn new(modulus: u64) -> Self {
        CoeffRing { modulus }
    }

    /// The integers, i.e. `r = 0`.
    pub const fn integers() -> Self {
        CoeffRing { modulus: 0 }
    }

    pub const fn modulus(self) -> u64 {
        self.modulus
    }

    pub const fn is_integers(self) -> bool {
        self.modulus == 0
    }

    /// True for `r = 0` as well: the integers map onto `Z/2`.
    pub const fn is_even(self) -> bool {
        self.modulus.is_multiple_of(2)
    }

    pub fn canon(self, x: i64) -> i64 {
        match self.modulus {
            0 => x,
            m => x.rem_euclid(m as i64),
        }
    }

    pub fn add(self, a: i64, b: i64) -> i64 {
        self.canon(a + b)
    }

    pub fn sub(self, a: i64, b: i64) -> i64 {
        self.canon(a - b)
    }

    pub fn mul(self, a: i64, b: i64) -> i64 {
        match self.modulus {
            0 => a * b,
            m => ((a as i128 * b as i128).rem_euclid(m as i128)) as i64,
        }
    }

    pub fn neg(self, a: i64) -> i64 {
        self.canon(-a)
    }

    /// Canonical representative of `-1`; `r - 1` when `r > 0`.
    pub fn minus_one(self) -> i64 {
        self.canon(-1)
    }

    /// Least non-negative lift. Only meaningful for `r > 0`.
    pub fn lift(self, a: i64) -> u64 {
        self.canon(a).unsigned_abs()
    }

    /// Canonical gcd of two elements.
    ///
    /// For `r > 0` this is `gcd(lift(a), lift(b), r)`, a divisor of `r`, returned
    /// as its canonical representative (so the divisor `r` itself comes back as
    /// `0`). For `r = 0` it is the non-negative integer gcd, with `gcd(0, 0) = 0`.
    pub fn gcd_canon(self, a: i64, b: i64) -> i64 {
        match self.modulus {
            0 => gcd(a.unsigned_abs(), b.unsigned_abs()) as i64,
            m => {
                let d = gcd(gcd(self.lift(a), self.lift(b)), m);
                self.canon(d as i64)
            }
        }
    }

    /// Reduction map `Z/r -> Z/r'`, defined when `r'` divides `r` (any `r' >= 1` when `r = 0`).
    pub fn divides_into(self, target: CoeffRing) -> bool {
        match (self.modulus, target.modulus) {
            (_, 0) => self.modulus == 0,
            (0, _) => true,
            (m, t) => m % t == 0,
        }
    }

    /// Number of elements, `None` for the integers.
    pub fn order(self) -> Option<u64> {
        (self.modulus > 0).then_some(self.modulus)
    }
}

impl std::fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.modulus {
            0 => write!(f, "Z"),
            m => write!(f, "Z/{m}"),
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
