use std::cmp::Ordering;
use std::f64::consts::LN_2;

/// A real number stored as `sign · 2^log2`; zero has sign 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog2 {
    sign: i8,
    log2: f64,
}

/// `log₂(1 + 2^-d)` for `d ≥ 0`.
fn log2_one_plus_pow2_neg(d: f64) -> f64 {
    (-d * LN_2).exp().ln_1p() / LN_2
}

/// `log₂(1 − 2^-d)` for `d > 0`.
fn log2_one_minus_pow2_neg(d: f64) -> f64 {
    (-(-d * LN_2).exp_m1()).ln() / LN_2
}

impl SignedLog2 {
    pub const ZERO: Self = Self {
        sign: 0,
        log2: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self { sign: 1, log2: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        match x.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Self {
                sign: 1,
                log2: x.log2(),
            },
            Some(Ordering::Less) => Self {
                sign: -1,
                log2: (-x).log2(),
            },
            _ => Self::ZERO,
        }
    }

    /// `2^e`.
    pub fn pow2(e: f64) -> Self {
        Self { sign: 1, log2: e }
    }

    /// `2^e − 1`, accurate for tiny and huge `e`.
    pub fn pow2_minus_one(e: f64) -> Self {
        match e.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Self {
                sign: 1,
                log2: e + log2_one_minus_pow2_neg(e),
            },
            Some(Ordering::Less) => Self {
                sign: -1,
                log2: log2_one_minus_pow2_neg(-e),
            },
            _ => Self::ZERO,
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// `log₂ |x|` (−∞ for zero).
    pub fn log2_abs(&self) -> f64 {
        self.log2
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.log2.exp2()
    }

    pub fn neg(self) -> Self {
        Self {
            sign: -self.sign,
            log2: self.log2,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self {
            sign: self.sign * other.sign,
            log2: self.log2 + other.log2,
        }
    }

    /// `self / other`; `None` when `other` is zero.
    pub fn div(self, other: Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::ZERO);
        }
        Some(Self {
            sign: self.sign * other.sign,
            log2: self.log2 - other.log2,
        })
    }

    pub fn add(self, other: Self) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.log2 >= other.log2 {
            (self, other)
        } else {
            (other, self)
        };
        let d = big.log2 - small.log2;
        if big.sign == small.sign {
            Self {
                sign: big.sign,
                log2: big.log2 + log2_one_plus_pow2_neg(d),
            }
        } else if d == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: big.sign,
                log2: big.log2 + log2_one_minus_pow2_neg(d),
            }
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }
}
