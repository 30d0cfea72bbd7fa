//! Sign/log-magnitude numbers.
//!
//! Products of thirty Gaussian factors, or DGP values with exponents in the
//! thousands, leave the range of `f64` almost immediately. A [`SignedLog`]
//! stores `sign * exp(log_mag)` instead; multiplication adds log-magnitudes
//! and never overflows for any realistic depth. `log_mag = -inf` encodes an
//! exact zero.

use core::cmp::Ordering;
use core::ops::{Mul, Neg};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x.is_sign_negative() && x != 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Plus => 1,
        }
    }

    /// `self^exponent`.
    pub fn pow(self, exponent: u64) -> Sign {
        if exponent.is_multiple_of(2) {
            Sign::Plus
        } else {
            self
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// A real number stored as `sign * exp(log_mag)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    sign: Sign,
    log_mag: f64,
}

impl SignedLog {
    pub const ZERO: SignedLog = SignedLog { sign: Sign::Plus, log_mag: f64::NEG_INFINITY };
    pub const ONE: SignedLog = SignedLog { sign: Sign::Plus, log_mag: 0.0 };

    pub fn new(sign: Sign, log_mag: f64) -> SignedLog {
        debug_assert!(!log_mag.is_nan());
        SignedLog { sign, log_mag }
    }

    pub fn from_real(x: f64) -> SignedLog {
        SignedLog { sign: Sign::of(x), log_mag: libm::log(x.abs()) }
    }

    /// Converts back to `f64`; saturates to `±inf` above `e^709.78` and to `±0` below `e^-745`.
    pub fn to_real(self) -> f64 {
        self.sign.as_f64() * libm::exp(self.log_mag)
    }

    /// Like [`to_real`](Self::to_real) but clamps overflow to `±f64::MAX`.
    pub fn to_real_clipped(self) -> f64 {
        let v = self.to_real();
        if v.is_infinite() {
            self.sign.as_f64() * f64::MAX
        } else {
            v
        }
    }

    pub fn sign(self) -> Sign {
        self.sign
    }

    pub fn log_mag(self) -> f64 {
        self.log_mag
    }

    pub fn is_zero(self) -> bool {
        self.log_mag == f64::NEG_INFINITY
    }

    /// `|self|`.
    pub fn abs(self) -> SignedLog {
        SignedLog { sign: Sign::Plus, log_mag: self.log_mag }
    }

    /// `self^exponent` for a non-negative integer exponent.
    pub fn powu(self, exponent: u64) -> SignedLog {
        if exponent == 0 {
            return SignedLog::ONE;
        }
        SignedLog { sign: self.sign.pow(exponent), log_mag: exponent as f64 * self.log_mag }
    }

    /// Total order consistent with the real values; all zeros compare equal.
    pub fn cmp_value(&self, other: &SignedLog) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return match other.sign {
                    Sign::Plus => Ordering::Less,
                    Sign::Minus => Ordering::Greater,
                }
            }
            (false, true) => {
                return match self.sign {
                    Sign::Plus => Ordering::Greater,
                    Sign::Minus => Ordering::Less,
                }
            }
            _ => {}
        }
        match (self.sign, other.sign) {
            (Sign::Minus, Sign::Plus) => Ordering::Less,
            (Sign::Plus, Sign::Minus) => Ordering::Greater,
            (Sign::Plus, Sign::Plus) => self.log_mag.total_cmp(&other.log_mag),
            (Sign::Minus, Sign::Minus) => other.log_mag.total_cmp(&self.log_mag),
        }
    }

    pub fn le_value(&self, other: &SignedLog) -> bool {
        self.cmp_value(other) != Ordering::Greater
    }
}

impl Mul for SignedLog {
    type Output = SignedLog;
    fn mul(self, rhs: SignedLog) -> SignedLog {
        SignedLog { sign: self.sign * rhs.sign, log_mag: self.log_mag + rhs.log_mag }
    }
}

impl Neg for SignedLog {
    type Output = SignedLog;
    fn neg(self) -> SignedLog {
        SignedLog { sign: -self.sign, log_mag: self.log_mag }
    }
}

impl From<f64> for SignedLog {
    fn from(x: f64) -> Self {
        SignedLog::from_real(x)
    }
}
