use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// A finite decimal `±significand × 10^exponent`.
///
/// Values produced by rounding carry exactly `precision` significant digits
/// in the significand (zero is the exception).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decimal {
    negative: bool,
    significand: BigUint,
    exponent: i64,
}

impl Decimal {
    pub fn zero() -> Self {
        Decimal {
            negative: false,
            significand: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.significand.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn significand(&self) -> &BigUint {
        &self.significand
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Rounds the positive ratio `num / den` to `precision` significant
    /// digits, ties to even.
    pub(crate) fn from_ratio(negative: bool, num: &BigUint, den: &BigUint, precision: u32) -> Self {
        assert!(precision >= 1, "precision must be at least one digit");
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Decimal::zero();
        }
        let p = precision as i64;
        let lo = pow10(precision - 1);
        let hi = pow10(precision);
        // floor(log10(num/den)) is k or k - 1
        let mut e10 = decimal_len(num) as i64 - decimal_len(den) as i64;
        loop {
            let shift = p - 1 - e10;
            let (n, d) = scaled(num, den, shift);
            let (q, r) = n.div_rem(&d);
            if q >= hi {
                e10 += 1;
                continue;
            }
            if q < lo {
                e10 -= 1;
                continue;
            }
            let twice = &r << 1usize;
            let round_up = match twice.cmp(&d) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => q.is_odd(),
            };
            let mut q = q;
            let mut exponent = -shift;
            if round_up {
                q += 1u32;
                if q == hi {
                    q = lo.clone();
                    exponent += 1;
                }
            }
            return Decimal {
                negative,
                significand: q,
                exponent,
            };
        }
    }

    /// Re-rounds to `precision` significant digits.
    pub fn round_to(&self, precision: u32) -> Self {
        if self.is_zero() {
            return Decimal::zero();
        }
        let (num, den) = if self.exponent >= 0 {
            (
                &self.significand * pow10(self.exponent as u32),
                BigUint::one(),
            )
        } else {
            (self.significand.clone(), pow10((-self.exponent) as u32))
        };
        Decimal::from_ratio(self.negative, &num, &den, precision)
    }

    /// Number of significant digits carried in the significand.
    pub fn precision(&self) -> u32 {
        if self.is_zero() {
            1
        } else {
            decimal_len(&self.significand)
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.to_string().parse().unwrap_or(f64::NAN)
    }

    /// Decimal exponent of the leading digit: `floor(log10|x|)`.
    pub fn leading_exponent(&self) -> i64 {
        self.exponent + decimal_len(&self.significand) as i64 - 1
    }
}

impl Mul for &Decimal {
    type Output = Decimal;

    fn mul(self, rhs: &Decimal) -> Decimal {
        if self.is_zero() || rhs.is_zero() {
            return Decimal::zero();
        }
        Decimal {
            negative: self.negative != rhs.negative,
            significand: &self.significand * &rhs.significand,
            exponent: self.exponent + rhs.exponent,
        }
    }
}

impl fmt::Display for Decimal {
    /// Shortest positional form with trailing zeros dropped, keeping at least
    /// one fractional digit (`20.0`, `23.4`). Very large or small magnitudes
    /// switch to `1.5e-12` notation.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0.0");
        }
        let raw = self.significand.to_str_radix(10);
        let trimmed = raw.trim_end_matches('0');
        let digits = if trimmed.is_empty() { "0" } else { trimmed };
        let exponent = self.exponent + (raw.len() - digits.len()) as i64;
        let len = digits.len() as i64;
        // digits before the decimal point
        let point = len + exponent;
        let sign = if self.negative { "-" } else { "" };
        if point - 1 < -5 || point > 21 {
            let (head, tail) = digits.split_at(1);
            let tail = if tail.is_empty() { "0" } else { tail };
            return write!(f, "{sign}{head}.{tail}e{}", point - 1);
        }
        if point <= 0 {
            write!(f, "{sign}0.{}{digits}", "0".repeat((-point) as usize))
        } else if point >= len {
            write!(f, "{sign}{digits}{}.0", "0".repeat((point - len) as usize))
        } else {
            let (int, frac) = digits.split_at(point as usize);
            write!(f, "{sign}{int}.{frac}")
        }
    }
}

pub(crate) fn pow10(e: u32) -> BigUint {
    BigUint::from(10u32).pow(e)
}

fn decimal_len(n: &BigUint) -> u32 {
    if n.is_zero() {
        return 1;
    }
    // bit-length estimate, corrected by at most one step
    let bits = n.bits();
    let mut guess = ((bits - 1) as f64 * std::f64::consts::LOG10_2).floor() as u32 + 1;
    if *n >= pow10(guess) {
        guess += 1;
    } else if guess > 1 && *n < pow10(guess - 1) {
        guess -= 1;
    }
    guess
}

fn scaled(num: &BigUint, den: &BigUint, shift: i64) -> (BigUint, BigUint) {
    if shift >= 0 {
        (num * pow10(shift as u32), den.clone())
    } else {
        (num.clone(), den * pow10((-shift) as u32))
    }
}

static PI_CACHE: Mutex<Option<(u32, BigUint)>> = Mutex::new(None);

/// `floor(π · 10^digits)` up to a few units in the last place, via Machin's
/// formula `π = 16·atan(1/5) − 4·atan(1/239)`.
pub fn pi_scaled(digits: u32) -> BigUint {
    {
        let cache = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
        if let Some((have, value)) = cache.as_ref() {
            if *have >= digits {
                return value / pow10(*have - digits);
            }
        }
    }
    let guard = 10;
    let scale = pow10(digits + guard);
    let pi = atan_inv(5, &scale) * 16u32 - atan_inv(239, &scale) * 4u32;
    let value = pi / pow10(guard);
    let mut cache = PI_CACHE.lock().unwrap_or_else(|e| e.into_inner());
    match cache.as_ref() {
        Some((have, _)) if *have >= digits => {}
        _ => *cache = Some((digits, value.clone())),
    }
    value
}

fn atan_inv(x: u32, scale: &BigUint) -> BigUint {
    let x2 = BigUint::from(x) * x;
    let mut power = scale / x;
    let mut sum = power.clone();
    let mut k = 1u32;
    let mut positive = false;
    loop {
        power /= &x2;
        if power.is_zero() {
            break;
        }
        let term = &power / (2 * k + 1);
        if positive {
            sum += term;
        } else {
            sum -= term;
        }
        positive = !positive;
        k += 1;
    }
    sum
}

/// Natural log of a big unsigned integer, accurate to f64 precision.
pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 900 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dec(num: u64, den: u64, p: u32) -> Decimal {
        Decimal::from_ratio(false, &BigUint::from(num), &BigUint::from(den), p)
    }

    #[test]
    fn pi_digits() {
        let p = pi_scaled(50).to_str_radix(10);
        assert_eq!(p, "314159265358979323846264338327950288419716939937510");
        // served from cache at lower precision
        assert_eq!(pi_scaled(5).to_str_radix(10), "314159");
    }

    #[test]
    fn rounding_half_even() {
        assert_eq!(dec(125, 100, 2).to_string(), "1.2");
        assert_eq!(dec(135, 100, 2).to_string(), "1.4");
        assert_eq!(dec(1, 3, 4).to_string(), "0.3333");
        assert_eq!(dec(2, 3, 4).to_string(), "0.6667");
        assert_eq!(dec(999, 1, 2).to_string(), "1000.0");
    }

    #[test]
    fn display_forms() {
        assert_eq!(dec(1, 1, 15).to_string(), "1.0");
        assert_eq!(dec(20, 1, 6).to_string(), "20.0");
        assert_eq!(dec(1008, 43, 3).to_string(), "23.4");
        assert_eq!(dec(1, 1_000_000_000, 3).to_string(), "1.0e-9");
        assert_eq!(dec(1, 1000, 3).to_string(), "0.001");
        assert_eq!(Decimal::zero().to_string(), "0.0");
    }

    #[test]
    fn round_to_and_mul() {
        let a = dec(1, 3, 10);
        let b = &a * &a;
        assert_eq!(b.precision(), 20);
        assert_eq!(b.round_to(5).to_string(), "0.11111");
        assert_eq!(a.leading_exponent(), -1);
    }
}
