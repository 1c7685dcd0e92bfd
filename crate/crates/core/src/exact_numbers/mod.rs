//! Exact values of the form `q · π^a · (√d)^b` with `q` rational, `a` an
//! integer and `b ∈ {0, 1}`.
//!
//! Every covolume, zeta value and L-value handled by this crate lives in
//! this set: even zeta values are rational multiples of `π^k`, odd-argument
//! L-values of an imaginary quadratic character are rational multiples of
//! `√d · π^k`, and factorials and powers of `2π` stay inside `ℚ·π^ℤ`.

mod decimal;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};

pub use decimal::{pi_scaled, Decimal};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Default number of significant digits for float rendering.
pub const DEFAULT_DIGITS: u32 = 15;

const GUARD_DIGITS: u32 = 10;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `coeff · π^pi_exp · (√d)^sqrt_d_exp`, kept canonical:
/// zero is `0 · π^0`, and `d` is reset to 1 whenever the radical is absent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactValue {
    coeff: Rational,
    pi_exp: i32,
    sqrt_d_exp: u8,
    d: u64,
}

impl ExactValue {
    pub fn new(coeff: Rational, pi_exp: i32, sqrt_d_exp: u8, d: u64) -> Result<Self> {
        if !arith::is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        if sqrt_d_exp > 1 {
            return Err(Error::Parse(format!(
                "sqrt exponent must be 0 or 1, got {sqrt_d_exp}"
            )));
        }
        Ok(Self::canonical(coeff, pi_exp, sqrt_d_exp, d))
    }

    fn canonical(coeff: Rational, pi_exp: i32, sqrt_d_exp: u8, d: u64) -> Self {
        debug_assert!(sqrt_d_exp <= 1);
        if coeff.is_zero() {
            return ExactValue {
                coeff,
                pi_exp: 0,
                sqrt_d_exp: 0,
                d: 1,
            };
        }
        let radical = sqrt_d_exp == 1 && d != 1;
        ExactValue {
            coeff,
            pi_exp,
            sqrt_d_exp: radical as u8,
            d: if radical { d } else { 1 },
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::canonical(q, 0, 0, 1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(integer(n))
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn pi_power(a: i32) -> Self {
        Self::canonical(Rational::one(), a, 0, 1)
    }

    /// `√n` for any `n ≥ 1`, with square factors pulled into the coefficient.
    pub fn sqrt(n: u64) -> Self {
        let (s, core) = arith::square_decompose(n);
        Self::canonical(integer(s as i64), 0, 1, core)
    }

    /// `n^(num/2)` for a positive integer base and any integer half-exponent.
    pub fn half_power(n: u64, half_exp: i64) -> Self {
        let whole = half_exp.div_euclid(2);
        let base = Self::from_rational(rational_pow(&integer(n as i64), whole));
        if half_exp.rem_euclid(2) == 1 {
            base.mul(&Self::sqrt(n)).expect("radical-free base")
        } else {
            base
        }
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn pi_exp(&self) -> i32 {
        self.pi_exp
    }

    pub fn sqrt_d_exp(&self) -> u8 {
        self.sqrt_d_exp
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.coeff.is_positive()
    }

    fn shared_radical(&self, other: &Self) -> Result<u64> {
        match (self.sqrt_d_exp, other.sqrt_d_exp) {
            (1, 1) if self.d != other.d => Err(Error::IncompatibleField {
                left: self.d,
                right: other.d,
            }),
            (1, _) => Ok(self.d),
            (_, 1) => Ok(other.d),
            _ => Ok(1),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.shared_radical(other)?;
        let mut coeff = &self.coeff * &other.coeff;
        let mut b = self.sqrt_d_exp + other.sqrt_d_exp;
        if b == 2 {
            coeff *= integer(d as i64);
            b = 0;
        }
        Ok(Self::canonical(coeff, self.pi_exp + other.pi_exp, b, d))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(c·√d) = √d / (c·d)
        let mut denom = self.coeff.clone();
        if self.sqrt_d_exp == 1 {
            denom *= integer(self.d as i64);
        }
        Ok(Self::canonical(
            denom.recip(),
            -self.pi_exp,
            self.sqrt_d_exp,
            self.d,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.shared_radical(other)?;
        self.mul(&other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::canonical(&self.coeff * q, self.pi_exp, self.sqrt_d_exp, self.d)
    }

    /// Sum of two values of the same shape (same π exponent and radical).
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_exp != other.pi_exp || self.sqrt_d_exp != other.sqrt_d_exp || self.d != other.d {
            return Err(Error::IncompatibleTerms {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(Self::canonical(
            &self.coeff + &other.coeff,
            self.pi_exp,
            self.sqrt_d_exp,
            self.d,
        ))
    }

    pub fn as_rational(&self) -> Result<Rational> {
        if self.pi_exp == 0 && self.sqrt_d_exp == 0 {
            Ok(self.coeff.clone())
        } else {
            Err(Error::NotRational {
                pi_exp: self.pi_exp,
                sqrt_d_exp: self.sqrt_d_exp,
            })
        }
    }

    /// Correctly rounded decimal to `digits` significant digits (ties to
    /// even), evaluated with π and √d carried to `digits + 10` guard digits
    /// plus headroom for the π power.
    pub fn to_decimal(&self, digits: u32) -> Decimal {
        assert!(digits >= 1, "precision_digits must be at least 1");
        if self.is_zero() {
            return Decimal::zero();
        }
        let a = self.pi_exp.unsigned_abs();
        let s = digits + GUARD_DIGITS + 10 + decimal_digits(a as u64) * 2;
        let unit = decimal::pow10(s);
        let mut num = self.coeff.numer().magnitude().clone();
        let mut den = self.coeff.denom().magnitude().clone();
        if a > 0 {
            let pi = pi_scaled(s);
            let pi_pow = pi.pow(a);
            let unit_pow = unit.pow(a);
            if self.pi_exp > 0 {
                num *= pi_pow;
                den *= unit_pow;
            } else {
                num *= unit_pow;
                den *= pi_pow;
            }
        }
        if self.sqrt_d_exp == 1 {
            let root = (BigUint::from(self.d) * &unit * &unit).sqrt();
            num *= root;
            den *= &unit;
        }
        Decimal::from_ratio(self.coeff.is_negative(), &num, &den, digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_decimal(17).to_f64()
    }

    /// `ln|x|` to f64 accuracy; usable where `to_f64` would overflow.
    pub fn ln_abs(&self) -> f64 {
        let ln_num = decimal::ln_biguint(self.coeff.numer().magnitude());
        let ln_den = decimal::ln_biguint(self.coeff.denom().magnitude());
        ln_num - ln_den
            + self.pi_exp as f64 * std::f64::consts::PI.ln()
            + 0.5 * self.sqrt_d_exp as f64 * (self.d as f64).ln()
    }
}

fn decimal_digits(n: u64) -> u32 {
    n.to_string().len() as u32
}

/// `q^e` for any integer exponent; `0^negative` panics.
pub fn rational_pow(q: &Rational, e: i64) -> Rational {
    let p = num_traits::pow(q.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

pub fn exact_mul(x: &ExactValue, y: &ExactValue) -> Result<ExactValue> {
    x.mul(y)
}

pub fn exact_div(x: &ExactValue, y: &ExactValue) -> Result<ExactValue> {
    x.div(y)
}

pub fn exact_to_float(x: &ExactValue, precision_digits: u32) -> Decimal {
    x.to_decimal(precision_digits)
}

pub fn as_rational(x: &ExactValue) -> Result<Rational> {
    x.as_rational()
}

impl fmt::Display for ExactValue {
    /// `<coeff> * pi^<a> * sqrt(<d>)`, zero exponents elided and exponent 1
    /// written bare.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coeff)?;
        if self.is_zero() {
            return Ok(());
        }
        match self.pi_exp {
            0 => {}
            1 => f.write_str(" * pi")?,
            a => write!(f, " * pi^{a}")?,
        }
        if self.sqrt_d_exp == 1 {
            write!(f, " * sqrt({})", self.d)?;
        }
        Ok(())
    }
}

impl FromStr for ExactValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("{what} in {s:?}"));
        let mut acc = ExactValue::one();
        let mut saw_any = false;
        for (i, raw) in s.split('*').enumerate() {
            let tok = raw.trim();
            if tok.is_empty() {
                return Err(bad("empty factor"));
            }
            saw_any = true;
            let factor = if let Some(rest) = tok.strip_prefix("pi") {
                let a = match rest.strip_prefix('^') {
                    Some(e) => e.parse::<i32>().map_err(|_| bad("bad pi exponent"))?,
                    None if rest.is_empty() => 1,
                    None => return Err(bad("bad pi factor")),
                };
                ExactValue::pi_power(a)
            } else if let Some(rest) = tok.strip_prefix("sqrt(") {
                let close = rest.find(')').ok_or_else(|| bad("unclosed sqrt"))?;
                let n: u64 = rest[..close]
                    .trim()
                    .parse()
                    .map_err(|_| bad("bad sqrt argument"))?;
                if n == 0 {
                    return Err(bad("sqrt(0)"));
                }
                let exp = match rest[close + 1..].strip_prefix('^') {
                    Some(e) => e.parse::<u8>().map_err(|_| bad("bad sqrt exponent"))?,
                    None if rest[close + 1..].is_empty() => 1,
                    None => return Err(bad("trailing text after sqrt")),
                };
                match exp {
                    0 => ExactValue::one(),
                    1 => ExactValue::sqrt(n),
                    _ => return Err(bad("sqrt exponent must be 0 or 1")),
                }
            } else if i == 0 {
                let q: Rational = tok.parse().map_err(|_| bad("bad coefficient"))?;
                ExactValue::from_rational(q)
            } else {
                return Err(bad("unexpected factor"));
            };
            acc = acc.mul(&factor)?;
        }
        if !saw_any {
            return Err(bad("empty value"));
        }
        Ok(acc)
    }
}

impl From<Rational> for ExactValue {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))
}
