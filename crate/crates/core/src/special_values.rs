//! Closed forms for `ζ(2m)` and `L(k, χ_D)` at odd `k`, built from Bernoulli
//! and generalized Bernoulli numbers, plus truncated Dirichlet series used as
//! an independent floating-point check.

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::characters::QuadChar;
use crate::error::{Error, Result};
use crate::exact_numbers::{integer, rational_pow, ExactValue, Rational};

/// Append-only table of Bernoulli numbers (`B_1 = −1/2`).
///
/// Readers never see a partially written entry; two writers racing to extend
/// the table may both compute the same prefix, and only the longer result is
/// kept.
#[derive(Debug, Default)]
pub struct BernoulliCache {
    table: RwLock<Vec<Rational>>,
}

impl BernoulliCache {
    pub fn new() -> Self {
        BernoulliCache {
            table: RwLock::new(vec![Rational::one()]),
        }
    }

    pub fn global() -> &'static BernoulliCache {
        static CACHE: OnceLock<BernoulliCache> = OnceLock::new();
        CACHE.get_or_init(BernoulliCache::new)
    }

    pub fn get(&self, n: usize) -> Rational {
        {
            let table = self.table.read().unwrap_or_else(|e| e.into_inner());
            if let Some(b) = table.get(n) {
                return b.clone();
            }
        }
        let mut extended = self.table.read().unwrap_or_else(|e| e.into_inner()).clone();
        if extended.is_empty() {
            extended.push(Rational::one());
        }
        // Σ_{j=0}^{m} C(m+1, j) B_j = 0
        while extended.len() <= n {
            let m = extended.len();
            let mut binom = BigInt::one();
            let mut sum = Rational::zero();
            for (j, b) in extended.iter().enumerate() {
                if !b.is_zero() {
                    sum += b * Rational::from_integer(binom.clone());
                }
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            extended.push(-sum / integer(m as i64 + 1));
        }
        let value = extended[n].clone();
        let mut table = self.table.write().unwrap_or_else(|e| e.into_inner());
        if table.len() < extended.len() {
            *table = extended;
        }
        value
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn bernoulli(n: u32) -> Rational {
    BernoulliCache::global().get(n as usize)
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `B_n(x) = Σ_j C(n, j) B_j x^{n−j}`.
pub fn bernoulli_poly(n: u32, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for j in 0..=n {
        let b = bernoulli(j);
        if b.is_zero() {
            continue;
        }
        acc += Rational::from_integer(binomial(n, j)) * b * rational_pow(x, (n - j) as i64);
    }
    acc
}

/// `B_{n,χ} = f^{n−1} Σ_{a=1}^{f} χ(a) B_n(a/f)` with `f = |D|`.
///
/// Expanding `B_n(a/f)` turns this into
/// `Σ_j C(n, j) B_j f^{j−1} S_{n−j}` with the integer power sums
/// `S_m = Σ_a χ(a) a^m`, which keeps almost all work in integers.
pub fn gen_bernoulli(n: u32, character: &QuadChar) -> Rational {
    assert!(n >= 1, "generalized Bernoulli numbers are indexed from 1");
    let f = character.conductor() as i64;
    // power_sums[m] = S_m for m = 0..=n
    let mut power_sums = vec![BigInt::zero(); n as usize + 1];
    for a in 1..=f {
        let c = character.eval(a);
        if c == 0 {
            continue;
        }
        let base = BigInt::from(a);
        let mut power = BigInt::one();
        for slot in power_sums.iter_mut() {
            if c > 0 {
                *slot += &power;
            } else {
                *slot -= &power;
            }
            power *= &base;
        }
    }
    let mut sum = Rational::zero();
    for j in 0..=n {
        let b = bernoulli(j);
        let s = &power_sums[(n - j) as usize];
        if b.is_zero() || s.is_zero() {
            continue;
        }
        sum += Rational::from_integer(binomial(n, j) * s)
            * b
            * rational_pow(&integer(f), j as i64 - 1);
    }
    sum
}

/// `ζ(k) = (−1)^{k/2+1} (2π)^k B_k / (2·k!)` for even `k ≥ 2`.
pub fn zeta_even_exact(k: u32) -> Result<ExactValue> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::NoClosedForm(k));
    }
    let sign = if (k / 2) % 2 == 1 { 1 } else { -1 };
    let coeff = integer(sign) * rational_pow(&integer(2), k as i64) * bernoulli(k)
        / Rational::from_integer(factorial(k) * 2);
    ExactValue::from_rational(coeff).mul(&ExactValue::pi_power(k as i32))
}

/// Exact `L(k, χ_D)` for odd `k ≥ 3`, of the form `q · √|D| · π^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LValueExact {
    pub discriminant: i64,
    pub k: u32,
    pub value: ExactValue,
}

impl LValueExact {
    /// Rational `q` with `L(k) = q · √|D| · π^k`.
    pub fn coefficient(&self) -> Rational {
        let (s, _) = crate::arith::square_decompose(self.discriminant.unsigned_abs());
        self.value.coeff() / integer(s as i64)
    }
}

/// Functional equation for an odd primitive character of conductor `f`
/// (Gauss sum `i√f`):
/// `L(k, χ) = (−1)^{(k+1)/2} · (√f / 2) · (2π/f)^k · B_{k,χ} / k!`.
pub fn l_odd_exact(k: u32, character: &QuadChar) -> Result<LValueExact> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::NoClosedForm(k));
    }
    let f = character.conductor();
    let sign = if k.div_ceil(2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let coeff = integer(sign) * rational_pow(&integer(2), k as i64 - 1)
        / rational_pow(&integer(f as i64), k as i64)
        * gen_bernoulli(k, character)
        / Rational::from_integer(factorial(k));
    let value = ExactValue::from_rational(coeff)
        .mul(&ExactValue::sqrt(f))?
        .mul(&ExactValue::pi_power(k as i32))?;
    if !value.is_positive() {
        return Err(Error::Internal(format!(
            "L({k}, chi_{}) evaluated to non-positive {value}",
            character.discriminant()
        )));
    }
    Ok(LValueExact {
        discriminant: character.discriminant(),
        k,
        value,
    })
}

/// Truncated Dirichlet series with an a-priori bound on the omitted tail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesEstimate {
    pub value: f64,
    pub terms: u64,
    /// `∫_N^∞ x^{−k} dx = N^{1−k}/(k−1)`, which bounds `Σ_{m>N} |a_m| m^{−k}`.
    pub tail_bound: f64,
}

impl SeriesEstimate {
    pub fn relative_deviation(&self, exact: f64) -> f64 {
        ((self.value - exact) / exact).abs()
    }
}

fn tail_bound(k: u32, terms: u64) -> f64 {
    (terms as f64).powf(1.0 - k as f64) / (k as f64 - 1.0)
}

/// `Σ_{m ≤ terms} χ_D(m) m^{−k}`, summed smallest-first.
pub fn l_numeric(k: u32, character: &QuadChar, terms: u64) -> SeriesEstimate {
    assert!(k >= 2, "series needs k >= 2");
    let k = k as i32;
    let f = character.conductor() as i64;
    let pattern: Vec<f64> = (0..f).map(|r| character.eval(r) as f64).collect();
    let mut sum = 0.0f64;
    for m in (1..=terms).rev() {
        let c = pattern[(m as i64 % f) as usize];
        if c != 0.0 {
            sum += c * (m as f64).powi(-k);
        }
    }
    SeriesEstimate {
        value: sum,
        terms,
        tail_bound: tail_bound(k as u32, terms),
    }
}

/// `Σ_{m ≤ terms} m^{−k}` plus the Euler–Maclaurin estimate of the tail,
/// `N^{1−k}/(k−1) − N^{−k}/2 + k N^{−k−1}/12`. `tail_bound` bounds the
/// raw partial sum's error; the corrected value is far closer.
pub fn zeta_numeric(k: u32, terms: u64) -> SeriesEstimate {
    assert!(k >= 2, "series needs k >= 2");
    let ki = k as i32;
    let mut sum = 0.0f64;
    for m in (1..=terms).rev() {
        sum += (m as f64).powi(-ki);
    }
    let n = terms as f64;
    let tail =
        n.powi(1 - ki) / (k as f64 - 1.0) - 0.5 * n.powi(-ki) + k as f64 / 12.0 * n.powi(-ki - 1);
    SeriesEstimate {
        value: sum + tail,
        terms,
        tail_bound: tail_bound(k, terms),
    }
}

/// Default oracle length.
pub const DEFAULT_TERMS: u64 = 100_000;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::rational;
    use proptest::prelude::*;

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), integer(1));
        assert_eq!(bernoulli(1), rational(-1, 2));
        assert_eq!(bernoulli(2), rational(1, 6));
        assert_eq!(bernoulli(12), rational(-691, 2730));
        for k in 1..15 {
            assert!(bernoulli(2 * k + 1).is_zero());
        }
    }

    /// von Staudt–Clausen: denom(B_2k) = Π_{(p−1) | 2k} p.
    #[test]
    fn von_staudt_clausen() {
        for k in 1..=20u32 {
            let n = 2 * k;
            let expected: i64 = (2..=n as i64 + 1)
                .filter(|&p| crate::arith::prime_factors(p as u64) == vec![p as u64])
                .filter(|&p| n as i64 % (p - 1) == 0)
                .product();
            assert_eq!(bernoulli(n).denom(), &BigInt::from(expected), "B_{n}");
        }
    }

    #[test]
    fn bernoulli_poly_examples() {
        assert!(bernoulli_poly(1, &rational(1, 2)).is_zero());
        assert_eq!(bernoulli_poly(2, &integer(0)), rational(1, 6));
        // B_3(x) = x³ − 3x²/2 + x/2 at 1/3
        assert_eq!(bernoulli_poly(3, &rational(1, 3)), rational(1, 27));
    }

    #[test]
    fn gen_bernoulli_examples() {
        let c3 = QuadChar::for_field(3).unwrap();
        let c7 = QuadChar::for_field(7).unwrap();
        // class number formula B_{1,χ} = −2h/w
        assert_eq!(gen_bernoulli(1, &c3), rational(-1, 3));
        assert_eq!(gen_bernoulli(1, &c7), integer(-1));
        let c4 = QuadChar::for_field(1).unwrap();
        assert_eq!(gen_bernoulli(1, &c4), rational(-1, 2));
        for k in 1..=8 {
            assert!(gen_bernoulli(2 * k, &c7).is_zero());
        }
    }

    #[test]
    fn gen_bernoulli_matches_definition() {
        for d in [1u64, 2, 3, 7, 43] {
            let chi = QuadChar::for_field(d).unwrap();
            let f = chi.conductor() as i64;
            for n in 1..=9 {
                let direct: Rational = (1..=f)
                    .map(|a| integer(chi.eval(a) as i64) * bernoulli_poly(n, &rational(a, f)))
                    .sum::<Rational>()
                    * rational_pow(&integer(f), n as i64 - 1);
                assert_eq!(gen_bernoulli(n, &chi), direct, "d = {d}, n = {n}");
            }
        }
    }

    #[test]
    fn zeta_examples() {
        let z = |k| zeta_even_exact(k).unwrap();
        assert_eq!(
            z(2),
            ExactValue::from_rational(rational(1, 6))
                .mul(&ExactValue::pi_power(2))
                .unwrap()
        );
        assert_eq!(z(4).to_string(), "1/90 * pi^4");
        assert_eq!(z(6).to_string(), "1/945 * pi^6");
        assert_eq!(z(10).to_string(), "1/93555 * pi^10");
        assert_eq!(zeta_even_exact(3), Err(Error::NoClosedForm(3)));
        assert_eq!(zeta_even_exact(0), Err(Error::NoClosedForm(0)));
    }

    #[test]
    fn l_value_examples() {
        let l = |k, d| l_odd_exact(k, &QuadChar::for_field(d).unwrap()).unwrap();
        assert_eq!(l(3, 7).value.to_string(), "32/2401 * pi^3 * sqrt(7)");
        assert_eq!(l(3, 3).value.to_string(), "4/243 * pi^3 * sqrt(3)");
        assert_eq!(l(3, 163).coefficient(), rational(9260, 4330747));
        assert_eq!(l(11, 3).coefficient(), rational(14776, 7533176175));
        // D = −4: L(3, χ_{−4}) = π³/32
        assert_eq!(l(3, 1).value.to_string(), "1/32 * pi^3");
        assert_eq!(l(3, 1).coefficient(), rational(1, 64));
        let c7 = QuadChar::for_field(7).unwrap();
        assert_eq!(l_odd_exact(4, &c7), Err(Error::NoClosedForm(4)));
        assert_eq!(l_odd_exact(1, &c7), Err(Error::NoClosedForm(1)));
    }

    #[test]
    fn numeric_examples() {
        let c7 = QuadChar::for_field(7).unwrap();
        let s = l_numeric(3, &c7, 100_000);
        let exact = l_odd_exact(3, &c7).unwrap().value.to_f64();
        assert!(s.relative_deviation(exact) < 1e-9);
        assert!(s.tail_bound <= 1e-10 / 2.0 * 1.0000001);

        // no closed form at even k; reference values from the series
        // Σ_j (3j+1)^{-4} − (3j+2)^{-4} and the Dirichlet beta β(4)
        let c3 = QuadChar::for_field(3).unwrap();
        let l4 = l_numeric(4, &c3, 100_000).value;
        assert!((l4 - 0.940_025_680_877_124).abs() < 1e-12, "{l4}");
        let c4 = QuadChar::for_field(1).unwrap();
        let beta4 = l_numeric(4, &c4, 100_000).value;
        assert!((beta4 - 0.988_944_551_741_105).abs() < 1e-12, "{beta4}");

        let c11 = QuadChar::for_field(11).unwrap();
        let target = 12.0 / 1331.0 * 11f64.sqrt() * std::f64::consts::PI.powi(3);
        assert!(l_numeric(3, &c11, 100_000).relative_deviation(target) < 1e-9);

        let z2 = zeta_numeric(2, 1_000_000).value;
        assert!((z2 - 1.644934).abs() < 1e-6);
        let pi = std::f64::consts::PI;
        assert!((zeta_numeric(4, 10_000).value - pi.powi(4) / 90.0).abs() < 1e-10);
        assert!((zeta_numeric(6, 1_000).value - pi.powi(6) / 945.0).abs() < 1e-12);
    }

    #[test]
    fn concurrent_cache_reads() {
        let cache = BernoulliCache::new();
        std::thread::scope(|s| {
            for t in 0..4 {
                let cache = &cache;
                s.spawn(move || {
                    for n in (0..40).rev().skip(t) {
                        let _ = cache.get(n);
                    }
                });
            }
        });
        assert!(cache.len() >= 40);
        assert_eq!(cache.get(12), rational(-691, 2730));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn gen_bernoulli_parity(idx in 0usize..9, k in 1u32..14) {
            let d = [1u64, 2, 3, 5, 7, 11, 19, 43, 67][idx];
            let c = QuadChar::for_field(d).unwrap();
            let b = gen_bernoulli(k, &c);
            prop_assert_eq!(b.is_zero(), k % 2 == 0);
        }
    }
}
