//! The invariant
//!
//! ```text
//! K(Γ) = Σ_[π] (n_π − 1)/n_π · Vol(𝔹^{n−1}/Γ_π) / Vol(𝔹^n/Γ)
//! ```
//!
//! for `Γ = U(L_n, 𝒪_K)`, computed two ways: from the covolumes directly
//! (`k_raw`) and from the simplified closed forms specialised to `d = 3`,
//! `d = 7` and `d ≥ 11` (`k_closed`). Both must agree exactly.
//!
//! Since `𝒪_K` is a p.i.d. and 2 is unramified, roots of `L_n` have length 1
//! or 2 and each length is a single orbit; the mirror stabilisers are
//! `U(L_{n−1})` and `U(M_{n−1})` respectively.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characters::QuadChar;
use crate::covolumes::{covolume, vol_l, DiscCase, Lattice};
use crate::error::{Error, Result};
use crate::exact_numbers::{integer, rational, rational_pow, ExactValue, Rational};
use crate::special_values::{l_odd_exact, zeta_even_exact};

/// `ℚ(√−d)` with class number one and 2 unramified.
pub const SUPPORTED_FIELDS: [u64; 7] = [3, 7, 11, 19, 43, 67, 163];

pub fn check_supported(d: u64) -> Result<()> {
    if SUPPORTED_FIELDS.contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedField(d))
    }
}

fn check_args(d: u64, n: u32) -> Result<()> {
    check_supported(d)?;
    if n < 2 {
        return Err(Error::DimensionTooSmall(n));
    }
    Ok(())
}

/// One Γ-conjugacy class of mirrors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorClass {
    pub root_length: u32,
    /// Lattice whose unitary group is the mirror stabiliser (rank `n − 1`).
    pub stabilizer: Lattice,
    pub stabilizer_rank: u32,
    pub reflection_order: u32,
    /// `(n_π − 1) / n_π`
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionData {
    pub classes: [MirrorClass; 2],
}

/// Mirror classes of `U(L_n)`. For `d = 3` the unit group has order 6 and
/// reflections in unit-length roots have order 6.
pub fn reflection_data(d: u64, n: u32) -> Result<ReflectionData> {
    check_args(d, n)?;
    let short_order = if d == 3 { 6 } else { 2 };
    let class = |root_length, stabilizer, order: u32| MirrorClass {
        root_length,
        stabilizer,
        stabilizer_rank: n - 1,
        reflection_order: order,
        weight: rational(order as i64 - 1, order as i64),
    };
    Ok(ReflectionData {
        classes: [class(1, Lattice::L, short_order), class(2, Lattice::M, 2)],
    })
}

/// `K(Γ)` from the covolume formulas.
pub fn k_raw(d: u64, n: u32) -> Result<Rational> {
    let data = reflection_data(d, n)?;
    let ambient = vol_l(n, d, DiscCase::MinusD)?;
    let mut numerator = ExactValue::zero();
    for class in &data.classes {
        let stab = covolume(class.stabilizer, class.stabilizer_rank, d, DiscCase::MinusD)?;
        numerator = numerator.try_add(&stab.value.scale(&class.weight))?;
    }
    let k = numerator.div(&ambient.value)?;
    k.as_rational().map_err(|e| {
        Error::Internal(format!(
            "K(d = {d}, n = {n}) did not reduce to a rational ({e}): {k}"
        ))
    })
}

fn zeta_or_l(k: u32, d: u64) -> Result<ExactValue> {
    if k.is_multiple_of(2) {
        zeta_even_exact(k)
    } else {
        Ok(l_odd_exact(k, &QuadChar::for_field(d)?)?.value)
    }
}

fn exact(q: Rational) -> ExactValue {
    ExactValue::from_rational(q)
}

/// `(2π)^m`
fn two_pi_pow(m: u32) -> ExactValue {
    exact(rational_pow(&integer(2), m as i64))
        .mul(&ExactValue::pi_power(m as i32))
        .expect("radical-free")
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(integer(1), |acc, j| acc * integer(j))
}

/// `K` from the simplified displays:
///
/// * odd `n`, `d ≥ 11`: `(2π)^{n+1}(1 + (2^n+1)/3) / (2(d^{(n+1)/2} ± 1) n! ζ(n+1))`
/// * odd `n`, `d = 7`: `(2π)^{n+1} 2^n / (2(7^{(n+1)/2} ± 1) n! ζ(n+1))`
/// * odd `n`, `d = 3`: `(2π)^{n+1}(6 + 2^n) / (6(3^{(n+1)/2} ± 1) n! ζ(n+1))`
///
///   with `+` for `n ≡ 1 (mod 4)` and `−` for `n ≡ 3 (mod 4)`;
/// * even `n`, `d ≥ 11`: `(2π)^{n+1}(1 ∓ x + (2^n−1)/3 · (1 ± x)) / (2 d^{(n+1)/2} n! L(n+1))`
/// * even `n`, `d = 7`: `π^{n+1} 2^{2n} (1 ∓ x) / (7^{(n+1)/2} n! L(n+1))`
/// * even `n`, `d = 3`: `(2π)^{n+1}(5(1 ∓ x) + (1 ± x)(2^n−1)) / (6 · 3^{(n+1)/2} n! L(n+1))`
///
///   with `x = d^{−n/2}` and the upper sign for `n ≡ 0 (mod 4)`.
pub fn k_closed(d: u64, n: u32) -> Result<Rational> {
    check_args(d, n)?;
    let nn = n as i64;
    let pow2n = rational_pow(&integer(2), nn);
    let one = integer(1);
    let special = zeta_or_l(n + 1, d)?;
    let n_fact = factorial(n);

    let (numer, denom) = if n % 2 == 1 {
        let sign = if n % 4 == 1 { 1 } else { -1 };
        let d_pow = rational_pow(&integer(d as i64), (nn + 1) / 2) + integer(sign);
        let (inner, lead) = match d {
            3 => (integer(6) + &pow2n, 6),
            7 => (pow2n.clone(), 2),
            _ => (&one + (&pow2n + &one) / integer(3), 2),
        };
        (
            two_pi_pow(n + 1).scale(&inner),
            special.scale(&(integer(lead) * d_pow * &n_fact)),
        )
    } else {
        let x = rational_pow(&integer(d as i64), -(nn / 2));
        let (minus, plus) = (&one - &x, &one + &x);
        let (first, second) = if n.is_multiple_of(4) {
            (&minus, &plus)
        } else {
            (&plus, &minus)
        };
        let root = ExactValue::half_power(d, nn + 1);
        match d {
            3 => {
                let inner = integer(5) * first + second * (&pow2n - &one);
                (
                    two_pi_pow(n + 1).scale(&inner),
                    root.mul(&special)?.scale(&(integer(6) * &n_fact)),
                )
            }
            7 => {
                let inner = rational_pow(&integer(2), 2 * nn) * first;
                (
                    exact(inner).mul(&ExactValue::pi_power(n as i32 + 1))?,
                    root.mul(&special)?.scale(&n_fact),
                )
            }
            _ => {
                let inner = first + (&pow2n - &one) / integer(3) * second;
                (
                    two_pi_pow(n + 1).scale(&inner),
                    root.mul(&special)?.scale(&(integer(2) * &n_fact)),
                )
            }
        }
    };
    let k = numer.div(&denom)?;
    k.as_rational().map_err(|e| {
        Error::Internal(format!(
            "closed-form K(d = {d}, n = {n}) did not reduce to a rational ({e}): {k}"
        ))
    })
}

/// `7(n+1)` for `d = 3` (generators of weight at least 6), else `2(n+1)`.
pub fn freeness_bound(d: u64, n: u32) -> u32 {
    if d == 3 {
        7 * (n + 1)
    } else {
        2 * (n + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    NotFree,
    PossiblyFree,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NotFree => "NotFree",
            Verdict::PossiblyFree => "PossiblyFree",
        })
    }
}

mod rational_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exact_numbers::{parse_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KReport {
    pub d: u64,
    pub n: u32,
    #[serde(with = "rational_string")]
    pub k_exact: Rational,
    pub k_float: f64,
    pub bound: u32,
    pub is_integer: bool,
    pub passes_bound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub congruence_ok: Option<bool>,
    pub verdict: Verdict,
}

impl KReport {
    fn assemble(d: u64, n: u32, k: Rational, enable_congruence: bool) -> Self {
        let bound = freeness_bound(d, n);
        let is_integer = k.is_integer();
        let passes_bound = k >= integer(bound as i64);
        let congruence_ok = (enable_congruence && d == 3)
            .then(|| is_integer && (k.to_integer() - (n as i64 + 1)) % 6 == 0.into());
        let verdict = if passes_bound && is_integer && congruence_ok.unwrap_or(true) {
            Verdict::PossiblyFree
        } else {
            Verdict::NotFree
        };
        KReport {
            d,
            n,
            k_float: exact(k.clone()).to_f64(),
            k_exact: k,
            bound,
            is_integer,
            passes_bound,
            congruence_ok,
            verdict,
        }
    }

    /// Re-derives every field from `(d, n, k_exact)` and checks they match.
    pub fn validate(&self) -> Result<()> {
        check_args(self.d, self.n)?;
        let expected = KReport::assemble(
            self.d,
            self.n,
            self.k_exact.clone(),
            self.congruence_ok.is_some(),
        );
        if expected != *self {
            return Err(Error::Parse(format!(
                "inconsistent report for d = {}, n = {}",
                self.d, self.n
            )));
        }
        Ok(())
    }

    /// `k_exact` rounded to `digits` significant digits.
    pub fn k_decimal(&self, digits: u32) -> String {
        exact(self.k_exact.clone()).to_decimal(digits).to_string()
    }
}

/// Evaluates both paths, insists they agree, and applies the necessary
/// conditions: `K ≥ bound`, `K ∈ ℤ`, and optionally `K ≡ n + 1 (mod 6)` for
/// `d = 3` (all weights there are multiples of 6).
pub fn verdict(d: u64, n: u32, enable_congruence: bool) -> Result<KReport> {
    let raw = k_raw(d, n)?;
    let closed = k_closed(d, n)?;
    if raw != closed {
        return Err(Error::Internal(format!(
            "K(d = {d}, n = {n}): covolume ratio {raw} != closed form {closed}"
        )));
    }
    Ok(KReport::assemble(d, n, raw, enable_congruence))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictTable {
    pub n_max: u32,
    pub congruence: bool,
    pub reports: Vec<KReport>,
}

impl VerdictTable {
    /// One line per field, plus a combined line for `d > 7` when every such
    /// field in the table is excluded.
    pub fn summary(&self) -> Vec<String> {
        let mut by_d: BTreeMap<u64, Vec<&KReport>> = BTreeMap::new();
        for r in &self.reports {
            by_d.entry(r.d).or_default().push(r);
        }
        let range = format!("2 <= n <= {}", self.n_max);
        let mut lines = Vec::new();
        let mut large = Vec::new();
        for (d, reports) in &by_d {
            let free: Vec<String> = reports
                .iter()
                .filter(|r| r.verdict == Verdict::PossiblyFree)
                .map(|r| r.n.to_string())
                .collect();
            if *d > 7 {
                large.push(free.is_empty());
            }
            lines.push(if free.is_empty() {
                format!("d = {d}: NotFree for every {range}")
            } else {
                format!(
                    "d = {d}: PossiblyFree only for n in {{{}}} ({range})",
                    free.join(", ")
                )
            });
        }
        if !large.is_empty() && large.iter().all(|&x| x) {
            lines.push(format!("d > 7: NotFree for every {range}"));
        }
        lines
    }

    pub fn possibly_free(&self) -> impl Iterator<Item = &KReport> {
        self.reports
            .iter()
            .filter(|r| r.verdict == Verdict::PossiblyFree)
    }
}

/// All `(d, n)` with `d` in `d_list` and `2 ≤ n ≤ n_max`, sorted by `d` then `n`.
pub fn sweep(d_list: &[u64], n_max: u32, enable_congruence: bool) -> Result<VerdictTable> {
    for &d in d_list {
        check_supported(d)?;
    }
    if n_max < 2 {
        return Err(Error::DimensionTooSmall(n_max));
    }
    let mut ds = d_list.to_vec();
    ds.sort_unstable();
    ds.dedup();
    let pairs: Vec<(u64, u32)> = ds
        .iter()
        .flat_map(|&d| (2..=n_max).map(move |n| (d, n)))
        .collect();
    let reports = pairs
        .par_iter()
        .map(|&(d, n)| verdict(d, n, enable_congruence))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerdictTable {
        n_max,
        congruence: enable_congruence,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_raw_examples() {
        assert_eq!(k_raw(7, 3).unwrap(), integer(20));
        assert_eq!(k_raw(7, 2).unwrap(), integer(14));
        assert_eq!(k_raw(7, 4).unwrap(), integer(24));
        assert_eq!(k_raw(3, 9).unwrap(), rational(5698, 61));
        assert_eq!(k_raw(11, 2).unwrap(), rational(11, 3));
        assert_eq!(k_raw(67, 2).unwrap(), rational(67, 251));
    }

    #[test]
    fn k_closed_examples() {
        let k75 = k_closed(7, 5).unwrap();
        // (2π)^6 · 2^5 / (2 · 344 · 120 · π^6/945)
        assert_eq!(k75, rational(64 * 32 * 945, 2 * 344 * 120));
        assert_eq!(exact(k75).to_decimal(3).to_string(), "23.4");
        assert_eq!(k_closed(3, 4).unwrap(), integer(95));
        assert_eq!(
            exact(k_closed(3, 10).unwrap()).to_decimal(3).to_string(),
            "67.3"
        );
    }

    #[test]
    fn argument_errors() {
        assert_eq!(k_raw(7, 1), Err(Error::DimensionTooSmall(1)));
        assert_eq!(k_raw(5, 3), Err(Error::UnsupportedField(5)));
        assert_eq!(k_closed(1, 3), Err(Error::UnsupportedField(1)));
        assert!(Error::DimensionTooSmall(1)
            .to_string()
            .contains("James requires dimension"));
    }

    #[test]
    fn bounds() {
        assert_eq!(freeness_bound(7, 3), 8);
        assert_eq!(freeness_bound(3, 2), 21);
        assert_eq!(freeness_bound(11, 2), 6);
    }

    #[test]
    fn reflection_weights() {
        let r3 = reflection_data(3, 4).unwrap();
        assert_eq!(r3.classes[0].weight, rational(5, 6));
        assert_eq!(r3.classes[0].reflection_order, 6);
        assert_eq!(r3.classes[1].weight, rational(1, 2));
        assert_eq!(r3.classes[1].stabilizer, Lattice::M);
        let r7 = reflection_data(7, 4).unwrap();
        assert_eq!(r7.classes[0].weight, rational(1, 2));
        assert_eq!(r7.classes[0].stabilizer_rank, 3);
    }

    #[test]
    fn verdict_examples() {
        let v = |d, n| verdict(d, n, false).unwrap();
        let r = v(7, 3);
        assert_eq!(r.verdict, Verdict::PossiblyFree);
        assert!(r.is_integer && r.passes_bound);
        let r = v(7, 5);
        assert_eq!(r.verdict, Verdict::NotFree);
        assert!(!r.is_integer && r.passes_bound);
        let r = v(7, 7);
        assert_eq!(r.verdict, Verdict::NotFree);
        assert!(!r.passes_bound);
        assert_eq!(v(3, 8).verdict, Verdict::NotFree);
        assert!(!v(3, 8).is_integer);
        let r = v(163, 2);
        assert_eq!(r.k_exact, rational(163, 2315));
        assert_eq!(r.verdict, Verdict::NotFree);
    }

    #[test]
    fn congruence_at_surviving_n() {
        for (n, k) in [(2, 39), (3, 70), (4, 95), (5, 114), (6, 127), (7, 134)] {
            let r = verdict(3, n, true).unwrap();
            assert_eq!(r.k_exact, integer(k));
            assert_eq!(r.congruence_ok, Some(true));
            assert_eq!(r.verdict, Verdict::PossiblyFree);
        }
        assert_eq!(verdict(3, 9, true).unwrap().congruence_ok, Some(false));
        assert_eq!(verdict(7, 3, true).unwrap().congruence_ok, None);
    }

    #[test]
    fn validate_detects_tampering() {
        let mut r = verdict(7, 3, false).unwrap();
        assert!(r.validate().is_ok());
        r.verdict = Verdict::NotFree;
        assert!(r.validate().is_err());
    }

    #[test]
    fn sweep_shape() {
        let t = sweep(&[7, 3, 7], 6, false).unwrap();
        assert_eq!(t.reports.len(), 10);
        assert_eq!((t.reports[0].d, t.reports[0].n), (3, 2));
        assert_eq!((t.reports[9].d, t.reports[9].n), (7, 6));
        assert!(sweep(&[5], 4, false).is_err());
        let lines = t.summary();
        assert_eq!(
            lines[0],
            "d = 3: PossiblyFree only for n in {2, 3, 4, 5, 6} (2 <= n <= 6)"
        );
        assert_eq!(
            lines[1],
            "d = 7: PossiblyFree only for n in {2, 3, 4} (2 <= n <= 6)"
        );
    }
}
