//! Hirzebruch–Mumford covolumes of `𝔹^n / SU(L_n, 𝒪_K)` and
//! `𝔹^n / SU(M_n, 𝒪_K)`.
//!
//! Each covolume is assembled as
//!
//! ```text
//! |D|^{(n²+3n)/4} · Π_{j=1}^{n} j!/(2π)^{j+1} · ζ(2)·L(3)·ζ(4)·L(5)·… · (local factors)
//! ```
//!
//! where the special-value chain alternates between even zeta values and
//! odd L-values and stops at index `n + 1`, and the local factors depend on
//! the lattice, the parity of `n`, and whether `D = −d` or `D = −4d`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::characters::{field_params, kronecker, QuadChar};
use crate::error::{Error, Result};
use crate::exact_numbers::{integer, rational, rational_pow, ExactValue, Rational};
use crate::special_values::{l_numeric, l_odd_exact, zeta_even_exact, zeta_numeric};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Lattice {
    /// `diag(1, …, 1, −1)`
    L,
    /// `diag(1, …, 1, −2)`
    M,
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lattice::L => "L",
            Lattice::M => "M",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiscCase {
    /// `D = −d`, for `d ≡ 3 (mod 4)`.
    MinusD,
    /// `D = −4d`, for `d ≡ 1, 2 (mod 4)`.
    MinusFourD,
}

impl DiscCase {
    /// The case matching the fundamental discriminant of `ℚ(√−d)`.
    pub fn for_field(d: u64) -> DiscCase {
        if d % 4 == 3 {
            DiscCase::MinusD
        } else {
            DiscCase::MinusFourD
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Covolume {
    pub lattice: Lattice,
    pub n: u32,
    pub d: u64,
    pub disc_case: DiscCase,
    pub value: ExactValue,
}

fn character_for(d: u64, case: DiscCase) -> Result<QuadChar> {
    let params = field_params(d)?;
    if DiscCase::for_field(d) != case {
        return Err(Error::DiscCaseMismatch { d, case });
    }
    Ok(params.character())
}

fn factorial(n: u32) -> Rational {
    (1..=n as i64).fold(integer(1), |acc, j| acc * integer(j))
}

/// `ζ(k)` for even `k`, `L(k, χ_D)` for odd `k`.
fn chain_value(k: u32, chi: &QuadChar) -> Result<ExactValue> {
    if k.is_multiple_of(2) {
        zeta_even_exact(k)
    } else {
        Ok(l_odd_exact(k, chi)?.value)
    }
}

/// Factors common to every row: `|D|^{(n²+3n)/4} · Π j!/(2π)^{j+1}`, times
/// the special-value chain `ζ(2)·L(3)·…` up to index `n + 1`.
fn common_product(n: u32, chi: &QuadChar) -> Result<ExactValue> {
    let mut acc = ExactValue::half_power(chi.conductor(), (n as i64 * (n as i64 + 3)) / 2);
    for j in 1..=n {
        let scale = factorial(j) / rational_pow(&integer(2), j as i64 + 1);
        acc = acc
            .scale(&scale)
            .mul(&ExactValue::pi_power(-(j as i32 + 1)))?;
    }
    for k in 2..=n + 1 {
        acc = acc.mul(&chain_value(k, chi)?)?;
    }
    Ok(acc)
}

/// `Π_{p | d} (1 + (ε·twist / p) · p^{−(n+1)/2})` with `ε = (−1)^{(n+3)/2}`,
/// for odd `n`.
fn local_product(n: u32, d: u64, twist: i64) -> Rational {
    debug_assert!(n % 2 == 1);
    let eps: i64 = if ((n + 3) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    arith::prime_factors(d)
        .into_iter()
        .map(|p| {
            let sym = kronecker(eps * twist, p as i64);
            integer(1)
                + integer(sym as i64) * rational_pow(&integer(p as i64), -((n as i64 + 1) / 2))
        })
        .fold(integer(1), |acc, f| acc * f)
}

/// `2^n · (1 − e^{n+1} 2^{−(n+1)}) / (1 − e/2)` with `e = (−d/2)`.
fn two_adic_factor(n: u32, d: u64) -> Rational {
    let e = integer(kronecker(-(d as i64), 2) as i64);
    let half = rational(1, 2);
    let numer = integer(1) - rational_pow(&e, n as i64 + 1) * rational_pow(&half, n as i64 + 1);
    let denom = integer(1) - &e * half;
    rational_pow(&integer(2), n as i64) * numer / denom
}

/// The rational correction multiplying the common product for a given row.
fn row_factor(lattice: Lattice, n: u32, d: u64, case: DiscCase) -> Rational {
    let odd = n % 2 == 1;
    let below_two = integer(1) - rational_pow(&rational(1, 2), n as i64 + 1);
    match (lattice, odd, case) {
        (Lattice::L, false, _) => integer(1),
        (Lattice::L, true, DiscCase::MinusFourD) => below_two * local_product(n, d, 1),
        (Lattice::L, true, DiscCase::MinusD) => local_product(n, d, 1),
        (Lattice::M, false, DiscCase::MinusFourD) => {
            rational_pow(&integer(2), n as i64) - integer(1)
        }
        (Lattice::M, false, DiscCase::MinusD) => two_adic_factor(n, d),
        (Lattice::M, true, DiscCase::MinusFourD) => {
            below_two * local_product(n, d, 2) * rational_pow(&integer(2), n as i64)
        }
        (Lattice::M, true, DiscCase::MinusD) => local_product(n, d, 2) * two_adic_factor(n, d),
    }
}

pub fn covolume(lattice: Lattice, n: u32, d: u64, disc_case: DiscCase) -> Result<Covolume> {
    if n < 1 {
        return Err(Error::InvalidRank(n));
    }
    let chi = character_for(d, disc_case)?;
    let value = common_product(n, &chi)?.scale(&row_factor(lattice, n, d, disc_case));

    // π^{−Σ(j+1)} from the factorial product against π^{Σ k} from the chain
    let expected_pi: i32 =
        (2..=n as i32 + 1).sum::<i32>() - (1..=n as i32).map(|j| j + 1).sum::<i32>();
    if value.pi_exp() != expected_pi {
        return Err(Error::Internal(format!(
            "Vol({lattice}_{n}) for d = {d} has pi exponent {} (expected {expected_pi})",
            value.pi_exp()
        )));
    }
    if !value.is_positive() {
        return Err(Error::Internal(format!(
            "Vol({lattice}_{n}) for d = {d} is not positive: {value}"
        )));
    }
    Ok(Covolume {
        lattice,
        n,
        d,
        disc_case,
        value,
    })
}

pub fn vol_l(n: u32, d: u64, disc_case: DiscCase) -> Result<Covolume> {
    covolume(Lattice::L, n, d, disc_case)
}

pub fn vol_m(n: u32, d: u64, disc_case: DiscCase) -> Result<Covolume> {
    covolume(Lattice::M, n, d, disc_case)
}

/// Floating-point recomputation of a covolume with the closed-form special
/// values replaced by truncated Dirichlet series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CovolumeCheck {
    pub ln_numeric: f64,
    pub ln_exact: f64,
    pub relative_deviation: f64,
}

impl CovolumeCheck {
    pub fn numeric_value(&self) -> f64 {
        self.ln_numeric.exp()
    }
}

pub fn vol_numeric(c: &Covolume, terms: u64) -> CovolumeCheck {
    let chi = character_for(c.d, c.disc_case).expect("covolume was built for a valid field");
    let n = c.n;
    let two_pi_ln = (2.0 * std::f64::consts::PI).ln();
    let mut ln = (chi.conductor() as f64).ln() * (n as f64 * (n as f64 + 3.0) / 4.0);
    let mut ln_fact = 0.0;
    for j in 1..=n {
        ln_fact += (j as f64).ln();
        ln += ln_fact - (j as f64 + 1.0) * two_pi_ln;
    }
    for k in 2..=n + 1 {
        let est = if k % 2 == 0 {
            zeta_numeric(k, terms)
        } else {
            l_numeric(k, &chi, terms)
        };
        ln += est.value.ln();
    }
    ln += ExactValue::from_rational(row_factor(c.lattice, n, c.d, c.disc_case)).ln_abs();
    let ln_exact = c.value.ln_abs();
    CovolumeCheck {
        ln_numeric: ln,
        ln_exact,
        relative_deviation: (ln - ln_exact).exp_m1().abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_values::DEFAULT_TERMS;

    const SUPPORTED: [u64; 7] = [3, 7, 11, 19, 43, 67, 163];

    /// Direct transcription of the even-n, D = −d row for n = 2, d = 3:
    /// 3^{5/2} · (1!/(2π)²) · (2!/(2π)³) · ζ(2) · L(3).
    #[test]
    fn assembled_by_hand() {
        let v = vol_l(2, 3, DiscCase::MinusD).unwrap();
        let by_hand = ExactValue::half_power(3, 5)
            .mul(
                &ExactValue::from_rational(rational(2, 32))
                    .mul(&ExactValue::pi_power(-5))
                    .unwrap(),
            )
            .unwrap()
            .mul(&"1/6 * pi^2".parse().unwrap())
            .unwrap()
            .mul(&"4/243 * pi^3 * sqrt(3)".parse().unwrap())
            .unwrap();
        assert_eq!(v.value, by_hand);
        assert_eq!(v.value.as_rational().unwrap(), rational(1, 216));
    }

    #[test]
    fn m_over_l_ratios() {
        let ratio = |d| {
            let m = vol_m(2, d, DiscCase::MinusD).unwrap();
            let l = vol_l(2, d, DiscCase::MinusD).unwrap();
            m.value.div(&l.value).unwrap().as_rational().unwrap()
        };
        assert_eq!(ratio(7), integer(7));
        assert_eq!(ratio(11), integer(3));
    }

    #[test]
    fn positive_over_sweep() {
        for d in SUPPORTED {
            for n in 1..=12 {
                for lattice in [Lattice::L, Lattice::M] {
                    let c = covolume(lattice, n, d, DiscCase::MinusD).unwrap();
                    assert!(c.value.is_positive());
                    assert_eq!(c.value.pi_exp(), 0);
                }
            }
        }
    }

    #[test]
    fn odd_rank_ratio_is_rational() {
        for d in SUPPORTED {
            for n in (1..=11).step_by(2) {
                let m = vol_m(n, d, DiscCase::MinusD).unwrap();
                let l = vol_l(n, d, DiscCase::MinusD).unwrap();
                assert!(m.value.div(&l.value).unwrap().as_rational().is_ok());
            }
        }
    }

    #[test]
    fn case_mismatch_and_rank() {
        assert_eq!(
            vol_l(2, 7, DiscCase::MinusFourD),
            Err(Error::DiscCaseMismatch {
                d: 7,
                case: DiscCase::MinusFourD
            })
        );
        assert!(vol_l(2, 5, DiscCase::MinusD).is_err());
        assert_eq!(vol_l(0, 7, DiscCase::MinusD), Err(Error::InvalidRank(0)));
        assert_eq!(
            vol_l(2, 12, DiscCase::MinusD),
            Err(Error::NotSquarefree(12))
        );
    }

    #[test]
    fn oracle_agreement_minus_d() {
        let v = vol_l(3, 7, DiscCase::MinusD).unwrap();
        assert!(vol_numeric(&v, DEFAULT_TERMS).relative_deviation < 1e-8);
        let v = vol_l(1, 3, DiscCase::MinusD).unwrap();
        assert!(vol_numeric(&v, DEFAULT_TERMS).relative_deviation < 1e-8);
    }

    #[test]
    fn oracle_agreement_minus_four_d() {
        for d in [1u64, 2, 5, 6] {
            for n in 1..=8 {
                for lattice in [Lattice::L, Lattice::M] {
                    let c = covolume(lattice, n, d, DiscCase::MinusFourD).unwrap();
                    let dev = vol_numeric(&c, DEFAULT_TERMS).relative_deviation;
                    assert!(dev < 1e-8, "{lattice}_{n}, d = {d}: {dev}");
                }
            }
        }
    }

    #[test]
    fn short_oracle_is_coarser() {
        let v = vol_l(4, 7, DiscCase::MinusD).unwrap();
        let long = vol_numeric(&v, DEFAULT_TERMS).relative_deviation;
        let short = vol_numeric(&v, 1_000).relative_deviation;
        assert!(short < 1e-4);
        assert!(long <= short);
    }
}
