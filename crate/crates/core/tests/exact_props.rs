//! Algebraic laws and decimal rendering of `ExactValue`, checked on 10⁴
//! generated cases each.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use proptest::prelude::*;

use hermfree::exact_numbers::{rational, Decimal, ExactValue};

const CASES: u32 = 10_000;

fn values() -> impl Strategy<Value = ExactValue> {
    (
        -10_000i64..10_000,
        1i64..10_000,
        -8i32..=8,
        0u8..=1,
        prop::sample::select(vec![1u64, 2, 3, 7, 11, 19, 43, 67, 163]),
    )
        .prop_map(|(p, q, a, b, d)| {
            // d = 1 carries no radical
            let b = if d == 1 { 0 } else { b };
            ExactValue::new(rational(p, q), a, b, d).expect("valid")
        })
}

/// Two values over the same field, so products are always defined.
fn pair() -> impl Strategy<Value = (ExactValue, ExactValue)> {
    (values(), values()).prop_map(|(x, y)| {
        let d = if x.sqrt_d_exp() == 1 { x.d() } else { y.d() };
        let y = ExactValue::new(
            y.coeff().clone(),
            y.pi_exp(),
            y.sqrt_d_exp(),
            if y.sqrt_d_exp() == 1 { d } else { 1 },
        )
        .expect("valid");
        (x, y)
    })
}

fn scaled(x: &Decimal, exponent: i64) -> BigInt {
    let s = BigInt::from(x.significand().clone())
        * BigInt::from(10u32).pow((x.exponent() - exponent) as u32);
    if x.is_negative() {
        -s
    } else {
        s
    }
}

/// `|a − b|` measured in units of the coarser last place.
fn ulp_distance(a: &Decimal, b: &Decimal) -> BigUint {
    let lo = a.exponent().min(b.exponent());
    let hi = a.exponent().max(b.exponent());
    let diff = (scaled(a, lo) - scaled(b, lo)).abs();
    let unit = BigInt::from(10u32).pow((hi - lo) as u32);
    // round up so that a partial unit counts as one
    let units: BigInt = (diff + &unit - 1) / unit;
    units.to_biguint().expect("non-negative")
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn multiplication_commutes((x, y) in pair()) {
        prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
    }

    #[test]
    fn multiplication_associates((x, y) in pair(), z in values()) {
        let d = [&x, &y].iter().find(|v| v.sqrt_d_exp() == 1).map_or(z.d(), |v| v.d());
        let z = ExactValue::new(z.coeff().clone(), z.pi_exp(), z.sqrt_d_exp(), if z.sqrt_d_exp() == 1 { d } else { 1 }).unwrap();
        let left = x.mul(&y).unwrap().mul(&z).unwrap();
        let right = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn division_undoes_multiplication((x, y) in pair()) {
        prop_assume!(!y.is_zero());
        prop_assert_eq!(x.mul(&y).unwrap().div(&y).unwrap(), x);
    }

    #[test]
    fn canonical_form_and_round_trip(x in values()) {
        if x.is_zero() {
            prop_assert_eq!(x.pi_exp(), 0);
            prop_assert_eq!(x.sqrt_d_exp(), 0);
        }
        if x.sqrt_d_exp() == 0 {
            prop_assert_eq!(x.d(), 1);
        }
        prop_assert!(x.sqrt_d_exp() <= 1);
        let back: ExactValue = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn decimal_respects_products_at_30_digits((x, y) in pair()) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = x.mul(&y).unwrap();
        let direct = xy.to_decimal(30);
        let via_factors = (&x.to_decimal(40) * &y.to_decimal(40)).round_to(30);
        prop_assert!(
            ulp_distance(&direct, &via_factors) <= BigUint::from(1u32),
            "{} vs {}", direct, via_factors
        );
        prop_assert_eq!(direct.precision(), 30);
    }
}
